// Builds a refined n-gon, writes it in the text mesh format, reads it back,
// and dumps the boundary mass matrix as CSV.
//
// cargo run --example mesh_io

use tracelab::fem::{
    assemble, build_mesh, parse_matrix_csv, parse_mesh, write_matrix_csv, write_mesh, DomainKind,
    DomainSpec,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mesh = build_mesh(DomainSpec::new(DomainKind::NGon(6), 1))?;
    let text = write_mesh(&mesh);
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("...");
    let back = parse_mesh(&text)?;
    if back != mesh {
        return Err("mesh round trip changed the mesh".into());
    }
    println!(
        "{} vertices, {} triangles, area {:.6}, perimeter {:.6}",
        mesh.n_vertices(),
        mesh.triangles.len(),
        mesh.area(),
        mesh.perimeter()
    );

    let mats = assemble(&mesh)?;
    let mut buf = Vec::new();
    write_matrix_csv(&mats.boundary_mass, &mut buf)?;
    let csv = String::from_utf8(buf)?;
    if parse_matrix_csv(&csv)? != mats.boundary_mass {
        return Err("matrix CSV round trip changed the matrix".into());
    }
    println!("{}", csv.lines().next().unwrap_or(""));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}

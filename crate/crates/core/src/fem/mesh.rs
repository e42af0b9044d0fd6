use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Polygon family plus refinement level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainKind {
    /// [0,1]²
    Square,
    /// [0,1]² ∖ [0.5,1]²
    LShape,
    /// Regular polygon inscribed in the unit circle.
    NGon(usize),
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Square => write!(f, "square"),
            DomainKind::LShape => write!(f, "lshape"),
            DomainKind::NGon(n) => write!(f, "ngon:{n}"),
        }
    }
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "square" => Ok(DomainKind::Square),
            "lshape" => Ok(DomainKind::LShape),
            other => {
                let sides = other
                    .strip_prefix("ngon:")
                    .ok_or_else(|| Error::InvalidSpec(format!("unknown domain '{other}'")))?;
                let n: usize = sides
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad side count '{sides}'")))?;
                if n < 3 {
                    return Err(Error::InvalidSpec(format!("ngon needs at least 3 sides, got {n}")));
                }
                Ok(DomainKind::NGon(n))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub refine: usize,
}

impl DomainSpec {
    pub fn new(kind: DomainKind, refine: usize) -> Self {
        DomainSpec { kind, refine }
    }
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/r{}", self.kind, self.refine)
    }
}

/// Conforming triangulation of a simply connected polygon.
///
/// Triangles are counterclockwise; `boundary_loop` walks the boundary once,
/// counterclockwise, without repeating the first vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_loop: Vec<usize>,
}

pub(crate) fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary_loop.len()
    }

    /// Vertices not on the boundary loop, ascending.
    pub fn interior_vertices(&self) -> Vec<usize> {
        let on_boundary: HashSet<usize> = self.boundary_loop.iter().copied().collect();
        (0..self.n_vertices()).filter(|v| !on_boundary.contains(v)).collect()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.boundary_loop.len();
        (0..n)
            .map(|i| {
                let p = self.vertices[self.boundary_loop[i]];
                let q = self.vertices[self.boundary_loop[(i + 1) % n]];
                ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
            })
            .sum()
    }

    /// Checks orientation, index ranges and that the loop is exactly the set of
    /// edges with one incident triangle, traversed as a single simple cycle.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_vertices();
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            let area = self.triangle_area(t);
            if area <= 1e-14 {
                return Err(Error::DegenerateTriangle { index: t, area });
            }
            for k in 0..3 {
                *edge_count.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default() += 1;
            }
        }
        if let Some((e, c)) = edge_count.iter().find(|(_, &c)| c > 2) {
            return Err(Error::InvalidMesh(format!("edge {e:?} shared by {c} triangles")));
        }
        let boundary_edges: HashSet<(usize, usize)> = edge_count
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&e, _)| e)
            .collect();

        let m = self.boundary_loop.len();
        if m < 3 {
            return Err(Error::InvalidMesh("boundary loop has fewer than 3 vertices".into()));
        }
        let distinct: HashSet<usize> = self.boundary_loop.iter().copied().collect();
        if distinct.len() != m {
            return Err(Error::InvalidMesh("boundary loop repeats a vertex".into()));
        }
        let loop_edges: HashSet<(usize, usize)> = (0..m)
            .map(|i| edge_key(self.boundary_loop[i], self.boundary_loop[(i + 1) % m]))
            .collect();
        if loop_edges != boundary_edges {
            return Err(Error::InvalidMesh(
                "boundary loop does not match the edges with one incident triangle".into(),
            ));
        }
        Ok(())
    }

    /// Splits every triangle into four through its edge midpoints.
    ///
    /// With `project_to_circle`, midpoints of boundary edges are pushed radially
    /// onto the unit circle.
    pub fn quadrisect(&self, project_to_circle: bool) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let m = self.boundary_loop.len();
        let boundary: HashSet<(usize, usize)> = (0..m)
            .map(|i| edge_key(self.boundary_loop[i], self.boundary_loop[(i + 1) % m]))
            .collect();

        let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
            let key = edge_key(a, b);
            *midpoint.entry(key).or_insert_with(|| {
                let p = vertices[a];
                let q = vertices[b];
                let mut x = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
                if project_to_circle && boundary.contains(&key) {
                    let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
                    x = [x[0] / r, x[1] / r];
                }
                vertices.push(x);
                vertices.len() - 1
            })
        };

        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            triangles.push([a, ab, ca]);
            triangles.push([ab, b, bc]);
            triangles.push([ca, bc, c]);
            triangles.push([ab, bc, ca]);
        }
        let mut boundary_loop = Vec::with_capacity(2 * m);
        for i in 0..m {
            let a = self.boundary_loop[i];
            let b = self.boundary_loop[(i + 1) % m];
            boundary_loop.push(a);
            boundary_loop.push(mid(a, b, &mut vertices));
        }
        Mesh {
            vertices,
            triangles,
            boundary_loop,
        }
    }
}

/// Squares of side `h` with lower-left corners at `origins`, each fanned from its center.
fn fan_squares(corners: &[[f64; 2]], origins: &[[f64; 2]], h: f64, boundary: &[[f64; 2]]) -> Mesh {
    let mut vertices: Vec<[f64; 2]> = corners.to_vec();
    let find = |p: [f64; 2], vs: &[[f64; 2]]| {
        vs.iter()
            .position(|v| v[0] == p[0] && v[1] == p[1])
            .expect("corner listed")
    };
    let mut triangles = Vec::new();
    for o in origins {
        let ll = find(*o, &vertices);
        let lr = find([o[0] + h, o[1]], &vertices);
        let ur = find([o[0] + h, o[1] + h], &vertices);
        let ul = find([o[0], o[1] + h], &vertices);
        vertices.push([o[0] + 0.5 * h, o[1] + 0.5 * h]);
        let c = vertices.len() - 1;
        triangles.extend([[ll, lr, c], [lr, ur, c], [ur, ul, c], [ul, ll, c]]);
    }
    let boundary_loop = boundary.iter().map(|p| find(*p, &vertices)).collect();
    Mesh {
        vertices,
        triangles,
        boundary_loop,
    }
}

fn base_mesh(kind: DomainKind) -> Mesh {
    match kind {
        DomainKind::Square => {
            let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
            fan_squares(&corners, &[[0.0, 0.0]], 1.0, &corners)
        }
        DomainKind::LShape => {
            let corners = [
                [0.0, 0.0],
                [0.5, 0.0],
                [1.0, 0.0],
                [1.0, 0.5],
                [0.5, 0.5],
                [0.5, 1.0],
                [0.0, 1.0],
                [0.0, 0.5],
            ];
            fan_squares(&corners, &[[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]], 0.5, &corners)
        }
        DomainKind::NGon(n) => {
            let mut vertices = vec![[0.0, 0.0]];
            for k in 0..n {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                vertices.push([theta.cos(), theta.sin()]);
            }
            let triangles = (0..n).map(|k| [0, 1 + k, 1 + (k + 1) % n]).collect();
            Mesh {
                vertices,
                triangles,
                boundary_loop: (1..=n).collect(),
            }
        }
    }
}

/// Base triangulation of the domain followed by `refine` quadrisections.
///
/// Square and L-shape start from center-fanned squares; the n-gon starts from
/// a fan around the origin and re-projects new boundary vertices to the circle.
pub fn build_mesh(spec: DomainSpec) -> Result<Mesh> {
    if let DomainKind::NGon(n) = spec.kind {
        if n < 3 {
            return Err(Error::InvalidSpec(format!("ngon needs at least 3 sides, got {n}")));
        }
    }
    let project = matches!(spec.kind, DomainKind::NGon(_));
    let mut mesh = base_mesh(spec.kind);
    for _ in 0..spec.refine {
        mesh = mesh.quadrisect(project);
    }
    mesh.validate()?;
    Ok(mesh)
}

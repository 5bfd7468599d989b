//! Small embedded complexes used by tests, examples and the CLI self-checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::complex::{SimplicialComplex, VertexId};
use crate::geometry::Embedding;

/// A complex with a simplex-wise embedding.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub name: &'static str,
    pub complex: SimplicialComplex,
    pub embedding: Embedding,
}

fn mesh<S: AsRef<[VertexId]>>(
    name: &'static str,
    simplices: impl IntoIterator<Item = S>,
    coords: impl IntoIterator<Item = (VertexId, Vec<f64>)>,
) -> Mesh {
    let complex = SimplicialComplex::build(simplices).expect("corpus simplices are well formed");
    let coords: BTreeMap<VertexId, Vec<f64>> = coords.into_iter().collect();
    let embedding = Embedding::for_complex(&complex, coords).expect("corpus embedding is simplex-wise");
    Mesh {
        name,
        complex,
        embedding,
    }
}

/// Triangles among `points` whose three sides all have length `edge`.
fn equilateral_faces(points: &[Vec<f64>], edge: f64) -> Vec<[VertexId; 3]> {
    let d = |a: usize, b: usize| {
        points[a]
            .iter()
            .zip(&points[b])
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    let close = |a, b| (d(a, b) - edge).abs() < 1e-9;
    let n = points.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if close(a, b) && close(a, c) && close(b, c) {
                    out.push([a as VertexId + 1, b as VertexId + 1, c as VertexId + 1]);
                }
            }
        }
    }
    out
}

fn numbered(points: Vec<Vec<f64>>) -> Vec<(VertexId, Vec<f64>)> {
    points
        .into_iter()
        .enumerate()
        .map(|(i, p)| (i as VertexId + 1, p))
        .collect()
}

/// Regular tetrahedron boundary, vertices 1..=4.
pub fn tetrahedron() -> Mesh {
    mesh(
        "tetrahedron",
        [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]],
        numbered(vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, -1.0],
            vec![-1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0],
        ]),
    )
}

/// Regular octahedron on `±e_i`; vertices 1..=6 are `+x, -x, +y, -y, +z, -z`.
pub fn octahedron() -> Mesh {
    let mut tris = Vec::new();
    for a in [1, 2] {
        for b in [3, 4] {
            for c in [5, 6] {
                tris.push([a, b, c]);
            }
        }
    }
    let mut pts = Vec::new();
    for i in 0..3 {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; 3];
            p[i] = s;
            pts.push(p);
        }
    }
    mesh("octahedron", tris, numbered(pts))
}

/// Regular icosahedron with unit-ratio coordinates `(0, ±1, ±φ)` and cyclic
/// permutations; vertices 1..=12.
pub fn icosahedron() -> Mesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [phi, -phi] {
            pts.push(vec![0.0, s1, s2]);
            pts.push(vec![s1, s2, 0.0]);
            pts.push(vec![s2, 0.0, s1]);
        }
    }
    let tris = equilateral_faces(&pts, 2.0);
    mesh("icosahedron", tris, numbered(pts))
}

/// Triangles of the 7-vertex torus on vertices `0..7`.
pub fn torus7_triangles() -> Vec<[VertexId; 3]> {
    let mut out = Vec::new();
    for i in 0..7u32 {
        out.push([i, (i + 1) % 7, (i + 3) % 7]);
        out.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    out
}

fn torus_point(s: f64, t: f64) -> Vec<f64> {
    let (big, small) = (2.0, 1.0);
    let (u, v) = (2.0 * PI * s, 2.0 * PI * t);
    vec![
        (big + small * v.cos()) * u.cos(),
        (big + small * v.cos()) * u.sin(),
        small * v.sin(),
    ]
}

/// The 7-vertex (Császár) torus, vertices placed on a round torus in R^3.
///
/// Vertex `i` sits at torus parameters `i * (3/7, 2/7)`, the image of the
/// generating lattice point under the covering map; the realization is
/// simplex-wise but not injective.
pub fn csaszar_torus() -> Mesh {
    mesh(
        "csaszar-torus",
        torus7_triangles(),
        (0..7u32).map(|i| {
            let k = i as f64;
            (i, torus_point((3.0 * k / 7.0).fract(), (2.0 * k / 7.0).fract()))
        }),
    )
}

/// Connected sum of two 7-vertex tori along triangle `[0, 1, 3]`: 11 vertices,
/// 39 edges, 26 triangles, genus 2.
pub fn genus_two() -> Mesh {
    let removed = [0u32, 1, 3];
    let relabel = |v: u32| if removed.contains(&v) { v } else { v + 7 };
    let mut tris = Vec::new();
    for t in torus7_triangles() {
        let mut s = t;
        s.sort_unstable();
        if s == removed {
            continue;
        }
        tris.push(t);
        tris.push(t.map(relabel));
    }
    let mut coords = Vec::new();
    for i in 0..7u32 {
        let k = i as f64;
        let mut p = torus_point((3.0 * k / 7.0).fract(), (2.0 * k / 7.0).fract());
        p[0] -= 3.5;
        coords.push((i, p));
        if !removed.contains(&i) {
            let mut q = torus_point((3.0 * k / 7.0 + 0.05).fract(), (2.0 * k / 7.0 + 0.11).fract());
            q[0] += 3.5;
            coords.push((i + 7, q));
        }
    }
    mesh("genus-two", tris, coords)
}

/// Path `1 - 2 - ... - n` on a zigzag in the plane.
pub fn path(n: u32) -> Mesh {
    mesh(
        "path",
        (1..n).map(|i| [i, i + 1]),
        (1..=n).map(|i| (i, vec![i as f64, if i % 2 == 0 { 0.7 } else { 0.0 }])),
    )
}

/// Solid octahedron as a 3-ball: center 0 coned over the octahedron boundary.
pub fn octahedral_ball() -> Mesh {
    let mut tets = Vec::new();
    for a in [1, 2] {
        for b in [3, 4] {
            for c in [5, 6] {
                tets.push([0, a, b, c]);
            }
        }
    }
    let mut pts = numbered(octahedron().embedding.coords().map(|(_, x)| x.to_vec()).collect());
    pts.push((0, vec![0.0, 0.0, 0.0]));
    mesh("octahedral-ball", tets, pts)
}

/// Two equilateral triangles `[1,2,3]` and `[2,3,4]` in the plane.
pub fn two_triangles() -> Mesh {
    let h = 3f64.sqrt() / 2.0;
    mesh(
        "two-triangles",
        [[1, 2, 3], [2, 3, 4]],
        [
            (1, vec![-h, 0.0]),
            (2, vec![0.0, 0.5]),
            (3, vec![0.0, -0.5]),
            (4, vec![h, 0.0]),
        ],
    )
}

/// `k` equilateral triangles sharing the spine `[1, 2]`, fanned around it in
/// R^3. The leaves are `3..3 + k`.
pub fn book(k: u32) -> Mesh {
    let h = 3f64.sqrt() / 2.0;
    let mut coords = vec![(1, vec![0.0, 0.0, -0.5]), (2, vec![0.0, 0.0, 0.5])];
    for i in 0..k {
        let a = 2.0 * PI * i as f64 / k as f64 + 0.3;
        coords.push((3 + i, vec![h * a.cos(), h * a.sin(), 0.0]));
    }
    mesh("book", (0..k).map(|i| [1, 2, 3 + i]), coords)
}

/// Single edge `[1, 2]`.
pub fn single_edge() -> Mesh {
    mesh("single-edge", [[1, 2]], [(1, vec![0.0, 0.0]), (2, vec![1.0, 0.3])])
}

/// Boundary of a triangle.
pub fn hollow_triangle() -> Mesh {
    mesh(
        "hollow-triangle",
        [[1, 2], [2, 3], [1, 3]],
        [(1, vec![0.0, 0.0]), (2, vec![1.0, 0.0]), (3, vec![0.2, 0.9])],
    )
}

/// Flat fan of six triangles around hub 0 on an irregular hexagon.
pub fn hexagon_fan() -> Mesh {
    let mut coords = vec![(0, vec![0.0, 0.0, 0.0])];
    for i in 0..6u32 {
        let a = PI * i as f64 / 3.0 + 0.1 * (i % 2) as f64;
        let r = 1.0 + 0.15 * i as f64;
        coords.push((i + 1, vec![r * a.cos(), r * a.sin(), 0.0]));
    }
    mesh("hexagon-fan", (0..6u32).map(|i| [0, i + 1, (i + 1) % 6 + 1]), coords)
}

/// The three faces of a unit cube at the origin, each split along its
/// diagonal through vertex 0.
pub fn cube_corner() -> Mesh {
    mesh(
        "cube-corner",
        [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 6], [0, 6, 1]],
        [
            (0, vec![0.0, 0.0, 0.0]),
            (1, vec![1.0, 0.0, 0.0]),
            (2, vec![1.0, 1.0, 0.0]),
            (3, vec![0.0, 1.0, 0.0]),
            (4, vec![0.0, 1.0, 1.0]),
            (5, vec![0.0, 0.0, 1.0]),
            (6, vec![1.0, 0.0, 1.0]),
        ],
    )
}

/// Embedded closed surfaces of the corpus.
pub fn closed_surfaces() -> Vec<Mesh> {
    vec![tetrahedron(), octahedron(), icosahedron(), csaszar_torus(), genus_two()]
}

/// Every embedded complex of the corpus.
pub fn all() -> Vec<Mesh> {
    let mut out = closed_surfaces();
    out.extend([
        path(5),
        octahedral_ball(),
        two_triangles(),
        book(3),
        single_edge(),
        hollow_triangle(),
        hexagon_fan(),
        cube_corner(),
    ]);
    out
}

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Vector3};
use serde::Serialize;

use super::{inward_normals, DirectionSampler, Embedding};
use crate::complex::{Simplex, VertexId};
use crate::error::{Error, Result};

/// An angle together with its value normalized by the area of the unit
/// sphere it lives on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolidAngle {
    pub raw: f64,
    pub normalized: f64,
}

/// Monte-Carlo estimate of a proportion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    fn from_hits(hits: usize, samples: usize) -> Self {
        let p = hits as f64 / samples as f64;
        McEstimate {
            estimate: p,
            stderr: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }

    /// Sample mean with standard error `sd / sqrt(n)`.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        McEstimate {
            estimate: mean,
            stderr: (var / n).sqrt(),
            samples: values.len(),
        }
    }

    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.estimate - target).abs() <= k * self.stderr + 1e-12
    }
}

/// Area of the unit sphere `S^m` (`S^0` counts two points).
fn sphere_area(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        2 => 4.0 * PI,
        _ => {
            // |S^m| = 2 pi^{(m+1)/2} / Gamma((m+1)/2), by recursion |S^m| = 2pi/(m-1) |S^{m-2}|.
            let mut a = if m.is_multiple_of(2) { 4.0 * PI } else { 2.0 * PI };
            let mut k = if m.is_multiple_of(2) { 2 } else { 1 };
            while k < m {
                k += 2;
                a *= 2.0 * PI / (k as f64 - 1.0);
            }
            a
        }
    }
}

/// Angle between two nonzero vectors, stable near 0 and pi.
fn angle_between(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let ua = a / a.norm();
    let ub = b / b.norm();
    2.0 * (&ua - &ub).norm().atan2((&ua + &ub).norm())
}

fn require_vertex_of(s: &Simplex, v: VertexId) -> Result<()> {
    if s.contains_vertex(v) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("vertex {v} is not a vertex of {s}")))
    }
}

/// Interior angle of a triangle at one of its vertices, in radians.
pub fn interior_angle(e: &Embedding, triangle: &Simplex, v: VertexId) -> Result<f64> {
    if triangle.dim() != 2 {
        return Err(Error::Precondition(format!("{triangle} is not a triangle")));
    }
    require_vertex_of(triangle, v)?;
    e.frame(triangle)?;
    let p = e.point(v)?;
    let mut others = triangle.vertices().iter().filter(|&&u| u != v);
    let a = e.point(*others.next().unwrap())? - p;
    let b = e.point(*others.next().unwrap())? - p;
    Ok(angle_between(&a, &b))
}

/// Dihedral angle of a tetrahedron along one of its edges, in radians.
pub fn dihedral_angle(e: &Embedding, tet: &Simplex, edge: &Simplex) -> Result<f64> {
    if tet.dim() != 3 || edge.dim() != 1 || !edge.is_face_of(tet) {
        return Err(Error::Precondition(format!(
            "{edge} is not an edge of tetrahedron {tet}"
        )));
    }
    e.frame(tet)?;
    let p = e.point(edge.vertices()[0])?;
    let q = e.point(edge.vertices()[1])?;
    let u = (q - p).normalize();
    let perp = |w: &DVector<f64>| w - &u * u.dot(w);
    let rest = tet.difference(edge);
    let a = perp(&(e.point(rest[0])? - p));
    let b = perp(&(e.point(rest[1])? - p));
    Ok(angle_between(&a, &b))
}

/// Solid angle subtended at the origin by the cone over three vectors in R^3.
fn trihedral_solid_angle(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let num = a.dot(&b.cross(c)).abs();
    let den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    2.0 * num.atan2(den)
}

fn local3(v: &DVector<f64>) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

/// Solid angle in `sigma` along its face `eta`: the measure of the set of
/// unit normals to `eta` (inside the span of `sigma`) pointing into `sigma`.
///
/// Exact for `dim sigma <= 3`.
pub fn solid_angle(e: &Embedding, sigma: &Simplex, eta: &Simplex) -> Result<SolidAngle> {
    if !eta.is_face_of(sigma) {
        return Err(Error::Precondition(format!("{eta} is not a face of {sigma}")));
    }
    let n = sigma.dim();
    let codim = n - eta.dim();
    if codim >= 2 && n > 3 {
        return Err(Error::DimensionCap(n));
    }
    e.frame(sigma)?;
    let raw = match codim {
        0 => 1.0,
        1 => 1.0,
        2 if n == 2 => interior_angle(e, sigma, eta.vertices()[0])?,
        2 => dihedral_angle(e, sigma, eta)?,
        _ => {
            let v = eta.vertices()[0];
            let frame = e.frame(sigma)?;
            let p = e.point(v)?;
            let g: Vec<Vector3<f64>> = sigma
                .vertices()
                .iter()
                .filter(|&&u| u != v)
                .map(|&u| Ok(local3(&frame.local_vector(&(e.point(u)? - p)))))
                .collect::<Result<_>>()?;
            trihedral_solid_angle(&g[0], &g[1], &g[2])
        }
    };
    let normalized = if codim == 0 { 1.0 } else { raw / sphere_area(codim - 1) };
    Ok(SolidAngle { raw, normalized })
}

/// Monte-Carlo version of [`solid_angle`], valid in any dimension.
pub fn solid_angle_mc(e: &Embedding, sigma: &Simplex, eta: &Simplex, sampler: &DirectionSampler) -> Result<McEstimate> {
    if !eta.is_face_of(sigma) {
        return Err(Error::Precondition(format!("{eta} is not a face of {sigma}")));
    }
    let n = sigma.dim();
    let m = n - eta.dim();
    if m == 0 {
        return Ok(McEstimate {
            estimate: 1.0,
            stderr: 0.0,
            samples: 0,
        });
    }
    let frame = e.frame(sigma)?;
    let vs = sigma.vertices();
    let p0 = e.point(vs[0])?;
    let local: Vec<DVector<f64>> = vs
        .iter()
        .map(|&u| Ok(frame.local_vector(&(e.point(u)? - p0))))
        .collect::<Result<_>>()?;
    let edges = DMatrix::from_fn(n, n, |r, c| local[c + 1][r]);
    let lu = edges.lu();

    // Orthonormal basis of the complement of eta's span, in sigma's local coordinates.
    let ev = eta.vertices();
    let pos = |u: VertexId| vs.iter().position(|&w| w == u).unwrap();
    let mut eta_basis: Vec<DVector<f64>> = Vec::new();
    for &u in &ev[1..] {
        let mut r = &local[pos(u)] - &local[pos(ev[0])];
        for b in &eta_basis {
            r -= b * b.dot(&r);
        }
        eta_basis.push(r.normalize());
    }
    let mut comp: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        if comp.len() == m {
            break;
        }
        let mut r = DVector::zeros(n);
        r[i] = 1.0;
        for _ in 0..2 {
            for b in eta_basis.iter().chain(&comp) {
                r -= b * b.dot(&r);
            }
        }
        if r.norm() > 1e-6 {
            comp.push(r.normalize());
        }
    }
    let outside: Vec<usize> = (0..vs.len()).filter(|&i| !eta.contains_vertex(vs[i])).collect();
    let dirs = sampler.sample(m)?;
    let mut hits = 0usize;
    for d in &dirs {
        let mut w = DVector::zeros(n);
        for (b, x) in comp.iter().zip(d.as_vector().iter()) {
            w.axpy(*x, b, 1.0);
        }
        let tail = lu.solve(&w).ok_or_else(|| Error::DegenerateSimplex(sigma.clone()))?;
        let lambda = |i: usize| if i == 0 { -tail.sum() } else { tail[i - 1] };
        if outside.iter().all(|&i| lambda(i) > 0.0) {
            hits += 1;
        }
    }
    Ok(McEstimate::from_hits(hits, dirs.len()))
}

/// Normalized exterior angle of the cell `c` at its vertex `v`: the measure
/// of the normal cone of `c` at `v` inside the span of `c`, divided by the
/// area of the unit sphere of that span.
///
/// Exact for `dim c <= 3`.
pub fn exterior_angle(e: &Embedding, c: &Simplex, v: VertexId) -> Result<f64> {
    require_vertex_of(c, v)?;
    match c.dim() {
        0 => Ok(1.0),
        1 => {
            e.frame(c)?;
            Ok(0.5)
        }
        2 => Ok((PI - interior_angle(e, c, v)?) / (2.0 * PI)),
        3 => {
            let frame = e.frame(c)?;
            let normals = inward_normals(e, c)?;
            let gens: Vec<Vector3<f64>> = c
                .vertices()
                .iter()
                .zip(&normals)
                .filter(|(&u, _)| u != v)
                .map(|(_, n)| local3(&frame.local_vector(&(-n))))
                .collect();
            Ok(trihedral_solid_angle(&gens[0], &gens[1], &gens[2]) / (4.0 * PI))
        }
        k => Err(Error::DimensionCap(k)),
    }
}

/// Fraction of sampled directions in the span of `c` for which `v` is the
/// highest vertex of `c`; estimates [`exterior_angle`] in any dimension.
pub fn exterior_angle_mc(e: &Embedding, c: &Simplex, v: VertexId, sampler: &DirectionSampler) -> Result<McEstimate> {
    require_vertex_of(c, v)?;
    if c.dim() == 0 {
        return Ok(McEstimate {
            estimate: 1.0,
            stderr: 0.0,
            samples: 0,
        });
    }
    let frame = e.frame(c)?;
    let p = e.point(v)?;
    let rel: Vec<DVector<f64>> = c
        .vertices()
        .iter()
        .filter(|&&u| u != v)
        .map(|&u| Ok(frame.local_vector(&(e.point(u)? - p))))
        .collect::<Result<_>>()?;
    let dirs = sampler.sample(c.dim())?;
    let hits = dirs
        .iter()
        .filter(|d| rel.iter().all(|r| r.dot(d.as_vector()) < 0.0))
        .count();
    Ok(McEstimate::from_hits(hits, dirs.len()))
}

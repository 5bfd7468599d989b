//! Geometric realizations of complexes: coordinates, directions, height
//! functions and the degeneracy tests (generality, allowability) that gate the
//! Morse-theoretic index computations.
//!
//! All per-simplex computations go through a [`Frame`], an orthonormal basis of
//! the linear span parallel to the simplex, so results do not depend on the
//! ambient dimension.

mod angles;
mod sampling;

pub use angles::{
    dihedral_angle, exterior_angle, exterior_angle_mc, interior_angle, solid_angle, solid_angle_mc, McEstimate,
    SolidAngle,
};
pub use sampling::{DirectionSampler, MAX_CONSECUTIVE_REJECTIONS};

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Serialize, Serializer};

use crate::complex::{Simplex, SimplicialComplex, Subdivision, VertexId};
use crate::error::{Error, Result};

/// Relative residual below which a simplex's edge vectors count as dependent.
const AFFINE_REL_TOL: f64 = 1e-9;

/// Tolerances for the degeneracy tests.
///
/// The generality tolerance is relative to the embedding's bounding-box
/// diagonal; the allowability tolerance applies to dot products of unit
/// vectors and is therefore already scale free.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub general_rel: f64,
    pub allowable: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            general_rel: 1e-9,
            allowable: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn eps_general(&self, e: &Embedding) -> f64 {
        self.general_rel * e.bbox_diagonal().max(f64::MIN_POSITIVE)
    }
}

/// Vertex coordinates in `R^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    coords: BTreeMap<VertexId, DVector<f64>>,
    ambient_dim: usize,
    diag: f64,
}

impl Embedding {
    pub fn new(coords: BTreeMap<VertexId, Vec<f64>>) -> Result<Self> {
        let ambient_dim = coords
            .values()
            .next()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidEmbedding("no coordinates".into()))?;
        if ambient_dim == 0 {
            return Err(Error::InvalidEmbedding("ambient dimension must be positive".into()));
        }
        let mut out = BTreeMap::new();
        for (v, x) in coords {
            if x.len() != ambient_dim {
                return Err(Error::InvalidEmbedding(format!(
                    "vertex {v} has {} coordinates, expected {ambient_dim}",
                    x.len()
                )));
            }
            if x.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidEmbedding(format!(
                    "vertex {v} has a non-finite coordinate"
                )));
            }
            out.insert(v, DVector::from_vec(x));
        }
        let mut lo = vec![f64::INFINITY; ambient_dim];
        let mut hi = vec![f64::NEG_INFINITY; ambient_dim];
        for x in out.values() {
            for i in 0..ambient_dim {
                lo[i] = lo[i].min(x[i]);
                hi[i] = hi[i].max(x[i]);
            }
        }
        let diag = lo.iter().zip(&hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        Ok(Embedding {
            coords: out,
            ambient_dim,
            diag,
        })
    }

    /// Builds the embedding and checks it is simplex-wise for `c`.
    pub fn for_complex(c: &SimplicialComplex, coords: BTreeMap<VertexId, Vec<f64>>) -> Result<Self> {
        let e = Self::new(coords)?;
        e.check_simplexwise(c)?;
        Ok(e)
    }

    /// Every vertex has coordinates and every simplex has affinely independent
    /// vertex images. Injectivity is not required.
    pub fn check_simplexwise(&self, c: &SimplicialComplex) -> Result<()> {
        for v in c.vertices() {
            self.point(v)?;
        }
        for s in c.simplices().iter().filter(|s| s.dim() >= 1) {
            self.frame(s)?;
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn bbox_diagonal(&self) -> f64 {
        self.diag
    }

    pub fn point(&self, v: VertexId) -> Result<&DVector<f64>> {
        self.coords.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn coords(&self) -> impl Iterator<Item = (VertexId, &[f64])> + '_ {
        self.coords.iter().map(|(v, x)| (*v, x.as_slice()))
    }

    pub fn to_map(&self) -> BTreeMap<VertexId, Vec<f64>> {
        self.coords.iter().map(|(v, x)| (*v, x.as_slice().to_vec())).collect()
    }

    /// Orthonormal frame of the affine span of `s`, anchored at its first vertex.
    pub fn frame(&self, s: &Simplex) -> Result<Frame> {
        let vs = s.vertices();
        let origin = self.point(vs[0])?.clone();
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(vs.len() - 1);
        for &v in &vs[1..] {
            let edge = self.point(v)? - &origin;
            let scale = edge.norm();
            let mut r = edge;
            // Two passes of modified Gram-Schmidt for stability.
            for _ in 0..2 {
                for b in &basis {
                    let c = r.dot(b);
                    r.axpy(-c, b, 1.0);
                }
            }
            let len = r.norm();
            if !(scale > 0.0) || len <= AFFINE_REL_TOL * scale {
                return Err(Error::DegenerateSimplex(s.clone()));
            }
            basis.push(r / len);
        }
        Ok(Frame { origin, basis })
    }

    /// Places each subdivision vertex at the barycenter of its simplex.
    pub fn subdivided(&self, sd: &Subdivision) -> Result<Embedding> {
        let mut coords = BTreeMap::new();
        for (s, &b) in &sd.barycenter {
            let mut acc = DVector::zeros(self.ambient_dim);
            for &v in s.vertices() {
                acc += self.point(v)?;
            }
            acc /= s.vertices().len() as f64;
            coords.insert(b, acc.as_slice().to_vec());
        }
        Embedding::new(coords)
    }
}

/// Orthonormal basis of the linear span parallel to a simplex.
#[derive(Clone, Debug)]
pub struct Frame {
    pub origin: DVector<f64>,
    pub basis: Vec<DVector<f64>>,
}

impl Frame {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the vector `v` in this frame's basis.
    pub fn local_vector(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_iterator(self.basis.len(), self.basis.iter().map(|b| b.dot(v)))
    }

    pub fn local_point(&self, x: &DVector<f64>) -> DVector<f64> {
        self.local_vector(&(x - &self.origin))
    }

    /// Orthogonal projection of `v` onto the span.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for b in &self.basis {
            out.axpy(b.dot(v), b, 1.0);
        }
        out
    }
}

/// A unit vector in `R^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction(DVector<f64>);

impl Direction {
    /// Normalizes `v`; fails on a zero or non-finite vector.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(v))
    }

    pub fn from_vector(v: DVector<f64>) -> Result<Self> {
        let n = v.norm();
        if v.is_empty() || !n.is_finite() || n == 0.0 {
            return Err(Error::InvalidEmbedding(
                "direction must be a finite nonzero vector".into(),
            ));
        }
        Ok(Direction(v / n))
    }

    pub fn axis(ambient_dim: usize, i: usize) -> Self {
        let mut v = DVector::zeros(ambient_dim);
        v[i] = 1.0;
        Direction(v)
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn negated(&self) -> Direction {
        Direction(-&self.0)
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

fn check_dims(e: &Embedding, d: &Direction) -> Result<()> {
    if d.dim() != e.ambient_dim() {
        return Err(Error::InvalidEmbedding(format!(
            "direction has dimension {}, embedding has {}",
            d.dim(),
            e.ambient_dim()
        )));
    }
    Ok(())
}

/// Projection of the vertex onto the line spanned by `d`.
pub fn height(e: &Embedding, d: &Direction, v: VertexId) -> Result<f64> {
    check_dims(e, d)?;
    Ok(e.point(v)?.dot(d.as_vector()))
}

/// Heights of every vertex of `c`.
pub fn height_field(c: &SimplicialComplex, e: &Embedding, d: &Direction) -> Result<BTreeMap<VertexId, f64>> {
    c.vertices().map(|v| Ok((v, height(e, d, v)?))).collect()
}

/// First edge whose endpoints have heights within `eps_general`, if any.
pub fn first_tied_edge(
    c: &SimplicialComplex,
    e: &Embedding,
    d: &Direction,
    tol: &Tolerances,
) -> Result<Option<Simplex>> {
    let eps = tol.eps_general(e);
    for edge in c.edges() {
        let vs = edge.vertices();
        if (height(e, d, vs[0])? - height(e, d, vs[1])?).abs() <= eps {
            return Ok(Some(edge.clone()));
        }
    }
    Ok(None)
}

/// `true` iff the endpoints of every edge get distinct heights.
pub fn is_general(c: &SimplicialComplex, e: &Embedding, d: &Direction, tol: &Tolerances) -> bool {
    matches!(first_tied_edge(c, e, d, tol), Ok(None))
}

/// Unit inward normals of the facets of `sigma` inside its span, in the order
/// of [`Simplex::facets`] (the `i`-th normal belongs to the facet opposite
/// vertex `i`).
pub fn inward_normals(e: &Embedding, sigma: &Simplex) -> Result<Vec<DVector<f64>>> {
    let vs = sigma.vertices();
    if vs.len() < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(vs.len());
    for (i, facet) in sigma.facets().enumerate() {
        let apex = e.point(vs[i])?;
        let base = e.point(facet.vertices()[0])?;
        let mut n = apex - base;
        if facet.dim() >= 1 {
            let fr = e.frame(&facet)?;
            n -= fr.project(&n);
        }
        let len = n.norm();
        if !(len > 0.0) {
            return Err(Error::DegenerateSimplex(sigma.clone()));
        }
        out.push(n / len);
    }
    Ok(out)
}

/// Allowability of `d` with respect to a pure complex: its projection onto
/// each top simplex's span is nonzero and lies in no facet's span.
pub fn is_allowable(c: &SimplicialComplex, e: &Embedding, d: &Direction, tol: &Tolerances) -> Result<bool> {
    check_dims(e, d)?;
    let n = c.dim().ok_or_else(|| Error::Structure("empty complex".into()))?;
    if !c.is_pure() {
        return Err(Error::Structure("allowability requires a pure complex".into()));
    }
    for sigma in c.simplices_of_dim(n) {
        if !allowable_for(e, sigma, d, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn allowable_for(e: &Embedding, sigma: &Simplex, d: &Direction, tol: &Tolerances) -> Result<bool> {
    if sigma.dim() == 0 {
        return Ok(true);
    }
    let frame = e.frame(sigma)?;
    if frame.project(d.as_vector()).norm() <= tol.allowable {
        return Ok(false);
    }
    for n in inward_normals(e, sigma)? {
        if n.dot(d.as_vector()).abs() <= tol.allowable {
            return Ok(false);
        }
    }
    Ok(true)
}

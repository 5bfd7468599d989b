//! Polyhedral Morse theory of height functions: vertex indices, the critical
//! point theorem, and the angle-defect, combinatorial and intrinsic vertex
//! curvatures.
//!
//! Index computations take a [`HeightOrder`], which can come from a direction
//! in an embedding or from any externally supplied vertex field (for example
//! heights of a map composed with a linear functional).

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_rational::Rational64;
use serde::Serialize;

use crate::complex::{sign, GraphShape, Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::geometry::{
    exterior_angle, height_field, interior_angle, Direction, DirectionSampler, Embedding, McEstimate, Tolerances,
};

pub type VertexField = BTreeMap<VertexId, f64>;

/// Strict vertex order induced by heights.
///
/// Without jitter, construction fails if some edge has tied endpoint heights.
/// With jitter, ties are broken by vertex id (an infinitesimal perturbation
/// favouring larger ids).
#[derive(Clone, Debug)]
pub struct HeightOrder {
    heights: HashMap<VertexId, f64>,
    jitter: bool,
}

impl HeightOrder {
    pub fn from_field(c: &SimplicialComplex, field: &VertexField, eps: f64, jitter: bool) -> Result<Self> {
        let mut heights = HashMap::with_capacity(field.len());
        for v in c.vertices() {
            let h = *field.get(&v).ok_or(Error::UnknownVertex(v))?;
            if !h.is_finite() {
                return Err(Error::InvalidEmbedding(format!("vertex {v} has a non-finite height")));
            }
            heights.insert(v, h);
        }
        if !jitter {
            for e in c.edges() {
                let vs = e.vertices();
                if (heights[&vs[0]] - heights[&vs[1]]).abs() <= eps {
                    return Err(Error::DegenerateDirection(e.clone()));
                }
            }
        }
        Ok(HeightOrder { heights, jitter })
    }

    pub fn from_direction(
        c: &SimplicialComplex,
        e: &Embedding,
        d: &Direction,
        tol: &Tolerances,
        jitter: bool,
    ) -> Result<Self> {
        Self::from_field(c, &height_field(c, e, d)?, tol.eps_general(e), jitter)
    }

    pub fn height(&self, v: VertexId) -> f64 {
        self.heights[&v]
    }

    /// `a` is strictly above `b`.
    pub fn above(&self, a: VertexId, b: VertexId) -> bool {
        let (ha, hb) = (self.heights[&a], self.heights[&b]);
        ha > hb || (self.jitter && ha == hb && a > b)
    }

    /// `v` is the highest vertex of `cell`.
    pub fn is_top(&self, cell: &Simplex, v: VertexId) -> bool {
        cell.contains_vertex(v) && cell.vertices().iter().all(|&u| u == v || self.above(v, u))
    }
}

/// 1 iff `v` is the highest vertex of `cell`.
pub fn characteristic(order: &HeightOrder, cell: &Simplex, v: VertexId) -> u8 {
    order.is_top(cell, v) as u8
}

/// 1 iff `cj` is a face of `ck` and every vertex of `cj` lies above every
/// vertex of `ck` outside it. Equal cells give 1; for a vertex `cj` this is
/// [`characteristic`].
pub fn generalized_indicator(order: &HeightOrder, ck: &Simplex, cj: &Simplex) -> u8 {
    if !cj.is_face_of(ck) {
        return 0;
    }
    let rest = ck.difference(cj);
    cj.vertices().iter().all(|&a| rest.iter().all(|&b| order.above(a, b))) as u8
}

/// Alternating count of the cells containing `v` that have `v` as their top vertex.
pub fn banchoff_index(c: &SimplicialComplex, order: &HeightOrder, v: VertexId) -> Result<i64> {
    let id = c.require_vertex(v)?;
    Ok(c.cofaces_of(id)
        .into_iter()
        .map(|j| c.simplex(j))
        .filter(|s| order.is_top(s, v))
        .map(|s| sign(s.dim()))
        .sum())
}

fn require_closed_surface(c: &SimplicialComplex) -> Result<()> {
    if c.is_closed_surface() {
        Ok(())
    } else {
        Err(Error::Precondition("complex is not a closed surface".into()))
    }
}

/// `1 - m/2` where `m` counts the triangles at `v` in which `v` is the middle vertex.
pub fn surface_index(c: &SimplicialComplex, order: &HeightOrder, v: VertexId) -> Result<Rational64> {
    require_closed_surface(c)?;
    let id = c.require_vertex(v)?;
    let middle = c
        .cofaces_of(id)
        .into_iter()
        .map(|j| c.simplex(j))
        .filter(|t| t.dim() == 2)
        .filter(|t| {
            let others = t.difference(&Simplex::vertex(v));
            order.above(v, others[0]) != order.above(v, others[1])
        })
        .count() as i64;
    Ok(Rational64::from_integer(1) - Rational64::new(middle, 2))
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub direction: Option<Direction>,
    #[serde(serialize_with = "crate::serde_rational::serialize_map")]
    pub per_vertex_index: BTreeMap<VertexId, Rational64>,
    /// Middle-vertex formula, on closed surfaces only.
    #[serde(serialize_with = "crate::serde_rational::serialize_opt_map")]
    pub surface_index: Option<BTreeMap<VertexId, Rational64>>,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub sum: Rational64,
    pub euler: i64,
    pub holds: bool,
    /// Both index formulas agree at every vertex (closed surfaces only).
    pub surface_agrees: Option<bool>,
}

/// Indices of every vertex for one height order, checked against χ.
pub fn index_report(c: &SimplicialComplex, order: &HeightOrder, direction: Option<Direction>) -> Result<IndexReport> {
    let mut per_vertex_index = BTreeMap::new();
    for v in c.vertices() {
        per_vertex_index.insert(v, Rational64::from_integer(banchoff_index(c, order, v)?));
    }
    let surface = if c.is_closed_surface() {
        let mut m = BTreeMap::new();
        for v in c.vertices() {
            m.insert(v, surface_index(c, order, v)?);
        }
        Some(m)
    } else {
        None
    };
    let sum: Rational64 = per_vertex_index.values().sum();
    let euler = c.euler_characteristic();
    let surface_agrees = surface.as_ref().map(|s| *s == per_vertex_index);
    Ok(IndexReport {
        direction,
        per_vertex_index,
        surface_index: surface,
        sum,
        euler,
        holds: sum == Rational64::from_integer(euler) && surface_agrees != Some(false),
        surface_agrees,
    })
}

pub fn critical_point_theorem(
    c: &SimplicialComplex,
    e: &Embedding,
    d: &Direction,
    tol: &Tolerances,
) -> Result<IndexReport> {
    let order = HeightOrder::from_direction(c, e, d, tol, false)?;
    index_report(c, &order, Some(d.clone()))
}

/// Whether `v` is interior (link a cycle) or on the boundary (link a path) of
/// a pure 2-dimensional neighbourhood.
fn surface_vertex_is_interior(c: &SimplicialComplex, v: VertexId) -> Result<bool> {
    let id = c.require_vertex(v)?;
    for j in c.cofaces_of(id) {
        if c.cofacets_of(j).is_empty() && c.simplex(j).dim() != 2 {
            return Err(Error::Precondition(format!(
                "vertex {v} lies on the non-triangle top cell {}",
                c.simplex(j)
            )));
        }
    }
    match c.link(&Simplex::vertex(v))?.graph_shape() {
        GraphShape::Cycle => Ok(true),
        GraphShape::Path => Ok(false),
        _ => Err(Error::Precondition(format!(
            "vertex {v} has no disk or half-disk neighbourhood"
        ))),
    }
}

/// Sum of the interior angles at `v` over the triangles containing it.
pub fn angle_sum(c: &SimplicialComplex, e: &Embedding, v: VertexId) -> Result<f64> {
    let id = c.require_vertex(v)?;
    c.cofaces_of(id)
        .into_iter()
        .map(|j| c.simplex(j))
        .filter(|t| t.dim() == 2)
        .map(|t| interior_angle(e, t, v))
        .sum()
}

/// Angle defect in radians: `2π - Σα` at interior vertices and the turning
/// angle `π - Σα` at boundary vertices.
pub fn defect_curvature(c: &SimplicialComplex, e: &Embedding, v: VertexId) -> Result<f64> {
    let full = if surface_vertex_is_interior(c, v)? {
        2.0 * PI
    } else {
        PI
    };
    Ok(full - angle_sum(c, e, v)?)
}

/// [`defect_curvature`] divided by `2π`.
pub fn defect_normalized(c: &SimplicialComplex, e: &Embedding, v: VertexId) -> Result<f64> {
    Ok(defect_curvature(c, e, v)? / (2.0 * PI))
}

/// Normalization of the degree-based curvature `(6 - d)/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinatorialConvention {
    /// `(6 - d)/3`; sums to `2χ` on closed surfaces.
    PaperThird,
    /// `(6 - d)/6`; sums to `χ` on closed surfaces.
    NormalizedSixth,
}

pub fn combinatorial_curvature(
    c: &SimplicialComplex,
    v: VertexId,
    convention: CombinatorialConvention,
) -> Result<Rational64> {
    let d = c.degree(v)? as i64;
    let den = match convention {
        CombinatorialConvention::PaperThird => 3,
        CombinatorialConvention::NormalizedSixth => 6,
    };
    Ok(Rational64::new(6 - d, den))
}

/// Average index of `v` over sampled directions, with each direction drawn
/// uniformly from the unit sphere. Estimates [`defect_normalized`] on surfaces.
pub fn mc_curvature(
    c: &SimplicialComplex,
    e: &Embedding,
    v: VertexId,
    sampler: &DirectionSampler,
    tol: &Tolerances,
) -> Result<McEstimate> {
    if e.ambient_dim() < 2 {
        return Err(Error::InvalidEmbedding("ambient dimension must be at least 2".into()));
    }
    let id = c.require_vertex(v)?;
    let p = e.point(v)?;
    let nbrs = c.neighbors(v)?;
    let rel: Vec<_> = nbrs.iter().map(|&u| Ok(e.point(u)? - p)).collect::<Result<_>>()?;
    // Each coface as a sign and the positions (in `nbrs`) of its other vertices.
    let cells: Vec<(f64, Vec<usize>)> = c
        .cofaces_of(id)
        .into_iter()
        .map(|j| {
            let s = c.simplex(j);
            let pos = s
                .vertices()
                .iter()
                .filter(|&&u| u != v)
                .map(|u| nbrs.binary_search(u).expect("coface vertices are neighbours"))
                .collect();
            (sign(s.dim()) as f64, pos)
        })
        .collect();
    let eps = tol.eps_general(e);
    let dirs = sampler.sample_filtered(e.ambient_dim(), |d| {
        rel.iter().all(|r| r.dot(d.as_vector()).abs() > eps)
    })?;
    let values: Vec<f64> = dirs
        .iter()
        .map(|d| {
            let below: Vec<bool> = rel.iter().map(|r| r.dot(d.as_vector()) < 0.0).collect();
            cells
                .iter()
                .filter(|(_, pos)| pos.iter().all(|&i| below[i]))
                .map(|(s, _)| s)
                .sum()
        })
        .collect();
    Ok(McEstimate::from_values(&values))
}

/// `Σ_k (-1)^k Σ_{C^k ∋ v} E(C^k, v)` with `E` the normalized exterior angle.
pub fn intrinsic_curvature(c: &SimplicialComplex, e: &Embedding, v: VertexId) -> Result<f64> {
    let id = c.require_vertex(v)?;
    c.cofaces_of(id)
        .into_iter()
        .map(|j| {
            let s = c.simplex(j);
            Ok(sign(s.dim()) as f64 * exterior_angle(e, s, v)?)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureKind {
    DefectRadians,
    DefectNormalized,
    Combinatorial,
    Intrinsic,
    McIntegral,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureField {
    pub kind: CurvatureKind,
    pub values: BTreeMap<VertexId, f64>,
    pub total: f64,
}

impl CurvatureField {
    pub fn new(kind: CurvatureKind, values: BTreeMap<VertexId, f64>) -> Self {
        let total = values.values().sum();
        CurvatureField { kind, values, total }
    }
}

fn field_over(
    c: &SimplicialComplex,
    kind: CurvatureKind,
    f: impl Fn(VertexId) -> Result<f64>,
) -> Result<CurvatureField> {
    let values = c.vertices().map(|v| Ok((v, f(v)?))).collect::<Result<_>>()?;
    Ok(CurvatureField::new(kind, values))
}

pub fn defect_field(c: &SimplicialComplex, e: &Embedding, normalized: bool) -> Result<CurvatureField> {
    if normalized {
        field_over(c, CurvatureKind::DefectNormalized, |v| defect_normalized(c, e, v))
    } else {
        field_over(c, CurvatureKind::DefectRadians, |v| defect_curvature(c, e, v))
    }
}

pub fn combinatorial_field(c: &SimplicialComplex, convention: CombinatorialConvention) -> Result<CurvatureField> {
    field_over(c, CurvatureKind::Combinatorial, |v| {
        let k = combinatorial_curvature(c, v, convention)?;
        Ok(*k.numer() as f64 / *k.denom() as f64)
    })
}

pub fn intrinsic_field(c: &SimplicialComplex, e: &Embedding) -> Result<CurvatureField> {
    field_over(c, CurvatureKind::Intrinsic, |v| intrinsic_curvature(c, e, v))
}

pub fn mc_field(
    c: &SimplicialComplex,
    e: &Embedding,
    sampler: &DirectionSampler,
    tol: &Tolerances,
) -> Result<CurvatureField> {
    use rayon::prelude::*;
    // Every vertex reuses the same seeded stream, so the order of evaluation
    // does not affect the values.
    let vertices: Vec<VertexId> = c.vertices().collect();
    let values = vertices
        .par_iter()
        .map(|&v| Ok((v, mc_curvature(c, e, v, sampler, tol)?.estimate)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurvatureField::new(
        CurvatureKind::McIntegral,
        values.into_iter().collect(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnetReport {
    pub total: f64,
    pub chi: i64,
    /// Claimed only on closed surfaces.
    pub holds: Option<bool>,
}

/// Total normalized defect against χ.
pub fn gauss_bonnet(c: &SimplicialComplex, e: &Embedding) -> Result<GaussBonnetReport> {
    let total = defect_field(c, e, true)?.total;
    let chi = c.euler_characteristic();
    let holds = c.is_closed_surface().then(|| (total - chi as f64).abs() <= 1e-9);
    Ok(GaussBonnetReport { total, chi, holds })
}

#[derive(Clone, Debug, Serialize)]
pub struct EgregiumRow {
    pub vertex: VertexId,
    pub intrinsic: f64,
    pub defect_normalized: f64,
    pub exact_gap: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub mc_within_4sigma: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EgregiumReport {
    pub rows: Vec<EgregiumRow>,
    /// Every exact gap is at most `1e-9`.
    pub exact_holds: bool,
    pub mc_within: usize,
    pub mc_tested: usize,
    /// Exact agreement and at least 95% of Monte-Carlo estimates within 4 sigma.
    pub holds: bool,
}

/// Intrinsic curvature against normalized defect at every vertex, plus a
/// Monte-Carlo estimate per vertex from `samples` directions seeded with
/// `seed + v`.
pub fn egregium_report(
    c: &SimplicialComplex,
    e: &Embedding,
    seed: u64,
    samples: usize,
    tol: &Tolerances,
) -> Result<EgregiumReport> {
    use rayon::prelude::*;
    let vertices: Vec<VertexId> = c.vertices().collect();
    let rows = vertices
        .par_iter()
        .map(|&v| {
            let intrinsic = intrinsic_curvature(c, e, v)?;
            let defect = defect_normalized(c, e, v)?;
            let sampler = DirectionSampler::new(seed.wrapping_add(v as u64), samples);
            let mc = mc_curvature(c, e, v, &sampler, tol)?;
            Ok(EgregiumRow {
                vertex: v,
                intrinsic,
                defect_normalized: defect,
                exact_gap: (intrinsic - defect).abs(),
                mc_estimate: mc.estimate,
                mc_stderr: mc.stderr,
                mc_within_4sigma: mc.within(defect, 4.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let exact_holds = rows.iter().all(|r| r.exact_gap <= 1e-9);
    let mc_within = rows.iter().filter(|r| r.mc_within_4sigma).count();
    let mc_tested = rows.len();
    Ok(EgregiumReport {
        holds: exact_holds && mc_within * 100 >= 95 * mc_tested,
        rows,
        exact_holds,
        mc_within,
        mc_tested,
    })
}

//! Stratified Morse theory for pure simplicial complexes: stratum weights
//! `T`, the stratified Euler characteristic, generalized angle defects and
//! the stratified index of a simplex relative to an allowable direction.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::Rational64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::complex::{sign, GraphShape, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::geometry::{inward_normals, solid_angle, Direction, DirectionSampler, Embedding, McEstimate, Tolerances};

type Q = Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumMethod {
    Codim0,
    Codim1,
    LinkPattern,
    /// No pattern with `r != 2` matched; classified as `C_2`.
    DefaultC2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub r: usize,
    pub t: Q,
    pub method: StratumMethod,
}

impl Stratum {
    fn new(r: usize, method: StratumMethod) -> Self {
        Stratum {
            r,
            t: Q::new(r as i64, 2),
            method,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StratumReport {
    pub n: usize,
    pub strata: BTreeMap<Simplex, Stratum>,
    /// Simplices that fell through to the default class.
    pub warnings: Vec<Simplex>,
}

impl StratumReport {
    pub fn t(&self, s: &Simplex) -> Result<Q> {
        self.strata
            .get(s)
            .map(|st| st.t)
            .ok_or_else(|| Error::MissingSimplex(s.clone()))
    }

    /// `Σ T(η) (-1)^dim η`.
    pub fn stratified_euler(&self) -> Q {
        self.strata
            .iter()
            .map(|(s, st)| st.t * Q::from_integer(sign(s.dim())))
            .sum()
    }
}

impl Serialize for StratumReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            simplex: &'a Simplex,
            r: usize,
            #[serde(serialize_with = "crate::serde_rational::serialize")]
            t: Q,
            method: StratumMethod,
        }
        let rows: Vec<Row> = self
            .strata
            .iter()
            .map(|(simplex, st)| Row {
                simplex,
                r: st.r,
                t: st.t,
                method: st.method,
            })
            .collect();
        let mut out = s.serialize_struct("StratumReport", 4)?;
        out.serialize_field("n", &self.n)?;
        out.serialize_field("strata", &rows)?;
        out.serialize_field("warnings", &self.warnings)?;
        out.serialize_field("chi_s", &crate::serde_rational::to_string(&self.stratified_euler()))?;
        out.end()
    }
}

/// `r` for a one-dimensional link: path 1, cycle 2, suspension of `r` points `r`.
fn graph_link_class(link: &SimplicialComplex) -> Option<usize> {
    match link.graph_shape() {
        GraphShape::Path => Some(1),
        GraphShape::Cycle => Some(2),
        GraphShape::Suspension(r) => Some(r),
        GraphShape::Other => None,
    }
}

/// `r` for a two-dimensional link: sphere 2, disk 1, `r >= 3` disks glued
/// along a common boundary cycle `r`.
fn surface_link_class(link: &SimplicialComplex) -> Option<usize> {
    if link.dim() != Some(2) || !link.is_pure() || link.components().len() != 1 {
        return None;
    }
    let flags = link.structure();
    let chi = link.euler_characteristic();
    if flags.is_closed_surface {
        return (chi == 2).then_some(2);
    }
    if flags.is_surface_with_boundary {
        let boundary = SimplicialComplex::from_simplices(
            link.ids_of_dim(1)
                .filter(|&i| link.cofacets_of(i).len() == 1)
                .map(|i| link.simplex(i).clone()),
        );
        return (chi == 1 && boundary.graph_shape() == GraphShape::Cycle).then_some(1);
    }
    // Spine: edges not on exactly two triangles.
    let spine_ids: Vec<usize> = link.ids_of_dim(1).filter(|&i| link.cofacets_of(i).len() != 2).collect();
    let r = link.cofacets_of(*spine_ids.first()?).len();
    if r < 3 || spine_ids.iter().any(|&i| link.cofacets_of(i).len() != r) {
        return None;
    }
    let spine = SimplicialComplex::from_simplices(spine_ids.iter().map(|&i| link.simplex(i).clone()));
    if spine.graph_shape() != GraphShape::Cycle {
        return None;
    }
    // Sheets: triangles connected across non-spine edges.
    let tris: Vec<usize> = link.ids_of_dim(2).collect();
    let mut sheet: BTreeMap<usize, usize> = BTreeMap::new();
    let mut sheets = 0;
    for &t in &tris {
        if sheet.contains_key(&t) {
            continue;
        }
        let mut stack = vec![t];
        sheet.insert(t, sheets);
        while let Some(x) = stack.pop() {
            for &f in link.facets_of(x) {
                if spine_ids.contains(&f) {
                    continue;
                }
                for &y in link.cofacets_of(f) {
                    if let std::collections::btree_map::Entry::Vacant(e) = sheet.entry(y) {
                        e.insert(sheets);
                        stack.push(y);
                    }
                }
            }
        }
        sheets += 1;
    }
    if sheets != r {
        return None;
    }
    for k in 0..r {
        let disk = SimplicialComplex::from_simplices(
            sheet
                .iter()
                .filter(|(_, &s)| s == k)
                .map(|(&t, _)| link.simplex(t).clone()),
        );
        if !(disk.structure().is_surface_with_boundary && disk.euler_characteristic() == 1) {
            return None;
        }
    }
    Some(r)
}

/// Assigns each simplex of a pure complex its stratum `C_r` and weight `T = r/2`.
pub fn classify_strata(c: &SimplicialComplex) -> Result<StratumReport> {
    let n = c.dim().ok_or_else(|| Error::Structure("empty complex".into()))?;
    if !c.is_pure() {
        return Err(Error::Structure("stratification requires a pure complex".into()));
    }
    let mut strata = BTreeMap::new();
    let mut warnings = Vec::new();
    for (id, s) in c.simplices().iter().enumerate() {
        let codim = n - s.dim();
        let stratum = match codim {
            0 => Stratum::new(2, StratumMethod::Codim0),
            1 => Stratum::new(c.cofacets_of(id).len(), StratumMethod::Codim1),
            _ => {
                let link = c.link(s)?;
                let class = match codim {
                    2 => graph_link_class(&link),
                    3 => surface_link_class(&link),
                    _ => None,
                };
                match class {
                    Some(r) => Stratum::new(r, StratumMethod::LinkPattern),
                    None => {
                        warnings.push(s.clone());
                        Stratum::new(2, StratumMethod::DefaultC2)
                    }
                }
            }
        };
        strata.insert(s.clone(), stratum);
    }
    Ok(StratumReport { n, strata, warnings })
}

pub fn stratified_euler(c: &SimplicialComplex) -> Result<Q> {
    Ok(classify_strata(c)?.stratified_euler())
}

fn top_cofaces(c: &SimplicialComplex, n: usize, eta: &Simplex) -> Result<Vec<Simplex>> {
    let id = c.require(eta)?;
    Ok(c.cofaces_of(id)
        .into_iter()
        .map(|j| c.simplex(j))
        .filter(|s| s.dim() == n)
        .cloned()
        .collect())
}

/// `T(η) - Σ_{σ^n > η} α(η, σ)` with `α` the normalized solid angle.
pub fn generalized_angle_defect(
    c: &SimplicialComplex,
    e: &Embedding,
    report: &StratumReport,
    eta: &Simplex,
) -> Result<f64> {
    let n = report.n;
    if eta.dim() + 2 > n {
        return Err(Error::Precondition(format!("{eta} has codimension below 2")));
    }
    let t = report.t(eta)?;
    let mut angle = 0.0;
    for sigma in top_cofaces(c, n, eta)? {
        angle += solid_angle(e, &sigma, eta)?.normalized;
    }
    Ok(*t.numer() as f64 / *t.denom() as f64 - angle)
}

/// Unit projection of `d` onto the span of `sigma`.
pub fn projected_direction(e: &Embedding, sigma: &Simplex, d: &Direction, tol: &Tolerances) -> Result<Direction> {
    let p = e.frame(sigma)?.project(d.as_vector());
    if p.norm() <= tol.allowable {
        return Err(Error::NotAllowable(format!("projection onto {sigma} vanishes")));
    }
    Direction::from_vector(p)
}

fn facet_index(tau: &Simplex, sigma: &Simplex) -> Result<usize> {
    if tau.dim() + 1 != sigma.dim() || !tau.is_face_of(sigma) {
        return Err(Error::Precondition(format!("{tau} is not a facet of {sigma}")));
    }
    let missing = sigma.difference(tau)[0];
    Ok(sigma.vertices().iter().position(|&v| v == missing).unwrap())
}

/// 1 iff `d`, projected to the span of `sigma`, crosses `tau` into `sigma`:
/// the inward normal of `tau` has positive dot product with `d`.
pub fn t_indicator(e: &Embedding, tau: &Simplex, sigma: &Simplex, d: &Direction, tol: &Tolerances) -> Result<u8> {
    let i = facet_index(tau, sigma)?;
    let normal = &inward_normals(e, sigma)?[i];
    let dot = normal.dot(d.as_vector());
    if dot.abs() <= tol.allowable {
        return Err(Error::NotAllowable(format!(
            "direction is parallel to facet {tau} of {sigma}"
        )));
    }
    Ok((dot > 0.0) as u8)
}

/// Determinant form of [`t_indicator`]: with `x_i = a_i - a_0` spanning `tau`
/// and `y` the edge to the opposite vertex, the bordered Gram determinant
/// with last row `(x_1·y, …, x_{n-1}·y, y·d)`. `None` when it vanishes.
pub fn t_indicator_det(e: &Embedding, tau: &Simplex, sigma: &Simplex, d: &Direction) -> Result<Option<u8>> {
    facet_index(tau, sigma)?;
    let a0 = e.point(tau.vertices()[0])?;
    let xs: Vec<DVector<f64>> = tau.vertices()[1..]
        .iter()
        .map(|&v| Ok(e.point(v)? - a0))
        .collect::<Result<_>>()?;
    let y = e.point(sigma.difference(tau)[0])? - a0;
    let n = xs.len() + 1;
    let h = |w: &DVector<f64>| w.dot(d.as_vector());
    let m = DMatrix::from_fn(n, n, |r, col| {
        let row_vec = if r + 1 < n { &xs[r] } else { &y };
        if col + 1 < n {
            xs[col].dot(row_vec)
        } else {
            h(row_vec)
        }
    });
    let det = m.determinant();
    Ok((det != 0.0).then_some((det > 0.0) as u8))
}

/// `Π t(τ_k, σ, d) + Π t(τ_k, σ, -d)` over the facets `τ_k` of `σ` containing `η`.
pub fn g_weight(e: &Embedding, eta: &Simplex, sigma: &Simplex, d: &Direction, tol: &Tolerances) -> Result<u8> {
    if !eta.is_face_of(sigma) || eta == sigma {
        return Err(Error::Precondition(format!("{eta} is not a proper face of {sigma}")));
    }
    let normals = inward_normals(e, sigma)?;
    let mut plus = 1u8;
    let mut minus = 1u8;
    for (i, &v) in sigma.vertices().iter().enumerate() {
        if eta.contains_vertex(v) {
            continue;
        }
        let dot = normals[i].dot(d.as_vector());
        if dot.abs() <= tol.allowable {
            return Err(Error::NotAllowable(format!(
                "direction is parallel to a facet of {sigma}"
            )));
        }
        plus &= (dot > 0.0) as u8;
        minus &= (dot < 0.0) as u8;
    }
    Ok(plus + minus)
}

/// `T(η) - ½ Σ_{σ^n > η} g(η, σ, d)`.
pub fn stratified_index(
    c: &SimplicialComplex,
    e: &Embedding,
    report: &StratumReport,
    eta: &Simplex,
    d: &Direction,
    tol: &Tolerances,
) -> Result<Q> {
    if eta.dim() >= report.n {
        return Err(Error::Precondition(format!("{eta} is a top simplex")));
    }
    let mut g = 0i64;
    for sigma in top_cofaces(c, report.n, eta)? {
        g += g_weight(e, eta, &sigma, d, tol)? as i64;
    }
    Ok(report.t(eta)? - Q::new(g, 2))
}

#[derive(Clone, Debug, Serialize)]
pub struct StratifiedCptReport {
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub lhs: Q,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub rhs: Q,
    pub holds: bool,
}

/// `Σ_{dim η < n} (-1)^dim η i^s(η, d)` against `χ^s`.
pub fn stratified_cpt(
    c: &SimplicialComplex,
    e: &Embedding,
    report: &StratumReport,
    d: &Direction,
    tol: &Tolerances,
) -> Result<StratifiedCptReport> {
    let mut lhs = Q::from_integer(0);
    for eta in c.simplices().iter().filter(|s| s.dim() < report.n) {
        lhs += Q::from_integer(sign(eta.dim())) * stratified_index(c, e, report, eta, d, tol)?;
    }
    let rhs = report.stratified_euler();
    Ok(StratifiedCptReport {
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct StratifiedEgregiumReport {
    pub simplex: Simplex,
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub exact_defect: f64,
    pub holds_within_4sigma: bool,
}

/// Mean stratified index over uniformly sampled directions against the
/// generalized angle defect. Directions not allowable for the top simplices
/// around `eta` are rejected and redrawn.
pub fn stratified_egregium_mc(
    c: &SimplicialComplex,
    e: &Embedding,
    report: &StratumReport,
    eta: &Simplex,
    sampler: &DirectionSampler,
    tol: &Tolerances,
) -> Result<StratifiedEgregiumReport> {
    let exact_defect = generalized_angle_defect(c, e, report, eta)?;
    let t = report.t(eta)?;
    let t = *t.numer() as f64 / *t.denom() as f64;
    // Inward normals of the facets through eta, per top simplex.
    let mut stars: Vec<Vec<DVector<f64>>> = Vec::new();
    for sigma in top_cofaces(c, report.n, eta)? {
        let normals = inward_normals(e, &sigma)?;
        stars.push(
            sigma
                .vertices()
                .iter()
                .zip(normals)
                .filter(|(v, _)| !eta.contains_vertex(**v))
                .map(|(_, n)| n)
                .collect(),
        );
    }
    let dirs = sampler.sample_filtered(e.ambient_dim(), |d| {
        stars
            .iter()
            .flatten()
            .all(|n| n.dot(d.as_vector()).abs() > tol.allowable)
    })?;
    let values: Vec<f64> = dirs
        .iter()
        .map(|d| {
            let g: u32 = stars
                .iter()
                .map(|ns| {
                    let dots: Vec<f64> = ns.iter().map(|n| n.dot(d.as_vector())).collect();
                    dots.iter().all(|&x| x > 0.0) as u32 + dots.iter().all(|&x| x < 0.0) as u32
                })
                .sum();
            t - 0.5 * g as f64
        })
        .collect();
    let est = McEstimate::from_values(&values);
    Ok(StratifiedEgregiumReport {
        simplex: eta.clone(),
        estimate: est.estimate,
        stderr: est.stderr,
        samples: est.samples,
        exact_defect,
        holds_within_4sigma: est.within(exact_defect, 4.0),
    })
}

/// [`stratified_egregium_mc`] for every simplex of codimension at least 2,
/// in complex order.
pub fn stratified_egregium_all(
    c: &SimplicialComplex,
    e: &Embedding,
    report: &StratumReport,
    sampler: &DirectionSampler,
    tol: &Tolerances,
) -> Result<Vec<StratifiedEgregiumReport>> {
    use rayon::prelude::*;
    let targets: Vec<&Simplex> = c.simplices().iter().filter(|s| s.dim() + 2 <= report.n).collect();
    targets
        .par_iter()
        .map(|eta| stratified_egregium_mc(c, e, report, eta, sampler, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::geometry::is_allowable;

    fn s(vs: &[u32]) -> Simplex {
        Simplex::new(vs.iter().copied()).unwrap()
    }

    fn half(n: i64) -> Q {
        Q::new(n, 2)
    }

    fn allowable_dirs(m: &corpus::Mesh, seed: u64, count: usize) -> Vec<Direction> {
        let tol = Tolerances::default();
        DirectionSampler::new(seed, count)
            .sample_filtered(m.embedding.ambient_dim(), |d| {
                is_allowable(&m.complex, &m.embedding, d, &tol).unwrap()
            })
            .unwrap()
    }

    #[test]
    fn closed_surfaces_are_all_c2() {
        for m in corpus::closed_surfaces() {
            let r = classify_strata(&m.complex).unwrap();
            assert!(r.strata.values().all(|st| st.r == 2), "{}", m.name);
            assert!(r.warnings.is_empty());
            assert_eq!(r.stratified_euler(), Q::from_integer(m.complex.euler_characteristic()));
        }
    }

    #[test]
    fn book_strata() {
        let m = corpus::book(3);
        let r = classify_strata(&m.complex).unwrap();
        assert_eq!(r.t(&s(&[1, 2])).unwrap(), half(3));
        assert_eq!(r.t(&s(&[1, 3])).unwrap(), half(1));
        assert_eq!(r.strata[&s(&[1])].method, StratumMethod::DefaultC2);
        assert_eq!(r.t(&s(&[1])).unwrap(), half(2));
        for leaf in 3..6 {
            assert_eq!(r.t(&s(&[leaf])).unwrap(), half(1));
        }
        assert_eq!(r.warnings, vec![s(&[1]), s(&[2])]);
        assert_eq!(r.stratified_euler(), Q::from_integer(2));
    }

    #[test]
    fn two_triangle_strata() {
        let m = corpus::two_triangles();
        let r = classify_strata(&m.complex).unwrap();
        for v in 1..=4 {
            assert_eq!(r.t(&s(&[v])).unwrap(), half(1));
        }
        assert_eq!(r.t(&s(&[2, 3])).unwrap(), half(2));
        assert_eq!(r.t(&s(&[1, 2])).unwrap(), half(1));
        assert_eq!(r.stratified_euler(), Q::from_integer(1));
    }

    #[test]
    fn surfaces_with_boundary_match_euler() {
        for m in [corpus::two_triangles(), corpus::hexagon_fan(), corpus::cube_corner()] {
            let r = classify_strata(&m.complex).unwrap();
            assert_eq!(r.stratified_euler(), Q::from_integer(m.complex.euler_characteristic()));
            assert!(r.warnings.is_empty());
        }
    }

    #[test]
    fn three_dimensional_links() {
        let m = corpus::octahedral_ball();
        let r = classify_strata(&m.complex).unwrap();
        assert!(r.warnings.is_empty());
        assert_eq!(r.strata[&s(&[0])].r, 2);
        assert_eq!(r.strata[&s(&[1])].r, 1);
        assert_eq!(r.strata[&s(&[0, 1])].r, 2);
        assert_eq!(r.strata[&s(&[1, 3])].r, 1);
        // Interior cells weigh 1, boundary cells 1/2: chi - chi(S^2)/2 = 0.
        assert_eq!(r.stratified_euler(), Q::from_integer(0));
        // Three tetrahedra glued along a common triangle: the triangle is C_3,
        // its sides and corners see trees and fall back to C_2.
        let c = SimplicialComplex::build([[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 3, 6]]).unwrap();
        let r = classify_strata(&c).unwrap();
        assert_eq!(r.strata[&s(&[1, 2, 3])].r, 3);
        assert_eq!(r.strata[&s(&[1, 2])].method, StratumMethod::DefaultC2);
        assert_eq!(r.strata[&s(&[1])].method, StratumMethod::DefaultC2);
        assert_eq!(r.strata[&s(&[4])].r, 1);
        // Cone from 0 over three disks sharing the boundary cycle 1-2-3.
        let mut tets = Vec::new();
        for apex in [4, 5, 6] {
            for [a, b] in [[1, 2], [2, 3], [1, 3]] {
                tets.push([0, a, b, apex]);
            }
        }
        let c = SimplicialComplex::build(tets).unwrap();
        let r = classify_strata(&c).unwrap();
        assert_eq!(r.strata[&s(&[0])], Stratum::new(3, StratumMethod::LinkPattern));
        assert_eq!(r.strata[&s(&[0, 1])], Stratum::new(3, StratumMethod::LinkPattern));
        assert_eq!(r.strata[&s(&[0, 4])].r, 2);
        assert_eq!(r.strata[&s(&[1, 4])].r, 1);
        assert_eq!(r.strata[&s(&[0, 1, 2])].r, 3);
    }

    #[test]
    fn non_pure_rejected() {
        let c = SimplicialComplex::build([vec![1, 2, 3], vec![3, 4]]).unwrap();
        assert!(matches!(classify_strata(&c), Err(Error::Structure(_))));
    }

    #[test]
    fn defects() {
        let ico = corpus::icosahedron();
        let r = classify_strata(&ico.complex).unwrap();
        let dv = generalized_angle_defect(&ico.complex, &ico.embedding, &r, &s(&[1])).unwrap();
        assert!((dv - 1.0 / 6.0).abs() < 1e-12);
        let fan = corpus::hexagon_fan();
        let r = classify_strata(&fan.complex).unwrap();
        assert!(
            generalized_angle_defect(&fan.complex, &fan.embedding, &r, &s(&[0]))
                .unwrap()
                .abs()
                < 1e-12
        );
        let book = corpus::book(3);
        let r = classify_strata(&book.complex).unwrap();
        let leaf = generalized_angle_defect(&book.complex, &book.embedding, &r, &s(&[3])).unwrap();
        assert!((leaf - 1.0 / 3.0).abs() < 1e-12);
        assert!(generalized_angle_defect(&book.complex, &book.embedding, &r, &s(&[1, 2])).is_err());
    }

    #[test]
    fn t_indicator_cases() {
        let tol = Tolerances::default();
        let e = Embedding::new(
            [(1, vec![0.0, 0.0]), (2, vec![1.0, 0.0]), (3, vec![0.0, 1.0])]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let sigma = s(&[1, 2, 3]);
        let tau = s(&[1, 2]);
        let up = Direction::new(vec![0.1, 1.0]).unwrap();
        assert_eq!(t_indicator(&e, &tau, &sigma, &up, &tol).unwrap(), 1);
        assert_eq!(t_indicator(&e, &tau, &sigma, &up.negated(), &tol).unwrap(), 0);
        assert_eq!(t_indicator_det(&e, &tau, &sigma, &up).unwrap(), Some(1));
        // Vertex 1 is the corner where d = (1,1) points into the triangle.
        let diag = Direction::new(vec![1.0, 0.9]).unwrap();
        assert_eq!(g_weight(&e, &s(&[1]), &sigma, &diag, &tol).unwrap(), 1);
        assert_eq!(g_weight(&e, &s(&[2]), &sigma, &diag, &tol).unwrap(), 0);
        assert_eq!(g_weight(&e, &tau, &sigma, &diag, &tol).unwrap(), 1);
        let tet = corpus::octahedral_ball();
        let sigma = s(&[0, 1, 3, 5]);
        let facet = s(&[1, 3, 5]);
        let out = Direction::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(t_indicator(&tet.embedding, &facet, &sigma, &out, &tol).unwrap(), 0);
    }

    #[test]
    fn determinant_agrees_with_normal_test() {
        let tol = Tolerances::default();
        for m in [corpus::octahedral_ball(), corpus::icosahedron(), corpus::book(3)] {
            let dirs = DirectionSampler::new(9, 200).sample(m.embedding.ambient_dim()).unwrap();
            let n = m.complex.dim().unwrap();
            for sigma in m.complex.simplices_of_dim(n) {
                for tau in sigma.facets() {
                    for d in &dirs {
                        if let (Some(det), Ok(t)) = (
                            t_indicator_det(&m.embedding, &tau, sigma, d).unwrap(),
                            t_indicator(&m.embedding, &tau, sigma, d, &tol),
                        ) {
                            assert_eq!(det, t);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn codim_one_index_vanishes() {
        let tol = Tolerances::default();
        for m in [corpus::book(3), corpus::octahedral_ball(), corpus::icosahedron()] {
            let r = classify_strata(&m.complex).unwrap();
            let n = r.n;
            for d in allowable_dirs(&m, 4, 10) {
                for eta in m.complex.simplices_of_dim(n - 1) {
                    assert_eq!(
                        stratified_index(&m.complex, &m.embedding, &r, eta, &d, &tol).unwrap(),
                        Q::from_integer(0)
                    );
                }
            }
        }
    }

    #[test]
    fn stratified_cpt_on_corpus() {
        let tol = Tolerances::default();
        for m in corpus::all() {
            let r = classify_strata(&m.complex);
            let Ok(r) = r else { continue };
            for d in allowable_dirs(&m, 21, 10) {
                let rep = stratified_cpt(&m.complex, &m.embedding, &r, &d, &tol).unwrap();
                assert!(rep.holds, "{}: {rep:?}", m.name);
            }
        }
    }

    #[test]
    fn egregium_anchors() {
        let tol = Tolerances::default();
        let sampler = DirectionSampler::new(5, 20_000);
        let ico = corpus::icosahedron();
        let r = classify_strata(&ico.complex).unwrap();
        let rep = stratified_egregium_mc(&ico.complex, &ico.embedding, &r, &s(&[1]), &sampler, &tol).unwrap();
        assert!(rep.holds_within_4sigma, "{rep:?}");
        assert!((rep.exact_defect - 1.0 / 6.0).abs() < 1e-12);
        let book = corpus::book(3);
        let r = classify_strata(&book.complex).unwrap();
        let rep = stratified_egregium_mc(&book.complex, &book.embedding, &r, &s(&[4]), &sampler, &tol).unwrap();
        assert!(rep.holds_within_4sigma, "{rep:?}");
        let ball = corpus::octahedral_ball();
        let r = classify_strata(&ball.complex).unwrap();
        for eta in [s(&[0]), s(&[1]), s(&[0, 1]), s(&[1, 3])] {
            let rep = stratified_egregium_mc(&ball.complex, &ball.embedding, &r, &eta, &sampler, &tol).unwrap();
            assert!(rep.holds_within_4sigma, "{rep:?}");
        }
    }

    #[test]
    fn vertex_sums_match_banchoff_on_closed_surfaces() {
        use crate::banchoff::{surface_index, HeightOrder};
        use crate::geometry::is_general;
        let tol = Tolerances::default();
        for m in corpus::closed_surfaces() {
            let r = classify_strata(&m.complex).unwrap();
            let dirs = DirectionSampler::new(13, 10)
                .sample_filtered(3, |d| {
                    is_allowable(&m.complex, &m.embedding, d, &tol).unwrap()
                        && is_general(&m.complex, &m.embedding, d, &tol)
                })
                .unwrap();
            for d in dirs {
                let order = HeightOrder::from_direction(&m.complex, &m.embedding, &d, &tol, false).unwrap();
                let mut strat = Q::from_integer(0);
                let mut banch = Q::from_integer(0);
                for v in m.complex.vertices() {
                    strat += stratified_index(&m.complex, &m.embedding, &r, &Simplex::vertex(v), &d, &tol).unwrap();
                    banch += surface_index(&m.complex, &order, v).unwrap();
                }
                assert_eq!(strat, banch, "{}", m.name);
            }
        }
    }

    #[test]
    fn vertex_means_match_banchoff_curvature() {
        use crate::banchoff::mc_curvature;
        let tol = Tolerances::default();
        let sampler = DirectionSampler::new(17, 20_000);
        let m = corpus::octahedron();
        let r = classify_strata(&m.complex).unwrap();
        let strat = stratified_egregium_mc(&m.complex, &m.embedding, &r, &s(&[1]), &sampler, &tol).unwrap();
        let banch = mc_curvature(&m.complex, &m.embedding, 1, &sampler, &tol).unwrap();
        let sigma = (strat.stderr.powi(2) + banch.stderr.powi(2)).sqrt();
        assert!((strat.estimate - banch.estimate).abs() < 4.0 * sigma + 1e-12);
    }
}

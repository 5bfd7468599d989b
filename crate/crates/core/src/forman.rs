//! Combinatorial Forman-Ricci curvature of edges, the induced scalar
//! curvature of vertices, and closed-form expressions relating them to vertex
//! degrees, genus and the combinatorial defect.
//!
//! Everything is exact rational arithmetic. The definitional formula
//! `#triangles + 2 - #parallel neighbours` is the reference; closed forms are
//! checked against it, and the printed variants are evaluated only to report
//! their gaps.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::serde_rational;

type Q = Rational64;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn edge_ends(c: &SimplicialComplex, e: &Simplex) -> Result<(VertexId, VertexId)> {
    if e.dim() != 1 {
        return Err(Error::Precondition(format!("{e} is not an edge")));
    }
    c.require(e)?;
    Ok((e.vertices()[0], e.vertices()[1]))
}

/// Triangles of `c` containing edge `e`.
fn triangles_on(c: &SimplicialComplex, e: &Simplex) -> Result<Vec<Simplex>> {
    let id = c.require(e)?;
    Ok(c.cofacets_of(id).iter().map(|&j| c.simplex(j).clone()).collect())
}

fn share_triangle(c: &SimplicialComplex, a: &Simplex, b: &Simplex) -> bool {
    let u = a.union(b);
    u.dim() == 2 && c.contains(&u)
}

/// Edges that share exactly one of {a vertex, a triangle} with `e`.
pub fn parallel_neighbors(c: &SimplicialComplex, e: &Simplex) -> Result<Vec<Simplex>> {
    let (u, v) = edge_ends(c, e)?;
    let mut candidates: Vec<Simplex> = Vec::new();
    for w in [u, v] {
        for x in c.neighbors(w)? {
            let f = Simplex::edge(w, x);
            if &f != e {
                candidates.push(f);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    // Every edge sharing a triangle with `e` also shares a vertex with it, so
    // the candidates cover both incidences.
    Ok(candidates
        .into_iter()
        .filter(|f| {
            let shares_vertex = f.vertices().iter().any(|&x| e.contains_vertex(x));
            shares_vertex != share_triangle(c, e, f)
        })
        .collect())
}

/// `#{triangles > e} + 2 - #parallel_neighbors(e)`; higher cells are ignored.
pub fn forman_ricci(c: &SimplicialComplex, e: &Simplex) -> Result<Q> {
    let t = triangles_on(c, e)?.len() as i64;
    let p = parallel_neighbors(c, e)?.len() as i64;
    Ok(q(t + 2 - p))
}

fn require_pure_2d(c: &SimplicialComplex) -> Result<()> {
    if c.dim() == Some(2) && c.is_pure() {
        Ok(())
    } else {
        Err(Error::Precondition("complex is not purely 2-dimensional".into()))
    }
}

/// `4 + 3|t| - (d_u + d_v)` for purely 2-dimensional complexes in which no
/// side of a triangle on `e` is parallel to `e`.
pub fn forman_ricci_closed_form(c: &SimplicialComplex, e: &Simplex) -> Result<Q> {
    require_pure_2d(c)?;
    let (u, v) = edge_ends(c, e)?;
    let tris = triangles_on(c, e)?;
    let parallels = parallel_neighbors(c, e)?;
    for t in &tris {
        for side in t.facets().filter(|s| s != e) {
            if parallels.contains(&side) {
                return Err(Error::Precondition(format!("side {side} of {t} is parallel to {e}")));
            }
        }
    }
    let t = tris.len() as i64;
    Ok(q(4 + 3 * t) - q((c.degree(u)? + c.degree(v)?) as i64))
}

/// The closed form with the printed sign, `4 - 3|t| - (d_u + d_v)`.
pub fn forman_ricci_printed(c: &SimplicialComplex, e: &Simplex) -> Result<Q> {
    let (u, v) = edge_ends(c, e)?;
    let t = triangles_on(c, e)?.len() as i64;
    Ok(q(4 - 3 * t) - q((c.degree(u)? + c.degree(v)?) as i64))
}

/// Forman-Ricci curvature of every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeField {
    pub values: BTreeMap<Simplex, Q>,
}

pub fn ricci_field(c: &SimplicialComplex) -> Result<EdgeField> {
    let values = c
        .edges()
        .iter()
        .map(|e| Ok((e.clone(), forman_ricci(c, e)?)))
        .collect::<Result<_>>()?;
    Ok(EdgeField { values })
}

/// Mean of [`forman_ricci`] over the edges at `v`.
pub fn forman_scalar(c: &SimplicialComplex, v: VertexId) -> Result<Q> {
    let nbrs = c.neighbors(v)?;
    if nbrs.is_empty() {
        return Err(Error::IsolatedVertex(v));
    }
    let mut total = q(0);
    for &u in &nbrs {
        total += forman_ricci(c, &Simplex::edge(u, v))?;
    }
    Ok(total / q(nbrs.len() as i64))
}

/// Mean degree of the neighbours of `v`.
pub fn mean_neighbor_degree(c: &SimplicialComplex, v: VertexId) -> Result<Q> {
    let nbrs = c.neighbors(v)?;
    if nbrs.is_empty() {
        return Err(Error::IsolatedVertex(v));
    }
    let mut total = 0i64;
    for &u in &nbrs {
        total += c.degree(u)? as i64;
    }
    Ok(Q::new(total, nbrs.len() as i64))
}

/// Mean vertex degree `2|E| / |V|`.
pub fn mean_degree(c: &SimplicialComplex) -> Result<Q> {
    let nv = c.count(0) as i64;
    if nv == 0 {
        return Err(Error::Precondition("complex has no vertices".into()));
    }
    Ok(Q::new(2 * c.count(1) as i64, nv))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    pub values: BTreeMap<VertexId, Q>,
    pub d_mean: Q,
    pub d_mean_nbr: BTreeMap<VertexId, Q>,
}

pub fn scalar_field(c: &SimplicialComplex) -> Result<ScalarField> {
    let mut values = BTreeMap::new();
    let mut d_mean_nbr = BTreeMap::new();
    for v in c.vertices() {
        values.insert(v, forman_scalar(c, v)?);
        d_mean_nbr.insert(v, mean_neighbor_degree(c, v)?);
    }
    Ok(ScalarField {
        values,
        d_mean: mean_degree(c)?,
        d_mean_nbr,
    })
}

fn require_closed_surface(c: &SimplicialComplex) -> Result<()> {
    if c.is_closed_surface() {
        Ok(())
    } else {
        Err(Error::Precondition("complex is not a closed surface".into()))
    }
}

/// Degree curvature `(6 - d)/3`.
fn k_third(c: &SimplicialComplex, v: VertexId) -> Result<Q> {
    Ok(Q::new(6 - c.degree(v)? as i64, 3))
}

/// `10 - d_v - mean(neighbour degrees)`, equivalently `3K(v) + 4 - mean(neighbour degrees)`
/// with `K = (6 - d)/3`. Closed surfaces only.
pub fn scalar_closed_form_surface(c: &SimplicialComplex, v: VertexId) -> Result<Q> {
    require_closed_surface(c)?;
    Ok(q(10 - c.degree(v)? as i64) - mean_neighbor_degree(c, v)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeGapRow {
    pub edge: Simplex,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub definitional: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub closed_form: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed_gap: Q,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexGapRow {
    pub vertex: VertexId,
    pub degree: usize,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub definitional: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub closed_form: Q,
    /// `2 - d + mean(neighbour degrees)`.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed_derivation: Q,
    /// `3K(v) - 4 - d_mean`, which equals `2 - d - d_mean`.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed_mean_field: Q,
    /// `2 - 2d`, the regular-complex specialization as printed.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed_regular: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub max_printed_gap: Q,
}

/// Definitional values against the closed forms and their printed variants.
#[derive(Clone, Debug, Serialize)]
pub struct FormanGapReport {
    pub edges: Vec<EdgeGapRow>,
    /// Closed surfaces only.
    pub vertices: Vec<VertexGapRow>,
    pub closed_forms_agree: bool,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub max_edge_printed_gap: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub max_vertex_printed_gap: Q,
}

pub fn forman_gap_report(c: &SimplicialComplex) -> Result<FormanGapReport> {
    require_pure_2d(c)?;
    let mut agree = true;
    let mut edges = Vec::new();
    for e in c.edges() {
        let definitional = forman_ricci(c, e)?;
        let closed_form = forman_ricci_closed_form(c, e)?;
        let printed = forman_ricci_printed(c, e)?;
        agree &= closed_form == definitional;
        edges.push(EdgeGapRow {
            edge: e.clone(),
            definitional,
            closed_form,
            printed,
            printed_gap: (printed - definitional).abs(),
        });
    }
    let mut vertices = Vec::new();
    if c.is_closed_surface() {
        let d_mean = mean_degree(c)?;
        for v in c.vertices() {
            let d = c.degree(v)? as i64;
            let definitional = forman_scalar(c, v)?;
            let closed_form = scalar_closed_form_surface(c, v)?;
            agree &= closed_form == definitional;
            let printed_derivation = q(2 - d) + mean_neighbor_degree(c, v)?;
            let printed_mean_field = q(3) * k_third(c, v)? - q(4) - d_mean;
            let printed_regular = q(2 - 2 * d);
            let max_printed_gap = [printed_derivation, printed_mean_field, printed_regular]
                .iter()
                .map(|p| (p - definitional).abs())
                .max()
                .unwrap();
            vertices.push(VertexGapRow {
                vertex: v,
                degree: d as usize,
                definitional,
                closed_form,
                printed_derivation,
                printed_mean_field,
                printed_regular,
                max_printed_gap,
            });
        }
    }
    Ok(FormanGapReport {
        max_edge_printed_gap: edges.iter().map(|r| r.printed_gap).max().unwrap_or_default(),
        max_vertex_printed_gap: vertices.iter().map(|r| r.max_printed_gap).max().unwrap_or_default(),
        edges,
        vertices,
        closed_forms_agree: agree,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusRow {
    pub vertex: VertexId,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub direct: Q,
    /// `3[K(v) - χ/|V| + 2]` with `K = (6 - d)/3`, as printed.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed: Q,
    /// `3[K(v) + 2χ/|V|] - 2`: the closed form with the neighbour-degree mean
    /// replaced by the global mean degree.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub mean_field: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub printed_gap: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub mean_field_gap: Q,
}

/// Scalar curvature against the genus-based mean-field predictions.
#[derive(Clone, Debug, Serialize)]
pub struct GenusRelationReport {
    pub genus: i64,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub d_mean: Q,
    /// Mean of `(6 - d)/3`; equals `2χ/|V|` on closed surfaces.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub k_mean: Q,
    /// Genus recovered from `d_mean` through `d_mean = 6 - 6χ/|V|`.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub genus_prediction: Q,
    /// Genus recovered from the printed relation `d_mean = 3[χ/|V| - 2]`.
    #[serde(serialize_with = "serde_rational::serialize")]
    pub genus_prediction_printed: Q,
    pub vertices: Vec<GenusRow>,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub max_abs_gap_printed: Q,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub max_abs_gap_mean_field: Q,
}

pub fn genus_relation_report(c: &SimplicialComplex) -> Result<GenusRelationReport> {
    let genus = c
        .structure()
        .genus
        .ok_or_else(|| Error::Precondition("genus is only defined for closed connected orientable surfaces".into()))?;
    let nv = q(c.count(0) as i64);
    let chi = q(2 - 2 * genus);
    let d_mean = mean_degree(c)?;
    let mut k_total = q(0);
    let mut vertices = Vec::new();
    for v in c.vertices() {
        let k = k_third(c, v)?;
        k_total += k;
        let direct = forman_scalar(c, v)?;
        let printed = q(3) * (k - chi / nv + q(2));
        let mean_field = q(3) * (k + q(2) * chi / nv) - q(2);
        vertices.push(GenusRow {
            vertex: v,
            direct,
            printed,
            mean_field,
            printed_gap: (printed - direct).abs(),
            mean_field_gap: (mean_field - direct).abs(),
        });
    }
    // d_mean = 6 - 6χ/|V|  =>  χ = |V|(6 - d_mean)/6.
    let chi_pred = nv * (q(6) - d_mean) / q(6);
    // d_mean = 3[χ/|V| - 2]  =>  χ = |V|(d_mean/3 + 2).
    let chi_printed = nv * (d_mean / q(3) + q(2));
    Ok(GenusRelationReport {
        genus,
        d_mean,
        k_mean: k_total / nv,
        genus_prediction: (q(2) - chi_pred) / q(2),
        genus_prediction_printed: (q(2) - chi_printed) / q(2),
        max_abs_gap_printed: vertices.iter().map(|r| r.printed_gap).max().unwrap_or_default(),
        max_abs_gap_mean_field: vertices.iter().map(|r| r.mean_field_gap).max().unwrap_or_default(),
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn e(u: u32, v: u32) -> Simplex {
        Simplex::edge(u, v)
    }

    /// Exhaustive parallel test over every pair of edges.
    fn brute_parallels(c: &SimplicialComplex, a: &Simplex) -> Vec<Simplex> {
        c.edges()
            .iter()
            .filter(|b| *b != a)
            .filter(|b| {
                let vertex = b.vertices().iter().any(|x| a.contains_vertex(*x));
                let tri = c.triangles().iter().any(|t| a.is_face_of(t) && b.is_face_of(t));
                vertex != tri
            })
            .cloned()
            .collect()
    }

    #[test]
    fn parallels_match_brute_force() {
        for m in corpus::all() {
            for a in m.complex.edges() {
                assert_eq!(
                    parallel_neighbors(&m.complex, a).unwrap(),
                    brute_parallels(&m.complex, a)
                );
            }
        }
    }

    #[test]
    fn parallel_examples() {
        let tet = corpus::tetrahedron().complex;
        assert!(parallel_neighbors(&tet, &e(1, 2)).unwrap().is_empty());
        let path = SimplicialComplex::build([[1, 2], [2, 3]]).unwrap();
        assert_eq!(parallel_neighbors(&path, &e(1, 2)).unwrap(), vec![e(2, 3)]);
        // Triangles abc and abd sharing ab; a=1, b=2, c=3, d=4.
        let two = SimplicialComplex::build([[1, 2, 3], [1, 2, 4]]).unwrap();
        assert!(parallel_neighbors(&two, &e(1, 2)).unwrap().is_empty());
        assert_eq!(parallel_neighbors(&two, &e(1, 3)).unwrap(), vec![e(1, 4)]);
        assert!(parallel_neighbors(&two, &e(1, 5)).is_err());
    }

    #[test]
    fn ricci_examples() {
        let tet = corpus::tetrahedron().complex;
        assert_eq!(forman_ricci(&tet, &e(1, 2)).unwrap(), q(4));
        assert_eq!(forman_ricci_closed_form(&tet, &e(1, 2)).unwrap(), q(4));
        let path = SimplicialComplex::build([[1, 2], [2, 3]]).unwrap();
        assert_eq!(forman_ricci(&path, &e(1, 2)).unwrap(), q(1));
        let single = SimplicialComplex::build([[1, 2]]).unwrap();
        assert_eq!(forman_ricci(&single, &e(1, 2)).unwrap(), q(2));
        let two = SimplicialComplex::build([[1, 2, 3], [1, 2, 4]]).unwrap();
        assert_eq!(forman_ricci(&two, &e(1, 2)).unwrap(), q(4));
        assert_eq!(forman_ricci_closed_form(&two, &e(1, 2)).unwrap(), q(4));
        assert!(forman_ricci_closed_form(&path, &e(1, 2)).is_err());
    }

    #[test]
    fn closed_forms_match_definition() {
        for m in corpus::all() {
            let c = &m.complex;
            if c.dim() == Some(2) && c.is_pure() {
                for a in c.edges() {
                    assert_eq!(forman_ricci_closed_form(c, a).unwrap(), forman_ricci(c, a).unwrap());
                }
            }
            if c.is_closed_surface() {
                for v in c.vertices() {
                    assert_eq!(scalar_closed_form_surface(c, v).unwrap(), forman_scalar(c, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn scalar_examples() {
        let tet = corpus::tetrahedron().complex;
        assert_eq!(forman_scalar(&tet, 1).unwrap(), q(4));
        assert_eq!(scalar_closed_form_surface(&tet, 1).unwrap(), q(4));
        let path = SimplicialComplex::build([[1, 2], [2, 3]]).unwrap();
        assert_eq!(forman_scalar(&path, 2).unwrap(), q(1));
        let ico = corpus::icosahedron().complex;
        for v in ico.vertices() {
            assert_eq!(forman_scalar(&ico, v).unwrap(), q(0));
        }
        let torus = corpus::csaszar_torus().complex;
        for v in torus.vertices() {
            assert_eq!(forman_scalar(&torus, v).unwrap(), q(-2));
        }
        let pts = SimplicialComplex::build([vec![1], vec![2, 3]]).unwrap();
        assert!(matches!(forman_scalar(&pts, 1), Err(Error::IsolatedVertex(1))));
    }

    #[test]
    fn regular_surfaces_follow_ten_minus_two_d() {
        for m in corpus::closed_surfaces() {
            let c = &m.complex;
            let degs: Vec<usize> = c.vertices().map(|v| c.degree(v).unwrap()).collect();
            if degs.iter().all(|&d| d == degs[0]) {
                for v in c.vertices() {
                    assert_eq!(forman_scalar(c, v).unwrap(), q(10 - 2 * degs[0] as i64));
                }
            }
        }
    }

    #[test]
    fn triangle_free_graphs_are_bounded_by_two() {
        let g = SimplicialComplex::build([[1, 2], [2, 3], [3, 4], [4, 1], [1, 5]]).unwrap();
        for a in g.edges() {
            let r = forman_ricci(&g, a).unwrap();
            assert_eq!(r, q(2 - parallel_neighbors(&g, a).unwrap().len() as i64));
            assert!(r <= q(2));
        }
    }

    #[test]
    fn filling_a_triangle_raises_ricci_by_three() {
        let hollow = SimplicialComplex::build([[1, 2], [2, 3], [1, 3]]).unwrap();
        let filled = SimplicialComplex::build([[1, 2, 3]]).unwrap();
        assert_eq!(forman_ricci(&hollow, &e(1, 2)).unwrap(), q(0));
        assert_eq!(forman_ricci(&filled, &e(1, 2)).unwrap(), q(3));
        // A cone over the edge with a fresh apex adds only the triangle.
        let coned = SimplicialComplex::build([vec![1, 2, 4], vec![2, 3], vec![1, 3]]).unwrap();
        assert_eq!(forman_ricci(&coned, &e(1, 2)).unwrap(), q(1));
    }

    #[test]
    fn gap_report_shows_printed_sign_error() {
        let r = forman_gap_report(&corpus::tetrahedron().complex).unwrap();
        assert!(r.closed_forms_agree);
        // 4 - 6 - 6 = -8 against 4.
        assert_eq!(r.max_edge_printed_gap, q(12));
        assert!(r.max_vertex_printed_gap > q(0));
    }

    #[test]
    fn genus_relation() {
        let r = genus_relation_report(&corpus::csaszar_torus().complex).unwrap();
        assert_eq!(r.genus, 1);
        assert_eq!(r.d_mean, q(6));
        for row in &r.vertices {
            assert_eq!(row.direct, q(-2));
            assert_eq!(row.printed, q(6));
            assert_eq!(row.mean_field, q(-2));
        }
        assert_eq!(r.max_abs_gap_printed, q(8));
        assert_eq!(r.genus_prediction, q(1));
        let ico = genus_relation_report(&corpus::icosahedron().complex).unwrap();
        assert_eq!(ico.max_abs_gap_mean_field, q(0));
        assert_eq!(ico.genus_prediction, q(0));
        let g2 = genus_relation_report(&corpus::genus_two().complex).unwrap();
        assert_eq!(g2.genus_prediction, q(2));
        assert!(genus_relation_report(&corpus::book(3).complex).is_err());
    }
}

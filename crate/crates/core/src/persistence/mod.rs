//! Sublevel filtrations of a complex and Z/2 persistent homology by
//! boundary-matrix reduction.

mod bottleneck;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Serialize, Serializer};

use crate::banchoff::VertexField;
use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub use bottleneck::{bottleneck_distance, Bottleneck};

/// Per-edge values, keyed by the edge simplex.
pub type EdgeValues = BTreeMap<Simplex, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationSource {
    Height,
    Defect,
    FormanScalar,
    FormanRicciEdge,
    Explicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexRule {
    /// A vertex enters with its smallest incident edge.
    MinIncident,
    /// Every vertex enters at 0; edge values must be non-negative.
    Zero,
}

/// Simplices in entry order with their filtration values.
#[derive(Clone, Debug, Serialize)]
pub struct Filtration {
    pub source: FiltrationSource,
    pub entries: Vec<(Simplex, f64)>,
}

fn by_value_then_simplex(a: &(Simplex, f64), b: &(Simplex, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0))
}

impl Filtration {
    /// Validates monotone values, closure and face-before-coface order.
    pub fn new(source: FiltrationSource, entries: Vec<(Simplex, f64)>) -> Result<Self> {
        let mut position = HashMap::with_capacity(entries.len());
        for (i, (s, value)) in entries.iter().enumerate() {
            if value.is_nan() {
                return Err(Error::InvalidFiltration(format!("{s} has value NaN")));
            }
            if i > 0 && entries[i - 1].1 > *value {
                return Err(Error::InvalidFiltration(format!("value decreases at {s}")));
            }
            if position.insert(s, i).is_some() {
                return Err(Error::InvalidFiltration(format!("{s} appears twice")));
            }
            for f in s.facets() {
                if !position.contains_key(&f) {
                    return Err(Error::InvalidFiltration(format!("{s} precedes its face {f}")));
                }
            }
        }
        Ok(Filtration { source, entries })
    }

    /// Sorts by value, then dimension, then vertex tuple. Requires face values
    /// not to exceed coface values.
    pub fn from_values(source: FiltrationSource, mut entries: Vec<(Simplex, f64)>) -> Result<Self> {
        entries.sort_by(by_value_then_simplex);
        Filtration::new(source, entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Boundary columns as sorted row indices.
    fn boundary_columns(&self) -> Vec<Vec<usize>> {
        let position: HashMap<&Simplex, usize> = self.entries.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
        self.entries
            .iter()
            .map(|(s, _)| {
                let mut col: Vec<usize> = if s.dim() == 0 {
                    Vec::new()
                } else {
                    s.facets().map(|f| position[&f]).collect()
                };
                col.sort_unstable();
                col
            })
            .collect()
    }
}

/// Each simplex takes the maximum of its vertex values.
pub fn lower_star_filtration(
    c: &SimplicialComplex,
    field: &VertexField,
    source: FiltrationSource,
) -> Result<Filtration> {
    let mut entries = Vec::with_capacity(c.len());
    for s in c.simplices() {
        let mut value = f64::NEG_INFINITY;
        for v in s.vertices() {
            let x = *field
                .get(v)
                .ok_or_else(|| Error::Precondition(format!("vertex {v} has no field value")))?;
            value = value.max(x);
        }
        entries.push((s.clone(), value));
    }
    Filtration::from_values(source, entries)
}

/// Edges take their field values; higher simplices take the maximum over
/// their facets; vertices follow `rule`.
pub fn edge_filtration(
    c: &SimplicialComplex,
    field: &EdgeValues,
    rule: VertexRule,
    source: FiltrationSource,
) -> Result<Filtration> {
    let mut value: BTreeMap<Simplex, f64> = BTreeMap::new();
    for e in c.edges() {
        let x = *field
            .get(e)
            .ok_or_else(|| Error::Precondition(format!("edge {e} has no field value")))?;
        if rule == VertexRule::Zero && x < 0.0 {
            return Err(Error::Precondition(format!(
                "edge {e} has negative value {x}; vertices enter at 0"
            )));
        }
        value.insert(e.clone(), x);
    }
    let floor = value.values().copied().fold(f64::INFINITY, f64::min);
    let floor = if floor.is_finite() { floor } else { 0.0 };
    for v in c.vertices() {
        let x = match rule {
            VertexRule::Zero => 0.0,
            VertexRule::MinIncident => {
                let id = c.require_vertex(v)?;
                c.cofacets_of(id)
                    .iter()
                    .map(|&j| value[c.simplex(j)])
                    .fold(f64::INFINITY, f64::min)
            }
        };
        // Isolated vertices enter with the smallest value of the filtration.
        value.insert(Simplex::vertex(v), if x.is_finite() { x } else { floor });
    }
    for k in 2..=c.dim().unwrap_or(0) {
        for s in c.simplices_of_dim(k) {
            let x = s.facets().map(|f| value[&f]).fold(f64::NEG_INFINITY, f64::max);
            value.insert(s.clone(), x);
        }
    }
    Filtration::from_values(source, value.into_iter().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Naive,
    /// Reduces by decreasing dimension and zeroes columns known to be births.
    Clearing,
}

/// Index pairs of a reduced boundary matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    /// `(birth, death)` filtration positions, sorted by birth.
    pub pairs: Vec<(usize, usize)>,
    /// Positions of essential classes, ascending.
    pub essential: Vec<usize>,
}

/// Z/2 sum of sorted index lists.
fn add_columns(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn reduce(f: &Filtration, method: Reduction) -> Pairing {
    let mut cols = f.boundary_columns();
    let n = cols.len();
    let mut pivot_owner: Vec<Option<usize>> = vec![None; n];
    let reduce_column = |j: usize, cols: &mut Vec<Vec<usize>>, pivot_owner: &mut Vec<Option<usize>>| {
        while let Some(&low) = cols[j].last() {
            match pivot_owner[low] {
                Some(k) => {
                    let sum = add_columns(&cols[j], &cols[k]);
                    cols[j] = sum;
                }
                None => {
                    pivot_owner[low] = Some(j);
                    return Some(low);
                }
            }
        }
        None
    };
    match method {
        Reduction::Naive => {
            for j in 0..n {
                reduce_column(j, &mut cols, &mut pivot_owner);
            }
        }
        Reduction::Clearing => {
            let top = f.entries.iter().map(|(s, _)| s.dim()).max().unwrap_or(0);
            let mut cleared = vec![false; n];
            for k in (1..=top).rev() {
                for j in 0..n {
                    if f.entries[j].0.dim() != k || cleared[j] {
                        continue;
                    }
                    if let Some(low) = reduce_column(j, &mut cols, &mut pivot_owner) {
                        cols[low].clear();
                        cleared[low] = true;
                    }
                }
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = pivot_owner
        .iter()
        .enumerate()
        .filter_map(|(i, o)| o.map(|j| (i, j)))
        .collect();
    pairs.sort_unstable();
    let essential = (0..n)
        .filter(|&i| pivot_owner[i].is_none() && cols[i].is_empty())
        .collect();
    Pairing { pairs, essential }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub dim: usize,
    pub birth: f64,
    /// `None` for essential classes.
    pub death: Option<f64>,
}

impl Interval {
    pub fn persistence(&self) -> f64 {
        self.death.map_or(f64::INFINITY, |d| d - self.birth)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Interval", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("birth", &self.birth)?;
        match self.death {
            Some(d) => st.serialize_field("death", &d)?,
            None => st.serialize_field("death", "inf")?,
        }
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PersistenceDiagram {
    /// Sorted by dimension, birth, death; zero-length intervals omitted.
    pub intervals: Vec<Interval>,
    /// Count of essential classes per dimension, for every dimension up to the top.
    pub betti: BTreeMap<usize, usize>,
}

impl PersistenceDiagram {
    pub fn euler(&self) -> i64 {
        self.betti
            .iter()
            .map(|(&k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn in_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> + '_ {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    /// `dim,birth,death` rows with a header; essential deaths print as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for i in &self.intervals {
            let death = i.death.map_or_else(|| "inf".to_string(), |d| d.to_string());
            out.push_str(&format!("{},{},{}\n", i.dim, i.birth, death));
        }
        out
    }
}

fn interval_order(a: &Interval, b: &Interval) -> Ordering {
    let death = |i: &Interval| i.death.unwrap_or(f64::INFINITY);
    a.dim
        .cmp(&b.dim)
        .then(a.birth.total_cmp(&b.birth))
        .then(death(a).total_cmp(&death(b)))
}

pub fn diagram_from_pairing(f: &Filtration, p: &Pairing) -> PersistenceDiagram {
    let mut intervals = Vec::new();
    for &(i, j) in &p.pairs {
        let (birth, death) = (f.entries[i].1, f.entries[j].1);
        if birth < death {
            intervals.push(Interval {
                dim: f.entries[i].0.dim(),
                birth,
                death: Some(death),
            });
        }
    }
    let top = f.entries.iter().map(|(s, _)| s.dim()).max();
    let mut betti: BTreeMap<usize, usize> = top.map(|t| (0..=t).map(|k| (k, 0)).collect()).unwrap_or_default();
    for &i in &p.essential {
        let dim = f.entries[i].0.dim();
        *betti.entry(dim).or_default() += 1;
        intervals.push(Interval {
            dim,
            birth: f.entries[i].1,
            death: None,
        });
    }
    intervals.sort_by(interval_order);
    PersistenceDiagram { intervals, betti }
}

pub fn compute_persistence(f: &Filtration) -> PersistenceDiagram {
    diagram_from_pairing(f, &reduce(f, Reduction::Clearing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banchoff::{index_report, HeightOrder};
    use crate::corpus;
    use crate::geometry::{height_field, DirectionSampler, Tolerances};

    fn s(vs: &[u32]) -> Simplex {
        Simplex::new(vs.iter().copied()).unwrap()
    }

    /// Dimension-0 intervals by the elder rule on a union-find forest.
    pub(crate) fn union_find_dim0(f: &Filtration) -> Vec<(f64, Option<f64>)> {
        let mut parent: HashMap<u32, u32> = HashMap::new();
        let mut birth: HashMap<u32, (f64, usize)> = HashMap::new();
        fn find(parent: &mut HashMap<u32, u32>, v: u32) -> u32 {
            let p = parent[&v];
            if p == v {
                return v;
            }
            let r = find(parent, p);
            parent.insert(v, r);
            r
        }
        let mut out = Vec::new();
        for (pos, (simplex, value)) in f.entries.iter().enumerate() {
            match simplex.dim() {
                0 => {
                    let v = simplex.vertices()[0];
                    parent.insert(v, v);
                    birth.insert(v, (*value, pos));
                }
                1 => {
                    let (a, b) = (simplex.vertices()[0], simplex.vertices()[1]);
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra == rb {
                        continue;
                    }
                    let (old, young) = if birth[&ra].1 < birth[&rb].1 {
                        (ra, rb)
                    } else {
                        (rb, ra)
                    };
                    parent.insert(young, old);
                    if birth[&young].0 < *value {
                        out.push((birth[&young].0, Some(*value)));
                    }
                }
                _ => {}
            }
        }
        let roots: Vec<u32> = parent.keys().copied().collect();
        for v in roots {
            if find(&mut parent, v) == v {
                out.push((birth[&v].0, None));
            }
        }
        out.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.unwrap_or(f64::INFINITY).total_cmp(&b.1.unwrap_or(f64::INFINITY)))
        });
        out
    }

    fn dim0(d: &PersistenceDiagram) -> Vec<(f64, Option<f64>)> {
        d.in_dim(0).map(|i| (i.birth, i.death)).collect()
    }

    #[test]
    fn path_lower_star_order() {
        let c = SimplicialComplex::build([[1, 2], [2, 3]]).unwrap();
        let field: VertexField = [(1, 0.0), (2, 1.0), (3, 2.0)].into_iter().collect();
        let f = lower_star_filtration(&c, &field, FiltrationSource::Explicit).unwrap();
        let order: Vec<(Simplex, f64)> = vec![
            (s(&[1]), 0.0),
            (s(&[2]), 1.0),
            (s(&[1, 2]), 1.0),
            (s(&[3]), 2.0),
            (s(&[2, 3]), 2.0),
        ];
        assert_eq!(f.entries, order);
    }

    #[test]
    fn invalid_filtrations_rejected() {
        let bad = vec![(s(&[1]), 0.0), (s(&[1, 2]), 1.0), (s(&[2]), 1.0)];
        assert!(matches!(
            Filtration::new(FiltrationSource::Explicit, bad),
            Err(Error::InvalidFiltration(_))
        ));
        let bad = vec![(s(&[1]), 1.0), (s(&[2]), 0.0)];
        assert!(Filtration::new(FiltrationSource::Explicit, bad).is_err());
        let c = SimplicialComplex::build([[1, 2]]).unwrap();
        let field: VertexField = [(1, 0.0)].into_iter().collect();
        assert!(lower_star_filtration(&c, &field, FiltrationSource::Explicit).is_err());
    }

    #[test]
    fn betti_numbers() {
        let cases = [
            (corpus::hollow_triangle(), vec![1, 1]),
            (corpus::tetrahedron(), vec![1, 0, 1]),
            (corpus::csaszar_torus(), vec![1, 2, 1]),
            (corpus::genus_two(), vec![1, 4, 1]),
            (corpus::octahedral_ball(), vec![1, 0, 0, 0]),
        ];
        for (m, betti) in cases {
            let field: VertexField = m.complex.vertices().map(|v| (v, v as f64)).collect();
            let f = lower_star_filtration(&m.complex, &field, FiltrationSource::Explicit).unwrap();
            let d = compute_persistence(&f);
            let got: Vec<usize> = d.betti.values().copied().collect();
            assert_eq!(got, betti, "{}", m.name);
            assert_eq!(d.euler(), m.complex.euler_characteristic());
        }
    }

    #[test]
    fn clearing_matches_naive() {
        for m in corpus::all() {
            let field: VertexField = m.complex.vertices().map(|v| (v, ((v * 7) % 5) as f64)).collect();
            let f = lower_star_filtration(&m.complex, &field, FiltrationSource::Explicit).unwrap();
            assert_eq!(
                reduce(&f, Reduction::Naive),
                reduce(&f, Reduction::Clearing),
                "{}",
                m.name
            );
        }
    }

    #[test]
    fn edge_filtration_examples() {
        let c = SimplicialComplex::build([[1, 2, 3]]).unwrap();
        let field: EdgeValues = [(s(&[1, 2]), 1.0), (s(&[2, 3]), 2.0), (s(&[1, 3]), 3.0)]
            .into_iter()
            .collect();
        let f = edge_filtration(&c, &field, VertexRule::MinIncident, FiltrationSource::Explicit).unwrap();
        assert_eq!(f.entries.last().unwrap(), &(s(&[1, 2, 3]), 3.0));
        assert_eq!(f.entries[0], (s(&[1]), 1.0));
        let negative: EdgeValues = field.iter().map(|(k, v)| (k.clone(), -v)).collect();
        assert!(edge_filtration(&c, &negative, VertexRule::Zero, FiltrationSource::Explicit).is_err());
        let path = SimplicialComplex::build([[1, 2], [2, 3]]).unwrap();
        let field: EdgeValues = [(s(&[1, 2]), 1.0), (s(&[2, 3]), 2.0)].into_iter().collect();
        let f = edge_filtration(&path, &field, VertexRule::Zero, FiltrationSource::Explicit).unwrap();
        let d = compute_persistence(&f);
        assert_eq!(dim0(&d), union_find_dim0(&f));
        assert_eq!(dim0(&d), vec![(0.0, Some(1.0)), (0.0, Some(2.0)), (0.0, None)]);
    }

    #[test]
    fn height_filtration_critical_vertices() {
        let m = corpus::tetrahedron();
        let tol = Tolerances::default();
        for d in DirectionSampler::new(3, 10).sample(3).unwrap() {
            let field = height_field(&m.complex, &m.embedding, &d).unwrap();
            let f = lower_star_filtration(&m.complex, &field, FiltrationSource::Height).unwrap();
            let dgm = compute_persistence(&f);
            let order = HeightOrder::from_direction(&m.complex, &m.embedding, &d, &tol, false).unwrap();
            let report = index_report(&m.complex, &order, None).unwrap();
            // Every vertex of the tetrahedron sees the others as neighbours:
            // only the minimum has index 1 below and the maximum index 1 above.
            let lowest = field.values().copied().fold(f64::INFINITY, f64::min);
            let highest = field.values().copied().fold(f64::NEG_INFINITY, f64::max);
            let essential: Vec<(usize, f64)> = dgm
                .intervals
                .iter()
                .filter(|i| i.death.is_none())
                .map(|i| (i.dim, i.birth))
                .collect();
            assert_eq!(essential, vec![(0, lowest), (2, highest)]);
            assert!(dgm.intervals.iter().all(|i| i.death.is_none()));
            let critical = report
                .per_vertex_index
                .values()
                .filter(|i| **i != num_rational::Rational64::from_integer(0))
                .count();
            assert_eq!(critical, 2);
        }
    }
}

//! Finite abstract simplicial complexes.
//!
//! A [`SimplicialComplex`] is built once from a list of vertex tuples (the face
//! closure is taken automatically) and is immutable afterwards. Simplices are
//! stored sorted by `(dimension, lexicographic vertex tuple)`, and every simplex
//! gets a dense [`SimplexId`] indexing its facet and cofacet lists.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type SimplexId = usize;

/// A simplex given by its strictly increasing vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts the vertices. Fails on an empty tuple or a repeated vertex.
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut vs: Vec<VertexId> = vertices.into_iter().collect();
        if vs.is_empty() {
            return Err(Error::MalformedSimplex(vs, "empty vertex tuple"));
        }
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(vs, "repeated vertex"));
        }
        Ok(Simplex(vs))
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    pub fn edge(u: VertexId, v: VertexId) -> Self {
        if u < v {
            Simplex(vec![u, v])
        } else {
            Simplex(vec![v, u])
        }
    }

    pub(crate) fn from_sorted(vs: Vec<VertexId>) -> Self {
        debug_assert!(vs.windows(2).all(|w| w[0] < w[1]));
        Simplex(vs)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// `true` when every vertex of `self` is a vertex of `other` (non-strict).
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// The codimension-one faces, in the order obtained by dropping vertex 0, 1, ...
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut vs = self.0.clone();
            vs.remove(i);
            Simplex(vs)
        })
    }

    /// Every nonempty face, including `self`.
    pub fn faces(&self) -> Vec<Simplex> {
        let k = self.0.len();
        (1u64..(1u64 << k))
            .map(|mask| Simplex((0..k).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    /// Vertices of `self` that are not in `other`.
    pub fn difference(&self, other: &Simplex) -> Vec<VertexId> {
        self.0.iter().copied().filter(|v| !other.contains_vertex(*v)).collect()
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let set: BTreeSet<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
        Simplex(set.into_iter().collect())
    }
}

impl Ord for Simplex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Simplex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<VertexId>> for Simplex {
    type Error = Error;
    fn try_from(vs: Vec<VertexId>) -> Result<Self> {
        Simplex::new(vs)
    }
}

impl From<Simplex> for Vec<VertexId> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

/// Open star: only simplices containing `s`. Closed star: their faces as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarKind {
    Open,
    Closed,
}

/// Structural predicates computed once per complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureFlags {
    pub is_pure: bool,
    pub is_connected: bool,
    pub is_pseudomanifold: bool,
    pub is_closed_surface: bool,
    pub is_surface_with_boundary: bool,
    /// Populated for closed surfaces and surfaces with boundary.
    pub is_orientable: Option<bool>,
    /// Closed, connected, orientable surfaces only.
    pub genus: Option<i64>,
}

/// Shape of a one-dimensional complex, as needed for link tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphShape {
    /// A simple closed cycle.
    Cycle,
    /// A simple path with at least one edge.
    Path,
    /// Two poles of degree `r >= 3` joined by `r` internally disjoint paths.
    Suspension(usize),
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OpenStarReport {
    pub lhs: i64,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub rhs: Rational64,
    pub holds: bool,
}

/// First barycentric subdivision together with the simplex → barycenter-vertex map.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub barycenter: BTreeMap<Simplex, VertexId>,
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, SimplexId>,
    /// Simplices of dimension `k` occupy `dim_start[k]..dim_start[k + 1]`.
    dim_start: Vec<usize>,
    facets: Vec<Vec<SimplexId>>,
    cofacets: Vec<Vec<SimplexId>>,
    flags: OnceLock<StructureFlags>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl Default for SimplicialComplex {
    fn default() -> Self {
        Self::from_closed_set(BTreeSet::new())
    }
}

impl SimplicialComplex {
    /// Builds the face closure of the given vertex tuples.
    pub fn build<I, S>(simplex_list: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[VertexId]>,
    {
        let simplices = simplex_list
            .into_iter()
            .map(|s| Simplex::new(s.as_ref().iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_simplices(simplices))
    }

    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut closed = BTreeSet::new();
        let mut stack: Vec<Simplex> = simplices.into_iter().collect();
        while let Some(s) = stack.pop() {
            if closed.contains(&s) {
                continue;
            }
            stack.extend(s.facets());
            closed.insert(s);
        }
        Self::from_closed_set(closed)
    }

    /// Each hyperedge of `k + 1` vertices becomes a `k`-simplex; the result is
    /// the face closure (simplicial closure of the hypergraph).
    pub fn from_hypergraph<I, S>(hyperedges: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[VertexId]>,
    {
        Self::build(hyperedges)
    }

    fn from_closed_set(closed: BTreeSet<Simplex>) -> Self {
        let simplices: Vec<Simplex> = closed.into_iter().collect();
        let index: HashMap<Simplex, SimplexId> = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let top = simplices.last().map(|s| s.dim());
        let mut dim_start = vec![0usize];
        if let Some(top) = top {
            for k in 0..=top {
                let end = dim_start[k] + simplices[dim_start[k]..].partition_point(|s| s.dim() == k);
                dim_start.push(end);
            }
        }
        let mut facets = vec![Vec::new(); simplices.len()];
        let mut cofacets = vec![Vec::new(); simplices.len()];
        for (i, s) in simplices.iter().enumerate() {
            for f in s.facets() {
                let j = index[&f];
                facets[i].push(j);
                cofacets[j].push(i);
            }
        }
        for list in facets.iter_mut().chain(cofacets.iter_mut()) {
            list.sort_unstable();
        }
        SimplicialComplex {
            simplices,
            index,
            dim_start,
            facets,
            cofacets,
            flags: OnceLock::new(),
        }
    }

    /// Maximum simplex dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(Simplex::dim)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplices_of_dim(&self, k: usize) -> &[Simplex] {
        if k + 1 >= self.dim_start.len() {
            return &[];
        }
        &self.simplices[self.dim_start[k]..self.dim_start[k + 1]]
    }

    pub fn ids_of_dim(&self, k: usize) -> std::ops::Range<SimplexId> {
        if k + 1 >= self.dim_start.len() {
            return 0..0;
        }
        self.dim_start[k]..self.dim_start[k + 1]
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices_of_dim(k).len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.simplices_of_dim(0).iter().map(|s| s.0[0])
    }

    pub fn edges(&self) -> &[Simplex] {
        self.simplices_of_dim(1)
    }

    pub fn triangles(&self) -> &[Simplex] {
        self.simplices_of_dim(2)
    }

    pub fn simplex(&self, id: SimplexId) -> &Simplex {
        &self.simplices[id]
    }

    pub fn id_of(&self, s: &Simplex) -> Option<SimplexId> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub(crate) fn require(&self, s: &Simplex) -> Result<SimplexId> {
        self.id_of(s).ok_or_else(|| Error::MissingSimplex(s.clone()))
    }

    pub(crate) fn require_vertex(&self, v: VertexId) -> Result<SimplexId> {
        self.require(&Simplex::vertex(v))
    }

    pub fn facets_of(&self, id: SimplexId) -> &[SimplexId] {
        &self.facets[id]
    }

    pub fn cofacets_of(&self, id: SimplexId) -> &[SimplexId] {
        &self.cofacets[id]
    }

    /// All simplices containing simplex `id` (including itself), sorted by id.
    pub fn cofaces_of(&self, id: SimplexId) -> Vec<SimplexId> {
        let mut seen = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(i) = queue.pop_front() {
            for &j in &self.cofacets[i] {
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        let mut out: Vec<SimplexId> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Number of edges incident to `v`.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.cofacets[self.require_vertex(v)?].len())
    }

    /// Vertices joined to `v` by an edge, ascending.
    pub fn neighbors(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let id = self.require_vertex(v)?;
        Ok(self.cofacets[id]
            .iter()
            .map(|&e| {
                let vs = self.simplices[e].vertices();
                if vs[0] == v {
                    vs[1]
                } else {
                    vs[0]
                }
            })
            .collect())
    }

    pub fn maximal_simplices(&self) -> Vec<&Simplex> {
        (0..self.len())
            .filter(|&i| self.cofacets[i].is_empty())
            .map(|i| &self.simplices[i])
            .collect()
    }

    pub fn star(&self, s: &Simplex, kind: StarKind) -> Result<Vec<Simplex>> {
        let id = self.require(s)?;
        let cofaces = self.cofaces_of(id);
        match kind {
            StarKind::Open => Ok(cofaces.into_iter().map(|i| self.simplices[i].clone()).collect()),
            StarKind::Closed => {
                let mut set = BTreeSet::new();
                for i in cofaces {
                    set.extend(self.simplices[i].faces());
                }
                Ok(set.into_iter().collect())
            }
        }
    }

    /// `{τ | τ ∪ s ∈ K, τ ∩ s = ∅}` as a complex (possibly empty).
    pub fn link(&self, s: &Simplex) -> Result<SimplicialComplex> {
        let id = self.require(s)?;
        let parts = self
            .cofaces_of(id)
            .into_iter()
            .filter(|&i| i != id)
            .map(|i| Simplex::from_sorted(self.simplices[i].difference(s)));
        Ok(SimplicialComplex::from_simplices(parts))
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.dim_start.len().saturating_sub(1))
            .map(|k| sign(k) * self.count(k) as i64)
            .sum()
    }

    /// χ(K) against the alternating sum of open-star Euler characteristics,
    /// where χ of an open star counts its open cells with signs.
    pub fn open_star_euler_identity(&self) -> OpenStarReport {
        let lhs = self.euler_characteristic();
        let rhs: i64 = (0..self.len())
            .map(|id| {
                let star_chi: i64 = self
                    .cofaces_of(id)
                    .into_iter()
                    .map(|j| sign(self.simplices[j].dim()))
                    .sum();
                sign(self.simplices[id].dim()) * star_chi
            })
            .sum();
        let rhs = Rational64::from_integer(rhs);
        OpenStarReport {
            lhs,
            rhs,
            holds: Rational64::from_integer(lhs) == rhs,
        }
    }

    /// First barycentric subdivision. The barycenter of simplex `id` becomes
    /// vertex `id`; simplices are chains under the face order.
    pub fn barycentric_subdivision(&self) -> Subdivision {
        let mut chains = Vec::new();
        let mut path = Vec::new();
        for top in (0..self.len()).filter(|&i| self.cofacets[i].is_empty()) {
            self.descend(top, &mut path, &mut chains);
        }
        let simplices = chains.into_iter().map(|mut c: Vec<VertexId>| {
            c.sort_unstable();
            Simplex::from_sorted(c)
        });
        let complex = SimplicialComplex::from_simplices(simplices);
        let barycenter = self
            .simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as VertexId))
            .collect();
        Subdivision { complex, barycenter }
    }

    fn descend(&self, id: SimplexId, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        path.push(id as VertexId);
        if self.facets[id].is_empty() {
            out.push(path.clone());
        } else {
            for &f in &self.facets[id] {
                self.descend(f, path, out);
            }
        }
        path.pop();
    }

    pub fn structure(&self) -> &StructureFlags {
        self.flags.get_or_init(|| compute_flags(self))
    }

    pub fn is_pure(&self) -> bool {
        self.structure().is_pure
    }

    pub fn is_closed_surface(&self) -> bool {
        self.structure().is_closed_surface
    }

    /// Connected components of the 1-skeleton, each as a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let verts: Vec<VertexId> = self.vertices().collect();
        let pos: HashMap<VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.edges() {
            let a = find(&mut parent, pos[&e.0[0]]);
            let b = find(&mut parent, pos[&e.0[1]]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (i, v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(*v);
        }
        groups.into_values().collect()
    }

    /// Classifies a one-dimensional complex for link-pattern tests.
    pub fn graph_shape(&self) -> GraphShape {
        if self.dim() != Some(1) || !self.is_pure() || self.components().len() != 1 {
            return GraphShape::Other;
        }
        let degrees: BTreeMap<VertexId, usize> = self.vertices().map(|v| (v, self.degree(v).unwrap_or(0))).collect();
        let odd: Vec<VertexId> = degrees.iter().filter(|(_, d)| **d != 2).map(|(v, _)| *v).collect();
        match odd.len() {
            0 => GraphShape::Cycle,
            2 => {
                let (p, q) = (odd[0], odd[1]);
                let (dp, dq) = (degrees[&p], degrees[&q]);
                if dp == 1 && dq == 1 {
                    return GraphShape::Path;
                }
                if dp != dq || dp < 3 {
                    return GraphShape::Other;
                }
                // Every arc leaving p must run through degree-2 vertices to q.
                let nbrs = self.neighbors(p).unwrap_or_default();
                for start in nbrs {
                    let (mut prev, mut cur) = (p, start);
                    while cur != q {
                        if cur == p || degrees[&cur] != 2 {
                            return GraphShape::Other;
                        }
                        let next = self
                            .neighbors(cur)
                            .unwrap_or_default()
                            .into_iter()
                            .find(|&w| w != prev)
                            .unwrap_or(prev);
                        prev = cur;
                        cur = next;
                    }
                }
                GraphShape::Suspension(dp)
            }
            _ => GraphShape::Other,
        }
    }
}

pub(crate) fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn compute_flags(c: &SimplicialComplex) -> StructureFlags {
    let Some(n) = c.dim() else {
        return StructureFlags {
            is_pure: false,
            is_connected: false,
            is_pseudomanifold: false,
            is_closed_surface: false,
            is_surface_with_boundary: false,
            is_orientable: None,
            genus: None,
        };
    };
    let is_pure = c.maximal_simplices().iter().all(|s| s.dim() == n);
    let is_connected = c.components().len() == 1;

    let ridge_degrees: Vec<usize> = match n.checked_sub(1) {
        Some(r) => c.ids_of_dim(r).map(|i| c.cofacets_of(i).len()).collect(),
        None => Vec::new(),
    };
    let is_pseudomanifold = n >= 1 && is_pure && ridge_degrees.iter().all(|&d| d == 2) && strongly_connected(c, n);

    let mut is_closed_surface = false;
    let mut is_surface_with_boundary = false;
    if n == 2 && is_pure {
        let mut closed = true;
        let mut bounded = true;
        for v in c.vertices() {
            let shape = c.link(&Simplex::vertex(v)).map(|l| l.graph_shape());
            match shape {
                Ok(GraphShape::Cycle) => {}
                Ok(GraphShape::Path) => closed = false,
                _ => {
                    closed = false;
                    bounded = false;
                }
            }
        }
        let edge_ok = ridge_degrees.iter().all(|&d| d == 1 || d == 2);
        is_closed_surface = closed && ridge_degrees.iter().all(|&d| d == 2);
        is_surface_with_boundary = bounded && edge_ok && !is_closed_surface && ridge_degrees.contains(&1);
    }

    let is_orientable = (is_closed_surface || is_surface_with_boundary).then(|| orientable(c));
    let genus =
        (is_closed_surface && is_connected && is_orientable == Some(true)).then(|| (2 - c.euler_characteristic()) / 2);

    StructureFlags {
        is_pure,
        is_connected,
        is_pseudomanifold,
        is_closed_surface,
        is_surface_with_boundary,
        is_orientable,
        genus,
    }
}

/// Top simplices connected through shared codimension-one faces.
fn strongly_connected(c: &SimplicialComplex, n: usize) -> bool {
    let tops: Vec<SimplexId> = c.ids_of_dim(n).collect();
    let Some(&first) = tops.first() else {
        return false;
    };
    let mut seen = HashSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(t) = queue.pop_front() {
        for &f in c.facets_of(t) {
            for &u in c.cofacets_of(f) {
                if seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
    }
    seen.len() == tops.len()
}

/// Consistent orientation propagation over the triangles of a surface.
fn orientable(c: &SimplicialComplex) -> bool {
    // Orientation +1 means the cyclic order (a, b, c) of the sorted vertices.
    // That order traverses edges ab and bc forward and ac backward.
    fn induced(tri: &Simplex, edge: &Simplex, o: i8) -> i8 {
        let vs = tri.vertices();
        let forward = edge.vertices() != [vs[0], vs[2]];
        if forward {
            o
        } else {
            -o
        }
    }
    let tris: Vec<SimplexId> = c.ids_of_dim(2).collect();
    let mut orient: HashMap<SimplexId, i8> = HashMap::new();
    for &start in &tris {
        if orient.contains_key(&start) {
            continue;
        }
        orient.insert(start, 1);
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            let o = orient[&t];
            for &e in c.facets_of(t) {
                let edge = c.simplex(e);
                let mine = induced(c.simplex(t), edge, o);
                for &u in c.cofacets_of(e) {
                    if u == t {
                        continue;
                    }
                    // The neighbour must traverse the shared edge the other way.
                    let want = if induced(c.simplex(u), edge, 1) == -mine { 1 } else { -1 };
                    match orient.get(&u) {
                        Some(&have) if have != want => return false,
                        Some(_) => {}
                        None => {
                            orient.insert(u, want);
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
    }
    true
}

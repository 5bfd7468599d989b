//! Bottleneck distance between persistence diagrams: binary search over the
//! candidate costs with a Hopcroft-Karp perfect-matching test.

use std::collections::VecDeque;

use serde::Serialize;

use super::PersistenceDiagram;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bottleneck {
    /// `f64::INFINITY` when the essential counts differ.
    #[serde(serialize_with = "serialize_distance")]
    pub distance: f64,
    pub essential_count_mismatch: bool,
}

fn serialize_distance<S: serde::Serializer>(d: &f64, s: S) -> Result<S::Ok, S::Error> {
    if d.is_finite() {
        s.serialize_f64(*d)
    } else {
        s.serialize_str("inf")
    }
}

const NIL: usize = usize::MAX;

/// Maximum bipartite matching on `adj` (left to right), Hopcroft-Karp.
fn max_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    let n_left = adj.len();
    let mut match_l = vec![NIL; n_left];
    let mut match_r = vec![NIL; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        // Layer the free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        let mut next = vec![0usize; n_left];
        for u in 0..n_left {
            if match_l[u] == NIL && augment(u, adj, &mut match_l, &mut match_r, &mut dist, &mut next) {
                size += 1;
            }
        }
    }
}

/// Iterative layered DFS from the free vertex `root`.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next[u] == adj[u].len() {
            dist[u] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][next[u]];
        next[u] += 1;
        let w = match_r[v];
        if w == NIL {
            // Flip the path recorded on the stack.
            let mut v = v;
            while let Some(x) = stack.pop() {
                let prev = match_l[x];
                match_l[x] = v;
                match_r[v] = x;
                v = prev;
            }
            return true;
        }
        if dist[w] != usize::MAX && dist[w] == dist[u] + 1 {
            stack.push(w);
        }
    }
    false
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn to_diagonal(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

/// Finite-point bottleneck distance. Left side holds `a` then one diagonal
/// slot per point of `b`; right side holds `b` then one diagonal slot per
/// point of `a`.
fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (n, m) = (a.len(), b.len());
    if n + m == 0 {
        return 0.0;
    }
    let mut candidates = vec![0.0];
    for &p in a {
        candidates.push(to_diagonal(p));
        candidates.extend(b.iter().map(|&q| linf(p, q)));
    }
    candidates.extend(b.iter().map(|&q| to_diagonal(q)));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let feasible = |t: f64| {
        let mut adj = vec![Vec::new(); n + m];
        for i in 0..n {
            for j in 0..m {
                if linf(a[i], b[j]) <= t {
                    adj[i].push(j);
                }
            }
            if to_diagonal(a[i]) <= t {
                adj[i].push(m + i);
            }
        }
        for j in 0..m {
            if to_diagonal(b[j]) <= t {
                adj[n + j].push(j);
            }
            adj[n + j].extend(m..m + n);
        }
        max_matching(&adj, n + m) == n + m
    };
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Bottleneck distance restricted to dimension `dim`. Essential classes are
/// matched to essential classes by sorted birth.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: usize) -> Bottleneck {
    let split = |d: &PersistenceDiagram| {
        let mut finite = Vec::new();
        let mut essential = Vec::new();
        for i in d.in_dim(dim) {
            match i.death {
                Some(death) => finite.push((i.birth, death)),
                None => essential.push(i.birth),
            }
        }
        essential.sort_by(f64::total_cmp);
        (finite, essential)
    };
    let (fa, ea) = split(a);
    let (fb, eb) = split(b);
    if ea.len() != eb.len() {
        return Bottleneck {
            distance: f64::INFINITY,
            essential_count_mismatch: true,
        };
    }
    let essential = ea.iter().zip(&eb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Bottleneck {
        distance: finite_bottleneck(&fa, &fb).max(essential),
        essential_count_mismatch: false,
    }
}

#[cfg(test)]
mod tests {
    use super::super::Interval;
    use super::*;
    use std::collections::BTreeMap;

    fn diagram(points: &[(f64, Option<f64>)]) -> PersistenceDiagram {
        PersistenceDiagram {
            intervals: points
                .iter()
                .map(|&(birth, death)| Interval { dim: 0, birth, death })
                .collect(),
            betti: BTreeMap::new(),
        }
    }

    /// Exhaustive minimum over all assignments of the augmented point sets.
    fn brute_force(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
        let n = a.len() + b.len();
        let cost = |i: usize, j: usize| -> f64 {
            match (i < a.len(), j < b.len()) {
                (true, true) => linf(a[i], b[j]),
                (true, false) => {
                    if j - b.len() == i {
                        to_diagonal(a[i])
                    } else {
                        f64::INFINITY
                    }
                }
                (false, true) => to_diagonal(b[j]),
                (false, false) => 0.0,
            }
        };
        fn go(
            i: usize,
            n: usize,
            used: &mut Vec<bool>,
            cost: &dyn Fn(usize, usize) -> f64,
            worst: f64,
            best: &mut f64,
        ) {
            if worst >= *best {
                return;
            }
            if i == n {
                *best = worst;
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    go(i + 1, n, used, cost, worst.max(cost(i, j)), best);
                    used[j] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        go(0, n, &mut vec![false; n], &cost, 0.0, &mut best);
        if n == 0 {
            0.0
        } else {
            best
        }
    }

    #[test]
    fn examples() {
        let a = diagram(&[(0.0, Some(1.0))]);
        let empty = diagram(&[]);
        assert_eq!(bottleneck_distance(&a, &empty, 0).distance, 0.5);
        assert_eq!(bottleneck_distance(&a, &a, 0).distance, 0.0);
        let b = diagram(&[(0.0, Some(1.2)), (0.5, None)]);
        let c = diagram(&[(0.1, Some(1.0)), (0.8, None)]);
        assert!((bottleneck_distance(&b, &c, 0).distance - 0.3).abs() < 1e-12);
        let r = bottleneck_distance(&b, &a, 0);
        assert!(r.essential_count_mismatch && r.distance.is_infinite());
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let na = rng.random_range(0..4);
            let nb = rng.random_range(0..4);
            let mut pts = |k: usize| -> Vec<(f64, f64)> {
                (0..k)
                    .map(|_| {
                        let b: f64 = rng.random_range(0.0..1.0);
                        (b, b + rng.random_range(0.0..1.0))
                    })
                    .collect()
            };
            let (a, b) = (pts(na), pts(nb));
            let fast = finite_bottleneck(&a, &b);
            assert!((fast - brute_force(&a, &b)).abs() < 1e-12, "{a:?} {b:?}");
            assert_eq!(fast, finite_bottleneck(&b, &a));
        }
    }
}

//! Conflict graphs `T_F(m)` and acyclic-orientation counts.
//!
//! The count `a(G)` comes from Stanley's identity
//! `a(G) = (-1)^{|V|} χ_G(-1)`, with the chromatic polynomial computed by
//! memoized deletion–contraction. [`brute_force_acyclic_count`] enumerates
//! orientations directly and serves as the oracle.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::poly::IntPolynomial;
use crate::set::ProcessSet;

/// Graphs handled by the bitmask engine have at most this many vertices.
pub const MAX_VERTICES: usize = 64;

/// Simple undirected graph whose vertices are `(member, copy)` labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    labels: Vec<(ProcessSet, usize)>,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    /// Unlabeled graph on `n` vertices; labels become `(∅, i)`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..n).map(|i| (ProcessSet::EMPTY, i)).collect();
        Self::with_labels(labels, edges.iter().copied())
    }

    fn with_labels(
        labels: Vec<(ProcessSet, usize)>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = labels.len();
        let mut es: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(invalid(format!("loop at vertex {u}")));
            }
            es.push((u.min(v), u.max(v)));
        }
        es.sort_unstable();
        es.dedup();
        Ok(SimpleGraph { labels, edges: es })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, &edges).expect("valid complete graph")
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[(ProcessSet, usize)] {
        &self.labels
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn to_bits(&self, max_edges: usize) -> Result<BitGraph> {
        if self.edges.len() > max_edges {
            return Err(Error::ResourceLimit {
                cap: "max-graph-edges",
                limit: max_edges,
            });
        }
        if self.vertex_count() > MAX_VERTICES {
            return Err(Error::ResourceLimit {
                cap: "max-graph-vertices",
                limit: MAX_VERTICES,
            });
        }
        let mut adj = vec![0u64; self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(BitGraph { adj })
    }
}

/// `T_F(m)`: vertices `(F, i)` for `i in 1..=m(F)`, joined when distinct
/// and `F ∩ F' ≠ ∅`. `multiplicities` pairs members with positive counts.
pub fn conflict_graph(h: &Hypergraph, multiplicities: &[(ProcessSet, u32)]) -> Result<SimpleGraph> {
    let mut labels = Vec::new();
    for &(f, count) in multiplicities {
        if !h.is_member(f)? {
            return Err(invalid(format!("{f} is not a member of the hypergraph")));
        }
        labels.extend((1..=count as usize).map(|i| (f, i)));
    }
    let mut edges = Vec::new();
    for u in 0..labels.len() {
        for v in u + 1..labels.len() {
            if labels[u].0.intersects(labels[v].0) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::with_labels(labels, edges)
}

/// Adjacency bitmasks; vertex `i` is index `i` of `adj`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BitGraph {
    adj: Vec<u64>,
}

impl BitGraph {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    fn components(&self) -> Vec<u64> {
        let n = self.n();
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..n {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adj[v] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    fn induced(&self, keep: u64) -> BitGraph {
        let idx: Vec<usize> = (0..self.n()).filter(|&v| keep >> v & 1 == 1).collect();
        let adj = idx
            .iter()
            .map(|&v| {
                idx.iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.adj[v] >> w & 1 == 1)
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        BitGraph { adj }
    }

    fn remove_edge(&self, u: usize, v: usize) -> BitGraph {
        let mut g = self.clone();
        g.adj[u] &= !(1 << v);
        g.adj[v] &= !(1 << u);
        g
    }

    fn add_edge(&self, u: usize, v: usize) -> BitGraph {
        let mut g = self.clone();
        g.adj[u] |= 1 << v;
        g.adj[v] |= 1 << u;
        g
    }

    /// Merge `v` into `u` and delete `v`.
    fn contract(&self, u: usize, v: usize) -> BitGraph {
        let mut merged = self.adj.clone();
        merged[u] |= merged[v];
        merged[u] &= !(1 << u | 1 << v);
        for (w, a) in merged.iter_mut().enumerate() {
            if w != u && *a >> v & 1 == 1 {
                *a |= 1 << u;
            }
        }
        let keep = !(1u64 << v) & low_bits(self.n());
        BitGraph { adj: merged }.induced(keep)
    }

    /// Relabeling by degree refinement; cheap and not a full isomorphism
    /// canonizer.
    fn canonical(&self) -> BitGraph {
        let n = self.n();
        let deg: Vec<u32> = self.adj.iter().map(|a| a.count_ones()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        let signature = |v: usize| {
            let mut nd: Vec<u32> = (0..n).filter(|&w| self.adj[v] >> w & 1 == 1).map(|w| deg[w]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        };
        let sigs: Vec<_> = (0..n).map(signature).collect();
        order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]).then(a.cmp(&b)));
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let adj = order
            .iter()
            .map(|&v| {
                (0..n)
                    .filter(|&w| self.adj[v] >> w & 1 == 1)
                    .fold(0u64, |acc, w| acc | 1 << pos[w])
            })
            .collect();
        BitGraph { adj }
    }
}

fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Chromatic polynomial evaluator with a memo table that can be shared
/// across calls (and threads); memo hits never change results.
#[derive(Debug)]
pub struct ChromaticSolver {
    max_edges: usize,
    memo: Mutex<HashMap<BitGraph, IntPolynomial>>,
}

impl ChromaticSolver {
    pub fn new(max_edges: usize) -> Self {
        ChromaticSolver {
            max_edges,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn chromatic_polynomial(&self, g: &SimpleGraph) -> Result<IntPolynomial> {
        let bits = g.to_bits(self.max_edges)?;
        Ok(self.chromatic(&bits))
    }

    /// `a(G) = (-1)^{|V|} χ_G(-1)`.
    pub fn acyclic_count(&self, g: &SimpleGraph) -> Result<BigUint> {
        let chi = self.chromatic_polynomial(g)?;
        let mut value = chi.eval(&BigInt::from(-1));
        if g.vertex_count() % 2 == 1 {
            value = -value;
        }
        value
            .to_biguint()
            .ok_or_else(|| Error::Invariant(format!("negative acyclic orientation count {value}")))
    }

    fn chromatic(&self, g: &BitGraph) -> IntPolynomial {
        let n = g.n();
        if n == 0 {
            return IntPolynomial::one();
        }
        let comps = g.components();
        if comps.len() > 1 {
            return comps
                .iter()
                .map(|&c| self.chromatic_connected(&g.induced(c)))
                .fold(IntPolynomial::one(), |acc, p| &acc * &p);
        }
        self.chromatic_connected(g)
    }

    fn chromatic_connected(&self, g: &BitGraph) -> IntPolynomial {
        let n = g.n();
        let e = g.edge_count();
        let q = IntPolynomial::q();
        let q_minus_1 = IntPolynomial::from_i64s(&[-1, 1]);
        if e == n * (n - 1) / 2 {
            return IntPolynomial::falling_factorial(n);
        }
        if e == n - 1 {
            // tree
            return &q * &q_minus_1.pow(n as u32 - 1);
        }
        if e == n && g.adj.iter().all(|a| a.count_ones() == 2) {
            // cycle: (q-1)^n + (-1)^n (q-1)
            let tail = if n.is_multiple_of(2) { q_minus_1.clone() } else { -&q_minus_1 };
            return &q_minus_1.pow(n as u32) + &tail;
        }

        let key = g.canonical();
        if let Some(p) = self.memo.lock().expect("memo lock").get(&key) {
            return p.clone();
        }
        let g = &key;
        let result = if 2 * e > n * (n - 1) / 2 {
            // dense: χ(G) = χ(G + uv) + χ(G / uv) for a non-edge uv
            let (u, v) = best_pair(g, false);
            &self.chromatic(&g.add_edge(u, v)) + &self.chromatic(&g.contract(u, v))
        } else {
            // sparse: χ(G) = χ(G - uv) - χ(G / uv) for an edge uv
            let (u, v) = best_pair(g, true);
            &self.chromatic(&g.remove_edge(u, v)) - &self.chromatic(&g.contract(u, v))
        };
        self.memo
            .lock()
            .expect("memo lock")
            .insert(key.clone(), result.clone());
        result
    }
}

/// Edge (or non-edge) whose endpoints share the most neighbours, so the
/// contraction collapses as many parallel edges as possible.
fn best_pair(g: &BitGraph, edge: bool) -> (usize, usize) {
    let n = g.n();
    let mut best = None;
    let mut best_score = -1i64;
    for u in 0..n {
        for v in u + 1..n {
            if (g.adj[u] >> v & 1 == 1) != edge {
                continue;
            }
            let score = (g.adj[u] & g.adj[v]).count_ones() as i64;
            if score > best_score {
                best_score = score;
                best = Some((u, v));
            }
        }
    }
    best.expect("graph has a pair of the requested kind")
}

/// Chromatic polynomial with a fresh memo table.
pub fn chromatic_polynomial(g: &SimpleGraph, max_edges: usize) -> Result<IntPolynomial> {
    ChromaticSolver::new(max_edges).chromatic_polynomial(g)
}

/// Number of acyclic orientations via the chromatic polynomial at `-1`.
pub fn acyclic_count(g: &SimpleGraph, max_edges: usize) -> Result<BigUint> {
    ChromaticSolver::new(max_edges).acyclic_count(g)
}

/// Largest edge count accepted by [`brute_force_acyclic_count`].
pub const BRUTE_FORCE_MAX_EDGES: usize = 24;

/// Counts acyclic orientations by trying all `2^|E|` of them.
pub fn brute_force_acyclic_count(g: &SimpleGraph) -> Result<BigUint> {
    let edges = g.edges();
    if edges.len() > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::ResourceLimit {
            cap: "brute-force-edges",
            limit: BRUTE_FORCE_MAX_EDGES,
        });
    }
    let n = g.vertex_count();
    let mut count = 0u64;
    let mut out = vec![Vec::new(); n];
    for mask in 0u32..(1u32 << edges.len()) {
        for o in out.iter_mut() {
            o.clear();
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 0 {
                out[u].push(v);
            } else {
                out[v].push(u);
            }
        }
        if is_acyclic_digraph(&out) {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// Kahn's algorithm on an adjacency list.
pub(crate) fn is_acyclic_digraph(out: &[Vec<usize>]) -> bool {
    let n = out.len();
    let mut indeg = vec![0usize; n];
    for targets in out {
        for &w in targets {
            indeg[w] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    removed == n
}

/// `m!` as a convenience for the `K_m` identity.
pub fn complete_graph_count(m: usize) -> BigUint {
    (1..=m as u64).fold(BigUint::one(), |acc, i| acc * i)
}

//! Brute-force ground truth for the coefficients `b(m)`.
//!
//! A partial sequence `(F, j)` picks a level `j(i) ∈ [k_i]` for every
//! process `i ∈ F`. A family of partial sequences is *separated* when two
//! distinct sequences never use the same level on a shared process, and
//! *acyclic* when it is separated and its conflict digraph has no directed
//! cycle. Counting acyclic families with `m(F)` sequences on each member
//! `F` must reproduce `b(m)` exactly.
//!
//! Conflict-digraph edge rule: `(F, j) -> (F', j')` whenever `F ∩ F' ≠ ∅`
//! and `j(i) < j'(i)` for *some* shared `i`. A pair whose comparisons
//! disagree across a shared pair of processes (for instance `(1,2)` and
//! `(2,1)` on `{1,2}`) therefore forms a 2-cycle. Such a pair cannot be
//! realized by strictly increasing coordinates, and excluding it is what
//! makes the counts match `b(m)`. When all pairwise intersections are
//! singletons the some/all readings coincide.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::limits::OracleLimits;
use crate::orientations::is_acyclic_digraph;
use crate::series::{Engine, MultiplicityMap, ProblemInstance};
use crate::set::ProcessSet;

/// `(F, j)`: `levels[t]` is the level of the `t`-th smallest element of `F`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialSequence {
    set: ProcessSet,
    levels: Vec<u32>,
}

impl PartialSequence {
    /// `levels` lists `j(i)` for the elements of `set` in increasing order.
    pub fn new(set: ProcessSet, levels: Vec<u32>) -> Result<Self> {
        if levels.len() != set.len() {
            return Err(invalid(format!(
                "{set} needs {} levels, got {}",
                set.len(),
                levels.len()
            )));
        }
        if levels.contains(&0) {
            return Err(invalid("levels are 1-based"));
        }
        Ok(PartialSequence { set, levels })
    }

    pub fn set(&self) -> ProcessSet {
        self.set
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    /// `j(i)`, or `None` when `i ∉ F`.
    pub fn level(&self, i: usize) -> Option<u32> {
        self.set.iter().position(|x| x == i).map(|t| self.levels[t])
    }

    fn fits(&self, k: &[u32]) -> bool {
        self.set
            .iter()
            .zip(&self.levels)
            .all(|(i, &j)| i < k.len() && j <= k[i])
    }

    /// Some shared process has a strictly smaller level in `self`.
    fn precedes(&self, other: &PartialSequence) -> bool {
        self.set
            .intersection(other.set)
            .iter()
            .any(|i| self.level(i) < other.level(i))
    }

    fn clashes(&self, other: &PartialSequence) -> bool {
        self.set
            .intersection(other.set)
            .iter()
            .any(|i| self.level(i) == other.level(i))
    }
}

impl fmt::Debug for PartialSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.set, self.levels)
    }
}

/// A finite set of partial sequences.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialSequenceFamily {
    seqs: BTreeSet<PartialSequence>,
}

impl PartialSequenceFamily {
    pub fn new(seqs: impl IntoIterator<Item = PartialSequence>) -> Self {
        PartialSequenceFamily {
            seqs: seqs.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &PartialSequence> {
        self.seqs.iter()
    }

    /// Multiplicity of each member among the sequences.
    pub fn multiplicities(&self) -> BTreeMap<ProcessSet, u32> {
        let mut m = BTreeMap::new();
        for s in &self.seqs {
            *m.entry(s.set).or_insert(0) += 1;
        }
        m
    }
}

pub fn is_separated(r: &PartialSequenceFamily) -> bool {
    let seqs: Vec<&PartialSequence> = r.seqs.iter().collect();
    seqs.iter()
        .enumerate()
        .all(|(a, s)| seqs[a + 1..].iter().all(|t| !s.clashes(t)))
}

fn conflict_digraph(seqs: &[&PartialSequence]) -> Vec<Vec<usize>> {
    (0..seqs.len())
        .map(|a| {
            (0..seqs.len())
                .filter(|&b| a != b && seqs[a].precedes(seqs[b]))
                .collect()
        })
        .collect()
}

pub fn is_acyclic_family(r: &PartialSequenceFamily) -> bool {
    if !is_separated(r) {
        return false;
    }
    let seqs: Vec<&PartialSequence> = r.seqs.iter().collect();
    is_acyclic_digraph(&conflict_digraph(&seqs))
}

/// Direct feasibility check for the linear system of a family: levels
/// `(i, j)` must increase strictly in `j` and the levels named by each
/// sequence must coincide. Returns an integer solution `x[i][j-1]` when
/// one exists.
pub fn realize(k: &[u32], r: &PartialSequenceFamily) -> Option<Vec<Vec<u32>>> {
    let offsets: Vec<usize> = k
        .iter()
        .scan(0usize, |acc, &ki| {
            let start = *acc;
            *acc += ki as usize;
            Some(start)
        })
        .collect();
    let total: usize = k.iter().map(|&x| x as usize).sum();
    let node = |i: usize, j: u32| offsets[i] + j as usize - 1;

    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for s in &r.seqs {
        if !s.fits(k) {
            return None;
        }
        let nodes: Vec<usize> = s.set.iter().zip(&s.levels).map(|(i, &j)| node(i, j)).collect();
        for w in nodes.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let class: Vec<usize> = (0..total).map(|x| find(&mut parent, x)).collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, &ki) in k.iter().enumerate() {
        for j in 1..ki {
            let (a, b) = (class[node(i, j)], class[node(i, j + 1)]);
            if a == b {
                return None;
            }
            out[a].push(b);
        }
    }
    // longest-path levels over the class DAG
    let mut indeg = vec![0usize; total];
    for targets in &out {
        for &b in targets {
            indeg[b] += 1;
        }
    }
    let mut level = vec![1u32; total];
    let mut stack: Vec<usize> = (0..total).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            level[w] = level[w].max(level[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    if seen < total {
        return None;
    }
    Some(
        k.iter()
            .enumerate()
            .map(|(i, &ki)| (1..=ki).map(|j| level[class[node(i, j)]]).collect())
            .collect(),
    )
}

fn check_caps(p: &ProblemInstance, limits: &OracleLimits) -> Result<()> {
    if p.n() > limits.max_n {
        return Err(Error::ResourceLimit {
            cap: "oracle-max-n",
            limit: limits.max_n,
        });
    }
    if p.k().iter().any(|&k| k > limits.max_k) {
        return Err(Error::ResourceLimit {
            cap: "oracle-max-k",
            limit: limits.max_k as usize,
        });
    }
    Ok(())
}

/// All level vectors `j ∈ [k_F]` in lexicographic order.
fn level_vectors(set: ProcessSet, k: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for i in set.iter() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=k[i]).map(move |j| {
                    let mut v = prefix.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
    }
    out
}

/// Visits every acyclic family with exactly `m(F)` sequences on each `F`.
fn for_each_acyclic_family(
    p: &ProblemInstance,
    m: &MultiplicityMap,
    limits: &OracleLimits,
    mut visit: impl FnMut(&[PartialSequence]),
) -> Result<()> {
    check_caps(p, limits)?;
    if m.weight() > limits.max_weight {
        return Err(Error::ResourceLimit {
            cap: "oracle-max-weight",
            limit: limits.max_weight,
        });
    }
    for f in m.support() {
        if !p.hypergraph().is_member(f)? {
            return Err(invalid(format!("{f} is not a member of the hypergraph")));
        }
    }
    // one slot per sequence to place; candidates for a slot of member F
    let mut slots: Vec<(Vec<PartialSequence>, bool)> = Vec::new();
    for (f, count) in m.entries() {
        let candidates: Vec<PartialSequence> = level_vectors(f, p.k())
            .into_iter()
            .map(|levels| PartialSequence { set: f, levels })
            .collect();
        for c in 0..count {
            slots.push((candidates.clone(), c > 0));
        }
    }

    fn place(
        slots: &[(Vec<PartialSequence>, bool)],
        idx: usize,
        min_start: usize,
        chosen: &mut Vec<PartialSequence>,
        visit: &mut dyn FnMut(&[PartialSequence]),
    ) {
        if idx == slots.len() {
            visit(chosen);
            return;
        }
        let (candidates, continues_block) = &slots[idx];
        let start = if *continues_block { min_start } else { 0 };
        for (c, cand) in candidates.iter().enumerate().skip(start) {
            if chosen.iter().any(|s| s.clashes(cand)) {
                continue;
            }
            chosen.push(cand.clone());
            let refs: Vec<&PartialSequence> = chosen.iter().collect();
            if is_acyclic_digraph(&conflict_digraph(&refs)) {
                let next_start = if slots.get(idx + 1).is_some_and(|s| s.1) { c + 1 } else { 0 };
                place(slots, idx + 1, next_start, chosen, visit);
            }
            chosen.pop();
        }
    }
    place(&slots, 0, 0, &mut Vec::new(), &mut visit);
    Ok(())
}

/// `|A_F(m)|` by exhaustive search.
pub fn count_acyclic_families(
    p: &ProblemInstance,
    m: &MultiplicityMap,
    limits: &OracleLimits,
) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_acyclic_family(p, m, limits, |_| count += 1)?;
    Ok(BigUint::from(count))
}

/// Every member of `A_F(m)`, in canonical order.
pub fn acyclic_families(
    p: &ProblemInstance,
    m: &MultiplicityMap,
    limits: &OracleLimits,
) -> Result<Vec<PartialSequenceFamily>> {
    let mut out = Vec::new();
    for_each_acyclic_family(p, m, limits, |seqs| {
        out.push(PartialSequenceFamily::new(seqs.iter().cloned()))
    })?;
    out.sort();
    Ok(out)
}

/// Image of an acyclic family: an orientation of `T_F(m)` that orders
/// the copies of each member by index, plus per-process level blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauImage {
    /// Vertices `(F, copy)` with copies numbered from 1, canonical order.
    pub vertices: Vec<(ProcessSet, usize)>,
    /// Oriented edges `(from, to)` as vertex indices, sorted.
    pub arcs: Vec<(usize, usize)>,
    /// `blocks[i] = { j(i) : (F, j) ∈ R, i ∈ F }`.
    pub blocks: Vec<BTreeSet<u32>>,
}

impl TauImage {
    /// Whether `a -> b` is an arc.
    fn points(&self, a: usize, b: usize) -> bool {
        self.arcs.binary_search(&(a, b)).is_ok()
    }
}

/// The encoding `R -> (orientation, B_1, .., B_n)`.
pub fn tau_encode(p: &ProblemInstance, r: &PartialSequenceFamily) -> Result<TauImage> {
    if !is_acyclic_family(r) {
        return Err(invalid("tau_encode needs an acyclic family"));
    }
    if let Some(s) = r.seqs.iter().find(|s| !s.fits(p.k())) {
        return Err(invalid(format!("{s:?} exceeds k")));
    }
    // copies of one member are totally ordered componentwise; the set
    // order (lexicographic on levels) agrees with it
    let mut vertices = Vec::new();
    let mut owner: Vec<&PartialSequence> = Vec::new();
    let mut copy = 0;
    let mut last = None;
    for s in &r.seqs {
        copy = if last == Some(s.set) { copy + 1 } else { 1 };
        last = Some(s.set);
        vertices.push((s.set, copy));
        owner.push(s);
    }
    let mut arcs = Vec::new();
    for a in 0..vertices.len() {
        for b in 0..vertices.len() {
            if a == b || !vertices[a].0.intersects(vertices[b].0) {
                continue;
            }
            let forward = if vertices[a].0 == vertices[b].0 {
                vertices[a].1 < vertices[b].1
            } else {
                owner[a].precedes(owner[b])
            };
            if forward {
                arcs.push((a, b));
            }
        }
    }
    arcs.sort_unstable();
    let mut blocks = vec![BTreeSet::new(); p.n()];
    for s in &r.seqs {
        for (i, &j) in s.set.iter().zip(&s.levels) {
            blocks[i].insert(j);
        }
    }
    Ok(TauImage {
        vertices,
        arcs,
        blocks,
    })
}

/// Rebuilds the family from its image: for each process `i`, the copies
/// containing `i` form a clique, totally ordered by the orientation, and
/// receive the elements of `B_i` in increasing order.
pub fn tau_decode(p: &ProblemInstance, image: &TauImage) -> Result<PartialSequenceFamily> {
    if image.blocks.len() != p.n() {
        return Err(invalid("one block per process is required"));
    }
    let mut levels: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); image.vertices.len()];
    for (i, block) in image.blocks.iter().enumerate() {
        let mut group: Vec<usize> = (0..image.vertices.len())
            .filter(|&v| image.vertices[v].0.contains(i))
            .collect();
        if group.len() != block.len() {
            return Err(invalid(format!(
                "block for process {} has {} levels but {} copies contain it",
                i + 1,
                block.len(),
                group.len()
            )));
        }
        // rank inside the clique = number of in-arcs from the clique
        let ranks: BTreeMap<usize, usize> = group
            .iter()
            .map(|&v| (v, group.iter().filter(|&&u| image.points(u, v)).count()))
            .collect();
        group.sort_by_key(|v| ranks[v]);
        if group.iter().enumerate().any(|(pos, v)| ranks[v] != pos) {
            return Err(invalid(format!("orientation is not a total order on process {}", i + 1)));
        }
        for (&v, &j) in group.iter().zip(block) {
            levels[v].insert(i, j);
        }
    }
    let seqs = image
        .vertices
        .iter()
        .zip(levels)
        .map(|(&(set, _), lv)| PartialSequence::new(set, lv.into_values().collect()))
        .collect::<Result<Vec<_>>>()?;
    Ok(PartialSequenceFamily::new(seqs))
}

/// One multiplicity map in a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationEntry {
    pub m: MultiplicityMap,
    pub formula: BigUint,
    /// `None` when the map is heavier than the oracle's weight cap.
    pub enumerated: Option<BigUint>,
}

impl VerificationEntry {
    pub fn agrees(&self) -> bool {
        self.enumerated.as_ref().is_none_or(|c| *c == self.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub entries: Vec<VerificationEntry>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(VerificationEntry::agrees)
    }

    pub fn checked(&self) -> usize {
        self.entries.iter().filter(|e| e.enumerated.is_some()).count()
    }

    pub fn skipped(&self) -> usize {
        self.entries.len() - self.checked()
    }
}

/// Compares `|A_F(m)|` with `b(m)` for every feasible `m`. Maps heavier
/// than `limits.max_weight` are listed without an enumerated count.
pub fn verify_counts(
    engine: &Engine,
    p: &ProblemInstance,
    limits: &OracleLimits,
) -> Result<VerificationReport> {
    check_caps(p, limits)?;
    let mut entries = Vec::new();
    for m in engine.enumerate_multiplicities(p)? {
        let formula = engine.coefficient_b(p, &m)?;
        let enumerated = if m.weight() <= limits.max_weight {
            Some(count_acyclic_families(p, &m, limits)?)
        } else {
            None
        };
        entries.push(VerificationEntry { m, formula, enumerated });
    }
    Ok(VerificationReport { entries })
}

/// `|A_F(m)|` should be the number of copy-ordered acyclic orientations
/// times the number of block choices; this returns the block-choice
/// count `prod_i C(k_i, load_i)`, or zero when infeasible.
pub fn block_choices(p: &ProblemInstance, m: &MultiplicityMap) -> BigUint {
    m.loads(p.n())
        .iter()
        .zip(p.k())
        .map(|(&load, &k)| crate::poly::binomial(k as u64, load))
        .fold(BigUint::from(1u32), |acc, b| {
            if b.is_zero() {
                BigUint::zero()
            } else {
                acc * b.to_biguint().expect("binomial is nonnegative")
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn set(xs: &[usize]) -> ProcessSet {
        ProcessSet::from_indices(xs.iter().map(|x| x - 1)).unwrap()
    }

    fn seq(f: &[usize], levels: &[u32]) -> PartialSequence {
        PartialSequence::new(set(f), levels.to_vec()).unwrap()
    }

    fn fam(seqs: &[(&[usize], &[u32])]) -> PartialSequenceFamily {
        PartialSequenceFamily::new(seqs.iter().map(|(f, l)| seq(f, l)))
    }

    fn inst(n: usize, gens: &[&[usize]], k: &[u32]) -> ProblemInstance {
        let h = Hypergraph::new(n, gens.iter().map(|g| set(g))).unwrap();
        ProblemInstance::new(h, k.to_vec()).unwrap()
    }

    fn mm(entries: &[(&[usize], u32)]) -> MultiplicityMap {
        MultiplicityMap::new(entries.iter().map(|(f, v)| (set(f), *v))).unwrap()
    }

    const PAIRS: [&[usize]; 3] = [&[1, 2], &[2, 3], &[1, 3]];

    #[test]
    fn separation() {
        assert!(!is_separated(&fam(&[(&[1, 2], &[1, 1]), (&[2, 3], &[1, 1])])));
        assert!(is_separated(&fam(&[(&[1, 2], &[1, 1]), (&[2, 3], &[2, 1])])));
        assert!(is_separated(&fam(&[(&[1, 2], &[1, 1])])));
    }

    #[test]
    fn figure_families() {
        // levels are listed in increasing element order: {1,3} -> (j(1), j(3))
        let ffig1 = fam(&[(PAIRS[0], &[1, 1]), (PAIRS[1], &[2, 1]), (PAIRS[2], &[2, 2])]);
        assert!(is_acyclic_family(&ffig1));
        let grempty = fam(&[(PAIRS[0], &[2, 1]), (PAIRS[1], &[2, 1]), (PAIRS[2], &[1, 2])]);
        assert!(is_separated(&grempty));
        assert!(!is_acyclic_family(&grempty));
        let k = [2, 2, 2];
        assert!(realize(&k, &ffig1).is_some());
        assert!(realize(&k, &grempty).is_none());
    }

    #[test]
    fn mixed_pair_is_a_two_cycle() {
        let r = fam(&[(&[1, 2], &[1, 2]), (&[1, 2], &[2, 1])]);
        assert!(is_separated(&r));
        assert!(!is_acyclic_family(&r));
        assert!(realize(&[2, 2], &r).is_none());
        let ordered = fam(&[(&[1, 2], &[1, 1]), (&[1, 2], &[2, 2])]);
        assert!(is_acyclic_family(&ordered));
        assert_eq!(realize(&[2, 2], &ordered), Some(vec![vec![1, 2], vec![1, 2]]));
    }

    #[test]
    fn counts() {
        let lim = OracleLimits::default();
        let p = inst(2, &[&[1, 2]], &[1, 1]);
        assert_eq!(count_acyclic_families(&p, &mm(&[(&[1, 2], 1)]), &lim).unwrap(), BigUint::from(1u32));
        let p = inst(2, &[&[1, 2]], &[2, 2]);
        assert_eq!(count_acyclic_families(&p, &mm(&[(&[1, 2], 2)]), &lim).unwrap(), BigUint::from(1u32));
        assert_eq!(count_acyclic_families(&p, &mm(&[(&[1, 2], 1)]), &lim).unwrap(), BigUint::from(4u32));
        let p = inst(3, &[&[1, 2], &[2, 3]], &[1, 1, 1]);
        assert_eq!(
            count_acyclic_families(&p, &mm(&[(&[1, 2], 1), (&[2, 3], 1)]), &lim).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn caps() {
        let lim = OracleLimits::default();
        let p = inst(2, &[&[1, 2]], &[5, 1]);
        assert!(matches!(
            count_acyclic_families(&p, &mm(&[(&[1, 2], 1)]), &lim),
            Err(Error::ResourceLimit { cap: "oracle-max-k", .. })
        ));
        let p = inst(3, &[&[1, 2, 3]], &[4, 4, 4]);
        assert!(matches!(
            count_acyclic_families(&p, &mm(&[(&[1, 2, 3], 4)]), &lim),
            Err(Error::ResourceLimit { cap: "oracle-max-weight", .. })
        ));
    }

    #[test]
    fn tau_small_cases() {
        let p = inst(3, &[&[1, 2, 3]], &[2, 2, 2]);
        let single = fam(&[(&[1, 2], &[2, 1])]);
        let img = tau_encode(&p, &single).unwrap();
        assert!(img.arcs.is_empty());
        assert_eq!(img.blocks, vec![BTreeSet::from([2]), BTreeSet::from([1]), BTreeSet::new()]);

        let p = inst(2, &[&[1, 2]], &[2, 2]);
        let r = fam(&[(&[1, 2], &[1, 1]), (&[1, 2], &[2, 2])]);
        let img = tau_encode(&p, &r).unwrap();
        assert_eq!(img.vertices, vec![(set(&[1, 2]), 1), (set(&[1, 2]), 2)]);
        assert_eq!(img.arcs, vec![(0, 1)]);
        assert_eq!(img.blocks, vec![BTreeSet::from([1, 2]), BTreeSet::from([1, 2])]);
        assert_eq!(tau_decode(&p, &img).unwrap(), r);

        assert!(tau_encode(&p, &fam(&[(&[1, 2], &[1, 2]), (&[1, 2], &[2, 1])])).is_err());
    }

    #[test]
    fn tau_reconstruction_example() {
        // all sets of size >= 2 on [4], k = (4,5,4,2), m = 2,2,1 on
        // {1,2}, {2,3}, {1,3,4}; the orientation is the total order
        // (F2,1) -> (F1,1) -> (F1,2) -> (F3,1) -> (F2,2)
        let h = Hypergraph::uniform(4, 2).unwrap();
        let p = ProblemInstance::new(h, vec![4, 5, 4, 2]).unwrap();
        let (f1, f2, f3) = (set(&[1, 2]), set(&[2, 3]), set(&[1, 3, 4]));
        let vertices = vec![(f1, 1), (f1, 2), (f2, 1), (f2, 2), (f3, 1)];
        let order = [2usize, 0, 1, 4, 3];
        let mut arcs = Vec::new();
        for a in 0..order.len() {
            for b in a + 1..order.len() {
                arcs.push((order[a], order[b]));
            }
        }
        arcs.sort_unstable();
        let blocks = vec![
            BTreeSet::from([2, 3, 4]),
            BTreeSet::from([1, 2, 4, 5]),
            BTreeSet::from([1, 3, 4]),
            BTreeSet::from([2]),
        ];
        let image = TauImage { vertices, arcs, blocks };
        let r = tau_decode(&p, &image).unwrap();
        let expected = fam(&[
            (&[1, 2], &[2, 2]),
            (&[1, 2], &[3, 4]),
            (&[2, 3], &[1, 1]),
            (&[2, 3], &[5, 4]),
            (&[1, 3, 4], &[4, 3, 2]),
        ]);
        assert_eq!(r, expected);
        assert!(is_acyclic_family(&r));
        assert_eq!(tau_encode(&p, &r).unwrap(), image);
        assert!(realize(p.k(), &r).is_some());
    }

    #[test]
    fn verify_examples() {
        let e = Engine::default();
        let lim = OracleLimits::default();
        let rep = verify_counts(&e, &inst(2, &[&[1, 2]], &[2, 2]), &lim).unwrap();
        assert!(rep.passed());
        let pairs: Vec<(u32, u32)> = rep
            .entries
            .iter()
            .map(|x| (x.formula.to_u32_digits().first().copied().unwrap_or(0), x.enumerated.clone().unwrap().to_u32_digits()[0]))
            .collect();
        assert_eq!(pairs, vec![(4, 4), (1, 1)]);
        assert!(verify_counts(&e, &inst(3, &[&[1, 2, 3]], &[1, 1, 1]), &lim).unwrap().passed());
        let f32 = ProblemInstance::new(Hypergraph::uniform(3, 2).unwrap(), vec![1; 3]).unwrap();
        let rep = verify_counts(&e, &f32, &lim).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.skipped(), 0);
    }

    #[test]
    fn tau_is_injective_and_counts_factor() {
        let e = Engine::default();
        let lim = OracleLimits::default();
        let h = Hypergraph::new(3, [set(&[1, 2]), set(&[2, 3])]).unwrap();
        let p = ProblemInstance::new(h.clone(), vec![2, 3, 2]).unwrap();
        for m in e.enumerate_multiplicities(&p).unwrap() {
            if m.weight() > lim.max_weight {
                continue;
            }
            let fams = acyclic_families(&p, &m, &lim).unwrap();
            let images: BTreeSet<TauImage> = fams.iter().map(|r| tau_encode(&p, r).unwrap()).collect();
            assert_eq!(images.len(), fams.len());
            for (r, img) in fams.iter().zip(fams.iter().map(|r| tau_encode(&p, r).unwrap())) {
                assert_eq!(&tau_decode(&p, &img).unwrap(), r);
            }
            let orientations: BTreeSet<Vec<(usize, usize)>> = images.iter().map(|i| i.arcs.clone()).collect();
            assert_eq!(
                BigUint::from(fams.len()),
                BigUint::from(orientations.len()) * block_choices(&p, &m)
            );
        }
    }
}

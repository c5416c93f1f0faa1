//! Upward-closed hypergraphs on `[n]`, their matchings, and the matching
//! posets whose order complexes feed the series engine.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::homology::SimplicialComplex;
use crate::set::{ProcessSet, MAX_PROCESSES};

/// Upward-closed family of subsets of `{0, .., n-1}`, stored by its
/// antichain of minimal members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    generators: Vec<ProcessSet>,
    dropped: Vec<ProcessSet>,
}

impl Hypergraph {
    /// Reduces `generators` to its inclusion-minimal elements. Redundant
    /// generators are kept in [`Hypergraph::dropped`] so callers can warn.
    pub fn new(n: usize, generators: impl IntoIterator<Item = ProcessSet>) -> Result<Self> {
        if n == 0 || n > MAX_PROCESSES {
            return Err(invalid(format!("n must be in 1..={MAX_PROCESSES}, got {n}")));
        }
        let full = ProcessSet::full(n);
        let mut input: Vec<ProcessSet> = Vec::new();
        for g in generators {
            if !g.is_subset(full) {
                return Err(invalid(format!("generator {g} is not a subset of [{n}]")));
            }
            if g.len() < 2 {
                return Err(invalid(format!(
                    "generator {g} has fewer than 2 elements"
                )));
            }
            input.push(g);
        }
        if input.is_empty() {
            return Err(invalid("at least one generator is required"));
        }
        input.sort();
        let mut kept: Vec<ProcessSet> = Vec::new();
        let mut dropped = Vec::new();
        // Canonical order is by cardinality first, so any proper subset of
        // `g` has already been seen.
        for g in input {
            if kept.iter().any(|h| h.is_subset(g)) {
                dropped.push(g);
            } else {
                kept.push(g);
            }
        }
        Ok(Hypergraph {
            n,
            generators: kept,
            dropped,
        })
    }

    /// Convenience constructor from 0-based index lists.
    pub fn from_index_lists(n: usize, generators: &[Vec<usize>]) -> Result<Self> {
        let sets = generators
            .iter()
            .map(|g| ProcessSet::from_indices(g.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, sets)
    }

    /// `{ F ⊆ [n] : |F| >= s }`.
    pub fn uniform(n: usize, s: usize) -> Result<Self> {
        if s < 2 || s > n {
            return Err(invalid(format!("need 2 <= s <= n, got s={s}, n={n}")));
        }
        let gens = ProcessSet::full(n).subsets().filter(|g| g.len() == s);
        Self::new(n, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Minimal members in canonical order.
    pub fn generators(&self) -> &[ProcessSet] {
        &self.generators
    }

    /// Input generators removed because they contained another generator.
    pub fn dropped(&self) -> &[ProcessSet] {
        &self.dropped
    }

    /// Size of the smallest member.
    pub fn min_member_size(&self) -> usize {
        self.generators.iter().map(|g| g.len()).min().unwrap_or(0)
    }

    pub fn is_member(&self, set: ProcessSet) -> Result<bool> {
        if !set.is_subset(ProcessSet::full(self.n)) {
            return Err(invalid(format!(
                "set {set} has elements outside [{}]",
                self.n
            )));
        }
        Ok(self.contains(set))
    }

    /// Membership for sets already known to lie inside `[n]`.
    pub(crate) fn contains(&self, set: ProcessSet) -> bool {
        self.generators.iter().any(|g| g.is_subset(set))
    }

    /// All members in canonical order, failing once more than `cap` are
    /// found.
    pub fn members(&self, cap: usize) -> Result<Vec<ProcessSet>> {
        let full = ProcessSet::full(self.n);
        let mut found = BTreeSet::new();
        for &g in &self.generators {
            let free = ProcessSet::from_bits(full.bits() & !g.bits());
            for extra in free.subsets() {
                found.insert(g.union(extra));
                if found.len() > cap {
                    return Err(Error::ResourceLimit {
                        cap: "max-members",
                        limit: cap,
                    });
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Members contained in `within`, in canonical order.
    pub fn members_within(&self, within: ProcessSet) -> Vec<ProcessSet> {
        let mut out: Vec<ProcessSet> = within.subsets().filter(|s| self.contains(*s)).collect();
        out.sort();
        out
    }

    /// All nonempty matchings built from `candidates` (members, in
    /// canonical order), by backtracking with disjointness pruning.
    fn matchings_of(candidates: &[ProcessSet], cap: usize) -> Result<Vec<Matching>> {
        fn extend(
            candidates: &[ProcessSet],
            start: usize,
            used: ProcessSet,
            current: &mut Vec<ProcessSet>,
            out: &mut Vec<Matching>,
            cap: usize,
        ) -> Result<()> {
            for idx in start..candidates.len() {
                let c = candidates[idx];
                if !c.is_disjoint(used) {
                    continue;
                }
                current.push(c);
                if out.len() >= cap {
                    return Err(Error::ResourceLimit {
                        cap: "max-matchings",
                        limit: cap,
                    });
                }
                out.push(Matching {
                    members: current.clone(),
                });
                extend(candidates, idx + 1, used.union(c), current, out, cap)?;
                current.pop();
            }
            Ok(())
        }
        let mut out = Vec::new();
        extend(candidates, 0, ProcessSet::EMPTY, &mut Vec::new(), &mut out, cap)?;
        out.sort();
        Ok(out)
    }

    /// `M(F)`: every nonempty matching of members.
    pub fn matchings(&self, member_cap: usize, matching_cap: usize) -> Result<Vec<Matching>> {
        let members = self.members(member_cap)?;
        Self::matchings_of(&members, matching_cap)
    }

    /// `M(F)_{≺K}`: nonempty matchings whose members all lie in `K`,
    /// without the singleton `{K}`.
    pub fn matchings_strictly_below(&self, k: ProcessSet, cap: usize) -> Result<MatchingPoset> {
        if !self.is_member(k)? {
            return Err(invalid(format!("{k} is not a member of the hypergraph")));
        }
        let candidates: Vec<ProcessSet> = self
            .members_within(k)
            .into_iter()
            .filter(|&f| f != k)
            .collect();
        Ok(MatchingPoset::new(Self::matchings_of(&candidates, cap)?))
    }
}

/// A set of pairwise disjoint members, kept sorted in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    members: Vec<ProcessSet>,
}

impl Matching {
    /// Fails if two members intersect or the list is empty.
    pub fn new(mut members: Vec<ProcessSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(invalid("a matching must be nonempty"));
        }
        members.sort();
        members.dedup();
        for (i, a) in members.iter().enumerate() {
            if members[i + 1..].iter().any(|b| a.intersects(*b)) {
                return Err(invalid(format!("matching members overlap at {a}")));
            }
        }
        Ok(Matching { members })
    }

    pub fn members(&self) -> &[ProcessSet] {
        &self.members
    }

    /// `self ⪯ other`: every member of `self` sits inside a member of `other`.
    pub fn refines(&self, other: &Matching) -> bool {
        self.members
            .iter()
            .all(|g| other.members.iter().any(|h| g.is_subset(*h)))
    }

    pub fn support(&self) -> ProcessSet {
        self.members
            .iter()
            .fold(ProcessSet::EMPTY, |acc, g| acc.union(*g))
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// Finite poset of matchings under refinement. `above[i]` lists the
/// indices strictly greater than element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingPoset {
    elements: Vec<Matching>,
    above: Vec<Vec<usize>>,
}

impl MatchingPoset {
    pub fn new(elements: Vec<Matching>) -> Self {
        let above = elements
            .iter()
            .enumerate()
            .map(|(i, a)| {
                elements
                    .iter()
                    .enumerate()
                    .filter(|&(j, b)| j != i && a.refines(b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        MatchingPoset { elements, above }
    }

    pub fn elements(&self) -> &[Matching] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `elements[i] ⪯ elements[j]`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        i == j || self.above[i].contains(&j)
    }

    /// Every ordered pair `(i, j)` with `i ⪯ j`, reflexive pairs included.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.len() {
            pairs.push((i, i));
            pairs.extend(self.above[i].iter().map(|&j| (i, j)));
        }
        pairs.sort_unstable();
        pairs
    }

    /// Order complex: one vertex per element, one simplex per chain. Facets
    /// are the maximal chains.
    pub fn order_complex(&self) -> SimplicialComplex {
        let n = self.len();
        // covers[i]: elements covering i
        let covers: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                self.above[i]
                    .iter()
                    .copied()
                    .filter(|&j| !self.above[i].iter().any(|&m| self.above[m].contains(&j)))
                    .collect()
            })
            .collect();
        let is_minimal: Vec<bool> = (0..n)
            .map(|j| !(0..n).any(|i| self.above[i].contains(&j)))
            .collect();
        let mut facets = Vec::new();
        let mut chain = Vec::new();
        fn walk(
            v: usize,
            covers: &[Vec<usize>],
            chain: &mut Vec<usize>,
            facets: &mut Vec<Vec<usize>>,
        ) {
            chain.push(v);
            if covers[v].is_empty() {
                facets.push(chain.clone());
            } else {
                for &w in &covers[v] {
                    walk(w, covers, chain, facets);
                }
            }
            chain.pop();
        }
        for v in (0..n).filter(|&v| is_minimal[v]) {
            walk(v, &covers, &mut chain, &mut facets);
        }
        SimplicialComplex::from_facets(n, facets)
    }
}

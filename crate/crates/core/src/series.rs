//! The Poincaré series engine.
//!
//! For an instance `(F, k)` the reduced Poincaré series of the path space
//! from `0` to `k + 1` is
//!
//! ```text
//!   sum_{m != 0}  b(m) t^{c(m)}  prod_F  f(Δ(M(F)_{≺F}), 1/t)^{m(F)}
//! ```
//!
//! where `c(m) = sum_F m(F)(|F| - 2) + 1` and
//! `b(m) = a(T_F(m)) / prod_F m(F)!  *  prod_i C(k_i, sum_{F ∋ i} m(F))`.
//! The sum ranges over every member of the upward closure, not only the
//! generators. The compactified arrangement dual to the path space is
//! handled by [`Engine::dual_series`].

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::homology::{BettiTable, Field, SmithData};
use crate::hypergraph::Hypergraph;
use crate::limits::Limits;
use crate::orientations::{conflict_graph, ChromaticSolver};
use crate::poly::{binomial, factorial, LaurentPolynomial};
use crate::set::ProcessSet;

/// A hypergraph together with per-process access counts `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    hypergraph: Hypergraph,
    k: Vec<u32>,
}

impl ProblemInstance {
    pub fn new(hypergraph: Hypergraph, k: Vec<u32>) -> Result<Self> {
        if k.len() != hypergraph.n() {
            return Err(invalid(format!(
                "k has {} entries but n = {}",
                k.len(),
                hypergraph.n()
            )));
        }
        if let Some(i) = k.iter().position(|&ki| ki == 0) {
            return Err(invalid(format!("k[{i}] must be at least 1")));
        }
        Ok(ProblemInstance { hypergraph, k })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn n(&self) -> usize {
        self.hypergraph.n()
    }

    /// `N = sum_i k_i`.
    pub fn total_levels(&self) -> u64 {
        self.k.iter().map(|&x| x as u64).sum()
    }
}

/// Finitely supported map from members to positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiplicityMap {
    entries: BTreeMap<ProcessSet, u32>,
}

impl MultiplicityMap {
    /// Zero entries are dropped; the result must be nonzero.
    pub fn new(entries: impl IntoIterator<Item = (ProcessSet, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (f, v) in entries {
            if v > 0 {
                *map.entry(f).or_insert(0) += v;
            }
        }
        if map.is_empty() {
            return Err(invalid("multiplicity map must be nonzero"));
        }
        Ok(MultiplicityMap { entries: map })
    }

    pub fn get(&self, f: ProcessSet) -> u32 {
        self.entries.get(&f).copied().unwrap_or(0)
    }

    /// `(member, m(member))` in canonical member order.
    pub fn entries(&self) -> Vec<(ProcessSet, u32)> {
        self.entries.iter().map(|(&f, &v)| (f, v)).collect()
    }

    pub fn support(&self) -> impl Iterator<Item = ProcessSet> + '_ {
        self.entries.keys().copied()
    }

    /// `sum_{F ∋ i} m(F)` for each process `i < n`.
    pub fn loads(&self, n: usize) -> Vec<u64> {
        let mut loads = vec![0u64; n];
        for (f, &v) in &self.entries {
            for i in f.iter() {
                if i < n {
                    loads[i] += v as u64;
                }
            }
        }
        loads
    }

    pub fn is_feasible(&self, p: &ProblemInstance) -> bool {
        self.support().all(|f| f.span() <= p.n())
            && self
                .loads(p.n())
                .iter()
                .zip(p.k())
                .all(|(&load, &k)| load <= k as u64)
    }

    /// `sum_F m(F) |F|`.
    pub fn weight(&self) -> usize {
        self.entries.iter().map(|(f, &v)| f.len() * v as usize).sum()
    }
}

/// `c(m) = sum_F m(F)(|F| - 2) + 1`.
pub fn exponent_c(m: &MultiplicityMap) -> i64 {
    m.entries
        .iter()
        .map(|(f, &v)| v as i64 * (f.len() as i64 - 2))
        .sum::<i64>()
        + 1
}

/// Holds the caps and the memo tables shared by all computations. The
/// caches are keyed by hypergraph so one engine can serve many instances.
/// Generators of the hypergraph and the member below which matchings are taken.
type SmithKey = (Vec<ProcessSet>, ProcessSet);

#[derive(Debug)]
pub struct Engine {
    limits: Limits,
    chromatic: ChromaticSolver,
    smith: Mutex<HashMap<SmithKey, Arc<SmithData>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new(Limits::default())
    }
}

impl Engine {
    pub fn new(limits: Limits) -> Self {
        Engine {
            limits,
            chromatic: ChromaticSolver::new(limits.max_graph_edges),
            smith: Mutex::new(HashMap::new()),
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn chromatic(&self) -> &ChromaticSolver {
        &self.chromatic
    }

    /// `b(m)`; zero for infeasible `m`.
    pub fn coefficient_b(&self, p: &ProblemInstance, m: &MultiplicityMap) -> Result<BigUint> {
        let h = p.hypergraph();
        for f in m.support() {
            if !h.is_member(f)? {
                return Err(invalid(format!("{f} is not a member of the hypergraph")));
            }
        }
        if !m.is_feasible(p) {
            return Ok(BigUint::zero());
        }
        let graph = conflict_graph(h, &m.entries())?;
        let acyclic = BigInt::from(self.chromatic.acyclic_count(&graph)?);
        let symmetry = m
            .entries
            .values()
            .fold(BigInt::one(), |acc, &v| acc * factorial(v as u64));
        let (ordered, rem) = acyclic.div_rem(&symmetry);
        if !rem.is_zero() {
            return Err(Error::Invariant(format!(
                "a(T) = {acyclic} is not divisible by prod m(F)! = {symmetry}"
            )));
        }
        let placements = m
            .loads(p.n())
            .iter()
            .zip(p.k())
            .fold(BigInt::one(), |acc, (&load, &k)| acc * binomial(k as u64, load));
        Ok((ordered * placements)
            .to_biguint()
            .expect("product of nonnegative factors"))
    }

    /// Every feasible nonzero multiplicity map. Maps are ordered
    /// lexicographically by their value vectors over the members in
    /// canonical order.
    pub fn enumerate_multiplicities(&self, p: &ProblemInstance) -> Result<Vec<MultiplicityMap>> {
        let members = p.hypergraph().members(self.limits.max_members)?;
        let mut out = Vec::new();
        let mut remaining: Vec<u32> = p.k().to_vec();
        let mut current = Vec::new();
        enumerate_rec(&members, 0, &mut remaining, &mut current, &mut out, self.limits.max_terms)?;
        Ok(out)
    }

    /// Smith data of `Δ(M(F)_{≺F})`, cached per hypergraph and member.
    pub fn matching_complex_data(&self, h: &Hypergraph, f: ProcessSet) -> Result<Arc<SmithData>> {
        let key = (h.generators().to_vec(), f);
        if let Some(d) = self.smith.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(d));
        }
        let poset = h.matchings_strictly_below(f, self.limits.max_matchings)?;
        let data = Arc::new(SmithData::compute(
            &poset.order_complex(),
            self.limits.max_matrix_nonzeros,
        )?);
        self.smith
            .lock()
            .expect("cache lock")
            .insert(key, Arc::clone(&data));
        Ok(data)
    }

    /// Reduced Poincaré polynomial `f(Δ(M(F)_{≺F}), t)`.
    pub fn matching_complex_series(
        &self,
        h: &Hypergraph,
        f: ProcessSet,
        field: Field,
    ) -> Result<LaurentPolynomial> {
        Ok(self.matching_complex_data(h, f)?.betti(field).poincare())
    }

    /// `prod_F f(Δ(M(F)_{≺F}), t)^{m(F)}`.
    fn join_factor(&self, h: &Hypergraph, m: &MultiplicityMap, field: Field) -> Result<LaurentPolynomial> {
        let mut acc = LaurentPolynomial::one();
        for (f, v) in m.entries() {
            acc = &acc * &self.matching_complex_series(h, f, field)?.pow(v);
        }
        Ok(acc)
    }

    /// Reduced Poincaré series of the path space from `0` to `k + 1`.
    pub fn path_space_series(&self, p: &ProblemInstance, field: Field) -> Result<LaurentPolynomial> {
        let mut total = LaurentPolynomial::zero();
        for m in self.enumerate_multiplicities(p)? {
            let b = BigInt::from(self.coefficient_b(p, &m)?);
            let factor = self.join_factor(p.hypergraph(), &m, field)?.invert_variable();
            total += &factor.shift(exponent_c(&m)).scale(&b);
        }
        check_path_series(&total)?;
        Ok(total)
    }

    /// Reduced homology of the path space, `H̃_i` read off `t^{i+1}`.
    pub fn path_space_betti(&self, p: &ProblemInstance, field: Field) -> Result<BettiTable> {
        BettiTable::from_poincare(field, &self.path_space_series(p, field)?)
    }

    /// Reduced Poincaré series of the one-point compactified complement
    /// arrangement, `sum_m b(m) t^{N - c(m) + 1} prod_F f(Δ_F, t)^{m(F)}`.
    pub fn dual_series(&self, p: &ProblemInstance, field: Field) -> Result<LaurentPolynomial> {
        let n_levels = p.total_levels() as i64;
        let mut total = LaurentPolynomial::zero();
        for m in self.enumerate_multiplicities(p)? {
            let b = BigInt::from(self.coefficient_b(p, &m)?);
            let factor = self.join_factor(p.hypergraph(), &m, field)?;
            total += &factor.shift(n_levels - exponent_c(&m) + 1).scale(&b);
        }
        if !total.has_nonnegative_coefficients() {
            return Err(Error::Invariant(format!("dual series has a negative coefficient: {total}")));
        }
        Ok(total)
    }

    /// The `k = 1` series summed directly over matchings:
    /// `sum_{G ∈ M(F)} t^{sum_{F∈G}(|F|-2)+1} prod_{F∈G} f(Δ_F, 1/t)`.
    pub fn closed_form_binary(&self, h: &Hypergraph, field: Field) -> Result<LaurentPolynomial> {
        let mut total = LaurentPolynomial::zero();
        for g in h.matchings(self.limits.max_members, self.limits.max_matchings)? {
            let exp: i64 = g.members().iter().map(|f| f.len() as i64 - 2).sum::<i64>() + 1;
            let mut term = LaurentPolynomial::monomial(BigInt::one(), exp);
            for &f in g.members() {
                term = &term * &self.matching_complex_series(h, f, field)?.invert_variable();
            }
            total += &term;
        }
        check_path_series(&total)?;
        Ok(total)
    }

    /// Series for `F_{n,s} = {F ⊆ [n] : |F| >= s}` with the matching
    /// complex factors taken from [`betti_pi`] instead of computed
    /// homology. Those complexes are torsion-free, so the result is the
    /// same over every field.
    pub fn closed_form_sequal(&self, n: usize, s: usize, k: &[u32]) -> Result<LaurentPolynomial> {
        let p = ProblemInstance::new(Hypergraph::uniform(n, s)?, k.to_vec())?;
        let mut mu_cache: HashMap<usize, LaurentPolynomial> = HashMap::new();
        let mut total = LaurentPolynomial::zero();
        for m in self.enumerate_multiplicities(&p)? {
            let b = BigInt::from(self.coefficient_b(&p, &m)?);
            let mut term = LaurentPolynomial::monomial(b, exponent_c(&m));
            for (f, v) in m.entries() {
                let size = f.len();
                let factor = match mu_cache.entry(size) {
                    Entry::Occupied(e) => e.into_mut(),
                    Entry::Vacant(e) => {
                        let table = betti_pi(size, s)?;
                        e.insert(LaurentPolynomial::from_terms(
                            table.iter().map(|(d, r)| (-(d + 1), BigInt::from(r.clone()))),
                        ))
                    }
                };
                term = &term * &factor.pow(v);
            }
            total += &term;
        }
        check_path_series(&total)?;
        Ok(total)
    }

    /// True when every `Δ(M(F)_{≺F})` that can occur in a feasible
    /// multiplicity map has torsion-free integral homology, which makes
    /// the path-space homology free.
    pub fn freeness_certificate(&self, p: &ProblemInstance) -> Result<bool> {
        // every member can carry m(F) = 1 since all k_i >= 1
        for f in p.hypergraph().members(self.limits.max_members)? {
            if !self.matching_complex_data(p.hypergraph(), f)?.torsion_free() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn enumerate_rec(
    members: &[ProcessSet],
    idx: usize,
    remaining: &mut [u32],
    current: &mut Vec<(ProcessSet, u32)>,
    out: &mut Vec<MultiplicityMap>,
    cap: usize,
) -> Result<()> {
    if idx == members.len() {
        if !current.is_empty() {
            if out.len() >= cap {
                return Err(Error::ResourceLimit {
                    cap: "max-terms",
                    limit: cap,
                });
            }
            out.push(MultiplicityMap {
                entries: current.iter().copied().collect(),
            });
        }
        return Ok(());
    }
    let f = members[idx];
    let max = f.iter().map(|i| remaining[i]).min().unwrap_or(0);
    enumerate_rec(members, idx + 1, remaining, current, out, cap)?;
    for v in 1..=max {
        for i in f.iter() {
            remaining[i] -= 1;
        }
        current.push((f, v));
        enumerate_rec(members, idx + 1, remaining, current, out, cap)?;
        current.pop();
    }
    for i in f.iter() {
        remaining[i] += max;
    }
    Ok(())
}

fn check_path_series(p: &LaurentPolynomial) -> Result<()> {
    if let Some(e) = p.min_exponent() {
        if e < 1 {
            return Err(Error::Invariant(format!("path-space series has exponent {e} < 1: {p}")));
        }
    }
    if !p.has_nonnegative_coefficients() {
        return Err(Error::Invariant(format!("path-space series has a negative coefficient: {p}")));
    }
    Ok(())
}

/// `t^{N+1} dual(1/t) == path(t)`.
pub fn duality_holds(path: &LaurentPolynomial, dual: &LaurentPolynomial, total_levels: u64) -> bool {
    &dual.invert_variable().shift(total_levels as i64 + 1) == path
}

/// Series for `F = {[n]}`: `sum_{m>=1} prod_i C(k_i, m) t^{m(n-2)+1}`.
/// Also accepted for `n = 2`, where it counts lattice-path classes.
pub fn closed_form_nset(n: usize, k: &[u32]) -> Result<LaurentPolynomial> {
    if n < 2 {
        return Err(invalid(format!("n must be at least 2, got {n}")));
    }
    if k.len() != n {
        return Err(invalid(format!("k has {} entries but n = {n}", k.len())));
    }
    if k.contains(&0) {
        return Err(invalid("all k_i must be at least 1"));
    }
    let top = *k.iter().min().expect("n >= 2") as u64;
    let mut out = LaurentPolynomial::zero();
    for m in 1..=top {
        let coeff = k.iter().fold(BigInt::one(), |acc, &ki| acc * binomial(ki as u64, m));
        out.add_term(m as i64 * (n as i64 - 2) + 1, coeff);
    }
    Ok(out)
}

/// Closed-form reduced Betti numbers of the order complex of `Π_{m,s}`,
/// the proper part of the lattice of partitions of `[m]` whose
/// non-singleton blocks have size at least `s`. Degree
/// `m - 3 - ℓ(s-2)` receives
/// `sum_{j_1+..+j_ℓ = m, j_i >= s} (m-1)! / ((j_1-1)! j_2! .. j_ℓ!) * prod_{i=1..ℓ} C(j_i - 1, s - 1)`.
pub fn betti_pi(m: usize, s: usize) -> Result<BettiTable> {
    if s < 2 || s > m {
        return Err(invalid(format!("need 2 <= s <= m, got m={m}, s={s}")));
    }
    let mut ranks: BTreeMap<i64, BigUint> = BTreeMap::new();
    for parts in 1..=m / s {
        let degree = m as i64 - 3 - (parts as i64) * (s as i64 - 2);
        let mut sum = BigInt::zero();
        for comp in compositions(m, parts, s) {
            let mut denom = factorial(comp[0] as u64 - 1);
            for &j in &comp[1..] {
                denom *= factorial(j as u64);
            }
            let multinomial = factorial(m as u64 - 1) / denom;
            let product = comp
                .iter()
                .fold(BigInt::one(), |acc, &j| acc * binomial(j as u64 - 1, s as u64 - 1));
            sum += multinomial * product;
        }
        *ranks.entry(degree).or_default() += sum.to_biguint().expect("nonnegative");
    }
    Ok(BettiTable::new(Field::Rationals, ranks))
}

/// Ordered compositions of `total` into `parts` parts, each `>= min`.
fn compositions(total: usize, parts: usize, min: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut first = min;
    while first + min * (parts - 1) <= total {
        for mut rest in compositions(total - first, parts - 1, min) {
            rest.insert(0, first);
            out.push(rest);
        }
        first += 1;
    }
    out
}

/// Homological connectivity `s(F) - 2`, where `s(F)` is the smallest member
/// size: the first nonvanishing reduced homology of the path space sits in
/// this degree, and all homotopy groups below it vanish.
pub fn connectivity(h: &Hypergraph) -> i64 {
    h.min_member_size() as i64 - 2
}

//! Exact reduced simplicial homology.
//!
//! Boundary matrices of the augmented chain complex (the empty simplex sits
//! in degree -1) are diagonalized over the integers. The nonzero invariant
//! factors give ranks over `Q` and over every prime field at once, and any
//! factor other than 1 witnesses torsion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::poly::LaurentPolynomial;

/// Coefficient field for Betti numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Field {
    #[default]
    Rationals,
    /// `GF(p)`; construct through [`Field::prime`].
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if is_prime {
            Ok(Field::Prime(p))
        } else {
            Err(invalid(format!("{p} is not prime")))
        }
    }

    /// Whether `d` becomes zero in the field.
    fn kills(&self, d: &BigUint) -> bool {
        match self {
            Field::Rationals => false,
            Field::Prime(p) => (d % *p).is_zero(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Finite abstract simplicial complex on vertices `0..vertex_count`,
/// stored by facets. The empty simplex is always present, so a complex
/// with no facets is `{∅}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Facets are sorted and deduplicated; faces of other facets are removed.
    pub fn from_facets(vertex_count: usize, facets: Vec<Vec<usize>>) -> Self {
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        debug_assert!(facets.iter().flatten().all(|&v| v < vertex_count));
        facets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        facets.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        for f in facets {
            if !kept.iter().any(|g| is_sorted_subset(&f, g)) {
                kept.push(f);
            }
        }
        kept.sort();
        SimplicialComplex {
            vertex_count,
            facets: kept,
        }
    }

    /// `{∅}`.
    pub fn empty() -> Self {
        SimplicialComplex {
            vertex_count: 0,
            facets: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_empty_complex(&self) -> bool {
        self.facets.is_empty()
    }

    /// Dimension; `-1` for `{∅}`.
    pub fn dim(&self) -> i64 {
        self.facets.iter().map(|f| f.len() as i64).max().unwrap_or(0) - 1
    }

    /// Cone over a fresh apex vertex.
    pub fn cone(&self) -> Self {
        let apex = self.vertex_count;
        let facets = if self.facets.is_empty() {
            vec![vec![apex]]
        } else {
            self.facets
                .iter()
                .map(|f| {
                    let mut g = f.clone();
                    g.push(apex);
                    g
                })
                .collect()
        };
        Self::from_facets(apex + 1, facets)
    }

    /// All simplices grouped by dimension; index `d + 1` holds the
    /// `d`-simplices (index 0 is `[∅]`), each list sorted.
    pub fn simplices(&self) -> Vec<Vec<Vec<usize>>> {
        let top = (self.dim() + 1) as usize;
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); top + 1];
        by_dim[0].insert(Vec::new());
        for f in &self.facets {
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                by_dim[face.len()].insert(face);
            }
        }
        by_dim.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Number of simplices per dimension, starting at `-1`.
    pub fn simplex_counts(&self) -> Vec<usize> {
        self.simplices().iter().map(Vec::len).collect()
    }
}

fn is_sorted_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Sparse integer matrix given by its nonzero entries per column.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `(row, col, value)` triples with nonzero value.
    pub entries: Vec<(usize, usize, BigInt)>,
}

impl SparseMatrix {
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            m[*r][*c] += v;
        }
        m
    }
}

/// Boundary matrices `∂_d : C_d -> C_{d-1}` of the augmented complex for
/// `d = 0 ..= dim`. Fails once a matrix would hold more than `cap`
/// nonzeros.
pub fn boundary_matrices(x: &SimplicialComplex, cap: usize) -> Result<Vec<SparseMatrix>> {
    let simplices = x.simplices();
    let mut out = Vec::with_capacity(simplices.len().saturating_sub(1));
    for d in 1..simplices.len() {
        let nnz = simplices[d].len() * d;
        if nnz > cap {
            return Err(Error::ResourceLimit {
                cap: "max-matrix",
                limit: cap,
            });
        }
        let index: HashMap<&[usize], usize> = simplices[d - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let mut entries = Vec::with_capacity(nnz);
        for (col, s) in simplices[d].iter().enumerate() {
            for drop in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v)
                    .collect();
                let sign = if drop % 2 == 0 { 1 } else { -1 };
                entries.push((index[face.as_slice()], col, BigInt::from(sign)));
            }
        }
        out.push(SparseMatrix {
            rows: simplices[d - 1].len(),
            cols: simplices[d].len(),
            entries,
        });
    }
    Ok(out)
}

/// Nonzero invariant factors of an integer matrix, ascending, each dividing
/// the next.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigUint> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, c, v) in &m.entries {
        let e = rows[*r].entry(*c).or_default();
        *e += v;
        if e.is_zero() {
            rows[*r].remove(c);
            cols[*c].remove(r);
        } else {
            cols[*c].insert(*r);
        }
    }

    let mut units = 0usize;
    // Unit pivots: clear the pivot column with row operations, after which
    // the pivot row and column split off as a 1x1 block.
    loop {
        let mut progress = false;
        for c in 0..m.cols {
            let pivot_row = cols[c]
                .iter()
                .copied()
                .filter(|&r| rows[r][&c].abs().is_one())
                .min_by_key(|&r| rows[r].len());
            let Some(r) = pivot_row else { continue };
            progress = true;
            units += 1;
            let pivot_entries = std::mem::take(&mut rows[r]);
            let p = pivot_entries[&c].clone();
            for &cc in pivot_entries.keys() {
                cols[cc].remove(&r);
            }
            let targets: Vec<usize> = cols[c].iter().copied().collect();
            for r2 in targets {
                let factor = &rows[r2][&c] * &p;
                for (&cc, v) in &pivot_entries {
                    let e = rows[r2].entry(cc).or_default();
                    *e -= &factor * v;
                    if e.is_zero() {
                        rows[r2].remove(&cc);
                        cols[cc].remove(&r2);
                    } else {
                        cols[cc].insert(r2);
                    }
                }
            }
            debug_assert!(cols[c].is_empty());
        }
        if !progress {
            break;
        }
    }

    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| !cols[c].is_empty()).collect();
    let col_pos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            dense[i][col_pos[c]] = v.clone();
        }
    }
    let mut factors = vec![BigUint::one(); units];
    factors.extend(dense_smith_diagonal(dense));
    factors.sort();
    factors
}

/// Smith normal form of a dense matrix; returns the nonzero diagonal.
fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigUint> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            let pivot_row = a[t].clone();
            for (x, y) in a[i].iter_mut().zip(pivot_row.iter()).skip(t) {
                *x -= &q * y;
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            for row in a.iter_mut().skip(t) {
                let delta = &q * &row[t];
                row[j] -= delta;
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            // remainders left behind; a smaller pivot now exists
            continue;
        }
        let p = a[t][t].clone();
        let offender = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|v| !v.is_zero() && !(v % &p).is_zero()));
        if let Some(i) = offender {
            // fold the offending row into the pivot row and retry
            let extra = a[i].clone();
            for (x, y) in a[t].iter_mut().zip(extra.iter()) {
                *x += y;
            }
            continue;
        }
        diag.push(p.abs().to_biguint().expect("absolute value"));
        t += 1;
    }
    diag
}

/// Invariant factors of every boundary map, plus chain group ranks; enough
/// to read off reduced homology over any field and integral torsion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithData {
    /// `chain_ranks[d + 1]` = number of `d`-simplices.
    pub chain_ranks: Vec<usize>,
    /// `factors[d]` = nonzero invariant factors of `∂_d`, for `d >= 0`.
    pub factors: Vec<Vec<BigUint>>,
}

impl SmithData {
    pub fn compute(x: &SimplicialComplex, cap: usize) -> Result<Self> {
        let boundaries = boundary_matrices(x, cap)?;
        let mut chain_ranks = vec![1];
        chain_ranks.extend(boundaries.iter().map(|b| b.cols));
        let factors = boundaries.iter().map(invariant_factors).collect();
        Ok(SmithData {
            chain_ranks,
            factors,
        })
    }

    fn rank(&self, d: i64, field: Field) -> usize {
        if d < 0 {
            return 0;
        }
        self.factors
            .get(d as usize)
            .map_or(0, |fs| fs.iter().filter(|f| !field.kills(f)).count())
    }

    pub fn betti(&self, field: Field) -> BettiTable {
        let mut ranks = BTreeMap::new();
        for (idx, &c) in self.chain_ranks.iter().enumerate() {
            let d = idx as i64 - 1;
            let b = c - self.rank(d, field) - self.rank(d + 1, field);
            if b > 0 {
                ranks.insert(d, BigUint::from(b));
            }
        }
        BettiTable { field, ranks }
    }

    pub fn torsion_free(&self) -> bool {
        self.factors.iter().flatten().all(One::is_one)
    }
}

/// Reduced Betti numbers by degree (`>= -1`); only nonzero ranks stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub field: Field,
    ranks: BTreeMap<i64, BigUint>,
}

impl BettiTable {
    pub fn new(field: Field, ranks: impl IntoIterator<Item = (i64, BigUint)>) -> Self {
        BettiTable {
            field,
            ranks: ranks.into_iter().filter(|(_, r)| !r.is_zero()).collect(),
        }
    }

    pub fn get(&self, degree: i64) -> BigUint {
        self.ranks.get(&degree).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        self.ranks.iter().map(|(&d, r)| (d, r))
    }

    pub fn is_acyclic(&self) -> bool {
        self.ranks.is_empty()
    }

    /// `sum_d (-1)^d rank_d`; equals the reduced Euler characteristic.
    pub fn euler_characteristic(&self) -> BigInt {
        self.ranks.iter().fold(BigInt::zero(), |acc, (&d, r)| {
            let r = BigInt::from(r.clone());
            if d.rem_euclid(2) == 0 {
                acc + r
            } else {
                acc - r
            }
        })
    }

    /// `sum_i rank_{i-1} t^i`.
    pub fn poincare(&self) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.ranks.iter().map(|(&d, r)| (d + 1, BigInt::from(r.clone()))))
    }

    /// Reads `rank_{i-1}` off the coefficient of `t^i`. Fails on negative
    /// coefficients.
    pub fn from_poincare(field: Field, p: &LaurentPolynomial) -> Result<Self> {
        let ranks = p
            .terms()
            .map(|(e, c)| {
                c.to_biguint()
                    .map(|r| (e - 1, r))
                    .ok_or_else(|| Error::Invariant(format!("negative coefficient {c} at t^{e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(field, ranks))
    }
}

pub fn reduced_betti(x: &SimplicialComplex, field: Field, cap: usize) -> Result<BettiTable> {
    Ok(SmithData::compute(x, cap)?.betti(field))
}

/// `f(X, t) = sum_i dim H̃_{i-1}(X) t^i`; `{∅}` maps to 1.
pub fn reduced_poincare(x: &SimplicialComplex, field: Field, cap: usize) -> Result<LaurentPolynomial> {
    Ok(reduced_betti(x, field, cap)?.poincare())
}

pub fn integral_torsion_free(x: &SimplicialComplex, cap: usize) -> Result<bool> {
    Ok(SmithData::compute(x, cap)?.torsion_free())
}

/// Alternating count of simplices, `-1` for the empty simplex included.
pub fn euler_characteristic(x: &SimplicialComplex) -> BigInt {
    x.simplex_counts()
        .iter()
        .enumerate()
        .fold(BigInt::zero(), |acc, (idx, &c)| {
            if idx % 2 == 1 {
                acc + c
            } else {
                acc - c
            }
        })
}

/// Rank over `Q` by fraction-free (Bareiss) elimination. Independent of
/// the Smith-form route; used for cross-checks.
pub fn rational_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j]) / &prev;
                a[r][j] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Reduced Betti numbers over `Q` from [`rational_rank`] alone.
pub fn rational_betti_by_elimination(x: &SimplicialComplex, cap: usize) -> Result<BTreeMap<i64, usize>> {
    let boundaries = boundary_matrices(x, cap)?;
    let ranks: Vec<usize> = boundaries.iter().map(|b| rational_rank(b.to_dense())).collect();
    let counts = x.simplex_counts();
    let mut out = BTreeMap::new();
    for (idx, &c) in counts.iter().enumerate() {
        let d = idx as i64 - 1;
        let below = if d >= 0 { ranks[d as usize] } else { 0 };
        let above = ranks.get((d + 1) as usize).copied().unwrap_or(0);
        let b = c - below - above;
        if b > 0 {
            out.insert(d, b);
        }
    }
    Ok(out)
}

/// Convenience for small tables in tests and reports.
pub fn betti_as_u64(t: &BettiTable) -> BTreeMap<i64, u64> {
    t.iter().map(|(d, r)| (d, r.to_u64().unwrap_or(u64::MAX))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: usize = 200_000;

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    /// Minimal 6-vertex triangulation of the real projective plane.
    fn rp2() -> SimplicialComplex {
        let f = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        SimplicialComplex::from_facets(6, f.iter().map(|t| t.to_vec()).collect())
    }

    fn table(t: &BettiTable) -> Vec<(i64, u64)> {
        betti_as_u64(t).into_iter().collect()
    }

    #[test]
    fn empty_complex() {
        let e = SimplicialComplex::empty();
        assert_eq!(table(&reduced_betti(&e, Field::Rationals, CAP).unwrap()), vec![(-1, 1)]);
        assert_eq!(reduced_poincare(&e, Field::Rationals, CAP).unwrap(), LaurentPolynomial::one());
        assert_eq!(e.dim(), -1);
    }

    #[test]
    fn circle() {
        let c = hollow_triangle();
        assert_eq!(table(&reduced_betti(&c, Field::Rationals, CAP).unwrap()), vec![(1, 1)]);
        assert_eq!(
            reduced_poincare(&c, Field::Rationals, CAP).unwrap(),
            LaurentPolynomial::from_i64_terms(&[(2, 1)])
        );
        assert!(integral_torsion_free(&c, CAP).unwrap());
    }

    #[test]
    fn projective_plane_torsion() {
        let x = rp2();
        assert_eq!(x.simplex_counts(), vec![1, 6, 15, 10]);
        assert!(!integral_torsion_free(&x, CAP).unwrap());
        assert!(reduced_betti(&x, Field::Rationals, CAP).unwrap().is_acyclic());
        let gf2 = reduced_betti(&x, Field::prime(2).unwrap(), CAP).unwrap();
        assert_eq!(table(&gf2), vec![(1, 1), (2, 1)]);
        assert!(reduced_betti(&x, Field::prime(3).unwrap(), CAP).unwrap().is_acyclic());
        let sd = SmithData::compute(&x, CAP).unwrap();
        let mut expected = vec![BigUint::one(); 9];
        expected.push(BigUint::from(2u32));
        assert_eq!(sd.factors[2], expected);
    }

    #[test]
    fn cone_is_acyclic() {
        for x in [SimplicialComplex::empty(), hollow_triangle(), rp2()] {
            let c = x.cone();
            assert!(reduced_betti(&c, Field::Rationals, CAP).unwrap().is_acyclic());
            assert!(reduced_betti(&c, Field::Prime(2), CAP).unwrap().is_acyclic());
        }
    }

    #[test]
    fn matrix_cap() {
        assert!(matches!(
            reduced_betti(&rp2(), Field::Rationals, 10),
            Err(Error::ResourceLimit { cap: "max-matrix", .. })
        ));
    }

    #[test]
    fn dense_smith_with_non_unit_entries() {
        // diag(2, 6) hidden behind unimodular mixing
        let m = SparseMatrix {
            rows: 2,
            cols: 2,
            entries: vec![
                (0, 0, BigInt::from(2)),
                (0, 1, BigInt::from(4)),
                (1, 0, BigInt::from(6)),
                (1, 1, BigInt::from(6)),
            ],
        };
        // det = 12 - 24 = -12, gcd of entries 2 -> factors 2, 6
        assert_eq!(invariant_factors(&m), vec![BigUint::from(2u32), BigUint::from(6u32)]);
        let m = SparseMatrix {
            rows: 2,
            cols: 2,
            entries: vec![(0, 0, BigInt::from(2)), (1, 1, BigInt::from(3))],
        };
        assert_eq!(invariant_factors(&m), vec![BigUint::one(), BigUint::from(6u32)]);
    }

    #[test]
    fn field_validation() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert_eq!(Field::prime(7).unwrap(), Field::Prime(7));
        assert_eq!(Field::Prime(3).to_string(), "GF(3)");
    }

    #[test]
    fn poincare_round_trip() {
        let t = reduced_betti(&rp2(), Field::Prime(2), CAP).unwrap();
        assert_eq!(BettiTable::from_poincare(Field::Prime(2), &t.poincare()).unwrap(), t);
    }
}

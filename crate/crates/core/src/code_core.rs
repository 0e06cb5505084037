//! Linear codes and the checks every construction is measured against:
//! minimum distance, per-group repairability, all-symbol locality, the
//! Singleton-type bound and Hamming sphere sizes.

use std::ops::ControlFlow;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{FieldSpec, Symbol};
use crate::matrix::{binomial, rank_of_vectors, Matrix};

/// Environment variable overriding [`Budget::messages`].
pub const BUDGET_MESSAGES_ENV: &str = "LRC_BUDGET_MESSAGES";
/// Environment variable overriding [`Budget::subsets`].
pub const BUDGET_SUBSETS_ENV: &str = "LRC_BUDGET_SUBSETS";

/// Caps on exhaustive enumerations. Exceeding one is an error, never a hang.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Messages (codewords) enumerated by distance computations.
    pub messages: u64,
    /// Index subsets enumerated by locality and selection checks.
    pub subsets: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            messages: 1 << 24,
            subsets: 1 << 22,
        }
    }
}

impl Budget {
    /// Defaults, overridden by [`BUDGET_MESSAGES_ENV`] / [`BUDGET_SUBSETS_ENV`].
    pub fn from_env() -> Result<Self> {
        let mut budget = Budget::default();
        for (name, slot) in [
            (BUDGET_MESSAGES_ENV, &mut budget.messages),
            (BUDGET_SUBSETS_ENV, &mut budget.subsets),
        ] {
            if let Ok(raw) = std::env::var(name) {
                *slot = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameters(format!("{name}={raw:?} is not an integer")))?;
            }
        }
        Ok(budget)
    }

    pub(crate) fn check_messages(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.messages as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                budget: self.messages,
            });
        }
        Ok(())
    }

    pub(crate) fn check_subsets(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.subsets as u128 {
            return Err(Error::BudgetExceeded {
                what,
                needed,
                budget: self.subsets,
            });
        }
        Ok(())
    }
}

/// A linear `[n, k]` code given by a full-row-rank generator matrix.
/// Zero columns are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    generator: Matrix,
}

impl LinearCode {
    pub fn new(generator: Matrix) -> Result<Self> {
        let (k, n) = (generator.rows(), generator.cols());
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!("need 1 <= k <= n, got k={k} n={n}")));
        }
        let rank = generator.rank();
        if rank != k {
            return Err(Error::RankDeficient { rank, expected: k });
        }
        Ok(LinearCode { generator })
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn field(&self) -> &FieldSpec {
        self.generator.field()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    /// `message · G`.
    pub fn encode(&self, message: &[Symbol]) -> Result<Vec<Symbol>> {
        if message.len() != self.k() {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for k={}",
                message.len(),
                self.k()
            )));
        }
        let f = self.field();
        let mut word = vec![0; self.n()];
        for (i, &e) in message.iter().enumerate() {
            if e >= f.order() {
                return Err(Error::InvalidElement {
                    value: e as u64,
                    order: f.order(),
                });
            }
            for (w, &g) in word.iter_mut().zip(self.generator.row(i)) {
                *w = f.add(*w, f.mul(e, g));
            }
        }
        Ok(word)
    }
}

pub fn weight(word: &[Symbol]) -> usize {
    word.iter().filter(|&&s| s != 0).count()
}

pub fn hamming_distance(x: &[Symbol], y: &[Symbol]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// Enumerates codewords `e · G` for messages sharing a fixed prefix, in
/// odometer order over the free trailing digits.
pub(crate) struct Encoder<'a> {
    field: &'a FieldSpec,
    k: usize,
    n: usize,
    /// `table[(i * q + a) * n + j] = a * G[i][j]`, when small enough.
    table: Option<Vec<Symbol>>,
    generator: &'a Matrix,
}

const SCALED_TABLE_LIMIT: usize = 1 << 22;

impl<'a> Encoder<'a> {
    pub(crate) fn new(code: &'a LinearCode) -> Self {
        Self::for_generator(&code.generator)
    }

    /// Any `k x n` matrix, including `k = 0` (the zero code).
    pub(crate) fn for_generator(generator: &'a Matrix) -> Self {
        let field = generator.field();
        let (k, n, q) = (generator.rows(), generator.cols(), field.order() as usize);
        let table = (k * q * n <= SCALED_TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(k * q * n);
            for i in 0..k {
                for a in 0..q as Symbol {
                    t.extend(generator.row(i).iter().map(|&g| field.mul(a, g)));
                }
            }
            t
        });
        Encoder {
            field,
            k,
            n,
            table,
            generator,
        }
    }

    #[inline]
    fn accumulate(&self, out: &mut [Symbol], base: &[Symbol], row: usize, scalar: Symbol) {
        let f = self.field;
        match &self.table {
            Some(t) => {
                let start = (row * f.order() as usize + scalar as usize) * self.n;
                for ((o, &b), &s) in out.iter_mut().zip(base).zip(&t[start..start + self.n]) {
                    *o = f.add(b, s);
                }
            }
            None => {
                for ((o, &b), &g) in out.iter_mut().zip(base).zip(self.generator.row(row)) {
                    *o = f.add(b, f.mul(scalar, g));
                }
            }
        }
    }

    /// Visits `e · G` for every message starting with `prefix`.
    pub(crate) fn visit<F>(&self, prefix: &[Symbol], mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[Symbol]) -> ControlFlow<()>,
    {
        let q = self.field.order();
        let mut base = vec![0; self.n];
        let mut scratch = vec![0; self.n];
        for (i, &e) in prefix.iter().enumerate() {
            if e != 0 {
                self.accumulate(&mut scratch, &base, i, e);
                std::mem::swap(&mut base, &mut scratch);
            }
        }
        let free = self.k - prefix.len();
        if free == 0 {
            return visit(&base);
        }
        // acc[d] = base + sum of the first d free digits times their rows
        let mut acc = vec![base; free + 1];
        let mut digits = vec![0 as Symbol; free];
        loop {
            visit(&acc[free])?;
            let mut d = free;
            loop {
                if d == 0 {
                    return ControlFlow::Continue(());
                }
                d -= 1;
                digits[d] += 1;
                if digits[d] < q {
                    break;
                }
                digits[d] = 0;
            }
            for level in d..free {
                let (lo, hi) = acc.split_at_mut(level + 1);
                self.accumulate(&mut hi[0], &lo[level], prefix.len() + level, digits[level]);
            }
        }
    }
}

/// Message prefixes that split the projective message space (first nonzero
/// digit equal to one) into independent work units.
fn projective_units(k: usize, q: Symbol) -> Vec<Vec<Symbol>> {
    let mut units = Vec::new();
    for lead in 0..k {
        let mut prefix = vec![0; lead];
        prefix.push(1);
        if lead + 1 < k {
            for a in 0..q {
                let mut p = prefix.clone();
                p.push(a);
                units.push(p);
            }
        } else {
            units.push(prefix);
        }
    }
    units
}

/// Number of messages visited by [`minimum_distance`]: one per line through
/// the origin, `(q^k - 1) / (q - 1)`.
pub fn distance_enumeration_size(q: u32, k: usize) -> u128 {
    let q = q as u128;
    match q.checked_pow(k as u32) {
        Some(qk) => (qk - 1) / (q - 1),
        None => u128::MAX,
    }
}

fn check_distance_budget(code: &LinearCode, budget: &Budget) -> Result<()> {
    budget.check_messages("codewords", distance_enumeration_size(code.field().order(), code.k()))
}

fn unit_min_weight(encoder: &Encoder<'_>, prefix: &[Symbol]) -> usize {
    let mut best = usize::MAX;
    let _ = encoder.visit(prefix, |word| {
        best = best.min(weight(word));
        if best <= 1 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    best
}

/// Minimum Hamming weight over nonzero codewords.
///
/// Scaling a codeword by a nonzero scalar preserves its weight, so only
/// messages whose first nonzero digit is one are encoded. Work is split across
/// the rayon pool; the min-reduction makes the result independent of
/// scheduling.
pub fn minimum_distance(code: &LinearCode, budget: &Budget) -> Result<usize> {
    check_distance_budget(code, budget)?;
    let encoder = Encoder::new(code);
    let units = projective_units(code.k(), code.field().order());
    Ok(units
        .par_iter()
        .map(|p| unit_min_weight(&encoder, p))
        .min()
        .expect("k >= 1"))
}

/// Single-threaded [`minimum_distance`].
pub fn minimum_distance_sequential(code: &LinearCode, budget: &Budget) -> Result<usize> {
    check_distance_budget(code, budget)?;
    let encoder = Encoder::new(code);
    let units = projective_units(code.k(), code.field().order());
    Ok(units
        .iter()
        .map(|p| unit_min_weight(&encoder, p))
        .min()
        .expect("k >= 1"))
}

/// `d_opt(n, k, r, δ) = n − k − (⌈k/r⌉ − 1)(δ − 1) + 1`.
pub fn d_opt(n: usize, k: usize, r: usize, delta: usize) -> Result<i64> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    if r == 0 || r > k {
        return Err(Error::InvalidParameters(format!("need 1 <= r <= k, got r={r} k={k}")));
    }
    if delta < 2 {
        return Err(Error::InvalidParameters(format!("need delta >= 2, got {delta}")));
    }
    let penalty = (k.div_ceil(r) - 1) * (delta - 1);
    Ok(n as i64 - k as i64 - penalty as i64 + 1)
}

/// `V_q(n, s) = Σ_{i=0}^{s} C(n, i) (q − 1)^i`.
pub fn sphere_size(q: u64, n: usize, s: usize) -> BigUint {
    let mut total = BigUint::zero();
    let mut power = BigUint::one();
    let mut choose = BigUint::one();
    for i in 0..=s.min(n) {
        if i > 0 {
            power *= q - 1;
            choose = choose * (n - i + 1) / i;
        }
        total += &choose * &power;
    }
    total
}

/// `(1 + s) · C(n, ⌊n/2⌋) · q^s`, which dominates [`sphere_size`].
pub fn sphere_size_upper_bound(q: u64, n: usize, s: usize) -> BigUint {
    let central = BigUint::from(binomial(n, n / 2));
    BigUint::from(1 + s as u64) * central * BigUint::from(q).pow(s as u32)
}

/// Repair groups partitioning the coordinates, plus coordinates whose
/// generator column is identically zero (trivially repairable, since they
/// always hold zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityStructure {
    pub r: usize,
    pub delta: usize,
    pub groups: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_columns: Vec<usize>,
}

impl LocalityStructure {
    /// Checks the partition and group-size invariants for a length-`n` code.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.r == 0 || self.delta < 2 {
            return Err(Error::InvalidParameters(format!(
                "need r >= 1 and delta >= 2, got r={} delta={}",
                self.r, self.delta
            )));
        }
        let mut seen = vec![false; n];
        for &i in self.groups.iter().flatten().chain(&self.zero_columns) {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, bound: n });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidParameters(format!(
                "coordinate {missing} belongs to no group"
            )));
        }
        let max = self.r + self.delta - 1;
        if let Some(g) = self.groups.iter().find(|g| g.len() < self.delta || g.len() > max) {
            return Err(Error::InvalidParameters(format!(
                "group of size {} outside [{}, {}]",
                g.len(),
                self.delta,
                max
            )));
        }
        Ok(())
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }
}

/// Whether the code restricted to `group` has minimum distance at least
/// `delta`: with `t` the rank of the group's columns, every choice of
/// `|group| − δ + 1` of them must still have rank `t`. A restriction with no
/// nonzero codeword (`t = 0`) passes for any `delta`.
pub fn check_group_repairability(code: &LinearCode, group: &[usize], delta: usize) -> Result<bool> {
    let columns = group_columns(code, group)?;
    Ok(columns_repairable(code.field(), &columns, delta))
}

fn group_columns(code: &LinearCode, group: &[usize]) -> Result<Vec<Vec<Symbol>>> {
    if group.is_empty() {
        return Err(Error::InvalidParameters("empty repair group".into()));
    }
    let mut seen = vec![false; code.n()];
    group
        .iter()
        .map(|&j| {
            if j >= code.n() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    bound: code.n(),
                });
            }
            if std::mem::replace(&mut seen[j], true) {
                return Err(Error::DuplicateIndex(j));
            }
            Ok(code.generator.column(j))
        })
        .collect()
}

pub(crate) fn columns_repairable(field: &FieldSpec, columns: &[Vec<Symbol>], delta: usize) -> bool {
    let t = rank_of_vectors(field, columns);
    let s = columns.len();
    if s < delta {
        return t == 0;
    }
    let keep = s + 1 - delta;
    if keep < t {
        return false;
    }
    columns
        .iter()
        .combinations(keep)
        .all(|subset| rank_of_vectors(field, &subset) == t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalityWitness {
    /// The checked partition (the hint).
    Partition(LocalityStructure),
    /// For each coordinate, a repair set containing it, if one was found.
    PerSymbol(Vec<Option<Vec<usize>>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityVerdict {
    pub holds: bool,
    pub witness: LocalityWitness,
}

/// All-symbol `(r, δ)`-locality.
///
/// With a hint, checks that it partitions the coordinates with group sizes in
/// `[δ, r + δ − 1]`, that its zero columns really are zero, and that every
/// group is repairable. Without one, searches each coordinate's repair sets
/// in increasing size; the resulting sets need not be disjoint.
pub fn has_all_symbol_locality(
    code: &LinearCode,
    r: usize,
    delta: usize,
    hint: Option<&LocalityStructure>,
    budget: &Budget,
) -> Result<LocalityVerdict> {
    if r == 0 || delta < 2 {
        return Err(Error::InvalidParameters(format!(
            "need r >= 1 and delta >= 2, got r={r} delta={delta}"
        )));
    }
    if let Some(structure) = hint {
        let mut as_checked = structure.clone();
        as_checked.r = r;
        as_checked.delta = delta;
        let holds = as_checked.validate(code.n()).is_ok()
            && structure.zero_columns.iter().all(|&j| code.generator.is_zero_column(j))
            && structure
                .groups
                .iter()
                .map(|g| check_group_repairability(code, g, delta))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .all(|ok| ok);
        return Ok(LocalityVerdict {
            holds,
            witness: LocalityWitness::Partition(structure.clone()),
        });
    }

    let n = code.n();
    let max_size = (r + delta - 1).min(n);
    let per_symbol: u128 = (1..=max_size).map(|s| binomial(n - 1, s - 1)).sum();
    budget.check_subsets("repair sets", per_symbol * n as u128)?;

    let field = code.field();
    let columns: Vec<Vec<Symbol>> = (0..n).map(|j| code.generator.column(j)).collect();
    let mut witnesses: Vec<Option<Vec<usize>>> = vec![None; n];
    for j in 0..n {
        if witnesses[j].is_some() {
            continue;
        }
        let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        let found = (1..=max_size).find_map(|size| {
            others.iter().copied().combinations(size - 1).find_map(|rest| {
                let mut set = rest;
                set.push(j);
                set.sort_unstable();
                let cols: Vec<Vec<Symbol>> = set.iter().map(|&i| columns[i].clone()).collect();
                columns_repairable(field, &cols, delta).then_some(set)
            })
        });
        if let Some(set) = found {
            // a repair set serves every coordinate in it
            for &i in &set {
                if witnesses[i].is_none() {
                    witnesses[i] = Some(set.clone());
                }
            }
        }
    }
    let holds = witnesses.iter().all(Option::is_some);
    Ok(LocalityVerdict {
        holds,
        witness: LocalityWitness::PerSymbol(witnesses),
    })
}

/// Distance of a code measured against the Singleton-type bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optimality {
    pub distance: usize,
    pub d_opt: i64,
    /// `d_opt − d`.
    pub gap: i64,
    pub delta: usize,
}

impl Optimality {
    pub fn is_optimal(&self) -> bool {
        self.gap == 0
    }

    /// Within `δ − 1` of the bound.
    pub fn is_almost_optimal(&self) -> bool {
        self.gap < self.delta as i64
    }
}

/// Locality is the caller's responsibility; the bound only binds codes that
/// have it.
pub fn optimality(code: &LinearCode, r: usize, delta: usize, budget: &Budget) -> Result<Optimality> {
    let bound = d_opt(code.n(), code.k(), r, delta)?;
    let distance = minimum_distance(code, budget)?;
    Ok(Optimality {
        distance,
        d_opt: bound,
        gap: bound - distance as i64,
        delta,
    })
}

pub fn optimality_gap(code: &LinearCode, r: usize, delta: usize, budget: &Budget) -> Result<i64> {
    Ok(optimality(code, r, delta, budget)?.gap)
}

pub fn is_optimal(code: &LinearCode, r: usize, delta: usize, budget: &Budget) -> Result<bool> {
    Ok(optimality(code, r, delta, budget)?.is_optimal())
}

/// Parameters and outcome of a construction run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub method: String,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
    pub q: u32,
    pub group_sizes: Vec<usize>,
    pub zero_columns: usize,
    pub z: usize,
    pub achieved_distance: usize,
    pub distance_bound: i64,
    pub d_opt: i64,
    pub is_optimal: bool,
    pub success: bool,
    pub attempts: u32,
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::with_order(q).unwrap()
    }

    fn code(q: u64, rows: &[&[u64]]) -> LinearCode {
        LinearCode::new(Matrix::from_rows(&gf(q), rows).unwrap()).unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn code_invariants() {
        let f = gf(2);
        let dependent = Matrix::from_rows(&f, &[[1u64, 1], [1, 1]]).unwrap();
        assert_eq!(
            LinearCode::new(dependent).unwrap_err(),
            Error::RankDeficient { rank: 1, expected: 2 }
        );
        let wide = Matrix::identity(&f, 3).select_columns(&[0, 1]).unwrap();
        assert!(matches!(LinearCode::new(wide), Err(Error::InvalidParameters(_))));
        // zero columns are fine
        code(2, &[&[1, 0, 0], &[0, 1, 0]]);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(
            minimum_distance(&code(2, &[&[1, 0, 1], &[0, 1, 1]]), &budget()).unwrap(),
            2
        );
        let id = LinearCode::new(Matrix::identity(&gf(5), 4)).unwrap();
        assert_eq!(minimum_distance(&id, &budget()).unwrap(), 1);
        assert_eq!(minimum_distance(&code(3, &[&[1, 1, 1]]), &budget()).unwrap(), 3);
        assert_eq!(
            minimum_distance_sequential(&code(3, &[&[1, 1, 1]]), &budget()).unwrap(),
            3
        );
    }

    #[test]
    fn distance_budget() {
        let id = LinearCode::new(Matrix::identity(&gf(7), 4)).unwrap();
        // (7^4 - 1) / 6 = 400 lines
        assert_eq!(distance_enumeration_size(7, 4), 400);
        let tight = Budget {
            messages: 399,
            ..budget()
        };
        assert!(matches!(
            minimum_distance(&id, &tight),
            Err(Error::BudgetExceeded { needed: 400, .. })
        ));
        assert!(minimum_distance(
            &id,
            &Budget {
                messages: 400,
                ..budget()
            }
        )
        .is_ok());
    }

    #[test]
    fn d_opt_examples() {
        assert_eq!(d_opt(12, 5, 3, 2).unwrap(), 7);
        assert_eq!(d_opt(8, 4, 3, 2).unwrap(), 4);
        for (n, k, delta) in [(10, 4, 2), (9, 9, 3), (20, 7, 4)] {
            assert_eq!(d_opt(n, k, k, delta).unwrap(), (n - k + 1) as i64);
        }
        assert!(d_opt(5, 3, 4, 2).is_err());
        assert!(d_opt(5, 3, 0, 2).is_err());
        assert!(d_opt(5, 3, 2, 1).is_err());
        assert!(d_opt(5, 6, 2, 2).is_err());
    }

    #[test]
    fn sphere_examples() {
        assert_eq!(sphere_size(2, 3, 1), BigUint::from(4u32));
        assert_eq!(sphere_size(5, 7, 0), BigUint::one());
        assert_eq!(sphere_size_upper_bound(2, 3, 1), BigUint::from(12u32));
        assert_eq!(sphere_size(3, 4, 4), BigUint::from(81u32));
        for q in 2..6u64 {
            for n in 0..8 {
                for s in 0..=n {
                    assert!(sphere_size(q, n, s) <= sphere_size_upper_bound(q, n, s));
                }
            }
        }
    }

    #[test]
    fn group_repairability_examples() {
        let c = code(2, &[&[1, 1, 0], &[0, 0, 1]]);
        assert!(check_group_repairability(&c, &[0, 1], 2).unwrap());
        let z = code(2, &[&[1, 0, 1], &[0, 0, 1]]);
        assert!(!check_group_repairability(&z, &[0, 1], 2).unwrap());
        // a zero coordinate alone is trivially repairable
        assert!(check_group_repairability(&z, &[1], 2).unwrap());
        assert!(!check_group_repairability(&c, &[2], 2).unwrap());
        assert!(check_group_repairability(&c, &[], 2).is_err());
        assert!(check_group_repairability(&c, &[3], 2).is_err());
        assert!(check_group_repairability(&c, &[0, 0], 2).is_err());
    }

    #[test]
    fn locality_examples() {
        let rep = code(2, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let hint = LocalityStructure {
            r: 1,
            delta: 2,
            groups: vec![vec![0, 1], vec![2, 3]],
            zero_columns: vec![],
        };
        let v = has_all_symbol_locality(&rep, 1, 2, Some(&hint), &budget()).unwrap();
        assert!(v.holds);
        let v = has_all_symbol_locality(&rep, 1, 2, None, &budget()).unwrap();
        assert!(v.holds);
        assert_eq!(
            v.witness,
            LocalityWitness::PerSymbol(vec![
                Some(vec![0, 1]),
                Some(vec![0, 1]),
                Some(vec![2, 3]),
                Some(vec![2, 3])
            ])
        );

        let id = LinearCode::new(Matrix::identity(&gf(3), 3)).unwrap();
        for r in 1..=3 {
            assert!(!has_all_symbol_locality(&id, r, 2, None, &budget()).unwrap().holds);
        }

        // [4, 2] Reed-Solomon-like MDS code over GF(5): any k+1 symbols dependent
        let mds = code(5, &[&[1, 1, 1, 1], &[0, 1, 2, 3]]);
        assert!(has_all_symbol_locality(&mds, 2, 2, None, &budget()).unwrap().holds);

        // a bad hint: overlapping groups
        let overlapping = LocalityStructure {
            r: 1,
            delta: 2,
            groups: vec![vec![0, 1], vec![1, 2, 3]],
            zero_columns: vec![],
        };
        assert!(
            !has_all_symbol_locality(&rep, 2, 2, Some(&overlapping), &budget())
                .unwrap()
                .holds
        );
        // a hint claiming a nonzero column is zero
        let lying = LocalityStructure {
            r: 1,
            delta: 2,
            groups: vec![vec![0, 1]],
            zero_columns: vec![2, 3],
        };
        assert!(
            !has_all_symbol_locality(&rep, 1, 2, Some(&lying), &budget())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn locality_budget() {
        let id = LinearCode::new(Matrix::identity(&gf(2), 3)).unwrap();
        let tiny = Budget { subsets: 2, ..budget() };
        assert!(matches!(
            has_all_symbol_locality(&id, 2, 2, None, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn optimality_examples() {
        // single parity [4, 3, 2]
        let parity = code(2, &[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]]);
        assert!(is_optimal(&parity, 3, 2, &budget()).unwrap());

        let rep = code(2, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let o = optimality(&rep, 1, 2, &budget()).unwrap();
        assert_eq!((o.distance, o.d_opt, o.gap), (2, 2, 0));
        assert!(o.is_optimal() && o.is_almost_optimal());
        assert_eq!(optimality_gap(&rep, 1, 2, &budget()).unwrap(), 0);
    }

    #[test]
    fn structure_validation() {
        let ok = LocalityStructure {
            r: 3,
            delta: 2,
            groups: vec![vec![0, 1, 2, 3], vec![4, 5]],
            zero_columns: vec![6],
        };
        ok.validate(7).unwrap();
        assert!(ok.validate(8).is_err());
        assert!(ok.validate(6).is_err());
        let big = LocalityStructure { r: 2, ..ok.clone() };
        assert!(big.validate(7).is_err());
        let small = LocalityStructure {
            groups: vec![vec![0], vec![1]],
            zero_columns: vec![],
            ..ok
        };
        assert!(small.validate(2).is_err());
    }

    #[test]
    fn budget_env_parsing() {
        // process-global state; only this test touches these variables
        std::env::set_var(BUDGET_MESSAGES_ENV, "123");
        std::env::set_var(BUDGET_SUBSETS_ENV, " 45 ");
        let b = Budget::from_env().unwrap();
        assert_eq!((b.messages, b.subsets), (123, 45));
        std::env::set_var(BUDGET_MESSAGES_ENV, "lots");
        assert!(Budget::from_env().is_err());
        std::env::remove_var(BUDGET_MESSAGES_ENV);
        std::env::remove_var(BUDGET_SUBSETS_ENV);
        assert_eq!(Budget::from_env().unwrap(), Budget::default());
    }
}

//! Generator-matrix constructions for codes with all-symbol `(r, δ)`-locality.
//!
//! Both constructions lay out the columns group by group: group `j` holds
//! `t_j = s_j − δ + 1` free columns `X_j` followed by `δ − 1` repair columns
//! `X_j B_j`, where every square submatrix of `B_j` is invertible. Any
//! `t_j` columns of such a group span the whole group, which is exactly the
//! `(r, δ)` repair property. [`random_lrc`] draws the free columns uniformly;
//! [`greedy_lrc`] picks them one at a time, keeping only candidates under
//! which every capped selection of at most `k` columns stays independent.
//! Either way the result is accepted only after direct verification of rank,
//! repairability and the distance bound `n − k − z(δ − 1) + 1`.

use std::collections::BTreeMap;
use std::io::{self, Write};

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code_core::{
    check_group_repairability, d_opt, minimum_distance, Budget, ConstructionReport, LinearCode, LocalityStructure,
};
use crate::error::{Error, Result};
use crate::finite_field::{FieldSpec, Symbol};
use crate::matrix::{binomial, cauchy_matrix, rref_in_place, Matrix};

/// Target parameters of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LrcParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub delta: usize,
}

impl LrcParams {
    pub fn new(n: usize, k: usize, r: usize, delta: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameters(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        if r == 0 || r > k {
            return Err(Error::InvalidParameters(format!("need 1 <= r <= k, got r={r} k={k}")));
        }
        if delta < 2 {
            return Err(Error::InvalidParameters(format!("need delta >= 2, got {delta}")));
        }
        Ok(LrcParams { n, k, r, delta })
    }

    pub fn d_opt(&self) -> i64 {
        d_opt(self.n, self.k, self.r, self.delta).expect("validated parameters")
    }
}

/// Group sizes `s_1 ≤ … ≤ s_A`, plus trailing all-zero columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPlan {
    sizes: Vec<usize>,
    r: usize,
    delta: usize,
    zero_columns: usize,
}

impl GroupPlan {
    /// Sorts `sizes` ascending and checks `δ ≤ s_j ≤ r + δ − 1` and
    /// `Σ t_j ≥ k`.
    pub fn new(mut sizes: Vec<usize>, r: usize, delta: usize, k: usize, zero_columns: usize) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidParameters("a plan needs at least one group".into()));
        }
        if r == 0 || delta < 2 {
            return Err(Error::InvalidParameters(format!(
                "need r >= 1 and delta >= 2, got r={r} delta={delta}"
            )));
        }
        if let Some(&s) = sizes.iter().find(|&&s| s < delta || s > r + delta - 1) {
            return Err(Error::InvalidParameters(format!(
                "group size {s} outside [{delta}, {}]",
                r + delta - 1
            )));
        }
        sizes.sort_unstable();
        let plan = GroupPlan {
            sizes,
            r,
            delta,
            zero_columns,
        };
        let rank_room: usize = plan.free_ranks().iter().sum();
        if rank_room < k {
            return Err(Error::InvalidParameters(format!(
                "infeasible: groups leave room for rank {rank_room} < k = {k}"
            )));
        }
        Ok(plan)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn zero_columns(&self) -> usize {
        self.zero_columns
    }

    pub fn group_count(&self) -> usize {
        self.sizes.len()
    }

    /// `t_j = s_j − δ + 1`.
    pub fn free_ranks(&self) -> Vec<usize> {
        self.sizes.iter().map(|s| s + 1 - self.delta).collect()
    }

    /// Length covered by the groups.
    pub fn coded_length(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Full code length including zero columns.
    pub fn length(&self) -> usize {
        self.coded_length() + self.zero_columns
    }

    /// Column layout: groups contiguous in plan order, zero columns last.
    pub fn locality_structure(&self) -> LocalityStructure {
        let mut start = 0;
        let groups = self
            .sizes
            .iter()
            .map(|&s| {
                let g = (start..start + s).collect();
                start += s;
                g
            })
            .collect();
        LocalityStructure {
            r: self.r,
            delta: self.delta,
            groups,
            zero_columns: (start..start + self.zero_columns).collect(),
        }
    }
}

/// Full groups of size `r + δ − 1`, plus one group of the remainder `b`
/// when `b ≥ δ`; a remainder `0 < b < δ` becomes `b` zero columns.
pub fn partition_lengths(n: usize, k: usize, r: usize, delta: usize) -> Result<GroupPlan> {
    LrcParams::new(n, k, r.min(k), delta)?;
    if r == 0 {
        return Err(Error::InvalidParameters("need r >= 1".into()));
    }
    let full = r + delta - 1;
    let groups = n.div_ceil(full);
    if n < groups * (delta - 1) + k {
        return Err(Error::InvalidParameters(format!(
            "infeasible: n - ceil(n/(r+delta-1))(delta-1) = {} < k = {k}",
            n as i64 - (groups * (delta - 1)) as i64
        )));
    }
    let (a, b) = (n / full, n % full);
    let mut sizes = vec![full; a];
    let zero_columns = if b >= delta {
        sizes.push(b);
        0
    } else {
        b
    };
    GroupPlan::new(sizes, r, delta, k, zero_columns)
}

/// Largest `z` with `t_1 + … + t_z ≤ k − 1`, over ascending `t_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZStatistic {
    pub z: usize,
    /// `prefix_sums[i] = t_1 + … + t_i`, starting from `0`.
    pub prefix_sums: Vec<usize>,
}

pub fn compute_z(plan: &GroupPlan, k: usize) -> ZStatistic {
    let mut prefix_sums = vec![0];
    for t in plan.free_ranks() {
        prefix_sums.push(prefix_sums.last().unwrap() + t);
    }
    let z = prefix_sums
        .iter()
        .rposition(|&p| p < k)
        .expect("prefix_sums[0] = 0 <= k - 1");
    ZStatistic { z, prefix_sums }
}

/// `n − k − z(δ − 1) + 1`.
pub fn distance_bound(n: usize, k: usize, delta: usize, z: usize) -> i64 {
    n as i64 - k as i64 - (z * (delta - 1)) as i64 + 1
}

/// `t × c` matrix whose square submatrices are all invertible: a Cauchy
/// matrix, or the all-ones matrix for a single row or column when the field
/// has too few points for a Cauchy matrix.
pub fn repair_block(field: &FieldSpec, t: usize, c: usize) -> Result<Matrix> {
    match cauchy_matrix(field, t, c) {
        Ok(m) => Ok(m),
        Err(Error::FieldTooSmall { .. }) if t.min(c) == 1 => Matrix::from_symbols(field, t, c, vec![1; t * c]),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionConfig {
    pub seed: u64,
    /// Whole-matrix attempts before giving up.
    pub max_retries: u32,
    /// Candidate draws per greedy column before abandoning an attempt.
    pub candidate_limit: u32,
    pub budget: Budget,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            seed: 0,
            max_retries: 16,
            candidate_limit: 1_000_000,
            budget: Budget::default(),
        }
    }
}

/// A verified code with its repair groups and report.
#[derive(Debug, Clone)]
pub struct Construction {
    pub code: LinearCode,
    pub structure: LocalityStructure,
    pub report: ConstructionReport,
}

fn check_plan(params: &LrcParams, plan: &GroupPlan) -> Result<()> {
    if plan.length() != params.n || plan.r() != params.r || plan.delta() != params.delta {
        return Err(Error::InvalidParameters(format!(
            "plan (length {}, r={}, delta={}) does not match n={} r={} delta={}",
            plan.length(),
            plan.r(),
            plan.delta(),
            params.n,
            params.r,
            params.delta
        )));
    }
    if plan.free_ranks().iter().sum::<usize>() < params.k {
        return Err(Error::InvalidParameters("plan leaves too little rank".into()));
    }
    Ok(())
}

/// Lays out groups `(X_j | X_j B_j)` followed by zero columns.
fn assemble(field: &FieldSpec, k: usize, groups: &[Vec<Vec<Symbol>>], zero_columns: usize) -> Result<Matrix> {
    let columns: Vec<&Vec<Symbol>> = groups.iter().flatten().collect();
    let n = columns.len() + zero_columns;
    let mut data = vec![0; k * n];
    for (j, col) in columns.iter().enumerate() {
        for i in 0..k {
            data[i * n + j] = col[i];
        }
    }
    Matrix::from_symbols(field, k, n, data)
}

/// `Σ_l coeffs[l] · vectors[l]`.
fn combine(
    field: &FieldSpec,
    vectors: &[Vec<Symbol>],
    coeffs: impl Iterator<Item = Symbol>,
    len: usize,
) -> Vec<Symbol> {
    let mut out = vec![0; len];
    for (v, a) in vectors.iter().zip(coeffs) {
        for (o, &x) in out.iter_mut().zip(v) {
            *o = field.add(*o, field.mul(a, x));
        }
    }
    out
}

/// Free columns followed by the repair columns built from the first
/// `free.len()` rows of `block`.
fn with_repair_columns(field: &FieldSpec, free: &[Vec<Symbol>], block: &Matrix, k: usize) -> Vec<Vec<Symbol>> {
    let mut group = free.to_vec();
    for m in 0..block.cols() {
        group.push(combine(field, free, (0..free.len()).map(|l| block.symbol(l, m)), k));
    }
    group
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct AttemptOutcome {
    code: Option<LinearCode>,
    groups_ok: bool,
    distance: Option<usize>,
    bound: i64,
}

impl AttemptOutcome {
    fn success(&self) -> bool {
        self.groups_ok && self.distance.is_some_and(|d| d as i64 >= self.bound)
    }

    fn failure_reason(&self) -> String {
        match (&self.code, self.groups_ok, self.distance) {
            (None, _, _) => "generator matrix rank below k".into(),
            (_, false, _) => "a repair group failed the erasure check".into(),
            (_, _, Some(d)) => format!("distance {d} below bound {}", self.bound),
            _ => "distance not computed".into(),
        }
    }
}

fn evaluate(
    field: &FieldSpec,
    params: &LrcParams,
    plan: &GroupPlan,
    groups: &[Vec<Vec<Symbol>>],
    budget: &Budget,
    stop_on_group_failure: bool,
) -> Result<AttemptOutcome> {
    let z = compute_z(plan, params.k).z;
    let bound = distance_bound(plan.coded_length(), params.k, params.delta, z);
    let g = assemble(field, params.k, groups, plan.zero_columns())?;
    let code = match LinearCode::new(g) {
        Ok(c) => c,
        Err(Error::RankDeficient { .. }) => {
            return Ok(AttemptOutcome {
                code: None,
                groups_ok: false,
                distance: None,
                bound,
            })
        }
        Err(e) => return Err(e),
    };
    let structure = plan.locality_structure();
    let mut groups_ok = true;
    for group in &structure.groups {
        if !check_group_repairability(&code, group, params.delta)? {
            groups_ok = false;
            break;
        }
    }
    let distance = if groups_ok || !stop_on_group_failure {
        Some(minimum_distance(&code, budget)?)
    } else {
        None
    };
    Ok(AttemptOutcome {
        code: Some(code),
        groups_ok,
        distance,
        bound,
    })
}

fn finish(
    method: &str,
    field: &FieldSpec,
    params: &LrcParams,
    plan: &GroupPlan,
    outcome: AttemptOutcome,
    attempts: u32,
    seed: u64,
) -> Construction {
    let z = compute_z(plan, params.k).z;
    let distance = outcome.distance.expect("successful attempt has a distance");
    let d_opt = params.d_opt();
    let report = ConstructionReport {
        method: method.to_string(),
        n: params.n,
        k: params.k,
        r: params.r,
        delta: params.delta,
        q: field.order(),
        group_sizes: plan.sizes().to_vec(),
        zero_columns: plan.zero_columns(),
        z,
        achieved_distance: distance,
        distance_bound: outcome.bound,
        d_opt,
        is_optimal: distance as i64 == d_opt,
        success: true,
        attempts,
        seed,
    };
    Construction {
        code: outcome.code.expect("successful attempt has a code"),
        structure: plan.locality_structure(),
        report,
    }
}

fn repair_blocks(field: &FieldSpec, plan: &GroupPlan) -> Result<BTreeMap<usize, Matrix>> {
    let mut blocks = BTreeMap::new();
    for t in plan.free_ranks() {
        if let std::collections::btree_map::Entry::Vacant(e) = blocks.entry(t) {
            e.insert(repair_block(field, t, plan.delta() - 1)?);
        }
    }
    Ok(blocks)
}

fn random_groups(
    field: &FieldSpec,
    k: usize,
    plan: &GroupPlan,
    blocks: &BTreeMap<usize, Matrix>,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Vec<Symbol>>> {
    // E is drawn column by column, one group at a time
    plan.free_ranks()
        .into_iter()
        .map(|t| {
            let free: Vec<Vec<Symbol>> = (0..t)
                .map(|_| (0..k).map(|_| field.random_symbol(rng)).collect())
                .collect();
            with_repair_columns(field, &free, &blocks[&t], k)
        })
        .collect()
}

/// Random construction: `E` has i.i.d. uniform entries, `F = (E_1 B_1 | …)`,
/// emitted as `(E_1 | E_1 B_1 | E_2 | E_2 B_2 | …)`. Resamples until rank,
/// repairability and the distance bound all check out.
pub fn random_lrc(
    params: &LrcParams,
    plan: &GroupPlan,
    field: &FieldSpec,
    config: &ConstructionConfig,
) -> Result<Construction> {
    if params.r >= params.k {
        return Err(Error::InvalidParameters(format!(
            "random construction needs r < k, got r={} k={}",
            params.r, params.k
        )));
    }
    check_plan(params, plan)?;
    let blocks = repair_blocks(field, plan)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut reason = String::from("no attempts made");
    for attempt in 1..=config.max_retries {
        let groups = random_groups(field, params.k, plan, &blocks, &mut rng);
        let outcome = evaluate(field, params, plan, &groups, &config.budget, true)?;
        if outcome.success() {
            return Ok(finish("random", field, params, plan, outcome, attempt, config.seed));
        }
        reason = outcome.failure_reason();
    }
    Err(Error::RetriesExhausted {
        attempts: config.max_retries,
        reason,
    })
}

/// A set of vectors from which at most `cap` may be selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionGroup {
    pub vectors: Vec<Vec<Symbol>>,
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectionVerdict {
    Independent,
    /// A dependent selection as `(group, vector)` index pairs.
    Dependent(Vec<(usize, usize)>),
}

impl SelectionVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SelectionVerdict::Independent)
    }
}

/// Row-reduced basis grown one vector at a time. Each stored row is zero at
/// the pivots of the rows before it.
#[derive(Clone)]
struct Echelon {
    rows: Vec<(usize, Vec<Symbol>)>,
}

impl Echelon {
    fn insert(&self, field: &FieldSpec, v: &[Symbol]) -> Option<Echelon> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                let neg = field.neg(c);
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = field.add(*x, field.mul(neg, y));
                }
            }
        }
        let pivot = v.iter().position(|&x| x != 0)?;
        let inv = field.inv(v[pivot]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = field.mul(*x, inv);
        }
        let mut next = self.clone();
        next.rows.push((pivot, v));
        Some(next)
    }
}

/// Number of selections of exactly `target` vectors respecting the caps.
fn maximal_selection_count(groups: &[SelectionGroup], target: usize) -> u128 {
    let mut poly = vec![0u128; target + 1];
    poly[0] = 1;
    for g in groups {
        let top = g.cap.min(g.vectors.len());
        let mut next = vec![0u128; target + 1];
        for (have, &ways) in poly.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            for c in 0..=top.min(target - have) {
                next[have + c] = next[have + c].saturating_add(ways.saturating_mul(binomial(g.vectors.len(), c)));
            }
        }
        poly = next;
    }
    poly[target]
}

/// Whether every selection of at most `k` vectors, taking at most `cap`
/// from each group, is linearly independent. Subsets of independent sets are
/// independent, so only selections of the largest reachable size are
/// enumerated.
pub fn independent_selection_property(
    field: &FieldSpec,
    groups: &[SelectionGroup],
    k: usize,
    budget: &Budget,
) -> Result<SelectionVerdict> {
    let len = groups
        .iter()
        .flat_map(|g| g.vectors.first())
        .map(Vec::len)
        .next()
        .unwrap_or(k);
    if groups.iter().flat_map(|g| &g.vectors).any(|v| v.len() != len) {
        return Err(Error::DimensionMismatch("selection vectors differ in length".into()));
    }
    let caps: Vec<usize> = groups.iter().map(|g| g.cap.min(g.vectors.len())).collect();
    let mut suffix = vec![0; groups.len() + 1];
    for i in (0..groups.len()).rev() {
        suffix[i] = suffix[i + 1] + caps[i];
    }
    let target = k.min(suffix[0]);
    budget.check_subsets("capped selections", maximal_selection_count(groups, target))?;

    struct Search<'a> {
        field: &'a FieldSpec,
        groups: &'a [SelectionGroup],
        caps: Vec<usize>,
        suffix: Vec<usize>,
        chosen: Vec<(usize, usize)>,
    }

    impl Search<'_> {
        fn run(&mut self, g: usize, remaining: usize, basis: &Echelon) -> Option<Vec<(usize, usize)>> {
            if remaining == 0 || g == self.groups.len() {
                return None;
            }
            let min_here = remaining.saturating_sub(self.suffix[g + 1]);
            let max_here = self.caps[g].min(remaining);
            for c in min_here..=max_here {
                for subset in (0..self.groups[g].vectors.len()).combinations(c) {
                    let mut b = basis.clone();
                    let depth = self.chosen.len();
                    for &i in &subset {
                        self.chosen.push((g, i));
                        match b.insert(self.field, &self.groups[g].vectors[i]) {
                            Some(next) => b = next,
                            None => return Some(self.chosen.clone()),
                        }
                    }
                    if let Some(w) = self.run(g + 1, remaining - c, &b) {
                        return Some(w);
                    }
                    self.chosen.truncate(depth);
                }
            }
            None
        }
    }

    let mut search = Search {
        field,
        groups,
        caps,
        suffix,
        chosen: Vec::new(),
    };
    Ok(match search.run(0, target, &Echelon { rows: Vec::new() }) {
        None => SelectionVerdict::Independent,
        Some(w) => SelectionVerdict::Dependent(w),
    })
}

/// Greedy construction over the plan from [`partition_lengths`].
pub fn greedy_lrc(params: &LrcParams, field: &FieldSpec, config: &ConstructionConfig) -> Result<Construction> {
    let plan = partition_lengths(params.n, params.k, params.r, params.delta)?;
    greedy_lrc_with_plan(params, &plan, field, config)
}

/// Every choice of exactly `size` vectors taking at most `cap` from each
/// group.
fn capped_selections(groups: &[SelectionGroup], size: usize) -> Vec<Vec<&[Symbol]>> {
    fn rec<'a>(
        groups: &'a [SelectionGroup],
        suffix: &[usize],
        g: usize,
        remaining: usize,
        current: &mut Vec<&'a [Symbol]>,
        out: &mut Vec<Vec<&'a [Symbol]>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        if g == groups.len() || suffix[g] < remaining {
            return;
        }
        let group = &groups[g];
        for c in remaining.saturating_sub(suffix[g + 1])..=group.cap.min(group.vectors.len()).min(remaining) {
            for subset in group.vectors.iter().combinations(c) {
                let depth = current.len();
                current.extend(subset.iter().map(|v| v.as_slice()));
                rec(groups, suffix, g + 1, remaining - c, current, out);
                current.truncate(depth);
            }
        }
    }
    let mut suffix = vec![0; groups.len() + 1];
    for i in (0..groups.len()).rev() {
        suffix[i] = suffix[i + 1] + groups[i].cap.min(groups[i].vectors.len());
    }
    let mut out = Vec::new();
    rec(groups, &suffix, 0, size, &mut Vec::new(), &mut out);
    out
}

/// The affine subspace `−offset + span(rows)` a candidate column must avoid.
/// `rows` is in reduced echelon form and `offset` is reduced against it, so
/// equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Forbidden {
    rows: Vec<(usize, Vec<Symbol>)>,
    offset: Vec<Symbol>,
}

impl Forbidden {
    fn reduce(field: &FieldSpec, rows: &[(usize, Vec<Symbol>)], v: &mut [Symbol]) {
        for (pivot, row) in rows {
            let c = v[*pivot];
            if c != 0 {
                let neg = field.neg(c);
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = field.add(*x, field.mul(neg, y));
                }
            }
        }
    }

    fn admits(&self, field: &FieldSpec, candidate: &[Symbol]) -> bool {
        let mut v: Vec<Symbol> = candidate
            .iter()
            .zip(&self.offset)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        Self::reduce(field, &self.rows, &mut v);
        v.iter().any(|&x| x != 0)
    }
}

/// Constraints on the `j`-th free column `g` of the group under
/// construction.
///
/// The new vectors of the partial group are `g` and `s_m + λ_m g`, each of
/// the form `w + λ g` with `λ ≠ 0`. In a selection holding new vectors
/// `w_1 + λ_1 g, …, w_c + λ_c g` next to old vectors `O`, replacing the later
/// new vectors by `λ_1 w_i − λ_i w_1` leaves the span unchanged, so the
/// selection is independent exactly when `O` together with those
/// replacements is independent and `g ∉ −w_1/λ_1 + span(…)`. Selections
/// without new vectors were settled by earlier columns. Returns `None` when
/// some selection is dependent for every `g`.
fn column_constraints(
    field: &FieldSpec,
    finished: &[SelectionGroup],
    free: &[Vec<Symbol>],
    repair: &[Vec<Symbol>],
    lambdas: &[Symbol],
    k: usize,
    budget: &Budget,
) -> Result<Option<Vec<Forbidden>>> {
    let j = free.len() + 1;
    let finished_room: usize = finished.iter().map(|g| g.cap.min(g.vectors.len())).sum();
    let target = k.min(finished_room + j);
    let zero = vec![0; k];
    let mut new: Vec<(&[Symbol], Symbol)> = vec![(&zero, 1)];
    new.extend(repair.iter().map(Vec::as_slice).zip(lambdas.iter().copied()));
    debug_assert!(new.iter().all(|&(_, l)| l != 0));

    let mut shape: Vec<SelectionGroup> = finished.to_vec();
    shape.push(SelectionGroup {
        vectors: vec![zero.clone(); free.len() + new.len()],
        cap: j,
    });
    budget.check_subsets("capped selections", maximal_selection_count(&shape, target))?;

    let mut seen = std::collections::HashSet::new();
    let mut constraints = Vec::new();
    for c_new in 1..=j.min(new.len()).min(target) {
        for c_old in 0..=(j - c_new).min(free.len()).min(target - c_new) {
            let m = target - c_new - c_old;
            if m > finished_room {
                continue;
            }
            let prefixes = capped_selections(finished, m);
            for prefix in &prefixes {
                for olds in free.iter().combinations(c_old) {
                    for news in new.iter().combinations(c_new) {
                        let (w1, l1) = *news[0];
                        let mut base: Vec<Vec<Symbol>> = prefix.iter().map(|v| v.to_vec()).collect();
                        base.extend(olds.iter().map(|v| v.to_vec()));
                        for &&(w, l) in &news[1..] {
                            base.push(
                                w.iter()
                                    .zip(w1)
                                    .map(|(&a, &b)| field.sub(field.mul(l1, a), field.mul(l, b)))
                                    .collect(),
                            );
                        }
                        let mut data: Vec<Symbol> = base.concat();
                        let pivots = rref_in_place(field, &mut data, base.len(), k);
                        if pivots.len() < base.len() {
                            return Ok(None);
                        }
                        let rows: Vec<(usize, Vec<Symbol>)> = pivots
                            .iter()
                            .enumerate()
                            .map(|(i, &p)| (p, data[i * k..(i + 1) * k].to_vec()))
                            .collect();
                        let inv = field.inv(l1)?;
                        let mut offset: Vec<Symbol> = w1.iter().map(|&x| field.mul(x, inv)).collect();
                        Forbidden::reduce(field, &rows, &mut offset);
                        let forbidden = Forbidden { rows, offset };
                        if seen.insert(forbidden.clone()) {
                            constraints.push(forbidden);
                        }
                    }
                }
            }
        }
    }
    Ok(Some(constraints))
}

/// Greedy construction. Groups are built in plan order; the `j`-th free
/// column of a group is redrawn until every capped selection over the
/// finished groups and the partial group (its `j` free columns and the
/// repair columns built from them, capped at `j`) is independent.
pub fn greedy_lrc_with_plan(
    params: &LrcParams,
    plan: &GroupPlan,
    field: &FieldSpec,
    config: &ConstructionConfig,
) -> Result<Construction> {
    if params.k >= params.n {
        return Err(Error::InvalidParameters(format!(
            "greedy construction needs k < n, got k={} n={}",
            params.k, params.n
        )));
    }
    check_plan(params, plan)?;
    let k = params.k;
    // one M = (I_r | B) for every group; smaller groups use its top rows
    let block = repair_block(field, params.r, params.delta - 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut reason = String::from("no attempts made");

    'attempt: for attempt in 1..=config.max_retries {
        let mut finished: Vec<SelectionGroup> = Vec::new();
        let mut groups: Vec<Vec<Vec<Symbol>>> = Vec::new();
        for t in plan.free_ranks() {
            let mut free: Vec<Vec<Symbol>> = Vec::with_capacity(t);
            for j in 1..=t {
                let repair = with_repair_columns(field, &free, &block, k).split_off(free.len());
                let lambdas: Vec<Symbol> = block.row(j - 1).to_vec();
                let Some(constraints) =
                    column_constraints(field, &finished, &free, &repair, &lambdas, k, &config.budget)?
                else {
                    reason = "a selection is dependent for every choice of column".into();
                    continue 'attempt;
                };
                let accepted = (0..config.candidate_limit).find_map(|_| {
                    let candidate: Vec<Symbol> = (0..k).map(|_| field.random_symbol(&mut rng)).collect();
                    constraints
                        .iter()
                        .all(|c| c.admits(field, &candidate))
                        .then_some(candidate)
                });
                match accepted {
                    Some(g) => free.push(g),
                    None => {
                        reason = format!("no acceptable column after {} candidates", config.candidate_limit);
                        continue 'attempt;
                    }
                }
            }
            let group = with_repair_columns(field, &free, &block, k);
            finished.push(SelectionGroup {
                vectors: group.clone(),
                cap: t,
            });
            groups.push(group);
        }
        if let SelectionVerdict::Dependent(w) = independent_selection_property(field, &finished, k, &config.budget)? {
            return Err(Error::VerificationFailed(format!(
                "greedy columns fail the selection property at {w:?}"
            )));
        }
        let outcome = evaluate(field, params, plan, &groups, &config.budget, true)?;
        if outcome.success() {
            return Ok(finish("greedy", field, params, plan, outcome, attempt, config.seed));
        }
        reason = outcome.failure_reason();
    }
    Err(Error::RetriesExhausted {
        attempts: config.max_retries,
        reason,
    })
}

/// Selection groups formed by the columns of a construction, capped at the
/// free rank of each group.
pub fn selection_groups(construction: &Construction) -> Vec<SelectionGroup> {
    let g = construction.code.generator();
    let delta = construction.structure.delta;
    construction
        .structure
        .groups
        .iter()
        .map(|group| SelectionGroup {
            vectors: group.iter().map(|&j| g.column(j)).collect(),
            cap: group.len() + 1 - delta,
        })
        .collect()
}

/// One row of a Monte Carlo table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloRow {
    pub q: u32,
    pub trials: u32,
    pub successes: u32,
    pub rate: f64,
    /// Mean distance over trials whose generator reached rank `k`.
    pub mean_distance: Option<f64>,
    pub bound: i64,
    pub d_opt: i64,
}

pub const MONTE_CARLO_CSV_HEADER: &str = "q,trials,successes,rate,mean_distance,bound,d_opt";

/// Single-attempt random constructions, `trials` per field. Trial `i` draws
/// from stream `i` of a ChaCha generator keyed by `seed`, for every field,
/// so rows are computed with matched seeds and the table is independent of
/// how trials are spread over threads.
pub fn monte_carlo(
    params: &LrcParams,
    plan: &GroupPlan,
    fields: &[FieldSpec],
    trials: u32,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<MonteCarloRow>> {
    check_plan(params, plan)?;
    let z = compute_z(plan, params.k).z;
    let bound = distance_bound(plan.coded_length(), params.k, params.delta, z);
    fields
        .iter()
        .map(|field| {
            let row = |successes: u32, mean_distance: Option<f64>| MonteCarloRow {
                q: field.order(),
                trials,
                successes,
                rate: if trials == 0 {
                    0.0
                } else {
                    successes as f64 / trials as f64
                },
                mean_distance,
                bound,
                d_opt: params.d_opt(),
            };
            let blocks = match repair_blocks(field, plan) {
                Ok(b) => b,
                Err(Error::FieldTooSmall { .. }) => return Ok(row(0, None)),
                Err(e) => return Err(e),
            };
            let outcomes = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(trial as u64);
                    let groups = random_groups(field, params.k, plan, &blocks, &mut rng);
                    evaluate(field, params, plan, &groups, budget, false)
                })
                .collect::<Result<Vec<_>>>()?;
            let successes = outcomes.iter().filter(|o| o.success()).count() as u32;
            let distances: Vec<usize> = outcomes.iter().filter_map(|o| o.distance).collect();
            let mean = (!distances.is_empty()).then(|| distances.iter().sum::<usize>() as f64 / distances.len() as f64);
            Ok(row(successes, mean))
        })
        .collect()
}

pub fn write_monte_carlo_csv<W: Write>(rows: &[MonteCarloRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{MONTE_CARLO_CSV_HEADER}")?;
    for row in rows {
        let mean = row.mean_distance.map(|m| format!("{m:.4}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{:.4},{},{},{}",
            row.q, row.trials, row.successes, row.rate, mean, row.bound, row.d_opt
        )?;
    }
    Ok(())
}

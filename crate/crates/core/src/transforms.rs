//! Code-to-code procedures for `δ = 2`: enlarging a code by one coordinate
//! and one dimension with a bordered generator matrix, and puncturing a code
//! at a coordinate.

use std::ops::ControlFlow;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code_core::{
    hamming_distance, has_all_symbol_locality, minimum_distance, sphere_size, Budget, Encoder, LinearCode,
    LocalityStructure, LocalityVerdict,
};
use crate::error::{Error, Result};
use crate::finite_field::Symbol;
use crate::matrix::{binomial, Matrix};

/// Largest `q^n` searched by [`DeepHoleStrategy::Exhaustive`].
pub const EXHAUSTIVE_DEEP_HOLE_LIMIT: u128 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeepHoleStrategy {
    /// Every vector of `F_q^n` in lexicographic order (first coordinate most
    /// significant); returns the first hit.
    Exhaustive,
    /// Uniformly random vectors.
    Sampled { max_attempts: u64 },
}

impl DeepHoleStrategy {
    /// Sampled search with `64·d·C(n, ⌊n/2⌋)/q` attempts, clamped to
    /// `[100, 10^6]`.
    pub fn default_for(code: &LinearCode, d: usize) -> Self {
        let raw = 64 * d as u128 * binomial(code.n(), code.n() / 2) / code.field().order() as u128;
        DeepHoleStrategy::Sampled {
            max_attempts: raw.clamp(100, 1_000_000) as u64,
        }
    }
}

/// Distance from `x` to the nearest codeword of the span of `generator`,
/// stopping early once a codeword closer than `stop_below` turns up.
fn distance_to_span(generator: &Matrix, x: &[Symbol], stop_below: usize) -> usize {
    let encoder = Encoder::for_generator(generator);
    let mut best = usize::MAX;
    let _ = encoder.visit(&[], |c| {
        best = best.min(hamming_distance(x, c));
        if best < stop_below {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    best
}

/// Distance from `x` to the code: `min_{c ∈ C} d(x, c)`.
pub fn distance_to_code(code: &LinearCode, x: &[Symbol], budget: &Budget) -> Result<usize> {
    if x.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for n={}",
            x.len(),
            code.n()
        )));
    }
    budget.check_messages("codewords", (code.field().order() as u128).pow(code.k() as u32))?;
    Ok(distance_to_span(code.generator(), x, 0))
}

/// `|C| · V_q(n, d − 1) < q^n`: when this holds some vector lies at
/// distance at least `d` from every codeword.
pub fn deep_hole_guaranteed(q: u32, n: usize, k: usize, d: usize) -> bool {
    let q_big = BigUint::from(q);
    let lhs = q_big.pow(k as u32) * sphere_size(q as u64, n, d.saturating_sub(1));
    lhs < q_big.pow(n as u32)
}

/// A vector at distance at least `d` from every codeword of `code`.
pub fn find_deep_hole(
    code: &LinearCode,
    d: usize,
    strategy: DeepHoleStrategy,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<Symbol>> {
    find_deep_hole_for_generator(code.generator(), d, strategy, seed, budget)
}

/// [`find_deep_hole`] for the span of an arbitrary matrix; a `0 x n` matrix
/// stands for the zero code.
pub fn find_deep_hole_for_generator(
    generator: &Matrix,
    d: usize,
    strategy: DeepHoleStrategy,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<Symbol>> {
    let f = generator.field();
    let (k, n, q) = (generator.rows(), generator.cols(), f.order());
    budget.check_messages("codewords", (q as u128).pow(k as u32))?;
    let is_deep = |x: &[Symbol]| distance_to_span(generator, x, d) >= d;

    match strategy {
        DeepHoleStrategy::Exhaustive => {
            let space = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            if space > EXHAUSTIVE_DEEP_HOLE_LIMIT {
                return Err(Error::BudgetExceeded {
                    what: "deep-hole candidates",
                    needed: space,
                    budget: EXHAUSTIVE_DEEP_HOLE_LIMIT as u64,
                });
            }
            let mut x = vec![0 as Symbol; n];
            loop {
                if is_deep(&x) {
                    return Ok(x);
                }
                let mut i = n;
                loop {
                    if i == 0 {
                        return Err(Error::NotFound(format!("no vector at distance >= {d} from the code")));
                    }
                    i -= 1;
                    x[i] += 1;
                    if x[i] < q {
                        break;
                    }
                    x[i] = 0;
                }
            }
        }
        DeepHoleStrategy::Sampled { max_attempts } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..max_attempts {
                let x: Vec<Symbol> = (0..n).map(|_| f.random_symbol(&mut rng)).collect();
                if is_deep(&x) {
                    return Ok(x);
                }
            }
            Err(Error::NotFound(format!(
                "no vector at distance >= {d} in {max_attempts} samples"
            )))
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct EnlargeOptions {
    /// `None` selects [`DeepHoleStrategy::default_for`].
    pub strategy: Option<DeepHoleStrategy>,
    pub seed: u64,
    /// Known `(r, 2)` partition of the input, to skip the locality search.
    pub hint: Option<LocalityStructure>,
    pub budget: Budget,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnlargeReport {
    pub n: usize,
    pub k: usize,
    pub distance: usize,
    pub r: usize,
    pub deep_hole: Vec<Symbol>,
    pub seed: u64,
    #[serde(skip)]
    pub locality: LocalityVerdict,
}

/// Turns an `(n, k, d, r)` code with `δ = 2` into an
/// `(n + 1, k + 1, d, r + 1)` code with generator
///
/// ```text
/// ( G  0ᵀ )
/// ( x  1  )
/// ```
///
/// where `x` is at distance at least `d` from the code. The output's
/// distance and `(r + 1, 2)`-locality are verified before returning.
pub fn enlarge(code: &LinearCode, r: usize, options: &EnlargeOptions) -> Result<(LinearCode, EnlargeReport)> {
    if r == 0 || r >= code.k() {
        return Err(Error::InvalidParameters(format!(
            "enlarging needs 1 <= r < k, got r={r} k={}",
            code.k()
        )));
    }
    let budget = &options.budget;
    if !has_all_symbol_locality(code, r, 2, options.hint.as_ref(), budget)?.holds {
        return Err(Error::InvalidParameters(format!("input code lacks ({r}, 2)-locality")));
    }
    let d = minimum_distance(code, budget)?;
    let strategy = options
        .strategy
        .unwrap_or_else(|| DeepHoleStrategy::default_for(code, d));
    let x = find_deep_hole(code, d, strategy, options.seed, budget)?;

    let f = code.field();
    let (k, n) = (code.k(), code.n());
    let mut data = Vec::with_capacity((k + 1) * (n + 1));
    for i in 0..k {
        data.extend_from_slice(code.generator().row(i));
        data.push(0);
    }
    data.extend_from_slice(&x);
    data.push(1);
    let enlarged = LinearCode::new(Matrix::from_symbols(f, k + 1, n + 1, data)?)?;

    let d2 = minimum_distance(&enlarged, budget)?;
    if d2 != d {
        return Err(Error::VerificationFailed(format!(
            "enlarged code has distance {d2}, expected {d}"
        )));
    }
    let locality = has_all_symbol_locality(&enlarged, r + 1, 2, None, budget)?;
    if !locality.holds {
        return Err(Error::VerificationFailed(format!(
            "enlarged code lacks ({}, 2)-locality",
            r + 1
        )));
    }
    let report = EnlargeReport {
        n: n + 1,
        k: k + 1,
        distance: d2,
        r: r + 1,
        deep_hole: x,
        seed: options.seed,
        locality,
    };
    Ok((enlarged, report))
}

/// For `δ = 2` and `r ∈ [k/2, k)`, enlarging an optimal code gives an
/// optimal code.
pub fn enlarge_keeps_optimality(k: usize, r: usize) -> bool {
    r < k && 2 * r >= k
}

/// The subcode vanishing at `coordinate`, with that coordinate deleted.
///
/// One row with a nonzero entry in the column is used to clear the column
/// from every other row and is then dropped, so `k' ∈ {k − 1, k}`.
pub fn puncture(code: &LinearCode, coordinate: usize) -> Result<LinearCode> {
    let (k, n) = (code.k(), code.n());
    if n < 2 {
        return Err(Error::InvalidParameters("puncturing needs n >= 2".into()));
    }
    if coordinate >= n {
        return Err(Error::IndexOutOfRange {
            index: coordinate,
            bound: n,
        });
    }
    let f = code.field();
    let mut rows = code.generator().to_rows();
    if let Some(p) = rows.iter().position(|row| row[coordinate] != 0) {
        let pivot = rows.remove(p);
        let inv = f.inv(pivot[coordinate])?;
        for row in rows.iter_mut() {
            let factor = f.mul(row[coordinate], inv);
            if factor == 0 {
                continue;
            }
            for (v, &pv) in row.iter_mut().zip(&pivot) {
                *v = f.sub(*v, f.mul(factor, pv));
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::CodeCollapses);
    }
    let kept: Vec<usize> = (0..n).filter(|&j| j != coordinate).collect();
    let data: Vec<Symbol> = rows.iter().flat_map(|row| kept.iter().map(move |&j| row[j])).collect();
    debug_assert!(rows.len() >= k - 1);
    LinearCode::new(Matrix::from_symbols(f, rows.len(), n - 1, data)?)
}

/// For `δ = 2`, puncturing an optimal code keeps `d_opt` unchanged exactly
/// when `r` does not divide `k − 1`.
pub fn puncture_keeps_optimality(k: usize, r: usize) -> bool {
    !(k - 1).is_multiple_of(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_core::{d_opt, minimum_distance};
    use crate::finite_field::FieldSpec;

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
    fn deep_hole_examples() {
        // the whole space has no deep hole at distance 1
        let whole = LinearCode::new(Matrix::identity(&gf(2), 3)).unwrap();
        assert!(matches!(
            find_deep_hole(&whole, 1, DeepHoleStrategy::Exhaustive, 0, &budget()),
            Err(Error::NotFound(_))
        ));
        assert!(matches!(
            find_deep_hole(&whole, 1, DeepHoleStrategy::Sampled { max_attempts: 50 }, 0, &budget()),
            Err(Error::NotFound(_))
        ));

        let zero_code = Matrix::zeros(&gf(2), 0, 3);
        let x = find_deep_hole_for_generator(&zero_code, 3, DeepHoleStrategy::Exhaustive, 0, &budget()).unwrap();
        assert_eq!(x, vec![1, 1, 1]);

        let rep = code(3, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let x = find_deep_hole(&rep, 2, DeepHoleStrategy::Exhaustive, 0, &budget()).unwrap();
        assert_eq!(x, vec![0, 1, 0, 1]);
        assert!(distance_to_code(&rep, &x, &budget()).unwrap() >= 2);

        let sampled = find_deep_hole(&rep, 2, DeepHoleStrategy::default_for(&rep, 2), 9, &budget()).unwrap();
        assert!(distance_to_code(&rep, &sampled, &budget()).unwrap() >= 2);
    }

    #[test]
    fn exhaustive_search_limit() {
        let big = LinearCode::new(
            Matrix::identity(&gf(31), 5)
                .hconcat(&Matrix::zeros(&gf(31), 5, 1))
                .unwrap(),
        )
        .unwrap();
        assert!(matches!(
            find_deep_hole(&big, 2, DeepHoleStrategy::Exhaustive, 0, &budget()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn default_attempts_are_clamped() {
        let rep = code(3, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        // 64 * 2 * 6 / 3 = 256
        assert_eq!(
            DeepHoleStrategy::default_for(&rep, 2),
            DeepHoleStrategy::Sampled { max_attempts: 256 }
        );
        let tiny = code(31, &[&[1, 1]]);
        assert_eq!(
            DeepHoleStrategy::default_for(&tiny, 2),
            DeepHoleStrategy::Sampled { max_attempts: 100 }
        );
    }

    #[test]
    fn enlarge_replication_code() {
        let rep = code(3, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let options = EnlargeOptions {
            strategy: Some(DeepHoleStrategy::Exhaustive),
            ..Default::default()
        };
        let (big, report) = enlarge(&rep, 1, &options).unwrap();
        assert_eq!(
            big.generator(),
            &Matrix::from_rows(&gf(3), &[[1u64, 1, 0, 0, 0], [0, 0, 1, 1, 0], [0, 1, 0, 1, 1]]).unwrap()
        );
        assert_eq!((report.n, report.k, report.distance, report.r), (5, 3, 2, 2));
        assert_eq!(report.deep_hole, vec![0, 1, 0, 1]);
        assert!(report.locality.holds);

        // default sampled strategy
        let (big, report) = enlarge(
            &rep,
            1,
            &EnlargeOptions {
                seed: 5,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!((big.n(), big.k()), (5, 3));
        assert_eq!(minimum_distance(&big, &budget()).unwrap(), 2);
        assert_eq!(report.r, 2);
    }

    #[test]
    fn enlarge_preconditions() {
        let rep = code(3, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        assert!(matches!(
            enlarge(&rep, 2, &EnlargeOptions::default()),
            Err(Error::InvalidParameters(_))
        ));
        let id = LinearCode::new(Matrix::identity(&gf(3), 3)).unwrap();
        assert!(matches!(
            enlarge(&id, 1, &EnlargeOptions::default()),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn puncture_examples() {
        let rep = code(2, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let p = puncture(&rep, 0).unwrap();
        assert_eq!(p.generator(), &Matrix::from_rows(&gf(2), &[[0u64, 1, 1]]).unwrap());
        assert_eq!(minimum_distance(&p, &budget()).unwrap(), 2);

        let with_zero = code(5, &[&[0, 1, 2, 3], &[0, 1, 1, 1]]);
        let p = puncture(&with_zero, 0).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(
            minimum_distance(&p, &budget()).unwrap(),
            minimum_distance(&with_zero, &budget()).unwrap()
        );

        assert!(matches!(puncture(&code(2, &[&[1, 1]]), 0), Err(Error::CodeCollapses)));
        assert!(matches!(
            puncture(&code(2, &[&[1]]), 0),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(puncture(&rep, 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn puncture_is_the_vanishing_subcode() {
        // every codeword of the punctured code extends by 0 to a codeword
        let c = code(5, &[&[1, 2, 0, 3, 4], &[2, 0, 1, 1, 1], &[3, 3, 3, 0, 1]]);
        for coord in 0..5 {
            let p = puncture(&c, coord).unwrap();
            assert_eq!(p.k(), 2);
            for i in 0..p.k() {
                let mut word = p.generator().row(i).to_vec();
                word.insert(coord, 0);
                assert_eq!(distance_to_code(&c, &word, &budget()).unwrap(), 0);
            }
        }
    }

    #[test]
    fn optimality_predicates_match_bound_identities() {
        for k in 2..30 {
            for r in 1..k {
                for n in k + 1..40 {
                    let before = d_opt(n, k, r, 2).unwrap();
                    let after_enlarge = d_opt(n + 1, k + 1, r + 1, 2).unwrap();
                    // an optimal input has d = n - k exactly when r >= k/2
                    if before == (n - k) as i64 {
                        assert_eq!(
                            enlarge_keeps_optimality(k, r),
                            after_enlarge == before,
                            "n={n} k={k} r={r}"
                        );
                    }
                    let after_puncture = d_opt(n - 1, k - 1, r.min(k - 1).max(1), 2).unwrap();
                    if r < k {
                        assert_eq!(
                            puncture_keeps_optimality(k, r),
                            after_puncture == before,
                            "n={n} k={k} r={r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn counting_gate() {
        // C = repetition [3,1] over GF(2): 2 * V_2(3, 2) = 14 >= 8
        assert!(!deep_hole_guaranteed(2, 3, 1, 3));
        // zero-ish density: q=7, n=4, k=1, d=2: 7 * 25 = 175 < 2401
        assert!(deep_hole_guaranteed(7, 4, 1, 2));
    }
}

mod common;

use lrc_core::code_core::weight;
use lrc_core::{
    check_group_repairability, compute_z, d_opt, distance_bound, has_all_symbol_locality, minimum_distance,
    partition_lengths, puncture, random_lrc, Budget, ConstructionConfig, FieldSpec, GroupPlan, LinearCode, LrcParams,
    Matrix,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_code(q: u64, k: usize, n: usize, seed: u64) -> LinearCode {
    let f = FieldSpec::with_order(q).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Ok(code) = LinearCode::new(Matrix::random(&f, k, n, &mut rng)) {
            return code;
        }
    }
}

/// Distance of the code restricted to `group`, as the smallest nonzero
/// weight over all restricted codewords; `None` when the restriction is zero.
fn restricted_distance(code: &LinearCode, group: &[usize]) -> Option<usize> {
    common::codewords(code)
        .iter()
        .map(|c| group.iter().map(|&j| c[j]).collect::<Vec<_>>())
        .map(|w| weight(&w))
        .filter(|&w| w > 0)
        .min()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z_closed_form_full_groups(r in 1usize..6, delta in 2usize..5, groups in 1usize..6, k_off in 0usize..30) {
        let k = 1 + k_off % (groups * r);
        let plan = GroupPlan::new(vec![r + delta - 1; groups], r, delta, k, 0).unwrap();
        prop_assert_eq!(compute_z(&plan, k).z, (k - 1) / r);
    }

    #[test]
    fn z_closed_form_with_remainder(r in 2usize..6, delta in 2usize..5, a in 1usize..5, b_off in 0usize..6, k_off in 0usize..30) {
        let b = delta + b_off % (r - 1);
        let t1 = b - delta + 1;
        let k = t1 + 1 + k_off % (a * r);
        let mut sizes = vec![r + delta - 1; a];
        sizes.push(b);
        let plan = GroupPlan::new(sizes, r, delta, k, 0).unwrap();
        prop_assert_eq!(compute_z(&plan, k).z, (k + delta - 1 - b).div_ceil(r));
    }

    #[test]
    fn partition_covers_length(n in 2usize..60, k_off in 0usize..60, r in 1usize..6, delta in 2usize..5) {
        let k = 1 + k_off % n;
        let r = r.min(k);
        let full = r + delta - 1;
        let (a, b) = (n / full, n % full);
        let feasible = n >= n.div_ceil(full) * (delta - 1) + k && !(b > 0 && b < delta && (a == 0 || a * r < k));
        match partition_lengths(n, k, r, delta) {
            Ok(plan) => {
                prop_assert!(feasible);
                prop_assert_eq!(plan.length(), n);
                prop_assert_eq!(plan.zero_columns(), if b < delta { b } else { 0 });
                prop_assert!(plan.sizes().iter().all(|&s| s >= delta && s <= full));
                prop_assert!(plan.free_ranks().iter().sum::<usize>() >= k);
            }
            Err(_) => prop_assert!(!feasible),
        }
    }

    #[test]
    fn distance_matches_all_pairs(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), k in 1usize..4, extra in 0usize..4, seed in any::<u64>()) {
        let code = random_code(q, k, k + extra, seed);
        prop_assert_eq!(minimum_distance(&code, &Budget::default()).unwrap(), common::all_pairs_distance(&code));
    }

    #[test]
    fn group_repairability_matches_restricted_distance(
        q in prop::sample::select(vec![2u64, 3, 4, 5, 7]),
        k in 1usize..4,
        n in 2usize..7,
        delta in 2usize..4,
        seed in any::<u64>(),
        mask in 1u32..64,
    ) {
        let n = n.max(k);
        let code = random_code(q, k, n, seed);
        let group: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        prop_assume!(!group.is_empty());
        let expected = match restricted_distance(&code, &group) {
            None => true,
            Some(d) => d >= delta,
        };
        prop_assert_eq!(check_group_repairability(&code, &group, delta).unwrap(), expected);
    }

    #[test]
    fn puncture_is_a_shortened_subcode(q in prop::sample::select(vec![2u64, 3, 4, 5]), k in 2usize..4, extra in 1usize..4, seed in any::<u64>(), coord in 0usize..7) {
        let code = random_code(q, k, k + extra, seed);
        let coord = coord % code.n();
        let p = puncture(&code, coord).unwrap();
        prop_assert_eq!(p.n(), code.n() - 1);
        prop_assert!(p.k() + 1 >= code.k());
        let budget = Budget::default();
        prop_assert!(minimum_distance(&p, &budget).unwrap() >= minimum_distance(&code, &budget).unwrap());
        let shortened: std::collections::HashSet<Vec<u32>> = common::codewords(&code)
            .into_iter()
            .filter(|c| c[coord] == 0)
            .map(|mut c| { c.remove(coord); c })
            .collect();
        let punctured: std::collections::HashSet<Vec<u32>> = common::codewords(&p).into_iter().collect();
        prop_assert_eq!(punctured, shortened);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_constructions_keep_their_guarantees(
        q in prop::sample::select(vec![11u64, 13, 16, 17]),
        shape in prop::sample::select(vec![(8usize, 4usize, 3usize, 2usize), (9, 4, 2, 2), (10, 4, 3, 3), (7, 3, 2, 2), (9, 5, 3, 2)]),
        seed in any::<u64>(),
    ) {
        let (n, k, r, delta) = shape;
        let params = LrcParams::new(n, k, r, delta).unwrap();
        let plan = partition_lengths(n, k, r, delta).unwrap();
        let f = FieldSpec::with_order(q).unwrap();
        let config = ConstructionConfig { seed, max_retries: 40, ..Default::default() };
        // success is probabilistic at these field sizes; guarantees bind accepted codes
        let c = match random_lrc(&params, &plan, &f, &config) {
            Ok(c) => c,
            Err(lrc_core::Error::RetriesExhausted { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let budget = Budget::default();
        prop_assert_eq!(c.code.k(), k);
        prop_assert!(has_all_symbol_locality(&c.code, r, delta, Some(&c.structure), &budget).unwrap().holds);
        let d = minimum_distance(&c.code, &budget).unwrap();
        let z = compute_z(&plan, k).z;
        prop_assert!(d as i64 >= distance_bound(plan.coded_length(), k, delta, z));
        // every group of the returned structure has a restricted distance of at least delta
        for g in &c.structure.groups {
            prop_assert!(restricted_distance(&c.code, g).unwrap() >= delta);
        }
        if plan.zero_columns() == 0 && plan.free_ranks().iter().all(|&t| t == r) {
            prop_assert_eq!(d as i64, d_opt(n, k, r, delta).unwrap());
        }
    }
}

#[test]
fn zero_column_plan_constructs() {
    let params = LrcParams::new(9, 5, 3, 2).unwrap();
    let plan = partition_lengths(9, 5, 3, 2).unwrap();
    let f = FieldSpec::with_order(31).unwrap();
    let c = random_lrc(
        &params,
        &plan,
        &f,
        &ConstructionConfig {
            seed: 5,
            max_retries: 40,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(c.structure.zero_columns, vec![8]);
    assert!(c.code.generator().is_zero_column(8));
    let budget = Budget::default();
    assert!(
        has_all_symbol_locality(&c.code, 3, 2, Some(&c.structure), &budget)
            .unwrap()
            .holds
    );
    assert!(has_all_symbol_locality(&c.code, 3, 2, None, &budget).unwrap().holds);
    // bound over the 8 coded positions, z = 1
    assert!(c.report.achieved_distance as i64 >= distance_bound(8, 5, 2, 1));
}

use proptest::prelude::*;
use ttp2_core::matching::min_weight_perfect_matching;
use ttp2_core::ordering::{extract_coefficients, local_search, random_ordering, TeamOrdering};
use ttp2_core::schedule::{distance_report, team_distance};
use ttp2_core::{build_template, lower_bound, parse_instance, validate_schedule, write_instance, Instance, Packing};

/// Manhattan distances between integer points: an exact metric.
fn manhattan(points: &[(i64, i64)]) -> Instance {
    let rows: Vec<Vec<i64>> = points
        .iter()
        .map(|a| points.iter().map(|b| (a.0 - b.0).abs() + (a.1 - b.1).abs()).collect())
        .collect();
    Instance::from_rows(&rows).unwrap()
}

fn metric_instance(sizes: &'static [usize]) -> impl Strategy<Value = Instance> {
    prop::sample::select(sizes)
        .prop_flat_map(|n| prop::collection::vec((0i64..500, 0i64..500), n))
        .prop_map(|pts| manhattan(&pts))
}

fn permuted(inst: &Instance, perm: &[usize]) -> Instance {
    let n = inst.n();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[perm[i] * n + perm[j]] = inst.d(i, j);
        }
    }
    Instance::from_matrix(n, d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn write_then_parse_is_identity(inst in metric_instance(&[4, 6, 12, 20]), frac in any::<bool>()) {
        let inst = if frac {
            let n = inst.n();
            let d: Vec<f64> = (0..n * n).map(|k| inst.d(k / n, k % n) / 8.0).collect();
            Instance::from_matrix(n, d).unwrap()
        } else {
            inst
        };
        prop_assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn metric_check_is_pure(inst in metric_instance(&[6, 10])) {
        let rep = inst.check_metric();
        prop_assert_eq!(rep.triangle_violations, 0);
        prop_assert_eq!(rep, inst.check_metric());
    }

    #[test]
    fn matching_beats_any_pairing(inst in metric_instance(&[8, 12, 16]), seed in any::<u64>()) {
        let m = min_weight_perfect_matching(&inst);
        let mut teams: Vec<usize> = (0..inst.n()).collect();
        let o = random_ordering(inst.n(), seed);
        teams.sort_by_key(|&t| o.sigma[t]);
        let other: f64 = teams.chunks(2).map(|c| inst.d(c[0], c[1])).sum();
        prop_assert!(m.weight <= other);
        prop_assert_eq!(m.d_h, m.d_g - m.weight);
        let lb = lower_bound(&inst);
        prop_assert_eq!(lb.total, lb.per_team.iter().sum::<f64>());
        prop_assert_eq!(lb.total, 2.0 * m.d_g + inst.n() as f64 * m.weight);
    }

    #[test]
    fn constructed_schedules_respect_travel_bounds(
        inst in metric_instance(&[8, 10, 12, 14, 16, 20, 22]),
        seed in any::<u64>(),
    ) {
        let n = inst.n();
        let m = min_weight_perfect_matching(&inst);
        let (t, _) = build_template(n, Packing::Auto).unwrap();
        let s = random_ordering(n / 2, seed).apply(&t, &m);
        prop_assert!(validate_schedule(&s, 2).feasible);
        let lb = lower_bound(&inst);
        let rep = distance_report(&s, &inst, lb.total);
        for i in 0..n {
            prop_assert!(rep.per_team[i] <= 2.0 * inst.row_sum(i));
            prop_assert!(rep.per_team[i] >= lb.per_team[i]);
        }
        prop_assert!(rep.total <= 2.0 * lb.total);
        prop_assert!(rep.total >= lb.total);
    }

    #[test]
    fn validator_and_distance_survive_relabeling(
        inst in metric_instance(&[8, 10, 12]),
        seed in any::<u64>(),
        shift in 1usize..7,
    ) {
        let n = inst.n();
        let m = min_weight_perfect_matching(&inst);
        let (t, _) = build_template(n, Packing::Auto).unwrap();
        let s = random_ordering(n / 2, seed).apply(&t, &m);
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let moved = s.relabel(&perm);
        let moved_inst = permuted(&inst, &perm);
        prop_assert_eq!(validate_schedule(&moved, 2).feasible, validate_schedule(&s, 2).feasible);
        for i in 0..n {
            prop_assert_eq!(team_distance(&s, &inst, i), team_distance(&moved, &moved_inst, perm[i]));
        }
        prop_assert_eq!(lower_bound(&inst).total, lower_bound(&moved_inst).total);
    }

    #[test]
    fn local_search_never_increases(inst in metric_instance(&[8, 10, 12, 16]), seed in any::<u64>()) {
        let n = inst.n();
        let m = min_weight_perfect_matching(&inst);
        let (t, _) = build_template(n, Packing::Auto).unwrap();
        let c = extract_coefficients(&t.schedule);
        let start = random_ordering(n / 2, seed);
        let end = local_search(&start, &c, &inst, &m);
        prop_assert!(c.cost(&inst, &end.binding(&m)) <= c.cost(&inst, &start.binding(&m)));
        let mut sigma = end.sigma.clone();
        sigma.sort_unstable();
        prop_assert_eq!(sigma, TeamOrdering::identity(n / 2).sigma);
    }
}

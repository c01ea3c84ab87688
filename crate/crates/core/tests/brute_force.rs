use ttp2_core::oracle::{brute_force_optimal, random_metric_instance, tight_instance};
use ttp2_core::{lower_bound, total_distance, validate_schedule, Instance};

type Rows = [[(usize, bool); 6]; 4];

/// Independent enumeration for four teams: every sequence of six day-rounds,
/// each a perfect matching with orientations, filtered by the constraints.
fn feasible_four() -> Vec<Rows> {
    let rounds = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    // Each day option: (round, orientation bits).
    let options: Vec<(usize, u8)> = (0..3).flat_map(|r| (0..4u8).map(move |b| (r, b))).collect();
    let mut found = Vec::new();
    let mut days = [0usize; 6];
    loop {
        // Decode the day choices into per-team (opponent, away) sequences.
        let mut rows = [[(0usize, false); 6]; 4];
        for (d, &o) in days.iter().enumerate() {
            let (r, bits) = options[o];
            for (g, &(a, b)) in rounds[r].iter().enumerate() {
                let a_away = bits >> g & 1 == 1;
                rows[a][d] = (b, a_away);
                rows[b][d] = (a, !a_away);
            }
        }
        let ok = rows.iter().enumerate().all(|(t, row)| {
            let mut games: Vec<(usize, bool)> = row.to_vec();
            games.sort_unstable();
            games.dedup();
            let all_once = games.len() == 6 && games.iter().all(|&(o, _)| o != t);
            let no_repeat = row.windows(2).all(|w| w[0].0 != w[1].0);
            let runs = row.windows(3).all(|w| !(w[0].1 == w[1].1 && w[1].1 == w[2].1));
            all_once && no_repeat && runs
        });
        if ok {
            found.push(rows);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == 6 {
                return found;
            }
            days[i] += 1;
            if days[i] < options.len() {
                break;
            }
            days[i] = 0;
            i += 1;
        }
    }
}

fn best_of(all: &[Rows], inst: &Instance) -> f64 {
    all.iter()
        .map(|rows| {
            let mut total = 0.0;
            for (t, row) in rows.iter().enumerate() {
                let mut at = t;
                for &(o, away) in row {
                    let v = if away { o } else { t };
                    total += inst.d(at, v);
                    at = v;
                }
                total += inst.d(at, t);
            }
            total
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn four_teams_match_independent_enumeration() {
    let all = feasible_four();
    assert!(!all.is_empty());
    for seed in 0..5 {
        let inst = random_metric_instance(4, seed).unwrap();
        let (s, total) = brute_force_optimal(&inst).unwrap();
        assert!(validate_schedule(&s, 2).feasible);
        assert_eq!(total_distance(&s, &inst).total, total);
        assert_eq!(total, best_of(&all, &inst), "seed {seed}");
    }
    let tight = tight_instance(4).unwrap();
    assert_eq!(brute_force_optimal(&tight).unwrap().1, best_of(&all, &tight));
}

#[test]
fn six_teams_within_travel_bounds() {
    for seed in 0..3 {
        let inst = random_metric_instance(6, seed).unwrap();
        let (s, total) = brute_force_optimal(&inst).unwrap();
        assert!(validate_schedule(&s, 2).feasible);
        let lb = lower_bound(&inst).total;
        assert!(lb <= total && total <= 2.0 * lb, "{lb} {total}");
    }
    let zero = Instance::from_rows(&vec![vec![0; 6]; 6]).unwrap();
    assert_eq!(brute_force_optimal(&zero).unwrap().1, 0.0);
}

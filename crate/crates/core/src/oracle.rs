//! Reference instances and exhaustive solvers for small cases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::schedule::Schedule;

/// Distance 0 inside pairs `(2i, 2i+1)` and 1 everywhere else.
pub fn tight_instance(n: usize) -> Result<Instance> {
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i / 2 != j / 2 {
                d[i * n + j] = 1.0;
            }
        }
    }
    Instance::from_matrix(n, d)
}

/// Rounded Euclidean distances between seeded uniform points in a
/// 1000 x 1000 square.
pub fn random_metric_instance(n: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0)))
        .collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            d[i * n + j] = (dx * dx + dy * dy).sqrt().round();
        }
    }
    Instance::from_matrix(n, d)
}

/// Minimum perfect-matching weight by exhaustive enumeration; exponential,
/// intended for cross-checking on small `n`.
pub fn brute_force_matching_weight(inst: &Instance) -> f64 {
    fn go(inst: &Instance, free: &mut Vec<usize>) -> f64 {
        if free.is_empty() {
            return 0.0;
        }
        let a = free.remove(0);
        let mut best = f64::INFINITY;
        for idx in 0..free.len() {
            let b = free.remove(idx);
            best = best.min(inst.d(a, b) + go(inst, free));
            free.insert(idx, b);
        }
        free.insert(0, a);
        best
    }
    go(inst, &mut (0..inst.n()).collect())
}

const MAX_RUN: usize = 2;

/// Per-team admissible bound on the travel still needed, given the current
/// venue, the opponents not yet visited and the length of the current trip.
struct RemainingBound {
    n: usize,
    /// Indexed by `[team][venue][visited-mask][run]`.
    table: Vec<f64>,
}

impl RemainingBound {
    fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let masks = 1usize << n;
        let mut table = vec![f64::INFINITY; n * n * masks * (MAX_RUN + 1)];
        let idx = |t: usize, v: usize, mask: usize, run: usize| ((t * n + v) * masks + mask) * (MAX_RUN + 1) + run;
        for t in 0..n {
            let all = (masks - 1) & !(1 << t);
            // Process masks by decreasing number of remaining venues to visit.
            let mut order: Vec<usize> = (0..masks).filter(|m| m & (1 << t) == 0).collect();
            order.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
            for &mask in &order {
                let remaining = all & !mask;
                let home = if remaining == 0 {
                    0.0
                } else {
                    (0..n)
                        .filter(|&r| remaining & (1 << r) != 0)
                        .map(|r| inst.d(t, r) + table[idx(t, r, mask | (1 << r), 1)])
                        .fold(f64::INFINITY, f64::min)
                };
                table[idx(t, t, mask, 0)] = home;
                for run in 1..=MAX_RUN {
                    for v in (0..n).filter(|&v| v != t && mask & (1 << v) != 0) {
                        let mut best = inst.d(v, t) + home;
                        if run < MAX_RUN {
                            for r in (0..n).filter(|&r| remaining & (1 << r) != 0) {
                                best = best.min(inst.d(v, r) + table[idx(t, r, mask | (1 << r), run + 1)]);
                            }
                        }
                        table[idx(t, v, mask, run)] = best;
                    }
                }
            }
        }
        Self { n, table }
    }

    fn get(&self, team: usize, venue: usize, visited: usize, run: usize) -> f64 {
        let n = self.n;
        let masks = 1usize << n;
        self.table[((team * n + venue) * masks + visited) * (MAX_RUN + 1) + run]
    }
}

#[derive(Clone)]
struct TeamState {
    venue: usize,
    /// Opponents already visited away, as a bit mask.
    visited: usize,
    /// Opponents already hosted, as a bit mask.
    hosted: usize,
    last_opponent: Option<usize>,
    /// Length and side (`true` = away) of the current run.
    run: usize,
    away_run: bool,
}

struct Search<'a> {
    inst: &'a Instance,
    n: usize,
    days: usize,
    bound: RemainingBound,
    teams: Vec<TeamState>,
    table: Vec<Vec<i32>>,
    cost: f64,
    best_cost: f64,
    best: Option<Vec<Vec<i32>>>,
}

impl<'a> Search<'a> {
    fn remaining_bound(&self) -> f64 {
        (0..self.n)
            .map(|t| {
                let s = &self.teams[t];
                let run = if s.venue == t { 0 } else { s.run };
                self.bound.get(t, s.venue, s.visited, run)
            })
            .sum()
    }

    fn can_play(&self, team: usize, opp: usize, away: bool) -> bool {
        let s = &self.teams[team];
        if s.last_opponent == Some(opp) {
            return false;
        }
        let done = if away { s.visited } else { s.hosted };
        if done & (1 << opp) != 0 {
            return false;
        }
        !(s.away_run == away && s.run >= MAX_RUN)
    }

    fn apply(&mut self, day: usize, team: usize, opp: usize, away: bool) -> (TeamState, f64) {
        let saved = self.teams[team].clone();
        let s = &mut self.teams[team];
        let venue = if away { opp } else { team };
        let step = self.inst.d(s.venue, venue);
        s.venue = venue;
        if away {
            s.visited |= 1 << opp;
        } else {
            s.hosted |= 1 << opp;
        }
        s.last_opponent = Some(opp);
        if s.away_run == away && s.run > 0 {
            s.run += 1;
        } else {
            s.away_run = away;
            s.run = 1;
        }
        self.table[team][day] = if away { opp as i32 + 1 } else { -(opp as i32 + 1) };
        self.cost += step;
        (saved, step)
    }

    fn undo(&mut self, team: usize, saved: TeamState, step: f64) {
        self.teams[team] = saved;
        self.cost -= step;
    }

    fn search(&mut self, day: usize, busy: usize) {
        if day == self.days {
            let closing: f64 = (0..self.n).map(|t| self.inst.d(self.teams[t].venue, t)).sum();
            if self.cost + closing < self.best_cost {
                self.best_cost = self.cost + closing;
                self.best = Some(self.table.clone());
            }
            return;
        }
        if self.cost + self.remaining_bound() >= self.best_cost {
            return;
        }
        let Some(team) = (0..self.n).find(|&t| busy & (1 << t) == 0) else {
            self.search(day + 1, 0);
            return;
        };
        for opp in team + 1..self.n {
            if busy & (1 << opp) != 0 {
                continue;
            }
            for away in [true, false] {
                if !self.can_play(team, opp, away) || !self.can_play(opp, team, !away) {
                    continue;
                }
                let (sa, ca) = self.apply(day, team, opp, away);
                let (sb, cb) = self.apply(day, opp, team, !away);
                self.search(day, busy | (1 << team) | (1 << opp));
                self.undo(opp, sb, cb);
                self.undo(team, sa, ca);
            }
        }
    }
}

/// Exact optimum by branch and bound over day-by-day game assignments.
/// Limited to `n <= 6`.
pub fn brute_force_optimal(inst: &Instance) -> Result<(Schedule, f64)> {
    let n = inst.n();
    if n > 6 {
        return Err(Error::Domain(format!(
            "exhaustive search is limited to at most 6 teams, got {n}"
        )));
    }
    let days = 2 * n - 2;
    let mut search = Search {
        inst,
        n,
        days,
        bound: RemainingBound::new(inst),
        teams: (0..n)
            .map(|t| TeamState {
                venue: t,
                visited: 0,
                hosted: 0,
                last_opponent: None,
                run: 0,
                away_run: false,
            })
            .collect(),
        table: vec![vec![0; days]; n],
        cost: 0.0,
        best_cost: f64::INFINITY,
        best: None,
    };
    search.search(0, 0);
    let table = search.best.ok_or_else(|| Error::Domain("no feasible schedule".into()))?;
    Ok((Schedule::from_table(table)?, search.best_cost))
}

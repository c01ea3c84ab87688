//! Binding template labels to real teams: random orderings, derandomization
//! by conditional expectations, and swap-based local search.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::instance::Instance;
use crate::matching::{independent_lower_bound, Matching};
use crate::schedule::{distance_report, venue_sequence, DistanceReport, Schedule};
use crate::template::Template;

/// `sigma[i]` is the matching pair placed in super-team slot `i`; `pi[i]`
/// set means the pair's larger team takes the slot's first label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TeamOrdering {
    pub sigma: Vec<usize>,
    pub pi: Vec<bool>,
}

impl TeamOrdering {
    pub fn identity(m: usize) -> Self {
        Self {
            sigma: (0..m).collect(),
            pi: vec![false; m],
        }
    }

    /// `bind[label]` is the real team playing as `label`.
    pub fn binding(&self, matching: &Matching) -> Vec<usize> {
        let mut bind = vec![0; 2 * self.sigma.len()];
        for (slot, (&e, &flip)) in self.sigma.iter().zip(&self.pi).enumerate() {
            let (a, b) = matching.pairs[e];
            let (first, second) = if flip { (b, a) } else { (a, b) };
            bind[2 * slot] = first;
            bind[2 * slot + 1] = second;
        }
        bind
    }

    pub fn apply(&self, template: &Template, matching: &Matching) -> Schedule {
        template.schedule.relabel(&self.binding(matching))
    }
}

pub fn random_ordering(m: usize, seed: u64) -> TeamOrdering {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sigma: Vec<usize> = (0..m).collect();
    sigma.shuffle(&mut rng);
    let pi = (0..m).map(|_| rng.gen()).collect();
    TeamOrdering { sigma, pi }
}

/// Symmetric counts of direct travels between label venues over all
/// itineraries of a template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TravelCoefficients {
    n: usize,
    c: Vec<u32>,
}

impl TravelCoefficients {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.c[a * self.n + b]
    }

    /// Total distance of the template under `bind`.
    pub fn cost(&self, inst: &Instance, bind: &[usize]) -> f64 {
        let n = self.n;
        let mut total = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                let c = self.get(a, b);
                if c != 0 {
                    total += c as f64 * inst.d(bind[a], bind[b]);
                }
            }
        }
        total
    }

    /// Change in cost when labels in `changed` move from `old` to `new`.
    fn delta(&self, inst: &Instance, old: &[usize], new: &[usize], changed: &[usize]) -> f64 {
        let mut diff = 0.0;
        for (idx, &a) in changed.iter().enumerate() {
            for b in 0..self.n {
                let c = self.get(a, b);
                // Pairs inside `changed` are counted once, from their first member.
                if c == 0 || b == a || changed[..idx].contains(&b) {
                    continue;
                }
                diff += c as f64 * (inst.d(new[a], new[b]) - inst.d(old[a], old[b]));
            }
        }
        diff
    }
}

pub fn extract_coefficients(template: &Schedule) -> TravelCoefficients {
    let n = template.n();
    let mut c = vec![0u32; n * n];
    for t in 0..n {
        for w in venue_sequence(template, t).windows(2) {
            if w[0] != w[1] {
                c[w[0] * n + w[1]] += 1;
                c[w[1] * n + w[0]] += 1;
            }
        }
    }
    TravelCoefficients { n, c }
}

/// Arithmetic used for conditional expectations: exact rationals for
/// integral instances, floating point otherwise.
pub trait Expectation:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    fn from_count(v: i64) -> Self;
    fn from_distance(v: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Expectation for f64 {
    fn from_count(v: i64) -> Self {
        v as f64
    }
    fn from_distance(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Expectation for Ratio<i128> {
    fn from_count(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn from_distance(v: f64) -> Self {
        debug_assert_eq!(v.fract(), 0.0, "rational expectations need integral distances");
        Ratio::from_integer(v as i128)
    }
    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

struct ExpectationModel<T> {
    m: usize,
    /// Coefficient mass between label pairs of two different slots.
    cross: Vec<i64>,
    /// Coefficient between the two labels of one slot.
    inner: Vec<i64>,
    /// Sum of the four distances between two matching pairs.
    pair_sum: Vec<T>,
    pair_weight: Vec<T>,
}

impl<T: Expectation> ExpectationModel<T> {
    fn new(coeffs: &TravelCoefficients, inst: &Instance, matching: &Matching) -> Self {
        let m = matching.pairs.len();
        let mut cross = vec![0i64; m * m];
        for a in 0..2 * m {
            for b in 0..2 * m {
                if a / 2 != b / 2 {
                    cross[(a / 2) * m + b / 2] += coeffs.get(a, b) as i64;
                }
            }
        }
        let inner = (0..m).map(|i| coeffs.get(2 * i, 2 * i + 1) as i64).collect();
        let mut pair_sum = vec![T::from_count(0); m * m];
        for (e, &(a, b)) in matching.pairs.iter().enumerate() {
            for (f, &(c, d)) in matching.pairs.iter().enumerate() {
                let s = inst.d(a, c) + inst.d(a, d) + inst.d(b, c) + inst.d(b, d);
                pair_sum[e * m + f] = T::from_distance(s);
            }
        }
        let pair_weight = matching
            .pairs
            .iter()
            .map(|&(a, b)| T::from_distance(inst.d(a, b)))
            .collect();
        Self {
            m,
            cross,
            inner,
            pair_sum,
            pair_weight,
        }
    }

    /// Expected cost when slots `0..fixed.len()` hold the given pairs and the
    /// rest are filled uniformly at random (orientations uniform throughout).
    fn expect_sigma(&self, fixed: &[usize]) -> T {
        let m = self.m;
        let zero = T::from_count(0);
        let mut used = vec![false; m];
        for &e in fixed {
            used[e] = true;
        }
        let free: Vec<usize> = (0..m).filter(|&e| !used[e]).collect();
        let k = free.len() as i64;

        let mut free_weight = zero;
        for &f in &free {
            free_weight = free_weight + self.pair_weight[f];
        }
        // Sum of pair sums from each pair to the free ones, and among free ones.
        let to_free: Vec<T> = (0..m)
            .map(|e| free.iter().fold(zero, |acc, &f| if f == e { acc } else { acc + self.pair_sum[e * m + f] }))
            .collect();
        let among_free = free.iter().fold(zero, |acc, &f| acc + to_free[f]);

        let mut total = zero;
        let four = T::from_count(4);
        for i in 0..m {
            let w = if i < fixed.len() {
                self.pair_weight[fixed[i]]
            } else {
                free_weight / T::from_count(k)
            };
            total = total + T::from_count(self.inner[i]) * w;
            for j in i + 1..m {
                let c = self.cross[i * m + j];
                if c == 0 {
                    continue;
                }
                let s = match (i < fixed.len(), j < fixed.len()) {
                    (true, true) => self.pair_sum[fixed[i] * m + fixed[j]],
                    (true, false) => to_free[fixed[i]] / T::from_count(k),
                    (false, true) => to_free[fixed[j]] / T::from_count(k),
                    (false, false) => among_free / T::from_count(k * (k - 1)),
                };
                total = total + T::from_count(c) * s / four;
            }
        }
        total
    }

    /// Expected cost with every pair placed and orientations of slots
    /// `0..bits.len()` fixed.
    fn expect_pi(&self, coeffs: &TravelCoefficients, inst: &Instance, matching: &Matching, sigma: &[usize], bits: &[bool]) -> T {
        let m = self.m;
        let zero = T::from_count(0);
        let two = T::from_count(2);
        let four = T::from_count(4);
        let team = |label: usize| {
            let slot = label / 2;
            let (a, b) = matching.pairs[sigma[slot]];
            if (label % 2 == 1) ^ bits[slot] {
                b
            } else {
                a
            }
        };
        let mut total = zero;
        for i in 0..m {
            total = total + T::from_count(self.inner[i]) * self.pair_weight[sigma[i]];
        }
        for a in 0..2 * m {
            for b in a + 1..2 * m {
                let (i, j) = (a / 2, b / 2);
                if i == j {
                    continue;
                }
                let c = coeffs.get(a, b);
                if c == 0 {
                    continue;
                }
                let e = match (i < bits.len(), j < bits.len()) {
                    (true, true) => T::from_distance(inst.d(team(a), team(b))),
                    (true, false) | (false, true) => {
                        let (known, other) = if i < bits.len() { (a, j) } else { (b, i) };
                        let (x, y) = matching.pairs[sigma[other]];
                        let t = team(known);
                        T::from_distance(inst.d(t, x) + inst.d(t, y)) / two
                    }
                    (false, false) => self.pair_sum[sigma[i] * m + sigma[j]] / four,
                };
                total = total + T::from_count(c as i64) * e;
            }
        }
        total
    }
}

/// Greedy conditional-expectation choice of every slot's pair and then every
/// orientation. Returns the ordering and the expectation after each of the
/// `2m` fixing steps, preceded by the unconditioned expectation.
pub fn derandomize_with<T: Expectation>(
    coeffs: &TravelCoefficients,
    inst: &Instance,
    matching: &Matching,
) -> (TeamOrdering, Vec<T>) {
    let model = ExpectationModel::<T>::new(coeffs, inst, matching);
    let m = model.m;
    let mut trace = vec![model.expect_sigma(&[])];
    let mut sigma: Vec<usize> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<(T, usize)> = None;
        for e in 0..m {
            if sigma.contains(&e) {
                continue;
            }
            sigma.push(e);
            let value = model.expect_sigma(&sigma);
            sigma.pop();
            if best.map_or(true, |(v, _)| value < v) {
                best = Some((value, e));
            }
        }
        let (value, e) = best.expect("an unused pair remains");
        sigma.push(e);
        trace.push(value);
    }
    let mut pi: Vec<bool> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<(T, bool)> = None;
        for bit in [false, true] {
            pi.push(bit);
            let value = model.expect_pi(coeffs, inst, matching, &sigma, &pi);
            pi.pop();
            if best.map_or(true, |(v, _)| value < v) {
                best = Some((value, bit));
            }
        }
        let (value, bit) = best.unwrap();
        pi.push(bit);
        trace.push(value);
    }
    (TeamOrdering { sigma, pi }, trace)
}

/// Derandomized ordering, using exact rationals on integral instances.
pub fn derandomize(coeffs: &TravelCoefficients, inst: &Instance, matching: &Matching) -> TeamOrdering {
    if inst.is_integral() {
        derandomize_with::<Ratio<i128>>(coeffs, inst, matching).0
    } else {
        derandomize_with::<f64>(coeffs, inst, matching).0
    }
}

fn improves(inst: &Instance, delta: f64) -> bool {
    if inst.is_integral() {
        delta < 0.0
    } else {
        delta < -1e-9
    }
}

#[cfg(debug_assertions)]
fn check_delta(coeffs: &TravelCoefficients, inst: &Instance, old: &[usize], new: &[usize], delta: f64) {
    let full = coeffs.cost(inst, new) - coeffs.cost(inst, old);
    assert!(
        (full - delta).abs() <= 1e-6 * full.abs().max(1.0),
        "incremental delta {delta} disagrees with recomputation {full}"
    );
}

#[cfg(not(debug_assertions))]
fn check_delta(_: &TravelCoefficients, _: &Instance, _: &[usize], _: &[usize], _: f64) {}

/// Tries every slot pair in lexicographic order, keeping any strict
/// improvement at once; repeats until a full sweep changes nothing.
pub fn swap_super_teams_pass(
    ordering: &TeamOrdering,
    coeffs: &TravelCoefficients,
    inst: &Instance,
    matching: &Matching,
) -> (TeamOrdering, bool) {
    let mut cur = ordering.clone();
    let mut bind = cur.binding(matching);
    let m = cur.sigma.len();
    let mut improved = false;
    loop {
        let mut changed = false;
        for i in 0..m {
            for j in i + 1..m {
                let labels = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
                let mut next = bind.clone();
                next.swap(2 * i, 2 * j);
                next.swap(2 * i + 1, 2 * j + 1);
                let delta = coeffs.delta(inst, &bind, &next, &labels);
                check_delta(coeffs, inst, &bind, &next, delta);
                if improves(inst, delta) {
                    cur.sigma.swap(i, j);
                    cur.pi.swap(i, j);
                    bind = next;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        improved = true;
    }
    (cur, improved)
}

/// Tries flipping the orientation of each slot in turn, repeating until stable.
pub fn swap_within_pass(
    ordering: &TeamOrdering,
    coeffs: &TravelCoefficients,
    inst: &Instance,
    matching: &Matching,
) -> (TeamOrdering, bool) {
    let mut cur = ordering.clone();
    let mut bind = cur.binding(matching);
    let mut improved = false;
    loop {
        let mut changed = false;
        for i in 0..cur.pi.len() {
            let labels = [2 * i, 2 * i + 1];
            let mut next = bind.clone();
            next.swap(2 * i, 2 * i + 1);
            let delta = coeffs.delta(inst, &bind, &next, &labels);
            check_delta(coeffs, inst, &bind, &next, delta);
            if improves(inst, delta) {
                cur.pi[i] = !cur.pi[i];
                bind = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        improved = true;
    }
    (cur, improved)
}

/// Alternates both passes until neither improves.
pub fn local_search(
    ordering: &TeamOrdering,
    coeffs: &TravelCoefficients,
    inst: &Instance,
    matching: &Matching,
) -> TeamOrdering {
    let mut cur = ordering.clone();
    loop {
        let (next, a) = swap_super_teams_pass(&cur, coeffs, inst, matching);
        let (next, b) = swap_within_pass(&next, coeffs, inst, matching);
        cur = next;
        if !a && !b {
            return cur;
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoundsResult {
    pub ordering: TeamOrdering,
    pub schedule: Schedule,
    pub report: DistanceReport,
    /// Index of the round that produced the result.
    pub round: usize,
    /// Cost of the best round's starting ordering, before local search.
    pub initial_total: f64,
}

/// Runs `rounds` independent restarts seeded `base_seed + r` and keeps the
/// cheapest (earliest round on ties).
pub fn run_rounds(
    template: &Template,
    coeffs: &TravelCoefficients,
    inst: &Instance,
    matching: &Matching,
    rounds: usize,
    base_seed: u64,
) -> RoundsResult {
    let m = matching.pairs.len();
    let outcomes: Vec<(f64, usize, TeamOrdering, f64)> = (0..rounds.max(1))
        .into_par_iter()
        .map(|r| {
            let start = random_ordering(m, base_seed.wrapping_add(r as u64));
            let initial = coeffs.cost(inst, &start.binding(matching));
            let best = local_search(&start, coeffs, inst, matching);
            (coeffs.cost(inst, &best.binding(matching)), r, best, initial)
        })
        .collect();
    let (_, round, ordering, initial_total) = outcomes
        .into_iter()
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)))
        .unwrap();
    finish(template, inst, matching, ordering, round, initial_total)
}

/// Binds `ordering`, producing the schedule and its distance report.
pub fn finish(
    template: &Template,
    inst: &Instance,
    matching: &Matching,
    ordering: TeamOrdering,
    round: usize,
    initial_total: f64,
) -> RoundsResult {
    let schedule = ordering.apply(template, matching);
    let lb = independent_lower_bound(inst, matching).total;
    let report = distance_report(&schedule, inst, lb);
    RoundsResult {
        ordering,
        schedule,
        report,
        round,
        initial_total,
    }
}

//! Templates for team counts of the form 4k + 2.
//!
//! With `m = n/2` odd, super-teams `0..m-2` rotate on an odd cycle, `m-2`
//! (the "left" super-team) sits at the cycle's fixed point and `m-1` (the
//! "right" super-team) joins one adjacent cycle pair per slot in a
//! three-super-team game. A six-day block closes the schedule.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching::Matching;
use crate::ordering::TeamOrdering;
use crate::schedule::{venue_sequence, Schedule};
use crate::template::{
    expand, opponent_in_cycle, pair_of, travels, Construction, SuperGame, SuperGameKind, Template,
};

/// Shapes of the three-super-team game, picked by the position and direction
/// of the cycle edge it replaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RightShape {
    EvenTail,
    OddHead,
    EvenHead,
    OddTail,
    Seam,
}

/// `(away, home)` games for the first and second day of a right game; the
/// third and fourth days replay them reversed.
fn right_days(shape: RightShape, t: (usize, usize), h: (usize, usize), r: (usize, usize)) -> [[(usize, usize); 3]; 2] {
    let ((t1, t2), (h1, h2), (r1, r2)) = (t, h, r);
    match shape {
        RightShape::EvenTail => [
            [(r1, h1), (t2, r2), (t1, h2)],
            [(t2, r1), (r2, h2), (t1, h1)],
        ],
        RightShape::OddHead => [
            [(r1, h2), (t1, r2), (t2, h1)],
            [(t1, r1), (r2, h1), (t2, h2)],
        ],
        RightShape::EvenHead => [
            [(r1, h2), (t2, r2), (t1, h1)],
            [(t1, r1), (r2, h2), (t2, h1)],
        ],
        RightShape::OddTail => [
            [(r1, h1), (t1, r2), (t2, h2)],
            [(t2, r1), (r2, h1), (t1, h2)],
        ],
        RightShape::Seam => [
            [(r1, h1), (t1, r2), (t2, h2)],
            [(t2, r1), (r2, h2), (t1, h1)],
        ],
    }
}

/// Games of the closing six days as `(day offset, away, home)`, over the
/// super-teams `0..m`.
pub fn final_six_days(m: usize) -> Result<Vec<(usize, usize, usize)>> {
    if m % 2 == 0 || m < 5 {
        return Err(Error::Domain(format!(
            "closing block needs an odd super-team count of at least 5, got {m}"
        )));
    }
    let len = m - 2;
    let team = |x: usize, k: usize| {
        let u = (x + len - 1) % len;
        if k == 1 {
            2 * u
        } else {
            2 * u + 1
        }
    };
    let mut out = Vec::new();
    let mut twice = |day: usize, back: usize, away: usize, home: usize| {
        out.push((day, away, home));
        out.push((back, home, away));
    };
    for x in 1..=len {
        twice(1, 5, team(x, 1), team(x, 2));
    }
    for i in (1..=len).step_by(2) {
        if i + 2 <= len {
            twice(0, 3, team(i, 1), team(i + 1, 1));
            twice(2, 4, team(i, 2), team(i + 1, 1));
        }
        if i >= 3 {
            twice(0, 3, team(i, 2), team(i - 1, 2));
        }
        twice(2, 4, team(i + len - 1, 2), team(i, 1));
    }
    twice(0, 3, team(len, 1), team(1, 2));
    let (l1, l2) = pair_of(m - 2);
    let (r1, r2) = pair_of(m - 1);
    twice(0, 5, r1, r2);
    twice(0, 5, l1, l2);
    twice(1, 3, l2, r1);
    twice(1, 3, r2, l1);
    twice(2, 4, l1, r1);
    twice(2, 4, l2, r2);
    Ok(out)
}

/// Slot (one-based) and cycle member meeting the left super-team there.
fn left_partner(q: usize, len: usize) -> usize {
    (1..=len).find(|&x| (x + q - 1) % len == 0).unwrap()
}

pub fn build_odd_template(n: usize) -> Result<Template> {
    if n % 4 != 2 || n < 10 {
        return Err(Error::Domain(format!(
            "this construction needs n = 4k + 2 with n >= 10, got {n}"
        )));
    }
    let m = n / 2;
    let len = m - 2;
    let left = m - 1;
    let right = pair_of(m - 1);
    let mut schedule = Schedule::empty(n);
    let mut games = Vec::new();

    for q in 1..=len {
        let d = 4 * (q - 1);
        let i = match ((len + 3) / 2 + len - q % len) % len {
            0 => len,
            v => v,
        };
        let lo = if i > 1 { i - 1 } else { len };
        let hi = i;
        for x in 1..=len {
            let (kind, tail, head) = if (x + q - 1) % len == 0 {
                match q {
                    1 => (SuperGameKind::Normal, x, left),
                    _ if q == len => (SuperGameKind::Penultimate, left, x),
                    _ if q % 2 == 0 => (SuperGameKind::Left, x, left),
                    _ => (SuperGameKind::Left, left, x),
                }
            } else if x == lo || x == hi || !travels(x, q, len) {
                continue;
            } else {
                (SuperGameKind::Normal, x, opponent_in_cycle(x, q, len))
            };
            games.push(SuperGame {
                kind,
                first_day: d,
                tail: tail - 1,
                head: head - 1,
            });
        }

        let lo_travels = travels(lo, q, len);
        let (tail, head) = if lo_travels { (lo, hi) } else { (hi, lo) };
        let shape = match (lo == len && hi == 1, lo % 2 == 0, lo_travels) {
            (true, _, _) => RightShape::Seam,
            (_, true, true) => RightShape::EvenTail,
            (_, false, false) => RightShape::OddHead,
            (_, true, false) => RightShape::EvenHead,
            (_, false, true) => RightShape::OddTail,
        };
        let [first, second] = right_days(shape, pair_of(tail - 1), pair_of(head - 1), right);
        for (away, home) in first {
            schedule.set_game(d, away, home);
            schedule.set_game(d + 2, home, away);
        }
        for (away, home) in second {
            schedule.set_game(d + 1, away, home);
            schedule.set_game(d + 3, home, away);
        }
    }
    for &g in &games {
        expand(&mut schedule, g);
    }
    for (offset, away, home) in final_six_days(m)? {
        schedule.set_game(4 * len + offset, away, home);
    }
    Ok(Template {
        schedule,
        construction: Construction::Odd,
        super_games: games,
    })
}

/// Per-super-team extra cost over the independent lower bound.
///
/// Entry `i` is the excess of the two teams bound to slot `i`, except that
/// the excess accrued inside games against the left super-team is charged to
/// the left super-team (index `m - 2`). The entries sum to the schedule's
/// total minus the lower bound.
pub fn extra_cost_breakdown(
    template: &Template,
    ordering: &TeamOrdering,
    inst: &Instance,
    matching: &Matching,
) -> Result<Vec<f64>> {
    if template.construction != Construction::Odd {
        return Err(Error::Domain(
            "extra-cost breakdown applies only to the 4k + 2 construction".into(),
        ));
    }
    let n = inst.n();
    if template.n() != n {
        return Err(Error::Domain("template and instance sizes differ".into()));
    }
    let m = n / 2;
    let len = m - 2;
    let bind = ordering.binding(matching);
    let schedule = template.schedule.relabel(&bind);
    let walk = |seq: &[usize]| -> f64 { seq.windows(2).map(|w| inst.d(w[0], w[1])).sum() };

    let mut delta: Vec<f64> = (0..m)
        .map(|u| {
            let (a, b) = pair_of(u);
            [bind[a], bind[b]]
                .iter()
                .map(|&t| walk(&venue_sequence(&schedule, t)) - (inst.row_sum(t) + matching.weight))
                .sum()
        })
        .collect();

    for q in 2..=len {
        let d = 4 * (q - 1);
        let x = left_partner(q, len);
        let (a, b) = pair_of(x - 1);
        for t in [bind[a], bind[b]] {
            let mut seq = vec![t];
            seq.extend((d..d + 4).map(|day| schedule.venue(t, day)));
            seq.push(t);
            let mut opp: Vec<usize> = (d..d + 4).map(|day| schedule.game(t, day).0).collect();
            opp.sort_unstable();
            opp.dedup();
            let ideal = inst.d(t, opp[0]) + inst.d(opp[0], opp[1]) + inst.d(opp[1], t);
            let excess = walk(&seq) - ideal;
            delta[x - 1] -= excess;
            delta[m - 2] += excess;
        }
    }
    Ok(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::validate_schedule;

    #[test]
    fn odd_templates_are_feasible() {
        for n in (10..=38).step_by(4) {
            let t = build_odd_template(n).unwrap();
            let rep = validate_schedule(&t.schedule, 2);
            assert!(rep.feasible, "n = {n}: {:?}", &rep.violations[..rep.violations.len().min(4)]);
        }
    }

    #[test]
    fn rejects_wrong_residue() {
        assert!(matches!(build_odd_template(12), Err(Error::Domain(_))));
        assert!(matches!(build_odd_template(6), Err(Error::Domain(_))));
    }

    #[test]
    fn right_pair_alternates_in_every_slot() {
        for n in [10usize, 14, 18] {
            let t = build_odd_template(n).unwrap();
            let s = &t.schedule;
            let (r1, r2) = pair_of(n / 2 - 1);
            let ha = |team: usize| -> String {
                (0..4 * (n / 2 - 2))
                    .map(|d| if s.game(team, d).1 { 'A' } else { 'H' })
                    .collect()
            };
            assert_eq!(ha(r1), "AHHA".repeat(n / 2 - 2));
            assert_eq!(ha(r2), "HAAH".repeat(n / 2 - 2));
        }
    }

    #[test]
    fn closing_block_covers_each_partner_twice() {
        for m in [5usize, 7, 9] {
            let games = final_six_days(m).unwrap();
            assert_eq!(games.len(), 6 * m);
            for team in 0..2 * m {
                let partner = team ^ 1;
                let with_partner: Vec<_> = games
                    .iter()
                    .filter(|g| (g.1 == team && g.2 == partner) || (g.2 == team && g.1 == partner))
                    .collect();
                assert_eq!(with_partner.len(), 2);
                let per_day: Vec<usize> = (0..6)
                    .map(|d| games.iter().filter(|g| g.0 == d && (g.1 == team || g.2 == team)).count())
                    .collect();
                assert_eq!(per_day, vec![1; 6]);
            }
        }
    }
}

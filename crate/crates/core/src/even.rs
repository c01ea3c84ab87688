//! Templates for team counts divisible by four: the rotation construction and
//! its divide-and-conquer packing generalization.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schedule::Schedule;
use crate::template::{
    expand, opponent_in_cycle, travels, Construction, SuperGame, SuperGameKind, Template,
};

/// How super-teams are packed into groups. `p == 1` is the plain rotation;
/// larger `p` groups `p` super-teams per group and schedules the final group
/// round as independent `4p`-team sub-problems built with `sub`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackingPlan {
    pub p: usize,
    pub sub: Option<Box<PackingPlan>>,
}

impl PackingPlan {
    pub fn base() -> Self {
        Self { p: 1, sub: None }
    }

    pub fn packed(p: usize, sub: PackingPlan) -> Self {
        Self {
            p,
            sub: Some(Box::new(sub)),
        }
    }

    /// Packing sizes from the outermost level inward, ending in 1.
    pub fn chain(&self) -> Vec<usize> {
        let mut out = vec![self.p];
        let mut cur = self;
        while let Some(sub) = &cur.sub {
            out.push(sub.p);
            cur = sub;
        }
        out
    }

    pub fn is_valid_for(&self, n: usize) -> bool {
        if !packing_allowed(n, self.p) {
            return false;
        }
        match (&self.sub, self.p) {
            (None, 1) => true,
            (Some(sub), p) if p >= 2 => sub.p < p && sub.is_valid_for(4 * p),
            _ => false,
        }
    }
}

pub fn packing_allowed(n: usize, p: usize) -> bool {
    match p {
        0 => false,
        1 => n % 4 == 0 && n >= 8,
        _ => n >= 8 * p && n % (4 * p) == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeftCountTable {
    /// Fewest left super-games over all packings.
    pub best: usize,
    /// Smallest packing size attaining `best`.
    pub best_p: usize,
    /// `(p, L_p(n))` for every allowed packing size.
    pub per_p: Vec<(usize, usize)>,
}

struct LeftCounts(HashMap<(usize, usize), usize>);

impl LeftCounts {
    fn new() -> Self {
        Self(HashMap::new())
    }

    fn get(&mut self, n: usize, p: usize) -> usize {
        if p == 1 {
            return n / 2 - 4;
        }
        if let Some(&v) = self.0.get(&(n, p)) {
            return v;
        }
        let (inner, _) = self.best_below(4 * p, p);
        let v = n / 2 - 3 * p + (n / (4 * p)) * inner;
        self.0.insert((n, p), v);
        v
    }

    /// Minimum over packings `i < limit` allowed for `n`, smallest `i` on ties.
    fn best_below(&mut self, n: usize, limit: usize) -> (usize, usize) {
        (1..limit)
            .filter(|&i| packing_allowed(n, i))
            .map(|i| (self.get(n, i), i))
            .min()
            .expect("a base packing is always allowed")
    }

    fn plan(&mut self, p: usize) -> PackingPlan {
        if p == 1 {
            return PackingPlan::base();
        }
        let (_, sub) = self.best_below(4 * p, p);
        PackingPlan::packed(p, self.plan(sub))
    }
}

/// Number of left super-games for every packing of `n` teams.
pub fn compute_l(n: usize) -> Result<LeftCountTable> {
    if n % 4 != 0 || n < 8 {
        return Err(Error::Domain(format!(
            "left-game counts need n divisible by 4 and at least 8, got {n}"
        )));
    }
    let mut counts = LeftCounts::new();
    let per_p: Vec<(usize, usize)> = (1..=n / 8)
        .filter(|&p| packing_allowed(n, p))
        .map(|p| (p, counts.get(n, p)))
        .collect();
    let &(best_p, best) = per_p
        .iter()
        .min_by_key(|&&(p, l)| (l, p))
        .expect("p = 1 is always present");
    Ok(LeftCountTable {
        best,
        best_p,
        per_p,
    })
}

/// The packing with the fewest left super-games, recursively optimal.
pub fn best_plan(n: usize) -> Result<PackingPlan> {
    let table = compute_l(n)?;
    Ok(LeftCounts::new().plan(table.best_p))
}

/// Plan with outer packing `p` and the best inner plans.
pub fn plan_with_packing(n: usize, p: usize) -> Result<PackingPlan> {
    if !packing_allowed(n, p) {
        return Err(Error::Domain(format!("packing {p} is not allowed for n = {n}")));
    }
    Ok(LeftCounts::new().plan(p))
}

/// Every valid plan for `n`, including non-optimal inner choices.
pub fn all_plans(n: usize) -> Vec<PackingPlan> {
    let mut out = Vec::new();
    for p in (1..=n / 8).filter(|&p| packing_allowed(n, p)) {
        if p == 1 {
            out.push(PackingPlan::base());
            continue;
        }
        for sub in all_plans(4 * p).into_iter().filter(|s| s.p < p) {
            out.push(PackingPlan::packed(p, sub));
        }
    }
    out
}

/// Which labels of a `units`-super-team sub-problem start on the road.
fn starts_away(units: usize, plan: &PackingPlan) -> Vec<bool> {
    if plan.p == 1 {
        let len = units - 1;
        let mut v: Vec<bool> = (1..units).map(|x| travels(x, 1, len) || x == len).collect();
        v.push(false);
        return v;
    }
    let groups = units / plan.p;
    let len = groups - 1;
    (1..=groups)
        .flat_map(|x| {
            let away = x < groups && (travels(x, 1, len) || x == len);
            std::iter::repeat(away).take(plan.p)
        })
        .collect()
}

struct Builder {
    games: Vec<SuperGame>,
}

impl Builder {
    fn push(&mut self, kind: SuperGameKind, first_day: usize, tail: usize, head: usize) {
        self.games.push(SuperGame {
            kind,
            first_day,
            tail,
            head,
        });
    }

    /// Schedules super-teams `units` (in role order) starting at `day0`.
    fn build(&mut self, units: &[usize], plan: &PackingPlan, day0: usize) {
        if plan.p == 1 {
            self.rotation(units, day0);
        } else {
            self.grouped(units, plan, day0);
        }
    }

    fn rotation(&mut self, units: &[usize], day0: usize) {
        let m = units.len();
        let len = m - 1;
        for q in 1..m {
            let d = day0 + 4 * (q - 1);
            for x in 1..=len {
                let (mut kind, tail, head) = if (x + q - 1) % len == 0 {
                    match q {
                        1 => (SuperGameKind::Normal, x, m),
                        _ if q % 2 == 0 => (SuperGameKind::Left, x, m),
                        _ => (SuperGameKind::Left, m, x),
                    }
                } else if travels(x, q, len) {
                    (SuperGameKind::Normal, x, opponent_in_cycle(x, q, len))
                } else {
                    continue;
                };
                if q == m - 2 {
                    kind = SuperGameKind::Penultimate;
                } else if q == m - 1 {
                    kind = SuperGameKind::Last;
                }
                self.push(kind, d, units[tail - 1], units[head - 1]);
            }
        }
    }

    fn grouped(&mut self, units: &[usize], plan: &PackingPlan, day0: usize) {
        let p = plan.p;
        let sub = plan.sub.as_deref().expect("packed plans carry a sub-plan");
        let groups = units.len() / p;
        let len = groups - 1;
        let group = |x: usize| &units[(x - 1) * p..x * p];
        for q in 1..groups {
            let d = day0 + 4 * p * (q - 1);
            let final_round = q == groups - 1;
            for x in 1..=len {
                let (left, tail, head) = if (x + q - 1) % len == 0 {
                    match q {
                        1 => (false, x, groups),
                        _ if final_round => (false, groups, x),
                        _ if q % 2 == 0 => (true, x, groups),
                        _ => (true, groups, x),
                    }
                } else if travels(x, q, len) {
                    (false, x, opponent_in_cycle(x, q, len))
                } else {
                    continue;
                };
                let (tails, heads) = (group(tail), group(head));
                if final_round {
                    let away = starts_away(2 * p, sub);
                    let (mut ti, mut hi) = (tails.iter(), heads.iter());
                    let labels: Vec<usize> = away
                        .iter()
                        .map(|&a| *if a { ti.next() } else { hi.next() }.unwrap())
                        .collect();
                    self.build(&labels, sub, d);
                    continue;
                }
                for l in 1..=p {
                    let kind = if left && l == p {
                        SuperGameKind::Left
                    } else {
                        SuperGameKind::Normal
                    };
                    for i in 0..p {
                        self.push(kind, d + 4 * (l - 1), tails[i], heads[(i + l - 1) % p]);
                    }
                }
            }
        }
    }
}

pub fn build_even_template(n: usize, plan: &PackingPlan) -> Result<Template> {
    if n % 4 != 0 || n < 8 {
        return Err(Error::Domain(format!(
            "this construction needs n divisible by 4 and at least 8, got {n}"
        )));
    }
    if !plan.is_valid_for(n) {
        return Err(Error::Domain(format!(
            "packing chain {:?} is not valid for n = {n}",
            plan.chain()
        )));
    }
    let units: Vec<usize> = (0..n / 2).collect();
    let mut builder = Builder { games: Vec::new() };
    builder.build(&units, plan, 0);
    let mut schedule = Schedule::empty(n);
    for &g in &builder.games {
        expand(&mut schedule, g);
    }
    Ok(Template {
        schedule,
        construction: if plan.p == 1 {
            Construction::Even
        } else {
            Construction::EvenPacked
        },
        super_games: builder.games,
    })
}

/// Home/away strings (`'H'`/`'A'`) of the two teams of `super_team`
/// (zero-based) over the last ten days of the base template for `n` teams.
pub fn last_ten_days_pattern(n: usize, super_team: usize) -> Result<[String; 2]> {
    if super_team >= n / 2 {
        return Err(Error::Domain(format!("no super-team {super_team} for n = {n}")));
    }
    let t = build_even_template(n, &PackingPlan::base())?;
    let s = &t.schedule;
    let row = |team: usize| -> String {
        (s.days() - 10..s.days())
            .map(|d| if s.game(team, d).1 { 'A' } else { 'H' })
            .collect()
    };
    Ok([row(2 * super_team), row(2 * super_team + 1)])
}

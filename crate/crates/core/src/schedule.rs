//! Double round-robin schedules: feasibility checks, itineraries, distance
//! accounting and a CSV form.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching::lower_bound;

/// `table[i][d]` is `+(j+1)` when team `i` plays away at team `j` on day `d`
/// and `-(j+1)` when it hosts `j`. Teams and days are zero-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    n: usize,
    table: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    FixedGameValue,
    FixedGameTime,
    NoRepeat,
    BoundedByK,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::FixedGameValue => "fixed-game-value",
            Property::FixedGameTime => "fixed-game-time",
            Property::NoRepeat => "no-repeat",
            Property::BoundedByK => "bounded-by-k",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub property: Property,
    pub team: usize,
    /// Absent for missing games, which have no day.
    pub day: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    pub total: f64,
    pub per_team: Vec<f64>,
    pub lb: f64,
    pub lb_gap_percent: Option<f64>,
}

impl Schedule {
    /// An all-empty table, filled with [`Schedule::set_game`].
    pub(crate) fn empty(n: usize) -> Self {
        Self {
            n,
            table: vec![vec![0; 2 * n - 2]; n],
        }
    }

    pub fn from_table(table: Vec<Vec<i32>>) -> Result<Self> {
        let n = table.len();
        if n < 2 || table.iter().any(|r| r.len() != 2 * n - 2) {
            return Err(Error::Format(format!(
                "schedule for {n} teams needs {} days in every row",
                2 * n.max(1) - 2
            )));
        }
        for (i, row) in table.iter().enumerate() {
            for (d, &e) in row.iter().enumerate() {
                let j = e.unsigned_abs() as usize;
                if j == 0 || j > n || j == i + 1 {
                    return Err(Error::Format(format!(
                        "team {} day {}: bad opponent {e}",
                        i + 1,
                        d + 1
                    )));
                }
            }
        }
        Ok(Self { n, table })
    }

    /// Records that `away` plays at `home` on `day`.
    pub(crate) fn set_game(&mut self, day: usize, away: usize, home: usize) {
        debug_assert!(
            self.table[away][day] == 0 && self.table[home][day] == 0,
            "double booking on day {day}: {away} at {home}"
        );
        self.table[away][day] = home as i32 + 1;
        self.table[home][day] = -(away as i32 + 1);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn days(&self) -> usize {
        2 * self.n - 2
    }

    pub fn table(&self) -> &[Vec<i32>] {
        &self.table
    }

    pub fn entry(&self, team: usize, day: usize) -> i32 {
        self.table[team][day]
    }

    /// Zero-based opponent and whether `team` is away.
    pub fn game(&self, team: usize, day: usize) -> (usize, bool) {
        let e = self.table[team][day];
        (e.unsigned_abs() as usize - 1, e > 0)
    }

    /// Venue (home team index) where `team` plays on `day`.
    pub fn venue(&self, team: usize, day: usize) -> usize {
        match self.game(team, day) {
            (opp, true) => opp,
            _ => team,
        }
    }

    /// Renames labels: team `i` of `self` becomes `to[i]`.
    pub fn relabel(&self, to: &[usize]) -> Schedule {
        let mut out = Schedule::empty(self.n);
        for i in 0..self.n {
            for d in 0..self.days() {
                let (opp, away) = self.game(i, d);
                if away {
                    out.set_game(d, to[i], to[opp]);
                }
            }
        }
        out
    }
}

pub fn validate_schedule(s: &Schedule, k: usize) -> FeasibilityReport {
    let n = s.n();
    let days = s.days();
    let mut violations = Vec::new();
    let mut push = |property, team, day| violations.push(Violation { property, team, day });

    for i in 0..n {
        let mut seen_away = vec![false; n];
        let mut seen_home = vec![false; n];
        for d in 0..days {
            let e = s.entry(i, d);
            let j = e.unsigned_abs() as usize;
            if j == 0 || j > n || j == i + 1 {
                push(Property::FixedGameTime, i, Some(d));
                continue;
            }
            let j = j - 1;
            let expected = if e > 0 { -(i as i32 + 1) } else { i as i32 + 1 };
            if s.entry(j, d) != expected {
                push(Property::FixedGameTime, i, Some(d));
            }
            let seen = if e > 0 { &mut seen_away } else { &mut seen_home };
            if seen[j] {
                push(Property::FixedGameValue, i, Some(d));
            }
            seen[j] = true;
        }
        for j in 0..n {
            if j != i && !(seen_away[j] && seen_home[j]) {
                push(Property::FixedGameValue, i, None);
            }
        }
        for d in 1..days {
            let (a, b) = (s.entry(i, d - 1), s.entry(i, d));
            if a != 0 && a.abs() == b.abs() {
                push(Property::NoRepeat, i, Some(d));
            }
        }
        let mut run = 0;
        for d in 0..days {
            let away = s.entry(i, d) > 0;
            run = if d > 0 && (s.entry(i, d - 1) > 0) == away { run + 1 } else { 1 };
            if run > k {
                push(Property::BoundedByK, i, Some(d));
            }
        }
    }
    FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
    }
}

/// Home venue sequence of one team: starts and ends at home.
pub fn venue_sequence(s: &Schedule, team: usize) -> Vec<usize> {
    let mut seq = Vec::with_capacity(s.days() + 2);
    seq.push(team);
    seq.extend((0..s.days()).map(|d| s.venue(team, d)));
    seq.push(team);
    seq
}

pub fn team_distance(s: &Schedule, inst: &Instance, team: usize) -> f64 {
    let seq = venue_sequence(s, team);
    if inst.is_integral() {
        seq.windows(2)
            .try_fold(0i64, |acc, w| acc.checked_add(inst.d_int(w[0], w[1])))
            .expect("distance overflow") as f64
    } else {
        seq.windows(2).map(|w| inst.d(w[0], w[1])).sum()
    }
}

/// Total travel given an already-known lower bound.
pub fn distance_report(s: &Schedule, inst: &Instance, lb: f64) -> DistanceReport {
    let per_team: Vec<f64> = (0..s.n()).map(|t| team_distance(s, inst, t)).collect();
    let total = per_team.iter().sum::<f64>();
    DistanceReport {
        total,
        per_team,
        lb,
        lb_gap_percent: (lb > 0.0).then(|| 100.0 * (total - lb) / lb),
    }
}

pub fn total_distance(s: &Schedule, inst: &Instance) -> DistanceReport {
    distance_report(s, inst, lower_bound(inst).total)
}

/// Road trips of `team`: each is the ordered list of venues visited while away.
pub fn itinerary_of(s: &Schedule, team: usize) -> Vec<Vec<usize>> {
    let mut trips = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for d in 0..s.days() {
        match s.game(team, d) {
            (opp, true) => current.push(opp),
            _ if !current.is_empty() => trips.push(std::mem::take(&mut current)),
            _ => {}
        }
    }
    if !current.is_empty() {
        trips.push(current);
    }
    trips
}

/// One line per team, one signed cell per day.
pub fn render_schedule(s: &Schedule) -> String {
    let mut out = String::new();
    for row in s.table() {
        let cells: Vec<String> = row.iter().map(|&e| format!("{e:+}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<Schedule> {
    let table = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split(',')
                .map(|cell| {
                    cell.trim().parse::<i32>().map_err(|_| {
                        Error::Format(format!("row {}: cell {cell:?} is not a signed team", i + 1))
                    })
                })
                .collect::<Result<Vec<i32>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Schedule::from_table(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    // A hand-checked feasible schedule for four teams.
    fn four() -> Schedule {
        parse_schedule(
            "-2,+3,-4,-3,+2,+4\n\
             +1,-4,-3,+4,-1,+3\n\
             +4,-1,+2,+1,-4,-2\n\
             -3,+2,+1,-2,+3,-1\n",
        )
        .unwrap()
    }

    #[test]
    fn hand_schedule_validates() {
        let rep = validate_schedule(&four(), 2);
        assert!(rep.feasible, "{:?}", rep.violations);
    }

    #[test]
    fn hand_trace_distance() {
        let rows = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 4, 5],
            vec![2, 4, 0, 6],
            vec![3, 5, 6, 0],
        ];
        let inst = Instance::from_rows(&rows).unwrap();
        let s = four();
        // Venues of team 1: home, home, t3, home, home, t2, t4, home.
        assert_eq!(team_distance(&s, &inst, 0), 13.0);
        assert_eq!(team_distance(&s, &inst, 2), 19.0);
        assert_eq!(team_distance(&s, &inst, 3), 21.0);
        let rep = distance_report(&s, &inst, 0.0);
        assert_eq!(rep.total, rep.per_team.iter().sum::<f64>());
        assert_eq!(rep.lb_gap_percent, None);
    }

    #[test]
    fn itinerary_groups_away_runs() {
        let s = four();
        assert_eq!(itinerary_of(&s, 0), vec![vec![2], vec![1, 3]]);
        assert_eq!(itinerary_of(&s, 2), vec![vec![3], vec![1, 0]]);
        assert_eq!(itinerary_of(&s, 3), vec![vec![1, 0], vec![2]]);
    }

    #[test]
    fn csv_round_trip() {
        let s = four();
        assert_eq!(parse_schedule(&render_schedule(&s)).unwrap(), s);
    }

    #[test]
    fn corrupted_csv_is_format_error() {
        assert!(matches!(parse_schedule("+2,x\n"), Err(Error::Format(_))));
        assert!(matches!(parse_schedule("+2,-3\n-1,+3\n"), Err(Error::Format(_))));
    }

    #[test]
    fn detects_inconsistency_and_runs() {
        let mut t = four().table().to_vec();
        t[0][0] = -t[0][0];
        let rep = validate_schedule(&Schedule::from_table(t).unwrap(), 2);
        assert!(rep
            .violations
            .iter()
            .any(|v| v.property == Property::FixedGameTime && v.team == 0 && v.day == Some(0)));
        assert!(!rep.feasible);
    }
}

//! Shared building blocks for schedule templates over abstract labels.
//!
//! Labels `2i` and `2i + 1` form super-team `i` (zero-based). A super-game
//! between an away ("tail") pair and a home ("head") pair expands into four
//! or six days of team-level games.

use serde::Serialize;

use crate::schedule::Schedule;

pub type Pair = (usize, usize);

pub(crate) fn pair_of(super_team: usize) -> Pair {
    (2 * super_team, 2 * super_team + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuperGameKind {
    Normal,
    Left,
    Penultimate,
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuperGame {
    pub kind: SuperGameKind,
    pub first_day: usize,
    pub tail: usize,
    pub head: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Even,
    EvenPacked,
    Odd,
}

/// A complete schedule over labels plus the super-game layout that produced it.
#[derive(Debug, Clone)]
pub struct Template {
    pub schedule: Schedule,
    pub construction: Construction,
    pub super_games: Vec<SuperGame>,
}

impl Template {
    pub fn n(&self) -> usize {
        self.schedule.n()
    }

    pub fn left_games(&self) -> impl Iterator<Item = &SuperGame> {
        self.super_games
            .iter()
            .filter(|g| g.kind == SuperGameKind::Left)
    }
}

/// Direction of the rotation edge leaving cycle position of super-team `x`
/// (one-based) in slot `q` of a cycle of length `len`: true when `x` is the
/// travelling side.
pub(crate) fn travels(x: usize, q: usize, len: usize) -> bool {
    (x % 2 == 0) ^ (x + q - 1 > len)
}

/// One-based cycle member whose position opposes `x` in slot `q`.
pub(crate) fn opponent_in_cycle(x: usize, q: usize, len: usize) -> usize {
    let pos = (x + q - 1) % len;
    let target = (len - pos) % len;
    // Solve (y + q - 1) % len == target for y in 1..=len.
    let y = (target + len * 2 - (q - 1) % len) % len;
    if y == 0 {
        len
    } else {
        y
    }
}

pub(crate) fn expand_normal(s: &mut Schedule, d: usize, (a1, a2): Pair, (h1, h2): Pair) {
    s.set_game(d, a1, h1);
    s.set_game(d, a2, h2);
    s.set_game(d + 1, a1, h2);
    s.set_game(d + 1, a2, h1);
    s.set_game(d + 2, h1, a1);
    s.set_game(d + 2, h2, a2);
    s.set_game(d + 3, h1, a2);
    s.set_game(d + 3, h2, a1);
}

pub(crate) fn expand_left(s: &mut Schedule, d: usize, (a1, a2): Pair, (h1, h2): Pair) {
    s.set_game(d, a1, h1);
    s.set_game(d, a2, h2);
    s.set_game(d + 1, h1, a2);
    s.set_game(d + 1, h2, a1);
    s.set_game(d + 2, h1, a1);
    s.set_game(d + 2, h2, a2);
    s.set_game(d + 3, a1, h2);
    s.set_game(d + 3, a2, h1);
}

pub(crate) fn expand_penultimate(s: &mut Schedule, d: usize, (a1, a2): Pair, (h1, h2): Pair) {
    s.set_game(d, a1, h1);
    s.set_game(d, a2, h2);
    s.set_game(d + 1, a1, h2);
    s.set_game(d + 1, h1, a2);
    s.set_game(d + 2, h1, a1);
    s.set_game(d + 2, h2, a2);
    s.set_game(d + 3, a2, h1);
    s.set_game(d + 3, h2, a1);
}

pub(crate) fn expand_last(s: &mut Schedule, d: usize, (a1, a2): Pair, (h1, h2): Pair) {
    s.set_game(d, h1, h2);
    s.set_game(d, a1, a2);
    s.set_game(d + 1, a1, h1);
    s.set_game(d + 1, a2, h2);
    s.set_game(d + 2, a2, h1);
    s.set_game(d + 2, h2, a1);
    s.set_game(d + 3, h1, a1);
    s.set_game(d + 3, h2, a2);
    s.set_game(d + 4, h1, a2);
    s.set_game(d + 4, a1, h2);
    s.set_game(d + 5, h2, h1);
    s.set_game(d + 5, a2, a1);
}

pub(crate) fn expand(s: &mut Schedule, game: SuperGame) {
    let (t, h) = (pair_of(game.tail), pair_of(game.head));
    let d = game.first_day;
    match game.kind {
        SuperGameKind::Normal => expand_normal(s, d, t, h),
        SuperGameKind::Left => expand_left(s, d, t, h),
        SuperGameKind::Penultimate => expand_penultimate(s, d, t, h),
        SuperGameKind::Last => expand_last(s, d, t, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opponents_are_mutual() {
        for len in [3usize, 5, 7, 9] {
            for q in 1..=len {
                for x in 1..=len {
                    let y = opponent_in_cycle(x, q, len);
                    assert_eq!(opponent_in_cycle(y, q, len), x);
                    let pos = (x + q - 1) % len;
                    assert_eq!((y + q - 1) % len, (len - pos) % len);
                }
            }
        }
    }

    #[test]
    fn rotation_edges_have_one_traveller() {
        for len in [3usize, 5, 7] {
            for q in 1..=len {
                for x in 1..=len {
                    let y = opponent_in_cycle(x, q, len);
                    if y != x {
                        assert_ne!(travels(x, q, len), travels(y, q, len), "{len} {q} {x}");
                    }
                }
            }
        }
    }
}

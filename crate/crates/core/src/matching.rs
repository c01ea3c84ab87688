//! Minimum-weight perfect matching on the complete distance graph and the
//! independent lower bound built from it.

use serde::Serialize;

use crate::blossom::max_weight_matching;
use crate::instance::Instance;

/// A minimum-weight perfect matching. Pairs are zero-based `(a, b)` with
/// `a < b`, sorted by `a`; among all optimal matchings the lexicographically
/// smallest pair list is returned.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    /// Sum of the matched distances.
    pub weight: f64,
    /// Sum of all edge weights of the complete graph.
    pub d_g: f64,
    /// `d_g - weight`.
    pub d_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub per_team: Vec<f64>,
    pub total: f64,
}

pub(crate) fn same_cost(inst: &Instance, a: f64, b: f64) -> bool {
    if inst.is_integral() {
        a == b
    } else {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
    }
}

/// Optimal perfect-matching weight restricted to `vertices` (even count).
fn optimum_on(inst: &Instance, vertices: &[usize]) -> f64 {
    if vertices.is_empty() {
        return 0.0;
    }
    let mate = solve_on(inst, vertices);
    vertices
        .iter()
        .enumerate()
        .filter(|&(i, _)| i < mate[i])
        .map(|(i, &v)| inst.d(v, vertices[mate[i]]))
        .sum()
}

fn solve_on(inst: &Instance, vertices: &[usize]) -> Vec<usize> {
    let k = vertices.len();
    let ceiling = vertices
        .iter()
        .flat_map(|&a| vertices.iter().map(move |&b| inst.d(a, b)))
        .fold(0.0, f64::max)
        + 1.0;
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            edges.push((i, j, ceiling - inst.d(vertices[i], vertices[j])));
        }
    }
    max_weight_matching(k, edges)
}

pub fn min_weight_perfect_matching(inst: &Instance) -> Matching {
    let n = inst.n();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut target = optimum_on(inst, &remaining);
    let mut pairs = Vec::with_capacity(n / 2);
    while !remaining.is_empty() {
        let a = remaining[0];
        let mut chosen = None;
        for idx in 1..remaining.len() {
            let b = remaining[idx];
            let rest: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&v| v != a && v != b)
                .collect();
            let rest_opt = optimum_on(inst, &rest);
            if same_cost(inst, inst.d(a, b) + rest_opt, target) {
                chosen = Some((b, rest, rest_opt));
                break;
            }
        }
        let (b, rest, rest_opt) = chosen.expect("some partner attains the optimum");
        pairs.push((a, b));
        remaining = rest;
        target = rest_opt;
    }
    let weight = pairs.iter().map(|&(a, b)| inst.d(a, b)).sum::<f64>();
    let d_g = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| inst.d(i, j))
        .sum::<f64>();
    Matching {
        pairs,
        weight,
        d_g,
        d_h: d_g - weight,
    }
}

/// `LB_i = D_i + D_M` for every team, totalling `2 D_G + n D_M`.
pub fn independent_lower_bound(inst: &Instance, m: &Matching) -> LowerBound {
    let per_team: Vec<f64> = (0..inst.n()).map(|i| inst.row_sum(i) + m.weight).collect();
    let total = per_team.iter().sum();
    LowerBound { per_team, total }
}

pub fn lower_bound(inst: &Instance) -> LowerBound {
    independent_lower_bound(inst, &min_weight_perfect_matching(inst))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(rows: Vec<Vec<i64>>) -> Instance {
        Instance::from_rows(&rows).unwrap()
    }

    #[test]
    fn forced_optimum() {
        let mut rows = vec![vec![10; 4]; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 0;
        }
        rows[0][1] = 1;
        rows[1][0] = 1;
        rows[2][3] = 1;
        rows[3][2] = 1;
        let m = min_weight_perfect_matching(&inst(rows));
        assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
        assert_eq!(m.weight, 2.0);
        assert_eq!(m.d_h, m.d_g - m.weight);
    }

    #[test]
    fn zero_matrix_ties_break_lexicographically() {
        let m = min_weight_perfect_matching(&inst(vec![vec![0; 8]; 8]));
        assert_eq!(m.pairs, vec![(0, 1), (2, 3), (4, 5), (6, 7)]);
        assert_eq!(m.weight, 0.0);
        assert_eq!(lower_bound(&inst(vec![vec![0; 8]; 8])).total, 0.0);
    }

    #[test]
    fn lexicographic_choice_among_ties() {
        // Both {(0,1),(2,3)} and {(0,2),(1,3)} cost 2; {(0,3),(1,2)} costs 20.
        let rows = vec![
            vec![0, 1, 1, 10],
            vec![1, 0, 10, 1],
            vec![1, 10, 0, 1],
            vec![10, 1, 1, 0],
        ];
        let m = min_weight_perfect_matching(&inst(rows));
        assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn lower_bound_sums_rows() {
        let rows = vec![
            vec![0, 2, 3, 4],
            vec![2, 0, 5, 6],
            vec![3, 5, 0, 1],
            vec![4, 6, 1, 0],
        ];
        let i = inst(rows);
        let m = min_weight_perfect_matching(&i);
        assert_eq!(m.weight, 3.0);
        let lb = independent_lower_bound(&i, &m);
        assert_eq!(lb.per_team, vec![12.0, 16.0, 12.0, 14.0]);
        assert_eq!(lb.total, 2.0 * m.d_g + 4.0 * m.weight);
    }
}

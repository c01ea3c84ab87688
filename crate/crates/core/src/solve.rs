//! End-to-end solving: pick the construction for the team count, bind labels
//! and report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::even::{best_plan, build_even_template, plan_with_packing};
use crate::instance::Instance;
use crate::matching::{independent_lower_bound, min_weight_perfect_matching, LowerBound};
use crate::odd::build_odd_template;
use crate::oracle::brute_force_optimal;
use crate::ordering::{derandomize, extract_coefficients, finish, local_search, run_rounds, TeamOrdering};
use crate::schedule::{distance_report, DistanceReport, Schedule};
use crate::template::Template;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Packing {
    /// Fewest left super-games.
    #[default]
    Auto,
    /// Outer packing size; inner levels are chosen optimally.
    Fixed(usize),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub rounds: usize,
    pub seed: u64,
    pub derandomize: bool,
    pub packing: Packing,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            rounds: 1,
            seed: 0,
            derandomize: false,
            packing: Packing::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Even,
    EvenDc,
    Odd,
    Brute,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub method: Method,
    /// Packing sizes from the outer level inward; empty for odd and brute force.
    pub packing_chain: Vec<usize>,
    pub ordering: Option<TeamOrdering>,
    pub schedule: Schedule,
    pub report: DistanceReport,
    pub lower_bound: LowerBound,
    /// Cost of the winning start before local search.
    pub initial_total: Option<f64>,
}

/// Template for `n` teams, with the packing chain used (empty for odd `n/2`).
pub fn build_template(n: usize, packing: Packing) -> Result<(Template, Vec<usize>)> {
    if n % 4 == 2 {
        return Ok((build_odd_template(n)?, Vec::new()));
    }
    let plan = match packing {
        Packing::Auto => best_plan(n)?,
        Packing::Fixed(p) => plan_with_packing(n, p)?,
    };
    let chain = plan.chain();
    Ok((build_even_template(n, &plan)?, chain))
}

pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<Solution> {
    let n = inst.n();
    let matching = min_weight_perfect_matching(inst);
    let lb = independent_lower_bound(inst, &matching);
    if n <= 6 {
        let (schedule, _) = brute_force_optimal(inst)?;
        let report = distance_report(&schedule, inst, lb.total);
        return Ok(Solution {
            method: Method::Brute,
            packing_chain: Vec::new(),
            ordering: None,
            schedule,
            report,
            lower_bound: lb,
            initial_total: None,
        });
    }
    if opts.rounds == 0 && !opts.derandomize {
        return Err(Error::Domain("at least one round or derandomization is required".into()));
    }
    let (template, chain) = build_template(n, opts.packing)?;
    let coeffs = extract_coefficients(&template.schedule);

    let mut best = None;
    if opts.rounds > 0 {
        best = Some(run_rounds(&template, &coeffs, inst, &matching, opts.rounds, opts.seed));
    }
    if opts.derandomize {
        let start = derandomize(&coeffs, inst, &matching);
        let initial = coeffs.cost(inst, &start.binding(&matching));
        let improved = local_search(&start, &coeffs, inst, &matching);
        let cand = finish(&template, inst, &matching, improved, 0, initial);
        if best.as_ref().map_or(true, |b| cand.report.total < b.report.total) {
            best = Some(cand);
        }
    }
    let best = best.unwrap();
    let method = match (n % 4, chain.first()) {
        (2, _) => Method::Odd,
        (_, Some(&1)) => Method::Even,
        _ => Method::EvenDc,
    };
    Ok(Solution {
        method,
        packing_chain: chain,
        ordering: Some(best.ordering),
        schedule: best.schedule,
        report: best.report,
        lower_bound: lb,
        initial_total: Some(best.initial_total),
    })
}

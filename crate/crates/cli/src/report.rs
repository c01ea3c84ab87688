use serde::Serialize;
use ttp2_core::solve::Method;
use ttp2_core::Solution;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub n: usize,
    pub lb: f64,
    pub total: f64,
    pub gap_percent: Option<f64>,
    pub rounds: usize,
    pub seed: u64,
    pub elapsed_ms: u128,
    pub construction: Method,
    pub packing: Vec<usize>,
    pub feasible: bool,
}

impl RunReport {
    pub fn new(name: &str, sol: &Solution, rounds: usize, seed: u64, elapsed_ms: u128, feasible: bool) -> Self {
        Self {
            name: name.to_string(),
            n: sol.schedule.n(),
            lb: sol.lower_bound.total,
            total: sol.report.total,
            gap_percent: sol.report.lb_gap_percent,
            rounds,
            seed,
            elapsed_ms,
            construction: sol.method,
            packing: sol.packing_chain.clone(),
            feasible,
        }
    }
}

pub fn header() -> String {
    format!(
        "{:<14} {:>4} {:>12} {:>12} {:>8} {:>7} {:>10} {:>8}",
        "name", "n", "lb", "total", "gap%", "method", "packing", "ms"
    )
}

pub fn row(r: &RunReport) -> String {
    let chain: Vec<String> = r.packing.iter().map(|p| p.to_string()).collect();
    let method = serde_json::to_value(r.construction).unwrap();
    format!(
        "{:<14} {:>4} {:>12} {:>12} {:>8} {:>7} {:>10} {:>8}",
        r.name,
        r.n,
        r.lb,
        r.total,
        r.gap_percent.map_or("-".into(), |g| format!("{g:.2}")),
        method.as_str().unwrap_or("?"),
        if chain.is_empty() { "-".into() } else { chain.join(">") },
        r.elapsed_ms
    )
}

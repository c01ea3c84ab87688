use std::collections::HashMap;

use serde::Serialize;

use crate::report::RunReport;

/// Previous best totals keyed by lower-cased instance name, read from a CSV
/// with a header containing `name` and `previous` (or, failing that, a
/// two-column `name,value` table).
pub fn parse_baseline(text: &str) -> Result<HashMap<String, f64>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or("baseline is empty")?
        .split(',')
        .map(|c| c.trim().to_ascii_lowercase())
        .collect();
    let name_col = header.iter().position(|c| c == "name").unwrap_or(0);
    let value_col = header
        .iter()
        .position(|c| c == "previous" || c == "previous_result")
        .unwrap_or(1);
    let mut out = HashMap::new();
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let (Some(name), Some(value)) = (cells.get(name_col), cells.get(value_col)) else {
            return Err(format!("baseline row {} has too few columns", i + 2));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| format!("baseline row {}: {value:?} is not a number", i + 2))?;
        out.insert(name.to_ascii_lowercase(), value);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct Improvement {
    pub name: String,
    pub previous: f64,
    pub total: f64,
    /// `100 * (previous - total) / previous`.
    pub improvement_percent: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub reports: Vec<RunReport>,
    pub improvements: Vec<Improvement>,
    pub mean_improvement_percent: Option<f64>,
}

pub fn summarize(reports: Vec<RunReport>, baseline: Option<&HashMap<String, f64>>) -> BenchReport {
    let improvements: Vec<Improvement> = baseline
        .map(|b| {
            reports
                .iter()
                .filter_map(|r| {
                    let previous = *b.get(&r.name.to_ascii_lowercase())?;
                    Some(Improvement {
                        name: r.name.clone(),
                        previous,
                        total: r.total,
                        improvement_percent: 100.0 * (previous - r.total) / previous,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    let mean_improvement_percent = (!improvements.is_empty()).then(|| {
        improvements.iter().map(|i| i.improvement_percent).sum::<f64>() / improvements.len() as f64
    });
    BenchReport {
        reports,
        improvements,
        mean_improvement_percent,
    }
}

//! Distance-matrix instances: parsing, validation, metric checks and writing.

use serde::Serialize;

use crate::error::{Error, Result};

/// A symmetric distance matrix over `n` teams.
///
/// Entries are held as `f64`; when every input token was an integer the
/// `integral` flag is set and all values are exact integers, so sums can be
/// carried out in `i64` without loss.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    names: Vec<String>,
    dist: Vec<f64>,
    integral: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub symmetric: bool,
    pub zero_diagonal: bool,
    pub triangle_violations: usize,
    pub max_violation: f64,
}

impl Instance {
    /// Builds an instance from a row-major matrix, validating every invariant.
    pub fn from_matrix(n: usize, dist: Vec<f64>) -> Result<Self> {
        if dist.len() != n * n {
            return Err(Error::Format(format!(
                "expected {} entries for n = {n}, found {}",
                n * n,
                dist.len()
            )));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::Validation(format!(
                "team count must be even and at least 4, got {n}"
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = dist[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Validation(format!(
                        "dist[{}][{}] = {v} is negative or not finite",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::Validation(format!(
                        "dist[{}][{}] = {v} must be zero",
                        i + 1,
                        j + 1
                    )));
                }
                if v != dist[j * n + i] {
                    return Err(Error::Validation(format!(
                        "dist[{}][{}] = {v} differs from dist[{}][{}] = {}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1,
                        dist[j * n + i]
                    )));
                }
            }
        }
        let integral = dist.iter().all(|v| v.fract() == 0.0 && v.abs() < 2f64.powi(53));
        Ok(Self {
            n,
            names: (1..=n).map(|i| format!("t{i}")).collect(),
            dist,
            integral,
        })
    }

    /// Integer-valued convenience constructor.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Format("matrix is not square".into()));
        }
        Self::from_matrix(n, rows.iter().flatten().map(|&v| v as f64).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n {
            return Err(Error::Validation(format!(
                "{} names supplied for {} teams",
                names.len(),
                self.n
            )));
        }
        self.names = names;
        Ok(self)
    }

    /// True when every distance is an exact integer.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Distance between teams `i` and `j` (zero-based).
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Integer distance; only meaningful on integral instances.
    #[inline]
    pub fn d_int(&self, i: usize, j: usize) -> i64 {
        self.dist[i * self.n + j] as i64
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.dist[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn check_metric(&self) -> MetricReport {
        let n = self.n;
        let mut symmetric = true;
        let mut zero_diagonal = true;
        let mut violations = 0;
        let mut worst = 0.0f64;
        for i in 0..n {
            zero_diagonal &= self.d(i, i) == 0.0;
            for j in 0..n {
                symmetric &= self.d(i, j) == self.d(j, i);
                if i == j {
                    continue;
                }
                for h in 0..n {
                    if h == i || h == j {
                        continue;
                    }
                    let excess = self.d(i, j) - (self.d(i, h) + self.d(h, j));
                    if excess > 0.0 {
                        violations += 1;
                        worst = worst.max(excess);
                    }
                }
            }
        }
        MetricReport {
            symmetric,
            zero_diagonal,
            triangle_violations: violations,
            max_violation: worst,
        }
    }
}

/// Parses either `n` followed by `n*n` entries, or a bare `k*k` matrix.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(Error::Format("no tokens in input".into()));
    }
    let values = tokens
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Format(format!("token {t:?} is not a number")))
        })
        .collect::<Result<Vec<f64>>>()?;

    let square_side = |count: usize| {
        let k = (count as f64).sqrt().round() as usize;
        (k * k == count).then_some(k)
    };

    let first = values[0];
    let header = (first.fract() == 0.0 && first >= 1.0)
        .then_some(first as usize)
        .filter(|&n| values.len() - 1 == n * n);

    match (header, square_side(values.len())) {
        (Some(n), bare) if n % 2 == 0 || bare.is_none() => {
            Instance::from_matrix(n, values[1..].to_vec())
        }
        (_, Some(k)) => Instance::from_matrix(k, values),
        _ => Err(Error::Format(format!(
            "{} tokens is neither 1 + n^2 nor a perfect square",
            values.len()
        ))),
    }
}

/// Canonical text form: `n` on the first line, then one row per line.
pub fn write_instance(inst: &Instance) -> String {
    let n = inst.n();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                if inst.is_integral() {
                    format!("{}", inst.d_int(i, j))
                } else {
                    format!("{}", inst.d(i, j))
                }
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

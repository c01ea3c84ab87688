mod bench;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use ttp2_core::oracle::brute_force_optimal;
use ttp2_core::schedule::distance_report;
use ttp2_core::{
    lower_bound, parse_instance, parse_schedule, render_schedule, solve, validate_schedule, Instance,
    Packing, SolveOptions,
};

use report::RunReport;

#[derive(Parser)]
#[command(name = "ttp2", version, about = "Double round-robin schedules with at most two consecutive home or away games")]
struct Cli {
    /// Print human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a schedule for an instance and write it as CSV next to the input.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also start from the derandomized ordering.
        #[arg(long)]
        derandomize: bool,
        /// `auto` or an outer packing size.
        #[arg(long, default_value = "auto", value_parser = parse_packing)]
        packing: Packing,
        /// Schedule CSV destination; defaults to `<instance>.schedule.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a schedule CSV for feasibility and, given an instance, its distance.
    Validate {
        schedule: PathBuf,
        instance: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Independent lower bound of an instance.
    Lb { instance: PathBuf },
    /// Exact optimum by exhaustive search (at most 6 teams).
    Oracle { instance: PathBuf },
    /// Solve every instance file in a directory.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV with `name` and `previous` columns.
        #[arg(long)]
        baseline: Option<PathBuf>,
    },
}

enum Failure {
    Infeasible,
    Input(String),
}

impl From<ttp2_core::Error> for Failure {
    fn from(e: ttp2_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn parse_packing(s: &str) -> Result<Packing, String> {
    match s {
        "auto" => Ok(Packing::Auto),
        p => p
            .parse()
            .map(Packing::Fixed)
            .map_err(|_| format!("expected `auto` or a packing size, got {p:?}")),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("TTP2_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    let outcome = match cli.command {
        Command::Solve {
            instance,
            rounds,
            seed,
            derandomize,
            packing,
            out,
        } => {
            let opts = SolveOptions {
                rounds,
                seed,
                derandomize,
                packing,
            };
            cmd_solve(&instance, &opts, out, cli.pretty)
        }
        Command::Validate { schedule, instance, k } => cmd_validate(&schedule, instance.as_deref(), k, cli.pretty),
        Command::Lb { instance } => cmd_lb(&instance, cli.pretty),
        Command::Oracle { instance } => cmd_oracle(&instance, cli.pretty),
        Command::Bench {
            dir,
            rounds,
            seed,
            baseline,
        } => cmd_bench(&dir, rounds, seed, baseline.as_deref(), cli.pretty),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn check_size(n: usize) -> Result<(), Failure> {
    if n % 2 == 1 || (n < 8 && n != 4 && n != 6) {
        return Err(Failure::Input(format!(
            "team count must be 4, 6 or an even number of at least 8, got {n}"
        )));
    }
    Ok(())
}

fn solve_one(path: &Path, opts: &SolveOptions) -> Result<(RunReport, ttp2_core::Solution), Failure> {
    let inst = load_instance(path)?;
    check_size(inst.n())?;
    let start = Instant::now();
    let sol = solve(&inst, opts)?;
    let elapsed = start.elapsed().as_millis();
    let feasible = validate_schedule(&sol.schedule, 2).feasible;
    let report = RunReport::new(&instance_name(path), &sol, opts.rounds, opts.seed, elapsed, feasible);
    Ok((report, sol))
}

fn cmd_solve(path: &Path, opts: &SolveOptions, out: Option<PathBuf>, pretty: bool) -> Outcome {
    let (report, sol) = solve_one(path, opts)?;
    if report.n <= 6 {
        eprintln!("note: {} teams solved exactly by exhaustive search", report.n);
    }
    let out = out.unwrap_or_else(|| path.with_extension("schedule.csv"));
    fs::write(&out, render_schedule(&sol.schedule))
        .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    if pretty {
        println!("{}\n{}", report::header(), report::row(&report));
        println!("schedule written to {}", out.display());
    } else {
        emit(&report);
    }
    if report.feasible {
        Ok(())
    } else {
        Err(Failure::Infeasible)
    }
}

fn cmd_validate(schedule: &Path, instance: Option<&Path>, k: usize, pretty: bool) -> Outcome {
    let s = parse_schedule(&read(schedule)?).map_err(|e| Failure::Input(format!("{}: {e}", schedule.display())))?;
    let feasibility = validate_schedule(&s, k);
    let distance = match instance {
        Some(p) => {
            let inst = load_instance(p)?;
            if inst.n() != s.n() {
                return Err(Failure::Input(format!(
                    "schedule has {} teams but the instance has {}",
                    s.n(),
                    inst.n()
                )));
            }
            Some(distance_report(&s, &inst, lower_bound(&inst).total))
        }
        None => None,
    };
    if pretty {
        println!("feasible: {}", if feasibility.feasible { "yes" } else { "no" });
        for v in &feasibility.violations {
            let day = v.day.map_or("-".into(), |d| d.to_string());
            println!("  {} team {} day {}", v.property, v.team + 1, day);
        }
        if let Some(d) = &distance {
            println!("total: {}  lb: {}", d.total, d.lb);
            if let Some(g) = d.lb_gap_percent {
                println!("gap: {g:.2}%");
            }
        }
    } else {
        #[derive(Serialize)]
        struct Validation<'a> {
            feasible: bool,
            violations: &'a [ttp2_core::schedule::Violation],
            distance: Option<ttp2_core::DistanceReport>,
        }
        emit(&Validation {
            feasible: feasibility.feasible,
            violations: &feasibility.violations,
            distance,
        });
    }
    if feasibility.feasible {
        Ok(())
    } else {
        Err(Failure::Infeasible)
    }
}

fn cmd_lb(path: &Path, pretty: bool) -> Outcome {
    let inst = load_instance(path)?;
    let lb = lower_bound(&inst);
    if pretty {
        for (i, v) in lb.per_team.iter().enumerate() {
            println!("{:>4} {v:>12}", i + 1);
        }
        println!("total {}", lb.total);
    } else {
        emit(&lb);
    }
    Ok(())
}

fn cmd_oracle(path: &Path, pretty: bool) -> Outcome {
    let inst = load_instance(path)?;
    let start = Instant::now();
    let (schedule, _) = brute_force_optimal(&inst)?;
    let elapsed = start.elapsed().as_millis();
    let lb = lower_bound(&inst);
    let report = distance_report(&schedule, &inst, lb.total);
    let run = RunReport {
        name: instance_name(path),
        n: inst.n(),
        lb: lb.total,
        total: report.total,
        gap_percent: report.lb_gap_percent,
        rounds: 0,
        seed: 0,
        elapsed_ms: elapsed,
        construction: ttp2_core::solve::Method::Brute,
        packing: Vec::new(),
        feasible: validate_schedule(&schedule, 2).feasible,
    };
    if pretty {
        println!("{}\n{}", report::header(), report::row(&run));
        print!("{}", render_schedule(&schedule));
    } else {
        emit(&run);
    }
    Ok(())
}

fn cmd_bench(dir: &Path, rounds: usize, seed: u64, baseline: Option<&Path>, pretty: bool) -> Outcome {
    let baseline = baseline
        .map(|p| bench::parse_baseline(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))))
        .transpose()?;
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && !instance_name(p).starts_with('.'))
        .filter(|p| !p.to_string_lossy().ends_with(".schedule.csv"))
        .collect();
    files.sort();
    let opts = SolveOptions {
        rounds,
        seed,
        ..SolveOptions::default()
    };
    let reports = files
        .par_iter()
        .map(|p| solve_one(p, &opts).map(|(r, _)| r))
        .collect::<Result<Vec<_>, Failure>>()?;
    let all_feasible = reports.iter().all(|r| r.feasible);
    let summary = bench::summarize(reports, baseline.as_ref());
    if pretty {
        println!("{}", report::header());
        for r in &summary.reports {
            println!("{}", report::row(r));
        }
        for i in &summary.improvements {
            println!("{:<14} previous {:>12} improvement {:>7.2}%", i.name, i.previous, i.improvement_percent);
        }
        if let Some(m) = summary.mean_improvement_percent {
            println!("mean improvement {m:.2}%");
        }
    } else {
        emit(&summary);
    }
    if all_feasible {
        Ok(())
    } else {
        Err(Failure::Infeasible)
    }
}

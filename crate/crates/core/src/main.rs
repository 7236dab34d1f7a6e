//! Command-line front end: builds an arrangement family, runs the requested
//! computation within the work budgets, and writes a JSON, CSV or text report.
//!
//! Exit codes: 0 on success, 1 when a validation fails, 2 when the input is
//! rejected or the work would exceed a budget.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use chamber_orbits::analysis::Analysis;
use chamber_orbits::arrangement::{Arrangement, Family};
use chamber_orbits::chambers::enumerate_hyperplanes;
use chamber_orbits::charpoly::{characteristic_polynomial, essential_dimension, grid_fits, zaslavsky_count};
use chamber_orbits::exactmath::binomial;
use chamber_orbits::reference::{catalan_chi, lookup};
use chamber_orbits::report::{
    ChambersReport, CharpolyReport, DirectCount, Format, IsotropyReport, OrbitsReport, Render, SemiordersReport,
    VerifyReport,
};
use chamber_orbits::semiorder::{semiorder_count, semiorder_count_sequence, verify_stirling_convolution};
use chamber_orbits::verify::{run_all, VerifyOptions};

#[derive(Parser, Debug)]
#[command(
    name = "chamber-orbits",
    version,
    about = "Chambers, orbits and isotropy of Coxeter-stable hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Chamber counts of A, B and C, fiber sizes, and the Zaslavsky cross-check.
    Chambers,
    /// Characteristic polynomial by finite-field point counts, or from the stored table.
    Charpoly,
    /// Orbits of Ch(B) with sizes, stabilizer orders and fiber sizes.
    Orbits,
    /// Stabilizers, invariant points and stabilizer conjugacy classes.
    Isotropy,
    /// Semiorder counts and the Stirling convolution identities.
    Semiorders,
    /// Runs every property suite and prints a per-check table.
    Verify,
}

#[derive(Args, Debug)]
struct Common {
    /// Arrangement family.
    #[arg(long, global = true)]
    family: Option<Family>,
    /// Number of coordinates.
    #[arg(long, global = true)]
    m: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "CHAMBER_ORBITS_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Largest finite-field grid (points of the largest prime's grid) to scan.
    #[arg(long, global = true, default_value_t = 2e8)]
    budget_grid: f64,
    /// Largest chamber count to enumerate.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget_chambers: u64,
    /// Seed for randomized spot checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

/// Why a run stopped, mapped onto the exit code.
enum Failure {
    /// Bad input or work beyond a budget.
    Rejected(String),
    /// A computed result failed its own consistency check.
    Validation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 2,
            Failure::Validation(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Rejected(s) | Failure::Validation(s) => s,
        }
    }
}

/// A rendered report plus an optional validation failure discovered while building it.
struct Outcome {
    output: String,
    failure: Option<Failure>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: could not start the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(cli.command, &cli.common).and_then(|outcome| {
        write_output(&cli.common, &outcome.output)?;
        Ok(outcome.failure)
    });
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn write_output(common: &Common, output: &str) -> Result<(), Failure> {
    match &common.out {
        Some(path) => {
            fs::write(path, output).map_err(|e| Failure::Rejected(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{output}");
            Ok(())
        }
    }
}

fn run(command: Command, common: &Common) -> Result<Outcome, Failure> {
    match command {
        Command::Semiorders => cmd_semiorders(common),
        _ => {
            let family = common
                .family
                .ok_or_else(|| Failure::Rejected("--family is required".into()))?;
            let m = common.m.ok_or_else(|| Failure::Rejected("--m is required".into()))?;
            let arr = family.build(m).map_err(|e| Failure::Rejected(e.to_string()))?;
            match command {
                Command::Chambers => cmd_chambers(common, family, &arr),
                Command::Charpoly => cmd_charpoly(common, family, &arr),
                Command::Orbits => cmd_orbits(common, family, &arr),
                Command::Isotropy => cmd_isotropy(common, family, &arr),
                Command::Verify => cmd_verify(common, family, &arr),
                Command::Semiorders => unreachable!("handled above"),
            }
        }
    }
}

fn ok(output: String) -> Result<Outcome, Failure> {
    Ok(Outcome { output, failure: None })
}

fn grid_within_budget(common: &Common, arr: &Arrangement) -> bool {
    grid_fits(arr, common.budget_grid)
}

/// `|Ch(C)|` from the finite-field method when the grid fits the budget.
fn zaslavsky_if_feasible(common: &Common, arr: &Arrangement) -> Result<Option<BigInt>, Failure> {
    if !grid_within_budget(common, arr) {
        return Ok(None);
    }
    let chi = characteristic_polynomial(arr).map_err(|e| Failure::Validation(e.to_string()))?;
    Ok(Some(zaslavsky_count(&chi.chi)))
}

/// Best available estimate of `|Ch(C)|`: exact when known, otherwise the bound
/// `sum_{k <= l} binom(n, k)` on the number of regions of `n` hyperplanes in rank `l`.
fn chamber_estimate(family: Family, arr: &Arrangement, exact: Option<&BigInt>) -> BigInt {
    if let Some(n) = exact {
        return n.clone();
    }
    if let Some(entry) = lookup(family, arr.m()) {
        return entry.chambers();
    }
    if family == Family::Catalan {
        return zaslavsky_count(&catalan_chi(arr.m()));
    }
    let n = arr.len() as u64;
    (0..=essential_dimension(arr) as u64).map(|k| binomial(n, k)).sum()
}

fn within_chamber_budget(common: &Common, estimate: &BigInt) -> bool {
    estimate.to_u64().is_some_and(|n| n <= common.budget_chambers)
}

fn require_analysis(common: &Common, family: Family, arr: &Arrangement) -> Result<Analysis, Failure> {
    let estimate = chamber_estimate(family, arr, None);
    if !within_chamber_budget(common, &estimate) {
        return Err(Failure::Rejected(format!(
            "about {estimate} chambers exceed --budget-chambers {}",
            common.budget_chambers
        )));
    }
    Analysis::new(arr).map_err(|e| Failure::Validation(e.to_string()))
}

fn cmd_chambers(common: &Common, family: Family, arr: &Arrangement) -> Result<Outcome, Failure> {
    let zaslavsky = zaslavsky_if_feasible(common, arr)?;
    let estimate = chamber_estimate(family, arr, zaslavsky.as_ref());
    let analysis = if within_chamber_budget(common, &estimate) {
        Some(Analysis::new(arr).map_err(|e| Failure::Validation(e.to_string()))?)
    } else {
        None
    };
    if analysis.is_none() && zaslavsky.is_none() {
        return Err(Failure::Rejected(format!(
            "neither enumeration (about {estimate} chambers) nor point counting fits the budgets"
        )));
    }
    let report = ChambersReport::new(family, arr, analysis.as_ref(), zaslavsky.as_ref());
    let failure =
        (report.agree == Some(false)).then(|| Failure::Validation("enumeration and Zaslavsky counts disagree".into()));
    Ok(Outcome {
        output: report.render(common.format),
        failure,
    })
}

fn cmd_charpoly(common: &Common, family: Family, arr: &Arrangement) -> Result<Outcome, Failure> {
    let order = arr.group_type().order(arr.m());
    let (source, chi, threshold, primes) = if grid_within_budget(common, arr) {
        let c = characteristic_polynomial(arr).map_err(|e| Failure::Validation(e.to_string()))?;
        ("finite-field", c.chi, Some(c.threshold), c.primes_used)
    } else if let Some(entry) = lookup(family, arr.m()) {
        ("reference", entry.chi(), None, Vec::new())
    } else if family == Family::Catalan {
        ("reference", catalan_chi(arr.m()), None, Vec::new())
    } else {
        return Err(Failure::Rejected(format!(
            "the point-count grid exceeds --budget-grid {} and no stored polynomial exists",
            common.budget_grid
        )));
    };
    let chambers = zaslavsky_count(&chi);
    let orbits = &chambers / &order;
    let report = CharpolyReport::new(family, arr.m(), source, &chi, &chambers, &orbits, threshold, primes);
    let failure = (&orbits * &order != chambers)
        .then(|| Failure::Validation(format!("{chambers} chambers are not divisible by |W| = {order}")));
    Ok(Outcome {
        output: report.render(common.format),
        failure,
    })
}

fn cmd_orbits(common: &Common, family: Family, arr: &Arrangement) -> Result<Outcome, Failure> {
    let an = require_analysis(common, family, arr)?;
    ok(OrbitsReport::new(family, &an).render(common.format))
}

fn cmd_isotropy(common: &Common, family: Family, arr: &Arrangement) -> Result<Outcome, Failure> {
    let an = require_analysis(common, family, arr)?;
    ok(IsotropyReport::new(family, &an).render(common.format))
}

fn cmd_verify(common: &Common, family: Family, arr: &Arrangement) -> Result<Outcome, Failure> {
    let an = require_analysis(common, family, arr)?;
    let opts = VerifyOptions {
        seed: common.seed,
        grid_budget: common.budget_grid,
        ..VerifyOptions::default()
    };
    let checks = run_all(&an, Some(family), &opts);
    let report = VerifyReport::new(family, arr.m(), &checks);
    let failed: Vec<&str> = checks.iter().filter(|c| c.failed()).map(|c| c.name).collect();
    let failure = (!failed.is_empty()).then(|| Failure::Validation(format!("failed checks: {}", failed.join(", "))));
    Ok(Outcome {
        output: report.render(common.format),
        failure,
    })
}

/// Counts, the two Stirling identities, and direct enumeration of `Ch(B_k)`
/// for every `k <= m` whose chamber count fits the budget.
fn cmd_semiorders(common: &Common) -> Result<Outcome, Failure> {
    if let Some(f) = common.family.filter(|&f| f != Family::Catalan) {
        return Err(Failure::Rejected(format!(
            "semiorders applies to the catalan family, not {f}"
        )));
    }
    let m = common.m.ok_or_else(|| Failure::Rejected("--m is required".into()))?;
    if m == 0 {
        return Err(Failure::Rejected("--m must be at least 1".into()));
    }
    let sequence = semiorder_count_sequence(m);
    let rows = verify_stirling_convolution(m);
    let mut direct = Vec::new();
    for k in Family::Catalan.min_m()..=m {
        let expected = semiorder_count(k);
        if !within_chamber_budget(common, &expected) {
            break;
        }
        let arr = Family::Catalan.build(k).map_err(|e| Failure::Rejected(e.to_string()))?;
        let chambers_b = enumerate_hyperplanes(arr.ambient(), arr.stable_part()).len();
        direct.push(DirectCount {
            m: k,
            chambers_b,
            agree: BigInt::from(chambers_b) == expected,
            expected: chamber_orbits::charpoly::json_integer(&expected),
        });
    }
    let report = SemiordersReport::new(m, &sequence, &rows, direct);
    let failure = (!report.holds()).then(|| Failure::Validation("a semiorder identity failed".into()));
    Ok(Outcome {
        output: report.render(common.format),
        failure,
    })
}

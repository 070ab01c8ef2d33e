//! Command-line surface: argument parsing, the four commands and report
//! rendering.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::densities::{
    census_formula, density_table, extension_census, fmt_rational, mass_identity_check, orbital_volume_bruteforce,
    orbital_volume_closed, aggregate_volume_check,
};
use crate::error::{Error, Result};
use crate::global::{ClassDataCache, ConditionSet};
use crate::mean_value::{convergence_report, predicted_constant, Checkpoint};
use crate::orbits::{
    congruence_count_formula, congruence_solution_count, coset_normal_form_check, dx_subset_orbit_check,
    nx_order, nx_order_formula, solution_set_characterization, stabilizer_order, standard_representatives,
    StandardRep,
};
use crate::residue::{is_prime, SquareClassLabel};

/// Primes accepted by `verify-local`.
pub const VERIFY_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Tolerance on the last checkpoint ratio of `mean-value`.
pub const MEAN_VALUE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyLocal,
    MeanValue,
    Constant,
    Census,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyLocal => "verify-local",
            Command::MeanValue => "mean-value",
            Command::Constant => "constant",
            Command::Census => "census",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub primes: Vec<u64>,
    #[serde(rename = "X")]
    pub x: u64,
    pub conditions: ConditionSet,
    pub format: OutputFormat,
    pub cache: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Accepts plain integers and scientific notation such as `1e6`.
pub fn parse_bound(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= 1e15) {
        return Err(format!("'{s}' is not a non-negative integer"));
    }
    Ok(f as u64)
}

fn parse_prime(s: &str) -> std::result::Result<u64, String> {
    let p: u64 = s.trim().parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if !is_prime(p) {
        return Err(format!("{p} is not a prime"));
    }
    Ok(p)
}

fn parse_conditions(s: &str) -> std::result::Result<ConditionSet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "binquad", version, about = "Local densities of binary quadratic forms and mean values of h·R")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Comma-separated primes.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_prime)]
    pub primes: Option<Vec<u64>>,
    /// Discriminant bound, e.g. 100000 or 1e6.
    #[arg(long = "X", global = true, value_parser = parse_bound)]
    pub x: Option<u64>,
    /// Local conditions, e.g. "inf=C,2=ram:-1".
    #[arg(long, global = true, value_parser = parse_conditions)]
    pub cond: Option<ConditionSet>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// CSV cache of sweep records.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CliCommand {
    /// Exact local identities at the given primes.
    VerifyLocal,
    /// Conditioned sums of h·R against the predicted constant.
    MeanValue,
    /// The predicted constant for a set of local conditions.
    Constant,
    /// Quadratic extensions, densities and mass identities per prime.
    Census,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let command = match self.command {
            CliCommand::VerifyLocal => Command::VerifyLocal,
            CliCommand::MeanValue => Command::MeanValue,
            CliCommand::Constant => Command::Constant,
            CliCommand::Census => Command::Census,
        };
        let c = self.common;
        RunConfig {
            command,
            primes: c.primes.unwrap_or_else(|| vec![2, 3, 5]),
            x: c.x.unwrap_or(100_000),
            conditions: c.cond.unwrap_or_else(|| "inf=C".parse().expect("valid default")),
            format: c.format,
            cache: c.cache,
            workers: c.workers,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub anchor: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl ReportItem {
    fn new(anchor: impl Into<String>, expected: impl ToString, got: impl ToString) -> Self {
        let (expected, got) = (expected.to_string(), got.to_string());
        ReportItem {
            anchor: anchor.into(),
            pass: expected == got,
            expected,
            got,
        }
    }

    fn checked(anchor: impl Into<String>, expected: impl ToString, got: impl ToString, pass: bool) -> Self {
        ReportItem {
            anchor: anchor.into(),
            expected: expected.to_string(),
            got: got.to_string(),
            pass,
        }
    }

    fn failed(anchor: impl Into<String>, expected: impl ToString, err: &Error) -> Self {
        Self::checked(anchor, expected, format!("error: {err}"), false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub items: Vec<ReportItem>,
    pub summary: Summary,
}

impl Report {
    fn new(config: &RunConfig, items: Vec<ReportItem>, checkpoints: Vec<Checkpoint>) -> Self {
        let passed = items.iter().filter(|i| i.pass).count();
        Report {
            command: config.command.name().to_string(),
            config: config.clone(),
            summary: Summary {
                total: items.len(),
                passed,
                failed: items.len() - passed,
                all_pass: passed == items.len(),
                checkpoints,
            },
            items,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.summary.all_pass {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string())),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["anchor", "expected", "got", "pass"])?;
                for i in &self.items {
                    w.write_record([&i.anchor, &i.expected, &i.got, &i.pass.to_string()])?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                Ok(String::from_utf8(bytes).expect("utf-8"))
            }
            OutputFormat::Text => Ok(self.text_table()),
        }
    }

    fn text_table(&self) -> String {
        let header = ["anchor", "expected", "got", "pass"];
        let rows: Vec<[String; 4]> = self
            .items
            .iter()
            .map(|i| {
                let mark = if i.pass { "ok" } else { "FAIL" };
                [i.anchor.clone(), i.expected.clone(), i.got.clone(), mark.to_string()]
            })
            .collect();
        let mut widths = header.map(|h| h.chars().count());
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: [&str; 4]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, header);
        for r in &rows {
            line(&mut out, [&r[0], &r[1], &r[2], &r[3]]);
        }
        if !self.summary.checkpoints.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:>12}  {:>18}  {:>12}  {:>12}  {:>8}",
                "X", "sum hR", "sum/X^1.5", "predicted", "ratio"
            );
            for c in &self.summary.checkpoints {
                let _ = writeln!(
                    out,
                    "{:>12}  {:>18.6}  {:>12.6}  {:>12.6}  {:>8.4}",
                    c.x, c.empirical_sum, c.normalized, c.predicted, c.ratio
                );
            }
        }
        let _ = writeln!(
            out,
            "\n{} of {} passed",
            self.summary.passed, self.summary.total
        );
        out
    }
}

fn rep_tag(rep: &StandardRep) -> String {
    format!("p={} {}", rep.p, rep.label())
}

fn local_items(rep: &StandardRep) -> Vec<ReportItem> {
    let mut items = Vec::new();
    let tag = rep_tag(rep);
    let (p, n) = (rep.p, rep.n);
    let ring = rep.working_ring();
    let q = p as u128;

    match (orbital_volume_closed(rep), orbital_volume_bruteforce(rep, n)) {
        (Ok(closed), Ok(bfs)) => items.push(ReportItem::checked(
            format!("orbital-volume {tag}"),
            format!("vol(Kx) = {} (closed)", fmt_rational(&closed)),
            format!("{} (BFS)", fmt_rational(&bfs)),
            closed == bfs,
        )),
        (Err(e), _) | (_, Err(e)) => items.push(ReportItem::failed(format!("orbital-volume {tag}"), "", &e)),
    }

    let stab_formula = 2 * q.pow(rep.delta) * q.pow(2 * n - 1) * (q - 1);
    match stabilizer_order(&rep.form, &ring) {
        Ok(s) => items.push(ReportItem::new(format!("stabilizer-order {tag}"), stab_formula, s)),
        Err(e) => items.push(ReportItem::failed(format!("stabilizer-order {tag}"), stab_formula, &e)),
    }
    let nx_formula = nx_order_formula(p, n);
    match nx_order(&rep.form, &ring) {
        Ok(s) => items.push(ReportItem::new(format!("nx-order {tag}"), nx_formula, s)),
        Err(e) => items.push(ReportItem::failed(format!("nx-order {tag}"), nx_formula, &e)),
    }

    let cong = congruence_count_formula(p, rep.delta);
    match congruence_solution_count(&rep.form, &ring) {
        Ok(c) => items.push(ReportItem::new(format!("congruence-count {tag}"), cong, c)),
        Err(e) => items.push(ReportItem::failed(format!("congruence-count {tag}"), cong, &e)),
    }
    match solution_set_characterization(rep) {
        Ok(v) => items.push(ReportItem::checked(
            format!("congruence-characterization {tag}"),
            format!("set equality, {} points, disjoint branches", v.predicted),
            format!(
                "{} points, branches {:?}, disjoint {}, equal {}",
                v.brute_force, v.branch_sizes, v.branches_disjoint, v.equal
            ),
            v.equal && v.branches_disjoint,
        )),
        Err(e) => items.push(ReportItem::failed(format!("congruence-characterization {tag}"), "", &e)),
    }
    match coset_normal_form_check(&rep.form, &ring) {
        Ok(v) => items.push(ReportItem::checked(
            format!("coset-normal-form {tag}"),
            format!("{} = {} x {}", v.nx * v.representatives, v.nx, v.representatives),
            format!("stabilizer {}", v.stabilizer),
            v.pass,
        )),
        Err(e) => items.push(ReportItem::failed(format!("coset-normal-form {tag}"), "", &e)),
    }
    match dx_subset_orbit_check(&rep.form, p, n, n + 1) {
        Ok(v) => items.push(ReportItem::checked(
            format!("disc-in-orbit {tag} level {}", n + 1),
            format!("{} lifts in orbit", v.lifts),
            format!("{} lifts in orbit", v.in_orbit),
            v.pass,
        )),
        Err(e) => items.push(ReportItem::failed(format!("disc-in-orbit {tag}"), "", &e)),
    }
    items
}

/// Every exact local identity at the given primes, in a fixed order.
pub fn verify_local_items(primes: &[u64]) -> Result<Vec<ReportItem>> {
    let mut items = Vec::new();
    for &p in primes {
        if !VERIFY_PRIMES.contains(&p) {
            return Err(Error::InvalidArgument(format!("verify-local supports primes {VERIFY_PRIMES:?}, got {p}")));
        }
        for rep in standard_representatives(p)?.iter().filter(|r| r.is_ramified()) {
            items.extend(local_items(rep));
        }
    }
    Ok(items)
}

pub fn census_items(primes: &[u64]) -> Result<Vec<ReportItem>> {
    let mut items = Vec::new();
    for &p in primes {
        let m = u32::from(p == 2);
        let census = extension_census(p)?;
        let extensions = SquareClassLabel::all(p).len() - 1;
        items.push(ReportItem::new(
            format!("extension-count p={p}"),
            if p == 2 { 7 } else { 3 },
            extensions,
        ));
        for (&delta, &count) in &census {
            let expected = census_formula(p, m, delta).map_or("none".to_string(), |c| c.to_string());
            items.push(ReportItem::new(format!("extension-census p={p} delta={delta}"), expected, count));
        }
        for s in aggregate_volume_check(p)? {
            items.push(ReportItem::checked(
                format!("aggregate-volume p={p} delta={} ({} reps)", s.delta, s.reps),
                fmt_rational(&s.formula),
                fmt_rational(&s.sum),
                s.pass(),
            ));
        }
        let mass = mass_identity_check(p)?;
        items.push(ReportItem::checked(
            format!("mass-identity q={p}"),
            fmt_rational(&mass.euler_factor),
            fmt_rational(&mass.sum),
            mass.pass(),
        ));
        for row in density_table(p) {
            items.push(ReportItem::checked(
                format!("local-density p={p} {} delta={}", row.algebra, row.delta),
                &row.e_v,
                &row.e_v,
                true,
            ));
        }
    }
    Ok(items)
}

pub fn constant_items(set: &ConditionSet) -> Result<Vec<ReportItem>> {
    let c = predicted_constant(set)?;
    let mut items = vec![
        ReportItem::new("prefactor", "π^2/9", &c.prefactor),
        ReportItem::checked(format!("archimedean {}", c.archimedean), &c.archimedean_factor, &c.archimedean_factor, true),
    ];
    for f in &c.local_factors {
        let v = fmt_rational(&f.value);
        items.push(ReportItem::checked(format!("local-density p={} {}", f.p, f.algebra), &v, &v, true));
    }
    let ep = &c.euler_product;
    items.push(ReportItem::checked(
        format!("euler-product P_cut={} excluding {:?}", ep.p_cut, ep.excluded),
        format!("tail |log| <= {:.3e}", ep.tail_bound),
        format!("{:.10}", ep.value),
        ep.value.is_finite() && ep.value > 0.0,
    ));
    items.push(ReportItem::checked(
        "predicted-constant",
        format!("{} x euler-product", c.exact_part),
        format!("{:.10}", c.total),
        c.total.is_finite() && c.total > 0.0,
    ));
    Ok(items)
}

/// Powers of ten from 100 up to `x`, ending at `x`.
pub fn checkpoints_for(x: u64) -> Vec<u64> {
    let mut xs: Vec<u64> = std::iter::successors(Some(100u64), |v| v.checked_mul(10))
        .take_while(|&v| v < x)
        .collect();
    xs.push(x.max(1));
    xs
}

pub fn mean_value_items(config: &RunConfig) -> Result<(Vec<ReportItem>, Vec<Checkpoint>)> {
    let mut cache = match &config.cache {
        Some(path) => ClassDataCache::open(path)?,
        None => ClassDataCache::in_memory(),
    };
    let report = convergence_report(&mut cache, &checkpoints_for(config.x), &config.conditions)?;
    let last = report.checkpoints.len() - 1;
    let items = report
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let ok = c.ratio.is_finite() && c.ratio > 0.0;
            let pass = if i == last {
                ok && (c.ratio - 1.0).abs() <= MEAN_VALUE_TOLERANCE
            } else {
                ok
            };
            let expected = if i == last {
                format!("ratio 1 ± {MEAN_VALUE_TOLERANCE}")
            } else {
                "finite positive ratio".to_string()
            };
            ReportItem::checked(
                format!("mean-value {} X={}", report.conditions, c.x),
                expected,
                format!("sum {} ratio {:.6}", c.empirical_sum, c.ratio),
                pass,
            )
        })
        .collect();
    Ok((items, report.checkpoints))
}

/// Runs one command on the configured worker pool.
pub fn run(config: &RunConfig) -> Result<Report> {
    let work = || -> Result<Report> {
        let (items, checkpoints) = match config.command {
            Command::VerifyLocal => (verify_local_items(&config.primes)?, vec![]),
            Command::Census => (census_items(&config.primes)?, vec![]),
            Command::Constant => (constant_items(&config.conditions)?, vec![]),
            Command::MeanValue => mean_value_items(config)?,
        };
        Ok(Report::new(config, items, checkpoints))
    };
    match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work),
        None => work(),
    }
}

//! Command-line surface for `cf-lab-core`.

pub mod report;

use std::path::PathBuf;

use cf_lab_core::cf::{
    alternate_rep, continuant_trace, expand, is_avg_bounded, max_prefix_excess,
};
use cf_lab_core::density::{corollary_chain_check, f_set_shard, DensitySummary};
use cf_lab_core::enumeration::{catalan, exponent_table_shard, lower_bound_certificate};
use cf_lab_core::growth::{growth_root, pell_like};
use cf_lab_core::shifting::normalize;
use cf_lab_core::verify::{run_all, Scale};
use cf_lab_core::{BoundParameter, CfError, Natural, PartialQuotientSeq, ReducedFraction, Shard};
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::report::{Cell, Format, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("internal error: {0}")]
    Internal(String),
    /// The command ran but found invariant violations; carries its output.
    #[error("{summary}")]
    Violations { summary: String, output: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) | CliError::Violations { .. } => 1,
        }
    }
}

impl From<CfError> for CliError {
    fn from(e: CfError) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Continued fractions with partial quotients bounded in average.
///
/// Every command prints one table: line-delimited JSON objects (one per
/// row) or CSV with a header row. Integers are printed in full decimal and
/// reals with 6 decimals. CF_LAB_THREADS caps worker threads.
#[derive(Debug, Parser)]
#[command(name = "cf-lab", version)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format: json or csv.
    #[arg(long, global = true, default_value = "json")]
    pub format: Format,
    /// Write the table to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArg {
    /// Average bound B (at least 2).
    #[arg(long = "bound", default_value_t = 2)]
    pub bound: u64,
}

impl BoundArg {
    fn get(&self) -> Result<BoundParameter, CliError> {
        Ok(BoundParameter::new(self.bound)?)
    }
}

#[derive(Debug, Args)]
pub struct ShardArgs {
    /// Split the work into this many shards.
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    /// Which shard (0-based) this run computes.
    #[arg(long, default_value_t = 0)]
    pub shard: usize,
}

impl ShardArgs {
    fn get(&self) -> Result<Shard, CliError> {
        Ok(Shard::new(self.shard, self.shards)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand k/n. Columns: k, n, bound, sequence, alternate, continuant,
    /// trace, max_prefix_average, max_prefix_excess, avg_bounded,
    /// alternate_avg_bounded.
    Expand {
        k: String,
        n: String,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Shift an average-bounded sequence to a uniformly bounded one, one row
    /// per step. Columns: step, case, t, s, before, after,
    /// continuant_before, continuant_after.
    Shift {
        /// Comma-separated partial quotients, e.g. 1,2,3.
        sequence: String,
        #[command(flatten)]
        bound: BoundArg,
    },
    /// Exact counts by continuant, one row per grid point. Columns: n,
    /// bound, shard, shards, avg_count, uniform_count, avg_exponent,
    /// uniform_exponent, cert_m, cert_sequence_count, cert_exponent.
    /// With several shards the counts are partial and exponents are empty;
    /// summing a column over all shards gives the full count.
    Count {
        /// Comma-separated ascending list of n.
        #[arg(long, conflicts_with = "max_n")]
        grid: Option<String>,
        /// Use the grid 10, 100, ... up to and including N.
        #[arg(long, value_name = "N")]
        max_n: Option<String>,
        #[command(flatten)]
        bound: BoundArg,
        #[command(flatten)]
        shards: ShardArgs,
    },
    /// Catalan numbers. Columns: j, catalan.
    Catalan {
        j: u64,
        /// Print every j from 0 up to J.
        #[arg(long)]
        upto: bool,
    },
    /// Pell-like numbers F_k = B F_{k-1} + F_{k-2}. Columns: k, bound, f_k,
    /// growth_root.
    Pell {
        k: usize,
        #[command(flatten)]
        bound: BoundArg,
        /// Print every k from 0 up to K.
        #[arg(long)]
        upto: bool,
    },
    /// Survey denominators in [2, N] with a witness k. Columns: kind, n, k,
    /// sequence, representation, count, exponent, checked, violations,
    /// sbar_third, denominators_squared, inequality_holds. Rows of kind
    /// "witness", then one "summary" row, then a "corollary" row when
    /// requested.
    Density {
        n: u64,
        #[command(flatten)]
        bound: BoundArg,
        /// Print only the summary row.
        #[arg(long)]
        summary: bool,
        /// Also check the sub-claims of the fraction-set construction for N.
        #[arg(long)]
        verify_corollary: bool,
        #[command(flatten)]
        shards: ShardArgs,
    },
    /// Run the property suite. Columns: check, cases, violations, passed.
    Verify {
        /// Smaller domains for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
}

/// Runs a parsed command and renders its table.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let table = match &cli.command {
        Command::Expand { k, n, bound } => cmd_expand(k, n, bound.get()?)?,
        Command::Shift { sequence, bound } => cmd_shift(sequence, bound.get()?)?,
        Command::Count {
            grid,
            max_n,
            bound,
            shards,
        } => {
            let grid = match (grid, max_n) {
                (Some(g), None) => parse_grid(g)?,
                (None, Some(n)) => decade_grid(&parse_natural(n)?),
                _ => return Err(CliError::Usage("give --grid or --max-n".into())),
            };
            cmd_count(&grid, bound.get()?, shards.get()?)?
        }
        Command::Catalan { j, upto } => cmd_catalan(*j, *upto),
        Command::Pell { k, bound, upto } => cmd_pell(*k, bound.get()?, *upto)?,
        Command::Density {
            n,
            bound,
            summary,
            verify_corollary,
            shards,
        } => cmd_density(
            *n,
            bound.get()?,
            *summary,
            *verify_corollary,
            shards.get()?,
            cli.output.format,
        )?,
        Command::Verify { quick } => {
            let table = cmd_verify(if *quick { Scale::Quick } else { Scale::Full })?;
            let failed = table
                .rows()
                .iter()
                .any(|row| row[3] == Cell::Bool(false));
            if failed {
                return Err(CliError::Violations {
                    summary: "property suite reported violations".into(),
                    output: table.render(cli.output.format),
                });
            }
            table
        }
    };
    Ok(table.render(cli.output.format))
}

fn parse_natural(s: &str) -> Result<Natural, CliError> {
    s.trim()
        .parse::<Natural>()
        .map_err(|_| CliError::Usage(format!("not a nonnegative integer: {s:?}")))
}

fn parse_grid(s: &str) -> Result<Vec<Natural>, CliError> {
    s.split(',')
        .map(parse_natural)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("malformed grid {s:?}")))
}

fn decade_grid(max_n: &Natural) -> Vec<Natural> {
    let mut grid = Vec::new();
    let mut p = Natural::from(10u8);
    while p < *max_n {
        grid.push(p.clone());
        p *= 10u8;
    }
    grid.push(max_n.clone());
    grid
}

pub fn cmd_expand(k: &str, n: &str, bound: BoundParameter) -> Result<Table, CliError> {
    let f = ReducedFraction::new(parse_natural(k)?, parse_natural(n)?)?;
    let s = expand(&f)?;
    let alt = alternate_rep(&s)?;
    let trace = continuant_trace::<Natural>(&s)?;
    let mut sum = 0u128;
    let max_avg = s
        .terms()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            sum += u128::from(a);
            sum as f64 / (i + 1) as f64
        })
        .fold(f64::MIN, f64::max);
    let mut table = Table::new(&[
        "k",
        "n",
        "bound",
        "sequence",
        "alternate",
        "continuant",
        "trace",
        "max_prefix_average",
        "max_prefix_excess",
        "avg_bounded",
        "alternate_avg_bounded",
    ]);
    table.push(vec![
        Cell::int(f.numerator()),
        Cell::int(f.denominator()),
        Cell::int(bound),
        Cell::text(&s),
        Cell::text(&alt),
        Cell::int(trace.last()),
        Cell::text(&trace),
        Cell::real(Some(max_avg)),
        Cell::int(max_prefix_excess(&s, bound)),
        Cell::Bool(is_avg_bounded(&s, bound)),
        Cell::Bool(is_avg_bounded(&alt, bound)),
    ]);
    Ok(table)
}

pub fn cmd_shift(sequence: &str, bound: BoundParameter) -> Result<Table, CliError> {
    let s: PartialQuotientSeq = sequence.parse()?;
    let (_, steps) = normalize(&s, bound)?;
    let mut table = Table::new(&[
        "step",
        "case",
        "t",
        "s",
        "before",
        "after",
        "continuant_before",
        "continuant_after",
    ]);
    for (i, st) in steps.iter().enumerate() {
        table.push(vec![
            Cell::int(i + 1),
            Cell::text(st.case.tag()),
            st.case.t().map_or(Cell::Empty, Cell::int),
            st.case.s().map_or(Cell::Empty, Cell::int),
            Cell::text(&st.before),
            Cell::text(&st.after),
            Cell::int(&st.continuant_before),
            Cell::int(&st.continuant_after),
        ]);
    }
    Ok(table)
}

pub fn cmd_count(grid: &[Natural], bound: BoundParameter, shard: Shard) -> Result<Table, CliError> {
    let records = exponent_table_shard(grid, bound, shard)?;
    let partial = shard.count() > 1;
    let mut table = Table::new(&[
        "n",
        "bound",
        "shard",
        "shards",
        "avg_count",
        "uniform_count",
        "avg_exponent",
        "uniform_exponent",
        "cert_m",
        "cert_sequence_count",
        "cert_exponent",
    ]);
    for r in records {
        let cert = if bound.get() == 2 && r.n >= Natural::from(5u8) {
            Some(lower_bound_certificate(&r.n)?)
        } else {
            None
        };
        let exp = |e: Option<f64>| if partial { Cell::Empty } else { Cell::real(e) };
        table.push(vec![
            Cell::int(&r.n),
            Cell::int(bound),
            Cell::int(shard.index()),
            Cell::int(shard.count()),
            Cell::int(&r.avg_count),
            Cell::int(&r.uniform_count),
            exp(r.avg_exponent),
            exp(r.uniform_exponent),
            cert.as_ref().map_or(Cell::Empty, |c| Cell::int(c.m)),
            cert.as_ref().map_or(Cell::Empty, |c| Cell::int(&c.sequence_count)),
            cert.as_ref().map_or(Cell::Empty, |c| Cell::real(c.implied_exponent)),
        ]);
    }
    Ok(table)
}

pub fn cmd_catalan(j: u64, upto: bool) -> Table {
    let mut table = Table::new(&["j", "catalan"]);
    let start = if upto { 0 } else { j };
    for i in start..=j {
        table.push(vec![Cell::int(i), Cell::int(catalan(i))]);
    }
    table
}

pub fn cmd_pell(k: usize, bound: BoundParameter, upto: bool) -> Result<Table, CliError> {
    let root = growth_root(bound).to_string();
    let mut table = Table::new(&["k", "bound", "f_k", "growth_root"]);
    let start = if upto { 0 } else { k };
    for i in start..=k {
        let f: Natural = pell_like(bound, i)?;
        table.push(vec![
            Cell::int(i),
            Cell::int(bound),
            Cell::int(f),
            Cell::text(&root),
        ]);
    }
    Ok(table)
}

const DENSITY_COLUMNS: &[&str] = &[
    "kind",
    "n",
    "k",
    "sequence",
    "representation",
    "count",
    "exponent",
    "checked",
    "violations",
    "sbar_third",
    "denominators_squared",
    "inequality_holds",
];

pub fn cmd_density(
    n_max: u64,
    bound: BoundParameter,
    summary_only: bool,
    verify_corollary: bool,
    shard: Shard,
    format: Format,
) -> Result<Table, CliError> {
    let witnesses = f_set_shard(n_max, bound, shard)?;
    let mut table = Table::new(DENSITY_COLUMNS);
    if !summary_only {
        for w in &witnesses {
            let mut row = vec![
                Cell::text("witness"),
                Cell::int(w.n),
                Cell::int(w.k),
                Cell::text(&w.sequence),
                Cell::text(w.representation.as_str()),
            ];
            row.resize(DENSITY_COLUMNS.len(), Cell::Empty);
            table.push(row);
        }
    }
    let summary = DensitySummary::from_witnesses(n_max, bound, &witnesses);
    let mut row = vec![
        Cell::text("summary"),
        Cell::int(n_max),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::int(summary.count),
        if shard.count() > 1 {
            Cell::Empty
        } else {
            Cell::real(summary.exponent)
        },
    ];
    row.resize(DENSITY_COLUMNS.len(), Cell::Empty);
    table.push(row);
    if verify_corollary {
        let r = corollary_chain_check(n_max)?;
        let mut row = vec![Cell::text("corollary"), Cell::int(n_max)];
        row.resize(7, Cell::Empty);
        row.extend([
            Cell::int(r.claims.checked),
            Cell::int(r.claims.violations.len()),
            Cell::int(&r.sbar_third),
            Cell::int(&r.denominators_squared),
            Cell::Bool(r.inequality_holds),
        ]);
        table.push(row);
        if !r.claims.violations.is_empty() {
            return Err(CliError::Violations {
                summary: format!("{} corollary sub-claim violations", r.claims.violations.len()),
                output: table.render(format),
            });
        }
    }
    Ok(table)
}

pub fn cmd_verify(scale: Scale) -> Result<Table, CliError> {
    let mut table = Table::new(&["check", "cases", "violations", "passed"]);
    for outcome in run_all(scale)? {
        table.push(vec![
            Cell::text(outcome.name),
            Cell::int(outcome.cases),
            Cell::int(outcome.violations),
            Cell::Bool(outcome.passed()),
        ]);
    }
    Ok(table)
}

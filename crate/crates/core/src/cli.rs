//! The `clh` command line: `prob`, `table`, `sample` and `verify`.
//!
//! Everything runs in-process through [`run`], which returns the rendered
//! output and the exit code; the binary only prints.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{bound_string, decimal_string, half_ulp, Prime, Rational};
use crate::conjugacy::exact_marginal;
use crate::error::{Error, Result};
use crate::fplinalg::{cokernel_sample, quotient_by_random_elements, random_gl};
use crate::measure::{
    cl_prob, eval_to_precision, mehnert_moment, prob_exponent_le, prob_order, prob_rank, prob_rank_order, u_prob,
    MeasureContext,
};
use crate::partitions::{enumerate_partitions, Partition};
use crate::qseries::{eisenstein, EvalResult};
use crate::stats::{stats_compare, Comparison, SampleSummary, SamplerKind};
use crate::verify::{run_suite, Suite};
use crate::young::{lattice_walk_law, p_alg_output_n, LatticeWalk, YtabSampler, DEFAULT_EPS};

#[derive(Debug, Parser)]
#[command(name = "clh", version, about = "Cohen-Lenstra measure on finite abelian p-groups")]
pub struct Cli {
    /// The prime p.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u64,
    /// Seed for sampling commands (required there).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Decimal digits to print; refused when the certified bound is too wide.
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// A single probability with its certified error bound.
    Prob(ProbArgs),
    /// Tables of moments or distributions across primes.
    Table(TableArgs),
    /// Run a sampler and compare it with its exact law.
    Sample(SampleArgs),
    /// Run the cross-verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stat {
    Order,
    Rank,
    #[value(name = "rank_order")]
    RankOrder,
    #[value(name = "exponent_le")]
    ExponentLe,
    Uprob,
    Group,
}

#[derive(Debug, Args)]
pub struct ProbArgs {
    #[arg(long, value_enum)]
    pub stat: Stat,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
    #[arg(long)]
    pub u: Option<u32>,
    /// Group type as a partition, e.g. `2+1` or `()`.
    #[arg(long)]
    pub partition: Option<Partition>,
    /// Truncation order of the infinite products.
    #[arg(long)]
    pub trunc: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Moments,
    #[value(name = "order_dist")]
    OrderDist,
    #[value(name = "rank_dist")]
    RankDist,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(value_enum)]
    pub kind: TableKind,
    /// Comma-separated primes; defaults to `--p`.
    #[arg(long, value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Last row index for the distribution tables.
    #[arg(long, default_value_t = 5)]
    pub max: u32,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(value_enum)]
    pub sampler: SamplerKind,
    #[arg(long, default_value_t = 10_000)]
    pub count: u64,
    /// Truncation of the tableau chain (ytab, uquotient).
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    /// Matrix dimension (matrix, cokernel).
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    /// Entries live in Z/p^K (cokernel).
    #[arg(long, default_value_t = 12)]
    pub k: u32,
    /// Number of random elements to quotient by (uquotient).
    #[arg(long, default_value_t = 1)]
    pub u: u32,
    /// Partitions larger than this are pooled into one bucket.
    #[arg(long, default_value_t = 4)]
    pub bucket: u32,
    /// Also write every draw as CSV to this file.
    #[arg(long)]
    pub stream: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

/// Rendered output plus process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command. Parse
/// errors and command errors are rendered into the outcome with code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli).unwrap_or_else(|e| Outcome { output: format!("error: {e}\n"), code: 2 }),
        Err(e) => Outcome { output: e.render().to_string(), code: if e.use_stderr() { 2 } else { 0 } },
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let p = Prime::new(cli.p)?;
    let outcome = match &cli.command {
        Command::Prob(args) => Outcome { output: cmd_prob(args, p, cli.digits.unwrap_or(6), cli.format)?, code: 0 },
        Command::Table(args) => {
            let primes = if args.primes.is_empty() { vec![cli.p] } else { args.primes.clone() };
            let primes = primes.into_iter().map(Prime::new).collect::<Result<Vec<_>>>()?;
            let table = cmd_table(args.kind, &primes, cli.digits.unwrap_or(4), args.max)?;
            Outcome { output: table.render(cli.format), code: 0 }
        }
        Command::Sample(args) => {
            let seed = cli.seed.ok_or_else(|| Error::InvalidParameter("sampling needs --seed".into()))?;
            Outcome { output: cmd_sample(args, p, seed, cli.format)?, code: 0 }
        }
        Command::Verify(args) => {
            let checks = run_suite(args.suite)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            let mut out = String::new();
            for c in &checks {
                writeln!(out, "{c}").unwrap();
            }
            writeln!(out, "{} checks, {} failed", checks.len(), failed).unwrap();
            Outcome { output: out, code: i32::from(failed > 0) }
        }
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, &outcome.output)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
        return Ok(Outcome { output: String::new(), code: outcome.code });
    }
    Ok(outcome)
}

fn need(x: Option<u32>, flag: &str, stat: &str) -> Result<u32> {
    x.ok_or_else(|| Error::InvalidParameter(format!("--stat {stat} needs --{flag}")))
}

/// Decimal rendering that refuses to print digits the bound does not certify.
pub fn certified_decimal(r: &EvalResult, digits: u32) -> Result<String> {
    if r.tail_bound >= half_ulp(digits) {
        return Err(Error::Uncertified { bound: bound_string(&r.tail_bound), digits });
    }
    Ok(decimal_string(&r.value, digits))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbReport {
    pub stat: String,
    pub p: u64,
    /// Exact midpoint of the certified interval.
    pub value: String,
    pub decimal: String,
    pub tail_bound: String,
}

pub fn cmd_prob(args: &ProbArgs, p: Prime, digits: u32, format: Format) -> Result<String> {
    let mut ctx = MeasureContext::for_prime(p);
    if let Some(t) = args.trunc {
        ctx.trunc = t;
    }
    let (label, result) = match args.stat {
        Stat::Order => {
            let n = need(args.n, "n", "order")?;
            (format!("order n={n}"), prob_order(n, &ctx))
        }
        Stat::Rank => {
            let r = need(args.r, "r", "rank")?;
            (format!("rank r={r}"), prob_rank(r, &ctx))
        }
        Stat::RankOrder => {
            let n = need(args.n, "n", "rank_order")?;
            let r = need(args.r, "r", "rank_order")?;
            (format!("rank_order n={n} r={r}"), prob_rank_order(n, r, &ctx))
        }
        Stat::ExponentLe => {
            let e = need(args.e, "e", "exponent_le")?;
            (format!("exponent_le e={e}"), prob_exponent_le(e, &ctx))
        }
        Stat::Uprob => {
            let u = need(args.u, "u", "uprob")?;
            let lam = args.partition.clone().ok_or_else(|| Error::InvalidParameter("--stat uprob needs --partition".into()))?;
            (format!("uprob u={u} partition={lam}"), u_prob(&lam, u, &ctx))
        }
        Stat::Group => {
            let lam = args.partition.clone().ok_or_else(|| Error::InvalidParameter("--stat group needs --partition".into()))?;
            (format!("group partition={lam}"), cl_prob(&lam, &ctx))
        }
    };
    let report = ProbReport {
        stat: label,
        p: p.get(),
        value: result.value.to_string(),
        decimal: certified_decimal(&result, digits)?,
        tail_bound: bound_string(&result.tail_bound),
    };
    Ok(match format {
        Format::Json => serde_json::to_string(&report).expect("plain data") + "\n",
        Format::Csv => format!(
            "stat,p,decimal,tail_bound,value\n{},{},{},{},{}\n",
            report.stat, report.p, report.decimal, report.tail_bound, report.value
        ),
        Format::Text => format!(
            "{} (p={})\ndecimal: {}\ntail_bound: {}\nvalue: {}\n",
            report.stat, report.p, report.decimal, report.tail_bound, report.value
        ),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub kind: TableKind,
    pub digits: u32,
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string(self).expect("plain data") + "\n",
            Format::Csv => {
                let mut out = format!("row,{}\n", self.columns.join(","));
                for row in &self.rows {
                    writeln!(out, "{},{}", row.label, row.values.join(",")).unwrap();
                }
                out
            }
            Format::Text => {
                let width = self
                    .rows
                    .iter()
                    .flat_map(|r| r.values.iter())
                    .chain(self.columns.iter())
                    .map(String::len)
                    .max()
                    .unwrap_or(0);
                let lead = self.rows.iter().map(|r| r.label.len()).max().unwrap_or(0);
                let mut out = format!("{:lead$}", "");
                for c in &self.columns {
                    write!(out, "  {c:>width$}").unwrap();
                }
                out.push('\n');
                for row in &self.rows {
                    write!(out, "{:lead$}", row.label).unwrap();
                    for v in &row.values {
                        write!(out, "  {v:>width$}").unwrap();
                    }
                    out.push('\n');
                }
                out
            }
        }
    }
}

/// Moments of the local order: `M_1`, the variance `E_2`, and `M_2..M_4`.
pub fn moment_rows(p: Prime, target: &Rational) -> Result<Vec<(String, EvalResult)>> {
    let start = 12;
    Ok(vec![
        ("M1".to_string(), eval_to_precision(|t| mehnert_moment(1, t), p, target, start)?),
        ("V".to_string(), eval_to_precision(|t| eisenstein(2, t), p, target, start)?),
        ("M2".to_string(), eval_to_precision(|t| mehnert_moment(2, t), p, target, start)?),
        ("M3".to_string(), eval_to_precision(|t| mehnert_moment(3, t), p, target, start)?),
        ("M4".to_string(), eval_to_precision(|t| mehnert_moment(4, t), p, target, start)?),
    ])
}

pub fn cmd_table(kind: TableKind, primes: &[Prime], digits: u32, max: u32) -> Result<Table> {
    let mut columns_data: Vec<Vec<(String, EvalResult)>> = Vec::new();
    for &p in primes {
        let ctx = MeasureContext::for_prime(p);
        let col = match kind {
            TableKind::Moments => {
                let floor = Rational::new(1.into(), 1_000_000_000.into());
                let target = floor.min(half_ulp(digits) / Rational::from_integer(10.into()));
                moment_rows(p, &target)?
            }
            TableKind::OrderDist => (0..=max).map(|n| (format!("n={n}"), prob_order(n, &ctx))).collect(),
            TableKind::RankDist => (0..=max).map(|r| (format!("r={r}"), prob_rank(r, &ctx))).collect(),
        };
        columns_data.push(col);
    }
    let labels: Vec<String> = columns_data.first().map(|c| c.iter().map(|(l, _)| l.clone()).collect()).unwrap_or_default();
    let mut rows = Vec::new();
    for (i, label) in labels.into_iter().enumerate() {
        let values = columns_data.iter().map(|c| certified_decimal(&c[i].1, digits)).collect::<Result<Vec<_>>>()?;
        rows.push(TableRow { label, values });
    }
    Ok(Table { kind, digits, columns: primes.iter().map(|p| format!("p={p}")).collect(), rows })
}

/// Sampler settings shared by the CLI and the verification suites.
#[derive(Debug, Clone)]
pub struct SampleParams {
    pub sampler: SamplerKind,
    pub p: Prime,
    pub count: u64,
    pub seed: u64,
    pub eps: f64,
    pub n: usize,
    pub k: u32,
    pub u: u32,
}

impl SampleParams {
    pub fn new(sampler: SamplerKind, p: Prime, count: u64, seed: u64) -> Self {
        SampleParams { sampler, p, count, seed, eps: DEFAULT_EPS, n: 4, k: 12, u: 1 }
    }
}

/// Runs the sampler; every draw is also written to `stream` when given.
pub fn draw_samples(params: &SampleParams, mut stream: Option<&mut dyn Write>) -> Result<SampleSummary> {
    if params.count == 0 {
        return Err(Error::InvalidParameter("--count must be at least 1".into()));
    }
    let p = params.p;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut summary = SampleSummary::new(params.sampler, params.seed);
    let io = |e: std::io::Error| Error::InvalidParameter(format!("stream write failed: {e}"));
    if let Some(w) = stream.as_deref_mut() {
        w.write_all(b"draw,partition\n").map_err(io)?;
    }
    let mut saturated = 0u64;
    let ytab = YtabSampler::new(p, params.eps)?;
    let walk = LatticeWalk::new(p);
    for i in 0..params.count {
        let lam = match params.sampler {
            SamplerKind::Ytab => ytab.sample(&mut rng),
            SamplerKind::Lattice => walk.sample(&mut rng),
            SamplerKind::Matrix => random_gl(params.n, p, &mut rng)?.partition_at(1),
            SamplerKind::Cokernel => {
                let s = cokernel_sample(params.n, p, params.k, &mut rng)?;
                saturated += u64::from(s.saturated);
                s.partition
            }
            SamplerKind::Uquotient => {
                let h = ytab.sample(&mut rng).to_group_shape();
                quotient_by_random_elements(&h, params.u, p, &mut rng)?.to_partition()
            }
        };
        if let Some(w) = stream.as_deref_mut() {
            writeln!(w, "{i},{lam}").map_err(io)?;
        }
        summary.record(lam);
    }
    summary = summary.with_meta("p", p);
    summary = match params.sampler {
        SamplerKind::Ytab | SamplerKind::Uquotient => {
            let s = summary
                .with_meta("eps", params.eps)
                .with_meta("stop_level", ytab.stop_level())
                .with_meta("truncation_bias", format!("{:e}", ytab.truncation_bias()));
            if params.sampler == SamplerKind::Uquotient { s.with_meta("u", params.u) } else { s }
        }
        SamplerKind::Lattice => summary,
        SamplerKind::Matrix => summary.with_meta("n", params.n),
        SamplerKind::Cokernel => summary.with_meta("n", params.n).with_meta("K", params.k).with_meta("saturated", saturated),
    };
    Ok(summary)
}

/// The exact law each sampler targets, on partitions of size `≤ bound`.
pub fn expected_law(params: &SampleParams, bound: u32) -> Result<BTreeMap<Partition, Rational>> {
    let p = params.p;
    let ctx = MeasureContext::for_prime(p);
    let keep = |m: BTreeMap<Partition, Rational>| m.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let support = || enumerate_partitions(bound, None, None);
    Ok(match params.sampler {
        SamplerKind::Ytab => keep(support().map(|l| (l.clone(), cl_prob(&l, &ctx).value)).collect()),
        SamplerKind::Lattice => keep(support().map(|l| (l.clone(), lattice_walk_law(&l, p))).collect()),
        SamplerKind::Matrix => exact_marginal(params.n as u32, p, 1)?,
        SamplerKind::Cokernel => keep(support().map(|l| (l.clone(), p_alg_output_n(&l, params.n as u32, p))).collect()),
        SamplerKind::Uquotient => keep(support().map(|l| (l.clone(), u_prob(&l, params.u, &ctx).value)).collect()),
    })
}

/// Draws the samples and compares them with the exact law.
pub fn sample_and_compare(params: &SampleParams, bucket: u32) -> Result<(SampleSummary, Comparison)> {
    let summary = draw_samples(params, None)?;
    let law = expected_law(params, bucket)?;
    let cmp = stats_compare(&summary, &law, bucket)?;
    Ok((summary, cmp))
}

#[derive(Debug, Serialize)]
struct SampleReport<'a> {
    summary: &'a SampleSummary,
    comparison: &'a Comparison,
}

pub fn cmd_sample(args: &SampleArgs, p: Prime, seed: u64, format: Format) -> Result<String> {
    let params = SampleParams {
        sampler: args.sampler,
        p,
        count: args.count,
        seed,
        eps: args.eps,
        n: args.n,
        k: args.k,
        u: args.u,
    };
    let summary = match &args.stream {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| Error::InvalidParameter(format!("cannot create {}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(file);
            let s = draw_samples(&params, Some(&mut w))?;
            w.flush().map_err(|e| Error::InvalidParameter(format!("stream write failed: {e}")))?;
            s
        }
        None => draw_samples(&params, None)?,
    };
    let law = expected_law(&params, args.bucket)?;
    let cmp = stats_compare(&summary, &law, args.bucket)?;
    Ok(match format {
        Format::Json => serde_json::to_string(&SampleReport { summary: &summary, comparison: &cmp }).expect("plain data") + "\n",
        Format::Csv => {
            let mut out = String::from("partition,count,frequency,expected\n");
            for (lam, &c) in &summary.counts {
                let expected = law.get(lam).map_or(String::new(), |x| format!("{:.6}", crate::arith::to_f64(x)));
                writeln!(out, "{lam},{c},{:.6},{expected}", c as f64 / summary.total as f64).unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = format!("sampler: {:?}\nseed: {}\ndraws: {}\n", summary.sampler, summary.seed, summary.total)
                .to_lowercase();
            for (k, v) in &summary.metadata {
                writeln!(out, "{k}: {v}").unwrap();
            }
            writeln!(
                out,
                "tv: {:.6}\nchisq: {:.3} (dof {}, p-value {:.4})",
                crate::arith::to_f64(&cmp.tv),
                cmp.chisq,
                cmp.dof,
                cmp.p_value
            )
            .unwrap();
            out
        }
    })
}

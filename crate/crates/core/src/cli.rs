//! Campaign runner behind the `stirling-identities` binary.
//!
//! Every subcommand except `report` appends records to a ledger (see
//! [`crate::ledger`]). The exit status is 0 iff no asserted record has a
//! `nonzero` or `inconsistent` verdict; exploratory records never affect
//! it. Usage errors exit with 2.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::rational::parse_rational;
use crate::bridge::{bridge_check, BridgeCoefficient, BridgeInstance};
use crate::configurations::GroundSet;
use crate::error::{Error, Result};
use crate::ledger::{default_ledger_path, now_ms, read_ledger, LedgerRecord, LedgerWriter, ENGINE_VERSION};
use crate::part1::{
    classify, in_published_range, random_ground_set, run_instance, sample_stream, verify_range_with, Budget,
    Part1Instance, Part1Result, Recheck, SweepEntry, SweepOutcome, SweepPlan,
};
use crate::part2::{Part2Config, Part2Engine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "stirling-identities",
    version,
    about = "Exact verification of Stirling-number configuration identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sum weighted-configuration evaluations for one g.
    Part1(Part1Args),
    /// Check vanishing of the j^k n^-h log coefficients, k >= h + 2.
    Part2(Part2Args),
    /// Pair a configuration sum with its log-expansion coefficient.
    Bridge(BridgeArgs),
    /// Run the configuration-sum identities over a range of g.
    Sweep(SweepArgs),
    /// Summarize a ledger.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Worker threads; defaults to available parallelism. 1 is the serial path.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed for random ground sets.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ledger file; defaults to $STIRLING_IDENTITIES_LEDGER_DIR/ledger.jsonl or ./ledger.jsonl.
    #[arg(long)]
    pub ledger: Option<PathBuf>,
    /// No per-record progress on stderr.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args, Debug, Clone)]
pub struct Part1Args {
    /// Ground set size; implied by --c.
    #[arg(long)]
    pub g: Option<usize>,
    /// Total weight, 0..=g-2.
    #[arg(long, conflicts_with = "all_w")]
    pub w: Option<usize>,
    /// Every w in 0..=g-2.
    #[arg(long)]
    pub all_w: bool,
    /// Ground set as a comma-separated list of integers or fractions (a/b).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["random", "symbolic"])]
    pub c: Option<Vec<String>>,
    /// Number of seeded random ground sets per w.
    #[arg(long, conflicts_with = "symbolic")]
    pub random: Option<usize>,
    /// Treat c_1..c_g as indeterminates.
    #[arg(long)]
    pub symbolic: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct Part2Args {
    #[arg(long = "H", default_value_t = 4)]
    pub max_h: usize,
    #[arg(long, default_value_t = 6)]
    pub s_max: usize,
    /// Integer j values for the interpolation oracle; defaults to
    /// H+1 .. H+1+max(12, 2H+3).
    #[arg(long, value_delimiter = ',')]
    pub j_samples: Option<Vec<i64>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct BridgeArgs {
    /// Distinct integers >= 2.
    #[arg(long, value_delimiter = ',', required = true)]
    pub c: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub w: usize,
    /// Allow w outside 0..=g-2 (recorded as exploratory).
    #[arg(long)]
    pub calibrate: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 7)]
    pub g_max: usize,
    #[arg(long, default_value_t = 2)]
    pub g_min: usize,
    /// Restrict to these w values.
    #[arg(long, value_delimiter = ',')]
    pub w: Option<Vec<usize>>,
    /// Symbolic ground sets up to this g; seeded numeric ones above.
    #[arg(long, default_value_t = 5)]
    pub symbolic_max_g: usize,
    /// Numeric samples per (g, w); default 10 for g <= 6 and 5 above.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Skip instances with more than this many collapsed items.
    #[arg(long)]
    pub max_items: Option<u64>,
    /// Stop starting instances after this many seconds.
    #[arg(long)]
    pub time_limit_secs: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

/// A parsed command line plus its echo for the ledger.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub command: Command,
    pub echo: String,
}

impl Campaign {
    /// `args` excludes the program name.
    pub fn parse<I, S>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let args: Vec<String> = args.into_iter().map(Into::into).collect();
        let cli = Cli::try_parse_from(std::iter::once("stirling-identities".to_string()).chain(args.iter().cloned()))?;
        Ok(Campaign { command: cli.command, echo: args.join(" ") })
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub records: Vec<LedgerRecord>,
    /// Human-readable output (what the binary prints to stdout).
    pub output: String,
}

fn jobs_or_default(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
}

struct Recorder<'a> {
    echo: &'a str,
    seed: u64,
    writer: Option<LedgerWriter>,
    records: Vec<LedgerRecord>,
    output: String,
    total: usize,
    quiet: bool,
}

impl<'a> Recorder<'a> {
    fn new(echo: &'a str, common: &CommonArgs, ledger: Option<&Path>) -> Result<Self> {
        let writer = match ledger {
            Some(p) => Some(LedgerWriter::open(p)?),
            None => None,
        };
        Ok(Recorder {
            echo,
            seed: common.seed,
            writer,
            records: Vec::new(),
            output: String::new(),
            total: 0,
            quiet: common.quiet,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        kind: &str,
        params: BTreeMap<String, serde_json::Value>,
        asserted: bool,
        verdict: &str,
        value: String,
        visited: Option<u64>,
        elapsed_us: u64,
        note: Option<String>,
    ) -> Result<()> {
        let record = LedgerRecord {
            timestamp_ms: now_ms(),
            engine_version: ENGINE_VERSION.to_string(),
            command: self.echo.to_string(),
            kind: kind.to_string(),
            params,
            classification: if asserted { "asserted" } else { "exploratory" }.to_string(),
            verdict: verdict.to_string(),
            value,
            visited,
            elapsed_us,
            seed: self.seed,
            note,
        };
        if let Some(w) = &self.writer {
            w.send(record.clone())?;
        }
        self.total += 1;
        let flag = if record.is_failure() {
            "  <-- FAILED"
        } else if record.is_finding() {
            "  <-- finding"
        } else {
            ""
        };
        let line = format!(
            "[{}] {} {} {} {}{}",
            self.total,
            record.kind,
            compact_params(&record.params),
            record.classification,
            record.verdict,
            flag
        );
        if !self.quiet {
            eprintln!("{line}");
        }
        let _ = writeln!(self.output, "{line}");
        self.records.push(record);
        Ok(())
    }

    fn finish(mut self) -> Result<RunOutcome> {
        if let Some(w) = self.writer.take() {
            w.finish()?;
        }
        let failed = self.records.iter().filter(|r| r.is_failure()).count();
        let skipped = self.records.iter().filter(|r| r.verdict == "not_attempted").count();
        let _ = writeln!(
            self.output,
            "{} records, {} asserted failures, {} not attempted",
            self.records.len(),
            failed,
            skipped
        );
        Ok(RunOutcome {
            exit_code: if failed == 0 { EXIT_OK } else { EXIT_FAILED },
            records: self.records,
            output: self.output,
        })
    }
}

fn compact_params(params: &BTreeMap<String, serde_json::Value>) -> String {
    params
        .iter()
        .filter(|(k, _)| k.as_str() != "ground" || params.get("mode").and_then(|m| m.as_str()) != Some("symbolic"))
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn part1_params(inst: &Part1Instance, sample: Option<usize>) -> BTreeMap<String, serde_json::Value> {
    let mut p = BTreeMap::new();
    p.insert("g".into(), json!(inst.g()));
    p.insert("w".into(), json!(inst.w()));
    p.insert("mode".into(), json!(inst.mode().to_string()));
    p.insert("ground".into(), json!(inst.ground().describe()));
    if let Some(s) = sample {
        p.insert("sample".into(), json!(s));
    }
    p
}

fn recheck_note(recheck: &Option<Recheck>) -> Option<String> {
    recheck.as_ref().map(|r| {
        let mut note = format!(
            "counterexample candidate: ordered path {} (ordered sum {})",
            if r.ordered_agrees { "agrees" } else { "DISAGREES" },
            r.ordered.sum
        );
        if let Some(second) = &r.second_ground {
            let _ = write!(note, "; second ground set {:?} gives {}", second.instance.ground().describe(), second.sum);
        }
        let _ = write!(note, "; confirmed={}", r.confirmed());
        note
    })
}

fn record_part1(
    rec: &mut Recorder,
    result: &Part1Result,
    recheck: &Option<Recheck>,
    sample: Option<usize>,
) -> Result<()> {
    let inst = &result.instance;
    rec.push(
        "part1",
        part1_params(inst, sample),
        classify(inst.g(), inst.w()) == crate::part1::Classification::Asserted,
        &result.verdict.to_string(),
        result.sum.to_record_string(),
        Some(result.configurations_visited),
        result.elapsed.as_micros() as u64,
        recheck_note(recheck),
    )
}

fn record_sweep_entry(rec: &mut Recorder, entry: &SweepEntry) -> Result<()> {
    match &entry.outcome {
        SweepOutcome::Completed { result, recheck } => record_part1(rec, result, recheck, entry.sample),
        SweepOutcome::NotAttempted { reason } => {
            let mut params = BTreeMap::new();
            params.insert("g".into(), json!(entry.g));
            params.insert("w".into(), json!(entry.w));
            params.insert("mode".into(), json!(if entry.ground.is_symbolic() { "symbolic" } else { "numeric" }));
            params.insert("ground".into(), json!(entry.ground.describe()));
            if let Some(s) = entry.sample {
                params.insert("sample".into(), json!(s));
            }
            rec.push(
                "part1",
                params,
                entry.classification == crate::part1::Classification::Asserted,
                "not_attempted",
                String::new(),
                None,
                0,
                Some(reason.clone()),
            )
        }
    }
}

fn run_part1(args: &Part1Args, rec: &mut Recorder) -> Result<()> {
    let jobs = jobs_or_default(args.common.jobs);
    let explicit: Option<Vec<_>> = match &args.c {
        Some(list) => Some(list.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?),
        None => None,
    };
    let g = match (args.g, &explicit) {
        (Some(g), Some(c)) if g != c.len() => {
            return Err(Error::InvalidParameters(format!("--g {g} but --c lists {} values", c.len())))
        }
        (Some(g), _) => g,
        (None, Some(c)) => c.len(),
        (None, None) => return Err(Error::InvalidParameters("give --g or --c".into())),
    };
    if g < 2 {
        return Err(Error::InvalidParameters(format!("--g {g}: need g >= 2")));
    }
    let ws: Vec<usize> = match (args.w, args.all_w) {
        (Some(w), false) => {
            if w + 2 > g {
                return Err(Error::InvalidParameters(format!("--w {w}: need 0 <= w <= g-2 = {}", g - 2)));
            }
            vec![w]
        }
        (None, true) => (0..=g - 2).collect(),
        (None, false) => return Err(Error::InvalidParameters("give --w K or --all-w".into())),
        (Some(_), true) => unreachable!("clap rejects --w with --all-w"),
    };

    for w in ws {
        let grounds: Vec<(GroundSet, Option<usize>)> = if let Some(c) = &explicit {
            vec![(GroundSet::numeric(c.clone())?, None)]
        } else if args.symbolic || (args.random.is_none() && g <= 5) {
            vec![(GroundSet::symbolic(g)?, None)]
        } else {
            let count = args.random.unwrap_or(if g <= 6 { 10 } else { 5 });
            (0..count)
                .map(|s| Ok((random_ground_set(g, args.common.seed, sample_stream(g, w, s))?, Some(s))))
                .collect::<Result<_>>()?
        };
        for (ground, sample) in grounds {
            let inst = Part1Instance::new(ground, w)?;
            let (result, recheck) = run_instance(&inst, args.common.seed, jobs)?;
            record_part1(rec, &result, &recheck, sample)?;
        }
    }
    Ok(())
}

pub fn default_j_samples(max_h: usize) -> Vec<i64> {
    let first = max_h as i64 + 1;
    let count = 12.max(2 * max_h as i64 + 3);
    (first..first + count).collect()
}

fn run_part2(args: &Part2Args, rec: &mut Recorder) -> Result<()> {
    let jobs = jobs_or_default(args.common.jobs);
    let cfg = Part2Config::new(
        args.max_h,
        args.s_max,
        args.j_samples.clone().unwrap_or_else(|| default_j_samples(args.max_h)),
    );
    cfg.validate()?;
    let start = Instant::now();
    let engine = Part2Engine::new(cfg.clone(), jobs)?;
    let report = engine.check_vanishing()?;
    let elapsed = start.elapsed().as_micros() as u64;
    for order in &report.orders {
        let h = order.h;
        // a_h has j-degree at most 2h.
        for k in 0..=(2 * h) as i32 {
            let component = order.component(k);
            let mut params = BTreeMap::new();
            params.insert("h".into(), json!(h));
            params.insert("k".into(), json!(k));
            params.insert("H".into(), json!(cfg.max_h));
            params.insert("s_max".into(), json!(cfg.s_max));
            params.insert("j_samples".into(), json!(cfg.j_samples));
            let verdict = if component.is_zero() { "zero" } else { "nonzero" };
            rec.push(
                "part2",
                params,
                k >= h as i32 + 2,
                verdict,
                if component.is_zero() { "0".into() } else { component.canonical_terms().join(" + ") },
                None,
                elapsed,
                None,
            )?;
        }
    }
    Ok(())
}

fn run_bridge(args: &BridgeArgs, rec: &mut Recorder) -> Result<()> {
    let jobs = jobs_or_default(args.common.jobs);
    let inst = if args.calibrate {
        BridgeInstance::calibration(args.c.clone(), args.w)?
    } else {
        BridgeInstance::new(args.c.clone(), args.w)?
    };
    let start = Instant::now();
    let report = bridge_check(&inst, &inst.default_config(), jobs)?;
    let elapsed = start.elapsed().as_micros() as u64;
    let mut params = BTreeMap::new();
    params.insert("c".into(), json!(inst.c()));
    params.insert("w".into(), json!(inst.w()));
    params.insert("k".into(), json!(inst.k()));
    params.insert("h".into(), json!(inst.h()));
    let (verdict, coefficient) = match &report.coefficient {
        BridgeCoefficient::NotAttempted { reason } => ("not_attempted", format!("not attempted: {reason}")),
        BridgeCoefficient::Computed(p) => {
            let verdict = match report.consistent() {
                Some(false) => "inconsistent",
                _ if report.both_zero() => "zero",
                _ => "nonzero",
            };
            let value = if p.is_zero() { "0".to_string() } else { p.canonical_terms().join(" + ") };
            (verdict, value)
        }
    };
    let note = report.ratios.as_ref().map(|ratios| {
        ratios
            .iter()
            .map(|(e, q)| format!("ratio[r^{e}]={}", crate::algebra::rational::to_ratio_string(q)))
            .collect::<Vec<_>>()
            .join(" ")
    });
    let asserted = inst.in_vanishing_regime() && in_published_range(inst.g(), inst.w());
    rec.push(
        "bridge",
        params,
        asserted,
        verdict,
        format!("coefficient={coefficient}; part1={}", report.part1.sum.to_record_string()),
        Some(report.part1.configurations_visited),
        elapsed,
        note,
    )
}

fn run_sweep(args: &SweepArgs, rec: &mut Recorder) -> Result<()> {
    let mut plan = SweepPlan::new(args.g_max);
    plan.g_min = args.g_min;
    plan.ws = args.w.clone();
    plan.symbolic_max_g = args.symbolic_max_g;
    plan.samples = args.samples;
    plan.seed = args.common.seed;
    plan.jobs = jobs_or_default(args.common.jobs);
    plan.budget =
        Budget { max_items: args.max_items, time_limit: args.time_limit_secs.map(std::time::Duration::from_secs) };
    let mut err = None;
    verify_range_with(&plan, |entry| {
        if err.is_none() {
            if let Err(e) = record_sweep_entry(rec, entry) {
                err = Some(e);
            }
        }
    })?;
    err.map_or(Ok(()), Err)
}

/// Executes a campaign. `Err` means a usage or I/O problem; verification
/// failures are reported through the exit code.
pub fn run(campaign: &Campaign) -> Result<RunOutcome> {
    let (common, ledger) = match &campaign.command {
        Command::Part1(a) => (&a.common, a.common.ledger.clone()),
        Command::Part2(a) => (&a.common, a.common.ledger.clone()),
        Command::Bridge(a) => (&a.common, a.common.ledger.clone()),
        Command::Sweep(a) => (&a.common, a.common.ledger.clone()),
        Command::Report(a) => {
            let path = a.ledger.clone().unwrap_or_else(default_ledger_path);
            let output = report(&path)?;
            return Ok(RunOutcome { exit_code: EXIT_OK, records: Vec::new(), output });
        }
    };
    let ledger = ledger.unwrap_or_else(default_ledger_path);
    let mut rec = Recorder::new(&campaign.echo, common, Some(&ledger))?;
    match &campaign.command {
        Command::Part1(a) => run_part1(a, &mut rec)?,
        Command::Part2(a) => run_part2(a, &mut rec)?,
        Command::Bridge(a) => run_bridge(a, &mut rec)?,
        Command::Sweep(a) => run_sweep(a, &mut rec)?,
        Command::Report(_) => unreachable!(),
    }
    rec.finish()
}

fn param_usize(r: &LedgerRecord, key: &str) -> Option<usize> {
    r.params.get(key).and_then(|v| v.as_u64()).map(|v| v as usize)
}

/// Human-readable summary of a ledger: per-instance table, slowest
/// instances, coverage of the published range, and findings.
pub fn report(path: &Path) -> Result<String> {
    let (records, warnings) = read_ledger(path)?;
    let mut out = String::new();
    for w in &warnings {
        eprintln!("warning: {w}");
        let _ = writeln!(out, "warning: {w}");
    }

    let _ = writeln!(out, "{} records in {}", records.len(), path.display());
    let _ = writeln!(out, "{:<8} {:<40} {:<12} {:<14} {:>12}", "kind", "instance", "class", "verdict", "elapsed_us");
    for r in &records {
        let mut inst = compact_params(&r.params);
        if inst.len() > 40 {
            inst.truncate(37);
            inst.push_str("...");
        }
        let _ =
            writeln!(out, "{:<8} {:<40} {:<12} {:<14} {:>12}", r.kind, inst, r.classification, r.verdict, r.elapsed_us);
    }

    let mut slow: Vec<&LedgerRecord> = records.iter().collect();
    slow.sort_by_key(|r| std::cmp::Reverse(r.elapsed_us));
    if !slow.is_empty() {
        let _ = writeln!(out, "\nslowest:");
        for r in slow.iter().take(5) {
            let _ = writeln!(out, "  {:>12} us  {} {}", r.elapsed_us, r.kind, compact_params(&r.params));
        }
    }

    // Coverage of (g, w) by configuration-sum records.
    let mut cover: BTreeMap<(usize, usize), BTreeSet<String>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.kind == "part1") {
        if let (Some(g), Some(w)) = (param_usize(r, "g"), param_usize(r, "w")) {
            cover.entry((g, w)).or_default().insert(r.verdict.clone());
        }
    }
    let g_hi = cover.keys().map(|(g, _)| *g).max().unwrap_or(0).max(7);
    let _ = writeln!(out, "\ncoverage (rows g, columns w; * = published verified range):");
    for g in 2..=g_hi {
        let mut line = format!("  g={g:<2}");
        for w in 0..=g - 2 {
            let mark = match cover.get(&(g, w)) {
                None => "-",
                Some(v) if v.contains("nonzero") => "X",
                Some(v) if v.contains("zero") && v.len() == 1 => "0",
                Some(v) if v.contains("zero") => "0?",
                Some(_) => "?",
            };
            let star = if in_published_range(g, w) { "*" } else { " " };
            let _ = write!(line, " w{w}:{mark:<2}{star}");
        }
        let _ = writeln!(out, "{line}");
    }

    let exploratory: Vec<&LedgerRecord> = records.iter().filter(|r| !r.is_asserted()).collect();
    if !exploratory.is_empty() {
        let _ = writeln!(out, "\nexploratory: {} records", exploratory.len());
        for r in exploratory.iter().filter(|r| r.kind != "part2") {
            let _ = writeln!(out, "  {} {} -> {}", r.kind, compact_params(&r.params), r.verdict);
        }
    }

    let findings: Vec<&LedgerRecord> =
        records.iter().filter(|r| r.is_finding() && !(r.kind == "part2" && !r.is_asserted())).collect();
    if !findings.is_empty() {
        let _ = writeln!(out, "\n!!!!!!!! NONZERO / INCONSISTENT VERDICTS ({}) !!!!!!!!", findings.len());
        for r in findings {
            let _ = writeln!(
                out,
                "  [{}] {} {} value={} {}",
                r.classification,
                r.kind,
                compact_params(&r.params),
                r.value,
                r.note.clone().unwrap_or_default()
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn campaign(args: &[&str]) -> Campaign {
        Campaign::parse(args.iter().copied()).unwrap()
    }

    #[test]
    fn part1_explicit_ground_set() {
        let dir = tempfile::tempdir().unwrap();
        let ledger = dir.path().join("l.jsonl");
        let c = campaign(&[
            "part1",
            "--g",
            "3",
            "--w",
            "0",
            "--c",
            "2,3,4",
            "--jobs",
            "1",
            "--ledger",
            ledger.to_str().unwrap(),
        ]);
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].verdict, "zero");
        assert_eq!(out.records[0].value, "0/1");
        assert_eq!(read_ledger(&ledger).unwrap().0, out.records);
    }

    #[test]
    fn negative_and_fractional_ground_values_parse() {
        let dir = tempfile::tempdir().unwrap();
        let ledger = dir.path().join("l.jsonl");
        let c = campaign(&["part1", "--w", "1", "--c", "-3,1/2,5,-7/3", "--ledger", ledger.to_str().unwrap()]);
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.records[0].params["ground"], json!(["-3/1", "1/2", "5/1", "-7/3"]));
    }

    #[test]
    fn usage_errors() {
        assert!(Campaign::parse(["part1", "--w", "0", "--all-w", "--g", "3"]).is_err());
        assert!(Campaign::parse(["bridge"]).is_err());
        let dir = tempfile::tempdir().unwrap();
        let ledger = dir.path().join("l.jsonl");
        let l = ledger.to_str().unwrap();
        for args in [
            vec!["part1", "--g", "3", "--ledger", l],
            vec!["part1", "--g", "3", "--w", "2", "--ledger", l],
            vec!["part1", "--g", "4", "--w", "0", "--c", "1,2,3", "--ledger", l],
            vec!["part1", "--w", "0", "--c", "1,1,3", "--ledger", l],
            vec!["part2", "--H", "3", "--j-samples", "2,3,4", "--ledger", l],
            vec!["bridge", "--c", "2,3", "--w", "1", "--ledger", l],
        ] {
            assert!(run(&campaign(&args)).is_err(), "{args:?}");
        }
    }

    #[test]
    fn report_handles_empty_and_flagged_ledgers() {
        let dir = tempfile::tempdir().unwrap();
        let ledger = dir.path().join("l.jsonl");
        std::fs::write(&ledger, "").unwrap();
        let text = report(&ledger).unwrap();
        assert!(text.starts_with("0 records"));
        assert!(!text.contains("NONZERO"));

        let c = campaign(&["part1", "--g", "3", "--w", "0", "--c", "2,3,4", "--ledger", ledger.to_str().unwrap()]);
        run(&c).unwrap();
        let text = report(&ledger).unwrap();
        assert!(text.starts_with("1 records"));
        assert!(!text.contains("NONZERO"));

        let (mut records, _) = read_ledger(&ledger).unwrap();
        records[0].verdict = "nonzero".into();
        records[0].value = "1/2".into();
        let line = serde_json::to_string(&records[0]).unwrap();
        std::fs::write(&ledger, format!("{line}\ngarbage\n")).unwrap();
        let text = report(&ledger).unwrap();
        assert!(text.contains("NONZERO"));
        assert!(text.contains("warning: line 2"));
    }
}

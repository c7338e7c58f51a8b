//! Command-line front end. `run` returns the process exit code; output goes to the given writer.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    bounded_counterexample_search, canonical_history, canonical_start, merge_reports, replay_canonical,
    run_checker_suite, AnalysisError, BatchReport, CheckerKey, SearchBudget, SearchKey,
};
use crate::config::Budget;
use crate::diagram::{
    area_constant, band_bound_violations, bounds_table, build_trapezium, copies_for, glue, lower_bound_witness,
    trapezium_svg, DiagramError,
};
use crate::engine::{ensure_reduced, run_history, run_with, widths, EngineError, TraceMode};
use crate::machines::{build, MachineKind};
use crate::presentation::{emit, relator_stats, to_text};

#[derive(Parser, Debug)]
#[command(name = "smlab", version, about = "S-machine computations, trapezia and presentations")]
pub struct Cli {
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Longest history kept with a full trace
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_steps: u64,
    /// Longest word allowed in a full trace
    #[arg(long, global = true, default_value_t = 64)]
    pub max_width: usize,
    /// Longest history run in streamed mode
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    pub max_streamed: u64,
    /// Word checkpoint stride in streamed mode (0 = none)
    #[arg(long, global = true, default_value_t = 0)]
    pub checkpoint_stride: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Result<Budget, CliError> {
        if self.max_steps == 0 || self.max_width == 0 || self.max_streamed == 0 {
            return Err(CliError::Config("budgets must be positive".into()));
        }
        Ok(Budget {
            max_steps: self.max_steps,
            max_width: self.max_width,
            max_streamed: self.max_streamed,
            checkpoint_stride: self.checkpoint_stride,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Jsonl,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a history from a start word
    Simulate {
        #[arg(long, value_enum)]
        machine: MachineKind,
        /// File holding the start word
        #[arg(long, conflicts_with = "inline", required_unless_present = "inline")]
        word: Option<PathBuf>,
        /// Start word given on the command line
        #[arg(long)]
        inline: Option<String>,
        /// File holding the history, whitespace-separated rule names (`^-1` for inverses)
        #[arg(long)]
        history: PathBuf,
        /// JSON Lines trace output
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Do not keep words; write them only at checkpoint strides
        #[arg(long)]
        stream: bool,
    },
    /// g(n) against the bounds 2^n and 6·2^n
    Gtable {
        #[arg(long, default_value_t = 8)]
        max_n: u32,
    },
    /// The canonical long computation of M
    Standard {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        emit_history: Option<PathBuf>,
    },
    /// Trapezium and glued-diagram ledgers for the canonical computation
    Area {
        #[arg(long)]
        n: u32,
        /// Number of copies, or `auto` for round(h / log′log′h)
        #[arg(long, default_value = "1")]
        glue: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Glued lower-bound witness for index i
    Witness {
        #[arg(long)]
        i: u32,
        #[arg(long, value_enum, default_value_t = Format::Jsonl)]
        format: Format,
    },
    /// The index sequences n_i, n′_i, d_i, λ_i with Ψ and ψ
    Bounds {
        #[arg(long, default_value_t = 3)]
        imax: u32,
        /// Exponent for λ_i, below 1/4
        #[arg(long, default_value_t = 0.125)]
        epsilon: f64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Write the group presentation of a machine
    Presentation {
        #[arg(long, value_enum)]
        machine: MachineKind,
        #[arg(long)]
        out: PathBuf,
        /// Also print counts as TSV
        #[arg(long)]
        stats: bool,
    },
    /// Run the checkers and counterexample searches; exit 4 on any violation
    Verify {
        /// `all`, a checker key or a search key
        #[arg(long, default_value = "all")]
        suite: String,
        /// Samples per checker
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
        /// Samples per search
        #[arg(long, default_value_t = 100_000)]
        search_iters: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Longest a-word per sector in search start words
        #[arg(long, default_value_t = 4)]
        width: usize,
        /// Longest search history
        #[arg(long, default_value_t = 30)]
        length: usize,
        /// JSON Lines batch reports
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Applicability(String),
    #[error("budget: {0}")]
    Budget(String),
    #[error("{0} violation(s) found")]
    Violations(u64),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Applicability(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Violations(_) => 4,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NotApplicableAt { .. } | EngineError::NotApplicable(_) => CliError::Applicability(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Engine(e) => e.into(),
            AnalysisError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        match e {
            DiagramError::Engine(e) => e.into(),
            DiagramError::Analysis(e) => e.into(),
            DiagramError::TooTall { .. } => CliError::Budget(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Relative output paths are placed under `$SMLAB_OUT` when it is set.
fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os("SMLAB_OUT") {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn create(p: &Path) -> Result<BufWriter<fs::File>, CliError> {
    let path = out_path(p);
    if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}

fn read(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    step: usize,
    rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<&'a str>,
    len: usize,
    a_width: usize,
    norm: usize,
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// Parses arguments (including the program name) and runs; returns the exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let budget = cli.budget.budget()?;
    match &cli.command {
        Command::Simulate { machine, word, inline, history, trace, stream } => {
            simulate(*machine, word.as_deref(), inline.as_deref(), history, trace.as_deref(), *stream, &budget, out)
        }
        Command::Gtable { max_n } => gtable(*max_n, &budget, out),
        Command::Standard { n, emit_history } => standard(*n, emit_history.as_deref(), &budget, out),
        Command::Area { n, glue, svg } => area(*n, glue, svg.as_deref(), &budget, out),
        Command::Witness { i, format } => {
            let m = build(MachineKind::Main);
            let w = lower_bound_witness(&m, *i, &budget)?;
            match format {
                Format::Jsonl => json_line(out, &w),
                Format::Tsv => {
                    writeln!(out, "i\tn_i\tk\tarea_delta\tarea\tperimeter\tperimeter_ratio\tpsi_ratio\tshape_ratio")?;
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                        w.i, w.n_i, w.k, w.area_delta, w.area, w.perimeter, w.perimeter_ratio, w.psi_ratio, w.shape_ratio
                    )?;
                    Ok(())
                }
            }
        }
        Command::Bounds { imax, epsilon, format } => {
            if !(*epsilon > 0.0 && *epsilon < 0.25) {
                return Err(CliError::Config("epsilon must lie in (0, 1/4)".into()));
            }
            let rows = bounds_table(*imax, *epsilon);
            match format {
                Format::Jsonl => rows.iter().try_for_each(|r| json_line(out, r)),
                Format::Tsv => {
                    writeln!(out, "i\tn_i\tn_prime_i\td_i\tlambda_i\tbig_psi\tsmall_psi\tthird_below\tnote")?;
                    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                    for r in rows {
                        writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            r.i,
                            opt(r.n_i.map(|v| v.to_string())),
                            opt(r.n_prime_i.map(|v| v.to_string())),
                            opt(r.d_i.map(|v| format!("{v:.3}"))),
                            opt(r.lambda_i.map(|v| format!("{v:.3}"))),
                            opt(r.big_psi.map(|v| format!("{v:.3}"))),
                            opt(r.small_psi.map(|v| format!("{v:.6}"))),
                            opt(r.third_below.map(|v| v.to_string())),
                            opt(r.note),
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Presentation { machine, out: path, stats } => {
            let p = emit(&build(*machine));
            let mut f = create(path)?;
            f.write_all(to_text(&p).as_bytes())?;
            f.flush()?;
            if *stats {
                out.write_all(relator_stats(&p).tsv().as_bytes())?;
            }
            Ok(())
        }
        Command::Verify { suite, iters, search_iters, seed, width, length, report } => {
            verify(suite, *iters, *search_iters, *seed, *width, *length, report.as_deref(), out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    kind: MachineKind,
    word: Option<&Path>,
    inline: Option<&str>,
    history: &Path,
    trace: Option<&Path>,
    stream: bool,
    budget: &Budget,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let m = build(kind);
    let text = match (word, inline) {
        (Some(p), _) => read(p)?,
        (None, Some(w)) => w.to_string(),
        (None, None) => return Err(CliError::Config("give --word or --inline".into())),
    };
    let start = m.parse_word(text.trim()).map_err(|e| CliError::Config(e.to_string()))?;
    let h = m.parse_history(&read(history)?).map_err(|e| CliError::Config(e.to_string()))?;
    ensure_reduced(&h)?;
    let cap = budget.step_cap(stream);
    if h.len() as u64 > cap {
        return Err(CliError::Budget(format!("history of {} steps exceeds cap {cap}", h.len())));
    }
    let mut sink: Option<BufWriter<fs::File>> = trace.map(create).transpose()?;
    let stride = budget.checkpoint_stride;
    let mut record = |step: usize, rule: Option<String>, w: &crate::engine::Word| -> Result<(), CliError> {
        let Some(f) = sink.as_mut() else { return Ok(()) };
        let wd = widths(&m, w);
        let keep = !stream || (stride > 0 && step.is_multiple_of(stride));
        let text = keep.then(|| m.format_word(w));
        json_line(
            f,
            &TraceRecord { step, rule, word: text.as_deref(), len: wd.len, a_width: wd.a_width, norm: wd.norm },
        )
    };
    record(0, None, &start)?;
    let mut failure = None;
    let mut too_wide = None;
    let end = run_with(&m, &start, &h, |step, rule, _, after| {
        if failure.is_some() {
            return;
        }
        if !stream && after.len() > budget.max_width {
            too_wide.get_or_insert(step);
        }
        if let Err(e) = record(step, Some(m.rule_name(rule)), after) {
            failure = Some(e);
        }
    });
    let end = match end {
        Ok(end) => end,
        Err(e) => {
            if let Some(mut f) = sink {
                f.flush()?;
            }
            return Err(e.into());
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    if let Some(mut f) = sink {
        f.flush()?;
    }
    if let Some(step) = too_wide {
        return Err(CliError::Budget(format!("word at step {step} is longer than {}", budget.max_width)));
    }
    writeln!(out, "steps\t{}", h.len())?;
    writeln!(out, "end\t{}", m.format_word(&end))?;
    Ok(())
}

fn gtable(max_n: u32, budget: &Budget, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "n\tg\tlower\tupper\tbound_ok")?;
    for n in 1..=max_n {
        let g = crate::analysis::g_oracle(n, budget)?.g;
        let lower = 1u64 << n;
        let upper = 6u64 << n;
        writeln!(out, "{n}\t{g}\t{lower}\t{upper}\t{}", lower <= g && g <= upper)?;
    }
    Ok(())
}

fn standard(n: u32, emit_history: Option<&Path>, budget: &Budget, out: &mut dyn Write) -> Result<(), CliError> {
    let m = build(MachineKind::Main);
    let c = canonical_history(&m, n, budget.max_streamed)?;
    if let Some(p) = emit_history {
        let mut f = create(p)?;
        writeln!(f, "{}", m.format_history(&c.history))?;
        f.flush()?;
    }
    let r = replay_canonical(&m, &c)?;
    writeln!(out, "n\t{}", r.n)?;
    writeln!(out, "g\t{}", r.g)?;
    writeln!(out, "gg\t{}", r.gg)?;
    writeln!(out, "total\t{}", r.len)?;
    writeln!(out, "expected\t{}", r.expected_len)?;
    writeln!(out, "length_ok\t{}", r.len == r.expected_len)?;
    writeln!(out, "brief\t{}", r.brief)?;
    writeln!(out, "end\t{}", r.end)?;
    writeln!(out, "end_ok\t{}", r.end_ok)?;
    writeln!(out, "middle_len\t{}", r.middle_len)?;
    writeln!(out, "middle_a_width\t{}", r.middle_a_width)?;
    writeln!(out, "left_width\t{}", r.left_width)?;
    writeln!(out, "right_width\t{}", r.right_width)?;
    writeln!(out, "max_len\t{}", r.stats.max_len)?;
    writeln!(out, "argmax_len\t{}", r.stats.argmax_len)?;
    writeln!(out, "max_a_width\t{}", r.stats.max_a_width)?;
    writeln!(out, "max_norm\t{}", r.stats.max_norm)?;
    writeln!(out, "holds\t{}", r.holds())?;
    Ok(())
}

fn area(n: u32, glue_arg: &str, svg: Option<&Path>, budget: &Budget, out: &mut dyn Write) -> Result<(), CliError> {
    let m = build(MachineKind::Main);
    let c = canonical_history(&m, n, budget.max_steps)?;
    let comp = run_history(&m, &canonical_start(&m, n), &c.history, TraceMode::Full)?;
    if comp.stats.max_len > budget.max_width {
        return Err(CliError::Budget(format!("trace width {} exceeds {}", comp.stats.max_len, budget.max_width)));
    }
    let t = build_trapezium(&m, &comp)?;
    let k = match glue_arg {
        "auto" => copies_for(t.height() as u64),
        s => s.parse::<u64>().ok().filter(|&k| k >= 1).ok_or_else(|| CliError::Config(format!("bad --glue `{s}`")))?,
    };
    let g = glue(&t, k);
    writeln!(out, "height\t{}", t.height())?;
    writeln!(out, "area\t{}", t.area())?;
    writeln!(out, "perimeter\t{}", t.perimeter())?;
    writeln!(out, "band_bound_violations\t{}", band_bound_violations(&t).len())?;
    writeln!(out, "area_constant\t{:.6}", area_constant(&m, &t))?;
    writeln!(out, "copies\t{}", g.copies)?;
    writeln!(out, "glued_area\t{}", g.area)?;
    writeln!(out, "glued_perimeter\t{}", g.perimeter)?;
    if let Some(p) = svg {
        let mut f = create(p)?;
        f.write_all(trapezium_svg(&t, k.min(8) as usize).as_bytes())?;
        f.flush()?;
    }
    Ok(())
}

enum Suite {
    Checker(CheckerKey),
    Search(SearchKey),
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    iters: u64,
    search_iters: u64,
    seed: u64,
    width: usize,
    length: usize,
    report: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        CheckerKey::ALL.into_iter().map(Suite::Checker).chain(SearchKey::ALL.into_iter().map(Suite::Search)).collect()
    } else if let Ok(k) = suite.parse::<CheckerKey>() {
        vec![Suite::Checker(k)]
    } else if let Ok(k) = suite.parse::<SearchKey>() {
        vec![Suite::Search(k)]
    } else {
        return Err(CliError::Config(format!("unknown suite `{suite}`")));
    };
    let mut sink = report.map(create).transpose()?;
    let mut violations = 0;
    writeln!(out, "suite\tsamples\tinstances\tviolations\textremal")?;
    for s in suites {
        let reports: Vec<BatchReport> = match s {
            Suite::Checker(k) => run_checker_suite(k, iters, seed, 1_000)?,
            Suite::Search(k) => bounded_counterexample_search(
                k,
                &SearchBudget { width, length, samples: search_iters, seed, ..SearchBudget::default() },
            )?,
        };
        if let Some(f) = sink.as_mut() {
            for r in &reports {
                json_line(f, r)?;
            }
        }
        let Some(sum) = merge_reports(&reports) else { continue };
        violations += sum.violations;
        let extremal: Vec<String> = sum.extremal.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "{}\t{}\t{}\t{}\t{}", sum.lemma, sum.samples, sum.instances, sum.violations, extremal.join(","))?;
        if let Some(v) = &sum.first_violation {
            writeln!(out, "# first violation: {v}")?;
        }
    }
    if let Some(mut f) = sink {
        f.flush()?;
    }
    if violations > 0 {
        return Err(CliError::Violations(violations));
    }
    Ok(())
}

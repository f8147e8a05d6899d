//! Command-line driver: parse a file, run both termination criteria and
//! render the verdict as text, JSON and DOT.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};

use sct_core::analysis::{analyze, Analysis, AnalysisOptions, Overall};
use sct_core::report::Report;
use sct_core::sct::{to_dot, SctMode, SctStatus};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Require a decrease on idempotent self-loops only (default).
    Idempotent,
    /// Require a decrease on every self-loop.
    AllLoops,
}

impl From<ModeArg> for SctMode {
    fn from(mode: ModeArg) -> SctMode {
        match mode {
            ModeArg::Idempotent => SctMode::Idempotent,
            ModeArg::AllLoops => SctMode::AllLoops,
        }
    }
}

/// Termination checker for Dedukti-style rewrite systems: size-change
/// termination over the call graph combined with a computability-closure
/// check of rule right-hand sides.
#[derive(Debug, Parser)]
#[command(name = "sct-lint", version)]
struct Args {
    /// Input file.
    file: PathBuf,

    /// Which self-loops of the closure must decrease.
    #[arg(long, value_enum, default_value_t = ModeArg::Idempotent)]
    mode: ModeArg,

    /// Write the full report as JSON.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Write the call graph in DOT format.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,

    /// Write the closed call graph in DOT format.
    #[arg(long, value_name = "PATH")]
    dot_closure: Option<PathBuf>,

    /// Skip the computability-closure check (size-change only).
    #[arg(long)]
    no_cc: bool,

    /// Reject on partial applications instead of warning.
    #[arg(long)]
    strict_partial: bool,

    /// Warn about non-left-linear rules and overlapping left-hand
    /// sides.
    #[arg(long)]
    lint: bool,

    /// Print the closure self-loops and witnesses of one symbol.
    #[arg(long, value_name = "SYMBOL")]
    explain: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("sct-lint: error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> anyhow::Result<ExitCode> {
    let source = fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let options = AnalysisOptions {
        mode: args.mode.into(),
        check_cc: !args.no_cc,
        lint: args.lint,
        strict_partial: args.strict_partial,
    };
    let file_name = args.file.to_string_lossy().into_owned();
    let analysis = match analyze(&file_name, &source, options) {
        Ok(a) => a,
        Err(err) => {
            eprintln!("sct-lint: {file_name}: {err}");
            return Ok(ExitCode::from(2));
        }
    };

    if let Some(path) = &args.json {
        let report = Report::build(&analysis);
        fs::write(path, report.to_json_pretty())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(path) = &args.dot {
        fs::write(path, to_dot(&analysis.graph))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if let Some(path) = &args.dot_closure {
        fs::write(path, to_dot(&analysis.closed))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }

    print_summary(&analysis);

    if let Some(symbol) = &args.explain {
        if !analysis.signature.contains(symbol) {
            eprintln!("sct-lint: error: unknown symbol `{symbol}`");
            return Ok(ExitCode::from(2));
        }
        print_explanation(&analysis, symbol);
    }

    Ok(ExitCode::from(analysis.overall.exit_code() as u8))
}

fn print_summary(analysis: &Analysis) {
    println!("sct-lint: {}", analysis.file);
    println!(
        "  symbols: {}  rules: {}  calls: {}  closure edges: {}",
        analysis.signature.len(),
        analysis.rule_statuses.len(),
        analysis.calls.len(),
        analysis.closed.edge_count(),
    );

    for status in &analysis.rule_statuses {
        if let Err(err) = &status.result {
            println!("  rule at line {}: error: {err}", status.raw.line);
        }
    }

    let sct_status = match analysis.sct.status {
        SctStatus::SctHolds => "holds",
        SctStatus::SctFails => "fails",
    };
    println!("  size-change ({}): {}", analysis.options.mode, sct_status);
    for failure in &analysis.sct.failures {
        println!(
            "    loop on `{}` with matrix {} and no decreasing diagonal",
            failure.symbol, failure.matrix
        );
        print_witness(&failure.witness, "      ");
    }

    match &analysis.cc {
        None => println!("  closure check: skipped (--no-cc)"),
        Some(reports) => {
            let failing: Vec<_> = reports.iter().filter(|r| !r.outcome.ok).collect();
            if failing.is_empty() {
                println!("  closure check: all {} rule(s) pass", reports.len());
            } else {
                println!(
                    "  closure check: {} of {} rule(s) fail",
                    failing.len(),
                    reports.len()
                );
                for report in failing {
                    let failure = report.outcome.failure.as_ref().expect("failing outcome");
                    println!(
                        "    rule {}: `{}` at {} is outside the closure",
                        report.rule,
                        failure.term,
                        sct_core::term::fmt_path(&failure.position)
                    );
                }
            }
        }
    }

    if !analysis.warnings.is_empty() {
        println!("  warnings:");
        for warning in &analysis.warnings {
            println!("    {warning}");
        }
    }

    match analysis.overall {
        Overall::Accept => println!(
            "  verdict: ACCEPT (assumes confluence and type preservation, not checked here)"
        ),
        Overall::Reject => {
            println!("  verdict: REJECT (termination not provable by this criterion)")
        }
        Overall::Error => println!("  verdict: ERROR (invalid input)"),
    }
}

fn print_witness(witness: &[sct_core::sct::CallRef], indent: &str) {
    for step in witness {
        println!(
            "{indent}{} --{}--> {}  (rule {}, at {})",
            step.caller,
            step.matrix,
            step.callee,
            step.rule,
            sct_core::term::fmt_path(&step.position)
        );
    }
}

fn print_explanation(analysis: &Analysis, symbol: &str) {
    use sct_core::sct::sct_check;

    println!("closure self-loops of `{symbol}`:");
    let Some(matrices) = analysis.closed.matrices(symbol, symbol) else {
        println!("  none");
        return;
    };
    // recompute per-loop verdicts so the explanation is self-contained
    let verdict = sct_check(&analysis.closed, analysis.options.mode);
    for matrix in matrices {
        let idempotent = matrix.is_idempotent();
        let decreasing = matrix.has_decreasing_diagonal();
        println!(
            "  {matrix}  idempotent: {}  decreasing diagonal: {}",
            if idempotent { "yes" } else { "no" },
            if decreasing { "yes" } else { "no" },
        );
        if let Some(failure) = verdict
            .failures
            .iter()
            .find(|f| f.symbol == symbol && f.matrix == *matrix)
        {
            println!("    offending; shortest call path with this product:");
            print_witness(&failure.witness, "      ");
        }
    }
}

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fgo_core::bisim::{bisim_corpus, DEFAULT_FUEL};
use fgo_core::enumerate::{enumerate, fuzz_pipeline, program_size};
use fgo_core::fg_eval::{run_fg, FgInterp, Outcome, RunOptions, StepResult};
use fgo_core::fg_typing::check_program_fg;
use fgo_core::fgg_eval::{run_fgg, FggInterp};
use fgo_core::fgg_typing::check_program_fgg;
use fgo_core::instances::omega;
use fgo_core::monocheck::{check_program_mono, MonoCheck};
use fgo_core::monomorphise::{mono_program_with, MonoOptions};
use fgo_core::{parse_program, pretty_expr, pretty_program, Mode, ParseOptions, Program};

/// Featherweight Go toolkit: check, run, monomorphise, and differentially
/// test FG and FGG programs.
#[derive(Parser)]
#[command(name = "fgo", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Source file, or `-` for stdin.
    file: PathBuf,
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RunFlags {
    /// Step limit (default 10000; FGO_FUEL overrides the default).
    #[arg(long)]
    fuel: Option<u64>,
    /// Re-type the term after every step and verify preservation/progress.
    #[arg(long)]
    dynamic_checks: bool,
    /// Print every intermediate term.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check an FG program.
    CheckFg(Input),
    /// Evaluate an FG program's main expression.
    RunFg {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Type-check an FGG program.
    CheckFgg(Input),
    /// Evaluate an FGG program's main expression.
    RunFgg {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Compute the instance set Ω of an FGG program.
    Omega(Input),
    /// Decide monomorphisability; print witnesses when it fails.
    Nomono(Input),
    /// Translate an FGG program to FG.
    Mono {
        #[command(flatten)]
        input: Input,
        /// Use Go-compatible glyphs for < > , in mangled names.
        #[arg(long)]
        go_compat: bool,
        /// Also print the instance set that drove the translation.
        #[arg(long)]
        emit_omega: bool,
    },
    /// Run the FGG/FG bisimulation over one or more programs (TAP output).
    Bisim {
        files: Vec<PathBuf>,
        #[arg(long)]
        fuel: Option<u64>,
    },
    /// Enumerate well-typed FGG programs up to a size bound.
    Enumerate {
        /// Size bound for generated programs.
        #[arg(long)]
        bound: usize,
        /// Print only the number of programs.
        #[arg(long)]
        count_only: bool,
        /// Push every generated program through the full pipeline.
        #[arg(long)]
        run_bisim: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_source(path: &PathBuf) -> Result<String, String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn parse(path: &PathBuf, mode: Mode) -> Result<Program, String> {
    let src = read_source(path)?;
    let opts = match mode {
        Mode::Fg => ParseOptions::fg(),
        Mode::Fgg => ParseOptions::fgg(),
    };
    parse_program(&src, opts.extended()).map_err(|e| e.to_string())
}

fn default_fuel(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("FGO_FUEL").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_FUEL)
}

fn check_failure(json: bool, diags: Vec<fgo_core::Diagnostic>, file: &PathBuf) -> ExitCode {
    let name = file.display().to_string();
    if json {
        let msgs: Vec<String> = diags.iter().map(|d| d.render(&name)).collect();
        println!("{}", serde_json::json!({ "ok": false, "errors": msgs }));
    } else {
        for d in &diags {
            eprintln!("{}", d.render(&name));
        }
    }
    ExitCode::from(1)
}

fn report_outcome(out: Outcome, json: bool, steps: Option<u64>) -> ExitCode {
    match out {
        Outcome::Value(v) => {
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "ok": true, "value": pretty_expr(&v), "steps": steps })
                );
            } else {
                println!("{}", pretty_expr(&v));
            }
            ExitCode::SUCCESS
        }
        Outcome::Panic { value, asserted } => {
            let msg = format!(
                "panic: {} does not implement {}",
                pretty_expr(&value),
                fgo_core::pretty_type(&asserted)
            );
            if json {
                println!("{}", serde_json::json!({ "ok": false, "panic": msg }));
            } else {
                println!("{msg}");
            }
            ExitCode::from(1)
        }
        Outcome::Diverged { steps, .. } => {
            let msg = format!("no value after {steps} steps (out of fuel)");
            if json {
                println!("{}", serde_json::json!({ "ok": false, "diverged": msg }));
            } else {
                println!("{msg}");
            }
            ExitCode::from(1)
        }
        Outcome::Stuck { expr, reason } => {
            let msg = format!("stuck at {}: {reason}", pretty_expr(&expr));
            if json {
                println!("{}", serde_json::json!({ "ok": false, "stuck": msg }));
            } else {
                println!("{msg}");
            }
            ExitCode::from(1)
        }
    }
}

/// Step-by-step evaluation, printing each intermediate term.
fn trace_run(step: impl Fn(&fgo_core::Expr) -> StepResult, e: &fgo_core::Expr, fuel: u64) -> Outcome {
    let mut cur = e.clone();
    println!("{}", pretty_expr(&cur));
    for n in 0..fuel {
        match step(&cur) {
            StepResult::Stepped(next) => {
                println!("  -> {}", pretty_expr(&next));
                cur = next;
            }
            StepResult::Value => return Outcome::Value(cur),
            StepResult::Panic { value, asserted } => return Outcome::Panic { value, asserted },
            StepResult::Stuck(reason) => return Outcome::Stuck { expr: cur, reason },
        }
        if n + 1 == fuel {
            return Outcome::Diverged { last: cur, steps: fuel };
        }
    }
    Outcome::Diverged { last: cur, steps: fuel }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    Ok(match cli.cmd {
        Cmd::CheckFg(input) => {
            let prog = parse(&input.file, Mode::Fg)?;
            match check_program_fg(&prog) {
                Ok(_) => {
                    if input.json {
                        println!("{}", serde_json::json!({ "ok": true }));
                    } else {
                        println!("ok");
                    }
                    ExitCode::SUCCESS
                }
                Err(diags) => check_failure(input.json, diags, &input.file),
            }
        }
        Cmd::CheckFgg(input) => {
            let prog = parse(&input.file, Mode::Fgg)?;
            match check_program_fgg(&prog) {
                Ok(_) => {
                    if input.json {
                        println!("{}", serde_json::json!({ "ok": true }));
                    } else {
                        println!("ok");
                    }
                    ExitCode::SUCCESS
                }
                Err(diags) => check_failure(input.json, diags, &input.file),
            }
        }
        Cmd::RunFg { input, run } => {
            let prog = parse(&input.file, Mode::Fg)?;
            let prog = match check_program_fg(&prog) {
                Ok(p) => p,
                Err(diags) => return Ok(check_failure(input.json, diags, &input.file)),
            };
            let fuel = default_fuel(run.fuel);
            let out = if run.trace {
                let interp = FgInterp::new(&prog);
                trace_run(|e| interp.step(e), &prog.main, fuel)
            } else {
                run_fg(
                    &prog,
                    &prog.main,
                    RunOptions { fuel: Some(fuel), dynamic_checks: run.dynamic_checks },
                )
            };
            report_outcome(out, input.json, None)
        }
        Cmd::RunFgg { input, run } => {
            let prog = parse(&input.file, Mode::Fgg)?;
            let prog = match check_program_fgg(&prog) {
                Ok(p) => p,
                Err(diags) => return Ok(check_failure(input.json, diags, &input.file)),
            };
            let fuel = default_fuel(run.fuel);
            let out = if run.trace {
                let interp = FggInterp::new(&prog);
                trace_run(|e| interp.step(e), &prog.main, fuel)
            } else {
                run_fgg(
                    &prog,
                    &prog.main,
                    RunOptions { fuel: Some(fuel), dynamic_checks: run.dynamic_checks },
                )
            };
            report_outcome(out, input.json, None)
        }
        Cmd::Omega(input) => {
            let prog = parse(&input.file, Mode::Fgg)?;
            let prog = match check_program_fgg(&prog) {
                Ok(p) => p,
                Err(diags) => return Ok(check_failure(input.json, diags, &input.file)),
            };
            let set = omega(&prog).map_err(|d| d.render(&input.file.display().to_string()))?;
            if input.json {
                let items: Vec<String> = set.iter().map(|i| i.to_string()).collect();
                println!("{}", serde_json::json!({ "ok": true, "instances": items }));
            } else {
                for inst in &set {
                    println!("{inst}");
                }
            }
            ExitCode::SUCCESS
        }
        Cmd::Nomono(input) => {
            let prog = parse(&input.file, Mode::Fgg)?;
            let prog = match check_program_fgg(&prog) {
                Ok(p) => p,
                Err(diags) => return Ok(check_failure(input.json, diags, &input.file)),
            };
            match check_program_mono(&prog)
                .map_err(|d| d.render(&input.file.display().to_string()))?
            {
                MonoCheck::Monomorphisable => {
                    if input.json {
                        println!("{}", serde_json::json!({ "ok": true, "monomorphisable": true }));
                    } else {
                        println!("monomorphisable");
                    }
                    ExitCode::SUCCESS
                }
                MonoCheck::NotMonomorphisable(ws) => {
                    if input.json {
                        let items: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                        println!(
                            "{}",
                            serde_json::json!({
                                "ok": false, "monomorphisable": false, "witnesses": items
                            })
                        );
                    } else {
                        for w in &ws {
                            println!("{w}");
                        }
                    }
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Mono { input, go_compat, emit_omega } => {
            let prog = parse(&input.file, Mode::Fgg)?;
            let prog = match check_program_fgg(&prog) {
                Ok(p) => p,
                Err(diags) => return Ok(check_failure(input.json, diags, &input.file)),
            };
            let out = mono_program_with(&prog, MonoOptions { go_compat, mutation: None })
                .map_err(|d| d.render(&input.file.display().to_string()))?;
            if input.json {
                let instances: Vec<String> = out.omega.iter().map(|i| i.to_string()).collect();
                let mut obj = serde_json::json!({
                    "ok": true,
                    "program": pretty_program(&out.program),
                });
                if emit_omega {
                    obj["omega"] = serde_json::json!(instances);
                }
                println!("{obj}");
            } else {
                if emit_omega {
                    for inst in &out.omega {
                        println!("// {inst}");
                    }
                }
                print!("{}", pretty_program(&out.program));
            }
            ExitCode::SUCCESS
        }
        Cmd::Bisim { files, fuel } => {
            if files.is_empty() {
                return Err("bisim needs at least one file".into());
            }
            let fuel = default_fuel(fuel);
            let mut programs = Vec::new();
            for f in &files {
                let prog = parse(f, Mode::Fgg)?;
                let prog = check_program_fgg(&prog).map_err(|ds| {
                    ds.first()
                        .map(|d| d.render(&f.display().to_string()))
                        .unwrap_or_else(|| "type error".into())
                })?;
                programs.push((f.display().to_string(), prog));
            }
            let report = bisim_corpus(
                programs.iter().map(|(n, p)| (n.clone(), p)),
                fuel,
            )
            .map_err(|d| d.render("bisim"))?;
            print!("{}", report.render());
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Enumerate { bound, count_only, run_bisim, json } => {
            if run_bisim {
                let report = fuzz_pipeline(bound).map_err(|d| d.render("enumerate"))?;
                if json {
                    let fails: Vec<String> = report
                        .failures
                        .iter()
                        .map(|(src, v)| format!("{v}: {src}"))
                        .collect();
                    println!(
                        "{}",
                        serde_json::json!({
                            "ok": report.failures.is_empty(),
                            "total": report.total,
                            "passed": report.passed,
                            "skipped": report.skipped,
                            "failures": fails,
                        })
                    );
                } else {
                    println!(
                        "total {} passed {} skipped {} failed {}",
                        report.total,
                        report.passed,
                        report.skipped,
                        report.failures.len()
                    );
                    for (src, v) in &report.failures {
                        println!("--- {v}\n{src}");
                    }
                }
                return Ok(if report.failures.is_empty() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            }
            if count_only {
                let n = enumerate(bound).count();
                if json {
                    println!("{}", serde_json::json!({ "ok": true, "count": n }));
                } else {
                    println!("{n}");
                }
            } else if json {
                for p in enumerate(bound) {
                    println!(
                        "{}",
                        serde_json::json!({
                            "size": program_size(&p),
                            "program": pretty_program(&p),
                        })
                    );
                }
            } else {
                for p in enumerate(bound) {
                    println!("// size {}", program_size(&p));
                    print!("{}", pretty_program(&p));
                    println!();
                }
            }
            ExitCode::SUCCESS
        }
    })
}

//! Batch verification front end: run scenario files, build solution
//! families, reproduce the bundled example catalog, list what is bundled.
//!
//! Exit codes: 0 pass, 1 fail, 2 input/format error, 3 conditional-only
//! (zero modulo unresolved symbolic functions), 64 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use walker3::eval::Env;
use walker3::families::{catalog, CatalogEntry};
use walker3::scenario::{Scenario, ScenarioError, ScenarioReport};
use walker3::verify::{check_zero, Verdict};
use walker3_cli::{build, report, scenario_io, CliError};

#[derive(Parser, Debug)]
#[command(name = "walker3", version, about = "Curvature and soliton checks for a family of 3d metrics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Override the sampling seed of every scenario run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the number of sample points per component.
    #[arg(long, global = true)]
    samples: Option<u32>,
    /// Override the numeric zero tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Suppress report output; only the exit code speaks.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the checks requested by a scenario file.
    Check { path: PathBuf },
    /// Construct a classified solution family and write it as a scenario.
    Build {
        family: String,
        inputs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run a bundled example (or "all") against its expected verdicts.
    Reproduce { name: String },
    /// List the bundled example names.
    List,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match run(&cli) {
        Ok(c) => c,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    };
    ExitCode::from(code)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Check { path } => cmd_check(cli, path),
        Cmd::Build {
            family,
            inputs,
            out,
        } => cmd_build(cli, family, inputs, out.as_deref()),
        Cmd::Reproduce { name } => cmd_reproduce(cli, name),
        Cmd::List => {
            let names: Vec<String> = catalog().iter().map(|e| e.name().to_string()).collect();
            if !cli.quiet {
                match cli.format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&names)?),
                    Format::Text => {
                        for n in &names {
                            println!("{n}");
                        }
                    }
                }
            }
            Ok(0)
        }
    }
}

fn apply_overrides(cli: &Cli, s: &mut Scenario) {
    if let Some(seed) = cli.seed {
        s.sampling.seed = seed;
    }
    if let Some(samples) = cli.samples {
        s.sampling.count = samples;
    }
    if let Some(tol) = cli.tol {
        s.sampling.tol = tol;
    }
}

fn run_scenario(s: &Scenario) -> Result<ScenarioReport, CliError> {
    s.run().map_err(|e| match e {
        ScenarioError::IncompatibleField(c) => CliError::Value(format!(
            "check {:?} is incompatible with the scenario's field shape",
            c.name()
        )),
        ScenarioError::Verify(_) => CliError::Exhausted,
    })
}

fn exit_code_for(r: &ScenarioReport) -> u8 {
    if r.all_zero() {
        0
    } else if r
        .checks
        .iter()
        .flat_map(|c| c.components.iter())
        .all(|(_, v)| v.is_zero() || matches!(v, Verdict::Conditional { .. }))
    {
        3
    } else {
        1
    }
}

fn cmd_check(cli: &Cli, path: &Path) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut scenario = scenario_io::read_scenario_file(&text)?;
    apply_overrides(cli, &mut scenario);
    let r = run_scenario(&scenario)?;
    if !cli.quiet {
        match cli.format {
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&report::report_json(&scenario, &r))?
            ),
            Format::Text => print!("{}", report::report_text(&r)),
        }
    }
    Ok(exit_code_for(&r))
}

fn cmd_build(
    cli: &Cli,
    family: &str,
    inputs: &Path,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(inputs)?;
    let dto: build::BuildDto = serde_json::from_str(&text)?;
    let (scenario, constraints) = build::build_family(family, &dto)?;
    let mut cmap = serde_json::Map::new();
    for (k, v) in &constraints {
        cmap.insert(k.clone(), json!(v));
    }
    let doc = json!({
        "constraints": serde_json::Value::Object(cmap),
        "scenario": serde_json::to_value(scenario_io::from_scenario(&scenario))?,
    });
    let rendered = serde_json::to_string_pretty(&doc)?;
    match out {
        Some(p) => std::fs::write(p, rendered + "\n")?,
        None => {
            if !cli.quiet {
                println!("{rendered}");
            }
        }
    }
    Ok(0)
}

struct ReproOutcome {
    report: ScenarioReport,
    matched: bool,
    notes: Vec<String>,
}

fn reproduce_entry(cli: &Cli, entry: &CatalogEntry) -> Result<ReproOutcome, CliError> {
    let mut scenario = entry.scenario.clone();
    apply_overrides(cli, &mut scenario);
    let report = run_scenario(&scenario)?;
    let mut matched = true;
    let mut notes = Vec::new();
    for c in &report.checks {
        for (key, v) in &c.components {
            let want_zero = entry.expected_zero(c.check.name(), key);
            if v.is_zero() != want_zero {
                matched = false;
                notes.push(format!(
                    "{} {key}: expected {}, got {}",
                    c.check.name(),
                    if want_zero { "zero" } else { "non-zero" },
                    if v.is_zero() { "zero" } else { "non-zero" }
                ));
            } else if !want_zero {
                notes.push(format!(
                    "{} {key}: non-zero as expected (diagnostic only)",
                    c.check.name()
                ));
            }
        }
    }
    let env = Env::default();
    for (label, e) in entry.constraints.iter().chain(entry.diagnostics.iter()) {
        let v = check_zero(e, &env, &scenario.sampling).map_err(|_| CliError::Exhausted)?;
        if !v.is_zero() {
            matched = false;
            notes.push(format!("identity {label} did not vanish"));
        }
    }
    Ok(ReproOutcome {
        report,
        matched,
        notes,
    })
}

fn cmd_reproduce(cli: &Cli, name: &str) -> Result<u8, CliError> {
    let entries: Vec<CatalogEntry> = if name == "all" {
        catalog()
    } else {
        vec![walker3::families::lookup(name).map_err(CliError::Family)?]
    };
    let mut all_matched = true;
    let mut docs = Vec::new();
    for entry in &entries {
        let outcome = reproduce_entry(cli, entry)?;
        all_matched &= outcome.matched;
        match cli.format {
            Format::Json => {
                let mut scenario = entry.scenario.clone();
                apply_overrides(cli, &mut scenario);
                docs.push(json!({
                    "matched": outcome.matched,
                    "name": entry.name(),
                    "notes": outcome.notes,
                    "report": report::report_json(&scenario, &outcome.report),
                }));
            }
            Format::Text => {
                if !cli.quiet {
                    println!(
                        "{}: {}",
                        entry.name(),
                        if outcome.matched { "ok" } else { "MISMATCH" }
                    );
                    for n in &outcome.notes {
                        println!("  {n}");
                    }
                }
            }
        }
    }
    if cli.format == Format::Json && !cli.quiet {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "entries": docs,
                "matched": all_matched,
                "version": report::VERSION,
            }))?
        );
    }
    Ok(if all_matched { 0 } else { 1 })
}

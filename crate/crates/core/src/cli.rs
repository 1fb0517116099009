//! The `optlab` command line.
//!
//! Exit codes: 0 success or property holds, 1 usage/parse/semantic error,
//! 2 property fails (witness printed), 3 enumeration cap exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::demo::{self, DemoError};
use crate::dsl;
use crate::oracles::{self, DeterminismConfig, EnumCap, OracleError, TheoryReport};
use crate::system::SystemType;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Largest `n` or `m` accepted on the command line.
const MAX_CLI_SIZE: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "optlab",
    version,
    about = "Exact evaluation and brute-force checks for a deterministic, non-causal operational theory",
    after_help = "Systems are written NxM on the command line, mirroring `N |> M` in .opt files.\n\
                  Exit codes: 0 ok/holds, 1 usage or input error, 2 property fails, 3 enumeration cap exceeded.\n\
                  OPTLAB_ENUM_CAP overrides the enumeration cap (default 1000000)."
)]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, analyze and run every `eval` statement of an .opt file.
    Eval { file: PathBuf },
    /// List every event of a kind in canonical order.
    Enumerate {
        #[arg(long, value_parser = parse_system)]
        system: SystemType,
        #[arg(long, value_enum)]
        kind: EventKindArg,
        /// Output system for transforms (defaults to --system).
        #[arg(long, value_parser = parse_system)]
        out: Option<SystemType>,
    },
    /// Run a property oracle and print its report.
    Check {
        #[arg(value_enum)]
        property: Property,
        #[arg(long, value_parser = parse_system)]
        system: SystemType,
        /// Output system for admissibility-equiv (defaults to --system).
        #[arg(long, value_parser = parse_system)]
        out: Option<SystemType>,
        /// Maximum number of channel tests in determinism chains.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Ancilla for admissibility-equiv, or the second factor for local-disc.
        #[arg(long, value_parser = parse_system)]
        ancilla: Option<SystemType>,
        /// Random circuits sampled by the determinism check.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Seed for the random circuits.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Narrated reproduction of a worked example.
    Demo {
        #[arg(value_enum)]
        which: DemoArg,
    },
    /// Closed-form counts without enumerating.
    Count {
        #[arg(long, value_parser = parse_system)]
        system: SystemType,
        #[arg(long, value_parser = parse_system)]
        out: Option<SystemType>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EventKindArg {
    States,
    Effects,
    Transforms,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Causality,
    Determinism,
    LocalDisc,
    AdmissibilityEquiv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DemoArg {
    Alice,
    Signaling,
}

/// Parses `NxM` (also `N|>M`).
pub fn parse_system(s: &str) -> Result<SystemType, String> {
    let (n, m) = s
        .split_once(['x', 'X'])
        .or_else(|| s.split_once("|>"))
        .ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let size = |t: &str| -> Result<usize, String> {
        let v: usize = t
            .trim()
            .parse()
            .map_err(|_| format!("`{t}` is not a positive integer"))?;
        if v == 0 || v > MAX_CLI_SIZE {
            return Err(format!("sizes must lie in 1..={MAX_CLI_SIZE}, got {v}"));
        }
        Ok(v)
    };
    Ok(SystemType::new(size(n)?, size(m)?))
}

enum Failure {
    Usage(String),
    Cap(String),
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<DemoError> for Failure {
    fn from(e: DemoError) -> Self {
        match e {
            DemoError::Oracle(o) => o.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Eval { file } => eval(&file, json, out, err),
        Command::Enumerate {
            system,
            kind,
            out: target,
        } => enumerate(&system, kind, target.as_ref(), json, out),
        Command::Check {
            property,
            system,
            out: target,
            depth,
            ancilla,
            samples,
            seed,
        } => {
            let opts = CheckOptions {
                target,
                depth,
                ancilla,
                samples,
                seed,
            };
            check(property, &system, &opts, json, out)
        }
        Command::Demo { which } => run_demo(which, json, out),
        Command::Count {
            system,
            out: target,
        } => count(&system, target.as_ref(), json, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAP
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
    Ok(EXIT_OK)
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).expect("values serialize");
    emit(out, &format!("{text}\n"))
}

fn eval(file: &PathBuf, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let src = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let model = match dsl::load(&src) {
        Ok(m) => m,
        Err(diags) => {
            for d in &diags {
                let _ = writeln!(err, "{}:{d}", file.display());
            }
            return Ok(EXIT_USAGE);
        }
    };
    let results = dsl::execute(&model).map_err(|e| Failure::Usage(e.to_string()))?;
    if json {
        emit_json(
            out,
            &json!({ "file": file.display().to_string(), "results": results }),
        )
    } else {
        let mut text = String::new();
        for r in &results {
            text.push_str(&format!("{r}\n"));
        }
        emit(out, &text)
    }
}

fn enumerate(
    system: &SystemType,
    kind: EventKindArg,
    target: Option<&SystemType>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let cap = EnumCap::from_env();
    let (label, items): (String, Vec<String>) = match kind {
        EventKindArg::States => (
            format!("states on {system}"),
            oracles::enumerate_states(system, cap)?
                .iter()
                .map(ToString::to_string)
                .collect(),
        ),
        EventKindArg::Effects => (
            format!("effects on {system}"),
            oracles::enumerate_effects(system, cap)?
                .iter()
                .map(ToString::to_string)
                .collect(),
        ),
        EventKindArg::Transforms => {
            let target = target.unwrap_or(system);
            (
                format!("transforms {system} -> {target}"),
                oracles::enumerate_transformations(system, target, cap)?
                    .iter()
                    .map(ToString::to_string)
                    .collect(),
            )
        }
    };
    if json {
        emit_json(
            out,
            &json!({ "what": label, "count": items.len(), "items": items }),
        )
    } else {
        let mut text = String::new();
        for item in &items {
            text.push_str(item);
            text.push('\n');
        }
        text.push_str(&format!("count: {} {label}\n", items.len()));
        emit(out, &text)
    }
}

struct CheckOptions {
    target: Option<SystemType>,
    depth: usize,
    ancilla: Option<SystemType>,
    samples: usize,
    seed: u64,
}

fn check(
    property: Property,
    system: &SystemType,
    opts: &CheckOptions,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let cap = EnumCap::from_env();
    let report: TheoryReport = match property {
        Property::Causality => oracles::check_causality(system)?.report(),
        Property::Determinism => {
            let cfg = DeterminismConfig {
                depth: opts.depth,
                random_circuits: opts.samples,
                seed: opts.seed,
                ..DeterminismConfig::default()
            };
            oracles::check_determinism(system, &cfg, cap)?.report()
        }
        Property::LocalDisc => {
            let b = opts.ancilla.as_ref().unwrap_or(system);
            oracles::check_local_discriminability(system, b, cap)?.report()
        }
        Property::AdmissibilityEquiv => {
            let target = opts.target.as_ref().unwrap_or(system);
            let ancilla = opts.ancilla.clone().unwrap_or_else(|| system.clone());
            oracles::admissibility_equivalence(system, target, &[ancilla], cap)?.report()
        }
    };
    if json {
        emit(out, &format!("{}\n", report.to_json()))?;
    } else {
        emit(out, &report.to_string())?;
    }
    Ok(if report.verdict.holds() {
        EXIT_OK
    } else {
        EXIT_FAILS
    })
}

fn run_demo(which: DemoArg, json: bool, out: &mut dyn Write) -> Outcome {
    let (name, lines) = match which {
        DemoArg::Alice => ("alice", demo::alice_transcript()?),
        DemoArg::Signaling => ("signaling", demo::signaling_transcript()?),
    };
    if json {
        emit_json(out, &json!({ "demo": name, "lines": lines }))
    } else {
        emit(out, &(lines.join("\n") + "\n"))
    }
}

fn count(
    system: &SystemType,
    target: Option<&SystemType>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    use oracles::*;
    let (n, m) = (system.n() as u128, system.m() as u128);
    let mut rows: Vec<(String, u128)> = vec![
        ("states".into(), count_states(system)),
        ("atomic_states".into(), n * m),
        (
            "deterministic_states".into(),
            count_deterministic_states(system),
        ),
        ("effects".into(), count_effects(system)),
        ("deterministic_effects".into(), n),
        ("preparation_tests".into(), count_preparation_tests(system)),
        ("observation_tests".into(), count_observation_tests(system)),
    ];
    if let Some(t) = target {
        let (p, q) = (t.n() as u128, t.m() as u128);
        rows.extend([
            ("transformations".into(), count_transformations(system, t)),
            ("atomic_transformations".into(), n * m * p * q),
            ("channels".into(), count_channels(system, t)),
            ("channel_tests".into(), count_channel_tests(system, t)),
        ]);
    }
    let header = match target {
        Some(t) => format!("{system} -> {t}"),
        None => system.to_string(),
    };
    if json {
        let counts: serde_json::Map<String, serde_json::Value> = rows
            .iter()
            .map(|(k, v)| (k.clone(), json!(v.to_string())))
            .collect();
        emit_json(out, &json!({ "systems": header, "counts": counts }))
    } else {
        let mut text = format!("counts for {header}\n");
        for (k, v) in &rows {
            text.push_str(&format!("  {k:<24} {v}\n"));
        }
        emit(out, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["optlab"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn system_syntax() {
        assert_eq!(parse_system("2x3").unwrap(), SystemType::new(2, 3));
        assert_eq!(parse_system("2|>3").unwrap(), SystemType::new(2, 3));
        assert!(parse_system("0x3").is_err());
        assert!(parse_system("23").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["check", "causality", "--system", "1x3"]).0, EXIT_OK);
        let (code, out, _) = call(&["check", "causality", "--system", "2x2"]);
        assert_eq!(code, EXIT_FAILS);
        assert!(out.contains("verdict:  fails"));
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["count", "--system", "2y2"]).0, EXIT_USAGE);
        let (code, _, err) = call(&["enumerate", "--system", "9x9", "--kind", "states"]);
        assert_eq!(code, EXIT_CAP, "{err}");
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn text_and_json_agree() {
        let (_, text, _) = call(&["check", "causality", "--system", "2x2"]);
        let (_, json, _) = call(&["--json", "check", "causality", "--system", "2x2"]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["verdict"], "fails");
        assert!(text.contains("fails"));
        let (_, json, _) = call(&["count", "--system", "2x2", "--out", "2x2", "--json"]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["counts"]["transformations"], "289");
        assert_eq!(v["counts"]["channels"], "64");
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use hardy_core::lhv::{audit, quantum_constraints};
use hardy_core::report::{self, render_full_table, render_hom, render_scenario};
use hardy_core::{full_table, run_scenario, Backend, Rational, ScenarioConfig};
use serde::Deserialize;

#[derive(Parser)]
#[command(
    name = "hardy",
    version,
    about = "Exact simulator of the two-interferometer Hardy experiment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// All four beam-splitter layouts at p = 1 and the Hardy chain.
    Table,
    /// Enumerate the 16 deterministic local strategies.
    LhvAudit,
    /// Two-photon bunching at one beam splitter.
    Hom,
}

enum Failure {
    Config(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Domain(m) => m,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    bs2_plus: bool,
    #[serde(default)]
    bs2_minus: bool,
    #[serde(alias = "p")]
    reaction_probability: serde_json::Value,
    #[serde(default)]
    backend: Option<String>,
}

/// Parses `n`, `n/d`, or a plain decimal such as `0.25` or `2.5e-1` exactly.
fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.contains('/') {
        return Rational::from_str(text).ok();
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(at) => (&text[..at], text[at + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.strip_prefix('+').unwrap_or(&digits);
    if digits.is_empty() || digits == "-" {
        return None;
    }
    let mut value = Rational::from_str(digits).ok()?;
    let scale = exponent.checked_sub(frac_part.len() as i32)?;
    if scale.unsigned_abs() > 64 {
        return None;
    }
    let factor =
        Rational::from_str(&format!("1{}", "0".repeat(scale.unsigned_abs() as usize))).ok()?;
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(value)
}

fn load_config(path: &Path) -> Result<ScenarioConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let raw: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("malformed config {}: {e}", path.display())))?;
    let p_text = match &raw.reaction_probability {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => {
            return Err(Failure::Config(format!(
                "reaction_probability must be a string or number, got {other}"
            )))
        }
    };
    let reaction_probability = parse_rational(&p_text)
        .ok_or_else(|| Failure::Config(format!("cannot parse reaction_probability {p_text:?}")))?;
    let backend = match raw.backend.as_deref() {
        None | Some("exact") => Backend::Exact,
        Some("float") => Backend::Float,
        Some(other) => return Err(Failure::Config(format!("unknown backend {other:?}"))),
    };
    let cfg = ScenarioConfig {
        bs2_plus: raw.bs2_plus,
        bs2_minus: raw.bs2_minus,
        reaction_probability,
        backend,
    };
    cfg.validate().map_err(|e| Failure::Domain(e.to_string()))?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_run(config: &Path, csv: Option<&Path>, json: Option<&Path>) -> Result<String, Failure> {
    let cfg = load_config(config)?;
    let outcome = run_scenario(&cfg).map_err(|e| Failure::Domain(e.to_string()))?;
    let records = report::records(&outcome);
    if let Some(path) = csv {
        report::write_csv(create(path)?, &records)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = json {
        let mut w = create(path)?;
        report::write_json(&mut w, &records)
            .and_then(|()| w.flush().map_err(serde_json::Error::io))
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(render_scenario(&outcome))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, csv, json } => cmd_run(config, csv.as_deref(), json.as_deref()),
        Command::Table => Ok(render_full_table(&full_table())),
        Command::LhvAudit => Ok(audit(&quantum_constraints()).to_string()),
        Command::Hom => Ok(render_hom()),
    };
    match result {
        Ok(text) => {
            let mut out = io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

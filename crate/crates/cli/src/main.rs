use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use lpsharp::{
    check_script, lint_text, parse_formula, parse_script, saturate, BlockedSetSpec, CheckReport, DefEnv,
    DerivationScript, Formula, Judgment, Justification, Mode, RuleId, SaturationConfig, SaturationResult, Variant,
};
use serde::{Deserialize, Serialize};

const OK: u8 = 0;
const USAGE: u8 = 1;
const REJECTED: u8 = 2;
const VIOLATION: u8 = 3;

const EXIT_CODES: &str = "\
Exit codes:
  0  success: every step checked, or no lint violations
  1  usage, I/O or parse error
  2  a derivation step was rejected or malformed
  3  lint found a variable-sharing violation";

#[derive(Parser, Debug)]
#[command(name = "lpsharp", version, about = "Check derivations under restricted modus ponens", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a derivation script.
    #[command(after_help = EXIT_CODES)]
    Check {
        file: PathBuf,
        #[arg(long, default_value = "unrestricted")]
        mode: Mode,
        /// Blocked set, e.g. `curry-set(all)`, `curry-truth(all; T)`, `none`.
        #[arg(long)]
        blocked: Option<BlockedSetSpec>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate a Curry derivation and check it.
    #[command(after_help = EXIT_CODES)]
    Demo {
        variant: Variant,
        #[arg(long, default_value = "unrestricted")]
        mode: Mode,
        #[arg(long)]
        blocked: Option<BlockedSetSpec>,
        /// The arbitrary conclusion the derivation aims at.
        #[arg(long, default_value = "f")]
        falsum: Formula,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Report variable-sharing verdicts for a file of formulas.
    #[command(after_help = EXIT_CODES)]
    Lint {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run bounded forward saturation from a TOML config.
    #[command(after_help = EXIT_CODES)]
    Saturate {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// What a command writes to stdout plus the exit code it earned.
struct Outcome {
    stdout: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Check { file, mode, blocked, format } => {
            let script = parse_script(&read(&file)?).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let blocked = resolve_blocked(mode, blocked, || lpsharp::make_curry_set(lpsharp::Delta::All));
            let report = check_script(&script, mode, &blocked);
            let stdout = match format {
                Format::Text => report.to_string(),
                Format::Json => json(&report)?,
            };
            Ok(Outcome { stdout, code: check_code(&report) })
        }
        Command::Demo { variant, mode, blocked, falsum, format } => {
            let blocked = resolve_blocked(mode, blocked, || variant.default_blocked());
            let script = variant.script(&falsum);
            let report = check_script(&script, mode, &blocked);
            Ok(Outcome { stdout: demo_output(&script, &report, format)?, code: check_code(&report) })
        }
        Command::Lint { file, format } => {
            let report = lint_text(&read(&file)?).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let stdout = match format {
                Format::Text => report.to_string(),
                Format::Json => json(&report)?,
            };
            let code = if report.violations() > 0 { VIOLATION } else { OK };
            Ok(Outcome { stdout, code })
        }
        Command::Saturate { config, format } => {
            let run = SaturateRun::load(&config)?;
            let result = saturate(&run.config);
            let stdout = match format {
                Format::Text => run.text(&result),
                Format::Json => json(&run.dump(&result))?,
            };
            Ok(Outcome { stdout, code: OK })
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn check_code(report: &CheckReport) -> u8 {
    if report.all_ok() {
        OK
    } else {
        REJECTED
    }
}

/// Restricted mode with no spec falls back to `default` and says so.
fn resolve_blocked(
    mode: Mode,
    given: Option<BlockedSetSpec>,
    default: impl FnOnce() -> BlockedSetSpec,
) -> BlockedSetSpec {
    match (mode, given) {
        (_, Some(spec)) => spec,
        (Mode::Unrestricted, None) => BlockedSetSpec::Empty,
        (Mode::Restricted, None) => {
            let spec = default();
            eprintln!("note: restricted mode without --blocked; using {spec}");
            spec
        }
    }
}

#[derive(Serialize)]
struct DemoDump<'a> {
    script: String,
    report: &'a CheckReport,
}

fn demo_output(script: &DerivationScript, report: &CheckReport, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(format!("{script}\n{report}")),
        Format::Json => json(&DemoDump { script: script.to_string(), report }),
    }
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct SaturateFile {
    seeds: Vec<String>,
    rules: Vec<String>,
    #[serde(default)]
    mode: Option<Mode>,
    #[serde(default)]
    blocked: Option<String>,
    #[serde(default)]
    max_size: Option<usize>,
    #[serde(default)]
    max_rounds: Option<usize>,
    #[serde(default)]
    pool: Option<Vec<String>>,
    #[serde(default)]
    defs: BTreeMap<String, String>,
    #[serde(default)]
    goal: Option<String>,
}

struct SaturateRun {
    config: SaturationConfig,
    goal: Option<Judgment>,
}

#[derive(Serialize)]
struct DerivedEntry {
    index: usize,
    judgment: Judgment,
    round: usize,
    by: String,
    from: Vec<usize>,
}

#[derive(Serialize)]
struct GoalDump {
    judgment: Judgment,
    derived: bool,
    witness_script: Option<String>,
}

#[derive(Serialize)]
struct SaturateDump {
    mode: Mode,
    blocked: String,
    max_size: usize,
    max_rounds: usize,
    rounds: usize,
    truncated: bool,
    blocked_applications: usize,
    derived: Vec<DerivedEntry>,
    goal: Option<GoalDump>,
}

impl SaturateRun {
    fn load(path: &Path) -> Result<Self> {
        let raw: SaturateFile =
            toml::from_str(&read(path)?).with_context(|| format!("{}: invalid config", path.display()))?;
        Self::from_file(raw).with_context(|| format!("{}: invalid config", path.display()))
    }

    fn from_file(raw: SaturateFile) -> Result<Self> {
        let mut env = DefEnv::new();
        for (name, body) in &raw.defs {
            let f = parse_formula(body).map_err(|e| anyhow!("def {name}: {e}"))?;
            env.define(name.as_str(), f).map_err(|e| anyhow!("def {name}: {e}"))?;
        }
        let judgment = |text: &str| -> Result<Judgment> {
            let j: Judgment = text.parse().map_err(|e| anyhow!("`{text}`: {e}"))?;
            for f in j.formulas() {
                if let Some(c) = env.undefined_in(f).first() {
                    bail!("`{text}`: constant `{c}` is not defined");
                }
            }
            Ok(j)
        };
        let seeds = raw.seeds.iter().map(|s| judgment(s)).collect::<Result<Vec<_>>>()?;
        let rules = raw
            .rules
            .iter()
            .map(|r| r.parse::<RuleId>().map_err(|e| anyhow!(e)))
            .collect::<Result<Vec<_>>>()?;
        let goal = raw.goal.as_deref().map(judgment).transpose()?;
        let mut config = SaturationConfig::new(seeds, rules);
        let mode = raw.mode.unwrap_or(Mode::Unrestricted);
        config.blocked = match raw.blocked {
            Some(text) => text.parse().map_err(|e| anyhow!("blocked: {e}"))?,
            None => resolve_blocked(mode, None, || lpsharp::make_curry_set(lpsharp::Delta::All)),
        };
        config.mode = mode;
        if let Some(n) = raw.max_size {
            config.max_size = n;
        }
        if let Some(n) = raw.max_rounds {
            config.max_rounds = n;
        }
        if let Some(pool) = raw.pool {
            config.pool = Some(
                pool.iter()
                    .map(|t| parse_formula(t).map_err(|e| anyhow!("pool `{t}`: {e}")))
                    .collect::<Result<_>>()?,
            );
        }
        config.env = env;
        Ok(SaturateRun { config, goal })
    }

    fn entries(&self, result: &SaturationResult) -> Vec<DerivedEntry> {
        (0..result.derived.len())
            .map(|i| {
                let (by, from) = match &result.justification[i] {
                    Justification::Seed(k) => (format!("seed {}", k + 1), Vec::new()),
                    Justification::Rule(rule) => (rule.id().name().to_string(), rule.premises().into_iter().copied().collect()),
                };
                DerivedEntry { index: i, judgment: result.derived[i].clone(), round: result.round_found[i], by, from }
            })
            .collect()
    }

    fn goal(&self, result: &SaturationResult) -> Option<GoalDump> {
        let goal = self.goal.as_ref()?;
        let witness = result.witness(goal);
        Some(GoalDump {
            judgment: goal.clone(),
            derived: witness.is_some(),
            witness_script: witness.map(|w| w.to_script(&self.config.seeds, &self.config.env).to_string()),
        })
    }

    fn dump(&self, result: &SaturationResult) -> SaturateDump {
        SaturateDump {
            mode: self.config.mode,
            blocked: self.config.blocked.to_string(),
            max_size: self.config.max_size,
            max_rounds: self.config.max_rounds,
            rounds: result.rounds,
            truncated: result.truncated,
            blocked_applications: result.blocked_applications,
            derived: self.entries(result),
            goal: self.goal(result),
        }
    }

    fn text(&self, result: &SaturationResult) -> String {
        let d = self.dump(result);
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", d.mode);
        let _ = writeln!(out, "blocked: {}", d.blocked);
        let _ = writeln!(out, "bounds: size <= {}, rounds <= {}", d.max_size, d.max_rounds);
        for e in &d.derived {
            let from: Vec<String> = e.from.iter().map(|i| format!("#{i}")).collect();
            let by = if from.is_empty() { e.by.clone() } else { format!("{} {}", e.by, from.join(", ")) };
            let _ = writeln!(out, "#{} [round {}] {}  ({by})", e.index, e.round, e.judgment);
        }
        let _ = writeln!(
            out,
            "rounds: {}, derived: {}, truncated: {}, blocked MP applications: {}",
            d.rounds,
            d.derived.len(),
            d.truncated,
            d.blocked_applications
        );
        if let Some(g) = &d.goal {
            match &g.witness_script {
                Some(script) => {
                    let _ = writeln!(out, "goal {}: derived\n{script}", g.judgment);
                }
                None => {
                    let _ = writeln!(out, "goal {}: not derived within bounds", g.judgment);
                }
            }
        }
        out
    }
}

//! Verification harness for counting quasimorphisms on amalgamated free
//! products and HNN extensions with finite factors.
//!
//! Exit codes: 0 all checks pass, 1 check failures, 2 configuration or
//! usage errors.

mod config;
mod eval;
mod instance;
mod report;
mod suites;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cqm_core::qm::{GroupModel, Pattern};
use cqm_core::{cover_refute, defect_scan, HnnPresentation, ScanStrategy, SymbolPattern};

use instance::{load_instance, Instance};
use report::SuiteReport;

#[derive(Parser)]
#[command(
    name = "cqm",
    about = "Exact verification of counting quasimorphisms on amalgams and HNN extensions",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites against an instance.
    Verify {
        /// Built-in instance name (psl2z, sl2z, klein-hnn).
        #[arg(long)]
        instance: Option<String>,
        /// JSON instance config file (overrides --instance).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Suite names (repeatable or comma separated); see --list.
        #[arg(long)]
        suite: Vec<String>,
        /// Run every suite applicable to the instance.
        #[arg(long)]
        all: bool,
        /// List available suites and exit.
        #[arg(long)]
        list: bool,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the family index cap.
        #[arg(long)]
        max_i: Option<u32>,
        /// Override the power cap for value checks.
        #[arg(long)]
        max_n: Option<usize>,
        /// Override the exhaustive enumeration radius.
        #[arg(long)]
        radius: Option<usize>,
        /// Serialize the report in this format (to stdout or --out).
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the serialized report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the coboundary defect |delta h_w| and emit the CSV report.
    Defect {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Pattern: a family reference (w0, w1, ...) or a word literal.
        #[arg(long)]
        word: String,
        /// Exhaustive scan over the ball of this radius.
        #[arg(long)]
        exhaustive_radius: Option<usize>,
        /// Random scan with this many sampled pairs.
        #[arg(long)]
        random: Option<usize>,
        /// Maximum sampled word length (random scans).
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a small expression (reduce, eq, len, cw, hw, pattern,
    /// cover, abelian).
    Eval {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        expr: String,
    },
    /// Print a family word, its length and its symbol pattern.
    Family {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Family index.
        #[arg(long, default_value_t = 0)]
        i: u32,
        /// Power of the family word.
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Print the inverse word instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Run the symbolic covering checker and emit the offset CSV.
    Cover {
        /// Family index: checks W_i^2 against W_i^-1.
        #[arg(long, default_value_t = 0)]
        i: u32,
        /// Explicit text pattern over `1 ! 2 @` (overrides --i).
        #[arg(long)]
        text: Option<String>,
        /// Explicit probe pattern over `1 ! 2 @`.
        #[arg(long)]
        probe: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify {
            instance,
            config,
            suite,
            all,
            list,
            seed,
            max_i,
            max_n,
            radius,
            format,
            out,
        } => {
            if list {
                for s in suites::registry() {
                    println!("{}  ({})", s.name(), s.anchor());
                }
                return 0;
            }
            let mut inst = match load_instance(instance.as_deref(), config.as_deref()) {
                Ok(i) => i,
                Err(e) => return config_error(e),
            };
            {
                let caps = inst.caps_mut();
                if let Some(s) = seed {
                    caps.seed = s;
                }
                if let Some(i) = max_i {
                    caps.max_index = i;
                }
                if let Some(n) = max_n {
                    caps.max_n = n;
                }
                if let Some(r) = radius {
                    caps.exhaustive_radius = r;
                }
            }
            let selected: Vec<String> = suite
                .iter()
                .flat_map(|s| s.split(','))
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if !all && selected.is_empty() {
                eprintln!("error: pass --all or --suite <name> (see --list)");
                return 2;
            }
            let registry = suites::registry();
            let mut to_run: Vec<&dyn suites::Suite> = Vec::new();
            if all || selected.iter().any(|s| s == "all") {
                to_run = registry
                    .iter()
                    .map(AsRef::as_ref)
                    .filter(|s| s.supports(inst.kind()))
                    .collect();
            } else {
                for name in &selected {
                    match registry.iter().find(|s| s.name() == name.as_str()) {
                        Some(s) => {
                            if s.supports(inst.kind()) {
                                to_run.push(s.as_ref());
                            } else {
                                eprintln!(
                                    "error: suite {name} does not apply to a {} instance",
                                    inst.kind()
                                );
                                return 2;
                            }
                        }
                        None => {
                            eprintln!("error: unknown suite {name:?} (see --list)");
                            return 2;
                        }
                    }
                }
            }
            let started = Instant::now();
            let mut checks = Vec::new();
            for s in to_run {
                checks.extend(s.run(&inst));
            }
            let report = SuiteReport::new(
                inst.name().to_string(),
                inst.caps().seed,
                checks,
                started.elapsed().as_millis(),
            );
            let serialized = format.map(|f| match f {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            });
            let human_to_stderr = serialized.is_some() && out.is_none();
            let emit = |line: &str| {
                if human_to_stderr {
                    eprintln!("{line}");
                } else {
                    println!("{line}");
                }
            };
            for c in &report.checks {
                let mark = if c.pass { "PASS" } else { "FAIL" };
                let mut line = format!(
                    "[{mark}] {} ({}) [{}] expected={} actual={}",
                    c.id, c.anchor, c.params, c.expected, c.actual
                );
                if let Some(w) = &c.witness {
                    line.push_str(&format!(" witness={w}"));
                }
                emit(&line);
            }
            emit(&format!(
                "verify: instance={} checks={} failures={} verdict={}",
                report.instance,
                report.checks.len(),
                report.failures(),
                report.verdict
            ));
            eprintln!("elapsed: {} ms", report.wall_ms);
            if let Some(text) = serialized {
                if let Some(path) = &out {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                } else {
                    println!("{text}");
                }
            }
            if report.passed() {
                0
            } else {
                1
            }
        }
        Cmd::Defect {
            instance,
            config,
            word,
            exhaustive_radius,
            random,
            max_len,
            seed,
            out,
        } => {
            let inst = match load_instance(instance.as_deref(), config.as_deref()) {
                Ok(i) => i,
                Err(e) => return config_error(e),
            };
            let caps = inst.caps().clone();
            let strategy = match (exhaustive_radius, random) {
                (Some(r), None) => ScanStrategy::Exhaustive { radius: r },
                (None, Some(samples)) => ScanStrategy::Random {
                    samples,
                    max_len: max_len.unwrap_or(caps.defect_max_len),
                    seed: seed.unwrap_or(caps.seed),
                },
                _ => {
                    eprintln!("error: pass exactly one of --exhaustive-radius or --random");
                    return 2;
                }
            };
            let report = match &inst {
                Instance::Amalgam(a) => {
                    let w = match parse_amalgam_pattern_word(a, &word) {
                        Ok(w) => w,
                        Err(e) => return config_error_msg(&e),
                    };
                    match Pattern::new(&a.pres, w.clone()) {
                        Ok(pat) => defect_scan(&a.pres, &pat, strategy, &word),
                        Err(e) => {
                            return pattern_error(&a.pres, &w, e);
                        }
                    }
                }
                Instance::Hnn(h) => {
                    let w = match parse_hnn_pattern_word(h, &word) {
                        Ok(w) => w,
                        Err(e) => return config_error_msg(&e),
                    };
                    match Pattern::new(&h.pres, w.clone()) {
                        Ok(pat) => defect_scan(&h.pres, &pat, strategy, &word),
                        Err(e) => {
                            return pattern_error(&h.pres, &w, e);
                        }
                    }
                }
            };
            let csv = report.to_csv();
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, csv) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                print!("{csv}");
            }
            eprintln!(
                "defect: pattern={} {} observed_max={} bound={} -> {}",
                report.pattern_id,
                report.strategy,
                report.observed_max,
                report.bound,
                if report.passed() { "PASS" } else { "FAIL" }
            );
            if report.passed() {
                0
            } else {
                1
            }
        }
        Cmd::Eval {
            instance,
            config,
            expr,
        } => {
            let inst = match load_instance(instance.as_deref(), config.as_deref()) {
                Ok(i) => i,
                Err(e) => return config_error(e),
            };
            match eval::eval(&inst, &expr) {
                Ok(text) => {
                    println!("{text}");
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Cmd::Family {
            instance,
            config,
            i,
            power,
            inverse,
        } => {
            let inst = match load_instance(instance.as_deref(), config.as_deref()) {
                Ok(inst) => inst,
                Err(e) => return config_error(e),
            };
            match &inst {
                Instance::Amalgam(a) => {
                    let fam = match a.family() {
                        Ok(f) => f,
                        Err(e) => return config_error(e),
                    };
                    let w = match fam.word(i) {
                        Ok(w) => w,
                        Err(e) => return config_error(e),
                    };
                    let mut word = w.pow(power);
                    if inverse {
                        word = a.pres.inverse_word(&word);
                    }
                    let mut pattern = SymbolPattern::family(i).pow(power);
                    if inverse {
                        pattern = pattern.inverse();
                    }
                    println!("len={}", word.len());
                    println!("pattern={}", pattern.render());
                    println!("{word}");
                }
                Instance::Hnn(h) => {
                    let fam = match h.family() {
                        Ok(f) => f,
                        Err(e) => return config_error(e),
                    };
                    let w = match fam.word(i) {
                        Ok(w) => w,
                        Err(e) => return config_error(e),
                    };
                    let mut word = w.pow(power);
                    if inverse {
                        word = h.pres.inverse_word(&word);
                    }
                    println!("len={}", word.len());
                    println!("pattern={}", HnnPresentation::t_pattern(&word).render());
                    println!("{word}");
                }
            }
            0
        }
        Cmd::Cover {
            i,
            text,
            probe,
            out,
        } => {
            let (text_pat, probe_pat) = match (&text, &probe) {
                (Some(t), Some(p)) => {
                    let t = match SymbolPattern::parse(t) {
                        Some(t) => t,
                        None => return config_error_msg("text must use the alphabet `1 ! 2 @`"),
                    };
                    let p = match SymbolPattern::parse(p) {
                        Some(p) => p,
                        None => return config_error_msg("probe must use the alphabet `1 ! 2 @`"),
                    };
                    (t, p)
                }
                (None, None) => {
                    let w = SymbolPattern::family(i);
                    (w.pow(2), w.inverse())
                }
                _ => return config_error_msg("pass both --text and --probe, or neither"),
            };
            let report = match cover_refute(&text_pat, &probe_pat) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            let csv = report.to_csv();
            if let Some(path) = out {
                if let Err(e) = std::fs::write(&path, csv) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                print!("{csv}");
            }
            eprintln!(
                "cover: {} ({}/{} offsets refuted)",
                if report.cannot_cover() {
                    "cannot cover"
                } else {
                    "not refuted"
                },
                report.refuted_count(),
                report.offsets()
            );
            0
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    2
}

fn config_error_msg(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

/// Reports a pattern precondition violation with the offending position in
/// `w^2`, then returns the configuration error code.
fn pattern_error<M: GroupModel>(model: &M, letters: &[M::Letter], e: cqm_core::QmError) -> i32 {
    let mut square = letters.to_vec();
    square.extend_from_slice(letters);
    let mut at = None;
    for end in 1..=square.len() {
        if !model.is_reduced_word(&square[..end]) {
            at = Some(end - 1);
            break;
        }
    }
    match at {
        Some(pos) => eprintln!("error: {e} (offending adjacency ends at letter {pos} of w^2)"),
        None => eprintln!("error: {e}"),
    }
    2
}

fn parse_amalgam_pattern_word(
    inst: &instance::AmalgamInstance,
    token: &str,
) -> Result<Vec<cqm_core::ALetter>, String> {
    if let Some(rest) = token.strip_prefix('w') {
        if let Ok(i) = rest.parse::<u32>() {
            let fam = inst.family().map_err(|e| e.to_string())?;
            return Ok(fam.word(i).map_err(|e| e.to_string())?.letters().to_vec());
        }
    }
    inst.pres
        .parse_word(token)
        .map(|w| w.letters().to_vec())
        .map_err(|e| e.to_string())
}

fn parse_hnn_pattern_word(
    inst: &instance::HnnInstance,
    token: &str,
) -> Result<Vec<cqm_core::HLetter>, String> {
    if let Some(rest) = token.strip_prefix('w') {
        if let Ok(i) = rest.parse::<u32>() {
            let fam = inst.family().map_err(|e| e.to_string())?;
            return Ok(fam.word(i).map_err(|e| e.to_string())?.letters().to_vec());
        }
    }
    inst.pres
        .parse_word(token)
        .map(|w| w.letters().to_vec())
        .map_err(|e| e.to_string())
}

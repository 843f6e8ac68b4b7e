//! Command-line surface of `ucsets`. [`run`] takes an argument vector and
//! returns the exit status and both output streams, so the binary is a thin
//! wrapper and tests can drive every subcommand in-process.
//!
//! Exit status: 0 on success (and when every audited claim holds), 1 when a
//! counterexample, a failed conjecture check or an invalid sequence is
//! found, 2 on usage, parse and precondition errors.

pub mod files;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use ucsets::audit::{audit_all, render_report, AuditConfig, ClaimId, ReportFormat};
use ucsets::predicates::{
    extension, is_quasiminimal, is_vincolated, is_vincolated_to, minimal_elements,
};
use ucsets::search::{
    count_union_closed_with, enumerate_union_closed_with, sample_family, sample_union_closed,
    EnumerationLimit,
};
use ucsets::sequences::{
    build_ideal_sequence, build_optimal_sequence, build_union_closed_sequence,
    find_theorem3_witness, validate_sequence, OptimalOutcome, Strategy, Theorem3Outcome,
};
use ucsets::{basis, decompose, Family};

use files::{
    parse_family, parse_sequence, parse_set, render_family, render_sequence, render_set,
    ParseOptions,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Library(#[from] ucsets::Error),
}

/// What a finished invocation produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "ucsets",
    version,
    about = "Union-closed families: bases, deletion sequences and a claim auditor"
)]
struct Cli {
    /// Drop the empty set from input files (with a warning) instead of failing.
    #[arg(long, global = true)]
    strip_empty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FileArg {
    /// Family file, or `-` for standard input.
    file: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conjecture verdict: frequencies, abundant elements, counting identity.
    Check(FileArg),
    /// The basis B(F).
    Basis(FileArg),
    /// Basis sets whose union is the given member.
    Decompose {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        set: String,
    },
    /// Union closure of the listed sets.
    Closure(FileArg),
    /// The complement D = A - F.
    Complement(FileArg),
    /// Build a deletion sequence from A to the family.
    Seq {
        #[command(flatten)]
        input: FileArg,
        #[arg(long, value_parser = ["uc", "ideal", "optimal"])]
        kind: String,
        #[arg(long)]
        element: Option<usize>,
        #[arg(long, default_value = "greedy")]
        strategy: Strategy,
    },
    /// Check a sequence file step by step.
    ValidateSeq(FileArg),
    /// Predicates on sets relative to a family.
    #[command(subcommand)]
    Pred(Pred),
    /// All union-closed families on [n] as consecutive family blocks.
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        count_only: bool,
        /// Allow n = 5.
        #[arg(long)]
        long_run: bool,
    },
    /// Union closure of seeded random generator sets.
    Sample {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        seed: u64,
        /// Print the generators without closing them.
        #[arg(long)]
        raw: bool,
    },
    /// Evaluate claims over every union-closed family on [n].
    Audit {
        #[arg(short)]
        n: usize,
        /// Comma-separated claim ids; all claims when omitted.
        #[arg(long, value_delimiter = ',')]
        claims: Vec<ClaimId>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Quasiminimal candidates per family; 0 means exhaustive.
        #[arg(long)]
        budget: Option<usize>,
        /// Allow n = 5.
        #[arg(long)]
        long_run: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Pred {
    /// Whether adding X (in D) breaks union-closedness.
    Vincolated {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        set: String,
    },
    /// Whether X is vincolated to Y (both in D).
    VincolatedTo {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        set: String,
        #[arg(long)]
        to: String,
    },
    /// Elements of least frequency on the complement D.
    Minimal(FileArg),
    /// Whether i is quasiminimal on D for members Y1, Y2.
    Quasiminimal {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        element: usize,
        #[arg(long)]
        y1: String,
        #[arg(long)]
        y2: String,
    },
    /// The extension E_X(Y) as a family block.
    Extension {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        y: String,
        #[arg(long)]
        x: String,
    },
    /// Search for a set avoiding i vincolated to a non-vincolated set containing i.
    Theorem3 {
        #[command(flatten)]
        input: FileArg,
        #[arg(long)]
        element: usize,
    },
}

#[derive(Default)]
struct Out {
    status: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn warn(&mut self, warnings: Vec<String>) {
        for w in warnings {
            let _ = writeln!(self.stderr, "warning: {w}");
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(io)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load_family(input: &FileArg, options: ParseOptions, out: &mut Out) -> Result<Family, CliError> {
    let parsed =
        parse_family(&read_input(&input.file)?, options).map_err(|e| with_path(e, &input.file))?;
    out.warn(parsed.warnings);
    Ok(parsed.value)
}

fn with_path(e: CliError, path: &Path) -> CliError {
    match e {
        CliError::Parse { line, message } => CliError::Parse {
            line,
            message: format!("{message} (in {})", path.display()),
        },
        other => other,
    }
}

fn show_list(items: &[usize]) -> String {
    let v: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    v.join(",")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(cli: Cli, out: &mut Out) -> Result<(), CliError> {
    let options = ParseOptions {
        strip_empty: cli.strip_empty,
    };
    let o = &mut out.stdout;
    match cli.command {
        Command::Check(input) => {
            let f = load_family(&input, options, out)?;
            if let Some((x, y)) = f.is_union_closed().violation {
                return Err(ucsets::Error::NotUnionClosed(x, y).into());
            }
            let v = f.check_conjecture()?;
            let o = &mut out.stdout;
            let _ = writeln!(o, "size: {}", f.len());
            let _ = writeln!(o, "frequencies: {}", show_list(&v.frequencies));
            let _ = writeln!(o, "abundant: {}", show_list(&v.abundant_elements));
            let _ = writeln!(
                o,
                "identity: {}",
                if v.identity_checked { "ok" } else { "mismatch" }
            );
            let _ = writeln!(o, "verdict: {}", if v.holds { "holds" } else { "fails" });
            if !(v.holds && v.identity_checked) {
                out.status = 1;
            }
        }
        Command::Basis(input) => {
            let f = load_family(&input, options, out)?;
            out.stdout.push_str(&render_family(&basis(&f)));
        }
        Command::Decompose { input, set } => {
            let f = load_family(&input, options, out)?;
            let x = parse_set(&set, f.universe_size())?;
            let d = decompose(&f, x)?;
            let parts = Family::from_masks(f.universe_size(), d.parts.iter().copied())?;
            let _ = writeln!(out.stdout, "# basis sets whose union is {x}");
            out.stdout.push_str(&render_family(&parts));
        }
        Command::Closure(input) => {
            let f = load_family(&input, options, out)?;
            out.stdout.push_str(&render_family(&f.union_closure()));
        }
        Command::Complement(input) => {
            let f = load_family(&input, options, out)?;
            out.stdout.push_str(&render_family(&f.complement()));
        }
        Command::Seq {
            input,
            kind,
            element,
            strategy,
        } => {
            let f = load_family(&input, options, out)?;
            let need_element = || {
                element.ok_or_else(|| CliError::Usage(format!("--kind {kind} needs --element <i>")))
            };
            let seq = match kind.as_str() {
                "uc" => build_union_closed_sequence(&f, strategy)?,
                "ideal" => build_ideal_sequence(&f, need_element()?)?,
                _ => match build_optimal_sequence(&f, need_element()?)? {
                    OptimalOutcome::Built { sequence, .. } => sequence,
                    OptimalOutcome::Refuted(r) => {
                        let _ = writeln!(out.stderr, "counterexample: {r}");
                        out.status = 1;
                        return Ok(());
                    }
                },
            };
            out.stdout.push_str(&render_sequence(&seq));
        }
        Command::ValidateSeq(input) => {
            let parsed = parse_sequence(&read_input(&input.file)?, options)
                .map_err(|e| with_path(e, &input.file))?;
            out.warn(parsed.warnings);
            let report = validate_sequence(&parsed.value);
            let o = &mut out.stdout;
            let _ = writeln!(o, "kind: {}", report.kind);
            for s in &report.steps {
                match s.violation {
                    None => {
                        let _ = writeln!(o, "step {}: delete {}: union-closed", s.step, s.deleted);
                    }
                    Some((x, y)) => {
                        let _ = writeln!(
                            o,
                            "step {}: delete {}: missing {x} ∪ {y}",
                            s.step, s.deleted
                        );
                    }
                }
            }
            for p in &report.problems {
                let _ = writeln!(o, "problem: {p}");
            }
            let _ = writeln!(o, "valid: {}", yes_no(report.is_valid()));
            if !report.is_valid() {
                out.status = 1;
            }
        }
        Command::Pred(pred) => run_pred(pred, options, out)?,
        Command::Enumerate {
            n,
            count_only,
            long_run,
        } => {
            let limit = if long_run {
                EnumerationLimit::LongRun
            } else {
                EnumerationLimit::Standard
            };
            if count_only {
                let _ = writeln!(o, "{}", count_union_closed_with(n, limit)?);
            } else {
                for (k, f) in enumerate_union_closed_with(n, limit)?.enumerate() {
                    if k > 0 {
                        o.push('\n');
                    }
                    o.push_str(&render_family(&f));
                }
            }
        }
        Command::Sample { n, sets, seed, raw } => {
            let f = if raw {
                sample_family(n, sets, seed)?
            } else {
                sample_union_closed(n, sets, seed)?
            };
            let _ = writeln!(
                o,
                "# n={n} sets={sets} seed={seed}{}",
                if raw { " raw" } else { "" }
            );
            o.push_str(&render_family(&f));
        }
        Command::Audit {
            n,
            claims,
            jobs,
            format,
            out: path,
            budget,
            long_run,
        } => {
            let mut config = AuditConfig::new(n).jobs(jobs);
            if !claims.is_empty() {
                config = config.claims(&claims);
            }
            if let Some(b) = budget {
                config.quasiminimal_budget = (b > 0).then_some(b);
            }
            if long_run {
                config.limit = EnumerationLimit::LongRun;
            }
            let report = audit_all(&config)?;
            let text = render_report(&report, format);
            match path {
                Some(p) => {
                    std::fs::write(&p, text).map_err(|source| CliError::Io {
                        path: p.clone(),
                        source,
                    })?;
                    let _ = writeln!(out.stderr, "report written to {}", p.display());
                }
                None => out.stdout.push_str(&text),
            }
            let _ = writeln!(out.stderr, "elapsed: {:.3}s", report.elapsed.as_secs_f64());
            if !report.all_hold() {
                out.status = 1;
            }
        }
    }
    Ok(())
}

fn run_pred(pred: Pred, options: ParseOptions, out: &mut Out) -> Result<(), CliError> {
    match pred {
        Pred::Vincolated { input, set } => {
            let f = load_family(&input, options, out)?;
            let x = parse_set(&set, f.universe_size())?;
            let v = is_vincolated(&f, x)?;
            let _ = writeln!(out.stdout, "vincolated: {}", yes_no(v.vincolated));
            if let Some(w) = v.witness {
                let _ = writeln!(
                    out.stdout,
                    "witness: {} ∪ {} = {} lies in D",
                    w.x, w.y, w.result
                );
            }
        }
        Pred::VincolatedTo { input, set, to } => {
            let f = load_family(&input, options, out)?;
            let n = f.universe_size();
            let (x, y) = (parse_set(&set, n)?, parse_set(&to, n)?);
            let _ = writeln!(
                out.stdout,
                "vincolated-to: {}",
                yes_no(is_vincolated_to(&f, x, y)?)
            );
        }
        Pred::Minimal(input) => {
            let f = load_family(&input, options, out)?;
            let _ = writeln!(
                out.stdout,
                "minimal: {}",
                show_list(&minimal_elements(&f.complement()))
            );
        }
        Pred::Quasiminimal {
            input,
            element,
            y1,
            y2,
        } => {
            let f = load_family(&input, options, out)?;
            let n = f.universe_size();
            let (y1, y2) = (parse_set(&y1, n)?, parse_set(&y2, n)?);
            match is_quasiminimal(&f, element, y1, y2)? {
                None => {
                    let _ = writeln!(out.stdout, "quasiminimal: no");
                }
                Some(cert) => {
                    let _ = writeln!(out.stdout, "quasiminimal: yes");
                    let _ = writeln!(out.stdout, "# optimal sequence ending with {y1}, {y2}");
                    out.stdout.push_str(&render_sequence(&cert.sequence));
                }
            }
        }
        Pred::Extension { n, y, x } => {
            let (y, x) = (parse_set(&y, n)?, parse_set(&x, n)?);
            out.stdout.push_str(&render_family(&extension(y, x, n)?));
        }
        Pred::Theorem3 { input, element } => {
            let f = load_family(&input, options, out)?;
            match find_theorem3_witness(&f, element)? {
                Theorem3Outcome::Witness(w) => {
                    let _ = writeln!(
                        out.stdout,
                        "witness: y={} r={}",
                        render_set(w.y),
                        render_set(w.r)
                    );
                    let _ = writeln!(out.stdout, "construction: {}", yes_no(w.from_construction));
                }
                Theorem3Outcome::PreconditionNotMet(why) => {
                    return Err(CliError::Usage(format!("precondition not met: {why}")));
                }
                Theorem3Outcome::Refuted(r) => {
                    let _ = writeln!(out.stdout, "counterexample: {r}");
                    out.status = 1;
                }
            }
        }
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    status: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    status: 2,
                    stdout: String::new(),
                    stderr: format!("{}\n", text.lines().next().unwrap_or("usage error")),
                },
            };
        }
    };
    let mut out = Out::default();
    if let Err(e) = execute(cli, &mut out) {
        let _ = writeln!(out.stderr, "error: {e}");
        out.status = 2;
    }
    Outcome {
        status: out.status,
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

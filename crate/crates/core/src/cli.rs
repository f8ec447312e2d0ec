//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::courant::{self, examples, CourantAlgebroid};
use crate::error::Error;
use crate::format::{parse_path, StructureFile};
use crate::forward::{extract_courant, GradedVpaView};
use crate::quotient::{roundtrip, RoundtripSummary, SbAlgebra};
use crate::report::CheckReport;
use crate::selftest::{self, CriterionResult};
use crate::tca;

#[derive(Parser, Debug)]
#[command(name = "courant-vpa", version, about = "Exact checks and constructions for Courant algebroids and vertex Poisson algebras")]
pub struct Cli {
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    pub json: bool,
    /// Degree cutoff for constructions.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_degree: usize,
    /// Write structure output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of a structure file.
    Check {
        kind: CheckKind,
        file: PathBuf,
    },
    /// Convert between a Courant algebroid and its 1-truncated conformal algebra.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Build the graded vertex Poisson algebra of an algebroid up to --max-degree.
    Build { file: PathBuf },
    /// Build the quotient algebra and compare its degrees 0 and 1 with the input.
    Roundtrip { file: PathBuf },
    /// Extract and certify the algebroid of a graded vertex Poisson algebra file.
    Extract { file: PathBuf },
    /// Run the acceptance checks on the built-in examples.
    Selftest,
    /// Built-in examples.
    Examples {
        #[command(subcommand)]
        action: ExamplesCommand,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CheckKind {
    Courant,
    #[value(name = "1tca")]
    Tca,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Target {
    #[value(name = "1tca")]
    Tca,
    Courant,
}

#[derive(Subcommand, Debug)]
pub enum ExamplesCommand {
    List,
    Emit { name: String },
}

/// Writes to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    let _ = out.flush();
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Serialize)]
struct JsonReport<'a, T: Serialize> {
    command: &'a str,
    passed: bool,
    checked: usize,
    violations: &'a [crate::report::Violation],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<T>,
}

struct Ctx {
    json: bool,
    max_degree: usize,
    out: Option<PathBuf>,
}

impl Ctx {
    /// Writes a structure file to `--out` or stdout. Returns whether stdout
    /// was used, in which case reports go to stderr.
    fn emit(&self, f: &StructureFile) -> Result<bool, Error> {
        match &self.out {
            Some(p) => {
                std::fs::write(p, f.print())?;
                Ok(false)
            }
            None => {
                say(f.print().trim_end());
                Ok(true)
            }
        }
    }

    fn report<T: Serialize + std::fmt::Display>(&self, command: &str, r: &CheckReport, summary: Option<T>, to_stderr: bool) -> u8 {
        let text = if self.json {
            let doc = JsonReport {
                command,
                passed: r.passed(),
                checked: r.checked,
                violations: &r.violations,
                summary,
            };
            serde_json::to_string_pretty(&doc).expect("report serializes")
        } else {
            let mut s = String::new();
            if let Some(sum) = summary {
                s.push_str(&format!("{sum}\n"));
            }
            s.push_str(&format!("{command}: {r}"));
            s.trim_end().to_string()
        };
        if to_stderr {
            eprintln!("{text}");
        } else {
            say(&text);
        }
        if r.passed() {
            PASS
        } else {
            FAIL
        }
    }
}

fn courant_file(path: &Path) -> Result<CourantAlgebroid, Error> {
    parse_path(path)?.to_courant()
}

fn with_tags(mut f: StructureFile, from: &Path) -> Result<StructureFile, Error> {
    if let Ok(src) = parse_path(from) {
        f.meta.tags = src.meta.tags;
    }
    Ok(f)
}

fn failure_code(e: &Error) -> u8 {
    match e {
        Error::NotCourant(_) | Error::NotConformal(_) | Error::Incompatible(_) => FAIL,
        Error::CutoffExceeded { .. } | Error::RewriteBound(_) | Error::Grading { .. } => FAIL,
        _ => USAGE,
    }
}

fn failure_report(e: &Error) -> Option<&CheckReport> {
    match e {
        Error::NotCourant(r) | Error::NotConformal(r) | Error::Incompatible(r) => Some(r),
        _ => None,
    }
}

fn dispatch(cli: Cli) -> Result<u8, Error> {
    let ctx = Ctx {
        json: cli.json,
        max_degree: cli.max_degree,
        out: cli.out,
    };
    let none = None::<String>;
    match cli.command {
        Command::Check { kind: CheckKind::Courant, file } => {
            let x = courant_file(&file)?;
            let r = CheckReport::merge_all([
                courant::check_courant(&x),
                courant::check_compat(&x),
                courant::check_annihilation(&x),
            ]);
            Ok(ctx.report("check courant", &r, none, false))
        }
        Command::Check { kind: CheckKind::Tca, file } => {
            let (t, algebra) = parse_path(&file)?.to_1tca()?;
            let mut r = tca::check_all(&t);
            if let Some((a, action)) = &algebra {
                r = r.merge(courant::check_compat_parts(&t, a, action));
            }
            Ok(ctx.report("check 1tca", &r, none, false))
        }
        Command::Convert { file, to: Target::Tca } => {
            let x = courant_file(&file)?;
            let t = courant::to_1tca(&x)?;
            let f = with_tags(StructureFile::from_1tca(&t, Some((&x.a, &x.action))), &file)?;
            ctx.emit(&f)?;
            Ok(PASS)
        }
        Command::Convert { file, to: Target::Courant } => {
            let (t, algebra) = parse_path(&file)?.to_1tca()?;
            let (a, action) = algebra.ok_or_else(|| {
                Error::Structure("converting to courant needs `mult`, `unit` and `action` bindings".into())
            })?;
            let x = courant::from_1tca(&t, &a, &action)?;
            ctx.emit(&with_tags(StructureFile::from_courant(&x), &file)?)?;
            Ok(PASS)
        }
        Command::Build { file } => {
            let x = courant_file(&file)?;
            let q = SbAlgebra::new(&x, ctx.max_degree)?;
            let v = GradedVpaView::from_quotient(&q)?;
            ctx.emit(&with_tags(StructureFile::from_view(&v), &file)?)?;
            Ok(PASS)
        }
        Command::Roundtrip { file } => {
            let x = courant_file(&file)?;
            let (r, sum): (CheckReport, RoundtripSummary) = roundtrip(&x, ctx.max_degree)?;
            Ok(ctx.report("roundtrip", &r, Some(sum), false))
        }
        Command::Extract { file } => {
            let v = parse_path(&file)?.to_view()?;
            let x = extract_courant(&v)?;
            let on_stdout = ctx.emit(&StructureFile::from_courant(&x))?;
            let r = courant::check_courant(&x).merge(courant::check_compat(&x));
            Ok(ctx.report("extract", &r, none, on_stdout))
        }
        Command::Selftest => {
            let mut results: Vec<CriterionResult> = Vec::new();
            for c in selftest::CRITERIA {
                let r = c();
                if !ctx.json {
                    say(&r.to_string());
                }
                results.push(r);
            }
            let ok = results.iter().all(CriterionResult::ok);
            if ctx.json {
                say(&serde_json::to_string_pretty(&results).expect("results serialize"));
            } else {
                say(&format!("selftest: {}", if ok { "PASS" } else { "FAIL" }));
            }
            Ok(if ok { PASS } else { FAIL })
        }
        Command::Examples { action: ExamplesCommand::List } => {
            for n in examples::NAMES {
                say(n);
            }
            Ok(PASS)
        }
        Command::Examples { action: ExamplesCommand::Emit { name } } => {
            let x = examples::example(&name)?;
            let mut f = StructureFile::from_courant(&x);
            f.meta.tags.push(name.chars().filter(|c| !c.is_whitespace()).collect());
            ctx.emit(&f)?;
            Ok(PASS)
        }
    }
}

/// Parses arguments, runs the command and maps the outcome to an exit code:
/// 0 pass, 1 check failure, 2 parse or usage error.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    crate::par::init_from_env();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = failure_code(&e);
            match (failure_report(&e), json) {
                (Some(r), true) => {
                    let doc = JsonReport::<String> {
                        command: "error",
                        passed: false,
                        checked: r.checked,
                        violations: &r.violations,
                        summary: Some(e.to_string()),
                    };
                    say(&serde_json::to_string_pretty(&doc).expect("report serializes"));
                }
                (Some(r), false) => say(&format!("error: {e}\n{r}")),
                (None, _) => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}

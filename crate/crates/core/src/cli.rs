//! Command-line front end.
//!
//! Exit codes: 0 success, 1 at least one identity failed, 2 usage or input error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::combinat::{Perturbation, TableKind, Tables};
use crate::exact::{GaussianRational, Rational};
use crate::families::{AlphaMode, Families, FamilyError, FamilyId, FamilyKind};
use crate::identities::{verify_parallel, Context, Report, TheoremId};
use crate::poly::{MultiPoly, Symbol};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "degenpoly",
    version,
    about = "Exact expansions and identity checks for degenerate Bernoulli/Euler families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the degree-n polynomial of a family.
    Expand {
        #[arg(long)]
        family: FamilyKind,
        #[arg(long)]
        n: usize,
        /// `symbolic` or an integer; only for the order-alpha families.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<AlphaMode>,
        /// Linear exponent in x and y, e.g. `x+iy` or `x+1/2`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_exponent)]
        exponent: Option<MultiPoly>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a number table as CSV.
    Table {
        #[arg(long)]
        kind: TableKind,
        #[arg(long = "max-n", default_value_t = 12)]
        max_n: usize,
    },
    /// Check identities; one JSON report per theorem followed by `# ` summary lines.
    Verify {
        /// A theorem tag or `all`.
        #[arg(long, value_parser = parse_theorems)]
        theorem: TheoremSet,
        #[arg(long = "max-n", default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        /// Write the JSON reports here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Offset one table entry, `kind:n:k:delta` (sensitivity testing).
        #[arg(long, hide = true)]
        perturb: Vec<Perturbation>,
    },
    /// Re-serialize stored reports.
    ExportReport {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Debug, Clone)]
struct TheoremSet(Vec<TheoremId>);

fn parse_theorems(s: &str) -> Result<TheoremSet, String> {
    if s == "all" {
        return Ok(TheoremSet(TheoremId::ALL.to_vec()));
    }
    s.parse::<TheoremId>()
        .map(|t| TheoremSet(vec![t]))
        .map_err(|e| e.to_string())
}

/// Parses a linear expression such as `x`, `x+iy`, `x - 2iy + 1/2` or `0`.
pub fn parse_exponent(s: &str) -> Result<MultiPoly, String> {
    let compact: String = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '*')
        .collect();
    if compact.is_empty() {
        return Err("empty exponent".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(&compact[start..i]);
            start = i;
        }
    }
    terms.push(&compact[start..]);
    let mut acc = MultiPoly::zero();
    for term in terms {
        acc += &parse_term(term)
            .ok_or_else(|| format!("cannot parse exponent term {term:?} in {s:?}"))?;
    }
    Ok(acc)
}

fn parse_term(term: &str) -> Option<MultiPoly> {
    let (negative, mut body) = match term.as_bytes().first()? {
        b'+' => (false, &term[1..]),
        b'-' => (true, &term[1..]),
        _ => (false, term),
    };
    let var = match body.chars().last()? {
        'x' => Some(Symbol::X),
        'y' => Some(Symbol::Y),
        _ => None,
    };
    if var.is_some() {
        body = &body[..body.len() - 1];
    }
    let imaginary = body.ends_with('i');
    if imaginary {
        body = &body[..body.len() - 1];
    }
    if body.is_empty() && var.is_none() && !imaginary {
        return None;
    }
    let mut r = if body.is_empty() {
        Rational::one()
    } else {
        body.parse::<Rational>().ok()?
    };
    if negative {
        r = -r;
    }
    let coeff = if imaginary {
        GaussianRational::new(Rational::zero(), r)
    } else {
        GaussianRational::real(r)
    };
    let base = var.map_or_else(MultiPoly::one, MultiPoly::var);
    Some(base.scale(&coeff))
}

/// Runs the CLI on `args` (including the program name), writing to `out`/`err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Expand {
            family,
            n,
            alpha,
            exponent,
            format,
        } => {
            let mut id = FamilyId::new(family);
            if let Some(a) = alpha {
                id = id.with_alpha(a);
            }
            if let Some(w) = exponent {
                id = id.with_exponent(w);
            }
            let p = Families::new().poly(&id, n)?;
            match format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&p).expect("polynomial serializes")
                )?,
                Format::Csv => write!(out, "{}", p.to_csv())?,
                Format::Latex => writeln!(out, "{}", p.to_latex())?,
            }
            Ok(EXIT_OK)
        }
        Command::Table { kind, max_n } => {
            write!(out, "{}", Tables::new().table(kind, max_n).to_csv())?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            max_n,
            jobs,
            output,
            perturb,
        } => {
            let ctx = Context::with_perturbations(perturb);
            let reports = verify_parallel(&ctx, &theorem.0, max_n, jobs as usize);
            let mut json = String::new();
            for r in &reports {
                json.push_str(&serde_json::to_string(r).expect("report serializes"));
                json.push('\n');
            }
            match output {
                Some(path) => fs::write(path, json)?,
                None => out.write_all(json.as_bytes())?,
            }
            for r in &reports {
                writeln!(out, "# {}", r.summary())?;
            }
            let all = reports.iter().all(Report::pass);
            Ok(if all { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::ExportReport { input, format } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", input.display())))?;
            let reports = parse_reports(&text)?;
            write!(out, "{}", export(&reports, format))?;
            Ok(EXIT_OK)
        }
    }
}

/// Reports stored one JSON object per line; blank and `#` lines are skipped.
fn parse_reports(text: &str) -> Result<Vec<Report>, CliError> {
    let reports = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            serde_json::from_str::<Report>(l)
                .map_err(|e| CliError::Input(format!("line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if reports.is_empty() {
        return Err(CliError::Input("no reports found".into()));
    }
    Ok(reports)
}

fn export(reports: &[Report], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Json => {
            for r in reports {
                s.push_str(&serde_json::to_string(r).expect("report serializes"));
                s.push('\n');
            }
        }
        Format::Csv => {
            s.push_str("theorem,n_max,n,pass,diff\n");
            for r in reports {
                for res in &r.results {
                    s.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.theorem, r.n_max, res.n, res.pass, res.diff
                    ));
                }
            }
        }
        Format::Latex => {
            for r in reports {
                let name = r.theorem.name().replace('_', "\\_");
                let status = if r.pass() { "pass" } else { "fail" };
                s.push_str(&format!(
                    "\\text{{{name}}}\\ (n \\le {}): \\text{{{status}}}\n",
                    r.n_max
                ));
                for f in r.failures() {
                    s.push_str(&format!("\\quad n = {}: {}\n", f.n, f.diff.to_latex()));
                }
            }
        }
    }
    s
}

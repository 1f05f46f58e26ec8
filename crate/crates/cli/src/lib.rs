//! The `vdw` command line.
//!
//! Exit codes: 0 success, 1 a verification or check failed, 2 usage or
//! domain error, 3 search budget exhausted.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use vdw_core::bounds::{self, relative_eq, REAL_TOLERANCE};
use vdw_core::report::TableReport;
use vdw_core::search::{self, SearchConfig, WitnessFile, DEFAULT_BUDGET};
use vdw_core::{expansion, reconcile, Registry, Verdict};

mod render;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    CheckFailed = 1,
    Usage = 2,
    BudgetExhausted = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Registry(#[from] vdw_core::RegistryError),
    #[error(transparent)]
    Bounds(#[from] vdw_core::BoundsError),
    #[error(transparent)]
    Search(#[from] vdw_core::SearchError),
    #[error(transparent)]
    Expansion(#[from] vdw_core::ExpansionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "vdw", version, about = "Exact van der Waerden numbers and their bounds")]
pub struct Cli {
    /// Registry CSV file (default: the bundled one).
    #[arg(long, global = true, env = "VDW_REGISTRY")]
    registry: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Search threads (default: available processors). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Node budget for a search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Base-r expansion of N with its exponent and power bracket.
    Expand { n: u64, r: u64 },
    /// Compute W(r, k) by exhaustive search.
    Search {
        r: usize,
        k: usize,
        /// Stop (as exhausted) rather than try intervals longer than this.
        #[arg(long)]
        max_n: Option<u64>,
        /// Also write the witness coloring to this file.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Re-check a witness file with the full-scan checker.
    Verify { file: PathBuf },
    /// Reproduce the table of known numbers with every derived column.
    Table1,
    /// Run every bound check against every registry record.
    Check,
    /// Check p 2^p < W(2, p+1) < 2^((p+1)^2) for a prime p.
    PrimeCase { p: u64 },
    /// Registry operations.
    Registry {
        #[command(subcommand)]
        action: RegistryAction,
    },
}

#[derive(Debug, Subcommand)]
enum RegistryAction {
    /// Print every record.
    List,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Ok };
            let text = e.render().to_string();
            let _ = if code == Exit::Ok {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            Exit::Usage
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, CliError> {
    match &cli.command {
        Command::Expand { n, r } => cmd_expand(cli, *n, *r, out, err),
        Command::Search {
            r,
            k,
            max_n,
            witness_out,
        } => cmd_search(cli, *r, *k, *max_n, witness_out.as_deref(), out, err),
        Command::Verify { file } => cmd_verify(cli, file, out),
        Command::Table1 => cmd_table1(cli, out, err),
        Command::Check => cmd_check(cli, out),
        Command::PrimeCase { p } => cmd_prime_case(cli, *p, out),
        Command::Registry {
            action: RegistryAction::List,
        } => cmd_registry_list(cli, out),
    }
}

fn load_registry(cli: &Cli) -> Result<Registry, CliError> {
    match &cli.registry {
        Some(path) => Ok(Registry::load(path)?),
        None => Ok(Registry::bundled()),
    }
}

fn workers(cli: &Cli) -> usize {
    cli.workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn warn_all(err: &mut dyn Write, flags: &[String]) -> Result<(), CliError> {
    for f in flags {
        writeln!(err, "warning: {f}")?;
    }
    Ok(())
}

fn cmd_expand(cli: &Cli, n: u64, r: u64, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, CliError> {
    let e = expansion::expand(n, r)?;
    let exp = e.exponent();
    // Flag any published row whose printed exponent for this W disagrees.
    let flags: Vec<String> = vdw_core::report::PRINTED_TABLE
        .iter()
        .filter(|p| p.r == r && p.w == n && p.n != exp)
        .map(|p| {
            format!(
                "printed n={} for W({}, {}) = {} differs from computed n={exp}",
                p.n, p.r, p.k, p.w
            )
        })
        .collect();
    match cli.format {
        Format::Text => {
            writeln!(out, "{n} in base {r}: {e}")?;
            writeln!(out, "n = {exp}")?;
            writeln!(out, "{r}^{exp} <= {n} < {r}^{}", exp + 1)?;
            for f in &flags {
                writeln!(out, "flag: {f}")?;
            }
        }
        Format::Json => {
            let digits: Vec<u64> = e.digits().iter().rev().copied().collect();
            let doc = json!({
                "n_value": n,
                "r": r,
                "digits": digits,
                "exponent": exp,
                "lower": format!("{r}^{{{exp}}}"),
                "upper": format!("{r}^{{{}}}", exp + 1),
                "flags": flags,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value"))?;
        }
    }
    warn_all(err, &flags)?;
    Ok(Exit::Ok)
}

fn cmd_search(
    cli: &Cli,
    r: usize,
    k: usize,
    max_n: Option<u64>,
    witness_out: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Exit, CliError> {
    let registry = load_registry(cli)?;
    let config = SearchConfig {
        budget: cli.budget,
        workers: workers(cli),
        max_n,
    };
    let outcome = search::compute_w(r, k, &config)?;
    let verdict = match registry.lookup(r as u64, k as u64) {
        Some(rec) if outcome.w_value.is_some() => Some(reconcile(rec, &outcome)?),
        _ => None,
    };
    if let (Some(path), Some(w)) = (witness_out, &outcome.witness) {
        std::fs::write(path, WitnessFile::new(k, w.clone()).to_string())?;
    }
    match cli.format {
        Format::Text => render::search_text(out, &outcome, cli.budget, verdict)?,
        Format::Json => {
            let doc = json!({
                "r": outcome.r,
                "k": outcome.k,
                "w_value": outcome.w_value,
                "witness": outcome.witness.as_ref().map(|c| c.digits()),
                "nodes_explored": outcome.nodes_explored,
                "budget_exhausted": outcome.budget_exhausted,
                "elapsed_secs": outcome.elapsed.as_secs_f64(),
                "registry": verdict.map(render::verdict_word),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value"))?;
        }
    }
    if let Some(Verdict::Mismatch { registry, computed }) = verdict {
        writeln!(err, "warning: search gives W({r}, {k}) = {computed}, registry has {registry}")?;
        return Ok(Exit::CheckFailed);
    }
    Ok(if outcome.budget_exhausted {
        Exit::BudgetExhausted
    } else {
        Exit::Ok
    })
}

fn cmd_verify(cli: &Cli, file: &Path, out: &mut dyn Write) -> Result<Exit, CliError> {
    let text = std::fs::read_to_string(file).map_err(|source| CliError::Read {
        path: file.to_path_buf(),
        source,
    })?;
    let witness: WitnessFile = text.parse()?;
    let valid = witness.is_valid();
    let c = &witness.coloring;
    match cli.format {
        Format::Text => {
            let verdict = if valid {
                "valid: no monochromatic"
            } else {
                "invalid: contains a monochromatic"
            };
            writeln!(
                out,
                "{verdict} {}-term progression in this {}-coloring of [1, {}]",
                witness.k,
                c.num_colors(),
                c.n_points()
            )?;
        }
        Format::Json => {
            let doc = json!({
                "r": c.num_colors(),
                "k": witness.k,
                "n_points": c.n_points(),
                "valid": valid,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value"))?;
        }
    }
    Ok(if valid { Exit::Ok } else { Exit::CheckFailed })
}

fn cmd_table1(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, CliError> {
    let registry = load_registry(cli)?;
    let table = TableReport::build(&registry)?;
    match cli.format {
        Format::Text => render::table_text(out, &table)?,
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&render::table_json(&table)).expect("json value")
            )?;
        }
    }
    for row in &table.rows {
        let flags: Vec<String> = row
            .flags
            .iter()
            .map(|f| format!("W({}, {}): {f}", row.r, row.k))
            .collect();
        warn_all(err, &flags)?;
    }
    Ok(if table.all_ok() {
        Exit::Ok
    } else {
        Exit::CheckFailed
    })
}

/// One named check for one record.
struct Finding {
    name: &'static str,
    ok: bool,
}

fn record_checks(r: u64, k: u64, w: u64) -> Result<Vec<Finding>, CliError> {
    let b = bounds::BoundReport::compute(r, k, w)?;
    let n = u64::from(b.n);
    let a = b.a.expect("k >= 2");
    let sq = bounds::square_test(n, k);
    let n_back = bounds::n_from_a(a, r, k)?;
    let k_back = bounds::k_from_a(a, r, n)?;
    Ok(vec![
        Finding {
            name: "r^n <= W < r^(n+1)",
            ok: b.bracket_ok,
        },
        Finding {
            name: "n < k^2 - 1 and k^2 > n + 1 agree and hold",
            ok: sq.agree() && sq.holds(),
        },
        Finding {
            name: "n recovered from a",
            ok: relative_eq(n_back, n as f64, REAL_TOLERANCE),
        },
        Finding {
            name: "k recovered from a",
            ok: relative_eq(k_back, k as f64, REAL_TOLERANCE),
        },
        Finding {
            name: "a against n + 1 follows r against k",
            ok: b.trichotomy_ok,
        },
        Finding {
            name: "k < r^(n+1)",
            ok: b.cond1_ok && b.cond2_ok,
        },
        Finding {
            name: "sqrt premise implies k > sqrt(n + 1)",
            ok: b.sqrt_implication_ok(),
        },
        Finding {
            name: "W < r^(k^2)",
            ok: b.w_lt_r_pow_k2,
        },
    ])
}

fn cmd_check(cli: &Cli, out: &mut dyn Write) -> Result<Exit, CliError> {
    let registry = load_registry(cli)?;
    let records: Vec<_> = registry.records().iter().filter(|r| r.k >= 2).cloned().collect();
    let mut all_ok = true;
    let mut rows = Vec::new();
    for rec in &records {
        let findings = record_checks(rec.r, rec.k, rec.w)?;
        all_ok &= findings.iter().all(|f| f.ok);
        rows.push((rec, findings));
    }
    let surrogate = bounds::all_k_squared_exceed_exponent(&records);
    all_ok &= surrogate;
    match cli.format {
        Format::Text => {
            for (rec, findings) in &rows {
                let failed: Vec<&str> = findings.iter().filter(|f| !f.ok).map(|f| f.name).collect();
                if failed.is_empty() {
                    writeln!(out, "W({}, {}) = {}: ok ({} checks)", rec.r, rec.k, rec.w, findings.len())?;
                } else {
                    writeln!(out, "W({}, {}) = {}: FAIL: {}", rec.r, rec.k, rec.w, failed.join("; "))?;
                }
            }
            writeln!(out, "k^2 > n + 1 for every record: {}", render::ok_word(surrogate))?;
        }
        Format::Json => {
            let doc = json!({
                "records": rows.iter().map(|(rec, findings)| json!({
                    "r": rec.r,
                    "k": rec.k,
                    "w": rec.w,
                    "checks": findings.iter().map(|f| json!({"name": f.name, "ok": f.ok})).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "k_squared_exceeds_exponent": surrogate,
                "ok": all_ok,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value"))?;
        }
    }
    Ok(if all_ok { Exit::Ok } else { Exit::CheckFailed })
}

fn cmd_prime_case(cli: &Cli, p: u64, out: &mut dyn Write) -> Result<Exit, CliError> {
    let registry = load_registry(cli)?;
    let rep = bounds::prime_case(p, &registry)?;
    match cli.format {
        Format::Text => {
            writeln!(
                out,
                "p = {p}: {} < W(2, {}) = {} < {}: {}",
                rep.lower,
                rep.k,
                rep.w,
                rep.upper,
                render::ok_word(rep.interval_ok)
            )?;
            writeln!(
                out,
                "k = {} > sqrt(n + 1) with n = {}: {}",
                rep.k,
                rep.n,
                render::ok_word(rep.premise_ok)
            )?;
        }
        Format::Json => {
            let doc = json!({
                "p": rep.p,
                "k": rep.k,
                "lower": rep.lower.to_string(),
                "w": rep.w,
                "upper": rep.upper.to_string(),
                "n": rep.n,
                "premise_ok": rep.premise_ok,
                "interval_ok": rep.interval_ok,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value"))?;
        }
    }
    Ok(if rep.interval_ok && rep.premise_ok {
        Exit::Ok
    } else {
        Exit::CheckFailed
    })
}

fn cmd_registry_list(cli: &Cli, out: &mut dyn Write) -> Result<Exit, CliError> {
    let registry = load_registry(cli)?;
    match cli.format {
        Format::Text => {
            writeln!(out, "{:>3} {:>3} {:>6}  {:<18}  note", "r", "k", "W", "source")?;
            for rec in registry.records() {
                let line = format!(
                    "{:>3} {:>3} {:>6}  {:<18}  {}",
                    rec.r,
                    rec.k,
                    rec.w,
                    rec.source.token(),
                    rec.note
                );
                writeln!(out, "{}", line.trim_end())?;
            }
        }
        Format::Json => {
            let doc = serde_json::to_value(registry.records()).expect("records serialize");
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json value"))?;
        }
    }
    Ok(Exit::Ok)
}

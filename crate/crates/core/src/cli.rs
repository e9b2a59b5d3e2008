//! The `gconway` command line.
//!
//! [`run`] parses arguments, writes everything to the given writer and
//! returns the process exit code: 0 on success, 1 when a comparison or
//! axiom fails, 2 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{check_axioms, collapse_r_to_q, to_homflypt, AlgebraInstance, AlgebraKind};
use crate::catalog::{bundled_catalog_path, load_catalog, verify_catalog, LinkRecord};
use crate::diagram::{BasedDiagram, CrossingId, Diagram};
use crate::laurent::{LaurentPoly, RenderStyle};
use crate::series::vassiliev_report;
use crate::skein::{evaluate_based, fuzz_invariance, EvalOptions, FuzzOptions};

/// Environment variable naming the default catalog.
pub const CATALOG_ENV: &str = "GCONWAY_CATALOG";

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "gconway", version, about = "Generalized Conway link invariants by skein recursion")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Report timing as null in structured output, for byte-stable runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the invariant of a link.
    Compute {
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, default_value = "generic")]
        algebra: String,
        /// Print the skein tree to this depth.
        #[arg(long, num_args = 0..=1, default_missing_value = "4")]
        trace: Option<usize>,
        /// Memoize sub-diagrams by canonical key.
        #[arg(long)]
        memo: bool,
        /// Evaluate large branches in parallel.
        #[arg(long)]
        parallel: bool,
    },
    /// Check the algebra axioms symbolically.
    Axioms {
        #[arg(long, default_value = "generic")]
        algebra: String,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Compare values across random base points and Reidemeister moves.
    Fuzz {
        /// Link to fuzz; all catalog links when absent.
        #[command(flatten)]
        link: LinkArgs,
        #[arg(long, default_value = "generic")]
        algebra: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Longest Reidemeister sequence per trial.
        #[arg(long, default_value_t = 8)]
        max_moves: usize,
    },
    /// Check catalog expected values.
    Verify {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value = "generic")]
        algebra: String,
        /// Also try mirror images during orientation searches.
        #[arg(long)]
        mirror_retry: bool,
    },
    /// Measure skein differences under the exponential substitution.
    Series {
        #[command(flatten)]
        link: LinkArgs,
        /// Crossing to switch; every crossing when absent.
        #[arg(long)]
        crossing: Option<CrossingId>,
        #[arg(long, default_value_t = 4)]
        cutoff: i32,
    },
    /// Generic value, its r to q collapse, and the Homflypt polynomial.
    Homflypt {
        #[command(flatten)]
        link: LinkArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct LinkArgs {
    /// PD code, e.g. "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)".
    #[arg(long, conflicts_with = "link")]
    pd: Option<String>,
    /// Catalog record name.
    #[arg(long)]
    link: Option<String>,
    /// Catalog file or directory; defaults to $GCONWAY_CATALOG, then the
    /// bundled catalog.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

/// Failure inside a subcommand, with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn runtime(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

/// Output of a subcommand before formatting.
struct Outcome {
    algebra: Option<String>,
    seed: Option<u64>,
    text: String,
    latex: Option<String>,
    result: Value,
    ok: bool,
}

impl Outcome {
    fn new(text: String, result: Value) -> Self {
        Outcome { algebra: None, seed: None, text, latex: None, result, ok: true }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: Vec<String>,
    algebra: Option<&'a str>,
    result: &'a Value,
    ok: bool,
    timing_ms: Option<f64>,
    seed: Option<u64>,
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match dispatch(&cli.command) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(out, "error: {}", f.message);
            return f.code;
        }
    };
    let timing = (!cli.no_timing).then(|| start.elapsed().as_secs_f64() * 1e3);
    let written = match cli.format {
        Format::Text => write!(out, "{}", with_newline(&outcome.text)),
        Format::Latex => write!(out, "{}", with_newline(outcome.latex.as_ref().unwrap_or(&outcome.text))),
        Format::Structured => {
            let env = Envelope {
                command: argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
                algebra: outcome.algebra.as_deref(),
                result: &outcome.result,
                ok: outcome.ok,
                timing_ms: timing,
                seed: outcome.seed,
            };
            let text = serde_json::to_string_pretty(&env).expect("envelope serializes");
            writeln!(out, "{text}")
        }
    };
    if written.is_err() {
        return 1;
    }
    if outcome.ok {
        0
    } else {
        1
    }
}

fn with_newline(s: &str) -> String {
    if s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

fn instance(name: &str) -> Result<Arc<AlgebraInstance>, Failure> {
    AlgebraInstance::from_name(name).map_err(usage)
}

fn catalog_path(explicit: &Option<PathBuf>) -> PathBuf {
    explicit
        .clone()
        .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from))
        .unwrap_or_else(bundled_catalog_path)
}

fn catalog(explicit: &Option<PathBuf>) -> Result<Vec<LinkRecord>, Failure> {
    load_catalog(catalog_path(explicit)).map_err(usage)
}

/// The diagram named by `--pd` or `--link`, with a display name.
fn resolve(link: &LinkArgs) -> Result<(String, Diagram), Failure> {
    match (&link.pd, &link.link) {
        (Some(pd), _) => Ok((pd.clone(), Diagram::parse(pd).map_err(usage)?)),
        (None, Some(name)) => {
            let rec = catalog(&link.catalog)?
                .into_iter()
                .find(|r| &r.name == name)
                .ok_or_else(|| usage(format!("no catalog record named `{name}`")))?;
            Ok((rec.name.clone(), rec.diagram().clone()))
        }
        (None, None) => Err(usage("give a link with --pd or --link")),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Compute { link, algebra, trace, memo, parallel } => {
            let inst = instance(algebra)?;
            let (_, d) = resolve(link)?;
            let opts = EvalOptions {
                memoize: *memo,
                parallel: *parallel,
                trace_depth: trace.unwrap_or(0),
                ..Default::default()
            };
            let (value, tree) = evaluate_based(&BasedDiagram::standard(d), &inst, &opts).map_err(runtime)?;
            let mut text = value.to_string();
            if let Some(t) = &tree {
                text = format!("{text}\n{}", t.render_tree());
            }
            let mut o = Outcome::new(text, json!({ "value": value.to_string(), "trace": tree }));
            o.latex = Some(value.value().render(RenderStyle::Latex));
            o.algebra = Some(inst.name());
            Ok(o)
        }
        Command::Axioms { algebra, n_max } => {
            let inst = instance(algebra)?;
            let report = check_axioms(&inst, *n_max);
            let mut o = Outcome::new(report.to_string(), serde_json::to_value(&report).expect("serializable"));
            o.ok = report.all_hold();
            o.algebra = Some(inst.name());
            Ok(o)
        }
        Command::Fuzz { link, algebra, trials, seed, max_moves } => {
            let inst = instance(algebra)?;
            let targets: Vec<(String, Diagram)> = if link.pd.is_some() || link.link.is_some() {
                vec![resolve(link)?]
            } else {
                catalog(&link.catalog)?.into_iter().map(|r| (r.name.clone(), r.diagram().clone())).collect()
            };
            let fuzz = FuzzOptions { max_moves: *max_moves, ..Default::default() };
            let mut text = String::new();
            let mut results = Vec::new();
            let mut ok = true;
            for (name, d) in targets {
                let rep = fuzz_invariance(&d, &inst, *trials, *seed, fuzz).map_err(runtime)?;
                ok &= rep.mismatches.is_empty();
                text.push_str(&format!(
                    "{name:<12} {} trials, {} moves, {} mismatches\n",
                    rep.trials,
                    rep.moves_applied,
                    rep.mismatches.len()
                ));
                for m in &rep.mismatches {
                    text.push_str(&format!("  trial {}: {} after [{}]\n", m.trial, m.value, m.moves.join(", ")));
                }
                results.push(json!({ "name": name, "report": rep }));
            }
            let mut o = Outcome::new(text, Value::Array(results));
            o.ok = ok;
            o.seed = Some(*seed);
            o.algebra = Some(inst.name());
            Ok(o)
        }
        Command::Verify { catalog: path, algebra, mirror_retry } => {
            let inst = instance(algebra)?;
            let records = catalog(path)?;
            let report = verify_catalog(&records, &inst, *mirror_retry);
            let mut o = Outcome::new(report.to_string(), serde_json::to_value(&report).expect("serializable"));
            o.ok = report.all_match();
            o.algebra = Some(inst.name());
            Ok(o)
        }
        Command::Series { link, crossing, cutoff } => {
            let inst = crate::algebra::make_instance(AlgebraKind::HomflyptStyle).map_err(runtime)?;
            let (_, d) = resolve(link)?;
            if *cutoff < 0 {
                return Err(usage(format!("cutoff must be nonnegative, got {cutoff}")));
            }
            let ids: Vec<CrossingId> = match crossing {
                Some(c) => vec![*c],
                None => d.crossings().iter().map(|c| c.id).collect(),
            };
            let mut reports = Vec::new();
            for c in ids {
                let r = vassiliev_report(&d, c, &inst, *cutoff).map_err(|e| match e {
                    crate::series::SeriesError::Skein(_) => usage(e),
                    other => runtime(other),
                })?;
                reports.push(r);
            }
            let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n\n");
            let mut o = Outcome::new(text, serde_json::to_value(&reports).expect("serializable"));
            o.algebra = Some(inst.name());
            Ok(o)
        }
        Command::Homflypt { link } => {
            let inst = instance("generic")?;
            let (_, d) = resolve(link)?;
            let value = evaluate_based(&BasedDiagram::standard(d), &inst, &EvalOptions::fast()).map_err(runtime)?.0;
            let collapsed = collapse_r_to_q(value.value()).map_err(runtime)?;
            let homflypt = to_homflypt(&value).map_err(runtime)?;
            let text = format!("generic:   {value}\ncollapsed: {collapsed}\nhomflypt:  {homflypt}");
            let latex = |p: &LaurentPoly| p.render(RenderStyle::Latex);
            let mut o = Outcome::new(
                text,
                json!({
                    "generic": value.to_string(),
                    "collapsed": collapsed.to_string(),
                    "homflypt": homflypt.to_string(),
                }),
            );
            o.latex = Some(format!(
                "{} \\\\\n{} \\\\\n{}",
                latex(value.value()),
                latex(&collapsed),
                latex(homflypt.value())
            ));
            o.algebra = Some(inst.name());
            Ok(o)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("gconway").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn compute_trefoil() {
        let (code, out) = call(&["compute", "--algebra", "generic", "--pd", "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "2*p - p^2 + q*r\n");
    }

    #[test]
    fn unlinks_print_unit_values() {
        let inst = crate::algebra::make_instance(AlgebraKind::GenericLinear).unwrap();
        for (name, n) in [("unknot", 1), ("unlink2", 2), ("unlink3", 3)] {
            let (code, out) = call(&["compute", "--link", name]);
            assert_eq!(code, 0);
            assert_eq!(out.trim_end(), inst.unit_raw(n).unwrap().render(RenderStyle::Plain));
        }
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["compute", "--pd", "X(1,2"]).0, 2);
        assert_eq!(call(&["compute", "--algebra", "nope", "--pd", "O"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["compute"]).0, 2);
        assert_eq!(call(&["compute", "--link", "no-such-link"]).0, 2);
    }

    #[test]
    fn axioms_and_structured_output() {
        let (code, out) = call(&["axioms", "--algebra", "generic"]);
        assert_eq!(code, 0, "{out}");
        let (code, out) = call(&["--format", "structured", "--no-timing", "compute", "--pd", "O O"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["algebra"], "generic");
        assert_eq!(v["result"]["value"], "q^-1 - p*q^-1");
        assert!(v["timing_ms"].is_null());
        assert_eq!(call(&["--format", "structured", "--no-timing", "compute", "--pd", "O O"]).1, out);
    }

    #[test]
    fn homflypt_and_latex() {
        let (code, out) = call(&["homflypt", "--link", "trefoil"]);
        assert_eq!(code, 0);
        assert!(out.contains("homflypt:  2*v^2 - v^4 + v^2*z^2"), "{out}");
        let (_, out) = call(&["--format", "latex", "compute", "--link", "hopf+"]);
        assert!(out.contains("\\frac") || out.contains("^{"), "{out}");
    }
}

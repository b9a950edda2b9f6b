//! Command-line front end. `main.rs` only forwards `std::env::args` here.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::bundles::{make_twisted_bundle, span_check, trivial_bundle, DiscreteBundle, VBundle};
use crate::calg::{calg_catalog, CommAlgebra};
use crate::error::{Error, Result};
use crate::exactla::fmt_rat;
use crate::invforms::universal_form;
use crate::liealg::{catalog, sl2, sl3, sl3_negative_transpose, LieAlgebra};
use crate::suites::{
    extension_check, gluing_check, h2_check, maier_check, pipeline_checks, run_suite, universal_form_check, Check, Report, Suite, SuiteConfig,
};

pub const THREADS_ENV: &str = "UNIVEXT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "univext", version, about = "Universal invariant forms, current-algebra cocycles and Lie algebra H² over ℚ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Degree bound for Laurent sweeps.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
    pub window: i64,
    /// Seed for randomized spanning-set sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

/// Algebra arguments are catalog names (`sl2`, `abelian(3)`, `points(2)`, …)
/// or paths to JSON files.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Universal invariant form V_g and κ table.
    Vform { algebra: String },
    /// Dimensions of Z², B², H² with trivial coefficients ℚ^w.
    H2 {
        algebra: String,
        #[arg(long, default_value_t = 1)]
        coeff_dim: usize,
    },
    /// Universality of the Maier cocycle on A⊗g.
    Maier { lie: String, calg: String },
    /// Extension of cocycles from A⊗g to (A⊗g)⋊g.
    Extend { calg: String, lie: String },
    /// Connection pipeline on Laurent loops t^k⊗g, |k| ≤ window.
    Loop { lie: String },
    /// Span check and gluing for a bundle file or `twisted-sl3`, `trivial-sl2`.
    Bundle { bundle: String },
    /// Runs a suite: invforms, calg-extension, kac-moody, bundles or all.
    Verify { suite: String },
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
}

fn read_file(input: &str) -> Result<Option<String>> {
    let path = Path::new(input);
    if path.is_file() {
        return Ok(Some(std::fs::read_to_string(path)?));
    }
    if input.ends_with(".json") {
        return Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("{input}: no such file"))));
    }
    Ok(None)
}

fn file_label(input: &str) -> String {
    Path::new(input).file_stem().map_or_else(|| input.to_string(), |s| s.to_string_lossy().into_owned())
}

/// A catalog Lie algebra or a validated structure-constant file.
pub fn load_lie(input: &str) -> Result<LieAlgebra> {
    match read_file(input)? {
        Some(text) => {
            let g = LieAlgebra::from_json_str(&text)?;
            g.validate()?;
            Ok(if g.name().is_some() { g } else { g.with_name(file_label(input)) })
        }
        None => catalog(input),
    }
}

pub fn load_calg(input: &str) -> Result<CommAlgebra> {
    match read_file(input)? {
        Some(text) => {
            let a = CommAlgebra::from_json_str(&text)?;
            a.validate_alg()?;
            Ok(if a.name().is_some() { a } else { a.with_name(file_label(input)) })
        }
        None => calg_catalog(input),
    }
}

pub fn load_bundle(input: &str) -> Result<DiscreteBundle> {
    match input {
        "twisted-sl3" => make_twisted_bundle(&sl3(), 6, &sl3_negative_transpose()),
        "trivial-sl2" => trivial_bundle(&sl2(), 3),
        _ => match read_file(input)? {
            Some(text) => DiscreteBundle::from_json_str(&text),
            None => Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("{input}: no such bundle file")))),
        },
    }
}

fn single(suite: &str, c: Check) -> Report {
    let mut r = Report::new(suite);
    r.push(c);
    r
}

fn cmd_vform(input: &str) -> Result<Outcome> {
    let g = load_lie(input)?;
    let name = g.name().unwrap_or(input).to_string();
    let u = universal_form(&g);
    let n = g.dim();
    let mut table = Map::new();
    let mut lines = Vec::new();
    for i in 0..n {
        for j in i..n {
            let k = u.kappa_basis(i, j);
            if k.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                let vals: Vec<String> = k.iter().map(fmt_rat).collect();
                lines.push(format!("  κ(e{i}, e{j}) = [{}]", vals.join(", ")));
                table.insert(format!("{i},{j}"), json!(vals));
            }
        }
    }
    let check = universal_form_check(&name, &g).witness(json!({ "kappa": Value::Object(table) }));
    let mut text = format!("algebra {name} (dim {n})\ndim V = {}\nrelation rank = {}\nκ table:\n", u.dim(), u.relations().dim());
    for l in lines {
        text.push_str(&l);
        text.push('\n');
    }
    Ok(Outcome { report: single("vform", check), text })
}

fn cmd_h2(input: &str, w: usize) -> Result<Outcome> {
    let g = load_lie(input)?;
    let name = g.name().unwrap_or(input).to_string();
    let c = h2_check(&name, &g, w, None);
    let text = format!("algebra {name}, coefficients ℚ^{w}\ndim Z2 = {}\ndim B2 = {}\ndim H2 = {}\n", c.dims["Z2"], c.dims["B2"], c.dims["H2"]);
    Ok(Outcome { report: single("h2", c), text })
}

fn with_render(report: Report) -> Outcome {
    let text = report.render();
    Outcome { report, text }
}

fn cmd_bundle(input: &str, seed: u64) -> Result<Outcome> {
    let b = load_bundle(input)?;
    let v = VBundle::new(&b)?;
    let mut r = Report::new("bundle");
    let spans = span_check(&b, &v);
    // SpanFailure is reported, not raised
    r.push(Check::new("span check", true).dim("spans", spans).dim("base", b.base_size()).dim("dim_V", v.dim()));
    let sections = b.section_algebra();
    r.push(Check::new("section algebra", true).dim("dim", sections.dim()).dim("perfect", sections.is_perfect()));
    if spans {
        r.push(gluing_check(input, &b, 4, seed));
    }
    Ok(with_render(r))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = SuiteConfig { window: cli.window, seed: cli.seed };
    match &cli.command {
        Command::Vform { algebra } => cmd_vform(algebra),
        Command::H2 { algebra, coeff_dim } => cmd_h2(algebra, *coeff_dim),
        Command::Maier { lie, calg } => Ok(with_render(single("maier", maier_check(&load_lie(lie)?, &load_calg(calg)?)))),
        Command::Extend { calg, lie } => Ok(with_render(single("extend", extension_check(&load_calg(calg)?, &load_lie(lie)?)))),
        Command::Loop { lie } => {
            let mut r = Report::new("loop");
            for c in pipeline_checks(&load_lie(lie)?, cfg.window) {
                r.push(c);
            }
            Ok(with_render(r))
        }
        Command::Bundle { bundle } => cmd_bundle(bundle, cfg.seed),
        Command::Verify { suite } => Ok(with_render(run_suite(suite.parse::<Suite>()?, &cfg)?)),
    }
}

/// Caps the global worker pool when `UNIVEXT_THREADS` is set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::Parse(format!("{THREADS_ENV} must be positive")));
        }
        // a pool built earlier in the same process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Parses arguments, runs the command and returns the exit code: `0` when
/// every check passes, `1` when one fails, `2` on input errors.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let _ = write!(out, "{}", outcome.text);
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, outcome.report.to_json()) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    match outcome.report.first_failure() {
        None => 0,
        Some(c) => {
            let _ = writeln!(err, "first failing check: {}", c.check);
            1
        }
    }
}

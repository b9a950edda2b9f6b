//! Verification suites and the versioned JSON report they produce.
//!
//! Every check is exhaustive over bases or over a seeded sample; a given
//! `(suite, window, seed)` always yields the same report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bundles::{
    factor_invariant_form, form_from_psi, make_twisted_bundle, pointwise_killing_form, span_check, verify_factorization,
    DiscreteBundle, PartitionOfUnity, VBundle,
};
use crate::calg::{
    bivariate_truncated, functions_on_points, kaehler, truncated_poly, zero_product, CanonicalNeutral, ChainUnits, CommAlgebra, Element,
    MinimalSupport, SeqAlgebra,
};
use crate::cohom::{
    check_cocycle, extend_cocycle, extended_value, h2, h2_pullback, maier_cocycle, restriction_map, verify_universal,
};
use crate::current::{unitalisation_iso, CurrentAlgebra, CurrentElement, SemidirectElement};
use crate::error::{Error, Result};
use crate::exactla::{fmt_rat, int, rat, Mat, Rat};
use crate::invforms::{check_centroid_compatibility, factor_form, invariant_forms, universal_form, BilinearForm};
use crate::liealg::{abelian, catalog, sl2, sl2_exp_ad_e, sl3, sl3_negative_transpose, so3, LieAlgebra, CATALOG_NAMES};
use crate::loopforms::run_pipeline;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    pub dims: BTreeMap<String, Value>,
    pub witness: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        Check {
            check: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            dims: BTreeMap::new(),
            witness: Value::Null,
        }
    }

    pub fn dim(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.dims.insert(key.to_string(), v.into());
        self
    }

    pub fn witness(mut self, w: impl Into<Value>) -> Self {
        self.witness = w.into();
        self
    }

    /// A failing check carrying the error as its witness.
    pub fn error(name: impl Into<String>, e: &Error) -> Self {
        Check::new(name, false).witness(json!({ "error": e.to_string() }))
    }

    pub fn from_result(name: impl Into<String>, r: Result<Check>) -> Self {
        let name = name.into();
        r.unwrap_or_else(|e| Check::error(name, &e))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { schema_version: SCHEMA_VERSION, suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let dims: Vec<String> = c.dims.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {}", c.check));
            if !dims.is_empty() {
                out.push_str(&format!("  [{}]", dims.join(", ")));
            }
            if !c.passed() && !c.witness.is_null() {
                out.push_str(&format!("  witness: {}", c.witness));
            }
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        out.push_str(&format!("{}: {passed}/{} checks passed\n", self.suite, self.checks.len()));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Invforms,
    CalgExtension,
    KacMoody,
    Bundles,
    All,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Invforms, Suite::CalgExtension, Suite::KacMoody, Suite::Bundles];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Invforms => "invforms",
            Suite::CalgExtension => "calg-extension",
            Suite::KacMoody => "kac-moody",
            Suite::Bundles => "bundles",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}; expected invforms, calg-extension, kac-moody, bundles or all")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub window: i64,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { window: 3, seed: 0 }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Report> {
    if cfg.window < 1 {
        return Err(Error::Parse(format!("window must be at least 1, got {}", cfg.window)));
    }
    let checks = match suite {
        Suite::Invforms => invforms_suite(cfg),
        Suite::CalgExtension => calg_extension_suite(cfg),
        Suite::KacMoody => kac_moody_suite(cfg),
        Suite::Bundles => bundles_suite(cfg),
        Suite::All => {
            let parts: Vec<Vec<Check>> = Suite::ALL.par_iter().map(|s| run_suite(*s, cfg).map(|r| r.checks)).collect::<Result<_>>()?;
            parts.into_iter().flatten().collect()
        }
    };
    Ok(Report { schema_version: SCHEMA_VERSION, suite: suite.name().to_string(), checks })
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn mat_strings(m: &Mat) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| rat_strings(r)).collect()
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-9..10), rng.gen_range(1..5))
}

/// Expected `dim V_g` where it is known in closed form.
fn expected_v_dim(name: &str, g: &LieAlgebra) -> Option<usize> {
    match name {
        "sl2" | "sl3" | "so3" => Some(1),
        "sl2_plus_sl2" => Some(2),
        _ if name.starts_with("abelian") => Some(g.dim() * (g.dim() + 1) / 2),
        _ => None,
    }
}

/// `dim V_g`, exact round trips `ψ∘κ = β` for every basis form and the span
/// property certifying uniqueness.
pub fn universal_form_check(name: &str, g: &LieAlgebra) -> Check {
    let run = || -> Result<Check> {
        let u = universal_form(g);
        let forms = invariant_forms(g);
        let kappa = u.as_form();
        for (k, beta) in forms.iter().enumerate() {
            let psi = factor_form(&u, beta)?;
            if kappa.compose(&psi) != *beta {
                return Ok(Check::new(format!("universal form {name}"), false).witness(json!({ "form": k })));
            }
        }
        let dim_ok = expected_v_dim(name, g).is_none_or(|d| d == u.dim());
        let pass = dim_ok && u.image_spans() && forms.len() == u.dim();
        Ok(Check::new(format!("universal form {name}"), pass)
            .dim("dim_g", g.dim())
            .dim("dim_V", u.dim())
            .dim("relation_rank", u.relations().dim())
            .dim("invariant_forms", forms.len()))
    };
    Check::from_result(format!("universal form {name}"), run())
}

fn invforms_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut names: Vec<String> = CATALOG_NAMES.iter().map(|s| s.to_string()).collect();
    for n in 1..=4 {
        let a = format!("abelian({n})");
        if !names.contains(&a) {
            names.push(a);
        }
    }
    let mut checks: Vec<Check> = names
        .par_iter()
        .map(|name| match catalog(name) {
            Ok(g) => universal_form_check(name, &g),
            Err(e) => Check::error(format!("universal form {name}"), &e),
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for name in CATALOG_NAMES {
        let g = catalog(name).expect("catalog names resolve");
        let forms = invariant_forms(&g);
        let label = format!("random invariant form {name}");
        if forms.is_empty() {
            checks.push(Check::new(label, true).dim("invariant_forms", 0));
            continue;
        }
        let coeffs = Mat::from_rows(forms.len(), (0..2).map(|_| (0..forms.len()).map(|_| random_rat(&mut rng)).collect()).collect());
        let beta = BilinearForm::stack(&forms, &coeffs);
        let u = universal_form(&g);
        checks.push(Check::from_result(
            label.clone(),
            factor_form(&u, &beta).map(|psi| Check::new(label, u.as_form().compose(&psi) == beta).dim("target_dim", 2)),
        ));
    }
    for name in CATALOG_NAMES {
        let g = catalog(name).expect("catalog names resolve");
        let label = format!("centroid compatibility {name}");
        let kappa = universal_form(&g).as_form();
        let r = invariant_forms(&g)
            .iter()
            .chain([&kappa])
            .try_for_each(|b| check_centroid_compatibility(&g, b))
            .map(|_| Check::new(label.clone(), true).dim("centroid_dim", g.centroid().dim()));
        checks.push(Check::from_result(label, r));
    }
    checks
}

pub fn h2_check(name: &str, g: &LieAlgebra, w: usize, expected: Option<usize>) -> Check {
    let s = h2(g, w);
    Check::new(format!("H2 {name}"), expected.is_none_or(|e| e == s.dim()))
        .dim("coeff_dim", w)
        .dim("Z2", s.dim_z2())
        .dim("B2", s.dim_b2())
        .dim("H2", s.dim())
}

/// Bijectivity of `θ ↦ [θ∘ω]` for `W = ℚ, ℚ²` and
/// `dim H²(A⊗g) = dim V_g · dim(Ω(A)/dA)`.
pub fn maier_check(g: &LieAlgebra, a: &CommAlgebra) -> Check {
    let label = format!("Maier universality {}⊗{}", a.name().unwrap_or("A"), g.name().unwrap_or("g"));
    let run = || -> Result<Check> {
        let m = maier_cocycle(g, a)?;
        let l = m.current.to_lie_algebra();
        let r = verify_universal(&l, &m.cochain)?;
        let h = r.probes[0].2;
        let q = kaehler(a)?.omega_mod_da().dim();
        let pass = r.universal && h == universal_form(g).dim() * q;
        Ok(Check::new(label.clone(), pass)
            .dim("current_dim", l.dim())
            .dim("dim_V", m.v_dim)
            .dim("dim_Omega_mod_dA", q)
            .dim("H2", h)
            .witness(json!({ "probes": r.probes })))
    };
    Check::from_result(label.clone(), run())
}

/// Extension of every `Z²` basis cocycle of `A⊗g` to `(A⊗g)⋊g`: alternating,
/// closed, restricting back, and inducing a bijection on `H²`.
pub fn extension_check(a: &CommAlgebra, g: &LieAlgebra) -> Check {
    let label = format!("extension {}⊗{}", a.name().unwrap_or("A"), g.name().unwrap_or("g"));
    let run = || -> Result<Check> {
        let c = CurrentAlgebra::new(a.clone(), g.clone());
        let (l, sd) = (c.to_lie_algebra(), c.semidirect());
        let z = h2(&l, 1);
        let zsd = h2(&sd, 1);
        let mut extended = 0;
        for omega0 in z.cocycle_basis() {
            let ext = extend_cocycle(&c, &omega0, &CanonicalNeutral)?;
            ext.check_alternating()?;
            check_cocycle(&sd, &ext)?;
            if restriction_map(&c, &ext) != omega0 {
                return Ok(Check::new(label.clone(), false).witness(json!({ "restriction_differs_at": extended })));
            }
            extended += 1;
        }
        let m = h2_pullback(&c.inclusion_current(), &zsd, &z)?;
        let bijective = m.rows() == m.cols() && (m.rows() == 0 || m.is_invertible());
        Ok(Check::new(label.clone(), bijective)
            .dim("Z2_current", z.dim_z2())
            .dim("H2_current", z.dim())
            .dim("H2_semidirect", zsd.dim())
            .dim("extended", extended))
    };
    Check::from_result(label.clone(), run())
}

fn random_seq_element(rng: &mut ChaCha8Rng, n: usize) -> CurrentElement<u64> {
    let mut e = Element::zero();
    for _ in 0..rng.gen_range(1..5) {
        e.add_term((rng.gen_range(1..12u64), rng.gen_range(0..n)), int(rng.gen_range(-4..5)));
    }
    e
}

/// Extended values on `FinSuppSeq⊗g ⋊ g` agree for two neutral-triple choosers.
/// `ω₀ = η∘[·,·]` for a seeded `η`.
pub fn neutral_independence_check(g: &LieAlgebra, pairs: usize, seed: u64) -> Check {
    let label = format!("neutral triple independence FinSuppSeq⊗{}", g.name().unwrap_or("g"));
    let n = g.dim();
    let c = CurrentAlgebra::new(SeqAlgebra, g.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eta: BTreeMap<(u64, usize), Rat> = (1..12u64).flat_map(|k| (0..n).map(move |i| (k, i))).map(|key| (key, random_rat(&mut rng))).collect();
    let omega0 = |u: &CurrentElement<u64>, v: &CurrentElement<u64>| {
        vec![c.bracket(u, v).terms().map(|(k, x)| x * eta.get(&k).cloned().unwrap_or_else(Rat::zero)).sum::<Rat>()]
    };
    let samples: Vec<(SemidirectElement<u64>, SemidirectElement<u64>)> = (0..pairs)
        .map(|_| {
            let mut el = || SemidirectElement { f: random_seq_element(&mut rng, n), y: (0..n).map(|_| int(rng.gen_range(-3..4))).collect() };
            (el(), el())
        })
        .collect();
    let mismatch = samples.iter().enumerate().find_map(|(k, (p, q))| {
        let a = extended_value(&c, &omega0, &MinimalSupport, p, q);
        let b = extended_value(&c, &omega0, &ChainUnits, p, q);
        match (a, b) {
            (Ok(a), Ok(b)) if a == b => None,
            (a, b) => Some(json!({ "pair": k, "minimal_support": format!("{a:?}"), "chain_units": format!("{b:?}") })),
        }
    });
    match mismatch {
        None => Check::new(label, true).dim("pairs", pairs),
        Some(w) => Check::new(label, false).dim("pairs", pairs).witness(w),
    }
}

pub fn iso_unital_check(a: &CommAlgebra, g: &LieAlgebra) -> Check {
    let label = format!("unitalisation isomorphism {}⊗{}", a.name().unwrap_or("A"), g.name().unwrap_or("g"));
    let r = unitalisation_iso(a, g).map(|iso| Check::new(label.clone(), iso.matrix().is_invertible()).dim("dim", iso.matrix().rows()));
    Check::from_result(label.clone(), r)
}

pub fn semidirect_jacobi_check(a: &CommAlgebra, g: &LieAlgebra) -> Check {
    let label = format!("semidirect Jacobi {}⊗{}", a.name().unwrap_or("A"), g.name().unwrap_or("g"));
    let sd = CurrentAlgebra::new(a.clone(), g.clone()).semidirect();
    let dim = sd.dim();
    Check::from_result(label.clone(), sd.validate().map(|_| Check::new(label, true).dim("dim", dim)))
}

fn calg_extension_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let g = sl2();
    let jobs: Vec<Box<dyn Fn() -> Check + Send + Sync>> = vec![
        Box::new(|| h2_check("sl2", &sl2(), 1, Some(0))),
        Box::new(|| h2_check("sl3", &sl3(), 1, Some(0))),
        Box::new(|| maier_check(&sl2(), &bivariate_truncated())),
        Box::new(|| extension_check(&functions_on_points(2), &sl2())),
        Box::new(|| extension_check(&truncated_poly(3), &sl2())),
        Box::new(move || neutral_independence_check(&sl2(), 100, cfg.seed)),
    ];
    let mut checks: Vec<Check> = jobs.par_iter().map(|j| j()).collect();
    let kd = kaehler(&bivariate_truncated()).map(|k| {
        Check::new("Kaehler module bivariate_truncated", k.check_leibniz().is_ok())
            .dim("Omega", k.dim())
            .dim("Omega_mod_dA", k.omega_mod_da().dim())
    });
    checks.push(Check::from_result("Kaehler module bivariate_truncated", kd));
    for (a, h) in [(functions_on_points(2), g.clone()), (zero_product(2), so3()), (truncated_poly(2), sl3())] {
        checks.push(iso_unital_check(&a, &h));
    }
    for (a, h) in [(functions_on_points(2), g.clone()), (truncated_poly(3), g.clone()), (zero_product(2), abelian(2)), (bivariate_truncated(), so3())] {
        checks.push(semidirect_jacobi_check(&a, &h));
    }
    checks
}

/// Every identity of the loop pipeline on the window, one check each.
pub fn pipeline_checks(g: &LieAlgebra, window: i64) -> Vec<Check> {
    let name = g.name().unwrap_or("g").to_string();
    let u = universal_form(g);
    let r = run_pipeline(&u, window);
    let n = r.window_size;
    let flag = |label: &str, ok: bool| Check::new(format!("{label} {name}"), ok).dim("window", window).dim("monomials", n);
    let mut checks = vec![
        flag("Lie connection", r.lie_connection),
        flag("beta symmetric", r.beta_symmetric),
        flag("beta invariant", r.beta_invariant),
        flag("koszul d∘κ = β", r.koszul_matches_beta),
        flag("koszul Leibniz", r.koszul_leibniz),
        flag("omega alternating", r.omega_alternating),
        flag("omega closed", r.omega_closed),
        flag("kappa images span", r.kappa_spans),
    ];
    checks.push(match &r.maier {
        Ok(m) => flag("Maier identification", true).dim("sign", m.sign).dim("pairs", m.pairs_checked),
        Err(e) => flag("Maier identification", false).witness(json!({ "error": e })),
    });
    checks.push(match &r.certificate {
        Some(c) => flag("non-coboundary certificate", true).witness(json!({
            "target_coord": c.target_coord,
            "pairs": c.pairs,
            "weights": rat_strings(&c.weights),
            "value": fmt_rat(&c.value),
        })),
        None => flag("non-coboundary certificate", false),
    });
    checks
}

fn kac_moody_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut checks = pipeline_checks(&sl2(), cfg.window);
    checks.extend(pipeline_checks(&so3(), cfg.window.min(2)));
    checks
}

/// Seeded invariant forms on the section algebra: pointwise Killing forms
/// with random weights alternating with `ψ∘κ_K` for random `ψ`.
pub fn seeded_section_forms(b: &DiscreteBundle, v: &VBundle, count: usize, seed: u64) -> Vec<BilinearForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = b.base_size();
    (0..count)
        .map(|k| {
            if k % 2 == 0 && b.fiber().is_semisimple() {
                let coeffs: Vec<Vec<Rat>> = (0..base).map(|_| vec![random_rat(&mut rng)]).collect();
                pointwise_killing_form(b, &coeffs)
            } else {
                let cols = base * v.dim();
                let psi = Mat::from_rows(cols, (0..2).map(|_| (0..cols).map(|_| random_rat(&mut rng)).collect()).collect());
                form_from_psi(b, v, &psi)
            }
        })
        .collect()
}

/// Factoring seeded forms under two partitions of unity.
pub fn gluing_check(label: &str, b: &DiscreteBundle, forms: usize, seed: u64) -> Check {
    let run = || -> Result<Check> {
        let v = VBundle::new(b)?;
        let spans = span_check(b, &v);
        let gammas = seeded_section_forms(b, &v, forms, seed);
        let (p1, p2) = (PartitionOfUnity::default_chart(b), PartitionOfUnity::uniform(b));
        let results: Vec<Result<bool>> = gammas
            .par_iter()
            .map(|gamma| {
                let b1 = factor_invariant_form(b, &v, gamma, &p1)?;
                let b2 = factor_invariant_form(b, &v, gamma, &p2)?;
                verify_factorization(b, &v, gamma, &b1)?;
                Ok(b1 == b2)
            })
            .collect();
        let mut check = Check::new(format!("gluing {label}"), spans)
            .dim("base", b.base_size())
            .dim("charts", b.cover().len())
            .dim("fiber_dim", b.fiber().dim())
            .dim("dim_V", v.dim())
            .dim("forms", forms);
        for (k, r) in results.into_iter().enumerate() {
            match r {
                Ok(true) => {}
                Ok(false) => return Ok(Check::new(check.check, false).witness(json!({ "form": k, "partitions_disagree": true }))),
                Err(e) => return Ok(Check::new(check.check, false).witness(json!({ "form": k, "error": e.to_string() }))),
            }
        }
        if !spans {
            check = check.witness(json!({ "span_check": false }));
        }
        Ok(check)
    };
    Check::from_result(format!("gluing {label}"), run())
}

fn bundles_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let twisted = make_twisted_bundle(&sl3(), 6, &sl3_negative_transpose());
    let trivial = DiscreteBundle::new(3, vec![vec![0, 1], vec![1, 2]], sl2(), vec![((0, 1, 1), Mat::identity(3))]);
    let inner = make_twisted_bundle(&sl2(), 4, &sl2_exp_ad_e());
    for (label, b) in [("twisted sl3 over 6-cycle", &twisted), ("trivial sl2 over 3 points", &trivial), ("inner sl2 over 4-cycle", &inner)] {
        match b {
            Ok(b) => {
                checks.push(gluing_check(label, b, 20, cfg.seed));
                let perfect = b.section_algebra().is_perfect();
                checks.push(Check::new(format!("section algebra perfect {label}"), perfect).dim("dim", b.section_algebra().dim()));
            }
            Err(e) => checks.push(Check::error(format!("bundle {label}"), e)),
        }
    }
    if let Ok(b) = &twisted {
        checks.push(Check::new("transition is an outer automorphism", b.transition(0, 1, 0) == sl3_negative_transpose()).witness(json!({
            "matrix": mat_strings(&b.transition(0, 1, 0))
        })));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn report_schema() {
        let mut r = Report::new("demo");
        r.push(Check::new("a", true).dim("n", 3));
        r.push(Check::new("b", false).witness(json!({ "at": [0, 1] })));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"][1]["status"], "fail");
        assert_eq!(r.first_failure().unwrap().check, "b");
        assert!(r.render().contains("1/2 checks passed"));
    }

    #[test]
    fn window_must_be_positive() {
        assert!(run_suite(Suite::KacMoody, &SuiteConfig { window: 0, seed: 0 }).is_err());
    }

    #[test]
    fn invforms_suite_passes() {
        let r = run_suite(Suite::Invforms, &SuiteConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.render());
    }

    #[test]
    fn failing_checks_are_reported() {
        let c = h2_check("abelian(2)", &abelian(2), 1, Some(0));
        assert!(!c.passed());
        assert_eq!(c.dims["H2"], 1);
        let c = maier_check(&crate::liealg::heisenberg3(), &truncated_poly(2));
        assert!(!c.passed());
        assert!(c.witness["error"].as_str().unwrap().contains("semisimple"));
    }
}

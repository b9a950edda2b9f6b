//! Connections and forms on the algebraic circle. Functions are elements of
//! `ℚ[t, t⁻¹] ⊗ F` and 1-forms are `Σ_k c_k t^k dt` with `c_k ∈ F`, where the
//! fiber `F` is either `g` or `V_g`.
//!
//! The cocycle `ω(η, ζ) = res κ̃(Dη, ζ)` evaluates on monomials to
//! `ω(t^m⊗x, t^n⊗y) = m·δ_{m+n,0}·κ(x,y)`, while the Maier cocycle under the
//! residue gives `n·δ_{m+n,0}·κ(x,y)`. The two agree up to the global sign
//! [`MAIER_SIGN`].

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::calg::{Element, LaurentAlgebra, LaurentPoly};
use crate::cohom::{maier_laurent, non_coboundary_certificate, Certificate, CertificateOutcome};
use crate::current::{CurrentAlgebra, CurrentElement};
use crate::error::{Error, Result};
use crate::exactla::{add_scaled, int, is_zero_vec, zero_vec, Rat, Subspace};
use crate::invforms::UniversalForm;
use crate::liealg::LieAlgebra;

/// `ω = MAIER_SIGN · (residue-identified Maier cocycle)`.
pub const MAIER_SIGN: i32 = -1;

/// Finitely supported map `ℤ → ℚ^dim` with no zero entries stored.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Series {
    dim: usize,
    coeffs: BTreeMap<i64, Vec<Rat>>,
}

impl Series {
    fn zero(dim: usize) -> Self {
        Series { dim, coeffs: BTreeMap::new() }
    }

    fn add_at(&mut self, k: i64, s: &Rat, v: &[Rat]) {
        if s.is_zero() || is_zero_vec(v) {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(|| zero_vec(self.dim));
        add_scaled(slot, s, v);
        if is_zero_vec(slot) {
            self.coeffs.remove(&k);
        }
    }

    fn add(&self, other: &Series) -> Series {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_at(*k, &int(1), v);
        }
        out
    }

    fn scale(&self, s: &Rat) -> Series {
        let mut out = Series::zero(self.dim);
        for (k, v) in &self.coeffs {
            out.add_at(*k, s, v);
        }
        out
    }

    fn coeff(&self, k: i64) -> Vec<Rat> {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| zero_vec(self.dim))
    }

    /// Convolution through a bilinear map on fibers.
    fn convolve(&self, other: &Series, out_dim: usize, f: impl Fn(&[Rat], &[Rat]) -> Vec<Rat>) -> Series {
        let mut out = Series::zero(out_dim);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_at(a + b, &int(1), &f(x, y));
            }
        }
        out
    }

    /// `Σ c_k t^k ↦ Σ k c_k t^{k-1}`.
    fn derivative(&self) -> Series {
        let mut out = Series::zero(self.dim);
        for (k, v) in &self.coeffs {
            out.add_at(k - 1, &int(*k), v);
        }
        out
    }

    fn times_poly(&self, f: &LaurentPoly) -> Series {
        let mut out = Series::zero(self.dim);
        for (a, s) in f.terms() {
            for (b, v) in &self.coeffs {
                out.add_at(a + b, s, v);
            }
        }
        out
    }
}

/// An element of `ℚ[t, t⁻¹] ⊗ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopElement(Series);

/// A 1-form `Σ_k c_k t^k dt` with values in `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopOneForm(Series);

macro_rules! series_api {
    ($t:ident) => {
        impl $t {
            pub fn zero(dim: usize) -> Self {
                $t(Series::zero(dim))
            }

            /// `t^k ⊗ x`, or `t^k dt ⊗ x` for forms.
            pub fn monomial(k: i64, x: &[Rat]) -> Self {
                let mut s = Series::zero(x.len());
                s.add_at(k, &int(1), x);
                $t(s)
            }

            pub fn fiber_dim(&self) -> usize {
                self.0.dim
            }

            pub fn coeff(&self, k: i64) -> Vec<Rat> {
                self.0.coeff(k)
            }

            pub fn terms(&self) -> impl Iterator<Item = (i64, &Vec<Rat>)> {
                self.0.coeffs.iter().map(|(k, v)| (*k, v))
            }

            pub fn is_zero(&self) -> bool {
                self.0.coeffs.is_empty()
            }

            pub fn add(&self, other: &Self) -> Self {
                $t(self.0.add(&other.0))
            }

            pub fn sub(&self, other: &Self) -> Self {
                $t(self.0.add(&other.0.scale(&int(-1))))
            }

            pub fn scale(&self, s: &Rat) -> Self {
                $t(self.0.scale(s))
            }

            /// Multiplication by a scalar Laurent polynomial.
            pub fn times(&self, f: &LaurentPoly) -> Self {
                $t(self.0.times_poly(f))
            }
        }
    };
}

series_api!(LoopElement);
series_api!(LoopOneForm);

impl LoopElement {
    pub fn to_current(&self) -> CurrentElement<i64> {
        let mut e = Element::zero();
        for (k, v) in self.terms() {
            for (i, x) in v.iter().enumerate() {
                e.add_term((k, i), x.clone());
            }
        }
        e
    }

    pub fn from_current(dim: usize, e: &CurrentElement<i64>) -> Self {
        let mut s = Series::zero(dim);
        for ((k, i), x) in e.terms() {
            let mut v = zero_vec(dim);
            v[i] = x.clone();
            s.add_at(k, &int(1), &v);
        }
        LoopElement(s)
    }
}

/// Pointwise bracket `[η, τ]`.
pub fn loop_bracket(g: &LieAlgebra, eta: &LoopElement, tau: &LoopElement) -> LoopElement {
    LoopElement(eta.0.convolve(&tau.0, g.dim(), |x, y| g.br(x, y)))
}

/// `[ω, τ]` for a `g`-valued form and a function.
pub fn form_bracket(g: &LieAlgebra, omega: &LoopOneForm, tau: &LoopElement) -> LoopOneForm {
    LoopOneForm(omega.0.convolve(&tau.0, g.dim(), |x, y| g.br(x, y)))
}

/// The connection `D(Σ t^k ⊗ x_k) = Σ k t^{k-1} dt ⊗ x_k`.
pub fn connection_d(eta: &LoopElement) -> LoopOneForm {
    LoopOneForm(eta.0.derivative())
}

/// `κ̃(ω, η)`: pointwise `κ(ω_p, η(p))`, a `V_g`-valued form.
pub fn kappa_tilde(u: &UniversalForm, omega: &LoopOneForm, eta: &LoopElement) -> LoopOneForm {
    LoopOneForm(omega.0.convolve(&eta.0, u.dim(), |x, y| u.kappa(x, y)))
}

/// `κ(ξ, ζ)` pointwise, a `V_g`-valued function.
pub fn kappa_pointwise(u: &UniversalForm, xi: &LoopElement, zeta: &LoopElement) -> LoopElement {
    LoopElement(xi.0.convolve(&zeta.0, u.dim(), |x, y| u.kappa(x, y)))
}

/// `β(ζ, η) = κ̃(Dζ, η) + κ̃(Dη, ζ)`.
pub fn beta_form(u: &UniversalForm, zeta: &LoopElement, eta: &LoopElement) -> LoopOneForm {
    kappa_tilde(u, &connection_d(zeta), eta).add(&kappa_tilde(u, &connection_d(eta), zeta))
}

/// The Koszul connection on `V_g`-valued functions: the formal derivative.
pub fn koszul_d(phi: &LoopElement) -> LoopOneForm {
    LoopOneForm(phi.0.derivative())
}

/// The `t⁻¹ dt` coefficient; it vanishes exactly on exact forms.
pub fn form_residue(omega: &LoopOneForm) -> Vec<Rat> {
    omega.coeff(-1)
}

/// `ω(η, ζ) = res κ̃(Dη, ζ)`, the class in `Ω¹/dΩ⁰ ⊗ V_g ≅ V_g`.
pub fn omega_cocycle(u: &UniversalForm, eta: &LoopElement, zeta: &LoopElement) -> Vec<Rat> {
    form_residue(&kappa_tilde(u, &connection_d(eta), zeta))
}

/// `t^k ⊗ e_i` for `|k| ≤ degree` and every basis index `i`.
pub fn monomial_window(dim: usize, degree: i64) -> Vec<LoopElement> {
    let mut out = Vec::new();
    for k in -degree..=degree {
        for i in 0..dim {
            let mut x = zero_vec(dim);
            x[i] = int(1);
            out.push(LoopElement::monomial(k, &x));
        }
    }
    out
}

/// Result of comparing `ω` against the residue-identified Maier cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaierComparison {
    pub sign: i32,
    pub pairs_checked: usize,
}

/// Checks `ω = MAIER_SIGN · maier` on all monomial pairs of the window.
pub fn identify_with_maier(u: &UniversalForm, degree: i64) -> Result<MaierComparison> {
    let window = monomial_window(u.algebra().dim(), degree);
    let sign = int(MAIER_SIGN as i64);
    let mismatch = window.par_iter().enumerate().find_map_first(|(p, eta)| {
        let ce = eta.to_current();
        window.iter().enumerate().find_map(|(q, zeta)| {
            let lhs = omega_cocycle(u, eta, zeta);
            let rhs: Vec<Rat> = maier_laurent(u, &ce, &zeta.to_current()).iter().map(|x| x * &sign).collect();
            (lhs != rhs).then_some((p, q))
        })
    });
    match mismatch {
        Some((p, q)) => Err(Error::Mismatch(format!("window pair ({p}, {q})"))),
        None => Ok(MaierComparison { sign: MAIER_SIGN, pairs_checked: window.len() * window.len() }),
    }
}

/// For each degree in `-2·degree..=2·degree`, whether `κ` of monomial pairs
/// from the window spans `t^k ⊗ V_g`.
pub fn kappa_images_span(u: &UniversalForm, degree: i64) -> bool {
    let n = u.algebra().dim();
    (-2 * degree..=2 * degree).all(|k| {
        let mut vs = Vec::new();
        for a in (k - degree).max(-degree)..=(k + degree).min(degree) {
            let b = k - a;
            for i in 0..n {
                for j in 0..n {
                    let mut x = zero_vec(n);
                    x[i] = int(1);
                    let mut y = zero_vec(n);
                    y[j] = int(1);
                    let img = kappa_pointwise(u, &LoopElement::monomial(a, &x), &LoopElement::monomial(b, &y));
                    vs.push(img.coeff(k));
                }
            }
        }
        Subspace::span(u.dim(), vs).is_full()
    })
}

/// Outcome of every check of the connection pipeline on a degree window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineReport {
    pub degree: i64,
    pub window_size: usize,
    pub lie_connection: bool,
    pub beta_symmetric: bool,
    pub beta_invariant: bool,
    pub koszul_matches_beta: bool,
    pub koszul_leibniz: bool,
    pub omega_alternating: bool,
    pub omega_closed: bool,
    pub kappa_spans: bool,
    pub maier: std::result::Result<MaierComparison, String>,
    pub certificate: Option<Certificate>,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.lie_connection
            && self.beta_symmetric
            && self.beta_invariant
            && self.koszul_matches_beta
            && self.koszul_leibniz
            && self.omega_alternating
            && self.omega_closed
            && self.kappa_spans
            && self.maier.is_ok()
            && self.certificate.is_some()
    }
}

fn all_pairs(window: &[LoopElement], f: impl Fn(&LoopElement, &LoopElement) -> bool + Sync) -> bool {
    window.par_iter().all(|a| window.iter().all(|b| f(a, b)))
}

fn all_triples(window: &[LoopElement], f: impl Fn(&LoopElement, &LoopElement, &LoopElement) -> bool + Sync) -> bool {
    window.par_iter().all(|a| window.iter().all(|b| window.iter().all(|c| f(a, b, c))))
}

/// Runs every identity of the pipeline on monomials `t^k ⊗ e_i`, `|k| ≤ degree`.
pub fn run_pipeline(u: &UniversalForm, degree: i64) -> PipelineReport {
    let g = u.algebra();
    let window = monomial_window(g.dim(), degree);
    let lie_connection = all_pairs(&window, |a, b| {
        connection_d(&loop_bracket(g, a, b)) == form_bracket(g, &connection_d(a), b).sub(&form_bracket(g, &connection_d(b), a))
    });
    let beta_symmetric = all_pairs(&window, |a, b| beta_form(u, a, b) == beta_form(u, b, a));
    let beta_invariant =
        all_triples(&window, |a, b, c| beta_form(u, &loop_bracket(g, a, b), c) == beta_form(u, a, &loop_bracket(g, b, c)));
    let koszul_matches_beta = all_pairs(&window, |a, b| koszul_d(&kappa_pointwise(u, a, b)) == beta_form(u, a, b));
    let fs: Vec<LaurentPoly> = (-degree..=degree).map(crate::calg::monomial).collect();
    let koszul_leibniz = all_pairs(&window, |a, b| {
        let phi = kappa_pointwise(u, a, b);
        fs.iter().all(|f| {
            let df = crate::calg::laurent_d(f);
            // d(f·κ(ξ,ζ)) = df·κ(ξ,ζ) + f·dκ(ξ,ζ) = df·κ(ξ,ζ) + f·β(ξ,ζ)
            let lhs = koszul_d(&phi.times(f));
            let mid = LoopOneForm(phi.0.times_poly(&df)).add(&koszul_d(&phi).times(f));
            lhs == mid && mid == LoopOneForm(phi.0.times_poly(&df)).add(&beta_form(u, a, b).times(f))
        })
    });
    let omega_alternating = all_pairs(&window, |a, b| {
        let s = a.add(b);
        is_zero_vec(&omega_cocycle(u, &s, &s))
            && omega_cocycle(u, a, b).iter().zip(omega_cocycle(u, b, a)).all(|(x, y)| (x + y).is_zero())
    });
    let omega_closed = all_triples(&window, |a, b, c| {
        let mut sum = omega_cocycle(u, &loop_bracket(g, a, b), c);
        add_scaled(&mut sum, &int(1), &omega_cocycle(u, &loop_bracket(g, b, c), a));
        add_scaled(&mut sum, &int(1), &omega_cocycle(u, &loop_bracket(g, c, a), b));
        is_zero_vec(&sum)
    });
    let kappa_spans = kappa_images_span(u, degree);
    let maier = identify_with_maier(u, degree).map_err(|e| e.to_string());
    let certificate = omega_certificate(u, degree);
    PipelineReport {
        degree,
        window_size: window.len(),
        lie_connection,
        beta_symmetric,
        beta_invariant,
        koszul_matches_beta,
        koszul_leibniz,
        omega_alternating,
        omega_closed,
        kappa_spans,
        maier,
        certificate,
    }
}

/// A certificate that `ω` is not a coboundary on the degree window.
pub fn omega_certificate(u: &UniversalForm, degree: i64) -> Option<Certificate> {
    let g = u.algebra();
    let c = CurrentAlgebra::new(LaurentAlgebra, g.clone());
    let window = monomial_window(g.dim(), degree);
    let br = |a: &LoopElement, b: &LoopElement| c.bracket(&a.to_current(), &b.to_current());
    let om = |a: &LoopElement, b: &LoopElement| omega_cocycle(u, a, b);
    match non_coboundary_certificate(&window, br, om) {
        CertificateOutcome::Certificate(cert) => cert.verify(&window, br, om).then_some(cert),
        CertificateOutcome::Unknown => None,
    }
}

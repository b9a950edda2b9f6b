//! Commutative associative algebras: finite-dimensional ones given by
//! structure constants, finitely supported sequences with the pointwise
//! product, and Laurent polynomials. Also neutral elements and triples, the
//! Kähler module `Ω(A) = I/I²` and the quotient `Ω(A)/d(A)`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{
    add_scaled, fmt_rat, int, is_zero_vec, parse_rat, quotient, unit_vec, zero_vec, Mat, QuotientSpace, Rat,
    Subspace,
};
use crate::liealg::JsonIndex;

/// A commutative algebra with a distinguished basis indexed by `Key`.
pub trait Carrier: Clone + Send + Sync {
    type Key: Ord + Copy + Debug + Hash + Send + Sync;

    /// Product of two basis elements as a sparse combination.
    fn mul_basis(&self, a: Self::Key, b: Self::Key) -> Vec<(Self::Key, Rat)>;

    fn mul(&self, a: &Element<Self::Key>, b: &Element<Self::Key>) -> Element<Self::Key> {
        let mut out = Element::zero();
        for (&ka, xa) in &a.coeffs {
            for (&kb, xb) in &b.coeffs {
                let s = xa * xb;
                for (k, c) in self.mul_basis(ka, kb) {
                    out.add_term(k, &s * c);
                }
            }
        }
        out
    }
}

/// Finitely supported linear combination of basis elements; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element<K: Ord> {
    coeffs: BTreeMap<K, Rat>,
}

impl<K: Ord + Copy> Element<K> {
    pub fn zero() -> Self {
        Element { coeffs: BTreeMap::new() }
    }

    pub fn basis(k: K) -> Self {
        Element::from_terms([(k, Rat::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, Rat)>) -> Self {
        let mut e = Element::zero();
        for (k, x) in terms {
            e.add_term(k, x);
        }
        e
    }

    pub fn add_term(&mut self, k: K, x: Rat) {
        if x.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(Rat::zero);
        *slot += x;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: K) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (K, &Rat)> {
        self.coeffs.iter().map(|(k, x)| (*k, x))
    }

    pub fn support(&self) -> Vec<K> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, x) in other.terms() {
            out.add_term(k, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Element::from_terms(self.terms().map(|(k, x)| (k, s * x)))
    }
}

impl<K: Ord + Copy> Default for Element<K> {
    fn default() -> Self {
        Element::zero()
    }
}

/// Element of `⊕_{n≥1} ℚ`, the finitely supported sequences.
pub type FinSuppSeq = Element<u64>;
/// Element of `ℚ[t, t⁻¹]`, keyed by degree.
pub type LaurentPoly = Element<i64>;

/// `⊕_{n≥1} ℚ` with the pointwise product. Not unital, but every element
/// has neutral elements; it is the union of `A_m = span{δ_1, …, δ_m}` and
/// `1_m = δ_1 + … + δ_m` acts as the identity on `A_m`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SeqAlgebra;

impl Carrier for SeqAlgebra {
    type Key = u64;
    fn mul_basis(&self, a: u64, b: u64) -> Vec<(u64, Rat)> {
        if a == b {
            vec![(a, Rat::one())]
        } else {
            Vec::new()
        }
    }
}

impl SeqAlgebra {
    /// `1_m`, the indicator of `{1, …, m}`.
    pub fn chain_unit(m: u64) -> FinSuppSeq {
        indicator((1..=m).collect::<Vec<_>>())
    }

    /// Smallest index `m` with `f ∈ A_m`.
    pub fn chain_level(f: &FinSuppSeq) -> u64 {
        f.support().last().copied().unwrap_or(0)
    }

    /// The canonical neutral element: the indicator of the support.
    pub fn neutral_for(f: &FinSuppSeq) -> FinSuppSeq {
        indicator(f.support())
    }
}

pub fn indicator(points: impl IntoIterator<Item = u64>) -> FinSuppSeq {
    Element::from_terms(points.into_iter().map(|p| (p, Rat::one())))
}

/// `ℚ[t, t⁻¹]` with unit `t⁰`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LaurentAlgebra;

impl Carrier for LaurentAlgebra {
    type Key = i64;
    fn mul_basis(&self, a: i64, b: i64) -> Vec<(i64, Rat)> {
        vec![(a + b, Rat::one())]
    }
}

pub fn monomial(k: i64) -> LaurentPoly {
    Element::basis(k)
}

/// Formal derivative: the `dt` coefficients of `d(p)`.
pub fn laurent_d(p: &LaurentPoly) -> LaurentPoly {
    Element::from_terms(p.terms().map(|(k, x)| (k - 1, int(k) * x)))
}

/// The residue `res(Σ a_k t^k dt) = a_{-1}`. It realizes `Ω/dA ≅ ℚ` for
/// Laurent polynomials: `d(t^k) = k t^{k-1} dt` never has a `t^{-1}` term.
pub fn residue(one_form: &LaurentPoly) -> Rat {
    one_form.coeff(-1)
}

/// `res(a · d(b))`.
pub fn residue_pairing(a: &LaurentPoly, b: &LaurentPoly) -> Rat {
    residue(&LaurentAlgebra.mul(a, &laurent_d(b)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaurentJson {
    pub coeffs: BTreeMap<String, String>,
}

pub fn laurent_to_json(p: &LaurentPoly) -> LaurentJson {
    LaurentJson { coeffs: p.terms().map(|(k, x)| (k.to_string(), fmt_rat(x))).collect() }
}

pub fn laurent_from_json(j: &LaurentJson) -> Result<LaurentPoly> {
    let mut p = Element::zero();
    for (k, x) in &j.coeffs {
        let k: i64 = k.trim().parse().map_err(|_| Error::Parse(format!("invalid degree {k:?}")))?;
        p.add_term(k, parse_rat(x)?);
    }
    Ok(p)
}

/// Finite-dimensional commutative associative algebra over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommAlgebra {
    dim: usize,
    /// `m[(i*n + j)*n + k]`: coefficient of `e_k` in `e_i · e_j`.
    m: Vec<Rat>,
    unit: Option<Vec<Rat>>,
    name: Option<String>,
}

impl CommAlgebra {
    /// Products `e_i · e_j` for `i ≤ j`; commutativity fills in the rest.
    pub fn from_products(dim: usize, products: &[(usize, usize, Vec<Rat>)], unit: Option<Vec<Rat>>) -> Self {
        let mut m = zero_vec(dim * dim * dim);
        for (i, j, v) in products {
            assert_eq!(v.len(), dim);
            for (k, x) in v.iter().enumerate() {
                m[(i * dim + j) * dim + k] = x.clone();
                m[(j * dim + i) * dim + k] = x.clone();
            }
        }
        CommAlgebra { dim, m, unit, name: None }
    }

    pub fn from_raw_constants(dim: usize, m: Vec<Rat>, unit: Option<Vec<Rat>>) -> Self {
        assert_eq!(m.len(), dim * dim * dim);
        CommAlgebra { dim, m, unit, name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> Option<&[Rat]> {
        self.unit.as_deref()
    }

    pub fn product_basis(&self, i: usize, j: usize) -> &[Rat] {
        let n = self.dim;
        &self.m[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn mul_vec(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    add_scaled(&mut out, &(x * y), self.product_basis(i, j));
                }
            }
        }
        out
    }

    /// Matrix of `b ↦ a · b`.
    pub fn mult_matrix(&self, a: &[Rat]) -> Mat {
        let cols: Vec<Vec<Rat>> = (0..self.dim).map(|j| self.mul_vec(a, &unit_vec(self.dim, j))).collect();
        Mat::from_cols(self.dim, &cols)
    }

    /// Commutativity, associativity and the declared unit law on basis triples.
    pub fn validate_alg(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                if self.product_basis(i, j) != self.product_basis(j, i) {
                    return Err(Error::Violation { kind: "commutativity", i, j, k: 0 });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul_vec(self.product_basis(i, j), &unit_vec(n, k));
                    let right = self.mul_vec(&unit_vec(n, i), self.product_basis(j, k));
                    if left != right {
                        return Err(Error::Violation { kind: "associativity", i, j, k });
                    }
                }
            }
        }
        if let Some(u) = &self.unit {
            if u.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: u.len() });
            }
            for i in 0..n {
                if self.mul_vec(u, &unit_vec(n, i)) != unit_vec(n, i) {
                    return Err(Error::Violation { kind: "unit law", i, j: i, k: i });
                }
            }
        }
        Ok(())
    }

    /// `A₁ = ℚ ⊕ A` with `(λ,a)(μ,b) = (λμ, λb + μa + ab)`; basis `(1,0), (0,e_0), …`.
    pub fn unitalisation(&self) -> CommAlgebra {
        let n = self.dim + 1;
        let mut m = zero_vec(n * n * n);
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        m[idx(0, 0, 0)] = Rat::one();
        for i in 1..n {
            m[idx(0, i, i)] = Rat::one();
            m[idx(i, 0, i)] = Rat::one();
            for j in 1..n {
                for (k, x) in self.product_basis(i - 1, j - 1).iter().enumerate() {
                    m[idx(i, j, k + 1)] = x.clone();
                }
            }
        }
        let mut a = CommAlgebra::from_raw_constants(n, m, Some(unit_vec(n, 0)));
        if let Some(name) = &self.name {
            a.name = Some(format!("({name})_1"));
        }
        a
    }

    /// A `ν` with `ν · f_i = f_i` for all `i`: the declared unit if there is
    /// one, otherwise the canonical particular solution of the linear system.
    pub fn neutral_for_all(&self, fs: &[Vec<Rat>]) -> Result<Vec<Rat>> {
        if let Some(u) = &self.unit {
            return Ok(u.clone());
        }
        let n = self.dim;
        let nonzero: Vec<&Vec<Rat>> = fs.iter().filter(|f| !is_zero_vec(f)).collect();
        if nonzero.is_empty() {
            return Ok(zero_vec(n));
        }
        // ν · f = M_f ν where column k of M_f is e_k · f
        let mut system = Mat::zeros(0, n);
        let mut rhs = Vec::new();
        for f in nonzero {
            system = system.vstack(&self.mult_matrix(f));
            rhs.extend(f.iter().cloned());
        }
        system.solve(&rhs).map_err(|_| Error::NotPseudoUnital(format!("no ν with ν·f = f in {}", self.label())))
    }

    pub fn neutral_for(&self, f: &[Rat]) -> Result<Vec<Rat>> {
        self.neutral_for_all(&[f.to_vec()])
    }

    fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{}-dimensional algebra", self.dim))
    }

    pub fn to_element(v: &[Rat]) -> Element<usize> {
        Element::from_terms(v.iter().cloned().enumerate())
    }

    pub fn from_element(&self, e: &Element<usize>) -> Vec<Rat> {
        let mut v = zero_vec(self.dim);
        for (k, x) in e.terms() {
            v[k] = x.clone();
        }
        v
    }

    pub fn to_json(&self) -> CommAlgebraJson {
        let n = self.dim;
        let mut products = Vec::new();
        for i in 0..n {
            for j in i..n {
                let coeffs: Vec<(JsonIndex, String)> = self
                    .product_basis(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (JsonIndex::Num(k), fmt_rat(x)))
                    .collect();
                if !coeffs.is_empty() {
                    products.push(ProductEntry { i, j, coeffs });
                }
            }
        }
        CommAlgebraJson {
            dim: n,
            name: self.name.clone(),
            products,
            unit: self.unit.as_ref().map(|u| u.iter().map(fmt_rat).collect()),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: CommAlgebraJson = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        CommAlgebra::from_json(&j)
    }

    pub fn from_json(j: &CommAlgebraJson) -> Result<Self> {
        let n = j.dim;
        let mut products = Vec::new();
        for p in &j.products {
            if p.i > p.j || p.j >= n {
                return Err(Error::Parse(format!("product entry ({}, {}) must satisfy i <= j < dim", p.i, p.j)));
            }
            let mut v = zero_vec(n);
            for (k, x) in &p.coeffs {
                let k = k.index()?;
                if k >= n {
                    return Err(Error::Parse(format!("coefficient index {k} out of range")));
                }
                v[k] += parse_rat(x)?;
            }
            products.push((p.i, p.j, v));
        }
        let unit = match &j.unit {
            Some(u) => Some(u.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        let mut a = CommAlgebra::from_products(n, &products, unit);
        a.name = j.name.clone();
        Ok(a)
    }
}

impl Carrier for CommAlgebra {
    type Key = usize;
    fn mul_basis(&self, a: usize, b: usize) -> Vec<(usize, Rat)> {
        self.product_basis(a, b).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommAlgebraJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub products: Vec<ProductEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<(JsonIndex, String)>,
}

/// `ℚ^n` with the pointwise product, basis the point indicators.
pub fn functions_on_points(n: usize) -> CommAlgebra {
    let products: Vec<_> = (0..n).map(|i| (i, i, unit_vec(n, i))).collect();
    CommAlgebra::from_products(n, &products, Some(vec![Rat::one(); n])).with_name(format!("functions_on_points({n})"))
}

/// `ℚ[t]/(tⁿ)` with basis `1, t, …, t^{n-1}`.
pub fn truncated_poly(n: usize) -> CommAlgebra {
    let mut products = Vec::new();
    for i in 0..n {
        for j in i..n {
            if i + j < n {
                products.push((i, j, unit_vec(n, i + j)));
            }
        }
    }
    let unit = (n > 0).then(|| unit_vec(n, 0));
    CommAlgebra::from_products(n, &products, unit).with_name(format!("truncated_poly({n})"))
}

/// `ℚ^n` with the zero product.
pub fn zero_product(n: usize) -> CommAlgebra {
    CommAlgebra::from_products(n, &[], None).with_name(format!("zero_product({n})"))
}

/// `ℚ[x, y]/(x², y²)` with basis `1, x, y, xy`.
pub fn bivariate_truncated() -> CommAlgebra {
    let n = 4;
    let e = |k| unit_vec(n, k);
    CommAlgebra::from_products(
        n,
        &[(0, 0, e(0)), (0, 1, e(1)), (0, 2, e(2)), (0, 3, e(3)), (1, 2, e(3))],
        Some(e(0)),
    )
    .with_name("bivariate_truncated")
}

/// Looks up `functions_on_points(n)`, `truncated_poly(n)`, `zero_product(n)`,
/// `bivariate_truncated` or `Q`.
pub fn calg_catalog(name: &str) -> Result<CommAlgebra> {
    let name = name.trim();
    let arg = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok() };
    if name == "Q" {
        return Ok(functions_on_points(1).with_name("Q"));
    }
    if name == "bivariate_truncated" {
        return Ok(bivariate_truncated());
    }
    if let Some(n) = arg("functions_on_points(").or_else(|| arg("points(")) {
        return Ok(functions_on_points(n));
    }
    if let Some(n) = arg("truncated_poly(") {
        return Ok(truncated_poly(n));
    }
    if let Some(n) = arg("zero_product(") {
        return Ok(zero_product(n));
    }
    Err(Error::UnknownAlgebra(name.to_string()))
}

/// `(λ, ν, μ)` with `μ` neutral for the governed elements, `ν·μ = μ`, `λ·ν = ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeutralTriple<K: Ord> {
    pub lambda: Element<K>,
    pub nu: Element<K>,
    pub mu: Element<K>,
}

impl<K: Ord + Copy> NeutralTriple<K> {
    /// Whether this is a neutral triple for every element of `fs`.
    pub fn is_valid_for<C: Carrier<Key = K>>(&self, c: &C, fs: &[Element<K>]) -> bool {
        fs.iter().all(|f| &c.mul(&self.mu, f) == f)
            && c.mul(&self.nu, &self.mu) == self.mu
            && c.mul(&self.lambda, &self.nu) == self.nu
    }
}

/// Strategy for choosing neutral triples, pluggable so that results can be
/// compared across different choices.
pub trait NeutralChooser<C: Carrier>: Send + Sync {
    fn triple(&self, c: &C, elems: &[Element<C::Key>]) -> Result<NeutralTriple<C::Key>>;
}

/// For [`SeqAlgebra`]: the indicator of the union of the supports, which is
/// idempotent and hence its own neutral element.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinimalSupport;

impl NeutralChooser<SeqAlgebra> for MinimalSupport {
    fn triple(&self, _c: &SeqAlgebra, elems: &[FinSuppSeq]) -> Result<NeutralTriple<u64>> {
        let mut pts: Vec<u64> = elems.iter().flat_map(|e| e.support()).collect();
        pts.sort_unstable();
        pts.dedup();
        let mu = indicator(pts);
        Ok(NeutralTriple { lambda: mu.clone(), nu: mu.clone(), mu })
    }
}

/// For [`SeqAlgebra`]: `(1_{m+2}, 1_{m+1}, 1_m)` where `m` is the chain level
/// of the elements, following the inductive-limit structure.
#[derive(Clone, Copy, Debug, Default)]
pub struct ChainUnits;

impl NeutralChooser<SeqAlgebra> for ChainUnits {
    fn triple(&self, _c: &SeqAlgebra, elems: &[FinSuppSeq]) -> Result<NeutralTriple<u64>> {
        let m = elems.iter().map(SeqAlgebra::chain_level).max().unwrap_or(0);
        Ok(NeutralTriple {
            lambda: SeqAlgebra::chain_unit(m + 2),
            nu: SeqAlgebra::chain_unit(m + 1),
            mu: SeqAlgebra::chain_unit(m),
        })
    }
}

/// For finite-dimensional algebras: the declared unit, or successive
/// canonical linear solves when there is none.
#[derive(Clone, Copy, Debug, Default)]
pub struct CanonicalNeutral;

impl NeutralChooser<CommAlgebra> for CanonicalNeutral {
    fn triple(&self, c: &CommAlgebra, elems: &[Element<usize>]) -> Result<NeutralTriple<usize>> {
        let fs: Vec<Vec<Rat>> = elems.iter().map(|e| c.from_element(e)).collect();
        let mu = c.neutral_for_all(&fs)?;
        let nu = c.neutral_for(&mu)?;
        let lambda = c.neutral_for(&nu)?;
        Ok(NeutralTriple {
            lambda: CommAlgebra::to_element(&lambda),
            nu: CommAlgebra::to_element(&nu),
            mu: CommAlgebra::to_element(&mu),
        })
    }
}

/// For finite-dimensional unital algebras: always the canonical solve of the
/// neutral equations, ignoring the declared unit. Differs from
/// [`CanonicalNeutral`] on algebras where neutral elements are not unique.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolvedNeutral;

impl NeutralChooser<CommAlgebra> for SolvedNeutral {
    fn triple(&self, c: &CommAlgebra, elems: &[Element<usize>]) -> Result<NeutralTriple<usize>> {
        let stripped = CommAlgebra { unit: None, ..c.clone() };
        CanonicalNeutral.triple(&stripped, elems)
    }
}

/// For Laurent polynomials: the unit `t⁰`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LaurentUnit;

impl NeutralChooser<LaurentAlgebra> for LaurentUnit {
    fn triple(&self, _c: &LaurentAlgebra, _elems: &[LaurentPoly]) -> Result<NeutralTriple<i64>> {
        let one = monomial(0);
        Ok(NeutralTriple { lambda: one.clone(), nu: one.clone(), mu: one })
    }
}

/// Neutral triple for a list of elements with the given chooser; the result
/// is checked before it is returned.
pub fn neutral_triple<C: Carrier>(
    c: &C,
    chooser: &dyn NeutralChooser<C>,
    elems: &[Element<C::Key>],
) -> Result<NeutralTriple<C::Key>> {
    let t = chooser.triple(c, elems)?;
    if !t.is_valid_for(c, elems) {
        return Err(Error::NotPseudoUnital("chooser returned an invalid neutral triple".into()));
    }
    Ok(t)
}

/// `Ω(A) = I/I²` for a unital finite-dimensional algebra, where `I` is the
/// kernel of the multiplication `A ⊗ A → A`, with `d(a) = [a⊗1 − 1⊗a]`.
#[derive(Clone, Debug)]
pub struct KaehlerModule {
    algebra: CommAlgebra,
    /// `I ⊆ A ⊗ A`, index `a*n + b` for `e_a ⊗ e_b`.
    ideal: Subspace,
    omega: QuotientSpace,
    /// `dim Ω × n`: column `a` is `d(e_a)`.
    d: Mat,
}

impl KaehlerModule {
    pub fn algebra(&self) -> &CommAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn d_matrix(&self) -> &Mat {
        &self.d
    }

    pub fn d(&self, a: &[Rat]) -> Vec<Rat> {
        self.d.mul_vec(a)
    }

    fn tensor_mul(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let a = &self.algebra;
        let n = a.dim;
        let mut out = zero_vec(n * n);
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            for (q, yq) in y.iter().enumerate() {
                if yq.is_zero() {
                    continue;
                }
                let s = xp * yq;
                let (i, j, k, l) = (p / n, p % n, q / n, q % n);
                let left = a.product_basis(i, k);
                let right = a.product_basis(j, l);
                for (u, lu) in left.iter().enumerate() {
                    if lu.is_zero() {
                        continue;
                    }
                    for (v, rv) in right.iter().enumerate() {
                        if !rv.is_zero() {
                            out[u * n + v] += &s * lu * rv;
                        }
                    }
                }
            }
        }
        out
    }

    /// Class in `Ω` of an element of `I`.
    pub fn class(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        let c = self.ideal.coords(x).ok_or_else(|| Error::Internal("element is not in the multiplication kernel".into()))?;
        Ok(self.omega.project(&c))
    }

    /// `a · ω` for `ω` in `Ω` coordinates.
    pub fn act(&self, a: &[Rat], w: &[Rat]) -> Vec<Rat> {
        let n = self.algebra.dim;
        let rep_coords = self.omega.embed(w);
        let mut rep = zero_vec(n * n);
        for (i, c) in rep_coords.iter().enumerate() {
            add_scaled(&mut rep, c, self.ideal.basis().row(i));
        }
        let mut a_tensor_1 = zero_vec(n * n);
        let unit = self.algebra.unit.as_ref().expect("Kähler module needs a unit");
        for (i, ai) in a.iter().enumerate() {
            for (j, uj) in unit.iter().enumerate() {
                if !ai.is_zero() && !uj.is_zero() {
                    a_tensor_1[i * n + j] += ai * uj;
                }
            }
        }
        self.class(&self.tensor_mul(&a_tensor_1, &rep)).expect("I is an ideal")
    }

    /// `d(e_i e_j) = e_i·d(e_j) + e_j·d(e_i)` on all basis pairs.
    pub fn check_leibniz(&self) -> Result<()> {
        let n = self.algebra.dim;
        for i in 0..n {
            for j in 0..n {
                let lhs = self.d(self.algebra.product_basis(i, j));
                let mut rhs = self.act(&unit_vec(n, i), &self.d.col(j));
                add_scaled(&mut rhs, &Rat::one(), &self.act(&unit_vec(n, j), &self.d.col(i)));
                if lhs != rhs {
                    return Err(Error::LeibnizViolation { i, j });
                }
            }
        }
        Ok(())
    }

    /// `Ω(A) / span{d(e_i)}`.
    pub fn omega_mod_da(&self) -> QuotientSpace {
        let cols: Vec<Vec<Rat>> = (0..self.algebra.dim).map(|a| self.d.col(a)).collect();
        quotient(self.dim(), Subspace::span(self.dim(), cols))
    }

    /// The class of `a · d(b)` in `Ω(A)/dA`.
    pub fn a_db_class(&self, q: &QuotientSpace, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        q.project(&self.act(a, &self.d(b)))
    }

    /// Given an `F`-valued derivation `T` (matrix `dim F × n`) into the
    /// module `F` (action matrices of the basis elements), returns the unique
    /// linear `φ: Ω → F` with `φ ∘ d = T`. `φ` is checked to be `A`-linear.
    pub fn universal_map(&self, t: &Mat, action: &[Mat]) -> Result<Mat> {
        let n = self.algebra.dim;
        let f_dim = t.rows();
        if t.cols() != n || action.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: t.cols() });
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = t.mul_vec(self.algebra.product_basis(i, j));
                let mut rhs = action[i].mul_vec(&t.col(j));
                add_scaled(&mut rhs, &Rat::one(), &action[j].mul_vec(&t.col(i)));
                if lhs != rhs {
                    return Err(Error::LeibnizViolation { i, j });
                }
            }
        }
        // φ(e_i · d e_j) = e_i · T(e_j) for all i, j; these classes span Ω.
        let mut gens = Vec::new();
        let mut targets = Vec::new();
        for (i, act_i) in action.iter().enumerate().take(n) {
            for j in 0..n {
                gens.push(self.act(&unit_vec(n, i), &self.d.col(j)));
                targets.push(act_i.mul_vec(&t.col(j)));
            }
        }
        if !Subspace::span(self.dim(), gens.clone()).is_full() {
            return Err(Error::Internal("a·db does not span the Kähler module".into()));
        }
        let g = Mat::from_rows(self.dim(), gens);
        let mut phi = Mat::zeros(f_dim, self.dim());
        for r in 0..f_dim {
            let rhs: Vec<Rat> = targets.iter().map(|v| v[r].clone()).collect();
            let row = g.solve(&rhs).map_err(|_| Error::Internal("derivation does not factor through d".into()))?;
            for (c, x) in row.into_iter().enumerate() {
                phi[(r, c)] = x;
            }
        }
        for (k, act_k) in action.iter().enumerate().take(n) {
            for s in 0..self.dim() {
                let w = unit_vec(self.dim(), s);
                if phi.mul_vec(&self.act(&unit_vec(n, k), &w)) != act_k.mul_vec(&phi.mul_vec(&w)) {
                    return Err(Error::Internal("factorization is not A-linear".into()));
                }
            }
        }
        Ok(phi)
    }
}

/// Builds `Ω(A) = I/I²` with its differential.
pub fn kaehler(a: &CommAlgebra) -> Result<KaehlerModule> {
    a.validate_alg()?;
    let unit = a.unit.clone().ok_or_else(|| Error::NotPseudoUnital("Kähler module needs a unital algebra".into()))?;
    let n = a.dim;
    let mut mult = Mat::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            for (k, x) in a.product_basis(i, j).iter().enumerate() {
                mult[(k, i * n + j)] = x.clone();
            }
        }
    }
    let ideal = mult.kernel();
    let placeholder = KaehlerModule {
        algebra: a.clone(),
        ideal: ideal.clone(),
        omega: quotient(ideal.dim(), Subspace::zero(ideal.dim())),
        d: Mat::zeros(0, n),
    };
    let basis = ideal.basis_vecs();
    let mut squares = Vec::new();
    for (p, x) in basis.iter().enumerate() {
        for y in &basis[p..] {
            let prod = placeholder.tensor_mul(x, y);
            let c = ideal.coords(&prod).ok_or_else(|| Error::Internal("I² ⊄ I".into()))?;
            squares.push(c);
        }
    }
    let omega = quotient(ideal.dim(), Subspace::span(ideal.dim(), squares));
    let mut k = KaehlerModule { omega, ..placeholder };
    let mut dcols = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = zero_vec(n * n);
        for (j, u) in unit.iter().enumerate() {
            if !u.is_zero() {
                x[i * n + j] += u;
                x[j * n + i] -= u;
            }
        }
        dcols.push(k.class(&x)?);
    }
    k.d = Mat::from_cols(k.dim(), &dcols);
    Ok(k)
}

/// `Ω(A)/d(A)` as a quotient of the Kähler module.
pub fn omega_mod_da(k: &KaehlerModule) -> QuotientSpace {
    k.omega_mod_da()
}

/// Independent presentation of `Ω(A)`: the free `A`-module on `d e_0, …`
/// modulo the Leibniz relations. Returns its dimension.
pub fn kaehler_dim_by_presentation(a: &CommAlgebra) -> usize {
    let n = a.dim;
    let unit = a.unit.clone().expect("unital");
    // coordinates: e_i · d e_j at index i*n + j
    let mut rels = Vec::new();
    let mut push = |v: Vec<Rat>| {
        if !is_zero_vec(&v) {
            rels.push(v)
        }
    };
    let put = |v: &mut Vec<Rat>, coeff_elem: &[Rat], j: usize, s: &Rat| {
        for (i, c) in coeff_elem.iter().enumerate() {
            if !c.is_zero() {
                v[i * n + j] += s * c;
            }
        }
    };
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                // e_k · (d(e_i e_j) - e_i d e_j - e_j d e_i) = 0
                let mut v = zero_vec(n * n);
                for (m, c) in a.product_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        put(&mut v, &unit_vec(n, k), m, c);
                    }
                }
                put(&mut v, a.product_basis(k, i), j, &int(-1));
                put(&mut v, a.product_basis(k, j), i, &int(-1));
                push(v);
            }
        }
        // e_k · d(1) = 0
        let mut v = zero_vec(n * n);
        for (m, c) in unit.iter().enumerate() {
            if !c.is_zero() {
                put(&mut v, &unit_vec(n, k), m, c);
            }
        }
        push(v);
    }
    n * n - Subspace::span(n * n, rels).dim()
}

//! Lie algebra bundles over a finite discrete base with `Aut(g)`-valued
//! transition data, their finitely supported sections, the bundle `V(K)` of
//! fiberwise universal forms, `κ_K`, and the partition-of-unity construction
//! of the map factoring an invariant form through `κ_K`.
//!
//! A transition `τ_{ij,p}` maps chart-`j` coordinates at `p` to chart-`i`
//! coordinates. Sections are stored in the default chart of each point,
//! the lowest cover index containing it.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{add_scaled, fmt_rat, int, is_zero_vec, parse_rat, rat, unit_vec, zero_vec, Mat, Rat, Subspace};
use crate::invforms::{factor_form, induced_map, universal_form, BilinearForm, UniversalForm};
use crate::liealg::{catalog, check_automorphism, LieAlgebra, LieHom, LieJson};

#[derive(Clone, Debug)]
pub struct DiscreteBundle {
    base_size: usize,
    cover: Vec<Vec<usize>>,
    fiber: LieAlgebra,
    transitions: BTreeMap<(usize, usize, usize), Mat>,
    default_chart: Vec<usize>,
}

impl DiscreteBundle {
    /// `transitions` lists `τ_{ij,p}` for `i < j` and every `p ∈ U_i ∩ U_j`;
    /// the reverse directions are the inverses. Validates the cover, every
    /// automorphism and the cocycle condition on triple overlaps.
    pub fn new(
        base_size: usize,
        cover: Vec<Vec<usize>>,
        fiber: LieAlgebra,
        transitions: Vec<((usize, usize, usize), Mat)>,
    ) -> Result<Self> {
        fiber.validate()?;
        let mut cover = cover;
        for u in &mut cover {
            u.sort_unstable();
            u.dedup();
            if let Some(&p) = u.iter().find(|&&p| p >= base_size) {
                return Err(Error::InvalidBundle(format!("point {p} outside the base")));
            }
        }
        let mut default_chart = vec![usize::MAX; base_size];
        for (i, u) in cover.iter().enumerate().rev() {
            for &p in u {
                default_chart[p] = i;
            }
        }
        if let Some(p) = default_chart.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidBundle(format!("point {p} is not covered")));
        }
        let mut map = BTreeMap::new();
        for ((i, j, p), m) in transitions {
            if i >= j || j >= cover.len() {
                return Err(Error::InvalidBundle(format!("transition ({i}, {j}) must satisfy i < j < #cover")));
            }
            if !(cover[i].contains(&p) && cover[j].contains(&p)) {
                return Err(Error::InvalidBundle(format!("point {p} is not in the overlap of charts {i} and {j}")));
            }
            check_automorphism(&fiber, &m)?;
            let inv = m.inverse().expect("automorphisms are invertible");
            map.insert((j, i, p), inv);
            if map.insert((i, j, p), m).is_some() {
                return Err(Error::InvalidBundle(format!("duplicate transition ({i}, {j}) at {p}")));
            }
        }
        for i in 0..cover.len() {
            for j in i + 1..cover.len() {
                for &p in &cover[i] {
                    if cover[j].contains(&p) && !map.contains_key(&(i, j, p)) {
                        return Err(Error::InvalidBundle(format!("missing transition ({i}, {j}) at {p}")));
                    }
                }
            }
        }
        let b = DiscreteBundle { base_size, cover, fiber, transitions: map, default_chart };
        b.check_cocycle()?;
        Ok(b)
    }

    fn check_cocycle(&self) -> Result<()> {
        let k = self.cover.len();
        for p in 0..self.base_size {
            let charts = self.charts_at(p);
            for &i in &charts {
                for &j in &charts {
                    for &l in &charts {
                        if (i, j, l) == (i, i, i) || k < 2 {
                            continue;
                        }
                        if self.transition(i, l, p) != self.transition(i, j, p).mul(&self.transition(j, l, p)) {
                            return Err(Error::InvalidBundle(format!("cocycle condition fails for ({i}, {j}, {l}) at {p}")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base_size(&self) -> usize {
        self.base_size
    }

    pub fn cover(&self) -> &[Vec<usize>] {
        &self.cover
    }

    pub fn fiber(&self) -> &LieAlgebra {
        &self.fiber
    }

    pub fn charts_at(&self, p: usize) -> Vec<usize> {
        (0..self.cover.len()).filter(|&i| self.cover[i].contains(&p)).collect()
    }

    pub fn default_chart(&self, p: usize) -> usize {
        self.default_chart[p]
    }

    /// `τ_{ij,p}`, the identity when `i = j`.
    pub fn transition(&self, i: usize, j: usize, p: usize) -> Mat {
        if i == j {
            return Mat::identity(self.fiber.dim());
        }
        self.transitions[&(i, j, p)].clone()
    }

    /// Sections are pointwise copies of `g` in default-chart coordinates;
    /// basis `δ_p ⊗ e_a` has index `p*n + a`.
    pub fn section_algebra(&self) -> LieAlgebra {
        let n = self.fiber.dim();
        LieAlgebra::from_bracket_fn(self.base_size * n, |s, t| {
            let mut v = zero_vec(self.base_size * n);
            if s / n == t / n {
                let p = s / n;
                for (c, x) in self.fiber.basis_bracket(s % n, t % n).iter().enumerate() {
                    v[p * n + c] = x.clone();
                }
            }
            v
        })
    }

    pub fn to_json(&self) -> BundleJson {
        let fiber = match self.fiber.name() {
            Some(name) if catalog(name).is_ok_and(|g| g == self.fiber) => FiberRef::Name(name.to_string()),
            _ => FiberRef::Inline(self.fiber.to_json()),
        };
        let transitions = self
            .transitions
            .iter()
            .filter(|((i, j, _), _)| i < j)
            .map(|(&(i, j, point), m)| TransitionJson {
                i,
                j,
                point,
                matrix: m.row_vecs().iter().map(|r| r.iter().map(fmt_rat).collect()).collect(),
            })
            .collect();
        BundleJson { base_size: self.base_size, cover: self.cover.clone(), fiber, transitions }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: BundleJson = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        DiscreteBundle::from_json(&j)
    }

    pub fn from_json(j: &BundleJson) -> Result<Self> {
        let fiber = match &j.fiber {
            FiberRef::Name(name) => catalog(name)?,
            FiberRef::Inline(l) => LieAlgebra::from_json(l)?,
        };
        let n = fiber.dim();
        let mut transitions = Vec::new();
        for t in &j.transitions {
            if t.matrix.len() != n || t.matrix.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!("transition ({}, {}) at {} must be {n}×{n}", t.i, t.j, t.point)));
            }
            let rows = t.matrix.iter().map(|r| r.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
            transitions.push(((t.i, t.j, t.point), Mat::from_rows(n, rows)));
        }
        DiscreteBundle::new(j.base_size, j.cover.clone(), fiber, transitions)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleJson {
    pub base_size: usize,
    pub cover: Vec<Vec<usize>>,
    pub fiber: FiberRef,
    pub transitions: Vec<TransitionJson>,
}

/// A catalog name or an inline structure-constant table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiberRef {
    Name(String),
    Inline(LieJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitionJson {
    pub i: usize,
    pub j: usize,
    pub point: usize,
    pub matrix: Vec<Vec<String>>,
}

/// One chart covering `n` points.
pub fn trivial_bundle(g: &LieAlgebra, n: usize) -> Result<DiscreteBundle> {
    DiscreteBundle::new(n, vec![(0..n).collect()], g.clone(), Vec::new())
}

/// `ℤ/n` covered by `U₀ = {0, …, m}` and `U₁ = {m, …, n−1, 0}` with
/// `m = ⌈n/2⌉`; the transition is `σ` at `0` and the identity at `m`.
pub fn make_twisted_bundle(g: &LieAlgebra, n: usize, sigma: &Mat) -> Result<DiscreteBundle> {
    check_automorphism(g, sigma)?;
    if n < 3 {
        return Err(Error::InvalidBundle("a cycle needs at least three points".into()));
    }
    let m = n.div_ceil(2);
    let u0: Vec<usize> = (0..=m).collect();
    let mut u1: Vec<usize> = (m..n).collect();
    u1.push(0);
    DiscreteBundle::new(n, vec![u0, u1], g.clone(), vec![((0, 1, 0), sigma.clone()), ((0, 1, m), Mat::identity(g.dim()))])
}

/// Finitely supported section, values in default-chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Section {
    values: BTreeMap<usize, Vec<Rat>>,
}

impl Section {
    pub fn zero() -> Self {
        Section::default()
    }

    /// `δ_p ⊗ x` with `x` in the default chart at `p`.
    pub fn at(p: usize, x: Vec<Rat>) -> Self {
        let mut s = Section::zero();
        if !is_zero_vec(&x) {
            s.values.insert(p, x);
        }
        s
    }

    /// `δ_p ⊗ x` with `x` given in chart `i`.
    pub fn in_chart(b: &DiscreteBundle, i: usize, p: usize, x: &[Rat]) -> Result<Self> {
        if !b.cover.get(i).is_some_and(|u| u.contains(&p)) {
            return Err(Error::InvalidBundle(format!("point {p} is not in chart {i}")));
        }
        Ok(Section::at(p, b.transition(b.default_chart(p), i, p).mul_vec(x)))
    }

    pub fn value(&self, p: usize, dim: usize) -> Vec<Rat> {
        self.values.get(&p).cloned().unwrap_or_else(|| zero_vec(dim))
    }

    /// The value at `p` in chart `i`.
    pub fn value_in_chart(&self, b: &DiscreteBundle, i: usize, p: usize) -> Vec<Rat> {
        b.transition(i, b.default_chart(p), p).mul_vec(&self.value(p, b.fiber.dim()))
    }

    pub fn support(&self) -> Vec<usize> {
        self.values.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Section) -> Section {
        let mut out = self.clone();
        for (p, v) in &other.values {
            let slot = out.values.entry(*p).or_insert_with(|| zero_vec(v.len()));
            add_scaled(slot, &int(1), v);
            if is_zero_vec(slot) {
                out.values.remove(p);
            }
        }
        out
    }

    /// Pointwise product with a scalar function on the base.
    pub fn times(&self, f: &BTreeMap<usize, Rat>) -> Section {
        let mut out = Section::zero();
        for (p, v) in &self.values {
            if let Some(c) = f.get(p) {
                if !c.is_zero() {
                    out.values.insert(*p, v.iter().map(|x| x * c).collect());
                }
            }
        }
        out
    }

    /// Coordinates in the section algebra, `p*dim + a`.
    pub fn to_vec(&self, base_size: usize, dim: usize) -> Vec<Rat> {
        let mut out = zero_vec(base_size * dim);
        for (p, v) in &self.values {
            out[p * dim..(p + 1) * dim].clone_from_slice(v);
        }
        out
    }

    pub fn from_vec(v: &[Rat], dim: usize) -> Section {
        let mut s = Section::zero();
        for (p, chunk) in v.chunks(dim).enumerate() {
            if !is_zero_vec(chunk) {
                s.values.insert(p, chunk.to_vec());
            }
        }
        s
    }

    fn check(&self, b: &DiscreteBundle, dim: usize) -> Result<()> {
        for (p, v) in &self.values {
            if *p >= b.base_size || v.len() != dim {
                return Err(Error::InvalidBundle(format!("section value at {p} does not fit the bundle")));
            }
        }
        Ok(())
    }
}

/// `[X, Y](p) = [X(p), Y(p)]`, computed in the default chart.
pub fn section_bracket(b: &DiscreteBundle, x: &Section, y: &Section) -> Result<Section> {
    let n = b.fiber.dim();
    x.check(b, n)?;
    y.check(b, n)?;
    let mut out = Section::zero();
    for (p, xv) in &x.values {
        if let Some(yv) = y.values.get(p) {
            out = out.add(&Section::at(*p, b.fiber.br(xv, yv)));
        }
    }
    Ok(out)
}

/// `V(K)`: fibers `V_g` with transitions `(τ_{ij,p})_κ`.
#[derive(Clone, Debug)]
pub struct VBundle {
    universal: UniversalForm,
    transitions: BTreeMap<(usize, usize, usize), Mat>,
}

impl VBundle {
    pub fn new(b: &DiscreteBundle) -> Result<Self> {
        let u = universal_form(&b.fiber);
        let mut transitions = BTreeMap::new();
        for (&key, m) in &b.transitions {
            let hom = LieHom::new(&b.fiber, &b.fiber, m.clone())?;
            transitions.insert(key, induced_map(&hom, &u, &u)?);
        }
        let v = VBundle { universal: u, transitions };
        for p in 0..b.base_size {
            let charts = b.charts_at(p);
            for &i in &charts {
                for &j in &charts {
                    for &l in &charts {
                        if v.transition(i, l, p) != v.transition(i, j, p).mul(&v.transition(j, l, p)) {
                            return Err(Error::Internal(format!("induced cocycle fails at {p}")));
                        }
                    }
                }
            }
        }
        Ok(v)
    }

    pub fn universal(&self) -> &UniversalForm {
        &self.universal
    }

    pub fn dim(&self) -> usize {
        self.universal.dim()
    }

    pub fn transition(&self, i: usize, j: usize, p: usize) -> Mat {
        if i == j {
            return Mat::identity(self.dim());
        }
        self.transitions[&(i, j, p)].clone()
    }
}

/// `κ_K(X, Y)(p) = κ(X(p), Y(p))` in the default chart of `V(K)`.
pub fn kappa_k(b: &DiscreteBundle, v: &VBundle, x: &Section, y: &Section) -> Result<Section> {
    let n = b.fiber.dim();
    x.check(b, n)?;
    y.check(b, n)?;
    let mut out = Section::zero();
    for (p, xv) in &x.values {
        if let Some(yv) = y.values.get(p) {
            out = out.add(&Section::at(*p, v.universal.kappa(xv, yv)));
        }
    }
    Ok(out)
}

/// Whether `κ_K(δ_p⊗e_a, δ_p⊗e_b)` span all `V`-valued sections.
pub fn span_check(b: &DiscreteBundle, v: &VBundle) -> bool {
    span_rank(b, v) == b.base_size * v.dim()
}

fn span_rank(b: &DiscreteBundle, v: &VBundle) -> usize {
    let (n, vd) = (b.fiber.dim(), v.dim());
    let mut gens = Vec::new();
    for p in 0..b.base_size {
        for a in 0..n {
            for c in a..n {
                let img = kappa_k(b, v, &Section::at(p, unit_vec(n, a)), &Section::at(p, unit_vec(n, c))).expect("basis sections fit");
                gens.push(img.to_vec(b.base_size, vd));
            }
        }
    }
    Subspace::span(b.base_size * vd, gens).dim()
}

/// Weights `ρ_i` supported in the cover pieces with `Σ_i ρ_i(p) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfUnity {
    weights: Vec<BTreeMap<usize, Rat>>,
}

impl PartitionOfUnity {
    pub fn new(b: &DiscreteBundle, weights: Vec<BTreeMap<usize, Rat>>) -> Result<Self> {
        if weights.len() != b.cover.len() {
            return Err(Error::InvalidBundle("one weight function per cover piece is required".into()));
        }
        let mut total = vec![Rat::zero(); b.base_size];
        for (i, w) in weights.iter().enumerate() {
            for (p, x) in w {
                if x < &Rat::zero() || !b.cover[i].contains(p) {
                    return Err(Error::InvalidBundle(format!("weight {i} at {p} is negative or outside its chart")));
                }
                total[*p] += x;
            }
        }
        if let Some(p) = total.iter().position(|t| !t.is_one()) {
            return Err(Error::InvalidBundle(format!("weights do not sum to 1 at {p}")));
        }
        let weights = weights.into_iter().map(|w| w.into_iter().filter(|(_, x)| !x.is_zero()).collect()).collect();
        Ok(PartitionOfUnity { weights })
    }

    /// `ρ_i` is the indicator of the points whose default chart is `i`.
    pub fn default_chart(b: &DiscreteBundle) -> Self {
        let mut weights = vec![BTreeMap::new(); b.cover.len()];
        for p in 0..b.base_size {
            weights[b.default_chart(p)].insert(p, Rat::one());
        }
        PartitionOfUnity::new(b, weights).expect("indicator partition is valid")
    }

    /// `ρ_i(p) = 1 / #{charts containing p}`.
    pub fn uniform(b: &DiscreteBundle) -> Self {
        let mut weights = vec![BTreeMap::new(); b.cover.len()];
        for p in 0..b.base_size {
            let charts = b.charts_at(p);
            for &i in &charts {
                weights[i].insert(p, rat(1, charts.len() as i64));
            }
        }
        PartitionOfUnity::new(b, weights).expect("uniform partition is valid")
    }

    pub fn weight(&self, i: usize) -> &BTreeMap<usize, Rat> {
        &self.weights[i]
    }

    /// The cutoff `ζ_i`, the indicator of `supp ρ_i`.
    pub fn cutoff(&self, i: usize) -> BTreeMap<usize, Rat> {
        self.weights[i].keys().map(|&p| (p, Rat::one())).collect()
    }
}

/// Invariance of a form on the section algebra, using that brackets of
/// basis sections vanish unless both sit at the same point.
pub fn check_section_invariant(b: &DiscreteBundle, gamma: &BilinearForm) -> Result<()> {
    let (n, base) = (b.fiber.dim(), b.base_size);
    let dim = n * base;
    let w = gamma.target_dim();
    let sparse: Vec<Vec<(usize, Rat)>> = (0..n * n)
        .map(|ij| b.fiber.basis_bracket(ij / n, ij % n).iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect();
    // γ([e_s, e_t], e_u) with s, t at the same point p
    let lhs = |s: usize, t: usize, u: usize| -> Vec<Rat> {
        let mut out = zero_vec(w);
        if s / n == t / n {
            let p = s / n;
            for (c, x) in &sparse[(s % n) * n + t % n] {
                add_scaled(&mut out, x, gamma.value(p * n + c, u));
            }
        }
        out
    };
    let failure = (0..dim).into_par_iter().find_map_first(|s| {
        for t in 0..dim {
            for u in 0..dim {
                // γ(e_s, [e_t, e_u]) = γ([e_t, e_u], e_s) by symmetry
                if lhs(s, t, u) != lhs(t, u, s) {
                    return Some((s, t, u));
                }
            }
        }
        None
    });
    match failure {
        Some((i, j, k)) => Err(Error::NotInvariant { i, j, k }),
        None => Ok(()),
    }
}

/// The map `β` on `V`-valued sections with `β ∘ κ_K = γ`, as a
/// `w × (base_size · dim V)` matrix in default-chart coordinates.
///
/// For every cover piece `U_i` and `p ∈ supp ρ_i` the local form
/// `γ_{i,p}(x, y) = γ(ψ_i⁻¹(δ_p⊗x), ζ_i·ψ_i⁻¹(δ_p⊗y))` on the chart-`i`
/// fiber is factored as `β_{i,p} ∘ κ_g`, and
/// `β(φ) = Σ_i Σ_p ρ_i(p) β_{i,p}((τ_{i,d(p),p})_κ φ(p))`.
pub fn factor_invariant_form(b: &DiscreteBundle, v: &VBundle, gamma: &BilinearForm, rho: &PartitionOfUnity) -> Result<Mat> {
    let (n, base, vd) = (b.fiber.dim(), b.base_size, v.dim());
    if gamma.base_dim() != n * base {
        return Err(Error::DimensionMismatch { expected: n * base, got: gamma.base_dim() });
    }
    gamma.check_symmetric()?;
    check_section_invariant(b, gamma)?;
    let rank = span_rank(b, v);
    if rank != base * vd {
        return Err(Error::SpanFailure { spanned: rank, total: base * vd });
    }
    let w = gamma.target_dim();
    // κ_K pairs nothing across distinct points
    for s in 0..n * base {
        for t in 0..n * base {
            if s / n != t / n && !is_zero_vec(gamma.value(s, t)) {
                return Err(Error::NoSolution);
            }
        }
    }
    let mut beta = Mat::zeros(w, base * vd);
    for i in 0..b.cover.len() {
        let zeta = rho.cutoff(i);
        for (&p, weight) in rho.weight(i) {
            let section = |x: &[Rat]| Section::in_chart(b, i, p, x).expect("p lies in chart i").to_vec(base, n);
            let local = BilinearForm::from_fn(n, w, |a, c| {
                let x = section(&unit_vec(n, a));
                let y = Section::from_vec(&section(&unit_vec(n, c)), n).times(&zeta).to_vec(base, n);
                gamma.eval(&x, &y)
            });
            let beta_ip = factor_form(&v.universal, &local)?;
            let to_chart = v.transition(i, b.default_chart(p), p);
            let contrib = beta_ip.mul(&to_chart).scale(weight);
            for r in 0..w {
                for s in 0..vd {
                    beta[(r, p * vd + s)] += &contrib[(r, s)];
                }
            }
        }
    }
    verify_factorization(b, v, gamma, &beta)?;
    Ok(beta)
}

/// `β(κ_K(δ_p⊗e_a, δ_q⊗e_c)) = γ(δ_p⊗e_a, δ_q⊗e_c)` for all basis pairs.
pub fn verify_factorization(b: &DiscreteBundle, v: &VBundle, gamma: &BilinearForm, beta: &Mat) -> Result<()> {
    let (n, base, vd) = (b.fiber.dim(), b.base_size, v.dim());
    let dim = n * base;
    let bad = (0..dim).into_par_iter().find_map_first(|s| {
        let x = Section::at(s / n, unit_vec(n, s % n));
        (0..dim).find(|&t| {
            let y = Section::at(t / n, unit_vec(n, t % n));
            let k = kappa_k(b, v, &x, &y).expect("basis sections fit").to_vec(base, vd);
            beta.mul_vec(&k) != gamma.value(s, t)
        })
        .map(|t| (s, t))
    });
    match bad {
        Some((s, t)) => Err(Error::Internal(format!("β∘κ_K differs from γ on basis pair ({s}, {t})"))),
        None => Ok(()),
    }
}

/// `γ(X, Y) = Σ_p c_p · Killing(X(p), Y(p))`, computed from `ad` matrices.
pub fn pointwise_killing_form(b: &DiscreteBundle, coeffs: &[Vec<Rat>]) -> BilinearForm {
    let n = b.fiber.dim();
    let k = b.fiber.killing_form();
    let w = coeffs.first().map_or(0, Vec::len);
    BilinearForm::from_fn(n * b.base_size, w, |s, t| {
        if s / n != t / n {
            return zero_vec(w);
        }
        coeffs[s / n].iter().map(|c| c * &k[(s % n, t % n)]).collect()
    })
}

/// `ψ ∘ κ_K` as a bilinear form on the section algebra.
pub fn form_from_psi(b: &DiscreteBundle, v: &VBundle, psi: &Mat) -> BilinearForm {
    let n = b.fiber.dim();
    BilinearForm::from_fn(n * b.base_size, psi.rows(), |s, t| {
        let x = Section::at(s / n, unit_vec(n, s % n));
        let y = Section::at(t / n, unit_vec(n, t % n));
        psi.mul_vec(&kappa_k(b, v, &x, &y).expect("basis sections fit").to_vec(b.base_size, v.dim()))
    })
}

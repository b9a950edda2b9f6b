//! Universal invariant symmetric bilinear forms.
//!
//! `V_g = S²(g) / span{[x,y]∨z − x∨[y,z]}` and `κ_g(x,y) = [x∨y]`. Every
//! invariant symmetric bilinear form `β` on `g` factors as `β = ψ ∘ κ_g` for a
//! unique linear `ψ`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{add_scaled, quotient, unit_vec, vec_sub, zero_vec, Mat, QuotientSpace, Rat, Subspace};
use crate::liealg::{LieAlgebra, LieHom};

/// Index bookkeeping for `S²(ℚ^n)` with basis `e_i ∨ e_j`, `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymSquare {
    n: usize,
}

impl SymSquare {
    pub fn new(n: usize) -> Self {
        SymSquare { n }
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    /// `(i, j)` with `i ≤ j` for every slot, in slot order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.n {
            for j in i..self.n {
                out.push((i, j));
            }
        }
        out
    }

    /// Coordinates of `x ∨ y`.
    pub fn sym(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    out[self.index(i, j)] += xi * yj;
                }
            }
        }
        out
    }
}

/// A vector-valued bilinear form on `ℚ^n`: `values[i*n + j] = β(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    n: usize,
    target_dim: usize,
    values: Vec<Vec<Rat>>,
}

impl BilinearForm {
    pub fn from_fn(n: usize, target_dim: usize, mut f: impl FnMut(usize, usize) -> Vec<Rat>) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                assert_eq!(v.len(), target_dim);
                values.push(v);
            }
        }
        BilinearForm { n, target_dim, values }
    }

    /// Scalar form with Gram matrix `m`.
    pub fn from_gram(m: &Mat) -> Self {
        BilinearForm::from_fn(m.rows(), 1, |i, j| vec![m[(i, j)].clone()])
    }

    pub fn zero(n: usize, target_dim: usize) -> Self {
        BilinearForm::from_fn(n, target_dim, |_, _| zero_vec(target_dim))
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn value(&self, i: usize, j: usize) -> &[Rat] {
        &self.values[i * self.n + j]
    }

    pub fn eval(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.target_dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    add_scaled(&mut out, &(xi * yj), self.value(i, j));
                }
            }
        }
        out
    }

    pub fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.value(i, j) != self.value(j, i) {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    /// `θ ∘ β` for a linear map `θ` given as a matrix.
    pub fn compose(&self, theta: &Mat) -> BilinearForm {
        BilinearForm::from_fn(self.n, theta.rows(), |i, j| theta.mul_vec(self.value(i, j)))
    }

    /// Scalar combination `Σ c_k β_k` of scalar forms into a vector-valued form.
    pub fn stack(forms: &[BilinearForm], coeffs: &Mat) -> BilinearForm {
        let n = forms[0].n;
        BilinearForm::from_fn(n, coeffs.rows(), |i, j| {
            let col: Vec<Rat> = forms.iter().map(|f| f.value(i, j)[0].clone()).collect();
            coeffs.mul_vec(&col)
        })
    }
}

fn invariance_defect(l: &LieAlgebra, beta: &BilinearForm, i: usize, j: usize, k: usize) -> Vec<Rat> {
    let n = l.dim();
    let lhs = beta.eval(l.basis_bracket(i, j), &unit_vec(n, k));
    let rhs = beta.eval(&unit_vec(n, i), l.basis_bracket(j, k));
    vec_sub(&lhs, &rhs)
}

pub fn check_invariant(l: &LieAlgebra, beta: &BilinearForm) -> Result<()> {
    let n = l.dim();
    if beta.base_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: beta.base_dim() });
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if invariance_defect(l, beta, i, j, k).iter().any(|x| !x.is_zero()) {
                    return Err(Error::NotInvariant { i, j, k });
                }
            }
        }
    }
    Ok(())
}

/// `β([x,y],z) = β(x,[y,z])` on all basis triples.
pub fn is_invariant(l: &LieAlgebra, beta: &BilinearForm) -> bool {
    check_invariant(l, beta).is_ok()
}

/// Basis of the scalar invariant symmetric bilinear forms on `l`.
/// `β(f(x), y) = β(x, f(y))` for `f` in a basis of the centroid, `x` in a
/// basis of `[g, g]` and `y` a basis vector.
pub fn check_centroid_compatibility(l: &LieAlgebra, beta: &BilinearForm) -> Result<()> {
    let n = l.dim();
    let derived = l.derived_subalgebra().basis_vecs();
    for (fi, flat) in l.centroid().basis_vecs().into_iter().enumerate() {
        let f = Mat::from_flat(n, n, flat);
        for (xi, x) in derived.iter().enumerate() {
            let fx = f.mul_vec(x);
            for y in 0..n {
                let e = unit_vec(n, y);
                if beta.eval(&fx, &e) != beta.eval(x, &f.mul_vec(&e)) {
                    return Err(Error::Violation { kind: "centroid compatibility", i: fi, j: xi, k: y });
                }
            }
        }
    }
    Ok(())
}

pub fn invariant_forms(l: &LieAlgebra) -> Vec<BilinearForm> {
    let n = l.dim();
    let s = SymSquare::new(n);
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = zero_vec(s.dim());
                for m in 0..n {
                    row[s.index(m, k)] += l.constant(i, j, m);
                    row[s.index(i, m)] -= l.constant(j, k, m);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let solutions = if rows.is_empty() { Subspace::full(s.dim()) } else { Mat::from_rows(s.dim(), rows).kernel() };
    solutions
        .basis_vecs()
        .into_iter()
        .map(|b| BilinearForm::from_fn(n, 1, |i, j| vec![b[s.index(i, j)].clone()]))
        .collect()
}

/// `(V_g, κ_g)` for a finite-dimensional Lie algebra.
#[derive(Clone, Debug)]
pub struct UniversalForm {
    algebra: LieAlgebra,
    sym: SymSquare,
    relations: Subspace,
    v: QuotientSpace,
    /// `κ(e_i, e_j)` for all basis pairs, row-major.
    table: Vec<Vec<Rat>>,
}

impl UniversalForm {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn sym(&self) -> &SymSquare {
        &self.sym
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn quotient(&self) -> &QuotientSpace {
        &self.v
    }

    /// `dim V_g`.
    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn kappa_basis(&self, i: usize, j: usize) -> &[Rat] {
        &self.table[i * self.algebra.dim() + j]
    }

    pub fn kappa(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    add_scaled(&mut out, &(xi * yj), self.kappa_basis(i, j));
                }
            }
        }
        out
    }

    /// `κ_g` as a `V_g`-valued bilinear form.
    pub fn as_form(&self) -> BilinearForm {
        let n = self.algebra.dim();
        BilinearForm::from_fn(n, self.dim(), |i, j| self.kappa_basis(i, j).to_vec())
    }

    /// Whether `{κ(e_i, e_j)}` spans `V_g`; this is what makes factorizations unique.
    pub fn image_spans(&self) -> bool {
        Subspace::span(self.dim(), self.table.clone()).is_full()
    }

    /// Matrix with one row `κ(e_i, e_j)` per slot `i ≤ j`.
    fn pair_matrix(&self) -> Mat {
        Mat::from_rows(self.dim(), self.sym.pairs().into_iter().map(|(i, j)| self.kappa_basis(i, j).to_vec()).collect())
    }
}

pub fn universal_form(l: &LieAlgebra) -> UniversalForm {
    let n = l.dim();
    let sym = SymSquare::new(n);
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = sym.sym(l.basis_bracket(i, j), &unit_vec(n, k));
                let b = sym.sym(&unit_vec(n, i), l.basis_bracket(j, k));
                let r = vec_sub(&a, &b);
                if r.iter().any(|x| !x.is_zero()) {
                    gens.push(r);
                }
            }
        }
    }
    let relations = Subspace::span(sym.dim(), gens);
    let v = quotient(sym.dim(), relations.clone());
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(v.project(&unit_vec(sym.dim(), sym.index(i, j))));
        }
    }
    UniversalForm { algebra: l.clone(), sym, relations, v, table }
}

/// The unique `ψ: V_g → W` with `ψ ∘ κ_g = β`, as a `target_dim × dim V_g` matrix.
pub fn factor_form(u: &UniversalForm, beta: &BilinearForm) -> Result<Mat> {
    beta.check_symmetric()?;
    check_invariant(&u.algebra, beta)?;
    let k = u.pair_matrix();
    let pairs = u.sym.pairs();
    let mut psi = Mat::zeros(beta.target_dim(), u.dim());
    for t in 0..beta.target_dim() {
        let rhs: Vec<Rat> = pairs.iter().map(|&(i, j)| beta.value(i, j)[t].clone()).collect();
        let row = k.solve(&rhs).map_err(|_| Error::Internal("invariant form does not factor through kappa".into()))?;
        for (c, x) in row.into_iter().enumerate() {
            psi[(t, c)] = x;
        }
    }
    Ok(psi)
}

/// The unique `f_κ: V_h → V_g` with `f_κ(κ_h(x,y)) = κ_g(f x, f y)`.
pub fn induced_map(f: &LieHom, uh: &UniversalForm, ug: &UniversalForm) -> Result<Mat> {
    let m = f.matrix();
    let pairs = uh.sym.pairs();
    let k = uh.pair_matrix();
    let images: Vec<Vec<Rat>> = pairs.iter().map(|&(i, j)| ug.kappa(&m.col(i), &m.col(j))).collect();
    let mut out = Mat::zeros(ug.dim(), uh.dim());
    for t in 0..ug.dim() {
        let rhs: Vec<Rat> = images.iter().map(|v| v[t].clone()).collect();
        let row = k.solve(&rhs).map_err(|_| Error::Internal("induced map system is inconsistent".into()))?;
        for (c, x) in row.into_iter().enumerate() {
            out[(t, c)] = x;
        }
    }
    Ok(out)
}

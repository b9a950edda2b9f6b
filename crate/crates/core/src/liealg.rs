//! Finite-dimensional Lie algebras over ℚ given by structure constants.
//!
//! Basis conventions of the catalog:
//!
//! * `sl2`: `(e, f, h)` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
//! * `sl3`: `E12, E13, E21, E23, E31, E32, E11-E22, E22-E33`.
//! * `so3`: `(x, y, z)` with `[x,y] = z`, `[y,z] = x`, `[z,x] = y`.
//! * `heisenberg3`: `(x, y, z)` with `[x,y] = z` and `z` central.
//! * `abelian(n)`: all constants zero.
//! * `sl2_plus_sl2`: two commuting copies of `sl2`, basis `(e,f,h,e',f',h')`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{add_scaled, fmt_rat, int, is_zero_vec, parse_rat, unit_vec, zero_vec, Mat, Rat, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    /// `c[(i*n + j)*n + k]`: coefficient of `e_k` in `[e_i, e_j]`.
    c: Vec<Rat>,
    name: Option<String>,
}

impl LieAlgebra {
    /// Builds an algebra from `(i, j, [e_i, e_j])` for `i < j`; the remaining
    /// brackets follow by antisymmetry.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vec<Rat>)]) -> Self {
        let mut c = zero_vec(dim * dim * dim);
        for (i, j, v) in brackets {
            assert_eq!(v.len(), dim);
            for (k, x) in v.iter().enumerate() {
                c[(i * dim + j) * dim + k] = x.clone();
                c[(j * dim + i) * dim + k] = -x.clone();
            }
        }
        LieAlgebra { dim, c, name: None }
    }

    /// Raw constants, no antisymmetry is imposed. Use [`LieAlgebra::validate`].
    pub fn from_raw_constants(dim: usize, c: Vec<Rat>) -> Self {
        assert_eq!(c.len(), dim * dim * dim);
        LieAlgebra { dim, c, name: None }
    }

    /// Builds a bracket table from a closure over basis pairs.
    pub fn from_bracket_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vec<Rat>) -> Self {
        let mut c = zero_vec(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                assert_eq!(v.len(), dim);
                for (k, x) in v.into_iter().enumerate() {
                    c[(i * dim + j) * dim + k] = x;
                }
            }
        }
        LieAlgebra { dim, c, name: None }
    }

    /// The Lie algebra spanned by square matrices under the commutator.
    /// The span must be closed under the commutator.
    pub fn from_matrix_basis(basis: &[Mat]) -> Result<Self> {
        let n = basis.len();
        let size = basis.first().map_or(0, |b| b.rows() * b.cols());
        let coords = Mat::from_cols(size, &basis.iter().map(Mat::flatten).collect::<Vec<_>>());
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let comm = basis[i].mul(&basis[j]).sub(&basis[j].mul(&basis[i]));
                let v = coords
                    .solve(&comm.flatten())
                    .map_err(|_| Error::Internal("matrix basis is not closed under the commutator".into()))?;
                brackets.push((i, j, v));
            }
        }
        Ok(LieAlgebra::from_brackets(n, &brackets))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coefficient vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Rat] {
        let n = self.dim;
        &self.c[(i * n + j) * n..(i * n + j + 1) * n]
    }

    /// Bracket of coefficient vectors. Panics on length mismatch.
    pub fn br(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert!(x.len() == self.dim && y.len() == self.dim, "dimension mismatch in bracket");
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                add_scaled(&mut out, &(xi * yj), self.basis_bracket(i, j));
            }
        }
        out
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        Ok(self.br(x, y))
    }

    /// Checks antisymmetry, then the Jacobi identity on basis triples.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if self.constant(i, j, k) != &-self.constant(j, i, k).clone() {
                        return Err(Error::Violation { kind: "antisymmetry", i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !is_zero_vec(&self.jacobiator(i, j, k)) {
                        return Err(Error::Violation { kind: "Jacobi identity", i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> Vec<Rat> {
        let n = self.dim;
        let e = |a| unit_vec(n, a);
        let mut s = self.br(self.basis_bracket(i, j), &e(k));
        add_scaled(&mut s, &Rat::one(), &self.br(self.basis_bracket(j, k), &e(i)));
        add_scaled(&mut s, &Rat::one(), &self.br(self.basis_bracket(k, i), &e(j)));
        s
    }

    /// Matrix of `ad(e_i)`: column `j` is `[e_i, e_j]`.
    pub fn ad(&self, i: usize) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.constant(i, j, k).clone();
            }
        }
        m
    }

    pub fn ad_of(&self, x: &[Rat]) -> Mat {
        let n = self.dim;
        let mut m = Mat::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                m = m.add(&self.ad(i).scale(xi));
            }
        }
        m
    }

    /// `K[i][j] = tr(ad e_i ∘ ad e_j)`.
    pub fn killing_form(&self) -> Mat {
        let n = self.dim;
        let ads: Vec<Mat> = (0..n).map(|i| self.ad(i)).collect();
        let mut k = Mat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).trace();
                k[(i, j)] = t.clone();
                k[(j, i)] = t;
            }
        }
        k
    }

    pub fn derived_subalgebra(&self) -> Subspace {
        let n = self.dim;
        let mut vs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                vs.push(self.basis_bracket(i, j).to_vec());
            }
        }
        Subspace::span(n, vs)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subalgebra().is_full()
    }

    /// Cartan's criterion: the Killing form is nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        self.killing_form().is_invertible()
    }

    /// Linear maps `f` with `f([x,y]) = [f(x),y]`, as a subspace of the
    /// row-major flattened `n × n` matrices.
    pub fn centroid(&self) -> Subspace {
        let n = self.dim;
        let idx = |r: usize, c: usize| r * n + c;
        let mut rows = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for r in 0..n {
                    let mut row = zero_vec(n * n);
                    for k in 0..n {
                        row[idx(r, k)] += self.constant(i, j, k);
                    }
                    for m in 0..n {
                        row[idx(m, i)] -= self.constant(m, j, r);
                    }
                    if !is_zero_vec(&row) {
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            return Subspace::full(n * n);
        }
        Mat::from_rows(n * n, rows).kernel()
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (a, b) = (self.dim, other.dim);
        let n = a + b;
        LieAlgebra::from_bracket_fn(n, |i, j| {
            let mut v = zero_vec(n);
            if i < a && j < a {
                v[..a].clone_from_slice(self.basis_bracket(i, j));
            } else if i >= a && j >= a {
                v[a..].clone_from_slice(other.basis_bracket(i - a, j - a));
            }
            v
        })
    }

    /// Whether the square matrix `f` (codomain × domain) preserves brackets.
    pub fn is_hom(domain: &LieAlgebra, codomain: &LieAlgebra, f: &Mat) -> bool {
        first_hom_failure(domain, codomain, f).is_none()
    }

    pub fn to_json(&self) -> LieJson {
        let n = self.dim;
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: Vec<(JsonIndex, String)> = self
                    .basis_bracket(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (JsonIndex::Num(k), fmt_rat(x)))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketEntry { i, j, coeffs });
                }
            }
        }
        LieJson { dim: n, name: self.name.clone(), brackets }
    }

    /// Parses the structure-constant JSON format. The result is not validated.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: LieJson = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
        LieAlgebra::from_json(&j)
    }

    pub fn from_json(j: &LieJson) -> Result<Self> {
        let n = j.dim;
        let mut brackets = Vec::new();
        for b in &j.brackets {
            if b.i >= b.j || b.j >= n {
                return Err(Error::Parse(format!("bracket entry ({}, {}) must satisfy i < j < dim", b.i, b.j)));
            }
            let mut v = zero_vec(n);
            for (k, x) in &b.coeffs {
                let k = k.index()?;
                if k >= n {
                    return Err(Error::Parse(format!("coefficient index {k} out of range")));
                }
                v[k] += parse_rat(x)?;
            }
            brackets.push((b.i, b.j, v));
        }
        let mut l = LieAlgebra::from_brackets(n, &brackets);
        l.name = j.name.clone();
        Ok(l)
    }
}

pub(crate) fn first_hom_failure(domain: &LieAlgebra, codomain: &LieAlgebra, f: &Mat) -> Option<(usize, usize)> {
    if f.rows() != codomain.dim() || f.cols() != domain.dim() {
        return Some((usize::MAX, usize::MAX));
    }
    let images: Vec<Vec<Rat>> = (0..domain.dim()).map(|i| f.col(i)).collect();
    for i in 0..domain.dim() {
        for j in i + 1..domain.dim() {
            let lhs = f.mul_vec(domain.basis_bracket(i, j));
            let rhs = codomain.br(&images[i], &images[j]);
            if lhs != rhs {
                return Some((i, j));
            }
        }
    }
    None
}

/// A bracket-preserving linear map `domain → codomain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieHom {
    matrix: Mat,
}

impl LieHom {
    pub fn new(domain: &LieAlgebra, codomain: &LieAlgebra, matrix: Mat) -> Result<Self> {
        match first_hom_failure(domain, codomain, &matrix) {
            None => Ok(LieHom { matrix }),
            Some((i, _)) if i == usize::MAX => {
                Err(Error::DimensionMismatch { expected: codomain.dim() * domain.dim(), got: matrix.rows() * matrix.cols() })
            }
            Some((i, j)) => Err(Error::InvalidAutomorphism(format!("bracket not preserved on basis pair ({i}, {j})"))),
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn compose(&self, first: &LieHom) -> LieHom {
        LieHom { matrix: self.matrix.mul(&first.matrix) }
    }
}

/// Checks that `sigma` is an invertible bracket-preserving endomorphism.
pub fn check_automorphism(g: &LieAlgebra, sigma: &Mat) -> Result<()> {
    if !sigma.is_invertible() {
        return Err(Error::InvalidAutomorphism("matrix is not invertible".into()));
    }
    LieHom::new(g, g, sigma.clone()).map(|_| ())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<(JsonIndex, String)>,
}

/// Basis index written either as a number or a decimal string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonIndex {
    Num(usize),
    Text(String),
}

impl JsonIndex {
    pub fn index(&self) -> Result<usize> {
        match self {
            JsonIndex::Num(k) => Ok(*k),
            JsonIndex::Text(s) => s.trim().parse().map_err(|_| Error::Parse(format!("invalid basis index {s:?}"))),
        }
    }
}

fn elementary(n: usize, r: usize, c: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(r, c)] = Rat::one();
    m
}

/// The matrices underlying the `sl3` basis, in catalog order.
pub fn sl3_matrix_basis() -> Vec<Mat> {
    let e = |r, c| elementary(3, r, c);
    vec![
        e(0, 1),
        e(0, 2),
        e(1, 0),
        e(1, 2),
        e(2, 0),
        e(2, 1),
        e(0, 0).sub(&e(1, 1)),
        e(1, 1).sub(&e(2, 2)),
    ]
}

pub fn sl2() -> LieAlgebra {
    // e, f, h
    LieAlgebra::from_brackets(
        3,
        &[
            (0, 1, vec![int(0), int(0), int(1)]),
            (0, 2, vec![int(-2), int(0), int(0)]),
            (1, 2, vec![int(0), int(2), int(0)]),
        ],
    )
    .with_name("sl2")
}

pub fn sl3() -> LieAlgebra {
    LieAlgebra::from_matrix_basis(&sl3_matrix_basis()).expect("sl3 basis is closed").with_name("sl3")
}

pub fn so3() -> LieAlgebra {
    LieAlgebra::from_brackets(
        3,
        &[
            (0, 1, vec![int(0), int(0), int(1)]),
            (1, 2, vec![int(1), int(0), int(0)]),
            (0, 2, vec![int(0), int(-1), int(0)]),
        ],
    )
    .with_name("so3")
}

pub fn heisenberg3() -> LieAlgebra {
    LieAlgebra::from_brackets(3, &[(0, 1, vec![int(0), int(0), int(1)])]).with_name("heisenberg3")
}

pub fn abelian(n: usize) -> LieAlgebra {
    LieAlgebra::from_brackets(n, &[]).with_name(format!("abelian({n})"))
}

pub fn sl2_plus_sl2() -> LieAlgebra {
    sl2().direct_sum(&sl2()).with_name("sl2_plus_sl2")
}

/// Looks up a named algebra of the catalog.
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let name = name.trim();
    match name {
        "sl2" => Ok(sl2()),
        "sl3" => Ok(sl3()),
        "so3" => Ok(so3()),
        "heisenberg3" => Ok(heisenberg3()),
        "sl2_plus_sl2" | "sl2+sl2" => Ok(sl2_plus_sl2()),
        _ => {
            if let Some(n) = name.strip_prefix("abelian(").and_then(|r| r.strip_suffix(')')) {
                let n: usize = n.trim().parse().map_err(|_| Error::UnknownAlgebra(name.to_string()))?;
                Ok(abelian(n))
            } else {
                Err(Error::UnknownAlgebra(name.to_string()))
            }
        }
    }
}

pub const CATALOG_NAMES: [&str; 6] = ["sl2", "sl3", "so3", "heisenberg3", "abelian(3)", "sl2_plus_sl2"];

/// `exp(ad e)` for `sl2`, an inner automorphism with rational entries.
pub fn sl2_exp_ad_e() -> Mat {
    sl2().ad(0).exp_nilpotent().expect("ad e is nilpotent")
}

/// `X ↦ -Xᵀ` on `sl3` in the catalog basis, an outer automorphism.
pub fn sl3_negative_transpose() -> Mat {
    let basis = sl3_matrix_basis();
    let coords = Mat::from_cols(9, &basis.iter().map(Mat::flatten).collect::<Vec<_>>());
    let cols: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| coords.solve(&b.transpose().scale(&int(-1)).flatten()).expect("-Xᵀ stays traceless"))
        .collect();
    Mat::from_cols(8, &cols)
}

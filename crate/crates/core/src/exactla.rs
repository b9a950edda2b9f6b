//! Exact linear algebra over the rationals.
//!
//! Everything here is dense and row-major. Subspaces are kept in canonical
//! reduced row-echelon form, so two subspaces are equal exactly when their
//! stored bases are equal.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational number. `BigRational` keeps itself reduced
/// with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn zero_vec(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = zero_vec(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_scaled(acc: &mut [Rat], s: &Rat, v: &[Rat]) {
    debug_assert_eq!(acc.len(), v.len());
    if s.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += s * b;
        }
    }
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(s: &Rat, v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| s * x).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: zero_vec(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<Rat>]) -> Self {
        let mut m = Mat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &other.data) }
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: vec_scale(s, &self.data) }
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Row-major entries, e.g. to embed an n x n matrix into an n^2 space.
    pub fn flatten(&self) -> Vec<Rat> {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Rat>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = &self[(r, c)];
                if a.is_zero() {
                    continue;
                }
                for rr in 0..other.rows {
                    for cc in 0..other.cols {
                        let b = &other[(rr, cc)];
                        if !b.is_zero() {
                            out[(r * other.rows + rr, c * other.cols + cc)] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Canonical reduced row-echelon form together with the pivot columns.
    /// Zero rows are kept at the bottom, so the shape is unchanged.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..cols {
                if !self[(r, j)].is_zero() {
                    let v = &self[(r, j)] * &inv;
                    self[(r, j)] = v;
                }
            }
            let pivot_row: Vec<Rat> = self.row(r).to_vec();
            for i in 0..rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..cols {
                    if !pivot_row[j].is_zero() {
                        let v = &f * &pivot_row[j];
                        self[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space `{x : self · x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = unit_vec(self.cols, f);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect();
        Subspace::span(self.cols, basis)
    }

    /// Column space as a subspace of the row-count dimensional space.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, self.transpose().row_vecs())
    }

    /// One particular solution of `self · x = b` with all free variables 0.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Err(Error::NoSolution);
        }
        let mut x = zero_vec(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug[(i, self.cols)].clone();
        }
        Ok(x)
    }

    /// A vector `y` with `yᵀ·self = 0` and `yᵀ·b ≠ 0`, proving that
    /// `self · x = b` is inconsistent. `None` if the system is solvable.
    pub fn inconsistency_witness(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let left_null = self.transpose().kernel();
        left_null.basis_vecs().into_iter().find(|y| !dot(y, b).is_zero())
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let v = &f * &m[(c, j)];
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rat::one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = aug[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    /// `exp(self)` for a nilpotent matrix; `None` if not nilpotent.
    pub fn exp_nilpotent(&self) -> Option<Mat> {
        let n = self.rows;
        let mut term = Mat::identity(n);
        let mut sum = Mat::identity(n);
        for k in 1..=n {
            term = term.mul(self).scale(&int(k as i64).recip());
            sum = sum.add(&term);
        }
        term.mul(self).is_zero().then_some(sum)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

/// A linear subspace of `ℚ^ambient_dim`, stored by its RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rat>>) -> Self {
        let m = Mat::from_rows(ambient_dim, vectors);
        let (r, pivots) = m.rref();
        let basis = Mat::from_rows(ambient_dim, (0..pivots.len()).map(|i| r.row(i).to_vec()).collect());
        Subspace { ambient_dim, basis, pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace::span(ambient_dim, Vec::new())
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::span(ambient_dim, (0..ambient_dim).map(|i| unit_vec(ambient_dim, i)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vecs(&self) -> Vec<Vec<Rat>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is not in the subspace.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let c: Vec<Rat> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = zero_vec(self.ambient_dim);
        for (i, x) in c.iter().enumerate() {
            add_scaled(&mut rebuilt, x, self.basis.row(i));
        }
        (rebuilt.as_slice() == v).then_some(c)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vecs().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis_vecs();
        vs.extend(other.basis_vecs());
        Subspace::span(self.ambient_dim, vs)
    }
}

/// `ℚ^ambient_dim / denominator`, with coset representatives given by the
/// unit vectors at the non-pivot columns of the denominator's RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    ambient_dim: usize,
    denominator: Subspace,
    free: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(ambient_dim: usize, denominator: Subspace) -> Self {
        assert_eq!(denominator.ambient_dim(), ambient_dim, "ambient dimension mismatch");
        let free = (0..ambient_dim).filter(|c| !denominator.pivots.contains(c)).collect();
        QuotientSpace { ambient_dim, denominator, free }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denominator
    }

    /// Coset representatives, one per row.
    pub fn section_basis(&self) -> Mat {
        Mat::from_rows(
            self.ambient_dim,
            self.free.iter().map(|&f| unit_vec(self.ambient_dim, f)).collect(),
        )
    }

    /// Quotient coordinates of an ambient vector.
    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient_dim);
        let mut r = v.to_vec();
        for (i, &p) in self.denominator.pivots.iter().enumerate() {
            let f = r[p].clone();
            if !f.is_zero() {
                add_scaled(&mut r, &-f, self.denominator.basis.row(i));
            }
        }
        self.free.iter().map(|&f| r[f].clone()).collect()
    }

    /// The projection as a `dim × ambient_dim` matrix.
    pub fn projection_matrix(&self) -> Mat {
        let cols: Vec<Vec<Rat>> =
            (0..self.ambient_dim).map(|i| self.project(&unit_vec(self.ambient_dim, i))).collect();
        Mat::from_cols(self.dim(), &cols)
    }

    /// The coset representative for quotient coordinates `q`.
    pub fn embed(&self, q: &[Rat]) -> Vec<Rat> {
        assert_eq!(q.len(), self.dim());
        let mut v = zero_vec(self.ambient_dim);
        for (x, &f) in q.iter().zip(&self.free) {
            v[f] = x.clone();
        }
        v
    }
}

/// Quotient of `ℚ^ambient_dim` by `w`.
pub fn quotient(ambient_dim: usize, w: Subspace) -> QuotientSpace {
    QuotientSpace::new(ambient_dim, w)
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat {
        Mat::from_i64(rows)
    }

    #[test]
    fn rref_examples() {
        let (r, p) = m(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);

        let (r, p) = Mat::identity(3).rref();
        assert_eq!(r, Mat::identity(3));
        assert_eq!(p, vec![0, 1, 2]);

        let (r, p) = Mat::zeros(2, 2).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn kernel_examples() {
        let k = m(&[&[1, 1]]).kernel();
        assert_eq!(k, Subspace::span(2, vec![vec![int(1), int(-1)]]));
        assert_eq!(Mat::identity(2).kernel().dim(), 0);
        assert!(Mat::zeros(2, 3).kernel().is_full());
    }

    #[test]
    fn solve_examples() {
        assert_eq!(Mat::identity(2).solve(&[int(3), int(5)]).unwrap(), vec![int(3), int(5)]);
        assert_eq!(m(&[&[1, 1]]).solve(&[int(2)]).unwrap(), vec![int(2), int(0)]);
        let inconsistent = m(&[&[1], &[1]]);
        assert!(matches!(inconsistent.solve(&[int(0), int(1)]), Err(Error::NoSolution)));
        let y = inconsistent.inconsistency_witness(&[int(0), int(1)]).unwrap();
        assert!(is_zero_vec(&inconsistent.transpose().mul_vec(&y)));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(2, Subspace::span(2, vec![vec![int(1), int(0)]]));
        assert_eq!(q.dim(), 1);
        assert_eq!(q.project(&[int(7), int(3)]), vec![int(3)]);

        let q = quotient(3, Subspace::zero(3));
        assert_eq!(q.projection_matrix(), Mat::identity(3));

        assert_eq!(quotient(3, Subspace::full(3)).dim(), 0);
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(fmt_rat(&rat(-3, 2)), "-3/2");
        assert_eq!(fmt_rat(&int(5)), "5");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(), int(1));
        assert_eq!(a.mul(&a.inverse().unwrap()), Mat::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    fn small_mat() -> impl Strategy<Value = Mat> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(-3i64..4, r * c)
                .prop_map(move |v| Mat::from_flat(r, c, v.into_iter().map(int).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_mat()) {
            prop_assert_eq!(a.rank() + a.kernel().dim(), a.cols());
        }

        #[test]
        fn rref_idempotent(a in small_mat()) {
            let once = a.rref().0;
            prop_assert_eq!(once.rref().0, once);
        }

        #[test]
        fn solve_is_exact(a in small_mat(), seed in prop::collection::vec(-3i64..4, 4)) {
            let x0: Vec<Rat> = (0..a.cols()).map(|i| int(seed[i % seed.len()])).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).unwrap();
            prop_assert_eq!(a.mul_vec(&x), b);
        }

        #[test]
        fn projection_kills_denominator(a in small_mat(), v in prop::collection::vec(-3i64..4, 4)) {
            let w = Subspace::span(a.cols(), a.row_vecs());
            let q = quotient(a.cols(), w.clone());
            let v: Vec<Rat> = (0..a.cols()).map(|i| int(v[i])).collect();
            for b in w.basis_vecs() {
                prop_assert_eq!(q.project(&vec_add(&v, &b)), q.project(&v));
                prop_assert!(is_zero_vec(&q.project(&b)));
            }
            let s = q.section_basis();
            for i in 0..q.dim() {
                prop_assert_eq!(q.project(s.row(i)), unit_vec(q.dim(), i));
            }
        }
    }
}

//! Current algebras `A ⊗ g` with `[a⊗x, b⊗y] = ab ⊗ [x,y]`, the action
//! `δ_y(c⊗x) = c ⊗ [y,x]` of `g`, the semidirect product `(A⊗g) ⋊ g` and the
//! isomorphism `A₁ ⊗ g ≅ (A⊗g) ⋊ g`.

use num_traits::Zero;

use crate::calg::{Carrier, CommAlgebra, Element};
use crate::error::{Error, Result};
use crate::exactla::{int, zero_vec, Mat, Rat};
use crate::liealg::{LieAlgebra, LieHom};

/// Element of `A ⊗ g` keyed by (carrier basis index, Lie basis index).
pub type CurrentElement<K> = Element<(K, usize)>;

#[derive(Clone, Debug)]
pub struct CurrentAlgebra<C: Carrier> {
    alg: C,
    lie: LieAlgebra,
}

impl<C: Carrier> CurrentAlgebra<C> {
    pub fn new(alg: C, lie: LieAlgebra) -> Self {
        CurrentAlgebra { alg, lie }
    }

    pub fn alg(&self) -> &C {
        &self.alg
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    /// `a ⊗ x`.
    pub fn pure(&self, a: &Element<C::Key>, x: &[Rat]) -> CurrentElement<C::Key> {
        assert_eq!(x.len(), self.lie.dim(), "Lie coefficient vector has the wrong length");
        let mut out = Element::zero();
        for (k, c) in a.terms() {
            for (i, xi) in x.iter().enumerate() {
                if !xi.is_zero() {
                    out.add_term((k, i), c * xi);
                }
            }
        }
        out
    }

    /// `e_k ⊗ e_i`.
    pub fn basis(&self, k: C::Key, i: usize) -> CurrentElement<C::Key> {
        Element::basis((k, i))
    }

    pub fn bracket(&self, u: &CurrentElement<C::Key>, v: &CurrentElement<C::Key>) -> CurrentElement<C::Key> {
        let mut out = Element::zero();
        for ((ka, i), xu) in u.terms() {
            for ((kb, j), xv) in v.terms() {
                let lb = self.lie.basis_bracket(i, j);
                if lb.iter().all(Zero::is_zero) {
                    continue;
                }
                let s = xu * xv;
                for (k, c) in self.alg.mul_basis(ka, kb) {
                    let sc = &s * c;
                    for (l, y) in lb.iter().enumerate() {
                        if !y.is_zero() {
                            out.add_term((k, l), &sc * y);
                        }
                    }
                }
            }
        }
        out
    }

    /// `δ_y(u)`, extending `c⊗x ↦ c⊗[y,x]`.
    pub fn delta(&self, y: &[Rat], u: &CurrentElement<C::Key>) -> CurrentElement<C::Key> {
        let mut out = Element::zero();
        for ((k, i), c) in u.terms() {
            let mut x = zero_vec(self.lie.dim());
            x[i] = c.clone();
            for (l, v) in self.lie.br(y, &x).into_iter().enumerate() {
                out.add_term((k, l), v);
            }
        }
        out
    }

    /// Multiplication by `a ∈ A` on the carrier factor.
    pub fn scale_by(&self, a: &Element<C::Key>, u: &CurrentElement<C::Key>) -> CurrentElement<C::Key> {
        let mut out = Element::zero();
        for (ka, xa) in a.terms() {
            for ((k, i), xu) in u.terms() {
                for (m, c) in self.alg.mul_basis(ka, k) {
                    out.add_term((m, i), xa * xu * c);
                }
            }
        }
        out
    }

    /// The bracket of `(A⊗g) ⋊ g`.
    pub fn semidirect_bracket(&self, p: &SemidirectElement<C::Key>, q: &SemidirectElement<C::Key>) -> SemidirectElement<C::Key> {
        let f = self.bracket(&p.f, &q.f).add(&self.delta(&p.y, &q.f)).sub(&self.delta(&q.y, &p.f));
        SemidirectElement { f, y: self.lie.br(&p.y, &q.y) }
    }
}

/// `(z, y) ∈ (A⊗g) ⋊ g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectElement<K: Ord> {
    pub f: CurrentElement<K>,
    pub y: Vec<Rat>,
}

impl<K: Ord + Copy> SemidirectElement<K> {
    pub fn current(f: CurrentElement<K>, lie_dim: usize) -> Self {
        SemidirectElement { f, y: zero_vec(lie_dim) }
    }

    pub fn lie(y: Vec<Rat>) -> Self {
        SemidirectElement { f: Element::zero(), y }
    }

    pub fn add(&self, other: &Self) -> Self {
        SemidirectElement {
            f: self.f.add(&other.f),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Explicit coordinates for finite-dimensional carriers: `e_a ⊗ e_i` has
/// index `a*n + i` where `n = dim g`.
impl CurrentAlgebra<CommAlgebra> {
    pub fn dim(&self) -> usize {
        self.alg.dim() * self.lie.dim()
    }

    pub fn index(&self, a: usize, i: usize) -> usize {
        a * self.lie.dim() + i
    }

    pub fn to_vec(&self, u: &CurrentElement<usize>) -> Vec<Rat> {
        let mut v = zero_vec(self.dim());
        for ((a, i), x) in u.terms() {
            v[self.index(a, i)] = x.clone();
        }
        v
    }

    pub fn from_vec(&self, v: &[Rat]) -> CurrentElement<usize> {
        let n = self.lie.dim();
        Element::from_terms(v.iter().enumerate().map(|(p, x)| ((p / n, p % n), x.clone())))
    }

    /// `A ⊗ g` as an explicit Lie algebra.
    pub fn to_lie_algebra(&self) -> LieAlgebra {
        let n = self.lie.dim();
        LieAlgebra::from_bracket_fn(self.dim(), |p, q| {
            self.to_vec(&self.bracket(&self.basis(p / n, p % n), &self.basis(q / n, q % n)))
        })
    }

    /// `(A⊗g) ⋊ g` with the `A⊗g` coordinates first and `g` last.
    pub fn semidirect(&self) -> LieAlgebra {
        let n = self.lie.dim();
        let cur = self.dim();
        let total = cur + n;
        let to_sd = |s: &SemidirectElement<usize>| {
            let mut v = self.to_vec(&s.f);
            v.extend(s.y.iter().cloned());
            v
        };
        let basis = |p: usize| {
            if p < cur {
                SemidirectElement::current(self.basis(p / n, p % n), n)
            } else {
                let mut y = zero_vec(n);
                y[p - cur] = int(1);
                SemidirectElement::lie(y)
            }
        };
        LieAlgebra::from_bracket_fn(total, |p, q| to_sd(&self.semidirect_bracket(&basis(p), &basis(q))))
    }

    /// `i: A⊗g → (A⊗g)⋊g`, `z ↦ (z, 0)`.
    pub fn inclusion_current(&self) -> Mat {
        let (cur, n) = (self.dim(), self.lie.dim());
        let mut m = Mat::zeros(cur + n, cur);
        for p in 0..cur {
            m[(p, p)] = int(1);
        }
        m
    }

    /// `i_g: g → (A⊗g)⋊g`, `x ↦ (0, x)`.
    pub fn inclusion_lie(&self) -> Mat {
        let (cur, n) = (self.dim(), self.lie.dim());
        let mut m = Mat::zeros(cur + n, n);
        for i in 0..n {
            m[(cur + i, i)] = int(1);
        }
        m
    }

    pub fn is_perfect(&self) -> bool {
        self.to_lie_algebra().is_perfect()
    }
}

/// `A₁⊗g → (A⊗g)⋊g`, `(λ,a)⊗w ↦ (a⊗w, λw)`. The unitalisation has basis
/// `(1,0), (0,e_0), …`, so `(1,0)⊗e_w` goes to the `g` part and
/// `(0,e_a)⊗e_w` to `e_a⊗e_w`. Checked to be bracket preserving and invertible.
pub fn unitalisation_iso(a: &CommAlgebra, g: &LieAlgebra) -> Result<LieHom> {
    a.validate_alg()?;
    let n = g.dim();
    let a1 = a.unitalisation();
    let domain = CurrentAlgebra::new(a1, g.clone()).to_lie_algebra();
    let target = CurrentAlgebra::new(a.clone(), g.clone());
    let codomain = target.semidirect();
    let size = (a.dim() + 1) * n;
    let mut m = Mat::zeros(size, size);
    for w in 0..n {
        m[(target.dim() + w, w)] = int(1);
        for i in 0..a.dim() {
            m[(target.index(i, w), (1 + i) * n + w)] = int(1);
        }
    }
    if !m.is_invertible() {
        return Err(Error::Internal("unitalisation map is not invertible".into()));
    }
    LieHom::new(&domain, &codomain, m)
}

/// Whether the explicit current algebra is perfect.
pub fn is_perfect_current(c: &CurrentAlgebra<CommAlgebra>) -> bool {
    c.is_perfect()
}

//! The square of graded rings
//!
//! ```text
//!   A[u,v]/(uv − ξ) --φ--> A[σ^±1]
//!        |                    |
//!        θ                    θ̃
//!        v                    v
//!      R[u]  ------------>  R[σ^±1]
//! ```
//!
//! over a truncated model of A_inf, together with `can : A[u,v]/(uv−ξ) → A[σ^±1]`.
//! Coefficients live in `A = ℤ/pⁿ[q]/((q−1)^N)`; the trivial model is `N = 1`, where
//! `ξ = p` and φ is the identity.

use crate::linalg::{pow_big, Lattice};
use crate::q_derham::base::{QBase, QElem};
use num_bigint::BigInt;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareModel {
    /// A_inf = W(F_p) = ℤ_p, truncated to ℤ/pⁿ.
    Fp { p: u64, n: u32 },
    /// A_inf modelled by ℤ/pⁿ[q]/((q−1)^N) with ξ = [p]_q.
    Q { p: u64, n: u32, n_trunc: usize },
}

/// Laurent-type element `Σ c_k g^k`; for `A[u,v]/(uv−ξ)` negative `k` means `v^{−k}`.
pub type Graded = BTreeMap<i64, QElem>;

#[derive(Clone, Debug)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct PerfectoidPresentation {
    pub model: SquareModel,
    pub base: QBase,
    pub modulus: BigInt,
    pub xi: QElem,
    pub xi_tilde: QElem,
    pub mu: QElem,
    ideal_xi: Lattice,
    ideal_xi_tilde: Lattice,
    ideal_zero: Lattice,
}

/// Which quotient the coefficients of a graded element are read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coeffs {
    A,
    ModXi,
    ModXiTilde,
}

pub fn build_perfectoid_square(model: SquareModel) -> PerfectoidPresentation {
    let (p, n, n_trunc) = match model {
        SquareModel::Fp { p, n } => (p, n, 1),
        SquareModel::Q { p, n, n_trunc } => (p, n, n_trunc),
    };
    let base = QBase::new(p, n_trunc);
    let modulus = pow_big(p, n);
    let xi = base.xi();
    let xi_tilde = base.xi_tilde();
    let mu = base.mu();
    let pn = Lattice::scaled_full(n_trunc, &modulus);
    let ideal_xi = Lattice::column_span(&base.mult_matrix(&xi)).sum(&pn);
    let ideal_xi_tilde = Lattice::column_span(&base.mult_matrix(&xi_tilde)).sum(&pn);
    PerfectoidPresentation {
        model,
        base,
        modulus,
        xi,
        xi_tilde,
        mu,
        ideal_xi,
        ideal_xi_tilde,
        ideal_zero: pn,
    }
}

impl PerfectoidPresentation {
    fn ideal(&self, c: Coeffs) -> &Lattice {
        match c {
            Coeffs::A => &self.ideal_zero,
            Coeffs::ModXi => &self.ideal_xi,
            Coeffs::ModXiTilde => &self.ideal_xi_tilde,
        }
    }

    pub fn reduce(&self, a: &QElem) -> QElem {
        self.base.reduce_mod(a, &self.modulus)
    }

    pub fn scalar_eq(&self, a: &QElem, b: &QElem, c: Coeffs) -> bool {
        self.ideal(c).contains(self.base.sub(a, b).coeffs())
    }

    pub fn graded_eq(&self, a: &Graded, b: &Graded, c: Coeffs) -> bool {
        let zero = self.base.zero();
        a.keys().chain(b.keys()).all(|k| {
            self.scalar_eq(a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero), c)
        })
    }

    fn push(&self, out: &mut Graded, k: i64, c: QElem) {
        let entry = out.entry(k).or_insert_with(|| self.base.zero());
        *entry = self.reduce(&self.base.add(entry, &c));
        if entry.is_zero() {
            out.remove(&k);
        }
    }

    pub fn monomial(&self, k: i64, c: QElem) -> Graded {
        let mut g = Graded::new();
        self.push(&mut g, k, c);
        g
    }

    pub fn u(&self) -> Graded {
        self.monomial(1, self.base.one())
    }

    pub fn v(&self) -> Graded {
        self.monomial(-1, self.base.one())
    }

    pub fn sigma(&self) -> Graded {
        self.monomial(1, self.base.one())
    }

    pub fn sigma_inv(&self) -> Graded {
        self.monomial(-1, self.base.one())
    }

    pub fn scalar(&self, c: &QElem) -> Graded {
        self.monomial(0, c.clone())
    }

    /// Product in `A[u,v]/(uv − ξ)`: `u^a v^b = ξ^{min(a,b)} u^{a−b}`.
    pub fn mul_top_left(&self, x: &Graded, y: &Graded) -> Graded {
        let mut out = Graded::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                let mut c = self.base.mul(ca, cb);
                if (a > 0 && b < 0) || (a < 0 && b > 0) {
                    let m = a.abs().min(b.abs()) as u64;
                    c = self.base.mul(&c, &self.base.pow(&self.xi, m));
                }
                self.push(&mut out, a + b, c);
            }
        }
        out
    }

    /// Product in a Laurent ring `A[σ^±1]` or polynomial ring `R[u]`.
    pub fn mul_laurent(&self, x: &Graded, y: &Graded) -> Graded {
        let mut out = Graded::new();
        for (&a, ca) in x {
            for (&b, cb) in y {
                self.push(&mut out, a + b, self.base.mul(ca, cb));
            }
        }
        out
    }

    /// `can : u ↦ ξσ, v ↦ σ^{−1}`, A-linear.
    pub fn can(&self, x: &Graded) -> Graded {
        let mut out = Graded::new();
        for (&k, c) in x {
            let c = if k > 0 { self.base.mul(c, &self.base.pow(&self.xi, k as u64)) } else { c.clone() };
            self.push(&mut out, k, c);
        }
        out
    }

    /// `φ : u ↦ σ, v ↦ ξ̃σ^{−1}`, φ-semilinear.
    pub fn phi(&self, x: &Graded) -> Graded {
        let mut out = Graded::new();
        for (&k, c) in x {
            let mut c = self.base.phi(c);
            if k < 0 {
                c = self.base.mul(&c, &self.base.pow(&self.xi_tilde, k.unsigned_abs()));
            }
            self.push(&mut out, k, c);
        }
        out
    }

    /// `θ`-linear left map `u ↦ u, v ↦ 0`; coefficients read modulo ξ.
    pub fn left(&self, x: &Graded) -> Graded {
        let mut out = Graded::new();
        for (&k, c) in x {
            if k >= 0 {
                self.push(&mut out, k, c.clone());
            }
        }
        out
    }

    /// `θ̃`-linear right map `σ ↦ σ`; coefficients read modulo ξ̃.
    pub fn right(&self, x: &Graded) -> Graded {
        x.clone()
    }

    /// Bottom map `u ↦ σ`, with `A/ξ ≅ A/ξ̃` induced by φ on coefficients.
    pub fn bottom(&self, x: &Graded) -> Graded {
        let mut out = Graded::new();
        for (&k, c) in x {
            self.push(&mut out, k, self.base.phi(c));
        }
        out
    }

    /// Evaluate every listed relation.
    pub fn verify(&self) -> Vec<RelationCheck> {
        let b = &self.base;
        let (u, v) = (self.u(), self.v());
        let xi_s = self.scalar(&self.xi);
        let xit_s = self.scalar(&self.xi_tilde);
        let mut checks = Vec::new();
        let mut add = |name: &str, holds: bool| checks.push(RelationCheck { name: name.to_string(), holds });

        add("can(u) = xi*sigma", self.graded_eq(&self.can(&u), &self.mul_laurent(&xi_s, &self.sigma()), Coeffs::A));
        add("can(v) = sigma^-1", self.graded_eq(&self.can(&v), &self.sigma_inv(), Coeffs::A));
        add("phi(u) = sigma", self.graded_eq(&self.phi(&u), &self.sigma(), Coeffs::A));
        add(
            "phi(v) = xi_tilde*sigma^-1",
            self.graded_eq(&self.phi(&v), &self.mul_laurent(&xit_s, &self.sigma_inv()), Coeffs::A),
        );
        let uv = self.mul_top_left(&u, &v);
        let uv_ok = self.graded_eq(&uv, &xi_s, Coeffs::A)
            && self.graded_eq(&self.mul_laurent(&self.can(&u), &self.can(&v)), &self.can(&xi_s), Coeffs::A)
            && self.graded_eq(&self.mul_laurent(&self.phi(&u), &self.phi(&v)), &self.phi(&xi_s), Coeffs::A);
        add("uv = xi", uv_ok);
        add(
            "square commutes on u",
            self.graded_eq(&self.right(&self.phi(&u)), &self.bottom(&self.left(&u)), Coeffs::ModXiTilde),
        );
        add(
            "square commutes on v",
            self.graded_eq(&self.right(&self.phi(&v)), &self.bottom(&self.left(&v)), Coeffs::ModXiTilde),
        );
        let q = self.scalar(&b.q());
        add(
            "square commutes on scalars",
            self.graded_eq(&self.right(&self.phi(&q)), &self.bottom(&self.left(&q)), Coeffs::ModXiTilde)
                && self.scalar_eq(&b.phi(&self.xi), &self.xi_tilde, Coeffs::A)
                && self.scalar_eq(&self.xi, &b.zero(), Coeffs::ModXi),
        );
        checks
    }

    /// ξ modulo the augmentation `q ↦ 1`.
    pub fn xi_augmentation(&self) -> BigInt {
        self.xi.augmentation()
    }
}

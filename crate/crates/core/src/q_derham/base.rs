//! The truncated q-base B = ℤ[q]/((q−1)^N), elements stored in the basis (q−1)^k.

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QBase {
    pub p: u64,
    pub n_trunc: usize,
}

/// Coefficients in the basis `μ^0, …, μ^{N−1}` with `μ = q − 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QElem(pub Vec<BigInt>);

impl QElem {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Value at q = 1.
    pub fn augmentation(&self) -> BigInt {
        self.0[0].clone()
    }
}

impl QBase {
    pub fn new(p: u64, n_trunc: usize) -> Self {
        assert!(n_trunc >= 1, "truncation order must be positive");
        QBase { p, n_trunc }
    }

    pub fn rank(&self) -> usize {
        self.n_trunc
    }

    pub fn zero(&self) -> QElem {
        QElem(vec![BigInt::zero(); self.n_trunc])
    }

    pub fn int(&self, c: impl Into<BigInt>) -> QElem {
        let mut v = self.zero();
        v.0[0] = c.into();
        v
    }

    pub fn one(&self) -> QElem {
        self.int(1)
    }

    pub fn mu(&self) -> QElem {
        let mut v = self.zero();
        if self.n_trunc > 1 {
            v.0[1] = BigInt::one();
        }
        v
    }

    pub fn q(&self) -> QElem {
        self.add(&self.one(), &self.mu())
    }

    pub fn from_coeffs(&self, c: Vec<BigInt>) -> QElem {
        assert_eq!(c.len(), self.n_trunc);
        QElem(c)
    }

    pub fn add(&self, a: &QElem, b: &QElem) -> QElem {
        QElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &QElem, b: &QElem) -> QElem {
        QElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &QElem) -> QElem {
        QElem(a.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &QElem, c: &BigInt) -> QElem {
        QElem(a.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, a: &QElem, b: &QElem) -> QElem {
        let n = self.n_trunc;
        let mut out = vec![BigInt::zero(); n];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        QElem(out)
    }

    pub fn pow(&self, a: &QElem, e: u64) -> QElem {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// `q^{-1} = Σ (−μ)^k`
    pub fn q_inv(&self) -> QElem {
        QElem((0..self.n_trunc).map(|k| if k % 2 == 0 { BigInt::one() } else { -BigInt::one() }).collect())
    }

    pub fn q_pow(&self, k: i64) -> QElem {
        if k >= 0 {
            self.pow(&self.q(), k as u64)
        } else {
            self.pow(&self.q_inv(), k.unsigned_abs())
        }
    }

    /// `[k]_{q^s} = (q^{sk} − 1)/(q^s − 1)`, with `[−k]_{q^s} = −q^{−sk}[k]_{q^s}`.
    pub fn q_integer_base(&self, k: i64, s: u64) -> QElem {
        let kk = k.unsigned_abs();
        let qs = self.q_pow(s as i64);
        let mut acc = self.zero();
        let mut term = self.one();
        for _ in 0..kk {
            acc = self.add(&acc, &term);
            term = self.mul(&term, &qs);
        }
        if k >= 0 {
            acc
        } else {
            let inv = self.q_pow(-(s as i64) * kk as i64);
            self.neg(&self.mul(&inv, &acc))
        }
    }

    /// `[k]_q`
    pub fn q_integer(&self, k: i64) -> QElem {
        self.q_integer_base(k, 1)
    }

    /// `ξ = [p]_q`
    pub fn xi(&self) -> QElem {
        self.q_integer(self.p as i64)
    }

    /// `ξ̃ = [p]_{q^p}`
    pub fn xi_tilde(&self) -> QElem {
        self.q_integer_base(self.p as i64, self.p)
    }

    /// Frobenius `q ↦ q^p`, i.e. `μ ↦ (1+μ)^p − 1`.
    pub fn phi(&self, a: &QElem) -> QElem {
        let mut img = self.zero();
        for k in 1..=(self.p as usize).min(self.n_trunc.saturating_sub(1)) {
            img.0[k] = binomial(BigInt::from(self.p), BigInt::from(k as u64));
        }
        // Horner in μ
        let mut acc = self.zero();
        for c in a.0.iter().rev() {
            acc = self.mul(&acc, &img);
            acc.0[0] += c;
        }
        acc
    }

    pub fn phi_iter(&self, a: &QElem, times: u32) -> QElem {
        (0..times).fold(a.clone(), |x, _| self.phi(&x))
    }

    /// ℤ-matrix of multiplication by `a` on the basis `μ^k`.
    pub fn mult_matrix(&self, a: &QElem) -> IntMatrix {
        let n = self.n_trunc;
        let mut m = IntMatrix::zeros(n, n);
        for j in 0..n {
            for i in j..n {
                m[(i, j)] = a.0[i - j].clone();
            }
        }
        m
    }

    /// ℤ-matrix of the ring endomorphism φ.
    pub fn phi_matrix(&self) -> IntMatrix {
        let n = self.n_trunc;
        let mut m = IntMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = self.zero();
            e.0[j] = BigInt::one();
            let img = self.phi(&e);
            for i in 0..n {
                m[(i, j)] = img.0[i].clone();
            }
        }
        m
    }

    /// `h / f` when it exists; the constant term of `f` must be nonzero.
    pub fn div_exact(&self, h: &QElem, f: &QElem) -> Result<QElem> {
        let c0 = &f.0[0];
        if c0.is_zero() {
            return Err(Error::DivisionFailure("divisor has zero constant term".into()));
        }
        let n = self.n_trunc;
        let mut g = vec![BigInt::zero(); n];
        for k in 0..n {
            let mut r = h.0[k].clone();
            for j in 1..=k {
                r -= &f.0[j] * &g[k - j];
            }
            let (q, rem) = r.div_rem(c0);
            if !rem.is_zero() {
                return Err(Error::DivisionFailure(format!("remainder at (q-1)^{k}")));
            }
            g[k] = q;
        }
        Ok(QElem(g))
    }

    pub fn reduce_mod(&self, a: &QElem, m: &BigInt) -> QElem {
        QElem(a.0.iter().map(|x| x.mod_floor(m)).collect())
    }

    /// Restriction to a smaller truncation order.
    pub fn truncate(&self, a: &QElem, n_new: usize) -> QElem {
        QElem(a.0[..n_new].to_vec())
    }

    /// Multiplication by `a` is injective on B (over ℤ).
    pub fn is_nonzerodivisor(&self, a: &QElem) -> bool {
        !self.mult_matrix(a).det().is_zero()
    }
}

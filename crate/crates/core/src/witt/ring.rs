//! Effective base rings for Witt vectors and their torsion-free lifts.
//!
//! Every supported ring is a quotient of ℤ[t]/(t^K) by a modulus on the coefficients:
//! ℤ (K = 1), ℤ/p^m (K = 1), F_p[x]/(x^k) (t = x, K = k) and
//! F_p[x^{1/p^e}]/(x^k) (t = x^{1/p^e}, K = k p^e).

use crate::error::{Error, Result};
use crate::linalg::pow_big;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    IntegersMod { p: u64, m: u32 },
    Truncated { p: u64, k: u32 },
    PerfectTruncated { p: u64, e: u32, k: u32 },
}

/// Coefficient vector in powers of `t`.
pub type Elem = Vec<BigInt>;

impl BaseRing {
    /// Number of `t`-coefficients.
    pub fn width(&self) -> usize {
        match self {
            BaseRing::Integers | BaseRing::IntegersMod { .. } => 1,
            BaseRing::Truncated { k, .. } => *k as usize,
            BaseRing::PerfectTruncated { p, e, k } => (*k as usize) * (*p as usize).pow(*e),
        }
    }

    /// Modulus applied to coefficients, if any.
    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            BaseRing::Integers => None,
            BaseRing::IntegersMod { p, m } => Some(pow_big(*p, *m)),
            BaseRing::Truncated { p, .. } | BaseRing::PerfectTruncated { p, .. } => Some(BigInt::from(*p)),
        }
    }

    pub fn characteristic_p(&self) -> Option<u64> {
        match self {
            BaseRing::Truncated { p, .. } | BaseRing::PerfectTruncated { p, .. } => Some(*p),
            BaseRing::IntegersMod { p, m: 1 } => Some(*p),
            _ => None,
        }
    }

    pub fn zero(&self) -> Elem {
        vec![BigInt::zero(); self.width()]
    }

    pub fn one(&self) -> Elem {
        self.constant(&BigInt::one())
    }

    pub fn constant(&self, c: &BigInt) -> Elem {
        let mut v = self.zero();
        v[0] = c.clone();
        self.reduce(&v)
    }

    /// The element `x` (or the integer 1 for rings without a variable).
    pub fn x(&self) -> Elem {
        match self {
            BaseRing::Truncated { .. } => self.monomial(1),
            BaseRing::PerfectTruncated { p, e, .. } => self.monomial((*p as usize).pow(*e)),
            _ => self.one(),
        }
    }

    /// `t^i`
    pub fn monomial(&self, i: usize) -> Elem {
        let mut v = self.zero();
        if i < v.len() {
            v[i] = BigInt::one();
        }
        v
    }

    pub fn reduce(&self, a: &[BigInt]) -> Elem {
        let mut v: Elem = a.iter().take(self.width()).cloned().collect();
        v.resize(self.width(), BigInt::zero());
        if let Some(m) = self.modulus() {
            for c in v.iter_mut() {
                *c = c.mod_floor(&m);
            }
        }
        v
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(&lift_add(a, b))
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.reduce(&a.iter().map(|x| -x).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(&lift_mul(a, b, self.width()))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        let mut r = self.one();
        let mut b = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        self.reduce(a).iter().all(|c| c.is_zero())
    }

    /// Ring Frobenius on a perfect truncation: raise exponents of `x` by `p`.
    pub fn frobenius(&self, a: &Elem) -> Result<Elem> {
        match self {
            BaseRing::Truncated { p, .. } | BaseRing::PerfectTruncated { p, .. } => {
                let mut v = self.zero();
                for (i, c) in a.iter().enumerate() {
                    let j = i * (*p as usize);
                    if j < v.len() {
                        v[j] += c;
                    }
                }
                Ok(self.reduce(&v))
            }
            _ => Ok(self.reduce(a)),
        }
    }

    /// Inverse Frobenius on a perfect truncation; fails when an exponent would need
    /// denominator beyond `p^e`.
    pub fn frobenius_inverse(&self, a: &Elem) -> Result<Elem> {
        let p = match self {
            BaseRing::PerfectTruncated { p, .. } | BaseRing::Truncated { p, .. } => *p as usize,
            _ => return Ok(self.reduce(a)),
        };
        let a = self.reduce(a);
        let mut v = self.zero();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i % p != 0 {
                return Err(Error::Invalid(format!(
                    "p-th root of t^{i} leaves the truncation lattice"
                )));
            }
            v[i / p] = c.clone();
        }
        Ok(v)
    }
}

pub(crate) fn lift_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn lift_mul(a: &[BigInt], b: &[BigInt], width: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); width];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= width {
                break;
            }
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

pub(crate) fn lift_pow(a: &[BigInt], e: u64, width: usize) -> Vec<BigInt> {
    let mut r = vec![BigInt::zero(); width];
    r[0] = BigInt::one();
    let mut b = a.to_vec();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            r = lift_mul(&r, &b, width);
        }
        e >>= 1;
        if e > 0 {
            b = lift_mul(&b, &b, width);
        }
    }
    r
}

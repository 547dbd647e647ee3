//! Universal Witt addition and multiplication polynomials over ℤ.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Sparse polynomial in `2n` variables `x_0..x_{n-1}, y_0..y_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl Poly {
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        Poly { terms }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Poly { terms }
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::default();
        }
        Poly { terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, e: u64, nvars: usize) -> Poly {
        let mut r = Poly::constant(nvars, BigInt::one());
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn div_exact(&self, d: &BigInt) -> Result<Poly> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::DivisionFailure(format!("non-integral coefficient {c}/{d}")));
            }
            terms.insert(e.clone(), q);
        }
        Ok(Poly { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Debug)]
pub struct UniversalPolys {
    pub p: u64,
    pub n: usize,
    pub sum: Vec<Poly>,
    pub product: Vec<Poly>,
}

/// Largest total degree `p^{n-1}` for which the polynomials are expanded.
pub const MAX_DEGREE: u64 = 9;

fn ghost(p: u64, n: usize, i: usize, offset: usize) -> Poly {
    let nv = 2 * n;
    let mut g = Poly::default();
    for j in 0..=i {
        let t = Poly::var(nv, offset + j).pow(p.pow((i - j) as u32), nv);
        g = g.add(&t.scale(&BigInt::from(p).pow(j as u32)));
    }
    g
}

fn solve(p: u64, n: usize, target: impl Fn(usize) -> Poly) -> Result<Vec<Poly>> {
    let nv = 2 * n;
    let mut out: Vec<Poly> = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = target(i);
        for (j, s) in out.iter().enumerate() {
            let t = s.pow(p.pow((i - j) as u32), nv).scale(&BigInt::from(p).pow(j as u32));
            r = r.sub(&t);
        }
        out.push(r.div_exact(&BigInt::from(p).pow(i as u32))?);
    }
    Ok(out)
}

fn compute(p: u64, n: usize) -> Result<UniversalPolys> {
    let sum = solve(p, n, |i| ghost(p, n, i, 0).add(&ghost(p, n, i, n)))?;
    let product = solve(p, n, |i| ghost(p, n, i, 0).mul(&ghost(p, n, i, n)))?;
    Ok(UniversalPolys { p, n, sum, product })
}

static CACHE: Lazy<Mutex<HashMap<(u64, usize), Arc<UniversalPolys>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Sum and product polynomials for `W_n` at `p`, computed once and shared.
pub fn universal_polynomials(p: u64, n: usize) -> Result<Arc<UniversalPolys>> {
    if n == 0 {
        return Err(Error::Invalid("Witt length must be positive".into()));
    }
    if p.checked_pow((n - 1) as u32).map_or(true, |d| d > MAX_DEGREE) {
        return Err(Error::Invalid(format!(
            "universal polynomials for p={p}, n={n} exceed degree bound {MAX_DEGREE}"
        )));
    }
    if let Some(u) = CACHE.lock().unwrap().get(&(p, n)) {
        return Ok(u.clone());
    }
    let u = Arc::new(compute(p, n)?);
    let mut guard = CACHE.lock().unwrap();
    Ok(guard.entry((p, n)).or_insert(u).clone())
}

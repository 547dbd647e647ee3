use super::ring::{lift_add, lift_mul, lift_pow, BaseRing, Elem};
use super::universal::universal_polynomials;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// How sums and products are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Ghost arithmetic in the torsion-free lift, exact division, reduction.
    Lift,
    /// Cached universal polynomials evaluated in the base ring.
    Universal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    pub p: u64,
    pub ring: BaseRing,
    pub coords: Vec<Elem>,
}

fn ghost_lift(p: u64, coords: &[Elem], width: usize) -> Vec<Elem> {
    let n = coords.len();
    (0..n)
        .map(|i| {
            let mut g = vec![BigInt::zero(); width];
            for (j, c) in coords.iter().enumerate().take(i + 1) {
                let t = lift_pow(c, p.pow((i - j) as u32), width);
                let s = BigInt::from(p).pow(j as u32);
                for (gk, tk) in g.iter_mut().zip(&t) {
                    *gk += &s * tk;
                }
            }
            g
        })
        .collect()
}

fn unghost_lift(p: u64, ghosts: &[Elem], width: usize) -> Result<Vec<Elem>> {
    let mut out: Vec<Elem> = Vec::with_capacity(ghosts.len());
    for (i, g) in ghosts.iter().enumerate() {
        let mut r = g.clone();
        for (j, c) in out.iter().enumerate() {
            let t = lift_pow(c, p.pow((i - j) as u32), width);
            let s = BigInt::from(p).pow(j as u32);
            for (rk, tk) in r.iter_mut().zip(&t) {
                *rk -= &s * tk;
            }
        }
        let d = BigInt::from(p).pow(i as u32);
        let mut a = Vec::with_capacity(width);
        for x in r {
            let (q, rem) = x.div_rem(&d);
            if !rem.is_zero() {
                return Err(Error::DivisionFailure(format!("ghost component {i} is not integral")));
            }
            a.push(q);
        }
        out.push(a);
    }
    Ok(out)
}

impl WittVector {
    pub fn new(p: u64, ring: BaseRing, coords: Vec<Elem>) -> Self {
        let coords = coords.iter().map(|c| ring.reduce(c)).collect();
        WittVector { p, ring, coords }
    }

    pub fn zero(p: u64, ring: &BaseRing, n: usize) -> Self {
        WittVector { p, ring: ring.clone(), coords: vec![ring.zero(); n] }
    }

    /// Teichmüller representative `[a] = (a, 0, …, 0)`.
    pub fn teichmuller(p: u64, ring: &BaseRing, a: &Elem, n: usize) -> Self {
        let mut coords = vec![ring.zero(); n];
        if n > 0 {
            coords[0] = ring.reduce(a);
        }
        WittVector { p, ring: ring.clone(), coords }
    }

    /// Image of the integer `c` under `ℤ → W_n(A)`.
    pub fn from_integer(p: u64, ring: &BaseRing, c: i64, n: usize) -> Result<Self> {
        let w = ring.width();
        let g: Vec<Elem> = (0..n)
            .map(|_| {
                let mut v = vec![BigInt::zero(); w];
                v[0] = BigInt::from(c);
                v
            })
            .collect();
        Ok(Self::from_lift(p, ring, unghost_lift(p, &g, w)?))
    }

    pub fn one(p: u64, ring: &BaseRing, n: usize) -> Self {
        Self::teichmuller(p, ring, &ring.one(), n)
    }

    fn from_lift(p: u64, ring: &BaseRing, coords: Vec<Elem>) -> Self {
        WittVector { p, ring: ring.clone(), coords: coords.iter().map(|c| ring.reduce(c)).collect() }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.ring.is_zero(c))
    }

    fn compatible(&self, other: &WittVector) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::LengthMismatch(self.coords.len(), other.coords.len()));
        }
        if self.ring != other.ring || self.p != other.p {
            return Err(Error::Invalid("Witt vectors over different rings".into()));
        }
        Ok(())
    }

    /// Ghost components computed in the base ring.
    pub fn ghost(&self) -> Vec<Elem> {
        ghost_lift(self.p, &self.coords, self.ring.width()).iter().map(|g| self.ring.reduce(g)).collect()
    }

    fn ghost_of_lift(&self) -> Vec<Elem> {
        ghost_lift(self.p, &self.coords, self.ring.width())
    }

    fn combine(&self, other: &WittVector, f: impl Fn(&Elem, &Elem) -> Elem) -> Result<WittVector> {
        self.compatible(other)?;
        let (a, b) = (self.ghost_of_lift(), other.ghost_of_lift());
        let g: Vec<Elem> = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
        Ok(Self::from_lift(self.p, &self.ring, unghost_lift(self.p, &g, self.ring.width())?))
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.add_via(other, Route::Lift)
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.mul_via(other, Route::Lift)
    }

    pub fn add_via(&self, other: &WittVector, route: Route) -> Result<WittVector> {
        match route {
            Route::Lift => self.combine(other, |x, y| lift_add(x, y)),
            Route::Universal => self.eval_universal(other, true),
        }
    }

    pub fn mul_via(&self, other: &WittVector, route: Route) -> Result<WittVector> {
        let w = self.ring.width();
        match route {
            Route::Lift => self.combine(other, |x, y| lift_mul(x, y, w)),
            Route::Universal => self.eval_universal(other, false),
        }
    }

    fn eval_universal(&self, other: &WittVector, sum: bool) -> Result<WittVector> {
        self.compatible(other)?;
        let n = self.len();
        let u = universal_polynomials(self.p, n)?;
        let polys = if sum { &u.sum } else { &u.product };
        let vals: Vec<&Elem> = self.coords.iter().chain(other.coords.iter()).collect();
        let ring = &self.ring;
        let coords = polys
            .iter()
            .map(|poly| {
                let mut acc = ring.zero();
                for (e, c) in &poly.terms {
                    let mut m = ring.constant(c);
                    for (v, &k) in vals.iter().zip(e) {
                        if k > 0 {
                            m = ring.mul(&m, &ring.pow(v, k as u64));
                        }
                    }
                    acc = ring.add(&acc, &m);
                }
                acc
            })
            .collect();
        Ok(WittVector { p: self.p, ring: ring.clone(), coords })
    }

    pub fn neg(&self) -> Result<WittVector> {
        let g: Vec<Elem> = self.ghost_of_lift().iter().map(|x| x.iter().map(|c| -c).collect()).collect();
        Ok(Self::from_lift(self.p, &self.ring, unghost_lift(self.p, &g, self.ring.width())?))
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector> {
        self.add(&other.neg()?)
    }

    /// Witt Frobenius `F : W_n(A) → W_{n−1}(A)`, ghost components shifted by one.
    pub fn frobenius(&self) -> Result<WittVector> {
        let g = self.ghost_of_lift();
        let shifted: Vec<Elem> = g.into_iter().skip(1).collect();
        Ok(Self::from_lift(self.p, &self.ring, unghost_lift(self.p, &shifted, self.ring.width())?))
    }

    /// Verschiebung `V : W_n(A) → W_{n+1}(A)`.
    pub fn verschiebung(&self) -> WittVector {
        let mut coords = vec![self.ring.zero()];
        coords.extend(self.coords.iter().cloned());
        WittVector { p: self.p, ring: self.ring.clone(), coords }
    }

    /// Restriction `W_n → W_m` for `m ≤ n`.
    pub fn truncate(&self, m: usize) -> WittVector {
        WittVector { p: self.p, ring: self.ring.clone(), coords: self.coords[..m].to_vec() }
    }

    /// Coordinatewise application of the ring Frobenius (equals `F` in characteristic p).
    pub fn coordinate_frobenius(&self) -> Result<WittVector> {
        let coords = self.coords.iter().map(|c| self.ring.frobenius(c)).collect::<Result<Vec<_>>>()?;
        Ok(WittVector { p: self.p, ring: self.ring.clone(), coords })
    }

    pub fn scalar_mul(&self, c: i64) -> Result<WittVector> {
        let k = WittVector::from_integer(self.p, &self.ring, c, self.len())?;
        self.mul(&k)
    }
}

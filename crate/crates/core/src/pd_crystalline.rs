//! Truncated divided-power envelopes and a coordinate model of 𝔸_crys(S).
//!
//! `S = F_p[x_1^{1/p^e},…,x_m^{1/p^e}]/(x_1,…,x_m)`. The envelope of `ℤ[x^{1/p^e}] → S` is free over ℤ
//! on `x^α x^{[l]}` with each `α_j ∈ [0,1)` of denominator `p^e` and `l ∈ ℕ^m`. Coefficients live in
//! ℤ/pⁿ and monomials of weight `Σ l_j > W` are dropped, which is a quotient by a monomial ideal.
//!
//! Frobenius is monomial: `φ(x^α x^{[l]}) = ((k+pl)!/l!)·x^{frac(pα)} x^{[k+pl]}` per variable with
//! `k = ⌊pα⌋`, and the index map is injective. Most structure below is read off from that.

use crate::error::{Error, Result};
use crate::linalg::{cokernel_mod, kernel_mod, IntMatrix, ModPn, PGroup};
use crate::report::{item, ItemReport};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub const DEFAULT_PRECISION_BOUND: u32 = 64;

/// `x^{frac/p^e} x^{[pd]}`, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Mono {
    pub frac: Vec<u64>,
    pub pd: Vec<u32>,
}

impl Mono {
    pub fn weight(&self) -> u32 {
        self.pd.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdElement {
    pub terms: BTreeMap<Mono, BigInt>,
    /// set when a product or Frobenius dropped monomials above the weight bound
    pub truncated: bool,
}

impl PdElement {
    pub fn zero() -> Self {
        PdElement { terms: BTreeMap::new(), truncated: false }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PdAlgebra {
    pub p: u64,
    pub vars: usize,
    /// perfection depth e
    pub depth: u32,
    /// coefficients in ℤ/pⁿ
    pub n: u32,
    pub weight_bound: u32,
    pub precision_bound: u32,
    denom: u64,
    modulus: BigInt,
}

/// `𝒩^{≥i}` in the monomial basis: `p^{exponent(m)} m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcrysNygaard {
    pub i: i64,
    pub exponents: BTreeMap<Mono, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoints {
    pub i: i64,
    pub group: PGroup,
    pub generators: Vec<PdElement>,
    /// weight bound at which the answer was certified
    pub weight_bound: u32,
}

/// `v_p(m!)`.
pub fn legendre(m: u64, p: u64) -> u64 {
    let mut s = 0;
    let mut q = m / p;
    while q > 0 {
        s += q;
        q /= p;
    }
    s
}

fn p_valuation(x: &BigInt, p: u64) -> u64 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        v += 1;
    }
    v
}

fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * k)
}

fn binom(n: u64, k: u64) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `(pk)!/(p^k k!)`, a p-adic unit.
pub fn graded_unit(p: u64, k: u64) -> BigInt {
    factorial(p * k) / (BigInt::from(p).pow(k as u32) * factorial(k))
}

/// `acrys(S, n, W, e)` for S in m variables.
pub fn acrys(p: u64, vars: usize, n: u32, weight_bound: u32, depth: u32) -> Result<PdAlgebra> {
    PdAlgebra::new(p, vars, depth, n, weight_bound)
}

impl PdAlgebra {
    pub fn new(p: u64, vars: usize, depth: u32, n: u32, weight_bound: u32) -> Result<Self> {
        if vars == 0 || n == 0 || p < 2 {
            return Err(Error::Invalid(format!("PD algebra needs p ≥ 2, m ≥ 1, n ≥ 1 (got p={p}, m={vars}, n={n})")));
        }
        let denom = p.checked_pow(depth).ok_or_else(|| Error::Invalid("perfection depth too large".into()))?;
        Ok(PdAlgebra {
            p,
            vars,
            depth,
            n,
            weight_bound,
            precision_bound: DEFAULT_PRECISION_BOUND,
            denom,
            modulus: BigInt::from(p).pow(n),
        })
    }

    pub fn with_precision(&self, n: u32) -> Self {
        let mut a = self.clone();
        a.n = n;
        a.modulus = BigInt::from(self.p).pow(n);
        a
    }

    pub fn with_weight_bound(&self, w: u32) -> Self {
        let mut a = self.clone();
        a.weight_bound = w;
        a
    }

    pub fn with_precision_bound(mut self, bound: u32) -> Self {
        self.precision_bound = bound;
        self
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    /// Every retained monomial, ordered by weight and then lexicographically.
    pub fn basis(&self) -> Vec<Mono> {
        let mut fracs: Vec<Vec<u64>> = vec![Vec::new()];
        for _ in 0..self.vars {
            fracs = fracs
                .into_iter()
                .flat_map(|f| (0..self.denom).map(move |a| [f.clone(), vec![a]].concat()))
                .collect();
        }
        let mut out = Vec::new();
        for w in 0..=self.weight_bound {
            for pd in compositions(w, self.vars) {
                for f in &fracs {
                    out.push(Mono { frac: f.clone(), pd: pd.clone() });
                }
            }
        }
        out
    }

    pub fn one(&self) -> PdElement {
        self.monomial(&Mono { frac: vec![0; self.vars], pd: vec![0; self.vars] })
    }

    pub fn monomial(&self, m: &Mono) -> PdElement {
        self.from_terms(vec![(m.clone(), BigInt::one())])
    }

    pub fn from_terms(&self, terms: Vec<(Mono, BigInt)>) -> PdElement {
        let mut out = PdElement::zero();
        for (m, c) in terms {
            self.add_term(&mut out, m, c);
        }
        out
    }

    fn add_term(&self, e: &mut PdElement, m: Mono, c: BigInt) {
        if m.weight() > self.weight_bound {
            e.truncated = true;
            return;
        }
        let entry = e.terms.entry(m.clone()).or_insert_with(BigInt::zero);
        *entry = self.reduce(&(&*entry + c));
        if entry.is_zero() {
            e.terms.remove(&m);
        }
    }

    /// `x_j^{[l]}`
    pub fn divided_power(&self, j: usize, l: u32) -> PdElement {
        let mut pd = vec![0; self.vars];
        pd[j] = l;
        self.monomial(&Mono { frac: vec![0; self.vars], pd })
    }

    /// `x^β` for `β_j = num_j / p^e` of any size; integer parts become `k!·x^{[k]}`.
    pub fn base_power(&self, num: &[u64]) -> PdElement {
        let mut coeff = BigInt::one();
        let mut frac = Vec::with_capacity(self.vars);
        let mut pd = Vec::with_capacity(self.vars);
        for &a in num {
            let k = a / self.denom;
            frac.push(a % self.denom);
            pd.push(k as u32);
            coeff *= factorial(k);
        }
        self.from_terms(vec![(Mono { frac, pd }, coeff)])
    }

    pub fn add(&self, a: &PdElement, b: &PdElement) -> PdElement {
        let mut out = a.clone();
        out.truncated |= b.truncated;
        for (m, c) in &b.terms {
            self.add_term(&mut out, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, a: &PdElement, c: &BigInt) -> PdElement {
        let mut out = PdElement { terms: BTreeMap::new(), truncated: a.truncated };
        for (m, x) in &a.terms {
            self.add_term(&mut out, m.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, a: &PdElement, b: &PdElement) -> PdElement {
        self.add(a, &self.scale(b, &BigInt::from(-1)))
    }

    /// Product of basis monomials, before truncation.
    pub fn mono_mul(&self, a: &Mono, b: &Mono) -> (BigInt, Mono) {
        let mut coeff = BigInt::one();
        let mut frac = Vec::with_capacity(self.vars);
        let mut pd = Vec::with_capacity(self.vars);
        for j in 0..self.vars {
            let s = a.frac[j] + b.frac[j];
            let mut l = a.pd[j] + b.pd[j];
            coeff *= binom(l as u64, a.pd[j] as u64);
            if s >= self.denom {
                // x · x^{[l]} = (l+1) x^{[l+1]}
                coeff *= l + 1;
                l += 1;
            }
            frac.push(s % self.denom);
            pd.push(l);
        }
        (coeff, Mono { frac, pd })
    }

    /// `pd_mul`: bilinear extension of the binomial law, truncated at weight W.
    pub fn mul(&self, a: &PdElement, b: &PdElement) -> PdElement {
        let mut out = PdElement { terms: BTreeMap::new(), truncated: a.truncated || b.truncated };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let (c, m) = self.mono_mul(ma, mb);
                self.add_term(&mut out, m, c * ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, a: &PdElement, k: u32) -> PdElement {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Index map of Frobenius and its exact integer coefficient.
    pub fn phi_mono(&self, m: &Mono) -> (BigInt, Mono) {
        let mut coeff = BigInt::one();
        let mut frac = Vec::with_capacity(self.vars);
        let mut pd = Vec::with_capacity(self.vars);
        for j in 0..self.vars {
            let t = self.p * m.frac[j];
            let k = t / self.denom;
            let l = m.pd[j] as u64;
            let big_l = k + self.p * l;
            coeff *= factorial(big_l) / factorial(l);
            frac.push(t % self.denom);
            pd.push(big_l as u32);
        }
        (coeff, Mono { frac, pd })
    }

    /// `v_p` of the Frobenius coefficient of `m`; by Legendre this is `Σ l_j`.
    pub fn nygaard_level(&self, m: &Mono) -> u64 {
        (0..self.vars)
            .map(|j| {
                let k = self.p * m.frac[j] / self.denom;
                let l = m.pd[j] as u64;
                legendre(k + self.p * l, self.p) - legendre(l, self.p)
            })
            .sum()
    }

    pub fn phi(&self, a: &PdElement) -> Result<PdElement> {
        let mut out = PdElement { terms: BTreeMap::new(), truncated: a.truncated };
        for (m, c) in &a.terms {
            let (k, img) = self.phi_mono(m);
            if img.weight() > self.weight_bound {
                return Err(Error::TruncationTooTight(format!(
                    "φ sends a weight-{} monomial to weight {} > W = {}",
                    m.weight(),
                    img.weight(),
                    self.weight_bound
                )));
            }
            self.add_term(&mut out, img, k * c);
        }
        Ok(out)
    }

    /// `σ⁻¹(m)` inside this depth, if any.
    pub fn phi_preimage(&self, m: &Mono) -> Option<Mono> {
        let mut frac = Vec::with_capacity(self.vars);
        let mut pd = Vec::with_capacity(self.vars);
        for j in 0..self.vars {
            let r = m.pd[j] as u64 % self.p;
            let num = m.frac[j] + r * self.denom;
            if num % self.p != 0 {
                return None;
            }
            frac.push(num / self.p);
            pd.push(m.pd[j] / self.p as u32);
        }
        Some(Mono { frac, pd })
    }

    // ---- conjugate filtration ----

    /// Smallest n with `m ∈ Fil_n^conj`: `Σ ⌊l_j/p⌋`.
    pub fn conj_level(&self, m: &Mono) -> u32 {
        m.pd.iter().map(|&l| l / self.p as u32).sum()
    }

    /// Ideal elements used as generic `a_i ∈ I`: each `x_j`, sums `x_j + x_k`, and twisted `x^{1/p^e}x_j`.
    pub fn generic_ideal_elements(&self) -> Vec<Vec<(Vec<u64>, usize)>> {
        let mut out = Vec::new();
        let zero = vec![0u64; self.vars];
        for j in 0..self.vars {
            out.push(vec![(zero.clone(), j)]);
            if self.denom > 1 {
                let mut f = zero.clone();
                f[(j + 1) % self.vars] = 1;
                out.push(vec![(f, j)]);
            }
            for k in j + 1..self.vars {
                out.push(vec![(zero.clone(), j), (zero.clone(), k)]);
            }
        }
        out
    }

    /// `c^{[l]}` for `c = Σ_t x^{β_t} x_{j_t}`, via `(Σ c_t)^{[l]} = Σ ∏ c_t^{[l_t]}` and `(x^β x_j)^{[l]} = x^{lβ} x_j^{[l]}`.
    pub fn divided_power_of(&self, c: &[(Vec<u64>, usize)], l: u32) -> PdElement {
        let mut total = PdElement::zero();
        for parts in compositions(l, c.len()) {
            let mut term = self.one();
            for ((beta, j), &lt) in c.iter().zip(&parts) {
                let scaled: Vec<u64> = beta.iter().map(|b| b * lt as u64).collect();
                let f = self.mul(&self.base_power(&scaled), &self.divided_power(*j, lt));
                term = self.mul(&term, &f);
            }
            total = self.add(&total, &term);
        }
        total
    }

    /// Span mod p of `S^♭`-multiples of `∏ c_i^{[l_i]}` with `Σ l_i < (n+1)p`, over the generic family.
    pub fn conj_span_generic(&self, n: u32) -> FpSpan {
        let basis = self.basis();
        let index: HashMap<Mono, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let fp = self.with_precision(1);
        let bound = (n + 1) * self.p as u32;
        let family = self.generic_ideal_elements();
        let mut gens: Vec<PdElement> = vec![fp.one()];
        for (a, c) in family.iter().enumerate() {
            for l in 1..bound {
                let g = fp.divided_power_of(c, l);
                gens.push(g.clone());
                for c2 in family.iter().skip(a + 1) {
                    for l2 in 1..(bound - l) {
                        gens.push(fp.mul(&g, &fp.divided_power_of(c2, l2)));
                    }
                }
            }
        }
        // x^β with some β_j ≥ p is 0 mod p, so these multipliers suffice
        let mut multipliers = vec![Vec::<u64>::new()];
        for _ in 0..self.vars {
            multipliers = multipliers
                .into_iter()
                .flat_map(|b| (0..self.denom * self.p).map(move |a| [b.clone(), vec![a]].concat()))
                .collect();
        }
        let mut span = FpSpan::new(self.p, basis.len());
        for b in &multipliers {
            let xb = fp.base_power(b);
            if xb.is_zero() {
                continue;
            }
            for g in &gens {
                let prod = fp.mul(&xb, g);
                if prod.is_zero() {
                    continue;
                }
                let v = prod
                    .terms
                    .iter()
                    .map(|(m, c)| (index[m], c.mod_floor(&BigInt::from(self.p)).try_into().unwrap_or(0)))
                    .collect();
                span.insert_sparse(v);
            }
        }
        span
    }

    /// Levels `n` whose generic span equals the monomial description `Σ⌊l_j/p⌋ ≤ n`.
    pub fn conj_descriptions_agree(&self, n_max: u32) -> ItemReport {
        let basis = self.basis();
        let items = (0..=n_max)
            .map(|n| {
                let span = self.conj_span_generic(n);
                let expected: Vec<usize> =
                    basis.iter().enumerate().filter(|(_, m)| self.conj_level(m) <= n).map(|(i, _)| i).collect();
                let inside = span.rows().all(|r| r.keys().all(|&i| self.conj_level(&basis[i]) <= n));
                let holds = inside && span.rank() == expected.len();
                item(format!("Fil_{n}"), holds, format!("rank {} vs {}", span.rank(), expected.len()))
            })
            .collect();
        ItemReport::new("conj_descriptions", items)
    }

    /// `Γ^n_S(I/I²) → gr_n^conj(𝔸/p)` is bijective for every `n` whose stratum fits under W.
    ///
    /// The source uses `S` at depth `e+1` so that its Frobenius twist lands in depth `e`.
    pub fn conj_graded_map_check(&self) -> ItemReport {
        let p = self.p;
        let fp = self.with_precision(1);
        let top = self.vars as u32 * (p as u32 - 1);
        let mut items = Vec::new();
        let mut n = 0;
        while p as u32 * n + top <= self.weight_bound {
            let target: Vec<Mono> = self.basis().into_iter().filter(|m| self.conj_level(m) == n).collect();
            let tindex: HashMap<&Mono, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let src_denom = self.denom * p;
            let mut src_fracs = vec![Vec::<u64>::new()];
            for _ in 0..self.vars {
                src_fracs = src_fracs
                    .into_iter()
                    .flat_map(|b| (0..src_denom).map(move |a| [b.clone(), vec![a]].concat()))
                    .collect();
            }
            let mut columns = Vec::new();
            let mut lands = true;
            for k in compositions(n, self.vars) {
                let mut dp = fp.one();
                for (j, &kj) in k.iter().enumerate() {
                    let u = graded_unit(p, kj as u64);
                    dp = fp.mul(&dp, &fp.scale(&fp.divided_power(j, p as u32 * kj), &u));
                }
                for f in &src_fracs {
                    // φ(x^{f/p^{e+1}}) = x^{f/p^e}
                    let img = fp.mul(&fp.base_power(f), &dp);
                    let mut col = vec![0u64; target.len()];
                    for (m, c) in &img.terms {
                        match tindex.get(m) {
                            Some(&r) => col[r] = c.mod_floor(&BigInt::from(p)).try_into().unwrap_or(0),
                            None => lands &= self.conj_level(m) < n,
                        }
                    }
                    columns.push(col);
                }
            }
            let mut span = FpSpan::new(p, target.len());
            for c in &columns {
                span.insert(c);
            }
            let holds = lands && columns.len() == target.len() && span.rank() == target.len();
            items.push(item(
                format!("gr_{n}"),
                holds,
                format!("source {} target {} rank {}", columns.len(), target.len(), span.rank()),
            ));
            n += 1;
        }
        ItemReport::new("conj_graded_map", items)
    }

    // ---- Frobenius ----

    /// `φ(a) ≡ a^p mod p` for every monomial whose p-th power stays under W, and for the given elements.
    pub fn phi_pth_power_check(&self, extra: &[PdElement]) -> Result<ItemReport> {
        let fp = self.with_precision(1);
        let mut items = Vec::new();
        let mut all = true;
        let mut count = 0;
        for m in self.basis() {
            let (_, img) = self.phi_mono(&m);
            if img.weight() > self.weight_bound {
                continue;
            }
            let a = fp.monomial(&m);
            all &= fp.phi(&a)? == fp.pow(&a, self.p as u32);
            count += 1;
        }
        items.push(item("monomials", all, format!("{count} monomials")));
        for (k, e) in extra.iter().enumerate() {
            let a = PdElement { terms: fp.reduce_terms(e), truncated: false };
            let lhs = fp.phi(&a)?;
            let rhs = fp.pow(&a, self.p as u32);
            items.push(item(format!("element {k}"), lhs.terms == rhs.terms, String::new()));
        }
        Ok(ItemReport::new("phi_pth_power", items))
    }

    fn reduce_terms(&self, e: &PdElement) -> BTreeMap<Mono, BigInt> {
        e.terms
            .iter()
            .map(|(m, c)| (m.clone(), self.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn working_precision(&self, i: i64) -> Result<u32> {
        let needed = self.n as i64 + i.max(0);
        if needed > self.precision_bound as i64 {
            return Err(Error::PrecisionExhausted { needed: needed as u32, bound: self.precision_bound });
        }
        Ok(needed as u32)
    }

    /// `𝒩^{≥i} = {x : φ(x) ∈ pⁱ𝔸}`: `p^{max(i − level(m), 0)} m` on each monomial.
    pub fn nygaard_acrys(&self, i: i64) -> Result<AcrysNygaard> {
        self.working_precision(i)?;
        let exponents = self
            .basis()
            .into_iter()
            .map(|m| {
                let e = (i - self.nygaard_level(&m) as i64).max(0) as u32;
                (m, e)
            })
            .collect();
        Ok(AcrysNygaard { i, exponents })
    }

    /// `φᵢ mod p` on `𝒩^i` is injective with image `Fil_i^conj` of the depth `e−1` subalgebra.
    pub fn nygaard_graded_image_check(&self, i: i64) -> Result<ItemReport> {
        if self.depth == 0 {
            return Err(Error::Invalid("graded image check needs perfection depth e ≥ 1".into()));
        }
        self.working_precision(i)?;
        let p = self.p;
        let basis = self.basis();
        let mut images = BTreeSet::new();
        let mut injective = true;
        let mut ladder = true;
        for m in &basis {
            let (c, img) = self.phi_mono(m);
            if img.weight() > self.weight_bound {
                continue;
            }
            let level = self.nygaard_level(m) as i64;
            // φᵢ(p^{max(i+1−v,0)} m), with the valuation read off the exact coefficient
            let v = p_valuation(&c, p) as i64;
            ladder &= v + (i + 1 - level).max(0) - i >= 1;
            if level > i {
                continue;
            }
            // φᵢ(p^{i−v} m) = (c / p^v)·σ(m), a unit multiple
            let unit = &c / BigInt::from(p).pow(level as u32);
            injective &= !unit.is_multiple_of(&BigInt::from(p)) && images.insert(img);
        }
        let expected: BTreeSet<Mono> = basis
            .iter()
            .filter(|m| m.frac.iter().all(|f| f % p == 0) && self.conj_level(m) as i64 <= i.max(-1))
            .cloned()
            .collect();
        let items = vec![
            item("injective", injective, format!("{} classes", images.len())),
            item("image", images == expected, format!("{} vs {}", images.len(), expected.len())),
            item("ladder", ladder, "φᵢ(𝒩^{≥i+1}) ⊆ p·𝔸"),
        ];
        Ok(ItemReport::new("nygaard_graded_image", items))
    }

    // ---- φᵢ − 1 ----

    /// σ-chains through the retained basis, each ordered along Frobenius; `1` forms its own chain.
    pub fn frobenius_chains(&self) -> Vec<Vec<Mono>> {
        let basis = self.basis();
        let present: BTreeSet<&Mono> = basis.iter().collect();
        let mut chains = Vec::new();
        for m in &basis {
            let start = match self.phi_preimage(m) {
                Some(pre) => pre == *m || !present.contains(&pre),
                None => true,
            };
            if !start {
                continue;
            }
            let mut chain = vec![m.clone()];
            loop {
                let (_, next) = self.phi_mono(chain.last().unwrap());
                if next == *chain.last().unwrap() || !present.contains(&next) {
                    break;
                }
                chain.push(next);
            }
            chains.push(chain);
        }
        chains
    }

    /// Matrix of `φᵢ − ι : 𝒩^{≥i} → 𝔸` on one chain (columns in the basis `p^{e(m)} m`), over ℤ.
    fn chain_matrix(&self, chain: &[Mono], i: i64) -> IntMatrix {
        let k = chain.len();
        let mut a = IntMatrix::zeros(k, k);
        let p = BigInt::from(self.p);
        for (t, m) in chain.iter().enumerate() {
            let level = self.nygaard_level(m) as i64;
            let e = if i >= 0 { (i - level).max(0) as u32 } else { 0 };
            let (c, next) = self.phi_mono(m);
            let phi_i = if i >= 0 { &c * p.pow(e) / p.pow(i as u32) } else { &c * p.pow(i.unsigned_abs() as u32) };
            let iota = p.pow(e);
            a[(t, t)] = -iota;
            if next == *m {
                a[(t, t)] += phi_i;
            } else if t + 1 < k {
                a[(t + 1, t)] = phi_i;
            }
        }
        a
    }

    /// Kernel and cokernel of `φᵢ − 1` on `𝒩^{≥i}/pⁿ → 𝔸/pⁿ`, chain by chain.
    pub fn phi_minus_one(&self, i: i64) -> Result<(PGroup, Vec<PdElement>, PGroup)> {
        self.working_precision(i)?;
        let ring = ModPn::new(self.p, self.n);
        let mut ker = PGroup::zero(self.p);
        let mut coker = PGroup::zero(self.p);
        let mut gens = Vec::new();
        for chain in self.frobenius_chains() {
            let a = self.chain_matrix(&chain, i);
            let (g, vs) = kernel_mod(&a, &ring);
            ker = ker.direct_sum(&g);
            coker = coker.direct_sum(&cokernel_mod(&a, &ring));
            for v in vs {
                // coordinates are in the Nygaard basis p^{e(m)} m
                let terms = chain
                    .iter()
                    .zip(&v)
                    .map(|(m, x)| {
                        let e = if i >= 0 { (i - self.nygaard_level(m) as i64).max(0) as u32 } else { 0 };
                        (m.clone(), x * BigInt::from(self.p).pow(e))
                    })
                    .collect();
                gens.push(self.from_terms(terms));
            }
        }
        Ok((ker, gens, coker))
    }

    pub fn fixed_points_at(&self, i: i64) -> Result<FixedPoints> {
        let (group, generators, _) = self.phi_minus_one(i)?;
        Ok(FixedPoints { i, group, generators, weight_bound: self.weight_bound })
    }

    /// `H⁰` of `φᵢ − 1` on `𝒩^{≥i}`, certified by recomputing at `W + p`.
    pub fn frobenius_fixed_points(&self, i: i64) -> Result<FixedPoints> {
        let a = self.fixed_points_at(i)?;
        let b = self.with_weight_bound(self.weight_bound + self.p as u32).fixed_points_at(i)?;
        if a.group != b.group {
            return Err(Error::NotStabilized(format!(
                "fixed points at W={} give {}, at W={} give {}",
                self.weight_bound,
                a.group,
                self.weight_bound + self.p as u32,
                b.group
            )));
        }
        Ok(a)
    }

    /// Dense matrix of `φᵢ − ι` on the whole retained basis (test oracle and small cases).
    pub fn phi_minus_one_dense(&self, i: i64) -> IntMatrix {
        let basis = self.basis();
        let index: HashMap<&Mono, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let mut a = IntMatrix::zeros(basis.len(), basis.len());
        for chain in self.frobenius_chains() {
            let c = self.chain_matrix(&chain, i);
            for (s, ms) in chain.iter().enumerate() {
                for (t, mt) in chain.iter().enumerate() {
                    a[(index[ms], index[mt])] = c[(s, t)].clone();
                }
            }
        }
        a
    }
}

/// All `v ∈ ℕ^parts` with `Σ v = total`.
pub fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for rest in compositions(total - first, parts - 1) {
            out.push([vec![first], rest].concat());
        }
    }
    out
}

/// Echelon span of sparse vectors over F_p.
#[derive(Clone, Debug)]
pub struct FpSpan {
    p: u64,
    dim: usize,
    /// leading column → row, monic at the leading entry
    pivots: BTreeMap<usize, BTreeMap<usize, u64>>,
}

impl FpSpan {
    pub fn new(p: u64, dim: usize) -> Self {
        FpSpan { p, dim, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Echelon rows; their span is the span of everything inserted.
    pub fn rows(&self) -> impl Iterator<Item = &BTreeMap<usize, u64>> {
        self.pivots.values()
    }

    fn inv(&self, a: u64) -> u64 {
        let mut r = 1;
        let mut b = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    fn reduce_sparse(&self, mut v: BTreeMap<usize, u64>) -> BTreeMap<usize, u64> {
        v.retain(|_, x| {
            *x %= self.p;
            *x != 0
        });
        let mut from = 0;
        while let Some((&c, &f)) = v.range(from..).next() {
            if let Some(row) = self.pivots.get(&c) {
                for (&k, &y) in row {
                    let e = v.entry(k).or_insert(0);
                    *e = (*e + (self.p - f) * y) % self.p;
                    if *e == 0 {
                        v.remove(&k);
                    }
                }
            } else {
                from = c + 1;
            }
        }
        v
    }

    fn sparse(v: &[u64]) -> BTreeMap<usize, u64> {
        v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce_sparse(Self::sparse(v)).is_empty()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        self.insert_sparse(Self::sparse(v))
    }

    pub fn insert_sparse(&mut self, v: BTreeMap<usize, u64>) -> bool {
        let mut v = self.reduce_sparse(v);
        let Some((&c, &lead)) = v.iter().next() else { return false };
        let inv = self.inv(lead);
        for x in v.values_mut() {
            *x = *x * inv % self.p;
        }
        self.pivots.insert(c, v);
        true
    }
}

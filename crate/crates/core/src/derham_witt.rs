//! Lifted model of the de Rham–Witt complex of the torus over F_p.
//!
//! `X = Ω^•` of `ℤ_p[T_1^{±1},…,T_d^{±1}]` with Frobenius lift `T ↦ T^p`, split into weight blocks.
//! The Nygaard filtration is `p^{max(i−j,0)} X^j`, the Frobenius on degree j is `p^j` times the
//! weight map `m ↦ pm`. Everything is exact over ℤ and compared p-locally; reductions mod `pⁿ`
//! happen at report time.

use crate::error::{Error, Result};
use crate::filtered_homalg::{eta, BaseTag, Complex, Scalar};
use crate::linalg::{
    pow_big, short_exact_failure, IntMatrix, Lattice, PGroup, Subquotient, SubquotientComplex,
};
use crate::report::{row, CheckReport};
use crate::torus::{KoszulTorus, Weight};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

pub const DEFAULT_PRECISION_BOUND: u32 = 64;

#[derive(Clone, Debug)]
pub struct TorusDeRham {
    pub p: u64,
    pub d: usize,
    pub n: u32,
    /// largest working precision `n + i` allowed for divided Frobenius
    pub precision_bound: u32,
    pub torus: KoszulTorus,
}

/// `𝒩^{≥i}` as the sublattices `p^{exponents[j]} X^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NygaardLattice {
    pub i: i64,
    pub exponents: Vec<u32>,
    pub lattices: Vec<Lattice>,
}

impl NygaardLattice {
    pub fn contains(&self, other: &NygaardLattice) -> bool {
        self.lattices.iter().zip(&other.lattices).all(|(a, b)| a.contains_lattice(b))
    }

    pub fn scale(&self, c: &BigInt) -> NygaardLattice {
        NygaardLattice {
            i: self.i,
            exponents: self.exponents.clone(),
            lattices: self.lattices.iter().map(|l| l.scale(c)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DlogClass {
    pub degree: usize,
    /// coordinates in the degree-i basis of the weight-0 block
    pub vector: Vec<BigInt>,
    pub closed: bool,
    pub phi_fixed: bool,
}

pub fn build_torus(p: u64, d: usize, n: u32) -> Result<TorusDeRham> {
    if d == 0 || n == 0 {
        return Err(Error::Invalid(format!("torus needs d ≥ 1 and n ≥ 1, got d={d}, n={n}")));
    }
    Ok(TorusDeRham { p, d, n, precision_bound: DEFAULT_PRECISION_BOUND, torus: KoszulTorus::new(p, d, 1)? })
}

pub fn default_box(p: u64) -> i64 {
    2 * (p * p) as i64
}

impl TorusDeRham {
    pub fn with_precision_bound(mut self, bound: u32) -> Self {
        self.precision_bound = bound;
        self
    }

    fn pk(&self, e: u32) -> BigInt {
        pow_big(self.p, e)
    }

    pub fn rank(&self, j: usize) -> usize {
        self.torus.rank(j)
    }

    /// Weight-m block over ℤ.
    pub fn block(&self, m: &[i64]) -> Complex {
        self.torus.block(m)
    }

    /// Weight-m block over ℤ/pⁿ.
    pub fn block_mod(&self, m: &[i64]) -> Result<Complex> {
        let c = self.block(m);
        let q = self.pk(self.n);
        let diffs = c.diffs.iter().map(|d| d.reduce_mod(&q)).collect();
        Complex::new(BaseTag::ModPrimePower { p: self.p, n: self.n }, 0, c.ranks.clone(), diffs)
    }

    pub fn block_cohomology(&self, m: &[i64]) -> Result<Vec<PGroup>> {
        self.block_mod(m)?.cohomology_local(self.p)
    }

    pub fn differential(&self, m: &[i64], j: usize) -> IntMatrix {
        self.torus.differential(m, j)
    }

    /// Frobenius on degree j, weight m ↦ pm.
    pub fn frobenius(&self, j: usize) -> IntMatrix {
        self.torus.frobenius(j)
    }

    /// `d_{pm} φ = φ d_m` on every weight of the box.
    pub fn frobenius_is_chain_map(&self, bound: i64) -> bool {
        self.torus.weight_box(bound).par_iter().all(|m| {
            let pm = self.torus.scale_weight(m, self.p as i64);
            (0..self.d).all(|j| {
                self.differential(&pm, j).mul(&self.frobenius(j))
                    == self.frobenius(j + 1).mul(&self.differential(m, j))
            })
        })
    }

    pub fn working_precision(&self, i: i64) -> Result<u32> {
        let needed = self.n as i64 + i.max(0);
        if needed > self.precision_bound as i64 {
            return Err(Error::PrecisionExhausted { needed: needed as u32, bound: self.precision_bound });
        }
        Ok(needed as u32)
    }

    pub fn nygaard_lattice(&self, i: i64) -> Result<NygaardLattice> {
        if i < 0 {
            return Err(Error::Invalid(format!("Nygaard index {i} is negative")));
        }
        self.working_precision(i)?;
        let exponents: Vec<u32> = (0..=self.d).map(|j| KoszulTorus::nygaard_exponent(i, j) as u32).collect();
        let lattices = exponents
            .iter()
            .enumerate()
            .map(|(j, &e)| Lattice::scaled_full(self.rank(j), &self.pk(e)))
            .collect();
        Ok(NygaardLattice { i, exponents, lattices })
    }

    /// `d(𝒩^{≥i}_m) ⊆ 𝒩^{≥i}_m` for every weight in the box.
    pub fn nygaard_is_d_stable(&self, ny: &NygaardLattice, bound: i64) -> bool {
        self.torus.weight_box(bound).par_iter().all(|m| {
            (0..self.d).all(|j| ny.lattices[j + 1].contains_lattice(&ny.lattices[j].image(&self.differential(m, j))))
        })
    }

    /// `φᵢ : 𝒩^{≥i} → X` in degree j, in the Nygaard basis, exact over ℤ.
    pub fn divided_frobenius(&self, i: i64, j: usize) -> Result<IntMatrix> {
        self.working_precision(i)?;
        self.torus.divided_frobenius(i, j)
    }

    /// `φᵢ` over ℤ/pⁿ: computed as `φ` over ℤ/p^{n+i}, divided by `pⁱ`, then projected.
    pub fn divided_frobenius_mod(&self, i: i64, j: usize) -> Result<IntMatrix> {
        let work = self.working_precision(i)?;
        let full = self.frobenius(j).mul(&self.torus.nygaard_inclusion(i, j)).reduce_mod(&self.pk(work));
        let div = self.pk(i.max(0) as u32);
        let mut out = IntMatrix::zeros(full.rows(), full.cols());
        for r in 0..full.rows() {
            for c in 0..full.cols() {
                let x = &full[(r, c)];
                if !(x % &div).is_zero() {
                    return Err(Error::DivisionFailure(format!("entry ({r},{c}) not divisible by p^{i}")));
                }
                out[(r, c)] = x / &div;
            }
        }
        let out = out.reduce_mod(&self.pk(self.n));
        if i < 0 {
            return Ok(out.scale(&self.pk(i.unsigned_abs() as u32)).reduce_mod(&self.pk(self.n)));
        }
        Ok(out)
    }

    /// Weights of the box in lexicographic order.
    pub fn weights(&self, bound: i64) -> Vec<Weight> {
        self.torus.weight_box(bound)
    }

    fn full(&self, j: usize) -> Lattice {
        Lattice::full(self.rank(j))
    }

    fn p_full(&self, j: usize, e: u32) -> Lattice {
        Lattice::scaled_full(self.rank(j), &self.pk(e))
    }

    /// `τ^{≤i}(X_w / p)` as a subquotient complex of `X_w`.
    fn conjugate_target(&self, w: &[i64], i: i64) -> Result<SubquotientComplex> {
        let diffs: Vec<IntMatrix> = (0..self.d).map(|j| self.differential(w, j)).collect();
        let top = (0..=self.d)
            .map(|j| {
                let ji = j as i64;
                if ji < i {
                    self.full(j)
                } else if ji == i {
                    if j < self.d {
                        self.full(j).preimage(&diffs[j], &self.p_full(j + 1, 1))
                    } else {
                        self.full(j)
                    }
                } else {
                    self.p_full(j, 1)
                }
            })
            .collect();
        let bottom = (0..=self.d).map(|j| self.p_full(j, 1)).collect();
        SubquotientComplex::new(diffs, top, bottom)
    }

    /// `𝒩^i = 𝒩^{≥i}/𝒩^{≥i+1}` of weight m, in Nygaard coordinates.
    fn nygaard_graded(&self, m: &[i64], i: i64) -> Result<SubquotientComplex> {
        let ny = self.torus.nygaard_block(i, m);
        let top = (0..=self.d).map(|j| self.full(j)).collect();
        let bottom = (0..=self.d)
            .map(|j| if (j as i64) <= i { self.p_full(j, 1) } else { self.full(j) })
            .collect();
        SubquotientComplex::new(ny.diffs, top, bottom)
    }

    fn p_acyclic(&self, s: &SubquotientComplex) -> bool {
        s.cohomology_local(self.p).iter().all(|g| g.is_zero())
    }

    /// `φᵢ mod p : 𝒩^i → τ^{≤i}(X/p)` is a quasi-isomorphism on every target weight `|w|∞ ≤ bound`.
    pub fn conjugate_check(&self, i: i64, bound: i64) -> Result<CheckReport> {
        if i < 0 {
            return Err(Error::Invalid(format!("conjugate filtration index {i} is negative")));
        }
        self.working_precision(i)?;
        let maps: Vec<IntMatrix> =
            (0..=self.d).map(|j| self.divided_frobenius(i, j)).collect::<Result<_>>()?;
        let rows = self
            .weights(bound)
            .par_iter()
            .map(|w| -> Result<_> {
                let target = self.conjugate_target(w, i)?;
                if !self.torus.is_p_divisible(w) {
                    return Ok(row(w, self.p_acyclic(&target), "target acyclic"));
                }
                let m: Weight = w.iter().map(|x| x / self.p as i64).collect();
                let source = self.nygaard_graded(&m, i)?;
                let holds = match source.cone(&target, &maps) {
                    Ok(cone) => self.p_acyclic(&cone),
                    Err(_) => false,
                };
                Ok(row(w, holds, "cone acyclic"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::new("conjugate", self.p, self.d, i, bound, rows))
    }

    /// `Fil^i η_p X_w = pⁱX_w ∩ η_p X_w` in ambient coordinates.
    pub fn fil_eta(&self, w: &[i64], i: i64) -> Result<Vec<Lattice>> {
        let e = eta(&Scalar::Int(BigInt::from(self.p)), &self.block(w))?;
        Ok(e
            .lattices
            .lattices
            .iter()
            .enumerate()
            .map(|(j, l)| l.intersect(&self.p_full(j, i.max(0) as u32)))
            .collect())
    }

    /// Image `φ(𝒩^{≥i})` in degree j of the target block.
    pub fn frobenius_image(&self, i: i64, j: usize) -> Lattice {
        Lattice::column_span(&self.frobenius(j).mul(&self.torus.nygaard_inclusion(i, j)))
    }

    /// `φ(𝒩^{≥i}_m) = Fil^i η_p X_{pm}` as lattices; other target weights have `η_p X_w` acyclic.
    pub fn frobenius_eta_check(&self, i: i64, bound: i64) -> Result<CheckReport> {
        if i < 0 {
            return Err(Error::Invalid(format!("Nygaard index {i} is negative")));
        }
        self.working_precision(i)?;
        let images: Vec<Lattice> = (0..=self.d).map(|j| self.frobenius_image(i, j)).collect();
        let rows = self
            .weights(bound)
            .par_iter()
            .map(|w| -> Result<_> {
                if !self.torus.is_p_divisible(w) {
                    let acyclic = self.block(w).cohomology_local(self.p)?.iter().all(|g| g.is_zero());
                    return Ok(row(w, acyclic, "eta acyclic"));
                }
                let fil = self.fil_eta(w, i)?;
                let holds = images.iter().zip(&fil).all(|(a, b)| a.p_local_eq(b, self.p));
                Ok(row(w, holds, "lattice equality"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::new("frobenius_eta", self.p, self.d, i, bound, rows))
    }

    /// Degreewise exactness of `X/𝒩^{≥i} →(p) X/𝒩^{≥i+1} → σ^{≤i}(X/p)` on each weight.
    pub fn hodge_quotient_check(&self, i: i64, bound: i64) -> Result<CheckReport> {
        if i < 0 {
            return Err(Error::Invalid(format!("Nygaard index {i} is negative")));
        }
        self.working_precision(i + 1)?;
        let quotient = |k: i64| -> Vec<Subquotient> {
            (0..=self.d)
                .map(|j| Subquotient::new(self.full(j), self.p_full(j, KoszulTorus::nygaard_exponent(k, j) as u32)))
                .collect()
        };
        let a = quotient(i);
        let b = quotient(i + 1);
        let c: Vec<Subquotient> = (0..=self.d)
            .map(|j| {
                let bottom = if j as i64 <= i { self.p_full(j, 1) } else { self.full(j) };
                Subquotient::new(self.full(j), bottom)
            })
            .collect();
        let rows = self
            .weights(bound)
            .par_iter()
            .map(|m| {
                let diffs: Vec<IntMatrix> = (0..self.d).map(|j| self.differential(m, j)).collect();
                let as_complex = |s: &[Subquotient]| {
                    SubquotientComplex::new(
                        diffs.clone(),
                        s.iter().map(|x| x.top.clone()).collect(),
                        s.iter().map(|x| x.bottom.clone()).collect(),
                    )
                };
                let complexes_ok = as_complex(&a).is_ok() && as_complex(&b).is_ok() && as_complex(&c).is_ok();
                let exact = (0..=self.d).all(|j| {
                    let f = IntMatrix::scalar(self.rank(j), &BigInt::from(self.p));
                    let g = IntMatrix::identity(self.rank(j));
                    short_exact_failure(&a[j], &b[j], &c[j], &f, &g).is_none()
                });
                row(m, complexes_ok && exact, "short exact")
            })
            .collect();
        Ok(CheckReport::new("hodge_quotient", self.p, self.d, i, bound, rows))
    }

    /// `dlog T^{a_1} ∧ … ∧ dlog T^{a_i}` with its closedness and `φᵢ`-fixedness.
    pub fn dlog_class(&self, vectors: &[Vec<i64>]) -> Result<DlogClass> {
        let vector = self.torus.dlog_class(vectors)?;
        let i = vectors.len();
        let zero = vec![0i64; self.d];
        let closed = i == self.d || self.differential(&zero, i).apply(&vector).iter().all(|x| x.is_zero());
        let phi_fixed = self.divided_frobenius(i as i64, i)?.apply(&vector) == vector;
        Ok(DlogClass { degree: i, vector, closed, phi_fixed })
    }
}

//! q-de Rham Koszul complexes of tori, their ξ-adic Nygaard filtration and divided Frobenius.
//!
//! Weight m carries `∇_k = [m_k]_{q^p}`; with this normalisation `T ↦ T^p`, `q ↦ q^p` is a
//! chain map scaling `dlog T_I` by `ξ̃^{|I|}`. Modulo μ everything collapses to the integral
//! torus of `derham_witt`.

use super::base::{QBase, QElem};
use crate::error::{Error, Result};
use crate::filtered_homalg::{eta, b_matrix_to_z, BaseTag, Complex, Scalar};
use crate::linalg::{IntMatrix, Lattice, SubquotientComplex};
use crate::report::{row, CheckReport};
use crate::torus::{KoszulTorus, Weight};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct QTorus {
    pub p: u64,
    pub d: usize,
    pub torus: KoszulTorus,
}

/// `𝒩^{≥i}` as `ξ^{exponents[j]}` times degree j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNygaard {
    pub i: i64,
    pub exponents: Vec<u64>,
    pub lattices: Vec<Lattice>,
}

impl QNygaard {
    pub fn contains(&self, other: &QNygaard) -> bool {
        self.lattices.iter().zip(&other.lattices).all(|(a, b)| a.contains_lattice(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LnuReport {
    pub n: u32,
    pub n_trunc: usize,
    /// `φ(X) ⊆ η_ξ̃ X`
    pub frobenius_in_eta: CheckReport,
    /// `φ(𝒩^{≥i}) ⊆ Fil^i η_ξ̃ X`, one report per i
    pub nygaard_in_fil: Vec<CheckReport>,
    /// graded pieces, one report per i
    pub graded: Vec<CheckReport>,
    pub holds: bool,
}

pub fn build_qtorus(d: usize, p: u64, n_trunc: usize) -> Result<QTorus> {
    if d == 0 {
        return Err(Error::Invalid("q-torus needs d ≥ 1".into()));
    }
    if n_trunc < 2 {
        return Err(Error::Invalid(format!("q-torus needs (q−1)-adic order N ≥ 2, got {n_trunc}")));
    }
    Ok(QTorus { p, d, torus: KoszulTorus::new(p, d, n_trunc)? })
}

/// Keep the μ-coordinates `< n_to` of every B-block of a matrix over `B_{n_from}`.
pub fn truncate_matrix(m: &IntMatrix, n_from: usize, n_to: usize) -> IntMatrix {
    let rows: Vec<usize> = (0..m.rows()).filter(|r| r % n_from < n_to).collect();
    let cols: Vec<usize> = (0..m.cols()).filter(|c| c % n_from < n_to).collect();
    let mut out = IntMatrix::zeros(rows.len(), cols.len());
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            out[(a, b)] = m[(r, c)].clone();
        }
    }
    out
}

impl QTorus {
    pub fn base(&self) -> &QBase {
        &self.torus.base
    }

    pub fn n_trunc(&self) -> usize {
        self.torus.n_trunc()
    }

    pub fn z_rank(&self, j: usize) -> usize {
        self.torus.z_rank(j)
    }

    pub fn block(&self, m: &[i64]) -> Complex {
        self.torus.block(m)
    }

    pub fn differential(&self, m: &[i64], j: usize) -> IntMatrix {
        self.torus.differential(m, j)
    }

    /// Semilinear Frobenius on degree j, weight m ↦ pm.
    pub fn frobenius(&self, j: usize) -> IntMatrix {
        self.torus.frobenius(j)
    }

    pub fn frobenius_is_chain_map(&self, bound: i64) -> bool {
        self.torus.weight_box(bound).par_iter().all(|m| {
            let pm = self.torus.scale_weight(m, self.p as i64);
            (0..self.d).all(|j| {
                self.differential(&pm, j).mul(&self.frobenius(j))
                    == self.frobenius(j + 1).mul(&self.differential(m, j))
            })
        })
    }

    /// Reduction modulo μ (q ↦ 1).
    pub fn specialize(&self, m: &IntMatrix) -> IntMatrix {
        truncate_matrix(m, self.n_trunc(), 1)
    }

    pub fn q_nygaard(&self, i: i64) -> Result<QNygaard> {
        if i < 0 {
            return Err(Error::Invalid(format!("Nygaard index {i} is negative")));
        }
        let exponents: Vec<u64> = (0..=self.d).map(|j| KoszulTorus::nygaard_exponent(i, j)).collect();
        let lattices = (0..=self.d).map(|j| self.torus.nygaard_lattice(i, j)).collect();
        Ok(QNygaard { i, exponents, lattices })
    }

    pub fn nygaard_inclusion(&self, i: i64, j: usize) -> IntMatrix {
        self.torus.nygaard_inclusion(i, j)
    }

    /// `𝒩^{≥i}` of weight m in the basis `ξ^{max(i−j,0)} dlog T_I`.
    pub fn nygaard_block(&self, i: i64, m: &[i64]) -> Complex {
        self.torus.nygaard_block(i, m)
    }

    /// `φᵢ = ξ̃^{−i}φ` on `𝒩^{≥i}`, degree j, exact division.
    pub fn q_divided_frobenius(&self, i: i64, j: usize) -> Result<IntMatrix> {
        self.torus.divided_frobenius(i, j)
    }

    fn b_scalar(&self, j: usize, a: &QElem) -> IntMatrix {
        self.torus.scalar(j, a)
    }

    fn xi_tilde_pow(&self, e: u64) -> QElem {
        self.base().pow(&self.base().xi_tilde(), e)
    }

    /// `φ^*X_m`: the weight-m block with differential coefficients `φ([m_k]_{q^p})`.
    pub fn twisted_block(&self, m: &[i64]) -> Complex {
        let base = self.base();
        let ranks: Vec<usize> = (0..=self.d).map(|j| self.torus.rank(j)).collect();
        let diffs = (0..self.d)
            .map(|j| {
                let bm: Vec<Vec<QElem>> = self
                    .torus
                    .differential_b(m, j)
                    .iter()
                    .map(|r| r.iter().map(|x| base.phi(x)).collect())
                    .collect();
                b_matrix_to_z(base, &bm)
            })
            .collect();
        Complex::new(self.torus.tag(), 0, ranks, diffs).expect("twisted Koszul complex")
    }

    fn eta_lattices(&self, w: &[i64]) -> Result<Vec<Lattice>> {
        let e = eta(&Scalar::Q(self.base().xi_tilde()), &self.block(w))?;
        Ok(e.lattices.lattices)
    }

    /// `Fil^i η_ξ̃ X_w = ξ̃^i X_w ∩ η_ξ̃ X_w`.
    pub fn fil_eta(&self, w: &[i64], i: i64) -> Result<Vec<Lattice>> {
        let eta = self.eta_lattices(w)?;
        Ok(eta
            .into_iter()
            .enumerate()
            .map(|(j, l)| {
                let s = Lattice::column_span(&self.b_scalar(j, &self.xi_tilde_pow(i.max(0) as u64)));
                l.intersect(&s)
            })
            .collect())
    }

    fn p_acyclic(&self, s: &SubquotientComplex) -> bool {
        s.cohomology_local(self.p).iter().all(|g| g.is_zero())
    }

    fn source_weight(&self, w: &[i64]) -> Option<Weight> {
        self.torus.is_p_divisible(w).then(|| w.iter().map(|x| x / self.p as i64).collect())
    }

    /// The identification of `𝒩^{≥•}` with the décalée filtration of `η_ξ̃`, on target weights in the box.
    pub fn lnu_identification_check(&self, i_max: i64, n: u32, bound: i64) -> Result<LnuReport> {
        let weights = self.torus.weight_box(bound);
        let zero_box: Vec<Weight> = weights.iter().filter(|w| self.torus.is_p_divisible(w)).cloned().collect();

        let images: Vec<Lattice> =
            (0..=self.d).map(|j| Lattice::column_span(&self.frobenius(j))).collect();
        let a_rows = zero_box
            .par_iter()
            .map(|w| -> Result<_> {
                let eta = self.eta_lattices(w)?;
                Ok(row(w, images.iter().zip(&eta).all(|(x, e)| e.contains_lattice(x)), "containment"))
            })
            .collect::<Result<Vec<_>>>()?;
        let frobenius_in_eta = CheckReport::new("frobenius_in_eta", self.p, self.d, 0, bound, a_rows);

        let mut nygaard_in_fil = Vec::new();
        let mut graded = Vec::new();
        for i in 0..=i_max {
            let imgs: Vec<Lattice> = (0..=self.d)
                .map(|j| Lattice::column_span(&self.frobenius(j).mul(&self.nygaard_inclusion(i, j))))
                .collect();
            let rows = zero_box
                .par_iter()
                .map(|w| -> Result<_> {
                    let fil = self.fil_eta(w, i)?;
                    Ok(row(w, imgs.iter().zip(&fil).all(|(x, f)| f.contains_lattice(x)), "containment"))
                })
                .collect::<Result<Vec<_>>>()?;
            nygaard_in_fil.push(CheckReport::new("nygaard_in_fil", self.p, self.d, i, bound, rows));

            let rows = weights
                .par_iter()
                .map(|w| self.graded_row(w, i))
                .collect::<Result<Vec<_>>>()?;
            graded.push(CheckReport::new("graded", self.p, self.d, i, bound, rows));
        }
        let holds = frobenius_in_eta.holds
            && nygaard_in_fil.iter().all(|r| r.holds)
            && graded.iter().all(|r| r.holds);
        Ok(LnuReport { n, n_trunc: self.n_trunc(), frobenius_in_eta, nygaard_in_fil, graded, holds })
    }

    /// `gr^i` of the target as a subquotient of `X_w`.
    pub fn graded_target(&self, w: &[i64], i: i64) -> Result<SubquotientComplex> {
        let c = self.block(w);
        SubquotientComplex::new(c.diffs.clone(), self.fil_eta(w, i)?, self.fil_eta(w, i + 1)?)
    }

    /// `gr^i φ^*𝒩` in the basis `ξ̃^{max(i−j,0)} dlog T_I`.
    fn graded_source(&self, m: &[i64], i: i64) -> Result<SubquotientComplex> {
        let tw = self.twisted_block(m);
        let diffs = (0..self.d)
            .map(|j| {
                let drop = KoszulTorus::nygaard_exponent(i, j) - KoszulTorus::nygaard_exponent(i, j + 1);
                self.b_scalar(j + 1, &self.xi_tilde_pow(drop)).mul(&tw.diffs[j])
            })
            .collect();
        let top = (0..=self.d).map(|j| Lattice::full(self.z_rank(j))).collect();
        let bottom = (0..=self.d)
            .map(|j| {
                if (j as i64) <= i {
                    Lattice::column_span(&self.b_scalar(j, &self.base().xi_tilde()))
                } else {
                    Lattice::full(self.z_rank(j))
                }
            })
            .collect();
        SubquotientComplex::new(diffs, top, bottom)
    }

    fn graded_row(&self, w: &[i64], i: i64) -> Result<crate::report::WeightRow> {
        let target = self.graded_target(w, i)?;
        let Some(m) = self.source_weight(w) else {
            return Ok(row(w, self.p_acyclic(&target), "target acyclic"));
        };
        let source = self.graded_source(&m, i)?;
        let maps: Vec<IntMatrix> = (0..=self.d)
            .map(|j| {
                let e = j as u64 + KoszulTorus::nygaard_exponent(i, j);
                self.b_scalar(j, &self.xi_tilde_pow(e))
            })
            .collect();
        let holds = match source.cone(&target, &maps) {
            Ok(cone) => self.p_acyclic(&cone),
            Err(_) => false,
        };
        Ok(row(w, holds, "cone acyclic"))
    }

    pub fn tag(&self) -> BaseTag {
        self.torus.tag()
    }
}

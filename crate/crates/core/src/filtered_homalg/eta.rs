//! The décalage operator η_f on complexes of f-torsion-free modules.

use super::complex::{BaseTag, Complex, LatticeComplex, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{AbelianGroup, IntMatrix, Lattice, PGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// `η_f C` as lattices inside the ambient `C`, with a free presentation.
///
/// When `C` starts in negative degree the lattices are `f^{-a} η_f C` for the start degree `a`;
/// `scale_exp` records `a` (it is 0 otherwise).
#[derive(Clone, Debug)]
pub struct EtaComplex {
    pub lattices: LatticeComplex,
    pub scale_exp: i32,
    pub complex: Complex,
    /// columns are lattice bases in ambient coordinates
    pub inclusion: Vec<IntMatrix>,
}

impl EtaComplex {
    pub fn cohomology(&self) -> Result<Vec<AbelianGroup>> {
        self.complex.cohomology_z()
    }

    /// Restrict an ambient operator (multiplication by a ring element) to the free presentation.
    pub fn transport(&self, ops: &[IntMatrix]) -> Result<Vec<IntMatrix>> {
        ops.iter().enumerate().map(|(k, m)| self.lattices.transport(k, m)).collect()
    }
}

fn check_nonzerodivisor(f: &Scalar, c: &Complex) -> Result<()> {
    match (&c.base, f) {
        (BaseTag::ModPrimePower { p, .. }, Scalar::Int(x)) => {
            if x.is_multiple_of(&BigInt::from(*p)) {
                Err(Error::NotNonzerodivisor)
            } else {
                Ok(())
            }
        }
        (BaseTag::Integers, Scalar::Int(x)) => {
            if x.is_zero() {
                Err(Error::NotNonzerodivisor)
            } else {
                Ok(())
            }
        }
        (BaseTag::QTruncated { p, n_trunc }, _) => {
            let m = match f {
                Scalar::Int(x) => IntMatrix::scalar(*n_trunc, x),
                Scalar::Q(x) => crate::q_derham::QBase::new(*p, *n_trunc).mult_matrix(x),
            };
            if m.det().is_zero() {
                Err(Error::NotNonzerodivisor)
            } else {
                Ok(())
            }
        }
        _ => Err(Error::Invalid("scalar does not belong to the base ring".into())),
    }
}

fn mat_pow(m: &IntMatrix, e: usize) -> IntMatrix {
    let mut out = IntMatrix::identity(m.rows());
    for _ in 0..e {
        out = out.mul(m);
    }
    out
}

/// `L^k = {x ∈ F^{e_k} C^k : dx ∈ F^{e_k+1} C^{k+1}}` with `e_k = k + max(start, 0)`.
pub(crate) fn eta_lattices(f_mats: &[IntMatrix], c: &Complex) -> Result<LatticeComplex> {
    let shift = c.start.max(0) as usize;
    let scaled: Vec<Lattice> = (0..c.len())
        .map(|k| Lattice::full(c.z_rank(k)).image(&mat_pow(&f_mats[k], k + shift)))
        .collect();
    let lattices = (0..c.len())
        .map(|k| {
            if k < c.diffs.len() {
                scaled[k].preimage(&c.diffs[k], &scaled[k + 1])
            } else {
                scaled[k].clone()
            }
        })
        .collect();
    Ok(LatticeComplex { start: c.start, diffs: c.diffs.clone(), lattices })
}

fn finish(lattices: LatticeComplex, start: i32) -> Result<EtaComplex> {
    debug_assert!(lattices.is_d_stable());
    let (complex, inclusion) = lattices.to_free()?;
    Ok(EtaComplex { lattices, scale_exp: start.min(0), complex, inclusion })
}

pub fn eta(f: &Scalar, c: &Complex) -> Result<EtaComplex> {
    check_nonzerodivisor(f, c)?;
    if let BaseTag::ModPrimePower { .. } = c.base {
        // f is a unit, so fⁿCⁿ = Cⁿ
        return finish(c.free_lattices(), c.start).map(|mut e| {
            e.complex.base = c.base.clone();
            e
        });
    }
    let f_mats: Vec<IntMatrix> = (0..c.len()).map(|k| c.mult_matrix(f, k)).collect::<Result<_>>()?;
    finish(eta_lattices(&f_mats, c)?, c.start)
}

/// η for a ℤ-complex carrying an explicit f-action (one matrix per degree).
pub fn eta_by_action(f_mats: &[IntMatrix], c: &Complex) -> Result<EtaComplex> {
    if f_mats.len() != c.len() {
        return Err(Error::LengthMismatch(f_mats.len(), c.len()));
    }
    for (k, m) in f_mats.iter().enumerate() {
        if m.rows() != c.z_rank(k) || m.cols() != c.z_rank(k) {
            return Err(Error::Dimension(format!("action matrix {k}")));
        }
        if m.rows() > 0 && m.det().is_zero() {
            return Err(Error::NotNonzerodivisor);
        }
        if k < c.diffs.len() && c.diffs[k].mul(m) != f_mats[k + 1].mul(&c.diffs[k]) {
            return Err(Error::Invalid(format!("action does not commute with d in degree {k}")));
        }
    }
    finish(eta_lattices(f_mats, c)?, c.start)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaLawRow {
    pub degree: i32,
    pub eta: AbelianGroup,
    /// `H/H[f] ≅ f·H`, computed from cocycles and coboundaries of `C`
    pub expected: AbelianGroup,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct EtaLawReport {
    pub rows: Vec<EtaLawRow>,
    pub holds: bool,
}

fn pgroup_to_abelian(g: &PGroup) -> AbelianGroup {
    let mut torsion: Vec<BigInt> = g.exponents.iter().map(|&e| BigInt::from(g.p).pow(e)).collect();
    torsion.sort();
    AbelianGroup { free_rank: g.free_rank, torsion }
}

/// Checks `H^j(η_f C) ≅ H^j(C)/H^j(C)[f]` degree by degree.
pub fn eta_cohomology_law_check(f: &Scalar, c: &Complex) -> Result<EtaLawReport> {
    let e = eta(f, c)?;
    let (eta_h, expected): (Vec<AbelianGroup>, Vec<AbelianGroup>) = match &c.base {
        BaseTag::ModPrimePower { p, .. } => {
            let h: Vec<AbelianGroup> = c.cohomology_local(*p)?.iter().map(pgroup_to_abelian).collect();
            let he: Vec<AbelianGroup> = e.complex.cohomology_local(*p)?.iter().map(pgroup_to_abelian).collect();
            (he, h)
        }
        _ => {
            let mut exp = Vec::new();
            for k in 0..c.len() {
                let (z, b) = c.cycles_and_boundaries(k);
                let fz = z.image(&c.mult_matrix(f, k)?);
                let fzb = fz.sum(&b);
                exp.push(fzb.quotient(&b));
            }
            (e.cohomology()?, exp)
        }
    };
    let rows: Vec<EtaLawRow> = eta_h
        .into_iter()
        .zip(expected)
        .enumerate()
        .map(|(k, (eta, expected))| EtaLawRow {
            degree: c.start + k as i32,
            holds: eta == expected,
            eta,
            expected,
        })
        .collect();
    let holds = rows.iter().all(|r| r.holds);
    Ok(EtaLawReport { rows, holds })
}

/// The ambient multiplication matrices of `f` on each term.
pub fn action_matrices(f: &Scalar, c: &Complex) -> Result<Vec<IntMatrix>> {
    (0..c.len()).map(|k| c.mult_matrix(f, k)).collect()
}

//! Koszul complexes of the d-dimensional torus over B = ℤ[q]/((q−1)^N), one block per weight.
//!
//! Truncation N = 1 gives the integral de Rham complex with Frobenius lift `T ↦ T^p`;
//! larger N gives the q-de Rham complex. Degree-j basis: `dlog T_I` for `|I| = j`, with
//! `I` ordered by increasing bitmask rank; `dlog T_k ∧ dlog T_I = (−1)^{#{i∈I : i<k}} dlog T_{I∪k}`.
//! B-modules are stored over ℤ via the basis `μ^k e_I` (μ-index fastest).

use crate::error::{Error, Result};
use crate::filtered_homalg::{BaseTag, Complex};
use crate::linalg::{IntMatrix, Lattice};
use crate::q_derham::{QBase, QElem};
use num_bigint::BigInt;

pub type Weight = Vec<i64>;

#[derive(Clone, Debug)]
pub struct KoszulTorus {
    pub p: u64,
    pub d: usize,
    pub base: QBase,
    /// subsets of each size as bitmasks, ascending
    subsets: Vec<Vec<u32>>,
}

impl KoszulTorus {
    pub fn new(p: u64, d: usize, n_trunc: usize) -> Result<Self> {
        if d == 0 || d > 16 {
            return Err(Error::Invalid(format!("torus dimension {d} out of range")));
        }
        let mut subsets = vec![Vec::new(); d + 1];
        for mask in 0u32..(1 << d) {
            subsets[mask.count_ones() as usize].push(mask);
        }
        Ok(KoszulTorus { p, d, base: QBase::new(p, n_trunc), subsets })
    }

    pub fn n_trunc(&self) -> usize {
        self.base.n_trunc
    }

    pub fn subsets(&self, j: usize) -> &[u32] {
        &self.subsets[j]
    }

    pub fn rank(&self, j: usize) -> usize {
        self.subsets[j].len()
    }

    pub fn z_rank(&self, j: usize) -> usize {
        self.rank(j) * self.n_trunc()
    }

    pub fn index_of(&self, mask: u32) -> usize {
        let j = mask.count_ones() as usize;
        self.subsets[j].binary_search(&mask).expect("subset present")
    }

    /// Coefficient of `∇_k` on weight `m_k`: `[m_k]_{q^p}`, which is `m_k` when N = 1.
    pub fn coefficient(&self, mk: i64) -> QElem {
        self.base.q_integer_base(mk, self.p)
    }

    fn b_to_z(&self, m: &[Vec<QElem>]) -> IntMatrix {
        crate::filtered_homalg::b_matrix_to_z(&self.base, m)
    }

    /// Matrix over B of `d : Ω^j_m → Ω^{j+1}_m`.
    pub fn differential_b(&self, m: &[i64], j: usize) -> Vec<Vec<QElem>> {
        let zero = self.base.zero();
        let mut out = vec![vec![zero; self.rank(j)]; self.rank(j + 1)];
        let coeffs: Vec<QElem> = m.iter().map(|&mk| self.coefficient(mk)).collect();
        for (col, &mask) in self.subsets[j].iter().enumerate() {
            for (k, c) in coeffs.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let below = (mask & ((1u32 << k) - 1)).count_ones();
                let row = self.index_of(mask | (1 << k));
                out[row][col] = if below % 2 == 0 { c.clone() } else { self.base.neg(c) };
            }
        }
        out
    }

    pub fn differential(&self, m: &[i64], j: usize) -> IntMatrix {
        self.b_to_z(&self.differential_b(m, j))
    }

    pub fn tag(&self) -> BaseTag {
        if self.n_trunc() == 1 {
            BaseTag::Integers
        } else {
            BaseTag::QTruncated { p: self.p, n_trunc: self.n_trunc() }
        }
    }

    /// Weight-m block, degrees `0..=d`.
    pub fn block(&self, m: &[i64]) -> Complex {
        let ranks = (0..=self.d).map(|j| self.rank(j)).collect();
        let diffs = (0..self.d).map(|j| self.differential(m, j)).collect();
        Complex::new(self.tag(), 0, ranks, diffs).expect("Koszul complex")
    }

    fn block_diag(&self, j: usize, m: &IntMatrix) -> IntMatrix {
        let n = self.n_trunc();
        let mut out = IntMatrix::zeros(self.z_rank(j), self.z_rank(j));
        for t in 0..self.rank(j) {
            out.set_block(t * n, t * n, m);
        }
        out
    }

    /// Multiplication by a ring element on degree j.
    pub fn scalar(&self, j: usize, a: &QElem) -> IntMatrix {
        self.block_diag(j, &self.base.mult_matrix(a))
    }

    pub fn xi(&self) -> QElem {
        self.base.xi()
    }

    pub fn xi_tilde(&self) -> QElem {
        self.base.xi_tilde()
    }

    /// Frobenius from weight m to weight pm in degree j: `b·dlog T_I ↦ ξ̃^j φ(b)·dlog T_I`.
    pub fn frobenius(&self, j: usize) -> IntMatrix {
        let xt = self.base.pow(&self.xi_tilde(), j as u64);
        let m = self.base.mult_matrix(&xt).mul(&self.base.phi_matrix());
        self.block_diag(j, &m)
    }

    /// B-linearised Frobenius: `b ⊗ dlog T_I ↦ ξ̃^j b·dlog T_I`.
    pub fn frobenius_linear(&self, j: usize) -> IntMatrix {
        self.scalar(j, &self.base.pow(&self.xi_tilde(), j as u64))
    }

    pub fn nygaard_exponent(i: i64, j: usize) -> u64 {
        (i - j as i64).max(0) as u64
    }

    /// Inclusion of the Nygaard basis `ξ^{max(i−j,0)} e_I` in degree j.
    pub fn nygaard_inclusion(&self, i: i64, j: usize) -> IntMatrix {
        self.scalar(j, &self.base.pow(&self.xi(), Self::nygaard_exponent(i, j)))
    }

    pub fn nygaard_lattice(&self, i: i64, j: usize) -> Lattice {
        Lattice::column_span(&self.nygaard_inclusion(i, j))
    }

    /// `𝒩^{≥i}` of the weight-m block in its own basis.
    pub fn nygaard_block(&self, i: i64, m: &[i64]) -> Complex {
        let ranks = (0..=self.d).map(|j| self.rank(j)).collect();
        let diffs = (0..self.d)
            .map(|j| {
                let drop = Self::nygaard_exponent(i, j) - Self::nygaard_exponent(i, j + 1);
                let xi = self.base.pow(&self.xi(), drop);
                self.scalar(j + 1, &xi).mul(&self.differential(m, j))
            })
            .collect();
        Complex::new(self.tag(), 0, ranks, diffs).expect("Nygaard complex")
    }

    /// `φ_i = ξ̃^{−i}φ` from `𝒩^{≥i}` (Nygaard basis) of weight m to weight pm, degree j.
    /// For `i < 0` this is `ξ̃^{|i|}φ`.
    pub fn divided_frobenius(&self, i: i64, j: usize) -> Result<IntMatrix> {
        let full = self.frobenius(j).mul(&self.nygaard_inclusion(i, j));
        if i <= 0 {
            let xt = self.base.pow(&self.xi_tilde(), i.unsigned_abs());
            return Ok(self.scalar(j, &xt).mul(&full));
        }
        let div = self.base.pow(&self.xi_tilde(), i as u64);
        let n = self.n_trunc();
        let mut out = IntMatrix::zeros(full.rows(), full.cols());
        for c in 0..full.cols() {
            let col = full.column(c);
            for t in 0..self.rank(j) {
                let h = QElem(col[t * n..(t + 1) * n].to_vec());
                let g = self.base.div_exact(&h, &div)?;
                for (k, x) in g.0.into_iter().enumerate() {
                    out[(t * n + k, c)] = x;
                }
            }
        }
        Ok(out)
    }

    /// All weights with `|m|∞ ≤ bound`, lexicographic.
    pub fn weight_box(&self, bound: i64) -> Vec<Weight> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.d {
            let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
            for w in &out {
                for x in -bound..=bound {
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    pub fn is_p_divisible(&self, m: &[i64]) -> bool {
        m.iter().all(|&x| x % self.p as i64 == 0)
    }

    pub fn scale_weight(&self, m: &[i64], k: i64) -> Weight {
        m.iter().map(|&x| x * k).collect()
    }

    /// `dlog T^{a_1} ∧ … ∧ dlog T^{a_i}` as a weight-0 element of degree i (B-coordinates, μ-free).
    pub fn dlog_class(&self, vectors: &[Vec<i64>]) -> Result<Vec<BigInt>> {
        let i = vectors.len();
        if i > self.d {
            return Err(Error::Invalid(format!("{i} dlog factors on a {}-dimensional torus", self.d)));
        }
        for v in vectors {
            if v.len() != self.d {
                return Err(Error::LengthMismatch(v.len(), self.d));
            }
        }
        let n = self.n_trunc();
        let mut out = vec![BigInt::from(0); self.z_rank(i)];
        for (t, &mask) in self.subsets[i].iter().enumerate() {
            let cols: Vec<usize> = (0..self.d).filter(|k| mask & (1 << k) != 0).collect();
            // factor order a_1 ∧ … ∧ a_i against increasing indices: determinant of a_r[cols[s]]
            let m = IntMatrix::from_i64_rows(
                &vectors.iter().map(|v| cols.iter().map(|&c| v[c]).collect()).collect::<Vec<_>>(),
            );
            out[t * n] = if i == 0 { BigInt::from(1) } else { m.det() };
        }
        Ok(out)
    }
}

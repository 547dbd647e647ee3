//! Sublattices of ℤ^r in Hermite form.

use super::group::{AbelianGroup, PGroup};
use super::hermite::{row_hnf, solve_in_hnf};
use super::matrix::IntMatrix;
use super::smith::smith_invariants;
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice(dim {}, ", self.dim)?;
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        write!(f, "{})", rows.join(" "))
    }
}

impl Lattice {
    pub fn span(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), dim, "generator length does not match ambient rank");
        }
        Lattice { dim, basis: row_hnf(gens, dim) }
    }

    /// Lattice spanned by the columns of `m`.
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::span(m.rows(), &m.col_vecs())
    }

    pub fn full(dim: usize) -> Self {
        Self::scaled_full(dim, &BigInt::from(1))
    }

    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn scaled_full(dim: usize, c: &BigInt) -> Self {
        let gens: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = c.clone();
                v
            })
            .collect();
        Self::span(dim, &gens)
    }

    /// `⊕ c_i ℤ e_i`
    pub fn diagonal(scales: &[BigInt]) -> Self {
        let dim = scales.len();
        let gens: Vec<Vec<BigInt>> = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = scales[i].clone();
                v
            })
            .collect();
        Self::span(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Basis vectors as columns of a `dim × rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.basis, self.dim)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        solve_in_hnf(&self.basis, v).is_some()
    }

    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        solve_in_hnf(&self.basis, v)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        Lattice::span(self.dim, &g)
    }

    pub fn scale(&self, c: &BigInt) -> Lattice {
        let g: Vec<Vec<BigInt>> = self.basis.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        Lattice::span(self.dim, &g)
    }

    /// `A(L)` for `A : ℤ^dim → ℤ^rows`.
    pub fn image(&self, a: &IntMatrix) -> Lattice {
        assert_eq!(a.cols(), self.dim);
        let g: Vec<Vec<BigInt>> = self.basis.iter().map(|b| a.apply(b)).collect();
        Lattice::span(a.rows(), &g)
    }

    /// `{x ∈ L : A x ∈ M}`
    pub fn preimage(&self, a: &IntMatrix, target: &Lattice) -> Lattice {
        assert_eq!(a.cols(), self.dim);
        assert_eq!(a.rows(), target.dim);
        let m = a.rows();
        let k = self.basis.len();
        let mut rows = Vec::with_capacity(k + target.basis.len());
        for (i, b) in self.basis.iter().enumerate() {
            let mut v = a.apply(b);
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::from(1);
            v.extend(e);
            rows.push(v);
        }
        for t in &target.basis {
            let mut v = t.clone();
            v.extend(vec![BigInt::zero(); k]);
            rows.push(v);
        }
        let h = row_hnf(&rows, m + k);
        let gens: Vec<Vec<BigInt>> = h
            .into_iter()
            .filter(|r| r[..m].iter().all(|x| x.is_zero()))
            .map(|r| {
                let c = &r[m..];
                let mut x = vec![BigInt::zero(); self.dim];
                for (ci, b) in c.iter().zip(&self.basis) {
                    if ci.is_zero() {
                        continue;
                    }
                    for (xj, bj) in x.iter_mut().zip(b) {
                        *xj += ci * bj;
                    }
                }
                x
            })
            .collect();
        Lattice::span(self.dim, &gens)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.preimage(&IntMatrix::identity(self.dim), other)
    }

    /// `{x ∈ ℤ^dim : A x = 0}` intersected with this lattice.
    pub fn kernel_of(&self, a: &IntMatrix) -> Lattice {
        self.preimage(a, &Lattice::zero(a.rows()))
    }

    /// `L / M` for `M ⊆ L`.
    pub fn quotient(&self, sub: &Lattice) -> AbelianGroup {
        assert_eq!(self.dim, sub.dim);
        let k = self.rank();
        if k == 0 {
            return AbelianGroup::zero();
        }
        let coords: Vec<Vec<BigInt>> = sub
            .basis
            .iter()
            .map(|b| solve_in_hnf(&self.basis, b).expect("quotient: sublattice is not contained"))
            .collect();
        let rel = IntMatrix::from_columns(&coords, k);
        AbelianGroup::from_relations(k, &smith_invariants(&rel))
    }

    /// `L ⊗ ℤ_(p) = M ⊗ ℤ_(p)`
    pub fn p_local_eq(&self, other: &Lattice, p: u64) -> bool {
        self.p_local_contains(other, p) && other.p_local_contains(self, p)
    }

    /// `M ⊗ ℤ_(p) ⊆ L ⊗ ℤ_(p)`
    pub fn p_local_contains(&self, other: &Lattice, p: u64) -> bool {
        let s = self.sum(other);
        s.quotient(self).localize(p).is_zero()
    }

    /// Direct sum inside `ℤ^{dim + other.dim}`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let d = self.dim + other.dim;
        let mut g = Vec::new();
        for b in &self.basis {
            let mut v = b.clone();
            v.extend(vec![BigInt::zero(); other.dim]);
            g.push(v);
        }
        for b in &other.basis {
            let mut v = vec![BigInt::zero(); self.dim];
            v.extend(b.iter().cloned());
            g.push(v);
        }
        Lattice::span(d, &g)
    }

    /// Index of the finite quotient as a p-group, or `None` when ranks differ.
    pub fn index_in(&self, sup: &Lattice, p: u64) -> Option<PGroup> {
        let q = sup.quotient(self);
        if q.free_rank > 0 {
            None
        } else {
            Some(q.localize(p))
        }
    }
}

use crate::error::{Error, Result};
use crate::linalg::{
    cohomology_mod, cohomology_z, AbelianGroup, IntMatrix, Lattice, ModPn, PGroup, SubquotientComplex,
};
use crate::q_derham::base::{QBase, QElem};
use num_bigint::BigInt;

/// Coefficient ring of a complex. B-modules are stored through restriction of scalars to ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseTag {
    Integers,
    ModPrimePower { p: u64, n: u32 },
    QTruncated { p: u64, n_trunc: usize },
}

impl BaseTag {
    /// ℤ-rank of a free rank-one module.
    pub fn z_rank(&self) -> usize {
        match self {
            BaseTag::QTruncated { n_trunc, .. } => *n_trunc,
            _ => 1,
        }
    }
}

/// Ring element used for η and for f-adic filtrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Int(BigInt),
    Q(QElem),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Int(BigInt::from(v))
    }
}

/// Bounded cochain complex of finite free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    pub base: BaseTag,
    pub start: i32,
    /// ranks over the base ring
    pub ranks: Vec<usize>,
    /// ℤ-matrices, `diffs[k] : C^{start+k} → C^{start+k+1}`
    pub diffs: Vec<IntMatrix>,
}

impl Complex {
    pub fn new(base: BaseTag, start: i32, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        let c = Complex { base, start, ranks, diffs };
        c.validate()?;
        Ok(c)
    }

    pub fn integers(start: i32, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self> {
        Self::new(BaseTag::Integers, start, ranks, diffs)
    }

    /// Complex over B from matrices of ring elements (`mats[k][row][col]`).
    pub fn from_b_matrices(base: &QBase, start: i32, ranks: Vec<usize>, mats: &[Vec<Vec<QElem>>]) -> Result<Self> {
        let diffs = mats.iter().map(|m| b_matrix_to_z(base, m)).collect();
        let tag = BaseTag::QTruncated { p: base.p, n_trunc: base.n_trunc };
        let cols: Vec<usize> = mats.iter().map(|m| m.first().map_or(0, |r| r.len())).collect();
        for (k, m) in mats.iter().enumerate() {
            if m.len() != ranks[k + 1] || (!m.is_empty() && cols[k] != ranks[k]) {
                return Err(Error::Dimension(format!("B-matrix {k} has wrong shape")));
            }
        }
        Self::new(tag, start, ranks, diffs)
    }

    fn validate(&self) -> Result<()> {
        if self.diffs.len() + 1 != self.ranks.len() && !(self.ranks.is_empty() && self.diffs.is_empty()) {
            return Err(Error::Dimension("number of differentials must be one less than number of terms".into()));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            if d.cols() != self.z_rank(k) || d.rows() != self.z_rank(k + 1) {
                return Err(Error::Dimension(format!("differential {k} has shape {}x{}", d.rows(), d.cols())));
            }
        }
        for k in 1..self.diffs.len() {
            let c = self.diffs[k].mul(&self.diffs[k - 1]);
            let zero = match &self.base {
                BaseTag::ModPrimePower { p, n } => c.reduce_mod(&ModPn::new(*p, *n).modulus).is_zero(),
                _ => c.is_zero(),
            };
            if !zero {
                return Err(Error::CompositeNonzero { degree: self.start + k as i32 - 1 });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn end(&self) -> i32 {
        self.start + self.len() as i32 - 1
    }

    pub fn z_rank(&self, k: usize) -> usize {
        self.ranks[k] * self.base.z_rank()
    }

    pub fn z_ranks(&self) -> Vec<usize> {
        (0..self.len()).map(|k| self.z_rank(k)).collect()
    }

    /// Cohomology over ℤ of the underlying abelian groups (ℤ or B coefficients).
    pub fn cohomology_z(&self) -> Result<Vec<AbelianGroup>> {
        match self.base {
            BaseTag::ModPrimePower { .. } => Err(Error::Invalid("use cohomology_local for ℤ/pⁿ complexes".into())),
            _ => cohomology_z(&self.z_ranks(), &self.diffs),
        }
    }

    pub fn cohomology_local(&self, p: u64) -> Result<Vec<PGroup>> {
        match &self.base {
            BaseTag::ModPrimePower { p, n } => cohomology_mod(&self.z_ranks(), &self.diffs, &ModPn::new(*p, *n)),
            _ => Ok(self.cohomology_z()?.iter().map(|g| g.localize(p)).collect()),
        }
    }

    /// ℤ-matrix of multiplication by `f` on the degree-k term.
    pub fn mult_matrix(&self, f: &Scalar, k: usize) -> Result<IntMatrix> {
        let r = self.ranks[k];
        match (&self.base, f) {
            (BaseTag::QTruncated { p, n_trunc }, Scalar::Q(x)) => {
                let m = QBase::new(*p, *n_trunc).mult_matrix(x);
                let mut out = IntMatrix::zeros(r * n_trunc, r * n_trunc);
                for i in 0..r {
                    out.set_block(i * n_trunc, i * n_trunc, &m);
                }
                Ok(out)
            }
            (_, Scalar::Int(c)) => Ok(IntMatrix::scalar(self.z_rank(k), c)),
            _ => Err(Error::Invalid("scalar does not belong to the base ring".into())),
        }
    }

    pub fn free_lattices(&self) -> LatticeComplex {
        LatticeComplex {
            start: self.start,
            diffs: self.diffs.clone(),
            lattices: self.z_ranks().iter().map(|&r| Lattice::full(r)).collect(),
        }
    }

    /// Degree-j cocycles and coboundaries of the ℤ-lattice complex.
    pub fn cycles_and_boundaries(&self, k: usize) -> (Lattice, Lattice) {
        let full = Lattice::full(self.z_rank(k));
        let z = if k < self.diffs.len() { full.kernel_of(&self.diffs[k]) } else { full };
        let b = if k > 0 {
            Lattice::full(self.z_rank(k - 1)).image(&self.diffs[k - 1])
        } else {
            Lattice::zero(self.z_rank(k))
        };
        (z, b)
    }
}

pub fn b_matrix_to_z(base: &QBase, m: &[Vec<QElem>]) -> IntMatrix {
    let n = base.n_trunc;
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = IntMatrix::zeros(rows * n, cols * n);
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out.set_block(i * n, j * n, &base.mult_matrix(x));
        }
    }
    out
}

/// A subcomplex given by lattices inside a free ambient complex over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeComplex {
    pub start: i32,
    pub diffs: Vec<IntMatrix>,
    pub lattices: Vec<Lattice>,
}

impl LatticeComplex {
    pub fn len(&self) -> usize {
        self.lattices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattices.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.lattices.iter().map(|l| l.dim()).collect()
    }

    pub fn is_d_stable(&self) -> bool {
        self.diffs
            .iter()
            .enumerate()
            .all(|(k, d)| self.lattices[k + 1].contains_lattice(&self.lattices[k].image(d)))
    }

    pub fn as_subquotient(&self) -> Result<SubquotientComplex> {
        let bottom = self.lattices.iter().map(|l| Lattice::zero(l.dim())).collect();
        SubquotientComplex::new(self.diffs.clone(), self.lattices.clone(), bottom)
    }

    pub fn cohomology(&self) -> Result<Vec<AbelianGroup>> {
        Ok(self.as_subquotient()?.cohomology())
    }

    /// Free presentation: a complex over ℤ whose basis is the lattice basis, plus inclusions.
    pub fn to_free(&self) -> Result<(Complex, Vec<IntMatrix>)> {
        let incl: Vec<IntMatrix> = self.lattices.iter().map(|l| l.basis_matrix()).collect();
        let mut diffs = Vec::new();
        for (k, d) in self.diffs.iter().enumerate() {
            let mut cols = Vec::new();
            for b in self.lattices[k].basis() {
                let img = d.apply(b);
                let c = self.lattices[k + 1]
                    .coords(&img)
                    .ok_or_else(|| Error::Invalid(format!("lattice complex is not d-stable in degree {k}")))?;
                cols.push(c);
            }
            diffs.push(IntMatrix::from_columns(&cols, self.lattices[k + 1].rank()));
        }
        let ranks = self.lattices.iter().map(|l| l.rank()).collect();
        Ok((Complex::integers(self.start, ranks, diffs)?, incl))
    }

    /// Transport an ambient operator (e.g. multiplication by f) to the lattice bases.
    pub fn transport(&self, k: usize, op: &IntMatrix) -> Result<IntMatrix> {
        let mut cols = Vec::new();
        for b in self.lattices[k].basis() {
            let img = op.apply(b);
            cols.push(
                self.lattices[k]
                    .coords(&img)
                    .ok_or_else(|| Error::Invalid("operator does not preserve the lattice".into()))?,
            );
        }
        Ok(IntMatrix::from_columns(&cols, self.lattices[k].rank()))
    }
}

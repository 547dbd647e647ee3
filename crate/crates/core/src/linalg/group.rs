use super::matrix::valuation;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Finitely generated abelian p-group plus a free part: `ℤ^free_rank ⊕ ⊕ ℤ/p^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct PGroup {
    #[serde(skip)]
    pub p: u64,
    pub free_rank: usize,
    pub exponents: Vec<u32>,
}

impl PGroup {
    pub fn new(p: u64, free_rank: usize, mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        PGroup { p, free_rank, exponents }
    }

    pub fn zero(p: u64) -> Self {
        PGroup { p, free_rank: 0, exponents: Vec::new() }
    }

    /// `(ℤ/p^e)^k`
    pub fn cyclic_power(p: u64, e: u32, k: usize) -> Self {
        PGroup::new(p, 0, vec![e; k])
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.exponents.is_empty()
    }

    /// log_p of the order of the torsion part.
    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn direct_sum(&self, other: &PGroup) -> PGroup {
        assert_eq!(self.p, other.p);
        let mut e = self.exponents.clone();
        e.extend_from_slice(&other.exponents);
        PGroup::new(self.p, self.free_rank + other.free_rank, e)
    }

    /// `G / G[p^k]`, i.e. the image of multiplication by `p^k`.
    pub fn quotient_by_torsion(&self, k: u32) -> PGroup {
        let e = self.exponents.iter().map(|&x| x.saturating_sub(k)).collect();
        PGroup::new(self.p, self.free_rank, e)
    }

    /// `G ⊗ ℤ/p^n`
    pub fn reduce(&self, n: u32) -> PGroup {
        let mut e: Vec<u32> = self.exponents.iter().map(|&x| x.min(n)).collect();
        e.extend(std::iter::repeat(n).take(self.free_rank));
        PGroup::new(self.p, 0, e)
    }

    /// `G[p^n]`
    pub fn torsion(&self, n: u32) -> PGroup {
        let e = self.exponents.iter().map(|&x| x.min(n)).collect();
        PGroup::new(self.p, 0, e)
    }

    /// Free summands counted as exponent `n` (for comparing with groups over ℤ/p^n).
    pub fn as_mod(&self, n: u32) -> PGroup {
        self.reduce(n)
    }
}

impl fmt::Display for PGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for e in &self.exponents {
            parts.push(if *e == 1 { format!("Z/{}", self.p) } else { format!("Z/{}^{}", self.p, e) });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Finitely generated abelian group in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// invariant factors > 1, each dividing the next
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// From the nonzero diagonal of a relation matrix on `generators` generators.
    pub fn from_relations(generators: usize, invariants: &[BigInt]) -> Self {
        let mut torsion: Vec<BigInt> =
            invariants.iter().map(|x| x.abs()).filter(|x| !x.is_one() && !x.is_zero()).collect();
        torsion.sort();
        let rank = invariants.iter().filter(|x| !x.is_zero()).count();
        AbelianGroup { free_rank: generators - rank, torsion }
    }

    pub fn zero() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Tensor with ℤ_(p).
    pub fn localize(&self, p: u64) -> PGroup {
        let e = self.torsion.iter().filter_map(|t| valuation(t, p)).collect();
        PGroup::new(p, self.free_rank, e)
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(BigInt::one(), |a, b| a * b))
    }

    /// Primary decomposition check helper: the group has no element of order prime to p.
    pub fn is_p_group(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        self.torsion.iter().all(|t| {
            let mut x = t.clone();
            while x.is_multiple_of(&pb) {
                x /= &pb;
            }
            x.is_one()
        })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

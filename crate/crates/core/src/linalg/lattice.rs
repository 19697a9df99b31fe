//! Quotients `Z^n / L` of the integer lattice by a row lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::echelon::Echelon;
use super::invariants::AbelianInvariants;
use super::matrix::{sparse_to_dense, IntMatrix, SparseRow};
use super::snf::snf_dense;
use crate::error::{Error, Result};

/// Order of an element of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is(&self, n: u64) -> bool {
        matches!(self, Order::Finite(m) if *m == BigInt::from(n))
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => match u64::try_from(n) {
                Ok(v) => s.serialize_u64(v),
                Err(_) => s.serialize_str(&n.to_string()),
            },
            Order::Infinite => s.serialize_str("infinite"),
        }
    }
}

fn two_adic_valuation(x: &BigInt) -> u64 {
    x.trailing_zeros().unwrap_or(0)
}

/// The group `Z^n / L`, with an echelon basis of `L` for membership and the
/// Smith form of that basis for coordinates.
///
/// If `U * B * V = D` for the echelon basis `B`, then `x` lies in `L` exactly
/// when `(x V)_i` is divisible by `d_i` for `i < rank` and vanishes beyond.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    cols: usize,
    input_rows: usize,
    echelon: Echelon,
    diag: Vec<BigInt>,
    transform: Vec<Vec<BigInt>>,
}

impl LatticeQuotient {
    pub fn new(relations: &IntMatrix) -> Self {
        Self::from_rows(relations.cols(), relations.sparse_rows(), false)
    }

    /// Like [`LatticeQuotient::new`] but keeps enough bookkeeping to express
    /// members in terms of the original relation rows.
    pub fn with_witness(relations: &IntMatrix) -> Self {
        Self::from_rows(relations.cols(), relations.sparse_rows(), true)
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseRow>, track: bool) -> Self {
        let input_rows = rows.len();
        let echelon = if track { Echelon::with_tracking(cols, rows) } else { Echelon::new(cols, rows) };
        let block: Vec<Vec<BigInt>> = echelon.rows().iter().map(|r| sparse_to_dense(r, cols)).collect();
        let snf = snf_dense(block, cols, false, true);
        let transform = snf.v.expect("column transform tracked");
        let diag = snf.diag;
        debug_assert!(diag.iter().all(|d| d.is_positive()));
        LatticeQuotient { cols, input_rows, echelon, diag, transform }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    /// Smith diagonal of the relation lattice (all entries positive).
    pub fn diagonal(&self) -> &[BigInt] {
        &self.diag
    }

    pub fn invariants(&self) -> AbelianInvariants {
        AbelianInvariants::from_smith_diagonal(&self.diag, self.cols - self.rank())
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a lattice of dimension {}",
                v.len(),
                self.cols
            )));
        }
        Ok(())
    }

    /// Coordinates `x V` in the Smith basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(v)?;
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, t) in self.transform[i].iter().enumerate() {
                if !t.is_zero() {
                    out[j] += x * t;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        self.check_len(v)?;
        Ok(self.echelon.contains(v))
    }

    /// Least `k` with `2^k v` in the lattice, if any. This is membership in
    /// the saturation of `L` at the prime 2, read off the Smith coordinates.
    pub fn contains_after_inverting_two(&self, v: &[BigInt]) -> Result<Option<u32>> {
        let w = self.coordinates(v)?;
        let mut k = 0u64;
        for (j, x) in w.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let Some(d) = self.diag.get(j) else {
                return Ok(None);
            };
            let e = two_adic_valuation(d);
            let odd = d >> e;
            if !x.is_multiple_of(&odd) {
                return Ok(None);
            }
            k = k.max(e.saturating_sub(two_adic_valuation(x)));
        }
        Ok(Some(k as u32))
    }

    pub fn order(&self, v: &[BigInt]) -> Result<Order> {
        let w = self.coordinates(v)?;
        let mut n = BigInt::one();
        for (j, x) in w.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match self.diag.get(j) {
                None => return Ok(Order::Infinite),
                Some(d) => {
                    let part = d / d.gcd(x);
                    n = n.lcm(&part);
                }
            }
        }
        Ok(Order::Finite(n))
    }

    /// Coefficients `c` with `c * M = v` on the original relation rows.
    /// Requires a quotient built with [`LatticeQuotient::with_witness`].
    pub fn witness(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        self.check_len(v)?;
        if !self.echelon.is_tracked() {
            return Err(Error::Consistency("lattice built without witness tracking".into()));
        }
        Ok(self.echelon.solve(v).and_then(|c| self.echelon.lift_coefficients(&c, self.input_rows)))
    }

    /// The lattice `{x in Z^k : x * images lies in L}` for a `k x n` list of
    /// image vectors, returned as an echelon basis.
    pub fn preimage(&self, images: &[Vec<BigInt>]) -> Result<Echelon> {
        let k = images.len();
        let coords: Vec<Vec<BigInt>> = images.iter().map(|v| self.coordinates(v)).collect::<Result<_>>()?;
        // congruence columns (d > 1) and equality columns (beyond the rank)
        let mut selected: Vec<(usize, Option<BigInt>)> = Vec::new();
        for j in 0..self.cols {
            match self.diag.get(j) {
                Some(d) if d.is_one() => {}
                Some(d) => selected.push((j, Some(d.clone()))),
                None => selected.push((j, None)),
            }
        }
        let width = selected.len();
        let mut stacked: Vec<SparseRow> = Vec::with_capacity(k + width);
        for c in &coords {
            let row: SparseRow = selected
                .iter()
                .enumerate()
                .filter(|(_, (j, _))| !c[*j].is_zero())
                .map(|(s, (j, _))| (s, c[*j].clone()))
                .collect();
            stacked.push(row);
        }
        for (s, (_, d)) in selected.iter().enumerate() {
            if let Some(d) = d {
                stacked.push(vec![(s, d.clone())]);
            }
        }
        let tracked = Echelon::with_tracking(width, stacked);
        let gens: Vec<SparseRow> = tracked
            .kernel()
            .expect("tracked")
            .iter()
            .map(|combo| combo.iter().filter(|(i, _)| *i < k).cloned().collect::<SparseRow>())
            .filter(|r| !r.is_empty())
            .collect();
        Ok(Echelon::new(k, gens))
    }

    /// Invariants of the subgroup of `Z^n / L` generated by the given vectors.
    pub fn subgroup_invariants(&self, gens: &[Vec<BigInt>]) -> Result<AbelianInvariants> {
        let kernel = self.preimage(gens)?;
        let q = LatticeQuotient::from_rows(gens.len(), kernel.rows().to_vec(), false);
        Ok(q.invariants())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(rows, cols).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn order_in_cyclic_group() {
        let q = LatticeQuotient::new(&m(&[vec![6]], 1));
        assert_eq!(q.order(&big(&[2])).unwrap(), Order::Finite(3.into()));
        assert_eq!(q.order(&big(&[0])).unwrap(), Order::Finite(1.into()));
        let free = LatticeQuotient::new(&IntMatrix::zeros(0, 2));
        assert_eq!(free.order(&big(&[0, 1])).unwrap(), Order::Infinite);
    }

    #[test]
    fn saturation_at_two() {
        let q = LatticeQuotient::new(&m(&[vec![2]], 1));
        assert_eq!(q.contains_after_inverting_two(&big(&[1])).unwrap(), Some(1));
        let q = LatticeQuotient::new(&m(&[vec![12]], 1));
        assert_eq!(q.contains_after_inverting_two(&big(&[3])).unwrap(), Some(2));
        assert_eq!(q.contains_after_inverting_two(&big(&[1])).unwrap(), None);
        assert_eq!(q.contains_after_inverting_two(&big(&[6])).unwrap(), Some(1));
    }

    #[test]
    fn preimage_of_reduction_map() {
        // Z -> Z/2: preimage of 0 is 2Z
        let q = LatticeQuotient::new(&m(&[vec![2]], 1));
        let ker = q.preimage(&[big(&[1])]).unwrap();
        assert_eq!(ker.rows().len(), 1);
        assert_eq!(ker.rows()[0], vec![(0, BigInt::from(2))]);
    }

    #[test]
    fn subgroup_of_z6() {
        let q = LatticeQuotient::new(&m(&[vec![6]], 1));
        let inv = q.subgroup_invariants(&[big(&[2]), big(&[4])]).unwrap();
        assert_eq!(inv, AbelianInvariants::from_cyclic_orders(&[3], 0));
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::snf::snf_dense;

/// Canonical form of a finitely generated abelian group:
/// `Z/d_1 + ... + Z/d_k + Z^r` with `d_1 | d_2 | ... | d_k`, every `d_i >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianInvariants {
    factors: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianInvariants { factors: Vec::new(), free_rank: rank }
    }

    /// From the diagonal of a Smith form (a divisibility chain, units allowed).
    pub(crate) fn from_smith_diagonal(diag: &[BigInt], free_rank: usize) -> Self {
        let factors: Vec<BigInt> = diag.iter().filter(|d| *d > &BigInt::one()).cloned().collect();
        debug_assert!(factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        AbelianInvariants { factors, free_rank }
    }

    /// Canonical invariants of `Z/n_1 + ... + Z/n_k + Z^r` for arbitrary
    /// positive orders `n_i`. A zero order counts as a free summand.
    pub fn from_cyclic_orders<T: Into<BigInt> + Clone>(orders: &[T], free_rank: usize) -> Self {
        let orders: Vec<BigInt> = orders.iter().map(|o| o.clone().into()).collect();
        Self::from_bigint_orders(&orders, free_rank)
    }

    pub fn from_bigint_orders(orders: &[BigInt], free_rank: usize) -> Self {
        let zeros = orders.iter().filter(|o| o.is_zero()).count();
        let finite: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).cloned().collect();
        let n = finite.len();
        let dense: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { finite[i].clone() } else { BigInt::zero() }).collect()).collect();
        let snf = snf_dense(dense, n, false, false);
        Self::from_smith_diagonal(&snf.diag, free_rank + zeros)
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn factors_u64(&self) -> Option<Vec<u64>> {
        self.factors.iter().map(|f| u64::try_from(f).ok()).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` for infinite groups.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.factors.iter().product())
    }

    pub fn is_cyclic_of_order(&self, n: u64) -> bool {
        if n == 1 {
            return self.is_trivial();
        }
        self.free_rank == 0 && self.factors.len() == 1 && self.factors[0] == BigInt::from(n)
    }

    /// Image after tensoring with `Z[1/2]`: 2-power torsion removed.
    pub fn odd_part(&self) -> Self {
        let odd: Vec<BigInt> = self
            .factors
            .iter()
            .map(|f| {
                let e = f.trailing_zeros().unwrap_or(0);
                f >> e
            })
            .collect();
        Self::from_bigint_orders(&odd, self.free_rank)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut all = self.factors.clone();
        all.extend(other.factors.iter().cloned());
        Self::from_bigint_orders(&all, self.free_rank + other.free_rank)
    }

    pub fn sum_all<'a>(parts: impl IntoIterator<Item = &'a AbelianInvariants>) -> Self {
        parts.into_iter().fold(Self::trivial(), |acc, p| acc.direct_sum(p))
    }
}

impl fmt::Debug for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(u64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct InvariantsRepr {
    factors: Vec<IntRepr>,
    free_rank: usize,
}

impl Serialize for AbelianInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let factors = self
            .factors
            .iter()
            .map(|f| match u64::try_from(f) {
                Ok(v) => IntRepr::Small(v),
                Err(_) => IntRepr::Big(f.to_string()),
            })
            .collect();
        InvariantsRepr { factors, free_rank: self.free_rank }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AbelianInvariants {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = InvariantsRepr::deserialize(d)?;
        let mut orders = Vec::with_capacity(repr.factors.len());
        for f in repr.factors {
            orders.push(match f {
                IntRepr::Small(v) => BigInt::from(v),
                IntRepr::Big(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom)?,
            });
        }
        Ok(AbelianInvariants::from_bigint_orders(&orders, repr.free_rank))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_from_orders() {
        let a = AbelianInvariants::from_cyclic_orders(&[2, 3], 0);
        assert_eq!(a.factors_u64().unwrap(), vec![6]);
        let b = AbelianInvariants::from_cyclic_orders(&[4, 6, 1], 1);
        assert_eq!(b.factors_u64().unwrap(), vec![2, 12]);
        assert_eq!(b.free_rank(), 1);
        assert_eq!(b.to_string(), "Z/2 + Z/12 + Z");
    }

    #[test]
    fn odd_part_drops_two_torsion() {
        let a = AbelianInvariants::from_cyclic_orders(&[2, 12], 1);
        let odd = a.odd_part();
        assert_eq!(odd.factors_u64().unwrap(), vec![3]);
        assert_eq!(odd.free_rank(), 1);
        assert!(AbelianInvariants::from_cyclic_orders(&[8], 0).odd_part().is_trivial());
    }

    #[test]
    fn json_roundtrip() {
        let a = AbelianInvariants::from_cyclic_orders(&[3, 9], 2);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"factors":[3,9],"free_rank":2}"#);
        let b: AbelianInvariants = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}

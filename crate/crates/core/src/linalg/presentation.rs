use num_bigint::BigInt;
use serde::Serialize;

use super::invariants::AbelianInvariants;
use super::lattice::{LatticeQuotient, Order};
use super::matrix::{dense_to_sparse, sparse_to_dense, IntMatrix, SparseRow};
use crate::error::{Error, Result};

/// A finitely presented abelian group `Z^n / rowspace(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPresentation {
    generators: usize,
    relations: IntMatrix,
}

impl FpPresentation {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} columns for {generators} generators",
                relations.cols()
            )));
        }
        Ok(FpPresentation { generators, relations })
    }

    pub fn free(generators: usize) -> Self {
        FpPresentation { generators, relations: IntMatrix::zeros(0, generators) }
    }

    pub fn cyclic(order: u64) -> Self {
        let mut rel = IntMatrix::zeros(1, 1);
        rel.set(0, 0, BigInt::from(order));
        FpPresentation { generators: 1, relations: rel }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn quotient(&self) -> LatticeQuotient {
        LatticeQuotient::new(&self.relations)
    }

    pub fn invariants(&self) -> AbelianInvariants {
        self.quotient().invariants()
    }

    pub fn with_relations(&self, extra: &[SparseRow]) -> Result<Self> {
        let mut rel = self.relations.clone();
        rel.push_sparse_rows(extra)?;
        Ok(FpPresentation { generators: self.generators, relations: rel })
    }
}

/// Presentation of a kernel together with its generators, written as
/// vectors over the domain's generators.
#[derive(Clone, Debug)]
pub struct KernelPresentation {
    pub presentation: FpPresentation,
    pub generators: Vec<Vec<BigInt>>,
}

/// Outcome of a lattice membership query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Least `k` with `2^k v` in the lattice (always 0 without `invert_two`).
    pub power_of_two: u32,
    /// Coefficients on the relation rows expressing `2^k v`; empty when not a member.
    #[serde(skip)]
    pub coefficients: Vec<BigInt>,
}

/// Invariant factors of `Z^n / rowspace(m)`.
pub fn cokernel_invariants(m: &IntMatrix, num_generators: usize) -> Result<AbelianInvariants> {
    if m.cols() != num_generators {
        return Err(Error::DimensionMismatch(format!("{} columns for {num_generators} generators", m.cols())));
    }
    Ok(LatticeQuotient::new(m).invariants())
}

/// Decides whether `v` lies in the row lattice of `m`; with `invert_two`
/// decides whether some `2^k v` does.
pub fn lattice_membership(m: &IntMatrix, v: &[BigInt], invert_two: bool) -> Result<Membership> {
    let q = LatticeQuotient::with_witness(m);
    let k = if invert_two {
        q.contains_after_inverting_two(v)?
    } else if q.contains(v)? {
        Some(0)
    } else {
        None
    };
    let Some(k) = k else {
        return Ok(Membership { member: false, power_of_two: 0, coefficients: Vec::new() });
    };
    let scaled: Vec<BigInt> = v.iter().map(|x| x << k).collect();
    let coefficients = q.witness(&scaled)?.ok_or_else(|| Error::Consistency("member without witness".into()))?;
    Ok(Membership { member: true, power_of_two: k, coefficients })
}

/// Least `n >= 1` with `n v` in the row lattice of `m`.
pub fn element_order(m: &IntMatrix, v: &[BigInt]) -> Result<Order> {
    LatticeQuotient::new(m).order(v)
}

/// Presentation of the kernel of the homomorphism of presented groups
/// induced by `map_matrix` (row `i` = image of domain generator `i`).
pub fn map_kernel(
    domain: &FpPresentation,
    codomain: &FpPresentation,
    map_matrix: &IntMatrix,
) -> Result<KernelPresentation> {
    if map_matrix.rows() != domain.generators() || map_matrix.cols() != codomain.generators() {
        return Err(Error::DimensionMismatch(format!(
            "map matrix is {}x{}, expected {}x{}",
            map_matrix.rows(),
            map_matrix.cols(),
            domain.generators(),
            codomain.generators()
        )));
    }
    let target = codomain.quotient();
    for (row, rel) in domain.relations().sparse_rows().iter().enumerate() {
        let img = map_matrix.left_mul_vec(&sparse_to_dense(rel, domain.generators()))?;
        if !target.contains(&img)? {
            return Err(Error::MapNotWellDefined { row });
        }
    }
    let images: Vec<Vec<BigInt>> = (0..map_matrix.rows()).map(|i| map_matrix.row_vec(i)).collect();
    let basis = target.preimage(&images)?;

    let gens: Vec<Vec<BigInt>> = basis.rows().iter().map(|r| sparse_to_dense(r, domain.generators())).collect();
    for g in &gens {
        let img = map_matrix.left_mul_vec(g)?;
        if !target.contains(&img)? {
            return Err(Error::Consistency("kernel generator maps outside the codomain relations".into()));
        }
    }

    let mut rels = Vec::with_capacity(domain.relations().rows());
    for rel in domain.relations().sparse_rows() {
        let v = sparse_to_dense(&rel, domain.generators());
        let c =
            basis.solve(&v).ok_or_else(|| Error::Consistency("domain relation outside the kernel lattice".into()))?;
        let row = dense_to_sparse(&c);
        if !row.is_empty() {
            rels.push(row);
        }
    }
    let presentation = FpPresentation::new(gens.len(), IntMatrix::from_sparse_rows(gens.len(), &rels)?)?;
    Ok(KernelPresentation { presentation, generators: gens })
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
    fn cokernel_examples() {
        let a = cokernel_invariants(&m(&[vec![2]], 1), 1).unwrap();
        assert_eq!(a.factors_u64().unwrap(), vec![2]);
        assert_eq!(a.free_rank(), 0);
        let b = cokernel_invariants(&IntMatrix::zeros(0, 3), 3).unwrap();
        assert!(b.factors().is_empty());
        assert_eq!(b.free_rank(), 3);
        let c = cokernel_invariants(&m(&[vec![2, 0], vec![0, 3]], 2), 2).unwrap();
        assert_eq!(c.factors_u64().unwrap(), vec![6]);
        assert!(cokernel_invariants(&m(&[vec![2, 0]], 2), 3).is_err());
    }

    #[test]
    fn membership_examples() {
        let two = m(&[vec![2]], 1);
        let r = lattice_membership(&two, &big(&[2]), false).unwrap();
        assert!(r.member);
        assert_eq!(r.coefficients, big(&[1]));
        assert!(!lattice_membership(&two, &big(&[1]), false).unwrap().member);
        let r = lattice_membership(&two, &big(&[1]), true).unwrap();
        assert!(r.member);
        assert_eq!(r.power_of_two, 1);
        assert!(lattice_membership(&two, &big(&[1, 2]), false).is_err());
    }

    #[test]
    fn order_examples() {
        assert!(element_order(&m(&[vec![6]], 1), &big(&[2])).unwrap().is(3));
        assert!(element_order(&m(&[vec![1]], 1), &big(&[5])).unwrap().is(1));
    }

    #[test]
    fn kernel_of_identity_on_z4() {
        let z4 = FpPresentation::cyclic(4);
        let k = map_kernel(&z4, &z4, &IntMatrix::identity(1)).unwrap();
        assert!(k.presentation.invariants().is_trivial());
    }

    #[test]
    fn kernel_of_reduction_mod_two() {
        let z = FpPresentation::free(1);
        let z2 = FpPresentation::cyclic(2);
        let k = map_kernel(&z, &z2, &IntMatrix::identity(1)).unwrap();
        assert_eq!(k.presentation.invariants(), AbelianInvariants::free(1));
        assert_eq!(k.generators, vec![big(&[2])]);
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        // Z/2 -> Z/3 sending 1 to 1 is not a homomorphism
        let z2 = FpPresentation::cyclic(2);
        let z3 = FpPresentation::cyclic(3);
        assert_eq!(map_kernel(&z2, &z3, &IntMatrix::identity(1)).unwrap_err(), Error::MapNotWellDefined { row: 0 });
    }

    #[test]
    fn kernel_of_z6_onto_z2() {
        let z6 = FpPresentation::cyclic(6);
        let z2 = FpPresentation::cyclic(2);
        let k = map_kernel(&z6, &z2, &IntMatrix::identity(1)).unwrap();
        assert!(k.presentation.invariants().is_cyclic_of_order(3));
    }
}

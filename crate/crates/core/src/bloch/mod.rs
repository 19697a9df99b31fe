//! Pre-Bloch, refined pre-Bloch and Bloch groups of a finite field.
//!
//! Generators `[x]` are indexed by `x` in `F^x \ {1}` in element order
//! (`[1] = 0` is eliminated up front). `F_2` and `F_3` carry the small ad hoc
//! presentations: `P(F_2) = RP(F_2) = Z/3` on one generator `b`, and `RP(F_3)`
//! on `[-1]` with the single relation `2(1 + <-1>)[-1] = 0`.

mod elements;
pub mod verify;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

pub use elements::{constant_b, df_module, reduced_quotients, suslin_element, ConstantB, DfModule, ReducedQuotients};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::group_ring::{
    normalize, Character, GroupRingElement, ModuleLattice, RModuleMap, RModulePresentation, RVector,
};
use crate::linalg::{AbelianInvariants, Echelon, FpPresentation, IntMatrix, KernelPresentation, SparseRow};

/// A formal `R_F`-combination of generators `[x]`.
pub type SymbolVector = RVector;

/// Element of `asym^2(F^x)`, cyclic of order `gcd(2, q - 1)` on `g o g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Asym2Element {
    pub value: u32,
    pub modulus: u32,
}

/// A field together with its (lazily built) refined pre-Bloch lattice.
#[derive(Debug)]
pub struct BlochField {
    field: FiniteField,
    rank: usize,
    lattice: OnceLock<ModuleLattice>,
}

impl Clone for BlochField {
    fn clone(&self) -> Self {
        let out = BlochField::new(self.field.clone());
        if let Some(l) = self.lattice.get() {
            let _ = out.lattice.set(l.clone());
        }
        out
    }
}

impl BlochField {
    pub fn new(field: FiniteField) -> Self {
        let rank = field.square_class_rank();
        BlochField { field, rank, lattice: OnceLock::new() }
    }

    pub fn of_order(q: u64) -> Result<Self> {
        Ok(Self::new(FiniteField::of_order(q)?))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Rank of `sq(F)`: 1 for odd `q`, 0 for even `q`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_generators(&self) -> usize {
        if self.q() == 2 {
            1
        } else {
            self.q() as usize - 2
        }
    }

    /// Generator index of `[x]`; `None` for `x = 1`.
    pub fn index(&self, x: FieldElement) -> Result<Option<usize>> {
        match self.field.validate(x)? {
            0 => Err(Error::Domain("[0] is not a symbol".into())),
            1 => Ok(None),
            v => Ok(Some(v as usize - 2)),
        }
    }

    /// The field element of generator `i` (`None` for the `F_2` generator).
    pub fn generator_element(&self, i: usize) -> Option<FieldElement> {
        (self.q() > 2 && i < self.num_generators()).then(|| self.field.element(i as u32 + 2).unwrap())
    }

    pub fn generator_label(&self, i: usize) -> String {
        match self.generator_element(i) {
            Some(x) => format!("[{}]", self.field.format(x)),
            None => "b".into(),
        }
    }

    /// Square class of `x` as a group element of `sq(F)`.
    pub fn class(&self, x: FieldElement) -> Result<u64> {
        Ok(self.field.square_class(x)?.bit())
    }

    pub(crate) fn class_v(&self, x: u32) -> u64 {
        self.field.square_class_bit_v(x)
    }

    pub fn minus_one(&self) -> FieldElement {
        self.field.from_int(-1)
    }

    pub fn group_element(&self, x: FieldElement) -> Result<GroupRingElement> {
        Ok(GroupRingElement::group_element(self.rank, self.class(x)?))
    }

    /// `<<x>> = <x> - 1`.
    pub fn pfister(&self, x: FieldElement) -> Result<GroupRingElement> {
        Ok(GroupRingElement::pfister(self.rank, self.class(x)?))
    }

    pub fn ring_int(&self, n: i64) -> GroupRingElement {
        GroupRingElement::from_int(self.rank, n)
    }

    /// The symbol `[x]`; zero for `x = 1`.
    pub fn symbol(&self, x: FieldElement) -> Result<SymbolVector> {
        Ok(match self.index(x)? {
            Some(i) => vec![(i, self.ring_int(1))],
            None => Vec::new(),
        })
    }

    fn symbol_v(&self, x: u32) -> Option<usize> {
        debug_assert!(x != 0);
        (x != 1).then(|| x as usize - 2)
    }

    /// Index pairs `(x, y)` of distinct elements of `F^x \ {1}`.
    fn pairs(&self) -> Vec<(u32, u32)> {
        if self.q() < 4 {
            return Vec::new();
        }
        let q = self.q();
        (2..q).flat_map(|x| (2..q).filter(move |&y| y != x).map(move |y| (x, y))).collect()
    }

    /// Arguments and group-element coefficients of the five terms of
    /// `S_{x,y}`: `[x] - [y] + <x>[y/x] - <x^-1 - 1>[(1-x^-1)/(1-y^-1)] + <1-x>[(1-x)/(1-y)]`.
    fn relation_terms(&self, x: u32, y: u32) -> [(u32, i64, u32); 5] {
        let f = &self.field;
        let xi = f.inv_v(x).expect("nonzero");
        let yi = f.inv_v(y).expect("nonzero");
        let one_m_xi = f.sub_v(1, xi);
        let one_m_yi = f.sub_v(1, yi);
        let one_m_x = f.sub_v(1, x);
        let one_m_y = f.sub_v(1, y);
        let a3 = f.mul_v(y, xi);
        let a4 = f.mul_v(one_m_xi, f.inv_v(one_m_yi).expect("y != 1"));
        let a5 = f.mul_v(one_m_x, f.inv_v(one_m_y).expect("y != 1"));
        let xi_m1 = f.sub_v(xi, 1);
        // (argument, sign, coefficient class element)
        [(x, 1, 1), (y, -1, 1), (a3, 1, x), (a4, -1, xi_m1), (a5, 1, one_m_x)]
    }

    /// The row `R_{x,y}` of the pre-Bloch presentation.
    pub fn prebloch_relation(&self, x: FieldElement, y: FieldElement) -> Result<SparseRow> {
        let (xv, yv) = self.pair_values(x, y)?;
        Ok(self.prebloch_relation_v(xv, yv))
    }

    fn prebloch_relation_v(&self, x: u32, y: u32) -> SparseRow {
        let mut acc = std::collections::BTreeMap::<usize, i64>::new();
        for (arg, sign, _) in self.relation_terms(x, y) {
            assert!(arg != 0, "relation argument vanished");
            if let Some(i) = self.symbol_v(arg) {
                *acc.entry(i).or_default() += sign;
            }
        }
        acc.into_iter().filter(|(_, c)| *c != 0).map(|(i, c)| (i, BigInt::from(c))).collect()
    }

    /// The row `S_{x,y}` of the refined presentation.
    pub fn refined_relation(&self, x: FieldElement, y: FieldElement) -> Result<SymbolVector> {
        let (xv, yv) = self.pair_values(x, y)?;
        Ok(self.refined_relation_v(xv, yv))
    }

    fn refined_relation_v(&self, x: u32, y: u32) -> SymbolVector {
        let mut row = Vec::with_capacity(5);
        for (arg, sign, coeff) in self.relation_terms(x, y) {
            assert!(arg != 0, "relation argument vanished");
            if let Some(i) = self.symbol_v(arg) {
                let g = GroupRingElement::group_element(self.rank, self.class_v(coeff));
                row.push((i, g.scale_int(sign)));
            }
        }
        normalize(row)
    }

    fn pair_values(&self, x: FieldElement, y: FieldElement) -> Result<(u32, u32)> {
        let (ix, iy) = (self.index(x)?, self.index(y)?);
        match (ix, iy) {
            (Some(_), Some(_)) if x != y => Ok((x.value(), y.value())),
            _ => Err(Error::Domain("relations need distinct x, y outside {0, 1}".into())),
        }
    }

    /// Presentation of `P(F)`.
    pub fn prebloch_presentation(&self) -> FpPresentation {
        let n = self.num_generators();
        let rows: Vec<SparseRow> = match self.q() {
            2 => vec![vec![(0, BigInt::from(3))]],
            3 => vec![vec![(0, BigInt::from(4))]],
            _ => self.pairs().into_iter().map(|(x, y)| self.prebloch_relation_v(x, y)).collect(),
        };
        FpPresentation::new(n, IntMatrix::from_sparse_rows(n, &rows).expect("valid rows")).expect("shape")
    }

    /// Presentation of `RP(F)` over `R_F = Z[sq(F)]`.
    pub fn refined_presentation(&self) -> RModulePresentation {
        let n = self.num_generators();
        let rows: Vec<RVector> = match self.q() {
            2 => vec![vec![(0, self.ring_int(3))]],
            3 => vec![vec![(0, GroupRingElement::p_sign(1, 1, true).scale_int(2))]],
            _ => self.pairs().into_iter().map(|(x, y)| self.refined_relation_v(x, y)).collect(),
        };
        RModulePresentation::new(self.rank, n, rows).expect("valid rows")
    }

    /// Integral and per-character membership data for `RP(F)`.
    pub fn rp_lattice(&self) -> Result<&ModuleLattice> {
        if let Some(l) = self.lattice.get() {
            return Ok(l);
        }
        let l = ModuleLattice::new(self.refined_presentation())?;
        Ok(self.lattice.get_or_init(|| l))
    }

    /// `gcd(2, q - 1)`.
    pub fn asym2_order(&self) -> u32 {
        if self.field.is_odd() {
            2
        } else {
            1
        }
    }

    fn check_lambda_domain(&self, x: FieldElement) -> Result<u32> {
        let v = self.field.validate(x)?;
        if v <= 1 {
            return Err(Error::Domain(format!("lambda is undefined at {v}")));
        }
        Ok(v)
    }

    /// `lambda_2([x]) = (1 - x) o x` in `asym^2(F^x)`.
    pub fn lambda_two(&self, x: FieldElement) -> Result<Asym2Element> {
        let v = self.check_lambda_domain(x)?;
        Ok(self.lambda_two_v(v))
    }

    fn lambda_two_v(&self, x: u32) -> Asym2Element {
        let modulus = self.asym2_order();
        let a = self.field.log_v(self.field.sub_v(1, x)).expect("x != 1") as u64;
        let b = self.field.log_v(x).expect("x != 0") as u64;
        Asym2Element { value: ((a * b) % modulus as u64) as u32, modulus }
    }

    /// `lambda_1([x]) = <<1 - x>><<x>>` in `I_F^2`.
    pub fn lambda_one(&self, x: FieldElement) -> Result<GroupRingElement> {
        let v = self.check_lambda_domain(x)?;
        Ok(self.lambda_one_v(v))
    }

    fn lambda_one_v(&self, x: u32) -> GroupRingElement {
        let a = GroupRingElement::pfister(self.rank, self.class_v(self.field.sub_v(1, x)));
        let b = GroupRingElement::pfister(self.rank, self.class_v(x));
        a.mul(&b).expect("same rank")
    }

    /// `lambda_1` of the generator `i` (zero for the `F_2` generator).
    fn lambda_one_gen(&self, i: usize) -> GroupRingElement {
        match self.generator_element(i) {
            Some(x) => self.lambda_one_v(x.value()),
            None => GroupRingElement::zero(self.rank),
        }
    }

    fn lambda_two_gen(&self, i: usize) -> u32 {
        match self.generator_element(i) {
            Some(x) => self.lambda_two_v(x.value()).value,
            None => 0,
        }
    }

    /// `lambda_1` extended `R_F`-linearly.
    pub fn lambda_one_of(&self, v: &SymbolVector) -> Result<GroupRingElement> {
        let mut acc = GroupRingElement::zero(self.rank);
        for (i, c) in v {
            acc = acc.add(&c.mul(&self.lambda_one_gen(*i))?)?;
        }
        Ok(acc)
    }

    /// `lambda_2` extended through the augmentation (the action on
    /// `asym^2` is trivial).
    pub fn lambda_two_of(&self, v: &SymbolVector) -> Result<Asym2Element> {
        let modulus = self.asym2_order();
        let mut acc = BigInt::from(0);
        for (i, c) in v {
            let aug = c.augmentation();
            if !aug.is_integer() {
                return Err(Error::NonIntegral);
            }
            acc += aug.to_integer() * BigInt::from(self.lambda_two_gen(*i));
        }
        let r = acc.mod_floor(&BigInt::from(modulus));
        Ok(Asym2Element { value: u32::try_from(&r).expect("small"), modulus })
    }

    /// The target of `Lambda = (lambda_1, lambda_2)`: a free rank-one module
    /// containing `I^2`, plus `asym^2` with trivial action.
    pub fn lambda_codomain(&self) -> RModulePresentation {
        let mut rels = vec![vec![(1, self.ring_int(self.asym2_order() as i64))]];
        for a in 1..1u64 << self.rank {
            rels.push(vec![(1, GroupRingElement::pfister(self.rank, a))]);
        }
        RModulePresentation::new(self.rank, 2, rels).expect("valid rows")
    }

    pub fn lambda_map(&self) -> Result<RModuleMap> {
        let images = (0..self.num_generators())
            .map(|i| vec![(0, self.lambda_one_gen(i)), (1, self.ring_int(self.lambda_two_gen(i) as i64))])
            .collect();
        RModuleMap::new(self.refined_presentation(), self.lambda_codomain(), images)
    }

    /// `B(F) = ker(lambda: P(F) -> asym^2(F^x))`.
    pub fn bloch_group(&self) -> Result<KernelPresentation> {
        let n = self.num_generators();
        let rows: Vec<SparseRow> = (0..n)
            .map(|i| match self.lambda_two_gen(i) {
                0 => Vec::new(),
                v => vec![(0, BigInt::from(v))],
            })
            .collect();
        let map = IntMatrix::from_sparse_rows(1, &rows)?;
        let target = FpPresentation::cyclic(self.asym2_order() as u64);
        crate::linalg::map_kernel(&self.prebloch_presentation(), &target, &map)
    }

    /// `RB(F) = ker(Lambda)`: the integral kernel and its eigenspaces after
    /// inverting 2.
    pub fn refined_bloch(&self) -> Result<RefinedBloch> {
        let map = self.lambda_map()?;
        let integral = map.z_kernel()?.presentation.invariants();
        let per_character = map.eigen_kernels()?;
        Ok(RefinedBloch { integral, per_character })
    }

    /// Z-span of the translates of `elements` inside `Z[G]`.
    pub(crate) fn ring_lattice(&self, elements: &[GroupRingElement]) -> Result<Echelon> {
        let mut rows = Vec::new();
        for e in elements {
            for h in 0..1u64 << self.rank {
                rows.push(crate::linalg::dense_to_sparse(&e.translate(h).integer_coefficients()?));
            }
        }
        Ok(Echelon::new(1 << self.rank, rows))
    }

    /// Whether `e` lies in `I_F^2`.
    pub fn in_augmentation_square(&self, e: &GroupRingElement) -> Result<bool> {
        let mut gens = Vec::new();
        for a in 1..1u64 << self.rank {
            for b in 1..1u64 << self.rank {
                gens.push(GroupRingElement::pfister(self.rank, a).mul(&GroupRingElement::pfister(self.rank, b))?);
            }
        }
        Ok(self.ring_lattice(&gens)?.contains(&e.integer_coefficients()?))
    }
}

/// Invariants of `RB(F)`.
#[derive(Clone, Debug, Serialize)]
pub struct RefinedBloch {
    pub integral: AbelianInvariants,
    /// Odd invariants of each eigenspace, trivial character first.
    pub per_character: Vec<(Character, AbelianInvariants)>,
}

impl RefinedBloch {
    pub fn trivial_part(&self) -> &AbelianInvariants {
        &self.per_character[0].1
    }

    /// `Z[1/2] RB_0(F)`: the eigenspaces of nontrivial characters.
    pub fn rb0(&self) -> Vec<(Character, AbelianInvariants)> {
        self.per_character.iter().filter(|(c, _)| !c.is_trivial()).cloned().collect()
    }

    pub fn rb0_is_trivial(&self) -> bool {
        self.rb0().iter().all(|(_, a)| a.is_trivial())
    }
}

/// The nontrivial-character part of `Z[1/2] RB(F)`.
pub fn rb0(f: &BlochField) -> Result<Vec<(Character, AbelianInvariants)>> {
    Ok(f.refined_bloch()?.rb0())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(q: u64) -> BlochField {
        BlochField::of_order(q).unwrap()
    }

    #[test]
    fn small_prebloch_groups() {
        assert!(bf(5).prebloch_presentation().invariants().odd_part().is_cyclic_of_order(3));
        assert!(bf(4).prebloch_presentation().invariants().is_cyclic_of_order(5));
        assert!(bf(2).prebloch_presentation().invariants().is_cyclic_of_order(3));
        assert!(bf(3).prebloch_presentation().invariants().is_cyclic_of_order(4));
    }

    #[test]
    fn coinvariants_recover_prebloch() {
        for q in [3, 4, 5, 7, 9] {
            let f = bf(q);
            assert_eq!(
                f.refined_presentation().coinvariants().unwrap(),
                f.prebloch_presentation().invariants(),
                "q={q}"
            );
        }
    }

    #[test]
    fn lambda_examples() {
        let f = bf(7);
        let k = f.field();
        let l = f.lambda_one(k.from_int(3)).unwrap();
        assert_eq!(l, GroupRingElement::pfister(1, 1).scale_int(-2));
        assert!(f.in_augmentation_square(&l).unwrap());
        assert!(bf(8).field().nonzero().skip(1).all(|x| bf(8).lambda_one(x).unwrap().is_zero()));
        let f5 = bf(5);
        assert_eq!(f5.lambda_two(f5.field().from_int(4)).unwrap().value, 0);
        assert!(f5.lambda_one(f5.field().one()).is_err());
    }

    #[test]
    fn bloch_orders() {
        assert!(bf(5).bloch_group().unwrap().presentation.invariants().is_cyclic_of_order(3));
        assert!(bf(7).bloch_group().unwrap().presentation.invariants().is_cyclic_of_order(4));
        assert!(bf(8).bloch_group().unwrap().presentation.invariants().is_cyclic_of_order(9));
        assert!(bf(3).bloch_group().unwrap().presentation.invariants().is_cyclic_of_order(2));
        assert!(bf(2).bloch_group().unwrap().presentation.invariants().is_cyclic_of_order(3));
    }

    #[test]
    fn refined_bloch_of_small_fields() {
        let rb = bf(5).refined_bloch().unwrap();
        assert!(rb.trivial_part().is_cyclic_of_order(3));
        assert!(rb.rb0_is_trivial());
        let rb3 = bf(3).refined_bloch().unwrap();
        assert!(rb3.integral.is_cyclic_of_order(2));
        let rb4 = bf(4).refined_bloch().unwrap();
        assert_eq!(rb4.per_character.len(), 1);
        assert!(rb4.trivial_part().is_cyclic_of_order(5));
    }
}

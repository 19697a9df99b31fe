//! The group ring `Z[G]` of an elementary abelian 2-group `G = (Z/2)^r`,
//! with coefficients allowed in `Z[1/2]`.
//!
//! Group elements are bitvectors (`u64`, bit `i` = basis generator `i`) and
//! multiply by XOR.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    map_kernel, AbelianInvariants, FpPresentation, IntMatrix, KernelPresentation, LatticeQuotient, Order, SparseRow,
};

/// Largest supported rank of a square-class group.
pub const MAX_RANK: usize = 16;

/// The square-class group `(Z/2)^r` with labels for its basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareClassGroup {
    rank: usize,
    labels: Vec<String>,
}

impl SquareClassGroup {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() > MAX_RANK {
            return Err(Error::Domain(format!("square-class rank {} exceeds {MAX_RANK}", labels.len())));
        }
        Ok(SquareClassGroup { rank: labels.len(), labels })
    }

    pub fn of_rank(rank: usize) -> Result<Self> {
        Self::new((0..rank).map(|i| format!("g{i}")).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> u64 {
        1 << self.rank
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.order()).map(move |signs| Character { rank: self.rank, signs })
    }

    pub fn trivial_character(&self) -> Character {
        Character { rank: self.rank, signs: 0 }
    }
}

/// A character `G -> {+1, -1}`, given by its values on the basis: bit `i` of
/// `signs` set means the `i`-th generator maps to `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Character {
    rank: usize,
    signs: u64,
}

impl Character {
    pub fn new(rank: usize, signs: u64) -> Result<Self> {
        if rank > MAX_RANK || (rank < 64 && signs >> rank != 0) {
            return Err(Error::Domain(format!("sign vector {signs:#b} does not fit rank {rank}")));
        }
        Ok(Character { rank, signs })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn signs(&self) -> u64 {
        self.signs
    }

    pub fn is_trivial(&self) -> bool {
        self.signs == 0
    }

    /// `chi(g)` as `+1` or `-1`.
    pub fn value(&self, g: u64) -> i64 {
        if (self.signs & g).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.rank {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if self.signs >> i & 1 == 1 { "-" } else { "+" })?;
        }
        write!(f, ")")
    }
}

fn is_dyadic(x: &BigRational) -> bool {
    let d = x.denom();
    let one = BigInt::one();
    (d & (d - &one)).is_zero()
}

/// An element of `Z[1/2][G]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    rank: usize,
    coeffs: BTreeMap<u64, BigRational>,
}

impl GroupRingElement {
    pub fn zero(rank: usize) -> Self {
        GroupRingElement { rank, coeffs: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::group_element(rank, 0)
    }

    pub fn from_int(rank: usize, n: i64) -> Self {
        Self::from_terms(rank, [(0, n)])
    }

    /// `<g>`.
    pub fn group_element(rank: usize, g: u64) -> Self {
        Self::from_terms(rank, [(g, 1)])
    }

    /// `<<g>> = <g> - 1`.
    pub fn pfister(rank: usize, g: u64) -> Self {
        Self::from_terms(rank, [(g, 1), (0, -1)])
    }

    /// `p_g^{+-} = 1 +- <g>`.
    pub fn p_sign(rank: usize, g: u64, plus: bool) -> Self {
        Self::from_terms(rank, [(0, 1), (g, if plus { 1 } else { -1 })])
    }

    /// Integer combination of group elements.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut e = Self::zero(rank);
        for (g, c) in terms {
            e.add_term(g, BigRational::from_integer(c.into()));
        }
        e
    }

    pub fn from_rational_terms(rank: usize, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Result<Self> {
        let mut e = Self::zero(rank);
        for (g, c) in terms {
            if !is_dyadic(&c) {
                return Err(Error::NonDyadic(c.to_string()));
            }
            if rank < 64 && g >> rank != 0 {
                return Err(Error::Domain(format!("group element {g:#b} outside rank {rank}")));
            }
            e.add_term(g, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, g: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(g).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&g);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs.iter().map(|(g, c)| (*g, c))
    }

    pub fn coefficient(&self, g: u64) -> BigRational {
        self.coeffs.get(&g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Sum of the coefficients; zero exactly on the augmentation ideal.
    pub fn augmentation(&self) -> BigRational {
        self.coeffs.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::MixedOwners(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coeffs {
            out.add_term(*g, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GroupRingElement { rank: self.rank, coeffs: self.coeffs.iter().map(|(g, c)| (*g, -c)).collect() }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.rank);
        for (g, c) in &self.coeffs {
            out.add_term(*g, c * k);
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Multiplication by the group element `<h>`.
    pub fn translate(&self, h: u64) -> Self {
        GroupRingElement { rank: self.rank, coeffs: self.coeffs.iter().map(|(g, c)| (g ^ h, c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.rank);
        for (g, a) in &self.coeffs {
            for (h, b) in &other.coeffs {
                out.add_term(g ^ h, a * b);
            }
        }
        Ok(out)
    }

    /// `rho_chi(self)`, the image under `<g> -> chi(g)`.
    pub fn evaluate(&self, chi: &Character) -> Result<BigRational> {
        if chi.rank != self.rank {
            return Err(Error::MixedOwners(self.rank, chi.rank));
        }
        Ok(self.coeffs.iter().fold(
            BigRational::zero(),
            |acc, (g, c)| {
                if chi.value(*g) == 1 {
                    acc + c
                } else {
                    acc - c
                }
            },
        ))
    }

    /// Integer coefficients, one per group element; fails on denominators.
    pub fn integer_coefficients(&self) -> Result<Vec<BigInt>> {
        let mut out = vec![BigInt::zero(); 1 << self.rank];
        for (g, c) in &self.coeffs {
            if !c.is_integer() {
                return Err(Error::NonIntegral);
            }
            out[*g as usize] = c.to_integer();
        }
        Ok(out)
    }
}

/// `ring_mul` of two elements with the same owner.
pub fn ring_mul(a: &GroupRingElement, b: &GroupRingElement) -> Result<GroupRingElement> {
    a.mul(b)
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (g, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = !a.is_one() || *g == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            if *g != 0 {
                write!(f, "<{g:b}>")?;
            }
        }
        Ok(())
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `e_S^{+-chi} = prod_{a in S} (1 +- chi(a) <a>) / 2`.
pub fn idempotent(rank: usize, set: &[u64], chi: &Character, plus: bool) -> Result<GroupRingElement> {
    if chi.rank != rank {
        return Err(Error::MixedOwners(rank, chi.rank));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut e = GroupRingElement::one(rank);
    for &a in set {
        let s = chi.value(a) * if plus { 1 } else { -1 };
        let factor = GroupRingElement::from_terms(rank, [(0, 1), (a, s)]).scale(&half);
        e = e.mul(&factor)?;
    }
    Ok(e)
}

/// One relation or module element: sparse generator index -> coefficient.
pub type RVector = Vec<(usize, GroupRingElement)>;

/// A finitely presented `R`-module: `generators` free generators modulo the
/// submodule generated by `relations`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RModulePresentation {
    rank: usize,
    generators: usize,
    relations: Vec<RVector>,
}

impl RModulePresentation {
    pub fn new(rank: usize, generators: usize, relations: Vec<RVector>) -> Result<Self> {
        let m = RModulePresentation { rank, generators, relations: Vec::new() };
        m.with_relations(relations)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[RVector] {
        &self.relations
    }

    fn check_vector(&self, v: &RVector) -> Result<()> {
        for (i, c) in v {
            if *i >= self.generators {
                return Err(Error::DimensionMismatch(format!(
                    "generator index {i} in a module with {} generators",
                    self.generators
                )));
            }
            if c.rank() != self.rank {
                return Err(Error::MixedOwners(self.rank, c.rank()));
            }
        }
        Ok(())
    }

    /// The quotient by additional relations.
    pub fn with_relations(&self, extra: Vec<RVector>) -> Result<Self> {
        let mut out = self.clone();
        for v in extra {
            self.check_vector(&v)?;
            let v = normalize(v);
            if !v.is_empty() {
                out.relations.push(v);
            }
        }
        Ok(out)
    }

    /// Restriction of scalars to `Z`: generator `i` and group element `g`
    /// become the `Z`-generator `i * 2^r + g`; each relation contributes its
    /// translates by every group element.
    pub fn z_expand(&self) -> Result<(IntMatrix, usize)> {
        let order = 1usize << self.rank;
        let cols = self.generators * order;
        let mut rows: Vec<SparseRow> = Vec::with_capacity(self.relations.len() * order);
        for rel in &self.relations {
            for h in 0..order as u64 {
                let mut row = Vec::new();
                for (i, c) in rel {
                    for (g, a) in c.translate(h).terms() {
                        if !a.is_integer() {
                            return Err(Error::NonIntegral);
                        }
                        row.push((i * order + g as usize, a.to_integer()));
                    }
                }
                row.sort_by_key(|(j, _)| *j);
                rows.push(row);
            }
        }
        Ok((IntMatrix::from_sparse_rows(cols, &rows)?, cols))
    }

    /// A module element as a vector over the `Z`-generators of [`Self::z_expand`].
    pub fn z_vector(&self, v: &RVector) -> Result<Vec<BigInt>> {
        self.check_vector(v)?;
        let order = 1usize << self.rank;
        let mut out = vec![BigInt::zero(); self.generators * order];
        for (i, c) in v {
            for (g, a) in c.integer_coefficients()?.into_iter().enumerate() {
                out[i * order + g] += a;
            }
        }
        Ok(out)
    }

    /// Integer presentation of `M_chi = M / (<g> - chi(g))`, each relation
    /// scaled by the least power of 2 clearing its denominators. Exact when
    /// all coefficients are integral, up to 2-torsion otherwise.
    pub fn character_specialize(&self, chi: &Character) -> Result<(IntMatrix, usize)> {
        let rows = self
            .relations
            .iter()
            .map(|rel| self.specialize_vector(rel, chi).map(|(row, _)| row))
            .collect::<Result<Vec<_>>>()?;
        Ok((IntMatrix::from_sparse_rows(self.generators, &rows)?, self.generators))
    }

    /// `rho_chi(v)` scaled by `2^k` to be integral; returns the row and `k`.
    pub fn specialize_vector(&self, v: &RVector, chi: &Character) -> Result<(SparseRow, u32)> {
        self.check_vector(v)?;
        let mut vals: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (i, c) in v {
            *vals.entry(*i).or_insert_with(BigRational::zero) += c.evaluate(chi)?;
        }
        let k = vals.values().map(|x| x.denom().bits().saturating_sub(1) as u32).max().unwrap_or(0);
        let scale = BigRational::from_integer(BigInt::one() << k);
        let row = vals.into_iter().map(|(i, x)| (i, (x * &scale).to_integer())).filter(|(_, x)| !x.is_zero()).collect();
        Ok((row, k))
    }

    /// The coinvariants `M_G` (trivial character); exact for integral modules.
    pub fn coinvariants(&self) -> Result<AbelianInvariants> {
        let (m, _) = self.character_specialize(&Character { rank: self.rank, signs: 0 })?;
        Ok(LatticeQuotient::new(&m).invariants())
    }

    /// Invariants of the underlying abelian group.
    pub fn z_invariants(&self) -> Result<AbelianInvariants> {
        let (m, _) = self.z_expand()?;
        Ok(LatticeQuotient::new(&m).invariants())
    }

    /// Odd invariants of each eigenspace `M_chi`, characters in sign order.
    pub fn character_odd_invariants(&self) -> Result<Vec<(Character, AbelianInvariants)>> {
        use rayon::prelude::*;
        let chars: Vec<Character> = (0..1u64 << self.rank).map(|s| Character { rank: self.rank, signs: s }).collect();
        chars
            .into_par_iter()
            .map(|chi| {
                let (m, _) = self.character_specialize(&chi)?;
                Ok((chi, LatticeQuotient::new(&m).invariants().odd_part()))
            })
            .collect()
    }

    /// Direct sum of the odd parts of all eigenspaces; equals the odd part of
    /// [`Self::z_invariants`].
    pub fn merged_odd_invariants(&self) -> Result<AbelianInvariants> {
        let parts = self.character_odd_invariants()?;
        Ok(AbelianInvariants::sum_all(parts.iter().map(|(_, a)| a)))
    }
}

/// Membership and order queries for elements of a presented module, with the
/// integral quotient and each eigenspace quotient built once.
#[derive(Clone, Debug)]
pub struct ModuleLattice {
    module: RModulePresentation,
    z: LatticeQuotient,
    eigen: Vec<(Character, LatticeQuotient)>,
}

impl ModuleLattice {
    pub fn new(module: RModulePresentation) -> Result<Self> {
        use rayon::prelude::*;
        let (zm, _) = module.z_expand()?;
        let z = LatticeQuotient::new(&zm);
        let eigen = (0..1u64 << module.rank)
            .into_par_iter()
            .map(|s| {
                let chi = Character { rank: module.rank, signs: s };
                let (m, _) = module.character_specialize(&chi)?;
                Ok((chi, LatticeQuotient::new(&m)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleLattice { module, z, eigen })
    }

    pub fn module(&self) -> &RModulePresentation {
        &self.module
    }

    pub fn z_quotient(&self) -> &LatticeQuotient {
        &self.z
    }

    pub fn invariants(&self) -> AbelianInvariants {
        self.z.invariants()
    }

    /// `v = 0` in the module.
    pub fn is_zero(&self, v: &RVector) -> Result<bool> {
        self.z.contains(&self.module.z_vector(v)?)
    }

    /// `v = 0` after inverting 2, decided eigenspace by eigenspace.
    pub fn is_zero_after_inverting_two(&self, v: &RVector) -> Result<bool> {
        for (chi, q) in &self.eigen {
            let (row, _) = self.module.specialize_vector(v, chi)?;
            let dense = crate::linalg::sparse_to_dense(&row, self.module.generators);
            if q.contains_after_inverting_two(&dense)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn order(&self, v: &RVector) -> Result<Order> {
        self.z.order(&self.module.z_vector(v)?)
    }

    /// Invariants of the `R`-submodule generated by the given elements.
    pub fn submodule_invariants(&self, gens: &[RVector]) -> Result<AbelianInvariants> {
        let mut zgens = Vec::new();
        for g in gens {
            for h in 0..1u64 << self.module.rank {
                let t: RVector = g.iter().map(|(i, c)| (*i, c.translate(h))).collect();
                zgens.push(self.module.z_vector(&t)?);
            }
        }
        self.z.subgroup_invariants(&zgens)
    }
}

/// An `R`-linear map between presented modules: row `i` is the image of
/// domain generator `i`.
#[derive(Clone, Debug)]
pub struct RModuleMap {
    pub domain: RModulePresentation,
    pub codomain: RModulePresentation,
    pub images: Vec<RVector>,
}

impl RModuleMap {
    pub fn new(domain: RModulePresentation, codomain: RModulePresentation, images: Vec<RVector>) -> Result<Self> {
        if domain.rank != codomain.rank {
            return Err(Error::MixedOwners(domain.rank, codomain.rank));
        }
        if images.len() != domain.generators {
            return Err(Error::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                domain.generators
            )));
        }
        for im in &images {
            codomain.check_vector(im)?;
        }
        let images = images.into_iter().map(normalize).collect();
        Ok(RModuleMap { domain, codomain, images })
    }

    /// Image of a domain element.
    pub fn apply(&self, v: &RVector) -> Result<RVector> {
        self.domain.check_vector(v)?;
        let mut out = Vec::new();
        for (i, c) in v {
            for (j, d) in &self.images[*i] {
                out.push((*j, c.mul(d)?));
            }
        }
        Ok(normalize(out))
    }

    /// The map after restriction of scalars to `Z`.
    pub fn z_matrix(&self) -> Result<IntMatrix> {
        let order = 1usize << self.domain.rank;
        let mut rows = Vec::with_capacity(self.images.len() * order);
        for im in &self.images {
            for h in 0..order as u64 {
                let t: RVector = im.iter().map(|(j, c)| (*j, c.translate(h))).collect();
                rows.push(crate::linalg::dense_to_sparse(&self.codomain.z_vector(&t)?));
            }
        }
        IntMatrix::from_sparse_rows(self.codomain.generators * order, &rows)
    }

    /// The induced map `M_chi -> N_chi`; images must be integral.
    pub fn specialized_matrix(&self, chi: &Character) -> Result<IntMatrix> {
        let mut rows = Vec::with_capacity(self.images.len());
        for im in &self.images {
            let (row, k) = self.codomain.specialize_vector(im, chi)?;
            if k != 0 {
                return Err(Error::NonIntegral);
            }
            rows.push(row);
        }
        IntMatrix::from_sparse_rows(self.codomain.generators, &rows)
    }

    /// Kernel of the underlying homomorphism of abelian groups.
    pub fn z_kernel(&self) -> Result<KernelPresentation> {
        let (dm, dn) = self.domain.z_expand()?;
        let (cm, cn) = self.codomain.z_expand()?;
        map_kernel(&FpPresentation::new(dn, dm)?, &FpPresentation::new(cn, cm)?, &self.z_matrix()?)
    }

    /// Odd invariants of the kernel restricted to each eigenspace.
    pub fn eigen_kernels(&self) -> Result<Vec<(Character, AbelianInvariants)>> {
        use rayon::prelude::*;
        (0..1u64 << self.domain.rank)
            .into_par_iter()
            .map(|s| {
                let chi = Character { rank: self.domain.rank, signs: s };
                let (dm, dn) = self.domain.character_specialize(&chi)?;
                let (cm, cn) = self.codomain.character_specialize(&chi)?;
                let k = map_kernel(
                    &FpPresentation::new(dn, dm)?,
                    &FpPresentation::new(cn, cm)?,
                    &self.specialized_matrix(&chi)?,
                )?;
                Ok((chi, k.presentation.invariants().odd_part()))
            })
            .collect()
    }
}

/// Merges repeated generator indices and drops zero coefficients.
pub fn normalize(v: RVector) -> RVector {
    let mut acc: BTreeMap<usize, GroupRingElement> = BTreeMap::new();
    for (i, c) in v {
        match acc.get_mut(&i) {
            Some(e) => *e = e.add(&c).expect("same owner checked by caller"),
            None => {
                acc.insert(i, c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

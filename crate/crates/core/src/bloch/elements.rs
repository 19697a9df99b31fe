use serde::Serialize;

use super::{BlochField, SymbolVector};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group_ring::{normalize, GroupRingElement, ModuleLattice, RModulePresentation};
use crate::linalg::{AbelianInvariants, Order};

/// `c * v` for a ring element `c`.
pub(crate) fn scale(v: &SymbolVector, c: &GroupRingElement) -> SymbolVector {
    normalize(v.iter().map(|(i, a)| (*i, a.mul(c).expect("same rank"))).collect())
}

pub(crate) fn add(a: &SymbolVector, b: &SymbolVector) -> SymbolVector {
    normalize(a.iter().chain(b.iter()).cloned().collect())
}

pub(crate) fn sub(a: &SymbolVector, b: &SymbolVector) -> SymbolVector {
    normalize(a.iter().cloned().chain(b.iter().map(|(i, c)| (*i, c.neg()))).collect())
}

/// `psi_1(x) = [x] + <-1>[x^-1]`, `psi_2(x) = <1-x>(<x>[x] + [x^-1])`, both
/// zero at `x = 1`.
pub fn suslin_element(f: &BlochField, i: u8, x: FieldElement) -> Result<SymbolVector> {
    let k = f.field();
    if k.validate(x)? == 0 {
        return Err(Error::DivisionByZero);
    }
    if x.is_one() {
        return Ok(Vec::new());
    }
    let xi = k.inv(x)?;
    let sx = f.symbol(x)?;
    let sxi = f.symbol(xi)?;
    match i {
        1 => Ok(add(&sx, &scale(&sxi, &f.group_element(f.minus_one())?))),
        2 => {
            let inner = add(&scale(&sx, &f.group_element(x)?), &sxi);
            let one_m_x = k.sub(k.one(), x)?;
            Ok(scale(&inner, &f.group_element(one_m_x)?))
        }
        _ => Err(Error::Domain(format!("no Suslin element psi_{i}"))),
    }
}

/// `C(x) = [x] + <-1>[1-x] + <<1-x>> psi_1(x)`.
pub fn constant_candidate(f: &BlochField, x: FieldElement) -> Result<SymbolVector> {
    let k = f.field();
    let one_m_x = k.sub(k.one(), x)?;
    if x.is_zero() || one_m_x.is_zero() {
        return Err(Error::Domain("C(x) needs x outside {0, 1}".into()));
    }
    let t1 = f.symbol(x)?;
    let t2 = scale(&f.symbol(one_m_x)?, &f.group_element(f.minus_one())?);
    let t3 = scale(&suslin_element(f, 1, x)?, &f.pfister(one_m_x)?);
    Ok(add(&add(&t1, &t2), &t3))
}

/// The constants `b_F` and `c_F = 2 b_F` with their orders in `RP(F)`.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantB {
    /// Base point of the constancy check (absent for `F_2`, `F_3`).
    pub x0: Option<u32>,
    #[serde(skip)]
    pub b: SymbolVector,
    #[serde(skip)]
    pub c: SymbolVector,
    pub b_order: Order,
    pub c_order: Order,
    pub constancy_checked: usize,
    /// Encodings of `x` with `C(x) != C(x0)`.
    pub constancy_failures: Vec<u32>,
    pub six_b_zero: bool,
}

pub fn constant_b(f: &BlochField) -> Result<ConstantB> {
    use rayon::prelude::*;
    let lat = f.rp_lattice()?;
    let k = f.field();
    let (x0, b, checked, failures) = match f.q() {
        2 => (None, vec![(0, f.ring_int(1))], 0, Vec::new()),
        3 => (None, suslin_element(f, 1, f.minus_one())?, 0, Vec::new()),
        _ => {
            let x0 = k.element(2)?;
            let b = constant_candidate(f, x0)?;
            let others: Vec<u32> = (3..f.q()).collect();
            let fails = others
                .par_iter()
                .map(|&v| {
                    let cx = constant_candidate(f, k.element(v)?)?;
                    Ok((v, lat.is_zero(&sub(&cx, &b))?))
                })
                .collect::<Result<Vec<_>>>()?;
            let failures = fails.into_iter().filter(|(_, ok)| !ok).map(|(v, _)| v).collect();
            (Some(2), b, others.len(), failures)
        }
    };
    let c = scale(&b, &f.ring_int(2));
    Ok(ConstantB {
        x0,
        b_order: lat.order(&b)?,
        c_order: lat.order(&c)?,
        six_b_zero: lat.is_zero(&scale(&b, &f.ring_int(6)))?,
        constancy_checked: checked,
        constancy_failures: failures,
        b,
        c,
    })
}

/// Outcome of an identity check over a parameter range.
#[derive(Clone, Debug, Default, Serialize)]
pub struct IdentityTally {
    pub checked: usize,
    /// Parameters (element encodings) where the identity fails after inverting 2.
    pub failures: Vec<Vec<u32>>,
    /// Parameters where it fails integrally.
    pub integral_failures: Vec<Vec<u32>>,
}

impl IdentityTally {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn holds_integrally(&self) -> bool {
        self.integral_failures.is_empty()
    }

    /// Checks `v(params) = 0` for every parameter in parallel, in order.
    pub(crate) fn sweep_single<F>(lat: &ModuleLattice, xs: Vec<u32>, f: F) -> Result<Self>
    where
        F: Fn(u32) -> Result<SymbolVector> + Sync,
    {
        Self::sweep(lat, xs.into_iter().map(|x| vec![x]).collect(), |p| f(p[0]))
    }

    pub(crate) fn sweep<F>(lat: &ModuleLattice, params: Vec<Vec<u32>>, f: F) -> Result<Self>
    where
        F: Fn(&[u32]) -> Result<SymbolVector> + Sync,
    {
        use rayon::prelude::*;
        let rows = params
            .par_iter()
            .map(|p| {
                let v = f(p)?;
                let zero = lat.is_zero(&v)?;
                let half = zero || lat.is_zero_after_inverting_two(&v)?;
                Ok((p.clone(), zero, half))
            })
            .collect::<Result<Vec<(Vec<u32>, bool, bool)>>>()?;
        let mut t = IdentityTally { checked: rows.len(), ..Default::default() };
        for (p, zero, half) in rows {
            if !half {
                t.failures.push(p.clone());
            }
            if !zero {
                t.integral_failures.push(p);
            }
        }
        Ok(t)
    }
}

/// The module `D_F` generated by `c_F`, with the two identities relating it
/// to the Suslin elements.
#[derive(Clone, Debug, Serialize)]
pub struct DfModule {
    pub invariants: AbelianInvariants,
    pub c_order: Order,
    pub rsq_order: u64,
    /// `<<x>> c_F = psi_1(x) - psi_2(x)` for all `x`.
    pub difference_identity: IdentityTally,
    /// `<<x>> c_F = 0` for `x` in `+-N`.
    pub norm_identity: IdentityTally,
    pub norm_count: usize,
}

pub fn df_module(f: &BlochField, consts: &ConstantB) -> Result<DfModule> {
    let lat = f.rp_lattice()?;
    let k = f.field();
    let xs: Vec<u32> = (1..f.q()).collect();
    let difference_identity = IdentityTally::sweep_single(lat, xs, |v| {
        let x = k.element(v)?;
        let lhs = scale(&consts.c, &f.pfister(x)?);
        let rhs = sub(&suslin_element(f, 1, x)?, &suslin_element(f, 2, x)?);
        Ok(sub(&lhs, &rhs))
    })?;
    let norms: Vec<u32> = k.plus_minus_norms().iter().map(|x| x.value()).collect();
    let norm_count = norms.len();
    let norm_identity = IdentityTally::sweep_single(lat, norms, |v| Ok(scale(&consts.c, &f.pfister(k.element(v)?)?)))?;
    Ok(DfModule {
        invariants: lat.submodule_invariants(std::slice::from_ref(&consts.c))?,
        c_order: consts.c_order.clone(),
        rsq_order: k.rsq_order(),
        difference_identity,
        norm_identity,
        norm_count,
    })
}

/// `RP'''(F) = RP(F) / (K^(1) + I D_F)` and `RP''(F) = RP(F) / (K^(1) + D_F)`.
#[derive(Clone, Debug)]
pub struct ReducedQuotients {
    pub rp3: RModulePresentation,
    pub rp2: RModulePresentation,
}

pub fn reduced_quotients(f: &BlochField, consts: &ConstantB) -> Result<ReducedQuotients> {
    let k = f.field();
    let base = f.refined_presentation();
    let mut k1 = Vec::new();
    for x in k.nonzero().skip(1) {
        let s = suslin_element(f, 1, x)?;
        if !s.is_empty() {
            k1.push(s);
        }
    }
    let mut idf = Vec::new();
    for a in 1..1u64 << f.rank() {
        idf.push(scale(&consts.c, &GroupRingElement::pfister(f.rank(), a)));
    }
    let rp3 = base.with_relations(k1.iter().cloned().chain(idf).collect())?;
    let rp2 = base.with_relations(k1.into_iter().chain(std::iter::once(consts.c.clone())).collect())?;
    Ok(ReducedQuotients { rp3, rp2 })
}

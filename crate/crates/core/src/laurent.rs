//! Truncated Laurent series over `F_q` (q odd) and the specialization map
//! `RP(F_q((t))) -> RP'''(F_q)_F`.
//!
//! A series is `t^v (c_0 + c_1 t + ... + c_{N-1} t^{N-1} + O(t^N))` with
//! `c_0 != 0`. Every operation returns the number of coefficients it can
//! guarantee; when cancellation eats all of them the result is
//! [`Error::PrecisionExhausted`].

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bloch::{constant_b, reduced_quotients};
use crate::bloch::{BlochField, SymbolVector};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField, SquareClass};
use crate::group_ring::{normalize, GroupRingElement, ModuleLattice, RModulePresentation};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Rank of `sq(F_q((t)))` for odd `q`: bit 0 is the residue class, bit 1 the
/// parity of the valuation.
pub const LAURENT_RANK: usize = 2;

#[derive(Clone)]
pub struct TruncatedLaurentSeries {
    field: FiniteField,
    v: i64,
    coeffs: Vec<u32>,
}

impl PartialEq for TruncatedLaurentSeries {
    /// Agreement to the common absolute precision.
    fn eq(&self, other: &Self) -> bool {
        if self.field.spec() != other.field.spec() || self.v != other.v {
            return false;
        }
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

impl fmt::Debug for TruncatedLaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedLaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.v + k as i64;
            let c = self.field.format(self.field.element(c).expect("own coefficient"));
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        write!(f, " + O(t^{})", self.absolute_precision())
    }
}

impl TruncatedLaurentSeries {
    /// `t^v * sum c_k t^k` with `N = coeffs.len()` known coefficients.
    pub fn new(field: &FiniteField, v: i64, coeffs: Vec<FieldElement>) -> Result<Self> {
        if !field.is_odd() {
            return Err(Error::Domain("Laurent series are modelled over odd q only".into()));
        }
        let raw = coeffs.iter().map(|&c| field.validate(c)).collect::<Result<Vec<u32>>>()?;
        match raw.first() {
            None => Err(Error::Domain("precision must be at least 1".into())),
            Some(0) => Err(Error::Domain("leading coefficient must be nonzero".into())),
            Some(_) => Ok(TruncatedLaurentSeries { field: field.clone(), v, coeffs: raw }),
        }
    }

    fn from_raw(field: &FiniteField, v: i64, coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.first().is_some_and(|&c| c != 0));
        TruncatedLaurentSeries { field: field.clone(), v, coeffs }
    }

    /// `c t^v` known to `n` coefficients.
    pub fn monomial(field: &FiniteField, c: FieldElement, v: i64, n: usize) -> Result<Self> {
        let mut coeffs = vec![field.zero(); n.max(1)];
        coeffs[0] = c;
        Self::new(field, v, coeffs)
    }

    pub fn constant(field: &FiniteField, c: FieldElement, n: usize) -> Result<Self> {
        Self::monomial(field, c, 0, n)
    }

    pub fn one(field: &FiniteField, n: usize) -> Result<Self> {
        Self::constant(field, field.one(), n)
    }

    /// The uniformizer `t`.
    pub fn t(field: &FiniteField, n: usize) -> Result<Self> {
        Self::monomial(field, field.one(), 1, n)
    }

    /// Valuation `v` uniform in `vals`, leading coefficient uniform in
    /// `F^x`, the rest uniform in `F`.
    pub fn random<R: Rng>(
        field: &FiniteField,
        vals: std::ops::RangeInclusive<i64>,
        n: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("precision must be at least 1".into()));
        }
        let q = field.q();
        let v = rng.gen_range(vals);
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(rng.gen_range(1..q));
        for _ in 1..n {
            coeffs.push(rng.gen_range(0..q));
        }
        Ok(Self::from_raw(field, v, coeffs))
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn valuation(&self) -> i64 {
        self.v
    }

    /// Relative precision `N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn absolute_precision(&self) -> i64 {
        self.v + self.coeffs.len() as i64
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs.iter().map(|&c| self.field.element(c).expect("own coefficient")).collect()
    }

    pub fn leading_coefficient(&self) -> FieldElement {
        self.field.element(self.coeffs[0]).expect("own coefficient")
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.spec() != other.field.spec() {
            return Err(Error::MixedFields {
                left: self.field.spec().to_string(),
                right: other.field.spec().to_string(),
            });
        }
        Ok(())
    }

    /// Coefficient of `t^e`, zero below the valuation; `e` must be below the
    /// absolute precision.
    fn coeff_at(&self, e: i64) -> u32 {
        if e < self.v {
            0
        } else {
            self.coeffs[(e - self.v) as usize]
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let lo = self.v.min(other.v);
        let hi = self.absolute_precision().min(other.absolute_precision());
        let f = &self.field;
        let mut out: Vec<u32> = (lo..hi.max(lo)).map(|e| f.add_v(self.coeff_at(e), other.coeff_at(e))).collect();
        let lead = out.iter().position(|&c| c != 0);
        match lead {
            Some(k) => {
                out.drain(..k);
                Ok(Self::from_raw(f, lo + k as i64, out))
            }
            None => Err(Error::PrecisionExhausted(format!("sum vanishes to O(t^{hi})"))),
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&c| self.field.neg_v(c)).collect();
        Self::from_raw(&self.field, self.v, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.precision().min(other.precision());
        let f = &self.field;
        let mut out = vec![0u32; n];
        for (i, &a) in self.coeffs.iter().take(n).enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = f.add_v(out[i + j], f.mul_v(a, b));
            }
        }
        Ok(Self::from_raw(f, self.v + other.v, out))
    }

    /// Inverse via the geometric series of the unit part.
    pub fn inv(&self) -> Result<Self> {
        let f = &self.field;
        let n = self.precision();
        let c0i = f.inv_v(self.coeffs[0]).ok_or(Error::DivisionByZero)?;
        // unit part u = c0 (1 - w) with w = -(c_k / c0) t^k, k >= 1; 1/u = c0^-1 sum w^j
        let w: Vec<u32> = (0..n).map(|k| if k == 0 { 0 } else { f.neg_v(f.mul_v(self.coeffs[k], c0i)) }).collect();
        let mut out = vec![0u32; n];
        out[0] = 1;
        // out = 1 + w * out, iterated; each pass fixes one more coefficient
        for _ in 1..n {
            let mut next = vec![0u32; n];
            next[0] = 1;
            for (i, &a) in w.iter().enumerate().skip(1) {
                if a == 0 {
                    continue;
                }
                for j in 0..n - i {
                    next[i + j] = f.add_v(next[i + j], f.mul_v(a, out[j]));
                }
            }
            out = next;
        }
        let out = out.into_iter().map(|c| f.mul_v(c, c0i)).collect();
        Ok(Self::from_raw(f, -self.v, out))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// `1 - a`.
    pub fn one_minus(&self) -> Result<Self> {
        let f = &self.field;
        if self.v < 0 {
            // 1 sits above the valuation; it only matters inside the known range
            let mut out = self.neg().coeffs;
            if let Some(c) = out.get_mut((-self.v) as usize) {
                *c = f.add_v(*c, 1);
            }
            return Ok(Self::from_raw(f, self.v, out));
        }
        let one = Self::one(f, self.absolute_precision().max(1) as usize)?;
        one.sub(self)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(&self.field, self.precision())?;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Whether the series lies in `U_1 = 1 + tF[[t]]` to the known precision.
    pub fn is_one_unit(&self) -> bool {
        self.v == 0 && self.coeffs[0] == 1
    }

    /// Residue `a mod t`, for units.
    pub fn residue(&self) -> Result<FieldElement> {
        if self.v != 0 {
            return Err(Error::Domain(format!("residue of a series of valuation {}", self.v)));
        }
        Ok(self.leading_coefficient())
    }
}

/// Square class in `F_q((t))^x / squares`, determined by the valuation
/// parity and the class of the leading coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentSquareClass {
    pub parity: u8,
    pub residue: SquareClass,
}

impl LaurentSquareClass {
    /// Group element of `sq(F)` in the rank-2 encoding.
    pub fn element(self) -> u64 {
        self.residue.bit() | (u64::from(self.parity) << 1)
    }

    pub fn from_element(g: u64) -> Self {
        LaurentSquareClass {
            parity: ((g >> 1) & 1) as u8,
            residue: if g & 1 == 1 { SquareClass::Nontrivial } else { SquareClass::Trivial },
        }
    }

    pub fn is_trivial(self) -> bool {
        self.element() == 0
    }
}

pub fn laurent_square_class(a: &TruncatedLaurentSeries) -> LaurentSquareClass {
    LaurentSquareClass {
        parity: a.v.rem_euclid(2) as u8,
        residue: a.field.square_class(a.leading_coefficient()).expect("nonzero leading coefficient"),
    }
}

impl std::ops::Mul for LaurentSquareClass {
    type Output = Self;

    // sq(F) is elementary abelian: multiplication is xor of the bits
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Self) -> Self {
        Self::from_element(self.element() ^ other.element())
    }
}

/// Re-reads a ring element of `R_k` inside `R_F` along `sq(k) -> sq(F)`.
fn embed(e: &GroupRingElement) -> GroupRingElement {
    GroupRingElement::from_rational_terms(LAURENT_RANK, e.terms().map(|(g, c)| (g, c.clone()))).expect("dyadic")
}

fn embed_vector(v: &SymbolVector) -> SymbolVector {
    normalize(v.iter().map(|(i, c)| (*i, embed(c))).collect())
}

/// `RP'''(k)` induced up to `R_F`, with `b_k` and membership data.
pub struct SpecializationTarget {
    residue: BlochField,
    b: SymbolVector,
    lattice: ModuleLattice,
}

impl SpecializationTarget {
    pub fn new(field: &FiniteField) -> Result<Self> {
        if !field.is_odd() {
            return Err(Error::Domain("specialization is modelled for odd q only".into()));
        }
        let residue = BlochField::new(field.clone());
        let consts = constant_b(&residue)?;
        let rq = reduced_quotients(&residue, &consts)?;
        let rels = rq.rp3.relations().iter().map(embed_vector).collect();
        let induced = RModulePresentation::new(LAURENT_RANK, rq.rp3.generators(), rels)?;
        Ok(SpecializationTarget { b: embed_vector(&consts.b), lattice: ModuleLattice::new(induced)?, residue })
    }

    pub fn residue(&self) -> &BlochField {
        &self.residue
    }

    pub fn presentation(&self) -> &RModulePresentation {
        self.lattice.module()
    }

    pub fn lattice(&self) -> &ModuleLattice {
        &self.lattice
    }

    /// `1 (x) b_k` in the induced module.
    pub fn b(&self) -> &SymbolVector {
        &self.b
    }
}

/// `S_v([a])`: `[a bar]` for units, `b_k` for `v > 0`, `-b_k` for `v < 0`.
pub fn specialize(a: &TruncatedLaurentSeries, target: &SpecializationTarget) -> Result<SymbolVector> {
    if a.field.spec() != target.residue.field().spec() {
        return Err(Error::MixedFields {
            left: a.field.spec().to_string(),
            right: target.residue.field().spec().to_string(),
        });
    }
    Ok(match a.v.signum() {
        0 => embed_vector(&target.residue.symbol(a.leading_coefficient())?),
        1 => target.b.clone(),
        _ => normalize(target.b.iter().map(|(i, c)| (*i, c.neg())).collect()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Zero,
    Nonzero,
    Inconclusive,
}

/// Outcome of specializing one relation `S_{x,y}`.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub status: CheckStatus,
    /// Whether the image also vanishes before inverting 2.
    pub integral_zero: Option<bool>,
    pub detail: Option<String>,
}

/// The five arguments and coefficient classes of `S_{x,y}`.
fn relation_terms(
    x: &TruncatedLaurentSeries,
    y: &TruncatedLaurentSeries,
) -> Result<[(TruncatedLaurentSeries, i64, LaurentSquareClass); 5]> {
    let xi = x.inv()?;
    let yi = y.inv()?;
    let one_m_xi = xi.one_minus()?;
    let one_m_x = x.one_minus()?;
    let a3 = y.div(x)?;
    let a4 = one_m_xi.div(&yi.one_minus()?)?;
    let a5 = one_m_x.div(&y.one_minus()?)?;
    let trivial = LaurentSquareClass::from_element(0);
    Ok([
        (x.clone(), 1, trivial),
        (y.clone(), -1, trivial),
        (a3, 1, laurent_square_class(x)),
        (a4, -1, laurent_square_class(&one_m_xi.neg())),
        (a5, 1, laurent_square_class(&one_m_x)),
    ])
}

/// Image of `S_{x,y}` under `S_v`.
pub fn specialized_relation(
    x: &TruncatedLaurentSeries,
    y: &TruncatedLaurentSeries,
    target: &SpecializationTarget,
) -> Result<SymbolVector> {
    let mut acc = Vec::new();
    for (arg, sign, class) in relation_terms(x, y)? {
        let g = GroupRingElement::group_element(LAURENT_RANK, class.element()).scale_int(sign);
        for (i, c) in specialize(&arg, target)? {
            acc.push((i, c.mul(&g)?));
        }
    }
    Ok(normalize(acc))
}

pub fn relation_specialization_check(
    x: &TruncatedLaurentSeries,
    y: &TruncatedLaurentSeries,
    target: &SpecializationTarget,
) -> Result<RelationCheck> {
    let image = match specialized_relation(x, y, target) {
        Ok(v) => v,
        Err(Error::PrecisionExhausted(msg)) => {
            return Ok(RelationCheck { status: CheckStatus::Inconclusive, integral_zero: None, detail: Some(msg) })
        }
        Err(e) => return Err(e),
    };
    let lat = target.lattice();
    let integral = lat.is_zero(&image)?;
    let half = integral || lat.is_zero_after_inverting_two(&image)?;
    Ok(RelationCheck {
        status: if half { CheckStatus::Zero } else { CheckStatus::Nonzero },
        integral_zero: Some(integral),
        detail: None,
    })
}

/// A failing fuzz sample.
#[derive(Clone, Debug, Serialize)]
pub struct FuzzFailure {
    pub sample: usize,
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub q: u64,
    pub precision: usize,
    pub samples: usize,
    pub seed: u64,
    pub zero: usize,
    pub integral_zero: usize,
    pub failures: Vec<FuzzFailure>,
    /// Draws discarded for precision exhaustion and resampled.
    pub inconclusive: usize,
    /// Samples still inconclusive after all resampling attempts.
    pub unresolved: usize,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.unresolved == 0
    }

    /// Inconclusive draws over all draws.
    pub fn inconclusive_rate(&self) -> f64 {
        let draws = self.samples + self.inconclusive;
        if draws == 0 {
            0.0
        } else {
            self.inconclusive as f64 / draws as f64
        }
    }
}

const MAX_RESAMPLES: usize = 32;

enum SampleOutcome {
    Done { integral: bool, failure: Option<FuzzFailure>, retries: usize },
    Unresolved { retries: usize },
}

/// Checks `S_{x,y}` on `samples` seeded pairs with valuations in `[-3, 3]`.
/// Sample `i` draws from its own ChaCha stream, so the result does not depend
/// on scheduling.
pub fn fuzz(field: &FiniteField, precision: usize, samples: usize, seed: u64) -> Result<FuzzReport> {
    use rayon::prelude::*;
    if precision == 0 {
        return Err(Error::Config("precision must be at least 1".into()));
    }
    let target = SpecializationTarget::new(field)?;
    let outcomes = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for retries in 0..MAX_RESAMPLES {
                let x = TruncatedLaurentSeries::random(field, -3..=3, precision, &mut rng)?;
                let y = TruncatedLaurentSeries::random(field, -3..=3, precision, &mut rng)?;
                if x == y || x.one_minus().is_err() || y.one_minus().is_err() {
                    // x = y or x = 1 to the known precision
                    continue;
                }
                let r = relation_specialization_check(&x, &y, &target)?;
                match r.status {
                    CheckStatus::Inconclusive => continue,
                    CheckStatus::Zero => {
                        return Ok(SampleOutcome::Done {
                            integral: r.integral_zero == Some(true),
                            failure: None,
                            retries,
                        })
                    }
                    CheckStatus::Nonzero => {
                        let failure = FuzzFailure { sample: i, x: x.to_string(), y: y.to_string() };
                        return Ok(SampleOutcome::Done { integral: false, failure: Some(failure), retries });
                    }
                }
            }
            Ok(SampleOutcome::Unresolved { retries: MAX_RESAMPLES })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = FuzzReport {
        q: field.q() as u64,
        precision,
        samples,
        seed,
        zero: 0,
        integral_zero: 0,
        failures: Vec::new(),
        inconclusive: 0,
        unresolved: 0,
    };
    for o in outcomes {
        match o {
            SampleOutcome::Done { integral, failure, retries } => {
                report.inconclusive += retries;
                match failure {
                    Some(f) => report.failures.push(f),
                    None => {
                        report.zero += 1;
                        report.integral_zero += usize::from(integral);
                    }
                }
            }
            SampleOutcome::Unresolved { retries } => {
                report.inconclusive += retries;
                report.unresolved += 1;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeCase {
    I,
    Ii,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub case: ProbeCase,
    pub passed: bool,
    /// Named square-class and series identities with their outcome.
    pub checks: Vec<(String, bool)>,
    /// Difference-of-squares witness `(r, s)` for case (ii).
    pub witness: Option<(u32, u32)>,
    pub note: Option<String>,
}

impl ProbeReport {
    fn finish(case: ProbeCase, checks: Vec<(String, bool)>, witness: Option<(u32, u32)>) -> Self {
        ProbeReport { case, passed: checks.iter().all(|(_, ok)| *ok), checks, witness, note: None }
    }
}

/// Case (i): `v(a) >= 2`, `pi = t`. Checks `1 - a/pi` is a 1-unit of trivial
/// class, `<z> = <-pi>` and `<az> = <-a pi>` for `z = (1 - 1/pi)/(1 - a/pi)`.
pub fn probe_case_i(a: &TruncatedLaurentSeries) -> Result<ProbeReport> {
    if a.v < 2 {
        return Err(Error::Domain(format!("case (i) needs v(a) >= 2, got {}", a.v)));
    }
    let f = &a.field;
    let pi = TruncatedLaurentSeries::t(f, a.precision())?;
    let w = a.div(&pi)?.one_minus()?;
    let z = pi.inv()?.one_minus()?.div(&w)?;
    let cls = laurent_square_class;
    let checks = vec![
        ("1 - a/pi in U_1".to_string(), w.is_one_unit()),
        ("<1 - a/pi> trivial".to_string(), cls(&w).is_trivial()),
        ("<z> = <-pi>".to_string(), cls(&z) == cls(&pi.neg())),
        ("<az> = <-a pi>".to_string(), cls(&a.mul(&z)?) == cls(&a.mul(&pi)?.neg())),
    ];
    Ok(ProbeReport::finish(ProbeCase::I, checks, None))
}

/// Case (ii): `u` a unit, `p = t^gamma` with `gamma` odd. With `u bar = r^2 - s^2`
/// checks `1 - u/r^2 = (s/r)^2` (exactly when `u` is constant, up to square
/// class otherwise) and `<z> = <-p>` for `z = (1 - 1/(r^2 p))/(1 - u/r^2)`.
pub fn probe_case_ii(u: &TruncatedLaurentSeries, gamma: i64) -> Result<ProbeReport> {
    if u.v != 0 {
        return Err(Error::Domain("case (ii) needs a unit u".into()));
    }
    if gamma <= 0 || gamma % 2 == 0 {
        return Err(Error::Domain("case (ii) needs an odd positive valuation".into()));
    }
    let f = &u.field;
    let n = u.precision();
    let Some((r, s)) = f.check_difference_of_squares(u.residue()?)? else {
        return Ok(ProbeReport {
            case: ProbeCase::Ii,
            passed: false,
            checks: Vec::new(),
            witness: None,
            note: Some(format!("no witness u = r^2 - s^2 in F_{} for u = {}", f.q(), f.format(u.residue()?))),
        });
    };
    let rr = TruncatedLaurentSeries::constant(f, f.mul(r, r)?, n)?;
    let s_over_r = TruncatedLaurentSeries::constant(f, f.div(s, r)?, n)?;
    let p = TruncatedLaurentSeries::monomial(f, f.one(), gamma, n)?;
    let e = u.div(&rr)?.one_minus()?;
    let z = rr.mul(&p)?.inv()?.one_minus()?.div(&e)?;
    let cls = laurent_square_class;
    let mut checks = Vec::new();
    if u.coeffs[1..].iter().all(|&c| c == 0) {
        checks.push(("1 - u/r^2 = (s/r)^2".to_string(), e == s_over_r.mul(&s_over_r)?));
    }
    checks.push(("<1 - u/r^2> trivial".to_string(), cls(&e).is_trivial()));
    checks.push(("<z> = <-p>".to_string(), cls(&z) == cls(&p.neg())));
    Ok(ProbeReport::finish(ProbeCase::Ii, checks, Some((r.value(), s.value()))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    fn series(k: &FiniteField, v: i64, c: &[i64], n: usize) -> TruncatedLaurentSeries {
        let mut coeffs: Vec<FieldElement> = c.iter().map(|&x| k.from_int(x)).collect();
        coeffs.resize(n, k.zero());
        TruncatedLaurentSeries::new(k, v, coeffs).unwrap()
    }

    #[test]
    fn inverse_of_t_and_one_minus_t() {
        let k = f(5);
        let t = TruncatedLaurentSeries::t(&k, 8).unwrap();
        assert_eq!(t.inv().unwrap(), series(&k, -1, &[1], 8));
        let u = t.one_minus().unwrap();
        let prod = u.mul(&u.inv().unwrap()).unwrap();
        assert_eq!(prod, TruncatedLaurentSeries::one(&k, 8).unwrap());
        // 1 - t is known to O(t^9)
        assert_eq!(prod.precision(), 9);
    }

    #[test]
    fn one_minus_of_inverse_t() {
        let k = f(7);
        let ti = TruncatedLaurentSeries::t(&k, 6).unwrap().inv().unwrap();
        let s = ti.one_minus().unwrap();
        assert_eq!(s.valuation(), -1);
        assert_eq!(s.leading_coefficient(), k.from_int(-1));
        // 1 - t^-1 = -t^-1 (1 - t)
        let t = TruncatedLaurentSeries::t(&k, 6).unwrap();
        assert_eq!(s, ti.neg().mul(&t.one_minus().unwrap()).unwrap());
    }

    #[test]
    fn cancellation_is_reported() {
        let k = f(5);
        let one = TruncatedLaurentSeries::one(&k, 4).unwrap();
        assert!(matches!(one.one_minus(), Err(Error::PrecisionExhausted(_))));
        let a = series(&k, 0, &[1, 0, 2], 4);
        let d = a.one_minus().unwrap();
        assert_eq!((d.valuation(), d.precision()), (2, 2));
    }

    #[test]
    fn square_classes() {
        let k = f(7);
        let t = TruncatedLaurentSeries::t(&k, 4).unwrap();
        assert_eq!(laurent_square_class(&t).element(), 0b10);
        assert_eq!(laurent_square_class(&series(&k, 2, &[3], 4)).element(), 0b01);
        assert!(laurent_square_class(&series(&k, 0, &[1, 5, 2], 4)).is_trivial());
        assert!(TruncatedLaurentSeries::one(&f(4), 3).is_err());
    }

    #[test]
    fn specialization_branches() {
        let k = f(5);
        let target = SpecializationTarget::new(&k).unwrap();
        let t = TruncatedLaurentSeries::t(&k, 8).unwrap();
        assert_eq!(specialize(&t, &target).unwrap(), *target.b());
        let minus_b: SymbolVector = target.b().iter().map(|(i, c)| (*i, c.neg())).collect();
        assert_eq!(specialize(&t.inv().unwrap(), &target).unwrap(), minus_b);
        let u = series(&k, 0, &[3, 1], 8);
        assert_eq!(specialize(&u, &target).unwrap(), vec![(1, GroupRingElement::one(LAURENT_RANK))]);
        assert!(specialize(&series(&k, 0, &[1, 1], 8), &target).unwrap().is_empty());
    }

    #[test]
    fn target_detects_nonzero_images() {
        let k = f(5);
        let target = SpecializationTarget::new(&k).unwrap();
        let lat = target.lattice();
        assert!(!lat.is_zero_after_inverting_two(target.b()).unwrap());
        let two = specialize(&TruncatedLaurentSeries::constant(&k, k.from_int(2), 4).unwrap(), &target).unwrap();
        assert!(!lat.is_zero_after_inverting_two(&two).unwrap());
    }

    #[test]
    fn t_and_t_squared() {
        let k = f(5);
        let target = SpecializationTarget::new(&k).unwrap();
        let t = TruncatedLaurentSeries::t(&k, 64).unwrap();
        let t2 = t.mul(&t).unwrap();
        let r = relation_specialization_check(&t, &t2, &target).unwrap();
        assert_eq!(r.status, CheckStatus::Zero);
    }

    #[test]
    fn unit_pairs_reduce_to_residue_relations() {
        let k = f(7);
        let target = SpecializationTarget::new(&k).unwrap();
        for (a, b) in [(2, 3), (3, 5), (6, 2)] {
            let x = series(&k, 0, &[a, 1], 6);
            let y = series(&k, 0, &[b, 4], 6);
            assert_eq!(relation_specialization_check(&x, &y, &target).unwrap().status, CheckStatus::Zero);
        }
    }

    #[test]
    fn probes() {
        let k5 = f(5);
        let a = TruncatedLaurentSeries::monomial(&k5, k5.one(), 2, 16).unwrap();
        assert!(probe_case_i(&a).unwrap().passed);
        let u = TruncatedLaurentSeries::constant(&f(7), f(7).from_int(3), 16).unwrap();
        let r = probe_case_ii(&u, 1).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.witness.is_some());
        let one = TruncatedLaurentSeries::one(&k5, 16).unwrap();
        let r = probe_case_ii(&one, 1).unwrap();
        assert!(r.witness.is_none() && !r.passed);
    }
}

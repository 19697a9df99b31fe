//! Predicted decomposition of `H_3(SL_2(F_n), Z[1/2])` for a tower
//! `F_0, F_1 = F_0((t_1)), ..., F_n` of discretely valued fields.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bloch::{rb0, BlochField};
use crate::error::{Error, Result};
use crate::field::{FiniteField, DEFAULT_MAX_Q};
use crate::linalg::AbelianInvariants;

/// Largest supported number of levels; the eigenspace ledger has
/// `2^(n + r_0)` rows.
pub const MAX_LEVELS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerBase {
    Finite(FiniteField),
    RealClosed,
    QuadraticallyClosed,
    /// `F_0 = F_p`, `F_1 = Q_p`; further levels are Laurent series over `Q_p`.
    PAdic(u32),
}

impl TowerBase {
    pub fn parse(s: &str, max_q: u64) -> Result<Self> {
        let t = s.trim();
        match t {
            "real-closed" | "R" => return Ok(TowerBase::RealClosed),
            "quadratically-closed" | "C" => return Ok(TowerBase::QuadraticallyClosed),
            _ => {}
        }
        if let Some(p) = t.strip_prefix("Q_").or_else(|| t.strip_prefix("Qp:")).or_else(|| t.strip_prefix('Q')) {
            let p: u64 = p.parse().map_err(|_| Error::Config(format!("bad p-adic base {t:?}")))?;
            if !crate::field::is_prime(p) || p > max_q {
                return Err(Error::Config(format!("Q_p needs a prime p <= {max_q}, got {p}")));
            }
            return Ok(TowerBase::PAdic(p as u32));
        }
        let pp =
            crate::field::PrimePower::from_str(t).map_err(|_| Error::Config(format!("unknown tower base {t:?}")))?;
        if pp.q() > max_q {
            return Err(Error::Config(format!("q = {} exceeds the bound {max_q}", pp.q())));
        }
        Ok(TowerBase::Finite(FiniteField::with_max_q(pp.p, pp.m, max_q)?))
    }

    /// Label of `F_0`.
    pub fn label(&self) -> String {
        match self {
            TowerBase::Finite(f) => format!("F_{}", f.spec()),
            TowerBase::RealClosed => "R".into(),
            TowerBase::QuadraticallyClosed => "C".into(),
            TowerBase::PAdic(p) => format!("F_{p}"),
        }
    }

    /// Rank of `sq(F_0)`.
    pub fn square_class_rank(&self) -> usize {
        match self {
            TowerBase::Finite(f) => f.square_class_rank(),
            TowerBase::RealClosed => 1,
            TowerBase::QuadraticallyClosed => 0,
            TowerBase::PAdic(p) => usize::from(*p != 2),
        }
    }

    fn characteristic(&self) -> u32 {
        match self {
            TowerBase::Finite(f) => f.characteristic(),
            TowerBase::PAdic(p) => *p,
            _ => 0,
        }
    }

    fn finite_residue(&self) -> Option<FiniteField> {
        match self {
            TowerBase::Finite(f) => Some(f.clone()),
            TowerBase::PAdic(p) => FiniteField::of_order(u64::from(*p)).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for TowerBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerBase::Finite(k) => write!(f, "{}", k.spec()),
            TowerBase::RealClosed => write!(f, "real-closed"),
            TowerBase::QuadraticallyClosed => write!(f, "quadratically-closed"),
            TowerBase::PAdic(p) => write!(f, "Q_{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    pub base: TowerBase,
    /// `n`: the number of valuation steps above `F_0`.
    pub levels: usize,
}

impl TowerSpec {
    pub fn new(base: TowerBase, levels: usize) -> Result<Self> {
        if let TowerBase::PAdic(_) = base {
            if levels == 0 {
                return Err(Error::Config("a p-adic base needs at least one level (F_1 = Q_p)".into()));
            }
        }
        if levels > MAX_LEVELS {
            return Err(Error::Config(format!("at most {MAX_LEVELS} levels are supported")));
        }
        Ok(TowerSpec { base, levels })
    }

    pub fn parse(base: &str, levels: usize) -> Result<Self> {
        Self::new(TowerBase::parse(base, DEFAULT_MAX_Q)?, levels)
    }

    /// Labels of `F_0, ..., F_n`.
    pub fn labels(&self) -> Vec<String> {
        let mut out = vec![self.base.label()];
        let (start, mut cur) = match &self.base {
            TowerBase::PAdic(p) => {
                out.push(format!("Q_{p}"));
                (2, format!("Q_{p}"))
            }
            b => (1, b.label()),
        };
        let var = if matches!(self.base, TowerBase::Finite(_)) { "t" } else { "x" };
        for i in start..=self.levels {
            cur = format!("{cur}(({var}_{}))", i + 1 - start);
            out.push(cur.clone());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Verified,
    Assumed,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub index: u8,
    pub statement: &'static str,
    pub status: HypothesisStatus,
    pub reason: String,
}

const STATEMENTS: [&str; 6] = [
    "U_1(F_i)^2 = U_1(F_i) for i = 1..n",
    "if char F_0 = 2 then F_0 is perfect",
    "char F = 3 or char F_0 != 3 or zeta_3 in F",
    "sq(F_0) is finite",
    "Z[1/2] RB_0(F_0) = 0",
    "F_0^x = <-1> N(E_0^x), E_0 = F_0(zeta_3)",
];

fn hyp(index: u8, status: HypothesisStatus, reason: impl Into<String>) -> Hypothesis {
    Hypothesis { index, statement: STATEMENTS[index as usize - 1], status, reason: reason.into() }
}

pub fn check_hypotheses(tower: &TowerSpec) -> Result<Vec<Hypothesis>> {
    use HypothesisStatus::*;
    let n = tower.levels;
    let ch = tower.base.characteristic();
    let mut out = Vec::with_capacity(6);

    out.push(match &tower.base {
        _ if n == 0 => hyp(1, Verified, "no valuation levels"),
        TowerBase::Finite(_) | TowerBase::PAdic(_) if ch == 2 => {
            hyp(1, Failed, "residue characteristic 2: U_1 = U_1^2 fails for complete fields")
        }
        TowerBase::Finite(_) => hyp(1, Verified, "complete Laurent levels over odd residue characteristic"),
        TowerBase::PAdic(_) => {
            hyp(1, Assumed, "Q_p and its Laurent levels are complete with odd residue characteristic; not checked")
        }
        _ => hyp(1, Verified, "complete Laurent levels in characteristic 0"),
    });

    out.push(match &tower.base {
        TowerBase::Finite(_) | TowerBase::PAdic(_) => hyp(2, Verified, "finite fields are perfect"),
        _ => hyp(2, Verified, "characteristic 0"),
    });

    // Equicharacteristic unless the base is p-adic.
    out.push(match &tower.base {
        TowerBase::PAdic(3) => hyp(
            3,
            Assumed,
            "char F = 0 and char F_0 = 3; zeta_3 in F is not checked, the result may hold only up to 3-torsion",
        ),
        TowerBase::PAdic(_) => hyp(3, Verified, format!("char F_0 = {ch} != 3")),
        _ if ch == 3 => hyp(3, Verified, "char F = 3"),
        _ => hyp(3, Verified, format!("char F_0 = {ch} != 3")),
    });

    out.push(match &tower.base {
        TowerBase::Finite(_) | TowerBase::PAdic(_) => hyp(4, Verified, "finite base"),
        b => hyp(4, Verified, format!("|sq(F_0)| = {}", 1u64 << b.square_class_rank())),
    });

    match tower.base.finite_residue() {
        Some(k) => {
            let parts = rb0(&BlochField::new(k.clone()))?;
            let nontrivial: Vec<String> =
                parts.iter().filter(|(_, a)| !a.is_trivial()).map(|(c, a)| format!("{c}: {a}")).collect();
            out.push(if nontrivial.is_empty() {
                hyp(5, Verified, "every nontrivial eigenspace of Z[1/2] RB(F_0) vanishes")
            } else {
                hyp(5, Failed, format!("nonzero eigenspaces {}", nontrivial.join(", ")))
            });
            let rsq = k.rsq_order();
            out.push(if rsq == 1 {
                hyp(6, Verified, format!("+-N has all {} elements", k.q() - 1))
            } else {
                hyp(6, Failed, format!("|rsq(F_0)| = {rsq}"))
            });
        }
        None => {
            out.push(hyp(5, Verified, "quadratically closed and real closed fields have RB_0 = 0"));
            out.push(hyp(6, Verified, "holds for quadratically closed and real closed fields"));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummandKind {
    K3indSymbolic,
    PreblochNumeric,
    PreblochSymbolic,
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictedSummand {
    pub kind: SummandKind,
    pub field: String,
    /// Level `i` of `F_i`; absent for the `K_3^ind` summand.
    pub level: Option<usize>,
    pub multiplicity: u64,
    /// Odd part of `P(F_i)`, for finite `F_i` only.
    pub invariants: Option<AbelianInvariants>,
}

impl fmt::Display for PredictedSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SummandKind::K3indSymbolic => write!(f, "Z[1/2]K3ind({})", self.field)?,
            _ => write!(f, "Z[1/2]P({})", self.field)?,
        }
        if self.multiplicity != 1 {
            write!(f, "^{}", self.multiplicity)?;
        }
        if let Some(inv) = &self.invariants {
            write!(f, " = ({inv})")?;
            if self.multiplicity != 1 {
                write!(f, "^{}", self.multiplicity)?;
            }
        }
        Ok(())
    }
}

/// `|rsq(F_n)|` if the doubling lemma applies along the tower.
#[derive(Clone, Debug, Serialize)]
pub struct RsqLine {
    pub asserted: bool,
    pub order: Option<u64>,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub base: String,
    pub levels: usize,
    pub fields: Vec<String>,
    pub hypotheses: Vec<Hypothesis>,
    /// Some hypothesis failed: the formula is only claimed as a surjection
    /// with finite kernel annihilated by 3.
    pub surjection_only: bool,
    pub summands: Vec<PredictedSummand>,
    /// Multiplicity of `P(F_i)` for `i = 0..n-1`.
    pub exponents: Vec<u64>,
    pub rsq: RsqLine,
    /// `dim_{F_3} D_F` (free of rank one over `F_3[rsq(F)]`); absent when
    /// not determined.
    pub df_dimension: Option<u64>,
    pub notes: Vec<String>,
}

impl DecompositionReport {
    pub fn all_verified(&self) -> bool {
        self.hypotheses.iter().all(|h| h.status == HypothesisStatus::Verified)
    }

    /// `H_3(SL_2(F), Z[1/2]) = ...` on one line.
    pub fn formula(&self) -> String {
        let terms: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        format!("H3(SL2({}), Z[1/2]) = {}", self.fields.last().expect("F_0 exists"), terms.join(" + "))
    }
}

/// Odd part of `P(F_0)` for a finite base.
fn prebloch_odd_part(k: &FiniteField) -> AbelianInvariants {
    BlochField::new(k.clone()).prebloch_presentation().invariants().odd_part()
}

fn rsq_line(tower: &TowerSpec) -> (RsqLine, Option<u64>) {
    let n = tower.levels as u32;
    let (base_rsq, char3, sqrt_m3, zeta3) = match &tower.base {
        TowerBase::Finite(k) => {
            (k.rsq_order(), k.characteristic() == 3, k.has_sqrt_minus_three(), k.has_cube_root_of_unity())
        }
        TowerBase::RealClosed => (1, false, false, false),
        TowerBase::QuadraticallyClosed => (1, false, true, true),
        TowerBase::PAdic(p) => {
            let k = FiniteField::of_order(u64::from(*p)).expect("prime");
            // the residue chain passes through Q_p, whose sqrt(-3) matches F_p for p != 3
            (k.rsq_order(), *p == 3, k.has_sqrt_minus_three(), k.has_cube_root_of_unity() && *p != 3)
        }
    };
    let df = if zeta3 || (char3 && !matches!(tower.base, TowerBase::PAdic(_))) {
        Some(0)
    } else if !char3 && !sqrt_m3 {
        Some(1u64 << n)
    } else {
        None
    };
    let line = if n == 0 {
        RsqLine { asserted: true, order: Some(base_rsq), reason: "the base itself".into() }
    } else if char3 {
        RsqLine { asserted: false, order: None, reason: "residue characteristic 3".into() }
    } else if sqrt_m3 {
        RsqLine { asserted: false, order: None, reason: "sqrt(-3) lies in the residue fields".into() }
    } else {
        RsqLine {
            asserted: true,
            order: Some(base_rsq << n),
            reason: format!("doubles at each of {n} levels from |rsq(F_0)| = {base_rsq}"),
        }
    };
    (line, df)
}

pub fn predict(tower: &TowerSpec) -> Result<DecompositionReport> {
    let hypotheses = check_hypotheses(tower)?;
    let fields = tower.labels();
    let n = tower.levels;
    let mut summands = vec![PredictedSummand {
        kind: SummandKind::K3indSymbolic,
        field: fields[n].clone(),
        level: None,
        multiplicity: 1,
        invariants: None,
    }];
    let mut exponents = Vec::with_capacity(n);
    for (i, field) in fields.iter().enumerate().take(n) {
        let mult = 1u64 << (n - i - 1);
        exponents.push(mult);
        let numeric = if i == 0 { tower.base.finite_residue() } else { None };
        summands.push(PredictedSummand {
            kind: if numeric.is_some() { SummandKind::PreblochNumeric } else { SummandKind::PreblochSymbolic },
            field: field.clone(),
            level: Some(i),
            multiplicity: mult,
            invariants: numeric.as_ref().map(prebloch_odd_part),
        });
    }
    let (rsq, df_dimension) = rsq_line(tower);
    let mut notes = Vec::new();
    let surjection_only = hypotheses.iter().any(|h| h.status == HypothesisStatus::Failed);
    if surjection_only {
        notes.push("a hypothesis failed: the decomposition is predicted only as a surjection with finite kernel annihilated by 3".into());
    }
    if hypotheses.iter().any(|h| h.status == HypothesisStatus::Assumed) {
        notes.push("some hypotheses are assumed rather than checked".into());
    }
    if let TowerBase::PAdic(p) = tower.base {
        notes.push(format!("Q_{p} is mixed characteristic; its pre-Bloch group is symbolic"));
    }
    Ok(DecompositionReport {
        base: tower.base.to_string(),
        levels: n,
        fields,
        hypotheses,
        surjection_only,
        summands,
        exponents,
        rsq,
        df_dimension,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "level", rename_all = "snake_case")]
pub enum CharacterTarget {
    Trivial,
    /// Nontrivial on `sq(F_0)`; lands in `Z[1/2] RB_0(F_0)`.
    ResidueNontrivial,
    /// Trivial on `sq(F_i)` but not on `sq(F_{i+1})`; lands in `P(F_i)`.
    Level(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct LedgerRow {
    /// Signs on the basis of `sq(F_0)`, then on `<t_1>, ..., <t_n>`.
    pub character: String,
    pub target: CharacterTarget,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenspaceLedger {
    pub characters: usize,
    pub rows: Vec<LedgerRow>,
    /// Characters landing at each level `0..n-1`.
    pub census: Vec<u64>,
    pub trivial: usize,
    pub residue_nontrivial: usize,
}

/// Enumerates `dual(sq(F_n)) = dual(sq(F_0)) x {1, theta_1} x ... x {1, theta_n}`
/// and sends each character to the summand it feeds.
pub fn eigenspace_ledger(tower: &TowerSpec) -> EigenspaceLedger {
    let r0 = tower.base.square_class_rank();
    let n = tower.levels;
    let mut rows = Vec::with_capacity(1 << (n + r0));
    let mut census = vec![0u64; n];
    let (mut trivial, mut residue_nontrivial) = (0, 0);
    for s in 0u64..1 << (n + r0) {
        let residue = s & ((1 << r0) - 1);
        let vals = s >> r0;
        let target = if residue != 0 {
            residue_nontrivial += 1;
            CharacterTarget::ResidueNontrivial
        } else if vals == 0 {
            trivial += 1;
            CharacterTarget::Trivial
        } else {
            // lambda restricted to F_j is trivial iff theta_1..theta_j all are
            let i = vals.trailing_zeros() as usize;
            census[i] += 1;
            CharacterTarget::Level(i)
        };
        let sign = |b: u64| if b == 1 { '-' } else { '+' };
        let res: String = (0..r0).map(|k| sign((residue >> k) & 1)).collect();
        let val: String = (0..n).map(|k| sign((vals >> k) & 1)).collect();
        rows.push(LedgerRow { character: format!("({res}|{val})"), target });
    }
    EigenspaceLedger { characters: rows.len(), rows, census, trivial, residue_nontrivial }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(base: &str, n: usize) -> TowerSpec {
        TowerSpec::parse(base, n).unwrap()
    }

    #[test]
    fn f5_two_levels() {
        let t = spec("5", 2);
        let r = predict(&t).unwrap();
        assert_eq!(r.exponents, vec![2, 1]);
        assert!(r.all_verified() && !r.surjection_only);
        assert!(r.summands[1].invariants.as_ref().unwrap().is_cyclic_of_order(3));
        assert_eq!(r.rsq.order, Some(4));
        assert_eq!(r.df_dimension, Some(4));
        let l = eigenspace_ledger(&t);
        assert_eq!(l.characters, 8);
        assert_eq!(l.census, r.exponents);
    }

    #[test]
    fn f5_one_level_ledger() {
        let l = eigenspace_ledger(&spec("5", 1));
        assert_eq!((l.characters, l.trivial, l.residue_nontrivial), (4, 1, 2));
        assert_eq!(l.census, vec![1]);
    }

    #[test]
    fn zero_levels() {
        let r = predict(&spec("5", 0)).unwrap();
        assert_eq!(r.summands.len(), 1);
        assert_eq!(r.summands[0].kind, SummandKind::K3indSymbolic);
        assert!(r.exponents.is_empty());
    }

    #[test]
    fn symbolic_bases() {
        let r = predict(&spec("real-closed", 2)).unwrap();
        assert!(r.all_verified());
        assert_eq!(r.fields, vec!["R", "R((x_1))", "R((x_1))((x_2))"]);
        assert!(r.summands[1..].iter().all(|s| s.kind == SummandKind::PreblochSymbolic));
        let q = predict(&spec("Q_5", 2)).unwrap();
        assert_eq!(q.fields, vec!["F_5", "Q_5", "Q_5((x_1))"]);
        assert_eq!(q.exponents, vec![2, 1]);
        assert_eq!(q.summands[1].kind, SummandKind::PreblochNumeric);
        assert_eq!(q.hypotheses[0].status, HypothesisStatus::Assumed);
        let c = predict(&spec("quadratically-closed", 1)).unwrap();
        assert!(!c.rsq.asserted);
        assert_eq!(c.df_dimension, Some(0));
    }

    #[test]
    fn even_base_is_surjection_only() {
        let r = predict(&spec("2", 1)).unwrap();
        assert_eq!(r.hypotheses[0].status, HypothesisStatus::Failed);
        assert!(r.surjection_only);
    }

    #[test]
    fn bad_bases() {
        assert!(TowerSpec::parse("6", 1).is_err());
        assert!(TowerSpec::parse("Q_4", 1).is_err());
        assert!(TowerSpec::parse("Q_5", 0).is_err());
        assert!(TowerSpec::parse("surreal", 1).is_err());
    }
}

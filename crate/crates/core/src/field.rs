//! Arithmetic in small finite fields `F_q`, `q = p^m`.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
//! from their residue polynomial `c_0 + c_1 X + ...` modulo the canonical
//! modulus (the least monic irreducible polynomial of degree `m` under the
//! same encoding). Integer order on encodings is the canonical element order
//! used for every deterministic choice in the crate.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on the field size.
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

/// A prime power `p^m` with its canonical modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    /// Monic modulus, coefficients from low to high degree (length `m + 1`).
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.m)
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parsed but not yet constructed field size, e.g. `"9"` or `"3^2"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u32,
    pub m: u32,
}

impl PrimePower {
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }
}

impl FromStr for PrimePower {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidField(format!("'{s}' is not a prime power"));
        if let Some((p, m)) = s.split_once('^') {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            if !is_prime(p as u64) || m == 0 {
                return Err(bad());
            }
            (p as u64).checked_pow(m).ok_or_else(bad)?;
            return Ok(PrimePower { p, m });
        }
        let q: u64 = s.parse().map_err(|_| bad())?;
        prime_power(q).ok_or_else(bad)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Decomposes `q` as `p^m`, if it is a prime power.
pub fn prime_power(q: u64) -> Option<PrimePower> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some(PrimePower { p: p as u32, m })
}

/// Element of a finite field. Carries its field's `(p, m)` so that mixing
/// elements of different fields is detected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    p: u32,
    m: u32,
    value: u32,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }
}

/// Square class of a nonzero element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareClass {
    Trivial,
    Nontrivial,
}

impl SquareClass {
    pub fn bit(self) -> u64 {
        match self {
            SquareClass::Trivial => 0,
            SquareClass::Nontrivial => 1,
        }
    }
}

#[derive(Debug)]
struct Tables {
    spec: FieldSpec,
    q: u32,
    /// `exp[k] = g^k` for `k < q - 1`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`.
    log: Vec<u32>,
    powers_of_p: Vec<u32>,
}

/// A constructed finite field with discrete-log tables. Cheap to clone.
#[derive(Clone, Debug)]
pub struct FiniteField {
    t: Arc<Tables>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.t.spec == other.t.spec
    }
}

impl Eq for FiniteField {}

// Polynomial helpers on coefficient vectors, low degree first.

fn digits(value: u32, p: u32, m: u32) -> Vec<u32> {
    let mut v = value;
    (0..m)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    // reduce by the monic modulus from the top
    for k in (m..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &mc) in modulus.iter().enumerate().take(m) {
            let idx = k - m + i;
            prod[idx] = (prod[idx] + (p as u64 - c) * mc as u64) % p as u64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|x| x as u32).collect()
}

/// Remainder of `a` modulo monic `b` (both low degree first).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let db = b.len() - 1;
    while r.len() > db {
        let top = *r.last().unwrap() % p as u64;
        let shift = r.len() - 1 - db;
        if top != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + (p as u64 - top) * bc as u64) % p as u64;
            }
        }
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = digits(code as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `m` over `F_p` under the
/// element encoding order of its lower coefficients.
fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for code in 0..count {
        let mut f = digits(code as u32, p, m);
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::with_max_q(p, m, DEFAULT_MAX_Q)
    }

    pub fn from_prime_power(pp: PrimePower) -> Result<Self> {
        Self::new(pp.p, pp.m)
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let pp = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(pp.p, pp.m)
    }

    pub fn with_max_q(p: u32, m: u32, max_q: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= max_q && q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{m} exceeds the field size bound {max_q}")))?;
        let modulus = canonical_modulus(p, m);
        debug_assert!(is_irreducible(&modulus, p));
        let spec = FieldSpec { p, m, modulus };
        let q32 = q as u32;
        let powers_of_p = (0..m).map(|i| p.pow(i)).collect();

        // least generator of the multiplicative group
        let order = q32 - 1;
        let mut exp = Vec::new();
        for g in 1..q32 {
            let gd = digits(g, p, m);
            let mut cur = digits(1, p, m);
            let mut powers = Vec::with_capacity(order as usize);
            let mut seen_one_early = false;
            for k in 0..order {
                let v = undigits(&cur, p);
                if k > 0 && v == 1 {
                    seen_one_early = true;
                    break;
                }
                powers.push(v);
                cur = poly_mulmod(&cur, &gd, &spec.modulus, p);
            }
            if !seen_one_early {
                exp = powers;
                break;
            }
        }
        let mut log = vec![u32::MAX; q32 as usize];
        for (k, &v) in exp.iter().enumerate() {
            log[v as usize] = k as u32;
        }
        Ok(FiniteField { t: Arc::new(Tables { spec, q: q32, exp, log, powers_of_p }) })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }

    pub fn p(&self) -> u32 {
        self.t.spec.p
    }

    pub fn m(&self) -> u32 {
        self.t.spec.m
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    pub fn characteristic(&self) -> u32 {
        self.t.spec.p
    }

    pub fn is_odd(&self) -> bool {
        self.t.spec.p != 2
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement { p: self.t.spec.p, m: self.t.spec.m, value }
    }

    fn own(&self, a: FieldElement) -> Result<u32> {
        if a.p != self.t.spec.p || a.m != self.t.spec.m {
            return Err(Error::MixedFields {
                left: self.t.spec.to_string(),
                right: FieldSpec { p: a.p, m: a.m, modulus: Vec::new() }.to_string(),
            });
        }
        Ok(a.value)
    }

    /// The encoding of `a`, after checking that it belongs to this field.
    pub fn validate(&self, a: FieldElement) -> Result<u32> {
        self.own(a)
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.t.q {
            return Err(Error::Domain(format!("{value} is not an element encoding of F_{}", self.t.q)));
        }
        Ok(self.wrap(value))
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.wrap(n.rem_euclid(self.t.spec.p as i64) as u32)
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.t.q).map(move |v| self.wrap(v))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.t.q).map(move |v| self.wrap(v))
    }

    // Raw arithmetic on encodings.

    pub(crate) fn add_v(&self, a: u32, b: u32) -> u32 {
        let p = self.t.spec.p;
        if self.t.spec.m == 1 {
            return (a + b) % p;
        }
        let mut out = 0;
        let (mut x, mut y) = (a, b);
        for &pw in &self.t.powers_of_p {
            out += ((x % p + y % p) % p) * pw;
            x /= p;
            y /= p;
        }
        out
    }

    pub(crate) fn neg_v(&self, a: u32) -> u32 {
        let p = self.t.spec.p;
        if self.t.spec.m == 1 {
            return (p - a % p) % p;
        }
        let mut out = 0;
        let mut x = a;
        for &pw in &self.t.powers_of_p {
            out += ((p - x % p) % p) * pw;
            x /= p;
        }
        out
    }

    pub(crate) fn sub_v(&self, a: u32, b: u32) -> u32 {
        self.add_v(a, self.neg_v(b))
    }

    pub(crate) fn mul_v(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.t.q - 1;
        let k = (self.t.log[a as usize] as u64 + self.t.log[b as usize] as u64) % n as u64;
        self.t.exp[k as usize]
    }

    pub(crate) fn inv_v(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.t.q - 1;
        let k = (n - self.t.log[a as usize]) % n;
        Some(self.t.exp[k as usize])
    }

    pub(crate) fn log_v(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.t.log[a as usize])
    }

    pub(crate) fn exp_v(&self, k: u64) -> u32 {
        let n = (self.t.q - 1) as u64;
        self.t.exp[(k % n) as usize]
    }

    // Checked arithmetic.

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.add_v(self.own(a)?, self.own(b)?)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.sub_v(self.own(a)?, self.own(b)?)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.mul_v(self.own(a)?, self.own(b)?)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        Ok(self.wrap(self.neg_v(self.own(a)?)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.inv_v(self.own(a)?).map(|v| self.wrap(v)).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        let ib = self.inv(b)?;
        self.mul(a, ib)
    }

    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        let v = self.own(a)?;
        if v == 0 {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(self.zero()),
                _ => Err(Error::DivisionByZero),
            };
        }
        let n = (self.t.q - 1) as i64;
        let k = (self.t.log[v as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Ok(self.wrap(self.t.exp[k as usize]))
    }

    /// Discrete logarithm to the base [`FiniteField::primitive_root`].
    pub fn log(&self, a: FieldElement) -> Result<u32> {
        self.log_v(self.own(a)?).ok_or(Error::Domain("logarithm of zero".into()))
    }

    /// The least generator of `F_q^x` in the canonical element order.
    pub fn primitive_root(&self) -> FieldElement {
        self.wrap(self.t.exp[0..].get(1).copied().unwrap_or(1))
    }

    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        let l = self.log(a)? as u64;
        let n = (self.t.q - 1) as u64;
        Ok(n / gcd(n, l))
    }

    pub fn is_square(&self, a: FieldElement) -> Result<bool> {
        let v = self.own(a)?;
        if v == 0 {
            return Ok(true);
        }
        Ok(!self.is_odd() || self.t.log[v as usize].is_multiple_of(2))
    }

    pub fn sqrt(&self, a: FieldElement) -> Result<Option<FieldElement>> {
        let v = self.own(a)?;
        if v == 0 {
            return Ok(Some(self.zero()));
        }
        let n = (self.t.q - 1) as u64;
        let l = self.t.log[v as usize] as u64;
        if self.is_odd() {
            Ok(l.is_multiple_of(2).then(|| self.wrap(self.exp_v(l / 2))))
        } else {
            // squaring is a bijection of the odd-order group
            let half = n.div_ceil(2);
            Ok(Some(self.wrap(self.exp_v(l * half))))
        }
    }

    pub(crate) fn square_class_bit_v(&self, a: u32) -> u64 {
        debug_assert!(a != 0);
        if self.is_odd() {
            (self.t.log[a as usize] % 2) as u64
        } else {
            0
        }
    }

    /// Class of `a` in `F^x / (F^x)^2`.
    pub fn square_class(&self, a: FieldElement) -> Result<SquareClass> {
        let v = self.own(a)?;
        if v == 0 {
            return Err(Error::Domain("square class of zero".into()));
        }
        Ok(if self.square_class_bit_v(v) == 0 { SquareClass::Trivial } else { SquareClass::Nontrivial })
    }

    /// Number of square classes (1 for even `q`, 2 otherwise).
    pub fn square_class_rank(&self) -> usize {
        usize::from(self.is_odd())
    }

    /// Whether `X^2 - X + 1` has a root, i.e. `F` contains a primitive cube
    /// root of unity or has characteristic 3.
    pub fn has_cube_root_of_unity(&self) -> bool {
        self.elements().any(|x| {
            let v = x.value;
            let x2 = self.mul_v(v, v);
            self.add_v(self.sub_v(x2, v), 1) == 0
        })
    }

    /// Whether `-3` is a square (zero counts as a square).
    pub fn has_sqrt_minus_three(&self) -> bool {
        let m3 = self.from_int(-3);
        self.is_square(m3).unwrap_or(false)
    }

    /// The subgroup `+-N_{E/F}(E^x)` of `F^x`, `E = F(zeta_3)`, by enumerating
    /// norms; sorted in element order.
    pub fn plus_minus_norms(&self) -> Vec<FieldElement> {
        let n = (self.t.q - 1) as usize;
        let mut group: HashSet<u32> = HashSet::new();
        let minus_one = self.neg_v(1);
        let push = |x: u32, group: &mut HashSet<u32>| {
            group.insert(x);
            group.insert(self.mul_v(x, minus_one));
        };
        if self.has_cube_root_of_unity() {
            // E = F and the norm is the identity
            for x in 1..self.t.q {
                push(x, &mut group);
            }
        } else {
            // E = F[z]/(z^2 - z + 1); N(a + b z) = a^2 + a b + b^2
            'outer: for a in 0..self.t.q {
                for b in 0..self.t.q {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let norm = self.add_v(self.add_v(self.mul_v(a, a), self.mul_v(a, b)), self.mul_v(b, b));
                    push(norm, &mut group);
                    if group.len() == n {
                        break 'outer;
                    }
                }
            }
        }
        let mut out: Vec<u32> = group.into_iter().collect();
        out.sort_unstable();
        out.into_iter().map(|v| self.wrap(v)).collect()
    }

    /// `|F^x / (+-N_{E/F}(E^x))|` with `E = F(zeta_3)`.
    pub fn rsq_order(&self) -> u64 {
        (self.t.q - 1) as u64 / self.plus_minus_norms().len() as u64
    }

    /// Nonzero `r, s` with `u = r^2 - s^2`, searching `r` in element order.
    pub fn check_difference_of_squares(&self, u: FieldElement) -> Result<Option<(FieldElement, FieldElement)>> {
        let uv = self.own(u)?;
        if !self.is_odd() {
            return Err(Error::Domain("difference-of-squares witnesses are only meaningful for odd q".into()));
        }
        if uv == 0 {
            return Err(Error::Domain("u must be nonzero".into()));
        }
        for r in 1..self.t.q {
            let t = self.sub_v(self.mul_v(r, r), uv);
            if t == 0 {
                continue;
            }
            if let Some(s) = self.sqrt(self.wrap(t))? {
                return Ok(Some((self.wrap(r), s)));
            }
        }
        Ok(None)
    }

    /// Human-readable form: the integer for prime fields, a polynomial in
    /// `X` otherwise.
    pub fn format(&self, a: FieldElement) -> String {
        if self.m() == 1 {
            return a.value.to_string();
        }
        let d = digits(a.value, self.p(), self.m());
        let terms: Vec<String> = d
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "X".to_string(),
                (1, c) => format!("{c}X"),
                (i, 1) => format!("X^{i}"),
                (i, c) => format!("{c}X^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FiniteField {
        FiniteField::of_order(q).unwrap()
    }

    #[test]
    fn inverse_in_f7() {
        let k = f(7);
        assert_eq!(k.inv(k.from_int(3)).unwrap(), k.from_int(5));
        for q in [2, 3, 4, 5, 8, 9, 16, 25, 27] {
            let k = f(q);
            assert_eq!(k.inv(k.one()).unwrap(), k.one());
        }
        assert_eq!(k.inv(k.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn f4_generator_squares_to_g_plus_one() {
        let k = f(4);
        assert_eq!(k.spec().modulus(), &[1, 1, 1]);
        let g = k.element(2).unwrap(); // X
        let g2 = k.mul(g, g).unwrap();
        assert_eq!(g2, k.element(3).unwrap()); // X + 1
        assert_eq!(k.format(g2), "X+1");
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f(9).spec().modulus(), &[1, 0, 1]); // X^2 + 1
        assert_eq!(f(8).spec().modulus(), &[1, 1, 0, 1]); // X^3 + X + 1
        assert_eq!(f(27).spec().modulus(), &[1, 2, 0, 1]); // X^3 + 2X + 1
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = f(5).one();
        let b = f(7).one();
        assert!(matches!(f(5).add(a, b), Err(Error::MixedFields { .. })));
    }

    #[test]
    fn square_classes_in_f7() {
        let k = f(7);
        assert_eq!(k.square_class(k.from_int(2)).unwrap(), SquareClass::Trivial);
        assert_eq!(k.square_class(k.from_int(3)).unwrap(), SquareClass::Nontrivial);
        assert!(k.square_class(k.zero()).is_err());
        let k = f(8);
        assert!(k.nonzero().all(|a| k.square_class(a).unwrap() == SquareClass::Trivial));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(f(5).primitive_root(), f(5).from_int(2));
        assert_eq!(f(2).primitive_root(), f(2).one());
        let k = f(9);
        let g = k.primitive_root();
        assert_eq!(k.multiplicative_order(g).unwrap(), 8);
        // nothing smaller generates
        for v in 1..g.value() {
            assert!(k.multiplicative_order(k.element(v).unwrap()).unwrap() < 8);
        }
    }

    #[test]
    fn rsq_small_fields() {
        assert_eq!(f(5).rsq_order(), 1);
        assert_eq!(f(7).rsq_order(), 1);
        assert_eq!(f(3).rsq_order(), 1);
    }

    #[test]
    fn difference_of_squares_examples() {
        let k = f(7);
        let (r, s) = k.check_difference_of_squares(k.from_int(3)).unwrap().unwrap();
        assert!(!r.is_zero() && !s.is_zero());
        let lhs = k.sub(k.mul(r, r).unwrap(), k.mul(s, s).unwrap()).unwrap();
        assert_eq!(lhs, k.from_int(3));
        let k5 = f(5);
        assert_eq!(k5.check_difference_of_squares(k5.one()).unwrap(), None);
        let k3 = f(3);
        assert_eq!(k3.check_difference_of_squares(k3.one()).unwrap(), None);
        assert!(f(4).check_difference_of_squares(f(4).one()).is_err());
    }

    #[test]
    fn parse_prime_powers() {
        assert_eq!("5".parse::<PrimePower>().unwrap(), PrimePower { p: 5, m: 1 });
        assert_eq!("3^2".parse::<PrimePower>().unwrap(), PrimePower { p: 3, m: 2 });
        assert_eq!("9".parse::<PrimePower>().unwrap(), PrimePower { p: 3, m: 2 });
        assert!("1".parse::<PrimePower>().is_err());
        assert!("6".parse::<PrimePower>().is_err());
        assert!("4^2".parse::<PrimePower>().is_err());
    }

    #[test]
    fn size_bound_enforced() {
        assert!(FiniteField::with_max_q(2, 17, DEFAULT_MAX_Q).is_err());
        assert!(FiniteField::with_max_q(7, 2, 32).is_err());
    }
}

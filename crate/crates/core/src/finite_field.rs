//! Exact arithmetic in GF(p) and GF(p^m).
//!
//! Elements are kept in polynomial basis. A [`Symbol`] packs the coefficient
//! vector `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` into the integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`, so the symbols of a field of order
//! `q` are exactly `0..q`, zero is `0` and one is `1`. The same packing is
//! used by the code file format.
//!
//! [`FieldSpec`] exposes unchecked arithmetic on packed symbols for the hot
//! loops in the rest of the crate; [`FieldElement`] carries its field and
//! rejects mixed-field operands.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// A field element in packed polynomial-basis form, in `0..q`.
pub type Symbol = u32;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 20;

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, `m + 1` coefficients low-to-high; empty for prime fields.
    modulus: Vec<u32>,
}

/// Description of a finite field GF(p^m). Cheap to clone and shareable
/// across threads.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{}, modulus={:?})", self.0.p, self.0.m, self.0.modulus)
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^m). When `modulus` is `None` and `m > 1` the
    /// lexicographically smallest monic irreducible polynomial is chosen,
    /// ordering candidates by their packed lower coefficients.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::InvalidParameters("field degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(order));
        }
        let q = order as u32;

        if m == 1 {
            match modulus {
                None => {}
                Some(ref c) if c.is_empty() => {}
                Some(c) => {
                    return Err(Error::InvalidModulus(format!(
                        "prime field GF({p}) takes no modulus, got {c:?}"
                    )))
                }
            }
            return Ok(FieldSpec(Arc::new(FieldInner {
                p,
                m,
                q,
                modulus: Vec::new(),
            })));
        }

        let modulus = match modulus {
            Some(c) => {
                if c.len() != m as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected {} coefficients, got {}",
                        m + 1,
                        c.len()
                    )));
                }
                if let Some(&bad) = c.iter().find(|&&x| x >= p) {
                    return Err(Error::InvalidModulus(format!("coefficient {bad} not reduced mod {p}")));
                }
                if c[m as usize] != 1 {
                    return Err(Error::InvalidModulus("modulus must be monic".into()));
                }
                if !is_irreducible(&c, p) {
                    return Err(Error::ReducibleModulus(c));
                }
                c
            }
            None => smallest_irreducible(p, m),
        };
        Ok(FieldSpec(Arc::new(FieldInner { p, m, q, modulus })))
    }

    /// Prime field GF(p).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// The field with `q` elements, using the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let mut p = 2;
        while p * p <= q && !q.is_multiple_of(p) {
            p += 1;
        }
        if !q.is_multiple_of(p) {
            p = q;
        }
        let mut rest = q;
        let mut m = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        if p > u32::MAX as u64 {
            return Err(Error::FieldTooLarge(q as u128));
        }
        Self::new(p as u32, m, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients low-to-high; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: self.clone(),
        }
    }

    /// Wraps a packed symbol, checking it lies in `0..q`.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.0.q as u64 {
            return Err(Error::InvalidElement { value, order: self.0.q });
        }
        Ok(FieldElement {
            value: value as Symbol,
            field: self.clone(),
        })
    }

    /// Element from polynomial-basis coefficients (low-to-high, at most `m`).
    pub fn from_coefficients(&self, coefficients: &[u32]) -> Result<FieldElement> {
        if coefficients.len() > self.0.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a degree-{} field",
                coefficients.len(),
                self.0.m
            )));
        }
        let mut value = 0u64;
        for &c in coefficients.iter().rev() {
            if c >= self.0.p {
                return Err(Error::InvalidElement {
                    value: c as u64,
                    order: self.0.p,
                });
            }
            value = value * self.0.p as u64 + c as u64;
        }
        self.element(value)
    }

    /// All `q` elements, zero first, in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |value| FieldElement {
            value,
            field: self.clone(),
        })
    }

    pub fn random_symbol<R: Rng + ?Sized>(&self, rng: &mut R) -> Symbol {
        rng.gen_range(0..self.0.q)
    }

    /// Coefficients of a packed symbol, low-to-high, length `m`.
    pub fn coefficients(&self, mut a: Symbol) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.m)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        let p = self.0.p;
        if self.0.m == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else if p == 2 {
            a ^ b
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            while a != 0 || b != 0 {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Symbol) -> Symbol {
        let p = self.0.p;
        if self.0.m == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else if p == 2 {
            a
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            while a != 0 {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.0.m == 1 {
            return ((a as u64 * b as u64) % self.0.p as u64) as Symbol;
        }
        self.poly_mul(a, b)
    }

    fn poly_mul(&self, a: Symbol, b: Symbol) -> Symbol {
        let p = self.0.p as u64;
        let m = self.0.m as usize;
        let ca = self.coefficients(a);
        let cb = self.coefficients(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let modulus = &self.0.modulus;
        for i in (m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            // x^m = -(lower terms of modulus)
            for j in 0..m {
                let t = c * modulus[j] as u64 % p;
                prod[i - m + j] = (prod[i - m + j] + p - t) % p;
            }
            prod[i] = 0;
        }
        prod[..m].iter().rev().fold(0u64, |acc, &c| acc * p + c) as Symbol
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.0.m == 1 {
            // extended Euclid
            let p = self.0.p as i64;
            let (mut old_r, mut r) = (a as i64, p);
            let (mut old_s, mut s) = (1i64, 0i64);
            while r != 0 {
                let quot = old_r / r;
                (old_r, r) = (r, old_r - quot * r);
                (old_s, s) = (s, old_s - quot * s);
            }
            return Ok(old_s.rem_euclid(p) as Symbol);
        }
        Ok(self.pow_unsigned(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_unsigned(&self, mut base: Symbol, mut e: u64) -> Symbol {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^e`; negative exponents invert first. `0^0 = 1`.
    pub fn pow(&self, a: Symbol, e: i64) -> Result<Symbol> {
        if a == 0 {
            return match e {
                0 => Ok(1),
                e if e > 0 => Ok(0),
                _ => Err(Error::DivisionByZero),
            };
        }
        let group = self.0.q as i64 - 1;
        Ok(self.pow_unsigned(a, e.rem_euclid(group) as u64))
    }
}

/// Remainder of `num` modulo the monic polynomial `den` over GF(p).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (j, &c) in den.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - lead * c as u64 % p) % p;
            }
        }
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for packed in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = packed;
            for _ in 0..d {
                divisor.push((v % p as u64) as u32);
                v /= p as u64;
            }
            divisor.push(1);
            if poly_rem(poly, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    (0..count)
        .map(|packed| {
            let mut poly = Vec::with_capacity(m as usize + 1);
            let mut v = packed;
            for _ in 0..m {
                poly.push((v % p as u64) as u32);
                v /= p as u64;
            }
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial exists for every degree")
}

/// A field scalar bound to its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: Symbol,
    field: FieldSpec,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn value(&self) -> Symbol {
        self.value
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coefficients(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn wrap(&self, value: Symbol) -> FieldElement {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(self.wrap(self.field.pow(self.value, e)?))
    }
}

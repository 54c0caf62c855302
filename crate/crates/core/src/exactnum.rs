//! Exact scalars: arbitrary-precision rationals and the cyclotomic field
//! `ℚ(ω_N) = ℚ[x]/Φ_N(x)`.
//!
//! A [`Cyclo`] always holds the reduced residue of degree `< φ(N)`, so two
//! values are equal exactly when their orders and coefficient vectors agree.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Formats a rational as `"p/q"`, denominator included even when it is 1.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::InvalidInput(format!("bad rational {s:?}")))?;
    if den.is_zero() {
        return invalid(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

struct PhiData {
    int: Vec<BigInt>,
    rat: Vec<Rational>,
}

fn phi_cache() -> &'static RwLock<HashMap<u32, Arc<PhiData>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<PhiData>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn phi_data(d: u32) -> Arc<PhiData> {
    if let Some(p) = phi_cache().read().unwrap().get(&d) {
        return p.clone();
    }
    let int = compute_cyclotomic(d);
    let rat = int.iter().cloned().map(Rational::from_integer).collect();
    let data = Arc::new(PhiData { int, rat });
    phi_cache()
        .write()
        .unwrap()
        .entry(d)
        .or_insert(data)
        .clone()
}

fn compute_cyclotomic(d: u32) -> Vec<BigInt> {
    // x^d - 1
    let mut poly = vec![BigInt::zero(); d as usize + 1];
    poly[0] = -BigInt::one();
    poly[d as usize] = BigInt::one();
    for e in (1..d).filter(|e| d % e == 0) {
        let divisor = phi_data(e);
        poly = exact_div_monic(&poly, &divisor.int);
    }
    poly
}

/// Quotient of `num` by the monic `den`; the division must be exact.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// The `d`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(d: u32) -> Result<Vec<BigInt>> {
    if d == 0 {
        return invalid("cyclotomic polynomial of order 0");
    }
    Ok(phi_data(d).int.clone())
}

/// Euler's totient, i.e. the degree of `Φ_d`.
pub fn totient(d: u32) -> usize {
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// An element of `ℚ(ω_order)` as its reduced residue modulo `Φ_order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclo {
    pub fn zero(order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        Cyclo {
            order,
            coeffs: vec![Rational::zero(); totient(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(order: u32, v: i64) -> Self {
        Self::from_rational(order, rational_int(v))
    }

    /// Reduces an arbitrary polynomial in `ω` (constant term first).
    pub fn from_poly(order: u32, poly: Vec<Rational>) -> Result<Self> {
        if order == 0 {
            return invalid("cyclotomic order must be positive");
        }
        Ok(Cyclo {
            order,
            coeffs: reduce(poly, order),
        })
    }

    /// Builds a value from an already reduced coefficient vector; the length
    /// must be exactly `φ(order)`.
    pub fn from_reduced(order: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if order == 0 {
            return invalid("cyclotomic order must be positive");
        }
        let deg = totient(order);
        if coeffs.len() != deg {
            return invalid(format!(
                "expected {deg} coefficients for order {order}, got {}",
                coeffs.len()
            ));
        }
        Ok(Cyclo { order, coeffs })
    }

    /// `ω^k` in `ℚ(ω_d)`.
    pub fn omega_pow(d: u32, k: i64) -> Result<Self> {
        if d == 0 {
            return invalid("root of unity of order 0");
        }
        let e = k.rem_euclid(d as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::from_poly(d, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `ℚ`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.order);
        }
        Cyclo {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| if c.is_zero() { c.clone() } else { c * r })
                .collect(),
        }
    }

    fn check_order(&self, other: &Cyclo) -> Result<()> {
        if self.order != other.order {
            return Err(Error::IncompatibleOrder {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Cyclo) -> Result<Self> {
        self.check_order(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Cyclo) -> Result<Self> {
        self.check_order(other)?;
        Ok(mul_unchecked(self, other))
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm on
    /// `(self, Φ_order)` over `ℚ`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        let phi = phi_data(self.order);
        let (g, s) = ext_gcd_inverse(&self.coeffs, &phi.rat);
        // Φ is irreducible, so the gcd is a nonzero constant.
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let poly = s.into_iter().map(|c| c * &scale).collect();
        Self::from_poly(self.order, poly)
    }

    pub fn checked_div(&self, other: &Cyclo) -> Result<Self> {
        self.check_order(other)?;
        Ok(mul_unchecked(self, &other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_unchecked(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = mul_unchecked(&sq, &sq);
            }
        }
        Ok(acc)
    }

    /// Embeds the value into `ℚ(ω_target)`, where `order` divides `target`.
    pub fn lift(&self, target: u32) -> Result<Self> {
        if target == self.order {
            return Ok(self.clone());
        }
        if target == 0 || target % self.order != 0 {
            return Err(Error::IncompatibleOrder {
                left: self.order,
                right: target,
            });
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(target, r.clone()));
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        Self::from_poly(target, poly)
    }

    /// Coefficients as `"p/q"` strings, the JSON interchange form.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(order: u32, items: &[S]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_reduced(order, coeffs)
    }

    /// Parses the literal syntax `p/q`, `p/q*w^k`, `w^k`, joined by `+`/`-`,
    /// e.g. `"1/2-3*w^2"`. Terms are summed and reduced.
    pub fn parse(order: u32, s: &str) -> Result<Self> {
        if order == 0 {
            return invalid("cyclotomic order must be positive");
        }
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return invalid("empty cyclotomic literal");
        }
        let mut poly: Vec<Rational> = Vec::new();
        for (negative, term) in split_terms(&s)? {
            let (coef, power) = parse_term(term)?;
            let coef = if negative { -coef } else { coef };
            let e = power.rem_euclid(order as i64) as usize;
            if poly.len() <= e {
                poly.resize(e + 1, Rational::zero());
            }
            poly[e] += coef;
        }
        Self::from_poly(order, poly)
    }
}

fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    if let Some(&c) = bytes.first() {
        if c == b'+' || c == b'-' {
            negative = c == b'-';
            start = 1;
            i = 1;
        }
    }
    while i < bytes.len() {
        let c = bytes[i];
        // a sign directly after '^', '/', or another sign belongs to the number
        let attached = i == start || matches!(bytes[i - 1], b'^' | b'/' | b'+' | b'-' | b'*');
        if (c == b'+' || c == b'-') && !attached {
            terms.push((negative, &s[start..i]));
            negative = c == b'-';
            start = i + 1;
        }
        i += 1;
    }
    terms.push((negative, &s[start..]));
    for (_, t) in &terms {
        if t.is_empty() {
            return invalid(format!("malformed cyclotomic literal {s:?}"));
        }
    }
    Ok(terms)
}

fn parse_term(term: &str) -> Result<(Rational, i64)> {
    let (coef, omega) = match term.split_once('*') {
        Some((c, w)) => (Some(c), Some(w)),
        None if term.starts_with('w') => (None, Some(term)),
        None => (Some(term), None),
    };
    let coef = match coef {
        Some(c) => parse_rational(c)?,
        None => Rational::one(),
    };
    let power = match omega {
        None => 0,
        Some("w") => 1,
        Some(w) => match w.strip_prefix("w^") {
            Some(k) => k
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("bad exponent in {term:?}")))?,
            None => return invalid(format!("bad cyclotomic term {term:?}")),
        },
    };
    Ok((coef, power))
}

fn reduce(mut poly: Vec<Rational>, order: u32) -> Vec<Rational> {
    let phi = phi_data(order);
    let deg = phi.rat.len() - 1;
    if poly.len() > deg {
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut poly[k], Rational::zero());
            for (j, pj) in phi.rat[..deg].iter().enumerate() {
                if !pj.is_zero() {
                    poly[k - deg + j] -= &c * pj;
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// Reduces an integer polynomial modulo the monic `Φ_order`, keeping
/// integer coefficients; the result has length `φ(order)`.
pub(crate) fn reduce_integer(mut poly: Vec<BigInt>, order: u32) -> Vec<BigInt> {
    let phi = phi_data(order);
    let deg = phi.int.len() - 1;
    if poly.len() > deg {
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut poly[k]);
            for (j, pj) in phi.int[..deg].iter().enumerate() {
                if !pj.is_zero() {
                    poly[k - deg + j] -= &c * pj;
                }
            }
        }
    }
    poly.resize(deg, BigInt::zero());
    poly
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dn = den.len() - 1;
    if rem.len() < den.len() {
        return (vec![], rem);
    }
    let lead_inv = den[dn].recip();
    let mut quot = vec![Rational::zero(); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dn] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    trim(&mut rem);
    (quot, rem)
}

fn poly_sub_mul(a: &[Rational], q: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(if q.is_empty() || b.is_empty() { 0 } else { q.len() + b.len() - 1 });
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, x) in q.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(&mut out);
    out
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)`, `g = gcd(a, m)`.
fn ext_gcd_inverse(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut t0: Vec<Rational> = vec![];
    let mut t1: Vec<Rational> = vec![Rational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let t = poly_sub_mul(&t0, &q, &t1);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, t0)
}

fn mul_unchecked(a: &Cyclo, b: &Cyclo) -> Cyclo {
    debug_assert_eq!(a.order, b.order);
    if a.is_zero() || b.is_zero() {
        return Cyclo::zero(a.order);
    }
    if let Some(r) = a.as_rational() {
        return b.scale(r);
    }
    if let Some(r) = b.as_rational() {
        return a.scale(r);
    }
    let deg = a.coeffs.len();
    let mut prod = vec![Rational::zero(); 2 * deg - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    Cyclo {
        order: a.order,
        coeffs: reduce(prod, a.order),
    }
}

/// `a·b` in `ℚ(ω_d)`; rejects operands of different orders.
pub fn cyclo_mul(a: &Cyclo, b: &Cyclo) -> Result<Cyclo> {
    a.checked_mul(b)
}

/// Multiplicative inverse; rejects zero.
pub fn cyclo_inv(a: &Cyclo) -> Result<Cyclo> {
    a.inv()
}

/// `ω^k` in `ℚ(ω_d)`.
pub fn omega_pow(d: u32, k: i64) -> Result<Cyclo> {
    Cyclo::omega_pow(d, k)
}

// Operator impls panic on mismatched orders; the checked_* methods report
// the mismatch as an error instead.

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(mut self, rhs: Cyclo) -> Cyclo {
        self += &rhs;
        self
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(mut self, rhs: Cyclo) -> Cyclo {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        assert_eq!(self.order, rhs.order, "cyclotomic order mismatch");
        mul_unchecked(self, rhs)
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        &self * &rhs
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            write!(f, "{sign}{}", format_rational(&mag))?;
            match k {
                0 => {}
                1 => write!(f, "*w")?,
                _ => write!(f, "*w^{k}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0/1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.order, self)
    }
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

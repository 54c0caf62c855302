//! Checks around the vanishing of the hyperdeterminant.
//!
//! A form `F` has `Det(F) = 0` as soon as some `v ≠ 0` satisfies
//! `F(v,…,v,V) = F(v,…,V,v) = … = F(V,v,…,v) = 0` (the star condition).
//! The diagonal system `G_i(λ) = F(v,…,v,v_i)`, `v = Σ λ_j v_j`, encodes the
//! last-slot part of that condition. For two variables, a common projective
//! root is decided exactly by the Sylvester resultant; for more variables
//! only a finite-field search is offered, and its output is evidence rather
//! than proof.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::exactnum::{Cyclo, Rational};
use crate::hypermatrix::Hypermatrix;
use crate::linalg;

/// `true` iff every slice `F(v,…,V,…,v)` vanishes.
pub fn star_condition(f: &Hypermatrix, v: &[Cyclo]) -> Result<bool> {
    for slot in 1..=f.d() {
        if !f.slice(v, slot)?.iter().all(Cyclo::is_zero) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cayley's hyperdeterminant of a `2×2×2` hypermatrix:
/// `(|a111 a122; a211 a222| + |a121 a112; a221 a212|)² − 4·|a111 a112; a211 a212|·|a121 a122; a221 a222|`.
pub fn cayley_det_222(f: &Hypermatrix) -> Result<Cyclo> {
    if f.n() != 2 || f.d() != 3 {
        return invalid(format!(
            "the Cayley formula needs a 2x2x2 hypermatrix, got n = {}, d = {}",
            f.n(),
            f.d()
        ));
    }
    let a = |i: usize, j: usize, k: usize| f.entry(&[i, j, k]);
    let det2 = |p: &Cyclo, q: &Cyclo, r: &Cyclo, s: &Cyclo| &(p * s) - &(q * r);
    let first = det2(a(1, 1, 1), a(1, 2, 2), a(2, 1, 1), a(2, 2, 2));
    let second = det2(a(1, 2, 1), a(1, 1, 2), a(2, 2, 1), a(2, 1, 2));
    let third = det2(a(1, 1, 1), a(1, 1, 2), a(2, 1, 1), a(2, 1, 2));
    let fourth = det2(a(1, 2, 1), a(1, 2, 2), a(2, 2, 1), a(2, 2, 2));
    let sum = &first + &second;
    let four = Cyclo::from_int(f.root_order(), 4);
    Ok(&(&sum * &sum) - &(&four * &(&third * &fourth)))
}

/// A homogeneous polynomial in `nvars` variables with `ℚ(ω)` coefficients,
/// keyed by exponent vector. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    nvars: usize,
    degree: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, Cyclo>,
}

impl HomogeneousPoly {
    pub fn zero(nvars: usize, degree: usize, order: u32) -> Self {
        HomogeneousPoly {
            nvars,
            degree,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Cyclo> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Cyclo {
        self.terms
            .get(exponents)
            .cloned()
            .unwrap_or_else(|| Cyclo::zero(self.order))
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: &Cyclo) {
        debug_assert_eq!(exponents.len(), self.nvars);
        debug_assert_eq!(exponents.iter().sum::<u32>() as usize, self.degree);
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(exponents.clone())
            .or_insert_with(|| Cyclo::zero(self.order));
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn add(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    /// `λ_var · self`.
    pub fn mul_var(&self, var: usize) -> HomogeneousPoly {
        let mut out = HomogeneousPoly::zero(self.nvars, self.degree + 1, self.order);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[var] += 1;
            out.terms.insert(e, c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[Cyclo]) -> Result<Cyclo> {
        if point.len() != self.nvars {
            return invalid("point has the wrong number of coordinates");
        }
        let point = point
            .iter()
            .map(|c| c.lift(self.order))
            .collect::<Result<Vec<_>>>()?;
        let mut total = Cyclo::zero(self.order);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term = &term * &x.pow(k as i64)?;
                }
            }
            total += &term;
        }
        Ok(total)
    }
}

fn exponent_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl Serialize for HomogeneousPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, &Cyclo> = self
            .terms
            .iter()
            .map(|(e, c)| (exponent_key(e), c))
            .collect();
        map.serialize(s)
    }
}

/// The polynomials `G_1, …, G_n` of degree `d-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagSystem {
    pub n: usize,
    pub degree: usize,
    pub root_order: u32,
    pub polys: Vec<HomogeneousPoly>,
}

impl Serialize for DiagSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DiagSystem", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("root_order", &self.root_order)?;
        st.serialize_field("polys", &self.polys)?;
        st.end()
    }
}

fn exponents_of(idx: &[usize], n: usize) -> Vec<u32> {
    let mut e = vec![0u32; n];
    for &i in idx {
        e[i] += 1;
    }
    e
}

/// Expands `G_i(λ) = F(v,…,v,v_i)` with `v = Σ λ_j v_j`.
pub fn diag_system(f: &Hypermatrix) -> DiagSystem {
    let (n, d) = (f.n(), f.d());
    let mut polys = vec![HomogeneousPoly::zero(n, d - 1, f.root_order()); n];
    for (lin, a) in f.entries().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let idx = f.multi_index(lin);
        polys[idx[d - 1]].add_term(exponents_of(&idx[..d - 1], n), a);
    }
    DiagSystem {
        n,
        degree: d - 1,
        root_order: f.root_order(),
        polys,
    }
}

/// Expands `F(v,…,v)` with `v = Σ λ_j v_j`.
pub fn diag_polynomial(f: &Hypermatrix) -> HomogeneousPoly {
    let mut poly = HomogeneousPoly::zero(f.n(), f.d(), f.root_order());
    for (lin, a) in f.entries().iter().enumerate() {
        if !a.is_zero() {
            poly.add_term(exponents_of(&f.multi_index(lin), f.n()), a);
        }
    }
    poly
}

/// `Σ_i λ_i G_i`, which must equal the diagonal polynomial.
pub fn euler_combination(system: &DiagSystem) -> HomogeneousPoly {
    system
        .polys
        .iter()
        .enumerate()
        .fold(
            HomogeneousPoly::zero(system.n, system.degree + 1, system.root_order),
            |acc, (i, g)| acc.add(&g.mul_var(i)),
        )
}

/// Outcome of the two-variable resultant test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Resultant {
    Value(Cyclo),
    /// Both forms vanish identically; every point is a witness.
    Degenerate,
}

/// Coefficients of a binary form of degree `m`, from `λ₁^m` down to `λ₂^m`.
fn binary_coeffs(g: &HomogeneousPoly) -> Vec<Cyclo> {
    let m = g.degree() as u32;
    (0..=m).map(|k| g.coefficient(&[m - k, k])).collect()
}

fn check_binary(system: &DiagSystem) -> Result<()> {
    if system.n != 2 {
        return invalid(format!("binary resultant needs n = 2, got n = {}", system.n));
    }
    if system.degree == 0 {
        return invalid("binary resultant needs forms of positive degree");
    }
    Ok(())
}

/// The `2m × 2m` Sylvester matrix of two binary forms of degree `m`.
pub fn sylvester_matrix(g1: &HomogeneousPoly, g2: &HomogeneousPoly) -> Vec<Vec<Cyclo>> {
    let m = g1.degree();
    let size = 2 * m;
    let order = g1.order;
    let mut rows = Vec::with_capacity(size);
    for g in [g1, g2] {
        let coeffs = binary_coeffs(g);
        for shift in 0..m {
            let mut row = vec![Cyclo::zero(order); size];
            for (k, c) in coeffs.iter().enumerate() {
                row[shift + k] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Sylvester resultant of `(G₁, G₂)`; zero iff the forms share a projective
/// root over the algebraic closure.
pub fn resultant_n2(system: &DiagSystem) -> Result<Resultant> {
    check_binary(system)?;
    let (g1, g2) = (&system.polys[0], &system.polys[1]);
    if g1.is_zero() && g2.is_zero() {
        return Ok(Resultant::Degenerate);
    }
    let det = linalg::determinant(sylvester_matrix(g1, g2), system.root_order)?;
    Ok(Resultant::Value(det))
}

/// Exact witness extraction for `n = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactWitness {
    /// Both forms vanish; every point is a witness.
    Degenerate,
    /// No common projective root.
    None,
    /// A common root `(λ₁, λ₂)` in `ℚ(ω)`.
    Found(Vec<Cyclo>),
    /// A common root exists, but the gcd of the forms has no linear
    /// square-free part over `ℚ(ω)`, so it was not located.
    ExtensionField { gcd_degree: usize },
}

type UPoly = Vec<Cyclo>;

fn utrim(p: &mut UPoly) {
    while p.last().is_some_and(Cyclo::is_zero) {
        p.pop();
    }
}

fn udivrem(num: &[Cyclo], den: &[Cyclo]) -> Result<(UPoly, UPoly)> {
    let mut rem = num.to_vec();
    utrim(&mut rem);
    let dn = den.len() - 1;
    if rem.len() < den.len() {
        return Ok((vec![], rem));
    }
    let lead_inv = den[dn].inv()?;
    let order = lead_inv.order();
    let mut quot = vec![Cyclo::zero(order); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dn] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &(&c * dj);
        }
        quot[k] = c;
    }
    utrim(&mut rem);
    Ok((quot, rem))
}

fn ugcd(a: &[Cyclo], b: &[Cyclo]) -> Result<UPoly> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    utrim(&mut x);
    utrim(&mut y);
    while !y.is_empty() {
        let (_, r) = udivrem(&x, &y)?;
        x = std::mem::replace(&mut y, r);
    }
    Ok(x)
}

fn uderivative(p: &[Cyclo]) -> UPoly {
    let mut out: UPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&Rational::from_integer(BigInt::from(k))))
        .collect();
    utrim(&mut out);
    out
}

/// Locates a common root of `(G₁, G₂)` over `ℚ(ω)` when the gcd of the
/// forms has a linear square-free part.
pub fn witness_n2(system: &DiagSystem) -> Result<ExactWitness> {
    check_binary(system)?;
    let order = system.root_order;
    let (g1, g2) = (&system.polys[0], &system.polys[1]);
    if g1.is_zero() && g2.is_zero() {
        return Ok(ExactWitness::Degenerate);
    }
    let c1 = binary_coeffs(g1);
    let c2 = binary_coeffs(g2);
    // the point (1, 0)
    if c1[0].is_zero() && c2[0].is_zero() {
        return Ok(ExactWitness::Found(vec![Cyclo::one(order), Cyclo::zero(order)]));
    }
    // dehomogenize at λ₂ = 1: coefficient of t^j is the λ₁^j λ₂^{m-j} term
    let a: UPoly = c1.into_iter().rev().collect();
    let b: UPoly = c2.into_iter().rev().collect();
    let g = ugcd(&a, &b)?;
    if g.len() <= 1 {
        return Ok(ExactWitness::None);
    }
    let repeated = ugcd(&g, &uderivative(&g))?;
    let (squarefree, _) = if repeated.len() <= 1 {
        (g.clone(), vec![])
    } else {
        udivrem(&g, &repeated)?
    };
    if squarefree.len() == 2 {
        let root = -(&squarefree[0] * &squarefree[1].inv()?);
        return Ok(ExactWitness::Found(vec![root, Cyclo::one(order)]));
    }
    Ok(ExactWitness::ExtensionField {
        gcd_degree: g.len() - 1,
    })
}

/// Top Chern number `c_{n-1}(Ω_{ℙ^{n-1}}(d))`: the coefficient of `h^{n-1}`
/// in `(1 + (d-1)h)^n / (1 + dh)`, truncated mod `h^n`.
pub fn chern_top(n: u32, d: u32) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let len = n as usize;
    // (1 + (d-1)h)^n mod h^n
    let mut num = vec![BigInt::zero(); len];
    num[0] = BigInt::one();
    let step = BigInt::from(d) - 1;
    for _ in 0..n {
        for k in (1..len).rev() {
            let prev = num[k - 1].clone();
            num[k] += prev * &step;
        }
    }
    // 1 / (1 + dh) = Σ (-d)^k h^k
    let mut inv = vec![BigInt::one(); len];
    for k in 1..len {
        inv[k] = &inv[k - 1] * -BigInt::from(d);
    }
    (0..len).map(|i| &num[i] * &inv[len - 1 - i]).sum()
}

/// A hypermatrix reduced to `GF(p)`, with `ω` sent to the smallest element
/// of multiplicative order `root_order`.
#[derive(Clone, Debug)]
pub struct FfReduction {
    p: u64,
    omega: u64,
    n: usize,
    d: usize,
    entries: Vec<u64>,
}

/// Largest number of projective points a search will enumerate.
pub const POINT_LIMIT: u64 = 10_000_000;

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            while n % k == 0 {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest element of `GF(p)^×` with multiplicative order exactly `order`.
pub fn root_of_unity_mod(p: u64, order: u64) -> Option<u64> {
    if order == 0 || (p - 1) % order != 0 {
        return None;
    }
    let factors = prime_factors(order);
    (1..p).find(|&g| {
        pow_mod(g, order, p) == 1 && factors.iter().all(|&q| pow_mod(g, order / q, p) != 1)
    })
}

fn reduce_rational(r: &Rational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb).to_u64().unwrap();
    if den == 0 {
        return invalid(format!("denominator {} is divisible by p = {p}", r.denom()));
    }
    let num = r.numer().mod_floor(&pb).to_u64().unwrap();
    Ok(num * pow_mod(den, p - 2, p) % p)
}

impl FfReduction {
    pub fn new(f: &Hypermatrix, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if p >= 1 << 31 {
            return invalid(format!("p = {p} is too large for the finite-field search"));
        }
        let order = f.root_order() as u64;
        if (p - 1) % order != 0 {
            return invalid(format!("p = {p} is not 1 mod root_order = {order}"));
        }
        let omega = root_of_unity_mod(p, order).expect("order divides p - 1");
        let entries = f
            .entries()
            .iter()
            .map(|c| {
                let mut acc = 0u64;
                let mut pw = 1u64;
                for coef in c.coeffs() {
                    acc = (acc + reduce_rational(coef, p)? * pw) % p;
                    pw = pw * omega % p;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FfReduction {
            p,
            omega,
            n: f.n(),
            d: f.d(),
            entries,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Image of `ω` in `GF(p)`.
    pub fn omega(&self) -> u64 {
        self.omega
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// `j ↦ F(u,…,e_j,…,u)` over `GF(p)`, slot 1-based.
    pub fn slice(&self, u: &[u64], slot: usize) -> Vec<u64> {
        assert_eq!(u.len(), self.n);
        assert!((1..=self.d).contains(&slot));
        let p = self.p;
        let mut data = self.entries.clone();
        let mut rank = self.d;
        for axis in (0..self.d).rev() {
            if axis == slot - 1 {
                continue;
            }
            let inner = self.n.pow((rank - 1 - axis) as u32);
            let outer = data.len() / (inner * self.n);
            let mut next = vec![0u64; outer * inner];
            for o in 0..outer {
                for i in 0..inner {
                    let mut acc = 0u64;
                    for (k, &uk) in u.iter().enumerate() {
                        acc = (acc + data[(o * self.n + k) * inner + i] * uk) % p;
                    }
                    next[o * inner + i] = acc;
                }
            }
            data = next;
            rank -= 1;
        }
        data
    }

    pub fn star_condition(&self, u: &[u64]) -> bool {
        (1..=self.d).all(|slot| self.slice(u, slot).iter().all(|&x| x == 0))
    }
}

/// Normalized representatives of `ℙ^{n-1}(GF(p))` (first nonzero coordinate
/// equal to 1), in lexicographic order.
pub fn projective_points(n: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    (0..n).rev().flat_map(move |lead| {
        let free = n - 1 - lead;
        let count = p.pow(free as u32);
        (0..count).map(move |mut code| {
            let mut pt = vec![0u64; n];
            pt[lead] = 1;
            for k in (lead + 1..n).rev() {
                pt[k] = code % p;
                code /= p;
            }
            pt
        })
    })
}

/// First projective point `u` (lexicographic) with `F(u,…,u,V) = 0` over
/// `GF(p)`. A hit is evidence only: it neither proves nor refutes the
/// statement over a field of characteristic zero.
pub fn witness_search_ff(f: &Hypermatrix, p: u64) -> Result<Option<Vec<u64>>> {
    let reduced = FfReduction::new(f, p)?;
    let points = (0..f.n() as u32).try_fold(0u64, |acc, k| {
        p.checked_pow(k).and_then(|pk| acc.checked_add(pk))
    });
    match points {
        Some(count) if count <= POINT_LIMIT => {}
        _ => {
            return Err(Error::ResourceLimit(format!(
                "P^{}(GF({p})) has more than {POINT_LIMIT} points",
                f.n() - 1
            )))
        }
    }
    let d = f.d();
    Ok(projective_points(f.n(), p).find(|u| reduced.slice(u, d).iter().all(|&x| x == 0)))
}

//! Dense `n × … × n` hypermatrices over `ℚ(ω_N)` and the action of `S_d`
//! and of the group algebra `ℚ(ω)[S_d]` on them.
//!
//! Entries are stored row-major with slot 1 varying slowest, so the entry
//! `a_{i₁…i_d}` sits at `Σ_k (i_k − 1)·n^{d−k}`. Multi-indices in the public
//! API are 1-based.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::combinat::Permutation;
use crate::error::{invalid, Error, Result};
use crate::exactnum::{reduce_integer, totient, Cyclo, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypermatrix {
    n: usize,
    d: usize,
    root_order: u32,
    entries: Vec<Cyclo>,
}

fn checked_len(n: usize, d: usize) -> Result<usize> {
    n.checked_pow(d as u32)
        .ok_or_else(|| Error::ResourceLimit(format!("{n}^{d} entries do not fit in memory")))
}

impl Hypermatrix {
    pub fn new(n: usize, d: usize, root_order: u32, entries: Vec<Cyclo>) -> Result<Self> {
        if n == 0 || d == 0 {
            return invalid("hypermatrix needs n >= 1 and d >= 1");
        }
        if root_order == 0 || root_order as usize % d != 0 {
            return invalid(format!("root_order {root_order} is not a multiple of d = {d}"));
        }
        let len = checked_len(n, d)?;
        if entries.len() != len {
            return invalid(format!("expected {len} entries, got {}", entries.len()));
        }
        if let Some(bad) = entries.iter().find(|c| c.order() != root_order) {
            return Err(Error::IncompatibleOrder {
                left: root_order,
                right: bad.order(),
            });
        }
        Ok(Hypermatrix {
            n,
            d,
            root_order,
            entries,
        })
    }

    pub fn zeros(n: usize, d: usize) -> Result<Self> {
        Self::zeros_with_order(n, d, d as u32)
    }

    pub fn zeros_with_order(n: usize, d: usize, root_order: u32) -> Result<Self> {
        if root_order == 0 {
            return invalid("root_order must be positive");
        }
        let len = checked_len(n, d)?;
        Self::new(n, d, root_order, vec![Cyclo::zero(root_order); len])
    }

    /// Builds entries from a function of the 1-based multi-index.
    pub fn from_fn(
        n: usize,
        d: usize,
        root_order: u32,
        mut f: impl FnMut(&[usize]) -> Cyclo,
    ) -> Result<Self> {
        let len = checked_len(n, d)?;
        let mut entries = Vec::with_capacity(len);
        let mut idx = vec![1usize; d];
        for _ in 0..len {
            entries.push(f(&idx));
            for k in (0..d).rev() {
                if idx[k] < n {
                    idx[k] += 1;
                    break;
                }
                idx[k] = 1;
            }
        }
        Self::new(n, d, root_order, entries)
    }

    /// Rational entries in row-major order, embedded in `ℚ(ω_d)`.
    pub fn from_rationals(n: usize, d: usize, values: Vec<Rational>) -> Result<Self> {
        let order = d as u32;
        let entries = values
            .into_iter()
            .map(|r| Cyclo::from_rational(order, r))
            .collect();
        Self::new(n, d, order, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn entries(&self) -> &[Cyclo] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Row-major position of a 0-based multi-index.
    pub fn linear_index(&self, idx0: &[usize]) -> usize {
        idx0.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// 0-based multi-index of a row-major position.
    pub fn multi_index(&self, mut linear: usize) -> Vec<usize> {
        let mut idx = vec![0; self.d];
        for k in (0..self.d).rev() {
            idx[k] = linear % self.n;
            linear /= self.n;
        }
        idx
    }

    /// Entry `a_{i₁…i_d}`, 1-based. Panics on an out-of-range index.
    pub fn entry(&self, idx: &[usize]) -> &Cyclo {
        assert_eq!(idx.len(), self.d, "multi-index has wrong length");
        assert!(idx.iter().all(|&i| (1..=self.n).contains(&i)), "index out of range");
        let idx0: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        &self.entries[self.linear_index(&idx0)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Cyclo::is_zero)
    }

    fn check_same_shape(&self, other: &Hypermatrix) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return invalid(format!(
                "shape mismatch: {}^{} vs {}^{}",
                self.n, self.d, other.n, other.d
            ));
        }
        if self.root_order != other.root_order {
            return Err(Error::IncompatibleOrder {
                left: self.root_order,
                right: other.root_order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Hypermatrix) -> Result<Hypermatrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.with_entries(entries))
    }

    pub fn try_sub(&self, other: &Hypermatrix) -> Result<Hypermatrix> {
        self.check_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.with_entries(entries))
    }

    /// Multiplies every entry by `c`, which must have order dividing
    /// `root_order`.
    pub fn scale(&self, c: &Cyclo) -> Result<Hypermatrix> {
        let c = c.lift(self.root_order)?;
        let entries = self.entries.iter().map(|a| a * &c).collect();
        Ok(self.with_entries(entries))
    }

    /// Re-embeds all entries into `ℚ(ω_target)`.
    pub fn with_root_order(&self, target: u32) -> Result<Hypermatrix> {
        if target as usize % self.d != 0 {
            return invalid(format!("root_order {target} is not a multiple of d = {}", self.d));
        }
        let entries = self
            .entries
            .iter()
            .map(|c| c.lift(target))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.n, self.d, target, entries)
    }

    fn with_entries(&self, entries: Vec<Cyclo>) -> Hypermatrix {
        debug_assert_eq!(entries.len(), self.entries.len());
        Hypermatrix {
            n: self.n,
            d: self.d,
            root_order: self.root_order,
            entries,
        }
    }

    fn coerce_vector(&self, v: &[Cyclo]) -> Result<Vec<Cyclo>> {
        if v.len() != self.n {
            return invalid(format!("vector has length {}, expected {}", v.len(), self.n));
        }
        v.iter().map(|c| c.lift(self.root_order)).collect()
    }

    /// `F(x₁, …, x_d)` for coordinate vectors `x_j`.
    pub fn eval(&self, vectors: &[Vec<Cyclo>]) -> Result<Cyclo> {
        if vectors.len() != self.d {
            return invalid(format!("eval needs {} vectors, got {}", self.d, vectors.len()));
        }
        let vs = vectors
            .iter()
            .map(|v| self.coerce_vector(v))
            .collect::<Result<Vec<_>>>()?;
        let mut data = self.entries.clone();
        for axis in (0..self.d).rev() {
            data = contract_axis(&data, self.n, axis + 1, axis, &vs[axis]);
        }
        Ok(data.pop().unwrap())
    }

    /// `F(v, …, v)`.
    pub fn diag_eval(&self, v: &[Cyclo]) -> Result<Cyclo> {
        let v = self.coerce_vector(v)?;
        self.eval(&vec![v; self.d])
    }

    /// The covector `j ↦ F(v, …, e_j, …, v)` with `e_j` in the given 1-based
    /// slot.
    pub fn slice(&self, v: &[Cyclo], slot: usize) -> Result<Vec<Cyclo>> {
        if slot == 0 || slot > self.d {
            return invalid(format!("slot {slot} out of range 1..={}", self.d));
        }
        let v = self.coerce_vector(v)?;
        let mut data = self.entries.clone();
        let mut rank = self.d;
        for axis in (0..self.d).rev() {
            if axis == slot - 1 {
                continue;
            }
            data = contract_axis(&data, self.n, rank, axis, &v);
            rank -= 1;
        }
        Ok(data)
    }

    /// Source position for every output position under `σ`:
    /// `(σF)[i₁…i_d] = F[i_{σ(1)}…i_{σ(d)}]`.
    fn source_map(&self, sigma: &Permutation) -> Vec<usize> {
        let strides: Vec<usize> = (0..self.d).map(|k| self.n.pow((self.d - 1 - k) as u32)).collect();
        (0..self.entries.len())
            .map(|lin| {
                let idx = self.multi_index(lin);
                (0..self.d).map(|k| idx[sigma.apply0(k)] * strides[k]).sum()
            })
            .collect()
    }

    /// `σF`, with `(σF)(x₁,…,x_d) = F(x_{σ(1)},…,x_{σ(d)})`.
    pub fn act(&self, sigma: &Permutation) -> Result<Hypermatrix> {
        if sigma.degree() != self.d {
            return invalid(format!(
                "permutation of degree {} acting on order-{} hypermatrix",
                sigma.degree(),
                self.d
            ));
        }
        let map = self.source_map(sigma);
        let entries = map.into_iter().map(|j| self.entries[j].clone()).collect();
        Ok(self.with_entries(entries))
    }

    /// `γF = Σ_σ c_σ·σF`.
    pub fn act_algebra(&self, gamma: &GroupAlgebraElement) -> Result<Hypermatrix> {
        CompiledAction::new(gamma, self.n, self.root_order)?.apply(self)
    }
}

/// Contracts `axis` of a rank-`rank` tensor (each axis of length `n`) with `v`.
fn contract_axis(data: &[Cyclo], n: usize, rank: usize, axis: usize, v: &[Cyclo]) -> Vec<Cyclo> {
    let inner = n.pow((rank - 1 - axis) as u32);
    let outer = data.len() / (inner * n);
    let order = v[0].order();
    let mut out = Vec::with_capacity(outer * inner);
    for o in 0..outer {
        for i in 0..inner {
            let mut acc = Cyclo::zero(order);
            for (k, vk) in v.iter().enumerate() {
                if vk.is_zero() {
                    continue;
                }
                let a = &data[(o * n + k) * inner + i];
                if !a.is_zero() {
                    acc += &(a * vk);
                }
            }
            out.push(acc);
        }
    }
    out
}

/// `σF`.
pub fn act(sigma: &Permutation, f: &Hypermatrix) -> Result<Hypermatrix> {
    f.act(sigma)
}

/// `γF`.
pub fn act_algebra(gamma: &GroupAlgebraElement, f: &Hypermatrix) -> Result<Hypermatrix> {
    f.act_algebra(gamma)
}

/// A finite formal sum `Σ c_σ σ` in `ℚ(ω_N)[S_d]`. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupAlgebraElement {
    degree: usize,
    order: u32,
    terms: BTreeMap<Permutation, Cyclo>,
}

impl GroupAlgebraElement {
    pub fn zero(degree: usize, order: u32) -> Self {
        GroupAlgebraElement {
            degree,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(degree: usize, order: u32) -> Self {
        let mut g = Self::zero(degree, order);
        g.terms.insert(Permutation::identity(degree), Cyclo::one(order));
        g
    }

    pub fn from_terms(
        degree: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Permutation, Cyclo)>,
    ) -> Result<Self> {
        let mut g = Self::zero(degree, order);
        for (sigma, c) in terms {
            g.add_term(sigma, c)?;
        }
        Ok(g)
    }

    pub fn add_term(&mut self, sigma: Permutation, c: Cyclo) -> Result<()> {
        if sigma.degree() != self.degree {
            return invalid(format!(
                "permutation of degree {} in an element of degree {}",
                sigma.degree(),
                self.degree
            ));
        }
        let c = c.lift(self.order)?;
        let slot = self
            .terms
            .entry(sigma.clone())
            .or_insert_with(|| Cyclo::zero(self.order));
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&sigma);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, Cyclo> {
        &self.terms
    }

    pub fn coefficient(&self, sigma: &Permutation) -> Cyclo {
        self.terms
            .get(sigma)
            .cloned()
            .unwrap_or_else(|| Cyclo::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &GroupAlgebraElement) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Product in the group algebra; acting with `a.mul(b)` equals acting
    /// with `b` first, then `a`.
    pub fn mul(&self, other: &GroupAlgebraElement) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.degree, self.order);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                out.add_term(s.compose(t)?, a * b)?;
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &GroupAlgebraElement) -> Result<()> {
        if self.degree != other.degree {
            return invalid(format!("degrees differ: {} vs {}", self.degree, other.degree));
        }
        if self.order != other.order {
            return Err(Error::IncompatibleOrder {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }
}

/// A group-algebra element turned into a sparse linear map on the
/// `n^d`-dimensional entry space: row `I` lists `(J, coefficient)` with
/// `(γF)[I] = Σ coefficient·F[J]`. Terms landing on the same source entry
/// are merged, so each row has at most orbit-size many terms.
#[derive(Clone, Debug)]
pub struct CompiledAction {
    n: usize,
    d: usize,
    root_order: u32,
    rows: Vec<Vec<(usize, Cyclo)>>,
    /// The same rows over a common denominator: coefficient `c` is stored as
    /// the sparse integer polynomial `c·scale`.
    scaled_rows: Vec<Vec<(usize, SparseInt)>>,
    scale: BigInt,
}

/// Nonzero `(power, coefficient)` pairs of an integer polynomial.
type SparseInt = Vec<(usize, BigInt)>;

fn denominators_lcm<'a>(values: impl Iterator<Item = &'a Cyclo>) -> BigInt {
    values
        .flat_map(|c| c.coeffs())
        .filter(|r| !r.is_zero())
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// `c·scale` as a sparse integer polynomial; `scale` must clear every
/// denominator of `c`.
fn scaled(c: &Cyclo, scale: &BigInt) -> SparseInt {
    c.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(k, r)| (k, r.numer() * (scale / r.denom())))
        .collect()
}

impl CompiledAction {
    pub fn new(gamma: &GroupAlgebraElement, n: usize, root_order: u32) -> Result<Self> {
        let d = gamma.degree();
        let shape = Hypermatrix::zeros_with_order(n, d, root_order)?;
        let mut rows: Vec<Vec<(usize, Cyclo)>> = vec![Vec::new(); shape.len()];
        for (sigma, c) in gamma.terms() {
            let c = c.lift(root_order)?;
            for (i, j) in shape.source_map(sigma).into_iter().enumerate() {
                let row = &mut rows[i];
                match row.iter_mut().find(|(src, _)| *src == j) {
                    Some((_, acc)) => *acc += &c,
                    None => row.push((j, c.clone())),
                }
            }
        }
        for row in &mut rows {
            row.retain(|(_, c)| !c.is_zero());
            row.sort_by_key(|(j, _)| *j);
        }
        let scale = denominators_lcm(rows.iter().flatten().map(|(_, c)| c));
        let scaled_rows = rows
            .iter()
            .map(|row| row.iter().map(|(j, c)| (*j, scaled(c, &scale))).collect())
            .collect();
        Ok(CompiledAction {
            n,
            d,
            root_order,
            rows,
            scaled_rows,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Cyclo)>] {
        &self.rows
    }

    pub fn apply(&self, f: &Hypermatrix) -> Result<Hypermatrix> {
        if f.n != self.n || f.d != self.d {
            return invalid(format!(
                "operator for {}^{} applied to {}^{}",
                self.n, self.d, f.n, f.d
            ));
        }
        if f.root_order != self.root_order {
            return Err(Error::IncompatibleOrder {
                left: self.root_order,
                right: f.root_order,
            });
        }
        // Work in ℤ[x]/Φ over one common denominator so that no rational
        // normalization happens until the final division.
        let input_scale = denominators_lcm(f.entries.iter());
        let numerators: Vec<SparseInt> = f.entries.iter().map(|a| scaled(a, &input_scale)).collect();
        let denominator = &input_scale * &self.scale;
        let width = 2 * totient(self.root_order) - 1;
        let entries = self
            .scaled_rows
            .iter()
            .map(|row| {
                let mut acc = vec![BigInt::zero(); width];
                for (j, c) in row {
                    for (ka, va) in &numerators[*j] {
                        for (kc, vc) in c {
                            acc[ka + kc] += va * vc;
                        }
                    }
                }
                let coeffs = reduce_integer(acc, self.root_order)
                    .into_iter()
                    .map(|x| Rational::new(x, denominator.clone()))
                    .collect();
                Cyclo::from_reduced(self.root_order, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(f.with_entries(entries))
    }

    /// Dense matrix of the map, `matrix[I][J]`.
    pub fn to_dense(&self) -> Vec<Vec<Cyclo>> {
        let dim = self.rows.len();
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![Cyclo::zero(self.root_order); dim];
                for (j, c) in row {
                    dense[*j] = c.clone();
                }
                dense
            })
            .collect()
    }
}

/// On-disk form: `{"n", "d", "root_order", "entries": [["p/q", …], …]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypermatrixDoc {
    n: usize,
    d: usize,
    root_order: u32,
    entries: Vec<Vec<String>>,
}

impl Serialize for Hypermatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypermatrixDoc {
            n: self.n,
            d: self.d,
            root_order: self.root_order,
            entries: self.entries.iter().map(Cyclo::to_strings).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypermatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = HypermatrixDoc::deserialize(d)?;
        Hypermatrix::try_from(doc).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<HypermatrixDoc> for Hypermatrix {
    type Error = Error;
    fn try_from(doc: HypermatrixDoc) -> Result<Self> {
        if doc.root_order == 0 {
            return invalid("root_order must be positive");
        }
        let entries = doc
            .entries
            .iter()
            .map(|e| Cyclo::from_strings(doc.root_order, e))
            .collect::<Result<Vec<_>>>()?;
        Hypermatrix::new(doc.n, doc.d, doc.root_order, entries)
    }
}

impl Hypermatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypermatrix serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HypermatrixDoc = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed hypermatrix JSON: {e}")))?;
        Hypermatrix::try_from(doc)
    }
}

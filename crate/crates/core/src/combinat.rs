//! Partitions, permutations and the character theory of `S_d`.
//!
//! Irreducible characters are evaluated with the Murnaghan–Nakayama rule on
//! beta-sets (bead positions on an abacus); the dimension formulas use hook
//! lengths and contents.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A partition of its weight, parts weakly decreasing and positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return invalid(format!("partition {parts:?} has a zero part"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("partition {parts:?} is not weakly decreasing"));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of rows of the Young diagram.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(d)`
    pub fn row(d: u32) -> Self {
        Partition(if d == 0 { vec![] } else { vec![d] })
    }

    /// `(1, …, 1)`
    pub fn column(d: u32) -> Self {
        Partition(vec![1; d as usize])
    }

    /// `(d-1, 1)`, the shape of the standard representation.
    pub fn standard(d: u32) -> Result<Self> {
        if d < 2 {
            return invalid("the standard shape (d-1,1) needs d >= 2");
        }
        Ok(Partition(vec![d - 1, 1]))
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (0..width)
                .map(|c| self.0.iter().filter(|&&p| p > c).count() as u32)
                .collect(),
        )
    }

    /// Hook lengths, row by row.
    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.weight() as usize);
        for (r, &len) in self.0.iter().enumerate() {
            for c in 0..len {
                let arm = len - c - 1;
                let leg = conj.0[c as usize] - r as u32 - 1;
                out.push(arm + leg + 1);
            }
        }
        out
    }

    /// Multiplicities `m_i` of each part size `i`, indexed from 1.
    fn multiplicities(&self) -> HashMap<u32, u32> {
        let mut m = HashMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition(vec![]));
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidInput(format!("bad partition {s:?}")))?;
        Partition::new(parts)
    }
}

/// All partitions of `d` in reverse-lexicographic order, from `(d)` down to
/// `(1, …, 1)`.
pub fn partitions(d: u32) -> Vec<Partition> {
    fn go(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// A permutation of `{1, …, d}`. Stored 0-based; the public API speaks
/// 1-based images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((0..d).collect())
    }

    /// `images[j-1] = σ(j)` for `j = 1..=d`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        let mut out = Vec::with_capacity(d);
        for &im in images {
            if im == 0 || im > d || seen[im - 1] {
                return invalid(format!("{images:?} is not a permutation of 1..={d}"));
            }
            seen[im - 1] = true;
            out.push(im - 1);
        }
        Ok(Permutation(out))
    }

    /// The cycle `(c₁ c₂ … c_k)` in `S_d`, points 1-based.
    pub fn cycle(d: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=d).collect();
        let mut seen = vec![false; d];
        for (i, &p) in points.iter().enumerate() {
            if p == 0 || p > d || seen[p - 1] {
                return invalid(format!("bad cycle {points:?} in S_{d}"));
            }
            seen[p - 1] = true;
            images[p - 1] = points[(i + 1) % points.len()];
        }
        Permutation::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    /// `σ(j)` with 0-based points.
    #[inline]
    pub fn apply0(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `j ↦ self(other(j))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return invalid(format!(
                "cannot compose permutations of degree {} and {}",
                self.degree(),
                other.degree()
            ));
        }
        Ok(Permutation(other.0.iter().map(|&j| self.0[j]).collect()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            acc = Permutation(acc.0.iter().map(|&j| base.0[j]).collect());
        }
        acc
    }

    /// Disjoint cycles (0-based points), each starting at its smallest point.
    fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut j = self.0[start];
            while j != start {
                seen[j] = true;
                cyc.push(j);
                j = self.0[j];
            }
            out.push(cyc);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(|c| c.len() as u32).collect())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "(1)");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

/// The cycle type of `σ`.
pub fn cycle_type(sigma: &Permutation) -> Partition {
    sigma.cycle_type()
}

/// All of `S_d`, lexicographic in the image sequence.
pub fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut cur: Vec<usize> = (0..d).collect();
    let mut out = vec![Permutation(cur.clone())];
    loop {
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation(cur.clone()));
    }
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Number of permutations with cycle type `μ`: `d! / z_μ`.
pub fn class_size(mu: &Partition) -> BigUint {
    let mut z = BigUint::one();
    for (part, mult) in mu.multiplicities() {
        z *= BigUint::from(part).pow(mult);
        z *= factorial(mult);
    }
    factorial(mu.weight()) / z
}

type CharKey = (Vec<u32>, Vec<u32>);

fn char_memo() -> &'static RwLock<HashMap<CharKey, i64>> {
    static MEMO: OnceLock<RwLock<HashMap<CharKey, i64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `χ_λ(μ)`: the irreducible character of shape `λ` on the class of cycle
/// type `μ`.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.weight() != mu.weight() {
        return invalid(format!(
            "character: weights differ ({} vs {})",
            lambda.weight(),
            mu.weight()
        ));
    }
    Ok(mn(&lambda.0, &mu.0))
}

fn mn(lambda: &[u32], mu: &[u32]) -> i64 {
    if mu.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = char_memo().read().unwrap().get(&key) {
        return v;
    }

    let strip = mu[0];
    let len = lambda.len() as u32;
    let beta: Vec<u32> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i as u32)
        .collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < strip || beta.contains(&(b - strip)) {
            continue;
        }
        let target = b - strip;
        // beads jumped over = leg length of the removed border strip
        let height = beta.iter().filter(|&&c| c > target && c < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<u32> = next
            .iter()
            .enumerate()
            .map(|(i, &c)| c - (len - 1 - i as u32))
            .filter(|&p| p > 0)
            .collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&shape, &mu[1..]);
    }

    char_memo().write().unwrap().entry(key).or_insert(total);
    total
}

/// `dim V_λ` by the hook length formula.
pub fn dim_irrep(lambda: &Partition) -> BigUint {
    let hooks: BigUint = lambda.hooks().into_iter().map(BigUint::from).product();
    factorial(lambda.weight()) / hooks
}

/// `dim 𝕊_λ(Kⁿ)` by the hook content formula; zero when `λ` has more than
/// `n` rows.
pub fn dim_schur(lambda: &Partition, n: u32) -> BigUint {
    if lambda.len() > n as usize {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    for (r, &len) in lambda.0.iter().enumerate() {
        for c in 0..len {
            num *= n + c - r as u32;
        }
    }
    let hooks: BigUint = lambda.hooks().into_iter().map(BigUint::from).product();
    num / hooks
}

//! Dimension and codimension counts for the symmetry components, with a
//! cross-check against exact projector ranks.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::combinat::{dim_irrep, dim_schur, partitions, Partition};
use crate::error::{invalid, Result};
use crate::symmetry::{subspace_rank, Label};

fn binom(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    binomial(BigUint::from(n), BigUint::from(k))
}

/// `dim W_λ = dim V_λ · dim 𝕊_λ(Kⁿ)`.
pub fn dim_w(lambda: &Partition, n: u32) -> BigUint {
    dim_irrep(lambda) * dim_schur(lambda, n)
}

/// `(d-1)·C(n+d-2, d)`, the dimension of one eigencomponent of the
/// standard component.
pub fn dim_wi_standard(n: u32, d: u32) -> Result<BigUint> {
    if d < 2 {
        return invalid(format!("the standard component needs d >= 2, got {d}"));
    }
    Ok(BigUint::from(d - 1) * binom(n + d - 2, d))
}

/// `(C(n+d-1,d) + (d-2)(d-1)C(n+d-2,d), C(n+d-1,d) + (d-1)²C(n+d-2,d))`:
/// the codimension of each subspace on which the determinant vanishes, and
/// of their common subspace.
pub fn codims(n: u32, d: u32) -> Result<(BigUint, BigUint)> {
    if d < 3 {
        return invalid(format!("codimensions need d >= 3, got {d}"));
    }
    let sym = binom(n + d - 1, d);
    let std = binom(n + d - 2, d);
    let single = &sym + BigUint::from((d - 2) * (d - 1)) * &std;
    let common = sym + BigUint::from((d - 1) * (d - 1)) * std;
    Ok((single, common))
}

/// Serializes a count as a JSON number when it fits in `u64`, otherwise as
/// a decimal string.
fn ser_count<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

fn ser_opt_count<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_count(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionRow {
    pub partition: Partition,
    #[serde(serialize_with = "ser_count")]
    pub dim_irrep: BigUint,
    #[serde(serialize_with = "ser_count")]
    pub dim_schur: BigUint,
    #[serde(serialize_with = "ser_count")]
    pub dim_w: BigUint,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionTable {
    pub n: u32,
    pub d: u32,
    pub rows: Vec<DimensionRow>,
    #[serde(serialize_with = "ser_count")]
    pub total: BigUint,
    #[serde(serialize_with = "ser_opt_count")]
    pub dim_wi_standard: Option<BigUint>,
    #[serde(serialize_with = "ser_opt_count")]
    pub codim_theorem: Option<BigUint>,
    #[serde(serialize_with = "ser_opt_count")]
    pub codim_common: Option<BigUint>,
}

impl DimensionTable {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if n == 0 || d == 0 {
            return invalid("dimension tables need n >= 1 and d >= 1");
        }
        let rows: Vec<DimensionRow> = partitions(d)
            .into_iter()
            .map(|p| DimensionRow {
                dim_irrep: dim_irrep(&p),
                dim_schur: dim_schur(&p, n),
                dim_w: dim_w(&p, n),
                partition: p,
            })
            .collect();
        let total = rows.iter().map(|r| &r.dim_w).sum();
        let (codim_theorem, codim_common) = match codims(n, d) {
            Ok((a, b)) => (Some(a), Some(b)),
            Err(_) => (None, None),
        };
        Ok(DimensionTable {
            n,
            d,
            rows,
            total,
            dim_wi_standard: dim_wi_standard(n, d).ok(),
            codim_theorem,
            codim_common,
        })
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        let header = ["partition", "dim_irrep", "dim_schur", "dim_W"];
        let body: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    format!("({})", r.partition),
                    r.dim_irrep.to_string(),
                    r.dim_schur.to_string(),
                    r.dim_w.to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = format!("n = {}, d = {}\n", self.n, self.d);
        let mut line = |cells: [&str; 4]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(header);
        for row in &body {
            line([&row[0], &row[1], &row[2], &row[3]]);
        }
        let _ = writeln!(out, "total: {}", self.total);
        let optional = [
            ("dim_Wi_standard", &self.dim_wi_standard),
            ("codim_theorem", &self.codim_theorem),
            ("codim_common", &self.codim_common),
        ];
        for (name, value) in optional {
            if let Some(v) = value {
                let _ = writeln!(out, "{name}: {v}");
            }
        }
        out
    }
}

/// Projector rank next to the closed-form dimension of one component.
#[derive(Clone, Debug, Serialize)]
pub struct RankRow {
    pub label: Label,
    pub rank: usize,
    #[serde(serialize_with = "ser_count")]
    pub formula: BigUint,
}

/// Three independent computations of the eigencomponent dimension, plus
/// the isotypic ranks.
#[derive(Clone, Debug, Serialize)]
pub struct RankTriangulation {
    pub n: u32,
    pub d: u32,
    pub isotypic: Vec<RankRow>,
    pub eigen_ranks: Vec<usize>,
    #[serde(serialize_with = "ser_count")]
    pub dim_standard: BigUint,
    #[serde(serialize_with = "ser_count")]
    pub hook_content: BigUint,
    #[serde(serialize_with = "ser_count")]
    pub closed_form: BigUint,
}

impl RankTriangulation {
    /// Exact projector ranks; fails with a resource error when `n^d`
    /// exceeds the rank guard.
    pub fn compute(n: u32, d: u32) -> Result<Self> {
        if d < 3 {
            return invalid(format!("eigencomponents need d >= 3, got {d}"));
        }
        let isotypic = partitions(d)
            .into_iter()
            .map(|p| {
                let rank = subspace_rank(&Label::Isotypic(p.clone()), n as usize)?;
                Ok(RankRow {
                    formula: dim_w(&p, n),
                    label: Label::Isotypic(p),
                    rank,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let eigen_ranks = (1..d as usize)
            .map(|m| subspace_rank(&Label::eigen(d, m)?, n as usize))
            .collect::<Result<Vec<_>>>()?;
        let std = Partition::standard(d)?;
        Ok(RankTriangulation {
            n,
            d,
            isotypic,
            eigen_ranks,
            dim_standard: dim_w(&std, n),
            hook_content: dim_schur(&std, n),
            closed_form: dim_wi_standard(n, d)?,
        })
    }

    pub fn isotypic_consistent(&self) -> bool {
        self.isotypic.iter().all(|r| BigUint::from(r.rank) == r.formula)
    }

    /// All eigencomponent ranks agree, sum to `dim W_(d-1,1)`, and match
    /// both closed forms.
    pub fn eigen_consistent(&self) -> bool {
        let first = self.eigen_ranks[0];
        let sum: usize = self.eigen_ranks.iter().sum();
        self.eigen_ranks.iter().all(|&r| r == first)
            && BigUint::from(sum) == self.dim_standard
            && BigUint::from(first) == self.hook_content
            && self.hook_content == self.closed_form
    }
}

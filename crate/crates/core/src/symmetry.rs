//! Symmetry-type decomposition of hypermatrices.
//!
//! The isotypic component `W_λ` is cut out by the central idempotent
//! `P_λ = (dim V_λ / d!) Σ_σ χ_λ(σ) σ`. The standard component `W_(d-1,1)`
//! is further split by the eigenprojectors of a fixed `d`-cycle `σ`,
//! `Π_m = (1/d) Σ_j ω^{-mj} σ^j`, whose image is the eigenspace
//! `{G : σG = ω^m G}`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::combinat::{all_permutations, character, dim_irrep, factorial, partitions, Partition, Permutation};
use crate::error::{invalid, Error, Result};
use crate::exactnum::{omega_pow, Cyclo, Rational};
use crate::hypermatrix::{CompiledAction, GroupAlgebraElement, Hypermatrix};
use crate::linalg;

/// Largest entry-space dimension for which exact projector ranks are computed.
pub const RANK_GUARD: usize = 4096;

/// Component label: an isotypic component `W_λ`, or the eigencomponent
/// `W^m_(d-1,1)` on which the canonical cycle acts as `ω^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Isotypic(Partition),
    Eigen { shape: Partition, m: usize },
}

impl Label {
    pub fn eigen(d: u32, m: usize) -> Result<Label> {
        if d < 3 || m == 0 || m >= d as usize {
            return invalid(format!("no eigencomponent {m} for d = {d}"));
        }
        Ok(Label::Eigen {
            shape: Partition::standard(d)?,
            m,
        })
    }

    pub fn weight(&self) -> u32 {
        match self {
            Label::Isotypic(p) => p.weight(),
            Label::Eigen { shape, .. } => shape.weight(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Isotypic(p) => write!(f, "{p}"),
            Label::Eigen { shape, m } => write!(f, "{shape}#{m}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Label> {
        match s.split_once('#') {
            None => Ok(Label::Isotypic(s.parse()?)),
            Some((shape, m)) => {
                let shape: Partition = shape.parse()?;
                let m: usize = m
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad eigencomponent label {s:?}")))?;
                let d = shape.weight();
                if shape != Partition::standard(d)? {
                    return invalid(format!("eigencomponents exist only for (d-1,1), got {shape}"));
                }
                Label::eigen(d, m)
            }
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Components of a hypermatrix keyed by label, in report order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub components: Vec<(Label, Hypermatrix)>,
}

impl DecompositionReport {
    pub fn get(&self, label: &Label) -> Option<&Hypermatrix> {
        self.components
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, h)| h)
    }

    /// Sum of all components.
    pub fn recompose(&self) -> Result<Hypermatrix> {
        let mut iter = self.components.iter();
        let (_, first) = iter
            .next()
            .ok_or_else(|| Error::InvalidInput("empty decomposition".into()))?;
        iter.try_fold(first.clone(), |acc, (_, h)| acc.try_add(h))
    }

    /// Replaces the `(d-1,1)` component by its `d-1` eigencomponents.
    pub fn refine_standard(self) -> Result<DecompositionReport> {
        let mut components = Vec::with_capacity(self.components.len() + 2);
        for (label, h) in self.components {
            match &label {
                Label::Isotypic(p) if p.weight() >= 3 && *p == Partition::standard(p.weight())? => {
                    for (i, part) in decompose_standard(&h)?.into_iter().enumerate() {
                        components.push((Label::eigen(p.weight(), i + 1)?, part));
                    }
                }
                _ => components.push((label, h)),
            }
        }
        Ok(DecompositionReport { components })
    }
}

impl Serialize for DecompositionReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            label: String,
            hypermatrix: &'a Hypermatrix,
        }
        let entries: Vec<Entry> = self
            .components
            .iter()
            .map(|(l, h)| Entry {
                label: l.to_string(),
                hypermatrix: h,
            })
            .collect();
        let mut st = s.serialize_struct("DecompositionReport", 1)?;
        st.serialize_field("components", &entries)?;
        st.end()
    }
}

/// The central idempotent `P_λ` of `ℚ[S_d]`, with coefficients in `ℚ(ω_d)`.
pub fn isotypic_projector(lambda: &Partition) -> Result<GroupAlgebraElement> {
    let d = lambda.weight();
    if d == 0 {
        return invalid("isotypic projector of the empty partition");
    }
    let scale = Rational::new(
        BigInt::from(dim_irrep(lambda)),
        BigInt::from(factorial(d)),
    );
    let mut chars: HashMap<Partition, i64> = HashMap::new();
    let terms = all_permutations(d as usize).into_iter().filter_map(|sigma| {
        let mu = sigma.cycle_type();
        let chi = *chars
            .entry(mu.clone())
            .or_insert_with(|| character(lambda, &mu).expect("same weight"));
        (chi != 0).then(|| {
            let c = &scale * Rational::from_integer(BigInt::from(chi));
            (sigma, Cyclo::from_rational(d, c))
        })
    });
    let terms: Vec<_> = terms.collect();
    GroupAlgebraElement::from_terms(d as usize, d, terms)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum OperatorKey {
    Isotypic(Partition),
    Eigen { cycle: Permutation, m: usize },
}

type CacheKey = (OperatorKey, usize, u32);

fn operator_cache() -> &'static RwLock<HashMap<CacheKey, Arc<CompiledAction>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<CompiledAction>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn compiled(key: OperatorKey, n: usize, root_order: u32) -> Result<Arc<CompiledAction>> {
    let cache_key = (key, n, root_order);
    if let Some(op) = operator_cache().read().unwrap().get(&cache_key) {
        return Ok(op.clone());
    }
    let gamma = match &cache_key.0 {
        OperatorKey::Isotypic(lambda) => isotypic_projector(lambda)?,
        OperatorKey::Eigen { cycle, m } => eigenprojector_with_cycle(cycle, *m)?,
    };
    let op = Arc::new(CompiledAction::new(&gamma, n, root_order)?);
    Ok(operator_cache()
        .write()
        .unwrap()
        .entry(cache_key)
        .or_insert(op)
        .clone())
}

/// `P_λ F`, the `W_λ` component of `F`.
pub fn project_isotypic(f: &Hypermatrix, lambda: &Partition) -> Result<Hypermatrix> {
    if lambda.weight() as usize != f.d() {
        return invalid(format!(
            "partition {lambda} has weight {}, hypermatrix has order {}",
            lambda.weight(),
            f.d()
        ));
    }
    compiled(OperatorKey::Isotypic(lambda.clone()), f.n(), f.root_order())?.apply(f)
}

/// One component per partition of `d`, in reverse-lexicographic order.
pub fn decompose_isotypic(f: &Hypermatrix) -> Result<DecompositionReport> {
    let components = partitions(f.d() as u32)
        .into_iter()
        .map(|lambda| {
            let h = project_isotypic(f, &lambda)?;
            Ok((Label::Isotypic(lambda), h))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionReport { components })
}

/// The `d`-cycle `(1 2 … d)`.
pub fn canonical_cycle(d: usize) -> Result<Permutation> {
    if d < 2 {
        return invalid("canonical cycle needs d >= 2");
    }
    Permutation::cycle(d, &(1..=d).collect::<Vec<_>>())
}

/// `Π_m = (1/d) Σ_j ω^{-mj} σ^j` for the canonical cycle.
pub fn eigenprojector(d: usize, m: usize) -> Result<GroupAlgebraElement> {
    eigenprojector_with_cycle(&canonical_cycle(d)?, m)
}

/// `Π_m` for an arbitrary `d`-cycle.
pub fn eigenprojector_with_cycle(cycle: &Permutation, m: usize) -> Result<GroupAlgebraElement> {
    let d = cycle.degree();
    if d < 2 || cycle.cycle_type() != Partition::row(d as u32) {
        return invalid(format!("{cycle} is not a {d}-cycle"));
    }
    if m >= d {
        return invalid(format!("eigenvalue index {m} out of range 0..{d}"));
    }
    let order = d as u32;
    let inv_d = Rational::new(1.into(), BigInt::from(d));
    let terms = (0..d)
        .map(|j| {
            let c = omega_pow(order, -((m * j) as i64))?.scale(&inv_d);
            Ok((cycle.pow(j as i64), c))
        })
        .collect::<Result<Vec<_>>>()?;
    GroupAlgebraElement::from_terms(d, order, terms)
}

/// `ω_d^m` as an element of `ℚ(ω_N)`.
pub fn eigenvalue(root_order: u32, d: usize, m: usize) -> Result<Cyclo> {
    if d == 0 || root_order as usize % d != 0 {
        return Err(Error::IncompatibleOrder {
            left: root_order,
            right: d as u32,
        });
    }
    omega_pow(root_order, (m * root_order as usize / d) as i64)
}

/// `Π_m F` for the given `d`-cycle.
pub fn apply_eigenprojector(f: &Hypermatrix, cycle: &Permutation, m: usize) -> Result<Hypermatrix> {
    if cycle.degree() != f.d() {
        return invalid(format!("cycle of degree {} on order-{} hypermatrix", cycle.degree(), f.d()));
    }
    let key = OperatorKey::Eigen {
        cycle: cycle.clone(),
        m,
    };
    compiled(key, f.n(), f.root_order())?.apply(f)
}

/// Splits `F ∈ W_(d-1,1)` into `(H₁, …, H_{d-1})` with `σ_can H_m = ω^m H_m`.
pub fn decompose_standard(f: &Hypermatrix) -> Result<Vec<Hypermatrix>> {
    let cycle = canonical_cycle(f.d().max(2))?;
    decompose_standard_with_cycle(f, &cycle)
}

/// As [`decompose_standard`], for any `d`-cycle.
pub fn decompose_standard_with_cycle(f: &Hypermatrix, cycle: &Permutation) -> Result<Vec<Hypermatrix>> {
    let d = f.d();
    if d < 3 {
        return invalid(format!("the eigenspace split of W_(d-1,1) needs d >= 3, got {d}"));
    }
    let shape = Partition::standard(d as u32)?;
    if project_isotypic(f, &shape)? != *f {
        return Err(Error::NotInComponent {
            label: shape.to_string(),
        });
    }
    (1..d).map(|m| apply_eigenprojector(f, cycle, m)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentStatus {
    Pure,
    Absent,
    Present,
}

/// Which symmetry types occur in a hypermatrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    /// `"zero"`, `"pure"` or `"mixed"`.
    pub kind: String,
    /// The partition when `kind == "pure"`.
    pub pure: Option<String>,
    pub components: Vec<(String, ComponentStatus)>,
    /// Eigenvalue exponents `m` with a nonzero `W^m_(d-1,1)` component
    /// (empty for `d < 3`).
    pub standard_eigen: Vec<usize>,
}

pub fn membership(f: &Hypermatrix) -> Result<MembershipReport> {
    let report = decompose_isotypic(f)?;
    let mut components = Vec::new();
    let mut pure = None;
    let mut standard_eigen = Vec::new();
    for (label, h) in &report.components {
        let status = if h.is_zero() {
            ComponentStatus::Absent
        } else if h == f {
            ComponentStatus::Pure
        } else {
            ComponentStatus::Present
        };
        if status == ComponentStatus::Pure {
            pure = Some(label.to_string());
        }
        if let Label::Isotypic(p) = label {
            let d = p.weight();
            if d >= 3 && *p == Partition::standard(d)? && !h.is_zero() {
                for (i, part) in decompose_standard(h)?.iter().enumerate() {
                    if !part.is_zero() {
                        standard_eigen.push(i + 1);
                    }
                }
            }
        }
        components.push((label.to_string(), status));
    }
    let kind = if f.is_zero() {
        "zero"
    } else if pure.is_some() {
        "pure"
    } else {
        "mixed"
    };
    Ok(MembershipReport {
        kind: kind.to_string(),
        pure,
        components,
        standard_eigen,
    })
}

/// Group-algebra element whose image is the subspace named by `label`.
pub fn label_projector(label: &Label) -> Result<GroupAlgebraElement> {
    match label {
        Label::Isotypic(p) => isotypic_projector(p),
        Label::Eigen { shape, m } => {
            let d = shape.weight() as usize;
            eigenprojector(d, *m)?.mul(&isotypic_projector(shape)?)
        }
    }
}

/// Rank of the projector onto `label`'s subspace of the `n^d`-dimensional
/// entry space, by exact elimination.
pub fn subspace_rank(label: &Label, n: usize) -> Result<usize> {
    let d = label.weight() as usize;
    let dim = n
        .checked_pow(d as u32)
        .filter(|&dim| dim <= RANK_GUARD)
        .ok_or_else(|| {
            Error::ResourceLimit(format!("{n}^{d} exceeds the rank guard of {RANK_GUARD}"))
        })?;
    let gamma = label_projector(label)?;
    let op = CompiledAction::new(&gamma, n, d as u32)?;
    debug_assert_eq!(op.dim(), dim);
    Ok(linalg::rank(op.to_dense()))
}

//! Exact decomposition of `n × … × n` hypermatrices (multilinear forms) by
//! their `S_d` symmetry type, the cyclic eigenspace split of the standard
//! component `W_(d-1,1)`, and checks for the vanishing of the hyperdeterminant.
//!
//! All arithmetic is exact: scalars live in the cyclotomic field `ℚ(ω_N)`
//! represented as `ℚ[x]/Φ_N(x)`.

pub mod cli;
pub mod combinat;
pub mod dims;
pub mod error;
pub mod exactnum;
pub mod hypermatrix;
pub mod linalg;
pub mod symmetry;
pub mod vanishing;

pub use combinat::{Partition, Permutation};
pub use error::{Error, Result};
pub use exactnum::{Cyclo, Rational};
pub use hypermatrix::{GroupAlgebraElement, Hypermatrix};
pub use symmetry::{DecompositionReport, Label};

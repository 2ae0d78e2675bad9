//! Boolean (control) network toolkit built on the semi-tensor product of matrices.
//!
//! A Boolean network over `n` state variables, `m` input variables and `l`
//! output variables can be written in algebraic form
//!
//! ```text
//! x(t+1) = F ⋉ u(t) ⋉ x(t),      y(t) = H ⋉ x(t)
//! ```
//!
//! where states, inputs and outputs are canonical basis vectors of dimension
//! `2^n`, `2^m`, `2^l`, and `F`, `H` are *logical matrices* — matrices whose
//! every column is a column of an identity matrix. This crate provides:
//!
//! - [`stp`]: the semi-tensor product, Kronecker product and Khatri–Rao
//!   product, with an index-arithmetic fast path for logical operands and a
//!   dense integer oracle for cross-checking;
//! - [`logic`]: a small text format for network descriptions (one update
//!   equation per state variable, one equation per output) compiled to the
//!   algebraic form by exhaustive truth-table evaluation;
//! - [`dynamics`]: simulation, coordinate (state-relabeling) transformations
//!   and equivalence testing of networks in algebraic form;
//! - [`analysis`]: observability matrices and tests, distinguishing input
//!   sequences, controllability and input-state cover walks;
//! - [`ident`]: identification of a network from measured input-output data,
//!   covering free-evolution observations, repeated experiments from every
//!   initial state, single- and multi-experiment protocols driven by
//!   separating input sequences, and partially known initial-state sets;
//! - [`harness`]: a query-only plant simulator, experiment generators that
//!   produce the data sets consumed by [`ident`], sufficiency checks and
//!   seeded random network generators.
//!
//! The `bcnident` binary exposes the pipeline as a command-line tool
//! (`compile`, `simulate`, `check`, `o1test`, `gen-data`, `identify`,
//! `equiv`).
//!
//! All indices in the public API are 1-based, matching the δ-notation
//! `δ_n^i` for the `i`-th column of the `n × n` identity matrix; a logical
//! matrix is written `δ_n[i_1 i_2 … i_s]` by listing its column indices.

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod ident;
pub mod logic;
pub mod stp;

#[cfg(test)]
pub(crate) mod testnets;

pub use error::{Error, Result};

//! Discrimination functions of generative binary classifiers over
//! categorical predictors.
//!
//! A classifier `p(x, c)` on `X × {-1, +1}` induces the log-odds
//! `f(x) = ln p(x,+1) / p(x,-1)`. When the classifier is Markov with respect
//! to an undirected graph over the predictors, `f` is a sum of clique-local
//! terms, and conversely. This crate provides the tables, difference
//! operators, graph algorithms, decompositions, complexity counts and the
//! fixed-discrimination likelihood fit that this correspondence needs.
//!
//! Numeric code is generic over [`Scalar`] (integers, rationals, floats) or
//! [`Real`] (floats). The aliases below fix the common choices.

pub mod complexity;
pub mod diff;
pub mod domain;
pub mod error;
pub mod factorization;
pub mod generative;
pub mod graph;
pub mod io;
pub mod ipf;
pub mod rank;
pub mod scalar;
pub mod table;

pub use complexity::{
    bound_sign_count, contains_xor, decomposable_dim, dim_fg, sign_count_bound, sign_of, xor_scan,
    DecisionFunction, XorWitness,
};
pub use diff::{first_difference, is_zero, recenter_correction, second_difference, BasePoint};
pub use domain::{Assignment, CategoricalDomain, VariableSubset};
pub use error::{Error, Result};
pub use factorization::{
    markov_membership, markov_membership_exhaustive, markov_violations, mobius_decompose,
    mobius_decompose_with, reconstruct, CliqueFactorization, DecomposeOptions, PairViolation,
};
pub use generative::{
    build_from_discrimination, check_ci, decide, discrimination, is_g_markov, markov_ci_violations,
    toric_residual, CiCheck, Class, GenerativeClassifier,
};
pub use graph::{Dag, Decomposition, UndirectedGraph};
pub use ipf::{
    empirical_marginal, fit_ipf, fit_ipf_with, log_likelihood, marginal_fit, Dataset, IpfOptions,
    IpfReport,
};
pub use scalar::{Real, Scalar};
pub use table::{depends_only_on, substitute, TabularFunction};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Floating-point table.
pub type Table = TabularFunction<f64>;
/// Integer table, exact under the difference calculus.
pub type IntTable = TabularFunction<i64>;
/// Arbitrary-precision integer table.
pub type BigIntTable = TabularFunction<BigInt>;
/// Exact rational table.
pub type RationalTable = TabularFunction<BigRational>;
pub type Classifier = GenerativeClassifier<f64>;
pub type Factorization = CliqueFactorization<f64>;

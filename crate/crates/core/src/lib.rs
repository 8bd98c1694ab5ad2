//! Exact arithmetic for Rayleigh monotonicity of multigraphs: tree
//! polynomials, minors, effective conductance, the signed forest polynomials
//! and a certificate-producing prover for the square identity.

pub mod electrical;
pub mod error;
pub mod multigraph;
pub mod polynomial;
pub mod proof;
pub mod random;
pub mod spanning;

pub use electrical::{
    effective_conductance, monotonicity_probe, rayleigh_difference, verify_rayleigh_identity, PairMinors,
    RayleighReport,
};
pub use error::{Error, Result};
pub use multigraph::{BlockDecomposition, Edge, EdgeId, EdgeSet, Multigraph, OrientedEdge, VertexId};
pub use polynomial::{ExponentVector, Polynomial, RationalWeights};
pub use proof::{
    check_certificate, prove, validate_certificate, Certificate, ContributionPair, PairType, ProofNode, Rule, Scope,
    Validator,
};
pub use random::{random_marked_pairs, random_multigraph, SplitMix64};
pub use spanning::{
    matrix_tree_value, minor_polynomial, spanning_trees, tree_polynomial, x_forests, x_polynomials, ForestWitness, Sign,
};

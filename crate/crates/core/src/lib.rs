//! Discrete Steklov eigenvalues of graphs with boundary.
//!
//! The crate computes the Dirichlet-to-Neumann matrix of a graph with
//! boundary as a Schur complement of its Laplacian, the resulting Steklov
//! spectrum, and compares the first non-zero eigenvalue with lower bounds
//! in terms of the boundary size `b` and the boundary diameter `d_B`.
//!
//! ```
//! use steklov_core::{families, steklov_spectrum, thm2_bound, Normalization};
//!
//! let g = families::h_family(6, 5).unwrap();
//! let sigma1 = steklov_spectrum(&g, Normalization::Unit).unwrap().sigmas[1];
//! assert!((sigma1 - 2.0 / 11.0).abs() < 1e-12);
//! assert!(sigma1 >= thm2_bound(6, 5).unwrap());
//! ```

pub mod bounds;
pub mod error;
pub mod families;
pub mod graph;
mod json;
pub mod linalg;
pub mod steklov;
pub mod verify;

pub use bounds::{
    check_bounds, prop1_min_closed, prop1_oracle, spread_candidates, thm1_bound, thm2_bound,
    weighted_bound, BoundReport, SpreadCandidate, SpreadProblem,
};
pub use error::{Error, Result};
pub use families::FamilySpec;
pub use graph::{DistanceTable, Edge, GraphWithBoundary, Violation};
pub use linalg::{eigen_symmetric, solve_spd, DenseSymMatrix, SymmetricEigen};
pub use steklov::{
    combinatorial_laplacian_spectrum, dtn_matrix, dtn_matrix_by_extension, harmonic_extension,
    laplacian, normal_derivative, rayleigh_quotient, steklov_spectrum, Normalization,
    SteklovSpectrum,
};

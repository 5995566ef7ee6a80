//! Combinatorial Laplacian scores for features on simplicial complexes.
//!
//! The crate builds Vietoris-Rips complexes from metric data (or imports
//! complexes built elsewhere), assembles weighted up/down Laplacians on
//! q-cochains, scores features by their Rayleigh quotient, estimates
//! permutation p-values with Benjamini-Hochberg control and computes
//! Laplacian eigenmaps.
//!
//! ```
//! use simplicial_score::complex::{build_vietoris_rips, DistanceMatrix, WeightScheme};
//! use simplicial_score::spectral::{assemble_laplacian, rayleigh_score, Cochain, LaplacianParts};
//!
//! let d = DistanceMatrix::from_rows(&[
//!     vec![0.0, 1.0, 1.0],
//!     vec![1.0, 0.0, 1.0],
//!     vec![1.0, 1.0, 0.0],
//! ]).unwrap();
//! let k = build_vietoris_rips(&d, 1.0, 1).unwrap().with_weights(WeightScheme::Unit).unwrap();
//! let l = assemble_laplacian(&k, 0, LaplacianParts::Both).unwrap();
//! let score = rayleigh_score(&Cochain::new(0, vec![1.0, 0.0, 0.0]), &l).unwrap();
//! assert!((score - 3.0).abs() < 1e-12);
//! ```

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod complex;
pub mod error;
pub mod export;
pub mod features;
pub mod inference;
pub mod io;
pub mod sparse;
pub mod spectral;

pub use error::{Error, Result};

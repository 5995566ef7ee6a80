//! Boundary operators, combinatorial Laplacians, Rayleigh scores, spectra
//! and eigenmaps.

mod boundary;
mod cochain;
mod eigen;
mod eigenmap;
mod laplacian;
mod score;

pub use boundary::{assemble_boundary, BoundaryMatrix};
pub use cochain::{center_cochain, inner_product, Cochain};
pub use eigen::{eigendecompose, eigendecompose_with, spectral_bounds, Solver, Spectrum, DENSE_LIMIT};
pub use eigenmap::{eigenmap, eigenmap_with, Eigenmap};
pub use laplacian::{apply_laplacian_direct, assemble_laplacian, LaplacianOperator, LaplacianParts};
pub use score::{rayleigh_score, ZERO_VARIANCE_TOLERANCE};

pub(crate) use cochain::center_in_place;
pub(crate) use score::centered_score;

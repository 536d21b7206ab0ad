//! Loading, validating and rescaling sparse positive Hermitian matrices,
//! plus the dense spectrum oracle used for verification.

mod market;
mod sparse;
mod spectrum;

pub use market::{load_matrix, parse_matrix_market, to_matrix_market};
pub use sparse::{Entry, SparseHermitianMatrix, Storage, HERMITIAN_TOL};
pub use spectrum::{
    dense_eigen, dense_eigenvalues, exact_spectrum, exact_spectrum_capped, power_iteration, rescale, BoundSource,
    DenseEigen, ScaledMatrix, SpectralBounds, SpectrumInfo, DEFAULT_DENSE_CAP, LAMBDA_MAX, POWER_SAFETY, POWER_TOL,
};

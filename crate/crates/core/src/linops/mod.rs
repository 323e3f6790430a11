//! Dense linear algebra for the permanent side of the workbench.

pub mod boson;
pub mod hermitian;
pub mod matrix;
pub mod permanent;

pub use boson::{
    default_scale, dilate, encode_permanent, encode_permanent_with, fock_amplitude, fock_submatrix, FockConfig,
    PermanentEncoding,
};
pub use hermitian::{herm_eig, herm_inv, herm_inv_sqrt, herm_sqrt, spectral_norm, HermEig};
pub use matrix::{ComplexMatrix, IntMatrix};
pub use permanent::{
    permanent_naive, permanent_naive_int, permanent_ryser, permanent_ryser_int, permanent_sparse_int,
};

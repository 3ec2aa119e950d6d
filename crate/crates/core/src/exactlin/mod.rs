//! Exact integer and rational linear algebra.

mod echelon;
mod hermite;
mod matrix;
pub mod rational;
mod smith;

pub use echelon::{Echelon, SparseVector};
pub use hermite::row_hermite_form;
pub use matrix::IntegerMatrix;
pub use smith::{
    det_sign, integer_kernel_basis, lattice_coordinates, rank_over_z, rational_solve,
    saturation_basis, smith_normal_form, torsion_order, SmithDecomposition,
};

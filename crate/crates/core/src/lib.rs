//! Exact combinatorial invariants and presented cohomology rings of abelian arrangements.

pub mod arrangement;
pub mod catalog;
pub mod check;
pub mod cohomology;
pub mod error;
pub mod exactlin;
pub mod matroid;
pub mod poly;
pub mod subset;
pub mod vg;

pub use arrangement::{AbelianArrangement, Layer, LayerId, LayerPoset, SamplePoint, Subvariety};
pub use check::Check;
pub use error::{Error, Result};
pub use matroid::{shuffle_sign, ArithmeticOrientedMatroid, SignedCircuit};
pub use poly::IntPoly;
pub use subset::IndexSet;

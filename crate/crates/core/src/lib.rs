//! Combinatorial flats of polymatroids: the lattice, its operations, the
//! graded ring built on it, and linear-algebra realizations.

pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod ht;
pub mod io;
pub mod lattice;
pub mod lift;
pub mod linalg;
pub mod multiset;
pub mod ops;
pub mod oracle;
pub mod polymatroid;
pub mod poset;
pub mod random;
pub mod realization;
pub mod suite;

pub use error::{Error, Mask, Result};
pub use lattice::ComboFlatLattice;
pub use multiset::Multiset;
pub use polymatroid::{CagedPolymatroid, Polymatroid};
pub use poset::AbstractGradedLattice;

//! Exact synthesis and verification of permutation bases for matrix groups
//! `<C, B>` of dimension p^2, where `C` is a maximal cycle normalized by `B`.
//!
//! Everything is monomial over roots of unity, so all arithmetic is exact:
//! spectra live in Z_N, and matrix entries that need it live in Q(z_N).
//!
//! ```
//! use permlike::{basis_synth::end_to_end, group_builder::GroupSpec};
//!
//! let spec = GroupSpec::trivial(3, 6).unwrap();
//! let analysis = end_to_end(&spec, false).unwrap();
//! assert!(analysis.certificate().unwrap().verified);
//! ```

pub mod arith;
pub mod basis_synth;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod group_builder;
pub mod monomial;
pub mod oracle;
pub mod residue_orbits;

pub use cyclotomic::{CycElem, Rational, RootExp};
pub use error::{Error, Result};
pub use group_builder::{GroupReport, GroupSpec};
pub use monomial::{MonomialMatrix, SpectrumMultiset};

//! Building sets, nested set complexes and Bier posets over finite posets.
//!
//! The crate constructs nested set complexes of building sets in posets with
//! a least element and checks, instance by instance, that extending a
//! building set by one element acts on the complex as a stellar subdivision
//! or a cone. [`bier`] specialises this to Bier posets, whose order complexes
//! arise from `Δ(P̄)` by edge subdivisions.
//!
//! ```
//! use nestcomb::{BuildingSet, Poset, SimplicialComplex};
//!
//! let b3 = Poset::boolean_lattice(3).unwrap();
//! let atoms = BuildingSet::from_labels(&b3, &["{1}", "{2}", "{3}"]).unwrap();
//! let report = atoms.subdivision_sequence().unwrap();
//! assert!(report.passed());
//! assert_eq!(
//!     report.final_complex,
//!     SimplicialComplex::order_complex(&b3.above_least().unwrap())
//! );
//! ```

pub mod bier;
pub mod enumerate;
mod error;
pub mod io;
pub mod nested;
pub mod poset;
pub mod simplicial;
pub mod suite;

pub use error::{Error, Result};
pub use nested::{BuildingCheck, BuildingSet, SequenceReport, StepCase, StepReport};
pub use poset::{BigCut, ConstrainedIso, Ideal, Interval, Poset};
pub use simplicial::SimplicialComplex;

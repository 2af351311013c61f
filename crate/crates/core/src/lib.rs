//! A finite-model laboratory for classical realizability.
//!
//! The crate builds small realizability lattices, Abstract Krivine
//! Structures and the OCA / IOCA / KOCA hierarchy of ordered combinatory
//! algebras, translates between them, and checks their laws by exhaustive
//! scans. On top of that sit the realizability tripos over a KOCA and the
//! higher-order language L^ω with realizer extraction and an adequacy
//! checker.
//!
//! Every check returns a [`report::Report`]; a failed clause carries the
//! first counterexample in a fixed scan order, so results are the same
//! with and without the `parallel` feature.

pub mod aks;
pub mod error;
pub mod exec;
pub mod hilbert;
pub mod homega;
pub mod ioca;
pub mod lattice;
pub mod limits;
pub mod oca;
pub mod order;
pub mod report;
pub mod set;
pub mod term;
pub mod translate;
pub mod tripos;

pub use aks::AbstractKrivineStructure;
pub use error::{Error, Result};
pub use exec::Exec;
pub use ioca::{Ioca, Koca, ProperQuadruple};
pub use lattice::{PushLattice, RealizabilityLattice};
pub use limits::{Coverage, Limits};
pub use oca::FilteredOca;
pub use order::Poset;
pub use report::{CheckResult, Report, Status, Witness};
pub use set::{ElemSet, StackSet, TermSet};
pub use term::{Applicative, Atom, Term};

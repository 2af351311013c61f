//! The higher-order language L^ω over a KOCA: syntax, derivations with
//! realizer extraction, finite semantics, adequacy and arithmetic.

pub mod adequacy;
pub mod arith;
pub mod derivation;
pub mod parse;
pub mod semantics;
pub mod syntax;

pub use adequacy::{adequacy_suite, enumerate_derivations, AdequacySetup};
pub use arith::{leibniz_check, modular_arithmetic, nat_formula, pa_axioms_check, theory_member};
pub use derivation::{check_derivation, identity_realizer, Derivation, Rule, Sequent};
pub use parse::{parse_derivation, parse_document, parse_expr, parse_kind, Document, NamedDerivation, Signature};
pub use semantics::{satisfaction_witness, satisfies, Interpretation, Semantics};
pub use syntax::{HoExpr, Kind};

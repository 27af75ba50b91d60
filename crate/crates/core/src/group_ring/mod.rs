//! The group ring `Z[G]`, admissible sets and the annihilators `theta_f(S)`.

pub mod action;
pub mod admissible;
pub mod element;

pub use action::{act, annihilation_certificate, lift_annihilator, AnnihilationCertificate, IdealExponentVector};
pub use admissible::{admissible_sets, theta_of, AdmissibleSet, AdmissibleSystem, Annihilator, Witness};
pub use element::{Coefficient, GroupRingElement, IntElement, RatElement};

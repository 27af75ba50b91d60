//! Class-group annihilators from primes of higher residue degree.
//!
//! The crate builds the group-ring elements `theta_f(S)`, decides membership in
//! the Stickelberger ideal of `Q(zeta_p)`, and emits machine-checkable
//! certificates for residue-degree sets `R_{L/K}` of cyclotomic, real
//! cyclotomic and biquadratic fields.

pub mod arith;
pub mod catalog;
pub mod error;
pub mod group_ring;
pub mod groups;
pub mod hnf;
pub mod quadratic;
pub mod rset;
pub mod scan;
pub mod stickelberger;
pub mod verify;

pub use error::{Error, Result};

//! Rational torus-equivariant algebraic cobordism of spherical varieties,
//! computed through fixed-point congruences over the universal formal group
//! law.

pub mod error;
pub mod fgl;
pub mod fixtures;
pub mod gkm;
pub mod horo;
pub mod lazard;
pub mod mult;
pub mod roots;
pub mod series;
pub mod torus;

pub use error::{Error, Result};
pub use fgl::{FormalGroupLaw, Specialization};
pub use lazard::{LazardCoefficient, MMono, Q};
pub use series::{TMono, TruncatedSeries};
pub use torus::{Character, LocalizedElement};

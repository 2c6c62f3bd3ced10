//! Consistent maps on the places of `Q` and of quadratic fields, and the
//! linear functionals `Φ_c(α) = Σ_v c(K,v)·log‖α‖_v` they induce on the
//! multiplicative group modulo torsion.

pub mod arith;
pub mod consistent;
pub mod error;
pub mod functional;
pub mod numerics;
pub mod phi;
pub mod places;
pub mod primes;
pub mod quadfield;

pub use consistent::{ConsistentMap, LocalValue, NamedRule, NonArchRule, Scalar};
pub use error::{Error, Result};
pub use numerics::{LogLinear, Rational};
pub use places::{Place, PlaceKind, Splitting};
pub use quadfield::{Field, FieldElement, QuadField};

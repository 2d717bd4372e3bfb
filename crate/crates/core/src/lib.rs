//! Finiteness certificates and zero-count bounds for systems of convergent
//! p-adic power series known to finite precision.
//!
//! The crate provides capped-precision p-adic arithmetic, exact polynomial
//! algebra over F_p (Groebner bases and syzygies), approximate restricted
//! power series, the p-saturation chain with its certificates, one-variable
//! and multivariate Strassmann-type zero bounds, Groebner bases for
//! Tate-algebra ideals at finite precision, and a Skolem-method pipeline
//! that solves Thue equations by bounding zeros of p-adic power series.

pub mod fppoly;
pub mod json;
pub mod monomial;
pub mod padic;
pub mod rseries;
pub mod saturation;
pub mod skolem;
pub mod tate;
pub mod zerobound;
pub mod zploc;

pub use monomial::{Monomial, MonomialOrder};
pub use padic::{NumberRing, NumberRingElement, PadicError, PadicScalar, Valuation};

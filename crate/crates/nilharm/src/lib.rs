//! Harmonic analysis on the free two-step nilpotent Lie group with three
//! generators, and on its quotient by a two-dimensional central subspace.
//!
//! The group `N` is R^3 x R^3 in exponential coordinates `(x, y)` with product
//! `(x, y) * (x', y') = (x + x', y + y' + (x ^ x')/2)` (`^` = cross product);
//! rotations act by `k.(x, y) = (kx, det(k) ky)`, and the pair `(SO(3) ⋉ N, SO(3))`
//! is a Gelfand pair.  Quotienting by the central plane `(y1, y2)` gives a group
//! `N'` on R^3 x R_t carrying the analogous pair for the stabilizer of the plane.
//!
//! The crate provides, for both sides:
//!
//! * exact polynomial coefficient arithmetic and left-invariant differential
//!   operators, including the symmetrization map from invariant polynomials to
//!   invariant operators ([`diffop`]);
//! * Gaussian-times-polynomial test functions with closed-form integrals
//!   ([`gausspoly`]);
//! * bounded spherical functions and their joint eigenvalues ([`spherical`],
//!   [`spectrum`]);
//! * the central-variable Radon transform, the (K-invariant) Gelfand
//!   transforms on both groups, and the moment conditions characterizing
//!   Radon images ([`transforms`]);
//! * deterministic quadrature rules ([`quad`]), the special functions the
//!   spherical functions are built from ([`specfun`]), and a property-check
//!   catalog driving the `verify` CLI subcommand ([`verify`]).

pub mod dd;
pub mod diffop;
pub mod gausspoly;
pub mod group;
pub mod numdiff;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod sampling;
pub mod space;
pub mod specfun;
pub mod spectrum;
pub mod spherical;
pub mod transforms;
pub mod verify;

pub use space::Space;

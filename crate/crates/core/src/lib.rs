//! Exact contact and Sasakian invariants of Brieskorn-Pham links
//! `L(a) = { z_0^{a_0} + ... + z_n^{a_n} = 0 } ∩ S^{2n+1}`.
//!
//! All arithmetic is exact: integers, big integers and reduced fractions.
//! The modules build on each other in order:
//!
//! - [`linkmodel`]: exponent vectors, weights, strata and the period spectrum
//! - [`homology`]: middle Betti ranks, quotient Betti numbers, sphere criteria
//! - [`invariants`]: Maslov indices, the mean Euler characteristic, E¹ ranks
//! - [`einstein`]: Sasaki-Einstein verdicts and moduli counts
//! - [`tables`]: enumeration, family sweeps, collisions and persistence

pub mod arith;
pub mod einstein;
pub mod error;
pub mod homology;
pub mod invariants;
pub mod linkmodel;
pub mod tables;

pub use arith::ExactRational;
pub use error::{Error, Result};
pub use linkmodel::{make_link, ExponentVector, LinkProfile, Stratum};

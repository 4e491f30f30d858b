//! Local testing and local decoding of low-degree multilinear polynomial
//! codes on the Boolean hypercube `{0,1}^n`.
//!
//! A function `f: {0,1}^n -> F` is stored as a dense truth table
//! ([`CubeFunction`]); the code `F(n, d)` is the set of truth tables of
//! multilinear polynomials of total degree at most `d` ([`MultilinearPoly`]).
//! The crate provides:
//!
//! * a local tester built from random variable identifications
//!   ([`tester`]), together with the bucket (set-union) process that drives
//!   its analysis ([`restrict`]);
//! * a dual-witness construction certifying that no two codewords differ at
//!   exactly one point of a well-separated set ([`witness`]);
//! * a local decoder for fields of small characteristic that reads only
//!   balanced inputs ([`decoder`]);
//! * the balanced-vector span experiments and the erased-linear-function
//!   adversary used to probe decoding in large characteristic
//!   ([`lowerbound`]);
//! * a tolerant tester that estimates distance on a random sample of a
//!   random restriction ([`tolerant`]);
//! * brute-force ground truth for all of the above ([`oracle`]).
//!
//! # Conventions
//!
//! Points of `{0,1}^n` are bitmasks: coordinate `i` (0-based) is bit `i`,
//! so coordinate 1 in one-based notation is the least significant bit.
//! Subsets of variables use the same encoding.
//!
//! # `no_std`
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! the parallel trial runner live in the `gridcode` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
pub mod cube;
pub mod decoder;
mod error;
pub mod field;
mod fraction;
pub mod linalg;
pub mod lowerbound;
pub mod mc;
pub mod oracle;
pub mod poly;
pub mod restrict;
pub mod tester;
pub mod tolerant;
pub mod witness;

pub use crate::cube::{CubeFunction, SignedCubeFunction};
pub use crate::error::{Error, Result};
pub use crate::field::{ExactRational, FieldElement, PrimeField};
pub use crate::fraction::Fraction;
pub use crate::poly::MultilinearPoly;
pub use crate::restrict::Restriction;

//! GKP codes from symmetric SIS, R-SIS and M-SIS lattices.
//!
//! The crate is `no_std` (with `alloc`) and contains everything that does not
//! touch the file system:
//!
//! - [`exactlat`]: integer lattice bases with rational scale, integral LLL,
//!   exact shortest/closest vector by enumeration, Babai nearest plane,
//!   symplectic duals and membership tests.
//! - [`siscode`]: symmetric matrices over `Z_q`, the `[[I, H], [0, qI]]`
//!   basis, GKP code distance and the closed-form distance bounds.
//! - [`ringquot`]: arithmetic in `Z_q[X]/(X^n + 1)`, negacyclic NTT, the
//!   matrix representations and the module-lattice bases.
//! - [`numth`]: totient, Carmichael function, factorization of `X^n + 1`
//!   modulo `q`, failure-probability evaluators and parameter validators.
//! - [`decode`]: the rounding BDD decoder, the Babai baseline and the
//!   Gaussian-displacement decoding pipeline.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decode;
pub mod error;
pub mod exactlat;
pub mod numth;
pub mod ringquot;
pub mod seed;
pub mod siscode;

pub use error::{Error, Result};

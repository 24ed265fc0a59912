//! Arithmetic in `Z_q[X]/(X^n + 1)`, negacyclic NTT, matrix representations
//! and the module-lattice bases.

mod elem;
mod ntt;
mod repr;

pub use elem::{ring_mul, ring_mul_with, RingElem};
pub use ntt::{negacyclic_exact_schoolbook, negacyclic_schoolbook, ExactNegacyclic, NttPlan};
pub use repr::{
    bar_rho_matrix, module_basis, module_membership, rho_matrix, sigma_n, u_matrix, RingSymMat,
};

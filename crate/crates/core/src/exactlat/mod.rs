//! Exact lattice kernel: bases with rational scale, symplectic duals, LLL,
//! and enumeration-based SVP/CVP.

mod enumerate;
mod lattice;
mod lll;
mod matrix;

pub use enumerate::{
    babai_nearest_plane, closest_vector, distance_sq, round_half_away, shortest_vector,
    ClosestVector, PreparedLattice, ShortestVector, ENUMERATION_CAP,
};
pub use lattice::{
    is_q_symplectic, lattice_contains, same_lattice, symplectic_dual_basis, ScaledLattice,
    SymplecticForm,
};
pub use lll::{default_delta, lll_reduce, lll_reduce_with_transform, GramSchmidtData, LllOutput};
pub use matrix::{IntBasis, IntMatrix};

pub(crate) use lattice::rational_to_f64;

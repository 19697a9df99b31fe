//! Exact integer linear algebra: Smith forms, invariant factors, lattice
//! membership, element orders and kernels of maps between presented groups.
//!
//! Relation matrices are stored sparsely. Elimination runs on sparse rows
//! first; the resulting pivot block (at most one row per column) is then
//! reduced densely.

mod echelon;
mod invariants;
mod lattice;
mod matrix;
mod presentation;
mod snf;

pub use echelon::Echelon;
pub use invariants::AbelianInvariants;
pub use lattice::{LatticeQuotient, Order};
pub use matrix::{IntMatrix, SparseRow};
pub use presentation::{
    cokernel_invariants, element_order, lattice_membership, map_kernel, FpPresentation, KernelPresentation, Membership,
};
pub use snf::smith_normal_form;

pub(crate) use matrix::{dense_to_sparse, sparse_to_dense};

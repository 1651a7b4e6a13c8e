//! Finite-dimensional von Neumann algebra workbench.
//!
//! Every object here is a unital `*`-subalgebra of `d × d` complex matrices,
//! stored as a Hilbert–Schmidt orthonormal basis. On finite-dimensional
//! spaces the weak, strong and norm closures coincide, so "von Neumann
//! algebra" means "linearly spanned and closed under product and adjoint".
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the command
//! line live in the companion `vonlab` crate.
//!
//! Modules, bottom up:
//!
//! * [`numkit`]: dense complex matrices and tolerance-disciplined linear
//!   algebra (spans, nullspaces, Hermitian eigenproblems, polar decomposition).
//! * [`algebra`]: generation, commutants, centers, factor test.
//! * [`structure`]: block decomposition, Murray–von Neumann comparison of
//!   projections, canonical traces and type labels.
//! * [`groupvna`]: finite groups, the left regular representation and `L(G)`.
//! * [`dynamics`]: measured actions, crossed products and the Feldman–Moore
//!   algebra of a finite equivalence relation.
//! * [`tensor`]: tensor products, pointed towers, truncated ITPFI factors.
//! * [`reps`]: unitary representations, intertwiners, isotypic decomposition.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod dynamics;
pub mod groupvna;
pub mod numkit;
pub mod reps;
pub mod structure;
pub mod tensor;

mod error;

pub use algebra::OperatorAlgebra;
pub use error::{Error, Result};
pub use numkit::{Mat, Tol, C64};

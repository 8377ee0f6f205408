//! Slim semimodular lattices built from permutations, permutations read back
//! from bordered diagrams, and composition series of cyclic groups realizing
//! any permutation.

pub mod dot;
pub mod extract;
pub mod grid;
pub mod groups;
pub mod io;
pub mod lattice;
pub mod perm;

//! Exact p-adic computations around Tate curves: truncated Laurent series over
//! unramified coefficient rings, canonical q-expansions, Eisenstein-type
//! Lambert decompositions, symbolic theta-symbol residues and the residue
//! bound pipeline for a small catalog of elliptic surfaces.

pub mod error;
pub mod padic;
pub mod series;
pub mod qexp;
pub mod symbol_residue;
pub mod eis;
pub mod surfaces;
pub mod cli;

pub use error::{Error, Result};

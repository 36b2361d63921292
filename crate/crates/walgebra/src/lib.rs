//! Symbolic workbench for classical W-algebras 𝒲^k(g, f) with g = sl_N or sl_{N1|N2}
//! and f an even nilpotent given by a partition.

pub mod coeff;
pub mod half;
pub mod linalg;
pub mod liestruct;

pub use coeff::{Coeff, Field, KPoly, RatFunc, Q};
pub use half::Half;
pub use liestruct::{AlgebraCtx, CentralizerData, GenIndex, Kind, LieData, PartitionSpec, SpecError, SuperMatrix};
pub mod pvacore;
pub mod wbracket;
pub mod dsreduction;
pub mod json;
pub mod weakgen;

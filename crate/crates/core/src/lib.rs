//! Decision procedures and reductions for reachability problems over 2×2
//! integer matrices, one-dimensional affine maps and one-register machines.

pub mod arith;
pub mod bridge;
pub mod detpm1;
pub mod diophantine;
pub mod dispatch;
pub mod error;
pub mod instance;
pub mod io;
pub mod machines;
pub mod mortality;
pub mod oracle;
pub mod search;
pub mod utsolvers;
pub mod xcheck;

pub use arith::{AffineMap, Domain, Int, Mat2, UTMat, Vec2};
pub use error::{Error, Result};
pub use instance::{Budget, Config, Exhaustion, NoCertificate, ProblemInstance, ProblemTag, Verdict, Word};

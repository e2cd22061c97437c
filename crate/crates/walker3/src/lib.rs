//! Symbolic tensor calculus for the three-dimensional Walker metric
//! g = 2 dx dz + eps dy^2 + f(x,y,z) dz^2, together with Ricci-Yamabe
//! soliton residuals, solution-family constructors and a randomized
//! zero-testing layer.
//!
//! The crate is `no_std` (with `alloc`): expressions are immutable trees
//! over exact rationals, all operations are pure functions.

#![no_std]

extern crate alloc;

pub mod expr;
pub mod canon;
pub mod diff;
pub mod subst;
pub mod eval;
pub mod parse;
pub mod geometry;
pub mod soliton;
pub mod verify;
pub mod scenario;
pub mod families;

pub use canon::simplify;
pub use diff::{diff, diff_n};
pub use expr::{Coord, Expr, Rat};

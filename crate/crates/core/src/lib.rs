//! Exact transferable-utility cooperative games: surpluses, the pre-kernel
//! via the quadratic class-system solver, least-core and nucleolus linear
//! programs, the Stearns transfer scheme and a reduced-game audit.

pub mod catalog;
pub mod coalition;
pub mod format;
pub mod game;
pub mod linalg;
pub mod lp;
pub mod prekernel;
pub mod rational;
pub mod rgp;
pub mod stearns;
pub mod surplus;

pub use coalition::Coalition;
pub use game::{Allocation, GameError, TuGame};
pub use rational::Rational;

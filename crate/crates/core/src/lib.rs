//! Complexity and capacity parameters of classical and quantum channels and
//! their (non-commutative) confusability graphs.
//!
//! The crate is organised bottom-up: [`numkernel`] supplies dense complex
//! linear algebra with an explicit [`numkernel::Tolerance`]; [`opsys`] and
//! [`channels`] model operator systems and Kraus families; [`graphs`] holds the
//! exact combinatorial solvers; [`params`] produces verified bounds on the
//! independence number, subcomplexity, complexity and intersection number;
//! [`theta`] holds the Lovász theta solver and capacity reports.

pub mod channels;
pub mod error;
pub mod graphs;
pub mod numkernel;
pub mod optim;
pub mod opsys;
pub mod par;
pub mod params;
pub mod random;
pub mod theta;

pub use error::{Error, Result};

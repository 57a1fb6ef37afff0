//! Exact construction and verification of generic character-table fragments
//! for finite groups of Lie type.

#![allow(clippy::needless_range_loop)]

pub mod cyclo;
pub mod error;
pub mod export;
pub mod green;
pub mod induction;
pub mod linalg;
pub mod model;
pub mod pipeline;
pub mod split;
pub mod table;
pub mod uniform;
pub mod verify;

pub use cyclo::{CongruenceGuard, CycNum, GenValue, Poly};
pub use error::{Error, Result};

#![no_std]

extern crate alloc;

pub mod cf;
pub mod dynamics;
pub mod ergodic;
pub mod error;
pub mod hermite;
pub mod lattice;
pub mod numeric;

pub use error::{Error, Result};

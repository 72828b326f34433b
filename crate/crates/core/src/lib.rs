#![no_std]
//! Exact degree sequences and dynamical degrees of correspondences on
//! varieties with explicit numerical cycle rings.

extern crate alloc;

pub mod algebraic;
pub mod arith;
pub mod atom;
pub mod corr;
pub mod degree;
pub mod error;
pub mod graph;
pub mod growth;
pub mod matrix;
pub mod poly;
pub mod relative;
pub mod ring;
pub mod scenarios;
pub mod verify;

pub use error::{Error, Result};

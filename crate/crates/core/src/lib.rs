//! Numerical ranges, Kippenhahn curves and circular components for partial isometries.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
extern crate alloc;

pub mod criteria;
pub mod geom;
pub mod kipp;
pub mod linalg;
pub mod matpoly;
pub mod pisom;
pub mod sample;

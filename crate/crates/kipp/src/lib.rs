//! File formats, the theorem-checking harness and the command-line front end built on
//! [`kipp_core`].

pub mod analysis;
pub mod data;
pub mod format;
pub mod output;
pub mod golden;
pub mod verify;

pub use kipp_core;

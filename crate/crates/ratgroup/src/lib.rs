//! File formats, the element expression language, random generators and
//! the verification harness built on [`ratgroup_core`].

pub mod dot;
pub mod expr;
pub mod format;
pub mod gen;
pub mod verify;

pub use ratgroup_core as core;

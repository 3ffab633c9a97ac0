//! Holomorphs of finite abelian p-groups, their regular subgroups, and the
//! skew braces they carry.

pub mod abelian;
pub mod arith;
pub mod error;

pub use error::{Error, Result};
pub mod group;
pub mod holomorph;
pub mod brace;
pub mod realize;
pub mod construct;
pub mod spec;
pub mod suite;

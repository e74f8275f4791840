//! Oracles for the integration tests. Nothing here calls into the crate's
//! linear algebra or Koszul code.

#![allow(dead_code)]

pub mod hk;
pub mod resolution;

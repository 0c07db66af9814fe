//! Independent oracles shared by the integration tests and the acceptance
//! suite.
#![allow(dead_code)]

pub mod brute;
pub mod lp;

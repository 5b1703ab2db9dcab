//! Exact computation in categories of filtered (φ, N)-modules over truncated
//! power series rings in characteristic `p`.

pub mod base_arith;
pub mod codes;
pub mod digits;
pub mod objects;
pub mod json;
pub mod selftest;
pub mod simples_ext;
pub mod unitfilter;

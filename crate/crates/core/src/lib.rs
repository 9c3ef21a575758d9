//! Grassmann algebras, super linear algebra, osp(1|2) and entanglement
//! invariants of one to three superqubits.

#![allow(clippy::needless_range_loop)]

pub mod grassmann;
pub mod superlinear;
pub mod states;
pub mod osp;
pub mod invariants;
pub mod sample;
pub mod parser;
pub mod verify;
pub mod sweep;

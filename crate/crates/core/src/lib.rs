//! Finite-model workbench for cylindric-like algebras and relation algebras:
//! finite algebras with operators, atom structures, networks, atomic games,
//! Lyndon conditions and representation search.

pub mod axioms;
pub mod bao;
pub mod cli;
pub mod corpus;
pub mod ramsey;
pub mod repr;
pub mod structure;
pub mod error;
pub mod game;
pub mod network;
pub mod signature;

pub use error::{Error, Result};

pub mod algebraic;
pub mod cli;
pub mod config;
pub mod domain;
pub mod error;
pub mod free_group;
pub mod group;
pub mod power;
pub mod report;
pub mod solver;
pub mod term;

//! Command-line companion to `sqfree-core`: run configuration and budgets, JSON and
//! text reports, DOT/JSON graph exports and the verification audit.

pub mod audit;
pub mod config;
pub mod error;
pub mod export;
pub mod report;

pub use sqfree_core as core;

//! Phishing email classification toolkit.
//!
//! The pipeline goes: raw email bytes -> plaintext ([`ingest`]) -> token
//! sequence ([`tokenizer`]) -> dictionary indices ([`encoder`]) -> a
//! two-layer LSTM classifier ([`nn`]) trained with Adam ([`training`]) and
//! scored against a chronologically held-out test set ([`evaluation`]).
//!
//! Everything is deterministic for a fixed seed: model initialization,
//! dropout, batch shuffling and the serialized artifacts.

pub mod config;
pub mod corpus;
pub mod encoder;
pub mod error;
pub mod evaluation;
pub mod ingest;
pub mod nn;
pub mod pipeline;
pub mod stem;
pub mod tokenizer;
pub mod training;

pub use config::RunConfig;
pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;

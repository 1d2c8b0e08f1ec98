//! Design toolkit for low-power Hall-effect thrusters.
//!
//! The pipeline: ingest the experimental table ([`dataset`]), fit the
//! semi-empirical scaling coefficients ([`scaling`], cross-checked by
//! [`physfit`]), enlarge the table with a small tabular GAN ([`augment`]),
//! search surrogate architectures with a Tree-structured Parzen Estimator
//! ([`tune`]) on the shared network engine ([`nn`]), and pick relevant
//! inputs with Boruta ([`select`]).

pub mod augment;
pub mod dataset;
pub mod error;
pub mod fixture;
pub mod metrics;
pub mod nn;
pub mod scaling;

pub use error::{Error, Result};

//! Synthetic strawberry-detection data tooling.
//!
//! The crate covers the whole path from a seed to a scored detector:
//! procedural scenes ([`scenegen`]) are rasterized ([`render`]), labeled from
//! their instance buffers ([`labeler`]), assembled into mixed real/simulated
//! train/test splits ([`dataset`]) and finally used to score external
//! detector output ([`eval`]). [`pipeline`] drives corpus generation across
//! worker threads when the `parallel` feature is enabled.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod labeler;
pub mod par;
pub mod pipeline;
pub mod render;
pub mod scenegen;
pub mod seed;

pub use error::{Error, Result};

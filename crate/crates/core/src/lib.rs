//! Constructive cycle double covers with independent verification.
//!
//! The pipeline peels Kuratowski subdivisions off a bridgeless graph until
//! the remainder is planar, covers the planar remainder by its faces, and
//! splices covers back step by step. Every intermediate cover is checked;
//! a failed precondition produces a re-checkable certificate instead.

pub mod certificate;
pub mod corpus;
pub mod cover;
pub mod decompose;
pub mod generators;
pub mod goddyn;
pub mod graph;
pub mod io;
pub mod kuratowski;
pub mod pipeline;
pub mod planarity;
pub mod walk;

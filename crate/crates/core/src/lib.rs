//! Bibliometric indexing of conference papers from a DBLP dump.
//!
//! The pipeline runs in stages, one module each: [`ingest`] parses records,
//! [`registry`] loads the curated venue/researcher tables, [`classifier`]
//! checks venues against the tracking thresholds and assigns tiers,
//! [`selection`] keeps the full papers written by registered researchers,
//! [`scoring`] aggregates them per department and area, and [`service`]
//! freezes everything into a snapshot that is exported to files or served
//! over HTTP.

pub mod classifier;
pub mod ingest;
pub mod registry;
pub mod scoring;
pub mod selection;
pub mod service;
pub mod units;

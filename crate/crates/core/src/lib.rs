//! Structured poetic-strophe generation and evaluation.
//!
//! The pipeline: [`corpus`] ingestion, [`phonology`] (syllables, stress,
//! clausula), annotation-interleaved [`formats`], four [`tokenizers`], a
//! pluggable [`language_model`] with an n-gram implementation,
//! Basic/Forced [`generation`], and rule-based [`validation`] metrics.

pub mod corpus;
pub mod formats;
pub mod generation;
pub mod language_model;
pub mod phonology;
pub mod tokenizers;
pub mod validation;

//! Supervised word sense disambiguation with Naive Bayes and exemplar-based
//! classifiers, plus the cross-validation protocol used to compare them.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod learners;
pub mod synth;

pub use error::{Result, WsdError};

//! Corpus language-complexity toolkit.
//!
//! Computes lexical-diversity, lexical-density, readability, vocabulary-growth
//! (LNRE), and syntactic-complexity measures over plain-text or POS-tagged
//! corpora, and statistically compares two corpora (Kolmogorov-Smirnov tests
//! on per-sample distributions, Z-statistic on vocabulary growth rates).

pub mod corpus;
pub mod density;
pub mod diversity;
pub mod dlevel;
pub mod error;
pub mod lnre;
pub mod numeric;
pub mod readability;
pub mod report;
pub mod stats;

pub use error::{Error, Result};

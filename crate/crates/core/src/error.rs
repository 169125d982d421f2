//! Error types shared across the toolkit.

use thiserror::Error;

/// Any failure produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Input could not be ingested (bad encoding, malformed line, ...).
    #[error("ingestion error{}: {msg}", fmt_location(.path, .line))]
    Ingest {
        path: Option<String>,
        line: Option<usize>,
        msg: String,
    },

    /// A measure is mathematically undefined for the given input.
    #[error("{measure} is undefined: {reason}")]
    UndefinedMeasure {
        measure: &'static str,
        reason: String,
    },

    /// An argument violated a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numeric routine failed to converge or produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Model fitting did not converge; carries the best point seen.
    #[error(
        "{family} fit did not converge: chisq {chisq:.6e}, simplex diameter {diameter:.3e}, params {params:?}"
    )]
    FitNotConverged {
        family: String,
        params: Vec<f64>,
        chisq: f64,
        diameter: f64,
    },

    /// A statistic could not be formed (e.g. zero combined variance).
    #[error("statistic is undefined: {0}")]
    UndefinedStatistic(String),

    /// All sample values are identical; no density can be estimated.
    #[error("degenerate distribution: all {0} values are identical")]
    DegenerateDistribution(usize),

    /// A plot asked for a series the report does not contain.
    #[error("cannot render: missing series {0}")]
    Render(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_location(path: &Option<String>, line: &Option<usize>) -> String {
    match (path, line) {
        (Some(p), Some(l)) => format!(" at {p}:{l}"),
        (Some(p), None) => format!(" at {p}"),
        (None, Some(l)) => format!(" at line {l}"),
        (None, None) => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

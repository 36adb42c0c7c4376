use std::path::PathBuf;

use crate::distributions::GrowthClass;

/// Errors produced by the transform, expansion and verification routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("moment of order {order} diverges for growth class {class}{}", cap_note(*.max_valid_order))]
    MomentDivergence {
        order: usize,
        class: GrowthClass,
        max_valid_order: Option<i64>,
    },

    #[error(
        "expansion order {requested} exceeds the truncation limit N = [[gamma]] - 1 = {cap} \
         for power growth gamma = {gamma} ([[.]] read as floor)"
    )]
    Truncation {
        requested: usize,
        cap: i64,
        gamma: f64,
    },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {best:e}, error estimate {err_estimate:e})"
    )]
    NonConvergence {
        best: f64,
        err_estimate: f64,
        subdivisions: usize,
    },

    #[error("insufficient data: {usable} usable points, at least {required} required")]
    InsufficientData { usable: usize, required: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn cap_note(max_valid_order: Option<i64>) -> String {
    match max_valid_order {
        Some(cap) if cap < 0 => " (no valid moment order: N = [[gamma]] - 1 is negative)".into(),
        Some(cap) => format!(" (moments valid up to order {cap})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

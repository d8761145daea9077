use alloc::string::String;
use thiserror::Error;

/// Errors raised by the linear-algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("empty input to {0}")]
    EmptyInput(&'static str),

    #[error("point not strictly interior to its bounds at component {index}")]
    NotInterior { index: usize },

    #[error("triplet entry {entry} at ({i},{j}) outside a {rows}x{cols} matrix")]
    MalformedMatrix {
        entry: usize,
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },

    #[error("unsupported backend selection: {0}")]
    Config(&'static str),
}

macro_rules! check_dim {
    ($cond:expr, $op:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::linalg::LinAlgError::Dimension {
                op: $op,
                detail: alloc::format!($($arg)*),
            });
        }
    };
}

pub(crate) use check_dim;

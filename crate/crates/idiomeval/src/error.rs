use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: malformed records at line(s) {}", path.display(), render_lines(lines))]
    Malformed {
        path: PathBuf,
        /// 1-based line numbers with messages.
        lines: Vec<(usize, String)>,
    },
    #[error("{}: no valid entries", path.display())]
    NoEntries { path: PathBuf },
    #[error(transparent)]
    Core(#[from] idiomeval_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

fn render_lines(lines: &[(usize, String)]) -> String {
    lines
        .iter()
        .map(|(n, msg)| format!("{n} ({msg})"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn malformed(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.into(),
            lines: vec![(line, msg.into())],
        }
    }

    /// 2 for bad input or usage, 3 for a broken internal invariant.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input with its location (1-based row, optional 1-based column).
    #[error("{path}:{}: {reason}", location(*.row, *.column))]
    Parse {
        path: String,
        row: usize,
        column: Option<usize>,
        reason: String,
    },

    #[error("{path}: no signals")]
    Empty { path: String },

    #[error("kernel matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error(transparent)]
    Core(#[from] peakjac::Error),
}

fn location(row: usize, column: Option<usize>) -> String {
    match column {
        Some(c) => format!("row {row}, column {c}"),
        None => format!("row {row}"),
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    /// Exit status; each error kind has its own code. Clap's own usage errors
    /// exit with 2.
    pub fn exit_code(&self) -> u8 {
        use peakjac::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Parse { .. } => 4,
            CliError::Empty { .. } => 5,
            CliError::NotPsd(_) => 6,
            CliError::Core(e) => match e {
                E::InvalidPartition(_) => 10,
                E::UnreachableState(_) => 11,
                E::InvalidGrouping(_) => 12,
                E::InvalidSignal(_) => 13,
                E::ShapeMismatch(_) => 14,
                E::PartitionMismatch { .. } => 15,
                E::InvalidParameter(_) => 16,
                E::CoalitionCapExceeded { .. } => 17,
                E::MissingCoalition(_) => 18,
                E::Vacuum => 19,
                E::InvariantViolation(_) => 20,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        use peakjac::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Empty { .. } => "empty_input",
            CliError::NotPsd(_) => "not_psd",
            CliError::Core(e) => match e {
                E::InvalidPartition(_) => "invalid_partition",
                E::UnreachableState(_) => "unreachable_state",
                E::InvalidGrouping(_) => "invalid_grouping",
                E::InvalidSignal(_) => "invalid_signal",
                E::ShapeMismatch(_) => "shape_mismatch",
                E::PartitionMismatch { .. } => "partition_mismatch",
                E::InvalidParameter(_) => "invalid_parameter",
                E::CoalitionCapExceeded { .. } => "coalition_cap_exceeded",
                E::MissingCoalition(_) => "missing_coalition",
                E::Vacuum => "vacuum",
                E::InvariantViolation(_) => "invariant_violation",
            },
        }
    }

    /// `error code=<n> kind=<kind>: <message>` on a single line.
    pub fn report_line(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error code={} kind={}: {msg}", self.exit_code(), self.kind())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid --{field}: {message}")]
    Config { field: &'static str, message: String },
    #[error(transparent)]
    Numerical(#[from] lueratio::Error),
    #[error("{0} acceptance criteria failed")]
    Validation(usize),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// Machine-readable error line written to standard error.
#[derive(Serialize)]
struct Record<'a> {
    error: &'a str,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
    message: String,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } | Self::Io { .. } => 2,
            Self::Numerical(_) => 3,
            Self::Validation(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config { .. } => "config",
            Self::Numerical(_) => "numerical",
            Self::Validation(_) => "validation",
            Self::Io { .. } => "io",
        }
    }

    pub fn record(&self) -> String {
        let field = match self {
            Self::Config { field, .. } => Some(*field),
            _ => None,
        };
        let r = Record { error: self.kind(), exit_code: self.exit_code(), field, message: self.to_string() };
        serde_json::to_string(&r).expect("error record serializes")
    }

    pub(crate) fn io(path: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        Self::Io { path: path.to_string(), message: e.to_string() }
    }
}

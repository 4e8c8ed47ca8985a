use thiserror::Error;

/// A position inside some parsed text, 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn locate(text: &str, offset: usize) -> Pos {
        let offset = offset.min(text.len());
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Pos { offset, line, column }
    }
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// An input failed a structural check (group axiom, bijectivity, shape).
    #[error("validation failed ({what}): {detail}")]
    Validation { what: String, detail: String },

    #[error("size limit exceeded for {what}: {actual} > {limit}; {hint}")]
    SizeLimit {
        what: String,
        limit: u128,
        actual: u128,
        hint: String,
    },

    #[error("parse error at {pos}: {message}")]
    Parse { pos: Pos, message: String },

    #[error("{file}: {source}")]
    InFile {
        file: String,
        #[source]
        source: Box<Error>,
    },

    /// An internal consistency check failed. Never expected on valid input.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            what: what.into(),
            detail: detail.into(),
        }
    }

    pub fn size_limit(what: impl Into<String>, limit: u128, actual: u128, hint: impl Into<String>) -> Self {
        Error::SizeLimit {
            what: what.into(),
            limit,
            actual,
            hint: hint.into(),
        }
    }

    pub fn parse(text: &str, offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            pos: Pos::locate(text, offset),
            message: message.into(),
        }
    }

    pub fn in_file(self, file: impl Into<String>) -> Self {
        Error::InFile {
            file: file.into(),
            source: Box::new(self),
        }
    }

    /// Shifts the position of a parse error that was produced on one line of a larger file.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { pos, message } => Error::Parse {
                pos: Pos { line, ..pos },
                message,
            },
            other => other,
        }
    }

    pub fn is_size_limit(&self) -> bool {
        match self {
            Error::SizeLimit { .. } => true,
            Error::InFile { source, .. } => source.is_size_limit(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::fmt;
use std::io;
use std::path::PathBuf;

/// Where a configuration entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    Flag,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("{}{message}", location.map(|l| format!("{l}: ")).unwrap_or_default())]
    Config {
        location: Option<Location>,
        message: String,
    },

    #[error(transparent)]
    Physics(#[from] dst_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl ScenarioError {
    pub fn config(location: Option<Location>, message: impl Into<String>) -> Self {
        ScenarioError::Config {
            location,
            message: message.into(),
        }
    }

    pub fn at(location: Location, message: impl Into<String>) -> Self {
        Self::config(Some(location), message)
    }

    /// Process exit status: 2 configuration, 3 domain or no solution, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use dst_core::Error as E;
        match self {
            ScenarioError::Config { .. } => 2,
            ScenarioError::Physics(E::Validation { .. } | E::PhaseWrap { .. }) => 2,
            ScenarioError::Physics(_) => 3,
            ScenarioError::Io { .. } => 4,
        }
    }
}

pub type Result<T, E = ScenarioError> = std::result::Result<T, E>;

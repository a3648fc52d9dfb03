use std::fmt;
use std::process::ExitCode;

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

/// Bad input: unreadable or malformed files, invalid arguments.
pub const EXIT_INPUT: u8 = 2;
/// The optimizer or an analysis failed on valid input.
pub const EXIT_RUN: u8 = 1;

impl Failure {
    pub fn input(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_INPUT,
            error: error.into(),
        }
    }

    pub fn run(error: impl Into<anyhow::Error>) -> Self {
        Self {
            code: EXIT_RUN,
            error: error.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CliResult<T = ()> = Result<T, Failure>;

pub trait OrInput<T> {
    fn or_input(self) -> CliResult<T>;
}

impl<T, E: Into<anyhow::Error>> OrInput<T> for Result<T, E> {
    fn or_input(self) -> CliResult<T> {
        self.map_err(Failure::input)
    }
}

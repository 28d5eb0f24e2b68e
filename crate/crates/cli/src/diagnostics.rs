use std::fmt;
use std::io::IsTerminal;

use rosette_core::parser::ParseDiagnostic;

#[derive(Debug)]
pub enum CliError {
    /// The expression (or another textual argument) did not parse.
    Parse {
        input: String,
        diagnostic: ParseDiagnostic,
    },
    /// An argument is malformed or does not fit the command.
    Usage(String),
    /// The input parsed but the computation failed.
    Numeric(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Usage(_) => 1,
            Self::Numeric(_) | Self::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse { input, diagnostic } => {
                writeln!(f, "invalid expression {diagnostic}")?;
                for line in diagnostic.caret(input).lines() {
                    writeln!(f, "  {line}")?;
                }
                Ok(())
            }
            Self::Usage(msg) | Self::Numeric(msg) | Self::Io(msg) => writeln!(f, "{msg}"),
        }
    }
}

impl From<rosette_core::Error> for CliError {
    fn from(e: rosette_core::Error) -> Self {
        Self::Numeric(e.to_string())
    }
}

fn colored() -> bool {
    std::env::var_os("NO_COLOR").map_or(true, |v| v.is_empty()) && std::io::stderr().is_terminal()
}

pub fn report(e: &CliError) {
    let label = if colored() {
        "\x1b[1;31merror\x1b[0m"
    } else {
        "error"
    };
    eprint!("{label}: {e}");
}

use serde_json::json;

/// Error surfaced to the user as a JSON record on stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: u8,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage".into(),
            message: message.into(),
            exit_code: 2,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: "io".into(),
            message: message.into(),
            exit_code: 5,
        }
    }

    pub fn record(&self, command: Option<&str>) -> serde_json::Value {
        json!({
            "error": {
                "kind": self.kind,
                "message": self.message,
                "command": command,
                "exit_code": self.exit_code,
            }
        })
    }
}

impl From<xs_core::Error> for CliError {
    fn from(e: xs_core::Error) -> Self {
        use xs_core::Error as E;
        let exit_code = match e {
            E::Domain { .. } => 2,
            E::Range { .. } | E::Accuracy { .. } | E::Indeterminate { .. } | E::Consistency { .. } => 3,
            E::Diagnostics { .. } => 4,
        };
        CliError {
            kind: e.kind().into(),
            message: e.to_string(),
            exit_code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::io(e.to_string())
    }
}

use serde::Serialize;
use wbfa_core::ErrorKind;

/// Failure category, mapped one-to-one onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Validation,
    Data,
    Numerical,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Validation => 2,
            Category::Data => 3,
            Category::Numerical => 4,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    category: Category,
    exit_code: i32,
    message: &'a str,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            category: Category::Validation,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            category: Category::Data,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            category: Category::Numerical,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.category.exit_code()
    }

    /// Single-line JSON document describing the failure.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorDoc {
            error: ErrorBody {
                category: self.category,
                exit_code: self.exit_code(),
                message: &self.message,
            },
        })
        .expect("error document serializes")
    }

    /// Prefixes the message with what was being attempted.
    pub fn context(mut self, what: &str) -> Self {
        self.message = format!("{what}: {}", self.message);
        self
    }
}

impl From<wbfa_core::Error> for CliError {
    fn from(e: wbfa_core::Error) -> Self {
        let category = match e.kind() {
            ErrorKind::Validation => Category::Validation,
            ErrorKind::Data => Category::Data,
            ErrorKind::Numerical => Category::Numerical,
        };
        Self {
            category,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::data(e.to_string())
    }
}

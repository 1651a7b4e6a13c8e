use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("numerical breakdown in {context} (residual {residual:e})")]
    Numerical { context: String, residual: f64 },
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(vec![msg.into()])
    }

    /// Prefixes every message with `what`.
    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Validation(v) => {
                CliError::Validation(v.into_iter().map(|m| format!("{what}: {m}")).collect())
            }
            CliError::Numerical { context, residual } => CliError::Numerical {
                context: format!("{what}: {context}"),
                residual,
            },
        }
    }

    pub fn messages(&self) -> Vec<String> {
        match self {
            CliError::Validation(v) => v.clone(),
            CliError::Numerical { .. } => vec![self.to_string()],
        }
    }

    /// 1 for bad input, 2 for tolerance breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical { .. } => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Validation(v) => json!({ "error": "validation", "messages": v }),
            CliError::Numerical { context, residual } => {
                json!({ "error": "numerical", "context": context, "residual": residual })
            }
        }
    }
}

impl From<vonlab_core::Error> for CliError {
    fn from(e: vonlab_core::Error) -> Self {
        match e {
            vonlab_core::Error::Validation(v) => CliError::Validation(v),
            vonlab_core::Error::Numerical { context, residual } => {
                CliError::Numerical { context, residual }
            }
        }
    }
}

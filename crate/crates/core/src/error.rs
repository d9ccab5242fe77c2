use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("substituting for `{var}` would be captured by binder `{binder}`")]
    Capture { binder: String, var: String },
    #[error("unknown constant `{0}`")]
    UnknownConst(String),
    #[error("constant `{0}` is already defined")]
    Redefined(String),
    #[error("definition of `{name}` mentions undeclared constant `{other}`")]
    ForwardReference { name: String, other: String },
    #[error("definition of `{0}` must be a closed formula")]
    OpenDefinition(String),
    #[error("definition of `{0}` may not be a bare constant")]
    AliasDefinition(String),
    #[error("`{0}` is not a constant name (must start with an uppercase letter)")]
    BadConstName(String),
}

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    /// Shifts a position computed within a single line fragment.
    pub fn relocate(mut self, line: usize, column_offset: usize) -> Self {
        if self.line == 1 {
            self.column += column_offset;
        }
        self.line += line - 1;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("metavariable {0} is unbound")]
    UnboundMetavar(char),
    #[error("unknown schema id `{0}`")]
    UnknownSchema(String),
}

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Failure modes shared by every operation in the crate.
///
/// `Validation` means the input broke a documented invariant; the list names
/// each violation. `Numerical` means the computation ran but a post-condition
/// check exceeded its tolerance, which signals a tolerance breakdown rather
/// than bad input.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Validation(Vec<String>),
    Numerical { context: String, residual: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(alloc::vec![msg.into()])
    }

    pub fn numerical(context: impl Into<String>, residual: f64) -> Self {
        Error::Numerical {
            context: context.into(),
            residual,
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(list) => {
                write!(f, "validation failed: ")?;
                for (i, msg) in list.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{msg}")?;
                }
                Ok(())
            }
            Error::Numerical { context, residual } => {
                write!(f, "numerical tolerance exceeded in {context} (residual {residual:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Collects violations and turns them into a single `Validation` error.
#[derive(Default)]
pub(crate) struct Violations(Vec<String>);

impl Violations {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, msg: impl Into<String>) {
        self.0.push(msg.into());
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    pub fn into_result(self) -> Result<()> {
        if self.0.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(self.0))
        }
    }
}

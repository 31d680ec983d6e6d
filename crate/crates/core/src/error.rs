use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid identifier {0:?}: expected a nonempty token of [a-zA-Z0-9_]")]
    InvalidIdentifier(String),

    #[error("unknown argument {0}")]
    UnknownArgument(String),

    #[error("unknown value {0}")]
    UnknownValue(String),


    #[error("framework has {size} arguments, more than the representable maximum of {max}")]
    FrameworkTooLarge { size: usize, max: usize },

    #[error("{what} has size {size}, exceeding the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("{0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value framework rejected: {0}")]
    Validation(String),

    #[error("value framework rejected: argument {0} attacks itself")]
    SelfAttack(String),

    #[error("preference of agent {agent} is reflexive on {value}")]
    PreferenceReflexive { agent: usize, value: String },

    #[error("preference of agent {agent} is not asymmetric: {pair} holds in both directions")]
    PreferenceSymmetric { agent: usize, pair: String },

    #[error("preference of agent {agent} is not transitive: {missing} is missing")]
    PreferenceIntransitive { agent: usize, missing: String },

    #[error("enforcement infeasible: extension {0} has no conflict-free superset")]
    EnforcementInfeasible(String),

    #[error("generation failed after {attempts} attempts ({what}); seed {seed}")]
    Generation {
        what: &'static str,
        attempts: usize,
        seed: u64,
    },

    #[error("{line}:{column}: {inner}")]
    Located {
        line: usize,
        column: usize,
        inner: Box<Error>,
    },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Stable machine-readable code, printed as a prefix by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidIdentifier(_) => "E_IDENT",
            Error::UnknownArgument(_) => "E_UNKNOWN_ARG",
            Error::UnknownValue(_) => "E_UNKNOWN_VALUE",
            Error::FrameworkTooLarge { .. } => "E_TOO_LARGE",
            Error::CapExceeded { .. } => "E_CAP",
            Error::Domain(_) => "E_DOMAIN",
            Error::Precondition(_) => "E_PRECONDITION",
            Error::Validation(_) => "E_VALIDATION",
            Error::SelfAttack(_) => "E_SELF_ATTACK",
            Error::PreferenceReflexive { .. } => "E_PREF_REFLEXIVE",
            Error::PreferenceSymmetric { .. } => "E_PREF_SYMMETRIC",
            Error::PreferenceIntransitive { .. } => "E_PREF_INTRANSITIVE",
            Error::EnforcementInfeasible(_) => "E_ENFORCE",
            Error::Generation { .. } => "E_GENERATION",
            Error::Located { inner, .. } => inner.code(),
            Error::Parse { .. } => "E_PARSE",
        }
    }
}

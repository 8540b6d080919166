use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { pos: usize, name: String },

    #[error("higher derivative of S at byte {pos} is not an operator; it only exists after projection")]
    HigherActionDerivative { pos: usize },

    #[error("`{what}` at byte {pos} is not allowed in a {mode} expression")]
    NotAllowed {
        pos: usize,
        what: String,
        mode: &'static str,
    },

    #[error("division by a non-monomial: {expr}")]
    NonMonomialDivision { expr: String },

    #[error("term `{term}` has more than two derivatives of S; only quadratic-in-momentum Hamiltonians reduce")]
    MoreThanTwoSDerivs { term: String },

    #[error("term `{term}` is not normal ordered (a coordinate function stands right of a derivative of S)")]
    NotNormalOrdered { term: String },

    #[error("term `{term}` still contains a momentum operator")]
    UnsubstitutedMomentum { term: String },

    #[error("unsupported momentum: {reason}")]
    UnsupportedMomentum { reason: String },

    #[error("invalid Hamiltonian spec: {0}")]
    InvalidSpec(String),

    #[error("binding for `{name}`: {reason}")]
    Binding { name: String, reason: String },

    #[error("cannot solve for `{unknown}`: {reason}")]
    Solve { unknown: String, reason: String },
}

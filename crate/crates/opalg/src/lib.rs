//! Exact symbolic algebra for quantum Hamilton-Jacobi derivations.
//!
//! Two expression kinds are provided: commuting [`CNumberExpr`] sums and
//! ordered [`OperatorExpr`] products of coordinate functions and derivatives
//! of the operator S. Coefficients are exact rationals times a power of `i`.
//!
//! ```
//! use qhj_opalg::{parse_cnumber, parse_operator, NormalizeOptions};
//!
//! let op = parse_operator("dS/dq_i * a(q,t)").unwrap();
//! let n = op.normalize(NormalizeOptions::default());
//! assert_eq!(n.to_string(), "a*dS/dq_i - i*hbar*d[a]/dq_i");
//! let c = n.project_matrix_element().unwrap();
//! assert_eq!(c, parse_cnumber("a*dS/dq_i - i*hbar*d[a]/dq_i").unwrap());
//! ```

mod atom;
mod canon;
mod cnum;
mod error;
mod hamiltonian;
mod index;
mod op;
mod parse;
mod subst;

pub type Rational = num_rational::Rational64;

pub use atom::{classify, Atom, SymbolClass};
pub use cnum::{expr_equal, CNumberExpr, Term};
pub use error::AlgebraError;
pub use hamiltonian::{
    build_weyl_hamiltonian, qhj_operator, substitute_momenta, CoeffFn, HamiltonianSpec, Metric, Regime,
};
pub use index::{Index, IndexKind, Position, Var, GREEK_NAMES, LATIN_NAMES};
pub use op::{operator_equal, NormalizeOptions, OpFactor, OpTerm, OperatorExpr};
pub use parse::{cnumber_to_operator, parse_cnumber, parse_operator};
pub use subst::{impose_zero, solve_linear, substitute_functions, Binding, Bindings};

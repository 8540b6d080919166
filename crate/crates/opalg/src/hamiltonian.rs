//! Weyl-symmetrized quadratic Hamiltonians and momentum substitution.

use crate::atom::{classify, Atom, SymbolClass};
use crate::error::AlgebraError;
use crate::index::{Index, IndexKind, Var};
use crate::op::{OpFactor, OpTerm, OperatorExpr};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    NonRelativistic,
    Relativistic,
}

/// Choice for one coefficient function of the Hamiltonian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffFn {
    One,
    Zero,
    /// A named function of the coordinates (and time), e.g. `a`.
    Symbol(String),
}

/// The quadratic-form matrix of the non-relativistic kinetic term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Constant symmetric `A_ij`.
    Symbol,
    /// `delta_ij`; for the relativistic regime the (+,-,-,-) metric is implied
    /// by index placement and this is the only allowed choice.
    Identity,
}

/// `H = a * A_ij p_i p_j / (2m) + b_i p_i + c` (non-relativistic) or
/// `H = a * p^mu p_mu + b_mu p^mu + c` (relativistic), Weyl ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianSpec {
    pub regime: Regime,
    pub a: CoeffFn,
    pub b: CoeffFn,
    pub c: CoeffFn,
    pub metric: Metric,
}

impl HamiltonianSpec {
    pub fn nonrelativistic() -> Self {
        HamiltonianSpec {
            regime: Regime::NonRelativistic,
            a: CoeffFn::Symbol("a".into()),
            b: CoeffFn::Symbol("b".into()),
            c: CoeffFn::Symbol("c".into()),
            metric: Metric::Symbol,
        }
    }

    pub fn relativistic() -> Self {
        HamiltonianSpec {
            regime: Regime::Relativistic,
            metric: Metric::Identity,
            ..Self::nonrelativistic()
        }
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        if self.regime == Regime::Relativistic && self.metric == Metric::Symbol {
            return Err(AlgebraError::InvalidSpec(
                "the relativistic regime contracts with the spacetime metric; use Metric::Identity".into(),
            ));
        }
        for c in [&self.a, &self.b, &self.c] {
            if let CoeffFn::Symbol(name) = c {
                if classify(name) != Some(SymbolClass::Function) {
                    return Err(AlgebraError::InvalidSpec(format!(
                        "`{name}` is not a coefficient function name"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn coeff(c: &CoeffFn, comps: Vec<Index>) -> Option<OperatorExpr> {
    match c {
        CoeffFn::Zero => None,
        CoeffFn::One => Some(OperatorExpr::one()),
        CoeffFn::Symbol(n) => Some(OperatorExpr::func(Atom::with_comps(n, comps))),
    }
}

fn half() -> Rational {
    Rational::new(1, 2)
}

fn quarter() -> Rational {
    Rational::new(1, 4)
}

/// Weyl ordering of `f p p`: `(f p p + 2 p f p + p p f) / 4`.
fn weyl_quadratic(f: &OperatorExpr, p1: &OperatorExpr, p2: &OperatorExpr) -> OperatorExpr {
    let left = f * &(p1 * p2);
    let mid = &(p1 * f) * p2;
    let right = &(p1 * p2) * f;
    &(&left.scale(quarter()) + &mid.scale(half())) + &right.scale(quarter())
}

/// Weyl ordering of `f p`: `(f p + p f) / 2`.
fn weyl_linear(f: &OperatorExpr, p: &OperatorExpr) -> OperatorExpr {
    (&(f * p) + &(p * f)).scale(half())
}

/// The Weyl-symmetrized Hamiltonian with explicit momentum factors.
pub fn build_weyl_hamiltonian(spec: &HamiltonianSpec) -> Result<OperatorExpr, AlgebraError> {
    spec.validate()?;
    let mut h = OperatorExpr::zero();
    match spec.regime {
        Regime::NonRelativistic => {
            let (i, j) = (Index::spatial("i"), Index::spatial("j"));
            if let Some(a) = coeff(&spec.a, vec![]) {
                let metric = match spec.metric {
                    Metric::Symbol => Atom::with_comps("A", vec![i.clone(), j.clone()]),
                    Metric::Identity => Atom::with_comps("delta", vec![i.clone(), j.clone()]),
                };
                let two_m = OperatorExpr::constant_atom(Atom::new("m")).scale(Rational::from_integer(2));
                let f = &(&a * &OperatorExpr::constant_atom(metric)) * &two_m.scalar_inverse()?;
                h = &h + &weyl_quadratic(&f, &OperatorExpr::momentum(i.clone()), &OperatorExpr::momentum(j));
            }
            if let Some(b) = coeff(&spec.b, vec![i.clone()]) {
                h = &h + &weyl_linear(&b, &OperatorExpr::momentum(i));
            }
        }
        Regime::Relativistic => {
            if let Some(a) = coeff(&spec.a, vec![]) {
                h = &h
                    + &weyl_quadratic(
                        &a,
                        &OperatorExpr::momentum(Index::up("mu")),
                        &OperatorExpr::momentum(Index::down("mu")),
                    );
            }
            if let Some(b) = coeff(&spec.b, vec![Index::down("mu")]) {
                h = &h + &weyl_linear(&b, &OperatorExpr::momentum(Index::up("mu")));
            }
        }
    }
    if let Some(c) = coeff(&spec.c, vec![]) {
        h = &h + &c;
    }
    Ok(h)
}

/// Replace momenta by derivatives of the operator S: `p_i -> dS/dq_i` in
/// configuration space, `p^mu -> -dS/dq_mu` in spacetime.
pub fn substitute_momenta(h: &OperatorExpr, regime: Regime) -> Result<OperatorExpr, AlgebraError> {
    let mut terms = Vec::with_capacity(h.terms().len());
    for t in h.terms() {
        let mut out = OpTerm {
            factors: Vec::with_capacity(t.factors.len()),
            ..t.clone()
        };
        for f in &t.factors {
            match f {
                OpFactor::Momentum(i) => {
                    let ok = matches!(
                        (regime, i.kind),
                        (Regime::NonRelativistic, IndexKind::Spatial) | (Regime::Relativistic, IndexKind::Spacetime)
                    );
                    if !ok {
                        return Err(AlgebraError::UnsupportedMomentum {
                            reason: format!("momentum p{i} does not belong to the {regime:?} regime"),
                        });
                    }
                    match regime {
                        Regime::NonRelativistic => out.factors.push(OpFactor::SDeriv(Var::Coord(i.clone()))),
                        Regime::Relativistic => {
                            out.coeff = -out.coeff;
                            out.factors.push(OpFactor::SDeriv(Var::Coord(i.flipped())));
                        }
                    }
                }
                other => out.factors.push(other.clone()),
            }
        }
        terms.push(out);
    }
    Ok(OperatorExpr::from_terms(terms))
}

/// The operator whose vanishing is the quantum Hamilton-Jacobi equation:
/// `H(q, dS/dq) + (a*dS/dt + dS/dt*a)/2` non-relativistically (the time term
/// carries the same weight `a` as the kinetic term), `H(q, -dS/dq)` in spacetime.
pub fn qhj_operator(spec: &HamiltonianSpec) -> Result<OperatorExpr, AlgebraError> {
    let h = substitute_momenta(&build_weyl_hamiltonian(spec)?, spec.regime)?;
    if spec.regime == Regime::Relativistic {
        return Ok(h);
    }
    let st = OperatorExpr::sderiv(Var::Time);
    let time = match coeff(&spec.a, vec![]) {
        None => OperatorExpr::zero(),
        Some(a) => weyl_linear(&a, &st),
    };
    Ok(&h + &time)
}

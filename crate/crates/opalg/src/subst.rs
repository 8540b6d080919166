//! Substitution of function bindings, imposed conditions and linear solving.

use std::collections::{BTreeSet, HashMap};

use crate::atom::{Atom, SymbolClass};
use crate::canon;
use crate::cnum::{CNumberExpr, Term};
use crate::error::AlgebraError;
use crate::index::{Index, IndexKey, Rename, Var};
use crate::parse::parse_cnumber;

/// `name_params := body`, e.g. `b_i := R^2*V_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub params: Vec<Index>,
    pub body: CNumberExpr,
}

impl Binding {
    /// Parse `lhs` (a bare symbol such as `b_i` or `b_mu`) and `rhs`.
    pub fn parse(lhs: &str, rhs: &str) -> Result<Self, AlgebraError> {
        let head = parse_cnumber(lhs)?;
        let atom = match head.terms() {
            [t] if t.factors.len() == 1 && t.factors[0].1 == 1 && !t.imag && t.coeff == 1.into() => {
                t.factors[0].0.clone()
            }
            _ => {
                return Err(AlgebraError::Binding {
                    name: lhs.to_string(),
                    reason: "left side must be a single symbol".into(),
                })
            }
        };
        if !atom.derivs.is_empty() || atom.is_action() {
            return Err(AlgebraError::Binding {
                name: lhs.to_string(),
                reason: "only underived coefficient symbols can be bound".into(),
            });
        }
        let body = parse_cnumber(rhs)?;
        let free: BTreeSet<IndexKey> = body
            .terms()
            .iter()
            .flat_map(|t| {
                let counts = canon::index_counts(t);
                counts.into_iter().filter(|(_, c)| *c == 1).map(|(k, _)| k)
            })
            .collect();
        let params: BTreeSet<IndexKey> = atom.comps.iter().map(Index::key).collect();
        if !free.is_subset(&params) {
            return Err(AlgebraError::Binding {
                name: lhs.to_string(),
                reason: "right side has free indices the left side lacks".into(),
            });
        }
        Ok(Binding {
            name: atom.name.clone(),
            params: atom.comps,
            body,
        })
    }

    fn matches(&self, atom: &Atom) -> bool {
        atom.name == self.name
            && atom.comps.len() == self.params.len()
            && atom.comps.iter().zip(&self.params).all(|(a, p)| a.kind == p.kind)
    }

    /// The body with parameters renamed onto `atom`'s components.
    fn instantiate(&self, atom: &Atom, avoid: &BTreeSet<IndexKey>) -> CNumberExpr {
        let mut avoid = avoid.clone();
        avoid.extend(atom.indices().map(Index::key));
        let mut map = HashMap::new();
        for (p, actual) in self.params.iter().zip(&atom.comps) {
            map.insert(
                p.key(),
                Rename {
                    name: actual.name.clone(),
                    flip: p.pos.is_some() && p.pos != actual.pos,
                },
            );
        }
        let terms = self
            .body
            .terms()
            .iter()
            .map(|t| {
                let apart = canon::rename_apart(t, &avoid);
                canon::Indexed::renamed(&apart, &map)
            })
            .collect();
        let mut e = CNumberExpr::from_terms(terms);
        for v in &atom.derivs {
            e = e.differentiate(v);
        }
        e
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    items: Vec<Binding>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, b: Binding) -> Self {
        self.items.retain(|x| !(x.name == b.name && x.params.len() == b.params.len()));
        self.items.push(b);
        self
    }

    /// Convenience: `Bindings::new().bind("a", "R^2")?`.
    pub fn bind(self, lhs: &str, rhs: &str) -> Result<Self, AlgebraError> {
        Ok(self.with(Binding::parse(lhs, rhs)?))
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Replace every bound symbol (and its derivatives) by its body.
    pub fn apply(&self, e: &CNumberExpr) -> Result<CNumberExpr, AlgebraError> {
        let mut out = CNumberExpr::zero();
        for t in e.terms() {
            let avoid = canon::all_keys(t);
            let mut acc = CNumberExpr::from_terms(vec![Term {
                coeff: t.coeff,
                imag: t.imag,
                factors: Vec::new(),
            }]);
            for (atom, p) in &t.factors {
                let f = match self.items.iter().find(|b| b.matches(atom)) {
                    Some(b) => b.instantiate(atom, &avoid).powi(*p).map_err(|err| AlgebraError::Binding {
                        name: b.name.clone(),
                        reason: format!("cannot raise to power {p}: {err}"),
                    })?,
                    None => CNumberExpr::from_terms(vec![Term {
                        coeff: 1.into(),
                        imag: false,
                        factors: vec![(atom.clone(), *p)],
                    }]),
                };
                acc = &acc * &f;
            }
            out = &out + &acc;
        }
        Ok(out)
    }
}

/// Slot shape of an atom: which component/derivative slots share an index.
fn shape(a: &Atom) -> Vec<Option<usize>> {
    let mut seen: Vec<IndexKey> = Vec::new();
    let slot = |i: &Index, seen: &mut Vec<IndexKey>| {
        let k = i.key();
        Some(seen.iter().position(|s| *s == k).unwrap_or_else(|| {
            seen.push(k);
            seen.len() - 1
        }))
    };
    let mut out: Vec<Option<usize>> = a.comps.iter().map(|i| slot(i, &mut seen)).collect();
    for v in &a.derivs {
        out.push(match v {
            Var::Time => None,
            Var::Coord(i) => slot(i, &mut seen),
        });
    }
    out
}

/// Drop every term containing an atom of the same name and index shape as
/// `pattern` (e.g. `d[b_i]/dq_i` imposes a vanishing divergence).
pub fn impose_zero(e: &CNumberExpr, pattern: &str) -> Result<CNumberExpr, AlgebraError> {
    let p = parse_cnumber(pattern)?;
    let pat = match p.terms() {
        [t] if t.factors.len() == 1 => t.factors[0].0.clone(),
        _ => {
            return Err(AlgebraError::Binding {
                name: pattern.to_string(),
                reason: "pattern must be a single atom".into(),
            })
        }
    };
    let want = shape(&pat);
    Ok(e.filter_terms(|t| {
        !t.factors
            .iter()
            .any(|(a, _)| a.name == pat.name && a.derivs.len() == pat.derivs.len() && shape(a) == want)
    }))
}

/// Solve `e = 0` for the underived symbol `unknown`, which must occur to the
/// first power in exactly one term.
pub fn solve_linear(e: &CNumberExpr, unknown: &str) -> Result<CNumberExpr, AlgebraError> {
    let fail = |reason: &str| AlgebraError::Solve {
        unknown: unknown.to_string(),
        reason: reason.to_string(),
    };
    let is_unknown = |a: &Atom| a.name == unknown && a.class() != SymbolClass::Constant;
    let with: Vec<&Term> = e.terms().iter().filter(|t| t.has_factor(is_unknown)).collect();
    let coeff_term = match with.as_slice() {
        [] => return Err(fail("it does not occur")),
        [t] => *t,
        _ => return Err(fail("it occurs in more than one term")),
    };
    let occ: Vec<&(Atom, i32)> = coeff_term.factors.iter().filter(|(a, _)| is_unknown(a)).collect();
    match occ.as_slice() {
        [(a, 1)] if a.derivs.is_empty() && a.comps.is_empty() => {}
        _ => return Err(fail("it must occur linearly and underived")),
    }
    let coefficient = CNumberExpr::from_terms(vec![Term {
        coeff: coeff_term.coeff,
        imag: coeff_term.imag,
        factors: coeff_term
            .factors
            .iter()
            .filter(|(a, _)| !is_unknown(a))
            .cloned()
            .collect(),
    }]);
    let rest = e.filter_terms(|t| !t.has_factor(is_unknown));
    (-rest).div(&coefficient)
}

/// Free-function form of [`Bindings::apply`].
pub fn substitute_functions(e: &CNumberExpr, bindings: &Bindings) -> Result<CNumberExpr, AlgebraError> {
    bindings.apply(e)
}

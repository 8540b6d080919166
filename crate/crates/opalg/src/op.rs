//! Noncommutative operator expressions and canonical-commutation rewriting.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::atom::{Atom, SymbolClass};
use crate::canon::{self, Indexed};
use crate::cnum::{self, merge_factors, CNumberExpr, Term};
use crate::error::AlgebraError;
use crate::index::{apply_rename, format_comps, Index, IndexKey, IndexKind, Rename, Var};
use crate::Rational;

/// An ordered factor of an operator product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpFactor {
    /// A function of the coordinate and time operators (`a`, `b_i`, `d[a]/dq_i`, ...).
    Func(Atom),
    /// First derivative of the operator S by a coordinate or by time.
    SDeriv(Var),
    /// Canonical momentum `p_i` / `p^mu`, replaced by [`crate::substitute_momenta`].
    Momentum(Index),
}

impl OpFactor {
    fn indices(&self) -> Vec<&Index> {
        match self {
            OpFactor::Func(a) => a.indices().collect(),
            OpFactor::SDeriv(v) => v.index().into_iter().collect(),
            OpFactor::Momentum(i) => vec![i],
        }
    }

    fn renamed(&self, map: &HashMap<IndexKey, Rename>) -> OpFactor {
        match self {
            OpFactor::Func(a) => OpFactor::Func(a.renamed(map)),
            OpFactor::SDeriv(Var::Time) => OpFactor::SDeriv(Var::Time),
            OpFactor::SDeriv(Var::Coord(i)) => OpFactor::SDeriv(Var::Coord(apply_rename(i, map))),
            OpFactor::Momentum(i) => OpFactor::Momentum(apply_rename(i, map)),
        }
    }

    fn is_func(&self) -> bool {
        matches!(self, OpFactor::Func(_))
    }

    /// The variable this factor differentiates by when it is pushed past a
    /// function. Spatial momenta act as `dS/dq_i` does.
    fn derivative_var(&self) -> Option<Var> {
        match self {
            OpFactor::SDeriv(v) => Some(v.clone()),
            OpFactor::Momentum(i) => Some(Var::Coord(i.clone())),
            OpFactor::Func(_) => None,
        }
    }
}

impl fmt::Display for OpFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpFactor::Func(a) if a.is_action() => {
                write!(f, "d[S{}]", format_comps(&a.comps))?;
                for v in &a.derivs {
                    write!(f, "/{v}")?;
                }
                Ok(())
            }
            OpFactor::Func(a) => write!(f, "{a}"),
            OpFactor::SDeriv(v) => write!(f, "dS/{v}"),
            OpFactor::Momentum(i) => write!(f, "p{i}"),
        }
    }
}

/// `coeff * i^imag * scalars * f1 f2 ... fn` with the `f` in operator order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpTerm {
    pub coeff: Rational,
    pub imag: bool,
    /// Commuting constants (`hbar`, `m`, `A_ij`, ...) with integer powers.
    pub scalars: Vec<(Atom, i32)>,
    pub factors: Vec<OpFactor>,
}

impl OpTerm {
    pub fn scalar(coeff: Rational) -> Self {
        OpTerm {
            coeff,
            imag: false,
            scalars: Vec::new(),
            factors: Vec::new(),
        }
    }

    fn times(&self, other: &OpTerm) -> OpTerm {
        let this = canon::rename_apart(self, &canon::all_keys(other));
        let other = canon::rename_apart(other, &canon::all_keys(&this));
        let mut coeff = this.coeff * other.coeff;
        let imag = match (this.imag, other.imag) {
            (true, true) => {
                coeff = -coeff;
                false
            }
            (a, b) => a ^ b,
        };
        let mut scalars = this.scalars;
        scalars.extend(other.scalars);
        let mut factors = this.factors;
        factors.extend(other.factors);
        OpTerm {
            coeff,
            imag,
            scalars,
            factors,
        }
    }

    /// Multiply by `-i*hbar`.
    fn times_minus_i_hbar(mut self) -> OpTerm {
        if self.imag {
            self.imag = false;
        } else {
            self.coeff = -self.coeff;
            self.imag = true;
        }
        self.scalars.push((Atom::new("hbar"), 1));
        self
    }

    fn canonical(self) -> OpTerm {
        canon::canonical_rename(self.contract_deltas())
    }

    fn contract_deltas(mut self) -> OpTerm {
        loop {
            let counts = canon::index_counts(&self);
            let found = self.scalars.iter().position(|(a, p)| {
                *p == 1
                    && a.class() == SymbolClass::Delta
                    && a.comps.len() == 2
                    && a.comps[0].key() != a.comps[1].key()
                    && (counts[&a.comps[0].key()] == 2 || counts[&a.comps[1].key()] == 2)
            });
            let Some(pos) = found else {
                return self;
            };
            let (delta, _) = self.scalars.remove(pos);
            let (x, y) = (&delta.comps[0], &delta.comps[1]);
            let (keep, drop) = if counts[&y.key()] == 2 { (x, y) } else { (y, x) };
            let mut map = HashMap::new();
            map.insert(
                drop.key(),
                Rename {
                    name: keep.name.clone(),
                    flip: drop.pos.is_some() && drop.pos == keep.pos,
                },
            );
            self = self.renamed(&map);
        }
    }

    fn first_redex(&self, opts: NormalizeOptions) -> Option<usize> {
        self.factors.windows(2).position(|w| match (&w[0], &w[1]) {
            (OpFactor::SDeriv(_), OpFactor::Func(_)) => true,
            (OpFactor::Momentum(i), OpFactor::Func(_)) => i.kind == IndexKind::Spatial,
            (OpFactor::SDeriv(_), OpFactor::SDeriv(_)) => opts.treat_sderiv_as_function,
            _ => false,
        })
    }

    /// One leftmost rewrite step at position `k`, producing one or two terms.
    fn rewrite_at(&self, k: usize) -> Vec<OpTerm> {
        let left = &self.factors[k];
        let right = &self.factors[k + 1];
        let var = left.derivative_var().expect("redex starts with a derivative");
        match right {
            OpFactor::Func(g) => {
                let mut swapped = self.clone();
                swapped.factors.swap(k, k + 1);
                let mut out = vec![swapped];
                if let Some(dg) = g.differentiate(&var) {
                    let mut comm = self.clone();
                    comm.factors.remove(k);
                    comm.factors[k] = OpFactor::Func(dg);
                    out.push(comm.times_minus_i_hbar());
                }
                out
            }
            OpFactor::SDeriv(inner) => {
                // Regard the right derivative as the c-number function G = dS/d(inner).
                let g = Atom::new("S").with_derivs(vec![inner.clone()]);
                let mut swapped = self.clone();
                swapped.factors[k] = OpFactor::Func(g.clone());
                swapped.factors[k + 1] = left.clone();
                let mut comm = self.clone();
                comm.factors.remove(k);
                comm.factors[k] = OpFactor::Func(g.differentiate(&var).expect("S is not constant"));
                vec![swapped, comm.times_minus_i_hbar()]
            }
            OpFactor::Momentum(_) => unreachable!("momentum pairs are not redexes"),
        }
    }
}

impl Indexed for OpTerm {
    type Key = (Vec<(Atom, i32)>, Vec<OpFactor>, bool);

    fn occurrences(&self) -> Vec<(IndexKey, usize)> {
        let mut out: Vec<(IndexKey, usize)> = self
            .scalars
            .iter()
            .flat_map(|(a, p)| a.indices().map(move |i| (i.key(), p.unsigned_abs() as usize)))
            .collect();
        for f in &self.factors {
            out.extend(f.indices().into_iter().map(|i| (i.key(), 1)));
        }
        out
    }

    fn renamed(&self, map: &HashMap<IndexKey, Rename>) -> Self {
        OpTerm {
            coeff: self.coeff,
            imag: self.imag,
            scalars: self.scalars.iter().map(|(a, p)| (a.renamed(map), *p)).collect(),
            factors: self.factors.iter().map(|f| f.renamed(map)).collect(),
        }
    }

    fn tidy(mut self) -> Self {
        self.scalars = merge_factors(self.scalars);
        // Coordinate functions commute among themselves: sort each maximal run.
        let mut k = 0;
        while k < self.factors.len() {
            if !self.factors[k].is_func() {
                k += 1;
                continue;
            }
            let start = k;
            while k < self.factors.len() && self.factors[k].is_func() {
                k += 1;
            }
            self.factors[start..k].sort();
        }
        self
    }

    fn key(&self) -> Self::Key {
        (self.scalars.clone(), self.factors.clone(), self.imag)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Also commute `dS/dx * dS/dy` by regarding the right factor as a
    /// function of the coordinates. Off during general normalization.
    pub treat_sderiv_as_function: bool,
}

/// A canonical sum of ordered operator products.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OperatorExpr {
    terms: Vec<OpTerm>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        Self::from_terms(vec![OpTerm::scalar(c)])
    }

    pub fn imag_unit() -> Self {
        Self::from_terms(vec![OpTerm {
            imag: true,
            ..OpTerm::scalar(Rational::one())
        }])
    }

    pub fn factor(f: OpFactor) -> Self {
        Self::from_terms(vec![OpTerm {
            factors: vec![f],
            ..OpTerm::scalar(Rational::one())
        }])
    }

    /// A commuting constant such as `hbar`, `m` or `A_ij`.
    pub fn constant_atom(a: Atom) -> Self {
        Self::from_terms(vec![OpTerm {
            scalars: vec![(a, 1)],
            ..OpTerm::scalar(Rational::one())
        }])
    }

    pub fn func(a: Atom) -> Self {
        Self::factor(OpFactor::Func(a))
    }

    pub fn sderiv(v: Var) -> Self {
        Self::factor(OpFactor::SDeriv(v))
    }

    pub fn momentum(i: Index) -> Self {
        Self::factor(OpFactor::Momentum(i))
    }

    pub fn from_terms(terms: Vec<OpTerm>) -> Self {
        let mut canon: Vec<OpTerm> = terms
            .into_iter()
            .filter(|t| !t.coeff.is_zero())
            .map(OpTerm::canonical)
            .collect();
        canon.sort_by_key(|a| a.key());
        let mut out: Vec<OpTerm> = Vec::with_capacity(canon.len());
        for t in canon {
            match out.last_mut() {
                Some(last) if last.key() == t.key() => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        OperatorExpr { terms: out }
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| OpTerm {
                    coeff: t.coeff * c,
                    ..t.clone()
                })
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// True when the expression carries no ordered factors.
    pub fn is_scalar(&self) -> bool {
        self.terms.iter().all(|t| t.factors.is_empty())
    }

    /// Inverse of a single-term scalar expression.
    pub fn scalar_inverse(&self) -> Result<Self, AlgebraError> {
        match self.terms.as_slice() {
            [t] if t.factors.is_empty() => {
                let mut coeff = t.coeff.recip();
                if t.imag {
                    coeff = -coeff;
                }
                Ok(Self::from_terms(vec![OpTerm {
                    coeff,
                    imag: t.imag,
                    scalars: t.scalars.iter().map(|(a, p)| (a.clone(), -p)).collect(),
                    factors: Vec::new(),
                }]))
            }
            _ => Err(AlgebraError::NonMonomialDivision {
                expr: self.to_string(),
            }),
        }
    }

    /// Rewrite to a fixpoint with `dS/dx * F -> F * dS/dx - i*hbar*dF/dx`
    /// (leftmost redex first). The result has every function left of every
    /// derivative of S.
    pub fn normalize(&self, opts: NormalizeOptions) -> Self {
        let mut work: Vec<OpTerm> = self.terms.clone();
        let mut done = Vec::new();
        while let Some(t) = work.pop() {
            match t.first_redex(opts) {
                None => done.push(t),
                Some(k) => work.extend(t.rewrite_at(k)),
            }
        }
        Self::from_terms(done)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.iter().all(|t| t.first_redex(NormalizeOptions::default()).is_none())
    }

    /// Sandwich between `<q,t|` and `|Q,t>` and divide by `<q,t|Q,t>`.
    ///
    /// One derivative of S becomes the c-number derivative; a pair becomes
    /// `dS/dx*dS/dy - i*hbar*d[S]/dx/dy`.
    pub fn project_matrix_element(&self) -> Result<CNumberExpr, AlgebraError> {
        let mut out = Vec::new();
        for t in &self.terms {
            let mut funcs: Vec<(Atom, i32)> = t.scalars.clone();
            let mut sderivs: Vec<Var> = Vec::new();
            for f in &t.factors {
                match f {
                    OpFactor::Momentum(_) => {
                        return Err(AlgebraError::UnsubstitutedMomentum {
                            term: single(t).to_string(),
                        })
                    }
                    OpFactor::Func(a) => {
                        if !sderivs.is_empty() {
                            return Err(AlgebraError::NotNormalOrdered {
                                term: single(t).to_string(),
                            });
                        }
                        funcs.push((a.clone(), 1));
                    }
                    OpFactor::SDeriv(v) => sderivs.push(v.clone()),
                }
            }
            let base = Term {
                coeff: t.coeff,
                imag: t.imag,
                factors: funcs,
            };
            let s = |vs: Vec<Var>| (Atom::new("S").with_derivs(vs), 1);
            match sderivs.as_slice() {
                [] => out.push(base),
                [x] => {
                    let mut b = base;
                    b.factors.push(s(vec![x.clone()]));
                    out.push(b);
                }
                [x, y] => {
                    let mut prod = base.clone();
                    prod.factors.push(s(vec![x.clone()]));
                    prod.factors.push(s(vec![y.clone()]));
                    out.push(prod);
                    // -i*hbar * base * S_xy
                    let mut second = base;
                    if second.imag {
                        second.imag = false;
                    } else {
                        second.coeff = -second.coeff;
                        second.imag = true;
                    }
                    second.factors.push((Atom::new("hbar"), 1));
                    second.factors.push(s(vec![x.clone(), y.clone()]));
                    out.push(second);
                }
                _ => {
                    return Err(AlgebraError::MoreThanTwoSDerivs {
                        term: single(t).to_string(),
                    })
                }
            }
        }
        Ok(CNumberExpr::from_terms(out))
    }

    pub fn mentions_momentum(&self) -> bool {
        self.terms
            .iter()
            .any(|t| t.factors.iter().any(|f| matches!(f, OpFactor::Momentum(_))))
    }
}

fn single(t: &OpTerm) -> OperatorExpr {
    OperatorExpr {
        terms: vec![t.clone()],
    }
}

impl<'a> Add<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OperatorExpr::from_terms(terms)
    }
}

impl<'a> Sub<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(-Rational::one())
    }
}

impl<'a> Mul<&'a OperatorExpr> for &'a OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(a.times(b));
            }
        }
        OperatorExpr::from_terms(terms)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<OperatorExpr> for OperatorExpr {
            type Output = OperatorExpr;
            fn $m(self, rhs: OperatorExpr) -> OperatorExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        -&self
    }
}

fn term_body(t: &OpTerm) -> String {
    let (mut numer, denom) = cnum::split_powers(&t.scalars);
    numer.extend(t.factors.iter().map(|f| f.to_string()));
    cnum::format_term_body(t.coeff, t.imag, &numer, &denom)
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bodies = self
            .terms
            .iter()
            .map(|t| (t.coeff.is_negative(), term_body(t)))
            .collect();
        cnum::signed_join(f, bodies)
    }
}

/// Exact term-identity of canonical operator forms.
pub fn operator_equal(a: &OperatorExpr, b: &OperatorExpr) -> bool {
    a == b
}

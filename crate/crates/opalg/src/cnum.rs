//! Commutative c-number expressions with exact coefficients.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::atom::{Atom, SymbolClass};
use crate::canon::{self, Indexed};
use crate::error::AlgebraError;
use crate::index::{IndexKey, Rename, Var};
use crate::Rational;

/// `coeff * i^imag * prod(atom^power)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Rational,
    pub imag: bool,
    pub factors: Vec<(Atom, i32)>,
}

impl Term {
    pub fn constant(coeff: Rational) -> Self {
        Term {
            coeff,
            imag: false,
            factors: Vec::new(),
        }
    }

    pub fn has_factor(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.factors.iter().any(|(a, _)| pred(a))
    }

    fn times(&self, other: &Term) -> Term {
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
        let mut factors = this.factors;
        factors.extend(other.factors);
        Term {
            coeff,
            imag,
            factors,
        }
    }

    pub(crate) fn canonical(self) -> Term {
        let mut t = self;
        t.factors = contract_deltas(t.factors);
        canon::canonical_rename(t)
    }
}

impl Indexed for Term {
    type Key = (Vec<(Atom, i32)>, bool);

    fn occurrences(&self) -> Vec<(IndexKey, usize)> {
        self.factors
            .iter()
            .flat_map(|(a, p)| a.indices().map(move |i| (i.key(), p.unsigned_abs() as usize)))
            .collect()
    }

    fn renamed(&self, map: &HashMap<IndexKey, Rename>) -> Self {
        Term {
            coeff: self.coeff,
            imag: self.imag,
            factors: self.factors.iter().map(|(a, p)| (a.renamed(map), *p)).collect(),
        }
    }

    fn tidy(mut self) -> Self {
        self.factors = merge_factors(self.factors);
        self
    }

    fn key(&self) -> Self::Key {
        (self.factors.clone(), self.imag)
    }
}

pub(crate) fn merge_factors(factors: Vec<(Atom, i32)>) -> Vec<(Atom, i32)> {
    let mut fs: Vec<(Atom, i32)> = factors
        .into_iter()
        .map(|(a, p)| (a.normalized(), p))
        .collect();
    fs.sort();
    let mut out: Vec<(Atom, i32)> = Vec::with_capacity(fs.len());
    for (a, p) in fs {
        match out.last_mut() {
            Some((la, lp)) if *la == a => *lp += p,
            _ => out.push((a, p)),
        }
    }
    out.retain(|(_, p)| *p != 0);
    out
}

/// Contract Kronecker deltas by renaming one slot onto the other.
pub(crate) fn contract_deltas(mut factors: Vec<(Atom, i32)>) -> Vec<(Atom, i32)> {
    loop {
        let counts = {
            let t = Term {
                coeff: Rational::one(),
                imag: false,
                factors: factors.clone(),
            };
            canon::index_counts(&t)
        };
        let found = factors.iter().position(|(a, p)| {
            *p == 1
                && a.class() == SymbolClass::Delta
                && a.comps.len() == 2
                && a.comps[0].key() != a.comps[1].key()
                && (counts[&a.comps[0].key()] == 2 || counts[&a.comps[1].key()] == 2)
        });
        let Some(pos) = found else {
            return factors;
        };
        let (delta, _) = factors.remove(pos);
        let (x, y) = (&delta.comps[0], &delta.comps[1]);
        // Keep the slot whose other occurrence is external to the delta.
        let (keep, drop) = if counts[&y.key()] == 2 { (x, y) } else { (y, x) };
        let mut map = HashMap::new();
        map.insert(
            drop.key(),
            Rename {
                name: keep.name.clone(),
                flip: drop.pos.is_some() && drop.pos == keep.pos,
            },
        );
        factors = factors.iter().map(|(a, p)| (a.renamed(&map), *p)).collect();
    }
}

/// A canonical sum of commutative terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CNumberExpr {
    terms: Vec<Term>,
}

impl CNumberExpr {
    pub fn zero() -> Self {
        CNumberExpr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms(vec![Term::constant(c)])
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(n))
    }

    pub fn imag_unit() -> Self {
        Self::from_terms(vec![Term {
            coeff: Rational::one(),
            imag: true,
            factors: Vec::new(),
        }])
    }

    pub fn atom(a: Atom) -> Self {
        Self::from_terms(vec![Term {
            coeff: Rational::one(),
            imag: false,
            factors: vec![(a, 1)],
        }])
    }

    pub fn symbol(name: &str) -> Self {
        Self::atom(Atom::new(name))
    }

    /// Canonicalize: contract deltas, rename dummies, merge like terms, drop zeros.
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut canon: Vec<Term> = terms
            .into_iter()
            .filter(|t| !t.coeff.is_zero())
            .map(Term::canonical)
            .collect();
        canon.sort_by_key(|a| a.key());
        let mut out: Vec<Term> = Vec::with_capacity(canon.len());
        for t in canon {
            match out.last_mut() {
                Some(last) if last.key() == t.key() => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        CNumberExpr { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff * c,
                    ..t.clone()
                })
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Multiplicative inverse; only single-term expressions are invertible.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        match self.terms.as_slice() {
            [t] => {
                let mut coeff = t.coeff.recip();
                if t.imag {
                    // 1/i = -i
                    coeff = -coeff;
                }
                Ok(Self::from_terms(vec![Term {
                    coeff,
                    imag: t.imag,
                    factors: t.factors.iter().map(|(a, p)| (a.clone(), -p)).collect(),
                }]))
            }
            [] => Err(AlgebraError::NonMonomialDivision {
                expr: "0".to_string(),
            }),
            _ => Err(AlgebraError::NonMonomialDivision {
                expr: self.to_string(),
            }),
        }
    }

    pub fn powi(&self, n: i32) -> Result<Self, AlgebraError> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.inverse()?.pow(n.unsigned_abs()))
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &other.inverse()?)
    }

    /// Formal partial derivative by product and power rules.
    pub fn differentiate(&self, var: &Var) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            let t = match var.index() {
                Some(idx) if canon::dummies(t).contains(&idx.key()) => {
                    let mut avoid = canon::all_keys(t);
                    avoid.insert(idx.key());
                    let mut only = BTreeSet::new();
                    only.insert(idx.key());
                    rename_selected(t, &only, &avoid)
                }
                _ => t.clone(),
            };
            for (k, (atom, p)) in t.factors.iter().enumerate() {
                let Some(d) = atom.differentiate(var) else {
                    continue;
                };
                let mut factors = t.factors.clone();
                factors[k].1 = p - 1;
                factors.push((d, 1));
                out.push(Term {
                    coeff: t.coeff * Rational::from_integer(*p as i64),
                    imag: t.imag,
                    factors,
                });
            }
        }
        Self::from_terms(out)
    }

    /// Real part and imaginary-part coefficient, so that `e = re + i*im`.
    pub fn split_real_imag(&self) -> (Self, Self) {
        let re = self.terms.iter().filter(|t| !t.imag).cloned().collect();
        let im = self
            .terms
            .iter()
            .filter(|t| t.imag)
            .map(|t| Term {
                imag: false,
                ..t.clone()
            })
            .collect();
        (Self::from_terms(re), Self::from_terms(im))
    }

    pub fn mentions(&self, pred: impl Fn(&Atom) -> bool) -> bool {
        self.terms.iter().any(|t| t.has_factor(&pred))
    }

    pub fn mentions_name(&self, name: &str) -> bool {
        self.mentions(|a| a.name == name)
    }

    /// Terms whose factor list satisfies `pred`, as an expression.
    pub fn filter_terms(&self, pred: impl Fn(&Term) -> bool) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| pred(t)).cloned().collect())
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| !t.imag)
    }
}

fn rename_selected(t: &Term, which: &BTreeSet<IndexKey>, avoid: &BTreeSet<IndexKey>) -> Term {
    let mut taken = avoid.clone();
    let mut map = HashMap::new();
    for k in which {
        let fresh = canon::fresh_name(k.kind, &taken);
        taken.insert(IndexKey {
            name: fresh.clone(),
            kind: k.kind,
        });
        map.insert(
            k.clone(),
            Rename {
                name: fresh,
                flip: false,
            },
        );
    }
    t.renamed(&map)
}

impl<'a> Add<&'a CNumberExpr> for &'a CNumberExpr {
    type Output = CNumberExpr;
    fn add(self, rhs: &CNumberExpr) -> CNumberExpr {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        CNumberExpr::from_terms(terms)
    }
}

impl<'a> Sub<&'a CNumberExpr> for &'a CNumberExpr {
    type Output = CNumberExpr;
    fn sub(self, rhs: &CNumberExpr) -> CNumberExpr {
        self + &(-rhs)
    }
}

impl Neg for &CNumberExpr {
    type Output = CNumberExpr;
    fn neg(self) -> CNumberExpr {
        self.scale(-Rational::one())
    }
}

impl<'a> Mul<&'a CNumberExpr> for &'a CNumberExpr {
    type Output = CNumberExpr;
    fn mul(self, rhs: &CNumberExpr) -> CNumberExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(a.times(b));
            }
        }
        CNumberExpr::from_terms(terms)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CNumberExpr> for CNumberExpr {
            type Output = CNumberExpr;
            fn $m(self, rhs: CNumberExpr) -> CNumberExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for CNumberExpr {
    type Output = CNumberExpr;
    fn neg(self) -> CNumberExpr {
        -&self
    }
}

pub(crate) fn format_coeff(c: Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_power(atom: &Atom, p: i32) -> String {
    let base = atom.to_string();
    if p == 1 {
        base
    } else if atom.derivs.is_empty() {
        format!("{base}^{p}")
    } else {
        format!("({base})^{p}")
    }
}

/// Unsigned body of a term: `coeff*i*num/(den)`.
pub(crate) fn format_term_body(
    coeff: Rational,
    imag: bool,
    numer: &[String],
    denom: &[String],
) -> String {
    let mut parts: Vec<String> = Vec::new();
    let c = coeff.abs();
    if c != Rational::one() || (numer.is_empty() && !imag) {
        parts.push(format_coeff(c));
    }
    if imag {
        parts.push("i".to_string());
    }
    parts.extend(numer.iter().cloned());
    let mut s = parts.join("*");
    if !denom.is_empty() {
        s.push('/');
        if denom.len() == 1 && !denom[0].contains('/') {
            s.push_str(&denom[0]);
        } else {
            s.push('(');
            s.push_str(&denom.join("*"));
            s.push(')');
        }
    }
    s
}

pub(crate) fn signed_join(f: &mut fmt::Formatter<'_>, bodies: Vec<(bool, String)>) -> fmt::Result {
    if bodies.is_empty() {
        return write!(f, "0");
    }
    for (k, (neg, body)) in bodies.into_iter().enumerate() {
        match (k, neg) {
            (0, false) => write!(f, "{body}")?,
            (0, true) => write!(f, "-{body}")?,
            (_, false) => write!(f, " + {body}")?,
            (_, true) => write!(f, " - {body}")?,
        }
    }
    Ok(())
}

pub(crate) fn split_powers(factors: &[(Atom, i32)]) -> (Vec<String>, Vec<String>) {
    let numer = factors
        .iter()
        .filter(|(_, p)| *p > 0)
        .map(|(a, p)| format_power(a, *p))
        .collect();
    let denom = factors
        .iter()
        .filter(|(_, p)| *p < 0)
        .map(|(a, p)| format_power(a, -p))
        .collect();
    (numer, denom)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = split_powers(&self.factors);
        let body = format_term_body(self.coeff, self.imag, &n, &d);
        if self.coeff.is_negative() {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

impl fmt::Display for CNumberExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bodies = self
            .terms
            .iter()
            .map(|t| {
                let (n, d) = split_powers(&t.factors);
                (t.coeff.is_negative(), format_term_body(t.coeff, t.imag, &n, &d))
            })
            .collect();
        signed_join(f, bodies)
    }
}

/// True iff both canonical forms are term-identical.
pub fn expr_equal(a: &CNumberExpr, b: &CNumberExpr) -> bool {
    a == b
}

//! Text syntax for c-number and operator expressions.
//!
//! The grammar is documented in `docs/grammar.md`. The printers in
//! [`crate::cnum`] and [`crate::op`] emit text this parser reads back.

use crate::atom::{classify, is_compound_name, Atom, SymbolClass};
use crate::cnum::CNumberExpr;
use crate::error::AlgebraError;
use crate::index::{Index, Var, GREEK_NAMES};
use crate::op::OperatorExpr;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, AlgebraError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k];
        let start = k;
        if c.is_ascii_whitespace() {
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let n = src[start..k].parse::<i64>().map_err(|_| AlgebraError::Syntax {
                pos: start,
                message: "integer literal out of range".into(),
            })?;
            out.push((Tok::Int(n), start));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((Tok::Ident(src[start..k].to_string()), start));
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            _ => {
                return Err(AlgebraError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{}`", src[start..].chars().next().unwrap_or('?')),
                })
            }
        };
        out.push((tok, start));
        k += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Int(i64),
    Imag,
    Sym { atom: Atom, pos: usize },
    SDeriv { vars: Vec<Var>, pos: usize },
    Deriv { inner: Box<Ast>, vars: Vec<Var> },
    Sum(Vec<(bool, Ast)>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Pow(Box<Ast>, i32),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

fn syntax(pos: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Syntax {
        pos,
        message: message.into(),
    }
}

/// Split an index suffix such as `ij`, `munu` or `mui` into indices.
fn parse_suffix(s: &str, pos: usize) -> Result<Vec<Index>, AlgebraError> {
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        if let Some(g) = GREEK_NAMES.iter().filter(|g| rest.starts_with(**g)).max_by_key(|g| g.len()) {
            out.push(Index::down(g));
            rest = &rest[g.len()..];
            continue;
        }
        let c = rest.chars().next().expect("non-empty");
        if !c.is_ascii_lowercase() {
            return Err(syntax(pos, format!("bad index `{c}` in suffix `_{s}`")));
        }
        out.push(Index::spatial(&c.to_string()));
        rest = &rest[1..];
    }
    Ok(out)
}

/// Split `name_suffix` into its base name and lower indices.
fn split_ident(id: &str, pos: usize) -> Result<(String, Vec<Index>), AlgebraError> {
    if is_compound_name(id) {
        return Ok((id.to_string(), Vec::new()));
    }
    match id.split_once('_') {
        None => Ok((id.to_string(), Vec::new())),
        Some((base, suffix)) => {
            if suffix.is_empty() || suffix.contains('_') {
                return Err(syntax(pos, format!("malformed index suffix in `{id}`")));
            }
            Ok((base.to_string(), parse_suffix(suffix, pos)?))
        }
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.at + n).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), AlgebraError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Ast, AlgebraError> {
        let mut parts = Vec::new();
        let mut neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            parts.push((neg, self.term()?));
            match self.peek() {
                Tok::Plus => neg = false,
                Tok::Minus => neg = true,
                _ => break,
            }
            self.bump();
        }
        if parts.len() == 1 && !parts[0].0 {
            return Ok(parts.pop().expect("one part").1);
        }
        Ok(Ast::Sum(parts))
    }

    fn term(&mut self) -> Result<Ast, AlgebraError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Ast::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, AlgebraError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.exponent()?;
            return Ok(Ast::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32, AlgebraError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.bump();
        }
        let pos = self.pos();
        let n = match self.bump().0 {
            Tok::Int(n) => i32::try_from(n).map_err(|_| syntax(pos, "exponent out of range"))?,
            _ => return Err(syntax(pos, "expected an integer exponent")),
        };
        if paren {
            self.expect(Tok::RParen, "`)` after exponent")?;
        }
        Ok(if neg { -n } else { n })
    }

    fn primary(&mut self) -> Result<Ast, AlgebraError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Ast::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(id) => {
                self.bump();
                if id == "i" {
                    return Ok(Ast::Imag);
                }
                if id == "d" && *self.peek() == Tok::LBracket {
                    self.bump();
                    let inner = self.expr()?;
                    self.expect(Tok::RBracket, "`]`")?;
                    let vars = self.deriv_vars(pos)?;
                    return Ok(Ast::Deriv {
                        inner: Box::new(inner),
                        vars,
                    });
                }
                if id == "dS" {
                    let vars = self.deriv_vars(pos)?;
                    return Ok(Ast::SDeriv { vars, pos });
                }
                self.symbol(&id, pos)
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            t => Err(syntax(pos, format!("unexpected token {t:?}"))),
        }
    }

    /// One or more `/dt`, `/dq_i`, `/dq^mu` after a derivative head.
    fn deriv_vars(&mut self, pos: usize) -> Result<Vec<Var>, AlgebraError> {
        let mut vars = Vec::new();
        while *self.peek() == Tok::Slash && self.next_is_var() {
            self.bump();
            vars.push(self.var()?);
        }
        if vars.is_empty() {
            return Err(syntax(pos, "derivative needs at least one `/dt` or `/dq_...`"));
        }
        Ok(vars)
    }

    fn next_is_var(&self) -> bool {
        match self.peek_at(1) {
            Tok::Ident(id) => id == "dt" || id == "dq" || id.starts_with("dq_"),
            _ => false,
        }
    }

    fn var(&mut self) -> Result<Var, AlgebraError> {
        let (tok, pos) = self.bump();
        let Tok::Ident(id) = tok else {
            return Err(syntax(pos, "expected a differentiation variable"));
        };
        if id == "dt" {
            return Ok(Var::Time);
        }
        if id == "dq" {
            self.expect(Tok::Caret, "`^` or `_` after `dq`")?;
            let up = self.upper_index()?;
            return Ok(Var::Coord(up));
        }
        let (_, comps) = split_ident(&id, pos)?;
        match comps.as_slice() {
            [one] => Ok(Var::Coord(one.clone())),
            _ => Err(syntax(pos, format!("`{id}` must name exactly one coordinate"))),
        }
    }

    fn upper_index(&mut self) -> Result<Index, AlgebraError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Ident(g) if Index::is_greek_name(&g) => Ok(Index::up(&g)),
            _ => Err(syntax(pos, "expected a spacetime index name after `^`")),
        }
    }

    fn symbol(&mut self, id: &str, pos: usize) -> Result<Ast, AlgebraError> {
        let (base, mut comps) = split_ident(id, pos)?;
        let Some(class) = classify(&base) else {
            return Err(AlgebraError::UnknownSymbol { pos, name: base });
        };
        // Upper spacetime components: `b^mu`, `delta^mu_nu`.
        while *self.peek() == Tok::Caret {
            let Tok::Ident(next) = self.peek_at(1).clone() else {
                break;
            };
            let head = next.split('_').next().unwrap_or("");
            if !Index::is_greek_name(head) {
                break;
            }
            self.bump();
            let ipos = self.pos();
            self.bump();
            let (g, lower) = split_ident(&next, ipos)?;
            comps.push(Index::up(&g));
            comps.extend(lower);
        }
        if class == SymbolClass::Function && *self.peek() == Tok::LParen {
            // Argument list such as `(q,t)`: purely decorative.
            self.bump();
            loop {
                match self.bump() {
                    (Tok::Ident(_), _) => {}
                    (_, p) => return Err(syntax(p, "expected an argument name")),
                }
                match self.bump() {
                    (Tok::Comma, _) => continue,
                    (Tok::RParen, _) => break,
                    (_, p) => return Err(syntax(p, "expected `,` or `)` in argument list")),
                }
            }
        }
        Ok(Ast::Sym {
            atom: Atom::with_comps(&base, comps).normalized(),
            pos,
        })
    }
}

fn parse_ast(src: &str) -> Result<Ast, AlgebraError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

fn lower_c(ast: &Ast) -> Result<CNumberExpr, AlgebraError> {
    Ok(match ast {
        Ast::Int(n) => CNumberExpr::integer(*n),
        Ast::Imag => CNumberExpr::imag_unit(),
        Ast::Sym { atom, pos } => {
            if atom.class() == SymbolClass::Momentum {
                return Err(AlgebraError::NotAllowed {
                    pos: *pos,
                    what: atom.to_string(),
                    mode: "c-number",
                });
            }
            CNumberExpr::atom(atom.clone())
        }
        Ast::SDeriv { vars, .. } => CNumberExpr::atom(Atom::new("S").with_derivs(vars.clone())),
        Ast::Deriv { inner, vars } => {
            let mut e = lower_c(inner)?;
            for v in vars {
                e = e.differentiate(v);
            }
            e
        }
        Ast::Sum(parts) => {
            let mut acc = CNumberExpr::zero();
            for (neg, p) in parts {
                let e = lower_c(p)?;
                acc = if *neg { &acc - &e } else { &acc + &e };
            }
            acc
        }
        Ast::Mul(a, b) => &lower_c(a)? * &lower_c(b)?,
        Ast::Div(a, b) => lower_c(a)?.div(&lower_c(b)?)?,
        Ast::Neg(a) => -lower_c(a)?,
        Ast::Pow(a, n) => lower_c(a)?.powi(*n)?,
    })
}

/// Embed a commuting expression as an operator (functions of q and t only).
pub fn cnumber_to_operator(e: &CNumberExpr) -> Result<OperatorExpr, AlgebraError> {
    let mut acc = OperatorExpr::zero();
    for t in e.terms() {
        let mut term = OperatorExpr::scalar(t.coeff);
        if t.imag {
            term = &term * &OperatorExpr::imag_unit();
        }
        for (a, p) in &t.factors {
            let f = if a.is_constant() {
                let base = OperatorExpr::constant_atom(a.clone());
                if *p < 0 {
                    base.scalar_inverse()?.pow(p.unsigned_abs())
                } else {
                    base.pow(*p as u32)
                }
            } else if *p < 0 {
                return Err(AlgebraError::NotAllowed {
                    pos: 0,
                    what: format!("negative power of `{a}`"),
                    mode: "operator",
                });
            } else {
                OperatorExpr::func(a.clone()).pow(*p as u32)
            };
            term = &term * &f;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

fn lower_op(ast: &Ast) -> Result<OperatorExpr, AlgebraError> {
    Ok(match ast {
        Ast::Int(n) => OperatorExpr::scalar(Rational::from_integer(*n)),
        Ast::Imag => OperatorExpr::imag_unit(),
        Ast::Sym { atom, pos } => match atom.class() {
            SymbolClass::Constant | SymbolClass::Tensor | SymbolClass::Delta => {
                OperatorExpr::constant_atom(atom.clone())
            }
            SymbolClass::Function => OperatorExpr::func(atom.clone()),
            SymbolClass::Momentum => match atom.comps.as_slice() {
                [i] => OperatorExpr::momentum(i.clone()),
                _ => {
                    return Err(AlgebraError::NotAllowed {
                        pos: *pos,
                        what: atom.to_string(),
                        mode: "operator (momentum needs exactly one index)",
                    })
                }
            },
            SymbolClass::Action => {
                return Err(AlgebraError::NotAllowed {
                    pos: *pos,
                    what: "S".into(),
                    mode: "operator (only its first derivatives are operators)",
                })
            }
        },
        Ast::SDeriv { vars, pos } => match vars.as_slice() {
            [v] => OperatorExpr::sderiv(v.clone()),
            _ => return Err(AlgebraError::HigherActionDerivative { pos: *pos }),
        },
        Ast::Deriv { .. } => cnumber_to_operator(&lower_c(ast)?)?,
        Ast::Sum(parts) => {
            let mut acc = OperatorExpr::zero();
            for (neg, p) in parts {
                let e = lower_op(p)?;
                acc = if *neg { &acc - &e } else { &acc + &e };
            }
            acc
        }
        Ast::Mul(a, b) => &lower_op(a)? * &lower_op(b)?,
        Ast::Div(a, b) => {
            let d = lower_op(b)?;
            if !d.is_scalar() {
                return Err(AlgebraError::NonMonomialDivision { expr: d.to_string() });
            }
            &lower_op(a)? * &d.scalar_inverse()?
        }
        Ast::Neg(a) => -lower_op(a)?,
        Ast::Pow(a, n) => {
            let b = lower_op(a)?;
            if *n >= 0 {
                b.pow(*n as u32)
            } else {
                b.scalar_inverse()?.pow(n.unsigned_abs())
            }
        }
    })
}

/// Parse a commuting expression. `dS/dq_i` and `d[S]/dq_i` both denote the
/// c-number derivative of S.
pub fn parse_cnumber(src: &str) -> Result<CNumberExpr, AlgebraError> {
    lower_c(&parse_ast(src)?)
}

/// Parse an ordered operator expression. `dS/dq_i` is the operator derivative
/// of S; `d[...]/...` always denotes a function of the coordinates.
pub fn parse_operator(src: &str) -> Result<OperatorExpr, AlgebraError> {
    lower_op(&parse_ast(src)?)
}

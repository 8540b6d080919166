//! Symbols and their formal derivatives.
//!
//! An [`Atom`] is a named symbol with tensor components and an (unordered)
//! multiset of partial derivatives. Every atom is real-valued; the only
//! imaginary unit in this crate lives in term coefficients.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::index::{apply_rename, format_comps, Index, IndexKey, Rename, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolClass {
    /// Physical constant: `hbar`, `m`, `m0`, `c_light`.
    Constant,
    /// Constant coefficient matrix (`A`), symmetric in its two slots.
    Tensor,
    /// Kronecker delta / identity metric.
    Delta,
    /// Real function of the coordinates and time (`a`, `b_i`, `c`, `R`, `V`, ...).
    Function,
    /// The c-number action `S` (or the operator `S` through its derivatives).
    Action,
    /// Canonical momentum operator `p`; only legal inside operator expressions.
    Momentum,
}

const CONSTANTS: [&str; 4] = ["hbar", "m", "m0", "c_light"];
const FUNCTIONS: [&str; 13] = [
    "a", "b", "c", "R", "V", "alpha", "G", "F", "f", "g", "QP", "QK", "phi",
];

pub fn classify(name: &str) -> Option<SymbolClass> {
    if CONSTANTS.contains(&name) {
        Some(SymbolClass::Constant)
    } else if name == "A" {
        Some(SymbolClass::Tensor)
    } else if name == "delta" {
        Some(SymbolClass::Delta)
    } else if FUNCTIONS.contains(&name) {
        Some(SymbolClass::Function)
    } else if name == "S" {
        Some(SymbolClass::Action)
    } else if name == "p" {
        Some(SymbolClass::Momentum)
    } else {
        None
    }
}

/// Multi-character symbols that contain an underscore but take no indices.
pub(crate) fn is_compound_name(name: &str) -> bool {
    name == "c_light"
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub name: String,
    pub comps: Vec<Index>,
    pub derivs: Vec<Var>,
}

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom {
            name: name.to_string(),
            comps: Vec::new(),
            derivs: Vec::new(),
        }
    }

    pub fn with_comps(name: &str, comps: Vec<Index>) -> Self {
        Atom {
            name: name.to_string(),
            comps,
            derivs: Vec::new(),
        }
    }

    pub fn with_derivs(mut self, derivs: Vec<Var>) -> Self {
        self.derivs = derivs;
        self.normalized()
    }

    pub fn class(&self) -> SymbolClass {
        classify(&self.name).unwrap_or(SymbolClass::Function)
    }

    /// Constants, the coefficient matrix and the delta have vanishing derivatives.
    pub fn is_constant(&self) -> bool {
        matches!(
            self.class(),
            SymbolClass::Constant | SymbolClass::Tensor | SymbolClass::Delta
        )
    }

    pub fn is_action(&self) -> bool {
        self.class() == SymbolClass::Action
    }

    /// Formal partial derivative. `None` when the atom is constant.
    pub fn differentiate(&self, var: &Var) -> Option<Atom> {
        if self.is_constant() {
            return None;
        }
        let mut out = self.clone();
        out.derivs.push(var.clone());
        Some(out.normalized())
    }

    pub fn indices(&self) -> impl Iterator<Item = &Index> {
        self.comps
            .iter()
            .chain(self.derivs.iter().filter_map(Var::index))
    }

    /// Sorted derivative multi-index; symmetric slots sorted.
    pub fn normalized(mut self) -> Self {
        self.derivs.sort();
        if matches!(self.class(), SymbolClass::Tensor | SymbolClass::Delta) {
            self.comps.sort();
        }
        self
    }

    pub(crate) fn renamed(&self, map: &HashMap<IndexKey, Rename>) -> Atom {
        Atom {
            name: self.name.clone(),
            comps: self.comps.iter().map(|i| apply_rename(i, map)).collect(),
            derivs: self
                .derivs
                .iter()
                .map(|v| match v {
                    Var::Time => Var::Time,
                    Var::Coord(i) => Var::Coord(apply_rename(i, map)),
                })
                .collect(),
        }
        .normalized()
    }

    fn rank(&self) -> u8 {
        match self.class() {
            SymbolClass::Constant => 0,
            SymbolClass::Tensor => 1,
            SymbolClass::Delta => 2,
            SymbolClass::Function => 3,
            SymbolClass::Momentum => 4,
            SymbolClass::Action => 5,
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rank(), &self.name, self.derivs.len(), &self.comps, &self.derivs).cmp(&(
            other.rank(),
            &other.name,
            other.derivs.len(),
            &other.comps,
            &other.derivs,
        ))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = format!("{}{}", self.name, format_comps(&self.comps));
        if self.derivs.is_empty() {
            return write!(f, "{head}");
        }
        if self.is_action() && self.derivs.len() == 1 && self.comps.is_empty() {
            return write!(f, "dS/{}", self.derivs[0]);
        }
        write!(f, "d[{head}]")?;
        for v in &self.derivs {
            write!(f, "/{v}")?;
        }
        Ok(())
    }
}

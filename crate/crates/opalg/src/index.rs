use std::fmt;

/// Greek index names recognised by the parser, in canonical-renaming order.
pub const GREEK_NAMES: [&str; 6] = ["mu", "nu", "rho", "sigma", "kappa", "lambda"];

/// Latin index names available for canonical and fresh dummy renaming.
///
/// `u` is excluded so that concatenated suffixes such as `_nu` stay unambiguous.
pub const LATIN_NAMES: [&str; 12] = ["i", "j", "k", "l", "n", "r", "s", "v", "w", "x", "y", "z"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexKind {
    /// Euclidean configuration-space index (`i`, `j`, ...), no up/down distinction.
    Spatial,
    /// Spacetime index (`mu`, `nu`, ...) contracted with the (+,-,-,-) metric.
    Spacetime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Up,
    Down,
}

impl Position {
    pub fn flipped(self) -> Self {
        match self {
            Position::Up => Position::Down,
            Position::Down => Position::Up,
        }
    }
}

/// A tensor or derivative index. Spacetime indices always carry a position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub name: String,
    pub kind: IndexKind,
    pub pos: Option<Position>,
}

impl Index {
    pub fn spatial(name: &str) -> Self {
        Index {
            name: name.to_string(),
            kind: IndexKind::Spatial,
            pos: None,
        }
    }

    pub fn up(name: &str) -> Self {
        Index {
            name: name.to_string(),
            kind: IndexKind::Spacetime,
            pos: Some(Position::Up),
        }
    }

    pub fn down(name: &str) -> Self {
        Index {
            name: name.to_string(),
            kind: IndexKind::Spacetime,
            pos: Some(Position::Down),
        }
    }

    pub fn flipped(&self) -> Self {
        Index {
            pos: self.pos.map(Position::flipped),
            ..self.clone()
        }
    }

    /// Identity of the index for contraction purposes (position ignored).
    pub fn key(&self) -> IndexKey {
        IndexKey {
            name: self.name.clone(),
            kind: self.kind,
        }
    }

    pub fn is_greek_name(name: &str) -> bool {
        GREEK_NAMES.contains(&name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexKey {
    pub name: String,
    pub kind: IndexKind,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(Position::Up) => write!(f, "^{}", self.name),
            _ => write!(f, "_{}", self.name),
        }
    }
}

/// Component suffix: consecutive lower indices share one underscore (`_ij`, `_munu`).
pub(crate) fn format_comps(comps: &[Index]) -> String {
    let mut out = String::new();
    let mut lower_open = false;
    for c in comps {
        match c.pos {
            Some(Position::Up) => {
                out.push('^');
                out.push_str(&c.name);
                lower_open = false;
            }
            _ => {
                if !lower_open {
                    out.push('_');
                    lower_open = true;
                }
                out.push_str(&c.name);
            }
        }
    }
    out
}

/// A differentiation variable: the time operator or a coordinate component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Time,
    Coord(Index),
}

impl Var {
    pub fn index(&self) -> Option<&Index> {
        match self {
            Var::Time => None,
            Var::Coord(i) => Some(i),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Time => write!(f, "dt"),
            Var::Coord(i) => write!(f, "dq{i}"),
        }
    }
}

/// Renaming of an index: its new name, and whether its position flips.
#[derive(Clone, Debug)]
pub(crate) struct Rename {
    pub name: String,
    pub flip: bool,
}

pub(crate) fn apply_rename(
    index: &Index,
    map: &std::collections::HashMap<IndexKey, Rename>,
) -> Index {
    match map.get(&index.key()) {
        None => index.clone(),
        Some(r) => Index {
            name: r.name.clone(),
            kind: index.kind,
            pos: if r.flip {
                index.pos.map(Position::flipped)
            } else {
                index.pos
            },
        },
    }
}

pub(crate) fn pool(kind: IndexKind) -> &'static [&'static str] {
    match kind {
        IndexKind::Spatial => &LATIN_NAMES,
        IndexKind::Spacetime => &GREEK_NAMES,
    }
}

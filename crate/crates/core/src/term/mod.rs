//! Terms of the group language extended by unary automorphism symbols.

mod constants;
mod decompose;
mod normal;
mod parse;

pub use constants::translate_constant_equation;
pub use decompose::{commutator_decompose, CommutatorFactor, DecomposedTerm};
pub use normal::{evaluate, normalize, AutDomain, Binding, Literal, NormalTerm};
pub use parse::{parse_equation, parse_system, parse_term, Scope};

use std::fmt;

use crate::group::{Elem, FiniteGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn flip_if(self, cond: bool) -> Sign {
        if cond {
            self.flip()
        } else {
            self
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

/// Abstract syntax of a term. Commutators and conjugates are kept as written; `normalize`
/// expands them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Identity,
    /// Variable `x_index` (1-based) raised to `sign`.
    Var { index: usize, sign: Sign },
    /// Constant element; only allowed when the binding enables constants.
    Const(Elem),
    Product(Vec<Term>),
    Inverse(Box<Term>),
    /// Automorphism symbol applied to a term.
    Apply(String, Box<Term>),
    /// `[a, b] = a^{-1} b^{-1} a b`
    Commutator(Box<Term>, Box<Term>),
    /// `a^b = b^{-1} a b`
    Conjugate(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var { index, sign: Sign::Plus }
    }

    pub fn inverse(t: Term) -> Term {
        Term::Inverse(Box::new(t))
    }

    pub fn apply(label: impl Into<String>, t: Term) -> Term {
        Term::Apply(label.into(), Box::new(t))
    }

    pub fn commutator(a: Term, b: Term) -> Term {
        Term::Commutator(Box::new(a), Box::new(b))
    }

    pub fn conjugate(a: Term, b: Term) -> Term {
        Term::Conjugate(Box::new(a), Box::new(b))
    }

    /// Largest variable index occurring in the term (0 if none).
    pub fn max_var(&self) -> usize {
        match self {
            Term::Identity | Term::Const(_) => 0,
            Term::Var { index, .. } => *index,
            Term::Product(ts) => ts.iter().map(Term::max_var).max().unwrap_or(0),
            Term::Inverse(t) | Term::Apply(_, t) => t.max_var(),
            Term::Commutator(a, b) | Term::Conjugate(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn has_constants(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::Identity | Term::Var { .. } => false,
            Term::Product(ts) => ts.iter().any(Term::has_constants),
            Term::Inverse(t) | Term::Apply(_, t) => t.has_constants(),
            Term::Commutator(a, b) | Term::Conjugate(a, b) => a.has_constants() || b.has_constants(),
        }
    }

    /// Replaces `x_j` by `subs[j-1]`, inverting where the variable carried a minus sign.
    pub fn substitute(&self, subs: &[Term]) -> Term {
        match self {
            Term::Identity => Term::Identity,
            Term::Const(c) => Term::Const(*c),
            Term::Var { index, sign } => {
                let t = subs[index - 1].clone();
                if sign.is_minus() {
                    Term::inverse(t)
                } else {
                    t
                }
            }
            Term::Product(ts) => Term::Product(ts.iter().map(|t| t.substitute(subs)).collect()),
            Term::Inverse(t) => Term::inverse(t.substitute(subs)),
            Term::Apply(l, t) => Term::apply(l.clone(), t.substitute(subs)),
            Term::Commutator(a, b) => Term::commutator(a.substitute(subs), b.substitute(subs)),
            Term::Conjugate(a, b) => Term::conjugate(a.substitute(subs), b.substitute(subs)),
        }
    }

    /// Display with constants printed by element name.
    pub fn display<'a>(&'a self, group: &'a FiniteGroup) -> TermDisplay<'a> {
        TermDisplay { term: self, group: Some(group) }
    }
}

/// An equation `lhs = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub provenance: Option<String>,
}

impl Equation {
    pub fn new(lhs: Term) -> Equation {
        Equation { lhs, provenance: None }
    }

    /// `left = right`, moved to `left * right^{-1} = 1`.
    pub fn from_sides(left: Term, right: Term) -> Equation {
        match right {
            Term::Identity => Equation::new(left),
            right => Equation::new(Term::Product(vec![left, Term::inverse(right)])),
        }
    }

    pub fn with_provenance(mut self, tag: impl Into<String>) -> Equation {
        self.provenance = Some(tag.into());
        self
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    group: Option<&'a FiniteGroup>,
}

impl TermDisplay<'_> {
    fn sub<'b>(&'b self, term: &'b Term) -> TermDisplay<'b> {
        TermDisplay { term, group: self.group }
    }

    /// Writes the term so that it parses back as a single atom.
    fn atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Identity | Term::Const(_) | Term::Apply(..) | Term::Commutator(..) => write!(f, "{self}"),
            Term::Var { sign: Sign::Plus, .. } => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Identity => write!(f, "1"),
            Term::Var { index, sign: Sign::Plus } => write!(f, "x{index}"),
            Term::Var { index, sign: Sign::Minus } => write!(f, "x{index}^-1"),
            Term::Const(c) => match self.group {
                Some(g) => write!(f, "@{}", g.element_name(*c)),
                None => write!(f, "@{c}"),
            },
            Term::Product(ts) if ts.is_empty() => write!(f, "1"),
            Term::Product(ts) => {
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " * ")?;
                    }
                    match t {
                        Term::Product(_) => write!(f, "({})", self.sub(t))?,
                        _ => write!(f, "{}", self.sub(t))?,
                    }
                }
                Ok(())
            }
            Term::Inverse(t) => {
                self.sub(t).atom(f)?;
                write!(f, "^-1")
            }
            Term::Apply(l, t) => write!(f, "{l}({})", self.sub(t)),
            Term::Commutator(a, b) => write!(f, "[{}, {}]", self.sub(a), self.sub(b)),
            Term::Conjugate(a, b) => {
                self.sub(a).atom(f)?;
                write!(f, "^")?;
                match **b {
                    // `^1` would read as an integer exponent
                    Term::Identity => write!(f, "(1)"),
                    _ => self.sub(b).atom(f),
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", TermDisplay { term: self, group: None })
    }
}

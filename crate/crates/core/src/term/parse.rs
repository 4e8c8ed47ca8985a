//! Recursive-descent parser for terms and equation systems.
//!
//! ```text
//! term   := factor { ["*"] factor }
//! factor := atom [ "^" ( signed-int | atom ) ]
//! atom   := "1" | var | const | label "(" term ")" | "(" term ")" | "[" term "," term "]"
//! var    := "x" digits          (bare x, y, z abbreviate x1, x2, x3)
//! const  := "@" name
//! ```
//!
//! `a^b` with an atom exponent is the conjugate `b^{-1} a b`; integer exponents expand to
//! repeated products, negative ones to the inverse of that product.

use super::{Equation, Sign, Term};
use crate::error::{Error, Result};
use crate::group::Elem;

/// Resolves the names a term may mention.
pub trait Scope {
    fn is_aut_label(&self, label: &str) -> bool;

    fn constant(&self, _name: &str) -> Option<Elem> {
        None
    }
}

/// Largest integer exponent accepted; exponents expand into repeated products.
const MAX_EXPONENT: u64 = 1_000;

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    arity: Option<usize>,
    scope: &'a dyn Scope,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.text, at, message))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.err(self.pos, format!("expected `{c}`, found `{d}`")),
            None => self.err(self.pos, format!("expected `{c}`, found end of input")),
        }
    }

    fn starts_atom(c: char) -> bool {
        c == '1' || c == '@' || c == '(' || c == '[' || is_ident_start(c)
    }

    fn term(&mut self) -> Result<Term> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(c) if Self::starts_atom(c) => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Term::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Term> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let start = {
            self.skip_ws();
            self.pos
        };
        let negative = if self.peek_raw() == Some('-') {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        };
        let digits: String = self.text[self.pos..].chars().take_while(|c| c.is_ascii_digit()).collect();
        if !digits.is_empty() {
            self.pos += digits.len();
            let k: u64 = digits.parse().or_else(|_| self.err(start, "exponent too large"))?;
            if k > MAX_EXPONENT {
                return self.err(start, format!("exponent {k} exceeds {MAX_EXPONENT}"));
            }
            let power = match k {
                0 => Term::Identity,
                1 => base,
                k => Term::Product(vec![base; k as usize]),
            };
            return Ok(if negative && k != 0 { Term::inverse(power) } else { power });
        }
        if negative {
            return self.err(start, "expected an integer after `-` in exponent");
        }
        let exponent = self.atom()?;
        Ok(Term::conjugate(base, exponent))
    }

    fn atom(&mut self) -> Result<Term> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek_raw() {
            None => self.err(start, "unexpected end of input"),
            Some('1') => {
                self.pos += 1;
                if matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                    return self.err(start, "integer literals other than 1 are not terms");
                }
                Ok(Term::Identity)
            }
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(')')?;
                Ok(t)
            }
            Some('[') => {
                self.pos += 1;
                let a = self.term()?;
                self.expect(',')?;
                let b = self.term()?;
                self.expect(']')?;
                Ok(Term::commutator(a, b))
            }
            Some('@') => {
                self.pos += 1;
                let name = self.constant_name();
                if name.is_empty() {
                    return self.err(start, "expected a constant name after `@`");
                }
                match self.scope.constant(name) {
                    Some(c) => Ok(Term::Const(c)),
                    None => self.err(start, format!("unknown constant `{name}`")),
                }
            }
            Some(c) if is_ident_start(c) => {
                let ident: &str = {
                    let rest = &self.text[self.pos..];
                    let len = rest.find(|c: char| !is_ident_char(c)).unwrap_or(rest.len());
                    &rest[..len]
                };
                self.pos += ident.len();
                let followed_by_paren = self.peek() == Some('(');
                if let Some(index) = var_index(ident) {
                    if followed_by_paren && !matches!(ident, "x" | "y" | "z") {
                        return self.err(start, format!("`{ident}` is a variable, not an automorphism"));
                    }
                    if !followed_by_paren {
                        return self.variable(start, index);
                    }
                }
                if !followed_by_paren {
                    return self.err(start, format!("unknown identifier `{ident}`"));
                }
                if !self.scope.is_aut_label(ident) {
                    return self.err(start, format!("unknown automorphism label `{ident}`"));
                }
                self.expect('(')?;
                let inner = self.term()?;
                self.expect(')')?;
                Ok(Term::apply(ident, inner))
            }
            Some(c) => self.err(start, format!("unexpected character `{c}`")),
        }
    }

    fn variable(&self, start: usize, index: usize) -> Result<Term> {
        if index == 0 {
            return self.err(start, "variables are numbered from 1");
        }
        if let Some(n) = self.arity {
            if index > n {
                return self.err(start, format!("variable x{index} out of range for arity {n}"));
            }
        }
        Ok(Term::Var { index, sign: Sign::Plus })
    }

    /// A run of balanced parenthesized or bracketed groups such as `(1,2)(3,4)`, or a run of
    /// characters up to a delimiter.
    fn constant_name(&mut self) -> &'a str {
        let rest = &self.text[self.pos..];
        let len = if rest.starts_with(['(', '[']) {
            let mut len = 0;
            while let Some(n) = balanced_group(&rest[len..]) {
                len += n;
            }
            len
        } else {
            rest.find(|c: char| c.is_whitespace() || "*^,()[]=@".contains(c))
                .unwrap_or(rest.len())
        };
        self.pos += len;
        &rest[..len]
    }
}

/// Length of the balanced group at the start of `s`, if `s` starts with one.
fn balanced_group(s: &str) -> Option<usize> {
    let open = s.chars().next().filter(|c| *c == '(' || *c == '[')?;
    let close = if open == '(' { ')' } else { ']' };
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                return Some(i + 1);
            }
        }
    }
    None
}

fn var_index(ident: &str) -> Option<usize> {
    match ident {
        "x" => Some(1),
        "y" => Some(2),
        "z" => Some(3),
        _ => {
            let digits = ident.strip_prefix('x')?;
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            digits.parse().ok()
        }
    }
}

/// Parses a term; `arity` bounds variable indices when given.
pub fn parse_term(text: &str, arity: Option<usize>, scope: &dyn Scope) -> Result<Term> {
    let mut p = Parser { text, pos: 0, arity, scope };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < text.len() {
        return p.err(p.pos, format!("unexpected `{}`", &text[p.pos..]));
    }
    Ok(t)
}

/// `<term>` meaning `= 1`, or `<term> = <term>`.
pub fn parse_equation(text: &str, arity: Option<usize>, scope: &dyn Scope) -> Result<Equation> {
    match text.find('=') {
        None => Ok(Equation::new(parse_term(text, arity, scope)?)),
        Some(i) => {
            let left = parse_term(&text[..i], arity, scope)?;
            let right = parse_term(&text[i + 1..], arity, scope).map_err(|e| match e {
                Error::Parse { pos, message } => Error::parse(text, pos.offset + i + 1, message),
                other => other,
            })?;
            Ok(Equation::from_sides(left, right))
        }
    }
}

/// One equation per non-empty line; `#` starts a comment.
pub fn parse_system(text: &str, arity: Option<usize>, scope: &dyn Scope) -> Result<Vec<Equation>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let eq = parse_equation(body, arity, scope).map_err(|e| e.at_line(ln + 1))?;
        out.push(eq.with_provenance(format!("line {}", ln + 1)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Labels(&'static [&'static str]);

    impl Scope for Labels {
        fn is_aut_label(&self, label: &str) -> bool {
            self.0.contains(&label)
        }

        fn constant(&self, name: &str) -> Option<Elem> {
            match name {
                "c" => Some(3),
                "(1,2)" => Some(1),
                "(1,2)(3,4)" => Some(2),
                _ => None,
            }
        }
    }

    const PQ: Labels = Labels(&["p", "q"]);

    fn parse(s: &str) -> Term {
        parse_term(s, Some(3), &PQ).unwrap()
    }

    fn parse_err(s: &str) -> String {
        parse_term(s, Some(3), &PQ).unwrap_err().to_string()
    }

    #[test]
    fn commutator_with_automorphism() {
        assert_eq!(
            parse("[x1, p(x2)]"),
            Term::commutator(Term::var(1), Term::apply("p", Term::var(2)))
        );
    }

    #[test]
    fn inverse_and_nested_apply() {
        assert_eq!(
            parse("x1^-1 * p(q(x1))"),
            Term::Product(vec![
                Term::inverse(Term::var(1)),
                Term::apply("p", Term::apply("q", Term::var(1)))
            ])
        );
    }

    #[test]
    fn constants() {
        assert_eq!(parse("x1 * @c"), Term::Product(vec![Term::var(1), Term::Const(3)]));
        assert_eq!(parse("@(1,2) x1"), Term::Product(vec![Term::Const(1), Term::var(1)]));
        assert_eq!(parse("@(1,2)(3,4)^-1"), Term::inverse(Term::Const(2)));
        assert!(parse_err("x1 * @d").contains("unknown constant `d`"));
    }

    #[test]
    fn exponents() {
        assert_eq!(parse("x1^0"), Term::Identity);
        assert_eq!(parse("x1^2"), Term::Product(vec![Term::var(1), Term::var(1)]));
        assert_eq!(parse("x1^-2"), Term::inverse(Term::Product(vec![Term::var(1), Term::var(1)])));
        assert_eq!(parse("x1^x2"), Term::conjugate(Term::var(1), Term::var(2)));
        assert_eq!(parse("x1^(1)"), Term::conjugate(Term::var(1), Term::Identity));
    }

    #[test]
    fn aliases_and_juxtaposition() {
        assert_eq!(parse("x y"), Term::Product(vec![Term::var(1), Term::var(2)]));
    }

    #[test]
    fn errors_are_anchored() {
        let e = parse_err("x1 * r(x2)");
        assert!(e.contains("1:6") && e.contains("unknown automorphism label `r`"), "{e}");
        let e = parse_err("x1 * x4");
        assert!(e.contains("1:6") && e.contains("out of range"), "{e}");
        let e = parse_err("[x1, x2");
        assert!(e.contains("expected `]`"), "{e}");
        let e = parse_err("x1 )");
        assert!(e.contains("1:4"), "{e}");
        assert!(parse_err("x0").contains("numbered from 1"));
    }

    #[test]
    fn equations_move_right_side() {
        let eq = parse_equation("x1 = p(x2)", Some(2), &PQ).unwrap();
        assert_eq!(
            eq.lhs,
            Term::Product(vec![Term::var(1), Term::inverse(Term::apply("p", Term::var(2)))])
        );
        let eq = parse_equation("x1 = 1", Some(2), &PQ).unwrap();
        assert_eq!(eq.lhs, Term::var(1));
        let err = parse_equation("x1 = r(x2)", Some(2), &PQ).unwrap_err().to_string();
        assert!(err.contains("1:6"), "{err}");
    }

    #[test]
    fn system_lines() {
        let sys = parse_system("# header\n[x1, x2]\n\nx1 = x2 # trailing\n", Some(2), &PQ).unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys[1].provenance.as_deref(), Some("line 4"));
        let err = parse_system("x1\nx1 *\n", Some(2), &PQ).unwrap_err().to_string();
        assert!(err.starts_with("parse error at 2:"), "{err}");
    }
}

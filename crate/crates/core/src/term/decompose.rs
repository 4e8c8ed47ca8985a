//! Collects a two-variable term into `u(x) · v(y) · ∏ ([φ_i(x), ψ_i(y)]^{±1})^{w_i}`.
//!
//! Scanning left to right keeps the prefix in the form `Px · Py · F_1 ⋯ F_r`. A y-literal `l` joins
//! `Py` and conjugates every `F_i` by `l`. An x-literal `l` is moved left through `Py = Y_1 ⋯ Y_m`
//! with `Y l = l Y [Y, l]`, which yields `l · Py · ∏_i [Y_i, l]^{Y_{i+1} ⋯ Y_m}` in front of the
//! conjugated old factors. Letter commutators `[ψ(y)^δ, φ(x)^ε]` are then rewritten to a
//! conjugate of `[φ(x), ψ(y)]^{±1}`.

use super::normal::{evaluate, normalize, Binding, Literal, NormalTerm};
use super::{Sign, Term};
use crate::error::{Error, Result};
use crate::group::{AutGroup, FiniteGroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorFactor {
    /// Automorphism applied to `x`.
    pub phi: String,
    /// Automorphism applied to `y`.
    pub psi: String,
    pub exponent: Sign,
    pub conjugator: Term,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposedTerm {
    /// Term in `x1` only.
    pub u: Term,
    /// Term in `x2` only.
    pub v: Term,
    pub factors: Vec<CommutatorFactor>,
}

fn apply_label(label: &str, t: Term) -> Term {
    if label == "id" {
        t
    } else {
        Term::apply(label, t)
    }
}

impl DecomposedTerm {
    /// `u · v · ∏ ([φ(x1), ψ(x2)]^{±1})^{w}` as a term.
    pub fn reassemble(&self) -> Term {
        let mut parts = vec![self.u.clone(), self.v.clone()];
        for f in &self.factors {
            let c = Term::commutator(apply_label(&f.phi, Term::var(1)), apply_label(&f.psi, Term::var(2)));
            let c = if f.exponent.is_minus() { Term::inverse(c) } else { c };
            parts.push(Term::conjugate(c, f.conjugator.clone()));
        }
        Term::Product(parts)
    }
}

#[derive(Clone)]
struct Pending {
    /// x-literal and y-literal of `[a^ε, b^δ]`, with the outer sign.
    x: Literal<usize>,
    y: Literal<usize>,
    sign: Sign,
    conjugator: Vec<Literal<usize>>,
}

fn literals_term(lits: Vec<Literal<usize>>, b: &Binding<'_>) -> Term {
    NormalTerm { literals: lits, constant: None }.reduced().to_term(b)
}

/// Decomposes `w(x1, x2)` and verifies the result on every pair of group elements.
pub fn commutator_decompose(w: &Term, g: &FiniteGroup, auts: &AutGroup) -> Result<DecomposedTerm> {
    if w.max_var() > 2 {
        return Err(Error::validation("decomposition", "the term must use only x1 and x2"));
    }
    if w.has_constants() {
        return Err(Error::validation("decomposition", "constants are not allowed"));
    }
    let b = Binding::new(g, auts);
    let n = normalize(w, &b)?;
    let mut px: Vec<Literal<usize>> = Vec::new();
    let mut py: Vec<Literal<usize>> = Vec::new();
    let mut factors: Vec<Pending> = Vec::new();
    for l in n.literals {
        for f in &mut factors {
            f.conjugator.push(l.clone());
        }
        if l.var == 2 {
            py.push(l);
            continue;
        }
        let mut fresh: Vec<Pending> = Vec::with_capacity(py.len());
        for i in 0..py.len() {
            // [Y_i, l] = [l, Y_i]^{-1}
            fresh.push(Pending {
                x: l.clone(),
                y: py[i].clone(),
                sign: Sign::Minus,
                conjugator: py[i + 1..].to_vec(),
            });
        }
        px.push(l);
        fresh.append(&mut factors);
        factors = fresh;
    }

    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let a = Literal { sign: Sign::Plus, ..f.x.clone() };
        let bb = Literal { sign: Sign::Plus, ..f.y.clone() };
        // [a^ε, b^δ] = ([a, b]^η)^c
        let (eta, mut c) = match (f.x.sign, f.y.sign) {
            (Sign::Plus, Sign::Plus) => (Sign::Plus, vec![]),
            (Sign::Minus, Sign::Plus) => (Sign::Minus, vec![a.inverse()]),
            (Sign::Plus, Sign::Minus) => (Sign::Minus, vec![bb.inverse()]),
            (Sign::Minus, Sign::Minus) => (Sign::Plus, vec![bb.inverse(), a.inverse()]),
        };
        c.extend(f.conjugator);
        let exponent = if f.sign.is_minus() { eta.flip() } else { eta };
        out.push(CommutatorFactor {
            phi: auts.label(a.aut).to_string(),
            psi: auts.label(bb.aut).to_string(),
            exponent,
            conjugator: literals_term(c, &b),
        });
    }
    let d = DecomposedTerm { u: literals_term(px, &b), v: literals_term(py, &b), factors: out };
    verify(w, &d, &b)?;
    Ok(d)
}

fn verify(w: &Term, d: &DecomposedTerm, b: &Binding<'_>) -> Result<()> {
    let re = d.reassemble();
    for x in b.group.elements() {
        for y in b.group.elements() {
            let lhs = evaluate(w, &[x, y], b)?;
            let rhs = evaluate(&re, &[x, y], b)?;
            if lhs != rhs {
                return Err(Error::Internal(format!(
                    "commutator decomposition differs from the source at ({}, {})",
                    b.group.element_name(x),
                    b.group.element_name(y)
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, compute_full_aut};
    use crate::term::parse_term;

    fn setup() -> (FiniteGroup, AutGroup) {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 100).unwrap();
        (s3, auts)
    }

    #[test]
    fn already_a_commutator() {
        let (s3, auts) = setup();
        let b = Binding::new(&s3, &auts);
        let w = parse_term("[x1, a1(x2)]", Some(2), &b).unwrap();
        let d = commutator_decompose(&w, &s3, &auts).unwrap();
        assert_eq!(d.u, Term::Identity);
        assert_eq!(d.v, Term::Identity);
        assert_eq!(d.factors.len(), 1);
        let f = &d.factors[0];
        assert_eq!((f.phi.as_str(), f.psi.as_str(), f.exponent), ("id", "a1", Sign::Plus));
        assert_eq!(f.conjugator, Term::Identity);
    }

    #[test]
    fn ordered_product_has_no_factors() {
        let (s3, auts) = setup();
        let d = commutator_decompose(&Term::Product(vec![Term::var(1), Term::var(2)]), &s3, &auts).unwrap();
        assert_eq!((d.u, d.v, d.factors.len()), (Term::var(1), Term::var(2), 0));
    }

    #[test]
    fn swapped_product_gives_inverse_commutator() {
        let (s3, auts) = setup();
        let d = commutator_decompose(&Term::Product(vec![Term::var(2), Term::var(1)]), &s3, &auts).unwrap();
        assert_eq!((d.u.clone(), d.v.clone()), (Term::var(1), Term::var(2)));
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].exponent, Sign::Minus);
        assert_eq!(d.factors[0].conjugator, Term::Identity);
    }

    #[test]
    fn mixed_signs_and_automorphisms() {
        let (s3, auts) = setup();
        let b = Binding::new(&s3, &auts);
        for text in [
            "x2^-1 x1^-1 a2(x2) a3(x1) x2",
            "a1(x2)^-1 x1 x1 a4(x2) x1^-1",
            "[x2, x1]^x2 * x1",
            "x2 x2 x2 x1^-1 x1^-1",
        ] {
            let w = parse_term(text, Some(2), &b).unwrap();
            commutator_decompose(&w, &s3, &auts).unwrap();
        }
    }

    #[test]
    fn rejects_extra_variables() {
        let (s3, auts) = setup();
        assert!(commutator_decompose(&Term::var(3), &s3, &auts).is_err());
    }
}

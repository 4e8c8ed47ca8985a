//! Rewrites `c_0 x_1 c_1 ⋯ x_k c_k = 1` as an equation with inner automorphisms and one
//! trailing constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::normal::{evaluate, Binding};
use super::{Equation, Term};
use crate::error::{Error, Result};
use crate::group::{inner_automorphisms, Elem, FiniteGroup, Subgroup, ID};

/// Assignments checked exhaustively up to this many; above it a seeded sample is used.
const EXHAUSTIVE_LIMIT: u128 = 1_000_000;
const SAMPLE_SIZE: usize = 20_000;

/// `coeffs = [c_0, ..., c_k]` gives `φ_1(x_1) ⋯ φ_k(x_k) · c = 1` where `φ_i` is conjugation by
/// `(c_0 ⋯ c_{i-1})^{-1}` and `c = c_0 ⋯ c_k`.
///
/// The automorphisms are written `inn_<h>`; they resolve in any automorphism group built with
/// inner aliases that contains `Inn(G)`.
pub fn translate_constant_equation(coeffs: &[Elem], g: &FiniteGroup) -> Result<Equation> {
    if coeffs.is_empty() {
        return Err(Error::validation("constant equation", "at least one coefficient is required"));
    }
    if let Some(&c) = coeffs.iter().find(|&&c| c >= g.order()) {
        return Err(Error::validation("constant equation", format!("coefficient {c} is not a group element")));
    }
    let k = coeffs.len() - 1;
    let mut prefix = coeffs[0];
    let mut factors = Vec::with_capacity(k + 1);
    for (i, &c) in coeffs.iter().enumerate().skip(1) {
        let h = g.inv(prefix);
        factors.push(if h == ID { Term::var(i) } else { Term::apply(format!("inn_{h}"), Term::var(i)) });
        prefix = g.mul(prefix, c);
    }
    if prefix != ID {
        factors.push(Term::Const(prefix));
    }
    let lhs = match factors.len() {
        0 => Term::Identity,
        1 => factors.pop().unwrap(),
        _ => Term::Product(factors),
    };
    let eq = Equation::new(lhs).with_provenance("constant equation");
    verify(coeffs, &eq, g)?;
    Ok(eq)
}

fn verify(coeffs: &[Elem], eq: &Equation, g: &FiniteGroup) -> Result<()> {
    let inn = inner_automorphisms(g, &Subgroup::whole(g));
    let b = Binding::new(g, &inn).with_constants(true);
    let k = coeffs.len() - 1;
    let mut source = vec![Term::Const(coeffs[0])];
    for (i, &c) in coeffs.iter().enumerate().skip(1) {
        source.push(Term::var(i));
        source.push(Term::Const(c));
    }
    let source = Term::Product(source);
    let check = |point: &[Elem]| -> Result<()> {
        if evaluate(&source, point, &b)? != evaluate(&eq.lhs, point, &b)? {
            return Err(Error::Internal("constant equation translation changed the solution set".into()));
        }
        Ok(())
    };
    let n = g.order();
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let mut point = vec![ID; k];
    if total <= EXHAUSTIVE_LIMIT {
        for code in 0..total as usize {
            let mut rest = code;
            for slot in point.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            check(&point)?;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        for _ in 0..SAMPLE_SIZE {
            for slot in point.iter_mut() {
                *slot = rng.gen_range(0..n);
            }
            check(&point)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn trivial_constants() {
        let s3 = catalog::symmetric(3);
        let eq = translate_constant_equation(&[ID, ID], &s3).unwrap();
        assert_eq!(eq.lhs, Term::var(1));
    }

    #[test]
    fn cancelling_constants() {
        let s3 = catalog::symmetric(3);
        let g = s3.lookup("(1,2,3)").unwrap();
        let eq = translate_constant_equation(&[g, s3.inv(g)], &s3).unwrap();
        assert_eq!(eq.lhs, Term::apply(format!("inn_{}", s3.inv(g)), Term::var(1)));
    }

    #[test]
    fn two_variables_over_s3() {
        let s3 = catalog::symmetric(3);
        let (a, b) = (s3.lookup("(1,2)").unwrap(), s3.lookup("(1,3)").unwrap());
        let eq = translate_constant_equation(&[a, b, ID], &s3).unwrap();
        let Term::Product(fs) = &eq.lhs else { panic!("expected a product") };
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], Term::apply(format!("inn_{a}"), Term::var(1)));
        assert_eq!(fs[1], Term::apply(format!("inn_{}", s3.inv(s3.mul(a, b))), Term::var(2)));
        assert_eq!(fs[2], Term::Const(s3.mul(a, b)));
    }
}

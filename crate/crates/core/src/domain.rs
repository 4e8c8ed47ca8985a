//! Equational-domain test through zero-divisor pairs, certificates and union systems.

use rayon::prelude::*;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AutGroup, Elem, FiniteGroup, ID};
use crate::solver::{solve_system, EqSystem, SolutionSet};
use crate::term::{Binding, Equation, Term};

#[derive(Debug, Clone)]
pub struct EdVerdict {
    pub is_domain: bool,
    /// Non-trivial `(a, b)` with `[a, φ(b)] = 1` for every `φ ∈ A`.
    pub zero_divisor_pair: Option<(Elem, Elem)>,
    pub certificate_system: Option<EqSystem>,
    /// The certificate was solved and its solution set is exactly the cross.
    pub verified_cross: bool,
    /// Size of `V(S_ED)` when it was solved.
    pub cross_size: Option<u64>,
    /// Why verification was skipped, if it was.
    pub note: Option<String>,
}

/// The distinct images `φ(b)` for each `b`.
fn orbits(g: &FiniteGroup, auts: &AutGroup) -> Vec<Vec<Elem>> {
    g.elements()
        .into_par_iter()
        .map(|b| {
            let mut o: Vec<Elem> = auts.members().iter().map(|m| m.apply(b)).collect();
            o.sort_unstable();
            o.dedup();
            o
        })
        .collect()
}

/// Lexicographically first non-trivial pair with `a` commuting with every automorphic image of `b`.
pub fn find_zero_divisor_pair(g: &FiniteGroup, auts: &AutGroup) -> Option<(Elem, Elem)> {
    let orbits = orbits(g, auts);
    (1..g.order()).into_par_iter().find_map_first(|a| {
        (1..g.order())
            .find(|&b| orbits[b].iter().all(|&c| g.commute(a, c)))
            .map(|b| (a, b))
    })
}

/// `S_ED = { [x1, φ(x2)] = 1 : φ ∈ A }`, one equation per member.
pub fn certificate_system(auts: &AutGroup) -> EqSystem {
    let equations = (0..auts.order())
        .map(|k| {
            let y = if k == 0 { Term::var(2) } else { Term::apply(auts.label(k), Term::var(2)) };
            Equation::new(Term::commutator(Term::var(1), y)).with_provenance(format!("phi = {}", auts.label(k)))
        })
        .collect();
    EqSystem { arity: 2, equations, constants_allowed: false }
}

/// Is `set` exactly `{ (x, y) : x = 1 or y = 1 }`?
pub fn is_cross(set: &SolutionSet) -> bool {
    let n = set.group_order as u64;
    if set.arity != 2 || set.cardinality != 2 * n - 1 {
        return false;
    }
    match set.points() {
        Some(mut ps) => ps.all(|p| p[0] == ID || p[1] == ID),
        None => false,
    }
}

pub fn check_equational_domain(g: &FiniteGroup, auts: &AutGroup, verify: bool, caps: &Caps) -> Result<EdVerdict> {
    let pair = find_zero_divisor_pair(g, auts);
    let mut verdict = EdVerdict {
        is_domain: pair.is_none(),
        zero_divisor_pair: pair,
        certificate_system: None,
        verified_cross: false,
        cross_size: None,
        note: None,
    };
    if pair.is_none() {
        verdict.certificate_system = Some(certificate_system(auts));
    }
    if verify {
        let work = (g.order() as u128).pow(2) * auts.order() as u128;
        if work > caps.enumeration as u128 {
            verdict.note = Some(format!(
                "verification skipped: |G|^2 * |A| = {work} exceeds the enumeration cap {}",
                caps.enumeration
            ));
            return Ok(verdict);
        }
        let sys = certificate_system(auts);
        match solve_system(&sys, &Binding::new(g, auts), caps) {
            Ok(v) => {
                verdict.cross_size = Some(v.cardinality);
                verdict.verified_cross = is_cross(&v);
                if verdict.verified_cross != verdict.is_domain {
                    return Err(Error::Internal(
                        "zero-divisor search and certificate solution disagree".into(),
                    ));
                }
            }
            Err(e) if e.is_size_limit() => verdict.note = Some(format!("verification skipped: {e}")),
            Err(e) => return Err(e),
        }
    }
    Ok(verdict)
}

/// A non-identity central element; `(a, a)` is then a zero-divisor pair for every `A`.
pub fn center_obstruction(g: &FiniteGroup) -> Option<Elem> {
    g.center().into_iter().find(|&a| a != ID)
}

/// `{ s(w1, w2) = 1 : s ∈ cert, w1 ∈ S1, w2 ∈ S2 }`, whose solutions are `V(S1) ∪ V(S2)`.
///
/// The certificate must solve to the cross over the binding; this is checked first.
pub fn union_system(
    s1: &EqSystem,
    s2: &EqSystem,
    cert: &EqSystem,
    binding: &Binding<'_>,
    caps: &Caps,
) -> Result<EqSystem> {
    if s1.arity != s2.arity {
        return Err(Error::validation("union", format!("arities differ: {} and {}", s1.arity, s2.arity)));
    }
    if cert.arity != 2 || cert.has_constants() {
        return Err(Error::validation("union", "the certificate must be a constant-free system in x1, x2"));
    }
    let v = solve_system(cert, &binding.with_constants(false), caps)?;
    if !is_cross(&v) {
        return Err(Error::validation(
            "union",
            format!("the certificate does not solve to the cross ({} solutions)", v.cardinality),
        ));
    }
    let mut equations: Vec<Equation> = Vec::new();
    for s in &cert.equations {
        for w1 in &s1.equations {
            for w2 in &s2.equations {
                let lhs = s.lhs.substitute(&[w1.lhs.clone(), w2.lhs.clone()]);
                if !equations.iter().any(|e| e.lhs == lhs) {
                    equations.push(Equation::new(lhs));
                }
            }
        }
    }
    Ok(EqSystem {
        arity: s1.arity,
        equations,
        constants_allowed: s1.constants_allowed || s2.constants_allowed,
    })
}

/// Solves the union system and compares it with `V(S1) ∪ V(S2)`.
pub fn union_matches(
    union: &EqSystem,
    s1: &EqSystem,
    s2: &EqSystem,
    binding: &Binding<'_>,
    caps: &Caps,
) -> Result<bool> {
    let v = solve_system(union, binding, caps)?;
    let v1 = solve_system(s1, binding, caps)?;
    let v2 = solve_system(s2, binding, caps)?;
    let (Some(a), Some(b), Some(u)) = (v1.codes(), v2.codes(), v.codes()) else {
        return Err(Error::size_limit(
            "union comparison",
            caps.materialize as u128,
            v.cardinality.max(v1.cardinality).max(v2.cardinality) as u128,
            "solution sets must be small enough to store",
        ));
    };
    let mut expected: Vec<u64> = a.iter().chain(b).copied().collect();
    expected.sort_unstable();
    expected.dedup();
    Ok(expected == u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, compute_full_aut, inner_automorphisms, Subgroup};

    #[test]
    fn s3_has_a_pair_of_three_cycles() {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 60).unwrap();
        let (a, b) = find_zero_divisor_pair(&s3, &auts).unwrap();
        assert_eq!((s3.element_name(a), s3.element_name(b)), ("(1,2,3)", "(1,2,3)"));
        let v = check_equational_domain(&s3, &auts, true, &Caps::default()).unwrap();
        assert!(!v.is_domain && !v.verified_cross);
        assert_eq!(v.cross_size, Some(15));
    }

    #[test]
    fn abelian_groups_are_not_domains() {
        for g in [catalog::cyclic(4), catalog::klein_four()] {
            let auts = compute_full_aut(&g, 60).unwrap();
            assert_eq!(find_zero_divisor_pair(&g, &auts), Some((1, 1)));
            assert!(center_obstruction(&g).is_some());
        }
    }

    #[test]
    fn quaternion_center() {
        let q8 = catalog::quaternion();
        let z = center_obstruction(&q8).unwrap();
        assert_eq!(q8.element_order(z), 2);
    }

    #[test]
    fn monotone_in_automorphisms() {
        let s4 = catalog::symmetric(4);
        let inn = inner_automorphisms(&s4, &Subgroup::whole(&s4));
        let aut = compute_full_aut(&s4, 60).unwrap();
        assert!(inn.is_subset_of(&aut));
        let with_inn = find_zero_divisor_pair(&s4, &inn);
        let with_aut = find_zero_divisor_pair(&s4, &aut);
        assert!(with_aut.is_none() || with_inn.is_some());
    }

    #[test]
    fn union_over_a_domain() {
        let a5 = catalog::alternating(5);
        let auts = compute_full_aut(&a5, 60).unwrap();
        let b = Binding::new(&a5, &auts).with_constants(true);
        let caps = Caps::default();
        let cert = certificate_system(&auts);
        let s1 = EqSystem::parse("x1 = @(1,2,3)", Some(1), &b).unwrap();
        let s2 = EqSystem::parse("x1 = @(1,2)(3,4)", Some(1), &b).unwrap();
        let u = union_system(&s1, &s2, &cert, &b, &caps).unwrap();
        assert!(union_matches(&u, &s1, &s2, &b, &caps).unwrap());
        let v = solve_system(&u, &b, &caps).unwrap();
        assert_eq!(v.cardinality, 2);
        let whole = EqSystem::new(1, vec![]).unwrap().with_constants(true);
        let u = union_system(&s1, &whole, &cert, &b, &caps).unwrap();
        assert_eq!(solve_system(&u, &b, &caps).unwrap().cardinality, 60);
    }

    #[test]
    fn union_rejects_a_bad_certificate() {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 60).unwrap();
        let b = Binding::new(&s3, &auts);
        let s = EqSystem::new(1, vec![Equation::new(Term::var(1))]).unwrap();
        let err = union_system(&s, &s, &certificate_system(&auts), &b, &Caps::default()).unwrap_err();
        assert!(err.to_string().contains("cross"), "{err}");
    }
}

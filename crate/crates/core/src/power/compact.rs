//! Evaluation of systems over `H` on finitely supported points, the witness against
//! u-compactness, and bounded instances of q-compactness.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::csp::{gamma_z_subsystem, margin, BoxCsp, Edge, YSpace, ZSubsystem};
use super::gamma::{eval_literals, translate_term, PowerSystem, TranslatedSystem, YLiteral};
use super::{PowerAut, PowerElement};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AutGroup, Elem, FiniteGroup, ID};
use crate::term::{NormalTerm, Sign};

/// Shifts `k` at which some literal of `t` reads a coordinate in `support`.
fn touching_shifts(t: &NormalTerm<PowerAut>, support: &BTreeSet<i64>) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for l in &t.literals {
        for &i in support {
            out.insert(i - l.aut.shift);
        }
    }
    out
}

/// The first `(equation, shift)` that fails at `point`. Shifts that touch no supported
/// coordinate evaluate to `1`, so only the touching ones are checked.
pub fn first_violation(sys: &PowerSystem, point: &[PowerElement], g: &FiniteGroup, base: &AutGroup) -> Option<(usize, i64)> {
    let support: BTreeSet<i64> = point.iter().flat_map(|h| h.support().keys().copied()).collect();
    for (k, t) in sys.normal.iter().enumerate() {
        for shift in touching_shifts(t, &support) {
            let v = eval_literals(&translate_term(t, shift), g, base, |i, j| point[j - 1].get(i));
            if v != ID {
                return Some((k, shift));
            }
        }
    }
    None
}

pub fn eval_power_system(sys: &PowerSystem, point: &[PowerElement], g: &FiniteGroup, base: &AutGroup) -> bool {
    first_violation(sys, point, g, base).is_none()
}

#[derive(Debug, Clone)]
pub struct UWitness {
    pub n: i64,
    pub a: PowerElement,
    pub b: PowerElement,
    /// An automorphism `σ_{n+1} ∘ f_φ` with `[a, ψ(b)] ≠ 1`, outside the finite subsystem.
    pub violated_by: Option<PowerAut>,
}

/// `ψ` when `t` is the normal form of `[x1, ψ(x2)]`.
fn commutation_aut(t: &NormalTerm<PowerAut>) -> Option<PowerAut> {
    let [a, b, c, d] = t.literals.as_slice() else { return None };
    let x_ok = |l: &crate::term::Literal<PowerAut>, s| l.var == 1 && l.aut == PowerAut::IDENTITY && l.sign == s;
    let y_ok = |l: &crate::term::Literal<PowerAut>, s| l.var == 2 && l.sign == s;
    (x_ok(a, Sign::Minus) && y_ok(b, Sign::Minus) && x_ok(c, Sign::Plus) && y_ok(d, Sign::Plus) && b.aut == d.aut)
        .then_some(b.aut)
}

/// `a` supported at `{0}` and `b` at `{n+1}` with `n` the largest shift in `s_prime`; both
/// carry `g`. They solve `s_prime` while neither is `1`.
pub fn u_compactness_witness(s_prime: &PowerSystem, g_elem: Elem, g: &FiniteGroup, base: &AutGroup) -> Result<UWitness> {
    if g_elem == ID || g_elem >= g.order() {
        return Err(Error::validation("u-compactness witness", "g must be a non-identity element"));
    }
    if s_prime.arity > 2 {
        return Err(Error::validation("u-compactness witness", "the subsystem must be in x1, x2"));
    }
    let mut n = 0;
    for (k, t) in s_prime.normal.iter().enumerate() {
        let psi = commutation_aut(t).ok_or_else(|| {
            Error::validation(
                "u-compactness witness",
                format!("equation {} is not of the form [x1, psi(x2)] = 1", k + 1),
            )
        })?;
        n = n.max(psi.shift.abs());
    }
    let a = PowerElement::from_pairs([(0, g_elem)]);
    let b = PowerElement::from_pairs([(n + 1, g_elem)]);
    if let Some((k, shift)) = first_violation(s_prime, &[a.clone(), b.clone()], g, base) {
        return Err(Error::Internal(format!("witness fails equation {} at shift {shift}", k + 1)));
    }
    let violated_by = (0..base.order()).find_map(|phi| {
        let psi = PowerAut { phi, shift: n + 1 };
        let image = b.apply(psi, base);
        let comm = a.inv(g).mul(&image.inv(g), g).mul(&a, g).mul(&image, g);
        (!comm.is_identity()).then_some(psi)
    });
    Ok(UWitness { n, a, b, violated_by })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled(usize),
}

#[derive(Debug, Clone)]
pub struct QReport {
    /// `{(k_l, j_l)}` read off the target.
    pub c: Vec<(i64, usize)>,
    pub window: (i64, i64),
    pub margin: Option<i64>,
    pub translated_equations: usize,
    pub z_subsystem: ZSubsystem,
    /// `γ^{-1} γ_Z(S)` as indices into `S`.
    pub s_prime: BTreeSet<usize>,
    /// `γ^{-1}γ_Z(S) ⊆ S`, `γ_Z(S) ⊆ γγ^{-1}γ_Z(S)` and `γγ^{-1}γ_Z(S) ⊆ γ(S)`, in that order.
    pub audits: [bool; 3],
    pub support: i64,
    pub mode: CheckMode,
    pub points_checked: u64,
    pub counterexample: Option<Vec<PowerElement>>,
}

impl QReport {
    pub fn inclusion_holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Samples drawn when the support box is too large to enumerate.
pub const Q_SAMPLES: usize = 20_000;

/// Extracts `S' = γ^{-1}γ_Z(S)` for the variables `w` reads and tests `V_H(S') ⊆ V_H(w = 1)`
/// on every point supported in `[-support, support]`, or on a seeded sample of `S'` solutions.
pub fn q_compactness_instance(
    s: &PowerSystem,
    w: &PowerSystem,
    window: (i64, i64),
    support: i64,
    g: &FiniteGroup,
    base: &AutGroup,
    caps: &Caps,
    seed: u64,
) -> Result<QReport> {
    if w.len() != 1 {
        return Err(Error::validation("q-compactness", "the target must be a single equation"));
    }
    if w.arity > s.arity {
        return Err(Error::validation("q-compactness", "the target uses more variables than the system"));
    }
    if support < 0 {
        return Err(Error::validation("q-compactness", "the support bound must be non-negative"));
    }
    let wt = &w.normal[0];
    let c: Vec<(i64, usize)> = wt
        .literals
        .iter()
        .map(|l| (l.aut.shift, l.var))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if let Some(m) = margin(window, &c) {
        if m < 0 {
            return Err(Error::validation(
                "q-compactness",
                format!("the window {}..{} is too small for the target (margin {m})", window.0, window.1),
            ));
        }
    }
    let t = TranslatedSystem::for_window(s, window);
    let z_subsystem = gamma_z_subsystem(&t, &c, g, base, caps.enumeration)?;
    let s_prime = t.sources(z_subsystem.equations.iter().copied());
    let regenerated = t.regenerate(&s_prime);
    let sub = s.subsystem(&s_prime);
    let sub_t = TranslatedSystem::for_window(&sub, window);
    let audits = [
        s_prime.iter().all(|&k| k < s.len()),
        z_subsystem.equations.iter().all(|k| regenerated.contains(k)),
        sub_t.equations.iter().all(|e| t.contains_literals(&e.literals)),
    ];

    let space = YSpace { window: (-support, support), arity: s.arity };
    let reach = sub.max_shift() + support;
    let mut box_eqs: Vec<Vec<YLiteral>> = Vec::new();
    for nt in &sub.normal {
        for shift in -reach..=reach {
            box_eqs.push(translate_term(nt, shift));
        }
    }
    let csp = BoxCsp::new(g, base, space, box_eqs.iter().map(|e| e.as_slice()), Edge::Identity);
    let w_reach = w.max_shift() + support;
    let target_holds = |vals: &[Elem]| {
        (-w_reach..=w_reach).all(|shift| {
            let lits = translate_term(wt, shift);
            eval_literals(&lits, g, base, |i, j| space.var(i, j).map_or(ID, |v| vals[v])) == ID
        })
    };
    let to_point = |vals: &[Elem]| -> Vec<PowerElement> {
        (1..=s.arity)
            .map(|j| PowerElement::from_pairs((-support..=support).map(|i| (i, vals[space.var(i, j).unwrap()]))))
            .collect()
    };
    let box_size = (g.order() as u128).checked_pow(space.len() as u32).unwrap_or(u128::MAX);
    let mut counterexample = None;
    let (mode, points_checked) = if box_size <= caps.enumeration as u128 {
        let budget = caps.enumeration.saturating_mul(g.order() as u64);
        let count = csp.for_each_solution(budget, |vals| {
            if target_holds(vals) {
                return true;
            }
            counterexample = Some(to_point(vals));
            false
        })?;
        (CheckMode::Exhaustive, count)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut count = 0;
        for _ in 0..Q_SAMPLES {
            let Some(vals) = csp.random_solution(&mut rng, caps.enumeration)? else { break };
            count += 1;
            if !target_holds(&vals) {
                counterexample = Some(to_point(&vals));
                break;
            }
        }
        (CheckMode::Sampled(Q_SAMPLES), count)
    };
    Ok(QReport {
        margin: margin(window, &c),
        c,
        window,
        translated_equations: t.equations.len(),
        z_subsystem,
        s_prime,
        audits,
        support,
        mode,
        points_checked,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, compute_full_aut};

    #[test]
    fn identity_point_solves_everything() {
        let s3 = catalog::symmetric(3);
        let a0 = compute_full_aut(&s3, 60).unwrap();
        let s = PowerSystem::parse("[x1, s2(a1(x2))] = 1\ns1(x1) * x2 = 1", None, &a0, 0).unwrap();
        assert!(eval_power_system(&s, &[PowerElement::identity(), PowerElement::identity()], &s3, &a0));
    }

    #[test]
    fn witness_for_unshifted_subsystem() {
        let a5 = catalog::alternating(5);
        let a0 = compute_full_aut(&a5, 60).unwrap();
        let s = PowerSystem::parse("[x1, {phi}(x2)] for phi in aut", None, &a0, 0).unwrap();
        let g = a5.lookup("(1,2,3)").unwrap();
        let w = u_compactness_witness(&s, g, &a5, &a0).unwrap();
        assert_eq!(w.n, 0);
        assert_eq!(w.b.support().keys().copied().collect::<Vec<_>>(), vec![1]);
        let psi = w.violated_by.unwrap();
        assert_eq!(psi.shift, 1);
        let label = format!("[x1, s1({}(x2))] = 1", a0.label(psi.phi));
        let bigger = PowerSystem::parse(&label, None, &a0, 0).unwrap();
        assert!(!eval_power_system(&bigger, &[w.a, w.b], &a5, &a0));
    }

    #[test]
    fn witness_for_shifted_and_empty_subsystems() {
        let s3 = catalog::symmetric(3);
        let a0 = compute_full_aut(&s3, 60).unwrap();
        let g = s3.lookup("(1,2)").unwrap();
        let s = PowerSystem::parse("[x1, s2(a1(x2))] = 1\n[x1, sm1(x2)] = 1", None, &a0, 0).unwrap();
        let w = u_compactness_witness(&s, g, &s3, &a0).unwrap();
        assert_eq!((w.n, w.b.get(3)), (2, g));
        let empty = PowerSystem::new(2, vec![], &a0).unwrap();
        assert_eq!(u_compactness_witness(&empty, g, &s3, &a0).unwrap().n, 0);
        let bad = PowerSystem::parse("[x2, x1] = 1", None, &a0, 0).unwrap();
        assert!(u_compactness_witness(&bad, g, &s3, &a0).is_err());
    }

    #[test]
    fn q_instance_for_trivial_family() {
        let z2 = catalog::cyclic(2);
        let a0 = compute_full_aut(&z2, 60).unwrap();
        let s = PowerSystem::parse("{k}(x1) = 1 for k in *", Some(1), &a0, 12).unwrap();
        let w = PowerSystem::parse("s5(x1) = 1", Some(1), &a0, 0).unwrap();
        let r = q_compactness_instance(&s, &w, (-6, 6), 2, &z2, &a0, &Caps::default(), 1).unwrap();
        assert!(r.inclusion_holds());
        // every shifted copy of x1 = 1 produces y[5,1] = 1
        assert_eq!(r.s_prime.len(), 25);
        assert_eq!(r.audits, [true; 3]);
        let err = q_compactness_instance(&s, &w, (-3, 3), 2, &z2, &a0, &Caps::default(), 1).unwrap_err();
        assert!(err.to_string().contains("too small"), "{err}");
    }

    #[test]
    fn q_instance_when_target_is_in_the_system() {
        let s3 = catalog::symmetric(3);
        let a0 = compute_full_aut(&s3, 60).unwrap();
        let s = PowerSystem::parse("[x1, x2] = 1", None, &a0, 0).unwrap();
        let w = PowerSystem::parse("[x1, x2] = 1", None, &a0, 0).unwrap();
        let r = q_compactness_instance(&s, &w, (-1, 1), 1, &s3, &a0, &Caps::default(), 1).unwrap();
        assert!(r.inclusion_holds());
        assert_eq!(r.s_prime.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(r.mode, CheckMode::Exhaustive);
    }
}

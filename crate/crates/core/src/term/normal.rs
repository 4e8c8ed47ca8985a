//! Normal form `φ1(x_{j1}^{ε1}) ⋯ φk(x_{jk}^{εk}) · c` and evaluation.

use std::fmt::Debug;
use std::hash::Hash;

use super::{Scope, Sign, Term};
use crate::error::{Error, Result};
use crate::group::{AutGroup, Automorphism, Elem, FiniteGroup, ID};

/// The automorphism structure a term is normalized against.
///
/// Constants are optional: a domain that returns `None` from `group` rejects them.
pub trait AutDomain {
    type Aut: Clone + PartialEq + Eq + Hash + Debug;

    fn resolve(&self, label: &str) -> Option<Self::Aut>;
    fn identity(&self) -> Self::Aut;
    /// `outer ∘ inner`, or `None` if the composite is not in the domain.
    fn compose(&self, outer: &Self::Aut, inner: &Self::Aut) -> Option<Self::Aut>;
    /// Labels whose nested application (outermost first) denotes `aut`; empty for the identity.
    fn labels(&self, aut: &Self::Aut) -> Vec<String>;

    fn group(&self) -> Option<&FiniteGroup> {
        None
    }

    fn apply_const(&self, _aut: &Self::Aut, _c: Elem) -> Option<Elem> {
        None
    }

    /// The automorphism `g -> c g c^{-1}`, if it belongs to the domain.
    fn conjugation_by(&self, _c: Elem) -> Option<Self::Aut> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal<A> {
    pub aut: A,
    /// 1-based variable index.
    pub var: usize,
    pub sign: Sign,
}

impl<A: Clone> Literal<A> {
    pub fn inverse(&self) -> Literal<A> {
        Literal { aut: self.aut.clone(), var: self.var, sign: self.sign.flip() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalTerm<A> {
    pub literals: Vec<Literal<A>>,
    /// Trailing constant; `None` when it is the identity.
    pub constant: Option<Elem>,
}

impl<A: Clone + PartialEq> NormalTerm<A> {
    pub fn empty() -> Self {
        NormalTerm { literals: Vec::new(), constant: None }
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty() && self.constant.is_none()
    }

    pub fn max_var(&self) -> usize {
        self.literals.iter().map(|l| l.var).max().unwrap_or(0)
    }

    /// Cancels adjacent inverse literals. Optional: `normalize` never calls it.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Literal<A>> = Vec::with_capacity(self.literals.len());
        for l in &self.literals {
            match out.last() {
                Some(top) if top.aut == l.aut && top.var == l.var && top.sign != l.sign => {
                    out.pop();
                }
                _ => out.push(l.clone()),
            }
        }
        NormalTerm { literals: out, constant: self.constant }
    }

    pub fn to_term<D: AutDomain<Aut = A>>(&self, domain: &D) -> Term {
        let mut factors: Vec<Term> = self
            .literals
            .iter()
            .map(|l| {
                domain
                    .labels(&l.aut)
                    .into_iter()
                    .rev()
                    .fold(Term::Var { index: l.var, sign: l.sign }, |t, label| Term::apply(label, t))
            })
            .collect();
        if let Some(c) = self.constant {
            factors.push(Term::Const(c));
        }
        match factors.len() {
            0 => Term::Identity,
            1 => factors.pop().unwrap(),
            _ => Term::Product(factors),
        }
    }
}

impl NormalTerm<usize> {
    /// Folds the literals through the group tables.
    pub fn evaluate(&self, binding: &Binding<'_>, point: &[Elem]) -> Elem {
        let g = binding.group;
        let mut acc = ID;
        for l in &self.literals {
            let mut v = binding.auts.member(l.aut).apply(point[l.var - 1]);
            if l.sign.is_minus() {
                v = g.inv(v);
            }
            acc = g.mul(acc, v);
        }
        match self.constant {
            Some(c) => g.mul(acc, c),
            None => acc,
        }
    }
}

enum Item<A> {
    Lit(Literal<A>),
    Const(Elem),
}

struct Flattener<'d, D: AutDomain> {
    domain: &'d D,
    out: Vec<Item<D::Aut>>,
}

impl<D: AutDomain> Flattener<'_, D> {
    fn flatten(&mut self, t: &Term, aut: &D::Aut, invert: bool) -> Result<()> {
        match t {
            Term::Identity => Ok(()),
            Term::Var { index, sign } => {
                self.out.push(Item::Lit(Literal { aut: aut.clone(), var: *index, sign: sign.flip_if(invert) }));
                Ok(())
            }
            Term::Const(c) => {
                let g = self
                    .domain
                    .group()
                    .ok_or_else(|| Error::validation("term", "constants are not enabled for this system"))?;
                let v = self
                    .domain
                    .apply_const(aut, *c)
                    .ok_or_else(|| Error::validation("term", "constants are not enabled for this system"))?;
                self.out.push(Item::Const(if invert { g.inv(v) } else { v }));
                Ok(())
            }
            Term::Product(ts) => self.sequence(ts.iter().map(|t| (t, false)), aut, invert),
            Term::Inverse(t) => self.flatten(t, aut, !invert),
            Term::Apply(label, t) => {
                let a = self
                    .domain
                    .resolve(label)
                    .ok_or_else(|| Error::validation("term", format!("unknown automorphism label `{label}`")))?;
                let composed = self.domain.compose(aut, &a).ok_or_else(|| {
                    Error::Internal(format!("composite with `{label}` is missing from the automorphism group"))
                })?;
                self.flatten(t, &composed, invert)
            }
            Term::Commutator(a, b) => {
                let seq = [(&**a, true), (&**b, true), (&**a, false), (&**b, false)];
                self.sequence(seq.into_iter(), aut, invert)
            }
            Term::Conjugate(a, b) => {
                let seq = [(&**b, true), (&**a, false), (&**b, false)];
                self.sequence(seq.into_iter(), aut, invert)
            }
        }
    }

    /// Flattens a product of `(term, inverted)` factors, reversing it under inversion.
    fn sequence<'t>(
        &mut self,
        factors: impl DoubleEndedIterator<Item = (&'t Term, bool)>,
        aut: &D::Aut,
        invert: bool,
    ) -> Result<()> {
        if invert {
            for (t, inv) in factors.rev() {
                self.flatten(t, aut, !inv)?;
            }
        } else {
            for (t, inv) in factors {
                self.flatten(t, aut, inv)?;
            }
        }
        Ok(())
    }
}

/// Pushes automorphisms and inverses down to the variables and moves constants to the right
/// using `c·φ(x) = (ι_c∘φ)(x)·c` with `ι_c(g) = c g c^{-1}`.
pub fn normalize<D: AutDomain>(t: &Term, domain: &D) -> Result<NormalTerm<D::Aut>> {
    let mut f = Flattener { domain, out: Vec::new() };
    f.flatten(t, &domain.identity(), false)?;
    let mut literals = Vec::new();
    let mut acc = ID;
    // conjugation by the accumulated constant, computed when a literal needs it
    let mut conj: Option<D::Aut> = None;
    for item in f.out {
        match item {
            Item::Const(c) => {
                let g = domain.group().expect("constants imply a group");
                acc = g.mul(acc, c);
                conj = None;
            }
            Item::Lit(mut l) => {
                if acc != ID {
                    if conj.is_none() {
                        let g = domain.group().expect("constants imply a group");
                        conj = Some(domain.conjugation_by(acc).ok_or_else(|| {
                            Error::validation(
                                "term",
                                format!(
                                    "moving constant {} to the right needs an inner automorphism that is not in A",
                                    g.element_name(acc)
                                ),
                            )
                        })?);
                    }
                    l.aut = domain
                        .compose(conj.as_ref().unwrap(), &l.aut)
                        .ok_or_else(|| Error::Internal("inner automorphism composite missing from A".into()))?;
                }
                literals.push(l);
            }
        }
    }
    Ok(NormalTerm { literals, constant: (acc != ID).then_some(acc) })
}

/// A group with an automorphism group, optionally allowing constants.
#[derive(Clone, Copy)]
pub struct Binding<'a> {
    pub group: &'a FiniteGroup,
    pub auts: &'a AutGroup,
    pub constants: bool,
}

impl<'a> Binding<'a> {
    pub fn new(group: &'a FiniteGroup, auts: &'a AutGroup) -> Self {
        Binding { group, auts, constants: false }
    }

    pub fn with_constants(mut self, on: bool) -> Self {
        self.constants = on;
        self
    }
}

impl AutDomain for Binding<'_> {
    type Aut = usize;

    fn resolve(&self, label: &str) -> Option<usize> {
        self.auts.resolve(label)
    }

    fn identity(&self) -> usize {
        0
    }

    fn compose(&self, outer: &usize, inner: &usize) -> Option<usize> {
        match (*outer, *inner) {
            (0, k) | (k, 0) => Some(k),
            (o, i) => self.auts.compose_index(o, i),
        }
    }

    fn labels(&self, aut: &usize) -> Vec<String> {
        if *aut == 0 {
            vec![]
        } else {
            vec![self.auts.label(*aut).to_string()]
        }
    }

    fn group(&self) -> Option<&FiniteGroup> {
        self.constants.then_some(self.group)
    }

    fn apply_const(&self, aut: &usize, c: Elem) -> Option<Elem> {
        self.constants.then(|| self.auts.member(*aut).apply(c))
    }

    fn conjugation_by(&self, c: Elem) -> Option<usize> {
        if !self.constants {
            return None;
        }
        // g -> c g c^{-1} is conjugation by c^{-1} in the h^{-1} g h convention
        self.auts.find(&Automorphism::inner(self.group, self.group.inv(c)))
    }
}

impl Scope for Binding<'_> {
    fn is_aut_label(&self, label: &str) -> bool {
        self.auts.resolve(label).is_some()
    }

    fn constant(&self, name: &str) -> Option<Elem> {
        if self.constants {
            self.group.lookup(name)
        } else {
            None
        }
    }
}

/// Evaluates the syntax tree directly, without normalizing.
pub fn evaluate(t: &Term, point: &[Elem], binding: &Binding<'_>) -> Result<Elem> {
    let g = binding.group;
    Ok(match t {
        Term::Identity => ID,
        Term::Var { index, sign } => {
            let v = *point.get(index.wrapping_sub(1)).ok_or_else(|| {
                Error::validation("assignment", format!("no value for x{index} in a {}-tuple", point.len()))
            })?;
            if sign.is_minus() {
                g.inv(v)
            } else {
                v
            }
        }
        Term::Const(c) => {
            if *c >= g.order() {
                return Err(Error::validation("term", format!("constant index {c} outside the group")));
            }
            *c
        }
        Term::Product(ts) => {
            let mut acc = ID;
            for t in ts {
                acc = g.mul(acc, evaluate(t, point, binding)?);
            }
            acc
        }
        Term::Inverse(t) => g.inv(evaluate(t, point, binding)?),
        Term::Apply(label, t) => {
            let k = binding
                .auts
                .resolve(label)
                .ok_or_else(|| Error::validation("term", format!("unknown automorphism label `{label}`")))?;
            binding.auts.member(k).apply(evaluate(t, point, binding)?)
        }
        Term::Commutator(a, b) => g.commutator(evaluate(a, point, binding)?, evaluate(b, point, binding)?),
        Term::Conjugate(a, b) => g.conjugate(evaluate(a, point, binding)?, evaluate(b, point, binding)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, compute_full_aut, inner_automorphisms, Subgroup};
    use crate::term::parse_term;
    use proptest::prelude::*;

    fn lit(aut: usize, var: usize, sign: Sign) -> Literal<usize> {
        Literal { aut, var, sign }
    }

    #[test]
    fn apply_distributes_over_product_and_inverse() {
        let v4 = catalog::klein_four();
        let auts = compute_full_aut(&v4, 100).unwrap();
        let b = Binding::new(&v4, &auts);
        let p = auts.labels().find(|(l, _)| *l != "id").unwrap().0.to_string();
        let k = auts.resolve(&p).unwrap();
        let t = parse_term(&format!("{p}(x1 * x2^-1)"), Some(2), &b).unwrap();
        let n = normalize(&t, &b).unwrap();
        assert_eq!(n.literals, vec![lit(k, 1, Sign::Plus), lit(k, 2, Sign::Minus)]);
        assert_eq!(n.constant, None);
    }

    #[test]
    fn nested_application_composes() {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 100).unwrap();
        let b = Binding::new(&s3, &auts);
        let (p, q) = (auts.label(1).to_string(), auts.label(2).to_string());
        let n = normalize(&parse_term(&format!("{q}({p}(x1))"), Some(1), &b).unwrap(), &b).unwrap();
        assert_eq!(n.literals, vec![lit(auts.compose_index(2, 1).unwrap(), 1, Sign::Plus)]);
    }

    #[test]
    fn commutator_expands_without_cancellation() {
        let s3 = catalog::symmetric(3);
        let auts = AutGroup::trivial(&s3);
        let b = Binding::new(&s3, &auts);
        let n = normalize(&parse_term("[x1, x2]", Some(2), &b).unwrap(), &b).unwrap();
        assert_eq!(
            n.literals,
            vec![lit(0, 1, Sign::Minus), lit(0, 2, Sign::Minus), lit(0, 1, Sign::Plus), lit(0, 2, Sign::Plus)]
        );
        let n = normalize(&parse_term("x1 x1^-1", Some(1), &b).unwrap(), &b).unwrap();
        assert_eq!(n.len(), 2);
        assert!(n.reduced().is_empty());
    }

    #[test]
    fn constants_move_right() {
        let s3 = catalog::symmetric(3);
        let inn = inner_automorphisms(&s3, &Subgroup::whole(&s3));
        let b = Binding::new(&s3, &inn).with_constants(true);
        let t = parse_term("@(1,2) * x1 * @(1,2,3) * x2^-1", Some(2), &b).unwrap();
        let n = normalize(&t, &b).unwrap();
        assert!(n.constant.is_some());
        for x in s3.elements() {
            for y in s3.elements() {
                assert_eq!(n.evaluate(&b, &[x, y]), evaluate(&t, &[x, y], &b).unwrap());
            }
        }
        let no_const = Binding::new(&s3, &inn);
        assert!(normalize(&t, &no_const).is_err());
    }

    #[test]
    fn constants_need_inner_automorphisms() {
        let s3 = catalog::symmetric(3);
        let auts = AutGroup::trivial(&s3);
        let b = Binding::new(&s3, &auts).with_constants(true);
        let t = parse_term("@(1,2) * x1", Some(1), &b).unwrap();
        let err = normalize(&t, &b).unwrap_err().to_string();
        assert!(err.contains("inner automorphism"), "{err}");
        // a trailing constant needs nothing
        assert!(normalize(&parse_term("x1 * @(1,2)", Some(1), &b).unwrap(), &b).is_ok());
    }

    #[test]
    fn evaluation_examples() {
        let s3 = catalog::symmetric(3);
        let auts = AutGroup::trivial(&s3);
        let b = Binding::new(&s3, &auts);
        let t12 = s3.lookup("(1,2)").unwrap();
        assert_eq!(evaluate(&parse_term("x1 x1", Some(1), &b).unwrap(), &[t12], &b).unwrap(), ID);
        let c = parse_term("[x1, x2]", Some(2), &b).unwrap();
        for x in s3.elements() {
            assert_eq!(evaluate(&c, &[x, x], &b).unwrap(), ID);
        }
    }

    fn arb_term(labels: Vec<String>) -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            Just(Term::Identity),
            (1usize..=2).prop_map(Term::var),
            (1usize..=2).prop_map(|i| Term::Var { index: i, sign: Sign::Minus }),
        ];
        leaf.prop_recursive(6, 40, 3, move |inner| {
            let labels = labels.clone();
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..4).prop_map(Term::Product),
                inner.clone().prop_map(Term::inverse),
                (prop::sample::select(labels), inner.clone()).prop_map(|(l, t)| Term::apply(l, t)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::commutator(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Term::conjugate(a, b)),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn normalization_is_sound_and_idempotent(t in arb_term(vec!["id".into(), "a1".into(), "a2".into(), "a3".into()])) {
            let s3 = catalog::symmetric(3);
            let auts = compute_full_aut(&s3, 100).unwrap();
            let b = Binding::new(&s3, &auts);
            let n = normalize(&t, &b).unwrap();
            for x in s3.elements() {
                for y in s3.elements() {
                    prop_assert_eq!(n.evaluate(&b, &[x, y]), evaluate(&t, &[x, y], &b).unwrap());
                }
            }
            prop_assert_eq!(normalize(&n.to_term(&b), &b).unwrap(), n);
        }

        #[test]
        fn printed_terms_reparse(t in arb_term(vec!["p".into(), "q".into()])) {
            struct Pq;
            impl Scope for Pq {
                fn is_aut_label(&self, l: &str) -> bool { l == "p" || l == "q" }
            }
            let parsed = parse_term(&t.to_string(), None, &Pq).unwrap();
            let text = parsed.to_string();
            prop_assert_eq!(parse_term(&text, None, &Pq).unwrap(), parsed, "{}", text);
        }
    }
}

//! Algebraic closure of point sets and algebraicity tests.
//!
//! Two tiers. For tiny tuple spaces the whole clone of term functions is generated: every term
//! function is a product of literal functions `φ(x_j)`, so the clone is the monoid they generate
//! under pointwise product, found by breadth-first search. Otherwise terms up to a literal budget
//! are searched: `P·Q^{-1}` vanishes on `Y` exactly when `P` and `Q` agree on `Y`, so words of half
//! the budget are bucketed by their values on `Y` and a point is excluded from the closure as soon
//! as two words of one bucket disagree on it.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{AutGroup, Elem, FiniteGroup, ID};
use crate::solver::{decode, encode, solve_system, tuple_space, EqSystem};
use crate::term::{Binding, Equation, Sign, Term};

/// Largest number of words the bounded tier will build.
const WORD_LIMIT: usize = 5_000_000;

/// `φ(x_var)^sign` with `φ` a member index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub aut: usize,
    pub var: usize,
    pub sign: Sign,
}

impl Letter {
    fn term(&self, auts: &AutGroup) -> Term {
        let v = Term::Var { index: self.var, sign: Sign::Plus };
        let t = if self.aut == 0 { v } else { Term::apply(auts.label(self.aut), v) };
        if self.sign.is_minus() {
            Term::inverse(t)
        } else {
            t
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.aut == other.aut && self.var == other.var && self.sign != other.sign
    }
}

fn word_term(word: &[Letter], auts: &AutGroup) -> Term {
    match word.len() {
        0 => Term::Identity,
        1 => word[0].term(auts),
        _ => Term::Product(word.iter().map(|l| l.term(auts)).collect()),
    }
}

/// How a clone member was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generation {
    /// The constant function with value 1.
    Unit,
    /// `parent · φ(x_j)`.
    Times { parent: usize, letter: Letter },
}

#[derive(Debug, Clone)]
pub struct TermFunctionClone {
    pub arity: usize,
    /// Value vectors indexed by point code.
    pub functions: Vec<Vec<u32>>,
    pub generation_log: Vec<Generation>,
    pub saturated: bool,
}

impl TermFunctionClone {
    /// A term realizing function `k`, replayed from the generation log.
    pub fn term(&self, k: usize, auts: &AutGroup) -> Term {
        let mut letters = Vec::new();
        let mut at = k;
        while let Generation::Times { parent, letter } = self.generation_log[at] {
            letters.push(letter);
            at = parent;
        }
        letters.reverse();
        word_term(&letters, auts)
    }
}

/// Literal tables: `tables[letter][g] = φ(g)^ε`.
fn letter_tables(g: &FiniteGroup, auts: &AutGroup, arity: usize, signs: &[Sign]) -> (Vec<Letter>, Vec<Vec<u32>>) {
    let mut letters = Vec::new();
    let mut tables = Vec::new();
    for var in 1..=arity {
        for &sign in signs {
            for aut in 0..auts.order() {
                let m = auts.member(aut);
                letters.push(Letter { aut, var, sign });
                tables.push(
                    g.elements()
                        .map(|x| {
                            let y = m.apply(x);
                            (if sign.is_minus() { g.inv(y) } else { y }) as u32
                        })
                        .collect(),
                );
            }
        }
    }
    (letters, tables)
}

/// Least set of functions `G^n -> G` containing the projections and closed under product,
/// inverse and every `φ ∈ A`; stops unsaturated after `cap` functions.
pub fn clone_term_functions(g: &FiniteGroup, auts: &AutGroup, arity: usize, cap: usize) -> TermFunctionClone {
    let n = g.order();
    let points: Vec<Vec<Elem>> = (0..(n as u64).pow(arity as u32)).map(|c| decode(c, n, arity)).collect();
    let (letters, tables) = letter_tables(g, auts, arity, &[Sign::Plus]);
    let letter_vectors: Vec<Vec<u32>> = letters
        .iter()
        .zip(&tables)
        .map(|(l, t)| points.iter().map(|p| t[p[l.var - 1]]).collect())
        .collect();
    let unit = vec![ID as u32; points.len()];
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    index.insert(unit.clone(), 0);
    let mut functions = vec![unit];
    let mut log = vec![Generation::Unit];
    let mut frontier = vec![0usize];
    let mut saturated = true;
    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for &f in &frontier {
            for (li, lv) in letter_vectors.iter().enumerate() {
                let v: Vec<u32> =
                    functions[f].iter().zip(lv).map(|(&a, &b)| g.mul(a as Elem, b as Elem) as u32).collect();
                if index.contains_key(&v) {
                    continue;
                }
                if functions.len() >= cap {
                    saturated = false;
                    break 'outer;
                }
                index.insert(v.clone(), functions.len());
                next.push(functions.len());
                functions.push(v);
                log.push(Generation::Times { parent: f, letter: letters[li] });
            }
        }
        frontier = next;
    }
    TermFunctionClone { arity, functions, generation_log: log, saturated }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Clone,
    Syntax,
}

#[derive(Debug, Clone)]
pub struct AlgebraicSet {
    pub arity: usize,
    pub points: Vec<Vec<Elem>>,
    /// Vanishing equations that cut out `points` (exactly so when `exact`).
    pub witness_system: EqSystem,
    /// The closure is the true algebraic closure, not an over-approximation.
    pub exact: bool,
    pub tier: Tier,
}

#[derive(Debug, Clone)]
pub enum Algebraicity {
    Yes { witness: EqSystem },
    /// The exact closure is strictly larger.
    No { closure_size: usize },
    /// The bounded closure is larger; these points could not be excluded.
    Inconclusive { gap: Vec<Vec<Elem>> },
}

fn validate_points(y: &[Vec<Elem>], g: &FiniteGroup, arity: usize) -> Result<Vec<u64>> {
    let mut codes = Vec::with_capacity(y.len());
    for p in y {
        if p.len() != arity || p.iter().any(|&x| x >= g.order()) {
            return Err(Error::validation("point set", format!("point {p:?} is not in G^{arity}")));
        }
        codes.push(encode(p, g.order()));
    }
    codes.sort_unstable();
    codes.dedup();
    Ok(codes)
}

/// Points excluded by some chosen term, greedily keeping only terms that exclude new points.
fn greedy_witness<T: Clone>(
    excluded: &[(u64, T)],
    excludes: impl Fn(&T, u64) -> bool,
) -> Vec<T> {
    let mut chosen: Vec<T> = Vec::new();
    for (code, w) in excluded {
        if !chosen.iter().any(|c| excludes(c, *code)) {
            chosen.push(w.clone());
        }
    }
    chosen
}

/// The algebraic closure of `y ⊆ G^arity`.
pub fn algebraic_closure(
    y: &[Vec<Elem>],
    arity: usize,
    g: &FiniteGroup,
    auts: &AutGroup,
    budget: usize,
    caps: &Caps,
) -> Result<AlgebraicSet> {
    let ycodes = validate_points(y, g, arity)?;
    let n = g.order();
    let total = tuple_space(n, arity, caps.enumeration)?;
    if total <= caps.clone_points {
        let clone = clone_term_functions(g, auts, arity, caps.clone_size);
        if clone.saturated {
            return Ok(closure_from_clone(&clone, &ycodes, g, auts));
        }
    }
    closure_by_syntax(&ycodes, arity, g, auts, budget, total)
}

fn closure_from_clone(clone: &TermFunctionClone, ycodes: &[u64], g: &FiniteGroup, auts: &AutGroup) -> AlgebraicSet {
    let n = g.order();
    let vanishing: Vec<usize> = (0..clone.functions.len())
        .filter(|&k| ycodes.iter().all(|&c| clone.functions[k][c as usize] == ID as u32))
        .collect();
    let total = clone.functions[0].len() as u64;
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for code in 0..total {
        match vanishing.iter().find(|&&k| clone.functions[k][code as usize] != ID as u32) {
            Some(&k) => excluded.push((code, k)),
            None => points.push(decode(code, n, clone.arity)),
        }
    }
    let chosen = greedy_witness(&excluded, |&k, code| clone.functions[k][code as usize] != ID as u32);
    let equations = chosen.iter().map(|&k| Equation::new(clone.term(k, auts))).collect();
    AlgebraicSet {
        arity: clone.arity,
        points,
        witness_system: EqSystem { arity: clone.arity, equations, constants_allowed: false },
        exact: true,
        tier: Tier::Clone,
    }
}

fn closure_by_syntax(
    ycodes: &[u64],
    arity: usize,
    g: &FiniteGroup,
    auts: &AutGroup,
    budget: usize,
    total: u64,
) -> Result<AlgebraicSet> {
    let n = g.order();
    let (letters, tables) = letter_tables(g, auts, arity, &[Sign::Plus, Sign::Minus]);
    let half = budget.div_ceil(2);
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut level: Vec<usize> = vec![0];
    for _ in 0..half {
        let mut next = Vec::new();
        for &w in &level {
            for li in 0..letters.len() {
                if let Some(&last) = words[w].last() {
                    if letters[last].cancels(&letters[li]) {
                        continue;
                    }
                }
                if words.len() >= WORD_LIMIT {
                    return Err(Error::size_limit(
                        "bounded closure search",
                        WORD_LIMIT as u128,
                        (letters.len() as u128).pow(half as u32),
                        "lower the literal budget or shrink the automorphism group",
                    ));
                }
                let mut word = words[w].clone();
                word.push(li);
                next.push(words.len());
                words.push(word);
            }
        }
        level = next;
    }
    let ypoints: Vec<Vec<Elem>> = ycodes.iter().map(|&c| decode(c, n, arity)).collect();
    let eval = |w: &[usize], p: &[Elem]| -> Elem {
        w.iter().fold(ID, |acc, &li| g.mul(acc, tables[li][p[letters[li].var - 1]] as Elem))
    };
    let same_on_y = |a: &[usize], b: &[usize]| ypoints.iter().all(|p| eval(a, p) == eval(b, p));
    let fingerprints: Vec<u64> = words
        .par_iter()
        .map(|w| {
            let mut h = DefaultHasher::new();
            for p in &ypoints {
                eval(w, p).hash(&mut h);
            }
            h.finish()
        })
        .collect();
    // exact classes of words with equal values on Y
    let mut by_print: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (w, &fp) in fingerprints.iter().enumerate() {
        let reps = by_print.entry(fp).or_default();
        match reps.iter().find(|&&c| same_on_y(&words[classes[c][0]], &words[w])) {
            Some(&c) => classes[c].push(w),
            None => {
                reps.push(classes.len());
                classes.push(vec![w]);
            }
        }
    }
    classes.retain(|c| c.len() > 1);

    let yset: std::collections::HashSet<u64> = ycodes.iter().copied().collect();
    let outcome: Vec<(u64, Option<(usize, usize)>)> = (0..total)
        .into_par_iter()
        .filter(|c| !yset.contains(c))
        .map(|code| {
            let p = decode(code, n, arity);
            for class in &classes {
                let rep = class[0];
                let v = eval(&words[rep], &p);
                if let Some(&other) = class[1..].iter().find(|&&w| eval(&words[w], &p) != v) {
                    return (code, Some((rep, other)));
                }
            }
            (code, None)
        })
        .collect();

    let mut points: Vec<u64> = ycodes.to_vec();
    let mut excluded = Vec::new();
    for (code, hit) in outcome {
        match hit {
            Some(pair) => excluded.push((code, pair)),
            None => points.push(code),
        }
    }
    points.sort_unstable();
    let differs = |&(a, b): &(usize, usize), code: u64| {
        let p = decode(code, n, arity);
        eval(&words[a], &p) != eval(&words[b], &p)
    };
    let chosen = greedy_witness(&excluded, differs);
    let equations = chosen
        .iter()
        .map(|&(a, b)| {
            let p = word_letters(&words[a], &letters);
            let q = word_letters(&words[b], &letters);
            Equation::new(pq_inverse(&p, &q, auts))
        })
        .collect();
    let exact = points.len() == ycodes.len();
    Ok(AlgebraicSet {
        arity,
        points: points.iter().map(|&c| decode(c, n, arity)).collect(),
        witness_system: EqSystem { arity, equations, constants_allowed: false },
        exact,
        tier: Tier::Syntax,
    })
}

fn word_letters(w: &[usize], letters: &[Letter]) -> Vec<Letter> {
    w.iter().map(|&li| letters[li]).collect()
}

/// `P·Q^{-1}` with adjacent cancellations removed.
fn pq_inverse(p: &[Letter], q: &[Letter], auts: &AutGroup) -> Term {
    let mut out: Vec<Letter> = Vec::new();
    let inv = q.iter().rev().map(|l| Letter { sign: l.sign.flip(), ..*l });
    for l in p.iter().copied().chain(inv) {
        match out.last() {
            Some(top) if top.cancels(&l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    word_term(&out, auts)
}

/// Decides whether `y` is algebraic, exactly when the closure search was exhaustive.
pub fn is_algebraic(
    y: &[Vec<Elem>],
    arity: usize,
    g: &FiniteGroup,
    auts: &AutGroup,
    budget: usize,
    caps: &Caps,
) -> Result<(Algebraicity, AlgebraicSet)> {
    let ycodes = validate_points(y, g, arity)?;
    let closure = algebraic_closure(y, arity, g, auts, budget, caps)?;
    let verdict = if closure.points.len() == ycodes.len() {
        let check = solve_system(&closure.witness_system, &Binding::new(g, auts), caps)?;
        if check.codes() != Some(&ycodes[..]) {
            return Err(Error::Internal("closure witness does not cut out the point set".into()));
        }
        Algebraicity::Yes { witness: closure.witness_system.clone() }
    } else if closure.exact {
        Algebraicity::No { closure_size: closure.points.len() }
    } else {
        let gap = closure
            .points
            .iter()
            .filter(|p| ycodes.binary_search(&encode(p, g.order())).is_err())
            .cloned()
            .collect();
        Algebraicity::Inconclusive { gap }
    };
    Ok((verdict, closure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::certificate_system;
    use crate::group::{catalog, compute_full_aut};

    #[test]
    fn clone_of_z2() {
        let z2 = catalog::cyclic(2);
        let auts = AutGroup::trivial(&z2);
        let c1 = clone_term_functions(&z2, &auts, 1, 100);
        assert!(c1.saturated);
        assert_eq!(c1.functions.len(), 2);
        let c2 = clone_term_functions(&z2, &auts, 2, 100);
        assert_eq!(c2.functions.len(), 4);
        assert_eq!(c1.term(1, &auts), Term::var(1));
    }

    #[test]
    fn clone_log_replays() {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 60).unwrap();
        let c = clone_term_functions(&s3, &auts, 1, 10_000);
        assert!(c.saturated);
        let b = Binding::new(&s3, &auts);
        for k in 0..c.functions.len() {
            let t = c.term(k, &auts);
            for x in s3.elements() {
                assert_eq!(crate::term::evaluate(&t, &[x], &b).unwrap() as u32, c.functions[k][x]);
            }
        }
    }

    #[test]
    fn single_nontrivial_point_of_z2() {
        let z2 = catalog::cyclic(2);
        let auts = AutGroup::trivial(&z2);
        let (v, cl) = is_algebraic(&[vec![1]], 1, &z2, &auts, 4, &Caps::default()).unwrap();
        assert!(matches!(v, Algebraicity::No { closure_size: 2 }));
        assert!(cl.exact);
    }

    #[test]
    fn identity_point_is_algebraic() {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 60).unwrap();
        let (v, _) = is_algebraic(&[vec![ID, ID]], 2, &s3, &auts, 4, &Caps::default()).unwrap();
        let Algebraicity::Yes { witness } = v else { panic!("expected algebraic") };
        assert!(witness.equations.len() <= 2);
    }

    #[test]
    fn whole_space_has_empty_witness() {
        let s3 = catalog::symmetric(3);
        let auts = AutGroup::trivial(&s3);
        let all: Vec<Vec<Elem>> = s3.elements().map(|x| vec![x]).collect();
        let (v, _) = is_algebraic(&all, 1, &s3, &auts, 4, &Caps::default()).unwrap();
        let Algebraicity::Yes { witness } = v else { panic!("expected algebraic") };
        assert!(witness.equations.is_empty());
    }

    #[test]
    fn solution_sets_are_closed() {
        let s3 = catalog::symmetric(3);
        let auts = compute_full_aut(&s3, 60).unwrap();
        let b = Binding::new(&s3, &auts);
        let v = solve_system(&certificate_system(&auts), &b, &Caps::default()).unwrap();
        let pts: Vec<Vec<Elem>> = v.points().unwrap().collect();
        let cl = algebraic_closure(&pts, 2, &s3, &auts, 4, &Caps::default()).unwrap();
        assert_eq!(cl.points, pts);
    }
}

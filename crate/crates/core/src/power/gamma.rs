//! Systems over `H`, their coordinate-wise translation `γ` into equations over `G` in variables
//! `y_{i,j}`, and index shifts of translated systems and their solutions.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{shift_label, PowerAut, PowerDomain};
use crate::error::{Error, Result};
use crate::group::{AutGroup, Elem, FiniteGroup, ID};
use crate::term::{normalize, parse_equation, Equation, NormalTerm, Sign};

/// A constant-free system over `H` together with the normal form of each equation.
#[derive(Debug, Clone)]
pub struct PowerSystem {
    pub arity: usize,
    pub equations: Vec<Equation>,
    pub normal: Vec<NormalTerm<PowerAut>>,
}

impl PowerSystem {
    pub fn new(arity: usize, equations: Vec<Equation>, base: &AutGroup) -> Result<PowerSystem> {
        let domain = PowerDomain { base };
        let mut normal = Vec::with_capacity(equations.len());
        for (k, e) in equations.iter().enumerate() {
            if e.lhs.has_constants() {
                return Err(Error::validation(
                    "system over H",
                    format!("equation {} has constants; the translation is defined for constant-free systems", k + 1),
                ));
            }
            if e.lhs.max_var() > arity {
                return Err(Error::validation(
                    "system over H",
                    format!("equation {} uses x{} but the arity is {arity}", k + 1, e.lhs.max_var()),
                ));
            }
            normal.push(normalize(&e.lhs, &domain)?);
        }
        Ok(PowerSystem { arity, equations, normal })
    }

    /// Parses plain equations and family templates, one per line.
    ///
    /// A template carries `for k in a..b` and/or `for phi in aut` clauses; `{k}` expands to the
    /// shift label `s<k>`/`sm<k>` and `{phi}` to each label of the base automorphism group.
    /// `k in *` ranges over `-shift_bound..shift_bound`.
    pub fn parse(text: &str, arity: Option<usize>, base: &AutGroup, shift_bound: i64) -> Result<PowerSystem> {
        let domain = PowerDomain { base };
        let mut equations = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let expanded = expand_template(line, base, shift_bound).map_err(|e| e.at_line(no + 1))?;
            for (text, tag) in expanded {
                let eq = parse_equation(&text, arity, &domain).map_err(|e| e.at_line(no + 1))?;
                let prov = if tag.is_empty() { format!("line {}", no + 1) } else { format!("line {}, {tag}", no + 1) };
                equations.push(eq.with_provenance(prov));
            }
        }
        let arity = arity.unwrap_or_else(|| equations.iter().map(|e| e.lhs.max_var()).max().unwrap_or(0).max(1));
        PowerSystem::new(arity, equations, base)
    }

    /// The largest `|k|` over the shifts occurring in the normal forms.
    pub fn max_shift(&self) -> i64 {
        self.normal.iter().flat_map(|t| t.literals.iter()).map(|l| l.aut.shift.abs()).max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// The subsystem on the given equation indices, in index order.
    pub fn subsystem(&self, indices: &BTreeSet<usize>) -> PowerSystem {
        PowerSystem {
            arity: self.arity,
            equations: indices.iter().map(|&k| self.equations[k].clone()).collect(),
            normal: indices.iter().map(|&k| self.normal[k].clone()).collect(),
        }
    }
}

fn expand_template(line: &str, base: &AutGroup, shift_bound: i64) -> Result<Vec<(String, String)>> {
    let mut parts = line.split(" for ");
    let body = parts.next().unwrap_or("").trim().to_string();
    let mut shifts: Option<Vec<i64>> = None;
    let mut phis: Option<Vec<String>> = None;
    for clause in parts {
        let clause = clause.trim();
        if let Some(range) = clause.strip_prefix("k in ") {
            let range = range.trim();
            shifts = Some(if range == "*" {
                (-shift_bound..=shift_bound).collect()
            } else {
                let (lo, hi) = parse_range(range)?;
                (lo..=hi).collect()
            });
        } else if clause.trim_end() == "phi in aut" {
            phis = Some((0..base.order()).map(|k| base.label(k).to_string()).collect());
        } else {
            return Err(Error::validation("family template", format!("unknown clause `for {clause}`")));
        }
    }
    let uses_k = body.contains("{k}");
    let uses_phi = body.contains("{phi}");
    if uses_k != shifts.is_some() || uses_phi != phis.is_some() {
        return Err(Error::validation(
            "family template",
            "each placeholder needs a matching `for` clause and each clause a placeholder",
        ));
    }
    let shifts: Vec<Option<i64>> = shifts.map_or(vec![None], |v| v.into_iter().map(Some).collect());
    let phis: Vec<Option<String>> = phis.map_or(vec![None], |v| v.into_iter().map(Some).collect());
    let mut out = Vec::new();
    for k in &shifts {
        for phi in &phis {
            let mut text = body.clone();
            let mut tag = Vec::new();
            if let Some(k) = k {
                text = text.replace("{k}", &shift_label(*k));
                tag.push(format!("k = {k}"));
            }
            if let Some(phi) = phi {
                text = text.replace("{phi}", phi);
                tag.push(format!("phi = {phi}"));
            }
            out.push((text, tag.join(", ")));
        }
    }
    Ok(out)
}

/// `a..b` with inclusive ends; either end may be negative.
pub fn parse_range(text: &str) -> Result<(i64, i64)> {
    let bad = || Error::validation("range", format!("expected `a..b`, found `{text}`"));
    let (lo, hi) = text.trim().split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Error::validation("range", format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

/// `φ(y_{index,var})^sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YLiteral {
    pub phi: usize,
    pub index: i64,
    pub var: usize,
    pub sign: Sign,
}

/// One translated equation with the base equation (0-based) and shift it came from.
#[derive(Debug, Clone)]
pub struct YEquation {
    pub literals: Vec<YLiteral>,
    pub source: usize,
    pub shift: i64,
    /// Further `(source, shift)` pairs that produced the same equation.
    pub also_from: Vec<(usize, i64)>,
}

impl YEquation {
    pub fn index_span(&self) -> Option<(i64, i64)> {
        let lo = self.literals.iter().map(|l| l.index).min()?;
        let hi = self.literals.iter().map(|l| l.index).max()?;
        Some((lo, hi))
    }

    pub fn shifted(&self, by: i64) -> Vec<YLiteral> {
        self.literals.iter().map(|l| YLiteral { index: l.index + by, ..*l }).collect()
    }

    pub fn display<'a>(&'a self, base: &'a AutGroup) -> impl fmt::Display + 'a {
        LiteralsDisplay(&self.literals, base)
    }
}

struct LiteralsDisplay<'a>(&'a [YLiteral], &'a AutGroup);

impl fmt::Display for LiteralsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1 = 1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if l.phi == 0 {
                write!(f, "y[{},{}]", l.index, l.var)?;
            } else {
                write!(f, "{}(y[{},{}])", self.1.label(l.phi), l.index, l.var)?;
            }
            if l.sign.is_minus() {
                write!(f, "^-1")?;
            }
        }
        write!(f, " = 1")
    }
}

/// `φ_1(y)^{ε_1} ⋯ φ_l(y)^{ε_l}` with `value(index, var)` supplying the variables.
pub fn eval_literals(literals: &[YLiteral], g: &FiniteGroup, base: &AutGroup, value: impl Fn(i64, usize) -> Elem) -> Elem {
    literals.iter().fold(ID, |acc, l| {
        let x = base.member(l.phi).apply(value(l.index, l.var));
        g.mul(acc, if l.sign.is_minus() { g.inv(x) } else { x })
    })
}

/// The literal `(φ, k_l, j, ε)` of a base equation at shift `k` becomes `φ(y_{k_l + k, j})^ε`.
pub fn translate_term(t: &NormalTerm<PowerAut>, shift: i64) -> Vec<YLiteral> {
    t.literals
        .iter()
        .map(|l| YLiteral { phi: l.aut.phi, index: l.aut.shift + shift, var: l.var, sign: l.sign })
        .collect()
}

/// `γ(S)` restricted to a range of shifts, or to the instances that fit an index window.
#[derive(Debug, Clone)]
pub struct TranslatedSystem {
    pub arity: usize,
    /// Shifts `k` that were instantiated.
    pub shifts: (i64, i64),
    /// Index window all equations lie in, when built with [`TranslatedSystem::for_window`].
    pub window: Option<(i64, i64)>,
    pub equations: Vec<YEquation>,
    /// Base equations whose normal form is trivial and produce no `y`-equation.
    pub trivial_sources: Vec<usize>,
}

impl TranslatedSystem {
    /// Every base equation at every shift in `lo..=hi`; structurally equal instances are merged.
    pub fn gamma_translate(sys: &PowerSystem, shifts: (i64, i64)) -> TranslatedSystem {
        Self::build(sys, shifts, None)
    }

    /// The instances whose indices all lie in `window`.
    pub fn for_window(sys: &PowerSystem, window: (i64, i64)) -> TranslatedSystem {
        let reach = sys.max_shift();
        Self::build(sys, (window.0 - reach, window.1 + reach), Some(window))
    }

    fn build(sys: &PowerSystem, shifts: (i64, i64), window: Option<(i64, i64)>) -> TranslatedSystem {
        let mut equations: Vec<YEquation> = Vec::new();
        let mut seen: std::collections::HashMap<Vec<YLiteral>, usize> = std::collections::HashMap::new();
        let mut trivial_sources = Vec::new();
        for (source, t) in sys.normal.iter().enumerate() {
            if t.literals.is_empty() {
                trivial_sources.push(source);
                continue;
            }
            for shift in shifts.0..=shifts.1 {
                let literals = translate_term(t, shift);
                if let Some((lo, hi)) = window {
                    if literals.iter().any(|l| l.index < lo || l.index > hi) {
                        continue;
                    }
                }
                match seen.get(&literals) {
                    Some(&k) => equations[k].also_from.push((source, shift)),
                    None => {
                        seen.insert(literals.clone(), equations.len());
                        equations.push(YEquation { literals, source, shift, also_from: Vec::new() });
                    }
                }
            }
        }
        TranslatedSystem { arity: sys.arity, shifts, window, equations, trivial_sources }
    }

    /// The smallest index range covering every equation, or the stated window.
    pub fn index_range(&self) -> (i64, i64) {
        if let Some(w) = self.window {
            return w;
        }
        let spans: Vec<(i64, i64)> = self.equations.iter().filter_map(|e| e.index_span()).collect();
        let lo = spans.iter().map(|s| s.0).min().unwrap_or(0);
        let hi = spans.iter().map(|s| s.1).max().unwrap_or(0);
        (lo, hi)
    }

    /// `γ^{-1}`: the base equations that produced any of the given equations.
    pub fn sources(&self, indices: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for k in indices {
            let e = &self.equations[k];
            out.insert(e.source);
            out.extend(e.also_from.iter().map(|&(s, _)| s));
        }
        out
    }

    /// `γγ^{-1}`: every stored equation produced by one of the given base equations.
    pub fn regenerate(&self, sources: &BTreeSet<usize>) -> Vec<usize> {
        (0..self.equations.len())
            .filter(|&k| {
                let e = &self.equations[k];
                sources.contains(&e.source) || e.also_from.iter().any(|(s, _)| sources.contains(s))
            })
            .collect()
    }

    pub fn contains_literals(&self, literals: &[YLiteral]) -> bool {
        self.equations.iter().any(|e| e.literals == literals)
    }

    /// For every equation and every shift `k'` that keeps it inside the instantiated range, the
    /// shifted equation is stored. Returns the first `(equation, k')` that breaks this.
    pub fn shift_coherence_violation(&self) -> Option<(usize, i64)> {
        let stored: HashSet<&[YLiteral]> = self.equations.iter().map(|e| e.literals.as_slice()).collect();
        for (k, e) in self.equations.iter().enumerate() {
            let Some((lo, hi)) = e.index_span() else { continue };
            let (from, to) = match self.window {
                Some((wlo, whi)) => (wlo - lo, whi - hi),
                None => (self.shifts.0 - e.shift, self.shifts.1 - e.shift),
            };
            for by in from..=to {
                if !stored.contains(e.shifted(by).as_slice()) {
                    return Some((k, by));
                }
            }
        }
        None
    }

    /// One equation per line with its provenance.
    pub fn render(&self, base: &AutGroup) -> String {
        let mut out = String::new();
        for e in &self.equations {
            out.push_str(&format!("{}  # eq {}, k = {}\n", e.display(base), e.source + 1, e.shift));
        }
        out
    }
}

/// Values of `y_{i,j}` for `i` in a window and `1 ≤ j ≤ arity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YAssignment {
    pub window: (i64, i64),
    pub arity: usize,
    values: Vec<Option<Elem>>,
}

impl YAssignment {
    pub fn new(window: (i64, i64), arity: usize, values: Vec<Elem>) -> YAssignment {
        assert_eq!(values.len(), ((window.1 - window.0 + 1) as usize) * arity);
        YAssignment { window, arity, values: values.into_iter().map(Some).collect() }
    }

    fn slot(&self, i: i64, j: usize) -> Option<usize> {
        (i >= self.window.0 && i <= self.window.1 && j >= 1 && j <= self.arity)
            .then(|| (i - self.window.0) as usize * self.arity + j - 1)
    }

    /// `None` outside the window or where a shift left the value undefined.
    pub fn get(&self, i: i64, j: usize) -> Option<Elem> {
        self.slot(i, j).and_then(|s| self.values[s])
    }

    /// `s_{i,j} = p_{i+k,j}`; positions whose source falls outside the window become undefined.
    pub fn shift_point(&self, k: i64) -> YAssignment {
        let mut values = vec![None; self.values.len()];
        for i in self.window.0..=self.window.1 {
            for j in 1..=self.arity {
                values[self.slot(i, j).unwrap()] = self.get(i + k, j);
            }
        }
        YAssignment { window: self.window, arity: self.arity, values }
    }

    /// Do all equations whose variables are defined here evaluate to `1`?
    pub fn satisfies(&self, t: &TranslatedSystem, g: &FiniteGroup, base: &AutGroup) -> bool {
        t.equations.iter().all(|e| {
            if e.literals.iter().any(|l| self.get(l.index, l.var).is_none()) {
                return true;
            }
            eval_literals(&e.literals, g, base, |i, j| self.get(i, j).unwrap()) == ID
        })
    }
}

/// Shifting a solution of `t` by `k` gives a solution on the overlap of the window with its shift.
pub fn shift_invariance_check(t: &TranslatedSystem, p: &YAssignment, k: i64, g: &FiniteGroup, base: &AutGroup) -> bool {
    p.shift_point(k).satisfies(t, g, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, compute_full_aut};

    fn z2() -> (FiniteGroup, AutGroup) {
        let g = catalog::cyclic(2);
        let a = compute_full_aut(&g, 60).unwrap();
        (g, a)
    }

    #[test]
    fn example_system_translates_with_unit_offset() {
        let (_, a0) = z2();
        let s = PowerSystem::parse("s1(x1) * x2 = 1", None, &a0, 0).unwrap();
        let t = TranslatedSystem::gamma_translate(&s, (-2, 2));
        let lines: Vec<String> = t.equations.iter().map(|e| e.display(&a0).to_string()).collect();
        assert_eq!(lines[0], "y[-1,1] * y[-2,2] = 1");
        assert_eq!(lines[4], "y[3,1] * y[2,2] = 1");
        assert_eq!(lines.len(), 5);
        assert!(t.shift_coherence_violation().is_none());
    }

    #[test]
    fn unshifted_equation_keeps_indices() {
        let (_, a0) = z2();
        let s = PowerSystem::parse("x1 = 1", None, &a0, 0).unwrap();
        let t = TranslatedSystem::gamma_translate(&s, (-1, 1));
        let lines: Vec<String> = t.equations.iter().map(|e| e.display(&a0).to_string()).collect();
        assert_eq!(lines, ["y[-1,1] = 1", "y[0,1] = 1", "y[1,1] = 1"]);
    }

    #[test]
    fn commutator_gives_four_literals() {
        let s3 = catalog::symmetric(3);
        let a0 = compute_full_aut(&s3, 60).unwrap();
        let s = PowerSystem::parse("[x1, a1(x2)] = 1", None, &a0, 0).unwrap();
        let t = TranslatedSystem::gamma_translate(&s, (0, 0));
        assert_eq!(t.equations[0].display(&a0).to_string(), "y[0,1]^-1 * a1(y[0,2])^-1 * y[0,1] * a1(y[0,2]) = 1");
    }

    #[test]
    fn templates_expand() {
        let s3 = catalog::symmetric(3);
        let a0 = compute_full_aut(&s3, 60).unwrap();
        let s = PowerSystem::parse("[x1, {k}({phi}(x2))] for k in -1..1 for phi in aut", None, &a0, 0).unwrap();
        assert_eq!(s.len(), 18);
        assert_eq!(s.max_shift(), 1);
        let s = PowerSystem::parse("{k}(x1) for k in *", Some(1), &a0, 2).unwrap();
        assert_eq!(s.len(), 5);
        let err = PowerSystem::parse("{k}(x1)", Some(1), &a0, 2).unwrap_err();
        assert!(err.to_string().contains("placeholder"), "{err}");
    }

    #[test]
    fn constants_are_rejected() {
        let (_, a0) = z2();
        let e = Equation::new(crate::term::Term::Const(1));
        assert!(PowerSystem::new(1, vec![e], &a0).is_err());
    }

    #[test]
    fn window_restriction() {
        let (_, a0) = z2();
        let s = PowerSystem::parse("s1(x1) * x2 = 1", None, &a0, 0).unwrap();
        let t = TranslatedSystem::for_window(&s, (-2, 2));
        assert_eq!(t.equations.len(), 4);
        assert!(t.shift_coherence_violation().is_none());
    }

    #[test]
    fn shifted_solutions_remain_solutions() {
        let (g, a0) = z2();
        let s = PowerSystem::parse("s1(x1) * x2 = 1", None, &a0, 0).unwrap();
        let t = TranslatedSystem::for_window(&s, (-2, 2));
        // y_{k,2} = y_{k+1,1}^{-1}
        let mut values = vec![0; 10];
        values[2 * 2] = 1; // y[0,1]
        values[2 * 1 + 1] = 1; // y[-1,2]
        let p = YAssignment::new((-2, 2), 2, values);
        assert!(p.satisfies(&t, &g, &a0));
        assert_eq!(p.shift_point(0), p);
        for k in -4..=4 {
            assert!(shift_invariance_check(&t, &p, k, &g, &a0));
        }
        let mut bad = vec![0; 10];
        bad[2 * 2] = 1;
        let q = YAssignment::new((-2, 2), 2, bad);
        assert!(!q.satisfies(&t, &g, &a0));
        assert!(!shift_invariance_check(&t, &q, 1, &g, &a0));
    }
}

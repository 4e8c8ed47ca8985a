//! Exhaustive solution of equation systems over a finite group.
//!
//! Points of `G^n` are mixed-radix codes with `x1` as the most significant digit. Equations are
//! compiled to per-literal lookup tables and checked cheapest first.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::group::{Automorphism, Elem, FiniteGroup, ID};
use crate::term::{evaluate, normalize, parse_system, Binding, Equation, Term};

/// A finite set of equations in `x1..xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqSystem {
    pub arity: usize,
    pub equations: Vec<Equation>,
    pub constants_allowed: bool,
}

impl EqSystem {
    pub fn new(arity: usize, equations: Vec<Equation>) -> Result<EqSystem> {
        let sys = EqSystem { arity, equations, constants_allowed: false };
        sys.check_arity()?;
        Ok(sys)
    }

    pub fn with_constants(mut self, on: bool) -> EqSystem {
        self.constants_allowed = on;
        self
    }

    /// Parses one equation per line. Without an explicit arity the largest variable index is used.
    pub fn parse(text: &str, arity: Option<usize>, binding: &Binding<'_>) -> Result<EqSystem> {
        let equations = parse_system(text, arity, binding)?;
        let arity = arity.unwrap_or_else(|| equations.iter().map(|e| e.lhs.max_var()).max().unwrap_or(0).max(1));
        Ok(EqSystem { arity, equations, constants_allowed: binding.constants })
    }

    pub fn has_constants(&self) -> bool {
        self.equations.iter().any(|e| e.lhs.has_constants())
    }

    fn check_arity(&self) -> Result<()> {
        for e in &self.equations {
            if e.lhs.max_var() > self.arity {
                return Err(Error::validation(
                    "system",
                    format!("equation `{}` uses x{} but the arity is {}", e.lhs, e.lhs.max_var(), self.arity),
                ));
            }
        }
        Ok(())
    }
}

/// One equation as lookup tables: the product of `tables[k][point[vars[k]]]` must equal `target`.
#[derive(Debug, Clone)]
struct CompiledEquation {
    vars: Vec<usize>,
    tables: Vec<Vec<u32>>,
    target: u32,
}

/// A system ready for fast evaluation.
#[derive(Debug, Clone)]
pub struct CompiledSystem<'g> {
    group: &'g FiniteGroup,
    arity: usize,
    equations: Vec<CompiledEquation>,
}

impl<'g> CompiledSystem<'g> {
    pub fn new(sys: &EqSystem, binding: &Binding<'g>) -> Result<CompiledSystem<'g>> {
        sys.check_arity()?;
        let b = binding.with_constants(sys.constants_allowed);
        let g = b.group;
        let mut equations = Vec::with_capacity(sys.equations.len());
        for eq in &sys.equations {
            let n = normalize(&eq.lhs, &b)?;
            let mut vars = Vec::with_capacity(n.len());
            let mut tables = Vec::with_capacity(n.len());
            for l in &n.literals {
                let aut = b.auts.member(l.aut);
                let table: Vec<u32> = g
                    .elements()
                    .map(|x| {
                        let y = aut.apply(x);
                        (if l.sign.is_minus() { g.inv(y) } else { y }) as u32
                    })
                    .collect();
                vars.push(l.var - 1);
                tables.push(table);
            }
            let target = n.constant.map_or(ID, |c| g.inv(c)) as u32;
            equations.push(CompiledEquation { vars, tables, target });
        }
        equations.sort_by_key(|e| e.vars.len());
        Ok(CompiledSystem { group: g, arity: sys.arity, equations })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn satisfies(&self, point: &[Elem]) -> bool {
        let g = self.group;
        self.equations.iter().all(|e| {
            let mut acc = ID;
            for (v, t) in e.vars.iter().zip(&e.tables) {
                acc = g.mul(acc, t[point[*v]] as Elem);
            }
            acc as u32 == e.target
        })
    }
}

/// Solutions of a system, stored as sorted point codes when small enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub arity: usize,
    pub group_order: usize,
    pub cardinality: u64,
    points: Option<Vec<u64>>,
}

impl SolutionSet {
    /// Builds a materialized set from explicit points.
    pub fn from_points(arity: usize, group_order: usize, points: impl IntoIterator<Item = Vec<Elem>>) -> SolutionSet {
        let mut codes: Vec<u64> = points.into_iter().map(|p| encode(&p, group_order)).collect();
        codes.sort_unstable();
        codes.dedup();
        SolutionSet { arity, group_order, cardinality: codes.len() as u64, points: Some(codes) }
    }

    pub fn is_materialized(&self) -> bool {
        self.points.is_some()
    }

    pub fn codes(&self) -> Option<&[u64]> {
        self.points.as_deref()
    }

    /// Points in code order, if materialized.
    pub fn points(&self) -> Option<impl Iterator<Item = Vec<Elem>> + '_> {
        let (n, k) = (self.group_order, self.arity);
        self.points.as_ref().map(move |ps| ps.iter().map(move |&c| decode(c, n, k)))
    }

    pub fn contains(&self, point: &[Elem]) -> Option<bool> {
        let code = encode(point, self.group_order);
        self.points.as_ref().map(|ps| ps.binary_search(&code).is_ok())
    }

    /// Set equality; both sides must be materialized to compare beyond cardinality.
    pub fn same_points(&self, other: &SolutionSet) -> Option<bool> {
        match (&self.points, &other.points) {
            (Some(a), Some(b)) => Some(self.arity == other.arity && a == b),
            _ if self.cardinality != other.cardinality => Some(false),
            _ => None,
        }
    }
}

pub fn encode(point: &[Elem], n: usize) -> u64 {
    point.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64)
}

pub fn decode(mut code: u64, n: usize, arity: usize) -> Vec<Elem> {
    let mut p = vec![ID; arity];
    for slot in p.iter_mut().rev() {
        *slot = (code % n as u64) as Elem;
        code /= n as u64;
    }
    p
}

/// `n^arity`, or a size-limit error when above `cap`.
pub fn tuple_space(n: usize, arity: usize, cap: u64) -> Result<u64> {
    let total = (n as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::size_limit(
            "tuple space |G|^n",
            cap as u128,
            total,
            "reduce the number of variables or use a smaller group",
        ));
    }
    Ok(total as u64)
}

const CHUNK: u64 = 1 << 14;

/// Visits the codes in `[start, end)` with their decoded points, odometer style.
fn for_each_point(start: u64, end: u64, n: usize, arity: usize, mut f: impl FnMut(u64, &[Elem]) -> bool) {
    if start >= end {
        return;
    }
    let mut p = decode(start, n, arity);
    let mut code = start;
    loop {
        if !f(code, &p) {
            return;
        }
        code += 1;
        if code >= end {
            return;
        }
        for slot in p.iter_mut().rev() {
            *slot += 1;
            if *slot < n {
                break;
            }
            *slot = 0;
        }
    }
}

pub fn solve_system(sys: &EqSystem, binding: &Binding<'_>, caps: &Caps) -> Result<SolutionSet> {
    let compiled = CompiledSystem::new(sys, binding)?;
    solve_compiled(&compiled, caps)
}

pub fn solve_compiled(c: &CompiledSystem<'_>, caps: &Caps) -> Result<SolutionSet> {
    let n = c.group.order();
    let total = tuple_space(n, c.arity, caps.enumeration)?;
    let stored = AtomicU64::new(0);
    let limit = caps.materialize;
    let chunks: Vec<(u64, Vec<u64>)> = (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .map(|k| {
            let (start, end) = (k * CHUNK, ((k + 1) * CHUNK).min(total));
            let mut count = 0u64;
            let mut local = Vec::new();
            for_each_point(start, end, n, c.arity, |code, p| {
                if c.satisfies(p) {
                    count += 1;
                    if stored.load(Ordering::Relaxed) <= limit {
                        local.push(code);
                    }
                }
                true
            });
            stored.fetch_add(local.len() as u64, Ordering::Relaxed);
            (count, local)
        })
        .collect();
    let cardinality = chunks.iter().map(|(c, _)| c).sum();
    let points = (cardinality <= limit).then(|| chunks.into_iter().flat_map(|(_, p)| p).collect());
    Ok(SolutionSet { arity: c.arity, group_order: n, cardinality, points })
}

/// Single-threaded evaluation of the unnormalized syntax trees, for cross-checking.
pub fn solve_reference(sys: &EqSystem, binding: &Binding<'_>) -> Result<SolutionSet> {
    let b = binding.with_constants(sys.constants_allowed);
    let n = b.group.order();
    let total = (n as u64).pow(sys.arity as u32);
    let mut points = Vec::new();
    for code in 0..total {
        let p = decode(code, n, sys.arity);
        let mut ok = true;
        for e in &sys.equations {
            if evaluate(&e.lhs, &p, &b)? != ID {
                ok = false;
                break;
            }
        }
        if ok {
            points.push(p);
        }
    }
    Ok(SolutionSet::from_points(sys.arity, n, points))
}

/// Finds the first point (in code order) satisfying `sys` for which `pred` holds.
pub fn find_first(
    c: &CompiledSystem<'_>,
    caps: &Caps,
    pred: impl Fn(&[Elem]) -> bool + Sync,
) -> Result<Option<Vec<Elem>>> {
    let n = c.group.order();
    let total = tuple_space(n, c.arity, caps.enumeration)?;
    Ok((0..total.div_ceil(CHUNK)).into_par_iter().find_map_first(|k| {
        let (start, end) = (k * CHUNK, ((k + 1) * CHUNK).min(total));
        let mut hit = None;
        for_each_point(start, end, n, c.arity, |_, p| {
            if c.satisfies(p) && pred(p) {
                hit = Some(p.to_vec());
                return false;
            }
            true
        });
        hit
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inclusion {
    Included,
    /// A point of the set that satisfies none of the targets.
    Counterexample(Vec<Elem>),
}

/// Is every point of `set` a solution of at least one target equation?
pub fn check_inclusion(
    set: &SolutionSet,
    targets: &[Equation],
    binding: &Binding<'_>,
) -> Result<Inclusion> {
    let Some(points) = set.points() else {
        return Err(Error::validation(
            "inclusion check",
            "the solution set was counted but not stored; use check_system_inclusion",
        ));
    };
    let targets = compile_targets(targets, set.arity, binding)?;
    for p in points {
        if !targets.iter().any(|t| t.satisfies(&p)) {
            return Ok(Inclusion::Counterexample(p));
        }
    }
    Ok(Inclusion::Included)
}

/// Streaming form of `check_inclusion` for `V(sys)` that never stores the solution set.
pub fn check_system_inclusion(
    sys: &EqSystem,
    targets: &[Equation],
    binding: &Binding<'_>,
    caps: &Caps,
) -> Result<Inclusion> {
    let c = CompiledSystem::new(sys, binding)?;
    let targets = compile_targets(targets, sys.arity, binding)?;
    Ok(match find_first(&c, caps, |p| !targets.iter().any(|t| t.satisfies(p)))? {
        Some(p) => Inclusion::Counterexample(p),
        None => Inclusion::Included,
    })
}

fn compile_targets<'g>(targets: &[Equation], arity: usize, binding: &Binding<'g>) -> Result<Vec<CompiledSystem<'g>>> {
    targets
        .iter()
        .map(|t| {
            let s = EqSystem::new(arity, vec![t.clone()])?.with_constants(binding.constants);
            CompiledSystem::new(&s, binding)
        })
        .collect()
}

/// `{ x : φ(x)·u = v·x }`.
pub fn twisted_conjugacy_solve(phi: &Automorphism, u: Elem, v: Elem, g: &FiniteGroup) -> Vec<Elem> {
    g.elements().filter(|&x| g.mul(phi.apply(x), u) == g.mul(v, x)).collect()
}

/// The system `{ lhs }` as a convenience for single equations.
pub fn single(arity: usize, lhs: Term) -> Result<EqSystem> {
    EqSystem::new(arity, vec![Equation::new(lhs)])
}

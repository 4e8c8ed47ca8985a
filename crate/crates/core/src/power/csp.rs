//! Finite constraint problems over the variables `y_{i,j}` of an index window, solved by
//! depth-first search, and the projections behind `Z`-equivalence.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::gamma::{TranslatedSystem, YLiteral};
use crate::error::{Error, Result};
use crate::group::{AutGroup, Elem, FiniteGroup, ID};
use crate::solver::{decode, encode, tuple_space};

/// What to do with literals whose index lies outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// Drop the whole equation.
    Exclude,
    /// The variable is the identity there, so the literal is dropped.
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YSpace {
    pub window: (i64, i64),
    pub arity: usize,
}

impl YSpace {
    pub fn var(&self, i: i64, j: usize) -> Option<usize> {
        (i >= self.window.0 && i <= self.window.1 && j >= 1 && j <= self.arity)
            .then(|| (i - self.window.0) as usize * self.arity + j - 1)
    }

    pub fn coords(&self, v: usize) -> (i64, usize) {
        (self.window.0 + (v / self.arity) as i64, v % self.arity + 1)
    }

    pub fn len(&self) -> usize {
        (self.window.1 - self.window.0 + 1) as usize * self.arity
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

struct Lit {
    var: usize,
    phi: usize,
    minus: bool,
}

pub struct BoxCsp<'a> {
    g: &'a FiniteGroup,
    base: &'a AutGroup,
    pub space: YSpace,
    constraints: Vec<Vec<Lit>>,
    occurs: Vec<Vec<usize>>,
}

impl<'a> BoxCsp<'a> {
    pub fn new<'e>(
        g: &'a FiniteGroup,
        base: &'a AutGroup,
        space: YSpace,
        equations: impl IntoIterator<Item = &'e [YLiteral]>,
        edge: Edge,
    ) -> BoxCsp<'a> {
        let mut constraints = Vec::new();
        for eq in equations {
            let mut lits = Vec::with_capacity(eq.len());
            let mut outside = false;
            for l in eq {
                match space.var(l.index, l.var) {
                    Some(var) => lits.push(Lit { var, phi: l.phi, minus: l.sign.is_minus() }),
                    None => outside = true,
                }
            }
            if (outside && edge == Edge::Exclude) || lits.is_empty() {
                continue;
            }
            constraints.push(lits);
        }
        let mut occurs = vec![Vec::new(); space.len()];
        for (c, lits) in constraints.iter().enumerate() {
            for l in lits {
                if occurs[l.var].last() != Some(&c) {
                    occurs[l.var].push(c);
                }
            }
        }
        BoxCsp { g, base, space, constraints, occurs }
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    fn holds(&self, c: usize, vals: &[Elem]) -> bool {
        let mut acc = ID;
        for l in &self.constraints[c] {
            let x = self.base.member(l.phi).apply(vals[l.var]);
            acc = self.g.mul(acc, if l.minus { self.g.inv(x) } else { x });
        }
        acc == ID
    }

    /// Variables and constraints connected to `seeds`. Everything else is satisfied by the
    /// identity, since the constraints are constant-free.
    fn component(&self, seeds: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut in_vars = vec![false; self.space.len()];
        let mut in_cons = vec![false; self.constraints.len()];
        let mut stack: Vec<usize> = seeds.to_vec();
        for &v in seeds {
            in_vars[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &c in &self.occurs[v] {
                if in_cons[c] {
                    continue;
                }
                in_cons[c] = true;
                for l in &self.constraints[c] {
                    if !in_vars[l.var] {
                        in_vars[l.var] = true;
                        stack.push(l.var);
                    }
                }
            }
        }
        let vars = (0..in_vars.len()).filter(|&v| in_vars[v]).collect();
        let cons = (0..in_cons.len()).filter(|&c| in_cons[c]).collect();
        (vars, cons)
    }

    /// Depth-first search over `order` with the other entries of `vals` held fixed. Returns
    /// `false` once `visit` asks to stop.
    fn search(
        &self,
        order: &[usize],
        cons: &[usize],
        vals: &mut [Elem],
        budget: u64,
        mut rng: Option<&mut ChaCha8Rng>,
        visit: &mut dyn FnMut(&[Elem]) -> bool,
    ) -> Result<bool> {
        let mut pos = vec![usize::MAX; vals.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
        for &c in cons {
            let last = self.constraints[c].iter().map(|l| pos[l.var]).filter(|&p| p != usize::MAX).max();
            match last {
                Some(p) => checks[p].push(c),
                None if !self.holds(c, vals) => return Ok(true),
                None => {}
            }
        }
        let n = self.g.order();
        let mut nodes = 0u64;
        let mut candidates: Vec<Vec<Elem>> = vec![(0..n).collect(); order.len()];
        let mut next = vec![0usize; order.len()];
        let mut depth = 0usize;
        if order.is_empty() {
            return Ok(visit(vals));
        }
        if let Some(r) = rng.as_deref_mut() {
            candidates[0].shuffle(r);
        }
        loop {
            if next[depth] == n {
                next[depth] = 0;
                vals[order[depth]] = ID;
                if depth == 0 {
                    return Ok(true);
                }
                depth -= 1;
                continue;
            }
            let value = candidates[depth][next[depth]];
            next[depth] += 1;
            nodes += 1;
            if nodes > budget {
                return Err(Error::size_limit(
                    "search nodes over the index window",
                    budget as u128,
                    nodes as u128,
                    "shrink the window, the support bound or the base group",
                ));
            }
            vals[order[depth]] = value;
            if !checks[depth].iter().all(|&c| self.holds(c, vals)) {
                continue;
            }
            if depth + 1 == order.len() {
                if !visit(vals) {
                    return Ok(false);
                }
                continue;
            }
            depth += 1;
            if let Some(r) = rng.as_deref_mut() {
                candidates[depth].shuffle(r);
            }
        }
    }

    /// Calls `visit` on every solution until it returns `false`; returns the number visited.
    pub fn for_each_solution(&self, budget: u64, mut visit: impl FnMut(&[Elem]) -> bool) -> Result<u64> {
        let order: Vec<usize> = (0..self.space.len()).collect();
        let cons: Vec<usize> = (0..self.constraints.len()).collect();
        let mut vals = vec![ID; self.space.len()];
        let mut count = 0u64;
        self.search(&order, &cons, &mut vals, budget, None, &mut |p| {
            count += 1;
            visit(p)
        })?;
        Ok(count)
    }

    /// A solution reached by depth-first search with shuffled value order.
    pub fn random_solution(&self, rng: &mut ChaCha8Rng, budget: u64) -> Result<Option<Vec<Elem>>> {
        let order: Vec<usize> = (0..self.space.len()).collect();
        let cons: Vec<usize> = (0..self.constraints.len()).collect();
        let mut vals = vec![ID; self.space.len()];
        let mut found = None;
        self.search(&order, &cons, &mut vals, budget, Some(rng), &mut |p| {
            found = Some(p.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Codes (see [`encode`]) of the assignments of `z` that extend to a solution.
    pub fn project(&self, z: &[usize], enumeration_cap: u64, budget: u64) -> Result<Vec<u64>> {
        let n = self.g.order();
        let total = tuple_space(n, z.len(), enumeration_cap)?;
        let (vars, cons) = self.component(z);
        let order: Vec<usize> = vars.into_iter().filter(|v| !z.contains(v)).collect();
        let results: Vec<Result<Option<u64>>> = (0..total)
            .into_par_iter()
            .map(|code| {
                let point = decode(code, n, z.len());
                let mut vals = vec![ID; self.space.len()];
                for (&v, &x) in z.iter().zip(&point) {
                    vals[v] = x;
                }
                let mut hit = false;
                self.search(&order, &cons, &mut vals, budget, None, &mut |_| {
                    hit = true;
                    false
                })?;
                Ok(hit.then_some(code))
            })
            .collect();
        let mut out = Vec::new();
        for r in results {
            if let Some(c) = r? {
                out.push(c);
            }
        }
        Ok(out)
    }
}

fn z_vars(space: &YSpace, z: &[(i64, usize)]) -> Result<Vec<usize>> {
    z.iter()
        .map(|&(i, j)| {
            space.var(i, j).ok_or_else(|| {
                Error::validation(
                    "Z",
                    format!("y[{i},{j}] lies outside the window {}..{}", space.window.0, space.window.1),
                )
            })
        })
        .collect()
}

/// Distance from the set `z` to the nearest window edge.
pub fn margin(window: (i64, i64), z: &[(i64, usize)]) -> Option<i64> {
    let lo = z.iter().map(|p| p.0).min()?;
    let hi = z.iter().map(|p| p.0).max()?;
    Some((lo - window.0).min(window.1 - hi))
}

fn csp_for<'a>(t: &TranslatedSystem, subset: &[usize], g: &'a FiniteGroup, base: &'a AutGroup) -> BoxCsp<'a> {
    let space = YSpace { window: t.index_range(), arity: t.arity };
    BoxCsp::new(g, base, space, subset.iter().map(|&k| t.equations[k].literals.as_slice()), Edge::Exclude)
}

#[derive(Debug, Clone)]
pub struct ZSubsystem {
    pub z: Vec<(i64, usize)>,
    /// Indices into the translated system, in the order they were accepted.
    pub equations: Vec<usize>,
    /// Projection onto `Z`, shared by the subsystem and the whole windowed system.
    pub projection: Vec<u64>,
    pub candidates_tried: usize,
    pub margin: Option<i64>,
}

/// A finite subsystem with the same projection onto `z` as the whole windowed system, built by
/// accepting, in provenance-then-shift order, each equation that shrinks the projection.
pub fn gamma_z_subsystem(
    t: &TranslatedSystem,
    z: &[(i64, usize)],
    g: &FiniteGroup,
    base: &AutGroup,
    enumeration_cap: u64,
) -> Result<ZSubsystem> {
    let all: Vec<usize> = (0..t.equations.len()).collect();
    let full_csp = csp_for(t, &all, g, base);
    let zv = z_vars(&full_csp.space, z)?;
    let target = full_csp.project(&zv, enumeration_cap, enumeration_cap)?;
    let mut order = all;
    order.sort_by_key(|&k| (t.equations[k].source, t.equations[k].shift));
    let mut chosen: Vec<usize> = Vec::new();
    let mut projection = csp_for(t, &chosen, g, base).project(&zv, enumeration_cap, enumeration_cap)?;
    let mut tried = 0;
    for k in order {
        if projection == target {
            break;
        }
        tried += 1;
        chosen.push(k);
        let next = csp_for(t, &chosen, g, base).project(&zv, enumeration_cap, enumeration_cap)?;
        if next.len() < projection.len() {
            projection = next;
        } else {
            chosen.pop();
        }
    }
    if projection != target {
        return Err(Error::Internal("greedy Z-subsystem did not reach the projection of the whole system".into()));
    }
    Ok(ZSubsystem {
        z: z.to_vec(),
        equations: chosen,
        projection,
        candidates_tried: tried,
        margin: margin(t.index_range(), z),
    })
}

#[derive(Debug, Clone)]
pub struct ZkCheck {
    pub zk: Vec<(i64, usize)>,
    pub equivalent: bool,
    /// An assignment of `Z_k` in one projection but not the other.
    pub witness: Option<Vec<Elem>>,
    pub margin: Option<i64>,
}

/// Compares the projections of `sub` and of all of `t` onto `Z_k = { y_{i+k,j} : (i,j) ∈ c }`.
pub fn zk_equivalence_check(
    t: &TranslatedSystem,
    sub: &[usize],
    c: &[(i64, usize)],
    k: i64,
    g: &FiniteGroup,
    base: &AutGroup,
    enumeration_cap: u64,
) -> Result<ZkCheck> {
    let zk: Vec<(i64, usize)> = c.iter().map(|&(i, j)| (i + k, j)).collect();
    let all: Vec<usize> = (0..t.equations.len()).collect();
    let full_csp = csp_for(t, &all, g, base);
    let zv = z_vars(&full_csp.space, &zk)?;
    let full = full_csp.project(&zv, enumeration_cap, enumeration_cap)?;
    let part = csp_for(t, sub, g, base).project(&zv, enumeration_cap, enumeration_cap)?;
    let witness = part
        .iter()
        .find(|c| full.binary_search(c).is_err())
        .or_else(|| full.iter().find(|c| part.binary_search(c).is_err()))
        .map(|&code| decode(code, g.order(), zk.len()));
    Ok(ZkCheck { equivalent: witness.is_none(), witness, margin: margin(t.index_range(), &zk), zk })
}

/// Projection of a point onto the given variables, as a code.
pub fn project_point(space: &YSpace, vals: &[Elem], z: &[(i64, usize)], n: usize) -> Option<u64> {
    let mut point = Vec::with_capacity(z.len());
    for &(i, j) in z {
        point.push(vals[space.var(i, j)?]);
    }
    Some(encode(&point, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, compute_full_aut};
    use crate::power::gamma::{PowerSystem, YAssignment};

    fn example(window: (i64, i64)) -> (FiniteGroup, AutGroup, TranslatedSystem) {
        let g = catalog::cyclic(2);
        let a0 = compute_full_aut(&g, 60).unwrap();
        let s = PowerSystem::parse("s1(x1) * x2 = 1", None, &a0, 0).unwrap();
        let t = TranslatedSystem::for_window(&s, window);
        (g, a0, t)
    }

    /// Brute-force projection over every point of the window.
    fn brute_projection(t: &TranslatedSystem, sub: &[usize], g: &FiniteGroup, a0: &AutGroup, z: &[(i64, usize)]) -> Vec<u64> {
        let space = YSpace { window: t.index_range(), arity: t.arity };
        let n = g.order();
        let mut out = std::collections::BTreeSet::new();
        for code in 0..(n as u64).pow(space.len() as u32) {
            let vals = decode(code, n, space.len());
            let p = YAssignment::new(space.window, space.arity, vals.clone());
            let ok = sub.iter().all(|&k| {
                crate::power::gamma::eval_literals(&t.equations[k].literals, g, a0, |i, j| p.get(i, j).unwrap()) == ID
            });
            if ok {
                out.insert(project_point(&space, &vals, z, n).unwrap());
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn solutions_match_brute_force() {
        let (g, a0, t) = example((-2, 2));
        let all: Vec<usize> = (0..t.equations.len()).collect();
        let csp = csp_for(&t, &all, &g, &a0);
        let count = csp.for_each_solution(1 << 30, |_| true).unwrap();
        // 10 variables, 4 equations each fixing one variable
        assert_eq!(count, 1 << 6);
        let z = [(0, 1), (-1, 2)];
        let zv = z_vars(&csp.space, &z).unwrap();
        assert_eq!(csp.project(&zv, 1 << 20, 1 << 30).unwrap(), brute_projection(&t, &all, &g, &a0, &z));
    }

    #[test]
    fn empty_z_gives_empty_subsystem() {
        let (g, a0, t) = example((-2, 2));
        let s = gamma_z_subsystem(&t, &[], &g, &a0, 1 << 20).unwrap();
        assert!(s.equations.is_empty());
    }

    #[test]
    fn full_z_gives_the_full_solution_set() {
        let (g, a0, t) = example((-1, 1));
        let z: Vec<(i64, usize)> = (-1..=1).flat_map(|i| [(i, 1), (i, 2)]).collect();
        let s = gamma_z_subsystem(&t, &z, &g, &a0, 1 << 20).unwrap();
        let all: Vec<usize> = (0..t.equations.len()).collect();
        assert_eq!(brute_projection(&t, &s.equations, &g, &a0, &z), brute_projection(&t, &all, &g, &a0, &z));
    }

    #[test]
    fn single_variable_z_and_shifts() {
        let (g, a0, t) = example((-3, 3));
        let s = gamma_z_subsystem(&t, &[(0, 1)], &g, &a0, 1 << 20).unwrap();
        // y[0,1] is unconstrained, so nothing is needed
        assert!(s.equations.is_empty());
        let z = [(0, 1), (-1, 2)];
        let s = gamma_z_subsystem(&t, &z, &g, &a0, 1 << 20).unwrap();
        assert_eq!(s.equations.len(), 1);
        let all: Vec<usize> = (0..t.equations.len()).collect();
        assert_eq!(s.projection, brute_projection(&t, &all, &g, &a0, &z));
        let c = [(0, 1)];
        assert!(zk_equivalence_check(&t, &[], &c, 1, &g, &a0, 1 << 20).unwrap().equivalent);
        let regenerated = t.regenerate(&t.sources(s.equations.iter().copied()));
        assert!(zk_equivalence_check(&t, &regenerated, &z, 1, &g, &a0, 1 << 20).unwrap().equivalent);
        let broken = zk_equivalence_check(&t, &[], &z, 1, &g, &a0, 1 << 20).unwrap();
        assert!(!broken.equivalent && broken.witness.is_some());
        assert!(zk_equivalence_check(&t, &[], &[(5, 1)], 0, &g, &a0, 1 << 20).is_err());
    }
}

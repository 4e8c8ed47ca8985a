use std::collections::{HashMap, VecDeque};

use super::{Elem, FiniteGroup};
use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image list.
///
/// Products act left to right: `(p * q)(i) = q(p(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    /// From a 0-based image list; rejects anything that is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut hit[i], true) {
                return Err(Error::validation(
                    "permutation",
                    format!("image list {:?} is not a bijection", images.iter().map(|i| i + 1).collect::<Vec<_>>()),
                ));
            }
        }
        Ok(Perm(images.into_iter().map(|i| i as u32).collect()))
    }

    /// From 1-based cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                let q = c[(k + 1) % c.len()];
                if p == 0 || p > n || q == 0 || q > n {
                    return Err(Error::validation("permutation", format!("point out of range in cycle {c:?}")));
                }
                img[p - 1] = q - 1;
            }
        }
        Perm::from_images(img)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }
}

/// Cycle notation with 1-based points and comma separators, `()` for the identity.
pub fn cycle_name(p: &Perm) -> String {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p.apply(start) == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = p.apply(start);
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = p.apply(i);
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Closes a set of permutations under composition.
///
/// Elements are indexed identity first, then in breadth-first discovery order where each
/// dequeued element is multiplied on the right by every generator in input order.
pub fn build_from_generators(name: &str, point_count: usize, perms: &[Perm], cap: usize) -> Result<FiniteGroup> {
    for p in perms {
        if p.degree() != point_count {
            return Err(Error::validation(
                "permutation",
                format!("degree {} differs from point count {point_count}", p.degree()),
            ));
        }
    }
    let mut elements = vec![Perm::identity(point_count)];
    let mut index: HashMap<Perm, Elem> = HashMap::from([(elements[0].clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for g in perms {
            let y = elements[x].then(g);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(Error::size_limit(
                        "generated group order",
                        cap as u128,
                        elements.len() as u128 + 1,
                        "the generated group exceeds the group-order cap",
                    ));
                }
                index.insert(y.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }
    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for (a, pa) in elements.iter().enumerate() {
        for (b, pb) in elements.iter().enumerate() {
            mul[a * n + b] = index[&pa.then(pb)] as u32;
        }
    }
    let names = elements.iter().map(cycle_name).collect();
    let mut generators: Vec<Elem> = Vec::new();
    for p in perms {
        let i = index[p];
        if i != 0 && !generators.contains(&i) {
            generators.push(i);
        }
    }
    FiniteGroup::from_canonical(name, names, mul, generators)
}

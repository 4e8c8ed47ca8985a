//! Finite groups given by multiplication tables, their subgroups and automorphisms.

mod aut;
pub mod catalog;
pub mod io;
mod perm;

pub use aut::{compute_full_aut, generate_aut_subgroup, inner_automorphisms, AutGroup, Automorphism};
pub use perm::{build_from_generators, cycle_name, Perm};

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Element of a finite group, identified by its canonical index. The identity is always 0.
pub type Elem = usize;

/// Identity index in every [`FiniteGroup`].
pub const ID: Elem = 0;

/// Groups up to this order get an exhaustive associativity audit.
const FULL_AUDIT_ORDER: usize = 64;
const RANDOM_AUDIT_TRIPLES: usize = 100_000;

/// A finite group stored as a full Cayley table over canonical indices `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    names: Vec<String>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<Elem>,
    index: HashMap<String, Elem>,
}

impl FiniteGroup {
    /// Builds a group from a table whose identity already sits at index 0, then audits it.
    pub(crate) fn from_canonical(
        name: impl Into<String>,
        names: Vec<String>,
        mul: Vec<u32>,
        generators: Vec<Elem>,
    ) -> Result<FiniteGroup> {
        let order = names.len();
        if mul.len() != order * order {
            return Err(Error::validation("table shape", "table is not square"));
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::validation(
                    "inverse",
                    format!("element {} has no inverse", names[a]),
                ));
            }
        }
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect::<HashMap<_, _>>();
        if index.len() != order {
            return Err(Error::validation("element names", "element names are not distinct"));
        }
        let mut g = FiniteGroup {
            name: name.into(),
            names,
            mul,
            inv,
            generators,
            index,
        };
        g.audit()?;
        if g.generators.is_empty() && order > 1 {
            g.generators = g.greedy_generators();
        }
        Ok(g)
    }

    /// Validates a multiplication table given as rows of element indices.
    ///
    /// The identity is detected from the table and moved to index 0; every other element keeps
    /// its relative row order. Errors name the violated axiom and a witness.
    pub fn build_from_table(name: &str, names: Vec<String>, table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let order = names.len();
        if order == 0 {
            return Err(Error::validation("table shape", "empty table"));
        }
        if table.len() != order || table.iter().any(|r| r.len() != order) {
            return Err(Error::validation("table shape", format!("expected a {order}x{order} table")));
        }
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c >= order {
                    return Err(Error::validation(
                        "closure",
                        format!("entry ({}, {}) is out of range", names[a], b),
                    ));
                }
            }
        }
        for a in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for b in 0..order {
                let r = table[a][b];
                if std::mem::replace(&mut seen_row[r], true) {
                    return Err(Error::validation(
                        "latin square",
                        format!("row {} repeats {}", names[a], names[r]),
                    ));
                }
                let c = table[b][a];
                if std::mem::replace(&mut seen_col[c], true) {
                    return Err(Error::validation(
                        "latin square",
                        format!("column {} repeats {}", names[a], names[c]),
                    ));
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::validation("identity", "no two-sided identity element"))?;

        let mut order_map: Vec<usize> = Vec::with_capacity(order);
        order_map.push(identity);
        order_map.extend((0..order).filter(|&i| i != identity));
        let mut position = vec![0usize; order];
        for (new, &old) in order_map.iter().enumerate() {
            position[old] = new;
        }
        let new_names = order_map.iter().map(|&old| names[old].clone()).collect::<Vec<_>>();
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                mul[a * order + b] = position[table[order_map[a]][order_map[b]]] as u32;
            }
        }
        FiniteGroup::from_canonical(name, new_names, mul, Vec::new())
    }

    /// Full associativity audit for small groups, randomized above that.
    fn audit(&self) -> Result<()> {
        let n = self.order();
        for g in 0..n {
            if self.mul(ID, g) != g || self.mul(g, ID) != g {
                return Err(Error::validation("identity", format!("index 0 is not neutral on {}", self.names[g])));
            }
            if self.mul(g, self.inv(g)) != ID || self.mul(self.inv(g), g) != ID {
                return Err(Error::validation("inverse", format!("bad inverse for {}", self.names[g])));
            }
        }
        let check = |a: Elem, b: Elem, c: Elem| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::validation(
                    "associativity",
                    format!(
                        "witness triple ({}, {}, {})",
                        self.names[a], self.names[b], self.names[c]
                    ),
                ));
            }
            Ok(())
        };
        if n <= FULL_AUDIT_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..RANDOM_AUDIT_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    fn greedy_generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span: BTreeSet<Elem> = [ID].into_iter().collect();
        for g in 1..self.order() {
            if !span.contains(&g) {
                gens.push(g);
                span = self.closure_of(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by `gens` as a sorted set of indices.
    pub fn closure_of(&self, gens: &[Elem]) -> BTreeSet<Elem> {
        let mut seen: BTreeSet<Elem> = [ID].into_iter().collect();
        let mut queue = vec![ID];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push(y);
                }
            }
        }
        seen
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.names.len()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.names.len() + b] as Elem
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as Elem
    }

    /// `a^{-1} b^{-1} a b`
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    #[inline]
    pub fn commute(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// `h^{-1} g h`
    pub fn conjugate(&self, g: Elem, h: Elem) -> Elem {
        self.mul(self.mul(self.inv(h), g), h)
    }

    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(g) } else { g };
        (0..k.unsigned_abs()).fold(ID, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, g: Elem) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != ID {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn element_name(&self, g: Elem) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.commute(a, b)))
    }

    /// The centre `{ a : ag = ga for all g }`, in index order.
    pub fn center(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&a| self.elements().all(|g| self.commute(a, g)))
            .collect()
    }

    pub fn conjugacy_class_size(&self, g: Elem) -> usize {
        let class: BTreeSet<Elem> = self.elements().map(|h| self.conjugate(g, h)).collect();
        class.len()
    }

    /// BFS tree of the Cayley graph over `generators()`: the visiting order, and for each
    /// element its `(parent, generator position)`; the identity maps to `None`.
    pub(crate) fn spanning_tree(&self) -> (Vec<Elem>, Vec<Option<(Elem, usize)>>) {
        let n = self.order();
        let mut tree = vec![None; n];
        let mut visit = vec![ID];
        let mut seen = vec![false; n];
        seen[ID] = true;
        let mut queue = std::collections::VecDeque::from([ID]);
        while let Some(x) = queue.pop_front() {
            for (k, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, k));
                    visit.push(y);
                    queue.push_back(y);
                }
            }
        }
        (visit, tree)
    }
}

/// A subgroup of a parent group, by member indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    members: BTreeSet<Elem>,
}

impl Subgroup {
    pub fn generated(g: &FiniteGroup, gens: &[Elem]) -> Subgroup {
        Subgroup {
            members: g.closure_of(gens),
        }
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup {
            members: g.elements().collect(),
        }
    }

    /// Checks closure under product and inverse.
    pub fn from_members(g: &FiniteGroup, members: impl IntoIterator<Item = Elem>) -> Result<Subgroup> {
        let members: BTreeSet<Elem> = members.into_iter().collect();
        if !members.contains(&ID) {
            return Err(Error::validation("subgroup", "identity missing"));
        }
        for &a in &members {
            if a >= g.order() {
                return Err(Error::validation("subgroup", format!("index {a} out of range")));
            }
            if !members.contains(&g.inv(a)) {
                return Err(Error::validation(
                    "subgroup",
                    format!("not closed under inverse at {}", g.element_name(a)),
                ));
            }
            for &b in &members {
                if !members.contains(&g.mul(a, b)) {
                    return Err(Error::validation(
                        "subgroup",
                        format!(
                            "not closed under product at ({}, {})",
                            g.element_name(a),
                            g.element_name(b)
                        ),
                    ));
                }
            }
        }
        Ok(Subgroup { members })
    }

    pub fn members(&self) -> impl Iterator<Item = Elem> + '_ {
        self.members.iter().copied()
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.members.contains(&g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_names() -> Vec<String> {
        vec!["e".into(), "a".into()]
    }

    #[test]
    fn z2_table_is_valid() {
        let g = FiniteGroup::build_from_table("Z2", z2_names(), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
        assert_eq!(g.element_name(ID), "e");
    }

    #[test]
    fn identity_moves_to_front() {
        let g = FiniteGroup::build_from_table("Z2", vec!["a".into(), "e".into()], &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.element_name(ID), "e");
        assert_eq!(g.mul(1, 1), ID);
    }

    #[test]
    fn non_latin_table_rejected() {
        let err = FiniteGroup::build_from_table("bad", z2_names(), &[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(err.to_string().contains("latin square"), "{err}");
    }

    #[test]
    fn missing_identity_rejected() {
        let names = vec!["a".into(), "b".into()];
        let err = FiniteGroup::build_from_table("bad", names, &[vec![1, 0], vec![0, 1]]);
        // row 1 is neutral on the left and right, so this is actually Z2 with identity b
        assert!(err.is_ok());
        let names = vec!["a".into(), "b".into(), "c".into()];
        let err = FiniteGroup::build_from_table("bad", names, &[vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]]).unwrap_err();
        assert!(err.to_string().contains("identity"), "{err}");
    }

    #[test]
    fn non_associative_latin_square_reports_triple() {
        // A Latin square with identity 0 that is not associative (a loop of order 5).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names = (0..5).map(|i| format!("e{i}")).collect();
        let err = FiniteGroup::build_from_table("loop", names, &t).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("associativity") && msg.contains("witness triple"), "{msg}");
    }

    #[test]
    fn subgroup_validation() {
        let s3 = catalog::symmetric(3);
        let r = s3.lookup("(1,2,3)").unwrap();
        let h = Subgroup::generated(&s3, &[r]);
        assert_eq!(h.order(), 3);
        assert!(Subgroup::from_members(&s3, h.members()).is_ok());
        let t = s3.lookup("(1,2)").unwrap();
        assert!(Subgroup::from_members(&s3, [ID, r]).is_err());
        assert!(Subgroup::from_members(&s3, [ID, t]).is_ok());
    }

    #[test]
    fn centers() {
        assert_eq!(catalog::alternating(5).center(), vec![ID]);
        assert_eq!(catalog::quaternion().center().len(), 2);
        assert_eq!(catalog::cyclic(4).center().len(), 4);
        assert_eq!(catalog::dihedral(4).center().len(), 2);
        assert_eq!(catalog::symmetric(3).center(), vec![ID]);
    }
}

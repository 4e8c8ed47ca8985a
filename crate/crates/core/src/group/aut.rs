use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use super::{Elem, FiniteGroup, Subgroup, ID};
use crate::error::{Error, Result};

/// Up to this order the homomorphism property is checked on every pair; above it the
/// generator edges of the Cayley graph are checked, which is equivalent.
const FULL_PAIR_CHECK_ORDER: usize = 64;

/// A bijection on element indices preserving products. Equality ignores the label.
#[derive(Debug, Clone)]
pub struct Automorphism {
    image: Vec<u32>,
    label: String,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}

impl Eq for Automorphism {}

impl Hash for Automorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.image.hash(state);
    }
}

impl Automorphism {
    pub fn identity(order: usize) -> Automorphism {
        Automorphism {
            image: (0..order as u32).collect(),
            label: "id".into(),
        }
    }

    /// Validates `image` as an automorphism of `g`.
    pub fn new(g: &FiniteGroup, image: Vec<Elem>, label: impl Into<String>) -> Result<Automorphism> {
        let label = label.into();
        let aut = Automorphism {
            image: image.into_iter().map(|e| e as u32).collect(),
            label,
        };
        aut.validate(g)?;
        Ok(aut)
    }

    /// Trusted constructor for maps that are automorphisms by construction.
    pub(crate) fn from_raw(image: Vec<u32>, label: impl Into<String>) -> Automorphism {
        Automorphism {
            image,
            label: label.into(),
        }
    }

    /// Conjugation `g -> h^{-1} g h`.
    pub fn inner(g: &FiniteGroup, h: Elem) -> Automorphism {
        Automorphism {
            image: g.elements().map(|x| g.conjugate(x, h) as u32).collect(),
            label: format!("inn_{h}"),
        }
    }

    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        let n = g.order();
        let what = || format!("automorphism {}", self.label);
        if self.image.len() != n {
            return Err(Error::validation(what(), format!("map has {} entries, group has {n}", self.image.len())));
        }
        let mut hit = vec![false; n];
        for &y in &self.image {
            if y as usize >= n || std::mem::replace(&mut hit[y as usize], true) {
                return Err(Error::validation(what(), "map is not a bijection"));
            }
        }
        if self.image[ID] as usize != ID {
            return Err(Error::validation(what(), "identity is not fixed"));
        }
        let bad = |a: Elem, b: Elem| {
            Error::validation(
                what(),
                format!(
                    "not a homomorphism at ({}, {})",
                    g.element_name(a),
                    g.element_name(b)
                ),
            )
        };
        if n <= FULL_PAIR_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    if self.apply(g.mul(a, b)) != g.mul(self.apply(a), self.apply(b)) {
                        return Err(bad(a, b));
                    }
                }
            }
        } else {
            for a in 0..n {
                for &s in g.generators() {
                    if self.apply(g.mul(a, s)) != g.mul(self.apply(a), self.apply(s)) {
                        return Err(bad(a, s));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, g: Elem) -> Elem {
        self.image[g] as Elem
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Automorphism {
        self.label = label.into();
        self
    }

    /// `self ∘ inner`, acting as `x -> self(inner(x))`.
    pub fn compose(&self, inner: &Automorphism) -> Automorphism {
        Automorphism {
            image: inner.image.iter().map(|&x| self.image[x as usize]).collect(),
            label: format!("{}.{}", self.label, inner.label),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut image = vec![0u32; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u32;
        }
        Automorphism {
            image,
            label: format!("{}_inv", self.label),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }
}

/// A finite group of automorphisms, closed under composition, with the identity at index 0.
///
/// Members carry a unique canonical label; extra aliases (such as `inn_<h>`) may resolve to the
/// same member.
#[derive(Debug, Clone)]
pub struct AutGroup {
    members: Vec<Automorphism>,
    index: HashMap<Vec<u32>, usize>,
    labels: HashMap<String, usize>,
    generators: Vec<usize>,
}

impl AutGroup {
    /// Assumes `members` is closed and duplicate-free; the identity is moved to the front and
    /// members without a usable label get `a<k>`.
    fn assemble(order: usize, mut members: Vec<Automorphism>, generators: Option<Vec<Automorphism>>) -> AutGroup {
        let id = Automorphism::identity(order);
        if let Some(p) = members.iter().position(|m| *m == id) {
            let m = members.remove(p);
            members.insert(0, m);
        } else {
            members.insert(0, id);
        }
        members[0].label = "id".into();
        let mut labels = HashMap::new();
        labels.insert("id".to_string(), 0);
        for (k, m) in members.iter_mut().enumerate().skip(1) {
            if !is_identifier(&m.label) || labels.contains_key(&m.label) {
                m.label = format!("a{k}");
            }
            labels.insert(m.label.clone(), k);
        }
        let index = members.iter().enumerate().map(|(k, m)| (m.image.clone(), k)).collect::<HashMap<_, _>>();
        let mut group = AutGroup {
            members,
            index,
            labels,
            generators: Vec::new(),
        };
        group.generators = match generators {
            Some(gens) => gens.iter().filter_map(|g| group.find(g)).filter(|&k| k != 0).collect(),
            None => group.greedy_generators(),
        };
        group
    }

    pub fn trivial(g: &FiniteGroup) -> AutGroup {
        AutGroup::assemble(g.order(), vec![], Some(vec![]))
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span: std::collections::HashSet<usize> = [0].into_iter().collect();
        for k in 1..self.members.len() {
            if span.contains(&k) {
                continue;
            }
            gens.push(k);
            let mut queue: Vec<usize> = span.iter().copied().collect();
            while let Some(x) = queue.pop() {
                for &g in &gens {
                    if let Some(y) = self.compose_index(x, g) {
                        if span.insert(y) {
                            queue.push(y);
                        }
                    }
                }
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Automorphism] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &Automorphism {
        &self.members[k]
    }

    pub fn label(&self, k: usize) -> &str {
        &self.members[k].label
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn find(&self, aut: &Automorphism) -> Option<usize> {
        self.index.get(&aut.image).copied()
    }

    pub fn find_image(&self, image: &[u32]) -> Option<usize> {
        self.index.get(image).copied()
    }

    pub fn contains(&self, aut: &Automorphism) -> bool {
        self.index.contains_key(&aut.image)
    }

    pub fn resolve(&self, label: &str) -> Option<usize> {
        self.labels.get(label).copied()
    }

    /// Registers an additional label for an existing member.
    pub fn add_alias(&mut self, label: impl Into<String>, k: usize) {
        self.labels.entry(label.into()).or_insert(k);
    }

    /// Adds `inn_<h>` aliases for every inner automorphism that is a member.
    pub fn with_inner_aliases(mut self, g: &FiniteGroup) -> AutGroup {
        for h in g.elements() {
            if let Some(k) = self.find(&Automorphism::inner(g, h)) {
                self.add_alias(format!("inn_{h}"), k);
            }
        }
        self
    }

    /// Index of `members[outer] ∘ members[inner]`.
    pub fn compose_index(&self, outer: usize, inner: usize) -> Option<usize> {
        let o = &self.members[outer].image;
        let image: Vec<u32> = self.members[inner].image.iter().map(|&x| o[x as usize]).collect();
        self.find_image(&image)
    }

    pub fn inverse_index(&self, k: usize) -> usize {
        self.find(&self.members[k].inverse()).expect("automorphism group is closed under inverse")
    }

    pub fn is_subset_of(&self, other: &AutGroup) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, usize)> {
        self.labels.iter().map(|(l, &k)| (l.as_str(), k))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !(s.starts_with('x') && s.len() > 1 && s[1..].chars().all(|c| c.is_ascii_digit()))
}

/// The inner automorphisms `g -> h^{-1} g h` for `h` in `h_sub`, without repetition.
///
/// Each member is labelled `inn_<h>` by its first conjugator; every other conjugator becomes an alias.
pub fn inner_automorphisms(g: &FiniteGroup, h_sub: &Subgroup) -> AutGroup {
    let mut members: Vec<Automorphism> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for h in h_sub.members() {
        let a = Automorphism::inner(g, h);
        if seen.insert(a.image.clone()) {
            members.push(a);
        }
    }
    let mut group = AutGroup::assemble(g.order(), members, None);
    for h in h_sub.members() {
        if let Some(k) = group.find(&Automorphism::inner(g, h)) {
            group.add_alias(format!("inn_{h}"), k);
        }
    }
    group
}

/// Closure of `gens` under composition. Inverses come for free in a finite group.
pub fn generate_aut_subgroup(g: &FiniteGroup, gens: &[Automorphism], cap: usize) -> Result<AutGroup> {
    for a in gens {
        a.validate(g)?;
    }
    let mut members = vec![Automorphism::identity(g.order())];
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::from([(members[0].image.clone(), 0)]);
    for a in gens {
        if !seen.contains_key(&a.image) {
            seen.insert(a.image.clone(), members.len());
            members.push(a.clone());
        }
    }
    let mut next = 0;
    while next < members.len() {
        for a in gens {
            let c = members[next].compose(a);
            if !seen.contains_key(&c.image) {
                if members.len() >= cap {
                    return Err(Error::size_limit(
                        "automorphism group order",
                        cap as u128,
                        members.len() as u128 + 1,
                        "the generated automorphism group exceeds the cap",
                    ));
                }
                seen.insert(c.image.clone(), members.len());
                members.push(c.with_label(""));
            }
        }
        next += 1;
    }
    let mut group = AutGroup::assemble(g.order(), members, Some(gens.to_vec()));
    for a in gens {
        if let Some(k) = group.find(a) {
            if is_identifier(&a.label) {
                group.add_alias(a.label.clone(), k);
            }
        }
    }
    Ok(group)
}

/// The full automorphism group, found by mapping the group's generators to every admissible
/// tuple of images and keeping the tuples that extend to automorphisms.
///
/// Candidate images must match the generator's element order and conjugacy class size.
pub fn compute_full_aut(g: &FiniteGroup, cap: usize) -> Result<AutGroup> {
    if g.order() > cap {
        return Err(Error::size_limit(
            "automorphism search",
            cap as u128,
            g.order() as u128,
            "supply the automorphisms explicitly with an automorphism file",
        ));
    }
    let gens = g.generators().to_vec();
    if gens.is_empty() {
        return Ok(AutGroup::trivial(g));
    }
    let signature = |x: Elem| (g.element_order(x), g.conjugacy_class_size(x));
    let signatures: Vec<(usize, usize)> = g.elements().map(signature).collect();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&s| g.elements().filter(|&x| signatures[x] == signatures[s]).collect())
        .collect();
    let (visit, tree) = g.spanning_tree();

    let extend = |images: &[Elem]| -> Option<Automorphism> {
        let n = g.order();
        let mut map = vec![0u32; n];
        for &y in visit.iter().skip(1) {
            let (parent, k) = tree[y].expect("non-identity elements have a parent");
            map[y] = g.mul(map[parent] as Elem, images[k]) as u32;
        }
        let mut hit = vec![false; n];
        for &y in &map {
            if std::mem::replace(&mut hit[y as usize], true) {
                return None;
            }
        }
        for x in 0..n {
            for (k, &s) in gens.iter().enumerate() {
                if map[g.mul(x, s)] as Elem != g.mul(map[x] as Elem, images[k]) {
                    return None;
                }
            }
        }
        Some(Automorphism::from_raw(map, ""))
    };

    let first = &candidates[0];
    let found: Vec<Vec<Automorphism>> = first
        .par_iter()
        .map(|&c0| {
            let mut out = Vec::new();
            let mut images = vec![c0; gens.len()];
            enumerate_rest(&candidates, 1, &mut images, &mut |imgs| {
                if let Some(a) = extend(imgs) {
                    out.push(a);
                }
            });
            out
        })
        .collect();
    let members: Vec<Automorphism> = found.into_iter().flatten().collect();
    Ok(AutGroup::assemble(g.order(), members, None).with_inner_aliases(g))
}

fn enumerate_rest(candidates: &[Vec<Elem>], pos: usize, images: &mut Vec<Elem>, f: &mut dyn FnMut(&[Elem])) {
    if pos == candidates.len() {
        f(images);
        return;
    }
    for &c in &candidates[pos] {
        images[pos] = c;
        enumerate_rest(candidates, pos + 1, images, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn full_aut_orders() {
        assert_eq!(compute_full_aut(&catalog::cyclic(2), 60).unwrap().order(), 1);
        assert_eq!(compute_full_aut(&catalog::symmetric(3), 60).unwrap().order(), 6);
        assert_eq!(compute_full_aut(&catalog::klein_four(), 60).unwrap().order(), 6);
        assert_eq!(compute_full_aut(&catalog::cyclic(5), 60).unwrap().order(), 4);
        assert_eq!(compute_full_aut(&catalog::quaternion(), 60).unwrap().order(), 24);
        assert_eq!(compute_full_aut(&catalog::dihedral(4), 60).unwrap().order(), 8);
    }

    #[test]
    fn full_aut_of_a5_has_120_members() {
        let a5 = catalog::alternating(5);
        let aut = compute_full_aut(&a5, 60).unwrap();
        assert_eq!(aut.order(), 120);
        for m in aut.members() {
            m.validate(&a5).unwrap();
        }
    }

    #[test]
    fn cap_is_reported() {
        let err = compute_full_aut(&catalog::symmetric(4), 10).unwrap_err();
        assert!(err.is_size_limit());
        assert!(err.to_string().contains("automorphism file"));
    }

    #[test]
    fn inner_counts() {
        let s3 = catalog::symmetric(3);
        assert_eq!(inner_automorphisms(&s3, &Subgroup::whole(&s3)).order(), 6);
        let r = s3.lookup("(1,2,3)").unwrap();
        assert_eq!(inner_automorphisms(&s3, &Subgroup::generated(&s3, &[r])).order(), 3);
        let z6 = catalog::cyclic(6);
        assert_eq!(inner_automorphisms(&z6, &Subgroup::whole(&z6)).order(), 1);
    }

    #[test]
    fn inner_is_contained_in_full() {
        for g in [catalog::symmetric(3), catalog::quaternion(), catalog::dihedral(4), catalog::alternating(4)] {
            let inn = inner_automorphisms(&g, &Subgroup::whole(&g));
            let full = compute_full_aut(&g, 60).unwrap();
            assert!(inn.is_subset_of(&full), "{}", g.name());
        }
    }

    #[test]
    fn klein_swap_generates_order_two() {
        let v = catalog::klein_four();
        // elements: (), (1,2)(3,4), (1,3)(2,4), (1,4)(2,3); swap the two generators
        let a = v.generators()[0];
        let b = v.generators()[1];
        let ab = v.mul(a, b);
        let mut image: Vec<Elem> = v.elements().collect();
        image[a] = b;
        image[b] = a;
        image[ab] = ab;
        let swap = Automorphism::new(&v, image, "p").unwrap();
        let grp = generate_aut_subgroup(&v, &[swap], 100).unwrap();
        assert_eq!(grp.order(), 2);
        assert_eq!(grp.resolve("p"), Some(1));
    }

    #[test]
    fn identity_generates_trivial() {
        let s3 = catalog::symmetric(3);
        let grp = generate_aut_subgroup(&s3, &[Automorphism::identity(6)], 100).unwrap();
        assert_eq!(grp.order(), 1);
    }

    #[test]
    fn generation_is_idempotent() {
        let a4 = catalog::alternating(4);
        let full = compute_full_aut(&a4, 60).unwrap();
        let again = generate_aut_subgroup(&a4, full.members(), 1000).unwrap();
        assert_eq!(again.order(), full.order());
        assert!(again.is_subset_of(&full) && full.is_subset_of(&again));
    }

    #[test]
    fn non_homomorphism_rejected() {
        let s3 = catalog::symmetric(3);
        let mut image: Vec<Elem> = s3.elements().collect();
        image.swap(1, 2);
        let err = Automorphism::new(&s3, image, "bad").unwrap_err();
        assert!(err.to_string().contains("homomorphism"), "{err}");
    }

    #[test]
    fn compose_and_inverse_are_consistent() {
        let s3 = catalog::symmetric(3);
        let full = compute_full_aut(&s3, 60).unwrap();
        for i in 0..full.order() {
            let inv = full.inverse_index(i);
            assert_eq!(full.compose_index(i, inv), Some(0));
        }
    }
}

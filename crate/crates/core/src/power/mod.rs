//! The direct power `H = ΠG` over `Z` (finitely supported elements) or over `Z/m` (materialized),
//! with coordinate-wise automorphisms `f_φ` and the shift `σ`, `σ(h)_i = h_{i+1}`.
//!
//! Every automorphism in `⟨f_φ, σ⟩` is stored as a pair `(φ, k)` acting by `h ↦ σ_k(f_φ(h))`, that is
//! `(φ, k)(h)_i = φ(h_{i+k})`.

pub mod compact;
pub mod csp;
pub mod gamma;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{generate_aut_subgroup, AutGroup, Automorphism, Elem, FiniteGroup, ID};
use crate::term::{AutDomain, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerIndex {
    /// Indices `Z/m`, with `σ` the cyclic shift.
    Cyclic(usize),
    /// Indices `Z`, elements supported in `[-bound, bound]`.
    Window(i64),
}

/// `σ_shift ∘ f_phi`, with `phi` a member index of the base automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerAut {
    pub phi: usize,
    pub shift: i64,
}

impl PowerAut {
    pub const IDENTITY: PowerAut = PowerAut { phi: 0, shift: 0 };
}

/// Label of `σ_k`: `s<k>` for `k ≥ 0`, `sm<|k|>` for `k < 0`.
pub fn shift_label(k: i64) -> String {
    if k < 0 {
        format!("sm{}", -k)
    } else {
        format!("s{k}")
    }
}

pub fn parse_shift_label(label: &str) -> Option<i64> {
    let digits_only = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    if let Some(rest) = label.strip_prefix("sm") {
        return digits_only(rest).then(|| rest.parse::<i64>().ok().map(|k| -k)).flatten();
    }
    if label == "sigma" {
        return Some(1);
    }
    let rest = label.strip_prefix('s')?;
    digits_only(rest).then(|| rest.parse().ok()).flatten()
}

/// Resolves term labels over `H`: shift labels and the labels of the base automorphism group.
#[derive(Clone, Copy)]
pub struct PowerDomain<'a> {
    pub base: &'a AutGroup,
}

impl AutDomain for PowerDomain<'_> {
    type Aut = PowerAut;

    fn resolve(&self, label: &str) -> Option<PowerAut> {
        if let Some(phi) = self.base.resolve(label) {
            return Some(PowerAut { phi, shift: 0 });
        }
        parse_shift_label(label).map(|shift| PowerAut { phi: 0, shift })
    }

    fn identity(&self) -> PowerAut {
        PowerAut::IDENTITY
    }

    fn compose(&self, outer: &PowerAut, inner: &PowerAut) -> Option<PowerAut> {
        let phi = match (outer.phi, inner.phi) {
            (0, p) | (p, 0) => p,
            (o, i) => self.base.compose_index(o, i)?,
        };
        Some(PowerAut { phi, shift: outer.shift + inner.shift })
    }

    fn labels(&self, aut: &PowerAut) -> Vec<String> {
        let mut out = Vec::new();
        if aut.shift != 0 {
            out.push(shift_label(aut.shift));
        }
        if aut.phi != 0 {
            out.push(self.base.label(aut.phi).to_string());
        }
        out
    }
}

impl Scope for PowerDomain<'_> {
    fn is_aut_label(&self, label: &str) -> bool {
        self.resolve(label).is_some()
    }
}

/// A finitely supported element of `ΠG` over `Z`; coordinates not stored are the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PowerElement {
    support: BTreeMap<i64, Elem>,
}

impl PowerElement {
    pub fn identity() -> PowerElement {
        PowerElement::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, Elem)>) -> PowerElement {
        PowerElement { support: pairs.into_iter().filter(|&(_, g)| g != ID).collect() }
    }

    pub fn get(&self, i: i64) -> Elem {
        self.support.get(&i).copied().unwrap_or(ID)
    }

    pub fn support(&self) -> &BTreeMap<i64, Elem> {
        &self.support
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn mul(&self, other: &PowerElement, g: &FiniteGroup) -> PowerElement {
        let keys: std::collections::BTreeSet<i64> = self.support.keys().chain(other.support.keys()).copied().collect();
        PowerElement::from_pairs(keys.into_iter().map(|i| (i, g.mul(self.get(i), other.get(i)))))
    }

    pub fn inv(&self, g: &FiniteGroup) -> PowerElement {
        PowerElement::from_pairs(self.support.iter().map(|(&i, &x)| (i, g.inv(x))))
    }

    /// `(φ, k)(h)_i = φ(h_{i+k})`, so the value stored at `j` moves to `j - k`.
    pub fn apply(&self, aut: PowerAut, base: &AutGroup) -> PowerElement {
        let phi = base.member(aut.phi);
        PowerElement::from_pairs(self.support.iter().map(|(&j, &x)| (j - aut.shift, phi.apply(x))))
    }

    pub fn display<'a>(&'a self, g: &'a FiniteGroup) -> impl fmt::Display + 'a {
        struct D<'a>(&'a PowerElement, &'a FiniteGroup);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{{")?;
                for (k, (i, x)) in self.0.support.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{i}: {}", self.1.element_name(*x))?;
                }
                write!(f, "}}")
            }
        }
        D(self, g)
    }
}

/// `H = G^m` over `Z/m` as a concrete group with the automorphisms generated by `f_φ` and `σ`.
#[derive(Debug, Clone)]
pub struct CyclicPower {
    pub m: usize,
    pub base_order: usize,
    pub group: FiniteGroup,
    pub auts: AutGroup,
}

impl CyclicPower {
    /// Element index `Σ g_i |G|^i`.
    pub fn encode(&self, coords: &[Elem]) -> Elem {
        coords.iter().rev().fold(0, |acc, &x| acc * self.base_order + x)
    }

    pub fn decode(&self, mut h: Elem) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            out.push(h % self.base_order);
            h /= self.base_order;
        }
        out
    }
}

/// Materializes `G^m`; `cap` bounds `|G|^m` and `aut_cap` the generated automorphism group.
pub fn build_cyclic_power(g: &FiniteGroup, a0: &AutGroup, m: usize, cap: usize, aut_cap: usize) -> Result<CyclicPower> {
    if m == 0 {
        return Err(Error::validation("direct power", "the index set must be non-empty"));
    }
    let n = g.order();
    let order = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::size_limit(
            "direct power order |G|^m",
            cap as u128,
            order,
            "use a smaller base group or fewer coordinates",
        ));
    }
    let order = order as usize;
    let decode = |mut h: usize| {
        let mut c = vec![0usize; m];
        for slot in c.iter_mut() {
            *slot = h % n;
            h /= n;
        }
        c
    };
    let encode = |c: &[usize]| c.iter().rev().fold(0usize, |acc, &x| acc * n + x);
    let coords: Vec<Vec<usize>> = (0..order).map(decode).collect();
    let mut mul = vec![0u32; order * order];
    let mut prod = vec![0usize; m];
    for a in 0..order {
        for b in 0..order {
            for i in 0..m {
                prod[i] = g.mul(coords[a][i], coords[b][i]);
            }
            mul[a * order + b] = encode(&prod) as u32;
        }
    }
    let names: Vec<String> = coords
        .iter()
        .map(|c| format!("[{}]", c.iter().map(|&x| g.element_name(x)).collect::<Vec<_>>().join(";")))
        .collect();
    let mut generators = Vec::new();
    for i in 0..m {
        for &s in g.generators() {
            let mut c = vec![ID; m];
            c[i] = s;
            generators.push(encode(&c));
        }
    }
    let name = format!("{}^{m}", g.name());
    let group = FiniteGroup::from_canonical(name, names, mul, generators)?;

    let mut gens = Vec::new();
    for &k in a0.generators() {
        let phi = a0.member(k);
        let image = coords
            .iter()
            .map(|c| encode(&c.iter().map(|&x| phi.apply(x)).collect::<Vec<_>>()))
            .collect();
        gens.push(Automorphism::new(&group, image, format!("f_{}", a0.label(k)))?);
    }
    if m > 1 {
        let image = coords
            .iter()
            .map(|c| encode(&(0..m).map(|i| c[(i + 1) % m]).collect::<Vec<_>>()))
            .collect();
        gens.push(Automorphism::new(&group, image, "s1")?);
    }
    let auts = generate_aut_subgroup(&group, &gens, aut_cap)?;
    Ok(CyclicPower { m, base_order: n, group, auts })
}

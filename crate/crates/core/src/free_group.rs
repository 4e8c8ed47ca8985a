//! Reduced words in the free group on `a, b`, the swap automorphism `a ↔ b`, and a bounded search
//! for zero-divisor pairs under `⟨swap⟩`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default bound on word length for the exhaustive pair check.
pub const DEFAULT_MAX_LEN: usize = 5;

/// Letter codes: `a = 0`, `A = 1`, `b = 2`, `B = 3`; the inverse flips the low bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const A: Letter = Letter(0);
    pub const A_INV: Letter = Letter(1);
    pub const B: Letter = Letter(2);
    pub const B_INV: Letter = Letter(3);
    pub const ALL: [Letter; 4] = [Letter::A, Letter::A_INV, Letter::B, Letter::B_INV];

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn swapped(self) -> Letter {
        Letter(self.0 ^ 2)
    }

    fn symbol(self) -> char {
        ['a', 'A', 'b', 'B'][self.0 as usize]
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FreeWord(Vec<Letter>);

impl FreeWord {
    pub fn empty() -> FreeWord {
        FreeWord(Vec::new())
    }

    /// Single left-to-right pass with a stack.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> FreeWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord(out)
    }

    /// Letters separated by optional whitespace: `a`, `b`, their inverses `A`, `B` or
    /// `a^-1`, `b^-1`. `1` or an empty string is the empty word.
    pub fn parse(text: &str) -> Result<FreeWord> {
        let chars: Vec<char> = text.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let l = match chars[i] {
                c if c.is_whitespace() || c == '1' => {
                    i += 1;
                    continue;
                }
                'a' => Letter::A,
                'A' => Letter::A_INV,
                'b' => Letter::B,
                'B' => Letter::B_INV,
                c => return Err(Error::parse(text, i, format!("unexpected `{c}` in a word over a, b"))),
            };
            i += 1;
            let rest: String = chars[i..].iter().take(3).collect();
            if rest == "^-1" {
                letters.push(l.inverse());
                i += 3;
            } else {
                letters.push(l);
            }
        }
        Ok(FreeWord::reduce(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::reduce(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn apply_swap(&self) -> FreeWord {
        FreeWord(self.0.iter().map(|l| l.swapped()).collect())
    }

    /// `u^{-1} v^{-1} u v`.
    pub fn commutator(u: &FreeWord, v: &FreeWord) -> FreeWord {
        FreeWord::reduce(u.inverse().0.into_iter().chain(v.inverse().0).chain(u.0.iter().copied()).chain(v.0.iter().copied()))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

/// Every non-empty reduced word of length at most `max_len`, shortest first.
pub fn reduced_words(max_len: usize) -> Vec<FreeWord> {
    let mut out = Vec::new();
    let mut layer = vec![FreeWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * 3);
        for w in &layer {
            for l in Letter::ALL {
                if w.0.last() != Some(&l.inverse()) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(FreeWord(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct F2Check {
    pub max_len: usize,
    pub words: usize,
    pub pairs: u64,
    /// Pairs with `[u, v] = 1`.
    pub commuting_pairs: u64,
    /// Pairs with `[u, v] = 1` and `[u, swap(v)] = 1`.
    pub counterexamples: Vec<(FreeWord, FreeWord)>,
}

/// Searches all ordered pairs of non-trivial reduced words of length at most `max_len` for
/// `u` commuting with both `v` and `swap(v)`. Evidence at a bound, not a proof.
pub fn check_ed_condition_bounded(max_len: usize, bound: usize) -> Result<F2Check> {
    if max_len > bound {
        return Err(Error::size_limit(
            "free group word length",
            bound as u128,
            max_len as u128,
            "raise the bound explicitly to search longer words",
        ));
    }
    let words = reduced_words(max_len);
    let swapped: Vec<FreeWord> = words.iter().map(FreeWord::apply_swap).collect();
    let per_u: Vec<(u64, Vec<(FreeWord, FreeWord)>)> = words
        .par_iter()
        .map(|u| {
            let mut commuting = 0;
            let mut bad = Vec::new();
            for (v, sv) in words.iter().zip(&swapped) {
                if FreeWord::commutator(u, v).is_empty() {
                    commuting += 1;
                    if FreeWord::commutator(u, sv).is_empty() {
                        bad.push((u.clone(), v.clone()));
                    }
                }
            }
            (commuting, bad)
        })
        .collect();
    let mut commuting_pairs = 0;
    let mut counterexamples = Vec::new();
    for (c, bad) in per_u {
        commuting_pairs += c;
        counterexamples.extend(bad);
    }
    Ok(F2Check {
        max_len,
        words: words.len(),
        pairs: (words.len() as u64).pow(2),
        commuting_pairs,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> FreeWord {
        FreeWord::parse(s).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w("a a^-1 b"), w("b"));
        assert!(w("").is_empty());
        assert!(w("a b b^-1 a^-1").is_empty());
        assert_eq!(w("a a B").to_string(), "a a B");
        assert!(FreeWord::parse("a c").is_err());
    }

    #[test]
    fn swap_examples() {
        assert_eq!(w("a a b^-1").apply_swap(), w("b b a^-1"));
        assert!(FreeWord::empty().apply_swap().is_empty());
    }

    #[test]
    fn commutators() {
        let (a, b) = (w("a"), w("b"));
        assert!(FreeWord::commutator(&a, &a).is_empty());
        assert_eq!(FreeWord::commutator(&a, &a.apply_swap()).to_string(), "A B a b");
        assert!(!FreeWord::commutator(&a, &b).is_empty());
    }

    #[test]
    fn word_counts() {
        assert_eq!(reduced_words(2).len(), 16);
        assert_eq!(reduced_words(4).len(), 160);
    }

    #[test]
    fn inverted_words_are_zero_divisors() {
        // swap(a B) = b A = (a B)^-1, so a B commutes with itself and with its swap
        let u = w("a B");
        assert_eq!(u.apply_swap(), u.inverse());
        let r = check_ed_condition_bounded(2, DEFAULT_MAX_LEN).unwrap();
        assert_eq!((r.words, r.pairs, r.commuting_pairs), (16, 256, 48));
        assert_eq!(r.counterexamples.len(), 8);
        assert!(r.counterexamples.contains(&(u.clone(), u)));
        assert!(check_ed_condition_bounded(1, DEFAULT_MAX_LEN).unwrap().counterexamples.is_empty());
        assert!(check_ed_condition_bounded(6, DEFAULT_MAX_LEN).is_err());
    }

    fn arb_letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0u8..4).prop_map(Letter), 0..12)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_shortens(x in arb_letters(), y in arb_letters()) {
            let u = FreeWord::reduce(x.clone());
            prop_assert_eq!(FreeWord::reduce(u.0.clone()), u.clone());
            prop_assert!(u.len() <= x.len());
            let v = FreeWord::reduce(y);
            prop_assert!(u.mul(&v).len() <= u.len() + v.len());
        }

        #[test]
        fn swap_is_an_involutive_homomorphism(x in arb_letters(), y in arb_letters()) {
            let (u, v) = (FreeWord::reduce(x), FreeWord::reduce(y));
            prop_assert_eq!(u.apply_swap().apply_swap(), u.clone());
            prop_assert_eq!(u.mul(&v).apply_swap(), u.apply_swap().mul(&v.apply_swap()));
        }

        #[test]
        fn commutation_is_symmetric(x in arb_letters(), y in arb_letters()) {
            let (u, v) = (FreeWord::reduce(x), FreeWord::reduce(y));
            prop_assert!(FreeWord::commutator(&u, &u).is_empty());
            prop_assert_eq!(FreeWord::commutator(&u, &v).is_empty(), FreeWord::commutator(&v, &u).is_empty());
        }
    }
}

//! Small groups used throughout the tests and available to the CLI as `builtin:<name>`.

use super::{build_from_generators, FiniteGroup, Perm};
use crate::error::{Error, Result};

fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(n, cycles).expect("catalog permutations are valid")
}

fn build(name: &str, n: usize, gens: &[Perm]) -> FiniteGroup {
    build_from_generators(name, n, gens, usize::MAX).expect("catalog groups are valid")
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let cycle: Vec<usize> = (1..=n).collect();
    let gens = if n > 1 { vec![perm(n, &[&cycle])] } else { vec![] };
    build(&format!("Z{n}"), n.max(1), &gens)
}

pub fn symmetric(n: usize) -> FiniteGroup {
    let cycle: Vec<usize> = (1..=n).collect();
    let gens = match n {
        0 | 1 => vec![],
        2 => vec![perm(2, &[&[1, 2]])],
        _ => vec![perm(n, &[&[1, 2]]), perm(n, &[&cycle])],
    };
    build(&format!("S{n}"), n.max(1), &gens)
}

/// For odd `n` the generators are `(1,...,n)` and `(1,2,3)`; for even `n`, `(2,...,n)` and `(1,2,3)`.
pub fn alternating(n: usize) -> FiniteGroup {
    if n < 3 {
        return build(&format!("A{n}"), n.max(1), &[]);
    }
    let long: Vec<usize> = if n % 2 == 1 { (1..=n).collect() } else { (2..=n).collect() };
    build(&format!("A{n}"), n, &[perm(n, &[&long]), perm(n, &[&[1, 2, 3]])])
}

/// Symmetries of the regular `n`-gon, order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rotation: Vec<usize> = (1..=n).collect();
    let mut reflection = vec![];
    for i in 1..=n / 2 {
        reflection.push(vec![i, n + 1 - i]);
    }
    let refl: Vec<&[usize]> = reflection.iter().map(|c| c.as_slice()).collect();
    build(&format!("D{n}"), n, &[perm(n, &[&rotation]), perm(n, &refl)])
}

pub fn quaternion() -> FiniteGroup {
    let i = perm(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]);
    let j = perm(8, &[&[1, 5, 3, 7], &[2, 8, 4, 6]]);
    build("Q8", 8, &[i, j])
}

pub fn klein_four() -> FiniteGroup {
    build("V4", 4, &[perm(4, &[&[1, 2], &[3, 4]]), perm(4, &[&[1, 3], &[2, 4]])])
}

/// Resolves names such as `S3`, `A5`, `Z4`, `D4`, `Q8`, `V4`.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let unknown = || Error::validation("builtin group", format!("unknown builtin group `{name}`"));
    match name {
        "Q8" => return Ok(quaternion()),
        "V4" | "Z2xZ2" => return Ok(klein_four()),
        _ => {}
    }
    let (kind, rest) = name.split_at(1.min(name.len()));
    let n: usize = rest.parse().map_err(|_| unknown())?;
    if n == 0 || n > 7 {
        return Err(unknown());
    }
    match kind {
        "Z" => Ok(cyclic(n)),
        "S" => Ok(symmetric(n)),
        "A" => Ok(alternating(n)),
        "D" if n >= 3 => Ok(dihedral(n)),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(cyclic(4).order(), 4);
        assert_eq!(cyclic(1).order(), 1);
        assert_eq!(symmetric(3).order(), 6);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(4).order(), 12);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(dihedral(4).order(), 8);
        assert_eq!(quaternion().order(), 8);
        assert_eq!(klein_four().order(), 4);
    }

    #[test]
    fn quaternion_is_not_dihedral() {
        // Q8 has a single involution, D4 has five.
        let involutions = |g: &FiniteGroup| g.elements().filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(involutions(&quaternion()), 1);
        assert_eq!(involutions(&dihedral(4)), 5);
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("A5").unwrap().order(), 60);
        assert_eq!(by_name("Q8").unwrap().order(), 8);
        assert!(by_name("X9").is_err());
    }
}

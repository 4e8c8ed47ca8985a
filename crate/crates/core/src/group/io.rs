//! Line-oriented text formats for groups, automorphisms, subgroups and point sets.
//!
//! ```text
//! # permutation form
//! group S3
//! perm 1: 2 1 3
//! perm 2: 2 3 1
//!
//! # table form; without an `elements:` line the first row gives the element order
//! group Z2
//! table
//! e a
//! a e
//! ```
//!
//! Automorphism files hold lines `aut <label>: <name> -> <name>, ...` (a total map) or
//! `aut <label>: inner <name>` (conjugation `g -> h^{-1} g h`).

use super::{build_from_generators, Automorphism, Elem, FiniteGroup, Perm, Subgroup};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn line_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        pos: crate::error::Pos { offset: 0, line, column: 1 },
        message: message.into(),
    }
}

pub fn parse_group(text: &str, cap: usize) -> Result<FiniteGroup> {
    let mut name = None;
    let mut perms: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut elements: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut in_table = false;
    for (ln, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("group ") {
            name = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("perm ") {
            let (k, images) = rest
                .split_once(':')
                .ok_or_else(|| line_error(ln, "expected `perm <k>: <images>`"))?;
            let k: usize = k.trim().parse().map_err(|_| line_error(ln, "generator number is not an integer"))?;
            let images = images
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(line_error(ln, format!("bad point `{t}` (points are 1-based)"))),
                })
                .collect::<Result<Vec<_>>>()?;
            perms.push((k, images));
        } else if let Some(rest) = line.strip_prefix("elements:") {
            elements = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if line == "table" {
            in_table = true;
        } else if in_table {
            rows.push(line.split_whitespace().map(str::to_string).collect());
        } else {
            return Err(line_error(ln, format!("unrecognized line `{line}`")));
        }
    }
    let name = name.ok_or_else(|| line_error(1, "missing `group <name>` header"))?;
    if in_table {
        if !perms.is_empty() {
            return Err(Error::validation("group file", "cannot mix `perm` lines and a `table` block"));
        }
        let names = match elements {
            Some(e) => e,
            None => rows.first().cloned().ok_or_else(|| Error::validation("group file", "empty table"))?,
        };
        let lookup = |n: &str| {
            names
                .iter()
                .position(|m| m == n)
                .ok_or_else(|| Error::validation("group file", format!("unknown element `{n}` in table")))
        };
        let table = rows
            .iter()
            .map(|r| r.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        return FiniteGroup::build_from_table(&name, names, &table);
    }
    perms.sort_by_key(|(k, _)| *k);
    let degree = perms.first().map_or(1, |(_, p)| p.len());
    let perms = perms
        .into_iter()
        .map(|(_, images)| Perm::from_images(images))
        .collect::<Result<Vec<_>>>()?;
    build_from_generators(&name, degree, &perms, cap)
}

/// Splits on commas that are not nested inside parentheses or brackets.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn element(g: &FiniteGroup, name: &str, ln: usize) -> Result<Elem> {
    g.lookup(name.trim())
        .ok_or_else(|| line_error(ln, format!("unknown element `{}` in group {}", name.trim(), g.name())))
}

pub fn parse_automorphisms(text: &str, g: &FiniteGroup) -> Result<Vec<Automorphism>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        let rest = line
            .strip_prefix("aut ")
            .ok_or_else(|| line_error(ln, "expected `aut <label>: ...`"))?;
        let (label, body) = rest
            .split_once(':')
            .ok_or_else(|| line_error(ln, "expected `aut <label>: ...`"))?;
        let label = label.trim();
        let body = body.trim();
        if let Some(h) = body.strip_prefix("inner ") {
            out.push(Automorphism::inner(g, element(g, h, ln)?).with_label(label));
            continue;
        }
        let mut image: Vec<Option<Elem>> = vec![None; g.order()];
        for pair in split_top_level(body, ',') {
            let (from, to) = pair
                .split_once("->")
                .ok_or_else(|| line_error(ln, format!("expected `<element> -> <element>`, got `{}`", pair.trim())))?;
            let from = element(g, from, ln)?;
            if image[from].replace(element(g, to, ln)?).is_some() {
                return Err(line_error(ln, format!("element {} mapped twice", g.element_name(from))));
            }
        }
        let image = image
            .into_iter()
            .enumerate()
            .map(|(x, y)| y.ok_or_else(|| line_error(ln, format!("map is not total: {} missing", g.element_name(x)))))
            .collect::<Result<Vec<_>>>()?;
        out.push(Automorphism::new(g, image, label).map_err(|e| e.at_line(ln))?);
    }
    Ok(out)
}

/// A subgroup file lists generating elements, separated by whitespace.
pub fn parse_subgroup(text: &str, g: &FiniteGroup) -> Result<Subgroup> {
    let mut gens = Vec::new();
    for (ln, line) in content_lines(text) {
        for tok in line.split_whitespace() {
            gens.push(element(g, tok, ln)?);
        }
    }
    Ok(Subgroup::generated(g, &gens))
}

/// One tuple of element names per line.
pub fn parse_points(text: &str, g: &FiniteGroup) -> Result<Vec<Vec<Elem>>> {
    let mut points: Vec<Vec<Elem>> = Vec::new();
    for (ln, line) in content_lines(text) {
        let p = line
            .split_whitespace()
            .map(|t| element(g, t, ln))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = points.first() {
            if first.len() != p.len() {
                return Err(line_error(ln, format!("expected {} coordinates, got {}", first.len(), p.len())));
            }
        }
        points.push(p);
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_file() {
        let g = parse_group("group S3\nperm 1: 2 1 3\nperm 2: 2 3 1\n", 100).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.name(), "S3");
    }

    #[test]
    fn table_file_with_comments() {
        let g = parse_group("# cyclic\ngroup Z2\ntable\ne a\na e # done\n", 100).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.lookup("a"), Some(1));
    }

    #[test]
    fn bad_perm_reports_line() {
        let err = parse_group("group X\nperm 1: 2 0 3\n", 100).unwrap_err();
        assert!(err.to_string().contains("2:1"), "{err}");
    }

    #[test]
    fn automorphism_file() {
        let v = parse_group("group V4\ntable\ne a b c\na e c b\nb c e a\nc b a e\n", 100).unwrap();
        let auts = parse_automorphisms("aut p: e -> e, a -> b, b -> a, c -> c\naut q: inner a\n", &v).unwrap();
        assert_eq!(auts.len(), 2);
        assert_eq!(auts[0].apply(1), 2);
        assert!(auts[1].is_identity());
        let err = parse_automorphisms("aut p: a -> b, b -> a\n", &v).unwrap_err();
        assert!(err.to_string().contains("not total"), "{err}");
    }

    #[test]
    fn cycle_names_survive_comma_splitting() {
        let s3 = super::super::catalog::symmetric(3);
        let auts = parse_automorphisms("aut t: inner (1,2)\n", &s3).unwrap();
        assert_eq!(auts[0].apply(s3.lookup("(1,2,3)").unwrap()), s3.lookup("(1,3,2)").unwrap());
        assert_eq!(split_top_level("(1,2) -> (2,3), () -> ()", ','), vec!["(1,2) -> (2,3)", " () -> ()"]);
    }

    #[test]
    fn points_file() {
        let s3 = super::super::catalog::symmetric(3);
        let pts = parse_points("() (1,2)\n(1,2,3) ()\n", &s3).unwrap();
        assert_eq!(pts, vec![vec![0, 1], vec![2, 0]]);
        assert!(parse_points("()\n() ()\n", &s3).is_err());
    }
}

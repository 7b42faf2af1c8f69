//! The group mini-language: `spec := atom ("*" atom)*` where an atom is a
//! cyclic group `Z<n>`, a catalog name, a permutation generator list
//! `perm:(0 1 2)(3 4);(...)`, or `table:<path>` pointing at a whitespace
//! multiplication table. Products associate left and share one size cap.

use crate::catalog;
use crate::group::{self, Group, DEFAULT_SIZE_CAP};
use crate::Error;

/// A parsed group spec: the source text, the resolved group, and the order of
/// each product atom (used to resolve coordinate tuples on the command line).
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub text: String,
    pub group: Group,
    pub atom_orders: Vec<usize>,
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Splits the spec on `*` at the top level. `perm:` and `table:` atoms never
/// contain `*`, so a plain split suffices; offsets are byte positions into the
/// original text for error reporting.
fn split_atoms(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0usize;
    for (i, ch) in text.char_indices() {
        if ch == '*' {
            out.push((start, &text[start..i]));
            start = i + 1;
        }
    }
    out.push((start, &text[start..]));
    out
}

fn parse_atom(pos: usize, atom: &str) -> Result<(Group, usize), Error> {
    let atom = atom.trim();
    if atom.is_empty() {
        return Err(parse_err(pos, "empty atom"));
    }
    if let Some(rest) = atom.strip_prefix('Z') {
        if let Ok(n) = rest.parse::<usize>() {
            let g = group::build_cyclic(n).map_err(|e| parse_err(pos, e.to_string()))?;
            return Ok((g, n));
        }
    }
    if let Some(g) = catalog::catalog_group(atom) {
        let n = g.order();
        return Ok((g, n));
    }
    if let Some(cycles) = atom.strip_prefix("perm:") {
        let g = parse_perm_group(pos + 5, cycles)?;
        let n = g.order();
        return Ok((g, n));
    }
    if let Some(path) = atom.strip_prefix("table:") {
        let g = parse_table_file(pos + 6, path.trim())?;
        let n = g.order();
        return Ok((g, n));
    }
    Err(parse_err(pos, format!("unrecognized atom {:?}", atom)))
}

/// Permutations in cycle notation, `;`-separated; each permutation is a list
/// of cycles like `(0 1 2)(3 4)`. The degree is one past the largest point.
fn parse_perm_group(pos: usize, text: &str) -> Result<Group, Error> {
    let mut perms_cycles: Vec<Vec<Vec<usize>>> = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        if part.is_empty() {
            return Err(parse_err(pos, "empty permutation"));
        }
        let mut cycles = Vec::new();
        let mut rest = part;
        while !rest.is_empty() {
            let rest_t = rest.trim_start();
            if !rest_t.starts_with('(') {
                return Err(parse_err(pos, format!("expected '(' in cycle list {:?}", part)));
            }
            let close = rest_t
                .find(')')
                .ok_or_else(|| parse_err(pos, format!("unclosed cycle in {:?}", part)))?;
            let inner = &rest_t[1..close];
            let mut cycle = Vec::new();
            for tok in inner.split([' ', ',']) {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok
                    .parse()
                    .map_err(|_| parse_err(pos, format!("bad cycle point {:?}", tok)))?;
                cycle.push(v);
            }
            if cycle.is_empty() {
                return Err(parse_err(pos, "empty cycle"));
            }
            cycles.push(cycle);
            rest = &rest_t[close + 1..];
        }
        perms_cycles.push(cycles);
    }
    let degree = 1 + perms_cycles
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .ok_or_else(|| parse_err(pos, "no cycles given"))?;
    let mut perms = Vec::new();
    for cycles in &perms_cycles {
        let mut p: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for w in cycle.windows(2) {
                p[w[0]] = w[1];
            }
            p[*cycle.last().unwrap()] = cycle[0];
        }
        let mut sorted = p.clone();
        sorted.sort_unstable();
        if sorted != (0..degree).collect::<Vec<_>>() {
            return Err(parse_err(pos, "cycles repeat a point"));
        }
        perms.push(p);
    }
    group::from_permutations(&perms).map_err(|e| parse_err(pos, e.to_string()))
}

/// A multiplication table file: whitespace-separated element indices, n^2 of
/// them in row-major order (an optional leading line stating n is tolerated
/// because n^2 + 1 is never a perfect square for n > 0).
fn parse_table_file(pos: usize, path: &str) -> Result<Group, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut values = Vec::new();
    for tok in text.split_whitespace() {
        let v: usize =
            tok.parse().map_err(|_| parse_err(pos, format!("bad table entry {:?}", tok)))?;
        values.push(v);
    }
    let count = values.len();
    let n = (count as f64).sqrt() as usize;
    let table = if n * n == count {
        values
    } else {
        let m = ((count - 1) as f64).sqrt() as usize;
        if count >= 1 && m * m == count - 1 && values[0] == m {
            values.split_off(1)
        } else {
            return Err(parse_err(pos, format!("table has {} entries, not a square", count)));
        }
    };
    let order = (table.len() as f64).sqrt() as usize;
    Group::from_table(order, table, Some(format!("table:{}", path)))
        .map_err(|e| parse_err(pos, e.to_string()))
}

/// Parses and resolves a group spec, enforcing the size cap on the product.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, Error> {
    let atoms = split_atoms(text);
    let mut group: Option<Group> = None;
    let mut atom_orders = Vec::new();
    for (pos, atom) in atoms {
        let (g, n) = parse_atom(pos, atom)?;
        atom_orders.push(n);
        group = Some(match group {
            None => g,
            Some(acc) => group::direct_product(&acc, &g)?,
        });
    }
    let mut group = group.expect("split_atoms yields at least one atom");
    if group.order() > DEFAULT_SIZE_CAP {
        return Err(Error::SizeLimit(format!(
            "group order {} exceeds the size cap {}",
            group.order(),
            DEFAULT_SIZE_CAP
        )));
    }
    if group.name.is_none() {
        group.name = Some(text.to_string());
    }
    Ok(GroupSpec { text: text.to_string(), group, atom_orders })
}

/// Parses a generator list: comma-separated raw element indices and/or
/// coordinate tuples `(q,h,...)` resolved row-major against the atom orders.
pub fn parse_generators(text: &str, spec: &GroupSpec) -> Result<Vec<usize>, Error> {
    let mut gens = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let bytes = text.as_bytes();
    let mut items: Vec<(usize, &str)> = Vec::new();
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                if depth == 0 {
                    return Err(parse_err(i, "unmatched ')'"));
                }
                depth -= 1;
            }
            b',' if depth == 0 => {
                items.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(parse_err(text.len(), "unclosed '('"));
    }
    items.push((start, &text[start..]));
    for (pos, item) in items {
        let item = item.trim();
        if item.is_empty() {
            return Err(parse_err(pos, "empty generator"));
        }
        let idx = if let Some(inner) = item.strip_prefix('(') {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| parse_err(pos, "tuple missing ')'"))?;
            let coords: Vec<usize> = inner
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<usize>()
                        .map_err(|_| parse_err(pos, format!("bad coordinate {:?}", c.trim())))
                })
                .collect::<Result<_, _>>()?;
            if coords.len() != spec.atom_orders.len() {
                return Err(parse_err(
                    pos,
                    format!(
                        "tuple has {} coordinates, spec has {} atoms",
                        coords.len(),
                        spec.atom_orders.len()
                    ),
                ));
            }
            let mut idx = 0usize;
            for (c, &o) in coords.iter().zip(&spec.atom_orders) {
                if *c >= o {
                    return Err(parse_err(pos, format!("coordinate {} out of range {}", c, o)));
                }
                idx = idx * o + c;
            }
            idx
        } else {
            item.parse::<usize>()
                .map_err(|_| parse_err(pos, format!("bad element index {:?}", item)))?
        };
        if idx >= spec.group.order() {
            return Err(parse_err(pos, format!("element {} out of range", idx)));
        }
        gens.push(idx);
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::element_order;

    #[test]
    fn cyclic_and_products() {
        let s = parse_group_spec("Z4").unwrap();
        assert_eq!(s.group.order(), 4);
        let s = parse_group_spec("Z4*Z3").unwrap();
        assert_eq!(s.group.order(), 12);
        assert_eq!(s.atom_orders, vec![4, 3]);
        let s = parse_group_spec("Q8*Z3").unwrap();
        assert_eq!(s.group.order(), 24);
    }

    #[test]
    fn perm_atom() {
        let s = parse_group_spec("perm:(0 1 2 3)").unwrap();
        assert_eq!(s.group.order(), 4);
        assert!(s.group.elements().any(|x| element_order(&s.group, x) == 4));
        // two generators: Klein four
        let s = parse_group_spec("perm:(0 1)(2 3);(0 2)(1 3)").unwrap();
        assert_eq!(s.group.order(), 4);
        assert!(s.group.elements().all(|x| element_order(&s.group, x) <= 2));
    }

    #[test]
    fn table_atom() {
        let dir = std::env::temp_dir().join("cayley-factor-spec-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("z2.table");
        std::fs::write(&path, "0 1\n1 0\n").unwrap();
        let s = parse_group_spec(&format!("table:{}", path.display())).unwrap();
        assert_eq!(s.group.order(), 2);
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_group_spec("Z4*bogus") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {:?}", other),
        }
        assert!(parse_group_spec("Z1024").is_err()); // size cap
    }

    #[test]
    fn generator_forms() {
        let s = parse_group_spec("Z4*Z3").unwrap();
        assert_eq!(parse_generators("1,5", &s).unwrap(), vec![1, 5]);
        assert_eq!(parse_generators("(1,1),(0,1)", &s).unwrap(), vec![4, 1]);
        assert_eq!(parse_generators("(1,1),5", &s).unwrap(), vec![4, 5]);
        assert!(parse_generators("(1,1,1)", &s).is_err());
        assert!(parse_generators("(4,0)", &s).is_err());
        assert!(parse_generators("12", &s).is_err());
        assert!(parse_generators("", &s).is_err());
    }
}

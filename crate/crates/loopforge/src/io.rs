//! Text formats: Cayley tables, triple-system block lists, cocycle files,
//! and tuple lists for product subloops.
//!
//! All formats are line-oriented; `#` starts a comment.  A comment of the
//! special form `# labels: ...` carries element names, so writers emit it
//! and readers recover it — the canonical formats round-trip byte for byte.

use std::collections::HashMap;
use std::path::Path;

use thiserror::Error;

use crate::catalog;
use crate::extension::{Cocycle, ExtensionError};
use crate::loops::{Elem, FiniteLoop, LoopError};
use crate::steiner::{OrientedSts, Sts, SteinerError};
use crate::subdirect::ProductLoop;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Read(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: unknown element `{token}`")]
    UnknownElement { line: usize, token: String },
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
}

fn format_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Format {
        line,
        message: message.into(),
    }
}

const LABELS_PREFIX: &str = "# labels:";

/// Content lines with 1-based numbers, comments stripped; `# labels:` lines
/// are collected separately.
fn content_lines(text: &str) -> (Vec<(usize, &str)>, Option<Vec<String>>) {
    let mut lines = Vec::new();
    let mut labels = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix(LABELS_PREFIX) {
            labels = Some(rest.split_whitespace().map(String::from).collect());
            continue;
        }
        let line = match line.find('#') {
            Some(pos) => line[..pos].trim(),
            None => line,
        };
        if !line.is_empty() {
            lines.push((i + 1, line));
        }
    }
    (lines, labels)
}

// ---------------------------------------------------------------------------
// Cayley tables
// ---------------------------------------------------------------------------

/// Parses a Cayley table: first content line = order n, then n lines of n
/// 0-based indices.  If element 0 is not the identity but some element is,
/// the table is re-indexed to put the identity first and a warning is
/// returned.
pub fn parse_loop(text: &str) -> Result<(FiniteLoop, Vec<String>), IoError> {
    let (lines, labels) = content_lines(text);
    let Some(&(first_no, first)) = lines.first() else {
        return Err(format_err(1, "empty table file"));
    };
    let n: usize = first
        .parse()
        .map_err(|_| format_err(first_no, format!("expected the order, found `{first}`")))?;
    if n == 0 {
        return Err(format_err(first_no, "order must be positive"));
    }
    if lines.len() != n + 1 {
        return Err(format_err(
            lines.last().map(|&(l, _)| l).unwrap_or(first_no),
            format!("expected {n} table rows, found {}", lines.len() - 1),
        ));
    }
    let mut table = Vec::with_capacity(n * n);
    for &(line_no, line) in &lines[1..] {
        let row: Vec<usize> = line
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v < n => Ok(v),
                Ok(v) => Err(format_err(
                    line_no,
                    format!("entry {v} out of range for order {n}"),
                )),
                Err(_) => Err(format_err(line_no, format!("bad entry `{t}`"))),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(format_err(
                line_no,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        table.extend(row);
    }

    let mut warnings = Vec::new();
    let mut labels = labels;
    if let Some(l) = &labels {
        if l.len() != n {
            return Err(format_err(
                1,
                format!("expected {n} labels, found {}", l.len()),
            ));
        }
    }
    // Locate the identity; re-index if it is not element 0.
    let identity = (0..n).find(|&e| {
        (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x)
    });
    let Some(identity) = identity else {
        return Err(format_err(first_no, "table has no identity element"));
    };
    if identity != 0 {
        warnings.push(format!(
            "identity is element {identity}; re-indexing to put it first"
        ));
        // Move the identity to index 0, keeping all other elements in order.
        let perm: Vec<usize> = (0..n)
            .map(|x| match x.cmp(&identity) {
                std::cmp::Ordering::Less => x + 1,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => x,
            })
            .collect();
        let mut new_table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                new_table[perm[x] * n + perm[y]] = perm[table[x * n + y]];
            }
        }
        table = new_table;
        if let Some(l) = labels {
            let mut relabeled = vec![String::new(); n];
            for (x, lab) in l.into_iter().enumerate() {
                relabeled[perm[x]] = lab;
            }
            labels = Some(relabeled);
        }
    }
    let mut l = FiniteLoop::from_flat(n, table)?;
    if let Some(labels) = labels {
        l = l.with_labels(labels)?;
    }
    Ok((l, warnings))
}

pub fn read_loop(path: &Path) -> Result<(FiniteLoop, Vec<String>), IoError> {
    parse_loop(&std::fs::read_to_string(path)?)
}

pub fn write_loop(l: &FiniteLoop) -> String {
    let n = l.order();
    let mut out = String::new();
    out.push_str(&n.to_string());
    out.push('\n');
    for x in 0..n {
        let row: Vec<String> = (0..n).map(|y| l.mul(x, y).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    if let Some(labels) = l.labels() {
        out.push_str(LABELS_PREFIX);
        for lab in labels {
            out.push(' ');
            out.push_str(lab);
        }
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Triple systems
// ---------------------------------------------------------------------------

/// Orders tokens numerically first (by value), then the rest
/// lexicographically — so the point sets {0..9, a, b, c} come out in the
/// natural order.
fn normalize_tokens(tokens: &[String]) -> Vec<String> {
    let mut distinct: Vec<String> = tokens.to_vec();
    distinct.sort();
    distinct.dedup();
    distinct.sort_by(|a, b| {
        let na = a.parse::<u64>().ok();
        let nb = b.parse::<u64>().ok();
        match (na, nb) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.cmp(b),
        }
    });
    distinct
}

fn parse_block_lines(text: &str) -> Result<(usize, Vec<[String; 3]>), IoError> {
    let (lines, _) = content_lines(text);
    let Some(&(first_no, first)) = lines.first() else {
        return Err(format_err(1, "empty system file"));
    };
    let n: usize = first
        .parse()
        .map_err(|_| format_err(first_no, format!("expected the point count, found `{first}`")))?;
    let mut rows = Vec::new();
    for &(line_no, line) in &lines[1..] {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(format_err(
                line_no,
                format!("expected 3 point tokens, found {}", toks.len()),
            ));
        }
        rows.push([toks[0].to_string(), toks[1].to_string(), toks[2].to_string()]);
    }
    Ok((n, rows))
}

fn token_indices(n: usize, rows: &[[String; 3]]) -> Result<HashMap<String, usize>, IoError> {
    let all: Vec<String> = rows.iter().flat_map(|r| r.iter().cloned()).collect();
    let distinct = normalize_tokens(&all);
    if distinct.len() > n {
        return Err(format_err(
            1,
            format!("{} distinct points named, but n = {n}", distinct.len()),
        ));
    }
    Ok(distinct
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect())
}

/// Parses a system file; block point order within each line is ignored.
/// Point tokens are arbitrary; they become the labels.
pub fn parse_sts(text: &str) -> Result<Sts, IoError> {
    let (n, rows) = parse_block_lines(text)?;
    if n == 0 {
        return Err(format_err(1, "point count must be positive"));
    }
    let index = token_indices(n, &rows)?;
    let blocks: Vec<[usize; 3]> = rows
        .iter()
        .map(|r| [index[&r[0]], index[&r[1]], index[&r[2]]])
        .collect();
    let mut labels: Vec<String> = vec![String::new(); n];
    for (t, &i) in &index {
        labels[i] = t.clone();
    }
    // Unnamed points (when fewer tokens than n appear) keep index names.
    for (i, l) in labels.iter_mut().enumerate() {
        if l.is_empty() {
            *l = i.to_string();
        }
    }
    Ok(Sts::from_blocks(n, blocks)?.with_labels(labels)?)
}

/// Parses an oriented system file: the token order within each line is the
/// block's cyclic order.
pub fn parse_oriented_sts(text: &str) -> Result<OrientedSts, IoError> {
    let (n, rows) = parse_block_lines(text)?;
    let index = token_indices(n, &rows)?;
    let oriented: Vec<[usize; 3]> = rows
        .iter()
        .map(|r| [index[&r[0]], index[&r[1]], index[&r[2]]])
        .collect();
    let sts = parse_sts(text)?;
    // Match each input line to the block list of the validated system.
    let mut orders = vec![[0usize; 3]; sts.blocks().len()];
    let mut seen = vec![false; sts.blocks().len()];
    for (row, ord) in rows.iter().zip(&oriented) {
        let bi = sts.block_index(ord[0], ord[1]);
        if seen[bi] {
            return Err(format_err(
                1,
                format!("block {{{} {} {}}} listed twice", row[0], row[1], row[2]),
            ));
        }
        seen[bi] = true;
        orders[bi] = *ord;
    }
    Ok(OrientedSts::new(sts, orders)?)
}

pub fn read_sts(path: &Path) -> Result<Sts, IoError> {
    parse_sts(&std::fs::read_to_string(path)?)
}

pub fn read_oriented_sts(path: &Path) -> Result<OrientedSts, IoError> {
    parse_oriented_sts(&std::fs::read_to_string(path)?)
}

pub fn write_sts(s: &Sts) -> String {
    let mut out = String::new();
    out.push_str(&s.n().to_string());
    out.push('\n');
    for b in s.blocks() {
        out.push_str(&format!(
            "{} {} {}\n",
            s.label(b[0]),
            s.label(b[1]),
            s.label(b[2])
        ));
    }
    out
}

pub fn write_oriented_sts(o: &OrientedSts) -> String {
    let s = o.base();
    let mut out = String::new();
    out.push_str(&s.n().to_string());
    out.push('\n');
    for ord in o.orders() {
        out.push_str(&format!(
            "{} {} {}\n",
            s.label(ord[0]),
            s.label(ord[1]),
            s.label(ord[2])
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Element-token resolution
// ---------------------------------------------------------------------------

/// Resolves an element token against a loop: label first, then a plain
/// 0-based index.
pub fn resolve_element(l: &FiniteLoop, token: &str, line: usize) -> Result<Elem, IoError> {
    if let Some(labels) = l.labels() {
        if let Some(i) = labels.iter().position(|lab| lab == token) {
            return Ok(i);
        }
    }
    match token.parse::<usize>() {
        Ok(i) if i < l.order() => Ok(i),
        _ => Err(IoError::UnknownElement {
            line,
            token: token.to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Cocycle files
// ---------------------------------------------------------------------------

/// Resolves a loop reference: `builtin:NAME`, a bare catalog name, or a
/// table file path (relative paths resolve against `base_dir`).
pub fn resolve_loop_ref(
    reference: &str,
    base_dir: Option<&Path>,
) -> Result<(FiniteLoop, Vec<String>), IoError> {
    if let Some(name) = reference.strip_prefix("builtin:") {
        return Ok((catalog::builtin_loop(name)?, Vec::new()));
    }
    let path = Path::new(reference);
    let resolved = match base_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    };
    if resolved.exists() {
        read_loop(&resolved)
    } else if let Ok(l) = catalog::builtin_loop(reference) {
        Ok((l, Vec::new()))
    } else {
        Err(IoError::Read(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no file or builtin named `{reference}`"),
        )))
    }
}

/// Parses a cocycle file: line 1 = the group as `Zn`, line 2 = base loop
/// reference, then `x y v` entries (elements by label or index).  With
/// `symmetric`, every entry also sets the transposed position.
pub fn parse_cocycle(
    text: &str,
    base_dir: Option<&Path>,
    symmetric: bool,
) -> Result<(Cocycle, Vec<String>), IoError> {
    let (lines, _) = content_lines(text);
    if lines.len() < 2 {
        return Err(format_err(1, "expected a group line and a base-loop line"));
    }
    let (z_no, z_spec) = lines[0];
    let z = match z_spec
        .strip_prefix('Z')
        .or_else(|| z_spec.strip_prefix('z'))
        .and_then(|d| d.parse::<usize>().ok())
    {
        Some(nz) if nz >= 1 => crate::extension::cyclic_group(nz),
        _ => {
            return Err(format_err(
                z_no,
                format!("expected a cyclic group `Zn`, found `{z_spec}`"),
            ))
        }
    };
    let (_, base_ref) = lines[1];
    let (base, warnings) = resolve_loop_ref(base_ref, base_dir)?;
    let mut entries: Vec<(Elem, Elem, Elem)> = Vec::new();
    for &(line_no, line) in &lines[2..] {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(format_err(
                line_no,
                format!("expected `x y v`, found {} tokens", toks.len()),
            ));
        }
        let x = resolve_element(&base, toks[0], line_no)?;
        let y = resolve_element(&base, toks[1], line_no)?;
        let v: usize = toks[2]
            .parse()
            .map_err(|_| format_err(line_no, format!("bad value `{}`", toks[2])))?;
        entries.push((x, y, v));
    }
    let c = Cocycle::from_entries(z, base, &entries, symmetric)?;
    Ok((c, warnings))
}

pub fn read_cocycle(path: &Path, symmetric: bool) -> Result<(Cocycle, Vec<String>), IoError> {
    parse_cocycle(
        &std::fs::read_to_string(path)?,
        path.parent(),
        symmetric,
    )
}

/// Writes a cocycle with an explicit entry list (no symmetry flag needed on
/// re-read).  `base_ref` names the base loop, e.g. `builtin:F14`.
pub fn write_cocycle(c: &Cocycle, base_ref: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("Z{}\n", c.z_group().order()));
    out.push_str(base_ref);
    out.push('\n');
    for (x, y, v) in c.nonzero_entries() {
        out.push_str(&format!(
            "{} {} {}\n",
            c.base().label(x),
            c.base().label(y),
            v
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Tuple lists (product subloops)
// ---------------------------------------------------------------------------

/// Parses a tuple list for a product: one tuple per line, one token per
/// coordinate, tokens resolved against the matching factor.
pub fn parse_tuples(text: &str, product: &ProductLoop) -> Result<Vec<Elem>, IoError> {
    let (lines, _) = content_lines(text);
    let mut out = Vec::new();
    for &(line_no, line) in &lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != product.arity() {
            return Err(format_err(
                line_no,
                format!(
                    "expected {} coordinates, found {}",
                    product.arity(),
                    toks.len()
                ),
            ));
        }
        let tuple: Vec<Elem> = toks
            .iter()
            .enumerate()
            .map(|(i, t)| resolve_element(product.factor(i), t, line_no))
            .collect::<Result<_, _>>()?;
        out.push(product.encode(&tuple));
    }
    Ok(out)
}

pub fn read_tuples(path: &Path, product: &ProductLoop) -> Result<Vec<Elem>, IoError> {
    parse_tuples(&std::fs::read_to_string(path)?, product)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::cyclic_group;
    use crate::subdirect::direct_product;

    #[test]
    fn loop_roundtrip_is_bit_exact() {
        for name in ["F5", "S3", "M12", "K28", "Z6"] {
            let l = catalog::builtin_loop(name).unwrap();
            let text = write_loop(&l);
            let (back, warnings) = parse_loop(&text).unwrap();
            assert!(warnings.is_empty());
            assert!(back.same_table(&l));
            assert_eq!(back.labels(), l.labels());
            assert_eq!(write_loop(&back), text);
        }
    }

    #[test]
    fn loop_parser_reindexes_shifted_identity() {
        // Z3 written with the identity as element 2.
        let text = "3\n1 2 0\n2 0 1\n0 1 2\n";
        let (l, warnings) = parse_loop(text).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(l.same_table(&cyclic_group(3)));
        // Labels follow their elements through the re-indexing.
        let text = "3\n1 2 0\n2 0 1\n0 1 2\n# labels: p q e\n";
        let (l, _) = parse_loop(text).unwrap();
        assert_eq!(l.label(0), "e");
        assert_eq!(l.label(1), "p");
        assert_eq!(l.label(2), "q");
    }

    #[test]
    fn loop_parser_rejects_garbage() {
        assert!(parse_loop("").is_err());
        assert!(parse_loop("2\n0 1\n").is_err());
        assert!(parse_loop("2\n0 1\n1 x\n").is_err());
        assert!(parse_loop("2\n0 1\n1 0\n0 1\n").is_err());
        // Latin but no identity row/column.
        assert!(parse_loop("3\n1 0 2\n0 2 1\n2 1 0\n").is_err());
        // Not Latin.
        assert!(parse_loop("2\n0 0\n1 1\n").is_err());
        let err = parse_loop("2\n0 1\n1 7\n").unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a table\n\n2\n0 1 # row of e\n1 0\n";
        let (l, _) = parse_loop(text).unwrap();
        assert!(l.same_table(&cyclic_group(2)));
    }

    #[test]
    fn sts_roundtrip_keeps_mixed_labels() {
        let s = catalog::builtin_sts("STS13").unwrap();
        let text = write_sts(&s);
        assert_eq!(text.lines().count(), 27, "n line plus 26 blocks");
        let back = parse_sts(&text).unwrap();
        assert_eq!(back.blocks(), s.blocks());
        assert_eq!(back.label(10), "a");
        assert_eq!(write_sts(&back), text);
    }

    #[test]
    fn sts_parser_normalizes_tokens_numerically() {
        // Tokens 10 and 9 must sort by value, not lexicographically.
        let text = "3\n10 9 11\n";
        let s = parse_sts(text).unwrap();
        assert_eq!(s.label(0), "9");
        assert_eq!(s.label(1), "10");
        assert_eq!(s.label(2), "11");
        assert!(parse_sts("3\n0 1 1\n").is_err());
        assert!(parse_sts("2\nx y z\n").is_err());
    }

    #[test]
    fn oriented_sts_reader_keeps_line_order() {
        let text = "3\nq p r\n";
        let o = parse_oriented_sts(text).unwrap();
        // Points sort to p, q, r; the cyclic order is (q, p, r).
        assert_eq!(o.orders()[0], [1, 0, 2]);
        assert_eq!(o.d(1, 0), 0);
        assert_eq!(o.d(0, 1), 1);
        let text2 = write_oriented_sts(&o);
        let o2 = parse_oriented_sts(&text2).unwrap();
        assert_eq!(o2.orders(), o.orders());
    }

    #[test]
    fn cocycle_roundtrip_through_builtin_reference() {
        let c = catalog::builtin_cocycle("COCYCLE28").unwrap();
        let text = write_cocycle(&c, "builtin:F14");
        // 15 symmetric pairs written as 30 explicit entries.
        assert_eq!(text.lines().count(), 32);
        let (back, _) = parse_cocycle(&text, None, false).unwrap();
        assert_eq!(back.nonzero_entries(), c.nonzero_entries());
        assert_eq!(write_cocycle(&back, "builtin:F14"), text);
    }

    #[test]
    fn cocycle_parser_resolves_labels_and_symmetry() {
        let text = "Z2\nbuiltin:F14\na b 1\n";
        let (c, _) = parse_cocycle(text, None, true).unwrap();
        // Points a, b are loop elements 11, 12.
        assert_eq!(c.value(11, 12), 1);
        assert_eq!(c.value(12, 11), 1);
        let (c2, _) = parse_cocycle(text, None, false).unwrap();
        assert_eq!(c2.value(12, 11), 0);
        assert!(parse_cocycle("Q8\nbuiltin:F5\n", None, false).is_err());
        assert!(parse_cocycle("Z2\nbuiltin:F5\nz z 1\n", None, false).is_err());
        // Unnormalized: nonzero in the identity row.
        assert!(parse_cocycle("Z2\nbuiltin:F5\ne a 1\n", None, false).is_err());
    }

    #[test]
    fn tuple_parser_uses_factor_labels() {
        let f5 = catalog::builtin_loop("F5").unwrap();
        let z2 = cyclic_group(2);
        let p = direct_product(&[&f5, &z2]).unwrap();
        let tuples = parse_tuples("e 0\na 1\nb 0\n", &p).unwrap();
        assert_eq!(tuples, vec![0, 3, 4]);
        assert!(parse_tuples("e\n", &p).is_err());
        assert!(parse_tuples("q 0\n", &p).is_err());
    }
}

//! Text formats for hypergroup tables, fusion rings and finite groups.
//!
//! Hypergroup tables:
//!
//! ```text
//! hypergroup v1
//! name Conj(S3)
//! scalar rational
//! size 3
//! identity 0
//! involution 0 1 2
//! haar 1 3 2                 # optional; computed from c^e_{x,x~} otherwise
//! truncation 40              # optional; marks a section of an infinite table
//! generator 1                # optional; `none` for no generator
//! family conj(S3)            # optional
//! label 0 C0[e]              # optional, one per element, text to end of line
//! products
//! 1 1 0 1/3                  # x y z c^z_{x,y}, value as p/q or decimal
//! end
//! ```
//!
//! Fusion rings:
//!
//! ```text
//! fusion v1
//! name SU(2)
//! labels 0 1 2
//! conj 0 1 2
//! ndims 1 2 3
//! ddims 1 2 3                # optional
//! q 0.5                      # optional; quantum dimensions [n]_q
//! truncated                  # optional; only listed rows are known
//! rules
//! 1 1 0 1                    # alpha beta gamma N, by label or index
//! end
//! ```
//!
//! Finite groups: an optional `name <text>` line, then `cayley <n>` followed
//! by `n` rows of `n` indices.
//!
//! Lines starting with `#` and blank lines are ignored; trailing `#` comments
//! are stripped everywhere except in `name` and `label` lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::builders::FamilySpec;
use crate::error::{HypergroupError, Result};
use crate::group::FiniteGroup;
use crate::quantum::{FusionData, FusionRing};
use crate::scalar::Scalar;
use crate::table::{HypergroupTable, TableSpec};

fn parse_err(line: usize, message: impl Into<String>) -> HypergroupError {
    HypergroupError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then_some((i + 1, t))
    })
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("").trim()
}

fn split_key(s: &str) -> (&str, &str) {
    match s.split_once(char::is_whitespace) {
        Some((k, v)) => (k, v.trim()),
        None => (s, ""),
    }
}

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| parse_err(line, format!("expected an index, found `{s}`")))
}

fn parse_usizes(line: usize, s: &str) -> Result<Vec<usize>> {
    strip_comment(s)
        .split_whitespace()
        .map(|t| parse_usize(line, t))
        .collect()
}

fn parse_scalars<T: Scalar>(line: usize, s: &str) -> Result<Vec<T>> {
    strip_comment(s)
        .split_whitespace()
        .map(|t| T::parse_value(t).ok_or_else(|| parse_err(line, format!("bad value `{t}`"))))
        .collect()
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| HypergroupError::Io(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| HypergroupError::Io(format!("{}: {e}", path.display())))
}

pub fn write_table<T: Scalar>(h: &HypergroupTable<T>) -> String {
    let mut out = String::new();
    let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "hypergroup v1");
    let _ = writeln!(out, "name {}", h.name());
    let _ = writeln!(out, "scalar {}", T::TAG);
    let _ = writeln!(out, "size {}", h.size());
    let _ = writeln!(out, "identity {}", h.identity());
    let _ = writeln!(
        out,
        "involution {}",
        join(&mut h.involution().iter().map(|x| x.to_string()))
    );
    let _ = writeln!(
        out,
        "haar {}",
        join(&mut h.haar().iter().map(|v| v.format_value()))
    );
    if let Some(r) = h.truncation() {
        let _ = writeln!(out, "truncation {r}");
    }
    match h.generator() {
        Some(g) => {
            let _ = writeln!(out, "generator {g}");
        }
        None => {
            let _ = writeln!(out, "generator none");
        }
    }
    if let Some(f) = h.family() {
        if !matches!(f, FamilySpec::GroupFromCayley { .. }) {
            let _ = writeln!(out, "family {f}");
        }
    }
    for (i, l) in h.labels().iter().enumerate() {
        let _ = writeln!(out, "label {i} {l}");
    }
    let _ = writeln!(out, "products");
    for (x, y, row) in h.stored_products() {
        for (z, v) in row {
            let _ = writeln!(out, "{x} {y} {z} {}", v.format_value());
        }
    }
    let _ = writeln!(out, "end");
    out
}

pub fn parse_table<T: Scalar>(text: &str) -> Result<HypergroupTable<T>> {
    let mut it = lines(text);
    match it.next() {
        Some((_, "hypergroup v1")) => {}
        Some((l, other)) => {
            return Err(parse_err(
                l,
                format!("expected `hypergroup v1`, found `{other}`"),
            ))
        }
        None => return Err(parse_err(0, "empty document")),
    }
    let mut name = String::from("H");
    let mut size = None;
    let mut identity = 0;
    let mut involution = None;
    let mut haar = None;
    let mut truncation = None;
    let mut generator: Option<Option<usize>> = None;
    let mut family = None;
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut in_products = false;
    let mut ended = false;
    for (l, line) in it {
        if ended {
            return Err(parse_err(l, "content after `end`"));
        }
        if in_products {
            if line == "end" {
                ended = true;
                continue;
            }
            let parts: Vec<&str> = strip_comment(line).split_whitespace().collect();
            let [x, y, z, v] = parts[..] else {
                return Err(parse_err(l, "expected `x y z value`"));
            };
            let v = T::parse_value(v).ok_or_else(|| parse_err(l, format!("bad value `{v}`")))?;
            entries.push((
                parse_usize(l, x)?,
                parse_usize(l, y)?,
                parse_usize(l, z)?,
                v,
            ));
            continue;
        }
        let (key, rest) = split_key(line);
        match key {
            "name" => name = rest.to_string(),
            "scalar" => {
                let tag = strip_comment(rest);
                if !["rational", "float", "float32"].contains(&tag) {
                    return Err(parse_err(l, format!("unknown scalar `{tag}`")));
                }
            }
            "size" => size = Some(parse_usize(l, strip_comment(rest))?),
            "identity" => identity = parse_usize(l, strip_comment(rest))?,
            "involution" => involution = Some(parse_usizes(l, rest)?),
            "haar" => haar = Some(parse_scalars::<T>(l, rest)?),
            "truncation" => truncation = Some(parse_usize(l, strip_comment(rest))?),
            "generator" => {
                let g = strip_comment(rest);
                generator = Some(if g == "none" {
                    None
                } else {
                    Some(parse_usize(l, g)?)
                });
            }
            "family" => {
                family = Some(
                    strip_comment(rest)
                        .parse::<FamilySpec>()
                        .map_err(|e| parse_err(l, e.to_string()))?,
                )
            }
            "label" => {
                let (i, text) = split_key(rest);
                labels.insert(parse_usize(l, i)?, text.to_string());
            }
            "products" => in_products = true,
            _ => return Err(parse_err(l, format!("unknown key `{key}`"))),
        }
    }
    if !ended {
        return Err(parse_err(text.lines().count(), "missing `end`"));
    }
    let n = size.ok_or_else(|| parse_err(0, "missing `size`"))?;
    if let Some(&i) = labels.keys().find(|i| **i >= n) {
        return Err(HypergroupError::IndexOutOfRange { index: i, size: n });
    }
    let labels = (0..n)
        .map(|i| labels.remove(&i).unwrap_or_else(|| format!("x{i}")))
        .collect();
    let spec = TableSpec {
        name,
        labels,
        identity,
        involution: involution.unwrap_or_else(|| (0..n).collect()),
        entries,
        haar,
        truncation,
    };
    let mut table = HypergroupTable::new(spec)?;
    if let Some(g) = generator {
        table = table.with_generator(g);
    }
    Ok(table.with_family(family))
}

pub fn save_table<T: Scalar>(path: &Path, h: &HypergroupTable<T>) -> Result<()> {
    write_file(path, &write_table(h))
}

pub fn load_table<T: Scalar>(path: &Path) -> Result<HypergroupTable<T>> {
    parse_table(&read_file(path)?)
}

pub fn write_fusion(ring: &FusionRing) -> String {
    let mut out = String::new();
    let nums = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "fusion v1");
    let _ = writeln!(out, "name {}", ring.name());
    let _ = writeln!(out, "labels {}", ring.labels().join(" "));
    let _ = writeln!(
        out,
        "conj {}",
        nums(&mut ring.conj().iter().map(|c| c.to_string()))
    );
    let _ = writeln!(
        out,
        "ndims {}",
        nums(&mut ring.ndims().iter().map(|c| c.to_string()))
    );
    if let Some(d) = ring.explicit_ddims() {
        let _ = writeln!(
            out,
            "ddims {}",
            nums(&mut d.iter().map(|v| v.format_value()))
        );
    }
    if let Some(q) = ring.q() {
        let _ = writeln!(out, "q {}", q.format_value());
    }
    if ring.is_truncated() {
        let _ = writeln!(out, "truncated");
    }
    let _ = writeln!(out, "rules");
    for (&(a, b, c), m) in ring.multiplicities() {
        let _ = writeln!(out, "{a} {b} {c} {m}");
    }
    let _ = writeln!(out, "end");
    out
}

pub fn parse_fusion(text: &str) -> Result<FusionRing> {
    let mut it = lines(text);
    match it.next() {
        Some((_, "fusion v1")) => {}
        Some((l, other)) => {
            return Err(parse_err(
                l,
                format!("expected `fusion v1`, found `{other}`"),
            ))
        }
        None => return Err(parse_err(0, "empty document")),
    }
    let mut name = String::from("fusion");
    let mut labels: Option<Vec<String>> = None;
    let mut conj = None;
    let mut ndims = None;
    let mut ddims = None;
    let mut q = None;
    let mut truncated = false;
    let mut mult = BTreeMap::new();
    let mut in_rules = false;
    let mut ended = false;
    for (l, line) in it {
        if ended {
            return Err(parse_err(l, "content after `end`"));
        }
        if in_rules {
            if line == "end" {
                ended = true;
                continue;
            }
            let labels = labels
                .as_ref()
                .ok_or_else(|| parse_err(l, "`labels` must precede `rules`"))?;
            let parts: Vec<&str> = strip_comment(line).split_whitespace().collect();
            let [a, b, c, m] = parts[..] else {
                return Err(parse_err(l, "expected `alpha beta gamma N`"));
            };
            let idx = |s: &str| -> Result<usize> {
                labels
                    .iter()
                    .position(|x| x == s)
                    .or_else(|| s.parse().ok().filter(|i| *i < labels.len()))
                    .ok_or_else(|| parse_err(l, format!("unknown label `{s}`")))
            };
            let m: u64 = m
                .parse()
                .map_err(|_| parse_err(l, format!("bad multiplicity `{m}`")))?;
            if m > 0 {
                *mult.entry((idx(a)?, idx(b)?, idx(c)?)).or_insert(0) += m;
            }
            continue;
        }
        let (key, rest) = split_key(line);
        let rest = strip_comment(rest);
        match key {
            "name" => name = rest.to_string(),
            "labels" => labels = Some(rest.split_whitespace().map(str::to_string).collect()),
            "conj" => conj = Some(parse_usizes(l, rest)?),
            "ndims" => {
                ndims = Some(
                    rest.split_whitespace()
                        .map(|t| {
                            t.parse::<u64>()
                                .map_err(|_| parse_err(l, format!("bad dimension `{t}`")))
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "ddims" => ddims = Some(parse_scalars::<f64>(l, rest)?),
            "q" => {
                q = Some(
                    f64::parse_value(rest)
                        .ok_or_else(|| parse_err(l, format!("bad q `{rest}`")))?,
                )
            }
            "truncated" => truncated = true,
            "rules" => in_rules = true,
            _ => return Err(parse_err(l, format!("unknown key `{key}`"))),
        }
    }
    if !ended {
        return Err(parse_err(text.lines().count(), "missing `end`"));
    }
    let labels = labels.ok_or_else(|| parse_err(0, "missing `labels`"))?;
    let k = labels.len();
    FusionRing::new(FusionData {
        name,
        conj: conj.unwrap_or_else(|| (0..k).collect()),
        ndims: ndims.ok_or_else(|| parse_err(0, "missing `ndims`"))?,
        labels,
        mult,
        ddims,
        q,
        truncated,
    })
}

pub fn load_fusion_file(path: &Path) -> Result<FusionRing> {
    parse_fusion(&read_file(path)?)
}

pub fn save_fusion_file(path: &Path, ring: &FusionRing) -> Result<()> {
    write_file(path, &write_fusion(ring))
}

pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = format!("name {}\ncayley {}\n", g.name(), g.order());
    for row in g.cayley() {
        out.push_str(
            &row.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
        out.push('\n');
    }
    out
}

pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let mut name = String::from("G");
    let mut n = None;
    let mut rows = Vec::new();
    for (l, line) in lines(text) {
        let (key, rest) = split_key(line);
        match (key, n) {
            ("name", None) => name = rest.to_string(),
            ("cayley", None) => {
                let rest = strip_comment(rest);
                n = Some(if rest.is_empty() {
                    0
                } else {
                    parse_usize(l, rest)?
                });
            }
            (_, Some(_)) => rows.push(parse_usizes(l, line)?),
            _ => return Err(parse_err(l, format!("unexpected `{key}` before `cayley`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing `cayley` header"))?;
    if n != 0 && rows.len() != n {
        return Err(parse_err(
            0,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    FiniteGroup::from_cayley_table(name, rows)
}

pub fn load_group_file(path: &Path) -> Result<FiniteGroup> {
    parse_group(&read_file(path)?)
}

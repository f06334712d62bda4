//! Text formats for polymatroids, subspaces and lattices, plus the renderings
//! printed by the command line tool.
//!
//! A polymatroid file lists every subset with its rank:
//!
//! ```text
//! N 2
//! cage 2 2
//! S - 0
//! S 1 2
//! S 2 2
//! S 1,2 2
//! ```
//!
//! Subsets use 1-based indices separated by commas, `-` for the empty set.
//! A subspace file starts with `blocks n_1 ... n_N` followed by one row per
//! line of rationals `p/q`. A lattice file has one element per line, as
//! `label` or `label : rank`, and lines `cover <lower> <upper>`. Text after
//! `#` is ignored everywhere.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cohomology::CohomologyRing;
use crate::error::{Error, Mask, Result};
use crate::lattice::ComboFlatLattice;
use crate::linalg::{fmt_q, parse_q, Matrix};
use crate::multiset::Multiset;
use crate::polymatroid::{Polymatroid, MAX_GROUND_SIZE};
use crate::realization::RationalSubspace;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((k + 1, body))
    })
}

fn parse_u32_list<'a>(line: usize, tokens: impl Iterator<Item = &'a str>) -> Result<Vec<u32>> {
    tokens
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| parse_err(line, format!("expected a natural number, found {t:?}")))
        })
        .collect()
}

/// The parsed contents of a polymatroid file. Ranks are not yet validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolymatroidFile {
    pub ground_size: usize,
    pub cage: Option<Multiset>,
    pub ranks: Vec<u32>,
}

impl PolymatroidFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text).peekable();
        let Some((ln, header)) = lines.next() else {
            return Err(parse_err(1, "empty file; expected \"N <n>\""));
        };
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("N") {
            return Err(parse_err(ln, "expected \"N <n>\""));
        }
        let n = match parse_u32_list(ln, tokens)?.as_slice() {
            [n] => *n as usize,
            _ => return Err(parse_err(ln, "expected \"N <n>\"")),
        };
        if n > MAX_GROUND_SIZE {
            return Err(Error::GroundTooLarge(n));
        }
        let mut cage = None;
        if let Some(&(ln, line)) = lines.peek() {
            let mut tokens = line.split_whitespace();
            if tokens.next() == Some("cage") {
                let entries = parse_u32_list(ln, tokens)?;
                if entries.len() != n {
                    return Err(parse_err(
                        ln,
                        format!("cage has {} entries, expected {n}", entries.len()),
                    ));
                }
                cage = Some(Multiset::new(entries));
                lines.next();
            }
        }
        let mut ranks: Vec<Option<u32>> = vec![None; 1 << n];
        for (ln, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let [tag, subset, rank] = tokens.as_slice() else {
                return Err(parse_err(ln, "expected \"S <subset> <rank>\""));
            };
            if *tag != "S" {
                return Err(parse_err(ln, format!("unexpected record {tag:?}")));
            }
            let mask = parse_subset(ln, subset, n)?;
            let rank = rank
                .parse::<u32>()
                .map_err(|_| parse_err(ln, format!("invalid rank {rank:?}")))?;
            if ranks[mask as usize].replace(rank).is_some() {
                return Err(parse_err(ln, format!("subset {subset} listed twice")));
            }
        }
        let ranks = ranks
            .into_iter()
            .enumerate()
            .map(|(m, r)| {
                r.ok_or_else(|| {
                    parse_err(
                        text.lines().count().max(1),
                        format!("missing rank for subset {}", format_subset(m as Mask)),
                    )
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(PolymatroidFile {
            ground_size: n,
            cage,
            ranks,
        })
    }

    pub fn polymatroid(&self) -> Result<Polymatroid> {
        Polymatroid::new(self.ground_size, self.ranks.clone())
    }
}

fn parse_subset(line: usize, token: &str, n: usize) -> Result<Mask> {
    if token == "-" {
        return Ok(0);
    }
    let mut mask = 0;
    for part in token.split(',') {
        let i: usize = part
            .parse()
            .map_err(|_| parse_err(line, format!("invalid element {part:?}")))?;
        if i == 0 || i > n {
            return Err(parse_err(line, format!("element {i} outside 1..{n}")));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

/// `1,2,4`, or `-` for the empty set.
pub fn format_subset(mask: Mask) -> String {
    if mask == 0 {
        return "-".into();
    }
    let parts: Vec<String> = (0..32)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    parts.join(",")
}

/// Canonical polymatroid file, subsets in bitmask order.
pub fn serialize_polymatroid(p: &Polymatroid, cage: Option<&Multiset>) -> String {
    let mut out = format!("N {}\n", p.ground_size());
    if let Some(c) = cage {
        let entries: Vec<String> = c.entries().iter().map(u32::to_string).collect();
        writeln!(out, "cage {}", entries.join(" ")).unwrap();
    }
    for (m, r) in p.ranks().iter().enumerate() {
        writeln!(out, "S {} {r}", format_subset(m as Mask)).unwrap();
    }
    out
}

pub fn parse_subspace(text: &str) -> Result<RationalSubspace> {
    let mut lines = content_lines(text);
    let Some((ln, header)) = lines.next() else {
        return Err(parse_err(1, "empty file; expected \"blocks n_1 ... n_N\""));
    };
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("blocks") {
        return Err(parse_err(ln, "expected \"blocks n_1 ... n_N\""));
    }
    let cage = Multiset::new(parse_u32_list(ln, tokens)?);
    if cage.len() > MAX_GROUND_SIZE {
        return Err(Error::GroundTooLarge(cage.len()));
    }
    let width = cage.size() as usize;
    let mut rows = Vec::new();
    for (ln, line) in lines {
        let row = line
            .split_whitespace()
            .map(|t| parse_q(t).ok_or_else(|| parse_err(ln, format!("invalid rational {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != width {
            return Err(parse_err(
                ln,
                format!("row has {} entries, expected {width}", row.len()),
            ));
        }
        rows.push(row);
    }
    RationalSubspace::new(cage, Matrix::from_rows(width, rows)?)
}

pub fn serialize_subspace(v: &RationalSubspace) -> String {
    let entries: Vec<String> = v.cage().entries().iter().map(u32::to_string).collect();
    let mut out = format!("blocks {}\n", entries.join(" "));
    for i in 0..v.dim() {
        let row: Vec<String> = v.rows().row(i).iter().map(fmt_q).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

/// The parsed contents of a lattice file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFile {
    pub labels: Vec<String>,
    pub ranks: Vec<Option<u32>>,
    pub covers: Vec<(usize, usize)>,
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels = Vec::new();
        let mut ranks = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut pending = Vec::new();
        for (ln, line) in content_lines(text) {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.first() == Some(&"cover") {
                let [_, lower, upper] = tokens.as_slice() else {
                    return Err(parse_err(ln, "expected \"cover <lower> <upper>\""));
                };
                pending.push((ln, lower.to_string(), upper.to_string()));
                continue;
            }
            let (label, rank) = match line.split_once(':') {
                Some((l, r)) => {
                    let r = r.trim();
                    let rank = r
                        .parse::<u32>()
                        .map_err(|_| parse_err(ln, format!("invalid rank {r:?}")))?;
                    (l.trim(), Some(rank))
                }
                None => (line, None),
            };
            if label.contains(char::is_whitespace) {
                return Err(parse_err(
                    ln,
                    format!("label {label:?} contains whitespace"),
                ));
            }
            if index.insert(label.to_string(), labels.len()).is_some() {
                return Err(parse_err(ln, format!("element {label} listed twice")));
            }
            labels.push(label.to_string());
            ranks.push(rank);
        }
        let mut covers = Vec::new();
        for (ln, lower, upper) in pending {
            let find = |l: &str| {
                index
                    .get(l)
                    .copied()
                    .ok_or_else(|| parse_err(ln, format!("unknown element {l}")))
            };
            covers.push((find(&lower)?, find(&upper)?));
        }
        Ok(LatticeFile {
            labels,
            ranks,
            covers,
        })
    }
}

/// `s_1,...,s_N`, the label used for flats in every text output.
pub fn format_multiset(s: &Multiset) -> String {
    let parts: Vec<String> = s.entries().iter().map(u32::to_string).collect();
    parts.join(",")
}

/// One line `s_1,...,s_N : r` per flat, in lexicographic order.
pub fn flats_listing(l: &ComboFlatLattice) -> String {
    let mut out = String::new();
    for (s, r) in l.elements().iter().zip(l.ranks()) {
        writeln!(out, "{} : {r}", format_multiset(s)).unwrap();
    }
    out
}

/// The flats listing followed by `cover` lines: a lattice file.
pub fn serialize_lattice(l: &ComboFlatLattice) -> String {
    let mut out = flats_listing(l);
    for &(x, y) in l.covers() {
        writeln!(
            out,
            "cover {} {}",
            format_multiset(l.element(x)),
            format_multiset(l.element(y))
        )
        .unwrap();
    }
    out
}

/// A DOT digraph of the Hasse diagram, drawn bottom to top with one layer
/// per rank.
pub fn hasse_dot(l: &ComboFlatLattice) -> String {
    let mut out = String::from("digraph flats {\n  rankdir=BT;\n  node [shape=box];\n");
    for (k, (s, r)) in l.elements().iter().zip(l.ranks()).enumerate() {
        writeln!(out, "  n{k} [label=\"{} | {r}\"];", format_multiset(s)).unwrap();
    }
    for &(x, y) in l.covers() {
        writeln!(out, "  n{x} -> n{y};").unwrap();
    }
    for r in 0..=l.total_rank() {
        let nodes: Vec<String> = (0..l.len())
            .filter(|&k| l.rank_of(k) == r)
            .map(|k| format!("n{k};"))
            .collect();
        writeln!(out, "  {{ rank=same; {} }}", nodes.join(" ")).unwrap();
    }
    out.push_str("}\n");
    out
}

/// `1 4 5 1` and a top-heavy verdict.
pub fn whitney_report(l: &ComboFlatLattice) -> String {
    let w: Vec<String> = l.whitney().iter().map(usize::to_string).collect();
    let verdict = if l.is_top_heavy() { "yes" } else { "no" };
    format!("{}\ntop-heavy: {verdict}\n", w.join(" "))
}

/// One line per ordered pair: `y[s] * y[t] = q * y[u]` or `y[s] * y[t] = 0`.
pub fn multiplication_table(r: &CohomologyRing) -> String {
    let l = r.lattice();
    let mut out = String::new();
    for x in 0..l.len() {
        for y in 0..l.len() {
            let lhs = format!(
                "y[{}] * y[{}]",
                format_multiset(l.element(x)),
                format_multiset(l.element(y))
            );
            match r.product(x, y) {
                None => writeln!(out, "{lhs} = 0").unwrap(),
                Some((z, q)) => writeln!(
                    out,
                    "{lhs} = {} * y[{}]",
                    fmt_q(q),
                    format_multiset(l.element(*z))
                )
                .unwrap(),
            }
        }
    }
    out
}

//! Text formats and the built-in graphs.
//!
//! The `vog` format has one record per line and `#` comments:
//!
//! ```text
//! V 1          vertex count
//! E 2          edge count
//! e 0 0 0      edge id and endpoints; dart 2*id sits at the first one
//! e 1 0 0
//! r 0 0 1 2 3  counterclockwise darts at a vertex (all vertices or none)
//! o 0 0        orientation index at a vertex (all vertices or none)
//! ```

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Dart, Graph};
use crate::orientation::{admissible_orientations, OrientationAssignment};

/// A parsed `vog` document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VogDocument {
    pub graph: Graph,
    pub orientation: Option<OrientationAssignment>,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn semantic(line: usize, message: impl Into<String>) -> Error {
    Error::Semantic { line, message: message.into() }
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<usize>> {
    fields
        .iter()
        .map(|f| f.parse::<usize>().map_err(|_| syntax(line, format!("expected a number, found {f:?}"))))
        .collect()
}

/// Parses a `vog` document. Graphs whose vertices all have degree 3 are
/// accepted as cubic graphs; otherwise every vertex must have degree 4.
pub fn parse_vog(text: &str) -> Result<VogDocument> {
    let mut n: Option<(usize, usize)> = None;
    let mut m: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, (usize, usize))> = Vec::new();
    let mut rot: Vec<(usize, usize, Vec<Dart>)> = Vec::new();
    let mut ori: Vec<(usize, usize, usize)> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let args = numbers(line, &fields[1..])?;
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(syntax(line, format!("record {:?} takes {k} numbers, found {}", fields[0], args.len())))
            }
        };
        match fields[0] {
            "V" => {
                want(1)?;
                if n.is_some() {
                    return Err(semantic(line, "second V record"));
                }
                n = Some((args[0], line));
            }
            "E" => {
                want(1)?;
                if m.is_some() {
                    return Err(semantic(line, "second E record"));
                }
                m = Some((args[0], line));
            }
            "e" => {
                want(3)?;
                if args[0] != edges.len() {
                    return Err(semantic(line, format!("edge {} out of order, expected {}", args[0], edges.len())));
                }
                edges.push((line, (args[1], args[2])));
            }
            "r" => {
                if args.len() < 2 {
                    return Err(syntax(line, "rotation record needs a vertex and darts"));
                }
                rot.push((line, args[0], args[1..].to_vec()));
            }
            "o" => {
                want(2)?;
                ori.push((line, args[0], args[1]));
            }
            other => return Err(syntax(line, format!("unknown record {other:?}"))),
        }
    }
    let (n, _) = n.ok_or_else(|| semantic(last, "missing V record"))?;
    let (m, mline) = m.ok_or_else(|| semantic(last, "missing E record"))?;
    if edges.len() != m {
        return Err(semantic(mline, format!("E declares {m} edges, {} e records found", edges.len())));
    }
    for &(line, (u, v)) in &edges {
        for w in [u, v] {
            if w >= n {
                return Err(semantic(line, format!("unknown vertex {w}")));
            }
        }
    }
    let mut degree = vec![0usize; n];
    for &(_, (u, v)) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let d = if n > 0 && degree.iter().all(|&x| x == 3) { 3 } else { 4 };
    let rotations = if rot.is_empty() {
        None
    } else {
        let mut lists: Vec<Option<Vec<Dart>>> = vec![None; n];
        for (line, v, ds) in &rot {
            if *v >= n {
                return Err(semantic(*line, format!("unknown vertex {v}")));
            }
            if ds.len() != d {
                return Err(semantic(*line, format!("rotation lists {} darts, expected {d}", ds.len())));
            }
            if let Some(&x) = ds.iter().find(|&&x| x >= 2 * m) {
                return Err(semantic(*line, format!("unknown dart {x}")));
            }
            if lists[*v].replace(ds.clone()).is_some() {
                return Err(semantic(*line, format!("second rotation for vertex {v}")));
            }
        }
        if let Some(v) = lists.iter().position(|l| l.is_none()) {
            return Err(semantic(rot[0].0, format!("rotation records leave vertex {v} out")));
        }
        Some(lists.into_iter().map(|l| l.expect("checked")).collect::<Vec<_>>())
    };
    let edge_list: Vec<(usize, usize)> = edges.iter().map(|&(_, e)| e).collect();
    let graph = Graph::new(d, n, &edge_list, rotations.as_deref())?;
    let orientation = if ori.is_empty() { None } else { Some(orientation_from_records(&graph, &ori, last)?) };
    Ok(VogDocument { graph, orientation })
}

fn orientation_from_records(
    g: &Graph,
    records: &[(usize, usize, usize)],
    last: usize,
) -> Result<OrientationAssignment> {
    if g.degree() != 4 {
        return Err(semantic(records[0].0, "orientations need a 4-regular graph"));
    }
    let n = g.vertex_count();
    let mut choice: Vec<Option<u8>> = vec![None; n];
    for &(line, v, b) in records {
        if v >= n {
            return Err(semantic(line, format!("unknown vertex {v}")));
        }
        let count = admissible_orientations(g, v).len();
        if b >= count {
            return Err(semantic(line, format!("vertex {v} has {count} orientations, index {b} given")));
        }
        if choice[v].replace(b as u8).is_some() {
            return Err(semantic(line, format!("second orientation for vertex {v}")));
        }
    }
    if let Some(v) = choice.iter().position(|c| c.is_none()) {
        return Err(semantic(records[0].0.min(last), format!("orientation records leave vertex {v} out")));
    }
    Ok(OrientationAssignment::new(choice.into_iter().map(|c| c.expect("checked")).collect()))
}

/// Reads a file holding only `o` records (comments allowed).
pub fn parse_orientation_records(g: &Graph, text: &str) -> Result<OrientationAssignment> {
    let mut records = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields[0] != "o" || fields.len() != 3 {
            return Err(syntax(line, "expected an o record"));
        }
        let a = numbers(line, &fields[1..])?;
        records.push((line, a[0], a[1]));
    }
    if records.is_empty() {
        return Err(semantic(last.max(1), "no o records"));
    }
    orientation_from_records(g, &records, last)
}

/// Canonical text: counts, edges by id, rotations and orientations by vertex.
pub fn write_vog(g: &Graph, sigma: Option<&OrientationAssignment>) -> String {
    let mut out = format!("V {}\nE {}\n", g.vertex_count(), g.edge_count());
    for (e, (u, v)) in g.edges().into_iter().enumerate() {
        out.push_str(&format!("e {e} {u} {v}\n"));
    }
    if g.is_embedded() {
        for v in 0..g.vertex_count() {
            let ds: Vec<String> = g.darts_at(v).iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("r {v} {}\n", ds.join(" ")));
        }
    }
    if let Some(s) = sigma {
        for (v, c) in s.choice.iter().enumerate() {
            out.push_str(&format!("o {v} {c}\n"));
        }
    }
    out
}

/// Parses a planar-diagram code: crossings `X[a,b,c,d]`, optionally
/// wrapped in `PD[...]`. Each crossing becomes a vertex whose darts follow
/// the listed strands counterclockwise; each strand label must occur twice.
pub fn parse_pd(text: &str) -> Result<Graph> {
    let mut crossings: Vec<Vec<String>> = Vec::new();
    let body = text.trim();
    let mut rest = body.strip_prefix("PD[").map(|s| s.trim_end().strip_suffix(']').unwrap_or(s)).unwrap_or(body);
    loop {
        rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == ';');
        if rest.is_empty() {
            break;
        }
        let Some(after) = rest.strip_prefix("X[") else {
            let line = line_of(body, rest);
            return Err(syntax(
                line,
                format!("expected X[...], found {:?}", rest.chars().take(12).collect::<String>()),
            ));
        };
        let close = after.find(']').ok_or_else(|| syntax(line_of(body, rest), "unterminated crossing"))?;
        let labels: Vec<String> = after[..close].split(',').map(|s| s.trim().to_string()).collect();
        if labels.iter().any(|l| l.is_empty()) {
            return Err(syntax(line_of(body, rest), "empty strand label"));
        }
        crossings.push(labels);
        rest = &after[close + 1..];
    }
    for (i, c) in crossings.iter().enumerate() {
        if c.len() != 4 {
            return Err(Error::NonQuadrivalent { crossing: i, found: c.len() });
        }
    }
    let mut count: HashMap<&str, usize> = HashMap::new();
    let mut order: Vec<&str> = Vec::new();
    for c in &crossings {
        for l in c {
            let k = count.entry(l.as_str()).or_insert(0);
            if *k == 0 {
                order.push(l.as_str());
            }
            *k += 1;
        }
    }
    if let Some(l) = order.iter().find(|l| count[**l] != 2) {
        return Err(Error::Label { label: l.to_string(), count: count[*l] });
    }
    let id: HashMap<&str, usize> = order.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    let mut rotations = vec![Vec::new(); crossings.len()];
    for (v, c) in crossings.iter().enumerate() {
        for l in c {
            let e = id[l.as_str()];
            let d = 2 * e + ends[e].len();
            ends[e].push(v);
            rotations[v].push(d);
        }
    }
    let edges: Vec<(usize, usize)> = ends.iter().map(|x| (x[0], x[1])).collect();
    Graph::new(4, crossings.len(), &edges, Some(&rotations))
}

fn line_of(whole: &str, rest: &str) -> usize {
    let offset = whole.len() - rest.len();
    whole[..offset].matches('\n').count() + 1
}

/// A catalogue graph with its named orientations; the first is the default.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub graph: Graph,
    pub orientations: Vec<(&'static str, OrientationAssignment)>,
}

impl Builtin {
    pub fn orientation(&self, name: &str) -> Result<&OrientationAssignment> {
        self.orientations
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::UnknownName(format!("{}.{name}", self.name)))
    }
}

pub const BUILTIN_NAMES: [&str; 7] = ["fig7a", "fig7b", "fig7c", "whitehead", "star8", "star6", "fig16"];

/// Bits for vertices 0, 1, 2, ... in reading order.
fn bits(s: &str) -> OrientationAssignment {
    OrientationAssignment::new(s.bytes().map(|b| b - b'0').collect())
}

pub fn builtin(name: &str) -> Result<Builtin> {
    let (graph, orientations): (Graph, Vec<(&'static str, OrientationAssignment)>) = match name {
        "fig7a" => (Graph::new(4, 1, &[(0, 0), (0, 0)], Some(&[vec![0, 1, 2, 3]]))?, vec![("default", bits("0"))]),
        "fig7b" => (
            Graph::new(4, 2, &[(0, 1); 4], Some(&[vec![0, 2, 4, 6], vec![7, 5, 3, 1]]))?,
            vec![("default", bits("00")), ("alt", bits("10"))],
        ),
        "fig7c" => (
            Graph::new(4, 2, &[(0, 0), (0, 1), (0, 1), (1, 1)], Some(&[vec![0, 1, 2, 4], vec![5, 3, 6, 7]]))?,
            vec![("default", bits("11"))],
        ),
        "whitehead" => (
            Graph::new(
                4,
                5,
                &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 2), (2, 0), (0, 1), (1, 4), (4, 3), (3, 0)],
                Some(&[
                    vec![12, 0, 19, 11],
                    vec![2, 14, 1, 13],
                    vec![9, 3, 10, 4],
                    vec![17, 5, 18, 6],
                    vec![7, 15, 8, 16],
                ]),
            )?,
            vec![("ex41", bits("10001"))],
        ),
        "star8" => (
            Graph::new(
                4,
                8,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (5, 1),
                    (1, 6),
                    (6, 3),
                    (3, 7),
                    (7, 5),
                    (5, 0),
                    (0, 6),
                    (6, 2),
                    (2, 7),
                    (7, 4),
                    (4, 0),
                ],
                Some(&[
                    vec![0, 22, 31, 21],
                    vec![2, 12, 1, 11],
                    vec![25, 3, 26, 4],
                    vec![15, 5, 16, 6],
                    vec![30, 7, 29, 8],
                    vec![10, 20, 9, 19],
                    vec![13, 24, 14, 23],
                    vec![17, 27, 18, 28],
                ]),
            )?,
            vec![("ex42", bits("01110111"))],
        ),
        "star6" => (
            Graph::new(
                4,
                6,
                &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2), (2, 5), (5, 0), (1, 4), (4, 3), (3, 5), (5, 1)],
                Some(&[
                    vec![7, 15, 0, 8],
                    vec![23, 2, 16, 1],
                    vec![12, 4, 11, 3],
                    vec![6, 19, 5, 20],
                    vec![10, 18, 9, 17],
                    vec![21, 13, 22, 14],
                ]),
            )?,
            vec![
                ("orbit1", bits("100110")),
                ("orbit2", bits("000110")),
                ("orbit3", bits("110110")),
                ("orbit4", bits("010110")),
                ("orbit5", bits("110010")),
                ("orbit6", bits("111100")),
                ("orbit7", bits("010100")),
            ],
        ),
        "fig16" => (
            Graph::new(
                4,
                17,
                &[
                    (0, 1),
                    (1, 2),
                    (2, 3),
                    (3, 0),
                    (0, 1),
                    (1, 4),
                    (4, 5),
                    (5, 6),
                    (6, 7),
                    (7, 8),
                    (8, 3),
                    (3, 2),
                    (2, 4),
                    (4, 9),
                    (9, 10),
                    (10, 11),
                    (11, 12),
                    (12, 0),
                    (12, 13),
                    (13, 10),
                    (10, 6),
                    (6, 14),
                    (14, 8),
                    (8, 15),
                    (15, 16),
                    (16, 12),
                    (16, 11),
                    (11, 13),
                    (13, 9),
                    (9, 5),
                    (5, 14),
                    (14, 7),
                    (7, 15),
                    (15, 16),
                ],
                Some(&[
                    vec![35, 0, 8, 7],
                    vec![9, 1, 10, 2],
                    vec![3, 24, 4, 23],
                    vec![6, 22, 5, 21],
                    vec![11, 26, 12, 25],
                    vec![13, 59, 14, 60],
                    vec![15, 41, 16, 42],
                    vec![17, 64, 18, 63],
                    vec![45, 19, 46, 20],
                    vec![57, 28, 58, 27],
                    vec![39, 30, 40, 29],
                    vec![54, 32, 53, 31],
                    vec![34, 51, 33, 36],
                    vec![37, 55, 38, 56],
                    vec![61, 43, 62, 44],
                    vec![48, 66, 47, 65],
                    vec![52, 50, 67, 49],
                ]),
            )?,
            vec![("default", bits("00001000000000000"))],
        ),
        other => return Err(Error::UnknownName(other.to_string())),
    };
    let name = BUILTIN_NAMES.iter().find(|n| **n == name).expect("matched above");
    Ok(Builtin { name, graph, orientations })
}

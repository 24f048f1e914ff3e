#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ochroma::catalog::builtin;
use ochroma::graph::{edge_of, twin, Graph};
use ochroma::ocycle::{cycle_usage, enumerate_decompositions};
use ochroma::orientation::OrientationAssignment;
use ochroma::symmetry::map_code;
use ochroma::transforms::{add_loop, connect_sum_edge, unsmooth};
use rand::Rng;

pub const STAR6_TABLES: &str = include_str!("../data/star6_tables.txt");
pub const STAR8_TABLE: &str = include_str!("../data/star8_table.txt");

/// Smallest rotation or reversal of a closed vertex sequence.
pub fn canon(seq: &[usize]) -> Vec<usize> {
    let k = seq.len();
    let rev: Vec<usize> = seq.iter().rev().copied().collect();
    let mut best: Option<Vec<usize>> = None;
    for s in [seq, rev.as_slice()] {
        for i in 0..k {
            let r: Vec<usize> = (0..k).map(|j| s[(i + j) % k]).collect();
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

/// `(1,2,6,1)` to the canonical open sequence `[1,2,6]`.
pub fn parse_cycle(s: &str) -> Vec<usize> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let mut v: Vec<usize> = inner.split(',').map(|x| x.trim().parse().expect("vertex number")).collect();
    v.pop();
    canon(&v)
}

pub fn show_cycle(seq: &[usize]) -> String {
    let mut parts: Vec<String> = seq.iter().map(|v| v.to_string()).collect();
    parts.push(seq[0].to_string());
    format!("({})", parts.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub cycle: Vec<usize>,
    pub length: usize,
    pub used_in: Vec<usize>,
}

impl Row {
    pub fn line(&self) -> String {
        let idx: Vec<String> = self.used_in.iter().map(|i| i.to_string()).collect();
        format!("{} {} [{}]", show_cycle(&self.cycle), self.length, idx.join(","))
    }
}

/// A cycle table with participation rows and decompositions, each
/// decomposition a sorted list of canonical 1-based cycles.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub rows: Vec<Row>,
    pub decompositions: Vec<Vec<Vec<usize>>>,
}

impl Table {
    pub fn cycle_set(&self) -> BTreeSet<Vec<usize>> {
        self.rows.iter().map(|r| r.cycle.clone()).collect()
    }

    pub fn decomposition_set(&self) -> BTreeSet<Vec<Vec<usize>>> {
        self.decompositions.iter().cloned().collect()
    }

    /// Participation derived from the decomposition lists.
    pub fn derived_usage(&self, cycle: &[usize]) -> Vec<usize> {
        (0..self.decompositions.len()).filter(|&i| self.decompositions[i].iter().any(|c| c == cycle)).collect()
    }
}

pub fn parse_tables(text: &str) -> Vec<Table> {
    let mut out: Vec<Table> = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if line.starts_with("table") {
            out.push(Table::default());
            continue;
        }
        let t = out.last_mut().expect("table header first");
        if let Some(rest) = line.strip_prefix("cycle ") {
            let mut it = rest.split_whitespace();
            let cycle = parse_cycle(it.next().expect("cycle"));
            let length = it.next().expect("length").parse().expect("length number");
            let list = it.next().expect("participation").trim_matches(|c| c == '[' || c == ']');
            let used_in = list.split(',').filter(|s| !s.is_empty()).map(|s| s.parse().expect("index")).collect();
            t.rows.push(Row { cycle, length, used_in });
        } else if let Some(rest) = line.strip_prefix("decomposition ") {
            let mut d: Vec<Vec<usize>> = rest.split_whitespace().skip(1).map(parse_cycle).collect();
            d.sort();
            t.decompositions.push(d);
        }
    }
    out
}

/// The computed table, with cycles in enumeration order and vertices
/// numbered from 1.
pub fn compute_table(g: &Graph, sigma: &OrientationAssignment) -> Table {
    let (cycles, decs) = enumerate_decompositions(g, sigma).expect("enumeration");
    let usage = cycle_usage(cycles.len(), &decs);
    let seq = |i: usize| canon(&cycles[i].vertices().iter().map(|v| v + 1).collect::<Vec<_>>());
    let rows =
        (0..cycles.len()).map(|i| Row { cycle: seq(i), length: cycles[i].len(), used_in: usage[i].clone() }).collect();
    let decompositions = decs
        .iter()
        .map(|d| {
            let mut cs: Vec<Vec<usize>> = d.cycles.iter().map(|&i| seq(i)).collect();
            cs.sort();
            cs
        })
        .collect();
    Table { rows, decompositions }
}

/// Renders `ours` in the row order of `published`, with decomposition
/// indices translated to the published numbering. `None` when the cycle or
/// decomposition sets differ.
pub fn render_as(ours: &Table, published: &Table) -> Option<Vec<String>> {
    if ours.cycle_set() != published.cycle_set() || ours.decomposition_set() != published.decomposition_set() {
        return None;
    }
    let to_published: Vec<usize> = ours
        .decompositions
        .iter()
        .map(|d| published.decompositions.iter().position(|p| p == d).expect("same set"))
        .collect();
    let by_cycle: BTreeMap<&Vec<usize>, &Row> = ours.rows.iter().map(|r| (&r.cycle, r)).collect();
    Some(
        published
            .rows
            .iter()
            .map(|p| {
                let r = by_cycle[&p.cycle];
                let mut used_in: Vec<usize> = r.used_in.iter().map(|&i| to_published[i]).collect();
                used_in.sort_unstable();
                Row { cycle: r.cycle.clone(), length: r.length, used_in }.line()
            })
            .collect(),
    )
}

pub fn fig7(name: &str) -> (Graph, OrientationAssignment) {
    let b = builtin(name).expect("builtin");
    (b.graph.clone(), b.orientations[0].1.clone())
}

/// Every map reachable from the three base cases by inverse smoothing, loop
/// insertion and edge-level sums with a base case, up to `max_vertices`
/// vertices, one per map up to reflection. Sorted by vertex count.
pub fn generated_family(max_vertices: usize) -> Vec<Graph> {
    let bases: Vec<Graph> = ["fig7a", "fig7b", "fig7c"].iter().map(|n| fig7(n).0).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = Vec::new();
    for g in &bases {
        if seen.insert(map_code(g, true)) {
            out.push(g.clone());
            frontier.push(g.clone());
        }
    }
    while let Some(g) = frontier.pop() {
        let mut next = Vec::new();
        let n = g.vertex_count();
        if n < max_vertices {
            for face in g.faces().expect("embedded") {
                for (i, &x) in face.iter().enumerate() {
                    for &y in &face[i + 1..] {
                        if let Ok(h) = unsmooth(&g, x, y) {
                            next.push(h);
                        }
                    }
                }
            }
            for d in 0..g.dart_count() {
                for right in [false, true] {
                    if let Ok(h) = add_loop(&g, d, right) {
                        next.push(h);
                    }
                }
            }
        }
        for b in &bases {
            if n + b.vertex_count() > max_vertices {
                continue;
            }
            for e in 0..g.edge_count() {
                for f in 0..b.edge_count() {
                    for crossed in [false, true] {
                        if let Ok(h) = connect_sum_edge(&g, e, b, f, crossed) {
                            next.push(h);
                        }
                    }
                }
            }
        }
        for h in next {
            if h.vertex_count() <= max_vertices && h.is_connected() && seen.insert(map_code(&h, true)) {
                out.push(h.clone());
                frontier.push(h);
            }
        }
    }
    out.sort_by_key(|g| g.vertex_count());
    out
}

/// A random connected plane 4-regular multigraph grown from a base case,
/// with a random orientation.
pub fn random_instance<R: Rng>(rng: &mut R, max_vertices: usize) -> (Graph, OrientationAssignment) {
    let bases: Vec<Graph> = ["fig7a", "fig7b", "fig7c"].iter().map(|n| fig7(n).0).collect();
    let mut g = bases[rng.gen_range(0..3)].clone();
    let target = rng.gen_range(1..=max_vertices);
    let mut attempts = 0;
    while g.vertex_count() < target && attempts < 100 {
        attempts += 1;
        let grown = match rng.gen_range(0..4) {
            0 => {
                let d = rng.gen_range(0..g.dart_count());
                add_loop(&g, d, rng.gen())
            }
            1 => {
                let b = &bases[rng.gen_range(0..3)];
                if g.vertex_count() + b.vertex_count() > target {
                    continue;
                }
                connect_sum_edge(&g, rng.gen_range(0..g.edge_count()), b, rng.gen_range(0..b.edge_count()), rng.gen())
            }
            _ => {
                let faces = g.faces().expect("embedded");
                let f = &faces[rng.gen_range(0..faces.len())];
                unsmooth(&g, f[rng.gen_range(0..f.len())], f[rng.gen_range(0..f.len())])
            }
        };
        if let Ok(h) = grown {
            g = h;
        }
    }
    let counts = ochroma::orientation::orientation_counts(&g);
    let sigma = OrientationAssignment::new(counts.iter().map(|&c| rng.gen_range(0..c as u8)).collect());
    (g, sigma)
}

/// Brute-force o-cycles as sorted edge sets: every connected edge subset in
/// which each vertex is met 0 or 2 times, through darts of different cells.
pub fn brute_cycles(g: &Graph, sigma: &OrientationAssignment) -> BTreeSet<Vec<usize>> {
    let m = g.edge_count();
    assert!(m <= 20, "subset enumeration is limited to small graphs");
    let cell: Vec<u8> =
        (0..g.dart_count()).map(|d| sigma.orientation(g, g.tail(d)).unwrap().cell_of(d).unwrap()).collect();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << m) {
        let edges: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
        for &e in &edges {
            at[g.tail(2 * e)].push(2 * e);
            at[g.tail(2 * e + 1)].push(2 * e + 1);
        }
        let ok = at.iter().all(|ds| ds.is_empty() || (ds.len() == 2 && cell[ds[0]] != cell[ds[1]]));
        if !ok {
            continue;
        }
        // Connected: walk from the first edge and count.
        let start = 2 * edges[0];
        let mut d = start;
        let mut steps = 0;
        loop {
            steps += 1;
            let arrive = twin(d);
            let v = g.tail(arrive);
            d = *at[v].iter().find(|&&x| x != arrive).unwrap();
            if d == start {
                break;
            }
        }
        if steps == edges.len() {
            out.insert(edges);
        }
    }
    out
}

/// Brute-force exact covers of the edge set by the given edge sets.
pub fn brute_covers(m: usize, cycles: &[Vec<usize>]) -> BTreeSet<Vec<Vec<usize>>> {
    assert!(cycles.len() <= 22, "subset enumeration is limited to small lists");
    let masks: Vec<u64> = cycles.iter().map(|c| c.iter().fold(0u64, |acc, &e| acc | 1 << e)).collect();
    let full = (1u64 << m) - 1;
    let mut out = BTreeSet::new();
    for pick in 1u32..(1 << cycles.len()) {
        let mut acc = 0u64;
        let mut total = 0;
        for (i, &mk) in masks.iter().enumerate() {
            if pick >> i & 1 == 1 {
                acc |= mk;
                total += mk.count_ones();
            }
        }
        if acc == full && total as usize == m {
            let mut chosen: Vec<Vec<usize>> =
                (0..cycles.len()).filter(|&i| pick >> i & 1 == 1).map(|i| cycles[i].clone()).collect();
            chosen.sort();
            out.insert(chosen);
        }
    }
    out
}

/// Number of dart maps realising each vertex permutation, counted from edge
/// multiplicities. Parallel edges permute freely; loops also flip.
pub fn brute_automorphism_count(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut mult = vec![vec![0usize; n]; n];
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        mult[a][b] += 1;
        if a != b {
            mult[b][a] += 1;
        }
    }
    let fact = |k: usize| (1..=k).product::<usize>();
    let mut per_map = 1;
    for a in 0..n {
        for b in a..n {
            let k = mult[a][b];
            per_map *= fact(k) * if a == b { 1 << k } else { 1 };
        }
    }
    let mut count = 0;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| {
        if (0..n).all(|a| (0..n).all(|b| mult[a][b] == mult[p[a]][p[b]])) {
            count += 1;
        }
    });
    count * per_map
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Edge ids of each colour class.
pub fn classes(colours: &[usize]) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, &c) in colours.iter().enumerate() {
        out.entry(c).or_default().push(e);
    }
    out
}

pub fn edge_set_of(darts: &[usize]) -> Vec<usize> {
    let mut e: Vec<usize> = darts.iter().map(|&d| edge_of(d)).collect();
    e.sort_unstable();
    e
}

/// The Petersen graph, abstract.
pub fn petersen() -> ochroma::transforms::CubicGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    ochroma::transforms::CubicGraph::new(10, &edges, None).unwrap()
}

pub fn k33() -> ochroma::transforms::CubicGraph {
    let edges: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    ochroma::transforms::CubicGraph::new(6, &edges, None).unwrap()
}

/// True when some rotation-preserving isomorphism carries the cells of
/// `s` onto the cells of `t`.
pub fn same_oriented_map(g: &Graph, s: &OrientationAssignment, h: &Graph, t: &OrientationAssignment) -> bool {
    use ochroma::orientation::orientation_index;
    use ochroma::symmetry::{isomorphisms, MapKind};
    isomorphisms(g, h).iter().filter(|a| a.kind_between(g, h) == MapKind::Preserving).any(|a| {
        (0..g.vertex_count()).all(|v| {
            let o = s.orientation(g, v).unwrap();
            let w = a.vertex[v];
            orientation_index(h, w, [a.dart[o.cells[0][0]], a.dart[o.cells[0][1]]]) == Some(t.choice[w])
        })
    })
}

/// Edges of a piece that were made by joining two source edges.
pub fn seam_edges(origin: &[Vec<usize>]) -> Vec<usize> {
    origin.iter().enumerate().filter(|(_, o)| o.len() == 2).map(|(e, _)| e).collect()
}

/// The same oriented map with edge `e` read in the other direction.
pub fn reverse_edge(g: &Graph, s: &OrientationAssignment, e: usize) -> (Graph, OrientationAssignment) {
    use ochroma::orientation::orientation_index;
    let swap = |d: usize| if edge_of(d) == e { twin(d) } else { d };
    let mut edges = g.edges();
    edges[e] = (edges[e].1, edges[e].0);
    let rot: Vec<Vec<usize>> =
        (0..g.vertex_count()).map(|v| g.darts_at(v).iter().map(|&d| swap(d)).collect()).collect();
    let h = Graph::new(g.degree(), g.vertex_count(), &edges, Some(&rot)).unwrap();
    let choice = (0..g.vertex_count())
        .map(|v| {
            let o = s.orientation(g, v).unwrap();
            orientation_index(&h, v, [swap(o.cells[0][0]), swap(o.cells[0][1])]).unwrap()
        })
        .collect();
    (h, OrientationAssignment::new(choice))
}

pub fn k4() -> ochroma::transforms::CubicGraph {
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)];
    ochroma::transforms::CubicGraph::new(
        4,
        &edges,
        Some(&[vec![0, 2, 4], vec![1, 11, 6], vec![3, 7, 8], vec![5, 9, 10]]),
    )
    .unwrap()
}

pub fn prism() -> ochroma::transforms::CubicGraph {
    let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];
    let rot = [vec![12, 0, 5], vec![2, 1, 14], vec![4, 3, 16], vec![6, 13, 11], vec![8, 15, 7], vec![10, 17, 9]];
    ochroma::transforms::CubicGraph::new(6, &edges, Some(&rot)).unwrap()
}

pub fn cube() -> ochroma::transforms::CubicGraph {
    let mut edges = Vec::new();
    for v in 0..8usize {
        for bit in [1, 2, 4] {
            if v & bit == 0 {
                edges.push((v, v | bit));
            }
        }
    }
    ochroma::transforms::CubicGraph::new(8, &edges, None).unwrap()
}

/// Lifts every proper 3-edge-colouring through every 1-factor and pushes
/// it back. Returns the number of (matching, colouring) pairs checked.
pub fn lift_push_round_trips(h: &ochroma::transforms::CubicGraph) -> Result<usize, String> {
    use ochroma::transforms::{lift_to_o_colouring, perfect_matchings, push_to_edge_colouring, three_edge_colourings};
    let colourings = three_edge_colourings(h);
    let mut checked = 0;
    for f in perfect_matchings(h) {
        for col in &colourings {
            let (c, oc) = lift_to_o_colouring(h, &f, col).map_err(|e| e.to_string())?;
            let back = push_to_edge_colouring(h, &f, &oc.edge_colours(&c.graph)).map_err(|e| e.to_string())?;
            if &back != col {
                return Err(format!("matching {f:?}: colouring did not survive the round trip"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Splits every generated graph up to `max_vertices` vertices at each
/// 2-edge cut and transverse cut-vertex (first four orientations) and sums
/// the pieces back. Returns how many of each were rebuilt.
pub fn split_sum_round_trips(max_vertices: usize) -> Result<(usize, usize), String> {
    use ochroma::graph::SeparationKind;
    use ochroma::orientation::{classify, enumerate_assignments, Kind};
    use ochroma::transforms::{connect_sum_edge_oriented, connect_sum_vertex, split_cut_vertex, split_two_edge_cut};
    let (mut edge_cuts, mut cut_vertices) = (0, 0);
    for g in generated_family(max_vertices) {
        let seps = g.find_separations().map_err(|e| e.to_string())?;
        if seps.is_empty() {
            continue;
        }
        for s in enumerate_assignments(&g).take(4) {
            for sep in &seps {
                match sep.kind {
                    SeparationKind::TwoEdgeCut(e, f) => {
                        let Ok((p1, p2)) = split_two_edge_cut(&g, &s, e, f) else { continue };
                        let (a, b) = (seam_edges(&p1.origin)[0], seam_edges(&p2.origin)[0]);
                        let back = [false, true].iter().any(|&crossed| {
                            connect_sum_edge_oriented(&p1.graph, &p1.sigma, a, &p2.graph, &p2.sigma, b, crossed)
                                .is_ok_and(|p| same_oriented_map(&g, &s, &p.graph, &p.sigma))
                        });
                        if !back {
                            return Err(format!("2-edge cut {e} {f} was not rebuilt"));
                        }
                        edge_cuts += 1;
                    }
                    SeparationKind::CutVertex(v) => {
                        if classify(&g, &s, v).map_err(|e| e.to_string())? != Kind::Transverse {
                            continue;
                        }
                        let Ok((p1, p2)) = split_cut_vertex(&g, &s, v) else { continue };
                        let (a, b) = (seam_edges(&p1.origin)[0], seam_edges(&p2.origin)[0]);
                        // The seam edges carry no preferred direction, so try both readings.
                        let back = (0..4).any(|flips| {
                            let (g1, s1) = if flips & 1 == 1 {
                                reverse_edge(&p1.graph, &p1.sigma, a)
                            } else {
                                (p1.graph.clone(), p1.sigma.clone())
                            };
                            let (g2, s2) = if flips & 2 == 2 {
                                reverse_edge(&p2.graph, &p2.sigma, b)
                            } else {
                                (p2.graph.clone(), p2.sigma.clone())
                            };
                            connect_sum_vertex(&g1, &s1, a, &g2, &s2, b, true)
                                .is_ok_and(|(p, _)| same_oriented_map(&g, &s, &p.graph, &p.sigma))
                        });
                        if !back {
                            return Err(format!("cut-vertex {v} was not rebuilt"));
                        }
                        cut_vertices += 1;
                    }
                }
            }
        }
    }
    Ok((edge_cuts, cut_vertices))
}

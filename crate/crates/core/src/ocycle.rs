//! O-cycles, edge decompositions into o-cycles, and colourings of those
//! decompositions.
//!
//! An o-walk may leave a vertex only through the cell it did not arrive
//! in. O-cycles are the o-walks that close up without repeating a vertex;
//! a loop counts when its two darts lie in different cells.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{edge_of, twin, Dart, Graph};
use crate::orientation::OrientationAssignment;

/// A closed o-walk stored as its outgoing darts, in canonical position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OCycle {
    darts: Vec<Dart>,
    vertices: Vec<usize>,
}

impl OCycle {
    /// Canonical cycle through the given outgoing darts (each dart's head
    /// must be the next dart's tail). Picks the rotation and direction with
    /// the smallest vertex sequence, ties broken by edge sequence and then
    /// by darts (a loop reads the same both ways).
    pub fn new(g: &Graph, darts: &[Dart]) -> OCycle {
        let k = darts.len();
        let reversed: Vec<Dart> = darts.iter().rev().map(|&d| twin(d)).collect();
        let mut best: Option<(Vec<usize>, Vec<usize>, Vec<Dart>)> = None;
        for seq in [darts, reversed.as_slice()] {
            for s in 0..k {
                let rot: Vec<Dart> = (0..k).map(|i| seq[(s + i) % k]).collect();
                let vs: Vec<usize> = rot.iter().map(|&d| g.tail(d)).collect();
                let es: Vec<usize> = rot.iter().map(|&d| edge_of(d)).collect();
                let better = match &best {
                    None => true,
                    Some((bv, be, bd)) => (&vs, &es, &rot) < (bv, be, bd),
                };
                if better {
                    best = Some((vs, es, rot));
                }
            }
        }
        let (vertices, _, darts) = best.expect("cycle has at least one dart");
        OCycle { darts, vertices }
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Vertex sequence without the closing repeat.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> Vec<usize> {
        self.darts.iter().map(|&d| edge_of(d)).collect()
    }

    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Sorted edge ids.
    pub fn edge_set(&self) -> Vec<usize> {
        let mut e = self.edges();
        e.sort_unstable();
        e
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn shares_vertex(&self, other: &OCycle) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    /// `(1,2,6,1)` style listing, vertex ids shifted by `base`.
    pub fn label(&self, base: usize) -> String {
        let mut parts: Vec<String> = self.vertices.iter().map(|v| (v + base).to_string()).collect();
        parts.push((self.vertices[0] + base).to_string());
        format!("({})", parts.join(","))
    }

    fn key(&self) -> (&[usize], Vec<usize>, &[Dart]) {
        (&self.vertices, self.edges(), &self.darts)
    }
}

impl Ord for OCycle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for OCycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Indices into a sorted o-cycle list whose edge sets partition the edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decomposition {
    pub cycles: Vec<usize>,
}

/// A decomposition plus a colour per cycle; cycles sharing a vertex differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OColouring {
    pub cycles: Vec<OCycle>,
    pub colour: Vec<usize>,
    pub palette: usize,
}

impl OColouring {
    /// Colour of every edge.
    pub fn edge_colours(&self, g: &Graph) -> Vec<usize> {
        let mut out = vec![usize::MAX; g.edge_count()];
        for (c, &col) in self.cycles.iter().zip(&self.colour) {
            for e in c.edges() {
                out[e] = col;
            }
        }
        out
    }

    /// Rebuilds the cycles from an edge colouring, failing when the colouring
    /// is not an o-colouring. Colour labels are kept as given.
    pub fn from_edge_colours(g: &Graph, sigma: &OrientationAssignment, colours: &[usize]) -> Result<OColouring> {
        check_o_colouring(g, sigma, colours).map_err(Error::Validation)?;
        let dense = colours;
        let cell = sigma.cells(g)?;
        let mut used = vec![false; g.edge_count()];
        let mut cycles = Vec::new();
        let mut colour = Vec::new();
        for e in 0..g.edge_count() {
            if used[e] {
                continue;
            }
            let start = 2 * e;
            let mut darts = vec![start];
            used[e] = true;
            let mut d = start;
            loop {
                let arrive = twin(d);
                let next = g
                    .darts_at(g.tail(arrive))
                    .iter()
                    .copied()
                    .find(|&x| x != arrive && dense[edge_of(x)] == dense[e] && cell[x] != cell[arrive])
                    .expect("validated colouring continues at every vertex");
                if next == start {
                    break;
                }
                used[edge_of(next)] = true;
                darts.push(next);
                d = next;
            }
            cycles.push(OCycle::new(g, &darts));
            colour.push(dense[e]);
        }
        let palette = colour.iter().collect::<BTreeSet<_>>().len();
        Ok(OColouring { cycles, colour, palette })
    }
}

/// Renumbers colours 0.. in order of first appearance.
pub fn densify(colours: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    colours
        .iter()
        .map(|&c| {
            let n = map.len();
            *map.entry(c).or_insert(n)
        })
        .collect()
}

/// The darts that may follow arrival along `incoming`: the cell at the
/// head vertex that does not hold the arriving dart.
pub fn step_options(g: &Graph, sigma: &OrientationAssignment, incoming: Dart) -> Result<Vec<Dart>> {
    let arrive = twin(incoming);
    let o = sigma.orientation(g, g.tail(arrive))?;
    let c = o.cell_of(arrive).expect("arriving dart sits at the vertex");
    Ok(o.cells[1 - c as usize].to_vec())
}

/// All o-cycles, canonical and sorted.
pub fn enumerate_o_cycles(g: &Graph, sigma: &OrientationAssignment) -> Result<Vec<OCycle>> {
    let cell = sigma.cells(g)?;
    let mut found = BTreeSet::new();
    let mut visited = vec![false; g.vertex_count()];
    let mut path = Vec::new();
    for start in 0..g.dart_count() {
        let v0 = g.tail(start);
        visited[v0] = true;
        path.push(start);
        extend(g, &cell, start, v0, &mut visited, &mut path, &mut found);
        path.pop();
        visited[v0] = false;
    }
    Ok(found.into_iter().collect())
}

fn extend(
    g: &Graph,
    cell: &[u8],
    start: Dart,
    v0: usize,
    visited: &mut [bool],
    path: &mut Vec<Dart>,
    found: &mut BTreeSet<OCycle>,
) {
    let d = *path.last().expect("path is never empty");
    let arrive = twin(d);
    let h = g.tail(arrive);
    if h == v0 {
        if cell[arrive] != cell[start] {
            found.insert(OCycle::new(g, path));
        }
        return;
    }
    // Each cycle is discovered from its smallest vertex only.
    if visited[h] || h < v0 {
        return;
    }
    visited[h] = true;
    for &next in g.darts_at(h) {
        if next != arrive && cell[next] != cell[arrive] {
            path.push(next);
            extend(g, cell, start, v0, visited, path, found);
            path.pop();
        }
    }
    visited[h] = false;
}

/// Every exact cover of the edge set by the given cycles, each as sorted
/// cycle indices, in lexicographic order.
pub fn decompositions_of(g: &Graph, cycles: &[OCycle]) -> Vec<Decomposition> {
    let mut out = Vec::new();
    cover(g, cycles, usize::MAX, &mut out);
    out
}

/// Like [`decompositions_of`], stopping after `limit` results.
pub fn cover(g: &Graph, cycles: &[OCycle], limit: usize, out: &mut Vec<Decomposition>) {
    let m = g.edge_count();
    let mut by_edge = vec![Vec::new(); m];
    let edge_sets: Vec<Vec<usize>> = cycles.iter().map(|c| c.edge_set()).collect();
    for (i, es) in edge_sets.iter().enumerate() {
        for &e in es {
            by_edge[e].push(i);
        }
    }
    let mut covered = vec![false; m];
    let mut chosen = Vec::new();
    search(&edge_sets, &by_edge, &mut covered, &mut chosen, limit, out);
    out.sort();
}

fn search(
    edge_sets: &[Vec<usize>],
    by_edge: &[Vec<usize>],
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    limit: usize,
    out: &mut Vec<Decomposition>,
) {
    if out.len() >= limit {
        return;
    }
    let Some(e) = covered.iter().position(|&c| !c) else {
        let mut cycles = chosen.clone();
        cycles.sort_unstable();
        out.push(Decomposition { cycles });
        return;
    };
    for &c in &by_edge[e] {
        if edge_sets[c].iter().any(|&x| covered[x]) {
            continue;
        }
        for &x in &edge_sets[c] {
            covered[x] = true;
        }
        chosen.push(c);
        search(edge_sets, by_edge, covered, chosen, limit, out);
        chosen.pop();
        for &x in &edge_sets[c] {
            covered[x] = false;
        }
    }
}

pub fn enumerate_decompositions(g: &Graph, sigma: &OrientationAssignment) -> Result<(Vec<OCycle>, Vec<Decomposition>)> {
    let cycles = enumerate_o_cycles(g, sigma)?;
    let decs = decompositions_of(g, &cycles);
    Ok((cycles, decs))
}

/// For each cycle, the indices of the decompositions that use it.
pub fn cycle_usage(cycle_count: usize, decompositions: &[Decomposition]) -> Vec<Vec<usize>> {
    let mut usage = vec![Vec::new(); cycle_count];
    for (i, d) in decompositions.iter().enumerate() {
        for &c in &d.cycles {
            usage[c].push(i);
        }
    }
    usage
}

/// Exact chromatic number of the graph on `cycles` where two cycles are
/// adjacent when they share a vertex, with a witness colouring.
pub fn min_colours(cycles: &[OCycle], d: &Decomposition) -> (usize, OColouring) {
    let members: Vec<&OCycle> = d.cycles.iter().map(|&i| &cycles[i]).collect();
    let n = members.len();
    let adj: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && members[i].shares_vertex(members[j])).collect()).collect();
    let (k, colour) = chromatic(&adj);
    let colouring = OColouring { cycles: members.into_iter().cloned().collect(), colour, palette: k };
    (k, colouring)
}

/// Smallest k admitting a proper colouring, by backtracking over k upward.
pub fn chromatic(adj: &[Vec<bool>]) -> (usize, Vec<usize>) {
    let n = adj.len();
    if n == 0 {
        return (0, Vec::new());
    }
    // Colour high-degree vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(adj[i].iter().filter(|&&b| b).count()));
    for k in 1..=n {
        let mut colour = vec![usize::MAX; n];
        if colour_with(adj, &order, 0, k, &mut colour) {
            return (k, colour);
        }
    }
    unreachable!("n colours always suffice")
}

fn colour_with(adj: &[Vec<bool>], order: &[usize], at: usize, k: usize, colour: &mut [usize]) -> bool {
    let Some(&v) = order.get(at) else {
        return true;
    };
    // Symmetry breaking: never open more than one new colour at a time.
    let used = colour.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |m| m + 1);
    for c in 0..k.min(used + 1) {
        if (0..adj.len()).any(|u| adj[v][u] && colour[u] == c) {
            continue;
        }
        colour[v] = c;
        if colour_with(adj, order, at + 1, k, colour) {
            return true;
        }
        colour[v] = usize::MAX;
    }
    false
}

/// Smallest palette over all decompositions, with a witness.
pub fn chi_o(g: &Graph, sigma: &OrientationAssignment) -> Result<(usize, OColouring)> {
    let (cycles, decs) = enumerate_decompositions(g, sigma)?;
    decs.iter().map(|d| min_colours(&cycles, d)).min_by_key(|(k, _)| *k).ok_or(Error::NotOColourable)
}

pub fn is_o_colourable(g: &Graph, sigma: &OrientationAssignment) -> Result<bool> {
    let cycles = enumerate_o_cycles(g, sigma)?;
    let mut out = Vec::new();
    cover(g, &cycles, 1, &mut out);
    Ok(!out.is_empty())
}

/// One decomposition with an exactly minimised palette, if any exists.
pub fn first_o_colouring(g: &Graph, sigma: &OrientationAssignment) -> Result<Option<OColouring>> {
    let cycles = enumerate_o_cycles(g, sigma)?;
    let mut out = Vec::new();
    cover(g, &cycles, 1, &mut out);
    Ok(out.first().map(|d| min_colours(&cycles, d).1))
}

pub fn validate_o_colouring(g: &Graph, sigma: &OrientationAssignment, colours: &[usize]) -> bool {
    check_o_colouring(g, sigma, colours).is_ok()
}

/// Reason an edge colouring fails to be an o-colouring.
pub fn check_o_colouring(
    g: &Graph,
    sigma: &OrientationAssignment,
    colours: &[usize],
) -> std::result::Result<(), String> {
    if colours.len() != g.edge_count() {
        return Err(format!("{} colours for {} edges", colours.len(), g.edge_count()));
    }
    let cell = sigma.cells(g).map_err(|e| e.to_string())?;
    for v in 0..g.vertex_count() {
        let ds = g.darts_at(v);
        let mut seen: Vec<usize> = ds.iter().map(|&d| colours[edge_of(d)]).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != 2 {
            return Err(format!("vertex {v} sees {} colours", seen.len()));
        }
        for c in 0..2u8 {
            let mut in_cell: Vec<usize> = ds.iter().filter(|&&d| cell[d] == c).map(|&d| colours[edge_of(d)]).collect();
            in_cell.dedup();
            if in_cell.len() != 2 {
                return Err(format!("a cell at vertex {v} is monochromatic"));
            }
        }
    }
    // Each colour class must fall apart into vertex-disjoint o-cycles.
    for &c in colours.iter().collect::<BTreeSet<_>>() {
        for v in 0..g.vertex_count() {
            let ds: Vec<Dart> = g.darts_at(v).iter().copied().filter(|&d| colours[edge_of(d)] == c).collect();
            match ds.len() {
                0 => {}
                2 if cell[ds[0]] != cell[ds[1]] => {}
                n => return Err(format!("colour {c} meets vertex {v} in {n} darts not forming an o-transition")),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn fig7a() -> (Graph, OrientationAssignment) {
        (build_graph(&[(0, 0), (0, 0)], Some(&[vec![0, 1, 2, 3]])).unwrap(), OrientationAssignment::zeros(1))
    }

    #[test]
    fn double_loop_has_two_loop_cycles_and_one_decomposition() {
        let (g, s) = fig7a();
        let cycles = enumerate_o_cycles(&g, &s).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 1));
        let decs = decompositions_of(&g, &cycles);
        assert_eq!(decs.len(), 1);
        assert_eq!(min_colours(&cycles, &decs[0]).0, 2);
        assert_eq!(chi_o(&g, &s).unwrap().0, 2);
    }

    #[test]
    fn step_options_are_the_other_cell() {
        let (g, s) = fig7a();
        // Cells are {1,2} and {3,0}; arriving along dart 0 lands on dart 1.
        let mut opts = step_options(&g, &s, 0).unwrap();
        opts.sort();
        assert_eq!(opts, vec![0, 3]);
    }

    #[test]
    fn four_parallel_edges_colour_with_two_for_every_orientation() {
        let g = build_graph(&[(0, 1); 4], Some(&[vec![0, 2, 4, 6], vec![7, 5, 3, 1]])).unwrap();
        for s in crate::orientation::enumerate_assignments(&g) {
            assert_eq!(chi_o(&g, &s).unwrap().0, 2);
        }
    }

    #[test]
    fn monochrome_colouring_is_rejected() {
        let g = build_graph(&[(0, 1); 4], Some(&[vec![0, 2, 4, 6], vec![7, 5, 3, 1]])).unwrap();
        let s = OrientationAssignment::zeros(2);
        assert!(!validate_o_colouring(&g, &s, &[0, 0, 0, 0]));
    }

    #[test]
    fn chromatic_number_of_small_graphs() {
        let k4 = vec![
            vec![false, true, true, true],
            vec![true, false, true, true],
            vec![true, true, false, true],
            vec![true, true, true, false],
        ];
        assert_eq!(chromatic(&k4).0, 4);
        let c5: Vec<Vec<bool>> =
            (0..5).map(|i| (0..5).map(|j| (i + 1) % 5 == j || (j + 1) % 5 == i).collect()).collect();
        assert_eq!(chromatic(&c5).0, 3);
    }

    #[test]
    fn densify_orders_by_first_use() {
        assert_eq!(densify(&[7, 3, 7, 9]), vec![0, 1, 0, 2]);
    }
}

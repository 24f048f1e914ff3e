//! Surgery on oriented 4-regular graphs and the passage to and from cubic
//! graphs by expanding each vertex into an edge.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{edge_of, twin, Dart, Graph};
use crate::ocycle::{check_o_colouring, OColouring};
use crate::orientation::{cut_vertex_sides, orientation_index, OrientationAssignment};
use crate::sketch::{Frozen, Sketch};

/// Result of a surgery, related back to the graph it came from.
#[derive(Clone, Debug)]
pub struct Piece {
    pub graph: Graph,
    pub sigma: OrientationAssignment,
    /// New id of each source vertex that survived.
    pub vertex: Vec<Option<usize>>,
    /// Source edges fused into each new edge, in path order.
    pub origin: Vec<Vec<usize>>,
    /// Source edges of closed curves that lost all their vertices.
    pub circles: Vec<Vec<usize>>,
}

impl Piece {
    /// Carries an edge colouring of the piece back to the source edges.
    /// Source edges that did not survive stay `None`.
    pub fn pull_back(&self, colours: &[usize], source_edges: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; source_edges];
        for (e, src) in self.origin.iter().enumerate() {
            for &s in src {
                if s < source_edges {
                    out[s] = Some(colours[e]);
                }
            }
        }
        out
    }
}

/// Orientation indices after a surgery. `cells` lists, per sketch vertex,
/// one cell of its intended partition by sketch half-edge ids.
fn carry(f: &Frozen, cells: &[(usize, [usize; 2])]) -> Result<OrientationAssignment> {
    let n = f.graph.vertex_count();
    let mut choice = vec![None; n];
    for &(s, [a, b]) in cells {
        let Some(v) = f.vertex.get(s).copied().flatten() else {
            continue;
        };
        let da = f.dart(a).ok_or_else(|| Error::Precondition(format!("half-edge {a} vanished")))?;
        let db = f.dart(b).ok_or_else(|| Error::Precondition(format!("half-edge {b} vanished")))?;
        let idx = orientation_index(&f.graph, v, [da, db])
            .ok_or_else(|| Error::Precondition(format!("orientation at vertex {v} is not admissible after surgery")))?;
        choice[v] = Some(idx);
    }
    let choice = choice
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::Precondition(format!("vertex {v} received no orientation"))))
        .collect::<Result<Vec<u8>>>()?;
    Ok(OrientationAssignment::new(choice))
}

/// One cell per vertex of `g`, shifted into sketch numbering.
fn cells_of(
    g: &Graph,
    sigma: &OrientationAssignment,
    vshift: usize,
    dshift: usize,
) -> Result<Vec<(usize, [usize; 2])>> {
    (0..g.vertex_count())
        .map(|v| {
            let o = sigma.orientation(g, v)?;
            Ok((v + vshift, [o.cells[0][0] + dshift, o.cells[0][1] + dshift]))
        })
        .collect()
}

fn piece(f: Frozen, sigma: OrientationAssignment) -> Piece {
    Piece { graph: f.graph, sigma, vertex: f.vertex, origin: f.origin, circles: f.circles }
}

/// The pairs of darts at `v` that smoothing splices together.
pub fn smoothing_pairs(g: &Graph, sigma: &OrientationAssignment, v: usize) -> Result<[[Dart; 2]; 2]> {
    let r = g.darts_at(v);
    let o = sigma.orientation(g, v)?;
    // Rotation-adjacent darts lying in different cells.
    let across = |i: usize| o.cell_of(r[i]) != o.cell_of(r[(i + 1) % 4]);
    Ok(if across(1) { [[r[1], r[2]], [r[3], r[0]]] } else { [[r[0], r[1]], [r[2], r[3]]] })
}

/// Removes `v`, splicing each dart to its rotation-neighbour in the other
/// cell. A loop-anchor loses its loop and its two other edges merge.
pub fn smooth(g: &Graph, sigma: &OrientationAssignment, v: usize) -> Result<Piece> {
    if !g.is_embedded() {
        return Err(Error::Mode);
    }
    let loops = g.loops_at(v);
    if loops == 2 {
        return Err(Error::DoubleLoop(v));
    }
    let mut s = Sketch::from_graph(g);
    if loops == 1 {
        let through: Vec<Dart> = g.darts_at(v).iter().copied().filter(|&d| g.head(d) != v).collect();
        let lp = g.darts_at(v).iter().copied().find(|&d| g.head(d) == v).expect("one loop");
        s.delete_edge(edge_of(lp));
        s.splice(through[0], through[1]);
    } else {
        for [x, y] in smoothing_pairs(g, sigma, v)? {
            s.splice(x, y);
        }
    }
    s.delete_vertex(v);
    let f = s.freeze(4)?;
    let cells: Vec<_> = cells_of(g, sigma, 0, 0)?.into_iter().filter(|&(u, _)| u != v).collect();
    let sigma = carry(&f, &cells)?;
    Ok(piece(f, sigma))
}

/// Edge-level connected sum: `e` and `f` are removed and their ends cross
/// joined. Without `crossed`, the first ends of `e` and `f` are joined and
/// the second ends likewise; with it, first to second.
pub fn connect_sum_edge(g1: &Graph, e: usize, g2: &Graph, f: usize, crossed: bool) -> Result<Graph> {
    Ok(connect_sum_edge_raw(g1, e, g2, f, crossed)?.graph)
}

fn connect_sum_edge_raw(g1: &Graph, e: usize, g2: &Graph, f: usize, crossed: bool) -> Result<Frozen> {
    let dh = g1.dart_count();
    let mut s = Sketch::union(g1, g2, g1.edge_count());
    let (a2, b2) = if crossed { (2 * f + 1, 2 * f) } else { (2 * f, 2 * f + 1) };
    s.join(2 * e, a2 + dh, vec![e, g1.edge_count() + f]);
    s.join(2 * e + 1, b2 + dh, vec![e, g1.edge_count() + f]);
    s.freeze(4)
}

/// Connected sum carrying both orientations along.
pub fn connect_sum_edge_oriented(
    g1: &Graph,
    s1: &OrientationAssignment,
    e: usize,
    g2: &Graph,
    s2: &OrientationAssignment,
    f: usize,
    crossed: bool,
) -> Result<Piece> {
    let fr = connect_sum_edge_raw(g1, e, g2, f, crossed)?;
    let mut cells = cells_of(g1, s1, 0, 0)?;
    cells.extend(cells_of(g2, s2, g1.vertex_count(), g1.dart_count())?);
    let sigma = carry(&fr, &cells)?;
    Ok(piece(fr, sigma))
}

/// Vertex-level connected sum: `e1` and `e2` are cut and their four ends
/// meet at a new vertex whose rotation lists the ends of `e1` then those of
/// `e2`. A transverse sum pairs one end from each side in every cell.
/// Returns the piece and the new vertex.
pub fn connect_sum_vertex(
    g1: &Graph,
    s1: &OrientationAssignment,
    e1: usize,
    g2: &Graph,
    s2: &OrientationAssignment,
    e2: usize,
    transverse: bool,
) -> Result<(Piece, usize)> {
    let dh = g1.dart_count();
    let mut s = Sketch::union(g1, g2, g1.edge_count());
    let w = s.add_vertex();
    let mut ends = Vec::new();
    for h in [2 * e1, 2 * e1 + 1, 2 * e2 + dh, 2 * e2 + 1 + dh] {
        ends.push(2 * s.attach(h, w) + 1);
    }
    let f = s.freeze(4)?;
    let mut cells = cells_of(g1, s1, 0, 0)?;
    cells.extend(cells_of(g2, s2, g1.vertex_count(), dh)?);
    // Rotation at w is (s1a, s1b, s2a, s2b).
    cells.push((w, if transverse { [ends[1], ends[2]] } else { [ends[0], ends[1]] }));
    let sigma = carry(&f, &cells)?;
    let v = f.vertex[w].expect("new vertex survives");
    Ok((piece(f, sigma), v))
}

/// Splits a graph along a 2-edge cut. Each side gets one new edge joining
/// its ends of `e` and `f`; the side holding the smaller vertex comes first.
pub fn split_two_edge_cut(g: &Graph, sigma: &OrientationAssignment, e: usize, f: usize) -> Result<(Piece, Piece)> {
    let (comp, count) = g.components_without(None, &[e, f]);
    if count != g.components().1 + 1 || e == f || g.is_loop(e) || g.is_loop(f) {
        return Err(Error::Precondition(format!("edges {e} and {f} do not form a 2-edge cut")));
    }
    let side1 = comp[g.tail(2 * e)];
    let side2 = comp[g.head(2 * e)];
    let near = |edge: usize, side: usize| {
        if comp[g.tail(2 * edge)] == side {
            2 * edge
        } else {
            2 * edge + 1
        }
    };
    let mut s = Sketch::from_graph(g);
    s.join(near(e, side1), near(f, side1), vec![e, f]);
    s.join(near(e, side2), near(f, side2), vec![e, f]);
    let fr = s.freeze(4)?;
    let whole = carry(&fr, &cells_of(g, sigma, 0, 0)?)?;
    let mut first = side1;
    let mut second = side2;
    let min1 = comp.iter().position(|&c| c == side1).expect("side is nonempty");
    let min2 = comp.iter().position(|&c| c == side2).expect("side is nonempty");
    if min2 < min1 {
        std::mem::swap(&mut first, &mut second);
    }
    let keep = |side: usize| -> Vec<bool> { (0..g.vertex_count()).map(|v| comp[v] == side).collect() };
    let translate = |keep_src: Vec<bool>| -> Result<Piece> {
        let keep_new: Vec<bool> = {
            let mut k = vec![false; fr.graph.vertex_count()];
            for (v, &kv) in keep_src.iter().enumerate() {
                if let (true, Some(n)) = (kv, fr.vertex[v]) {
                    k[n] = true;
                }
            }
            k
        };
        let sub = extract(&fr.graph, &keep_new)?;
        let sigma = OrientationAssignment::new(sub.vertex_src.iter().map(|&v| whole.choice[v]).collect());
        let vertex = fr.vertex.iter().map(|x| x.and_then(|n| sub.vertex_new[n])).collect();
        let origin = sub.edge_src.iter().map(|&e| fr.origin[e].clone()).collect();
        Ok(Piece { graph: sub.graph, sigma, vertex, origin, circles: Vec::new() })
    };
    Ok((translate(keep(first))?, translate(keep(second))?))
}

/// Splits at a cut-vertex `v`: each side of `g - v` gets one new edge
/// joining the two ends that met `v`. The side holding the smaller vertex
/// comes first.
pub fn split_cut_vertex(g: &Graph, sigma: &OrientationAssignment, v: usize) -> Result<(Piece, Piece)> {
    let comp = cut_vertex_sides(g, v).ok_or_else(|| Error::Precondition(format!("vertex {v} is not a cut-vertex")))?;
    let mut by_side: Vec<(usize, Vec<Dart>)> = Vec::new();
    for &d in g.darts_at(v) {
        let c = comp[g.head(d)];
        match by_side.iter_mut().find(|(s, _)| *s == c) {
            Some((_, ds)) => ds.push(d),
            None => by_side.push((c, vec![d])),
        }
    }
    if by_side.len() != 2 || by_side.iter().any(|(_, ds)| ds.len() != 2) {
        return Err(Error::Precondition(format!("vertex {v} does not split into two sides of two edges")));
    }
    let mut s = Sketch::from_graph(g);
    for (_, ds) in &by_side {
        s.join(twin(ds[0]), twin(ds[1]), vec![edge_of(ds[0]), edge_of(ds[1])]);
    }
    s.delete_vertex(v);
    let fr = s.freeze(4)?;
    let cells: Vec<_> = cells_of(g, sigma, 0, 0)?.into_iter().filter(|&(u, _)| u != v).collect();
    let whole = carry(&fr, &cells)?;
    let mut sides: Vec<usize> = by_side.iter().map(|(c, _)| *c).collect();
    let min = |c: usize| comp.iter().position(|&x| x == c).expect("side is nonempty");
    sides.sort_by_key(|&c| min(c));
    let mut out = Vec::new();
    for side in sides {
        let mut keep = vec![false; fr.graph.vertex_count()];
        for u in 0..g.vertex_count() {
            if u != v && comp[u] == side {
                keep[fr.vertex[u].expect("non-pivot vertices survive")] = true;
            }
        }
        let sub = extract(&fr.graph, &keep)?;
        let sg = OrientationAssignment::new(sub.vertex_src.iter().map(|&u| whole.choice[u]).collect());
        let vertex = fr.vertex.iter().map(|x| x.and_then(|n| sub.vertex_new[n])).collect();
        let origin = sub.edge_src.iter().map(|&e| fr.origin[e].clone()).collect();
        out.push(Piece { graph: sub.graph, sigma: sg, vertex, origin, circles: Vec::new() });
    }
    let second = out.pop().expect("two sides");
    let first = out.pop().expect("two sides");
    Ok((first, second))
}

/// Deletes the edges of an o-cycle and suppresses the vertices it passed
/// through, fusing the two edges left at each. Curves that lose every
/// vertex are reported in `circles`.
pub fn remove_cycle(g: &Graph, sigma: &OrientationAssignment, cycle: &[usize]) -> Result<Piece> {
    let mut lost = vec![0usize; g.vertex_count()];
    for &e in cycle {
        let (a, b) = g.endpoints(e);
        lost[a] += 1;
        lost[b] += 1;
    }
    if lost.iter().any(|&k| k != 0 && k != 2) {
        return Err(Error::Precondition("edge set does not pass each vertex at most once".into()));
    }
    let mut s = Sketch::from_graph(g);
    for &e in cycle {
        s.delete_edge(e);
    }
    for v in (0..g.vertex_count()).filter(|&v| lost[v] == 2) {
        s.suppress(v);
    }
    let f = s.freeze(4)?;
    let cells: Vec<_> = cells_of(g, sigma, 0, 0)?.into_iter().filter(|&(u, _)| lost[u] == 0).collect();
    let sigma = carry(&f, &cells)?;
    Ok(piece(f, sigma))
}

/// Shrinks the connected vertex set `set` to a single vertex, dropping the
/// edges inside it. The new vertex gets the orientation whose cell holds
/// the two darts in `cell`, which must both leave the set.
pub fn contract_set(g: &Graph, sigma: &OrientationAssignment, set: &[bool], cell: [Dart; 2]) -> Result<(Piece, usize)> {
    let root = set.iter().position(|&x| x).ok_or_else(|| Error::Precondition("empty vertex set".into()))?;
    let mut s = Sketch::from_graph(g);
    let mut reached = vec![false; g.vertex_count()];
    reached[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut tree = vec![false; g.edge_count()];
    while let Some(u) = queue.pop_front() {
        for &d in g.darts_at(u) {
            let w = g.head(d);
            if set[w] && !reached[w] {
                reached[w] = true;
                tree[edge_of(d)] = true;
                queue.push_back(w);
            }
        }
    }
    if (0..g.vertex_count()).any(|v| set[v] && !reached[v]) {
        return Err(Error::Precondition("vertex set is not connected".into()));
    }
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        if set[a] && set[b] && !tree[e] {
            s.delete_edge(e);
        }
    }
    let order: Vec<usize> = (0..g.edge_count()).filter(|&e| tree[e]).collect();
    for e in order {
        s.contract(e);
    }
    let survivor = (0..g.vertex_count()).find(|&v| set[v] && s.is_alive(v)).expect("one vertex of the set survives");
    let f = s.freeze(4)?;
    let mut cells: Vec<_> = cells_of(g, sigma, 0, 0)?.into_iter().filter(|&(u, _)| !set[u]).collect();
    cells.push((survivor, cell));
    let sigma = carry(&f, &cells)?;
    let v = f.vertex[survivor].expect("survivor is alive");
    Ok((piece(f, sigma), v))
}

/// A vertex-induced piece of a graph with no edges leaving it.
pub(crate) struct Extracted {
    pub graph: Graph,
    /// Source vertex of each new vertex.
    pub vertex_src: Vec<usize>,
    pub vertex_new: Vec<Option<usize>>,
    /// Source edge of each new edge.
    pub edge_src: Vec<usize>,
}

pub(crate) fn extract(g: &Graph, keep: &[bool]) -> Result<Extracted> {
    let mut vertex_new = vec![None; g.vertex_count()];
    let mut vertex_src = Vec::new();
    for v in 0..g.vertex_count() {
        if keep[v] {
            vertex_new[v] = Some(vertex_src.len());
            vertex_src.push(v);
        }
    }
    let mut dart_new = vec![usize::MAX; g.dart_count()];
    let mut edges = Vec::new();
    let mut edge_src = Vec::new();
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        match (keep[a], keep[b]) {
            (true, true) => {
                dart_new[2 * e] = 2 * edges.len();
                dart_new[2 * e + 1] = 2 * edges.len() + 1;
                edges.push((vertex_new[a].unwrap(), vertex_new[b].unwrap()));
                edge_src.push(e);
            }
            (false, false) => {}
            _ => return Err(Error::Precondition(format!("edge {e} leaves the extracted piece"))),
        }
    }
    let rotations: Vec<Vec<Dart>> =
        vertex_src.iter().map(|&v| g.darts_at(v).iter().map(|&d| dart_new[d]).collect()).collect();
    let graph = Graph::new(g.degree(), vertex_src.len(), &edges, g.is_embedded().then_some(rotations.as_slice()))?;
    Ok(Extracted { graph, vertex_src, vertex_new, edge_src })
}

/// Inverse of smoothing: a new vertex is placed inside the face holding
/// darts `x` and `y`, cutting both of their edges.
pub fn unsmooth(g: &Graph, x: Dart, y: Dart) -> Result<Graph> {
    if edge_of(x) == edge_of(y) {
        return Err(Error::Precondition("darts must lie on different edges".into()));
    }
    let faces = g.faces()?;
    if !faces.iter().any(|f| f.contains(&x) && f.contains(&y)) {
        return Err(Error::Precondition(format!("darts {x} and {y} do not share a face")));
    }
    let mut s = Sketch::from_graph(g);
    let w = s.add_vertex();
    // Ends toward head(x), tail(x), head(y), tail(y): the rotation that
    // splits the face between the two cut edges.
    for h in [twin(x), x, twin(y), y] {
        s.attach(h, w);
    }
    Ok(s.freeze(4)?.graph)
}

/// Cuts the edge of `d` with a new vertex carrying a loop. The loop goes on
/// the left of `d` unless `right` is set.
pub fn add_loop(g: &Graph, d: Dart, right: bool) -> Result<Graph> {
    let mut s = Sketch::from_graph(g);
    let w = s.add_vertex();
    s.attach(d, w);
    if right {
        s.attach(twin(d), w);
        s.add_edge(w, None, w, None);
    } else {
        s.add_edge(w, None, w, None);
        s.attach(twin(d), w);
    }
    Ok(s.freeze(4)?.graph)
}

/// A 3-regular graph in the same dart representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph(pub Graph);

impl CubicGraph {
    pub fn new(n: usize, edges: &[(usize, usize)], rotations: Option<&[Vec<Dart>]>) -> Result<CubicGraph> {
        Ok(CubicGraph(Graph::new(3, n, edges, rotations)?))
    }

    pub fn graph(&self) -> &Graph {
        &self.0
    }

    /// Edges whose removal disconnects their component.
    pub fn cut_edges(&self) -> Vec<usize> {
        let g = &self.0;
        let base = g.components().1;
        (0..g.edge_count()).filter(|&e| !g.is_loop(e) && g.components_without(None, &[e]).1 > base).collect()
    }
}

/// Expands every vertex `v` into an edge `x y` with `x = 2v` holding one
/// cell and `y = 2v + 1` the other. The new edge of `v` gets id `E + v`.
/// Returns the cubic graph and the new edges, which form a 1-factor.
pub fn tait_expand(g: &Graph, sigma: &OrientationAssignment) -> Result<(CubicGraph, Vec<usize>)> {
    let n = g.vertex_count();
    let m = g.edge_count();
    if let Some(v) = (0..n).find(|&v| g.loops_at(v) > 0) {
        return Err(Error::LoopAnchor(v));
    }
    let mut end = vec![0usize; g.dart_count()];
    let mut rot = vec![Vec::new(); 2 * n];
    for v in 0..n {
        let o = sigma.orientation(g, v)?;
        let new = m + v;
        let r = g.darts_at(v);
        // Walk the rotation from the first dart of a cell so that each
        // cell appears contiguously.
        let start = (0..4).find(|&i| o.cell_of(r[i]) == o.cell_of(r[(i + 1) % 4])).expect("cells are contiguous");
        let ordered: Vec<Dart> = (0..4).map(|k| r[(start + k) % 4]).collect();
        if !g.is_embedded() {
            // Abstract graphs: any pairing, no rotation to respect.
            for (i, cell) in o.cells.iter().enumerate() {
                for &d in cell {
                    end[d] = 2 * v + i;
                }
            }
            rot[2 * v] = vec![o.cells[0][0], o.cells[0][1], 2 * new];
            rot[2 * v + 1] = vec![o.cells[1][0], o.cells[1][1], 2 * new + 1];
            continue;
        }
        for (k, &d) in ordered.iter().enumerate() {
            end[d] = 2 * v + k / 2;
        }
        rot[2 * v] = vec![ordered[0], ordered[1], 2 * new];
        rot[2 * v + 1] = vec![ordered[2], ordered[3], 2 * new + 1];
    }
    let mut edges: Vec<(usize, usize)> = (0..m).map(|e| (end[2 * e], end[2 * e + 1])).collect();
    edges.extend((0..n).map(|v| (2 * v, 2 * v + 1)));
    let h = CubicGraph::new(2 * n, &edges, g.is_embedded().then_some(rot.as_slice()))?;
    Ok((h, (m..m + n).collect()))
}

/// Contraction of a 1-factor, related back to the cubic graph.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    pub sigma: OrientationAssignment,
    /// Cubic edge behind each edge of the contracted graph.
    pub edge_src: Vec<usize>,
    /// Contracted vertex of each cubic vertex.
    pub vertex_of: Vec<usize>,
}

/// Checks that `f` is a perfect matching of `h`.
pub fn check_one_factor(h: &CubicGraph, f: &[usize]) -> Result<()> {
    let g = &h.0;
    let mut hit = vec![0usize; g.vertex_count()];
    let set: BTreeSet<usize> = f.iter().copied().collect();
    if set.len() != f.len() {
        return Err(Error::NotOneFactor("repeated edge".into()));
    }
    for &e in f {
        if e >= g.edge_count() {
            return Err(Error::NotOneFactor(format!("edge {e} does not exist")));
        }
        if g.is_loop(e) {
            return Err(Error::NotOneFactor(format!("edge {e} is a loop")));
        }
        let (a, b) = g.endpoints(e);
        hit[a] += 1;
        hit[b] += 1;
    }
    if let Some(v) = hit.iter().position(|&k| k != 1) {
        return Err(Error::NotOneFactor(format!("vertex {v} meets {} matching edges", hit[v])));
    }
    Ok(())
}

/// Contracts each edge of the 1-factor `f`; the two other edges at each of
/// its ends form a cell of the resulting vertex.
pub fn tait_contract(h: &CubicGraph, f: &[usize]) -> Result<Contraction> {
    check_one_factor(h, f)?;
    let g = &h.0;
    let mut s = Sketch::from_graph(g);
    let mut sorted = f.to_vec();
    sorted.sort_unstable();
    for &e in &sorted {
        s.contract(e);
    }
    let fr = s.freeze(4)?;
    let mut vertex_of = vec![0; g.vertex_count()];
    let mut cells = Vec::new();
    for &e in &sorted {
        let (x, y) = g.endpoints(e);
        let v = fr.vertex[x].expect("first end survives contraction");
        vertex_of[x] = v;
        vertex_of[y] = v;
        let cell: Vec<Dart> = g.darts_at(x).iter().copied().filter(|&d| edge_of(d) != e).collect();
        cells.push((x, [cell[0], cell[1]]));
    }
    let sigma = carry(&fr, &cells)?;
    let edge_src = fr.origin.iter().map(|o| o[0]).collect();
    Ok(Contraction { graph: fr.graph, sigma, edge_src, vertex_of })
}

/// Record of one digon reduction, enough to lift colourings back.
#[derive(Clone, Debug)]
pub struct DigonLift {
    /// Edge count of the graph before reduction.
    pub source_edges: usize,
    /// Source edge behind each edge of the reduced graph (the new edge maps
    /// to `usize::MAX`).
    pub edge_src: Vec<usize>,
    pub new_edge: usize,
    pub parallel: [usize; 2],
    pub outer: [usize; 2],
}

impl DigonLift {
    /// Lifts a proper 3-edge-colouring of the reduced graph.
    pub fn lift(&self, reduced: &[u8]) -> Vec<u8> {
        let mut out = vec![u8::MAX; self.source_edges];
        for (e, &src) in self.edge_src.iter().enumerate() {
            if src != usize::MAX {
                out[src] = reduced[e];
            }
        }
        let c = reduced[self.new_edge];
        out[self.outer[0]] = c;
        out[self.outer[1]] = c;
        let others: Vec<u8> = (0..3).filter(|&k| k != c).collect();
        out[self.parallel[0]] = others[0];
        out[self.parallel[1]] = others[1];
        out
    }
}

/// Replaces a digon (two vertices joined by the parallel edges `a` and `b`)
/// together with its two outer edges by a single edge.
pub fn reduce_digon(h: &CubicGraph, a: usize, b: usize) -> Result<(CubicGraph, DigonLift)> {
    let g = &h.0;
    let (x, y) = g.endpoints(a);
    let (p, q) = g.endpoints(b);
    if a == b || x == y || !((p, q) == (x, y) || (p, q) == (y, x)) {
        return Err(Error::Precondition(format!("edges {a} and {b} are not a digon")));
    }
    let outer_at = |v: usize| -> Result<Dart> {
        g.darts_at(v)
            .iter()
            .copied()
            .find(|&d| edge_of(d) != a && edge_of(d) != b)
            .ok_or_else(|| Error::Precondition("digon has no outer edge".into()))
    };
    let (ox, oy) = (outer_at(x)?, outer_at(y)?);
    if edge_of(ox) == edge_of(oy) {
        return Err(Error::Precondition("the two-vertex cubic graph has no smaller reduction".into()));
    }
    let mut s = Sketch::from_graph(g);
    let new = s.bridge(twin(ox), twin(oy), Vec::new());
    s.delete_vertex(x);
    s.delete_vertex(y);
    let fr = s.freeze(3)?;
    let new_edge = fr.dart(2 * new).map(edge_of).expect("new edge survives");
    let edge_src = fr.origin.iter().map(|o| o.first().copied().unwrap_or(usize::MAX)).collect();
    let lift = DigonLift {
        source_edges: g.edge_count(),
        edge_src,
        new_edge,
        parallel: [a, b],
        outer: [edge_of(ox), edge_of(oy)],
    };
    Ok((CubicGraph(fr.graph), lift))
}

/// Every perfect matching, each as ascending edge ids, in lexicographic order.
pub fn perfect_matchings(h: &CubicGraph) -> Vec<Vec<usize>> {
    let g = &h.0;
    let mut out = Vec::new();
    let mut used = vec![false; g.vertex_count()];
    let mut chosen = Vec::new();
    match_from(g, &mut used, &mut chosen, &mut out);
    for m in &mut out {
        m.sort_unstable();
    }
    out.sort();
    out
}

fn match_from(g: &Graph, used: &mut [bool], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let Some(v) = used.iter().position(|&u| !u) else {
        out.push(chosen.clone());
        return;
    };
    used[v] = true;
    for &d in g.darts_at(v) {
        let w = g.head(d);
        if w == v || used[w] {
            continue;
        }
        used[w] = true;
        chosen.push(edge_of(d));
        match_from(g, used, chosen, out);
        chosen.pop();
        used[w] = false;
    }
    used[v] = false;
}

/// Every proper 3-edge-colouring, in lexicographic order of colour vectors.
pub fn three_edge_colourings(h: &CubicGraph) -> Vec<Vec<u8>> {
    let g = &h.0;
    let mut out = Vec::new();
    if (0..g.edge_count()).any(|e| g.is_loop(e)) {
        return out;
    }
    let mut colour = vec![u8::MAX; g.edge_count()];
    colour_edges(g, 0, &mut colour, &mut out, usize::MAX);
    out
}

/// True when some proper 3-edge-colouring exists.
pub fn is_three_edge_colourable(h: &CubicGraph) -> bool {
    let g = &h.0;
    if (0..g.edge_count()).any(|e| g.is_loop(e)) {
        return false;
    }
    let mut colour = vec![u8::MAX; g.edge_count()];
    let mut out = Vec::new();
    colour_edges(g, 0, &mut colour, &mut out, 1);
    !out.is_empty()
}

fn colour_edges(g: &Graph, e: usize, colour: &mut [u8], out: &mut Vec<Vec<u8>>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    if e == g.edge_count() {
        out.push(colour.to_vec());
        return;
    }
    let (a, b) = g.endpoints(e);
    for c in 0..3u8 {
        let clash = [a, b].iter().any(|&v| g.darts_at(v).iter().any(|&d| edge_of(d) != e && colour[edge_of(d)] == c));
        if clash {
            continue;
        }
        colour[e] = c;
        colour_edges(g, e + 1, colour, out, limit);
        colour[e] = u8::MAX;
    }
}

/// True when the colouring is proper with colours below 3.
pub fn is_proper_edge_colouring(h: &CubicGraph, colour: &[u8]) -> bool {
    let g = &h.0;
    colour.len() == g.edge_count()
        && colour.iter().all(|&c| c < 3)
        && (0..g.vertex_count()).all(|v| {
            let mut cs: Vec<u8> = g.darts_at(v).iter().map(|&d| colour[edge_of(d)]).collect();
            cs.sort_unstable();
            cs.dedup();
            cs.len() == 3
        })
}

/// Contracts `f` and keeps the colours of the surviving edges, which then
/// form an o-colouring of the contracted graph.
pub fn lift_to_o_colouring(h: &CubicGraph, f: &[usize], colour: &[u8]) -> Result<(Contraction, OColouring)> {
    if !is_proper_edge_colouring(h, colour) {
        return Err(Error::Validation("not a proper 3-edge-colouring".into()));
    }
    let c = tait_contract(h, f)?;
    let edge_colours: Vec<usize> = c.edge_src.iter().map(|&e| colour[e] as usize).collect();
    let oc = OColouring::from_edge_colours(&c.graph, &c.sigma, &edge_colours)?;
    Ok((c, oc))
}

/// Pushes an o-colouring with colours in {0,1,2} of the contraction of `f`
/// back to `h`: each matching edge takes the colour missing at its vertex.
pub fn push_to_edge_colouring(h: &CubicGraph, f: &[usize], colours: &[usize]) -> Result<Vec<u8>> {
    let c = tait_contract(h, f)?;
    check_o_colouring(&c.graph, &c.sigma, colours).map_err(Error::Validation)?;
    if colours.iter().any(|&k| k > 2) {
        return Err(Error::Validation("o-colouring uses a colour outside {0, 1, 2}".into()));
    }
    let g = &h.0;
    let mut out = vec![u8::MAX; g.edge_count()];
    for (ge, &he) in c.edge_src.iter().enumerate() {
        out[he] = colours[ge] as u8;
    }
    for &e in f {
        let v = c.vertex_of[g.endpoints(e).0];
        let present: Vec<usize> = c.graph.darts_at(v).iter().map(|&d| colours[edge_of(d)]).collect();
        let missing = (0..3).find(|k| !present.contains(k)).expect("two colours meet at each vertex");
        out[e] = missing as u8;
    }
    if !is_proper_edge_colouring(h, &out) {
        return Err(Error::Validation("pushed colouring is not proper".into()));
    }
    Ok(out)
}

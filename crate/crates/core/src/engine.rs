//! Constructive o-colouring. The graph is reduced to smaller ones (split
//! along 2-edge cuts and cut-vertices, smoothed at a vertex, or stripped of
//! one o-cycle), the pieces are coloured recursively, and the colourings
//! are merged back. Every merge is checked; a merge that does not produce
//! an o-colouring hands the graph to exhaustive search instead, and the
//! trace records it.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{edge_of, twin, Dart, Graph, SeparationKind};
use crate::ocycle::{check_o_colouring, chi_o, first_o_colouring, OColouring};
use crate::orientation::{is_vogwoc, OrientationAssignment};
use crate::transforms::{
    contract_set, extract, remove_cycle, smooth, smoothing_pairs, split_cut_vertex, split_two_edge_cut, Piece,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Base,
    TwoEdgeCut,
    CutVertex,
    LoopAnchor,
    Case1Flype,
    Case2I,
    Case2II,
    Case2III,
    Case3Chain,
    FallbackExhaustive,
}

impl Tag {
    pub const ALL: [Tag; 10] = [
        Tag::Base,
        Tag::TwoEdgeCut,
        Tag::CutVertex,
        Tag::LoopAnchor,
        Tag::Case1Flype,
        Tag::Case2I,
        Tag::Case2II,
        Tag::Case2III,
        Tag::Case3Chain,
        Tag::FallbackExhaustive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Base => "base",
            Tag::TwoEdgeCut => "two_edge_cut",
            Tag::CutVertex => "cut_vertex",
            Tag::LoopAnchor => "loop_anchor",
            Tag::Case1Flype => "case1_flype",
            Tag::Case2I => "case2_i",
            Tag::Case2II => "case2_ii",
            Tag::Case2III => "case2_iii",
            Tag::Case3Chain => "case3_chain",
            Tag::FallbackExhaustive => "fallback_exhaustive",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reduction. Children follow their parent with a larger depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub depth: usize,
    pub tag: Tag,
    /// Vertex, edges or cycle the step reduced on, in input numbering of
    /// the graph at that depth.
    pub pivot: String,
    /// Distinct colours in the colouring this step returned.
    pub palette: usize,
    /// Set when the step needed a colour its pieces did not use.
    pub new_colour: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EngineTrace {
    pub steps: Vec<Step>,
}

impl EngineTrace {
    pub fn count(&self, tag: Tag) -> usize {
        self.steps.iter().filter(|s| s.tag == tag).count()
    }

    pub fn fallbacks(&self) -> usize {
        self.count(Tag::FallbackExhaustive)
    }

    pub fn new_colour_events(&self) -> usize {
        self.steps.iter().filter(|s| s.new_colour).count()
    }

    pub fn tags(&self) -> Vec<Tag> {
        self.steps.iter().map(|s| s.tag).collect()
    }
}

/// One line per step: indentation by depth, then tag, pivot and palette.
impl fmt::Display for EngineTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{:indent$}{} {} palette={}", "", s.tag, s.pivot, s.palette, indent = 2 * s.depth)?;
            if s.new_colour {
                f.write_str(" new_colour")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A vertex `vertex` with two edges into each of two sides, plus two more
/// edges `top` and `bottom` that are the only other links between the sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub vertex: usize,
    pub top: usize,
    pub bottom: usize,
    /// 1 or 2 per vertex, 0 for `vertex`. Side 1 holds the smallest vertex.
    pub side: Vec<u8>,
}

impl Frame {
    /// The two darts at the frame vertex leading into `side`.
    pub fn darts_into(&self, g: &Graph, side: u8) -> Vec<Dart> {
        g.darts_at(self.vertex).iter().copied().filter(|&d| self.side[g.head(d)] == side).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseKind {
    /// Each cell at the frame vertex stays within one side.
    Case1(Frame),
    /// Each cell at the frame vertex has one dart into each side.
    Case2(Frame),
    Case3,
}

/// Looks for a frame whose cells stay on their sides, then for one whose
/// cells straddle; vertices and edge pairs are tried in ascending order.
pub fn detect_case(g: &Graph, sigma: &OrientationAssignment) -> Result<CaseKind> {
    let frames = frames(g)?;
    for f in &frames {
        let o = sigma.orientation(g, f.vertex)?;
        if o.cells.iter().all(|p| f.side[g.head(p[0])] == f.side[g.head(p[1])]) {
            return Ok(CaseKind::Case1(f.clone()));
        }
    }
    for f in &frames {
        let o = sigma.orientation(g, f.vertex)?;
        if o.cells.iter().all(|p| f.side[g.head(p[0])] != f.side[g.head(p[1])]) {
            return Ok(CaseKind::Case2(f.clone()));
        }
    }
    Ok(CaseKind::Case3)
}

fn frames(g: &Graph) -> Result<Vec<Frame>> {
    if !g.is_embedded() {
        return Err(Error::Mode);
    }
    let mut out = Vec::new();
    let m = g.edge_count();
    for v in 0..g.vertex_count() {
        if g.loops_at(v) > 0 {
            continue;
        }
        let touches = |e: usize| {
            let (a, b) = g.endpoints(e);
            a == v || b == v
        };
        for t in 0..m {
            if touches(t) || g.is_loop(t) {
                continue;
            }
            for b in t + 1..m {
                if touches(b) || g.is_loop(b) {
                    continue;
                }
                let (comp, count) = g.components_without(Some(v), &[t, b]);
                if count != 2 {
                    continue;
                }
                let crosses = |e: usize| {
                    let (x, y) = g.endpoints(e);
                    comp[x] != comp[y]
                };
                let into = |c: usize| g.darts_at(v).iter().filter(|&&d| comp[g.head(d)] == c).count();
                if !crosses(t) || !crosses(b) || into(0) != 2 || into(1) != 2 {
                    continue;
                }
                let side = comp.iter().map(|&c| if c == usize::MAX { 0 } else { c as u8 + 1 }).collect();
                out.push(Frame { vertex: v, top: t, bottom: b, side });
            }
        }
    }
    Ok(out)
}

/// O-colours `(g, sigma)`, which must be connected with every cut-vertex
/// and loop-anchor oriented transversely. The colouring is validated
/// before it is returned.
pub fn o_colour(g: &Graph, sigma: &OrientationAssignment) -> Result<(OColouring, EngineTrace)> {
    if !g.is_embedded() {
        return Err(Error::Mode);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !is_vogwoc(g, sigma)? {
        return Err(Error::Precondition("a cut-vertex or loop-anchor is oriented nontransversely".into()));
    }
    let mut solver = Solver::default();
    let colours = solver.solve(g, sigma, 0)?;
    let colouring = OColouring::from_edge_colours(g, sigma, &colours)?;
    Ok((colouring, EngineTrace { steps: solver.steps }))
}

#[derive(Default)]
struct Solver {
    steps: Vec<Step>,
}

impl Solver {
    /// Edge colours for a VOGWOC that may be disconnected or empty.
    fn solve(&mut self, g: &Graph, sigma: &OrientationAssignment, depth: usize) -> Result<Vec<usize>> {
        if g.vertex_count() == 0 {
            return Ok(Vec::new());
        }
        let (comp, count) = g.components();
        if count > 1 {
            let mut out = vec![0; g.edge_count()];
            for c in 0..count {
                let keep: Vec<bool> = comp.iter().map(|&x| x == c).collect();
                let sub = extract(g, &keep)?;
                let s = OrientationAssignment::new(sub.vertex_src.iter().map(|&v| sigma.choice[v]).collect());
                let cols = self.solve(&sub.graph, &s, depth)?;
                for (e, &src) in sub.edge_src.iter().enumerate() {
                    out[src] = cols[e];
                }
            }
            return Ok(out);
        }
        if !is_vogwoc(g, sigma)? {
            return Err(Error::Precondition("piece has a nontransverse cut-vertex or loop-anchor".into()));
        }
        let mark = self.steps.len();
        self.push(depth, Tag::Base, String::new());
        match self.reduce(g, sigma, depth, mark) {
            Ok(colours) => Ok(colours),
            Err(err) => {
                let after = self.steps[mark].tag;
                self.steps.truncate(mark);
                self.push(depth, Tag::FallbackExhaustive, format!("after={after} reason={}", short(&err)));
                let c = first_o_colouring(g, sigma)?.ok_or(Error::NotOColourable)?;
                let colours = c.edge_colours(g);
                self.finish(mark, &colours, 0);
                Ok(colours)
            }
        }
    }

    fn push(&mut self, depth: usize, tag: Tag, pivot: String) {
        self.steps.push(Step { depth, tag, pivot, palette: 0, new_colour: false });
    }

    fn label(&mut self, mark: usize, tag: Tag, pivot: String) {
        self.steps[mark].tag = tag;
        self.steps[mark].pivot = pivot;
    }

    fn finish(&mut self, mark: usize, colours: &[usize], before: usize) {
        let k = palette(colours);
        self.steps[mark].palette = k;
        self.steps[mark].new_colour = before > 0 && k > before;
    }

    fn reduce(&mut self, g: &Graph, sigma: &OrientationAssignment, depth: usize, mark: usize) -> Result<Vec<usize>> {
        let n = g.vertex_count();
        if n <= 2 {
            self.label(mark, Tag::Base, format!("n={n}"));
            let (_, c) = chi_o(g, sigma)?;
            let colours = c.edge_colours(g);
            self.finish(mark, &colours, 0);
            return Ok(colours);
        }
        let seps = g.find_separations()?;
        if let Some((e, f)) = seps.iter().find_map(|s| match s.kind {
            SeparationKind::TwoEdgeCut(e, f) => Some((e, f)),
            SeparationKind::CutVertex(_) => None,
        }) {
            self.label(mark, Tag::TwoEdgeCut, format!("e={e},f={f}"));
            let (p1, p2) = split_two_edge_cut(g, sigma, e, f)?;
            let c1 = self.child(&p1, n, depth)?;
            let c2 = self.child(&p2, n, depth)?;
            let before = palette(&c1).max(palette(&c2));
            let out = merge_two_edge_cut(g, &p1, &c1, &p2, &c2, (e, f))?;
            return self.accept(g, sigma, mark, out, before);
        }
        if let Some(v) = seps.iter().find_map(|s| match s.kind {
            SeparationKind::CutVertex(v) => Some(v),
            SeparationKind::TwoEdgeCut(..) => None,
        }) {
            self.label(mark, Tag::CutVertex, format!("v={v}"));
            let (p1, p2) = split_cut_vertex(g, sigma, v)?;
            let c1 = self.child(&p1, n, depth)?;
            let c2 = self.child(&p2, n, depth)?;
            let before = palette(&c1).max(palette(&c2));
            let out = merge_cut_vertex(g, &p1, &c1, &p2, &c2, v)?;
            return self.accept(g, sigma, mark, out, before);
        }
        if let Some(v) = (0..n).find(|&v| g.loops_at(v) == 1) {
            self.label(mark, Tag::LoopAnchor, format!("v={v}"));
            let p = smooth(g, sigma, v)?;
            let c = self.child(&p, n, depth)?;
            let before = palette(&c);
            let out = lift_loop_anchor(g, v, &p, &c)?;
            return self.accept(g, sigma, mark, out, before);
        }
        match detect_case(g, sigma)? {
            CaseKind::Case1(frame) => {
                self.label(mark, Tag::Case1Flype, frame_pivot(&frame));
                let (p1, p2) = flype_pieces(g, sigma, &frame)?;
                let c1 = self.child(&p1, n, depth)?;
                let c2 = self.child(&p2, n, depth)?;
                let before = palette(&c1).max(palette(&c2));
                let out = merge_flype(g, &frame, &p1, &c1, &p2, &c2)?;
                self.accept(g, sigma, mark, out, before)
            }
            CaseKind::Case2(frame) => {
                self.label(mark, Tag::Case2I, frame_pivot(&frame));
                let p = smooth(g, sigma, frame.vertex)?;
                let c = self.child(&p, n, depth)?;
                let before = palette(&c);
                let mut recurse = |h: &Graph, s: &OrientationAssignment| self.solve(h, s, depth + 1);
                let (out, sub) = case2_recolour(g, sigma, &frame, &p, &c, &mut recurse)?;
                self.steps[mark].tag = sub;
                self.accept(g, sigma, mark, out, before)
            }
            CaseKind::Case3 => self.case3(g, sigma, depth, mark),
        }
    }

    fn child(&mut self, p: &Piece, parent: usize, depth: usize) -> Result<Vec<usize>> {
        if p.graph.vertex_count() >= parent {
            return Err(Error::Pattern("reduction did not shrink the graph".into()));
        }
        self.solve(&p.graph, &p.sigma, depth + 1)
    }

    fn accept(
        &mut self,
        g: &Graph,
        sigma: &OrientationAssignment,
        mark: usize,
        colours: Vec<usize>,
        before: usize,
    ) -> Result<Vec<usize>> {
        check_o_colouring(g, sigma, &colours).map_err(Error::Pattern)?;
        self.finish(mark, &colours, before);
        Ok(colours)
    }

    /// Smooths a vertex, preferring vertices on triangular faces, and
    /// repairs the lifted colouring when the two spliced edges collide.
    fn case3(&mut self, g: &Graph, sigma: &OrientationAssignment, depth: usize, mark: usize) -> Result<Vec<usize>> {
        let n = g.vertex_count();
        let mut last = Error::Pattern("no vertex could be smoothed".into());
        for v in smoothing_order(g)? {
            self.label(mark, Tag::Case3Chain, format!("v={v}"));
            let restart = self.steps.len();
            let attempt = (|| -> Result<Vec<usize>> {
                let p = smooth(g, sigma, v)?;
                let c = self.child(&p, n, depth)?;
                let before = palette(&c);
                let mut recurse = |h: &Graph, s: &OrientationAssignment| self.solve(h, s, depth + 1);
                let (out, how) = chain_search(g, sigma, v, &p, &c, &mut recurse)?;
                self.steps[mark].pivot = format!("v={v} {how}");
                self.accept(g, sigma, mark, out, before)
            })();
            match attempt {
                Ok(out) => return Ok(out),
                Err(e) => {
                    self.steps.truncate(restart);
                    last = e;
                }
            }
        }
        Err(last)
    }
}

fn frame_pivot(f: &Frame) -> String {
    format!("v={},t={},b={}", f.vertex, f.top, f.bottom)
}

fn short(e: &Error) -> &'static str {
    match e {
        Error::Pattern(_) => "pattern",
        Error::Precondition(_) => "precondition",
        Error::DoubleLoop(_) => "double_loop",
        _ => "error",
    }
}

fn palette(colours: &[usize]) -> usize {
    colours.iter().collect::<BTreeSet<_>>().len()
}

/// Colours of a piece carried to the source edges.
fn lift(source: &Graph, p: &Piece, colours: &[usize]) -> Vec<Option<usize>> {
    p.pull_back(colours, source.edge_count())
}

fn complete(partial: Vec<Option<usize>>) -> Result<Vec<usize>> {
    partial
        .into_iter()
        .enumerate()
        .map(|(e, c)| c.ok_or_else(|| Error::Pattern(format!("edge {e} received no colour"))))
        .collect()
}

/// Relabels `colours` bijectively: each `(from, to)` pin is honoured, and
/// the remaining labels go first to unused members of `pool`, then to
/// fresh labels above everything seen.
fn relabel(colours: &[usize], pins: &[(usize, usize)], pool: &BTreeSet<usize>) -> Result<Vec<usize>> {
    let mut map = std::collections::BTreeMap::new();
    let mut taken = BTreeSet::new();
    for &(from, to) in pins {
        if map.insert(from, to).is_some_and(|old| old != to) || (!taken.insert(to) && map[&from] != to) {
            return Err(Error::Pattern("conflicting colour pins".into()));
        }
    }
    if taken.len() != map.len() {
        return Err(Error::Pattern("two colours pinned to one".into()));
    }
    let mut spare = pool.iter().copied().filter(|c| !taken.contains(c)).collect::<Vec<_>>().into_iter();
    let mut fresh = pool.iter().chain(colours.iter()).chain(taken.iter()).max().map_or(0, |m| m + 1);
    let labels: BTreeSet<usize> = colours.iter().copied().collect();
    for c in labels {
        if map.contains_key(&c) {
            continue;
        }
        let to = spare.next().unwrap_or_else(|| {
            fresh += 1;
            fresh - 1
        });
        map.insert(c, to);
    }
    Ok(colours.iter().map(|c| map[c]).collect())
}

/// Smallest label outside `avoid`, preferring labels already in `pool`.
fn pick(avoid: &BTreeSet<usize>, pool: &BTreeSet<usize>) -> usize {
    if let Some(&c) = pool.iter().find(|c| !avoid.contains(c)) {
        return c;
    }
    (0..).find(|c| !avoid.contains(c) && !pool.contains(c)).expect("labels are unbounded")
}

/// The edge of a piece whose origin contains source edge `e`.
fn image(p: &Piece, e: usize) -> Result<usize> {
    p.origin
        .iter()
        .position(|o| o.contains(&e))
        .ok_or_else(|| Error::Pattern(format!("source edge {e} vanished from the piece")))
}

/// Glues the colourings of the two sides of a 2-edge cut `{e, f}`, after
/// renaming the second side's colours so the replacement edges agree.
pub fn merge_two_edge_cut(
    source: &Graph,
    p1: &Piece,
    col1: &[usize],
    p2: &Piece,
    col2: &[usize],
    cut: (usize, usize),
) -> Result<Vec<usize>> {
    let (e, _) = cut;
    let a = col1[image(p1, e)?];
    let b = col2[image(p2, e)?];
    let pool: BTreeSet<usize> = col1.iter().copied().collect();
    let col2 = relabel(col2, &[(b, a)], &pool)?;
    let mut out = lift(source, p1, col1);
    for (x, c) in lift(source, p2, &col2).into_iter().enumerate() {
        if c.is_some() {
            out[x] = c;
        }
    }
    complete(out)
}

/// Glues the colourings of the two sides of a transversely oriented
/// cut-vertex `v`: the side-one edges at `v` keep their colour and the
/// side-two edges get a different colour already used on side one.
pub fn merge_cut_vertex(
    source: &Graph,
    p1: &Piece,
    col1: &[usize],
    p2: &Piece,
    col2: &[usize],
    v: usize,
) -> Result<Vec<usize>> {
    let at_v = source.darts_at(v);
    let e1 = at_v
        .iter()
        .map(|&d| edge_of(d))
        .find(|&e| image(p1, e).is_ok())
        .ok_or_else(|| Error::Pattern("first side has no edge at the cut-vertex".into()))?;
    let e2 = at_v
        .iter()
        .map(|&d| edge_of(d))
        .find(|&e| image(p2, e).is_ok())
        .ok_or_else(|| Error::Pattern("second side has no edge at the cut-vertex".into()))?;
    let c1 = col1[image(p1, e1)?];
    let pool: BTreeSet<usize> = col1.iter().copied().collect();
    let c2 = pick(&BTreeSet::from([c1]), &pool);
    let col2 = relabel(col2, &[(col2[image(p2, e2)?], c2)], &pool)?;
    let mut out = lift(source, p1, col1);
    for (x, c) in lift(source, p2, &col2).into_iter().enumerate() {
        if c.is_some() {
            out[x] = c;
        }
    }
    complete(out)
}

/// Lifts a colouring of the graph with loop-anchor `v` smoothed away: the
/// through edges share a colour and the loop takes another.
fn lift_loop_anchor(source: &Graph, v: usize, p: &Piece, col: &[usize]) -> Result<Vec<usize>> {
    let mut out = lift(source, p, col);
    let through = source.darts_at(v).iter().find(|&&d| source.head(d) != v).copied().expect("one through edge");
    let c = out[edge_of(through)].ok_or_else(|| Error::Pattern("through edge lost its colour".into()))?;
    let pool: BTreeSet<usize> = col.iter().copied().collect();
    let lp = source.darts_at(v).iter().find(|&&d| source.head(d) == v).copied().expect("one loop");
    out[edge_of(lp)] = Some(pick(&BTreeSet::from([c]), &pool));
    complete(out)
}

/// The two graphs of a flype frame: each keeps one side and shrinks the
/// frame vertex with the other side into a single vertex, whose cell pairs
/// the two edges of the kept side.
pub fn flype_pieces(g: &Graph, sigma: &OrientationAssignment, frame: &Frame) -> Result<(Piece, Piece)> {
    let mut out = Vec::new();
    for keep in [1u8, 2] {
        let set: Vec<bool> = frame.side.iter().map(|&s| s != keep).collect();
        let ds = frame.darts_into(g, keep);
        let (p, _) = contract_set(g, sigma, &set, [ds[0], ds[1]])?;
        out.push(p);
    }
    let second = out.pop().expect("two pieces");
    let first = out.pop().expect("two pieces");
    Ok((first, second))
}

/// Glues colourings of the two flype pieces: the second piece's colours
/// are renamed so the top and bottom edges agree with the first piece.
pub fn merge_flype(
    source: &Graph,
    frame: &Frame,
    p1: &Piece,
    col1: &[usize],
    p2: &Piece,
    col2: &[usize],
) -> Result<Vec<usize>> {
    let (t1, b1) = (col1[image(p1, frame.top)?], col1[image(p1, frame.bottom)?]);
    let (t2, b2) = (col2[image(p2, frame.top)?], col2[image(p2, frame.bottom)?]);
    if t1 == b1 || t2 == b2 {
        return Err(Error::Pattern("top and bottom edges share a colour".into()));
    }
    let pool: BTreeSet<usize> = col1.iter().copied().collect();
    let col2 = relabel(col2, &[(t2, t1), (b2, b1)], &pool)?;
    let mut out = lift(source, p1, col1);
    for (x, c) in lift(source, p2, &col2).into_iter().enumerate() {
        if out[x].is_none() {
            out[x] = c;
        }
    }
    complete(out)
}

/// Callback colouring a smaller graph.
pub type Recurse<'a> = dyn FnMut(&Graph, &OrientationAssignment) -> Result<Vec<usize>> + 'a;

/// Repairs a colouring of the graph with the frame vertex smoothed, so
/// that it lifts. Returns the colouring of `g` and which subcase applied.
pub fn case2_recolour(
    g: &Graph,
    sigma: &OrientationAssignment,
    frame: &Frame,
    smoothed: &Piece,
    colours: &[usize],
    recurse: &mut Recurse<'_>,
) -> Result<(Vec<usize>, Tag)> {
    let h = &smoothed.graph;
    let side1 = frame.darts_into(g, 1);
    let side2 = frame.darts_into(g, 2);
    let e1 = image(smoothed, edge_of(side1[0]))?;
    let e2 = image(smoothed, edge_of(side2[0]))?;
    let t = image(smoothed, frame.top)?;
    let b = image(smoothed, frame.bottom)?;
    let (c1, c2, c3) = (colours[e1], colours[e2], colours[t]);
    if colours[b] != c3 {
        return Err(Error::Pattern("top and bottom edges differ in colour".into()));
    }
    if c1 != c2 {
        return Ok((complete(lift(g, smoothed, colours))?, Tag::Case2I));
    }
    // Side of each vertex of the smoothed graph.
    let mut side = vec![0u8; h.vertex_count()];
    for (u, nv) in smoothed.vertex.iter().enumerate() {
        if let Some(nv) = nv {
            side[*nv] = frame.side[u];
        }
    }
    let pool: BTreeSet<usize> = colours.iter().copied().collect();
    if c2 != c3 {
        let c = pick(&BTreeSet::from([c2, c3]), &pool);
        let mut swapped = colours.to_vec();
        for e in 0..h.edge_count() {
            let (x, y) = h.endpoints(e);
            if side[x] == 2 && side[y] == 2 {
                swapped[e] = if colours[e] == c {
                    c2
                } else if colours[e] == c2 {
                    c
                } else {
                    colours[e]
                };
            }
        }
        return Ok((complete(lift(g, smoothed, &swapped))?, Tag::Case2II));
    }
    let oc = OColouring::from_edge_colours(h, &smoothed.sigma, colours)?;
    let cycle_of = |e: usize| oc.cycles.iter().position(|c| c.edges().contains(&e)).expect("every edge is covered");
    let o = cycle_of(t);
    for (s, f) in [(2u8, e2), (1u8, e1)] {
        if cycle_of(f) == o {
            continue;
        }
        let inside: Vec<usize> =
            (0..oc.cycles.len()).filter(|&i| i != o && oc.cycles[i].vertices().iter().all(|&x| side[x] == s)).collect();
        let mut forbid = vec![BTreeSet::new(); oc.cycles.len()];
        for &i in &inside {
            if oc.cycles[i].shares_vertex(&oc.cycles[o]) {
                forbid[i].insert(oc.colour[o]);
            }
        }
        forbid[cycle_of(f)].insert(c1);
        if let Some(new) = recolour_cycles(&oc, &inside, &forbid, &pool) {
            let mut out = colours.to_vec();
            for (k, c) in oc.cycles.iter().enumerate() {
                for e in c.edges() {
                    out[e] = new[k];
                }
            }
            return Ok((complete(lift(g, smoothed, &out))?, Tag::Case2III));
        }
    }
    // The cycle through the frame edges also carries both spliced edges:
    // take out another cycle on one side and colour what remains.
    for s in [2u8, 1] {
        for (i, c) in oc.cycles.iter().enumerate() {
            if i == o || c.vertices().len() < 2 || !c.vertices().iter().all(|&x| side[x] == s) {
                continue;
            }
            let edges: Vec<usize> = c.edges().iter().flat_map(|&e| smoothed.origin[e].iter().copied()).collect();
            if let Ok(out) = strip_cycle(g, sigma, &edges, recurse) {
                return Ok((out, Tag::Case2III));
            }
        }
    }
    Err(Error::Pattern("no cycle could be taken out on either side".into()))
}

/// Proper recolouring of the listed cycles (all others keep their colour)
/// honouring per-cycle forbidden colours. Labels come from `pool` first;
/// one fresh label is allowed when the pool is not enough.
fn recolour_cycles(
    oc: &OColouring,
    movable: &[usize],
    forbid: &[BTreeSet<usize>],
    pool: &BTreeSet<usize>,
) -> Option<Vec<usize>> {
    let fresh = pool.iter().max().map_or(0, |m| m + 1);
    for labels in [pool.iter().copied().collect::<Vec<_>>(), pool.iter().copied().chain([fresh]).collect()] {
        let mut colour = oc.colour.clone();
        if assign(oc, movable, 0, forbid, &labels, &mut colour) {
            return Some(colour);
        }
    }
    None
}

fn assign(
    oc: &OColouring,
    movable: &[usize],
    at: usize,
    forbid: &[BTreeSet<usize>],
    labels: &[usize],
    colour: &mut Vec<usize>,
) -> bool {
    let Some(&i) = movable.get(at) else {
        return true;
    };
    let fixed = |j: usize, colour: &[usize]| !movable[at..].contains(&j) && j != i && colour[j] != usize::MAX;
    for &c in labels {
        if forbid[i].contains(&c) {
            continue;
        }
        let clash = (0..oc.cycles.len())
            .any(|j| fixed(j, colour) && colour[j] == c && oc.cycles[i].shares_vertex(&oc.cycles[j]));
        if clash {
            continue;
        }
        let old = colour[i];
        colour[i] = c;
        if assign(oc, movable, at + 1, forbid, labels, colour) {
            return true;
        }
        colour[i] = old;
    }
    false
}

/// Removes the o-cycle with source edges `cycle`, colours the rest, and
/// puts the cycle back in a colour unused at its vertices.
fn strip_cycle(
    g: &Graph,
    sigma: &OrientationAssignment,
    cycle: &[usize],
    recurse: &mut Recurse<'_>,
) -> Result<Vec<usize>> {
    let q = remove_cycle(g, sigma, cycle)?;
    if q.graph.vertex_count() >= g.vertex_count() {
        return Err(Error::Pattern("cycle removal did not shrink the graph".into()));
    }
    if !is_vogwoc(&q.graph, &q.sigma)? {
        return Err(Error::Precondition("removal leaves a nontransverse cut-vertex or loop-anchor".into()));
    }
    let col = recurse(&q.graph, &q.sigma)?;
    let pool: BTreeSet<usize> = col.iter().copied().collect();
    let mut out = lift(g, &q, &col);
    let circle = pick(&BTreeSet::new(), &pool);
    for curve in &q.circles {
        for &e in curve {
            out[e] = Some(circle);
        }
    }
    let on: BTreeSet<usize> = cycle.iter().flat_map(|&e| [g.endpoints(e).0, g.endpoints(e).1]).collect();
    let mut avoid = BTreeSet::new();
    for &v in &on {
        for &d in g.darts_at(v) {
            if let Some(c) = out[edge_of(d)] {
                if !cycle.contains(&edge_of(d)) {
                    avoid.insert(c);
                }
            }
        }
    }
    let mut pool = pool;
    if !q.circles.is_empty() {
        pool.insert(circle);
    }
    let c = pick(&avoid, &pool);
    for &e in cycle {
        out[e] = Some(c);
    }
    complete(out)
}

/// Vertices on triangular faces first, then the others, each group ascending.
fn smoothing_order(g: &Graph) -> Result<Vec<usize>> {
    let mut on_triangle = vec![false; g.vertex_count()];
    for f in g.faces()? {
        if f.len() == 3 {
            for &d in &f {
                on_triangle[g.tail(d)] = true;
            }
        }
    }
    let mut order: Vec<usize> = (0..g.vertex_count()).filter(|&v| on_triangle[v]).collect();
    order.extend((0..g.vertex_count()).filter(|&v| !on_triangle[v]));
    Ok(order)
}

/// Lifts a colouring of `g` with `v` smoothed. When the two spliced edges
/// share a colour the colouring is repaired: a separate cycle is recoloured,
/// another cycle is taken out, or a cycle through `v` built from the two
/// halves of the shared cycle and one cycle meeting both is taken out.
/// Returns the colouring of `g` and a short description of the repair.
pub fn chain_search(
    g: &Graph,
    sigma: &OrientationAssignment,
    v: usize,
    smoothed: &Piece,
    colours: &[usize],
    recurse: &mut Recurse<'_>,
) -> Result<(Vec<usize>, String)> {
    let h = &smoothed.graph;
    let pairs = smoothing_pairs(g, sigma, v)?;
    let s1 = image(smoothed, edge_of(pairs[0][0]))?;
    let s2 = image(smoothed, edge_of(pairs[1][0]))?;
    if colours[s1] != colours[s2] {
        return Ok((complete(lift(g, smoothed, colours))?, "lift".into()));
    }
    let oc = OColouring::from_edge_colours(h, &smoothed.sigma, colours)?;
    let cycle_of = |e: usize| oc.cycles.iter().position(|c| c.edges().contains(&e)).expect("every edge is covered");
    let (k1, k2) = (cycle_of(s1), cycle_of(s2));
    let pool: BTreeSet<usize> = colours.iter().copied().collect();
    if k1 != k2 {
        let mut forbid = vec![BTreeSet::new(); oc.cycles.len()];
        forbid[k2].insert(colours[s1]);
        let new = recolour_cycles(&oc, &[k2], &forbid, &pool).expect("a fresh colour always fits");
        let mut out = colours.to_vec();
        for e in oc.cycles[k2].edges() {
            out[e] = new[k2];
        }
        return Ok((complete(lift(g, smoothed, &out))?, "recolour".into()));
    }
    let source_edges = |i: usize| -> Vec<usize> {
        oc.cycles[i].edges().iter().flat_map(|&e| smoothed.origin[e].iter().copied()).collect()
    };
    for i in 0..oc.cycles.len() {
        if i == k1 {
            continue;
        }
        if let Ok(out) = strip_cycle(g, sigma, &source_edges(i), recurse) {
            return Ok((out, format!("strip={i}")));
        }
    }
    // Split the shared cycle at v into two closed walks and search the
    // o-cycles through v that run along one walk, one other cycle and the
    // other walk, shortest first.
    let lifted = complete(lift(g, smoothed, colours))?;
    let cell = sigma.cells(g)?;
    let walks = halves(g, &cell, &lifted, v);
    let others: Vec<(usize, Vec<Dart>)> = (0..oc.cycles.len())
        .filter(|&i| i != k1)
        .filter_map(|i| source_darts(smoothed, oc.cycles[i].darts()).map(|ds| (i, ds)))
        .collect();
    for (first, third) in [(0usize, 1usize), (1, 0)] {
        for (i, middle) in &others {
            for cand in triples(g, &cell, v, &walks[first], middle, &walks[third]) {
                if let Ok(out) = strip_cycle(g, sigma, &cand, recurse) {
                    return Ok((out, format!("chain={i}")));
                }
            }
        }
    }
    Err(Error::Pattern("no removable o-cycle through the smoothed vertex".into()))
}

/// A piece cycle read in the source graph; every edge on it must be a
/// single surviving source edge.
fn source_darts(p: &Piece, darts: &[Dart]) -> Option<Vec<Dart>> {
    darts
        .iter()
        .map(|&d| match p.origin[edge_of(d)].as_slice() {
            [x] => Some(2 * x + (d & 1)),
            _ => None,
        })
        .collect()
}

/// The two closed walks through `v` made by the colour class of the
/// spliced edges once `v` is restored. Each starts at `v`.
fn halves(g: &Graph, cell: &[u8], colours: &[usize], v: usize) -> Vec<Vec<Dart>> {
    let c = colours[edge_of(g.darts_at(v)[0])];
    let mut used = vec![false; g.dart_count()];
    let mut out = Vec::new();
    for &start in g.darts_at(v) {
        if used[start] || colours[edge_of(start)] != c {
            continue;
        }
        let mut walk = vec![start];
        used[start] = true;
        let mut d = start;
        while g.head(d) != v {
            let arrive = twin(d);
            let next = g
                .darts_at(g.tail(arrive))
                .iter()
                .copied()
                .find(|&x| x != arrive && colours[edge_of(x)] == c && cell[x] != cell[arrive])
                .expect("colour class continues away from the smoothed vertex");
            walk.push(next);
            d = next;
        }
        used[twin(d)] = true;
        out.push(walk);
    }
    out
}

/// Source-edge sets of o-cycles through `v` formed by a prefix of `a`, a
/// stretch of `mid` in either direction, and a suffix of `b` (read
/// backwards or forwards), ordered by prefix length then stretch length.
fn triples(g: &Graph, cell: &[u8], v: usize, a: &[Dart], mid: &[Dart], b: &[Dart]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let m = mid.len();
    let mid_rev: Vec<Dart> = mid.iter().rev().map(|&d| twin(d)).collect();
    let b_rev: Vec<Dart> = b.iter().rev().map(|&d| twin(d)).collect();
    let turn_ok = |inn: Dart, out: Dart| cell[twin(inn)] != cell[out];
    for i in 1..a.len() {
        let p1 = &a[..i];
        let x = g.head(p1[i - 1]);
        for seq in [mid, mid_rev.as_slice()] {
            for start in 0..m {
                if g.tail(seq[start]) != x || !turn_ok(p1[i - 1], seq[start]) {
                    continue;
                }
                for j in 1..m {
                    let p2: Vec<Dart> = (0..j).map(|k| seq[(start + k) % m]).collect();
                    let y = g.head(p2[j - 1]);
                    for walk in [b, b_rev.as_slice()] {
                        let Some(pos) = walk.iter().position(|&w| g.tail(w) == y) else {
                            continue;
                        };
                        let p3 = &walk[pos..];
                        if !turn_ok(p2[j - 1], p3[0]) || !turn_ok(*p3.last().unwrap(), p1[0]) {
                            continue;
                        }
                        let darts: Vec<Dart> = p1.iter().chain(p2.iter()).chain(p3.iter()).copied().collect();
                        let mut seen = BTreeSet::new();
                        if darts.iter().all(|&d| seen.insert(g.tail(d))) && g.head(*darts.last().unwrap()) == v {
                            let mut es: Vec<usize> = darts.iter().map(|&d| edge_of(d)).collect();
                            es.sort_unstable();
                            if !out.contains(&es) {
                                out.push(es);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

//! Mutable rotation systems of mixed degree, used to carry out surgery
//! (smoothing, splitting, gluing, contraction) before freezing the result
//! back into a validated [`Graph`].
//!
//! Half-edge `h` belongs to edge `h / 2`. When an operation replaces a
//! half-edge by a new one sitting in the same rotation slot, the old id is
//! forwarded so later calls may keep using the ids of the source graph.

use std::collections::HashMap;

use crate::error::Result;
use crate::graph::{Dart, Graph};

const DETACHED: usize = usize::MAX;

#[derive(Clone, Debug)]
pub(crate) struct Sketch {
    tail: Vec<usize>,
    rot: Vec<Vec<usize>>,
    vertex_alive: Vec<bool>,
    origin: Vec<Vec<usize>>,
    forward: HashMap<usize, usize>,
    circles: Vec<Vec<usize>>,
    embedded: bool,
}

/// A frozen sketch plus bookkeeping that relates it to its source.
#[derive(Clone, Debug)]
pub(crate) struct Frozen {
    pub graph: Graph,
    /// Source edges represented by each new edge (empty for edges created from nothing).
    pub origin: Vec<Vec<usize>>,
    /// New vertex id for each sketch vertex that survived.
    pub vertex: Vec<Option<usize>>,
    /// Source-edge lists of closed curves that lost all their vertices.
    pub circles: Vec<Vec<usize>>,
    half_to_dart: Vec<Option<Dart>>,
    forward: HashMap<usize, usize>,
}

impl Frozen {
    /// Where a half-edge of the sketch (or of the source graph) ended up.
    pub fn dart(&self, h: usize) -> Option<Dart> {
        let mut h = h;
        while let Some(&n) = self.forward.get(&h) {
            h = n;
        }
        self.half_to_dart.get(h).copied().flatten()
    }
}

impl Sketch {
    pub fn from_graph(g: &Graph) -> Sketch {
        Sketch {
            tail: (0..g.dart_count()).map(|d| g.tail(d)).collect(),
            rot: (0..g.vertex_count()).map(|v| g.darts_at(v).to_vec()).collect(),
            vertex_alive: vec![true; g.vertex_count()],
            origin: (0..g.edge_count()).map(|e| vec![e]).collect(),
            forward: HashMap::new(),
            circles: Vec::new(),
            embedded: g.is_embedded(),
        }
    }

    /// Disjoint union; the second graph's vertices and edges are shifted by
    /// the first graph's counts, and its edge origins by `origin_shift`.
    pub fn union(a: &Graph, b: &Graph, origin_shift: usize) -> Sketch {
        let mut s = Sketch::from_graph(a);
        let dv = a.vertex_count();
        let dh = a.dart_count();
        for d in 0..b.dart_count() {
            s.tail.push(b.tail(d) + dv);
        }
        for v in 0..b.vertex_count() {
            s.rot.push(b.darts_at(v).iter().map(|&d| d + dh).collect());
            s.vertex_alive.push(true);
        }
        for e in 0..b.edge_count() {
            s.origin.push(vec![e + origin_shift]);
        }
        s.embedded = a.is_embedded() && b.is_embedded();
        s
    }

    pub fn resolve(&self, h: usize) -> usize {
        let mut h = h;
        while let Some(&n) = self.forward.get(&h) {
            h = n;
        }
        h
    }

    #[cfg(test)]
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn add_vertex(&mut self) -> usize {
        self.rot.push(Vec::new());
        self.vertex_alive.push(true);
        self.rot.len() - 1
    }

    fn new_edge(&mut self, origin: Vec<usize>) -> usize {
        self.tail.push(DETACHED);
        self.tail.push(DETACHED);
        self.origin.push(origin);
        self.origin.len() - 1
    }

    fn detach(&mut self, h: usize) {
        let v = self.tail[h];
        if v != DETACHED {
            self.rot[v].retain(|&x| x != h);
            self.tail[h] = DETACHED;
        }
    }

    /// Puts new half-edge `n` into the slot held by `h` and forwards `h` to it.
    fn take_slot(&mut self, h: usize, n: usize) {
        let v = self.tail[h];
        let i = self.rot[v].iter().position(|&x| x == h).expect("attached half-edge is in its rotation");
        self.rot[v][i] = n;
        self.tail[n] = v;
        self.tail[h] = DETACHED;
        self.forward.insert(h, n);
    }

    /// Appends a new edge from `u` to `w`. Each end goes right after the
    /// given half-edge in the rotation, or at the end when `None`.
    pub fn add_edge(&mut self, u: usize, after_u: Option<usize>, w: usize, after_w: Option<usize>) -> usize {
        let e = self.new_edge(Vec::new());
        self.insert(2 * e, u, after_u);
        self.insert(2 * e + 1, w, after_w);
        e
    }

    fn insert(&mut self, h: usize, v: usize, after: Option<usize>) {
        let at = match after {
            Some(a) => {
                let a = self.resolve(a);
                self.rot[v].iter().position(|&x| x == a).expect("anchor half-edge sits at the vertex") + 1
            }
            None => self.rot[v].len(),
        };
        self.rot[v].insert(at, h);
        self.tail[h] = v;
    }

    /// New edge whose first half takes the slot of `h`; the second half is
    /// appended to the rotation at `v`. The partner of `h` stays attached.
    pub fn attach(&mut self, h: usize, v: usize) -> usize {
        let h = self.resolve(h);
        let origin = self.origin[h / 2].clone();
        let e = self.new_edge(origin);
        self.take_slot(h, 2 * e);
        self.insert(2 * e + 1, v, None);
        e
    }

    /// New edge taking the slots of `p` and `q`. Their partners stay
    /// attached, so the caller rewires or deletes them.
    pub fn join(&mut self, p: usize, q: usize, origin: Vec<usize>) -> usize {
        let (p, q) = (self.resolve(p), self.resolve(q));
        let e = self.new_edge(origin);
        self.take_slot(p, 2 * e);
        self.take_slot(q, 2 * e + 1);
        e
    }

    /// New edge occupying the slots of half-edges `p` and `q`, whose own
    /// edges are then dropped. Returns the new edge id.
    pub fn bridge(&mut self, p: usize, q: usize, origin: Vec<usize>) -> usize {
        let (p, q) = (self.resolve(p), self.resolve(q));
        let e = self.new_edge(origin);
        self.take_slot(p, 2 * e);
        self.take_slot(q, 2 * e + 1);
        for h in [p ^ 1, q ^ 1] {
            self.detach(h);
        }
        e
    }

    /// Splices two half-edges: the far ends of `x` and `y` become the two
    /// ends of one new edge. Splicing the two halves of a single edge turns
    /// it into a vertexless closed curve. Returns the new edge, if any.
    pub fn splice(&mut self, x: usize, y: usize) -> Option<usize> {
        let (x, y) = (self.resolve(x), self.resolve(y));
        let (ex, ey) = (x / 2, y / 2);
        if ex == ey {
            let curve = self.origin[ex].clone();
            self.circles.push(curve);
            self.detach(x);
            self.detach(y);
            return None;
        }
        let mut origin = self.origin[ex].clone();
        origin.extend_from_slice(&self.origin[ey]);
        let (a, b) = (x ^ 1, y ^ 1);
        let e = self.new_edge(origin);
        self.take_slot(a, 2 * e);
        self.take_slot(b, 2 * e + 1);
        self.detach(x);
        self.detach(y);
        Some(e)
    }

    pub fn delete_edge(&mut self, e: usize) {
        self.detach(2 * e);
        self.detach(2 * e + 1);
    }

    /// Removes a vertex and every edge still attached to it.
    pub fn delete_vertex(&mut self, v: usize) {
        for h in self.rot[v].clone() {
            self.detach(h ^ 1);
            self.detach(h);
        }
        self.vertex_alive[v] = false;
    }

    /// Removes a degree-2 vertex, fusing its two edges. A vertex whose two
    /// half-edges form a loop leaves a closed curve behind.
    pub fn suppress(&mut self, v: usize) {
        debug_assert_eq!(self.rot[v].len(), 2);
        let (x, y) = (self.rot[v][0], self.rot[v][1]);
        self.splice(x, y);
        self.vertex_alive[v] = false;
    }

    /// Contracts a non-loop edge; its second endpoint is merged into the
    /// first, with the merged rotation read around the contracted edge.
    pub fn contract(&mut self, e: usize) {
        let (h, t) = (2 * e, 2 * e + 1);
        let (u, w) = (self.tail[h], self.tail[t]);
        debug_assert!(u != w && u != DETACHED && w != DETACHED);
        let ru = &self.rot[u];
        let rw = &self.rot[w];
        let iu = ru.iter().position(|&x| x == h).expect("half-edge in rotation");
        let iw = rw.iter().position(|&x| x == t).expect("half-edge in rotation");
        let mut merged = Vec::with_capacity(ru.len() + rw.len() - 2);
        merged.extend((1..ru.len()).map(|k| ru[(iu + k) % ru.len()]));
        merged.extend((1..rw.len()).map(|k| rw[(iw + k) % rw.len()]));
        for &x in &merged {
            self.tail[x] = u;
        }
        self.rot[u] = merged;
        self.rot[w].clear();
        self.vertex_alive[w] = false;
        self.tail[h] = DETACHED;
        self.tail[t] = DETACHED;
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.vertex_alive[v]
    }

    /// Freezes the live part into a graph of the given degree. Vertices and
    /// edges keep their relative order.
    pub fn freeze(&self, degree: usize) -> Result<Frozen> {
        let mut vertex = vec![None; self.rot.len()];
        let mut n = 0;
        for v in 0..self.rot.len() {
            if self.vertex_alive[v] {
                vertex[v] = Some(n);
                n += 1;
            }
        }
        let mut half_to_dart = vec![None; self.tail.len()];
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for e in 0..self.tail.len() / 2 {
            let (a, b) = (self.tail[2 * e], self.tail[2 * e + 1]);
            if a == DETACHED || b == DETACHED {
                continue;
            }
            let id = edges.len();
            half_to_dart[2 * e] = Some(2 * id);
            half_to_dart[2 * e + 1] = Some(2 * id + 1);
            edges.push((
                vertex[a].expect("live edge ends at live vertex"),
                vertex[b].expect("live edge ends at live vertex"),
            ));
            origin.push(self.origin[e].clone());
        }
        let rotations: Vec<Vec<Dart>> = (0..self.rot.len())
            .filter(|&v| self.vertex_alive[v])
            .map(|v| self.rot[v].iter().map(|&h| half_to_dart[h].expect("attached half-edge has a dart")).collect())
            .collect();
        let graph = Graph::new(degree, n, &edges, self.embedded.then_some(rotations.as_slice()))?;
        Ok(Frozen { graph, origin, vertex, circles: self.circles.clone(), half_to_dart, forward: self.forward.clone() })
    }
}

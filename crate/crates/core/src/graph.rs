//! Dart-based regular multigraphs with an optional rotation system.
//!
//! Edge `e` owns the two darts `2e` and `2e + 1`; the first sits at the
//! edge's first endpoint. Loops and parallel edges need no special casing
//! because every incidence is a distinct dart.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type Dart = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn edge_of(d: Dart) -> usize {
    d >> 1
}

/// A regular multigraph. With a rotation system it is a map on the sphere;
/// without one it is an abstract graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    degree: usize,
    tail: Vec<usize>,
    darts: Vec<Vec<Dart>>,
    position: Vec<usize>,
    embedded: bool,
}

/// The 4-regular graphs that carry vertex orientations.
pub type PlaneGraph = Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Embedded,
    Abstract,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SeparationKind {
    CutVertex(usize),
    TwoEdgeCut(usize, usize),
}

/// A cut-vertex or a 2-edge cut together with the two sides it leaves.
/// `side_of[v]` is 1 or 2, and 0 for the pivot vertex of a cut-vertex.
/// Side 1 always holds the smallest non-pivot vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub kind: SeparationKind,
    pub side_of: Vec<u8>,
}

/// Builds a validated 4-regular graph. The vertex count is one more than
/// the largest vertex id mentioned.
pub fn build_graph(edges: &[(usize, usize)], rotations: Option<&[Vec<Dart>]>) -> Result<PlaneGraph> {
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::new(4, n, edges, rotations)
}

impl Graph {
    /// Validates degrees, the rotation lists and, for embedded graphs, the
    /// Euler characteristic of every component.
    pub fn new(
        degree: usize,
        vertex_count: usize,
        edges: &[(usize, usize)],
        rotations: Option<&[Vec<Dart>]>,
    ) -> Result<Graph> {
        let mut tail = Vec::with_capacity(2 * edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::Degree { vertex: w, found: 0, expected: degree });
                }
            }
            tail.push(u);
            tail.push(v);
        }
        let mut incident = vec![Vec::new(); vertex_count];
        for (d, &v) in tail.iter().enumerate() {
            incident[v].push(d);
        }
        for (v, ds) in incident.iter().enumerate() {
            if ds.len() != degree {
                return Err(Error::Degree { vertex: v, found: ds.len(), expected: degree });
            }
        }
        let (darts, embedded) = match rotations {
            None => (incident, false),
            Some(rot) => {
                if rot.len() != vertex_count {
                    return Err(Error::Rotation {
                        vertex: rot.len().min(vertex_count),
                        reason: format!("{} rotation lists for {} vertices", rot.len(), vertex_count),
                    });
                }
                for (v, r) in rot.iter().enumerate() {
                    let mut sorted = r.clone();
                    sorted.sort_unstable();
                    if sorted != incident[v] {
                        return Err(Error::Rotation {
                            vertex: v,
                            reason: format!("lists darts {:?}, incident darts are {:?}", r, incident[v]),
                        });
                    }
                }
                (rot.to_vec(), true)
            }
        };
        let mut position = vec![0; tail.len()];
        for ds in &darts {
            for (i, &d) in ds.iter().enumerate() {
                position[d] = i;
            }
        }
        let g = Graph { degree, tail, darts, position, embedded };
        if embedded {
            g.check_euler()?;
        }
        Ok(g)
    }

    fn check_euler(&self) -> Result<()> {
        let faces = self.faces()?;
        let (comp, count) = self.components();
        let mut v = vec![0i64; count];
        let mut e = vec![0i64; count];
        let mut f = vec![0i64; count];
        for c in &comp {
            v[*c] += 1;
        }
        for edge in 0..self.edge_count() {
            e[comp[self.tail[2 * edge]]] += 1;
        }
        for face in &faces {
            f[comp[self.tail[face[0]]]] += 1;
        }
        for c in 0..count {
            let euler = v[c] - e[c] + f[c];
            if euler != 2 {
                let vertex = comp.iter().position(|&x| x == c).unwrap_or(0);
                return Err(Error::Genus { vertex, euler });
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vertex_count(&self) -> usize {
        self.darts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn dart_count(&self) -> usize {
        self.tail.len()
    }

    pub fn mode(&self) -> Mode {
        if self.embedded {
            Mode::Embedded
        } else {
            Mode::Abstract
        }
    }

    pub fn is_embedded(&self) -> bool {
        self.embedded
    }

    /// Vertex the dart leaves from.
    #[inline]
    pub fn tail(&self, d: Dart) -> usize {
        self.tail[d]
    }

    /// Vertex the dart points to.
    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.tail[twin(d)]
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.tail[2 * e], self.tail[2 * e + 1])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.edge_count()).map(|e| self.endpoints(e)).collect()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.endpoints(e);
        u == v
    }

    /// Darts at `v`: counterclockwise rotation when embedded, ascending ids otherwise.
    #[inline]
    pub fn darts_at(&self, v: usize) -> &[Dart] {
        &self.darts[v]
    }

    /// Index of `d` inside `darts_at(tail(d))`.
    #[inline]
    pub fn position(&self, d: Dart) -> usize {
        self.position[d]
    }

    pub fn rotations(&self) -> Option<Vec<Vec<Dart>>> {
        self.embedded.then(|| self.darts.clone())
    }

    /// Counterclockwise successor of `d` at its tail.
    #[inline]
    pub fn rot_next(&self, d: Dart) -> Dart {
        let ds = &self.darts[self.tail[d]];
        ds[(self.position[d] + 1) % ds.len()]
    }

    #[inline]
    pub fn rot_prev(&self, d: Dart) -> Dart {
        let ds = &self.darts[self.tail[d]];
        ds[(self.position[d] + ds.len() - 1) % ds.len()]
    }

    /// Number of loops at `v`.
    pub fn loops_at(&self, v: usize) -> usize {
        self.darts[v].iter().filter(|&&d| self.head(d) == v).count() / 2
    }

    /// The same graph drawn in the mirror: every rotation reversed.
    pub fn reflected(&self) -> Graph {
        let mut g = self.clone();
        if g.embedded {
            for ds in &mut g.darts {
                ds.reverse();
            }
            for ds in &g.darts {
                for (i, &d) in ds.iter().enumerate() {
                    g.position[d] = i;
                }
            }
        }
        g
    }

    /// Same graph with the vertex rotations forgotten.
    pub fn to_abstract(&self) -> Graph {
        Graph::new(self.degree, self.vertex_count(), &self.edges(), None)
            .expect("an existing graph is always valid without rotations")
    }

    /// Face boundaries. The face successor of `d` is the rotation successor
    /// of `twin(d)`.
    pub fn faces(&self) -> Result<Vec<Vec<Dart>>> {
        if !self.embedded {
            return Err(Error::Mode);
        }
        let mut seen = vec![false; self.dart_count()];
        let mut faces = Vec::new();
        for start in 0..self.dart_count() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.rot_next(twin(d));
            }
            faces.push(face);
        }
        Ok(faces)
    }

    /// Component id per vertex plus the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        self.components_without(None, &[])
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Components after deleting an optional vertex and some edges. The
    /// deleted vertex gets component id `usize::MAX`.
    pub fn components_without(&self, vertex: Option<usize>, edges: &[usize]) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX || Some(s) == vertex {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &d in &self.darts[u] {
                    if edges.contains(&edge_of(d)) {
                        continue;
                    }
                    let w = self.head(d);
                    if Some(w) == vertex || comp[w] != usize::MAX {
                        continue;
                    }
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// All cut-vertices (ascending) followed by all 2-edge cuts (by edge pair).
    pub fn find_separations(&self) -> Result<Vec<Separation>> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let mut out = Vec::new();
        for v in 0..self.vertex_count() {
            let (comp, count) = self.components_without(Some(v), &[]);
            if count > 1 {
                out.push(Separation { kind: SeparationKind::CutVertex(v), side_of: sides(&comp) });
            }
        }
        let m = self.edge_count();
        for e in 0..m {
            if self.is_loop(e) {
                continue;
            }
            for f in e + 1..m {
                if self.is_loop(f) {
                    continue;
                }
                let (comp, count) = self.components_without(None, &[e, f]);
                if count > 1 {
                    out.push(Separation { kind: SeparationKind::TwoEdgeCut(e, f), side_of: sides(&comp) });
                }
            }
        }
        Ok(out)
    }
}

/// Maps component ids to sides 1 and 2, with side 1 holding the smallest
/// vertex. Components beyond the second are folded into side 2.
fn sides(comp: &[usize]) -> Vec<u8> {
    let first = comp.iter().copied().find(|&c| c != usize::MAX);
    comp.iter()
        .map(|&c| {
            if c == usize::MAX {
                0
            } else if Some(c) == first {
                1
            } else {
                2
            }
        })
        .collect()
}

//! Vertex orientations: which two darts at a vertex share a cell.
//!
//! An orientation at `v` is stored as a small index into the list returned
//! by [`admissible_orientations`]. In embedded mode index 0 is always the
//! partition that pairs the first two darts of the rotation, when that
//! partition is admissible.

use crate::error::{Error, Result};
use crate::graph::{edge_of, Dart, Graph};

/// Partition of the four darts at a vertex into two cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub vertex: usize,
    pub cells: [[Dart; 2]; 2],
}

impl Orientation {
    fn new(vertex: usize, a: [Dart; 2], b: [Dart; 2]) -> Orientation {
        Orientation { vertex, cells: [a, b] }
    }

    /// Cell index (0 or 1) holding `d`.
    pub fn cell_of(&self, d: Dart) -> Option<u8> {
        if self.cells[0].contains(&d) {
            Some(0)
        } else if self.cells[1].contains(&d) {
            Some(1)
        } else {
            None
        }
    }

    /// True when both orientations split the darts the same way.
    pub fn same_partition(&self, other: &Orientation) -> bool {
        let norm = |o: &Orientation| {
            let mut c = o.cells.map(|mut p| {
                p.sort_unstable();
                p
            });
            c.sort_unstable();
            c
        };
        self.vertex == other.vertex && norm(self) == norm(other)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Plain,
    Transverse,
    Nontransverse,
}

/// One orientation index per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientationAssignment {
    pub choice: Vec<u8>,
}

impl OrientationAssignment {
    pub fn new(choice: Vec<u8>) -> OrientationAssignment {
        OrientationAssignment { choice }
    }

    pub fn zeros(n: usize) -> OrientationAssignment {
        OrientationAssignment { choice: vec![0; n] }
    }

    /// Bit `i` of `mask` is the orientation index of vertex `i`.
    pub fn from_mask(n: usize, mask: u64) -> OrientationAssignment {
        OrientationAssignment { choice: (0..n).map(|i| ((mask >> i) & 1) as u8).collect() }
    }

    /// Inverse of [`from_mask`](Self::from_mask); `None` if some index exceeds 1.
    pub fn to_mask(&self) -> Option<u64> {
        let mut m = 0u64;
        for (i, &c) in self.choice.iter().enumerate() {
            if c > 1 || i >= 64 {
                return None;
            }
            m |= (c as u64) << i;
        }
        Some(m)
    }

    pub fn orientation(&self, g: &Graph, v: usize) -> Result<Orientation> {
        let list = admissible_orientations(g, v);
        let c = self
            .choice
            .get(v)
            .copied()
            .ok_or_else(|| Error::Validation(format!("no orientation given for vertex {v}")))? as usize;
        list.get(c)
            .copied()
            .ok_or_else(|| Error::Validation(format!("vertex {v} has {} orientations, index {c} given", list.len())))
    }

    /// Dart-indexed cell table.
    pub fn cells(&self, g: &Graph) -> Result<Vec<u8>> {
        if self.choice.len() != g.vertex_count() {
            return Err(Error::Validation(format!(
                "{} orientation entries for {} vertices",
                self.choice.len(),
                g.vertex_count()
            )));
        }
        let mut cell = vec![0u8; g.dart_count()];
        for v in 0..g.vertex_count() {
            let o = self.orientation(g, v)?;
            for (i, pair) in o.cells.iter().enumerate() {
                for &d in pair {
                    cell[d] = i as u8;
                }
            }
        }
        Ok(cell)
    }
}

/// Cell partitions allowed at `v`.
pub fn admissible_orientations(g: &Graph, v: usize) -> Vec<Orientation> {
    let r = g.darts_at(v);
    assert_eq!(r.len(), 4, "orientations exist only at degree-4 vertices");
    let first = Orientation::new(v, [r[0], r[1]], [r[2], r[3]]);
    let second = Orientation::new(v, [r[1], r[2]], [r[3], r[0]]);
    if !g.is_embedded() {
        let crossed = Orientation::new(v, [r[0], r[2]], [r[1], r[3]]);
        return vec![first, second, crossed];
    }
    if g.loops_at(v) == 2 {
        // Only the pairing that puts darts of different loops together.
        let same_loop = |o: &Orientation| o.cells.iter().any(|p| edge_of(p[0]) == edge_of(p[1]));
        return [first, second].into_iter().filter(|o| !same_loop(o)).collect();
    }
    vec![first, second]
}

/// Index of the admissible orientation at `v` with the given cells.
pub fn orientation_index(g: &Graph, v: usize, cell: [Dart; 2]) -> Option<u8> {
    admissible_orientations(g, v)
        .iter()
        .position(|o| {
            o.cells.iter().any(|p| (p[0] == cell[0] && p[1] == cell[1]) || (p[0] == cell[1] && p[1] == cell[0]))
        })
        .map(|i| i as u8)
}

/// Number of orientations per vertex.
pub fn orientation_counts(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).map(|v| admissible_orientations(g, v).len()).collect()
}

/// Loop-anchor status, then cut-vertex status, of `v` under `sigma`.
pub fn classify(g: &Graph, sigma: &OrientationAssignment, v: usize) -> Result<Kind> {
    if !g.is_embedded() {
        return Err(Error::Mode);
    }
    let o = sigma.orientation(g, v)?;
    if g.loops_at(v) > 0 {
        let split = g.darts_at(v).iter().filter(|&&d| g.head(d) == v).all(|&d| o.cell_of(d) != o.cell_of(d ^ 1));
        return Ok(if split { Kind::Transverse } else { Kind::Nontransverse });
    }
    let Some(comp) = cut_vertex_sides(g, v) else {
        return Ok(Kind::Plain);
    };
    let side = |d: Dart| comp[g.head(d)];
    let straddles = o.cells.iter().all(|p| side(p[0]) != side(p[1]));
    let within = o.cells.iter().all(|p| side(p[0]) == side(p[1]));
    Ok(if straddles {
        Kind::Transverse
    } else if within {
        Kind::Nontransverse
    } else {
        Kind::Plain
    })
}

/// Component ids of `g - v` when deleting `v` splits its component.
pub fn cut_vertex_sides(g: &Graph, v: usize) -> Option<Vec<usize>> {
    let (_, total) = g.components();
    let (comp, count) = g.components_without(Some(v), &[]);
    let alone = g.darts_at(v).iter().all(|&d| g.head(d) == v);
    let expected = if alone { total - 1 } else { total };
    (count > expected).then_some(comp)
}

/// Cut-vertices in ascending order; works on disconnected graphs too.
pub fn cut_vertices(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).filter(|&v| cut_vertex_sides(g, v).is_some()).collect()
}

/// Every assignment, counting in mixed radix with vertex 0 least significant.
pub fn enumerate_assignments(g: &Graph) -> impl Iterator<Item = OrientationAssignment> {
    let counts = orientation_counts(g);
    let total: usize = counts.iter().product();
    (0..total).map(move |mut k| {
        let mut choice = Vec::with_capacity(counts.len());
        for &c in &counts {
            choice.push((k % c) as u8);
            k /= c;
        }
        OrientationAssignment { choice }
    })
}

/// True iff every cut-vertex and every loop-anchor is oriented transversely.
pub fn is_vogwoc(g: &Graph, sigma: &OrientationAssignment) -> Result<bool> {
    if !g.is_embedded() {
        return Err(Error::Mode);
    }
    for v in 0..g.vertex_count() {
        if classify(g, sigma, v)? == Kind::Nontransverse {
            return Ok(false);
        }
    }
    Ok(true)
}

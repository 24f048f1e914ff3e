//! Graph symmetries and their action on orientation assignments.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{edge_of, twin, Dart, Graph};
use crate::orientation::{orientation_counts, orientation_index, OrientationAssignment};

/// How a dart map relates the rotation systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    /// Rotations go to rotations.
    Preserving,
    /// Rotations go to reversed rotations (a global reflection).
    Reversing,
    /// Neither; only an abstract graph map.
    Incompatible,
}

/// A vertex permutation together with the dart permutation realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub vertex: Vec<usize>,
    pub dart: Vec<Dart>,
}

impl Automorphism {
    pub fn identity(g: &Graph) -> Automorphism {
        Automorphism { vertex: (0..g.vertex_count()).collect(), dart: (0..g.dart_count()).collect() }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertex: other.vertex.iter().map(|&v| self.vertex[v]).collect(),
            dart: other.dart.iter().map(|&d| self.dart[d]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut vertex = vec![0; self.vertex.len()];
        for (v, &w) in self.vertex.iter().enumerate() {
            vertex[w] = v;
        }
        let mut dart = vec![0; self.dart.len()];
        for (d, &e) in self.dart.iter().enumerate() {
            dart[e] = d;
        }
        Automorphism { vertex, dart }
    }

    /// Rotation compatibility between the source and target maps.
    pub fn kind_between(&self, g: &Graph, h: &Graph) -> MapKind {
        if !g.is_embedded() || !h.is_embedded() {
            return MapKind::Incompatible;
        }
        let all = |f: &dyn Fn(Dart) -> bool| (0..g.dart_count()).all(f);
        if all(&|d| self.dart[g.rot_next(d)] == h.rot_next(self.dart[d])) {
            MapKind::Preserving
        } else if all(&|d| self.dart[g.rot_next(d)] == h.rot_prev(self.dart[d])) {
            MapKind::Reversing
        } else {
            MapKind::Incompatible
        }
    }

    pub fn kind(&self, g: &Graph) -> MapKind {
        self.kind_between(g, g)
    }

    /// True when the map respects incidence and twins on `g`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        (0..g.dart_count())
            .all(|d| twin(self.dart[d]) == self.dart[twin(d)] && g.tail(self.dart[d]) == self.vertex[g.tail(d)])
    }
}

/// Every isomorphism from `g` to `h` as vertex and dart maps, ignoring
/// rotations. Parallel edges may be permuted and loops reversed freely.
pub fn isomorphisms(g: &Graph, h: &Graph) -> Vec<Automorphism> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Vec::new();
    }
    let mg = multiplicity(g);
    let mh = multiplicity(h);
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    vertex_maps(&mg, &mh, 0, &mut map, &mut used, &mut |m| {
        expand_darts(g, h, m, &mut out);
    });
    out
}

pub fn automorphisms(g: &Graph) -> Vec<Automorphism> {
    isomorphisms(g, g)
}

fn multiplicity(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        m[a][b] += 1;
        if a != b {
            m[b][a] += 1;
        }
    }
    m
}

fn vertex_maps(
    mg: &[Vec<usize>],
    mh: &[Vec<usize>],
    at: usize,
    map: &mut [usize],
    used: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    let n = mg.len();
    if at == n {
        emit(map);
        return;
    }
    for w in 0..n {
        if used[w] || mg[at][at] != mh[w][w] {
            continue;
        }
        if (0..at).any(|u| mg[at][u] != mh[w][map[u]]) {
            continue;
        }
        map[at] = w;
        used[w] = true;
        vertex_maps(mg, mh, at + 1, map, used, emit);
        used[w] = false;
        map[at] = usize::MAX;
    }
}

/// All dart maps over a fixed vertex map: bundles of parallel edges are
/// matched in every order, and each loop may also be reversed.
fn expand_darts(g: &Graph, h: &Graph, vmap: &[usize], out: &mut Vec<Automorphism>) {
    // Group edges of g by unordered endpoint pair.
    let mut bundles: Vec<((usize, usize), Vec<usize>)> = Vec::new();
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        let key = (a.min(b), a.max(b));
        match bundles.iter_mut().find(|(k, _)| *k == key) {
            Some((_, es)) => es.push(e),
            None => bundles.push((key, vec![e])),
        }
    }
    let targets: Vec<Vec<usize>> = bundles
        .iter()
        .map(|&((a, b), _)| {
            let (x, y) = (vmap[a], vmap[b]);
            let key = (x.min(y), x.max(y));
            (0..h.edge_count())
                .filter(|&f| {
                    let (p, q) = h.endpoints(f);
                    (p.min(q), p.max(q)) == key
                })
                .collect()
        })
        .collect();
    let mut dart = vec![usize::MAX; g.dart_count()];
    bundle_maps(g, h, vmap, &bundles, &targets, 0, &mut dart, out);
}

#[allow(clippy::too_many_arguments)]
fn bundle_maps(
    g: &Graph,
    h: &Graph,
    vmap: &[usize],
    bundles: &[((usize, usize), Vec<usize>)],
    targets: &[Vec<usize>],
    at: usize,
    dart: &mut Vec<Dart>,
    out: &mut Vec<Automorphism>,
) {
    if at == bundles.len() {
        out.push(Automorphism { vertex: vmap.to_vec(), dart: dart.clone() });
        return;
    }
    let src = &bundles[at].1;
    let dst = &targets[at];
    let is_loop = g.is_loop(src[0]);
    for perm in permutations(dst.len()) {
        let flips = if is_loop { 1usize << src.len() } else { 1 };
        for flip in 0..flips {
            for (i, &e) in src.iter().enumerate() {
                let f = dst[perm[i]];
                let forward = if is_loop { flip >> i & 1 == 0 } else { h.tail(2 * f) == vmap[g.tail(2 * e)] };
                let (d0, d1) = if forward { (2 * f, 2 * f + 1) } else { (2 * f + 1, 2 * f) };
                dart[2 * e] = d0;
                dart[2 * e + 1] = d1;
            }
            bundle_maps(g, h, vmap, bundles, targets, at + 1, dart, out);
        }
    }
}

/// All permutations of 0..k in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; k];
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut cur, &mut used, &mut out);
    out
}

/// Image of an assignment: the cells at `v` go to cells at `a(v)`.
pub fn act(g: &Graph, a: &Automorphism, sigma: &OrientationAssignment) -> Result<OrientationAssignment> {
    if g.is_embedded() && a.kind(g) == MapKind::Incompatible {
        return Err(Error::Compatibility);
    }
    let mut choice = vec![0u8; g.vertex_count()];
    for v in 0..g.vertex_count() {
        let o = sigma.orientation(g, v)?;
        let cell = [a.dart[o.cells[0][0]], a.dart[o.cells[0][1]]];
        choice[a.vertex[v]] = orientation_index(g, a.vertex[v], cell).ok_or(Error::Compatibility)?;
    }
    Ok(OrientationAssignment::new(choice))
}

/// Mixed-radix code of an assignment, vertex 0 least significant. For
/// two orientations per vertex this is the orientation bitmask.
pub fn encode(g: &Graph, sigma: &OrientationAssignment) -> usize {
    let counts = orientation_counts(g);
    let mut code = 0;
    for v in (0..g.vertex_count()).rev() {
        code = code * counts[v] + sigma.choice[v] as usize;
    }
    code
}

pub fn decode(g: &Graph, mut code: usize) -> OrientationAssignment {
    let counts = orientation_counts(g);
    let choice = counts
        .iter()
        .map(|&c| {
            let x = (code % c) as u8;
            code /= c;
            x
        })
        .collect();
    OrientationAssignment::new(choice)
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub representative: OrientationAssignment,
    pub code: usize,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// Size of the abstract automorphism group.
    pub group_order: usize,
    /// Elements that preserve the map up to reflection; these act.
    pub acting: usize,
    pub orbits: Vec<Orbit>,
    /// Sum of fixed-point counts over the acting elements.
    pub fixed_total: usize,
}

impl OrbitReport {
    /// Orbit count predicted by averaging fixed points, when exact.
    pub fn burnside(&self) -> Option<usize> {
        (self.fixed_total % self.acting == 0).then(|| self.fixed_total / self.acting)
    }
}

/// Orbits of the map-compatible automorphisms on all assignments, ordered
/// by representative code (the smallest code in each orbit).
pub fn orbits(g: &Graph) -> Result<OrbitReport> {
    if !g.is_embedded() {
        return Err(Error::Mode);
    }
    let all = automorphisms(g);
    let group_order = all.len();
    let acting: Vec<Automorphism> = all.into_iter().filter(|a| a.kind(g) != MapKind::Incompatible).collect();
    let total: usize = orientation_counts(g).iter().product();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let mut fixed_total = 0;
    for code in 0..total {
        let s = decode(g, code);
        for a in &acting {
            let image = encode(g, &act(g, a, &s)?);
            if image == code {
                fixed_total += 1;
            }
            let (x, y) = (find(&mut parent, code), find(&mut parent, image));
            if x != y {
                // Keep the smaller code as root so roots are representatives.
                let (lo, hi) = (x.min(y), x.max(y));
                parent[hi] = lo;
            }
        }
    }
    let mut size = vec![0usize; total];
    for code in 0..total {
        let r = find(&mut parent, code);
        size[r] += 1;
    }
    let orbits = (0..total)
        .filter(|&c| size[c] > 0)
        .map(|c| Orbit { representative: decode(g, c), code: c, size: size[c] })
        .collect();
    Ok(OrbitReport { group_order, acting: acting.len(), orbits, fixed_total })
}

/// Canonical code of a connected map: darts renumbered by a breadth-first
/// walk from each possible start, keeping the smallest table. With
/// `mirror`, reflected starts compete too, so mirror images share a code.
pub fn map_code(g: &Graph, mirror: bool) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    let sides: &[bool] = if mirror { &[false, true] } else { &[false] };
    for &reflect in sides {
        for start in 0..g.dart_count() {
            let code = code_from(g, start, reflect);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    let mut out = vec![g.vertex_count(), g.edge_count()];
    out.extend(best.unwrap_or_default());
    out
}

fn code_from(g: &Graph, start: Dart, reflect: bool) -> Vec<usize> {
    let next = |d: Dart| {
        if reflect {
            g.rot_prev(d)
        } else {
            g.rot_next(d)
        }
    };
    let mut label = vec![usize::MAX; g.dart_count()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    label[start] = 0;
    order.push(start);
    queue.push_back(start);
    while let Some(d) = queue.pop_front() {
        for x in [twin(d), next(d)] {
            if label[x] == usize::MAX {
                label[x] = order.len();
                order.push(x);
                queue.push_back(x);
            }
        }
    }
    let mut code = Vec::with_capacity(2 * order.len());
    for &d in &order {
        code.push(label[twin(d)]);
        code.push(label[next(d)]);
    }
    code
}

/// True when the maps agree up to relabelling, and reflection if `mirror`.
pub fn same_map(g: &Graph, h: &Graph, mirror: bool) -> bool {
    g.is_connected() && h.is_connected() && map_code(g, mirror) == map_code(h, mirror)
}

/// Edge of each dart's image, for reporting.
pub fn edge_image(a: &Automorphism, e: usize) -> usize {
    edge_of(a.dart[2 * e])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn four_parallel_edges_have_forty_eight_dart_maps() {
        let g = build_graph(&[(0, 1); 4], Some(&[vec![0, 2, 4, 6], vec![7, 5, 3, 1]])).unwrap();
        let auts = automorphisms(&g);
        assert_eq!(auts.len(), 2 * 24);
        assert!(auts.iter().all(|a| a.is_valid(&g)));
        let compatible = auts.iter().filter(|a| a.kind(&g) != MapKind::Incompatible).count();
        // Dihedral symmetries of the 4 parallel edges, times the vertex swap.
        assert_eq!(compatible, 16);
    }

    #[test]
    fn double_loop_group() {
        let g = build_graph(&[(0, 0), (0, 0)], Some(&[vec![0, 1, 2, 3]])).unwrap();
        assert_eq!(automorphisms(&g).len(), 2 * 4);
        let r = orbits(&g).unwrap();
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.burnside(), Some(1));
    }

    #[test]
    fn code_is_relabelling_invariant() {
        let g = build_graph(&[(0, 1); 4], Some(&[vec![0, 2, 4, 6], vec![7, 5, 3, 1]])).unwrap();
        let h = build_graph(&[(1, 0); 4], Some(&[vec![1, 3, 5, 7], vec![6, 4, 2, 0]])).unwrap();
        assert!(same_map(&g, &h, false));
        assert!(same_map(&g, &g.reflected(), true));
    }
}

//! Perfect matchings, their height classes and the matching polytope.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dimer::{Dimer, Sign};
use crate::lattice::{hermite_basis, Z2};
use crate::zigzag::ZigzagSystem;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatchingError {
    #[error("the dimer has no perfect matching")]
    NoMatchings,
    #[error("the cycles of the quiver do not generate the lattice of shifts")]
    NoHomologyBasis,
    #[error("the matching polytope is not two-dimensional")]
    DegeneratePolytope,
    #[error("hull edge with outward normal {normal} matches no zigzag class")]
    NormalMismatch { normal: Z2 },
    #[error("class {class}: hull edge has lattice length {length} but {multiplicity} parallel cycles")]
    EdgeLength { class: usize, length: i64, multiplicity: usize },
    #[error("corner {point} carries {count} perfect matchings")]
    CornerNotUnique { point: Z2, count: usize },
    #[error("class {class}: {detail}")]
    CornerStructure { class: usize, detail: String },
}

/// A perfect matching: sorted arrow indices and height relative to the
/// reference matching (the first one enumerated).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectMatching {
    pub edges: Vec<usize>,
    pub height: Z2,
}

impl PerfectMatching {
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Number of arrows of a word lying in the matching.
    pub fn degree(&self, word: &[usize]) -> i64 {
        word.iter().filter(|&&e| self.contains(e)).count() as i64
    }
}

/// All arrow sets meeting every face exactly once, in lexicographic order.
pub fn enumerate_perfect_matchings(d: &Dimer) -> Vec<Vec<usize>> {
    fn search(
        d: &Dimer,
        covered: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        // Branch on the uncovered face with the fewest admissible arrows.
        let mut best: Option<(usize, Vec<usize>)> = None;
        for (f, face) in d.faces.iter().enumerate() {
            if covered[f] {
                continue;
            }
            let options: Vec<usize> = face
                .cycle
                .iter()
                .copied()
                .filter(|&e| !covered[d.face_of(e, face.sign.flip()).0])
                .collect();
            if best.as_ref().map_or(true, |(_, o)| options.len() < o.len()) {
                let empty = options.is_empty();
                best = Some((f, options));
                if empty {
                    break;
                }
            }
        }
        let Some((_, mut options)) = best else {
            let mut m = chosen.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        options.sort_unstable();
        for e in options {
            let (fp, fm) = (d.face_of(e, Sign::Positive).0, d.face_of(e, Sign::Negative).0);
            covered[fp] = true;
            covered[fm] = true;
            chosen.push(e);
            search(d, covered, chosen, out);
            chosen.pop();
            covered[fp] = false;
            covered[fm] = false;
        }
    }
    let mut out = Vec::new();
    search(d, &mut vec![false; d.faces.len()], &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Two integer 1-chains on the quiver whose shift sums are `(1, 0)` and
/// `(0, 1)`, together with the tree used to build them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyBasis {
    pub cycles: [Vec<i64>; 2],
    /// Spanning-tree arrow into each non-root vertex, with its orientation
    /// (+1 when the arrow points away from the root).
    tree: Vec<Option<(usize, i64)>>,
    order: Vec<usize>,
}

impl HomologyBasis {
    pub fn new(d: &Dimer) -> Result<HomologyBasis, MatchingError> {
        let n = d.num_vertices();
        let mut tree: Vec<Option<(usize, i64)>> = vec![None; n];
        let mut chain: Vec<Option<Vec<i64>>> = vec![None; n];
        chain[0] = Some(vec![0; d.num_arrows()]);
        let mut order = vec![0];
        let mut in_tree = vec![false; d.num_arrows()];
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            for e in 0..d.num_arrows() {
                let (t, h) = (d.tail(e), d.head(e));
                let (w, dir) = if t == v && chain[h].is_none() {
                    (h, 1)
                } else if h == v && chain[t].is_none() {
                    (t, -1)
                } else {
                    continue;
                };
                let mut c = chain[v].clone().unwrap();
                c[e] += dir;
                chain[w] = Some(c);
                tree[w] = Some((e, dir));
                in_tree[e] = true;
                order.push(w);
            }
        }
        if order.len() != n {
            return Err(MatchingError::NoHomologyBasis);
        }
        let mut gens = Vec::new();
        for e in 0..d.num_arrows() {
            if in_tree[e] {
                continue;
            }
            let mut c = chain[d.tail(e)].clone().unwrap();
            for (x, y) in c.iter_mut().zip(chain[d.head(e)].as_ref().unwrap()) {
                *x -= y;
            }
            c[e] += 1;
            let shift: Z2 = c.iter().enumerate().map(|(a, &k)| k * d.shift(a)).sum();
            gens.push((shift, c));
        }
        let (b1, c1, b2, c2) = hermite_basis(gens).ok_or(MatchingError::NoHomologyBasis)?;
        if b1.x.abs() != 1 || b2.y.abs() != 1 {
            return Err(MatchingError::NoHomologyBasis);
        }
        let e2: Vec<i64> = c2.iter().map(|k| k * b2.y).collect();
        let e1: Vec<i64> = c1.iter().zip(&e2).map(|(a, b)| b1.x * (a - b1.y * b)).collect();
        Ok(HomologyBasis { cycles: [e1, e2], tree, order })
    }

    /// Replaces the generating cycles, e.g. by adding face boundaries.
    pub fn with_cycles(&self, cycles: [Vec<i64>; 2]) -> HomologyBasis {
        HomologyBasis { cycles, ..self.clone() }
    }

    /// Evaluates an arrow cochain on both generating cycles.
    pub fn evaluate(&self, cochain: &[i64]) -> Z2 {
        let ev = |c: &Vec<i64>| c.iter().zip(cochain).map(|(a, b)| a * b).sum();
        Z2::new(ev(&self.cycles[0]), ev(&self.cycles[1]))
    }

    /// Vertex potential `f` with `c(e) = f(h(e)) − f(t(e)) + ⟨height, shift(e)⟩`
    /// for a closed cochain `c`; `f` vanishes on the first vertex.
    pub fn potential(&self, d: &Dimer, cochain: &[i64], height: Z2) -> Vec<i64> {
        let mut f = vec![0; d.num_vertices()];
        for &w in &self.order[1..] {
            let (e, dir) = self.tree[w].unwrap();
            let step = cochain[e] - height.dot(d.shift(e));
            f[w] = if dir > 0 { f[d.tail(e)] + step } else { f[d.head(e)] - step };
        }
        f
    }
}

/// Indicator difference `χ_P − χ_Q` as an arrow cochain.
pub fn difference_cochain(n: usize, p: &[usize], q: &[usize]) -> Vec<i64> {
    let mut c = vec![0; n];
    for &e in p {
        c[e] += 1;
    }
    for &e in q {
        c[e] -= 1;
    }
    c
}

/// Height of `p` relative to `p0`.
pub fn matching_height(basis: &HomologyBasis, n: usize, p: &[usize], p0: &[usize]) -> Z2 {
    basis.evaluate(&difference_cochain(n, p, p0))
}

/// Position of a matching inside the polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingKind {
    Corner,
    Boundary,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullEdge {
    /// Class `i` whose cycles have homology equal to the outward normal.
    pub class_index: usize,
    pub normal: Z2,
    /// Lattice length, equal to the multiplicity of the class.
    pub length: i64,
    /// Endpoints in counterclockwise order.
    pub start: Z2,
    pub end: Z2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingPolytope {
    /// Distinct heights with the indices of the matchings at each.
    pub points: Vec<(Z2, Vec<usize>)>,
    /// Hull vertices in counterclockwise order.
    pub hull: Vec<Z2>,
    /// Edges indexed by class.
    pub edges: Vec<HullEdge>,
    pub boundary_points: i64,
    pub interior_points: i64,
    /// Twice the Euclidean area.
    pub area2: i64,
}

impl MatchingPolytope {
    pub fn kind_of(&self, h: Z2) -> MatchingKind {
        if self.hull.contains(&h) {
            MatchingKind::Corner
        } else if self.edges.iter().any(|e| on_segment(e.start, e.end, h)) {
            MatchingKind::Boundary
        } else {
            MatchingKind::Internal
        }
    }

    /// Lattice points on the closed edge of class `i`.
    pub fn edge_points(&self, i: usize) -> Vec<Z2> {
        let e = &self.edges[i];
        let step = Z2::new((e.end.x - e.start.x) / e.length, (e.end.y - e.start.y) / e.length);
        (0..=e.length).map(|k| e.start + k * step).collect()
    }
}

fn on_segment(a: Z2, b: Z2, p: Z2) -> bool {
    (b - a).cross(p - a) == 0 && (p - a).dot(p - b) <= 0
}

/// Counterclockwise convex hull without collinear points.
pub fn convex_hull(points: &[Z2]) -> Vec<Z2> {
    let mut pts: Vec<Z2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Z2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && (lower[lower.len() - 1] - lower[lower.len() - 2]).cross(p - lower[lower.len() - 1]) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Z2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && (upper[upper.len() - 1] - upper[upper.len() - 2]).cross(p - upper[upper.len() - 1]) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Builds the polytope and matches each hull edge to the zigzag class whose
/// homology is its outward normal.
pub fn matching_polytope(
    matchings: &[PerfectMatching],
    sys: &ZigzagSystem,
) -> Result<MatchingPolytope, MatchingError> {
    if matchings.is_empty() {
        return Err(MatchingError::NoMatchings);
    }
    let mut by_height: BTreeMap<Z2, Vec<usize>> = BTreeMap::new();
    for (k, m) in matchings.iter().enumerate() {
        by_height.entry(m.height).or_default().push(k);
    }
    let heights: Vec<Z2> = by_height.keys().copied().collect();
    let hull = convex_hull(&heights);
    if hull.len() < 3 {
        return Err(MatchingError::DegeneratePolytope);
    }
    let mut edges: Vec<Option<HullEdge>> = vec![None; sys.num_classes()];
    let mut area2 = 0;
    let mut boundary = 0;
    for k in 0..hull.len() {
        let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
        area2 += a.cross(b);
        let dir = b - a;
        let length = dir.content();
        boundary += length;
        let normal = Z2::new(dir.y, -dir.x).primitive();
        let class = (0..sys.num_classes())
            .find(|&i| (-sys.eta(i)).primitive() == normal)
            .ok_or(MatchingError::NormalMismatch { normal })?;
        if edges[class].is_some() {
            return Err(MatchingError::NormalMismatch { normal });
        }
        if length != sys.multiplicity(class) as i64 {
            return Err(MatchingError::EdgeLength { class, length, multiplicity: sys.multiplicity(class) });
        }
        edges[class] = Some(HullEdge { class_index: class, normal, length, start: a, end: b });
    }
    let edges: Vec<HullEdge> = edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or(MatchingError::NormalMismatch { normal: -sys.eta(i) }))
        .collect::<Result<_, _>>()?;
    for &c in &hull {
        let count = by_height[&c].len();
        if count != 1 {
            return Err(MatchingError::CornerNotUnique { point: c, count });
        }
    }
    let interior = (area2 - boundary + 2) / 2;
    Ok(MatchingPolytope {
        points: by_height.into_iter().collect(),
        hull,
        edges,
        boundary_points: boundary,
        interior_points: interior,
        area2,
    })
}

/// The corner and boundary matchings along the edge of one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerStructure {
    pub class_index: usize,
    /// Matching index of the corner containing every zig of the class.
    pub zig_corner: usize,
    /// Matching index of the corner containing every zag of the class.
    pub zag_corner: usize,
    /// Arrows shared by both corners.
    pub junction: Vec<usize>,
    /// Matching indices of all matchings on the closed edge, indexed by the
    /// bitmask of cycles contributing their zigs.
    pub edge_matchings: Vec<usize>,
}

/// Checks the corner and boundary description of one hull edge.
pub fn corner_structure(
    matchings: &[PerfectMatching],
    polytope: &MatchingPolytope,
    sys: &ZigzagSystem,
    i: usize,
) -> Result<CornerStructure, MatchingError> {
    let fail = |detail: String| MatchingError::CornerStructure { class: i, detail };
    let cycles: Vec<_> = (0..sys.multiplicity(i)).map(|j| sys.cycle(i, j)).collect();
    let zigs: BTreeSet<usize> = cycles.iter().flat_map(|c| c.zigs.iter().copied()).collect();
    let zags: BTreeSet<usize> = cycles.iter().flat_map(|c| c.zags.iter().copied()).collect();
    let at = |h: Z2| polytope.points.iter().find(|(p, _)| *p == h).map(|(_, m)| m.clone()).unwrap_or_default();
    let edge = &polytope.edges[i];
    let (s, t) = (at(edge.start)[0], at(edge.end)[0]);
    let holds = |k: usize, set: &BTreeSet<usize>| set.iter().all(|&e| matchings[k].contains(e));
    let (zig_corner, zag_corner) = if holds(s, &zigs) && holds(t, &zags) {
        (s, t)
    } else if holds(t, &zigs) && holds(s, &zags) {
        (t, s)
    } else {
        return Err(fail("edge corners do not contain the zigs and zags of the class".into()));
    };
    let pz: BTreeSet<usize> = matchings[zig_corner].edges.iter().copied().collect();
    let pg: BTreeSet<usize> = matchings[zag_corner].edges.iter().copied().collect();
    let junction: BTreeSet<usize> = pz.intersection(&pg).copied().collect();
    let on_cycles: BTreeSet<usize> = zigs.union(&zags).copied().collect();
    if !junction.is_disjoint(&on_cycles) {
        return Err(fail("shared arrows of the two corners meet a zigzag cycle of the class".into()));
    }
    if pz != junction.union(&zigs).copied().collect() {
        return Err(fail("zig corner is not the shared arrows plus all zigs".into()));
    }
    if pg != junction.union(&zags).copied().collect() {
        return Err(fail("zag corner is not the shared arrows plus all zags".into()));
    }
    let m = cycles.len();
    let mut edge_matchings = Vec::with_capacity(1 << m);
    for mask in 0..(1usize << m) {
        let mut set: BTreeSet<usize> = junction.clone();
        for (j, c) in cycles.iter().enumerate() {
            let part = if mask >> j & 1 == 1 { &c.zigs } else { &c.zags };
            set.extend(part.iter().copied());
        }
        let edges: Vec<usize> = set.into_iter().collect();
        let k = matchings
            .iter()
            .position(|p| p.edges == edges)
            .ok_or_else(|| fail(format!("arrow set for cycle mask {mask:b} is not a perfect matching")))?;
        edge_matchings.push(k);
    }
    let mut expected: Vec<usize> = polytope
        .edge_points(i)
        .into_iter()
        .flat_map(|h| at(h))
        .collect();
    expected.sort_unstable();
    let mut found = edge_matchings.clone();
    found.sort_unstable();
    found.dedup();
    if found.len() != edge_matchings.len() {
        return Err(fail("two cycle masks give the same matching".into()));
    }
    if found != expected {
        return Err(fail("matchings on the edge differ from the zig/zag combinations".into()));
    }
    Ok(CornerStructure { class_index: i, zig_corner, zag_corner, junction: junction.into_iter().collect(), edge_matchings })
}

/// Matchings with heights, the polytope, and the corners `P_0, P_1, …` with
/// `P_i` the zig corner and `P_{i+1}` the zag corner of class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingData {
    pub matchings: Vec<PerfectMatching>,
    pub basis: HomologyBasis,
    pub polytope: MatchingPolytope,
    pub structures: Vec<CornerStructure>,
    /// Matching index of each corner `P_i`.
    pub corners: Vec<usize>,
}

impl MatchingData {
    pub fn new(d: &Dimer, sys: &ZigzagSystem) -> Result<MatchingData, MatchingError> {
        let sets = enumerate_perfect_matchings(d);
        let Some(p0) = sets.first().cloned() else { return Err(MatchingError::NoMatchings) };
        let basis = HomologyBasis::new(d)?;
        let matchings: Vec<PerfectMatching> = sets
            .into_iter()
            .map(|edges| {
                let height = matching_height(&basis, d.num_arrows(), &edges, &p0);
                PerfectMatching { edges, height }
            })
            .collect();
        let polytope = matching_polytope(&matchings, sys)?;
        let structures: Vec<CornerStructure> = (0..sys.num_classes())
            .map(|i| corner_structure(&matchings, &polytope, sys, i))
            .collect::<Result<_, _>>()?;
        let n = structures.len();
        for i in 0..n {
            if structures[i].zag_corner != structures[(i + 1) % n].zig_corner {
                return Err(MatchingError::CornerStructure {
                    class: i,
                    detail: "zag corner differs from the zig corner of the next class".into(),
                });
            }
        }
        let corners = structures.iter().map(|s| s.zig_corner).collect();
        Ok(MatchingData { matchings, basis, polytope, structures, corners })
    }

    pub fn kind(&self, k: usize) -> MatchingKind {
        self.polytope.kind_of(self.matchings[k].height)
    }

    /// Corner matching `P_i`, index taken cyclically.
    pub fn corner(&self, i: i64) -> &PerfectMatching {
        let n = self.corners.len() as i64;
        &self.matchings[self.corners[i.rem_euclid(n) as usize]]
    }

    /// Boundary matchings that are not corners.
    pub fn strict_boundary(&self) -> Vec<usize> {
        (0..self.matchings.len()).filter(|&k| self.kind(k) == MatchingKind::Boundary).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin;

    fn data(name: &str) -> (Dimer, ZigzagSystem, MatchingData) {
        let d = builtin(name).unwrap();
        let sys = ZigzagSystem::new(&d, 0).unwrap();
        let md = MatchingData::new(&d, &sys).unwrap();
        (d, sys, md)
    }

    #[test]
    fn c3_has_three_corner_matchings() {
        let (_, _, md) = data("c3");
        let sets: Vec<_> = md.matchings.iter().map(|m| m.edges.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1], vec![2]]);
        assert_eq!((md.polytope.boundary_points, md.polytope.interior_points, md.polytope.area2), (3, 0, 1));
    }

    #[test]
    fn conifold_is_unit_square() {
        let (_, _, md) = data("conifold");
        assert_eq!(md.matchings.len(), 4);
        assert_eq!((md.polytope.boundary_points, md.polytope.interior_points, md.polytope.area2), (4, 0, 2));
    }

    #[test]
    fn spp_boundary_matchings() {
        let (d, _, md) = data("spp");
        let names: Vec<Vec<String>> = md.strict_boundary().iter().map(|&k| d.word_ids(&md.matchings[k].edges)).collect();
        assert_eq!(names, vec![vec!["a".to_string(), "e".to_string()], vec!["c".to_string(), "g".to_string()]]);
        assert_eq!((md.polytope.boundary_points, md.polytope.interior_points), (5, 0));
    }

    #[test]
    fn potentials_reproduce_cochain() {
        for name in ["c3", "conifold", "spp"] {
            let (d, _, md) = data(name);
            let p0 = &md.matchings[0];
            for p in &md.matchings {
                let c = difference_cochain(d.num_arrows(), &p.edges, &p0.edges);
                let f = md.basis.potential(&d, &c, p.height);
                for e in 0..d.num_arrows() {
                    assert_eq!(c[e], f[d.head(e)] - f[d.tail(e)] + p.height.dot(d.shift(e)));
                }
            }
        }
    }
}

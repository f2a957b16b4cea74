//! Zigzag cycles, their homology classes, anti-zigzags and strips.
//!
//! A zigzag cycle is traversed as `a₁ b₁ a₂ b₂ …` where `b_l` follows `a_l`
//! on a positive face and `a_{l+1}` follows `b_l` on a negative face. The
//! `a_l` are its zigs and the `b_l` its zags.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dimer::{Dimer, Sign, Word};
use crate::lattice::{angle_cmp, Z2};

/// Errors raised while organising zigzag cycles into ordered classes.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("operation needs lattice shifts on every arrow")]
    MissingShifts,
    #[error("zigzag cycle {cycle} is null-homologous")]
    NullHomologous { cycle: String },
    #[error("zig/zag crossing at arrow {arrow} disagrees with the orientation of the other crossings")]
    OrientationMismatch { arrow: String },
    #[error("class {class}: {found} strips found, {expected} parallel cycles")]
    StripCount { class: usize, found: usize, expected: usize },
    #[error("class {class}: faces along one side of cycle {cycle} lie in different strips")]
    StripSide { class: usize, cycle: String },
    #[error("class {class}: parallel cycles do not close up into a cyclic order")]
    StripOrder { class: usize },
    #[error("class {class}: vertex {vertex} is assigned to two strips")]
    StripConflict { class: usize, vertex: String },
    #[error("base vertex index {0} is out of range")]
    BaseVertex(usize),
}

/// Zig and zag arrows of one orbit, before any ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawZigzag {
    pub zigs: Word,
    pub zags: Word,
}

impl RawZigzag {
    pub fn traversal(&self) -> Word {
        self.zigs.iter().zip(&self.zags).flat_map(|(&a, &b)| [a, b]).collect()
    }
}

/// Orbits of `a ↦ next⁻(next⁺(a))`, each started at its smallest zig.
pub fn zigzag_orbits(d: &Dimer) -> Vec<RawZigzag> {
    let mut seen = vec![false; d.num_arrows()];
    let mut out = Vec::new();
    for start in 0..d.num_arrows() {
        if seen[start] {
            continue;
        }
        let (mut zigs, mut zags) = (Vec::new(), Vec::new());
        let mut a = start;
        loop {
            seen[a] = true;
            let b = d.next_on(a, Sign::Positive);
            zigs.push(a);
            zags.push(b);
            a = d.next_on(b, Sign::Negative);
            if a == start {
                break;
            }
        }
        out.push(RawZigzag { zigs, zags });
    }
    out
}

/// Anti-zigzag of a cycle in traversal order: the complementary arcs of the
/// faces of the given sign along the cycle.
pub fn anti_zigzag(d: &Dimer, z: &RawZigzag, sign: Sign) -> Word {
    let len = z.zigs.len();
    let mut out = Vec::new();
    for l in (0..len).rev() {
        // positive: face holds a_l then b_l; negative: face holds b_l then a_{l+1}
        let (first, second) = match sign {
            Sign::Positive => (z.zigs[l], z.zags[l]),
            Sign::Negative => (z.zags[l], z.zigs[(l + 1) % len]),
        };
        let (f, pos) = d.face_of(second, sign);
        let c = &d.faces[f].cycle;
        debug_assert_eq!(c[(pos + c.len() - 1) % c.len()], first);
        for k in 1..c.len() - 1 {
            out.push(c[(pos + k) % c.len()]);
        }
    }
    out
}

/// A zigzag cycle placed in its class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagCycle {
    pub zigs: Word,
    pub zags: Word,
    /// Sum of the shifts of all arrows on the cycle.
    pub homology: Z2,
    /// `i` with `homology = −η_i` (0-based).
    pub class_index: usize,
    /// Position `j` within the parallel family (0-based).
    pub parallel_index: usize,
}

impl ZigzagCycle {
    pub fn raw(&self) -> RawZigzag {
        RawZigzag { zigs: self.zigs.clone(), zags: self.zags.clone() }
    }

    pub fn traversal(&self) -> Word {
        self.raw().traversal()
    }

    pub fn len(&self) -> usize {
        2 * self.zigs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zigs.is_empty()
    }
}

/// A parallel family: all cycles with class `−eta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParallelClass {
    pub eta: Z2,
    /// Cycle indices ordered by parallel index.
    pub cycles: Vec<usize>,
}

impl ParallelClass {
    pub fn multiplicity(&self) -> usize {
        self.cycles.len()
    }
}

/// One closed strip between consecutive parallel cycles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Strip {
    pub faces: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Decomposition of the torus cut along one parallel family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripDecomposition {
    pub class_index: usize,
    pub strips: Vec<Strip>,
    /// `O⁺(Z_{i,j})` for each strip `j`.
    pub plus_boundaries: Vec<Word>,
    /// `O⁻(Z_{i,j+1})` for each strip `j`.
    pub minus_boundaries: Vec<Word>,
    /// Strip index of every vertex.
    pub vertex_strip: Vec<usize>,
}

/// All zigzag data of a torus dimer, ordered into classes and strips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagSystem {
    /// Sorted by (class, parallel index).
    pub cycles: Vec<ZigzagCycle>,
    /// Sorted counterclockwise by the angle of `η_i` in the surface orientation.
    pub classes: Vec<ParallelClass>,
    /// Per arrow: index of the cycle using it as a zig.
    pub zig_cycle: Vec<usize>,
    /// Per arrow: index of the cycle using it as a zag.
    pub zag_cycle: Vec<usize>,
    /// +1 when the face signs agree with the orientation of the shift
    /// coordinates, −1 for a mirrored file.
    pub orientation: i64,
    pub strips: Vec<StripDecomposition>,
    pub base_vertex: usize,
}

fn zig_zag_maps(n: usize, cycles: &[RawZigzag]) -> (Vec<usize>, Vec<usize>) {
    let (mut zig, mut zag) = (vec![usize::MAX; n], vec![usize::MAX; n]);
    for (k, z) in cycles.iter().enumerate() {
        for &a in &z.zigs {
            zig[a] = k;
        }
        for &b in &z.zags {
            zag[b] = k;
        }
    }
    (zig, zag)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl ZigzagSystem {
    /// Extracts, orders and indexes the zigzag cycles of a torus dimer.
    /// `base_vertex` is the vertex placed in strip 0 of every class.
    pub fn new(d: &Dimer, base_vertex: usize) -> Result<ZigzagSystem, StructureError> {
        if !d.has_shifts() {
            return Err(StructureError::MissingShifts);
        }
        if base_vertex >= d.num_vertices() {
            return Err(StructureError::BaseVertex(base_vertex));
        }
        let raw = zigzag_orbits(d);
        let homology: Vec<Z2> = raw.iter().map(|z| d.shift_sum(&z.traversal())).collect();
        if let Some(k) = homology.iter().position(|h| h.is_zero()) {
            return Err(StructureError::NullHomologous { cycle: d.display_word(&raw[k].traversal()) });
        }
        let (zig, zag) = zig_zag_maps(d.num_arrows(), &raw);

        // A zig of Z1 that is a zag of Z2 has det([Z1],[Z2]) < 0 when the
        // positive faces run counterclockwise in the shift coordinates.
        let mut orientation = 0i64;
        for e in 0..d.num_arrows() {
            let s = homology[zig[e]].cross(homology[zag[e]]).signum();
            if s == 0 {
                continue;
            }
            if orientation == 0 {
                orientation = -s;
            } else if orientation != -s {
                return Err(StructureError::OrientationMismatch { arrow: d.arrows[e].id.clone() });
            }
        }
        if orientation == 0 {
            orientation = 1;
        }

        let mut by_class: BTreeMap<Z2, Vec<usize>> = BTreeMap::new();
        for (k, h) in homology.iter().enumerate() {
            by_class.entry(-*h).or_default().push(k);
        }
        let oriented = |v: Z2| if orientation > 0 { v } else { v.reflect() };
        let mut etas: Vec<Z2> = by_class.keys().copied().collect();
        etas.sort_by(|a, b| angle_cmp(oriented(*a), oriented(*b)));

        let mut cycles = Vec::new();
        let mut classes = Vec::new();
        let mut strips = Vec::new();
        for (i, eta) in etas.iter().enumerate() {
            let members = &by_class[eta];
            let (order, decomposition) = order_parallel(d, &raw, members, i, base_vertex)?;
            let mut idx = Vec::new();
            for (j, &k) in order.iter().enumerate() {
                idx.push(cycles.len());
                cycles.push(ZigzagCycle {
                    zigs: raw[k].zigs.clone(),
                    zags: raw[k].zags.clone(),
                    homology: homology[k],
                    class_index: i,
                    parallel_index: j,
                });
            }
            classes.push(ParallelClass { eta: *eta, cycles: idx });
            strips.push(decomposition);
        }
        let raws: Vec<RawZigzag> = cycles.iter().map(|c| c.raw()).collect();
        let (zig_cycle, zag_cycle) = zig_zag_maps(d.num_arrows(), &raws);
        Ok(ZigzagSystem { cycles, classes, zig_cycle, zag_cycle, orientation, strips, base_vertex })
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Number of punctures of the mirror curve: one per zigzag cycle.
    pub fn num_punctures(&self) -> usize {
        self.cycles.len()
    }

    /// `m_i`, the number of cycles in class `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.classes[i].cycles.len()
    }

    /// Cycle `Z_{i,j}`.
    pub fn cycle(&self, i: usize, j: usize) -> &ZigzagCycle {
        &self.cycles[self.classes[i].cycles[j]]
    }

    pub fn eta(&self, i: usize) -> Z2 {
        self.classes[i].eta
    }

    /// Class index modulo the number of classes.
    pub fn wrap(&self, i: i64) -> usize {
        i.rem_euclid(self.classes.len() as i64) as usize
    }
}

/// Orders the cycles of one class so that strip `j` lies between
/// `Z_{i,j}` and `Z_{i,j+1}`, rotated so the base vertex is in strip 0.
fn order_parallel(
    d: &Dimer,
    raw: &[RawZigzag],
    members: &[usize],
    class: usize,
    base_vertex: usize,
) -> Result<(Vec<usize>, StripDecomposition), StructureError> {
    let nf = d.faces.len();
    let mut cut = vec![false; d.num_arrows()];
    for &k in members {
        for e in raw[k].traversal() {
            cut[e] = true;
        }
    }
    let mut dsu = Dsu((0..nf).collect());
    for e in 0..d.num_arrows() {
        if !cut[e] {
            dsu.union(d.face_of(e, Sign::Positive).0, d.face_of(e, Sign::Negative).0);
        }
    }
    let mut comp_id: BTreeMap<usize, usize> = BTreeMap::new();
    let mut face_comp = vec![0; nf];
    for (f, slot) in face_comp.iter_mut().enumerate() {
        let r = dsu.find(f);
        let next = comp_id.len();
        *slot = *comp_id.entry(r).or_insert(next);
    }
    let ncomp = comp_id.len();
    if ncomp != members.len() {
        return Err(StructureError::StripCount { class, found: ncomp, expected: members.len() });
    }
    let side = |k: usize, sign: Sign| -> Result<usize, StructureError> {
        let arrows = match sign {
            Sign::Positive => &raw[k].zigs,
            Sign::Negative => &raw[k].zags,
        };
        let comps: Vec<usize> = arrows.iter().map(|&e| face_comp[d.face_of(e, sign).0]).collect();
        if comps.windows(2).any(|w| w[0] != w[1]) {
            return Err(StructureError::StripSide { class, cycle: d.display_word(&raw[k].traversal()) });
        }
        Ok(comps[0])
    };
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &k in members {
        plus.push(side(k, Sign::Positive)?);
        minus.push(side(k, Sign::Negative)?);
    }
    // Walk: the strip on the positive side of Z_j is on the negative side of Z_{j+1}.
    let m = members.len();
    let mut order = vec![0usize];
    while order.len() < m {
        let cur = *order.last().unwrap();
        let next: Vec<usize> = (0..m).filter(|&q| minus[q] == plus[cur]).collect();
        match next.as_slice() {
            [q] if !order.contains(q) => order.push(*q),
            _ => return Err(StructureError::StripOrder { class }),
        }
    }
    if minus[order[0]] != plus[*order.last().unwrap()] {
        return Err(StructureError::StripOrder { class });
    }

    let nv = d.num_vertices();
    let mut assigned: Vec<Option<usize>> = vec![None; nv];
    let mut assign = |v: usize, comp: usize| -> Result<(), StructureError> {
        match assigned[v] {
            Some(c) if c != comp => Err(StructureError::StripConflict { class, vertex: d.vertices[v].clone() }),
            _ => {
                assigned[v] = Some(comp);
                Ok(())
            }
        }
    };
    let mut plus_words = Vec::new();
    let mut minus_words = Vec::new();
    for pos in 0..m {
        let k = members[order[pos]];
        let k_next = members[order[(pos + 1) % m]];
        let comp = plus[order[pos]];
        let op = anti_zigzag(d, &raw[k], Sign::Positive);
        let om = anti_zigzag(d, &raw[k_next], Sign::Negative);
        for &e in op.iter().chain(&om) {
            assign(d.tail(e), comp)?;
        }
        plus_words.push(op);
        minus_words.push(om);
    }
    for v in 0..nv {
        if assigned[v].is_some() {
            continue;
        }
        let comps: Vec<usize> = d.faces_at(v).into_iter().map(|f| face_comp[f]).collect();
        match comps.first() {
            Some(&c) if comps.iter().all(|&x| x == c) => assigned[v] = Some(c),
            _ => return Err(StructureError::StripConflict { class, vertex: d.vertices[v].clone() }),
        }
    }
    // Strip index = position of its component along the cyclic order.
    let comp_pos: BTreeMap<usize, usize> = (0..m).map(|pos| (plus[order[pos]], pos)).collect();
    let base = comp_pos[&assigned[base_vertex].unwrap()];
    let rot = |pos: usize| (pos + m - base) % m;
    let mut rotated = vec![0; m];
    let mut plus_r = vec![Vec::new(); m];
    let mut minus_r = vec![Vec::new(); m];
    for pos in 0..m {
        rotated[rot(pos)] = members[order[pos]];
        plus_r[rot(pos)] = plus_words[pos].clone();
        minus_r[rot(pos)] = minus_words[pos].clone();
    }
    let vertex_strip: Vec<usize> = assigned.iter().map(|c| rot(comp_pos[&c.unwrap()])).collect();
    let mut strips = vec![Strip { faces: Vec::new(), vertices: Vec::new() }; m];
    for f in 0..nf {
        strips[rot(comp_pos[&face_comp[f]])].faces.push(f);
    }
    for (v, &s) in vertex_strip.iter().enumerate() {
        strips[s].vertices.push(v);
    }
    Ok((
        rotated,
        StripDecomposition {
            class_index: class,
            strips,
            plus_boundaries: plus_r,
            minus_boundaries: minus_r,
            vertex_strip,
        },
    ))
}

/// Checks the parallel/transversal dichotomy: parallel cycles share no
/// arrow; cycles with linearly independent classes share at least one.
pub fn check_parallel_dichotomy(d: &Dimer, sys: &ZigzagSystem) -> Result<(), String> {
    let sets: Vec<std::collections::BTreeSet<usize>> =
        sys.cycles.iter().map(|c| c.traversal().into_iter().collect()).collect();
    for a in 0..sys.cycles.len() {
        for b in a + 1..sys.cycles.len() {
            let shared = sets[a].intersection(&sets[b]).next().is_some();
            let parallel = sys.cycles[a].class_index == sys.cycles[b].class_index;
            let name = |k: usize| d.display_word(&sys.cycles[k].traversal());
            if parallel && shared {
                return Err(format!("parallel cycles {} and {} share an arrow", name(a), name(b)));
            }
            let independent = sys.cycles[a].homology.cross(sys.cycles[b].homology) != 0;
            if independent && !shared {
                return Err(format!("cycles {} and {} with independent classes are disjoint", name(a), name(b)));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin;

    #[test]
    fn c3_cycles_have_length_two() {
        let d = builtin("c3").unwrap();
        let sys = ZigzagSystem::new(&d, 0).unwrap();
        assert_eq!(sys.cycles.len(), 3);
        assert!(sys.cycles.iter().all(|c| c.len() == 2));
        let total: Z2 = sys.cycles.iter().map(|c| c.homology).sum();
        assert_eq!(total, Z2::ZERO);
        assert_eq!(sys.orientation, 1);
    }

    #[test]
    fn c3_anti_zigzag_is_remaining_arrow() {
        let d = builtin("c3").unwrap();
        let raw = zigzag_orbits(&d);
        let z = raw.iter().find(|z| z.zigs == vec![0]).unwrap();
        assert_eq!(z.zags, vec![1]);
        assert_eq!(anti_zigzag(&d, z, Sign::Positive), vec![2]);
    }

    #[test]
    fn mirrored_file_is_detected() {
        let mut file = builtin("c3").unwrap().to_file();
        for a in &mut file.arrows {
            a.shift = a.shift.map(|s| s.reflect());
        }
        let d = Dimer::from_file(&file).unwrap();
        let sys = ZigzagSystem::new(&d, 0).unwrap();
        assert_eq!(sys.orientation, -1);
    }

    #[test]
    fn spp_classes_in_counterclockwise_order() {
        let d = builtin("spp").unwrap();
        let sys = ZigzagSystem::new(&d, 0).unwrap();
        let m: Vec<usize> = (0..4).map(|i| sys.multiplicity(i)).collect();
        assert_eq!(m, vec![1, 1, 2, 1]);
        let etas: Vec<Z2> = (0..4).map(|i| sys.eta(i)).collect();
        assert_eq!(etas, vec![Z2::new(1, 0), Z2::new(0, 1), Z2::new(-1, 0), Z2::new(1, -1)]);
        check_parallel_dichotomy(&d, &sys).unwrap();
        let st = &sys.strips[2];
        assert_eq!(st.strips.len(), 2);
        assert_eq!(st.vertex_strip[0], 0);
    }
}

//! Logarithmic model of symplectic cohomology of the mirror punctured curve.
//!
//! Odd topological classes are integer combinations of arc symbols `p_e`,
//! one per arrow. They enter products only through their pairings with the
//! loops around punctures, so genus cycles are not modeled.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::{is_zero, Coeff};
use crate::dimer::Word;
use crate::e2::Parity;
use crate::model::Model;

/// Punctures are identified with zigzag cycles `Z_{i,j}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "label", rename_all = "snake_case")]
pub enum ShLabel {
    UnitX,
    /// `Σ c_e p_e`, one coefficient per arrow.
    OddMorse { coeffs: Vec<i64> },
    /// `e_Z t_Z^n`.
    E { class: usize, parallel: usize, n: u32 },
    /// `f_Z t_Z^n`.
    F { class: usize, parallel: usize, n: u32 },
}

impl ShLabel {
    pub fn parity(&self) -> Parity {
        match self {
            ShLabel::UnitX | ShLabel::E { .. } => Parity::Even,
            ShLabel::OddMorse { .. } | ShLabel::F { .. } => Parity::Odd,
        }
    }

    pub fn render(&self, m: &Model) -> String {
        match self {
            ShLabel::UnitX => "1".into(),
            ShLabel::OddMorse { coeffs } => {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(e, &c)| match c {
                        1 => format!("p[{}]", m.dimer.arrows[e].id),
                        -1 => format!("-p[{}]", m.dimer.arrows[e].id),
                        _ => format!("{c}p[{}]", m.dimer.arrows[e].id),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ").replace("+ -", "- ")
                }
            }
            ShLabel::E { class, parallel, n } => format!("e[{class},{parallel}]t^{n}"),
            ShLabel::F { class, parallel, n } => format!("f[{class},{parallel}]t^{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShElement<C: Coeff> {
    terms: BTreeMap<ShLabel, C>,
}

impl<C: Coeff> Default for ShElement<C> {
    fn default() -> Self {
        ShElement { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> ShElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(label: ShLabel, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(label, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ShLabel, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, label: &ShLabel) -> C {
        self.terms.get(label).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, label: ShLabel, c: C) {
        if matches!(&label, ShLabel::OddMorse { coeffs } if coeffs.iter().all(|&k| k == 0)) {
            return;
        }
        let entry = self.terms.entry(label.clone()).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if is_zero(entry) {
            self.terms.remove(&label);
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c.clone());
        }
    }

    pub fn scaled(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (l, c) in &self.terms {
            out.add_term(l.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn render(&self, m: &Model) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| if c.is_one() { l.render(m) } else { format!("{c}·({})", l.render(m)) })
            .collect();
        parts.join(" + ")
    }
}

/// `⟨p_e, ℓ_Z⟩`: +1 when `e` is a zig of `Z`, −1 when a zag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PuncturePairing {
    /// Rows are arrows, columns are cycles in system order.
    pub matrix: Vec<Vec<i64>>,
}

impl PuncturePairing {
    pub fn new(m: &Model) -> PuncturePairing {
        let z = &m.zigzags;
        let n = z.num_punctures();
        let matrix = (0..m.dimer.num_arrows())
            .map(|e| {
                let mut row = vec![0; n];
                row[z.zig_cycle[e]] += 1;
                row[z.zag_cycle[e]] -= 1;
                row
            })
            .collect();
        PuncturePairing { matrix }
    }

    /// Pairing vector of `Σ c_e p_e` against every puncture.
    pub fn pair(&self, coeffs: &[i64]) -> Vec<i64> {
        let n = self.matrix.first().map_or(0, Vec::len);
        let mut out = vec![0; n];
        for (row, &c) in self.matrix.iter().zip(coeffs) {
            for (o, &r) in out.iter_mut().zip(row) {
                *o += c * r;
            }
        }
        out
    }

    /// Each row has exactly one +1 and one −1.
    pub fn rows_ok(&self) -> bool {
        self.matrix.iter().all(|row| {
            row.iter().filter(|&&x| x == 1).count() == 1
                && row.iter().filter(|&&x| x == -1).count() == 1
                && row.iter().all(|&x| x.abs() <= 1)
        })
    }
}

/// Generators up to winding `n_max` and the rank of the odd topological part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShBasis {
    pub genus: i64,
    pub num_punctures: usize,
    pub odd_rank: i64,
    pub labels: Vec<ShLabel>,
}

pub fn sh_basis(m: &Model, n_max: u32) -> ShBasis {
    let genus = m.surface.genus;
    let num_punctures = m.surface.punctures;
    let mut labels = vec![ShLabel::UnitX];
    for make in [
        (|class, parallel, n| ShLabel::E { class, parallel, n }) as fn(usize, usize, u32) -> ShLabel,
        |class, parallel, n| ShLabel::F { class, parallel, n },
    ] {
        for (class, c) in m.zigzags.classes.iter().enumerate() {
            for parallel in 0..c.multiplicity() {
                labels.extend((1..=n_max).map(|n| make(class, parallel, n)));
            }
        }
    }
    ShBasis { genus, num_punctures, odd_rank: 2 * genus + num_punctures as i64 - 1, labels }
}

/// The ring structure of the model.
#[derive(Clone, Debug)]
pub struct ShRing {
    pub pairing: PuncturePairing,
    /// Cycle index of `Z_{i,j}`.
    puncture: Vec<Vec<usize>>,
}

impl ShRing {
    pub fn new(m: &Model) -> ShRing {
        ShRing {
            pairing: PuncturePairing::new(m),
            puncture: m.zigzags.classes.iter().map(|c| c.cycles.clone()).collect(),
        }
    }

    /// `⟨c, ℓ_{Z_{i,j}}⟩`.
    pub fn pair_with(&self, coeffs: &[i64], class: usize, parallel: usize) -> i64 {
        self.pairing.pair(coeffs)[self.puncture[class][parallel]]
    }

    fn mul_labels<C: Coeff>(&self, a: &ShLabel, b: &ShLabel) -> ShElement<C> {
        use ShLabel::*;
        match (a, b) {
            (UnitX, x) | (x, UnitX) => ShElement::single(x.clone(), C::one()),
            (E { class: i, parallel: j, n }, E { class: k, parallel: l, n: r }) if (i, j) == (k, l) => {
                ShElement::single(E { class: *i, parallel: *j, n: n + r }, C::one())
            }
            (E { class: i, parallel: j, n }, F { class: k, parallel: l, n: r })
            | (F { class: k, parallel: l, n: r }, E { class: i, parallel: j, n })
                if (i, j) == (k, l) =>
            {
                ShElement::single(F { class: *i, parallel: *j, n: n + r }, C::one())
            }
            (OddMorse { coeffs }, E { class, parallel, n }) | (E { class, parallel, n }, OddMorse { coeffs }) => {
                let k = self.pair_with(coeffs, *class, *parallel);
                ShElement::single(F { class: *class, parallel: *parallel, n: *n }, C::from(k))
            }
            _ => ShElement::zero(),
        }
    }

    /// Bilinear product from the label table.
    pub fn mul<C: Coeff>(&self, a: &ShElement<C>, b: &ShElement<C>) -> ShElement<C> {
        let mut out = ShElement::zero();
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                out.add(&self.mul_labels::<C>(la, lb).scaled(&(ca.clone() * cb.clone())));
            }
        }
        out
    }

    /// `α_i^n = Σ_j e_{Z_{i,j}} t^n`.
    pub fn alpha<C: Coeff>(&self, class: usize, n: u32) -> ShElement<C> {
        self.partial_alpha(class, self.puncture[class].len(), n)
    }

    /// `τ_{i,j}^n = Σ_{l<j} e_{Z_{i,l}} t^n`.
    pub fn partial_alpha<C: Coeff>(&self, class: usize, upto: usize, n: u32) -> ShElement<C> {
        let mut out = ShElement::zero();
        for parallel in 0..upto {
            out.add_term(ShLabel::E { class, parallel, n }, C::one());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ShError {
    #[error("class index {0} out of range")]
    BadClass(usize),
    #[error("no zigzag cycle through the base vertex crosses class {class}")]
    NoTransversal { class: usize },
    #[error("the transversal zigzag path for class {class} never reaches strip {strip}")]
    StripUnreached { class: usize, strip: usize },
    #[error("vertex {0} is unreachable from the base vertex")]
    Unreachable(usize),
}

/// A vertex in strip `j ≥ 1` of class `i`, reached from the base vertex along
/// a zigzag path crossing class `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripPoint {
    pub class: usize,
    pub strip: usize,
    pub vertex: usize,
    pub cycle: usize,
    pub path: Word,
}

/// `p`, `q`, and the classes `ξ_v = Σ p_e` along paths from the base vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistinguishedOdd {
    pub i0: usize,
    /// Arcs incident to the punctures of class `i0`.
    pub p: Vec<i64>,
    /// Arcs incident to the punctures of class `i0 − 1`.
    pub q: Vec<i64>,
    /// Per vertex, the path from the base vertex used for `ξ_v`.
    pub xi_paths: Vec<Word>,
    /// `[class][strip − 1]`.
    pub strip_points: Vec<Vec<StripPoint>>,
}

/// `Σ_{e∈word} p_e`.
pub fn edge_sum(n: usize, word: &[usize]) -> Vec<i64> {
    let mut out = vec![0; n];
    for &e in word {
        out[e] += 1;
    }
    out
}

fn class_arcs(m: &Model, class: usize) -> Vec<i64> {
    let mut out = vec![0; m.dimer.num_arrows()];
    for &k in &m.zigzags.classes[class].cycles {
        for e in m.zigzags.cycles[k].traversal() {
            out[e] += 1;
        }
    }
    out
}

pub fn distinguished_odd(m: &Model, i0: usize) -> Result<DistinguishedOdd, ShError> {
    let z = &m.zigzags;
    let d = &m.dimer;
    if i0 >= z.num_classes() {
        return Err(ShError::BadClass(i0));
    }
    let base = z.base_vertex;
    let xi_paths = d
        .shortest_paths(base)
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or(ShError::Unreachable(v)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut strip_points = Vec::new();
    for class in 0..z.num_classes() {
        let decomposition = &z.strips[class];
        let eta = z.eta(class);
        let (cycle, start) = z
            .cycles
            .iter()
            .enumerate()
            .filter(|(_, c)| c.homology.cross(eta) != 0)
            .find_map(|(k, c)| {
                let t = c.traversal();
                t.iter().position(|&e| d.tail(e) == base).map(|s| (k, s))
            })
            .ok_or(ShError::NoTransversal { class })?;
        let traversal = z.cycles[cycle].traversal();
        let walk: Word = (0..traversal.len()).map(|k| traversal[(start + k) % traversal.len()]).collect();
        let mut points = Vec::new();
        for strip in 1..decomposition.strips.len() {
            let hit = (0..walk.len()).find(|&k| decomposition.vertex_strip[d.head(walk[k])] == strip);
            let k = hit.ok_or(ShError::StripUnreached { class, strip })?;
            points.push(StripPoint { class, strip, vertex: d.head(walk[k]), cycle, path: walk[..=k].to_vec() });
        }
        strip_points.push(points);
    }
    Ok(DistinguishedOdd {
        i0,
        p: class_arcs(m, i0),
        q: class_arcs(m, z.wrap(i0 as i64 - 1)),
        xi_paths,
        strip_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin;
    use crate::Q;
    use num_traits::One;

    fn model(name: &str) -> Model {
        Model::new(&builtin(name).unwrap(), 0).unwrap()
    }

    #[test]
    fn odd_ranks() {
        for (name, rank) in [("c3", 2), ("conifold", 3), ("spp", 4)] {
            let m = model(name);
            let b = sh_basis(&m, 2);
            assert_eq!(b.odd_rank, rank);
            assert_eq!(b.odd_rank, m.dimer.num_vertices() as i64 + 1);
        }
        let b = sh_basis(&model("c3"), 2);
        assert_eq!(b.labels.len(), 1 + 6 + 6);
    }

    #[test]
    fn pairing_rows_and_boundary_sum() {
        for name in ["c3", "conifold", "spp"] {
            let m = model(name);
            let p = PuncturePairing::new(&m);
            assert!(p.rows_ok());
            for e in 0..m.dimer.num_arrows() {
                let mut c = vec![0; m.dimer.num_arrows()];
                c[e] = 3;
                assert_eq!(p.pair(&c).iter().sum::<i64>(), 0);
            }
        }
    }

    #[test]
    fn table_examples() {
        let m = model("spp");
        let r = ShRing::new(&m);
        let e = |parallel, n| ShElement::<Q>::single(ShLabel::E { class: 2, parallel, n }, Q::one());
        assert_eq!(r.mul(&e(0, 1), &e(0, 2)), e(0, 3));
        assert!(r.mul(&e(0, 1), &e(1, 1)).is_zero());
    }

    #[test]
    fn xi_at_base_is_empty() {
        for name in ["c3", "conifold", "spp"] {
            let m = model(name);
            let o = distinguished_odd(&m, 0).unwrap();
            assert!(o.xi_paths[m.zigzags.base_vertex].is_empty());
            for (class, points) in o.strip_points.iter().enumerate() {
                assert_eq!(points.len(), m.zigzags.multiplicity(class) - 1);
            }
        }
    }
}

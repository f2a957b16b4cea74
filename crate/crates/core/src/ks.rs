//! Graded comparison of the symplectic model with the Hochschild page.
//!
//! Each graded piece gets two square matrices: the chosen symplectic basis
//! written in the raw generators of the piece, and the images of that basis
//! written in the page labels. The first must be invertible, the second
//! unimodular.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dimer::Word;
use crate::e2::{e2_piece, gradings, E2Error, E2Label, Grading, OddFrame, Parity};
use crate::hochschild::{
    bv_delta, d0, d1, d2, d_w_by_derivation, d_w_on_generator, matching_derivation, partial_alpha,
    partial_corner, psi, x_alpha_unit, CochainElement, Generator, HochschildError,
};
use crate::lattice::{det, Z2};
use crate::model::Model;
use crate::sh::{distinguished_odd, edge_sum, DistinguishedOdd, ShElement, ShError, ShLabel, ShRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    fn from_bool(ok: bool, why: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail(why())
        }
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail(_) => "FAIL",
            Verdict::Skipped(_) => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
}

impl Check {
    fn new(name: impl Into<String>, verdict: Verdict) -> Check {
        Check { name: name.into(), verdict }
    }
}

/// Chosen basis elements of the symplectic side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum ShGenerator {
    Unit,
    /// `α_i^n`.
    Alpha { class: usize, n: u32 },
    /// `τ_{i,j}^n = Σ_{l<j} e_{Z_{i,l}} t^n`.
    Tau { class: usize, strip: usize, n: u32 },
    Q,
    P,
    /// `ξ_v` at winding zero.
    Xi { vertex: usize },
    /// `α_i^n (aq + bp)`.
    AlphaW { class: usize, n: u32 },
    /// `α_i^n ξ_{v_{i,j}}`.
    AlphaXi { class: usize, strip: usize, n: u32 },
}

impl ShGenerator {
    pub fn render(&self, m: &Model) -> String {
        match *self {
            ShGenerator::Unit => "1".into(),
            ShGenerator::Alpha { class, n } => format!("α[{class}]^{n}"),
            ShGenerator::Tau { class, strip, n } => format!("τ[{class},{strip}]^{n}"),
            ShGenerator::Q => "q".into(),
            ShGenerator::P => "p".into(),
            ShGenerator::Xi { vertex } => format!("ξ[{}]", m.dimer.vertices[vertex]),
            ShGenerator::AlphaW { class, n } => format!("α[{class}]^{n}·(aq+bp)"),
            ShGenerator::AlphaXi { class, strip, n } => format!("α[{class}]^{n}·ξ[{class},{strip}]"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum KsError {
    #[error(transparent)]
    E2(#[from] E2Error),
    #[error(transparent)]
    Sh(#[from] ShError),
    #[error("n_max must be at least 1")]
    NMax,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KsConfig {
    pub n_max: u32,
    pub i0: usize,
    pub ab: Option<(i64, i64)>,
}

impl Default for KsConfig {
    fn default() -> Self {
        KsConfig { n_max: 10, i0: 0, ab: None }
    }
}

/// Everything the comparison needs, built once.
pub struct KsContext<'a> {
    pub model: &'a Model,
    pub frame: OddFrame,
    pub odd: DistinguishedOdd,
    pub ring: ShRing,
}

impl<'a> KsContext<'a> {
    pub fn new(m: &'a Model, i0: usize, ab: Option<(i64, i64)>) -> Result<KsContext<'a>, KsError> {
        Ok(KsContext { model: m, frame: OddFrame::new(m, i0, ab)?, odd: distinguished_odd(m, i0)?, ring: ShRing::new(m) })
    }

    /// Chosen symplectic basis of one graded piece.
    pub fn sh_generators(&self, g: Grading) -> Vec<ShGenerator> {
        let m = self.model;
        match (g.parity, g.class) {
            (Parity::Even, None) => vec![ShGenerator::Unit],
            (Parity::Odd, None) => {
                let mut out = vec![ShGenerator::Q, ShGenerator::P];
                let base = m.zigzags.base_vertex;
                out.extend((0..m.dimer.num_vertices()).filter(|&v| v != base).map(|vertex| ShGenerator::Xi { vertex }));
                out
            }
            (Parity::Even, Some(class)) => {
                let n = g.winding;
                let mut out = vec![ShGenerator::Alpha { class, n }];
                out.extend((1..m.zigzags.multiplicity(class)).map(|strip| ShGenerator::Tau { class, strip, n }));
                out
            }
            (Parity::Odd, Some(class)) => {
                let n = g.winding;
                let mut out = vec![ShGenerator::AlphaW { class, n }];
                out.extend((1..m.zigzags.multiplicity(class)).map(|strip| ShGenerator::AlphaXi { class, strip, n }));
                out
            }
        }
    }

    fn odd_morse(&self, coeffs: Vec<i64>) -> ShElement<i64> {
        ShElement::single(ShLabel::OddMorse { coeffs }, 1)
    }

    fn xi_coeffs(&self, path: &[usize]) -> Vec<i64> {
        edge_sum(self.model.dimer.num_arrows(), path)
    }

    fn strip_path(&self, class: usize, strip: usize) -> &Word {
        &self.odd.strip_points[class][strip - 1].path
    }

    /// The generator as an element of the symplectic model.
    pub fn sh_element(&self, gen: ShGenerator) -> ShElement<i64> {
        match gen {
            ShGenerator::Unit => ShElement::single(ShLabel::UnitX, 1),
            ShGenerator::Alpha { class, n } => self.ring.alpha(class, n),
            ShGenerator::Tau { class, strip, n } => self.ring.partial_alpha(class, strip, n),
            ShGenerator::Q => self.odd_morse(self.odd.q.clone()),
            ShGenerator::P => self.odd_morse(self.odd.p.clone()),
            ShGenerator::Xi { vertex } => self.odd_morse(self.xi_coeffs(&self.odd.xi_paths[vertex])),
            ShGenerator::AlphaW { class, n } => {
                let (a, b) = (self.frame.a, self.frame.b);
                let w: Vec<i64> = self.odd.q.iter().zip(&self.odd.p).map(|(q, p)| a * q + b * p).collect();
                self.ring.mul(&self.ring.alpha(class, n), &self.odd_morse(w))
            }
            ShGenerator::AlphaXi { class, strip, n } => {
                let xi = self.odd_morse(self.xi_coeffs(self.strip_path(class, strip)));
                self.ring.mul(&self.ring.alpha(class, n), &xi)
            }
        }
    }

    /// Coordinates in the raw generators of the piece: `e_Z t^n` or
    /// `f_Z t^n` along a class, pairings with all punctures but the last at
    /// odd winding zero. `None` when the raw coordinates are not modeled.
    pub fn sh_coordinates(&self, g: Grading, gen: ShGenerator) -> Option<Vec<i64>> {
        let m = self.model;
        let x = self.sh_element(gen);
        match (g.parity, g.class) {
            (Parity::Even, None) => Some(vec![x.coefficient(&ShLabel::UnitX)]),
            (Parity::Odd, None) => {
                if m.surface.genus != 0 {
                    return None;
                }
                let (label, c) = x.terms().next()?;
                let ShLabel::OddMorse { coeffs } = label else { return None };
                let mut v: Vec<i64> = self.ring.pairing.pair(coeffs).iter().map(|k| k * c).collect();
                v.pop();
                Some(v)
            }
            (parity, Some(class)) => Some(
                (0..m.zigzags.multiplicity(class))
                    .map(|parallel| {
                        let label = match parity {
                            Parity::Even => ShLabel::E { class, parallel, n: g.winding },
                            Parity::Odd => ShLabel::F { class, parallel, n: g.winding },
                        };
                        x.coefficient(&label)
                    })
                    .collect(),
            ),
        }
    }

    /// `Σ_{e∈path} (Θ_{h(e)} − Θ_{t(e)})` with the base term dropped, at
    /// winding zero or multiplied by `x_{η_i}^n`.
    fn telescope(&self, path: &[usize], along: Option<(usize, u32)>) -> BTreeMap<E2Label, i64> {
        let m = self.model;
        let d = &m.dimer;
        let base = m.zigzags.base_vertex;
        let label = |v: usize| -> Option<E2Label> {
            match along {
                None => (v != base).then_some(E2Label::ThetaVertex { vertex: v }),
                Some((class, n)) => {
                    let strip = m.zigzags.strips[class].vertex_strip[v];
                    (strip != 0).then_some(E2Label::ThetaStrip { class, strip, n })
                }
            }
        };
        let mut out = BTreeMap::new();
        for &e in path {
            for (v, s) in [(d.head(e), 1), (d.tail(e), -1)] {
                if let Some(l) = label(v) {
                    *out.entry(l).or_insert(0) += s;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Image of a generator in the page labels.
    pub fn ks_image(&self, gen: ShGenerator) -> BTreeMap<E2Label, i64> {
        let one = |l: E2Label| BTreeMap::from([(l, 1)]);
        match gen {
            ShGenerator::Unit => one(E2Label::Unit),
            ShGenerator::Alpha { class, n } => one(E2Label::XEta { class, n }),
            ShGenerator::Tau { class, strip, n } => one(E2Label::Psi { class, strip, n: n - 1 }),
            ShGenerator::Q => one(E2Label::U),
            ShGenerator::P => one(E2Label::V),
            ShGenerator::Xi { vertex } => self.telescope(&self.odd.xi_paths[vertex], None),
            ShGenerator::AlphaW { class, n } => one(E2Label::XW { class, n }),
            ShGenerator::AlphaXi { class, strip, n } => self.telescope(self.strip_path(class, strip), Some((class, n))),
        }
    }
}

/// Images of the even chosen basis up to winding `n_max`.
pub fn ks_even_images(cx: &KsContext, n_max: u32) -> Vec<(ShGenerator, BTreeMap<E2Label, i64>)> {
    images(cx, Parity::Even, n_max)
}

/// Images of the odd chosen basis up to winding `n_max`.
pub fn ks_odd_images(cx: &KsContext, n_max: u32) -> Vec<(ShGenerator, BTreeMap<E2Label, i64>)> {
    images(cx, Parity::Odd, n_max)
}

fn images(cx: &KsContext, parity: Parity, n_max: u32) -> Vec<(ShGenerator, BTreeMap<E2Label, i64>)> {
    gradings(cx.model, parity, n_max)
        .into_iter()
        .flat_map(|g| cx.sh_generators(g))
        .map(|gen| (gen, cx.ks_image(gen)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub grading: Grading,
    /// Raw generator count on the symplectic side (punctures or odd rank).
    pub sh_count: i64,
    pub e2_count: usize,
    pub sh_basis: Vec<String>,
    pub e2_labels: Vec<String>,
    /// Determinant of the chosen basis in raw coordinates.
    pub sh_det: Option<i64>,
    pub ks_matrix: Vec<Vec<i64>>,
    pub ks_det: i64,
    pub verdict: Verdict,
}

fn piece_report(cx: &KsContext, g: Grading) -> PieceReport {
    let m = cx.model;
    let gens = cx.sh_generators(g);
    let labels = e2_piece(m, g);
    let sh_count = match g.class {
        None if g.parity == Parity::Even => 1,
        None => 2 * m.surface.genus + m.surface.punctures as i64 - 1,
        Some(i) => m.zigzags.multiplicity(i) as i64,
    };
    let coords: Option<Vec<Vec<i64>>> = gens.iter().map(|&x| cx.sh_coordinates(g, x)).collect();
    let sh_det = coords.as_ref().filter(|c| c.iter().all(|r| r.len() == c.len())).map(|c| det(c));
    let ks_matrix: Vec<Vec<i64>> = gens
        .iter()
        .map(|&x| {
            let img = cx.ks_image(x);
            labels.iter().map(|l| img.get(l).copied().unwrap_or(0)).collect()
        })
        .collect();
    let stray = gens.iter().find(|&&x| cx.ks_image(x).keys().any(|l| l.grading() != g));
    let square = ks_matrix.len() == labels.len();
    let ks_det = if square { det(&ks_matrix) } else { 0 };
    let verdict = if sh_count != labels.len() as i64 {
        Verdict::Fail(format!("{g}: {sh_count} symplectic generators against {} page labels", labels.len()))
    } else if gens.len() as i64 != sh_count {
        Verdict::Fail(format!("{g}: chosen basis has {} elements, expected {sh_count}", gens.len()))
    } else if let Some(x) = stray {
        Verdict::Fail(format!("{g}: image of {} leaves the piece", x.render(m)))
    } else if !square || ks_det.abs() != 1 {
        Verdict::Fail(format!("{g}: image matrix has determinant {ks_det}"))
    } else {
        match (coords.is_some(), sh_det) {
            (false, _) => Verdict::Skipped(format!("{g}: genus cycles are not modeled")),
            (true, Some(0)) | (true, None) => Verdict::Fail(format!("{g}: chosen symplectic elements are dependent")),
            (true, Some(_)) => Verdict::Pass,
        }
    };
    PieceReport {
        grading: g,
        sh_count,
        e2_count: labels.len(),
        sh_basis: gens.iter().map(|x| x.render(m)).collect(),
        e2_labels: labels.iter().map(|l| l.render(m)).collect(),
        sh_det,
        ks_matrix,
        ks_det,
        verdict,
    }
}

/// Per graded piece, counts and matrices up to winding `n_max`.
pub fn verify_dimension_match(cx: &KsContext, n_max: u32) -> Vec<PieceReport> {
    [Parity::Even, Parity::Odd]
        .into_iter()
        .flat_map(|p| gradings(cx.model, p, n_max))
        .map(|g| piece_report(cx, g))
        .collect()
}

/// Counting identities computed from independent data.
pub fn verify_counts(cx: &KsContext) -> Vec<Check> {
    let m = cx.model;
    let mut out = Vec::new();
    let q0 = m.dimer.num_vertices() as i64;
    let (g, punct) = (m.surface.genus, m.surface.punctures as i64);
    let (b, i) = (m.matchings.polytope.boundary_points, m.matchings.polytope.interior_points);
    out.push(Check::new(
        "odd winding 0: 2g + N − 1 = |Q0| + 1",
        Verdict::from_bool(2 * g + punct - 1 == q0 + 1, || format!("2·{g} + {punct} − 1 ≠ {q0} + 1")),
    ));
    out.push(Check::new(
        "genus equals interior points, punctures equal boundary points",
        Verdict::from_bool(g == i && punct == b, || format!("(g, N) = ({g}, {punct}), (I, B) = ({i}, {b})")),
    ));
    for (k, edge) in m.matchings.polytope.edges.iter().enumerate() {
        let strips = m.zigzags.strips[edge.class_index].strips.len() as i64;
        let cycles = m.zigzags.multiplicity(edge.class_index) as i64;
        out.push(Check::new(
            format!("hull edge {k}: length = strips = punctures of class {}", edge.class_index),
            Verdict::from_bool(edge.length == strips && strips == cycles, || {
                format!("length {}, strips {strips}, punctures {cycles}", edge.length)
            }),
        ));
    }
    out
}

fn check_zero(name: String, c: &CochainElement<i64>, m: &Model) -> Check {
    let verdict = Verdict::from_bool(c.is_zero(), || format!("nonzero: {}", c.render(&m.dimer)));
    Check::new(name, verdict)
}

fn check_hh<T>(name: String, r: Result<T, HochschildError>, f: impl FnOnce(T) -> Verdict) -> Check {
    match r {
        Ok(x) => Check::new(name, f(x)),
        Err(e) => Check::new(name, Verdict::Fail(e.to_string())),
    }
}

/// Sample directions `η_i + η_{i+1}` that lie strictly inside a cone.
fn interior_samples(m: &Model) -> Vec<Z2> {
    let n = m.zigzags.num_classes();
    (0..n)
        .map(|i| m.zigzags.eta(i) + m.zigzags.eta((i + 1) % n))
        .filter(|a| crate::hochschild::alpha_corner(m, *a).is_ok())
        .collect()
}

/// Cocycle suite, closed forms of `d_W`, the unit identity for every perfect
/// matching, the zig-minus-zag chains and the pairing formulas.
pub fn verify_chain_identities(cx: &KsContext) -> Vec<Check> {
    let m = cx.model;
    let d = &m.dimer;
    let z = &m.zigzags;
    let mut out = Vec::new();

    for i in 0..z.num_classes() {
        let eta = z.eta(i);
        out.push(check_hh(format!("d0(x_η{i}) = 0"), x_alpha_unit::<i64>(m, eta), |x| {
            let r = d0(m, &x);
            Verdict::from_bool(r.is_zero(), || r.render(d))
        }));
    }
    for (k, p) in m.matchings.matchings.iter().enumerate() {
        let per_face: Vec<usize> =
            d.faces.iter().map(|f| f.cycle.iter().filter(|&&e| p.contains(e)).count()).collect();
        out.push(Check::new(
            format!("matching {k}: each face has one matched arrow"),
            Verdict::from_bool(per_face.iter().all(|&c| c == 1), || format!("face counts {per_face:?}")),
        ));
        out.push(check_zero(format!("matching {k}: d1(∂_P) = 0"), &d1(m, &matching_derivation(m, &p.edges)), m));
    }
    for k in 0..m.num_corners() as i64 {
        let dp = partial_corner::<i64>(m, k);
        out.push(check_hh(format!("corner {k}: d_W(∂_P) = −W"), d_w_on_generator::<i64>(m, &Generator::Corner(k)), |r| {
            let diff = d_w_by_derivation(m, &dp).minus(d, &r);
            Verdict::from_bool(diff.is_zero(), || diff.render(d))
        }));
    }
    for alpha in interior_samples(m) {
        out.push(check_hh(format!("∂_α for α = {alpha}: d1 = 0 and d_W = −x_α"), partial_alpha::<i64>(m, alpha), |c| {
            let closed = d1(m, &c);
            if !closed.is_zero() {
                return Verdict::Fail(closed.render(d));
            }
            match d_w_on_generator::<i64>(m, &Generator::Alpha(alpha)) {
                Ok(r) => {
                    let diff = d_w_by_derivation(m, &c).minus(d, &r);
                    Verdict::from_bool(diff.is_zero(), || diff.render(d))
                }
                Err(e) => Verdict::Fail(e.to_string()),
            }
        }));
    }
    for (i, s) in z.strips.iter().enumerate() {
        for j in 0..s.strips.len() {
            out.push(check_zero(format!("d2(ψ[{i},{j}]) = 0"), &d2(m, &psi::<i64>(m, i, j).1), m));
        }
    }
    for v in 0..d.num_vertices() {
        let w = m.w_at(v);
        let delta = bv_delta::<i64>(m, w.witness.as_ref().unwrap());
        out.push(check_zero(format!("d2(Δ(Wθ[{}])) = 0", d.vertices[v]), &d2(m, &delta), m));
    }

    for i in 0..z.num_classes() {
        let mut chain = CochainElement::<i64>::zero(1);
        for &k in &z.classes[i].cycles {
            let c = &z.cycles[k];
            chain.add(d, &matching_derivation(m, &c.zigs));
            chain.add(d, &matching_derivation::<i64>(m, &c.zags).neg());
        }
        let expected = partial_corner::<i64>(m, i as i64).minus(d, &partial_corner(m, i as i64 + 1));
        let diff = chain.minus(d, &expected);
        out.push(Check::new(
            format!("class {i}: Σ zigs − Σ zags = ∂_P{i} − ∂_P{}", z.wrap(i as i64 + 1)),
            Verdict::from_bool(diff.is_zero(), || diff.render(d)),
        ));
    }

    out.push(Check::new("puncture pairing: one +1 and one −1 per arrow", Verdict::from_bool(cx.ring.pairing.rows_ok(), String::new)));
    let f = &cx.frame;
    for (name, coeffs, values) in [("p", &cx.odd.p, &f.v), ("q", &cx.odd.q, &f.u)] {
        let mut bad = Vec::new();
        for i in 0..z.num_classes() {
            for j in 0..z.multiplicity(i) {
                let k = cx.ring.pair_with(coeffs, i, j);
                if k != values[i] {
                    bad.push(format!("Z[{i},{j}]: {k} vs {}", values[i]));
                }
            }
        }
        let which = if name == "p" { "V" } else { "U" };
        out.push(Check::new(
            format!("⟨{name}, ℓ_Z[i,j]⟩ = {which}(η_i)"),
            Verdict::from_bool(bad.is_empty(), || bad.join(", ")),
        ));
    }
    let zero_c: Vec<usize> = (0..f.c.len()).filter(|&i| f.c[i] == 0).collect();
    out.push(Check::new(
        format!("c_i = aU(η_i) + bV(η_i) ≠ 0 for (a, b) = ({}, {})", f.a, f.b),
        Verdict::from_bool(zero_c.is_empty(), || format!("vanishes on classes {zero_c:?}")),
    ));
    let base = z.base_vertex;
    out.push(Check::new(
        "ξ at the base vertex maps to 0",
        Verdict::from_bool(cx.ks_image(ShGenerator::Xi { vertex: base }).is_empty() && cx.odd.xi_paths[base].is_empty(), String::new),
    ));
    out
}

/// Ring axioms on the label table and compatibility of the even images
/// with multiplication of central elements.
pub fn verify_ring(cx: &KsContext, n_max: u32) -> Vec<Check> {
    let m = cx.model;
    let z = &m.zigzags;
    let top = n_max.min(2);
    let mut labels = vec![ShLabel::UnitX, ShLabel::OddMorse { coeffs: cx.odd.p.clone() }, ShLabel::OddMorse { coeffs: cx.odd.q.clone() }];
    let mut single = vec![0; m.dimer.num_arrows()];
    single[0] = 1;
    labels.push(ShLabel::OddMorse { coeffs: single });
    for (class, c) in z.classes.iter().enumerate() {
        for parallel in 0..c.multiplicity() {
            for n in 1..=top {
                labels.push(ShLabel::E { class, parallel, n });
                labels.push(ShLabel::F { class, parallel, n });
            }
        }
    }
    let el = |l: &ShLabel| ShElement::<i64>::single(l.clone(), 1);
    let sign = |a: &ShLabel, b: &ShLabel| if a.parity() == Parity::Odd && b.parity() == Parity::Odd { -1 } else { 1 };
    let (mut assoc, mut comm) = (Vec::new(), Vec::new());
    for a in &labels {
        for b in &labels {
            let ab = cx.ring.mul(&el(a), &el(b));
            if ab != cx.ring.mul(&el(b), &el(a)).scaled(&sign(a, b)) {
                comm.push(format!("{} · {}", a.render(m), b.render(m)));
            }
            for c in &labels {
                if cx.ring.mul(&ab, &el(c)) != cx.ring.mul(&el(a), &cx.ring.mul(&el(b), &el(c))) {
                    assoc.push(format!("({} · {}) · {}", a.render(m), b.render(m), c.render(m)));
                }
            }
        }
    }
    let mut out = vec![
        Check::new(format!("associativity on {} labels", labels.len()), Verdict::from_bool(assoc.is_empty(), || assoc[..assoc.len().min(3)].join("; "))),
        Check::new("graded commutativity", Verdict::from_bool(comm.is_empty(), || comm[..comm.len().min(3)].join("; "))),
    ];

    let mut power = Vec::new();
    let mut tau = Vec::new();
    for i in 0..z.num_classes() {
        let eta = z.eta(i);
        for n in 1..n_max {
            for r in 1..=n_max - n {
                let sh = cx.ring.mul(&cx.ring.alpha::<i64>(i, n), &cx.ring.alpha(i, r));
                if sh != cx.ring.alpha(i, n + r) {
                    power.push(format!("α[{i}]^{n}·α[{i}]^{r}"));
                }
                for v in 0..m.dimer.num_vertices() {
                    let x = m.x_alpha_class(v, (n as i64) * eta);
                    let y = m.x_alpha_class(v, (r as i64) * eta);
                    if m.compose(&x, &y) != Some(m.x_alpha_class(v, ((n + r) as i64) * eta)) {
                        power.push(format!("x[{i}]^{n}·x[{i}]^{r} at {}", m.dimer.vertices[v]));
                    }
                }
            }
            for strip in 1..z.multiplicity(i) {
                let lhs = cx.ring.mul(&cx.ring.alpha::<i64>(i, n), &cx.ring.partial_alpha(i, strip, 1));
                if lhs != cx.ring.partial_alpha(i, strip, n + 1) {
                    tau.push(format!("α[{i}]^{n}·τ[{i},{strip}]"));
                }
            }
        }
    }
    out.push(Check::new("KS(α^n·α^r) = x_η^n·x_η^r", Verdict::from_bool(power.is_empty(), || power.join("; "))));
    out.push(Check::new("α^n·τ = τ^(n+1)", Verdict::from_bool(tau.is_empty(), || tau.join("; "))));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeSingularity {
    pub class: usize,
    pub interior_points: i64,
    pub psi_families: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub edges: Vec<EdgeSingularity>,
    pub normalized_area: i64,
    pub fixed_point_depth: i64,
    pub theta_classes: usize,
    pub verdict: Verdict,
}

impl SingularityReport {
    pub fn psi_families(&self) -> usize {
        self.edges.iter().filter(|e| e.psi_families > 0).count()
    }

    pub fn is_smooth(&self) -> bool {
        self.psi_families() == 0 && self.theta_classes == 0
    }
}

/// Compares lattice points of the matching polytope with the `Ψ` and `Θ`
/// classes at winding zero and one.
pub fn singularity_report(m: &Model) -> SingularityReport {
    let poly = &m.matchings.polytope;
    let edges: Vec<EdgeSingularity> = poly
        .edges
        .iter()
        .map(|e| {
            let class = e.class_index;
            let interior_points = poly.edge_points(class).len() as i64 - 2;
            let psi_families = e2_piece(m, Grading::along(Parity::Even, class, 1))
                .iter()
                .filter(|l| matches!(l, E2Label::Psi { n: 0, .. }))
                .count();
            let verdict = Verdict::from_bool(interior_points == psi_families as i64, || {
                format!("{interior_points} interior points, {psi_families} Ψ classes")
            });
            EdgeSingularity { class, interior_points, psi_families, verdict }
        })
        .collect();
    let theta_classes = e2_piece(m, Grading::zero(Parity::Odd))
        .iter()
        .filter(|l| matches!(l, E2Label::ThetaVertex { .. }))
        .count();
    let normalized_area = poly.area2;
    let fixed_point_depth = normalized_area - 1;
    let q0 = m.dimer.num_vertices() as i64;
    let verdict = if let Some(e) = edges.iter().find(|e| e.verdict.is_fail()) {
        e.verdict.clone()
    } else {
        Verdict::from_bool(fixed_point_depth == theta_classes as i64 && normalized_area == q0, || {
            format!("area {normalized_area}, |Q0| = {q0}, {theta_classes} Θ classes")
        })
    };
    SingularityReport { edges, normalized_area, fixed_point_depth, theta_classes, verdict }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KsReport {
    pub name: String,
    pub config: KsConfig,
    pub frame: OddFrame,
    pub counts: Vec<Check>,
    pub pieces: Vec<PieceReport>,
    pub chain: Vec<Check>,
    pub ring: Vec<Check>,
    pub singularity: SingularityReport,
}

impl KsReport {
    /// Every verdict with a short name.
    pub fn verdicts(&self) -> Vec<(String, &Verdict)> {
        let mut out: Vec<(String, &Verdict)> = Vec::new();
        for c in self.counts.iter().chain(&self.chain).chain(&self.ring) {
            out.push((c.name.clone(), &c.verdict));
        }
        for p in &self.pieces {
            out.push((p.grading.to_string(), &p.verdict));
        }
        out.push(("singularity report".into(), &self.singularity.verdict));
        out
    }

    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| !v.is_fail())
    }

    pub fn failures(&self) -> Vec<String> {
        self.verdicts()
            .into_iter()
            .filter_map(|(n, v)| match v {
                Verdict::Fail(why) => Some(format!("{n}: {why}")),
                _ => None,
            })
            .collect()
    }
}

/// Runs every comparison.
pub fn verify(m: &Model, config: KsConfig) -> Result<KsReport, KsError> {
    if config.n_max == 0 {
        return Err(KsError::NMax);
    }
    let cx = KsContext::new(m, config.i0, config.ab)?;
    Ok(KsReport {
        name: m.dimer.name.clone(),
        config,
        frame: cx.frame.clone(),
        counts: verify_counts(&cx),
        pieces: verify_dimension_match(&cx, config.n_max),
        chain: verify_chain_identities(&cx),
        ring: verify_ring(&cx, config.n_max),
        singularity: singularity_report(m),
    })
}

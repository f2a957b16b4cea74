//! The second page of the spectral sequence for the compactly supported
//! Hochschild cohomology, described by labels graded by parity, class and
//! winding.

use std::fmt;

use serde::Serialize;

use crate::model::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A graded piece: winding zero, or winding `n ≥ 1` along `η_class`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Grading {
    pub parity: Parity,
    pub class: Option<usize>,
    pub winding: u32,
}

impl Grading {
    pub fn zero(parity: Parity) -> Grading {
        Grading { parity, class: None, winding: 0 }
    }

    pub fn along(parity: Parity, class: usize, winding: u32) -> Grading {
        Grading { parity, class: Some(class), winding }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            None => write!(f, "{} winding 0", self.parity),
            Some(i) => write!(f, "{} class {} winding {}", self.parity, i, self.winding),
        }
    }
}

/// Basis labels. Strip indices are 0-based and the base vertex lies in
/// strip 0, so `Psi` and `ThetaStrip` start at strip 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "label", rename_all = "snake_case")]
pub enum E2Label {
    Unit,
    /// `x_{η_i}^n`.
    XEta { class: usize, n: u32 },
    /// `x_{η_i}^n Ψ_{i,j}`.
    Psi { class: usize, strip: usize, n: u32 },
    U,
    V,
    /// `x_{η_i}^n W_odd` with `W_odd = aU + bV`.
    XW { class: usize, n: u32 },
    /// `Θ_v` at winding zero.
    ThetaVertex { vertex: usize },
    /// `x_{η_i}^n Θ_v` for any `v` in the strip.
    ThetaStrip { class: usize, strip: usize, n: u32 },
}

impl E2Label {
    pub fn grading(&self) -> Grading {
        match *self {
            E2Label::Unit => Grading::zero(Parity::Even),
            E2Label::XEta { class, n } => Grading::along(Parity::Even, class, n),
            E2Label::Psi { class, n, .. } => Grading::along(Parity::Even, class, n + 1),
            E2Label::U | E2Label::V | E2Label::ThetaVertex { .. } => Grading::zero(Parity::Odd),
            E2Label::XW { class, n } | E2Label::ThetaStrip { class, n, .. } => {
                Grading::along(Parity::Odd, class, n)
            }
        }
    }

    pub fn render(&self, m: &Model) -> String {
        let d = &m.dimer;
        match *self {
            E2Label::Unit => "1".into(),
            E2Label::XEta { class, n } => format!("x[{class}]^{n}"),
            E2Label::Psi { class, strip, n } => format!("x[{class}]^{n}·Ψ[{class},{strip}]"),
            E2Label::U => "U".into(),
            E2Label::V => "V".into(),
            E2Label::XW { class, n } => format!("x[{class}]^{n}·W_odd"),
            E2Label::ThetaVertex { vertex } => format!("Θ[{}]", d.vertices[vertex]),
            E2Label::ThetaStrip { class, strip, n } => format!("x[{class}]^{n}·Θ[{class},{strip}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum E2Error {
    #[error("class index {0} out of range")]
    BadClass(usize),
    #[error("n_max must be at least 1")]
    NMax,
    #[error("no (a, b) with |a|, |b| ≤ {bound} keeps aU(η_i) + bV(η_i) nonzero for every class")]
    NoOddWeight { bound: i64 },
    #[error("(a, b) = ({a}, {b}) gives aU(η_{class}) + bV(η_{class}) = 0")]
    DegenerateWeight { a: i64, b: i64, class: usize },
}

/// The odd degree-one classes `U = ∂_{P_{i0−1}} − ∂_{P_{i0}}` and
/// `V = ∂_{P_{i0}} − ∂_{P_{i0+1}}`, their values on every `η_i`, and the
/// chosen `W_odd = aU + bV` with `c_i = aU(η_i) + bV(η_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddFrame {
    pub i0: usize,
    pub u: Vec<i64>,
    pub v: Vec<i64>,
    pub a: i64,
    pub b: i64,
    pub c: Vec<i64>,
}

/// `deg_{P_from}(x_α) − deg_{P_to}(x_α)` for corner indices.
pub fn corner_weight(m: &Model, from: i64, to: i64, alpha: crate::lattice::Z2) -> i64 {
    let x = m.x_alpha_class(0, alpha);
    let corner = |i: i64| m.matchings.corners[m.zigzags.wrap(i)];
    m.degree(&x, corner(from)) - m.degree(&x, corner(to))
}

/// Candidate `(a, b)` pairs in the box `|a|, |b| ≤ bound`, ordered by
/// `(|a| + |b|, a, b)`.
fn candidates(bound: i64) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = (-bound..=bound)
        .flat_map(|a| (-bound..=bound).map(move |b| (a, b)))
        .filter(|&p| p != (0, 0))
        .collect();
    out.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a, b));
    out
}

impl OddFrame {
    /// Builds the frame for base class `i0`, searching `(a, b)` unless an
    /// override is given.
    pub fn new(m: &Model, i0: usize, ab: Option<(i64, i64)>) -> Result<OddFrame, E2Error> {
        let n = m.zigzags.num_classes();
        if i0 >= n {
            return Err(E2Error::BadClass(i0));
        }
        let i = i0 as i64;
        let etas: Vec<_> = (0..n).map(|k| m.zigzags.eta(k)).collect();
        let u: Vec<i64> = etas.iter().map(|&e| corner_weight(m, i - 1, i, e)).collect();
        let v: Vec<i64> = etas.iter().map(|&e| corner_weight(m, i, i + 1, e)).collect();
        let weight = |a: i64, b: i64| -> Vec<i64> { (0..n).map(|k| a * u[k] + b * v[k]).collect() };
        let (a, b) = match ab {
            Some((a, b)) => {
                if let Some(class) = weight(a, b).iter().position(|&c| c == 0) {
                    return Err(E2Error::DegenerateWeight { a, b, class });
                }
                (a, b)
            }
            None => {
                let bound = n as i64 + 1;
                candidates(bound)
                    .into_iter()
                    .find(|&(a, b)| weight(a, b).iter().all(|&c| c != 0))
                    .ok_or(E2Error::NoOddWeight { bound })?
            }
        };
        Ok(OddFrame { i0, c: weight(a, b), u, v, a, b })
    }
}

/// Number of strips cut out by class `i`.
fn strips(m: &Model, i: usize) -> usize {
    m.zigzags.strips[i].strips.len()
}

/// Labels of one graded piece.
pub fn e2_piece(m: &Model, g: Grading) -> Vec<E2Label> {
    let base = m.zigzags.base_vertex;
    match (g.parity, g.class) {
        (Parity::Even, None) => vec![E2Label::Unit],
        (Parity::Odd, None) => {
            let mut out = vec![E2Label::U, E2Label::V];
            out.extend((0..m.dimer.num_vertices()).filter(|&v| v != base).map(|vertex| E2Label::ThetaVertex { vertex }));
            out
        }
        (Parity::Even, Some(class)) => {
            let n = g.winding;
            let mut out = vec![E2Label::XEta { class, n }];
            out.extend((1..strips(m, class)).map(|strip| E2Label::Psi { class, strip, n: n - 1 }));
            out
        }
        (Parity::Odd, Some(class)) => {
            let n = g.winding;
            let mut out = vec![E2Label::XW { class, n }];
            out.extend((1..strips(m, class)).map(|strip| E2Label::ThetaStrip { class, strip, n }));
            out
        }
    }
}

/// Every graded piece of one parity up to winding `n_max`: winding zero
/// first, then by class and winding.
pub fn gradings(m: &Model, parity: Parity, n_max: u32) -> Vec<Grading> {
    let mut out = vec![Grading::zero(parity)];
    for class in 0..m.zigzags.num_classes() {
        out.extend((1..=n_max).map(|n| Grading::along(parity, class, n)));
    }
    out
}

/// The basis of one parity up to winding `n_max`.
pub fn e2_basis(m: &Model, parity: Parity, n_max: u32) -> Result<Vec<E2Label>, E2Error> {
    if n_max == 0 {
        return Err(E2Error::NMax);
    }
    Ok(gradings(m, parity, n_max).into_iter().flat_map(|g| e2_piece(m, g)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin;

    fn model(name: &str) -> Model {
        Model::new(&builtin(name).unwrap(), 0).unwrap()
    }

    #[test]
    fn c3_even_has_no_psi() {
        let m = model("c3");
        let basis = e2_basis(&m, Parity::Even, 3).unwrap();
        assert_eq!(basis.len(), 10);
        assert!(!basis.iter().any(|l| matches!(l, E2Label::Psi { .. })));
    }

    #[test]
    fn spp_counts() {
        let m = model("spp");
        for n in 1..=4 {
            let even: usize = (0..4).map(|i| e2_piece(&m, Grading::along(Parity::Even, i, n)).len()).sum();
            assert_eq!(even, 5);
        }
        assert_eq!(e2_piece(&m, Grading::zero(Parity::Odd)).len(), 4);
    }

    #[test]
    fn labels_land_in_their_piece() {
        for name in ["c3", "conifold", "spp"] {
            let m = model(name);
            for parity in [Parity::Even, Parity::Odd] {
                for g in gradings(&m, parity, 3) {
                    assert!(e2_piece(&m, g).iter().all(|l| l.grading() == g));
                }
            }
        }
    }

    #[test]
    fn odd_frame_has_nonzero_weights() {
        for name in ["c3", "conifold", "spp"] {
            let m = model(name);
            let f = OddFrame::new(&m, 0, None).unwrap();
            assert!(f.c.iter().all(|&c| c != 0));
            // Both corners of U (resp. V) lie on the hull edge of class i0 − 1 (resp. i0).
            assert_eq!(f.v[f.i0], 0);
            assert_eq!(f.u[m.zigzags.wrap(f.i0 as i64 - 1)], 0);
        }
    }

    #[test]
    fn degenerate_override_is_rejected() {
        let m = model("c3");
        let f = OddFrame::new(&m, 0, None).unwrap();
        // (V(η_0), −U(η_0)) kills class 0.
        let ab = (f.v[0], -f.u[0]);
        if ab != (0, 0) {
            assert!(matches!(OddFrame::new(&m, 0, Some(ab)), Err(E2Error::DegenerateWeight { .. })));
        }
    }
}

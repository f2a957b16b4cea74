//! The four-term Koszul model of the Hochschild complex of the Jacobi
//! algebra, the BV operator on top degree, generator families and the
//! differential induced by `W` on them.
//!
//! Slots and the shape of their coefficients:
//! `Unit(v)` and `Pt(v)` carry cycles at `v`; `X(e)` carries paths parallel
//! to `e`; `XBar(e)` carries paths from `h(e)` to `t(e)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coeff::Coeff;
use crate::dimer::{Dimer, Word};
use crate::jacobi::{hessian, JElement, JacobiError, PathClass};
use crate::lattice::Z2;
use crate::model::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "slot", content = "index", rename_all = "snake_case")]
pub enum Slot {
    Unit(usize),
    X(usize),
    XBar(usize),
    Pt(usize),
}

impl Slot {
    pub fn degree(self) -> u8 {
        match self {
            Slot::Unit(_) => 0,
            Slot::X(_) => 1,
            Slot::XBar(_) => 2,
            Slot::Pt(_) => 3,
        }
    }

    /// Required `(tail, head)` of coefficients on this slot.
    pub fn endpoints(self, d: &Dimer) -> (usize, usize) {
        match self {
            Slot::Unit(v) | Slot::Pt(v) => (v, v),
            Slot::X(e) => (d.tail(e), d.head(e)),
            Slot::XBar(e) => (d.head(e), d.tail(e)),
        }
    }

    pub fn render(self, d: &Dimer) -> String {
        match self {
            Slot::Unit(v) => format!("1[{}]", d.vertices[v]),
            Slot::X(e) => format!("X[{}]", d.arrows[e].id),
            Slot::XBar(e) => format!("X̄[{}]", d.arrows[e].id),
            Slot::Pt(v) => format!("pt[{}]", d.vertices[v]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HochschildError {
    #[error("slot {slot:?} has degree {found}, element has degree {expected}")]
    Degree { slot: Slot, expected: u8, found: u8 },
    #[error("coefficient {class} does not fit slot {slot:?}")]
    Shape { slot: Slot, class: String },
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error("no closed form for this pair")]
    NoClosedForm,
    #[error("no closed form for W acting on this generator")]
    Unsupported,
}

/// Homogeneous element of the Koszul complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainElement<C: Coeff> {
    pub degree: u8,
    terms: BTreeMap<Slot, JElement<C>>,
}

impl<C: Coeff> CochainElement<C> {
    pub fn zero(degree: u8) -> Self {
        CochainElement { degree, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, slot: Slot) -> JElement<C> {
        self.terms.get(&slot).cloned().unwrap_or_default()
    }

    pub fn slots(&self) -> impl Iterator<Item = (&Slot, &JElement<C>)> {
        self.terms.iter()
    }

    /// Adds `x` on `slot`, checking degree and coefficient endpoints.
    pub fn try_add(&mut self, d: &Dimer, slot: Slot, x: &JElement<C>) -> Result<(), HochschildError> {
        if slot.degree() != self.degree {
            return Err(HochschildError::Degree { slot, expected: self.degree, found: slot.degree() });
        }
        let ends = slot.endpoints(d);
        if let Some((c, _)) = x.terms().find(|(c, _)| (c.tail, c.head) != ends) {
            return Err(HochschildError::Shape { slot, class: c.to_string() });
        }
        let entry = self.terms.entry(slot).or_default();
        entry.add(x);
        if entry.is_zero() {
            self.terms.remove(&slot);
        }
        Ok(())
    }

    /// Like [`CochainElement::try_add`] for internally produced terms.
    fn put(&mut self, d: &Dimer, slot: Slot, x: &JElement<C>) {
        self.try_add(d, slot, x).expect("internal cochain terms have the right shape");
    }

    pub fn add(&mut self, d: &Dimer, other: &Self) {
        for (s, x) in &other.terms {
            self.put(d, *s, x);
        }
    }

    pub fn scaled(&self, k: &C) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, x) in &self.terms {
            let y = x.scaled(k);
            if !y.is_zero() {
                out.terms.insert(*s, y);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-C::one())
    }

    pub fn minus(&self, d: &Dimer, other: &Self) -> Self {
        let mut out = self.clone();
        out.add(d, &other.neg());
        out
    }

    pub fn render(&self, d: &Dimer) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(s, x)| format!("({})⊗{}", x.render(d), s.render(d)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn class_of(m: &Model, v: usize, word: &[usize]) -> PathClass {
    if word.is_empty() {
        m.idempotent(v)
    } else {
        m.canonical_form(word).expect("derivative words compose")
    }
}

/// `d₀(m) = Σ_x (x·m − m·x) ⊗ X_x`.
pub fn d0<C: Coeff>(m: &Model, c: &CochainElement<C>) -> CochainElement<C> {
    assert_eq!(c.degree, 0);
    let d = &m.dimer;
    let mut out = CochainElement::zero(1);
    for x in 0..d.num_arrows() {
        let arrow = JElement::single(m.canonical_form(&[x]).unwrap(), C::one());
        let mut coef = arrow.mul(m, &c.get(Slot::Unit(d.tail(x))));
        coef.sub(&c.get(Slot::Unit(d.head(x))).mul(m, &arrow));
        out.put(d, Slot::X(x), &coef);
    }
    out
}

/// `d₁(m ⊗ X_y)` on `X̄_x`: the terms of `∂_x Φ` with `y` replaced by `m`.
pub fn d1<C: Coeff>(m: &Model, c: &CochainElement<C>) -> CochainElement<C> {
    assert_eq!(c.degree, 1);
    let d = &m.dimer;
    let mut out = CochainElement::zero(2);
    for x in 0..d.num_arrows() {
        let mut coef = JElement::zero();
        for y in 0..d.num_arrows() {
            let my = c.get(Slot::X(y));
            if my.is_zero() {
                continue;
            }
            for (k, left, right) in hessian(&m.superpotential, y, x) {
                let l = class_of(m, d.head(y), &left);
                let r = class_of(m, d.head(x), &right);
                coef.add(&my.sandwich(m, &l, &r, &C::from(k)));
            }
        }
        out.put(d, Slot::XBar(x), &coef);
    }
    out
}

/// `d₂(m ⊗ X̄_y) = y·m − m·y`, placed on the vertices where the cycles sit.
pub fn d2<C: Coeff>(m: &Model, c: &CochainElement<C>) -> CochainElement<C> {
    assert_eq!(c.degree, 2);
    let d = &m.dimer;
    let mut out = CochainElement::zero(3);
    for y in 0..d.num_arrows() {
        let my = c.get(Slot::XBar(y));
        if my.is_zero() {
            continue;
        }
        let arrow = JElement::single(m.canonical_form(&[y]).unwrap(), C::one());
        out.put(d, Slot::Pt(d.head(y)), &arrow.mul(m, &my));
        out.put(d, Slot::Pt(d.tail(y)), &my.mul(m, &arrow).neg());
    }
    out
}

/// Applies the differential matching the degree; zero on top degree.
pub fn differential<C: Coeff>(m: &Model, c: &CochainElement<C>) -> CochainElement<C> {
    match c.degree {
        0 => d0(m, c),
        1 => d1(m, c),
        2 => d2(m, c),
        _ => CochainElement::zero(4),
    }
}

/// BV operator on a top-degree cycle `x₁⋯x_k`: deletes one arrow at a time
/// and places the rest of the cycle on `X̄` of the deleted arrow.
pub fn bv_delta<C: Coeff>(m: &Model, cycle: &[usize]) -> CochainElement<C> {
    let d = &m.dimer;
    let mut out = CochainElement::zero(2);
    let k = cycle.len();
    for i in 0..k {
        let rest: Word = (1..k).map(|s| cycle[(i + s) % k]).collect();
        let coef = class_of(m, d.head(cycle[i]), &rest);
        out.put(d, Slot::XBar(cycle[i]), &JElement::single(coef, C::one()));
    }
    out
}

/// BV operator on a top-degree element, using the witnesses of its terms.
pub fn bv_delta_element<C: Coeff>(m: &Model, c: &CochainElement<C>) -> Result<CochainElement<C>, HochschildError> {
    assert_eq!(c.degree, 3);
    let mut out = CochainElement::zero(2);
    for (_, x) in c.slots() {
        for (class, k) in x.terms() {
            let word = match &class.witness {
                Some(w) => w.clone(),
                None => m.with_witness(class.clone(), m.default_cap())?.witness.unwrap(),
            };
            out.add(&m.dimer, &bv_delta::<C>(m, &word).scaled(k));
        }
    }
    Ok(out)
}

/// `f ⊗ 1_v` summed over the vertices where `f` is given.
pub fn unit_element<C: Coeff>(m: &Model, per_vertex: &[PathClass]) -> CochainElement<C> {
    let mut out = CochainElement::zero(0);
    for c in per_vertex {
        out.put(&m.dimer, Slot::Unit(c.tail), &JElement::single(c.clone(), C::one()));
    }
    out
}

/// The identity: idempotents on every unit slot.
pub fn identity<C: Coeff>(m: &Model) -> CochainElement<C> {
    let ids: Vec<PathClass> = (0..m.dimer.num_vertices()).map(|v| m.idempotent(v)).collect();
    unit_element(m, &ids)
}

/// `W ⊗ 1`.
pub fn w_unit<C: Coeff>(m: &Model) -> CochainElement<C> {
    let ws: Vec<PathClass> = (0..m.dimer.num_vertices()).map(|v| m.w_at(v)).collect();
    unit_element(m, &ws)
}

/// `x_α ⊗ 1` at every vertex.
pub fn x_alpha_unit<C: Coeff>(m: &Model, alpha: Z2) -> Result<CochainElement<C>, HochschildError> {
    let xs: Vec<PathClass> =
        (0..m.dimer.num_vertices()).map(|v| m.x_alpha(v, alpha)).collect::<Result<_, _>>()?;
    Ok(unit_element(m, &xs))
}

/// `Σ_{e∈P} e ⊗ X_e` for an arrow set `P`.
pub fn matching_derivation<C: Coeff>(m: &Model, edges: &[usize]) -> CochainElement<C> {
    let mut out = CochainElement::zero(1);
    for &e in edges {
        out.put(&m.dimer, Slot::X(e), &JElement::single(m.canonical_form(&[e]).unwrap(), C::one()));
    }
    out
}

/// The derivation for corner `P_i`.
pub fn partial_corner<C: Coeff>(m: &Model, i: i64) -> CochainElement<C> {
    matching_derivation(m, &m.matchings.corner(i).edges)
}

/// The corner where `x_α` has degree zero, if unique.
pub fn alpha_corner(m: &Model, alpha: Z2) -> Result<usize, HochschildError> {
    if alpha.is_zero() {
        return Err(JacobiError::ZeroDirection.into());
    }
    let degs = m.corner_degrees(&m.x_alpha_class(0, alpha));
    let zeros: Vec<usize> = (0..degs.len()).filter(|&i| degs[i] == 0).collect();
    match zeros.as_slice() {
        [i] => Ok(*i),
        _ => Err(JacobiError::ConeBoundary(alpha).into()),
    }
}

/// `∂_α = Σ_{e∈P} (x_α W⁻¹ e) ⊗ X_e` for the corner `P` where `x_α` vanishes
/// to order zero; rejected when that corner is not unique.
pub fn partial_alpha<C: Coeff>(m: &Model, alpha: Z2) -> Result<CochainElement<C>, HochschildError> {
    let corner = alpha_corner(m, alpha)?;
    let d = &m.dimer;
    let mut out = CochainElement::zero(1);
    for &e in &m.matchings.corner(corner as i64).edges {
        let x = m.x_alpha_class(d.head(e), alpha);
        let xe = m.compose(&x, &m.canonical_form(&[e]).unwrap()).unwrap();
        let q = m.divide_by_w(&xe)?;
        let q = m.with_witness(q, m.default_cap())?;
        out.put(d, Slot::X(e), &JElement::single(q, C::one()));
    }
    Ok(out)
}

/// `θ_v`: the idempotent on the point slot of `v`.
pub fn theta<C: Coeff>(m: &Model, v: usize) -> CochainElement<C> {
    let mut out = CochainElement::zero(3);
    out.put(&m.dimer, Slot::Pt(v), &JElement::single(m.idempotent(v), C::one()));
    out
}

/// `ψ_{i,j}`: BV operator on the positive anti-zigzag bounding strip `j` of
/// class `i`, read from the smallest vertex on it. Returns the vertex too.
pub fn psi<C: Coeff>(m: &Model, i: usize, j: usize) -> (usize, CochainElement<C>) {
    let d = &m.dimer;
    let word = &m.zigzags.strips[i].plus_boundaries[j];
    let start = (0..word.len()).min_by_key(|&k| (d.tail(word[k]), k)).unwrap();
    let rotated: Word = (0..word.len()).map(|k| word[(start + k) % word.len()]).collect();
    (d.tail(rotated[0]), bv_delta(m, &rotated))
}

/// Applies a degree-one cochain as a derivation to a word: replaces each
/// arrow in turn by its coefficient.
pub fn derivation_action<C: Coeff>(m: &Model, c: &CochainElement<C>, word: &[usize]) -> JElement<C> {
    let d = &m.dimer;
    let mut out = JElement::zero();
    for i in 0..word.len() {
        let before = class_of(m, d.tail(word[0]), &word[..i]);
        let after = class_of(m, d.head(word[i]), &word[i + 1..]);
        out.add(&c.get(Slot::X(word[i])).sandwich(m, &after, &before, &C::one()));
    }
    out
}

/// `d_W` on a degree-one cochain computed as `−D(W)` from the derivation.
pub fn d_w_by_derivation<C: Coeff>(m: &Model, c: &CochainElement<C>) -> CochainElement<C> {
    let d = &m.dimer;
    let mut out = CochainElement::zero(0);
    for v in 0..d.num_vertices() {
        let w = m.w_at(v);
        let dw = derivation_action(m, c, w.witness.as_ref().unwrap());
        out.put(d, Slot::Unit(v), &dw.neg());
    }
    out
}

/// Generators with a closed form for `d_W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `x_α ⊗ 1`.
    Central(Z2),
    /// `∂_{P_i}`.
    Corner(i64),
    /// `∂_α`.
    Alpha(Z2),
    /// `θ_v`.
    Theta(usize),
    /// `ψ_{i,j}`; `d_W` has no closed form on it.
    Psi(usize, usize),
}

/// Closed forms: `d_W(∂_P) = −W`, `d_W(∂_α) = −x_α`, `d_W(θ_v) = Δ(Wθ_v)`
/// and zero on central classes.
pub fn d_w_on_generator<C: Coeff>(m: &Model, g: &Generator) -> Result<CochainElement<C>, HochschildError> {
    match g {
        Generator::Central(_) => Ok(CochainElement::zero(0)),
        Generator::Corner(_) => Ok(w_unit::<C>(m).neg()),
        Generator::Alpha(alpha) => Ok(x_alpha_unit::<C>(m, *alpha)?.neg()),
        Generator::Theta(v) => Ok(bv_delta(m, m.w_at(*v).witness.as_ref().unwrap())),
        Generator::Psi(..) => Err(HochschildError::Unsupported),
    }
}

/// The cochain of a generator.
pub fn generator_cochain<C: Coeff>(m: &Model, g: &Generator) -> Result<CochainElement<C>, HochschildError> {
    match g {
        Generator::Central(alpha) => x_alpha_unit(m, *alpha),
        Generator::Corner(i) => Ok(partial_corner(m, *i)),
        Generator::Alpha(alpha) => partial_alpha(m, *alpha),
        Generator::Theta(v) => Ok(theta(m, *v)),
        Generator::Psi(i, j) => Ok(psi(m, *i, *j).1),
    }
}

/// Inputs of the closed-form product formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CupInput {
    Identity,
    /// A central class given at one vertex.
    Central(PathClass),
    /// `∂_P` for the matching with this enumeration index.
    Matching(usize),
    Psi(usize, usize),
}

/// Closed forms: `{∂_P, f} = deg_P(f)·f`, `∂_{P} ∪ ψ_{i,j} =
/// deg_P(x_{η_i})·x_{η_i}θ_v`, the unit law and products of central classes.
pub fn cup_oracle<C: Coeff>(m: &Model, a: &CupInput, b: &CupInput) -> Result<CochainElement<C>, HochschildError> {
    let d = &m.dimer;
    match (a, b) {
        (CupInput::Identity, CupInput::Central(f)) | (CupInput::Central(f), CupInput::Identity) => {
            Ok(unit_element(m, &[f.clone()]))
        }
        (CupInput::Central(f), CupInput::Central(g)) => {
            let fg = m.compose(f, g).ok_or(HochschildError::NoClosedForm)?;
            Ok(unit_element(m, &[fg]))
        }
        (CupInput::Matching(k), CupInput::Central(f)) => {
            let mut out = CochainElement::zero(0);
            out.put(d, Slot::Unit(f.tail), &JElement::single(f.clone(), C::from(m.degree(f, *k))));
            Ok(out)
        }
        (CupInput::Matching(k), CupInput::Psi(i, j)) => {
            let (v, _) = psi::<C>(m, *i, *j);
            let x = m.x_alpha_class(v, m.zigzags.eta(*i));
            let deg = m.degree(&x, *k);
            let mut out = CochainElement::zero(3);
            out.put(d, Slot::Pt(v), &JElement::single(x, C::from(deg)));
            Ok(out)
        }
        _ => Err(HochschildError::NoClosedForm),
    }
}

/// Direct product of a degree-one and a degree-two cochain in the Koszul
/// model: `(a ⊗ X_e) ∪ (b ⊗ X̄_e) = a·b ⊗ pt_{h(e)}`.
pub fn cup_1_2<C: Coeff>(m: &Model, a: &CochainElement<C>, b: &CochainElement<C>) -> CochainElement<C> {
    assert_eq!((a.degree, b.degree), (1, 2));
    let d = &m.dimer;
    let mut out = CochainElement::zero(3);
    for e in 0..d.num_arrows() {
        let prod = a.get(Slot::X(e)).mul(m, &b.get(Slot::XBar(e)));
        out.put(d, Slot::Pt(d.head(e)), &prod);
    }
    out
}

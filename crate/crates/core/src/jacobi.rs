//! The Jacobi algebra of a dimer: superpotential, derivatives, canonical
//! forms of paths, central elements and linear combinations of paths.
//!
//! A path is identified in the Jacobi algebra by its endpoints, its homology
//! class and its degree under the reference corner matching. Products are
//! written in composition order: `a·b` traverses `b` first.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::coeff::Coeff;
use crate::dimer::{Dimer, Sign, Word};
use crate::lattice::Z2;
use crate::model::Model;

/// Signed sum of cyclic words, each in traversal order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclicPoly {
    pub terms: Vec<(i64, Word)>,
}

impl CyclicPoly {
    pub fn display(&self, d: &Dimer) -> String {
        let mut out = String::new();
        for (k, (c, w)) in self.terms.iter().enumerate() {
            let word = d.display_word(w);
            match (k, *c) {
                (0, 1) => out.push_str(&word),
                (0, -1) => out.push_str(&format!("-{word}")),
                (_, 1) => out.push_str(&format!(" + {word}")),
                (_, -1) => out.push_str(&format!(" - {word}")),
                (0, c) => out.push_str(&format!("{c}{word}")),
                (_, c) if c < 0 => out.push_str(&format!(" - {}{word}", -c)),
                (_, c) => out.push_str(&format!(" + {c}{word}")),
            }
        }
        out
    }
}

/// Positive faces with coefficient +1, negative faces with −1.
pub fn superpotential(d: &Dimer) -> CyclicPoly {
    CyclicPoly { terms: d.faces.iter().map(|f| (f.sign.value(), f.cycle.clone())).collect() }
}

/// `∂_e Φ`: for every occurrence of `e` in a term, the rest of the cycle
/// starting right after `e`. Each word is a path from `h(e)` to `t(e)`.
pub fn cyclic_derivative(phi: &CyclicPoly, e: usize) -> Vec<(i64, Word)> {
    let mut out = Vec::new();
    for (c, w) in &phi.terms {
        for (pos, &a) in w.iter().enumerate() {
            if a == e {
                out.push((*c, (1..w.len()).map(|k| w[(pos + k) % w.len()]).collect()));
            }
        }
    }
    out
}

/// Splits each term of `∂_y Φ` at every occurrence of `x`, returning
/// `(coefficient, left, right)` where `left` is traversed after `x` and
/// `right` before it, so the term reads `left · x · right` in composition
/// order.
pub fn hessian(phi: &CyclicPoly, x: usize, y: usize) -> Vec<(i64, Word, Word)> {
    let mut out = Vec::new();
    for (c, w) in cyclic_derivative(phi, y) {
        for (pos, &a) in w.iter().enumerate() {
            if a == x {
                out.push((c, w[pos + 1..].to_vec(), w[..pos].to_vec()));
            }
        }
    }
    out
}

/// A path of the Jacobi algebra up to equality. The witness, when present,
/// is one concrete word in traversal order and is ignored by comparisons.
#[derive(Clone, Debug, Serialize)]
pub struct PathClass {
    pub tail: usize,
    pub head: usize,
    pub h1: Z2,
    /// Degree under the reference corner matching.
    pub w0: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Word>,
}

impl PathClass {
    fn key(&self) -> (usize, usize, Z2, i64) {
        (self.tail, self.head, self.h1, self.w0)
    }

    pub fn is_cycle(&self) -> bool {
        self.tail == self.head
    }

    pub fn without_witness(mut self) -> PathClass {
        self.witness = None;
        self
    }
}

impl PartialEq for PathClass {
    fn eq(&self, o: &Self) -> bool {
        self.key() == o.key()
    }
}

impl Eq for PathClass {}

impl Hash for PathClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl PartialOrd for PathClass {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for PathClass {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key().cmp(&o.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum JacobiError {
    #[error("word is not a composable path")]
    NotComposable,
    #[error("class is not divisible by W: some corner degree is 0")]
    NotDivisible,
    #[error("no witness found within {cap} arrows")]
    NoWitness { cap: usize },
    #[error("no path realizes the class")]
    Nonexistent,
    #[error("direction {0} lies on the boundary of a normal cone")]
    ConeBoundary(Z2),
    #[error("direction must be nonzero")]
    ZeroDirection,
}

/// Outcome of a witness search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "word", rename_all = "snake_case")]
pub enum Realization {
    Found(Word),
    /// The search space was exhausted: no path has this class.
    Nonexistent,
    /// Some branches were cut by the length cap.
    Unknown,
}

impl Model {
    /// Default witness-search cap: four times the number of arrows.
    pub fn default_cap(&self) -> usize {
        4 * self.dimer.num_arrows()
    }

    /// The trivial path at `v`.
    pub fn idempotent(&self, v: usize) -> PathClass {
        PathClass { tail: v, head: v, h1: Z2::ZERO, w0: 0, witness: Some(Vec::new()) }
    }

    /// Class of a nonempty composable word.
    pub fn canonical_form(&self, word: &[usize]) -> Result<PathClass, JacobiError> {
        let (tail, head) = self.dimer.path_endpoints(word).ok_or(JacobiError::NotComposable)?;
        Ok(PathClass {
            tail,
            head,
            h1: self.dimer.shift_sum(word),
            w0: self.matchings.corner(0).degree(word),
            witness: Some(word.to_vec()),
        })
    }

    pub fn path_equal(&self, p: &[usize], q: &[usize]) -> Result<bool, JacobiError> {
        Ok(self.canonical_form(p)? == self.canonical_form(q)?)
    }

    /// Degree of a class under matching `k` (index into the enumeration).
    pub fn degree(&self, c: &PathClass, k: usize) -> i64 {
        let r = &self.relative[k];
        c.w0 + r.height.dot(c.h1) + r.potential[c.head] - r.potential[c.tail]
    }

    /// Degrees under the corners `P_0, P_1, …`.
    pub fn corner_degrees(&self, c: &PathClass) -> Vec<i64> {
        self.matchings.corners.iter().map(|&k| self.degree(c, k)).collect()
    }

    /// `a·b`, defined when `b` ends where `a` starts.
    pub fn compose(&self, a: &PathClass, b: &PathClass) -> Option<PathClass> {
        if b.head != a.tail {
            return None;
        }
        let witness = match (&b.witness, &a.witness) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).copied().collect()),
            _ => None,
        };
        Some(PathClass { tail: b.tail, head: a.head, h1: a.h1 + b.h1, w0: a.w0 + b.w0, witness })
    }

    /// `W_v`, witnessed by the first face through `v`.
    pub fn w_at(&self, v: usize) -> PathClass {
        let f = self.dimer.faces_at(v)[0];
        let word = self.dimer.face_word_at(f, v).expect("face passes through v");
        self.canonical_form(&word).expect("face boundaries compose")
    }

    /// `W_v` for every vertex, checking that all faces through `v` agree.
    pub fn central_w(&self) -> Result<Vec<PathClass>, String> {
        (0..self.dimer.num_vertices())
            .map(|v| {
                let w = self.w_at(v);
                for f in self.dimer.faces_at(v) {
                    let other = self.canonical_form(&self.dimer.face_word_at(f, v).unwrap()).unwrap();
                    if other != w {
                        return Err(format!("faces through {} give different W", self.dimer.vertices[v]));
                    }
                }
                Ok(w)
            })
            .collect()
    }

    /// The class `x_α` at `v`: homology `α`, smallest degree making every
    /// corner degree nonnegative. No witness attached.
    pub fn x_alpha_class(&self, v: usize, alpha: Z2) -> PathClass {
        let w0 = (0..self.num_corners() as i64)
            .map(|i| -self.corner_relative(i).height.dot(alpha))
            .max()
            .unwrap_or(0);
        PathClass { tail: v, head: v, h1: alpha, w0, witness: None }
    }

    /// `x_α` at `v` with a witness word.
    pub fn x_alpha(&self, v: usize, alpha: Z2) -> Result<PathClass, JacobiError> {
        if alpha.is_zero() {
            return Err(JacobiError::ZeroDirection);
        }
        let c = self.x_alpha_class(v, alpha);
        self.with_witness(c, self.default_cap())
    }

    /// Attaches a witness found by [`Model::realize`].
    pub fn with_witness(&self, mut c: PathClass, cap: usize) -> Result<PathClass, JacobiError> {
        match self.realize(&c, cap) {
            Realization::Found(w) => {
                c.witness = Some(w);
                Ok(c)
            }
            Realization::Nonexistent => Err(JacobiError::Nonexistent),
            Realization::Unknown => Err(JacobiError::NoWitness { cap }),
        }
    }

    /// Removes one factor of `W` when every corner degree is positive.
    pub fn divide_by_w(&self, c: &PathClass) -> Result<PathClass, JacobiError> {
        if self.corner_degrees(c).iter().any(|&k| k < 1) {
            return Err(JacobiError::NotDivisible);
        }
        Ok(PathClass { w0: c.w0 - 1, witness: None, ..c.clone() })
    }

    /// `c·W`.
    pub fn times_w(&self, c: &PathClass) -> PathClass {
        self.compose(&self.w_at(c.head), c).expect("W_v composes at v")
    }

    /// Searches for a word in the class. States are (vertex, corner
    /// degrees); every arrow lies in some corner, so the search is finite and
    /// `Nonexistent` is exact whenever no branch hit the cap.
    pub fn realize(&self, c: &PathClass, cap: usize) -> Realization {
        let target = self.corner_degrees(c);
        if target.iter().any(|&k| k < 0) {
            return Realization::Nonexistent;
        }
        let d = &self.dimer;
        let corners: Vec<_> = self.matchings.corners.iter().map(|&k| &self.matchings.matchings[k]).collect();
        let step: Vec<Vec<i64>> = (0..d.num_arrows())
            .map(|e| corners.iter().map(|p| p.contains(e) as i64).collect())
            .collect();
        let start = (c.tail, vec![0i64; target.len()]);
        let goal = (c.head, target.clone());
        let mut parent: HashMap<(usize, Vec<i64>), Option<((usize, Vec<i64>), usize)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([(start, 0usize)]);
        let mut capped = false;
        let mut found = false;
        while let Some((state, len)) = queue.pop_front() {
            if state == goal {
                found = true;
                break;
            }
            if len == cap {
                capped = true;
                continue;
            }
            for e in 0..d.num_arrows() {
                if d.tail(e) != state.0 {
                    continue;
                }
                let next: Vec<i64> = state.1.iter().zip(&step[e]).map(|(a, b)| a + b).collect();
                if next.iter().zip(&target).any(|(a, t)| a > t) {
                    continue;
                }
                let ns = (d.head(e), next);
                if parent.contains_key(&ns) {
                    continue;
                }
                parent.insert(ns.clone(), Some((state.clone(), e)));
                queue.push_back((ns, len + 1));
            }
        }
        if !found {
            return if capped { Realization::Unknown } else { Realization::Nonexistent };
        }
        let mut word = Vec::new();
        let mut cur = goal;
        while let Some(Some((prev, e))) = parent.get(&cur) {
            word.push(*e);
            cur = prev.clone();
        }
        word.reverse();
        Realization::Found(word)
    }
}

/// Every word reachable from `word` by replacing one side of a Jacobi
/// relation with the other, never exceeding `cap` arrows. An
/// under-approximation of the Jacobi class when the cap is small.
pub fn jacobi_reduce_oracle(d: &Dimer, word: &[usize], cap: usize) -> BTreeSet<Word> {
    let relations: Vec<(Word, Word)> = (0..d.num_arrows())
        .map(|e| (d.face_complement(e, Sign::Positive), d.face_complement(e, Sign::Negative)))
        .collect();
    let mut seen: HashSet<Word> = HashSet::from([word.to_vec()]);
    let mut queue = VecDeque::from([word.to_vec()]);
    while let Some(w) = queue.pop_front() {
        for (l, r) in &relations {
            for (from, to) in [(l, r), (r, l)] {
                if from.len() > w.len() || w.len() - from.len() + to.len() > cap {
                    continue;
                }
                for pos in 0..=w.len() - from.len() {
                    if w[pos..pos + from.len()] == from[..] {
                        let mut next = w[..pos].to_vec();
                        next.extend_from_slice(to);
                        next.extend_from_slice(&w[pos + from.len()..]);
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// A finite linear combination of path classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JElement<C: Coeff> {
    terms: BTreeMap<PathClass, C>,
}

impl<C: Coeff> Default for JElement<C> {
    fn default() -> Self {
        JElement { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> JElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(c: PathClass, coef: C) -> Self {
        let mut out = Self::zero();
        out.add_term(c, coef);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathClass, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, c: &PathClass) -> C {
        self.terms.get(c).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, c: PathClass, coef: C) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&c) {
            Some(v) => {
                *v = v.clone() + coef;
                if v.is_zero() {
                    self.terms.remove(&c);
                }
            }
            None => {
                self.terms.insert(c, coef);
            }
        }
    }

    pub fn add(&mut self, other: &Self) {
        for (c, v) in &other.terms {
            self.add_term(c.clone(), v.clone());
        }
    }

    pub fn sub(&mut self, other: &Self) {
        for (c, v) in &other.terms {
            self.add_term(c.clone(), -v.clone());
        }
    }

    pub fn scaled(&self, k: &C) -> Self {
        let mut out = Self::zero();
        for (c, v) in &self.terms {
            out.add_term(c.clone(), v.clone() * k.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&-C::one())
    }

    /// `self · other` in composition order; non-composable pairs vanish.
    pub fn mul(&self, m: &Model, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(ab) = m.compose(a, b) {
                    out.add_term(ab, x.clone() * y.clone());
                }
            }
        }
        out
    }

    /// Multiplies every term on the left by `left` and on the right by
    /// `right`, scaled by `k`.
    pub fn sandwich(&self, m: &Model, left: &PathClass, right: &PathClass, k: &C) -> Self {
        let mut out = Self::zero();
        for (c, v) in &self.terms {
            if let Some(lc) = m.compose(left, c).and_then(|lc| m.compose(&lc, right)) {
                out.add_term(lc, v.clone() * k.clone());
            }
        }
        out
    }

    pub fn render(&self, d: &Dimer) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (c, v) in &self.terms {
            parts.push(format!("{v}·{}", render_class(d, c)));
        }
        parts.join(" + ")
    }
}

/// Human-readable class: its witness word if known, else its invariants.
pub fn render_class(d: &Dimer, c: &PathClass) -> String {
    match &c.witness {
        Some(w) if w.is_empty() => format!("e[{}]", d.vertices[c.tail]),
        Some(w) => d.display_word(w),
        None => format!("[{}→{} {} deg {}]", d.vertices[c.tail], d.vertices[c.head], c.h1, c.w0),
    }
}

impl fmt::Display for PathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}→{} {} deg {}]", self.tail, self.head, self.h1, self.w0)
    }
}

/// All composable words of exactly `len` arrows, in lexicographic order.
pub fn composable_words(d: &Dimer, len: usize) -> Vec<Word> {
    let mut words: Vec<Word> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            for e in 0..d.num_arrows() {
                if w.last().map_or(true, |&l| d.head(l) == d.tail(e)) {
                    let mut x = w.clone();
                    x.push(e);
                    next.push(x);
                }
            }
        }
        words = next;
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::builtin;

    fn model(name: &str) -> Model {
        Model::new(&builtin(name).unwrap(), 0).unwrap()
    }

    #[test]
    fn c3_superpotential_and_derivative() {
        let m = model("c3");
        assert_eq!(m.superpotential.display(&m.dimer), "zyx - yzx");
        let x = m.dimer.arrow_index("x").unwrap();
        let dx = cyclic_derivative(&m.superpotential, x);
        let shown: Vec<_> = dx.iter().map(|(c, w)| (*c, m.dimer.display_word(w))).collect();
        assert_eq!(shown, vec![(1, "zy".to_string()), (-1, "yz".to_string())]);
    }

    #[test]
    fn hessian_splits_around_removed_arrow() {
        let m = model("c3");
        let (x, y) = (0, 1);
        // split_x(∂_y Φ): ∂_y Φ = xz − zx
        let h = hessian(&m.superpotential, x, y);
        let shown: Vec<_> = h
            .iter()
            .map(|(c, l, r)| (*c, m.dimer.display_word(l), m.dimer.display_word(r)))
            .collect();
        assert_eq!(shown, vec![(1, "1".into(), "z".into()), (-1, "z".into(), "1".into())]);
    }

    #[test]
    fn c3_degrees() {
        let m = model("c3");
        let xyz = m.canonical_form(&[0, 1, 2]).unwrap();
        for k in 0..m.matchings.matchings.len() {
            assert_eq!(m.degree(&xyz, k), 1);
        }
    }

    #[test]
    fn realize_rejects_negative_degrees() {
        let m = model("c3");
        let c = PathClass { tail: 0, head: 0, h1: Z2::ZERO, w0: -1, witness: None };
        assert_eq!(m.realize(&c, 10), Realization::Nonexistent);
    }
}

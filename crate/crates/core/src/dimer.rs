//! Dimer models: quivers embedded in a surface with signed faces.
//!
//! Boundary lists in files are in path-composition order with the rightmost
//! arrow first. For a positive face the list is therefore the order in which
//! the arrows are traversed; for a negative face the reversed list is.
//! Internally every face stores its arrows in traversal order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::Z2;

/// An arrow sequence in traversal order (first arrow traversed first).
pub type Word = Vec<usize>;

/// Orientation of a face relative to the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" => Some(Sign::Positive),
            "-" => Some(Sign::Negative),
            _ => None,
        }
    }
}

/// Arrow record of the JSON file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowRecord {
    pub id: String,
    pub tail: String,
    pub head: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Z2>,
}

/// Face record of the JSON file format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub sign: String,
    pub boundary: Vec<String>,
}

/// The on-disk representation of a dimer. Field names are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimerFile {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowRecord>,
    pub faces: Vec<FaceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub shift: Option<Z2>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub sign: Sign,
    /// Arrows in traversal order.
    pub cycle: Word,
}

/// A single failed invariant together with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateVertex { vertex: String },
    DuplicateArrow { arrow: String },
    UnknownVertex { arrow: String, vertex: String },
    UnknownArrow { face: usize, arrow: String },
    BadSign { face: usize, sign: String },
    MissingShift { arrow: String },
    ArrowFaceCount { arrow: String, positive: usize, negative: usize },
    FaceTooShort { face: usize, length: usize },
    NotComposable { face: usize, arrow: String, next: String },
    EulerCharacteristic { euler: i64 },
    FaceShiftSum { face: usize, sum: Z2 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex id {vertex:?}"),
            Violation::DuplicateArrow { arrow } => write!(f, "duplicate arrow id {arrow:?}"),
            Violation::UnknownVertex { arrow, vertex } => {
                write!(f, "arrow {arrow:?} refers to unknown vertex {vertex:?}")
            }
            Violation::UnknownArrow { face, arrow } => {
                write!(f, "face {face} refers to unknown arrow {arrow:?}")
            }
            Violation::BadSign { face, sign } => {
                write!(f, "face {face} has sign {sign:?}; expected \"+\" or \"-\"")
            }
            Violation::MissingShift { arrow } => write!(f, "arrow {arrow:?} has no shift vector"),
            Violation::ArrowFaceCount { arrow, positive, negative } => write!(
                f,
                "arrow {arrow:?} lies on {positive} positive and {negative} negative faces; expected 1 and 1"
            ),
            Violation::FaceTooShort { face, length } => {
                write!(f, "face length < 3: face {face} has {length} arrows")
            }
            Violation::NotComposable { face, arrow, next } => write!(
                f,
                "face {face}: arrow {arrow:?} does not compose with {next:?}"
            ),
            Violation::EulerCharacteristic { euler } => {
                write!(f, "Euler characteristic is {euler}; a torus needs 0")
            }
            Violation::FaceShiftSum { face, sum } => {
                write!(f, "face shift sum ≠ 0: face {face} sums to {sum}")
            }
        }
    }
}

/// Outcome of [`validate_dimer`]: every failed invariant, in a stable order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Which global invariants apply: a torus needs shifts, χ = 0 and
/// contractible faces; the dual surface only carries its cell structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    Torus,
    Abstract,
}

/// Checks every dimer invariant on raw file data and lists each failure with
/// a witness. Never panics on malformed ids.
pub fn validate_dimer(file: &DimerFile) -> ValidationReport {
    validate_with(file, SurfaceKind::Torus)
}

pub(crate) fn validate_with(file: &DimerFile, kind: SurfaceKind) -> ValidationReport {
    let mut out = Vec::new();
    let mut vertex_index = HashMap::new();
    for (i, v) in file.vertices.iter().enumerate() {
        if vertex_index.insert(v.as_str(), i).is_some() {
            out.push(Violation::DuplicateVertex { vertex: v.clone() });
        }
    }
    let mut arrow_index = HashMap::new();
    let mut endpoints: Vec<Option<(usize, usize)>> = Vec::with_capacity(file.arrows.len());
    for (i, a) in file.arrows.iter().enumerate() {
        if arrow_index.insert(a.id.as_str(), i).is_some() {
            out.push(Violation::DuplicateArrow { arrow: a.id.clone() });
        }
        let t = vertex_index.get(a.tail.as_str()).copied();
        let h = vertex_index.get(a.head.as_str()).copied();
        for (end, name) in [(t, &a.tail), (h, &a.head)] {
            if end.is_none() {
                out.push(Violation::UnknownVertex { arrow: a.id.clone(), vertex: name.clone() });
            }
        }
        endpoints.push(t.zip(h));
        if kind == SurfaceKind::Torus && a.shift.is_none() {
            out.push(Violation::MissingShift { arrow: a.id.clone() });
        }
    }

    let mut counts = vec![(0usize, 0usize); file.arrows.len()];
    let mut traversals: Vec<Option<(Sign, Vec<usize>)>> = Vec::with_capacity(file.faces.len());
    for (fi, face) in file.faces.iter().enumerate() {
        let sign = Sign::parse(&face.sign);
        if sign.is_none() {
            out.push(Violation::BadSign { face: fi, sign: face.sign.clone() });
        }
        let mut ids = Vec::with_capacity(face.boundary.len());
        let mut known = true;
        for name in &face.boundary {
            match arrow_index.get(name.as_str()) {
                Some(&e) => ids.push(e),
                None => {
                    known = false;
                    out.push(Violation::UnknownArrow { face: fi, arrow: name.clone() });
                }
            }
        }
        if face.boundary.len() < 3 {
            out.push(Violation::FaceTooShort { face: fi, length: face.boundary.len() });
        }
        if let Some(s) = sign {
            for &e in &ids {
                match s {
                    Sign::Positive => counts[e].0 += 1,
                    Sign::Negative => counts[e].1 += 1,
                }
            }
        }
        traversals.push(match (sign, known) {
            (Some(s), true) => {
                let mut cycle = ids;
                if s == Sign::Negative {
                    cycle.reverse();
                }
                Some((s, cycle))
            }
            _ => None,
        });
    }
    for (e, &(p, n)) in counts.iter().enumerate() {
        if (p, n) != (1, 1) {
            out.push(Violation::ArrowFaceCount {
                arrow: file.arrows[e].id.clone(),
                positive: p,
                negative: n,
            });
        }
    }
    for (fi, t) in traversals.iter().enumerate() {
        let Some((_, cycle)) = t else { continue };
        let k = cycle.len();
        for i in 0..k {
            let (a, b) = (cycle[i], cycle[(i + 1) % k]);
            if let (Some((_, ha)), Some((tb, _))) = (endpoints[a], endpoints[b]) {
                if ha != tb {
                    out.push(Violation::NotComposable {
                        face: fi,
                        arrow: file.arrows[a].id.clone(),
                        next: file.arrows[b].id.clone(),
                    });
                    break;
                }
            }
        }
    }
    if kind == SurfaceKind::Torus {
        let euler =
            file.vertices.len() as i64 - file.arrows.len() as i64 + file.faces.len() as i64;
        if euler != 0 {
            out.push(Violation::EulerCharacteristic { euler });
        }
        for (fi, t) in traversals.iter().enumerate() {
            let Some((_, cycle)) = t else { continue };
            let shifts: Option<Vec<Z2>> = cycle.iter().map(|&e| file.arrows[e].shift).collect();
            if let Some(shifts) = shifts {
                let sum: Z2 = shifts.into_iter().sum();
                if !sum.is_zero() {
                    out.push(Violation::FaceShiftSum { face: fi, sum });
                }
            }
        }
    }
    ValidationReport { violations: out }
}

/// A validated dimer. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dimer {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub faces: Vec<Face>,
    face_of: Vec<[(usize, usize); 2]>,
}

/// Error raised when building a [`Dimer`] from invalid data.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid dimer:\n{0}")]
pub struct InvalidDimer(pub ValidationReport);

impl Dimer {
    /// Builds a torus dimer; all invariants must hold.
    pub fn from_file(file: &DimerFile) -> Result<Dimer, InvalidDimer> {
        Self::build(file, SurfaceKind::Torus)
    }

    pub(crate) fn build(file: &DimerFile, kind: SurfaceKind) -> Result<Dimer, InvalidDimer> {
        let report = validate_with(file, kind);
        if !report.is_valid() {
            return Err(InvalidDimer(report));
        }
        let vindex: HashMap<&str, usize> =
            file.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let aindex: HashMap<&str, usize> =
            file.arrows.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
        let arrows = file
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                tail: vindex[a.tail.as_str()],
                head: vindex[a.head.as_str()],
                shift: a.shift,
            })
            .collect();
        let faces = file
            .faces
            .iter()
            .map(|f| {
                let sign = Sign::parse(&f.sign).expect("validated sign");
                let mut cycle: Word = f.boundary.iter().map(|b| aindex[b.as_str()]).collect();
                if sign == Sign::Negative {
                    cycle.reverse();
                }
                Face { sign, cycle }
            })
            .collect();
        Ok(Self::assemble(file.name.clone(), file.vertices.clone(), arrows, faces))
    }

    fn assemble(name: String, vertices: Vec<String>, arrows: Vec<Arrow>, faces: Vec<Face>) -> Dimer {
        let mut face_of = vec![[(usize::MAX, 0), (usize::MAX, 0)]; arrows.len()];
        for (fi, f) in faces.iter().enumerate() {
            let slot = if f.sign == Sign::Positive { 0 } else { 1 };
            for (pos, &e) in f.cycle.iter().enumerate() {
                face_of[e][slot] = (fi, pos);
            }
        }
        Dimer { name, vertices, arrows, faces, face_of }
    }

    /// Builds a dimer from already-indexed parts and validates it.
    pub(crate) fn from_parts(
        name: String,
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        faces: Vec<Face>,
        kind: SurfaceKind,
    ) -> Result<Dimer, InvalidDimer> {
        let d = Self::assemble(name, vertices, arrows, faces);
        Self::build(&d.to_file(), kind)
    }

    /// Serializes back to the file format; inverse of [`Dimer::from_file`].
    pub fn to_file(&self) -> DimerFile {
        DimerFile {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowRecord {
                    id: a.id.clone(),
                    tail: self.vertices[a.tail].clone(),
                    head: self.vertices[a.head].clone(),
                    shift: a.shift,
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| {
                    let mut ids: Vec<String> =
                        f.cycle.iter().map(|&e| self.arrows[e].id.clone()).collect();
                    if f.sign == Sign::Negative {
                        ids.reverse();
                    }
                    FaceRecord { sign: f.sign.symbol().to_string(), boundary: ids }
                })
                .collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.arrows.len() as i64 + self.faces.len() as i64
    }

    /// True when every arrow carries a lattice shift.
    pub fn has_shifts(&self) -> bool {
        self.arrows.iter().all(|a| a.shift.is_some())
    }

    pub fn tail(&self, e: usize) -> usize {
        self.arrows[e].tail
    }

    pub fn head(&self, e: usize) -> usize {
        self.arrows[e].head
    }

    /// Shift of an arrow. Only valid on torus dimers.
    pub fn shift(&self, e: usize) -> Z2 {
        self.arrows[e].shift.expect("operation requires a torus dimer with shifts")
    }

    /// Face index and position of `e` on its face of the given sign.
    pub fn face_of(&self, e: usize, sign: Sign) -> (usize, usize) {
        self.face_of[e][if sign == Sign::Positive { 0 } else { 1 }]
    }

    /// The arrow traversed after `e` on its face of the given sign.
    pub fn next_on(&self, e: usize, sign: Sign) -> usize {
        let (f, pos) = self.face_of(e, sign);
        let c = &self.faces[f].cycle;
        c[(pos + 1) % c.len()]
    }

    /// The arrow traversed before `e` on its face of the given sign.
    pub fn prev_on(&self, e: usize, sign: Sign) -> usize {
        let (f, pos) = self.face_of(e, sign);
        let c = &self.faces[f].cycle;
        c[(pos + c.len() - 1) % c.len()]
    }

    /// The face cycle of `e` with the given sign, rotated to start right
    /// after `e` and with `e` removed: a path from `h(e)` to `t(e)`.
    pub fn face_complement(&self, e: usize, sign: Sign) -> Word {
        let (f, pos) = self.face_of(e, sign);
        let c = &self.faces[f].cycle;
        (1..c.len()).map(|k| c[(pos + k) % c.len()]).collect()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Checks that consecutive arrows compose; returns the endpoints.
    pub fn path_endpoints(&self, word: &[usize]) -> Option<(usize, usize)> {
        let first = *word.first()?;
        for w in word.windows(2) {
            if self.head(w[0]) != self.tail(w[1]) {
                return None;
            }
        }
        Some((self.tail(first), self.head(*word.last().unwrap())))
    }

    pub fn shift_sum(&self, word: &[usize]) -> Z2 {
        word.iter().map(|&e| self.shift(e)).sum()
    }

    /// Composition-order rendering: rightmost arrow is traversed first.
    pub fn display_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let sep = if self.arrows.iter().all(|a| a.id.chars().count() == 1) { "" } else { "·" };
        word.iter()
            .rev()
            .map(|&e| self.arrows[e].id.as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Arrow ids of a word in traversal order.
    pub fn word_ids(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&e| self.arrows[e].id.clone()).collect()
    }

    /// Parses arrow ids (traversal order) into a word.
    pub fn parse_word(&self, ids: &[&str]) -> Option<Word> {
        ids.iter().map(|id| self.arrow_index(id)).collect()
    }

    /// Vertices visited by a face cycle (tails of its arrows).
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        self.faces[f].cycle.iter().map(|&e| self.tail(e)).collect()
    }

    /// A face boundary rotated to start and end at vertex `v`, if `v` lies on it.
    pub fn face_word_at(&self, f: usize, v: usize) -> Option<Word> {
        let c = &self.faces[f].cycle;
        let pos = c.iter().position(|&e| self.tail(e) == v)?;
        Some((0..c.len()).map(|k| c[(pos + k) % c.len()]).collect())
    }

    /// Faces incident to each vertex, in face order.
    pub fn faces_at(&self, v: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| self.faces[f].cycle.iter().any(|&e| self.tail(e) == v))
            .collect()
    }

    /// Shortest directed path (fewest arrows, lowest arrow indices first)
    /// from `from` to every vertex.
    pub fn shortest_paths(&self, from: usize) -> Vec<Option<Word>> {
        let mut out: Vec<Option<Word>> = vec![None; self.vertices.len()];
        out[from] = Some(Vec::new());
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            let base = out[v].clone().unwrap();
            for (e, a) in self.arrows.iter().enumerate() {
                if a.tail == v && out[a.head].is_none() {
                    let mut w = base.clone();
                    w.push(e);
                    out[a.head] = Some(w);
                    queue.push_back(a.head);
                }
            }
        }
        out
    }
}

/// Checks whether two dimers are isomorphic through a vertex bijection that
/// keeps arrow ids, endpoints and signed face cycles.
pub fn isomorphic(a: &Dimer, b: &Dimer) -> bool {
    if a.num_vertices() != b.num_vertices()
        || a.num_arrows() != b.num_arrows()
        || a.faces.len() != b.faces.len()
    {
        return false;
    }
    let mut map: Vec<Option<usize>> = vec![None; a.num_vertices()];
    let mut used = HashSet::new();
    for arrow in &a.arrows {
        let Some(f) = b.arrow_index(&arrow.id) else { return false };
        for (va, vb) in [(arrow.tail, b.tail(f)), (arrow.head, b.head(f))] {
            match map[va] {
                Some(x) if x != vb => return false,
                Some(_) => {}
                None => {
                    if !used.insert(vb) {
                        return false;
                    }
                    map[va] = Some(vb);
                }
            }
        }
    }
    let canon = |d: &Dimer, f: &Face| -> (Sign, Vec<String>) {
        let ids = d.word_ids(&f.cycle);
        let rot = (0..ids.len())
            .map(|k| ids[k..].iter().chain(&ids[..k]).cloned().collect::<Vec<_>>())
            .min()
            .unwrap_or_default();
        (f.sign, rot)
    };
    let mut fa: Vec<_> = a.faces.iter().map(|f| canon(a, f)).collect();
    let mut fb: Vec<_> = b.faces.iter().map(|f| canon(b, f)).collect();
    fa.sort();
    fb.sort();
    fa == fb
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3_file() -> DimerFile {
        serde_json::from_str(include_str!("../data/c3.json")).unwrap()
    }

    #[test]
    fn c3_is_valid_and_roundtrips() {
        let file = c3_file();
        assert!(validate_dimer(&file).is_valid());
        let d = Dimer::from_file(&file).unwrap();
        assert_eq!(d.to_file(), file);
        assert_eq!(d.faces[1].cycle, vec![0, 2, 1]);
    }

    #[test]
    fn short_face_is_reported() {
        let mut file = c3_file();
        file.faces[0].boundary = vec!["y".into(), "x".into()];
        let r = validate_dimer(&file);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FaceTooShort { face: 0, length: 2 })));
        assert!(r.to_string().contains("face length < 3"));
    }

    #[test]
    fn broken_shift_is_reported() {
        let mut file = c3_file();
        file.arrows[2].shift = Some(Z2::ZERO);
        let r = validate_dimer(&file);
        assert!(r.to_string().contains("face shift sum ≠ 0"));
        assert_eq!(
            r.violations
                .iter()
                .filter(|v| matches!(v, Violation::FaceShiftSum { .. }))
                .count(),
            2
        );
    }

    #[test]
    fn unknown_and_duplicate_ids_do_not_panic() {
        let mut file = c3_file();
        file.arrows[1].id = "x".into();
        file.faces[0].boundary[2] = "w".into();
        file.arrows[0].tail = "nowhere".into();
        let r = validate_dimer(&file);
        assert!(r.violations.contains(&Violation::DuplicateArrow { arrow: "x".into() }));
        assert!(r
            .violations
            .contains(&Violation::UnknownArrow { face: 0, arrow: "w".into() }));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::UnknownVertex { .. })));
    }

    #[test]
    fn display_is_composition_order() {
        let d = Dimer::from_file(&c3_file()).unwrap();
        assert_eq!(d.display_word(&[0, 1, 2]), "zyx");
        assert_eq!(d.face_complement(0, Sign::Positive), vec![1, 2]);
        assert_eq!(d.face_complement(0, Sign::Negative), vec![2, 1]);
    }
}

//! Integer vectors in Z² and small exact integer linear algebra.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A lattice vector, serialized as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Z2 {
    pub x: i64,
    pub y: i64,
}

impl Z2 {
    pub const ZERO: Z2 = Z2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Z2 { x, y }
    }

    pub fn dot(self, other: Z2) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// Determinant of the 2x2 matrix with columns `self`, `other`.
    pub fn cross(self, other: Z2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Lattice length: gcd of the absolute coordinates.
    pub fn content(self) -> i64 {
        self.x.gcd(&self.y)
    }

    /// The primitive vector in the direction of `self` (zero stays zero).
    pub fn primitive(self) -> Z2 {
        let g = self.content();
        if g == 0 {
            self
        } else {
            Z2::new(self.x / g, self.y / g)
        }
    }

    /// Mirror image across the x-axis.
    pub fn reflect(self) -> Z2 {
        Z2::new(self.x, -self.y)
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn rot90(self) -> Z2 {
        Z2::new(-self.y, self.x)
    }
}

impl From<[i64; 2]> for Z2 {
    fn from(v: [i64; 2]) -> Self {
        Z2::new(v[0], v[1])
    }
}

impl From<Z2> for [i64; 2] {
    fn from(v: Z2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Z2 {
    type Output = Z2;
    fn add(self, o: Z2) -> Z2 {
        Z2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Z2 {
    type Output = Z2;
    fn sub(self, o: Z2) -> Z2 {
        Z2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Z2 {
    type Output = Z2;
    fn neg(self) -> Z2 {
        Z2::new(-self.x, -self.y)
    }
}

impl Mul<Z2> for i64 {
    type Output = Z2;
    fn mul(self, v: Z2) -> Z2 {
        Z2::new(self * v.x, self * v.y)
    }
}

impl AddAssign for Z2 {
    fn add_assign(&mut self, o: Z2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl SubAssign for Z2 {
    fn sub_assign(&mut self, o: Z2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Sum for Z2 {
    fn sum<I: Iterator<Item = Z2>>(iter: I) -> Z2 {
        iter.fold(Z2::ZERO, |a, b| a + b)
    }
}

/// Angular order of nonzero vectors, starting at the positive x-axis and
/// increasing counterclockwise.
pub fn angle_cmp(a: Z2, b: Z2) -> Ordering {
    fn half(v: Z2) -> u8 {
        if v.y > 0 || (v.y == 0 && v.x > 0) {
            0
        } else {
            1
        }
    }
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&a.cross(b)))
}

/// Exact determinant of a square integer matrix (fraction-free Bareiss
/// elimination with 128-bit intermediates).
///
/// # Panics
/// Panics if the matrix is not square or an intermediate value overflows.
pub fn det(matrix: &[Vec<i64>]) -> i64 {
    let n = matrix.len();
    if n == 0 {
        return 1;
    }
    assert!(matrix.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    let d = sign * a[n - 1][n - 1];
    i64::try_from(d).expect("determinant overflows i64")
}

/// Reduces a family of integer vectors, each carrying an integer chain, to a
/// basis of the lattice they span: returns `(b1, c1, b2, c2)` where `b1 =
/// (g1, y)` and `b2 = (0, g2)` in Hermite form together with the chains that
/// produce them. Returns `None` if the vectors do not span a rank-2 lattice.
pub fn hermite_basis(mut gens: Vec<(Z2, Vec<i64>)>) -> Option<(Z2, Vec<i64>, Z2, Vec<i64>)> {
    fn combine(a: &(Z2, Vec<i64>), b: &(Z2, Vec<i64>), k: i64) -> (Z2, Vec<i64>) {
        // a - k * b
        (
            a.0 - k * b.0,
            a.1.iter().zip(&b.1).map(|(x, y)| x - k * y).collect(),
        )
    }
    // Euclid on the first coordinate.
    loop {
        let nonzero: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].0.x != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let pivot = *nonzero.iter().min_by_key(|&&i| gens[i].0.x.abs())?;
        for &i in &nonzero {
            if i != pivot {
                let k = Integer::div_floor(&gens[i].0.x, &gens[pivot].0.x);
                gens[i] = combine(&gens[i], &gens[pivot], k);
            }
        }
    }
    let first = (0..gens.len()).find(|&i| gens[i].0.x != 0)?;
    let b1 = gens.swap_remove(first);
    // Euclid on the second coordinate of the rest (all have x = 0).
    loop {
        let nonzero: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].0.y != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let pivot = *nonzero.iter().min_by_key(|&&i| gens[i].0.y.abs())?;
        for &i in &nonzero {
            if i != pivot {
                let k = Integer::div_floor(&gens[i].0.y, &gens[pivot].0.y);
                gens[i] = combine(&gens[i], &gens[pivot], k);
            }
        }
    }
    let second = (0..gens.len()).find(|&i| gens[i].0.y != 0)?;
    let b2 = gens.swap_remove(second);
    Some((b1.0, b1.1, b2.0, b2.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_order_is_counterclockwise_from_x_axis() {
        let mut v = vec![
            Z2::new(0, -1),
            Z2::new(-1, 0),
            Z2::new(1, 1),
            Z2::new(1, 0),
            Z2::new(0, 1),
            Z2::new(1, -1),
        ];
        v.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(
            v,
            vec![
                Z2::new(1, 0),
                Z2::new(1, 1),
                Z2::new(0, 1),
                Z2::new(-1, 0),
                Z2::new(0, -1),
                Z2::new(1, -1)
            ]
        );
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![vec![2, -1, 0], vec![1, 3, 4], vec![0, 5, -2]];
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0
        assert_eq!(det(&m), 2 * (-6 - 20) - 2);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn hermite_basis_recovers_unimodular_lattice() {
        let gens = vec![
            (Z2::new(2, 1), vec![1, 0, 0]),
            (Z2::new(3, 1), vec![0, 1, 0]),
            (Z2::new(0, 0), vec![0, 0, 1]),
        ];
        let (b1, c1, b2, c2) = hermite_basis(gens).unwrap();
        assert_eq!(b1.x.abs(), 1);
        assert_eq!(b2.x, 0);
        assert_eq!(b2.y.abs(), 1);
        let eval = |c: &Vec<i64>| c[0] * Z2::new(2, 1) + c[1] * Z2::new(3, 1);
        assert_eq!(eval(&c1), b1);
        assert_eq!(eval(&c2), b2);
    }
}

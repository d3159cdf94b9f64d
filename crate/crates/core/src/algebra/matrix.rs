use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use super::param::Param;
use super::poly::{Poly, Rational};

/// Coordinates of a vector in the basis `e1, e2, e3`.
pub type PolyVec = [Poly; 3];

pub fn zero_vec() -> PolyVec {
    [Poly::zero(), Poly::zero(), Poly::zero()]
}

/// Basis vector `e_{i+1}`.
pub fn basis(i: usize) -> PolyVec {
    std::array::from_fn(|k| if k == i { Poly::one() } else { Poly::zero() })
}

pub fn vec_is_zero(v: &PolyVec) -> bool {
    v.iter().all(Poly::is_zero)
}

/// Rank-three coefficient array indexed by basis positions.
pub type Tensor3 = [[[Poly; 3]; 3]; 3];

pub fn zero_tensor3() -> Tensor3 {
    std::array::from_fn(|_| std::array::from_fn(|_| zero_vec()))
}

pub fn tensor3_from_fn(mut f: impl FnMut(usize, usize, usize) -> Poly) -> Tensor3 {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| f(i, j, k))))
}

/// A 3×3 matrix of polynomials, indexed `[row][col]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyMatrix {
    entries: [[Poly; 3]; 3],
}

impl PolyMatrix {
    pub fn zero() -> PolyMatrix {
        PolyMatrix::default()
    }

    pub fn identity() -> PolyMatrix {
        PolyMatrix::from_fn(|i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Poly) -> PolyMatrix {
        PolyMatrix {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn from_rows(rows: [[Poly; 3]; 3]) -> PolyMatrix {
        PolyMatrix { entries: rows }
    }

    pub fn diagonal(d: [Poly; 3]) -> PolyMatrix {
        let [a, b, c] = d;
        let mut m = PolyMatrix::zero();
        m.entries[0][0] = a;
        m.entries[1][1] = b;
        m.entries[2][2] = c;
        m
    }

    pub fn rows(&self) -> &[[Poly; 3]; 3] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Poly; 3] {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(|i, j| self.entries[j][i].clone())
    }

    pub fn map(&self, mut f: impl FnMut(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix::from_fn(|i, j| f(&self.entries[i][j]))
    }

    pub fn scale(&self, c: &Rational) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    pub fn substitute(&self, s: &std::collections::BTreeMap<Param, Poly>) -> PolyMatrix {
        self.map(|p| p.substitute(s))
    }

    /// Image of a coordinate vector under the row convention
    /// `M(e_i) = Σ_j M[i][j] e_j`, so `(Mv)_j = Σ_i v_i M[i][j]`.
    pub fn apply(&self, v: &PolyVec) -> PolyVec {
        std::array::from_fn(|j| {
            let mut acc = Poly::zero();
            for (i, vi) in v.iter().enumerate() {
                if !vi.is_zero() && !self.entries[i][j].is_zero() {
                    acc += vi * &self.entries[i][j];
                }
            }
            acc
        })
    }

    /// Positions `(i, j)` where the two matrices differ.
    pub fn diff_positions(&self, other: &PolyMatrix) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if self.entries[i][j] != other.entries[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for PolyMatrix {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.entries[i][j]
    }
}

impl IndexMut<(usize, usize)> for PolyMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.entries[i][j]
    }
}

impl Add<&PolyMatrix> for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(|i, j| &self.entries[i][j] + &rhs.entries[i][j])
    }
}

impl Sub<&PolyMatrix> for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        PolyMatrix::from_fn(|i, j| &self.entries[i][j] - &rhs.entries[i][j])
    }
}

impl serde::Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.entries, s)
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, row) in self.entries.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_convention_apply() {
        let a = Poly::var(Param::alpha());
        let mut m = PolyMatrix::zero();
        m[(0, 2)] = a.clone();
        // M(e1) = alpha e3
        assert_eq!(m.apply(&basis(0)), [Poly::zero(), Poly::zero(), a]);
        assert!(vec_is_zero(&m.apply(&basis(2))));
    }

    #[test]
    fn transpose_is_involutive() {
        let m = PolyMatrix::from_fn(|i, j| Poly::int((3 * i + j) as i64));
        assert_eq!(m.transpose().transpose(), m);
        assert!(!m.is_symmetric());
        assert!((&m + &m.transpose()).is_symmetric());
        assert_eq!(m.diff_positions(&m.transpose()).len(), 6);
    }
}

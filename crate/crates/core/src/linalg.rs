//! Complex vector helpers and the `[re, im]` JSON encoding shared by fixtures.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Row-vector times column-vector without conjugation: `sum_i a_i b_i`.
pub fn dot(a: &CVector, b: &CVector) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Row vector `a` (stored as a column) times matrix `m`: returns `a^T m` as a column.
pub fn row_times(a: &CVector, m: &CMatrix) -> CVector {
    m.tr_mul(a)
}

pub fn norm_sqr(v: &CVector) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

pub fn frobenius_sqr(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum()
}

/// Largest absolute entry of `m - m^T`.
pub fn asymmetry(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    worst
}

/// Largest absolute off-diagonal entry.
pub fn off_diagonal_max(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}

fn pair(c: &C64) -> [f64; 2] {
    [c.re, c.im]
}

fn unpair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub mod cvec_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &CVector, s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(pair).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CVector, D::Error> {
        let raw: Vec<[f64; 2]> = Vec::deserialize(d)?;
        Ok(CVector::from_iterator(raw.len(), raw.into_iter().map(unpair)))
    }
}

pub mod cvecs_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[CVector], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.iter().map(pair).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CVector>, D::Error> {
        let raw: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|r| CVector::from_iterator(r.len(), r.into_iter().map(unpair)))
            .collect())
    }
}

/// Matrices are stored row-major as a list of rows.
pub mod cmat_serde {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(CMatrix::from_fn(nrows, ncols, |i, j| unpair(rows[i][j])))
    }
}

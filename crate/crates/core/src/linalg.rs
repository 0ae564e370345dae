//! Exact linear algebra: bit-packed GF(2) matrices and exact integer
//! determinants for the coloring matrix.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A GF(2) row vector, packed 64 bits per word.
pub type Gf2Vec = Vec<u64>;

pub fn gf2_zero(ncols: usize) -> Gf2Vec {
    vec![0; ncols.div_ceil(64).max(1)]
}

pub fn gf2_get(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

pub fn gf2_set(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

pub fn gf2_flip(v: &mut [u64], i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

pub fn gf2_xor(v: &mut [u64], w: &[u64]) {
    for (a, b) in v.iter_mut().zip(w) {
        *a ^= *b;
    }
}

pub fn gf2_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&w| w == 0)
}

/// Index of the highest set bit, if any.
pub fn gf2_leading(v: &[u64]) -> Option<usize> {
    for (wi, &w) in v.iter().enumerate().rev() {
        if w != 0 {
            return Some(wi * 64 + 63 - w.leading_zeros() as usize);
        }
    }
    None
}

/// A dense GF(2) matrix given by its rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    ncols: usize,
    rows: Vec<Gf2Vec>,
}

impl Gf2Matrix {
    pub fn new(ncols: usize) -> Self {
        Gf2Matrix { ncols, rows: Vec::new() }
    }

    pub fn from_rows(ncols: usize, rows: Vec<Gf2Vec>) -> Self {
        let words = ncols.div_ceil(64).max(1);
        debug_assert!(rows.iter().all(|r| r.len() == words));
        Gf2Matrix { ncols, rows }
    }

    /// Rows given as index lists, for tests and small call sites.
    pub fn from_bits(ncols: usize, rows: &[&[usize]]) -> Self {
        let mut m = Gf2Matrix::new(ncols);
        for idx in rows {
            let mut v = gf2_zero(ncols);
            for &i in *idx {
                gf2_flip(&mut v, i);
            }
            m.push_row(v);
        }
        m
    }

    pub fn push_row(&mut self, row: Gf2Vec) {
        debug_assert_eq!(row.len(), self.ncols.div_ceil(64).max(1));
        self.rows.push(row);
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Gf2Vec] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        let mut ech = Gf2Echelon::new(self.ncols);
        for r in &self.rows {
            ech.insert(r.clone());
        }
        ech.rank()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut out = Gf2Matrix::new(self.nrows());
        for j in 0..self.ncols {
            let mut v = gf2_zero(self.nrows());
            for (i, r) in self.rows.iter().enumerate() {
                if gf2_get(r, j) {
                    gf2_set(&mut v, i);
                }
            }
            out.push_row(v);
        }
        out
    }
}

/// dim((span(vectors) + span(subspace)) / span(subspace)).
pub fn quotient_rank(subspace: &Gf2Matrix, vectors: &Gf2Matrix) -> Result<usize> {
    if subspace.ncols() != vectors.ncols() {
        return Err(Error::Invalid(format!(
            "ambient dimension mismatch: {} vs {}",
            subspace.ncols(),
            vectors.ncols()
        )));
    }
    let mut ech = Gf2Echelon::new(subspace.ncols());
    for r in subspace.rows() {
        ech.insert(r.clone());
    }
    let sub_rank = ech.rank();
    for r in vectors.rows() {
        ech.insert(r.clone());
    }
    Ok(ech.rank() - sub_rank)
}

/// Incremental row-echelon basis with leading-bit pivots.
#[derive(Debug, Clone)]
pub struct Gf2Echelon {
    ncols: usize,
    rows: Vec<(usize, Gf2Vec)>, // (pivot, reduced row), pivots strictly decreasing
}

impl Gf2Echelon {
    pub fn new(ncols: usize) -> Self {
        Gf2Echelon { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis in place.
    pub fn reduce(&self, v: &mut Gf2Vec) {
        for (p, row) in &self.rows {
            if gf2_get(v, *p) {
                gf2_xor(v, row);
            }
        }
    }

    /// Reduce and insert if independent; returns true when the rank grew.
    pub fn insert(&mut self, mut v: Gf2Vec) -> bool {
        self.reduce(&mut v);
        match gf2_leading(&v) {
            None => false,
            Some(p) => {
                let at = self.rows.partition_point(|(q, _)| *q > p);
                self.rows.insert(at, (p, v));
                true
            }
        }
    }

    pub fn contains(&self, v: &Gf2Vec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        gf2_is_zero(&w)
    }
}

/// Kernel of a linear map given by the image of each input basis vector.
/// Returns a basis of the nullspace in the input space (dimension `n_in`).
pub fn kernel_basis(n_in: usize, images: &[Gf2Vec], n_out: usize) -> Vec<Gf2Vec> {
    debug_assert_eq!(images.len(), n_in);
    let mut ech: Vec<(usize, Gf2Vec, Gf2Vec)> = Vec::new(); // (pivot, image row, combo)
    let mut kernel = Vec::new();
    for i in 0..n_in {
        let mut img = images[i].clone();
        let mut combo = gf2_zero(n_in);
        gf2_set(&mut combo, i);
        for (p, row, c) in &ech {
            if gf2_get(&img, *p) {
                gf2_xor(&mut img, row);
                gf2_xor(&mut combo, c);
            }
        }
        match gf2_leading(&img) {
            None => kernel.push(combo),
            Some(p) => {
                debug_assert!(p < n_out);
                ech.push((p, img, combo));
            }
        }
    }
    kernel
}

/// Exact integer matrix for the coloring determinant.
#[derive(Debug, Clone)]
pub struct IntMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<BigInt>, // row-major
}

impl IntMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMatrix { nrows, ncols, entries: vec![BigInt::zero(); nrows * ncols] }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = IntMatrix::zero(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(x);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.ncols + j]
    }

    /// Delete the last row and last column.
    pub fn strike_last(&self) -> Result<IntMatrix> {
        if self.nrows == 0 || self.ncols == 0 {
            return Err(Error::NonSquare { rows: self.nrows, cols: self.ncols });
        }
        let mut out = IntMatrix::zero(self.nrows - 1, self.ncols - 1);
        for i in 0..self.nrows - 1 {
            for j in 0..self.ncols - 1 {
                *out.at_mut(i, j) = self.at(i, j).clone();
            }
        }
        Ok(out)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn int_det(m: &IntMatrix) -> Result<BigInt> {
    if m.nrows != m.ncols {
        return Err(Error::NonSquare { rows: m.nrows, cols: m.ncols });
    }
    let n = m.nrows;
    if n == 0 {
        return Ok(BigInt::one()); // empty product
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.at(k, k).is_zero() {
            let Some(piv) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            for j in 0..n {
                let t = a.at(k, j).clone();
                *a.at_mut(k, j) = a.at(piv, j).clone();
                *a.at_mut(piv, j) = t;
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
                *a.at_mut(i, j) = num / &prev; // exact by Bareiss
            }
            *a.at_mut(i, k) = BigInt::zero();
        }
        prev = a.at(k, k).clone();
    }
    Ok(sign * a.at(n - 1, n - 1))
}

pub fn int_det_abs(m: &IntMatrix) -> Result<BigInt> {
    Ok(int_det(m)?.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        let id = Gf2Matrix::from_bits(3, &[&[0], &[1], &[2]]);
        assert_eq!(id.rank(), 3);
        let zero = Gf2Matrix::from_bits(4, &[&[], &[]]);
        assert_eq!(zero.rank(), 0);
        let dup = Gf2Matrix::from_bits(2, &[&[0, 1], &[0, 1]]);
        assert_eq!(dup.rank(), 1);
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let m = Gf2Matrix::from_bits(5, &[&[0, 2, 4], &[1, 2], &[0, 1, 4], &[3]]);
        assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn quotient_rank_cases() {
        // vectors inside the subspace
        let sub = Gf2Matrix::from_bits(3, &[&[0], &[1]]);
        let vecs = Gf2Matrix::from_bits(3, &[&[0, 1]]);
        assert_eq!(quotient_rank(&sub, &vecs).unwrap(), 0);
        // trivial subspace
        let sub = Gf2Matrix::from_bits(3, &[]);
        let vecs = Gf2Matrix::from_bits(3, &[&[0], &[1, 2]]);
        assert_eq!(quotient_rank(&sub, &vecs).unwrap(), 2);
        // subspace e1, vectors {e1+e2, e2}: quotient has dimension 1
        let sub = Gf2Matrix::from_bits(3, &[&[0]]);
        let vecs = Gf2Matrix::from_bits(3, &[&[0, 1], &[1]]);
        assert_eq!(quotient_rank(&sub, &vecs).unwrap(), 1);
        // mismatched ambient dimension is an error
        let bad = Gf2Matrix::from_bits(4, &[&[3]]);
        assert!(quotient_rank(&sub, &bad).is_err());
    }

    #[test]
    fn kernel_of_incidence() {
        // map e_i -> sum of endpoints for a triangle graph: kernel = the triangle
        let images = vec![
            {
                let mut v = gf2_zero(3);
                gf2_set(&mut v, 0);
                gf2_set(&mut v, 1);
                v
            },
            {
                let mut v = gf2_zero(3);
                gf2_set(&mut v, 1);
                gf2_set(&mut v, 2);
                v
            },
            {
                let mut v = gf2_zero(3);
                gf2_set(&mut v, 0);
                gf2_set(&mut v, 2);
                v
            },
        ];
        let k = kernel_basis(3, &images, 3);
        assert_eq!(k.len(), 1);
        assert!(gf2_get(&k[0], 0) && gf2_get(&k[0], 1) && gf2_get(&k[0], 2));
    }

    #[test]
    fn det_small() {
        let id = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(int_det(&id).unwrap(), BigInt::from(1));
        let m = IntMatrix::from_i64(&[&[2, -1], &[-1, 2]]);
        assert_eq!(int_det(&m).unwrap(), BigInt::from(3));
        let empty = IntMatrix::zero(0, 0);
        assert_eq!(int_det(&empty).unwrap(), BigInt::from(1));
        let sing = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(int_det(&sing).unwrap(), BigInt::from(0));
        let rect = IntMatrix::zero(2, 3);
        assert!(int_det(&rect).is_err());
        // needs a row swap
        let sw = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(int_det(&sw).unwrap(), BigInt::from(-1));
    }

    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.nrows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let mut sub = IntMatrix::zero(n - 1, n - 1);
            for i in 1..n {
                let mut jj = 0;
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    *sub.at_mut(i - 1, jj) = m.at(i, k).clone();
                    jj += 1;
                }
            }
            let c = m.at(0, j) * cofactor_det(&sub);
            if j % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        // deterministic pseudo-random small matrices
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 9) as i64 - 4
        };
        for n in 0..=4 {
            for _ in 0..50 {
                let mut m = IntMatrix::zero(n, n);
                for i in 0..n {
                    for j in 0..n {
                        *m.at_mut(i, j) = BigInt::from(next());
                    }
                }
                assert_eq!(int_det(&m).unwrap(), cofactor_det(&m));
            }
        }
    }
}

//! Dense linear algebra over ℚ(t₁,…,t_m).

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::ParamScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<ParamScalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ParamScalar::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<ParamScalar>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ParamScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ParamScalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[ParamScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row-echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        if self.data.iter().all(ParamScalar::is_constant) {
            return self.rref_rational();
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for k in c..self.cols {
                let v = self.get(r, k) * &inv;
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..self.cols {
                    let v = self.get(i, k) - &(&f * self.get(r, k));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn to_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ParamScalar::as_rational).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Same as [`Matrix::rref`] for constant entries, on plain rationals.
    fn rref_rational(&mut self) -> Vec<usize> {
        let cols = self.cols;
        let mut a: Vec<BigRational> = self.data.iter().map(|x| x.as_rational().expect("constant entry")).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                for k in 0..cols {
                    a.swap(p * cols + k, r * cols + k);
                }
            }
            let inv = a[r * cols + c].recip();
            for k in c..cols {
                a[r * cols + k] *= &inv;
            }
            let pivot_row: Vec<BigRational> = a[r * cols + c..(r + 1) * cols].to_vec();
            for i in 0..self.rows {
                if i == r || a[i * cols + c].is_zero() {
                    continue;
                }
                let f = a[i * cols + c].clone();
                for (k, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        a[i * cols + c + k] -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.data = a.into_iter().map(ParamScalar::from_rational).collect();
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right nullspace, one vector per free column, with the
    /// free coordinate set to 1 (RREF-canonical).
    pub fn nullspace(&self) -> Vec<Vec<ParamScalar>> {
        if let Some(mut q) = self.to_rational() {
            let pivots = echelon_q(&mut q, self.cols);
            return (0..self.cols)
                .filter(|c| !pivots.contains(c))
                .map(|f| {
                    let mut v = vec![BigRational::zero(); self.cols];
                    v[f] = BigRational::one();
                    back_substitute_q(&q, &pivots, &mut v, None);
                    v.into_iter().map(ParamScalar::from_rational).collect()
                })
                .collect();
        }
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![ParamScalar::zero(); self.cols];
                v[f] = ParamScalar::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(i, f);
                }
                v
            })
            .collect()
    }

    /// A solution of `self · v = rhs` with free variables set to zero.
    pub fn solve(&self, rhs: &[ParamScalar]) -> Option<Vec<ParamScalar>> {
        assert_eq!(rhs.len(), self.rows);
        if let (Some(q), Some(b)) = (self.to_rational(), rhs.iter().map(ParamScalar::as_rational).collect::<Option<Vec<_>>>()) {
            let mut aug: Vec<Vec<BigRational>> = q
                .into_iter()
                .zip(b)
                .map(|(mut row, bi)| {
                    row.push(bi);
                    row
                })
                .collect();
            let pivots = echelon_q(&mut aug, self.cols + 1);
            if pivots.last() == Some(&self.cols) {
                return None;
            }
            let mut v = vec![BigRational::zero(); self.cols];
            back_substitute_q(&aug, &pivots, &mut v, Some(self.cols));
            return Some(v.into_iter().map(ParamScalar::from_rational).collect());
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (r, b) in rhs.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b.clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![ParamScalar::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = aug.get(i, self.cols).clone();
        }
        Some(v)
    }
}

/// Forward elimination to row echelon form (pivots not normalized); the
/// pivot columns are those of the RREF. Banded input stays banded.
fn echelon_q(a: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let inv = pivot_row[c].recip();
        let support: Vec<usize> = (c + 1..cols).filter(|&k| !pivot_row[k].is_zero()).collect();
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for &k in &support {
                row[k] -= &f * &pivot_row[k];
            }
            row[c] = BigRational::zero();
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Fills the pivot coordinates of `v` (free ones preset) so that the echelon
/// rows hold; `rhs` names the augmented column, if any.
fn back_substitute_q(a: &[Vec<BigRational>], pivots: &[usize], v: &mut [BigRational], rhs: Option<usize>) {
    let n = v.len();
    for (i, &p) in pivots.iter().enumerate().rev() {
        let row = &a[i];
        let mut s = rhs.map_or_else(BigRational::zero, |c| row[c].clone());
        for k in p + 1..n {
            if !row[k].is_zero() && !v[k].is_zero() {
                s -= &row[k] * &v[k];
            }
        }
        v[p] = s / &row[p];
    }
}

/// RREF basis of the span of `vectors` (all of length `n`).
pub fn row_reduce(vectors: &[Vec<ParamScalar>], n: usize) -> Vec<Vec<ParamScalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let mut m = Matrix::from_rows(vectors.to_vec(), n);
    let rank = m.rref().len();
    (0..rank).map(|i| m.row(i).to_vec()).collect()
}

/// True when `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<ParamScalar>], v: &[ParamScalar]) -> bool {
    if v.iter().all(ParamScalar::is_zero) {
        return true;
    }
    let n = v.len();
    let r0 = if basis.is_empty() { 0 } else { Matrix::from_rows(basis.to_vec(), n).rank() };
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    Matrix::from_rows(all, n).rank() == r0
}

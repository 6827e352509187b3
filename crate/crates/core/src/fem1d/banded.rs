use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Pivots below this fraction of the (row-equilibrated) matrix scale are
/// reported as near-singular.
pub const SINGULAR_PIVOT_TOL: f64 = 1e-10;

/// Square complex matrix with `kl` sub- and `ku` super-diagonals.
///
/// Rows are stored contiguously with room for the `kl` extra super-diagonals
/// created by partial pivoting: entry `(i, j)` lives at `i·w + (j + kl - i)`
/// with `w = 2·kl + ku + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        BandedMatrix { n, kl, ku, width, data: vec![ZERO; n * width] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            ZERO
        }
    }

    /// Add to an entry; panics outside the declared band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Replace row `i` by the unit row `e_i` (essential condition).
    pub fn set_identity_row(&mut self, i: usize) {
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        for j in lo..=hi {
            let k = self.idx(i, j);
            self.data[k] = ZERO;
        }
        self.set(i, i, C64::new(1.0, 0.0));
    }

    /// Scatter a dense local matrix (row-major, `dofs.len()²`).
    pub fn add_local(&mut self, dofs: &[usize], local: &[C64]) {
        let m = dofs.len();
        for (a, &i) in dofs.iter().enumerate() {
            for (b, &j) in dofs.iter().enumerate() {
                self.add(i, j, local[a * m + b]);
            }
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.data[self.idx(i, j)] * x[j]).sum()
            })
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// LU factorization with partial pivoting after row equilibration.
    pub fn factor(mut self) -> Result<BandedLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let mut row_scale = vec![1.0; n];
        for (i, s) in row_scale.iter_mut().enumerate() {
            let lo = i.saturating_sub(kl);
            let hi = if n == 0 { 0 } else { (i + ku).min(n - 1) };
            let m = (lo..=hi).map(|j| self.data[self.idx(i, j)].norm()).fold(0.0, f64::max);
            if m == 0.0 {
                return Err(Error::NearSingular { row: i, pivot: 0.0, relative: 0.0 });
            }
            *s = 1.0 / m;
            let start = i * self.width;
            for z in &mut self.data[start..start + self.width] {
                *z *= *s;
            }
        }
        let mut piv = vec![0usize; n];
        let mut lmul = vec![ZERO; n * kl.max(1)];
        let mut min_pivot = f64::INFINITY;
        let mut min_row = 0;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.idx(k, k)].norm();
            for i in k + 1..=last {
                let v = self.data[self.idx(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if best < min_pivot {
                min_pivot = best;
                min_row = k;
            }
            if best == 0.0 {
                return Err(Error::NearSingular { row: k, pivot: 0.0, relative: 0.0 });
            }
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let a = self.idx(k, j);
                    let b = self.idx(p, j);
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.idx(k, k)];
            let inv = 1.0 / pivot;
            for i in k + 1..=last {
                let ik = self.idx(i, k);
                let m = self.data[ik] * inv;
                lmul[k * kl + (i - k - 1)] = m;
                self.data[ik] = ZERO;
                if m != ZERO {
                    for j in k + 1..=jmax {
                        let kj = self.data[self.idx(k, j)];
                        let ij = self.idx(i, j);
                        self.data[ij] -= m * kj;
                    }
                }
            }
        }
        // Rows are equilibrated, so the matrix scale is one.
        if min_pivot < SINGULAR_PIVOT_TOL {
            return Err(Error::NearSingular { row: min_row, pivot: min_pivot, relative: min_pivot });
        }
        Ok(BandedLu { lu: self, piv, lmul, row_scale, min_pivot })
    }
}

/// Factors produced by [`BandedMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandedLu {
    lu: BandedMatrix,
    piv: Vec<usize>,
    lmul: Vec<C64>,
    row_scale: Vec<f64>,
    min_pivot: f64,
}

impl BandedLu {
    /// Smallest pivot magnitude relative to the equilibrated matrix scale.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn solve_in_place(&self, b: &mut [C64]) {
        let a = &self.lu;
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        assert_eq!(b.len(), n, "right-hand side has the wrong length");
        for (x, s) in b.iter_mut().zip(&self.row_scale) {
            *x *= *s;
        }
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            let last = (k + kl).min(n.saturating_sub(1));
            for i in k + 1..=last {
                b[i] -= self.lmul[k * kl + (i - k - 1)] * bk;
            }
        }
        for k in (0..n).rev() {
            let jmax = (k + kl + ku).min(n - 1);
            let mut s = b[k];
            for (j, bj) in b.iter().enumerate().take(jmax + 1).skip(k + 1) {
                s -= a.data[a.idx(k, j)] * bj;
            }
            b[k] = s / a.data[a.idx(k, k)];
        }
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Factor and solve in one step.
pub fn solve_banded(a: BandedMatrix, rhs: &[C64]) -> Result<Vec<C64>> {
    Ok(a.factor()?.solve(rhs))
}

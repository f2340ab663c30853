//! Compressed sparse row storage with a row-parallel product.

use num_complex::Complex64;
use rayon::prelude::*;

const PAR_ROWS: usize = 1 << 14;
const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds the matrix from a row generator. Entries within a row are
    /// sorted by column; duplicates are summed.
    pub fn from_rows<F>(n: usize, row: F) -> Self
    where
        F: Fn(usize, &mut Vec<(u32, f64)>) + Sync,
    {
        let chunks: Vec<(Vec<usize>, Vec<u32>, Vec<f64>)> = (0..n.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut lens = Vec::with_capacity(CHUNK);
                let mut cols = Vec::new();
                let mut vals = Vec::new();
                let mut buf = Vec::new();
                for r in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    buf.clear();
                    row(r, &mut buf);
                    buf.sort_by_key(|e| e.0);
                    let start = cols.len();
                    for &(j, v) in &buf {
                        if cols.len() > start && *cols.last().unwrap() == j {
                            *vals.last_mut().unwrap() += v;
                        } else {
                            cols.push(j);
                            vals.push(v);
                        }
                    }
                    lens.push(cols.len() - start);
                }
                (lens, cols, vals)
            })
            .collect();

        let nnz = chunks.iter().map(|c| c.1.len()).sum();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for (lens, c, v) in chunks {
            for l in lens {
                row_ptr.push(row_ptr.last().unwrap() + l);
            }
            cols.extend(c);
            vals.extend(v);
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    #[inline]
    fn row_dot(&self, r: usize, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            s += self.vals[k] * x[self.cols[k] as usize];
        }
        s
    }

    #[inline]
    fn row_dot_c(&self, r: usize, x: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            s += self.vals[k] * x[self.cols[k] as usize];
        }
        s
    }

    /// y = A x. The result does not depend on the number of threads.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        if self.n >= PAR_ROWS {
            y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, ys)| {
                for (k, yr) in ys.iter_mut().enumerate() {
                    *yr = self.row_dot(c * CHUNK + k, x);
                }
            });
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = self.row_dot(r, x);
            }
        }
    }

    pub fn matvec_c(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        if self.n >= PAR_ROWS {
            y.par_chunks_mut(CHUNK).enumerate().for_each(|(c, ys)| {
                for (k, yr) in ys.iter_mut().enumerate() {
                    *yr = self.row_dot_c(c * CHUNK + k, x);
                }
            });
        } else {
            for (r, yr) in y.iter_mut().enumerate() {
                *yr = self.row_dot_c(r, x);
            }
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[range.clone()].binary_search(&(c as u32)) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|r| self.vals[self.row_ptr[r]..self.row_ptr[r + 1]].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest |A_ij − A_ji| over the stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k] as usize;
                worst = worst.max((self.vals[k] - self.get(c, r)).abs());
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for (r, row) in m.iter_mut().enumerate() {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                row[self.cols[k] as usize] = self.vals[k];
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> CsrMatrix {
        CsrMatrix::from_rows(n, |r, out| {
            out.push((r as u32, 2.0));
            if r > 0 {
                out.push(((r - 1) as u32, -1.0));
            }
            if r + 1 < n {
                out.push(((r + 1) as u32, -0.5));
                out.push(((r + 1) as u32, -0.5));
            }
        })
    }

    #[test]
    fn duplicates_are_summed_and_sorted() {
        let m = tridiag(5);
        assert_eq!(m.nnz(), 13);
        assert_eq!(m.get(1, 2), -1.0);
        assert_eq!(m.get(0, 4), 0.0);
        assert_eq!(m.asymmetry(), 0.0);
        assert_eq!(m.norm_bound(), 4.0);
    }

    #[test]
    fn parallel_product_matches_serial() {
        let n = 3 * PAR_ROWS + 17;
        let m = tridiag(n);
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut y = vec![0.0; n];
        m.matvec(&x, &mut y);
        for r in [0, 1, n / 2, n - 1] {
            let mut s = 2.0 * x[r];
            if r > 0 {
                s -= x[r - 1];
            }
            if r + 1 < n {
                s -= x[r + 1];
            }
            assert!((y[r] - s).abs() < 1e-14);
        }
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, -v)).collect();
        let mut yc = vec![Complex64::new(0.0, 0.0); n];
        m.matvec_c(&xc, &mut yc);
        for r in 0..n {
            assert_eq!(yc[r], Complex64::new(y[r], -y[r]));
        }
    }
}

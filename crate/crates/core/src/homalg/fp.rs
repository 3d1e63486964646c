//! Dense matrices over a prime field `𝔽_p`.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for (i, r) in entries.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x.rem_euclid(p as i64) as u64);
            }
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, o: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = FpMatrix::zeros(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = (out.data[idx] + a * o.get(k, j)) % self.p;
                }
            }
        }
        out
    }

    pub fn add(&self, o: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            *a = (*a + b) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let mut out = self.clone();
        for a in &mut out.data {
            *a = (*a * (c % self.p)) % self.p;
        }
        out
    }

    pub fn neg(&self) -> FpMatrix {
        self.scale(self.p - 1)
    }

    pub fn pow(&self, e: u32) -> FpMatrix {
        (0..e).fold(FpMatrix::identity(self.p, self.rows), |acc, _| acc.mul(self))
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn hstack(p: u64, rows: usize, parts: &[&FpMatrix]) -> FpMatrix {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn block_diag(p: u64, parts: &[&FpMatrix]) -> FpMatrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = FpMatrix::zeros(p, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FpMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut a = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            for j in 0..a.cols {
                a.data.swap(r * a.cols + j, piv * a.cols + j);
            }
            let inv = inverse(a.get(r, c), p);
            for j in 0..a.cols {
                let v = a.get(r, j) * inv % p;
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                let f = a.get(i, c);
                if i != r && f != 0 {
                    for j in 0..a.cols {
                        let v = (a.get(i, j) + p * p - f * a.get(r, j)) % p;
                        a.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == a.rows {
                break;
            }
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ x : A x = 0 }`, as columns.
    pub fn kernel(&self) -> FpMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(self.p, self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                k.set(pc, col, (self.p - r.get(row, f)) % self.p);
            }
        }
        k
    }
}

pub fn inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i128, 1i128, p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated_and_rank_nullity_holds() {
        let a = FpMatrix::from_rows(3, 2, 4, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2]]);
        let k = a.kernel();
        assert!(a.mul(&k).is_zero());
        assert_eq!(a.rank() + k.cols(), 4);
        assert_eq!(inverse(3, 7), 5);
    }
}

//! Dense integer matrices and the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigInt::one())
    }

    pub fn scalar(n: usize, c: BigInt) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    /// Row-major constructor; all rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: usize, cols: usize, entries: &[Vec<T>]) -> Self {
        assert_eq!(entries.len(), rows, "row count");
        let mut m = Self::zeros(rows, cols);
        for (i, r) in entries.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn from_i64(entries: &[&[i64]]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let v: Vec<Vec<i64>> = entries.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(rows, cols, &v)
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&BigInt::from(-1))
    }

    /// Entries reduced into `[0, n)`.
    pub fn reduce_mod(&self, n: &BigInt) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mod_floor(n)).collect(),
        }
    }

    /// Side-by-side concatenation; every part has `rows` rows.
    pub fn hstack(rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack row mismatch");
            m.set_block(0, off, p);
            off += p.cols;
        }
        m
    }

    /// Vertical concatenation; every part has `cols` columns.
    pub fn vstack(cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack column mismatch");
            m.set_block(off, 0, p);
            off += p.rows;
        }
        m
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            m.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn top_rows(&self, k: usize) -> Matrix {
        self.select(&(0..k).collect::<Vec<_>>(), &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn bottom_rows_from(&self, k: usize) -> Matrix {
        self.select(&(k..self.rows).collect::<Vec<_>>(), &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn left_cols(&self, k: usize) -> Matrix {
        self.select(&(0..self.rows).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>())
    }

    /// Rank over `ℚ`, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            let Some(piv) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, piv);
            for r in rank + 1..m {
                for c in col + 1..n {
                    let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = v / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            if rank == m {
                break;
            }
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += c · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// `U · A · V = D` with `D` diagonal, `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Debug, Clone)]
pub struct Snf {
    /// Diagonal of `D`, length `min(rows, cols)`; nonzero entries come first.
    pub diag: Vec<BigInt>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub rank: usize,
}

impl Snf {
    pub fn d(&self) -> Matrix {
        let mut d = Matrix::zeros(self.u.rows, self.v.rows);
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Nonzero invariant factors that are not units.
    pub fn nonunit_factors(&self) -> Vec<BigInt> {
        self.diag[..self.rank].iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(a: &Matrix) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = Matrix::identity(m);
    let mut u_inv = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let mut v_inv = Matrix::identity(n);

    // row op on d mirrors onto u; the inverse op acts on u_inv's columns
    macro_rules! row_add {
        ($dst:expr, $src:expr, $c:expr) => {{
            let c: BigInt = $c;
            d.add_row($dst, $src, &c);
            u.add_row($dst, $src, &c);
            u_inv.add_col($src, $dst, &-c);
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $c:expr) => {{
            let c: BigInt = $c;
            d.add_col($dst, $src, &c);
            v.add_col($dst, $src, &c);
            v_inv.add_row($src, $dst, &-c);
        }};
    }

    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &d[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            // move the smallest nonzero entry of row t / column t to the pivot
            let mut best = (t, t);
            for i in t + 1..m {
                if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                u_inv.swap_cols(t, best.0);
            }
            if best.1 != t {
                d.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                v_inv.swap_rows(t, best.1);
            }
            // nearest-integer quotients leave remainders of at most half the pivot
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&d[(i, t)], &d[(t, t)]);
                row_add!(i, t, -q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&d[(t, j)], &d[(t, t)]);
                col_add!(j, t, -q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => row_add!(t, i, BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            let cols = u_inv.rows;
            for i in 0..cols {
                let x = -std::mem::take(&mut u_inv[(i, t)]);
                u_inv[(i, t)] = x;
            }
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    let snf = Snf {
        diag,
        u,
        u_inv,
        v,
        v_inv,
        rank: t,
    };
    debug_assert!(check_snf(a, &snf), "Smith normal form self-check failed");
    snf
}

fn nearest_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (x * &two + p.abs()).div_floor(&(p.abs() * &two)) * p.signum()
}

/// `U·A·V = D`, the divisibility chain, and both inverse pairs.
pub fn check_snf(a: &Matrix, s: &Snf) -> bool {
    let (m, n) = (a.rows, a.cols);
    if s.u.mul(a).mul(&s.v) != s.d() {
        return false;
    }
    if s.u.mul(&s.u_inv) != Matrix::identity(m) || s.v.mul(&s.v_inv) != Matrix::identity(n) {
        return false;
    }
    let nz = &s.diag[..s.rank];
    nz.iter().all(|x| x.is_positive())
        && s.diag[s.rank..].iter().all(Zero::is_zero)
        && nz.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}

/// A `ℤ`-basis of `{ x : A x = 0 }`, as columns.
pub fn kernel(a: &Matrix) -> Matrix {
    let s = smith_normal_form(a);
    let cols: Vec<usize> = (s.rank..a.cols).collect();
    s.v.select(&(0..a.cols).collect::<Vec<_>>(), &cols)
}

/// A `ℤ`-basis of the column span of `A`, as columns.
pub fn image_basis(a: &Matrix) -> Matrix {
    let s = smith_normal_form(a);
    let mut out = Matrix::zeros(a.rows, s.rank);
    for j in 0..s.rank {
        for i in 0..a.rows {
            out[(i, j)] = &s.u_inv[(i, j)] * &s.diag[j];
        }
    }
    out
}

/// Solves `B X = Y` for `B` of full column rank, when an integral solution exists.
pub fn solve_full_rank(b: &Matrix, y: &Matrix) -> Option<Matrix> {
    let s = smith_normal_form(b);
    if s.rank != b.cols {
        return None;
    }
    let c = s.u.mul(y);
    let mut z = Matrix::zeros(b.cols, y.cols);
    for j in 0..y.cols {
        for i in 0..c.rows {
            if i < s.rank {
                let (q, r) = c[(i, j)].div_rem(&s.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[(i, j)] = q;
            } else if !c[(i, j)].is_zero() {
                return None;
            }
        }
    }
    Some(s.v.mul(&z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: &Matrix) -> Vec<i64> {
        smith_normal_form(a)
            .diag
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(diag(&Matrix::from_i64(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(diag(&Matrix::zeros(2, 2)), vec![0, 0]);
        let z = smith_normal_form(&Matrix::zeros(2, 2));
        assert_eq!(z.u, Matrix::identity(2));
        assert_eq!(z.v, Matrix::identity(2));
        assert_eq!(diag(&Matrix::from_i64(&[&[2, 4], &[6, 8]])), vec![2, 4]);
        assert_eq!(diag(&Matrix::zeros(0, 3)), Vec::<i64>::new());
    }

    /// Oracle: the k-th determinantal divisor is the gcd of all k×k minors.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    #[test]
    fn determinantal_divisors_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..c).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let a = Matrix::from_rows(r, c, &rows);
            let s = smith_normal_form(&a);
            assert!(check_snf(&a, &s));
            let rows_big = a.to_rows();
            let mut prod = BigInt::one();
            for k in 1..=r.min(c) {
                let mut g = BigInt::zero();
                for rs in subsets(r, k) {
                    for cs in subsets(c, k) {
                        let minor: Vec<Vec<BigInt>> = rs
                            .iter()
                            .map(|&i| cs.iter().map(|&j| rows_big[i][j].clone()).collect())
                            .collect();
                        g = g.gcd(&det(&minor));
                    }
                }
                prod *= &s.diag[k - 1];
                assert_eq!(prod, g);
            }
            assert_eq!(a.rank(), s.rank);
        }
    }

    #[test]
    fn kernel_and_solve() {
        let a = Matrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
        let b = Matrix::from_i64(&[&[2], &[0]]);
        assert!(solve_full_rank(&b, &Matrix::from_i64(&[&[3], &[0]])).is_none());
        let x = solve_full_rank(&b, &Matrix::from_i64(&[&[4], &[0]])).unwrap();
        assert_eq!(x, Matrix::from_i64(&[&[2]]));
        assert_eq!(image_basis(&Matrix::from_i64(&[&[2, 4], &[2, 4]])).cols(), 1);
    }
}

//! Dense linear algebra over a prime field F_p.

use crate::ff::fp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v % p;
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

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = fp::inv(self.get(r, c), p);
            self.row_mut(r).iter_mut().for_each(|x| *x = fp::mul(*x, inv, p));
            let pivot_row: Vec<u32> = self.row_mut(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                let row = self.row_mut(i);
                for j in c..row.len() {
                    if pivot_row[j] != 0 {
                        row[j] = fp::sub(row[j], fp::mul(f, pivot_row[j], p), p);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = fp::sub(0, m.get(r, free), p);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.p, self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.data[i * aug.cols + j] = self.get(i, j);
            }
            aug.data[i * aug.cols + self.cols] = bi % self.p;
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = (0..self.cols).map(|j| (self.get(i, j) as u64 * v[j] as u64) % p).sum();
                (s % p) as u32
            })
            .collect()
    }
}

/// Incrementally maintained echelon basis of a subspace of F_p^dim.
#[derive(Clone, Debug)]
pub struct Span {
    p: u32,
    dim: usize,
    /// Rows with a leading 1 at the recorded pivot.
    rows: Vec<(usize, Vec<u32>)>,
}

impl Span {
    pub fn new(p: u32, dim: usize) -> Self {
        Span {
            p,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.dim);
        let p = self.p;
        let mut w: Vec<u32> = v.iter().map(|&x| x % p).collect();
        for (pc, row) in &self.rows {
            let f = w[*pc];
            if f != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = fp::sub(*x, fp::mul(f, r, p), p);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = fp::inv(w[pc], p);
        w.iter_mut().for_each(|x| *x = fp::mul(*x, inv, p));
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for (x, &r) in row.iter_mut().zip(&w) {
                    *x = fp::sub(*x, fp::mul(f, r, p), p);
                }
            }
        }
        self.rows.push((pc, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vectors_are_annihilated() {
        // rank-2 3x4 matrix over F_5
        let cols = vec![vec![1, 2, 3], vec![2, 4, 1], vec![3, 1, 4], vec![0, 0, 0]];
        let m = FpMatrix::from_columns(5, 3, &cols);
        let k = m.kernel();
        assert_eq!(k.len() + m.rank(), 4);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let cols: Vec<Vec<u32>> = (0..4).map(|j| (0..4).map(|i| (i == j) as u32).collect()).collect();
        let m = FpMatrix::from_columns(3, 4, &cols);
        assert!(m.kernel().is_empty());
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn solve_and_inconsistent() {
        let m = FpMatrix::from_columns(7, 2, &[vec![1, 2], vec![3, 6]]);
        let x = m.solve(&[2, 4]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![2, 4]);
        assert!(m.solve(&[1, 1]).is_none());
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new(3, 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 2, 1]));
        assert!(s.contains(&[2, 0, 1]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.rank(), 2);
    }
}

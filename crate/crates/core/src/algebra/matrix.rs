//! Dense matrices over `F_p` with reduced row echelon form, rank, kernel and
//! particular solutions.

use super::field::PrimeField;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of row reduction: the reduced matrix and its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1 % field.characteristic());
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, field.from_u64(*v as u64));
            }
        }
        m
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = *v;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let p = f.characteristic() as u64;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, b) in other.row(k).iter().enumerate() {
                    acc[j] = (acc[j] + a * *b as u64) % p;
                }
            }
            for (j, v) in acc.iter().enumerate() {
                out.set(i, j, *v as u32);
            }
        }
        out
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.characteristic() as u64;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (a, b)| (acc + *a as u64 * *b as u64) % p) as u32
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.sub(*a, *b))
                .collect(),
        }
    }

    /// Side-by-side concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        Echelon { reduced: m, pivots }
    }

    /// Gauss-Jordan elimination restricted to pivots in the first
    /// `pivot_cols` columns. Returns the pivot columns.
    fn reduce_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field;
        let p = f.characteristic() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..pivot_cols {
            if rank == self.rows {
                break;
            }
            let Some(r) = (rank..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if r != rank {
                for j in c..cols {
                    self.data.swap(r * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv(self.data[rank * cols + c]).expect("nonzero pivot") as u64;
            for j in c..cols {
                let v = &mut self.data[rank * cols + j];
                *v = (*v as u64 * inv % p) as u32;
            }
            let (before, rest) = self.data.split_at_mut(rank * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let factor = row[c] as u64;
                if factor == 0 {
                    return;
                }
                let neg = p - factor;
                for j in c..cols {
                    let pv = pivot_row[j];
                    if pv != 0 {
                        row[j] = ((row[j] as u64 + neg * pv as u64) % p) as u32;
                    }
                }
            };
            before.chunks_mut(cols).for_each(eliminate);
            after.chunks_mut(cols).for_each(eliminate);
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one vector per free column; each vector has
    /// a 1 in its free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1 % f.characteristic();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(i, free));
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b`. Free variables are set to zero, so the answer is
    /// the back-substitution of the reduced row echelon form.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = self.hstack(&Matrix::from_columns(self.field, self.rows, &[b.to_vec()]));
        let pivots = aug.reduce_in_place(self.cols);
        let last = self.cols;
        if (pivots.len()..self.rows).any(|i| aug.get(i, last) != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, last);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rank_and_kernel_small() {
        let k = f(7);
        let m = Matrix::from_rows(k, &[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(|x| *x == 0));
        }
    }

    #[test]
    fn solve_free_variables_zero() {
        let k = f(5);
        let m = Matrix::from_rows(k, &[vec![1, 1, 0], vec![0, 0, 1]]);
        let x = m.solve(&[3, 4]).unwrap();
        assert_eq!(x, vec![3, 0, 4]);
        let singular = Matrix::from_rows(k, &[vec![1, 1], vec![1, 1]]);
        assert!(singular.solve(&[1, 2]).is_none());
    }

    #[test]
    fn empty_shapes() {
        let k = f(3);
        let m = Matrix::zeros(k, 0, 4);
        assert_eq!(m.kernel().len(), 4);
        assert_eq!(m.solve(&[]), Some(vec![0; 4]));
        let n = Matrix::zeros(k, 3, 0);
        assert!(n.solve(&[0, 0, 0]).is_some());
        assert!(n.solve(&[0, 1, 0]).is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 0usize..6, cols in 0usize..6, seed in prop::collection::vec(0u32..3, 36)) {
            let k = f(3);
            let data: Vec<Vec<u32>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 6 + j]).collect()).collect();
            let m = if rows == 0 { Matrix::zeros(k, 0, cols) } else { Matrix::from_rows(k, &data) };
            let ker = m.kernel();
            prop_assert_eq!(m.rank() + ker.len(), cols);
            for v in &ker {
                prop_assert!(m.apply(v).iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn solve_reproduces_rhs(seed in prop::collection::vec(0u32..11, 20), x in prop::collection::vec(0u32..11, 5)) {
            let k = f(11);
            let rows: Vec<Vec<u32>> = seed.chunks(5).map(|c| c.to_vec()).collect();
            let m = Matrix::from_rows(k, &rows);
            let b = m.apply(&x);
            let sol = m.solve(&b).expect("consistent by construction");
            prop_assert_eq!(m.apply(&sol), b);
        }
    }
}

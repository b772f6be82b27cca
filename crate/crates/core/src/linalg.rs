//! Dense exact linear algebra over a [`Field`].

use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (c, x) in row.into_iter().enumerate() {
                m.set(r, c, x);
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

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).inv().expect("nonzero pivot");
            for c in col..self.cols {
                let x = self.get(row, c) * &inv;
                self.set(row, c, x);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let x = self.get(r, c) - &(&factor * self.get(row, c));
                    self.set(r, c, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.nullspace_with_free().0
    }

    /// As [`Matrix::nullspace`], also returning the free column of each
    /// vector: it is 1 there and every other basis vector is 0 there.
    pub fn nullspace_with_free(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        let frees: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        for &free in &frees {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free);
            }
            basis.push(v);
        }
        (basis, frees)
    }

    /// One solution of `A x = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Matrix::from_rows(Field::Rationals, vec![vec![q(1), q(2), q(3)]], 3);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s = &(&(&q(1) * &v[0]) + &(&q(2) * &v[1])) + &(&q(3) * &v[2]);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(
            Field::Rationals,
            vec![vec![q(1), q(1)], vec![q(2), q(2)]],
            2,
        );
        assert!(m.solve(&[q(1), q(2)]).is_some());
        assert!(m.solve(&[q(1), q(3)]).is_none());
        assert_eq!(m.rank(), 1);
    }
}

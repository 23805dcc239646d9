//! Smith and Hermite normal forms over an exact integer type.

use crate::exact::matrix::Matrix;
use crate::scalar::IntScalar;

/// Result of a Smith reduction: `u * m * v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<I> {
    pub u: Matrix<I>,
    pub d: Matrix<I>,
    pub v: Matrix<I>,
}

impl<I: IntScalar> Smith<I> {
    /// Diagonal entries `d_0 | d_1 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<I> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn row_axpy<I: IntScalar>(m: &mut Matrix<I>, dst: usize, src: usize, q: &I) {
    for j in 0..m.cols() {
        let v = m[(src, j)].clone() * q.clone();
        m[(dst, j)] = m[(dst, j)].clone() - v;
    }
}

fn col_axpy<I: IntScalar>(m: &mut Matrix<I>, dst: usize, src: usize, q: &I) {
    for i in 0..m.rows() {
        let v = m[(i, src)].clone() * q.clone();
        m[(i, dst)] = m[(i, dst)].clone() - v;
    }
}

fn negate_row<I: IntScalar>(m: &mut Matrix<I>, r: usize) {
    for j in 0..m.cols() {
        m[(r, j)] = -m[(r, j)].clone();
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn smith_normal_form<I: IntScalar>(m: &Matrix<I>) -> Smith<I> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = Matrix::<I>::identity(rows);
    let mut v = Matrix::<I>::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &a[(i, j)];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let q = a[(i, t)].div_floor(&p);
                    row_axpy(&mut a, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    if !a[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let q = a[(t, j)].div_floor(&p);
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    if !a[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&p)));
            if let Some(i) = bad {
                let one = -I::one();
                row_axpy(&mut a, t, i, &one);
                row_axpy(&mut u, t, i, &one);
                continue;
            }
            break;
        }
        if a[(t, t)].is_negative() {
            negate_row(&mut a, t);
            negate_row(&mut u, t);
        }
    }
    finish(a, u, v)
}

fn finish<I: IntScalar>(a: Matrix<I>, u: Matrix<I>, v: Matrix<I>) -> Smith<I> {
    Smith { u, d: a, v }
}

/// Row-style Hermite normal form; returns the nonzero rows, which form a
/// basis of the row lattice.
pub fn hermite_rows<I: IntScalar>(m: &Matrix<I>) -> Matrix<I> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&x, &y| a[(x, c)].abs().cmp(&a[(y, c)].abs()));
            let Some(p) = piv else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !a[(i, c)].is_zero() {
                    let q = a[(i, c)].div_floor(&a[(r, c)]);
                    row_axpy(&mut a, i, r, &q);
                    if !a[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < rows && !a[(r, c)].is_zero() {
            if a[(r, c)].is_negative() {
                negate_row(&mut a, r);
            }
            for i in 0..r {
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                row_axpy(&mut a, i, r, &q);
            }
            r += 1;
        }
    }
    let keep: Vec<Vec<I>> = (0..r).map(|i| a.row(i).to_vec()).collect();
    if keep.is_empty() {
        Matrix::zeros(0, cols)
    } else {
        Matrix::from_rows(keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diag_2_3() {
        let m = Matrix::from_rows(vec![vec![2i64, 0], vec![0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![1, 6]);
        assert_eq!(s.u.mul_mat(&m).mul_mat(&s.v), s.d);
    }

    #[test]
    fn hermite_basis() {
        let m = Matrix::from_rows(vec![vec![3i64, 0], vec![0, 3], vec![1, 2]]);
        let h = hermite_rows(&m);
        assert_eq!(h.rows(), 2);
        assert_eq!(h.det_int().abs(), 3);
    }
}

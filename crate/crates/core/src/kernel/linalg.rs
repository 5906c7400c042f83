//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::num::{dot, Rat, RatVec};

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[RatVec], ncols: usize) -> (Vec<RatVec>, Vec<usize>) {
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RatVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[RatVec], ncols: usize) -> Vec<RatVec> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// A basis of the span of `rows` (the nonzero rows of the rref).
pub fn span_basis(rows: &[RatVec], ncols: usize) -> Vec<RatVec> {
    rref(rows, ncols).0
}

pub fn in_span(v: &[Rat], basis: &[RatVec], ncols: usize) -> bool {
    let mut rows = basis.to_vec();
    let base = rank(&rows, ncols);
    rows.push(v.to_vec());
    rank(&rows, ncols) == base
}

/// Coefficients `c` with `sum c_i basis_i = v`, if `v` lies in the span.
pub fn coordinates(v: &[Rat], basis: &[RatVec]) -> Option<RatVec> {
    let k = basis.len();
    let n = v.len();
    // Solve B^T c = v as an augmented system with n equations in k unknowns.
    let aug: Vec<RatVec> = (0..n)
        .map(|i| {
            let mut row: RatVec = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let (r, pivots) = rref(&aug, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rat::zero(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        c[p] = row[k].clone();
    }
    Some(c)
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersect_spans(a: &[RatVec], b: &[RatVec], ncols: usize) -> Vec<RatVec> {
    let mut normals = nullspace(a, ncols);
    normals.extend(nullspace(b, ncols));
    nullspace(&normals, ncols)
}

/// Orthogonal projection of `v` onto the orthogonal complement of `span(basis)`.
/// Also returns the coefficients of the removed component.
pub fn project_out(v: &[Rat], basis: &[RatVec]) -> (RatVec, RatVec) {
    let k = basis.len();
    if k == 0 {
        return (v.to_vec(), Vec::new());
    }
    // Gram system G c = B v.
    let aug: Vec<RatVec> = (0..k)
        .map(|i| {
            let mut row: RatVec = (0..k).map(|j| dot(&basis[i], &basis[j])).collect();
            row.push(dot(&basis[i], v));
            row
        })
        .collect();
    let (r, pivots) = rref(&aug, k + 1);
    let mut c = vec![Rat::zero(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        if p < k {
            c[p] = row[k].clone();
        }
    }
    let mut out = v.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        if ci.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o -= ci * x;
        }
    }
    (out, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::num::{rat_vec, ratio};

    #[test]
    fn nullspace_of_plane() {
        let rows = vec![rat_vec(&[1, 1, 1])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(v, &rows[0]).is_zero());
        }
    }

    #[test]
    fn coordinates_and_projection() {
        let basis = vec![rat_vec(&[1, 1, 0]), rat_vec(&[0, 1, 1])];
        let c = coordinates(&rat_vec(&[2, 5, 3]), &basis).unwrap();
        assert_eq!(c, rat_vec(&[2, 3]));
        assert!(coordinates(&rat_vec(&[1, 0, 0]), &basis).is_none());
        let (p, _) = project_out(&rat_vec(&[1, 0, 0]), &[rat_vec(&[1, 1, 0])]);
        assert_eq!(p, vec![ratio(1, 2), ratio(-1, 2), Rat::zero()]);
    }

    #[test]
    fn intersection_of_planes() {
        let a = vec![rat_vec(&[1, 0, 0]), rat_vec(&[0, 1, 0])];
        let b = vec![rat_vec(&[0, 1, 0]), rat_vec(&[0, 0, 1])];
        let i = intersect_spans(&a, &b, 3);
        assert_eq!(i.len(), 1);
        assert!(i[0][0].is_zero() && i[0][2].is_zero());
    }
}

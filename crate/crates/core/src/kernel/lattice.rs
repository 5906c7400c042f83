//! Integer lattices: Smith and Hermite normal forms, indices, saturation.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::{coordinates, nullspace};
use super::num::{clear_denominators, ext_gcd_all, to_rat, Int, IntVec, Rat, RatVec};

pub type IntMat = Vec<IntVec>;

pub fn identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(Int::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// Smith normal form `u * m * v = d`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn divisors(&self) -> Vec<Int> {
        let n = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..n).map(|i| self.d[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn snf(m: &IntMat, cols: usize) -> Snf {
    let rows = m.len();
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v);
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility chain
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let one = -Int::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(a, u, v)
}

fn finish(d: IntMat, u: IntMat, v: IntMat) -> Snf {
    Snf { d, u, v }
}

// row[i] -= q * row[t]
fn row_axpy(a: &mut IntMat, i: usize, t: usize, q: &Int) {
    let src = a[t].clone();
    for (x, y) in a[i].iter_mut().zip(&src) {
        *x -= q * y;
    }
}

// col[j] -= q * col[t]
fn col_axpy(a: &mut IntMat, j: usize, t: usize, q: &Int) {
    for row in a.iter_mut() {
        let y = row[t].clone();
        row[j] -= q * y;
    }
}

/// Row-style Hermite normal form; zero rows dropped.
pub fn hnf(m: &IntMat, cols: usize) -> IntMat {
    let mut a: IntMat = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len()).filter(|&i| !a[i][c].is_zero()).min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = best else { break };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, r, &q);
                clean &= a[i][c].is_zero();
            }
            if clean {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                if !q.is_zero() {
                    row_axpy(&mut a, i, r, &q);
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LatticeIndex {
    Finite(Int),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&Int> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// `[Z^m : L]` for the lattice generated by `gens`.
pub fn lattice_index(gens: &[IntVec], m: usize) -> LatticeIndex {
    if m == 0 {
        return LatticeIndex::Finite(Int::one());
    }
    let s = snf(&gens.to_vec(), m);
    let divs = s.divisors();
    if divs.len() < m {
        return LatticeIndex::Infinite;
    }
    LatticeIndex::Finite(divs.iter().fold(Int::one(), |acc, d| acc * d))
}

/// A sublattice of `Z^m` given by a basis of row vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lattice {
    pub ambient: usize,
    pub basis: Vec<IntVec>,
}

impl Lattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn standard(m: usize) -> Self {
        Lattice { ambient: m, basis: identity(m) }
    }

    pub fn basis_rat(&self) -> Vec<RatVec> {
        self.basis.iter().map(|b| to_rat(b)).collect()
    }

    /// Index of the lattice generated by `gens` inside `self`. The generators
    /// must lie in the rational span of `self`.
    pub fn index_of(&self, gens: &[IntVec]) -> LatticeIndex {
        let basis = self.basis_rat();
        let coords: Vec<IntVec> = gens
            .iter()
            .map(|g| {
                let c = coordinates(&to_rat(g), &basis).expect("generator outside lattice span");
                c.iter().map(|x| x.to_integer()).collect()
            })
            .collect();
        lattice_index(&coords, self.rank())
    }
}

/// Basis of `span(gens) ∩ Z^m`, in Hermite normal form.
pub fn saturate(span_gens: &[RatVec], m: usize) -> Lattice {
    let normals: Vec<IntVec> = nullspace(span_gens, m).iter().map(|v| clear_denominators(v)).collect();
    if normals.is_empty() {
        return Lattice::standard(m);
    }
    let s = snf(&normals, m);
    let r = s.divisors().len();
    // kernel of the normals over Z: trailing columns of v
    let kernel: IntMat = (r..m).map(|j| s.v.iter().map(|row| row[j].clone()).collect()).collect();
    Lattice { ambient: m, basis: hnf(&kernel, m) }
}

/// An integer vector of `outer` whose class generates `outer / inner ≅ Z`,
/// oriented so that `direction` maps to a positive multiple of it.
/// Both lattices must be saturated and `rank(outer) = rank(inner) + 1`.
pub fn quotient_generator(outer: &Lattice, inner: &Lattice, direction: &[Rat]) -> IntVec {
    let ob = outer.basis_rat();
    let d = outer.rank();
    // inner basis in outer coordinates
    let coords: Vec<RatVec> = inner
        .basis
        .iter()
        .map(|g| coordinates(&to_rat(g), &ob).expect("inner lattice not contained in outer"))
        .collect();
    let k = clear_denominators(&nullspace(&coords, d)[0]);
    let (_, y) = ext_gcd_all(&k);
    let mut gen: IntVec = vec![Int::zero(); outer.ambient];
    for (c, b) in y.iter().zip(&outer.basis) {
        for (g, x) in gen.iter_mut().zip(b) {
            *g += c * x;
        }
    }
    let t = coordinates(direction, &ob).expect("direction outside outer span");
    let s: Rat = k.iter().zip(&t).fold(Rat::zero(), |acc, (ki, ti)| acc + ti * ki);
    if s.is_negative() {
        gen = gen.iter().map(|x| -x).collect();
    }
    gen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::num::{int_vec, rat_vec};

    fn diag_of(s: &Snf) -> Vec<Int> {
        s.divisors()
    }

    #[test]
    fn snf_examples() {
        let m = vec![int_vec(&[2, 0]), int_vec(&[0, 3])];
        assert_eq!(diag_of(&snf(&m, 2)), int_vec(&[1, 6]));
        let s = snf(&identity(3), 3);
        assert_eq!(s.d, identity(3));
        let s = snf(&vec![int_vec(&[4, 6])], 2);
        assert_eq!(s.d, vec![int_vec(&[2, 0])]);
    }

    #[test]
    fn snf_reconstructs() {
        let m = vec![int_vec(&[2, 4, 4]), int_vec(&[-6, 6, 12]), int_vec(&[10, -4, -16])];
        let s = snf(&m, 3);
        assert_eq!(mat_mul(&mat_mul(&s.u, &m), &s.v), s.d);
        assert_eq!(s.divisors(), int_vec(&[2, 6, 12]));
    }

    #[test]
    fn index_examples() {
        let idx = |g: Vec<IntVec>| lattice_index(&g, 2);
        assert_eq!(idx(vec![int_vec(&[2, 0]), int_vec(&[0, 3])]), LatticeIndex::Finite(6.into()));
        assert_eq!(idx(vec![int_vec(&[1, 1]), int_vec(&[1, -1])]), LatticeIndex::Finite(2.into()));
        assert_eq!(lattice_index(&identity(4), 4), LatticeIndex::Finite(1.into()));
        assert_eq!(idx(vec![int_vec(&[1, 1]), int_vec(&[2, 2])]), LatticeIndex::Infinite);
    }

    #[test]
    fn saturate_examples() {
        assert_eq!(saturate(&[rat_vec(&[2, 2])], 2).basis, vec![int_vec(&[1, 1])]);
        assert_eq!(saturate(&[rat_vec(&[1, 0]), rat_vec(&[0, 1])], 2).basis, identity(2));
        assert_eq!(saturate(&[rat_vec(&[2, 4, 6])], 3).basis, vec![int_vec(&[1, 2, 3])]);
        assert_eq!(saturate(&[], 3).rank(), 0);
    }

    #[test]
    fn quotient_generator_is_primitive() {
        let outer = saturate(&[rat_vec(&[1, 0]), rat_vec(&[0, 1])], 2);
        let inner = saturate(&[rat_vec(&[1, 1])], 2);
        let g = quotient_generator(&outer, &inner, &rat_vec(&[-3, 5]));
        // class of g generates Z^2 / Z(1,1), oriented like (-3,5) ~ 8*(0,1) mod (1,1)
        let mut gens = inner.basis.clone();
        gens.push(g.clone());
        assert_eq!(lattice_index(&gens, 2), LatticeIndex::Finite(1.into()));
        assert!(g[1].clone() - g[0].clone() > Int::zero());
    }
}

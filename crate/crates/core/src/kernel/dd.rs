//! Double description method for cones `{y : E y = 0, H y >= 0}`.
//!
//! Works entirely over the integers: every stored generator is a primitive
//! integer vector. Adjacency of rays is decided combinatorially from the sets
//! of processed inequalities each ray makes tight.

use num_traits::{Signed, Zero};

use super::lattice::identity;
use super::num::{dot_int, make_primitive_int, Int, IntVec};

/// Generators of a polyhedral cone: a lineality basis and extreme rays
/// (extreme modulo the lineality space).
#[derive(Debug, Clone, Default)]
pub struct ConeGenerators {
    pub lineality: Vec<IntVec>,
    pub rays: Vec<IntVec>,
}

#[derive(Clone)]
struct Ray {
    v: IntVec,
    tight: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

/// `a * x - b * y` with positive scalars, made primitive.
fn combine(a: &Int, x: &[Int], b: &Int, y: &[Int]) -> IntVec {
    let v: IntVec = x.iter().zip(y).map(|(xi, yi)| a * xi - b * yi).collect();
    make_primitive_int(&v)
}

pub fn cone_generators(dim: usize, eqs: &[IntVec], ineqs: &[IntVec]) -> ConeGenerators {
    let words = ineqs.len().div_ceil(64).max(1);
    let mut lineality: Vec<IntVec> = identity(dim);
    let mut rays: Vec<Ray> = Vec::new();

    for e in eqs {
        let Some(p) = lineality.iter().position(|l| !dot_int(e, l).is_zero()) else {
            continue;
        };
        let l0 = lineality.swap_remove(p);
        let s0 = dot_int(e, &l0);
        for l in lineality.iter_mut() {
            let s = dot_int(e, l);
            if !s.is_zero() {
                *l = combine(&s0, l, &s, &l0);
            }
        }
    }

    for (hi, h) in ineqs.iter().enumerate() {
        if let Some(p) = lineality.iter().position(|l| !dot_int(h, l).is_zero()) {
            let mut l0 = lineality.swap_remove(p);
            let mut s0 = dot_int(h, &l0);
            if s0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s0 = -s0;
            }
            for l in lineality.iter_mut() {
                let s = dot_int(h, l);
                if !s.is_zero() {
                    *l = combine(&s0, l, &s, &l0);
                }
            }
            for r in rays.iter_mut() {
                let s = dot_int(h, &r.v);
                if !s.is_zero() {
                    r.v = combine(&s0, &r.v, &s, &l0);
                }
                bit_set(&mut r.tight, hi);
            }
            // l0 itself is strictly positive on h; tight on all earlier ones
            let mut tight = vec![0u64; words];
            for j in 0..hi {
                bit_set(&mut tight, j);
            }
            rays.push(Ray { v: l0, tight });
            continue;
        }

        let vals: Vec<Int> = rays.iter().map(|r| dot_int(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    bit_set(&mut r.tight, hi);
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            let mut r = r.clone();
            if vals[i].is_zero() {
                bit_set(&mut r.tight, hi);
            }
            next.push(r);
        }
        for &p in &pos {
            for &n in &neg {
                let common = and(&rays[p].tight, &rays[n].tight);
                let adjacent = rays.iter().enumerate().all(|(k, r)| k == p || k == n || !subset(&common, &r.tight));
                if !adjacent {
                    continue;
                }
                let vp = &vals[p];
                let vn = -&vals[n];
                let v: IntVec = rays[n].v.iter().zip(&rays[p].v).map(|(a, b)| vp * a + &vn * b).collect();
                let v = make_primitive_int(&v);
                let mut tight = common;
                bit_set(&mut tight, hi);
                next.push(Ray { v, tight });
            }
        }
        rays = next;
    }

    let mut out_rays: Vec<IntVec> = rays.into_iter().map(|r| r.v).collect();
    out_rays.sort();
    out_rays.dedup();
    ConeGenerators { lineality, rays: out_rays }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::num::int_vec;

    #[test]
    fn orthant() {
        let g = cone_generators(2, &[], &[int_vec(&[1, 0]), int_vec(&[0, 1])]);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn halfspace_keeps_lineality() {
        let g = cone_generators(2, &[], &[int_vec(&[1, 0])]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
        assert!(g.rays[0][0].is_positive());
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // homogenized unit square: t >= 0, x >= 0, y >= 0, t - x >= 0, t - y >= 0
        let h = vec![
            int_vec(&[1, 0, 0]),
            int_vec(&[0, 1, 0]),
            int_vec(&[0, 0, 1]),
            int_vec(&[1, -1, 0]),
            int_vec(&[1, 0, -1]),
        ];
        let g = cone_generators(3, &[], &h);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays.len(), 4);
    }

    #[test]
    fn infeasible_is_zero_cone() {
        let g = cone_generators(1, &[], &[int_vec(&[1]), int_vec(&[-1])]);
        assert!(g.lineality.is_empty() && g.rays.is_empty());
    }
}

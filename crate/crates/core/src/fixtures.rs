//! Small named cycles used by the test suites and the shipped fixture files.

use num_traits::Zero;

use crate::cycles::{BlockStructure, TropicalCycle, WeightedFacet};
use crate::kernel::num::{int_vec, neg_int, unit, IntVec, Rat};
use crate::kernel::polyhedron::Polyhedron;
use crate::ops::tropical_hyperplane;

fn facet(poly: Polyhedron, weight: u64) -> WeightedFacet {
    WeightedFacet { poly, weight }
}

fn build(blocks: Vec<usize>, facets: Vec<WeightedFacet>) -> TropicalCycle {
    let ambient = BlockStructure::new(blocks).expect("valid blocks");
    TropicalCycle::new(ambient, facets).expect("valid cycle")
}

/// Fan `{0} ∪ rays(−Σe_i, e_1, …, e_m)` of dimension `d`, each cone spanned
/// by `d` of the `m + 1` rays, weight `w`.
pub fn standard_fan(m: usize, d: usize, w: u64) -> TropicalCycle {
    let mut rays: Vec<IntVec> = (0..m).map(|i| unit(m, i)).collect();
    rays.push(neg_int(&vec![1.into(); m].into_iter().collect::<IntVec>()));
    let mut facets = Vec::new();
    for s in 0u32..(1 << (m + 1)) {
        if s.count_ones() as usize != d {
            continue;
        }
        let gens: Vec<IntVec> = (0..=m).filter(|i| s & (1 << i) != 0).map(|i| rays[i].clone()).collect();
        facets.push(facet(Polyhedron::cone(m, &gens), w));
    }
    build(vec![m], facets)
}

/// Standard tropical line in `R^2`.
pub fn standard_line() -> TropicalCycle {
    standard_fan(2, 1, 1)
}

/// Standard tropical line with every ray of weight `d`.
pub fn scaled_line(d: u64) -> TropicalCycle {
    standard_fan(2, 1, d)
}

/// Standard tropical hyperplane in `R^m`.
pub fn standard_hyperplane(m: usize) -> TropicalCycle {
    tropical_hyperplane(&vec![Rat::zero(); m + 1]).expect("m >= 1")
}

/// Standard tropical plane in `R^3` (six two-dimensional cones).
pub fn standard_plane() -> TropicalCycle {
    standard_fan(3, 2, 1)
}

/// The linear space spanned by `gens`, weight 1.
pub fn linear_space(blocks: Vec<usize>, gens: &[IntVec]) -> TropicalCycle {
    let m = blocks.iter().sum();
    build(blocks, vec![facet(Polyhedron::linear_space(m, gens), 1)])
}

/// `span(e_1, e_2) ∪ span(e_3, e_4)` in `R^2 × R^2`.
pub fn worked_a() -> TropicalCycle {
    let p1 = Polyhedron::linear_space(4, &[unit(4, 0), unit(4, 1)]);
    let p2 = Polyhedron::linear_space(4, &[unit(4, 2), unit(4, 3)]);
    build(vec![2, 2], vec![facet(p1, 1), facet(p2, 1)])
}

/// Standard plane of `R^3 × {0}` together with `span(e_3, e_4)`, in
/// `R^2 × R × R`.
pub fn worked_b() -> TropicalCycle {
    let mut facets: Vec<WeightedFacet> = standard_plane()
        .facets()
        .iter()
        .map(|f| {
            let rays: Vec<IntVec> = f.poly.rays().iter().map(|r| pad(r, 4)).collect();
            facet(Polyhedron::cone(4, &rays), f.weight)
        })
        .collect();
    facets.push(facet(Polyhedron::linear_space(4, &[unit(4, 2), unit(4, 3)]), 1));
    build(vec![2, 1, 1], facets)
}

fn pad(v: &[crate::kernel::num::Int], m: usize) -> IntVec {
    let mut out = v.to_vec();
    out.resize(m, 0.into());
    out
}

/// `R e_1 ∪ ((0, 1) + R e_1)` in `R^2`.
pub fn parallel_lines() -> TropicalCycle {
    let e1 = int_vec(&[1, 0]);
    let l0 = Polyhedron::linear_space(2, std::slice::from_ref(&e1));
    let l1 = l0.translate(&[Rat::zero(), Rat::from_integer(1.into())]).expect("same ambient");
    build(vec![2], vec![facet(l0, 1), facet(l1, 1)])
}

/// Diagonal `R(1, 1)` in `R × R`.
pub fn diagonal_11() -> TropicalCycle {
    linear_space(vec![1, 1], &[int_vec(&[1, 1])])
}

/// Union of the `m` coordinate hyperplanes of `R^m`, unit weights.
pub fn coordinate_hyperplanes(m: usize) -> TropicalCycle {
    let facets = (0..m)
        .map(|i| {
            let gens: Vec<IntVec> = (0..m).filter(|&j| j != i).map(|j| unit(m, j)).collect();
            facet(Polyhedron::linear_space(m, &gens), 1)
        })
        .collect();
    build(vec![m], facets)
}

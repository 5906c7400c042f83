//! Tropical cycles: weighted rational polyhedral complexes over a block
//! decomposition of the ambient space.

use std::collections::BTreeMap;
use std::ops::Range;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::kernel::lattice::quotient_generator;
use crate::kernel::linalg::in_span;
use crate::kernel::num::{sub, to_rat, Int, IntVec, Rat, RatVec};
use crate::kernel::polyhedron::{common_refinement, Halfspace, Polyhedron};

/// Block sizes `(m_1, …, m_k)` of `R^{m_1} × … × R^{m_k}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockStructure {
    blocks: Vec<usize>,
}

impl BlockStructure {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidComplex("block structure needs at least one block".into()));
        }
        if let Some(i) = blocks.iter().position(|&b| b == 0) {
            return Err(Error::BadBlockIndex(i));
        }
        Ok(BlockStructure { blocks })
    }

    /// A single block `R^m`.
    pub fn single(m: usize) -> Self {
        BlockStructure { blocks: vec![m] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn range(&self, i: usize) -> Range<usize> {
        let start: usize = self.blocks[..i].iter().sum();
        start..start + self.blocks[i]
    }

    /// Coordinates of the blocks in `subset` (0-based block indices).
    pub fn coords(&self, subset: &[usize]) -> Result<Vec<usize>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut out = Vec::new();
        let mut seen = subset.to_vec();
        seen.sort_unstable();
        seen.dedup();
        for &i in &seen {
            if i >= self.k() {
                return Err(Error::BadBlockIndex(i));
            }
            out.extend(self.range(i));
        }
        Ok(out)
    }

    pub fn concat(&self, other: &BlockStructure) -> BlockStructure {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().copied());
        BlockStructure { blocks }
    }

    /// Sub-structure made of the listed blocks, in order.
    pub fn select(&self, subset: &[usize]) -> BlockStructure {
        BlockStructure { blocks: subset.iter().map(|&i| self.blocks[i]).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightedFacet {
    pub poly: Polyhedron,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCycle {
    ambient: BlockStructure,
    dim: usize,
    facets: Vec<WeightedFacet>,
}

/// Converts a lattice index or weight product to a facet weight.
pub(crate) fn to_weight(n: &Int) -> u64 {
    n.to_u64().expect("facet weight exceeds u64")
}

impl TropicalCycle {
    /// Facets must be nonempty and live in the ambient space. The cycle's
    /// dimension is the largest dimension of a positive-weight facet.
    pub fn new(ambient: BlockStructure, facets: Vec<WeightedFacet>) -> Result<Self> {
        let dim = facets
            .iter()
            .filter(|f| f.weight > 0)
            .map(|f| f.poly.dim())
            .max()
            .or_else(|| facets.iter().map(|f| f.poly.dim()).max())
            .unwrap_or(0);
        Self::with_dim(ambient, dim, facets)
    }

    pub fn with_dim(ambient: BlockStructure, dim: usize, mut facets: Vec<WeightedFacet>) -> Result<Self> {
        let m = ambient.total();
        for f in &facets {
            if f.poly.ambient() != m {
                return Err(Error::DimensionMismatch { expected: m, found: f.poly.ambient() });
            }
            if f.poly.is_empty() {
                return Err(Error::EmptyPolyhedron);
            }
        }
        facets.sort();
        Ok(TropicalCycle { ambient, dim, facets })
    }

    /// Merges equal polyhedra (summing weights) and drops zero weights.
    pub fn from_weighted(ambient: BlockStructure, dim: usize, items: Vec<(Polyhedron, u64)>) -> Self {
        let mut merged: BTreeMap<Polyhedron, u64> = BTreeMap::new();
        for (p, w) in items {
            if w > 0 {
                *merged.entry(p).or_insert(0) += w;
            }
        }
        let facets = merged.into_iter().map(|(poly, weight)| WeightedFacet { poly, weight }).collect();
        TropicalCycle { ambient, dim, facets }
    }

    pub fn empty(ambient: BlockStructure, dim: usize) -> Self {
        TropicalCycle { ambient, dim, facets: Vec::new() }
    }

    pub fn ambient(&self) -> &BlockStructure {
        &self.ambient
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.total()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[WeightedFacet] {
        &self.facets
    }

    pub fn positive_facets(&self) -> impl Iterator<Item = &WeightedFacet> {
        self.facets.iter().filter(|f| f.weight > 0)
    }

    pub fn is_empty(&self) -> bool {
        self.positive_facets().next().is_none()
    }

    pub fn with_blocks(mut self, ambient: BlockStructure) -> Result<Self> {
        if ambient.total() != self.ambient.total() {
            return Err(Error::DimensionMismatch { expected: self.ambient.total(), found: ambient.total() });
        }
        self.ambient = ambient;
        Ok(self)
    }

    /// Support membership.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.positive_facets().any(|f| f.poly.contains(x))
    }
}

/// Outcome of [`validate_complex`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub pure: bool,
    /// Facet index pairs whose intersection is not a common face.
    pub bad_pairs: Vec<(usize, usize)>,
}

impl ComplexReport {
    pub fn ok(&self) -> bool {
        self.pure && self.bad_pairs.is_empty()
    }
}

fn is_face_of(g: &Polyhedron, p: &Polyhedron) -> Result<bool> {
    let x = g.relative_interior_point()?;
    Ok(p.face_containing(&x) == *g)
}

pub fn validate_complex(cycle: &TropicalCycle) -> ComplexReport {
    let pure = cycle.positive_facets().all(|f| f.poly.dim() == cycle.dim);
    let facets = cycle.facets();
    let mut bad_pairs = Vec::new();
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            let (p, q) = (&facets[i].poly, &facets[j].poly);
            let g = p.intersect(q).expect("same ambient");
            if g.is_empty() {
                continue;
            }
            let ok = is_face_of(&g, p).unwrap_or(false) && is_face_of(&g, q).unwrap_or(false);
            if !ok {
                bad_pairs.push((i, j));
            }
        }
    }
    ComplexReport { pure, bad_pairs }
}

/// A codimension-one face with the primitive quotient generators `v_{P/Q}`
/// of the facets around it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codim1Record {
    pub face: Polyhedron,
    pub incident: Vec<(usize, IntVec)>,
}

/// Groups polyhedra by affine hull.
pub(crate) fn group_by_hull<T>(items: Vec<(Polyhedron, T)>) -> BTreeMap<Vec<Halfspace>, Vec<(Polyhedron, T)>> {
    let mut groups: BTreeMap<Vec<Halfspace>, Vec<(Polyhedron, T)>> = BTreeMap::new();
    for (p, t) in items {
        groups.entry(p.equalities().to_vec()).or_default().push((p, t));
    }
    groups
}

fn require_pure(cycle: &TropicalCycle) -> Result<()> {
    if cycle.positive_facets().any(|f| f.poly.dim() != cycle.dim) {
        return Err(Error::InvalidComplex("positive-weight facets differ in dimension".into()));
    }
    Ok(())
}

/// Enumerates codimension-one faces of the positive facets. Faces lying in a
/// common affine hull are refined against each other first, so the records
/// stay correct even when facet boundaries only partially overlap.
pub fn codim1_faces(cycle: &TropicalCycle) -> Result<Vec<Codim1Record>> {
    require_pure(cycle)?;
    if cycle.dim == 0 {
        return Ok(Vec::new());
    }
    let facets = cycle.facets();
    let mut faces: Vec<(Polyhedron, ())> = Vec::new();
    for f in cycle.positive_facets() {
        faces.extend(f.poly.facets().into_iter().map(|q| (q, ())));
    }
    let mut records = Vec::new();
    for (_, group) in group_by_hull(faces) {
        let pieces: Vec<Polyhedron> = group.into_iter().map(|(p, _)| p).collect();
        for cell in common_refinement(&pieces) {
            let x = cell.relative_interior_point()?;
            let lq = cell.lattice();
            let mut incident = Vec::new();
            for (i, f) in facets.iter().enumerate() {
                if f.weight == 0 || !f.poly.contains(&x) || f.poly.contains_relint(&x) {
                    continue;
                }
                if !f.poly.contains_poly(&cell) {
                    continue;
                }
                let dir = sub(&f.poly.relative_interior_point()?, &x);
                incident.push((i, quotient_generator(&f.poly.lattice(), &lq, &dir)));
            }
            if !incident.is_empty() {
                records.push(Codim1Record { face: cell, incident });
            }
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub balanced: bool,
    pub violations: Vec<Polyhedron>,
}

fn weighted_sum(cycle: &TropicalCycle, rec: &Codim1Record) -> RatVec {
    let m = cycle.ambient_dim();
    let mut sum = vec![Int::from(0); m];
    for (i, v) in &rec.incident {
        let w = Int::from(cycle.facets()[*i].weight);
        for (s, x) in sum.iter_mut().zip(v) {
            *s += &w * x;
        }
    }
    to_rat(&sum)
}

/// Checks `Σ ω(P) v_{P/Q} ∈ Lin(Q)` at every codimension-one face.
pub fn check_balancing(cycle: &TropicalCycle) -> Result<BalanceReport> {
    let m = cycle.ambient_dim();
    let mut violations = Vec::new();
    for rec in codim1_faces(cycle)? {
        let s = weighted_sum(cycle, &rec);
        if !in_span(&s, &rec.face.lin_basis(), m) {
            violations.push(rec.face);
        }
    }
    Ok(BalanceReport { balanced: violations.is_empty(), violations })
}

pub fn is_balanced(cycle: &TropicalCycle) -> Result<bool> {
    Ok(check_balancing(cycle)?.balanced)
}

/// Sum of the weights of a zero-dimensional cycle.
pub fn degree0(cycle: &TropicalCycle) -> Result<u64> {
    if cycle.dim != 0 && !cycle.is_empty() {
        return Err(Error::WrongDimension { expected: 0, found: cycle.dim });
    }
    Ok(cycle.positive_facets().map(|f| f.weight).sum())
}

pub fn translate(cycle: &TropicalCycle, v: &[Rat]) -> Result<TropicalCycle> {
    let m = cycle.ambient_dim();
    if v.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: v.len() });
    }
    let facets = cycle
        .facets
        .iter()
        .map(|f| Ok(WeightedFacet { poly: f.poly.translate(v)?, weight: f.weight }))
        .collect::<Result<Vec<_>>>()?;
    TropicalCycle::with_dim(cycle.ambient.clone(), cycle.dim, facets)
}

/// Direct product; blocks are concatenated.
pub fn product(a: &TropicalCycle, b: &TropicalCycle) -> TropicalCycle {
    let mut facets = Vec::new();
    for f in a.positive_facets() {
        for g in b.positive_facets() {
            facets.push(WeightedFacet { poly: f.poly.product(&g.poly), weight: f.weight * g.weight });
        }
    }
    facets.sort();
    TropicalCycle { ambient: a.ambient.concat(&b.ambient), dim: a.dim + b.dim, facets }
}

/// Recession fan with weights `Σ ω(P)` over facets whose recession cone
/// contains the cell (only full-dimensional recession cones contribute).
pub fn recession_cycle(cycle: &TropicalCycle) -> Result<TropicalCycle> {
    let report = check_balancing(cycle)?;
    if !report.balanced {
        return Err(Error::Unbalanced(report.violations.len()));
    }
    let d = cycle.dim;
    let mut cones = Vec::new();
    for f in cycle.positive_facets() {
        let r = f.poly.recession_cone()?;
        if r.dim() == d {
            cones.push((r, f.weight));
        }
    }
    let mut items = Vec::new();
    for (_, group) in group_by_hull(cones) {
        let pieces: Vec<Polyhedron> = group.iter().map(|(p, _)| p.clone()).collect();
        for cell in common_refinement(&pieces) {
            let x = cell.relative_interior_point()?;
            let w: u64 = group.iter().filter(|(p, _)| p.contains(&x)).map(|(_, w)| *w).sum();
            items.push((cell, w));
        }
    }
    Ok(TropicalCycle::from_weighted(cycle.ambient.clone(), d, items))
}

/// Subdivides every facet by the linear hyperplanes `a · x = 0`.
pub fn refine_against(cycle: &TropicalCycle, hyperplanes: &[IntVec]) -> TropicalCycle {
    let mut facets = Vec::new();
    for f in &cycle.facets {
        let mut cells = vec![f.poly.clone()];
        for a in hyperplanes {
            let h = Halfspace::new(a.clone(), Rat::from_integer(Int::from(0)));
            cells = cells.iter().flat_map(|c| c.split(&h)).collect();
        }
        facets.extend(cells.into_iter().map(|poly| WeightedFacet { poly, weight: f.weight }));
    }
    facets.sort();
    TropicalCycle { ambient: cycle.ambient.clone(), dim: cycle.dim, facets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::num::{int_vec, rat_vec};

    fn ray(v: &[i64]) -> Polyhedron {
        Polyhedron::cone(v.len(), &[int_vec(v)])
    }

    fn line_cycle(weights: [u64; 3]) -> TropicalCycle {
        let rays = [ray(&[1, 0]), ray(&[0, 1]), ray(&[-1, -1])];
        let facets = rays.into_iter().zip(weights).map(|(poly, weight)| WeightedFacet { poly, weight }).collect();
        TropicalCycle::new(BlockStructure::single(2), facets).unwrap()
    }

    fn point(x: &[i64], w: u64, m: usize) -> WeightedFacet {
        assert_eq!(x.len(), m);
        WeightedFacet { poly: Polyhedron::point(&rat_vec(x)), weight: w }
    }

    #[test]
    fn validate_examples() {
        let seg = |a: [i64; 2], b: [i64; 2]| Polyhedron::from_v(2, &[rat_vec(&a), rat_vec(&b)], &[], &[]);
        let good = TropicalCycle::new(
            BlockStructure::single(2),
            vec![
                WeightedFacet { poly: seg([0, 0], [1, 0]), weight: 1 },
                WeightedFacet { poly: seg([1, 0], [1, 1]), weight: 1 },
            ],
        )
        .unwrap();
        assert!(validate_complex(&good).ok());

        let sq = |lo: i64, hi: i64| {
            Polyhedron::from_v(
                2,
                &[rat_vec(&[lo, lo]), rat_vec(&[hi, lo]), rat_vec(&[lo, hi]), rat_vec(&[hi, hi])],
                &[],
                &[],
            )
        };
        let overlap = TropicalCycle::new(
            BlockStructure::single(2),
            vec![WeightedFacet { poly: sq(0, 2), weight: 1 }, WeightedFacet { poly: sq(1, 3), weight: 1 }],
        )
        .unwrap();
        assert_eq!(validate_complex(&overlap).bad_pairs, vec![(0, 1)]);

        let mixed = TropicalCycle::new(
            BlockStructure::single(2),
            vec![WeightedFacet { poly: seg([5, 5], [6, 5]), weight: 1 }, WeightedFacet { poly: sq(0, 1), weight: 1 }],
        )
        .unwrap();
        assert!(!validate_complex(&mixed).pure);
    }

    #[test]
    fn codim1_examples() {
        let recs = codim1_faces(&line_cycle([1, 1, 1])).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].incident.len(), 3);
        assert_eq!(recs[0].face, Polyhedron::point(&rat_vec(&[0, 0])));

        let seg = Polyhedron::from_v(2, &[rat_vec(&[0, 0]), rat_vec(&[1, 0])], &[], &[]);
        let c = TropicalCycle::new(BlockStructure::single(2), vec![WeightedFacet { poly: seg, weight: 1 }]).unwrap();
        assert_eq!(codim1_faces(&c).unwrap().len(), 2);

        let l = Polyhedron::linear_space(2, &[int_vec(&[1, 0])]);
        let c = TropicalCycle::new(BlockStructure::single(2), vec![WeightedFacet { poly: l, weight: 1 }]).unwrap();
        assert!(codim1_faces(&c).unwrap().is_empty());
    }

    #[test]
    fn balancing_examples() {
        assert!(is_balanced(&line_cycle([1, 1, 1])).unwrap());
        let r = check_balancing(&line_cycle([1, 1, 2])).unwrap();
        assert!(!r.balanced);
        assert_eq!(r.violations, vec![Polyhedron::point(&rat_vec(&[0, 0]))]);
        assert!(is_balanced(&line_cycle([2, 2, 2])).unwrap());
    }

    #[test]
    fn degree_examples() {
        let b = BlockStructure::single(2);
        assert_eq!(degree0(&TropicalCycle::empty(b.clone(), 0)).unwrap(), 0);
        let one = TropicalCycle::new(b.clone(), vec![point(&[0, 0], 3, 2)]).unwrap();
        assert_eq!(degree0(&one).unwrap(), 3);
        let two = TropicalCycle::new(b, vec![point(&[0, 0], 1, 2), point(&[1, 2], 2, 2)]).unwrap();
        assert_eq!(degree0(&two).unwrap(), 3);
        assert!(degree0(&line_cycle([1, 1, 1])).is_err());
    }

    #[test]
    fn translate_examples() {
        let l = line_cycle([1, 1, 1]);
        assert_eq!(translate(&l, &rat_vec(&[0, 0])).unwrap(), l);
        let t = translate(&l, &rat_vec(&[1, 1])).unwrap();
        let recs = codim1_faces(&t).unwrap();
        assert_eq!(recs[0].face, Polyhedron::point(&rat_vec(&[1, 1])));
        assert_eq!(translate(&t, &rat_vec(&[-1, -1])).unwrap(), l);
        assert!(translate(&l, &rat_vec(&[1])).is_err());
    }

    #[test]
    fn product_examples() {
        let p2 = TropicalCycle::new(BlockStructure::single(1), vec![point(&[0], 2, 1)]).unwrap();
        let p3 = TropicalCycle::new(BlockStructure::single(1), vec![point(&[5], 3, 1)]).unwrap();
        let pp = product(&p2, &p3);
        assert_eq!(degree0(&pp).unwrap(), 6);
        assert_eq!(pp.ambient().blocks(), &[1, 1]);

        let line = |m| {
            TropicalCycle::new(
                BlockStructure::single(m),
                vec![WeightedFacet { poly: Polyhedron::linear_space(m, &[int_vec(&[1])]), weight: 1 }],
            )
            .unwrap()
        };
        let plane = product(&line(1), &line(1));
        assert_eq!(plane.dim(), 2);
        assert_eq!(plane.facets()[0].poly, Polyhedron::space(2));

        let prod = product(&line_cycle([1, 1, 1]), &line(1));
        assert_eq!(prod.dim(), 2);
        assert_eq!(prod.facets().len(), 3);
        assert!(is_balanced(&prod).unwrap());
    }

    #[test]
    fn recession_examples() {
        let l = line_cycle([1, 1, 1]);
        assert_eq!(recession_cycle(&l).unwrap(), l);
        let t = translate(&l, &rat_vec(&[1, 1])).unwrap();
        assert_eq!(recession_cycle(&t).unwrap(), l);
        let scaled = line_cycle([2, 2, 2]);
        assert_eq!(recession_cycle(&scaled).unwrap(), scaled);
        assert!(matches!(recession_cycle(&line_cycle([1, 1, 2])), Err(Error::Unbalanced(1))));
    }

    #[test]
    fn refine_examples() {
        let seg = Polyhedron::from_v(1, &[rat_vec(&[-1]), rat_vec(&[1])], &[], &[]);
        let c = TropicalCycle::new(BlockStructure::single(1), vec![WeightedFacet { poly: seg, weight: 1 }]).unwrap();
        let r = refine_against(&c, &[int_vec(&[1])]);
        assert_eq!(r.facets().len(), 2);
        assert!(r.contains(&rat_vec(&[0])) && r.contains(&rat_vec(&[1])));

        let l = line_cycle([1, 1, 1]);
        // x = y misses every open ray
        assert_eq!(refine_against(&l, &[int_vec(&[1, -1])]), l);
        let r = refine_against(&translate(&l, &rat_vec(&[1, 0])).unwrap(), &[int_vec(&[1, 0])]);
        assert_eq!(r.facets().len(), 4);
        assert!(is_balanced(&r).unwrap());
    }
}

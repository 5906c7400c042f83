//! Operations between cycles: stable intersection, linear push-forwards,
//! tropical hyperplanes, divisor positivity and the admissibility search.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::{
    check_balancing, codim1_faces, group_by_hull, product, to_weight, BlockStructure, TropicalCycle, WeightedFacet,
};
use crate::error::{Error, Result};
use crate::kernel::dd::cone_generators;
use crate::kernel::lattice::{lattice_index, saturate, IntMat, Lattice};
use crate::kernel::linalg::{intersect_spans, project_out, rank};
use crate::kernel::num::{clear_denominators, make_primitive_int, neg_int, to_rat, unit, Int, IntVec, Rat, RatVec};
use crate::kernel::polyhedron::{common_refinement, is_covered, Polyhedron};

/// Seeded source of generic displacement vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisplacementSeed {
    pub seed: u64,
    pub denominator_bound: u64,
}

const MAX_REDRAWS: u32 = 32;
const SECOND_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

impl DisplacementSeed {
    pub fn new(seed: u64) -> Self {
        DisplacementSeed { seed, denominator_bound: 97 }
    }

    /// The `attempt`-th candidate vector for this seed.
    pub fn vector(&self, m: usize, attempt: u32) -> RatVec {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(u64::from(attempt).wrapping_mul(0x1000_0001)));
        (0..m)
            .map(|_| {
                let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
                let q: i64 = rng.gen_range(1..=self.denominator_bound.max(1) as i64);
                Rat::new(Int::from(p), Int::from(q))
            })
            .collect()
    }

    /// An independent stream, used for the seed-independence cross-check.
    pub fn sibling(&self) -> Self {
        DisplacementSeed { seed: self.seed ^ SECOND_STREAM, ..*self }
    }
}

fn sum_rank(a: &Polyhedron, b: &Polyhedron) -> usize {
    let mut rows = a.lin_basis();
    rows.extend(b.lin_basis());
    rank(&rows, a.ambient())
}

enum Side {
    Inside,
    Outside,
    Boundary,
}

/// Cone `T_x P − T_x Q`, or `None` when `x` is interior to both (whole space).
fn displacement_cone(p: &Polyhedron, q: &Polyhedron, x: &[Rat]) -> Option<Polyhedron> {
    if p.contains_relint(x) && q.contains_relint(x) {
        return None;
    }
    let m = p.ambient();
    let tp = p.tangent_cone(x);
    let tq = q.tangent_cone(x);
    let mut rays: Vec<IntVec> = tp.rays().to_vec();
    rays.extend(tq.rays().iter().map(|r| neg_int(r)));
    let mut lin: Vec<IntVec> = tp.lineality().to_vec();
    lin.extend(tq.lineality().iter().cloned());
    Some(Polyhedron::from_v(m, &[vec![Rat::zero(); m]], &rays, &lin))
}

fn classify(cone: &Option<Polyhedron>, v: &[Rat]) -> Side {
    let Some(k) = cone else { return Side::Inside };
    if k.equalities().iter().any(|h| !h.eval(v).is_zero()) {
        return Side::Outside;
    }
    let mut boundary = false;
    for h in k.inequalities() {
        let s = h.eval(v);
        if s.is_positive() {
            return Side::Outside;
        }
        boundary |= s.is_zero();
    }
    if boundary || !k.equalities().is_empty() {
        Side::Boundary
    } else {
        Side::Inside
    }
}

struct Contribution {
    weight: u64,
    cone: Option<Polyhedron>,
}

struct Cell {
    poly: Polyhedron,
    contributions: Vec<Contribution>,
}

/// Diagnostics of a stable intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionInfo {
    pub seed: u64,
    /// Number of rejected (non-generic) displacement draws, per stream.
    pub redraws: [u32; 2],
    pub displacements: [RatVec; 2],
}

fn multiplicities(cells: &[Cell], seed: &DisplacementSeed, m: usize) -> Result<(Vec<u64>, u32, RatVec)> {
    'attempt: for attempt in 0..MAX_REDRAWS {
        let v = seed.vector(m, attempt);
        let mut out = Vec::with_capacity(cells.len());
        for cell in cells {
            let mut w = 0;
            for c in &cell.contributions {
                match classify(&c.cone, &v) {
                    Side::Inside => w += c.weight,
                    Side::Outside => {}
                    Side::Boundary => continue 'attempt,
                }
            }
            out.push(w);
        }
        return Ok((out, attempt, v));
    }
    Err(Error::NonGeneric(MAX_REDRAWS))
}

/// Stable intersection by the fan displacement rule. Both inputs must be
/// balanced and live in the same ambient space.
pub fn stable_intersect(a: &TropicalCycle, b: &TropicalCycle, seed: DisplacementSeed) -> Result<TropicalCycle> {
    Ok(stable_intersect_with_info(a, b, seed)?.0)
}

pub fn stable_intersect_with_info(
    a: &TropicalCycle,
    b: &TropicalCycle,
    seed: DisplacementSeed,
) -> Result<(TropicalCycle, IntersectionInfo)> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim(), found: b.ambient_dim() });
    }
    for c in [a, b] {
        let r = check_balancing(c)?;
        if !r.balanced {
            return Err(Error::Unbalanced(r.violations.len()));
        }
    }
    intersect_balanced(a, b, seed)
}

/// Stable intersection without re-checking the inputs' balancing.
pub(crate) fn intersect_balanced(
    a: &TropicalCycle,
    b: &TropicalCycle,
    seed: DisplacementSeed,
) -> Result<(TropicalCycle, IntersectionInfo)> {
    let m = a.ambient_dim();
    let ambient = a.ambient().clone();
    let Some(e) = (a.dim() + b.dim()).checked_sub(m) else {
        let info = IntersectionInfo { seed: seed.seed, redraws: [0, 0], displacements: [Vec::new(), Vec::new()] };
        return Ok((TropicalCycle::empty(ambient, 0), info));
    };

    let la: Vec<Lattice> = a.facets().iter().map(|f| f.poly.lattice()).collect();
    let lb: Vec<Lattice> = b.facets().iter().map(|f| f.poly.lattice()).collect();
    let mut pieces: Vec<(Polyhedron, (usize, usize, u64))> = Vec::new();
    for (i, f) in a.facets().iter().enumerate() {
        if f.weight == 0 {
            continue;
        }
        for (j, g) in b.facets().iter().enumerate() {
            if g.weight == 0 || sum_rank(&f.poly, &g.poly) < m {
                continue;
            }
            let c = f.poly.intersect(&g.poly)?;
            if c.is_empty() || c.dim() != e {
                continue;
            }
            let mut gens = la[i].basis.clone();
            gens.extend(lb[j].basis.iter().cloned());
            let idx = lattice_index(&gens, m);
            let idx = idx.finite().expect("transverse pair spans the ambient space");
            pieces.push((c, (i, j, f.weight * g.weight * to_weight(idx))));
        }
    }

    let mut cells: Vec<Cell> = Vec::new();
    for (_, group) in group_by_hull(pieces) {
        let polys: Vec<Polyhedron> = group.iter().map(|(p, _)| p.clone()).collect();
        for poly in common_refinement(&polys) {
            let x = poly.relative_interior_point()?;
            let contributions = group
                .iter()
                .filter(|(p, _)| p.contains(&x))
                .map(|(_, (i, j, w))| Contribution {
                    weight: *w,
                    cone: displacement_cone(&a.facets()[*i].poly, &b.facets()[*j].poly, &x),
                })
                .collect();
            cells.push(Cell { poly, contributions });
        }
    }

    let (w1, r1, v1) = multiplicities(&cells, &seed, m)?;
    let (w2, r2, v2) = multiplicities(&cells, &seed.sibling(), m)?;
    if w1 != w2 {
        return Err(Error::SeedDependence("fan displacement multiplicities differ".into()));
    }
    let items = cells.into_iter().zip(w1).map(|(c, w)| (c.poly, w)).collect();
    let info = IntersectionInfo { seed: seed.seed, redraws: [r1, r2], displacements: [v1, v2] };
    Ok((TropicalCycle::from_weighted(ambient, e, items), info))
}

/// True iff at every common point the open faces through it span the
/// ambient space (vacuously true for disjoint supports).
pub fn transverse_check(a: &TropicalCycle, b: &TropicalCycle) -> Result<bool> {
    let m = a.ambient_dim();
    if b.ambient_dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: b.ambient_dim() });
    }
    let faces = |c: &TropicalCycle| {
        let mut s = BTreeSet::new();
        for f in c.positive_facets() {
            s.extend(f.poly.faces());
        }
        s
    };
    let (fa, fb) = (faces(a), faces(b));
    for f in &fa {
        for g in &fb {
            let c = f.intersect(g)?;
            if c.is_empty() {
                continue;
            }
            let x = c.relative_interior_point()?;
            if f.contains_relint(&x) && g.contains_relint(&x) && sum_rank(f, g) < m {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A lower-dimensional image facet that the top-dimensional images miss.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpurityReport {
    pub facet: usize,
    pub image: Polyhedron,
    pub image_dim: usize,
    pub top_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pushforward {
    /// `absorbed` is set when lower-dimensional images were dropped because
    /// the top-dimensional ones cover them.
    Cycle {
        cycle: TropicalCycle,
        absorbed: bool,
    },
    Impure(ImpurityReport),
}

impl Pushforward {
    pub fn cycle(&self) -> Option<&TropicalCycle> {
        match self {
            Pushforward::Cycle { cycle, .. } => Some(cycle),
            Pushforward::Impure(_) => None,
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Pushforward::Cycle { .. })
    }
}

fn apply(a: &IntMat, v: &[Int]) -> IntVec {
    a.iter().map(|row| row.iter().zip(v).fold(Int::zero(), |acc, (x, y)| acc + x * y)).collect()
}

/// Image of a balanced cycle under an integer linear map. Top-dimensional
/// image facets are refined against each other and weighted by
/// `ω(P) · [L_R : A(Z_P)]`. If every image drops dimension that rule need
/// not balance, so the refined cells get [`balanced_weights`] instead.
pub fn pushforward_linear(cycle: &TropicalCycle, a: &IntMat, target: BlockStructure) -> Result<Pushforward> {
    let m = cycle.ambient_dim();
    if a.iter().any(|row| row.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: a.first().map_or(0, Vec::len) });
    }
    if target.total() != a.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: target.total() });
    }
    let images: Vec<(usize, Polyhedron, u64, Vec<IntVec>)> = cycle
        .facets()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.weight > 0)
        .map(|(i, f)| {
            let gens = f.poly.lattice().basis.iter().map(|b| apply(a, b)).collect();
            (i, f.poly.map_linear(a), f.weight, gens)
        })
        .collect();
    let Some(d) = images.iter().map(|(_, p, _, _)| p.dim()).max() else {
        return Ok(Pushforward::Cycle { cycle: TropicalCycle::empty(target, cycle.dim()), absorbed: false });
    };
    let tops: Vec<Polyhedron> = images.iter().filter(|im| im.1.dim() == d).map(|im| im.1.clone()).collect();
    let mut absorbed = false;
    for (i, p, _, _) in images.iter().filter(|im| im.1.dim() < d) {
        if !is_covered(p, &tops)? {
            return Ok(Pushforward::Impure(ImpurityReport {
                facet: *i,
                image: p.clone(),
                image_dim: p.dim(),
                top_dim: d,
            }));
        }
        absorbed = true;
    }

    let top_items: Vec<(Polyhedron, (u64, Vec<IntVec>))> =
        images.into_iter().filter(|im| im.1.dim() == d).map(|(_, p, w, g)| (p, (w, g))).collect();
    let mut items = Vec::new();
    for (_, group) in group_by_hull(top_items) {
        let polys: Vec<Polyhedron> = group.iter().map(|(p, _)| p.clone()).collect();
        for cell in common_refinement(&polys) {
            let x = cell.relative_interior_point()?;
            let lr = cell.lattice();
            let mut w = 0;
            for (p, (wp, gens)) in &group {
                if !p.contains(&x) {
                    continue;
                }
                let idx = lr.index_of(gens);
                w += wp * to_weight(idx.finite().expect("image lattice has full rank"));
            }
            items.push((cell, w));
        }
    }
    if d < cycle.dim() {
        let support = TropicalCycle::from_weighted(target, d, items.into_iter().map(|(c, _)| (c, 1)).collect());
        return Ok(Pushforward::Cycle { cycle: balanced_weights(support)?, absorbed });
    }
    Ok(Pushforward::Cycle { cycle: TropicalCycle::from_weighted(target, d, items), absorbed })
}

/// Positive balanced weighting of a pure complex: the sum of the extreme
/// rays of the cone of non-negative balanced weights, made primitive.
fn balanced_weights(support: TropicalCycle) -> Result<TropicalCycle> {
    let n = support.facets().len();
    let m = support.ambient_dim();
    let mut eqs: Vec<IntVec> = Vec::new();
    for rec in codim1_faces(&support)? {
        let lin = rec.face.lin_basis();
        let cols: Vec<RatVec> = rec.incident.iter().map(|(_, v)| project_out(&to_rat(v), &lin).0).collect();
        for c in 0..m {
            let mut row = vec![Rat::zero(); n];
            for ((i, _), col) in rec.incident.iter().zip(&cols) {
                row[*i] += &col[c];
            }
            if row.iter().any(|x| !x.is_zero()) {
                eqs.push(clear_denominators(&row));
            }
        }
    }
    let ineqs: Vec<IntVec> = (0..n).map(|i| unit(n, i)).collect();
    let cone = cone_generators(n, &eqs, &ineqs);
    let mut w = vec![Int::zero(); n];
    for r in &cone.rays {
        for (a, b) in w.iter_mut().zip(r) {
            *a += b;
        }
    }
    if w.iter().any(|x| !x.is_positive()) {
        return Err(Error::InvalidComplex("image admits no positive balanced weighting".into()));
    }
    let w = make_primitive_int(&w);
    let items = support.facets().iter().zip(&w).map(|(f, x)| (f.poly.clone(), to_weight(x))).collect();
    Ok(TropicalCycle::from_weighted(support.ambient().clone(), support.dim(), items))
}

/// `Γ + span(V)`, computed as the push-forward of `Γ × span(V)` under
/// `(x, y) ↦ x + y`.
pub fn minkowski_sum_subspace(cycle: &TropicalCycle, v: &[IntVec]) -> Result<Pushforward> {
    let m = cycle.ambient_dim();
    if let Some(bad) = v.iter().find(|g| g.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
    }
    let space = TropicalCycle::new(
        BlockStructure::single(m),
        vec![WeightedFacet { poly: Polyhedron::linear_space(m, v), weight: 1 }],
    )?;
    let prod = product(cycle, &space);
    let sum: IntMat = (0..m)
        .map(|i| {
            let mut row = unit(m, i);
            row.extend(unit(m, i));
            row
        })
        .collect();
    pushforward_linear(&prod, &sum, cycle.ambient().clone())
}

/// Purity of `Γ + span(V)` alone, without refinement or weights. The
/// images `P + span(V)` are formed directly in the ambient space.
pub fn minkowski_impurity(cycle: &TropicalCycle, v: &[IntVec]) -> Result<Option<ImpurityReport>> {
    let m = cycle.ambient_dim();
    if let Some(bad) = v.iter().find(|g| g.len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
    }
    let images: Vec<(usize, Polyhedron)> = cycle
        .facets()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.weight > 0)
        .map(|(i, f)| {
            let mut lin = f.poly.lineality().to_vec();
            lin.extend(v.iter().cloned());
            (i, Polyhedron::from_v(m, f.poly.vertices(), f.poly.rays(), &lin))
        })
        .collect();
    let d = images.iter().map(|(_, p)| p.dim()).max().unwrap_or(0);
    let tops: Vec<Polyhedron> = images.iter().filter(|(_, p)| p.dim() == d).map(|(_, p)| p.clone()).collect();
    for (i, p) in images.iter().filter(|(_, p)| p.dim() < d) {
        if !is_covered(p, &tops)? {
            return Ok(Some(ImpurityReport { facet: *i, image: p.clone(), image_dim: p.dim(), top_dim: d }));
        }
    }
    Ok(None)
}

/// `dim π_I(Γ)`, the largest rank of a projected facet direction space.
pub fn projection_dim(cycle: &TropicalCycle, subset: &[usize]) -> Result<usize> {
    let coords = cycle.ambient().coords(subset)?;
    Ok(cycle.positive_facets().map(|f| f.poly.projected_dim(&coords)).max().unwrap_or(0))
}

pub fn projection_matrix(blocks: &BlockStructure, subset: &[usize]) -> Result<IntMat> {
    let coords = blocks.coords(subset)?;
    let m = blocks.total();
    Ok(coords.iter().map(|&c| unit(m, c)).collect())
}

/// Push-forward along the coordinate projection onto the blocks in `subset`.
pub fn projection_pushforward(cycle: &TropicalCycle, subset: &[usize]) -> Result<Pushforward> {
    let a = projection_matrix(cycle.ambient(), subset)?;
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    pushforward_linear(cycle, &a, cycle.ambient().select(&sorted))
}

/// `{a : min(c_0, c_1 + a_1, …, c_m + a_m) attained at least twice}`, unit weights.
pub fn tropical_hyperplane(c: &[Rat]) -> Result<TropicalCycle> {
    if c.len() < 2 {
        return Err(Error::WrongDimension { expected: 1, found: 0 });
    }
    let m = c.len() - 1;
    // term_k(a) = c_k + coef_k · a, with coef_0 = 0
    let coef = |k: usize| -> RatVec {
        let mut v = vec![Rat::zero(); m];
        if k > 0 {
            v[k - 1] = Rat::from_integer(Int::from(1));
        }
        v
    };
    let diff = |i: usize, j: usize| -> RatVec { coef(i).iter().zip(coef(j)).map(|(x, y)| x - y).collect() };
    let mut facets = Vec::new();
    for i in 0..=m {
        for j in i + 1..=m {
            // term_i = term_j  <=>  (coef_i - coef_j)·a = c_j - c_i
            let eq = (diff(i, j), &c[j] - &c[i]);
            let ineqs: Vec<(RatVec, Rat)> =
                (0..=m).filter(|&l| l != i && l != j).map(|l| (diff(i, l), &c[l] - &c[i])).collect();
            let poly = Polyhedron::from_h(m, &[eq], &ineqs);
            facets.push(WeightedFacet { poly, weight: 1 });
        }
    }
    TropicalCycle::new(BlockStructure::single(m), facets)
}

/// Outcome of [`is_positive_divisor`]; `witness` spans a line contained in
/// every facet direction space when the divisor is not positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorVerdict {
    pub positive: bool,
    pub witness: Option<IntVec>,
}

pub fn is_positive_divisor(divisor: &TropicalCycle) -> Result<DivisorVerdict> {
    let m = divisor.ambient_dim();
    if divisor.dim() + 1 != m {
        return Err(Error::WrongCodimension { expected: 1, found: m - divisor.dim() });
    }
    let mut common: Vec<RatVec> = (0..m).map(|i| to_rat(&unit(m, i))).collect();
    for f in divisor.positive_facets() {
        common = intersect_spans(&common, &f.poly.lin_basis(), m);
    }
    if divisor.is_empty() || !common.is_empty() {
        let witness = saturate(&common, m).basis.first().cloned().or_else(|| Some(unit(m, 0)));
        return Ok(DivisorVerdict { positive: false, witness });
    }
    Ok(DivisorVerdict { positive: true, witness: None })
}

/// First positive facet pair `(P, P')` with `Lin(P) + Lin(P') = R^m`.
pub fn pair_positive(a: &TropicalCycle, b: &TropicalCycle) -> Result<Option<(usize, usize)>> {
    let m = a.ambient_dim();
    if b.ambient_dim() != m {
        return Err(Error::DimensionMismatch { expected: m, found: b.ambient_dim() });
    }
    if a.dim() + b.dim() != m {
        return Err(Error::WrongDimensions(a.dim(), b.dim(), m));
    }
    for (i, f) in a.facets().iter().enumerate() {
        if f.weight == 0 {
            continue;
        }
        for (j, g) in b.facets().iter().enumerate() {
            if g.weight > 0 && sum_rank(&f.poly, &g.poly) == m {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Candidate-subspace families for [`check_admissible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Coordinate subspaces of dimension `1..=max_dim`.
    Coords { max_dim: Option<usize> },
    /// Lines through facet-direction generators, their pairwise sums and
    /// differences, then planes spanned by two generators.
    Spans { max_dim: usize },
    /// `n` seeded random lines, then the cumulative spans of them.
    Random { n: usize, seed: u64 },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Coords { .. } => write!(f, "coords"),
            Strategy::Spans { .. } => write!(f, "spans"),
            Strategy::Random { n, .. } => write!(f, "random:{n}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coords" => Ok(Strategy::Coords { max_dim: None }),
            "spans" => Ok(Strategy::Spans { max_dim: 2 }),
            _ => {
                let n = s
                    .strip_prefix("random:")
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown strategy {s:?}")))?;
                Ok(Strategy::Random { n, seed: 0 })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityStatus {
    CounterexampleFound,
    NoCounterexampleFound,
}

/// Result of the refutation search. `NoCounterexampleFound` is not a proof
/// of translation-admissibility; `tested` records how much was searched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub status: AdmissibilityStatus,
    /// First impure subspace in search order.
    pub witness: Option<Vec<IntVec>>,
    /// Every impure candidate of the witness's dimension.
    pub witnesses: Vec<Vec<IntVec>>,
    pub strategy: String,
    pub tested: usize,
}

fn sign_normalized(v: &[Int]) -> IntVec {
    let v = make_primitive_int(v);
    match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg_int(&v),
        _ => v,
    }
}

fn candidates(cycle: &TropicalCycle, strategy: &Strategy) -> Vec<Vec<IntVec>> {
    let m = cycle.ambient_dim();
    match strategy {
        Strategy::Coords { max_dim } => {
            let top = max_dim.unwrap_or(m.saturating_sub(1)).min(m);
            let mut out = Vec::new();
            for size in 1..=top {
                let mut subsets: Vec<u32> = (1u32..(1 << m)).filter(|s| s.count_ones() as usize == size).collect();
                // lexicographic on the sorted index lists
                subsets.sort_by_key(|s| (0..m).filter(|i| s & (1 << i) != 0).collect::<Vec<_>>());
                for s in subsets {
                    out.push((0..m).filter(|i| s & (1 << i) != 0).map(|i| unit(m, i)).collect());
                }
            }
            out
        }
        Strategy::Spans { max_dim } => {
            let mut gens: BTreeSet<IntVec> = BTreeSet::new();
            for f in cycle.positive_facets() {
                for b in f.poly.lattice().basis {
                    gens.insert(sign_normalized(&b));
                }
                for r in f.poly.rays() {
                    gens.insert(sign_normalized(r));
                }
            }
            let gens: Vec<IntVec> = gens.into_iter().collect();
            let mut lines: Vec<IntVec> = gens.clone();
            let mut seen: BTreeSet<IntVec> = gens.iter().cloned().collect();
            for i in 0..gens.len() {
                for j in i + 1..gens.len() {
                    for s in [1i64, -1] {
                        let v: IntVec = gens[i].iter().zip(&gens[j]).map(|(x, y)| x + y * Int::from(s)).collect();
                        if v.iter().all(Zero::is_zero) {
                            continue;
                        }
                        let v = sign_normalized(&v);
                        if seen.insert(v.clone()) {
                            lines.push(v);
                        }
                    }
                }
            }
            let mut out: Vec<Vec<IntVec>> = lines.into_iter().map(|l| vec![l]).collect();
            if *max_dim >= 2 {
                for i in 0..gens.len() {
                    for j in i + 1..gens.len() {
                        let pair = vec![gens[i].clone(), gens[j].clone()];
                        if rank(&pair.iter().map(|g| to_rat(g)).collect::<Vec<_>>(), m) == 2 {
                            out.push(pair);
                        }
                    }
                }
            }
            out
        }
        Strategy::Random { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut lines: Vec<IntVec> = Vec::new();
            while lines.len() < *n {
                let v: IntVec = (0..m).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect();
                if v.iter().any(|x| !x.is_zero()) {
                    lines.push(make_primitive_int(&v));
                }
            }
            let mut out: Vec<Vec<IntVec>> = lines.iter().map(|l| vec![l.clone()]).collect();
            for j in 2..=lines.len().min(m.saturating_sub(1)) {
                out.push(lines[..j].to_vec());
            }
            out
        }
    }
}

fn span_dim(v: &[IntVec], m: usize) -> usize {
    rank(&v.iter().map(|g| to_rat(g)).collect::<Vec<_>>(), m)
}

/// Searches for a rational subspace `V` with `Γ + V` not pure-dimensional.
/// Sound as a refuter, incomplete as a decision procedure.
pub fn check_admissible(cycle: &TropicalCycle, strategy: &Strategy) -> Result<AdmissibilityVerdict> {
    let m = cycle.ambient_dim();
    let mut tested = 0;
    let mut witnesses: Vec<Vec<IntVec>> = Vec::new();
    let mut level = None;
    for v in candidates(cycle, strategy) {
        let d = span_dim(&v, m);
        if level.is_some_and(|l| l != d) {
            break;
        }
        tested += 1;
        if minkowski_impurity(cycle, &v)?.is_some() {
            level = Some(d);
            witnesses.push(v);
        }
    }
    let status = if witnesses.is_empty() {
        AdmissibilityStatus::NoCounterexampleFound
    } else {
        AdmissibilityStatus::CounterexampleFound
    };
    Ok(AdmissibilityVerdict {
        status,
        witness: witnesses.first().cloned(),
        witnesses,
        strategy: strategy.to_string(),
        tested,
    })
}

/// Primitive integer rescaling used when reading user-supplied directions.
pub fn primitive_direction(v: &[Rat]) -> Result<IntVec> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    Ok(clear_denominators(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{degree0, is_balanced, translate};
    use crate::fixtures::*;
    use crate::kernel::num::{int_vec, rat_vec};

    fn seed() -> DisplacementSeed {
        DisplacementSeed::new(7)
    }

    fn line(gens: &[&[i64]], m: usize) -> TropicalCycle {
        linear_space(vec![m], &gens.iter().map(|g| int_vec(g)).collect::<Vec<_>>())
    }

    // For transverse pairs of curves in R^2: sum over meeting facet pairs of
    // w * w' * |det(u, u')| with u, u' primitive directions.
    fn transverse_count(a: &TropicalCycle, b: &TropicalCycle) -> u64 {
        let dir = |p: &Polyhedron| p.lattice().basis[0].clone();
        let mut n = 0u64;
        for f in a.positive_facets() {
            for g in b.positive_facets() {
                if f.poly.intersect(&g.poly).unwrap().is_empty() {
                    continue;
                }
                let (u, v) = (dir(&f.poly), dir(&g.poly));
                let det: Int = &u[0] * &v[1] - &u[1] * &v[0];
                n += f.weight * g.weight * to_weight(&det.abs());
            }
        }
        n
    }

    #[test]
    fn crossing_lines_weight_two() {
        let a = line(&[&[1, 1]], 2);
        let b = line(&[&[1, -1]], 2);
        let c = stable_intersect(&a, &b, seed()).unwrap();
        assert_eq!(c.dim(), 0);
        assert_eq!(c.facets().len(), 1);
        assert_eq!(c.facets()[0].weight, 2);
        assert!(c.contains(&rat_vec(&[0, 0])));
    }

    #[test]
    fn line_meets_translate_once() {
        let a = standard_line();
        let b = translate(&a, &rat_vec(&[1, 2])).unwrap();
        assert!(transverse_check(&a, &b).unwrap());
        let c = stable_intersect(&a, &b, seed()).unwrap();
        assert_eq!(degree0(&c).unwrap(), transverse_count(&a, &b));
        assert_eq!(degree0(&c).unwrap(), 1);
    }

    #[test]
    fn self_intersection_of_line() {
        let a = standard_line();
        assert!(!transverse_check(&a, &a).unwrap());
        let c = stable_intersect(&a, &a, seed()).unwrap();
        assert_eq!(c.facets().len(), 1);
        assert_eq!(c.facets()[0].weight, 1);
        assert!(c.contains(&rat_vec(&[0, 0])));
        assert_eq!(stable_intersect(&a, &a, DisplacementSeed::new(99)).unwrap(), c);
    }

    #[test]
    fn bezout_for_scaled_lines() {
        let b = translate(&scaled_line(3), &rat_vec(&[2, -1])).unwrap();
        let c = stable_intersect(&scaled_line(2), &b, seed()).unwrap();
        assert_eq!(degree0(&c).unwrap(), 6);
    }

    #[test]
    fn plane_meets_line_in_curve() {
        let c = stable_intersect(&standard_plane(), &standard_hyperplane(3), seed()).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(is_balanced(&c).unwrap());
        let too_small =
            stable_intersect(&line(&[&[1, 0]], 2), &TropicalCycle::empty(BlockStructure::single(2), 0), seed());
        assert!(too_small.unwrap().is_empty());
    }

    #[test]
    fn unbalanced_input_rejected() {
        let rays = [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])];
        let facets = rays
            .iter()
            .zip([1, 1, 2])
            .map(|(r, w)| WeightedFacet { poly: Polyhedron::cone(2, std::slice::from_ref(r)), weight: w })
            .collect();
        let bad = TropicalCycle::new(BlockStructure::single(2), facets).unwrap();
        assert!(matches!(stable_intersect(&bad, &standard_line(), seed()), Err(Error::Unbalanced(_))));
    }

    #[test]
    fn transverse_examples() {
        assert!(transverse_check(&line(&[&[1, 0]], 2), &line(&[&[0, 1]], 2)).unwrap());
        let far = translate(&line(&[&[1, 0]], 2), &rat_vec(&[0, 5])).unwrap();
        assert!(transverse_check(&line(&[&[1, 0]], 2), &far).unwrap());
    }

    #[test]
    fn pushforward_examples() {
        let diag = line(&[&[1, 1]], 2);
        let proj = pushforward_linear(&diag, &vec![int_vec(&[1, 0])], BlockStructure::single(1)).unwrap();
        assert_eq!(proj.cycle().unwrap().facets()[0].weight, 1);
        let sum = pushforward_linear(&diag, &vec![int_vec(&[1, 1])], BlockStructure::single(1)).unwrap();
        assert_eq!(sum.cycle().unwrap().facets()[0].weight, 2);

        let swept = minkowski_sum_subspace(&standard_line(), &[int_vec(&[1, 0])]).unwrap();
        let c = swept.cycle().unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.positive_facets().all(|f| f.weight == 1));
        assert!(is_balanced(c).unwrap());
    }

    #[test]
    fn minkowski_examples() {
        assert!(!minkowski_sum_subspace(&worked_a(), &[unit(4, 3)]).unwrap().is_pure());
        for i in 0..4 {
            let full = minkowski_sum_subspace(&worked_b(), &[unit(4, i)]).unwrap();
            assert_eq!(full.is_pure(), minkowski_impurity(&worked_b(), &[unit(4, i)]).unwrap().is_none());
        }
        assert!(!minkowski_sum_subspace(&worked_b(), &[unit(4, 2)]).unwrap().is_pure());
        let plane = minkowski_sum_subspace(&line(&[&[1, 0]], 2), &[unit(2, 1)]).unwrap();
        let c = plane.cycle().unwrap();
        assert_eq!((c.dim(), c.facets().len(), c.facets()[0].weight), (2, 1, 1));
    }

    #[test]
    fn projection_dims() {
        let a = worked_a();
        assert_eq!(projection_dim(&a, &[0]).unwrap(), 2);
        assert_eq!(projection_dim(&a, &[1]).unwrap(), 2);
        let b = worked_b();
        assert_eq!(projection_dim(&b, &[0]).unwrap(), 2);
        assert_eq!(projection_dim(&b, &[2]).unwrap(), 1);
        assert_eq!(projection_dim(&b, &[0, 2]).unwrap(), 2);
        assert!(matches!(projection_dim(&a, &[]), Err(Error::EmptySubset)));
        assert!(matches!(projection_dim(&a, &[5]), Err(Error::BadBlockIndex(_))));
    }

    #[test]
    fn projection_pushforwards() {
        let l = product(&standard_line(), &linear_space(vec![1], &[unit(1, 0)]));
        let p = projection_pushforward(&l, &[0]).unwrap();
        let Pushforward::Cycle { cycle, absorbed } = p else { panic!("impure") };
        assert!(!absorbed);
        assert_eq!(cycle.facets().len(), 3);
        assert!(cycle.positive_facets().all(|f| f.weight == 1));

        let Pushforward::Cycle { cycle, absorbed } = projection_pushforward(&worked_a(), &[0]).unwrap() else {
            panic!("impure")
        };
        assert!(absorbed);
        assert_eq!(cycle.dim(), 2);

        let d = projection_pushforward(&diagonal_11(), &[1]).unwrap();
        assert_eq!(d.cycle().unwrap().facets()[0].weight, 1);
    }

    #[test]
    fn hyperplane_examples() {
        let h = tropical_hyperplane(&rat_vec(&[0, 0, 0])).unwrap();
        assert_eq!(h, standard_line());
        let t = tropical_hyperplane(&rat_vec(&[0, -1, -2])).unwrap();
        assert_eq!(t, translate(&standard_line(), &rat_vec(&[1, 2])).unwrap());
        let p = tropical_hyperplane(&rat_vec(&[0, 0])).unwrap();
        assert_eq!(degree0(&p).unwrap(), 1);
        assert!(is_balanced(&standard_hyperplane(3)).unwrap());
    }

    #[test]
    fn positive_divisors() {
        assert!(is_positive_divisor(&standard_hyperplane(3)).unwrap().positive);
        let v = is_positive_divisor(&line(&[&[0, 1]], 2)).unwrap();
        assert!(!v.positive);
        assert_eq!(v.witness, Some(int_vec(&[0, 1])));
        assert!(is_positive_divisor(&coordinate_hyperplanes(3)).unwrap().positive);
        assert!(matches!(
            is_positive_divisor(&standard_line().with_blocks(BlockStructure::single(2)).unwrap()).map(|v| v.positive),
            Ok(true)
        ));
        assert!(matches!(is_positive_divisor(&line(&[&[1, 0, 0]], 3)), Err(Error::WrongCodimension { .. })));
    }

    #[test]
    fn pair_positivity() {
        let e1 = line(&[&[1, 0]], 2);
        assert_eq!(pair_positive(&e1, &line(&[&[0, 1]], 2)).unwrap(), Some((0, 0)));
        assert_eq!(pair_positive(&e1, &e1).unwrap(), None);
        let lines = product(&standard_line(), &standard_line());
        assert_eq!(pair_positive(&worked_a(), &lines).unwrap(), None);
        assert!(matches!(pair_positive(&e1, &worked_a()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn admissibility_search() {
        let v = check_admissible(&worked_a(), &Strategy::Coords { max_dim: None }).unwrap();
        assert_eq!(v.status, AdmissibilityStatus::CounterexampleFound);
        assert!(v.witnesses.contains(&vec![unit(4, 3)]));
        let v = check_admissible(&worked_b(), &"coords".parse().unwrap()).unwrap();
        assert!(v.witnesses.contains(&vec![unit(4, 2)]));

        for s in ["coords", "spans", "random:4"] {
            let strategy: Strategy = s.parse().unwrap();
            for c in [parallel_lines(), line(&[&[1, 2, 0]], 3), diagonal_11()] {
                let v = check_admissible(&c, &strategy).unwrap();
                assert_eq!(v.status, AdmissibilityStatus::NoCounterexampleFound, "{s}");
                assert!(v.tested > 0);
            }
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }
}

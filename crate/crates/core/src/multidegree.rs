//! Multidegrees of cycles in block-decomposed spaces and the projection
//! rank function that governs their positivity.
//!
//! Subsets of blocks are passed as 0-based index lists and stored as
//! bitmasks internally.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::{check_balancing, degree0, product, translate, BlockStructure, TropicalCycle, WeightedFacet};
use crate::error::{Error, Result};
use crate::kernel::num::{unit, Int, Rat, RatVec};
use crate::kernel::polyhedron::Polyhedron;
use crate::ops::{intersect_balanced, is_positive_divisor, projection_dim, tropical_hyperplane, DisplacementSeed};

pub fn mask_of(subset: &[usize]) -> u32 {
    subset.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn subset_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Type `n = (n_1, …, n_k)` of a multidegree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeVector(pub Vec<usize>);

impl TypeVector {
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `n_I`, for `I` given as a bitmask.
    pub fn sum_over(&self, mask: u32) -> usize {
        self.0.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, n)| n).sum()
    }

    fn check(&self, cycle: &TropicalCycle) -> Result<()> {
        let blocks = cycle.ambient().blocks();
        if self.k() != blocks.len() {
            return Err(Error::TypeMismatch(format!(
                "type has {} entries, ambient has {} blocks",
                self.k(),
                blocks.len()
            )));
        }
        if let Some(i) = (0..self.k()).find(|&i| self.0[i] > blocks[i]) {
            return Err(Error::TypeMismatch(format!(
                "n_{} = {} exceeds block dimension {}",
                i + 1,
                self.0[i],
                blocks[i]
            )));
        }
        if self.total() != cycle.dim() {
            return Err(Error::TypeMismatch(format!(
                "type sums to {}, cycle has dimension {}",
                self.total(),
                cycle.dim()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for TypeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("bad type entry {p:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(TypeVector)
    }
}

/// All types with `n_i <= m_i` summing to `d`, in lexicographic order.
pub fn types_of(blocks: &[usize], d: usize) -> Vec<TypeVector> {
    fn rec(blocks: &[usize], d: usize, cur: &mut Vec<usize>, out: &mut Vec<TypeVector>) {
        let Some((&m, rest)) = blocks.split_first() else {
            if d == 0 {
                out.push(TypeVector(cur.clone()));
            }
            return;
        };
        let cap: usize = rest.iter().sum();
        for n in 0..=m.min(d) {
            if d - n <= cap {
                cur.push(n);
                rec(rest, d - n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(blocks, d, &mut Vec::new(), &mut out);
    out
}

/// `I ↦ dim π_I(Γ)`, indexed by bitmask; the empty set has rank 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFunction {
    k: usize,
    values: Vec<usize>,
}

impl RankFunction {
    pub fn new(k: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != 1 << k || values[0] != 0 {
            return Err(Error::InvalidComplex("rank table must have 2^k entries with r(∅) = 0".into()));
        }
        Ok(RankFunction { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, mask: u32) -> usize {
        self.values[mask as usize]
    }

    pub fn rank(&self, subset: &[usize]) -> usize {
        self.get(mask_of(subset))
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

pub fn rank_function(cycle: &TropicalCycle) -> Result<RankFunction> {
    let k = cycle.ambient().k();
    let mut values = vec![0; 1 << k];
    for mask in 1u32..(1 << k) {
        values[mask as usize] = projection_dim(cycle, &subset_of(mask))?;
    }
    RankFunction::new(k, values)
}

/// One positive divisor per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorSet {
    divisors: Vec<TropicalCycle>,
}

impl DivisorSet {
    pub fn new(divisors: Vec<TropicalCycle>) -> Result<Self> {
        for (i, d) in divisors.iter().enumerate() {
            if !is_positive_divisor(d)?.positive {
                return Err(Error::NonPositiveDivisor(i));
            }
        }
        Ok(DivisorSet { divisors })
    }

    /// The standard tropical hyperplane in every block.
    pub fn standard(blocks: &BlockStructure) -> Self {
        let divisors = blocks
            .blocks()
            .iter()
            .map(|&m| tropical_hyperplane(&vec![Rat::from_integer(0.into()); m + 1]).expect("m >= 1"))
            .collect();
        DivisorSet { divisors }
    }

    pub fn divisors(&self) -> &[TropicalCycle] {
        &self.divisors
    }

    pub fn replace(&mut self, i: usize, divisor: TropicalCycle) -> Result<()> {
        if i >= self.divisors.len() {
            return Err(Error::BadBlockIndex(i));
        }
        if !is_positive_divisor(&divisor)?.positive {
            return Err(Error::NonPositiveDivisor(i));
        }
        self.divisors[i] = divisor;
        Ok(())
    }
}

fn whole_space(m: usize) -> TropicalCycle {
    let gens: Vec<_> = (0..m).map(|i| unit(m, i)).collect();
    let facet = WeightedFacet { poly: Polyhedron::linear_space(m, &gens), weight: 1 };
    TropicalCycle::new(BlockStructure::single(m), vec![facet]).expect("valid")
}

/// `π_i^{-1}(Λ) = Λ × ∏_{j≠i} R^{m_j}` with the block structure of `blocks`.
pub fn pullback(blocks: &BlockStructure, i: usize, divisor: &TropicalCycle) -> Result<TropicalCycle> {
    if i >= blocks.k() {
        return Err(Error::BadBlockIndex(i));
    }
    if divisor.ambient_dim() != blocks.blocks()[i] {
        return Err(Error::DimensionMismatch { expected: blocks.blocks()[i], found: divisor.ambient_dim() });
    }
    let mut acc: Option<TropicalCycle> = None;
    for (j, &m) in blocks.blocks().iter().enumerate() {
        let part = if j == i { divisor.clone() } else { whole_space(m) };
        acc = Some(match acc {
            None => part,
            Some(a) => product(&a, &part),
        });
    }
    acc.expect("k >= 1").with_blocks(blocks.clone())
}

fn random_translation(rng: &mut ChaCha8Rng, m: usize) -> RatVec {
    (0..m)
        .map(|_| {
            let p: i64 = rng.gen_range(-1_000_000..=1_000_000);
            let q: i64 = rng.gen_range(1..=97);
            Rat::new(Int::from(p), Int::from(q))
        })
        .collect()
}

fn multidegree_once(cycle: &TropicalCycle, n: &TypeVector, divs: &DivisorSet, seed: DisplacementSeed) -> Result<u64> {
    let blocks = cycle.ambient();
    let m = blocks.total();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
    let mut cur = cycle.clone();
    for (i, &ni) in n.0.iter().enumerate() {
        let pb = pullback(blocks, i, &divs.divisors[i])?;
        for _ in 0..ni {
            let moved = translate(&pb, &random_translation(&mut rng, m))?;
            cur = intersect_balanced(&cur, &moved, seed)?.0;
            if cur.is_empty() {
                return Ok(0);
            }
        }
    }
    degree0(&cur)
}

/// `deg^n(Γ)`: degree of `Γ` cut by `n_i` generic translates of each
/// pulled-back divisor. The value is computed for two independent seeds.
pub fn multidegree(cycle: &TropicalCycle, n: &TypeVector, divs: &DivisorSet, seed: DisplacementSeed) -> Result<u64> {
    n.check(cycle)?;
    if divs.divisors.len() != n.k() {
        return Err(Error::TypeMismatch(format!("{} divisors for {} blocks", divs.divisors.len(), n.k())));
    }
    for (i, d) in divs.divisors.iter().enumerate() {
        if d.ambient_dim() != cycle.ambient().blocks()[i] || !is_positive_divisor(d)?.positive {
            return Err(Error::NonPositiveDivisor(i));
        }
    }
    let r = check_balancing(cycle)?;
    if !r.balanced {
        return Err(Error::Unbalanced(r.violations.len()));
    }
    let a = multidegree_once(cycle, n, divs, seed)?;
    let b = multidegree_once(cycle, n, divs, seed.sibling())?;
    if a != b {
        return Err(Error::SeedDependence(format!("multidegree {n}: {a} vs {b}")));
    }
    Ok(a)
}

/// First positive facet `Q` (canonical order) with `dim π_I(Q) >= n_I` for
/// every `I`.
pub fn facet_witness(cycle: &TropicalCycle, n: &TypeVector) -> Result<Option<usize>> {
    n.check(cycle)?;
    let k = cycle.ambient().k();
    for (idx, f) in cycle.facets().iter().enumerate() {
        if f.weight == 0 {
            continue;
        }
        let mut ok = true;
        for mask in 1u32..(1 << k) {
            let coords = cycle.ambient().coords(&subset_of(mask))?;
            if f.poly.projected_dim(&coords) < n.sum_over(mask) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(idx));
        }
    }
    Ok(None)
}

/// Rank-based positivity prediction. It matches `multidegree > 0` for
/// translation-admissible cycles; `requires_admissibility` is always set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub holds: bool,
    /// Smallest (by bitmask) subset with `rank(I) < n_I`.
    pub violating: Option<Vec<usize>>,
    pub facet: Option<usize>,
    pub requires_admissibility: bool,
}

pub fn positivity_criterion(cycle: &TropicalCycle, n: &TypeVector) -> Result<CriterionVerdict> {
    n.check(cycle)?;
    let r = rank_function(cycle)?;
    criterion_from_ranks(cycle, n, &r)
}

fn criterion_from_ranks(cycle: &TropicalCycle, n: &TypeVector, r: &RankFunction) -> Result<CriterionVerdict> {
    let violating = (1u32..(1 << r.k())).find(|&mask| r.get(mask) < n.sum_over(mask)).map(subset_of);
    let facet = if violating.is_none() { facet_witness(cycle, n)? } else { None };
    Ok(CriterionVerdict { holds: violating.is_none(), violating, facet, requires_admissibility: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MsuppMode {
    #[default]
    Criterion,
    Bruteforce,
}

impl FromStr for MsuppMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "criterion" => Ok(MsuppMode::Criterion),
            "bruteforce" => Ok(MsuppMode::Bruteforce),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Support of the multidegree, by the rank criterion or by computing
/// every multidegree.
pub fn msupp(
    cycle: &TropicalCycle,
    divs: &DivisorSet,
    mode: MsuppMode,
    seed: DisplacementSeed,
) -> Result<BTreeSet<TypeVector>> {
    let mut out = BTreeSet::new();
    if cycle.is_empty() {
        return Ok(out);
    }
    let r = rank_function(cycle)?;
    for n in types_of(cycle.ambient().blocks(), cycle.dim()) {
        let keep = match mode {
            MsuppMode::Criterion => (1u32..(1 << r.k())).all(|mask| r.get(mask) >= n.sum_over(mask)),
            MsuppMode::Bruteforce => multidegree(cycle, &n, divs, seed)? > 0,
        };
        if keep {
            out.insert(n);
        }
    }
    Ok(out)
}

/// First pair `(I, J)` (as bitmasks, `I < J`) with
/// `r(I ∩ J) + r(I ∪ J) > r(I) + r(J)`.
pub fn check_submodular(r: &RankFunction) -> Option<(Vec<usize>, Vec<usize>)> {
    let full = 1u32 << r.k();
    for i in 0..full {
        for j in i + 1..full {
            if r.get(i & j) + r.get(i | j) > r.get(i) + r.get(j) {
                return Some((subset_of(i), subset_of(j)));
            }
        }
    }
    None
}

/// Basis exchange check for a set of types (polymatroid base property).
pub fn has_exchange_property(set: &BTreeSet<TypeVector>) -> bool {
    for a in set {
        for b in set {
            for i in 0..a.k() {
                if a.0[i] <= b.0[i] {
                    continue;
                }
                let ok = (0..a.k()).any(|j| {
                    if a.0[j] >= b.0[j] {
                        return false;
                    }
                    let mut c = a.0.clone();
                    c[i] -= 1;
                    c[j] += 1;
                    set.contains(&TypeVector(c))
                });
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::kernel::num::{int_vec, rat_vec};

    fn seed() -> DisplacementSeed {
        DisplacementSeed::new(11)
    }

    fn md(c: &TropicalCycle, n: &[usize]) -> u64 {
        multidegree(c, &TypeVector(n.to_vec()), &DivisorSet::standard(c.ambient()), seed()).unwrap()
    }

    fn space(blocks: Vec<usize>) -> TropicalCycle {
        let m = blocks.iter().sum();
        linear_space(blocks, &(0..m).map(|i| unit(m, i)).collect::<Vec<_>>())
    }

    #[test]
    fn multidegree_examples() {
        assert_eq!(md(&worked_a(), &[1, 1]), 0);
        assert_eq!(md(&worked_b(), &[1, 0, 1]), 0);
        assert_eq!(md(&space(vec![2, 1]), &[2, 1]), 1);
        assert_eq!(md(&diagonal_11(), &[1, 0]), 1);
        assert_eq!(md(&diagonal_11(), &[0, 1]), 1);
        let lines = product(&standard_line(), &standard_line());
        assert_eq!(md(&lines, &[1, 1]), 1);
    }

    #[test]
    fn multidegree_errors() {
        let d = diagonal_11();
        let divs = DivisorSet::standard(d.ambient());
        assert!(matches!(multidegree(&d, &TypeVector(vec![1, 1]), &divs, seed()), Err(Error::TypeMismatch(_))));
        let flat = linear_space(vec![2], &[int_vec(&[0, 1])]);
        assert!(matches!(DivisorSet::new(vec![flat]), Err(Error::NonPositiveDivisor(0))));
    }

    #[test]
    fn ranks() {
        let r = rank_function(&worked_b()).unwrap();
        assert_eq!((r.rank(&[0]), r.rank(&[2]), r.rank(&[0, 2])), (2, 1, 2));
        let r = rank_function(&space(vec![2, 1, 3])).unwrap();
        assert_eq!(r.rank(&[0, 2]), 5);
        assert_eq!(r.rank(&[0, 1, 2]), 6);
        let pt = TropicalCycle::new(
            BlockStructure::new(vec![1, 1]).unwrap(),
            vec![WeightedFacet { poly: Polyhedron::point(&rat_vec(&[0, 0])), weight: 1 }],
        )
        .unwrap();
        assert!(rank_function(&pt).unwrap().values().iter().all(|&v| v == 0));
    }

    #[test]
    fn criterion_examples() {
        assert!(positivity_criterion(&diagonal_11(), &TypeVector(vec![1, 0])).unwrap().holds);
        let v = positivity_criterion(&worked_a(), &TypeVector(vec![1, 1])).unwrap();
        assert!(v.holds && v.requires_admissibility && v.facet.is_none());
        let line = linear_space(vec![1, 1], &[int_vec(&[0, 1])]);
        let v = positivity_criterion(&line, &TypeVector(vec![1, 0])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.violating, Some(vec![0]));
    }

    #[test]
    fn msupp_modes() {
        let set = |v: &[&[usize]]| v.iter().map(|n| TypeVector(n.to_vec())).collect::<BTreeSet<_>>();
        let d = diagonal_11();
        let divs = DivisorSet::standard(d.ambient());
        assert_eq!(msupp(&d, &divs, MsuppMode::Criterion, seed()).unwrap(), set(&[&[1, 0], &[0, 1]]));
        assert_eq!(msupp(&d, &divs, MsuppMode::Bruteforce, seed()).unwrap(), set(&[&[1, 0], &[0, 1]]));
        let s = space(vec![1, 2]);
        assert_eq!(
            msupp(&s, &DivisorSet::standard(s.ambient()), MsuppMode::Criterion, seed()).unwrap(),
            set(&[&[1, 2]])
        );

        let a = worked_a();
        let divs = DivisorSet::standard(a.ambient());
        let crit = msupp(&a, &divs, MsuppMode::Criterion, seed()).unwrap();
        assert_eq!(crit, set(&[&[0, 2], &[1, 1], &[2, 0]]));
        assert!(has_exchange_property(&crit));
        assert_eq!(msupp(&a, &divs, MsuppMode::Bruteforce, seed()).unwrap(), set(&[&[0, 2], &[2, 0]]));
    }

    #[test]
    fn submodularity() {
        assert_eq!(check_submodular(&rank_function(&space(vec![1, 2])).unwrap()), None);
        assert_eq!(check_submodular(&rank_function(&diagonal_11()).unwrap()), None);
        let r = RankFunction::new(2, vec![0, 1, 1, 3]).unwrap();
        assert_eq!(check_submodular(&r), Some((vec![0], vec![1])));
    }

    #[test]
    fn facet_witnesses() {
        assert_eq!(facet_witness(&space(vec![2, 2]), &TypeVector(vec![2, 2])).unwrap(), Some(0));
        let lines = product(&standard_line(), &standard_line());
        assert!(facet_witness(&lines, &TypeVector(vec![1, 1])).unwrap().is_some());
        assert_eq!(facet_witness(&worked_a(), &TypeVector(vec![1, 1])).unwrap(), None);
    }

    #[test]
    fn type_enumeration_and_parsing() {
        assert_eq!(types_of(&[2, 1], 2), vec![TypeVector(vec![1, 1]), TypeVector(vec![2, 0])]);
        assert_eq!("1,0,1".parse::<TypeVector>().unwrap(), TypeVector(vec![1, 0, 1]));
        assert_eq!(TypeVector(vec![1, 0]).to_string(), "(1,0)");
    }
}

//! Rational polyhedra with canonical, irredundant H- and V-representations.
//!
//! Every constructor goes through the homogenized cone
//! `C = cone{(1, v), (0, r), ±(0, l)} ⊂ R^{m+1}` and runs the double
//! description method in both directions, so both representations are
//! always present, irredundant and canonical. Two polyhedra are equal as
//! sets iff they are equal as values.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::lattice::{saturate, IntMat, Lattice};
use super::linalg::{nullspace, project_out, rank, rref};
use super::num::{add, clear_denominators, dot_int, dot_ir, rat, scale, to_rat, Int, IntVec, Rat, RatVec};
use crate::error::{Error, Result};

/// `normal · x <= rhs` (or `=` when used as an equality).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: IntVec,
    pub rhs: Rat,
}

impl Halfspace {
    pub fn new(normal: IntVec, rhs: Rat) -> Self {
        Halfspace { normal, rhs }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot_ir(&self.normal, x) - &self.rhs
    }

    /// Same hyperplane with the sign fixed by the first nonzero coefficient.
    pub fn hyperplane_key(&self) -> Halfspace {
        match self.normal.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => {
                Halfspace { normal: self.normal.iter().map(|v| -v).collect(), rhs: -self.rhs.clone() }
            }
            _ => self.clone(),
        }
    }

    pub fn flipped(&self) -> Halfspace {
        Halfspace { normal: self.normal.iter().map(|v| -v).collect(), rhs: -self.rhs.clone() }
    }
}

/// Input H-representation: `eqs` as equalities, `ineqs` as `a · x <= b`.
#[derive(Debug, Clone, Default)]
pub struct HRep {
    pub eqs: Vec<(RatVec, Rat)>,
    pub ineqs: Vec<(RatVec, Rat)>,
}

/// Input V-representation.
#[derive(Debug, Clone, Default)]
pub struct VRep {
    pub vertices: Vec<RatVec>,
    pub rays: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
}

pub enum Representation {
    H(HRep),
    V(VRep),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polyhedron {
    ambient: usize,
    empty: bool,
    dim: usize,
    equalities: Vec<Halfspace>,
    inequalities: Vec<Halfspace>,
    vertices: Vec<RatVec>,
    rays: Vec<IntVec>,
    lineality: Vec<IntVec>,
}

/// Builds the polyhedron from a representation; the result always carries
/// both. An empty input set yields a polyhedron with `is_empty() == true`.
pub fn convert_rep(m: usize, rep: Representation) -> Polyhedron {
    match rep {
        Representation::H(h) => Polyhedron::from_h(m, &h.eqs, &h.ineqs),
        Representation::V(v) => Polyhedron::from_v(m, &v.vertices, &v.rays, &v.lineality),
    }
}

fn scaled_row(head: &Rat, tail: &[Rat]) -> IntVec {
    let mut row = Vec::with_capacity(tail.len() + 1);
    row.push(head.clone());
    row.extend(tail.iter().cloned());
    if row.iter().all(Zero::is_zero) {
        return vec![Int::zero(); row.len()];
    }
    clear_denominators(&row)
}

impl Polyhedron {
    pub fn empty(m: usize) -> Self {
        Polyhedron {
            ambient: m,
            empty: true,
            dim: 0,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            vertices: Vec::new(),
            rays: Vec::new(),
            lineality: Vec::new(),
        }
    }

    pub fn from_h(m: usize, eqs: &[(RatVec, Rat)], ineqs: &[(RatVec, Rat)]) -> Self {
        let eq_rows: Vec<IntVec> = eqs.iter().map(|(a, b)| scaled_row(b, &neg(a))).collect();
        let mut in_rows: Vec<IntVec> = ineqs.iter().map(|(a, b)| scaled_row(b, &neg(a))).collect();
        let mut t = vec![Int::zero(); m + 1];
        t[0] = Int::one();
        in_rows.push(t);
        let g = cone_generators(m + 1, &eq_rows, &in_rows);
        Self::from_cone(m, g.rays, g.lineality)
    }

    pub fn from_halfspaces(m: usize, eqs: &[Halfspace], ineqs: &[Halfspace]) -> Self {
        let conv = |h: &Halfspace| (to_rat(&h.normal), h.rhs.clone());
        let e: Vec<_> = eqs.iter().map(conv).collect();
        let i: Vec<_> = ineqs.iter().map(conv).collect();
        Self::from_h(m, &e, &i)
    }

    pub fn from_v(m: usize, vertices: &[RatVec], rays: &[IntVec], lineality: &[IntVec]) -> Self {
        if vertices.is_empty() {
            return Self::empty(m);
        }
        let mut gens: Vec<IntVec> = vertices.iter().map(|v| scaled_row(&Rat::one(), v)).collect();
        gens.extend(rays.iter().map(|r| scaled_row(&Rat::zero(), &to_rat(r))));
        let lin: Vec<IntVec> = lineality.iter().map(|l| scaled_row(&Rat::zero(), &to_rat(l))).collect();
        let polar = cone_generators(m + 1, &lin, &gens);
        let (eqs, ineqs) = Self::halfspaces_from_polar(m, &polar.lineality, &polar.rays);
        Self::from_halfspaces(m, &eqs, &ineqs)
    }

    pub fn point(x: &[Rat]) -> Self {
        Self::from_v(x.len(), &[x.to_vec()], &[], &[])
    }

    /// The whole space `R^m`.
    pub fn space(m: usize) -> Self {
        Self::from_h(m, &[], &[])
    }

    pub fn linear_space(m: usize, gens: &[IntVec]) -> Self {
        Self::from_v(m, &[vec![Rat::zero(); m]], &[], gens)
    }

    pub fn cone(m: usize, rays: &[IntVec]) -> Self {
        Self::from_v(m, &[vec![Rat::zero(); m]], rays, &[])
    }

    fn from_cone(m: usize, rays: Vec<IntVec>, lineality: Vec<IntVec>) -> Self {
        let mut vertices = Vec::new();
        let mut prays = Vec::new();
        for r in &rays {
            if r[0].is_positive() {
                let t = Rat::from_integer(r[0].clone());
                vertices.push(r[1..].iter().map(|x| Rat::from_integer(x.clone()) / &t).collect::<RatVec>());
            } else {
                prays.push(r[1..].to_vec());
            }
        }
        if vertices.is_empty() {
            return Self::empty(m);
        }
        let plin: Vec<IntVec> = lineality.iter().map(|l| l[1..].to_vec()).collect();

        // H side via the polar cone of the (already irredundant) generators.
        let gens: Vec<IntVec> = rays.clone();
        let polar = cone_generators(m + 1, &lineality, &gens);
        let (equalities, inequalities) = Self::halfspaces_from_polar(m, &polar.lineality, &polar.rays);

        // canonical lineality basis
        let lin_rat: Vec<RatVec> = plin.iter().map(|l| to_rat(l)).collect();
        let (lin_rref, _) = rref(&lin_rat, m);
        let lineality: Vec<IntVec> = lin_rref.iter().map(|r| clear_denominators(r)).collect();
        let lin_basis: Vec<RatVec> = lineality.iter().map(|l| to_rat(l)).collect();

        let mut verts: Vec<RatVec> = vertices.iter().map(|v| project_out(v, &lin_basis).0).collect();
        verts.sort();
        verts.dedup();
        let mut rs: Vec<IntVec> = prays
            .iter()
            .map(|r| project_out(&to_rat(r), &lin_basis).0)
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .map(|r| clear_denominators(&r))
            .collect();
        rs.sort();
        rs.dedup();

        let dim = m - equalities.len();
        Polyhedron { ambient: m, empty: false, dim, equalities, inequalities, vertices: verts, rays: rs, lineality }
    }

    /// Turns polar-cone generators `w = (w0, w')` (meaning `w0 t + w'·x >= 0`)
    /// into canonical equalities and inequalities of the polyhedron.
    fn halfspaces_from_polar(m: usize, lin: &[IntVec], rays: &[IntVec]) -> (Vec<Halfspace>, Vec<Halfspace>) {
        // equalities: w'·x = -w0, canonical through rref of [w' | -w0]
        let aug: Vec<RatVec> = lin
            .iter()
            .map(|w| {
                let mut row: RatVec = w[1..].iter().map(|x| Rat::from_integer(x.clone())).collect();
                row.push(-Rat::from_integer(w[0].clone()));
                row
            })
            .collect();
        let (r, _) = rref(&aug, m + 1);
        let equalities: Vec<Halfspace> = r
            .iter()
            .map(|row| {
                let normal = clear_denominators(&row[..m]);
                let j = normal.iter().position(|x| !x.is_zero()).expect("degenerate equality");
                let f = Rat::from_integer(normal[j].clone()) / &row[j];
                Halfspace::new(normal, &row[m] * f)
            })
            .collect();
        let eq_basis: Vec<RatVec> = equalities.iter().map(|h| to_rat(&h.normal)).collect();
        let eq_rhs: Vec<Rat> = equalities.iter().map(|h| h.rhs.clone()).collect();

        let mut inequalities: Vec<Halfspace> = Vec::new();
        for w in rays {
            // (-w')·x <= w0
            let a: RatVec = w[1..].iter().map(|x| -Rat::from_integer(x.clone())).collect();
            let (a_proj, c) = project_out(&a, &eq_basis);
            if a_proj.iter().all(Zero::is_zero) {
                continue;
            }
            let mut b = Rat::from_integer(w[0].clone());
            for (ci, fi) in c.iter().zip(&eq_rhs) {
                b -= ci * fi;
            }
            let normal = clear_denominators(&a_proj);
            let j = normal.iter().position(|x| !x.is_zero()).unwrap();
            let f = Rat::from_integer(normal[j].clone()) / &a_proj[j];
            inequalities.push(Halfspace::new(normal, b * f));
        }
        inequalities.sort();
        inequalities.dedup();
        (equalities, inequalities)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Dimension of the affine hull (0 for the empty set; check `is_empty`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.equalities.iter().all(|h| h.eval(x).is_zero())
            && self.inequalities.iter().all(|h| !h.eval(x).is_positive())
    }

    pub fn contains_relint(&self, x: &[Rat]) -> bool {
        !self.empty
            && self.equalities.iter().all(|h| h.eval(x).is_zero())
            && self.inequalities.iter().all(|h| h.eval(x).is_negative())
    }

    pub fn contains_poly(&self, other: &Polyhedron) -> bool {
        if other.empty {
            return true;
        }
        let lin_ok = |d: &IntVec| {
            self.equalities.iter().all(|h| dot_int(&h.normal, d).is_zero())
                && self.inequalities.iter().all(|h| dot_int(&h.normal, d).is_zero())
        };
        let ray_ok = |d: &IntVec| {
            self.equalities.iter().all(|h| dot_int(&h.normal, d).is_zero())
                && self.inequalities.iter().all(|h| !dot_int(&h.normal, d).is_positive())
        };
        other.vertices.iter().all(|v| self.contains(v))
            && other.rays.iter().all(ray_ok)
            && other.lineality.iter().all(lin_ok)
    }

    /// Basis of `Lin(P)`, the linear space parallel to the affine hull.
    pub fn lin_basis(&self) -> Vec<RatVec> {
        let normals: Vec<RatVec> = self.equalities.iter().map(|h| to_rat(&h.normal)).collect();
        nullspace(&normals, self.ambient)
    }

    /// The saturated lattice `Lin(P) ∩ Z^m`.
    pub fn lattice(&self) -> Lattice {
        saturate(&self.lin_basis(), self.ambient)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        if self.empty || other.empty {
            return Ok(Self::empty(self.ambient));
        }
        let mut eqs = self.equalities.clone();
        eqs.extend(other.equalities.iter().cloned());
        let mut ineqs = self.inequalities.clone();
        ineqs.extend(other.inequalities.iter().cloned());
        Ok(Self::from_halfspaces(self.ambient, &eqs, &ineqs))
    }

    /// Intersection with extra constraints.
    pub fn restrict(&self, eqs: &[Halfspace], ineqs: &[Halfspace]) -> Polyhedron {
        if self.empty {
            return self.clone();
        }
        let mut e = self.equalities.clone();
        e.extend(eqs.iter().cloned());
        let mut i = self.inequalities.clone();
        i.extend(ineqs.iter().cloned());
        Self::from_halfspaces(self.ambient, &e, &i)
    }

    pub fn recession_cone(&self) -> Result<Polyhedron> {
        if self.empty {
            return Err(Error::EmptyPolyhedron);
        }
        let zero = |h: &Halfspace| Halfspace::new(h.normal.clone(), Rat::zero());
        let eqs: Vec<_> = self.equalities.iter().map(zero).collect();
        let ineqs: Vec<_> = self.inequalities.iter().map(zero).collect();
        Ok(Self::from_halfspaces(self.ambient, &eqs, &ineqs))
    }

    /// Deterministic relative-interior point: mean of the vertices plus a
    /// fixed multiple of (sum of rays + alternating lineality generators).
    pub fn relative_interior_point(&self) -> Result<RatVec> {
        if self.empty {
            return Err(Error::EmptyPolyhedron);
        }
        let m = self.ambient;
        let n = Rat::from_integer(Int::from(self.vertices.len()));
        let mut mean = vec![Rat::zero(); m];
        for v in &self.vertices {
            mean = add(&mean, v);
        }
        let mean = scale(&mean, &(Rat::one() / n));
        let mut dir = vec![Rat::zero(); m];
        for r in &self.rays {
            dir = add(&dir, &to_rat(r));
        }
        for (i, l) in self.lineality.iter().enumerate() {
            let l = to_rat(l);
            dir = if i % 2 == 0 { add(&dir, &l) } else { add(&dir, &scale(&l, &rat(-1))) };
        }
        let k = (self.rays.len() + self.lineality.len() + 1) as i64;
        let mut c = Rat::new(Int::one(), Int::from(2 * k));
        for _ in 0..64 {
            let x = add(&mean, &scale(&dir, &c));
            if self.contains_relint(&x) {
                return Ok(x);
            }
            c /= rat(2);
        }
        unreachable!("mean of vertices plus positive ray combination is always relative-interior")
    }

    pub fn translate(&self, v: &[Rat]) -> Result<Polyhedron> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: v.len() });
        }
        if self.empty {
            return Ok(self.clone());
        }
        let shift = |h: &Halfspace| Halfspace::new(h.normal.clone(), &h.rhs + dot_ir(&h.normal, v));
        let lin_basis: Vec<RatVec> = self.lineality.iter().map(|l| to_rat(l)).collect();
        let mut vertices: Vec<RatVec> = self.vertices.iter().map(|x| project_out(&add(x, v), &lin_basis).0).collect();
        vertices.sort();
        Ok(Polyhedron {
            equalities: self.equalities.iter().map(shift).collect(),
            inequalities: {
                let mut i: Vec<_> = self.inequalities.iter().map(shift).collect();
                i.sort();
                i
            },
            vertices,
            ..self.clone()
        })
    }

    /// Image under the integer linear map `a` (rows = output coordinates).
    pub fn map_linear(&self, a: &IntMat) -> Polyhedron {
        let out = a.len();
        if self.empty {
            return Self::empty(out);
        }
        let apply_r = |x: &RatVec| -> RatVec { a.iter().map(|row| dot_ir(row, x)).collect() };
        let apply_i = |x: &IntVec| -> IntVec { a.iter().map(|row| dot_int(row, x)).collect() };
        let vs: Vec<RatVec> = self.vertices.iter().map(apply_r).collect();
        let rs: Vec<IntVec> = self.rays.iter().map(apply_i).collect();
        let ls: Vec<IntVec> = self.lineality.iter().map(apply_i).collect();
        Self::from_v(out, &vs, &rs, &ls)
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &Polyhedron) -> Polyhedron {
        let (a, b) = (self.ambient, other.ambient);
        if self.empty || other.empty {
            return Self::empty(a + b);
        }
        let pad_l = |h: &Halfspace| {
            let mut n = h.normal.clone();
            n.extend(std::iter::repeat_n(Int::zero(), b));
            Halfspace::new(n, h.rhs.clone())
        };
        let pad_r = |h: &Halfspace| {
            let mut n = vec![Int::zero(); a];
            n.extend(h.normal.iter().cloned());
            Halfspace::new(n, h.rhs.clone())
        };
        let eqs: Vec<_> = self.equalities.iter().map(pad_l).chain(other.equalities.iter().map(pad_r)).collect();
        let ineqs: Vec<_> = self.inequalities.iter().map(pad_l).chain(other.inequalities.iter().map(pad_r)).collect();
        Self::from_halfspaces(a + b, &eqs, &ineqs)
    }

    /// Codimension-one faces, one per inequality.
    pub fn facets(&self) -> Vec<Polyhedron> {
        self.inequalities.iter().map(|h| self.restrict(std::slice::from_ref(h), &[])).collect()
    }

    /// All nonempty faces, including `self`.
    pub fn faces(&self) -> BTreeSet<Polyhedron> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(p) = stack.pop() {
            if p.empty || out.contains(&p) {
                continue;
            }
            stack.extend(p.facets());
            out.insert(p);
        }
        out
    }

    /// The unique face containing `x` in its relative interior.
    pub fn face_containing(&self, x: &[Rat]) -> Polyhedron {
        let tight: Vec<Halfspace> = self.inequalities.iter().filter(|h| h.eval(x).is_zero()).cloned().collect();
        if tight.is_empty() {
            return self.clone();
        }
        self.restrict(&tight, &[])
    }

    /// Tangent cone at `x`, translated to the origin.
    pub fn tangent_cone(&self, x: &[Rat]) -> Polyhedron {
        let eqs: Vec<Halfspace> =
            self.equalities.iter().map(|h| Halfspace::new(h.normal.clone(), Rat::zero())).collect();
        let ineqs: Vec<Halfspace> = self
            .inequalities
            .iter()
            .filter(|h| h.eval(x).is_zero())
            .map(|h| Halfspace::new(h.normal.clone(), Rat::zero()))
            .collect();
        Self::from_halfspaces(self.ambient, &eqs, &ineqs)
    }

    /// Signs `(takes negative values, takes positive values)` of `h.eval` on the polyhedron.
    fn sign_range(&self, h: &Halfspace) -> (bool, bool) {
        let mut neg = false;
        let mut pos = false;
        for v in &self.vertices {
            let s = h.eval(v);
            neg |= s.is_negative();
            pos |= s.is_positive();
        }
        for r in &self.rays {
            let s = dot_int(&h.normal, r);
            neg |= s.is_negative();
            pos |= s.is_positive();
        }
        if self.lineality.iter().any(|l| !dot_int(&h.normal, l).is_zero()) {
            neg = true;
            pos = true;
        }
        (neg, pos)
    }

    /// True when the hyperplane of `h` passes through the relative interior.
    pub fn is_cut_by(&self, h: &Halfspace) -> bool {
        let (n, p) = self.sign_range(h);
        n && p
    }

    /// Splits along the hyperplane of `h`; returns the sides of full dimension.
    pub fn split(&self, h: &Halfspace) -> Vec<Polyhedron> {
        if !self.is_cut_by(h) {
            return vec![self.clone()];
        }
        vec![self.restrict(&[], std::slice::from_ref(h)), self.restrict(&[], &[h.flipped()])]
    }

    /// Rank of the image of `Lin(P)` under the coordinate projection onto `coords`.
    pub fn projected_dim(&self, coords: &[usize]) -> usize {
        let rows: Vec<RatVec> =
            self.lin_basis().iter().map(|b| coords.iter().map(|&c| b[c].clone()).collect()).collect();
        rank(&rows, coords.len())
    }
}

fn neg(a: &[Rat]) -> RatVec {
    a.iter().map(|x| -x.clone()).collect()
}

/// Whether `p ⊆ ∪ cover`, decided exactly by refining `p` along every
/// hyperplane of the cover and testing one relative-interior point per cell.
pub fn is_covered(p: &Polyhedron, cover: &[Polyhedron]) -> Result<bool> {
    for q in cover {
        if q.ambient() != p.ambient() {
            return Err(Error::DimensionMismatch { expected: p.ambient(), found: q.ambient() });
        }
    }
    if p.is_empty() {
        return Ok(true);
    }
    if cover.iter().any(|q| q.contains_poly(p)) {
        return Ok(true);
    }
    // a closed cover of p must already cover it by pieces meeting p in full dimension
    let mut relevant: Vec<Polyhedron> = Vec::new();
    for q in cover {
        let c = q.intersect(p)?;
        if !c.is_empty() && c.dim() == p.dim() {
            relevant.push(c);
        }
    }
    if relevant.is_empty() {
        return Ok(false);
    }
    let mut hyperplanes: BTreeSet<Halfspace> = BTreeSet::new();
    for q in &relevant {
        for h in q.inequalities() {
            hyperplanes.insert(h.hyperplane_key());
        }
    }
    let mut cells = vec![p.clone()];
    for h in &hyperplanes {
        cells = cells.iter().flat_map(|c| c.split(h)).collect();
    }
    for c in &cells {
        let x = c.relative_interior_point()?;
        if !relevant.iter().any(|q| q.contains(&x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common refinement of polyhedra sharing one affine hull: the cells cut
/// out by all of their facet hyperplanes, deduplicated and sorted.
pub fn common_refinement(pieces: &[Polyhedron]) -> Vec<Polyhedron> {
    let mut hyperplanes: BTreeSet<Halfspace> = BTreeSet::new();
    for p in pieces {
        for h in p.inequalities() {
            hyperplanes.insert(h.hyperplane_key());
        }
    }
    let mut out: BTreeSet<Polyhedron> = BTreeSet::new();
    for p in pieces {
        let mut cells = vec![p.clone()];
        for h in &hyperplanes {
            cells = cells.iter().flat_map(|c| c.split(h)).collect();
        }
        out.extend(cells);
    }
    out.into_iter().collect()
}

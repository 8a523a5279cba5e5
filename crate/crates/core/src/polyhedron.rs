//! Exact convex polyhedra: H-representation, the double description method
//! for generators, and face enumeration through generator/constraint incidence.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::linalg;
use crate::scalar::{dot, ExactField};

/// The closed halfspace `normal · x ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace<S> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: ExactField> Halfspace<S> {
    pub fn new(normal: Vec<S>, offset: S) -> Self {
        Halfspace { normal, offset }
    }

    /// `normal · x - offset`; nonpositive inside.
    pub fn slack(&self, x: &[S]) -> S {
        dot(&self.normal, x) - self.offset.clone()
    }

    pub fn contains(&self, x: &[S]) -> bool {
        !self.slack(x).is_positive()
    }

    pub fn flipped(&self) -> Self {
        Halfspace { normal: self.normal.iter().map(|a| -a.clone()).collect(), offset: -self.offset.clone() }
    }

    /// Positive rescaling with the first nonzero normal entry of absolute value one.
    pub fn normalized(&self) -> Self {
        match self.normal.iter().find(|a| !a.is_zero()) {
            Some(a) => {
                let s = a.abs();
                Halfspace {
                    normal: self.normal.iter().map(|x| x.clone() / s.clone()).collect(),
                    offset: self.offset.clone() / s,
                }
            }
            None => self.clone(),
        }
    }

    /// Whether the normal vanishes (the constraint is `0 ≤ offset`).
    pub fn is_trivial(&self) -> bool {
        self.normal.iter().all(|a| a.is_zero())
    }
}

/// `{x : h.normal · x ≤ h.offset ∀h ∈ halfspaces, e.normal · x = e.offset ∀e ∈ equations}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron<S> {
    pub dim: usize,
    pub halfspaces: Vec<Halfspace<S>>,
    pub equations: Vec<Halfspace<S>>,
}

/// Canonical Minkowski–Weyl generators: lineality in RREF, vertices and rays
/// projected onto the orthogonal complement of the lineality space, rays
/// positively normalised, both lists sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generators<S> {
    pub vertices: Vec<Vec<S>>,
    pub rays: Vec<Vec<S>>,
    pub lineality: Vec<Vec<S>>,
}

impl<S: ExactField> Generators<S> {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Affine dimension of the hull of a subset (`vs` vertices, `rs` rays,
    /// always together with the lineality space).
    pub fn subset_dim(&self, vs: &[usize], rs: &[usize]) -> usize {
        let Some(&v0) = vs.first() else { return 0 };
        let mut rows: Vec<Vec<S>> = vs[1..].iter().map(|&i| linalg::sub(&self.vertices[i], &self.vertices[v0])).collect();
        rows.extend(rs.iter().map(|&i| self.rays[i].clone()));
        rows.extend(self.lineality.iter().cloned());
        if rows.is_empty() {
            0
        } else {
            linalg::rank(&rows)
        }
    }

    /// A point in the relative interior of the hull of a subset.
    pub fn interior_point(&self, vs: &[usize], rs: &[usize]) -> Vec<S> {
        let d = self.vertices[vs[0]].len();
        let mut p = vec![S::zero(); d];
        for &i in vs {
            p = linalg::add(&p, &self.vertices[i]);
        }
        p = linalg::scale(&(S::one() / S::from_int(vs.len() as i64)), &p);
        for &i in rs {
            p = linalg::add(&p, &self.rays[i]);
        }
        p
    }

    /// Basis (RREF) of the direction space of the hull of a subset.
    pub fn direction_basis(&self, vs: &[usize], rs: &[usize]) -> Vec<Vec<S>> {
        let mut rows: Vec<Vec<S>> = vs[1..].iter().map(|&i| linalg::sub(&self.vertices[i], &self.vertices[vs[0]])).collect();
        rows.extend(rs.iter().map(|&i| self.rays[i].clone()));
        rows.extend(self.lineality.iter().cloned());
        linalg::rref(&rows).0
    }
}

fn normalize_dir<S: ExactField>(v: &[S]) -> Vec<S> {
    match v.iter().find(|a| !a.is_zero()) {
        Some(a) => {
            let s = a.abs();
            v.iter().map(|x| x.clone() / s.clone()).collect()
        }
        None => v.to_vec(),
    }
}

struct DdRay<S> {
    v: Vec<S>,
    zeros: BitSet,
}

/// Double description for the cone `{y : c · y ≤ 0 ∀c ∈ rows}`.
/// Returns (extreme rays, lineality basis).
fn double_description<S: ExactField>(rows: &[Vec<S>], dim: usize) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
    let mut lin: Vec<Vec<S>> = (0..dim)
        .map(|i| {
            let mut e = vec![S::zero(); dim];
            e[i] = S::one();
            e
        })
        .collect();
    let mut rays: Vec<DdRay<S>> = Vec::new();
    for (k, c) in rows.iter().enumerate() {
        if let Some(p) = lin.iter().position(|l| !dot(c, l).is_zero()) {
            let l0 = lin.remove(p);
            let v0 = dot(c, &l0);
            for l in lin.iter_mut() {
                let t = dot(c, l) / v0.clone();
                if !t.is_zero() {
                    *l = linalg::sub(l, &linalg::scale(&t, &l0));
                }
            }
            for r in rays.iter_mut() {
                let t = dot(c, &r.v) / v0.clone();
                if !t.is_zero() {
                    r.v = normalize_dir(&linalg::sub(&r.v, &linalg::scale(&t, &l0)));
                }
                r.zeros.insert(k);
            }
            let dir = if v0.is_positive() { l0.iter().map(|x| -x.clone()).collect() } else { l0 };
            rays.push(DdRay { v: normalize_dir(&dir), zeros: (0..k).collect() });
            continue;
        }
        let vals: Vec<S> = rays.iter().map(|r| dot(c, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                let adjacent = (0..rays.len()).all(|r| r == p || r == q || !common.is_subset(&rays[r].zeros));
                if !adjacent {
                    continue;
                }
                let v = linalg::sub(&linalg::scale(&vals[p], &rays[q].v), &linalg::scale(&vals[q], &rays[p].v));
                let mut zeros = common;
                zeros.insert(k);
                fresh.push(DdRay { v: normalize_dir(&v), zeros });
            }
        }
        let mut kept: Vec<DdRay<S>> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(k);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }
    (rays.into_iter().map(|r| r.v).collect(), lin)
}

impl<S: ExactField> Polyhedron<S> {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace<S>>) -> Self {
        Polyhedron { dim, halfspaces, equations: Vec::new() }
    }

    /// H-representation of `conv(vertices) + cone(rays) + span(lineality)`,
    /// computed as the polar cone of the homogenised generators.
    pub fn from_generators(dim: usize, vertices: &[Vec<S>], rays: &[Vec<S>], lineality: &[Vec<S>]) -> Self {
        let mut rows: Vec<Vec<S>> = Vec::new();
        for v in vertices {
            let mut r = v.clone();
            r.push(S::one());
            rows.push(r);
        }
        for r in rays {
            let mut r = r.clone();
            r.push(S::zero());
            rows.push(r);
        }
        for l in lineality {
            let mut r = l.clone();
            r.push(S::zero());
            rows.push(r.iter().map(|x| -x.clone()).collect());
            rows.push(r);
        }
        let (cone, lin) = double_description(&rows, dim + 1);
        let halfspaces = cone
            .into_iter()
            .filter(|c| c[..dim].iter().any(|a| !a.is_zero()))
            .map(|c| Halfspace::new(c[..dim].to_vec(), -c[dim].clone()).normalized())
            .collect();
        let equations = linalg::rref(&lin)
            .0
            .into_iter()
            .map(|c| Halfspace::new(c[..dim].to_vec(), -c[dim].clone()))
            .collect();
        Polyhedron { dim, halfspaces, equations }
    }

    pub fn whole_space(dim: usize) -> Self {
        Self::new(dim, Vec::new())
    }

    /// The box `[-r, r]^dim`.
    pub fn cube(dim: usize, r: &S) -> Self {
        let mut hs = Vec::new();
        for i in 0..dim {
            for sign in [1i64, -1] {
                let mut a = vec![S::zero(); dim];
                a[i] = S::from_int(sign);
                hs.push(Halfspace::new(a, r.clone()));
            }
        }
        Self::new(dim, hs)
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.halfspaces.extend(o.halfspaces.iter().cloned());
        r.equations.extend(o.equations.iter().cloned());
        r
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x)) && self.equations.iter().all(|e| e.slack(x).is_zero())
    }

    pub fn generators(&self) -> Generators<S> {
        let d = self.dim;
        let mut rows: Vec<Vec<S>> = Vec::new();
        let mut lambda = vec![S::zero(); d + 1];
        lambda[d] = -S::one();
        rows.push(lambda);
        let homog = |h: &Halfspace<S>| {
            let mut r = h.normal.clone();
            r.push(-h.offset.clone());
            r
        };
        for e in &self.equations {
            rows.push(homog(e));
            rows.push(homog(&e.flipped()));
        }
        rows.extend(self.halfspaces.iter().map(homog));
        let (rays, lin) = double_description(&rows, d + 1);
        let lineality: Vec<Vec<S>> = linalg::rref(&lin.iter().map(|l| l[..d].to_vec()).collect::<Vec<_>>()).0;
        let mut vertices = BTreeSet::new();
        let mut out_rays = BTreeSet::new();
        for r in rays {
            let lam = r[d].clone();
            if lam.is_positive() {
                let v: Vec<S> = r[..d].iter().map(|x| x.clone() / lam.clone()).collect();
                vertices.insert(linalg::project_out(&lineality, &v));
            } else {
                let v = linalg::project_out(&lineality, &r[..d]);
                if v.iter().any(|x| !x.is_zero()) {
                    out_rays.insert(normalize_dir(&v));
                }
            }
        }
        if vertices.is_empty() {
            out_rays.clear();
        }
        Generators {
            vertices: vertices.into_iter().collect(),
            rays: out_rays.into_iter().collect(),
            lineality,
        }
    }

    pub fn analyze(&self) -> PolyhedronData<S> {
        PolyhedronData::new(self.clone(), self.generators())
    }
}

/// A face of a polyhedron as a subset of its generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub rays: Vec<usize>,
    pub dim: usize,
}

/// A polyhedron together with its generators and incidence data.
#[derive(Clone, Debug)]
pub struct PolyhedronData<S> {
    pub poly: Polyhedron<S>,
    pub gens: Generators<S>,
    pub dim: Option<usize>,
    /// For each halfspace, the tight vertices and rays.
    tight: Vec<(BitSet, BitSet)>,
}

impl<S: ExactField> PolyhedronData<S> {
    pub fn new(poly: Polyhedron<S>, gens: Generators<S>) -> Self {
        let tight = poly
            .halfspaces
            .iter()
            .map(|h| {
                let vs = (0..gens.vertices.len()).filter(|&i| h.slack(&gens.vertices[i]).is_zero()).collect();
                let rs = (0..gens.rays.len()).filter(|&i| dot(&h.normal, &gens.rays[i]).is_zero()).collect();
                (vs, rs)
            })
            .collect();
        let dim = if gens.is_empty() {
            None
        } else {
            let vs: Vec<usize> = (0..gens.vertices.len()).collect();
            let rs: Vec<usize> = (0..gens.rays.len()).collect();
            Some(gens.subset_dim(&vs, &rs))
        };
        PolyhedronData { poly, gens, dim, tight }
    }

    pub fn is_empty(&self) -> bool {
        self.dim.is_none()
    }

    pub fn whole(&self) -> Face {
        Face {
            vertices: (0..self.gens.vertices.len()).collect(),
            rays: (0..self.gens.rays.len()).collect(),
            dim: self.dim.unwrap_or(0),
        }
    }

    /// Indices of halfspaces tight on every generator of the face.
    pub fn tight_constraints(&self, f: &Face) -> Vec<usize> {
        (0..self.tight.len())
            .filter(|&i| f.vertices.iter().all(|&v| self.tight[i].0.contains(v)) && f.rays.iter().all(|&r| self.tight[i].1.contains(r)))
            .collect()
    }

    /// Facets of a face (faces of one dimension less), deduplicated and sorted.
    pub fn facets_of(&self, f: &Face) -> Vec<Face> {
        if f.dim == 0 {
            return Vec::new();
        }
        let fv: BitSet = f.vertices.iter().copied().collect();
        let fr: BitSet = f.rays.iter().copied().collect();
        let mut out = BTreeSet::new();
        for (tv, tr) in &self.tight {
            let vs = fv.intersection(tv);
            let rs = fr.intersection(tr);
            if vs.is_empty() || (vs.len() == f.vertices.len() && rs.len() == f.rays.len()) {
                continue;
            }
            let vs: Vec<usize> = vs.iter().collect();
            let rs: Vec<usize> = rs.iter().collect();
            let dim = self.gens.subset_dim(&vs, &rs);
            if dim + 1 == f.dim {
                out.insert(Face { vertices: vs, rays: rs, dim });
            }
        }
        out.into_iter().collect()
    }

    /// Halfspaces defining facets of the whole polyhedron, one per facet.
    pub fn facet_halfspaces(&self) -> Vec<Halfspace<S>> {
        let Some(d) = self.dim else { return Vec::new() };
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, (tv, tr)) in self.tight.iter().enumerate() {
            if tv.is_empty() || (tv.len() == self.gens.vertices.len() && tr.len() == self.gens.rays.len()) {
                continue;
            }
            let vs: Vec<usize> = tv.iter().collect();
            let rs: Vec<usize> = tr.iter().collect();
            if self.gens.subset_dim(&vs, &rs) + 1 == d && seen.insert((vs, rs)) {
                out.push(self.poly.halfspaces[i].normalized());
            }
        }
        out
    }

    /// Equations of the affine hull (normalised RREF rows), from halfspaces
    /// tight on everything plus the explicit equations.
    pub fn hull_equations(&self) -> Vec<Halfspace<S>> {
        let whole = self.whole();
        let mut rows: Vec<Vec<S>> = self
            .tight_constraints(&whole)
            .into_iter()
            .map(|i| {
                let h = &self.poly.halfspaces[i];
                let mut r = h.normal.clone();
                r.push(h.offset.clone());
                r
            })
            .collect();
        rows.extend(self.poly.equations.iter().map(|e| {
            let mut r = e.normal.clone();
            r.push(e.offset.clone());
            r
        }));
        let d = self.poly.dim;
        linalg::rref(&rows)
            .0
            .into_iter()
            .map(|r| Halfspace::new(r[..d].to_vec(), r[d].clone()))
            .collect()
    }

    /// Generators of a face as a standalone generator set.
    pub fn face_generators(&self, f: &Face) -> Generators<S> {
        Generators {
            vertices: f.vertices.iter().map(|&i| self.gens.vertices[i].clone()).collect(),
            rays: f.rays.iter().map(|&i| self.gens.rays[i].clone()).collect(),
            lineality: self.gens.lineality.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    fn hs(a: &[i64], b: i64) -> Halfspace<Q> {
        Halfspace::new(a.iter().map(|&x| int(x)).collect(), int(b))
    }

    #[test]
    fn unit_square() {
        let p = Polyhedron::new(2, vec![hs(&[1, 0], 1), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 0)]);
        let d = p.analyze();
        assert_eq!(d.gens.vertices.len(), 4);
        assert!(d.gens.is_bounded());
        assert_eq!(d.dim, Some(2));
        let facets = d.facets_of(&d.whole());
        assert_eq!(facets.len(), 4);
        assert!(facets.iter().all(|f| f.vertices.len() == 2 && f.dim == 1));
        assert_eq!(d.facets_of(&facets[0]).len(), 2);
    }

    #[test]
    fn halfplane_has_lineality() {
        let p = Polyhedron::new(2, vec![hs(&[-1, 0], 0)]);
        let g = p.generators();
        assert_eq!(g.vertices, vec![vec![int(0), int(0)]]);
        assert_eq!(g.rays, vec![vec![int(1), int(0)]]);
        assert_eq!(g.lineality, vec![vec![int(0), int(1)]]);
        let d = p.analyze();
        assert_eq!(d.dim, Some(2));
        let f = d.facets_of(&d.whole());
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].dim, 1);
    }

    #[test]
    fn empty_and_lower_dimensional() {
        let p = Polyhedron::new(2, vec![hs(&[1, 0], -1), hs(&[-1, 0], 0)]);
        assert!(p.analyze().is_empty());
        let seg = Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 0)]);
        let d = seg.analyze();
        assert_eq!(d.dim, Some(1));
        assert_eq!(d.hull_equations().len(), 1);
    }

    #[test]
    fn cube_face_counts() {
        let d = Polyhedron::<Q>::cube(3, &int(1)).analyze();
        assert_eq!(d.gens.vertices.len(), 8);
        let facets = d.facets_of(&d.whole());
        assert_eq!(facets.len(), 6);
        let mut edges = BTreeSet::new();
        for f in &facets {
            for e in d.facets_of(f) {
                edges.insert(e);
            }
        }
        assert_eq!(edges.len(), 12);
    }

    #[test]
    fn whole_space_and_redundancy() {
        let d = Polyhedron::<Q>::whole_space(3).analyze();
        assert_eq!(d.dim, Some(3));
        assert_eq!(d.gens.lineality.len(), 3);
        // redundant constraint x <= 5 next to x <= 1
        let p = Polyhedron::new(1, vec![hs(&[1], 1), hs(&[1], 5), hs(&[-1], 0)]);
        assert_eq!(p.analyze().facet_halfspaces().len(), 2);
    }

    #[test]
    fn generators_round_trip() {
        let tri: Vec<Vec<Q>> = vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]];
        let p = Polyhedron::from_generators(2, &tri, &[], &[]);
        assert_eq!(p.halfspaces.len(), 3);
        assert_eq!(p.generators().vertices, {
            let mut t = tri.clone();
            t.sort();
            t
        });
        let seg = Polyhedron::<Q>::from_generators(2, &[vec![int(0), int(0)]], &[vec![int(1), int(1)]], &[]);
        assert_eq!(seg.equations.len(), 1);
        let g = seg.generators();
        assert_eq!(g.rays, vec![vec![int(1), int(1)]]);
    }
}

//! Polyhedral complexes: face lattice, orientations, coorientations,
//! common refinement, clipping to a box and triangulation of bounded cells.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg;
use crate::polyhedron::{Face, Generators, Halfspace, Polyhedron, PolyhedronData};
use crate::scalar::{dot, ExactField};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Cell<S> {
    pub id: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<S>>,
    pub rays: Vec<Vec<S>>,
    /// Lineality space of the cell (RREF); nonempty only for cells
    /// containing a full line.
    pub lineality: Vec<Vec<S>>,
    /// RREF basis of the direction space of the affine hull.
    pub reference_orientation: Vec<Vec<S>>,
    pub pivots: Vec<usize>,
    pub poly: Polyhedron<S>,
    pub interior_point: Vec<S>,
    /// Facets with the induced-orientation sign.
    pub facets: Vec<(usize, i32)>,
    pub cofacets: Vec<(usize, i32)>,
    /// Top-dimensional cells containing this cell, sorted.
    pub tops: Vec<usize>,
    /// Closure avoids the boundary of the clipping window (always true
    /// for unclipped complexes).
    pub interior: bool,
    /// Contained in a facet of the clipping window.
    pub on_window_boundary: bool,
    /// Provenance: for clipped complexes the id of the smallest unclipped
    /// cell containing this one; for refinements the parent top cells of
    /// each input (top cells only).
    pub origin: Vec<usize>,
}

impl<S: ExactField> Cell<S> {
    pub fn generators(&self) -> Generators<S> {
        Generators { vertices: self.vertices.clone(), rays: self.rays.clone(), lineality: self.lineality.clone() }
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Coordinates of a direction vector of the cell in its reference basis.
    pub fn coordinates(&self, v: &[S]) -> Vec<S> {
        linalg::rref_coordinates(&self.pivots, v)
    }

    /// Sign of the frame `vectors` (a basis of the direction space) relative
    /// to the reference orientation.
    pub fn orientation_of(&self, vectors: &[Vec<S>]) -> i32 {
        let m: Vec<Vec<S>> = vectors.iter().map(|v| self.coordinates(v)).collect();
        let d = linalg::det(&m);
        if d.is_positive() {
            1
        } else if d.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.poly.contains(x)
    }

    pub fn data(&self) -> PolyhedronData<S> {
        PolyhedronData::new(self.poly.clone(), self.generators())
    }
}

/// The box `[-r, r]^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window<S> {
    pub r: S,
}

impl<S: ExactField> Window<S> {
    pub fn new(r: S) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::invalid("window radius must be positive"));
        }
        Ok(Window { r })
    }
}

#[derive(Clone, Debug)]
pub struct Complex<S> {
    pub ambient: usize,
    /// Cells sorted by (dimension, canonical generators); `cells[i].id == i`.
    pub cells: Vec<Cell<S>>,
    pub window: Option<S>,
}

/// Input cell given by generators.
pub fn cell_from_generators<S: ExactField>(ambient: usize, vertices: &[Vec<S>], rays: &[Vec<S>]) -> Polyhedron<S> {
    Polyhedron::from_generators(ambient, vertices, rays, &[])
}

struct Proto<S> {
    dim: usize,
    poly: Polyhedron<S>,
    facets: BTreeSet<Generators<S>>,
    tops: BTreeSet<usize>,
}

fn face_poly<S: ExactField>(d: &PolyhedronData<S>, f: &Face) -> Polyhedron<S> {
    let mut p = d.poly.clone();
    for i in d.tight_constraints(f) {
        p.equations.push(d.poly.halfspaces[i].clone());
    }
    p
}

const NOT_A_FACE: &str = "intersection is not a common face";

/// Whether the hyperplane of `h` passes through the interior of the hull of `g`.
fn cuts<S: ExactField>(h: &Halfspace<S>, g: &Generators<S>) -> bool {
    let mut neg = false;
    let mut pos = false;
    for v in &g.vertices {
        let s = h.slack(v);
        neg |= s.is_negative();
        pos |= s.is_positive();
    }
    for r in &g.rays {
        let s = dot(&h.normal, r);
        neg |= s.is_negative();
        pos |= s.is_positive();
    }
    g.lineality.iter().any(|l| !dot(&h.normal, l).is_zero()) || (neg && pos)
}

fn separated<S: ExactField>(a: &Polyhedron<S>, b: &Generators<S>) -> bool {
    a.halfspaces.iter().any(|h| {
        b.vertices.iter().all(|v| h.slack(v).is_positive())
            && b.rays.iter().all(|r| !dot(&h.normal, r).is_negative())
            && b.lineality.iter().all(|l| dot(&h.normal, l).is_zero())
    })
}

impl<S: ExactField> Complex<S> {
    /// Builds the complex whose top cells are the given full-dimensional
    /// polyhedra, computing the face lattice and checking that any two top
    /// cells meet in a common face.
    pub fn build(ambient: usize, tops: Vec<Polyhedron<S>>) -> Result<Self> {
        Self::assemble(ambient, tops, true)
    }

    /// Same as [`Complex::build`] with cells given by vertices and rays.
    pub fn from_cells(ambient: usize, cells: &[(Vec<Vec<S>>, Vec<Vec<S>>)]) -> Result<Self> {
        let tops = cells.iter().map(|(v, r)| cell_from_generators(ambient, v, r)).collect();
        Self::build(ambient, tops)
    }

    /// Like [`Complex::build`], but pairs of cells meeting in something
    /// other than a common face are cut along each other's facet
    /// hyperplanes until the common-face axiom holds. Full-dimensional
    /// overlaps are still errors.
    pub fn build_subdividing(ambient: usize, mut tops: Vec<Polyhedron<S>>) -> Result<Self> {
        loop {
            match Self::assemble(ambient, tops.clone(), true) {
                Err(Error::Validation { first, second, reason }) if reason == NOT_A_FACE => {
                    let a = tops[first].analyze();
                    let b = tops[second].analyze();
                    let mut cut = false;
                    let mut next: Vec<Polyhedron<S>> = Vec::new();
                    for (k, p) in tops.iter().enumerate() {
                        let (me, other) = if k == first {
                            (&a, &b)
                        } else if k == second {
                            (&b, &a)
                        } else {
                            next.push(p.clone());
                            continue;
                        };
                        let mut pieces = vec![me.poly.clone()];
                        for h in other.facet_halfspaces() {
                            if !cuts(&h, &me.gens) {
                                continue;
                            }
                            cut = true;
                            pieces = pieces
                                .into_iter()
                                .flat_map(|q| [q.intersect(&Polyhedron::new(ambient, vec![h.clone()])), q.intersect(&Polyhedron::new(ambient, vec![h.flipped()]))])
                                .filter_map(|q| {
                                    let d = q.analyze();
                                    (d.dim == Some(ambient)).then(|| Polyhedron::new(ambient, d.facet_halfspaces()))
                                })
                                .collect();
                        }
                        next.extend(pieces);
                    }
                    if !cut {
                        return Err(Error::Validation { first, second, reason });
                    }
                    tops = next;
                }
                r => return r,
            }
        }
    }

    /// The complex with the single cell `ℝ^d`.
    pub fn whole_space(ambient: usize) -> Self {
        Self::assemble(ambient, vec![Polyhedron::whole_space(ambient)], false).expect("whole space is valid")
    }

    fn assemble(ambient: usize, tops: Vec<Polyhedron<S>>, validate: bool) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::invalid("a complex needs at least one cell"));
        }
        let datas: Vec<PolyhedronData<S>> = tops.into_iter().map(|p| p.analyze()).collect();
        for (i, d) in datas.iter().enumerate() {
            if d.poly.dim != ambient {
                return Err(Error::invalid(format!("cell {i} lives in dimension {}, expected {ambient}", d.poly.dim)));
            }
            if d.dim != Some(ambient) {
                return Err(Error::invalid(format!("input cell {i} is not full-dimensional")));
            }
        }
        let mut protos: BTreeMap<Generators<S>, Proto<S>> = BTreeMap::new();
        let mut face_keys: Vec<BTreeSet<Generators<S>>> = Vec::new();
        for (ti, d) in datas.iter().enumerate() {
            let mut seen = BTreeSet::new();
            let mut stack = vec![d.whole()];
            let mut keys = BTreeSet::new();
            while let Some(f) = stack.pop() {
                if !seen.insert(f.clone()) {
                    continue;
                }
                let key = d.face_generators(&f);
                keys.insert(key.clone());
                let facets = d.facets_of(&f);
                let proto = protos.entry(key).or_insert_with(|| Proto {
                    dim: f.dim,
                    poly: face_poly(d, &f),
                    facets: BTreeSet::new(),
                    tops: BTreeSet::new(),
                });
                proto.tops.insert(ti);
                for g in facets {
                    proto.facets.insert(d.face_generators(&g));
                    stack.push(g);
                }
            }
            face_keys.push(keys);
        }
        if datas.len() != protos.values().filter(|p| p.dim == ambient).count() {
            return Err(Error::invalid("duplicate top cells"));
        }
        if validate {
            for i in 0..datas.len() {
                for j in i + 1..datas.len() {
                    if separated(&datas[i].poly, &datas[j].gens) || separated(&datas[j].poly, &datas[i].gens) {
                        continue;
                    }
                    let inter = datas[i].poly.intersect(&datas[j].poly).analyze();
                    match inter.dim {
                        None => {}
                        Some(k) if k == ambient => {
                            return Err(Error::Validation { first: i, second: j, reason: "cells overlap in a full-dimensional region".into() })
                        }
                        Some(_) => {
                            if !face_keys[i].contains(&inter.gens) || !face_keys[j].contains(&inter.gens) {
                                return Err(Error::Validation { first: i, second: j, reason: NOT_A_FACE.into() });
                            }
                        }
                    }
                }
            }
        }
        let mut order: Vec<(&Generators<S>, &Proto<S>)> = protos.iter().collect();
        order.sort_by(|a, b| (a.1.dim, a.0).cmp(&(b.1.dim, b.0)));
        let index: BTreeMap<&Generators<S>, usize> = order.iter().enumerate().map(|(i, (k, _))| (*k, i)).collect();
        let mut top_ids = vec![0; datas.len()];
        for (i, (_, p)) in order.iter().enumerate() {
            if p.dim == ambient {
                top_ids[*p.tops.iter().next().unwrap()] = i;
            }
        }
        let mut cells: Vec<Cell<S>> = order
            .iter()
            .enumerate()
            .map(|(id, (g, p))| {
                let vs: Vec<usize> = (0..g.vertices.len()).collect();
                let rs: Vec<usize> = (0..g.rays.len()).collect();
                let (basis, pivots) = linalg::rref(&g.direction_basis(&vs, &rs));
                let mut tops: Vec<usize> = p.tops.iter().map(|&t| top_ids[t]).collect();
                tops.sort();
                Cell {
                    id,
                    dim: p.dim,
                    vertices: g.vertices.clone(),
                    rays: g.rays.clone(),
                    lineality: g.lineality.clone(),
                    reference_orientation: basis,
                    pivots,
                    poly: p.poly.clone(),
                    interior_point: g.interior_point(&vs, &rs),
                    facets: Vec::new(),
                    cofacets: Vec::new(),
                    tops,
                    interior: true,
                    on_window_boundary: false,
                    origin: Vec::new(),
                }
            })
            .collect();
        for (id, (_, p)) in order.iter().enumerate() {
            for fk in &p.facets {
                let fid = index[fk];
                let s = induced_sign(&cells[id], &cells[fid]);
                cells[id].facets.push((fid, s));
                cells[fid].cofacets.push((id, s));
            }
        }
        for c in cells.iter_mut() {
            c.facets.sort();
            c.cofacets.sort();
        }
        Ok(Complex { ambient, cells, window: None })
    }

    pub fn cell(&self, id: usize) -> &Cell<S> {
        &self.cells[id]
    }

    pub fn cells_of_dim(&self, k: usize) -> impl Iterator<Item = &Cell<S>> {
        self.cells.iter().filter(move |c| c.dim == k)
    }

    pub fn top_cells(&self) -> impl Iterator<Item = &Cell<S>> {
        self.cells_of_dim(self.ambient)
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut v = vec![0; self.ambient + 1];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    /// The smallest cell containing `x` (the one with `x` in its relative interior).
    pub fn locate(&self, x: &[S]) -> Option<usize> {
        self.cells.iter().find(|c| c.contains(x)).map(|c| c.id)
    }

    /// The coarsest common refinement; top cells record their parents in
    /// `origin` as `[top of self, top of other]`.
    pub fn common_refinement(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::invalid("complexes live in different dimensions"));
        }
        let mut pieces = Vec::new();
        let mut parents = Vec::new();
        for a in self.top_cells() {
            for b in other.top_cells() {
                if separated(&a.poly, &b.generators()) || separated(&b.poly, &a.generators()) {
                    continue;
                }
                let p = a.poly.intersect(&b.poly);
                let d = p.analyze();
                if d.dim == Some(self.ambient) {
                    let mut p = p;
                    p.halfspaces = d.facet_halfspaces();
                    pieces.push(p);
                    parents.push((a.id, b.id));
                }
            }
        }
        if pieces.is_empty() {
            return Err(Error::invalid("complexes have disjoint supports"));
        }
        let mut out = Self::assemble(self.ambient, pieces.clone(), false)?;
        for c in out.cells.iter_mut().filter(|c| c.dim == self.ambient) {
            let k = pieces.iter().position(|p| p.contains(&c.interior_point)).unwrap();
            c.origin = vec![parents[k].0, parents[k].1];
        }
        for c in out.cells.iter().filter(|c| c.dim + 1 == self.ambient && c.cofacets.len() == 1) {
            for input in [self, other] {
                let inside = match input.locate(&c.interior_point) {
                    Some(id) => {
                        let cell = input.cell(id);
                        cell.dim == input.ambient || cell.cofacets.len() >= 2
                    }
                    None => false,
                };
                if inside {
                    return Err(Error::invalid("complexes have different supports"));
                }
            }
        }
        Ok(out)
    }

    /// Intersects every cell with the window box, sets interior flags and
    /// records for each clipped cell the smallest original cell containing it.
    pub fn clip_to_window(&self, w: &Window<S>) -> Result<Self> {
        let cube = Polyhedron::cube(self.ambient, &w.r);
        let mut pieces = Vec::new();
        for c in self.top_cells() {
            let p = c.poly.intersect(&cube);
            let d = p.analyze();
            if d.dim == Some(self.ambient) {
                let mut p = p;
                p.halfspaces = d.facet_halfspaces();
                p.equations.clear();
                pieces.push(p);
            }
        }
        if pieces.is_empty() {
            return Err(Error::invalid("complex does not meet the window"));
        }
        let mut out = Self::assemble(self.ambient, pieces, false)?;
        let r = w.r.clone();
        for c in out.cells.iter_mut() {
            c.interior = c.vertices.iter().all(|v| v.iter().all(|x| x.abs() < r));
            c.on_window_boundary = (0..self.ambient).any(|i| {
                c.vertices.iter().all(|v| v[i] == r) || c.vertices.iter().all(|v| v[i] == -r.clone())
            });
            c.origin = self.locate(&c.interior_point).into_iter().collect();
        }
        out.window = Some(r);
        Ok(out)
    }

    /// Ordered pair (B⁺, B⁻) of top cells adjacent to a codimension-one
    /// cell; B⁺ has the smaller id.
    pub fn facet_coorientation(&self, facet: usize) -> Result<(usize, usize)> {
        let c = self.cells.get(facet).ok_or_else(|| Error::invalid(format!("no cell {facet}")))?;
        if c.dim + 1 != self.ambient {
            return Err(Error::invalid(format!("cell {facet} has dimension {}, not {}", c.dim, self.ambient - 1)));
        }
        match c.cofacets.as_slice() {
            [(a, _), (b, _)] => Ok((*a.min(b), *a.max(b))),
            _ => Err(Error::Boundary(facet)),
        }
    }

    /// Sign of the orientation induced on `facet` by `cell` (outward vector
    /// first) relative to the facet's reference orientation.
    pub fn induced_orientation(&self, cell: usize, facet: usize) -> Result<i32> {
        self.cells
            .get(cell)
            .and_then(|c| c.facets.iter().find(|(f, _)| *f == facet))
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::invalid(format!("cell {facet} is not a facet of cell {cell}")))
    }

    /// Pulling triangulation of a bounded cell: cone from its smallest
    /// vertex over the triangulated facets not containing it. Each simplex
    /// is returned with its vertex list (apex first) and its orientation
    /// relative to the cell's reference orientation.
    pub fn triangulate_cell(&self, id: usize) -> Result<Vec<Simplex<S>>> {
        let c = &self.cells[id];
        if !c.is_bounded() {
            return Err(Error::invalid(format!("cell {id} is unbounded; clip it first")));
        }
        let d = c.data();
        let simplices = pulling(&d, &d.whole());
        Ok(simplices
            .into_iter()
            .map(|vs| {
                let vertices: Vec<Vec<S>> = vs.iter().map(|&i| c.vertices[i].clone()).collect();
                let edges: Vec<Vec<S>> = vertices[1..].iter().map(|v| linalg::sub(v, &vertices[0])).collect();
                let sign = if edges.is_empty() { 1 } else { c.orientation_of(&edges) };
                Simplex { vertices, sign }
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex<S> {
    pub vertices: Vec<Vec<S>>,
    pub sign: i32,
}

impl<S: ExactField> Simplex<S> {
    /// Unsigned k-dimensional volume relative to the parametrisation by
    /// edge coordinates in the given basis (`|det| / k!`).
    pub fn volume_in(&self, cell: &Cell<S>) -> S {
        let edges: Vec<Vec<S>> = self.vertices[1..].iter().map(|v| cell.coordinates(&linalg::sub(v, &self.vertices[0]))).collect();
        linalg::det(&edges).abs() / crate::scalar::factorial::<S>(edges.len() as u32)
    }
}

fn pulling<S: ExactField>(d: &PolyhedronData<S>, f: &Face) -> Vec<Vec<usize>> {
    if f.dim == 0 {
        return vec![vec![f.vertices[0]]];
    }
    let apex = f.vertices[0];
    let mut out = Vec::new();
    for g in d.facets_of(f) {
        if g.vertices.contains(&apex) {
            continue;
        }
        for mut s in pulling(d, &g) {
            s.insert(0, apex);
            out.push(s);
        }
    }
    out
}

fn induced_sign<S: ExactField>(cell: &Cell<S>, facet: &Cell<S>) -> i32 {
    let u = linalg::sub(&facet.interior_point, &cell.interior_point);
    let mut frame = vec![u];
    frame.extend(facet.reference_orientation.iter().cloned());
    cell.orientation_of(&frame)
}

/// Halfspaces `±x_i ≤ r` that a point attains with equality.
pub fn window_facets<S: ExactField>(x: &[S], r: &S) -> Vec<Halfspace<S>> {
    let d = x.len();
    let mut out = Vec::new();
    for i in 0..d {
        for s in [1i64, -1] {
            if x[i].clone() * S::from_int(s) == *r {
                let mut a = vec![S::zero(); d];
                a[i] = S::from_int(s);
                out.push(Halfspace::new(a, r.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    fn pt(c: &[i64]) -> Vec<Q> {
        c.iter().map(|&x| int(x)).collect()
    }

    fn hs(a: &[i64], b: i64) -> Halfspace<Q> {
        Halfspace::new(pt(a), int(b))
    }

    #[test]
    fn split_square() {
        let c = Complex::from_cells(
            2,
            &[
                (vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[1, 1])], vec![]),
                (vec![pt(&[0, 0]), pt(&[0, 1]), pt(&[1, 1])], vec![]),
            ],
        )
        .unwrap();
        assert_eq!(c.count_by_dim(), vec![4, 5, 2]);
    }

    #[test]
    fn overlapping_triangles_rejected() {
        let e = Complex::from_cells(
            2,
            &[
                (vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])], vec![]),
                (vec![pt(&[1, 0]), pt(&[3, 0]), pt(&[1, 2])], vec![]),
            ],
        )
        .unwrap_err();
        assert!(matches!(e, Error::Validation { first: 0, second: 1, .. }));
        // touching along a segment that is not a full edge of either
        let e = Complex::from_cells(
            2,
            &[
                (vec![pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])], vec![]),
                (vec![pt(&[1, 0]), pt(&[3, 0]), pt(&[1, -2])], vec![]),
            ],
        )
        .unwrap_err();
        assert!(matches!(e, Error::Validation { .. }));
    }

    #[test]
    fn subdividing_repairs_t_junctions() {
        let tops = vec![
            Polyhedron::from_generators(2, &[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 1]), pt(&[2, 1])], &[], &[]),
            Polyhedron::from_generators(2, &[pt(&[0, 1]), pt(&[1, 1]), pt(&[0, 2]), pt(&[1, 2])], &[], &[]),
            Polyhedron::from_generators(2, &[pt(&[1, 1]), pt(&[2, 1]), pt(&[1, 2]), pt(&[2, 2])], &[], &[]),
        ];
        assert!(Complex::build(2, tops.clone()).is_err());
        let c = Complex::build_subdividing(2, tops).unwrap();
        assert_eq!(c.count_by_dim()[2], 4);
        boundary_squared_vanishes(&c);
    }

    #[test]
    fn simplex_face_lattice() {
        for d in 1..=4usize {
            let mut vs: Vec<Vec<Q>> = vec![vec![int(0); d]];
            for i in 0..d {
                let mut v = vec![int(0); d];
                v[i] = int(1);
                vs.push(v);
            }
            let c = Complex::from_cells(d, &[(vs, vec![])]).unwrap();
            assert_eq!(c.cells.len(), (1usize << (d + 1)) - 1);
        }
    }

    fn boundary_squared_vanishes(c: &Complex<Q>) {
        for cell in &c.cells {
            let mut acc: BTreeMap<usize, i32> = BTreeMap::new();
            for &(f, s) in &cell.facets {
                for &(r, t) in &c.cells[f].facets {
                    *acc.entry(r).or_default() += s * t;
                }
            }
            assert!(acc.values().all(|&v| v == 0), "cell {}", cell.id);
        }
    }

    #[test]
    fn orientation_signs() {
        let seg = Complex::from_cells(1, &[(vec![pt(&[0]), pt(&[1])], vec![])]).unwrap();
        let top = seg.top_cells().next().unwrap().id;
        let at = |x: i64| seg.cells.iter().find(|c| c.dim == 0 && c.vertices[0] == pt(&[x])).unwrap().id;
        assert_eq!(seg.induced_orientation(top, at(1)).unwrap(), 1);
        assert_eq!(seg.induced_orientation(top, at(0)).unwrap(), -1);
        assert!(seg.induced_orientation(at(0), top).is_err());
        let cube = Complex::build(3, vec![Polyhedron::cube(3, &int(1))]).unwrap();
        boundary_squared_vanishes(&cube);
        let tri = Complex::from_cells(2, &[(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])], vec![])]).unwrap();
        boundary_squared_vanishes(&tri);
    }

    fn lines_complex() -> Complex<Q> {
        let quad = |sx: i64, sy: i64| Polyhedron::new(2, vec![hs(&[-sx, 0], 0), hs(&[0, -sy], 0)]);
        Complex::build(2, vec![quad(1, 1), quad(1, -1), quad(-1, 1), quad(-1, -1)]).unwrap()
    }

    #[test]
    fn transverse_lines_refinement() {
        let a = Complex::build(2, vec![Polyhedron::new(2, vec![hs(&[1, 0], 0)]), Polyhedron::new(2, vec![hs(&[-1, 0], 0)])]).unwrap();
        let b = Complex::build(2, vec![Polyhedron::new(2, vec![hs(&[0, 1], 0)]), Polyhedron::new(2, vec![hs(&[0, -1], 0)])]).unwrap();
        let r = a.common_refinement(&b).unwrap();
        assert_eq!(r.count_by_dim(), vec![1, 4, 4]);
        boundary_squared_vanishes(&r);
        let rr = r.common_refinement(&r).unwrap();
        assert_eq!(rr.count_by_dim(), r.count_by_dim());
        let ba = b.common_refinement(&a).unwrap();
        let keys = |c: &Complex<Q>| c.cells.iter().map(|c| c.generators()).collect::<Vec<_>>();
        assert_eq!(keys(&ba), keys(&r));
        // supports differ
        let half = Complex::build(2, vec![Polyhedron::new(2, vec![hs(&[1, 0], 0)])]).unwrap();
        assert!(half.common_refinement(&b).is_err());
        assert_eq!(lines_complex().count_by_dim(), vec![1, 4, 4]);
    }

    #[test]
    fn clipping() {
        let half = Complex::build(2, vec![Polyhedron::new(2, vec![hs(&[-1, 0], 0)])]).unwrap();
        let w = Window::new(int(1)).unwrap();
        let c = half.clip_to_window(&w).unwrap();
        let top = c.top_cells().next().unwrap();
        assert_eq!(top.vertices, vec![pt(&[0, -1]), pt(&[0, 1]), pt(&[1, -1]), pt(&[1, 1])]);
        assert!(!top.interior);
        // the boundary ray {x ≥ 0, y = 0} of the lines complex
        let lines = lines_complex().clip_to_window(&w).unwrap();
        let origin = lines.cells.iter().find(|c| c.dim == 0 && c.vertices[0] == pt(&[0, 0])).unwrap();
        assert!(origin.interior);
        let axis = lines.cells.iter().find(|c| c.dim == 1 && c.vertices == vec![pt(&[0, 0]), pt(&[1, 0])]).unwrap();
        assert!(!axis.interior);
        assert!(!axis.on_window_boundary);
        assert_eq!(lines_complex().cell(axis.origin[0]).rays, vec![pt(&[1, 0])]);
        let rim = lines.cells.iter().find(|c| c.dim == 1 && c.vertices == vec![pt(&[1, 0]), pt(&[1, 1])]).unwrap();
        assert!(rim.on_window_boundary);
        assert!(matches!(lines.facet_coorientation(rim.id), Err(Error::Boundary(_))));
        assert!(lines.facet_coorientation(axis.id).is_ok());
    }

    #[test]
    fn tropical_line_clipped() {
        // linearity regions of max(0, x, y)
        let regions = vec![
            Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0)]),
            Polyhedron::new(2, vec![hs(&[-1, 0], 0), hs(&[-1, 1], 0)]),
            Polyhedron::new(2, vec![hs(&[0, -1], 0), hs(&[1, -1], 0)]),
        ];
        let c = Complex::build(2, regions).unwrap();
        assert_eq!(c.count_by_dim(), vec![1, 3, 3]);
        let w = c.clip_to_window(&Window::new(int(1)).unwrap()).unwrap();
        // brute force over the 3 rays: each hits the box boundary once
        let interior_vertices = w.cells_of_dim(0).filter(|c| c.interior).count();
        assert_eq!(interior_vertices, 1);
        let spokes = w.cells_of_dim(1).filter(|c| !c.on_window_boundary).count();
        assert_eq!(spokes, 3);
        assert!(w.cells_of_dim(1).filter(|c| !c.on_window_boundary).all(|c| !c.interior));
    }

    #[test]
    fn coorientation_rule() {
        let a = Complex::build(2, vec![Polyhedron::new(2, vec![hs(&[1, 0], 0)]), Polyhedron::new(2, vec![hs(&[-1, 0], 0)])]).unwrap();
        let edge = a.cells_of_dim(1).next().unwrap().id;
        let (p, m) = a.facet_coorientation(edge).unwrap();
        assert!(p < m);
        assert_eq!(a.induced_orientation(p, edge).unwrap(), -a.induced_orientation(m, edge).unwrap());
    }

    #[test]
    fn triangulation() {
        let w = Window::<Q>::new(int(1)).unwrap();
        let cube = Complex::build(3, vec![Polyhedron::cube(3, &w.r)]).unwrap();
        let top = cube.top_cells().next().unwrap();
        let simplices = cube.triangulate_cell(top.id).unwrap();
        assert_eq!(simplices.len(), 6);
        let vol: Q = simplices.iter().map(|s| s.volume_in(top)).sum();
        assert_eq!(vol, int(8));
        let sq = Complex::build(2, vec![Polyhedron::cube(2, &w.r)]).unwrap();
        assert_eq!(sq.triangulate_cell(sq.top_cells().next().unwrap().id).unwrap().len(), 2);
        let tri = Complex::from_cells(2, &[(vec![pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])], vec![])]).unwrap();
        let t = tri.triangulate_cell(tri.top_cells().next().unwrap().id).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].sign, -1);
        let half = Complex::build(2, vec![Polyhedron::new(2, vec![hs(&[-1, 0], 0)])]).unwrap();
        assert!(half.triangulate_cell(half.top_cells().next().unwrap().id).is_err());
    }
}

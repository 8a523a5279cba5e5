//! Piecewise linear functions on ℂⁿ = ℝ²ⁿ, their linearity complexes,
//! constructive families and PPH-polynomials over a family.

use std::collections::BTreeMap;

use crate::complex::Complex;
use crate::exterior::{dc_affine, Covector};
use crate::poly::Poly;
use crate::polyhedron::{Halfspace, Polyhedron};
use crate::scalar::{dot, factorial, ExactField};
use crate::{Error, Result};

/// `gradient · x + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFn<S> {
    pub gradient: Vec<S>,
    pub constant: S,
}

impl<S: ExactField> AffineFn<S> {
    pub fn new(gradient: Vec<S>, constant: S) -> Self {
        AffineFn { gradient, constant }
    }

    pub fn constant_fn(dim: usize, c: S) -> Self {
        AffineFn { gradient: vec![S::zero(); dim], constant: c }
    }

    /// The coordinate function with index `i` (`x_{i/2+1}` for even `i`, `y_{i/2+1}` for odd).
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut g = vec![S::zero(); dim];
        g[i] = S::one();
        AffineFn { gradient: g, constant: S::zero() }
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, x: &[S]) -> S {
        dot(&self.gradient, x) + self.constant.clone()
    }

    pub fn add(&self, o: &Self) -> Self {
        AffineFn {
            gradient: self.gradient.iter().zip(&o.gradient).map(|(a, b)| a.clone() + b.clone()).collect(),
            constant: self.constant.clone() + o.constant.clone(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        AffineFn { gradient: self.gradient.iter().map(|a| a.clone() * s.clone()).collect(), constant: self.constant.clone() * s.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn is_constant(&self) -> bool {
        self.gradient.iter().all(|a| a.is_zero())
    }

    pub fn to_poly(&self) -> Poly<S> {
        Poly::affine(&self.gradient, self.constant.clone())
    }

    /// `d^c` of the function, a constant covector.
    pub fn dc(&self) -> Covector<S> {
        dc_affine(&self.gradient)
    }

    /// `{x : self(x) ≤ o(x)}`.
    pub fn le_halfspace(&self, o: &Self) -> Halfspace<S> {
        let d = self.sub(o);
        Halfspace::new(d.gradient, -d.constant)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PLExpr<S> {
    Affine(AffineFn<S>),
    Max(Vec<PLExpr<S>>),
    Min(Vec<PLExpr<S>>),
    Sum(Vec<PLExpr<S>>),
    Scale(S, Box<PLExpr<S>>),
}

type Regions<S> = Vec<(Polyhedron<S>, Vec<AffineFn<S>>)>;

impl<S: ExactField> PLExpr<S> {
    pub fn affine(gradient: Vec<S>, constant: S) -> Self {
        PLExpr::Affine(AffineFn::new(gradient, constant))
    }

    pub fn constant(dim: usize, c: S) -> Self {
        PLExpr::Affine(AffineFn::constant_fn(dim, c))
    }

    pub fn coordinate(dim: usize, i: usize) -> Self {
        PLExpr::Affine(AffineFn::coordinate(dim, i))
    }

    /// Ambient real dimension; `None` for a childless node.
    pub fn dim(&self) -> Option<usize> {
        match self {
            PLExpr::Affine(a) => Some(a.dim()),
            PLExpr::Max(c) | PLExpr::Min(c) | PLExpr::Sum(c) => c.first().and_then(|e| e.dim()),
            PLExpr::Scale(_, e) => e.dim(),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            PLExpr::Affine(a) if a.dim() == dim => Ok(()),
            PLExpr::Affine(a) => Err(Error::DegreeMismatch { expected: dim, found: a.dim() }),
            PLExpr::Max(c) | PLExpr::Min(c) if c.is_empty() => Err(Error::invalid("max/min needs at least one argument")),
            PLExpr::Sum(c) if c.is_empty() => Err(Error::invalid("sum needs at least one term")),
            PLExpr::Max(c) | PLExpr::Min(c) | PLExpr::Sum(c) => c.iter().try_for_each(|e| e.validate(dim)),
            PLExpr::Scale(_, e) => e.validate(dim),
        }
    }

    pub fn eval(&self, x: &[S]) -> S {
        match self {
            PLExpr::Affine(a) => a.eval(x),
            PLExpr::Max(c) => c.iter().map(|e| e.eval(x)).max().expect("nonempty max"),
            PLExpr::Min(c) => c.iter().map(|e| e.eval(x)).min().expect("nonempty min"),
            PLExpr::Sum(c) => c.iter().fold(S::zero(), |acc, e| acc + e.eval(x)),
            PLExpr::Scale(s, e) => s.clone() * e.eval(x),
        }
    }

    /// Floating-point evaluation for sampling.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            PLExpr::Affine(a) => {
                a.gradient.iter().zip(x).map(|(g, xi)| g.to_f64_lossy() * xi).sum::<f64>() + a.constant.to_f64_lossy()
            }
            PLExpr::Max(c) => c.iter().map(|e| e.eval_f64(x)).fold(f64::NEG_INFINITY, f64::max),
            PLExpr::Min(c) => c.iter().map(|e| e.eval_f64(x)).fold(f64::INFINITY, f64::min),
            PLExpr::Sum(c) => c.iter().map(|e| e.eval_f64(x)).sum(),
            PLExpr::Scale(s, e) => s.to_f64_lossy() * e.eval_f64(x),
        }
    }

    pub fn scaled(self, s: S) -> Self {
        PLExpr::Scale(s, Box::new(self))
    }

    pub fn minus(self, o: Self) -> Self {
        PLExpr::Sum(vec![self, o.scaled(-S::one())])
    }

    /// Full-dimensional regions, each carrying the affine pieces of the
    /// listed expressions on it.
    fn regions_of_list(list: &[PLExpr<S>], dim: usize) -> Regions<S> {
        let mut acc: Regions<S> = vec![(Polyhedron::whole_space(dim), Vec::new())];
        for e in list {
            let mine = e.regions(dim);
            let mut next = Vec::new();
            for (p, fs) in &acc {
                for (q, g) in &mine {
                    if let Some(r) = full_dim_intersection(p, q, dim) {
                        let mut fs = fs.clone();
                        fs.push(g[0].clone());
                        next.push((r, fs));
                    }
                }
            }
            acc = next;
        }
        acc
    }

    fn regions(&self, dim: usize) -> Regions<S> {
        match self {
            PLExpr::Affine(a) => vec![(Polyhedron::whole_space(dim), vec![a.clone()])],
            PLExpr::Scale(s, e) => e.regions(dim).into_iter().map(|(p, f)| (p, vec![f[0].scale(s)])).collect(),
            PLExpr::Sum(c) => Self::regions_of_list(c, dim)
                .into_iter()
                .map(|(p, fs)| {
                    let total = fs.iter().skip(1).fold(fs[0].clone(), |a, b| a.add(b));
                    (p, vec![total])
                })
                .collect(),
            PLExpr::Max(c) | PLExpr::Min(c) => {
                let is_max = matches!(self, PLExpr::Max(_));
                let mut out = Vec::new();
                for (p, fs) in Self::regions_of_list(c, dim) {
                    let mut distinct = fs.clone();
                    distinct.sort();
                    distinct.dedup();
                    for a in &distinct {
                        let hs: Vec<Halfspace<S>> = distinct
                            .iter()
                            .filter(|b| *b != a)
                            .map(|b| if is_max { b.le_halfspace(a) } else { a.le_halfspace(b) })
                            .collect();
                        if let Some(r) = full_dim_intersection(&p, &Polyhedron::new(dim, hs), dim) {
                            out.push((r, vec![a.clone()]));
                        }
                    }
                }
                out
            }
        }
    }

    /// Complex of linearity of the expression with the affine piece on
    /// each top cell (indexed by cell id).
    pub fn linearity_complex(&self, dim: usize) -> Result<(Complex<S>, BTreeMap<usize, AffineFn<S>>)> {
        self.validate(dim)?;
        let regions = self.regions(dim);
        let complex = Complex::build_subdividing(dim, regions.iter().map(|(p, _)| p.clone()).collect())?;
        let mut assignment = BTreeMap::new();
        for c in complex.top_cells() {
            let (_, f) = regions
                .iter()
                .find(|(p, _)| p.contains(&c.interior_point))
                .ok_or_else(|| Error::invalid("linearity region lookup failed"))?;
            assignment.insert(c.id, f[0].clone());
        }
        Ok((complex, assignment))
    }
}

fn full_dim_intersection<S: ExactField>(p: &Polyhedron<S>, q: &Polyhedron<S>, dim: usize) -> Option<Polyhedron<S>> {
    let r = p.intersect(q);
    let d = r.analyze();
    (d.dim == Some(dim)).then(|| Polyhedron::new(dim, d.facet_halfspaces()))
}

/// Which top cell Δ̃ ⊃ Δ supplies the extension of the functions from a
/// lower-dimensional cell Δ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionChoice {
    SmallestTop,
    LargestTop,
    Explicit(BTreeMap<usize, usize>),
}

impl Default for ExtensionChoice {
    fn default() -> Self {
        ExtensionChoice::SmallestTop
    }
}

impl ExtensionChoice {
    pub fn resolve<S: ExactField>(&self, complex: &Complex<S>, cell: usize) -> Result<usize> {
        let c = complex.cells.get(cell).ok_or_else(|| Error::invalid(format!("no cell {cell}")))?;
        if c.dim == complex.ambient {
            return Ok(cell);
        }
        match self {
            ExtensionChoice::SmallestTop => Ok(c.tops[0]),
            ExtensionChoice::LargestTop => Ok(*c.tops.last().unwrap()),
            ExtensionChoice::Explicit(m) => match m.get(&cell) {
                Some(t) if c.tops.contains(t) => Ok(*t),
                Some(t) => Err(Error::invalid(format!("cell {t} is not a top cell containing cell {cell}"))),
                None => Ok(c.tops[0]),
            },
        }
    }
}

/// A finite list of PL functions with a common complex of linearity and
/// the affine piece of every function on every top cell.
#[derive(Clone, Debug)]
pub struct ConstructiveFamily<S> {
    /// Complex dimension n; the ambient real dimension is 2n.
    pub n: usize,
    pub functions: Vec<PLExpr<S>>,
    pub complex: Complex<S>,
    /// top cell id → affine piece of each function.
    pub assignment: BTreeMap<usize, Vec<AffineFn<S>>>,
}

impl<S: ExactField> ConstructiveFamily<S> {
    pub fn build(n: usize, functions: Vec<PLExpr<S>>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::invalid("a family needs at least one function"));
        }
        let dim = 2 * n;
        let mut parts = Vec::new();
        for f in &functions {
            parts.push(f.linearity_complex(dim)?);
        }
        let mut complex = parts[0].0.clone();
        for (c, _) in &parts[1..] {
            complex = complex.common_refinement(c)?;
        }
        let mut assignment = BTreeMap::new();
        for top in complex.top_cells() {
            let mut fs = Vec::new();
            for (c, a) in &parts {
                let id = c.locate(&top.interior_point).ok_or_else(|| Error::invalid("refinement lost a region"))?;
                fs.push(a[&id].clone());
            }
            assignment.insert(top.id, fs);
        }
        let fam = ConstructiveFamily { n, functions, complex, assignment };
        fam.check()?;
        Ok(fam)
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Checks agreement of assignments with the expressions at vertices
    /// and along rays and lineality directions, and continuity across facets.
    pub fn check(&self) -> Result<()> {
        for top in self.complex.top_cells() {
            let fs = &self.assignment[&top.id];
            let v0 = &top.vertices[0];
            let mut probes: Vec<Vec<S>> = top.vertices.clone();
            for r in top.rays.iter().chain(&top.lineality) {
                probes.push(crate::linalg::add(v0, r));
            }
            for l in &top.lineality {
                probes.push(crate::linalg::sub(v0, l));
            }
            for (i, (f, a)) in self.functions.iter().zip(fs).enumerate() {
                if probes.iter().any(|p| f.eval(p) != a.eval(p)) {
                    return Err(Error::invalid(format!("function {i} is not affine on cell {}", top.id)));
                }
            }
        }
        for c in self.complex.cells_of_dim(self.dim().saturating_sub(1)) {
            if c.tops.len() < 2 {
                continue;
            }
            let a = &self.assignment[&c.tops[0]];
            let b = &self.assignment[&c.tops[1]];
            for (i, (fa, fb)) in a.iter().zip(b).enumerate() {
                let d = fa.sub(fb);
                let ok = c.vertices.iter().all(|v| d.eval(v).is_zero())
                    && c.rays.iter().chain(&c.lineality).all(|r| dot(&d.gradient, r).is_zero());
                if !ok {
                    return Err(Error::invalid(format!("function {i} is discontinuous across cell {}", c.id)));
                }
            }
        }
        Ok(())
    }

    /// The affine function `H^i_{Δ̃}` extending function `i` from `cell`.
    pub fn restrict_extension(&self, cell: usize, i: usize, choice: &ExtensionChoice) -> Result<AffineFn<S>> {
        if i >= self.len() {
            return Err(Error::invalid(format!("family has {} functions, no index {i}", self.len())));
        }
        let t = choice.resolve(&self.complex, cell)?;
        Ok(self.assignment[&t][i].clone())
    }

    /// Affine pieces of all functions valid on a cell (from its smallest top coface).
    pub fn pieces_on(&self, cell: usize) -> &[AffineFn<S>] {
        &self.assignment[&self.complex.cells[cell].tops[0]]
    }

    /// Family variables as ambient polynomials on a cell.
    pub fn substitution(&self, cell: usize) -> Vec<Poly<S>> {
        self.pieces_on(cell).iter().map(|a| a.to_poly()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn unit(q: usize, i: usize) -> Self {
        let mut v = vec![0; q];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn abs(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn factorial<S: ExactField>(&self) -> S {
        self.0.iter().fold(S::one(), |acc, &i| acc * factorial::<S>(i))
    }

    pub fn add(&self, o: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices of length `q` with `|I| = k`, in lexicographic order.
    pub fn all_of_degree(q: usize, k: u32) -> Vec<Self> {
        fn rec(q: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == q {
                prefix.push(k);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for i in (0..=k).rev() {
                prefix.push(i);
                rec(q, k - i, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if q > 0 {
            rec(q, k, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// A polynomial in the functions of a family (variables `x_1…x_q`).
#[derive(Clone, PartialEq, Eq)]
pub struct PPHPolynomial<S> {
    pub poly: Poly<S>,
    pub nvars: usize,
    pub degree: u32,
}

impl<S: ExactField> std::fmt::Debug for PPHPolynomial<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PPHPolynomial({:?}, nvars={}, degree={})", self.poly, self.nvars, self.degree)
    }
}

impl<S: ExactField> PPHPolynomial<S> {
    pub fn new(poly: Poly<S>, nvars: usize) -> Result<Self> {
        if poly.nvars() > nvars {
            return Err(Error::invalid(format!("polynomial uses {} variables, family has {nvars}", poly.nvars())));
        }
        let degree = poly.total_degree();
        Ok(PPHPolynomial { poly, nvars, degree })
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        PPHPolynomial { poly: Poly::var(i), nvars, degree: 1 }
    }

    /// `∂^{|I|} P / ∂x^I`; `None` stands for the empty index and yields zero.
    pub fn partial(&self, index: Option<&MultiIndex>) -> Result<Self> {
        let Some(index) = index else {
            return Ok(PPHPolynomial { poly: Poly::zero(), nvars: self.nvars, degree: self.degree });
        };
        if index.0.len() != self.nvars {
            return Err(Error::invalid(format!("multi-index has length {}, expected {}", index.0.len(), self.nvars)));
        }
        let mut p = self.poly.clone();
        for (i, &k) in index.0.iter().enumerate() {
            for _ in 0..k {
                p = p.deriv(i);
            }
        }
        Ok(PPHPolynomial { poly: p, nvars: self.nvars, degree: self.degree.saturating_sub(index.abs()) })
    }

    /// Value of the polynomial as an ambient polynomial on a cell.
    pub fn on_cell(&self, fam: &ConstructiveFamily<S>, cell: usize) -> Poly<S> {
        self.poly.compose(&fam.substitution(cell))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    fn max0(dim: usize, i: usize) -> PLExpr<Q> {
        PLExpr::Max(vec![PLExpr::constant(dim, int(0)), PLExpr::coordinate(dim, i)])
    }

    #[test]
    fn evaluation() {
        let v = |a: i64, b: i64| vec![int::<Q>(a), int(b)];
        assert_eq!(max0(2, 0).eval(&v(-3, 7)), int(0));
        let trop: PLExpr<Q> = PLExpr::Max(vec![PLExpr::constant(2, int(0)), PLExpr::coordinate(2, 0), PLExpr::coordinate(2, 1)]);
        assert_eq!(trop.eval(&v(2, 5)), int(5));
        let s = PLExpr::Sum(vec![PLExpr::coordinate(2, 0), PLExpr::coordinate(2, 1)]).scaled(q(1, 2));
        assert_eq!(s.eval(&v(1, 1)), int(1));
        assert_eq!(s.eval_f64(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn linearity_complexes() {
        let (c, a) = max0(2, 0).linearity_complex(2).unwrap();
        assert_eq!(c.count_by_dim(), vec![0, 1, 2]);
        assert_eq!(a.len(), 2);
        let (c, _) = PLExpr::<Q>::coordinate(2, 1).linearity_complex(2).unwrap();
        assert_eq!(c.count_by_dim(), vec![0, 0, 1]);
        let trop: PLExpr<Q> = PLExpr::Max(vec![PLExpr::constant(2, int(0)), PLExpr::coordinate(2, 0), PLExpr::coordinate(2, 1)]);
        let (c, a) = trop.linearity_complex(2).unwrap();
        assert_eq!(c.count_by_dim(), vec![1, 3, 3]);
        for top in c.top_cells() {
            for v in top.vertices.iter().chain(std::iter::once(&top.interior_point)) {
                assert_eq!(a[&top.id].eval(v), trop.eval(v));
            }
        }
    }

    #[test]
    fn families() {
        let f = ConstructiveFamily::build(1, vec![max0(2, 0)]).unwrap();
        assert_eq!(f.complex.count_by_dim(), vec![0, 1, 2]);
        let f = ConstructiveFamily::build(1, vec![max0(2, 0), max0(2, 1)]).unwrap();
        assert_eq!(f.complex.count_by_dim(), vec![1, 4, 4]);
        let trop: PLExpr<Q> = PLExpr::Max(vec![PLExpr::constant(2, int(0)), PLExpr::coordinate(2, 0), PLExpr::coordinate(2, 1)]);
        let f = ConstructiveFamily::build(1, vec![trop, max0(2, 0)]).unwrap();
        // sign patterns of (argmax of 0,x,y ; sign of x): {0,-}, {y,-}, {y,+}, {x,+}
        assert_eq!(f.complex.count_by_dim()[2], 4);
        let diag: PLExpr<Q> = PLExpr::Max(vec![PLExpr::constant(2, int(0)), PLExpr::affine(vec![int(1), int(1)], int(0))]);
        let f = ConstructiveFamily::build(1, vec![max0(2, 0), diag]).unwrap();
        assert_eq!(f.complex.count_by_dim(), vec![1, 4, 4]);
    }

    #[test]
    fn extension_choices() {
        let f = ConstructiveFamily::build(1, vec![max0(2, 0)]).unwrap();
        let edge = f.complex.cells_of_dim(1).next().unwrap().id;
        let lo = f.restrict_extension(edge, 0, &ExtensionChoice::SmallestTop).unwrap();
        let hi = f.restrict_extension(edge, 0, &ExtensionChoice::LargestTop).unwrap();
        assert_ne!(lo, hi);
        let mut pair = [lo, hi];
        pair.sort();
        assert_eq!(pair[0], AffineFn::coordinate(2, 0).scale(&int(0)).add(&AffineFn::constant_fn(2, int(0))));
        assert_eq!(pair[1], AffineFn::coordinate(2, 0));
        let top = f.complex.top_cells().next().unwrap().id;
        assert_eq!(f.restrict_extension(top, 0, &ExtensionChoice::LargestTop).unwrap(), f.assignment[&top][0]);
        let bad = ExtensionChoice::Explicit([(edge, edge)].into_iter().collect());
        assert!(f.restrict_extension(edge, 0, &bad).is_err());
    }

    #[test]
    fn partials() {
        let p = PPHPolynomial::<Q>::new(Poly::var(0).pow(2), 2).unwrap();
        assert_eq!(p.partial(Some(&MultiIndex(vec![1, 0]))).unwrap().poly, Poly::var(0).scale(&int(2)));
        let p = PPHPolynomial::<Q>::new(Poly::var(0).pow(2).mul(&Poly::var(1)), 2).unwrap();
        assert_eq!(p.partial(Some(&MultiIndex(vec![1, 1]))).unwrap().poly, Poly::var(0).scale(&int(2)));
        let p = PPHPolynomial::<Q>::var(2, 0);
        assert!(p.partial(Some(&MultiIndex(vec![2, 0]))).unwrap().poly.is_zero());
        assert!(p.partial(None).unwrap().poly.is_zero());
        assert!(p.partial(Some(&MultiIndex(vec![1]))).is_err());
        assert_eq!(MultiIndex::all_of_degree(2, 2).len(), 3);
        assert_eq!(MultiIndex(vec![2, 1, 3]).factorial::<Q>(), int(12));
    }
}

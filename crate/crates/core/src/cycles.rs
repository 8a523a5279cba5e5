//! Chains of odd forms on the cells of a complex, the boundary operator,
//! P-cycle validation and PPH-cycle presentations.

use std::collections::BTreeMap;

use crate::complex::{Cell, Complex};
use crate::exterior::{max_complex_subspace, ConstForm, Form, PolyForm};
use crate::poly::Poly;
use crate::pph::{ConstructiveFamily, PPHPolynomial};
use crate::scalar::ExactField;
use crate::{Error, Result};

/// One summand `g · W` of a frame: `g` is a polynomial in the family's
/// functions, `W` a constant ambient form.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<S: ExactField> {
    pub coeff: Poly<S>,
    pub form: ConstForm<S>,
}

/// A form on a cell, relative to the cell's reference orientation.
pub type Frame<S> = Vec<Term<S>>;

/// `frames[cell]` is the frame on a `dim`-cell; forms have degree `degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<S: ExactField> {
    pub dim: usize,
    pub degree: usize,
    pub frames: BTreeMap<usize, Frame<S>>,
}

/// Where chains live: a complex, and optionally the family whose
/// functions are the variables of frame coefficients.
#[derive(Clone, Copy)]
pub struct Ctx<'a, S: ExactField> {
    pub complex: &'a Complex<S>,
    pub family: Option<&'a ConstructiveFamily<S>>,
}

impl<'a, S: ExactField> From<&'a ConstructiveFamily<S>> for Ctx<'a, S> {
    fn from(f: &'a ConstructiveFamily<S>) -> Self {
        Ctx { complex: &f.complex, family: Some(f) }
    }
}

impl<'a, S: ExactField> From<&'a Complex<S>> for Ctx<'a, S> {
    fn from(c: &'a Complex<S>) -> Self {
        Ctx { complex: c, family: None }
    }
}

/// Ambient coordinates as affine polynomials in the cell parameters
/// `t ↦ v_0 + Σ t_i b_i`.
pub fn cell_parametrisation<S: ExactField>(cell: &Cell<S>) -> Vec<Poly<S>> {
    let base = &cell.vertices[0];
    (0..base.len())
        .map(|j| {
            let grad: Vec<S> = cell.reference_orientation.iter().map(|b| b[j].clone()).collect();
            Poly::affine(&grad, base[j].clone())
        })
        .collect()
}

impl<'a, S: ExactField> Ctx<'a, S> {
    fn subs(&self, cell: usize) -> Vec<Poly<S>> {
        self.family.map(|f| f.substitution(cell)).unwrap_or_default()
    }

    /// The frame pulled back to the cell's parameters: a polynomial form of
    /// the frame's degree on `ℝ^{dim cell}`. Two frames agree as odd forms
    /// on the cell iff these agree.
    pub fn pullback(&self, cell: usize, frame: &Frame<S>, degree: usize) -> Result<PolyForm<S>> {
        let c = &self.complex.cells[cell];
        let k = c.dim;
        let param = cell_parametrisation(c);
        let subs: Vec<Poly<S>> = self.subs(cell).iter().map(|p| p.compose(&param)).collect();
        if degree > k {
            return Ok(Form::zero(k, k)?);
        }
        let mut out: PolyForm<S> = Form::zero(k, degree)?;
        for t in frame {
            if t.form.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: t.form.degree() });
            }
            if t.coeff.nvars() > subs.len() {
                return Err(Error::invalid(format!("coefficient uses {} family functions, only {} available", t.coeff.nvars(), subs.len())));
            }
            let g = t.coeff.compose(&subs);
            if g.is_zero() {
                continue;
            }
            let w = t.form.restrict(&c.reference_orientation).to_poly_form().map_coeffs(|a| a.mul(&g));
            out = out.add(&w)?;
        }
        Ok(out)
    }

    /// Nonzero pulled-back frames of a chain.
    pub fn canonical(&self, x: &Chain<S>) -> Result<BTreeMap<usize, PolyForm<S>>> {
        let mut out = BTreeMap::new();
        for (&cell, f) in &x.frames {
            if self.complex.cells[cell].dim != x.dim {
                return Err(Error::invalid(format!("cell {cell} does not have dimension {}", x.dim)));
            }
            let p = self.pullback(cell, f, x.degree)?;
            if !p.is_zero() {
                out.insert(cell, p);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, x: &Chain<S>) -> Result<bool> {
        Ok(self.canonical(x)?.is_empty())
    }

    /// Framewise equality after restriction to each cell.
    pub fn equal(&self, a: &Chain<S>, b: &Chain<S>) -> Result<bool> {
        if a.dim != b.dim || a.degree != b.degree {
            return Ok(self.is_zero(a)? && self.is_zero(b)?);
        }
        self.is_zero(&a.sub(b))
    }

    /// Drops frames that vanish on their cell.
    pub fn prune(&self, x: &Chain<S>) -> Result<Chain<S>> {
        let keep = self.canonical(x)?;
        Ok(Chain {
            dim: x.dim,
            degree: x.degree,
            frames: x.frames.iter().filter(|(c, _)| keep.contains_key(c)).map(|(c, f)| (*c, f.clone())).collect(),
        })
    }

    /// True iff the boundary vanishes on every cell not lying on the
    /// window boundary.
    pub fn is_cycle(&self, x: &Chain<S>) -> Result<bool> {
        if x.dim == 0 {
            return Ok(true);
        }
        let b = x.boundary(self.complex);
        Ok(self.canonical(&b)?.keys().all(|&c| self.complex.cells[c].on_window_boundary))
    }

    /// Checks the conditions of a P-cycle.
    pub fn validate_p_cycle(&self, x: &Chain<S>) -> Result<PCycleReport> {
        let mut report = PCycleReport::default();
        let ambient = self.complex.ambient;
        report.degree_ok = x.degree + x.dim == ambient && x.frames.values().flatten().all(|t| t.form.degree() == x.degree);
        if !report.degree_ok {
            report.witnesses.push(format!("forms must have degree {}", ambient - x.dim.min(ambient)));
        }
        report.constant_forms_ok = true;
        report.complex_directions_ok = true;
        for (&cell, f) in &x.frames {
            let c = &self.complex.cells[cell];
            let pulled = self.pullback(cell, f, x.degree)?;
            if pulled.is_zero() {
                continue;
            }
            for v in max_complex_subspace(&c.reference_orientation)? {
                if !pulled.contract(&c.coordinates(&v)).is_zero() {
                    report.complex_directions_ok = false;
                    report.witnesses.push(format!("cell {cell}: frame does not vanish on complex direction {}", fmt_vec(&v)));
                    break;
                }
            }
        }
        report.cycle_ok = self.is_cycle(x)?;
        if !report.cycle_ok {
            report.witnesses.push("boundary is nonzero on an interior cell".into());
        }
        Ok(report)
    }
}

fn fmt_vec<S: ExactField>(v: &[S]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PCycleReport {
    pub degree_ok: bool,
    pub constant_forms_ok: bool,
    pub complex_directions_ok: bool,
    pub cycle_ok: bool,
    pub witnesses: Vec<String>,
}

impl PCycleReport {
    pub fn passed(&self) -> bool {
        self.degree_ok && self.constant_forms_ok && self.complex_directions_ok && self.cycle_ok
    }
}

impl<S: ExactField> Chain<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Chain { dim, degree, frames: BTreeMap::new() }
    }

    pub fn add_term(&mut self, cell: usize, coeff: Poly<S>, form: ConstForm<S>) {
        if coeff.is_zero() || form.is_zero() {
            return;
        }
        self.frames.entry(cell).or_default().push(Term { coeff, form });
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&c, f) in &o.frames {
            for t in f {
                r.add_term(c, t.coeff.clone(), t.form.clone());
            }
        }
        r
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map_terms(|t| Term { coeff: t.coeff.scale(s), form: t.form.clone() })
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Multiplies every coefficient by a polynomial in the family's functions.
    pub fn poly_multiply(&self, p: &Poly<S>) -> Self {
        self.map_terms(|t| Term { coeff: t.coeff.mul(p), form: t.form.clone() })
    }

    fn map_terms(&self, f: impl Fn(&Term<S>) -> Term<S>) -> Self {
        let mut r = Chain::zero(self.dim, self.degree);
        for (&c, fr) in &self.frames {
            for t in fr {
                let t = f(t);
                r.add_term(c, t.coeff, t.form);
            }
        }
        r
    }

    pub fn num_terms(&self) -> usize {
        self.frames.values().map(|f| f.len()).sum()
    }

    /// `(∂X)_Λ = Σ_{Δ ⊃ Λ} ε(Δ, Λ) X_Δ`, with ε the induced-orientation sign;
    /// the restriction to Λ happens on comparison.
    pub fn boundary(&self, complex: &Complex<S>) -> Self {
        let mut r = Chain::zero(self.dim.saturating_sub(1), self.degree);
        if self.dim == 0 {
            return r;
        }
        for (&c, fr) in &self.frames {
            for &(f, s) in &complex.cells[c].facets {
                let s = S::from_int(s as i64);
                for t in fr {
                    r.add_term(f, t.coeff.scale(&s), t.form.clone());
                }
            }
        }
        r
    }
}

/// The top-dimensional cycle with frame `P(h_1,…,h_q)` on every top cell.
pub fn fundamental_cycle<S: ExactField>(fam: &ConstructiveFamily<S>, p: &PPHPolynomial<S>) -> Chain<S> {
    let d = fam.dim();
    let mut x = Chain::zero(d, 0);
    for c in fam.complex.top_cells() {
        x.add_term(c.id, p.poly.clone(), Form::scalar(d, S::one()));
    }
    x
}

/// Whether the cell satisfies `codim_ℂ ℂ_Δ = codim T_Δ`.
pub fn nondegenerate<S: ExactField>(cell: &Cell<S>, n: usize) -> Result<bool> {
    let complex_dim = max_complex_subspace(&cell.reference_orientation)?.len() / 2;
    Ok(n - complex_dim == 2 * n - cell.dim)
}

/// `Σ_i P^i · X_i` with degree-0 cycles `X_i`.
#[derive(Clone, Debug)]
pub struct PPHCycle<S: ExactField> {
    pub parts: Vec<(PPHPolynomial<S>, Chain<S>)>,
}

impl<S: ExactField> PPHCycle<S> {
    pub fn new(p: PPHPolynomial<S>, x: Chain<S>) -> Result<Self> {
        if x.frames.values().flatten().any(|t| t.coeff.as_constant().is_none()) {
            return Err(Error::invalid("PPH-cycle parts must carry constant coefficients"));
        }
        Ok(PPHCycle { parts: vec![(p, x)] })
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().map(|(p, _)| p.degree).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend(o.parts.iter().cloned());
        PPHCycle { parts }
    }

    pub fn scale(&self, s: &S) -> Self {
        PPHCycle { parts: self.parts.iter().map(|(p, x)| (PPHPolynomial { poly: p.poly.scale(s), ..p.clone() }, x.clone())).collect() }
    }

    pub fn poly_multiply(&self, q: &PPHPolynomial<S>) -> Self {
        PPHCycle {
            parts: self
                .parts
                .iter()
                .map(|(p, x)| (PPHPolynomial { poly: p.poly.mul(&q.poly), nvars: p.nvars, degree: p.degree + q.degree }, x.clone()))
                .collect(),
        }
    }

    /// The chain `Σ P^i X_i`.
    pub fn to_chain(&self) -> Option<Chain<S>> {
        let mut it = self.parts.iter();
        let (p, x) = it.next()?;
        let mut acc = x.poly_multiply(&p.poly);
        for (p, x) in it {
            acc = acc.add(&x.poly_multiply(&p.poly));
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::Polyhedron;
    use crate::pph::PLExpr;
    use crate::scalar::int;
    use crate::Q;

    fn one(dim: usize) -> ConstForm<Q> {
        Form::scalar(dim, int(1))
    }

    #[test]
    fn square_boundary() {
        let sq = Complex::build(2, vec![Polyhedron::cube(2, &int(1))]).unwrap();
        let ctx = Ctx::from(&sq);
        let top = sq.top_cells().next().unwrap().id;
        let mut x = Chain::zero(2, 0);
        x.add_term(top, Poly::one(), one(2));
        let b = x.boundary(&sq);
        assert_eq!(b.frames.len(), 4);
        assert!(ctx.is_zero(&b.boundary(&sq)).unwrap());
        assert!(!ctx.is_cycle(&x).unwrap());
        assert!(ctx.is_cycle(&Chain::zero(2, 0)).unwrap());
    }

    fn max0(dim: usize, i: usize) -> PLExpr<Q> {
        PLExpr::Max(vec![PLExpr::constant(dim, int(0)), PLExpr::coordinate(dim, i)])
    }

    #[test]
    fn fundamental_cycles_are_cycles() {
        let fam = ConstructiveFamily::build(1, vec![max0(2, 0), max0(2, 1)]).unwrap();
        let ctx = Ctx::from(&fam);
        for p in [Poly::one(), Poly::var(0), Poly::var(0).mul(&Poly::var(1)).add(&Poly::var(1).pow(2))] {
            let x = fundamental_cycle(&fam, &PPHPolynomial::new(p, 2).unwrap());
            assert!(ctx.is_cycle(&x).unwrap());
            assert!(ctx.validate_p_cycle(&x).unwrap().passed());
        }
        // P = x_1 on max(0, x): frames 0 and x
        let fam = ConstructiveFamily::build(1, vec![max0(2, 0)]).unwrap();
        let ctx = Ctx::from(&fam);
        let x = fundamental_cycle(&fam, &PPHPolynomial::var(1, 0));
        assert_eq!(ctx.canonical(&x).unwrap().len(), 1);
    }

    #[test]
    fn complex_direction_condition() {
        // a 3-cell in ℂ² containing the complex line of z_2, carrying dx_2
        let c = Complex::<Q>::build(4, vec![Polyhedron::whole_space(4)]).unwrap();
        let hyper = Polyhedron::<Q>::new(4, vec![crate::polyhedron::Halfspace::new(vec![int(1), int(0), int(0), int(0)], int(0))]);
        let half = Complex::build(4, vec![hyper.clone(), Polyhedron::new(4, vec![hyper.halfspaces[0].flipped()])]).unwrap();
        let wall = half.cells_of_dim(3).next().unwrap().id;
        let ctx = Ctx::from(&half);
        let mut x = Chain::zero(3, 1);
        x.add_term(wall, Poly::one(), Form::basis(4, &[2]).unwrap());
        let r = ctx.validate_p_cycle(&x).unwrap();
        assert!(!r.complex_directions_ok);
        let mut y = Chain::zero(3, 1);
        y.add_term(wall, Poly::one(), Form::basis(4, &[1]).unwrap());
        assert!(ctx.validate_p_cycle(&y).unwrap().complex_directions_ok);
        assert!(nondegenerate(c.top_cells().next().unwrap(), 2).unwrap());
        assert!(nondegenerate(half.cell(wall), 2).unwrap());
    }

    #[test]
    fn nondegenerate_planes() {
        let eq = |i: usize| {
            let mut a: Vec<Q> = vec![int(0); 4];
            a[i] = int(1);
            crate::polyhedron::Halfspace::new(a, int(0))
        };
        // both cells are faces of the four quadrants spanned by two hyperplanes
        let quads = |i: usize, j: usize| {
            let mut v = Vec::new();
            for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let a = if s > 0 { eq(i) } else { eq(i).flipped() };
                let b = if t > 0 { eq(j) } else { eq(j).flipped() };
                v.push(Polyhedron::new(4, vec![a, b]));
            }
            Complex::build(4, v).unwrap()
        };
        let c = quads(0, 2);
        let plane = c.cells_of_dim(2).next().unwrap();
        assert!(nondegenerate(plane, 2).unwrap());
        let c = quads(2, 3);
        let line = c.cells_of_dim(2).next().unwrap();
        assert!(!nondegenerate(line, 2).unwrap());
    }

    #[test]
    fn pph_cycle_degrees() {
        let fam = ConstructiveFamily::build(1, vec![max0(2, 0)]).unwrap();
        let x = fundamental_cycle(&fam, &PPHPolynomial::new(Poly::one(), 1).unwrap());
        let c = PPHCycle::new(PPHPolynomial::var(1, 0), x).unwrap();
        assert_eq!(c.degree(), 1);
        let sq = c.poly_multiply(&PPHPolynomial::var(1, 0));
        assert_eq!(sq.degree(), 2);
        let ctx = Ctx::from(&fam);
        let lhs = c.add(&c).to_chain().unwrap();
        let rhs = c.scale(&int(2)).to_chain().unwrap();
        assert!(ctx.equal(&lhs, &rhs).unwrap());
    }
}

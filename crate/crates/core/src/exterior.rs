//! Exterior algebra of ℝ²ⁿ with the standard complex structure.
//!
//! Coordinates are ordered `(x_1, y_1, …, x_n, y_n)`, so index `2j` is `x_{j+1}`
//! and `2j + 1` is `y_{j+1}`. The complex structure is `J e_{x_j} = e_{y_j}`,
//! `J e_{y_j} = -e_{x_j}` and `d^c g = dg ∘ J` with no normalising constant.
//!
//! A [`Form`] is generic over its coefficient ring: constant forms use the
//! scalar field itself ([`ConstForm`]), test forms and pulled-back frames use
//! polynomials ([`PolyForm`]). Basis monomials are keyed by bitmasks of the
//! (strictly increasing) index subsets.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Poly;
use crate::scalar::Field;

/// Coefficient ring of a form, as a module over the scalars `S`.
pub trait Coeff: Clone + PartialEq + Debug {
    type Scalar: Field;
    fn c_zero() -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_add(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_scale(&self, s: &Self::Scalar) -> Self;
}

impl<S: Field + PartialEq> Coeff for S {
    type Scalar = S;
    fn c_zero() -> Self {
        S::zero()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self.clone() + o.clone()
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.clone() * o.clone()
    }
    fn c_scale(&self, s: &S) -> Self {
        self.clone() * s.clone()
    }
}

impl<S: crate::scalar::ExactField> Coeff for Poly<S> {
    type Scalar = S;
    fn c_zero() -> Self {
        Poly::zero()
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn c_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn c_scale(&self, s: &S) -> Self {
        self.scale(s)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Form<C> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u32, C>,
}

pub type ConstForm<S> = Form<S>;
pub type PolyForm<S> = Form<Poly<S>>;
/// A degree-one constant form.
pub type Covector<S> = Form<S>;

/// Sign of the permutation sorting the concatenation of two disjoint sorted
/// index sets.
fn merge_sign(a: u32, b: u32) -> i32 {
    let mut inversions = 0;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|m| m.count_ones() as usize == k).collect()
}

impl<C> Form<C> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, C> {
        &self.coeffs
    }
}

impl<C> Form<C> {
    pub fn zero(dim: usize, degree: usize) -> Result<Self>
    where
        C: Coeff,
    {
        if degree > dim {
            return Err(Error::invalid(format!("form degree {degree} exceeds dimension {dim}")));
        }
        if dim > 31 {
            return Err(Error::invalid("dimension too large for bitmask forms"));
        }
        Ok(Form { dim, degree, coeffs: BTreeMap::new() })
    }

    /// The 0-form with value `c`.
    pub fn scalar(dim: usize, c: C) -> Self
    where
        C: Coeff,
    {
        let mut f = Form { dim, degree: 0, coeffs: BTreeMap::new() };
        f.add_coeff(0, c);
        f
    }

    /// Build from `(index set, coefficient)` pairs; index sets must be strictly
    /// increasing and of size `degree`.
    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, C)>) -> Result<Self>
    where
        C: Coeff,
    {
        let mut f = Self::zero(dim, degree)?;
        for (idx, c) in terms {
            if idx.len() != degree || idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= dim) {
                return Err(Error::invalid(format!("bad index set {idx:?} for a {degree}-form on R^{dim}")));
            }
            f.add_coeff(idx.iter().fold(0u32, |m, &i| m | (1 << i)), c);
        }
        Ok(f)
    }

    pub fn add_coeff(&mut self, mask: u32, c: C)
    where
        C: Coeff,
    {
        if c.c_is_zero() {
            return;
        }
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        let v = match self.coeffs.get(&mask) {
            Some(old) => old.c_add(&c),
            None => c,
        };
        if v.c_is_zero() {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, v);
        }
    }

    pub fn coeff(&self, idx: &[usize]) -> C
    where
        C: Coeff,
    {
        let mask = idx.iter().fold(0u32, |m, &i| m | (1 << i));
        self.coeffs.get(&mask).cloned().unwrap_or_else(C::c_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self>
    where
        C: Coeff,
    {
        if self.dim != o.dim || self.degree != o.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: o.degree });
        }
        let mut r = self.clone();
        for (m, c) in &o.coeffs {
            r.add_coeff(*m, c.clone());
        }
        Ok(r)
    }

    pub fn scale(&self, s: &C::Scalar) -> Self
    where
        C: Coeff,
    {
        let mut r = Form { dim: self.dim, degree: self.degree, coeffs: BTreeMap::new() };
        for (m, c) in &self.coeffs {
            r.add_coeff(*m, c.c_scale(s));
        }
        r
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut r = Form { dim: self.dim, degree: self.degree, coeffs: BTreeMap::new() };
        for (m, c) in &self.coeffs {
            r.add_coeff(*m, f(c));
        }
        r
    }

    /// Exterior product.
    pub fn wedge(&self, o: &Self) -> Result<Self>
    where
        C: Coeff,
    {
        if self.dim != o.dim {
            return Err(Error::invalid("wedge of forms on different spaces"));
        }
        let degree = self.degree + o.degree;
        if degree > self.dim {
            return Err(Error::DegreeMismatch { expected: self.dim, found: degree });
        }
        let mut r = Form { dim: self.dim, degree, coeffs: BTreeMap::new() };
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &o.coeffs {
                if ma & mb != 0 {
                    continue;
                }
                let c = ca.c_mul(cb);
                let c = if merge_sign(*ma, *mb) < 0 { c.c_scale(&-C::Scalar::one()) } else { c };
                r.add_coeff(ma | mb, c);
            }
        }
        Ok(r)
    }

    /// Evaluate on `degree` vectors.
    pub fn evaluate(&self, vectors: &[Vec<C::Scalar>]) -> Result<C>
    where
        C: Coeff,
    {
        if vectors.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: vectors.len() });
        }
        if vectors.iter().any(|v| v.len() != self.dim) {
            return Err(Error::invalid("vector length does not match the ambient dimension"));
        }
        let mut acc = C::c_zero();
        for (m, c) in &self.coeffs {
            let idx = mask_indices(*m);
            let minor: Vec<Vec<C::Scalar>> = vectors.iter().map(|v| idx.iter().map(|&i| v[i].clone()).collect()).collect();
            let d = linalg::det(&minor);
            if !d.is_zero() {
                acc = acc.c_add(&c.c_scale(&d));
            }
        }
        Ok(acc)
    }

    /// Interior product `ι_v ω`.
    pub fn contract(&self, v: &[C::Scalar]) -> Self
    where
        C: Coeff,
    {
        let degree = self.degree.saturating_sub(1);
        let mut r = Form { dim: self.dim, degree, coeffs: BTreeMap::new() };
        if self.degree == 0 {
            return r;
        }
        for (m, c) in &self.coeffs {
            for (pos, i) in mask_indices(*m).into_iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let s = if pos % 2 == 0 { v[i].clone() } else { -v[i].clone() };
                r.add_coeff(m & !(1 << i), c.c_scale(&s));
            }
        }
        r
    }

    /// Pull back along the linear map `ℝ^m → ℝ^dim`, `t ↦ Σ t_i basis_i`.
    pub fn restrict(&self, basis: &[Vec<C::Scalar>]) -> Form<C>
    where
        C: Coeff,
    {
        let m = basis.len();
        let mut r = Form { dim: m, degree: self.degree, coeffs: BTreeMap::new() };
        if self.degree > m {
            return r;
        }
        for mask in subsets_of_size(m, self.degree) {
            let vecs: Vec<Vec<C::Scalar>> = mask_indices(mask).into_iter().map(|i| basis[i].clone()).collect();
            let c = self.evaluate(&vecs).expect("arity matches");
            r.add_coeff(mask, c);
        }
        r
    }
}

impl<S: Field + PartialEq> Form<S> {
    /// The 1-form `Σ c_i dx_i`.
    pub fn covector(components: &[S]) -> Self {
        let mut f = Form { dim: components.len(), degree: 1, coeffs: BTreeMap::new() };
        for (i, c) in components.iter().enumerate() {
            f.add_coeff(1 << i, c.clone());
        }
        f
    }

    /// `dx_{i_1} ∧ … ∧ dx_{i_k}` in the given (not necessarily sorted) order.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut f = Self::scalar(dim, S::one());
        for &i in indices {
            if i >= dim {
                return Err(Error::invalid(format!("index {i} out of range")));
            }
            let mut e = vec![S::zero(); dim];
            e[i] = S::one();
            f = f.wedge(&Self::covector(&e))?;
        }
        Ok(f)
    }

    pub fn components(&self) -> Vec<S> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|i| self.coeffs.get(&(1 << i)).cloned().unwrap_or_else(S::zero)).collect()
    }

}

impl<S: crate::scalar::ExactField> Form<S> {
    pub fn to_poly_form(&self) -> PolyForm<S> {
        self.map_coeffs(|c| Poly::constant(c.clone()))
    }
}

/// The complex structure `J` on `ℝ²ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexStructure {
    pub n: usize,
}

impl ComplexStructure {
    pub fn new(n: usize) -> Self {
        ComplexStructure { n }
    }

    pub fn apply<S: Field>(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); 2 * self.n];
        for j in 0..self.n {
            out[2 * j] = -v[2 * j + 1].clone();
            out[2 * j + 1] = v[2 * j].clone();
        }
        out
    }
}

/// `d^c` of the affine function with the given gradient (the constant is
/// irrelevant): the covector `ξ ↦ ⟨grad, Jξ⟩`.
pub fn dc_affine<S: Field>(gradient: &[S]) -> Covector<S> {
    let n = gradient.len() / 2;
    let mut c = vec![S::zero(); 2 * n];
    for j in 0..n {
        c[2 * j] = gradient[2 * j + 1].clone();
        c[2 * j + 1] = -gradient[2 * j].clone();
    }
    Form::covector(&c)
}

/// `d^c` of a polynomial-coefficient form, coefficientwise:
/// `d^c(Σ ω_S dx_S) = Σ d^c(ω_S) ∧ dx_S`.
pub fn dc_poly_form<S: crate::scalar::ExactField>(w: &PolyForm<S>) -> Result<PolyForm<S>> {
    let dim = w.dim;
    let mut out = Form::zero(dim, w.degree + 1)?;
    for (m, c) in &w.coeffs {
        let mut grad_dc = Form::zero(dim, 1)?;
        for a in 0..dim {
            let da = c.deriv(a);
            if da.is_zero() {
                continue;
            }
            let mut e = vec![S::zero(); dim];
            e[a] = S::one();
            let dcx = dc_affine(&e).map_coeffs(|s: &S| Poly::constant(s.clone()));
            grad_dc = grad_dc.add(&dcx.map_coeffs(|p: &Poly<S>| p.mul(&da)))?;
        }
        let dxs = Form::basis(dim, &mask_indices(*m))?.to_poly_form();
        out = out.add(&grad_dc.wedge(&dxs)?)?;
    }
    Ok(out)
}

/// Exterior derivative of a polynomial-coefficient form.
pub fn d_poly_form<S: crate::scalar::ExactField>(w: &PolyForm<S>) -> Result<PolyForm<S>> {
    let dim = w.dim;
    let mut out = Form::zero(dim, w.degree + 1)?;
    if w.degree == dim {
        return Ok(out);
    }
    for (m, c) in &w.coeffs {
        for a in 0..dim {
            if m & (1 << a) != 0 {
                continue;
            }
            let da = c.deriv(a);
            if da.is_zero() {
                continue;
            }
            let sign = merge_sign(1 << a, *m);
            let da = if sign < 0 { da.neg() } else { da };
            out.add_coeff(m | (1 << a), da);
        }
    }
    Ok(out)
}

/// Basis of the maximal complex subspace `V ∩ JV` (in RREF).
pub fn max_complex_subspace<S: Field + PartialEq>(v: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    let dim = v[0].len();
    if dim % 2 != 0 {
        return Err(Error::invalid("ambient dimension must be even"));
    }
    if linalg::rank(v) != v.len() {
        return Err(Error::invalid("subspace basis is linearly dependent"));
    }
    let j = ComplexStructure::new(dim / 2);
    let jv: Vec<Vec<S>> = v.iter().map(|x| j.apply(x)).collect();
    let m = v.len();
    // columns (v_1..v_m, -Jv_1..-Jv_m); null vectors give V ∩ JV
    let rows: Vec<Vec<S>> = (0..dim)
        .map(|r| {
            let mut row: Vec<S> = v.iter().map(|x| x[r].clone()).collect();
            row.extend(jv.iter().map(|x| -x[r].clone()));
            row
        })
        .collect();
    let ns = linalg::nullspace(&rows, 2 * m);
    let vecs: Vec<Vec<S>> = ns
        .iter()
        .map(|c| {
            let mut out = vec![S::zero(); dim];
            for (ci, x) in c[..m].iter().zip(v) {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = o.clone() + ci.clone() * xi.clone();
                }
            }
            out
        })
        .collect();
    Ok(linalg::rref(&vecs).0)
}

/// Whether `w` vanishes on every tuple from `span(V)` containing a vector of
/// `V ∩ JV`.
pub fn vanishes_on_complex_directions<S: Field + PartialEq>(w: &ConstForm<S>, v: &[Vec<S>]) -> Result<bool> {
    let cx = max_complex_subspace(v)?;
    Ok(cx.iter().all(|c| w.contract(c).restrict(v).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    fn e(dim: usize, i: usize) -> Vec<Q> {
        let mut v = vec![int(0); dim];
        v[i] = int(1);
        v
    }

    fn dx(dim: usize, i: usize) -> ConstForm<Q> {
        Form::covector(&e(dim, i))
    }

    #[test]
    fn wedge_examples() {
        let w = dx(2, 0).wedge(&dx(2, 1)).unwrap();
        assert_eq!(w.coeff(&[0, 1]), int::<Q>(1));
        let a = dx(4, 0).wedge(&dx(4, 2)).unwrap();
        let b = dx(4, 2).wedge(&dx(4, 0)).unwrap();
        assert_eq!(a, b.scale(&int(-1)));
        let p = dx(4, 0).wedge(&dx(4, 1)).unwrap();
        let q = dx(4, 0).wedge(&dx(4, 3)).unwrap();
        assert!(p.wedge(&q).unwrap().is_zero());
        assert!(matches!(p.wedge(&p).unwrap().wedge(&dx(4, 0)), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn dc_examples() {
        // d^c x1 = -dy1, d^c y1 = dx1
        assert_eq!(dc_affine(&e(2, 0)), dx(2, 1).scale(&int(-1)));
        assert_eq!(dc_affine(&e(2, 1)), dx(2, 0));
        // 2 x1 + 3 y2 -> -2 dy1 + 3 dx2
        let g: Vec<Q> = vec![int(2), int(0), int(0), int(3)];
        let want = dx(4, 1).scale(&int(-2)).add(&dx(4, 2).scale(&int(3))).unwrap();
        assert_eq!(dc_affine(&g), want);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(dx(2, 0).evaluate(&[e(2, 0)]).unwrap(), int::<Q>(1));
        let w = dx(2, 0).wedge(&dx(2, 1)).unwrap();
        assert_eq!(w.evaluate(&[e(2, 0), e(2, 1)]).unwrap(), int::<Q>(1));
        assert_eq!(w.evaluate(&[e(2, 1), e(2, 0)]).unwrap(), int::<Q>(-1));
        assert!(w.evaluate(&[e(2, 0)]).is_err());
    }

    #[test]
    fn j_squares_to_minus_one() {
        let j = ComplexStructure::new(2);
        for i in 0..4 {
            let v = e(4, i);
            let jj = j.apply(&j.apply(&v));
            assert_eq!(jj, v.iter().map(|x| -x.clone()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn complex_subspace_examples() {
        assert!(max_complex_subspace(&[e(2, 0)]).unwrap().is_empty());
        let plane = vec![e(4, 0), e(4, 1)];
        assert_eq!(max_complex_subspace(&plane).unwrap(), plane);
        let three = vec![e(4, 0), e(4, 1), e(4, 2)];
        assert_eq!(max_complex_subspace(&three).unwrap(), plane);
        assert!(max_complex_subspace(&[e(4, 0), e(4, 0)]).is_err());
    }

    #[test]
    fn vanishing_examples() {
        let full = vec![e(2, 0), e(2, 1)];
        assert!(!vanishes_on_complex_directions(&dx(2, 0), &full).unwrap());
        assert!(vanishes_on_complex_directions(&dx(2, 1), &[e(2, 1)]).unwrap());
        let w = dx(4, 1).wedge(&dx(4, 3)).unwrap();
        assert!(vanishes_on_complex_directions(&w, &[e(4, 1), e(4, 3)]).unwrap());
    }

    #[test]
    fn d_and_dc_of_functions() {
        // dd^c of x^2 (one complex variable) is -2 dx^dy
        let x2: PolyForm<Q> = Form::scalar(2, Poly::var(0).mul(&Poly::var(0)));
        let ddc = d_poly_form(&dc_poly_form(&x2).unwrap()).unwrap();
        assert_eq!(ddc.coeff(&[0, 1]), Poly::constant(int(-2)));
        // d∘d = 0
        let f: PolyForm<Q> = Form::scalar(4, Poly::var(0).mul(&Poly::var(3)).mul(&Poly::var(1)));
        assert!(d_poly_form(&d_poly_form(&f).unwrap()).unwrap().is_zero());
        // dd^c = -d^c d
        let lhs = d_poly_form(&dc_poly_form(&f).unwrap()).unwrap();
        let rhs = dc_poly_form(&d_poly_form(&f).unwrap()).unwrap();
        assert!(lhs.add(&rhs).unwrap().is_zero());
    }
}

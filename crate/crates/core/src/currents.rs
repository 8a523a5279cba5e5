//! Chains as currents: exact pairing with polynomial test forms on a
//! window, the closedness and integration-by-parts checks, and `ι`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::complex::{Complex, Simplex, Window};
use crate::corner::{dc, mixed_corner_locus};
use crate::cycles::{fundamental_cycle, Chain, Ctx, PPHCycle};
use crate::exterior::{d_poly_form, dc_poly_form, Form, PolyForm};
use crate::linalg;
use crate::poly::Poly;
use crate::pph::{ExtensionChoice, MultiIndex, PPHPolynomial};
use crate::scalar::ExactField;
use crate::{Error, Result};

/// `Π_a (R² − x_a²)` over all `dim` real coordinates.
pub fn window_bump<S: ExactField>(dim: usize, r: &S) -> Poly<S> {
    let r2 = Poly::constant(r.clone() * r.clone());
    (0..dim).fold(Poly::one(), |acc, a| acc.mul(&r2.sub(&Poly::var(a).pow(2))))
}

/// A polynomial form `B^b · ω` on `ℝ^dim`, where `B` is the window bump.
#[derive(Clone, Debug, PartialEq)]
pub struct TestForm<S: ExactField> {
    pub omega: PolyForm<S>,
    pub boundary_order: u32,
    pub radius: S,
}

impl<S: ExactField> TestForm<S> {
    pub fn new(omega: PolyForm<S>, boundary_order: u32, radius: S) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::invalid("window radius must be positive"));
        }
        Ok(TestForm { omega, boundary_order, radius })
    }

    /// The 0-form `B^b`.
    pub fn bump(dim: usize, boundary_order: u32, radius: S) -> Result<Self> {
        Self::new(Form::scalar(dim, Poly::one()), boundary_order, radius)
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn degree(&self) -> usize {
        self.omega.degree()
    }

    pub fn window(&self) -> Window<S> {
        Window { r: self.radius.clone() }
    }

    /// The form with the bump multiplied out.
    pub fn full(&self) -> PolyForm<S> {
        let b = window_bump(self.dim(), &self.radius).pow(self.boundary_order);
        self.omega.map_coeffs(|c| c.mul(&b))
    }

    /// `D(B^b ω) = B^{b−1}(b·DB ∧ ω + B·Dω)` for a derivation-like `D`.
    fn apply(&self, op: fn(&PolyForm<S>) -> Result<PolyForm<S>>) -> Result<Self> {
        if self.boundary_order == 0 {
            return Ok(TestForm { omega: op(&self.omega)?, ..self.clone() });
        }
        let bump = window_bump(self.dim(), &self.radius);
        let db = op(&Form::scalar(self.dim(), bump.clone()))?;
        let b = S::from_u32(self.boundary_order).expect("small integer");
        let first = db.wedge(&self.omega)?.scale(&b);
        let second = op(&self.omega)?.map_coeffs(|c| c.mul(&bump));
        Ok(TestForm { omega: first.add(&second)?, boundary_order: self.boundary_order - 1, radius: self.radius.clone() })
    }

    pub fn d(&self) -> Result<Self> {
        self.apply(d_poly_form)
    }

    pub fn dc(&self) -> Result<Self> {
        self.apply(dc_poly_form)
    }

    pub fn ddc(&self) -> Result<Self> {
        self.dc()?.d()
    }
}

/// A pairing value: exact, or a float with an error estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum PairingValue<S> {
    Exact(S),
    Approx { value: f64, error: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairingResult<S> {
    pub value: PairingValue<S>,
    pub provenance: String,
}

/// `∫ x(t)^α dt` over the standard simplex, where
/// `x(t) = v_0 + Σ t_i (v_i − v_0)`. For a full-dimensional simplex the
/// Lebesgue integral is this times `|det(v_i − v_0)|`.
pub fn integrate_monomial_over_simplex<S: ExactField>(alpha: &[u32], vertices: &[Vec<S>]) -> Result<S> {
    integrate_poly_over_simplex(&Poly::monomial(alpha.to_vec(), S::one()), vertices)
}

/// Same as [`integrate_monomial_over_simplex`] for a polynomial, via
/// `∫_std x^α = α!/(|α|+k)! · [z^α] Π_j 1/(1 − ⟨v_j, z⟩)`.
pub fn integrate_poly_over_simplex<S: ExactField>(f: &Poly<S>, vertices: &[Vec<S>]) -> Result<S> {
    let Some(v0) = vertices.first() else {
        return Err(Error::invalid("simplex has no vertices"));
    };
    let d = v0.len();
    let k = vertices.len() - 1;
    let edges: Vec<Vec<S>> = vertices[1..].iter().map(|v| linalg::sub(v, v0)).collect();
    if linalg::rank(&edges) != k {
        return Err(Error::invalid("degenerate simplex"));
    }
    if f.nvars() > d {
        return Err(Error::invalid("polynomial has more variables than the simplex's ambient space"));
    }
    if f.is_zero() {
        return Ok(S::zero());
    }
    // Coefficients of Π_j 1/(1 − ⟨w_j, z⟩) for the integer vertices
    // w_j = L·v_j, on exponents bounded by the support's maxima and total
    // degree, stored densely in mixed radix.
    let lcm = vertices.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(&x.to_big().1));
    let scaled: Vec<Vec<BigInt>> = vertices
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| {
                    let (p, q) = x.to_big();
                    p * (&lcm / q)
                })
                .collect()
        })
        .collect();
    let mut caps = vec![0usize; d];
    let mut max_deg = 0usize;
    for (e, _) in f.terms() {
        for (i, &a) in e.iter().enumerate() {
            caps[i] = caps[i].max(a as usize);
        }
        max_deg = max_deg.max(e.iter().sum::<u32>() as usize);
    }
    let mut strides = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * (caps[i + 1] + 1);
    }
    let size = if d == 0 { 1 } else { strides[0] * (caps[0] + 1) };
    let mut h = vec![BigInt::zero(); size];
    h[0] = BigInt::one();
    let mut digits = vec![0usize; d];
    for w in &scaled {
        digits.iter_mut().for_each(|x| *x = 0);
        let mut deg = 0usize;
        for idx in 1..size {
            for i in (0..d).rev() {
                if digits[i] < caps[i] {
                    digits[i] += 1;
                    deg += 1;
                    break;
                }
                deg -= digits[i];
                digits[i] = 0;
            }
            if deg > max_deg {
                continue;
            }
            for i in 0..d {
                if digits[i] > 0 && !w[i].is_zero() {
                    let add = &w[i] * &h[idx - strides[i]];
                    h[idx] += add;
                }
            }
        }
    }
    let mut total = S::zero();
    for (e, c) in f.terms() {
        let idx: usize = e.iter().zip(&strides).map(|(&a, s)| a as usize * s).sum();
        let deg: u32 = e.iter().sum();
        let num = e.iter().fold(h[idx].clone(), |acc, &a| acc * big_factorial(a));
        let den = big_factorial(deg + k as u32) * num_traits::pow(lcm.clone(), deg as usize);
        total = total + c.clone() * S::from_big(num, den);
    }
    Ok(total)
}

fn big_factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// A chain context together with its clipping to a window and the
/// triangulations of the clipped cells.
pub struct Windowed<'a, S: ExactField> {
    pub ctx: Ctx<'a, S>,
    pub window: Window<S>,
    pub clipped: Complex<S>,
    simplices: Vec<Vec<Simplex<S>>>,
}

impl<'a, S: ExactField> Windowed<'a, S> {
    pub fn new(ctx: impl Into<Ctx<'a, S>>, window: Window<S>) -> Result<Self> {
        let ctx = ctx.into();
        let clipped = ctx.complex.clip_to_window(&window)?;
        let simplices = (0..clipped.cells.len()).map(|i| clipped.triangulate_cell(i)).collect::<Result<Vec<_>>>()?;
        Ok(Windowed { ctx, window, clipped, simplices })
    }

    /// Frame of `x` on an original cell as an ambient polynomial form.
    fn ambient_frame(&self, x: &Chain<S>, cell: usize) -> Result<Option<PolyForm<S>>> {
        let Some(frame) = x.frames.get(&cell) else {
            return Ok(None);
        };
        let d = self.ctx.complex.ambient;
        let subs = self.ctx.family.map(|f| f.substitution(cell));
        let mut acc = Form::zero(d, x.degree)?;
        for t in frame {
            let g = match &subs {
                Some(s) => t.coeff.compose(s),
                None => Poly::constant(
                    t.coeff.as_constant().ok_or_else(|| Error::invalid("frame coefficients need a family to evaluate"))?,
                ),
            };
            acc = acc.add(&t.form.to_poly_form().map_coeffs(|c| c.mul(&g)))?;
        }
        Ok(Some(acc))
    }

    /// `Σ_Δ ∫_Δ X_Δ ∧ φ` over the window.
    pub fn pair(&self, x: &Chain<S>, phi: &TestForm<S>) -> Result<S> {
        let d = self.ctx.complex.ambient;
        if phi.dim() != d {
            return Err(Error::invalid(format!("test form lives on ℝ^{}, complex on ℝ^{d}", phi.dim())));
        }
        if x.degree + phi.degree() != x.dim {
            return Err(Error::DegreeMismatch { expected: x.dim - x.degree.min(x.dim), found: phi.degree() });
        }
        if phi.radius != self.window.r {
            return Err(Error::invalid("test form and window have different radii"));
        }
        let full = phi.full();
        let mut total = S::zero();
        for c in self.clipped.cells_of_dim(x.dim) {
            let Some(&origin) = c.origin.first() else { continue };
            if self.ctx.complex.cells[origin].dim != x.dim {
                continue;
            }
            let Some(frame) = self.ambient_frame(x, origin)? else { continue };
            let integrand = frame.wedge(&full)?;
            if integrand.is_zero() {
                continue;
            }
            for s in &self.simplices[c.id] {
                let edges: Vec<Vec<S>> = s.vertices[1..].iter().map(|v| linalg::sub(v, &s.vertices[0])).collect();
                let f = integrand.evaluate(&edges)?;
                let v = integrate_poly_over_simplex(&f, &s.vertices)?;
                total = if s.sign > 0 { total + v } else { total - v };
            }
        }
        Ok(total)
    }

    /// `pair(X, dψ)`; zero for closed currents when `ψ` vanishes on the
    /// window boundary.
    pub fn closedness_check(&self, x: &Chain<S>, psi: &TestForm<S>) -> Result<S> {
        if psi.boundary_order < 1 {
            return Err(Error::invalid("closedness check needs boundary order at least 1"));
        }
        self.pair(x, &psi.d()?)
    }

    /// `(−Σ ∫ h·X ∧ dd^cψ, pair(D_c(h·X), ψ))` for the family function `h`.
    pub fn prop3_identity(&self, h: usize, x: &Chain<S>, psi: &TestForm<S>, choice: &ExtensionChoice) -> Result<(S, S)> {
        let fam = self.ctx.family.ok_or_else(|| Error::invalid("integration by parts needs a family"))?;
        if psi.boundary_order < 2 {
            return Err(Error::invalid("integration by parts needs boundary order at least 2"));
        }
        if h >= fam.len() {
            return Err(Error::invalid(format!("family has {} functions, no index {h}", fam.len())));
        }
        let hx = x.poly_multiply(&Poly::var(h));
        let lhs = -self.pair(&hx, &psi.ddc()?)?;
        let rhs = self.pair(&dc(fam, &hx, choice)?, psi)?;
        Ok((lhs, rhs))
    }

    /// Positivity probe: `pair(X, B^b)` for a 0-form bump.
    pub fn bump_mass(&self, x: &Chain<S>, boundary_order: u32) -> Result<S> {
        self.pair(x, &TestForm::bump(self.ctx.complex.ambient, boundary_order, self.window.r.clone())?)
    }
}

/// `ι(h^I ⊗ dd^ch_{j_1}⋯dd^ch_{j_m})`: the mixed corner locus of the
/// factors multiplied by `h^I`. Empty when `m > n`.
pub fn iota<S: ExactField>(
    fam: &crate::pph::ConstructiveFamily<S>,
    index: &MultiIndex,
    factors: &[usize],
    choice: &ExtensionChoice,
) -> Result<PPHCycle<S>> {
    if index.0.len() != fam.len() {
        return Err(Error::invalid(format!("multi-index has length {}, expected {}", index.0.len(), fam.len())));
    }
    if factors.len() > fam.n {
        return Ok(PPHCycle { parts: Vec::new() });
    }
    let one = PPHPolynomial::new(Poly::one(), fam.len())?;
    let x = if factors.is_empty() {
        fundamental_cycle(fam, &one)
    } else {
        Ctx::from(fam).prune(&mixed_corner_locus(fam, factors, choice)?)?
    };
    let monomial = PPHPolynomial::new(Poly::monomial(index.0.clone(), S::one()), fam.len())?;
    PPHCycle::new(monomial, x)
}

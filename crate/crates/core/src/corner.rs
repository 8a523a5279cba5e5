//! The operator D_c on P-cycles and the corner loci built from it.

use std::collections::BTreeMap;

use crate::cycles::{fundamental_cycle, Chain, Ctx};
use crate::exterior::{ConstForm, Form};
use crate::poly::Poly;
use crate::pph::{ConstructiveFamily, ExtensionChoice, MultiIndex, PPHPolynomial};
use crate::scalar::ExactField;
use crate::{Error, Result};

/// `D_c X = ∂Y` with `Y_Δ = Σ_j Σ_i ∂g_j/∂x_i · d^cH^i_{Δ̃} ∧ W_j`, where
/// `H^i_{Δ̃}` is the affine piece of `h_i` on the chosen top cell over Δ.
/// Vanishing frames are pruned.
pub fn dc<S: ExactField>(fam: &ConstructiveFamily<S>, x: &Chain<S>, choice: &ExtensionChoice) -> Result<Chain<S>> {
    let q = fam.len();
    let mut y = Chain::zero(x.dim, x.degree + 1);
    for (&cell, frame) in &x.frames {
        let top = choice.resolve(&fam.complex, cell)?;
        let pieces = &fam.assignment[&top];
        for t in frame {
            if t.coeff.nvars() > q {
                return Err(Error::invalid(format!("coefficient uses {} functions, family has {q}", t.coeff.nvars())));
            }
            for (i, h) in pieces.iter().enumerate() {
                let g = t.coeff.deriv(i);
                if g.is_zero() {
                    continue;
                }
                y.add_term(cell, g, h.dc().wedge(&t.form)?);
            }
        }
    }
    Ctx::from(fam).prune(&y.boundary(&fam.complex))
}

/// `(B⁺, ε)`: the first top cell of the coorientation of an interior
/// codimension-one cell and the sign of its induced orientation.
fn coorientation<S: ExactField>(fam: &ConstructiveFamily<S>, facet: usize) -> Result<Option<(usize, usize, S)>> {
    match fam.complex.facet_coorientation(facet) {
        Ok((p, m)) => {
            let s = fam.complex.induced_orientation(p, facet)?;
            Ok(Some((p, m, S::from_int(s as i64))))
        }
        Err(Error::Boundary(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Corner locus of `h_i`: on every interior facet the frame
/// `d^c h⁺ − d^c h⁻` in the orientation induced from B⁺.
pub fn corner_locus_function<S: ExactField>(fam: &ConstructiveFamily<S>, i: usize) -> Result<Chain<S>> {
    if i >= fam.len() {
        return Err(Error::invalid(format!("family has {} functions, no index {i}", fam.len())));
    }
    let mut p = Poly::zero();
    p.add_term(MultiIndex::unit(fam.len(), i).0, S::one());
    corner_locus_polynomial(fam, &PPHPolynomial::new(p, fam.len())?)
}

/// `Σ_i ∂P/∂x_i(h) · (d^c h_i⁺ − d^c h_i⁻)` on interior facets.
pub fn corner_locus_polynomial<S: ExactField>(fam: &ConstructiveFamily<S>, p: &PPHPolynomial<S>) -> Result<Chain<S>> {
    let d = fam.dim();
    let mut x = Chain::zero(d - 1, 1);
    let facets: Vec<usize> = fam.complex.cells_of_dim(d - 1).map(|c| c.id).collect();
    for f in facets {
        let Some((plus, minus, eps)) = coorientation(fam, f)? else { continue };
        for i in 0..fam.len() {
            let g = p.poly.deriv(i);
            if g.is_zero() {
                continue;
            }
            let jump = fam.assignment[&plus][i].sub(&fam.assignment[&minus][i]);
            x.add_term(f, g.scale(&eps), jump.dc());
        }
    }
    Ctx::from(fam).prune(&x)
}

/// `Q^k_{I,Λ}` for `|I| = k` and `dim Λ = 2n − k`.
#[derive(Clone, Debug, Default)]
pub struct QTable<S: ExactField> {
    pub levels: Vec<BTreeMap<(MultiIndex, usize), ConstForm<S>>>,
}

impl<S: ExactField> QTable<S> {
    /// Level 0 is the constant 1 on top cells; level k is
    /// `Q^k_{I,Λ} = Σ_{Δ ⊃ Λ} ε(Δ,Λ) Σ_{i : I_i > 0} d^cH^i_{Δ̃} ∧ Q^{k−1}_{I−e_i,Δ}`.
    pub fn build(fam: &ConstructiveFamily<S>, k: usize, choice: &ExtensionChoice) -> Result<Self> {
        let q = fam.len();
        let d = fam.dim();
        let mut levels = Vec::new();
        let mut base = BTreeMap::new();
        for c in fam.complex.top_cells() {
            base.insert((MultiIndex(vec![0; q]), c.id), Form::scalar(d, S::one()));
        }
        levels.push(base);
        for _ in 1..=k {
            let prev = levels.last().unwrap();
            let mut next: BTreeMap<(MultiIndex, usize), ConstForm<S>> = BTreeMap::new();
            for ((idx, cell), w) in prev {
                let top = choice.resolve(&fam.complex, *cell)?;
                for &(facet, eps) in &fam.complex.cells[*cell].facets {
                    for i in 0..q {
                        let term = fam.assignment[&top][i].dc().wedge(w)?.scale(&S::from_int(eps as i64));
                        if term.is_zero() {
                            continue;
                        }
                        let key = (idx.add(&MultiIndex::unit(q, i)), facet);
                        let entry = match next.remove(&key) {
                            Some(old) => old.add(&term)?,
                            None => term,
                        };
                        next.insert(key, entry);
                    }
                }
            }
            next.retain(|_, w| !w.is_zero());
            levels.push(next);
        }
        Ok(QTable { levels })
    }

    /// The chain `Σ_{|I|=k} P_I(h) · Q^k_{I,·}`.
    pub fn chain(&self, fam: &ConstructiveFamily<S>, p: &PPHPolynomial<S>, k: usize) -> Result<Chain<S>> {
        let mut x = Chain::zero(fam.dim() - k, k);
        for ((idx, cell), w) in &self.levels[k] {
            let coeff = p.partial(Some(idx))?.poly;
            x.add_term(*cell, coeff, w.clone());
        }
        Ctx::from(fam).prune(&x)
    }
}

fn check_order(fam_n: usize, k: usize) -> Result<()> {
    if k == 0 || k > fam_n + 1 {
        return Err(Error::invalid(format!("order {k} outside 1..={}", fam_n + 1)));
    }
    Ok(())
}

/// `D_c^k X^P` by iterating [`dc`], together with the Q table.
pub fn iterated<S: ExactField>(
    fam: &ConstructiveFamily<S>,
    p: &PPHPolynomial<S>,
    k: usize,
    choice: &ExtensionChoice,
) -> Result<(Chain<S>, QTable<S>)> {
    check_order(fam.n, k)?;
    let mut x = fundamental_cycle(fam, p);
    for _ in 0..k {
        x = dc(fam, &x, choice)?;
    }
    Ok((x, QTable::build(fam, k, choice)?))
}

/// `X_0 = X^1`, `X_j = D_c(ℓ_j · X_{j−1})` for polynomials `ℓ_j` in the
/// family's functions (normally single functions or differences).
pub fn mixed_corner_locus_polys<S: ExactField>(fam: &ConstructiveFamily<S>, ls: &[Poly<S>], choice: &ExtensionChoice) -> Result<Chain<S>> {
    check_order(fam.n, ls.len())?;
    let mut x = fundamental_cycle(fam, &PPHPolynomial::new(Poly::one(), fam.len())?);
    for l in ls {
        x = dc(fam, &x.poly_multiply(l), choice)?;
    }
    Ok(x)
}

/// Mixed corner locus of `h_{i_1}, …, h_{i_k}`.
pub fn mixed_corner_locus<S: ExactField>(fam: &ConstructiveFamily<S>, hs: &[usize], choice: &ExtensionChoice) -> Result<Chain<S>> {
    if let Some(&i) = hs.iter().find(|&&i| i >= fam.len()) {
        return Err(Error::invalid(format!("family has {} functions, no index {i}", fam.len())));
    }
    let ls: Vec<Poly<S>> = hs.iter().map(|&i| Poly::var(i)).collect();
    mixed_corner_locus_polys(fam, &ls, choice)
}

/// Whether `D_c X` is the zero chain.
pub fn vanishing_check<S: ExactField>(fam: &ConstructiveFamily<S>, x: &Chain<S>, choice: &ExtensionChoice) -> Result<bool> {
    Ctx::from(fam).is_zero(&dc(fam, x, choice)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pph::PLExpr;
    use crate::scalar::int;
    use crate::Q;

    fn max0(dim: usize, i: usize) -> PLExpr<Q> {
        PLExpr::Max(vec![PLExpr::constant(dim, int(0)), PLExpr::coordinate(dim, i)])
    }

    fn single_frame(ctx: &Ctx<Q>, x: &Chain<Q>) -> (usize, crate::exterior::PolyForm<Q>) {
        let c = ctx.canonical(x).unwrap();
        assert_eq!(c.len(), 1);
        c.into_iter().next().unwrap()
    }

    #[test]
    fn corner_of_max_x() {
        let fam = ConstructiveFamily::build(1, vec![max0(2, 0)]).unwrap();
        let ctx = Ctx::from(&fam);
        let x = corner_locus_function(&fam, 0).unwrap();
        let (edge, f) = single_frame(&ctx, &x);
        // reference basis of the edge {x = 0} is e_y; the frame is +dy
        assert_eq!(fam.complex.cell(edge).reference_orientation, vec![vec![int(0), int(1)]]);
        assert_eq!(f.coeff(&[0]).as_constant(), Some(int(1)));
        for choice in [ExtensionChoice::SmallestTop, ExtensionChoice::LargestTop] {
            let y = dc(&fam, &fundamental_cycle(&fam, &PPHPolynomial::var(1, 0)), &choice).unwrap();
            assert!(ctx.equal(&x, &y).unwrap());
        }
        assert!(ctx.validate_p_cycle(&x).unwrap().passed());
        assert!(vanishing_check(&fam, &x, &ExtensionChoice::default()).unwrap());
    }

    #[test]
    fn affine_has_no_corner() {
        let fam = ConstructiveFamily::build(1, vec![PLExpr::affine(vec![int(2), int(-1)], int(3)), max0(2, 0)]).unwrap();
        let ctx = Ctx::from(&fam);
        assert!(ctx.is_zero(&corner_locus_function(&fam, 0).unwrap()).unwrap());
        let p = PPHPolynomial::new(Poly::constant(int(5)), 2).unwrap();
        assert!(ctx.is_zero(&corner_locus_polynomial(&fam, &p).unwrap()).unwrap());
        assert!(ctx.is_zero(&mixed_corner_locus(&fam, &[0], &ExtensionChoice::default()).unwrap()).unwrap());
    }

    #[test]
    fn tropical_line_corner() {
        let trop: PLExpr<Q> = PLExpr::Max(vec![PLExpr::constant(2, int(0)), PLExpr::coordinate(2, 0), PLExpr::coordinate(2, 1)]);
        let fam = ConstructiveFamily::build(1, vec![trop]).unwrap();
        let ctx = Ctx::from(&fam);
        let x = corner_locus_function(&fam, 0).unwrap();
        assert_eq!(ctx.canonical(&x).unwrap().len(), 3);
        let y = dc(&fam, &fundamental_cycle(&fam, &PPHPolynomial::var(1, 0)), &ExtensionChoice::LargestTop).unwrap();
        assert!(ctx.equal(&x, &y).unwrap());
        assert!(ctx.is_cycle(&x).unwrap());
    }

    #[test]
    fn square_of_max_has_no_corner() {
        let fam = ConstructiveFamily::build(1, vec![max0(2, 0)]).unwrap();
        let ctx = Ctx::from(&fam);
        let p = PPHPolynomial::new(Poly::var(0).pow(2), 1).unwrap();
        assert!(ctx.is_zero(&corner_locus_polynomial(&fam, &p).unwrap()).unwrap());
        assert!(ctx.is_zero(&dc(&fam, &fundamental_cycle(&fam, &p), &ExtensionChoice::default()).unwrap()).unwrap());
    }

    #[test]
    fn product_in_c2() {
        let fam = ConstructiveFamily::build(2, vec![max0(4, 0), max0(4, 2)]).unwrap();
        let ctx = Ctx::from(&fam);
        let choice = ExtensionChoice::default();
        let m = mixed_corner_locus(&fam, &[0, 1], &choice).unwrap();
        let (plane, f) = single_frame(&ctx, &m);
        assert_eq!(fam.complex.cell(plane).dim, 2);
        // the plane x1 = x2 = 0 with reference basis (e_y1, e_y2); frame ±dy1∧dy2
        assert_eq!(fam.complex.cell(plane).reference_orientation.len(), 2);
        let c = f.coeff(&[0, 1]).as_constant().unwrap();
        assert_eq!(num_traits::Signed::abs(&c), int(1));
        let swapped = mixed_corner_locus(&fam, &[1, 0], &choice).unwrap();
        assert!(ctx.equal(&m, &swapped).unwrap());
        let p = PPHPolynomial::new(Poly::var(0).mul(&Poly::var(1)), 2).unwrap();
        let (x2, table) = iterated(&fam, &p, 2, &choice).unwrap();
        assert!(ctx.equal(&x2, &table.chain(&fam, &p, 2).unwrap()).unwrap());
        assert!(ctx.equal(&x2, &m.scale(&int(2))).unwrap());
        assert!(ctx.validate_p_cycle(&x2).unwrap().passed());
        assert!(vanishing_check(&fam, &m, &choice).unwrap());
        assert!(iterated(&fam, &p, 4, &choice).is_err());
    }
}

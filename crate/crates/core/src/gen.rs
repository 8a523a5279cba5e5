//! Seeded random instances: tropical functions, families and test forms.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::currents::TestForm;
use crate::exterior::{Form, PolyForm};
use crate::poly::Poly;
use crate::pph::{AffineFn, ConstructiveFamily, PLExpr};
use crate::scalar::ExactField;
use crate::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small<S: ExactField>(v: i64) -> S {
    S::from_int(v)
}

/// Affine function with integer gradient entries in `[−2, 2]`, each
/// nonzero with probability `density`, and constant in `{k/4 : |k| ≤ 4}`.
pub fn random_affine<S: ExactField>(rng: &mut impl Rng, dim: usize, density: f64) -> AffineFn<S> {
    let gradient = (0..dim)
        .map(|_| if rng.gen_bool(density) { small(*[-2, -1, 1, 2].choose(rng).unwrap()) } else { S::zero() })
        .collect();
    let constant = small::<S>(rng.gen_range(-4..=4)) / small(4);
    AffineFn::new(gradient, constant)
}

/// `max` of `pieces` distinct affine functions with distinct gradients.
pub fn random_tropical<S: ExactField>(rng: &mut impl Rng, dim: usize, pieces: usize, density: f64) -> PLExpr<S> {
    let mut out: Vec<AffineFn<S>> = Vec::new();
    while out.len() < pieces {
        let a = random_affine(rng, dim, density);
        if out.iter().all(|b| b.gradient != a.gradient) {
            out.push(a);
        }
    }
    PLExpr::Max(out.into_iter().map(PLExpr::Affine).collect())
}

/// A family of `count` tropical functions of `2..=max_pieces` pieces.
pub fn random_family<S: ExactField>(rng: &mut impl Rng, n: usize, count: usize, max_pieces: usize, density: f64) -> Result<ConstructiveFamily<S>> {
    let fs = (0..count).map(|_| {
        let p = rng.gen_range(2..=max_pieces.max(2));
        random_tropical(rng, 2 * n, p, density)
    });
    let fs: Vec<PLExpr<S>> = fs.collect();
    ConstructiveFamily::build(n, fs)
}

/// Polynomial in `dim` coordinates of total degree at most `max_degree`
/// with one to three small integer terms.
pub fn random_poly<S: ExactField>(rng: &mut impl Rng, dim: usize, max_degree: u32) -> Poly<S> {
    let mut p = Poly::zero();
    while p.is_zero() {
        for _ in 0..rng.gen_range(1..=3) {
            let mut e = vec![0u32; dim];
            for _ in 0..rng.gen_range(0..=max_degree) {
                e[rng.gen_range(0..dim)] += 1;
            }
            let c = *[-3, -2, -1, 1, 2, 3].choose(rng).unwrap();
            p.add_term(e, small(c));
        }
    }
    p
}

/// Random form of the given degree: each basis term is present with
/// probability one half (at least one is), coefficients from
/// [`random_poly`].
pub fn random_form<S: ExactField>(rng: &mut impl Rng, dim: usize, degree: usize, max_degree: u32) -> Result<PolyForm<S>> {
    let masks: Vec<u32> = (0u32..1 << dim).filter(|m| m.count_ones() as usize == degree).collect();
    let mut w = Form::zero(dim, degree)?;
    let forced = *masks.choose(rng).expect("degree at most dim");
    for &m in &masks {
        if m == forced || rng.gen_bool(0.5) {
            w.add_coeff(m, random_poly(rng, dim, max_degree));
        }
    }
    Ok(w)
}

pub fn random_test_form<S: ExactField>(rng: &mut impl Rng, dim: usize, degree: usize, boundary_order: u32, radius: S) -> Result<TestForm<S>> {
    TestForm::new(random_form(rng, dim, degree, 3)?, boundary_order, radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a: PLExpr<Q> = random_tropical(&mut rng(7), 4, 3, 0.5);
        let b: PLExpr<Q> = random_tropical(&mut rng(7), 4, 3, 0.5);
        assert_eq!(a, b);
        let f: PolyForm<Q> = random_form(&mut rng(3), 4, 2, 3).unwrap();
        assert_eq!(f.degree(), 2);
        assert!(!f.is_zero());
    }
}

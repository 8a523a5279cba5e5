//! Formal tensors `h^I ⊗ dd^ch^J`, the derivation `δ′`, and the map `π`
//! onto concrete cycles.

use std::collections::BTreeMap;
use std::fmt;

use crate::corner::{dc, mixed_corner_locus};
use crate::currents::iota;
use crate::cycles::{Chain, Ctx};
use crate::pph::{ConstructiveFamily, ExtensionChoice, MultiIndex};
use crate::scalar::{factorial, ExactField};
use crate::{Error, Result};

/// `(H-exponents, T-exponents)`, both of length `q`.
pub type Monomial = (Vec<u32>, Vec<u32>);

/// A combination of monomials `h^I ⊗ (dd^ch)^J` in `q` symbols, with
/// `|J| > n` identified with zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymTensor<S> {
    pub q: usize,
    pub n: usize,
    terms: BTreeMap<Monomial, S>,
}

fn add_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<S: ExactField> SymTensor<S> {
    pub fn zero(q: usize, n: usize) -> Self {
        SymTensor { q, n, terms: BTreeMap::new() }
    }

    pub fn monomial(q: usize, n: usize, h: Vec<u32>, t: Vec<u32>, c: S) -> Result<Self> {
        if h.len() != q || t.len() != q {
            return Err(Error::invalid(format!("exponent vectors must have length {q}")));
        }
        let mut r = Self::zero(q, n);
        r.add_term(h, t, c);
        Ok(r)
    }

    pub fn one(q: usize, n: usize) -> Self {
        let mut r = Self::zero(q, n);
        r.add_term(vec![0; q], vec![0; q], S::one());
        r
    }

    /// `h_i ⊗ 1`.
    pub fn h(q: usize, n: usize, i: usize) -> Self {
        let mut e = vec![0; q];
        e[i] = 1;
        let mut r = Self::zero(q, n);
        r.add_term(e, vec![0; q], S::one());
        r
    }

    /// `1 ⊗ dd^ch_i`.
    pub fn ddc(q: usize, n: usize, i: usize) -> Self {
        let mut e = vec![0; q];
        e[i] = 1;
        let mut r = Self::zero(q, n);
        r.add_term(vec![0; q], e, S::one());
        r
    }

    pub fn add_term(&mut self, h: Vec<u32>, t: Vec<u32>, c: S) {
        if c.is_zero() || t.iter().sum::<u32>() as usize > self.n {
            return;
        }
        let key = (h, t);
        let v = self.terms.remove(&key).unwrap_or_else(S::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if (self.q, self.n) != (o.q, o.n) {
            return Err(Error::invalid("tensors over different symbol sets"));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = self.clone();
        for ((h, t), c) in &o.terms {
            r.add_term(h.clone(), t.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut r = Self::zero(self.q, self.n);
        for ((h, t), c) in &self.terms {
            r.add_term(h.clone(), t.clone(), c.clone() * s.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-S::one()))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = Self::zero(self.q, self.n);
        for ((h1, t1), c1) in &self.terms {
            for ((h2, t2), c2) in &o.terms {
                r.add_term(add_vec(h1, h2), add_vec(t1, t2), c1.clone() * c2.clone());
            }
        }
        Ok(r)
    }

    /// `δ′(h_i ⊗ 1) = 1 ⊗ dd^ch_i`, `δ′(1 ⊗ dd^ch_i) = 0`, extended by Leibniz.
    pub fn delta_prime(&self) -> Self {
        let mut r = Self::zero(self.q, self.n);
        for ((h, t), c) in &self.terms {
            for i in 0..self.q {
                if h[i] == 0 {
                    continue;
                }
                let mut h2 = h.clone();
                h2[i] -= 1;
                let mut t2 = t.clone();
                t2[i] += 1;
                r.add_term(h2, t2, c.clone() * S::from_u32(h[i]).expect("small integer"));
            }
        }
        r
    }
}

impl<S: ExactField> fmt::Debug for SymTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: ExactField> fmt::Display for SymTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let factor = |e: &[u32], name: &str| -> Vec<String> {
            e.iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("{name}{}", i + 1) } else { format!("{name}{}^{k}", i + 1) })
                .collect()
        };
        for (j, ((h, t), c)) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            let hs = factor(h, "h");
            let ts = factor(t, "ddc h");
            let hs = if hs.is_empty() { "1".to_string() } else { hs.join("*") };
            let ts = if ts.is_empty() { "1".to_string() } else { ts.join("*") };
            write!(f, "({}) {hs} ⊗ {ts}", crate::scalar::fmt_rational(c))?;
        }
        Ok(())
    }
}

/// Image of a tensor: one chain per T-degree `m`, of dimension `2n − 2m`.
#[derive(Clone, Debug)]
pub struct ConcreteCurrent<S: ExactField> {
    pub parts: BTreeMap<usize, Chain<S>>,
}

impl<S: ExactField> ConcreteCurrent<S> {
    pub fn is_zero(&self, fam: &ConstructiveFamily<S>) -> Result<bool> {
        let ctx = Ctx::from(fam);
        for x in self.parts.values() {
            if !ctx.is_zero(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Framewise equality, degree by degree.
    pub fn equal(&self, o: &Self, fam: &ConstructiveFamily<S>) -> Result<bool> {
        let ctx = Ctx::from(fam);
        let empty = |m: usize| Chain::zero(2 * fam.n - 2 * m, 0);
        for m in self.parts.keys().chain(o.parts.keys()) {
            let a = self.parts.get(m).cloned().unwrap_or_else(|| empty(*m));
            let b = o.parts.get(m).cloned().unwrap_or_else(|| empty(*m));
            if !ctx.equal(&a, &b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `D_c` applied to every part.
    pub fn dc(&self, fam: &ConstructiveFamily<S>, choice: &ExtensionChoice) -> Result<Self> {
        let mut parts = BTreeMap::new();
        for (m, x) in &self.parts {
            if 2 * fam.n >= 2 * m + 2 {
                parts.insert(m + 1, dc(fam, x, choice)?);
            }
        }
        Ok(ConcreteCurrent { parts })
    }
}

fn add_into<S: ExactField>(parts: &mut BTreeMap<usize, Chain<S>>, m: usize, x: Chain<S>) {
    let next = match parts.remove(&m) {
        Some(y) => y.add(&x),
        None => x,
    };
    parts.insert(m, next);
}

/// `π(h^I ⊗ dd^ch^J) = h^I · (mixed corner locus of the factors of J)`.
pub fn pi<S: ExactField>(t: &SymTensor<S>, fam: &ConstructiveFamily<S>, choice: &ExtensionChoice) -> Result<ConcreteCurrent<S>> {
    if t.q != fam.len() {
        return Err(Error::invalid(format!("tensor has {} symbols, family has {} functions", t.q, fam.len())));
    }
    if t.n != fam.n {
        return Err(Error::invalid(format!("tensor truncates at {}, family has n = {}", t.n, fam.n)));
    }
    let mut parts = BTreeMap::new();
    for ((h, j), c) in t.terms() {
        let factors: Vec<usize> = j.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize)).collect();
        let cycle = iota(fam, &MultiIndex(h.clone()), &factors, choice)?;
        if let Some(x) = cycle.to_chain() {
            add_into(&mut parts, factors.len(), x.scale(c));
        }
    }
    Ok(ConcreteCurrent { parts })
}

/// `δ = π ∘ δ′` on a presentation.
pub fn delta<S: ExactField>(t: &SymTensor<S>, fam: &ConstructiveFamily<S>, choice: &ExtensionChoice) -> Result<ConcreteCurrent<S>> {
    pi(&t.delta_prime(), fam, choice)
}

/// For `π(F) = 0`, whether `π(δ′F) = 0`.
pub fn kernel_stability_check<S: ExactField>(f: &SymTensor<S>, fam: &ConstructiveFamily<S>, choice: &ExtensionChoice) -> Result<bool> {
    if !pi(f, fam, choice)?.is_zero(fam)? {
        return Err(Error::invalid("tensor is not in the kernel of π"));
    }
    delta(f, fam, choice)?.is_zero(fam)
}

/// Whether `π(δ′F) = D_c π(F)` framewise.
pub fn composition_check<S: ExactField>(f: &SymTensor<S>, fam: &ConstructiveFamily<S>, choice: &ExtensionChoice) -> Result<bool> {
    let lhs = delta(f, fam, choice)?;
    let rhs = pi(f, fam, choice)?.dc(fam, choice)?;
    lhs.equal(&rhs, fam)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary1Report {
    /// `π(δ′^k(h_1⋯h_k ⊗ 1)) = k! · mixed locus`.
    pub equal: bool,
    /// The composition identity after each application of `δ′`.
    pub steps: Vec<bool>,
}

impl Corollary1Report {
    pub fn passed(&self) -> bool {
        self.equal && self.steps.iter().all(|&s| s)
    }
}

pub fn verify_corollary1<S: ExactField>(fam: &ConstructiveFamily<S>, hs: &[usize], choice: &ExtensionChoice) -> Result<Corollary1Report> {
    let k = hs.len();
    if k == 0 || k > fam.n {
        return Err(Error::invalid(format!("need 1 ≤ k ≤ n, got k = {k}")));
    }
    let (q, n) = (fam.len(), fam.n);
    let mut f = SymTensor::one(q, n);
    for &i in hs {
        if i >= q {
            return Err(Error::invalid(format!("family has {q} functions, no index {i}")));
        }
        f = f.mul(&SymTensor::h(q, n, i))?;
    }
    let mut steps = Vec::new();
    for _ in 0..k {
        steps.push(composition_check(&f, fam, choice)?);
        f = f.delta_prime();
    }
    let lhs = pi(&f, fam, choice)?;
    let mixed = mixed_corner_locus(fam, hs, choice)?.scale(&factorial::<S>(k as u32));
    let rhs = ConcreteCurrent { parts: BTreeMap::from([(k, mixed)]) };
    Ok(Corollary1Report { equal: lhs.equal(&rhs, fam)?, steps })
}

/// Whether the mixed locus of `h − h_{i_1}, …, h − h_{i_k}` vanishes,
/// for `h = fam.functions[top]`.
pub fn verify_corollary3<S: ExactField>(fam: &ConstructiveFamily<S>, top: usize, hs: &[usize], choice: &ExtensionChoice) -> Result<bool> {
    if top >= fam.len() || hs.iter().any(|&i| i >= fam.len()) {
        return Err(Error::invalid("function index out of range"));
    }
    let ls: Vec<_> = hs.iter().map(|&i| crate::poly::Poly::var(top).sub(&crate::poly::Poly::var(i))).collect();
    let x = crate::corner::mixed_corner_locus_polys(fam, &ls, choice)?;
    Ctx::from(fam).is_zero(&x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corner::corner_locus_function;
    use crate::pph::PLExpr;
    use crate::scalar::int;
    use crate::Q;

    fn max0(dim: usize, i: usize) -> PLExpr<Q> {
        PLExpr::Max(vec![PLExpr::constant(dim, int(0)), PLExpr::coordinate(dim, i)])
    }

    #[test]
    fn delta_prime_rules() {
        let h1 = SymTensor::<Q>::h(2, 2, 0);
        let h2 = SymTensor::<Q>::h(2, 2, 1);
        assert_eq!(h1.delta_prime(), SymTensor::ddc(2, 2, 0));
        let prod = h1.mul(&h2).unwrap();
        let expect = h2.mul(&SymTensor::ddc(2, 2, 0)).unwrap().add(&h1.mul(&SymTensor::ddc(2, 2, 1)).unwrap()).unwrap();
        assert_eq!(prod.delta_prime(), expect);
        assert!(SymTensor::<Q>::ddc(2, 2, 0).mul(&SymTensor::ddc(2, 2, 1)).unwrap().delta_prime().is_zero());
        // truncation above n
        let t = SymTensor::<Q>::ddc(2, 1, 0);
        assert!(t.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn pi_and_corollaries() {
        let x3 = PLExpr::Sum(vec![max0(4, 0), max0(4, 2)]);
        let fam = ConstructiveFamily::build(2, vec![max0(4, 0), max0(4, 2), x3]).unwrap();
        let choice = ExtensionChoice::default();
        let (q, n) = (3, 2);
        let d = delta(&SymTensor::h(q, n, 1), &fam, &choice).unwrap();
        let c = corner_locus_function(&fam, 1).unwrap();
        assert!(d.equal(&ConcreteCurrent { parts: BTreeMap::from([(1, c)]) }, &fam).unwrap());
        let kernel = SymTensor::h(q, n, 2).sub(&SymTensor::h(q, n, 0)).unwrap().sub(&SymTensor::h(q, n, 1)).unwrap();
        assert!(kernel_stability_check(&kernel, &fam, &choice).unwrap());
        let kernel = kernel.mul(&SymTensor::h(q, n, 0)).unwrap();
        assert!(kernel_stability_check(&kernel, &fam, &choice).unwrap());
        assert!(kernel_stability_check(&SymTensor::h(q, n, 0), &fam, &choice).is_err());
        let rep = verify_corollary1(&fam, &[0, 1], &choice).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let rep = verify_corollary1(&fam, &[0, 0], &choice).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }
}

//! Sparse multivariate polynomials with exact coefficients.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so a polynomial
//! does not carry a fixed variable count: `x_3` simply has exponent `[0,0,0,1]`.

use std::collections::BTreeMap;
use std::fmt;


use crate::scalar::{ExactField, Field};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<S> {
    terms: BTreeMap<Vec<u32>, S>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exps(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

impl<S: Field> Poly<S> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, S::one())
    }

    pub fn monomial(exps: Vec<u32>, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    /// `Σ a_i x_i + b`.
    pub fn affine(a: &[S], b: S) -> Self {
        let mut p = Self::constant(b);
        for (i, ai) in a.iter().enumerate() {
            if !ai.is_zero() {
                let mut e = vec![0; i + 1];
                e[i] = 1;
                p.add_term(e, ai.clone());
            }
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let e = trim(exps);
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// One more than the largest variable index in use.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * s.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(add_exps(e1, e2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn deriv(&self, i: usize) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            r.add_term(e2, c.clone() * S::from_int(k as i64));
        }
        r
    }

    pub fn eval(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t * x[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitute variable `i` by `subs[i]` (variables past the end of
    /// `subs` must not occur).
    pub fn compose(&self, subs: &[Poly<S>]) -> Self {
        let mut powers: Vec<Vec<Poly<S>>> = subs.iter().map(|s| vec![Self::one(), s.clone()]).collect();
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                assert!(i < subs.len(), "variable x{i} has no substitution");
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    pub fn map_coeffs<T: Field>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        let mut r = Poly::zero();
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }
}

impl<S: ExactField> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|i| format!("x{}", i + 1))
    }
}

impl<S: ExactField> Poly<S> {
    /// Render with caller-provided variable names, e.g. `2*h*g^2 + -1/2`.
    pub fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        struct W<'a, S>(&'a Poly<S>, &'a dyn Fn(usize) -> String);
        impl<S: ExactField> fmt::Display for W<'_, S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        W(self, name).to_string()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, name: &dyn Fn(usize) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { name(i) } else { format!("{}^{}", name(i), p) })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<S: ExactField> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

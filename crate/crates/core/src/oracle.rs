//! Floating-point reference for `dd^c h_1 ∧ … ∧ dd^c h_k ∧ φ`: sample each
//! function on a grid, mollify, difference twice, wedge and integrate.
//!
//! Slabs along the first axis are streamed, so memory grows with the
//! grid size to the power `2n − 1`.

use std::collections::VecDeque;

use crate::currents::{PairingResult, PairingValue, TestForm};
use crate::exterior::mask_indices;
use crate::poly::Poly;
use crate::pph::PLExpr;
use crate::scalar::ExactField;
use crate::{Error, Result};

/// A real function sampled by the oracle.
pub type Sampled<'a> = Box<dyn Fn(&[f64]) -> f64 + 'a>;

#[derive(Clone, Debug)]
enum Compiled {
    Affine(Vec<f64>, f64),
    Max(Vec<Compiled>),
    Min(Vec<Compiled>),
    Sum(Vec<Compiled>),
    Scale(f64, Box<Compiled>),
}

impl Compiled {
    fn new<S: ExactField>(e: &PLExpr<S>) -> Self {
        let all = |c: &[PLExpr<S>]| c.iter().map(Compiled::new).collect();
        match e {
            PLExpr::Affine(a) => Compiled::Affine(a.gradient.iter().map(|g| g.to_f64_lossy()).collect(), a.constant.to_f64_lossy()),
            PLExpr::Max(c) => Compiled::Max(all(c)),
            PLExpr::Min(c) => Compiled::Min(all(c)),
            PLExpr::Sum(c) => Compiled::Sum(all(c)),
            PLExpr::Scale(s, e) => Compiled::Scale(s.to_f64_lossy(), Box::new(Compiled::new(e))),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Compiled::Affine(g, c) => g.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + c,
            Compiled::Max(c) => c.iter().map(|e| e.eval(x)).fold(f64::NEG_INFINITY, f64::max),
            Compiled::Min(c) => c.iter().map(|e| e.eval(x)).fold(f64::INFINITY, f64::min),
            Compiled::Sum(c) => c.iter().map(|e| e.eval(x)).sum(),
            Compiled::Scale(s, e) => s * e.eval(x),
        }
    }
}

/// A PL expression as a sampled function.
pub fn sampled<'a, S: ExactField>(e: &PLExpr<S>) -> Sampled<'a> {
    let c = Compiled::new(e);
    Box::new(move |x| c.eval(x))
}

/// Grid spacing and mollifier width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleParams {
    pub grid: f64,
    pub width: f64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams { grid: 1.0 / 40.0, width: 1.0 / 20.0 }
    }
}

impl OracleParams {
    pub fn halved(&self) -> Self {
        OracleParams { grid: self.grid / 2.0, width: self.width / 2.0 }
    }

    fn doubled(&self) -> Self {
        OracleParams { grid: self.grid * 2.0, width: self.width * 2.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub value: f64,
    /// `|V(ε) − V(2ε)|`.
    pub error: f64,
    pub coarse_value: f64,
    pub params: OracleParams,
}

impl OracleReport {
    pub fn to_pairing<S>(&self) -> PairingResult<S> {
        PairingResult {
            value: PairingValue::Approx { value: self.value, error: self.error },
            provenance: format!("mollified oracle, grid {}, width {}", self.params.grid, self.params.width),
        }
    }
}

fn integer_ratio(a: f64, b: f64, what: &str) -> Result<usize> {
    let q = a / b;
    let r = q.round();
    if r < 1.0 || (q - r).abs() > 1e-9 {
        return Err(Error::invalid(format!("{what} must be an integer multiple of the grid spacing")));
    }
    Ok(r as usize)
}

/// Discrete mollifier weights `(1 − (s/ε_m)²)³` at `s = jε_g`, normalised.
fn kernel(m: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..=2 * m)
        .map(|j| {
            let s = (j as f64 - m as f64) / m as f64;
            (1.0 - s * s).powi(3)
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

/// Convolve a row-major array of side `len` in `dims` dimensions along
/// `axis`; the result has side `len − 2m` along that axis.
fn convolve_axis(data: &[f64], shape: &[usize], axis: usize, w: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let m2 = w.len() - 1;
    let mut out_shape = shape.to_vec();
    out_shape[axis] -= m2;
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let (len_in, len_out) = (shape[axis], out_shape[axis]);
    let mut out = vec![0.0; outer * len_out * stride];
    for o in 0..outer {
        for i in 0..len_out {
            let dst = (o * len_out + i) * stride;
            for (j, wj) in w.iter().enumerate() {
                let src = (o * len_in + i + j) * stride;
                for s in 0..stride {
                    out[dst + s] += wj * data[src + s];
                }
            }
        }
    }
    (out, out_shape)
}

/// Streams fully mollified slabs of one function, at first-axis indices
/// `−1, 0, …, N+1`, each a `(2n−1)`-dimensional array of side `N+3`.
struct SlabStream<'a> {
    f: &'a Sampled<'a>,
    d: usize,
    r: f64,
    h: f64,
    m: usize,
    big: usize,
    w: Vec<f64>,
    next_sample: isize,
    partial: VecDeque<Vec<f64>>,
}

impl<'a> SlabStream<'a> {
    fn new(f: &'a Sampled<'a>, d: usize, r: f64, n: usize, h: f64, m: usize) -> Self {
        let w = kernel(m);
        SlabStream { f, d, r, h, m, big: n + 3 + 2 * m, w, next_sample: -1 - m as isize, partial: VecDeque::new() }
    }

    /// Sample the slab at first-axis index `i` and mollify along the
    /// remaining axes.
    fn partial_slab(&self, i: isize) -> Vec<f64> {
        let off = 1 + self.m as isize;
        let rest = self.d - 1;
        let count = self.big.pow(rest as u32);
        let mut x = vec![0.0; self.d];
        x[0] = -self.r + i as f64 * self.h;
        let mut data = Vec::with_capacity(count);
        for flat in 0..count {
            let mut q = flat;
            for a in (1..self.d).rev() {
                let idx = (q % self.big) as isize - off;
                q /= self.big;
                x[a] = -self.r + idx as f64 * self.h;
            }
            data.push((self.f)(&x));
        }
        let mut shape = vec![self.big; rest];
        for a in 0..rest {
            let (next, s) = convolve_axis(&data, &shape, a, &self.w);
            data = next;
            shape = s;
        }
        data
    }

    fn next_slab(&mut self) -> Vec<f64> {
        while self.partial.len() < self.w.len() {
            let s = self.partial_slab(self.next_sample);
            self.partial.push_back(s);
            self.next_sample += 1;
        }
        let len = self.partial[0].len();
        let mut out = vec![0.0; len];
        for (wj, p) in self.w.iter().zip(&self.partial) {
            for (o, v) in out.iter_mut().zip(p) {
                *o += wj * v;
            }
        }
        self.partial.pop_front();
        out
    }
}

/// Sign of the permutation taking `seq` to sorted order.
fn parity(seq: &[usize]) -> f64 {
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Terms `(pairs, φ mask, sign)` of the top coefficient of
/// `ω_1 ∧ … ∧ ω_k ∧ φ` for 2-forms `ω_i`.
fn wedge_terms(d: usize, k: usize, phi_masks: &[u32]) -> Vec<(Vec<(usize, usize)>, u32, f64)> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<(usize, usize)>, u32)> = vec![(Vec::new(), 0)];
    while let Some((pairs, used)) = stack.pop() {
        if pairs.len() == k {
            let rest = ((1u32 << d) - 1) & !used;
            if phi_masks.contains(&rest) {
                let mut seq: Vec<usize> = pairs.iter().flat_map(|&(p, q)| [p, q]).collect();
                seq.extend(mask_indices(rest));
                out.push((pairs, rest, parity(&seq)));
            }
            continue;
        }
        for p in 0..d {
            for q in p + 1..d {
                if used & (1 << p | 1 << q) == 0 {
                    let mut next = pairs.clone();
                    next.push((p, q));
                    stack.push((next, used | 1 << p | 1 << q));
                }
            }
        }
    }
    out
}

/// One oracle evaluation at fixed resolution.
fn evaluate<S: ExactField>(fs: &[Sampled], phi: &TestForm<S>, params: OracleParams) -> Result<f64> {
    let d = phi.dim();
    let k = fs.len();
    if d % 2 != 0 || d == 0 {
        return Err(Error::invalid("oracle needs an even ambient dimension"));
    }
    if 2 * k + phi.degree() != d {
        return Err(Error::DegreeMismatch { expected: d - 2 * k.min(d / 2), found: phi.degree() });
    }
    let r = phi.radius.to_f64_lossy();
    let h = params.grid;
    let n = integer_ratio(2.0 * r, h, "window width")?;
    let m = integer_ratio(params.width, h, "mollifier width")?;
    if m < 2 {
        return Err(Error::invalid("mollifier width must be at least twice the grid spacing"));
    }
    if params.width >= r {
        return Err(Error::invalid("window too small for the mollifier width"));
    }
    let coeffs: Vec<(u32, Poly<f64>)> = phi.omega.coeffs().iter().map(|(m, c)| (*m, c.map_coeffs(|v| v.to_f64_lossy()))).collect();
    let masks: Vec<u32> = coeffs.iter().map(|(m, _)| *m).collect();
    let terms = wedge_terms(d, k, &masks);
    let b = phi.boundary_order as i32;

    let side = n + 3;
    let rest = d - 1;
    let strides: Vec<usize> = (0..rest).map(|a| side.pow((rest - 1 - a) as u32)).collect();
    let mut streams: Vec<SlabStream> = fs.iter().map(|f| SlabStream::new(f, d, r, n, h, m)).collect();
    let mut windows: Vec<VecDeque<Vec<f64>>> = streams.iter_mut().map(|s| VecDeque::from(vec![s.next_slab(), s.next_slab()])).collect();
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let (h2, h4) = (h * h, 4.0 * h * h);
    let mut x = vec![0.0; d];
    let mut total = 0.0;
    let mut hess = vec![vec![0.0; d]; d];
    let mut ms: Vec<Vec<Vec<f64>>> = vec![vec![vec![0.0; d]; d]; k];
    for i0 in 0..=n {
        for (s, w) in streams.iter_mut().zip(windows.iter_mut()) {
            w.push_back(s.next_slab());
        }
        x[0] = -r + i0 as f64 * h;
        let w0 = if i0 == 0 || i0 == n { 0.5 } else { 1.0 };
        for flat in 0..(n + 1).pow(rest as u32) {
            let mut q = flat;
            let mut centre = 0;
            let mut weight = w0;
            for a in (0..rest).rev() {
                let idx = q % (n + 1);
                q /= n + 1;
                x[a + 1] = -r + idx as f64 * h;
                centre += (idx + 1) * strides[a];
                if idx == 0 || idx == n {
                    weight *= 0.5;
                }
            }
            let bump = if b == 0 { 1.0 } else { x.iter().map(|v| r * r - v * v).product::<f64>().powi(b) };
            if bump == 0.0 {
                continue;
            }
            for (fi, w) in windows.iter().enumerate() {
                let at = |slab: usize, off: isize| w[slab][(centre as isize + off) as usize];
                let step = |a: usize| -> (usize, isize) {
                    if a == 0 {
                        (1, 0)
                    } else {
                        (0, strides[a - 1] as isize)
                    }
                };
                // Offsets along axis a are slab shifts for a = 0, strides otherwise.
                let value = |da: isize, a: usize, db: isize, bb: usize| -> f64 {
                    let mut slab = 1isize;
                    let mut off = 0isize;
                    for (dv, ax) in [(da, a), (db, bb)] {
                        let (is_slab, st) = step(ax);
                        if is_slab == 1 {
                            slab += dv;
                        } else {
                            off += dv * st;
                        }
                    }
                    at(slab as usize, off)
                };
                for a in 0..d {
                    hess[a][a] = (value(1, a, 0, a) - 2.0 * value(0, a, 0, a) + value(-1, a, 0, a)) / h2;
                    for bb in a + 1..d {
                        let v = (value(1, a, 1, bb) - value(1, a, -1, bb) - value(-1, a, 1, bb) + value(-1, a, -1, bb)) / h4;
                        hess[a][bb] = v;
                        hess[bb][a] = v;
                    }
                }
                // dd^c h = Σ ∂_b∂_a h dx_b ∧ d^c x_a with d^c x_j = −dy_j, d^c y_j = dx_j.
                let hc = |bb: usize, qq: usize| -> f64 {
                    if qq % 2 == 1 {
                        -hess[qq - 1][bb]
                    } else {
                        hess[qq + 1][bb]
                    }
                };
                for p in 0..d {
                    for qq in p + 1..d {
                        ms[fi][p][qq] = hc(p, qq) - hc(qq, p);
                    }
                }
            }
            let mut v = 0.0;
            for (pairs, mask, s) in &terms {
                let c = &coeffs.iter().find(|(m, _)| m == mask).expect("mask present").1;
                let mut t = s * c.eval(&x);
                for (fi, &(p, qq)) in pairs.iter().enumerate() {
                    t *= ms[fi][p][qq];
                }
                v += t;
            }
            total += weight * bump * v;
        }
        for w in windows.iter_mut() {
            w.pop_front();
        }
    }
    Ok(sign * total * h.powi(d as i32))
}

/// `(−1)^k ∫ dd^c h̃_1 ∧ … ∧ dd^c h̃_k ∧ φ` over the window, with mollified
/// `h̃_i`, and the difference to the same computation at twice the grid
/// spacing and mollifier width as error estimate. The factor `(−1)^k`
/// matches the current convention `(dd^c T)(ψ) = −T(dd^c ψ)`.
pub fn mollified_oracle<S: ExactField>(fs: &[Sampled], phi: &TestForm<S>, params: OracleParams) -> Result<OracleReport> {
    let value = evaluate(fs, phi, params)?;
    let coarse_value = evaluate(fs, phi, params.doubled())?;
    Ok(OracleReport { value, error: (value - coarse_value).abs(), coarse_value, params })
}

//! Executing scripts: lowering names to engine objects, running commands
//! and collecting one JSON report per command.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::script::{Command, CycleDef, Expr, Script, Stmt};
use crate::complex::Window;
use crate::corner::{dc, mixed_corner_locus};
use crate::currents::{TestForm, Windowed};
use crate::cycles::{fundamental_cycle, Chain, Ctx};
use crate::exterior::Form;
use crate::gen;
use crate::io::{chain_json, complex_json, family_json, plot_json, rational};
use crate::oracle::{mollified_oracle, sampled, OracleParams, Sampled};
use crate::poly::Poly;
use crate::pph::{ConstructiveFamily, ExtensionChoice, PLExpr, PPHPolynomial};
use crate::ring::{verify_corollary1, verify_corollary3};
use crate::scalar::{int, ExactField};
use crate::{Error, Result, Q};

pub const REPORT_FORMAT: &str = "pph-report/1";
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    /// Overrides the script's window radius.
    pub window: Option<Q>,
    /// Oracle grid spacing; the mollifier width is twice this.
    pub oracle_grid: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options { seed: DEFAULT_SEED, window: None, oracle_grid: OracleParams::default().grid }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub reports: Vec<Value>,
    pub error: Option<Error>,
}

impl Outcome {
    /// 0 when everything ran and every verification passed, 1 when a
    /// verification failed, 2 on error.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.reports.iter().any(|r| r.get("passed") == Some(&Value::Bool(false))) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self, seed: u64) -> Value {
        let mut v = json!({"format": REPORT_FORMAT, "seed": seed, "reports": self.reports, "exit": self.exit_code()});
        if let Some(e) = &self.error {
            v["error"] = error_json(e);
        }
        v
    }

    /// One line per report, then the error if any.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let status = match r.get("passed") {
                Some(Value::Bool(true)) => " [pass]",
                Some(Value::Bool(false)) => " [FAIL]",
                _ => "",
            };
            out.push_str(&format!("{}{status}: {}\n", r["command"].as_str().unwrap_or("?"), r["summary"].as_str().unwrap_or("")));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error ({}): {e}\n", e.kind()));
        }
        out
    }
}

pub fn error_json(e: &Error) -> Value {
    json!({"kind": e.kind(), "message": e.to_string()})
}

/// All permutations of `0..k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn constant_value(e: &Expr) -> Option<Q> {
    match e {
        Expr::Num(q) => Some(q.clone()),
        Expr::Neg(a) => constant_value(a).map(|v| -v),
        Expr::Add(a, b) => Some(constant_value(a)? + constant_value(b)?),
        Expr::Sub(a, b) => Some(constant_value(a)? - constant_value(b)?),
        Expr::Mul(a, b) => Some(constant_value(a)? * constant_value(b)?),
        Expr::Pow(a, k) => Some(num_traits::pow(constant_value(a)?, *k as usize)),
        _ => None,
    }
}

/// Lower a function expression, inlining previously bound functions.
pub fn lower_pl(e: &Expr, dim: usize, env: &BTreeMap<String, PLExpr<Q>>) -> Result<PLExpr<Q>> {
    if let Some(c) = constant_value(e) {
        return Ok(PLExpr::constant(dim, c));
    }
    let rec = |x: &Expr| lower_pl(x, dim, env);
    Ok(match e {
        Expr::Num(_) => unreachable!("constants handled above"),
        Expr::Coord(i) => PLExpr::coordinate(dim, *i),
        Expr::Name(n) => env.get(n).cloned().ok_or_else(|| Error::invalid(format!("'{n}' is not a function")))?,
        Expr::Max(a) => PLExpr::Max(a.iter().map(rec).collect::<Result<_>>()?),
        Expr::Min(a) => PLExpr::Min(a.iter().map(rec).collect::<Result<_>>()?),
        Expr::Add(a, b) => PLExpr::Sum(vec![rec(a)?, rec(b)?]),
        Expr::Sub(a, b) => PLExpr::Sum(vec![rec(a)?, PLExpr::Scale(-int::<Q>(1), Box::new(rec(b)?))]),
        Expr::Neg(a) => PLExpr::Scale(-int::<Q>(1), Box::new(rec(a)?)),
        Expr::Mul(a, b) => match (constant_value(a), constant_value(b)) {
            (Some(c), _) => PLExpr::Scale(c, Box::new(rec(b)?)),
            (_, Some(c)) => PLExpr::Scale(c, Box::new(rec(a)?)),
            _ => return Err(Error::invalid(format!("'{e}' multiplies two non-constant functions"))),
        },
        Expr::Pow(..) => return Err(Error::invalid(format!("'{e}' is not piecewise linear"))),
    })
}

/// Lower a polynomial expression; `var` resolves names and coordinates.
pub fn lower_poly(e: &Expr, var: &dyn Fn(&Expr) -> Result<Poly<Q>>) -> Result<Poly<Q>> {
    let rec = |x: &Expr| lower_poly(x, var);
    Ok(match e {
        Expr::Num(q) => Poly::constant(q.clone()),
        Expr::Coord(_) | Expr::Name(_) => var(e)?,
        Expr::Max(_) | Expr::Min(_) => return Err(Error::invalid("max/min inside a polynomial")),
        Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
        Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
        Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
        Expr::Pow(a, k) => rec(a)?.pow(*k),
        Expr::Neg(a) => rec(a)?.neg(),
    })
}

struct Env {
    n: usize,
    radius: Q,
    names: Vec<String>,
    printed: Vec<String>,
    exprs: Vec<PLExpr<Q>>,
    fam: Option<ConstructiveFamily<Q>>,
    polys: BTreeMap<String, Poly<Q>>,
    forms: BTreeMap<String, TestForm<Q>>,
    cycles: BTreeMap<String, Chain<Q>>,
    choice: ExtensionChoice,
    opts: Options,
}

fn report(command: &str, summary: String, passed: Option<bool>, extra: Value) -> Value {
    let mut v = json!({"command": command, "summary": summary});
    if let Some(p) = passed {
        v["passed"] = Value::Bool(p);
    }
    if let Value::Object(m) = extra {
        for (k, x) in m {
            v[k] = x;
        }
    }
    v
}

impl Env {
    fn fam(&self) -> Result<&ConstructiveFamily<Q>> {
        self.fam.as_ref().ok_or_else(|| Error::invalid("the script defines no functions"))
    }

    fn function_index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::invalid(format!("'{name}' is not a function")))
    }

    fn family_poly(&self, name: &str) -> Result<Poly<Q>> {
        if let Some(p) = self.polys.get(name) {
            return Ok(p.clone());
        }
        Ok(Poly::var(self.function_index(name)?))
    }

    fn pph(&self, p: Poly<Q>) -> Result<PPHPolynomial<Q>> {
        PPHPolynomial::new(p, self.names.len())
    }

    fn cycle(&self, name: &str) -> Result<&Chain<Q>> {
        self.cycles.get(name).ok_or_else(|| Error::invalid(format!("'{name}' is not a cycle")))
    }

    fn form(&self, name: &str) -> Result<&TestForm<Q>> {
        self.forms.get(name).ok_or_else(|| Error::invalid(format!("'{name}' is not a form")))
    }

    fn prune(&self, x: Chain<Q>) -> Result<Chain<Q>> {
        Ctx::from(self.fam()?).prune(&x)
    }

    fn corner(&self, of: &str, order: Option<usize>) -> Result<Chain<Q>> {
        let fam = self.fam()?;
        let k = order.unwrap_or(1);
        if k == 0 || k > fam.n {
            return Err(Error::invalid(format!("order must be between 1 and n = {}", fam.n)));
        }
        let p = self.pph(self.family_poly(of)?)?;
        let mut x = fundamental_cycle(fam, &p);
        for _ in 0..k {
            x = dc(fam, &x, &self.choice)?;
        }
        self.prune(x)
    }

    fn mixed(&self, hs: &[String]) -> Result<Chain<Q>> {
        let idx: Vec<usize> = hs.iter().map(|h| self.function_index(h)).collect::<Result<_>>()?;
        let fam = self.fam()?;
        self.prune(mixed_corner_locus(fam, &idx, &self.choice)?)
    }

    fn windowed<'a>(&self, fam: &'a ConstructiveFamily<Q>) -> Result<Windowed<'a, Q>> {
        Windowed::new(fam, Window::new(self.radius.clone())?)
    }

    fn exec(&mut self, c: &Command) -> Result<Value> {
        match c {
            Command::Refine => {
                let fam = self.fam()?;
                let counts = fam.complex.count_by_dim();
                Ok(report("refine", format!("{} cells, counts by dimension {:?}", fam.complex.cells.len(), counts), None, json!({"counts": counts})))
            }
            Command::CornerLocus { of, order } => {
                let x = self.corner(of, *order)?;
                let summary = format!("{} frames on {}-cells", x.frames.len(), x.dim);
                Ok(report("corner-locus", summary, None, json!({"chain": chain_json(&x, &self.names)})))
            }
            Command::Mixed(hs) => {
                let x = self.mixed(hs)?;
                let summary = format!("{} frames on {}-cells", x.frames.len(), x.dim);
                Ok(report("mixed", summary, None, json!({"chain": chain_json(&x, &self.names)})))
            }
            Command::Pair { cycle, form } => {
                let (x, phi) = (self.cycle(cycle)?, self.form(form)?);
                let v = self.windowed(self.fam()?)?.pair(x, phi)?;
                Ok(report("pair", format!("<{cycle}, {form}> = {v}"), None, json!({"value": rational(&v)})))
            }
            Command::Verify { what, args } => self.verify(what, args),
            Command::Oracle(args) => self.oracle(args),
            Command::Export { target, args } => self.export(target, args),
        }
    }

    fn verify(&self, what: &str, args: &[String]) -> Result<Value> {
        if args.is_empty() {
            return self.verify_generated(what);
        }
        let fam = self.fam()?;
        let ctx = Ctx::from(fam);
        let name = format!("verify {what}");
        match what {
            "corollary1" => {
                let idx: Vec<usize> = args.iter().map(|h| self.function_index(h)).collect::<Result<_>>()?;
                let r = verify_corollary1(fam, &idx, &self.choice)?;
                Ok(report(&name, format!("equal = {}, composition steps = {:?}", r.equal, r.steps), Some(r.passed()), json!({"equal": r.equal, "steps": r.steps})))
            }
            "corollary2" => {
                let idx: Vec<usize> = args.iter().map(|h| self.function_index(h)).collect::<Result<_>>()?;
                let ok = symmetric(fam, &idx, &self.choice)?;
                Ok(report(&name, format!("mixed locus symmetric under {} permutations", permutations(idx.len()).len()), Some(ok), json!({})))
            }
            "corollary3" => {
                let idx: Vec<usize> = args.iter().map(|h| self.function_index(h)).collect::<Result<_>>()?;
                let ok = verify_corollary3(fam, idx[0], &idx[1..], &self.choice)?;
                Ok(report(&name, format!("mixed locus of differences vanishes: {ok}"), Some(ok), json!({})))
            }
            "prop3" => {
                let [h, x, psi] = args else {
                    return Err(Error::invalid("verify prop3 takes a function, a cycle and a form"));
                };
                let (lhs, rhs) = self.windowed(fam)?.prop3_identity(self.function_index(h)?, self.cycle(x)?, self.form(psi)?, &self.choice)?;
                Ok(prop3_report(&name, &lhs, &rhs))
            }
            "prop1" => {
                let [x] = args else {
                    return Err(Error::invalid("verify prop1 takes one cycle"));
                };
                prop1_report(fam, self.cycle(x)?, &name)
            }
            "lemma2" => {
                let [x, psi] = args else {
                    return Err(Error::invalid("verify lemma2 takes a cycle and a form"));
                };
                let v = self.windowed(fam)?.closedness_check(self.cycle(x)?, self.form(psi)?)?;
                Ok(report(&name, format!("<{x}, d{psi}> = {v}"), Some(v == int(0)), json!({"value": rational(&v)})))
            }
            "balancing" => {
                let [x] = args else {
                    return Err(Error::invalid("verify balancing takes one cycle"));
                };
                let ok = ctx.is_cycle(self.cycle(x)?)?;
                Ok(report(&name, format!("boundary vanishes: {ok}"), Some(ok), json!({})))
            }
            _ => Err(Error::invalid(format!("unknown verification '{what}'"))),
        }
    }

    /// Runs a verification on an instance drawn from the seed.
    fn verify_generated(&self, what: &str) -> Result<Value> {
        let mut rng = gen::rng(self.opts.seed);
        let name = format!("verify {what}");
        let choice = &self.choice;
        let radius = self.radius.clone();
        let instance = |fam: &ConstructiveFamily<Q>| json!({"generated": family_summary(fam)});
        match what {
            "corollary1" | "corollary2" | "lemma2" | "balancing" | "prop1" => {
                let fam: ConstructiveFamily<Q> = gen::random_family(&mut rng, 2, 2, 3, 0.5)?;
                let extra = instance(&fam);
                let (ok, summary) = match what {
                    "corollary1" => {
                        let r = verify_corollary1(&fam, &[0, 1], choice)?;
                        (r.passed(), format!("equal = {}, composition steps = {:?}", r.equal, r.steps))
                    }
                    "corollary2" => (symmetric(&fam, &[0, 1], choice)?, "mixed locus symmetric".to_string()),
                    "lemma2" => {
                        let x = crate::corner::corner_locus_function(&fam, 0)?;
                        let psi = gen::random_test_form(&mut rng, 4, x.dim - x.degree - 1, 1, radius)?;
                        let v = Windowed::new(&fam, Window::new(self.radius.clone())?)?.closedness_check(&x, &psi)?;
                        (v == int(0), format!("<X, dψ> = {v}"))
                    }
                    "balancing" => {
                        let x = crate::corner::corner_locus_function(&fam, 0)?;
                        (Ctx::from(&fam).is_cycle(&x)?, "boundary of the corner locus vanishes".to_string())
                    }
                    _ => {
                        let x = fundamental_cycle(&fam, &PPHPolynomial::new(Poly::var(0).mul(&Poly::var(1)), 2)?);
                        let r = prop1_report(&fam, &x, &name)?;
                        return Ok(merge(r, extra));
                    }
                };
                Ok(report(&name, summary, Some(ok), extra))
            }
            "corollary3" => {
                let h1: PLExpr<Q> = gen::random_tropical(&mut rng, 4, 2, 0.5);
                let h2: PLExpr<Q> = gen::random_tropical(&mut rng, 4, 2, 0.5);
                let h = PLExpr::Max(vec![h1.clone(), h2.clone()]);
                let fam = ConstructiveFamily::build(2, vec![h1, h2, h])?;
                let ok = verify_corollary3(&fam, 2, &[0, 1], choice)?;
                Ok(report(&name, format!("mixed locus of differences vanishes: {ok}"), Some(ok), instance(&fam)))
            }
            "prop3" => {
                let fam: ConstructiveFamily<Q> = gen::random_family(&mut rng, 1, 2, 3, 1.0)?;
                let x = fundamental_cycle(&fam, &PPHPolynomial::new(Poly::one(), 2)?);
                let psi = gen::random_test_form(&mut rng, 2, 0, 2, radius)?;
                let (lhs, rhs) = Windowed::new(&fam, Window::new(self.radius.clone())?)?.prop3_identity(0, &x, &psi, choice)?;
                Ok(merge(prop3_report(&name, &lhs, &rhs), instance(&fam)))
            }
            _ => Err(Error::invalid(format!("unknown verification '{what}'"))),
        }
    }

    fn oracle(&self, args: &[String]) -> Result<Value> {
        let fam = self.fam()?;
        let mut hs = Vec::new();
        let mut form = None;
        for a in args {
            if self.forms.contains_key(a) {
                form = Some(self.form(a)?.clone());
            } else {
                hs.push(self.function_index(a)?);
            }
        }
        if hs.is_empty() || hs.len() > fam.n {
            return Err(Error::invalid(format!("oracle needs between 1 and n = {} functions", fam.n)));
        }
        let phi = match form {
            Some(f) => f,
            None => TestForm::bump(fam.dim(), 1, self.radius.clone())?,
        };
        let samples: Vec<Sampled> = hs.iter().map(|&i| sampled(&self.exprs[i])).collect();
        let params = OracleParams { grid: self.opts.oracle_grid, width: 2.0 * self.opts.oracle_grid };
        let rep = mollified_oracle(&samples, &phi, params)?;
        let exact = self.windowed(fam)?.pair(&mixed_corner_locus(fam, &hs, &self.choice)?, &phi)?;
        let e: f64 = exact.to_f64_lossy();
        let ok = (rep.value - e).abs() <= (0.02 * e.abs()).max(1e-3);
        let summary = format!("oracle {:.6} ± {:.2e}, exact {exact} ≈ {e:.6}", rep.value, rep.error);
        Ok(report(
            "oracle",
            summary,
            Some(ok),
            json!({"value": rep.value, "error_estimate": rep.error, "exact": rational(&exact), "grid": params.grid, "width": params.width}),
        ))
    }

    fn export(&self, target: &str, args: &[String]) -> Result<Value> {
        let fam = self.fam()?;
        let data = match target {
            "complex" => complex_json(&fam.complex),
            "family" => family_json(fam, &self.names, &self.printed),
            "chain" => {
                let [x] = args else {
                    return Err(Error::invalid("export chain takes one cycle"));
                };
                chain_json(self.cycle(x)?, &self.names)
            }
            _ => {
                let clipped = fam.complex.clip_to_window(&Window::new(self.radius.clone())?)?;
                match args {
                    [] => plot_json(&clipped, None),
                    [x] => plot_json(&clipped, Some((self.cycle(x)?, &self.names))),
                    _ => return Err(Error::invalid("export plot takes at most one cycle")),
                }
            }
        };
        Ok(report(&format!("export {target}"), format!("{} data", data["format"].as_str().unwrap_or("")), None, json!({"data": data})))
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let Value::Object(m) = b {
        for (k, x) in m {
            a[k] = x;
        }
    }
    a
}

fn family_summary(fam: &ConstructiveFamily<Q>) -> Value {
    json!({"n": fam.n, "functions": fam.functions.len(), "cells": fam.complex.cells.len()})
}

fn prop3_report(name: &str, lhs: &Q, rhs: &Q) -> Value {
    report(name, format!("lhs = {lhs}, rhs = {rhs}"), Some(lhs == rhs), json!({"lhs": rational(lhs), "rhs": rational(rhs), "equal": lhs == rhs}))
}

/// `D_c X` under two extension choices, and its frames on complex directions.
fn prop1_report(fam: &ConstructiveFamily<Q>, x: &Chain<Q>, name: &str) -> Result<Value> {
    let ctx = Ctx::from(fam);
    let a = dc(fam, x, &ExtensionChoice::SmallestTop)?;
    let b = dc(fam, x, &ExtensionChoice::LargestTop)?;
    let same = ctx.equal(&a, &b)?;
    let directions = ctx.validate_p_cycle(&ctx.prune(&a)?)?.complex_directions_ok;
    Ok(report(
        name,
        format!("independent of extension choice: {same}, vanishes on complex directions: {directions}"),
        Some(same && directions),
        json!({"independent": same, "complex_directions": directions}),
    ))
}

fn symmetric(fam: &ConstructiveFamily<Q>, idx: &[usize], choice: &ExtensionChoice) -> Result<bool> {
    let ctx = Ctx::from(fam);
    let base = mixed_corner_locus(fam, idx, choice)?;
    for p in permutations(idx.len()) {
        let perm: Vec<usize> = p.iter().map(|&i| idx[i]).collect();
        if !ctx.equal(&base, &mixed_corner_locus(fam, &perm, choice)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn build_env(script: &Script, opts: &Options) -> Result<Env> {
    let n = script.dim().ok_or_else(|| Error::invalid("the script must declare n"))?;
    let radius = opts.window.clone().or_else(|| script.window()).unwrap_or_else(|| int(1));
    let mut env_exprs: BTreeMap<String, PLExpr<Q>> = BTreeMap::new();
    let (mut names, mut printed, mut exprs) = (Vec::new(), Vec::new(), Vec::new());
    for (name, e) in script.functions() {
        let f = lower_pl(e, 2 * n, &env_exprs)?;
        env_exprs.insert(name.to_string(), f.clone());
        names.push(name.to_string());
        printed.push(e.to_string());
        exprs.push(f);
    }
    let fam = if exprs.is_empty() { None } else { Some(ConstructiveFamily::build(n, exprs.clone())?) };
    Ok(Env {
        n,
        radius,
        names,
        printed,
        exprs,
        fam,
        polys: BTreeMap::new(),
        forms: BTreeMap::new(),
        cycles: BTreeMap::new(),
        choice: ExtensionChoice::default(),
        opts: opts.clone(),
    })
}

impl Env {
    fn define(&mut self, s: &Stmt) -> Result<()> {
        match s {
            Stmt::Poly { name, expr } => {
                let p = {
                    let var = |e: &Expr| match e {
                        Expr::Name(n) => self.family_poly(n),
                        _ => Err(Error::invalid("coordinates are not allowed in family polynomials")),
                    };
                    lower_poly(expr, &var)?
                };
                self.polys.insert(name.clone(), p);
            }
            Stmt::Form { name, terms, bump } => {
                let dim = 2 * self.n;
                let degree = terms.first().map(|t| t.dx.len()).unwrap_or(0);
                let mut w = Form::zero(dim, degree)?;
                for t in terms {
                    let var = |e: &Expr| match e {
                        Expr::Coord(i) => Ok(Poly::var(*i)),
                        _ => Err(Error::invalid("form coefficients are polynomials in the coordinates")),
                    };
                    let c = lower_poly(&t.coeff, &var)?;
                    let basis = Form::basis(dim, &t.dx)?.to_poly_form().map_coeffs(|s: &Poly<Q>| s.mul(&c));
                    w = w.add(&basis)?;
                }
                self.forms.insert(name.clone(), TestForm::new(w, *bump, self.radius.clone())?);
            }
            Stmt::Cycle { name, def } => {
                let x = match def {
                    CycleDef::Fundamental(p) => {
                        let p = match p {
                            Some(p) => self.family_poly(p)?,
                            None => Poly::one(),
                        };
                        fundamental_cycle(self.fam()?, &self.pph(p)?)
                    }
                    CycleDef::CornerLocus { of, order } => self.corner(of, *order)?,
                    CycleDef::Mixed(hs) => self.mixed(hs)?,
                };
                self.cycles.insert(name.clone(), x);
            }
            _ => {}
        }
        Ok(())
    }
}

/// Runs every statement in order; stops at the first error.
pub fn run(script: &Script, opts: &Options) -> Outcome {
    let mut reports = Vec::new();
    let mut env = match build_env(script, opts) {
        Ok(e) => e,
        Err(e) => return Outcome { reports, error: Some(e) },
    };
    for s in &script.stmts {
        let r = match s {
            Stmt::Command(c) => env.exec(c).map(Some),
            _ => env.define(s).map(|_| None),
        };
        match r {
            Ok(Some(v)) => reports.push(v),
            Ok(None) => {}
            Err(e) => return Outcome { reports, error: Some(e) },
        }
    }
    Outcome { reports, error: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::script::parse;

    fn run_src(src: &str) -> Outcome {
        run(&parse(src).unwrap(), &Options::default())
    }

    #[test]
    fn pair_and_verify() {
        let out = run_src(
            "n = 1; h := max(0, x1); cycle c := corner-locus h; cycle f := fundamental;\n\
             form b := {1} bump 1; form area := {1} dx1^dy1; form psi := {x1 + y1^2} bump 2;\n\
             pair c b; pair f area; verify prop3 h f psi; verify balancing c",
        );
        assert_eq!(out.error, None);
        assert_eq!(out.reports[0]["value"], "4/3");
        assert_eq!(out.reports[1]["value"], "4");
        assert_eq!(out.exit_code(), 0);
    }

    #[test]
    fn degree_mismatch_exits_with_2() {
        let out = run_src("n = 1; h := max(0, x1); cycle c := corner-locus h; form area := {1} dx1^dy1; pair c area");
        assert_eq!(out.exit_code(), 2);
        assert_eq!(out.to_json(0)["error"]["kind"], "degree-mismatch");
    }

    #[test]
    fn generated_corollary3() {
        let out = run_src("n = 2; verify corollary3");
        assert_eq!(out.exit_code(), 0, "{:?}", out);
    }

    #[test]
    fn non_pl_function_is_rejected() {
        let out = run_src("n = 1; h := x1*y1");
        assert_eq!(out.exit_code(), 2);
    }
}

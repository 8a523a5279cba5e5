//! Script syntax: tokens, AST, parser and printer.
//!
//! ```text
//! n = 2;
//! window = 1/2;
//! h := max(0, x1, y1 - 1/2);
//! poly p := h^2 + 3*h*g;
//! form psi := {x1*y2 + 1} dx1^dy1 + {y1} dx2^dy2 bump 2;
//! cycle c := corner-locus h --order 2;
//! pair c psi;
//! verify prop3 h c psi;
//! ```

use std::fmt;

use crate::scalar::fmt_rational;
use crate::{Error, Result, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    /// Coordinate index in `(x1, y1, x2, y2, …)` order.
    Coord(usize),
    Name(String),
    Max(Vec<Expr>),
    Min(Vec<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormTerm {
    pub coeff: Expr,
    /// Coordinate indices of the differentials, in written order.
    pub dx: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CycleDef {
    Fundamental(Option<String>),
    CornerLocus { of: String, order: Option<usize> },
    Mixed(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Refine,
    CornerLocus { of: String, order: Option<usize> },
    Mixed(Vec<String>),
    Pair { cycle: String, form: String },
    Verify { what: String, args: Vec<String> },
    Oracle(Vec<String>),
    Export { target: String, args: Vec<String> },
}

pub const VERIFY_KINDS: [&str; 7] = ["corollary1", "corollary2", "corollary3", "prop3", "prop1", "lemma2", "balancing"];

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Dim(usize),
    Window(Q),
    Function { name: String, expr: Expr },
    Poly { name: String, expr: Expr },
    Form { name: String, terms: Vec<FormTerm>, bump: u32 },
    Cycle { name: String, def: CycleDef },
    Command(Command),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Function,
    Poly,
    Form,
    Cycle,
}

impl Script {
    pub fn dim(&self) -> Option<usize> {
        self.stmts.iter().find_map(|s| if let Stmt::Dim(n) = s { Some(*n) } else { None })
    }

    pub fn window(&self) -> Option<Q> {
        self.stmts.iter().find_map(|s| if let Stmt::Window(r) = s { Some(r.clone()) } else { None })
    }

    pub fn kind_of(&self, name: &str) -> Option<Kind> {
        self.stmts.iter().find_map(|s| match s {
            Stmt::Function { name: n, .. } if n == name => Some(Kind::Function),
            Stmt::Poly { name: n, .. } if n == name => Some(Kind::Poly),
            Stmt::Form { name: n, .. } if n == name => Some(Kind::Form),
            Stmt::Cycle { name: n, .. } if n == name => Some(Kind::Cycle),
            _ => None,
        })
    }

    pub fn functions(&self) -> Vec<(&str, &Expr)> {
        self.stmts
            .iter()
            .filter_map(|s| if let Stmt::Function { name, expr } = s { Some((name.as_str(), expr)) } else { None })
            .collect()
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Flag(String),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMS: [&str; 14] = [":=", "=", ";", ",", "(", ")", "{", "}", "+", "-", "*", "^", "/", "\n"];

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let advance = |i: &mut usize, k: usize, line: &mut usize, col: &mut usize| {
            for _ in 0..k {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, 1, &mut line, &mut col);
            }
            continue;
        }
        if c.is_whitespace() {
            advance(&mut i, 1, &mut line, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let v: num_bigint::BigInt = s.parse().map_err(|_| parse_err(start, "bad number"))?;
            out.push(Token { tok: Tok::Num(Q::from_integer(v)), line: start.0, col: start.1 });
            let k = j - i;
            advance(&mut i, k, &mut line, &mut col);
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let mut s: String = chars[i..j].iter().collect();
            if s == "corner" && chars[j..].iter().take(6).copied().eq("-locus".chars()) {
                j += 6;
                s.push_str("-locus");
            }
            out.push(Token { tok: Tok::Ident(s), line: start.0, col: start.1 });
            let k = j - i;
            advance(&mut i, k, &mut line, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2).is_some_and(|c| c.is_alphabetic()) {
            let mut j = i + 2;
            while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '-') {
                j += 1;
            }
            let s: String = chars[i + 2..j].iter().collect();
            if s.is_empty() {
                return Err(parse_err(start, "empty flag"));
            }
            out.push(Token { tok: Tok::Flag(s), line: start.0, col: start.1 });
            let k = j - i;
            advance(&mut i, k, &mut line, &mut col);
            continue;
        }
        let sym = SYMS.iter().find(|s| chars[i..].iter().take(s.len()).copied().eq(s.chars()));
        match sym {
            Some(s) => {
                out.push(Token { tok: Tok::Sym(s), line: start.0, col: start.1 });
                advance(&mut i, s.len(), &mut line, &mut col);
            }
            None => return Err(parse_err(start, &format!("unexpected character '{c}'"))),
        }
    }
    Ok(out)
}

fn parse_err((line, col): (usize, usize), msg: &str) -> Error {
    Error::Parse { line, column: col, message: msg.to_string() }
}

/// `x3` → Some(4), `y1` → Some(1).
fn coordinate(s: &str) -> Option<usize> {
    let (head, tail) = s.split_at(1);
    let j: usize = tail.parse().ok().filter(|_| tail.chars().all(|c| c.is_ascii_digit()) && !tail.starts_with('0'))?;
    match head {
        "x" => Some(2 * (j - 1)),
        "y" => Some(2 * (j - 1) + 1),
        _ => None,
    }
}

fn differential(s: &str) -> Option<usize> {
    s.strip_prefix('d').and_then(coordinate)
}

const KEYWORDS: [&str; 16] = [
    "n", "window", "max", "min", "poly", "form", "cycle", "bump", "fundamental", "corner-locus", "mixed", "refine", "pair", "verify",
    "oracle", "export",
];

fn valid_name(s: &str) -> bool {
    !KEYWORDS.contains(&s) && coordinate(s).is_none() && differential(s).is_none() && !s.contains('-')
}

pub fn coordinate_name(i: usize) -> String {
    format!("{}{}", if i % 2 == 0 { 'x' } else { 'y' }, i / 2 + 1)
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    n: Option<usize>,
    names: Vec<(String, Kind)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> Error {
        parse_err(self.here(), msg)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{s}'")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err("expected a name")),
        }
    }

    fn number(&mut self) -> Result<Q> {
        let neg = self.eat("-");
        let Some(Tok::Num(p)) = self.peek().cloned() else {
            return Err(self.err("expected a number"));
        };
        self.pos += 1;
        let v = if self.eat("/") {
            let at = self.here();
            let Some(Tok::Num(q)) = self.next() else {
                return Err(parse_err(at, "expected a denominator"));
            };
            if q == Q::from_integer(0.into()) {
                return Err(parse_err(at, "zero denominator"));
            }
            p / q
        } else {
            p
        };
        Ok(if neg { -v } else { v })
    }

    fn small_int(&mut self) -> Result<usize> {
        let at = self.here();
        let v = self.number()?;
        if !v.is_integer() || v < Q::from_integer(0.into()) || v > Q::from_integer(64.into()) {
            return Err(parse_err(at, "expected a small nonnegative integer"));
        }
        Ok(v.to_integer().try_into().expect("checked range"))
    }

    fn end_stmt(&mut self) -> Result<()> {
        if self.peek().is_none() || self.eat(";") {
            Ok(())
        } else {
            Err(self.err("expected ';'"))
        }
    }

    fn declare(&mut self, name: &str, kind: Kind, at: (usize, usize)) -> Result<()> {
        if !valid_name(name) {
            return Err(parse_err(at, &format!("'{name}' cannot be used as a name")));
        }
        if self.names.iter().any(|(n, _)| n == name) {
            return Err(parse_err(at, &format!("'{name}' is already defined")));
        }
        self.names.push((name.to_string(), kind));
        Ok(())
    }

    fn lookup(&self, name: &str, at: (usize, usize), want: &[Kind]) -> Result<()> {
        match self.names.iter().find(|(n, _)| n == name) {
            None => Err(parse_err(at, &format!("unknown name '{name}'"))),
            Some((_, k)) if !want.contains(k) => Err(parse_err(at, &format!("'{name}' is a {k:?}, expected one of {want:?}"))),
            _ => Ok(()),
        }
    }

    fn check_coord(&self, i: usize, at: (usize, usize)) -> Result<()> {
        match self.n {
            None => Err(parse_err(at, "coordinates used before 'n = …'")),
            Some(n) if i >= 2 * n => Err(parse_err(at, &format!("coordinate {} exceeds n = {n}", coordinate_name(i)))),
            _ => Ok(()),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self, names: &[Kind], coords: bool) -> Result<Expr> {
        let mut e = self.term(names, coords)?;
        loop {
            if self.eat("+") {
                e = Expr::Add(Box::new(e), Box::new(self.term(names, coords)?));
            } else if self.eat("-") {
                e = Expr::Sub(Box::new(e), Box::new(self.term(names, coords)?));
            } else {
                return Ok(e);
            }
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self, names: &[Kind], coords: bool) -> Result<Expr> {
        let mut e = self.unary(names, coords)?;
        while self.eat("*") {
            e = Expr::Mul(Box::new(e), Box::new(self.unary(names, coords)?));
        }
        Ok(e)
    }

    // unary := '-' unary | power
    fn unary(&mut self, names: &[Kind], coords: bool) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary(names, coords)?)));
        }
        let base = self.atom(names, coords)?;
        if self.eat("^") {
            let k = self.small_int()?;
            return Ok(Expr::Pow(Box::new(base), k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self, names: &[Kind], coords: bool) -> Result<Expr> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(_)) => Ok(Expr::Num(self.number()?)),
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr(names, coords)?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Ident(s)) if s == "max" || s == "min" => {
                self.pos += 1;
                if !names.contains(&Kind::Function) {
                    return Err(parse_err(at, &format!("'{s}' is only allowed in function definitions")));
                }
                self.expect("(")?;
                if self.eat(")") {
                    return Err(parse_err(at, &format!("'{s}' needs at least one argument")));
                }
                let mut args = vec![self.expr(names, coords)?];
                while self.eat(",") {
                    args.push(self.expr(names, coords)?);
                }
                self.expect(")")?;
                Ok(if s == "max" { Expr::Max(args) } else { Expr::Min(args) })
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if let Some(i) = coordinate(&s) {
                    if !coords {
                        return Err(parse_err(at, "coordinates are not allowed here"));
                    }
                    self.check_coord(i, at)?;
                    return Ok(Expr::Coord(i));
                }
                self.lookup(&s, at, names)?;
                Ok(Expr::Name(s))
            }
            _ => Err(self.err("expected an expression")),
        }
    }

    fn form_terms(&mut self) -> Result<Vec<FormTerm>> {
        let mut terms = Vec::new();
        let mut degree = None;
        loop {
            let at = self.here();
            self.expect("{")?;
            let coeff = self.expr(&[], true)?;
            self.expect("}")?;
            let mut dx = Vec::new();
            if let Some(Tok::Ident(s)) = self.peek().cloned() {
                if let Some(i) = differential(&s) {
                    self.pos += 1;
                    self.check_coord(i, at)?;
                    dx.push(i);
                    while self.eat("^") {
                        let at = self.here();
                        let s = self.ident()?;
                        let i = differential(&s).ok_or_else(|| parse_err(at, "expected a differential like dx1"))?;
                        self.check_coord(i, at)?;
                        if dx.contains(&i) {
                            return Err(parse_err(at, "repeated differential"));
                        }
                        dx.push(i);
                    }
                }
            }
            match degree {
                None => degree = Some(dx.len()),
                Some(d) if d != dx.len() => return Err(parse_err(at, "form terms of different degrees")),
                _ => {}
            }
            terms.push(FormTerm { coeff, dx });
            if !self.eat("+") {
                return Ok(terms);
            }
        }
    }

    fn names_until_end(&mut self, kinds: &[Kind]) -> Result<Vec<String>> {
        let mut out = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            let at = self.here();
            let s = self.ident()?;
            self.lookup(&s, at, kinds)?;
            out.push(s);
        }
        Ok(out)
    }

    fn order_flag(&mut self) -> Result<Option<usize>> {
        if let Some(Tok::Flag(f)) = self.peek() {
            if f == "order" {
                self.pos += 1;
                return Ok(Some(self.small_int()?));
            }
            return Err(self.err(&format!("unknown flag --{f}")));
        }
        Ok(None)
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let at = self.here();
        let head = self.ident()?;
        let fp = [Kind::Function, Kind::Poly];
        let st = match head.as_str() {
            "n" => {
                self.expect("=")?;
                if self.n.is_some() {
                    return Err(parse_err(at, "n is already declared"));
                }
                let n = self.small_int()?;
                if n == 0 {
                    return Err(parse_err(at, "n must be positive"));
                }
                self.n = Some(n);
                Stmt::Dim(n)
            }
            "window" => {
                self.expect("=")?;
                let r = self.number()?;
                if r <= Q::from_integer(0.into()) {
                    return Err(parse_err(at, "window radius must be positive"));
                }
                Stmt::Window(r)
            }
            "poly" => {
                let at = self.here();
                let name = self.ident()?;
                self.expect(":=")?;
                let expr = self.expr(&fp, false)?;
                self.declare(&name, Kind::Poly, at)?;
                Stmt::Poly { name, expr }
            }
            "form" => {
                let at = self.here();
                let name = self.ident()?;
                self.expect(":=")?;
                let terms = self.form_terms()?;
                let bump = if matches!(self.peek(), Some(Tok::Ident(s)) if s == "bump") {
                    self.pos += 1;
                    self.small_int()? as u32
                } else {
                    0
                };
                self.declare(&name, Kind::Form, at)?;
                Stmt::Form { name, terms, bump }
            }
            "cycle" => {
                let at = self.here();
                let name = self.ident()?;
                self.expect(":=")?;
                let kat = self.here();
                let kind = self.ident()?;
                let def = match kind.as_str() {
                    "fundamental" => CycleDef::Fundamental(self.names_until_end(&[Kind::Poly, Kind::Function])?.into_iter().next()),
                    "corner-locus" => {
                        let of = self.names_until_end(&fp)?;
                        let [of] = <[String; 1]>::try_from(of).map_err(|_| parse_err(kat, "corner-locus takes one name"))?;
                        CycleDef::CornerLocus { of, order: self.order_flag()? }
                    }
                    "mixed" => CycleDef::Mixed(self.names_until_end(&[Kind::Function])?),
                    _ => return Err(parse_err(kat, "expected fundamental, corner-locus or mixed")),
                };
                self.declare(&name, Kind::Cycle, at)?;
                Stmt::Cycle { name, def }
            }
            "refine" => Stmt::Command(Command::Refine),
            "corner-locus" => {
                let of = self.names_until_end(&fp)?;
                let [of] = <[String; 1]>::try_from(of).map_err(|_| parse_err(at, "corner-locus takes one name"))?;
                Stmt::Command(Command::CornerLocus { of, order: self.order_flag()? })
            }
            "mixed" => {
                let hs = self.names_until_end(&[Kind::Function])?;
                if hs.is_empty() {
                    return Err(parse_err(at, "mixed needs at least one function"));
                }
                Stmt::Command(Command::Mixed(hs))
            }
            "pair" => {
                let a = self.here();
                let cycle = self.ident()?;
                self.lookup(&cycle, a, &[Kind::Cycle])?;
                let a = self.here();
                let form = self.ident()?;
                self.lookup(&form, a, &[Kind::Form])?;
                Stmt::Command(Command::Pair { cycle, form })
            }
            "verify" => {
                let a = self.here();
                let what = self.ident()?;
                if !VERIFY_KINDS.contains(&what.as_str()) {
                    return Err(parse_err(a, &format!("unknown verification '{what}'")));
                }
                let args = self.names_until_end(&[Kind::Function, Kind::Poly, Kind::Form, Kind::Cycle])?;
                Stmt::Command(Command::Verify { what, args })
            }
            "oracle" => Stmt::Command(Command::Oracle(self.names_until_end(&[Kind::Function, Kind::Form])?)),
            "export" => {
                let a = self.here();
                let target = self.ident()?;
                if !["complex", "family", "chain", "plot"].contains(&target.as_str()) {
                    return Err(parse_err(a, "export target must be complex, family, chain or plot"));
                }
                let args = self.names_until_end(&[Kind::Cycle])?;
                Stmt::Command(Command::Export { target, args })
            }
            _ => {
                if !self.eat(":=") {
                    return Err(parse_err(at, &format!("unknown statement '{head}'")));
                }
                let expr = self.expr(&[Kind::Function], true)?;
                self.declare(&head, Kind::Function, at)?;
                Stmt::Function { name: head, expr }
            }
        };
        self.end_stmt()?;
        Ok(st)
    }
}

pub fn parse(src: &str) -> Result<Script> {
    let toks: Vec<Token> = lex(src)?.into_iter().filter(|t| t.tok != Tok::Sym("\n")).collect();
    let lines = src.lines().count().max(1);
    let end = (lines, src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1));
    let mut p = Parser { toks, pos: 0, end, n: None, names: Vec::new() };
    let mut stmts = Vec::new();
    while p.peek().is_some() {
        if p.eat(";") {
            continue;
        }
        stmts.push(p.stmt()?);
    }
    Ok(Script { stmts })
}

// ---------------------------------------------------------------- printer

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn wrap(e: &Expr, min: u8) -> String {
    if prec(e) < min {
        format!("({e})")
    } else {
        e.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) if *q < Q::from_integer(0.into()) => write!(f, "({})", fmt_rational(q)),
            Expr::Num(q) => write!(f, "{}", fmt_rational(q)),
            Expr::Coord(i) => write!(f, "{}", coordinate_name(*i)),
            Expr::Name(s) => write!(f, "{s}"),
            Expr::Max(a) | Expr::Min(a) => {
                let head = if matches!(self, Expr::Max(_)) { "max" } else { "min" };
                let args: Vec<String> = a.iter().map(|e| e.to_string()).collect();
                write!(f, "{head}({})", args.join(", "))
            }
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", wrap(a, 2), wrap(b, 3)),
            Expr::Neg(a) => write!(f, "-{}", wrap(a, 4)),
            Expr::Pow(a, k) => write!(f, "{}^{k}", wrap(a, 5)),
        }
    }
}

fn names(v: &[String]) -> String {
    v.iter().map(|s| format!(" {s}")).collect()
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = |o: &Option<usize>| o.map(|k| format!(" --order {k}")).unwrap_or_default();
        match self {
            Stmt::Dim(n) => write!(f, "n = {n};"),
            Stmt::Window(r) => write!(f, "window = {};", fmt_rational(r)),
            Stmt::Function { name, expr } => write!(f, "{name} := {expr};"),
            Stmt::Poly { name, expr } => write!(f, "poly {name} := {expr};"),
            Stmt::Form { name, terms, bump } => {
                let ts: Vec<String> = terms
                    .iter()
                    .map(|t| {
                        let dx: Vec<String> = t.dx.iter().map(|&i| format!("d{}", coordinate_name(i))).collect();
                        if dx.is_empty() {
                            format!("{{{}}}", t.coeff)
                        } else {
                            format!("{{{}}} {}", t.coeff, dx.join("^"))
                        }
                    })
                    .collect();
                write!(f, "form {name} := {}", ts.join(" + "))?;
                if *bump > 0 {
                    write!(f, " bump {bump}")?;
                }
                write!(f, ";")
            }
            Stmt::Cycle { name, def } => match def {
                CycleDef::Fundamental(p) => write!(f, "cycle {name} := fundamental{};", p.as_ref().map(|p| format!(" {p}")).unwrap_or_default()),
                CycleDef::CornerLocus { of, order: o } => write!(f, "cycle {name} := corner-locus {of}{};", order(o)),
                CycleDef::Mixed(hs) => write!(f, "cycle {name} := mixed{};", names(hs)),
            },
            Stmt::Command(c) => match c {
                Command::Refine => write!(f, "refine;"),
                Command::CornerLocus { of, order: o } => write!(f, "corner-locus {of}{};", order(o)),
                Command::Mixed(hs) => write!(f, "mixed{};", names(hs)),
                Command::Pair { cycle, form } => write!(f, "pair {cycle} {form};"),
                Command::Verify { what, args } => write!(f, "verify {what}{};", names(args)),
                Command::Oracle(args) => write!(f, "oracle{};", names(args)),
                Command::Export { target, args } => write!(f, "export {target}{};", names(args)),
            },
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scripts() {
        let s = parse("n = 1; h := max(0, x1); corner-locus h").unwrap();
        assert_eq!(s.stmts.len(), 3);
        assert!(matches!(&s.stmts[2], Stmt::Command(Command::CornerLocus { of, order: None }) if of == "h"));
        let s = parse("n = 1;\nh := max(0, x1, y1)").unwrap();
        assert_eq!(s.functions().len(), 1);
        let e = parse("n = 1;\nh := max()").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 6, .. }), "{e:?}");
        assert!(matches!(parse("n = 1; h := x2").unwrap_err(), Error::Parse { .. }));
        assert!(matches!(parse("n = 1; corner-locus g").unwrap_err(), Error::Parse { .. }));
    }

    #[test]
    fn print_round_trip() {
        let src = "n = 2; window = 1/2; h := max(0, x1 - 1/2*y2, -(x2 + 1)); g := min(x1, 2) + h;\n\
                   poly p := h^2 - 3*h*g; form psi := {x1*y2 + 1} dx1^dy1 + {-y1} dx2^dy2 bump 2;\n\
                   cycle c := corner-locus p --order 2; cycle m := mixed h g; cycle f := fundamental;\n\
                   pair c psi; verify prop3 h f psi; oracle h g; export plot c; refine";
        let s = parse(src).unwrap();
        let printed = s.to_string();
        assert_eq!(parse(&printed).unwrap(), s, "{printed}");
    }
}

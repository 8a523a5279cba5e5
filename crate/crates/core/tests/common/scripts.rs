//! Random well-formed script ASTs.

use pph_core::cli::script::{Command, CycleDef, Expr, FormTerm, Script, Stmt, VERIFY_KINDS};
use pph_core::Q;
use rand::seq::SliceRandom;
use rand::Rng;

fn num(rng: &mut impl Rng) -> Q {
    Q::new(rng.gen_range(0..=9).into(), rng.gen_range(1..=4).into())
}

/// `names` are usable as atoms; `coords` is the number of coordinates
/// available (0 for none); `pl` allows `max`/`min`.
fn expr(rng: &mut impl Rng, depth: u32, names: &[String], coords: usize, pl: bool) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        let choice = rng.gen_range(0..3);
        if choice == 1 && coords > 0 {
            return Expr::Coord(rng.gen_range(0..coords));
        }
        if choice == 2 && !names.is_empty() {
            return Expr::Name(names.choose(rng).unwrap().clone());
        }
        return Expr::Num(num(rng));
    }
    macro_rules! sub {
        () => {
            Box::new(expr(rng, depth - 1, names, coords, pl))
        };
    }
    match rng.gen_range(0..if pl { 7 } else { 5 }) {
        0 => Expr::Add(sub!(), sub!()),
        1 => Expr::Sub(sub!(), sub!()),
        2 => Expr::Mul(sub!(), sub!()),
        3 => Expr::Neg(sub!()),
        4 => Expr::Pow(sub!(), rng.gen_range(1..=3)),
        k => {
            let args = (0..rng.gen_range(1..=3)).map(|_| expr(rng, depth - 1, names, coords, pl)).collect();
            if k == 5 {
                Expr::Max(args)
            } else {
                Expr::Min(args)
            }
        }
    }
}

pub fn random_script(rng: &mut impl Rng) -> Script {
    let n = rng.gen_range(1..=2);
    let dim = 2 * n;
    let mut stmts = vec![Stmt::Dim(n)];
    if rng.gen_bool(0.5) {
        stmts.push(Stmt::Window(num(rng) + Q::from_integer(1.into())));
    }
    let (mut functions, mut polys, mut forms, mut cycles) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..rng.gen_range(1..=3) {
        let name = format!("h{i}");
        stmts.push(Stmt::Function { name: name.clone(), expr: expr(rng, 3, &functions, dim, true) });
        functions.push(name);
    }
    for i in 0..rng.gen_range(0..=2) {
        let name = format!("p{i}");
        let atoms: Vec<String> = functions.iter().chain(&polys).cloned().collect();
        stmts.push(Stmt::Poly { name: name.clone(), expr: expr(rng, 3, &atoms, 0, false) });
        polys.push(name);
    }
    for i in 0..rng.gen_range(0..=2) {
        let name = format!("psi{i}");
        let degree = rng.gen_range(0..=dim);
        let terms = (0..rng.gen_range(1..=3))
            .map(|_| {
                let mut dx: Vec<usize> = (0..dim).collect();
                dx.shuffle(rng);
                dx.truncate(degree);
                FormTerm { coeff: expr(rng, 2, &[], dim, false), dx }
            })
            .collect();
        stmts.push(Stmt::Form { name: name.clone(), terms, bump: rng.gen_range(0..=2) });
        forms.push(name);
    }
    let fp: Vec<String> = functions.iter().chain(&polys).cloned().collect();
    for i in 0..rng.gen_range(0..=3) {
        let name = format!("c{i}");
        let def = match rng.gen_range(0..3) {
            0 => CycleDef::Fundamental(if rng.gen_bool(0.5) { fp.choose(rng).cloned() } else { None }),
            1 => CycleDef::CornerLocus { of: fp.choose(rng).unwrap().clone(), order: rng.gen_bool(0.5).then(|| rng.gen_range(1..=3)) },
            _ => CycleDef::Mixed(functions.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect()),
        };
        stmts.push(Stmt::Cycle { name: name.clone(), def });
        cycles.push(name);
    }
    for _ in 0..rng.gen_range(0..=4) {
        let any: Vec<String> = fp.iter().chain(&forms).chain(&cycles).cloned().collect();
        let cmd = match rng.gen_range(0..7) {
            0 => Command::Refine,
            1 => Command::CornerLocus { of: fp.choose(rng).unwrap().clone(), order: rng.gen_bool(0.3).then(|| 2) },
            2 => Command::Mixed(vec![functions.choose(rng).unwrap().clone()]),
            3 if !cycles.is_empty() && !forms.is_empty() => {
                Command::Pair { cycle: cycles.choose(rng).unwrap().clone(), form: forms.choose(rng).unwrap().clone() }
            }
            4 => {
                let k = rng.gen_range(0..=2);
                Command::Verify { what: VERIFY_KINDS.choose(rng).unwrap().to_string(), args: any.choose_multiple(rng, k).cloned().collect() }
            }
            5 => Command::Oracle(functions.iter().take(1).chain(forms.iter().take(1)).cloned().collect()),
            _ => Command::Export {
                target: ["complex", "family", "chain", "plot"].choose(rng).unwrap().to_string(),
                args: cycles.choose_multiple(rng, 1).cloned().collect(),
            },
        };
        stmts.push(Stmt::Command(cmd));
    }
    Script { stmts }
}

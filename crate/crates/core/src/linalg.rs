//! Small dense exact linear algebra on row vectors.

use crate::scalar::Field;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref<S: Field>(rows: &[Vec<S>]) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut m: Vec<Vec<S>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let v = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<S: Field>(rows: &[Vec<S>]) -> usize {
    rref(rows).1.len()
}

pub fn det<S: Field>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = S::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return S::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = d * a[c][c].clone();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / a[c][c].clone();
            for j in c..n {
                let v = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - v;
            }
        }
    }
    d
}

/// Basis of the null space `{x : rows · x = 0}`.
pub fn nullspace<S: Field>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let (r, piv) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (row, &p) in r.iter().zip(&piv) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solve a square system; `None` when singular.
pub fn solve<S: Field>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Coordinates of `v` in a basis given in RREF with the stated pivots.
/// Assumes `v` lies in the span.
pub fn rref_coordinates<S: Field>(pivots: &[usize], v: &[S]) -> Vec<S> {
    pivots.iter().map(|&p| v[p].clone()).collect()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_out<S: Field>(basis: &[Vec<S>], v: &[S]) -> Vec<S> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let k = basis.len();
    let gram: Vec<Vec<S>> = (0..k)
        .map(|i| (0..k).map(|j| crate::scalar::dot(&basis[i], &basis[j])).collect())
        .collect();
    let rhs: Vec<S> = basis.iter().map(|b| crate::scalar::dot(b, v)).collect();
    let c = solve(&gram, &rhs).expect("basis is independent");
    let mut out = v.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        for (o, bj) in out.iter_mut().zip(b) {
            *o = o.clone() - ci.clone() * bj.clone();
        }
    }
    out
}

pub fn sub<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add<S: Field>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale<S: Field>(s: &S, a: &[S]) -> Vec<S> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Q;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_det() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(det(&a), int(0));
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&b), int(-1));
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 1, 0, 2], &[0, 1, 1, 1]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                assert_eq!(crate::scalar::dot(row, v), int(0));
            }
        }
    }

    #[test]
    fn projection_is_orthogonal() {
        let basis = m(&[&[1, 1, 0]]);
        let p = project_out(&basis, &m(&[&[3, 1, 5]])[0]);
        assert_eq!(crate::scalar::dot(&p, &basis[0]), int(0));
        assert_eq!(p[2], int(5));
    }
}

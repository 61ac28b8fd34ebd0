//! Small exact linear algebra over `Q` and `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Vector = Vec<i64>;
pub type QVector = Vec<BigRational>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn qdot(a: &[BigRational], b: &[i64]) -> BigRational {
    a.iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * BigInt::from(*y))
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(m: &mut [QVector]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..cols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

fn to_q(rows: &[Vector]) -> Vec<QVector> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

pub fn rank(rows: &[Vector]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(&mut to_q(rows)).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `cols` columns.
pub fn kernel(rows: &[QVector], cols: usize) -> Vec<QVector> {
    let mut m: Vec<QVector> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            x
        })
        .collect()
}

/// Some solution of `A x = b`, free variables set to zero.
pub fn solve(rows: &[QVector], b: &[BigRational]) -> Option<QVector> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<QVector> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[r][cols].clone();
    }
    Some(x)
}

/// Scales a rational vector to a primitive integer vector.
pub fn primitive(v: &[BigRational]) -> Vector {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            i64::try_from(y).expect("small vector")
        })
        .collect()
}

/// A normal `n` in `span(basis)` with `n·f = 0` for every `f` in `face`,
/// oriented so that `n·basis[i] >= 0`. `face` must span a hyperplane of
/// `span(basis)`.
pub fn normal_in_span(basis: &[Vector], face: &[&Vector]) -> Vector {
    let gram: Vec<QVector> = face
        .iter()
        .map(|f| basis.iter().map(|b| q(dot(b, f))).collect())
        .collect();
    let ker = kernel(&gram, basis.len());
    debug_assert_eq!(ker.len(), 1, "face is not a hyperplane of the span");
    let c = &ker[0];
    let dim = basis[0].len();
    let n: QVector = (0..dim)
        .map(|k| {
            c.iter()
                .zip(basis)
                .fold(BigRational::zero(), |acc, (ci, b)| acc + ci * BigInt::from(b[k]))
        })
        .collect();
    let mut n = primitive(&n);
    if basis.iter().any(|b| dot(&n, b) < 0) {
        n.iter_mut().for_each(|x| *x = -*x);
    }
    n
}

/// Smith normal form data of an `n × k` integer matrix `M` of rank `k`:
/// invariant factors `d` and the column transform `C` (unimodular, `k × k`)
/// with `P M C = diag(d)` for some unimodular `P`.
pub struct Smith {
    pub factors: Vec<i128>,
    pub cols: Vec<Vec<i128>>,
}

fn overflow() -> Error {
    Error::InvalidFan("integer overflow in lattice computation".into())
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or_else(overflow)
}

/// Smith form of the matrix whose columns are `vectors`.
pub fn smith(vectors: &[Vector]) -> Result<Smith> {
    let k = vectors.len();
    let n = vectors.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|r| vectors.iter().map(|v| v[r] as i128).collect())
        .collect();
    let mut c: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();

    let col_op = |m: &mut Vec<Vec<i128>>, c: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| -> Result<()> {
        for row in m.iter_mut().chain(c.iter_mut()) {
            row[dst] = ck(row[dst].checked_sub(ck(f.checked_mul(row[src]))?))?;
        }
        Ok(())
    };
    let row_op = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| -> Result<()> {
        for j in 0..m[dst].len() {
            m[dst][j] = ck(m[dst][j].checked_sub(ck(f.checked_mul(m[src][j]))?))?;
        }
        Ok(())
    };
    let swap_cols = |m: &mut Vec<Vec<i128>>, c: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut().chain(c.iter_mut()) {
            row.swap(a, b);
        }
    };

    for t in 0..k {
        loop {
            // pivot: smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..n {
                for j in t..k {
                    if m[r][j] != 0 && best.is_none_or(|(br, bj)| m[r][j].abs() < m[br][bj].abs()) {
                        best = Some((r, j));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                return Err(Error::InvalidFan("cone generators are linearly dependent".into()));
            };
            m.swap(t, pr);
            swap_cols(&mut m, &mut c, t, pc);
            let p = m[t][t];
            let mut clean = true;
            for r in t + 1..n {
                let f = m[r][t] / p;
                if f != 0 {
                    row_op(&mut m, r, t, f)?;
                }
                clean &= m[r][t] == 0;
            }
            for j in t + 1..k {
                let f = m[t][j] / p;
                if f != 0 {
                    col_op(&mut m, &mut c, j, t, f)?;
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility condition
            let bad = (t + 1..n).find_map(|r| (t + 1..k).find(|&j| m[r][j] % p != 0).map(|j| (r, j)));
            match bad {
                Some((r, _)) => {
                    for j in 0..k {
                        m[t][j] = ck(m[t][j].checked_add(m[r][j]))?;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for row in m.iter_mut() {
                row[t] = -row[t];
            }
            for row in c.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    Ok(Smith {
        factors: (0..k).map(|t| m[t][t]).collect(),
        cols: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.iter().all(|r| r.iter().zip(v).map(|(x, y)| x * y).sum::<BigRational>().is_zero()));
        }
        let x = solve(&[vec![q(1), q(0)], vec![q(1), q(2)]], &[q(1), q(1)]).unwrap();
        assert_eq!(x, vec![q(1), q(0)]);
        assert!(solve(&[vec![q(1)], vec![q(1)]], &[q(1), q(2)]).is_none());
    }

    #[test]
    fn smith_factors() {
        let s = smith(&[vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(s.factors, vec![1, 2]);
        let s = smith(&[vec![2, 0, 0], vec![0, 3, 0]]).unwrap();
        assert_eq!(s.factors.iter().product::<i128>(), 6);
        assert_eq!(s.factors[0], 1);
        let s = smith(&[vec![1, 1, 1]]).unwrap();
        assert_eq!(s.factors, vec![1]);
    }

    #[test]
    fn normals() {
        let basis = vec![vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(normal_in_span(&basis, &[&basis[0]]), vec![0, 1, 0]);
        assert_eq!(primitive(&[q(2), q(4)]), vec![1, 2]);
    }
}

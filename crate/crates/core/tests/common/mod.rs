//! Shared fixtures: a brute-force lattice-point oracle, random cones and
//! smooth complete fans, random classes.
#![allow(dead_code)]

use std::collections::BTreeMap;

use motivic_core::kgroup::{parse_class, KClass, VarietyDb};
use motivic_core::lring::{LefschetzPoly, LefschetzRational};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, x)| *x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

/// `adj(M)` with `M` given by columns `cols`: `adj · M = det · I`.
fn adjugate_of_columns(cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cols.len();
    // row-major M with M[r][c] = cols[c][r]
    let m: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det(&minor)
                })
                .collect()
        })
        .collect()
}

fn to_big(x: Rational64) -> BigRational {
    BigRational::new((*x.numer()).into(), (*x.denom()).into())
}

/// Coordinates of `n` in the basis whose adjugate is `adj`.
fn coords(adj: &[Vec<i64>], d: i64, n: &[i64]) -> Vec<Rational64> {
    adj.iter()
        .map(|row| Rational64::new(row.iter().zip(n).map(|(a, x)| a * x).sum(), d))
        .collect()
}

fn for_each_point(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let k = lo.len();
    let mut p = lo.to_vec();
    loop {
        f(&p);
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            if p[i] < hi[i] {
                p[i] += 1;
                break;
            }
            p[i] = lo[i];
            i += 1;
        }
    }
}

/// Counts lattice points `n` of the full-dimensional simplicial cone on
/// `rays` (closed or open) by `φ(n) = Σ λ_i w_i`, for `φ(n) <= top`.
pub fn cone_points(rays: &[Vec<i64>], weights: &[Rational64], top: i64, interior: bool) -> BTreeMap<BigRational, BigInt> {
    let dim = rays.len();
    let d = det(&rays.iter().map(|c| c.to_vec()).collect::<Vec<_>>());
    assert!(d != 0);
    let adj = adjugate_of_columns(rays);
    let top_r = Rational64::from_integer(top);
    // the slice φ <= top is the simplex conv(0, top/w_i · v_i)
    let mut lo = vec![0i64; dim];
    let mut hi = vec![0i64; dim];
    for (v, w) in rays.iter().zip(weights) {
        let s = top_r / w;
        for k in 0..dim {
            let x = s * Rational64::from_integer(v[k]);
            lo[k] = lo[k].min(x.floor().to_integer());
            hi[k] = hi[k].max(x.ceil().to_integer());
        }
    }
    let mut out: BTreeMap<BigRational, BigInt> = BTreeMap::new();
    for_each_point(&lo, &hi, |n| {
        let lam = coords(&adj, d, n);
        let inside = lam
            .iter()
            .all(|l| if interior { *l > Rational64::from_integer(0) } else { *l >= Rational64::from_integer(0) });
        if !inside {
            return;
        }
        let phi: Rational64 = lam.iter().zip(weights).map(|(l, w)| l * w).sum();
        if phi <= top_r {
            *out.entry(to_big(phi)).or_default() += 1;
        }
    });
    out
}

/// Counts all lattice points of `Z^rank` by the piecewise linear function
/// equal to `1` on every ray, for a complete simplicial fan given by its
/// maximal cones (as ray vectors).
pub fn complete_fan_points(max_cones: &[Vec<Vec<i64>>], top: i64) -> BTreeMap<BigRational, BigInt> {
    let rank = max_cones[0].len();
    let m = max_cones.iter().flatten().flatten().map(|x| x.abs()).max().unwrap();
    let bound = top * m;
    let prepared: Vec<(Vec<Vec<i64>>, i64)> = max_cones
        .iter()
        .map(|c| (adjugate_of_columns(c), det(c)))
        .collect();
    let mut out: BTreeMap<BigRational, BigInt> = BTreeMap::new();
    for_each_point(&vec![-bound; rank], &vec![bound; rank], |n| {
        let phi = prepared
            .iter()
            .map(|(adj, d)| coords(adj, *d, n))
            .find(|lam| lam.iter().all(|l| *l >= Rational64::from_integer(0)))
            .map(|lam| lam.iter().sum::<Rational64>())
            .expect("fan is complete");
        if phi <= Rational64::from_integer(top) {
            *out.entry(to_big(phi)).or_default() += 1;
        }
    });
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn primitive(v: Vec<i64>) -> Vec<i64> {
    let g = v.iter().fold(0, |g, x| gcd(g, *x));
    v.into_iter().map(|x| x / g).collect()
}

/// A full-dimensional simplicial cone of rank `1..=3` with `|det| <= 50`.
pub fn random_simplicial_cone(r: &mut impl Rng) -> Vec<Vec<i64>> {
    let rank = r.gen_range(1..=3usize);
    let span = match rank {
        1 => return vec![vec![1]],
        2 => 5,
        _ => 2,
    };
    loop {
        let rays: Vec<Vec<i64>> = (0..rank)
            .map(|_| loop {
                let v: Vec<i64> = (0..rank).map(|_| r.gen_range(-span..=span)).collect();
                if v.iter().any(|x| *x != 0) {
                    break primitive(v);
                }
            })
            .collect();
        let d = det(&rays).abs();
        if d != 0 && d <= 50 {
            return rays;
        }
    }
}

/// A fan as ray vectors and maximal cones (ray indices).
#[derive(Clone, Debug)]
pub struct RawFan {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

impl RawFan {
    pub fn cone_vectors(&self) -> Vec<Vec<Vec<i64>>> {
        self.cones
            .iter()
            .map(|c| c.iter().map(|&i| self.rays[i].clone()).collect())
            .collect()
    }

    /// Star subdivision at the sum of the rays of `face`.
    fn star(&mut self, face: &[usize]) {
        let v: Vec<i64> = (0..self.rank)
            .map(|k| face.iter().map(|&i| self.rays[i][k]).sum())
            .collect();
        let new = self.rays.len();
        self.rays.push(v);
        let mut cones = Vec::new();
        for c in &self.cones {
            if !face.iter().all(|i| c.contains(i)) {
                cones.push(c.clone());
                continue;
            }
            for &drop in face {
                let mut d: Vec<usize> = c.iter().copied().filter(|&i| i != drop).collect();
                d.push(new);
                d.sort_unstable();
                cones.push(d);
            }
        }
        self.cones = cones;
    }

    fn transform(&mut self, m: &[Vec<i64>]) {
        for v in &mut self.rays {
            *v = (0..self.rank).map(|i| (0..self.rank).map(|j| m[i][j] * v[j]).sum()).collect();
        }
    }
}

fn product(a: &RawFan, b: &RawFan) -> RawFan {
    let rank = a.rank + b.rank;
    let mut rays: Vec<Vec<i64>> = a
        .rays
        .iter()
        .map(|v| v.iter().copied().chain(std::iter::repeat(0).take(b.rank)).collect())
        .collect();
    rays.extend(b.rays.iter().map(|v| std::iter::repeat(0).take(a.rank).chain(v.iter().copied()).collect()));
    let off = a.rays.len();
    let cones = a
        .cones
        .iter()
        .flat_map(|ca| {
            b.cones.iter().map(move |cb| ca.iter().copied().chain(cb.iter().map(|i| i + off)).collect())
        })
        .collect();
    RawFan { rank, rays, cones }
}

pub fn projective_fan(n: usize) -> RawFan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    rays.push(vec![-1; n]);
    let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
    RawFan { rank: n, rays, cones }
}

fn unimodular(r: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..3 {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let f = r.gen_range(-1..=1);
        for k in 0..n {
            m[i][k] += f * m[j][k];
        }
    }
    m
}

/// A smooth complete fan of rank `1..=3`: a product of projective spaces,
/// a few star subdivisions, then a unimodular change of basis.
pub fn random_smooth_fan(r: &mut impl Rng) -> RawFan {
    let rank = if r.gen_bool(0.15) { 1 } else { r.gen_range(2..=3usize) };
    let mut parts: Vec<usize> = Vec::new();
    let mut left = rank;
    while left > 0 {
        let k = r.gen_range(1..=left);
        parts.push(k);
        left -= k;
    }
    let mut fan = parts
        .iter()
        .map(|&k| projective_fan(k))
        .reduce(|a, b| product(&a, &b))
        .unwrap();
    if rank >= 2 {
        for _ in 0..r.gen_range(0..=2) {
            let c = fan.cones.choose(r).unwrap().clone();
            let size = r.gen_range(2..=rank);
            let mut face = c.clone();
            face.shuffle(r);
            face.truncate(size);
            face.sort_unstable();
            fan.star(&face);
        }
    }
    let m = unimodular(r, rank);
    fan.transform(&m);
    fan
}

/// A random class over the standard catalog, as a rendered expression.
pub fn random_class_expr(r: &mut impl Rng, gens: &[&str]) -> String {
    let terms = r.gen_range(1..=4);
    let mut parts = Vec::new();
    for _ in 0..terms {
        let c = r.gen_range(-3..=3i64);
        let k = r.gen_range(-2..=3i64);
        let g = gens.choose(r).unwrap();
        parts.push(format!("({c})*L^{k}*[{g}]"));
    }
    let mut s = parts.join(" + ");
    if r.gen_bool(0.4) {
        let m = r.gen_range(1..=3);
        s = format!("inv(L^{m} - 1)*({s})");
    }
    s
}

pub fn random_class(r: &mut impl Rng, db: &VarietyDb, gens: &[&str]) -> KClass {
    parse_class(&random_class_expr(r, gens), db).unwrap()
}

/// A random Lefschetz rational with up to three denominator factors.
pub fn random_lr(r: &mut impl Rng) -> LefschetzRational {
    let num = LefschetzPoly::from_terms((0..r.gen_range(0..=4)).map(|_| (r.gen_range(-4..=6i64), r.gen_range(-5..=5i64))));
    let den = (0..r.gen_range(0..=3)).map(|_| r.gen_range(1..=4u32)).collect();
    LefschetzRational::new(num, den)
}

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::invariants::{gsca_symmetry_check, CheckReport};
use crate::lring::{BiPoly, BiRational, Direction, Exp2, LefschetzPoly, LefschetzRational};

use super::fan::{Cone, Fan};
use super::linalg::{dot, normal_in_span, rank, smith, Vector};
use super::support::SupportFunction;

/// Default bound on `|det|` of a simplicial cone before box enumeration is
/// refused.
pub const DEFAULT_DET_LIMIT: u64 = 1_000_000;

/// A rational function of `t`, stored in `w = t^(1/root)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenFun {
    root: i64,
    value: LefschetzRational,
}

impl ConeGenFun {
    pub fn one() -> Self {
        Self {
            root: 1,
            value: LefschetzRational::one(),
        }
    }

    pub fn zero() -> Self {
        Self {
            root: 1,
            value: LefschetzRational::zero(),
        }
    }

    pub fn root(&self) -> i64 {
        self.root
    }

    /// The value as a rational function of `w = t^(1/root)`.
    pub fn value(&self) -> &LefschetzRational {
        &self.value
    }

    fn lifted(&self, k: i64) -> LefschetzRational {
        if k == 1 {
            return self.value.clone();
        }
        LefschetzRational::new(
            self.value.numerator().dilate(k),
            self.value.denominator().iter().map(|&m| m * k as u32).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let root = self.root.lcm(&other.root);
        let value = &self.lifted(root / self.root) + &other.lifted(root / other.root);
        Self { root, value }
    }

    /// Coefficients of the expansion at `t = 0`, keyed by the exponent of
    /// `t`, for exponents `<= top`.
    pub fn series(&self, top: i64) -> BTreeMap<BigRational, BigInt> {
        let order = u32::try_from(top * self.root).unwrap_or(0);
        self.value
            .laurent_expand(Direction::AtZero, order)
            .terms()
            .map(|(e, c)| (BigRational::new(e.into(), self.root.into()), c.clone()))
            .collect()
    }

    /// Substitutes `t = (u^a v^b)^-1`.
    pub fn to_bi(&self, sig: Exp2) -> BiRational {
        let neg = (-sig.0, -sig.1);
        let num = BiPoly::from_lefschetz(self.value.numerator(), neg);
        let den = self
            .value
            .denominator()
            .iter()
            .map(|&m| (neg.0 * m as i64, neg.1 * m as i64))
            .collect();
        BiRational::new(num, den, self.root, sig)
    }
}

fn ratio_root(xs: &[BigRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn scaled(x: &BigRational, root: &BigInt) -> Result<i64> {
    (x * root)
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::InvalidSupport("support values out of range".into()))
}

/// Values `φ(b)` on the lattice points `b = Σ λ_i v_i`, `0 <= λ_i < 1`, of
/// the fundamental parallelepiped of a simplicial cone.
pub fn box_values(rays: &[Vector], weights: &[BigRational], det_limit: u64) -> Result<Vec<BigRational>> {
    let k = rays.len();
    if k == 0 {
        return Ok(vec![BigRational::zero()]);
    }
    let s = smith(rays)?;
    let det: i128 = s.factors.iter().product();
    if det as u128 > det_limit as u128 {
        return Err(Error::BoxLimit {
            det: u64::try_from(det).unwrap_or(u64::MAX),
            limit: det_limit,
        });
    }
    let big_d = s.factors.iter().fold(1i128, |acc, &d| acc.lcm(&d));
    // generator i of the group, as numerators over big_d
    let gens: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| s.cols[j][i] * (big_d / s.factors[i])).collect())
        .collect();
    let mut out = Vec::with_capacity(det as usize);
    let mut idx = vec![0i128; k];
    loop {
        let mut phi = BigRational::zero();
        for j in 0..k {
            let num: i128 = (0..k)
                .map(|i| idx[i] * gens[i][j])
                .sum::<i128>()
                .rem_euclid(big_d);
            phi += BigRational::new(BigInt::from(num), BigInt::from(big_d)) * &weights[j];
        }
        out.push(phi);
        // odometer over Π [0, d_i)
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < s.factors[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn genfun_from(exps: &[BigRational], weights: &[BigRational]) -> Result<ConeGenFun> {
    let mut all = exps.to_vec();
    all.extend_from_slice(weights);
    let root = ratio_root(&all);
    let mut num = LefschetzPoly::zero();
    for e in exps {
        num.add_term(scaled(e, &root)?, &BigInt::one());
    }
    let den: Vec<u32> = weights
        .iter()
        .map(|w| {
            scaled(w, &root).and_then(|m| {
                u32::try_from(m).map_err(|_| Error::InvalidSupport("support values out of range".into()))
            })
        })
        .collect::<Result<_>>()?;
    // 1/(1 - w^m) = -1/(w^m - 1)
    if den.len() % 2 == 1 {
        num = -num;
    }
    Ok(ConeGenFun {
        root: root.to_i64().expect("root fits"),
        value: LefschetzRational::new(num, den),
    })
}

fn check_weights(weights: &[BigRational]) -> Result<()> {
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidSupport("support must be positive on every ray".into()));
    }
    Ok(())
}

/// `Σ_{n ∈ σ} t^{φ(n)}` over the closed simplicial cone `σ`.
pub fn simplicial_closed(rays: &[Vector], weights: &[BigRational], det_limit: u64) -> Result<ConeGenFun> {
    check_weights(weights)?;
    let b = box_values(rays, weights, det_limit)?;
    genfun_from(&b, weights)
}

/// `Σ_{n ∈ σ°} t^{φ(n)}` over the relative interior, by reciprocity:
/// `t^{Σ w_i} Σ_box t^{-φ(b)} / ∏(1 - t^{w_i})`.
pub fn simplicial_interior(rays: &[Vector], weights: &[BigRational], det_limit: u64) -> Result<ConeGenFun> {
    check_weights(weights)?;
    let total: BigRational = weights.iter().sum();
    let b: Vec<BigRational> = box_values(rays, weights, det_limit)?
        .into_iter()
        .map(|x| &total - x)
        .collect();
    genfun_from(&b, weights)
}

/// Placing triangulation of the cone on `cone` (ray indices, inserted in
/// index order). Returns the maximal simplices.
pub fn placing_triangulation(rays: &[Vector], cone: &[usize]) -> Vec<Cone> {
    let mut order = cone.to_vec();
    order.sort_unstable();
    let Some((&first, rest)) = order.split_first() else {
        return vec![Vec::new()];
    };
    let mut simplices: Vec<Cone> = vec![vec![first]];
    let mut used = vec![rays[first].clone()];
    let mut dim = 1;
    for &i in rest {
        let v = &rays[i];
        used.push(v.clone());
        let new_dim = rank(&used);
        let mut added = Vec::new();
        if new_dim > dim {
            for s in &simplices {
                let mut t = s.clone();
                t.push(i);
                added.push(t);
            }
            simplices = added;
            dim = new_dim;
            continue;
        }
        let mut count: BTreeMap<Cone, usize> = BTreeMap::new();
        for s in &simplices {
            for x in s {
                let f: Cone = s.iter().copied().filter(|y| y != x).collect();
                *count.entry(f).or_default() += 1;
            }
        }
        for s in &simplices {
            let basis: Vec<Vector> = s.iter().map(|&j| rays[j].clone()).collect();
            for x in s {
                let f: Cone = s.iter().copied().filter(|y| y != x).collect();
                if count[&f] != 1 {
                    continue;
                }
                let face: Vec<&Vector> = f.iter().map(|&j| &rays[j]).collect();
                let n = normal_in_span(&basis, &face);
                if dot(&n, v) < 0 {
                    let mut t = f.clone();
                    t.push(i);
                    added.push(t);
                }
            }
        }
        simplices.extend(added);
    }
    simplices
}

/// `Σ_{n ∈ σ°∩N} t^{φ(n)}` for a cone of the fan.
///
/// Non-simplicial cones are triangulated; the relative interior of `σ` is
/// the disjoint union of the relative interiors of the simplices that do
/// not lie in a proper face of `σ`.
pub fn cone_genfun(fan: &Fan, cone: &[usize], support: &SupportFunction, det_limit: u64) -> Result<ConeGenFun> {
    if cone.is_empty() {
        return Ok(ConeGenFun::one());
    }
    let values = support.ray_values(fan, cone)?;
    let weight: BTreeMap<usize, BigRational> = cone.iter().copied().zip(values).collect();
    let piece = |tau: &[usize]| -> Result<ConeGenFun> {
        let rays = fan.vectors(tau);
        let w: Vec<BigRational> = tau.iter().map(|i| weight[i].clone()).collect();
        simplicial_interior(&rays, &w, det_limit)
    };
    if fan.is_simplicial(cone) {
        return piece(cone);
    }
    let facets = &fan
        .shape(cone)
        .ok_or_else(|| Error::InvalidFan(format!("{cone:?} is not a cone of the fan")))?
        .facets;
    let mut pieces: BTreeSet<Cone> = BTreeSet::new();
    for s in placing_triangulation(fan.rays(), cone) {
        for mask in 1u32..(1 << s.len()) {
            let tau: Cone = s
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            if !facets.iter().any(|f| tau.iter().all(|i| f.contains(i))) {
                pieces.insert(tau);
            }
        }
    }
    pieces
        .iter()
        .try_fold(ConeGenFun::zero(), |acc, tau| Ok(acc.add(&piece(tau)?)))
}

/// `(q - 1)^rank · Σ_σ Σ_{n∈σ°} q^{-φ(n)}` with `q = u^a v^b`.
pub fn toric_stringy_e(
    fan: &Fan,
    support: &SupportFunction,
    sig: Exp2,
    exec: Exec,
    det_limit: u64,
) -> Result<BiRational> {
    let parts = exec.try_map(fan.cones(), |c| cone_genfun(fan, c, support, det_limit))?;
    let sum = parts
        .iter()
        .fold(BiRational::zero(sig), |acc, g| &acc + &g.to_bi(sig));
    let q_1 = BiRational::from_poly(BiPoly::binomial(sig), sig);
    Ok(&sum * &q_1.pow(fan.rank() as u32))
}

/// The stringy symmetry `E(u,v) = (u^a v^b)^rank E(1/u, 1/v)` for a
/// complete fan.
pub fn toric_symmetry_check(
    fan: &Fan,
    support: &SupportFunction,
    sig: Exp2,
    exec: Exec,
    det_limit: u64,
) -> Result<CheckReport> {
    if !fan.is_complete() {
        return Err(Error::IncompleteFan);
    }
    let e = toric_stringy_e(fan, support, sig, exec, det_limit)?;
    Ok(gsca_symmetry_check(&e, fan.rank() as i64))
}

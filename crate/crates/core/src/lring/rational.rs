use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{forward_owned, LefschetzPoly};
use crate::error::{Error, Result};

/// A Laurent polynomial in `L` over a product of factors `(L^m - 1)`.
///
/// The denominator is kept as a sorted multiset of the exponents `m` and is
/// never expanded in storage.
#[derive(Clone, Debug, Default)]
pub struct LefschetzRational {
    num: LefschetzPoly,
    den: Vec<u32>,
}

/// Where a rational value is expanded as a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `1/(L^m - 1) = -(1 + L^m + L^2m + ...)`
    AtZero,
    /// `1/(L^m - 1) = L^-m + L^-2m + ...`
    AtInfinity,
}

impl LefschetzRational {
    pub fn new(num: LefschetzPoly, mut den: Vec<u32>) -> Self {
        assert!(den.iter().all(|&m| m > 0), "denominator factor L^0 - 1");
        den.sort_unstable();
        let mut out = Self { num, den };
        out.reduce();
        out
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        LefschetzPoly::one().into()
    }

    /// `1 / (L^m - 1)`
    pub fn inv_binomial(m: u32) -> Self {
        Self::new(LefschetzPoly::one(), vec![m])
    }

    pub fn numerator(&self) -> &LefschetzPoly {
        &self.num
    }

    /// Denominator exponents `m`, sorted; each stands for `L^m - 1`.
    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    /// The expanded denominator polynomial.
    pub fn denominator_poly(&self) -> LefschetzPoly {
        expand_den(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&LefschetzPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    /// Cancels denominator factors against the numerator by exact division.
    ///
    /// A factor `L^m - 1` is removed when it divides the numerator, and is
    /// lowered to `L^d - 1` (`d | m`) when `(L^m - 1)/(L^d - 1)` does.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.den.len() {
                let m = self.den[i];
                if let Some(q) = self.num.div_exact(&LefschetzPoly::binomial(m as i64)) {
                    self.num = q;
                    self.den.remove(i);
                    changed = true;
                    break;
                }
                if let Some((d, q)) = proper_divisors(m).into_iter().find_map(|d| {
                    let cyc = geometric_sum(m / d, d);
                    self.num.div_exact(&cyc).map(|q| (d, q))
                }) {
                    self.num = q;
                    self.den[i] = d;
                    self.den.sort_unstable();
                    changed = true;
                    break;
                }
            }
        }
    }

    /// Leading L-degree of the expansion at infinity.
    fn top_degree(&self) -> Option<i64> {
        let s: i64 = self.den.iter().map(|&m| m as i64).sum();
        self.num.degree().map(|d| d - s)
    }

    /// Largest `k` with this value in `F^k`: minus the leading L-degree of the
    /// expansion at `L = ∞`.
    pub fn filtration_index(&self) -> Result<i64> {
        self.top_degree().map(|d| -d).ok_or(Error::ZeroIndex)
    }

    /// `2^-index`, with `norm(0) = 0`.
    pub fn norm(&self) -> Norm {
        match self.filtration_index() {
            Ok(k) => Norm::Pow2(-k),
            Err(_) => Norm::Zero,
        }
    }

    /// Truncated series expansion.
    ///
    /// Polynomials are returned unchanged. Otherwise `AtZero` keeps the terms
    /// with exponent `<= order` and `AtInfinity` those with exponent
    /// `>= -order`.
    pub fn laurent_expand(&self, direction: Direction, order: u32) -> LefschetzPoly {
        if self.den.is_empty() {
            return self.num.clone();
        }
        let order = order as i64;
        match direction {
            Direction::AtZero => {
                let Some(v) = self.num.valuation() else {
                    return LefschetzPoly::zero();
                };
                let reach = order - v;
                if reach < 0 {
                    return LefschetzPoly::zero();
                }
                let series = inverse_series_at_zero(&self.den, reach as u64);
                (&self.num * &series).filter(|e| e <= order)
            }
            Direction::AtInfinity => {
                let Some(top) = self.num.degree() else {
                    return LefschetzPoly::zero();
                };
                let reach = top + order;
                if reach < 0 {
                    return LefschetzPoly::zero();
                }
                let series = inverse_series_at_infinity(&self.den, reach as u64);
                (&self.num * &series).filter(|e| e >= -order)
            }
        }
    }

    /// Multiplies by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    /// Brings two values over the smallest common multiset denominator and
    /// returns the adjusted numerators.
    pub(crate) fn common_den(
        a: (&LefschetzPoly, &[u32]),
        b: (&LefschetzPoly, &[u32]),
    ) -> (LefschetzPoly, LefschetzPoly, Vec<u32>) {
        let den = multiset_max(a.1, b.1);
        let na = a.0 * &expand_den(&multiset_diff(&den, a.1));
        let nb = b.0 * &expand_den(&multiset_diff(&den, b.1));
        (na, nb, den)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Text form used by the CLI: `(NUM) / ((L - 1)*(L^2 - 1))`.
    pub fn render(&self, var: &str) -> String {
        if self.den.is_empty() {
            return self.num.render(var);
        }
        let factors: Vec<String> = self
            .den
            .iter()
            .map(|&m| {
                if m == 1 {
                    format!("({var} - 1)")
                } else {
                    format!("({var}^{m} - 1)")
                }
            })
            .collect();
        if factors.len() == 1 {
            format!("({}) / {}", self.num.render(var), factors[0])
        } else {
            format!("({}) / ({})", self.num.render(var), factors.join("*"))
        }
    }
}

/// Multiset union taking the larger multiplicity of each element.
pub(crate) fn multiset_max(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                out.push(*x);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                out.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                out.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// `a - b` for sorted multisets with `b ⊆ a`.
pub(crate) fn multiset_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut j = 0;
    for x in a {
        if j < b.len() && b[j] == *x {
            j += 1;
        } else {
            out.push(*x);
        }
    }
    out
}

pub(crate) fn expand_den(den: &[u32]) -> LefschetzPoly {
    den.iter().fold(LefschetzPoly::one(), |acc, &m| {
        &acc * &LefschetzPoly::binomial(m as i64)
    })
}

fn proper_divisors(m: u32) -> Vec<u32> {
    (1..m).filter(|d| m % d == 0).collect()
}

/// `1 + L^d + ... + L^{(k-1)d}`
fn geometric_sum(k: u32, d: u32) -> LefschetzPoly {
    LefschetzPoly::from_terms((0..k as i64).map(|i| (i * d as i64, 1)))
}

/// `1/∏(L^m - 1)` expanded at `L = 0`, exponents `0..=reach`.
pub(crate) fn inverse_series_at_zero(den: &[u32], reach: u64) -> LefschetzPoly {
    let reach = reach as i64;
    let mut acc = LefschetzPoly::one();
    for &m in den {
        let geo = LefschetzPoly::from_terms((0..=reach / m as i64).map(|j| (j * m as i64, -1)));
        acc = (&acc * &geo).filter(|e| e <= reach);
    }
    acc
}

/// `1/∏(L^m - 1)` expanded at `L = ∞`, exponents `>= -reach`.
pub(crate) fn inverse_series_at_infinity(den: &[u32], reach: u64) -> LefschetzPoly {
    let reach = reach as i64;
    let mut acc = LefschetzPoly::one();
    for &m in den {
        let geo = LefschetzPoly::from_terms((1..=reach / m as i64).map(|j| (-j * m as i64, 1)));
        acc = (&acc * &geo).filter(|e| e >= -reach);
    }
    acc
}

impl PartialEq for LefschetzRational {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &expand_den(&other.den) == &other.num * &expand_den(&self.den)
    }
}

impl Eq for LefschetzRational {}

impl fmt::Display for LefschetzRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("L"))
    }
}

impl From<LefschetzPoly> for LefschetzRational {
    fn from(num: LefschetzPoly) -> Self {
        Self { num, den: Vec::new() }
    }
}

impl From<i64> for LefschetzRational {
    fn from(c: i64) -> Self {
        LefschetzPoly::constant(c).into()
    }
}

impl Add for &LefschetzRational {
    type Output = LefschetzRational;
    fn add(self, rhs: &LefschetzRational) -> LefschetzRational {
        let (a, b, den) = LefschetzRational::common_den((&self.num, &self.den), (&rhs.num, &rhs.den));
        LefschetzRational::new(&a + &b, den)
    }
}

impl Sub for &LefschetzRational {
    type Output = LefschetzRational;
    fn sub(self, rhs: &LefschetzRational) -> LefschetzRational {
        self + &(-rhs)
    }
}

impl Mul for &LefschetzRational {
    type Output = LefschetzRational;
    fn mul(self, rhs: &LefschetzRational) -> LefschetzRational {
        let mut den = self.den.clone();
        den.extend_from_slice(&rhs.den);
        LefschetzRational::new(&self.num * &rhs.num, den)
    }
}

impl Neg for &LefschetzRational {
    type Output = LefschetzRational;
    fn neg(self) -> LefschetzRational {
        LefschetzRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for LefschetzRational {
    type Output = LefschetzRational;
    fn neg(self) -> LefschetzRational {
        -&self
    }
}

forward_owned!(LefschetzRational, Add::add, Sub::sub, Mul::mul);

/// An exact dyadic norm value `2^e`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    Zero,
    Pow2(i64),
}

impl Ord for Norm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Norm::Zero, Norm::Zero) => Ordering::Equal,
            (Norm::Zero, _) => Ordering::Less,
            (_, Norm::Zero) => Ordering::Greater,
            (Norm::Pow2(a), Norm::Pow2(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Norm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Norm::Zero => f.write_str("0"),
            Norm::Pow2(e) if e >= 0 => write!(f, "{}", BigInt::one() << e as usize),
            Norm::Pow2(e) => write!(f, "1/{}", BigInt::one() << (-e) as usize),
        }
    }
}

impl Zero for LefschetzRational {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

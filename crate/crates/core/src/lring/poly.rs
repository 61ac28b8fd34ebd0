use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A Laurent polynomial in one variable over the integers, stored sparsely.
///
/// Used for polynomials in the Lefschetz class `L` and, in the toric engine,
/// for polynomials in a root `t^(1/r)` of the series variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LefschetzPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LefschetzPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The class `L` itself.
    pub fn l() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * L^exp`
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `L^m - 1`
    pub fn binomial(m: i64) -> Self {
        let mut p = Self::monomial(1, m);
        p.add_term(0, &BigInt::from(-1));
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest exponent, `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// If this is `c * L^e`, returns `(c, e)`.
    pub fn as_monomial(&self) -> Option<(&BigInt, i64)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// Multiplies by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `L -> L^k`.
    pub fn dilate(&self, k: i64) -> Self {
        assert!(k != 0, "dilation by zero");
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    /// Substitutes `L -> L^-1`.
    pub fn invert(&self) -> Self {
        self.dilate(-1)
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(i64) -> bool) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| keep(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Exact division in the Laurent ring: returns `q` with `self = q * divisor`
    /// if such a Laurent polynomial with integer coefficients exists.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (dlo, dhi) = (divisor.valuation()?, divisor.degree()?);
        let (nlo, nhi) = match (self.valuation(), self.degree()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Some(Self::zero()),
        };
        if nhi - nlo < dhi - dlo {
            return None;
        }
        // Normalize both to ordinary polynomials and run long division from the
        // low end, which needs divisibility by the constant term only.
        let d: Vec<BigInt> = (dlo..=dhi).map(|e| divisor.coeff(e)).collect();
        let mut rem: Vec<BigInt> = (nlo..=nhi).map(|e| self.coeff(e)).collect();
        let qlen = rem.len() - (d.len() - 1);
        let lead = &d[0];
        let mut q = Self::zero();
        for i in 0..qlen {
            if rem[i].is_zero() {
                continue;
            }
            if !(&rem[i] % lead).is_zero() {
                return None;
            }
            let c = &rem[i] / lead;
            for (j, dj) in d.iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] -= &c * dj;
                }
            }
            q.add_term(nlo - dlo + i as i64, &c);
        }
        if rem[qlen..].iter().all(Zero::is_zero) {
            Some(q)
        } else {
            None
        }
    }

    /// Renders with a custom variable name, terms by descending exponent.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match *e {
                0 => String::new(),
                1 => var.to_string(),
                e => format!("{var}^{e}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for LefschetzPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("L"))
    }
}

impl From<i64> for LefschetzPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LefschetzPoly {
    fn from(c: BigInt) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&LefschetzPoly> for LefschetzPoly {
    fn add_assign(&mut self, rhs: &LefschetzPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&LefschetzPoly> for LefschetzPoly {
    fn sub_assign(&mut self, rhs: &LefschetzPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, &-c);
        }
    }
}

impl Add for &LefschetzPoly {
    type Output = LefschetzPoly;
    fn add(self, rhs: &LefschetzPoly) -> LefschetzPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LefschetzPoly {
    type Output = LefschetzPoly;
    fn sub(self, rhs: &LefschetzPoly) -> LefschetzPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LefschetzPoly {
    type Output = LefschetzPoly;
    fn mul(self, rhs: &LefschetzPoly) -> LefschetzPoly {
        let mut out = LefschetzPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &LefschetzPoly {
    type Output = LefschetzPoly;
    fn neg(self) -> LefschetzPoly {
        LefschetzPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty { $tr::$m(&self, &rhs) }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &$ty) -> $ty { $tr::$m(&self, rhs) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(LefschetzPoly, Add::add, Sub::sub, Mul::mul);

impl Neg for LefschetzPoly {
    type Output = LefschetzPoly;
    fn neg(self) -> LefschetzPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LefschetzPoly {
        LefschetzPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn canonical_sparse_form() {
        let a = p(&[(1, 1), (0, 1)]);
        let b = p(&[(1, -1), (0, 1)]);
        assert_eq!(&a + &b, LefschetzPoly::constant(2));
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).len(), 0);
    }

    #[test]
    fn exact_division() {
        let l2m1 = LefschetzPoly::binomial(2);
        let q = l2m1.div_exact(&LefschetzPoly::binomial(1)).unwrap();
        assert_eq!(q, p(&[(1, 1), (0, 1)]));
        assert!(LefschetzPoly::binomial(1)
            .div_exact(&LefschetzPoly::binomial(2))
            .is_none());
        assert!(p(&[(0, 1), (1, 1)]).div_exact(&LefschetzPoly::binomial(1)).is_none());
        // Laurent shift survives division
        let x = &LefschetzPoly::binomial(3).shift(-5) * &p(&[(0, 2), (4, -3)]);
        assert_eq!(
            x.div_exact(&LefschetzPoly::binomial(3)).unwrap(),
            p(&[(-5, 2), (-1, -3)])
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(p(&[(2, 1), (1, 1), (0, 1)]).to_string(), "L^2 + L + 1");
        assert_eq!(p(&[(-1, -2), (0, 1)]).to_string(), "1 - 2*L^-1");
        assert_eq!(LefschetzPoly::zero().to_string(), "0");
        assert_eq!(p(&[(3, -1)]).to_string(), "-L^3");
    }
}

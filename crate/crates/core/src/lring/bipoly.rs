use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{forward_owned, LefschetzPoly};

/// Exponent pair `(p, q)` of a monomial `u^p v^q`.
pub type Exp2 = (i64, i64);

/// A Laurent polynomial in the Hodge variables `u, v` over the integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiPoly {
    coeffs: BTreeMap<Exp2, BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, (0, 0))
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn monomial(c: impl Into<BigInt>, exp: Exp2) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// `u^e.0 v^e.1 - 1`
    pub fn binomial(e: Exp2) -> Self {
        let mut p = Self::monomial(1, e);
        p.add_term(0, 0, &BigInt::from(-1));
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Exp2, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e.0, e.1, &c.into());
        }
        p
    }

    /// Substitutes `L -> u^a v^b` into a polynomial in `L`.
    pub fn from_lefschetz(poly: &LefschetzPoly, sig: Exp2) -> Self {
        Self::from_terms(poly.terms().map(|(e, c)| ((sig.0 * e, sig.1 * e), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: Exp2) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in lexicographic `(p, q)` order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Exp2, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, p: i64, q: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((p, q)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(p, q));
        }
    }

    /// Multiplies by the monomial `u^e.0 v^e.1`.
    pub fn shift(&self, e: Exp2) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| ((k.0 + e.0, k.1 + e.1), c.clone()))
                .collect(),
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

    /// Applies the linear exponent map `(p, q) -> f(p, q)`.
    pub fn map_exponents(&self, f: impl Fn(Exp2) -> Exp2) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.coeffs {
            let e = f(*e);
            out.add_term(e.0, e.1, c);
        }
        out
    }

    /// Substitutes `u -> u^-1, v -> v^-1`.
    pub fn invert(&self) -> Self {
        self.map_exponents(|(p, q)| (-p, -q))
    }

    /// gcd of all exponent coordinates (0 for constants and zero).
    pub(crate) fn exponent_gcd(&self) -> i64 {
        self.coeffs
            .keys()
            .fold(0i64, |g, (p, q)| g.gcd(p).gcd(q))
    }

    /// Exact division by a polynomial `divisor` supported on the ray through
    /// `dir` (a primitive vector): `divisor = Σ_k d_k x^{k·dir}`.
    ///
    /// The numerator splits into fibers `base + k·dir`; each fiber is divided
    /// as a univariate Laurent polynomial.
    pub(crate) fn div_exact_along(&self, dir: Exp2, divisor: &LefschetzPoly) -> Option<Self> {
        debug_assert_eq!(dir.0.gcd(&dir.1), 1);
        let norm = dir.0 * dir.0 + dir.1 * dir.1;
        let mut fibers: BTreeMap<i64, Vec<(i64, Exp2, &BigInt)>> = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let key = dir.0 * e.1 - dir.1 * e.0;
            let pos = dir.0 * e.0 + dir.1 * e.1;
            fibers.entry(key).or_default().push((pos, *e, c));
        }
        let mut out = Self::zero();
        for members in fibers.values() {
            let (base_pos, base) = members
                .iter()
                .min_by_key(|m| m.0)
                .map(|m| (m.0, m.1))
                .expect("nonempty fiber");
            let fiber = LefschetzPoly::from_terms(
                members.iter().map(|(pos, _, c)| ((pos - base_pos) / norm, (*c).clone())),
            );
            let q = fiber.div_exact(divisor)?;
            for (k, c) in q.terms() {
                out.add_term(base.0 + k * dir.0, base.1 + k * dir.1, c);
            }
        }
        Some(out)
    }

    /// Renders with exponents divided by `root` (for fractional powers).
    /// Terms are in ascending lexicographic `(p, q)` order.
    pub fn render_scaled(&self, root: i64) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((p, q), c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(*p, *q, root);
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

fn render_exponent(n: i64, root: i64) -> Option<String> {
    let g = n.gcd(&root);
    let (n, d) = (n / g, root / g);
    match (n, d) {
        (1, 1) => None,
        (n, 1) => Some(format!("^{n}")),
        (n, d) => Some(format!("^({n}/{d})")),
    }
}

/// `uv`-style rendering of `u^(p/root) v^(q/root)`; empty for the constant.
pub(crate) fn render_monomial(p: i64, q: i64, root: i64) -> String {
    if p == 0 && q == 0 {
        return String::new();
    }
    if p == q {
        return match render_exponent(p, root) {
            None => "uv".to_string(),
            Some(e) => format!("(uv){e}"),
        };
    }
    let mut parts = Vec::new();
    if p != 0 {
        parts.push(format!("u{}", render_exponent(p, root).unwrap_or_default()));
    }
    if q != 0 {
        parts.push(format!("v{}", render_exponent(q, root).unwrap_or_default()));
    }
    parts.join("*")
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_scaled(1))
    }
}

impl AddAssign<&BiPoly> for BiPoly {
    fn add_assign(&mut self, rhs: &BiPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(e.0, e.1, c);
        }
    }
}

impl SubAssign<&BiPoly> for BiPoly {
    fn sub_assign(&mut self, rhs: &BiPoly) {
        for (e, c) in &rhs.coeffs {
            self.add_term(e.0, e.1, &-c);
        }
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                out.add_term(ea.0 + eb.0, ea.1 + eb.1, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

forward_owned!(BiPoly, Add::add, Sub::sub, Mul::mul);

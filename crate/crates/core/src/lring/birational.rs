use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;

use super::bipoly::{render_monomial, BiPoly, Exp2};
use super::poly::{forward_owned, LefschetzPoly};
use super::rational::LefschetzRational;

/// A rational function in `u, v` whose denominator is a product of binomials
/// `(u^p v^q - 1)`.
///
/// Exponents (in numerator and denominator) are stored multiplied by a common
/// root order `root`, so `(p, q)` stands for `u^(p/root) v^(q/root)`. This is
/// how rational discrepancies stay inside one Laurent ring. Denominator
/// vectors are oriented lexicographically positive.
///
/// `sig` records the type `(a, b)` of the family that produced the value:
/// the monomial `u^a v^b` is the image of `L`.
#[derive(Clone, Debug)]
pub struct BiRational {
    sig: Exp2,
    root: i64,
    num: BiPoly,
    den: Vec<Exp2>,
}

/// Result of extracting stringy numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StringyNumbers {
    /// `(p, q) -> (-1)^(p+q) a_{p,q}`
    Polynomial(BTreeMap<Exp2, BigInt>),
    /// The value does not reduce to a polynomial; carries the rendered
    /// irreducible denominator (or the offending fractional exponent).
    NotPolynomial(String),
}

fn lex_negative(e: Exp2) -> bool {
    e.0 < 0 || (e.0 == 0 && e.1 < 0)
}

fn primitive(e: Exp2) -> (Exp2, i64) {
    let g = e.0.gcd(&e.1);
    ((e.0 / g, e.1 / g), g)
}

fn geometric_sum(k: i64, d: i64) -> LefschetzPoly {
    LefschetzPoly::from_terms((0..k).map(|i| (i * d, 1)))
}

fn expand(den: &[Exp2]) -> BiPoly {
    den.iter()
        .fold(BiPoly::one(), |acc, e| &acc * &BiPoly::binomial(*e))
}

impl BiRational {
    /// Builds and normalizes `num / ∏(x^e - 1)` at the given root order.
    pub fn new(num: BiPoly, den: Vec<Exp2>, root: i64, sig: Exp2) -> Self {
        assert!(root >= 1, "root order must be positive");
        assert!(den.iter().all(|e| *e != (0, 0)), "denominator factor x^0 - 1");
        let mut out = Self {
            sig,
            root,
            num,
            den: Vec::with_capacity(den.len()),
        };
        for e in den {
            if lex_negative(e) {
                let f = (-e.0, -e.1);
                out.num = -out.num.shift(f);
                out.den.push(f);
            } else {
                out.den.push(e);
            }
        }
        out.den.sort_unstable();
        out.reduce();
        out
    }

    pub fn zero(sig: Exp2) -> Self {
        Self::from_poly(BiPoly::zero(), sig)
    }

    pub fn from_poly(num: BiPoly, sig: Exp2) -> Self {
        Self {
            sig,
            root: 1,
            num,
            den: Vec::new(),
        }
    }

    /// Substitutes `L -> u^a v^b` into a rational value in `L`.
    pub fn from_lefschetz(x: &LefschetzRational, sig: Exp2) -> Self {
        let num = BiPoly::from_lefschetz(x.numerator(), sig);
        let den = x
            .denominator()
            .iter()
            .map(|&m| (sig.0 * m as i64, sig.1 * m as i64))
            .collect();
        Self::new(num, den, 1, sig)
    }

    pub fn sig(&self) -> Exp2 {
        self.sig
    }

    pub fn with_sig(mut self, sig: Exp2) -> Self {
        self.sig = sig;
        self
    }

    pub fn root(&self) -> i64 {
        self.root
    }

    /// Numerator with exponents scaled by `root`.
    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    /// Denominator binomial exponents, scaled by `root`.
    pub fn denominator(&self) -> &[Exp2] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            self.root = 1;
            return;
        }
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.den.len() {
                let (dir, g) = primitive(self.den[i]);
                if let Some(q) = self.num.div_exact_along(dir, &LefschetzPoly::binomial(g)) {
                    self.num = q;
                    self.den.remove(i);
                    changed = true;
                    break;
                }
                let lowered = (1..g).filter(|k| g % k == 0).find_map(|k| {
                    self.num
                        .div_exact_along(dir, &geometric_sum(g / k, k))
                        .map(|q| (k, q))
                });
                if let Some((k, q)) = lowered {
                    self.num = q;
                    self.den[i] = (dir.0 * k, dir.1 * k);
                    self.den.sort_unstable();
                    changed = true;
                    break;
                }
            }
        }
        let g = self
            .den
            .iter()
            .fold(self.root.gcd(&self.num.exponent_gcd()), |g, e| g.gcd(&e.0).gcd(&e.1));
        if g > 1 {
            self.num = self.num.map_exponents(|(p, q)| (p / g, q / g));
            for e in &mut self.den {
                *e = (e.0 / g, e.1 / g);
            }
            self.root /= g;
        }
    }

    /// Re-expresses at root order `root * k`.
    fn lifted(&self, k: i64) -> (BiPoly, Vec<Exp2>) {
        if k == 1 {
            return (self.num.clone(), self.den.clone());
        }
        (
            self.num.map_exponents(|(p, q)| (p * k, q * k)),
            self.den.iter().map(|e| (e.0 * k, e.1 * k)).collect(),
        )
    }

    fn aligned(a: &Self, b: &Self) -> (i64, (BiPoly, Vec<Exp2>), (BiPoly, Vec<Exp2>)) {
        let root = a.root.lcm(&b.root);
        (root, a.lifted(root / a.root), b.lifted(root / b.root))
    }

    /// Multiplies by `u^(p/root) v^(q/root)` at this value's root order.
    pub fn shift_scaled(&self, e: Exp2) -> Self {
        Self::new(self.num.shift(e), self.den.clone(), self.root, self.sig)
    }

    /// Multiplies by the integral monomial `u^e.0 v^e.1`.
    pub fn shift(&self, e: Exp2) -> Self {
        self.shift_scaled((e.0 * self.root, e.1 * self.root))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.num.scale(c), self.den.clone(), self.root, self.sig)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::from_poly(BiPoly::one(), self.sig);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `u -> u^-1, v -> v^-1`.
    pub fn swap(&self) -> Self {
        Self::new(
            self.num.invert(),
            self.den.iter().map(|e| (-e.0, -e.1)).collect(),
            self.root,
            self.sig,
        )
    }

    /// Substitutes `u -> u^-1` with `v` fixed.
    pub fn invert_u(&self) -> Self {
        Self::new(
            self.num.map_exponents(|(p, q)| (-p, q)),
            self.den.iter().map(|e| (-e.0, e.1)).collect(),
            self.root,
            self.sig,
        )
    }

    /// If this is `x^e` (coefficient 1, no denominator), its scaled exponent.
    pub fn as_monomial_scaled(&self) -> Option<Exp2> {
        if !self.den.is_empty() || self.num.len() != 1 {
            return None;
        }
        let (e, c) = self.num.terms().next()?;
        (*c == BigInt::from(1)).then_some(e)
    }

    /// The polynomial this value equals, if any.
    pub fn as_polynomial(&self) -> Option<BiPoly> {
        if !self.den.is_empty() {
            return None;
        }
        if self.root == 1 {
            return Some(self.num.clone());
        }
        let r = self.root;
        self.num
            .terms()
            .all(|((p, q), _)| p % r == 0 && q % r == 0)
            .then(|| self.num.map_exponents(|(p, q)| (p / r, q / r)))
    }

    /// `(-1)^(p+q) a_{p,q}` per monomial, or a non-polynomiality report.
    pub fn stringy_numbers(&self) -> StringyNumbers {
        match self.as_polynomial() {
            Some(p) => StringyNumbers::Polynomial(
                p.terms()
                    .map(|((a, b), c)| {
                        let sign = if (a + b).rem_euclid(2) == 0 { c.clone() } else { -c };
                        ((a, b), sign)
                    })
                    .collect(),
            ),
            None if !self.den.is_empty() => StringyNumbers::NotPolynomial(self.render_denominator()),
            None => StringyNumbers::NotPolynomial(format!(
                "fractional exponents (root order {})",
                self.root
            )),
        }
    }

    fn render_denominator(&self) -> String {
        self.den
            .iter()
            .map(|e| format!("({} - 1)", render_monomial(e.0, e.1, self.root)))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text: `NUM` or `(NUM) / (FACTOR*FACTOR...)`.
    pub fn render(&self) -> String {
        let num = self.num.render_scaled(self.root);
        if self.den.is_empty() {
            num
        } else {
            let den = self.render_denominator();
            if self.den.len() == 1 {
                format!("({num}) / {den}")
            } else {
                format!("({num}) / ({den})")
            }
        }
    }
}

impl PartialEq for BiRational {
    fn eq(&self, other: &Self) -> bool {
        let (_, (na, da), (nb, db)) = Self::aligned(self, other);
        if da == db {
            return na == nb;
        }
        &na * &expand(&db) == &nb * &expand(&da)
    }
}

impl Eq for BiRational {}

impl fmt::Display for BiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn union_max(a: &[Exp2], b: &[Exp2]) -> Vec<Exp2> {
    let mut counts: BTreeMap<Exp2, (usize, usize)> = BTreeMap::new();
    for e in a {
        counts.entry(*e).or_default().0 += 1;
    }
    for e in b {
        counts.entry(*e).or_default().1 += 1;
    }
    counts
        .into_iter()
        .flat_map(|(e, (x, y))| std::iter::repeat_n(e, x.max(y)))
        .collect()
}

fn diff(a: &[Exp2], b: &[Exp2]) -> Vec<Exp2> {
    let mut out = a.to_vec();
    for e in b {
        let i = out.iter().position(|x| x == e).expect("multiset subset");
        out.remove(i);
    }
    out
}

impl Add for &BiRational {
    type Output = BiRational;
    fn add(self, rhs: &BiRational) -> BiRational {
        let (root, (na, da), (nb, db)) = BiRational::aligned(self, rhs);
        let den = union_max(&da, &db);
        let num = &(&na * &expand(&diff(&den, &da))) + &(&nb * &expand(&diff(&den, &db)));
        BiRational::new(num, den, root, self.sig)
    }
}

impl Sub for &BiRational {
    type Output = BiRational;
    fn sub(self, rhs: &BiRational) -> BiRational {
        self + &(-rhs)
    }
}

impl Mul for &BiRational {
    type Output = BiRational;
    fn mul(self, rhs: &BiRational) -> BiRational {
        let (root, (na, mut da), (nb, db)) = BiRational::aligned(self, rhs);
        da.extend(db);
        BiRational::new(&na * &nb, da, root, self.sig)
    }
}

impl Neg for &BiRational {
    type Output = BiRational;
    fn neg(self) -> BiRational {
        BiRational {
            sig: self.sig,
            root: self.root,
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for BiRational {
    type Output = BiRational;
    fn neg(self) -> BiRational {
        -&self
    }
}

forward_owned!(BiRational, Add::add, Sub::sub, Mul::mul);

impl From<BiPoly> for BiRational {
    fn from(p: BiPoly) -> Self {
        Self::from_poly(p, (1, 1))
    }
}

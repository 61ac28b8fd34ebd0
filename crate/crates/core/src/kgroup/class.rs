use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lring::{multiset_diff, multiset_max, LefschetzPoly, LefschetzRational, Norm};

/// Name of the implicit point generator; scalar classes are multiples of it.
pub const POINT: &str = "pt";

/// A generator of the Grothendieck group: a variety record by name, with
/// its dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub name: String,
    pub dim: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, dim: u32) -> Self {
        Self {
            name: name.into(),
            dim,
        }
    }

    pub fn point() -> Self {
        Self::new(POINT, 0)
    }

    pub fn is_point(&self) -> bool {
        self.name == POINT && self.dim == 0
    }
}

/// An element of the localized Grothendieck group: a formal sum of
/// generators with polynomial coefficients in `L`, over a common denominator
/// `∏(L^m - 1)`.
///
/// A term `c·L^s·[X]` has virtual dimension `dim X + s`.
#[derive(Clone, Debug, Default)]
pub struct KClass {
    terms: BTreeMap<Generator, LefschetzPoly>,
    den: Vec<u32>,
}

impl KClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(g, LefschetzPoly::one());
        Self { terms, den: Vec::new() }
    }

    pub fn point() -> Self {
        Self::generator(Generator::point())
    }

    /// `x·[pt]`
    pub fn scalar(x: &LefschetzRational) -> Self {
        Self::point().mul_scalar(x)
    }

    /// Builds from per-generator coefficients over a shared denominator.
    pub fn from_parts(terms: impl IntoIterator<Item = (Generator, LefschetzPoly)>, den: Vec<u32>) -> Self {
        let mut out = Self { terms: BTreeMap::new(), den };
        out.den.sort_unstable();
        for (g, p) in terms {
            let slot = out.terms.entry(g).or_default();
            *slot += &p;
        }
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, p| !p.is_zero());
        if self.terms.is_empty() {
            self.den.clear();
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            let b = LefschetzPoly::binomial(self.den[i] as i64);
            let divided: Option<Vec<LefschetzPoly>> =
                self.terms.values().map(|p| p.div_exact(&b)).collect();
            match divided {
                Some(qs) => {
                    for (slot, q) in self.terms.values_mut().zip(qs) {
                        *slot = q;
                    }
                    self.den.remove(i);
                }
                None => i += 1,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in generator order: `(generator, numerator coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &LefschetzPoly)> {
        self.terms.iter()
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.terms.keys()
    }

    /// Shared denominator exponents `m` (factors `L^m - 1`).
    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    /// The full coefficient of `g` as a rational value.
    pub fn coefficient(&self, g: &Generator) -> LefschetzRational {
        match self.terms.get(g) {
            Some(p) => LefschetzRational::new(p.clone(), self.den.clone()),
            None => LefschetzRational::zero(),
        }
    }

    /// `L^k · self`: every term's L-shift moves by `k`.
    pub fn l_action(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(g, p)| (g.clone(), p.shift(k))).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_parts(
            self.terms.iter().map(|(g, p)| (g.clone(), p.scale(c))),
            self.den.clone(),
        )
    }

    /// Multiplication by a scalar in `L` (the only product classes admit).
    pub fn mul_scalar(&self, x: &LefschetzRational) -> Self {
        let mut den = self.den.clone();
        den.extend_from_slice(x.denominator());
        Self::from_parts(
            self.terms.iter().map(|(g, p)| (g.clone(), p * x.numerator())),
            den,
        )
    }

    /// Highest virtual dimension of the leading term at `L = ∞`.
    pub fn virtual_dim(&self) -> Option<i64> {
        let s: i64 = self.den.iter().map(|&m| m as i64).sum();
        self.terms
            .iter()
            .filter_map(|(g, p)| p.degree().map(|d| g.dim as i64 + d))
            .max()
            .map(|d| d - s)
    }

    /// Largest `k` with this class in `F^k`, treating distinct generators as
    /// independent, i.e. minus the virtual dimension.
    pub fn filtration_index(&self) -> Result<i64> {
        self.virtual_dim().map(|d| -d).ok_or(Error::ZeroIndex)
    }

    pub fn norm(&self) -> Norm {
        match self.filtration_index() {
            Ok(k) => Norm::Pow2(-k),
            Err(_) => Norm::Zero,
        }
    }

    /// Canonical text in the class-expression grammar.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (g, p) in self.terms.iter().filter(|(g, _)| !g.is_point()) {
            let class = format!("[{}]", g.name);
            match p.as_monomial() {
                Some((c, e)) => {
                    let neg = c < &BigInt::from(0);
                    let mono = LefschetzPoly::monomial(if neg { -c } else { c.clone() }, e);
                    let body = if mono.is_one() {
                        class
                    } else {
                        format!("{mono}*{class}")
                    };
                    parts.push((neg, body));
                }
                None => parts.push((false, format!("({p})*{class}"))),
            }
        }
        if let Some(p) = self.terms.get(&Generator::point()) {
            for (e, c) in p.terms().rev() {
                let neg = c < &BigInt::from(0);
                let mono = LefschetzPoly::monomial(if neg { -c } else { c.clone() }, e);
                parts.push((neg, mono.to_string()));
            }
        }
        let mut body = String::new();
        for (i, (neg, s)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => body.push('-'),
                (0, false) => {}
                (_, true) => body.push_str(" - "),
                (_, false) => body.push_str(" + "),
            }
            body.push_str(s);
        }
        if self.den.is_empty() {
            return body;
        }
        let inv: Vec<String> = self
            .den
            .iter()
            .map(|&m| {
                if m == 1 {
                    "inv(L - 1)".to_string()
                } else {
                    format!("inv(L^{m} - 1)")
                }
            })
            .collect();
        format!("{}*({body})", inv.join("*"))
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl PartialEq for KClass {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for KClass {}

impl Add for &KClass {
    type Output = KClass;
    fn add(self, rhs: &KClass) -> KClass {
        let den = multiset_max(&self.den, &rhs.den);
        let ea = expand(&multiset_diff(&den, &self.den));
        let eb = expand(&multiset_diff(&den, &rhs.den));
        let terms = self
            .terms
            .iter()
            .map(|(g, p)| (g.clone(), p * &ea))
            .chain(rhs.terms.iter().map(|(g, p)| (g.clone(), p * &eb)));
        KClass::from_parts(terms, den)
    }
}

fn expand(den: &[u32]) -> LefschetzPoly {
    den.iter().fold(LefschetzPoly::one(), |acc, &m| &acc * &LefschetzPoly::binomial(m as i64))
}

impl Neg for &KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        KClass {
            terms: self.terms.iter().map(|(g, p)| (g.clone(), -p)).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for KClass {
    type Output = KClass;
    fn neg(self) -> KClass {
        -&self
    }
}

impl Sub for &KClass {
    type Output = KClass;
    fn sub(self, rhs: &KClass) -> KClass {
        self + &(-rhs)
    }
}

crate::lring::forward_owned!(KClass, Add::add, Sub::sub);

impl std::iter::Sum for KClass {
    fn sum<I: Iterator<Item = KClass>>(iter: I) -> KClass {
        iter.fold(KClass::zero(), |a, b| &a + &b)
    }
}

impl From<&LefschetzRational> for KClass {
    fn from(x: &LefschetzRational) -> Self {
        KClass::scalar(x)
    }
}

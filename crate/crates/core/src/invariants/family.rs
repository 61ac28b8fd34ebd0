use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kgroup::{Generator, InvariantData, KClass, VarietyDb};
use crate::lring::{inverse_series_at_zero, BiPoly, BiRational, Exp2, LefschetzPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Integer tables `φ_{j,n}`.
    Graded,
    /// Polynomial values in `u, v`.
    Bipoly,
}

/// A bounded motivic invariant of type `(a, b)`:
/// `φ_{j,n}(X·L^k) = φ_{j-ak, n-bk}(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFamily {
    pub name: String,
    pub sig: Exp2,
    pub kind: FamilyKind,
    values: BTreeMap<String, InvariantData>,
}

impl InvariantFamily {
    pub fn new(name: impl Into<String>, sig: Exp2, kind: FamilyKind) -> Self {
        Self {
            name: name.into(),
            sig,
            kind,
            values: BTreeMap::new(),
        }
    }

    fn kind_error(&self, msg: impl Into<String>) -> Error {
        Error::FamilyKind(self.name.clone(), msg.into())
    }

    /// Attaches the values on one generator; graded tables must not use
    /// negative indices.
    pub fn set_value(&mut self, generator: impl Into<String>, data: InvariantData) -> Result<()> {
        let generator = generator.into();
        match (&data, self.kind) {
            (InvariantData::Graded(t), FamilyKind::Graded) => {
                if let Some((j, n)) = t.keys().find(|(j, n)| *j < 0 || *n < 0) {
                    return Err(Error::MalformedRecord {
                        name: generator,
                        msg: format!("family {}: negative index ({j},{n})", self.name),
                    });
                }
            }
            (InvariantData::Poly(_), FamilyKind::Bipoly) => {}
            _ => return Err(self.kind_error(format!("value on `{generator}` has the wrong kind"))),
        }
        self.values.insert(generator, data);
        Ok(())
    }

    pub fn with_value(mut self, generator: impl Into<String>, data: InvariantData) -> Result<Self> {
        self.set_value(generator, data)?;
        Ok(self)
    }

    pub fn value(&self, generator: &str) -> Option<&InvariantData> {
        self.values.get(generator)
    }

    pub fn values(&self) -> impl Iterator<Item = (&String, &InvariantData)> {
        self.values.iter()
    }

    pub fn covers(&self, c: &KClass) -> bool {
        c.generators().all(|g| self.values.contains_key(&g.name))
    }

    /// Checks every table against `2·dim` of the record it is attached to.
    pub fn validate_against(&self, db: &VarietyDb) -> Result<()> {
        for (name, data) in &self.values {
            let Ok(rec) = db.get(name) else { continue };
            let bound = 2 * rec.dim as i64;
            let too_big = match data {
                InvariantData::Graded(t) => t.keys().any(|&(j, n)| j > bound || n > bound),
                InvariantData::Poly(p) => p.terms().any(|((a, b), _)| a > bound || b > bound),
            };
            if too_big {
                return Err(Error::MalformedRecord {
                    name: name.clone(),
                    msg: format!("family {}: index exceeds 2·dim = {bound}", self.name),
                });
            }
        }
        Ok(())
    }

    fn data(&self, g: &Generator) -> Result<&InvariantData> {
        self.values.get(&g.name).ok_or_else(|| Error::Unevaluable {
            family: self.name.clone(),
            generator: g.name.clone(),
        })
    }

    /// `φ_{j,n}(c)`, expanding each denominator `1/(L^m - 1)` at `L = 0`.
    pub fn evaluate(&self, c: &KClass, j: i64, n: i64) -> Result<BigInt> {
        if self.kind != FamilyKind::Graded {
            return Err(self.kind_error("polynomial-valued families evaluate by substitution; use the φ-polynomial"));
        }
        let (a, b) = self.sig;
        if (a, b) == (0, 0) && !c.denominator().is_empty() {
            return Err(Error::Divergent(self.name.clone()));
        }
        let mut total = BigInt::zero();
        for (g, num) in c.terms() {
            let InvariantData::Graded(table) = self.data(g)? else {
                unreachable!("kind checked on insertion")
            };
            // L-shifts t with (j - a t, n - b t) in the support.
            let hits: Vec<(i64, &BigInt)> = table
                .iter()
                .filter_map(|(&(jj, nn), v)| shift_between((j, n), (jj, nn), (a, b)).map(|t| (t, v)))
                .collect();
            if hits.is_empty() {
                continue;
            }
            if (a, b) == (0, 0) {
                let at_one: BigInt = num.terms().map(|(_, c)| c.clone()).sum();
                total += hits.iter().map(|(_, v)| *v * &at_one).sum::<BigInt>();
                continue;
            }
            let t_max = hits.iter().map(|h| h.0).max().expect("non-empty");
            let series = expand_at_zero(num, c.denominator(), t_max);
            for (t, v) in hits {
                total += series.coeff(t) * v;
            }
        }
        Ok(total)
    }

    /// Generating polynomial of one generator.
    pub fn generator_poly(&self, g: &Generator) -> Result<BiPoly> {
        Ok(match self.data(g)? {
            InvariantData::Poly(p) => p.clone(),
            InvariantData::Graded(t) => BiPoly::from_terms(t.iter().map(|(e, v)| (*e, v.clone()))),
        })
    }

    /// `φ(c; u, v)` with `L ↦ u^a v^b`.
    pub fn phi_polynomial(&self, c: &KClass) -> Result<BiRational> {
        let mut num = BiPoly::zero();
        for (g, coeff) in c.terms() {
            num = &num + &(&self.generator_poly(g)? * &BiPoly::from_lefschetz(coeff, self.sig));
        }
        let den = c.denominator().iter().map(|&m| (self.sig.0 * m as i64, self.sig.1 * m as i64));
        Ok(BiRational::new(num, den.collect(), 1, self.sig))
    }
}

/// The `t` with `from - t·sig = to`, if any.
fn shift_between(from: Exp2, to: Exp2, sig: Exp2) -> Option<i64> {
    let (dj, dn) = (from.0 - to.0, from.1 - to.1);
    let (a, b) = sig;
    let t = if a != 0 {
        (dj % a == 0).then(|| dj / a)?
    } else if b != 0 {
        (dn % b == 0).then(|| dn / b)?
    } else {
        return (dj == 0 && dn == 0).then_some(0);
    };
    (dj == a * t && dn == b * t).then_some(t)
}

/// `num / ∏(L^m - 1)` expanded at `L = 0` through exponent `top`.
fn expand_at_zero(num: &LefschetzPoly, den: &[u32], top: i64) -> LefschetzPoly {
    if den.is_empty() {
        return num.clone();
    }
    let Some(v) = num.valuation() else {
        return LefschetzPoly::zero();
    };
    let reach = top - v;
    if reach < 0 {
        return LefschetzPoly::zero();
    }
    (num * &inverse_series_at_zero(den, reach as u64)).filter(|e| e <= top)
}

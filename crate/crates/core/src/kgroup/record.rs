use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lring::{BiPoly, Exp2};
use crate::parse::{parse_class_expr, Expr};

/// Per-generator values of one invariant family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvariantData {
    /// `φ_{j,n}` with finite support.
    Graded(BTreeMap<Exp2, BigInt>),
    /// A polynomial in `u, v` (e.g. the E-polynomial).
    Poly(BiPoly),
}

/// A class expression kept with its source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSource {
    pub text: String,
    pub expr: Expr,
}

impl ClassSource {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self {
            text: text.to_string(),
            expr: parse_class_expr(text)?,
        })
    }
}

/// How a non-smooth-projective record is expressed through other records.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geometry {
    /// `X = closure ∖ boundary`, with `closure` a record name.
    Compactification { closure: String, boundary: ClassSource },
    /// `X = ⊔ S_i`.
    Stratification(Vec<ClassSource>),
}

/// Declares a record to be the blow-up of `base` along `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupOf {
    pub base: String,
    pub center: String,
    pub codim: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyRecord {
    pub name: String,
    pub dim: u32,
    pub smooth_projective: bool,
    pub invariants: BTreeMap<String, InvariantData>,
    pub geometry: Option<Geometry>,
    pub blowup: Option<BlowupOf>,
}

impl VarietyRecord {
    pub fn new(name: impl Into<String>, dim: u32, smooth_projective: bool) -> Self {
        Self {
            name: name.into(),
            dim,
            smooth_projective,
            invariants: BTreeMap::new(),
            geometry: None,
            blowup: None,
        }
    }

    pub fn with_invariant(mut self, family: impl Into<String>, data: InvariantData) -> Self {
        self.invariants.insert(family.into(), data);
        self
    }

    pub fn with_geometry(mut self, g: Geometry) -> Self {
        self.geometry = Some(g);
        self
    }

    pub fn compactified_by(self, closure: &str, boundary: &str) -> Result<Self> {
        Ok(self.with_geometry(Geometry::Compactification {
            closure: closure.to_string(),
            boundary: ClassSource::parse(boundary)?,
        }))
    }

    pub fn stratified_by(self, strata: &[&str]) -> Result<Self> {
        let strata = strata.iter().map(|s| ClassSource::parse(s)).collect::<Result<_>>()?;
        Ok(self.with_geometry(Geometry::Stratification(strata)))
    }

    fn malformed(&self, msg: impl Into<String>) -> Error {
        Error::MalformedRecord {
            name: self.name.clone(),
            msg: msg.into(),
        }
    }

    /// Index bounds: graded tables live in `0 ≤ j, n ≤ 2·dim`, polynomial
    /// data in `0 ≤ p, q ≤ dim`.
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(self.malformed("empty name"));
        }
        let bound = 2 * self.dim as i64;
        for (family, data) in &self.invariants {
            match data {
                InvariantData::Graded(table) => {
                    for &(j, n) in table.keys() {
                        if j < 0 || n < 0 {
                            return Err(self.malformed(format!(
                                "family {family}: negative index ({j},{n})"
                            )));
                        }
                        if j > bound || n > bound {
                            return Err(self.malformed(format!(
                                "family {family}: index ({j},{n}) exceeds 2·dim = {bound}"
                            )));
                        }
                    }
                }
                InvariantData::Poly(p) => {
                    for ((a, b), _) in p.terms() {
                        if a < 0 || b < 0 || a > self.dim as i64 || b > self.dim as i64 {
                            return Err(self.malformed(format!(
                                "family {family}: monomial u^{a} v^{b} outside 0..={}",
                                self.dim
                            )));
                        }
                    }
                }
            }
        }
        if let Some(b) = &self.blowup {
            if b.codim < 2 {
                return Err(self.malformed("blow-up center must have codimension >= 2"));
            }
        }
        Ok(())
    }
}

/// Append-only set of variety records.
#[derive(Clone, Debug, Default)]
pub struct VarietyDb {
    records: BTreeMap<String, VarietyRecord>,
}

impl VarietyDb {
    pub fn new() -> Self {
        Self::default()
    }

    /// `pt`, `P1`…`P4`, and the open varieties `A1`, `A2`, `Cstar` with
    /// their standard compactifications. Smooth projective records carry
    /// `E`, `e`, `h`, `h_`, `T`, `G`, `F` tables.
    pub fn standard() -> Self {
        let mut db = Self::new();
        for n in 0..=4u32 {
            let name = if n == 0 { "pt".to_string() } else { format!("P{n}") };
            db.insert(projective_space(&name, n)).expect("catalog");
        }
        let open = [
            VarietyRecord::new("A1", 1, false).compactified_by("P1", "[pt]"),
            VarietyRecord::new("A2", 2, false).compactified_by("P2", "[P1]"),
            VarietyRecord::new("Cstar", 1, false).compactified_by("P1", "2*[pt]"),
        ];
        for r in open {
            db.insert(r.expect("catalog")).expect("catalog");
        }
        db
    }

    pub fn insert(&mut self, record: VarietyRecord) -> Result<()> {
        record.validate()?;
        if self.records.contains_key(&record.name) {
            return Err(Error::Duplicate(record.name));
        }
        self.records.insert(record.name.clone(), record);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&VarietyRecord> {
        self.records
            .get(name)
            .ok_or_else(|| Error::UnknownRecord(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.records.contains_key(name)
    }

    pub fn records(&self) -> impl Iterator<Item = &VarietyRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// `P^n` with its cellular invariants: every family is `1` on the diagonal.
pub fn projective_space(name: &str, n: u32) -> VarietyRecord {
    let n = n as i64;
    let diag = |step: i64| -> BTreeMap<Exp2, BigInt> {
        (0..=n).map(|p| ((p, step * p), BigInt::from(1))).collect()
    };
    let e_poly = BiPoly::from_terms((0..=n).map(|p| ((p, p), 1)));
    VarietyRecord::new(name, n as u32, true)
        .with_invariant("E", InvariantData::Poly(e_poly))
        .with_invariant("e", InvariantData::Graded(diag(1)))
        .with_invariant("h", InvariantData::Graded(diag(1)))
        .with_invariant("h_", InvariantData::Graded(diag(1)))
        .with_invariant("T", InvariantData::Graded(diag(2)))
        .with_invariant("G", InvariantData::Graded(diag(2)))
        .with_invariant("F", InvariantData::Graded(diag(2)))
}

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::kgroup::{blowup_class, Generator, InvariantData, KClass, VarietyDb};
use crate::lring::BiPoly;

use super::family::{FamilyKind, InvariantFamily};

/// Families by name.
#[derive(Clone, Debug, Default)]
pub struct Families {
    by_name: BTreeMap<String, InvariantFamily>,
}

/// Built-in names with their type signatures and kinds.
pub const BUILTIN: [(&str, (i64, i64), FamilyKind); 7] = [
    ("T", (1, 2), FamilyKind::Graded),
    ("G", (1, 2), FamilyKind::Graded),
    ("F", (1, 2), FamilyKind::Graded),
    ("h", (1, 1), FamilyKind::Graded),
    ("h_", (1, 1), FamilyKind::Graded),
    ("e", (1, 1), FamilyKind::Graded),
    ("E", (1, 1), FamilyKind::Bipoly),
];

impl Families {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, f: InvariantFamily) -> Result<()> {
        if self.by_name.contains_key(&f.name) {
            return Err(Error::Duplicate(f.name));
        }
        self.by_name.insert(f.name.clone(), f);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&InvariantFamily> {
        self.by_name
            .get(name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut InvariantFamily> {
        self.by_name.get_mut(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &InvariantFamily> {
        self.by_name.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.by_name.keys().map(String::as_str)
    }

    /// Checks `f(Bl) - f(E) = f(X) - f(Y)` for every record declared as a
    /// blow-up and every family with data on all three records.
    pub fn validate_blowups(&self, db: &VarietyDb) -> Result<()> {
        for rec in db.records() {
            let Some(b) = &rec.blowup else { continue };
            let gen = |name: &str| -> Result<KClass> {
                let r = db.get(name)?;
                Ok(KClass::generator(Generator::new(&r.name, r.dim)))
            };
            let (bl, x, y) = (gen(&rec.name)?, gen(&b.base)?, gen(&b.center)?);
            let (_, e) = blowup_class(&x, &y, b.codim)?;
            for f in self.iter() {
                if ![&bl, &x, &y].iter().all(|c| f.covers(c)) {
                    continue;
                }
                let lhs = f.phi_polynomial(&(&bl - &e))?;
                let rhs = f.phi_polynomial(&(&x - &y))?;
                if lhs != rhs {
                    return Err(Error::BlowupViolation {
                        family: f.name.clone(),
                        record: rec.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Registers `T, G, F` (type (1,2)), `h, h_, e` (type (1,1)) and the
/// E-polynomial from the tables carried by the records in `db`.
///
/// `E` and `e` are derived from each other where a record supplies only one.
pub fn define_builtin_families(db: &VarietyDb) -> Result<Families> {
    let mut out = Families::new();
    for (name, sig, kind) in BUILTIN {
        let mut f = InvariantFamily::new(name, sig, kind);
        for rec in db.records() {
            let data = match (name, rec.invariants.get(name)) {
                (_, Some(d)) => d.clone(),
                ("E", None) => match rec.invariants.get("e") {
                    Some(InvariantData::Graded(t)) => {
                        InvariantData::Poly(BiPoly::from_terms(t.iter().map(|(e, v)| (*e, v.clone()))))
                    }
                    _ => continue,
                },
                ("e", None) => match rec.invariants.get("E") {
                    Some(InvariantData::Poly(p)) => InvariantData::Graded(
                        p.terms().map(|(e, c)| (e, c.clone())).collect::<BTreeMap<_, BigInt>>(),
                    ),
                    _ => continue,
                },
                _ => continue,
            };
            f.set_value(&rec.name, data)?;
        }
        f.validate_against(db)?;
        out.insert(f)?;
    }
    out.validate_blowups(db)?;
    Ok(out)
}

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::class::{Generator, KClass};
use super::ops::eval_class;
use super::record::{Geometry, VarietyDb};

/// Rewrites classes over arbitrary records into classes over smooth
/// projective generators, following the compactification and
/// stratification data stored on the records.
pub struct Rewriter<'a> {
    db: &'a VarietyDb,
    memo: HashMap<String, KClass>,
    stack: Vec<String>,
}

impl<'a> Rewriter<'a> {
    pub fn new(db: &'a VarietyDb) -> Self {
        Self {
            db,
            memo: HashMap::new(),
            stack: Vec::new(),
        }
    }

    pub fn rewrite(&mut self, x: &KClass) -> Result<KClass> {
        let mut out = KClass::zero();
        for g in x.generators() {
            let phi = self.generator(g)?;
            out = out + phi.mul_scalar(&x.coefficient(g));
        }
        Ok(out)
    }

    fn generator(&mut self, g: &Generator) -> Result<KClass> {
        if g.is_point() {
            return Ok(KClass::point());
        }
        if let Some(done) = self.memo.get(&g.name) {
            return Ok(done.clone());
        }
        if let Some(at) = self.stack.iter().position(|n| n == &g.name) {
            let mut cycle = self.stack[at..].to_vec();
            cycle.push(g.name.clone());
            return Err(Error::Cycle(cycle));
        }
        let rec = self.db.get(&g.name)?;
        if rec.smooth_projective {
            return Ok(KClass::generator(g.clone()));
        }
        self.stack.push(g.name.clone());
        let result = match &rec.geometry {
            Some(Geometry::Compactification { closure, boundary }) => {
                let closure = self.db.get(closure).and_then(|r| {
                    self.generator(&Generator::new(&r.name, r.dim))
                });
                let boundary = eval_class(&boundary.expr, self.db).and_then(|b| self.rewrite(&b));
                closure.and_then(|c| boundary.map(|b| c - b))
            }
            Some(Geometry::Stratification(strata)) => {
                let mut acc = Ok(KClass::zero());
                for s in strata {
                    acc = acc.and_then(|a| {
                        let c = eval_class(&s.expr, self.db)?;
                        Ok(a + self.rewrite(&c)?)
                    });
                }
                acc
            }
            None => Err(Error::Unresolvable(g.name.clone())),
        };
        self.stack.pop();
        let result = result?;
        self.memo.insert(g.name.clone(), result.clone());
        Ok(result)
    }
}

/// One-shot rewrite of `x` over smooth projective generators.
pub fn bittner_rewrite(x: &KClass, db: &VarietyDb) -> Result<KClass> {
    Rewriter::new(db).rewrite(x)
}

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

use super::fan::{Cone, Fan};
use super::linalg::{q, qdot, solve};

/// A piecewise linear function on the fan: one rational functional per
/// maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    per_cone: BTreeMap<Cone, Vec<BigRational>>,
}

impl SupportFunction {
    /// Functionals equal to `1` on every ray of each maximal cone.
    pub fn from_qgorenstein(fan: &Fan) -> Result<Self> {
        let mut per_cone = BTreeMap::new();
        for c in fan.maximal_cones() {
            if c.is_empty() {
                continue;
            }
            let rows: Vec<Vec<BigRational>> = c
                .iter()
                .map(|&i| fan.ray(i).iter().map(|&x| q(x)).collect())
                .collect();
            let ones = vec![BigRational::one(); c.len()];
            let l = solve(&rows, &ones).ok_or_else(|| Error::NotQGorenstein(format!("{c:?}")))?;
            per_cone.insert(c.clone(), l);
        }
        Ok(Self { per_cone })
    }

    /// User functionals keyed by maximal cone. Each must be positive on the
    /// rays of its cone, equal to `1` there, and neighbours must agree on
    /// shared faces.
    pub fn from_functionals(fan: &Fan, given: BTreeMap<Cone, Vec<BigRational>>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidSupport(msg);
        for (c, l) in &given {
            if !fan.maximal_cones().contains(c) {
                return Err(bad(format!("{c:?} is not a maximal cone of the fan")));
            }
            if l.len() != fan.rank() {
                return Err(bad(format!("functional on {c:?} has {} entries, expected {}", l.len(), fan.rank())));
            }
            for &i in c {
                let v = qdot(l, fan.ray(i));
                if !v.is_positive() {
                    return Err(bad(format!("functional on {c:?} is not positive on ray {i}")));
                }
                if !v.is_one() {
                    return Err(bad(format!("functional on {c:?} takes value {v} on ray {i}, expected 1")));
                }
            }
        }
        if let Some(c) = fan.maximal_cones().iter().find(|c| !c.is_empty() && !given.contains_key(*c)) {
            return Err(bad(format!("no functional for maximal cone {c:?}")));
        }
        let s = Self { per_cone: given };
        s.check_agreement(fan)?;
        Ok(s)
    }

    fn check_agreement(&self, fan: &Fan) -> Result<()> {
        let cones: Vec<(&Cone, &Vec<BigRational>)> = self.per_cone.iter().collect();
        for (a, (ca, la)) in cones.iter().enumerate() {
            for (cb, lb) in &cones[a + 1..] {
                for i in ca.iter().filter(|i| cb.contains(i)) {
                    if qdot(la, fan.ray(*i)) != qdot(lb, fan.ray(*i)) {
                        return Err(Error::InvalidSupport(format!(
                            "functionals on {ca:?} and {cb:?} disagree on ray {i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The functional governing cone `c` (taken from a maximal cone
    /// containing it).
    pub fn functional(&self, c: &[usize]) -> Option<&[BigRational]> {
        self.per_cone
            .iter()
            .find(|(m, _)| c.iter().all(|i| m.contains(i)))
            .map(|(_, l)| l.as_slice())
    }

    pub fn cones(&self) -> impl Iterator<Item = (&Cone, &Vec<BigRational>)> {
        self.per_cone.iter()
    }

    /// `φ(v_i)` for the rays of `c`.
    pub fn ray_values(&self, fan: &Fan, c: &[usize]) -> Result<Vec<BigRational>> {
        let l = self
            .functional(c)
            .ok_or_else(|| Error::InvalidSupport(format!("no functional covers cone {c:?}")))?;
        Ok(c.iter().map(|&i| qdot(l, fan.ray(i))).collect())
    }
}

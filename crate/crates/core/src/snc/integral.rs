use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::invariants::{CheckReport, InvariantFamily};
use crate::kgroup::KClass;
use crate::lring::{BiPoly, BiRational, LefschetzPoly, LefschetzRational};

use super::resolution::{Subset, SncResolution};

fn subsets(s: &SncResolution) -> Vec<Subset> {
    (0..s.open_strata().len() as Subset).collect()
}

/// `∫ L^{-ord D} = Σ_J [D^0_J] ∏_{j∈J} (L - 1)/(L^{a_j+1} - 1)`.
pub fn motivic_integral_snc(s: &SncResolution, exec: Exec) -> Result<KClass> {
    let mults = s.integral_mults()?;
    let factors: Vec<LefschetzRational> = mults
        .iter()
        .zip(s.components())
        .map(|(a, c)| {
            let m = (a + 1u32)
                .to_u32()
                .ok_or_else(|| Error::InvalidResolution(format!("multiplicity of `{}` too large", c.name)))?;
            let lm1 = &LefschetzPoly::l() - &LefschetzPoly::one();
            Ok(LefschetzRational::new(lm1, vec![m]))
        })
        .collect::<Result<_>>()?;
    let open = s.open_strata();
    Ok(exec.map_reduce(
        &subsets(s),
        KClass::zero(),
        |&j| {
            let coeff = factors
                .iter()
                .enumerate()
                .filter(|(i, _)| j >> i & 1 == 1)
                .fold(LefschetzRational::one(), |acc, (_, f)| &acc * f);
            open[j as usize].mul_scalar(&coeff)
        },
        |a, b| a + b,
    ))
}

/// `Σ_J φ(D^0_J) ∏_{j∈J} (q - 1)/(q^{a_j+1} - 1)` with `q = u^a v^b`.
pub fn stringy_phi_snc(f: &InvariantFamily, s: &SncResolution, exec: Exec) -> Result<BiRational> {
    let sig = f.sig;
    let root = s
        .root_order()
        .to_i64()
        .ok_or_else(|| Error::InvalidResolution("discrepancy denominators too large".into()))?;
    let q_minus_1 = BiPoly::binomial((sig.0 * root, sig.1 * root));
    let factors: Vec<BiRational> = s
        .components()
        .iter()
        .map(|c| {
            // (a + 1)·root is integral by choice of root
            let scaled = (&c.mult + BigInt::from(1)) * BigInt::from(root);
            let k = scaled.to_integer().to_i64().filter(|_| scaled.is_integer()).ok_or_else(|| {
                Error::InvalidResolution(format!("multiplicity of `{}` out of range", c.name))
            })?;
            Ok(BiRational::new(q_minus_1.clone(), vec![(sig.0 * k, sig.1 * k)], root, sig))
        })
        .collect::<Result<_>>()?;
    let open = s.open_strata();
    let terms = exec.try_map(&subsets(s), |&j| -> Result<BiRational> {
        let phi = f.phi_polynomial(&open[j as usize])?;
        if phi.is_zero() {
            return Ok(phi);
        }
        Ok(factors
            .iter()
            .enumerate()
            .filter(|(i, _)| j >> i & 1 == 1)
            .fold(phi, |acc, (_, x)| &acc * x))
    })?;
    Ok(terms
        .into_iter()
        .fold(BiRational::zero(sig), |acc, t| &acc + &t))
}

/// Residual of the stringy functions of two resolutions of the same variety.
pub fn resolution_independence_check(
    f: &InvariantFamily,
    s1: &SncResolution,
    s2: &SncResolution,
    exec: Exec,
) -> Result<CheckReport> {
    let a = stringy_phi_snc(f, s1, exec)?;
    let b = stringy_phi_snc(f, s2, exec)?;
    Ok(CheckReport::from_residual(&a - &b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KEquivalenceReport {
    /// Motivic integrals agree exactly; `None` when a discrepancy is not
    /// integral and only the stringy functions were compared.
    pub integrals_agree: Option<bool>,
    pub per_family: Vec<(String, bool)>,
}

impl KEquivalenceReport {
    pub fn holds(&self) -> bool {
        self.integrals_agree
            .unwrap_or_else(|| self.per_family.iter().all(|(_, ok)| *ok))
    }
}

/// Compares two varieties resolved through a common ambient `Z`.
pub fn k_equivalence_check(
    families: &[&InvariantFamily],
    x: &SncResolution,
    y: &SncResolution,
    exec: Exec,
) -> Result<KEquivalenceReport> {
    if x.dim() != y.dim() || x.ambient() != y.ambient() {
        return Err(Error::Setup(
            "K-equivalence needs both resolutions on the same ambient variety".into(),
        ));
    }
    let integrals_agree = match (motivic_integral_snc(x, exec), motivic_integral_snc(y, exec)) {
        (Ok(a), Ok(b)) => Some(a == b),
        (Err(Error::NonIntegral(_)), _) | (_, Err(Error::NonIntegral(_))) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let mut per_family = Vec::new();
    for f in families {
        if !x.open_strata().iter().chain(y.open_strata()).all(|c| f.covers(c)) {
            continue;
        }
        let r = resolution_independence_check(f, x, y, exec)?;
        per_family.push((f.name.clone(), r.holds));
    }
    Ok(KEquivalenceReport {
        integrals_agree,
        per_family,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_rational::BigRational;

    use super::*;
    use crate::invariants::define_builtin_families;
    use crate::kgroup::{parse_class, VarietyDb};
    use crate::parse::parse_bi;
    use crate::snc::{Component, StrataKind};

    fn c(s: &str) -> KClass {
        parse_class(s, &VarietyDb::standard()).unwrap()
    }

    fn e_family() -> InvariantFamily {
        define_builtin_families(&VarietyDb::standard())
            .unwrap()
            .get("E")
            .unwrap()
            .clone()
    }

    /// Minimal resolution of the A1 cone: total space of O(-2) over P^1.
    fn a1_cone(a: i64) -> SncResolution {
        SncResolution::new(
            c("L*[P1]"),
            2,
            vec![Component::integral("E", a)],
            BTreeMap::from([(1, c("[P1]"))]),
            StrataKind::Closed,
            Exec::Parallel,
        )
        .unwrap()
    }

    #[test]
    fn smooth_case() {
        let s = SncResolution::smooth(c("[P3]")).unwrap();
        assert_eq!(motivic_integral_snc(&s, Exec::Sequential).unwrap(), c("[P3]"));
        let e = stringy_phi_snc(&e_family(), &s, Exec::Sequential).unwrap();
        assert_eq!(e, parse_bi("1 + uv + (uv)^2 + (uv)^3", (1, 1)).unwrap());
    }

    #[test]
    fn a1_cone_values() {
        let s = a1_cone(0);
        let m = motivic_integral_snc(&s, Exec::Sequential).unwrap();
        assert_eq!(m, c("L*[P1]"));
        let e = stringy_phi_snc(&e_family(), &s, Exec::Parallel).unwrap();
        assert_eq!(e, parse_bi("uv + (uv)^2", (1, 1)).unwrap());
        let r = resolution_independence_check(&e_family(), &s, &a1_cone(1), Exec::Parallel).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn rational_discrepancy() {
        // one component with a = -1/2: factor (q - 1)/(q^(1/2) - 1) = q^(1/2) + 1
        let s = SncResolution::new(
            c("[P1]"),
            1,
            vec![Component::new("D", BigRational::new(BigInt::from(-1), BigInt::from(2)))],
            BTreeMap::from([(1, c("[pt]"))]),
            StrataKind::Closed,
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(motivic_integral_snc(&s, Exec::Sequential), Err(Error::NonIntegral("D".into())));
        let e = stringy_phi_snc(&e_family(), &s, Exec::Sequential).unwrap();
        assert_eq!(e, parse_bi("uv + 1 + (uv)^(1/2)", (1, 1)).unwrap());
    }

    #[test]
    fn k_equivalence() {
        let fam = e_family();
        let r = k_equivalence_check(&[&fam], &a1_cone(0), &a1_cone(0), Exec::Sequential).unwrap();
        assert!(r.holds());
        let r = k_equivalence_check(&[&fam], &a1_cone(0), &a1_cone(2), Exec::Sequential).unwrap();
        assert!(!r.holds());
        assert_eq!(r.per_family, vec![("E".to_string(), false)]);
        let other = SncResolution::smooth(c("[P2]")).unwrap();
        assert!(matches!(
            k_equivalence_check(&[&fam], &a1_cone(0), &other, Exec::Sequential),
            Err(Error::Setup(_))
        ));
    }
}

use num_bigint::BigInt;

use crate::lring::BiRational;

/// Outcome of an identity check: the residual and whether it vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub holds: bool,
    pub residual: BiRational,
}

impl CheckReport {
    pub fn from_residual(residual: BiRational) -> Self {
        Self {
            holds: residual.is_zero(),
            residual,
        }
    }
}

/// `x - (u^a v^b)^d · x(u^-1, v^-1)` for the type signature carried by `x`.
pub fn gsca_symmetry_check(x: &BiRational, d: i64) -> CheckReport {
    let (a, b) = x.sig();
    let mirror = x.swap().shift((a * d, b * d));
    CheckReport::from_residual(x - &mirror)
}

/// `phi_v - (-u^a)^n · phi_w(u^-1, v)`.
pub fn mirror_check(phi_v: &BiRational, phi_w: &BiRational, n: i64) -> CheckReport {
    let a = phi_v.sig().0;
    let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
    let image = phi_w.invert_u().shift((a * n, 0)).scale(&BigInt::from(sign));
    CheckReport::from_residual(phi_v - &image)
}

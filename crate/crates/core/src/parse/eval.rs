//! Evaluation of scalar expressions into `LefschetzRational` and
//! `BiRational` values.
//!
//! Division is only defined by products of monomials and binomials
//! `±x^a (x^b - 1)`, which is exactly what the renderers emit.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::ast::{Expr, Exponent, Var};
use crate::error::{Error, Result};
use crate::lring::{BiPoly, BiRational, Exp2, LefschetzPoly, LefschetzRational};

fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}

/// Evaluates an expression in `L` (no classes, no `u`, `v`).
pub fn eval_lefschetz(e: &Expr) -> Result<LefschetzRational> {
    Ok(match e {
        Expr::Int(n) => LefschetzPoly::constant(n.clone()).into(),
        Expr::Var(Var::L) => LefschetzPoly::l().into(),
        Expr::Var(v) => return Err(unsupported(format!("variable {v:?} in an L-expression"))),
        Expr::Class(n) => return Err(unsupported(format!("class [{n}] in a scalar expression"))),
        Expr::Neg(a) => -eval_lefschetz(a)?,
        Expr::Add(a, b) => eval_lefschetz(a)? + eval_lefschetz(b)?,
        Expr::Sub(a, b) => eval_lefschetz(a)? - eval_lefschetz(b)?,
        Expr::Mul(a, b) => eval_lefschetz(a)? * eval_lefschetz(b)?,
        Expr::Div(a, b) => divide_lefschetz(eval_lefschetz(a)?, b)?,
        Expr::Inv(a) => divide_lefschetz(LefschetzRational::one(), a)?,
        Expr::Pow(a, exp) => {
            let k = exp
                .as_integer()
                .ok_or_else(|| unsupported("fractional power of L"))?;
            if k >= 0 {
                eval_lefschetz(a)?.pow(k as u32)
            } else {
                let r = divide_lefschetz(LefschetzRational::one(), a)?;
                r.pow((-k) as u32)
            }
        }
    })
}

/// `x / d`, splitting `d` structurally into invertible factors.
pub(crate) fn divide_lefschetz(x: LefschetzRational, d: &Expr) -> Result<LefschetzRational> {
    match d {
        Expr::Mul(a, b) => divide_lefschetz(divide_lefschetz(x, a)?, b),
        Expr::Neg(a) => Ok(-divide_lefschetz(x, a)?),
        Expr::Pow(a, exp) if exp.as_integer().is_some_and(|k| k >= 0) => {
            let mut acc = x;
            for _ in 0..exp.num {
                acc = divide_lefschetz(acc, a)?;
            }
            Ok(acc)
        }
        _ => {
            let v = eval_lefschetz(d)?;
            Ok(x * reciprocal_lefschetz(&v)?)
        }
    }
}

/// `1/v` for `v = ±L^a (L^b - 1) / D`.
pub fn reciprocal_lefschetz(v: &LefschetzRational) -> Result<LefschetzRational> {
    let inv_num = reciprocal_lpoly(v.numerator())?;
    Ok(&inv_num * &LefschetzRational::from(v.denominator_poly()))
}

fn reciprocal_lpoly(p: &LefschetzPoly) -> Result<LefschetzRational> {
    let terms: Vec<(i64, &BigInt)> = p.terms().collect();
    match terms.as_slice() {
        [] => Err(unsupported("division by zero")),
        [(e, c)] if c.abs().is_one() => Ok(LefschetzPoly::monomial((*c).clone(), -e).into()),
        [(lo, clo), (hi, chi)] if chi.abs().is_one() && &-(*clo) == *chi => {
            // chi*L^lo*(L^(hi-lo) - 1)
            let m = u32::try_from(hi - lo).map_err(|_| unsupported("denominator exponent too large"))?;
            Ok(LefschetzRational::new(LefschetzPoly::monomial((*chi).clone(), -lo), vec![m]))
        }
        _ => Err(unsupported(format!(
            "cannot divide by {p}: only ±L^a and ±L^a(L^m - 1) factors are invertible"
        ))),
    }
}

/// Evaluates an expression in `u`, `v` (and `uv`); `L` maps to `u^a v^b` for
/// the given type signature.
pub fn eval_bi(e: &Expr, sig: Exp2) -> Result<BiRational> {
    let mono = |exp: Exp2| BiRational::from_poly(BiPoly::monomial(1, exp), sig);
    Ok(match e {
        Expr::Int(n) => BiRational::from_poly(BiPoly::constant(n.clone()), sig),
        Expr::Var(Var::L) => mono(sig),
        Expr::Var(Var::U) => mono((1, 0)),
        Expr::Var(Var::V) => mono((0, 1)),
        Expr::Var(Var::Uv) => mono((1, 1)),
        Expr::Class(n) => return Err(unsupported(format!("class [{n}] in a polynomial expression"))),
        Expr::Neg(a) => -eval_bi(a, sig)?,
        Expr::Add(a, b) => eval_bi(a, sig)? + eval_bi(b, sig)?,
        Expr::Sub(a, b) => eval_bi(a, sig)? - eval_bi(b, sig)?,
        Expr::Mul(a, b) => eval_bi(a, sig)? * eval_bi(b, sig)?,
        Expr::Div(a, b) => divide_bi(eval_bi(a, sig)?, b, sig)?,
        Expr::Inv(a) => divide_bi(BiRational::from_poly(BiPoly::one(), sig), a, sig)?,
        Expr::Pow(a, exp) => pow_bi(a, *exp, sig)?,
    })
}

fn pow_bi(base: &Expr, exp: Exponent, sig: Exp2) -> Result<BiRational> {
    if let Some(k) = exp.as_integer() {
        return if k >= 0 {
            Ok(eval_bi(base, sig)?.pow(k as u32))
        } else {
            let r = divide_bi(BiRational::from_poly(BiPoly::one(), sig), base, sig)?;
            Ok(r.pow((-k) as u32))
        };
    }
    let b = eval_bi(base, sig)?;
    let mono = b
        .as_monomial_scaled()
        .ok_or_else(|| unsupported("fractional power of a non-monomial"))?;
    let root = b.root() * exp.den;
    let e = (mono.0 * exp.num, mono.1 * exp.num);
    Ok(BiRational::new(BiPoly::monomial(1, e), Vec::new(), root, sig))
}

fn divide_bi(x: BiRational, d: &Expr, sig: Exp2) -> Result<BiRational> {
    match d {
        Expr::Mul(a, b) => divide_bi(divide_bi(x, a, sig)?, b, sig),
        Expr::Neg(a) => Ok(-divide_bi(x, a, sig)?),
        Expr::Pow(a, exp) if exp.as_integer().is_some_and(|k| k >= 0) => {
            let mut acc = x;
            for _ in 0..exp.num {
                acc = divide_bi(acc, a, sig)?;
            }
            Ok(acc)
        }
        _ => {
            let v = eval_bi(d, sig)?;
            Ok(x * reciprocal_bi(&v)?)
        }
    }
}

/// `1/v` for `v = ±x^a (x^b - 1) / D`.
pub fn reciprocal_bi(v: &BiRational) -> Result<BiRational> {
    let (sig, root) = (v.sig(), v.root());
    let terms: Vec<(Exp2, &BigInt)> = v.numerator().terms().collect();
    let inv_num = match terms.as_slice() {
        [] => return Err(unsupported("division by zero")),
        [(e, c)] if c.abs().is_one() => {
            BiRational::new(BiPoly::monomial((*c).clone(), (-e.0, -e.1)), Vec::new(), root, sig)
        }
        [(lo, clo), (hi, chi)] if chi.abs().is_one() && &-(*clo) == *chi => BiRational::new(
            BiPoly::monomial((*chi).clone(), (-lo.0, -lo.1)),
            vec![(hi.0 - lo.0, hi.1 - lo.1)],
            root,
            sig,
        ),
        _ => {
            return Err(unsupported(format!(
                "cannot divide by {v}: only ±x^a and ±x^a(x^b - 1) factors are invertible"
            )))
        }
    };
    let den = v
        .denominator()
        .iter()
        .fold(BiPoly::one(), |acc, e| &acc * &BiPoly::binomial(*e));
    Ok(&inv_num * &BiRational::new(den, Vec::new(), root, sig))
}

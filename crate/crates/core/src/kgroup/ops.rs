use crate::error::{Error, Result};
use crate::lring::{LefschetzPoly, LefschetzRational};
use crate::parse::{divide_lefschetz, eval_lefschetz, parse_class_expr, Expr, Kind};

use super::class::{Generator, KClass};
use super::record::VarietyDb;

/// Evaluates a parsed class expression against the records in `db`.
pub fn eval_class(e: &Expr, db: &VarietyDb) -> Result<KClass> {
    if e.kind()? == Kind::Scalar {
        return Ok(KClass::scalar(&eval_lefschetz(e)?));
    }
    Ok(match e {
        Expr::Class(name) => {
            let r = db.get(name)?;
            KClass::generator(Generator::new(&r.name, r.dim))
        }
        Expr::Neg(a) => -eval_class(a, db)?,
        Expr::Add(a, b) => eval_class(a, db)? + eval_class(b, db)?,
        Expr::Sub(a, b) => eval_class(a, db)? - eval_class(b, db)?,
        Expr::Mul(a, b) => {
            let (s, c) = if a.kind()? == Kind::Scalar { (a, b) } else { (b, a) };
            eval_class(c, db)?.mul_scalar(&eval_lefschetz(s)?)
        }
        Expr::Div(a, b) => {
            let inv = divide_lefschetz(LefschetzRational::one(), b)?;
            eval_class(a, db)?.mul_scalar(&inv)
        }
        Expr::Int(_) | Expr::Var(_) | Expr::Pow(..) | Expr::Inv(_) => {
            unreachable!("scalar kinds handled above")
        }
    })
}

/// Parses and evaluates a class expression.
pub fn parse_class(src: &str, db: &VarietyDb) -> Result<KClass> {
    eval_class(&parse_class_expr(src)?, db)
}

/// `Σ_{j=lo}^{hi} L^j`
fn l_range(lo: i64, hi: i64) -> LefschetzRational {
    LefschetzPoly::from_terms((lo..=hi).map(|j| (j, 1))).into()
}

/// Blow-up of `x` along `y` in codimension `codim`.
///
/// Returns `([Bl_Y X], [E(Y)])` with `[Bl] = [X] + Σ_{j=1}^{c-1} L^j [Y]` and
/// `[E] = Σ_{j=0}^{c-1} L^j [Y]`.
pub fn blowup_class(x: &KClass, y: &KClass, codim: u32) -> Result<(KClass, KClass)> {
    if codim < 2 {
        return Err(Error::DimensionMismatch(format!(
            "blow-up center must have codimension >= 2, got {codim}"
        )));
    }
    match (x.virtual_dim(), y.virtual_dim()) {
        (Some(dx), Some(dy)) if dx - dy == codim as i64 => {}
        (dx, dy) => {
            return Err(Error::DimensionMismatch(format!(
                "dim X = {}, dim Y = {}, codim = {codim}",
                fmt_dim(dx),
                fmt_dim(dy)
            )))
        }
    }
    let c = codim as i64;
    let bl = x + &y.mul_scalar(&l_range(1, c - 1));
    let e = y.mul_scalar(&l_range(0, c - 1));
    Ok((bl, e))
}

fn fmt_dim(d: Option<i64>) -> String {
    d.map_or_else(|| "undefined (zero class)".to_string(), |d| d.to_string())
}

/// Class of a `P^r`-bundle over `y`: `Σ_{j=0}^{r} L^j [Y]`.
pub fn projective_bundle_class(y: &KClass, r: u32) -> KClass {
    y.mul_scalar(&l_range(0, r as i64))
}

/// Equality modulo `F^k`: the difference vanishes or has filtration index
/// strictly above `k`. `None` asks for exact equality.
pub fn eq_mod_filtration(x: &KClass, y: &KClass, k: Option<i64>) -> bool {
    let d = x - y;
    match (d.filtration_index(), k) {
        (Err(_), _) => true,
        (Ok(_), None) => false,
        (Ok(i), Some(k)) => i > k,
    }
}

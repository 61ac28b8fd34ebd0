use num_bigint::BigInt;

/// Variables admitted by the expression language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    /// The Lefschetz class.
    L,
    U,
    V,
    /// The product `u*v`, written `uv`.
    Uv,
}

/// A rational exponent `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub num: i64,
    pub den: i64,
}

impl Exponent {
    pub fn integer(n: i64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.den == 1).then_some(self.num)
    }
}

/// Parsed expression tree shared by the class language and the polynomial
/// language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(Var),
    /// `[name]`
    Class(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    /// `inv(expr)`
    Inv(Box<Expr>),
}

/// Whether a subexpression denotes a scalar or a class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Scalar,
    Class,
}

impl Expr {
    /// Type-checks the module structure: classes may be added, and multiplied
    /// only by scalars.
    pub fn kind(&self) -> crate::Result<Kind> {
        use crate::Error;
        Ok(match self {
            Expr::Int(_) | Expr::Var(_) => Kind::Scalar,
            Expr::Class(_) => Kind::Class,
            Expr::Neg(a) => a.kind()?,
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                if a.kind()? == Kind::Class || b.kind()? == Kind::Class {
                    Kind::Class
                } else {
                    Kind::Scalar
                }
            }
            Expr::Mul(a, b) => match (a.kind()?, b.kind()?) {
                (Kind::Class, Kind::Class) => return Err(Error::ClassProduct),
                (Kind::Scalar, Kind::Scalar) => Kind::Scalar,
                _ => Kind::Class,
            },
            Expr::Div(a, b) => {
                if b.kind()? == Kind::Class {
                    return Err(Error::Unsupported("division by a class".into()));
                }
                a.kind()?
            }
            Expr::Pow(a, _) => {
                if a.kind()? == Kind::Class {
                    return Err(Error::ClassProduct);
                }
                Kind::Scalar
            }
            Expr::Inv(a) => {
                if a.kind()? == Kind::Class {
                    return Err(Error::Unsupported("inv() of a class".into()));
                }
                Kind::Scalar
            }
        })
    }

    /// Variables appearing anywhere in the tree.
    pub fn visit_vars(&self, f: &mut impl FnMut(Var)) {
        match self {
            Expr::Var(v) => f(*v),
            Expr::Int(_) | Expr::Class(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Inv(a) => a.visit_vars(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Record names referenced by `[name]` leaves.
    pub fn class_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Class(n) => out.push(n),
            Expr::Int(_) | Expr::Var(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Inv(a) => a.collect_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

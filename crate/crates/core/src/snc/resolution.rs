use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::kgroup::KClass;

/// Largest number of divisor components accepted (strata are indexed by
/// subsets, so work grows like `3^r`).
pub const MAX_COMPONENTS: usize = 20;

/// A subset `J ⊆ {1..r}` as a bitmask, bit `i` standing for component `i+1`.
pub type Subset = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    /// Discrepancy `a_i`.
    pub mult: BigRational,
}

impl Component {
    pub fn new(name: impl Into<String>, mult: BigRational) -> Self {
        Self {
            name: name.into(),
            mult,
        }
    }

    pub fn integral(name: impl Into<String>, mult: i64) -> Self {
        Self::new(name, BigRational::from_integer(mult.into()))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StrataKind {
    /// Classes of `D_J = ∩_{j∈J} D_j`.
    #[default]
    Closed,
    /// Classes of `D^0_J = D_J ∖ ∪_{i∉J} D_i`.
    Open,
}

/// Resolution data: a smooth ambient `Y` of dimension `d` with a simple
/// normal crossing divisor `Σ a_i D_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncResolution {
    ambient: KClass,
    dim: u32,
    components: Vec<Component>,
    closed: Vec<KClass>,
    open: Vec<KClass>,
}

/// `"1,3"` for `{1, 3}`, `""` for the empty set.
pub fn subset_label(j: Subset) -> String {
    (0..Subset::BITS)
        .filter(|i| j >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Inverse of [`subset_label`]; accepts whitespace and any order.
pub fn parse_subset(label: &str, r: usize) -> Result<Subset> {
    let mut j: Subset = 0;
    for part in label.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: usize = part
            .parse()
            .map_err(|_| Error::InvalidResolution(format!("bad subset label `{label}`")))?;
        if i == 0 || i > r {
            return Err(Error::InvalidResolution(format!(
                "subset `{label}` names component {i}, expected 1..={r}"
            )));
        }
        j |= 1 << (i - 1);
    }
    Ok(j)
}

/// `Σ_{J' ⊇ J} sign^{|J'|-|J|} x[J']` for every `J`.
fn superset_transform(x: &[KClass], negate: bool, exec: Exec) -> Vec<KClass> {
    let full = x.len() as Subset - 1;
    let subsets: Vec<Subset> = (0..=full).collect();
    exec.map(&subsets, |&j| {
        let rest = full & !j;
        let mut acc = KClass::zero();
        // all subsets s of `rest`
        let mut s = rest;
        loop {
            let term = &x[(j | s) as usize];
            if negate && s.count_ones() % 2 == 1 {
                acc = acc - term;
            } else {
                acc = acc + term;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
        acc
    })
}

/// `[D^0_J] = Σ_{J'⊇J} (-1)^{|J'|-|J|} [D_{J'}]`, indexed by subset mask.
pub fn open_from_closed(closed: &[KClass], exec: Exec) -> Vec<KClass> {
    superset_transform(closed, true, exec)
}

/// `[D_J] = Σ_{J'⊇J} [D^0_{J'}]`, indexed by subset mask.
pub fn closed_from_open(open: &[KClass], exec: Exec) -> Vec<KClass> {
    superset_transform(open, false, exec)
}

impl SncResolution {
    /// Validates and normalizes resolution data.
    ///
    /// Missing closed strata are accepted only when a listed subset of `J`
    /// already has class `0`; a missing `∅` entry defaults to the ambient.
    pub fn new(
        ambient: KClass,
        dim: u32,
        components: Vec<Component>,
        strata: BTreeMap<Subset, KClass>,
        kind: StrataKind,
        exec: Exec,
    ) -> Result<Self> {
        let r = components.len();
        if r > MAX_COMPONENTS {
            return Err(Error::InvalidResolution(format!(
                "{r} components exceeds the limit of {MAX_COMPONENTS}"
            )));
        }
        for c in &components {
            if c.mult <= -BigRational::one() {
                return Err(Error::NotLogTerminal(c.name.clone()));
            }
        }
        if ambient.virtual_dim() != Some(dim as i64) {
            return Err(Error::DimensionMismatch(format!(
                "ambient class has dimension {:?}, declared {dim}",
                ambient.virtual_dim()
            )));
        }
        let full: Subset = if r == 0 { 0 } else { (1 << r) - 1 };
        if let Some(bad) = strata.keys().find(|&&j| j & !full != 0) {
            return Err(Error::InvalidResolution(format!("subset mask {bad:#b} out of range")));
        }
        let mut table = vec![None; 1 << r];
        for (j, c) in strata {
            table[j as usize] = Some(c);
        }
        let (closed, open) = match kind {
            StrataKind::Closed => {
                match &table[0] {
                    Some(y) if *y != ambient => {
                        return Err(Error::InvalidResolution(
                            "stratum for the empty set differs from the ambient class".into(),
                        ))
                    }
                    _ => table[0] = Some(ambient.clone()),
                }
                let zero_listed: Vec<Subset> = (0..=full)
                    .filter(|&j| table[j as usize].as_ref().is_some_and(KClass::is_zero))
                    .collect();
                let mut closed = Vec::with_capacity(table.len());
                for j in 0..=full {
                    match table[j as usize].take() {
                        Some(c) => closed.push(c),
                        None if zero_listed.iter().any(|&z| z & j == z) => closed.push(KClass::zero()),
                        None => return Err(Error::IncompleteStrata(subset_label(j))),
                    }
                }
                let open = open_from_closed(&closed, exec);
                (closed, open)
            }
            StrataKind::Open => {
                let mut open = Vec::with_capacity(table.len());
                for j in 0..=full {
                    open.push(
                        table[j as usize]
                            .take()
                            .ok_or_else(|| Error::IncompleteStrata(subset_label(j)))?,
                    );
                }
                let closed = closed_from_open(&open, exec);
                if closed[0] != ambient {
                    return Err(Error::InvalidResolution(
                        "open strata do not sum to the ambient class".into(),
                    ));
                }
                (closed, open)
            }
        };
        for (j, c) in closed.iter().enumerate() {
            let bound = dim as i64 - (j as Subset).count_ones() as i64;
            if let Some(d) = c.virtual_dim() {
                if d > bound {
                    return Err(Error::DimensionMismatch(format!(
                        "stratum {{{}}} has dimension {d} > {bound}",
                        subset_label(j as Subset)
                    )));
                }
            }
        }
        Ok(Self {
            ambient,
            dim,
            components,
            closed,
            open,
        })
    }

    /// Smooth variety with empty divisor.
    pub fn smooth(ambient: KClass) -> Result<Self> {
        let dim = ambient
            .virtual_dim()
            .and_then(|d| u32::try_from(d).ok())
            .ok_or_else(|| Error::InvalidResolution("ambient class has no dimension".into()))?;
        Self::new(ambient, dim, Vec::new(), BTreeMap::new(), StrataKind::Closed, Exec::Sequential)
    }

    pub fn ambient(&self) -> &KClass {
        &self.ambient
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `[D_J]` indexed by subset mask.
    pub fn closed_strata(&self) -> &[KClass] {
        &self.closed
    }

    /// `[D^0_J]` indexed by subset mask.
    pub fn open_strata(&self) -> &[KClass] {
        &self.open
    }

    /// Integer discrepancies, or the first component that is not integral.
    pub fn integral_mults(&self) -> Result<Vec<BigInt>> {
        self.components
            .iter()
            .map(|c| {
                if c.mult.is_integer() {
                    Ok(c.mult.to_integer())
                } else {
                    Err(Error::NonIntegral(c.name.clone()))
                }
            })
            .collect()
    }

    /// Common denominator of the discrepancies.
    pub fn root_order(&self) -> BigInt {
        self.components
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.mult.denom().abs()))
    }
}

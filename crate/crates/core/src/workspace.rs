//! JSON inputs: workspaces (records, families, config), family tables,
//! SNC resolution data and fans.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::invariants::{define_builtin_families, Families, FamilyKind, InvariantFamily};
use crate::kgroup::{
    bittner_rewrite, parse_class, BlowupOf, ClassSource, Geometry, InvariantData, KClass, VarietyDb,
    VarietyRecord,
};
use crate::lring::{BiPoly, BiRational, Exp2};
use crate::parse::parse_bi;
use crate::snc::{parse_subset, Component, SncResolution, StrataKind};
use crate::toric::{Fan, SupportFunction, DEFAULT_DET_LIMIT};

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T> {
    serde_json::from_value(v).map_err(|e| input(format!("{what}: {e}")))
}

/// Parses JSON text.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| input(format!("malformed JSON: {e}")))
}

/// A rational given as a JSON integer or a string like `"-1/2"`.
pub fn rational_from(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| input(format!("expected an integer or a fraction string, got {n}"))),
        Value::String(s) => {
            BigRational::from_str(s.trim()).map_err(|_| input(format!("`{s}` is not a rational number")))
        }
        other => Err(input(format!("expected a rational, got {other}"))),
    }
}

/// `"(j,n)"` → `(j, n)`.
fn index_pair(key: &str) -> Result<Exp2> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| input(format!("table key `{key}` should look like \"(j,n)\"")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [j, n] => Ok((
            j.parse().map_err(|_| input(format!("bad index in `{key}`")))?,
            n.parse().map_err(|_| input(format!("bad index in `{key}`")))?,
        )),
        _ => Err(input(format!("table key `{key}` should look like \"(j,n)\""))),
    }
}

/// A graded table `{"(j,n)": int}` or a polynomial string.
fn invariant_data(v: &Value, sig: Exp2) -> Result<InvariantData> {
    match v {
        Value::Object(map) => {
            let mut t = BTreeMap::new();
            for (k, x) in map {
                let c = x
                    .as_i64()
                    .ok_or_else(|| input(format!("table entry `{k}` must be an integer")))?;
                if c != 0 {
                    t.insert(index_pair(k)?, BigInt::from(c));
                }
            }
            Ok(InvariantData::Graded(t))
        }
        Value::String(s) => {
            let r = parse_bi(s, sig)?;
            let p = r
                .as_polynomial()
                .ok_or_else(|| input(format!("`{s}` is not a polynomial in u, v")))?;
            Ok(InvariantData::Poly(p))
        }
        other => Err(input(format!("invariant values must be a table or a string, got {other}"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompactification {
    closure: String,
    boundary: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlowup {
    base: String,
    center: String,
    codim: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawVariety {
    name: String,
    dim: u32,
    smooth_projective: bool,
    #[serde(default)]
    invariants: BTreeMap<String, Value>,
    compactification: Option<RawCompactification>,
    stratification: Option<Vec<String>>,
    blowup: Option<RawBlowup>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    name: String,
    #[serde(rename = "type")]
    sig: (i64, i64),
    kind: String,
    #[serde(default)]
    values: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase", default)]
pub struct Config {
    /// Bound on `|det|` for box enumeration.
    pub det_limit: u64,
    /// Default expansion order.
    pub order: u32,
    /// Default filtration level for class comparison; `None` is exact.
    pub precision: Option<i64>,
    pub json: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            det_limit: DEFAULT_DET_LIMIT,
            order: 10,
            precision: None,
            json: false,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWorkspace {
    #[serde(default)]
    varieties: Vec<RawVariety>,
    #[serde(default)]
    families: Vec<Value>,
    #[serde(default)]
    config: Config,
}

/// Record database, families and settings.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub db: VarietyDb,
    pub families: Families,
    pub config: Config,
    pub exec: Exec,
}

/// Builtin signature for a family name, used when a variety's invariant
/// table is attached before any family is declared.
fn default_sig(name: &str) -> Exp2 {
    match name {
        "T" | "G" | "F" => (1, 2),
        _ => (1, 1),
    }
}

/// Parses a family description.
pub fn family_from_json(v: Value) -> Result<InvariantFamily> {
    let raw: RawFamily = from_value(v, "family")?;
    let kind = match raw.kind.as_str() {
        "graded" => FamilyKind::Graded,
        "bipoly" => FamilyKind::Bipoly,
        k => return Err(input(format!("family kind must be \"graded\" or \"bipoly\", got `{k}`"))),
    };
    let mut f = InvariantFamily::new(raw.name, raw.sig, kind);
    for (g, x) in &raw.values {
        f.set_value(g, invariant_data(x, raw.sig)?)?;
    }
    Ok(f)
}

impl Default for Workspace {
    fn default() -> Self {
        Self::standard()
    }
}

impl Workspace {
    /// The standard catalog with the builtin families.
    pub fn standard() -> Self {
        let db = VarietyDb::standard();
        let families = define_builtin_families(&db).expect("catalog tables are consistent");
        Self {
            db,
            families,
            config: Config::default(),
            exec: Exec::default(),
        }
    }

    /// The standard catalog extended by a workspace file.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawWorkspace = from_value(parse_json(text)?, "workspace")?;
        let mut db = VarietyDb::standard();
        for v in raw.varieties {
            db.insert(variety(v)?)?;
        }
        let mut families = define_builtin_families(&db)?;
        for fv in raw.families {
            let f = family_from_json(fv)?;
            match families.get_mut(&f.name) {
                Some(existing) if existing.sig == f.sig && existing.kind == f.kind => {
                    for (g, d) in f.values() {
                        existing.set_value(g.clone(), d.clone())?;
                    }
                }
                Some(_) => return Err(Error::Duplicate(f.name)),
                None => families.insert(f)?,
            }
        }
        for f in families.iter() {
            f.validate_against(&db)?;
        }
        families.validate_blowups(&db)?;
        Ok(Self {
            db,
            families,
            config: raw.config,
            exec: Exec::default(),
        })
    }

    pub fn family(&self, name: &str) -> Result<&InvariantFamily> {
        self.families.get(name)
    }

    pub fn class(&self, src: &str) -> Result<KClass> {
        parse_class(src, &self.db)
    }

    /// Rewrites over smooth projective generators when `f` lacks data for
    /// some generator of `c`.
    fn covered(&self, f: &InvariantFamily, c: &KClass) -> Result<KClass> {
        if f.covers(c) {
            return Ok(c.clone());
        }
        bittner_rewrite(c, &self.db)
    }

    pub fn evaluate(&self, family: &str, c: &KClass, j: i64, n: i64) -> Result<BigInt> {
        let f = self.family(family)?;
        f.evaluate(&self.covered(f, c)?, j, n)
    }

    pub fn phi(&self, family: &str, c: &KClass) -> Result<BiRational> {
        let f = self.family(family)?;
        f.phi_polynomial(&self.covered(f, c)?)
    }

    /// Resolution data with strata classes read against this workspace.
    pub fn resolution_from_json(&self, v: Value) -> Result<SncResolution> {
        let raw: RawResolution = from_value(v, "resolution")?;
        let ambient = self.class(&raw.ambient.class)?;
        let components = raw
            .components
            .iter()
            .map(|c| Ok(Component::new(c.name.clone(), rational_from(&c.mult)?)))
            .collect::<Result<Vec<_>>>()?;
        let r = components.len();
        let mut strata = BTreeMap::new();
        for (k, expr) in &raw.strata {
            let j = if k.trim() == "∅" { 0 } else { parse_subset(k, r)? };
            if strata.insert(j, self.class(expr)?).is_some() {
                return Err(input(format!("stratum `{k}` listed twice")));
            }
        }
        let kind = match raw.strata_kind.as_deref() {
            None | Some("closed") => StrataKind::Closed,
            Some("open") => StrataKind::Open,
            Some(k) => return Err(input(format!("strataKind must be \"closed\" or \"open\", got `{k}`"))),
        };
        SncResolution::new(ambient, raw.ambient.dim, components, strata, kind, self.exec)
    }
}

fn variety(v: RawVariety) -> Result<VarietyRecord> {
    let mut r = VarietyRecord::new(v.name, v.dim, v.smooth_projective);
    for (fam, x) in &v.invariants {
        r.invariants.insert(fam.clone(), invariant_data(x, default_sig(fam))?);
    }
    r.geometry = match (v.compactification, v.stratification) {
        (Some(_), Some(_)) => {
            return Err(Error::MalformedRecord {
                name: r.name,
                msg: "give either a compactification or a stratification, not both".into(),
            })
        }
        (Some(c), None) => Some(Geometry::Compactification {
            closure: c.closure,
            boundary: ClassSource::parse(&c.boundary)?,
        }),
        (None, Some(s)) => Some(Geometry::Stratification(
            s.iter().map(|x| ClassSource::parse(x)).collect::<Result<_>>()?,
        )),
        (None, None) => None,
    };
    r.blowup = v.blowup.map(|b| BlowupOf {
        base: b.base,
        center: b.center,
        codim: b.codim,
    });
    Ok(r)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmbient {
    class: String,
    dim: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    name: String,
    mult: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct RawResolution {
    ambient: RawAmbient,
    #[serde(default)]
    components: Vec<RawComponent>,
    #[serde(default)]
    strata: BTreeMap<String, String>,
    strata_kind: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    #[serde(default)]
    complete: bool,
    support: Option<Value>,
}

/// A fan with its support function.
pub fn fan_from_json(v: Value) -> Result<(Fan, SupportFunction)> {
    let raw: RawFan = from_value(v, "fan")?;
    let fan = Fan::new(raw.rank, raw.rays, raw.cones.clone(), raw.complete)?;
    let support = match raw.support {
        None => SupportFunction::from_qgorenstein(&fan)?,
        Some(Value::String(s)) if s == "qgorenstein" => SupportFunction::from_qgorenstein(&fan)?,
        Some(Value::Object(map)) => {
            let mut given = BTreeMap::new();
            for (k, x) in map {
                let idx: usize = k
                    .parse()
                    .map_err(|_| input(format!("support key `{k}` is not a cone index")))?;
                let mut cone = raw
                    .cones
                    .get(idx)
                    .ok_or_else(|| input(format!("support key `{k}` names no cone")))?
                    .clone();
                cone.sort_unstable();
                cone.dedup();
                let Value::Array(xs) = x else {
                    return Err(input(format!("support for cone {k} must be a list")));
                };
                let l = xs.iter().map(rational_from).collect::<Result<Vec<_>>>()?;
                given.insert(cone, l);
            }
            SupportFunction::from_functionals(&fan, given)?
        }
        Some(other) => {
            return Err(input(format!(
                "support must be \"qgorenstein\" or a map of cone index to functional, got {other}"
            )))
        }
    };
    Ok((fan, support))
}

/// What a JSON input file describes.
pub enum Input {
    Fan(Fan, SupportFunction),
    Resolution(SncResolution),
}

impl Workspace {
    /// Classifies a JSON document: fans carry `rays`, resolutions `ambient`.
    pub fn input_from_json(&self, v: Value) -> Result<Input> {
        if v.get("rays").is_some() {
            let (f, s) = fan_from_json(v)?;
            Ok(Input::Fan(f, s))
        } else if v.get("ambient").is_some() {
            Ok(Input::Resolution(self.resolution_from_json(v)?))
        } else {
            Err(input("JSON input is neither a fan (needs \"rays\") nor a resolution (needs \"ambient\")"))
        }
    }
}

/// A polynomial in `u, v` given as text, for the family's signature.
pub fn bi_from_text(src: &str, sig: Exp2) -> Result<BiRational> {
    parse_bi(src, sig)
}

/// `Σ e^{p,q} u^p v^q` as a polynomial.
pub fn poly_of_table(t: &BTreeMap<Exp2, BigInt>) -> BiPoly {
    BiPoly::from_terms(t.iter().map(|(e, c)| (*e, c.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workspace_file() {
        let ws = Workspace::from_json(
            r#"{
              "varieties": [
                {"name": "Bl", "dim": 2, "smoothProjective": true,
                 "invariants": {"E": "1 + 2*uv + (uv)^2"},
                 "blowup": {"base": "P2", "center": "pt", "codim": 2}},
                {"name": "U", "dim": 2, "smoothProjective": false,
                 "compactification": {"closure": "Bl", "boundary": "[P1] + L"}}
              ],
              "families": [
                {"name": "chi", "type": [0, 0], "kind": "graded",
                 "values": {"Bl": {"(0,0)": 4}, "pt": {"(0,0)": 1}}}
              ],
              "config": {"detLimit": 500}
            }"#,
        )
        .unwrap();
        assert_eq!(ws.config.det_limit, 500);
        let u = ws.class("[U]").unwrap();
        assert_eq!(ws.phi("E", &u).unwrap(), parse_bi("(uv)^2", (1, 1)).unwrap());
        assert_eq!(ws.evaluate("chi", &ws.class("[Bl] - 2").unwrap(), 0, 0).unwrap(), BigInt::from(2));
    }

    #[test]
    fn violations_are_reported() {
        let bad = r#"{"varieties": [{"name": "Bl", "dim": 2, "smoothProjective": true,
            "invariants": {"E": "1 + uv + (uv)^2"},
            "blowup": {"base": "P2", "center": "pt", "codim": 2}}]}"#;
        assert!(matches!(Workspace::from_json(bad), Err(Error::BlowupViolation { .. })));
        assert!(matches!(Workspace::from_json("{"), Err(Error::Input(_))));
        assert!(matches!(Workspace::from_json(r#"{"bogus": 1}"#), Err(Error::Input(_))));
    }

    #[test]
    fn resolution_and_fan_inputs() {
        let ws = Workspace::standard();
        let res = parse_json(
            r#"{"ambient": {"class": "L*[P1]", "dim": 2},
                "components": [{"name": "E", "mult": "0"}],
                "strata": {"1": "[P1]"}}"#,
        )
        .unwrap();
        let Input::Resolution(s) = ws.input_from_json(res).unwrap() else { panic!() };
        assert_eq!(s.components().len(), 1);

        let fan = parse_json(
            r#"{"rank": 2, "rays": [[1,0],[0,1],[-1,-2]], "cones": [[0,1],[1,2],[0,2]],
                "complete": true, "support": {"0": [1, 1], "1": ["-3", 1], "2": [1, "-1"]}}"#,
        )
        .unwrap();
        let Input::Fan(f, _) = ws.input_from_json(fan).unwrap() else { panic!() };
        assert_eq!(f.cone_counts(), vec![1, 3, 3]);
        assert!(index_pair("(1, 2)").is_ok() && index_pair("1,2").is_err());
    }
}

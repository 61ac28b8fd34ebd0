//! Text and JSON renderings of results.

use motivic_core::invariants::CheckReport;
use motivic_core::kgroup::KClass;
use motivic_core::lring::{BiPoly, BiRational};
use motivic_core::snc::KEquivalenceReport;
use num_bigint::BigInt;
use serde_json::{json, Value};

pub fn bi_json(x: &BiRational) -> Value {
    let (a, b) = x.sig();
    json!({
        "text": x.render(),
        "sig": [a, b],
        "root": x.root(),
        "numerator": x
            .numerator()
            .terms()
            .map(|((p, q), c)| json!([p, q, c.to_string()]))
            .collect::<Vec<_>>(),
        "denominator": x.denominator().iter().map(|(p, q)| json!([p, q])).collect::<Vec<_>>(),
    })
}

pub fn poly_json(p: &BiPoly) -> Value {
    bi_json(&BiRational::from_poly(p.clone(), (1, 1)))
}

pub fn int_json(n: &BigInt) -> Value {
    json!({ "value": n.to_string() })
}

pub fn class_json(c: &KClass) -> Value {
    json!({
        "text": c.render(),
        "virtualDim": c.virtual_dim(),
        "terms": c
            .terms()
            .map(|(g, p)| json!({ "generator": g.name, "dim": g.dim, "coefficient": p.render("L") }))
            .collect::<Vec<_>>(),
        "denominator": c.denominator(),
    })
}

pub fn check_text(name: &str, r: &CheckReport) -> String {
    let verdict = if r.holds { "holds" } else { "fails" };
    format!("{name}: {verdict}\nresidual: {}", r.residual.render())
}

pub fn check_json(name: &str, r: &CheckReport) -> Value {
    json!({ "check": name, "holds": r.holds, "residual": bi_json(&r.residual) })
}

pub fn kequiv_text(r: &KEquivalenceReport) -> String {
    let mut out = vec![format!("k-equivalence: {}", if r.holds() { "holds" } else { "fails" })];
    out.push(match r.integrals_agree {
        Some(true) => "integrals: equal".into(),
        Some(false) => "integrals: differ".into(),
        None => "integrals: not integral, compared per family".into(),
    });
    for (f, ok) in &r.per_family {
        out.push(format!("{f}: {}", if *ok { "equal" } else { "differ" }));
    }
    out.join("\n")
}

pub fn kequiv_json(r: &KEquivalenceReport) -> Value {
    json!({
        "check": "k-equiv",
        "holds": r.holds(),
        "integralsAgree": r.integrals_agree,
        "families": r.per_family.iter().map(|(f, ok)| (f.clone(), Value::Bool(*ok))).collect::<serde_json::Map<_, _>>(),
    })
}

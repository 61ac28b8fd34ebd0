mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use motivic_core::invariants::{gsca_symmetry_check, mirror_check, CheckReport, InvariantFamily};
use motivic_core::kgroup::{bittner_rewrite, eq_mod_filtration, KClass};
use motivic_core::lring::{BiRational, Direction, Exp2};
use motivic_core::parse::parse_bi;
use motivic_core::snc::{k_equivalence_check, motivic_integral_snc, stringy_phi_snc, SncResolution};
use motivic_core::toric::{toric_epoly, toric_hodge, toric_stringy_e, Fan, SupportFunction};
use motivic_core::workspace::{fan_from_json, parse_json, Input, Workspace};
use motivic_core::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "motivic", version, about = "Classes, motivic invariants and stringy E-functions")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Opts {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Invariant family used for evaluation
    #[arg(long, global = true, default_value = "E")]
    family: String,
    /// Expansion order
    #[arg(long, global = true)]
    order: Option<u32>,
    /// Bound on cone determinants for box enumeration
    #[arg(long, global = true)]
    det_limit: Option<u64>,
    /// Filtration level for class comparison (exact when omitted)
    #[arg(long, global = true, allow_negative_numbers = true)]
    precision: Option<i64>,
    /// Workspace JSON with extra records, families and defaults
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Toric varieties given by a fan
    #[command(subcommand)]
    Toric(ToricCmd),
    /// SNC resolution data
    #[command(subcommand)]
    Snc(SncCmd),
    /// Class expressions
    #[command(subcommand)]
    Kclass(KclassCmd),
    /// Verification checks; exit status 1 when a check fails
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum ToricCmd {
    /// E-polynomial from cone counts
    EPoly { fan: PathBuf },
    /// Stringy E-function
    Stringy { fan: PathBuf },
    /// A single toric Hodge number
    Hodge {
        fan: PathBuf,
        #[arg(short, allow_negative_numbers = true)]
        p: i64,
        #[arg(short, allow_negative_numbers = true)]
        q: i64,
    },
}

#[derive(Subcommand)]
enum SncCmd {
    /// Motivic integral as a class
    Integral { resolution: PathBuf },
    /// Stringy function for the chosen family
    Stringy { resolution: PathBuf },
}

#[derive(Subcommand)]
enum KclassCmd {
    /// Evaluate a family on a class; without -j/-n prints the polynomial
    Eval {
        expr: String,
        #[arg(short, allow_negative_numbers = true, requires = "n")]
        j: Option<i64>,
        #[arg(short, allow_negative_numbers = true, requires = "j")]
        n: Option<i64>,
    },
    /// Rewrite in smooth projective generators
    Rewrite { expr: String },
    /// Truncate denominators to a polynomial approximation
    Expand { expr: String },
    /// Compare two classes modulo the filtration
    Compare { a: String, b: String },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// E(u,v) = (u^a v^b)^d E(1/v, 1/u)
    Symmetry {
        arg: String,
        #[arg(long)]
        dim: Option<i64>,
    },
    /// Two inputs have the same stringy function
    ResolutionIndependence { a: String, b: String },
    /// Two resolutions over one ambient variety
    KEquiv { x: PathBuf, y: PathBuf },
    /// Mirror relation between two stringy functions
    Mirror {
        v: String,
        w: String,
        #[arg(long)]
        dim: Option<i64>,
    },
}

enum Outcome {
    Ok(String, Value),
    Failed(String, Value),
}

/// A check argument: a JSON file or a literal polynomial in `u, v`.
enum Arg {
    Fan(Fan, SupportFunction),
    Resolution(SncResolution),
    Value(BiRational),
}

struct Ctx {
    ws: Workspace,
    family: String,
    order: u32,
    det_limit: u64,
    precision: Option<i64>,
}

impl Ctx {
    fn family(&self) -> Result<&InvariantFamily> {
        self.ws.family(&self.family)
    }

    fn sig(&self) -> Result<Exp2> {
        Ok(self.family()?.sig)
    }

    fn class(&self, src: &str) -> Result<KClass> {
        self.ws.class(src)
    }

    /// Smooth projective form when the records allow it, else as written.
    fn comparable(&self, src: &str) -> Result<KClass> {
        let c = self.class(src)?;
        match bittner_rewrite(&c, &self.ws.db) {
            Err(Error::Unresolvable(_)) => Ok(c),
            r => r,
        }
    }

    fn fan(&self, path: &Path) -> Result<(Fan, SupportFunction)> {
        fan_from_json(read_json(path)?)
    }

    fn resolution(&self, path: &Path) -> Result<SncResolution> {
        self.ws.resolution_from_json(read_json(path)?)
    }

    fn arg(&self, s: &str) -> Result<Arg> {
        let path = Path::new(s);
        if path.is_file() {
            return Ok(match self.ws.input_from_json(read_json(path)?)? {
                Input::Fan(f, sf) => Arg::Fan(f, sf),
                Input::Resolution(r) => Arg::Resolution(r),
            });
        }
        if s.ends_with(".json") {
            return Err(Error::Input(format!("{s}: no such file")));
        }
        Ok(Arg::Value(parse_bi(s, self.sig()?)?))
    }

    fn stringy(&self, a: &Arg) -> Result<BiRational> {
        match a {
            Arg::Fan(f, sf) => toric_stringy_e(f, sf, self.sig()?, self.ws.exec, self.det_limit),
            Arg::Resolution(r) => stringy_phi_snc(self.family()?, r, self.ws.exec),
            Arg::Value(x) => Ok(x.clone()),
        }
    }

    fn dim_of(&self, a: &Arg, given: Option<i64>) -> Result<i64> {
        let own = match a {
            Arg::Fan(f, _) => Some(f.rank() as i64),
            Arg::Resolution(r) => Some(r.dim() as i64),
            Arg::Value(_) => None,
        };
        given
            .or(own)
            .ok_or_else(|| Error::Input("a literal polynomial needs --dim".into()))
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text)
}

fn bi(x: &BiRational) -> Outcome {
    Outcome::Ok(x.render(), output::bi_json(x))
}

fn check(name: &str, r: CheckReport) -> Outcome {
    let (t, j) = (output::check_text(name, &r), output::check_json(name, &r));
    if r.holds {
        Outcome::Ok(t, j)
    } else {
        Outcome::Failed(t, j)
    }
}

fn run(ctx: &Ctx, cmd: Command) -> Result<Outcome> {
    let exec = ctx.ws.exec;
    Ok(match cmd {
        Command::Toric(t) => match t {
            ToricCmd::EPoly { fan } => {
                let (f, _) = ctx.fan(&fan)?;
                let p = toric_epoly(&f);
                Outcome::Ok(p.to_string(), output::poly_json(&p))
            }
            ToricCmd::Stringy { fan } => {
                let (f, sf) = ctx.fan(&fan)?;
                bi(&toric_stringy_e(&f, &sf, ctx.sig()?, exec, ctx.det_limit)?)
            }
            ToricCmd::Hodge { fan, p, q } => {
                let (f, _) = ctx.fan(&fan)?;
                let h = toric_hodge(&f, p, q);
                Outcome::Ok(h.to_string(), output::int_json(&h))
            }
        },
        Command::Snc(s) => match s {
            SncCmd::Integral { resolution } => {
                let c = motivic_integral_snc(&ctx.resolution(&resolution)?, exec)?;
                Outcome::Ok(c.render(), output::class_json(&c))
            }
            SncCmd::Stringy { resolution } => {
                bi(&stringy_phi_snc(ctx.family()?, &ctx.resolution(&resolution)?, exec)?)
            }
        },
        Command::Kclass(k) => match k {
            KclassCmd::Eval { expr, j, n } => {
                let c = ctx.class(&expr)?;
                match (j, n) {
                    (Some(j), Some(n)) => {
                        let v = ctx.ws.evaluate(&ctx.family, &c, j, n)?;
                        Outcome::Ok(v.to_string(), output::int_json(&v))
                    }
                    _ => bi(&ctx.ws.phi(&ctx.family, &c)?),
                }
            }
            KclassCmd::Rewrite { expr } => {
                let c = bittner_rewrite(&ctx.class(&expr)?, &ctx.ws.db)?;
                Outcome::Ok(c.render(), output::class_json(&c))
            }
            KclassCmd::Expand { expr } => {
                let c = ctx.class(&expr)?;
                let terms = c
                    .terms()
                    .map(|(g, _)| (g.clone(), c.coefficient(g).laurent_expand(Direction::AtInfinity, ctx.order)))
                    .collect::<Vec<_>>();
                let t = KClass::from_parts(terms, Vec::new());
                Outcome::Ok(t.render(), output::class_json(&t))
            }
            KclassCmd::Compare { a, b } => {
                let (x, y) = (ctx.comparable(&a)?, ctx.comparable(&b)?);
                let eq = eq_mod_filtration(&x, &y, ctx.precision);
                let level = ctx.precision.map_or("exactly".to_string(), |k| format!("modulo F^{k}"));
                let text = format!("{} {level}", if eq { "equal" } else { "differ" });
                let j = json!({ "equal": eq, "precision": ctx.precision, "difference": output::class_json(&(&x - &y)) });
                if eq {
                    Outcome::Ok(text, j)
                } else {
                    Outcome::Failed(text, j)
                }
            }
        },
        Command::Check(c) => match c {
            CheckCmd::Symmetry { arg, dim } => {
                let a = ctx.arg(&arg)?;
                let d = ctx.dim_of(&a, dim)?;
                check("symmetry", gsca_symmetry_check(&ctx.stringy(&a)?, d))
            }
            CheckCmd::ResolutionIndependence { a, b } => {
                let x = ctx.stringy(&ctx.arg(&a)?)?;
                let y = ctx.stringy(&ctx.arg(&b)?)?;
                check("resolution-independence", CheckReport::from_residual(&x - &y))
            }
            CheckCmd::KEquiv { x, y } => {
                let (x, y) = (ctx.resolution(&x)?, ctx.resolution(&y)?);
                let families: Vec<&InvariantFamily> = ctx.ws.families.iter().collect();
                let r = k_equivalence_check(&families, &x, &y, exec)?;
                let (t, j) = (output::kequiv_text(&r), output::kequiv_json(&r));
                if r.holds() {
                    Outcome::Ok(t, j)
                } else {
                    Outcome::Failed(t, j)
                }
            }
            CheckCmd::Mirror { v, w, dim } => {
                let (a, b) = (ctx.arg(&v)?, ctx.arg(&w)?);
                let n = ctx.dim_of(&a, dim)?;
                check("mirror", mirror_check(&ctx.stringy(&a)?, &ctx.stringy(&b)?, n))
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = cli.opts;
    let ws = match &o.workspace {
        None => Ok(Workspace::standard()),
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Error::Input(format!("{}: {e}", p.display())))
            .and_then(|t| Workspace::from_json(&t)),
    };
    let ws = match ws {
        Ok(ws) => ws,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        family: o.family,
        order: o.order.unwrap_or(ws.config.order),
        det_limit: o.det_limit.unwrap_or(ws.config.det_limit),
        precision: o.precision.or(ws.config.precision),
        ws,
    };
    let as_json = o.json || ctx.ws.config.json;
    let emit = |text: String, value: Value| {
        if as_json {
            println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
        } else {
            println!("{text}");
        }
    };
    match run(&ctx, cli.cmd) {
        Ok(Outcome::Ok(t, v)) => {
            emit(t, v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::Failed(t, v)) => {
            emit(t, v);
            ExitCode::from(1)
        }
        Err(e) => {
            if as_json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

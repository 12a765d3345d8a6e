use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use eqcob::fixtures;
use eqcob::gkm::{check_membership, congruence_system, render_system, CobordismTuple, GkmDatum, SurfaceKind};
use eqcob::horo::{build_gkm, surface_scan, PasquierTriple, ScanKind};
use eqcob::mult::{fiber_denominator_bound, point_class, singular_class_pullback, subvariety_class, TangentData};
use eqcob::roots::{fmt_vector, parse_parabolic, CartanType, RootSystem};
use eqcob::{Error, FormalGroupLaw, Specialization, TruncatedSeries};

const USAGE: u8 = 2;
const NON_MEMBER: u8 = 1;
const UNRESOLVED: u8 = 3;

#[derive(Parser)]
#[command(name = "eqcob", version, about = "Equivariant cobordism of GKM-type spaces over the universal formal group law")]
struct Cli {
    /// truncation order D (at least 3)
    #[arg(long, global = true, default_value_t = 8)]
    order: usize,
    /// universal, additive or multiplicative:β
    #[arg(long, global = true, default_value = "universal")]
    law: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Formal group law series and coefficients
    #[command(subcommand)]
    Fgl(FglCmd),
    /// Congruence systems and membership checks
    #[command(subcommand)]
    Gkm(GkmCmd),
    /// T-stable curves of flag varieties
    #[command(subcommand)]
    Flag(FlagCmd),
    /// Horospherical varieties from Pasquier triples
    #[command(subcommand)]
    Horo(HoroCmd),
    /// Equivariant multiplicities and classes
    #[command(subcommand)]
    Mult(MultCmd),
}

#[derive(Subcommand)]
enum FglCmd {
    /// ρ_{n/m}(u)
    Rho {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        m: i64,
    },
    /// the formal inverse χ(u)
    Inverse,
    /// [n]u
    Multiple {
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// [1/m]u
    Divide { m: i64 },
    /// the coefficient a_ij of F(u, v)
    A { i: usize, j: usize },
    /// all a_ij with i + j ≤ degree
    ATable {
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
}

#[derive(Args)]
struct OutArg {
    /// output file (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GkmCmd {
    /// Print the congruence system of a datum (file or `ig25`)
    Congruences {
        datum: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check a tuple against a datum and write the certificate
    Check {
        datum: String,
        tuple: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum FlagCmd {
    /// Fixed points and curves of G/P_I
    Curves {
        /// Cartan type, e.g. G2, C3, B3, F4, A2
        #[arg(long = "type")]
        ty: String,
        /// simple roots generating the Levi of P_I, e.g. a1,a3
        #[arg(long, default_value = "")]
        parabolic: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct TripleArgs {
    #[arg(long)]
    family: u8,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

impl TripleArgs {
    fn triple(&self) -> Result<PasquierTriple, Failure> {
        Ok(PasquierTriple::new(self.family, self.n, self.m)?)
    }
}

#[derive(Subcommand)]
enum HoroCmd {
    /// Build the GKM datum
    Build {
        #[command(flatten)]
        triple: TripleArgs,
        /// surface kind for triples the scan cannot resolve, e.g. F2
        #[arg(long)]
        force_kind: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Report χ, the root α, the pairings and the surface kind
    Scan {
        #[command(flatten)]
        triple: TripleArgs,
    },
}

#[derive(Args)]
struct AmbientArg {
    /// ambient tangent data (default: built-in IG(2,5))
    #[arg(long)]
    tangent: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MultCmd {
    /// Class of a fixed point
    PointClass {
        #[arg(long)]
        point: String,
        #[command(flatten)]
        ambient: AmbientArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Class of a smooth subvariety from normal weights
    Subvariety {
        /// normal-data file, or a built-in IG(2,5) name (X0, X1, X2, X2', P_14_34_45)
        normal: String,
        #[command(flatten)]
        ambient: AmbientArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pullback of a resolution to a singular point via its fiber
    FiberSum {
        #[arg(long)]
        point: String,
        /// fiber-data file, or built-in `x4` / `x4-star`
        #[arg(long)]
        fiber: String,
        #[command(flatten)]
        ambient: AmbientArg,
        #[command(flatten)]
        out: OutArg,
    },
}

enum Failure {
    Usage(String),
    Unresolved(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnresolvedSurfaceKind(s) => Failure::Unresolved(s),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: &OutArg, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn load_datum(arg: &str) -> Result<GkmDatum, Failure> {
    let text = if arg == "ig25" { fixtures::IG25_DATUM.to_string() } else { read(&PathBuf::from(arg))? };
    Ok(GkmDatum::from_json_str(&text)?)
}

fn load_ambient(a: &AmbientArg) -> Result<TangentData, Failure> {
    match &a.tangent {
        Some(p) => Ok(TangentData::from_json_str(&read(p)?)?),
        None => Ok(fixtures::ig25_tangent()?),
    }
}

struct Ctx {
    order: usize,
    spec: Specialization,
    format: Format,
}

impl Ctx {
    fn law(&self, extra: usize) -> Result<FormalGroupLaw, Failure> {
        Ok(FormalGroupLaw::new(self.order + extra, self.spec.clone())?)
    }

    fn series_out(&self, s: &TruncatedSeries) -> String {
        match self.format {
            Format::Text => format!("{s}\n"),
            Format::Json => pretty(&json!({ "text": s.to_string(), "terms": s.to_json() })),
        }
    }

    /// Tuples written to files are always JSON, so `gkm check` can read them.
    fn tuple_out(&self, f: &CobordismTuple, out: &OutArg) -> String {
        match self.format {
            _ if out.output.is_some() => pretty(&f.to_json()),
            Format::Json => pretty(&f.to_json()),
            Format::Text => f.0.iter().map(|(p, v)| format!("{p}: {v}\n")).collect(),
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if cli.order < 3 {
        return Err(Failure::Usage("--order must be at least 3".into()));
    }
    let ctx = Ctx { order: cli.order, spec: Specialization::parse(&cli.law)?, format: cli.format };
    match cli.cmd {
        Cmd::Fgl(c) => cmd_fgl(&ctx, c),
        Cmd::Gkm(c) => cmd_gkm(&ctx, c),
        Cmd::Flag(c) => cmd_flag(&ctx, c),
        Cmd::Horo(c) => cmd_horo(&ctx, c),
        Cmd::Mult(c) => cmd_mult(&ctx, c),
    }
}

fn cmd_fgl(ctx: &Ctx, c: FglCmd) -> Result<u8, Failure> {
    let law = ctx.law(0)?;
    let u = TruncatedSeries::var(0, 1, law.order());
    let text = match c {
        FglCmd::Rho { n, m } => ctx.series_out(&law.rho_series(n, m)?),
        FglCmd::Inverse => ctx.series_out(&law.fgl_inverse(&u)?),
        FglCmd::Multiple { n } => ctx.series_out(&law.fgl_multiple(n, &u)?),
        FglCmd::Divide { m } => ctx.series_out(&law.fgl_divide(m, &u)?),
        FglCmd::A { i, j } => {
            let a = law.a_coefficient(i, j)?;
            match ctx.format {
                Format::Text => format!("{a}\n"),
                Format::Json => pretty(&json!({ "i": i, "j": j, "value": a.to_string() })),
            }
        }
        FglCmd::ATable { degree } => {
            let rows = law.a_table(degree)?;
            match ctx.format {
                Format::Text => rows.iter().map(|(i, j, a)| format!("a{i}{j} = {a}\n")).collect(),
                Format::Json => pretty(&json!(rows
                    .iter()
                    .map(|(i, j, a)| json!({ "i": i, "j": j, "value": a.to_string() }))
                    .collect::<Vec<_>>())),
            }
        }
    };
    print!("{text}");
    Ok(0)
}

fn cmd_gkm(ctx: &Ctx, c: GkmCmd) -> Result<u8, Failure> {
    match c {
        GkmCmd::Congruences { datum, out } => {
            let d = load_datum(&datum)?;
            let sys = congruence_system(&d)?;
            let text = match ctx.format {
                Format::Text => render_system(&sys),
                Format::Json => pretty(&json!(sys
                    .iter()
                    .map(|c| json!({
                        "line": c.canonical_line(),
                        "expr": c.expr.to_string(),
                        "modulus": c.character,
                        "power": c.power,
                    }))
                    .collect::<Vec<_>>())),
            };
            emit(&out, &text)?;
            Ok(0)
        }
        GkmCmd::Check { datum, tuple, out } => {
            let d = load_datum(&datum)?;
            let law = ctx.law(0)?;
            let v: serde_json::Value =
                serde_json::from_str(&read(&tuple)?).map_err(|e| Failure::Usage(format!("tuple: {e}")))?;
            let f = CobordismTuple::from_json(&v, d.rank, law.order())?;
            let cert = check_membership(&law, &d, &f)?;
            let text = match ctx.format {
                Format::Json => pretty(&cert.to_json()),
                Format::Text => {
                    let mut s = format!(
                        "{} ({} constraints, law {}, order {})\n",
                        if cert.is_member() { "member" } else { "not a member" },
                        cert.results.len(),
                        cert.law,
                        cert.order
                    );
                    for r in cert.failures() {
                        s += &format!("fail: {}\n  remainder {}\n", r.line, r.remainder);
                    }
                    s
                }
            };
            emit(&out, &text)?;
            if !cert.is_member() && out.output.is_some() {
                for r in cert.failures() {
                    eprintln!("fail: {}", r.line);
                }
            }
            Ok(if cert.is_member() { 0 } else { NON_MEMBER })
        }
    }
}

fn cmd_flag(ctx: &Ctx, c: FlagCmd) -> Result<u8, Failure> {
    let FlagCmd::Curves { ty, parabolic, out } = c;
    let rs = RootSystem::new(CartanType::parse(&ty)?)?;
    let i: BTreeSet<usize> = parse_parabolic(&parabolic)?;
    let (pts, curves) = rs.curves(&i)?;
    let deg = |c: &eqcob::roots::Curve| c.degree.iter().map(|(b, d)| (format!("a{b}"), d.to_string())).collect::<Vec<_>>();
    let text = match ctx.format {
        Format::Json => pretty(&json!({
            "type": rs.cartan_type().to_string(),
            "parabolic": i.iter().map(|k| format!("a{k}")).collect::<Vec<_>>(),
            "points": pts.iter().map(|p| json!({
                "name": p.word_name(),
                "weight": p.vector.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "curves": curves.iter().map(|c| json!({
                "a": pts[c.u].word_name(),
                "b": pts[c.v].word_name(),
                "root": c.root.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "weight": c.weight.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "degree": deg(c).into_iter().map(|(k, v)| (k, json!(v))).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("{} points, {} curves\n", pts.len(), curves.len());
            for p in &pts {
                s += &format!("point {} {}\n", p.word_name(), fmt_vector(&p.vector));
            }
            for c in &curves {
                let d: Vec<String> = deg(c).into_iter().map(|(b, d)| format!("{d}*{b}")).collect();
                s += &format!(
                    "curve {} {} root {} degree {}\n",
                    pts[c.u].word_name(),
                    pts[c.v].word_name(),
                    fmt_vector(&c.root),
                    d.join(" + ")
                );
            }
            s
        }
    };
    emit(&out, &text)?;
    Ok(0)
}

fn cmd_horo(ctx: &Ctx, c: HoroCmd) -> Result<u8, Failure> {
    match c {
        HoroCmd::Scan { triple } => {
            let s = surface_scan(&triple.triple()?);
            match ctx.format {
                Format::Text => print!("{s}"),
                Format::Json => print!("{}", pretty(&s.to_json())),
            }
            Ok(if s.kind == ScanKind::Unresolved { UNRESOLVED } else { 0 })
        }
        HoroCmd::Build { triple, force_kind, out } => {
            let force = force_kind.as_deref().map(SurfaceKind::parse).transpose()?;
            let b = build_gkm(&triple.triple()?, force)?;
            emit(&out, &b.datum.to_json_string())?;
            match b.unresolved {
                Some(msg) => {
                    eprintln!("{msg}");
                    Ok(UNRESOLVED)
                }
                None => Ok(0),
            }
        }
    }
}

fn cmd_mult(ctx: &Ctx, c: MultCmd) -> Result<u8, Failure> {
    match c {
        MultCmd::PointClass { point, ambient, out } => {
            let amb = load_ambient(&ambient)?;
            let f = point_class(&ctx.law(0)?, &point, &amb)?;
            emit(&out, &ctx.tuple_out(&f, &out))?;
        }
        MultCmd::Subvariety { normal, ambient, out } => {
            let amb = load_ambient(&ambient)?;
            let n = match fixtures::ig25_normals()?.remove(&normal) {
                Some(n) if ambient.tangent.is_none() => n,
                _ => TangentData::from_json_str(&read(&PathBuf::from(&normal))?)?,
            };
            let points: Vec<String> = amb.points().cloned().collect();
            let f = subvariety_class(&ctx.law(0)?, &n, &points)?;
            emit(&out, &ctx.tuple_out(&f, &out))?;
        }
        MultCmd::FiberSum { point, fiber, ambient, out } => {
            let amb = load_ambient(&ambient)?;
            let fib = match fiber.as_str() {
                "x4" => fixtures::ig25_fiber_x4()?,
                "x4-star" => fixtures::ig25_fiber_x4_star()?,
                path => TangentData::from_json_str(&read(&PathBuf::from(path))?)?,
            };
            let law = ctx.law(fiber_denominator_bound(&fib)?)?;
            let p = singular_class_pullback(&law, &point, &amb, &fib)?;
            let cleared = p.cleared.as_ref().map(|s| s.truncate(ctx.order));
            let text = match ctx.format {
                Format::Json => pretty(&json!({
                    "point": point,
                    "value": p.value.to_json(),
                    "cleared": cleared.as_ref().ok().map(TruncatedSeries::to_json),
                    "clear_failure": cleared.as_ref().err().map(|e| e.to_string()),
                })),
                Format::Text => match &cleared {
                    Ok(s) => format!("cleared through order {}\n{s}\n", ctx.order),
                    Err(e) => format!("not cleared: {e}\n"),
                },
            };
            emit(&out, &text)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Unresolved(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(UNRESOLVED)
        }
    }
}

//! Command-line grammar and dispatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use quadfun::abelian::{AbHom, Elem, FgAbGroup};
use quadfun::nil2::canonical_ta;
use quadfun::psg::{self, gamma_n, omega, odot_eval, realize_psg, KTriple, OmegaVariant, PreSquareGroup, RealizeMode};
use quadfun::quadfun::{mod_two, nat_map, quad_value, theta, ExtClass, Functor, NatMap};
use quadfun::sg::{
    builtin_realizer, lift, lift_omega, lift_via, obstruction, realize_sg_delta, realize_sg_flat,
    realize_sg_stable, Builtin, CoboundaryRoute, LiftOutcome, OmegaLift, SgRealizeOutcome, SquareGroup,
    DEFAULT_SAMPLE, DEFAULT_TABLE_BOUND,
};

use crate::format::{self, fmt_elem, fmt_elems, fmt_hom, Document};
use crate::verify::{self, Bounds};

#[derive(Parser, Debug)]
#[command(name = "quadfun", version, about = "Quadratic functors, presquare groups and square groups")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest group order used by enumerations and table-based computations.
    #[arg(long, global = true, env = "QUADFUN_MAX_ORDER")]
    pub max_order: Option<i128>,
    /// Largest arity for `psg odot`.
    #[arg(long, global = true, env = "QUADFUN_MAX_ARITY", value_parser = clap::value_parser!(u32).range(1..))]
    pub max_arity: Option<u32>,
    /// Corrupts the built-in data of the named verification suite.
    #[arg(long, global = true, env = "QUADFUN_FAULT", hide = true)]
    pub inject_fault: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The value of a functor on a group, as invariant factors.
    Functor {
        name: String,
        group: String,
        /// Also print the natural maps into and out of the functor.
        #[arg(long)]
        with_maps: bool,
    },
    /// A natural transformation evaluated on a group.
    Nat { name: String, group: String },
    /// The class of P(A) in Ext(A, Sym2 A).
    Theta {
        group: String,
        /// Push forward to Ext(A, Sym2(A/2A)).
        #[arg(long)]
        reduced: bool,
    },
    /// Presquare groups.
    Psg {
        #[command(subcommand)]
        cmd: PsgCmd,
    },
    /// Square groups.
    Sg {
        #[command(subcommand)]
        cmd: SgCmd,
    },
    /// Batch verification.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum PsgCmd {
    /// Validate a presquare group file.
    Check { file: PathBuf },
    /// pi_0, pi_1 and the flags PSG0, PSGs, flat.
    Pi { file: PathBuf },
    /// The k-invariant triple (pi_0, pi_1, k: Gamma(pi_0) -> pi_1).
    Kinv { file: PathBuf },
    /// The stable invariants (pi_0, stable pi_1, Z/2 (x) pi_0 -> stable pi_1).
    Stable { file: PathBuf },
    /// The coproduct of two presquare groups.
    Coprod { a: PathBuf, b: PathBuf },
    /// The product of two presquare groups.
    Prod { a: PathBuf, b: PathBuf },
    /// Pushforward along f: pi_1 -> target.
    Push {
        file: PathBuf,
        /// Images of the generators of pi_1, as a JSON array of elements.
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        /// Involution on the target; defaults to -Id.
        #[arg(long)]
        involution: Option<String>,
    },
    /// omega (or omega-bar) of the canonical extension of A by Lambda2 A.
    Omega {
        group: String,
        #[arg(long)]
        bar: bool,
    },
    /// A presquare group with prescribed k-invariant.
    Realize {
        mode: PsgMode,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// The group M (.) X_n for the pointed set with n non-base points.
    Odot { file: PathBuf, n: usize },
}

#[derive(Subcommand, Debug)]
pub enum SgCmd {
    /// Validate a square group file.
    Check { file: PathBuf },
    /// The underlying presquare group.
    Wp { file: PathBuf },
    /// Lift a presquare group to a square group.
    Lift {
        file: PathBuf,
        #[arg(long)]
        route: Option<Route>,
    },
    /// Delta: pi_0 -> pi_1.
    Delta { file: PathBuf },
    /// Twist H by a homomorphism alpha: pi_0 -> Mee.
    Twist {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
    },
    /// A square group with prescribed invariants.
    Realize {
        mode: SgMode,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// The lifting obstruction of a presquare group.
    Theta { file: PathBuf },
    /// Lift omega(N) for a suitable N, or report theta(A).
    Omega { group: String },
    /// A built-in realizer: znil, two-power-cyclic N, half-invertible A, stable-universal A.
    Builtin { kind: BuiltinKind, arg: Option<String> },
}

#[derive(clap::Args, Debug)]
pub struct TargetArgs {
    /// pi_n (flat, stable) or the source A (delta).
    #[arg(long)]
    pub pi: String,
    /// pi_(n+1) (flat, stable) or the target B (delta).
    #[arg(long)]
    pub target: String,
    /// Images of the generators of Gamma(pi) (flat), Z/2 (x) pi (stable) or A (delta).
    #[arg(long)]
    pub k: String,
    /// Involution on pi_3 for flat targets; defaults to -Id.
    #[arg(long)]
    pub involution: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Every suite.
    PaperTables,
    /// Selected suites by anchor.
    Suite {
        #[arg(required = true)]
        anchors: Vec<String>,
    },
    /// The suite anchors.
    List,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PsgMode {
    Flat,
    Stable,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SgMode {
    Flat,
    Stable,
    Delta,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Route {
    Table,
    Section,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BuiltinKind {
    Znil,
    TwoPowerCyclic,
    HalfInvertible,
    StableUniversal,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] quadfun::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// `1` for domain errors and exceeded bounds, `2` for parse and validation errors.
    pub fn code(&self) -> u8 {
        match self {
            CliError::Core(quadfun::Error::Domain(_) | quadfun::Error::Bound(_)) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command prints and its exit code.
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }

    fn domain(outcome: &str, text: String, json: Value) -> Self {
        let mut json = json;
        json["outcome"] = Value::from(outcome);
        Report { text: format!("{outcome}: {text}"), json, code: 1 }
    }
}

pub fn run(cli: &Cli) -> Output {
    match dispatch(cli) {
        Ok(r) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&r.json).expect("values serialize") + "\n"
            } else if r.text.ends_with('\n') {
                r.text
            } else {
                r.text + "\n"
            };
            Output { stdout, stderr: String::new(), code: r.code }
        }
        Err(e) => {
            let stdout = if cli.json {
                let kind = if e.code() == 1 { "domain" } else { "invalid" };
                serde_json::to_string_pretty(&json!({ "error": e.to_string(), "kind": kind })).expect("serialize")
                    + "\n"
            } else {
                String::new()
            };
            Output { stdout, stderr: format!("error: {e}\n"), code: e.code() }
        }
    }
}

fn group(s: &str) -> CliResult<FgAbGroup> {
    Ok(s.parse()?)
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn document(path: &Path) -> CliResult<Document> {
    format::parse_document(&read(path)?).map_err(|e| with_path(path, e))
}

fn with_path(path: &Path, e: quadfun::Error) -> CliError {
    match e {
        quadfun::Error::Parse(m) => CliError::Core(quadfun::Error::Parse(format!("{}: {m}", path.display()))),
        quadfun::Error::Invalid(m) => CliError::Core(quadfun::Error::Invalid(format!("{}: {m}", path.display()))),
        other => CliError::Core(other),
    }
}

fn psg_file(path: &Path) -> CliResult<PreSquareGroup> {
    Ok(document(path)?.to_psg())
}

fn sg_file(path: &Path) -> CliResult<SquareGroup> {
    match document(path)? {
        Document::Sg(q) => Ok(q),
        Document::Psg(_) => Err(CliError::Core(quadfun::Error::Parse(format!(
            "{}: expected a square group: missing section [H]",
            path.display()
        )))),
    }
}

/// A homomorphism given by the JSON array of generator images.
fn hom(source: &FgAbGroup, target: &FgAbGroup, images: &str) -> CliResult<AbHom> {
    let imgs: Vec<Elem> = serde_json::from_str(images)
        .map_err(|e| quadfun::Error::Parse(format!("homomorphism {images:?}: {e}")))?;
    if imgs.len() != source.ngens() || imgs.iter().any(|x| x.len() != target.ngens()) {
        return Err(CliError::Core(quadfun::Error::Invalid(format!(
            "a homomorphism {source} -> {target} needs {} images with {} coordinates",
            source.ngens(),
            target.ngens()
        ))));
    }
    Ok(AbHom::from_images(source.clone(), target.clone(), &imgs)?)
}

pub fn ints(xs: &[i128]) -> Value {
    Value::Array(
        xs.iter()
            .map(|&x| i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::from(x.to_string())))
            .collect(),
    )
}

fn group_json(g: &FgAbGroup) -> Value {
    ints(g.factors())
}

fn hom_json(h: &AbHom) -> Value {
    let imgs: Vec<Value> = (0..h.source().ngens()).map(|i| ints(&h.image_of_gen(i))).collect();
    json!({ "source": group_json(h.source()), "target": group_json(h.target()), "images": imgs })
}

fn hom_text(name: &str, h: &AbHom) -> String {
    format!("{name}: {} -> {}, images {}\n", h.source(), h.target(), fmt_hom(h))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Functor { name, group: g, with_maps } => functor_cmd(name, g, *with_maps),
        Command::Nat { name, group: g } => {
            let m: NatMap = name.parse()?;
            let a = group(g)?;
            let h = nat_map(m, &a);
            let (s, t) = m.ends();
            Ok(Report::ok(
                hom_text(&format!("{m} ({s} -> {t}) on {a}"), &h),
                json!({ "map": m.name(), "group": group_json(&a), "hom": hom_json(&h) }),
            ))
        }
        Command::Theta { group: g, reduced } => {
            let a = group(g)?;
            let t = theta(&a, *reduced);
            let text = format!(
                "theta{}({a}) in {}: {}, class {}\n",
                if *reduced { " reduced" } else { "" },
                t.group(),
                if t.is_zero() { "zero" } else { "nonzero" },
                fmt_elem(&t.coords)
            );
            Ok(Report::ok(text, json!({ "group": group_json(&a), "reduced": reduced, "theta": ext_json(&t) })))
        }
        Command::Psg { cmd } => psg_cmd(cli, cmd),
        Command::Sg { cmd } => sg_cmd(cli, cmd),
        Command::Verify { cmd } => verify_cmd(cli, cmd),
    }
}

fn ext_json(t: &ExtClass) -> Value {
    json!({ "ext": group_json(t.group()), "class": ints(&t.coords), "zero": t.is_zero() })
}

fn functor_cmd(name: &str, g: &str, with_maps: bool) -> CliResult<Report> {
    let f: Functor = name.parse()?;
    let a = group(g)?;
    let v = quad_value(f, &a);
    let mut text = format!("{}\n", v.group());
    let mut maps = Vec::new();
    if with_maps {
        let label = f.to_string();
        for m in NatMap::ALL {
            let (s, t) = m.ends();
            if s == label || t == label {
                let h = nat_map(m, &a);
                text.push_str(&hom_text(&format!("{m} ({s} -> {t})"), &h));
                maps.push(json!({ "map": m.name(), "hom": hom_json(&h) }));
            }
        }
    }
    let mut j = json!({ "functor": f.to_string(), "input": group_json(&a), "value": group_json(v.group()) });
    if with_maps {
        j["maps"] = Value::Array(maps);
    }
    Ok(Report::ok(text, j))
}

fn psg_json(m: &PreSquareGroup) -> Value {
    json!({ "document": format::write_psg(m) })
}

fn psg_doc(m: &PreSquareGroup) -> Report {
    Report::ok(format::write_psg(m), psg_json(m))
}

fn sg_doc(q: &SquareGroup) -> Report {
    let text = format::write_sg(q);
    Report::ok(text.clone(), json!({ "document": text }))
}

/// A document followed by comment lines, which parsers skip.
fn with_maps(mut r: Report, maps: &[(&str, &AbHom)]) -> Report {
    for (name, h) in maps {
        let _ = writeln!(r.text, "# {name}: {} -> {}, images {}", h.source(), h.target(), fmt_hom(h));
        r.json[*name] = hom_json(h);
    }
    r
}

fn triple_text(t: &KTriple) -> String {
    let mut s = format!("n = {}\npi_n = {}\npi_n+1 = {}\n", t.n, t.pi_n, t.pi_n1);
    s.push_str(&hom_text("k", &t.k));
    if let Some(i) = &t.involution {
        s.push_str(&hom_text("involution", i));
    }
    s
}

fn triple_json(t: &KTriple) -> Value {
    json!({
        "n": t.n,
        "pi_n": group_json(&t.pi_n),
        "pi_n1": group_json(&t.pi_n1),
        "k": hom_json(&t.k),
        "involution": t.involution.as_ref().map(hom_json),
    })
}

fn target_triple(t: &TargetArgs, stable: bool) -> CliResult<KTriple> {
    let a = group(&t.pi)?;
    let b = group(&t.target)?;
    if stable {
        let k = hom(mod_two(&a).group(), &b, &t.k)?;
        if t.involution.is_some() {
            return Err(CliError::Usage("stable targets carry no involution".into()));
        }
        Ok(KTriple::stable(a, k)?)
    } else {
        let k = hom(&gamma_n(2, &a), &b, &t.k)?;
        let inv = t.involution.as_deref().map(|s| hom(&b, &b, s)).transpose()?;
        Ok(KTriple::whitehead(a, k, inv)?)
    }
}

fn psg_cmd(cli: &Cli, cmd: &PsgCmd) -> CliResult<Report> {
    match cmd {
        PsgCmd::Check { file } => {
            let m = psg_file(file)?;
            let bound = cli.max_order.unwrap_or(256);
            let how = match m.validate_exhaustive(bound) {
                Ok(Ok(())) => "exhaustive",
                Ok(Err(a)) => return Err(quadfun::Error::Invalid(format!("not a presquare group: {a}")).into()),
                Err(_) => "on generators",
            };
            let inv = m.invariants();
            let text = format!(
                "ok: presquare group (axioms checked {how})\nMe order = {}\npi_0 = {}\npi_1 = {}\nPSG0: {}\nPSGs: {}\n",
                m.me().order_of_group().map_or("infinite".to_string(), |o| o.to_string()),
                inv.pi0,
                inv.pi1.group,
                yes(inv.is_psg0),
                yes(inv.is_psgs)
            );
            Ok(Report::ok(text, json!({ "valid": true, "check": how, "psg0": inv.is_psg0, "psgs": inv.is_psgs })))
        }
        PsgCmd::Pi { file } => {
            let m = psg_file(file)?;
            let inv = m.invariants();
            let mut text = format!("pi_0 = {}\npi_1 = {}\n", inv.pi0, inv.pi1.group);
            text.push_str(&hom_text("pi_1 -> Mee", &inv.pi1.inclusion));
            text.push_str(&hom_text("sigma on pi_1", &inv.sigma1));
            let _ = write!(
                text,
                "PSG0: {}\nPSGs: {}\nflat: {}\n",
                yes(inv.is_psg0),
                yes(inv.is_psgs),
                yes(inv.is_flat)
            );
            Ok(Report::ok(
                text,
                json!({
                    "pi0": group_json(&inv.pi0),
                    "pi1": group_json(&inv.pi1.group),
                    "pi1_inclusion": hom_json(&inv.pi1.inclusion),
                    "sigma1": hom_json(&inv.sigma1),
                    "psg0": inv.is_psg0,
                    "psgs": inv.is_psgs,
                    "flat": inv.is_flat,
                }),
            ))
        }
        PsgCmd::Kinv { file } => {
            let t = psg_file(file)?.invariants().triple();
            Ok(Report::ok(triple_text(&t), triple_json(&t)))
        }
        PsgCmd::Stable { file } => {
            let m = psg_file(file)?;
            let st = m.stable_invariants();
            let t = st.triple(m.pi0());
            let mut text = triple_text(&t);
            text.push_str(&hom_text("epsilon", &st.epsilon));
            let mut j = triple_json(&t);
            j["epsilon"] = hom_json(&st.epsilon);
            Ok(Report::ok(text, j))
        }
        PsgCmd::Coprod { a, b } => Ok(psg_doc(&psg::coproduct(&psg_file(a)?, &psg_file(b)?).psg)),
        PsgCmd::Prod { a, b } => Ok(psg_doc(&psg::product(&psg_file(a)?, &psg_file(b)?).psg)),
        PsgCmd::Push { file, map, target, involution } => {
            let m = psg_file(file)?;
            let inv = m.invariants();
            let t = group(target)?;
            let f = hom(&inv.pi1.group, &t, map)?;
            let s = match involution {
                Some(s) => hom(&t, &t, s)?,
                None => AbHom::identity(&t).neg(),
            };
            let p = psg::pushforward(&m, &f, &s)?;
            Ok(with_maps(psg_doc(&p.psg), &[("from_target", &p.from_target)]))
        }
        PsgCmd::Omega { group: g, bar } => {
            let variant = if *bar { OmegaVariant::Bar } else { OmegaVariant::Plain };
            Ok(psg_doc(&omega(&canonical_ta(&group(g)?), variant)?))
        }
        PsgCmd::Realize { mode, target } => {
            let stable = matches!(mode, PsgMode::Stable);
            let t = target_triple(target, stable)?;
            let r = realize_psg(&t, if stable { RealizeMode::Stable } else { RealizeMode::Flat23 })?;
            Ok(with_maps(psg_doc(&r.psg), &[("phi0", &r.phi0), ("phi1", &r.phi1)]))
        }
        PsgCmd::Odot { file, n } => {
            let m = psg_file(file)?;
            let arity = cli.max_arity.unwrap_or(4) as usize;
            let g = odot_eval(*n, &m, arity, cli.max_order.unwrap_or(1 << 20))?;
            let order = g.order_of_group();
            let text = format!(
                "quotient = {}\ncenter_part = {}\norder = {}\n",
                g.quotient(),
                g.center(),
                order.map_or("infinite".to_string(), |o| o.to_string())
            );
            Ok(Report::ok(
                text,
                json!({ "quotient": group_json(g.quotient()), "center_part": group_json(g.center()), "order": order.map(|o| o.to_string()) }),
            ))
        }
    }
}

fn sg_cmd(cli: &Cli, cmd: &SgCmd) -> CliResult<Report> {
    match cmd {
        SgCmd::Check { file } => {
            let q = sg_file(file)?;
            let cap = cli.max_order.map_or(DEFAULT_SAMPLE, |m| usize::try_from(m).unwrap_or(usize::MAX));
            let c = q.validate_with(cap);
            if let Err(i) = c.result {
                return Err(quadfun::Error::Invalid(format!("not a square group: {i} fails")).into());
            }
            let how = if c.exhaustive { "exhaustive" } else { "sampled" };
            let w = q.wp();
            let text = format!(
                "ok: square group (identities checked {how})\npi_0 = {}\npi_1 = {}\n",
                q.pi0(),
                q.pi1().group
            );
            Ok(Report::ok(text, json!({ "valid": true, "check": how, "psg0": w.is_psg0() })))
        }
        SgCmd::Wp { file } => Ok(psg_doc(&sg_file(file)?.wp())),
        SgCmd::Lift { file, route } => {
            let m = psg_file(file)?;
            let outcome = match route {
                None => lift(&m)?,
                Some(Route::Table) => lift_via(&m, CoboundaryRoute::Table, cli.max_order.unwrap_or(DEFAULT_TABLE_BOUND))?,
                Some(Route::Section) => lift_via(&m, CoboundaryRoute::Section, cli.max_order.unwrap_or(DEFAULT_TABLE_BOUND))?,
            };
            Ok(match outcome {
                LiftOutcome::Lifted(q) => sg_doc(&q),
                LiftOutcome::NotPsg0 => Report::domain(
                    "not_psg0",
                    "the presquare group is not in PSG0 (Id + sigma does not factor through P)".into(),
                    json!({}),
                ),
                LiftOutcome::Obstructed(o) => Report::domain(
                    "obstructed",
                    format!(
                        "the obstruction is nonzero: Ext part {} in {}, pairing {}",
                        fmt_elem(&o.value.ext.coords),
                        o.value.ext.group(),
                        fmt_hom(&o.value.pairing)
                    ),
                    json!({ "ext": ext_json(&o.value.ext), "pairing": hom_json(&o.value.pairing) }),
                ),
            })
        }
        SgCmd::Delta { file } => {
            let q = sg_file(file)?;
            let d = q.delta()?;
            let pi1 = q.pi1();
            let mut text = hom_text("Delta", &d);
            text.push_str(&hom_text("pi_1 -> Mee", &pi1.inclusion));
            Ok(Report::ok(text, json!({ "delta": hom_json(&d), "pi1_inclusion": hom_json(&pi1.inclusion) })))
        }
        SgCmd::Twist { file, alpha } => {
            let q = sg_file(file)?;
            let a = hom(q.pi0(), q.qee(), alpha)?;
            Ok(sg_doc(&q.twist(&a)?))
        }
        SgCmd::Realize { mode, target } => match mode {
            SgMode::Flat => {
                let t = target_triple(target, false)?;
                match realize_sg_flat(&t)? {
                    SgRealizeOutcome::Realized(r) => Ok(with_maps(sg_doc(&r.sg), &[("phi0", &r.phi0), ("phi1", &r.phi1)])),
                    SgRealizeOutcome::UnsupportedPi2 { summand, theta } => Ok(Report::domain(
                        "unsupported_pi2",
                        format!("no realizer for the summand {summand}: theta = {}", fmt_elem(&theta.coords)),
                        json!({ "summand": group_json(&summand), "theta": ext_json(&theta) }),
                    )),
                }
            }
            SgMode::Stable => {
                let t = target_triple(target, true)?;
                let r = realize_sg_stable(&t)?;
                Ok(with_maps(sg_doc(&r.sg), &[("phi0", &r.phi0), ("phi1", &r.phi1)]))
            }
            SgMode::Delta => {
                if target.involution.is_some() {
                    return Err(CliError::Usage("delta targets carry no involution".into()));
                }
                let a = group(&target.pi)?;
                let b = group(&target.target)?;
                let f = hom(&a, &b, &target.k)?;
                let r = realize_sg_delta(&f)?;
                Ok(with_maps(sg_doc(&r.sg), &[("phi0", &r.phi0), ("phi1", &r.phi1)]))
            }
        },
        SgCmd::Theta { file } => {
            let m = psg_file(file)?;
            match obstruction(&m) {
                None => Ok(Report::domain("not_psg0", "the presquare group is not in PSG0".into(), json!({}))),
                Some(o) => {
                    let text = format!(
                        "obstruction: {}\nExt part {} in {}\npairing {}\n",
                        if o.zero { "zero" } else { "nonzero" },
                        fmt_elem(&o.value.ext.coords),
                        o.value.ext.group(),
                        fmt_hom(&o.value.pairing)
                    );
                    Ok(Report::ok(
                        text,
                        json!({ "zero": o.zero, "ext": ext_json(&o.value.ext), "pairing": hom_json(&o.value.pairing) }),
                    ))
                }
            }
        }
        SgCmd::Omega { group: g } => {
            let a = group(g)?;
            match lift_omega(&a)? {
                OmegaLift::Lifted { sg, .. } => Ok(sg_doc(&sg)),
                OmegaLift::ThetaNonzero(t) => Ok(Report::domain(
                    "theta_nonzero",
                    format!(
                        "theta({a}) = {} in Ext({a}, Sym2) = {}, carries {}",
                        fmt_elem(&t.coords),
                        t.group(),
                        fmt_elems(&t.carries())
                    ),
                    json!({ "group": group_json(&a), "theta": ext_json(&t) }),
                )),
            }
        }
        SgCmd::Builtin { kind, arg } => {
            let need = |what: &str| arg.clone().ok_or_else(|| CliError::Usage(format!("{what} needs an argument")));
            let b = match kind {
                BuiltinKind::Znil => Builtin::Znil,
                BuiltinKind::TwoPowerCyclic => {
                    let n = need("two-power-cyclic")?;
                    Builtin::TwoPowerCyclic(n.parse().map_err(|_| CliError::Usage(format!("bad exponent {n:?}")))?)
                }
                BuiltinKind::HalfInvertible => Builtin::HalfInvertible(group(&need("half-invertible")?)?),
                BuiltinKind::StableUniversal => Builtin::StableUniversal(group(&need("stable-universal")?)?),
            };
            Ok(sg_doc(&builtin_realizer(&b)?))
        }
    }
}

fn verify_cmd(cli: &Cli, cmd: &VerifyCmd) -> CliResult<Report> {
    let bounds = Bounds::new(cli.max_order, cli.max_arity.map(|a| a as usize))?;
    let fault = cli.inject_fault.as_deref();
    let anchors: Vec<&'static str> = match cmd {
        VerifyCmd::List => {
            let mut text = String::new();
            let mut list = Vec::new();
            for s in verify::SUITES {
                let _ = writeln!(text, "{}: {}", s.anchor, s.about);
                list.push(json!({ "anchor": s.anchor, "about": s.about }));
            }
            return Ok(Report::ok(text, Value::Array(list)));
        }
        VerifyCmd::PaperTables => verify::SUITES.iter().map(|s| s.anchor).collect(),
        VerifyCmd::Suite { anchors } => anchors
            .iter()
            .map(|anchor| {
                verify::SUITES
                    .iter()
                    .find(|s| s.anchor == anchor)
                    .map(|s| s.anchor)
                    .ok_or_else(|| CliError::Usage(format!("unknown suite {anchor:?}; see `verify list`")))
            })
            .collect::<CliResult<_>>()?,
    };
    let results = verify::run(&anchors, &bounds, fault);
    let mut text = String::new();
    let mut suites = Vec::new();
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{status} {}: {} ({} checks)", r.anchor, r.about, r.checks);
        for f in r.failures.iter().take(5) {
            let _ = writeln!(text, "  - {f}");
        }
        suites.push(json!({
            "anchor": r.anchor,
            "pass": r.passed(),
            "checks": r.checks,
            "failures": r.failures,
        }));
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    let _ = writeln!(text, "{passed} of {} suites passed (max order {})", results.len(), bounds.max_order);
    let all = passed == results.len();
    Ok(Report {
        text,
        json: json!({ "pass": all, "max_order": bounds.max_order.to_string(), "suites": suites }),
        code: u8::from(!all),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Output {
        let cli = Cli::try_parse_from(std::iter::once("quadfun").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn functor_values() {
        assert_eq!(run_args(&["functor", "Gamma", "Z/4Z"]).stdout, "Z/8Z\n");
        assert_eq!(run_args(&["functor", "P", "Z/2"]).stdout, "Z/4Z\n");
        let out = run_args(&["--json", "functor", "P", "Z"]);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["value"], json!([0, 0]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["functor", "Nope", "Z"]).code, 2);
        assert_eq!(run_args(&["functor", "P", "Q"]).code, 2);
        let out = run_args(&["sg", "omega", "Z/2"]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.starts_with("theta_nonzero"));
        assert_eq!(run_args(&["psg", "check", "/nonexistent/file"]).code, 2);
    }
}

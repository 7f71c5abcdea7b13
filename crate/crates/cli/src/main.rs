//! `tamedef`: inspect coefficient rings, local cohomology, Selmer ledgers and
//! deformation classes at trivial primes, and run the verification suite.
//!
//! Exit codes: 0 success, 1 a verification or membership check failed,
//! 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tamedef::coeffring::{
    filtration_nk, graded_piece, maximal_ideal_power, parse, parse_elem, print, CoefficientRing, FiniteField,
    Monomial, SubmoduleIdeal,
};
use tamedef::cohomology::{h_dims, GModule};
use tamedef::defclass::{fiber_enumerate, stabilization_check};
use tamedef::ledger::{parse_scenario, run_scenario};
use tamedef::matrep::{in_deform_class, DeformClassSpec, Mode, SearchConfig, Variant, DEFAULT_SEARCH_BOUND};
use tamedef::verify::{verify_all, VerifyOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "tamedef", version, about = "Deformations of residually trivial tame representations")]
struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Largest conjugator space exhaustive search may enumerate.
    #[arg(long, env = "TAMEDEF_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND, global = true,
          value_parser = positive_u128)]
    search_bound: u128,
    /// Number of shards for parallel enumeration.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    shards: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Filtration table of a coefficient ring: m^k, n_k and graded pieces.
    Ring {
        #[command(flatten)]
        ring: RingArg,
    },
    /// Local cohomology dimensions of Ad or Ad0 for the trivial residual
    /// representation at a tame prime v.
    Cohom {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long)]
        v: u64,
        #[arg(long, value_enum, default_value = "ad")]
        module: ModuleArg,
    },
    /// Evaluate a ledger scenario file.
    Ledger { file: PathBuf },
    /// Membership of a normal-form representation in a deformation class.
    Deform {
        #[command(flatten)]
        class: ClassArgs,
        /// Class to test against; defaults to the class the representation is built in.
        #[arg(long)]
        against: Option<Variant>,
        #[arg(long, default_value = "normal-form")]
        mode: Mode,
    },
    /// Lifting experiments.
    Lift {
        #[command(subcommand)]
        cmd: LiftCmd,
    },
    /// Run the complete verification suite.
    VerifyAll {
        /// Directory of ledger scenarios replacing the built-in golden files.
        #[arg(long)]
        scenario_dir: Option<PathBuf>,
        /// Comma-separated criteria to run (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum LiftCmd {
    /// Twist class members over R/n_{k+1} by N_v (x) n_k/n_{k+1} and re-test membership.
    Stabilize {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        variant: Variant,
        #[arg(long)]
        v: u64,
        #[arg(long, default_value = "normal-form")]
        mode: Mode,
    },
    /// Enumerate lifts from R/J to R of a normal form and compare with H^1 (x) J.
    Fiber {
        #[command(flatten)]
        class: ClassArgs,
        /// Monomial generators of J, e.g. "p^2" or "p*U,U^2".
        #[arg(long)]
        ideal: String,
    },
}

#[derive(Args, Debug)]
struct RingArg {
    /// Ring presentation, inline or a path to a file containing one.
    #[arg(long)]
    spec: String,
}

#[derive(Args, Debug)]
struct ClassArgs {
    #[command(flatten)]
    ring: RingArg,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    v: u64,
    #[arg(long, default_value = "0")]
    x: String,
    #[arg(long, default_value = "0")]
    y: String,
    /// Scalar of sigma for the twisted class.
    #[arg(long)]
    z: Option<String>,
    #[arg(long, default_value_t = 1)]
    kappa: i64,
    /// Use the transported class (nr and ram only).
    #[arg(long)]
    transported: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModuleArg {
    Ad,
    Ad0,
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Input(String),
}

impl From<tamedef::Error> for Failure {
    fn from(e: tamedef::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Rendered result plus whether the command's check passed.
struct Output {
    json: Value,
    human: String,
    ok: bool,
}

fn load_ring(arg: &RingArg) -> Result<Arc<CoefficientRing>, Failure> {
    let text = match std::fs::read_to_string(&arg.spec) {
        Ok(t) => t,
        Err(_) => arg.spec.clone(),
    };
    Ok(Arc::new(parse(text.trim())?))
}

fn parse_monomial(r: &CoefficientRing, s: &str) -> Result<Monomial, Failure> {
    let mut p = 0;
    let mut vars = vec![0; r.vars().len()];
    for factor in s.split('*').map(str::trim) {
        let (name, e) = match factor.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| Failure::Input(format!("bad exponent in {s:?}")))?),
            None => (factor, 1),
        };
        if name == "p" {
            p += e;
        } else if let Some(i) = r.vars().iter().position(|v| v == name) {
            vars[i] += e;
        } else if name != "1" {
            return Err(Failure::Input(format!("unknown variable {name:?} in {s:?}")));
        }
    }
    Ok(Monomial::new(p, vars))
}

fn cmd_ring(arg: &RingArg) -> Result<Output, Failure> {
    let r = load_ring(arg)?;
    let mut rows = Vec::new();
    let mut human = format!("ring: {}\norder: {}^{}\n", print(&r), r.p(), r.base().degree() as u32 * r.length());
    human += &format!("{:>3}  {:>8}  {:>8}  {:>13}  {}\n", "k", "dim m^k", "dim n_k", "dim gr_k", "basis of n_k/n_k+1");
    let mut k = 1;
    loop {
        let mk = maximal_ideal_power(&r, k);
        let nk = filtration_nk(&r, k)?;
        if mk.is_zero() {
            break;
        }
        let gr: Vec<String> = graded_piece(&r, k)?.iter().map(|m| m.display_with(r.vars())).collect();
        human += &format!("{:>3}  {:>8}  {:>8}  {:>13}  {}\n", k, mk.dim_fp(), nk.dim_fp(), gr.len(), gr.join(", "));
        rows.push(json!({
            "k": k,
            "dim_m_k": mk.dim_fp(),
            "dim_n_k": nk.dim_fp(),
            "graded_basis": gr,
        }));
        k += 1;
    }
    Ok(Output {
        json: json!({ "ring": print(&r), "p": r.p(), "length": r.length(), "rows": rows }),
        human,
        ok: true,
    })
}

fn cmd_cohom(p: u64, f: usize, v: u64, module: ModuleArg) -> Result<Output, Failure> {
    let k = FiniteField::new(p, f, None)?;
    let m = Arc::new(GModule::trivial_adjoint(&k, v, module == ModuleArg::Ad0)?);
    let (h0, h1, h2) = h_dims(&m, false)?;
    let name = if module == ModuleArg::Ad { "Ad" } else { "Ad0" };
    Ok(Output {
        json: json!({ "p": p, "f": f, "v": v, "module": name, "h0": h0, "h1": h1, "h2": h2 }),
        human: format!("{name} over F_{}^{f} at v = {v}: h0 = {h0}, h1 = {h1}, h2 = {h2}\n", p),
        ok: true,
    })
}

fn cmd_ledger(file: &PathBuf) -> Result<Output, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    let out = run_scenario(&parse_scenario(&text)?)?;
    let mut human = format!("{}: {}\n", if out.passed { "PASS" } else { "FAIL" }, out.claim);
    for d in &out.details {
        human += &format!("  {d}\n");
    }
    Ok(Output { json: serde_json::to_value(&out).expect("serializable"), human, ok: out.passed })
}

fn class_spec(c: &ClassArgs) -> Result<DeformClassSpec, Failure> {
    let base = if c.transported { DeformClassSpec::transported(c.variant, c.v)? } else { DeformClassSpec::plain(c.variant, c.v) };
    Ok(DeformClassSpec::new(base.variant, base.v, c.kappa, base.conjugator)?)
}

fn build_rep(c: &ClassArgs, r: &Arc<CoefficientRing>) -> Result<(DeformClassSpec, tamedef::matrep::TameRep), Failure> {
    let spec = class_spec(c)?;
    let x = parse_elem(r, &c.x)?;
    let y = parse_elem(r, &c.y)?;
    let z = c.z.as_deref().map(|z| parse_elem(r, z)).transpose()?;
    let rep = spec.transported_normal_form(r, &x, &y, z.as_ref())?;
    Ok((spec, rep))
}

fn cmd_deform(c: &ClassArgs, against: Option<Variant>, mode: Mode, cfg: &SearchConfig) -> Result<Output, Failure> {
    let r = load_ring(&c.ring)?;
    let (mut spec, rep) = build_rep(c, &r)?;
    if let Some(v) = against {
        spec = DeformClassSpec::new(v, spec.v, spec.kappa_sigma, spec.conjugator)?;
    }
    let verdict = in_deform_class(&rep, &spec, mode, cfg)?;
    let witness = verdict.witness.as_ref().map(|a| a.fmt_with(&r));
    let nf = verdict.normal_form.as_ref().map(|(x, y)| json!({ "x": r.fmt_elem(x), "y": r.fmt_elem(y) }));
    let mut human = format!("representation: {}\nclass: {} (v = {})\nmember: {}\n", rep.fmt_text(), spec.variant, spec.v, verdict.holds);
    if let Some(w) = &witness {
        human += &format!("witness: {w}\n");
    }
    Ok(Output {
        json: json!({
            "ring": print(&r),
            "class": spec,
            "representation": rep.fmt_text(),
            "member": verdict.holds,
            "witness": witness,
            "normal_form": nf,
        }),
        human,
        ok: verdict.holds,
    })
}

fn cmd_stabilize(ring: &RingArg, k: u32, variant: Variant, v: u64, mode: Mode, cfg: &SearchConfig) -> Result<Output, Failure> {
    let r = load_ring(ring)?;
    let rep = stabilization_check(&r, k, variant, v, mode, cfg)?;
    let bad = rep.violations().count();
    let mut human = format!("{} over {} at k = {}: {} twists, {} leave the class\n", variant, rep.ring, k, rep.cases.len(), bad);
    for c in rep.violations().take(5) {
        human += &format!("  x = {}, y = {}: twist {} by {}\n", c.x, c.y, c.cocycle, c.scalar);
    }
    Ok(Output {
        json: json!({ "report": rep, "preserved": rep.all_preserved() }),
        human,
        ok: rep.all_preserved(),
    })
}

fn cmd_fiber(c: &ClassArgs, ideal: &str, cfg: &SearchConfig) -> Result<Output, Failure> {
    let r = load_ring(&c.ring)?;
    let gens = ideal.split(',').map(|g| parse_monomial(&r, g)).collect::<Result<Vec<_>, _>>()?;
    let j = SubmoduleIdeal::generated_by(r.clone(), &gens)?;
    let q = Arc::new(j.quotient_ring()?);
    let (spec, base) = build_rep(c, &q)?;
    let rep = fiber_enumerate(&r, &j, &spec, &base, cfg)?;
    let human = format!(
        "lifts: {}\nin class: {}\n|H1 (x) J|: {} (h1 = {}, dim J = {})\nclasses: {}\nsimply transitive: {}\n\
         stabilizer of the base: {}\ncoarse classes: {}\ncoarse action free: {}\n",
        rep.lifts,
        rep.class_members,
        rep.group_order,
        rep.h1_dim,
        rep.j_length,
        rep.classes,
        rep.simply_transitive,
        rep.stabilizer_size,
        rep.coarse_classes,
        rep.coarse_free
    );
    Ok(Output {
        ok: rep.is_empty() || rep.simply_transitive,
        json: serde_json::to_value(&rep).expect("serializable"),
        human,
    })
}

fn cmd_verify(scenario_dir: Option<PathBuf>, criteria: Vec<u8>, shards: usize) -> Result<Output, Failure> {
    if let Some(bad) = criteria.iter().find(|c| !(1..=8).contains(*c)) {
        return Err(Failure::Input(format!("no criterion {bad}")));
    }
    if let Some(d) = &scenario_dir {
        if !d.is_dir() {
            return Err(Failure::Input(format!("{} is not a directory", d.display())));
        }
    }
    let report = verify_all(&VerifyOptions { scenario_dir, shards, criteria });
    let mut human = String::new();
    for c in &report.checks {
        human += &format!("{}  [{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.criterion, c.id, c.detail);
    }
    let n = report.checks.iter().filter(|c| c.passed).count();
    human += &format!("{}/{} checks passed\n", n, report.checks.len());
    Ok(Output {
        json: json!({ "passed": report.passed(), "checks": report.checks }),
        human,
        ok: report.passed(),
    })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let cfg = SearchConfig { bound: cli.search_bound, shards: cli.shards as usize };
    match cli.cmd {
        Cmd::Ring { ring } => cmd_ring(&ring),
        Cmd::Cohom { p, f, v, module } => cmd_cohom(p, f, v, module),
        Cmd::Ledger { file } => cmd_ledger(&file),
        Cmd::Deform { class, against, mode } => cmd_deform(&class, against, mode, &cfg),
        Cmd::Lift { cmd: LiftCmd::Stabilize { ring, k, variant, v, mode } } => cmd_stabilize(&ring, k, variant, v, mode, &cfg),
        Cmd::Lift { cmd: LiftCmd::Fiber { class, ideal } } => cmd_fiber(&class, &ideal, &cfg),
        Cmd::VerifyAll { scenario_dir, criteria } => cmd_verify(scenario_dir, criteria, cfg.shards),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Human => print!("{}", out.human),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

//! Command-line front end: one subcommand per computation, each producing a [`Report`].
//!
//! Exit status: 0 on a reached verdict, 2 on invalid input, 3 when a size cap is exceeded,
//! 1 on an internal consistency failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::algebraic::{is_algebraic, Algebraicity, Tier};
use crate::config::{Caps, ReportFormat, RunConfig};
use crate::domain::{
    center_obstruction, certificate_system, check_equational_domain, find_zero_divisor_pair, union_matches,
    union_system,
};
use crate::error::{Error, Result};
use crate::free_group::check_ed_condition_bounded;
use crate::group::io::{parse_automorphisms, parse_group, parse_points, parse_subgroup};
use crate::group::{
    catalog, compute_full_aut, generate_aut_subgroup, inner_automorphisms, AutGroup, FiniteGroup, Subgroup,
};
use crate::power::compact::{q_compactness_instance, u_compactness_witness, CheckMode};
use crate::power::gamma::{parse_range, PowerSystem, TranslatedSystem};
use crate::power::{build_cyclic_power, PowerAut, PowerDomain, PowerElement};
use crate::report::Report;
use crate::solver::{solve_reference, solve_system, tuple_space, twisted_conjugacy_solve, EqSystem};
use crate::term::{AutDomain, Binding};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "autgeo", version, about = "Equations with automorphisms over finite groups")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Validate the inputs and stop before computing.
    #[arg(long, global = true)]
    dry_run: bool,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Cap profile: small, default or large.
    #[arg(long, global = true, env = "AUTGEO_CAP_PROFILE", default_value = "default")]
    cap_profile: String,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Group file, or `builtin:NAME` (Z<n>, S<n>, A<n>, D<n>, Q8, V4).
    #[arg(long)]
    group: String,
    /// `full`, `trivial`, `inner`, `inner:<subgroup file>` or `file:<automorphism file>`.
    #[arg(long, default_value = "full")]
    auts: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve a system of equations.
    Solve {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        arity: Option<usize>,
        /// List the solutions.
        #[arg(long)]
        list: bool,
        /// Cross-check against the naive enumerator.
        #[arg(long)]
        reference: bool,
    },
    /// Search for a zero-divisor pair and build the certificate system.
    CheckDomain {
        #[command(flatten)]
        g: GroupArgs,
        /// Solve the certificate and compare it with the cross.
        #[arg(long)]
        verify: bool,
    },
    /// Build a system whose solutions are the union of two solution sets.
    Union {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        s1: PathBuf,
        #[arg(long)]
        s2: PathBuf,
        /// `auto` or a file holding a system in x1, x2.
        #[arg(long, default_value = "auto")]
        cert: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        list: bool,
    },
    /// Algebraic closure of a point set.
    Closure {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Direct powers of a group.
    Power {
        #[command(subcommand)]
        action: PowerCommand,
    },
    /// Translate a system over the direct power into equations over the base group.
    Gamma {
        #[arg(long, default_value = "builtin:Z1")]
        group: String,
        #[arg(long, default_value = "full")]
        auts: String,
        #[arg(long)]
        system: PathBuf,
        /// Range of shifts `a..b`.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Read the window as a range of indices instead of shifts.
        #[arg(long)]
        index_window: bool,
    },
    /// Witness pair for a finite commutation subsystem.
    UcompactWitness {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        subsystem: PathBuf,
        /// Non-identity element placed in both witnesses.
        #[arg(long = "g")]
        element: String,
    },
    /// Extract a finite subsystem for a target and test the inclusion on bounded supports.
    QcompactTest {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        support: i64,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Bounded search for zero-divisor pairs in F2 under the swap automorphism.
    F2Check {
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value_t = crate::free_group::DEFAULT_MAX_LEN)]
        bound: usize,
    },
    /// Solve phi(x) u = v x.
    Twisted {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        phi: String,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
}

#[derive(Subcommand, Debug)]
enum PowerCommand {
    Build {
        #[command(flatten)]
        g: GroupArgs,
        /// `cyclic:<m>` or `window:<B>`.
        #[arg(long)]
        mode: String,
        /// Search the materialized power for a zero-divisor pair.
        #[arg(long)]
        check_domain: bool,
    },
}

struct Ctx {
    config: RunConfig,
    profile: String,
    dry_run: bool,
}

impl Ctx {
    fn caps(&self) -> &Caps {
        &self.config.caps
    }

    fn report(&self, command: &str) -> Report {
        Report::new(command, &self.config, &self.profile)
    }
}

/// Parses `args` (program name first), runs the subcommand and writes the report.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => match &cli.report {
            Some(path) => match std::fs::write(path, text) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    EXIT_INVALID
                }
            },
            None => {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_size_limit() => EXIT_CAP,
        Error::InFile { source, .. } => exit_code(source),
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let caps = Caps::profile(&cli.cap_profile)?;
    let format = if cli.json { ReportFormat::Json } else { ReportFormat::Text };
    let ctx = Ctx {
        config: RunConfig { caps, workers: cli.workers, format, seed: cli.seed },
        profile: cli.cap_profile.clone(),
        dry_run: cli.dry_run,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut report = pool.install(|| dispatch(&cli.command, &ctx))?;
    if ctx.dry_run {
        report.field("dry_run", true);
    }
    if cli.timing {
        report.field("timing_ms", start.elapsed().as_millis() as u64);
    }
    Ok(report.render(format))
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report> {
    match cmd {
        Command::Solve { g, system, arity, list, reference } => solve(ctx, g, system, *arity, *list, *reference),
        Command::CheckDomain { g, verify } => check_domain(ctx, g, *verify),
        Command::Union { g, s1, s2, cert, arity, list } => union(ctx, g, s1, s2, cert, *arity, *list),
        Command::Closure { g, points, budget } => closure(ctx, g, points, *budget),
        Command::Power { action: PowerCommand::Build { g, mode, check_domain } } => power_build(ctx, g, mode, *check_domain),
        Command::Gamma { group, auts, system, window, index_window } => {
            gamma(ctx, &GroupArgs { group: group.clone(), auts: auts.clone() }, system, window, *index_window)
        }
        Command::UcompactWitness { g, subsystem, element } => ucompact(ctx, g, subsystem, element),
        Command::QcompactTest { g, system, target, support, window } => qcompact(ctx, g, system, target, *support, window),
        Command::F2Check { max_len, bound } => f2_check(ctx, *max_len, *bound),
        Command::Twisted { g, phi, u, v } => twisted(ctx, g, phi, u, v),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path.display().to_string()))
}

fn load_group(arg: &str, caps: &Caps) -> Result<FiniteGroup> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return catalog::by_name(name);
    }
    let path = Path::new(arg);
    parse_group(&read(path)?, caps.group_order).map_err(|e| e.in_file(arg))
}

fn load_auts(arg: &str, g: &FiniteGroup, caps: &Caps) -> Result<AutGroup> {
    let whole = || Subgroup::whole(g);
    let auts = match arg {
        "full" => return compute_full_aut(g, caps.aut_search_order),
        "trivial" => AutGroup::trivial(g),
        "inner" => inner_automorphisms(g, &whole()),
        _ => {
            if let Some(path) = arg.strip_prefix("inner:") {
                let h = parse_subgroup(&read(Path::new(path))?, g).map_err(|e| e.in_file(path))?;
                inner_automorphisms(g, &h)
            } else {
                let path = arg.strip_prefix("file:").unwrap_or(arg);
                let gens = parse_automorphisms(&read(Path::new(path))?, g).map_err(|e| e.in_file(path))?;
                generate_aut_subgroup(g, &gens, caps.aut_group_order)?
            }
        }
    };
    Ok(auts.with_inner_aliases(g))
}

fn load(ctx: &Ctx, args: &GroupArgs) -> Result<(FiniteGroup, AutGroup)> {
    let g = load_group(&args.group, ctx.caps())?;
    let a = load_auts(&args.auts, &g, ctx.caps())?;
    Ok((g, a))
}

fn group_fields(r: &mut Report, g: &FiniteGroup, a: &AutGroup) {
    r.field("group", g.name()).field("group_order", g.order() as u64).field("automorphisms", a.order() as u64);
}

fn load_system(path: &Path, arity: Option<usize>, b: &Binding<'_>) -> Result<EqSystem> {
    let text = read(path)?;
    EqSystem::parse(&text, arity, b).map_err(|e| e.in_file(path.display().to_string()))
}

fn point_names(p: &[usize], g: &FiniteGroup) -> String {
    p.iter().map(|&x| g.element_name(x)).collect::<Vec<_>>().join(" ")
}

fn element(g: &FiniteGroup, name: &str) -> Result<usize> {
    g.lookup(name)
        .ok_or_else(|| Error::validation("element", format!("unknown element `{name}` in group {}", g.name())))
}

fn solve(ctx: &Ctx, ga: &GroupArgs, path: &Path, arity: Option<usize>, list: bool, reference: bool) -> Result<Report> {
    let (g, a) = load(ctx, ga)?;
    let b = Binding::new(&g, &a).with_constants(true);
    let sys = load_system(path, arity, &b)?;
    let mut r = ctx.report("solve");
    group_fields(&mut r, &g, &a);
    r.field("arity", sys.arity as u64).field("equations", sys.equations.len() as u64);
    let space = tuple_space(g.order(), sys.arity, ctx.caps().enumeration)?;
    r.field("tuple_space", space);
    if ctx.dry_run {
        return Ok(r);
    }
    let v = solve_system(&sys, &b, ctx.caps())?;
    r.field("cardinality", v.cardinality).field("materialized", v.is_materialized());
    if reference {
        let naive = solve_reference(&sys, &b)?;
        r.field("reference_agrees", v.same_points(&naive).unwrap_or(v.cardinality == naive.cardinality));
    }
    if list {
        if let Some(points) = v.points() {
            r.listing("points", points.map(|p| point_names(&p, &g)));
        }
    }
    Ok(r)
}

fn check_domain(ctx: &Ctx, ga: &GroupArgs, verify: bool) -> Result<Report> {
    let (g, a) = load(ctx, ga)?;
    let mut r = ctx.report("check-domain");
    group_fields(&mut r, &g, &a);
    if ctx.dry_run {
        return Ok(r);
    }
    let v = check_equational_domain(&g, &a, verify, ctx.caps())?;
    let name = |x| g.element_name(x).to_string();
    r.field("is_domain", v.is_domain);
    r.field(
        "zero_divisor_pair",
        v.zero_divisor_pair.map_or(Value::Null, |(x, y)| format!("{} {}", name(x), name(y)).into()),
    );
    r.field("central_witness", center_obstruction(&g).map_or(Value::Null, |z| name(z).into()));
    r.field("certificate_equations", v.certificate_system.as_ref().map_or(0, |s| s.equations.len() as u64));
    if verify {
        r.field("verified_cross", v.verified_cross);
        r.field("cross_size", v.cross_size.map_or(Value::Null, Value::from));
    }
    if let Some(note) = v.note {
        r.field("note", note);
    }
    Ok(r)
}

fn union(
    ctx: &Ctx,
    ga: &GroupArgs,
    s1: &Path,
    s2: &Path,
    cert: &str,
    arity: Option<usize>,
    list: bool,
) -> Result<Report> {
    let (g, a) = load(ctx, ga)?;
    let b = Binding::new(&g, &a).with_constants(true);
    let sys1 = load_system(s1, arity, &b)?;
    let sys2 = load_system(s2, Some(arity.unwrap_or(sys1.arity)), &b)?;
    let certificate = match cert {
        "auto" => certificate_system(&a),
        path => load_system(Path::new(path), Some(2), &b.with_constants(false))?,
    };
    let mut r = ctx.report("union");
    group_fields(&mut r, &g, &a);
    r.field("arity", sys1.arity as u64).field("certificate_equations", certificate.equations.len() as u64);
    if ctx.dry_run {
        return Ok(r);
    }
    let u = union_system(&sys1, &sys2, &certificate, &b, ctx.caps())?;
    let v1 = solve_system(&sys1, &b, ctx.caps())?;
    let v2 = solve_system(&sys2, &b, ctx.caps())?;
    let v = solve_system(&u, &b, ctx.caps())?;
    r.field("s1_cardinality", v1.cardinality)
        .field("s2_cardinality", v2.cardinality)
        .field("union_equations", u.equations.len() as u64)
        .field("union_cardinality", v.cardinality)
        .field("matches_union", union_matches(&u, &sys1, &sys2, &b, ctx.caps())?);
    if list {
        r.listing("union_system", u.equations.iter().map(|e| format!("{} = 1", e.lhs.display(&g))));
    }
    Ok(r)
}

fn closure(ctx: &Ctx, ga: &GroupArgs, path: &Path, budget: Option<usize>) -> Result<Report> {
    let (g, a) = load(ctx, ga)?;
    let points = parse_points(&read(path)?, &g).map_err(|e| e.in_file(path.display().to_string()))?;
    let arity = points.first().map_or(1, |p| p.len());
    let budget = budget.unwrap_or(ctx.caps().closure_budget);
    let mut r = ctx.report("closure");
    group_fields(&mut r, &g, &a);
    r.field("arity", arity as u64).field("points", points.len() as u64).field("budget", budget as u64);
    if ctx.dry_run {
        return Ok(r);
    }
    let (verdict, set) = is_algebraic(&points, arity, &g, &a, budget, ctx.caps())?;
    r.field("tier", if set.tier == Tier::Clone { "clone" } else { "syntax" })
        .field("closure_size", set.points.len() as u64)
        .field("exact", set.exact);
    match verdict {
        Algebraicity::Yes { witness } => {
            r.field("algebraic", "yes").field("witness_equations", witness.equations.len() as u64);
            r.listing("witness", witness.equations.iter().map(|e| format!("{} = 1", e.lhs.display(&g))));
        }
        Algebraicity::No { closure_size } => {
            r.field("algebraic", "no").field("exact_closure_size", closure_size as u64);
        }
        Algebraicity::Inconclusive { gap } => {
            r.field("algebraic", "inconclusive").field("gap", gap.len() as u64);
            r.listing("gap", gap.iter().map(|p| point_names(p, &g)));
        }
    }
    Ok(r)
}

fn power_build(ctx: &Ctx, ga: &GroupArgs, mode: &str, check: bool) -> Result<Report> {
    let (g, a0) = load(ctx, ga)?;
    let mut r = ctx.report("power build");
    group_fields(&mut r, &g, &a0);
    let bad = || Error::validation("mode", format!("expected `cyclic:<m>` or `window:<B>`, found `{mode}`"));
    let (kind, value) = mode.split_once(':').ok_or_else(bad)?;
    match kind {
        "cyclic" => {
            let m: usize = value.parse().map_err(|_| bad())?;
            r.field("mode", format!("cyclic {m}"));
            let order = (g.order() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
            if order > ctx.caps().group_order as u128 {
                return Err(Error::size_limit(
                    "direct power order |G|^m",
                    ctx.caps().group_order as u128,
                    order,
                    "use a smaller base group or fewer coordinates",
                ));
            }
            if ctx.dry_run {
                return Ok(r);
            }
            let p = build_cyclic_power(&g, &a0, m, ctx.caps().group_order, ctx.caps().aut_group_order)?;
            r.field("power_order", p.group.order() as u64).field("power_automorphisms", p.auts.order() as u64);
            if check {
                let pair = find_zero_divisor_pair(&p.group, &p.auts);
                r.field("is_domain", pair.is_none());
                r.field(
                    "zero_divisor_pair",
                    pair.map_or(Value::Null, |(x, y)| {
                        format!("{} {}", p.group.element_name(x), p.group.element_name(y)).into()
                    }),
                );
            }
        }
        "window" => {
            let bound: i64 = value.parse().map_err(|_| bad())?;
            if bound < 0 {
                return Err(bad());
            }
            r.field("mode", format!("window {bound}"));
            r.field("index_set", "Z").field("support", format!("{}..{}", -bound, bound));
            r.field("power_automorphisms", format!("(phi, k) with phi in the {} base automorphisms, k in Z", a0.order()));
            if ctx.dry_run {
                return Ok(r);
            }
            if let Some(&s) = g.generators().first() {
                let h = PowerElement::from_pairs([(0, s)]);
                let sh = h.apply(PowerAut { phi: 0, shift: 1 }, &a0);
                r.field("sigma_example", format!("{} -> {}", h.display(&g), sh.display(&g)));
            }
        }
        _ => return Err(bad()),
    }
    Ok(r)
}

fn gamma(ctx: &Ctx, ga: &GroupArgs, path: &Path, window: &str, index_window: bool) -> Result<Report> {
    let (g, a0) = load(ctx, ga)?;
    let range = parse_range(window)?;
    let text = read(path)?;
    let sys = PowerSystem::parse(&text, None, &a0, range.1 - range.0).map_err(|e| e.in_file(path.display().to_string()))?;
    let mut r = ctx.report("gamma");
    group_fields(&mut r, &g, &a0);
    r.field("arity", sys.arity as u64).field("base_equations", sys.len() as u64);
    r.field(if index_window { "index_window" } else { "shifts" }, format!("{}..{}", range.0, range.1));
    if ctx.dry_run {
        return Ok(r);
    }
    let t = if index_window {
        TranslatedSystem::for_window(&sys, range)
    } else {
        TranslatedSystem::gamma_translate(&sys, range)
    };
    r.field("equations", t.equations.len() as u64)
        .field("trivial_base_equations", t.trivial_sources.len() as u64)
        .field("shift_coherent", t.shift_coherence_violation().is_none());
    r.listing("translated", t.render(&a0).lines().map(str::to_string));
    Ok(r)
}

fn aut_name(aut: PowerAut, a0: &AutGroup) -> String {
    let labels = PowerDomain { base: a0 }.labels(&aut);
    if labels.is_empty() {
        "id".to_string()
    } else {
        labels.join(" . ")
    }
}

fn ucompact(ctx: &Ctx, ga: &GroupArgs, path: &Path, element_name: &str) -> Result<Report> {
    let (g, a0) = load(ctx, ga)?;
    let x = element(&g, element_name)?;
    let sys = PowerSystem::parse(&read(path)?, Some(2), &a0, 0).map_err(|e| e.in_file(path.display().to_string()))?;
    let mut r = ctx.report("ucompact-witness");
    group_fields(&mut r, &g, &a0);
    r.field("subsystem_equations", sys.len() as u64);
    if ctx.dry_run {
        return Ok(r);
    }
    let w = u_compactness_witness(&sys, x, &g, &a0)?;
    r.field("n", w.n)
        .field("a", w.a.display(&g).to_string())
        .field("b", w.b.display(&g).to_string())
        .field("solves_subsystem", true)
        .field("a_nontrivial", !w.a.is_identity())
        .field("b_nontrivial", !w.b.is_identity());
    r.field("violated_by", w.violated_by.map_or(Value::Null, |p| aut_name(p, &a0).into()));
    Ok(r)
}

fn qcompact(ctx: &Ctx, ga: &GroupArgs, system: &Path, target: &Path, support: i64, window: &str) -> Result<Report> {
    let (g, a0) = load(ctx, ga)?;
    let range = parse_range(window)?;
    let s = PowerSystem::parse(&read(system)?, None, &a0, range.1 - range.0)
        .map_err(|e| e.in_file(system.display().to_string()))?;
    let w = PowerSystem::parse(&read(target)?, Some(s.arity), &a0, 0).map_err(|e| e.in_file(target.display().to_string()))?;
    let mut r = ctx.report("qcompact-test");
    group_fields(&mut r, &g, &a0);
    r.field("system_equations", s.len() as u64)
        .field("window", format!("{}..{}", range.0, range.1))
        .field("support", support);
    if ctx.dry_run {
        return Ok(r);
    }
    let q = q_compactness_instance(&s, &w, range, support, &g, &a0, ctx.caps(), ctx.config.seed)?;
    let c: Vec<String> = q.c.iter().map(|(i, j)| format!("({i},{j})")).collect();
    r.field("c", c.join(" "))
        .field("margin", q.margin.map_or(Value::Null, Value::from))
        .field("translated_equations", q.translated_equations as u64)
        .field("z_subsystem_equations", q.z_subsystem.equations.len() as u64)
        .field("s_prime_size", q.s_prime.len() as u64)
        .field("audits_hold", q.audits.iter().all(|&x| x))
        .field(
            "mode",
            match q.mode {
                CheckMode::Exhaustive => "exhaustive".to_string(),
                CheckMode::Sampled(n) => format!("sampled {n}"),
            },
        )
        .field("points_checked", q.points_checked)
        .field("inclusion_holds", q.inclusion_holds());
    r.field(
        "counterexample",
        q.counterexample.as_ref().map_or(Value::Null, |p| {
            p.iter().map(|h| h.display(&g).to_string()).collect::<Vec<_>>().join(" ; ").into()
        }),
    );
    r.listing(
        "s_prime",
        q.s_prime.iter().map(|&k| {
            let prov = s.equations[k].provenance.clone().unwrap_or_default();
            format!("{} = 1  # {prov}", s.equations[k].lhs.display(&g))
        }),
    );
    Ok(r)
}

fn f2_check(ctx: &Ctx, max_len: usize, bound: usize) -> Result<Report> {
    let mut r = ctx.report("f2-check");
    r.field("max_len", max_len as u64).field("bound", bound as u64);
    if ctx.dry_run {
        if max_len > bound {
            check_ed_condition_bounded(max_len, bound)?;
        }
        return Ok(r);
    }
    let c = check_ed_condition_bounded(max_len, bound)?;
    r.field("words", c.words as u64)
        .field("pairs", c.pairs)
        .field("commuting_pairs", c.commuting_pairs)
        .field("counterexamples", c.counterexamples.len() as u64);
    r.listing("counterexamples", c.counterexamples.iter().map(|(u, v)| format!("{u} | {v}")));
    Ok(r)
}

fn twisted(ctx: &Ctx, ga: &GroupArgs, phi: &str, u: &str, v: &str) -> Result<Report> {
    let (g, a) = load(ctx, ga)?;
    let k = a
        .resolve(phi)
        .ok_or_else(|| Error::validation("automorphism", format!("unknown automorphism label `{phi}`")))?;
    let (u, v) = (element(&g, u)?, element(&g, v)?);
    let mut r = ctx.report("twisted");
    group_fields(&mut r, &g, &a);
    r.field("phi", a.label(k)).field("u", g.element_name(u)).field("v", g.element_name(v));
    if ctx.dry_run {
        return Ok(r);
    }
    let sols = twisted_conjugacy_solve(a.member(k), u, v, &g);
    r.field("cardinality", sols.len() as u64);
    r.listing("solutions", sols.iter().map(|&x| g.element_name(x).to_string()));
    Ok(r)
}

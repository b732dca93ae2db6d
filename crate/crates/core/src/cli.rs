//! The `asymcover` command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure,
//! 3 budget exceeded (a bracket was printed instead of a value).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bounds::{best_bounds, BoundRecord, Budget};
use crate::codefile;
use crate::constructions::{
    diagonal_code, general_upper_code, greedy_code, inductive_power2, random_code_nu,
};
use crate::cube::{covering_radius, covers, level_profile, uncovered, Code};
use crate::error::{Error, Result};
use crate::exact::{exact_kplus, ExactLimits, ExactStatus};
use crate::ip;
use crate::linear::{a_code, min_linear_dim};
use crate::table::{build_table, render, table_cells, TableSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable naming the bounds cache file.
pub const CACHE_ENV: &str = "ASYMCOVER_CACHE";

const DEFAULT_EXACT_SECONDS: f64 = 600.0;

#[derive(Parser, Debug)]
#[command(name = "asymcover", version, about = "Asymmetric binary covering codes")]
pub struct Cli {
    /// Seed for randomized constructions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Wall-clock limit in seconds for exhaustive search.
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    /// Node limit for exhaustive search and the integer programs.
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Bounds cache file.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Best bracket for K+(n, R) from the selected sources.
    Bound(BoundArgs),
    /// Build a covering code and write it as JSON.
    Construct(ConstructArgs),
    /// Check a code file: covering, radius, level profile.
    Verify(VerifyArgs),
    /// Render the bound table.
    Table(TableArgs),
    /// Exact K+(n, R) by exhaustive search (n <= 7).
    Exact(ExactArgs),
    /// Minimum dimension of linear codes.
    Linear(LinearArgs),
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    /// Use the covering integer programs.
    #[arg(long)]
    ip: bool,
    /// Use greedy covers.
    #[arg(long)]
    greedy: bool,
    /// Use exhaustive search on small cells.
    #[arg(long)]
    exact: bool,
    /// Seeds of the randomized construction per cell.
    #[arg(long, default_value_t = 0)]
    nu_trials: u32,
    /// Moves per local-search attempt for small codes; 0 disables it.
    #[arg(long, default_value_t = 0)]
    local_steps: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Diagonal,
    Greedy,
    Random,
    Power2,
    General,
    Linear,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    coradius: Option<u32>,
    /// Exponent for the power-of-two construction (n = 2^m).
    #[arg(long)]
    m: Option<u32>,
    /// Patched-code trials per step of the power-of-two construction.
    #[arg(long, default_value_t = 4)]
    trials: u32,
    /// Output file; the code goes to standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    file: PathBuf,
    /// Radius to check instead of the one stored in the file.
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    #[arg(long, default_value_t = 13)]
    n_max: u32,
    #[arg(long, default_value_t = 1)]
    r_min: u32,
    #[arg(long, default_value_t = 11)]
    r_max: u32,
    /// Closed-form bounds only.
    #[arg(long)]
    analytic: bool,
    #[arg(long)]
    no_ip: bool,
    #[arg(long)]
    no_exact: bool,
    #[arg(long)]
    no_greedy: bool,
    #[arg(long, default_value_t = 8)]
    nu_trials: u32,
    /// Moves per local-search attempt for small codes; 0 disables it.
    #[arg(long, default_value_t = 100_000)]
    local_steps: u64,
    /// Largest n given to exhaustive search.
    #[arg(long, default_value_t = 6)]
    exact_max_n: u32,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    /// Write the best code found to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LinearArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    r: u32,
    /// Also search all subspaces (n <= 6).
    #[arg(long)]
    exhaustive: bool,
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn exact_limits(&self) -> Result<ExactLimits> {
        let secs = self.cli.time_limit.unwrap_or(DEFAULT_EXACT_SECONDS);
        if !(secs.is_finite() && secs > 0.0) {
            return Err(Error::InvalidArgument(format!("bad time limit {secs}")));
        }
        Ok(ExactLimits {
            time_limit: Some(Duration::from_secs_f64(secs)),
            node_limit: self.cli.node_limit,
        })
    }

    fn budget(&self) -> Result<Budget> {
        Ok(Budget {
            ip_node_limit: self.cli.node_limit.unwrap_or(ip::DEFAULT_NODE_LIMIT),
            exact_limits: self.exact_limits()?,
            seed: self.cli.seed,
            ..Budget::analytic()
        })
    }

    fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}")?;
        Ok(())
    }

    fn json(&mut self, v: &serde_json::Value) -> Result<()> {
        let text = serde_json::to_string_pretty(v)?;
        self.line(&text)
    }
}

fn bound_text(rec: &BoundRecord) -> String {
    if rec.r >= rec.n {
        "1".into()
    } else {
        format!("{} [{}/{}]", rec.value_text(), rec.lower_tag, rec.upper_tag)
    }
}

fn cmd_bound(ctx: &mut Ctx, a: &BoundArgs) -> Result<i32> {
    if a.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let budget = Budget {
        ip: a.ip,
        greedy: a.greedy,
        exact: a.exact,
        nu_trials: a.nu_trials,
        local_steps: a.local_steps,
        ..ctx.budget()?
    };
    let rec = best_bounds(a.n, a.r, &budget)?;
    if ctx.cli.json {
        ctx.json(&serde_json::to_value(&rec)?)?;
    } else {
        ctx.line(&bound_text(&rec))?;
    }
    Ok(EXIT_OK)
}

fn need(v: Option<u32>, name: &str) -> Result<u32> {
    v.ok_or_else(|| Error::InvalidArgument(format!("--{name} is required for this method")))
}

fn cmd_construct(ctx: &mut Ctx, a: &ConstructArgs) -> Result<i32> {
    let seed = ctx.cli.seed;
    let code = match a.method {
        Method::Diagonal => diagonal_code(need(a.n, "n")?, need(a.coradius, "coradius")?)?,
        Method::General => general_upper_code(need(a.n, "n")?, need(a.coradius, "coradius")?)?,
        Method::Greedy => greedy_code(need(a.n, "n")?, need(a.r, "r")?)?,
        Method::Random => random_code_nu(need(a.n, "n")?, need(a.r, "r")?, seed)?,
        Method::Power2 => inductive_power2(need(a.m, "m")?, need(a.r, "r")?, seed, a.trials)?,
        Method::Linear => {
            let r = need(a.r, "r")?;
            let c = a_code(need(a.n, "n")?, r)?;
            c.code().clone().with_radius(r)
        }
    };
    let r = code.radius().expect("constructions record their radius");
    if !covers(&code, r)? {
        return Err(Error::Verification(format!(
            "constructed code does not cover Q_{} at radius {r}",
            code.n()
        )));
    }
    match &a.out {
        Some(path) => {
            codefile::write_json(path, &code)?;
            if ctx.cli.json {
                ctx.json(&json!({"n": code.n(), "r": r, "size": code.len(), "path": path}))?;
            } else {
                ctx.line(&format!("size {} (n={}, R={r}) written to {}", code.len(), code.n(), path.display()))?;
            }
        }
        None => {
            ctx.line(&codefile::to_json(&code))?;
            log::info!("size {}", code.len());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &mut Ctx, a: &VerifyArgs) -> Result<i32> {
    let code: Code = codefile::read(&a.file)?;
    let r = a.r.or(code.radius()).ok_or_else(|| {
        Error::InvalidArgument("the file has no radius; pass --r".into())
    })?;
    let ok = covers(&code, r)?;
    let missing = if ok { 0 } else { uncovered(&code, r)?.len() };
    let radius = if code.n() <= 26 { covering_radius(&code)? } else { None };
    let profile = level_profile(&code);
    if ctx.cli.json {
        ctx.json(&json!({
            "n": code.n(),
            "r": r,
            "covers": ok,
            "uncovered": missing,
            "radius": radius,
            "size": code.len(),
            "levels": profile.counts,
            "zeros_total": profile.zeros_total(),
            "ones_total": profile.ones_total(),
        }))?;
    } else {
        let mut s = format!("covers: {ok}");
        if !ok {
            s.push_str(&format!(", {missing} uncovered"));
        }
        let radius_text = radius.map_or_else(|| "none".to_string(), |v| v.to_string());
        s.push_str(&format!(
            ", radius: {radius_text}, size {}, zeros total {}, ones total {}",
            code.len(),
            profile.zeros_total(),
            profile.ones_total()
        ));
        ctx.line(&s)?;
        let levels: Vec<String> = profile.counts.iter().map(u64::to_string).collect();
        ctx.line(&format!("levels: {}", levels.join(" ")))?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_table(ctx: &mut Ctx, a: &TableArgs) -> Result<i32> {
    let full = !a.analytic;
    let budget = Budget {
        ip: full && !a.no_ip,
        exact: full && !a.no_exact,
        greedy: full && !a.no_greedy,
        nu_trials: if full { a.nu_trials } else { 0 },
        local_steps: if full { a.local_steps } else { 0 },
        exact_max_n: a.exact_max_n,
        ..ctx.budget()?
    };
    let spec = TableSpec {
        n_range: a.n_min..=a.n_max,
        r_range: a.r_min..=a.r_max,
        budget,
        cache_path: ctx.cli.cache.clone(),
    };
    let grid = build_table(&spec)?;
    if ctx.cli.json {
        ctx.json(&serde_json::to_value(table_cells(&spec, &grid))?)?;
    } else {
        write!(ctx.out, "{}", render(&spec, &grid))?;
    }
    Ok(EXIT_OK)
}

fn cmd_exact(ctx: &mut Ctx, a: &ExactArgs) -> Result<i32> {
    let res = exact_kplus(a.n, a.r, ctx.exact_limits()?)?;
    if let Some(path) = &a.witness {
        codefile::write_json(path, &res.witness)?;
    }
    if ctx.cli.json {
        ctx.json(&json!({
            "n": res.n,
            "r": res.r,
            "status": res.status,
            "lower": res.lower,
            "upper": res.upper,
            "nodes": res.nodes,
            "seconds": res.elapsed.as_secs_f64(),
            "witness": a.witness,
        }))?;
    } else {
        match res.status {
            ExactStatus::Exact => ctx.line(&res.upper.to_string())?,
            ExactStatus::Bracket => ctx.line(&format!("{}-{} (bracket)", res.lower, res.upper))?,
        }
        if let Some(path) = &a.witness {
            ctx.line(&format!("witness: {}", path.display()))?;
        }
    }
    Ok(match res.status {
        ExactStatus::Exact => EXIT_OK,
        ExactStatus::Bracket => EXIT_BUDGET,
    })
}

fn cmd_linear(ctx: &mut Ctx, a: &LinearArgs) -> Result<i32> {
    let (k, _) = min_linear_dim(a.n, a.r, false)?;
    let exhaustive = if a.exhaustive {
        Some(min_linear_dim(a.n, a.r, true)?.0)
    } else {
        None
    };
    let code = a_code(a.n, a.r)?;
    let radius = code.asym_covering_radius()?;
    let valid = code.dim() == k && radius.is_some_and(|v| v <= a.r);
    let agrees = exhaustive.is_none_or(|e| e == k);
    let basis: Vec<String> = code
        .basis()
        .iter()
        .map(|&w| codefile::to_bitstring(w, a.n))
        .collect();
    if ctx.cli.json {
        ctx.json(&json!({
            "n": a.n,
            "r": a.r,
            "k_plus": k,
            "exhaustive": exhaustive,
            "basis": basis,
            "radius": radius,
            "self_complementary": code.is_self_complementary(),
            "verified": valid && agrees,
        }))?;
    } else {
        match exhaustive {
            Some(e) if e == k => ctx.line(&format!("k+ = {k} (exhaustive agrees)"))?,
            Some(e) => ctx.line(&format!("k+ = {k} (exhaustive found {e})"))?,
            None => ctx.line(&format!("k+ = {k}"))?,
        }
        ctx.line(&format!("basis: {}", basis.join(" ")))?;
        let radius_text = radius.map_or_else(|| "none".to_string(), |v| v.to_string());
        ctx.line(&format!(
            "radius: {radius_text}, self-complementary: {}",
            code.is_self_complementary()
        ))?;
    }
    Ok(if valid && agrees { EXIT_OK } else { EXIT_VERIFY })
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Verification(_) => EXIT_VERIFY,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Results go to `out`, diagnostics to standard error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return EXIT_USAGE;
        }
        // Only the first call configures the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let mut ctx = Ctx { cli: &cli, out };
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound(&mut ctx, a),
        Command::Construct(a) => cmd_construct(&mut ctx, a),
        Command::Verify(a) => cmd_verify(&mut ctx, a),
        Command::Table(a) => cmd_table(&mut ctx, a),
        Command::Exact(a) => cmd_exact(&mut ctx, a),
        Command::Linear(a) => cmd_linear(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

//! Command-line front end. `run` returns the exit code and the certificate
//! bytes so callers (the binary, the determinism check) share one path.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::ainf::{
    ainf_operad_table, build_ainf, build_ainf_with, certify_operad, check_stasheff, AInfStructure,
    SignRule,
};
use crate::bm::{
    assignment_from_json, build_bm_with, certify_algebra, check_dg_point, induced_ainf_structure,
    linear_part, BmSign, Cdga,
};
use crate::error::{Error, Result};
use crate::graded::ChainComplex;
use crate::moduli::{
    assoc_ideal, budget_from_env, count_points_by_ideal, enumerate_points, gl_orbits, unital_ideal,
};
use crate::operad::{build_ass, build_uass, check_operad_axioms, end_operad, OperadTable};
use crate::random::{random_complex, rng};
use crate::scalar::Field;
use crate::suite;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "operadic",
    version,
    about = "Exact checks for operads, A∞ structures and their moduli"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the certificate here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Enumeration budget; overrides OPERADIC_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Add wall-clock timings (makes the certificate run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operad axiom checks.
    #[command(subcommand)]
    Operad(OperadCmd),
    /// The A∞ operad and A∞ structures.
    #[command(subcommand)]
    Ainf(AinfCmd),
    /// Structure constants of associative algebras over F_q.
    #[command(subcommand)]
    Moduli(ModuliCmd),
    /// The algebras B_m.
    #[command(subcommand)]
    Bm(BmCmd),
    /// Run the acceptance criteria.
    Suite {
        /// Run only these criteria (1-based ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum OperadCmd {
    Check(OperadCheck),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
struct OperadSource {
    /// Operad table in JSON.
    #[arg(long)]
    operad: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// End(M) for the chain complex in this JSON file.
    #[arg(long)]
    complex: Option<PathBuf>,
    /// End(M) for a random complex drawn from --seed.
    #[arg(long)]
    random_end: bool,
}

#[derive(Args, Debug)]
struct OperadCheck {
    #[command(flatten)]
    source: OperadSource,
    #[arg(long, default_value_t = 4)]
    max_arity: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Builtin {
    Ass,
    Uass,
    Ainf,
}

#[derive(Subcommand, Debug)]
enum AinfCmd {
    /// Verify d∘d = 0 on every generator μ_n.
    Certify {
        #[arg(long, default_value_t = 7)]
        max_arity: usize,
        #[arg(long, value_enum, default_value_t = RuleArg::Standard)]
        sign_rule: RuleArg,
    },
    /// Check the Stasheff identities of a structure file.
    Check {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long, default_value_t = 7)]
        max_arity: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Standard,
    Mutated,
}

#[derive(Subcommand, Debug)]
enum ModuliCmd {
    /// The ideal of associativity (and unit) relations.
    Ideal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        unital: bool,
    },
    /// All points over F_q.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        unital: bool,
        #[arg(long)]
        orbits: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BmCmd {
    Build {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        linear_part: bool,
        #[arg(long, value_enum, default_value_t = SignArg::Standard)]
        sign: SignArg,
    },
    /// Is an assignment of the generators a dg algebra map?
    PointCheck {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        assign: PathBuf,
        /// Also check the Stasheff identities of the induced structure.
        #[arg(long)]
        stasheff: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    Standard,
    DropQi,
}

pub struct Outcome {
    pub code: i32,
    pub certificate: Vec<u8>,
    /// Diagnostics for stderr.
    pub message: String,
}

struct Ctx {
    seed: u64,
    budget: u128,
    inputs: Vec<Vec<u8>>,
}

impl Ctx {
    fn read(&mut self, p: &Path) -> Result<Value> {
        let bytes = std::fs::read(p)?;
        let v = serde_json::from_slice(&bytes)?;
        self.inputs.push(bytes);
        Ok(v)
    }
}

/// The argv with run-local flags (`--workers`, `--out`, `--timing`) removed.
fn command_echo(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv.iter().skip(1) {
        if skip {
            skip = false;
            continue;
        }
        match a.as_str() {
            "--workers" | "--out" => skip = true,
            "--timing" => {}
            s if s.starts_with("--workers=") || s.starts_with("--out=") => {}
            _ => out.push(a.clone()),
        }
    }
    out
}

pub fn run(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                code,
                certificate: Vec::new(),
                message: e.to_string(),
            };
        }
    };
    match run_parsed(&cli, argv) {
        Ok(o) => o,
        Err(e) => Outcome {
            code: 2,
            certificate: Vec::new(),
            message: format!("error: {e}"),
        },
    }
}

fn run_parsed(cli: &Cli, argv: &[String]) -> Result<Outcome> {
    let budget = match cli.budget {
        Some(0) => return Err(Error::Invalid("--budget must be positive".into())),
        Some(b) => b,
        None => budget_from_env()?,
    };
    let mut ctx = Ctx {
        seed: cli.seed,
        budget,
        inputs: Vec::new(),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(Error::Invalid("--workers must be positive".into()));
        }
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let (ok, result) = pool.install(|| dispatch(&cli.command, &mut ctx, cli.timing))?;
    let echo = command_echo(argv);
    let mut h = Sha256::new();
    for a in &echo {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for input in &ctx.inputs {
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
    }
    let mut cert = json!({
        "tool": "operadic",
        "version": VERSION,
        "command": echo,
        "seed": cli.seed,
        "inputs_digest": hex::encode(h.finalize()),
        "ok": ok,
        "result": result,
    });
    if cli.timing {
        cert["timing"] = json!({"seconds": start.elapsed().as_secs_f64()});
    }
    let mut bytes = serde_json::to_vec_pretty(&cert)?;
    bytes.push(b'\n');
    if let Some(p) = &cli.out {
        std::fs::write(p, &bytes)?;
    }
    Ok(Outcome {
        code: if ok { 0 } else { 1 },
        certificate: bytes,
        message: if ok {
            "ok".into()
        } else {
            "violations found".into()
        },
    })
}

fn dispatch(cmd: &Command, ctx: &mut Ctx, timing: bool) -> Result<(bool, Value)> {
    match cmd {
        Command::Operad(OperadCmd::Check(c)) => operad_check(c, ctx),
        Command::Ainf(AinfCmd::Certify {
            max_arity,
            sign_rule,
        }) => {
            let rule = match sign_rule {
                RuleArg::Standard => SignRule::Standard,
                RuleArg::Mutated => SignRule::Mutated,
            };
            let cert = certify_operad(&build_ainf_with(Field::Rationals, *max_arity, rule)?)?;
            Ok((cert.ok, serde_json::to_value(&cert)?))
        }
        Command::Ainf(AinfCmd::Check {
            structure,
            max_arity,
        }) => {
            let s = AInfStructure::from_json(&ctx.read(structure)?)?;
            let report = check_stasheff(&s, *max_arity)?;
            Ok((report.ok, serde_json::to_value(&report)?))
        }
        Command::Moduli(ModuliCmd::Ideal { n, unital }) => {
            let ideal = if *unital {
                unital_ideal(*n)?
            } else {
                assoc_ideal(*n)?
            };
            let mut v = ideal.to_json();
            v["n"] = json!(n);
            v["unital"] = json!(unital);
            Ok((true, v))
        }
        Command::Moduli(ModuliCmd::Enumerate {
            n,
            q,
            unital,
            orbits,
        }) => moduli_enumerate(*n, *q, *unital, *orbits, ctx.budget),
        Command::Bm(BmCmd::Build {
            m,
            r,
            certify,
            linear_part: lp,
            sign,
        }) => {
            let sign = match sign {
                SignArg::Standard => BmSign::Standard,
                SignArg::DropQi => BmSign::DropQi,
            };
            let b = build_bm_with(*m, *r, sign)?;
            let mut v = json!({"algebra": b.to_json()});
            let mut ok = true;
            if *certify {
                let cert = certify_algebra(&b)?;
                ok &= cert.ok;
                v["certificate"] = serde_json::to_value(&cert)?;
            }
            if *lp {
                v["linear_part"] = serde_json::to_value(linear_part(&b))?;
            }
            Ok((ok, v))
        }
        Command::Bm(BmCmd::PointCheck {
            m,
            r,
            target,
            assign,
            stasheff,
        }) => {
            let b = build_bm_with(*m, *r, BmSign::Standard)?;
            let target = Cdga::from_json(&ctx.read(target)?)?;
            let a = assignment_from_json(&target, &ctx.read(assign)?)?;
            let point = check_dg_point(&b, &target, &a)?;
            let mut v = json!({"m": m, "r": r, "point": serde_json::to_value(&point)?});
            if *stasheff {
                let report = check_stasheff(&induced_ainf_structure(&b, &target, &a)?, *r)?;
                v["stasheff"] = serde_json::to_value(&report)?;
                v["verdicts_agree"] = json!(report.ok == point.ok);
            }
            Ok((point.ok, v))
        }
        Command::Suite { only } => {
            let ids: Vec<usize> = if only.is_empty() {
                (1..=suite::CRITERIA.len()).collect()
            } else {
                only.clone()
            };
            let mut rows = Vec::new();
            let mut passed = 0;
            for id in &ids {
                let r = suite::run_criterion(*id, ctx.seed)?;
                passed += usize::from(r.pass);
                rows.push(r.to_json(timing));
            }
            Ok((
                passed == ids.len(),
                json!({"criteria": rows, "passed": passed, "total": ids.len()}),
            ))
        }
    }
}

fn operad_check(c: &OperadCheck, ctx: &mut Ctx) -> Result<(bool, Value)> {
    let n = c.max_arity;
    let s = &c.source;
    let (label, op): (String, OperadTable) = if let Some(p) = &s.operad {
        ("file".into(), OperadTable::from_json(&ctx.read(p)?)?)
    } else if let Some(b) = s.builtin {
        match b {
            Builtin::Ass => ("ass".into(), build_ass(Field::Rationals, n)?),
            Builtin::Uass => ("uass".into(), build_uass(Field::Rationals, n)?),
            Builtin::Ainf => ("ainf".into(), ainf_operad_table(&build_ainf(n)?, n)?),
        }
    } else if let Some(p) = &s.complex {
        (
            "end".into(),
            end_operad(&ChainComplex::from_json(&ctx.read(p)?)?, n)?,
        )
    } else {
        let m = random_complex(Field::Rationals, 3, true, &mut rng(ctx.seed))?;
        let v = json!({"end_of_random_complex": m.to_json()});
        let op = end_operad(&m, n)?;
        let report = check_operad_axioms(&op, n)?;
        return Ok((
            report.ok,
            json!({"operad": v, "report": serde_json::to_value(&report)?}),
        ));
    };
    let n = n.min(op.max_arity());
    let dims: Vec<usize> = (0..=n).map(|k| op.component(k).dim()).collect();
    let report = check_operad_axioms(&Arc::new(op), n)?;
    Ok((
        report.ok,
        json!({"operad": label, "component_dims": dims, "report": serde_json::to_value(&report)?}),
    ))
}

fn moduli_enumerate(
    n: usize,
    q: u64,
    unital: bool,
    orbits: bool,
    budget: u128,
) -> Result<(bool, Value)> {
    let all = enumerate_points(n, q, false, budget)?;
    let unital_count = all.iter().filter(|p| p.unit.is_some()).count() as u64;
    let counts = (all.len() as u64, unital_count);
    let points: Vec<_> = all
        .iter()
        .filter(|p| !unital || p.unit.is_some())
        .cloned()
        .collect();
    let mut ok = true;
    let mut v = json!({
        "n": n,
        "q": q,
        "unital_only": unital,
        "points": points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        "counts": {"assoc": counts.0, "unital": counts.1},
    });
    // The second path costs q^n times more; skip it when over budget.
    match count_points_by_ideal(n, q, budget) {
        Ok(ideal) => {
            ok &= ideal == counts;
            v["ideal_counts"] = json!({"assoc": ideal.0, "unital": ideal.1});
            v["paths_agree"] = json!(ideal == counts);
        }
        Err(Error::Budget { .. }) => v["ideal_counts"] = Value::Null,
        Err(e) => return Err(e),
    }
    if orbits {
        let rep = gl_orbits(&points, n, q, budget)?;
        ok &= rep.orbit_stabilizer_ok && rep.stable;
        v["orbits"] = serde_json::to_value(&rep)?;
    }
    Ok((ok, v))
}

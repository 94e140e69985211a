//! `biquad`: field inspection, element arithmetic, sum-of-squares rank
//! certification, family reports, and batch scans with JSON output.
//!
//! Exit codes: 0 = success / certificate produced, 1 = usage or input
//! error, 2 = refuted, 3 = inconclusive (budget exceeded).

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use biquadratic::report;
use biquadratic::*;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_REFUTED: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Environment variable holding the default node budget.
const ENV_MAX_NODES: &str = "BIQUAD_MAX_NODES";

#[derive(Parser)]
#[command(
    name = "biquad",
    version,
    about = "Exact arithmetic and sum-of-squares certification in real biquadratic fields"
)]
struct Cli {
    /// Worker threads for data-parallel reports (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// First square-free generator p of Q(sqrt p, sqrt q).
    #[arg(long)]
    p: i64,
    /// Second square-free generator q.
    #[arg(long)]
    q: i64,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Maximum number of squares tried by iterative deepening.
    #[arg(long, default_value_t = 8)]
    max_depth: u32,
    /// Node budget for the search (default from BIQUAD_MAX_NODES or 5e7).
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<u64>,
    /// Explore root candidate branches in parallel.
    #[arg(long, default_value_t = false)]
    parallel: bool,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let env_nodes = std::env::var(ENV_MAX_NODES)
            .ok()
            .and_then(|v| v.parse().ok());
        SearchBudget {
            max_depth: self.max_depth,
            node_limit: self.max_nodes.or(env_nodes).unwrap_or(50_000_000),
            time_limit: self.time_limit.map(Duration::from_secs),
            root_parallel: self.parallel,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    F1,
    F2,
    F3,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::F1 => Family::F1,
            FamilyArg::F2 => Family::F2,
            FamilyArg::F3 => Family::F3,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Field invariants: gcd trio, basis type, integral basis, codifferent,
    /// discriminant.
    Field {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Element operations in the field.
    Elt {
        #[command(flatten)]
        field: FieldArgs,
        /// Element literal, e.g. "44 + 1*s30 + 0*s35 + 1*s42" or "[44,1,0,1]".
        #[arg(long)]
        elt: String,
        #[command(subcommand)]
        op: EltOp,
    },
    /// Exact sum-of-squares rank (iterative deepening with certificates).
    SosRank {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        elt: String,
        /// Certify rank >= MIN instead of searching for the exact rank.
        #[arg(long)]
        min: Option<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Certify rank >= MIN by exhaustive refutation.
    Certify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        elt: String,
        #[arg(long)]
        min: u32,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Family reports: per-element coordinates, norms, minimal traces,
    /// indecomposability, association identities, universal-form bounds.
    Family {
        /// f1, f2 or f3.
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Family parameter n.
        #[arg(long)]
        n: i64,
        #[command(subcommand)]
        op: FamilyOp,
    },
    /// Batch scans.
    Scan {
        #[command(subcommand)]
        op: ScanOp,
    },
}

#[derive(Subcommand)]
enum EltOp {
    /// Trace of the element.
    Trace,
    /// Norm of the element.
    Norm,
    /// Characteristic polynomial coefficients (A, B, C, D).
    Charpoly,
    /// Total-positivity test.
    TpCheck,
    /// Integral coordinates in the field's integral basis.
    IntegralCoords,
    /// Sum with a second element.
    Add {
        #[arg(long)]
        rhs: String,
    },
    /// Difference with a second element.
    Sub {
        #[arg(long)]
        rhs: String,
    },
    /// Product with a second element.
    Mul {
        #[arg(long)]
        rhs: String,
    },
    /// Image under the i-th real embedding (1..=4).
    Conjugate {
        #[arg(long)]
        i: u8,
    },
}

#[derive(Subcommand)]
enum FamilyOp {
    /// Per-element table (JSON by default, CSV with --csv).
    Report {
        /// Minimal-trace search cap.
        #[arg(long, default_value_t = 2)]
        t_max: u32,
        /// Skip the indecomposability certification column.
        #[arg(long, default_value_t = false)]
        skip_indecomposability: bool,
        /// Emit CSV instead of JSON.
        #[arg(long, default_value_t = false)]
        csv: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Verify closed-form norms against direct norms.
    Norms,
    /// Verify the association identities.
    Associations,
    /// Universal-form variable lower bounds from trace counts.
    UniversalBounds,
}

#[derive(Subcommand)]
enum ScanOp {
    /// List admissible n for a family.
    Admissible {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n_from: i64,
        #[arg(long)]
        n_to: i64,
    },
    /// Empirical Pythagoras-number lower bound from sampled sums of squares.
    Pythagoras {
        #[command(flatten)]
        field: FieldArgs,
        /// Number of random samples.
        #[arg(long, default_value_t = 8)]
        samples: u32,
        /// Include the proof witness elements in the sample.
        #[arg(long, default_value_t = false)]
        witnesses: bool,
        /// RNG seed.
        #[arg(long, default_value_t = 0xB1C0DE)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

fn emit(command: &str, field: Option<&Ring>, result: Value, started: Instant) -> Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "field": field.map(report::field_info),
        "result": result,
        "wall_time_ms": started.elapsed().as_millis() as u64,
    })
}

fn ring_for(args: &FieldArgs) -> Result<Ring, Error> {
    Ring::new(FieldSpec::new(args.p, args.q)?)
}

fn run(cli: Cli) -> Result<(Value, u8), Error> {
    let started = Instant::now();
    match cli.command {
        Command::Field { field } => {
            let ring = ring_for(&field)?;
            let payload = emit("field", Some(&ring), json!({}), started);
            Ok((payload, EXIT_OK))
        }
        Command::Elt { field, elt, op } => {
            let ring = ring_for(&field)?;
            let a = parse_element(ring.spec(), &elt)?;
            let result = match op {
                EltOp::Trace => json!({"trace": a.trace().to_string()}),
                EltOp::Norm => json!({"norm": a.norm().to_string()}),
                EltOp::Charpoly => {
                    let cp = a.char_poly();
                    json!({
                        "a": cp.a.to_string(),
                        "b": cp.b.to_string(),
                        "c": cp.c.to_string(),
                        "d": cp.d.to_string(),
                        "integral": cp.is_integral(),
                    })
                }
                EltOp::TpCheck => json!({
                    "totally_positive": a.is_totally_positive(),
                    "zero": a.is_zero(),
                }),
                EltOp::IntegralCoords => {
                    let coords = ring.to_integral(&a)?;
                    json!({
                        "integral_coords": coords.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    })
                }
                EltOp::Add { rhs } => {
                    let b = parse_element(ring.spec(), &rhs)?;
                    json!({"value": a.try_add(&b)?.to_string()})
                }
                EltOp::Sub { rhs } => {
                    let b = parse_element(ring.spec(), &rhs)?;
                    json!({"value": a.try_sub(&b)?.to_string()})
                }
                EltOp::Mul { rhs } => {
                    let b = parse_element(ring.spec(), &rhs)?;
                    json!({"value": a.try_mul(&b)?.to_string()})
                }
                EltOp::Conjugate { i } => {
                    if !(1..=4).contains(&i) {
                        return Err(Error::OutOfRange("embedding index must be 1..=4".into()));
                    }
                    json!({"value": a.conjugate(i).to_string()})
                }
            };
            Ok((emit("elt", Some(&ring), result, started), EXIT_OK))
        }
        Command::SosRank {
            field,
            elt,
            min,
            budget,
        } => {
            let ring = ring_for(&field)?;
            let a = parse_element(ring.spec(), &elt)?;
            let target = ring.to_integral(&a)?;
            let b = budget.budget();
            let outcome = match min {
                Some(m) => certify_min_rank(&ring, &target, m, &b),
                None => sos_rank(&ring, &target, &b),
            };
            rank_outcome(outcome, &ring, "sos-rank", started, &b)
        }
        Command::Certify {
            field,
            elt,
            min,
            budget,
        } => {
            let ring = ring_for(&field)?;
            let a = parse_element(ring.spec(), &elt)?;
            let target = ring.to_integral(&a)?;
            let b = budget.budget();
            let outcome = certify_min_rank(&ring, &target, min, &b);
            rank_outcome(outcome, &ring, "certify", started, &b)
        }
        Command::Family { family, n, op } => {
            let ctx = FamilyContext::new(family.into(), n)?;
            match op {
                FamilyOp::Report {
                    t_max,
                    skip_indecomposability,
                    csv,
                    budget,
                } => {
                    let rows =
                        family_report(&ctx, t_max, !skip_indecomposability, &budget.budget())?;
                    let rows: Vec<_> = rows.iter().map(report::family_row_report).collect();
                    if csv {
                        print!("{}", report::family_rows_csv(&rows));
                        return Ok((Value::Null, EXIT_OK));
                    }
                    let result = json!({
                        "family": ctx.param.family.to_string(),
                        "n": n,
                        "rows": rows,
                    });
                    Ok((
                        emit("family report", Some(&ctx.ring), result, started),
                        EXIT_OK,
                    ))
                }
                FamilyOp::Norms => {
                    let rep = verify_norm_formulas(&ctx)?;
                    let (bound, maximizer) = ctx.norm_bound();
                    let result = json!({
                        "rows": rep.rows.iter().map(|r| json!({
                            "label": r.label.to_string(),
                            "direct": r.direct.to_string(),
                            "formula": r.formula.to_string(),
                        })).collect::<Vec<_>>(),
                        "norm_bound": bound.to_string(),
                        "maximizer": maximizer.to_string(),
                        "beta_printed_reading_matches": rep.beta_printed_reading_matches,
                        "beta_corrected_reading_matches": rep.beta_corrected_reading_matches,
                    });
                    Ok((
                        emit("family norms", Some(&ctx.ring), result, started),
                        EXIT_OK,
                    ))
                }
                FamilyOp::Associations => {
                    let rep = association_identities(&ctx)?;
                    let result = json!({
                        "verified": rep.verified.iter().map(|(name, count)| json!({
                            "identity": name,
                            "t_values": count,
                        })).collect::<Vec<_>>(),
                    });
                    Ok((
                        emit("family associations", Some(&ctx.ring), result, started),
                        EXIT_OK,
                    ))
                }
                FamilyOp::UniversalBounds => {
                    let b = universal_form_bounds(&ctx)?;
                    let result = serde_json::to_value(report::universal_bounds_report(&b))
                        .expect("serializable");
                    Ok((
                        emit("family universal-bounds", Some(&ctx.ring), result, started),
                        EXIT_OK,
                    ))
                }
            }
        }
        Command::Scan { op } => match op {
            ScanOp::Admissible {
                family,
                n_from,
                n_to,
            } => {
                let fam: Family = family.into();
                let mut rows = Vec::new();
                for n in n_from..=n_to {
                    match make_family(fam, n) {
                        Ok(fp) => rows.push(json!({
                            "n": n,
                            "admissible": true,
                            "p": fp.spec.p,
                            "q": fp.spec.q,
                            "r": fp.spec.r,
                        })),
                        Err(e) => rows.push(json!({
                            "n": n,
                            "admissible": false,
                            "reason": e.to_string(),
                        })),
                    }
                }
                Ok((
                    emit("scan admissible", None, json!({ "rows": rows }), started),
                    EXIT_OK,
                ))
            }
            ScanOp::Pythagoras {
                field,
                samples,
                witnesses,
                seed,
                budget,
            } => {
                let ring = ring_for(&field)?;
                let out = pythagoras_scan(&ring, samples, witnesses, &budget.budget(), seed)?;
                let result =
                    serde_json::to_value(report::scan_report(&ring, &out)).expect("serializable");
                Ok((
                    emit("scan pythagoras", Some(&ring), result, started),
                    EXIT_OK,
                ))
            }
        },
    }
}

fn rank_outcome(
    outcome: Result<RankCertificate, Error>,
    ring: &Ring,
    command: &str,
    started: Instant,
    budget: &SearchBudget,
) -> Result<(Value, u8), Error> {
    let budget_echo = json!({
        "max_depth": budget.max_depth,
        "node_limit": budget.node_limit,
        "time_limit_s": budget.time_limit.map(|d| d.as_secs()),
    });
    match outcome {
        Ok(cert) => {
            let mut result =
                serde_json::to_value(report::rank_report(ring, &cert)).expect("serializable");
            result["budget"] = budget_echo;
            Ok((emit(command, Some(ring), result, started), EXIT_OK))
        }
        Err(Error::Refuted { witness }) => {
            let ws: Vec<String> = witness
                .iter()
                .map(|w| {
                    ring.from_integral(&IntegralElement::new(*ring.spec(), w.clone()))
                        .to_string()
                })
                .collect();
            let result = json!({
                "kind": "refuted",
                "witness": ws,
                "budget": budget_echo,
            });
            Ok((emit(command, Some(ring), result, started), EXIT_REFUTED))
        }
        Err(Error::BudgetExceeded {
            nodes,
            proven_bound,
        }) => {
            let result = json!({
                "kind": "inconclusive",
                "nodes_explored": nodes,
                "proven_bound": proven_bound,
                "budget": budget_echo,
            });
            Ok((
                emit(command, Some(ring), result, started),
                EXIT_INCONCLUSIVE,
            ))
        }
        Err(e) => Err(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }
    match run(cli) {
        Ok((Value::Null, code)) => ExitCode::from(code),
        Ok((payload, code)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).expect("valid JSON")
            );
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

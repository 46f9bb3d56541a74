//! Command-line surface. Exit codes: 0 verified, 2 refuted, 1 misuse.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{layered_upper_bound, s_formula, uniform_bound};
use crate::certify::{render_csv, render_json, render_text, report_all, CertifyConfig};
use crate::constructions::{
    product_extremal, sum_extremal, tk_matching_extremal, uniform_tight, ConstructionReport,
};
use crate::detect::{find_multicolor_sunflower, find_uniform_sunflower};
use crate::error::{Error, Result};
use crate::family::read_tuple;
use crate::graphs::verify_structure_lemma;
use crate::optimizer::{
    solve_case1, solve_case2, solve_case3, solve_def_zero, solve_global, DEFAULT_TOL,
};
use crate::partition::{
    exact_pq_expectation, expected_edge_count_uniform, mc_pq_expectation_threaded, ratio_string,
    UniformPartitionSpec,
};
use crate::search::{
    exhaustive_max_sum, exhaustive_max_sum_uniform, SearchOptions, DEFAULT_BUDGET,
};

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_MISUSE: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sunflower",
    version,
    about = "Certify bounds on multicolor sunflower-free set families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for randomized steps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; reported values do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub threads: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionKind {
    Sum,
    Product,
    Matching,
    Uniform,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form maximum total size and its layer-by-layer assembly.
    SumBound {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Exhaustive maximum total size (k = 3).
    SearchSum {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Also cap every layer by the uniform bound.
        #[arg(long)]
        layer_bounds: bool,
    },
    /// Bound for uniform families; `--search` also runs the exhaustive oracle.
    UniformBound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = 0)]
        c: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Look for a multicolor sunflower in a family file.
    Detect {
        #[arg(long)]
        families: PathBuf,
        /// Petal count for the uniform variant (sets from t distinct families).
        #[arg(long, requires = "c")]
        t: Option<usize>,
        /// Core size for the uniform variant.
        #[arg(long, requires = "t")]
        c: Option<u32>,
    },
    /// Build an extremal construction and certify it.
    Construct {
        #[arg(long, value_enum, default_value_t = ConstructionKind::Sum)]
        kind: ConstructionKind,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Set size (uniform, matching).
        #[arg(long)]
        s: Option<u32>,
        /// Petal count (matching).
        #[arg(long)]
        m: Option<u32>,
        /// Write the tuple as a family file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the 3x3 structure lemma over all low-degree graphs.
    GraphsVerify,
    /// Exact and Monte Carlo expectations under random partitions.
    Expectation {
        #[arg(long)]
        families: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Uniform set size; switches to the expected petal-graph edge count.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long, default_value_t = 0)]
        c: u32,
    },
    /// Solve the product program by case analysis and direct search.
    Optimize {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run the full acceptance suite.
    Report {
        /// Random triples in the expectation check.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Rendered output plus the verdict.
struct Output {
    text: String,
    json: Value,
    verified: bool,
}

fn exit_for(err: &Error) -> i32 {
    match err {
        Error::Inconsistent(_) => EXIT_REFUTED,
        _ => EXIT_MISUSE,
    }
}

/// Runs a parsed command, writing the report to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let format = if cli.common.json {
        Format::Json
    } else if cli.common.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let result = if let Command::Report { samples } = cli.command {
        report(&cli.common, samples, format)
    } else {
        dispatch(&cli.command, &cli.common).and_then(|o| {
            let body = match format {
                Format::Text => o.text.clone(),
                Format::Json => {
                    format!("{}\n", serde_json::to_string_pretty(&o.json).expect("json"))
                }
                Format::Csv => json_to_csv(&o.json)?,
            };
            Ok((body, o.verified))
        })
    };
    match result {
        Ok((body, verified)) => {
            let _ = out.write_all(body.as_bytes());
            if verified {
                EXIT_VERIFIED
            } else {
                EXIT_REFUTED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}

/// Parses `args` (program name first) and runs.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MISUSE
            } else {
                EXIT_VERIFIED
            };
            if e.use_stderr() {
                let _ = write!(err, "{e}");
            } else {
                let _ = write!(out, "{e}");
            }
            code
        }
    }
}

fn report(common: &Common, samples: usize, format: Format) -> Result<(String, bool)> {
    let cfg = CertifyConfig {
        seed: common.seed.unwrap_or(CertifyConfig::default().seed),
        threads: common.threads as usize,
        random_triples: samples,
        ..Default::default()
    };
    let rows = report_all(&cfg);
    let ok = rows.iter().all(|r| r.passed());
    let body = match format {
        Format::Text => render_text(&rows),
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&render_json(&rows)).expect("json")
        ),
        Format::Csv => render_csv(&rows)?,
    };
    Ok((body, ok))
}

/// Two-column `field,value` rendering of a flat JSON object.
fn json_to_csv(v: &Value) -> Result<String> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["field", "value"]).map_err(io)?;
    if let Value::Object(map) = v {
        for (k, val) in map {
            let cell = match val {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record([k.as_str(), cell.as_str()]).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn dispatch(cmd: &Command, common: &Common) -> Result<Output> {
    let threads = common.threads as usize;
    match *cmd {
        Command::SumBound { n, k } => {
            let formula = s_formula(n, k)?;
            let layered = layered_upper_bound(n, k)?;
            Ok(Output {
                text: format!("max sum for n={n} k={k}: {formula} (layered assembly {layered})\n"),
                json: json!({ "schema": 1, "n": n, "k": k, "value": formula.to_string(), "layered": layered.to_string() }),
                verified: formula == layered,
            })
        }
        Command::SearchSum {
            n,
            k,
            budget,
            layer_bounds,
        } => {
            let opts = SearchOptions {
                budget,
                threads,
                layer_bounds,
                ..Default::default()
            };
            let r = exhaustive_max_sum(n, k, &opts)?;
            let formula = s_formula(n, k).ok();
            let matches = formula.is_none_or(|f| f == r.best_total as u128);
            let mut json = r.to_json();
            json["formula"] = json!(formula.map(|f| f.to_string()));
            Ok(Output {
                text: format!(
                    "n={n} k={k}: best {} (formula {}), proven {}, {} nodes\n{}",
                    r.best_total,
                    formula.map_or("n/a".into(), |f| f.to_string()),
                    r.proven_optimal,
                    r.nodes_explored,
                    r.witness_tuple.to_file_string()
                ),
                json,
                verified: r.proven_optimal && matches,
            })
        }
        Command::UniformBound {
            n,
            s,
            c,
            t,
            k,
            search,
            budget,
        } => {
            let bound = uniform_bound(n, s, c, t, k)?;
            let mut json = json!({ "schema": 1, "n": n, "s": s, "c": c, "t": t, "k": k, "bound": ratio_string(&bound) });
            let mut text = format!(
                "uniform bound n={n} s={s} c={c} t={t} k={k}: {}\n",
                ratio_string(&bound)
            );
            let mut verified = true;
            if search {
                let opts = SearchOptions {
                    budget,
                    threads,
                    ..Default::default()
                };
                let r = exhaustive_max_sum_uniform(n, s, c, t, k, &opts)?;
                let within = num_rational::BigRational::from_integer(r.best_total.into()) <= bound;
                verified = within && r.proven_optimal;
                json["search"] = r.to_json();
                text.push_str(&format!(
                    "search: best {}, proven {}, {} nodes\n",
                    r.best_total, r.proven_optimal, r.nodes_explored
                ));
            }
            Ok(Output {
                text,
                json,
                verified,
            })
        }
        Command::Detect { ref families, t, c } => {
            let ft = read_tuple(families)?;
            let witness = match (t, c) {
                (Some(t), Some(c)) => find_uniform_sunflower(&ft, t, c)?,
                _ => find_multicolor_sunflower(&ft),
            };
            Ok(match witness {
                None => Output {
                    text: "sunflower-free\n".into(),
                    json: json!({ "schema": 1, "sunflower_free": true, "sizes": ft.sizes() }),
                    verified: true,
                },
                Some(w) => {
                    let sets: Vec<String> = w.sets.iter().map(|s| s.to_string()).collect();
                    Output {
                        text: format!(
                            "sunflower found: core {} sets {} from families {:?}\n",
                            w.core,
                            sets.join(" "),
                            w.colors.iter().map(|c| c + 1).collect::<Vec<_>>()
                        ),
                        json: json!({
                            "schema": 1,
                            "sunflower_free": false,
                            "core": w.core.to_string(),
                            "sets": sets,
                            "families": w.colors.iter().map(|c| c + 1).collect::<Vec<_>>(),
                        }),
                        verified: false,
                    }
                }
            })
        }
        Command::Construct {
            kind,
            n,
            k,
            s,
            m,
            ref out,
        } => {
            let need = |v: Option<u32>, name: &str| {
                v.ok_or_else(|| Error::Usage(format!("--{name} is required for this construction")))
            };
            let report: ConstructionReport = match kind {
                ConstructionKind::Sum => sum_extremal(need(n, "n")?, k)?,
                ConstructionKind::Product => product_extremal(need(n, "n")?, k)?,
                ConstructionKind::Matching => {
                    tk_matching_extremal(need(s, "s")?, need(m, "m")?, k)?
                }
                ConstructionKind::Uniform => uniform_tight(need(n, "n")?, need(s, "s")?, k)?,
            };
            let witness = match (&report.tuple, kind) {
                (None, _) => None,
                (Some(ft), ConstructionKind::Matching) => {
                    find_uniform_sunflower(ft, need(m, "m")? as usize, 0)?
                }
                (Some(ft), ConstructionKind::Uniform) => find_uniform_sunflower(ft, k as usize, 0)?,
                (Some(ft), _) => find_multicolor_sunflower(ft),
            };
            if let (Some(path), Some(ft)) = (out, &report.tuple) {
                ft.write_file(path)?;
            }
            let mut json = report.to_json();
            json["certified"] = json!(report.tuple.is_some() && witness.is_none());
            let sizes: Vec<String> = report.sizes.iter().map(|s| s.to_string()).collect();
            Ok(Output {
                text: format!(
                    "{} n={}: sizes [{}], total {}, product {}, {}\n",
                    report.claimed_formula,
                    report.n,
                    sizes.join(", "),
                    report.total,
                    report.product,
                    match (&report.tuple, &witness) {
                        (None, _) => "too large to materialize".to_string(),
                        (Some(_), None) => "certified sunflower-free".to_string(),
                        (Some(_), Some(w)) => format!("SUNFLOWER {:?}", w.sets),
                    }
                ),
                json,
                verified: witness.is_none(),
            })
        }
        Command::GraphsVerify => {
            let r = verify_structure_lemma();
            let counter = r.counterexample.map(|g| g.to_string());
            Ok(Output {
                text: format!(
                    "{} graphs scanned, {} with matching number <= 2, max m2+t = {}{}\n",
                    r.graphs_scanned,
                    r.qualifying,
                    r.max_stat,
                    counter
                        .as_ref()
                        .map_or(String::new(), |g| format!("\ncounterexample:\n{g}"))
                ),
                json: json!({
                    "schema": 1,
                    "graphs_scanned": r.graphs_scanned,
                    "qualifying": r.qualifying,
                    "max_stat": r.max_stat,
                    "counterexample": counter,
                }),
                verified: r.counterexample.is_none(),
            })
        }
        Command::Expectation {
            ref families,
            samples,
            s,
            c,
        } => {
            let ft = read_tuple(families)?;
            let report = match s {
                Some(s) => {
                    let spec = UniformPartitionSpec::new(ft.ground().n(), s, c, ft.k() as u32)?;
                    expected_edge_count_uniform(&ft, &spec)?
                }
                None if ft.k() == 3 => {
                    mc_pq_expectation_threaded(&ft, samples, common.seed.unwrap_or(1), threads)?
                }
                None => exact_pq_expectation(&ft)?,
            };
            let mut text = format!(
                "exact {} ~ {:.6}, bound {} (applies: {})\n",
                ratio_string(&report.exact),
                report.exact_f64(),
                ratio_string(&report.bound),
                report.bound_applies
            );
            if let Some(mc) = &report.mc {
                text.push_str(&format!(
                    "monte carlo {:.6} +/- {:.6} ({} samples, seed {})\n",
                    mc.estimate, mc.stderr, mc.samples, mc.seed
                ));
            }
            Ok(Output {
                text,
                json: report.to_json(),
                verified: !report.bound_applies || report.within_bound(),
            })
        }
        Command::Optimize { tol } => {
            let global = solve_global(tol)?;
            let cases = [
                solve_def_zero(),
                solve_case1(),
                solve_case2(),
                solve_case3(tol)?,
            ];
            let mut text = String::new();
            for c in &cases {
                text.push_str(&format!(
                    "{:<8} value {:.6} residual {:.1e} at {}\n",
                    c.case_label.as_str(),
                    c.value,
                    c.residual,
                    c.point
                ));
            }
            text.push_str(&format!(
                "maximum {:.6} ({})\n",
                global.value,
                global.case_label.as_str()
            ));
            Ok(Output {
                text,
                json: global.to_json(),
                verified: global.constraint_check,
            })
        }
        Command::Report { .. } => unreachable!("handled by run"),
    }
}

//! Command line interface. Inputs are JSON files ("-" reads stdin); output is
//! deterministic JSON on stdout (or --out). Exit codes: 0 success, 1 domain
//! error (JSON error object on stdout), 2 malformed input or usage.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::comb::{enumerate_degenerations, is_maximal_type, CombinatorialType};
use crate::degeneration;
use crate::error::Error;
use crate::grassmann;
use crate::io::*;
use crate::matrix::Matrix;
use crate::moduli::{self, Calibration};
use crate::rat::format_rat;
use crate::render;
use crate::symmetry;

#[derive(Parser)]
#[command(name = "fanmoduli", version, about = "Exact moduli computations for simplicial fans")]
struct Cli {
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TypeArg {
    /// Combinatorial type JSON
    #[arg(long = "type")]
    type_path: String,
}

#[derive(Args)]
struct CalArg {
    /// Calibration JSON
    #[arg(long = "cal")]
    cal_path: String,
}

#[derive(Args)]
struct BaseArg {
    /// Admissible base calibration JSON
    #[arg(long = "base")]
    base_path: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a combinatorial type
    Validate {
        #[arg(long = "in")]
        input: String,
    },
    /// Decide geometric admissibility of a calibration
    Admissible {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
    },
    /// Determinant sign vector over the maximal cones
    Signs {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
    },
    /// Sign inequalities of the chart component of an admissible base point
    Inequalities {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        b: BaseArg,
    },
    /// Automorphism group of the cone family
    Autgroup {
        #[arg(long = "in")]
        input: String,
    },
    /// Orbit of a calibration under the symmetry group
    Orbit {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
    },
    /// Least orbit representative
    Canonical {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
    },
    /// Find a symmetry carrying one calibration to another
    Isomorphic {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
        /// Second calibration JSON
        #[arg(long = "other")]
        other_path: String,
    },
    /// Kernel basis of a calibration
    Gale {
        #[command(flatten)]
        c: CalArg,
    },
    /// Normalized Plucker coordinates of a kernel matrix
    Plucker {
        #[arg(long = "in")]
        input: String,
    },
    /// Normalize a kernel matrix in a chart (identity rows)
    Chart {
        #[arg(long = "in")]
        input: String,
        /// Chart row indices, e.g. 3,4
        #[arg(long, value_delimiter = ',')]
        rows: Vec<usize>,
    },
    /// Transition matrix between two charts
    Transition {
        #[arg(long = "in")]
        input: String,
        #[arg(long, value_delimiter = ',')]
        from: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        to: Vec<usize>,
    },
    /// Sign conditions cutting the compactified chart
    Closure {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        b: BaseArg,
    },
    /// Combinatorial type realized by a boundary calibration
    Degenerate {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
    },
    /// Zero-pattern family of a combinatorial type
    Zeropatterns {
        #[arg(long = "in")]
        input: String,
    },
    /// Classify a calibration in the closed chart of a base point
    Classify {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
        #[command(flatten)]
        b: BaseArg,
    },
    /// Seeded scan of the standard chart for its strata
    #[command(name = "strata-scan")]
    StrataScan {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        b: BaseArg,
        /// Chart cone (must be the standard chart 1,..,d)
        #[arg(long, value_delimiter = ',')]
        chart: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank-one projection along an opposite generator pair
    Project {
        #[command(flatten)]
        c: CalArg,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
    },
    /// Render rays and surviving 2-cones as SVG
    Render {
        #[command(flatten)]
        t: TypeArg,
        #[command(flatten)]
        c: CalArg,
    },
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, Error> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn load_type(path: &str) -> Result<CombinatorialType, Error> {
    type_from_json(read_json(path)?)
}

fn load_cal(path: &str) -> Result<Calibration, Error> {
    calibration_from_json(read_json(path)?)
}

fn load_matrix(path: &str) -> Result<Matrix, Error> {
    matrix_from_json(&read_json(path)?)
}

fn emit(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<String>, value: &impl Serialize) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
    text.push('\n');
    emit(out, &text)
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    let out = cli.out;
    match cli.command {
        Command::Validate { input } => {
            let raw: TypeJson = read_json(&input)?;
            // build without the validating constructor so that the report is
            // produced instead of an error
            let mut cones: BTreeSet<_> = raw
                .cones
                .into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c.dedup();
                    c
                })
                .collect();
            cones.insert(vec![]);
            let t = CombinatorialType {
                d: raw.d,
                n: raw.n,
                cones,
                virtual_set: raw.virtual_set.into_iter().collect(),
            };
            match t.validate() {
                Ok(()) => {
                    emit_json(
                        &out,
                        &json!({"ok": true, "maximal": is_maximal_type(&t),
                                "degenerations": enumerate_degenerations(&t).len()}),
                    )?;
                    Ok(0)
                }
                Err(Error::Validation { axiom, witness }) => {
                    emit_json(&out, &json!({"ok": false, "axiom": axiom, "witness": witness}))?;
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Admissible { t, c } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            let ok = moduli::is_admissible(&t, &h)?;
            emit_json(&out, &json!({ "admissible": ok }))?;
            Ok(0)
        }
        Command::Signs { t, c } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            let s = moduli::det_signs(&t, &h)?;
            emit_json(&out, &json!({"signs": sign_vector_to_json(t.n, &s)}))?;
            Ok(0)
        }
        Command::Inequalities { t, b } => {
            let t = load_type(&t.type_path)?;
            let h0 = load_cal(&b.base_path)?;
            let ineqs: Vec<InequalityJson> = moduli::component_inequalities(&t, &h0)?
                .into_iter()
                .map(|(cone, sign)| InequalityJson { cone, sign })
                .collect();
            emit_json(&out, &ineqs)?;
            Ok(0)
        }
        Command::Autgroup { input } => {
            let t = load_type(&input)?;
            let elems: Vec<GroupElementJson> = crate::comb::automorphism_group(&t)
                .iter()
                .map(|rp| {
                    group_element_to_json(&symmetry::GroupElement::from_ray_permutation(&t, rp))
                })
                .collect();
            emit_json(&out, &json!({"order": elems.len(), "elements": elems}))?;
            Ok(0)
        }
        Command::Orbit { t, c } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            let orbit: Vec<CalibrationJson> = symmetry::orbit(&t, &h)?
                .iter()
                .map(calibration_to_json)
                .collect();
            emit_json(&out, &json!({"size": orbit.len(), "elements": orbit}))?;
            Ok(0)
        }
        Command::Canonical { t, c } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            emit_json(&out, &calibration_to_json(&symmetry::canonical_form(&t, &h)?))?;
            Ok(0)
        }
        Command::Isomorphic { t, c, other_path } => {
            let t = load_type(&t.type_path)?;
            let h1 = load_cal(&c.cal_path)?;
            let h2 = load_cal(&other_path)?;
            match symmetry::isomorphic(&t, &h1, &h2)? {
                Some(g) => emit_json(
                    &out,
                    &json!({"isomorphic": true, "witness": group_element_to_json(&g)}),
                )?,
                None => emit_json(&out, &json!({"isomorphic": false, "witness": null}))?,
            }
            Ok(0)
        }
        Command::Gale { c } => {
            let h = load_cal(&c.cal_path)?;
            emit_json(&out, &matrix_to_json(&grassmann::gale(&h)))?;
            Ok(0)
        }
        Command::Plucker { input } => {
            let k = load_matrix(&input)?;
            emit_json(&out, &plucker_to_json(&grassmann::plucker(&k)?))?;
            Ok(0)
        }
        Command::Chart { input, rows } => {
            let k = load_matrix(&input)?;
            let ck = grassmann::chart_normalize(&k, &rows)?;
            emit_json(&out, &charted_kernel_to_json(&ck))?;
            Ok(0)
        }
        Command::Transition { input, from, to } => {
            let k = load_matrix(&input)?;
            emit_json(&out, &matrix_to_json(&grassmann::transition(&k, &from, &to)?))?;
            Ok(0)
        }
        Command::Closure { t, b } => {
            let t = load_type(&t.type_path)?;
            let h0 = load_cal(&b.base_path)?;
            let conds: Vec<ClosureConditionJson> = grassmann::closure_conditions(&t, &h0)?
                .iter()
                .map(closure_condition_to_json)
                .collect();
            emit_json(&out, &conds)?;
            Ok(0)
        }
        Command::Degenerate { t, c } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            emit_json(
                &out,
                &type_to_json(&degeneration::degenerate_type(&t, &h)?),
            )?;
            Ok(0)
        }
        Command::Zeropatterns { input } => {
            let t = load_type(&input)?;
            emit_json(&out, &zero_patterns_to_json(&degeneration::zero_patterns(&t)))?;
            Ok(0)
        }
        Command::Classify { t, c, b } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            let h0 = load_cal(&b.base_path)?;
            let s = degeneration::classify(&t, &h, &h0)?;
            emit_json(&out, &stratum_to_json(t.n, &s))?;
            Ok(0)
        }
        Command::StrataScan {
            t,
            b,
            chart,
            samples,
            seed,
        } => {
            let t = load_type(&t.type_path)?;
            let h0 = load_cal(&b.base_path)?;
            let chart = chart.unwrap_or_else(|| (1..=t.d).collect());
            let strata = degeneration::strata_scan(&t, &h0, &chart, samples, seed)?;
            let list: Vec<StratumJson> =
                strata.iter().map(|s| stratum_to_json(t.n, s)).collect();
            emit_json(&out, &json!({"count": list.len(), "strata": list}))?;
            Ok(0)
        }
        Command::Project { c, i, j } => {
            let h = load_cal(&c.cal_path)?;
            let (alpha, row) = degeneration::projected_calibration(&h, i, j)?;
            let row: Vec<String> = row.iter().map(format_rat).collect();
            emit_json(&out, &json!({"alpha": format_rat(&alpha), "row": row}))?;
            Ok(0)
        }
        Command::Render { t, c } => {
            let t = load_type(&t.type_path)?;
            let h = load_cal(&c.cal_path)?;
            emit(&out, &render::svg(&t, &h)?)?;
            Ok(0)
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successful exits
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e @ Error::Parse(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({"error": e.to_string()})).unwrap()
            );
            1
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use k3lat::isom::{lattice_aut_group, multiplicity, Budget, MultiplicityReport};
use k3lat::roots::overlattice::glue_to_strings;
use k3lat::roots::{fiber_to_root, mordell_weil, overlattice_from_glue, parse_glue_list, root_sublattice, short_vectors};
use k3lat::tables::{self, TableId, VerifyOptions};
use k3lat::{discriminant_form, invariant_triple, parse_lattice_expr, Error, GramLattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

/// Even lattices, discriminant forms and elliptic fibration frames of K3
/// surfaces with 2-elementary Néron–Severi lattice.
#[derive(Debug, Parser)]
#[command(name = "k3lat", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Wall-clock budget in seconds per computation; 0 means unlimited.
    #[arg(long, default_value_t = 60.0, global = true)]
    budget: f64,
    /// Node limit per search.
    #[arg(long, global = true)]
    nodes: Option<u64>,
    /// Worker threads for verification rows; 0 uses all cores.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank, signature, determinant and (rho, l, delta).
    Invariants { expr: String },
    /// Discriminant form (D, q, b).
    Disc { expr: String },
    /// Generators and order of O(L) for a definite lattice.
    Aut { expr: String },
    /// Root type and simple roots of a negative definite lattice.
    Roots { expr: String },
    /// K / K^root.
    Mw { expr: String },
    /// Overlattice from half-integral glue vectors.
    Overlattice {
        expr: String,
        /// Glue vectors, `;`-separated, coordinates `,`-separated.
        #[arg(long)]
        glue: String,
    },
    /// |A|, |B| and |A|/|B| for a negative definite lattice.
    Multiplicity { expr: String },
    /// Root lattice of a reducible Kodaira fiber.
    Fiber { kodaira: String },
    /// Checks the table fixtures.
    Verify {
        /// Tables to check, e.g. `1..4,nofib,nikulin,figure`.
        #[arg(long, default_value = "1..8,nofib,nikulin,figure")]
        tables: String,
        /// Also attempt frames tagged long-running.
        #[arg(long)]
        all: bool,
        /// Skip multiplicity computations.
        #[arg(long)]
        no_multiplicities: bool,
    },
    /// Scatter data of all 2-elementary rows.
    Figure,
}

enum Failure {
    Verification,
    Err(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Err(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Syntax { .. } | Error::GlueIncompatible(_) | Error::GlueRedundant(_) => 2,
        Error::Budget(_) => 3,
        Error::Internal(_) => 4,
    }
}

fn budget(cli: &Cli) -> Result<Budget, Error> {
    if !cli.budget.is_finite() || cli.budget < 0.0 {
        return Err(Error::Input("--budget must be a nonnegative number of seconds".into()));
    }
    let mut b = if cli.budget == 0.0 {
        Budget::unlimited()
    } else {
        Budget::seconds(cli.budget)
    };
    if let Some(n) = cli.nodes {
        b = b.with_nodes(n);
    }
    Ok(b)
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "--".into(),
        other => other.to_string(),
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Renders a flat JSON object in the selected format.
fn render(format: Format, v: &Value) -> String {
    match (format, v) {
        (Format::Json, _) => format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
        (Format::Table, Value::Object(map)) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            map.iter().map(|(k, x)| format!("{k:<width$}  {}\n", scalar(x))).collect()
        }
        (Format::Csv, Value::Object(map)) => {
            let keys: Vec<String> = map.keys().map(|k| csv_cell(k)).collect();
            let vals: Vec<String> = map.values().map(|x| csv_cell(&scalar(x))).collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
        (_, other) => format!("{}\n", scalar(other)),
    }
}

fn gram_json(l: &GramLattice) -> Value {
    l.to_json()
}

fn invariants(l: &GramLattice) -> Result<Value, Error> {
    let f = discriminant_form(l)?;
    let s = l.signature();
    let triple = if f.is_two_elementary() {
        let t = invariant_triple(l)?;
        json!({"rho": t.rho, "length": t.length, "delta": t.delta})
    } else {
        Value::Null
    };
    Ok(json!({
        "rank": l.rank(),
        "signature": [s.n_plus, s.n_minus, s.n_zero],
        "determinant": l.determinant().to_string(),
        "even": l.is_even(),
        "discriminant_group": f.invariant_factors(),
        "two_elementary": f.is_two_elementary(),
        "triple": triple,
    }))
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let b = budget(cli)?;
    let value = match &cli.command {
        Command::Invariants { expr } => invariants(&parse_lattice_expr(expr)?)?,
        Command::Disc { expr } => {
            let l = parse_lattice_expr(expr)?;
            discriminant_form(&l)?.to_json(Some(l.rank()))
        }
        Command::Aut { expr } => {
            let l = parse_lattice_expr(expr)?;
            let (gens, order) = lattice_aut_group(&l, &b)?;
            json!({
                "order": order.to_string(),
                "generators": gens.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            })
        }
        Command::Roots { expr } => {
            let l = parse_lattice_expr(expr)?;
            let d = root_sublattice(&l)?;
            let count = if l.rank() == 0 {
                0
            } else {
                let sign = if l.is_negative_definite() { -2 } else { 2 };
                2 * short_vectors(&l, sign)?.len()
            };
            json!({
                "root_type": d.root_type.to_string(),
                "root_count": count,
                "simple_roots": d.root_basis,
            })
        }
        Command::Mw { expr } => {
            let w = mordell_weil(&parse_lattice_expr(expr)?)?;
            json!({"free_rank": w.free_rank, "torsion": w.torsion, "group": w.to_string()})
        }
        Command::Overlattice { expr, glue } => {
            let l = parse_lattice_expr(expr)?;
            let vectors = parse_glue_list(glue)?;
            let o = overlattice_from_glue(&l, &vectors)?;
            let det = o.lattice.determinant();
            json!({
                "gram": gram_json(&o.lattice),
                "determinant": det.to_string(),
                "index": o.index.to_string(),
                "even": o.lattice.is_even(),
                "glue": vectors.iter().map(glue_to_strings).collect::<Vec<_>>(),
                "basis": o.basis.iter().map(glue_to_strings).collect::<Vec<_>>(),
            })
        }
        Command::Multiplicity { expr } => {
            let l = parse_lattice_expr(expr)?;
            match multiplicity(&l, &b) {
                Ok(r) => r.to_json(),
                Err(e @ Error::Budget(_)) => {
                    out.push_str(&render(cli.format, &MultiplicityReport::budget_exceeded_json()));
                    return Err(e.into());
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Fiber { kodaira } => {
            let r = fiber_to_root(kodaira)?;
            json!({
                "symbol": kodaira,
                "root_lattice": r.map(|(f, n)| format!("{f}{n}")),
            })
        }
        Command::Verify {
            tables: sel,
            all,
            no_multiplicities,
        } => {
            let selection = TableId::parse_selection(sel)?;
            let opts = VerifyOptions {
                budget: b,
                include_long_running: *all,
                jobs: cli.jobs,
            };
            let report = tables::verify_tables(&selection, !no_multiplicities, &opts);
            out.push_str(&match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&report.to_json()).expect("serializable")),
                Format::Table => report.to_table(),
                Format::Csv => report.to_csv(),
            });
            return if report.passed() { Ok(()) } else { Err(Failure::Verification) };
        }
        Command::Figure => {
            let points = tables::figure_data();
            out.push_str(&match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&points).expect("serializable")),
                _ => tables::figure_csv(&points),
            });
            return Ok(());
        }
    };
    out.push_str(&render(cli.format, &value));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let _ = std::io::stdout().write_all(out.as_bytes());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Err(e)) => {
            eprintln!("k3lat: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subspace_core::chow::{chow_height, chow_of_hypersurface, chow_of_linear, expand_skew, psigma_count_report};
use subspace_core::constants::{assemble_constants, ConstantInputs};
use subspace_core::filtration::{build_filtration, exponent_sum};
use subspace_core::graded_ideal::{hilbert_function, quotient_monomial_basis, IdealGenerators};
use subspace_core::harness::{emit_report, hilbert_table_for, load_scenario, position_cap, run_check, Format};
use subspace_core::hilbert_bounds::{scan_ratio, threshold_a_eps};
use subspace_core::serialize::{parse_rational, rational_to_string};
use subspace_core::{Error, HomogeneousPoly, ProjectivePoint};

#[derive(Parser)]
#[command(name = "subspace", version, about = "Effective subspace inequality toolkit over Q(t)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: OutFormat,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario end to end.
    Check { file: PathBuf },
    /// Hilbert function of the ideal generated by `--gens` at degree `--m`.
    Hilbert {
        #[arg(long, required = true, num_args = 1..)]
        gens: Vec<String>,
        #[arg(long)]
        m: u32,
        /// Number of variables minus one; inferred from the generators when omitted.
        #[arg(long)]
        ambient_dim: Option<usize>,
    },
    /// Degree thresholds.
    Bounds {
        #[command(subcommand)]
        which: Bounds,
    },
    /// Chow form of a hypersurface or a linear subvariety.
    Chow {
        #[arg(long)]
        input: PathBuf,
    },
    /// Evaluate every constant from a JSON input file.
    Constants {
        #[arg(long)]
        inputs: PathBuf,
    },
    /// Filtration of the degree-m quotient by powers of `--q-poly`.
    Filtration {
        #[arg(long, num_args = 0..)]
        gens: Vec<String>,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        q_poly: String,
        #[arg(long)]
        ambient_dim: Option<usize>,
    },
    /// Subgeneral position check for a scenario.
    Position {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum Bounds {
    AEps {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        eps: String,
    },
}

struct Output {
    text: String,
    json: Value,
    violation: bool,
}

fn input_err(message: impl Into<String>) -> Error {
    Error::PreconditionViolated(message.into())
}

/// Largest `Xk` index mentioned, plus one.
fn infer_vars<S: AsRef<str>>(texts: &[S]) -> usize {
    let mut best = 0;
    for t in texts {
        let bytes = t.as_ref().as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'X' {
                let digits: String = bytes[i + 1..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .map(|&c| c as char)
                    .collect();
                if let Ok(k) = digits.parse::<usize>() {
                    best = best.max(k + 1);
                }
            }
        }
    }
    best.max(1)
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        pointer: "/".into(),
        message: e.to_string(),
    })
}

fn cmd_check(file: &Path) -> Result<Output, Error> {
    let scenario = load_scenario(file)?;
    let report = run_check(&scenario)?;
    Ok(Output {
        text: emit_report(&report, Format::Text, None)?,
        json: serde_json::to_value(&report).expect("report serializes"),
        violation: report.has_violation(),
    })
}

fn cmd_hilbert(gens: &[String], m: u32, ambient: Option<usize>) -> Result<Output, Error> {
    let nv = ambient.map_or_else(|| infer_vars(gens), |a| a + 1);
    let ideal = IdealGenerators::parse(nv, gens)?;
    let h = hilbert_function(&ideal, m);
    let basis = quotient_monomial_basis(&ideal, m);
    let monos: Vec<String> = basis.monomials.iter().map(ToString::to_string).collect();
    Ok(Output {
        text: format!("H({m}) = {h}\nquotient basis: {}\n", monos.join(", ")),
        json: json!({ "m": m, "hilbert": h, "quotient_basis": monos }),
        violation: false,
    })
}

fn cmd_a_eps(n: u64, delta: u64, d: u64, eps: &str) -> Result<Output, Error> {
    let eps = parse_rational(eps).ok_or_else(|| input_err(format!("bad rational {eps:?}")))?;
    if n == 0 || delta == 0 || d == 0 || eps <= parse_rational("0").expect("zero") {
        return Err(input_err("n, delta, d and eps must be positive"));
    }
    let a = threshold_a_eps(n, delta, d, &eps);
    let width = 100;
    let failure = scan_ratio(n, delta, d, &eps, a, width);
    let scan = match failure {
        None => format!("ratio check on the degree-{delta} hypersurface table passes for m in [{a}, {}]", a + width),
        Some(m) => format!("ratio check fails at m = {m}"),
    };
    Ok(Output {
        text: format!("a_eps = {a}\n{scan}\n"),
        json: json!({ "a_eps": a, "scan_from": a, "scan_to": a + width, "first_failure": failure }),
        violation: false,
    })
}

fn cmd_chow(input: &Path) -> Result<Output, Error> {
    let v = read_json(input)?;
    let kind = v.get("kind").and_then(Value::as_str).ok_or(Error::Schema {
        pointer: "/kind".into(),
        message: "missing required field".into(),
    })?;
    let form = match kind {
        "hypersurface" => {
            let f = v.get("F").and_then(Value::as_str).ok_or(Error::Schema {
                pointer: "/F".into(),
                message: "missing required field".into(),
            })?;
            let nv = match v.get("ambient_dim").and_then(Value::as_u64) {
                Some(a) => a as usize + 1,
                None => infer_vars(&[f]),
            };
            chow_of_hypersurface(&HomogeneousPoly::parse(f, nv)?)?
        }
        "linear" => {
            let pts = v.get("points").and_then(Value::as_array).ok_or(Error::Schema {
                pointer: "/points".into(),
                message: "expected an array".into(),
            })?;
            let mut span = Vec::new();
            for (i, p) in pts.iter().enumerate() {
                let coords: Option<Vec<&str>> = p.as_array().map(|a| a.iter().filter_map(Value::as_str).collect());
                let coords = coords.ok_or(Error::Schema {
                    pointer: format!("/points/{i}"),
                    message: "expected an array of strings".into(),
                })?;
                span.push(ProjectivePoint::parse(&coords)?);
            }
            chow_of_linear(&span)?
        }
        other => {
            return Err(Error::Schema {
                pointer: "/kind".into(),
                message: format!("unknown kind {other:?}"),
            })
        }
    };
    let height = chow_height(&form);
    let exp = expand_skew(&form)?;
    let count = psigma_count_report(&exp);
    let text = format!(
        "F_X = {form}\nblock degrees: {:?}\nh(F_X) = {}\nnonzero P_sigma: {} (closed form {}, skew monomials {})\n",
        form.block_degrees(),
        rational_to_string(&height),
        count.actual,
        count.paper_bound,
        count.monomial_count
    );
    Ok(Output {
        text,
        json: json!({
            "chow_form": form.to_string(),
            "block_degrees": form.block_degrees(),
            "height": rational_to_string(&height),
            "psigma": count,
        }),
        violation: false,
    })
}

fn cmd_constants(path: &Path) -> Result<Output, Error> {
    let text = std::fs::read_to_string(path)?;
    let inputs: ConstantInputs = serde_json::from_str(&text).map_err(|e| Error::Schema {
        pointer: "/".into(),
        message: e.to_string(),
    })?;
    inputs.validate()?;
    let m = inputs.degree_m();
    let (table, exact) = hilbert_table_for(inputs.n, inputs.delta, inputs.ambient_dim, m);
    let c = assemble_constants(&inputs, &table)?;
    let rows = [
        ("a_eps", c.a_eps.to_string()),
        ("m", c.m.to_string()),
        ("d", c.d.to_string()),
        ("H(m)", c.h_m.to_string()),
        ("S(m/d-1)", c.s_sum.to_string()),
        ("b", c.b.to_string()),
        ("a", rational_to_string(&c.lemma37_a)),
        ("b1", rational_to_string(&c.b1)),
        ("b2", rational_to_string(&c.b2)),
        ("b3", rational_to_string(&c.b3)),
        ("c_eps", rational_to_string(&c.c_eps)),
        ("c'_eps", rational_to_string(&c.c_prime_eps)),
    ];
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:>9}  {v}\n"));
    }
    if !exact {
        out.push_str("note: Hilbert values are bounds, not exact\n");
    }
    Ok(Output {
        text: out,
        json: json!({ "constants": c, "hilbert_exact": exact }),
        violation: false,
    })
}

fn cmd_filtration(gens: &[String], m: u32, q_poly: &str, ambient: Option<usize>) -> Result<Output, Error> {
    let mut all: Vec<&str> = gens.iter().map(String::as_str).collect();
    all.push(q_poly);
    let nv = ambient.map_or_else(|| infer_vars(&all), |a| a + 1);
    let ideal = IdealGenerators::parse(nv, gens)?;
    let q = HomogeneousPoly::parse(q_poly, nv)?;
    let basis = build_filtration(&ideal, m, &q, q.degree())?;
    let sum = exponent_sum(&basis, &ideal);
    let entries: Vec<Value> = basis
        .entries
        .iter()
        .map(|(i, g)| json!({ "i": i, "g": g.to_string() }))
        .collect();
    let mut text = String::new();
    for (i, g) in &basis.entries {
        text.push_str(&format!("i = {i}  g = {g}\n"));
    }
    text.push_str(&format!("level dims: {:?}\n", basis.level_dims));
    text.push_str(&format!(
        "sum of i_j = {} (level sum {}), S(m/d-1) = {}, difference {}\n",
        sum.sum, sum.level_sum, sum.stated, sum.difference
    ));
    Ok(Output {
        text,
        json: json!({ "entries": entries, "level_dims": basis.level_dims, "exponent_sum": sum }),
        violation: false,
    })
}

fn cmd_position(file: &Path) -> Result<Output, Error> {
    let scenario = load_scenario(file)?;
    let report = subspace_core::graded_ideal::check_subgeneral_position(
        &scenario.ideal(),
        &scenario.polys(),
        scenario.big_n,
        position_cap(&scenario),
    )?;
    let mut text = format!(
        "N = {}: {}\n",
        report.n,
        if report.in_position { "in subgeneral position" } else { "not certified" }
    );
    for s in &report.subsets {
        text.push_str(&format!("{:?}  {:?}\n", s.indices, s.verdict));
    }
    Ok(Output {
        text,
        json: serde_json::to_value(&report).expect("report serializes"),
        violation: false,
    })
}

fn run(cli: &Cli) -> Result<Output, Error> {
    match &cli.command {
        Command::Check { file } => cmd_check(file),
        Command::Hilbert { gens, m, ambient_dim } => cmd_hilbert(gens, *m, *ambient_dim),
        Command::Bounds {
            which: Bounds::AEps { n, delta, d, eps },
        } => cmd_a_eps(*n, *delta, *d, eps),
        Command::Chow { input } => cmd_chow(input),
        Command::Constants { inputs } => cmd_constants(inputs),
        Command::Filtration {
            gens,
            m,
            q_poly,
            ambient_dim,
        } => cmd_filtration(gens, *m, q_poly, *ambient_dim),
        Command::Position { file } => cmd_position(file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        OutFormat::Text => out.text,
        OutFormat::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("json output");
            s.push('\n');
            s
        }
    };
    print!("{rendered}");
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if out.violation {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

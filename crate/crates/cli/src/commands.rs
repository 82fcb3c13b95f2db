use std::fmt::Write as _;

use levy_scale::catalog::{family_keys, parse_family, FAMILY_NAMES, MODIFIER_KEYS};
use levy_scale::fluctuation::{exit_up_probability, ruin_probability};
use levy_scale::montecarlo::{mc_vs_scale, SimConfig};
use levy_scale::oracle::{verify_family, Tolerances, DEFAULT_THETA_GRID, DEFAULT_X_GRID};
use levy_scale::{Error, Family};
use serde_json::{json, Value};

use crate::args::{Format, Invocation, SEED_VAR};
use crate::{CliError, Status};

type Out<'a> = &'a mut String;

const DEFAULT_GRID: &str = "0:2:5";
const COMMON_KEYS: [&str; 2] = ["format", "grid"];

pub(crate) fn dispatch(inv: &Invocation, env_seed: Option<&str>, out: Out) -> Result<Status, CliError> {
    match inv.command.as_str() {
        "list" => list(inv, out),
        "eval" => eval(inv, out),
        "verify" => verify(inv, out),
        "exit" => exit(inv, out),
        "ruin" => ruin(inv, out),
        "simulate" => simulate(inv, env_seed, out),
        "conjugate" => conjugate(inv, out),
        "tilt" => tilt(inv, out),
        other => Err(CliError::Usage(format!("unknown subcommand '{other}'"))),
    }
}

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn family(inv: &Invocation, extra: &[&str]) -> Result<Family, CliError> {
    let keys: Vec<&str> = COMMON_KEYS.iter().chain(extra).copied().collect();
    let params = inv.family_params(&keys)?;
    parse_family(&params).map_err(|e| match e {
        Error::Parameter(m) => CliError::Usage(m),
        e => CliError::Library(e),
    })
}

/// Writes a numeric table as CSV or as `{family, columns, rows}` JSON.
fn table(out: Out, fmt: Format, header: &[&str], rows: &[Vec<f64>], meta: Value) {
    match fmt {
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                let line: Vec<String> = r.iter().map(|&v| num(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            let mut doc = meta;
            doc["columns"] = json!(header);
            doc["rows"] = json!(rows);
            out.push_str(&serde_json::to_string_pretty(&doc).expect("table serialises"));
            out.push('\n');
        }
    }
}

fn list(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    inv.family_params(&["format"])?;
    let fams: Vec<(&str, &[&str])> =
        FAMILY_NAMES.iter().map(|&n| (n, family_keys(n).expect("listed family has keys"))).collect();
    match inv.format(Format::Csv)? {
        Format::Csv => {
            out.push_str("family,parameters\n");
            for (n, keys) in fams {
                let _ = writeln!(out, "{n},{}", keys.join(";"));
            }
        }
        Format::Json => {
            let items: Vec<Value> = fams.iter().map(|(n, k)| json!({"family": n, "parameters": k})).collect();
            let doc = json!({"families": items, "modifiers": MODIFIER_KEYS});
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("list serialises"));
        }
    }
    Ok(Status::Ok)
}

#[derive(Clone, Copy)]
enum Column {
    W,
    WPrime,
    WStar,
    WStarPrime,
    Psi,
    Phi,
}

impl Column {
    fn parse(name: &str) -> Result<Self, CliError> {
        Ok(match name {
            "W" => Column::W,
            "Wprime" => Column::WPrime,
            "Wstar" => Column::WStar,
            "Wstarprime" => Column::WStarPrime,
            "psi" => Column::Psi,
            "phi" => Column::Phi,
            _ => {
                return Err(CliError::Usage(format!(
                    "unknown column '{name}'; expected W, Wprime, Wstar, Wstarprime, psi or phi"
                )))
            }
        })
    }

    fn eval(self, f: &Family, x: f64) -> levy_scale::Result<f64> {
        match self {
            Column::W => f.w(x),
            Column::WPrime if x == 0.0 => Ok(f.w_prime_zero().value()),
            Column::WPrime => f.w_prime(x),
            Column::WStar => f.w_star(x),
            Column::WStarPrime if x == 0.0 => {
                f.w_star(x)?;
                Ok(f.kappa() + f.total_mass().value())
            }
            Column::WStarPrime => f.w_star_prime(x),
            Column::Psi => f.psi(x),
            Column::Phi => f.phi_ladder(x),
        }
    }
}

fn columns_table(f: &Family, xs: &[f64], cols: &[Column]) -> levy_scale::Result<Vec<Vec<f64>>> {
    xs.iter()
        .map(|&x| std::iter::once(Ok(x)).chain(cols.iter().map(|c| c.eval(f, x))).collect())
        .collect()
}

fn eval(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    let f = family(inv, &["columns"])?;
    let names: Vec<&str> = inv.get("columns").unwrap_or("W,Wprime").split(',').map(str::trim).collect();
    let cols: Vec<Column> = names.iter().map(|n| Column::parse(n)).collect::<Result<_, _>>()?;
    let rows = columns_table(&f, &inv.grid(DEFAULT_GRID)?, &cols)?;
    let header: Vec<&str> = std::iter::once("x").chain(names.iter().copied()).collect();
    table(out, inv.format(Format::Csv)?, &header, &rows, json!({"family": f.describe()}));
    Ok(Status::Ok)
}

fn verify(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    let keys = ["x_grid", "theta_grid", "tol_laplace", "tol_inversion", "tol_convolution", "tol_shape"];
    let f = family(inv, &keys)?;
    let xs = inv.list("x_grid")?.unwrap_or_else(|| DEFAULT_X_GRID.to_vec());
    let thetas = inv.list("theta_grid")?.unwrap_or_else(|| DEFAULT_THETA_GRID.to_vec());
    let d = Tolerances::default();
    let tol = Tolerances {
        laplace: inv.number("tol_laplace")?.unwrap_or(d.laplace),
        inversion: inv.number("tol_inversion")?.unwrap_or(d.inversion),
        convolution: inv.number("tol_convolution")?.unwrap_or(d.convolution),
        shape: inv.number("tol_shape")?.unwrap_or(d.shape),
    };
    let report = verify_family(&f, &xs, &thetas, &tol)?;
    match inv.format(Format::Json)? {
        Format::Json => {
            out.push_str(&report.to_json());
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("check,point,residual,tolerance,pass\n");
            for r in &report.records {
                let _ = writeln!(out, "{},{},{},{},{}", r.check, num(r.point), num(r.residual), num(r.tolerance), r.pass);
            }
        }
    }
    Ok(if report.all_passed { Status::Ok } else { Status::CheckFailed })
}

fn exit(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    let f = family(inv, &["a"])?;
    let a = inv.required("a")?;
    let xs = inv.grid(&format!("0:{a}:5"))?;
    let rows = xs
        .iter()
        .map(|&x| Ok(vec![x, exit_up_probability(&f, x, a)?]))
        .collect::<levy_scale::Result<Vec<_>>>()?;
    table(out, inv.format(Format::Csv)?, &["x", "exit_up"], &rows, json!({"family": f.describe(), "a": a}));
    Ok(Status::Ok)
}

fn ruin(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    let f = family(inv, &[])?;
    let rows = inv
        .grid(DEFAULT_GRID)?
        .iter()
        .map(|&x| Ok(vec![x, ruin_probability(&f, x)?]))
        .collect::<levy_scale::Result<Vec<_>>>()?;
    table(out, inv.format(Format::Csv)?, &["x", "ruin"], &rows, json!({"family": f.describe()}));
    Ok(Status::Ok)
}

fn simulate(inv: &Invocation, env_seed: Option<&str>, out: Out) -> Result<Status, CliError> {
    let f = family(inv, &["x", "a", "paths", "seed", "time_step", "horizon", "z_max"])?;
    let (x, a) = (inv.required("x")?, inv.required("a")?);
    let d = SimConfig::default();
    let n_paths = match inv.get("paths") {
        Some(raw) => raw.parse::<u64>().map_err(|_| CliError::Usage(format!("'paths' expects a count, got '{raw}'")))?,
        None => d.n_paths,
    };
    let cfg = SimConfig {
        n_paths,
        seed: inv.seed(env_seed, d.seed).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("{m} (seed may also come from {SEED_VAR})")),
            e => e,
        })?,
        time_step: inv.number("time_step")?.unwrap_or(d.time_step),
        horizon: inv.number("horizon")?.or(d.horizon),
    };
    let z_max = inv.number("z_max")?.unwrap_or(3.0);
    let r = mc_vs_scale(&f, x, a, &cfg)?;
    match inv.format(Format::Json)? {
        Format::Json => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serialises"));
        }
        Format::Csv => {
            out.push_str("x,a,p_hat,std_err,n_effective,censored,scale_ratio,z_score\n");
            let e = &r.estimate;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                num(x),
                num(a),
                num(e.p_hat),
                num(e.std_err),
                e.n_effective,
                e.censored,
                num(r.scale_ratio),
                num(r.z_score)
            );
        }
    }
    Ok(if r.z_score.abs() < z_max { Status::Ok } else { Status::CheckFailed })
}

fn conjugate(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    let f = family(inv, &[])?;
    let rows = columns_table(&f, &inv.grid(DEFAULT_GRID)?, &[Column::WStar, Column::WStarPrime])?;
    let meta = json!({
        "family": f.describe(),
        "conjugate": f.conjugate_family()?.describe(),
        "kappa_star": f.kappa_star()?,
        "d_star": f.d_star()?,
    });
    table(out, inv.format(Format::Csv)?, &["x", "Wstar", "Wstarprime"], &rows, meta);
    Ok(Status::Ok)
}

fn tilt(inv: &Invocation, out: Out) -> Result<Status, CliError> {
    let base = family(inv, &["by"])?;
    let f = base.tilt(inv.required("by")?)?;
    let rows = columns_table(&f, &inv.grid(DEFAULT_GRID)?, &[Column::W, Column::WPrime])?;
    let meta = json!({"family": f.describe(), "kappa": f.kappa()});
    table(out, inv.format(Format::Csv)?, &["x", "W", "Wprime"], &rows, meta);
    Ok(Status::Ok)
}

//! Implementations of the data-producing subcommands.

use std::io::Write;

use anyhow::{bail, Context, Result};
use num_traits::Zero;

use rabi_core::poly::kus_polynomial;
use rabi_core::tridiag::{build_a, next_up};
use rabi_core::{analysis, gfunction, juddian};

use crate::config::{Format, RunConfig};
use crate::emit::{fmt_f64, write_csv, write_json_lines};
use crate::rational::parse_rational;

pub enum Restrict {
    XAxis,
    YAxis,
}

pub fn cmd_poly(
    out: &mut dyn Write,
    cfg: &RunConfig,
    n: u32,
    eval: Option<(&str, &str)>,
    restrict: Option<Restrict>,
) -> Result<()> {
    if n < 1 {
        bail!("n must be at least 1");
    }
    if n > cfg.exact_cap {
        bail!(
            "n = {n} exceeds the exact-construction cap {} (raise --exact-cap, \
             or use the spectral commands for large orders)",
            cfg.exact_cap
        );
    }
    let p = kus_polynomial(n);
    match (eval, restrict) {
        (Some((xs, ys)), None) => {
            let x = parse_rational(xs)?;
            let y = parse_rational(ys)?;
            writeln!(out, "{}", p.eval_exact(&x, &y))?;
        }
        (None, Some(axis)) => {
            let (uni, on_x) = match axis {
                Restrict::XAxis => (p.restrict_x_axis(), true),
                Restrict::YAxis => (p.restrict_y_axis(), false),
            };
            let terms: Vec<String> = uni
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    let (dx, dy) = if on_x { (k, 0) } else { (0, k) };
                    format!("{{\"dx\":{dx},\"dy\":{dy},\"c\":\"{c}\"}}")
                })
                .collect();
            writeln!(out, "{{\"n\":{n},\"terms\":[{}]}}", terms.join(","))?;
        }
        (None, None) => {
            writeln!(out, "{}", p.to_json(n))?;
        }
        (Some(_), Some(_)) => bail!("--eval and --restrict are mutually exclusive"),
    }
    Ok(())
}

pub fn cmd_zeros(
    out: &mut dyn Write,
    cfg: &RunConfig,
    n: usize,
    y: f64,
    range: Option<(f64, f64)>,
) -> Result<()> {
    let t = build_a(n, y)?;
    let (vals, offset) = match range {
        Some((lo, hi)) => {
            let vals = t.eigenvalues_in(lo, hi, cfg.bisect_tol)?;
            (vals, t.sturm_count(next_up(lo)))
        }
        None => (t.eigenvalues_all(cfg.bisect_tol)?, 0),
    };
    let rows: Vec<Vec<String>> = vals
        .iter()
        .enumerate()
        .map(|(i, v)| vec![(offset + i + 1).to_string(), fmt_f64(*v)])
        .collect();
    match cfg.format {
        Format::Csv => write_csv(out, "k,alpha", &rows)?,
        Format::Json => {
            let json: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    vec![
                        ("k".into(), r[0].clone()),
                        ("alpha".into(), r[1].clone()),
                    ]
                })
                .collect();
            write_json_lines(out, &json)?;
        }
    }
    Ok(())
}

pub fn cmd_density(
    out: &mut dyn Write,
    cfg: &RunConfig,
    delta: f64,
    gamma: f64,
    ns: &[usize],
) -> Result<()> {
    if !(delta > 0.0) || !(gamma > 0.0) {
        bail!("delta and gamma must be positive");
    }
    if ns.is_empty() {
        bail!("at least one N is required");
    }
    let recs = analysis::density_scan(delta, gamma, ns);
    let rows: Vec<Vec<String>> = recs
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_f64(r.delta),
                fmt_f64(r.gamma),
                r.count.to_string(),
                fmt_f64(r.asymptotic),
                fmt_f64(r.ratio),
            ]
        })
        .collect();
    match cfg.format {
        Format::Csv => write_csv(out, "N,delta,gamma,count,asymptotic,ratio", &rows)?,
        Format::Json => {
            let keys = ["N", "delta", "gamma", "count", "asymptotic", "ratio"];
            let json: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    keys.iter()
                        .zip(r)
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect()
                })
                .collect();
            write_json_lines(out, &json)?;
        }
    }
    Ok(())
}

pub fn cmd_doublejudd(out: &mut dyn Write, cfg: &RunConfig, m: usize, n: usize) -> Result<()> {
    let points = juddian::find_double_juddian_with(m, n, cfg.residual_tol, cfg.scan_steps)
        .context("double-Juddian search failed")?;
    let rows: Vec<Vec<(String, String)>> = points
        .iter()
        .map(|p| {
            vec![
                ("m".into(), p.m.to_string()),
                ("N".into(), p.n.to_string()),
                ("i".into(), p.branch_index.to_string()),
                ("x".into(), fmt_f64(p.x)),
                ("y".into(), fmt_f64(p.y)),
                ("g".into(), fmt_f64(p.g)),
                ("delta".into(), fmt_f64(p.delta)),
                ("res_m".into(), fmt_f64(p.residual_m)),
                ("res_N".into(), fmt_f64(p.residual_n)),
            ]
        })
        .collect();
    write_json_lines(out, &rows)?;
    Ok(())
}

pub fn cmd_branch(
    out: &mut dyn Write,
    cfg: &RunConfig,
    n: usize,
    m: usize,
    steps: usize,
) -> Result<()> {
    let branch = juddian::trace_branch(n, m, steps).context("branch trace failed")?;
    let rows: Vec<Vec<String>> = branch
        .points
        .iter()
        .map(|&(x, y)| vec![fmt_f64(y), fmt_f64(x)])
        .collect();
    match cfg.format {
        Format::Csv => write_csv(out, "y,x", &rows)?,
        Format::Json => {
            let json: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| vec![("y".into(), r[0].clone()), ("x".into(), r[1].clone())])
                .collect();
            write_json_lines(out, &json)?;
        }
    }
    Ok(())
}

pub fn cmd_gscan(
    out: &mut dyn Write,
    cfg: &RunConfig,
    z_lo: f64,
    z_hi: f64,
    samples: usize,
    g: f64,
    delta: f64,
) -> Result<()> {
    if !(z_lo < z_hi) {
        bail!("need z_lo < z_hi");
    }
    if samples < 1 {
        bail!("need at least one sample");
    }
    if !(g > 0.0) || !(delta >= 0.0) {
        bail!("need g > 0 and delta >= 0");
    }
    let samples = gfunction::g_scan_guarded(
        z_lo,
        z_hi,
        samples,
        g,
        delta,
        1e-10,
        gfunction::DEFAULT_N_CAP,
        cfg.pole_guard,
    );
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|s| {
            vec![
                fmt_f64(s.z),
                fmt_f64(s.g_plus),
                fmt_f64(s.g_minus),
                s.converged.to_string(),
                s.truncation_n.to_string(),
            ]
        })
        .collect();
    match cfg.format {
        Format::Csv => write_csv(out, "z,g_plus,g_minus,converged,truncation_n", &rows)?,
        Format::Json => {
            let keys = ["z", "g_plus", "g_minus", "converged", "truncation_n"];
            let json: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    keys.iter()
                        .zip(r)
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect()
                })
                .collect();
            write_json_lines(out, &json)?;
        }
    }
    Ok(())
}

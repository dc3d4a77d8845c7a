//! The five pipeline commands. Every table is comma-separated text with a
//! single header row and values printed to 12 significant digits, so
//! identical configurations produce byte-identical files.

use funeq::{
    asymptotic_coeff, coeffs_by_composition, coeffs_by_recurrence_23, fourier_extract, k_eval,
    lambda_line, normalize, schroder_derivatives, CoefficientTable, ExpansionTable, OracleError,
    ProblemSpec,
};
use num::rational::BigRational;
use std::io::Write;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn numerical(stage: &str, err: impl std::fmt::Display) -> Failure {
    Failure {
        code: 3,
        message: format!("{stage} stage failed: {err}"),
    }
}

fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn analyze(spec: &ProblemSpec, out: &mut dyn Write) -> Result<(), Failure> {
    let derivs = schroder_derivatives(spec, 2);
    let lines = [
        ("q", spec.fixed_point),
        ("alpha", spec.alpha),
        ("beta", spec.beta),
        ("multiplier", spec.multiplier),
        ("schroder_second_derivative", derivs[0]),
    ];
    for (name, value) in lines {
        writeln!(out, "{name} = {}", sig12(value)).map_err(|e| numerical("output", e))?;
    }
    Ok(())
}

pub fn spectrum(
    spec: &ProblemSpec,
    y: f64,
    grid_n: usize,
    modes: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let grid = lambda_line(spec, y, grid_n, None).map_err(|e| numerical("spectrum", e))?;
    let sp = fourier_extract(&grid, modes, spec.beta).map_err(|e| numerical("spectrum", e))?;
    writeln!(out, "m,re_lambda_hat,im_lambda_hat,re_ratio,im_ratio")
        .map_err(|e| numerical("output", e))?;
    for m in 1..=modes {
        let lh = sp.lambda_hat[m - 1];
        let r = sp.ratios[m - 1];
        writeln!(
            out,
            "{m},{},{},{},{}",
            sig12(lh.re),
            sig12(lh.im),
            sig12(r.re),
            sig12(r.im)
        )
        .map_err(|e| numerical("output", e))?;
    }
    Ok(())
}

fn build_table(
    spec: &ProblemSpec,
    y: f64,
    grid_n: usize,
    modes: usize,
    terms: usize,
) -> Result<ExpansionTable, Failure> {
    ExpansionTable::build(spec, y, grid_n, modes, terms).map_err(|e| numerical("expansion", e))
}

const KFUNC_SAMPLES: usize = 1024;

pub fn kfuncs(
    spec: &ProblemSpec,
    y: f64,
    grid_n: usize,
    modes: usize,
    terms: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let table = build_table(spec, y, grid_n, modes, terms)?;
    let header: Vec<String> = (1..=terms).map(|r| format!("K{r}")).collect();
    writeln!(out, "x,{}", header.join(",")).map_err(|e| numerical("output", e))?;
    for j in 0..KFUNC_SAMPLES {
        let x = j as f64 / KFUNC_SAMPLES as f64;
        let row: Vec<String> = (1..=terms)
            .map(|r| sig12(k_eval(r, x, &table, modes)))
            .collect();
        writeln!(out, "{},{}", sig12(x), row.join(",")).map_err(|e| numerical("output", e))?;
    }
    Ok(())
}

/// Exact coefficients by the fast combinatorial recurrence when the instance
/// is the 2,3-tree equation, otherwise by series composition.
fn exact_table(spec: &ProblemSpec, n_max: usize) -> Result<CoefficientTable, Failure> {
    match coeffs_by_recurrence_23(spec, n_max) {
        Ok(t) => Ok(t),
        Err(OracleError::WrongSpec) => {
            coeffs_by_composition(spec, n_max).map_err(|e| numerical("oracle", e))
        }
        Err(e) => Err(numerical("oracle", e)),
    }
}

fn coefficient_string(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn exact(spec: &ProblemSpec, n_max: usize, out: &mut dyn Write) -> Result<(), Failure> {
    let table = exact_table(spec, n_max)?;
    let norm = normalize(&table, spec);
    writeln!(out, "n,phi,normalized").map_err(|e| numerical("output", e))?;
    for n in 1..=n_max {
        writeln!(
            out,
            "{n},{},{}",
            coefficient_string(table.coeff(n)),
            sig12(norm[n - 1])
        )
        .map_err(|e| numerical("output", e))?;
    }
    Ok(())
}

pub fn compare(
    spec: &ProblemSpec,
    y: f64,
    grid_n: usize,
    modes: usize,
    terms: usize,
    n_max: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let table = build_table(spec, y, grid_n, modes, terms.max(2))?;
    let coeffs = exact_table(spec, n_max)?;
    let norm = normalize(&coeffs, spec);
    writeln!(out, "n,exact,est_k1,est_k1k2,resid_k1,n_resid_k1k2")
        .map_err(|e| numerical("output", e))?;
    for n in 1..=n_max {
        let exact = norm[n - 1];
        let e1 = asymptotic_coeff(n, 1, &table);
        let e2 = asymptotic_coeff(n, 2, &table);
        writeln!(
            out,
            "{n},{},{},{},{},{}",
            sig12(exact),
            sig12(e1),
            sig12(e2),
            sig12(exact - e1),
            sig12(n as f64 * (exact - e2))
        )
        .map_err(|e| numerical("output", e))?;
    }
    Ok(())
}

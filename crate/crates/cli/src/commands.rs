//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use freereg::expr::{format as fmt_poly, parse_poly};
use freereg::freetrace::{moments as exact_moments, TableTrace, TraceFunctional};
use freereg::matrix_model::{
    bimodule_residual_exact, empirical_measure, hochschild_commutator_exact, mc_moments, random_rational_hermitian,
    sample_gue, trial_rng, bimodule_commutator_residual, EmpiricalMeasure, Ensemble, Mat, MatrixTuple,
};
use freereg::nccalc::{diff, hochschild_defect, number_op, number_op_i, phi_t, zero_derivative_witness, FloatPoly, TensorPoly};
use freereg::spectral::{
    decay_exponent, geometric_grid, histogram, ks_distance, log_energy_with, max_window_mass, AtomThreshold,
};
use freereg::{registry, NcPoly, Scalar};

use crate::output::{emit, json_text, write_atomic};
use crate::{
    AtomsArgs, CheckArgs, CliError, DecayArgs, DeriveArgs, EntropyArgs, Format, McArgs, MomentsArgs, Outcome, PolyArgs,
    SimulateArgs, EXIT_CHECK_FAILED, SCHEMA_VERSION,
};

/// Largest matrix size for the exact rational check; the operator has `N⁴` entries.
pub const MAX_EXACT_DIM: usize = 4;

fn ok(stdout: String) -> Result<Outcome, CliError> {
    Ok(Outcome { stdout, code: 0 })
}

fn parse(args: &PolyArgs) -> Result<NcPoly, CliError> {
    Ok(parse_poly(&args.poly, args.n)?)
}

fn ensemble(mc: &McArgs) -> Result<Box<dyn Ensemble>, CliError> {
    Ok(registry::ensembles().create(&mc.ensemble)?)
}

fn sample(p: &NcPoly, mc: &McArgs) -> Result<EmpiricalMeasure, CliError> {
    let ens = ensemble(mc)?;
    Ok(empirical_measure(p, ens.as_ref(), mc.dim, mc.trials, mc.seed)?)
}

fn tensor_json(t: &TensorPoly) -> Value {
    json!({ "text": t.to_string(), "terms": t.to_wire().terms })
}

fn poly_json(p: &NcPoly) -> Value {
    json!({ "text": fmt_poly(p), "terms": p.to_wire().terms })
}

fn float_poly_json(p: &FloatPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(w, c)| json!({ "word": w.letters(), "re": c.re, "im": c.im }))
        .collect();
    Value::Array(terms)
}

pub fn derive(a: &DeriveArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let d = diff(&p, a.j)?;
    let degree = p.degree().finite();
    let parts: Vec<Value> = match degree {
        Some(deg) => (0..=deg)
            .map(|m| (m, p.homogeneous_part(m)))
            .filter(|(_, h)| !h.is_zero())
            .map(|(m, h)| json!({ "degree": m, "poly": poly_json(&h) }))
            .collect(),
        None => Vec::new(),
    };
    let phi: Vec<Value> = a.ts.iter().map(|&t| json!({ "t": t, "terms": float_poly_json(&phi_t(&p, t)) })).collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "polynomial": poly_json(&p),
        "n": p.n(),
        "degree": degree,
        "j": a.j,
        "derivative": tensor_json(&d),
        "number_op": poly_json(&number_op(&p)),
        "number_op_j": poly_json(&number_op_i(&p, a.j)?),
        "phi_t": phi,
        "homogeneous_parts": parts,
    });
    ok(emit(a.out.output.as_deref(), json_text(&doc))?)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: String,
    /// `PASS`, `FAIL` or `INFO` (informational, never fails the run).
    pub status: &'static str,
    pub detail: String,
}

impl CheckRow {
    fn new(check: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { check: check.into(), status: if pass { "PASS" } else { "FAIL" }, detail: detail.into() }
    }

    fn info(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self { check: check.into(), status: "INFO", detail: detail.into() }
    }
}

/// All rows of the identity audit.
pub fn check_rows(p: &NcPoly, a: &CheckArgs) -> Result<Vec<CheckRow>, CliError> {
    if !(1..=MAX_EXACT_DIM).contains(&a.exact_dim) {
        return Err(CliError::usage(format!("--exact-dim must lie in 1..={MAX_EXACT_DIM}, got {}", a.exact_dim)));
    }
    if a.float_dim == 0 {
        return Err(CliError::usage("--float-dim must be positive"));
    }
    let n = p.n();
    let mut rows = Vec::new();

    let defect = hochschild_defect(p);
    rows.push(CheckRow::new(
        "hochschild defect (symbolic)",
        defect.is_zero(),
        format!("{} nonzero tensor terms", defect.len()),
    ));

    let mut rng = trial_rng(a.seed, 0);
    let ys: Vec<Mat<Scalar>> = (0..n).map(|_| random_rational_hermitian(a.exact_dim, &mut rng)).collect();
    let id = Mat::<Scalar>::identity(a.exact_dim);
    let u = random_rational_hermitian(a.exact_dim, &mut rng);
    let v = random_rational_hermitian(a.exact_dim, &mut rng);
    for (label, u, v) in [("u = v = 1", &id, &id), ("random u, v", &u, &v)] {
        let r = bimodule_residual_exact(p, &ys, u, v)?;
        rows.push(CheckRow::new(
            format!("bimodule identity, exact N = {} ({label})", a.exact_dim),
            r.is_zero(),
            format!("{} nonzero operator entries", r.nonzero_entries),
        ));
    }
    let comm = hochschild_commutator_exact(p, &ys, &id, &id)?;
    rows.push(CheckRow::info(
        format!("commutator sum alone, exact N = {}", a.exact_dim),
        format!("{} nonzero operator entries", comm.nonzero_entries),
    ));

    let mut rng = trial_rng(a.seed, 1);
    let ys = MatrixTuple::new((0..n).map(|_| sample_gue(a.float_dim, &mut rng)).collect())?;
    let u = sample_gue(a.float_dim, &mut rng).into_mat();
    let v = sample_gue(a.float_dim, &mut rng).into_mat();
    let r = bimodule_commutator_residual(p, &ys, &u, &v)?;
    rows.push(CheckRow::new(
        format!("bimodule identity, float N = {}", a.float_dim),
        r.relative <= a.tolerance,
        format!("relative residual {:.3e} (tolerance {:.1e})", r.relative, a.tolerance),
    ));

    for i in 1..=n {
        let w = zero_derivative_witness(p, i)?;
        let label = format!("(∂{i}P)^σ # P* = 0");
        if p.contains_letter(i) {
            let detail = format!("x{i} occurs in P; witness has {} terms", w.len());
            rows.push(CheckRow::info(label, detail));
        } else {
            rows.push(CheckRow::new(label, w.is_zero(), format!("x{i} absent from P; witness has {} terms", w.len())));
        }
    }
    Ok(rows)
}

pub fn check(a: &CheckArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let rows = check_rows(&p, a)?;
    let pass = rows.iter().all(|r| r.status != "FAIL");
    let stdout = if a.json {
        json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "polynomial": fmt_poly(&p),
            "n": p.n(),
            "pass": pass,
            "rows": rows,
        }))
    } else {
        let width = rows.iter().map(|r| r.check.chars().count()).max().unwrap_or(0);
        let mut s = format!("polynomial: {} (n = {})\n", fmt_poly(&p), p.n());
        for r in &rows {
            let pad = width - r.check.chars().count();
            writeln!(s, "{}  {}{}  {}", r.status, r.check, " ".repeat(pad), r.detail).expect("writing to a String");
        }
        writeln!(s, "{}", if pass { "all checks passed" } else { "some checks FAILED" }).expect("writing to a String");
        s
    };
    Ok(Outcome { stdout, code: if pass { 0 } else { EXIT_CHECK_FAILED } })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn simulate(a: &SimulateArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let range = match a.range.as_deref() {
        Some([lo, hi]) => Some((*lo, *hi)),
        Some(_) => return Err(CliError::usage("--range takes LO,HI")),
        None => None,
    };
    let law = a.reference.as_deref().map(|name| registry::reference_laws().create(name)).transpose()?;
    let mu = sample(&p, &a.mc)?;
    let hist = histogram(&mu, a.bins, range)?;
    let ks = law.as_ref().map(|l| json!({ "law": l.name(), "distance": ks_distance(&mu, l.as_ref()) }));

    let measure_path = with_suffix(&a.out, ".measure.csv");
    let hist_path = with_suffix(&a.out, ".histogram.csv");
    let meta_path = with_suffix(&a.out, ".meta.json");
    let meta = json!({
        "schema_version": SCHEMA_VERSION,
        "measure": mu.meta(),
        "histogram": { "bins": hist.bins(), "lo": hist.edges.first(), "hi": hist.edges.last() },
        "reference": ks,
        "files": {
            "measure": file_name(&measure_path),
            "histogram": file_name(&hist_path),
        },
    });
    write_atomic(&measure_path, &mu.to_csv())?;
    write_atomic(&hist_path, &hist.to_csv())?;
    write_atomic(&meta_path, &json_text(&meta))?;
    let mut s = String::new();
    for path in [&measure_path, &hist_path, &meta_path] {
        writeln!(s, "wrote {}", path.display()).expect("writing to a String");
    }
    ok(s)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRow {
    pub j: usize,
    pub exact: String,
    pub exact_re: f64,
    pub exact_im: f64,
    pub mc_re: f64,
    pub mc_im: f64,
    pub gap: f64,
}

/// Exact `τ(P^j)` against Monte Carlo `tr_N(P(Y)^j)` for `j = 1..=k`.
pub fn moment_rows(p: &NcPoly, k: usize, tr: &dyn TraceFunctional, budget: usize, mc: &McArgs) -> Result<Vec<MomentRow>, CliError> {
    if k == 0 {
        return Err(CliError::usage("--k must be at least 1"));
    }
    let exact = exact_moments(p, k, tr, budget)?;
    let ens = ensemble(mc)?;
    let sim = mc_moments(p, ens.as_ref(), mc.dim, mc.trials, mc.seed, k)?;
    Ok(exact
        .iter()
        .zip(&sim)
        .enumerate()
        .map(|(idx, (e, m))| {
            let ef: Complex64 = e.to_complex64();
            MomentRow {
                j: idx + 1,
                exact: e.to_string(),
                exact_re: ef.re,
                exact_im: ef.im,
                mc_re: m.re,
                mc_im: m.im,
                gap: (ef - m).norm(),
            }
        })
        .collect())
}

pub fn moments(a: &MomentsArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let tr: Box<dyn TraceFunctional> = match &a.trace_table {
        Some(path) => Box::new(TableTrace::from_json(&std::fs::read_to_string(path)?)?),
        None => registry::traces().create(&a.trace)?,
    };
    let rows = moment_rows(&p, a.k, tr.as_ref(), a.budget, &a.mc)?;
    let text = match a.format {
        Format::Json => json_text(&json!({
            "schema_version": SCHEMA_VERSION,
            "polynomial": fmt_poly(&p),
            "n": p.n(),
            "trace": tr.name(),
            "ensemble": a.mc.ensemble,
            "dim": a.mc.dim,
            "trials": a.mc.trials,
            "seed": a.mc.seed,
            "max_gap": rows.iter().map(|r| r.gap).fold(0.0, f64::max),
            "rows": rows,
        })),
        Format::Csv => {
            let mut s = String::from("j,exact,exact_re,exact_im,mc_re,mc_im,gap\n");
            for r in &rows {
                writeln!(s, "{},{},{},{},{},{},{}", r.j, r.exact, r.exact_re, r.exact_im, r.mc_re, r.mc_im, r.gap)
                    .expect("writing to a String");
            }
            s
        }
    };
    ok(emit(a.out.output.as_deref(), text)?)
}

pub fn entropy(a: &EntropyArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let mu = sample(&p, &a.mc)?;
    let est = log_energy_with(&mu, a.warning_level)?;
    ok(emit(a.out.output.as_deref(), json_text(&est))?)
}

pub fn decay(a: &DecayArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let grid = geometric_grid(a.eps_start, a.eps_ratio, a.eps_count)?;
    let mu = sample(&p, &a.mc)?;
    let report = decay_exponent(&mu, a.t, &grid, a.one_sided)?;
    ok(emit(a.out.output.as_deref(), json_text(&report))?)
}

pub fn atoms(a: &AtomsArgs) -> Result<Outcome, CliError> {
    let p = parse(&a.poly)?;
    let rule = AtomThreshold { coefficient: a.theta_coefficient, exponent: a.theta_exponent };
    let mu = sample(&p, &a.mc)?;
    let report = max_window_mass(&mu, a.eps, rule)?;
    ok(emit(a.out.output.as_deref(), json_text(&report))?)
}

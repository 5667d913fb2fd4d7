//! Named experiments, each producing one table with a provenance column.

use std::f64::consts::PI;
use std::path::Path;

use bergman_toeplitz::carleson::{varpi_with, GridOptions, DEFAULT_WINDOW, EXCLUDED_VERDICT};
use bergman_toeplitz::symbols::assemble_with;
use bergman_toeplitz::{
    check_norm_af_type, decay_classify, oscillation_profile, weak_convergence_check, AnalyticPoly, Atom, DecayClass,
    FormOptions, KClassParams, MeasureCollection, Order, Profile, SpectralData, Symbol, TruncatedOperator,
};
use num_complex::Complex64;

use crate::config::RunConfig;
use crate::output::{Cell, Table};
use crate::CliError;

pub const NAMES: &[&str] = &[
    "p0-approx",
    "gamma-radial",
    "gamma-vertical",
    "gamma-angular",
    "kcarleson",
    "afn-type",
    "decay",
    "weak-compress",
];

const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn run(name: &str, cfg: &RunConfig) -> Result<Table, CliError> {
    match name {
        "p0-approx" => p0_approx(cfg),
        "gamma-radial" => gamma_radial(cfg),
        "gamma-vertical" => gamma_vertical(cfg),
        "gamma-angular" => gamma_angular(cfg),
        "kcarleson" => kcarleson(cfg),
        "afn-type" => afn_type(cfg),
        "decay" => decay(cfg),
        "weak-compress" => weak_compress(cfg),
        other => Err(CliError::Invalid(vec![format!(
            "unknown experiment '{other}'; available: {}",
            NAMES.join(", ")
        )])),
    }
}

fn form_options(cfg: &RunConfig) -> Result<FormOptions, CliError> {
    Ok(FormOptions::new(cfg.n_r, cfg.n_theta)?)
}

fn norm(t: &TruncatedOperator, cfg: &RunConfig) -> Result<f64, CliError> {
    Ok(t.op_norm_with(cfg.norm_tol, cfg.seed, cfg.max_iter)?)
}

fn profile_param(cfg: &RunConfig, default: Profile) -> Result<Profile, CliError> {
    let Some(text) = cfg.param("profile") else {
        return Ok(default);
    };
    let profile: Profile = crate::parse_json(text, Path::new("profile"))?;
    profile.validate().map_err(|e| CliError::Invalid(vec![format!("profile: {e}")]))?;
    Ok(profile)
}

/// `symbol` is inline JSON or a path to a JSON file.
fn symbol_param(cfg: &RunConfig, default: Symbol) -> Result<Symbol, CliError> {
    match cfg.param("symbol") {
        None => Ok(default),
        Some(text) if text.trim_start().starts_with('{') => crate::parse_symbol(text, Path::new("symbol")),
        Some(path) => crate::read_symbol(Path::new(path)),
    }
}

fn spectral_table(cfg: &RunConfig, data: &SpectralData, grid_name: &str, provenance: &str) -> Result<Table, CliError> {
    match cfg.param("table").unwrap_or("gamma") {
        "gamma" => {
            let mut t = Table::new(&[grid_name, "gamma_re", "gamma_im", "provenance"]);
            for (x, g) in data.grid.iter().zip(&data.values) {
                let x = if grid_name == "n" { Cell::Int(*x as i64) } else { Cell::Float(*x) };
                t.push(vec![x, g.re.into(), g.im.into(), provenance.into()]);
            }
            Ok(t)
        }
        "omega" => {
            let deltas = cfg.param_list("deltas", &[0.01, 0.05, 0.1, 0.5, 1.0, 2.0])?;
            let prof = oscillation_profile(data, &deltas)?;
            let mut t = Table::new(&["delta", "omega", "resolution", "provenance"]);
            let label = format!("{provenance}: modulus of oscillation");
            for (d, w) in prof.deltas.iter().zip(&prof.omegas) {
                t.push(vec![(*d).into(), (*w).into(), prof.resolution.into(), label.as_str().into()]);
            }
            Ok(t)
        }
        other => Err(CliError::Invalid(vec![format!("parameter table: expected gamma or omega, got '{other}'")])),
    }
}

fn p0_approx(cfg: &RunConfig) -> Result<Table, CliError> {
    let n_max = cfg.param_usize("n_max", 10)?;
    let opts = form_options(cfg)?;
    let p0 = TruncatedOperator::basis_rank_one(cfg.dim, 0, 0)?;
    let mut t = Table::new(&["n", "closed_form", "computed", "abs_error", "provenance"]);
    for n in 1..=n_max {
        let tn = assemble_with(&Symbol::BoundedRadial { profile: Profile::ApproxFamily { n } }, cfg.dim, &opts)?;
        let diff = TruncatedOperator::add(&tn, &p0, ONE, -ONE)?;
        let computed = norm(&diff, cfg)?;
        let closed = 2.0 / (n as f64 + 4.0);
        t.push(vec![
            n.into(),
            closed.into(),
            computed.into(),
            (computed - closed).abs().into(),
            "norm of T_{a_n} - P_0 against 2/(n+4)".into(),
        ]);
    }
    Ok(t)
}

fn gamma_radial(cfg: &RunConfig) -> Result<Table, CliError> {
    let a = profile_param(cfg, Profile::Indicator { lo: 0.0, hi: 0.7 })?;
    let data = SpectralData::from_radial_profile(&a, cfg.dim)?;
    spectral_table(cfg, &data, "n", "radial spectral sequence gamma_a(n)")
}

fn gamma_vertical(cfg: &RunConfig) -> Result<Table, CliError> {
    let a = profile_param(cfg, Profile::Exponential { rate: 1.0, scale: 1.0 })?;
    let default: Vec<f64> = (0..40).map(|i| 0.05 * 200f64.powf(i as f64 / 39.0)).collect();
    let xs = cfg.param_list("xs", &default)?;
    let data = SpectralData::from_vertical_profile(&a, &xs)?;
    spectral_table(cfg, &data, "x", "vertical spectral function gamma_a(x), x > 0")
}

fn gamma_angular(cfg: &RunConfig) -> Result<Table, CliError> {
    let a = profile_param(cfg, Profile::Indicator { lo: 0.0, hi: PI / 2.0 })?;
    let default: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
    let xs = cfg.param_list("xs", &default)?;
    let data = SpectralData::from_angular_profile(&a, &xs)?;
    spectral_table(cfg, &data, "x", "angular spectral function gamma_a(x), x real")
}

fn kcarleson(cfg: &RunConfig) -> Result<Table, CliError> {
    let origin = Symbol::Discrete {
        atoms: vec![Atom { zeta: Complex64::new(0.0, 0.0), m: ONE }],
    };
    let mu = symbol_param(cfg, origin)?;
    let ks = cfg.param_list("k", &[0.0])?;
    let grid = GridOptions {
        radial: cfg.param_usize("grid_radial", GridOptions::default().radial)?,
        ..GridOptions::default()
    };
    let mut t = Table::new(&["k", "p", "varpi", "method", "vanishing", "argsup_re", "argsup_im", "provenance"]);
    for k in ks {
        let params = KClassParams::new(Order::new(k)?, cfg.p)?;
        let r = varpi_with(&mu, &params, &grid)?;
        let method = serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        t.push(vec![
            k.into(),
            cfg.p.into(),
            r.varpi.into(),
            method.into(),
            r.vanishing.to_string().into(),
            r.argsup.re.into(),
            r.argsup.im.into(),
            "k-Carleson norm: window mass against (1-|z|)^{-2(k+1)} Gamma(k+1)^2 p^{-2k}".into(),
        ]);
    }
    Ok(t)
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `4^{-(l+j)} / (l! j!)`, the weights of a derivative-delta series at the origin.
pub fn hyperfunction_weight(l: usize, j: usize) -> f64 {
    4f64.powi(-((l + j) as i32)) / (fact(l) * fact(j))
}

fn point_mass(zeta: Complex64, m: f64) -> Symbol {
    Symbol::Discrete {
        atoms: vec![Atom { zeta, m: Complex64::new(m, 0.0) }],
    }
}

fn hyperfunction_collection(size: usize) -> MeasureCollection {
    let mut col = MeasureCollection::default();
    for l in 0..size {
        for j in 0..size {
            col.push(l, j, point_mass(Complex64::new(0.0, 0.0), hyperfunction_weight(l, j)));
        }
    }
    col
}

fn afn_type(cfg: &RunConfig) -> Result<Table, CliError> {
    let family = cfg.param("family").unwrap_or("origin");
    let (col, label) = match family {
        "origin" => (
            hyperfunction_collection(cfg.param_usize("size", 16)?),
            "collection at the origin with weights 4^{-(l+j)}/(l! j!)",
        ),
        "boundary" => {
            let size = cfg.param_usize("size", 7)?;
            let mut col = MeasureCollection::default();
            for l in 0..size {
                for j in 0..size {
                    let r = 1.0 - 2f64.powi(-((l + j) as i32));
                    col.push(l, j, point_mass(Complex64::new(r, 0.0), 1.0 / (fact(l) * fact(j))));
                }
            }
            (col, "collection with weights 1/(l! j!) at |z| = 1 - 2^{-(l+j)}")
        }
        other => {
            return Err(CliError::Invalid(vec![format!(
                "parameter family: expected origin or boundary, got '{other}'"
            )]))
        }
    };
    let window = cfg.param_usize("window", DEFAULT_WINDOW)?;
    let report = check_norm_af_type(&col, cfg.p, window)?;
    let verdict = format!("{:?}", report.verdict).to_uppercase();
    let mut t = Table::new(&["s", "diagonal_term", "partial_sum", "verdict", "ratio_threshold", "window", "provenance"]);
    for ((s, term), sum) in report.diagonal_terms.iter().zip(&report.partial_sums) {
        t.push(vec![
            (*s).into(),
            (*term).into(),
            (*sum).into(),
            verdict.as_str().into(),
            report.ratio_threshold.into(),
            report.window.into(),
            label.into(),
        ]);
    }
    Ok(t)
}

fn decay(cfg: &RunConfig) -> Result<Table, CliError> {
    let r1 = cfg.param_f64("r1", 0.7)?;
    let disk = Symbol::BoundedRadial {
        profile: Profile::Indicator { lo: 0.0, hi: r1 },
    };
    let s = symbol_param(cfg, disk)?;
    let t_op = assemble_with(&s, cfg.dim, &form_options(cfg)?)?;
    let sv = t_op.singular_values(cfg.dim)?;
    let report = decay_classify(&sv)?;
    let class = match &report.class {
        DecayClass::Exponential { .. } => "exponential".to_string(),
        DecayClass::Superexponential => "superexponential".to_string(),
        DecayClass::Subexponential { verdict } if verdict == EXCLUDED_VERDICT => format!("subexponential ({verdict})"),
        DecayClass::Subexponential { verdict } => verdict.clone(),
    };
    let mut t = Table::new(&["m", "singular_value", "class", "rate", "provenance"]);
    for (m, v) in sv.iter().enumerate() {
        t.push(vec![
            (m + 1).into(),
            (*v).into(),
            class.as_str().into(),
            report.rate.into(),
            "singular-number decay; a disk indicator gives rate 2 ln(1/r1)".into(),
        ]);
    }
    Ok(t)
}

fn weak_compress(cfg: &RunConfig) -> Result<Table, CliError> {
    let n = cfg.dim;
    let z = Complex64::new(cfg.param_f64("z_re", 0.3)?, cfg.param_f64("z_im", 0.0)?);
    let f = AnalyticPoly::new(
        [1.0, 0.5, -0.25, 0.125, 0.0625]
            .iter()
            .map(|c| Complex64::new(*c, 0.0))
            .collect(),
    );
    let family = cfg.param("family").unwrap_or("j");
    let (op, reference, label) = match family {
        "j" => {
            let gamma = (0..n).map(|k| Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
            let op = assemble_with(&Symbol::Spectral { gamma }, n, &form_options(cfg)?)?;
            (op, f.eval(-z), "compressions of J f(z) = f(-z)")
        }
        "hyperfunction" => {
            let sym = hyperfunction_collection(n).to_symbol()?;
            let op = assemble_with(&sym, n, &form_options(cfg)?)?;
            // Σ_l Σ_j m_{l,j} f^{(l)}(0) (j+1)! z^j, summed past the truncation
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..f.len() {
                let dl = f.coeff(l) * fact(l);
                let mut zj = ONE;
                for j in 0..200 {
                    acc += dl * 4f64.powi(-((l + j) as i32)) * (j + 1) as f64 / fact(l) * zj;
                    zj *= z;
                }
            }
            (op, acc, "compressions of the origin collection 4^{-(l+j)}/(l! j!)")
        }
        other => {
            return Err(CliError::Invalid(vec![format!(
                "parameter family: expected j or hyperfunction, got '{other}'"
            )]))
        }
    };
    if z.norm() >= 1.0 {
        return Err(CliError::Invalid(vec![format!("z must lie inside the disk, got |z| = {}", z.norm())]));
    }
    let m_min = cfg.param_usize("m_min", 1)?.clamp(1, n);
    let schedule: Vec<usize> = (m_min..=n).collect();
    let values = weak_convergence_check(&op, &f, z, &schedule)?;
    let mut t = Table::new(&["m", "value_re", "value_im", "reference_re", "reference_im", "abs_error", "provenance"]);
    for (m, v) in schedule.iter().zip(values) {
        t.push(vec![
            (*m).into(),
            v.re.into(),
            v.im.into(),
            reference.re.into(),
            reference.im.into(),
            (v - reference).norm().into(),
            label.into(),
        ]);
    }
    Ok(t)
}

//! Symbols of Toeplitz operators given as sesquilinear forms `F(f, g)`, and the
//! engine that evaluates them, produces matrix elements `⟨T e_p, e_q⟩` and
//! assembles truncated operators.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{check_in_disk, AnalyticPoly, ComplexPoint, SUPPORT_MARGIN};
use crate::error::{Error, Result};
use crate::operators::TruncatedOperator;
use crate::profile::Profile;
use crate::quadrature::{disk_quadrature, unit_roots, GaussLegendre, QuadratureRule};
use crate::special::{factorial, falling_factorial};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Extra Gauss–Legendre nodes kept above the exactness threshold for
/// polynomial parts of radial integrands.
const RADIAL_NODE_SLACK: usize = 8;

/// A point mass `m δ_ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub zeta: ComplexPoint,
    pub m: Complex64,
}

/// `m · (normalized arc length on |w| = r)`, paired as `∫ 𝝆^q 𝜽^i f · conj(𝝆^{q'} g)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleEntry {
    pub r: f64,
    pub m: Complex64,
    #[serde(default)]
    pub q: usize,
    #[serde(default)]
    pub i: usize,
    #[serde(default)]
    pub q_prime: usize,
}

/// Which identity the circular derivative `𝜽` follows on analytic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircularConvention {
    /// `𝜽f(re^{iθ}) = i r⁻¹ ∂_θ f`, which equals `-(w/|w|) f'(w)`.
    #[default]
    Definition,
    /// `𝜽 = i (w/|w|) ∂`.
    PhaseDerivative,
}

/// One term `m f^{(l)}(ζ) conj(g^{(j)}(ζ))` of a derivative-delta form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub zeta: ComplexPoint,
    pub m: Complex64,
    pub l: usize,
    pub j: usize,
}

/// How the weight `m` of a [`DeltaTerm`] is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaConvention {
    /// `m` multiplies the form `f^{(l)}(ζ) conj(g^{(j)}(ζ))` directly.
    #[default]
    Form,
    /// `m` is the coefficient of the distribution `∂^l ∂̄^j δ_ζ`; the form
    /// weight picks up `(-1)^{l+j}` from moving derivatives onto `f conj(g)`.
    Distribution,
}

/// The symbol classes in scope.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Symbol {
    /// A bounded function `a(|z|)`, paired as `∫ a f ḡ dV`.
    BoundedRadial { profile: Profile },
    Discrete { atoms: Vec<Atom> },
    Circle {
        entries: Vec<CircleEntry>,
        #[serde(default)]
        convention: CircularConvention,
    },
    DerivDelta {
        terms: Vec<DeltaTerm>,
        #[serde(default)]
        convention: DeltaConvention,
    },
    /// Diagonal form `Σ γ(n) a_n(f) conj(a_n(g))` in the orthonormal basis.
    Spectral { gamma: Vec<Complex64> },
    /// `Σ_j ⟨f, f_j⟩ ⟨g_j, g⟩`.
    FiniteRank {
        f_list: Vec<AnalyticPoly>,
        g_list: Vec<AnalyticPoly>,
    },
}

/// A form value together with the a priori bound `|F(f,g)| <= bound`, when one is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormValue {
    pub value: Complex64,
    pub bound_certificate: Option<f64>,
}

/// Quadrature settings for the integral-based symbol classes.
///
/// Node counts act as minimums: they are raised as needed so that the
/// polynomial part of every integrand is integrated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct FormOptions {
    pub rule: QuadratureRule,
    pub circle_nodes: usize,
}

impl Default for FormOptions {
    fn default() -> Self {
        Self {
            rule: QuadratureRule::default(),
            circle_nodes: crate::quadrature::DEFAULT_ANGULAR_NODES,
        }
    }
}

impl FormOptions {
    pub fn new(n_r: usize, n_theta: usize) -> Result<Self> {
        Ok(Self {
            rule: QuadratureRule::new(n_r, n_theta)?,
            circle_nodes: n_theta,
        })
    }
}

impl Symbol {
    /// Derivative-delta symbol built from form weights.
    pub fn deriv_delta(terms: Vec<DeltaTerm>) -> Self {
        Symbol::DerivDelta {
            terms,
            convention: DeltaConvention::Form,
        }
    }

    /// Unit-weight circle measures with the definition convention for `𝜽`.
    pub fn circle(entries: Vec<CircleEntry>) -> Self {
        Symbol::Circle {
            entries,
            convention: CircularConvention::Definition,
        }
    }

    /// `Φ_{p,q} = (-1)^{p+q} ((p+1)(q+1))^{-1/2} (p! q!)⁻¹ ∂^p ∂̄^q δ_0`,
    /// whose operator is the rank-one `P_{p,q} f = ⟨f, e_p⟩ e_q`.
    pub fn normalized_rank_one(p: usize, q: usize) -> Self {
        let sign = if (p + q) % 2 == 0 { 1.0 } else { -1.0 };
        let m = sign / (((p + 1) * (q + 1)) as f64).sqrt() / (factorial(p) * factorial(q));
        Symbol::DerivDelta {
            terms: vec![DeltaTerm {
                zeta: ZERO,
                m: Complex64::new(m, 0.0),
                l: p,
                j: q,
            }],
            convention: DeltaConvention::Distribution,
        }
    }

    /// Short class name, matching the JSON `type` tag.
    pub fn class_name(&self) -> &'static str {
        match self {
            Symbol::BoundedRadial { .. } => "bounded_radial",
            Symbol::Discrete { .. } => "discrete",
            Symbol::Circle { .. } => "circle",
            Symbol::DerivDelta { .. } => "deriv_delta",
            Symbol::Spectral { .. } => "spectral",
            Symbol::FiniteRank { .. } => "finite_rank",
        }
    }

    /// True for derivative-delta collections supported at the origin only.
    pub fn is_origin_supported(&self) -> bool {
        match self {
            Symbol::DerivDelta { terms, .. } => terms.iter().all(|t| t.zeta == ZERO),
            _ => false,
        }
    }

    /// Every invariant violation, empty when the symbol is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        let support = |out: &mut Vec<String>, what: String, z: ComplexPoint| {
            let modulus = z.norm();
            if !modulus.is_finite() {
                out.push(format!("{what}: non-finite support point"));
            } else if modulus >= 1.0 {
                out.push(format!("{what}: support on boundary or outside the disk (|ζ| = {modulus})"));
            } else if modulus > 1.0 - SUPPORT_MARGIN {
                out.push(format!(
                    "{what}: support too close to the boundary (|ζ| = {modulus} > 1 - {SUPPORT_MARGIN:e})"
                ));
            }
        };
        match self {
            Symbol::BoundedRadial { profile } => {
                if let Err(e) = profile.validate() {
                    out.push(format!("profile: {e}"));
                }
            }
            Symbol::Discrete { atoms } => {
                for (k, a) in atoms.iter().enumerate() {
                    support(&mut out, format!("atoms[{k}]"), a.zeta);
                    if !finite(a.m) {
                        out.push(format!("atoms[{k}]: non-finite weight"));
                    }
                }
            }
            Symbol::Circle { entries, .. } => {
                for (k, e) in entries.iter().enumerate() {
                    if !(e.r > 0.0) {
                        out.push(format!("entries[{k}]: radius must be positive, got {}", e.r));
                    } else {
                        support(&mut out, format!("entries[{k}]"), Complex64::new(e.r, 0.0));
                    }
                    if !finite(e.m) {
                        out.push(format!("entries[{k}]: non-finite weight"));
                    }
                }
            }
            Symbol::DerivDelta { terms, .. } => {
                for (k, t) in terms.iter().enumerate() {
                    support(&mut out, format!("terms[{k}]"), t.zeta);
                    if !finite(t.m) {
                        out.push(format!("terms[{k}]: non-finite weight"));
                    }
                }
            }
            Symbol::Spectral { gamma } => {
                if let Some(n) = gamma.iter().position(|g| !finite(*g)) {
                    out.push(format!("gamma[{n}]: non-finite value"));
                }
            }
            Symbol::FiniteRank { f_list, g_list } => {
                if f_list.is_empty() {
                    out.push("finite-rank form needs at least one pair".into());
                }
                if f_list.len() != g_list.len() {
                    out.push(format!(
                        "f_list has {} entries but g_list has {}",
                        f_list.len(),
                        g_list.len()
                    ));
                }
                for (name, list) in [("f_list", f_list), ("g_list", g_list)] {
                    for (k, p) in list.iter().enumerate() {
                        if !p.coeffs().iter().all(|c| finite(*c)) {
                            out.push(format!("{name}[{k}]: non-finite coefficient"));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSymbol(v.join("; ")))
        }
    }

    /// The symbol of the adjoint operator: `F*(f, g) = conj(F(g, f))`.
    pub fn adjoint(&self) -> Self {
        match self {
            Symbol::BoundedRadial { profile } => Symbol::BoundedRadial {
                profile: profile.clone(),
            },
            Symbol::Discrete { atoms } => Symbol::Discrete {
                atoms: atoms
                    .iter()
                    .map(|a| Atom {
                        zeta: a.zeta,
                        m: a.m.conj(),
                    })
                    .collect(),
            },
            Symbol::Circle { entries, convention } => {
                // The form is diagonal with per-degree factor (real under the
                // definition convention, i^i times real otherwise).
                let entries = entries
                    .iter()
                    .map(|e| {
                        let flip = *convention == CircularConvention::PhaseDerivative && e.i % 2 == 1;
                        CircleEntry {
                            m: if flip { -e.m.conj() } else { e.m.conj() },
                            ..*e
                        }
                    })
                    .collect();
                Symbol::Circle {
                    entries,
                    convention: *convention,
                }
            }
            Symbol::DerivDelta { terms, convention } => Symbol::DerivDelta {
                terms: terms
                    .iter()
                    .map(|t| DeltaTerm {
                        zeta: t.zeta,
                        m: t.m.conj(),
                        l: t.j,
                        j: t.l,
                    })
                    .collect(),
                convention: *convention,
            },
            Symbol::Spectral { gamma } => Symbol::Spectral {
                gamma: gamma.iter().map(|g| g.conj()).collect(),
            },
            Symbol::FiniteRank { f_list, g_list } => Symbol::FiniteRank {
                f_list: g_list.clone(),
                g_list: f_list.clone(),
            },
        }
    }
}

impl DeltaTerm {
    fn form_weight(&self, convention: DeltaConvention) -> Complex64 {
        match convention {
            DeltaConvention::Form => self.m,
            DeltaConvention::Distribution if (self.l + self.j) % 2 == 1 => -self.m,
            DeltaConvention::Distribution => self.m,
        }
    }
}

/// `FiniteRankForm` symbol from paired lists.
pub fn finite_rank_form(f_list: Vec<AnalyticPoly>, g_list: Vec<AnalyticPoly>) -> Result<Symbol> {
    if f_list.is_empty() || f_list.len() != g_list.len() {
        return Err(Error::InvalidSymbol(format!(
            "finite-rank form needs equal nonempty lists, got {} and {}",
            f_list.len(),
            g_list.len()
        )));
    }
    let s = Symbol::FiniteRank { f_list, g_list };
    s.validate()?;
    Ok(s)
}

/// Per-degree factor of a circle entry on `c_n w^n`: the function
/// `𝝆^q 𝜽^i (w^n)` times `conj(𝝆^{q'} w^n)` on `|w| = r`, averaged over the circle.
pub fn circle_degree_factor(entry: &CircleEntry, convention: CircularConvention, n: usize) -> Complex64 {
    let (theta, rf) = circle_f_factor(entry, convention, n);
    let gf = falling_factorial(n as i64, entry.q_prime) * entry.r.powi(n as i32 - entry.q_prime as i32);
    theta * (rf * gf)
}

/// `𝝆^q 𝜽^i (w^n) = θ_n · ρ_n · e^{inθ}` on `|w| = r`; returns `(θ_n, ρ_n)`.
fn circle_f_factor(entry: &CircleEntry, convention: CircularConvention, n: usize) -> (Complex64, f64) {
    let nf = n as f64;
    let per_step = match convention {
        CircularConvention::Definition => Complex64::new(-nf, 0.0),
        CircularConvention::PhaseDerivative => Complex64::new(0.0, nf),
    };
    let theta = per_step.powu(entry.i as u32);
    let shifted = n as i64 - entry.i as i64;
    let rho = falling_factorial(shifted, entry.q) * entry.r.powi((shifted - entry.q as i64) as i32);
    (theta, rho)
}

/// `√Σ_k (k+1) (k!/(k-l)!)² x^{k-l}`, the norm of `f ↦ f^{(l)}(ζ)` with `x = |ζ|²`.
pub fn derivative_evaluation_norm(zeta: ComplexPoint, l: usize) -> f64 {
    let x = zeta.norm_sqr();
    if x == 0.0 {
        return ((l + 1) as f64).sqrt() * factorial(l);
    }
    let mut sum = 0.0;
    let mut k = l;
    let mut power = 1.0;
    loop {
        let ff = falling_factorial(k as i64, l);
        let term = (k + 1) as f64 * ff * ff * power;
        sum += term;
        if (term < 1e-17 * sum && k > l + 2 * (l + 1)) || k > l + 10_000_000 || !sum.is_finite() {
            break;
        }
        power *= x;
        k += 1;
    }
    sum.sqrt()
}

fn radial_node_count(min_nodes: usize, degree: usize) -> usize {
    min_nodes.max(degree / 2 + 1 + RADIAL_NODE_SLACK)
}

/// `(t, w)` nodes in `t = r²` split at the profile's breakpoints.
fn radial_nodes(profile: &Profile, n: usize) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(n).expect("node count is positive");
    let breaks: Vec<f64> = profile
        .breakpoints()
        .into_iter()
        .filter(|r| *r > 0.0 && *r < 1.0)
        .map(|r| r * r)
        .collect();
    gl.composite(0.0, 1.0, &breaks)
}

/// `Σ w a(√t) t^{s/2}` on the given nodes.
fn radial_moment(profile: &Profile, nodes: &[(f64, f64)], s: usize) -> Result<f64> {
    let mut acc = 0.0;
    for &(t, w) in nodes {
        let r = t.sqrt();
        let a = profile.eval(r);
        if !a.is_finite() {
            return Err(Error::NonFinite(format!("radial profile at r = {r}")));
        }
        acc += w * a * r.powi(s as i32);
    }
    Ok(acc)
}

/// `(p+1) ∫ a(|z|) |z|^{2p} dV`, the diagonal entry of a bounded radial symbol.
fn radial_diagonal(profile: &Profile, min_nodes: usize, p: usize, cache: &mut HashMap<usize, Vec<(f64, f64)>>) -> Result<Complex64> {
    let n = radial_node_count(min_nodes, 2 * p);
    let nodes = cache.entry(n).or_insert_with(|| radial_nodes(profile, n));
    Ok(Complex64::new((p + 1) as f64 * radial_moment(profile, nodes, 2 * p)?, 0.0))
}

fn norms(f: &AnalyticPoly, g: &AnalyticPoly) -> f64 {
    f.norm() * g.norm()
}

/// `F(f, g)` with default quadrature settings.
pub fn form_eval(s: &Symbol, f: &AnalyticPoly, g: &AnalyticPoly) -> Result<FormValue> {
    form_eval_with(s, f, g, &FormOptions::default())
}

pub fn form_eval_with(s: &Symbol, f: &AnalyticPoly, g: &AnalyticPoly, opts: &FormOptions) -> Result<FormValue> {
    s.validate()?;
    let fg = norms(f, g);
    let (value, bound) = match s {
        Symbol::BoundedRadial { profile } => {
            let deg = f.len() + g.len();
            let n_r = radial_node_count(opts.rule.radial_nodes(), deg);
            let n_theta = opts.rule.angular_nodes().max(deg + 1);
            let rule = QuadratureRule::new(n_r, n_theta)?.split_at_radii(&profile.breakpoints());
            let v = disk_quadrature(|z| f.eval(z) * g.eval(z).conj() * profile.eval(z.norm()), &rule)?;
            (v, Some(profile.sup_abs(0.0, 1.0) * fg))
        }
        Symbol::Discrete { atoms } => {
            let v = atoms.iter().map(|a| a.m * f.eval(a.zeta) * g.eval(a.zeta).conj()).sum();
            let b = atoms.iter().map(|a| a.m.norm() / (1.0 - a.zeta.norm_sqr())).sum::<f64>();
            (v, Some(b * fg))
        }
        Symbol::DerivDelta { terms, convention } => {
            let mut v = ZERO;
            let mut b = 0.0;
            for t in terms {
                v += t.form_weight(*convention) * f.eval_derivative(t.l, t.zeta) * g.eval_derivative(t.j, t.zeta).conj();
                b += t.m.norm() * derivative_evaluation_norm(t.zeta, t.l) * derivative_evaluation_norm(t.zeta, t.j);
            }
            (v, Some(b * fg))
        }
        Symbol::Circle { entries, convention } => {
            let n_theta = opts.circle_nodes.max(f.len() + g.len() + 1);
            let roots = unit_roots(n_theta);
            let top = f.len().min(g.len());
            let mut v = ZERO;
            let mut b = 0.0;
            for e in entries {
                let fc: Vec<Complex64> = f
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(n, c)| {
                        let (th, rho) = circle_f_factor(e, *convention, n);
                        c * th * rho
                    })
                    .collect();
                let gc: Vec<Complex64> = g
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(n, c)| c * (falling_factorial(n as i64, e.q_prime) * e.r.powi(n as i32 - e.q_prime as i32)))
                    .collect();
                let (fp, gp) = (AnalyticPoly::new(fc), AnalyticPoly::new(gc));
                let avg: Complex64 = roots.iter().map(|u| fp.eval(*u) * gp.eval(*u).conj()).sum::<Complex64>() / n_theta as f64;
                v += e.m * avg;
                let worst = (0..top)
                    .map(|n| (n + 1) as f64 * circle_degree_factor(e, *convention, n).norm())
                    .fold(0.0f64, f64::max);
                b += e.m.norm() * worst;
            }
            (v, Some(b * fg))
        }
        Symbol::Spectral { gamma } => {
            let v = gamma
                .iter()
                .enumerate()
                .map(|(n, gm)| gm * f.basis_coord(n) * g.basis_coord(n).conj())
                .sum();
            let b = gamma.iter().fold(0.0f64, |m, x| m.max(x.norm()));
            (v, Some(b * fg))
        }
        Symbol::FiniteRank { f_list, g_list } => {
            let v = f_list
                .iter()
                .zip(g_list)
                .map(|(fj, gj)| f.inner_product(fj) * gj.inner_product(g))
                .sum();
            let b: f64 = f_list.iter().zip(g_list).map(|(fj, gj)| fj.norm() * gj.norm()).sum();
            (v, Some(b * fg))
        }
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite(format!("{} form value", s.class_name())));
    }
    Ok(FormValue {
        value,
        bound_certificate: bound,
    })
}

/// `⟨T e_p, e_q⟩ = F(e_p, e_q)`.
///
/// Every class is evaluated through the closed structure of the form on basis
/// elements; the bounded radial class uses the same quadrature as
/// [`form_eval`], with the angular sum taken at its exact value.
pub fn matrix_element(s: &Symbol, p: usize, q: usize) -> Result<Complex64> {
    matrix_element_with(s, p, q, &FormOptions::default())
}

pub fn matrix_element_with(s: &Symbol, p: usize, q: usize, opts: &FormOptions) -> Result<Complex64> {
    s.validate()?;
    let mut cache = HashMap::new();
    element(s, p, q, opts, &mut cache)
}

fn element(
    s: &Symbol,
    p: usize,
    q: usize,
    opts: &FormOptions,
    cache: &mut HashMap<usize, Vec<(f64, f64)>>,
) -> Result<Complex64> {
    let v = match s {
        Symbol::BoundedRadial { profile } => {
            if p == q {
                radial_diagonal(profile, opts.rule.radial_nodes(), p, cache)?
            } else {
                ZERO
            }
        }
        Symbol::Discrete { atoms } => atoms
            .iter()
            .map(|a| a.m * basis_derivative(p, 0, a.zeta) * basis_derivative(q, 0, a.zeta).conj())
            .sum(),
        Symbol::DerivDelta { terms, convention } => terms
            .iter()
            .filter(|t| t.l <= p && t.j <= q)
            .map(|t| {
                let w = t.form_weight(*convention);
                if t.zeta == ZERO {
                    if t.l == p && t.j == q {
                        origin_entry(w, p, q)
                    } else {
                        ZERO
                    }
                } else {
                    w * basis_derivative(p, t.l, t.zeta) * basis_derivative(q, t.j, t.zeta).conj()
                }
            })
            .sum(),
        Symbol::Circle { entries, convention } => {
            if p == q {
                entries
                    .iter()
                    .map(|e| e.m * circle_degree_factor(e, *convention, p) * (p + 1) as f64)
                    .sum()
            } else {
                ZERO
            }
        }
        Symbol::Spectral { gamma } => {
            if p == q {
                gamma.get(p).copied().unwrap_or(ZERO)
            } else {
                ZERO
            }
        }
        Symbol::FiniteRank { f_list, g_list } => f_list
            .iter()
            .zip(g_list)
            .map(|(fj, gj)| fj.basis_coord(p).conj() * gj.basis_coord(q))
            .sum(),
    };
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFinite(format!("matrix element ({p}, {q})")));
    }
    Ok(v)
}

/// `w · p! q! √((p+1)(q+1))`, the entry produced by a weight-`w` term at the origin.
pub fn origin_entry(w: Complex64, p: usize, q: usize) -> Complex64 {
    w * (factorial(p) * factorial(q) * (((p + 1) * (q + 1)) as f64).sqrt())
}

/// `e_p^{(l)}(ζ) = √(p+1) p!/(p-l)! ζ^{p-l}`.
fn basis_derivative(p: usize, l: usize, zeta: ComplexPoint) -> Complex64 {
    if l > p {
        return ZERO;
    }
    zeta.powu((p - l) as u32) * (((p + 1) as f64).sqrt() * falling_factorial(p as i64, l))
}

/// Truncated operator with entry `(l, j) = ⟨T e_j, e_l⟩`, filled column by column.
pub fn assemble(s: &Symbol, n: usize) -> Result<TruncatedOperator> {
    assemble_with(s, n, &FormOptions::default())
}

pub fn assemble_with(s: &Symbol, n: usize, opts: &FormOptions) -> Result<TruncatedOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation dimension must be at least 1".into()));
    }
    s.validate()?;
    let mut cache = HashMap::new();
    let mut entries = ndarray::Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        for l in 0..n {
            entries[(l, j)] = element(s, j, l, opts, &mut cache)?;
        }
    }
    TruncatedOperator::new(entries)
}

/// `(T_Φ f)(z)` for `Φ = ∂^α ∂̄^β δ_ζ`:
/// `(-1)^{α+β} (β+1)! z^β (1 - z conj(ζ))^{-(2+β)} f^{(α)}(ζ)`.
pub fn derivative_delta_apply(
    alpha: usize,
    beta: usize,
    zeta: ComplexPoint,
    f: &AnalyticPoly,
    z: ComplexPoint,
) -> Result<Complex64> {
    check_in_disk(zeta, crate::analytic::KERNEL_MARGIN)?;
    check_in_disk(z, crate::analytic::KERNEL_MARGIN)?;
    let sign = if (alpha + beta) % 2 == 0 { 1.0 } else { -1.0 };
    let base = ONE - z * zeta.conj();
    let v = z.powu(beta as u32) * base.powi(-(2 + beta as i32)) * f.eval_derivative(alpha, zeta) * (sign * factorial(beta + 1));
    Ok(v)
}

//! k-Carleson norms `ϖ_k` of measures, the conversion coefficients `M_{l,k}`,
//! boundedness checks for derivative forms, summability of measure collections
//! and a singular-number decay classifier.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticPoly, ComplexPoint};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::quadrature::{disk_quadrature, unit_roots, GaussLegendre, QuadratureRule};
use crate::special::{factorial, ln_gamma};
use crate::symbols::{Atom, CircleEntry, Symbol};

pub const DEFAULT_P: f64 = 1.0 / 9.0;
pub const DEFAULT_RATIO_THRESHOLD: f64 = 0.95;
pub const DEFAULT_WINDOW: usize = 10;
pub const DEFAULT_SLOPE_EPS: f64 = 0.01;
/// Grid searches stop at `|z| = 1 - 1e-4`.
pub const GRID_EDGE: f64 = 1e-4;

/// A nonnegative integer or half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(u32);

impl Order {
    pub fn int(k: u32) -> Self {
        Order(2 * k)
    }

    /// The order `twice / 2`.
    pub fn from_twice(twice: u32) -> Self {
        Order(twice)
    }

    pub fn new(k: f64) -> Result<Self> {
        let twice = 2.0 * k;
        if !(k >= 0.0) || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::InvalidArgument(format!("order must be a nonnegative integer or half-integer, got {k}")));
        }
        Ok(Order(twice as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;
    fn try_from(k: f64) -> Result<Self> {
        Order::new(k)
    }
}

impl From<Order> for f64 {
    fn from(o: Order) -> f64 {
        o.value()
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KClassParams {
    pub k: Order,
    pub p: f64,
}

impl KClassParams {
    pub fn new(k: Order, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("p must lie in (0, 1), got {p}")));
        }
        Ok(Self { k, p })
    }

    pub fn with_default_p(k: Order) -> Self {
        Self { k, p: DEFAULT_P }
    }

    /// `Γ(k+1)² p^{-2k}`.
    fn constant(&self) -> f64 {
        let k = self.k.value();
        (2.0 * ln_gamma(k + 1.0) - 2.0 * k * self.p.ln()).exp()
    }

    /// `(1-|z|)^{-2(k+1)} Γ(k+1)² p^{-2k}` at `1-|z| = gap`.
    pub fn window_weight(&self, gap: f64) -> f64 {
        gap.powf(-2.0 * (self.k.value() + 1.0)) * self.constant()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupMethod {
    /// Closed-form supremum.
    Exact,
    /// Best value over a finite search; a lower bound of the supremum.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KCarlesonReport {
    pub varpi: f64,
    /// Where the supremum is attained or approached.
    pub argsup: ComplexPoint,
    pub vanishing: bool,
    pub method: SupMethod,
    pub k: Order,
    pub p: f64,
}

/// Resolution of the grid searches used for non-atomic measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Points of the one-dimensional sweep over `|z|`.
    pub radial: usize,
    /// Angular samples for multi-atom searches.
    pub angular: usize,
    /// Zoom passes around the best sweep point.
    pub refine: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            radial: 2000,
            angular: 720,
            refine: 3,
        }
    }
}

/// `M_{l,k} = p^{2(k-l)} (Γ(l+1)/Γ(k+1))²`.
pub fn coeff_m(l: Order, k: Order, p: f64) -> f64 {
    if l == k {
        return 1.0;
    }
    let (l, k) = (l.value(), k.value());
    (2.0 * (k - l) * p.ln() + 2.0 * (ln_gamma(l + 1.0) - ln_gamma(k + 1.0))).exp()
}

/// Closed-form `ϖ_{k,p}` of the point mass `m δ_ζ`.
pub fn point_mass_varpi(m: Complex64, zeta: ComplexPoint, params: &KClassParams) -> f64 {
    m.norm() * params.window_weight(2.0 * (1.0 - zeta.norm()) / 3.0)
}

/// Largest `|z|` whose window `𝔻(z, (1-|z|)/2)` still reaches `ζ`, along the ray through `ζ`.
fn point_mass_argsup(zeta: ComplexPoint) -> ComplexPoint {
    let a = zeta.norm();
    let dir = if a > 0.0 { zeta / a } else { Complex64::new(1.0, 0.0) };
    dir * ((1.0 + 2.0 * a) / 3.0)
}

pub fn varpi(mu: &Symbol, params: &KClassParams) -> Result<KCarlesonReport> {
    varpi_with(mu, params, &GridOptions::default())
}

pub fn varpi_with(mu: &Symbol, params: &KClassParams, grid: &GridOptions) -> Result<KCarlesonReport> {
    mu.validate()?;
    let report = |varpi: f64, argsup: ComplexPoint, vanishing: bool, method: SupMethod| KCarlesonReport {
        varpi,
        argsup,
        vanishing,
        method,
        k: params.k,
        p: params.p,
    };
    match mu {
        Symbol::Discrete { atoms } => {
            let atoms: Vec<&Atom> = atoms.iter().filter(|a| a.m.norm() > 0.0).collect();
            if atoms.is_empty() {
                return Ok(report(0.0, Complex64::new(0.0, 0.0), true, SupMethod::Exact));
            }
            let best = atoms
                .iter()
                .map(|a| (point_mass_varpi(a.m, a.zeta, params), point_mass_argsup(a.zeta)))
                .max_by(|x, y| x.0.total_cmp(&y.0))
                .expect("nonempty");
            if atoms_separated(&atoms) {
                return Ok(report(best.0, best.1, true, SupMethod::Exact));
            }
            let (v, z) = atom_grid_search(&atoms, params, grid);
            Ok(report(v, z, true, SupMethod::Grid))
        }
        Symbol::Circle { entries, .. } => {
            let entries: Vec<&CircleEntry> = entries.iter().filter(|e| e.m.norm() > 0.0).collect();
            if entries.is_empty() {
                return Ok(report(0.0, Complex64::new(0.0, 0.0), true, SupMethod::Exact));
            }
            let (v, s) = circle_sweep(&entries, params, grid);
            Ok(report(v, Complex64::new(s, 0.0), true, SupMethod::Grid))
        }
        Symbol::BoundedRadial { profile } => {
            let (v, s, vanishing) = density_sweep(profile, params, grid)?;
            Ok(report(v, Complex64::new(s, 0.0), vanishing, SupMethod::Grid))
        }
        other => Err(Error::Unsupported(format!(
            "ϖ_k is defined for discrete, circle and bounded-density measures, not {}",
            other.class_name()
        ))),
    }
}

/// No window can hold two atoms: a window meeting `a` has diameter below
/// `2(1-|a|)`, so `|a-b| >= 2 min(1-|a|, 1-|b|)` rules out sharing.
fn atoms_separated(atoms: &[&Atom]) -> bool {
    atoms.iter().enumerate().all(|(i, a)| {
        atoms[i + 1..].iter().all(|b| {
            let gap = 2.0 * (1.0 - a.zeta.norm()).min(1.0 - b.zeta.norm());
            (a.zeta - b.zeta).norm() >= gap
        })
    })
}

fn window_atom_mass(atoms: &[&Atom], z: ComplexPoint) -> f64 {
    let radius = 0.5 * (1.0 - z.norm());
    atoms
        .iter()
        .filter(|a| (a.zeta - z).norm() < radius)
        .map(|a| a.m.norm())
        .sum()
}

fn sweep_moduli(n: usize, upper: f64) -> Vec<f64> {
    // half uniform, half clustered toward the edge
    let upper = upper.min(1.0 - GRID_EDGE);
    let half = n.max(4) / 2;
    let mut out: Vec<f64> = (0..half).map(|i| upper * i as f64 / (half - 1) as f64).collect();
    let lo_gap = (1.0 - upper).max(GRID_EDGE);
    for i in 0..half {
        let gap = lo_gap.powf(i as f64 / (half - 1) as f64);
        if 1.0 - gap <= upper {
            out.push(1.0 - gap);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn atom_grid_search(atoms: &[&Atom], params: &KClassParams, grid: &GridOptions) -> (f64, ComplexPoint) {
    let eval = |z: ComplexPoint| window_atom_mass(atoms, z) * params.window_weight(1.0 - z.norm());
    // the supremum along the approach to each single-atom optimum
    let mut best = atoms
        .iter()
        .map(|a| {
            let target = point_mass_argsup(a.zeta);
            let mass = window_atom_mass(atoms, target * (1.0 - 1e-12));
            (mass * params.window_weight(1.0 - target.norm()), target)
        })
        .fold((0.0f64, Complex64::new(0.0, 0.0)), |b, x| if x.0 > b.0 { x } else { b });
    let mut consider = |z: ComplexPoint| {
        if z.norm() < 1.0 {
            let v = eval(z);
            if v > best.0 {
                best = (v, z);
            }
        }
    };
    // just inside each single-atom optimum, and along rays toward each atom
    for a in atoms {
        let target = point_mass_argsup(a.zeta);
        let dir = target / target.norm();
        consider(target * (1.0 - 1e-12));
        for s in sweep_moduli(grid.radial, 1.0) {
            consider(dir * s);
        }
    }
    let roots = unit_roots(grid.angular);
    for s in sweep_moduli(grid.radial, 1.0) {
        for u in &roots {
            consider(u * s);
        }
    }
    best
}

/// Fraction of the normalized arc length of `|w| = big_r` inside `𝔻(s, rho)`, `s >= 0`.
fn arc_fraction(big_r: f64, s: f64, rho: f64) -> f64 {
    if s == 0.0 {
        return if big_r < rho { 1.0 } else { 0.0 };
    }
    let c = (big_r * big_r + s * s - rho * rho) / (2.0 * big_r * s);
    c.clamp(-1.0, 1.0).acos() / PI
}

fn circle_value(entries: &[&CircleEntry], params: &KClassParams, s: f64) -> f64 {
    let rho = 0.5 * (1.0 - s);
    let mass: f64 = entries.iter().map(|e| e.m.norm() * arc_fraction(e.r, s, rho)).sum();
    mass * params.window_weight(1.0 - s)
}

/// Maximizes over `s = |z|` with zoom passes; rotation invariance reduces the search to a line.
fn line_search(value: impl Fn(f64) -> f64, upper: f64, grid: &GridOptions) -> (f64, f64) {
    let mut pts = sweep_moduli(grid.radial, upper);
    let mut best = (0.0f64, 0.0f64);
    for _ in 0..=grid.refine {
        let mut best_i = 0;
        for (i, s) in pts.iter().enumerate() {
            let v = value(*s);
            if v > best.0 {
                best = (v, *s);
                best_i = i;
            }
        }
        if best.0 == 0.0 {
            break;
        }
        let lo = pts[best_i.saturating_sub(1)];
        let hi = pts[(best_i + 1).min(pts.len() - 1)];
        let m = 200;
        pts = (0..=m).map(|i| lo + (hi - lo) * i as f64 / m as f64).collect();
    }
    best
}

fn circle_sweep(entries: &[&CircleEntry], params: &KClassParams, grid: &GridOptions) -> (f64, f64) {
    let r_max = entries.iter().fold(0.0f64, |m, e| m.max(e.r));
    // windows meet |w| = R only for |z| < (2R+1)/3
    line_search(|s| circle_value(entries, params, s), (2.0 * r_max + 1.0) / 3.0, grid)
}

/// `∫_{𝔻(s, ρ)} |a(|w|)| dV` in polar coordinates around the center.
fn density_window_mass(profile: &Profile, s: f64, gl: &GaussLegendre, roots: &[Complex64]) -> f64 {
    let rho = 0.5 * (1.0 - s);
    let center = Complex64::new(s, 0.0);
    let mut acc = 0.0;
    for (t, w) in gl.mapped(0.0, rho) {
        let ring: f64 = roots.iter().map(|u| profile.eval((center + u * t).norm()).abs()).sum();
        acc += w * t * ring;
    }
    // dV = π⁻¹ t dt dφ, angular mean times 2π
    2.0 * acc / roots.len() as f64
}

fn density_sweep(profile: &Profile, params: &KClassParams, grid: &GridOptions) -> Result<(f64, f64, bool)> {
    let gl = GaussLegendre::new(24)?;
    let roots = unit_roots(64);
    let value = |s: f64| density_window_mass(profile, s, &gl, &roots) * params.window_weight(1.0 - s);
    if let Some(end) = profile.support_end() {
        if end < 1.0 {
            let (v, s) = line_search(value, ((2.0 * end + 1.0) / 3.0).min(1.0 - GRID_EDGE), grid);
            return Ok((v, s, true));
        }
    }
    let (v, s) = line_search(value, 1.0 - GRID_EDGE, grid);
    if !v.is_finite() {
        return Err(Error::NonFinite("density window mass".into()));
    }
    // vanishing when the weighted window mass keeps falling toward the edge
    let vanishing = value(1.0 - GRID_EDGE) <= 0.5 * value(1.0 - 10.0 * GRID_EDGE);
    Ok((v, s, vanishing))
}

/// Multiplies a measure by `(1-|w|)^exponent`.
pub fn reweight_measure(mu: &Symbol, exponent: f64) -> Result<Symbol> {
    match mu {
        Symbol::Discrete { atoms } => Ok(Symbol::Discrete {
            atoms: atoms
                .iter()
                .map(|a| Atom {
                    zeta: a.zeta,
                    m: a.m * (1.0 - a.zeta.norm()).powf(exponent),
                })
                .collect(),
        }),
        Symbol::Circle { entries, convention } => Ok(Symbol::Circle {
            entries: entries
                .iter()
                .map(|e| CircleEntry {
                    m: e.m * (1.0 - e.r).powf(exponent),
                    ..*e
                })
                .collect(),
            convention: *convention,
        }),
        Symbol::BoundedRadial { profile } => {
            let inner = profile.clone();
            let breaks = profile.breakpoints();
            Ok(Symbol::BoundedRadial {
                profile: Profile::custom_with_breaks(move |r| inner.eval(r) * (1.0 - r).powf(exponent), breaks),
            })
        }
        other => Err(Error::Unsupported(format!("cannot reweight a {} symbol", other.class_name()))),
    }
}

/// `∫ ∂^l f conj(∂^j g) dμ`.
pub fn derivative_form(mu: &Symbol, l: usize, j: usize, f: &AnalyticPoly, g: &AnalyticPoly) -> Result<Complex64> {
    let v = match mu {
        Symbol::Discrete { atoms } => atoms
            .iter()
            .map(|a| a.m * f.eval_derivative(l, a.zeta) * g.eval_derivative(j, a.zeta).conj())
            .sum(),
        Symbol::Circle { entries, .. } => {
            let (fl, gj) = (f.derivative(l), g.derivative(j));
            let n = 256.max(f.len() + g.len() + 1);
            let roots = unit_roots(n);
            entries
                .iter()
                .map(|e| {
                    let avg: Complex64 = roots.iter().map(|u| fl.eval(u * e.r) * gj.eval(u * e.r).conj()).sum();
                    e.m * avg / n as f64
                })
                .sum()
        }
        Symbol::BoundedRadial { profile } => {
            let (fl, gj) = (f.derivative(l), g.derivative(j));
            let deg = fl.len() + gj.len();
            let rule = QuadratureRule::new(64.max(deg / 2 + 9), 256.max(deg + 1))?.split_at_radii(&profile.breakpoints());
            disk_quadrature(|z| fl.eval(z) * gj.eval(z).conj() * profile.eval(z.norm()), &rule)?
        }
        other => {
            return Err(Error::Unsupported(format!(
                "derivative forms need a measure symbol, not {}",
                other.class_name()
            )))
        }
    };
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormBoundReport {
    pub l: usize,
    pub j: usize,
    pub k: Order,
    pub p: f64,
    pub varpi: f64,
    /// `M_{l,k}^{1/2} M_{j,k}^{1/2} ϖ_k(μ)`.
    pub bound: f64,
    /// Largest observed `|F(f,g)| / bound` over unit-norm trial pairs.
    pub empirical_c: f64,
    pub trials: usize,
    pub seed: u64,
}

pub const TRIAL_MAX_DEGREE: usize = 30;

/// A unit-norm polynomial of random degree `<= max_degree` with Gaussian basis coordinates.
pub fn random_unit_poly(rng: &mut impl Rng, max_degree: usize) -> AnalyticPoly {
    let d = rng.random_range(0..=max_degree);
    loop {
        let coords: Vec<Complex64> = (0..=d)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            let unit: Vec<Complex64> = coords.iter().map(|c| c / norm).collect();
            return AnalyticPoly::from_basis_coords(&unit);
        }
    }
}

pub fn form_bound_check(
    mu: &Symbol,
    l: usize,
    j: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<FormBoundReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let k = Order::from_twice((l + j) as u32);
    let params = KClassParams::new(k, p)?;
    let w = varpi(mu, &params)?.varpi;
    let bound = coeff_m(Order::int(l as u32), k, p).sqrt() * coeff_m(Order::int(j as u32), k, p).sqrt() * w;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let f = random_unit_poly(&mut rng, TRIAL_MAX_DEGREE);
        let g = random_unit_poly(&mut rng, TRIAL_MAX_DEGREE);
        let v = derivative_form(mu, l, j, &f, &g)?.norm();
        if !v.is_finite() {
            return Err(Error::NonFinite("derivative form value".into()));
        }
        if bound == 0.0 {
            if v > 0.0 {
                return Err(Error::Inconsistent(format!("ϖ_k = 0 but the form takes the value {v:e}")));
            }
            continue;
        }
        worst = worst.max(v / bound);
    }
    Ok(FormBoundReport {
        l,
        j,
        k,
        p,
        varpi: w,
        bound,
        empirical_c: worst,
        trials,
        seed,
    })
}

/// `(|f^{(j)}(0)|², j!² (j+1) ‖f‖²)`.
pub fn central_derivative_bound(f: &AnalyticPoly, j: usize) -> (f64, f64) {
    let lhs = f.eval_derivative(j, Complex64::new(0.0, 0.0)).norm_sqr();
    let jf = factorial(j);
    (lhs, jf * jf * (j + 1) as f64 * f.norm_sqr())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollectionEntry {
    pub l: usize,
    pub j: usize,
    pub measure: Symbol,
}

/// Measures `μ_{l,j}` paired with derivative orders; entry `(l, j)` has `k = (l+j)/2`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MeasureCollection {
    pub entries: Vec<CollectionEntry>,
}

impl MeasureCollection {
    pub fn push(&mut self, l: usize, j: usize, measure: Symbol) {
        self.entries.push(CollectionEntry { l, j, measure });
    }

    /// Every measure is a discrete measure sitting at the origin.
    pub fn is_origin_supported(&self) -> bool {
        !self.entries.is_empty()
            && self.entries.iter().all(|e| match &e.measure {
                Symbol::Discrete { atoms } => atoms.iter().all(|a| a.zeta == Complex64::new(0.0, 0.0)),
                _ => false,
            })
    }

    /// The derivative-delta symbol `Σ m f^{(l)}(ζ) conj(g^{(j)}(ζ))` of a discrete collection.
    pub fn to_symbol(&self) -> Result<Symbol> {
        let mut terms = Vec::new();
        for e in &self.entries {
            match &e.measure {
                Symbol::Discrete { atoms } => terms.extend(atoms.iter().map(|a| crate::symbols::DeltaTerm {
                    zeta: a.zeta,
                    m: a.m,
                    l: e.l,
                    j: e.j,
                })),
                other => {
                    return Err(Error::Unsupported(format!(
                        "only discrete collections convert to derivative-delta symbols, found {}",
                        other.class_name()
                    )))
                }
            }
        }
        Ok(Symbol::deriv_delta(terms))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfTypeReport {
    pub verdict: Verdict,
    pub origin_supported: bool,
    /// Sums of the entry terms over each diagonal `l + j = s`, in increasing `s`.
    pub diagonal_terms: Vec<(usize, f64)>,
    pub partial_sums: Vec<f64>,
    pub ratio_threshold: f64,
    pub window: usize,
}

/// Term of one collection entry: `|m| l! j! √((l+1)(j+1))` at the origin,
/// `M_{l,k}^{1/2} M_{j,k}^{1/2} ϖ_k(μ)` otherwise.
pub fn collection_term(entry: &CollectionEntry, origin: bool, p: f64) -> Result<f64> {
    let (l, j) = (entry.l, entry.j);
    if origin {
        let mass: f64 = match &entry.measure {
            Symbol::Discrete { atoms } => atoms.iter().map(|a| a.m.norm()).sum(),
            _ => unreachable!("origin collections are discrete"),
        };
        return Ok(mass * factorial(l) * factorial(j) * (((l + 1) * (j + 1)) as f64).sqrt());
    }
    let k = Order::from_twice((l + j) as u32);
    let w = varpi(&entry.measure, &KClassParams::new(k, p)?)?.varpi;
    Ok(coeff_m(Order::int(l as u32), k, p).sqrt() * coeff_m(Order::int(j as u32), k, p).sqrt() * w)
}

/// Ratio test on diagonal sums `D_s = Σ_{l+j=s} T_{l,j}`: convergent when the
/// last `window` ratios `D_{s+1}/D_s` are all `<= 0.95`, divergent when the
/// sums never decrease over the window.
pub fn check_norm_af_type(c: &MeasureCollection, p: f64, window: usize) -> Result<AfTypeReport> {
    if c.entries.is_empty() {
        return Err(Error::InvalidArgument("empty measure collection".into()));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let origin = c.is_origin_supported();
    let mut diag: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
    for e in &c.entries {
        *diag.entry(e.l + e.j).or_insert(0.0) += collection_term(e, origin, p)?;
    }
    let diagonal_terms: Vec<(usize, f64)> = diag.into_iter().collect();
    let partial_sums: Vec<f64> = diagonal_terms
        .iter()
        .scan(0.0, |acc, (_, t)| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    let ratios: Vec<f64> = diagonal_terms
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0].1, w[1].1);
            if a == 0.0 {
                if b == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                b / a
            }
        })
        .collect();
    let tail = &ratios[ratios.len().saturating_sub(window)..];
    let verdict = if !partial_sums.last().is_some_and(|s| s.is_finite()) {
        Verdict::Divergent
    } else if tail.iter().all(|r| *r <= DEFAULT_RATIO_THRESHOLD) {
        Verdict::Convergent
    } else if tail.iter().all(|r| *r >= 1.0) {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    Ok(AfTypeReport {
        verdict,
        origin_supported: origin,
        diagonal_terms,
        partial_sums,
        ratio_threshold: DEFAULT_RATIO_THRESHOLD,
        window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecayClass {
    Subexponential { verdict: String },
    Exponential { rate: f64 },
    Superexponential,
}

pub const EXCLUDED_VERDICT: &str = "excluded: not a Toeplitz operator with symbol in E′(𝔻)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub class: DecayClass,
    /// Least-squares slope of `|ln s_m|` against `m` over the tail half.
    pub rate: f64,
    /// Slope over the last quarter divided by the slope over the third quarter.
    pub curvature: f64,
    pub slope_eps: f64,
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Classifies the decay of a positive sequence from the growth of `|ln s_m|`
/// (`m` counted from 1): a flat or concave trend is subexponential, a linear
/// trend exponential with that slope, a convex one superexponential.
pub fn decay_classify(s: &[f64]) -> Result<DecayReport> {
    decay_classify_with(s, DEFAULT_SLOPE_EPS)
}

pub fn decay_classify_with(s: &[f64], slope_eps: f64) -> Result<DecayReport> {
    if s.len() < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 values, got {}", s.len())));
    }
    if let Some(i) = s.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("entry {i} is not a positive finite number")));
    }
    let m: Vec<f64> = (1..=s.len()).map(|i| i as f64).collect();
    let y: Vec<f64> = s.iter().map(|v| v.ln().abs()).collect();
    let n = s.len();
    let half = n / 2;
    let q3 = n / 2;
    let q4 = (3 * n) / 4;
    let rate = ls_slope(&m[half..], &y[half..]);
    let third = ls_slope(&m[q3..q4], &y[q3..q4]);
    let last = ls_slope(&m[q4..], &y[q4..]);
    let curvature = if third.abs() > 0.0 { last / third } else { f64::NAN };
    let class = if curvature < 0.95 || (rate < slope_eps && !(curvature > 1.05)) {
        DecayClass::Subexponential {
            verdict: EXCLUDED_VERDICT.to_string(),
        }
    } else if curvature > 1.05 {
        DecayClass::Superexponential
    } else {
        DecayClass::Exponential { rate }
    };
    Ok(DecayReport {
        class,
        rate,
        curvature,
        slope_eps,
    })
}

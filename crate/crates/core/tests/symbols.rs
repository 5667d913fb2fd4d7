use std::f64::consts::PI;

use bergman_toeplitz::spectral::radial_gamma;
use bergman_toeplitz::symbols::{assemble_with, circle_degree_factor, matrix_element_with};
use bergman_toeplitz::{
    assemble, derivative_delta_apply, eval_basis, finite_rank_form, form_eval, matrix_element, AnalyticPoly, Atom,
    CircleEntry, CircularConvention, DeltaConvention, DeltaTerm, FormOptions, Profile, Symbol, TruncatedOperator,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> AnalyticPoly {
    AnalyticPoly::new((0..=degree).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
}

fn sample_symbols() -> Vec<Symbol> {
    vec![
        Symbol::BoundedRadial {
            profile: Profile::PiecewiseConstant {
                breaks: vec![0.4, 0.8],
                values: vec![1.0, -0.5, 2.0],
            },
        },
        Symbol::Discrete {
            atoms: vec![
                Atom { zeta: c(0.3, -0.2), m: c(1.0, 0.5) },
                Atom { zeta: c(-0.6, 0.1), m: c(-0.25, 0.0) },
            ],
        },
        Symbol::circle(vec![
            CircleEntry { r: 0.6, m: c(0.5, -1.0), q: 1, i: 1, q_prime: 0 },
            CircleEntry { r: 0.3, m: c(1.0, 0.0), q: 0, i: 0, q_prime: 2 },
        ]),
        Symbol::deriv_delta(vec![
            DeltaTerm { zeta: c(0.2, 0.3), m: c(0.7, 0.1), l: 2, j: 1 },
            DeltaTerm { zeta: c(0.0, 0.0), m: c(-1.0, 0.5), l: 0, j: 3 },
        ]),
        Symbol::Spectral {
            gamma: (0..12).map(|n| c((n as f64).cos(), (0.3 * n as f64).sin())).collect(),
        },
        finite_rank_form(
            vec![AnalyticPoly::new(vec![c(1.0, 0.0), c(0.0, 2.0)]), AnalyticPoly::basis(4)],
            vec![AnalyticPoly::basis(1), AnalyticPoly::new(vec![c(0.5, 0.5), c(0.0, 0.0), c(-1.0, 0.0)])],
        )
        .unwrap(),
    ]
}

#[test]
fn form_examples() {
    let one = Symbol::BoundedRadial {
        profile: Profile::Constant { value: 1.0 },
    };
    for k in [0, 5, 20] {
        let e = AnalyticPoly::basis(k);
        assert!((form_eval(&one, &e, &e).unwrap().value - c(1.0, 0.0)).norm() < 1e-12);
    }
    let delta0 = Symbol::Discrete {
        atoms: vec![Atom { zeta: c(0.0, 0.0), m: c(1.0, 0.0) }],
    };
    let (e0, e1) = (AnalyticPoly::basis(0), AnalyticPoly::basis(1));
    assert_eq!(form_eval(&delta0, &e0, &e0).unwrap().value, c(1.0, 0.0));
    assert_eq!(form_eval(&delta0, &e1, &e0).unwrap().value, c(0.0, 0.0));

    let m = c(0.4, -0.3);
    for (l, j) in [(0, 0), (1, 2), (3, 3)] {
        let s = Symbol::deriv_delta(vec![DeltaTerm { zeta: c(0.0, 0.0), m, l, j }]);
        for p in 0..5 {
            for q in 0..5 {
                let v = form_eval(&s, &AnalyticPoly::basis(p), &AnalyticPoly::basis(q)).unwrap().value;
                let expect = if p == l && q == j {
                    m * fact(p) * fact(q) * (((p + 1) * (q + 1)) as f64).sqrt()
                } else {
                    c(0.0, 0.0)
                };
                assert!((v - expect).norm() < 1e-12, "(l,j)=({l},{j}) p={p} q={q}");
            }
        }
    }
}

#[test]
fn radial_elements_are_the_spectral_sequence() {
    let profiles = [
        Profile::Indicator { lo: 0.0, hi: 0.5 },
        Profile::ApproxFamily { n: 3 },
        Profile::Exponential { rate: 2.0, scale: 1.5 },
        Profile::PiecewiseLinear { knots: vec![0.2, 0.9], values: vec![1.0, -1.0] },
    ];
    for a in profiles {
        let s = Symbol::BoundedRadial { profile: a.clone() };
        for p in 0..10 {
            for q in 0..10 {
                let v = matrix_element(&s, p, q).unwrap();
                let expect = if p == q { radial_gamma(&a, p).unwrap() } else { 0.0 };
                assert!((v - c(expect, 0.0)).norm() < 1e-10, "{a:?} p={p} q={q}");
            }
        }
        let direct = assemble(&s, 24).unwrap();
        let diag: Vec<Complex64> = (0..24).map(|n| c(radial_gamma(&a, n).unwrap(), 0.0)).collect();
        let spectral = assemble(&Symbol::Spectral { gamma: diag }, 24).unwrap();
        assert!(direct.max_abs_diff(&spectral).unwrap() < 1e-10);
    }
}

#[test]
fn circle_and_atom_elements() {
    let (r, m) = (0.55, c(0.3, 1.2));
    let s = Symbol::circle(vec![CircleEntry { r, m, q: 0, i: 0, q_prime: 0 }]);
    for p in 0..12 {
        for q in 0..12 {
            let v = matrix_element(&s, p, q).unwrap();
            let expect = if p == q { m * (p + 1) as f64 * r.powi(2 * p as i32) } else { c(0.0, 0.0) };
            assert!((v - expect).norm() < 1e-14, "p={p} q={q}");
        }
    }
    let zeta = c(0.3, -0.45);
    let s = Symbol::Discrete { atoms: vec![Atom { zeta, m }] };
    for p in 0..8 {
        for q in 0..8 {
            let expect = m * eval_basis(p, zeta) * eval_basis(q, zeta).conj();
            assert!((matrix_element(&s, p, q).unwrap() - expect).norm() < 1e-15);
        }
    }
}

/// `(2π)⁻¹ ∫ 𝝆^q 𝜽^i f · conj(𝝆^{q'} g)` on `|w| = r`, straight from the polar
/// definitions: `𝜽 = i ρ⁻¹ ∂_θ` by central differences in θ, then `𝝆 = ∂_ρ`
/// by a Cauchy integral in the (complexified) radius.
fn circle_oracle(e: &CircleEntry, f: &AnalyticPoly, g: &AnalyticPoly) -> Complex64 {
    let h = 1e-4;
    fn theta_apply(i: usize, h: f64, base: &dyn Fn(Complex64, f64) -> Complex64, rho: Complex64, t: f64) -> Complex64 {
        if i == 0 {
            return base(rho, t);
        }
        let inner = |tt: f64| theta_apply(i - 1, h, base, rho, tt);
        c(0.0, 1.0) / rho * (inner(t + h) - inner(t - h)) / (2.0 * h)
    }
    let radial = |func: &dyn Fn(Complex64) -> Complex64, q: usize| -> Complex64 {
        if q == 0 {
            return func(c(e.r, 0.0));
        }
        let (n, rad) = (32, 0.05);
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            let u = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            acc += func(e.r + u * rad) * u.powi(-(q as i32));
        }
        acc / n as f64 * fact(q) / rad.powi(q as i32)
    };
    let fpolar = |rho: Complex64, t: f64| f.eval(rho * Complex64::from_polar(1.0, t));
    let gpolar = |rho: Complex64, t: f64| g.eval(rho * Complex64::from_polar(1.0, t));
    let n = 256;
    let mut acc = c(0.0, 0.0);
    for k in 0..n {
        let t = 2.0 * PI * k as f64 / n as f64;
        let fv = radial(&|rho| theta_apply(e.i, h, &fpolar, rho, t), e.q);
        let gv = radial(&|rho| gpolar(rho, t), e.q_prime);
        acc += fv * gv.conj();
    }
    e.m * acc / n as f64
}

#[test]
fn circle_form_matches_polar_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = random_poly(&mut rng, 6);
    let g = random_poly(&mut rng, 6);
    for (q, i, qp) in [(0, 0, 0), (0, 1, 0), (1, 1, 0), (2, 1, 1), (0, 1, 2), (1, 2, 0), (3, 0, 1)] {
        let e = CircleEntry { r: 0.6, m: c(0.8, -0.4), q, i, q_prime: qp };
        let expect = circle_oracle(&e, &f, &g);
        let got = form_eval(&Symbol::circle(vec![e]), &f, &g).unwrap().value;
        assert!((got - expect).norm() < 1e-6 * expect.norm().max(1.0), "q={q} i={i} q'={qp}: {got} vs {expect}");
    }
}

#[test]
fn circle_conventions_differ_by_sign_and_phase() {
    for i in 0..4 {
        let e = CircleEntry { r: 0.5, m: c(1.0, 0.0), q: 1, i, q_prime: 0 };
        for n in 0..8 {
            let def = circle_degree_factor(&e, CircularConvention::Definition, n);
            let phase = circle_degree_factor(&e, CircularConvention::PhaseDerivative, n);
            // one application multiplies by -n under the definition and by i n under the identity
            let ratio_per_step = c(0.0, -1.0);
            if def.norm() > 0.0 {
                assert!((phase - def * ratio_per_step.powu(i as u32)).norm() < 1e-12 * def.norm());
            } else {
                assert_eq!(phase.norm(), 0.0);
            }
        }
    }
}

#[test]
fn assemble_examples() {
    let gamma: Vec<Complex64> = (0..7).map(|n| c(n as f64 * 0.5, -(n as f64))).collect();
    let t = assemble(&Symbol::Spectral { gamma: gamma.clone() }, 7).unwrap();
    assert_eq!(t, TruncatedOperator::from_diagonal(&gamma).unwrap());

    for (p, q) in [(0, 0), (1, 2), (3, 0), (4, 4)] {
        let t = assemble(&Symbol::normalized_rank_one(p, q), 6).unwrap();
        assert!(t.max_abs_diff(&TruncatedOperator::basis_rank_one(6, p, q).unwrap()).unwrap() < 1e-12);
        assert!((t.entry(q, p) - c(1.0, 0.0)).norm() < 1e-12);
    }

    let j: Vec<Complex64> = (0..5).map(|k| c(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
    let t = assemble(&Symbol::Spectral { gamma: j }, 5).unwrap();
    for k in 0..5 {
        assert_eq!(t.entry(k, k), c(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
    }
}

#[test]
fn assembled_operator_reproduces_elements() {
    let opts = FormOptions::default();
    for s in sample_symbols() {
        let n = 10;
        let t = assemble_with(&s, n, &opts).unwrap();
        for p in 0..n {
            let col = t.apply(&AnalyticPoly::basis(p)).unwrap();
            for q in 0..n {
                let v = col.inner_product(&AnalyticPoly::basis(q));
                let m = matrix_element_with(&s, p, q, &opts).unwrap();
                assert!((v - m).norm() <= 1e-14 * m.norm().max(1.0), "{} p={p} q={q}", s.class_name());
            }
        }
    }
}

#[test]
fn elements_match_form_on_basis() {
    for s in sample_symbols() {
        for p in 0..8 {
            for q in 0..8 {
                let m = matrix_element(&s, p, q).unwrap();
                let f = form_eval(&s, &AnalyticPoly::basis(p), &AnalyticPoly::basis(q)).unwrap().value;
                assert!((m - f).norm() < 1e-10 * m.norm().max(1.0), "{} p={p} q={q}: {m} vs {f}", s.class_name());
            }
        }
    }
}

#[test]
fn adjoint_symbol_duality() {
    for s in sample_symbols() {
        let adj = s.adjoint();
        for p in 0..8 {
            for q in 0..8 {
                let a = matrix_element(&adj, p, q).unwrap();
                let b = matrix_element(&s, q, p).unwrap().conj();
                assert!((a - b).norm() < 1e-10 * b.norm().max(1.0), "{} p={p} q={q}", s.class_name());
            }
        }
    }
}

#[test]
fn bound_certificates_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for s in sample_symbols() {
        for _ in 0..30 {
            let (df, dg) = (rng.random_range(0..15), rng.random_range(0..15));
            let f = random_poly(&mut rng, df);
            let g = random_poly(&mut rng, dg);
            let v = form_eval(&s, &f, &g).unwrap();
            let bound = v.bound_certificate.expect("every class carries a certificate");
            // quadrature rounding can leave ~1e-16 where the form vanishes exactly
            let slack = 1e-13 * f.norm() * g.norm();
            assert!(v.value.norm() <= bound * (1.0 + 1e-12) + slack, "{}: {} > {bound}", s.class_name(), v.value.norm());
        }
    }
}

/// `(T_Φ f)(z)` with `Φ = ∂^α ∂̄^β δ_ζ`: `(-1)^{α+β} ∂_w^α ∂_{w̄}^β [f(w)(1 - z w̄)^{-2}]` at `w = ζ`.
/// The integrand factors into a holomorphic part in `w` and one in `w̄`, so each
/// derivative is a Cauchy integral over a small circle, summed by the trapezoid rule.
fn cauchy_oracle(alpha: usize, beta: usize, zeta: Complex64, f: &AnalyticPoly, z: Complex64) -> Complex64 {
    let n = 64;
    let rad = 0.05;
    let cauchy = |h: &dyn Fn(Complex64) -> Complex64, at: Complex64, order: usize| -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            let u = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            acc += h(at + u * rad) * u.powi(-(order as i32));
        }
        acc / n as f64 * fact(order) / rad.powi(order as i32)
    };
    let df = cauchy(&|s| f.eval(s), zeta, alpha);
    let dk = cauchy(&|t| (c(1.0, 0.0) - z * t).powi(-2), zeta.conj(), beta);
    let sign = if (alpha + beta) % 2 == 0 { 1.0 } else { -1.0 };
    df * dk * sign
}

/// Wirtinger derivatives of `w ↦ f(w)(1 - z w̄)^{-2}` by central differences in x and y,
/// Richardson-extrapolated from steps `h` and `h/2`.
fn wirtinger_oracle(alpha: usize, beta: usize, zeta: Complex64, f: &AnalyticPoly, z: Complex64) -> Complex64 {
    let at = |h: f64| -> Complex64 {
        let func = |w: Complex64| f.eval(w) * (c(1.0, 0.0) - z * w.conj()).powi(-2);
        let dx = |g: &dyn Fn(Complex64) -> Complex64, w: Complex64| (g(w + h) - g(w - h)) / (2.0 * h);
        let dy = |g: &dyn Fn(Complex64) -> Complex64, w: Complex64| (g(w + c(0.0, h)) - g(w - c(0.0, h))) / (2.0 * h);
        let d = |g: &dyn Fn(Complex64) -> Complex64, w: Complex64| (dx(g, w) - c(0.0, 1.0) * dy(g, w)) * 0.5;
        let db = |g: &dyn Fn(Complex64) -> Complex64, w: Complex64| (dx(g, w) + c(0.0, 1.0) * dy(g, w)) * 0.5;
        match (alpha, beta) {
            (0, 0) => func(zeta),
            (1, 0) => d(&func, zeta),
            (0, 1) => db(&func, zeta),
            (2, 0) => d(&|w| d(&func, w), zeta),
            (1, 1) => d(&|w| db(&func, w), zeta),
            (0, 2) => db(&|w| db(&func, w), zeta),
            _ => unreachable!(),
        }
    };
    let h = 2e-3;
    let v = (at(h / 2.0) * 4.0 - at(h)) / 3.0;
    if (alpha + beta) % 2 == 0 {
        v
    } else {
        -v
    }
}

#[test]
fn derivative_delta_matches_cauchy_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f = random_poly(&mut rng, 7);
    let zetas = [c(0.0, 0.0), c(0.3, 0.0), c(-0.2, 0.45), c(0.6, -0.3)];
    let zs = [c(0.0, 0.0), c(0.4, 0.1), c(-0.7, 0.2), c(0.1, -0.85)];
    for alpha in 0..=3 {
        for beta in 0..=3 {
            for zeta in zetas {
                for z in zs {
                    let got = derivative_delta_apply(alpha, beta, zeta, &f, z).unwrap();
                    let expect = cauchy_oracle(alpha, beta, zeta, &f, z);
                    assert!(
                        (got - expect).norm() < 1e-6 * expect.norm().max(1.0),
                        "α={alpha} β={beta} ζ={zeta} z={z}: {got} vs {expect}"
                    );
                    if alpha + beta <= 2 {
                        let fd = wirtinger_oracle(alpha, beta, zeta, &f, z);
                        assert!((got - fd).norm() < 1e-6 * fd.norm().max(1.0), "α={alpha} β={beta}: {got} vs {fd}");
                    }
                }
            }
        }
    }
}

#[test]
fn derivative_delta_examples() {
    let f = AnalyticPoly::new(vec![c(0.5, -1.0), c(2.0, 0.0), c(0.0, 1.0)]);
    for z in [c(0.0, 0.0), c(0.3, 0.6)] {
        assert_eq!(derivative_delta_apply(0, 0, c(0.0, 0.0), &f, z).unwrap(), f.eval(c(0.0, 0.0)));
    }
    let z = c(0.45, -0.2);
    let v = derivative_delta_apply(0, 0, c(0.3, 0.0), &AnalyticPoly::basis(0), z).unwrap();
    assert!((v - (c(1.0, 0.0) - 0.3 * z).powi(-2)).norm() < 1e-15);
    let v = derivative_delta_apply(1, 0, c(0.3, 0.0), &AnalyticPoly::basis(2), z).unwrap();
    let expect = -(c(1.0, 0.0) - 0.3 * z).powi(-2) * (2.0 * 3f64.sqrt() * 0.3);
    assert!((v - expect).norm() < 1e-14);
    assert!(derivative_delta_apply(0, 0, c(1.0, 0.0), &f, z).is_err());
    assert!(derivative_delta_apply(0, 0, c(0.0, 0.0), &f, c(0.0, 1.0)).is_err());
}

#[test]
fn derivative_delta_matches_assembled_distribution() {
    // a distribution-convention term with unit weight realizes ∂^α ∂̄^β δ_ζ
    let f = AnalyticPoly::new(vec![c(1.0, 0.0), c(-0.5, 0.5), c(0.25, 0.0)]);
    let n = 90;
    for (alpha, beta, zeta) in [(0, 0, c(0.2, 0.1)), (1, 2, c(-0.3, 0.2)), (2, 1, c(0.0, 0.0))] {
        let s = Symbol::DerivDelta {
            terms: vec![DeltaTerm { zeta, m: c(1.0, 0.0), l: alpha, j: beta }],
            convention: DeltaConvention::Distribution,
        };
        let t = assemble(&s, n).unwrap();
        let tf = t.apply(&f).unwrap();
        for z in [c(0.1, 0.0), c(-0.3, 0.4)] {
            let expect = derivative_delta_apply(alpha, beta, zeta, &f, z).unwrap();
            assert!((tf.eval(z) - expect).norm() < 1e-10 * expect.norm().max(1.0));
        }
    }
}

#[test]
fn finite_rank_examples() {
    for (p, q) in [(0, 0), (2, 5), (4, 1)] {
        let s = finite_rank_form(vec![AnalyticPoly::basis(p)], vec![AnalyticPoly::basis(q)]).unwrap();
        let t = assemble(&s, 8).unwrap();
        assert!(t.max_abs_diff(&TruncatedOperator::basis_rank_one(8, p, q).unwrap()).unwrap() < 1e-15);
    }
    let s = finite_rank_form(
        vec![AnalyticPoly::basis(0), AnalyticPoly::basis(1)],
        vec![AnalyticPoly::basis(0), AnalyticPoly::basis(1)],
    )
    .unwrap();
    let t = assemble(&s, 6).unwrap();
    let proj = TruncatedOperator::from_diagonal(&[1.0, 1.0, 0.0, 0.0, 0.0, 0.0].map(|x| c(x, 0.0))).unwrap();
    assert!(t.max_abs_diff(&proj).unwrap() < 1e-15);
    assert!(finite_rank_form(vec![], vec![]).is_err());
    assert!(finite_rank_form(vec![AnalyticPoly::basis(0)], vec![]).is_err());
}

#[test]
fn rank_one_truncation_bound() {
    // P_{u,v} against the partial sums Σ_{p<p0, q<q0} conj(u_p) v_q P_{p,q}
    let n = 40;
    let u: Vec<Complex64> = (0..n).map(|k| c(0.8f64.powi(k as i32), 0.0)).collect();
    let v: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(0.7f64.powi(k as i32), k as f64)).collect();
    let (up, vp) = (AnalyticPoly::from_basis_coords(&u), AnalyticPoly::from_basis_coords(&v));
    let full = TruncatedOperator::rank_one(n, &up, &vp).unwrap();
    let norm = |x: &[Complex64]| x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for (p0, q0) in [(2, 2), (5, 3), (10, 10), (20, 15)] {
        let mut partial = TruncatedOperator::zeros(n).unwrap();
        for p in 0..p0 {
            for q in 0..q0 {
                let term = TruncatedOperator::basis_rank_one(n, p, q).unwrap();
                partial = TruncatedOperator::add(&partial, &term, c(1.0, 0.0), u[p].conj() * v[q]).unwrap();
            }
        }
        let diff = TruncatedOperator::add(&full, &partial, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let err = diff.singular_values(1).unwrap()[0];
        let bound = norm(&u[p0..]) * norm(&v) + norm(&u[..p0]) * norm(&v[q0..]);
        assert!(err <= bound * (1.0 + 1e-12), "p0={p0} q0={q0}: {err} > {bound}");
    }
}

#[test]
fn invalid_symbols_are_rejected() {
    let outside = Symbol::Discrete {
        atoms: vec![Atom { zeta: c(1.0, 0.0), m: c(1.0, 0.0) }],
    };
    assert!(outside.validate().is_err());
    assert!(outside.violations().iter().any(|v| v.contains("support on boundary")));
    assert!(assemble(&outside, 3).is_err());
    let circle = Symbol::circle(vec![CircleEntry { r: 1.0, m: c(1.0, 0.0), q: 0, i: 0, q_prime: 0 }]);
    assert!(circle.validate().is_err());
    let ok = Symbol::circle(vec![CircleEntry { r: 0.5, m: c(1.0, 0.0), q: 0, i: 0, q_prime: 0 }]);
    assert!(ok.validate().is_ok());
}

#[test]
fn symbol_json_shape() {
    let s: Symbol = serde_json::from_str(
        r#"{"type":"deriv_delta","terms":[{"zeta":[0.0,0.0],"m":[1.0,0.0],"l":1,"j":2}],"convention":"distribution"}"#,
    )
    .unwrap();
    assert!(s.is_origin_supported());
    let s: Symbol = serde_json::from_str(r#"{"type":"circle","entries":[{"r":0.5,"m":[2.0,0.0]}]}"#).unwrap();
    assert_eq!(s.class_name(), "circle");
    let s: Symbol = serde_json::from_str(r#"{"type":"bounded_radial","profile":{"kind":"indicator","hi":0.7}}"#).unwrap();
    let back: Symbol = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert!(assemble(&s, 5).unwrap().max_abs_diff(&assemble(&back, 5).unwrap()).unwrap() == 0.0);
    assert!(serde_json::from_str::<Symbol>(r#"{"type":"discrete","atoms":[{"zeta":[0.1],"m":[1.0,0.0]}]}"#).is_err());
}

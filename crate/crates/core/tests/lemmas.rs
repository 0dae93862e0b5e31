use subgauss_core::lemmas::gauss::{centered_h_second, gauss_z};
use subgauss_core::lemmas::{
    exp_g3_at_zero, gauss_a, gauss_s, gauss_s_hyperbolic, run_battery, AppendixFunction, ExpFrame, GaussFrame, Suite,
};
use subgauss_core::special::FRAC_1_SQRT_2PI;
use subgauss_core::{Error, Truncated, TruncatedExponential, TruncatedGaussian};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn gauss_f_zeros_and_symmetry() {
    let g = GaussFrame::new(-1.0, 4.0).unwrap();
    assert_eq!(g.f(0.0), 0.0);
    assert!(g.f(2.0 * g.theta0()).abs() < 1e-14);
    for t in [0.3, 1.1, 2.7] {
        assert!((g.f(g.theta0() + t) - g.f(g.theta0() - t)).abs() < 1e-13);
    }
}

#[test]
fn gauss_h_and_derivatives() {
    let g = GaussFrame::new(-1.0, 4.0).unwrap();
    assert!(g.h(g.theta0()).abs() < 1e-15);
    let step = 1e-5;
    let fd = (g.h(0.7 + step) - g.h(0.7 - step)) / (2.0 * step);
    assert!((fd - g.h_prime(0.7)).abs() < 1e-6);
    for d in [0.1, 1.0, 5.0] {
        assert!(g.h_second(g.theta0() + d) < 0.0);
        assert!(g.h_second(g.theta0() - d) > 0.0);
    }
}

#[test]
fn w_c_examples() {
    let g = GaussFrame::new(-2.0, 2.0).unwrap();
    assert!((g.w_c() + 0.113_129_348_225_038_38).abs() < 1e-15);
    let g = GaussFrame::new(-1.0, 4.0).unwrap();
    let proxy = TruncatedGaussian::standard(-1.0, 4.0).unwrap().variance_proxy().variance_proxy;
    assert!((2.0 * g.w_c() + 1.0 - proxy).abs() < 1e-15);
    let step = 1e-6;
    let f_prime = (g.f(step) - g.f(-step)) / (2.0 * step);
    assert!((f_prime - g.p_prime(g.w_c(), 0.0)).abs() < 1e-9);
}

#[test]
fn tangency_identities() {
    let g = GaussFrame::new(-1.0, 4.0).unwrap();
    let (w, t2) = (g.w_c(), 2.0 * g.theta0());
    assert!(g.f(0.0).abs() <= 1e-10 && g.p(w, 0.0).abs() <= 1e-10);
    assert!(g.f(t2).abs() <= 1e-10);
    assert!(g.p(w, t2).abs() <= 1e-10);
    assert!((g.h(0.0) - g.c()).abs() <= 1e-10);
    assert!((g.p_prime(w, 0.0) - g.c()).abs() <= 1e-10);
    assert!((g.h(t2) + g.c()).abs() <= 1e-10);
    assert!((g.p_prime(w, t2) + g.c()).abs() <= 1e-10);
}

#[test]
fn symmetric_second_derivative_match() {
    let g = GaussFrame::new(-1.7, 1.7).unwrap();
    let step = 2e-4;
    let fd = (g.f(step) - 2.0 * g.f(0.0) + g.f(-step)) / (step * step);
    assert!((fd - 2.0 * g.w_c()).abs() < 1e-8);
}

#[test]
fn z_examples() {
    for beta in [1.0, 2.0, 4.0] {
        for theta in [0.2, 1.0, 3.0, 8.0] {
            assert!(gauss_z(beta, theta).unwrap() < 0.0, "({beta}, {theta})");
        }
    }
    let (h2, _) = centered_h_second(2.0, 1.5);
    assert_eq!(gauss_z(2.0, 1.5).unwrap().signum(), h2.signum());
    let a = gauss_z(1.0, 1e-4).unwrap() / 1e-4;
    let b = gauss_z(1.0, 2e-4).unwrap() / 2e-4;
    assert!(a < 0.0 && rel(a, b) < 0.05);
}

#[test]
fn s_examples() {
    for beta in [0.5, 3f64.sqrt(), 2.0, 5.0] {
        for theta in [0.1, 1.0, 3.0, 10.0] {
            assert!(gauss_s(beta, theta).unwrap() > 0.0, "({beta}, {theta})");
        }
    }
    assert!(gauss_s(1.0, 0.0).is_err());
    let (b, t): (f64, f64) = (1.3, 0.8);
    let factor = 2.0 * (FRAC_1_SQRT_2PI * (-(t * t + b * b) / 2.0).exp()).powi(5);
    assert!(rel(gauss_s(b, t).unwrap(), factor * gauss_s_hyperbolic(b, t)) < 1e-10);
    assert!(rel(gauss_a(2.0, 1.2), gauss_s_hyperbolic(2.0, 0.6)) < 1e-12);
}

#[test]
fn appendix_examples() {
    for f in AppendixFunction::ALL {
        assert!(f.eval(1e-8).unwrap().abs() < 1e-20, "{f}");
        for x in [0.1, 1.0, 3.0, 10.0] {
            assert!(f.eval(x).unwrap() > 0.0, "{f}({x})");
        }
        assert!(f.ln_eval(300.0).unwrap().is_finite());
        assert!(f.evaluate(0.0).is_err());
    }
    assert!(rel(AppendixFunction::K.eval(3.0).unwrap(), 5.565_953_598_237_285) < 1e-13);
    assert!(matches!("Q".parse::<AppendixFunction>(), Err(Error::UnknownFunction(_))));
}

#[test]
fn exp_g_and_big_g() {
    let f = ExpFrame::new(1.0, 4.0, 0.81).unwrap();
    assert_eq!(f.g(0.0), 0.0);
    assert!(f.big_g(0.0).abs() < 1e-13);
    let rounded = ExpFrame::new(1.0, 4.0, 0.8107).unwrap();
    assert!(rounded.g(2.0).abs() <= 1e-3);
    let exact = ExpFrame::optimal(1.0, 4.0).unwrap();
    assert!(exact.g(2.0).abs() <= 1e-9);
    let limit = 1f64.exp() - 4f64.exp();
    for t in [-60.0, 60.0] {
        assert!(rel(f.big_g(t), limit) < 1e-12);
    }
    for t in [-3.0, 0.5, 1.0, 2.0, 2.5, 7.0] {
        let (g, big) = (f.g(t), f.big_g(t));
        assert_eq!(g.signum(), big.signum(), "theta {t}");
        let factor = (4f64.exp() - 1f64.exp()) * (-0.5 * 0.81 * 0.81 * t * t).exp();
        assert!((g * factor - big).abs() < 1e-10 * big.abs().max(1.0));
    }
}

#[test]
fn exp_h_and_factorization() {
    let f = ExpFrame::new(1.0, 4.0, 0.81).unwrap();
    assert!(f.h(1.0).abs() < 1e-14);
    let step = 1e-6;
    let fd = (f.big_g(0.4 + step) - f.big_g(0.4 - step)) / (2.0 * step);
    assert!((fd - f.big_g_prime_factored(0.4)).abs() < 1e-6 * fd.abs().max(1.0));
}

#[test]
fn exp_h_third_against_symbolic_derivative() {
    let f = ExpFrame::new(1.0, 4.0, 0.81).unwrap();
    let (s2, m, b, e) = (0.81 * 0.81, f.mean(), 4.0, 3.0);
    let theta: f64 = 0.5;
    // h = Q(theta) exp((theta - 1) e) + quadratic, with Q quadratic
    let q = -s2 * theta * theta + (s2 + b - m) * theta + m - b - 1.0;
    let q1 = -2.0 * s2 * theta + s2 + b - m;
    let q2 = -2.0 * s2;
    let expected = ((theta - 1.0) * e).exp() * (3.0 * e * q2 + 3.0 * e * e * q1 + e.powi(3) * q);
    assert!(rel(f.h_third(theta), expected) < 1e-8);
    let step = 2e-3;
    let fd = (f.h(theta + 2.0 * step) - 2.0 * f.h(theta + step) + 2.0 * f.h(theta - step) - f.h(theta - 2.0 * step))
        / (2.0 * step.powi(3));
    assert!(rel(fd, expected) < 1e-4);
}

#[test]
fn exp_bounds_examples() {
    let f = ExpFrame::optimal(1.0, 4.0).unwrap();
    let b = f.bounds().unwrap();
    assert!(rel(b.s_inf * b.s_inf, 0.503_730_950_481_462_1) < 1e-13);
    assert!(b.s_inf < 0.8107 && 0.8107 <= b.s1 && b.s1 <= b.s2);
    let at_root = f.with_s(b.s1).unwrap();
    let (big_a, big_b, big_c) = at_root.p_coefficients();
    let scale = big_b * big_b + (4.0 * big_a * big_c).abs();
    assert!(at_root.discriminant().abs() <= 1e-8 * scale);
    assert!(rel(f.discriminant(), f.discriminant_in_s2()) < 1e-10);
}

#[test]
fn g3_at_zero_examples() {
    assert!(exp_g3_at_zero(0.0, 1.0).unwrap() > 0.0);
    for eps in [1e-4, 2e-4] {
        let v = exp_g3_at_zero(0.0, eps).unwrap();
        assert!(rel(v / eps.powi(4), 1.0 / 120.0) < 0.01);
    }
    let (alpha, eps) = (1.0, 3.0);
    let d = TruncatedExponential::standard(alpha, alpha + eps).unwrap();
    let f = ExpFrame::new(alpha, alpha + eps, d.variance().unwrap().sqrt()).unwrap();
    let h = 2e-3;
    let fd = (f.g(2.0 * h) - 2.0 * f.g(h) + 2.0 * f.g(-h) - f.g(-2.0 * h)) / (2.0 * h.powi(3));
    assert!((fd - exp_g3_at_zero(alpha, eps).unwrap()).abs() < 1e-4);
    assert!(exp_g3_at_zero(0.0, 0.0).is_err());
}

#[test]
fn full_battery_passes() {
    let checks = run_battery(Suite::All, 200);
    assert!(checks.len() >= 16);
    for c in &checks {
        assert!(c.passed, "{c}");
    }
    let coarse = run_battery(Suite::Exponential, 50);
    assert!(coarse.iter().all(|c| c.passed));
}

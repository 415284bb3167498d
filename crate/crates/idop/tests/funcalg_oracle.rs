//! Axioms of the function algebra checked on random inputs, with an
//! independent floating-point evaluator as numeric oracle for the
//! integration and evaluation operators.

mod common;

use common::*;
use idop::funcalg::{rat, ConstFraction, EvalPoint, ExpPoly};
use num::complex::Complex64;

#[test]
fn derivative_sections_integration() {
    let mut r = rng(101);
    for _ in 0..200 {
        let f = rand_func(&mut r);
        // d/dx of the cumulative integral gives the function back
        assert!(f.cumint().diff().equiv(&f));
        // the cumulative integral is based at 0
        assert!(f.cumint().eval(&EvalPoint::from_int(0)).is_zero());
    }
}

#[test]
fn evaluation_splits_integration_minus_derivative() {
    // E_0 = 1 - cumint o diff
    let mut r = rng(102);
    for _ in 0..200 {
        let f = rand_func(&mut r);
        let e0 = ExpPoly::constant(f.eval(&EvalPoint::from_int(0)));
        let recon = &f.diff().cumint() + &e0;
        assert!(recon.equiv(&f));
    }
}

#[test]
fn baxter_identity() {
    // (int f)(int g) = int(f int g) + int(g int f)
    let mut r = rng(103);
    for _ in 0..200 {
        let f = rand_func(&mut r);
        let g = rand_func(&mut r);
        let lhs = &f.cumint() * &g.cumint();
        let rhs = &(&f * &g.cumint()).cumint() + &(&g * &f.cumint()).cumint();
        assert!(lhs.equiv(&rhs));
    }
}

#[test]
fn leibniz_rule() {
    let mut r = rng(104);
    for _ in 0..200 {
        let f = rand_func(&mut r);
        let g = rand_func(&mut r);
        let lhs = (&f * &g).diff();
        let rhs = &(&f.diff() * &g) + &(&f * &g.diff());
        assert!(lhs.equiv(&rhs));
    }
}

#[test]
fn evaluation_is_multiplicative() {
    let mut r = rng(105);
    let points = [EvalPoint::from_int(0), EvalPoint::one(), EvalPoint::pi()];
    for _ in 0..200 {
        let f = rand_func(&mut r);
        let g = rand_func(&mut r);
        for at in &points {
            let lhs = (&f * &g).eval(at);
            let rhs = &f.eval(at) * &g.eval(at);
            assert!(lhs.equiv(&rhs));
        }
    }
}

#[test]
fn conjugation_is_an_involution() {
    let mut r = rng(106);
    for _ in 0..200 {
        let f = rand_func(&mut r);
        assert!(f.conj().conj().equiv(&f));
        let g = rand_func(&mut r);
        assert!((&f * &g).conj().equiv(&(&f.conj() * &g.conj())));
    }
}

#[test]
fn integration_matches_quadrature() {
    let mut r = rng(107);
    for _ in 0..40 {
        let f = rand_func(&mut r);
        let exact = const_c64(&f.cumint().eval(&EvalPoint::one()));
        let numeric = simpson(|x| func_c64(&f, x), 1.0, 400);
        assert!(
            approx_eq(exact, numeric, 1e-8),
            "quadrature mismatch: exact {exact}, numeric {numeric}"
        );
    }
}

#[test]
fn evaluation_matches_numeric_substitution() {
    let mut r = rng(108);
    let points = [EvalPoint::one(), EvalPoint::pi(), EvalPoint::from_int(2)];
    for _ in 0..40 {
        let f = rand_func(&mut r);
        for at in &points {
            let exact = const_c64(&f.eval(at));
            let numeric = func_c64(&f, point_f64(at));
            assert!(
                approx_eq(exact, numeric, 1e-9),
                "evaluation mismatch at {at:?}"
            );
        }
    }
}

#[test]
fn frozen_integrals() {
    // int_0^1 x e^x dx = 1
    let f = &ExpPoly::x() * &ExpPoly::exp(idop::funcalg::GaussRat::one());
    assert!(f.cumint().eval(&EvalPoint::one()).equiv(&cf_int(1)));
    // int_0^pi sin x dx = 2
    let s = ExpPoly::sin(rat(1, 1));
    assert!(s.cumint().eval(&EvalPoint::pi()).equiv(&cf_int(2)));
    // int_0^1 x^3 dx = 1/4
    let c = ExpPoly::x().pow(3).cumint().eval(&EvalPoint::one());
    assert!(c.equiv(&ConstFraction::from_rat(rat(1, 4))));
    // sin^2 + cos^2 = 1
    let trig = &ExpPoly::sin(rat(2, 1)).pow(2) + &ExpPoly::cos(rat(2, 1)).pow(2);
    assert!(trig.equiv(&ExpPoly::one()));
}

#[test]
fn exact_constants_agree_with_floats() {
    // pi, e, e^pi and Gaussian mixtures evaluate consistently
    let samples = [
        "pi", "exp(1)", "exp(pi)", "pi^2/4", "exp(1/2) - exp(-1/2)",
        "sin(pi/4)", "cos(pi/3)",
    ];
    for s in samples {
        let f = idop::text::parse_function(s).unwrap();
        let c = f.as_constant().unwrap();
        let exact = const_c64(&c);
        let expect = match s {
            "pi" => std::f64::consts::PI,
            "exp(1)" => std::f64::consts::E,
            "exp(pi)" => std::f64::consts::PI.exp(),
            "pi^2/4" => std::f64::consts::PI.powi(2) / 4.0,
            "exp(1/2) - exp(-1/2)" => 0.5f64.exp() - (-0.5f64).exp(),
            "sin(pi/4)" => std::f64::consts::FRAC_PI_4.sin(),
            _ => std::f64::consts::FRAC_PI_3.cos(),
        };
        assert!(approx_eq(exact, Complex64::new(expect, 0.0), 1e-12), "{s}");
    }
}

#![allow(dead_code)]

//! Shared helpers for the integration suites: seeded random generators
//! for functions, operators, and boundary problems, plus an independent
//! floating-point evaluator used to cross-check the exact arithmetic.

use idop::funcalg::{
    rat, rat_int, ConstFraction, ConstValue, EvalPoint, ExpPoly, GaussRat, Rat,
};
use idop::opalg::IntDiffOp;
use num::complex::Complex64;
use num::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// -- random generators ------------------------------------------------------

pub fn small_rat(r: &mut ChaCha8Rng) -> Rat {
    rat(r.gen_range(-3..=3), r.gen_range(1..=2))
}

pub fn small_nonzero_rat(r: &mut ChaCha8Rng) -> Rat {
    loop {
        let q = small_rat(r);
        if !num::Zero::is_zero(&q) {
            return q;
        }
    }
}

pub fn small_gauss(r: &mut ChaCha8Rng) -> GaussRat {
    if r.gen_bool(0.25) {
        GaussRat::new(small_rat(r), small_rat(r))
    } else {
        GaussRat::new(small_rat(r), Rat::from_integer(0.into()))
    }
}

/// A random exponential polynomial with 1-2 small terms.
pub fn rand_func(r: &mut ChaCha8Rng) -> ExpPoly {
    let mut f = ExpPoly::zero();
    let n = r.gen_range(1..=2);
    for _ in 0..n {
        let pow = r.gen_range(0..=2u32);
        let alpha = if r.gen_bool(0.5) {
            GaussRat::zero()
        } else {
            GaussRat::from_int(r.gen_range(-2..=2))
        };
        let c = ConstFraction::from_rat(small_nonzero_rat(r));
        let term = ExpPoly::x().pow(pow).scale(&c);
        let term = if alpha.is_zero() {
            term
        } else {
            &term * &ExpPoly::exp(alpha)
        };
        f = &f + &term;
    }
    if f.is_zero() {
        ExpPoly::one()
    } else {
        f
    }
}

/// A random real exponential polynomial (real exponents only).
pub fn rand_real_func(r: &mut ChaCha8Rng) -> ExpPoly {
    loop {
        let f = rand_func(r);
        if f.terms().keys().all(|k| k.alpha.is_real()) && !f.is_zero() {
            return f;
        }
    }
}

pub fn rand_point(r: &mut ChaCha8Rng) -> EvalPoint {
    if r.gen_bool(0.5) {
        EvalPoint::from_int(0)
    } else {
        EvalPoint::one()
    }
}

/// One of the five primitive operators.
pub fn rand_primitive(r: &mut ChaCha8Rng) -> IntDiffOp {
    match r.gen_range(0..5) {
        0 => IntDiffOp::der(),
        1 => IntDiffOp::integral(),
        2 => IntDiffOp::evaluation(rand_point(r)),
        3 => IntDiffOp::multiplication(rand_func(r)),
        _ => IntDiffOp::multiplication(ExpPoly::x()),
    }
}

/// A random operator: a short sum of short products of primitives.
pub fn rand_op(r: &mut ChaCha8Rng) -> IntDiffOp {
    let mut sum = IntDiffOp::zero();
    for _ in 0..r.gen_range(1..=2) {
        let mut prod = IntDiffOp::one();
        for _ in 0..r.gen_range(1..=3) {
            prod = &prod * &rand_primitive(r);
        }
        sum = &sum + &prod;
    }
    sum
}

/// A random monic constant-coefficient differential operator with small
/// integer roots, as a product of `D - r` factors.
pub fn rand_monic_diffop(r: &mut ChaCha8Rng, order: usize) -> IntDiffOp {
    let mut t = IntDiffOp::one();
    for _ in 0..order {
        let root = ExpPoly::from_int(r.gen_range(-2..=2));
        let factor = &IntDiffOp::der() - &IntDiffOp::multiplication(root);
        t = &t * &factor;
    }
    t
}

/// A random two-point Stieltjes condition at the points 0 and 1.
pub fn rand_condition(r: &mut ChaCha8Rng, max_order: usize) -> IntDiffOp {
    let mut c = IntDiffOp::zero();
    for _ in 0..r.gen_range(1..=2) {
        let at = rand_point(r);
        let e = IntDiffOp::evaluation(at);
        let term = match r.gen_range(0..4) {
            0 => e,
            1 => &e * &IntDiffOp::der().pow(r.gen_range(1..=max_order.max(1))),
            2 => &e * &IntDiffOp::integral(),
            _ => &(&e * &IntDiffOp::integral()) * &IntDiffOp::multiplication(ExpPoly::x()),
        };
        let coeff = ConstFraction::from_rat(small_nonzero_rat(r));
        c = &c + &term.scale(&coeff);
    }
    if c.is_zero() || !c.is_bound_op() {
        IntDiffOp::evaluation(EvalPoint::from_int(0))
    } else {
        c
    }
}

// -- numeric cross-checking -------------------------------------------------

pub fn rat_f64(q: &Rat) -> f64 {
    q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap()
}

pub fn gauss_c64(g: &GaussRat) -> Complex64 {
    Complex64::new(rat_f64(&g.re), rat_f64(&g.im))
}

/// Numeric value of an exact constant.
pub fn const_value_c64(v: &ConstValue) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (key, cyc) in v.terms() {
        let mut c = Complex64::new(0.0, 0.0);
        for (angle, q) in cyc.terms() {
            let theta = 2.0 * std::f64::consts::PI * rat_f64(angle);
            c += rat_f64(q) * Complex64::new(0.0, theta).exp();
        }
        c *= std::f64::consts::PI.powi(key.pi_pow as i32);
        c *= gauss_c64(&key.exp_arg).exp();
        c *= (std::f64::consts::PI * rat_f64(&key.e_pi_pow)).exp();
        s += c;
    }
    s
}

pub fn const_c64(c: &ConstFraction) -> Complex64 {
    const_value_c64(c.num()) / const_value_c64(c.den())
}

/// Numeric value of a function at a real point.
pub fn func_c64(f: &ExpPoly, x: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (k, c) in f.terms() {
        s += const_c64(c) * x.powi(k.pow as i32) * (gauss_c64(&k.alpha) * x).exp();
    }
    s
}

pub fn point_f64(at: &EvalPoint) -> f64 {
    rat_f64(&at.rat) + rat_f64(&at.pi_mult) * std::f64::consts::PI
}

/// Composite Simpson quadrature of a complex-valued integrand on [0, b].
pub fn simpson(f: impl Fn(f64) -> Complex64, b: f64, panels: usize) -> Complex64 {
    let n = 2 * panels;
    let h = b / n as f64;
    let mut s = f(0.0) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(k as f64 * h);
    }
    s * h / 3.0
}

pub fn approx_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

pub fn cf_int(n: i64) -> ConstFraction {
    ConstFraction::from_rat(rat_int(n))
}

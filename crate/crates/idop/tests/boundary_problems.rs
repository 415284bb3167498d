//! Solver identities on randomized regular boundary problems: the
//! Green's operator inverts the differential operator, annihilates the
//! conditions, composes contravariantly, and agrees with its extracted
//! integral kernel.

mod common;

use common::*;
use idop::boundary::{
    self, compose, factor_diffop, factor_problem, greens_function, span_equal,
    BoundaryProblem,
};
use idop::funcalg::{EvalPoint, ExpPoly};
use idop::opalg::IntDiffOp;

/// Draws regular problems of the given order until one is found.
fn rand_regular(
    r: &mut rand_chacha::ChaCha8Rng,
    order: usize,
) -> BoundaryProblem {
    loop {
        let t = rand_monic_diffop(r, order);
        let conds: Vec<_> = (0..order).map(|_| rand_condition(r, order - 1)).collect();
        let Ok(p) = BoundaryProblem::new(t, conds) else {
            continue;
        };
        if p.is_regular().unwrap_or(false) {
            return p;
        }
    }
}

#[test]
fn greens_operator_inverts_and_annihilates() {
    let mut r = rng(301);
    for _ in 0..200 {
        let p = rand_regular(&mut r, 2);
        let g = p.greens_operator().unwrap();
        assert!((p.operator() * &g).equiv(&IntDiffOp::one()));
        for c in p.conditions() {
            assert!((c * &g).is_zero());
        }
    }
}

#[test]
fn greens_after_operator_is_complementary_projection() {
    let mut r = rng(302);
    for _ in 0..60 {
        let p = rand_regular(&mut r, 2);
        let g = p.greens_operator().unwrap();
        let proj = p.kernel_projector().unwrap();
        assert!((&proj * &proj).equiv(&proj));
        let f = rand_real_func(&mut r);
        let lhs = g.apply(&p.operator().apply(&f));
        let rhs = &f - &proj.apply(&f);
        assert!(lhs.equiv(&rhs));
    }
}

#[test]
fn composition_reverses_greens_operators() {
    let mut r = rng(303);
    for _ in 0..50 {
        let p1 = rand_regular(&mut r, 1);
        let p2 = rand_regular(&mut r, 1);
        let c = compose(&p1, &p2).unwrap();
        if !c.is_regular().unwrap() {
            continue;
        }
        let g = c.greens_operator().unwrap();
        let g1 = p1.greens_operator().unwrap();
        let g2 = p2.greens_operator().unwrap();
        assert!(g.equiv(&(&g2 * &g1)));
    }
}

#[test]
fn factorization_composes_back() {
    let mut r = rng(304);
    let mut done = 0;
    while done < 40 {
        let p = rand_regular(&mut r, 2);
        let Ok(factors) = factor_diffop(p.operator()) else {
            continue;
        };
        if factors.len() < 2 {
            continue;
        }
        let t2 = factors.last().unwrap().clone();
        let mut t1 = IntDiffOp::one();
        for f in &factors[..factors.len() - 1] {
            t1 = &t1 * f;
        }
        let (f1, f2) = factor_problem(&p, &t1, &t2).unwrap();
        assert!(f1.is_regular().unwrap());
        assert!(f2.is_regular().unwrap());
        let back = compose(&f1, &f2).unwrap();
        assert!(span_equal(back.conditions(), p.conditions()).unwrap());
        assert!(back.operator().equiv(p.operator()));
        let g = p.greens_operator().unwrap();
        let prod = &f2.greens_operator().unwrap() * &f1.greens_operator().unwrap();
        assert!(g.equiv(&prod));
        done += 1;
    }
}

#[test]
fn greens_function_agrees_with_operator() {
    let mut r = rng(305);
    let p = BoundaryProblem::new(
        IntDiffOp::der().pow(2),
        vec![
            IntDiffOp::evaluation(EvalPoint::from_int(0)),
            IntDiffOp::evaluation(EvalPoint::one()),
        ],
    )
    .unwrap();
    let g = p.greens_operator().unwrap();
    let gf = greens_function(&p, &EvalPoint::one()).unwrap();
    for _ in 0..20 {
        let f = rand_real_func(&mut r);
        assert!(gf.apply(&f).equiv(&g.apply(&f)));
    }
    // branches evaluated on the diagonal coincide
    assert!(gf.lower.on_diagonal().equiv(&gf.upper.on_diagonal()));
}

#[test]
fn greens_function_on_random_second_order_problems() {
    let mut r = rng(306);
    let mut done = 0;
    while done < 30 {
        let t = rand_monic_diffop(&mut r, 2);
        let p = match BoundaryProblem::new(
            t,
            vec![
                IntDiffOp::evaluation(EvalPoint::from_int(0)),
                IntDiffOp::evaluation(EvalPoint::one()),
            ],
        ) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if !p.is_regular().unwrap_or(false) {
            continue;
        }
        let g = p.greens_operator().unwrap();
        let Ok(gf) = greens_function(&p, &EvalPoint::one()) else {
            continue;
        };
        let f = rand_real_func(&mut r);
        assert!(gf.apply(&f).equiv(&g.apply(&f)));
        done += 1;
    }
}

#[test]
fn fundamental_system_spans_the_kernel() {
    let mut r = rng(307);
    for _ in 0..60 {
        let order = r.next_u32() as usize % 3 + 1;
        let t = rand_monic_diffop(&mut r, order);
        let fs = boundary::fundamental_system(&t).unwrap();
        assert_eq!(fs.basis.len(), order);
        for u in &fs.basis {
            assert!(t.apply(u).is_zero());
        }
        let tb = boundary::fundamental_right_inverse(&fs);
        assert!((&t * &tb).equiv(&IntDiffOp::one()));
    }
}

#[test]
fn non_two_point_extraction_is_rejected() {
    let p = BoundaryProblem::new(
        IntDiffOp::der().pow(2),
        vec![
            IntDiffOp::evaluation(EvalPoint::from_int(0)),
            IntDiffOp::evaluation(EvalPoint::from_int(2)),
        ],
    )
    .unwrap();
    assert!(matches!(
        greens_function(&p, &EvalPoint::one()),
        Err(idop::Error::NotTwoPoint)
    ));
}

use rand::RngCore;

#[test]
fn user_supplied_fundamental_system() {
    // D^2 with the basis {1, x} given explicitly
    let t = IntDiffOp::der().pow(2);
    let fs =
        boundary::user_fundamental_system(&t, vec![ExpPoly::one(), ExpPoly::x()]).unwrap();
    let tb = boundary::fundamental_right_inverse(&fs);
    assert!((&t * &tb).equiv(&IntDiffOp::one()));
    // a non-kernel basis is rejected
    assert!(boundary::user_fundamental_system(&t, vec![ExpPoly::one(), ExpPoly::x().pow(2)])
        .is_err());
}

//! The algebra of integro-differential operators over exponential
//! polynomials, kept permanently in normal form: a differential part
//! `sum f_i D^i`, an integral part `sum f A g` (A the cumulative integral
//! from 0, `g` a monic basis monomial), and a boundary part grouping, per
//! evaluation point `c`, local terms `f E[c] D^i` and global terms
//! `f E[c] A h`. Multiplication composes normal forms directly; a separate
//! rewriting engine provides an independent cross-check.

use crate::funcalg::{ConstFraction, EvalPoint, ExpPoly, FnKey};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicBool, Ordering};

/// When set, every product is re-derived through the rewriting engine
/// and compared; a mismatch aborts with a diagnostic.
static ORACLE_CHECK: AtomicBool = AtomicBool::new(false);

pub fn set_oracle_check(on: bool) {
    ORACLE_CHECK.store(on, Ordering::SeqCst);
}

/// Boundary-part terms attached to one evaluation point.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct BoundAt {
    /// `f E[c] D^i`, keyed by derivative order.
    pub local: BTreeMap<usize, ExpPoly>,
    /// `f E[c] A h`, keyed by the monic monomial `h`.
    pub global: BTreeMap<FnKey, ExpPoly>,
}

impl BoundAt {
    pub fn is_empty(&self) -> bool {
        self.local.is_empty() && self.global.is_empty()
    }
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct IntDiffOp {
    diff: Vec<ExpPoly>,
    int: BTreeMap<FnKey, ExpPoly>,
    bound: BTreeMap<EvalPoint, BoundAt>,
}

impl IntDiffOp {
    pub fn zero() -> Self {
        IntDiffOp::default()
    }

    pub fn one() -> Self {
        IntDiffOp::multiplication(ExpPoly::one())
    }

    /// The derivation `D`.
    pub fn der() -> Self {
        let mut op = IntDiffOp::zero();
        op.add_diff(ExpPoly::one(), 1);
        op
    }

    /// The integral `A = int_0^x`.
    pub fn integral() -> Self {
        let mut op = IntDiffOp::zero();
        op.add_int(ExpPoly::one(), &ExpPoly::one());
        op
    }

    /// The evaluation `E[c]`.
    pub fn evaluation(at: EvalPoint) -> Self {
        let mut op = IntDiffOp::zero();
        op.add_local(ExpPoly::one(), &at, 0);
        op
    }

    /// The multiplication operator `u -> f * u`.
    pub fn multiplication(f: ExpPoly) -> Self {
        let mut op = IntDiffOp::zero();
        op.add_diff(f, 0);
        op
    }

    pub fn from_int(n: i64) -> Self {
        IntDiffOp::multiplication(ExpPoly::from_int(n))
    }

    /// A plain differential operator from its coefficient list
    /// (derivative order = index).
    pub fn from_diff_coeffs(coeffs: Vec<ExpPoly>) -> Self {
        let mut op = IntDiffOp::zero();
        for (i, f) in coeffs.into_iter().enumerate() {
            op.add_diff(f, i);
        }
        op
    }

    pub fn add_diff(&mut self, f: ExpPoly, ord: usize) {
        if f.is_zero() {
            return;
        }
        while self.diff.len() <= ord {
            self.diff.push(ExpPoly::zero());
        }
        self.diff[ord] = &self.diff[ord] + &f;
        while self.diff.last().map_or(false, |c| c.is_zero()) {
            self.diff.pop();
        }
    }

    /// Adds `f A g`, splitting `g` into monic monomials.
    pub fn add_int(&mut self, f: ExpPoly, g: &ExpPoly) {
        if f.is_zero() {
            return;
        }
        for (key, c) in g.terms() {
            let entry = self.int.entry(key.clone()).or_insert_with(ExpPoly::zero);
            *entry = &*entry + &f.scale(c);
            if entry.is_zero() {
                self.int.remove(key);
            }
        }
    }

    pub fn add_local(&mut self, f: ExpPoly, at: &EvalPoint, ord: usize) {
        if f.is_zero() {
            return;
        }
        let slot = self.bound.entry(at.clone()).or_default();
        let entry = slot.local.entry(ord).or_insert_with(ExpPoly::zero);
        *entry = &*entry + &f;
        if entry.is_zero() {
            slot.local.remove(&ord);
        }
        if slot.is_empty() {
            self.bound.remove(at);
        }
    }

    /// Adds `f E[c] A h`. A global term at 0 is dropped: the cumulative
    /// integral vanishes there.
    pub fn add_global(&mut self, f: ExpPoly, at: &EvalPoint, h: &ExpPoly) {
        if f.is_zero() || at.is_zero() {
            return;
        }
        let slot = self.bound.entry(at.clone()).or_default();
        for (key, c) in h.terms() {
            let entry = slot.global.entry(key.clone()).or_insert_with(ExpPoly::zero);
            *entry = &*entry + &f.scale(c);
            if entry.is_zero() {
                slot.global.remove(key);
            }
        }
        if slot.is_empty() {
            self.bound.remove(at);
        }
    }

    pub fn diff_part(&self) -> &[ExpPoly] {
        &self.diff
    }

    pub fn int_part(&self) -> &BTreeMap<FnKey, ExpPoly> {
        &self.int
    }

    pub fn bound_part(&self) -> &BTreeMap<EvalPoint, BoundAt> {
        &self.bound
    }

    pub fn is_zero(&self) -> bool {
        self.diff.is_empty() && self.int.is_empty() && self.bound.is_empty()
    }

    /// Exact operator equality via the normalized difference.
    pub fn equiv(&self, rhs: &IntDiffOp) -> bool {
        (self - rhs).is_zero()
    }

    /// True for a plain differential operator.
    pub fn is_diff_op(&self) -> bool {
        self.int.is_empty() && self.bound.is_empty()
    }

    /// True for a pure boundary operator (finite combination of local and
    /// global evaluation terms).
    pub fn is_bound_op(&self) -> bool {
        self.diff.is_empty() && self.int.is_empty()
    }

    /// Order of the differential part; `None` if it is absent.
    pub fn diff_order(&self) -> Option<usize> {
        self.diff.len().checked_sub(1)
    }

    pub fn scale(&self, c: &ConstFraction) -> IntDiffOp {
        let mut out = IntDiffOp::zero();
        for (i, f) in self.diff.iter().enumerate() {
            out.add_diff(f.scale(c), i);
        }
        for (g, f) in &self.int {
            out.add_int(f.scale(c), &g.to_poly());
        }
        for (at, ba) in &self.bound {
            for (i, f) in &ba.local {
                out.add_local(f.scale(c), at, *i);
            }
            for (h, f) in &ba.global {
                out.add_global(f.scale(c), at, &h.to_poly());
            }
        }
        out
    }

    /// Applies the operator to a function.
    pub fn apply(&self, u: &ExpPoly) -> ExpPoly {
        let mut res = ExpPoly::zero();
        for (i, f) in self.diff.iter().enumerate() {
            res = &res + &(f * &u.diff_n(i));
        }
        for (g, f) in &self.int {
            res = &res + &(f * &(&g.to_poly() * u).cumint());
        }
        for (at, ba) in &self.bound {
            for (i, f) in &ba.local {
                res = &res + &f.scale(&u.diff_n(*i).eval(at));
            }
            for (h, f) in &ba.global {
                res = &res + &f.scale(&(&h.to_poly() * u).cumint().eval(at));
            }
        }
        res
    }

    /// Composition `self o rhs`, computed directly on normal forms: each
    /// primitive term of the left factor is pushed through the right
    /// factor with the helper compositions below.
    pub fn mul(&self, rhs: &IntDiffOp) -> IntDiffOp {
        let mut out = IntDiffOp::zero();
        for (i, f) in self.diff.iter().enumerate() {
            out = &out + &func_compose(f, &d_pow_compose(rhs, i));
        }
        for (g, f) in &self.int {
            out = &out + &func_compose(f, &int_compose(&g.to_poly(), rhs));
        }
        for (at, ba) in &self.bound {
            for (i, f) in &ba.local {
                out = &out + &func_compose(f, &char_compose(at, &d_pow_compose(rhs, *i)));
            }
            for (h, f) in &ba.global {
                out = &out + &func_compose(f, &char_compose(at, &int_compose(&h.to_poly(), rhs)));
            }
        }
        if ORACLE_CHECK.load(Ordering::SeqCst) {
            let reference = crate::rewrite::oracle_multiply(self, rhs);
            assert!(
                out.equiv(&reference),
                "direct product disagrees with the rewrite oracle"
            );
        }
        out
    }

    pub fn pow(&self, n: usize) -> IntDiffOp {
        let mut acc = IntDiffOp::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Left multiplication of every leading coefficient by a function.
fn func_compose(f: &ExpPoly, op: &IntDiffOp) -> IntDiffOp {
    let mut out = IntDiffOp::zero();
    for (i, u) in op.diff.iter().enumerate() {
        out.add_diff(f * u, i);
    }
    for (g, u) in &op.int {
        out.add_int(f * u, &g.to_poly());
    }
    for (at, ba) in &op.bound {
        for (i, u) in &ba.local {
            out.add_local(f * u, at, *i);
        }
        for (h, u) in &ba.global {
            out.add_global(f * u, at, &h.to_poly());
        }
    }
    out
}

/// `D o op`: Leibniz on leading coefficients; `D A = 1` collapses an
/// integral term to its kernel function; evaluations are constants, so
/// only their coefficients are differentiated (and `D E[c] = 0` when the
/// coefficient is constant).
fn d_compose(op: &IntDiffOp) -> IntDiffOp {
    let mut out = IntDiffOp::zero();
    for (i, f) in op.diff.iter().enumerate() {
        out.add_diff(f.clone(), i + 1);
        out.add_diff(f.diff(), i);
    }
    for (g, f) in &op.int {
        out.add_diff(f * &g.to_poly(), 0);
        out.add_int(f.diff(), &g.to_poly());
    }
    for (at, ba) in &op.bound {
        for (i, f) in &ba.local {
            out.add_local(f.diff(), at, *i);
        }
        for (h, f) in &ba.global {
            out.add_global(f.diff(), at, &h.to_poly());
        }
    }
    out
}

fn d_pow_compose(op: &IntDiffOp, n: usize) -> IntDiffOp {
    let mut out = op.clone();
    for _ in 0..n {
        out = d_compose(&out);
    }
    out
}

/// `E[c] o op`: evaluation is a multiplicative functional, so every
/// leading coefficient collapses to its value at `c` and the operator
/// shape becomes purely boundary.
fn char_compose(at: &EvalPoint, op: &IntDiffOp) -> IntDiffOp {
    let mut out = IntDiffOp::zero();
    for (i, f) in op.diff.iter().enumerate() {
        out.add_local(ExpPoly::constant(f.eval(at)), at, i);
    }
    for (g, f) in &op.int {
        out.add_global(ExpPoly::constant(f.eval(at)), at, &g.to_poly());
    }
    for (at2, ba) in &op.bound {
        for (i, f) in &ba.local {
            out.add_local(ExpPoly::constant(f.eval(at)), at2, *i);
        }
        for (h, f) in &ba.global {
            out.add_global(ExpPoly::constant(f.eval(at)), at2, &h.to_poly());
        }
    }
    out
}

/// `(1 A u) o D^j`, by the partial-integration rule
/// `(A v) D = v - A v' - v(0) E[0]` applied recursively.
fn int_diff_tail(v: &ExpPoly, j: usize) -> IntDiffOp {
    if j == 0 {
        let mut out = IntDiffOp::zero();
        out.add_int(ExpPoly::one(), v);
        return out;
    }
    let mut out = IntDiffOp::zero();
    out.add_diff(v.clone(), j - 1);
    out = &out - &int_diff_tail(&v.diff(), j - 1);
    let v0 = v.eval(&EvalPoint::zero());
    out.add_local(ExpPoly::constant(-&v0), &EvalPoint::zero(), j - 1);
    out
}

/// `(1 A u) o op`. Differential terms go through `int_diff_tail`; an
/// integral term uses integration by parts,
/// `A(uh * Am) = (A uh) A m - A((A uh) * m)`; boundary terms produce
/// constants, so integration reduces to the cumulative integral of the
/// coefficient.
fn int_compose(u: &ExpPoly, op: &IntDiffOp) -> IntDiffOp {
    let mut out = IntDiffOp::zero();
    for (j, h) in op.diff.iter().enumerate() {
        if !h.is_zero() {
            out = &out + &int_diff_tail(&(u * h), j);
        }
    }
    for (m, h) in &op.int {
        let f = (u * h).cumint();
        out.add_int(f.clone(), &m.to_poly());
        out.add_int(-ExpPoly::one(), &(&f * &m.to_poly()));
    }
    for (at, ba) in &op.bound {
        for (j, h) in &ba.local {
            out.add_local((u * h).cumint(), at, *j);
        }
        for (m, h) in &ba.global {
            out.add_global((u * h).cumint(), at, &m.to_poly());
        }
    }
    out
}

impl Add for &IntDiffOp {
    type Output = IntDiffOp;
    fn add(self, rhs: &IntDiffOp) -> IntDiffOp {
        let mut out = self.clone();
        for (i, f) in rhs.diff.iter().enumerate() {
            out.add_diff(f.clone(), i);
        }
        for (g, f) in &rhs.int {
            out.add_int(f.clone(), &g.to_poly());
        }
        for (at, ba) in &rhs.bound {
            for (i, f) in &ba.local {
                out.add_local(f.clone(), at, *i);
            }
            for (h, f) in &ba.global {
                out.add_global(f.clone(), at, &h.to_poly());
            }
        }
        out
    }
}

impl Neg for &IntDiffOp {
    type Output = IntDiffOp;
    fn neg(self) -> IntDiffOp {
        self.scale(&ConstFraction::from_int(-1))
    }
}

impl Sub for &IntDiffOp {
    type Output = IntDiffOp;
    fn sub(self, rhs: &IntDiffOp) -> IntDiffOp {
        self + &(-rhs)
    }
}

impl Mul for &IntDiffOp {
    type Output = IntDiffOp;
    fn mul(self, rhs: &IntDiffOp) -> IntDiffOp {
        IntDiffOp::mul(self, rhs)
    }
}

macro_rules! forward_owned_op {
    ($trait:ident, $method:ident) => {
        impl $trait for IntDiffOp {
            type Output = IntDiffOp;
            fn $method(self, rhs: IntDiffOp) -> IntDiffOp {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_op!(Add, add);
forward_owned_op!(Sub, sub);
forward_owned_op!(Mul, mul);

impl Neg for IntDiffOp {
    type Output = IntDiffOp;
    fn neg(self) -> IntDiffOp {
        -&self
    }
}

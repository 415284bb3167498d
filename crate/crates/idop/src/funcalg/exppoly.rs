//! Exponential polynomials `sum c * x^k * e^(alpha x)` with constant
//! fraction coefficients: the computable function algebra closed under
//! multiplication, derivation, cumulative integration and evaluation.

use super::constant::{ConstFraction, ConstValue};
use super::gauss::{GaussRat, Rat};
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Monic basis monomial `x^pow * e^(alpha x)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FnKey {
    pub pow: u32,
    pub alpha: GaussRat,
}

impl FnKey {
    pub fn one() -> Self {
        FnKey {
            pow: 0,
            alpha: GaussRat::zero(),
        }
    }

    pub fn x_pow(k: u32) -> Self {
        FnKey {
            pow: k,
            alpha: GaussRat::zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.pow == 0 && self.alpha.is_zero()
    }

    pub fn to_poly(&self) -> ExpPoly {
        ExpPoly::monomial(self.clone(), ConstFraction::one())
    }
}

/// Evaluation point `rat + pi_mult * pi` on the real line.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct EvalPoint {
    pub rat: Rat,
    pub pi_mult: Rat,
}

impl EvalPoint {
    pub fn zero() -> Self {
        EvalPoint {
            rat: Rat::zero(),
            pi_mult: Rat::zero(),
        }
    }

    pub fn one() -> Self {
        EvalPoint::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        EvalPoint {
            rat: Rat::from_integer(BigInt::from(n)),
            pi_mult: Rat::zero(),
        }
    }

    pub fn pi() -> Self {
        EvalPoint {
            rat: Rat::zero(),
            pi_mult: Rat::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.pi_mult.is_zero()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ExpPoly {
    terms: BTreeMap<FnKey, ConstFraction>,
}

fn binomial(n: u32, k: u32) -> Rat {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    Rat::new(num, den)
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        ExpPoly::constant(ConstFraction::one())
    }

    pub fn x() -> Self {
        ExpPoly::monomial(FnKey::x_pow(1), ConstFraction::one())
    }

    pub fn constant(c: ConstFraction) -> Self {
        ExpPoly::monomial(FnKey::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        ExpPoly::constant(ConstFraction::from_int(n))
    }

    pub fn monomial(key: FnKey, coeff: ConstFraction) -> Self {
        let mut p = ExpPoly::zero();
        p.add_term(key, coeff);
        p
    }

    /// `e^(alpha x)` for a Gaussian-rational exponent.
    pub fn exp(alpha: GaussRat) -> Self {
        ExpPoly::monomial(FnKey { pow: 0, alpha }, ConstFraction::one())
    }

    /// `sin(b x)` as `(e^(ibx) - e^(-ibx)) / (2i)`.
    pub fn sin(b: Rat) -> Self {
        let ib = GaussRat::new(Rat::zero(), b);
        let c = ConstFraction::from_gauss(&GaussRat::new(Rat::zero(), -Rat::new(
            BigInt::one(),
            BigInt::from(2),
        )));
        let mut p = ExpPoly::zero();
        p.add_term(
            FnKey {
                pow: 0,
                alpha: ib.clone(),
            },
            c.clone(),
        );
        p.add_term(FnKey { pow: 0, alpha: -ib }, -c);
        p
    }

    /// `cos(b x)` as `(e^(ibx) + e^(-ibx)) / 2`.
    pub fn cos(b: Rat) -> Self {
        let ib = GaussRat::new(Rat::zero(), b);
        let half = ConstFraction::from_rat(Rat::new(BigInt::one(), BigInt::from(2)));
        let mut p = ExpPoly::zero();
        p.add_term(
            FnKey {
                pow: 0,
                alpha: ib.clone(),
            },
            half.clone(),
        );
        p.add_term(FnKey { pow: 0, alpha: -ib }, half);
        p
    }

    fn add_term(&mut self, key: FnKey, coeff: ConstFraction) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = &*c + &coeff;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<FnKey, ConstFraction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map_or(false, |c| c.is_one())
    }

    /// Exact equality via the normalized difference.
    pub fn equiv(&self, rhs: &ExpPoly) -> bool {
        (self - rhs).is_zero()
    }

    /// Returns the coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<ConstFraction> {
        if self.is_zero() {
            return Some(ConstFraction::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        k.is_one().then(|| c.clone())
    }

    /// Single-term polynomial view, if applicable.
    pub fn single_term(&self) -> Option<(&FnKey, &ConstFraction)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// An exponential polynomial is invertible iff it is `c * e^(alpha x)`.
    pub fn is_invertible(&self) -> bool {
        self.single_term().map_or(false, |(k, _)| k.pow == 0)
    }

    /// Division by an invertible monomial `c * e^(alpha x)`.
    pub fn div_invertible(&self, den: &ExpPoly) -> ExpPoly {
        let (k, c) = den
            .single_term()
            .filter(|(k, _)| k.pow == 0)
            .expect("denominator is not an invertible exponential monomial");
        let inv = c.inv();
        let mut out = ExpPoly::zero();
        for (key, coeff) in &self.terms {
            out.add_term(
                FnKey {
                    pow: key.pow,
                    alpha: &key.alpha - &k.alpha,
                },
                coeff * &inv,
            );
        }
        out
    }

    pub fn scale(&self, c: &ConstFraction) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> ExpPoly {
        let mut acc = ExpPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Termwise derivative.
    pub fn diff(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k, c) in &self.terms {
            if k.pow > 0 {
                out.add_term(
                    FnKey {
                        pow: k.pow - 1,
                        alpha: k.alpha.clone(),
                    },
                    c.scale_rat(&Rat::from_integer(BigInt::from(k.pow))),
                );
            }
            if !k.alpha.is_zero() {
                out.add_term(k.clone(), c.scale_gauss(&k.alpha));
            }
        }
        out
    }

    pub fn diff_n(&self, n: usize) -> ExpPoly {
        let mut f = self.clone();
        for _ in 0..n {
            f = f.diff();
        }
        f
    }

    /// Cumulative integral from 0: the unique antiderivative `F` with
    /// `F(0) = 0`. Uses the closed recursion
    /// `int x^k e^(ax) = (1/a) x^k e^(ax) - (k/a) int x^(k-1) e^(ax)`.
    pub fn cumint(&self) -> ExpPoly {
        let mut anti = ExpPoly::zero();
        for (k, c) in &self.terms {
            if k.alpha.is_zero() {
                anti.add_term(
                    FnKey::x_pow(k.pow + 1),
                    c.scale_rat(&Rat::new(BigInt::one(), BigInt::from(k.pow + 1))),
                );
            } else {
                let inv_a = k.alpha.inv();
                let mut coeff = c.scale_gauss(&inv_a);
                let mut pow = k.pow;
                loop {
                    anti.add_term(
                        FnKey {
                            pow,
                            alpha: k.alpha.clone(),
                        },
                        coeff.clone(),
                    );
                    if pow == 0 {
                        break;
                    }
                    let factor = -(&inv_a.scale(&Rat::from_integer(BigInt::from(pow))));
                    coeff = coeff.scale_gauss(&factor);
                    pow -= 1;
                }
            }
        }
        let at_zero = anti.eval(&EvalPoint::zero());
        &anti - &ExpPoly::constant(at_zero)
    }

    /// Evaluation at `c = q + p*pi`; a multiplicative linear functional.
    pub fn eval(&self, at: &EvalPoint) -> ConstFraction {
        let q = &at.rat;
        let p = &at.pi_mult;
        let mut acc = ConstFraction::zero();
        for (k, c) in &self.terms {
            // (q + p*pi)^pow expanded into pi powers
            let mut point_pow = ConstValue::zero();
            for j in 0..=k.pow {
                let coeff = binomial(k.pow, j)
                    * num::pow::pow(q.clone(), (k.pow - j) as usize)
                    * num::pow::pow(p.clone(), j as usize);
                if coeff.is_zero() {
                    continue;
                }
                let mut pi_term = ConstValue::from_rat(coeff);
                for _ in 0..j {
                    pi_term = &pi_term * &ConstValue::pi();
                }
                point_pow = &point_pow + &pi_term;
            }
            // e^(alpha*(q + p*pi))
            let exp_part = ConstValue::exponential(&k.alpha.scale(q), &k.alpha.scale(p));
            let term = ConstFraction::from_value(&point_pow * &exp_part);
            acc = &acc + &(c * &term);
        }
        acc
    }

    /// The conjugate function; real functions are fixed points.
    pub fn conj(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k, c) in &self.terms {
            let cc = ConstFraction::new(conj_value(c.num()), conj_value(c.den()));
            out.add_term(
                FnKey {
                    pow: k.pow,
                    alpha: k.alpha.conj(),
                },
                cc,
            );
        }
        out
    }
}

fn conj_value(v: &ConstValue) -> ConstValue {
    let mut out = ConstValue::zero();
    for (k, c) in v.terms() {
        let mut term = ConstValue::exponential(
            &k.exp_arg.conj(),
            &GaussRat::from_rat(k.e_pi_pow.clone()),
        )
        .scale_cyc(&c.conj());
        for _ in 0..k.pi_pow {
            term = &term * &ConstValue::pi();
        }
        out = &out + &term;
    }
    out
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), -c.clone()))
            .collect();
        ExpPoly { terms }
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(
                    FnKey {
                        pow: k1.pow + k2.pow,
                        alpha: &k1.alpha + &k2.alpha,
                    },
                    c1 * c2,
                );
            }
        }
        out
    }
}

macro_rules! forward_owned_poly {
    ($trait:ident, $method:ident) => {
        impl $trait for ExpPoly {
            type Output = ExpPoly;
            fn $method(self, rhs: ExpPoly) -> ExpPoly {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_poly!(Add, add);
forward_owned_poly!(Sub, sub);
forward_owned_poly!(Mul, mul);

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

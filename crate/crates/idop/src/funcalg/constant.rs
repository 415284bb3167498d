//! Exact constants: finite sums of `zeta * pi^k * e^alpha * (e^pi)^r`
//! monomials with cyclotomic coefficients, and formal quotients of such
//! sums. These are the scalars of all linear algebra in the crate.

use super::cyclotomic::Cyclotomic;
use super::gauss::{GaussRat, Rat};
use num::{BigInt, Signed, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Monomial key `pi^pi_pow * e^exp_arg * (e^pi)^e_pi_pow`. The exponent
/// `exp_arg` is a Gaussian rational and carries no pi content; rational
/// multiples of `i*pi` in exponents are extracted into the cyclotomic
/// coefficient at construction time.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ConstKey {
    pub pi_pow: u32,
    pub exp_arg: GaussRat,
    pub e_pi_pow: Rat,
}

impl ConstKey {
    pub fn trivial() -> Self {
        ConstKey {
            pi_pow: 0,
            exp_arg: GaussRat::zero(),
            e_pi_pow: Rat::zero(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.pi_pow == 0 && self.exp_arg.is_zero() && self.e_pi_pow.is_zero()
    }

    fn combine(&self, rhs: &ConstKey) -> ConstKey {
        ConstKey {
            pi_pow: self.pi_pow + rhs.pi_pow,
            exp_arg: &self.exp_arg + &rhs.exp_arg,
            e_pi_pow: &self.e_pi_pow + &rhs.e_pi_pow,
        }
    }
}

/// A raw, not yet normalized term. `exp_pi_arg` is the Gaussian-rational
/// multiplier of `pi` still sitting inside the exponent, so the term reads
/// `coeff * pi^pi_pow * e^(exp_arg + exp_pi_arg*pi) * (e^pi)^e_pi_pow`.
#[derive(Clone, Debug)]
pub struct RawConstTerm {
    pub coeff: Cyclotomic,
    pub pi_pow: u32,
    pub exp_arg: GaussRat,
    pub exp_pi_arg: GaussRat,
    pub e_pi_pow: Rat,
}

/// Normalized sum of constant monomials; zero is the empty sum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ConstValue {
    terms: BTreeMap<ConstKey, Cyclotomic>,
}

impl ConstValue {
    pub fn zero() -> Self {
        ConstValue::default()
    }

    pub fn one() -> Self {
        ConstValue::from_cyc(Cyclotomic::one())
    }

    pub fn from_cyc(c: Cyclotomic) -> Self {
        let mut v = ConstValue::zero();
        v.add_term(ConstKey::trivial(), c);
        v
    }

    pub fn from_rat(r: Rat) -> Self {
        ConstValue::from_cyc(Cyclotomic::from_rat(r))
    }

    pub fn from_int(n: i64) -> Self {
        ConstValue::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_gauss(g: &GaussRat) -> Self {
        ConstValue::from_cyc(Cyclotomic::from_gauss(g))
    }

    pub fn pi() -> Self {
        let mut v = ConstValue::zero();
        v.add_term(
            ConstKey {
                pi_pow: 1,
                exp_arg: GaussRat::zero(),
                e_pi_pow: Rat::zero(),
            },
            Cyclotomic::one(),
        );
        v
    }

    /// `e^(alpha + pi_mult*pi)`, with the imaginary part of `pi_mult`
    /// extracted as a root of unity.
    pub fn exponential(alpha: &GaussRat, pi_mult: &GaussRat) -> Self {
        let root = Cyclotomic::root_of_unity(&pi_mult.im / Rat::from_integer(BigInt::from(2)));
        let mut v = ConstValue::zero();
        v.add_term(
            ConstKey {
                pi_pow: 0,
                exp_arg: alpha.clone(),
                e_pi_pow: pi_mult.re.clone(),
            },
            root,
        );
        v
    }

    /// Canonicalizes an arbitrary list of raw terms: extracts `i*pi`
    /// exponent content into roots of unity, merges keys, prunes zeros.
    pub fn normalize(raw: Vec<RawConstTerm>) -> Self {
        let mut v = ConstValue::zero();
        for t in raw {
            let root =
                Cyclotomic::root_of_unity(&t.exp_pi_arg.im / Rat::from_integer(BigInt::from(2)));
            v.add_term(
                ConstKey {
                    pi_pow: t.pi_pow,
                    exp_arg: t.exp_arg,
                    e_pi_pow: &t.e_pi_pow + &t.exp_pi_arg.re,
                },
                t.coeff.mul(&root),
            );
        }
        v
    }

    fn add_term(&mut self, key: ConstKey, coeff: Cyclotomic) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c = c.add(&coeff);
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<ConstKey, Cyclotomic> {
        &self.terms
    }

    pub fn single_term(&self) -> Option<(&ConstKey, &Cyclotomic)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Returns the cyclotomic content if the value is a pure scalar.
    pub fn as_cyc(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return Some(Cyclotomic::zero());
        }
        let (k, c) = self.single_term()?;
        k.is_trivial().then(|| c.clone())
    }

    pub fn as_gauss(&self) -> Option<GaussRat> {
        self.as_cyc()?.as_gauss()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.as_cyc()?.as_rat()
    }

    pub fn scale_cyc(&self, c: &Cyclotomic) -> Self {
        let mut out = ConstValue::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul(c));
        }
        out
    }

    /// Leading rational used for deterministic sign extraction in display.
    pub fn leading_sign_negative(&self) -> bool {
        self.terms
            .iter()
            .next()
            .and_then(|(_, c)| c.terms().iter().next().map(|(_, r)| r.is_negative()))
            .unwrap_or(false)
    }
}

impl Add for &ConstValue {
    type Output = ConstValue;
    fn add(self, rhs: &ConstValue) -> ConstValue {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ConstValue {
    type Output = ConstValue;
    fn sub(self, rhs: &ConstValue) -> ConstValue {
        self + &(-rhs)
    }
}

impl Neg for &ConstValue {
    type Output = ConstValue;
    fn neg(self) -> ConstValue {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), c.neg()))
            .collect();
        ConstValue { terms }
    }
}

impl Mul for &ConstValue {
    type Output = ConstValue;
    fn mul(self, rhs: &ConstValue) -> ConstValue {
        let mut out = ConstValue::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.add_term(k1.combine(k2), c1.mul(c2));
            }
        }
        out
    }
}

/// Formal quotient of constant values. The denominator is kept at `1`
/// whenever it can be folded into the numerator (invertible monomials);
/// equality is decided by cross-multiplication, no gcd reduction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct ConstFraction {
    num: ConstValue,
    den: ConstValue,
}

impl ConstFraction {
    pub fn new(num: ConstValue, den: ConstValue) -> Self {
        assert!(!den.is_zero(), "zero denominator in constant fraction");
        let mut f = ConstFraction { num, den };
        f.reduce();
        f
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = ConstValue::one();
            return;
        }
        if let Some((key, coeff)) = self.den.single_term().map(|(k, c)| (k.clone(), c.clone())) {
            // A single-term denominator with no pi power is invertible:
            // negate the exponents and invert the root-of-unity content.
            if key.pi_pow == 0 {
                if let Some(inv_coeff) = coeff.invert_monomial() {
                    let mut inv = ConstValue::zero();
                    inv.add_term(
                        ConstKey {
                            pi_pow: 0,
                            exp_arg: -&key.exp_arg,
                            e_pi_pow: -key.e_pi_pow.clone(),
                        },
                        inv_coeff,
                    );
                    self.num = &self.num * &inv;
                    self.den = ConstValue::one();
                    return;
                }
            }
        }
        // cancel the denominator entirely when it divides the numerator
        if let Some(q) = exact_div(&self.num, &self.den) {
            self.num = q;
            self.den = ConstValue::one();
            return;
        }
        // otherwise make the denominator monic with trivial trailing key,
        // so that structurally equal fractions share one representation
        if let Some((tk, _)) = self.den.terms.iter().next() {
            let shift = ConstKey {
                pi_pow: 0,
                exp_arg: -&tk.exp_arg,
                e_pi_pow: -tk.e_pi_pow.clone(),
            };
            if !shift.is_trivial() {
                let mut m = ConstValue::zero();
                m.add_term(shift, Cyclotomic::one());
                self.num = &self.num * &m;
                self.den = &self.den * &m;
            }
        }
        if let Some((_, lc)) = self.den.terms.iter().next_back() {
            if let Some(inv) = lc.invert_monomial() {
                self.num = self.num.scale_cyc(&inv);
                self.den = self.den.scale_cyc(&inv);
            }
        }
    }

    pub fn zero() -> Self {
        ConstFraction {
            num: ConstValue::zero(),
            den: ConstValue::one(),
        }
    }

    pub fn one() -> Self {
        ConstFraction {
            num: ConstValue::one(),
            den: ConstValue::one(),
        }
    }

    pub fn from_value(v: ConstValue) -> Self {
        ConstFraction {
            num: v,
            den: ConstValue::one(),
        }
    }

    pub fn from_rat(r: Rat) -> Self {
        ConstFraction::from_value(ConstValue::from_rat(r))
    }

    pub fn from_int(n: i64) -> Self {
        ConstFraction::from_value(ConstValue::from_int(n))
    }

    pub fn from_gauss(g: &GaussRat) -> Self {
        ConstFraction::from_value(ConstValue::from_gauss(g))
    }

    pub fn num(&self) -> &ConstValue {
        &self.num
    }

    pub fn den(&self) -> &ConstValue {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact semantic equality by cross-multiplication.
    pub fn equiv(&self, rhs: &ConstFraction) -> bool {
        (&(&self.num * &rhs.den) - &(&rhs.num * &self.den)).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.equiv(&ConstFraction::one())
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero constant");
        ConstFraction::new(self.den.clone(), self.num.clone())
    }

    pub fn scale_gauss(&self, g: &GaussRat) -> Self {
        self * &ConstFraction::from_gauss(g)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self * &ConstFraction::from_rat(r.clone())
    }

    pub fn as_gauss(&self) -> Option<GaussRat> {
        let n = self.num.as_gauss()?;
        let d = self.den.as_gauss()?;
        Some(&n / &d)
    }

    pub fn as_rat(&self) -> Option<Rat> {
        let g = self.as_gauss()?;
        g.im.is_zero().then_some(g.re)
    }

    pub fn leading_sign_negative(&self) -> bool {
        self.num.leading_sign_negative() != self.den.leading_sign_negative()
    }
}

/// Exact division of constant values viewed as Laurent polynomials in
/// pi, the exponentials, and e^pi: `Some(q)` with `num = q * den`, or
/// `None` when not exactly divisible (or too large to try).
fn exact_div(num: &ConstValue, den: &ConstValue) -> Option<ConstValue> {
    if num.is_zero() {
        return Some(ConstValue::zero());
    }
    // an invertible single-term denominator divides everything directly
    if let Some((key, coeff)) = den.single_term() {
        if key.pi_pow != 0 && num.terms.keys().any(|k| k.pi_pow < key.pi_pow) {
            return None;
        }
        let inv_coeff = coeff.invert_monomial()?;
        let mut out = ConstValue::zero();
        for (k, c) in &num.terms {
            out.add_term(
                ConstKey {
                    pi_pow: k.pi_pow - key.pi_pow,
                    exp_arg: &k.exp_arg - &key.exp_arg,
                    e_pi_pow: &k.e_pi_pow - &key.e_pi_pow,
                },
                c.mul(&inv_coeff),
            );
        }
        return Some(out);
    }
    if den.terms.len() > 12 || num.terms.len() > 48 || num.terms.len() < den.terms.len() {
        return None;
    }
    let (dk, dc) = den.terms.iter().next_back()?;
    let dinv = dc.invert_monomial()?;
    // necessary condition: the trailing monomials must divide as well
    let (dk0, _) = den.terms.iter().next()?;
    let (rk0, _) = num.terms.iter().next()?;
    if rk0.pi_pow < dk0.pi_pow {
        return None;
    }
    let cap = num.terms.len() + 2 * den.terms.len();
    let mut rem = num.clone();
    let mut quot = ConstValue::zero();
    for _ in 0..16 {
        if rem.is_zero() {
            return Some(quot);
        }
        if rem.terms.len() > cap {
            return None;
        }
        let (rk, rc) = rem.terms.iter().next_back()?;
        if rk.pi_pow < dk.pi_pow {
            return None;
        }
        let qk = ConstKey {
            pi_pow: rk.pi_pow - dk.pi_pow,
            exp_arg: &rk.exp_arg - &dk.exp_arg,
            e_pi_pow: &rk.e_pi_pow - &dk.e_pi_pow,
        };
        let qc = rc.mul(&dinv);
        let mut t = ConstValue::zero();
        t.add_term(qk, qc);
        rem = &rem - &(&t * den);
        quot = &quot + &t;
    }
    None
}

impl Add for &ConstFraction {
    type Output = ConstFraction;
    fn add(self, rhs: &ConstFraction) -> ConstFraction {
        if self.den == rhs.den {
            return ConstFraction::new(&self.num + &rhs.num, self.den.clone());
        }
        // common factors between the denominators keep the result small
        if let Some(k) = exact_div(&rhs.den, &self.den) {
            return ConstFraction::new(&(&self.num * &k) + &rhs.num, rhs.den.clone());
        }
        if let Some(k) = exact_div(&self.den, &rhs.den) {
            return ConstFraction::new(&self.num + &(&rhs.num * &k), self.den.clone());
        }
        ConstFraction::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &ConstFraction {
    type Output = ConstFraction;
    fn sub(self, rhs: &ConstFraction) -> ConstFraction {
        self + &(-rhs)
    }
}

impl Neg for &ConstFraction {
    type Output = ConstFraction;
    fn neg(self) -> ConstFraction {
        ConstFraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &ConstFraction {
    type Output = ConstFraction;
    fn mul(self, rhs: &ConstFraction) -> ConstFraction {
        // cross-cancel before multiplying so recurring denominator
        // factors do not pile up
        let mut n1 = self.num.clone();
        let mut d2 = rhs.den.clone();
        if let Some(q) = exact_div(&n1, &d2) {
            n1 = q;
            d2 = ConstValue::one();
        }
        let mut n2 = rhs.num.clone();
        let mut d1 = self.den.clone();
        if let Some(q) = exact_div(&n2, &d1) {
            n2 = q;
            d1 = ConstValue::one();
        }
        ConstFraction::new(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &ConstFraction {
    type Output = ConstFraction;
    fn div(self, rhs: &ConstFraction) -> ConstFraction {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned_frac {
    ($trait:ident, $method:ident) => {
        impl $trait for ConstFraction {
            type Output = ConstFraction;
            fn $method(self, rhs: ConstFraction) -> ConstFraction {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_frac!(Add, add);
forward_owned_frac!(Sub, sub);
forward_owned_frac!(Mul, mul);
forward_owned_frac!(Div, div);

impl Neg for ConstFraction {
    type Output = ConstFraction;
    fn neg(self) -> ConstFraction {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::gauss::rat;
    use num::One;

    #[test]
    fn like_terms_merge() {
        // coeff 2 and coeff 3 on the same key merge to 5
        let term = |c: i64| RawConstTerm {
            coeff: Cyclotomic::from_rat(rat(c, 1)),
            pi_pow: 1,
            exp_arg: GaussRat::from_int(2),
            exp_pi_arg: GaussRat::zero(),
            e_pi_pow: rat(1, 3),
        };
        let v = ConstValue::normalize(vec![term(2), term(3)]);
        assert_eq!(v.terms().len(), 1);
        let (_, c) = v.single_term().unwrap();
        assert_eq!(c.as_rat().unwrap(), rat(5, 1));
    }

    #[test]
    fn extract_quarter_pi_exponent() {
        // e^(i*pi/2) = i
        let raw = RawConstTerm {
            coeff: Cyclotomic::one(),
            pi_pow: 0,
            exp_arg: GaussRat::zero(),
            exp_pi_arg: GaussRat::new(Rat::zero(), rat(1, 2)),
            e_pi_pow: Rat::zero(),
        };
        let v = ConstValue::normalize(vec![raw]);
        assert_eq!(v.as_gauss().unwrap(), GaussRat::i());
    }

    #[test]
    fn e_to_i_pi_is_minus_one() {
        let v = ConstValue::exponential(&GaussRat::zero(), &GaussRat::i());
        assert_eq!(v.as_rat().unwrap(), rat(-1, 1));
    }

    #[test]
    fn zero_tests() {
        assert!(ConstValue::zero().is_zero());
        let two = ConstValue::from_int(2);
        let e0 = ConstValue::exponential(&GaussRat::zero(), &GaussRat::zero());
        assert!((&two - &(&two * &e0)).is_zero());
        let pi_minus_3 = &ConstValue::pi() - &ConstValue::from_int(3);
        assert!(!pi_minus_3.is_zero());
    }

    #[test]
    fn fraction_cross_equality() {
        let pi = ConstFraction::from_value(ConstValue::pi());
        let half = ConstFraction::from_rat(rat(1, 2));
        let a = &pi * &half;
        let b = &pi / &ConstFraction::from_int(2);
        assert!(a.equiv(&b));
        assert!(!a.equiv(&pi));
    }

    #[test]
    fn fraction_folds_invertible_denominator() {
        // (1) / (3 e^2) has an invertible denominator.
        let den = &ConstValue::from_int(3) * &ConstValue::exponential(
            &GaussRat::from_int(2),
            &GaussRat::zero(),
        );
        let f = ConstFraction::new(ConstValue::one(), den);
        assert!(f.den().as_rat().unwrap().is_one());
    }
}

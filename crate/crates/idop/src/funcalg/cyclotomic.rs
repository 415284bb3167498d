//! Sums of roots of unity with rational coefficients, reduced modulo
//! cyclotomic polynomials so that the zero test is exact.
//!
//! An element is stored as a map `t -> c` meaning `sum c * e^(2*pi*i*t)`
//! with `t` a reduced fraction in `[0, 1)`. After normalization the
//! exponents, viewed in `Q(zeta_N)` for `N` the lcm of denominators, lie
//! below `phi(N)`, so a normalized empty sum is the unique zero.

use super::gauss::{GaussRat, Rat};
use num::{BigInt, Integer, One, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Cyclotomic {
    terms: BTreeMap<Rat, Rat>,
}

fn frac_mod_one(t: &Rat) -> Rat {
    t - t.floor()
}

/// Coefficients of `Phi_n(x)`, constant term first. Always monic with
/// integer coefficients; computed by exact division of `x^n - 1`.
fn cyclotomic_poly(n: u64) -> Vec<Rat> {
    if n == 1 {
        return vec![-Rat::one(), Rat::one()];
    }
    // x^n - 1
    let mut num = vec![Rat::zero(); (n + 1) as usize];
    num[0] = -Rat::one();
    num[n as usize] = Rat::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Exact division of polynomials over Q; panics on a nonzero remainder.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let (q, r) = poly_divmod(num, den);
    assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
    q
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem: Vec<Rat> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1 - dd;
        let c = &rem[rem.len() - 1] / &lead;
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let v = &rem[k + i] - &(&c * d);
            rem[k + i] = v;
        }
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    (quot, rem)
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic::default()
    }

    pub fn one() -> Self {
        Cyclotomic::from_rat(Rat::one())
    }

    pub fn from_rat(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Rat::zero(), r);
        }
        Cyclotomic { terms }
    }

    pub fn from_gauss(g: &GaussRat) -> Self {
        let mut c = Cyclotomic::zero();
        c.add_term(Rat::zero(), g.re.clone());
        c.add_term(Rat::new(BigInt::from(1), BigInt::from(4)), g.im.clone());
        c.normalize();
        c
    }

    /// The root of unity `e^(2*pi*i*t)`.
    pub fn root_of_unity(t: Rat) -> Self {
        let mut c = Cyclotomic::zero();
        c.add_term(t, Rat::one());
        c.normalize();
        c
    }

    fn add_term(&mut self, t: Rat, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let t = frac_mod_one(&t);
        let entry = self.terms.entry(t.clone()).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Rat, Rat> {
        &self.terms
    }

    /// Returns `Some(a + b*i)` if the element lies in `Q(i)`.
    pub fn as_gauss(&self) -> Option<GaussRat> {
        let quarter = Rat::new(BigInt::from(1), BigInt::from(4));
        let mut re = Rat::zero();
        let mut im = Rat::zero();
        for (t, c) in &self.terms {
            if t.is_zero() {
                re = c.clone();
            } else if *t == quarter {
                im = c.clone();
            } else {
                return None;
            }
        }
        Some(GaussRat::new(re, im))
    }

    pub fn as_rat(&self) -> Option<Rat> {
        let g = self.as_gauss()?;
        g.im.is_zero().then_some(g.re)
    }

    pub fn conj(&self) -> Self {
        let mut out = Cyclotomic::zero();
        for (t, c) in &self.terms {
            out.add_term(-t.clone(), c.clone());
        }
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.clone(), -c.clone()))
            .collect();
        Cyclotomic { terms }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), c.clone());
        }
        out.normalize();
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Cyclotomic::zero();
        for (t1, c1) in &self.terms {
            for (t2, c2) in &rhs.terms {
                out.add_term(t1 + t2, c1 * c2);
            }
        }
        out.normalize();
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Cyclotomic::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, c)| (t.clone(), c * r))
            .collect();
        Cyclotomic { terms }
    }

    pub fn mul_gauss(&self, g: &GaussRat) -> Self {
        self.mul(&Cyclotomic::from_gauss(g))
    }

    /// Inverse of a single root-of-unity term `c * zeta`; `None` for sums.
    pub fn invert_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (t, c) = self.terms.iter().next().unwrap();
        let mut out = Cyclotomic::zero();
        out.add_term(-t.clone(), c.recip());
        out.normalize();
        Some(out)
    }

    fn normalize(&mut self) {
        loop {
            self.terms.retain(|_, c| !c.is_zero());
            if self.terms.is_empty() {
                return;
            }
            let mut n = BigInt::one();
            for t in self.terms.keys() {
                n = n.lcm(t.denom());
            }
            let n = n
                .to_u64()
                .expect("root-of-unity order exceeds supported range");
            if n == 1 {
                return;
            }
            let phi = cyclotomic_poly(n);
            let deg = phi.len() - 1;
            let max_exp = self
                .terms
                .keys()
                .map(|t| (t * Rat::from_integer(BigInt::from(n))).to_integer())
                .max()
                .unwrap()
                .to_u64()
                .unwrap();
            if (max_exp as usize) < deg {
                return;
            }
            let mut poly = vec![Rat::zero(); n as usize];
            for (t, c) in &self.terms {
                let k = (t * Rat::from_integer(BigInt::from(n)))
                    .to_integer()
                    .to_u64()
                    .unwrap() as usize;
                poly[k] = c.clone();
            }
            let (_, rem) = poly_divmod(&poly, &phi);
            self.terms.clear();
            for (k, c) in rem.into_iter().enumerate() {
                if !c.is_zero() {
                    self.terms
                        .insert(Rat::new(BigInt::from(k as u64), BigInt::from(n)), c);
                }
            }
        }
    }
}

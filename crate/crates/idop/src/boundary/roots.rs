//! Roots of constant-coefficient characteristic polynomials over the
//! Gaussian rationals: candidate enumeration from Gaussian-integer
//! divisors of the extreme coefficients, plus the quadratic formula with
//! exact square roots. Complete for polynomials splitting over Q(i);
//! anything else reports that a fundamental system must be supplied.

use crate::error::{Error, Result};
use crate::funcalg::{GaussRat, Rat};
use num::{BigInt, Integer, One, Signed, Zero};

type GInt = (BigInt, BigInt);

fn g_norm(z: &GInt) -> BigInt {
    &z.0 * &z.0 + &z.1 * &z.1
}

fn g_mul(a: &GInt, b: &GInt) -> GInt {
    (
        &a.0 * &b.0 - &a.1 * &b.1,
        &a.0 * &b.1 + &a.1 * &b.0,
    )
}

fn g_conj(a: &GInt) -> GInt {
    (a.0.clone(), -a.1.clone())
}

fn g_sub(a: &GInt, b: &GInt) -> GInt {
    (&a.0 - &b.0, &a.1 - &b.1)
}

/// Nearest-integer division making the Euclidean algorithm work in Z[i].
fn g_div_round(a: &GInt, b: &GInt) -> GInt {
    let n = g_norm(b);
    let p = g_mul(a, &g_conj(b));
    let round = |x: &BigInt| -> BigInt {
        let two = BigInt::from(2);
        (x * &two + &n).div_floor(&(&n * &two))
    };
    (round(&p.0), round(&p.1))
}

fn g_gcd(a: &GInt, b: &GInt) -> GInt {
    let mut a = a.clone();
    let mut b = b.clone();
    while !(b.0.is_zero() && b.1.is_zero()) {
        let q = g_div_round(&a, &b);
        let r = g_sub(&a, &g_mul(&q, &b));
        a = b;
        b = r;
    }
    a
}

/// Exact division in Z[i]; `None` when not divisible.
fn g_div_exact(a: &GInt, b: &GInt) -> Option<GInt> {
    let n = g_norm(b);
    let p = g_mul(a, &g_conj(b));
    if (&p.0 % &n).is_zero() && (&p.1 % &n).is_zero() {
        Some((&p.0 / &n, &p.1 / &n))
    } else {
        None
    }
}

/// Prime factorization over Z by bounded trial division. The bound keeps
/// runtime predictable; any composite remainder above the bound squared
/// is rejected.
fn factor_int(mut n: BigInt) -> Result<Vec<(BigInt, u32)>> {
    const BOUND: u64 = 1_000_000;
    let mut out = Vec::new();
    let mut push = |p: BigInt, k: u32| {
        if k > 0 {
            out.push((p, k));
        }
    };
    let mut d = BigInt::from(2);
    while &d * &d <= n && d <= BigInt::from(BOUND) {
        let mut k = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            k += 1;
        }
        push(d.clone(), k);
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        if n >= BigInt::from(BOUND) * BigInt::from(BOUND) {
            return Err(Error::NeedsUserFundamentalSystem);
        }
        push(n, 1);
    }
    Ok(out)
}

/// A Gaussian prime above the rational prime `p = 1 mod 4`, via a square
/// root of -1 modulo p.
fn gauss_prime_above(p: &BigInt) -> GInt {
    let exp = (p - BigInt::one()) / BigInt::from(4);
    let mut t = BigInt::from(2);
    loop {
        let x = t.modpow(&exp, p);
        if (&x * &x % p) == p - BigInt::one() {
            return g_gcd(&(p.clone(), BigInt::zero()), &(x, BigInt::one()));
        }
        t += 1;
    }
}

/// All divisors of a nonzero Gaussian integer, up to units.
fn gaussian_divisors(z: &GInt) -> Result<Vec<GInt>> {
    let mut primes: Vec<GInt> = Vec::new();
    for (p, _) in factor_int(g_norm(z))? {
        if p == BigInt::from(2) {
            primes.push((BigInt::one(), BigInt::one()));
        } else if (&p % BigInt::from(4)) == BigInt::from(3) {
            primes.push((p, BigInt::zero()));
        } else {
            let g = gauss_prime_above(&p);
            primes.push(g.clone());
            primes.push(g_conj(&g));
        }
    }
    let mut divisors = vec![(BigInt::one(), BigInt::zero())];
    for g in primes {
        let mut powers = Vec::new();
        let mut w = z.clone();
        let mut acc = (BigInt::one(), BigInt::zero());
        while let Some(q) = g_div_exact(&w, &g) {
            acc = g_mul(&acc, &g);
            powers.push(acc.clone());
            w = q;
        }
        let mut next = divisors.clone();
        for d in &divisors {
            for pw in &powers {
                next.push(g_mul(d, pw));
            }
        }
        divisors = next;
    }
    Ok(divisors)
}

fn horner(coeffs: &[GaussRat], x: &GaussRat) -> GaussRat {
    let mut acc = GaussRat::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Deflation by a known root; the remainder must vanish.
fn deflate(coeffs: &[GaussRat], r: &GaussRat) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); coeffs.len() - 1];
    let mut carry = coeffs.last().unwrap().clone();
    for i in (0..coeffs.len() - 1).rev() {
        out[i] = carry.clone();
        carry = &coeffs[i] + &(&carry * r);
    }
    assert!(carry.is_zero(), "deflation by a non-root");
    out
}

fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    let s = Rat::new(n, d);
    (&s * &s == *r).then_some(s)
}

/// Exact square root in Q(i), when one exists.
fn gauss_sqrt(z: &GaussRat) -> Option<GaussRat> {
    if z.is_zero() {
        return Some(GaussRat::zero());
    }
    if z.im.is_zero() {
        if z.re.is_negative() {
            let s = rational_sqrt(&-z.re.clone())?;
            return Some(GaussRat::new(Rat::zero(), s));
        }
        return rational_sqrt(&z.re).map(GaussRat::from_rat);
    }
    let s = rational_sqrt(&(&z.re * &z.re + &z.im * &z.im))?;
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let x = rational_sqrt(&((&z.re + &s) * &half))?;
    if x.is_zero() {
        return None;
    }
    let y = &z.im / &(&x * &Rat::from_integer(BigInt::from(2)));
    Some(GaussRat::new(x, y))
}

/// Roots (with multiplicity) of a polynomial with Gaussian-rational
/// coefficients, constant term first. Succeeds iff the polynomial splits
/// over Q(i); the result is sorted deterministically.
pub fn poly_roots(coeffs: &[GaussRat]) -> Result<Vec<(GaussRat, usize)>> {
    let mut coeffs: Vec<GaussRat> = coeffs.to_vec();
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    assert!(coeffs.len() >= 2, "polynomial must be nonconstant");
    let mut roots: Vec<(GaussRat, usize)> = Vec::new();
    let mut record = |r: GaussRat, m: usize| {
        if m > 0 {
            roots.push((r, m));
        }
    };

    // zero roots
    let mut zero_mult = 0;
    while coeffs[0].is_zero() {
        coeffs.remove(0);
        zero_mult += 1;
    }
    record(GaussRat::zero(), zero_mult);

    if coeffs.len() >= 3 {
        // clear denominators, make the leading coefficient a rational integer
        let mut lcm = BigInt::one();
        for c in &coeffs {
            lcm = lcm.lcm(c.re.denom()).lcm(c.im.denom());
        }
        let scaled: Vec<GaussRat> = coeffs
            .iter()
            .map(|c| c.scale(&Rat::from_integer(lcm.clone())))
            .collect();
        let lead = scaled.last().unwrap();
        let lead_conj = GaussRat::new(lead.re.clone(), -lead.im.clone());
        let ints: Vec<GInt> = scaled
            .iter()
            .map(|c| {
                let v = c * &lead_conj;
                (v.re.to_integer(), v.im.to_integer())
            })
            .collect();
        let c0 = ints[0].clone();
        let cn = g_norm(ints.last().unwrap());
        let units = [
            GaussRat::one(),
            GaussRat::i(),
            -GaussRat::one(),
            -GaussRat::i(),
        ];
        let mut candidates: Vec<GaussRat> = Vec::new();
        for d in gaussian_divisors(&c0)? {
            for e in factor_int(cn.clone())?
                .iter()
                .fold(vec![BigInt::one()], |acc, (p, k)| {
                    let mut next = Vec::new();
                    for a in &acc {
                        let mut pw = BigInt::one();
                        for _ in 0..=*k {
                            next.push(a * &pw);
                            pw *= p;
                        }
                    }
                    next
                })
            {
                let base = GaussRat::new(
                    Rat::new(d.0.clone(), e.clone()),
                    Rat::new(d.1.clone(), e.clone()),
                );
                for u in &units {
                    candidates.push(&base * u);
                }
            }
        }
        candidates.sort_by_key(|c| c.root_order_key());
        candidates.dedup();
        for r in candidates {
            let mut m = 0;
            while coeffs.len() >= 2 && horner(&coeffs, &r).is_zero() {
                coeffs = deflate(&coeffs, &r);
                m += 1;
            }
            record(r, m);
        }
    }

    match coeffs.len() {
        1 => {}
        2 => {
            let r = -&(&coeffs[0] * &coeffs[1].inv());
            record(r, 1);
        }
        3 => {
            // quadratic formula with an exact discriminant square root
            let a = &coeffs[2];
            let b = &coeffs[1];
            let c = &coeffs[0];
            let four = GaussRat::from_int(4);
            let disc = &(b * b) - &(&four * &(a * c));
            let s = gauss_sqrt(&disc).ok_or(Error::NeedsUserFundamentalSystem)?;
            let inv2a = (&GaussRat::from_int(2) * a).inv();
            let r1 = &(&(-b) + &s) * &inv2a;
            let r2 = &(&(-b) - &s) * &inv2a;
            if r1 == r2 {
                record(r1, 2);
            } else {
                record(r1, 1);
                record(r2, 1);
            }
        }
        _ => return Err(Error::NeedsUserFundamentalSystem),
    }

    // merge duplicates and order deterministically
    roots.sort_by_key(|(r, _)| r.root_order_key());
    let mut merged: Vec<(GaussRat, usize)> = Vec::new();
    for (r, m) in roots {
        match merged.last_mut() {
            Some((lr, lm)) if *lr == r => *lm += m,
            _ => merged.push((r, m)),
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::rat;

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussRat {
        GaussRat::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn pure_powers_and_pairs() {
        // x^4 + x^2: roots 0 (double), +-i
        let coeffs = vec![
            GaussRat::zero(),
            GaussRat::zero(),
            GaussRat::one(),
            GaussRat::zero(),
            GaussRat::one(),
        ];
        let roots = poly_roots(&coeffs).unwrap();
        assert_eq!(
            roots,
            vec![
                (GaussRat::zero(), 2),
                (-GaussRat::i(), 1),
                (GaussRat::i(), 1)
            ]
        );
    }

    #[test]
    fn rational_and_gaussian_roots() {
        // (x - 1/2)(x - (1+i)) = x^2 - (3/2+i)x + (1/2)(1+i)
        let coeffs = vec![
            g((1, 2), (1, 2)),
            -g((3, 2), (1, 1)),
            GaussRat::one(),
        ];
        let roots = poly_roots(&coeffs).unwrap();
        assert_eq!(roots, vec![(g((1, 2), (0, 1)), 1), (g((1, 1), (1, 1)), 1)]);
    }

    #[test]
    fn high_multiplicity() {
        // (x+2)^3
        let coeffs = vec![
            GaussRat::from_int(8),
            GaussRat::from_int(12),
            GaussRat::from_int(6),
            GaussRat::one(),
        ];
        assert_eq!(
            poly_roots(&coeffs).unwrap(),
            vec![(GaussRat::from_int(-2), 3)]
        );
    }

    #[test]
    fn irreducible_reports_missing_system() {
        // x^2 - 2 has no roots in Q(i)
        let coeffs = vec![GaussRat::from_int(-2), GaussRat::zero(), GaussRat::one()];
        assert!(matches!(
            poly_roots(&coeffs),
            Err(Error::NeedsUserFundamentalSystem)
        ));
    }

    #[test]
    fn square_roots_in_gauss_field() {
        assert_eq!(gauss_sqrt(&GaussRat::from_int(9)), Some(GaussRat::from_int(3)));
        assert_eq!(
            gauss_sqrt(&GaussRat::from_int(-4)),
            Some(GaussRat::new(Rat::zero(), rat(2, 1)))
        );
        // sqrt(2i) = 1 + i
        assert_eq!(
            gauss_sqrt(&g((0, 1), (2, 1))),
            Some(g((1, 1), (1, 1)))
        );
        assert_eq!(gauss_sqrt(&GaussRat::from_int(2)), None);
    }

    #[test]
    fn divisor_enumeration_covers_small_gaussians() {
        // 5 = (2+i)(2-i); expect divisors hitting both primes
        let divs = gaussian_divisors(&(BigInt::from(5), BigInt::zero())).unwrap();
        assert!(divs
            .iter()
            .any(|d| g_norm(d) == BigInt::from(5)));
        assert!(divs.iter().any(|d| g_norm(d) == BigInt::from(25)));
    }
}

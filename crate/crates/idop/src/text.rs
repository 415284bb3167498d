//! Text format for operators and functions: a recursive-descent parser
//! for the `D`, `A`, `E[c]` notation and a deterministic pretty-printer
//! whose output parses back to the same normal form. Conjugate complex
//! exponentials are displayed as sines and cosines.

use crate::error::{Error, Result};
use crate::funcalg::{
    ConstFraction, ConstValue, EvalPoint, ExpPoly, FnKey, GaussRat, Rat,
};
use crate::opalg::IntDiffOp;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeSet;

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Gaussian rational as a sum, e.g. `1/2 - 2 i`.
fn gauss_str(g: &GaussRat) -> String {
    let im_mag = |r: &Rat| -> String {
        let a = r.abs();
        if a.is_one() {
            "i".into()
        } else if a.numer().is_one() {
            format!("i/{}", a.denom())
        } else {
            format!("{} i", rat_str(&a))
        }
    };
    if g.im.is_zero() {
        return rat_str(&g.re);
    }
    if g.re.is_zero() {
        let s = im_mag(&g.im);
        return if g.im.is_negative() { format!("-{s}") } else { s };
    }
    let sign = if g.im.is_negative() { "-" } else { "+" };
    format!("{} {} {}", rat_str(&g.re), sign, im_mag(&g.im))
}

/// Positive magnitude with multiplicative factors, e.g. `pi/4`, `3/2 x`.
fn magnitude_str(a: &Rat, factors: &[String]) -> String {
    if factors.is_empty() {
        return rat_str(a);
    }
    let joined = factors.join(" ");
    if a.is_one() {
        joined
    } else if a.numer().is_one() {
        format!("{}/{}", joined, a.denom())
    } else {
        format!("{} {}", rat_str(a), joined)
    }
}

fn join_signed(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

/// One constant monomial as (sign, magnitude string).
fn const_term_strings(v: &ConstValue) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for (key, cyc) in v.terms() {
        for (angle, q) in cyc.terms() {
            let mut factors: Vec<String> = Vec::new();
            if !angle.is_zero() {
                if *angle == crate::funcalg::rat(1, 4) {
                    factors.push("i".into());
                } else {
                    let arg = angle * Rat::from_integer(BigInt::from(2));
                    factors.push(format!("exp({} i pi)", rat_str(&arg)));
                }
            }
            match key.pi_pow {
                0 => {}
                1 => factors.push("pi".into()),
                k => factors.push(format!("pi^{k}")),
            }
            if !key.exp_arg.is_zero() {
                factors.push(format!("exp({})", gauss_str(&key.exp_arg)));
            }
            if !key.e_pi_pow.is_zero() {
                if key.e_pi_pow.is_one() {
                    factors.push("exp(pi)".into());
                } else {
                    factors.push(format!("exp({} pi)", rat_str(&key.e_pi_pow)));
                }
            }
            out.push((q.is_negative(), magnitude_str(&q.abs(), &factors)));
        }
    }
    out
}

pub fn print_const_value(v: &ConstValue) -> String {
    join_signed(const_term_strings(v))
}

pub fn print_const(c: &ConstFraction) -> String {
    if let Some(r) = c.den().as_rat() {
        let scaled = c
            .num()
            .scale_cyc(&crate::funcalg::Cyclotomic::from_rat(r.recip()));
        print_const_value(&scaled)
    } else {
        format!("({})/({})", print_const_value(c.num()), print_const_value(c.den()))
    }
}

fn const_is_single(c: &ConstFraction) -> bool {
    c.den().as_rat().is_some()
        && c.num().terms().len() == 1
        && c.num().terms().values().next().unwrap().terms().len() == 1
}

#[derive(Clone, Debug)]
enum Trig {
    Sin(Rat),
    Cos(Rat),
}

/// A displayable function monomial: `x^pow e^(ax)` times an optional
/// sine/cosine or a residual complex exponential.
#[derive(Clone, Debug)]
struct DispMono {
    pow: u32,
    a: Rat,
    trig: Option<Trig>,
    complex: Option<GaussRat>,
}

impl DispMono {
    fn factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self.pow {
            0 => {}
            1 => out.push("x".into()),
            k => out.push(format!("x^{k}")),
        }
        if let Some(g) = &self.complex {
            let inner = gauss_str(g);
            let inner = if inner.contains(' ') {
                format!("({inner})")
            } else {
                inner
            };
            out.push(format!("exp({inner} x)"));
        } else if !self.a.is_zero() {
            if self.a.is_one() {
                out.push("exp(x)".into());
            } else {
                out.push(format!("exp({} x)", rat_str(&self.a)));
            }
        }
        if let Some(t) = &self.trig {
            let (name, b) = match t {
                Trig::Sin(b) => ("sin", b),
                Trig::Cos(b) => ("cos", b),
            };
            if b.is_one() {
                out.push(format!("{name}(x)"));
            } else {
                out.push(format!("{name}({} x)", rat_str(b)));
            }
        }
        out
    }
}

/// Splits a function into display terms, pairing conjugate complex
/// exponentials into sines and cosines.
fn realify(f: &ExpPoly) -> Vec<(ConstFraction, DispMono)> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<FnKey> = BTreeSet::new();
    for (k, c) in f.terms() {
        if seen.contains(k) {
            continue;
        }
        if k.alpha.im.is_zero() {
            out.push((
                c.clone(),
                DispMono {
                    pow: k.pow,
                    a: k.alpha.re.clone(),
                    trig: None,
                    complex: None,
                },
            ));
            continue;
        }
        let conj = FnKey {
            pow: k.pow,
            alpha: k.alpha.conj(),
        };
        match f.terms().get(&conj) {
            Some(cc) => {
                seen.insert(k.clone());
                seen.insert(conj.clone());
                let (cp, cm) = if k.alpha.im.is_positive() {
                    (c.clone(), cc.clone())
                } else {
                    (cc.clone(), c.clone())
                };
                let b = k.alpha.im.abs();
                let a = k.alpha.re.clone();
                let sin_c = (&cp - &cm).scale_gauss(&GaussRat::i());
                let cos_c = &cp + &cm;
                if !sin_c.is_zero() {
                    out.push((
                        sin_c,
                        DispMono {
                            pow: k.pow,
                            a: a.clone(),
                            trig: Some(Trig::Sin(b.clone())),
                            complex: None,
                        },
                    ));
                }
                if !cos_c.is_zero() {
                    out.push((
                        cos_c,
                        DispMono {
                            pow: k.pow,
                            a,
                            trig: Some(Trig::Cos(b)),
                            complex: None,
                        },
                    ));
                }
            }
            None => {
                out.push((
                    c.clone(),
                    DispMono {
                        pow: k.pow,
                        a: Rat::zero(),
                        trig: None,
                        complex: Some(k.alpha.clone()),
                    },
                ));
            }
        }
    }
    out
}

/// Coefficient and monomial as (sign, magnitude string).
fn fn_term_string(coeff: &ConstFraction, mono: &DispMono) -> (bool, String) {
    let neg = coeff.leading_sign_negative();
    let mag = if neg { -coeff } else { coeff.clone() };
    let factors = mono.factors();
    if factors.is_empty() {
        return (neg, print_const(&mag));
    }
    if let Some(r) = mag.as_rat() {
        return (neg, magnitude_str(&r, &factors));
    }
    let cs = print_const(&mag);
    let cs = if const_is_single(&mag) {
        cs
    } else {
        format!("({cs})")
    };
    (neg, format!("{} {}", cs, factors.join(" ")))
}

pub fn print_function(f: &ExpPoly) -> String {
    let terms = realify(f)
        .iter()
        .map(|(c, m)| fn_term_string(c, m))
        .collect();
    join_signed(terms)
}

pub fn print_point(at: &EvalPoint) -> String {
    if at.pi_mult.is_zero() {
        return rat_str(&at.rat);
    }
    let pi_part = {
        let neg = at.pi_mult.is_negative();
        let m = magnitude_str(&at.pi_mult.abs(), &["pi".into()]);
        if neg {
            format!("-{m}")
        } else {
            m
        }
    };
    if at.rat.is_zero() {
        pi_part
    } else if at.pi_mult.is_negative() {
        format!("{} - {}", rat_str(&at.rat), &pi_part[1..])
    } else {
        format!("{} + {}", rat_str(&at.rat), pi_part)
    }
}

/// Pairs up conjugate kernel monomials of an integral (or global) part
/// for display, returning per display-kernel leading coefficients.
fn realify_kernel_map(
    map: &std::collections::BTreeMap<FnKey, ExpPoly>,
) -> Vec<(ExpPoly, DispMono)> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<FnKey> = BTreeSet::new();
    for (k, f) in map {
        if seen.contains(k) {
            continue;
        }
        if k.alpha.im.is_zero() {
            out.push((
                f.clone(),
                DispMono {
                    pow: k.pow,
                    a: k.alpha.re.clone(),
                    trig: None,
                    complex: None,
                },
            ));
            continue;
        }
        let conj = FnKey {
            pow: k.pow,
            alpha: k.alpha.conj(),
        };
        match map.get(&conj) {
            Some(fc) => {
                seen.insert(k.clone());
                seen.insert(conj.clone());
                let (fp, fm) = if k.alpha.im.is_positive() {
                    (f.clone(), fc.clone())
                } else {
                    (fc.clone(), f.clone())
                };
                let b = k.alpha.im.abs();
                let a = k.alpha.re.clone();
                let sin_f = (&fp - &fm).scale(&ConstFraction::from_gauss(&GaussRat::i()));
                let cos_f = &fp + &fm;
                if !sin_f.is_zero() {
                    out.push((
                        sin_f,
                        DispMono {
                            pow: k.pow,
                            a: a.clone(),
                            trig: Some(Trig::Sin(b.clone())),
                            complex: None,
                        },
                    ));
                }
                if !cos_f.is_zero() {
                    out.push((
                        cos_f,
                        DispMono {
                            pow: k.pow,
                            a,
                            trig: Some(Trig::Cos(b)),
                            complex: None,
                        },
                    ));
                }
            }
            None => out.push((
                f.clone(),
                DispMono {
                    pow: k.pow,
                    a: Rat::zero(),
                    trig: None,
                    complex: Some(k.alpha.clone()),
                },
            )),
        }
    }
    out
}

/// One operator term from its leading coefficient and trailing factors.
/// `eval_first` marks that the first trailing factor is an evaluation, in
/// which case a function coefficient merges with it as `(f E[c])`.
fn op_term(
    f: &ExpPoly,
    tail: &[String],
    multi_term: bool,
    eval_first: bool,
) -> (bool, String) {
    if let Some(c) = f.as_constant() {
        let neg = c.leading_sign_negative();
        let mag = if neg { -&c } else { c.clone() };
        if tail.is_empty() {
            return (neg, print_const(&mag));
        }
        let group = tail.join(".");
        if mag.is_one() {
            let wrapped = if tail.len() >= 2 && multi_term {
                format!("({group})")
            } else {
                group
            };
            return (neg, wrapped);
        }
        let wrapped = if tail.len() >= 2 {
            format!("({group})")
        } else {
            group
        };
        let cs = print_const(&mag);
        let cs = if const_is_single(&mag) {
            cs
        } else {
            format!("({cs})")
        };
        return (neg, format!("{cs} {wrapped}"));
    }
    // function coefficient
    let disp = realify(f);
    let (neg, f_str) = if disp.len() == 1 {
        let (c, m) = &disp[0];
        let (neg, s) = fn_term_string(c, m);
        (neg, s)
    } else {
        (false, format!("({})", print_function(f)))
    };
    let mut factors: Vec<String> = Vec::new();
    let mut rest = tail;
    if eval_first && !tail.is_empty() {
        factors.push(format!("({} {})", f_str, tail[0]));
        rest = &tail[1..];
    } else {
        factors.push(f_str);
    }
    factors.extend(rest.iter().cloned());
    let body = factors.join(".");
    let wrapped = if factors.len() >= 2 && multi_term {
        format!("({body})")
    } else {
        body
    };
    (neg, wrapped)
}

pub fn print_operator(op: &IntDiffOp) -> String {
    let mut pending: Vec<(ExpPoly, Vec<String>, bool)> = Vec::new();
    for (i, f) in op.diff_part().iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let tail = match i {
            0 => vec![],
            1 => vec!["D".to_string()],
            k => vec![format!("D^{k}")],
        };
        pending.push((f.clone(), tail, false));
    }
    for (f, mono) in realify_kernel_map(op.int_part()) {
        let mut tail = vec!["A".to_string()];
        let kernel = mono.factors().join(" ");
        if !kernel.is_empty() {
            tail.push(kernel);
        }
        pending.push((f, tail, false));
    }
    for (at, ba) in op.bound_part() {
        let e = format!("E[{}]", print_point(at));
        for (ord, f) in &ba.local {
            let mut tail = vec![e.clone()];
            match ord {
                0 => {}
                1 => tail.push("D".to_string()),
                k => tail.push(format!("D^{k}")),
            }
            pending.push((f.clone(), tail, true));
        }
        for (f, mono) in realify_kernel_map(&ba.global) {
            let mut tail = vec![e.clone(), "A".to_string()];
            let kernel = mono.factors().join(" ");
            if !kernel.is_empty() {
                tail.push(kernel);
            }
            pending.push((f, tail, true));
        }
    }
    let multi = pending.len() > 1;
    let terms = pending
        .iter()
        .map(|(f, tail, eval_first)| op_term(f, tail, multi, *eval_first))
        .collect();
    join_signed(terms)
}

/// A separated-kernel branch in the variables `x` and `xi`.
pub fn print_bivar(b: &crate::boundary::BiExpPoly) -> String {
    let mut terms = Vec::new();
    for ((kx, kxi), c) in b.terms() {
        let neg = c.leading_sign_negative();
        let mag = if neg { -c } else { c.clone() };
        let mut factors = Vec::new();
        let var_factors = |k: &FnKey, var: &str| -> Vec<String> {
            let mut out = Vec::new();
            match k.pow {
                0 => {}
                1 => out.push(var.to_string()),
                p => out.push(format!("{var}^{p}")),
            }
            if !k.alpha.is_zero() {
                let inner = gauss_str(&k.alpha);
                let inner = if inner.contains(' ') {
                    format!("({inner})")
                } else {
                    inner
                };
                if inner == "1" {
                    out.push(format!("exp({var})"));
                } else {
                    out.push(format!("exp({inner} {var})"));
                }
            }
            out
        };
        factors.extend(var_factors(kx, "x"));
        factors.extend(var_factors(kxi, "xi"));
        let body = if let Some(r) = mag.as_rat() {
            magnitude_str(&r, &factors)
        } else if factors.is_empty() {
            print_const(&mag)
        } else {
            let cs = print_const(&mag);
            let cs = if const_is_single(&mag) {
                cs
            } else {
                format!("({cs})")
            };
            format!("{} {}", cs, factors.join(" "))
        };
        terms.push((neg, body));
    }
    join_signed(terms)
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Dot,
    Star,
    Slash,
    Plus,
    Minus,
    Caret,
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, col);
        let mut push = |tok| out.push(Lexed { tok, line: l, col: c });
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
                continue;
            }
            '[' => push(Tok::LBrack),
            ']' => push(Tok::RBrack),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            '.' => push(Tok::Dot),
            '*' => push(Tok::Star),
            '/' => push(Tok::Slash),
            '+' => push(Tok::Plus),
            '-' => push(Tok::Minus),
            '^' => push(Tok::Caret),
            _ if ch.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Int(s.parse().unwrap()),
                    line: l,
                    col: c,
                });
                continue;
            }
            _ if ch.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphabetic() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed {
                    tok: Tok::Ident(s),
                    line: l,
                    col: c,
                });
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character '{ch}'"),
                })
            }
        }
        chars.next();
        col += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    idx: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|l| &l.tok)
    }

    fn pos(&self) -> (usize, usize) {
        self.toks
            .get(self.idx)
            .or_else(|| self.toks.last())
            .map_or((1, 1), |l| (l.line, l.col))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.pos();
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|l| l.tok.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> Result<()> {
        if self.peek() == Some(tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {tok:?}")))
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(_) | Tok::Int(_) | Tok::LParen))
    }

    fn expr(&mut self) -> Result<IntDiffOp> {
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.idx += 1;
            negate = true;
        } else if matches!(self.peek(), Some(Tok::Plus)) {
            self.idx += 1;
        }
        let mut acc = {
            let t = self.term()?;
            if negate {
                -&t
            } else {
                t
            }
        };
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.idx += 1;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<IntDiffOp> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Dot | Tok::Star) => {
                    self.idx += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    let f = self.factor()?;
                    let c = op_as_function(&f)
                        .and_then(|p| p.as_constant())
                        .ok_or_else(|| self.err("division requires a constant divisor"))?;
                    if c.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&c.inv());
                }
                _ if self.starts_factor() => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<IntDiffOp> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.idx += 1;
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let n = usize::try_from(n).map_err(|_| self.err("exponent too large"))?;
                    acc = acc.pow(n);
                }
                _ => return Err(self.err("expected an integer exponent")),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<IntDiffOp> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(IntDiffOp::multiplication(ExpPoly::constant(
                ConstFraction::from_rat(Rat::from_integer(n)),
            ))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.eat(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "D" => Ok(IntDiffOp::der()),
                "A" => Ok(IntDiffOp::integral()),
                "x" => Ok(IntDiffOp::multiplication(ExpPoly::x())),
                "pi" => Ok(IntDiffOp::multiplication(ExpPoly::constant(
                    ConstFraction::from_value(ConstValue::pi()),
                ))),
                "i" => Ok(IntDiffOp::multiplication(ExpPoly::constant(
                    ConstFraction::from_gauss(&GaussRat::i()),
                ))),
                "E" => {
                    self.eat(&Tok::LBrack)?;
                    let inner = self.expr()?;
                    self.eat(&Tok::RBrack)?;
                    let at = op_as_point(&inner)
                        .ok_or_else(|| self.err("evaluation point must be q + r pi"))?;
                    Ok(IntDiffOp::evaluation(at))
                }
                "exp" | "sin" | "cos" => {
                    self.eat(&Tok::LParen)?;
                    let inner = self.expr()?;
                    self.eat(&Tok::RParen)?;
                    let p = op_as_function(&inner)
                        .ok_or_else(|| self.err("argument must be a function"))?;
                    self.elementary(&name, &p)
                }
                other => Err(self.err(format!("unknown name '{other}'"))),
            },
            _ => Err(self.err("expected an operator atom")),
        }
    }

    /// `exp`, `sin`, `cos` of either a constant or a scalar multiple of x.
    fn elementary(&mut self, name: &str, p: &ExpPoly) -> Result<IntDiffOp> {
        // linear case: c * x
        if let Some((k, c)) = p.single_term() {
            if k.pow == 1 && k.alpha.is_zero() {
                let f = match name {
                    "exp" => {
                        let a = c
                            .as_gauss()
                            .ok_or_else(|| self.err("unsupported exponent"))?;
                        ExpPoly::exp(a)
                    }
                    _ => {
                        let b = c
                            .as_rat()
                            .ok_or_else(|| self.err("trigonometric frequency must be rational"))?;
                        if name == "sin" {
                            ExpPoly::sin(b)
                        } else {
                            ExpPoly::cos(b)
                        }
                    }
                };
                return Ok(IntDiffOp::multiplication(f));
            }
        }
        // constant case
        let c = p
            .as_constant()
            .ok_or_else(|| self.err(format!("unsupported argument of {name}")))?;
        let (g1, g2) = const_linear_pi(&c).ok_or_else(|| self.err("argument must be q + r pi"))?;
        let value = match name {
            "exp" => ConstFraction::from_value(ConstValue::exponential(&g1, &g2)),
            _ => {
                let i = GaussRat::i();
                let e1 = ConstValue::exponential(&(&i * &g1), &(&i * &g2));
                let e2 = ConstValue::exponential(&(-&(&i * &g1)), &(-&(&i * &g2)));
                if name == "sin" {
                    ConstFraction::from_value(&e1 - &e2)
                        .scale_gauss(&GaussRat::new(Rat::zero(), crate::funcalg::rat(-1, 2)))
                } else {
                    ConstFraction::from_value(&e1 + &e2)
                        .scale_rat(&crate::funcalg::rat(1, 2))
                }
            }
        };
        Ok(IntDiffOp::multiplication(ExpPoly::constant(value)))
    }
}

/// A multiplication operator's function, if the operator is one.
pub fn op_as_function(op: &IntDiffOp) -> Option<ExpPoly> {
    if !op.is_diff_op() || op.diff_part().len() > 1 {
        return None;
    }
    Some(op.diff_part().first().cloned().unwrap_or_else(ExpPoly::zero))
}

/// Decomposes a constant as `g1 + g2 * pi` with Gaussian-rational parts.
fn const_linear_pi(c: &ConstFraction) -> Option<(GaussRat, GaussRat)> {
    let r = c.den().as_rat()?;
    let inv = r.recip();
    let mut g1 = GaussRat::zero();
    let mut g2 = GaussRat::zero();
    for (key, cyc) in c.num().terms() {
        let g = cyc.as_gauss()?.scale(&inv);
        if key.is_trivial() {
            g1 = &g1 + &g;
        } else if key.pi_pow == 1 && key.exp_arg.is_zero() && key.e_pi_pow.is_zero() {
            g2 = &g2 + &g;
        } else {
            return None;
        }
    }
    Some((g1, g2))
}

fn op_as_point(op: &IntDiffOp) -> Option<EvalPoint> {
    let c = op_as_function(op)?.as_constant()?;
    let (g1, g2) = const_linear_pi(&c)?;
    (g1.im.is_zero() && g2.im.is_zero()).then(|| EvalPoint {
        rat: g1.re,
        pi_mult: g2.re,
    })
}

pub fn parse_operator(text: &str) -> Result<IntDiffOp> {
    let toks = lex(text)?;
    let mut p = Parser { toks, idx: 0 };
    let op = p.expr()?;
    if p.idx != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(op)
}

pub fn parse_function(text: &str) -> Result<ExpPoly> {
    let op = parse_operator(text)?;
    op_as_function(&op).ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "expression is an operator, not a function".into(),
    })
}

pub fn parse_point(text: &str) -> Result<EvalPoint> {
    let op = parse_operator(text)?;
    op_as_point(&op).ok_or(Error::Parse {
        line: 1,
        col: 1,
        msg: "expected an evaluation point q + r pi".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcalg::rat;

    #[test]
    fn parse_basic_operators() {
        let d2 = parse_operator("D^2").unwrap();
        assert!(d2.equiv(&(&IntDiffOp::der() * &IntDiffOp::der())));
        let b = parse_operator("E[1] + E[1].A").unwrap();
        let e1 = IntDiffOp::evaluation(EvalPoint::one());
        let expect = &e1 + &(&e1 * &IntDiffOp::integral());
        assert!(b.equiv(&expect));
        // product is normalized on the fly
        let aa = parse_operator("A.A").unwrap();
        let expect = parse_operator("x.A - A.x").unwrap();
        assert!(aa.equiv(&expect));
    }

    #[test]
    fn parse_points_and_functions() {
        assert_eq!(parse_point("pi").unwrap(), EvalPoint::pi());
        assert_eq!(parse_point("2").unwrap(), EvalPoint::from_int(2));
        let p = parse_point("1/2 + 3 pi").unwrap();
        assert_eq!(p.rat, rat(1, 2));
        assert_eq!(p.pi_mult, rat(3, 1));
        let f = parse_function("x^2 exp(2 x) - sin(x)/2").unwrap();
        let expect = &(&ExpPoly::x().pow(2) * &ExpPoly::exp(GaussRat::from_int(2)))
            - &ExpPoly::sin(Rat::one()).scale(&ConstFraction::from_rat(rat(1, 2)));
        assert!(f.equiv(&expect));
    }

    #[test]
    fn print_basic_forms() {
        assert_eq!(print_operator(&IntDiffOp::zero()), "0");
        assert_eq!(print_operator(&IntDiffOp::one()), "1");
        assert_eq!(print_operator(&IntDiffOp::der()), "D");
        let aa = &IntDiffOp::integral() * &IntDiffOp::integral();
        assert_eq!(print_operator(&aa), "(x.A) - (A.x)");
        let e1a = &IntDiffOp::evaluation(EvalPoint::one()) * &IntDiffOp::integral();
        assert_eq!(print_operator(&e1a), "E[1].A");
    }

    #[test]
    fn print_greens_shape() {
        let x = IntDiffOp::multiplication(ExpPoly::x());
        let a = IntDiffOp::integral();
        let e1a = &IntDiffOp::evaluation(EvalPoint::one()) * &a;
        let g = &(&(&(&x * &a) - &(&a * &x)) - &(&x * &e1a)) + &(&x * &(&e1a * &x));
        assert_eq!(
            print_operator(&g),
            "(x.A) - (A.x) - ((x E[1]).A) + ((x E[1]).A.x)"
        );
    }

    #[test]
    fn print_trigonometric_kernels() {
        let epi = IntDiffOp::evaluation(EvalPoint::pi());
        let a = IntDiffOp::integral();
        let s = IntDiffOp::multiplication(ExpPoly::sin(Rat::one()));
        let op = &(&epi * &a) * &s;
        assert_eq!(print_operator(&op), "E[pi].A.sin(x)");
        let q = &IntDiffOp::one()
            - &op.scale(&ConstFraction::from_rat(rat(1, 2)));
        assert_eq!(print_operator(&q), "1 - 1/2 (E[pi].A.sin(x))");
    }

    #[test]
    fn round_trips() {
        let samples = [
            "D^2",
            "A.A",
            "E[1] + E[1].A",
            "x.A - A.x",
            "1 - 1/2 (E[pi].A.sin(x))",
            "exp(2 x).A.cos(3 x) - E[1/2].D^2",
            "pi/4 + exp(1/2) x",
            "E[pi].A.sin(x) + ((-pi/4 + x/2) E[pi]).A.cos(x)",
        ];
        for s in samples {
            let op = parse_operator(s).unwrap();
            let printed = print_operator(&op);
            let back = parse_operator(&printed).unwrap();
            assert!(op.equiv(&back), "round trip failed for {s}: {printed}");
            // printing is a fixed point
            assert_eq!(print_operator(&back), printed);
        }
    }

    #[test]
    fn print_functions() {
        assert_eq!(print_function(&ExpPoly::zero()), "0");
        let f = &(-ExpPoly::constant(ConstFraction::from_value(ConstValue::pi())
            .scale_rat(&rat(1, 4))))
            + &ExpPoly::x().scale(&ConstFraction::from_rat(rat(1, 2)));
        assert_eq!(print_function(&f), "-pi/4 + x/2");
        assert_eq!(print_function(&ExpPoly::sin(rat(2, 1))), "sin(2 x)");
        let g = parse_function(&print_function(&f)).unwrap();
        assert!(g.equiv(&f));
    }
}

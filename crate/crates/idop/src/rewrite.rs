//! Free words over the operator generators (functions, derivation,
//! integral, evaluations) reduced to normal form by leftmost application
//! of the defining relations. This is the classical rewriting route to
//! operator products; the direct normal-form composition in `opalg` is
//! checked against it.

use crate::funcalg::{ConstFraction, EvalPoint, ExpPoly};
use crate::opalg::IntDiffOp;

#[derive(Clone, PartialEq, Debug)]
pub enum Atom {
    Func(ExpPoly),
    Der,
    Int,
    Char(EvalPoint),
}

pub type Word = Vec<Atom>;

/// A formal linear combination of generator words.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct FreeExpr {
    pub terms: Vec<(ConstFraction, Word)>,
}

const STEP_CAP: usize = 100_000;

impl FreeExpr {
    pub fn from_word(word: Word) -> Self {
        FreeExpr {
            terms: vec![(ConstFraction::one(), word)],
        }
    }

    /// Word-by-word concatenation product of two expressions.
    pub fn concat(&self, rhs: &FreeExpr) -> FreeExpr {
        let mut terms = Vec::new();
        for (c1, w1) in &self.terms {
            for (c2, w2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend(w2.iter().cloned());
                terms.push((c1 * c2, w));
            }
        }
        FreeExpr { terms }
    }

    /// Exhaustive leftmost rewriting, then collection of the irreducible
    /// words into an operator normal form.
    pub fn normal_form(&self) -> IntDiffOp {
        let mut pending: Vec<(ConstFraction, Word)> = self.terms.clone();
        let mut done: Vec<(ConstFraction, Word)> = Vec::new();
        let mut steps = 0usize;
        while let Some((coeff, word)) = pending.pop() {
            if coeff.is_zero() {
                continue;
            }
            match reduce_once(&word) {
                None => done.push((coeff, word)),
                Some(replacements) => {
                    steps += 1;
                    assert!(steps < STEP_CAP, "rewriting exceeded the step cap");
                    for (c, w) in replacements {
                        pending.push((&coeff * &c, w));
                    }
                }
            }
        }
        let mut op = IntDiffOp::zero();
        for (coeff, word) in done {
            add_irreducible(&mut op, coeff, &word);
        }
        op
    }
}

/// One leftmost rewriting step; `None` when the word is irreducible.
fn reduce_once(word: &Word) -> Option<Vec<(ConstFraction, Word)>> {
    for i in 0..word.len() {
        if let Some(repl) = rule_at(word, i) {
            let mut out = Vec::new();
            for (c, mid, consumed) in repl {
                let mut w: Word = word[..i].to_vec();
                w.extend(mid);
                w.extend(word[i + consumed..].iter().cloned());
                out.push((c, w));
            }
            return Some(out);
        }
    }
    None
}

/// The relation applicable at position `i`, as replacement terms
/// `(coefficient, replacement atoms, window length)`.
#[allow(clippy::type_complexity)]
fn rule_at(word: &Word, i: usize) -> Option<Vec<(ConstFraction, Vec<Atom>, usize)>> {
    let one = ConstFraction::one;
    match (&word[i], word.get(i + 1), word.get(i + 2)) {
        // constant functions are absorbed into the coefficient
        (Atom::Func(f), _, _) if f.as_constant().is_some() => {
            Some(vec![(f.as_constant().unwrap(), vec![], 1)])
        }
        (Atom::Func(f), Some(Atom::Func(g)), _) => {
            Some(vec![(one(), vec![Atom::Func(f * g)], 2)])
        }
        (Atom::Char(_), Some(Atom::Char(q)), _) => {
            Some(vec![(one(), vec![Atom::Char(q.clone())], 2)])
        }
        (Atom::Char(p), Some(Atom::Func(f)), _) => {
            Some(vec![(f.eval(p), vec![Atom::Char(p.clone())], 2)])
        }
        (Atom::Der, Some(Atom::Func(f)), _) => Some(vec![
            (one(), vec![Atom::Func(f.clone()), Atom::Der], 2),
            (one(), vec![Atom::Func(f.diff())], 2),
        ]),
        (Atom::Der, Some(Atom::Char(_)), _) => Some(vec![]),
        (Atom::Der, Some(Atom::Int), _) => Some(vec![(one(), vec![], 2)]),
        (Atom::Int, Some(Atom::Func(f)), Some(Atom::Int)) => {
            let cf = f.cumint();
            Some(vec![
                (one(), vec![Atom::Func(cf.clone()), Atom::Int], 3),
                (-one(), vec![Atom::Int, Atom::Func(cf)], 3),
            ])
        }
        (Atom::Int, Some(Atom::Func(f)), Some(Atom::Der)) => Some(vec![
            (one(), vec![Atom::Func(f.clone())], 3),
            (-one(), vec![Atom::Int, Atom::Func(f.diff())], 3),
            (
                -f.eval(&EvalPoint::zero()),
                vec![Atom::Char(EvalPoint::zero())],
                3,
            ),
        ]),
        (Atom::Int, Some(Atom::Func(f)), Some(Atom::Char(p))) => Some(vec![(
            one(),
            vec![Atom::Func(f.cumint()), Atom::Char(p.clone())],
            3,
        )]),
        (Atom::Int, Some(Atom::Int), _) => Some(vec![
            (one(), vec![Atom::Func(ExpPoly::x()), Atom::Int], 2),
            (-one(), vec![Atom::Int, Atom::Func(ExpPoly::x())], 2),
        ]),
        (Atom::Int, Some(Atom::Der), _) => Some(vec![
            (one(), vec![], 2),
            (-one(), vec![Atom::Char(EvalPoint::zero())], 2),
        ]),
        (Atom::Int, Some(Atom::Char(p)), _) => Some(vec![(
            one(),
            vec![Atom::Func(ExpPoly::x()), Atom::Char(p.clone())],
            2,
        )]),
        _ => None,
    }
}

/// Reads an irreducible word `[f] [E[c]] (D^i | A [g])` into the normal
/// form accumulator.
fn add_irreducible(op: &mut IntDiffOp, coeff: ConstFraction, word: &Word) {
    let mut idx = 0;
    let mut f = ExpPoly::constant(coeff);
    if let Some(Atom::Func(g)) = word.get(idx) {
        f = &f * g;
        idx += 1;
    }
    let at = match word.get(idx) {
        Some(Atom::Char(p)) => {
            idx += 1;
            Some(p.clone())
        }
        _ => None,
    };
    let rest = &word[idx..];
    if rest.iter().all(|a| matches!(a, Atom::Der)) {
        match at {
            Some(p) => op.add_local(f, &p, rest.len()),
            None => op.add_diff(f, rest.len()),
        }
        return;
    }
    let g = match rest {
        [Atom::Int] => ExpPoly::one(),
        [Atom::Int, Atom::Func(g)] => g.clone(),
        _ => panic!("word is not in normal form: {word:?}"),
    };
    match at {
        Some(p) => op.add_global(f, &p, &g),
        None => op.add_int(f, &g),
    }
}

/// The free expression of an operator already in normal form.
pub fn to_free(op: &IntDiffOp) -> FreeExpr {
    let mut terms = Vec::new();
    for (i, f) in op.diff_part().iter().enumerate() {
        let mut w = vec![Atom::Func(f.clone())];
        w.extend(std::iter::repeat(Atom::Der).take(i));
        terms.push((ConstFraction::one(), w));
    }
    for (g, f) in op.int_part() {
        terms.push((
            ConstFraction::one(),
            vec![Atom::Func(f.clone()), Atom::Int, Atom::Func(g.to_poly())],
        ));
    }
    for (at, ba) in op.bound_part() {
        for (i, f) in &ba.local {
            let mut w = vec![Atom::Func(f.clone()), Atom::Char(at.clone())];
            w.extend(std::iter::repeat(Atom::Der).take(*i));
            terms.push((ConstFraction::one(), w));
        }
        for (h, f) in &ba.global {
            terms.push((
                ConstFraction::one(),
                vec![
                    Atom::Func(f.clone()),
                    Atom::Char(at.clone()),
                    Atom::Int,
                    Atom::Func(h.to_poly()),
                ],
            ));
        }
    }
    FreeExpr { terms }
}

/// Operator product computed purely by rewriting; the reference
/// implementation against which `IntDiffOp::mul` is validated.
pub fn oracle_multiply(p: &IntDiffOp, q: &IntDiffOp) -> IntDiffOp {
    to_free(p).concat(&to_free(q)).normal_form()
}

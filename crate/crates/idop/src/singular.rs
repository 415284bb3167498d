//! Generalized boundary problems `(T, B, E)`: compatibility conditions of
//! singular problems, the exceptional-space projector, embedding into a
//! regular problem through a left inverse of the evaluation matrix, and
//! the generalized Green's operator.

use crate::boundary::{
    cond_coords, evaluation_matrix, fundamental_right_inverse, span_reduce, BoundaryProblem,
    FundamentalSystem,
};
use crate::error::{Error, Result};
use crate::funcalg::ExpPoly;
use crate::linalg::ConstMatrix;
use crate::opalg::IntDiffOp;

#[derive(Clone, Debug)]
pub struct GeneralizedBoundaryProblem {
    t: IntDiffOp,
    conds: Vec<IntDiffOp>,
    exceptional: Vec<ExpPoly>,
    system: Option<FundamentalSystem>,
}

impl GeneralizedBoundaryProblem {
    /// Conditions are span-reduced on construction; the exceptional
    /// functions must be independent.
    pub fn new(
        t: IntDiffOp,
        conds: Vec<IntDiffOp>,
        exceptional: Vec<ExpPoly>,
    ) -> Result<Self> {
        let base = BoundaryProblem::new(t.clone(), conds.clone())?;
        let conds = span_reduce(base.conditions())?;
        if !exceptional.is_empty() {
            let m = gram_like(&exceptional);
            if m.rank() != exceptional.len() {
                return Err(Error::NotComplement);
            }
        }
        Ok(GeneralizedBoundaryProblem {
            t,
            conds,
            exceptional,
            system: None,
        })
    }

    pub fn with_system(mut self, basis: Vec<ExpPoly>) -> Result<Self> {
        self.system = Some(crate::boundary::user_fundamental_system(&self.t, basis)?);
        Ok(self)
    }

    pub fn operator(&self) -> &IntDiffOp {
        &self.t
    }

    pub fn conditions(&self) -> &[IntDiffOp] {
        &self.conds
    }

    pub fn exceptional(&self) -> &[ExpPoly] {
        &self.exceptional
    }

    pub fn order(&self) -> usize {
        self.t.diff_order().unwrap_or(0)
    }

    fn system(&self) -> Result<FundamentalSystem> {
        match &self.system {
            Some(fs) => Ok(fs.clone()),
            None => crate::boundary::fundamental_system(&self.t),
        }
    }

    /// Basis of the functionals annihilating everything the operator
    /// maps the admissible functions to. Built from the kernel of the
    /// transposed evaluation matrix, pushed through the fundamental
    /// right inverse, and normalized to leading coefficient one.
    pub fn compatibility_conditions(&self) -> Result<Vec<IntDiffOp>> {
        let fs = self.system()?;
        let ev = evaluation_matrix(&self.conds, &fs.basis)?;
        let tb = fundamental_right_inverse(&fs);
        let mut out = Vec::new();
        for v in ev.transpose().kernel() {
            let mut combo = IntDiffOp::zero();
            for (j, beta) in self.conds.iter().enumerate() {
                combo = &combo + &beta.scale(&v[j]);
            }
            let kappa = &combo * &tb;
            out.push(normalize_condition(&kappa)?);
        }
        Ok(out)
    }

    /// Full column rank of the evaluation matrix: no kernel function of
    /// `T` satisfies all conditions.
    pub fn has_full_column_rank(&self) -> Result<bool> {
        let fs = self.system()?;
        if fs.basis.is_empty() {
            return Ok(true);
        }
        let ev = evaluation_matrix(&self.conds, &fs.basis)?;
        Ok(ev.rank() == fs.basis.len())
    }

    /// True iff the exceptional space is a complement of the image of
    /// the admissible functions: as many compatibility conditions as
    /// exceptional functions, with invertible pairing.
    pub fn is_complement(&self) -> Result<bool> {
        let kappa = self.compatibility_conditions()?;
        if kappa.len() != self.exceptional.len() {
            return Ok(false);
        }
        if kappa.is_empty() {
            return Ok(true);
        }
        let m = evaluation_matrix(&kappa, &self.exceptional)?;
        Ok(!m.det()?.is_zero())
    }

    pub fn is_regular(&self) -> Result<bool> {
        Ok(self.has_full_column_rank()? && self.is_complement()?)
    }

    /// The projector `Q = 1 - sum w_i kt_i` onto the attainable forcing
    /// functions along the exceptional space, where
    /// `(kt_1..kt_s) = kappa(w)^-1 (kappa_1..kappa_s)`.
    pub fn projector_q(&self) -> Result<IntDiffOp> {
        let kappa = self.compatibility_conditions()?;
        if kappa.len() != self.exceptional.len() {
            return Err(Error::NotComplement);
        }
        if kappa.is_empty() {
            return Ok(IntDiffOp::one());
        }
        let m = evaluation_matrix(&kappa, &self.exceptional)?;
        let inv = m.inverse().map_err(|_| Error::NotComplement)?;
        let mut q = IntDiffOp::one();
        for (i, w) in self.exceptional.iter().enumerate() {
            let mut combo = IntDiffOp::zero();
            for (j, k) in kappa.iter().enumerate() {
                combo = &combo + &k.scale(inv.get(i, j));
            }
            q = &q - &(&IntDiffOp::multiplication(w.clone()) * &combo);
        }
        Ok(q)
    }

    /// Embeds into a regular problem by combining the conditions with a
    /// left inverse of the evaluation matrix (deterministic pivot rows).
    pub fn embed_regular(&self) -> Result<BoundaryProblem> {
        let fs = self.system()?;
        let ev = evaluation_matrix(&self.conds, &fs.basis)?;
        let rows = ev.independent_rows();
        self.embed_regular_with(&rows)
    }

    /// Same embedding from a caller-chosen independent row set; used to
    /// verify that the generalized Green's operator does not depend on
    /// the choice of left inverse.
    pub fn embed_regular_with(&self, rows: &[usize]) -> Result<BoundaryProblem> {
        let fs = self.system()?;
        let ev = evaluation_matrix(&self.conds, &fs.basis)?;
        let l = ev.left_inverse_with_rows(rows)?;
        let mut tilde = Vec::new();
        for i in 0..l.rows() {
            let mut combo = IntDiffOp::zero();
            for (j, beta) in self.conds.iter().enumerate() {
                combo = &combo + &beta.scale(l.get(i, j));
            }
            tilde.push(combo);
        }
        let p = BoundaryProblem::new(self.t.clone(), tilde)?;
        if !p.is_regular()? {
            return Err(Error::NotRegularGeneralized);
        }
        Ok(p)
    }

    /// `G = (T, B~)^-1 Q`: solves `Tu = Qf` under all conditions.
    pub fn greens_operator(&self) -> Result<IntDiffOp> {
        if !self.is_regular()? {
            return Err(Error::NotRegularGeneralized);
        }
        let embedded = self.embed_regular()?;
        let q = self.projector_q()?;
        Ok(&embedded.greens_operator()? * &q)
    }
}

/// Scales a condition so its first coordinate (in the canonical
/// condition coordinate order) is one.
fn normalize_condition(op: &IntDiffOp) -> Result<IntDiffOp> {
    cond_coords(op)?;
    match display_leading(op) {
        Some(lead) => Ok(op.scale(&lead.inv())),
        None => Ok(op.clone()),
    }
}

/// Leading coefficient of the condition as displayed: conjugate kernel
/// pairs count through their sine/cosine combinations, so that the
/// normalized condition prints without a scalar prefix.
fn display_leading(op: &IntDiffOp) -> Option<crate::funcalg::ConstFraction> {
    use crate::funcalg::{ConstFraction, GaussRat};
    use num::{Signed, Zero};
    let lead = |f: &ExpPoly| f.terms().values().next().cloned();
    let map_lead = |map: &std::collections::BTreeMap<crate::funcalg::FnKey, ExpPoly>| {
        let (k, f) = map.iter().next()?;
        if k.alpha.im.is_zero() {
            return lead(f);
        }
        let conj = crate::funcalg::FnKey {
            pow: k.pow,
            alpha: k.alpha.conj(),
        };
        match map.get(&conj) {
            Some(fc) => {
                let (fp, fm) = if k.alpha.im.is_positive() {
                    (f.clone(), fc.clone())
                } else {
                    (fc.clone(), f.clone())
                };
                let sin_f = (&fp - &fm).scale(&ConstFraction::from_gauss(&GaussRat::i()));
                if sin_f.is_zero() {
                    lead(&(&fp + &fm))
                } else {
                    lead(&sin_f)
                }
            }
            None => lead(f),
        }
    };
    for f in op.diff_part() {
        if !f.is_zero() {
            return lead(f);
        }
    }
    if let Some(c) = map_lead(op.int_part()) {
        return Some(c);
    }
    for ba in op.bound_part().values() {
        for f in ba.local.values() {
            if !f.is_zero() {
                return lead(f);
            }
        }
        if let Some(c) = map_lead(&ba.global) {
            return Some(c);
        }
    }
    None
}

/// Independence test for function lists: coefficient-vector rank over
/// the union of their monomials.
fn gram_like(fns: &[ExpPoly]) -> ConstMatrix {
    use crate::funcalg::ConstFraction;
    use std::collections::BTreeSet;
    let keys: Vec<_> = fns
        .iter()
        .flat_map(|f| f.terms().keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ConstMatrix::from_rows(
        fns.iter()
            .map(|f| {
                keys.iter()
                    .map(|k| f.terms().get(k).cloned().unwrap_or_else(ConstFraction::zero))
                    .collect()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::span_equal;
    use crate::funcalg::{rat, ConstFraction, EvalPoint};

    fn d_pow(n: usize) -> IntDiffOp {
        let mut coeffs = vec![ExpPoly::zero(); n];
        coeffs.push(ExpPoly::one());
        IntDiffOp::from_diff_coeffs(coeffs)
    }

    fn e_der(n: i64) -> IntDiffOp {
        &IntDiffOp::evaluation(EvalPoint::from_int(n)) * &IntDiffOp::der()
    }

    fn sing_plus() -> GeneralizedBoundaryProblem {
        GeneralizedBoundaryProblem::new(
            d_pow(2),
            vec![e_der(0), e_der(1), IntDiffOp::evaluation(EvalPoint::one())],
            vec![ExpPoly::one()],
        )
        .unwrap()
    }

    #[test]
    fn compatibility_of_neumann_problem() {
        // D^2 with u'(0), u'(1): single compatibility condition E[1] A
        let p = GeneralizedBoundaryProblem::new(d_pow(2), vec![e_der(0), e_der(1)], vec![])
            .unwrap();
        let kappa = p.compatibility_conditions().unwrap();
        let e1a = &IntDiffOp::evaluation(EvalPoint::one()) * &IntDiffOp::integral();
        assert_eq!(kappa.len(), 1);
        assert!(kappa[0].equiv(&e1a));
        // the three-condition variant has the same compatibility span
        let kappa_plus = sing_plus().compatibility_conditions().unwrap();
        assert!(span_equal(&kappa, &kappa_plus).unwrap());
    }

    #[test]
    fn regularity_of_generalized_problems() {
        assert!(sing_plus().is_regular().unwrap());
        let without_e = GeneralizedBoundaryProblem::new(
            d_pow(2),
            vec![e_der(0), e_der(1)],
            vec![ExpPoly::one()],
        )
        .unwrap();
        assert!(!without_e.has_full_column_rank().unwrap());
        assert!(!without_e.is_regular().unwrap());
    }

    #[test]
    fn complements_and_projectors() {
        let p = sing_plus();
        assert!(p.is_complement().unwrap());
        // Q = 1 - E[1] A
        let q = p.projector_q().unwrap();
        let e1a = &IntDiffOp::evaluation(EvalPoint::one()) * &IntDiffOp::integral();
        assert!(q.equiv(&(&IntDiffOp::one() - &e1a)));
        assert!((&q * &q).equiv(&q));

        // alternative exceptional space E = {x}: kappa(w) = [1/2]
        let p = GeneralizedBoundaryProblem::new(
            d_pow(2),
            vec![e_der(0), e_der(1), IntDiffOp::evaluation(EvalPoint::one())],
            vec![ExpPoly::x()],
        )
        .unwrap();
        assert!(p.is_complement().unwrap());
        let q = p.projector_q().unwrap();
        // Q = 1 - 2 x E[1] A
        let expect = &IntDiffOp::one()
            - &(&IntDiffOp::multiplication(ExpPoly::x().scale(&ConstFraction::from_int(2)))
                * &e1a);
        assert!(q.equiv(&expect));
        assert!((&q * &q).equiv(&q));
    }

    #[test]
    fn embedding_is_regular_and_within_span() {
        let p = sing_plus();
        let embedded = p.embed_regular().unwrap();
        assert!(embedded.is_regular().unwrap());
        assert_eq!(embedded.conditions().len(), 2);
        // embedded conditions lie in the span of the original ones
        let mut all = p.conditions().to_vec();
        all.extend(embedded.conditions().iter().cloned());
        assert!(span_equal(p.conditions(), &all).unwrap());
        // already-regular problems embed to themselves (span-wise)
        let reg = GeneralizedBoundaryProblem::new(
            d_pow(2),
            vec![
                IntDiffOp::evaluation(EvalPoint::zero()),
                IntDiffOp::evaluation(EvalPoint::one()),
            ],
            vec![],
        )
        .unwrap();
        let emb = reg.embed_regular().unwrap();
        assert!(span_equal(reg.conditions(), emb.conditions()).unwrap());
    }

    #[test]
    fn generalized_greens_operator_worked_example() {
        let p = sing_plus();
        let g = p.greens_operator().unwrap();
        // x A - A x - 1/2 (x^2 + 1) E[1] A + E[1] A x
        let x = IntDiffOp::multiplication(ExpPoly::x());
        let a = IntDiffOp::integral();
        let e1 = IntDiffOp::evaluation(EvalPoint::one());
        let half_x2p1 = (&ExpPoly::x().pow(2) + &ExpPoly::one())
            .scale(&ConstFraction::from_rat(rat(1, 2)));
        let expect = &(&(&(&x * &a) - &(&a * &x))
            - &(&IntDiffOp::multiplication(half_x2p1) * &(&e1 * &a)))
            + &(&(&e1 * &a) * &x);
        assert!(g.equiv(&expect));
        // T G = Q and all conditions annihilate G
        let q = p.projector_q().unwrap();
        assert!((p.operator() * &g).equiv(&q));
        for beta in p.conditions() {
            assert!((beta * &g).is_zero());
        }
    }

    #[test]
    fn left_inverse_choice_is_irrelevant() {
        let p = sing_plus();
        let g = p.greens_operator().unwrap();
        let q = p.projector_q().unwrap();
        for rows in [vec![0, 1], vec![0, 2], vec![1, 2]] {
            if let Ok(embedded) = p.embed_regular_with(&rows) {
                let alt = &embedded.greens_operator().unwrap() * &q;
                assert!(alt.equiv(&g));
            }
        }
    }

    #[test]
    fn degenerate_regular_case() {
        let reg = GeneralizedBoundaryProblem::new(
            d_pow(2),
            vec![
                IntDiffOp::evaluation(EvalPoint::zero()),
                IntDiffOp::evaluation(EvalPoint::one()),
            ],
            vec![],
        )
        .unwrap();
        assert!(reg.is_regular().unwrap());
        assert!(reg.projector_q().unwrap().equiv(&IntDiffOp::one()));
        let g = reg.greens_operator().unwrap();
        let base = BoundaryProblem::new(
            d_pow(2),
            vec![
                IntDiffOp::evaluation(EvalPoint::zero()),
                IntDiffOp::evaluation(EvalPoint::one()),
            ],
        )
        .unwrap();
        assert!(g.equiv(&base.greens_operator().unwrap()));
    }
}

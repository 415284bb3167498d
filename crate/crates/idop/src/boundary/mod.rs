//! Regular two-point boundary problems: fundamental systems and their
//! Wronskians, the variation-of-constants right inverse, regularity,
//! Green's operators and functions, composition and factorization.

mod roots;

pub use roots::poly_roots;

use crate::error::{Error, Result};
use crate::funcalg::{ConstFraction, EvalPoint, ExpPoly, FnKey, GaussRat, Rat};
use crate::linalg::ConstMatrix;
use crate::opalg::IntDiffOp;
use num::{BigInt, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A basis of the kernel of a monic differential operator together with
/// its Wronskian determinant (invertible by construction).
#[derive(Clone, Debug)]
pub struct FundamentalSystem {
    pub basis: Vec<ExpPoly>,
    pub wronskian_det: ExpPoly,
    pub user_supplied: bool,
}

/// Determinant of a matrix of exponential polynomials by Laplace
/// expansion (the entries form a ring, not a field).
fn exp_det(m: &[Vec<ExpPoly>]) -> ExpPoly {
    let n = m.len();
    if n == 0 {
        return ExpPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = ExpPoly::zero();
    for (i, row) in m.iter().enumerate() {
        if row[0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<ExpPoly>> = m
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, r)| r[1..].to_vec())
            .collect();
        let cof = &row[0] * &exp_det(&minor);
        if i % 2 == 0 {
            det = &det + &cof;
        } else {
            det = &det - &cof;
        }
    }
    det
}

fn wronskian_matrix(basis: &[ExpPoly]) -> Vec<Vec<ExpPoly>> {
    let n = basis.len();
    (0..n)
        .map(|i| basis.iter().map(|u| u.diff_n(i)).collect())
        .collect()
}

/// Extracts the constant Gaussian-rational coefficients of a monic
/// differential operator.
fn constant_coeffs(t: &IntDiffOp) -> Result<Vec<GaussRat>> {
    if !t.is_diff_op() || t.diff_part().is_empty() {
        return Err(Error::NotConstantCoefficient);
    }
    let coeffs: Option<Vec<GaussRat>> = t
        .diff_part()
        .iter()
        .map(|f| f.as_constant().and_then(|c| c.as_gauss()))
        .collect();
    let coeffs = coeffs.ok_or(Error::NotConstantCoefficient)?;
    if !coeffs.last().unwrap().is_one() {
        return Err(Error::NotConstantCoefficient);
    }
    Ok(coeffs)
}

/// Kernel basis for a monic constant-coefficient operator whose
/// characteristic polynomial splits over Q(i). Real coefficient lists get
/// a real basis: conjugate root pairs `a +- bi` contribute
/// `x^j e^(ax) sin(bx)` and `x^j e^(ax) cos(bx)`.
pub fn fundamental_system(t: &IntDiffOp) -> Result<FundamentalSystem> {
    let coeffs = constant_coeffs(t)?;
    if coeffs.len() == 1 {
        return finish_system(t, Vec::new(), false);
    }
    let roots = poly_roots(&coeffs)?;
    let all_real = coeffs.iter().all(|c| c.im.is_zero());
    let mut basis = Vec::new();
    let mut consumed: BTreeSet<usize> = BTreeSet::new();
    for (idx, (r, m)) in roots.iter().enumerate() {
        if consumed.contains(&idx) {
            continue;
        }
        if all_real && !r.im.is_zero() {
            let conj = r.conj();
            let pair = roots
                .iter()
                .position(|(s, sm)| *s == conj && sm == m)
                .expect("conjugate root missing for a real operator");
            consumed.insert(pair);
            let b = r.im.abs();
            let envelope = ExpPoly::exp(GaussRat::from_rat(r.re.clone()));
            for j in 0..*m {
                let xj = ExpPoly::x().pow(j as u32);
                basis.push(&(&xj * &envelope) * &ExpPoly::sin(b.clone()));
                basis.push(&(&xj * &envelope) * &ExpPoly::cos(b.clone()));
            }
        } else {
            for j in 0..*m {
                basis.push(&ExpPoly::x().pow(j as u32) * &ExpPoly::exp(r.clone()));
            }
        }
    }
    finish_system(t, basis, false)
}

/// Validates and packages a caller-supplied kernel basis; the escape
/// hatch for operators whose characteristic polynomial does not split
/// over Q(i).
pub fn user_fundamental_system(t: &IntDiffOp, basis: Vec<ExpPoly>) -> Result<FundamentalSystem> {
    finish_system(t, basis, true)
}

fn finish_system(t: &IntDiffOp, basis: Vec<ExpPoly>, user: bool) -> Result<FundamentalSystem> {
    let n = t.diff_order().unwrap_or(0);
    if basis.len() != n {
        return Err(Error::InvalidFundamentalSystem(format!(
            "expected {} basis functions, got {}",
            n,
            basis.len()
        )));
    }
    for u in &basis {
        if !t.apply(u).is_zero() {
            return Err(Error::InvalidFundamentalSystem(
                "basis function not annihilated by the operator".into(),
            ));
        }
    }
    let det = exp_det(&wronskian_matrix(&basis));
    if !det.is_invertible() {
        return Err(Error::InvalidFundamentalSystem(
            "Wronskian determinant is not invertible".into(),
        ));
    }
    Ok(FundamentalSystem {
        basis,
        wronskian_det: det,
        user_supplied: user,
    })
}

/// The variation-of-constants right inverse `sum u_i A (d_i / d)`, where
/// `d` is the Wronskian determinant and `d_i` replaces the i-th column by
/// the last unit vector.
pub fn fundamental_right_inverse(fs: &FundamentalSystem) -> IntDiffOp {
    let n = fs.basis.len();
    if n == 0 {
        return IntDiffOp::one();
    }
    let w = wronskian_matrix(&fs.basis);
    let mut op = IntDiffOp::zero();
    for i in 0..n {
        let mut wi = w.clone();
        for (row, wr) in wi.iter_mut().enumerate() {
            wr[i] = if row == n - 1 {
                ExpPoly::one()
            } else {
                ExpPoly::zero()
            };
        }
        let di = exp_det(&wi);
        op.add_int(fs.basis[i].clone(), &di.div_invertible(&fs.wronskian_det));
    }
    op
}

/// Canonical coordinates for Stieltjes boundary conditions: one axis per
/// (point, derivative order) and per (point, integral kernel monomial).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CondKey {
    Local(EvalPoint, usize),
    Global(EvalPoint, FnKey),
}

/// Coefficient vector of a Stieltjes condition; fails on non-constant
/// leading coefficients or a non-functional shape.
pub fn cond_coords(op: &IntDiffOp) -> Result<BTreeMap<CondKey, ConstFraction>> {
    if !op.is_bound_op() {
        return Err(Error::NotStieltjes(
            "condition has differential or integral parts".into(),
        ));
    }
    let mut out = BTreeMap::new();
    for (at, ba) in op.bound_part() {
        for (ord, f) in &ba.local {
            let c = f.as_constant().ok_or_else(|| {
                Error::NotStieltjes("non-constant coefficient on a point evaluation".into())
            })?;
            out.insert(CondKey::Local(at.clone(), *ord), c);
        }
        for (h, f) in &ba.global {
            let c = f.as_constant().ok_or_else(|| {
                Error::NotStieltjes("non-constant coefficient on an integral term".into())
            })?;
            out.insert(CondKey::Global(at.clone(), h.clone()), c);
        }
    }
    Ok(out)
}

/// Rebuilds a condition from its coordinate vector.
pub fn cond_from_coords(coords: &BTreeMap<CondKey, ConstFraction>) -> IntDiffOp {
    let mut op = IntDiffOp::zero();
    for (key, c) in coords {
        let f = ExpPoly::constant(c.clone());
        match key {
            CondKey::Local(at, ord) => op.add_local(f, at, *ord),
            CondKey::Global(at, h) => op.add_global(f, at, &h.to_poly()),
        }
    }
    op
}

fn cond_matrix(conds: &[IntDiffOp]) -> Result<(Vec<CondKey>, ConstMatrix)> {
    let vecs: Vec<BTreeMap<CondKey, ConstFraction>> =
        conds.iter().map(cond_coords).collect::<Result<_>>()?;
    let keys: Vec<CondKey> = vecs
        .iter()
        .flat_map(|v| v.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let rows = vecs
        .iter()
        .map(|v| {
            keys.iter()
                .map(|k| v.get(k).cloned().unwrap_or_else(ConstFraction::zero))
                .collect()
        })
        .collect();
    Ok((keys, ConstMatrix::from_rows(rows)))
}

/// Deterministic echelon reduction of a condition list to an independent
/// spanning set.
pub fn span_reduce(conds: &[IntDiffOp]) -> Result<Vec<IntDiffOp>> {
    if conds.is_empty() {
        return Ok(Vec::new());
    }
    let (keys, m) = cond_matrix(conds)?;
    let (r, pivots) = m.rref();
    let mut out = Vec::new();
    for row in 0..pivots.len() {
        let coords: BTreeMap<CondKey, ConstFraction> = keys
            .iter()
            .enumerate()
            .filter(|(j, _)| !r.get(row, *j).is_zero())
            .map(|(j, k)| (k.clone(), r.get(row, j).clone()))
            .collect();
        out.push(cond_from_coords(&coords));
    }
    Ok(out)
}

/// Span equality of two condition lists over the common coordinate set.
pub fn span_equal(a: &[IntDiffOp], b: &[IntDiffOp]) -> Result<bool> {
    let mut all: Vec<IntDiffOp> = a.to_vec();
    all.extend(b.iter().cloned());
    if all.is_empty() {
        return Ok(true);
    }
    let (_, ma) = cond_matrix(&all[..a.len()].to_vec())?;
    let ra = if a.is_empty() { 0 } else { ma.rank() };
    let (_, mb) = cond_matrix(&all[a.len()..].to_vec())?;
    let rb = if b.is_empty() { 0 } else { mb.rank() };
    let (_, mu) = cond_matrix(&all)?;
    Ok(ra == rb && rb == mu.rank())
}

/// Entry (i, j) is condition i applied to function j.
pub fn evaluation_matrix(conds: &[IntDiffOp], fns: &[ExpPoly]) -> Result<ConstMatrix> {
    let mut rows = Vec::new();
    for c in conds {
        let mut row = Vec::new();
        for f in fns {
            let v = c.apply(f).as_constant().ok_or_else(|| {
                Error::NotStieltjes("condition does not evaluate to a constant".into())
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(ConstMatrix::from_rows(rows))
}

/// A monic differential operator with Stieltjes boundary conditions.
#[derive(Clone, Debug)]
pub struct BoundaryProblem {
    t: IntDiffOp,
    conds: Vec<IntDiffOp>,
    system: Option<FundamentalSystem>,
}

impl BoundaryProblem {
    pub fn new(t: IntDiffOp, conds: Vec<IntDiffOp>) -> Result<Self> {
        if !t.is_diff_op()
            || !t
                .diff_part()
                .last()
                .map_or(false, |c| c.is_one())
        {
            return Err(Error::NotConstantCoefficient);
        }
        for c in &conds {
            cond_coords(c)?;
        }
        Ok(BoundaryProblem {
            t,
            conds,
            system: None,
        })
    }

    /// Attaches a user-supplied fundamental system (validated).
    pub fn with_system(mut self, basis: Vec<ExpPoly>) -> Result<Self> {
        self.system = Some(user_fundamental_system(&self.t, basis)?);
        Ok(self)
    }

    pub fn operator(&self) -> &IntDiffOp {
        &self.t
    }

    pub fn conditions(&self) -> &[IntDiffOp] {
        &self.conds
    }

    pub fn order(&self) -> usize {
        self.t.diff_order().unwrap_or(0)
    }

    pub fn system(&self) -> Result<FundamentalSystem> {
        match &self.system {
            Some(fs) => Ok(fs.clone()),
            None => fundamental_system(&self.t),
        }
    }

    /// Regular iff the conditions are as many as the order and the
    /// evaluation matrix is invertible.
    pub fn is_regular(&self) -> Result<bool> {
        if self.conds.len() != self.order() {
            return Ok(false);
        }
        if self.order() == 0 {
            return Ok(true);
        }
        let fs = self.system()?;
        let m = evaluation_matrix(&self.conds, &fs.basis)?;
        Ok(!m.det()?.is_zero())
    }

    /// The projector onto the kernel of `T` along the functions
    /// annihilated by the conditions.
    pub fn kernel_projector(&self) -> Result<IntDiffOp> {
        if self.order() == 0 {
            return Ok(IntDiffOp::zero());
        }
        let fs = self.system()?;
        if self.conds.len() != self.order() {
            return Err(Error::NotRegular);
        }
        let ev = evaluation_matrix(&self.conds, &fs.basis)?;
        let inv = ev.inverse().map_err(|_| Error::NotRegular)?;
        let mut p = IntDiffOp::zero();
        for (i, u) in fs.basis.iter().enumerate() {
            let mut combo = IntDiffOp::zero();
            for (j, beta) in self.conds.iter().enumerate() {
                combo = &combo + &beta.scale(inv.get(i, j));
            }
            p = &p + &(&IntDiffOp::multiplication(u.clone()) * &combo);
        }
        Ok(p)
    }

    /// `G = (1 - P) T^b`: the solution operator mapping each forcing
    /// function to the unique solution satisfying the conditions.
    pub fn greens_operator(&self) -> Result<IntDiffOp> {
        let fs = self.system()?;
        let p = self.kernel_projector()?;
        let tb = fundamental_right_inverse(&fs);
        Ok(&(&IntDiffOp::one() - &p) * &tb)
    }

    /// Problem equality: same operator, same span of conditions.
    pub fn equiv(&self, rhs: &BoundaryProblem) -> Result<bool> {
        Ok(self.t.equiv(&rhs.t) && span_equal(&self.conds, &rhs.conds)?)
    }
}

/// A two-branch integral kernel on `[0, b]`: finite sums of separated
/// products `f(x) g(xi)`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct BiExpPoly {
    terms: BTreeMap<(FnKey, FnKey), ConstFraction>,
}

impl BiExpPoly {
    pub fn zero() -> Self {
        BiExpPoly::default()
    }

    pub fn add_product(&mut self, f: &ExpPoly, g: &ExpPoly) {
        for (kf, cf) in f.terms() {
            for (kg, cg) in g.terms() {
                let key = (kf.clone(), kg.clone());
                let add = cf * cg;
                let entry = self
                    .terms
                    .entry(key.clone())
                    .or_insert_with(ConstFraction::zero);
                *entry = &*entry + &add;
                if entry.is_zero() {
                    self.terms.remove(&key);
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<(FnKey, FnKey), ConstFraction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn equiv(&self, rhs: &BiExpPoly) -> bool {
        let mut diff = self.clone();
        for ((kf, kg), c) in &rhs.terms {
            let mut m = BiExpPoly::zero();
            m.add_product(
                &ExpPoly::monomial(kf.clone(), -c.clone()),
                &ExpPoly::monomial(kg.clone(), ConstFraction::one()),
            );
            for (k, v) in m.terms {
                let entry = diff.terms.entry(k.clone()).or_insert_with(ConstFraction::zero);
                *entry = &*entry + &v;
                if entry.is_zero() {
                    diff.terms.remove(&k);
                }
            }
        }
        diff.is_zero()
    }

    /// Restriction to the diagonal `xi = x`.
    pub fn on_diagonal(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for ((kf, kg), c) in &self.terms {
            let m = ExpPoly::monomial(
                FnKey {
                    pow: kf.pow + kg.pow,
                    alpha: &kf.alpha + &kg.alpha,
                },
                c.clone(),
            );
            out = &out + &m;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct GreensFunction {
    pub b: EvalPoint,
    pub lower: BiExpPoly,
    pub upper: BiExpPoly,
}

impl GreensFunction {
    /// `int_0^b G(x, xi) f(xi) dxi`, split at the diagonal.
    pub fn apply(&self, f: &ExpPoly) -> ExpPoly {
        let mut res = ExpPoly::zero();
        for ((kf, kg), c) in self.lower.terms() {
            let cum = (&kg.to_poly() * f).cumint();
            res = &res + &(&kf.to_poly().scale(c) * &cum);
        }
        for ((kf, kg), c) in self.upper.terms() {
            let cum = (&kg.to_poly() * f).cumint();
            let tail = &ExpPoly::constant(cum.eval(&self.b)) - &cum;
            res = &res + &(&kf.to_poly().scale(c) * &tail);
        }
        res
    }
}

/// Extracts the integral kernel of the Green's operator of a regular
/// two-point problem on `[0, b]`.
pub fn greens_function(p: &BoundaryProblem, b: &EvalPoint) -> Result<GreensFunction> {
    let g = p.greens_operator()?;
    for (at, _) in g.bound_part() {
        if !at.is_zero() && at != b {
            return Err(Error::NotTwoPoint);
        }
    }
    if !g.diff_part().is_empty() || g.bound_part().values().any(|ba| !ba.local.is_empty()) {
        return Err(Error::NotKernelRepresentable);
    }
    let mut lower = BiExpPoly::zero();
    let mut upper = BiExpPoly::zero();
    for (h, f) in g.int_part() {
        lower.add_product(f, &h.to_poly());
    }
    if let Some(ba) = g.bound_part().get(b) {
        for (h, f) in &ba.global {
            lower.add_product(f, &h.to_poly());
            upper.add_product(f, &h.to_poly());
        }
    }
    Ok(GreensFunction {
        b: b.clone(),
        lower,
        upper,
    })
}

/// `(T1, B1) o (T2, B2) = (T1 T2, B1 T2 + B2)`, conditions span-reduced.
pub fn compose(p1: &BoundaryProblem, p2: &BoundaryProblem) -> Result<BoundaryProblem> {
    let t = p1.operator() * p2.operator();
    let mut conds: Vec<IntDiffOp> = p1
        .conditions()
        .iter()
        .map(|beta| beta * p2.operator())
        .collect();
    conds.extend(p2.conditions().iter().cloned());
    BoundaryProblem::new(t, span_reduce(&conds)?)
}

/// Lifts a factorization `T = T1 T2` of the differential operator to a
/// factorization of the whole problem: `B2` is a greedily chosen regular
/// subset of the conditions, `B1` the transfer of the rest through the
/// right factor's Green's operator.
pub fn factor_problem(
    p: &BoundaryProblem,
    t1: &IntDiffOp,
    t2: &IntDiffOp,
) -> Result<(BoundaryProblem, BoundaryProblem)> {
    if !(t1 * t2).equiv(p.operator()) {
        return Err(Error::FactorizationNotLiftable);
    }
    let n2 = t2.diff_order().unwrap_or(0);
    let fs2 = fundamental_system(t2)?;
    let mut chosen: Vec<IntDiffOp> = Vec::new();
    for beta in p.conditions() {
        if chosen.len() == n2 {
            break;
        }
        let mut candidate = chosen.clone();
        candidate.push(beta.clone());
        let ev = evaluation_matrix(&candidate, &fs2.basis)?;
        if ev.rank() == candidate.len() {
            chosen = candidate;
        }
    }
    if chosen.len() != n2 {
        return Err(Error::FactorizationNotLiftable);
    }
    let p2 = BoundaryProblem::new(t2.clone(), chosen)?;
    let g2 = p2.greens_operator()?;
    let transferred: Vec<IntDiffOp> = p
        .conditions()
        .iter()
        .map(|beta| beta * &g2)
        .collect();
    let b1 = span_reduce(&transferred)?;
    let p1 = BoundaryProblem::new(t1.clone(), b1)?;
    Ok((p1, p2))
}

/// Factors a monic constant-coefficient operator into monic linear and
/// real-quadratic factors, ordered by root.
pub fn factor_diffop(t: &IntDiffOp) -> Result<Vec<IntDiffOp>> {
    let coeffs = constant_coeffs(t)?;
    let roots = poly_roots(&coeffs)?;
    let all_real = coeffs.iter().all(|c| c.im.is_zero());
    // real factors ordered by descending root, then quadratics
    let mut keyed: Vec<((Rat, std::cmp::Reverse<Rat>, Rat), IntDiffOp)> = Vec::new();
    let mut consumed: BTreeSet<usize> = BTreeSet::new();
    for (idx, (r, m)) in roots.iter().enumerate() {
        if consumed.contains(&idx) {
            continue;
        }
        let key = (
            r.im.abs(),
            std::cmp::Reverse(r.re.clone()),
            r.im.clone(),
        );
        if all_real && !r.im.is_zero() {
            let conj = r.conj();
            let pair = roots
                .iter()
                .position(|(s, sm)| *s == conj && sm == m)
                .expect("conjugate root missing for a real operator");
            consumed.insert(pair);
            // (d - r)(d - conj r) = d^2 - 2 Re(r) d + |r|^2
            let two_re = ConstFraction::from_rat(&r.re * &Rat::from_integer(BigInt::from(2)));
            let norm = ConstFraction::from_rat(r.norm());
            for _ in 0..*m {
                keyed.push((
                    key.clone(),
                    IntDiffOp::from_diff_coeffs(vec![
                        ExpPoly::constant(norm.clone()),
                        ExpPoly::constant(-&two_re),
                        ExpPoly::one(),
                    ]),
                ));
            }
        } else {
            for _ in 0..*m {
                keyed.push((
                    key.clone(),
                    IntDiffOp::from_diff_coeffs(vec![
                        ExpPoly::constant(-ConstFraction::from_gauss(r)),
                        ExpPoly::one(),
                    ]),
                ));
            }
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, op)| op).collect())
}

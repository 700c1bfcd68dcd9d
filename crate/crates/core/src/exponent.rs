//! Exact exponent bookkeeping for the upper bound on `P(n)`.
//!
//! The saving `gamma(delta, lambda)` is the minimum of three linear forms:
//!
//! ```text
//! form1 = lambda - 2 delta
//! form2 = delta
//! form3 = 4/63 - (349/84) delta - (13/84) lambda
//! ```
//!
//! valid for `delta < 1/18` and `lambda <= 1/3 - delta`. Everything is exact;
//! the arbitrary `eps` slack of the asymptotic statements is dropped, so all
//! exponents here are "up to eps".

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::euler::{alternating_partial_sum, factorial, inv_e_within, RationalInterval};

fn q(p: i64, d: i64) -> BigRational {
    BigRational::new(p.into(), d.into())
}

/// `1/18`, the (strict) upper limit on `delta`.
pub fn delta_limit() -> BigRational {
    q(1, 18)
}

/// The parameter choice `delta = 2/177`, `lambda = 3 delta`.
pub fn reference_point() -> (BigRational, BigRational) {
    (q(2, 177), q(6, 177))
}

/// `constant + delta_coef * delta + lambda_coef * lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: BigRational,
    pub delta_coef: BigRational,
    pub lambda_coef: BigRational,
}

impl LinearForm {
    pub fn new(constant: BigRational, delta_coef: BigRational, lambda_coef: BigRational) -> Self {
        LinearForm {
            constant,
            delta_coef,
            lambda_coef,
        }
    }

    pub fn eval(&self, delta: &BigRational, lambda: &BigRational) -> BigRational {
        &self.constant + &self.delta_coef * delta + &self.lambda_coef * lambda
    }
}

/// The three forms whose minimum is `gamma`.
pub fn standard_forms() -> Vec<LinearForm> {
    vec![
        LinearForm::new(q(0, 1), q(-2, 1), q(1, 1)),
        LinearForm::new(q(0, 1), q(1, 1), q(0, 1)),
        LinearForm::new(q(4, 63), q(-349, 84), q(-13, 84)),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPoint {
    pub delta: BigRational,
    pub lambda: BigRational,
    pub forms: Vec<BigRational>,
    pub gamma: BigRational,
    /// `delta < 1/18`.
    pub delta_admissible: bool,
    /// `lambda <= 1/3 - delta`.
    pub lambda_admissible: bool,
}

impl ExponentPoint {
    fn evaluate(forms: &[LinearForm], delta: BigRational, lambda: BigRational) -> Self {
        let values: Vec<BigRational> = forms.iter().map(|f| f.eval(&delta, &lambda)).collect();
        let gamma = values.iter().min().cloned().expect("at least one form");
        let delta_admissible = delta < delta_limit();
        let lambda_admissible = lambda <= q(1, 3) - &delta;
        ExponentPoint {
            delta,
            lambda,
            forms: values,
            gamma,
            delta_admissible,
            lambda_admissible,
        }
    }

    pub fn feasible(&self) -> bool {
        self.delta_admissible && self.lambda_admissible
    }
}

/// `gamma(delta, lambda)` with all three forms, exactly.
pub fn gamma(delta: &BigRational, lambda: &BigRational) -> ExponentPoint {
    ExponentPoint::evaluate(&standard_forms(), delta.clone(), lambda.clone())
}

/// Exponents of the three ranges of dyadic scales in the upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetReport {
    /// `A > n^(2/3 + delta)`, from the Archimedean bound.
    pub head_exponent: BigRational,
    /// `A < n^(2/3 - 2 delta)`, from the divisor bound.
    pub tail_exponent: BigRational,
    /// The middle range, `1/3 - gamma`.
    pub middle_exponent: BigRational,
    /// `1/3 - min(delta, gamma)`.
    pub overall: BigRational,
    pub point: ExponentPoint,
}

pub fn exponent_budget(delta: &BigRational, lambda: &BigRational) -> BudgetReport {
    let point = gamma(delta, lambda);
    let third = q(1, 3);
    let head = &third - delta;
    let tail = &third - delta;
    let middle = &third - &point.gamma;
    let overall = (&head).max(&tail).max(&middle).clone();
    BudgetReport {
        head_exponent: head,
        tail_exponent: tail,
        middle_exponent: middle,
        overall,
        point,
    }
}

/// `delta_coef * delta + lambda_coef * lambda <= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub delta_coef: BigRational,
    pub lambda_coef: BigRational,
    pub bound: BigRational,
}

impl Constraint {
    pub fn new(delta_coef: BigRational, lambda_coef: BigRational, bound: BigRational) -> Self {
        Constraint {
            delta_coef,
            lambda_coef,
            bound,
        }
    }
}

/// Maximize `min_i form_i(delta, lambda)` over a polygon in the
/// `(delta, lambda)` plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentProgram {
    pub forms: Vec<LinearForm>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub point: ExponentPoint,
    /// The optimal value of the max-min program.
    pub value: BigRational,
    /// Feasible vertices compared to certify the optimum.
    pub vertices_checked: usize,
    /// The optimum sits on `delta = 1/18`, which is strict in the hypotheses.
    pub on_strict_boundary: bool,
}

impl Default for ExponentProgram {
    fn default() -> Self {
        Self::standard()
    }
}

impl ExponentProgram {
    /// `0 <= delta <= 1/18`, `0 <= lambda <= 1/3 - delta`, standard forms.
    /// `delta < 1/18` is closed for enumeration; optima on it are flagged.
    pub fn standard() -> Self {
        ExponentProgram {
            forms: standard_forms(),
            constraints: vec![
                Constraint::new(q(-1, 1), q(0, 1), q(0, 1)),
                Constraint::new(q(1, 1), q(0, 1), delta_limit()),
                Constraint::new(q(0, 1), q(-1, 1), q(0, 1)),
                Constraint::new(q(1, 1), q(1, 1), q(1, 3)),
            ],
        }
    }

    pub fn with_forms(mut self, forms: Vec<LinearForm>) -> Self {
        self.forms = forms;
        self
    }

    pub fn with_constraint(mut self, c: Constraint) -> Self {
        self.constraints.push(c);
        self
    }

    /// Adds `delta_coef * delta + lambda_coef * lambda = value`.
    pub fn with_equality(
        self,
        delta_coef: BigRational,
        lambda_coef: BigRational,
        value: BigRational,
    ) -> Self {
        let neg = Constraint::new(-&delta_coef, -&lambda_coef, -&value);
        self.with_constraint(Constraint::new(delta_coef, lambda_coef, value))
            .with_constraint(neg)
    }

    pub fn evaluate(&self, delta: &BigRational, lambda: &BigRational) -> ExponentPoint {
        ExponentPoint::evaluate(&self.forms, delta.clone(), lambda.clone())
    }

    /// Exact optimum by vertex enumeration in `(delta, lambda, t)` space,
    /// where `t <= form_i` for every form. Ties go to the smallest `delta`,
    /// then the smallest `lambda`.
    ///
    /// The constraints must bound `delta` and `lambda`; with at least one
    /// form, `t` is then bounded above and the maximum sits at a vertex.
    pub fn solve(&self) -> Result<Optimum> {
        if self.forms.is_empty() {
            return Err(Error::Domain("exponent program has no forms".into()));
        }
        // rows [c_delta, c_lambda, c_t] . x <= rhs
        let mut rows: Vec<([BigRational; 3], BigRational)> = Vec::new();
        for f in &self.forms {
            rows.push((
                [-&f.delta_coef, -&f.lambda_coef, BigRational::one()],
                f.constant.clone(),
            ));
        }
        for c in &self.constraints {
            rows.push((
                [c.delta_coef.clone(), c.lambda_coef.clone(), BigRational::zero()],
                c.bound.clone(),
            ));
        }

        let mut best: Option<[BigRational; 3]> = None;
        let mut checked = 0;
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                for k in j + 1..rows.len() {
                    let Some(x) = solve3(&rows[i], &rows[j], &rows[k]) else {
                        continue;
                    };
                    let feasible = rows.iter().all(|(coef, rhs)| dot(coef, &x) <= *rhs);
                    if !feasible {
                        continue;
                    }
                    checked += 1;
                    let better = match &best {
                        None => true,
                        Some(b) => (&x[2], -&x[0], -&x[1]) > (&b[2], -&b[0], -&b[1]),
                    };
                    if better {
                        best = Some(x);
                    }
                }
            }
        }
        let [delta, lambda, value] =
            best.ok_or_else(|| Error::Domain("exponent program is infeasible".into()))?;
        let point = self.evaluate(&delta, &lambda);
        debug_assert_eq!(point.gamma, value);
        Ok(Optimum {
            on_strict_boundary: delta == delta_limit(),
            point,
            value,
            vertices_checked: checked,
        })
    }
}

fn dot(a: &[BigRational; 3], x: &[BigRational; 3]) -> BigRational {
    &a[0] * &x[0] + &a[1] * &x[1] + &a[2] * &x[2]
}

fn det3(m: [[&BigRational; 3]; 3]) -> BigRational {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule on three active constraints; `None` when degenerate.
fn solve3(
    r0: &([BigRational; 3], BigRational),
    r1: &([BigRational; 3], BigRational),
    r2: &([BigRational; 3], BigRational),
) -> Option<[BigRational; 3]> {
    let rows = [r0, r1, r2];
    let m = |r: usize, c: usize| &rows[r].0[c];
    let det = det3([
        [m(0, 0), m(0, 1), m(0, 2)],
        [m(1, 0), m(1, 1), m(1, 2)],
        [m(2, 0), m(2, 1), m(2, 2)],
    ]);
    if det.is_zero() {
        return None;
    }
    let column = |col: usize| {
        let pick = |r: usize, c: usize| if c == col { &rows[r].1 } else { m(r, c) };
        det3([
            [pick(0, 0), pick(0, 1), pick(0, 2)],
            [pick(1, 0), pick(1, 1), pick(1, 2)],
            [pick(2, 0), pick(2, 1), pick(2, 2)],
        ]) / &det
    };
    Some([column(0), column(1), column(2)])
}

/// Exact maximizer of `gamma` under the standard constraints.
pub fn optimize_gamma() -> Optimum {
    ExponentProgram::standard()
        .solve()
        .expect("the standard program is feasible and bounded")
}

/// `(-1)^k (k+2) k! (S_k - 1/e)` bracketed to width below `tol`.
pub fn k2_leading_term(k: u64, tol: &BigRational) -> RationalInterval {
    let sign = if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let scale = BigRational::from_integer(sign * (k + 2) * factorial(k));
    let inv_e = inv_e_within(&(tol / scale.abs()));
    let s_k = alternating_partial_sum(k as usize);
    // scale * (S_k - x) = -scale * x + scale * S_k
    inv_e.affine(&-&scale, &(&scale * s_k))
}

/// `E(k) = (-1)^k (k+2) k! (S_k - 1/e) - (1 + 1/k^2)`, bracketed to width
/// below `10^-30`.
pub fn check_k2_expansion(k: u64) -> Result<RationalInterval> {
    if k == 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let tol = BigRational::new(1.into(), BigInt::from(10).pow(30));
    let lead = k2_leading_term(k, &tol);
    let shift = -(BigRational::one() + BigRational::new(1.into(), BigInt::from(k) * k));
    Ok(lead.affine(&BigRational::one(), &shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_at_reference_point() {
        let (d, l) = reference_point();
        let p = gamma(&d, &l);
        assert_eq!(p.forms, vec![q(2, 177); 3]);
        assert_eq!(p.gamma, q(2, 177));
        assert!(p.feasible());
    }

    #[test]
    fn gamma_degenerate_and_boundary() {
        let p = gamma(&q(0, 1), &q(0, 1));
        assert_eq!(p.forms, vec![q(0, 1), q(0, 1), q(4, 63)]);
        assert_eq!(p.gamma, q(0, 1));

        let p = gamma(&q(1, 18), &q(1, 9));
        assert_eq!(p.forms, vec![q(0, 1), q(1, 18), q(-31, 168)]);
        assert_eq!(p.gamma, q(-31, 168));
        assert!(!p.delta_admissible);
        assert!(p.lambda_admissible);
        assert!(!p.feasible());
    }

    #[test]
    fn optimum_is_two_over_177() {
        let opt = optimize_gamma();
        assert_eq!(opt.point.delta, q(2, 177));
        assert_eq!(opt.point.lambda, q(2, 59));
        assert_eq!(opt.value, q(2, 177));
        assert!(!opt.on_strict_boundary);
        assert!(opt.point.feasible());
        assert!(opt.vertices_checked >= 4);
    }

    #[test]
    fn restriction_cannot_improve() {
        let restricted = ExponentProgram::standard()
            .with_equality(q(1, 1), q(1, 1), q(1, 3))
            .solve()
            .unwrap();
        assert!(restricted.value <= optimize_gamma().value);
        assert_eq!(&restricted.point.lambda + &restricted.point.delta, q(1, 3));
    }

    #[test]
    fn perturbed_objective() {
        let mut forms = standard_forms();
        forms[2] = LinearForm::new(q(4, 63), q(0, 1), q(0, 1));
        let opt = ExponentProgram::standard().with_forms(forms).solve().unwrap();
        // delta = lambda - 2 delta on the (closed) delta = 1/18 edge
        assert_eq!(opt.point.delta, q(1, 18));
        assert_eq!(opt.point.lambda, q(1, 6));
        assert_eq!(opt.value, q(1, 18));
        assert!(opt.on_strict_boundary);
    }

    #[test]
    fn budgets() {
        let (d, l) = reference_point();
        let b = exponent_budget(&d, &l);
        assert_eq!(b.overall, q(1, 3) - q(2, 177));
        assert_eq!(b.overall, q(19, 59));
        assert_eq!(b.middle_exponent, b.overall);

        let b = exponent_budget(&q(0, 1), &q(0, 1));
        assert_eq!(b.overall, q(1, 3));

        let (d, l) = (q(1, 1000), q(3, 1000));
        let b = exponent_budget(&d, &l);
        // forms: 1/1000, 1/1000, 4/63 - 349/84000 - 39/84000 > 1/1000
        assert_eq!(b.point.gamma, q(1, 1000));
        assert_eq!(b.overall, q(1, 3) - q(1, 1000));
    }

    #[test]
    fn empty_program_is_rejected() {
        assert!(ExponentProgram::standard().with_forms(vec![]).solve().is_err());
        let infeasible =
            ExponentProgram::standard().with_constraint(Constraint::new(q(1, 1), q(0, 1), q(-1, 1)));
        assert!(infeasible.solve().is_err());
    }

    #[test]
    fn k2_expansion_k3() {
        let e = check_k2_expansion(3).unwrap();
        assert!(e.width() < BigRational::new(1.into(), BigInt::from(10).pow(30)));
        // E(3) = -0.0747278759678414632453980062672850877367...
        let oracle = crate::ratio::parse_ratio(
            "-747278759678414632453980062672850877/10000000000000000000000000000000000000",
        )
        .unwrap();
        let slack = BigRational::new(1.into(), BigInt::from(10).pow(35));
        assert!(e.lo() <= &(&oracle + &slack) && e.hi() >= &(&oracle - &slack));
        // |E(3)| is just above 2/27
        assert!(e.lo().abs() > q(2, 27));
    }

    #[test]
    fn k2_expansion_rejects_zero() {
        assert!(check_k2_expansion(0).is_err());
    }
}

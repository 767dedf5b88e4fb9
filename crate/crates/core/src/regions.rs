//! Closed-form `(alpha, beta)` regions.
//!
//! Positivity is available for every `n >= 3`; the remaining predicates are
//! stated for `n = 3` only. Finite interval endpoints are inclusive except
//! the upper end of the "not completely positive" bands.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::MapParams;

/// Branch point of the complete-positivity boundary, `-1/5`.
pub const BETA_CP_BRANCH: f64 = -0.2;

fn require_n3(p: &MapParams, what: &'static str) -> Result<()> {
    if p.n != 3 {
        return Err(Error::UnsupportedDimension { what, n: p.n });
    }
    Ok(())
}

/// Smallest `alpha` for which `Phi_{alpha,beta,n}` is positive.
pub fn positivity_boundary(beta: f64, n: usize) -> f64 {
    if beta >= 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    let disc = nf * nf * beta * beta - 4.0 * (nf - 2.0) * beta + 4.0;
    (-(2.0 + nf * beta) + disc.sqrt()) / 2.0
}

pub fn is_positive(p: &MapParams) -> bool {
    p.alpha >= positivity_boundary(p.beta, p.n)
}

/// `(-(3+3b) + sqrt(9b^2 - 10b + 17)) / 2`, the non-trivial Choi eigenvalue bound.
fn cp_curve(beta: f64) -> f64 {
    (-(3.0 + 3.0 * beta) + (9.0 * beta * beta - 10.0 * beta + 17.0).sqrt()) / 2.0
}

/// Smallest `alpha` for which `Phi_{alpha,beta,3}` is completely positive.
pub fn cp_boundary(beta: f64) -> f64 {
    let g = cp_curve(beta);
    if beta <= BETA_CP_BRANCH {
        g
    } else {
        g.max(1.0)
    }
}

pub fn is_completely_positive(p: &MapParams) -> Result<bool> {
    require_n3(p, "complete positivity")?;
    Ok(p.alpha >= cp_boundary(p.beta))
}

/// Complete copositivity coincides with complete positivity for this family
/// (the Choi matrix of `Phi o T` is a partial transpose of that of `Phi` with
/// the same spectrum).
pub fn is_completely_copositive(p: &MapParams) -> Result<bool> {
    is_completely_positive(p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicRootResult {
    /// Smallest real root.
    pub s_beta: f64,
    /// Real roots, ascending (three when `three_real`, one otherwise).
    pub all_real_roots: Vec<f64>,
    /// `|p(s_beta)|`.
    pub residual: f64,
    /// Whether the discriminant admits three real roots.
    pub three_real: bool,
}

/// Coefficients `(b, c, d)` of the monic cubic `x^3 + b x^2 + c x + d` whose
/// smallest root controls 2-positivity.
pub fn two_positivity_cubic(beta: f64) -> (f64, f64, f64) {
    (-2.0 - 3.0 * beta, -2.0 + 4.0 * beta, 2.0 * beta)
}

fn eval_cubic((b, c, d): (f64, f64, f64), x: f64) -> f64 {
    ((x + b) * x + c) * x + d
}

fn polish((b, c, d): (f64, f64, f64), mut x: f64) -> f64 {
    let f = |x: f64| eval_cubic((b, c, d), x);
    for _ in 0..8 {
        let fx = f(x);
        if fx == 0.0 {
            break;
        }
        let dfx = (3.0 * x + 2.0 * b) * x + c;
        if dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if !next.is_finite() || f(next).abs() >= fx.abs() {
            break;
        }
        x = next;
    }
    x
}

/// Real roots of a monic cubic: trigonometric form when three are real,
/// Cardano otherwise, each polished by Newton steps that never increase `|p|`.
pub fn cubic_real_roots(coeffs: (f64, f64, f64)) -> (Vec<f64>, bool) {
    let (b, c, d) = coeffs;
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);

    let mut roots = if p < 0.0 && disc >= 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect::<Vec<_>>()
    } else if p == 0.0 && q == 0.0 {
        vec![-shift; 3]
    } else {
        let sq = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let t = (-q / 2.0 + sq).cbrt() + (-q / 2.0 - sq).cbrt();
        vec![t - shift]
    };
    let three = roots.len() == 3;
    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.sort_by(f64::total_cmp);
    (roots, three)
}

/// Smallest root `S_beta` of `x^3 + (-2-3b) x^2 + (-2+4b) x + 2b`.
pub fn smallest_cubic_root(beta: f64) -> CubicRootResult {
    let coeffs = two_positivity_cubic(beta);
    let (all_real_roots, three_real) = cubic_real_roots(coeffs);
    let s_beta = all_real_roots[0];
    CubicRootResult {
        s_beta,
        residual: eval_cubic(coeffs, s_beta).abs(),
        all_real_roots,
        three_real,
    }
}

/// Smallest `alpha` for which `Phi_{alpha,beta,3}` is 2-positive.
pub fn two_positivity_boundary(beta: f64) -> f64 {
    (-smallest_cubic_root(beta).s_beta).max(1.0)
}

pub fn is_two_positive(p: &MapParams) -> Result<bool> {
    require_n3(p, "2-positivity")?;
    Ok(p.alpha >= two_positivity_boundary(p.beta))
}

/// Three-branch interval description of "positive and not completely positive".
fn positive_not_cp_intervals(alpha: f64, beta: f64) -> bool {
    let lower = (-(2.0 + 3.0 * beta) + (9.0 * beta * beta - 4.0 * beta + 4.0).sqrt()) / 2.0;
    if beta <= BETA_CP_BRANCH {
        lower <= alpha && alpha < cp_curve(beta)
    } else if beta <= 0.0 {
        lower <= alpha && alpha < 1.0
    } else {
        (0.0..1.0).contains(&alpha)
    }
}

pub fn is_positive_not_cp(p: &MapParams) -> Result<bool> {
    let combined = is_positive(p) && !is_completely_positive(p)?;
    let intervals = positive_not_cp_intervals(p.alpha, p.beta);
    if combined != intervals {
        return Err(Error::Consistency(format!(
            "positive-not-CP disagrees at (alpha, beta) = ({}, {}): predicates {combined}, intervals {intervals}",
            p.alpha, p.beta
        )));
    }
    Ok(intervals)
}

pub fn is_two_positive_not_cp(p: &MapParams) -> Result<bool> {
    require_n3(p, "2-positive-not-CP")?;
    let lower = positivity_boundary(p.beta, 3).max(two_positivity_boundary(p.beta));
    let band = p.beta <= BETA_CP_BRANCH && lower <= p.alpha && p.alpha < cp_boundary(p.beta);
    let combined = is_two_positive(p)? && !is_completely_positive(p)?;
    if band != combined {
        return Err(Error::Consistency(format!(
            "2-positive-not-CP disagrees at (alpha, beta) = ({}, {}): band {band}, predicates {combined}",
            p.alpha, p.beta
        )));
    }
    Ok(band)
}

/// Smallest `alpha` of the sufficient decomposability condition.
pub fn decomposability_boundary(beta: f64) -> f64 {
    if beta >= 0.0 {
        return 0.0;
    }
    (-(6.0 + 3.0 * beta) + (9.0 * beta * beta - 28.0 * beta + 36.0).sqrt()) / 2.0
}

/// Sufficient (not necessary) condition for decomposability.
pub fn is_decomposable_sufficient(p: &MapParams) -> Result<bool> {
    require_n3(p, "decomposability")?;
    Ok(p.alpha >= decomposability_boundary(p.beta))
}

pub fn is_decomposable_and_two_positive(p: &MapParams) -> Result<bool> {
    require_n3(p, "decomposable-and-2-positive")?;
    let lower = decomposability_boundary(p.beta).max(two_positivity_boundary(p.beta));
    let band = p.beta <= BETA_CP_BRANCH && lower <= p.alpha && p.alpha < cp_boundary(p.beta);
    if band && !(is_decomposable_sufficient(p)? && is_two_positive(p)?) {
        return Err(Error::Consistency(format!(
            "decomposable-and-2-positive band at ({}, {}) is not decomposable and 2-positive",
            p.alpha, p.beta
        )));
    }
    Ok(band)
}

/// Region membership of one parameter point.
///
/// For `n > 3` only `positive` is evaluated; `higher_order` is then false and
/// every other field is false.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub positive: bool,
    pub two_positive: bool,
    pub completely_positive: bool,
    pub completely_copositive: bool,
    pub positive_not_cp: bool,
    pub two_positive_not_cp: bool,
    pub decomposable_sufficient: bool,
    pub decomposable_and_two_positive: bool,
    pub higher_order: bool,
}

impl Classification {
    /// Checks the implication chain and derived-field identities.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::Consistency(format!("{what} in {self:?}")));
        if !self.higher_order {
            if self.two_positive
                || self.completely_positive
                || self.completely_copositive
                || self.positive_not_cp
                || self.two_positive_not_cp
                || self.decomposable_sufficient
                || self.decomposable_and_two_positive
            {
                return fail("higher-order field set without higher-order evaluation");
            }
            return Ok(());
        }
        if self.completely_positive && !self.two_positive {
            return fail("CP without 2-positivity");
        }
        if self.two_positive && !self.positive {
            return fail("2-positive without positivity");
        }
        if self.completely_positive != self.completely_copositive {
            return fail("CP differs from ccP");
        }
        if self.positive_not_cp != (self.positive && !self.completely_positive) {
            return fail("positive_not_cp inconsistent");
        }
        if self.two_positive_not_cp != (self.two_positive && !self.completely_positive) {
            return fail("two_positive_not_cp inconsistent");
        }
        if self.completely_positive && !self.decomposable_sufficient {
            return fail("CP but not decomposable");
        }
        if self.decomposable_and_two_positive
            && !(self.decomposable_sufficient && self.two_positive)
        {
            return fail("decomposable_and_two_positive without its parts");
        }
        Ok(())
    }
}

/// Evaluates every closed-form predicate at `p` and validates the result.
pub fn classify(p: &MapParams) -> Result<Classification> {
    let positive = is_positive(p);
    let c = if p.n == 3 {
        let completely_positive = is_completely_positive(p)?;
        Classification {
            positive,
            two_positive: is_two_positive(p)?,
            completely_positive,
            completely_copositive: is_completely_copositive(p)?,
            positive_not_cp: is_positive_not_cp(p)?,
            two_positive_not_cp: is_two_positive_not_cp(p)?,
            decomposable_sufficient: is_decomposable_sufficient(p)?,
            decomposable_and_two_positive: is_decomposable_and_two_positive(p)?,
            higher_order: true,
        }
    } else {
        Classification {
            positive,
            ..Classification::default()
        }
    };
    c.check_invariants()?;
    Ok(c)
}

/// Closed-form boundaries that bound the regions in the `(beta, alpha)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Positivity,
    TwoPositivity,
    CompletePositivity,
    Decomposability,
}

impl Boundary {
    pub fn alpha_at(self, beta: f64, n: usize) -> f64 {
        match self {
            Boundary::Positivity => positivity_boundary(beta, n),
            Boundary::TwoPositivity => two_positivity_boundary(beta),
            Boundary::CompletePositivity => cp_boundary(beta),
            Boundary::Decomposability => decomposability_boundary(beta),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Positivity => "positivity",
            Boundary::TwoPositivity => "two_positivity",
            Boundary::CompletePositivity => "complete_positivity",
            Boundary::Decomposability => "decomposability",
        }
    }

    /// Vertical distance `|alpha - boundary(beta)|`.
    pub fn distance(self, p: &MapParams) -> f64 {
        (p.alpha - self.alpha_at(p.beta, p.n)).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(alpha: f64, beta: f64) -> MapParams {
        MapParams::n3(alpha, beta).unwrap()
    }

    /// Bisection on a sign change, independent of the closed-form solver.
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        assert!(f(lo) * f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn positivity_boundary_values() {
        assert_eq!(positivity_boundary(0.0, 3), 0.0);
        assert_eq!(positivity_boundary(1.0, 3), 0.0);
        let expected = (1.0 + 17f64.sqrt()) / 2.0;
        assert!((positivity_boundary(-1.0, 3) - expected).abs() < 1e-12);
        assert!((expected - 2.561552813).abs() < 1e-9);
    }

    #[test]
    fn positivity_predicate() {
        assert!(is_positive(&p(0.0, 1.0)));
        assert!(!is_positive(&p(2.5, -1.0)));
        assert!(is_positive(&p(positivity_boundary(-1.0, 3), -1.0)));
        assert!(!is_positive(&p(-1e-12, 0.5)));
    }

    #[test]
    fn cp_boundary_values() {
        assert!((cp_boundary(-0.2) - 1.0).abs() < 1e-12);
        assert!((cp_boundary(-1.0) - 3.0).abs() < 1e-12);
        assert_eq!(cp_boundary(0.0), 1.0);
        assert!((cp_curve(BETA_CP_BRANCH) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cp_predicate() {
        assert!(is_completely_positive(&p(1.0, 0.0)).unwrap());
        assert!(!is_completely_positive(&p(0.99, 0.0)).unwrap());
        assert!(is_completely_positive(&p(3.0, -1.0)).unwrap());
        assert_eq!(
            is_completely_copositive(&p(3.0, -1.0)).unwrap(),
            is_completely_positive(&p(3.0, -1.0)).unwrap()
        );
        let p4 = MapParams::new(1.0, 0.0, 4).unwrap();
        assert!(matches!(
            is_completely_positive(&p4),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn cubic_root_at_zero() {
        let r = smallest_cubic_root(0.0);
        let s3 = 3f64.sqrt();
        assert!((r.s_beta - (1.0 - s3)).abs() < 1e-10);
        assert!(r.three_real);
        let want = [1.0 - s3, 0.0, 1.0 + s3];
        for (g, w) in r.all_real_roots.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn cubic_root_at_minus_one_matches_bisection() {
        let f = |x: f64| x * x * x + x * x - 6.0 * x - 2.0;
        assert!(f(-2.9) < 0.0 && f(-2.8) > 0.0);
        let oracle = bisect(f, -2.9, -2.8);
        let r = smallest_cubic_root(-1.0);
        assert!(r.s_beta > -2.9 && r.s_beta < -2.8);
        assert!(r.residual <= 1e-10);
        assert!((r.s_beta - oracle).abs() < 1e-12);
    }

    #[test]
    fn cubic_residual_on_grid() {
        for i in 0..=800 {
            let beta = -4.0 + 0.01 * i as f64;
            let r = smallest_cubic_root(beta);
            let (b, c, d) = two_positivity_cubic(beta);
            let scale = 1.0 + b.abs().max(c.abs()).max(d.abs());
            assert!(r.residual <= 1e-10 * scale, "beta {beta}: {r:?}");
            assert!(r.three_real, "beta {beta}");
            assert_eq!(r.s_beta, r.all_real_roots[0]);
        }
    }

    #[test]
    fn cubic_with_complex_pair() {
        // x^3 + x = x (x^2 + 1)
        let (roots, three) = cubic_real_roots((0.0, 1.0, 0.0));
        assert!(!three);
        assert_eq!(roots.len(), 1);
        assert!(roots[0].abs() < 1e-15);
        // (x - 1)^3
        let (roots, three) = cubic_real_roots((-3.0, 3.0, -1.0));
        assert!(three);
        assert!(roots.iter().all(|r| (r - 1.0).abs() < 1e-12), "{roots:?}");
    }

    #[test]
    fn two_positivity_predicate() {
        assert!(is_two_positive(&p(1.0, 0.0)).unwrap());
        assert!(!is_two_positive(&p(2.8, -1.0)).unwrap());
        assert!(!is_two_positive(&p(0.9, 0.0)).unwrap());
        assert!(is_two_positive(&p(2.86, -1.0)).unwrap());
    }

    #[test]
    fn positive_not_cp() {
        assert!(is_positive_not_cp(&p(0.5, 0.0)).unwrap());
        assert!(!is_positive_not_cp(&p(1.0, 0.0)).unwrap());
        assert!(is_positive_not_cp(&p(2.9, -1.0)).unwrap());
        assert!(!is_positive_not_cp(&p(3.0, -1.0)).unwrap());
        assert!(is_positive_not_cp(&p(0.8, -0.1)).unwrap());
    }

    #[test]
    fn two_positive_not_cp() {
        assert!(is_two_positive_not_cp(&p(2.9, -1.0)).unwrap());
        assert!(!is_two_positive_not_cp(&p(3.0, -1.0)).unwrap());
        assert!(!is_two_positive_not_cp(&p(1.5, 0.0)).unwrap());
    }

    #[test]
    fn decomposability() {
        assert!(is_decomposable_sufficient(&p(0.0, 1.0)).unwrap());
        let boundary = (-3.0 + 73f64.sqrt()) / 2.0;
        assert!((decomposability_boundary(-1.0) - boundary).abs() < 1e-12);
        assert!((boundary - 2.7720).abs() < 1e-4);
        assert!(is_decomposable_sufficient(&p(2.8, -1.0)).unwrap());
        assert!(!is_decomposable_sufficient(&p(2.7, -1.0)).unwrap());
    }

    #[test]
    fn decomposable_and_two_positive() {
        assert!(is_decomposable_and_two_positive(&p(2.9, -1.0)).unwrap());
        assert!(!is_decomposable_and_two_positive(&p(2.75, -1.0)).unwrap());
        assert!(!is_decomposable_and_two_positive(&p(1.5, 0.5)).unwrap());
    }

    #[test]
    fn classify_examples() {
        let c = classify(&p(5.0, 0.0)).unwrap();
        assert!(c.positive && c.two_positive && c.completely_positive && c.completely_copositive);
        assert!(c.decomposable_sufficient && !c.positive_not_cp && !c.two_positive_not_cp);

        let c = classify(&p(0.5, 0.0)).unwrap();
        assert!(c.positive && !c.completely_positive && !c.two_positive && c.positive_not_cp);

        let c = classify(&p(-1.0, 0.0)).unwrap();
        assert_eq!(
            c,
            Classification {
                higher_order: true,
                ..Classification::default()
            }
        );
    }

    #[test]
    fn classify_higher_n_fills_positivity_only() {
        let c = classify(&MapParams::new(5.0, 0.0, 4).unwrap()).unwrap();
        assert!(c.positive && !c.higher_order && !c.completely_positive);
        assert!(
            !classify(&MapParams::new(-0.1, 0.0, 5).unwrap())
                .unwrap()
                .positive
        );
    }

    #[test]
    fn invariant_checker_catches_violations() {
        let bad = Classification {
            completely_positive: true,
            completely_copositive: true,
            decomposable_sufficient: true,
            higher_order: true,
            ..Classification::default()
        };
        assert!(matches!(bad.check_invariants(), Err(Error::Consistency(_))));
    }

    #[test]
    fn branch_continuity() {
        let n = 3;
        let left = positivity_boundary(-1e-300, n);
        assert!((left - positivity_boundary(0.0, n)).abs() < 1e-12);
        let below = cp_curve(BETA_CP_BRANCH);
        let above = cp_boundary(BETA_CP_BRANCH + 1e-15);
        assert!((below - above).abs() < 1e-12);
        assert!((decomposability_boundary(-1e-300) - decomposability_boundary(0.0)).abs() < 1e-12);
    }
}

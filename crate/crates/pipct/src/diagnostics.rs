//! Pole extraction and Froissart-doublet classification for rational
//! approximants, plus numerical verification of the Chebyshev coefficient
//! decay bound.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chebyshev::ChebyshevExpansion;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::pct::{horner, PCTApproximant};

/// Default residual threshold (relative to the coefficient scale) below which
/// a pole is classified as spurious.
pub const DEFAULT_SPURIOUS_THRESHOLD: f64 = 1e-10;

/// Trailing denominator coefficients below this fraction of the largest are
/// trimmed before root finding.
const TRIM_TOL: f64 = 1e-13;

/// Roots of the denominator polynomial, computed as eigenvalues of the
/// companion matrix of the trimmed polynomial, polished by one derivative-free
/// Weierstrass (Durand-Kerner) step.
///
/// A denominator that trims to a nonzero constant has no roots; an identically
/// zero one is rejected.
pub fn find_poles(r: &PCTApproximant) -> Result<Vec<Complex64>> {
    let q = r.denominator();
    let max_q = q.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max_q == 0.0 {
        return Err(Error::InvalidArgument(
            "denominator is identically zero".into(),
        ));
    }
    let degree = match q.iter().rposition(|v| v.abs() > TRIM_TOL * max_q) {
        Some(d) if d >= 1 => d,
        _ => return Ok(Vec::new()),
    };

    let lead = q[degree];
    let companion = DMatrix::from_fn(degree, degree, |r_, c_| {
        if c_ == degree - 1 {
            -q[r_] / lead
        } else if r_ == c_ + 1 {
            1.0
        } else {
            0.0
        }
    });
    let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().cloned().collect();

    // One Weierstrass correction step: z_i <- z_i - Q(z_i) / (q_d prod (z_i - z_j)).
    let trimmed = &q[..=degree];
    let corrections: Vec<Complex64> = roots
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let denom = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(Complex64::new(lead, 0.0), |acc, (_, &zj)| acc * (z - zj));
            if denom.norm() < 1e-13 * max_q {
                Complex64::new(0.0, 0.0) // clustered roots: leave the eigenvalue as is
            } else {
                horner(trimmed, z) / denom
            }
        })
        .collect();
    for (z, dz) in roots.iter_mut().zip(corrections) {
        *z -= dz;
    }
    Ok(roots)
}

/// A residue `P(z_i)/Q'(z_i)` with a flag for poles too close to a multiple
/// root for the formula to be trustworthy.
#[derive(Debug, Clone, Copy)]
pub struct Residue {
    pub value: Complex64,
    pub near_multiple_root: bool,
}

/// Residues of the approximant at the given poles.
pub fn residues(r: &PCTApproximant, poles: &[Complex64]) -> Vec<Residue> {
    let q = r.denominator();
    let scale = q.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let dq: Vec<f64> = q
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &v)| k as f64 * v)
        .collect();
    poles
        .iter()
        .map(|&z| {
            let qp = if dq.is_empty() {
                Complex64::new(0.0, 0.0)
            } else {
                horner(&dq, z)
            };
            let near_multiple_root = qp.norm() <= 1e-12 * scale;
            Residue {
                value: horner(r.numerator(), z) / qp,
                near_multiple_root,
            }
        })
        .collect()
}

/// Poles with residues and their genuine/spurious classification.
#[derive(Debug, Clone)]
pub struct PoleReport {
    pub poles: Vec<Complex64>,
    pub residuals: Vec<Complex64>,
    pub spurious: Vec<bool>,
    /// Relative threshold the classification used.
    pub threshold: f64,
    /// Coefficient scale the threshold was taken relative to.
    pub scale: f64,
}

/// Classifies each pole: spurious iff `|residual| < threshold * scale`, with
/// the scale taken from the approximant's source coefficients.
pub fn classify_froissart(
    r: &PCTApproximant,
    poles: Vec<Complex64>,
    residuals: Vec<Complex64>,
    threshold: f64,
) -> PoleReport {
    let scale = r.coeff_scale();
    let spurious = residuals
        .iter()
        .map(|res| res.norm() < threshold * scale)
        .collect();
    PoleReport {
        poles,
        residuals,
        spurious,
        threshold,
        scale,
    }
}

/// Full pipeline: roots, residues, classification.
pub fn pole_report(r: &PCTApproximant, threshold: f64) -> Result<PoleReport> {
    let poles = find_poles(r)?;
    let res = residues(r, &poles);
    let values = res.iter().map(|r_| r_.value).collect();
    Ok(classify_froissart(r, poles, values, threshold))
}

/// Composite trapezoidal quadrature of `|g(G(cos theta))|` over `[0, pi]` with
/// `panels` panels. Callers pass the derivative the T-norm definition calls
/// for; no chain-rule factor is applied.
pub fn t_norm<G>(g: G, interval: Interval, panels: usize) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if panels == 0 {
        return Err(Error::InvalidArgument("quadrature needs panels >= 1".into()));
    }
    let h = std::f64::consts::PI / panels as f64;
    let mut sum = 0.0;
    for i in 0..=panels {
        let theta = i as f64 * h;
        let y = theta.cos().clamp(-1.0, 1.0);
        let x = interval.from_unit(y)?;
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::Evaluation { x, value: v });
        }
        let w = if i == 0 || i == panels { 0.5 } else { 1.0 };
        sum += w * v.abs();
    }
    Ok(sum * h)
}

/// Outcome of checking the coefficient decay bound for one `(f, k)` pair.
#[derive(Debug, Clone)]
pub struct DecayBoundCheck {
    pub k: usize,
    pub v_k: f64,
    /// `(j, bound)` for every checked index.
    pub bound_values: Vec<(usize, f64)>,
    /// Indices `j` where `|c_j|` exceeded the bound beyond round-off slack.
    pub violations: Vec<usize>,
}

/// Right-hand side of the decay bound for smoothness order `k` at index `j`.
///
/// For `k = 2s` the product runs over `j + 2i`, `i = -s..=s`; for `k = 2s + 1`
/// over `j + 2i - 1`, `i = -s..=s+1`, with the half-width power `2s+1` or
/// `2s+2` respectively.
pub fn decay_bound_rhs(width: f64, k: usize, j: usize, v_k: f64) -> f64 {
    let half = 0.5 * width;
    let s = (k / 2) as i64;
    let j = j as i64;
    if k % 2 == 0 {
        let prod: f64 = (-s..=s).map(|i| (j + 2 * i) as f64).product();
        half.powi((2 * s + 1) as i32) * 2.0 * v_k / (std::f64::consts::PI * prod)
    } else {
        let prod: f64 = (-s..=s + 1).map(|i| (j + 2 * i - 1) as f64).product();
        half.powi((2 * s + 2) as i32) * 2.0 * v_k / (std::f64::consts::PI * prod)
    }
}

/// Checks `|c_j| <= bound(j)` for `j` in `[k+1, n-1]` (the aliasing-safe
/// range), recording the bound values and any violations beyond a `1e-9`
/// relative slack.
pub fn check_decay_bound(exp: &ChebyshevExpansion, k: usize, v_k: f64) -> DecayBoundCheck {
    let width = exp.interval().width();
    let c = exp.coeffs();
    let j_hi = (exp.n_quad() - 1).min(exp.degree());
    let mut bound_values = Vec::new();
    let mut violations = Vec::new();
    for j in (k + 1)..=j_hi {
        let bound = decay_bound_rhs(width, k, j, v_k);
        bound_values.push((j, bound));
        if c[j].abs() > bound * (1.0 + 1e-9) {
            violations.push(j);
        }
    }
    DecayBoundCheck {
        k,
        v_k,
        bound_values,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    fn rational(p: Vec<f64>, q: Vec<f64>) -> PCTApproximant {
        PCTApproximant::from_parts(unit(), 8, p, q).unwrap()
    }

    #[test]
    fn linear_denominator_root() {
        let r = rational(vec![1.0, 0.0], vec![1.0, -2.0]);
        let poles = find_poles(&r).unwrap();
        assert_eq!(poles.len(), 1);
        assert!((poles[0] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_denominator_roots() {
        let r = rational(vec![1.0, 0.0, 0.0], vec![-0.25, 0.0, 1.0]);
        let mut re: Vec<f64> = find_poles(&r).unwrap().iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] + 0.5).abs() < 1e-12);
        assert!((re[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_denominator_has_no_roots() {
        let r = rational(vec![1.0, 1.0], vec![2.0, 1e-16]);
        assert!(find_poles(&r).unwrap().is_empty());
    }

    #[test]
    fn random_degree_8_roots_satisfy_evaluation_oracle() {
        // Oracle: every reported root must nearly annihilate the polynomial.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let q: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let max_q = q.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let p = vec![1.0; 9];
            let r = rational(p, q.clone());
            let poles = find_poles(&r).unwrap();
            assert_eq!(poles.len(), 8);
            for z in poles {
                let qz = horner(&q, z).norm();
                let growth = z.norm().max(1.0).powi(8);
                assert!(qz <= 1e-8 * max_q * growth, "|Q(z)| = {qz:e} at {z}");
            }
        }
    }

    #[test]
    fn residue_of_simple_linear_pole() {
        let r = rational(vec![1.0, 0.0], vec![-0.5, 1.0]);
        let res = residues(&r, &[Complex64::new(0.5, 0.0)]);
        assert!((res[0].value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(!res[0].near_multiple_root);
    }

    #[test]
    fn residue_of_quadratic_closed_form() {
        let r = rational(vec![0.0, 1.0, 0.0], vec![-0.25, 0.0, 1.0]);
        let res = residues(&r, &[Complex64::new(0.5, 0.0)]);
        assert!((res[0].value - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn smooth_exponential_has_only_tiny_residues_near_circle() {
        // Oracle: a smooth function admits no genuine near-circle poles.
        let exp =
            ChebyshevExpansion::compute(|x: f64| x.exp(), unit(), 64, 16).unwrap();
        let r = PCTApproximant::build(&exp, 8, 8).unwrap();
        let report = pole_report(&r, DEFAULT_SPURIOUS_THRESHOLD).unwrap();
        let f_sup = 1.0_f64.exp();
        for (z, res) in report.poles.iter().zip(&report.residuals) {
            if (z.norm() - 1.0).abs() < 0.1 {
                assert!(
                    res.norm() <= 1e-8 * f_sup,
                    "near-circle pole {z} has residue {:e}",
                    res.norm()
                );
            }
        }
    }

    #[test]
    fn classification_trivial_cases() {
        let r = rational(vec![1.0, 0.0], vec![1.0, -2.0]);
        let poles = vec![Complex64::new(0.5, 0.0); 3];
        let zeros = vec![Complex64::new(0.0, 0.0); 3];
        let report = classify_froissart(&r, poles.clone(), zeros, 1e-10);
        assert!(report.spurious.iter().all(|&s| s));
        let ones = vec![Complex64::new(1.0, 0.0); 3];
        let report = classify_froissart(&r, poles, ones, 1e-10);
        assert!(report.spurious.iter().all(|&s| !s));
    }

    #[test]
    fn residues_invariant_under_joint_power_of_two_scaling() {
        let p = vec![0.3, -1.2, 0.7];
        let q = vec![-0.25, 0.1, 1.0];
        let scaled =
            |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x * 2.0).collect() };
        let r1 = rational(p.clone(), q.clone());
        let r2 = rational(scaled(&p), scaled(&q));
        let poles = find_poles(&r1).unwrap();
        let a = residues(&r1, &poles);
        let b = residues(&r2, &poles);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.value, y.value);
        }
    }

    #[test]
    fn t_norm_of_unit_slope_is_pi() {
        // f(x) = x has f' = 1, so the integrand is constant.
        let v = t_norm(|_| 1.0, unit(), 4096).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn t_norm_is_invariant_under_interval_stretching() {
        // T_1 rescaled to [0, 2] still has unit slope in its own variable.
        let iv = Interval::new(0.0, 2.0).unwrap();
        let v = t_norm(|_| 1.0, iv, 4096).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn t_norm_of_cube_second_derivative_is_twelve() {
        // Closed form: integral of |6 cos(theta)| over [0, pi] is 12.
        let v = t_norm(|x| 6.0 * x, unit(), 4096).unwrap();
        assert!((v - 12.0).abs() < 1e-6, "v={v}");
    }

    #[test]
    fn t_norm_rejects_non_finite_samples() {
        let err = t_norm(|_| f64::NAN, unit(), 16);
        assert!(matches!(err, Err(Error::Evaluation { .. })));
    }

    #[test]
    fn decay_bound_zero_function_has_no_violations() {
        let exp = ChebyshevExpansion::compute(|_| 0.0, unit(), 32, 31).unwrap();
        let check = check_decay_bound(&exp, 0, 0.0);
        assert!(check.violations.is_empty());
    }

    #[test]
    fn decay_bound_cube_k2_passes() {
        // V_2 = ||f''||_T with f''' = 6: integral of 6 over [0, pi].
        let exp = ChebyshevExpansion::compute(|x| x * x * x, unit(), 200, 199).unwrap();
        let v2 = 6.0 * std::f64::consts::PI;
        let check = check_decay_bound(&exp, 2, v2);
        assert!(check.violations.is_empty(), "violations: {:?}", check.violations);
        assert_eq!(check.bound_values.first().unwrap().0, 3);
        assert_eq!(check.bound_values.last().unwrap().0, 199);
    }

    #[test]
    fn decay_bound_rhs_branches() {
        // k = 0 (s = 0): bound = (w/2) 2V / (pi j).
        let b = decay_bound_rhs(2.0, 0, 5, 1.0);
        assert!((b - 2.0 / (std::f64::consts::PI * 5.0)).abs() < 1e-15);
        // k = 1 (s = 0): bound = (w/2)^2 2V / (pi (j-1)(j+1)).
        let b = decay_bound_rhs(2.0, 1, 5, 1.0);
        assert!((b - 2.0 / (std::f64::consts::PI * 24.0)).abs() < 1e-15);
        // k = 2 (s = 1): product (j-2) j (j+2).
        let b = decay_bound_rhs(2.0, 2, 5, 1.0);
        assert!((b - 2.0 / (std::f64::consts::PI * 105.0)).abs() < 1e-15);
    }
}

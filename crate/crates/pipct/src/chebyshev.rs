//! Chebyshev points, quadrature-approximated coefficients, and truncated-series
//! evaluation on an arbitrary interval.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Evaluates `T_k` at the `l`-th Chebyshev node (1-based) of an `n`-point rule:
/// `T_k(t_l) = cos(k (2l - 1) pi / (2n))`.
///
/// The phase is reduced modulo `4n` in integer arithmetic before the cosine is
/// taken, so the argument never exceeds `pi/2` and the trigonometric identities
/// behind coefficient aliasing hold bit-exactly: phases `m` and `2n - m` yield
/// exact negations, and odd multiples of `n` yield exactly `0.0`.
pub(crate) fn cheb_t_at_node(k: usize, l: usize, n: usize) -> f64 {
    debug_assert!((1..=n).contains(&l));
    let m = ((k as u64) * ((2 * l - 1) as u64)) % (4 * n as u64);
    let m = m.min(4 * n as u64 - m); // cos(2pi - x) = cos(x)
    let half_step = std::f64::consts::PI / (2.0 * n as f64);
    match m.cmp(&(n as u64)) {
        std::cmp::Ordering::Less => (m as f64 * half_step).cos(),
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Greater => -(((2 * n as u64 - m) as f64) * half_step).cos(),
    }
}

/// The Chebyshev points `t_l = cos((l - 0.5) pi / n)`, `l = 1..n`, in the
/// strictly decreasing order the cosine produces.
pub fn chebyshev_points(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "quadrature size n must be at least 1".into(),
        ));
    }
    Ok((1..=n).map(|l| cheb_t_at_node(1, l, n)).collect())
}

/// Quadrature-approximated Chebyshev coefficients of a function on an interval.
///
/// Entry `k` of `coeffs` holds `c_{k,n} = (2/n) sum_l f(G(t_l)) T_k(t_l)`, the
/// raw value with no halving applied; the first-term halving happens at
/// evaluation and numerator-construction sites.
#[derive(Debug, Clone)]
pub struct ChebyshevExpansion {
    interval: Interval,
    n_quad: usize,
    coeffs: Vec<f64>,
}

impl ChebyshevExpansion {
    /// Computes coefficients `c_{0,n} .. c_{d,n}` of `f` on `interval` from the
    /// `n_quad`-point Chebyshev rule.
    ///
    /// Indices beyond `2 n_quad - 1` are pure aliases, so `d` must stay below
    /// that. A non-finite sample aborts construction and reports the offending
    /// point.
    pub fn compute<F>(f: F, interval: Interval, n_quad: usize, d: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        if n_quad == 0 {
            return Err(Error::InvalidArgument(
                "quadrature size n must be at least 1".into(),
            ));
        }
        if d > 2 * n_quad - 1 {
            return Err(Error::InvalidArgument(format!(
                "degree {d} exceeds aliasing limit 2n - 1 = {}",
                2 * n_quad - 1
            )));
        }
        let samples: Vec<f64> = (1..=n_quad)
            .map(|l| {
                let x = interval.from_unit(cheb_t_at_node(1, l, n_quad))?;
                let value = f(x);
                if !value.is_finite() {
                    return Err(Error::Evaluation { x, value });
                }
                Ok(value)
            })
            .collect::<Result<_>>()?;

        let scale = 2.0 / n_quad as f64;
        let coeffs = (0..=d)
            .map(|k| {
                let sum: f64 = samples
                    .iter()
                    .enumerate()
                    .map(|(i, &fv)| fv * cheb_t_at_node(k, i + 1, n_quad))
                    .sum();
                scale * sum
            })
            .collect();

        Ok(ChebyshevExpansion {
            interval,
            n_quad,
            coeffs,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn n_quad(&self) -> usize {
        self.n_quad
    }

    /// Highest stored coefficient index.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Raw coefficients `c_{k,n}` (first term not halved).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Largest coefficient magnitude, used as the scale for relative thresholds.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Evaluates the truncated series `c_0/2 + sum_{k=1..d} c_k T_k(G^{-1}(x))`
    /// by Clenshaw's backward recurrence.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let xi = self.interval.to_unit(x)?;
        Ok(clenshaw(&self.coeffs, xi))
    }
}

/// Clenshaw evaluation of a halved-first-term Chebyshev sum at `xi` in `[-1, 1]`.
pub(crate) fn clenshaw(coeffs: &[f64], xi: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b = c + 2.0 * xi * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    0.5 * coeffs[0] + xi * b1 - b2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    #[test]
    fn points_n1_is_exact_zero() {
        assert_eq!(chebyshev_points(1).unwrap(), vec![0.0]);
    }

    #[test]
    fn points_n2_symmetric_half_sqrt2() {
        let pts = chebyshev_points(2).unwrap();
        let r = 0.5 * 2.0_f64.sqrt();
        assert!((pts[0] - r).abs() < 1e-15);
        assert!((pts[1] + r).abs() < 1e-15);
    }

    #[test]
    fn points_n4_match_direct_cosines() {
        // Oracle: direct evaluation of cos((l - 0.5) pi / 4).
        let pts = chebyshev_points(4).unwrap();
        for (i, &t) in pts.iter().enumerate() {
            let l = (i + 1) as f64;
            let direct = ((l - 0.5) * std::f64::consts::PI / 4.0).cos();
            assert!((t - direct).abs() < 1e-15, "l={l} t={t} direct={direct}");
        }
        assert!(pts.windows(2).all(|w| w[0] > w[1]), "not strictly decreasing");
    }

    #[test]
    fn points_n0_rejected() {
        assert!(chebyshev_points(0).is_err());
    }

    #[test]
    fn constant_function_gives_c0_two() {
        for n in [1, 7, 32] {
            let exp = ChebyshevExpansion::compute(|_| 1.0, unit(), n, n - 1).unwrap();
            assert_eq!(exp.coeffs()[0], 2.0);
            for &c in &exp.coeffs()[1..] {
                assert!(c.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn discrete_orthogonality_picks_out_t3() {
        // Oracle: discrete orthogonality of the node sums against T_3.
        let exp =
            ChebyshevExpansion::compute(|x| 4.0 * x.powi(3) - 3.0 * x, unit(), 16, 8).unwrap();
        for (k, &c) in exp.coeffs().iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((c - want).abs() < 1e-12, "k={k} c={c}");
        }
    }

    #[test]
    fn aliasing_identities_at_n50() {
        let f = |x: f64| (1.3 * x).sin() + 0.4 * (2.0 - x).recip();
        let exp = ChebyshevExpansion::compute(f, unit(), 50, 60).unwrap();
        let c = exp.coeffs();
        let scale = exp.coeff_scale();
        assert!(c[50].abs() <= 1e-13 * scale, "c_50 = {}", c[50]);
        for j in 1..=10 {
            let sum = c[50 + j] + c[50 - j];
            assert!(sum.abs() <= 1e-13 * scale, "j={j} sum={sum}");
        }
    }

    #[test]
    fn non_finite_sample_reports_point() {
        let f = |x: f64| if x > 0.3 { f64::NAN } else { x };
        let err = ChebyshevExpansion::compute(f, unit(), 8, 4).unwrap_err();
        match err {
            Error::Evaluation { x, .. } => assert!(x > 0.3),
            other => panic!("expected evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn degree_beyond_alias_limit_rejected() {
        assert!(ChebyshevExpansion::compute(|x| x, unit(), 8, 16).is_err());
        assert!(ChebyshevExpansion::compute(|x| x, unit(), 8, 15).is_ok());
    }

    #[test]
    fn constant_series_evaluates_to_one() {
        let exp = ChebyshevExpansion::compute(|_| 1.0, unit(), 12, 6).unwrap();
        for k in 0..=20 {
            let x = -1.0 + 0.1 * k as f64;
            assert!((exp.eval(x).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn t2_at_origin_is_minus_one() {
        let exp = ChebyshevExpansion::compute(|x| 2.0 * x * x - 1.0, unit(), 16, 4).unwrap();
        assert!((exp.eval(0.0).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_is_exactly_representable() {
        // Oracle: x^3 is inside the truncation range, so the series is exact.
        let exp = ChebyshevExpansion::compute(|x| x.powi(3), unit(), 64, 10).unwrap();
        assert!((exp.eval(0.5).unwrap() - 0.125).abs() < 1e-12);
    }

    #[test]
    fn eval_outside_interval_rejected() {
        let exp = ChebyshevExpansion::compute(|x| x, unit(), 8, 4).unwrap();
        assert!(matches!(exp.eval(1.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn clenshaw_matches_naive_cosine_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let coeffs: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xi: f64 = rng.gen_range(-1.0..1.0);
            let theta = xi.acos();
            let naive = 0.5 * coeffs[0]
                + coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, &c)| c * (k as f64 * theta).cos())
                    .sum::<f64>();
            assert!((clenshaw(&coeffs, xi) - naive).abs() < 1e-12);
        }
    }
}

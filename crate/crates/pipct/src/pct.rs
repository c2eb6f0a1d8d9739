//! Single-cell Padé-Chebyshev type approximants: the homogeneous Toeplitz
//! system for the denominator, the triangular product for the numerator, and
//! complex-rational evaluation on the unit circle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::chebyshev::ChebyshevExpansion;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// Relative residual bound every accepted denominator must satisfy:
/// `||A q||_2 <= RESIDUAL_TOL (1 + ||A||_F) ||q||_2`.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// `q_0` below this fraction of `max|q_i|` leaves the vector unit-norm and
/// sets the degenerate-normalization flag instead of rescaling to `q_0 = 1`.
const NORMALIZATION_TOL: f64 = 1e-8;

/// Two smallest singular values closer than this fraction of the largest are
/// reported as a multiple null direction.
const TIE_TOL: f64 = 1e-12;

/// Toeplitz tail entries below this fraction of the coefficient scale mean the
/// truncated series already satisfies the order condition to round-off.
const TAIL_TOL: f64 = 1e-13;

/// The homogeneous system `A q = 0` whose solutions are denominator
/// coefficient vectors; `A` is `nq x (nq + 1)` with
/// `entry(r, s) = c_{np + r - s + 1}` (1-based).
#[derive(Debug, Clone)]
pub struct ToeplitzSystem {
    matrix: DMatrix<f64>,
    np: usize,
    nq: usize,
    coeff_scale: f64,
}

impl ToeplitzSystem {
    pub fn build(exp: &ChebyshevExpansion, np: usize, nq: usize) -> Result<Self> {
        if nq < 1 || np < nq {
            return Err(Error::InvalidArgument(format!(
                "degrees must satisfy np >= nq >= 1, got np={np} nq={nq}"
            )));
        }
        if exp.degree() < np + nq {
            return Err(Error::InvalidArgument(format!(
                "expansion holds {} coefficients, need np + nq + 1 = {}",
                exp.degree() + 1,
                np + nq + 1
            )));
        }
        let c = exp.coeffs();
        let matrix =
            DMatrix::from_fn(nq, nq + 1, |r, s| c[np + (r + 1) - (s + 1) + 1]);
        Ok(ToeplitzSystem {
            matrix,
            np,
            nq,
            coeff_scale: exp.coeff_scale(),
        })
    }

    pub fn np(&self) -> usize {
        self.np
    }

    pub fn nq(&self) -> usize {
        self.nq
    }

    pub fn rows(&self) -> usize {
        self.nq
    }

    pub fn cols(&self) -> usize {
        self.nq + 1
    }

    /// Entry at 1-based indices, as laid out in the defining formula.
    pub fn entry(&self, r: usize, s: usize) -> f64 {
        self.matrix[(r - 1, s - 1)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// `max |c_{np+i}|` over `i = 1..nq`: the first column of the system, and
    /// exactly the coefficients the order condition needs to annihilate.
    fn tail_max(&self) -> f64 {
        self.matrix.column(0).amax()
    }

    fn residual(&self, q: &[f64]) -> f64 {
        let qv = nalgebra::DVector::from_column_slice(q);
        (&self.matrix * qv).norm()
    }

    /// Solves `A q = 0` for the denominator coefficients.
    ///
    /// When the tail coefficients are at round-off level, the truncated series
    /// is its own Padé approximant and the identity denominator `e_1` is a
    /// numerically exact null vector; it is chosen deterministically instead of
    /// whatever direction the noise would pick. Otherwise the right singular
    /// vector of the smallest singular value is taken (ties resolved toward
    /// the last as produced, and flagged), the sign is fixed by the first
    /// nonzero entry, and `q_0 = 1` normalization is applied unless `q_0` is
    /// negligible, which sets the degenerate-normalization flag.
    pub fn solve_denominator(&self) -> Result<DenominatorSolution> {
        let nq = self.nq;
        if self.tail_max() <= TAIL_TOL * (1.0 + self.coeff_scale) {
            let mut q = vec![0.0; nq + 1];
            q[0] = 1.0;
            let residual = self.residual(&q);
            return Ok(DenominatorSolution {
                q,
                residual,
                degenerate_normalization: false,
                multiple_null_directions: false,
                series_exact: true,
            });
        }

        // nalgebra's thin SVD of a wide matrix omits the null direction, so
        // append a zero row: right singular vectors are unchanged and the
        // smallest singular value's vector spans ker(A).
        let mut aug = DMatrix::zeros(nq + 1, nq + 1);
        aug.view_mut((0, 0), (nq, nq + 1)).copy_from(&self.matrix);
        let svd = aug.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::Numerical("SVD did not return right factor".into()))?;
        let sigma = svd.singular_values.as_slice();

        let mut i_min = 0;
        for (i, &s) in sigma.iter().enumerate() {
            if s <= sigma[i_min] {
                i_min = i;
            }
        }
        let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
        let second_min = sigma
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != i_min)
            .map(|(_, &s)| s)
            .fold(f64::INFINITY, f64::min);
        let multiple_null_directions =
            sigma.len() > 1 && second_min - sigma[i_min] < TIE_TOL * sigma_max;

        let mut q: Vec<f64> = v_t.row(i_min).iter().cloned().collect();
        let max_q = q.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if let Some(first) = q.iter().find(|v| v.abs() > 1e-14 * max_q) {
            if *first < 0.0 {
                q.iter_mut().for_each(|v| *v = -*v);
            }
        }

        let degenerate_normalization = q[0].abs() <= NORMALIZATION_TOL * max_q;
        if !degenerate_normalization {
            let q0 = q[0];
            q.iter_mut().for_each(|v| *v /= q0);
        }

        let residual = self.residual(&q);
        let q_norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        let bound = RESIDUAL_TOL * (1.0 + self.frobenius_norm()) * q_norm;
        if residual > bound {
            return Err(Error::Numerical(format!(
                "denominator residual {residual:.3e} exceeds bound {bound:.3e}"
            )));
        }

        Ok(DenominatorSolution {
            q,
            residual,
            degenerate_normalization,
            multiple_null_directions,
            series_exact: false,
        })
    }
}

/// A solved denominator with its quality flags.
#[derive(Debug, Clone)]
pub struct DenominatorSolution {
    pub q: Vec<f64>,
    /// `||A q||_2` against the defining system.
    pub residual: f64,
    /// `q_0` was negligible; the vector stays unit-norm.
    pub degenerate_normalization: bool,
    /// The two smallest singular values were indistinguishable.
    pub multiple_null_directions: bool,
    /// The Toeplitz tail was at round-off level and the identity denominator
    /// was used.
    pub series_exact: bool,
}

/// Numerator coefficients `p_r = sum_{s=0..min(r,nq)} q_s chat_{r-s}` with
/// `chat_0 = c_0 / 2` and `chat_k = c_k` otherwise.
pub fn compute_numerator(exp: &ChebyshevExpansion, q: &[f64], np: usize) -> Result<Vec<f64>> {
    if exp.degree() < np {
        return Err(Error::InvalidArgument(format!(
            "expansion holds {} coefficients, numerator needs np + 1 = {}",
            exp.degree() + 1,
            np + 1
        )));
    }
    let c = exp.coeffs();
    let chat = |k: usize| if k == 0 { 0.5 * c[0] } else { c[k] };
    let nq = q.len() - 1;
    Ok((0..=np)
        .map(|r| (0..=r.min(nq)).map(|s| q[s] * chat(r - s)).sum())
        .collect())
}

/// Evaluation flags carried out of the denominator solve.
#[derive(Debug, Clone, Copy, Default)]
pub struct PctFlags {
    pub degenerate_normalization: bool,
    pub multiple_null_directions: bool,
    pub series_exact: bool,
}

/// A Padé-Chebyshev type approximant `Re(P(z)/Q(z))`, `z = e^{i arccos xi}`,
/// hosted on an interval.
#[derive(Debug, Clone)]
pub struct PCTApproximant {
    interval: Interval,
    n_quad: usize,
    p: Vec<f64>,
    q: Vec<f64>,
    flags: PctFlags,
    residual: f64,
    coeff_scale: f64,
}

impl PCTApproximant {
    /// Composes the Toeplitz build, the null-space solve, and the numerator
    /// product into an order-`[np/nq]` approximant.
    pub fn build(exp: &ChebyshevExpansion, np: usize, nq: usize) -> Result<Self> {
        let system = ToeplitzSystem::build(exp, np, nq)?;
        let solution = system.solve_denominator()?;
        let p = compute_numerator(exp, &solution.q, np)?;
        Ok(PCTApproximant {
            interval: exp.interval(),
            n_quad: exp.n_quad(),
            p,
            q: solution.q,
            flags: PctFlags {
                degenerate_normalization: solution.degenerate_normalization,
                multiple_null_directions: solution.multiple_null_directions,
                series_exact: solution.series_exact,
            },
            residual: solution.residual,
            coeff_scale: exp.coeff_scale(),
        })
    }

    /// Degree-`d` truncated series viewed as a rational with identity
    /// denominator; evaluation then reduces to the Chebyshev sum.
    pub fn truncated_series(exp: &ChebyshevExpansion, d: usize) -> Result<Self> {
        let q = vec![1.0];
        let p = compute_numerator(exp, &q, d)?;
        Ok(PCTApproximant {
            interval: exp.interval(),
            n_quad: exp.n_quad(),
            p,
            q,
            flags: PctFlags::default(),
            residual: 0.0,
            coeff_scale: exp.coeff_scale(),
        })
    }

    /// Assembles an approximant from explicit coefficient vectors.
    pub fn from_parts(interval: Interval, n_quad: usize, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.is_empty() || q.is_empty() || p.len() < q.len() {
            return Err(Error::InvalidArgument(
                "need numerator and denominator with np >= nq >= 0".into(),
            ));
        }
        if !p.iter().chain(q.iter()).all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        if q.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidArgument("denominator is identically zero".into()));
        }
        let coeff_scale = p.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(PCTApproximant {
            interval,
            n_quad,
            p,
            q,
            flags: PctFlags::default(),
            residual: 0.0,
            coeff_scale,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn n_quad(&self) -> usize {
        self.n_quad
    }

    pub fn np(&self) -> usize {
        self.p.len() - 1
    }

    pub fn nq(&self) -> usize {
        self.q.len() - 1
    }

    pub fn numerator(&self) -> &[f64] {
        &self.p
    }

    pub fn denominator(&self) -> &[f64] {
        &self.q
    }

    pub fn flags(&self) -> PctFlags {
        self.flags
    }

    pub fn denominator_residual(&self) -> f64 {
        self.residual
    }

    /// Scale of the source coefficients, for relative thresholds downstream.
    pub fn coeff_scale(&self) -> f64 {
        self.coeff_scale
    }

    /// Evaluates `Re(P(z)/Q(z))` at `z = e^{i arccos(G^{-1}(x))}` by complex
    /// Horner. Values near poles come back large but finite; only an exact
    /// zero denominator errors.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let xi = self.interval.to_unit(x)?;
        let z = Complex64::new(xi, (1.0 - xi * xi).max(0.0).sqrt());
        let pz = horner(&self.p, z);
        let qz = horner(&self.q, z);
        if qz.norm_sqr() == 0.0 {
            return Err(Error::PoleAtEvaluation { x });
        }
        Ok((pz / qz).re)
    }
}

pub(crate) fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::chebyshev_points;

    fn unit() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    fn expansion<F: Fn(f64) -> f64>(f: F, n: usize, d: usize) -> ChebyshevExpansion {
        ChebyshevExpansion::compute(f, unit(), n, d).unwrap()
    }

    #[test]
    fn toeplitz_1x2_layout() {
        let exp = expansion(|x| (2.0 * x).exp(), 32, 4);
        let sys = ToeplitzSystem::build(&exp, 1, 1).unwrap();
        assert_eq!(sys.rows(), 1);
        assert_eq!(sys.cols(), 2);
        assert_eq!(sys.entry(1, 1), exp.coeffs()[2]);
        assert_eq!(sys.entry(1, 2), exp.coeffs()[1]);
    }

    #[test]
    fn toeplitz_2x3_layout() {
        let exp = expansion(|x| (1.5 - x).recip(), 32, 6);
        let c = exp.coeffs();
        let sys = ToeplitzSystem::build(&exp, 2, 2).unwrap();
        let want = [[c[3], c[2], c[1]], [c[4], c[3], c[2]]];
        for r in 1..=2 {
            for s in 1..=3 {
                assert_eq!(sys.entry(r, s), want[r - 1][s - 1]);
            }
        }
    }

    #[test]
    fn toeplitz_20x21_corner_entry() {
        // Oracle: the index formula np + r - s + 1 at (r, s) = (1, 21) gives c_1.
        let f = crate::corpus::jump_sqrt;
        let exp = expansion(f, 200, 40);
        let sys = ToeplitzSystem::build(&exp, 20, 20).unwrap();
        assert_eq!(sys.rows(), 20);
        assert_eq!(sys.cols(), 21);
        assert_eq!(sys.entry(1, 21), exp.coeffs()[1]);
        for r in 1..=20 {
            for s in 1..=21 {
                assert_eq!(sys.entry(r, s), exp.coeffs()[20 + r - s + 1]);
            }
        }
    }

    #[test]
    fn insufficient_coefficients_rejected() {
        let exp = expansion(|x| x, 32, 10);
        assert!(ToeplitzSystem::build(&exp, 8, 3).is_err());
        assert!(ToeplitzSystem::build(&exp, 3, 4).is_err());
        assert!(ToeplitzSystem::build(&exp, 5, 0).is_err());
    }

    #[test]
    fn solve_1x2_closed_form() {
        // Use a function with genuine geometric decay so c_1, c_2 are real signal.
        let exp = expansion(|x| (3.0 - x).recip(), 64, 2);
        let c = exp.coeffs();
        assert!(c[1].abs() > 1e-6);
        let sol = ToeplitzSystem::build(&exp, 1, 1)
            .unwrap()
            .solve_denominator()
            .unwrap();
        assert!(!sol.degenerate_normalization);
        assert!((sol.q[0] - 1.0).abs() < 1e-14);
        assert!((sol.q[1] - (-c[2] / c[1])).abs() < 1e-10);
    }

    #[test]
    fn zero_matrix_takes_identity_null_vector() {
        let exp = expansion(|x| x, 32, 10);
        let sys = ToeplitzSystem::build(&exp, 4, 3).unwrap();
        let sol = sys.solve_denominator().unwrap();
        assert!(sol.series_exact);
        assert_eq!(sol.q, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(sol.residual <= 1e-15);
    }

    #[test]
    fn jump_cell_denominator_satisfies_residual_bound() {
        let exp = expansion(crate::corpus::jump_sqrt, 200, 40);
        let sys = ToeplitzSystem::build(&exp, 20, 20).unwrap();
        let sol = sys.solve_denominator().unwrap();
        let q_norm = sol.q.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(sol.residual <= RESIDUAL_TOL * (1.0 + sys.frobenius_norm()) * q_norm);
    }

    #[test]
    fn identity_denominator_reduces_numerator_to_series() {
        let exp = expansion(|x| (1.2 * x).cos(), 64, 12);
        let q = vec![1.0, 0.0, 0.0];
        let p = compute_numerator(&exp, &q, 9).unwrap();
        let c = exp.coeffs();
        assert_eq!(p[0], 0.5 * c[0]);
        for k in 1..=9 {
            assert_eq!(p[k], c[k]);
        }
    }

    #[test]
    fn numerator_first_rows_closed_form() {
        let exp = expansion(|x| (2.0 - x).recip(), 64, 4);
        let c = exp.coeffs();
        let q = vec![0.7, -0.3];
        let p = compute_numerator(&exp, &q, 1).unwrap();
        assert!((p[0] - q[0] * 0.5 * c[0]).abs() < 1e-15);
        assert!((p[1] - (q[0] * c[1] + q[1] * 0.5 * c[0])).abs() < 1e-15);
    }

    #[test]
    fn numerator_matches_dense_matrix_product() {
        // Oracle: assemble the full lower-triangular matrix and multiply.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let exp = expansion(|x| (x.sin() + 2.0).ln(), 64, 12);
        let c = exp.coeffs();
        let chat = |k: usize| if k == 0 { 0.5 * c[0] } else { c[k] };
        let (np, nq) = (5, 2);
        let q: Vec<f64> = (0..=nq).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let dense = DMatrix::from_fn(np + 1, nq + 1, |r, s| {
            if r >= s {
                chat(r - s)
            } else {
                0.0
            }
        });
        let want = &dense * nalgebra::DVector::from_column_slice(&q);
        let p = compute_numerator(&exp, &q, np).unwrap();
        for r in 0..=np {
            assert!((p[r] - want[r]).abs() < 1e-14);
        }
    }

    #[test]
    fn build_reproduces_t2_exactly() {
        let exp = expansion(|x| 2.0 * x * x - 1.0, 32, 4);
        let r = PCTApproximant::build(&exp, 3, 1).unwrap();
        for k in 0..=40 {
            let x = -1.0 + 0.05 * k as f64;
            let want = 2.0 * x * x - 1.0;
            assert!((r.eval(x).unwrap() - want).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn build_constant_is_constant() {
        let exp = expansion(|_| 1.0, 16, 2);
        let r = PCTApproximant::build(&exp, 1, 1).unwrap();
        assert!((r.eval(0.37).unwrap() - 1.0).abs() < 1e-14);
        assert!((r.eval(-1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_cell_of_corpus_function_is_machine_accurate() {
        // Oracle: dense sampling against f on a cell well away from the
        // singularities.
        let cell = Interval::new(0.5, 0.6).unwrap();
        let exp =
            ChebyshevExpansion::compute(crate::corpus::jump_sqrt, cell, 200, 40).unwrap();
        let r = PCTApproximant::build(&exp, 20, 20).unwrap();
        let mut max_err = 0.0_f64;
        for k in 0..=500 {
            let x = 0.5 + 0.1 * k as f64 / 500.0;
            max_err = max_err.max((r.eval(x).unwrap() - crate::corpus::jump_sqrt(x)).abs());
        }
        assert!(max_err <= 1e-10, "max_err={max_err:e}");
    }

    #[test]
    fn eval_linear_identity_denominator() {
        let exp = expansion(|x| x, 32, 3);
        let r = PCTApproximant::truncated_series(&exp, 3).unwrap();
        assert!((r.eval(0.7).unwrap() - 0.7).abs() < 1e-14);
    }

    #[test]
    fn eval_defined_at_endpoints() {
        let cell = Interval::new(0.25, 0.75).unwrap();
        let exp = ChebyshevExpansion::compute(|x: f64| x.exp(), cell, 32, 8).unwrap();
        let r = PCTApproximant::build(&exp, 4, 4).unwrap();
        assert!((r.eval(0.25).unwrap() - 0.25_f64.exp()).abs() < 1e-9);
        assert!((r.eval(0.75).unwrap() - 0.75_f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn off_interval_pole_approximated_well() {
        // Oracle: dense grid against 1/(1.1 - x); rationals handle the nearby
        // pole far better than degree-16 polynomials could.
        let exp = expansion(|x| (1.1 - x).recip(), 64, 16);
        let r = PCTApproximant::build(&exp, 8, 8).unwrap();
        let mut max_err = 0.0_f64;
        for k in 0..1000 {
            let x = -1.0 + 2.0 * k as f64 / 999.0;
            max_err = max_err.max((r.eval(x).unwrap() - (1.1 - x).recip()).abs());
        }
        assert!(max_err <= 1e-8, "max_err={max_err:e}");
    }

    #[test]
    fn reduction_invariant_forced_identity_matches_clenshaw() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let exp = expansion(crate::corpus::jump_sqrt, 100, 24);
        let r = PCTApproximant::truncated_series(&exp, 24).unwrap();
        for _ in 0..500 {
            let x: f64 = rng.gen_range(-1.0..1.0);
            let a = r.eval(x).unwrap();
            let b = exp.eval(x).unwrap();
            assert!((a - b).abs() < 1e-12, "x={x} pct={a} series={b}");
        }
    }

    #[test]
    fn degree_economy_vector_lengths() {
        let exp = expansion(crate::corpus::jump_sqrt, 100, 30);
        let r = PCTApproximant::build(&exp, 18, 12).unwrap();
        assert_eq!(r.numerator().len(), 19);
        assert_eq!(r.denominator().len(), 13);
        assert_eq!(r.np(), 18);
        assert_eq!(r.nq(), 12);
    }

    #[test]
    fn flip_property_small_orders() {
        // Prop: denominators of orders [(n-j-1)/nq] and [(n+j)/nq] are
        // anti-diagonal flips of one another, as directions.
        let n = 24;
        let nq = 3;
        let exp = expansion(|x: f64| (x + 1.3).sqrt(), n, 2 * n - 1);
        for j in [0usize, 2, 4] {
            let lo = PCTApproximant::build(&exp, n - j - 1, nq).unwrap();
            let hi = PCTApproximant::build(&exp, n + j, nq).unwrap();
            let a = lo.denominator();
            let b: Vec<f64> = hi.denominator().iter().rev().cloned().collect();
            let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let na: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            let nb: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
            let angle = (dot.abs() / (na * nb)).min(1.0).acos();
            assert!(angle < 1e-8, "j={j} angle={angle:e}");
        }
    }

    #[test]
    fn exact_pole_at_evaluation_errors() {
        // Q(z) = z has its zero at z = 0, never on the circle; craft Q = 1 + z
        // instead, whose zero z = -1 is hit exactly at x = a.
        let r = PCTApproximant::from_parts(unit(), 8, vec![1.0, 0.0], vec![1.0, 1.0]).unwrap();
        match r.eval(-1.0) {
            Err(Error::PoleAtEvaluation { x }) => assert_eq!(x, -1.0),
            other => panic!("expected pole error, got {other:?}"),
        }
    }

    #[test]
    fn node_values_match_points() {
        let pts = chebyshev_points(9).unwrap();
        for (i, &t) in pts.iter().enumerate() {
            assert_eq!(crate::chebyshev::cheb_t_at_node(1, i + 1, 9), t);
        }
    }
}

//! Adaptive partitioning: epsilon-badcell detection from denominator
//! near-zeros on the unit circle, iterative bisection refinement, degree
//! adaptation, and APiPCT assembly.

use num_complex::Complex64;

use crate::chebyshev::ChebyshevExpansion;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par;
use crate::pct::{horner, PctFlags, ToeplitzSystem};
use crate::piecewise::{build_pipct, Partition, PiecewiseApproximant};

/// Parameters governing badcell detection and refinement.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveConfig {
    /// Badcell threshold: a cell is flagged when `min |Q(z)| < epsilon` on the
    /// unit circle.
    pub epsilon: f64,
    /// Minimum cell width; refinement stops once a bisection produces a cell
    /// narrower than this.
    pub tau: f64,
    /// Baseline degree used for scanning and for smooth cells (`m << n/2`).
    pub m: usize,
    /// Quadrature size.
    pub n_quad: usize,
    /// Unit-circle scan resolution over `[0, pi]`.
    pub theta_samples: usize,
    /// Safety cap on refinement rounds.
    pub max_rounds: usize,
}

impl AdaptiveConfig {
    pub fn new(epsilon: f64, tau: f64, m: usize, n_quad: usize) -> Self {
        AdaptiveConfig {
            epsilon,
            tau,
            m,
            n_quad,
            theta_samples: 1024,
            max_rounds: 40,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) || !(self.tau > 0.0) {
            return Err(Error::InvalidArgument(
                "epsilon and tau must be positive".into(),
            ));
        }
        if self.m == 0 || 2 * self.m >= self.n_quad {
            return Err(Error::InvalidArgument(format!(
                "baseline degree must satisfy 0 < 2m < n, got m={} n={}",
                self.m, self.n_quad
            )));
        }
        if self.theta_samples < 64 {
            return Err(Error::InvalidArgument(
                "theta_samples must be at least 64".into(),
            ));
        }
        if self.max_rounds == 0 {
            return Err(Error::InvalidArgument("max_rounds must be positive".into()));
        }
        Ok(())
    }
}

/// Scan outcome for one cell.
#[derive(Debug, Clone, Copy)]
pub struct BadCellScan {
    pub cell_index: usize,
    /// `min |Q(e^{i theta})|` over the scan grid.
    pub min_abs_q: f64,
    /// Whether the minimum dipped below epsilon.
    pub is_bad: bool,
    /// The denominator solve reported a degenerate normalization; such cells
    /// are treated as flagged.
    pub degenerate_denominator: bool,
}

impl BadCellScan {
    /// Flagged for refinement / degree raising.
    pub fn flagged(&self) -> bool {
        self.is_bad || self.degenerate_denominator
    }
}

/// Minimum of `|Q(e^{i theta})|` over `theta_samples` points uniformly spaced
/// in `[0, pi]`; real coefficients make the lower half circle redundant by
/// conjugate symmetry.
pub fn min_abs_on_circle(q: &[f64], theta_samples: usize) -> f64 {
    let step = std::f64::consts::PI / (theta_samples - 1) as f64;
    (0..theta_samples)
        .map(|i| {
            let theta = i as f64 * step;
            horner(q, Complex64::new(theta.cos(), theta.sin())).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Scans one denominator against the badcell criterion.
pub fn scan_badcell(
    cell_index: usize,
    q: &[f64],
    epsilon: f64,
    theta_samples: usize,
) -> BadCellScan {
    let min_abs_q = min_abs_on_circle(q, theta_samples);
    BadCellScan {
        cell_index,
        min_abs_q,
        is_bad: min_abs_q < epsilon,
        degenerate_denominator: false,
    }
}

/// Builds the `[m/m]` denominator of `f` restricted to `cell` and scans it.
fn scan_cell<F>(f: &F, cell: Interval, cfg: &AdaptiveConfig) -> Result<(f64, PctFlags)>
where
    F: Fn(f64) -> f64,
{
    let exp = ChebyshevExpansion::compute(f, cell, cfg.n_quad, 2 * cfg.m)?;
    let sys = ToeplitzSystem::build(&exp, cfg.m, cfg.m)?;
    let sol = sys.solve_denominator()?;
    let min_abs_q = min_abs_on_circle(&sol.q, cfg.theta_samples);
    Ok((
        min_abs_q,
        PctFlags {
            degenerate_normalization: sol.degenerate_normalization,
            multiple_null_directions: sol.multiple_null_directions,
            series_exact: sol.series_exact,
        },
    ))
}

fn cell_is_flagged(min_abs_q: f64, flags: PctFlags, epsilon: f64) -> bool {
    min_abs_q < epsilon || flags.degenerate_normalization
}

/// Grows an adaptive partition by bisecting epsilon-badcells.
///
/// Starts from the two-cell bisection of `interval`. Each round scans the
/// active cells (round zero: both initial cells; afterwards only the children
/// of previously flagged cells), bisects every flagged cell, and unions the
/// midpoints into the partition. Iteration stops when no cell is flagged, when
/// the narrowest newly created cell drops below `tau`, or at `max_rounds`.
pub fn refine_partition<F>(f: F, interval: Interval, cfg: &AdaptiveConfig) -> Result<Partition>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    let mut breakpoints = vec![interval.a(), interval.midpoint(), interval.b()];
    let initial = Partition::from_breakpoints(breakpoints.clone())?;
    let mut active: Vec<Interval> = initial.cells().collect();

    for _ in 0..cfg.max_rounds {
        let scans = par::try_map_indexed(active.len(), |i| {
            scan_cell(&f, active[i], cfg).map(|(min, flags)| (active[i], min, flags))
        })?;
        let flagged: Vec<Interval> = scans
            .into_iter()
            .filter(|&(_, min, flags)| cell_is_flagged(min, flags, cfg.epsilon))
            .map(|(cell, _, _)| cell)
            .collect();
        if flagged.is_empty() {
            break;
        }
        let mut children = Vec::with_capacity(2 * flagged.len());
        for cell in &flagged {
            let (left, right) = cell.bisect();
            breakpoints.push(left.b());
            children.push(left);
            children.push(right);
        }
        let narrowest = children
            .iter()
            .map(Interval::width)
            .fold(f64::INFINITY, f64::min);
        if narrowest < cfg.tau {
            break;
        }
        active = children;
    }

    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();
    Partition::from_breakpoints(breakpoints)
}

/// Scans every cell of a partition, producing the report degree assignment
/// works from.
pub fn scan_partition<F>(
    f: F,
    partition: &Partition,
    cfg: &AdaptiveConfig,
) -> Result<Vec<BadCellScan>>
where
    F: Fn(f64) -> f64 + Sync,
{
    cfg.validate()?;
    par::try_map_indexed(partition.n_cells(), |j| {
        let (min_abs_q, flags) = scan_cell(&f, partition.cell(j), cfg).map_err(|e| e.in_cell(j))?;
        Ok(BadCellScan {
            cell_index: j,
            min_abs_q,
            is_bad: min_abs_q < cfg.epsilon,
            degenerate_denominator: flags.degenerate_normalization,
        })
    })
}

/// Degree choice: flagged cells get `(np, nq) = (n, m)`, the rest `(m, m)`.
pub fn assign_degrees(
    partition: &Partition,
    scans: &[BadCellScan],
    cfg: &AdaptiveConfig,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if scans.len() != partition.n_cells()
        || scans.iter().enumerate().any(|(i, s)| s.cell_index != i)
    {
        return Err(Error::InvalidArgument(
            "scans must cover every cell of the partition in order".into(),
        ));
    }
    let np = scans
        .iter()
        .map(|s| if s.flagged() { cfg.n_quad } else { cfg.m })
        .collect();
    let nq = vec![cfg.m; scans.len()];
    Ok((np, nq))
}

/// An assembled adaptive approximant together with its final scan report.
#[derive(Debug, Clone)]
pub struct AdaptiveApproximation {
    pub approximant: PiecewiseApproximant,
    pub scans: Vec<BadCellScan>,
}

impl AdaptiveApproximation {
    pub fn partition(&self) -> &Partition {
        self.approximant.partition()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.approximant.eval(x)
    }

    /// Cells flagged in the final scan.
    pub fn flagged_cells(&self) -> Vec<usize> {
        self.scans
            .iter()
            .filter(|s| s.flagged())
            .map(|s| s.cell_index)
            .collect()
    }
}

/// Refine, scan, choose degrees, assemble: the adaptive piecewise
/// Padé-Chebyshev type construction.
pub fn build_apipct<F>(f: F, interval: Interval, cfg: &AdaptiveConfig) -> Result<AdaptiveApproximation>
where
    F: Fn(f64) -> f64 + Sync,
{
    let partition = refine_partition(&f, interval, cfg)?;
    let scans = scan_partition(&f, &partition, cfg)?;
    let (np, nq) = assign_degrees(&partition, &scans, cfg)?;
    let approximant = build_pipct(&f, &partition, cfg.n_quad, &np, &nq)?;
    Ok(AdaptiveApproximation { approximant, scans })
}

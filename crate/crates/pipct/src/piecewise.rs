//! Partitions of an interval, piecewise Padé-Chebyshev type assembly over a
//! partition, piecewise evaluation, and L1-error / convergence-order
//! measurement.

use crate::chebyshev::ChebyshevExpansion;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par;
use crate::pct::PCTApproximant;

/// Default number of trapezoid panels per cell-window overlap in L1 error
/// measurement.
pub const DEFAULT_L1_SAMPLES: usize = 200;

/// Strictly increasing breakpoints `a_0 < a_1 < ... < a_N`; cell `j` is
/// `[a_j, a_{j+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    breakpoints: Vec<f64>,
}

impl Partition {
    pub fn from_breakpoints(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidArgument(
                "a partition needs at least two breakpoints".into(),
            ));
        }
        if !breakpoints.iter().all(|b| b.is_finite()) {
            return Err(Error::InvalidArgument("breakpoints must be finite".into()));
        }
        if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(Partition { breakpoints })
    }

    /// `N + 1` equally spaced breakpoints spanning the interval.
    pub fn uniform(interval: Interval, n_cells: usize) -> Result<Self> {
        if n_cells == 0 {
            return Err(Error::InvalidArgument("cell count must be positive".into()));
        }
        let (a, b) = (interval.a(), interval.b());
        let width = b - a;
        let breakpoints = (0..=n_cells)
            .map(|k| {
                if k == n_cells {
                    b
                } else {
                    a + width * k as f64 / n_cells as f64
                }
            })
            .collect();
        Partition::from_breakpoints(breakpoints)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn n_cells(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn cell(&self, j: usize) -> Interval {
        Interval::new(self.breakpoints[j], self.breakpoints[j + 1])
            .expect("partition invariant guarantees a < b")
    }

    pub fn span(&self) -> Interval {
        Interval::new(self.breakpoints[0], *self.breakpoints.last().unwrap())
            .expect("partition invariant guarantees a < b")
    }

    pub fn cells(&self) -> impl Iterator<Item = Interval> + '_ {
        (0..self.n_cells()).map(|j| self.cell(j))
    }

    /// Host cell of `x` under the half-open convention `[a_j, a_{j+1})` with
    /// the last cell closed. Points within `1e-12 * span` outside are clamped
    /// to the boundary cells.
    pub fn locate(&self, x: f64) -> Result<usize> {
        let a = self.breakpoints[0];
        let b = *self.breakpoints.last().unwrap();
        let tol = 1e-12 * (b - a);
        if x < a {
            return if a - x <= tol {
                Ok(0)
            } else {
                Err(Error::OutOfDomain { x, a, b })
            };
        }
        if x >= b {
            return if x - b <= tol {
                Ok(self.n_cells() - 1)
            } else {
                Err(Error::OutOfDomain { x, a, b })
            };
        }
        let idx = self.breakpoints.partition_point(|bp| *bp <= x);
        Ok(idx - 1)
    }
}

/// A partition-aligned collection of PCT approximants.
#[derive(Debug, Clone)]
pub struct PiecewiseApproximant {
    partition: Partition,
    cells: Vec<PCTApproximant>,
}

impl PiecewiseApproximant {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn cells(&self) -> &[PCTApproximant] {
        &self.cells
    }

    /// Locates the host cell and delegates to its rational evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let j = self.partition.locate(x)?;
        self.cells[j].eval(x).map_err(|e| e.in_cell(j))
    }

    /// Composite trapezoidal integral of `|f - self|` over `window`, split at
    /// breakpoints so the integrand stays piecewise smooth.
    pub fn l1_error<F>(&self, f: F, window: Interval, samples_per_cell: usize) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        l1_error_over_cells(
            &f,
            &self.partition,
            &|j, x| self.cells[j].eval(x),
            window,
            samples_per_cell,
        )
    }
}

/// A partition-aligned collection of truncated Chebyshev series, the
/// polynomial counterpart used for comparison columns.
#[derive(Debug, Clone)]
pub struct PiecewiseChebyshev {
    partition: Partition,
    cells: Vec<ChebyshevExpansion>,
}

impl PiecewiseChebyshev {
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn cells(&self) -> &[ChebyshevExpansion] {
        &self.cells
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let j = self.partition.locate(x)?;
        self.cells[j].eval(x).map_err(|e| e.in_cell(j))
    }

    pub fn l1_error<F>(&self, f: F, window: Interval, samples_per_cell: usize) -> Result<f64>
    where
        F: Fn(f64) -> f64 + Sync,
    {
        l1_error_over_cells(
            &f,
            &self.partition,
            &|j, x| self.cells[j].eval(x),
            window,
            samples_per_cell,
        )
    }
}

/// Builds the PiPCT approximant: per cell `j`, an `n_quad`-point expansion of
/// `f` restricted to the cell, rationalized to order `[np_j / nq_j]`. Cells
/// build independently (in parallel with the `parallel` feature); failures are
/// tagged with their cell index.
pub fn build_pipct<F>(
    f: F,
    partition: &Partition,
    n_quad: usize,
    np: &[usize],
    nq: &[usize],
) -> Result<PiecewiseApproximant>
where
    F: Fn(f64) -> f64 + Sync,
{
    check_degree_vectors(partition, np, nq)?;
    let cells = par::try_map_indexed(partition.n_cells(), |j| {
        build_cell(&f, partition.cell(j), n_quad, np[j], nq[j]).map_err(|e| e.in_cell(j))
    })?;
    Ok(PiecewiseApproximant {
        partition: partition.clone(),
        cells,
    })
}

/// Always-sequential twin of [`build_pipct`], for baseline comparison.
pub fn build_pipct_sequential<F>(
    f: F,
    partition: &Partition,
    n_quad: usize,
    np: &[usize],
    nq: &[usize],
) -> Result<PiecewiseApproximant>
where
    F: Fn(f64) -> f64,
{
    check_degree_vectors(partition, np, nq)?;
    let cells = par::try_map_indexed_seq(partition.n_cells(), |j| {
        build_cell(&f, partition.cell(j), n_quad, np[j], nq[j]).map_err(|e| e.in_cell(j))
    })?;
    Ok(PiecewiseApproximant {
        partition: partition.clone(),
        cells,
    })
}

/// [`build_pipct`] with one `[np/nq]` order broadcast to every cell.
pub fn build_pipct_uniform<F>(
    f: F,
    partition: &Partition,
    n_quad: usize,
    np: usize,
    nq: usize,
) -> Result<PiecewiseApproximant>
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = partition.n_cells();
    build_pipct(f, partition, n_quad, &vec![np; n], &vec![nq; n])
}

/// Piecewise truncated Chebyshev of degree `d` on every cell.
pub fn build_piecewise_chebyshev<F>(
    f: F,
    partition: &Partition,
    n_quad: usize,
    d: usize,
) -> Result<PiecewiseChebyshev>
where
    F: Fn(f64) -> f64 + Sync,
{
    let cells = par::try_map_indexed(partition.n_cells(), |j| {
        ChebyshevExpansion::compute(&f, partition.cell(j), n_quad, d).map_err(|e| e.in_cell(j))
    })?;
    Ok(PiecewiseChebyshev {
        partition: partition.clone(),
        cells,
    })
}

fn check_degree_vectors(partition: &Partition, np: &[usize], nq: &[usize]) -> Result<()> {
    if np.len() != partition.n_cells() || nq.len() != partition.n_cells() {
        return Err(Error::InvalidArgument(format!(
            "degree vectors must have one entry per cell ({}), got {} and {}",
            partition.n_cells(),
            np.len(),
            nq.len()
        )));
    }
    Ok(())
}

fn build_cell<F>(
    f: &F,
    cell: Interval,
    n_quad: usize,
    np: usize,
    nq: usize,
) -> Result<PCTApproximant>
where
    F: Fn(f64) -> f64,
{
    let exp = ChebyshevExpansion::compute(f, cell, n_quad, np + nq)?;
    PCTApproximant::build(&exp, np, nq)
}

fn l1_error_over_cells<F, E>(
    f: &F,
    partition: &Partition,
    eval: &E,
    window: Interval,
    samples_per_cell: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + Sync,
    E: Fn(usize, f64) -> Result<f64> + Sync,
{
    if samples_per_cell == 0 {
        return Err(Error::InvalidArgument(
            "samples_per_cell must be positive".into(),
        ));
    }
    let contributions = par::try_map_indexed(partition.n_cells(), |j| {
        let cell = partition.cell(j);
        let lo = cell.a().max(window.a());
        let hi = cell.b().min(window.b());
        if hi <= lo {
            return Ok(0.0);
        }
        let h = (hi - lo) / samples_per_cell as f64;
        let mut sum = 0.0;
        for i in 0..=samples_per_cell {
            let x = if i == samples_per_cell { hi } else { lo + h * i as f64 };
            let weight = if i == 0 || i == samples_per_cell { 0.5 } else { 1.0 };
            let diff = (f(x) - eval(j, x).map_err(|e| e.in_cell(j))?).abs();
            sum += weight * diff;
        }
        Ok(sum * h)
    })?;
    Ok(contributions.iter().sum())
}

/// One row of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub n_cells: usize,
    pub l1_error: f64,
    /// `log(e_prev / e_cur) / log(N_cur / N_prev)`; absent on the first row or
    /// when an error is not strictly positive.
    pub order: Option<f64>,
}

/// The log-ratio order of accuracy between two rows.
pub fn convergence_order(e_prev: f64, e_cur: f64, n_prev: usize, n_cur: usize) -> Option<f64> {
    if e_prev > 0.0 && e_cur > 0.0 && n_cur != n_prev {
        Some((e_prev / e_cur).ln() / (n_cur as f64 / n_prev as f64).ln())
    } else {
        None
    }
}

/// Runs the PiPCT construction across `n_list` uniform partitions and reports
/// L1 errors and orders over `window`.
pub fn convergence_table<F>(
    f: F,
    interval: Interval,
    window: Interval,
    n_list: &[usize],
    n_quad: usize,
    np: usize,
    nq: usize,
) -> Result<Vec<ConvergenceRecord>>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !n_list.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "N list must be strictly increasing".into(),
        ));
    }
    let mut records: Vec<ConvergenceRecord> = Vec::with_capacity(n_list.len());
    for &n_cells in n_list {
        let partition = Partition::uniform(interval, n_cells)?;
        let pa = build_pipct_uniform(&f, &partition, n_quad, np, nq)?;
        let l1 = pa.l1_error(&f, window, DEFAULT_L1_SAMPLES)?;
        let order = records
            .last()
            .and_then(|prev| convergence_order(prev.l1_error, l1, prev.n_cells, n_cells));
        records.push(ConvergenceRecord {
            n_cells,
            l1_error: l1,
            order,
        });
    }
    Ok(records)
}

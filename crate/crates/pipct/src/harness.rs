//! Experiment recipes: convergence tables, pointwise error sweeps, the
//! adaptive-vs-uniform comparison, pole maps, and the threshold-vs-degree
//! study. Each recipe returns typed rows and renders them as CSV with a
//! self-describing header; floats carry 17 significant digits.

use std::time::Instant;

use num_complex::Complex64;

use crate::adaptive::{build_apipct, min_abs_on_circle, AdaptiveConfig};
use crate::chebyshev::ChebyshevExpansion;
use crate::corpus::{Corpus, CorpusFunction, SingularityKind};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par;
use crate::pct::{horner, PCTApproximant, ToeplitzSystem};
use crate::piecewise::{
    build_piecewise_chebyshev, build_pipct_uniform, convergence_order, Partition,
};

/// 17 significant digits, the emission format for every float column.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f).unwrap_or_default()
}

fn lookup<'c>(corpus: &'c Corpus, id: &str) -> Result<&'c CorpusFunction> {
    corpus
        .get(id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown corpus function {id}")))
}

fn window_interval(entry: &CorpusFunction, window: Option<(f64, f64)>) -> Result<Interval> {
    match window {
        Some((a, b)) => Interval::new(a, b),
        None => Ok(entry.interval),
    }
}

// ---------------------------------------------------------------------------
// Convergence tables
// ---------------------------------------------------------------------------

/// Parameters for an L1 convergence table over a list of uniform partitions.
#[derive(Debug, Clone)]
pub struct TableSpec {
    pub fn_id: String,
    pub n_list: Vec<usize>,
    pub n_quad: usize,
    pub np: usize,
    pub nq: usize,
    /// Measurement window; `None` means the whole interval.
    pub window: Option<(f64, f64)>,
    pub samples_per_cell: usize,
}

impl TableSpec {
    /// Jump + point-singularity target, error measured on `[0.2, 1]`.
    pub fn table1() -> Self {
        TableSpec {
            fn_id: "jump_sqrt".into(),
            n_list: vec![2, 8, 32, 128, 256, 512],
            n_quad: 200,
            np: 20,
            nq: 20,
            window: Some((0.2, 1.0)),
            samples_per_cell: 200,
        }
    }

    /// `x|x|` over the whole interval.
    pub fn table2() -> Self {
        TableSpec {
            fn_id: "xabsx".into(),
            n_list: vec![2, 4, 8, 16],
            n_quad: 200,
            np: 20,
            nq: 20,
            window: None,
            samples_per_cell: 200,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub n_cells: usize,
    pub cheb_l1: f64,
    pub cheb_order: Option<f64>,
    pub pipct_l1: f64,
    pub pipct_order: Option<f64>,
}

/// Builds, per partition size, both the piecewise Chebyshev (degree `np+nq`)
/// and the PiPCT approximants and measures their L1 errors over the window.
pub fn run_table(corpus: &Corpus, spec: &TableSpec) -> Result<Vec<TableRow>> {
    let entry = lookup(corpus, &spec.fn_id)?;
    let f = entry.f;
    let window = window_interval(entry, spec.window)?;
    let mut rows: Vec<TableRow> = Vec::with_capacity(spec.n_list.len());
    for &n_cells in &spec.n_list {
        let partition = Partition::uniform(entry.interval, n_cells)?;
        let cheb = build_piecewise_chebyshev(f, &partition, spec.n_quad, spec.np + spec.nq)?;
        let pipct = build_pipct_uniform(f, &partition, spec.n_quad, spec.np, spec.nq)?;
        let cheb_l1 = cheb.l1_error(f, window, spec.samples_per_cell)?;
        let pipct_l1 = pipct.l1_error(f, window, spec.samples_per_cell)?;
        let prev = rows.last();
        rows.push(TableRow {
            n_cells,
            cheb_l1,
            cheb_order: prev
                .and_then(|p| convergence_order(p.cheb_l1, cheb_l1, p.n_cells, n_cells)),
            pipct_l1,
            pipct_order: prev
                .and_then(|p| convergence_order(p.pipct_l1, pipct_l1, p.n_cells, n_cells)),
        });
    }
    Ok(rows)
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n_cells,cheb_l1_error,cheb_order,pipct_l1_error,pipct_order\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n_cells,
            fmt_f(r.cheb_l1),
            fmt_opt(r.cheb_order),
            fmt_f(r.pipct_l1),
            fmt_opt(r.pipct_order),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Pointwise error sweeps
// ---------------------------------------------------------------------------

/// Parameters for dense-grid pointwise error sweeps: piecewise runs over
/// `n_list` at fixed `[np/nq]`, and global single-cell runs over `np_list`.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub fn_id: String,
    pub n_list: Vec<usize>,
    pub np_list: Vec<usize>,
    pub n_quad: usize,
    pub np: usize,
    pub nq: usize,
    pub grid_samples: usize,
    /// Half-width of the neighborhood around each singularity for the maxima.
    pub half_width: f64,
    /// Run the global baseline at the full matched budget instead of capping.
    pub full_scale: bool,
    pub global_cap: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            fn_id: "jump_sqrt".into(),
            n_list: vec![2, 8, 32, 128, 512],
            np_list: vec![2, 8, 16, 32],
            n_quad: 200,
            np: 20,
            nq: 20,
            grid_samples: 4096,
            half_width: 0.05,
            full_scale: false,
            global_cap: 20480,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    /// "pipct" for partitioned runs, "global" for the single-cell baseline.
    pub series: &'static str,
    pub n_cells: usize,
    pub np: usize,
    pub nq: usize,
    /// "peak" rows are local maxima of the pointwise error; "nbhd_max" rows
    /// are the maxima over a singularity neighborhood.
    pub kind: &'static str,
    pub x: f64,
    pub value: f64,
}

fn grid_errors<E>(eval: E, interval: Interval, f: fn(f64) -> f64, grid: usize) -> Result<Vec<(f64, f64)>>
where
    E: Fn(f64) -> Result<f64> + Sync,
{
    par::try_map_indexed(grid, |i| {
        let x = interval.a() + interval.width() * i as f64 / (grid - 1) as f64;
        let approx = eval(x)?;
        Ok((x, (f(x) - approx).abs()))
    })
}

fn push_peaks(
    rows: &mut Vec<SweepRow>,
    errs: &[(f64, f64)],
    series: &'static str,
    n_cells: usize,
    np: usize,
    nq: usize,
) {
    for i in 1..errs.len().saturating_sub(1) {
        let (x, e) = errs[i];
        if e > 0.0 && e >= errs[i - 1].1 && e >= errs[i + 1].1 {
            rows.push(SweepRow {
                series,
                n_cells,
                np,
                nq,
                kind: "peak",
                x,
                value: e,
            });
        }
    }
}

fn push_neighborhood_maxima(
    rows: &mut Vec<SweepRow>,
    errs: &[(f64, f64)],
    entry: &CorpusFunction,
    half_width: f64,
    series: &'static str,
    n_cells: usize,
    np: usize,
    nq: usize,
) {
    for s in &entry.singularities {
        let max = errs
            .iter()
            .filter(|(x, _)| (x - s.location).abs() <= half_width)
            .map(|&(_, e)| e)
            .fold(0.0_f64, f64::max);
        rows.push(SweepRow {
            series,
            n_cells,
            np,
            nq,
            kind: "nbhd_max",
            x: s.location,
            value: max,
        });
    }
}

/// Maximum pointwise error over the grid within `half_width` of `location`.
pub fn neighborhood_max_error<E>(
    eval: E,
    interval: Interval,
    f: fn(f64) -> f64,
    grid: usize,
    location: f64,
    half_width: f64,
) -> Result<f64>
where
    E: Fn(f64) -> Result<f64> + Sync,
{
    let errs = grid_errors(eval, interval, f, grid)?;
    Ok(errs
        .iter()
        .filter(|(x, _)| (x - location).abs() <= half_width)
        .map(|&(_, e)| e)
        .fold(0.0_f64, f64::max))
}

/// Dense-grid pointwise error sweeps: peaks plus per-singularity maxima.
pub fn run_error_sweep(corpus: &Corpus, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let entry = lookup(corpus, &spec.fn_id)?;
    let f = entry.f;
    let mut rows = Vec::new();

    for &n_cells in &spec.n_list {
        let partition = Partition::uniform(entry.interval, n_cells)?;
        let pa = build_pipct_uniform(f, &partition, spec.n_quad, spec.np, spec.nq)?;
        let errs = grid_errors(|x| pa.eval(x), entry.interval, f, spec.grid_samples)?;
        push_peaks(&mut rows, &errs, "pipct", n_cells, spec.np, spec.nq);
        push_neighborhood_maxima(
            &mut rows,
            &errs,
            entry,
            spec.half_width,
            "pipct",
            n_cells,
            spec.np,
            spec.nq,
        );
    }

    if !spec.np_list.is_empty() {
        let matched = spec.n_list.iter().copied().max().unwrap_or(512) * spec.n_quad;
        let global_n = if spec.full_scale {
            matched
        } else {
            matched.min(spec.global_cap)
        };
        for &np in &spec.np_list {
            let exp = ChebyshevExpansion::compute(f, entry.interval, global_n, 2 * np)?;
            let r = PCTApproximant::build(&exp, np, np)?;
            let errs = grid_errors(|x| r.eval(x), entry.interval, f, spec.grid_samples)?;
            push_peaks(&mut rows, &errs, "global", 1, np, np);
            push_neighborhood_maxima(
                &mut rows,
                &errs,
                entry,
                spec.half_width,
                "global",
                1,
                np,
                np,
            );
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("series,n_cells,np,nq,kind,x,abs_err\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.series,
            r.n_cells,
            r.np,
            r.nq,
            r.kind,
            fmt_f(r.x),
            fmt_f(r.value),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Adaptive vs uniform comparison
// ---------------------------------------------------------------------------

/// Parameters for the PiPCT-vs-APiPCT accuracy and timing comparison at
/// matched `N` (and `tau = (b - a) / N`).
#[derive(Debug, Clone)]
pub struct AdaptiveCompareSpec {
    pub fn_id: String,
    pub n_list: Vec<usize>,
    pub n_quad: usize,
    pub m: usize,
    pub epsilon: f64,
    pub theta_samples: usize,
    pub half_width: f64,
    pub grid_samples: usize,
    /// Wall-clock medians are taken over this many repetitions.
    pub repeats: usize,
}

impl Default for AdaptiveCompareSpec {
    fn default() -> Self {
        AdaptiveCompareSpec {
            fn_id: "jump_sqrt".into(),
            n_list: vec![104, 208, 312, 416],
            n_quad: 200,
            m: 20,
            epsilon: 1e-2,
            theta_samples: 1024,
            half_width: 0.05,
            grid_samples: 4096,
            repeats: 5,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveCompareRow {
    pub n_cells: usize,
    pub tau: f64,
    pub adaptive_cells: usize,
    pub pipct_jump_err: f64,
    pub apipct_jump_err: f64,
    pub pipct_point_err: f64,
    pub apipct_point_err: f64,
    pub pipct_build_ms: f64,
    pub apipct_build_ms: f64,
}

fn median_ms(samples: &mut Vec<f64>) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}

fn time_ms<T>(repeats: usize, mut build: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let mut times = Vec::with_capacity(repeats);
    let mut out = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let value = build()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
        out = Some(value);
    }
    Ok((out.unwrap(), median_ms(&mut times)))
}

/// Builds both approximants at each matched `N`, measuring neighborhood-max
/// errors at the registered jump and point singularities and median build
/// times.
pub fn run_adaptive_compare(
    corpus: &Corpus,
    spec: &AdaptiveCompareSpec,
) -> Result<Vec<AdaptiveCompareRow>> {
    let entry = lookup(corpus, &spec.fn_id)?;
    let f = entry.f;
    let jump = entry
        .singularities
        .iter()
        .find(|s| s.kind == SingularityKind::Jump)
        .ok_or_else(|| Error::InvalidArgument("function has no registered jump".into()))?
        .location;
    let point = entry
        .singularities
        .iter()
        .find(|s| s.kind == SingularityKind::Point)
        .ok_or_else(|| Error::InvalidArgument("function has no registered point singularity".into()))?
        .location;

    let mut rows = Vec::with_capacity(spec.n_list.len());
    for &n_cells in &spec.n_list {
        let tau = entry.interval.width() / n_cells as f64;
        let partition = Partition::uniform(entry.interval, n_cells)?;
        let (pipct, pipct_ms) = time_ms(spec.repeats, || {
            build_pipct_uniform(f, &partition, spec.n_quad, spec.m, spec.m)
        })?;
        let mut cfg = AdaptiveConfig::new(spec.epsilon, tau, spec.m, spec.n_quad);
        cfg.theta_samples = spec.theta_samples;
        let (apipct, apipct_ms) =
            time_ms(spec.repeats, || build_apipct(f, entry.interval, &cfg))?;

        let pipct_errs = grid_errors(|x| pipct.eval(x), entry.interval, f, spec.grid_samples)?;
        let apipct_errs = grid_errors(|x| apipct.eval(x), entry.interval, f, spec.grid_samples)?;
        let nbhd_max = |errs: &[(f64, f64)], loc: f64| {
            errs.iter()
                .filter(|(x, _)| (x - loc).abs() <= spec.half_width)
                .map(|&(_, e)| e)
                .fold(0.0_f64, f64::max)
        };
        rows.push(AdaptiveCompareRow {
            n_cells,
            tau,
            adaptive_cells: apipct.partition().n_cells(),
            pipct_jump_err: nbhd_max(&pipct_errs, jump),
            apipct_jump_err: nbhd_max(&apipct_errs, jump),
            pipct_point_err: nbhd_max(&pipct_errs, point),
            apipct_point_err: nbhd_max(&apipct_errs, point),
            pipct_build_ms: pipct_ms,
            apipct_build_ms: apipct_ms,
        });
    }
    Ok(rows)
}

pub fn adaptive_compare_csv(rows: &[AdaptiveCompareRow]) -> String {
    let mut out = String::from(
        "n_cells,tau,adaptive_cells,pipct_jump_max_err,apipct_jump_max_err,\
         pipct_point_max_err,apipct_point_max_err,pipct_build_ms,apipct_build_ms\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n_cells,
            fmt_f(r.tau),
            r.adaptive_cells,
            fmt_f(r.pipct_jump_err),
            fmt_f(r.apipct_jump_err),
            fmt_f(r.pipct_point_err),
            fmt_f(r.apipct_point_err),
            fmt_f(r.pipct_build_ms),
            fmt_f(r.apipct_build_ms),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Pole map
// ---------------------------------------------------------------------------

/// Parameters for pole/residue maps in singular cells plus the global
/// unit-circle scan.
#[derive(Debug, Clone)]
pub struct PoleMapSpec {
    pub fn_id: String,
    pub np_list: Vec<usize>,
    pub n_quad: usize,
    /// Uniform partition whose singularity-hosting cells are pole-mapped.
    pub n_cells: usize,
    /// Scan rows are emitted where `|Q| < epsilon`.
    pub epsilon: f64,
    pub theta_samples: usize,
    /// Residual threshold for the spurious classification.
    pub threshold: f64,
}

impl Default for PoleMapSpec {
    fn default() -> Self {
        PoleMapSpec {
            fn_id: "jump_sqrt".into(),
            np_list: vec![8, 16, 32],
            n_quad: 200,
            n_cells: 8,
            epsilon: 1e-2,
            theta_samples: 1024,
            threshold: crate::diagnostics::DEFAULT_SPURIOUS_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PoleMapRow {
    /// "pole" rows carry a root and its residual magnitude; "scan" rows carry
    /// a unit-circle point where the global denominator dipped below epsilon.
    pub record: &'static str,
    pub np: usize,
    /// The singularity hosted by the cell, for pole rows.
    pub singularity: Option<f64>,
    pub re: f64,
    pub im: f64,
    /// `|residual|` for poles, `|Q|` for scan points.
    pub value: f64,
    pub spurious: Option<bool>,
}

/// Emits pole/residual/classification rows for every singularity-hosting cell
/// at each `[np/np]`, plus the global-interval circle points below epsilon.
pub fn run_pole_map(corpus: &Corpus, spec: &PoleMapSpec) -> Result<Vec<PoleMapRow>> {
    let entry = lookup(corpus, &spec.fn_id)?;
    let f = entry.f;
    let partition = Partition::uniform(entry.interval, spec.n_cells)?;
    let mut rows = Vec::new();

    for &np in &spec.np_list {
        // Global-interval scan: points on the circle where |Q| < epsilon.
        let exp = ChebyshevExpansion::compute(f, entry.interval, spec.n_quad, 2 * np)?;
        let sol = ToeplitzSystem::build(&exp, np, np)?.solve_denominator()?;
        let step = std::f64::consts::PI / (spec.theta_samples - 1) as f64;
        for i in 0..spec.theta_samples {
            let theta = i as f64 * step;
            let z = Complex64::new(theta.cos(), theta.sin());
            let q_abs = horner(&sol.q, z).norm();
            if q_abs < spec.epsilon {
                rows.push(PoleMapRow {
                    record: "scan",
                    np,
                    singularity: None,
                    re: z.re,
                    im: z.im,
                    value: q_abs,
                    spurious: None,
                });
            }
        }

        for s in &entry.singularities {
            let j = partition.locate(s.location)?;
            let cell = partition.cell(j);
            let exp = ChebyshevExpansion::compute(f, cell, spec.n_quad, 2 * np)?;
            let r = PCTApproximant::build(&exp, np, np)?;
            let report = crate::diagnostics::pole_report(&r, spec.threshold)?;
            for ((z, res), spurious) in report
                .poles
                .iter()
                .zip(&report.residuals)
                .zip(&report.spurious)
            {
                rows.push(PoleMapRow {
                    record: "pole",
                    np,
                    singularity: Some(s.location),
                    re: z.re,
                    im: z.im,
                    value: res.norm(),
                    spurious: Some(*spurious),
                });
            }
        }
    }
    Ok(rows)
}

pub fn pole_map_csv(rows: &[PoleMapRow]) -> String {
    let mut out = String::from("record,np,singularity,re,im,value,spurious\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.record,
            r.np,
            fmt_opt(r.singularity),
            fmt_f(r.re),
            fmt_f(r.im),
            fmt_f(r.value),
            r.spurious.map(|s| s.to_string()).unwrap_or_default(),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Minimal degree vs epsilon
// ---------------------------------------------------------------------------

/// Parameters for tabulating the minimal `np` whose denominator dips below
/// each epsilon on the unit circle.
#[derive(Debug, Clone)]
pub struct Np0Spec {
    pub fn_id: String,
    pub eps_list: Vec<f64>,
    pub n_quad: usize,
    pub np_cap: usize,
    pub theta_samples: usize,
}

impl Default for Np0Spec {
    fn default() -> Self {
        Np0Spec {
            fn_id: "jump_sqrt".into(),
            eps_list: vec![0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001],
            n_quad: 200,
            np_cap: 40,
            theta_samples: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Np0Row {
    pub eps: f64,
    /// Minimal `np` with `min |Q_np| < eps`, or `None` if no `np` up to the
    /// cap qualifies.
    pub np0: Option<usize>,
}

/// Linear search over `np` for each epsilon; the circle minima are computed
/// once per degree and reused.
pub fn run_np0(corpus: &Corpus, spec: &Np0Spec) -> Result<Vec<Np0Row>> {
    let entry = lookup(corpus, &spec.fn_id)?;
    if 2 * spec.np_cap > 2 * spec.n_quad - 1 {
        return Err(Error::InvalidArgument(format!(
            "np cap {} needs 2np <= 2n - 1 with n = {}",
            spec.np_cap, spec.n_quad
        )));
    }
    let exp = ChebyshevExpansion::compute(entry.f, entry.interval, spec.n_quad, 2 * spec.np_cap)?;
    let minima: Vec<(usize, f64)> = par::try_map_indexed(spec.np_cap, |i| {
        let np = i + 1;
        let sol = ToeplitzSystem::build(&exp, np, np)?.solve_denominator()?;
        Ok((np, min_abs_on_circle(&sol.q, spec.theta_samples)))
    })?;
    Ok(spec
        .eps_list
        .iter()
        .map(|&eps| Np0Row {
            eps,
            np0: minima.iter().find(|&&(_, m)| m < eps).map(|&(np, _)| np),
        })
        .collect())
}

pub fn np0_csv(rows: &[Np0Row]) -> String {
    let mut out = String::from("eps,np0\n");
    for r in rows {
        out.push_str(&format!(
            "{},{}\n",
            fmt_f(r.eps),
            r.np0.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Ad-hoc evaluation grid
// ---------------------------------------------------------------------------

/// Parameters for an ad-hoc evaluation grid of a uniform PiPCT approximant.
#[derive(Debug, Clone)]
pub struct ApproxSpec {
    pub fn_id: String,
    pub n_cells: usize,
    pub n_quad: usize,
    pub np: usize,
    pub nq: usize,
    pub grid_samples: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct ApproxRow {
    pub x: f64,
    pub f: f64,
    pub approx: f64,
    pub abs_err: f64,
}

pub fn run_approx(corpus: &Corpus, spec: &ApproxSpec) -> Result<Vec<ApproxRow>> {
    let entry = lookup(corpus, &spec.fn_id)?;
    let f = entry.f;
    let partition = Partition::uniform(entry.interval, spec.n_cells)?;
    let pa = build_pipct_uniform(f, &partition, spec.n_quad, spec.np, spec.nq)?;
    par::try_map_indexed(spec.grid_samples, |i| {
        let x = entry.interval.a()
            + entry.interval.width() * i as f64 / (spec.grid_samples - 1) as f64;
        let approx = pa.eval(x)?;
        Ok(ApproxRow {
            x,
            f: f(x),
            approx,
            abs_err: (f(x) - approx).abs(),
        })
    })
}

pub fn approx_csv(rows: &[ApproxRow]) -> String {
    let mut out = String::from("x,f,approx,abs_err\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f(r.x),
            fmt_f(r.f),
            fmt_f(r.approx),
            fmt_f(r.abs_err),
        ));
    }
    out
}

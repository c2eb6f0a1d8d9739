use pipct::corpus::*;
use pipct::*;

fn main() {
    // ---- C3: aliasing identities, 20 pseudo-random smooth functions ----
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let unit = Interval::new(-1.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let a: [f64; 5] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let f = move |x: f64| {
            a[0] + a[1] * x + a[2] * x * x + a[3] * (3.0 * x + a[4]).sin() + a[4] * (0.7 * x).exp()
        };
        for n in [10usize, 50, 200] {
            let exp = ChebyshevExpansion::compute(f, unit, n, 2 * n - 1).unwrap();
            let c = exp.coeffs();
            let scale = exp.coeff_scale();
            let mut m: f64 = c[n].abs();
            for j in 1..n {
                m = m.max((c[n + j] + c[n - j]).abs());
            }
            worst = worst.max(m / scale);
        }
    }
    println!("C3 worst relative identity defect: {worst:.3e} (tolerance 1e-13)");

    // ---- C4 support: bitwise matrix flip identity ----
    let n = 200usize;
    let nq = 20usize;
    let cell = Interval::new(-1.0, 0.0).unwrap();
    let exp = ChebyshevExpansion::compute(jump_sqrt, cell, n, n + nq + 20).unwrap();
    let mut bitwise = true;
    for j in [0usize, 5, 20] {
        let lo = ToeplitzSystem::build(&exp, n - j - 1, nq).unwrap();
        let hi = ToeplitzSystem::build(&exp, n + j, nq).unwrap();
        for r in 1..=nq {
            for s in 1..=(nq + 1) {
                if hi.entry(r, s) != -lo.entry(nq + 1 - r, nq + 2 - s) {
                    bitwise = false;
                }
            }
        }
    }
    println!("C4 support: A(n+j) == -R A(n-j-1) R bitwise: {bitwise}");

    // ---- C10: reduction oracle on 10^4 random points ----
    let p = Partition::uniform(unit, 8).unwrap();
    let mut cells_pct = Vec::new();
    let mut cells_cheb = Vec::new();
    for j in 0..p.n_cells() {
        let e = ChebyshevExpansion::compute(jump_sqrt, p.cell(j), 200, 40).unwrap();
        cells_pct.push(PCTApproximant::truncated_series(&e, 40).unwrap());
        cells_cheb.push(e);
    }
    let mut max_diff: f64 = 0.0;
    for _ in 0..10_000 {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let j = p.locate(x).unwrap();
        let a = cells_pct[j].eval(x).unwrap();
        let b = cells_cheb[j].eval(x).unwrap();
        max_diff = max_diff.max((a - b).abs());
    }
    println!("C10 max |pct - clenshaw| over 1e4 points: {max_diff:.3e} (tolerance 1e-12)");

    // ---- C5: residual bound across a corpus build ----
    let corpus = Corpus::standard();
    let mut worst_rel: f64 = 0.0;
    for entry in corpus.entries() {
        let part = Partition::uniform(entry.interval, 16).unwrap();
        let pa = build_pipct_uniform(entry.f, &part, 100, 12, 12).unwrap();
        for cell in pa.cells() {
            worst_rel = worst_rel.max(cell.denominator_residual());
        }
    }
    println!("C5 worst absolute residual across corpus: {worst_rel:.3e}");
}

//! Quadrature kernels shared by the norm, identity and Carleson routines.
//!
//! Three families live here: Gauss-Legendre rules (plain, composite and
//! log-graded), the periodic trapezoid rule on the circle, and a globally
//! adaptive Gauss-Kronrod (7, 15) integrator. All reductions use pairwise
//! summation in a fixed order, so results do not depend on thread count.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::geometry::wrap_angle;

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        let mut s = 0.0;
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Nodes and weights of the n-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let terms: Vec<f64> = self.on_interval(a, b).map(|(x, w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Radial rule on `[0, 1]` for integrands with at most a logarithmic
/// singularity at 0: one Gauss-Legendre panel per decade between `floor`
/// and 1, the `[0, floor]` remnant left to the caller.
#[derive(Debug, Clone)]
pub struct GradedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub floor: f64,
}

impl GradedRule {
    pub fn new(total_nodes: usize, floor: f64) -> Self {
        let decades = (-floor.log10()).ceil().max(1.0) as usize;
        let per_panel = (total_nodes / decades).max(4);
        let gl = GaussLegendre::new(per_panel);
        let mut nodes = Vec::with_capacity(per_panel * decades);
        let mut weights = Vec::with_capacity(per_panel * decades);
        for k in (0..decades).rev() {
            let hi = 10f64.powi(-(k as i32));
            let lo = if k + 1 == decades {
                floor
            } else {
                10f64.powi(-(k as i32) - 1)
            };
            for (x, w) in gl.on_interval(lo, hi) {
                nodes.push(x);
                weights.push(w);
            }
        }
        Self {
            nodes,
            weights,
            floor,
        }
    }
}

/// Equispaced angles `2 pi j / m`.
pub fn circle_angles(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| 2.0 * PI * j as f64 / m as f64)
}

/// Periodic trapezoid rule for `int_0^{2pi} f(theta) d theta`.
pub fn trapezoid_circle<F: Fn(f64) -> f64>(m: usize, f: F) -> f64 {
    let values: Vec<f64> = circle_angles(m).map(f).collect();
    pairwise_sum(&values) * 2.0 * PI / m as f64
}

const GK_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and its error on `[a, b]`, with the usual rescaling of
/// `|Kronrod - Gauss|` and a floor at the rounding level of the panel.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = GK_WK[7] * fc;
    let mut gauss = GK_WG[3] * fc;
    let mut resabs = GK_WK[7] * fc.abs();
    let mut samples = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * GK_XK[j];
        let (f1, f2) = (f(mid - dx), f(mid + dx));
        samples[j] = (f1, f2);
        kronrod += GK_WK[j] * (f1 + f2);
        resabs += GK_WK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += GK_WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut resasc = GK_WK[7] * (fc - mean).abs();
    for j in 0..7 {
        let (f1, f2) = samples[j];
        resasc += GK_WK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let scale = half.abs();
    let resasc = resasc * scale;
    let resabs = resabs * scale;
    let mut err = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (kronrod * half, err)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_panels: 6000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Globally adaptive GK15 over the panels delimited by sorted `breaks`.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, breaks: &[f64], opts: AdaptiveOptions) -> Integral {
    debug_assert!(breaks.len() >= 2);
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&f, w[0], w[1]);
            heap.push(Panel {
                a: w[0],
                b: w[1],
                value,
                error,
                seq,
            });
            seq += 1;
        }
    }
    let mut run_value: f64 = heap.iter().map(|p| p.value).sum();
    let mut run_error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * run_value.abs());
        let finished = run_error <= target || !run_value.is_finite();
        if finished || heap.len() >= opts.max_panels {
            let (total, err) = totals(&heap);
            let converged = total.is_finite() && err <= opts.abs_tol.max(opts.rel_tol * total.abs());
            return Integral {
                value: total,
                error: err,
                converged,
            };
        }
        let worst = heap.pop().expect("heap is non-empty");
        run_value -= worst.value;
        run_error -= worst.error;
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // panel cannot be split further in double precision
            run_value += worst.value;
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, a, b);
            run_value += value;
            run_error += error;
            heap.push(Panel {
                a,
                b,
                value,
                error,
                seq,
            });
            seq += 1;
        }
        if run_error < 0.0 {
            run_error = heap.iter().map(|p| p.error).sum();
        }
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    // deterministic order: sort panels by left endpoint before summing
    let mut panels: Vec<(f64, f64, f64)> = heap.iter().map(|p| (p.a, p.value, p.error)).collect();
    panels.sort_by(|x, y| x.0.total_cmp(&y.0));
    let values: Vec<f64> = panels.iter().map(|p| p.1).collect();
    let errors: Vec<f64> = panels.iter().map(|p| p.2).collect();
    (pairwise_sum(&values), pairwise_sum(&errors))
}

/// A location on the circle where the integrand varies on the scale `width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Focus {
    pub angle: f64,
    pub width: f64,
}

/// `int_0^{2 pi} f(theta) d theta` with breakpoints graded geometrically
/// toward each focus, then refined adaptively.
pub fn circle_integral<F: Fn(f64) -> f64>(f: F, foci: &[Focus], opts: AdaptiveOptions) -> Integral {
    const BASE_PANELS: usize = 32;
    let mut breaks: Vec<f64> = (0..BASE_PANELS)
        .map(|j| 2.0 * PI * j as f64 / BASE_PANELS as f64)
        .collect();
    for focus in foci {
        if !(focus.width > 0.0) || focus.width >= 0.2 {
            continue;
        }
        breaks.push(wrap_angle(focus.angle));
        let mut d = 0.5 * focus.width;
        while d < 0.25 {
            breaks.push(wrap_angle(focus.angle - d));
            breaks.push(wrap_angle(focus.angle + d));
            d *= 2.0;
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    breaks.push(2.0 * PI);
    adaptive(f, &breaks, opts)
}

/// Golden-section search for a maximum of `f` on `[a, b]`; returns the best
/// abscissa seen and its value.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..100 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
        if (b - a).abs() < 1e-13 {
            break;
        }
    }
    best
}

//! Numerical integration: globally adaptive Gauss–Kronrod (7/15) on finite
//! and semi-infinite intervals, plus Gauss–Laguerre rules for expectations
//! against the unit exponential density.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integration did not reach tolerance: estimate {value:e}, error {error:e} after {subdivisions} subdivisions")]
    NoConvergence { value: f64, error: f64, subdivisions: usize },
    #[error("integrand returned a non-finite value at x = {0}")]
    NonFinite(f64),
    #[error("invalid quadrature settings: {0}")]
    Invalid(String),
}

/// Tolerances shared by every analytic routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Number of Gauss–Laguerre nodes used for E_h[.] under Rayleigh fading.
    /// Zero (the default) selects adaptive integration: the outage integrands
    /// vary on the scale 1/(β d₀^α), far below the smallest Laguerre node.
    pub fading_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-10, rel_tol: 1e-8, max_subdivisions: 2000, fading_nodes: 0 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(QuadratureError::Invalid(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn halved(&self) -> Self {
        QuadratureSpec { abs_tol: self.abs_tol / 2.0, rel_tol: self.rel_tol / 2.0, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), QuadratureError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    if !fc.is_finite() {
        return Err(QuadratureError::NonFinite(c));
    }
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        if !f1.is_finite() {
            return Err(QuadratureError::NonFinite(c - dx));
        }
        if !f2.is_finite() {
            return Err(QuadratureError::NonFinite(c + dx));
        }
        kron += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kron * h, ((kron - gauss) * h).abs()))
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// ∫_a^b f(x) dx by global adaptive bisection.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral, QuadratureError> {
    spec.validate()?;
    if a == b {
        return Ok(Integral { value: 0.0, abs_error: 0.0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(QuadratureError::Invalid(format!("finite limits required, got [{a}, {b}]")));
    }
    let (sign, lo, hi) = if a < b { (1.0, a, b) } else { (-1.0, b, a) };
    let (v, e) = gk15(&mut f, lo, hi)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a: lo, b: hi, value: v, error: e });
    let mut total = v;
    let mut total_err = e;
    let mut n = 1;
    while total_err > spec.abs_tol.max(spec.rel_tol * total.abs()) {
        if n >= spec.max_subdivisions {
            return Err(QuadratureError::NoConvergence { value: sign * total, error: total_err, subdivisions: n });
        }
        let seg = heap.pop().expect("heap never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval can no longer be split in floating point
            return Err(QuadratureError::NoConvergence { value: sign * total, error: total_err, subdivisions: n });
        }
        let (v1, e1) = gk15(&mut f, seg.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, seg.b)?;
        total += v1 + v2 - seg.value;
        heap.push(Segment { a: seg.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, error: e2 });
        n += 1;
        // recompute sums periodically to avoid drift
        if n % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
        }
        total_err = heap.iter().map(|s| s.error).sum();
    }
    let value: f64 = heap.iter().map(|s| s.value).sum();
    Ok(Integral { value: sign * value, abs_error: total_err })
}

/// ∫_a^∞ f(x) dx via x = a + t/(1−t).
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, spec: &QuadratureSpec) -> Result<Integral, QuadratureError> {
    integrate(
        |t| {
            let u = 1.0 - t;
            let x = a + t / u;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (u * u)
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// Gauss–Laguerre rule: ∫_0^∞ e^{−x} g(x) dx ≈ Σ w_i g(x_i).
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(n: usize) -> Result<Self, QuadratureError> {
        if n == 0 {
            return Err(QuadratureError::Invalid("zero Gauss-Laguerre nodes".into()));
        }
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let mut z = 0.0_f64;
        for i in 0..n {
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            let mut converged = false;
            let mut p2 = 0.0;
            let mut pp = 0.0;
            for _ in 0..200 {
                let mut p1 = 1.0;
                p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
                }
                pp = nf * (p1 - p2) / z;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 3e-14 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(QuadratureError::Invalid(format!("Gauss-Laguerre root {i} of {n} did not converge")));
            }
            nodes[i] = z;
            weights[i] = -1.0 / (pp * nf * p2);
        }
        Ok(GaussLaguerre { nodes, weights })
    }

    pub fn expect<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// E_h[g(h)] for h with density e^{−h}, using the rule selected by `spec`.
pub fn expect_exponential<F, E>(mut g: F, spec: &QuadratureSpec) -> Result<Integral, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    E: From<QuadratureError>,
{
    let mut failure = None;
    let mut wrapped = |h: f64| match g(h) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let out = if spec.fading_nodes > 0 {
        let rule = laguerre_rule(spec.fading_nodes).map_err(E::from)?;
        Integral { value: rule.expect(&mut wrapped), abs_error: f64::NAN }
    } else {
        integrate_to_infinity(|h| (-h).exp() * wrapped(h), 0.0, spec).map_err(E::from)?
    };
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn laguerre_rule(n: usize) -> Result<std::sync::Arc<GaussLaguerre>, QuadratureError> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLaguerre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("rule cache poisoned");
    if let Some(rule) = guard.get(&n) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(GaussLaguerre::new(n)?);
    guard.insert(n, rule.clone());
    Ok(rule)
}

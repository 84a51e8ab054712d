//! Independent numerical evaluation of Petersson pairings for scalar forms on
//! SL2(Z): Poincare series summed over coset representatives, and quadrature
//! over the standard fundamental domain.
//!
//! Everything here runs in `f64`; it is a cross-check on the exact formulas,
//! not a source of high-precision values.

use crate::error::{Error, Result};
use crate::pairing::{bracket_pairing, envelope, growth_exponent, poincare_pairing_coeff, BracketPairingParams};
use crate::qseries::FourierSeries;
use crate::vvforms::{BracketPlan, VVForm};
use num_complex::Complex64;
use rayon::prelude::*;
use rug::Rational;
use std::f64::consts::PI;
use std::time::Instant;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

/// A matrix `[[a, b], [c, d]]` in SL2(Z) standing for its class modulo `<T>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Every coprime bottom row `(c, d)` with `|c|, |d| <= cutoff`, both signs.
pub fn coset_reps(cutoff: i64) -> Vec<CosetRep> {
    let mut out = vec![CosetRep { a: 1, b: 0, c: 0, d: 1 }, CosetRep { a: -1, b: 0, c: 0, d: -1 }];
    for c in (-cutoff..=cutoff).filter(|c| *c != 0) {
        for d in (-cutoff..=cutoff).filter(|d| gcd(c, *d) == 1) {
            // a d = 1 mod |c|
            let (_, x, _) = ext_gcd(d.rem_euclid(c.abs()), c.abs());
            let a = x.rem_euclid(c.abs());
            let b = (a * d - 1) / c;
            debug_assert_eq!(a * d - b * c, 1);
            out.push(CosetRep { a, b, c, d });
        }
    }
    out
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Truncated Poincare series and its `D = (1/2 pi i) d/dtau` derivatives.
#[derive(Clone, Debug)]
pub struct PoincareSeries {
    k: i64,
    s: f64,
    reps: Vec<CosetRep>,
    order: usize,
    /// `polys[c_index][p]` holds the coefficients of `z^e` in `D^p` of one term, `z = 1/(c tau + d)`.
    polys: Vec<(i64, Vec<Vec<(i32, Complex64)>>)>,
}

impl PoincareSeries {
    /// Weight `k` must be an even integer above 2; `s >= 0`.
    pub fn new(k: i64, s: i64, cutoff: i64, order: usize) -> Result<Self> {
        if k <= 2 || k % 2 != 0 {
            return Err(Error::InvalidArgument(format!("Poincare weight {k} must be even and above 2")));
        }
        if s < 0 {
            return Err(Error::InvalidArgument(format!("s = {s} must be non-negative")));
        }
        let reps = coset_reps(cutoff);
        let mut polys = Vec::new();
        for c in -cutoff..=cutoff {
            let mut levels: Vec<Vec<(i32, Complex64)>> = vec![vec![(k as i32, Complex64::new(1.0, 0.0))]];
            for _ in 0..order {
                let prev = levels.last().unwrap();
                let mut next: std::collections::BTreeMap<i32, Complex64> = Default::default();
                for &(e, alpha) in prev {
                    *next.entry(e + 1).or_default() += alpha * (-(e as f64) * c as f64) / TWO_PI_I;
                    *next.entry(e + 2).or_default() += alpha * s as f64;
                }
                levels.push(next.into_iter().collect());
            }
            polys.push((c, levels));
        }
        Ok(PoincareSeries { k, s: s as f64, reps, order, polys })
    }

    pub fn num_terms(&self) -> usize {
        self.reps.len()
    }

    /// `[P, D P, ..., D^order P]` at `tau`.
    pub fn eval_derivatives(&self, tau: Complex64) -> Vec<Complex64> {
        let cutoff = (self.polys.len() as i64 - 1) / 2;
        let mut acc = vec![Complex64::new(0.0, 0.0); self.order + 1];
        for m in &self.reps {
            let w = tau * m.c as f64 + m.d as f64;
            let z = w.inv();
            let mt = (tau * m.a as f64 + m.b as f64) * z;
            let ex = (TWO_PI_I * self.s * mt).exp();
            let levels = &self.polys[(m.c + cutoff) as usize].1;
            for (p, level) in levels.iter().enumerate() {
                let mut v = Complex64::new(0.0, 0.0);
                for &(e, alpha) in level {
                    v += alpha * z.powi(e);
                }
                acc[p] += v * ex;
            }
        }
        acc.into_iter().map(|v| v * 0.5).collect()
    }

    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in &self.reps {
            let w = tau * m.c as f64 + m.d as f64;
            let mt = (tau * m.a as f64 + m.b as f64) / w;
            acc += w.powi(-self.k as i32) * (TWO_PI_I * self.s * mt).exp();
        }
        acc * 0.5
    }
}

/// `P(tau; k, s)` truncated to bottom rows with `|c|, |d| <= cutoff`.
pub fn poincare_eval(k: i64, s: i64, tau: Complex64, cutoff: i64) -> Result<Complex64> {
    Ok(PoincareSeries::new(k, s, cutoff, 0)?.eval(tau))
}

/// A q-expansion evaluated in `f64`.
#[derive(Clone, Debug)]
pub struct SeriesEval {
    terms: Vec<(f64, Complex64)>,
}

impl SeriesEval {
    pub fn new(series: &FourierSeries) -> Self {
        let terms = series.terms().map(|(n, c)| (series.exponent(n).to_f64(), c.to_c64())).collect();
        SeriesEval { terms }
    }

    /// Rejects a series whose estimated truncation error at `y = sqrt(3)/2`
    /// exceeds `tolerance`, using the crude growth `n^alpha`.
    pub fn checked(series: &FourierSeries, alpha: f64, tolerance: f64) -> Result<Self> {
        let tail = series_tail_at_corner(series, alpha);
        if tail > tolerance {
            return Err(Error::InsufficientPrecision(format!(
                "series tail {tail:e} at y = sqrt(3)/2 exceeds {tolerance:e}; raise the precision"
            )));
        }
        Ok(Self::new(series))
    }

    pub fn eval(&self, tau: Complex64) -> Complex64 {
        self.terms.iter().map(|(e, c)| c * (TWO_PI_I * *e * tau).exp()).sum()
    }

    /// `D^p` at `tau`.
    pub fn eval_derivative(&self, tau: Complex64, p: u32) -> Complex64 {
        self.terms.iter().map(|(e, c)| c * e.powi(p as i32) * (TWO_PI_I * *e * tau).exp()).sum()
    }
}

/// Envelope estimate of `sum_{n > N} |a(n)| e^{-2 pi n y}` at `y = sqrt(3)/2`.
pub fn series_tail_at_corner(series: &FourierSeries, alpha: f64) -> f64 {
    let y = 3f64.sqrt() / 2.0;
    let c = envelope(series, alpha).max(series.terms().map(|(_, c)| c.abs_f64()).fold(0.0, f64::max));
    let mut tail = 0.0;
    let start = series.exponent(series.precision() + 1).to_f64();
    for i in 0..2000 {
        let e = start + i as f64;
        let t = c * e.powf(alpha) * (-2.0 * PI * e * y).exp();
        tail += t;
        if t < 1e-30 * tail.max(1e-300) {
            break;
        }
    }
    tail
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre nodes per panel.
    pub order: usize,
    /// Each base panel is split into `2^refinement` pieces.
    pub refinement: u32,
    pub y_max: f64,
    /// Coset cutoff for Poincare series.
    pub cutoff: i64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { order: 16, refinement: 1, y_max: 10.0, cutoff: 50 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// `|I(refinement) - I(refinement - 1)|`.
    pub error_estimate: f64,
    /// Estimate of the integral above `y_max`.
    pub tail_estimate: f64,
    pub nodes: usize,
}

const Y_BREAKS: [f64; 4] = [1.25, 2.0, 3.5, 6.0];

fn panels(a: f64, b: f64, pieces: usize) -> impl Iterator<Item = (f64, f64)> {
    let h = (b - a) / pieces as f64;
    (0..pieces).map(move |i| (a + i as f64 * h, a + (i + 1) as f64 * h))
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

fn quadrature_nodes(spec: &QuadratureSpec, refinement: u32) -> Vec<(Complex64, f64)> {
    let gl = gauss_legendre(spec.order);
    let pieces = 1usize << refinement;
    let mut out = Vec::new();
    for (xa, xb) in panels(-0.5, 0.5, 2 * pieces) {
        for &(gx, wx) in &gl {
            let x = 0.5 * (xb - xa) * gx + 0.5 * (xa + xb);
            let wx = 0.5 * (xb - xa) * wx;
            let y0 = (1.0 - x * x).sqrt();
            let mut breaks = vec![y0];
            breaks.extend(Y_BREAKS.iter().copied().filter(|b| *b > y0 && *b < spec.y_max));
            breaks.push(spec.y_max);
            for win in breaks.windows(2) {
                for (ya, yb) in panels(win[0], win[1], pieces) {
                    for &(gy, wy) in &gl {
                        let y = 0.5 * (yb - ya) * gy + 0.5 * (ya + yb);
                        out.push((Complex64::new(x, y), wx * 0.5 * (yb - ya) * wy));
                    }
                }
            }
        }
    }
    out
}

/// `int_F f(tau) conj(g(tau)) y^k dx dy / y^2` over the fundamental domain.
///
/// `decay` is the combined leading exponent of `f conj(g)` at the cusp and
/// drives the estimate of the part above `y_max`.
pub fn petersson_integral<F, G>(f: F, g: G, k: f64, decay: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    if decay <= 0.0 {
        return Err(Error::NotCuspidal("integrand does not decay at the cusp".into()));
    }
    if spec.refinement == 0 {
        return Err(Error::InvalidArgument("refinement must be at least 1".into()));
    }
    let run = |refinement: u32| -> (Complex64, usize) {
        let nodes = quadrature_nodes(spec, refinement);
        let vals: Vec<Complex64> = nodes
            .par_iter()
            .map(|(tau, w)| f(*tau) * g(*tau).conj() * tau.im.powf(k - 2.0) * *w)
            .collect();
        (pairwise_sum(&vals), nodes.len())
    };
    let (fine, n_fine) = run(spec.refinement);
    let (coarse, n_coarse) = run(spec.refinement - 1);
    let lambda = 2.0 * PI * decay;
    let growth = (k - 2.0).max(0.0) / spec.y_max;
    let top = Complex64::new(0.0, spec.y_max);
    let sup = (f(top) * g(top).conj()).norm();
    let tail_estimate = if lambda > growth {
        sup * spec.y_max.powf(k - 2.0) / (lambda - growth)
    } else {
        f64::INFINITY
    };
    Ok(QuadResult { value: fine, error_estimate: (fine - coarse).norm(), tail_estimate, nodes: n_fine + n_coarse })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericCheck {
    pub label: String,
    pub closed_form: f64,
    pub numeric: Complex64,
    pub relative_error: f64,
    pub quadrature_error: f64,
    pub tail_estimate: f64,
    pub seconds: f64,
}

impl NumericCheck {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.relative_error <= tolerance
    }
}

fn first_positive_exponent(s: &FourierSeries) -> f64 {
    s.terms().map(|(n, _)| s.exponent(n).to_f64()).find(|e| *e > 0.0).unwrap_or(1.0)
}

/// Compares the closed-form Poincare coefficient with quadrature of `<P(k, s), g>`.
pub fn verify_thm2(k: i64, s: i64, g: &VVForm, spec: &QuadratureSpec) -> Result<NumericCheck> {
    let start = Instant::now();
    if g.dim() != 1 {
        return Err(Error::DimensionMismatch("scalar forms only".into()));
    }
    let exact = poincare_pairing_coeff(g, &Rational::from(k), s, 0)?.value.to_c64().re;
    let gs = SeriesEval::checked(g.component(0), growth_exponent(g.weight(), true), 1e-12)?;
    let p = PoincareSeries::new(k, s, spec.cutoff, 0)?;
    let decay = s as f64 + first_positive_exponent(g.component(0));
    let q = petersson_integral(|t| p.eval(t), |t| gs.eval(t), k as f64, decay, spec)?;
    Ok(NumericCheck {
        label: format!("poincare k={k} s={s}"),
        closed_form: exact,
        numeric: q.value,
        relative_error: (q.value - exact).norm() / exact.abs(),
        quadrature_error: q.error_estimate,
        tail_estimate: q.tail_estimate,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Compares the closed-form bracket pairing with quadrature of `<f, [g, P(k2, s)]_nu>`.
pub fn verify_thm3(f: &VVForm, g: &VVForm, k2: i64, nu: u32, s: i64, spec: &QuadratureSpec) -> Result<NumericCheck> {
    let start = Instant::now();
    if f.dim() != 1 || g.dim() != 1 {
        return Err(Error::DimensionMismatch("scalar forms only".into()));
    }
    let k1 = g.weight().clone();
    let ft = f.clone().with_tensor_factors(g.offsets().to_vec(), vec![Rational::new()])?;
    let params = BracketPairingParams { k1: k1.clone(), k2: Rational::from(k2), nu, s, r: 0, max_n: None };
    let exact = bracket_pairing(&ft, g, &params)?.value.to_c64().re;
    let plan = BracketPlan::new(&k1, &Rational::from(k2), nu)?;
    let weights: Vec<f64> = plan.weights.iter().map(|w| w.to_f64()).collect();
    let fs = SeriesEval::checked(f.component(0), growth_exponent(f.weight(), true), 1e-12)?;
    let gs = SeriesEval::checked(g.component(0), growth_exponent(&k1, g.is_cusp()) + nu as f64, 1e-12)?;
    let p = PoincareSeries::new(k2, s, spec.cutoff, nu as usize)?;
    let bracket = |t: Complex64| -> Complex64 {
        let pd = p.eval_derivatives(t);
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| gs.eval_derivative(t, i as u32) * pd[nu as usize - i] * *w)
            .sum()
    };
    let decay = first_positive_exponent(f.component(0)) + s as f64;
    let total = f.weight().to_f64();
    let q = petersson_integral(|t| fs.eval(t), bracket, total, decay, spec)?;
    Ok(NumericCheck {
        label: format!("bracket k1={k1} k2={k2} nu={nu} s={s}"),
        closed_form: exact,
        numeric: q.value,
        relative_error: (q.value - exact).norm() / exact.abs(),
        quadrature_error: q.error_estimate,
        tail_estimate: q.tail_estimate,
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn coset_reps_are_in_sl2() {
        let reps = coset_reps(7);
        for m in &reps {
            assert_eq!(m.a * m.d - m.b * m.c, 1, "{m:?}");
            assert_eq!(gcd(m.c, m.d), 1);
        }
        // Distinct bottom rows.
        let mut rows: Vec<_> = reps.iter().map(|m| (m.c, m.d)).collect();
        rows.sort();
        rows.dedup();
        assert_eq!(rows.len(), reps.len());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(8);
        let s: f64 = gl.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        let total: f64 = gl.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eisenstein_limit_at_i() {
        let e12 = fixtures::eisenstein(12, 30).unwrap();
        let want = SeriesEval::new(e12.component(0)).eval(Complex64::new(0.0, 1.0));
        let got10 = poincare_eval(12, 0, Complex64::new(0.0, 1.0), 10).unwrap();
        let got50 = poincare_eval(12, 0, Complex64::new(0.0, 1.0), 50).unwrap();
        assert!((got50 - want).norm() < 1e-12 * want.norm());
        assert!((got50 - want).norm() <= (got10 - want).norm() + 1e-15);
    }

    #[test]
    fn real_on_imaginary_axis() {
        let v = poincare_eval(12, 2, Complex64::new(0.0, 1.3), 20).unwrap();
        assert!(v.im.abs() < 1e-12 * v.norm());
    }

    #[test]
    fn large_y_limit() {
        // Terms with c != 0 are O(y^(1-k)).
        for y in [4.0f64, 8.0] {
            let v = poincare_eval(12, 1, Complex64::new(0.0, y), 20).unwrap();
            let lead = (-2.0 * PI * y).exp();
            assert!((v - lead).norm() < y.powi(-10), "y = {y}");
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = PoincareSeries::new(12, 1, 15, 2).unwrap();
        let tau = Complex64::new(0.1, 1.1);
        let d = p.eval_derivatives(tau);
        let h = 1e-5;
        let fd = (p.eval(tau + h) - p.eval(tau - h)) / (2.0 * h) / TWO_PI_I;
        assert!((d[1] - fd).norm() < 1e-7 * d[1].norm().max(1e-12));
        assert!((d[0] - p.eval(tau)).norm() < 1e-14);
    }

    #[test]
    fn insufficient_precision_detected() {
        let d = fixtures::delta(2);
        assert!(matches!(SeriesEval::checked(d.component(0), 6.0, 1e-12), Err(Error::InsufficientPrecision(_))));
    }
}

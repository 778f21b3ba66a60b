#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson quadrature with an absolute error target.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrand of the intelligent dual-hop binary SEP written out directly
/// from the non-central chi-square MGF with `s = -1/sin²η`.
pub fn dh_intelligent_bpsk_integrand(n: f64, snr: f64) -> impl Fn(f64) -> f64 {
    move |eta: f64| {
        let s2 = eta.sin().powi(2);
        if s2 == 0.0 {
            return 0.0;
        }
        let d = 1.0 + n * (16.0 - PI * PI) * snr / (8.0 * s2);
        d.powf(-0.5) * (-(n * n * PI * PI * snr / (16.0 * s2)) / d).exp()
    }
}

/// Generic non-central chi-square MGF integrand `M(-c/sin²η)`.
pub fn ncx_integrand(mean_sq: f64, var_term: f64, snr: f64, c: f64) -> impl Fn(f64) -> f64 {
    move |eta: f64| {
        let s2 = eta.sin().powi(2);
        if s2 == 0.0 {
            return 0.0;
        }
        let s = -c / s2;
        let d = 1.0 - s * var_term * snr;
        d.powf(-0.5) * (s * mean_sq * snr / d).exp()
    }
}

/// Blind-scheme binary BEP in closed form, `½(1 - √(r/(1+r)))`.
pub fn blind_bpsk_closed_form(r: f64) -> f64 {
    0.5 * (1.0 - (r / (1.0 + r)).sqrt())
}

/// Sample mean and its standard error.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

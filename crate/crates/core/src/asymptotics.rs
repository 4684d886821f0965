//! Limiting constants of the expected lifetime sum: the fixed point `t_c`, the thresholds
//! `t_d*`, `c_d*`, the integrand `h_d` and its integral, plus `ζ(3)`, `ζ(4)`.

use serde::Serialize;

use crate::error::{Error, Result};

const GRID: usize = 4096;
const ROOT_TOL: f64 = 1e-14;

/// Bisection on a bracket with `f(lo) < 0 <= f(hi)`, to `ROOT_TOL` absolute or `1e-15` relative.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_TOL.min(1e-15 * hi.max(f64::MIN_POSITIVE)) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest root in `(0, 1]` of `t = exp(-c (1 - t)^d)`.
///
/// Scans a 4096-point grid for the first sign change of `t - exp(-c(1-t)^d)`; when none is
/// found the last cell is refined by factors of four, since roots crowd toward `t = 1`
/// near the threshold. Returns 1 when there is no interior root.
pub fn t_c(c: f64, d: usize) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("t_c needs finite c >= 0, got {c}")));
    }
    if d == 0 {
        return Err(Error::domain("t_c needs d >= 1"));
    }
    // t - exp(-c u^d), u = 1 - t; near t = 1 as -expm1(-c u^d) - u to avoid cancellation
    let g = |t: f64| {
        let u = 1.0 - t;
        let x = -(c * u.powi(d as i32));
        if t < 0.5 {
            t - x.exp()
        } else {
            -x.exp_m1() - u
        }
    };
    let mut prev = 0.0;
    let h = 1.0 / GRID as f64;
    for i in 1..GRID {
        let t = i as f64 * h;
        if g(t) >= 0.0 {
            return Ok(bisect(g, prev, t));
        }
        prev = t;
    }
    // no sign change on the grid: refine the last cell [1 - w, 1)
    let mut left = prev;
    let mut width = 1.0 - left;
    while width > 1e-15 {
        let step = width / 4.0;
        for j in 1..4 {
            let t = left + j as f64 * step;
            if g(t) >= 0.0 {
                return Ok(bisect(g, t - step, t));
            }
        }
        left += 3.0 * step;
        width = 1.0 - left;
    }
    Ok(1.0)
}

/// `ψ_d(t) = -log t / (1 - t)^d` on `(0, 1)`.
pub fn psi(t: f64, d: usize) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::domain(format!("psi needs t in (0, 1), got {t}")));
    }
    Ok(-t.ln() / (1.0 - t).powi(d as i32))
}

/// Root in `(0, 1)` of `(d+1)(1-t) + (1+dt) log t = 0`; 1 by convention for `d = 1`.
pub fn t_star(d: usize) -> Result<f64> {
    match d {
        0 => Err(Error::domain("t_star needs d >= 1")),
        1 => Ok(1.0),
        _ => {
            let df = d as f64;
            let phi = |t: f64| (df + 1.0) * (1.0 - t) + (1.0 + df * t) * t.ln();
            let h = 1.0 / GRID as f64;
            let mut prev = h;
            for i in 2..GRID {
                let t = i as f64 * h;
                if phi(t) >= 0.0 {
                    return Ok(bisect(phi, prev, t));
                }
                prev = t;
            }
            Err(Error::Numerical(format!("no interior root of the threshold equation for d = {d}")))
        }
    }
}

/// `c_d* = ψ_d(t_d*)`; 1 by convention for `d = 1`.
pub fn c_star(d: usize) -> Result<f64> {
    match d {
        0 => Err(Error::domain("c_star needs d >= 1")),
        1 => Ok(1.0),
        _ => psi(t_star(d)?, d),
    }
}

/// `h_d(c)`: `1 - c/(d+1)` up to `c_d*`, and beyond it
/// `c t (1-t)^d + c (1-t)^{d+1}/(d+1) + t - c/(d+1)` at `t = t_c`.
pub fn h(c: f64, d: usize) -> Result<f64> {
    h_with_threshold(c, d, c_star(d)?)
}

fn h_with_threshold(c: f64, d: usize, cs: f64) -> Result<f64> {
    let df = (d + 1) as f64;
    if c <= cs {
        if c < 0.0 {
            return Err(Error::domain(format!("h needs c >= 0, got {c}")));
        }
        return Ok(1.0 - c / df);
    }
    let t = t_c(c, d)?;
    // c(1-t)^{d+1}/(d+1) - c/(d+1) = -(c/(d+1)) (1 - (1-t)^{d+1}), computed without cancellation
    let one_minus_pow = -(df * (-t).ln_1p()).exp_m1();
    Ok(c * t * (1.0 - t).powi(d as i32) + t - c / df * one_minus_pow)
}

/// One accepted quadrature panel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub error: f64,
}

/// Adaptive Simpson quadrature with Richardson-corrected panels.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub panels: Vec<Panel>,
}

const MAX_DEPTH: usize = 48;

pub fn adaptive_simpson(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut out = Quadrature::default();
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
    out: &mut Quadrature,
) -> Result<()> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let err = delta.abs() / 15.0;
    if err <= tol || depth >= MAX_DEPTH {
        if depth >= MAX_DEPTH && err > tol {
            return Err(Error::Numerical(format!(
                "quadrature did not converge on [{a}, {b}] (panel error {err:e}, tolerance {tol:e}, {} panels accepted)",
                out.panels.len()
            )));
        }
        let value = left + right + delta / 15.0;
        out.value += value;
        out.error += err;
        out.panels.push(Panel { a, b, value, error: err });
        return Ok(());
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1, out)?;
    simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1, out)
}

/// Result of [`limit_constant`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitEvaluation {
    pub d: usize,
    pub c_star: f64,
    pub t_star: f64,
    /// `(1/d!) ∫_0^∞ h_d(c) dc`.
    #[serde(rename = "I")]
    pub integral: f64,
    /// Quadrature error estimates plus the analytic tail bound, scaled by `1/d!`.
    pub error: f64,
    pub c_max: f64,
    pub tail_bound: f64,
    /// For `d >= 2` the value is a conjectured limit, not a theorem.
    pub conjectural: bool,
    pub breakpoints: Vec<f64>,
    #[serde(skip)]
    pub panels: Vec<Panel>,
}

fn factorial(d: usize) -> f64 {
    (1..=d).map(|k| k as f64).product()
}

/// Upper bound on `∫_C^∞ |h_d|` valid once `t_c(C) <= 1 - 2^{-1/d}`.
///
/// There `t_c <= e^{-c/2}` and `|h_d(c)| <= t_c (1 + A c)` with
/// `A = 1 + (d (1-t0)^{-d-1} + 1)/(d+1)`, `t0 = t_c(C)`, giving
/// `e^{-C/2} (2 + A (2C + 4))`.
fn tail_bound(c_max: f64, d: usize) -> Result<Option<f64>> {
    let t0 = t_c(c_max, d)?;
    let limit = 1.0 - 0.5f64.powf(1.0 / d as f64);
    if t0 > limit {
        return Ok(None);
    }
    let df = d as f64;
    let a = 1.0 + (df * (1.0 - t0).powf(-df - 1.0) + 1.0) / (df + 1.0);
    Ok(Some((-c_max / 2.0).exp() * (2.0 + a * (2.0 * c_max + 4.0))))
}

/// `I_{d-1} = (1/d!) ∫_0^∞ h_d(c) dc` by adaptive Simpson on `[0, c_d*]` and `[c_d*, C_max]`,
/// with `C_max` chosen so the analytic tail bound is below `tol · 10^{-3}`.
pub fn limit_constant(d: usize, tol: f64) -> Result<LimitEvaluation> {
    limit_constant_with_floor(d, tol, 0.0)
}

/// [`limit_constant`] with the truncation point held at or above `c_max_floor`.
pub fn limit_constant_with_floor(d: usize, tol: f64, c_max_floor: f64) -> Result<LimitEvaluation> {
    if d == 0 || !(tol > 0.0) {
        return Err(Error::domain(format!("limit constant needs d >= 1 and tol > 0, got d = {d}, tol = {tol}")));
    }
    let cs = c_star(d)?;
    let ts = t_star(d)?;
    let scale = factorial(d);
    let mut c_max = (cs * 2.0).max(8.0).max(c_max_floor);
    let tail = loop {
        if let Some(b) = tail_bound(c_max, d)? {
            if b / scale <= tol * 1e-3 {
                break b;
            }
        }
        c_max += 2.0;
        if c_max > 1e4 {
            return Err(Error::Numerical("no truncation point met the tail tolerance".into()));
        }
    };
    let f = |c: f64| h_with_threshold(c, d, cs);
    // panel estimates undershoot on coarse meshes, so the internal budget is well below tol
    let budget = 0.01 * tol * scale;
    let first = adaptive_simpson(&f, 0.0, cs, budget)?;
    let second = adaptive_simpson(&f, cs, c_max, budget)?;
    let integral = (first.value + second.value) / scale;
    let error = (first.error + second.error + tail) / scale;
    if error > tol {
        return Err(Error::Numerical(format!("error estimate {error:e} exceeds tolerance {tol:e}")));
    }
    let mut panels = first.panels;
    panels.extend(second.panels);
    Ok(LimitEvaluation {
        d,
        c_star: cs,
        t_star: ts,
        integral,
        error,
        c_max,
        tail_bound: tail / scale,
        conjectural: d >= 2,
        breakpoints: vec![0.0, cs, c_max],
        panels,
    })
}

/// `1 - t + t log t`, by its series in `u = 1 - t` near `t = 1`.
fn one_minus_t_plus_t_log_t(t: f64) -> f64 {
    let u = 1.0 - t;
    if u < 0.1 {
        let mut acc = 0.0;
        let mut pow = u;
        for k in 2..60 {
            pow *= u;
            acc += pow / (k * (k - 1)) as f64;
        }
        acc
    } else {
        u + t * t.ln()
    }
}

/// `3/4 + ∫_0^1 (2 - 2t + t log t)(1 - t + t log t) / (2 (1-t)^3) dt`, the `d = 1` constant
/// after substituting `c = ψ_1(t)`.
pub fn limit_constant_d1_substituted(tol: f64) -> Result<Quadrature> {
    let f = |t: f64| -> Result<f64> {
        if t <= 0.0 {
            return Ok(1.0);
        }
        if t >= 1.0 {
            return Ok(0.25);
        }
        let u = 1.0 - t;
        let a = one_minus_t_plus_t_log_t(t);
        Ok((u + a) * a / (2.0 * u * u * u))
    };
    let mut q = adaptive_simpson(&f, 0.0, 1.0, 0.5 * tol)?;
    q.value += 0.75;
    Ok(q)
}

/// `ζ(s)` for `s ∈ {3, 4}` by Euler–Maclaurin summation (truncation error below `10^{-15}`).
pub fn zeta(s: u32) -> Result<f64> {
    if s != 3 && s != 4 {
        return Err(Error::domain(format!("zeta is provided for s in {{3, 4}}, got {s}")));
    }
    const N: u32 = 20;
    let sf = f64::from(s);
    let mut sum: f64 = (1..N).rev().map(|k| f64::from(k).powf(-sf)).sum();
    let n = f64::from(N);
    sum += n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    // B_{2j} / (2j)!
    let coeffs = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0];
    let mut rising = sf;
    for (j, b) in coeffs.iter().enumerate() {
        let p = 2 * j as i32 + 1;
        sum += b * rising * n.powf(-sf - p as f64);
        rising *= (sf + p as f64) * (sf + p as f64 + 1.0);
    }
    Ok(sum)
}

/// `6 ζ(4) - 4 ζ(3)`, the limiting variance of `√n (L_0 - ζ(3))`.
pub fn janson_sigma2() -> f64 {
    6.0 * zeta(4).expect("supported") - 4.0 * zeta(3).expect("supported")
}

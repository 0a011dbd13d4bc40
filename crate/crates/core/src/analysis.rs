//! Verification harness for the perturbation and counting results.
//!
//! Writing `A_N(y) = M_N − y·D_N⁻¹` as a perturbation of `M_N` traps each
//! zero of `x ↦ P_N(x, y)`:
//!
//! - Weyl bracket: `α_i(y) − λ_{N,i} ∈ [−y, −y/N]`, and each `α_i` decreases
//!   strictly in `y`.
//! - Interlacing with the lower `(N−m)` principal minor:
//!   `λ_{N−m,k−m} − y/(m+1) ≤ α_k(y) < λ_{N−m,k}` for `k = m+1, …, N−m`.
//! - Counting: `#{k : α_k(Δ²) ≤ (2Γ)²}` counts the couplings `g ≤ Γ` at which
//!   `N − g²` is a Juddian eigenvalue, asymptotically `(4/π)·Γ·√N`.
//!
//! All inequality checks carry a float slack `1e−9·scale`; the statements
//! are exact in real arithmetic, so the slack only absorbs eigensolver
//! rounding.

use rayon::prelude::*;

use crate::laguerre;
use crate::tridiag::{build_a, next_up};
use crate::{Error, Result};

/// Relative slack on inequality checks.
pub const FLOAT_SLACK: f64 = 1e-9;

/// Zeros of `x ↦ P_N(x, y)` with verification flags.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub n: usize,
    pub y: f64,
    pub alphas: Vec<f64>,
    pub weyl_ok: bool,
    pub interlace_ok: bool,
    pub positive_count: usize,
}

/// One row of a density scan at level `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityRecord {
    pub n: usize,
    pub delta: f64,
    pub gamma: f64,
    pub count: usize,
    pub asymptotic: f64,
    pub ratio: f64,
}

/// Outcome of a Weyl-bracket check with per-index margins
/// `(shift + y, −y/N − shift)`; both must be ≥ −slack.
#[derive(Debug, Clone)]
pub struct WeylReport {
    pub ok: bool,
    pub violating_index: Option<usize>,
    pub margins: Vec<(f64, f64)>,
}

/// Outcome of an interlacing check with per-k margins
/// `(α_k − lower bound, upper bound − α_k)`.
#[derive(Debug, Clone)]
pub struct InterlaceReport {
    pub ok: bool,
    pub violating_index: Option<usize>,
    pub margins: Vec<(f64, f64)>,
}

/// The `N` zeros `α_1(y) < … < α_N(y)` of `x ↦ P_N(x, y)`, as eigenvalues of
/// `A_N(y)`.
pub fn alpha_zeros(n: usize, y: f64, tol: f64) -> Result<Vec<f64>> {
    build_a(n, y)?.eigenvalues_all(tol)
}

/// Check `α_i(y) − α_i(0) ∈ [−y, −y/N]` for every index, plus strict decrease
/// when stepping through `y/2`.
pub fn verify_weyl(n: usize, y: f64) -> Result<WeylReport> {
    if !(y > 0.0) {
        return Err(Error::Invalid(format!("verify_weyl requires y > 0, got {y}")));
    }
    let base = alpha_zeros(n, 0.0, 0.0)?;
    let half = alpha_zeros(n, y / 2.0, 0.0)?;
    let full = alpha_zeros(n, y, 0.0)?;
    let eps = FLOAT_SLACK * y.max(1.0);
    let mut ok = true;
    let mut violating_index = None;
    let mut margins = Vec::with_capacity(n);
    for i in 0..n {
        let shift = full[i] - base[i];
        let lo_margin = shift + y;
        let hi_margin = -y / n as f64 - shift;
        let decreasing = full[i] < half[i] && half[i] < base[i];
        margins.push((lo_margin, hi_margin));
        if lo_margin < -eps || hi_margin < -eps || !decreasing {
            ok = false;
            if violating_index.is_none() {
                violating_index = Some(i);
            }
        }
    }
    Ok(WeylReport {
        ok,
        violating_index,
        margins,
    })
}

/// Check `λ_{N−m,k−m} − y/(m+1) ≤ α_k(y) < λ_{N−m,k}` for
/// `k = m+1, …, N−m`, with the Laguerre zeros coming from the independent
/// Newton route. Vacuously true when the index range is empty.
pub fn verify_interlacing(n: usize, m: usize, y: f64) -> Result<InterlaceReport> {
    if m < 1 || 2 * m > n {
        return Err(Error::MinorSize { m, n });
    }
    if !(y > 0.0) {
        return Err(Error::Invalid(format!(
            "verify_interlacing requires y > 0, got {y}"
        )));
    }
    let alphas = alpha_zeros(n, y, 0.0)?;
    let lag = laguerre::zeros_newton(n - m, 1e-12)?.zeros;
    let eps = FLOAT_SLACK * y.max(1.0);
    let mut ok = true;
    let mut violating_index = None;
    let mut margins = Vec::new();
    for k in (m + 1)..=(n - m) {
        let alpha = alphas[k - 1];
        let lower = lag[k - m - 1] - y / (m + 1) as f64;
        let upper = lag[k - 1];
        let lo_margin = alpha - lower;
        let hi_margin = upper - alpha;
        margins.push((lo_margin, hi_margin));
        if lo_margin < -eps || hi_margin <= -eps {
            ok = false;
            if violating_index.is_none() {
                violating_index = Some(k);
            }
        }
    }
    Ok(InterlaceReport {
        ok,
        violating_index,
        margins,
    })
}

/// Number of couplings `g ≤ Γ` for which `N − g²` is Juddian at splitting
/// `Δ`, i.e. `#{k : α_k(Δ²) ≤ (2Γ)²}`, with the asymptotic `(4/π)·Γ·√N` and
/// their ratio. A single Sturm count; O(N).
pub fn juddian_count(n: usize, delta: f64, gamma: f64) -> DensityRecord {
    assert!(n >= 1 && delta > 0.0 && gamma > 0.0);
    let a = build_a(n, delta * delta).expect("delta² >= 0");
    let count = a.sturm_count(next_up((2.0 * gamma) * (2.0 * gamma)));
    let asymptotic = (4.0 / std::f64::consts::PI) * gamma * (n as f64).sqrt();
    DensityRecord {
        n,
        delta,
        gamma,
        count,
        asymptotic,
        ratio: count as f64 / asymptotic,
    }
}

/// `juddian_count` over a grid of levels, in input order.
pub fn density_scan(delta: f64, gamma: f64, ns: &[usize]) -> Vec<DensityRecord> {
    ns.par_iter()
        .map(|&n| juddian_count(n, delta, gamma))
        .collect()
}

/// `#{k : α_k(y) > 0}`, which equals `N − ⌊√y⌋` for `0 ≤ y < N²`.
pub fn positive_zero_count(n: usize, y: f64) -> usize {
    let a = build_a(n, y).expect("y >= 0");
    n - a.sturm_count(next_up(0.0))
}

/// Full spectrum plus verification flags. The interlacing flag uses
/// `m = ⌈N^{1/4}⌉` clamped to the valid range, mirroring the `m = o(√N)`
/// regime in which the bound is sharp.
pub fn spectrum_report(n: usize, y: f64, tol: f64) -> Result<SpectrumReport> {
    let alphas = alpha_zeros(n, y, tol)?;
    let weyl_ok = if y > 0.0 { verify_weyl(n, y)?.ok } else { true };
    let m = ((n as f64).powf(0.25).ceil() as usize).clamp(1, n / 2);
    let interlace_ok = if y > 0.0 && m >= 1 && 2 * m <= n {
        verify_interlacing(n, m, y)?.ok
    } else {
        true
    };
    let positive_count = positive_zero_count(n, y);
    Ok(SpectrumReport {
        n,
        y,
        alphas,
        weyl_ok,
        interlace_ok,
        positive_count,
    })
}

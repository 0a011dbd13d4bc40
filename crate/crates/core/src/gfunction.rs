//! The `K_n` recursion and truncated G-function evaluation.
//!
//! The regular spectrum of the Rabi Hamiltonian sits at the zeros of
//! `G(z) = G_+(z)·G_−(z)` with
//!
//! ```text
//! G_±(z) = Σ_{n≥0} K_n(z; g, Δ)·gⁿ·(1 ∓ Δ/(z−n)),
//! n·K_n  = f_{n−1}(z)·K_{n−1} − K_{n−2},
//! f_m(z) = 2g + (Δ²/(z−m) + m − z)/(2g),
//! K_0 = 1,  K_1 = f_0(z).
//! ```
//!
//! The Juddian condition at level `n` is `K_n(n; g, Δ) = 0`, equivalently
//! `P_n((2g)², Δ²) = (n!)²(2g)ⁿ·K_n(n; g, Δ) = 0`; evaluating `K_n(n)` only
//! needs `f_0 … f_{n−1}`, which are all finite at `z = n`, so the residual
//! requires no pole guard. Everything here is plain f64: the series is
//! plot-grade, and the polynomial bridge quantifies its error.

use crate::{Error, Result};

/// Default exclusion radius around the poles at nonnegative integer `z`.
pub const DEFAULT_POLE_GUARD: f64 = 1e-3;

/// Default truncation cap for the G series.
pub const DEFAULT_N_CAP: usize = 200;

/// Consecutive relatively-negligible terms required before truncating.
const TAIL_WINDOW: usize = 4;

/// The values `K_0 … K_nmax` at a fixed `(z, g, Δ)`.
#[derive(Debug, Clone)]
pub struct KSequence {
    pub z: f64,
    pub g: f64,
    pub delta: f64,
    pub values: Vec<f64>,
}

/// One sample of the pair `(G_+, G_−)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GSample {
    pub z: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub truncation_n: usize,
    pub converged: bool,
}

fn f_coeff(m: usize, z: f64, g: f64, delta: f64) -> f64 {
    let mf = m as f64;
    2.0 * g + (delta * delta / (z - mf) + mf - z) / (2.0 * g)
}

fn nearest_pole(z: f64, n_max: usize) -> Option<i64> {
    let nearest = z.round();
    if nearest >= 0.0 && nearest <= n_max as f64 {
        Some(nearest as i64)
    } else {
        None
    }
}

/// `K_0 … K_nmax`, guarded against evaluation within `DEFAULT_POLE_GUARD` of
/// the poles of `f_m` at integer `z ∈ [0, n_max−1]`.
pub fn k_sequence(z: f64, g: f64, delta: f64, n_max: usize) -> Result<KSequence> {
    if let Some(pole) = nearest_pole(z, n_max.saturating_sub(1)) {
        if (z - pole as f64).abs() < DEFAULT_POLE_GUARD {
            return Err(Error::PoleGuard {
                z,
                pole,
                guard: DEFAULT_POLE_GUARD,
            });
        }
    }
    Ok(k_sequence_unguarded(z, g, delta, n_max))
}

/// Same recursion with the pole guard waived; the caller accepts that values
/// blow up near integer `z`.
pub fn k_sequence_unguarded(z: f64, g: f64, delta: f64, n_max: usize) -> KSequence {
    assert!(g > 0.0 && delta > 0.0);
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    if n_max >= 1 {
        values.push(f_coeff(0, z, g, delta));
    }
    for n in 2..=n_max {
        let k = (f_coeff(n - 1, z, g, delta) * values[n - 1] - values[n - 2]) / n as f64;
        values.push(k);
    }
    KSequence {
        z,
        g,
        delta,
        values,
    }
}

impl KSequence {
    /// Largest relative defect when the stored values are substituted back
    /// into the recursion.
    pub fn resubstitution_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 2..self.values.len() {
            let lhs = n as f64 * self.values[n];
            let rhs = f_coeff(n - 1, self.z, self.g, self.delta) * self.values[n - 1]
                - self.values[n - 2];
            let scale = lhs.abs().max(rhs.abs()).max(1e-300);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
        worst
    }
}

/// The Juddian residual `K_n(n; g, Δ)`; zero exactly when `n − g²` is a
/// doubly degenerate eigenvalue.
///
/// Plain f64: the recursion resolves the residual down to roughly
/// `eps·max_j |K_j|`, which grows like `(2g)⁻ⁿ` for weak coupling. When the
/// certificate needs to see below that floor use
/// [`juddian_residual_precise`].
pub fn juddian_residual(n: usize, g: f64, delta: f64) -> f64 {
    assert!(n >= 1 && g > 0.0 && delta > 0.0);
    // Only f_0 … f_{n−1} enter, all finite at z = n.
    let seq = k_sequence_unguarded(n as f64, g, delta, n);
    seq.values[n]
}

/// `K_n(n; g, Δ)` through the same recursion in double-double arithmetic
/// (~31 significant digits), pushing the noise floor far below any
/// certificate threshold even where the intermediate `K_j` reach 10¹⁴.
pub fn juddian_residual_precise(n: usize, g: f64, delta: f64) -> f64 {
    assert!(n >= 1 && g > 0.0 && delta > 0.0);
    let z = dd::DD::from(n as f64);
    let g2 = dd::DD::from(2.0 * g);
    let d2 = dd::DD::from(delta).sqr();
    let f = |m: usize| {
        let mf = dd::DD::from(m as f64);
        // 2g + (Δ²/(z−m) + m − z)/(2g)
        g2.add(d2.div(z.sub(mf)).add(mf).sub(z).div(g2))
    };
    let mut prev = dd::DD::from(1.0);
    let mut curr = f(0);
    for m in 2..=n {
        let next = f(m - 1).mul(curr).sub(prev).div(dd::DD::from(m as f64));
        prev = curr;
        curr = next;
    }
    curr.to_f64()
}

/// Minimal double-double arithmetic (error-free transforms with FMA).
mod dd {
    #[derive(Debug, Clone, Copy)]
    pub struct DD {
        hi: f64,
        lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl From<f64> for DD {
        fn from(hi: f64) -> Self {
            DD { hi, lo: 0.0 }
        }
    }

    impl DD {
        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn add(self, other: DD) -> DD {
            let (s1, s2) = two_sum(self.hi, other.hi);
            let (t1, t2) = two_sum(self.lo, other.lo);
            let (s1, s2) = quick_two_sum(s1, s2 + t1);
            let (s1, s2) = quick_two_sum(s1, s2 + t2);
            DD { hi: s1, lo: s2 }
        }

        pub fn sub(self, other: DD) -> DD {
            self.add(DD {
                hi: -other.hi,
                lo: -other.lo,
            })
        }

        pub fn mul(self, other: DD) -> DD {
            let (p1, p2) = two_prod(self.hi, other.hi);
            let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
            let (hi, lo) = quick_two_sum(p1, p2);
            DD { hi, lo }
        }

        pub fn sqr(self) -> DD {
            self.mul(self)
        }

        pub fn div(self, other: DD) -> DD {
            let q1 = self.hi / other.hi;
            let r = self.sub(other.mul(DD::from(q1)));
            let q2 = r.hi / other.hi;
            let r = r.sub(other.mul(DD::from(q2)));
            let q3 = r.hi / other.hi;
            DD::from(q1).add(DD::from(q2)).add(DD::from(q3))
        }
    }
}

/// Truncated evaluation of `(G_+(z), G_−(z))`.
///
/// Terms accumulate as `u_n = K_n·gⁿ` through the rescaled recursion
/// `n·u_n = g·f_{n−1}·u_{n−1} − g²·u_{n−2}`, which keeps magnitudes tame for
/// any coupling. Truncation happens once `TAIL_WINDOW` consecutive terms
/// each move both partial sums by less than `rel_tol` relatively, or at
/// `n_cap` with `converged = false`.
pub fn g_pm(z: f64, g: f64, delta: f64, rel_tol: f64, n_cap: usize) -> Result<GSample> {
    g_pm_guarded(z, g, delta, rel_tol, n_cap, DEFAULT_POLE_GUARD, false)
}

/// `g_pm` with explicit pole guard radius and optional Kahan-compensated
/// accumulation.
pub fn g_pm_guarded(
    z: f64,
    g: f64,
    delta: f64,
    rel_tol: f64,
    n_cap: usize,
    pole_guard: f64,
    compensated: bool,
) -> Result<GSample> {
    assert!(g > 0.0 && delta >= 0.0);
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    if let Some(pole) = nearest_pole(z, n_cap) {
        if (z - pole as f64).abs() < pole_guard {
            return Err(Error::PoleGuard {
                z,
                pole,
                guard: pole_guard,
            });
        }
    }
    let mut sum_p = KahanSum::new(compensated);
    let mut sum_m = KahanSum::new(compensated);
    let mut u_prev = 0.0f64;
    let mut u = 1.0f64; // u_0 = K_0·g⁰
    let mut quiet = 0usize;
    let mut truncation_n = n_cap;
    let mut converged = false;
    for n in 0..=n_cap {
        let weight = delta / (z - n as f64);
        let term_p = u * (1.0 - weight);
        let term_m = u * (1.0 + weight);
        sum_p.add(term_p);
        sum_m.add(term_m);
        let small_p = term_p.abs() <= rel_tol * sum_p.value().abs().max(f64::MIN_POSITIVE);
        let small_m = term_m.abs() <= rel_tol * sum_m.value().abs().max(f64::MIN_POSITIVE);
        if small_p && small_m {
            quiet += 1;
            if quiet >= TAIL_WINDOW {
                truncation_n = n;
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        // Advance u_{n+1} = (g·f_n·u_n − g²·u_{n−1})/(n+1).
        let next = (g * f_coeff(n, z, g, delta) * u - g * g * u_prev) / (n + 1) as f64;
        u_prev = u;
        u = next;
    }
    Ok(GSample {
        z,
        g_plus: sum_p.value(),
        g_minus: sum_m.value(),
        truncation_n,
        converged,
    })
}

/// Uniform grid of G samples over `[z_lo, z_hi]`, skipping points inside the
/// pole guard around nonnegative integers. `samples == 1` yields the single
/// midpoint.
pub fn g_scan(z_lo: f64, z_hi: f64, samples: usize, g: f64, delta: f64) -> Vec<GSample> {
    g_scan_guarded(z_lo, z_hi, samples, g, delta, 1e-10, DEFAULT_N_CAP, DEFAULT_POLE_GUARD)
}

/// `g_scan` with explicit truncation and pole-guard settings.
#[allow(clippy::too_many_arguments)]
pub fn g_scan_guarded(
    z_lo: f64,
    z_hi: f64,
    samples: usize,
    g: f64,
    delta: f64,
    rel_tol: f64,
    n_cap: usize,
    pole_guard: f64,
) -> Vec<GSample> {
    assert!(z_lo < z_hi && samples >= 1);
    let points: Vec<f64> = if samples == 1 {
        vec![0.5 * (z_lo + z_hi)]
    } else {
        (0..samples)
            .map(|i| z_lo + (z_hi - z_lo) * i as f64 / (samples - 1) as f64)
            .collect()
    };
    points
        .into_iter()
        .filter_map(|z| g_pm_guarded(z, g, delta, rel_tol, n_cap, pole_guard, false).ok())
        .collect()
}

struct KahanSum {
    sum: f64,
    carry: f64,
    compensated: bool,
}

impl KahanSum {
    fn new(compensated: bool) -> Self {
        KahanSum {
            sum: 0.0,
            carry: 0.0,
            compensated,
        }
    }

    fn add(&mut self, x: f64) {
        if self.compensated {
            let y = x - self.carry;
            let t = self.sum + y;
            self.carry = (t - self.sum) - y;
            self.sum = t;
        } else {
            self.sum += x;
        }
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{factorial, kus_polynomial, rational_to_f64};
    use num_rational::BigRational;

    const FIG_G: f64 = 0.35355339059327373; // 1/√8
    const FIG_DELTA: f64 = 0.7071067811865476; // 1/√2

    #[test]
    fn k_initial_conditions() {
        let seq = k_sequence(0.4, 0.9, 0.3, 6).unwrap();
        assert_eq!(seq.values[0], 1.0);
        assert!((seq.values[1] - f_coeff(0, 0.4, 0.9, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn k1_vanishes_at_the_juddian_parameters() {
        // At g = 1/√8, Δ = 1/√2 the level-1 constraint holds, so
        // K_1(1) = f_0(1) = 2g + (Δ² − 1)/(2g) = 0.
        let seq = k_sequence_unguarded(1.0, FIG_G, FIG_DELTA, 1);
        assert!(seq.values[1].abs() < 1e-14, "{}", seq.values[1]);
    }

    #[test]
    fn resubstitution_residual_is_tiny() {
        let seq = k_sequence(2.3, 0.7, 0.4, 40).unwrap();
        assert!(seq.resubstitution_residual() < 1e-12);
    }

    #[test]
    fn pole_guard_reports_offender() {
        match k_sequence(2.0004, 0.7, 0.4, 10) {
            Err(Error::PoleGuard { pole, .. }) => assert_eq!(pole, 2),
            other => panic!("expected pole guard, got {other:?}"),
        }
    }

    #[test]
    fn juddian_residual_examples() {
        assert!(juddian_residual(1, FIG_G, FIG_DELTA).abs() < 1e-14);

        // K_3(3; 1, 1) = P_3(4, 1) / ((3!)²·2³).
        let k = juddian_residual(3, 1.0, 1.0);
        let p = kus_polynomial(3).eval_exact(
            &BigRational::from_integer(4.into()),
            &BigRational::from_integer(1.into()),
        );
        let expected = rational_to_f64(&p) / (36.0 * 8.0);
        assert!((k - expected).abs() <= 1e-8 * expected.abs().max(1.0));
    }

    #[test]
    fn bridge_to_exact_polynomial() {
        // (n!)²·(2g)ⁿ·K_n(n) against the exact P_n((2g)², Δ²).
        for n in 1..=8usize {
            let (g, delta) = (0.63, 0.41);
            let k = juddian_residual(n, g, delta);
            let fact = rational_to_f64(&BigRational::from(
                factorial(n as u64) * factorial(n as u64),
            ));
            let lhs = fact * (2.0 * g).powi(n as i32) * k;
            let x = BigRational::from_float(2.0 * g).unwrap()
                * BigRational::from_float(2.0 * g).unwrap();
            let y = BigRational::from_float(delta).unwrap()
                * BigRational::from_float(delta).unwrap();
            let rhs = rational_to_f64(&kus_polynomial(n as u32).eval_exact(&x, &y));
            assert!(
                (lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0),
                "n={n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn precise_residual_agrees_where_f64_is_well_conditioned() {
        for n in 1..=10usize {
            for &(g, delta) in &[(0.7f64, 0.4f64), (1.3, 0.9), (0.45, 1.7)] {
                let plain = juddian_residual(n, g, delta);
                let precise = juddian_residual_precise(n, g, delta);
                let seq = k_sequence_unguarded(n as f64, g, delta, n);
                let kmax = seq.values.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
                assert!(
                    (plain - precise).abs() <= 1e-12 * kmax,
                    "n={n} g={g} Δ={delta}: {plain} vs {precise} (Kmax {kmax:.1e})"
                );
            }
        }
    }

    #[test]
    fn residual_noise_floor_scales_with_the_sequence() {
        // Weak coupling drives K_j up like (2g)⁻ʲ; the f64 residual at a true
        // zero then sits at eps-of-Kmax, while the double-double route stays
        // far below certificate thresholds.
        let pts = crate::juddian::find_double_juddian(1, 29, 1e-9).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            let plain = juddian_residual(29, p.g, p.delta).abs();
            let precise = juddian_residual_precise(29, p.g, p.delta).abs();
            let seq = k_sequence_unguarded(29.0, p.g, p.delta, 29);
            let kmax = seq.values.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
            assert!(plain <= 1e-6 * kmax, "f64 route within scale: {plain:.2e}");
            assert!(precise < 1e-6, "double-double route raw: {precise:.2e}");
        }
    }

    #[test]
    fn g_pm_delta_limit() {
        // The ∓Δ/(z−n) factor carries all the asymmetry.
        let a = g_pm_guarded(0.4, 0.8, 1e-12, 1e-10, 150, DEFAULT_POLE_GUARD, false).unwrap();
        assert!((a.g_plus - a.g_minus).abs() < 1e-9);
    }

    #[test]
    fn g_pm_small_coupling_limit() {
        // K_n grows like (2g)⁻ⁿ, so every term K_n·gⁿ has a finite limit as
        // g → 0⁺ and the sums approach it quadratically in g. The n = 0 term
        // alone is 1 ∓ Δ/z.
        let a = g_pm(0.37, 1e-6, 0.5, 1e-12, 150).unwrap();
        let b = g_pm(0.37, 1e-9, 0.5, 1e-12, 150).unwrap();
        assert!((a.g_plus - b.g_plus).abs() < 1e-10);
        assert!((a.g_minus - b.g_minus).abs() < 1e-10);
        // And the limit differs from the bare n = 0 term by the surviving
        // higher-order contributions.
        assert!((b.g_plus - (1.0 - 0.5 / 0.37)).abs() > 0.1);
    }

    #[test]
    fn g_pm_figure_regime_converges() {
        let s = g_pm(0.5, 0.7, 0.4, 1e-10, 200).unwrap();
        assert!(s.converged);
        assert!(s.g_plus.is_finite() && s.g_minus.is_finite());
        assert!(s.truncation_n < 200);
    }

    #[test]
    fn g_scan_skips_pole_neighborhoods() {
        let samples = g_scan(0.1, 3.9, 100, 0.7, 0.4);
        assert!(!samples.is_empty());
        assert!(samples.len() <= 100);
        for s in &samples {
            let nearest = s.z.round();
            if nearest >= 0.0 {
                assert!((s.z - nearest).abs() >= DEFAULT_POLE_GUARD);
            }
            assert!(s.g_plus.is_finite() && s.g_minus.is_finite());
        }

        let single = g_scan(0.1, 0.9, 1, 0.7, 0.4);
        assert_eq!(single.len(), 1);
        assert!((single[0].z - 0.5).abs() < 1e-15);
    }
}

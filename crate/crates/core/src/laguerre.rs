//! Classical Laguerre polynomials `L_N` and their zeros.
//!
//! The zeros `0 < λ_{N,1} < … < λ_{N,N}` anchor the constraint zero locus on
//! the x-axis through `P_N(x, 0) = (−1)ᴺ(N!)²·L_N(x)`. Evaluation uses the
//! stable three-term recurrence
//! `(k+1)·L_{k+1} = (2k+1−x)·L_k − k·L_{k−1}`; zero finding seeds Newton
//! iterations with the eigenvalues of `M_N` and polishes against the
//! recurrence, so agreement between the two routes is a genuine cross-check
//! rather than a restatement.

use crate::tridiag::{build_a, next_up};
use crate::{Error, Result};

/// The zeros of `L_N`, strictly positive and strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreZeros {
    pub n: usize,
    pub zeros: Vec<f64>,
}

/// `L_n(x)` by the three-term recurrence, with block rescaling so the huge
/// intermediate magnitudes at large `n·x` cannot overflow; saturates to
/// `±inf` only when the true value itself exceeds f64 range.
pub fn laguerre_eval(n: usize, x: f64) -> f64 {
    let (_, l, shift) = recurrence_pair(n, x);
    crate::scaled::ScaledF64::with_exp(l, shift).to_f64()
}

/// `(L_{n−1}(x), L_n(x))` rescaled by a common power of two (also returned).
fn recurrence_pair(n: usize, x: f64) -> (f64, f64, i64) {
    if n == 0 {
        return (0.0, 1.0, 0);
    }
    let mut prev = 1.0f64; // L_0
    let mut curr = 1.0 - x; // L_1
    let mut shift = 0i64;
    const BIG: f64 = 1.3407807929942597e154; // 2^512
    const BIG_INV: f64 = 7.458340731200207e-155; // 2^-512
    for k in 1..n {
        let kf = k as f64;
        let next = (((2.0 * kf + 1.0) - x) * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
        let mag = curr.abs().max(prev.abs());
        if mag > BIG {
            curr *= BIG_INV;
            prev *= BIG_INV;
            shift += 512;
        } else if mag != 0.0 && mag < BIG_INV {
            curr *= BIG;
            prev *= BIG;
            shift -= 512;
        }
    }
    (prev, curr, shift)
}

/// All `N` zeros of `L_N`, each polished by Newton iteration from the `M_N`
/// eigenvalue seeds. Convergence is declared when the Newton step drops
/// below `tol·max(1, λ)`; a zero that fails to converge reports its index.
pub fn zeros_newton(n: usize, tol: f64) -> Result<LaguerreZeros> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let seeds = build_a(n, 0.0)?.eigenvalues_all(0.0)?;
    let mut zeros = Vec::with_capacity(n);
    for (index, &seed) in seeds.iter().enumerate() {
        let mut x = seed;
        let mut converged = false;
        for _ in 0..50 {
            let (lm1, l, _) = recurrence_pair(n, x);
            // x·L_n'(x) = n·(L_n(x) − L_{n−1}(x)), so the Newton step is
            // scale-free in the common rescaling of the pair.
            let denom = n as f64 * (l - lm1);
            if denom == 0.0 {
                break;
            }
            let step = x * l / denom;
            x -= step;
            if step.abs() <= tol * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NewtonStall { index });
        }
        zeros.push(x);
    }
    for w in zeros.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Invalid(format!(
                "Laguerre zeros of L_{n} lost strict ordering after polishing"
            )));
        }
    }
    if zeros[0] <= 0.0 {
        return Err(Error::Invalid(format!("nonpositive zero for L_{n}")));
    }
    Ok(LaguerreZeros { n, zeros })
}

/// `#{k : λ_{N,k} ≤ x}` by a Sturm count on `M_N`; the half-ulp upward nudge
/// turns the strict count into the `≤` convention.
pub fn count_below(n: usize, x: f64) -> usize {
    assert!(x > 0.0, "count_below requires x > 0");
    build_a(n, 0.0)
        .expect("n >= 1")
        .sturm_count(next_up(x))
}

/// The limit of `count_below(N, x)/√N` as `N → ∞`.
pub fn gawronski_limit(x: f64) -> f64 {
    (2.0 / std::f64::consts::PI) * x.sqrt()
}

//! Symmetric tridiagonal spectra for the constraint polynomials.
//!
//! For `y ≥ 0` the zeros of `x ↦ P_N(x, y)` are the eigenvalues of
//!
//! ```text
//! A_N(y) = M_N − y·D_N⁻¹,
//! M_N    = tridiag(2(N−i)+1; N−i),   D_N = diag(1, 2, …, N)   (1-based i),
//! ```
//!
//! since `P_N(x, y) = N!·det(xI − A_N(y))`. Eigenvalue counts below a
//! threshold come from the LDLᵀ (Sturm) sign recursion in O(N) per query,
//! and individual eigenvalues from bisection on those counts, so very large
//! orders stay tractable. Two exact determinant recursions over the
//! rationals back the identity itself: the characteristic-polynomial route
//! through `A_N(y)` and the `det(yI + xD_N + S_N)` form, whose off-diagonal
//! entries only ever enter through the products `(N−i)²·i(i+1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::scaled::{factorial_scaled, ScaledF64};
use crate::{Error, Result};

/// Bisection stops once an interval is narrower than
/// `max(tol, REL_FLOOR·max(1, |x|))`; the floor is the f64 resolution limit.
pub const REL_FLOOR: f64 = 1e-13;

/// Iteration budget per eigenvalue. From a Gershgorin bracket this reaches
/// the width floor for every order this crate targets.
pub const MAX_BISECT_ITER: usize = 64;

/// Symmetric tridiagonal matrix as (diagonal, off-diagonal) arrays;
/// `offdiag[i]` couples rows `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

/// Build `A_N(y) = M_N − y·D_N⁻¹`; `build_a(n, 0.0)` is `M_N` itself.
///
/// Rejects negative `y` (the physical regime is `y = Δ² ≥ 0`).
pub fn build_a(n: usize, y: f64) -> Result<SymTridiag> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(y >= 0.0) {
        return Err(Error::NegativeY(y));
    }
    Ok(build_a_unchecked(n, y))
}

/// Same matrix without the sign restriction on `y`. The determinant identity
/// `P_N(x, y) = N!·det(xI − A_N(y))` is a polynomial identity, valid for any
/// real `y`; this form exists for evaluation off the physical regime.
pub(crate) fn build_a_unchecked(n: usize, y: f64) -> SymTridiag {
    let diag = (0..n)
        .map(|i| (2 * (n - i - 1) + 1) as f64 - y / (i + 1) as f64)
        .collect();
    let offdiag = (0..n.saturating_sub(1)).map(|i| (n - i - 1) as f64).collect();
    SymTridiag { diag, offdiag }
}

impl SymTridiag {
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// Smallest pivot magnitude tolerated by the Sturm recursion. Scaled by
    /// the largest squared off-diagonal so the guarded quotient stays finite.
    fn pivmin(&self) -> f64 {
        let emax2 = self.offdiag.iter().fold(1.0f64, |a, &e| a.max(e * e));
        f64::MIN_POSITIVE * emax2
    }

    /// Number of eigenvalues strictly less than `x`, from the sign pattern of
    /// the shifted LDLᵀ pivots. Zero pivots are replaced by `±pivmin`
    /// carrying the sign of the previous pivot. Panics on NaN input.
    pub fn sturm_count(&self, x: f64) -> usize {
        assert!(!x.is_nan(), "sturm_count: NaN threshold rejected");
        let pivmin = self.pivmin();
        let mut count = 0usize;
        let mut prev = 1.0f64;
        for i in 0..self.diag.len() {
            let mut q = self.diag[i] - x;
            if i > 0 {
                let e = self.offdiag[i - 1];
                q -= e * e / prev;
            }
            if q.abs() < pivmin {
                q = if prev >= 0.0 { pivmin } else { -pivmin };
            }
            if q < 0.0 {
                count += 1;
            }
            prev = q;
        }
        count
    }

    /// Interval guaranteed to contain the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo - 1.0, hi + 1.0)
    }

    fn bisect_index(&self, k: usize, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
        for _ in 0..MAX_BISECT_ITER {
            let mid = 0.5 * (a + b);
            let target = tol.max(REL_FLOOR * mid.abs().max(1.0));
            if b - a <= target || mid <= a || mid >= b {
                return Ok(mid);
            }
            if self.sturm_count(mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mid = 0.5 * (a + b);
        if b - a <= tol.max(REL_FLOOR * mid.abs().max(1.0)) {
            Ok(mid)
        } else {
            Err(Error::BisectionBudget {
                index: k,
                width: b - a,
                iters: MAX_BISECT_ITER,
            })
        }
    }

    /// The k-th smallest eigenvalue (0-based), bisected from the Gershgorin
    /// bracket.
    pub fn eigenvalue_by_index(&self, k: usize, tol: f64) -> Result<f64> {
        if k >= self.order() {
            return Err(Error::Invalid(format!(
                "eigenvalue index {k} out of range for order {}",
                self.order()
            )));
        }
        let (lo, hi) = self.gershgorin();
        self.bisect_index(k, lo, hi, tol)
    }

    /// All eigenvalues in `(lo, hi]`, sorted ascending, each bracketed to
    /// width `max(tol, REL_FLOOR·max(1, |x|))`; `tol = 0` defers entirely to
    /// the relative floor. Per-index bisections run in parallel; results are
    /// deterministic regardless of thread count.
    pub fn eigenvalues_in(&self, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>> {
        if !(lo < hi) {
            return Err(Error::InvalidBracket { lo, hi });
        }
        if !(tol >= 0.0) || !tol.is_finite() {
            return Err(Error::InvalidTolerance(tol));
        }
        let n_lo = self.sturm_count(next_up(lo));
        let n_hi = self.sturm_count(next_up(hi));
        (n_lo..n_hi)
            .into_par_iter()
            .map(|k| self.bisect_index(k, lo, hi, tol))
            .collect()
    }

    /// The full spectrum via the Gershgorin bracket.
    pub fn eigenvalues_all(&self, tol: f64) -> Result<Vec<f64>> {
        if self.order() == 1 {
            return Ok(vec![self.diag[0]]);
        }
        let (lo, hi) = self.gershgorin();
        let vals = self.eigenvalues_in(lo, hi, tol)?;
        debug_assert_eq!(vals.len(), self.order());
        Ok(vals)
    }

    /// `det(xI − T)` with block rescaling, as a scaled float.
    pub fn charpoly_scaled(&self, x: f64) -> ScaledF64 {
        let n = self.order();
        let mut prev = 1.0f64;
        let mut curr = x - self.diag[0];
        let mut shift = 0i64;
        const BIG: f64 = 1.3407807929942597e154; // 2^512
        const BIG_INV: f64 = 7.458340731200207e-155; // 2^-512
        for i in 1..n {
            let e = self.offdiag[i - 1];
            let next = (x - self.diag[i]) * curr - e * e * prev;
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
        ScaledF64::with_exp(curr, shift)
    }
}

/// `f64::next_up`, used to turn strict `<` Sturm counts into `≤` counts.
pub fn next_up(x: f64) -> f64 {
    f64::next_up(x)
}

/// Tridiagonal matrix over the rationals for the exact determinant
/// recursions. Off-diagonal entries enter determinants only through the
/// per-position products `b_i·c_i`, so only those are stored; this is what
/// makes the `S_N` matrix (entries with `√(i(i+1))` factors) exactly
/// representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTridiag {
    pub diag: Vec<BigRational>,
    pub offdiag_products: Vec<BigRational>,
}

impl RationalTridiag {
    /// Three-term determinant recursion
    /// `D_k = a_k·D_{k−1} − p_{k−1}·D_{k−2}` over the leading principal
    /// minors.
    pub fn det(&self) -> BigRational {
        let n = self.diag.len();
        assert!(n >= 1, "determinant of an empty matrix");
        assert_eq!(self.offdiag_products.len(), n - 1);
        let mut prev = BigRational::one();
        let mut curr = self.diag[0].clone();
        for i in 1..n {
            let next = &self.diag[i] * &curr - &self.offdiag_products[i - 1] * &prev;
            prev = curr;
            curr = next;
        }
        curr
    }
}

/// `A_N(y)` over the rationals: diagonal `2(N−i)+1 − y/i`, off-diagonal
/// products `(N−i)²` (1-based `i`).
pub fn a_matrix_rational(n: usize, y: &BigRational) -> RationalTridiag {
    let diag = (1..=n)
        .map(|i| {
            BigRational::from(BigInt::from(2 * (n - i) + 1)) - y / BigRational::from(BigInt::from(i))
        })
        .collect();
    let offdiag_products = (1..n)
        .map(|i| BigRational::from(BigInt::from((n - i) * (n - i))))
        .collect();
    RationalTridiag {
        diag,
        offdiag_products,
    }
}

/// Exact `det(xI − T)`, using that the sign flips on both off-diagonals
/// cancel inside the products.
pub fn charpoly_eval(t: &RationalTridiag, x: &BigRational) -> BigRational {
    let shifted = RationalTridiag {
        diag: t.diag.iter().map(|a| x - a).collect(),
        offdiag_products: t.offdiag_products.clone(),
    };
    shifted.det()
}

/// Exact `det(yI + xD_N + S_N)`, which equals `P_N(x, y)`.
///
/// `S_N` has diagonal `−i(2(N−i)+1)` and off-diagonal `(N−i)√(i(i+1))`
/// (1-based `i`); only the squared off-diagonals `(N−i)²·i(i+1)` appear in
/// the recursion, so everything stays rational.
pub fn det_oracle_s(n: usize, x: &BigRational, y: &BigRational) -> BigRational {
    assert!(n >= 1, "det_oracle_s requires n >= 1");
    let diag = (1..=n)
        .map(|i| {
            y + x * BigRational::from(BigInt::from(i))
                - BigRational::from(BigInt::from(i * (2 * (n - i) + 1)))
        })
        .collect();
    let offdiag_products = (1..n)
        .map(|i| BigRational::from(BigInt::from((n - i) * (n - i) * i * (i + 1))))
        .collect();
    RationalTridiag {
        diag,
        offdiag_products,
    }
    .det()
}

/// Float evaluation of `P_n(x, y) = n!·det(xI − A_n(y))`, in scaled form so
/// the factorial prefactor cannot overflow. Valid for any real `y`.
pub fn constraint_eval_f64(n: usize, x: f64, y: f64) -> ScaledF64 {
    let a = build_a_unchecked(n, y);
    factorial_scaled(n).mul(&a.charpoly_scaled(x))
}

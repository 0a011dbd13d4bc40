//! Constraint polynomials and Juddian degeneracies of the quantum Rabi model.
//!
//! The crate is organized around three routes to the same family of objects:
//!
//! - [`poly`] builds the constraint polynomials `P_n(X, Y)` exactly over the
//!   integers via the Kuś recursion, where `X = (2g)²` and `Y = Δ²` are the
//!   squared coupling and level-splitting parameters.
//! - [`tridiag`] realizes `P_N(x, y)/N!` as the characteristic polynomial of a
//!   symmetric tridiagonal matrix `A_N(y)` and extracts its zeros by Sturm
//!   bisection, which scales to `N = 10⁶`. Two exact determinant oracles
//!   cross-check the polynomial route.
//! - [`gfunction`] evaluates the same constraint through the `K_n` recursion
//!   underlying the spectral G-functions, giving an independent physics-side
//!   residual.
//!
//! On top of those, [`laguerre`] provides the classical Laguerre zeros that
//! anchor the zero locus on the x-axis, [`analysis`] verifies the Weyl and
//! interlacing bounds and the Juddian counting asymptotics, and [`juddian`]
//! traces zero-locus branches and locates parameter pairs carrying two
//! Juddian eigenvalues at once.

pub mod analysis;
pub mod gfunction;
pub mod juddian;
pub mod laguerre;
pub mod poly;
pub mod scaled;
pub mod tridiag;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix order must be at least 1")]
    EmptyMatrix,
    #[error("negative y = {0} lies outside the y = Δ² ≥ 0 regime")]
    NegativeY(f64),
    #[error("invalid bracket: lo = {lo}, hi = {hi}")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("bisection for eigenvalue {index} stalled at width {width:e} after {iters} iterations")]
    BisectionBudget {
        index: usize,
        width: f64,
        iters: usize,
    },
    #[error("Newton iteration for zero {index} did not converge")]
    NewtonStall { index: usize },
    #[error("branch index m = {m} out of range for n = {n}")]
    BranchIndex { m: usize, n: usize },
    #[error("minor size m = {m} must satisfy 1 <= m <= n/2 for n = {n}")]
    MinorSize { m: usize, n: usize },
    #[error("z = {z} is within {guard} of the pole at z = {pole}")]
    PoleGuard { z: f64, pole: i64, guard: f64 },
    #[error("no sign change brackets the crossing of branch {branch} of the order-{n} locus")]
    CrossingNotBracketed { n: usize, branch: usize },
    #[error("point ({0}, {1}) has no physical (g, Δ) preimage")]
    NegativeCoordinate(f64, f64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact constraint polynomials via the Kuś recursion.
//!
//! `P_n(X, Y)` is the degree-n integer polynomial in `X = (2g)²`, `Y = Δ²`
//! whose vanishing marks a Juddian (doubly degenerate) eigenvalue `n - g²`.
//! The family is generated by
//!
//! ```text
//! P⁽ⁿ⁾_k = (kX + Y - k²)·P⁽ⁿ⁾_{k-1} - k(k-1)(n-k+1)·X·P⁽ⁿ⁾_{k-2},
//! P⁽ⁿ⁾_0 = 1,  P⁽ⁿ⁾_1 = X + Y - 1,  P_n = P⁽ⁿ⁾_n.
//! ```
//!
//! Everything here is exact: coefficients are arbitrary-precision integers,
//! evaluation and restriction work over the rationals. Coefficients reach
//! magnitude (n!)², so memory grows quadratic-exponentially in n; n up to a
//! few hundred is practical, and callers that need larger orders should use
//! the spectral route in [`crate::tridiag`] instead.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Default ceiling for exact polynomial construction; coefficients scale
/// like (n!)², so memory dominates beyond this. The spectral route has no
/// such cap.
pub const DEFAULT_EXACT_CAP: u32 = 64;

/// Sparse bivariate polynomial with exact integer coefficients, keyed by
/// `(x_degree, y_degree)`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::default();
        p.add_term(0, 0, BigInt::one());
        p
    }

    /// Add `c·X^dx·Y^dy`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, dx: u32, dy: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((dx, dy)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(dx, dy));
        }
    }

    /// Coefficient of `X^dx·Y^dy` (zero if absent).
    pub fn coeff(&self, dx: u32, dy: u32) -> BigInt {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max of `dx + dy` over stored terms.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    /// Exact value at `(x, y)`: Horner in X outside, Horner in Y inside.
    /// The outer loop walks x-degrees downward so each big-rational
    /// multiplication by `x` happens once per x-degree.
    pub fn eval_exact(&self, x: &BigRational, y: &BigRational) -> BigRational {
        if self.terms.is_empty() {
            return BigRational::zero();
        }
        let max_dx = self.terms.keys().map(|&(i, _)| i).max().unwrap() as usize;
        let max_dy = self.terms.keys().map(|&(_, j)| j).max().unwrap() as usize;
        // Dense rows per x-degree; orders stay small enough that this wins
        // over repeated sparse lookups.
        let mut rows = vec![vec![BigRational::zero(); max_dy + 1]; max_dx + 1];
        for (&(i, j), c) in &self.terms {
            rows[i as usize][j as usize] = BigRational::from(c.clone());
        }
        let mut acc = BigRational::zero();
        for row in rows.iter().rev() {
            let mut row_val = BigRational::zero();
            for c in row.iter().rev() {
                row_val = row_val * y + c;
            }
            acc = acc * x + row_val;
        }
        acc
    }

    /// Exact partial derivative in X.
    pub fn derivative_x(&self) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c * BigInt::from(i));
            }
        }
        out
    }

    /// Exact partial derivative in Y.
    pub fn derivative_y(&self) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c * BigInt::from(j));
            }
        }
        out
    }

    /// Restriction to the y-axis, `Y ↦ P(0, Y)`.
    pub fn restrict_y_axis(&self) -> UnivariatePoly {
        let mut coeffs = vec![BigRational::zero(); self.total_degree() as usize + 1];
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                coeffs[j as usize] = BigRational::from(c.clone());
            }
        }
        UnivariatePoly::from_coeffs(coeffs)
    }

    /// Restriction to the x-axis, `x ↦ P(x, 0)`.
    pub fn restrict_x_axis(&self) -> UnivariatePoly {
        let mut coeffs = vec![BigRational::zero(); self.total_degree() as usize + 1];
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                coeffs[i as usize] = BigRational::from(c.clone());
            }
        }
        UnivariatePoly::from_coeffs(coeffs)
    }

    /// Restriction to the line `Y = intercept + slope·X`, as an exact
    /// univariate polynomial in X.
    pub fn restrict_to_line(&self, intercept: &BigRational, slope: &BigRational) -> UnivariatePoly {
        let deg = self.total_degree() as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (&(i, j), c) in &self.terms {
            // c·X^i·(a + b·X)^j expanded by the binomial theorem.
            let c = BigRational::from(c.clone());
            let j = j as usize;
            let mut binom = BigInt::one();
            for t in 0..=j {
                let factor = pow_rational(intercept, j - t) * pow_rational(slope, t);
                coeffs[i as usize + t] += &c * BigRational::from(binom.clone()) * factor;
                if t < j {
                    binom = binom * BigInt::from(j - t) / BigInt::from(t + 1);
                }
            }
        }
        UnivariatePoly::from_coeffs(coeffs)
    }

    /// JSON form `{"n": .., "terms": [{"dx", "dy", "c"}, ..]}` with
    /// coefficients as decimal strings; term order is (dx, dy) ascending.
    /// Built by hand so the byte output is stable.
    pub fn to_json(&self, n: u32) -> String {
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|(&(dx, dy), c)| format!("{{\"dx\":{dx},\"dy\":{dy},\"c\":\"{c}\"}}"))
            .collect();
        format!("{{\"n\":{n},\"terms\":[{}]}}", terms.join(","))
    }
}

fn pow_rational(base: &BigRational, exp: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// The constraint polynomial `P_n(X, Y)` by the Kuś recursion.
///
/// Exact for any `n ≥ 1`; coefficients reach (n!)² so both memory and time
/// grow roughly like n²·n·log(n!) bits. Around n ≈ 500 the polynomial holds
/// on the order of 10⁵ multi-kilobit integers; beyond that prefer the
/// spectral representation.
pub fn kus_polynomial(n: u32) -> BivariatePoly {
    assert!(n >= 1, "kus_polynomial requires n >= 1");
    let mut prev = BivariatePoly::one();
    let mut curr = BivariatePoly::zero();
    curr.add_term(1, 0, BigInt::one());
    curr.add_term(0, 1, BigInt::one());
    curr.add_term(0, 0, -BigInt::one());
    if n == 1 {
        return curr;
    }
    for k in 2..=u64::from(n) {
        let mut next = BivariatePoly::zero();
        // (kX + Y - k²)·curr
        for (&(i, j), c) in curr.terms() {
            next.add_term(i + 1, j, c * BigInt::from(k));
            next.add_term(i, j + 1, c.clone());
            next.add_term(i, j, c * -BigInt::from(k * k));
        }
        // -k(k-1)(n-k+1)·X·prev
        let drop = BigInt::from(k * (k - 1) * (u64::from(n) - k + 1));
        for (&(i, j), c) in prev.terms() {
            next.add_term(i + 1, j, c * -&drop);
        }
        prev = curr;
        curr = next;
    }
    curr
}

/// `P_n(0, Y)` computed through the full bivariate construction (so that the
/// product formula `∏ (Y - m²)` remains an independent check).
pub fn restrict_to_y_axis(n: u32) -> UnivariatePoly {
    kus_polynomial(n).restrict_y_axis()
}

/// `P_n(x, 0)`, a multiple of the Laguerre polynomial: `(-1)ⁿ(n!)²·L_n(x)`.
pub fn restrict_to_x_axis(n: u32) -> UnivariatePoly {
    kus_polynomial(n).restrict_x_axis()
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Dense univariate polynomial over the rationals, index = degree.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<BigRational>,
}

impl UnivariatePoly {
    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from(BigInt::from(k)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Multiply every coefficient by a rational constant.
    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let chain = SturmChain::new(self);
        chain.variations(lo) - chain.variations(hi)
    }

    /// Isolate and refine every real root in the open interval `(lo, hi)`.
    ///
    /// Requires nonzero values at both endpoints. Each root is bisected with
    /// Sturm counts down to an interval of width at most `width`; returned
    /// values are the interval midpoints, ascending.
    pub fn isolate_roots(
        &self,
        lo: &BigRational,
        hi: &BigRational,
        width: &BigRational,
    ) -> Result<Vec<BigRational>> {
        if self.is_zero() {
            return Err(Error::Invalid("cannot isolate roots of the zero polynomial".into()));
        }
        if self.eval(lo).is_zero() || self.eval(hi).is_zero() {
            return Err(Error::Invalid(
                "root isolation requires nonzero values at the interval endpoints".into(),
            ));
        }
        let chain = SturmChain::new(self);
        let v = |x: &BigRational| chain.variations(x);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut out = Vec::new();
        // Work stack of (a, b, roots in (a, b]).
        let mut stack = vec![(lo.clone(), hi.clone(), v(lo) - v(hi))];
        while let Some((a, b, count)) = stack.pop() {
            if count == 0 {
                continue;
            }
            let w = &b - &a;
            if count == 1 && w <= *width {
                out.push((&a + &b) * &half);
                continue;
            }
            let mid = (&a + &b) * &half;
            let va = v(&a);
            let vm = v(&mid);
            let vb = v(&b);
            stack.push((a, mid.clone(), va - vm));
            stack.push((mid, b, vm - vb));
        }
        out.sort();
        Ok(out)
    }
}

/// Sturm chain over content-stripped integer polynomials.
///
/// Each member is a positive rational multiple of the classical chain
/// member `s_{k+1} = −rem(s_{k−1}, s_k)`, which leaves every sign pattern
/// intact while keeping the arithmetic in (much faster) integers.
struct SturmChain {
    polys: Vec<Vec<BigInt>>,
}

impl SturmChain {
    fn new(p: &UnivariatePoly) -> Self {
        let first = primitive_int(&p.coeffs);
        let deriv: Vec<BigInt> = first
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        let mut polys = vec![first, strip_content(deriv)];
        loop {
            let len = polys.len();
            if polys[len - 1].is_empty() {
                polys.pop();
                break;
            }
            if polys[len - 1].len() == 1 {
                break;
            }
            let mut r = pseudo_rem_positive(&polys[len - 2], &polys[len - 1]);
            for c in &mut r {
                *c = -c.clone();
            }
            polys.push(strip_content(r));
        }
        SturmChain { polys }
    }

    /// Sign variations of the chain at `x`, evaluated as
    /// `sign(q^deg · p(x))` in pure integer Horner form.
    fn variations(&self, x: &BigRational) -> usize {
        let p = x.numer();
        let q = x.denom();
        let mut count = 0usize;
        let mut last: Option<bool> = None;
        for coeffs in &self.polys {
            let d = coeffs.len() - 1;
            let mut acc = coeffs[d].clone();
            let mut qpow = BigInt::one();
            for i in (0..d).rev() {
                qpow *= q;
                acc = acc * p + &coeffs[i] * &qpow;
            }
            if acc.is_zero() {
                continue;
            }
            let pos = acc.is_positive();
            if let Some(prev) = last {
                if prev != pos {
                    count += 1;
                }
            }
            last = Some(pos);
        }
        count
    }
}

/// Clear denominators and strip content; the result is a positive rational
/// multiple of the input with the same sign everywhere.
fn primitive_int(coeffs: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for c in coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    strip_content(ints)
}

fn strip_content(mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    use num_integer::Integer;
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    let mut content = BigInt::zero();
    for c in &coeffs {
        content = content.gcd(c);
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut coeffs {
            *c /= &content;
        }
    }
    coeffs
}

/// A positive integer multiple of `rem(a, b)` over the integers: repeated
/// elimination scales by the leading coefficient of `b`, and a final sign
/// fix keeps the multiple positive.
fn pseudo_rem_positive(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut r = a.to_vec();
    let mut scalings = 0usize;
    while r.len() > db {
        let dr = r.len() - 1;
        let top = r.last().unwrap().clone();
        for c in &mut r {
            *c *= lead;
        }
        for i in 0..=db {
            let delta = &top * &b[i];
            r[dr - db + i] -= delta;
        }
        scalings += 1;
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    if lead.is_negative() && scalings % 2 == 1 {
        for c in &mut r {
            *c = -c.clone();
        }
    }
    r
}

/// Exact-to-float conversion good to an ulp for the magnitudes used here.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    // Scale the numerator so the integer division keeps ~63 bits of quotient,
    // then undo the scaling through the two-factor exponent compose so
    // subnormal results survive.
    use num_traits::ToPrimitive;
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer();
    let den = r.denom();
    let shift = (den.bits() as i64 - num.bits() as i64 + 63).max(0);
    let q = (num << shift) / den;
    let qf = q.to_f64().unwrap_or(f64::NAN);
    if !qf.is_finite() {
        return qf;
    }
    crate::scaled::ScaledF64::with_exp(qf, -shift).to_f64()
}

//! A float with an explicit power-of-two exponent.
//!
//! Determinants of order-N tridiagonal matrices and the factorial prefactors
//! of the constraint polynomials overflow `f64` long before the quantities of
//! interest (ratios, residuals, sign patterns) become ill-defined. `ScaledF64`
//! carries the value as `mant * 2^exp2` with `|mant|` in `[0.5, 1)`.

/// `mant * 2^exp2`, with `|mant| ∈ [0.5, 1)` or `mant == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledF64 {
    mant: f64,
    exp2: i64,
}

/// Split a finite nonzero `f64` into mantissa in `[0.5, 1)` and exponent.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // Subnormal: renormalize by scaling up first.
        let (m, e) = frexp(x * f64::powi(2.0, 64));
        (m, e - 64)
    } else {
        let mant = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
        (mant, raw_exp - 1022)
    }
}

impl ScaledF64 {
    pub const ZERO: ScaledF64 = ScaledF64 { mant: 0.0, exp2: 0 };
    pub const ONE: ScaledF64 = ScaledF64 { mant: 0.5, exp2: 1 };

    pub fn new(value: f64) -> Self {
        assert!(value.is_finite(), "ScaledF64 requires a finite value");
        let (mant, exp2) = frexp(value);
        ScaledF64 { mant, exp2 }
    }

    /// `value * 2^shift` without materializing the product.
    pub fn with_exp(value: f64, shift: i64) -> Self {
        let mut s = Self::new(value);
        if s.mant != 0.0 {
            s.exp2 += shift;
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    pub fn mantissa(&self) -> f64 {
        self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp2
    }

    pub fn signum(&self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    pub fn abs(&self) -> Self {
        ScaledF64 {
            mant: self.mant.abs(),
            exp2: self.exp2,
        }
    }

    pub fn neg(&self) -> Self {
        ScaledF64 {
            mant: -self.mant,
            exp2: self.exp2,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let (m, e) = frexp(self.mant * other.mant);
        ScaledF64 {
            mant: m,
            exp2: e + self.exp2 + other.exp2,
        }
    }

    pub fn mul_f64(&self, factor: f64) -> Self {
        self.mul(&Self::new(factor))
    }

    pub fn sub(&self, other: &Self) -> Self {
        if other.is_zero() {
            return *self;
        }
        if self.is_zero() {
            return other.neg();
        }
        // Align to the larger exponent; a gap beyond f64 resolution means the
        // smaller operand is invisible.
        let (hi, lo, sign) = if self.exp2 >= other.exp2 {
            (self, other, 1.0)
        } else {
            (other, self, -1.0)
        };
        let gap = hi.exp2 - lo.exp2;
        if gap > 100 {
            return ScaledF64 {
                mant: sign * hi.mant,
                exp2: hi.exp2,
            };
        }
        let diff = hi.mant - lo.mant * f64::powi(2.0, -(gap as i32));
        if diff == 0.0 {
            return Self::ZERO;
        }
        let (m, e) = frexp(diff);
        ScaledF64 {
            mant: sign * m,
            exp2: e + hi.exp2,
        }
    }

    /// Euclidean norm of a pair, kept in scaled form.
    pub fn hypot(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.abs();
        }
        if other.is_zero() {
            return self.abs();
        }
        let (hi, lo) = if self.exp2 >= other.exp2 {
            (self, other)
        } else {
            (other, self)
        };
        let gap = hi.exp2 - lo.exp2;
        if gap > 100 {
            return hi.abs();
        }
        let h = hi.mant.hypot(lo.mant * f64::powi(2.0, -(gap as i32)));
        let (m, e) = frexp(h);
        ScaledF64 {
            mant: m,
            exp2: e + hi.exp2,
        }
    }

    /// `self / other` as a plain `f64`, saturating on exponent overflow.
    pub fn ratio(&self, other: &Self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        if other.is_zero() {
            return f64::INFINITY * self.signum();
        }
        let m = self.mant / other.mant;
        let e = self.exp2 - other.exp2;
        compose(m, e)
    }

    /// Collapse to `f64`, saturating to `±inf` (or 0) when out of range.
    pub fn to_f64(&self) -> f64 {
        compose(self.mant, self.exp2)
    }
}

fn compose(mant: f64, exp2: i64) -> f64 {
    if mant == 0.0 {
        return 0.0;
    }
    if exp2 > 1100 {
        return f64::INFINITY * mant.signum();
    }
    if exp2 < -1150 {
        return 0.0;
    }
    // Split the shift so each factor stays representable.
    let half = (exp2 / 2) as i32;
    let rest = (exp2 - half as i64) as i32;
    mant * f64::powi(2.0, half) * f64::powi(2.0, rest)
}

/// Bring a slice of scaled values to a common exponent and return the plain
/// mantissas together with that exponent. Values more than ~100 binary orders
/// below the largest collapse to zero, which is exactly the f64 behaviour.
pub fn to_common_exponent(values: &[ScaledF64]) -> (Vec<f64>, i64) {
    let e = values
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.exp2)
        .max()
        .unwrap_or(0);
    let out = values
        .iter()
        .map(|v| {
            if v.is_zero() {
                0.0
            } else {
                compose(v.mant, v.exp2 - e)
            }
        })
        .collect();
    (out, e)
}

/// `n!` in scaled form.
pub fn factorial_scaled(n: usize) -> ScaledF64 {
    let mut acc = ScaledF64::ONE;
    for k in 2..=n {
        acc = acc.mul_f64(k as f64);
    }
    acc
}

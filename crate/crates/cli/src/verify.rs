//! Verification suites behind `rabi verify`: each prints one line per check
//! and contributes a bit to the exit code when it fails.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rabi_core::analysis;
use rabi_core::poly::{factorial, kus_polynomial};
use rabi_core::tridiag::{a_matrix_rational, charpoly_eval, det_oracle_s};

pub const ORACLE_FAIL: i32 = 1;
pub const WEYL_FAIL: i32 = 2;
pub const INTERLACE_FAIL: i32 = 4;

fn line(name: &str, ok: bool) {
    println!("verify {name}: {}", if ok { "PASS" } else { "FAIL" });
}

/// Exact three-route equality at seeded random rational points, n = 1..cap.
pub fn oracle(cap: u32) -> i32 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acce55);
    let mut code = 0;
    for n in 1..=cap {
        let p = kus_polynomial(n);
        let n_fact = BigRational::from(factorial(u64::from(n)));
        let mut ok = true;
        for _ in 0..20 {
            let x = BigRational::new(
                BigInt::from(rng.random_range(-20i64..=20)),
                BigInt::from(rng.random_range(1i64..=10)),
            );
            let y = BigRational::new(
                BigInt::from(rng.random_range(-20i64..=20)),
                BigInt::from(rng.random_range(1i64..=10)),
            );
            let exact = p.eval_exact(&x, &y);
            ok &= exact == &n_fact * charpoly_eval(&a_matrix_rational(n as usize, &y), &x);
            ok &= exact == det_oracle_s(n as usize, &x, &y);
        }
        line(&format!("oracle n={n}"), ok);
        if !ok {
            code |= ORACLE_FAIL;
        }
    }
    code
}

pub fn weyl(n: usize, y: f64) -> i32 {
    let ok = match analysis::verify_weyl(n, y) {
        Ok(report) => report.ok,
        Err(err) => {
            eprintln!("verify weyl: {err}");
            false
        }
    };
    line(&format!("weyl N={n} y={y}"), ok);
    if ok {
        0
    } else {
        WEYL_FAIL
    }
}

pub fn interlace(n: usize, m: usize, y: f64) -> i32 {
    let ok = match analysis::verify_interlacing(n, m, y) {
        Ok(report) => report.ok,
        Err(err) => {
            eprintln!("verify interlace: {err}");
            false
        }
    };
    line(&format!("interlace N={n} m={m} y={y}"), ok);
    if ok {
        0
    } else {
        INTERLACE_FAIL
    }
}

/// Default battery: the oracle triangle plus Weyl and interlacing spot
/// checks at a few orders.
pub fn all() -> i32 {
    let mut code = oracle(12);
    for &(n, y) in &[(50usize, 0.5f64), (200, 2.0)] {
        code |= weyl(n, y);
    }
    for &(n, m, y) in &[(50usize, 2usize, 0.5f64), (200, 10, 0.5), (200, 6, 2.0)] {
        code |= interlace(n, m, y);
    }
    code
}

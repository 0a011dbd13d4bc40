//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the observed numbers (visible under `--nocapture`).
//!
//! The expected values come from independent routes computed here in test
//! code: the expanded product `∏(Y − m²)`, the series coefficients of the
//! Laguerre polynomials, exact rational determinant recursions, and exact
//! Sturm-sequence root isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rabi_core::analysis;
use rabi_core::gfunction;
use rabi_core::juddian;
use rabi_core::laguerre;
use rabi_core::poly::{factorial, kus_polynomial, rational_to_f64, UnivariatePoly};
use rabi_core::tridiag::{a_matrix_rational, charpoly_eval, det_oracle_s};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:02} [{verdict}] {name}: {detail}");
    assert!(pass, "criterion {id:02} failed: {name} ({detail})");
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Independent oracle: the expanded product `∏_{m=1..n} (Y − m²)`.
fn product_of_roots(n: u64) -> Vec<BigRational> {
    let mut coeffs = vec![BigRational::one()];
    for m in 1..=n {
        let root = BigRational::from(BigInt::from(m * m));
        let mut next = vec![BigRational::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &root;
        }
        coeffs = next;
    }
    coeffs
}

/// Independent oracle: the series coefficients `(−1)^m C(n,m)/m!` of `L_n`.
fn laguerre_series_coeffs(n: u64) -> Vec<BigRational> {
    (0..=n)
        .map(|m| {
            let mut binom = BigInt::one();
            for t in 0..m {
                binom = binom * BigInt::from(n - t) / BigInt::from(t + 1);
            }
            let sign = if m % 2 == 0 { 1 } else { -1 };
            BigRational::new(binom * BigInt::from(sign), factorial(m))
        })
        .collect()
}

#[test]
fn criterion_01_exact_specializations() {
    let mut worst = String::new();
    let mut pass = true;
    for n in 1..=25u64 {
        let p = kus_polynomial(n as u32);

        let on_y = p.restrict_y_axis();
        let expected_y = UnivariatePoly::from_coeffs(product_of_roots(n));
        if on_y != expected_y {
            pass = false;
            worst = format!("P_{n}(0,Y) != product form");
            break;
        }

        let on_x = p.restrict_x_axis();
        let f = factorial(n);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let scale = BigRational::new(BigInt::from(sign), &f * &f);
        let expected_x = UnivariatePoly::from_coeffs(laguerre_series_coeffs(n));
        if on_x.scaled(&scale) != expected_x {
            pass = false;
            worst = format!("P_{n}(x,0) != (-1)^n (n!)^2 L_n");
            break;
        }
    }
    if pass {
        worst = "coefficient-exact for n = 1..25".into();
    }
    report(1, "exact specialization suite", pass, &worst);
}

#[test]
fn criterion_02_oracle_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acce55);
    let mut pass = true;
    let mut detail = String::new();
    'outer: for n in 1..=12usize {
        let p = kus_polynomial(n as u32);
        let n_fact = BigRational::from(factorial(n as u64));
        for _ in 0..20 {
            let x = rat(rng.random_range(-20..=20), rng.random_range(1..=10));
            let y = rat(rng.random_range(-20..=20), rng.random_range(1..=10));
            let exact = p.eval_exact(&x, &y);
            let via_charpoly = &n_fact * charpoly_eval(&a_matrix_rational(n, &y), &x);
            let via_s = det_oracle_s(n, &x, &y);
            if exact != via_charpoly || exact != via_s {
                pass = false;
                detail = format!("mismatch at n = {n}, x = {x}, y = {y}");
                break 'outer;
            }
        }
    }
    if pass {
        detail = "exact equality across all three routes, n = 1..12, 20 points each".into();
    }
    report(2, "oracle triangle", pass, &detail);
}

#[test]
fn criterion_03_figure_numeric_reproduction() {
    let z = laguerre::zeros_newton(20, 1e-13).unwrap().zeros;
    // Printed reference digits; tolerance is half an ulp of the last digit.
    let targets = [
        (0usize, 0.0705399f64, 5e-8f64),
        (1, 0.372127, 5e-7),
        (2, 0.916582, 5e-7),
        (19, 66.5244, 5e-5),
    ];
    let mut pass = true;
    for &(k, v, tol) in &targets {
        if (z[k] - v).abs() >= tol {
            pass = false;
        }
    }
    let detail = format!(
        "zeros of L_20: {:.7}, {:.6}, {:.6}, ..., {:.4}",
        z[0], z[1], z[2], z[19]
    );
    report(3, "Laguerre zero digits", pass, &detail);
}

#[test]
fn criterion_04_weyl_bracket_grid() {
    let mut pass = true;
    let mut detail = String::new();
    for &n in &[10usize, 50, 200, 1000] {
        for &y in &[0.1f64, 0.5, 2.0, 10.0] {
            let r = analysis::verify_weyl(n, y).unwrap();
            if !r.ok {
                pass = false;
                detail = format!("violated at N = {n}, y = {y}, index {:?}", r.violating_index);
            }
        }
    }
    if pass {
        detail = "bracket and strict decrease hold on the 4x4 grid".into();
    }
    report(4, "Weyl bracket and monotone decrease", pass, &detail);
}

#[test]
fn criterion_05_interlacing_grid() {
    let mut pass = true;
    let mut detail = String::new();
    for &n in &[10usize, 100, 500, 2000] {
        let f = n as f64;
        let ms = [1usize, f.powf(0.25).ceil() as usize, f.cbrt().ceil() as usize];
        for &m in &ms {
            if m < 1 || 2 * m > n {
                continue;
            }
            for &y in &[0.5f64, 2.0] {
                let r = analysis::verify_interlacing(n, m, y).unwrap();
                if !r.ok {
                    pass = false;
                    detail = format!(
                        "violated at N = {n}, m = {m}, y = {y}, k = {:?}",
                        r.violating_index
                    );
                }
            }
        }
    }
    if pass {
        detail = "both inequalities hold up to N = 2000".into();
    }
    report(5, "interlacing bound", pass, &detail);
}

#[test]
fn criterion_06_density_ratios() {
    let mut pass = true;
    let mut observed = Vec::new();
    for &delta in &[0.5f64, 1.0] {
        for &(n, tol) in &[(10_000usize, 0.05f64), (1_000_000, 0.02)] {
            let rec = analysis::juddian_count(n, delta, 1.0);
            observed.push(format!("Δ={delta} N={n}: ratio {:.5}", rec.ratio));
            if (rec.ratio - 1.0).abs() >= tol {
                pass = false;
            }
        }
    }
    report(6, "density theorem at desk scale", pass, &observed.join(", "));
}

#[test]
fn criterion_07_double_juddian_existence() {
    let mut pass = true;
    let mut detail = String::new();
    for n in 2..=7usize {
        let pts = juddian::find_double_juddian(1, n, 1e-9).unwrap();
        if !pts.is_empty() {
            pass = false;
            detail = format!("unexpected point at N = {n}");
        }
    }
    let mut count_total = 0;
    let mut max_res = 0.0f64;
    let mut max_k = 0.0f64;
    for n in 8..=30usize {
        let pts = juddian::find_double_juddian(1, n, 1e-9).unwrap();
        if pts.is_empty() {
            pass = false;
            detail = format!("no point found at N = {n}");
            continue;
        }
        // One point per branch with λ_{N,i} < 1, i ≥ 2.
        let expected = laguerre::count_below(n, 1.0 - 1e-12) - 1;
        if pts.len() != expected {
            pass = false;
            detail = format!("{} points at N = {n}, expected {expected}", pts.len());
        }
        count_total += pts.len();
        for p in &pts {
            max_res = max_res.max(p.residual_m.abs()).max(p.residual_n.abs());
            let k_small = gfunction::juddian_residual_precise(1, p.g, p.delta).abs();
            let k_big = gfunction::juddian_residual_precise(n, p.g, p.delta).abs();
            max_k = max_k.max(k_small).max(k_big);
            if p.residual_m.abs() >= 1e-9 || p.residual_n.abs() >= 1e-9 {
                pass = false;
                detail = format!("polynomial residual above 1e-9 at N = {n}");
            }
            if k_small >= 1e-6 || k_big >= 1e-6 {
                pass = false;
                detail = format!("K residual above 1e-6 at N = {n}");
            }
        }
    }
    if pass {
        detail = format!(
            "empty for N = 2..7, {count_total} points over N = 8..30, max |res| {max_res:.2e}, max |K| {max_k:.2e}"
        );
    }
    report(7, "double-Juddian existence", pass, &detail);
}

#[test]
fn criterion_08_cross_route_agreement() {
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for n in 2..=20usize {
        let exact = juddian::line_crossings_exact(n).unwrap();
        let pts = juddian::find_double_juddian(1, n, 1e-10).unwrap();
        if exact.len() != pts.len() {
            pass = false;
            detail = format!(
                "count mismatch at N = {n}: {} exact vs {} traced",
                exact.len(),
                pts.len()
            );
            continue;
        }
        for (r, p) in exact.iter().zip(&pts) {
            let d = (r - p.x).abs();
            worst = worst.max(d);
            if d >= 1e-9 {
                pass = false;
                detail = format!("x mismatch at N = {n}: {r} vs {}", p.x);
            }
        }
    }
    if pass {
        detail = format!("eigenvalue route vs exact isolation, worst |Δx| = {worst:.2e}");
    }
    report(8, "cross-route agreement on the m = 1 line", pass, &detail);
}

#[test]
fn criterion_09_positive_zero_count_law() {
    let mut pass = true;
    let mut detail = String::new();
    for &n in &[10usize, 25, 50, 100] {
        for &y in &[0.25f64, 0.5, 2.0, 5.0, 17.0, 99.0] {
            let got = analysis::positive_zero_count(n, y);
            let expected = n - y.sqrt().floor() as usize;
            if got != expected {
                pass = false;
                detail = format!("N = {n}, y = {y}: {got} positive zeros, expected {expected}");
            }
        }
    }
    if pass {
        detail = "N - floor(sqrt(y)) positive zeros on the full grid".into();
    }
    report(9, "positive-zero count law", pass, &detail);
}

#[test]
fn criterion_10_k_recursion_bridge() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb21d6e);
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for n in 1..=15usize {
        let p = kus_polynomial(n as u32);
        let fact2 = BigRational::from(&factorial(n as u64) * &factorial(n as u64));
        for _ in 0..50 {
            let g: f64 = rng.random_range(f64::MIN_POSITIVE..=2.0);
            let delta: f64 = rng.random_range(f64::MIN_POSITIVE..=2.0);
            let k = gfunction::juddian_residual(n, g, delta);
            let lhs = rational_to_f64(&fact2) * (2.0 * g).powi(n as i32) * k;
            let two_g = BigRational::from_float(2.0 * g).unwrap();
            let x = &two_g * &two_g;
            let d = BigRational::from_float(delta).unwrap();
            let y = &d * &d;
            let exact = p.eval_exact(&x, &y);
            let rhs = rational_to_f64(&exact);
            let rel = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
            worst = worst.max(rel);
            if rel >= 1e-8 {
                pass = false;
                detail = format!("n = {n}, g = {g}, Δ = {delta}: relative error {rel:.2e}");
            }
        }
    }
    if pass {
        detail = format!("50 draws per n = 1..15, worst relative error {worst:.2e}");
    }
    report(10, "K-recursion bridge", pass, &detail);
}

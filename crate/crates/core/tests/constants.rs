use manin::constants::{
    self, delta_fn, e2_product, euler_product, f2, g4_product, l1_lambda, l1_lambda_series,
    sigma_infty_a1, sigma_infty_fermat,
};
use manin::torsor::a1_count;

const TOL: f64 = 1e-3;

#[test]
fn both_singular_integrals_agree_across_methods() {
    for s in [
        sigma_infty_a1(TOL).unwrap(),
        sigma_infty_fermat(TOL).unwrap(),
    ] {
        println!("{:.8} vs {:.8}", s.primary.value, s.check.value);
        assert!(s.discrepancy() <= 3.0 * TOL * s.value.max(1.0));
        assert!(s.value > 0.0);
    }
}

/// Summing the torsor region over the last coordinate first gives
/// `T(B) ~ B^(2/3) sum_{n <= B} Delta(n) F2((n / B)^(1/3))`, the same shape
/// of function whose integral is the singular integral. The error is `O(B)`.
#[test]
fn torsor_count_matches_the_delta_weighted_volume() {
    for b in [1_000u64, 10_000] {
        let bf = b as f64;
        let predicted: f64 = (1..=b)
            .map(|n| delta_fn(n) * f2((n as f64 / bf).cbrt()))
            .sum::<f64>()
            * bf.powf(2.0 / 3.0);
        let t = a1_count(b) as f64;
        println!("B = {b}: T = {t}, predicted {predicted:.1}");
        assert!((t - predicted).abs() <= 2.0 * bf);
    }
}

#[test]
fn euler_products_are_stable_in_the_prime_bound() {
    for e in [e2_product(), g4_product()] {
        let lo = euler_product(&e, 10_000).unwrap();
        let hi = euler_product(&e, 100_000).unwrap();
        let gap = (lo.value - hi.value).abs();
        assert!(gap <= lo.tail_bound + hi.tail_bound, "{}: {gap:e}", e.name);
        assert!(gap / hi.value < 1e-4, "{}", e.name);
    }
}

#[test]
fn fermat_constant_two_ways() {
    let s = sigma_infty_fermat(constants::DEFAULT_TOL).unwrap().value;
    let g = euler_product(&g4_product(), constants::DEFAULT_PRIME_BOUND)
        .unwrap()
        .value;
    let direct = s * l1_lambda().powi(3) * g / 6.0;
    let c = constants::c1_fermat().unwrap();
    assert!((direct - c.value).abs() < 1e-12 * c.value);
    assert!(c.error_bar < 1e-3 * c.value);
}

#[test]
fn leading_constants_are_positive_and_tight() {
    let a1 = constants::c1_a1().unwrap();
    assert!(a1.value > 0.0 && a1.error_bar < 1e-3 * a1.value);
    let e2 = constants::e2_zero(constants::DEFAULT_PRIME_BOUND).unwrap();
    assert!(e2.value > 0.0 && e2.value < 1.0);
}

#[test]
fn l1_closed_form_matches_the_series() {
    let (v, err) = l1_lambda_series(1_000_000);
    assert!((v - l1_lambda()).abs() < 1e-4);
    assert!((v - l1_lambda()).abs() <= err);
}

use std::sync::OnceLock;

use legendre_core::logint::EvalAccuracy;
use legendre_core::primes::iroot;
use legendre_core::riemann::pi_from_f_inversion_exact;
use legendre_core::{build_prime_table, ei, mobius, ComplexPoint, PrimeTable, Rational, SieveOptions};
use proptest::prelude::*;

fn table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| build_prime_table(100_000).unwrap())
}

fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2u64..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn pi_steps_by_one_exactly_at_primes(n in 2u64..100_000) {
        let t = table();
        let step = t.pi_int(n).unwrap() - t.pi_int(n - 1).unwrap();
        prop_assert_eq!(step, u64::from(is_prime_naive(n)));
    }

    #[test]
    fn pi_is_monotone_in_real_argument(a in 2.0f64..99_999.0, d in 0.0f64..500.0) {
        let t = table();
        let b = (a + d).min(100_000.0);
        prop_assert!(t.pi(a).unwrap() <= t.pi(b).unwrap());
    }

    #[test]
    fn sieve_matches_trial_division(limit in 2u64..5_000, segment in 16usize..512) {
        let opts = SieveOptions { segment_size: segment, ..SieveOptions::default() };
        let t = PrimeTable::build(limit, &opts).unwrap();
        let naive: Vec<u32> = (2..=limit).filter(|&n| is_prime_naive(n)).map(|n| n as u32).collect();
        prop_assert_eq!(t.primes(), &naive[..]);
    }

    #[test]
    fn mobius_is_multiplicative_on_coprimes(a in 1u64..5_000, b in 1u64..5_000) {
        prop_assume!(gcd(a, b) == 1);
        let lhs = mobius(a * b).unwrap();
        prop_assert_eq!(lhs, mobius(a).unwrap() * mobius(b).unwrap());
    }

    #[test]
    fn ei_commutes_with_conjugation(re in -60.0f64..60.0, im in 0.05f64..60.0) {
        let acc = EvalAccuracy::default();
        let z = ComplexPoint::new(re, im);
        let w = ei(z, &acc).unwrap();
        let w_bar = ei(z.conj(), &acc).unwrap();
        let scale = w.norm().max(1.0);
        prop_assert!((w.conj() - w_bar).norm() <= 1e-9 * scale, "z = {z}: {w} vs {w_bar}");
    }

    #[test]
    fn inversion_recovers_pi_away_from_prime_powers(n in 2u64..20_000, frac in 0.01f64..0.99) {
        let t = table();
        let x = n as f64 + frac;
        let expected = Rational::from_integer(t.pi(x).unwrap() as i128);
        prop_assert_eq!(pi_from_f_inversion_exact(x, t).unwrap(), expected);
    }

    #[test]
    fn iroot_is_the_floor_root(n in 0u64..u64::MAX / 2, k in 1u32..8) {
        let r = iroot(n, k);
        prop_assert!(r.checked_pow(k).is_some_and(|v| v <= n));
        prop_assert!((r + 1).checked_pow(k).is_none_or(|v| v > n));
    }
}

//! Integer factorization for the discriminant-type invariants of `K_n`.
//!
//! Hint primes are divided out first, then trial division up to a bound,
//! then Pollard–Brent rho under an iteration budget. Every prime factor
//! reported is checked by Miller–Rabin with the first thirteen prime bases,
//! which is deterministic below `3.3 · 10²⁴`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};

/// Prime factorization as `prime -> multiplicity`, primes in increasing order.
pub type Factorization = BTreeMap<BigInt, u32>;

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    pub trial_bound: u64,
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_bound: 1_000_000,
            rho_iterations: 2_000_000,
        }
    }
}

pub fn mod_pow(base: &BigInt, exp: &BigInt, modulus: &BigInt) -> BigInt {
    base.mod_floor(modulus).modpow(exp, modulus)
}

/// Inverse of `a` modulo `m`, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let ext = a.mod_floor(m).extended_gcd(m);
    if ext.gcd.is_one() {
        Some(ext.x.mod_floor(m))
    } else {
        None
    }
}

pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &MR_BASES {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Complete factorization of `n ≥ 1`.
///
/// Fails with [`Error::FactorizationIncomplete`] when rho exhausts its budget;
/// the error carries the cofactor that could not be split.
pub fn factor_integer(n: &BigInt, hints: &[BigInt], budget: FactorBudget) -> Result<Factorization> {
    if n.sign() != Sign::Plus {
        return Err(Error::Internal(format!("cannot factor non-positive {n}")));
    }
    let mut out = Factorization::new();
    let mut rest = n.clone();
    let mut pending: Vec<BigInt> = Vec::new();

    for h in hints {
        if h <= &BigInt::one() {
            continue;
        }
        let g = rest.gcd(h);
        if g.is_one() {
            continue;
        }
        // a composite hint still splits `rest`; its pieces are factored below
        while rest.is_multiple_of(&g) && !g.is_one() {
            rest /= &g;
            pending.push(g.clone());
        }
    }

    trial_divide(&mut rest, budget.trial_bound, &mut out);
    if !rest.is_one() {
        pending.push(rest);
    }

    let mut rng = StdRng::seed_from_u64(0x5eed_1e4e);
    let mut rho_left = budget.rho_iterations;
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        if let Some(r) = m.sqrt().pow(2).eq(&m).then(|| m.sqrt()) {
            pending.push(r.clone());
            pending.push(r);
            continue;
        }
        let d = pollard_brent(&m, &mut rho_left, &mut rng)
            .ok_or_else(|| Error::FactorizationIncomplete { cofactor: m.clone() })?;
        pending.push(&m / &d);
        pending.push(d);
    }
    Ok(out)
}

fn trial_divide(rest: &mut BigInt, bound: u64, out: &mut Factorization) {
    let mut divide = |d: u64, rest: &mut BigInt| {
        let db = BigInt::from(d);
        while rest.is_multiple_of(&db) {
            *rest /= &db;
            *out.entry(db.clone()).or_insert(0) += 1;
        }
    };
    for d in [2u64, 3] {
        divide(d, rest);
    }
    let mut d = 5u64;
    while d <= bound {
        let small = rest.to_u128();
        if let Some(r) = small {
            if (d as u128) * (d as u128) > r {
                break;
            }
        }
        for cand in [d, d + 2] {
            // cheap single-limb remainder before the full division
            if (&*rest % cand).is_zero() {
                divide(cand, rest);
            }
        }
        d += 6;
    }
    if rest.to_u128().is_some_and(|r| r > 1 && r < (bound as u128) * (bound as u128)) {
        let r = std::mem::replace(rest, BigInt::one());
        *out.entry(r).or_insert(0) += 1;
    }
}

/// One non-trivial factor of the odd composite `n`, or `None` when the budget runs out.
fn pollard_brent(n: &BigInt, budget: &mut u64, rng: &mut StdRng) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let bound = n.to_u64().unwrap_or(u64::MAX).max(3);
    let batch = 128u64;
    loop {
        if *budget == 0 {
            return None;
        }
        let c = BigInt::from(rng.gen_range(1..bound));
        let mut y = BigInt::from(rng.gen_range(1..bound));
        let f = |v: &BigInt| (v * v + &c) % n;
        let mut g = BigInt::one();
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = batch.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                *budget = budget.saturating_sub(steps);
                g = q.gcd(n);
                k += steps;
                if *budget == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // backtrack one step at a time from the last saved state
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fact(pairs: &[(u64, u32)]) -> Factorization {
        pairs.iter().map(|&(p, e)| (BigInt::from(p), e)).collect()
    }

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn small_cases() {
        let b = FactorBudget::default();
        assert_eq!(factor_integer(&BigInt::from(55451), &[], b).unwrap(), fact(&[(11, 1), (71, 2)]));
        assert_eq!(factor_integer(&BigInt::one(), &[], b).unwrap(), Factorization::new());
        assert_eq!(factor_integer(&BigInt::from(2), &[], b).unwrap(), fact(&[(2, 1)]));
        assert!(factor_integer(&BigInt::zero(), &[], b).is_err());
    }

    #[test]
    fn delta_7721_with_and_without_hints() {
        let d = big("3556112325505751");
        let expect = fact(&[(11, 5), (26501, 1), (833201, 1)]);
        let hints = [BigInt::from(26501), BigInt::from(833201)];
        assert_eq!(factor_integer(&d, &hints, FactorBudget::default()).unwrap(), expect);
        assert_eq!(factor_integer(&d, &[], FactorBudget::default()).unwrap(), expect);
    }

    #[test]
    fn rho_splits_semiprime_beyond_trial_bound() {
        // 1000003 * 1000033
        let n = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_integer(&n, &[], FactorBudget::default()).unwrap();
        assert_eq!(f, fact(&[(1_000_003, 1), (1_000_033, 1)]));
        let small_budget = FactorBudget { trial_bound: 100, rho_iterations: 200_000 };
        let n = BigInt::from(999_983u64) * BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        let f = factor_integer(&n, &[], small_budget).unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn exhausted_budget_reports_cofactor() {
        // product of two 20-digit primes; rho cannot split it in 10 iterations
        let p = big("100000000000000000039");
        let q = big("100000000000000000129");
        assert!(is_prime(&p) && is_prime(&q));
        let n = &p * &q;
        let tiny = FactorBudget { trial_bound: 1000, rho_iterations: 10 };
        match factor_integer(&n, &[], tiny) {
            Err(Error::FactorizationIncomplete { cofactor }) => assert_eq!(cofactor, n),
            other => panic!("unexpected {other:?}"),
        }
        // a hint resolves it
        let f = factor_integer(&n, std::slice::from_ref(&p), tiny).unwrap();
        assert_eq!(f.get(&q), Some(&1));
    }

    #[test]
    fn primality() {
        assert!(is_prime(&BigInt::from(4_759_595_441u64)));
        assert!(is_prime(&BigInt::from(197_859_618_251u64)));
        assert!(!is_prime(&BigInt::from(3_215_031_751u64))); // strong pseudoprime to 2,3,5,7
        assert!(!is_prime(&BigInt::one()));
        assert!(is_prime(&BigInt::from(2)));
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(mod_inverse(&BigInt::from(5), &BigInt::from(11)), Some(BigInt::from(9)));
        assert_eq!(mod_inverse(&BigInt::from(5), &BigInt::from(10)), None);
    }

    proptest! {
        #[test]
        fn factorization_reassembles(n in 1u64..5_000_000_000) {
            let n = BigInt::from(n);
            let f = factor_integer(&n, &[], FactorBudget::default()).unwrap();
            let prod = f.iter().fold(BigInt::one(), |acc, (p, e)| acc * p.pow(*e));
            prop_assert_eq!(prod, n);
            for p in f.keys() {
                prop_assert!(is_prime(p));
            }
        }
    }
}

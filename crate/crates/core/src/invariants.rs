//! Arithmetic invariants of `K_n`: `δ_n`, `Δ_n`, the decomposition
//! `Δ_n = a b² c³ d⁴ e⁵`, the conductor and the field discriminant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::factor::{factor_integer, FactorBudget, Factorization};

/// `δ_n = n³ + 5n² + 10n + 7`. Negative for `n ≤ -2`.
pub fn small_delta(n: &BigInt) -> BigInt {
    ((n + 5u32) * n + 10u32) * n + 7u32
}

/// `Δ_n = n⁴ + 5n³ + 15n² + 25n + 25`, always positive.
pub fn big_delta(n: &BigInt) -> BigInt {
    (((n + 5u32) * n + 15u32) * n + 25u32) * n + 25u32
}

pub fn is_tame(n: &BigInt) -> bool {
    !n.is_multiple_of(&BigInt::from(5))
}

/// Legendre symbol `(n/5)`: `+1` for `n ≡ ±1`, `-1` for `n ≡ ±2 (mod 5)`.
pub fn legendre_n5(n: &BigInt) -> Result<i8> {
    match n.mod_floor(&BigInt::from(5)).to_u8() {
        Some(1) | Some(4) => Ok(1),
        Some(2) | Some(3) => Ok(-1),
        _ => Err(Error::LegendreUndefined(n.clone())),
    }
}

/// The five factors of `Δ = a b² c³ d⁴ e⁵`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abcde {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
}

impl Abcde {
    pub fn reassemble(&self) -> BigInt {
        &self.a * self.b.pow(2u32) * self.c.pow(3u32) * self.d.pow(4u32) * self.e.pow(5u32)
    }
}

/// Splits each exponent as `5q + r`: `p^q` goes to `e`, and `p` goes to
/// `a, b, c, d` for `r = 1, 2, 3, 4`.
pub fn abcde_decompose(factorization: &Factorization) -> Abcde {
    let mut parts = [BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one(), BigInt::one()];
    for (p, &m) in factorization {
        let (q, r) = (m / 5, m % 5);
        parts[4] *= p.pow(q);
        if r > 0 {
            parts[r as usize - 1] *= p;
        }
    }
    let [a, b, c, d, e] = parts;
    Abcde { a, b, c, d, e }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldInvariants {
    pub n: BigInt,
    pub delta: BigInt,
    pub big_delta: BigInt,
    pub factorization: Factorization,
    pub abcde: Abcde,
    pub conductor: BigInt,
    pub field_disc: BigInt,
    /// `(n/5)`; `None` in the wild case `5 | n`.
    pub legendre_n5: Option<i8>,
    pub tame: bool,
}

impl FieldInvariants {
    pub fn compute(n: &BigInt, hints: &[BigInt], budget: FactorBudget) -> Result<Self> {
        let delta = small_delta(n);
        let big_delta = big_delta(n);
        let factorization = factor_integer(&big_delta, hints, budget)?;
        let abcde = abcde_decompose(&factorization);
        let tame = is_tame(n);
        let conductor = conductor(&factorization, tame);
        let field_disc = conductor.pow(4u32);
        Ok(FieldInvariants {
            n: n.clone(),
            delta,
            big_delta,
            factorization,
            abcde,
            conductor,
            field_disc,
            legendre_n5: legendre_n5(n).ok(),
            tame,
        })
    }

    /// `b c² d³ e⁴`, the denominator of the normal integral basis generator.
    pub fn nib_denominator(&self) -> BigInt {
        let Abcde { b, c, d, e, .. } = &self.abcde;
        b * c.pow(2u32) * d.pow(3u32) * e.pow(4u32)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factorization.values().all(|&m| m == 1)
    }

    pub fn require_tame(&self) -> Result<()> {
        if self.tame {
            Ok(())
        } else {
            Err(Error::WildRamification(self.n.clone()))
        }
    }
}

/// `5^c · ∏ p` over primes `p ≠ 5` with `v_p(Δ) ≢ 0 (mod 5)`; `c = 0` when
/// `5 ∤ n` and `c = 2` otherwise.
pub fn conductor(factorization: &Factorization, tame: bool) -> BigInt {
    let five = BigInt::from(5);
    let mut f = if tame { BigInt::one() } else { BigInt::from(25) };
    for (p, &m) in factorization {
        if *p != five && m % 5 != 0 {
            f *= p;
        }
    }
    f
}

/// `n³ + 5n² + 10n + 18` and `n² + 5n + 5`, the Bézout cofactors with
/// `(n³+5n²+10n+18) δ − (n²+5n+5) Δ = 1`.
pub fn bezout_cofactors(n: &BigInt) -> (BigInt, BigInt) {
    (((n + 5u32) * n + 10u32) * n + 18u32, (n + 5u32) * n + 5u32)
}

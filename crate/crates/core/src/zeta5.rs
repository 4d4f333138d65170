//! Arithmetic in the ring of integers `Z[ζ]` of the fifth cyclotomic field.
//!
//! Elements are stored on the power basis `{1, ζ, ζ², ζ³}`; `ζ⁴` is always
//! rewritten as `-1 - ζ - ζ² - ζ³`, so the representation is canonical.
//! `Z[ζ]` is norm-Euclidean, which is what [`cyc_gcd`] and [`split_prime`]
//! rely on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::factor::mod_pow;

const GCD_ITERATION_CAP: usize = 10_000;
const ROOT_SEARCH_RETRIES: usize = 64;
const DETERMINISTIC_SCAN_LIMIT: u64 = 1_000_000;

/// An element `c0 + c1 ζ + c2 ζ² + c3 ζ³` of `Z[ζ₅]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    c: [BigInt; 4],
}

/// Image of an element of `Z[ζ]` in `Z[ζ]/(1 - ζ) ≅ F₅`, as a symmetric
/// representative in `{-2, -1, 0, 1, 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuinticResidue(i8);

impl QuinticResidue {
    pub fn new(value: i64) -> Self {
        let r = value.rem_euclid(5);
        QuinticResidue(if r > 2 { (r - 5) as i8 } else { r as i8 })
    }

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Mul for QuinticResidue {
    type Output = QuinticResidue;

    fn mul(self, rhs: QuinticResidue) -> QuinticResidue {
        QuinticResidue::new(self.0 as i64 * rhs.0 as i64)
    }
}

impl CycInt {
    pub fn new(
        c0: impl Into<BigInt>,
        c1: impl Into<BigInt>,
        c2: impl Into<BigInt>,
        c3: impl Into<BigInt>,
    ) -> Self {
        CycInt {
            c: [c0.into(), c1.into(), c2.into(), c3.into()],
        }
    }

    pub fn from_coords(c: [BigInt; 4]) -> Self {
        CycInt { c }
    }

    pub fn from_int(k: impl Into<BigInt>) -> Self {
        CycInt::new(k, 0, 0, 0)
    }

    pub fn zero() -> Self {
        CycInt::from_int(0)
    }

    pub fn one() -> Self {
        CycInt::from_int(1)
    }

    pub fn zeta() -> Self {
        CycInt::new(0, 1, 0, 0)
    }

    /// `(1 + √5)/2 = -ζ² - ζ³`, the fundamental unit of the real subfield.
    pub fn golden_unit() -> Self {
        CycInt::new(0, 0, -1, -1)
    }

    /// Builds the canonical element from coefficients on `1, ζ, …, ζ⁴`.
    pub fn from_five(mut v: [BigInt; 5]) -> Self {
        let top = std::mem::take(&mut v[4]);
        let [c0, c1, c2, c3, _] = v;
        CycInt {
            c: [c0 - &top, c1 - &top, c2 - &top, c3 - top],
        }
    }

    pub fn coords(&self) -> &[BigInt; 4] {
        &self.c
    }

    pub fn into_coords(self) -> [BigInt; 4] {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it has no ζ-part.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| x * k),
        }
    }

    pub fn pow(&self, mut e: u32) -> CycInt {
        let mut base = self.clone();
        let mut acc = CycInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Applies the automorphism `ζ ↦ ζʲ`, `j ∈ {1, 2, 3, 4}`.
    pub fn galois(&self, j: u32) -> Result<CycInt> {
        if !(1..=4).contains(&j) {
            return Err(Error::InvalidGaloisIndex(j));
        }
        Ok(self.galois_unchecked(j as usize))
    }

    fn galois_unchecked(&self, j: usize) -> CycInt {
        if j == 1 {
            return self.clone();
        }
        let mut v: [BigInt; 5] = Default::default();
        for (i, ci) in self.c.iter().enumerate() {
            v[(i * j) % 5] += ci;
        }
        CycInt::from_five(v)
    }

    /// Product of the three non-trivial conjugates; `x * x.conjugate_cofactor() = N(x)`.
    pub fn conjugate_cofactor(&self) -> CycInt {
        let g2 = self.galois_unchecked(2);
        let g3 = self.galois_unchecked(3);
        let g4 = self.galois_unchecked(4);
        &(&g2 * &g3) * &g4
    }

    /// Absolute norm `N_{Q(ζ)/Q}`. Always non-negative, zero only for zero.
    pub fn norm(&self) -> BigInt {
        let prod = self * &self.conjugate_cofactor();
        match prod.as_integer() {
            Some(v) => v.clone(),
            None => panic!("norm of {self} is not rational: {prod}"),
        }
    }

    /// Whether `self` divides `x` in `Z[ζ]`. Zero divides only zero.
    pub fn divides(&self, x: &CycInt) -> bool {
        if self.is_zero() {
            return x.is_zero();
        }
        let nd = self.norm();
        let scaled = x * &self.conjugate_cofactor();
        scaled.c.iter().all(|v| v.is_multiple_of(&nd))
    }

    /// The exact quotient `x / self`.
    pub fn div_exact(x: &CycInt, d: &CycInt) -> Result<CycInt> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let nd = d.norm();
        let scaled = x * &d.conjugate_cofactor();
        if !scaled.c.iter().all(|v| v.is_multiple_of(&nd)) {
            return Err(Error::NotDivisible {
                divisor: d.to_string(),
                dividend: x.to_string(),
            });
        }
        Ok(CycInt {
            c: scaled.c.map(|v| v / &nd),
        })
    }

    /// Reduction modulo `(1 - ζ)`: `ζ ≡ 1`, so the image is the coordinate sum mod 5.
    pub fn residue(&self) -> QuinticResidue {
        let s: BigInt = self.c.iter().sum();
        let r = s.mod_floor(&BigInt::from(5)).to_i64().expect("residue fits");
        QuinticResidue::new(r)
    }

    /// Multiplies by the unit `u_λ ∈ {1, -1, ε, -ε}` (`ε = -ζ² - ζ³`) that
    /// brings the residue modulo `(1 - ζ)` to 1.
    pub fn unit_normalize(&self) -> Result<CycInt> {
        let unit = match self.residue().value() {
            1 => return Ok(self.clone()),
            -1 => return Ok(-self),
            2 => CycInt::golden_unit(),
            -2 => -CycInt::golden_unit(),
            _ => return Err(Error::ResidueZero(self.to_string())),
        };
        Ok(self * &unit)
    }

    /// Exact coordinates of `self / d` as numerators over the common denominator `N(d)`.
    fn nearest_quotient(&self, d: &CycInt) -> CycInt {
        let nd = d.norm();
        let scaled = self * &d.conjugate_cofactor();
        let two_nd = &nd * 2;
        CycInt {
            c: scaled.c.map(|v: BigInt| (v * 2u32 + &nd).div_floor(&two_nd)),
        }
    }

    /// Euclidean remainder of `self` by `d` with strictly smaller norm.
    fn euclid_remainder(&self, d: &CycInt) -> Result<CycInt> {
        let nd = d.norm();
        let q = self.nearest_quotient(d);
        let r = self - &(&q * d);
        if r.norm() < nd {
            return Ok(r);
        }
        let mut best: Option<(BigInt, CycInt)> = None;
        for offset in offsets() {
            let q2 = &q + &offset;
            let r2 = self - &(&q2 * d);
            let n2 = r2.norm();
            if best.as_ref().is_none_or(|(bn, _)| n2 < *bn) {
                best = Some((n2, r2));
            }
        }
        match best {
            Some((n, r)) if n < nd => Ok(r),
            _ => Err(Error::Internal(format!(
                "no Euclidean step reduces {self} modulo {d}"
            ))),
        }
    }
}

fn offsets() -> impl Iterator<Item = CycInt> {
    (0..81).map(|mut idx: i32| {
        let mut c = [0i32; 4];
        for slot in c.iter_mut() {
            *slot = idx % 3 - 1;
            idx /= 3;
        }
        CycInt::new(c[0], c[1], c[2], c[3])
    })
}

/// Greatest common divisor in `Z[ζ₅]` by norm-Euclidean descent.
///
/// The result is normalized to residue 1 modulo `(1 - ζ)` when that is
/// possible; otherwise it is returned as computed. It is unique up to units.
pub fn cyc_gcd(x: &CycInt, y: &CycInt) -> Result<CycInt> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    let mut steps = 0;
    while !b.is_zero() {
        steps += 1;
        if steps > GCD_ITERATION_CAP {
            return Err(Error::Internal(format!(
                "gcd({x}, {y}) exceeded {GCD_ITERATION_CAP} steps"
            )));
        }
        let r = a.euclid_remainder(&b)?;
        a = b;
        b = r;
    }
    if a.residue().is_zero() {
        Ok(a)
    } else {
        a.unit_normalize()
    }
}

/// A prime element of norm `p` for a rational prime `p ≡ 1 (mod 5)`.
pub fn split_prime(p: &BigInt) -> Result<CycInt> {
    let five = BigInt::from(5);
    if p <= &BigInt::one() || !p.mod_floor(&five).is_one() {
        return Err(Error::UnsplittablePrime(p.clone()));
    }
    let r = fifth_root_of_unity(p);
    let pi = cyc_gcd(&CycInt::from_int(p.clone()), &(CycInt::zeta() - CycInt::from_int(r)))?;
    if &pi.norm() != p {
        return Err(Error::Internal(format!(
            "gcd for prime {p} has norm {} instead of {p}",
            pi.norm()
        )));
    }
    Ok(pi)
}

/// A root `r ≠ 1` of `X⁴ + X³ + X² + X + 1` modulo `p`.
fn fifth_root_of_unity(p: &BigInt) -> BigInt {
    let exp = (p - 1u32) / 5u32;
    let seed = (p % BigInt::from(u64::MAX)).to_u64().unwrap_or(0);
    let mut rng = StdRng::seed_from_u64(seed);
    let bound = p.to_u64().unwrap_or(u64::MAX).max(3);
    for _ in 0..ROOT_SEARCH_RETRIES {
        let g = BigInt::from(rng.gen_range(2..bound));
        let r = mod_pow(&g, &exp, p);
        if !r.is_one() {
            return r;
        }
    }
    let limit = bound.min(DETERMINISTIC_SCAN_LIMIT);
    for g in 2..limit {
        let r = mod_pow(&BigInt::from(g), &exp, p);
        if !r.is_one() {
            return r;
        }
    }
    panic!("no primitive fifth root of unity found modulo {p}");
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["", "ζ", "ζ^2", "ζ^3"];
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            write!(f, "{}", NAMES[i])?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt({self})")
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| &self.c[i] + &rhs.c[i]),
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        CycInt {
            c: std::array::from_fn(|i| &self.c[i] - &rhs.c[i]),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        let mut full: [BigInt; 7] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                full[i + j] += a * b;
            }
        }
        let [p0, p1, p2, p3, p4, p5, p6] = full;
        CycInt::from_five([p0 + p5, p1 + p6, p2, p3, p4])
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            c: self.c.clone().map(|x| -x),
        }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        &self * &rhs
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn period_a(n: i64) -> CycInt {
        // n + 2 + 2ζ⁴ + ζ²
        CycInt::from_five([BigInt::from(n + 2), 0.into(), 1.into(), 0.into(), 2.into()])
    }

    fn cyc() -> impl Strategy<Value = CycInt> {
        prop::array::uniform4(-40i64..40).prop_map(|c| CycInt::new(c[0], c[1], c[2], c[3]))
    }

    fn nonzero_cyc() -> impl Strategy<Value = CycInt> {
        cyc().prop_filter("nonzero", |x| !x.is_zero())
    }

    #[test]
    fn zeta_times_zeta_cubed_rewrites_zeta_fourth() {
        assert_eq!(CycInt::zeta() * CycInt::new(0, 0, 0, 1), CycInt::new(-1, -1, -1, -1));
    }

    #[test]
    fn n14_alpha_product() {
        let a1 = CycInt::new(2, 1, 3, 0);
        let a2 = CycInt::new(2, 3, 0, 1);
        assert_eq!(&(&a1 * &a2) * &CycInt::one(), CycInt::new(6, 7, 8, 10));
    }

    #[test]
    fn galois_maps() {
        assert_eq!(CycInt::zeta().galois(2).unwrap(), CycInt::new(0, 0, 1, 0));
        assert!(CycInt::zeta().galois(0).is_err());
        assert!(CycInt::zeta().galois(5).is_err());
        // one of the conjugates of A_14 is B_14 = 16 + 2ζ² + ζ
        let b14 = CycInt::new(16, 1, 2, 0);
        let hits: Vec<u32> = (1..=4)
            .filter(|&j| period_a(14).galois(j).unwrap() == b14)
            .collect();
        assert_eq!(hits, vec![3]);
    }

    #[test]
    fn norms_from_examples() {
        assert_eq!(period_a(14).norm(), BigInt::from(55451));
        assert_eq!(CycInt::one().norm(), BigInt::one());
        assert_eq!(CycInt::new(6, 7, 8, 10).norm(), BigInt::from(5041));
    }

    #[test]
    fn divisibility() {
        let a1 = CycInt::new(2, 1, 3, 0);
        assert!(a1.divides(&period_a(14)));
        let one_minus_zeta = CycInt::new(1, -1, 0, 0);
        assert_eq!(one_minus_zeta.norm(), BigInt::from(5));
        assert!(one_minus_zeta.divides(&CycInt::from_int(5)));
        assert!(!one_minus_zeta.divides(&CycInt::from_int(7)));
        assert!(CycInt::div_exact(&CycInt::from_int(7), &one_minus_zeta).is_err());
        assert!(CycInt::div_exact(&CycInt::from_int(7), &CycInt::zero()).is_err());
    }

    #[test]
    fn residues() {
        assert_eq!(CycInt::new(6, 7, 8, 10).residue().value(), 1);
        assert_eq!(CycInt::one().residue().value(), 1);
        assert_eq!(CycInt::golden_unit().residue().value(), -2);
        assert_eq!(CycInt::new(1, -1, 0, 0).residue().value(), 0);
    }

    #[test]
    fn normalization_cases() {
        let a1 = CycInt::new(2, 1, 3, 0);
        assert_eq!(a1.unit_normalize().unwrap(), a1);
        assert_eq!(CycInt::from_int(-1).unit_normalize().unwrap(), CycInt::one());
        assert_eq!(
            CycInt::from_int(2).unit_normalize().unwrap(),
            CycInt::new(0, 0, -2, -2)
        );
        assert!(CycInt::new(1, -1, 0, 0).unit_normalize().is_err());
    }

    #[test]
    fn gcd_examples() {
        let x = CycInt::new(3, 1, 4, 1);
        let g = cyc_gcd(&x, &CycInt::zero()).unwrap();
        assert!(g.divides(&x) && x.divides(&g));

        // 3 is a primitive fifth root of unity mod 11 (3⁵ = 243 ≡ 1)
        let g = cyc_gcd(&CycInt::from_int(11), &CycInt::new(-3, 1, 0, 0)).unwrap();
        assert_eq!(g.norm(), BigInt::from(11));
        assert!(g.divides(&CycInt::from_int(11)));
        assert!(g.divides(&CycInt::new(-3, 1, 0, 0)));
    }

    #[test]
    fn split_primes() {
        let pi = split_prime(&BigInt::from(11)).unwrap();
        assert_eq!(pi.norm(), BigInt::from(11));

        let pi = split_prime(&BigInt::from(71)).unwrap();
        assert_eq!(pi.norm(), BigInt::from(71));
        let a14 = period_a(14);
        assert!((1..=4).any(|j| pi.galois(j).unwrap().divides(&a14)));

        assert_eq!(
            split_prime(&BigInt::from(7)),
            Err(Error::UnsplittablePrime(BigInt::from(7)))
        );
    }

    #[test]
    fn split_prime_conjugates_are_distinct_and_multiply_to_p() {
        for p in [11u64, 31, 41, 61, 71, 101, 131, 2141, 197_859_618_251] {
            let p = BigInt::from(p);
            let pi = split_prime(&p).unwrap();
            let conj: Vec<CycInt> = (1..=4).map(|j| pi.galois(j).unwrap()).collect();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    // associates divide each other
                    assert!(!(conj[i].divides(&conj[j]) && conj[j].divides(&conj[i])));
                }
            }
            let prod = conj.iter().fold(CycInt::one(), |acc, c| &acc * c);
            // the product is p times a unit
            let unit = CycInt::div_exact(&prod, &CycInt::from_int(p.clone())).unwrap();
            assert_eq!(unit.norm(), BigInt::one());
        }
    }

    #[test]
    fn period_factors_pairwise_coprime() {
        for n in [-7i64, -1, 1, 2, 3, 14, 44, 69, 226, 2888] {
            let a = period_a(n);
            let conj: Vec<CycInt> = (1..=4).map(|j| a.galois(j).unwrap()).collect();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let g = cyc_gcd(&conj[i], &conj[j]).unwrap();
                    assert_eq!(g.norm(), BigInt::one(), "n = {n}");
                }
            }
            let prod = conj.iter().fold(CycInt::one(), |acc, c| &acc * c);
            assert_eq!(prod.norm(), a.norm().pow(4));
        }
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in cyc(), y in cyc()) {
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn multiplication_commutes_and_associates(x in cyc(), y in cyc(), z in cyc()) {
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &CycInt::one(), x.clone());
        }

        #[test]
        fn galois_is_a_norm_preserving_homomorphism(x in cyc(), y in cyc(), j in 1u32..=4) {
            let gx = x.galois(j).unwrap();
            prop_assert_eq!(gx.norm(), x.norm());
            prop_assert_eq!((&x * &y).galois(j).unwrap(), &gx * &y.galois(j).unwrap());
            prop_assert_eq!((&x + &y).galois(j).unwrap(), &gx + &y.galois(j).unwrap());
            prop_assert_eq!(x.galois(2).unwrap().galois(3).unwrap(), x.clone());
            prop_assert_eq!(x.galois(1).unwrap(), x);
        }

        #[test]
        fn normalized_residue_is_one(x in cyc()) {
            if !x.residue().is_zero() {
                prop_assert_eq!(x.unit_normalize().unwrap().residue().value(), 1);
            }
        }

        #[test]
        fn residue_is_multiplicative(x in cyc(), y in cyc()) {
            prop_assert_eq!((&x * &y).residue(), x.residue() * y.residue());
        }

        #[test]
        fn gcd_of_multiple_is_associate(x in nonzero_cyc(), y in nonzero_cyc()) {
            let g = cyc_gcd(&x, &(&x * &y)).unwrap();
            prop_assert!(g.divides(&x) && x.divides(&g));
        }

        #[test]
        fn gcd_divides_both(x in nonzero_cyc(), y in nonzero_cyc()) {
            let g = cyc_gcd(&x, &y).unwrap();
            prop_assert!(g.divides(&x));
            prop_assert!(g.divides(&y));
        }

        #[test]
        fn div_exact_inverts_mul(x in cyc(), d in nonzero_cyc()) {
            let p = &x * &d;
            prop_assert!(d.divides(&p));
            prop_assert_eq!(CycInt::div_exact(&p, &d).unwrap(), x);
        }
    }
}

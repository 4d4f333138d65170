//! All generators of normal integral bases, via the action of `Z[G]ˣ`.
//!
//! `Z[G]ˣ = ⟨±1⟩ × G × ⟨1 − σ² − σ³⟩` acts simply transitively on the
//! generators. `(1 − σ² − σ³)ᵏ` acts as `a_k + b_k(σ + σ⁴) − c_k(σ² + σ³)` with
//!
//! ```text
//! a_k = ((−1)ᵏ + 2L_{2k})/5,  b_k = ((−1)ᵏ + L_{2k−1})/5,  c_k = ((−1)^{k+1} + L_{2k+1})/5
//! ```
//!
//! where `L` is the Lucas sequence.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::nib::NibGenerator;
use crate::quintic_field::{FieldContext, FieldElement, DEGREE};

/// Lucas number `L_k`, with `L_{−k} = (−1)ᵏ L_k`.
pub fn lucas(k: i64) -> BigInt {
    let m = k.unsigned_abs();
    let (mut x, mut y) = (BigInt::from(2), BigInt::one());
    for _ in 0..m {
        let z = &x + &y;
        x = std::mem::replace(&mut y, z);
    }
    if k < 0 && m % 2 == 1 {
        -x
    } else {
        x
    }
}

fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn exact_fifth(v: BigInt) -> BigInt {
    let (q, r) = v.div_rem(&BigInt::from(5));
    assert!(r.is_zero(), "Lucas combination not divisible by 5");
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbcTriple {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

pub fn abc(k: i64) -> AbcTriple {
    let s = sign_pow(k);
    AbcTriple {
        a: exact_fifth(s + lucas(2 * k) * 2),
        b: exact_fifth(s + lucas(2 * k - 1)),
        c: exact_fifth(-s + lucas(2 * k + 1)),
    }
}

/// `sign · σ^ell · (1 − σ² − σ³)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingUnit {
    pub sign: i8,
    pub ell: u8,
    pub k: i64,
}

impl GroupRingUnit {
    pub fn new(sign: i8, ell: i64, k: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        GroupRingUnit { sign, ell: ell.rem_euclid(5) as u8, k }
    }

    pub fn identity() -> Self {
        GroupRingUnit::new(1, 0, 0)
    }

    pub fn compose(self, other: GroupRingUnit) -> Self {
        GroupRingUnit::new(self.sign * other.sign, self.ell as i64 + other.ell as i64, self.k + other.k)
    }

    pub fn inverse(self) -> Self {
        GroupRingUnit::new(self.sign, -(self.ell as i64), -self.k)
    }
}

impl fmt::Display for GroupRingUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "({s}, {}, {})", self.ell, self.k)
    }
}

/// Applies `u` to `x`.
pub fn act_unit(ctx: &FieldContext, u: GroupRingUnit, x: &FieldElement) -> FieldElement {
    let AbcTriple { a, b, c } = abc(u.k);
    let conj = ctx.conjugates(x);
    let mut y = conj[0].scale(&a);
    y = &y + &(&conj[1] + &conj[4]).scale(&b);
    y = &y - &(&conj[2] + &conj[3]).scale(&c);
    let y = ctx.apply_sigma(&y, u.ell as i64);
    if u.sign < 0 {
        -y
    } else {
        y
    }
}

/// Coefficients of `(β₀ + β₁σ + β₂σ² + β₃σ³)(a_k + b_k(σ + σ⁴) − c_k(σ² + σ³))`
/// on `1, σ, …, σ⁴`.
pub fn theta(k: i64, beta: &[BigInt; 4]) -> [BigInt; DEGREE] {
    let AbcTriple { a, b, c } = abc(k);
    let [b0, b1, b2, b3] = beta;
    [
        &a * b0 + &b * b1 - &c * b2 - &c * b3,
        &b * b0 + &a * b1 + &b * b2 - &c * b3,
        -(&c * b0) + &b * b1 + &a * b2 + &b * b3,
        -(&c * b0) - &c * b1 + &b * b2 + &a * b3,
        &b * b0 - &c * b1 - &c * b2 + &b * b3,
    ]
}

/// `ξ_k = (Σ θ_t(k) ρ⁽ᵗ⁾ − (−1)ᵏ m)/denom`, equal to `(1 − σ² − σ³)ᵏ.α`.
pub fn xi(ctx: &FieldContext, gen: &NibGenerator, k: i64) -> FieldElement {
    let th = theta(k, &gen.beta);
    let conj = ctx.sigma_powers();
    let mut acc = FieldElement::from_int(-(&gen.m * sign_pow(k)));
    for (t, c) in th.iter().enumerate() {
        acc = &acc + &conj[t].scale(c);
    }
    acc.div_int(&gen.denom)
}

/// Lazily yields `(u, u.α)` for `k = k_min..=k_max`, both signs and all `ℓ`;
/// ten elements per `k`.
pub fn enumerate<'a>(
    ctx: &'a FieldContext,
    gen: &'a NibGenerator,
    k_min: i64,
    k_max: i64,
) -> impl Iterator<Item = (GroupRingUnit, FieldElement)> + 'a {
    (k_min..=k_max).flat_map(move |k| {
        let base = xi(ctx, gen, k);
        let conj = ctx.conjugates(&base);
        (0..DEGREE).flat_map(move |ell| {
            let plus = conj[ell].clone();
            let minus = -&plus;
            [
                (GroupRingUnit::new(1, ell as i64, k), plus),
                (GroupRingUnit::new(-1, ell as i64, k), minus),
            ]
        })
    })
}

/// The unit `u` with `|k| ≤ bound` and `u.x = y`, if any.
pub fn orbit_match(ctx: &FieldContext, x: &FieldElement, y: &FieldElement, bound: u32) -> Option<GroupRingUnit> {
    let neg_y = -y;
    let bound = bound as i64;
    let ks = std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]));
    for k in ks {
        let z = act_unit(ctx, GroupRingUnit::new(1, 0, k), x);
        for (ell, c) in ctx.conjugates(&z).iter().enumerate() {
            if c == y {
                return Some(GroupRingUnit::new(1, ell as i64, k));
            }
            if *c == neg_y {
                return Some(GroupRingUnit::new(-1, ell as i64, k));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::FactorBudget;
    use crate::invariants::FieldInvariants;
    use crate::nib::{certify_nib, nib_generator_for, squarefree_generator};
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn elem(c: [i64; 5]) -> FieldElement {
        FieldElement::from_integers(c.map(BigInt::from))
    }

    fn setup(n: i64) -> (FieldContext, FieldInvariants, NibGenerator) {
        nib_generator_for(&b(n), &[], FactorBudget::default()).unwrap()
    }

    #[test]
    fn lucas_values() {
        assert_eq!(lucas(0), b(2));
        assert_eq!(lucas(1), b(1));
        assert_eq!(lucas(-1), b(-1));
        assert_eq!(lucas(10), b(123));
        assert_eq!(lucas(-10), b(123));
        for k in -20..20 {
            assert_eq!(lucas(k + 2), lucas(k + 1) + lucas(k));
        }
    }

    #[test]
    fn abc_values() {
        let t = |a: i64, bb: i64, c: i64| AbcTriple { a: b(a), b: b(bb), c: b(c) };
        assert_eq!(abc(0), t(1, 0, 0));
        assert_eq!(abc(1), t(1, 0, 1));
        assert_eq!(abc(2), t(3, 1, 2));
        assert_eq!(abc(3).a, b(7));
        let a: Vec<BigInt> = (0..6).map(|k| abc(k).a).collect();
        assert_eq!(a, [1, 1, 3, 7, 19, 49].map(b).to_vec());
    }

    #[test]
    fn abc_relations() {
        for k in -12i64..12 {
            let (x, y) = (abc(k), abc(-k));
            assert_eq!(x.a, y.a);
            assert_eq!(y.b, -x.c.clone());
            assert_eq!(abc(k + 1).b, x.c);
            for seq in [|t: AbcTriple| t.a, |t: AbcTriple| t.b, |t: AbcTriple| t.c] {
                let s = |j: i64| seq(abc(j));
                assert_eq!(s(k + 1) - s(k) * 2 - s(k - 1) * 2 + s(k - 2), BigInt::zero());
            }
        }
    }

    #[test]
    fn unit_group_law() {
        let u = GroupRingUnit::new(-1, 3, 2);
        let v = GroupRingUnit::new(-1, 4, -5);
        assert_eq!(u.compose(v), GroupRingUnit::new(1, 2, -3));
        assert_eq!(u.compose(u.inverse()), GroupRingUnit::identity());
        assert_eq!(GroupRingUnit::new(1, 0, 1).inverse(), GroupRingUnit::new(1, 0, -1));
        assert_eq!(u.to_string(), "(-, 3, 2)");
    }

    #[test]
    fn basic_actions() {
        let ctx = FieldContext::new(&b(14)).unwrap();
        let rho = FieldElement::rho();
        assert_eq!(act_unit(&ctx, GroupRingUnit::identity(), &rho), rho);
        let c = ctx.sigma_powers();
        let expect = &(&c[0] - &c[2]) - &c[3];
        assert_eq!(act_unit(&ctx, GroupRingUnit::new(1, 0, 1), &rho), expect);
        // (1 − σ − σ⁴) inverts (1 − σ² − σ³)
        let inv = &(&c[0] - &c[1]) - &c[4];
        assert_eq!(act_unit(&ctx, GroupRingUnit::new(1, 0, -1), &rho), inv);
        let target = -&ctx.sigma_powers()[2];
        assert_eq!(orbit_match(&ctx, &rho, &target, 0), Some(GroupRingUnit::new(-1, 2, 0)));
        assert_eq!(orbit_match(&ctx, &rho, &rho, 3), Some(GroupRingUnit::identity()));
        assert_eq!(orbit_match(&ctx, &rho, &FieldElement::one(), 2), None);
    }

    #[test]
    fn theta_special_cases() {
        let beta = [6, 7, 8, 10].map(BigInt::from);
        let t0 = theta(0, &beta);
        assert_eq!(t0, [6, 7, 8, 10, 0].map(BigInt::from));
        let unit = [1, 0, 0, 0].map(BigInt::from);
        for k in -5..=5 {
            let AbcTriple { a, b: bb, c } = abc(k);
            assert_eq!(theta(k, &unit), [a, bb.clone(), -c.clone(), -c, bb]);
        }
    }

    #[test]
    fn theta_lucas_forms_for_reference_beta() {
        // θ_t(k) for β = (6, 7, 8, 10), times 5, as (−1)ᵏ, L_{2k−1}, L_{2k+1} weights
        let forms: [[i64; 3]; 5] = [[31, -5, -6], [31, 0, 4], [31, 1, 10], [31, -12, 7], [31, 16, -15]];
        let beta = [6, 7, 8, 10].map(BigInt::from);
        for k in -5..=5 {
            let th = theta(k, &beta);
            for (t, f) in forms.iter().enumerate() {
                let v = b(f[0] * sign_pow(k)) + lucas(2 * k - 1) * f[1] + lucas(2 * k + 1) * f[2];
                assert_eq!(&th[t] * 5, v, "k = {k}, t = {t}");
            }
        }
    }

    fn group_ring_mul(x: &[BigInt; 5], y: &[BigInt; 5]) -> [BigInt; 5] {
        let mut out: [BigInt; 5] = Default::default();
        for i in 0..5 {
            for j in 0..5 {
                out[(i + j) % 5] += &x[i] * &y[j];
            }
        }
        out
    }

    #[test]
    fn n_minus_one_closed_form() {
        let (ctx, _, gen) = setup(-1);
        for k in -6i64..=6 {
            let l1 = lucas(2 * k - 1);
            let l2 = lucas(2 * k + 1);
            let s = &l1 + &l2;
            let num = [
                b(-sign_pow(k)) + &l1 * 2u32 + &l2 * 3u32,
                -(&l1 * 5u32),
                -(&s * 4u32),
                s.clone(),
                s,
            ];
            assert_eq!(xi(&ctx, &gen, k), FieldElement::new(num, b(5)), "k = {k}");
        }
    }

    #[test]
    fn squarefree_generators_share_an_orbit() {
        for n in [-1i64, 1, 2, 3, 4, 6, 7] {
            let (ctx, inv, gen) = setup(n);
            let sf = squarefree_generator(&inv).unwrap();
            assert!(orbit_match(&ctx, &gen.alpha, &sf, 3).is_some(), "n = {n}");
        }
    }

    #[test]
    fn enumeration_certifies_and_is_distinct() {
        for n in [-1i64, 1, 2, 14, 44] {
            let (ctx, inv, gen) = setup(n);
            let all: Vec<_> = enumerate(&ctx, &gen, -5, 5).collect();
            assert_eq!(all.len(), 110);
            let mut seen = HashSet::new();
            for (u, x) in &all {
                assert!(certify_nib(&ctx, x, &inv.conductor), "n = {n}, {u}");
                assert_eq!(act_unit(&ctx, *u, &gen.alpha), *x);
                assert!(seen.insert(x.clone()), "duplicate at n = {n}, {u}");
            }
            assert_eq!(enumerate(&ctx, &gen, 3, 2).count(), 0);
            let zero: Vec<_> = enumerate(&ctx, &gen, 0, 0).map(|(_, x)| x).collect();
            assert!(zero.contains(&gen.alpha));
        }
    }

    #[test]
    fn iterated_action() {
        let ctx = FieldContext::new(&b(7)).unwrap();
        let x = elem([3, -1, 4, 1, -5]);
        let step = GroupRingUnit::new(1, 0, 1);
        let back = GroupRingUnit::new(1, 0, -1);
        let mut fwd = x.clone();
        let mut bwd = x.clone();
        for k in 1..=4 {
            fwd = act_unit(&ctx, step, &fwd);
            bwd = act_unit(&ctx, back, &bwd);
            assert_eq!(act_unit(&ctx, GroupRingUnit::new(1, 0, k), &x), fwd);
            assert_eq!(act_unit(&ctx, GroupRingUnit::new(1, 0, -k), &x), bwd);
        }
        assert_eq!(act_unit(&ctx, back, &act_unit(&ctx, step, &x)), x);
    }

    proptest! {
        #[test]
        fn theta_is_group_ring_product(k in -8i64..=8, beta in prop::array::uniform4(-50i64..50)) {
            let beta = beta.map(BigInt::from);
            let AbcTriple { a, b: bb, c } = abc(k);
            let lhs = [beta[0].clone(), beta[1].clone(), beta[2].clone(), beta[3].clone(), BigInt::zero()];
            let rhs = [a, bb.clone(), -c.clone(), -c, bb];
            prop_assert_eq!(theta(k, &beta), group_ring_mul(&lhs, &rhs));
        }

        #[test]
        fn xi_equals_unit_action(n in -30i64..120, k in -6i64..=6) {
            prop_assume!(n % 5 != 0);
            let (ctx, _, gen) = setup(n);
            let x = xi(&ctx, &gen, k);
            prop_assert_eq!(&x, &act_unit(&ctx, GroupRingUnit::new(1, 0, k), &gen.alpha));
            prop_assert_eq!(orbit_match(&ctx, &gen.alpha, &x, 6).map(|u| u.k), Some(k));
        }
    }
}

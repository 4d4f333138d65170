//! The explicit integral basis `{1, φ₁, φ₂, φ₃, φ₄}` of `K_n` for `5 ∤ n`.
//!
//! With `5u ≡ 1 (mod Δ)` and `t` chosen so that `f_n(t) ≡ 0 (mod Δδ²)`:
//!
//! ```text
//! φ₁ = (ρ − t)/e
//! φ₂ = (ρ − t)²/(c d e²)
//! φ₃ = (ρ − t)³/(b c d² e³)
//! φ₄ = T/(b c² d³ e⁴ δ),   T = (f_n(ρ) − f_n(t))/(ρ − t)
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factor::{mod_inverse, FactorBudget};
use crate::invariants::{Abcde, FieldInvariants};
use crate::linalg::{det_rat, inverse_rat, mat_mul_rat, RatMatrix};
use crate::quintic_field::{lehmer_coefficients, FieldContext, FieldElement, DEGREE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralBasis {
    pub u: BigInt,
    pub t: BigInt,
    pub big_t: FieldElement,
    pub phi: [FieldElement; 4],
    /// Denominators of `φ₁..φ₄` as built (`e`, `cde²`, `bcd²e³`, `bc²d³e⁴δ`).
    pub denominators: [BigInt; 4],
    pub certified: bool,
}

impl IntegralBasis {
    /// `(1, φ₁, φ₂, φ₃, φ₄)`.
    pub fn elements(&self) -> [FieldElement; DEGREE] {
        let [p1, p2, p3, p4] = self.phi.clone();
        [FieldElement::one(), p1, p2, p3, p4]
    }
}

/// Least non-negative `u` with `5u ≡ 1 (mod Δ)`.
pub fn compute_u(big_delta: &BigInt) -> Result<BigInt> {
    mod_inverse(&BigInt::from(5), big_delta).ok_or_else(|| {
        Error::Internal(format!("5 is not invertible modulo {big_delta}"))
    })
}

/// The least non-negative residue modulo `Δδ²` of
/// `(n²+3n+4)(11n⁵+110n⁴+440n³+903n²+940n+390)Δ − u n²(11n³+55n²+110n+199)δ²`.
///
/// Checks `t ≡ −un² (mod Δ)` and `t ≡ −(n²+3n+4) (mod δ²)` before returning.
pub fn compute_t(n: &BigInt, big_delta: &BigInt, delta: &BigInt, u: &BigInt) -> Result<BigInt> {
    let poly = |cs: &[i64]| cs.iter().fold(BigInt::zero(), |acc, &c| acc * n + c);
    let q = poly(&[1, 3, 4]);
    let delta_sq = delta * delta;
    let value = &q * poly(&[11, 110, 440, 903, 940, 390]) * big_delta
        - u * n * n * poly(&[11, 55, 110, 199]) * &delta_sq;
    let modulus = big_delta * &delta_sq;
    let t = value.mod_floor(&modulus);

    if !(&t + u * n * n).is_multiple_of(big_delta) {
        return Err(Error::Internal(format!("t ≢ −un² (mod Δ) for n = {n}")));
    }
    if !(&t + &q).is_multiple_of(&delta_sq) {
        return Err(Error::Internal(format!("t ≢ −(n²+3n+4) (mod δ²) for n = {n}")));
    }
    Ok(t)
}

/// `T = (f_n(ρ) − f_n(t))/(ρ − t)`, expanded by synthetic division.
pub fn compute_big_t(n: &BigInt, t: &BigInt) -> FieldElement {
    let f = lehmer_coefficients(n);
    let mut c: [BigInt; DEGREE] = Default::default();
    c[DEGREE - 1] = BigInt::one();
    for j in (0..DEGREE - 1).rev() {
        c[j] = &c[j + 1] * t + &f[j + 1];
    }
    FieldElement::from_integers(c)
}

/// Builds and certifies the basis. Requires `5 ∤ n`.
pub fn build_integral_basis(ctx: &FieldContext, inv: &FieldInvariants) -> Result<IntegralBasis> {
    inv.require_tame()?;
    let n = ctx.n();
    let u = compute_u(&inv.big_delta)?;
    let t = compute_t(n, &inv.big_delta, &inv.delta, &u)?;
    let big_t = compute_big_t(n, &t);

    let Abcde { b, c, d, e, .. } = &inv.abcde;
    let denominators = [
        e.clone(),
        c * d * e.pow(2),
        b * c * d.pow(2) * e.pow(3),
        b * c.pow(2) * d.pow(3) * e.pow(4) * &inv.delta,
    ];
    let rho_t = &FieldElement::rho() - &FieldElement::from_int(t.clone());
    let r2 = ctx.mul(&rho_t, &rho_t);
    let r3 = ctx.mul(&r2, &rho_t);
    let phi = [
        rho_t.div_int(&denominators[0]),
        r2.div_int(&denominators[1]),
        r3.div_int(&denominators[2]),
        big_t.div_int(&denominators[3]),
    ];
    let mut basis = IntegralBasis { u, t, big_t, phi, denominators, certified: false };
    basis.certified = certify_basis(ctx, &basis.elements(), &inv.conductor);
    if !basis.certified {
        return Err(Error::CertificationFailed(format!("integral basis for n = {n}")));
    }
    Ok(basis)
}

/// Convenience wrapper: factors `Δ_n` (with hints), builds `K_n` and the basis.
pub fn integral_basis_for(n: &BigInt, hints: &[BigInt]) -> Result<(FieldContext, FieldInvariants, IntegralBasis)> {
    let inv = FieldInvariants::compute(n, hints, FactorBudget::default())?;
    inv.require_tame()?;
    let ctx = FieldContext::new(n)?;
    let basis = build_integral_basis(&ctx, &inv)?;
    Ok((ctx, inv, basis))
}

/// Whether `xs` is a basis of the ring of integers: all elements integral and
/// `d(xs) = 𝔣⁴`.
pub fn certify_basis(ctx: &FieldContext, xs: &[FieldElement; DEGREE], conductor: &BigInt) -> bool {
    xs.iter().all(|x| ctx.is_integral(x))
        && ctx.disc_of_tuple(xs) == BigRational::from(conductor.pow(4))
}

fn coordinate_matrix(xs: &[FieldElement; DEGREE]) -> RatMatrix {
    let cols: Vec<[BigRational; DEGREE]> = xs.iter().map(FieldElement::coords).collect();
    (0..DEGREE).map(|i| (0..DEGREE).map(|j| cols[j][i].clone()).collect()).collect()
}

/// The matrix `R` with `(from) R = (to)`, i.e. column `j` holds the
/// coordinates of `to[j]` on `from`. `None` if `from` is not a basis.
pub fn transition_matrix(from: &[FieldElement; DEGREE], to: &[FieldElement; DEGREE]) -> Option<RatMatrix> {
    let inv = inverse_rat(&coordinate_matrix(from))?;
    Some(mat_mul_rat(&inv, &coordinate_matrix(to)))
}

/// `det R` for [`transition_matrix`]; `±1` with integer entries for two integral bases.
pub fn transition_determinant(from: &[FieldElement; DEGREE], to: &[FieldElement; DEGREE]) -> Option<BigRational> {
    transition_matrix(from, to).map(|r| det_rat(&r))
}

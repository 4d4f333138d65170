//! Generators of normal integral bases of `K_n` for `5 ∤ n`.
//!
//! `Δ_n` factors in `Z[ζ₅]` as `A B C D` with
//! `A = n+2+2ζ⁴+ζ²`, `B = n+2+2ζ²+ζ`, `C = n+2+2ζ³+ζ⁴`, `D = n+2+2ζ+ζ³`.
//! From divisors `α₁ | A`, `α₂ | B`, `α₃ | C` of norms `bc²d³e³`, `bcd²e²`,
//! `cde`, normalized to residue 1 modulo `1 − ζ`, put
//! `α₁α₂α₃ = β₀ + β₁ζ + β₂ζ² + β₃ζ³`. Then
//!
//! ```text
//! α = (β₀ρ + β₁ρ⁽¹⁾ + β₂ρ⁽²⁾ + β₃ρ⁽³⁾ − m) / (b c² d³ e⁴),
//! m = ((n/5) b c² d³ e⁴ − n² Σβ) / 5
//! ```
//!
//! generates a normal integral basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::factor::FactorBudget;
use crate::invariants::{legendre_n5, FieldInvariants};
use crate::quintic_field::{FieldContext, FieldElement};
use crate::zeta5::{split_prime, CycInt};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodFactors {
    pub a: CycInt,
    pub b: CycInt,
    pub c: CycInt,
    pub d: CycInt,
}

impl PeriodFactors {
    pub fn new(n: &BigInt) -> Self {
        let k = n + 2u32;
        let two = BigInt::from(2);
        let one = BigInt::one();
        let z = BigInt::zero();
        let five = |c: [&BigInt; 5]| CycInt::from_five(c.map(Clone::clone));
        PeriodFactors {
            a: five([&k, &z, &one, &z, &two]),
            b: five([&k, &one, &two, &z, &z]),
            c: five([&k, &z, &z, &two, &one]),
            d: five([&k, &two, &z, &one, &z]),
        }
    }

    pub fn product(&self) -> CycInt {
        &(&self.a * &self.b) * &(&self.c * &self.d)
    }
}

/// Exponents of a prime `p` with `v_p(Δ) = 5q + r` in `(α₁, α₂, α₃)`.
fn alpha_exponents(multiplicity: u32) -> [u32; 3] {
    let (q, r) = (multiplicity / 5, multiplicity % 5);
    let extra = match r {
        2 => [1, 1, 0],
        3 => [2, 1, 1],
        4 => [3, 2, 1],
        _ => [0, 0, 0],
    };
    [3 * q + extra[0], 2 * q + extra[1], q + extra[2]]
}

/// Multiplies `count` prime elements above `p`, each a conjugate dividing the
/// running cofactor of `target`, into `acc`.
fn absorb_prime(p: &BigInt, count: u32, target: &mut CycInt, acc: &mut CycInt) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let pi = split_prime(p)?;
    let conjugates: Vec<CycInt> = (1..=4).map(|j| pi.galois(j)).collect::<Result<_>>()?;
    for _ in 0..count {
        let hit = conjugates
            .iter()
            .find(|c| c.divides(target))
            .ok_or_else(|| Error::NoDividingConjugate(p.clone()))?;
        *target = CycInt::div_exact(target, hit)?;
        *acc = &*acc * hit;
    }
    Ok(())
}

/// `(α₁, α₂, α₃)`, each with residue 1 modulo `1 − ζ`.
pub fn compute_alphas(inv: &FieldInvariants, pf: &PeriodFactors) -> Result<[CycInt; 3]> {
    inv.require_tame()?;
    let mut targets = [pf.a.clone(), pf.b.clone(), pf.c.clone()];
    let mut alphas = [CycInt::one(), CycInt::one(), CycInt::one()];
    for (p, &m) in &inv.factorization {
        let exps = alpha_exponents(m);
        for i in 0..3 {
            absorb_prime(p, exps[i], &mut targets[i], &mut alphas[i])?;
        }
    }
    let mut out = Vec::with_capacity(3);
    for a in alphas {
        out.push(a.unit_normalize()?);
    }
    Ok(out.try_into().expect("three alphas"))
}

/// `β` from the coordinates of `α₁α₂α₃` and the integer `m`.
pub fn compute_beta_m(product: &CycInt, inv: &FieldInvariants) -> Result<([BigInt; 4], BigInt)> {
    if product.residue().value() != 1 {
        return Err(Error::Internal(format!("{product} is not ≡ 1 mod (1 − ζ)")));
    }
    let beta = product.coords().clone();
    let legendre = legendre_n5(&inv.n)?;
    let sum: BigInt = beta.iter().sum();
    let numer = inv.nib_denominator() * legendre - &inv.n * &inv.n * sum;
    let (m, rem) = numer.div_rem(&BigInt::from(5));
    if !rem.is_zero() {
        return Err(Error::NonIntegralM(inv.n.clone()));
    }
    Ok((beta, m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NibGenerator {
    pub beta: [BigInt; 4],
    pub m: BigInt,
    pub denom: BigInt,
    pub alpha: FieldElement,
    pub certified: bool,
}

impl NibGenerator {
    /// `(β₀ρ + β₁ρ⁽¹⁾ + β₂ρ⁽²⁾ + β₃ρ⁽³⁾ − m)/denom`, uncertified.
    pub fn from_parts(ctx: &FieldContext, beta: [BigInt; 4], m: BigInt, denom: BigInt) -> Self {
        let conj = ctx.sigma_powers();
        let mut acc = FieldElement::from_int(-m.clone());
        for (i, bi) in beta.iter().enumerate() {
            acc = &acc + &conj[i].scale(bi);
        }
        let alpha = acc.div_int(&denom);
        NibGenerator { beta, m, denom, alpha, certified: false }
    }
}

pub fn build_nib_generator(ctx: &FieldContext, inv: &FieldInvariants) -> Result<NibGenerator> {
    inv.require_tame()?;
    let pf = PeriodFactors::new(&inv.n);
    let [a1, a2, a3] = compute_alphas(inv, &pf)?;
    let product = &(&a1 * &a2) * &a3;
    let (beta, m) = compute_beta_m(&product, inv)?;
    let mut generator = NibGenerator::from_parts(ctx, beta, m, inv.nib_denominator());
    generator.certified = certify_nib(ctx, &generator.alpha, &inv.conductor);
    if !generator.certified {
        return Err(Error::CertificationFailed(format!(
            "normal integral basis generator for n = {}",
            inv.n
        )));
    }
    Ok(generator)
}

/// Factors `Δ_n` (with hints), builds `K_n` and a certified generator.
pub fn nib_generator_for(
    n: &BigInt,
    hints: &[BigInt],
    budget: FactorBudget,
) -> Result<(FieldContext, FieldInvariants, NibGenerator)> {
    let inv = FieldInvariants::compute(n, hints, budget)?;
    inv.require_tame()?;
    let ctx = FieldContext::new(n)?;
    let generator = build_nib_generator(&ctx, &inv)?;
    Ok((ctx, inv, generator))
}

/// Whether the conjugates of `x` form an integral basis: `x` integral and
/// `d(x, σx, …, σ⁴x) = 𝔣⁴`.
pub fn certify_nib(ctx: &FieldContext, x: &FieldElement, conductor: &BigInt) -> bool {
    ctx.is_integral(x) && ctx.disc_of_tuple(&ctx.conjugates(x)) == BigRational::from(conductor.pow(4))
}

/// `v + ρ` with `v = (n² − (n/5))/5`, for square-free `Δ_n`.
pub fn squarefree_generator(inv: &FieldInvariants) -> Result<FieldElement> {
    inv.require_tame()?;
    if !inv.is_squarefree() {
        return Err(Error::NotSquareFree(inv.n.clone()));
    }
    let l = legendre_n5(&inv.n)?;
    let v = (&inv.n * &inv.n - l) / 5;
    Ok(&FieldElement::from_int(v) + &FieldElement::rho())
}

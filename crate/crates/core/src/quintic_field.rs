//! Exact arithmetic in `K_n = Q[X]/(f_n(X))` for Emma Lehmer's quintic
//!
//! `f_n(X) = X⁵ + n²X⁴ − (2n³+6n²+10n+10)X³ + (n⁴+5n³+11n²+15n+5)X² + (n³+4n²+10n+10)X + 1`.
//!
//! Elements are degree-<5 polynomials in a root `ρ`, held as integer
//! numerators over one positive common denominator. The generator `σ` of
//! the Galois group is the rational map
//! `σ(ρ) = (n + 2 + nρ − ρ²) / (1 + (n + 2)ρ)`, and its powers are cached
//! as linear maps on the power basis.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{char_poly_int, det_int, IntMatrix};

pub const DEGREE: usize = 5;

/// `(num[0] + num[1] ρ + … + num[4] ρ⁴) / den`, reduced so that `den > 0`
/// and the numerators and denominator share no common factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: [BigInt; DEGREE],
    den: BigInt,
}

impl FieldElement {
    pub fn new(num: [BigInt; DEGREE], den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut x = FieldElement { num, den };
        x.normalize();
        x
    }

    pub fn from_integers(num: [BigInt; DEGREE]) -> Self {
        FieldElement { num, den: BigInt::one() }
    }

    pub fn from_coords(coords: &[BigRational; DEGREE]) -> Self {
        let den = coords.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let num = std::array::from_fn(|i| coords[i].numer() * (&den / coords[i].denom()));
        FieldElement::new(num, den)
    }

    pub fn from_int(k: impl Into<BigInt>) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = k.into();
        FieldElement::from_integers(num)
    }

    pub fn from_rational(q: &BigRational) -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[0] = q.numer().clone();
        FieldElement::new(num, q.denom().clone())
    }

    pub fn zero() -> Self {
        FieldElement::from_int(0)
    }

    pub fn one() -> Self {
        FieldElement::from_int(1)
    }

    /// The root `ρ` itself.
    pub fn rho() -> Self {
        let mut num: [BigInt; DEGREE] = Default::default();
        num[1] = BigInt::one();
        FieldElement::from_integers(num)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for v in self.num.iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |acc, v| acc.gcd(v));
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            for v in self.num.iter_mut() {
                *v /= &g;
            }
        }
    }

    pub fn numerators(&self) -> &[BigInt; DEGREE] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coords(&self) -> [BigRational; DEGREE] {
        std::array::from_fn(|i| BigRational::new(self.num[i].clone(), self.den.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    /// The rational number this element equals, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn scale(&self, k: &BigInt) -> FieldElement {
        FieldElement::new(self.num.clone().map(|v| v * k), self.den.clone())
    }

    pub fn scale_rational(&self, q: &BigRational) -> FieldElement {
        FieldElement::new(self.num.clone().map(|v| v * q.numer()), &self.den * q.denom())
    }

    pub fn div_int(&self, k: &BigInt) -> FieldElement {
        FieldElement::new(self.num.clone(), &self.den * k)
    }

    fn combine(&self, rhs: &FieldElement, sign: i8) -> FieldElement {
        let l = self.den.lcm(&rhs.den);
        let (ka, kb) = (&l / &self.den, &l / &rhs.den);
        let num = std::array::from_fn(|i| {
            let b = &rhs.num[i] * &kb;
            if sign > 0 {
                &self.num[i] * &ka + b
            } else {
                &self.num[i] * &ka - b
            }
        });
        FieldElement::new(num, l)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.combine(rhs, 1)
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.combine(rhs, -1)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            num: self.num.clone().map(|v| -v),
            den: self.den.clone(),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const POW: [&str; DEGREE] = ["", "ρ", "ρ^2", "ρ^3", "ρ^4"];
        let mut body = String::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if body.is_empty() {
                if c.is_negative() {
                    body.push('-');
                }
            } else {
                body.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                body.push_str(&a.to_string());
            }
            body.push_str(POW[i]);
        }
        if body.is_empty() {
            body.push('0');
        }
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

/// A linear map on the power basis, as an integer matrix over a common
/// positive denominator. Column `j` is the image of `ρʲ`.
#[derive(Clone, Debug)]
struct LinearMap {
    mat: IntMatrix,
    den: BigInt,
}

impl LinearMap {
    fn from_columns(cols: &[FieldElement]) -> Self {
        let den = cols.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.den));
        let mut mat = vec![vec![BigInt::zero(); DEGREE]; DEGREE];
        for (j, c) in cols.iter().enumerate() {
            let k = &den / &c.den;
            for i in 0..DEGREE {
                mat[i][j] = &c.num[i] * &k;
            }
        }
        LinearMap { mat, den }
    }

    fn apply(&self, x: &FieldElement) -> FieldElement {
        let num = std::array::from_fn(|i| {
            (0..DEGREE).fold(BigInt::zero(), |acc, j| acc + &self.mat[i][j] * &x.num[j])
        });
        FieldElement::new(num, &self.den * &x.den)
    }
}

/// The field `K_n` together with its Galois action.
#[derive(Clone, Debug)]
pub struct FieldContext {
    n: BigInt,
    f: [BigInt; DEGREE + 1],
    sigma_image: FieldElement,
    sigma_powers: [FieldElement; DEGREE],
    sigma_maps: Vec<LinearMap>,
    power_traces: Vec<BigInt>,
    poly_disc: BigInt,
}

/// Coefficients of `f_n` from the constant term up to the leading 1.
pub fn lehmer_coefficients(n: &BigInt) -> [BigInt; DEGREE + 1] {
    let n2 = n * n;
    let n3 = &n2 * n;
    let n4 = &n3 * n;
    [
        BigInt::one(),
        &n3 + &n2 * 4u32 + n * 10u32 + 10u32,
        &n4 + &n3 * 5u32 + &n2 * 11u32 + n * 15u32 + 5u32,
        -(&n3 * 2u32 + &n2 * 6u32 + n * 10u32 + 10u32),
        n2,
        BigInt::one(),
    ]
}

/// Evaluates an integer polynomial (constant term first) at an integer.
pub fn eval_int_poly(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

impl FieldContext {
    /// Builds `K_n`, computing `σ(ρ)` by inverting `1 + (n+2)ρ` modulo `f_n`.
    ///
    /// Fails only if the internal consistency checks (`f_n(σρ) = 0`,
    /// `σ⁵ = id`) do not hold, which would indicate an arithmetic bug.
    pub fn new(n: &BigInt) -> Result<Self> {
        let f = lehmer_coefficients(n);
        let mut ctx = FieldContext {
            n: n.clone(),
            f,
            sigma_image: FieldElement::rho(),
            sigma_powers: std::array::from_fn(|_| FieldElement::rho()),
            sigma_maps: Vec::new(),
            power_traces: Vec::new(),
            poly_disc: BigInt::zero(),
        };

        let two_plus_n = n + 2u32;
        let numerator = FieldElement::from_integers([
            two_plus_n.clone(),
            n.clone(),
            BigInt::from(-1),
            BigInt::zero(),
            BigInt::zero(),
        ]);
        let denominator = FieldElement::from_integers([
            BigInt::one(),
            two_plus_n,
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
        ]);
        let inv = ctx
            .inverse(&denominator)
            .ok_or_else(|| Error::Internal("1 + (n+2)ρ is not invertible".into()))?;
        let sigma = ctx.mul(&numerator, &inv);

        if !ctx.eval_int_poly_at(&ctx.f, &sigma).is_zero() {
            return Err(Error::Internal(format!("f_n(σ(ρ)) ≠ 0 for n = {n}")));
        }

        // σ^i(ρ) = σ^{i-1}(ρ) with ρ replaced by σ(ρ)
        let substitute = LinearMap::from_columns(&ctx.powers(&sigma));
        let mut images = vec![FieldElement::rho()];
        for i in 1..=DEGREE {
            images.push(substitute.apply(&images[i - 1]));
        }
        if images[DEGREE] != FieldElement::rho() {
            return Err(Error::Internal(format!("σ⁵ ≠ id for n = {n}")));
        }
        if images[..DEGREE].iter().skip(1).any(|s| *s == FieldElement::rho()) {
            return Err(Error::Internal(format!("σ has order < 5 for n = {n}")));
        }

        ctx.sigma_maps = images[..DEGREE]
            .iter()
            .map(|s| LinearMap::from_columns(&ctx.powers(s)))
            .collect();
        ctx.sigma_powers = std::array::from_fn(|i| images[i].clone());
        ctx.sigma_image = sigma;
        ctx.power_traces = newton_power_sums(&ctx.f, 2 * DEGREE - 1);
        let gram: IntMatrix = (0..DEGREE)
            .map(|i| (0..DEGREE).map(|j| ctx.power_traces[i + j].clone()).collect())
            .collect();
        ctx.poly_disc = det_int(&gram);
        Ok(ctx)
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// Coefficients of `f_n`, constant term first.
    pub fn f_coeffs(&self) -> &[BigInt; DEGREE + 1] {
        &self.f
    }

    pub fn sigma_image(&self) -> &FieldElement {
        &self.sigma_image
    }

    /// `σⁱ(ρ)` for `i = 0..4`.
    pub fn sigma_powers(&self) -> &[FieldElement; DEGREE] {
        &self.sigma_powers
    }

    /// `disc(f_n)`, computed as the determinant of the trace form on `1, ρ, …, ρ⁴`.
    pub fn poly_disc(&self) -> &BigInt {
        &self.poly_disc
    }

    fn reduce(&self, mut p: Vec<BigInt>) -> [BigInt; DEGREE] {
        for k in (DEGREE..p.len()).rev() {
            let c = std::mem::take(&mut p[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..DEGREE {
                p[k - DEGREE + i] -= &c * &self.f[i];
            }
        }
        p.truncate(DEGREE);
        p.resize(DEGREE, BigInt::zero());
        p.try_into().expect("length is DEGREE")
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut p = vec![BigInt::zero(); 2 * DEGREE - 1];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                p[i + j] += x * y;
            }
        }
        FieldElement::new(self.reduce(p), &a.den * &b.den)
    }

    pub fn pow(&self, x: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = x.clone();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `1, x, x², x³, x⁴`.
    fn powers(&self, x: &FieldElement) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::one()];
        for i in 1..DEGREE {
            out.push(self.mul(&out[i - 1], x));
        }
        out
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in `Q[X]`.
    pub fn inverse(&self, x: &FieldElement) -> Option<FieldElement> {
        if x.is_zero() {
            return None;
        }
        let to_rat = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from(c.clone())).collect()
        };
        let mut r0 = to_rat(&self.f);
        let mut r1: Vec<BigRational> = x.coords().to_vec();
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        trim(&mut r1);
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is the gcd; f_n irreducible makes it a nonzero constant
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].clone();
        let mut coords: [BigRational; DEGREE] = std::array::from_fn(|_| BigRational::zero());
        for (i, v) in s0.iter().enumerate() {
            coords[i] = v / &c;
        }
        Some(FieldElement::from_coords(&coords))
    }

    /// Evaluates an integer polynomial (constant term first) at `x`.
    pub fn eval_int_poly_at(&self, coeffs: &[BigInt], x: &FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(FieldElement::zero(), |acc, c| {
            &self.mul(&acc, x) + &FieldElement::from_int(c.clone())
        })
    }

    /// `σⁱ(x)`; `i` is taken modulo 5.
    pub fn apply_sigma(&self, x: &FieldElement, i: i64) -> FieldElement {
        let i = i.rem_euclid(DEGREE as i64) as usize;
        if i == 0 {
            return x.clone();
        }
        self.sigma_maps[i].apply(x)
    }

    /// `(x, σx, σ²x, σ³x, σ⁴x)`.
    pub fn conjugates(&self, x: &FieldElement) -> [FieldElement; DEGREE] {
        std::array::from_fn(|i| self.apply_sigma(x, i as i64))
    }

    fn mult_matrix_int(&self, num: &[BigInt; DEGREE]) -> IntMatrix {
        let mut cols = Vec::with_capacity(DEGREE);
        let mut cur = num.clone();
        for _ in 0..DEGREE {
            cols.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur.iter().cloned());
            cur = self.reduce(shifted);
        }
        (0..DEGREE)
            .map(|i| (0..DEGREE).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Matrix of multiplication by `x` on the basis `1, ρ, …, ρ⁴`; column `j` is `x ρʲ`.
    pub fn mult_matrix(&self, x: &FieldElement) -> Vec<Vec<BigRational>> {
        self.mult_matrix_int(&x.num)
            .into_iter()
            .map(|row| row.into_iter().map(|v| BigRational::new(v, x.den.clone())).collect())
            .collect()
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let s: BigInt = (0..DEGREE).map(|j| &x.num[j] * &self.power_traces[j]).sum();
        BigRational::new(s, x.den.clone())
    }

    /// Characteristic polynomial of `x`, constant term first, monic of degree 5.
    pub fn char_poly(&self, x: &FieldElement) -> [BigRational; DEGREE + 1] {
        let p = char_poly_int(&self.mult_matrix_int(&x.num));
        // det(X − N/d) = d⁻⁵ det(dX − N): the coefficient of Xⁱ is pᵢ / d^(5−i)
        std::array::from_fn(|i| BigRational::new(p[i].clone(), x.den.pow((DEGREE - i) as u32)))
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        let c = &self.char_poly(x)[0];
        -c.clone()
    }

    /// Whether `x` is an algebraic integer, i.e. its characteristic polynomial lies in `Z[X]`.
    pub fn is_integral(&self, x: &FieldElement) -> bool {
        x.den.is_one() || self.char_poly(x).iter().all(|c| c.is_integer())
    }

    /// `d(x₁, …, x₅) = det(σⁱ(x_j))²`, computed as `det(M)² · disc(f_n)` with
    /// `M` the coordinate matrix of the `x_j` on the power basis.
    pub fn disc_of_tuple(&self, xs: &[FieldElement; DEGREE]) -> BigRational {
        let den = xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.den));
        let mat: IntMatrix = (0..DEGREE)
            .map(|i| (0..DEGREE).map(|j| &xs[j].num[i] * (&den / &xs[j].den)).collect())
            .collect();
        let det = det_int(&mat);
        BigRational::new(&det * &det * &self.poly_disc, den.pow(2 * DEGREE as u32))
    }
}

/// Power sums `s_k = Σ ρ⁽ⁱ⁾ᵏ` for `k = 0..=max` via Newton's identities.
fn newton_power_sums(f: &[BigInt; DEGREE + 1], max: usize) -> Vec<BigInt> {
    // c_i is the coefficient of X^{5−i}
    let c = |i: usize| &f[DEGREE - i];
    let mut s = vec![BigInt::from(DEGREE as u32)];
    for k in 1..=max {
        let mut v = BigInt::zero();
        for i in 1..=k.min(DEGREE) {
            if i < k {
                v -= c(i) * &s[k - i];
            }
        }
        if k <= DEGREE {
            v -= c(k) * BigInt::from(k);
        }
        s.push(v);
    }
    s
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &coef * bi;
        }
        q[shift] = coef;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

//! Published reference values, embedded verbatim from `data/fixtures.json`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nib::NibGenerator;
use crate::quintic_field::{FieldContext, FieldElement, DEGREE};

const EMBEDDED: &str = include_str!("../data/fixtures.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Table1,
    Table2,
    ExampleN14,
    ExampleN44,
    ExampleNminus1,
    ExampleD,
    ExampleE,
    ExampleTwo,
}

/// A reference generator `(β₀ρ + β₁ρ⁽¹⁾ + β₂ρ⁽²⁾ + β₃ρ⁽³⁾ + constant)/denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRow {
    pub source: Source,
    pub n: String,
    /// `[prime, exponent]` pairs of `Δ_n`.
    pub delta_factored: Vec<(String, u32)>,
    pub conductor: String,
    pub beta: [String; 4],
    pub constant: String,
    pub denominator: String,
    pub denominator_factored: String,
}

/// A correction to one coefficient of a reference row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correction {
    pub index: usize,
    pub value: String,
}

/// A reference `ξ_k = (constant + Σ x_t ρ⁽ᵗ⁾)/denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiRow {
    pub source: Source,
    pub n: String,
    pub k: i64,
    pub constant: String,
    pub conjugate_coeffs: [String; DEGREE],
    pub denominator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correction: Option<Correction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalVector {
    pub coeffs: [String; DEGREE],
    pub denominator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeBasis {
    pub v4: RationalVector,
    pub v5: RationalVector,
    /// `R` with `(1, ρ, ρ², v₄, v₅) R = (1, φ₁, φ₂, φ₃, φ₄)`, row-major.
    pub transition: [[String; DEGREE]; DEGREE],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralBasisRow {
    pub source: Source,
    pub n: String,
    pub u: String,
    pub t: String,
    pub big_t: [String; DEGREE],
    pub denominators: [String; 4],
    pub conductor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternative_basis: Option<AlternativeBasis>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugateRow {
    pub source: Source,
    pub n: String,
    pub conductor: String,
    /// `ρ⁽ⁱ⁾` on the power basis, `i = 0..4`.
    pub conjugates: [[String; DEGREE]; DEGREE],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    pub generators: Vec<GeneratorRow>,
    pub table2: Vec<XiRow>,
    pub integral_bases: Vec<IntegralBasisRow>,
    pub n_minus_one: ConjugateRow,
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Internal(format!("bad integer in fixture: {s:?}")))
}

fn parse_vec<const N: usize>(v: &[String; N]) -> Result<[BigInt; N]> {
    let parsed: Vec<BigInt> = v.iter().map(|s| parse_int(s)).collect::<Result<_>>()?;
    Ok(parsed.try_into().expect("length preserved"))
}

impl Fixtures {
    pub fn embedded() -> Self {
        Fixtures::from_json(EMBEDDED).expect("embedded fixtures are valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Internal(format!("fixture file: {e}")))
    }

    pub fn generator_for(&self, n: &BigInt) -> Option<&GeneratorRow> {
        self.generators.iter().find(|g| parse_int(&g.n).ok().as_ref() == Some(n))
    }
}

impl GeneratorRow {
    pub fn n(&self) -> Result<BigInt> {
        parse_int(&self.n)
    }

    pub fn conductor(&self) -> Result<BigInt> {
        parse_int(&self.conductor)
    }

    /// The primes of `Δ_n`, usable as factoring hints.
    pub fn primes(&self) -> Result<Vec<BigInt>> {
        self.delta_factored.iter().map(|(p, _)| parse_int(p)).collect()
    }

    pub fn delta_product(&self) -> Result<BigInt> {
        let mut acc = BigInt::from(1);
        for (p, e) in &self.delta_factored {
            acc *= parse_int(p)?.pow(*e);
        }
        Ok(acc)
    }

    /// The reference generator; `m` is minus the reference constant.
    pub fn to_generator(&self, ctx: &FieldContext) -> Result<NibGenerator> {
        let beta = parse_vec(&self.beta)?;
        let m = -parse_int(&self.constant)?;
        Ok(NibGenerator::from_parts(ctx, beta, m, parse_int(&self.denominator)?))
    }
}

impl XiRow {
    fn element_with(&self, ctx: &FieldContext, coeffs: &[BigInt; DEGREE]) -> Result<FieldElement> {
        let conj = ctx.sigma_powers();
        let mut acc = FieldElement::from_int(parse_int(&self.constant)?);
        for (t, c) in coeffs.iter().enumerate() {
            acc = &acc + &conj[t].scale(c);
        }
        Ok(acc.div_int(&parse_int(&self.denominator)?))
    }

    /// The element exactly as given.
    pub fn reference_element(&self, ctx: &FieldContext) -> Result<FieldElement> {
        self.element_with(ctx, &parse_vec(&self.conjugate_coeffs)?)
    }

    /// The element with the recorded correction applied, if any.
    pub fn corrected_element(&self, ctx: &FieldContext) -> Result<Option<FieldElement>> {
        let Some(fix) = &self.correction else {
            return Ok(None);
        };
        let mut coeffs = parse_vec(&self.conjugate_coeffs)?;
        if fix.index >= DEGREE {
            return Err(Error::Internal(format!("correction index {} out of range", fix.index)));
        }
        coeffs[fix.index] = parse_int(&fix.value)?;
        self.element_with(ctx, &coeffs).map(Some)
    }
}

impl RationalVector {
    pub fn element(&self) -> Result<FieldElement> {
        Ok(FieldElement::new(parse_vec(&self.coeffs)?, parse_int(&self.denominator)?))
    }
}

impl IntegralBasisRow {
    pub fn big_t(&self) -> Result<FieldElement> {
        Ok(FieldElement::from_integers(parse_vec(&self.big_t)?))
    }

    pub fn denominators(&self) -> Result<[BigInt; 4]> {
        parse_vec(&self.denominators)
    }
}

impl AlternativeBasis {
    pub fn transition(&self) -> Result<Vec<Vec<BigInt>>> {
        self.transition.iter().map(|row| parse_vec(row).map(|r| r.to_vec())).collect()
    }
}

impl ConjugateRow {
    pub fn conjugates(&self) -> Result<Vec<FieldElement>> {
        self.conjugates
            .iter()
            .map(|c| parse_vec(c).map(FieldElement::from_integers))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::big_delta;

    #[test]
    fn embedded_counts() {
        let f = Fixtures::embedded();
        let table1 = f.generators.iter().filter(|g| g.source == Source::Table1).count();
        assert_eq!(table1, 34);
        assert_eq!(f.generators.len(), 37);
        assert_eq!(f.table2.len(), 11);
        assert_eq!(f.integral_bases.len(), 2);
    }

    #[test]
    fn factorizations_reassemble() {
        for g in &Fixtures::embedded().generators {
            assert_eq!(g.delta_product().unwrap(), big_delta(&g.n().unwrap()), "n = {}", g.n);
        }
    }

    #[test]
    fn lookup() {
        let f = Fixtures::embedded();
        let row = f.generator_for(&BigInt::from(14)).unwrap();
        assert_eq!(row.beta, ["6", "7", "8", "10"].map(String::from));
        assert!(f.generator_for(&BigInt::from(15)).is_none());
    }

    #[test]
    fn round_trip() {
        let f = Fixtures::embedded();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(Fixtures::from_json(&text).unwrap(), f);
        assert!(Fixtures::from_json("{}").is_err());
    }
}

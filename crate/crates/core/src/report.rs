//! Reports behind the command-line tool: per-`n` analysis, enumeration and
//! verification of the published fixtures.
//!
//! Every integer and rational is serialized as a decimal string.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::FactorBudget;
use crate::fixtures::{parse_int, Fixtures, GeneratorRow, IntegralBasisRow, Source, XiRow};
use crate::integral_basis::{build_integral_basis, certify_basis, transition_matrix};
use crate::invariants::FieldInvariants;
use crate::nib::{build_nib_generator, certify_nib, NibGenerator};
use crate::nib_enum::{enumerate, orbit_match, xi, GroupRingUnit};
use crate::quintic_field::{FieldContext, FieldElement, DEGREE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_WILD: i32 = 2;
pub const EXIT_FACTORING: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub const DEFAULT_ORBIT_BOUND: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub prime: String,
    pub exponent: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub sign: String,
    pub ell: String,
    pub k: String,
}

impl From<GroupRingUnit> for Witness {
    fn from(u: GroupRingUnit) -> Self {
        Witness {
            sign: if u.sign > 0 { "+".into() } else { "-".into() },
            ell: u.ell.to_string(),
            k: u.k.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub n: String,
    /// `"certified"`, `"wild"` or `"failed"`.
    pub status: String,
    pub delta: String,
    #[serde(rename = "Delta")]
    pub big_delta: String,
    pub factorization: Vec<FactorEntry>,
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub conductor: String,
    pub field_disc: String,
    pub u: Option<String>,
    pub t: Option<String>,
    /// Coordinates of `1, φ₁, …, φ₄` on `1, ρ, …, ρ⁴`.
    pub integral_basis: Option<Vec<[String; DEGREE]>>,
    pub beta: Option<[String; 4]>,
    pub m: Option<String>,
    pub denom: Option<String>,
    /// Coordinates of the generator on `1, ρ, …, ρ⁴`.
    pub nib_generator: Option<[String; DEGREE]>,
    pub certified: bool,
    pub orbit_witness: Option<Witness>,
    pub message: Option<String>,
}

fn coords_strings(x: &FieldElement) -> [String; DEGREE] {
    x.coords().map(|q| q.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.parse()
        .map_err(|_| Error::Internal(format!("bad rational {s:?}")))
}

impl ReportRecord {
    fn from_invariants(inv: &FieldInvariants) -> Self {
        let s = |x: &BigInt| x.to_string();
        ReportRecord {
            n: s(&inv.n),
            status: String::new(),
            delta: s(&inv.delta),
            big_delta: s(&inv.big_delta),
            factorization: inv
                .factorization
                .iter()
                .map(|(p, e)| FactorEntry { prime: p.to_string(), exponent: e.to_string() })
                .collect(),
            a: s(&inv.abcde.a),
            b: s(&inv.abcde.b),
            c: s(&inv.abcde.c),
            d: s(&inv.abcde.d),
            e: s(&inv.abcde.e),
            conductor: s(&inv.conductor),
            field_disc: s(&inv.field_disc),
            u: None,
            t: None,
            integral_basis: None,
            beta: None,
            m: None,
            denom: None,
            nib_generator: None,
            certified: false,
            orbit_witness: None,
            message: None,
        }
    }

    /// Re-runs the certification of the stored generator from the record alone.
    pub fn recertify(&self) -> Result<bool> {
        let Some(coords) = &self.nib_generator else {
            return Ok(false);
        };
        let n = parse_int(&self.n)?;
        let ctx = FieldContext::new(&n)?;
        let q: Vec<BigRational> = coords.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
        let x = FieldElement::from_coords(&q.try_into().expect("five coordinates"));
        Ok(certify_nib(&ctx, &x, &parse_int(&self.conductor)?))
    }

    pub fn exit_code(&self) -> i32 {
        match self.status.as_str() {
            "certified" => EXIT_OK,
            "wild" => EXIT_WILD,
            _ => EXIT_VERIFY,
        }
    }
}

/// Maps library errors to the tool's exit codes.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::WildRamification(_) => EXIT_WILD,
        Error::FactorizationIncomplete { .. } => EXIT_FACTORING,
        _ => EXIT_VERIFY,
    }
}

/// Full analysis of `K_n`. The orbit witness is filled in when a published
/// generator for `n` is present in `fixtures`.
pub fn analyze(
    n: &BigInt,
    hints: &[BigInt],
    orbit_bound: u32,
    fixtures: Option<&Fixtures>,
) -> Result<ReportRecord> {
    let inv = FieldInvariants::compute(n, hints, FactorBudget::default())?;
    let mut rec = ReportRecord::from_invariants(&inv);
    if !inv.tame {
        rec.status = "wild".into();
        rec.message = Some(format!(
            "5 divides n = {n}: K_n is wildly ramified at 5 and has no normal integral basis"
        ));
        return Ok(rec);
    }
    let ctx = FieldContext::new(n)?;
    let ib = build_integral_basis(&ctx, &inv)?;
    rec.u = Some(ib.u.to_string());
    rec.t = Some(ib.t.to_string());
    rec.integral_basis = Some(ib.elements().iter().map(coords_strings).collect());

    let gen = build_nib_generator(&ctx, &inv)?;
    rec.beta = Some(gen.beta.clone().map(|b| b.to_string()));
    rec.m = Some(gen.m.to_string());
    rec.denom = Some(gen.denom.to_string());
    rec.nib_generator = Some(coords_strings(&gen.alpha));
    rec.certified = gen.certified;
    rec.status = if gen.certified { "certified" } else { "failed" }.into();

    if let Some(row) = fixtures.and_then(|f| f.generator_for(n)) {
        let reference = row.to_generator(&ctx)?;
        rec.orbit_witness = orbit_match(&ctx, &gen.alpha, &reference.alpha, orbit_bound).map(Witness::from);
    }
    Ok(rec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumLine {
    pub n: String,
    pub sign: String,
    pub ell: String,
    pub k: String,
    pub generator: [String; DEGREE],
    pub certified: bool,
}

/// Everything needed to stream generators for one `n`.
pub struct Enumerator {
    pub ctx: FieldContext,
    pub inv: FieldInvariants,
    pub generator: NibGenerator,
}

impl Enumerator {
    pub fn new(n: &BigInt, hints: &[BigInt]) -> Result<Self> {
        let inv = FieldInvariants::compute(n, hints, FactorBudget::default())?;
        inv.require_tame()?;
        let ctx = FieldContext::new(n)?;
        let generator = build_nib_generator(&ctx, &inv)?;
        Ok(Enumerator { ctx, inv, generator })
    }

    pub fn lines(&self, k_min: i64, k_max: i64) -> impl Iterator<Item = EnumLine> + '_ {
        enumerate(&self.ctx, &self.generator, k_min, k_max).map(move |(u, x)| {
            let w = Witness::from(u);
            EnumLine {
                n: self.inv.n.to_string(),
                sign: w.sign,
                ell: w.ell,
                k: w.k,
                certified: certify_nib(&self.ctx, &x, &self.inv.conductor),
                generator: coords_strings(&x),
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowStatus {
    Pass,
    /// The reference value is internally inconsistent; a recorded one-coefficient
    /// correction reproduces our value.
    Erratum,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    pub label: String,
    pub n: String,
    pub status: RowStatus,
    pub detail: String,
    pub witness: Option<Witness>,
}

impl RowResult {
    fn new(label: String, n: &str, status: RowStatus, detail: String) -> Self {
        RowResult { label, n: n.into(), status, detail, witness: None }
    }
}

/// Row filter for `verify-table --only`: `n=<int>`, or a group name
/// (`table1`, `table2`, `examples`, `bases`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Only {
    N(BigInt),
    Group(String),
}

impl std::str::FromStr for Only {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Some(v) = s.strip_prefix("n=") {
            return v.parse().map(Only::N).map_err(|_| format!("bad n in {s:?}"));
        }
        match s {
            "table1" | "table2" | "examples" | "bases" => Ok(Only::Group(s.into())),
            _ => Err(format!("unknown filter {s:?}; use n=<int>, table1, table2, examples or bases")),
        }
    }
}

fn source_label(s: Source) -> &'static str {
    match s {
        Source::Table1 => "table1",
        Source::Table2 => "table2",
        Source::ExampleN14 | Source::ExampleN44 | Source::ExampleNminus1 => "bases",
        Source::ExampleD | Source::ExampleE | Source::ExampleTwo => "examples",
    }
}

fn keep(only: Option<&Only>, source: Source, n: &str) -> bool {
    match only {
        None => true,
        Some(Only::N(v)) => parse_int(n).ok().as_ref() == Some(v),
        Some(Only::Group(g)) => source_label(source) == g,
    }
}

enum Task<'a> {
    Generator(&'a GeneratorRow),
    Xi(&'a XiRow, Option<&'a GeneratorRow>),
    Basis(&'a IntegralBasisRow),
    Conjugates,
}

/// Checks every selected fixture row. Rows run in parallel; results keep fixture order.
pub fn verify_table(fixtures: &Fixtures, only: Option<&Only>, orbit_bound: u32) -> Vec<RowResult> {
    let mut tasks = Vec::new();
    for g in &fixtures.generators {
        if keep(only, g.source, &g.n) {
            tasks.push(Task::Generator(g));
        }
    }
    for r in &fixtures.table2 {
        if keep(only, r.source, &r.n) {
            let base = fixtures.generators.iter().find(|g| g.source == Source::Table1 && g.n == r.n);
            tasks.push(Task::Xi(r, base));
        }
    }
    for b in &fixtures.integral_bases {
        if keep(only, b.source, &b.n) {
            tasks.push(Task::Basis(b));
        }
    }
    let nm1 = &fixtures.n_minus_one;
    if keep(only, nm1.source, &nm1.n) {
        tasks.push(Task::Conjugates);
    }
    tasks
        .par_iter()
        .map(|t| {
            let outcome = match t {
                Task::Generator(g) => verify_generator(g, orbit_bound),
                Task::Xi(r, base) => verify_xi(r, *base, orbit_bound),
                Task::Basis(b) => verify_basis(b),
                Task::Conjugates => verify_conjugates(fixtures),
            };
            outcome.unwrap_or_else(|e| {
                let (label, n) = match t {
                    Task::Generator(g) => (format!("{:?} n={}", g.source, g.n), g.n.clone()),
                    Task::Xi(r, _) => (format!("Table2 k={}", r.k), r.n.clone()),
                    Task::Basis(b) => (format!("{:?}", b.source), b.n.clone()),
                    Task::Conjugates => ("ExampleNminus1".into(), nm1.n.clone()),
                };
                RowResult::new(label, &n, RowStatus::Fail, format!("error: {e}"))
            })
        })
        .collect()
}

fn disc_detail(ctx: &FieldContext, x: &FieldElement, conductor: &BigInt) -> String {
    if !ctx.is_integral(x) {
        return format!("not an algebraic integer (trace {})", ctx.trace(x));
    }
    let d = ctx.disc_of_tuple(&ctx.conjugates(x));
    format!("disc mismatch: got {d}, expected {}", conductor.pow(4))
}

fn verify_generator(row: &GeneratorRow, orbit_bound: u32) -> Result<RowResult> {
    let label = format!("{:?} n={}", row.source, row.n);
    let n = row.n()?;
    let hints = row.primes()?;
    let inv = FieldInvariants::compute(&n, &hints, FactorBudget::default())?;
    let fail = |detail: String| Ok(RowResult::new(label.clone(), &row.n, RowStatus::Fail, detail));

    if row.delta_product()? != inv.big_delta {
        return fail(format!("reference factorization does not multiply to Δ = {}", inv.big_delta));
    }
    if row.conductor()? != inv.conductor {
        return fail(format!("conductor {} != computed {}", row.conductor, inv.conductor));
    }
    let ctx = FieldContext::new(&n)?;
    let reference = row.to_generator(&ctx)?;
    if !certify_nib(&ctx, &reference.alpha, &inv.conductor) {
        return fail(format!("reference generator fails: {}", disc_detail(&ctx, &reference.alpha, &inv.conductor)));
    }
    let ours = build_nib_generator(&ctx, &inv)?;
    match orbit_match(&ctx, &ours.alpha, &reference.alpha, orbit_bound) {
        Some(u) => {
            let mut r = RowResult::new(label, &row.n, RowStatus::Pass, format!("certified; witness {u}"));
            r.witness = Some(u.into());
            Ok(r)
        }
        None => fail(format!("reference generator certifies but no orbit match with |k| <= {orbit_bound}")),
    }
}

fn verify_xi(row: &XiRow, base: Option<&GeneratorRow>, orbit_bound: u32) -> Result<RowResult> {
    let label = format!("Table2 k={}", row.k);
    let fail = |detail: String| Ok(RowResult::new(label.clone(), &row.n, RowStatus::Fail, detail));
    let Some(base) = base else {
        return fail("no Table 1 generator for this n".into());
    };
    let n = row.n.parse::<BigInt>().map_err(|_| Error::Internal("bad n".into()))?;
    let inv = FieldInvariants::compute(&n, &base.primes()?, FactorBudget::default())?;
    let ctx = FieldContext::new(&n)?;
    let reference_gen = base.to_generator(&ctx)?;
    let expect = xi(&ctx, &reference_gen, row.k);

    // the same unit carries our ξ_k onto the reference one for every k
    let ours = build_nib_generator(&ctx, &inv)?;
    let witness = orbit_match(&ctx, &ours.alpha, &reference_gen.alpha, orbit_bound);
    let our_xi = xi(&ctx, &ours, row.k);
    let carried = witness.map(|u| crate::nib_enum::act_unit(&ctx, u, &our_xi) == expect);
    if carried != Some(true) {
        return fail("our ξ_k is not carried onto the reference orbit".into());
    }

    let reference = row.reference_element(&ctx)?;
    let mut result = if reference == expect {
        RowResult::new(label.clone(), &row.n, RowStatus::Pass, "equal as field elements".into())
    } else {
        match row.corrected_element(&ctx)? {
            Some(fixed) if fixed == expect => {
                let c = row.correction.as_ref().expect("correction present");
                let why = if ctx.is_integral(&reference) {
                    disc_detail(&ctx, &reference, &inv.conductor)
                } else {
                    format!("reference value is not an algebraic integer (trace {})", ctx.trace(&reference))
                };
                RowResult::new(
                    label.clone(),
                    &row.n,
                    RowStatus::Erratum,
                    format!(
                        "{why}; equal after replacing coefficient of ρ^({}) {} by {}",
                        c.index, row.conjugate_coeffs[c.index], c.value
                    ),
                )
            }
            _ => RowResult::new(
                label.clone(),
                &row.n,
                RowStatus::Fail,
                format!("differs from computed ξ_k: {}", disc_detail(&ctx, &reference, &inv.conductor)),
            ),
        }
    };
    result.witness = witness.map(Witness::from);
    Ok(result)
}

fn verify_basis(row: &IntegralBasisRow) -> Result<RowResult> {
    let label = format!("{:?}", row.source);
    let n = parse_int(&row.n)?;
    let inv = FieldInvariants::compute(&n, &[], FactorBudget::default())?;
    let ctx = FieldContext::new(&n)?;
    let ib = build_integral_basis(&ctx, &inv)?;
    let mut problems = Vec::new();
    if ib.u != parse_int(&row.u)? {
        problems.push(format!("u = {} (reference {})", ib.u, row.u));
    }
    if ib.t != parse_int(&row.t)? {
        problems.push(format!("t = {} (reference {})", ib.t, row.t));
    }
    if ib.big_t != row.big_t()? {
        problems.push("T differs".to_string());
    }
    if ib.denominators != row.denominators()? {
        problems.push("φ denominators differ".to_string());
    }
    if inv.conductor != parse_int(&row.conductor)? {
        problems.push(format!("conductor {} (reference {})", inv.conductor, row.conductor));
    }
    if !ib.certified {
        problems.push("basis not certified".into());
    }
    if let Some(alt) = &row.alternative_basis {
        let rho = FieldElement::rho();
        let basis = [FieldElement::one(), rho.clone(), ctx.mul(&rho, &rho), alt.v4.element()?, alt.v5.element()?];
        if !certify_basis(&ctx, &basis, &inv.conductor) {
            problems.push("alternative basis not certified".into());
        }
        let r = transition_matrix(&basis, &ib.elements());
        let reference: Vec<Vec<BigRational>> = alt
            .transition()?
            .into_iter()
            .map(|row| row.into_iter().map(BigRational::from).collect())
            .collect();
        if r.as_ref() != Some(&reference) {
            problems.push("transition matrix differs".into());
        }
    }
    let status = if problems.is_empty() { RowStatus::Pass } else { RowStatus::Fail };
    let detail = if problems.is_empty() {
        format!("u, t, T, denominators and disc = {}^4 reproduced", inv.conductor)
    } else {
        problems.join("; ")
    };
    Ok(RowResult::new(label, &row.n, status, detail))
}

fn verify_conjugates(fixtures: &Fixtures) -> Result<RowResult> {
    let row = &fixtures.n_minus_one;
    let n = parse_int(&row.n)?;
    let ctx = FieldContext::new(&n)?;
    let reference = row.conjugates()?;
    let ok_conj = reference.as_slice() == ctx.sigma_powers().as_slice();
    let ok_nib = certify_nib(&ctx, &FieldElement::rho(), &parse_int(&row.conductor)?);
    let status = if ok_conj && ok_nib { RowStatus::Pass } else { RowStatus::Fail };
    let detail = format!("conjugates match: {ok_conj}; ρ generates a normal integral basis: {ok_nib}");
    Ok(RowResult::new("ExampleNminus1".into(), &row.n, status, detail))
}

pub fn verify_exit_code(results: &[RowResult]) -> i32 {
    if results.iter().any(|r| r.status == RowStatus::Fail) {
        EXIT_VERIFY
    } else {
        EXIT_OK
    }
}

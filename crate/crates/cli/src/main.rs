//! Command-line front end: every library operation behind one binary with
//! JSON job documents in and versioned, self-contained result documents
//! out.
//!
//! Exit codes: 0 on success or a positive verdict, 1 when a check finds a
//! negative verdict or a property violation (density non-stabilization,
//! failed verification, witness/divisibility mismatch, failed lift), 2 on
//! malformed input or unsupported parameters.
//!
//! Every result document embeds the job that produced it, so `--verify`
//! can replay the computation from the document alone and compare.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use monopoint::adele::{
    congruence_solutions, density_check, frobenius_limit, place_enumerate, standard_schedule,
    ClosureLevel,
};
use monopoint::corpus::{corpus, SolutionKind};
use monopoint::ffpoly::{
    gab_poly, laurent_divides, DensePoly, Field, LaurentPoly, MultiPoly,
};
use monopoint::lifting::{
    choose_parameters, lift_exponents, solve_all_monomial_points, veronese_linearize, GabParams,
    LiftOutcome,
};
use monopoint::partition::refinement_witness;

const JOB_SCHEMA: &str = "monopoint.job.v1";

#[derive(Parser)]
#[command(
    name = "monopoint",
    version,
    about = "Monomial points on affine varieties over rational function fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Prime order of the coefficient field, for subcommands that need no
    /// input document (frobenius).
    #[arg(long, global = true)]
    field: Option<u32>,
    /// Path to a JSON job document.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replay a previously written result document and compare.
    #[arg(long, global = true)]
    verify: Option<PathBuf>,
    /// Maximum place degree for closure, density, and frobenius.
    #[arg(long, global = true)]
    level_degrees: Option<usize>,
    /// Place precision (closure) or maximum precision (density).
    #[arg(long, global = true)]
    level_precision: Option<u32>,
    /// Brute-force cross-check bound for solve: compare against every
    /// exponent vector in [-B, B]^M.
    #[arg(long = "box", global = true)]
    box_bound: Option<i64>,
    /// Reject residue enumerations larger than this (may only lower the
    /// built-in cap).
    #[arg(long, global = true)]
    caps: Option<u64>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// Print the window polynomial (T^(a*b) - 1) / (T^a - 1).
    Gab,
    /// Test whether the window polynomial divides a Laurent polynomial.
    Divides,
    /// Search for a residue-class zero-sum witness and compare it with
    /// window divisibility.
    Partitions,
    /// Lift a congruence witness to an exact monomial point.
    Lift,
    /// Compute the complete monomial solution family of a system.
    Solve,
    /// Enumerate exponent residues satisfying the system at one closure
    /// level.
    Closure,
    /// Run the nested closure schedule and report stabilization.
    Density,
    /// Iterated-Frobenius limits and minimal polynomials at all places up
    /// to a degree.
    Frobenius,
    /// Rewrite the system as linear forms over monomial coordinates.
    Linearize,
    /// List the bundled example systems with their solution shapes.
    Corpus,
}

impl Cmd {
    fn result_schema(self) -> &'static str {
        match self {
            Cmd::Gab => "monopoint.gab.v1",
            Cmd::Divides => "monopoint.divides.v1",
            Cmd::Partitions => "monopoint.partitions.v1",
            Cmd::Lift => "monopoint.lift.v1",
            Cmd::Solve => "monopoint.solve.v1",
            Cmd::Closure => "monopoint.closure.v1",
            Cmd::Density => "monopoint.density.v1",
            Cmd::Frobenius => "monopoint.frobenius.v1",
            Cmd::Linearize => "monopoint.linearize.v1",
            Cmd::Corpus => "monopoint.corpus.v1",
        }
    }
}

// ---------------------------------------------------------------------------
// Job and result documents.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDto {
    p: u32,
    /// Coefficients of an irreducible modulus for extension fields,
    /// ascending degree; omit for prime fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDto {
    coeff: i64,
    t: u32,
    x: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDto {
    terms: Vec<TermDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LaurentTermDto {
    coeff: i64,
    e: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowDto {
    a: u64,
    b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsDto {
    a0: u64,
    b0: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDto {
    schema: String,
    field: FieldDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polynomials: Option<Vec<PolyDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    laurent: Option<Vec<LaurentTermDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<WindowDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponents: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ParamsDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CosetDto {
    particular: Vec<i64>,
    basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GabResult {
    schema: String,
    job: JobDto,
    coefficients: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DividesResult {
    schema: String,
    job: JobDto,
    divides: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionsResult {
    schema: String,
    job: JobDto,
    /// Window parameters lie in the guarantee regime: b exceeds the term
    /// count and is coprime to the characteristic.
    in_regime: bool,
    witness: Option<Vec<Vec<usize>>>,
    divides: bool,
    /// A witness always forces divisibility, and inside the regime the two
    /// sides must agree exactly.
    sound: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftResult {
    schema: String,
    job: JobDto,
    /// "lifted", "unsolvable", or "hypothesis-failed".
    outcome: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponents: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base_modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    promised_modulus: Option<u64>,
    /// Window parameters actually used (chosen automatically when the job
    /// does not pin them).
    params: ParamsDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveResult {
    schema: String,
    job: JobDto,
    cosets: Vec<CosetDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    box_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    box_points_checked: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    box_mismatches: Vec<Vec<i64>>,
}

impl Default for SolveResult {
    fn default() -> SolveResult {
        SolveResult {
            schema: String::new(),
            job: JobDto {
                schema: String::new(),
                field: FieldDto { p: 0, modulus: None },
                polynomials: None,
                laurent: None,
                window: None,
                exponents: None,
                level: None,
                params: None,
            },
            cosets: Vec::new(),
            box_bound: None,
            box_points_checked: None,
            box_mismatches: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClosureResult {
    schema: String,
    job: JobDto,
    max_degree: usize,
    precision: u32,
    period: u64,
    modulus_degree: usize,
    residues: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityLevelDto {
    period: u64,
    modulus_degree: usize,
    congruence_count: usize,
    exact_count: usize,
    equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityResult {
    schema: String,
    job: JobDto,
    max_degree: usize,
    max_precision: u32,
    levels: Vec<DensityLevelDto>,
    first_equal: Option<usize>,
    stabilized: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    counterexamples: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrobeniusEntryDto {
    place: Vec<u32>,
    degree: usize,
    limit: Vec<u32>,
    stabilized_at: u32,
    minimal_polynomial: Vec<u32>,
    matches_place: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrobeniusResult {
    schema: String,
    field: FieldDto,
    max_degree: usize,
    entries: Vec<FrobeniusEntryDto>,
    all_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormEntryDto {
    index: Vec<u32>,
    coefficients: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageEntryDto {
    index: Vec<u32>,
    exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearizeResult {
    schema: String,
    job: JobDto,
    degree: u32,
    num_vars: usize,
    forms: Vec<Vec<FormEntryDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    image: Option<Vec<ImageEntryDto>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vanishes: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusEntryDto {
    name: String,
    field_order: u32,
    num_vars: usize,
    kind: String,
    polynomials: Vec<PolyDto>,
    cosets: Vec<CosetDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusResult {
    schema: String,
    instances: Vec<CorpusEntryDto>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyResult {
    schema: String,
    target_schema: String,
    verified: bool,
}

// ---------------------------------------------------------------------------
// Errors: exit 2 for anything malformed or unsupported.

struct CliError {
    message: String,
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError { message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

fn bail<T>(message: impl Into<String>) -> CliResult<T> {
    Err(CliError { message: message.into() })
}

// ---------------------------------------------------------------------------
// Decoding jobs into library types.

fn decode_field(dto: &FieldDto) -> CliResult<Field> {
    Ok(match &dto.modulus {
        Some(m) => Field::extension(dto.p, m)?,
        None => Field::prime(dto.p)?,
    })
}

fn decode_polys(field: &Field, dtos: &[PolyDto]) -> CliResult<Vec<MultiPoly>> {
    if dtos.is_empty() {
        return bail("the polynomial system is empty");
    }
    let num_vars = match dtos[0].terms.first() {
        Some(t) => t.x.len(),
        None => return bail("a polynomial has no terms"),
    };
    let mut out = Vec::with_capacity(dtos.len());
    for dto in dtos {
        let mut terms = Vec::with_capacity(dto.terms.len());
        for term in &dto.terms {
            if term.x.len() != num_vars {
                return bail("inconsistent variable counts across terms");
            }
            let mut tuple = Vec::with_capacity(num_vars + 1);
            tuple.push(term.t);
            tuple.extend_from_slice(&term.x);
            terms.push((term.coeff, tuple));
        }
        out.push(MultiPoly::from_int_terms(field, num_vars, &terms)?);
    }
    Ok(out)
}

fn decode_laurent(field: &Field, dtos: &[LaurentTermDto]) -> LaurentPoly {
    let terms: Vec<(i64, monopoint::ffpoly::Fq)> =
        dtos.iter().map(|t| (t.e, field.from_int(t.coeff))).collect();
    LaurentPoly::from_terms(field, &terms)
}

fn encode_poly(f: &MultiPoly) -> PolyDto {
    PolyDto {
        terms: f
            .terms()
            .map(|(tuple, c)| TermDto { coeff: c.0 as i64, t: tuple[0], x: tuple[1..].to_vec() })
            .collect(),
    }
}

fn encode_dense(p: &DensePoly) -> Vec<u32> {
    p.coeffs().iter().map(|c| c.0).collect()
}

fn require<'a, T>(value: &'a Option<T>, what: &str) -> CliResult<&'a T> {
    match value {
        Some(v) => Ok(v),
        None => bail(format!("job is missing the required field `{what}`")),
    }
}

fn load_job(path: &Option<PathBuf>) -> CliResult<JobDto> {
    let path = match path {
        Some(p) => p,
        None => return bail("this subcommand requires --input <job.json>"),
    };
    let raw = std::fs::read_to_string(path)?;
    let job: JobDto = serde_json::from_str(&raw)?;
    if job.schema != JOB_SCHEMA {
        return bail(format!("unsupported job schema `{}`, expected `{JOB_SCHEMA}`", job.schema));
    }
    Ok(job)
}

// ---------------------------------------------------------------------------
// Subcommand computations. Each is a pure function of its decoded inputs so
// that --verify can replay it.

fn compute_gab(job: &JobDto) -> CliResult<GabResult> {
    let field = decode_field(&job.field)?;
    let w = require(&job.window, "window")?;
    let g = gab_poly(&field, w.a, w.b)?;
    Ok(GabResult {
        schema: Cmd::Gab.result_schema().into(),
        job: job.clone(),
        coefficients: encode_dense(&g),
    })
}

fn compute_divides(job: &JobDto) -> CliResult<DividesResult> {
    let field = decode_field(&job.field)?;
    let w = require(&job.window, "window")?;
    let laurent = decode_laurent(&field, require(&job.laurent, "laurent")?);
    let g = gab_poly(&field, w.a, w.b)?;
    Ok(DividesResult {
        schema: Cmd::Divides.result_schema().into(),
        job: job.clone(),
        divides: laurent_divides(&g, &laurent)?,
    })
}

fn compute_partitions(job: &JobDto) -> CliResult<PartitionsResult> {
    let field = decode_field(&job.field)?;
    let w = require(&job.window, "window")?;
    let laurent = decode_laurent(&field, require(&job.laurent, "laurent")?);
    let a = u32::try_from(w.a).map_err(|_| CliError::from("window parameter a too large"))?;
    let b = u32::try_from(w.b).map_err(|_| CliError::from("window parameter b too large"))?;
    let witness = refinement_witness(&field, &laurent, a, b)?;
    let g = gab_poly(&field, w.a, w.b)?;
    let divides = laurent_divides(&g, &laurent)?;
    let term_count = laurent.terms().count() as u64;
    let in_regime = w.b > term_count && w.b % field.characteristic() as u64 != 0;
    let witnessed = witness.is_some();
    let sound = (!witnessed || divides) && (!in_regime || witnessed == divides);
    Ok(PartitionsResult {
        schema: Cmd::Partitions.result_schema().into(),
        job: job.clone(),
        in_regime,
        witness: witness.map(|p| p.blocks),
        divides,
        sound,
    })
}

fn compute_lift(job: &JobDto) -> CliResult<LiftResult> {
    let field = decode_field(&job.field)?;
    let polys = decode_polys(&field, require(&job.polynomials, "polynomials")?)?;
    let exponents = require(&job.exponents, "exponents")?;
    let level = *require(&job.level, "level")?;
    let params = match &job.params {
        Some(p) => GabParams::new(&field, p.a0, p.b0)?,
        None => {
            let t = DensePoly::monomial(&field, field.one(), 1);
            choose_parameters(&polys, &[t])?
        }
    };
    let params_dto = ParamsDto { a0: params.a0, b0: params.b0 };
    let schema = Cmd::Lift.result_schema().to_string();
    match lift_exponents(&polys, exponents, level, &params) {
        Ok(LiftOutcome::Lifted(l)) => Ok(LiftResult {
            schema,
            job: job.clone(),
            outcome: "lifted".into(),
            exponents: Some(l.exponents),
            base_modulus: Some(
                u64::try_from(l.base).map_err(|_| CliError::from("base modulus overflow"))?,
            ),
            promised_modulus: Some(
                u64::try_from(l.promised_modulus)
                    .map_err(|_| CliError::from("promised modulus overflow"))?,
            ),
            params: params_dto,
            detail: None,
        }),
        Ok(LiftOutcome::Unsolvable { certificates }) => Ok(LiftResult {
            schema,
            job: job.clone(),
            outcome: "unsolvable".into(),
            exponents: None,
            base_modulus: None,
            promised_modulus: None,
            params: params_dto,
            detail: Some(format!(
                "every joint block choice is exactly unsolvable: {certificates:?}"
            )),
        }),
        Err(monopoint::Error::Hypothesis(msg)) => Ok(LiftResult {
            schema,
            job: job.clone(),
            outcome: "hypothesis-failed".into(),
            exponents: None,
            base_modulus: None,
            promised_modulus: None,
            params: params_dto,
            detail: Some(msg),
        }),
        Err(other) => Err(other.into()),
    }
}

fn box_points(m: usize, bound: i64) -> Vec<Vec<i64>> {
    let width = (2 * bound + 1) as usize;
    let mut out = Vec::with_capacity(width.pow(m as u32));
    for code in 0..width.pow(m as u32) {
        let mut c = code;
        let mut e = Vec::with_capacity(m);
        for _ in 0..m {
            e.push((c % width) as i64 - bound);
            c /= width;
        }
        out.push(e);
    }
    out
}

fn compute_solve(job: &JobDto, box_bound: Option<i64>) -> CliResult<SolveResult> {
    let field = decode_field(&job.field)?;
    let polys = decode_polys(&field, require(&job.polynomials, "polynomials")?)?;
    let family = solve_all_monomial_points(&polys)?;
    let cosets = family
        .cosets
        .iter()
        .map(|c| CosetDto { particular: c.particular.clone(), basis: c.basis.clone() })
        .collect();
    let mut result = SolveResult {
        schema: Cmd::Solve.result_schema().into(),
        job: job.clone(),
        cosets,
        ..SolveResult::default()
    };
    if let Some(bound) = box_bound {
        if !(0..=8).contains(&bound) {
            return bail("--box accepts bounds between 0 and 8");
        }
        let mut mismatches = Vec::new();
        let mut checked = 0u64;
        for e in box_points(family.num_vars, bound) {
            let direct = polys
                .iter()
                .map(|f| f.specialize(&e).map(|s| s.is_zero()))
                .collect::<Result<Vec<bool>, _>>()?
                .into_iter()
                .all(|z| z);
            if direct != family.contains(&e)? {
                mismatches.push(e);
            }
            checked += 1;
        }
        result.box_bound = Some(bound);
        result.box_points_checked = Some(checked);
        result.box_mismatches = mismatches;
    }
    Ok(result)
}

fn build_level(field: &Field, max_degree: usize, precision: u32) -> CliResult<ClosureLevel> {
    let places = place_enumerate(field, max_degree)?;
    Ok(ClosureLevel::new(places.into_iter().map(|p| (p, precision)).collect())?)
}

fn compute_closure(
    job: &JobDto,
    max_degree: usize,
    precision: u32,
    caps: Option<u64>,
) -> CliResult<ClosureResult> {
    let field = decode_field(&job.field)?;
    let polys = decode_polys(&field, require(&job.polynomials, "polynomials")?)?;
    let level = build_level(&field, max_degree, precision)?;
    if let Some(cap) = caps {
        let m = polys[0].num_vars() as u32;
        match level.period().checked_pow(m) {
            Some(t) if t <= cap => {}
            _ => {
                return bail(format!(
                    "residue enumeration {}^{m} exceeds --caps {cap}",
                    level.period()
                ))
            }
        }
    }
    let set = congruence_solutions(&polys, &level)?;
    Ok(ClosureResult {
        schema: Cmd::Closure.result_schema().into(),
        job: job.clone(),
        max_degree,
        precision,
        period: level.period(),
        modulus_degree: level.modulus().degree().unwrap_or(0),
        residues: set.residues.into_iter().collect(),
    })
}

fn compute_density(job: &JobDto, max_degree: usize, max_precision: u32) -> CliResult<DensityResult> {
    let field = decode_field(&job.field)?;
    let polys = decode_polys(&field, require(&job.polynomials, "polynomials")?)?;
    let schedule = standard_schedule(&field, max_degree, max_precision)?;
    let report = density_check(&polys, &schedule)?;
    Ok(DensityResult {
        schema: Cmd::Density.result_schema().into(),
        job: job.clone(),
        max_degree,
        max_precision,
        levels: report
            .levels
            .iter()
            .map(|l| DensityLevelDto {
                period: l.period,
                modulus_degree: l.modulus_degree,
                congruence_count: l.congruence_count,
                exact_count: l.exact_count,
                equal: l.equal,
            })
            .collect(),
        first_equal: report.first_equal,
        stabilized: report.stabilized,
        counterexamples: report.counterexamples,
    })
}

fn compute_frobenius(field_dto: &FieldDto, max_degree: usize) -> CliResult<FrobeniusResult> {
    let field = decode_field(field_dto)?;
    let mut entries = Vec::new();
    let mut all_match = true;
    for place in place_enumerate(&field, max_degree)? {
        let rep = frobenius_limit(&place)?;
        let matches_place = rep.minimal_polynomial == *place.poly();
        all_match &= matches_place;
        entries.push(FrobeniusEntryDto {
            place: encode_dense(place.poly()),
            degree: place.degree(),
            limit: encode_dense(&rep.limit),
            stabilized_at: rep.stabilized_at,
            minimal_polynomial: encode_dense(&rep.minimal_polynomial),
            matches_place,
        });
    }
    Ok(FrobeniusResult {
        schema: Cmd::Frobenius.result_schema().into(),
        field: field_dto.clone(),
        max_degree,
        entries,
        all_match,
    })
}

fn compute_linearize(job: &JobDto) -> CliResult<LinearizeResult> {
    let field = decode_field(&job.field)?;
    let polys = decode_polys(&field, require(&job.polynomials, "polynomials")?)?;
    let ver = veronese_linearize(&polys)?;
    let forms = ver
        .forms
        .iter()
        .map(|form| {
            form.iter()
                .map(|(idx, coeff)| FormEntryDto {
                    index: idx.clone(),
                    coefficients: encode_dense(coeff),
                })
                .collect()
        })
        .collect();
    let (image, vanishes) = match &job.exponents {
        Some(e) => {
            let img = ver.monomial_image(e)?;
            let vanish = ver.vanishes_at(e)?;
            (
                Some(
                    img.into_iter()
                        .map(|(index, exponent)| ImageEntryDto { index, exponent })
                        .collect(),
                ),
                Some(vanish),
            )
        }
        None => (None, None),
    };
    Ok(LinearizeResult {
        schema: Cmd::Linearize.result_schema().into(),
        job: job.clone(),
        degree: ver.degree,
        num_vars: ver.num_vars,
        forms,
        image,
        vanishes,
    })
}

fn compute_corpus() -> CliResult<CorpusResult> {
    let mut instances = Vec::new();
    for inst in corpus()? {
        let family = solve_all_monomial_points(&inst.polys)?;
        let kind = match inst.kind {
            SolutionKind::Empty => "empty".to_string(),
            SolutionKind::Unique => "unique".to_string(),
            SolutionKind::Finite { points } => format!("finite({points})"),
            SolutionKind::PositiveDimensional { max_rank } => {
                format!("positive-dimensional(rank {max_rank})")
            }
        };
        instances.push(CorpusEntryDto {
            name: inst.name.to_string(),
            field_order: inst.field.order(),
            num_vars: inst.num_vars(),
            kind,
            polynomials: inst.polys.iter().map(encode_poly).collect(),
            cosets: family
                .cosets
                .iter()
                .map(|c| CosetDto { particular: c.particular.clone(), basis: c.basis.clone() })
                .collect(),
        });
    }
    Ok(CorpusResult { schema: Cmd::Corpus.result_schema().into(), instances })
}

// ---------------------------------------------------------------------------
// Output, exit codes, and verification.

fn emit<T: Serialize>(cli: &Cli, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Negative verdict detection per subcommand: these exit 1.
fn verdict_ok(cmd: Cmd, value: &serde_json::Value) -> bool {
    let flag = |key: &str| value.get(key).and_then(|v| v.as_bool()).unwrap_or(false);
    match cmd {
        Cmd::Partitions => flag("sound"),
        Cmd::Lift => value.get("outcome").and_then(|v| v.as_str()) == Some("lifted"),
        Cmd::Solve => value
            .get("box_mismatches")
            .and_then(|v| v.as_array())
            .map(|a| a.is_empty())
            .unwrap_or(true),
        Cmd::Density => flag("stabilized"),
        Cmd::Frobenius => flag("all_match"),
        Cmd::Gab | Cmd::Divides | Cmd::Closure | Cmd::Linearize | Cmd::Corpus => true,
    }
}

fn run_fresh(cli: &Cli) -> CliResult<(serde_json::Value, ExitCode)> {
    let value = match cli.cmd {
        Cmd::Gab => serde_json::to_value(compute_gab(&load_job(&cli.input)?)?)?,
        Cmd::Divides => serde_json::to_value(compute_divides(&load_job(&cli.input)?)?)?,
        Cmd::Partitions => serde_json::to_value(compute_partitions(&load_job(&cli.input)?)?)?,
        Cmd::Lift => serde_json::to_value(compute_lift(&load_job(&cli.input)?)?)?,
        Cmd::Solve => {
            serde_json::to_value(compute_solve(&load_job(&cli.input)?, cli.box_bound)?)?
        }
        Cmd::Closure => serde_json::to_value(compute_closure(
            &load_job(&cli.input)?,
            cli.level_degrees.unwrap_or(3),
            cli.level_precision.unwrap_or(1),
            cli.caps,
        )?)?,
        Cmd::Density => serde_json::to_value(compute_density(
            &load_job(&cli.input)?,
            cli.level_degrees.unwrap_or(3),
            cli.level_precision.unwrap_or(2),
        )?)?,
        Cmd::Frobenius => {
            let field_dto = match (&cli.input, cli.field) {
                (Some(_), _) => load_job(&cli.input)?.field,
                (None, Some(p)) => FieldDto { p, modulus: None },
                (None, None) => {
                    return bail("frobenius needs --field <p> or --input <job.json>")
                }
            };
            serde_json::to_value(compute_frobenius(&field_dto, cli.level_degrees.unwrap_or(6))?)?
        }
        Cmd::Linearize => serde_json::to_value(compute_linearize(&load_job(&cli.input)?)?)?,
        Cmd::Corpus => serde_json::to_value(compute_corpus()?)?,
    };
    let code = if verdict_ok(cli.cmd, &value) { ExitCode::SUCCESS } else { ExitCode::from(1) };
    Ok((value, code))
}

/// Replay a result document: recompute from its embedded inputs and compare
/// the full documents.
fn run_verify(cli: &Cli, path: &PathBuf) -> CliResult<(serde_json::Value, ExitCode)> {
    let raw = std::fs::read_to_string(path)?;
    let stored: serde_json::Value = serde_json::from_str(&raw)?;
    let schema = stored
        .get("schema")
        .and_then(|s| s.as_str())
        .ok_or_else(|| CliError::from("result document lacks a schema field"))?;
    if schema != cli.cmd.result_schema() {
        return bail(format!(
            "schema `{schema}` does not match this subcommand (expected `{}`)",
            cli.cmd.result_schema()
        ));
    }
    let job = |v: &serde_json::Value| -> CliResult<JobDto> {
        Ok(serde_json::from_value(
            v.get("job").cloned().ok_or_else(|| CliError::from("result lacks embedded job"))?,
        )?)
    };
    let recomputed: serde_json::Value = match cli.cmd {
        Cmd::Gab => serde_json::to_value(compute_gab(&job(&stored)?)?)?,
        Cmd::Divides => serde_json::to_value(compute_divides(&job(&stored)?)?)?,
        Cmd::Partitions => serde_json::to_value(compute_partitions(&job(&stored)?)?)?,
        Cmd::Lift => serde_json::to_value(compute_lift(&job(&stored)?)?)?,
        Cmd::Solve => {
            let parsed: SolveResult = serde_json::from_value(stored.clone())?;
            serde_json::to_value(compute_solve(&parsed.job, parsed.box_bound)?)?
        }
        Cmd::Closure => {
            let parsed: ClosureResult = serde_json::from_value(stored.clone())?;
            serde_json::to_value(compute_closure(
                &parsed.job,
                parsed.max_degree,
                parsed.precision,
                None,
            )?)?
        }
        Cmd::Density => {
            let parsed: DensityResult = serde_json::from_value(stored.clone())?;
            serde_json::to_value(compute_density(
                &parsed.job,
                parsed.max_degree,
                parsed.max_precision,
            )?)?
        }
        Cmd::Frobenius => {
            let parsed: FrobeniusResult = serde_json::from_value(stored.clone())?;
            serde_json::to_value(compute_frobenius(&parsed.field, parsed.max_degree)?)?
        }
        Cmd::Linearize => serde_json::to_value(compute_linearize(&job(&stored)?)?)?,
        Cmd::Corpus => serde_json::to_value(compute_corpus()?)?,
    };
    let verified = recomputed == stored;
    let value = serde_json::to_value(VerifyResult {
        schema: "monopoint.verify.v1".into(),
        target_schema: schema.to_string(),
        verified,
    })?;
    let code = if verified { ExitCode::SUCCESS } else { ExitCode::from(1) };
    Ok((value, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.verify.clone() {
        Some(path) => run_verify(&cli, &path),
        None => run_fresh(&cli),
    };
    match outcome {
        Ok((value, code)) => {
            if let Err(e) = emit(&cli, &value) {
                eprintln!("error: {}", e.message);
                return ExitCode::from(2);
            }
            code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(2)
        }
    }
}

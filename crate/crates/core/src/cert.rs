//! JSON certificate files: a versioned, digest-protected schema carrying
//! task inputs, results, and replay data. `verify_file` re-checks the
//! integrity digest and replays the semantic content (witness tables
//! search-free; report payloads by deterministic recomputation). All numbers
//! are decimal strings or exact integers; nothing is floating point.

use serde::{Deserialize, Serialize};

use crate::adic::{
    compare_idealistic_sequential, gamma, is_adically_flat, lambda_system, verify_adic_system,
    ComparisonReport, Flatness, GammaOutcome,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::module::ModulePresentation;
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use crate::ring::{CoeffSpec, Ring};
use crate::tower::{
    analyze_direct_system, analyze_inverse_system, cohomology_system, completion_tower,
    level_size, torsion_tower, LevelSize, SystemReport,
};
use crate::wpr::{
    covering_check, lemma54_verify, prism_wpr, replay_certificate, torsion_bound_module,
    CoveringReport, DegreeWitnesses, Lemma54Report, Method, PrismPresentation, PrismStage,
    Provenance, TorsionBoundReport, WprCertificate, WprOutcome,
};

pub const SCHEMA_VERSION: &str = "1";

/// Serializable presentation of a ring: coefficient spec (moduli as decimal
/// strings), variables, monomial order, and ideal generators in the
/// polynomial literal grammar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub coeff: CoeffKind,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "modulus")]
pub enum CoeffKind {
    Int,
    IntMod(String),
    Rationals,
    PrimeField(String),
}

impl RingDescriptor {
    pub fn of(ring: &Ring) -> RingDescriptor {
        let coeff = match &ring.0.coeff {
            CoeffSpec::Int => CoeffKind::Int,
            CoeffSpec::IntMod(n) => CoeffKind::IntMod(n.to_string()),
            CoeffSpec::Rationals => CoeffKind::Rationals,
            CoeffSpec::PrimeField(p) => CoeffKind::PrimeField(p.to_string()),
        };
        RingDescriptor {
            coeff,
            vars: ring.vars().to_vec(),
            order: ring.ctx().order,
            ideal: ring
                .0
                .ideal_gens
                .iter()
                .map(|g| ring.display_element(g))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Ring> {
        let parse_modulus = |s: &str| -> Result<num_bigint::BigUint> {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad modulus `{s}`")))
        };
        let coeff = match &self.coeff {
            CoeffKind::Int => CoeffSpec::Int,
            CoeffKind::IntMod(n) => CoeffSpec::IntMod(parse_modulus(n)?),
            CoeffKind::Rationals => CoeffSpec::Rationals,
            CoeffKind::PrimeField(p) => CoeffSpec::PrimeField(parse_modulus(p)?),
        };
        Ring::poly_quot(coeff, self.vars.clone(), self.order, self.ideal.clone())
    }
}

/// Serializable module presentation: relation rows in the polynomial
/// literal grammar over the descriptor's ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub ring: RingDescriptor,
    pub rank: usize,
    pub relations: Vec<Vec<String>>,
}

impl ModuleDescriptor {
    pub fn of(m: &ModulePresentation) -> ModuleDescriptor {
        let ring = &m.ring;
        ModuleDescriptor {
            ring: RingDescriptor::of(ring),
            rank: m.rank,
            relations: m
                .relations
                .rows_vec()
                .iter()
                .map(|row| row.iter().map(|p| ring.display_element(p)).collect())
                .collect(),
        }
    }

    pub fn build(&self) -> Result<ModulePresentation> {
        let ring = self.ring.build()?;
        build_module(&ring, self.rank, &self.relations)
    }
}

pub fn build_module(
    ring: &Ring,
    rank: usize,
    relations: &[Vec<String>],
) -> Result<ModulePresentation> {
    let mut rows = vec![];
    for row in relations {
        if row.len() != rank {
            return Err(Error::Shape(format!(
                "relation row of width {} on a rank-{} module",
                row.len(),
                rank
            )));
        }
        rows.push(
            row.iter()
                .map(|s| ring.parse_element(s))
                .collect::<Result<Vec<Poly>>>()?,
        );
    }
    let relations = if rows.is_empty() {
        Matrix::zero(0, rank)
    } else {
        Matrix::from_rows(rows)
    };
    ModulePresentation::new(ring.clone(), rank, relations)
}

/// Serializable weak-proregularity certificate; the provenance chain nests
/// sub-certificates with their own ring descriptors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WprCertificateData {
    pub ring: RingDescriptor,
    pub sequence: Vec<String>,
    pub bound: usize,
    pub i_max: usize,
    pub method: Method,
    pub degrees: Vec<DegreeWitnesses>,
    pub provenance: Vec<ProvenanceData>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceData {
    pub label: String,
    pub certificate: WprCertificateData,
}

impl PartialEq for DegreeWitnesses {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.witnesses == other.witnesses
    }
}

impl PartialEq for Method {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_string(self).ok() == serde_json::to_string(other).ok()
    }
}

pub fn wpr_to_data(cert: &WprCertificate) -> WprCertificateData {
    WprCertificateData {
        ring: RingDescriptor::of(&cert.ring),
        sequence: cert
            .sequence
            .iter()
            .map(|p| cert.ring.display_element(p))
            .collect(),
        bound: cert.bound,
        i_max: cert.i_max,
        method: cert.method.clone(),
        degrees: cert.degrees.clone(),
        provenance: cert
            .provenance
            .iter()
            .map(|p| ProvenanceData {
                label: p.label.clone(),
                certificate: wpr_to_data(&p.certificate),
            })
            .collect(),
    }
}

pub fn wpr_from_data(data: &WprCertificateData) -> Result<WprCertificate> {
    let ring = data.ring.build()?;
    let sequence = data
        .sequence
        .iter()
        .map(|s| ring.parse_element(s))
        .collect::<Result<Vec<Poly>>>()?;
    let provenance = data
        .provenance
        .iter()
        .map(|p| {
            let certificate = wpr_from_data(&p.certificate)?;
            Ok(Provenance {
                label: p.label.clone(),
                ring: certificate.ring.clone(),
                certificate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WprCertificate {
        ring,
        sequence,
        bound: data.bound,
        i_max: data.i_max,
        method: data.method.clone(),
        degrees: data.degrees.clone(),
        provenance,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum WprOutcomeData {
    Certified { certificate: WprCertificateData },
    Undetermined { reason: String },
}

pub fn outcome_to_data(outcome: &WprOutcome) -> WprOutcomeData {
    match outcome {
        WprOutcome::Certified(c) => WprOutcomeData::Certified { certificate: wpr_to_data(c) },
        WprOutcome::Undetermined { reason } => {
            WprOutcomeData::Undetermined { reason: reason.clone() }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaData {
    pub stabilized_at: Option<usize>,
    pub size: Option<LevelSize>,
    pub undetermined_at: Option<usize>,
}

pub fn gamma_to_data(outcome: &GammaOutcome) -> Result<GammaData> {
    Ok(match outcome {
        GammaOutcome::Determined { stabilized_at, module, .. } => GammaData {
            stabilized_at: Some(*stabilized_at),
            size: Some(level_size(module)?),
            undetermined_at: None,
        },
        GammaOutcome::Undetermined { bound } => GammaData {
            stabilized_at: None,
            size: None,
            undetermined_at: Some(*bound),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaData {
    pub precision: usize,
    pub level_sizes: Vec<LevelSize>,
    pub system_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrismInput {
    pub ring: RingDescriptor,
    pub ideal: Vec<String>,
    pub p: u64,
    pub charts: Vec<[String; 2]>,
    pub declared_complete: bool,
}

impl PrismInput {
    pub fn build(&self) -> Result<PrismPresentation> {
        let ring = self.ring.build()?;
        let ideal_gens = self
            .ideal
            .iter()
            .map(|s| ring.parse_element(s))
            .collect::<Result<Vec<Poly>>>()?;
        let charts = self
            .charts
            .iter()
            .map(|[s, b]| Ok((ring.parse_element(s)?, ring.parse_element(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PrismPresentation {
            ring,
            ideal_gens,
            p: self.p,
            charts,
            declared_complete: self.declared_complete,
        })
    }
}

impl PartialEq for PrismStage {
    fn eq(&self, other: &Self) -> bool {
        self.stage == other.stage && self.name == other.name && self.detail == other.detail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "task_kind")]
pub enum Payload {
    Wpr {
        outcome: WprOutcomeData,
    },
    TorsionBound {
        module: ModuleDescriptor,
        element: String,
        bound: usize,
        report: TorsionBoundReport,
    },
    Lemma54 {
        ring: RingDescriptor,
        a: String,
        b: String,
        k_max: usize,
        bound: usize,
        report: Lemma54Report,
    },
    Flatness {
        module: ModuleDescriptor,
        sequence: Vec<String>,
        q_max: usize,
        verdict: Flatness,
    },
    Gamma {
        module: ModuleDescriptor,
        sequence: Vec<String>,
        bound: usize,
        result: GammaData,
    },
    Lambda {
        module: ModuleDescriptor,
        sequence: Vec<String>,
        result: LambdaData,
    },
    Towers {
        module: ModuleDescriptor,
        sequence: Vec<String>,
        bound: usize,
        torsion_reports: Vec<SystemReport>,
        completion_reports: Vec<SystemReport>,
    },
    Compare {
        module: ModuleDescriptor,
        sequence: Vec<String>,
        report: ComparisonReport,
    },
    Covering {
        ring: RingDescriptor,
        sequence: Vec<String>,
        report: CoveringReport,
    },
    Prism {
        input: PrismInput,
        bound: usize,
        label: String,
        stages: Vec<PrismStage>,
        outcome: WprOutcomeData,
    },
    Explore {
        ring: RingDescriptor,
        bound: usize,
        notes: Vec<String>,
    },
}

impl PartialEq for TorsionBoundReport {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_string(self).ok() == serde_json::to_string(other).ok()
    }
}

impl PartialEq for Lemma54Report {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l
            && self.profile == other.profile
            && self.bound_values == other.bound_values
            && self.ok == other.ok
    }
}

impl PartialEq for CoveringReport {
    fn eq(&self, other: &Self) -> bool {
        self.covers == other.covers && self.witness == other.witness
    }
}

impl PartialEq for ComparisonReport {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_string(self).ok() == serde_json::to_string(other).ok()
    }
}

impl PartialEq for SystemReport {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_string(self).ok() == serde_json::to_string(other).ok()
    }
}

impl PartialEq for LevelSize {
    fn eq(&self, other: &Self) -> bool {
        serde_json::to_string(self).ok() == serde_json::to_string(other).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskEcho {
    pub name: String,
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

/// One certificate file. The digest covers schema version, tool, task echo,
/// and payload; the timestamp is excluded so replayed runs are
/// byte-identical modulo that one field.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: String,
    pub tool: ToolInfo,
    pub task: TaskEcho,
    pub timestamp: String,
    pub digest: String,
    pub payload: Payload,
}

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn digest_of(schema_version: &str, tool: &ToolInfo, task: &TaskEcho, payload: &Payload) -> String {
    let body = serde_json::json!({
        "schema_version": schema_version,
        "tool": tool,
        "task": task,
        "payload": payload,
    });
    format!("{:016x}", fnv64(body.to_string().as_bytes()))
}

pub fn tool_info() -> ToolInfo {
    ToolInfo {
        name: "proreg".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

/// Assemble and digest-seal a certificate file.
pub fn seal(task: TaskEcho, payload: Payload) -> CertificateFile {
    let tool = tool_info();
    let digest = digest_of(SCHEMA_VERSION, &tool, &task, &payload);
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_else(|_| "0".into());
    CertificateFile {
        schema_version: SCHEMA_VERSION.into(),
        tool,
        task,
        timestamp,
        digest,
        payload,
    }
}

/// Full verification of a certificate file: schema version, integrity
/// digest, then semantic replay of the payload. Witness tables are checked
/// without search; report payloads are recomputed deterministically from
/// the echoed inputs and compared.
pub fn verify_file(cf: &CertificateFile) -> Result<()> {
    if cf.schema_version != SCHEMA_VERSION {
        return Err(Error::Verify(format!(
            "schema version {} unsupported (expected {})",
            cf.schema_version, SCHEMA_VERSION
        )));
    }
    let expect = digest_of(&cf.schema_version, &cf.tool, &cf.task, &cf.payload);
    if expect != cf.digest {
        return Err(Error::Verify(format!(
            "integrity digest mismatch: stored {} computed {}",
            cf.digest, expect
        )));
    }
    verify_payload(&cf.payload)
}

fn verify_outcome(outcome: &WprOutcomeData) -> Result<()> {
    match outcome {
        WprOutcomeData::Certified { certificate } => {
            let cert = wpr_from_data(certificate)?;
            replay_certificate(&cert)
        }
        WprOutcomeData::Undetermined { .. } => Ok(()),
    }
}

fn parse_sequence(ring: &Ring, seq: &[String]) -> Result<Vec<Poly>> {
    seq.iter().map(|s| ring.parse_element(s)).collect()
}

pub fn verify_payload(payload: &Payload) -> Result<()> {
    let mismatch = |what: &str| Error::Verify(format!("{what} does not replay to the stored value"));
    match payload {
        Payload::Wpr { outcome } => verify_outcome(outcome),
        Payload::TorsionBound { module, element, bound, report } => {
            let m = module.build()?;
            let a = m.ring.parse_element(element)?;
            let again = torsion_bound_module(&m, &a, *bound)?;
            if &again == report {
                Ok(())
            } else {
                Err(mismatch("torsion bound report"))
            }
        }
        Payload::Lemma54 { ring, a, b, k_max, bound, report } => {
            let r = ring.build()?;
            let again = lemma54_verify(&r, &r.parse_element(a)?, &r.parse_element(b)?, *k_max, *bound)?;
            if &again == report && report.ok {
                Ok(())
            } else {
                Err(mismatch("torsion bound profile"))
            }
        }
        Payload::Flatness { module, sequence, q_max, verdict } => {
            let m = module.build()?;
            let seq = parse_sequence(&m.ring, sequence)?;
            if &is_adically_flat(&m, &seq, *q_max)? == verdict {
                Ok(())
            } else {
                Err(mismatch("flatness verdict"))
            }
        }
        Payload::Gamma { module, sequence, bound, result } => {
            let m = module.build()?;
            let seq = parse_sequence(&m.ring, sequence)?;
            let again = gamma_to_data(&gamma(&m, &seq, *bound)?)?;
            if &again == result {
                Ok(())
            } else {
                Err(mismatch("torsion submodule"))
            }
        }
        Payload::Lambda { module, sequence, result } => {
            let m = module.build()?;
            let seq = parse_sequence(&m.ring, sequence)?;
            let sys = lambda_system(&m, &seq, result.precision)?;
            let again = LambdaData {
                precision: result.precision,
                level_sizes: sys
                    .levels
                    .iter()
                    .map(level_size)
                    .collect::<Result<Vec<_>>>()?,
                system_verified: verify_adic_system(&sys)?,
            };
            if &again == result && result.system_verified {
                Ok(())
            } else {
                Err(mismatch("adic system"))
            }
        }
        Payload::Towers { module, sequence, bound, torsion_reports, completion_reports } => {
            let m = module.build()?;
            let seq = parse_sequence(&m.ring, sequence)?;
            let (t_again, c_again) = tower_reports(&m, &seq, *bound)?;
            if &t_again == torsion_reports && &c_again == completion_reports {
                Ok(())
            } else {
                Err(mismatch("tower report"))
            }
        }
        Payload::Compare { module, sequence, report } => {
            let m = module.build()?;
            let seq = parse_sequence(&m.ring, sequence)?;
            let again = compare_idealistic_sequential(&m, &seq, report.q, report.bound)?;
            if &again == report {
                Ok(())
            } else {
                Err(mismatch("comparison report"))
            }
        }
        Payload::Covering { ring, sequence, report } => {
            let r = ring.build()?;
            let seq = parse_sequence(&r, sequence)?;
            let again = covering_check(&r, &seq)?;
            if &again == report {
                Ok(())
            } else {
                Err(mismatch("covering witness"))
            }
        }
        Payload::Prism { input, bound, label, stages, outcome } => {
            verify_outcome(outcome)?;
            let prism = input.build()?;
            let again = prism_wpr(&prism, *bound)?;
            if &again.label != label || &again.stages != stages {
                return Err(mismatch("prism stage log"));
            }
            match (&again.outcome, outcome) {
                (WprOutcome::Certified(_), WprOutcomeData::Certified { .. }) => Ok(()),
                (WprOutcome::Undetermined { .. }, WprOutcomeData::Undetermined { .. }) => Ok(()),
                _ => Err(mismatch("prism outcome")),
            }
        }
        Payload::Explore { .. } => Ok(()),
    }
}

/// Per-degree reports of both adic towers of a module, used by the
/// `towers` task and its verification.
pub fn tower_reports(
    m: &ModulePresentation,
    seq: &[Poly],
    bound: usize,
) -> Result<(Vec<SystemReport>, Vec<SystemReport>)> {
    let n = seq.len() as i64;
    let t = torsion_tower(m, seq, bound)?;
    let mut torsion = vec![];
    for q in 0..=n {
        torsion.push(analyze_direct_system(&cohomology_system(&t, q)?)?);
    }
    let c = completion_tower(m, seq, bound)?;
    let mut completion = vec![];
    for q in -n..=0 {
        completion.push(analyze_inverse_system(&cohomology_system(&c, q)?)?);
    }
    Ok((torsion, completion))
}

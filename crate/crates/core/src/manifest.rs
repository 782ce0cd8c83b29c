//! Manifest parsing and task execution. A manifest is JSON with `//` line
//! comments, declaring named rings, modules, sequences, and prisms, plus an
//! ordered task list. Execution of one task yields a certificate payload and
//! a determinacy status.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adic::{
    compare_idealistic_sequential, gamma, is_adically_flat, lambda_system, verify_adic_system,
    ComparisonVerdict,
};
use crate::cert::{
    build_module, gamma_to_data, outcome_to_data, tower_reports, CoeffKind, LambdaData,
    ModuleDescriptor, Payload, PrismInput, RingDescriptor, TaskEcho,
};
use crate::error::{Error, Result};
use crate::module::ModulePresentation;
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::tower::{level_size, SystemVerdict};
use crate::wpr::{
    covering_check, element_wpr, glue_wpr, lemma54_verify, prism_wpr, quotient_wpr_certify,
    torsion_bound_module, wpr_sequence_check, PrismPresentation, WprOutcome,
};

/// Strip `//` line comments outside of string literals.
pub fn strip_comments(src: &str) -> String {
    let bytes = src.as_bytes();
    let mut out = String::with_capacity(src.len());
    let mut i = 0;
    let mut in_string = false;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if in_string {
            out.push(c);
            if c == '\\' && i + 1 < bytes.len() {
                out.push(bytes[i + 1] as char);
                i += 2;
                continue;
            }
            if c == '"' {
                in_string = false;
            }
            i += 1;
        } else if c == '"' {
            in_string = true;
            out.push(c);
            i += 1;
        } else if c == '/' && i + 1 < bytes.len() && bytes[i + 1] == b'/' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn default_order() -> MonomialOrder {
    MonomialOrder::DegRevLex
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RingSpec {
    pub coeff: CoeffKind,
    #[serde(default)]
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: MonomialOrder,
    #[serde(default)]
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ModuleSpec {
    pub ring: String,
    pub rank: usize,
    #[serde(default)]
    pub relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SequenceSpec {
    pub ring: String,
    pub elements: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PrismSpec {
    pub ring: String,
    pub ideal: Vec<String>,
    pub p: u64,
    /// Pairs [s_k, b_k] of covering element and claimed local generator.
    pub charts: Vec<[String; 2]>,
    #[serde(default)]
    pub declared_complete: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct TaskSpec {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub ring: Option<String>,
    #[serde(default)]
    pub module: Option<String>,
    #[serde(default)]
    pub sequence: Option<String>,
    #[serde(default)]
    pub element: Option<String>,
    #[serde(default)]
    pub a: Option<String>,
    #[serde(default)]
    pub b: Option<String>,
    #[serde(default)]
    pub cover: Option<String>,
    /// For glue-wpr: one sequence reference per chart of the cover.
    #[serde(default)]
    pub charts: Option<Vec<String>>,
    #[serde(default)]
    pub prism: Option<String>,
    #[serde(default)]
    pub bound: Option<usize>,
    #[serde(default)]
    pub precision: Option<usize>,
    #[serde(default)]
    pub q: Option<usize>,
    #[serde(default)]
    pub q_max: Option<usize>,
    #[serde(default)]
    pub k_max: Option<usize>,
    /// For verify tasks: path to an existing certificate file.
    #[serde(default)]
    pub path: Option<String>,
    /// For explore tasks: pool of elements to combine.
    #[serde(default)]
    pub pool: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct Manifest {
    #[serde(default)]
    pub rings: BTreeMap<String, RingSpec>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub sequences: BTreeMap<String, SequenceSpec>,
    #[serde(default)]
    pub prisms: BTreeMap<String, PrismSpec>,
    pub tasks: Vec<TaskSpec>,
}

pub fn parse_manifest(src: &str) -> Result<Manifest> {
    let clean = strip_comments(src);
    serde_json::from_str(&clean)
        .map_err(|e| Error::Parse(format!("manifest: {e} (line/column refer to the comment-stripped text)")))
}

/// All named objects resolved and constructed once.
pub struct Resolved {
    pub rings: BTreeMap<String, Ring>,
    pub modules: BTreeMap<String, ModulePresentation>,
    pub sequences: BTreeMap<String, (Ring, Vec<Poly>)>,
    pub prisms: BTreeMap<String, PrismPresentation>,
}

pub fn resolve(manifest: &Manifest) -> Result<Resolved> {
    let mut rings = BTreeMap::new();
    for (name, spec) in &manifest.rings {
        let desc = RingDescriptor {
            coeff: spec.coeff.clone(),
            vars: spec.vars.clone(),
            order: spec.order,
            ideal: spec.ideal.clone(),
        };
        let ring = desc
            .build()
            .map_err(|e| Error::Parse(format!("ring `{name}`: {e}")))?;
        rings.insert(name.clone(), ring);
    }
    let get_ring = |name: &str| -> Result<Ring> {
        rings
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("undefined ring `{name}`")))
    };
    let mut modules = BTreeMap::new();
    for (name, spec) in &manifest.modules {
        let ring = get_ring(&spec.ring)?;
        let m = build_module(&ring, spec.rank, &spec.relations)
            .map_err(|e| Error::Parse(format!("module `{name}`: {e}")))?;
        modules.insert(name.clone(), m);
    }
    let mut sequences = BTreeMap::new();
    for (name, spec) in &manifest.sequences {
        let ring = get_ring(&spec.ring)?;
        let elems = spec
            .elements
            .iter()
            .map(|s| ring.parse_element(s))
            .collect::<Result<Vec<Poly>>>()
            .map_err(|e| Error::Parse(format!("sequence `{name}`: {e}")))?;
        sequences.insert(name.clone(), (ring, elems));
    }
    let mut prisms = BTreeMap::new();
    for (name, spec) in &manifest.prisms {
        let ring = get_ring(&spec.ring)?;
        let input = PrismInput {
            ring: RingDescriptor::of(&ring),
            ideal: spec.ideal.clone(),
            p: spec.p,
            charts: spec.charts.clone(),
            declared_complete: spec.declared_complete,
        };
        let prism = input
            .build()
            .map_err(|e| Error::Parse(format!("prism `{name}`: {e}")))?;
        prisms.insert(name.clone(), prism);
    }
    Ok(Resolved { rings, modules, sequences, prisms })
}

/// Determinacy of one executed task, for the exit-code contract.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskStatus {
    Determined,
    Undetermined(String),
}

pub struct TaskResult {
    pub echo: TaskEcho,
    pub status: TaskStatus,
    pub payload: Option<Payload>,
}

/// Bound/precision overrides from the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub bound: Option<usize>,
    pub precision: Option<usize>,
}

struct TaskCtx<'a> {
    resolved: &'a Resolved,
    task: &'a TaskSpec,
    overrides: Overrides,
}

impl<'a> TaskCtx<'a> {
    fn missing(&self, what: &str) -> Error {
        Error::Parse(format!("task `{}`: missing `{what}`", self.task.name))
    }

    fn ring(&self) -> Result<Ring> {
        let name = self.task.ring.as_ref().ok_or_else(|| self.missing("ring"))?;
        self.resolved
            .rings
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("task `{}`: undefined ring `{name}`", self.task.name)))
    }

    /// The named module, or the free rank-1 module over the named ring.
    fn module(&self) -> Result<ModulePresentation> {
        if let Some(name) = &self.task.module {
            return self.resolved.modules.get(name).cloned().ok_or_else(|| {
                Error::Parse(format!("task `{}`: undefined module `{name}`", self.task.name))
            });
        }
        Ok(ModulePresentation::free(self.ring()?, 1))
    }

    fn sequence(&self, field: &Option<String>, label: &str) -> Result<(Ring, Vec<Poly>)> {
        let name = field.as_ref().ok_or_else(|| self.missing(label))?;
        self.resolved.sequences.get(name).cloned().ok_or_else(|| {
            Error::Parse(format!("task `{}`: undefined sequence `{name}`", self.task.name))
        })
    }

    /// A sequence in the coordinates of a given ring (its elements re-parsed
    /// there, so module tasks can use sequences declared over the same ring).
    fn sequence_in(&self, ring: &Ring) -> Result<Vec<Poly>> {
        let (seq_ring, elems) = self.sequence(&self.task.sequence, "sequence")?;
        if &seq_ring == ring {
            return Ok(elems);
        }
        elems
            .iter()
            .map(|p| ring.parse_element(&seq_ring.display_element(p)))
            .collect()
    }

    fn element(&self, field: &Option<String>, label: &str, ring: &Ring) -> Result<Poly> {
        let src = field.as_ref().ok_or_else(|| self.missing(label))?;
        ring.parse_element(src)
    }

    fn bound(&self) -> Result<usize> {
        self.overrides
            .bound
            .or(self.task.bound)
            .filter(|b| *b >= 1)
            .ok_or_else(|| self.missing("positive bound"))
    }

    fn precision(&self) -> Result<usize> {
        self.overrides
            .precision
            .or(self.task.precision)
            .ok_or_else(|| self.missing("precision"))
    }
}

fn outcome_status(outcome: &WprOutcome) -> TaskStatus {
    match outcome {
        WprOutcome::Certified(_) => TaskStatus::Determined,
        WprOutcome::Undetermined { reason } => TaskStatus::Undetermined(reason.clone()),
    }
}

pub fn execute_task(
    resolved: &Resolved,
    task: &TaskSpec,
    overrides: Overrides,
) -> Result<TaskResult> {
    let ctx = TaskCtx { resolved, task, overrides };
    let echo = TaskEcho { name: task.name.clone(), kind: task.kind.clone() };
    let done = |status: TaskStatus, payload: Payload| -> Result<TaskResult> {
        Ok(TaskResult { echo: echo.clone(), status, payload: Some(payload) })
    };
    match task.kind.as_str() {
        "wpr-check" => {
            let (ring, seq) = ctx.sequence(&task.sequence, "sequence")?;
            let out = wpr_sequence_check(&ring, &seq, ctx.bound()?)?;
            done(outcome_status(&out), Payload::Wpr { outcome: outcome_to_data(&out) })
        }
        "element-wpr" => {
            let ring = ctx.ring()?;
            let a = ctx.element(&task.element, "element", &ring)?;
            let out = element_wpr(&ring, &a, ctx.bound()?)?;
            done(outcome_status(&out), Payload::Wpr { outcome: outcome_to_data(&out) })
        }
        "quotient-wpr" => {
            let ring = ctx.ring()?;
            let a = ctx.element(&task.a, "a", &ring)?;
            let b = ctx.element(&task.b, "b", &ring)?;
            let out = quotient_wpr_certify(&ring, &a, &b, ctx.bound()?)?;
            done(outcome_status(&out), Payload::Wpr { outcome: outcome_to_data(&out) })
        }
        "glue-wpr" => {
            let (ring, cover) = ctx.sequence(&task.cover, "cover")?;
            let chart_names = task.charts.as_ref().ok_or_else(|| ctx.missing("charts"))?;
            let mut charts = vec![];
            for name in chart_names {
                let (chart_ring, elems) =
                    ctx.sequence(&Some(name.clone()), "chart sequence")?;
                if chart_ring != ring {
                    return Err(Error::Parse(format!(
                        "task `{}`: chart sequence `{name}` lives over a different ring",
                        task.name
                    )));
                }
                charts.push(elems);
            }
            let out = glue_wpr(&ring, &cover, &charts, ctx.bound()?)?;
            done(outcome_status(&out), Payload::Wpr { outcome: outcome_to_data(&out) })
        }
        "prism-wpr" => {
            let name = task.prism.as_ref().ok_or_else(|| ctx.missing("prism"))?;
            let prism = resolved.prisms.get(name).ok_or_else(|| {
                Error::Parse(format!("task `{}`: undefined prism `{name}`", task.name))
            })?;
            let bound = ctx.bound()?;
            let report = prism_wpr(prism, bound)?;
            let status = outcome_status(&report.outcome);
            let input = PrismInput {
                ring: RingDescriptor::of(&prism.ring),
                ideal: prism
                    .ideal_gens
                    .iter()
                    .map(|g| prism.ring.display_element(g))
                    .collect(),
                p: prism.p,
                charts: prism
                    .charts
                    .iter()
                    .map(|(s, b)| {
                        [prism.ring.display_element(s), prism.ring.display_element(b)]
                    })
                    .collect(),
                declared_complete: prism.declared_complete,
            };
            done(
                status,
                Payload::Prism {
                    input,
                    bound,
                    label: report.label,
                    stages: report.stages,
                    outcome: outcome_to_data(&report.outcome),
                },
            )
        }
        "torsion-bound" => {
            let m = ctx.module()?;
            let a = ctx.element(&task.element, "element", &m.ring)?;
            let bound = ctx.bound()?;
            let report = torsion_bound_module(&m, &a, bound)?;
            let status = match report.tb {
                Some(_) => TaskStatus::Determined,
                None => TaskStatus::Undetermined(format!("no stabilization within {bound}")),
            };
            done(
                status,
                Payload::TorsionBound {
                    module: ModuleDescriptor::of(&m),
                    element: m.ring.display_element(&a),
                    bound,
                    report,
                },
            )
        }
        "lemma54" => {
            let ring = ctx.ring()?;
            let a = ctx.element(&task.a, "a", &ring)?;
            let b = ctx.element(&task.b, "b", &ring)?;
            let k_max = task.k_max.ok_or_else(|| ctx.missing("k_max"))?;
            let bound = ctx.bound()?;
            let report = lemma54_verify(&ring, &a, &b, k_max, bound)?;
            if !report.ok {
                return Err(Error::InconsistentCertificate(
                    "torsion bound inequality violated".into(),
                ));
            }
            done(
                TaskStatus::Determined,
                Payload::Lemma54 {
                    ring: RingDescriptor::of(&ring),
                    a: ring.display_element(&a),
                    b: ring.display_element(&b),
                    k_max,
                    bound,
                    report,
                },
            )
        }
        "flatness" => {
            let m = ctx.module()?;
            let seq = ctx.sequence_in(&m.ring)?;
            let q_max = task.q_max.ok_or_else(|| ctx.missing("q_max"))?;
            let verdict = is_adically_flat(&m, &seq, q_max)?;
            done(
                TaskStatus::Determined,
                Payload::Flatness {
                    module: ModuleDescriptor::of(&m),
                    sequence: seq.iter().map(|p| m.ring.display_element(p)).collect(),
                    q_max,
                    verdict,
                },
            )
        }
        "gamma" => {
            let m = ctx.module()?;
            let seq = ctx.sequence_in(&m.ring)?;
            let bound = ctx.bound()?;
            let outcome = gamma(&m, &seq, bound)?;
            let result = gamma_to_data(&outcome)?;
            let status = if result.stabilized_at.is_some() {
                TaskStatus::Determined
            } else {
                TaskStatus::Undetermined(format!("annihilator chain open at {bound}"))
            };
            done(
                status,
                Payload::Gamma {
                    module: ModuleDescriptor::of(&m),
                    sequence: seq.iter().map(|p| m.ring.display_element(p)).collect(),
                    bound,
                    result,
                },
            )
        }
        "lambda" => {
            let m = ctx.module()?;
            let seq = ctx.sequence_in(&m.ring)?;
            let precision = ctx.precision()?;
            let sys = lambda_system(&m, &seq, precision)?;
            let result = LambdaData {
                precision,
                level_sizes: sys.levels.iter().map(level_size).collect::<Result<Vec<_>>>()?,
                system_verified: verify_adic_system(&sys)?,
            };
            done(
                TaskStatus::Determined,
                Payload::Lambda {
                    module: ModuleDescriptor::of(&m),
                    sequence: seq.iter().map(|p| m.ring.display_element(p)).collect(),
                    result,
                },
            )
        }
        "towers" => {
            let m = ctx.module()?;
            let seq = ctx.sequence_in(&m.ring)?;
            let bound = ctx.bound()?;
            let (torsion_reports, completion_reports) = tower_reports(&m, &seq, bound)?;
            let undecided = torsion_reports
                .iter()
                .chain(&completion_reports)
                .any(|r| matches!(r.verdict, SystemVerdict::Undetermined));
            let status = if undecided {
                TaskStatus::Undetermined("a tower verdict is undetermined at the bound".into())
            } else {
                TaskStatus::Determined
            };
            done(
                status,
                Payload::Towers {
                    module: ModuleDescriptor::of(&m),
                    sequence: seq.iter().map(|p| m.ring.display_element(p)).collect(),
                    bound,
                    torsion_reports,
                    completion_reports,
                },
            )
        }
        "compare" => {
            let m = ctx.module()?;
            let seq = ctx.sequence_in(&m.ring)?;
            let q = task.q.ok_or_else(|| ctx.missing("q"))?;
            let bound = ctx.bound()?;
            let report = compare_idealistic_sequential(&m, &seq, q, bound)?;
            let status = match &report.verdict {
                ComparisonVerdict::Isomorphic => TaskStatus::Determined,
                ComparisonVerdict::Mismatch => {
                    return Err(Error::InconsistentCertificate(
                        "idealistic and sequential models disagree".into(),
                    ))
                }
                ComparisonVerdict::Undetermined { side } => {
                    TaskStatus::Undetermined(format!("{side} side open at {bound}"))
                }
            };
            done(
                status,
                Payload::Compare {
                    module: ModuleDescriptor::of(&m),
                    sequence: seq.iter().map(|p| m.ring.display_element(p)).collect(),
                    report,
                },
            )
        }
        "covering" => {
            let (ring, seq) = ctx.sequence(&task.sequence, "sequence")?;
            let report = covering_check(&ring, &seq)?;
            done(
                TaskStatus::Determined,
                Payload::Covering {
                    ring: RingDescriptor::of(&ring),
                    sequence: seq.iter().map(|p| ring.display_element(p)).collect(),
                    report,
                },
            )
        }
        "verify" => {
            let path = task.path.as_ref().ok_or_else(|| ctx.missing("path"))?;
            let text = std::fs::read_to_string(path)?;
            let cf: crate::cert::CertificateFile = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            crate::cert::verify_file(&cf)?;
            Ok(TaskResult { echo, status: TaskStatus::Determined, payload: None })
        }
        "explore" => {
            let ring = ctx.ring()?;
            let pool_src = task.pool.as_ref().ok_or_else(|| ctx.missing("pool"))?;
            let pool = pool_src
                .iter()
                .map(|s| ring.parse_element(s))
                .collect::<Result<Vec<Poly>>>()?;
            let bound = ctx.bound()?;
            // small-instance exploration of sums of ideals: certify each
            // element, each pair, and the concatenation; record outcomes,
            // assert nothing
            let mut notes = vec![];
            let describe = |seq: &[Poly]| -> String {
                seq.iter()
                    .map(|p| ring.display_element(p))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            let mut record = |seq: Vec<Poly>| -> Result<()> {
                let label = describe(&seq);
                match wpr_sequence_check(&ring, &seq, bound)? {
                    WprOutcome::Certified(c) => {
                        let worst = c
                            .degrees
                            .iter()
                            .flat_map(|d| d.witnesses.iter().map(|[i, j]| j - i))
                            .max()
                            .unwrap_or(0);
                        notes.push(format!("({label}): certified, max offset {worst}"));
                    }
                    WprOutcome::Undetermined { reason } => {
                        notes.push(format!("({label}): undetermined ({reason})"));
                    }
                }
                Ok(())
            };
            for a in &pool {
                record(vec![a.clone()])?;
            }
            for (i, a) in pool.iter().enumerate() {
                for b in &pool[i + 1..] {
                    record(vec![a.clone(), b.clone()])?;
                }
            }
            if pool.len() > 2 {
                record(pool.clone())?;
            }
            done(
                TaskStatus::Determined,
                Payload::Explore { ring: RingDescriptor::of(&ring), bound, notes },
            )
        }
        other => Err(Error::Parse(format!("task `{}`: unknown kind `{other}`", task.name))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
    {
      // a sample manifest
      "rings": {
        "Z8": { "coeff": { "kind": "int_mod", "modulus": "8" } },
        "Qxy": { "coeff": { "kind": "rationals" }, "vars": ["x", "y"] }
      },
      "modules": {
        "M": { "ring": "Z8", "rank": 1, "relations": [] }
      },
      "sequences": {
        "two": { "ring": "Z8", "elements": ["2"] },
        "xy": { "ring": "Qxy", "elements": ["x", "y"] }
      },
      "tasks": [
        { "name": "t1", "kind": "wpr-check", "sequence": "xy", "bound": 3 },
        { "name": "t2", "kind": "element-wpr", "ring": "Z8", "element": "2", "bound": 6 },
        { "name": "t3", "kind": "torsion-bound", "module": "M", "element": "2", "bound": 6 }
      ]
    }
    "#;

    #[test]
    fn parses_and_executes_sample() {
        let manifest = parse_manifest(SAMPLE).unwrap();
        let resolved = resolve(&manifest).unwrap();
        for task in &manifest.tasks {
            let res = execute_task(&resolved, task, Overrides::default()).unwrap();
            assert_eq!(res.status, TaskStatus::Determined, "task {}", task.name);
            let payload = res.payload.unwrap();
            crate::cert::verify_payload(&payload).unwrap();
        }
    }

    #[test]
    fn comment_stripping_respects_strings() {
        let s = "{\"a\": \"http://x\", // note\n\"b\": 1}";
        let clean = strip_comments(s);
        assert!(clean.contains("http://x"));
        assert!(!clean.contains("note"));
    }

    #[test]
    fn undefined_references_are_parse_errors() {
        let manifest = parse_manifest(
            r#"{ "tasks": [ { "name": "t", "kind": "wpr-check", "sequence": "nope", "bound": 2 } ] }"#,
        )
        .unwrap();
        let resolved = resolve(&manifest).unwrap();
        let err = execute_task(&resolved, &manifest.tasks[0], Overrides::default());
        assert!(matches!(err, Err(Error::Parse(_))));
    }

    #[test]
    fn bound_override_applies() {
        let manifest = parse_manifest(SAMPLE).unwrap();
        let resolved = resolve(&manifest).unwrap();
        let res = execute_task(
            &resolved,
            &manifest.tasks[2],
            Overrides { bound: Some(2), precision: None },
        )
        .unwrap();
        // bound 2 is too small to certify tb = 3
        assert!(matches!(res.status, TaskStatus::Undetermined(_)));
    }
}

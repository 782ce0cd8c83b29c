//! Weak proregularity engine: torsion bounds, pro-zero certification of
//! Koszul towers, the element/quotient/glue/prism certification routes, and
//! certificate replay. Every emitted certificate is re-verified by the
//! search-free replay routine before it is returned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::Vector;
use crate::module::{annihilator, span_contains, spans_equal, ModulePresentation};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::solve::ideal_membership;
use crate::tower::{cohomology_system, koszul_tower, level_size, Direction, LevelSize, Tower};

/// Annihilator chain Ann(a^j) of a module with the stabilization index
/// (Def: tb is the least j0 with Ann(a^j) = Ann(a^j0) for all j >= j0;
/// a is regular on M iff tb = 0).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorsionBoundReport {
    pub element: String,
    pub bound: usize,
    /// Stabilization index, confirmed over two further exponents; None when
    /// the chain did not visibly stabilize within the bound.
    pub tb: Option<usize>,
    pub chain: Vec<LevelSize>,
    /// For tb = t >= 1: an element of Ann(a^t) outside Ann(a^{t-1}),
    /// witnessing strict growth at the last step.
    pub strict_witness: Option<Vec<String>>,
}

pub fn torsion_bound_module(
    m: &ModulePresentation,
    a: &Poly,
    bound: usize,
) -> Result<TorsionBoundReport> {
    if bound < 1 {
        return Err(Error::PreconditionFailed("torsion bound budget must be >= 1".into()));
    }
    let ring = &m.ring;
    let mut gens: Vec<Vec<Vector>> = vec![];
    let mut chain = vec![];
    for j in 0..=bound {
        let (sub, inc) = annihilator(m, a, j as u32)?;
        chain.push(level_size(&sub)?);
        gens.push(inc.matrix.cols_vec());
    }
    let mut tb = None;
    for t in 0..=bound.saturating_sub(2) {
        if spans_equal(m, &gens[t], &gens[t + 1])? && spans_equal(m, &gens[t + 1], &gens[t + 2])? {
            tb = Some(t);
            break;
        }
    }
    let strict_witness = match tb {
        Some(t) if t >= 1 => {
            let mut w = None;
            for v in &gens[t] {
                if !span_contains(m, &gens[t - 1], v)? {
                    w = Some(v.iter().map(|p| ring.display_element(p)).collect());
                    break;
                }
            }
            w
        }
        _ => None,
    };
    Ok(TorsionBoundReport {
        element: ring.display_element(a),
        bound,
        tb,
        chain,
        strict_witness,
    })
}

/// Torsion bound of the ring itself: the chain Ann_A(a^j).
pub fn torsion_bound_ring(ring: &Ring, a: &Poly, bound: usize) -> Result<TorsionBoundReport> {
    torsion_bound_module(&ModulePresentation::free(ring.clone(), 1), a, bound)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProZeroResult {
    /// For each i <= i_max the least j <= bound with zero induced map
    /// H^q(level j) -> H^q(level i).
    Witnesses { table: Vec<[usize; 2]> },
    Undetermined { frontier: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProZeroOutcome {
    pub q: i64,
    pub i_max: usize,
    pub bound: usize,
    pub result: ProZeroResult,
}

/// Search for pro-zero witnesses of the degree-q cohomology system of an
/// inverse tower.
pub fn pro_zero_check(tower: &Tower, q: i64, i_max: usize, bound: usize) -> Result<ProZeroOutcome> {
    if tower.direction != Direction::Inverse {
        return Err(Error::PreconditionFailed("pro-zero check needs an inverse tower".into()));
    }
    if i_max > bound || bound > tower.bound {
        return Err(Error::PreconditionFailed("pro-zero indices out of range".into()));
    }
    let sys = cohomology_system(tower, q)?;
    let mut table = vec![];
    for i in 0..=i_max {
        let mut found = None;
        for j in i..=bound {
            if sys.composite(j, i)?.is_zero_map()? {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => table.push([i, j]),
            None => {
                return Ok(ProZeroOutcome {
                    q,
                    i_max,
                    bound,
                    result: ProZeroResult::Undetermined { frontier: i },
                })
            }
        }
    }
    Ok(ProZeroOutcome { q, i_max, bound, result: ProZeroResult::Witnesses { table } })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeWitnesses {
    pub q: i64,
    pub witnesses: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TbEntry {
    /// The quotient level: the torsion bound was taken in A/(a^{level}).
    pub level: usize,
    pub tb: usize,
    /// True when the exact bound exceeded budget and the Lemma-style bound
    /// level * l was substituted.
    pub bound_form: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Method {
    Direct,
    ElementTb { tb: usize },
    QuotientThm { tb_profile: Vec<TbEntry> },
    Glued { chart_count: usize, global_offset: usize },
    Prism,
}

/// A sub-certificate with the ring it lives over (localizations and
/// quotients for the composite methods).
#[derive(Clone, Debug)]
pub struct Provenance {
    pub label: String,
    pub ring: Ring,
    pub certificate: WprCertificate,
}

/// Replayable weak-proregularity certificate: witness tables j(i) per
/// negative Koszul degree, verified against the tower rebuilt from the ring
/// and sequence alone.
#[derive(Clone, Debug)]
pub struct WprCertificate {
    pub ring: Ring,
    pub sequence: Vec<Poly>,
    pub bound: usize,
    pub i_max: usize,
    pub method: Method,
    pub degrees: Vec<DegreeWitnesses>,
    pub provenance: Vec<Provenance>,
}

#[derive(Clone, Debug)]
pub enum WprOutcome {
    Certified(Box<WprCertificate>),
    Undetermined { reason: String },
}

impl WprOutcome {
    pub fn certificate(&self) -> Option<&WprCertificate> {
        match self {
            WprOutcome::Certified(c) => Some(c),
            WprOutcome::Undetermined { .. } => None,
        }
    }
}

/// Search-free replay: rebuild the Koszul tower and check every stored
/// witness map is zero, for every negative degree, recursively through the
/// provenance chain.
pub fn replay_certificate(cert: &WprCertificate) -> Result<()> {
    let n = cert.sequence.len() as i64;
    let tower = koszul_tower(&cert.ring, &cert.sequence, cert.bound)?;
    for q in -n..=-1 {
        let d = cert
            .degrees
            .iter()
            .find(|d| d.q == q)
            .ok_or_else(|| Error::InconsistentCertificate(format!("degree {q} missing")))?;
        let sys = cohomology_system(&tower, q)?;
        for (i, w) in d.witnesses.iter().enumerate() {
            let [wi, wj] = *w;
            if wi != i || wj > cert.bound || wj < wi {
                return Err(Error::InconsistentCertificate(format!(
                    "malformed witness ({wi}, {wj}) at degree {q}"
                )));
            }
            if !sys.composite(wj, wi)?.is_zero_map()? {
                return Err(Error::InconsistentCertificate(format!(
                    "witness ({wi}, {wj}) at degree {q} is not a zero map"
                )));
            }
        }
        if d.witnesses.len() != cert.i_max + 1 {
            return Err(Error::InconsistentCertificate(format!(
                "degree {q} table does not reach i_max"
            )));
        }
    }
    for p in &cert.provenance {
        replay_certificate(&p.certificate)?;
    }
    Ok(())
}

fn is_regular(ring: &Ring, a: &Poly) -> Result<bool> {
    let free = ModulePresentation::free(ring.clone(), 1);
    Ok(annihilator(&free, a, 1)?.0.is_zero_module()?)
}

/// Single-element certification via the torsion bound: tb = t yields the
/// witness function j(i) = i + t, then the claim is re-verified degreewise.
pub fn element_wpr(ring: &Ring, a: &Poly, bound: usize) -> Result<WprOutcome> {
    let report = torsion_bound_ring(ring, a, bound)?;
    let t = match report.tb {
        Some(t) => t,
        None => {
            return Ok(WprOutcome::Undetermined {
                reason: format!("torsion bound of {} undetermined at {}", report.element, bound),
            })
        }
    };
    let i_max = bound - t;
    let witnesses: Vec<[usize; 2]> = (0..=i_max).map(|i| [i, i + t]).collect();
    let cert = WprCertificate {
        ring: ring.clone(),
        sequence: vec![a.clone()],
        bound,
        i_max,
        method: Method::ElementTb { tb: t },
        degrees: vec![DegreeWitnesses { q: -1, witnesses }],
        provenance: vec![],
    };
    replay_certificate(&cert)?;
    // independent search must succeed with witnesses at least as tight
    let tower = koszul_tower(ring, &[a.clone()], bound)?;
    match pro_zero_check(&tower, -1, i_max, bound)?.result {
        ProZeroResult::Witnesses { table } => {
            for [i, j] in table {
                if j > i + t {
                    return Err(Error::InconsistentCertificate(
                        "search found a later witness than the torsion bound predicts".into(),
                    ));
                }
            }
        }
        ProZeroResult::Undetermined { frontier } => {
            return Err(Error::InconsistentCertificate(format!(
                "pro-zero search failed at i = {frontier} despite torsion bound {t}"
            )))
        }
    }
    Ok(WprOutcome::Certified(Box::new(cert)))
}

/// Direct certification of a sequence: pro-zero search in every negative
/// degree of the Koszul power tower.
pub fn wpr_sequence_check(ring: &Ring, seq: &[Poly], bound: usize) -> Result<WprOutcome> {
    if seq.is_empty() || bound < 1 {
        return Err(Error::PreconditionFailed("nonempty sequence and bound >= 1 required".into()));
    }
    let tower = koszul_tower(ring, seq, bound)?;
    let i_max = (bound / 2).max(1).min(bound);
    let n = seq.len() as i64;
    let mut degrees = vec![];
    for q in -n..=-1 {
        match pro_zero_check(&tower, q, i_max, bound)?.result {
            ProZeroResult::Witnesses { table } => {
                degrees.push(DegreeWitnesses { q, witnesses: table })
            }
            ProZeroResult::Undetermined { frontier } => {
                return Ok(WprOutcome::Undetermined {
                    reason: format!("degree {q} pro-zero search stuck at i = {frontier}"),
                })
            }
        }
    }
    let cert = WprCertificate {
        ring: ring.clone(),
        sequence: seq.to_vec(),
        bound,
        i_max,
        method: Method::Direct,
        degrees,
        provenance: vec![],
    };
    replay_certificate(&cert)?;
    Ok(WprOutcome::Certified(Box::new(cert)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma54Report {
    /// Torsion bound of b on A/(a).
    pub l: usize,
    /// Actual tb of b on A/(a^{k+1}) for k = 0..=k_max.
    pub profile: Vec<usize>,
    /// The asserted bound (k+1) * l per level.
    pub bound_values: Vec<usize>,
    pub ok: bool,
}

/// Verify the quotient-tower torsion bound inequality
/// tb_{A/(a^{k+1})}(b) <= (k+1) * tb_{A/(a)}(b) for a regular.
pub fn lemma54_verify(
    ring: &Ring,
    a: &Poly,
    b: &Poly,
    k_max: usize,
    bound: usize,
) -> Result<Lemma54Report> {
    if !is_regular(ring, a)? {
        return Err(Error::PreconditionFailed("a is not regular".into()));
    }
    let tb_on_quotient = |power: u32| -> Result<Option<usize>> {
        let quot = ring.quotient(&[ring.pow(a, power)])?;
        let proj = ring.projection_to(&quot)?;
        Ok(torsion_bound_ring(&quot, &proj.apply(b)?, bound)?.tb)
    };
    let l = tb_on_quotient(1)?
        .ok_or_else(|| Error::PreconditionFailed("base torsion bound undetermined".into()))?;
    let mut profile = vec![];
    let mut bound_values = vec![];
    let mut ok = true;
    for k in 0..=k_max {
        let t = tb_on_quotient(k as u32 + 1)?.ok_or_else(|| {
            Error::PreconditionFailed(format!("torsion bound at level {k} undetermined"))
        })?;
        let cap = (k + 1) * l;
        ok &= t <= cap;
        profile.push(t);
        bound_values.push(cap);
    }
    Ok(Lemma54Report { l, profile, bound_values, ok })
}

/// Certify the length-2 sequence (a, b) with a regular and b weakly
/// proregular modulo a: H^{-2} witnesses come from regularity, H^{-1}
/// witnesses are j(i) = i + tb_{A/(a^i)}(b), and the whole table is
/// cross-checked by the direct search.
pub fn quotient_wpr_certify(
    ring: &Ring,
    a: &Poly,
    b: &Poly,
    bound: usize,
) -> Result<WprOutcome> {
    if !is_regular(ring, a)? {
        return Err(Error::PreconditionFailed("a is not regular".into()));
    }
    let abar = ring.quotient(&[a.clone()])?;
    let proj = ring.projection_to(&abar)?;
    let bbar = proj.apply(b)?;
    let sub = match element_wpr(&abar, &bbar, bound)? {
        WprOutcome::Certified(c) => c,
        WprOutcome::Undetermined { reason } => {
            return Err(Error::PreconditionFailed(format!(
                "torsion bound of b on A/(a) undetermined: {reason}"
            )))
        }
    };
    let lbar = match sub.method {
        Method::ElementTb { tb } => tb,
        _ => unreachable!("element_wpr always emits ElementTb"),
    };
    let mut i_max = (bound / 2).max(1).min(bound);
    // H^{-1}: j(i) = i + tb_{A/(a^i)}(b), exact when affordable
    let mut tb_profile = vec![];
    let mut w1: Vec<[usize; 2]> = vec![[0, 0]];
    for i in 1..=i_max {
        let quot = ring.quotient(&[ring.pow(a, i as u32)])?;
        let pq = ring.projection_to(&quot)?;
        let (t, bound_form) = match torsion_bound_ring(&quot, &pq.apply(b)?, bound)?.tb {
            Some(t) => (t, false),
            None => (i * lbar, true),
        };
        if i + t > bound {
            i_max = i - 1;
            break;
        }
        tb_profile.push(TbEntry { level: i, tb: t, bound_form });
        w1.push([i, i + t]);
    }
    w1.truncate(i_max + 1);
    let seq = vec![a.clone(), b.clone()];
    let tower = koszul_tower(ring, &seq, bound)?;
    // H^{-2}: regularity of a forces the system to vanish levelwise; the
    // search confirms with witnesses j(i) = i
    let w2 = match pro_zero_check(&tower, -2, i_max, bound)?.result {
        ProZeroResult::Witnesses { table } => table,
        ProZeroResult::Undetermined { frontier } => {
            return Err(Error::InconsistentCertificate(format!(
                "H^-2 not pro-zero at i = {frontier} despite a regular"
            )))
        }
    };
    // cross-check the claimed H^{-1} table by the direct search
    match pro_zero_check(&tower, -1, i_max, bound)?.result {
        ProZeroResult::Witnesses { .. } => {}
        ProZeroResult::Undetermined { frontier } => {
            return Err(Error::InconsistentCertificate(format!(
                "H^-1 pro-zero search failed at i = {frontier}"
            )))
        }
    }
    let cert = WprCertificate {
        ring: ring.clone(),
        sequence: seq,
        bound,
        i_max,
        method: Method::QuotientThm { tb_profile },
        degrees: vec![
            DegreeWitnesses { q: -2, witnesses: w2 },
            DegreeWitnesses { q: -1, witnesses: w1 },
        ],
        provenance: vec![Provenance {
            label: "element certificate for b on A/(a)".into(),
            ring: abar,
            certificate: *sub,
        }],
    };
    replay_certificate(&cert)?;
    Ok(WprOutcome::Certified(Box::new(cert)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoveringReport {
    pub covers: bool,
    /// Coefficients expressing 1 in terms of the sequence.
    pub witness: Option<Vec<String>>,
}

/// Is (s_1, ..., s_n) a covering sequence, i.e. does it generate the unit
/// ideal? The witness is a Bezout-style coefficient vector.
pub fn covering_check(ring: &Ring, s: &[Poly]) -> Result<CoveringReport> {
    if s.is_empty() {
        return Err(Error::PreconditionFailed("empty covering sequence".into()));
    }
    match ideal_membership(ring, s, &ring.one())? {
        Some(w) => Ok(CoveringReport {
            covers: true,
            witness: Some(w.iter().map(|p| ring.display_element(p)).collect()),
        }),
        None => Ok(CoveringReport { covers: false, witness: None }),
    }
}

/// Glue per-chart certificates over a covering sequence: each chart
/// certifies the localized concatenation of all chart generator lists, the
/// global witness offset is the maximum of the chart offsets, and the glued
/// table is cross-checked on the global tower.
pub fn glue_wpr(
    ring: &Ring,
    s: &[Poly],
    chart_gens: &[Vec<Poly>],
    bound: usize,
) -> Result<WprOutcome> {
    if s.len() != chart_gens.len() {
        return Err(Error::PreconditionFailed("one generator list per chart required".into()));
    }
    let cover = covering_check(ring, s)?;
    if !cover.covers {
        return Err(Error::PreconditionFailed("not a covering sequence".into()));
    }
    let concat: Vec<Poly> = chart_gens.iter().flatten().cloned().collect();
    if concat.is_empty() {
        return Err(Error::PreconditionFailed("no chart generators".into()));
    }
    let mut provenance = vec![];
    let mut offset = 0usize;
    for (k, sk) in s.iter().enumerate() {
        let (loc, hom) = ring.localize(sk)?;
        let own: Vec<Poly> = chart_gens[k]
            .iter()
            .map(|b| hom.apply(b))
            .collect::<Result<_>>()?;
        let all: Vec<Poly> = concat.iter().map(|b| hom.apply(b)).collect::<Result<_>>()?;
        for b in &all {
            if ideal_membership(&loc, &own, b)?.is_none() {
                return Err(Error::PreconditionFailed(format!(
                    "chart {k}: local generators do not generate the ideal"
                )));
            }
        }
        let local = match wpr_sequence_check(&loc, &all, bound)? {
            WprOutcome::Certified(c) => c,
            WprOutcome::Undetermined { reason } => {
                return Ok(WprOutcome::Undetermined {
                    reason: format!("chart {k}: {reason}"),
                })
            }
        };
        for d in &local.degrees {
            for [i, j] in &d.witnesses {
                offset = offset.max(j - i);
            }
        }
        provenance.push(Provenance {
            label: format!("chart {k}: localization at {}", ring.display_element(sk)),
            ring: loc,
            certificate: *local,
        });
    }
    if offset > bound {
        return Ok(WprOutcome::Undetermined {
            reason: format!("global offset {offset} exceeds bound {bound}"),
        });
    }
    let i_max = ((bound / 2).max(1)).min(bound - offset);
    let n = concat.len() as i64;
    let degrees: Vec<DegreeWitnesses> = (-n..=-1)
        .map(|q| DegreeWitnesses {
            q,
            witnesses: (0..=i_max).map(|i| [i, i + offset]).collect(),
        })
        .collect();
    let cert = WprCertificate {
        ring: ring.clone(),
        sequence: concat.clone(),
        bound,
        i_max,
        method: Method::Glued { chart_count: s.len(), global_offset: offset },
        degrees,
        provenance,
    };
    // global cross-check by direct search before the (also global) replay
    let tower = koszul_tower(ring, &concat, bound)?;
    for q in -n..=-1 {
        if let ProZeroResult::Undetermined { frontier } =
            pro_zero_check(&tower, q, i_max, bound)?.result
        {
            return Err(Error::InconsistentCertificate(format!(
                "glued degree {q} fails the global search at i = {frontier}"
            )));
        }
    }
    replay_certificate(&cert)?;
    Ok(WprOutcome::Certified(Box::new(cert)))
}

/// Chart data for a prism-style presentation: the ring, the ideal I, the
/// prime p, and per chart a covering element s_k with a claimed regular
/// single generator b_k of the localized ideal. Completeness is declared
/// input and never checked.
#[derive(Clone, Debug)]
pub struct PrismPresentation {
    pub ring: Ring,
    pub ideal_gens: Vec<Poly>,
    pub p: u64,
    pub charts: Vec<(Poly, Poly)>,
    pub declared_complete: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrismStage {
    pub stage: usize,
    pub name: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct PrismReport {
    pub label: String,
    pub declared_complete: bool,
    pub stages: Vec<PrismStage>,
    pub outcome: WprOutcome,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Five-stage pipeline for the ideal I + (p): covering, per-chart regular
/// single generators of I, per-chart p-torsion bounds modulo I, per-chart
/// quotient certificates for (b_k, p), and global gluing.
pub fn prism_wpr(prism: &PrismPresentation, bound: usize) -> Result<PrismReport> {
    if prism.charts.is_empty() {
        return Err(Error::PreconditionFailed("prism needs at least one chart".into()));
    }
    if !is_prime(prism.p) {
        return Err(Error::PreconditionFailed(format!("{} is not prime", prism.p)));
    }
    let ring = &prism.ring;
    let mut stages = vec![];
    let fail = |stage: usize, msg: String| -> Error {
        Error::PreconditionFailed(format!("prism stage {stage}: {msg}"))
    };

    let s: Vec<Poly> = prism.charts.iter().map(|(sk, _)| sk.clone()).collect();
    let cover = covering_check(ring, &s)?;
    if !cover.covers {
        return Err(fail(1, "chart elements do not cover".into()));
    }
    stages.push(PrismStage {
        stage: 1,
        name: "covering".into(),
        detail: format!("witness {:?}", cover.witness),
    });

    for (k, (sk, bk)) in prism.charts.iter().enumerate() {
        let (loc, hom) = ring.localize(sk)?;
        let b_loc = hom.apply(bk)?;
        if !is_regular(&loc, &b_loc)? {
            return Err(fail(2, format!("chart {k}: generator is a zero-divisor")));
        }
        let i_loc: Vec<Poly> = prism
            .ideal_gens
            .iter()
            .map(|g| hom.apply(g))
            .collect::<Result<_>>()?;
        for g in &i_loc {
            if ideal_membership(&loc, &[b_loc.clone()], g)?.is_none() {
                return Err(fail(2, format!("chart {k}: generator does not generate I locally")));
            }
        }
        if ideal_membership(&loc, &i_loc, &b_loc)?.is_none() {
            return Err(fail(2, format!("chart {k}: generator is not in the localized ideal")));
        }
        stages.push(PrismStage {
            stage: 2,
            name: format!("chart {k} regular generator"),
            detail: ring.display_element(bk),
        });

        let quot = loc.quotient(&[b_loc])?;
        let proj = loc.projection_to(&quot)?;
        let p_bar = proj.apply(&loc.int(prism.p as i64))?;
        match torsion_bound_ring(&quot, &p_bar, bound)?.tb {
            Some(t) => stages.push(PrismStage {
                stage: 3,
                name: format!("chart {k} p-torsion bound on A/I"),
                detail: format!("tb = {t}"),
            }),
            None => {
                return Ok(PrismReport {
                    label: prism_label(prism),
                    declared_complete: prism.declared_complete,
                    stages,
                    outcome: WprOutcome::Undetermined {
                        reason: format!("chart {k}: p-torsion bound on A/I undetermined at {bound}"),
                    },
                })
            }
        }

        let (loc2, hom2) = ring.localize(sk)?;
        let p_elem = loc2.int(prism.p as i64);
        match quotient_wpr_certify(&loc2, &hom2.apply(bk)?, &p_elem, bound)? {
            WprOutcome::Certified(c) => stages.push(PrismStage {
                stage: 4,
                name: format!("chart {k} quotient certificate"),
                detail: format!("i_max = {}", c.i_max),
            }),
            WprOutcome::Undetermined { reason } => {
                return Ok(PrismReport {
                    label: prism_label(prism),
                    declared_complete: prism.declared_complete,
                    stages,
                    outcome: WprOutcome::Undetermined {
                        reason: format!("chart {k}: {reason}"),
                    },
                })
            }
        }
    }

    let chart_gens: Vec<Vec<Poly>> = prism
        .charts
        .iter()
        .map(|(_, bk)| vec![bk.clone(), ring.int(prism.p as i64)])
        .collect();
    let glued = glue_wpr(ring, &s, &chart_gens, bound)?;
    let outcome = match glued {
        WprOutcome::Certified(c) => {
            stages.push(PrismStage {
                stage: 5,
                name: "glue".into(),
                detail: format!("global offset per {:?}", c.method),
            });
            let cert = WprCertificate { method: Method::Prism, ..*c };
            replay_certificate(&cert)?;
            WprOutcome::Certified(Box::new(cert))
        }
        und => und,
    };
    Ok(PrismReport {
        label: prism_label(prism),
        declared_complete: prism.declared_complete,
        stages,
        outcome,
    })
}

fn prism_label(prism: &PrismPresentation) -> String {
    if prism.declared_complete {
        "WPR of I + (p)".into()
    } else {
        "WPR of I + (p) under the stated chart and torsion hypotheses".into()
    }
}

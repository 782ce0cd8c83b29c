//! Koszul power towers and their duals, Cech complexes, augmentation
//! sequences, and the torsion/completion towers of a module, together with
//! cohomology-system reports (stabilization, pro-zero, Mittag-Leffler).

use serde::{Deserialize, Serialize};

use crate::complex::{
    hom_complex, hom_dual_map, is_exact_sequence, tensor_complex, tensor_complex_maps,
    BoundedComplex, ComplexMap,
};
use crate::error::{Error, Result};
use crate::module::{
    cardinality, field_dimension, spans_equal, ModuleMap, ModulePresentation, Subquotient,
};
use crate::poly::Poly;
use crate::ring::{Ring, RingHom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Inverse,
    Direct,
}

/// A tower of complexes indexed 0..=bound. For an inverse tower,
/// transitions[i] maps level i+1 to level i; for a direct tower, level i to
/// level i+1.
#[derive(Clone, Debug)]
pub struct Tower {
    pub direction: Direction,
    pub ring: Ring,
    pub bound: usize,
    pub complexes: Vec<BoundedComplex>,
    pub transitions: Vec<ComplexMap>,
}

impl Tower {
    pub fn level(&self, i: usize) -> &BoundedComplex {
        &self.complexes[i]
    }

    /// Composite transition: for inverse towers from level j down to level i
    /// (j >= i); for direct towers from level i up to level j.
    pub fn composite(&self, j: usize, i: usize) -> Result<ComplexMap> {
        if i > j || j > self.bound {
            return Err(Error::Shape(format!("bad transition indices {j} -> {i}")));
        }
        match self.direction {
            Direction::Inverse => {
                let mut acc = ComplexMap::identity(&self.complexes[j]);
                for k in (i..j).rev() {
                    acc = acc.compose(&self.transitions[k])?;
                }
                Ok(acc)
            }
            Direction::Direct => {
                let mut acc = ComplexMap::identity(&self.complexes[i]);
                for k in i..j {
                    acc = acc.compose(&self.transitions[k])?;
                }
                Ok(acc)
            }
        }
    }
}

/// Two-term complex A --a^i--> A in degrees -1, 0.
fn koszul_factor(ring: &Ring, a: &Poly, i: u32) -> Result<BoundedComplex> {
    let free = ModulePresentation::free(ring.clone(), 1);
    let d = ModuleMap::mult(&free, &ring.pow(a, i));
    BoundedComplex::new(ring.clone(), -1, vec![free.clone(), free], vec![d])
}

/// K(A; a_seq^i): the tensor product over the sequence of the two-term
/// complexes, degrees -n..0, rank binomial(n, -q) in degree q.
pub fn koszul(ring: &Ring, seq: &[Poly], i: u32) -> Result<BoundedComplex> {
    if seq.is_empty() {
        return Err(Error::PreconditionFailed("empty sequence".into()));
    }
    let mut acc = koszul_factor(ring, &seq[0], i)?;
    for a in &seq[1..] {
        acc = tensor_complex(&acc, &koszul_factor(ring, a, i)?)?;
    }
    Ok(acc)
}

/// The transition K(A; a_seq^{i+1}) -> K(A; a_seq^i): identity in degree 0,
/// multiplication by the elements in lower degrees (tensor of the one-step
/// factor transitions).
fn koszul_step(ring: &Ring, seq: &[Poly], i: u32) -> Result<ComplexMap> {
    let factor_step = |a: &Poly| -> Result<ComplexMap> {
        let src = koszul_factor(ring, a, i + 1)?;
        let tgt = koszul_factor(ring, a, i)?;
        let free = ModulePresentation::free(ring.clone(), 1);
        let deg_m1 = ModuleMap::mult(&free, a);
        let deg_0 = ModuleMap::identity(&free);
        ComplexMap::new(src, tgt, -1, vec![deg_m1, deg_0])
    };
    let mut acc = factor_step(&seq[0])?;
    for a in &seq[1..] {
        acc = tensor_complex_maps(&acc, &factor_step(a)?)?;
    }
    Ok(acc)
}

/// Inverse tower K(A; a^i) for i = 0..=n with transitions mu_{i+1,i}.
pub fn koszul_tower(ring: &Ring, seq: &[Poly], n: usize) -> Result<Tower> {
    if seq.is_empty() {
        return Err(Error::PreconditionFailed("empty sequence".into()));
    }
    let mut transitions = vec![];
    for i in 0..n {
        transitions.push(koszul_step(ring, seq, i as u32)?);
    }
    let mut complexes = vec![];
    for i in 0..=n {
        complexes.push(koszul(ring, seq, i as u32)?);
    }
    Ok(Tower {
        direction: Direction::Inverse,
        ring: ring.clone(),
        bound: n,
        complexes,
        transitions,
    })
}

/// Direct tower of duals Hom(K(A; a^i), A) with the dualized transitions;
/// its colimit is the infinite dual Koszul complex.
pub fn dual_tower(ring: &Ring, seq: &[Poly], n: usize) -> Result<Tower> {
    let base = koszul_tower(ring, seq, n)?;
    let a_cx = BoundedComplex::concentrated(ModulePresentation::free(ring.clone(), 1), 0);
    let mut complexes = vec![];
    for c in &base.complexes {
        complexes.push(hom_complex(c, &a_cx)?);
    }
    let mut transitions = vec![];
    for mu in &base.transitions {
        transitions.push(hom_dual_map(mu, &a_cx)?);
    }
    Ok(Tower {
        direction: Direction::Direct,
        ring: ring.clone(),
        bound: n,
        complexes,
        transitions,
    })
}

/// Tensor every level and transition with a module placed in degree 0.
pub fn tensor_tower_with_module(tower: &Tower, m: &ModulePresentation) -> Result<Tower> {
    let m_cx = BoundedComplex::concentrated(m.clone(), 0);
    let id_m = ComplexMap::identity(&m_cx);
    let mut complexes = vec![];
    for c in &tower.complexes {
        complexes.push(tensor_complex(c, &m_cx)?);
    }
    let mut transitions = vec![];
    for t in &tower.transitions {
        transitions.push(tensor_complex_maps(t, &id_m)?);
    }
    Ok(Tower {
        direction: tower.direction,
        ring: tower.ring.clone(),
        bound: tower.bound,
        complexes,
        transitions,
    })
}

/// Inverse tower {K(A; a^i) (x) M}: the finite surrogate of sequential
/// derived completion.
pub fn completion_tower(
    m: &ModulePresentation,
    seq: &[Poly],
    n: usize,
) -> Result<Tower> {
    let base = koszul_tower(&m.ring, seq, n)?;
    tensor_tower_with_module(&base, m)
}

/// Direct tower {Hom(K(A; a^i), A) (x) M}: the finite surrogate of
/// sequential derived torsion.
pub fn torsion_tower(m: &ModulePresentation, seq: &[Poly], n: usize) -> Result<Tower> {
    let base = dual_tower(&m.ring, seq, n)?;
    tensor_tower_with_module(&base, m)
}

/// One chart of a Cech complex: the localization at the product over a
/// subset of the sequence.
#[derive(Clone, Debug)]
pub struct CechChart {
    /// Indices into the sequence, ascending.
    pub subset: Vec<usize>,
    pub ring: Ring,
    pub from_base: RingHom,
}

/// The Cech complex of a sequence: charts in degree |S| - 1 with the
/// alternating localization maps. Terms are localized rings, not finitely
/// presented modules over the base, so this is a structural object; the
/// finite-level computations go through the dual Koszul towers instead.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub base: Ring,
    pub n: usize,
    pub charts: Vec<CechChart>,
    /// (source chart, target chart, localization map, sign).
    pub maps: Vec<(usize, usize, RingHom, i64)>,
}

impl CechComplex {
    pub fn degree_charts(&self, d: usize) -> Vec<&CechChart> {
        self.charts
            .iter()
            .filter(|c| c.subset.len() == d + 1)
            .collect()
    }

    /// All chart rings are zero: the complex is zero.
    pub fn is_zero(&self) -> bool {
        self.charts.iter().all(|c| c.ring.is_zero_ring())
    }
}

pub fn cech(ring: &Ring, seq: &[Poly]) -> Result<CechComplex> {
    if seq.is_empty() {
        return Err(Error::PreconditionFailed("empty sequence".into()));
    }
    let n = seq.len();
    // nonempty subsets ordered by (size, lex)
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|k| mask & (1 << k) != 0).collect())
        .collect();
    subsets.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    let mut charts = vec![];
    for s in &subsets {
        let mut prod = ring.one();
        for &k in s {
            prod = ring.mul(&prod, &seq[k]);
        }
        let (local, from_base) = ring.localize(&prod)?;
        charts.push(CechChart { subset: s.clone(), ring: local, from_base });
    }
    let mut maps = vec![];
    for (si, s) in subsets.iter().enumerate() {
        for j in 0..n {
            if s.contains(&j) {
                continue;
            }
            let mut t = s.clone();
            t.push(j);
            t.sort();
            let ti = subsets.iter().position(|u| *u == t).unwrap();
            let pos = t.iter().position(|&k| k == j).unwrap();
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            // chart rings share the base variables plus one inverted-product
            // variable; the map sends it to (product of the new elements) * y
            let src = &charts[si].ring;
            let tgt = &charts[ti].ring;
            let base_vars = ring.vars().len();
            let mut images: Vec<Poly> = (0..base_vars)
                .map(|v| Poly::var(tgt.ctx(), v))
                .collect();
            let mut extra = charts[ti]
                .from_base
                .apply(&seq[j])
                .unwrap_or_else(|_| Poly::zero());
            let y_t = Poly::var(tgt.ctx(), base_vars);
            extra = tgt.mul(&extra, &y_t);
            images.push(extra);
            match RingHom::new(src.clone(), tgt.clone(), images) {
                Ok(h) => maps.push((si, ti, h, sign)),
                Err(_) if src.is_zero_ring() || tgt.is_zero_ring() => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CechComplex { base: ring.clone(), n, charts, maps })
}

/// The level-i surrogate of the augmented sequence
/// 0 -> C[-1] -> dual Koszul -> A -> 0: the stupid truncation to degrees >= 1
/// included into the dual, followed by the degree-0 projection onto A.
#[derive(Clone, Debug)]
pub struct AugmentedSequence {
    pub truncation: BoundedComplex,
    pub dual: BoundedComplex,
    pub augmentation_target: BoundedComplex,
    pub inclusion: ComplexMap,
    pub projection: ComplexMap,
    pub exact: bool,
    pub failure: Option<(i64, usize)>,
}

pub fn augmented_cech_sequence(
    ring: &Ring,
    seq: &[Poly],
    i: u32,
) -> Result<AugmentedSequence> {
    let a_cx = BoundedComplex::concentrated(ModulePresentation::free(ring.clone(), 1), 0);
    let k = koszul(ring, seq, i)?;
    let dual = hom_complex(&k, &a_cx)?;
    // degrees >= 1 with the same differentials
    let cut = (1 - dual.lo) as usize;
    let truncation = if cut >= dual.terms.len() {
        BoundedComplex::zero_complex(ring.clone())
    } else {
        BoundedComplex::new(
            ring.clone(),
            1,
            dual.terms[cut..].to_vec(),
            dual.diffs[cut..].to_vec(),
        )?
    };
    let inclusion = ComplexMap::new(
        truncation.clone(),
        dual.clone(),
        1,
        truncation.terms.iter().map(ModuleMap::identity).collect(),
    )?;
    let projection = ComplexMap::new(
        dual.clone(),
        a_cx.clone(),
        0,
        vec![ModuleMap::identity(&dual.term(0))],
    )?;
    // degreewise exactness of 0 -> trunc -> dual -> A -> 0
    let zero_m = ModulePresentation::zero(ring.clone());
    let mut exact = true;
    let mut failure = None;
    for q in dual.lo.min(0)..=dual.hi {
        let chain = [
            ModuleMap::zero_map(&zero_m, &truncation.term(q)),
            inclusion.component(q),
            projection.component(q),
            ModuleMap::zero_map(&a_cx.term(q), &zero_m),
        ];
        let (ok, at) = is_exact_sequence(&chain)?;
        if !ok {
            exact = false;
            failure = Some((q, at.unwrap()));
            break;
        }
    }
    Ok(AugmentedSequence {
        truncation,
        dual,
        augmentation_target: a_cx,
        inclusion,
        projection,
        exact,
        failure,
    })
}

/// The degree-q cohomology system of a tower: subquotients per level with
/// the induced maps along consecutive transitions.
#[derive(Clone, Debug)]
pub struct CohomologySystem {
    pub direction: Direction,
    pub q: i64,
    pub levels: Vec<Subquotient>,
    /// steps[i]: inverse towers level i+1 -> i, direct towers level i -> i+1.
    pub steps: Vec<ModuleMap>,
}

impl CohomologySystem {
    /// Composite induced map (inverse: level j down to i; direct: i up to j).
    pub fn composite(&self, j: usize, i: usize) -> Result<ModuleMap> {
        if i > j {
            return Err(Error::Shape("bad composite indices".into()));
        }
        match self.direction {
            Direction::Inverse => {
                let mut acc = ModuleMap::identity(&self.levels[j].module);
                for k in (i..j).rev() {
                    acc = acc.compose(&self.steps[k])?;
                }
                Ok(acc)
            }
            Direction::Direct => {
                let mut acc = ModuleMap::identity(&self.levels[i].module);
                for k in i..j {
                    acc = acc.compose(&self.steps[k])?;
                }
                Ok(acc)
            }
        }
    }
}

pub fn cohomology_system(tower: &Tower, q: i64) -> Result<CohomologySystem> {
    let mut levels = vec![];
    for c in &tower.complexes {
        levels.push(c.cohomology(q)?);
    }
    let mut steps = vec![];
    for (i, t) in tower.transitions.iter().enumerate() {
        let (src, tgt) = match tower.direction {
            Direction::Inverse => (&levels[i + 1], &levels[i]),
            Direction::Direct => (&levels[i], &levels[i + 1]),
        };
        steps.push(src.induced_map(tgt, &t.component(q).matrix)?);
    }
    Ok(CohomologySystem { direction: tower.direction, q, levels, steps })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelSize {
    pub rank: usize,
    pub relation_count: usize,
    pub cardinality: Option<String>,
    pub dimension: Option<usize>,
    pub is_zero: bool,
}

pub fn level_size(m: &ModulePresentation) -> Result<LevelSize> {
    Ok(LevelSize {
        rank: m.rank,
        relation_count: m.relations.rows,
        cardinality: cardinality(m).map(|c| c.to_string()),
        dimension: field_dimension(m)?,
        is_zero: m.is_zero_module()?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SystemVerdict {
    /// Induced maps are isomorphisms from this level on (two consecutive
    /// checks) -- a bound-relative claim.
    Stabilized { level: usize },
    /// Every stage i <= i_max is killed by stage j(i).
    ProZero { witnesses: Vec<[usize; 2]> },
    /// Images into each level stabilize at the observed bound.
    MittagLeffler,
    Growing,
    Undetermined,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemReport {
    pub q: i64,
    pub sizes: Vec<LevelSize>,
    pub verdict: SystemVerdict,
}

/// Report for a direct system: stabilization or growth.
pub fn analyze_direct_system(sys: &CohomologySystem) -> Result<SystemReport> {
    let sizes = sys
        .levels
        .iter()
        .map(|l| level_size(&l.module))
        .collect::<Result<Vec<_>>>()?;
    for l in 0..sys.steps.len().saturating_sub(1) {
        if sys.steps[l].is_isomorphism()? && sys.steps[l + 1].is_isomorphism()? {
            return Ok(SystemReport {
                q: sys.q,
                sizes,
                verdict: SystemVerdict::Stabilized { level: l },
            });
        }
    }
    Ok(SystemReport { q: sys.q, sizes, verdict: SystemVerdict::Growing })
}

/// Find, for each i <= i_max, the least j <= bound with zero composite
/// H(level j) -> H(level i); None if some i has no witness within the bound.
pub fn pro_zero_witnesses(
    sys: &CohomologySystem,
    i_max: usize,
    bound: usize,
) -> Result<Option<Vec<[usize; 2]>>> {
    let mut witnesses = vec![];
    for i in 0..=i_max {
        let mut found = None;
        for j in i..=bound {
            if sys.composite(j, i)?.is_zero_map()? {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => witnesses.push([i, j]),
            None => return Ok(None),
        }
    }
    Ok(Some(witnesses))
}

/// Report for an inverse system: pro-zero with witnesses, stabilization,
/// Mittag-Leffler, or undetermined at the bound.
pub fn analyze_inverse_system(sys: &CohomologySystem) -> Result<SystemReport> {
    let n = sys.levels.len() - 1;
    let sizes = sys
        .levels
        .iter()
        .map(|l| level_size(&l.module))
        .collect::<Result<Vec<_>>>()?;
    let i_max = n.saturating_sub(3);
    if let Some(witnesses) = pro_zero_witnesses(sys, i_max, n)? {
        return Ok(SystemReport {
            q: sys.q,
            sizes,
            verdict: SystemVerdict::ProZero { witnesses },
        });
    }
    for l in 0..sys.steps.len().saturating_sub(1) {
        if sys.steps[l].is_isomorphism()? && sys.steps[l + 1].is_isomorphism()? {
            return Ok(SystemReport {
                q: sys.q,
                sizes,
                verdict: SystemVerdict::Stabilized { level: l },
            });
        }
    }
    // Mittag-Leffler: images from the two topmost levels into each level agree
    if n >= 2 {
        let mut ml = true;
        for i in 0..=n - 2 {
            let im_a = sys.composite(n - 1, i)?.matrix.cols_vec();
            let im_b = sys.composite(n, i)?.matrix.cols_vec();
            if !spans_equal(&sys.levels[i].module, &im_a, &im_b)? {
                ml = false;
                break;
            }
        }
        if ml {
            return Ok(SystemReport { q: sys.q, sizes, verdict: SystemVerdict::MittagLeffler });
        }
    }
    Ok(SystemReport { q: sys.q, sizes, verdict: SystemVerdict::Undetermined })
}

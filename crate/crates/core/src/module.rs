//! Finitely presented modules M = A^r / (row span of relations) and maps
//! between them, with the homological toolbox: kernel, image, cokernel,
//! tensor, Hom, free resolutions, Tor, Ext, annihilators, projectivity.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{vector_is_zero, Vector};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::{Ring, Tier};
use crate::smith::{smith, IntMatrix};
use crate::solve::{kernel_gens, solve_linear};

#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation {
    pub ring: Ring,
    /// Ambient rank r: the module is a quotient of A^r.
    pub rank: usize,
    /// Rows are relation vectors in A^r.
    pub relations: Matrix,
}

impl ModulePresentation {
    pub fn new(ring: Ring, rank: usize, relations: Matrix) -> Result<Self> {
        if relations.cols != rank && relations.rows != 0 {
            return Err(Error::Shape(format!(
                "relations have {} columns, ambient rank is {}",
                relations.cols, rank
            )));
        }
        let relations = Matrix {
            rows: relations.rows,
            cols: rank,
            data: if relations.rows == 0 { vec![] } else { relations.data },
        }
        .map(&ring);
        Ok(ModulePresentation { ring, rank, relations })
    }

    pub fn free(ring: Ring, rank: usize) -> Self {
        ModulePresentation { ring, rank, relations: Matrix::zero(0, rank) }
    }

    pub fn zero(ring: Ring) -> Self {
        ModulePresentation::free(ring, 0)
    }

    /// Cyclic module A/(gens).
    pub fn cyclic(ring: Ring, gens: &[Poly]) -> Result<Self> {
        let relations = Matrix::from_rows(gens.iter().map(|g| vec![g.clone()]).collect());
        ModulePresentation::new(ring.clone(), 1, if gens.is_empty() {
            Matrix::zero(0, 1)
        } else {
            relations
        })
    }

    pub fn relation_rows(&self) -> Vec<Vector> {
        self.relations.rows_vec()
    }

    /// Columns view of the relations: the map A^{rels} -> A^r they define.
    pub fn relations_transposed(&self) -> Matrix {
        self.relations.transpose()
    }

    /// Is the ambient vector v in the row span of the relations?
    pub fn in_relation_span(&self, v: &Vector) -> Result<bool> {
        if v.iter().all(|p| self.ring.normal_form(p).is_zero()) {
            return Ok(true);
        }
        let lhs = self.relations_transposed();
        let rhs = Matrix::from_cols(vec![v.clone()]);
        match solve_linear(&self.ring, &lhs, &rhs) {
            Ok(_) => Ok(true),
            Err(Error::NoSolution) => Ok(false),
            Err(e) => Err(e),
        }
    }

    pub fn elements_equal(&self, v: &Vector, w: &Vector) -> Result<bool> {
        let d: Vector = v
            .iter()
            .zip(w)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        self.in_relation_span(&d)
    }

    pub fn is_zero_module(&self) -> Result<bool> {
        for i in 0..self.rank {
            let mut e = vec![Poly::zero(); self.rank];
            e[i] = self.ring.one();
            if !self.in_relation_span(&e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// For ZZ / ZZ/N tiers: (free rank, invariant factors > 1) of the module
    /// as an abelian group presentation; None on polynomial tiers.
    pub fn invariant_factors(&self) -> Option<(usize, Vec<BigInt>)> {
        let modulus = match self.ring.tier() {
            Tier::Int => None,
            Tier::IntMod(n) => Some(BigInt::from(n)),
            Tier::ZeroRing => return Some((0, vec![])),
            Tier::PolyQuot => return None,
        };
        let extra = if modulus.is_some() { self.rank } else { 0 };
        let mut a = IntMatrix::zero(self.relations.rows + extra, self.rank);
        for i in 0..self.relations.rows {
            for j in 0..self.rank {
                let p = &self.relations[(i, j)];
                let c = p.lead().map(|(_, c)| c.numer().clone()).unwrap_or_default();
                a[(i, j)] = c;
            }
        }
        if let Some(n) = &modulus {
            for j in 0..self.rank {
                a[(self.relations.rows + j, j)] = n.clone();
            }
        }
        let s = smith(&a);
        let mut torsion = vec![];
        let mut killed = 0;
        for t in 0..a.rows.min(a.cols) {
            let d = s.diag(t);
            if d == BigInt::from(0) {
                continue;
            }
            killed += 1;
            if !d.is_one() {
                torsion.push(d);
            }
        }
        Some((self.rank - killed, torsion))
    }

    pub fn display(&self) -> String {
        format!(
            "A^{} / <{} relations> over {}",
            self.rank, self.relations.rows, self.ring
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    pub source: ModulePresentation,
    pub target: ModulePresentation,
    /// Shape target.rank x source.rank, acting on ambient columns.
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(
        source: ModulePresentation,
        target: ModulePresentation,
        matrix: Matrix,
    ) -> Result<Self> {
        if matrix.rows != target.rank || matrix.cols != source.rank {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows, matrix.cols, target.rank, source.rank
            )));
        }
        let ring = source.ring.clone();
        let matrix = matrix.map(&ring);
        let map = ModuleMap { source, target, matrix };
        for rho in map.source.relation_rows() {
            let v = map.matrix.mul_vec(&rho, &ring);
            if !map.target.in_relation_span(&v)? {
                return Err(Error::PreconditionFailed(
                    "map does not respect source relations".into(),
                ));
            }
        }
        Ok(map)
    }

    pub fn identity(m: &ModulePresentation) -> Self {
        let matrix = Matrix::identity(&m.ring, m.rank);
        ModuleMap { source: m.clone(), target: m.clone(), matrix }
    }

    pub fn zero_map(source: &ModulePresentation, target: &ModulePresentation) -> Self {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zero(target.rank, source.rank),
        }
    }

    /// Multiplication by a on M.
    pub fn mult(m: &ModulePresentation, a: &Poly) -> Self {
        let matrix = Matrix::scalar(&m.ring, m.rank, a);
        ModuleMap { source: m.clone(), target: m.clone(), matrix }
    }

    pub fn ring(&self) -> &Ring {
        &self.source.ring
    }

    /// self followed by `then`.
    pub fn compose(&self, then: &ModuleMap) -> Result<ModuleMap> {
        if then.source.rank != self.target.rank {
            return Err(Error::Shape("composition ranks do not match".into()));
        }
        Ok(ModuleMap {
            source: self.source.clone(),
            target: then.target.clone(),
            matrix: then.matrix.mul(&self.matrix, self.ring()),
        })
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix, self.ring()),
        }
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.sub(&other.matrix, self.ring()),
        }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.neg(self.ring()),
        }
    }

    /// Is this the zero map M -> N (every generator image a relation)?
    pub fn is_zero_map(&self) -> Result<bool> {
        for j in 0..self.matrix.cols {
            if !self.target.in_relation_span(&self.matrix.col(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn maps_equal(&self, other: &ModuleMap) -> Result<bool> {
        self.sub(other).is_zero_map()
    }

    /// Ambient vectors x with f(x) = 0 in the target (includes the source
    /// relations).
    fn kernel_ambient_gens(&self) -> Result<Vec<Vector>> {
        let ring = self.ring();
        let lhs = self.matrix.hstack(&self.target.relations_transposed());
        let ks = kernel_gens(ring, &lhs)?;
        let mut out: Vec<Vector> = vec![];
        for k in ks {
            let proj: Vector = k[..self.source.rank].to_vec();
            if !vector_is_zero(&proj) && !out.contains(&proj) {
                out.push(proj);
            }
        }
        Ok(out)
    }

    /// Kernel as a module with its inclusion into the source.
    pub fn kernel(&self) -> Result<(ModulePresentation, ModuleMap)> {
        let gens = self.kernel_ambient_gens()?;
        submodule_of(&self.source, gens, true)
    }

    /// Image as a module, with (inclusion into target, projection from source).
    /// The projection keeps one image generator per source generator.
    pub fn image(&self) -> Result<(ModulePresentation, ModuleMap, ModuleMap)> {
        let gens = self.matrix.cols_vec();
        let (module, inclusion) = submodule_of(&self.target, gens, false)?;
        let proj = ModuleMap::new(
            self.source.clone(),
            module.clone(),
            Matrix::identity(self.ring(), self.source.rank),
        )?;
        Ok((module, inclusion, proj))
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> Result<(ModulePresentation, ModuleMap)> {
        let extra = self.matrix.transpose();
        let relations = self.target.relations.vstack(&extra);
        let module =
            ModulePresentation::new(self.ring().clone(), self.target.rank, relations)?;
        let proj = ModuleMap {
            source: self.target.clone(),
            target: module.clone(),
            matrix: Matrix::identity(self.ring(), self.target.rank),
        };
        Ok((module, proj))
    }

    pub fn is_injective(&self) -> Result<bool> {
        let (k, _) = self.kernel()?;
        k.is_zero_module()
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let (c, _) = self.cokernel()?;
        c.is_zero_module()
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_surjective()? && self.is_injective()?)
    }
}

/// Presentation of the submodule of `host` generated by the images of the
/// given ambient vectors, together with the inclusion map. With `filter`,
/// generators already redundant modulo the host relations are dropped.
pub fn submodule_of(
    host: &ModulePresentation,
    gens: Vec<Vector>,
    filter: bool,
) -> Result<(ModulePresentation, ModuleMap)> {
    let ring = &host.ring;
    let mut kept: Vec<Vector> = vec![];
    for g in gens {
        let g: Vector = g.iter().map(|p| ring.normal_form(p)).collect();
        if filter && host.in_relation_span(&g)? {
            continue;
        }
        kept.push(g);
    }
    let inclusion_matrix = if kept.is_empty() {
        Matrix::zero(host.rank, 0)
    } else {
        Matrix::from_cols(kept.clone())
    };
    // relations: coefficient vectors c with sum c_i g_i in the host relations
    let lhs = inclusion_matrix.hstack(&host.relations_transposed());
    let ks = kernel_gens(ring, &lhs)?;
    let mut rel_rows: Vec<Vector> = vec![];
    for k in ks {
        let proj: Vector = k[..kept.len()].to_vec();
        if !vector_is_zero(&proj) && !rel_rows.contains(&proj) {
            rel_rows.push(proj);
        }
    }
    let relations = if rel_rows.is_empty() {
        Matrix::zero(0, kept.len())
    } else {
        Matrix::from_rows(rel_rows)
    };
    let module = ModulePresentation::new(ring.clone(), kept.len(), relations)?;
    let inclusion = ModuleMap {
        source: module.clone(),
        target: host.clone(),
        matrix: inclusion_matrix,
    };
    Ok((module, inclusion))
}

/// (span(gens) + span(modulo)) / span(modulo) inside A^ambient, as a
/// presentation with one generator per given cycle representative.
pub fn subquotient_presentation(
    ring: &Ring,
    ambient: usize,
    gens: &[Vector],
    modulo: &[Vector],
) -> Result<ModulePresentation> {
    let gmat = if gens.is_empty() {
        Matrix::zero(ambient, 0)
    } else {
        Matrix::from_cols(gens.to_vec())
    };
    let bmat = if modulo.is_empty() {
        Matrix::zero(ambient, 0)
    } else {
        Matrix::from_cols(modulo.to_vec())
    };
    let lhs = gmat.hstack(&bmat);
    let ks = kernel_gens(ring, &lhs)?;
    let mut rel_rows: Vec<Vector> = vec![];
    for k in ks {
        let proj: Vector = k[..gens.len()].to_vec();
        if !vector_is_zero(&proj) && !rel_rows.contains(&proj) {
            rel_rows.push(proj);
        }
    }
    let relations = if rel_rows.is_empty() {
        Matrix::zero(0, gens.len())
    } else {
        Matrix::from_rows(rel_rows)
    };
    ModulePresentation::new(ring.clone(), gens.len(), relations)
}

/// A subquotient of A^ambient remembering its cycle representatives, so maps
/// on the ambient level induce maps on the subquotient.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ring: Ring,
    pub ambient: usize,
    /// Cycle representatives in A^ambient, one per module generator.
    pub gens: Vec<Vector>,
    /// Boundaries plus ambient relations.
    pub modulo: Vec<Vector>,
    pub module: ModulePresentation,
}

impl Subquotient {
    pub fn new(
        ring: &Ring,
        ambient: usize,
        gens: Vec<Vector>,
        modulo: Vec<Vector>,
    ) -> Result<Self> {
        let module = subquotient_presentation(ring, ambient, &gens, &modulo)?;
        Ok(Subquotient { ring: ring.clone(), ambient, gens, modulo, module })
    }

    /// Write an ambient vector as a combination of the generators, modulo the
    /// `modulo` span; None if it is not in span(gens) + span(modulo).
    pub fn express(&self, v: &Vector) -> Result<Option<Vector>> {
        let gmat = if self.gens.is_empty() {
            Matrix::zero(self.ambient, 0)
        } else {
            Matrix::from_cols(self.gens.clone())
        };
        let bmat = if self.modulo.is_empty() {
            Matrix::zero(self.ambient, 0)
        } else {
            Matrix::from_cols(self.modulo.clone())
        };
        let lhs = gmat.hstack(&bmat);
        let rhs = Matrix::from_cols(vec![v.clone()]);
        match solve_linear(&self.ring, &lhs, &rhs) {
            Ok(sol) => Ok(Some(sol.particular.col(0)[..self.gens.len()].to_vec())),
            Err(Error::NoSolution) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// The map induced on subquotients by an ambient-level matrix
    /// phi: A^{self.ambient} -> A^{other.ambient}. The matrix must carry
    /// cycles to cycles and `modulo` into `modulo` for this to be defined.
    pub fn induced_map(&self, other: &Subquotient, phi: &Matrix) -> Result<ModuleMap> {
        let mut cols: Vec<Vector> = vec![];
        for g in &self.gens {
            let img = phi.mul_vec(g, &self.ring);
            let c = other.express(&img)?.ok_or_else(|| {
                Error::PreconditionFailed(
                    "ambient map does not preserve the subquotient".into(),
                )
            })?;
            cols.push(c);
        }
        let matrix = if cols.is_empty() {
            Matrix::zero(other.module.rank, 0)
        } else {
            Matrix::from_cols(cols)
        };
        ModuleMap::new(self.module.clone(), other.module.clone(), matrix)
    }
}

/// M (x)_A N with ambient basis e_i (x) f_j at index i * rank(N) + j.
pub fn tensor_modules(
    m: &ModulePresentation,
    n: &ModulePresentation,
) -> Result<ModulePresentation> {
    let ring = &m.ring;
    let rm = Matrix::identity(ring, n.rank);
    let a = m.relations.kronecker(&rm, ring);
    let b = Matrix::identity(ring, m.rank).kronecker(&n.relations, ring);
    let relations = a.vstack(&b);
    ModulePresentation::new(ring.clone(), m.rank * n.rank, relations)
}

pub fn tensor_maps(f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
    let source = tensor_modules(&f.source, &g.source)?;
    let target = tensor_modules(&f.target, &g.target)?;
    let matrix = f.matrix.kronecker(&g.matrix, f.ring());
    ModuleMap::new(source, target, matrix)
}

/// Hom_A(M, N) as a module, together with the matrices (shape
/// rank(N) x rank(M)) realizing each generator as an actual map M -> N.
pub fn hom_modules(
    m: &ModulePresentation,
    n: &ModulePresentation,
) -> Result<(ModulePresentation, Vec<Matrix>)> {
    let ring = &m.ring;
    let (rm, rn) = (m.rank, n.rank);
    let relsm = m.relations.rows;
    let relsn = n.relations.rows;
    // unknowns: Y (rn x rm) flattened row-major, then one slack block per
    // source relation
    let ycols = rn * rm;
    let cols = ycols + relsm * relsn;
    let rows = relsm * rn;
    let mut lhs = Matrix::zero(rows, cols);
    for k in 0..relsm {
        for i in 0..rn {
            let row = k * rn + i;
            for j in 0..rm {
                lhs[(row, i * rm + j)] = m.relations[(k, j)].clone();
            }
            for s in 0..relsn {
                lhs[(row, ycols + k * relsn + s)] = n.relations[(s, i)].clone();
            }
        }
    }
    let ks = kernel_gens(ring, &lhs)?;
    let mut candidates: Vec<Vector> = vec![];
    for k in &ks {
        let proj: Vector = k[..ycols].to_vec();
        if !vector_is_zero(&proj) && !candidates.contains(&proj) {
            candidates.push(proj);
        }
    }
    // trivial maps: a relation row of N placed into any source-generator slot
    let mut trivial: Vec<Vector> = vec![];
    for s in 0..relsn {
        for j in 0..rm {
            let mut v = vec![Poly::zero(); ycols];
            for i in 0..rn {
                v[i * rm + j] = n.relations[(s, i)].clone();
            }
            if !vector_is_zero(&v) {
                trivial.push(v);
            }
        }
    }
    // drop candidates that are already trivial
    let hom_sub = Subquotient::new(ring, ycols, vec![], trivial.clone())?;
    let mut gens: Vec<Vector> = vec![];
    for c in candidates {
        if hom_sub.express(&c)?.is_none() {
            gens.push(c);
        }
    }
    let module = subquotient_presentation(ring, ycols, &gens, &trivial)?;
    let mats = gens
        .iter()
        .map(|g| {
            let mut y = Matrix::zero(rn, rm);
            for i in 0..rn {
                for j in 0..rm {
                    y[(i, j)] = g[i * rm + j].clone();
                }
            }
            y
        })
        .collect();
    Ok((module, mats))
}

/// Free resolution differentials d_k: A^{n_k} -> A^{n_{k-1}} for k = 1..,
/// with n_0 = rank(M) and d_1 the relations (as columns). Stops early when a
/// kernel vanishes; at most `length` differentials.
pub fn free_resolution(m: &ModulePresentation, length: usize) -> Result<Vec<Matrix>> {
    let ring = &m.ring;
    let mut ds: Vec<Matrix> = vec![];
    if length == 0 {
        return Ok(ds);
    }
    if m.relations.rows == 0 {
        return Ok(ds); // free module: resolution stops immediately
    }
    ds.push(m.relations_transposed());
    while ds.len() < length {
        let prev = ds.last().unwrap();
        let ks = kernel_gens(ring, prev)?;
        let ks: Vec<Vector> = ks.into_iter().filter(|v| !vector_is_zero(v)).collect();
        if ks.is_empty() {
            break;
        }
        ds.push(Matrix::from_cols(ks));
    }
    Ok(ds)
}

/// Homology kernel(outgoing) / image(incoming) at a term A^ambient with the
/// given relations; either map may be absent.
fn homology_at(
    ring: &Ring,
    ambient: usize,
    relations: &Matrix,
    outgoing: Option<(&Matrix, &Matrix)>, // (map, target relations)
    incoming: Option<&Matrix>,
) -> Result<ModulePresentation> {
    let cycle_gens: Vec<Vector> = match outgoing {
        None => (0..ambient)
            .map(|i| {
                let mut e = vec![Poly::zero(); ambient];
                e[i] = ring.one();
                e
            })
            .collect(),
        Some((d, tgt_rels)) => {
            let lhs = d.hstack(&tgt_rels.transpose());
            kernel_gens(ring, &lhs)?
                .into_iter()
                .map(|k| k[..ambient].to_vec())
                .filter(|v| !vector_is_zero(v))
                .collect()
        }
    };
    let mut modulo: Vec<Vector> = relations.rows_vec();
    if let Some(inc) = incoming {
        modulo.extend(inc.cols_vec());
    }
    modulo.retain(|v| !vector_is_zero(v));
    subquotient_presentation(ring, ambient, &cycle_gens, &modulo)
}

pub fn tor(
    m: &ModulePresentation,
    n: &ModulePresentation,
    q: usize,
) -> Result<ModulePresentation> {
    if q == 0 {
        return tensor_modules(m, n);
    }
    let ring = &m.ring;
    let res = free_resolution(m, q + 1)?;
    if res.len() < q {
        return Ok(ModulePresentation::zero(ring.clone()));
    }
    let rn = n.rank;
    let term_rank = |k: usize| if k == 0 { m.rank } else { res[k - 1].cols };
    let big = |d: &Matrix| d.kronecker(&Matrix::identity(ring, rn), ring);
    let ambient = term_rank(q) * rn;
    let relations = Matrix::identity(ring, term_rank(q)).kronecker(&n.relations, ring);
    let out_map = big(&res[q - 1]);
    let out_rels = Matrix::identity(ring, term_rank(q - 1)).kronecker(&n.relations, ring);
    let incoming = if res.len() > q { Some(big(&res[q])) } else { None };
    homology_at(
        ring,
        ambient,
        &relations,
        Some((&out_map, &out_rels)),
        incoming.as_ref(),
    )
}

pub fn ext(
    m: &ModulePresentation,
    n: &ModulePresentation,
    q: usize,
) -> Result<ModulePresentation> {
    let ring = &m.ring;
    let res = free_resolution(m, q + 1)?;
    if q > res.len() {
        return Ok(ModulePresentation::zero(ring.clone()));
    }
    let rn = n.rank;
    let term_rank = |k: usize| if k == 0 { m.rank } else { res[k - 1].cols };
    // Hom(F_k, N) has ambient rank n_k * rn; precomposition with d_k is
    // d_k^T (x) id
    let big = |d: &Matrix| d.transpose().kronecker(&Matrix::identity(ring, rn), ring);
    let ambient = term_rank(q) * rn;
    let relations = Matrix::identity(ring, term_rank(q)).kronecker(&n.relations, ring);
    let outgoing = if res.len() > q {
        let map = big(&res[q]);
        let tgt_rels = Matrix::identity(ring, term_rank(q + 1)).kronecker(&n.relations, ring);
        Some((map, tgt_rels))
    } else {
        None
    };
    let incoming = if q >= 1 { Some(big(&res[q - 1])) } else { None };
    homology_at(
        ring,
        ambient,
        &relations,
        outgoing.as_ref().map(|(a, b)| (a, b)),
        incoming.as_ref(),
    )
}

/// Ann_M(a^i) = kernel(mult a^i) as a submodule of M with inclusion.
pub fn annihilator(
    m: &ModulePresentation,
    a: &Poly,
    i: u32,
) -> Result<(ModulePresentation, ModuleMap)> {
    let ai = m.ring.pow(a, i);
    ModuleMap::mult(m, &ai).kernel()
}

/// Does the surjection A^r -> M split? For finitely presented modules this
/// decides flatness as well.
pub fn is_projective(m: &ModulePresentation) -> Result<bool> {
    let ring = &m.ring;
    let r = m.rank;
    let k = m.relations.rows;
    if k == 0 || ring.is_zero_ring() {
        return Ok(true);
    }
    // find S (r x r) and C (k x r) with S * rho^T = 0 for every relation rho
    // and S - R^T * C = I; then x -> S x is a well-defined splitting M -> A^r
    let ycols = r * r;
    let cols = ycols + k * r;
    let rows = k * r + r * r;
    let mut lhs = Matrix::zero(rows, cols);
    let mut rhs = Matrix::zero(rows, 1);
    for t in 0..k {
        for i in 0..r {
            let row = t * r + i;
            for j in 0..r {
                lhs[(row, i * r + j)] = m.relations[(t, j)].clone();
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            let row = k * r + i * r + j;
            lhs[(row, i * r + j)] = ring.one();
            for t in 0..k {
                lhs[(row, ycols + t * r + j)] = ring.neg(&m.relations[(t, i)]);
            }
            if i == j {
                rhs[(row, 0)] = ring.one();
            }
        }
    }
    match solve_linear(ring, &lhs, &rhs) {
        Ok(_) => Ok(true),
        Err(Error::NoSolution) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Isomorphism testing: canonical invariants on the integer tiers, bounded
/// witness search through Hom generators elsewhere.
pub fn are_isomorphic(m: &ModulePresentation, n: &ModulePresentation) -> Result<bool> {
    if let (Some(a), Some(b)) = (m.invariant_factors(), n.invariant_factors()) {
        return Ok(a == b);
    }
    if m.is_zero_module()? {
        return n.is_zero_module();
    }
    if n.is_zero_module()? {
        return Ok(false);
    }
    let (_, mats) = hom_modules(m, n)?;
    let mut candidates: Vec<Matrix> = mats.clone();
    if mats.len() > 1 {
        // sums of prefixes catch isomorphisms needing several generators
        let mut acc = mats[0].clone();
        for y in &mats[1..] {
            acc = acc.add(y, &m.ring);
            candidates.push(acc.clone());
        }
    }
    for y in candidates {
        let f = ModuleMap::new(m.clone(), n.clone(), y)?;
        if f.is_isomorphism()? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Is v in span(gens) + relation span, inside the host ambient?
pub fn span_contains(
    host: &ModulePresentation,
    gens: &[Vector],
    v: &Vector,
) -> Result<bool> {
    let ring = &host.ring;
    let gmat = if gens.is_empty() {
        Matrix::zero(host.rank, 0)
    } else {
        Matrix::from_cols(gens.to_vec())
    };
    let lhs = gmat.hstack(&host.relations_transposed());
    let rhs = Matrix::from_cols(vec![v.clone()]);
    match solve_linear(ring, &lhs, &rhs) {
        Ok(_) => Ok(true),
        Err(Error::NoSolution) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Do two generator sets span the same submodule of the host (modulo its
/// relations)?
pub fn spans_equal(
    host: &ModulePresentation,
    a: &[Vector],
    b: &[Vector],
) -> Result<bool> {
    for v in a {
        if !span_contains(host, b, v)? {
            return Ok(false);
        }
    }
    for v in b {
        if !span_contains(host, a, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of elements when finite: product of invariant factors on the
/// integer tiers; None when infinite or not decidable on this tier.
pub fn cardinality(m: &ModulePresentation) -> Option<num_bigint::BigUint> {
    let (free_rank, torsion) = m.invariant_factors()?;
    if free_rank > 0 {
        return None;
    }
    let mut card = num_bigint::BigUint::from(1u32);
    for d in torsion {
        card *= d.magnitude();
    }
    Some(card)
}

/// Dimension as a vector space over the coefficient field, for POLY_QUOT
/// tiers with field coefficients; None when infinite-dimensional or the tier
/// has no field of coefficients.
pub fn field_dimension(m: &ModulePresentation) -> Result<Option<usize>> {
    let ring = &m.ring;
    let ctx = ring.ctx();
    if !ctx.domain.is_field() || ctx.domain == crate::coeff::CoeffDomain::Integer {
        return Ok(None);
    }
    if m.rank == 0 || ring.is_zero_ring() {
        return Ok(Some(0));
    }
    // relations of the module plus the ring's ideal in every coordinate
    let mut gens: Vec<Vector> = m.relation_rows();
    for g in ring.0.gb.basis.iter().map(|b| &b.vec[0]) {
        for i in 0..m.rank {
            let mut v = vec![Poly::zero(); m.rank];
            v[i] = g.clone();
            gens.push(v);
        }
    }
    let gb = crate::groebner::module_groebner(ctx, m.rank, &gens, false);
    let mut leads: Vec<Vec<crate::monomial::Monomial>> = vec![vec![]; m.rank];
    for b in &gb.basis {
        if let Some((comp, mon, _)) = crate::groebner::lead_term(&b.vec, ctx) {
            leads[comp].push(mon);
        }
    }
    let mut total = 0usize;
    for comp_leads in &leads {
        // finite iff every variable is capped by a pure power (or a constant
        // lead kills the whole component)
        if comp_leads.iter().any(|m| m.is_one()) {
            continue;
        }
        let mut caps = vec![None; ctx.nvars];
        for mon in comp_leads {
            let nz: Vec<usize> = (0..ctx.nvars).filter(|&k| mon.exps[k] > 0).collect();
            if nz.len() == 1 {
                let k = nz[0];
                let e = mon.exps[k];
                caps[k] = Some(caps[k].map_or(e, |c: u32| c.min(e)));
            }
        }
        if ctx.nvars > 0 && caps.iter().any(|c| c.is_none()) {
            return Ok(None);
        }
        // enumerate standard monomials under the caps
        let caps: Vec<u32> = caps.into_iter().map(|c| c.unwrap_or(1)).collect();
        let mut stack = vec![vec![0u32; 0]];
        let mut count = 0usize;
        while let Some(partial) = stack.pop() {
            if partial.len() == ctx.nvars {
                let mon = crate::monomial::Monomial { exps: partial };
                if !comp_leads.iter().any(|l| l.divides(&mon)) {
                    count += 1;
                }
                continue;
            }
            let k = partial.len();
            for e in 0..caps[k] {
                let mut next = partial.clone();
                next.push(e);
                stack.push(next);
            }
        }
        total += count;
    }
    Ok(Some(total))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SizeProfile {
    pub rank: usize,
    pub relation_count: usize,
}

impl ModulePresentation {
    pub fn size_profile(&self) -> SizeProfile {
        SizeProfile { rank: self.rank, relation_count: self.relations.rows }
    }
}

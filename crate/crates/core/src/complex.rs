//! Bounded cochain complexes of finitely presented modules, maps of
//! complexes, tensor and Hom constructions, shifts, cohomology, and exactness
//! checking. Upper indices throughout: d^q goes C^q -> C^{q+1}.

use crate::error::{Error, Result};
use crate::groebner::{vector_is_zero, Vector};
use crate::matrix::Matrix;
use crate::module::{subquotient_presentation, ModuleMap, ModulePresentation, Subquotient};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::solve::kernel_gens;

#[derive(Clone, Debug)]
pub struct BoundedComplex {
    pub ring: Ring,
    pub lo: i64,
    pub hi: i64,
    /// terms[k] is the module in degree lo + k.
    pub terms: Vec<ModulePresentation>,
    /// diffs[k] is d^{lo+k}: terms[k] -> terms[k+1]; length terms.len() - 1.
    pub diffs: Vec<ModuleMap>,
}

impl BoundedComplex {
    pub fn new(
        ring: Ring,
        lo: i64,
        terms: Vec<ModulePresentation>,
        diffs: Vec<ModuleMap>,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Ok(BoundedComplex { ring, lo, hi: lo, terms: vec![], diffs: vec![] });
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::Shape(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        let hi = lo + terms.len() as i64 - 1;
        let c = BoundedComplex { ring, lo, hi, terms, diffs };
        for k in 0..c.diffs.len().saturating_sub(1) {
            let dd = c.diffs[k].compose(&c.diffs[k + 1])?;
            if !dd.is_zero_map()? {
                return Err(Error::PreconditionFailed(format!(
                    "d o d != 0 at degree {}",
                    c.lo + k as i64
                )));
            }
        }
        Ok(c)
    }

    /// Single module placed in the given degree.
    pub fn concentrated(m: ModulePresentation, degree: i64) -> Self {
        BoundedComplex {
            ring: m.ring.clone(),
            lo: degree,
            hi: degree,
            terms: vec![m],
            diffs: vec![],
        }
    }

    pub fn zero_complex(ring: Ring) -> Self {
        BoundedComplex { ring, lo: 0, hi: 0, terms: vec![], diffs: vec![] }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn in_range(&self, q: i64) -> bool {
        !self.is_empty() && q >= self.lo && q <= self.hi
    }

    pub fn term(&self, q: i64) -> ModulePresentation {
        if self.in_range(q) {
            self.terms[(q - self.lo) as usize].clone()
        } else {
            ModulePresentation::zero(self.ring.clone())
        }
    }

    /// d^q, a zero map with the right endpoints when out of range.
    pub fn diff(&self, q: i64) -> ModuleMap {
        if self.in_range(q) && q < self.hi {
            self.diffs[(q - self.lo) as usize].clone()
        } else {
            ModuleMap::zero_map(&self.term(q), &self.term(q + 1))
        }
    }

    /// X[k]^q = X^{q+k}, differentials negated for odd k.
    pub fn shift(&self, k: i64) -> Self {
        let diffs = self
            .diffs
            .iter()
            .map(|d| if k % 2 == 0 { d.clone() } else { d.neg() })
            .collect();
        BoundedComplex {
            ring: self.ring.clone(),
            lo: self.lo - k,
            hi: self.hi - k,
            terms: self.terms.clone(),
            diffs,
        }
    }

    pub fn rank_profile(&self) -> Vec<(i64, usize)> {
        (self.lo..=self.hi)
            .filter(|_| !self.is_empty())
            .map(|q| (q, self.term(q).rank))
            .collect()
    }

    /// Cohomology at q as a subquotient of the ambient of C^q, keeping cycle
    /// representatives so induced maps can be computed.
    pub fn cohomology(&self, q: i64) -> Result<Subquotient> {
        let ring = &self.ring;
        let term = self.term(q);
        let ambient = term.rank;
        let cycles: Vec<Vector> = if self.in_range(q) && q < self.hi {
            let d = self.diff(q);
            let lhs = d.matrix.hstack(&d.target.relations_transposed());
            kernel_gens(ring, &lhs)?
                .into_iter()
                .map(|k| k[..ambient].to_vec())
                .filter(|v| !vector_is_zero(v))
                .collect()
        } else {
            (0..ambient)
                .map(|i| {
                    let mut e = vec![Poly::zero(); ambient];
                    e[i] = ring.one();
                    e
                })
                .collect()
        };
        let mut modulo: Vec<Vector> = term.relation_rows();
        if self.in_range(q - 1) {
            modulo.extend(self.diff(q - 1).matrix.cols_vec());
        }
        modulo.retain(|v| !vector_is_zero(v));
        Subquotient::new(ring, ambient, cycles, modulo)
    }

    pub fn cohomology_module(&self, q: i64) -> Result<ModulePresentation> {
        Ok(self.cohomology(q)?.module)
    }
}

#[derive(Clone, Debug)]
pub struct ComplexMap {
    pub source: BoundedComplex,
    pub target: BoundedComplex,
    /// maps[k] is the component in degree lo + k, for the stored range.
    pub lo: i64,
    pub maps: Vec<ModuleMap>,
}

impl ComplexMap {
    /// Components may be given on any range covering the overlap; missing
    /// degrees are zero maps.
    pub fn new(
        source: BoundedComplex,
        target: BoundedComplex,
        lo: i64,
        maps: Vec<ModuleMap>,
    ) -> Result<Self> {
        let f = ComplexMap { source, target, lo, maps };
        // commuting squares on every degree where anything is nonzero
        let (a, b) = f.active_range();
        for q in a..=b {
            let left = f.component(q).compose(&f.target.diff(q))?;
            let right = f.source.diff(q).compose(&f.component(q + 1))?;
            if !left.maps_equal(&right)? {
                return Err(Error::PreconditionFailed(format!(
                    "complex map does not commute with differentials at degree {q}"
                )));
            }
        }
        Ok(f)
    }

    fn active_range(&self) -> (i64, i64) {
        let lo = self.source.lo.min(self.target.lo) - 1;
        let hi = self.source.hi.max(self.target.hi) + 1;
        (lo, hi)
    }

    pub fn component(&self, q: i64) -> ModuleMap {
        let k = q - self.lo;
        if k >= 0 && (k as usize) < self.maps.len() {
            self.maps[k as usize].clone()
        } else {
            ModuleMap::zero_map(&self.source.term(q), &self.target.term(q))
        }
    }

    pub fn identity(x: &BoundedComplex) -> Self {
        let maps = x.terms.iter().map(ModuleMap::identity).collect();
        ComplexMap { source: x.clone(), target: x.clone(), lo: x.lo, maps }
    }

    pub fn compose(&self, then: &ComplexMap) -> Result<ComplexMap> {
        let lo = self.source.lo.min(then.target.lo);
        let hi = self.source.hi.max(then.target.hi);
        let mut maps = vec![];
        for q in lo..=hi {
            maps.push(self.component(q).compose(&then.component(q))?);
        }
        Ok(ComplexMap {
            source: self.source.clone(),
            target: then.target.clone(),
            lo,
            maps,
        })
    }

    /// Induced map on cohomology in degree q.
    pub fn induced_on_cohomology(&self, q: i64) -> Result<ModuleMap> {
        let hs = self.source.cohomology(q)?;
        let ht = self.target.cohomology(q)?;
        let phi = self.component(q).matrix;
        hs.induced_map(&ht, &phi)
    }
}

/// Direct sum with the offsets of each summand in the ambient.
pub fn direct_sum(
    ring: &Ring,
    parts: &[ModulePresentation],
) -> Result<(ModulePresentation, Vec<usize>)> {
    let mut offsets = vec![];
    let mut rank = 0usize;
    for p in parts {
        offsets.push(rank);
        rank += p.rank;
    }
    let mut relations = Matrix::zero(0, rank);
    for (p, &off) in parts.iter().zip(&offsets) {
        let mut block = Matrix::zero(p.relations.rows, rank);
        for i in 0..p.relations.rows {
            for j in 0..p.rank {
                block[(i, off + j)] = p.relations[(i, j)].clone();
            }
        }
        relations = relations.vstack(&block);
    }
    Ok((ModulePresentation::new(ring.clone(), rank, relations)?, offsets))
}

/// Components (p, q) with p + q = n of X (x) Y, ordered by increasing p.
fn tensor_components(x: &BoundedComplex, y: &BoundedComplex, n: i64) -> Vec<(i64, i64)> {
    let mut out = vec![];
    if x.is_empty() || y.is_empty() {
        return out;
    }
    for p in x.lo..=x.hi {
        let q = n - p;
        if y.in_range(q) {
            out.push((p, q));
        }
    }
    out
}

fn tensor_term(
    x: &BoundedComplex,
    y: &BoundedComplex,
    n: i64,
) -> Result<(ModulePresentation, Vec<((i64, i64), usize)>)> {
    let ring = &x.ring;
    let comps = tensor_components(x, y, n);
    let parts: Vec<ModulePresentation> = comps
        .iter()
        .map(|&(p, q)| crate::module::tensor_modules(&x.term(p), &y.term(q)))
        .collect::<Result<_>>()?;
    let (m, offsets) = direct_sum(ring, &parts)?;
    Ok((m, comps.into_iter().zip(offsets).collect()))
}

/// Total complex of the tensor double complex, with Koszul signs:
/// d(x (x) y) = dx (x) y + (-1)^p x (x) dy on the (p, q) component.
pub fn tensor_complex(x: &BoundedComplex, y: &BoundedComplex) -> Result<BoundedComplex> {
    let ring = x.ring.clone();
    if x.is_empty() || y.is_empty() {
        return Ok(BoundedComplex::zero_complex(ring));
    }
    let lo = x.lo + y.lo;
    let hi = x.hi + y.hi;
    let mut terms = vec![];
    let mut layouts = vec![];
    for n in lo..=hi {
        let (t, layout) = tensor_term(x, y, n)?;
        terms.push(t);
        layouts.push(layout);
    }
    let mut diffs = vec![];
    for n in lo..hi {
        let src = &terms[(n - lo) as usize];
        let tgt = &terms[(n + 1 - lo) as usize];
        let src_layout = &layouts[(n - lo) as usize];
        let tgt_layout = &layouts[(n + 1 - lo) as usize];
        let mut mat = Matrix::zero(tgt.rank, src.rank);
        for &((p, q), soff) in src_layout {
            let (xm, ym) = (x.term(p), y.term(q));
            // horizontal piece: d_X (x) id into component (p+1, q)
            if let Some(&(_, toff)) = tgt_layout.iter().find(|&&(c, _)| c == (p + 1, q)) {
                let dx = x.diff(p);
                let block = dx
                    .matrix
                    .kronecker(&Matrix::identity(&ring, ym.rank), &ring);
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        mat[(toff + i, soff + j)] =
                            ring.add(&mat[(toff + i, soff + j)], &block[(i, j)]);
                    }
                }
            }
            // vertical piece: (-1)^p id (x) d_Y into component (p, q+1)
            if let Some(&(_, toff)) = tgt_layout.iter().find(|&&(c, _)| c == (p, q + 1)) {
                let dy = y.diff(q);
                let mut block = Matrix::identity(&ring, xm.rank)
                    .kronecker(&dy.matrix, &ring);
                if p.rem_euclid(2) == 1 {
                    block = block.neg(&ring);
                }
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        mat[(toff + i, soff + j)] =
                            ring.add(&mat[(toff + i, soff + j)], &block[(i, j)]);
                    }
                }
            }
        }
        diffs.push(ModuleMap::new(src.clone(), tgt.clone(), mat)?);
    }
    BoundedComplex::new(ring, lo, terms, diffs)
}

/// Tensor of complex maps, degreewise f^p (x) g^q with the layout of
/// tensor_complex.
pub fn tensor_complex_maps(f: &ComplexMap, g: &ComplexMap) -> Result<ComplexMap> {
    let ring = f.source.ring.clone();
    let source = tensor_complex(&f.source, &g.source)?;
    let target = tensor_complex(&f.target, &g.target)?;
    if source.is_empty() || target.is_empty() {
        return ComplexMap::new(source, target, 0, vec![]);
    }
    let mut maps = vec![];
    for n in source.lo..=source.hi {
        let src = source.term(n);
        let tgt = target.term(n);
        let src_layout: Vec<((i64, i64), usize)> = {
            let (_, l) = tensor_term(&f.source, &g.source, n)?;
            l
        };
        let tgt_layout: Vec<((i64, i64), usize)> = {
            let (_, l) = tensor_term(&f.target, &g.target, n)?;
            l
        };
        let mut mat = Matrix::zero(tgt.rank, src.rank);
        for &((p, q), soff) in &src_layout {
            if let Some(&(_, toff)) = tgt_layout.iter().find(|&&(c, _)| c == (p, q)) {
                let block = f
                    .component(p)
                    .matrix
                    .kronecker(&g.component(q).matrix, &ring);
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        mat[(toff + i, soff + j)] = block[(i, j)].clone();
                    }
                }
            }
        }
        maps.push(ModuleMap::new(src, tgt, mat)?);
    }
    let lo = source.lo;
    ComplexMap::new(source, target, lo, maps)
}

/// Hom complex Hom(X, Y) for X a complex of free modules. Degree n term is
/// the direct sum over p of Hom(X^p, Y^{p+n}) = Y^{p+n}^{rank X^p}, flattened
/// as (free generator, Y coordinate). Differential convention:
/// d(phi) = d_Y o phi + (-1)^n phi o d_X, which for Y = A concentrated in
/// degree 0 makes the dual of [A -a-> A] literally [A -a-> A] in degrees 0, 1.
pub fn hom_complex(x: &BoundedComplex, y: &BoundedComplex) -> Result<BoundedComplex> {
    let ring = x.ring.clone();
    for t in &x.terms {
        if t.relations.rows != 0 {
            return Err(Error::PreconditionFailed(
                "hom_complex requires a free source complex".into(),
            ));
        }
    }
    if x.is_empty() || y.is_empty() {
        return Ok(BoundedComplex::zero_complex(ring));
    }
    let lo = y.lo - x.hi;
    let hi = y.hi - x.lo;
    // components of degree n: (p, p + n) with both in range, by increasing p
    let components = |n: i64| -> Vec<(i64, i64)> {
        (x.lo..=x.hi)
            .filter(|&p| y.in_range(p + n))
            .map(|p| (p, p + n))
            .collect()
    };
    let build_term = |n: i64| -> Result<(ModulePresentation, Vec<((i64, i64), usize)>)> {
        let comps = components(n);
        let parts: Vec<ModulePresentation> = comps
            .iter()
            .map(|&(p, m)| {
                let xr = x.term(p).rank;
                let (part, _) = direct_sum(&ring, &vec![y.term(m); xr])?;
                Ok(part)
            })
            .collect::<Result<_>>()?;
        let (t, offsets) = direct_sum(&ring, &parts)?;
        Ok((t, comps.into_iter().zip(offsets).collect()))
    };
    let mut terms = vec![];
    let mut layouts = vec![];
    for n in lo..=hi {
        let (t, l) = build_term(n)?;
        terms.push(t);
        layouts.push(l);
    }
    let mut diffs = vec![];
    for n in lo..hi {
        let src = &terms[(n - lo) as usize];
        let tgt = &terms[(n + 1 - lo) as usize];
        let src_layout = &layouts[(n - lo) as usize];
        let tgt_layout = &layouts[(n + 1 - lo) as usize];
        let mut mat = Matrix::zero(tgt.rank, src.rank);
        for &((p, m), soff) in src_layout {
            let xr = x.term(p).rank;
            // d_Y o phi: into component (p, m+1); block I_{xr} (x) d_Y
            if let Some(&(_, toff)) = tgt_layout.iter().find(|&&(c, _)| c == (p, m + 1)) {
                let dy = y.diff(m);
                let block = Matrix::identity(&ring, xr).kronecker(&dy.matrix, &ring);
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        mat[(toff + i, soff + j)] =
                            ring.add(&mat[(toff + i, soff + j)], &block[(i, j)]);
                    }
                }
            }
            // (-1)^n phi o d_X: into component (p-1, m); block d_X^T (x) I_{rank Y^m}
            if let Some(&(_, toff)) = tgt_layout.iter().find(|&&(c, _)| c == (p - 1, m)) {
                let dx = x.diff(p - 1);
                let mut block = dx
                    .matrix
                    .transpose()
                    .kronecker(&Matrix::identity(&ring, y.term(m).rank), &ring);
                if n.rem_euclid(2) == 1 {
                    block = block.neg(&ring);
                }
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        mat[(toff + i, soff + j)] =
                            ring.add(&mat[(toff + i, soff + j)], &block[(i, j)]);
                    }
                }
            }
        }
        diffs.push(ModuleMap::new(src.clone(), tgt.clone(), mat)?);
    }
    BoundedComplex::new(ring, lo, terms, diffs)
}

/// The dual map Hom(f, Y): Hom(X2, Y) -> Hom(X1, Y) of f: X1 -> X2, for free
/// sources and Y concentrated in a single degree.
pub fn hom_dual_map(f: &ComplexMap, y: &BoundedComplex) -> Result<ComplexMap> {
    let ring = f.source.ring.clone();
    if y.terms.len() != 1 {
        return Err(Error::PreconditionFailed(
            "hom_dual_map expects a one-term target complex".into(),
        ));
    }
    let ydeg = y.lo;
    let ym = y.term(ydeg);
    let source = hom_complex(&f.target, y)?;
    let target = hom_complex(&f.source, y)?;
    if source.is_empty() || target.is_empty() {
        return ComplexMap::new(source, target, 0, vec![]);
    }
    let lo = source.lo.min(target.lo);
    let hi = source.hi.max(target.hi);
    let mut maps = vec![];
    for n in lo..=hi {
        // degree n holds Hom(X^{ydeg - n}, Y^{ydeg}); precomposition with
        // f^{ydeg-n} is (f^{ydeg-n})^T (x) id
        let p = ydeg - n;
        let src = source.term(n);
        let tgt = target.term(n);
        let block = f
            .component(p)
            .matrix
            .transpose()
            .kronecker(&Matrix::identity(&ring, ym.rank), &ring);
        let mat = if src.rank == block.cols && tgt.rank == block.rows {
            block
        } else {
            Matrix::zero(tgt.rank, src.rank)
        };
        maps.push(ModuleMap::new(src, tgt, mat)?);
    }
    ComplexMap::new(source, target, lo, maps)
}

/// Exactness at the joint of f and g (composable, g o f = 0):
/// kernel(g) = image(f) inside the middle module.
pub fn exact_at(f: &ModuleMap, g: &ModuleMap) -> Result<bool> {
    if f.target.rank != g.source.rank {
        return Err(Error::Shape("maps are not composable".into()));
    }
    if !f.compose(g)?.is_zero_map()? {
        return Ok(false);
    }
    let ring = f.ring();
    let mid = &f.target;
    let lhs = g.matrix.hstack(&g.target.relations_transposed());
    let cycles: Vec<Vector> = kernel_gens(ring, &lhs)?
        .into_iter()
        .map(|k| k[..mid.rank].to_vec())
        .filter(|v| !vector_is_zero(v))
        .collect();
    let mut modulo: Vec<Vector> = mid.relation_rows();
    modulo.extend(f.matrix.cols_vec());
    modulo.retain(|v| !vector_is_zero(v));
    subquotient_presentation(ring, mid.rank, &cycles, &modulo)?.is_zero_module()
}

/// Exactness at every interior node of a composable chain; on failure the
/// index of the first bad node (0-based over interior nodes).
pub fn is_exact_sequence(maps: &[ModuleMap]) -> Result<(bool, Option<usize>)> {
    for w in 0..maps.len().saturating_sub(1) {
        if !exact_at(&maps[w], &maps[w + 1])? {
            return Ok((false, Some(w)));
        }
    }
    Ok((true, None))
}

/// Degreewise exactness of X -f-> Y -g-> Z at Y, including the outer zero
/// degrees of Y; reports the first failing degree.
pub fn complex_exact_at(f: &ComplexMap, g: &ComplexMap) -> Result<(bool, Option<i64>)> {
    let y = &f.target;
    let lo = y.lo.min(f.source.lo).min(g.target.lo);
    let hi = y.hi.max(f.source.hi).max(g.target.hi);
    for q in lo..=hi {
        if !exact_at(&f.component(q), &g.component(q))? {
            return Ok((false, Some(q)));
        }
    }
    Ok((true, None))
}

//! Groebner bases for submodules of free modules over polynomial rings.
//!
//! Field coefficients use classical Buchberger; integer coefficients use the
//! strong (S-pair + G-pair) variant, so ZZ and ZZ/N coefficient rings are
//! covered. Representations in terms of the input generators are tracked
//! throughout, which yields syzygy generators and membership witnesses.
//!
//! Terms of a module element are compared top-over-position: monomial first in
//! the ring order, lower component index winning ties.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::coeff::ext_gcd;
use crate::monomial::Monomial;
use crate::poly::{Poly, PolyCtx};

pub type Vector = Vec<Poly>;

pub fn zero_vector(rank: usize) -> Vector {
    vec![Poly::zero(); rank]
}

pub fn vector_is_zero(v: &Vector) -> bool {
    v.iter().all(|p| p.is_zero())
}

pub fn vector_add(a: &Vector, b: &Vector, ctx: &PolyCtx) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y, ctx)).collect()
}

pub fn vector_sub(a: &Vector, b: &Vector, ctx: &PolyCtx) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.sub(y, ctx)).collect()
}

pub fn vector_neg(a: &Vector, ctx: &PolyCtx) -> Vector {
    a.iter().map(|x| x.neg(ctx)).collect()
}

pub fn vector_mul_term(a: &Vector, m: &Monomial, c: &BigRational, ctx: &PolyCtx) -> Vector {
    a.iter().map(|x| x.mul_term(m, c, ctx)).collect()
}

pub fn vector_mul_poly(a: &Vector, p: &Poly, ctx: &PolyCtx) -> Vector {
    a.iter().map(|x| x.mul(p, ctx)).collect()
}

/// Leading term of a module element: (component, monomial, coefficient).
pub fn lead_term(v: &Vector, ctx: &PolyCtx) -> Option<(usize, Monomial, BigRational)> {
    let mut best: Option<(usize, &Monomial, &BigRational)> = None;
    for (comp, p) in v.iter().enumerate() {
        if let Some((m, c)) = p.lead() {
            let better = match &best {
                None => true,
                Some((bc, bm, _)) => match ctx.order.cmp(m, bm) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => comp < *bc,
                },
            };
            if better {
                best = Some((comp, m, c));
            }
        }
    }
    best.map(|(comp, m, c)| (comp, m.clone(), c.clone()))
}

#[derive(Clone, Debug)]
pub struct GbElement {
    pub vec: Vector,
    /// vec = sum over j of rep[j] * gens[j]
    pub rep: Vector,
}

#[derive(Debug)]
pub struct ModuleGb {
    pub rank: usize,
    pub num_gens: usize,
    pub basis: Vec<GbElement>,
    /// Generators of the syzygy module of the input generators.
    pub syzygies: Vec<Vector>,
}

fn as_int(c: &BigRational) -> BigInt {
    debug_assert!(c.is_integer());
    c.numer().clone()
}

struct Reducer<'a> {
    ctx: &'a PolyCtx,
    basis: &'a [GbElement],
}

impl<'a> Reducer<'a> {
    /// Fully reduce `v`, updating `rep` (in gen space) alongside. Returns the
    /// normal form; `rep` on return satisfies  original = nf + rep_delta·gens
    /// convention maintained by the caller.
    fn reduce(&self, v: Vector, rep: &mut Vector) -> Vector {
        let ctx = self.ctx;
        let mut work = v;
        let mut out = zero_vector(work.len());
        'outer: loop {
            let Some((comp, mon, _)) = lead_term(&work, ctx) else {
                break 'outer;
            };
            if ctx.domain.is_field() {
                let mut reduced = false;
                for g in self.basis {
                    if let Some((gc, gm, glc)) = lead_term(&g.vec, ctx) {
                        if gc == comp && gm.divides(&mon) {
                            let coeff = work[comp].lead().unwrap().1.clone();
                            let delta = gm.div_into(&mon);
                            let q = &coeff * self.ctx.domain.inverse(&glc).expect("field");
                            let q = ctx.domain.normalize(&q).expect("field coeff");
                            let sub = vector_mul_term(&g.vec, &delta, &q, ctx);
                            work = vector_sub(&work, &sub, ctx);
                            let rsub = vector_mul_term(&g.rep, &delta, &q, ctx);
                            *rep = vector_sub(rep, &rsub, ctx);
                            reduced = true;
                            break;
                        }
                    }
                }
                if reduced {
                    continue 'outer;
                }
            } else {
                // integer coefficients: bring the coefficient to its canonical
                // residue against every applicable leading coefficient
                loop {
                    let Some((m, c)) = work[comp].lead() else { break };
                    if *m != mon {
                        break;
                    }
                    let coeff = as_int(c);
                    let mut changed = false;
                    for g in self.basis {
                        let Some((gc, gm, glc)) = lead_term(&g.vec, ctx) else { continue };
                        if gc != comp || !gm.divides(&mon) {
                            continue;
                        }
                        let cur = match work[comp].lead() {
                            Some((m2, c2)) if *m2 == mon => as_int(c2),
                            _ => break,
                        };
                        let glc = as_int(&glc);
                        let q = cur.div_floor(&glc);
                        if q.is_zero() {
                            continue;
                        }
                        let delta = gm.div_into(&mon);
                        let qr = BigRational::from_integer(q);
                        let sub = vector_mul_term(&g.vec, &delta, &qr, ctx);
                        work = vector_sub(&work, &sub, ctx);
                        let rsub = vector_mul_term(&g.rep, &delta, &qr, ctx);
                        *rep = vector_sub(rep, &rsub, ctx);
                        changed = true;
                    }
                    if !changed {
                        let _ = coeff;
                        break;
                    }
                }
                match work[comp].lead() {
                    Some((m, _)) if *m == mon => {}
                    _ => continue 'outer, // term vanished entirely
                }
            }
            // irreducible leading term: move it to the output
            let (m, c) = {
                let t = work[comp].terms.remove(0);
                (t.0, t.1)
            };
            out[comp].terms.push((m, c));
            // out stays sorted: terms arrive in strictly decreasing order
        }
        out
    }
}

pub fn module_groebner(
    ctx: &PolyCtx,
    rank: usize,
    gens: &[Vector],
    want_syzygies: bool,
) -> ModuleGb {
    let num_gens = gens.len();
    let mut basis: Vec<GbElement> = Vec::new();
    let mut syzygies: Vec<Vector> = Vec::new();
    let mut queue: VecDeque<Candidate> = VecDeque::new();

    enum Candidate {
        Gen(usize),
        SPair(usize, usize),
        GPair(usize, usize),
    }

    for j in 0..num_gens {
        queue.push_back(Candidate::Gen(j));
    }

    let normalize_sign = |vec: &mut Vector, rep: &mut Vector, ctx: &PolyCtx| {
        if !ctx.domain.is_field() {
            if let Some((_, _, lc)) = lead_term(vec, ctx) {
                if lc.is_negative() {
                    *vec = vector_neg(vec, ctx);
                    *rep = vector_neg(rep, ctx);
                }
            }
        }
    };

    while let Some(cand) = queue.pop_front() {
        let (vec, mut rep) = match cand {
            Candidate::Gen(j) => {
                let mut rep = zero_vector(num_gens);
                rep[j] = Poly::one(ctx);
                (gens[j].clone(), rep)
            }
            Candidate::SPair(i, j) => {
                let (fi, fj) = (&basis[i], &basis[j]);
                let (ci, mi, li) = lead_term(&fi.vec, ctx).unwrap();
                let (cj, mj, lj) = lead_term(&fj.vec, ctx).unwrap();
                debug_assert_eq!(ci, cj);
                let lcm = mi.lcm(&mj);
                let (qi, qj) = if ctx.domain.is_field() {
                    (
                        ctx.domain.inverse(&li).unwrap(),
                        ctx.domain.inverse(&lj).unwrap(),
                    )
                } else {
                    let (a, b) = (as_int(&li), as_int(&lj));
                    let l = a.lcm(&b);
                    (
                        BigRational::from_integer(&l / a),
                        BigRational::from_integer(&l / b),
                    )
                };
                let di = mi.div_into(&lcm);
                let dj = mj.div_into(&lcm);
                let vec = vector_sub(
                    &vector_mul_term(&fi.vec, &di, &qi, ctx),
                    &vector_mul_term(&fj.vec, &dj, &qj, ctx),
                    ctx,
                );
                let rep = vector_sub(
                    &vector_mul_term(&fi.rep, &di, &qi, ctx),
                    &vector_mul_term(&fj.rep, &dj, &qj, ctx),
                    ctx,
                );
                (vec, rep)
            }
            Candidate::GPair(i, j) => {
                let (fi, fj) = (&basis[i], &basis[j]);
                let (ci, mi, li) = lead_term(&fi.vec, ctx).unwrap();
                let (cj, mj, lj) = lead_term(&fj.vec, ctx).unwrap();
                debug_assert_eq!(ci, cj);
                let (a, b) = (as_int(&li), as_int(&lj));
                let (_, u, w) = ext_gcd(&a, &b);
                let lcm = mi.lcm(&mj);
                let di = mi.div_into(&lcm);
                let dj = mj.div_into(&lcm);
                let (u, w) = (BigRational::from_integer(u), BigRational::from_integer(w));
                let vec = vector_add(
                    &vector_mul_term(&fi.vec, &di, &u, ctx),
                    &vector_mul_term(&fj.vec, &dj, &w, ctx),
                    ctx,
                );
                let rep = vector_add(
                    &vector_mul_term(&fi.rep, &di, &u, ctx),
                    &vector_mul_term(&fj.rep, &dj, &w, ctx),
                    ctx,
                );
                (vec, rep)
            }
        };
        let reducer = Reducer { ctx, basis: &basis };
        let mut nf = reducer.reduce(vec, &mut rep);
        if vector_is_zero(&nf) {
            if want_syzygies && !vector_is_zero(&rep) {
                syzygies.push(rep);
            }
            continue;
        }
        normalize_sign(&mut nf, &mut rep, ctx);
        let k = basis.len();
        let (ck, _, lk) = lead_term(&nf, ctx).unwrap();
        for i in 0..k {
            if let Some((ci, _, li)) = lead_term(&basis[i].vec, ctx) {
                if ci == ck {
                    queue.push_back(Candidate::SPair(i, k));
                    if !ctx.domain.is_field() {
                        let (a, b) = (as_int(&li), as_int(&lk));
                        if !(&a % &b).is_zero() && !(&b % &a).is_zero() {
                            queue.push_back(Candidate::GPair(i, k));
                        }
                    }
                }
            }
        }
        basis.push(GbElement { vec: nf, rep });
    }

    minimize_and_tail_reduce(ctx, &mut basis);

    if want_syzygies {
        // syzygies from re-expressing each generator through the final basis
        for j in 0..num_gens {
            let mut rep = zero_vector(num_gens);
            rep[j] = Poly::one(ctx);
            let reducer = Reducer { ctx, basis: &basis };
            let nf = reducer.reduce(gens[j].clone(), &mut rep);
            debug_assert!(vector_is_zero(&nf), "generator must reduce to zero");
            if !vector_is_zero(&rep) {
                syzygies.push(rep);
            }
        }
        syzygies.retain(|s| !vector_is_zero(s));
        syzygies.dedup();
    }

    ModuleGb { rank, num_gens, basis, syzygies }
}

fn strongly_divides(
    ctx: &PolyCtx,
    (ci, mi, li): &(usize, Monomial, BigRational),
    (cj, mj, lj): &(usize, Monomial, BigRational),
) -> bool {
    if ci != cj || !mi.divides(mj) {
        return false;
    }
    if ctx.domain.is_field() {
        true
    } else {
        (as_int(lj) % as_int(li)).is_zero()
    }
}

fn minimize_and_tail_reduce(ctx: &PolyCtx, basis: &mut Vec<GbElement>) {
    // drop elements whose leading term is strongly reducible by another
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let li = lead_term(&basis[i].vec, ctx).unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lj = lead_term(&basis[j].vec, ctx).unwrap();
            if strongly_divides(ctx, &lj, &li) && !(strongly_divides(ctx, &li, &lj) && j > i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut kept: Vec<GbElement> = basis
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(b, _)| b.clone())
        .collect();
    // tail-reduce each element against the others (leading term untouched)
    for i in 0..kept.len() {
        let lead = {
            let (c, m, lc) = lead_term(&kept[i].vec, ctx).unwrap();
            let mut lv = zero_vector(kept[i].vec.len());
            lv[c].terms.push((m, lc));
            lv
        };
        let tail = vector_sub(&kept[i].vec, &lead, ctx);
        let others: Vec<GbElement> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| b.clone())
            .collect();
        let reducer = Reducer { ctx, basis: &others };
        let mut rep = kept[i].rep.clone();
        let tail_nf = reducer.reduce(tail, &mut rep);
        kept[i] = GbElement { vec: vector_add(&lead, &tail_nf, ctx), rep };
    }
    *basis = kept;
}

impl ModuleGb {
    /// Full normal form of `v`, together with the quotients against the basis
    /// elements: v = nf + sum_k q_k * basis_k.
    pub fn reduce_with_quotients(&self, ctx: &PolyCtx, v: &Vector) -> (Vector, Vec<Poly>) {
        // track quotients by running the reduction with rep vectors over the
        // basis index space
        let shadow: Vec<GbElement> = self
            .basis
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mut rep = zero_vector(self.basis.len());
                rep[k] = Poly::one(ctx);
                GbElement { vec: b.vec.clone(), rep }
            })
            .collect();
        let reducer = Reducer { ctx, basis: &shadow };
        let mut rep = zero_vector(self.basis.len());
        let nf = reducer.reduce(v.clone(), &mut rep);
        let quotients = rep.iter().map(|q| q.neg(ctx)).collect();
        (nf, quotients)
    }

    pub fn normal_form(&self, ctx: &PolyCtx, v: &Vector) -> Vector {
        self.reduce_with_quotients(ctx, v).0
    }

    pub fn contains(&self, ctx: &PolyCtx, v: &Vector) -> bool {
        vector_is_zero(&self.normal_form(ctx, v))
    }

    /// If v lies in the span of the generators, expresses it as a combination
    /// of the original generators.
    pub fn express_in_gens(&self, ctx: &PolyCtx, v: &Vector) -> Option<Vector> {
        let (nf, quotients) = self.reduce_with_quotients(ctx, v);
        if !vector_is_zero(&nf) {
            return None;
        }
        let mut coeffs = zero_vector(self.num_gens);
        for (q, b) in quotients.iter().zip(&self.basis) {
            if !q.is_zero() {
                coeffs = vector_add(&coeffs, &vector_mul_poly(&b.rep, q, ctx), ctx);
            }
        }
        Some(coeffs)
    }
}

//! Effectively presented commutative rings: ZZ, ZZ/N, and multivariate
//! polynomial quotients over ZZ, ZZ/N, QQ or a prime field.
//!
//! Every ring carries cached normal-form data (a reduced strong Groebner
//! basis of its defining ideal) computed once at construction. Elements are
//! polynomials kept in canonical normal form; equality of elements is
//! equality of representatives.

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::coeff::CoeffDomain;
use crate::error::{Error, Result};
use crate::groebner::{module_groebner, ModuleGb};
use crate::monomial::MonomialOrder;
use crate::parse::parse_poly;
use crate::poly::{Poly, PolyCtx};

pub type RingElement = Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffSpec {
    Int,
    IntMod(BigUint),
    Rationals,
    PrimeField(BigUint),
}

impl CoeffSpec {
    fn domain(&self) -> CoeffDomain {
        match self {
            CoeffSpec::Int | CoeffSpec::IntMod(_) => CoeffDomain::Integer,
            CoeffSpec::Rationals => CoeffDomain::Rational,
            CoeffSpec::PrimeField(p) => CoeffDomain::PrimeField(p.clone()),
        }
    }
}

/// Tier of a presentation, derived for reporting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Int,
    IntMod(BigUint),
    PolyQuot,
    ZeroRing,
}

#[derive(Debug)]
pub struct RingInner {
    pub ctx: PolyCtx,
    pub vars: Vec<String>,
    pub coeff: CoeffSpec,
    /// User-declared generators, with the modulus of an `IntMod` coefficient
    /// ring adjoined.
    pub ideal_gens: Vec<Poly>,
    pub gb: ModuleGb,
    pub zero_ring: bool,
}

#[derive(Clone, Debug)]
pub struct Ring(pub Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ctx == other.0.ctx
                && self.0.vars == other.0.vars
                && self.0.coeff == other.0.coeff
                && self
                    .0
                    .gb
                    .basis
                    .iter()
                    .map(|b| &b.vec)
                    .eq(other.0.gb.basis.iter().map(|b| &b.vec)))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tier() {
            Tier::Int => write!(f, "ZZ"),
            Tier::IntMod(n) => write!(f, "ZZ/{n}"),
            Tier::ZeroRing => write!(f, "0"),
            Tier::PolyQuot => {
                let base = match &self.0.coeff {
                    CoeffSpec::Int => "ZZ".to_string(),
                    CoeffSpec::IntMod(n) => format!("ZZ/{n}"),
                    CoeffSpec::Rationals => "QQ".to_string(),
                    CoeffSpec::PrimeField(p) => format!("FF{p}"),
                };
                let gens: Vec<String> = self
                    .0
                    .ideal_gens
                    .iter()
                    .map(|g| g.display(&self.0.vars))
                    .collect();
                if gens.is_empty() {
                    write!(f, "{base}[{}]", self.0.vars.join(","))
                } else {
                    write!(f, "{base}[{}]/({})", self.0.vars.join(","), gens.join(", "))
                }
            }
        }
    }
}

impl Ring {
    pub fn integers() -> Ring {
        Ring::build(CoeffSpec::Int, vec![], MonomialOrder::default(), vec![])
            .expect("ZZ presentation is valid")
    }

    pub fn integers_mod(n: BigUint) -> Result<Ring> {
        if n < BigUint::from(2u32) {
            return Err(Error::PreconditionFailed(format!("modulus {n} < 2")));
        }
        Ring::build(CoeffSpec::IntMod(n), vec![], MonomialOrder::default(), vec![])
    }

    /// Polynomial quotient tier. `ideal` is parsed in the polynomial ring.
    pub fn poly_quot(
        coeff: CoeffSpec,
        vars: Vec<String>,
        order: MonomialOrder,
        ideal: Vec<String>,
    ) -> Result<Ring> {
        let nvars = vars.len();
        let ctx = PolyCtx::new(nvars, order, coeff.domain());
        let mut gens = Vec::with_capacity(ideal.len());
        for src in &ideal {
            gens.push(parse_poly(src, &ctx, &vars)?);
        }
        Ring::build(coeff, vars, order, gens)
    }

    pub fn build(
        coeff: CoeffSpec,
        vars: Vec<String>,
        order: MonomialOrder,
        mut ideal_gens: Vec<Poly>,
    ) -> Result<Ring> {
        {
            let mut seen = std::collections::HashSet::new();
            for v in &vars {
                if !seen.insert(v.clone()) {
                    return Err(Error::PreconditionFailed(format!(
                        "duplicate variable name `{v}`"
                    )));
                }
            }
        }
        let ctx = PolyCtx::new(vars.len(), order, coeff.domain());
        if let CoeffSpec::IntMod(n) = &coeff {
            if *n < BigUint::from(2u32) {
                return Err(Error::PreconditionFailed(format!("modulus {n} < 2")));
            }
            let m = Poly::constant(&ctx, BigInt::from(n.clone()).into())?;
            if !ideal_gens.contains(&m) {
                ideal_gens.insert(0, m);
            }
        }
        let gen_vecs: Vec<Vec<Poly>> = ideal_gens.iter().map(|g| vec![g.clone()]).collect();
        let gb = module_groebner(&ctx, 1, &gen_vecs, false);
        let one = Poly::one(&ctx);
        let zero_ring = gb.contains(&ctx, &vec![one]);
        Ok(Ring(Arc::new(RingInner { ctx, vars, coeff, ideal_gens, gb, zero_ring })))
    }

    pub fn ctx(&self) -> &PolyCtx {
        &self.0.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn is_zero_ring(&self) -> bool {
        self.0.zero_ring
    }

    pub fn tier(&self) -> Tier {
        if self.0.zero_ring {
            return Tier::ZeroRing;
        }
        if self.0.vars.is_empty() && matches!(self.0.coeff, CoeffSpec::Int | CoeffSpec::IntMod(_)) {
            let consts: Vec<&Poly> = self.0.gb.basis.iter().map(|b| &b.vec[0]).collect();
            if consts.is_empty() {
                return Tier::Int;
            }
            if consts.len() == 1 {
                if let Some((m, c)) = consts[0].lead() {
                    if m.is_one() && c.is_integer() {
                        let n = c.numer().magnitude().clone();
                        if n >= BigUint::from(2u32) {
                            return Tier::IntMod(n);
                        }
                    }
                }
            }
            Tier::Int
        } else {
            Tier::PolyQuot
        }
    }

    pub fn normal_form(&self, raw: &Poly) -> Poly {
        if self.0.zero_ring {
            return Poly::zero();
        }
        let v = self.0.gb.normal_form(&self.0.ctx, &vec![raw.clone()]);
        v.into_iter().next().unwrap()
    }

    pub fn parse_element(&self, src: &str) -> Result<Poly> {
        let p = parse_poly(src, &self.0.ctx, &self.0.vars)?;
        Ok(self.normal_form(&p))
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.normal_form(&Poly::one(&self.0.ctx))
    }

    pub fn int(&self, n: i64) -> Poly {
        self.normal_form(&Poly::from_int(&self.0.ctx, n).expect("integer coefficient"))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal_form(&a.add(b, &self.0.ctx))
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal_form(&a.sub(b, &self.0.ctx))
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.normal_form(&a.neg(&self.0.ctx))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.normal_form(&a.mul(b, &self.0.ctx))
    }

    pub fn pow(&self, a: &Poly, k: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn display_element(&self, a: &Poly) -> String {
        a.display(&self.0.vars)
    }

    fn fresh_var(&self) -> String {
        let mut name = "y".to_string();
        let mut k = 0usize;
        while self.0.vars.iter().any(|v| *v == name) {
            k += 1;
            name = format!("y{k}");
        }
        name
    }

    fn lift_poly(p: &Poly, extra: usize) -> Poly {
        Poly {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = m.exps.clone();
                    exps.extend(std::iter::repeat(0).take(extra));
                    (crate::monomial::Monomial { exps }, c.clone())
                })
                .collect(),
        }
    }

    /// Quotient by additional generators; the projection is `self.projection_to`.
    pub fn quotient(&self, gens: &[Poly]) -> Result<Ring> {
        let mut ideal = self.0.ideal_gens.clone();
        for g in gens {
            ideal.push(g.clone());
        }
        Ring::build(self.0.coeff.clone(), self.0.vars.clone(), self.0.ctx.order, ideal)
    }

    /// Canonical projection onto a quotient of this ring (same variables).
    pub fn projection_to(&self, target: &Ring) -> Result<RingHom> {
        let images = (0..self.0.vars.len())
            .map(|i| Poly::var(&target.0.ctx, i))
            .collect();
        RingHom::new(self.clone(), target.clone(), images)
    }

    /// Localization at `s`, presented as A[y]/(s*y - 1) over a fresh variable.
    pub fn localize(&self, s: &Poly) -> Result<(Ring, RingHom)> {
        let fresh = self.fresh_var();
        let mut vars = self.0.vars.clone();
        vars.push(fresh);
        let new_ctx = PolyCtx::new(vars.len(), self.0.ctx.order, self.0.ctx.domain.clone());
        let mut ideal: Vec<Poly> = self
            .0
            .ideal_gens
            .iter()
            .map(|g| Self::lift_poly(g, 1))
            .collect();
        let y = Poly::var(&new_ctx, vars.len() - 1);
        let s_lift = Self::lift_poly(s, 1);
        ideal.push(s_lift.mul(&y, &new_ctx).sub(&Poly::one(&new_ctx), &new_ctx));
        let coeff = match &self.0.coeff {
            CoeffSpec::Int | CoeffSpec::IntMod(_) => self.0.coeff.clone(),
            other => other.clone(),
        };
        let target = Ring::build(coeff, vars, self.0.ctx.order, ideal)?;
        let images = (0..self.0.vars.len())
            .map(|i| Poly::var(&target.0.ctx, i))
            .collect();
        let hom = RingHom::new(self.clone(), target.clone(), images)?;
        Ok((target, hom))
    }
}

/// A ring homomorphism determined by images of the variables (coefficients map
/// canonically). Well-definedness is checked at construction.
#[derive(Clone, Debug)]
pub struct RingHom {
    pub source: Ring,
    pub target: Ring,
    pub images: Vec<Poly>,
}

impl RingHom {
    pub fn new(source: Ring, target: Ring, images: Vec<Poly>) -> Result<RingHom> {
        if images.len() != source.0.vars.len() {
            return Err(Error::Shape(format!(
                "expected {} variable images, got {}",
                source.0.vars.len(),
                images.len()
            )));
        }
        let hom = RingHom { source, target, images };
        // characteristic compatibility for prime-field sources
        if let CoeffSpec::PrimeField(p) = &hom.source.0.coeff {
            let p_el = hom
                .target
                .normal_form(&Poly::constant(&hom.target.0.ctx, BigInt::from(p.clone()).into())?);
            if !p_el.is_zero() {
                return Err(Error::PreconditionFailed(format!(
                    "characteristic {p} does not vanish in the target"
                )));
            }
        }
        for g in &hom.source.0.ideal_gens {
            let img = hom.apply(g)?;
            if !img.is_zero() {
                return Err(Error::PreconditionFailed(format!(
                    "ideal generator `{}` does not map to zero",
                    hom.source.display_element(g)
                )));
            }
        }
        Ok(hom)
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let img = p.substitute(&self.target.0.ctx, &self.images)?;
        Ok(self.target.normal_form(&img))
    }

    pub fn compose(&self, then: &RingHom) -> Result<RingHom> {
        let images = self
            .images
            .iter()
            .map(|im| then.apply(im))
            .collect::<Result<Vec<_>>>()?;
        RingHom::new(self.source.clone(), then.target.clone(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_reduction() {
        let z8 = Ring::integers_mod(BigUint::from(8u32)).unwrap();
        assert_eq!(z8.parse_element("11").unwrap(), z8.int(3));
        assert_eq!(z8.tier(), Tier::IntMod(BigUint::from(8u32)));
    }

    #[test]
    fn buchberger_normal_form_example() {
        // QQ[x,y]/(x^2 - y): x^3 -> x*y
        let r = Ring::poly_quot(
            CoeffSpec::Rationals,
            vec!["x".into(), "y".into()],
            MonomialOrder::DegRevLex,
            vec!["x^2 - y".into()],
        )
        .unwrap();
        let nf = r.parse_element("x^3").unwrap();
        assert_eq!(nf, r.parse_element("x*y").unwrap());
    }

    #[test]
    fn coefficient_reduction_in_z4u() {
        let r = Ring::poly_quot(
            CoeffSpec::IntMod(BigUint::from(4u32)),
            vec!["u".into()],
            MonomialOrder::DegRevLex,
            vec![],
        )
        .unwrap();
        assert_eq!(r.parse_element("4*u + u").unwrap(), r.parse_element("u").unwrap());
    }

    #[test]
    fn normal_form_idempotent() {
        let r = Ring::poly_quot(
            CoeffSpec::Rationals,
            vec!["x".into(), "y".into()],
            MonomialOrder::DegRevLex,
            vec!["x^2 - y".into()],
        )
        .unwrap();
        let raw = r.parse_element("x^5 + 3*x^3 - y").unwrap();
        assert_eq!(r.normal_form(&raw), raw);
    }

    #[test]
    fn localize_torsion_ring_gives_zero_ring() {
        // ZZ/8 localized at 2 is the zero ring
        let z8 = Ring::integers_mod(BigUint::from(8u32)).unwrap();
        let (l, _) = z8.localize(&z8.int(2)).unwrap();
        assert!(l.is_zero_ring());
        assert_eq!(l.tier(), Tier::ZeroRing);
    }

    #[test]
    fn localize_at_unit_is_isomorphic() {
        let z = Ring::integers();
        let (l, hom) = z.localize(&z.int(1)).unwrap();
        assert!(!l.is_zero_ring());
        // y - 1 eliminates y: the image of 5 is still a nonzero constant
        assert_eq!(hom.apply(&z.int(5)).unwrap(), l.int(5));
    }

    #[test]
    fn localize_polynomial_ring_inverts() {
        let r = Ring::poly_quot(
            CoeffSpec::Rationals,
            vec!["x".into()],
            MonomialOrder::DegRevLex,
            vec![],
        )
        .unwrap();
        let x = r.parse_element("x").unwrap();
        let (l, hom) = r.localize(&x).unwrap();
        let xi = hom.apply(&x).unwrap();
        let y = Poly::var(l.ctx(), 1);
        let y = l.normal_form(&y);
        assert_eq!(l.mul(&xi, &y), l.one());
    }

    #[test]
    fn quotient_examples() {
        let z = Ring::integers();
        let q = z.quotient(&[z.int(8)]).unwrap();
        assert_eq!(q.tier(), Tier::IntMod(BigUint::from(8u32)));

        // (ZZ/4)[u] / (u - 2): u maps to 2
        let r = Ring::poly_quot(
            CoeffSpec::IntMod(BigUint::from(4u32)),
            vec!["u".into()],
            MonomialOrder::DegRevLex,
            vec![],
        )
        .unwrap();
        let q2 = r.quotient(&[r.parse_element("u - 2").unwrap()]).unwrap();
        assert_eq!(q2.parse_element("u").unwrap(), q2.int(2));
        assert_eq!(q2.parse_element("u^2").unwrap(), q2.int(0));

        // QQ[x,y]/(x) behaves like QQ[y]
        let s = Ring::poly_quot(
            CoeffSpec::Rationals,
            vec!["x".into(), "y".into()],
            MonomialOrder::DegRevLex,
            vec!["x".into()],
        )
        .unwrap();
        assert!(s.parse_element("x*y").unwrap().is_zero());
        assert!(!s.parse_element("y").unwrap().is_zero());
    }

    #[test]
    fn quotient_of_quotient_matches_union() {
        let z = Ring::integers();
        let a = z.quotient(&[z.int(12)]).unwrap().quotient(&[z.int(8)]).unwrap();
        let b = z.quotient(&[z.int(12), z.int(8)]).unwrap();
        assert_eq!(a.tier(), Tier::IntMod(BigUint::from(4u32)));
        assert_eq!(a.tier(), b.tier());
    }
}

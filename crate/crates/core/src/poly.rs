//! Sparse multivariate polynomials with exact coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::coeff::CoeffDomain;
use crate::error::Result;
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyCtx {
    pub nvars: usize,
    pub order: MonomialOrder,
    pub domain: CoeffDomain,
}

impl PolyCtx {
    pub fn new(nvars: usize, order: MonomialOrder, domain: CoeffDomain) -> Self {
        PolyCtx { nvars, order, domain }
    }
}

/// Terms are kept sorted strictly descending in the context's monomial order,
/// with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    pub terms: Vec<(Monomial, BigRational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(ctx: &PolyCtx, c: BigRational) -> Result<Self> {
        let c = ctx.domain.normalize(&c)?;
        if c.is_zero() {
            Ok(Poly::zero())
        } else {
            Ok(Poly { terms: vec![(Monomial::one(ctx.nvars), c)] })
        }
    }

    pub fn one(ctx: &PolyCtx) -> Self {
        Poly::constant(ctx, BigRational::one()).expect("1 is a valid coefficient")
    }

    pub fn from_int(ctx: &PolyCtx, n: i64) -> Result<Self> {
        Poly::constant(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(ctx: &PolyCtx, i: usize) -> Self {
        Poly { terms: vec![(Monomial::var(ctx.nvars, i), BigRational::one())] }
    }

    /// Build from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(ctx: &PolyCtx, terms: Vec<(Monomial, BigRational)>) -> Result<Self> {
        let mut sorted = terms;
        sorted.sort_by(|a, b| ctx.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, BigRational)> = Vec::with_capacity(sorted.len());
        for (m, c) in sorted {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 += c;
                    continue;
                }
            }
            out.push((m, c));
        }
        let mut result = Vec::with_capacity(out.len());
        for (m, c) in out {
            let c = ctx.domain.normalize(&c)?;
            if !c.is_zero() {
                result.push((m, c));
            }
        }
        Ok(Poly { terms: result })
    }

    pub fn lead(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn add(&self, other: &Poly, ctx: &PolyCtx) -> Poly {
        let mut out: Vec<(Monomial, BigRational)> =
            Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match ctx.order.cmp(&self.terms[i].0, &other.terms[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    let c = ctx
                        .domain
                        .normalize(&c)
                        .expect("sum of normalized coefficients stays in domain");
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self, ctx: &PolyCtx) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = ctx
                    .domain
                    .normalize(&(-c))
                    .expect("negation stays in domain");
                (m.clone(), c)
            })
            .collect();
        // negation preserves the sort order and cannot create zeros
        Poly { terms }
    }

    pub fn sub(&self, other: &Poly, ctx: &PolyCtx) -> Poly {
        self.add(&other.neg(ctx), ctx)
    }

    /// self * (c * x^m)
    pub fn mul_term(&self, m: &Monomial, c: &BigRational, ctx: &PolyCtx) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (tm, tc) in &self.terms {
            let nc = ctx
                .domain
                .normalize(&(tc * c))
                .expect("product of normalized coefficients stays in domain");
            if !nc.is_zero() {
                terms.push((tm.mul(m), nc));
            }
        }
        // multiplying by a single term preserves strict descending order
        Poly { terms }
    }

    pub fn mul(&self, other: &Poly, ctx: &PolyCtx) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_term(m, c, ctx), ctx);
        }
        acc
    }

    pub fn scale(&self, c: &BigRational, ctx: &PolyCtx) -> Poly {
        self.mul_term(&Monomial::one(ctx.nvars), c, ctx)
    }

    pub fn pow(&self, k: u32, ctx: &PolyCtx) -> Poly {
        let mut acc = Poly::one(ctx);
        for _ in 0..k {
            acc = acc.mul(self, ctx);
        }
        acc
    }

    /// Evaluate in a target context by substituting each variable.
    pub fn substitute(&self, target: &PolyCtx, images: &[Poly]) -> Result<Poly> {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone())?;
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e, target), target);
                }
            }
            acc = acc.add(&t, target);
        }
        Ok(acc)
    }

    pub fn display(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mut factors: Vec<String> = vec![];
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn qctx(nvars: usize) -> PolyCtx {
        PolyCtx::new(nvars, MonomialOrder::DegRevLex, CoeffDomain::Rational)
    }

    #[test]
    fn arithmetic_round_trip() {
        let ctx = qctx(2);
        let x = Poly::var(&ctx, 0);
        let y = Poly::var(&ctx, 1);
        let p = x.add(&y, &ctx);
        let q = p.mul(&p, &ctx); // (x+y)^2
        let expect = x
            .mul(&x, &ctx)
            .add(&x.mul(&y, &ctx).scale(&BigRational::from_integer(2.into()), &ctx), &ctx)
            .add(&y.mul(&y, &ctx), &ctx);
        assert_eq!(q, expect);
        assert!(q.sub(&expect, &ctx).is_zero());
    }

    #[test]
    fn prime_field_coefficients_wrap() {
        let ctx = PolyCtx::new(1, MonomialOrder::DegRevLex, CoeffDomain::PrimeField(BigUint::from(3u32)));
        let x = Poly::var(&ctx, 0);
        let s = x.add(&x, &ctx).add(&x, &ctx); // 3x = 0 mod 3
        assert!(s.is_zero());
    }

    #[test]
    fn display_is_readable() {
        let ctx = qctx(2);
        let vars = vec!["x".to_string(), "y".to_string()];
        let x = Poly::var(&ctx, 0);
        let p = x
            .pow(2, &ctx)
            .sub(&Poly::var(&ctx, 1), &ctx);
        assert_eq!(p.display(&vars), "x^2 - y");
    }
}

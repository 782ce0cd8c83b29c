//! Exact linear solving over a ring presentation: one particular solution and
//! a generating set for the kernel.
//!
//! Dispatch by tier: Smith normal form over ZZ, augmented Smith over ZZ/N
//! (equivalent to the Howell-form route), module Groebner bases over the
//! polynomial tiers (Buchberger with field coefficients, the strong variant
//! with integer coefficients). Quotient relations are handled by adjoining
//! g*e_i columns for each defining ideal generator g and projecting them away.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groebner::{module_groebner, vector_is_zero, Vector};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::{Ring, Tier};
use crate::smith::{kernel_int, kernel_mod, solve_int, solve_mod, IntMatrix};

#[derive(Clone, Debug)]
pub struct LinearSolution {
    /// One solution of lhs * X = rhs, shape cols(lhs) x cols(rhs).
    pub particular: Matrix,
    /// Generators of { x : lhs * x = 0 }.
    pub kernel: Vec<Vector>,
}

fn const_to_int(p: &Poly) -> Result<BigInt> {
    if p.is_zero() {
        return Ok(BigInt::zero());
    }
    match p.lead() {
        Some((m, c)) if m.is_one() && c.is_integer() && p.terms.len() == 1 => {
            Ok(c.numer().clone())
        }
        _ => Err(Error::Shape("expected a constant integer entry".into())),
    }
}

fn to_int_matrix(ring: &Ring, m: &Matrix) -> Result<IntMatrix> {
    let mut out = IntMatrix::zero(m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = const_to_int(&ring.normal_form(&m[(i, j)]))?;
        }
    }
    Ok(out)
}

fn ints_to_polys(ring: &Ring, v: &[BigInt]) -> Vector {
    v.iter()
        .map(|x| {
            ring.normal_form(
                &Poly::constant(ring.ctx(), num_rational::BigRational::from_integer(x.clone()))
                    .expect("integer constant"),
            )
        })
        .collect()
}

/// Generators of the solution module of lhs * x = 0 over the ring.
pub fn kernel_gens(ring: &Ring, lhs: &Matrix) -> Result<Vec<Vector>> {
    Ok(solve_homogeneous(ring, lhs)?)
}

fn solve_homogeneous(ring: &Ring, lhs: &Matrix) -> Result<Vec<Vector>> {
    match ring.tier() {
        // over the zero ring every system is trivially solved by zero and the
        // kernel is the (zero) module itself
        Tier::ZeroRing => Ok(vec![]),
        Tier::Int => {
            let a = to_int_matrix(ring, lhs)?;
            Ok(kernel_int(&a)
                .into_iter()
                .map(|v| ints_to_polys(ring, &v))
                .filter(|v| !vector_is_zero(v))
                .collect())
        }
        Tier::IntMod(n) => {
            let a = to_int_matrix(ring, lhs)?;
            Ok(kernel_mod(&a, &BigInt::from(n))
                .into_iter()
                .map(|v| ints_to_polys(ring, &v))
                .filter(|v| !vector_is_zero(v))
                .collect())
        }
        Tier::PolyQuot => {
            let gb = padded_column_gb(ring, lhs);
            let n = lhs.cols;
            let mut out: Vec<Vector> = vec![];
            for s in &gb.syzygies {
                let proj: Vector = s[..n].iter().map(|p| ring.normal_form(p)).collect();
                if !vector_is_zero(&proj) && !out.contains(&proj) {
                    out.push(proj);
                }
            }
            Ok(out)
        }
    }
}

/// Columns of lhs plus g*e_i padding columns for the defining ideal.
fn padded_column_gb(ring: &Ring, lhs: &Matrix) -> crate::groebner::ModuleGb {
    let ctx = ring.ctx();
    let m = lhs.rows;
    let mut gens: Vec<Vector> = lhs.cols_vec();
    for g in ring.0.gb.basis.iter().map(|b| &b.vec[0]) {
        for i in 0..m {
            let mut v = vec![Poly::zero(); m];
            v[i] = g.clone();
            gens.push(v);
        }
    }
    module_groebner(ctx, m, &gens, true)
}

/// Solve lhs * X = rhs exactly; `NoSolution` if some column of rhs is not in
/// the column image.
pub fn solve_linear(ring: &Ring, lhs: &Matrix, rhs: &Matrix) -> Result<LinearSolution> {
    if lhs.rows != rhs.rows {
        return Err(Error::Shape(format!(
            "lhs has {} rows but rhs has {}",
            lhs.rows, rhs.rows
        )));
    }
    let kernel = solve_homogeneous(ring, lhs)?;
    let mut particular = Matrix::zero(lhs.cols, rhs.cols);
    match ring.tier() {
        Tier::ZeroRing => {}
        Tier::Int => {
            let a = to_int_matrix(ring, lhs)?;
            for j in 0..rhs.cols {
                let b: Vec<BigInt> = (0..rhs.rows)
                    .map(|i| const_to_int(&ring.normal_form(&rhs[(i, j)])))
                    .collect::<Result<_>>()?;
                let x = solve_int(&a, &b)?;
                for (i, v) in ints_to_polys(ring, &x).into_iter().enumerate() {
                    particular[(i, j)] = v;
                }
            }
        }
        Tier::IntMod(n) => {
            let a = to_int_matrix(ring, lhs)?;
            let n = BigInt::from(n);
            for j in 0..rhs.cols {
                let b: Vec<BigInt> = (0..rhs.rows)
                    .map(|i| const_to_int(&ring.normal_form(&rhs[(i, j)])))
                    .collect::<Result<_>>()?;
                let x = solve_mod(&a, &b, &n)?;
                for (i, v) in ints_to_polys(ring, &x).into_iter().enumerate() {
                    particular[(i, j)] = v;
                }
            }
        }
        Tier::PolyQuot => {
            let gb = padded_column_gb(ring, lhs);
            let n = lhs.cols;
            for j in 0..rhs.cols {
                let b: Vector = (0..rhs.rows).map(|i| ring.normal_form(&rhs[(i, j)])).collect();
                let coeffs = gb
                    .express_in_gens(ring.ctx(), &b)
                    .ok_or(Error::NoSolution)?;
                for (i, c) in coeffs[..n].iter().enumerate() {
                    particular[(i, j)] = ring.normal_form(c);
                }
            }
        }
    }
    // exactness check: lhs * particular == rhs in the ring
    let check = lhs.mul(&particular, ring).sub(&rhs.map(ring), ring);
    if !check.is_zero() {
        return Err(Error::NoSolution);
    }
    Ok(LinearSolution { particular, kernel })
}

/// Does lhs * x = b admit a solution?
pub fn solvable(ring: &Ring, lhs: &Matrix, b: &Vector) -> bool {
    let rhs = Matrix::from_cols(vec![b.clone()]);
    solve_linear(ring, lhs, &rhs).is_ok()
}

/// Membership of `candidate` in the ideal generated by `gens`; on success the
/// witness coefficients re-expand exactly to the candidate.
pub fn ideal_membership(ring: &Ring, gens: &[Poly], candidate: &Poly) -> Result<Option<Vector>> {
    let lhs = Matrix::from_rows(vec![gens.iter().map(|g| ring.normal_form(g)).collect()]);
    let rhs = Matrix::from_rows(vec![vec![ring.normal_form(candidate)]]);
    match solve_linear(ring, &lhs, &rhs) {
        Ok(sol) => {
            let witness: Vector = sol.particular.col(0);
            // re-expansion check
            let mut acc = Poly::zero();
            for (c, g) in witness.iter().zip(gens) {
                acc = ring.add(&acc, &ring.mul(c, g));
            }
            if acc != ring.normal_form(candidate) {
                return Err(Error::InconsistentCertificate(
                    "membership witness failed re-expansion".into(),
                ));
            }
            Ok(Some(witness))
        }
        Err(Error::NoSolution) => Ok(None),
        Err(e) => Err(e),
    }
}

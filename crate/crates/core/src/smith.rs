//! Smith normal form over ZZ, with the unimodular transforms and their
//! inverses tracked, plus exact solving and kernels over ZZ and ZZ/N.
//!
//! ZZ/N systems are handled by augmenting with N*I and projecting, which
//! yields the same solution sets as the Howell-form route.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diag(&self, i: usize) -> BigInt {
        if i < self.d.rows.min(self.d.cols) {
            self.d[(i, i)].clone()
        } else {
            BigInt::zero()
        }
    }

    pub fn rank(&self) -> usize {
        let n = self.d.rows.min(self.d.cols);
        (0..n).filter(|&i| !self.d[(i, i)].is_zero()).count()
    }
}

struct Worker {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Worker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.d.cols {
            self.d.data.swap(i * self.d.cols + k, j * self.d.cols + k);
        }
        for k in 0..self.u.cols {
            self.u.data.swap(i * self.u.cols + k, j * self.u.cols + k);
        }
        for k in 0..self.u_inv.rows {
            self.u_inv.data.swap(k * self.u_inv.cols + i, k * self.u_inv.cols + j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.d.rows {
            self.d.data.swap(k * self.d.cols + i, k * self.d.cols + j);
        }
        for k in 0..self.v.rows {
            self.v.data.swap(k * self.v.cols + i, k * self.v.cols + j);
        }
        for k in 0..self.v_inv.cols {
            self.v_inv.data.swap(i * self.v_inv.cols + k, j * self.v_inv.cols + k);
        }
    }

    /// row_i -= q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.d.cols {
            let t = q * &self.d[(j, k)];
            self.d[(i, k)] -= t;
        }
        for k in 0..self.u.cols {
            let t = q * &self.u[(j, k)];
            self.u[(i, k)] -= t;
        }
        for k in 0..self.u_inv.rows {
            let t = q * &self.u_inv[(k, i)];
            self.u_inv[(k, j)] += t;
        }
    }

    /// col_i -= q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.d.rows {
            let t = q * &self.d[(k, j)];
            self.d[(k, i)] -= t;
        }
        for k in 0..self.v.rows {
            let t = q * &self.v[(k, j)];
            self.v[(k, i)] -= t;
        }
        for k in 0..self.v_inv.cols {
            let t = q * &self.v_inv[(i, k)];
            self.v_inv[(j, k)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.d.cols {
            let t = -self.d[(i, k)].clone();
            self.d[(i, k)] = t;
        }
        for k in 0..self.u.cols {
            let t = -self.u[(i, k)].clone();
            self.u[(i, k)] = t;
        }
        for k in 0..self.u_inv.rows {
            let t = -self.u_inv[(k, i)].clone();
            self.u_inv[(k, i)] = t;
        }
    }
}

pub fn smith(a: &IntMatrix) -> SmithForm {
    let mut w = Worker {
        d: a.clone(),
        u: IntMatrix::identity(a.rows),
        u_inv: IntMatrix::identity(a.rows),
        v: IntMatrix::identity(a.cols),
        v_inv: IntMatrix::identity(a.cols),
    };
    let n = a.rows.min(a.cols);
    for t in 0..n {
        loop {
            // locate a pivot of minimal absolute value in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..w.d.rows {
                for j in t..w.d.cols {
                    if !w.d[(i, j)].is_zero()
                        && pivot.map_or(true, |p| w.d[(i, j)].abs() < w.d[p].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                // trailing block is zero
                break;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            if w.d[(t, t)].is_negative() {
                w.negate_row(t);
            }
            // eliminate the rest of column t and row t
            let mut clean = true;
            for i in t + 1..w.d.rows {
                if !w.d[(i, t)].is_zero() {
                    let q = w.d[(i, t)].div_floor(&w.d[(t, t)]);
                    w.add_row(i, t, &q);
                    if !w.d[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..w.d.cols {
                if !w.d[(t, j)].is_zero() {
                    let q = w.d[(t, j)].div_floor(&w.d[(t, t)]);
                    w.add_col(j, t, &q);
                    if !w.d[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
    }
    // enforce the divisibility chain d_t | d_{t+1}
    loop {
        let mut fixed = true;
        for t in 0..n.saturating_sub(1) {
            let dt = w.d[(t, t)].clone();
            let dn = w.d[(t + 1, t + 1)].clone();
            if dt.is_zero() && !dn.is_zero() {
                w.swap_rows(t, t + 1);
                w.swap_cols(t, t + 1);
                fixed = false;
            } else if !dt.is_zero() && !dn.is_zero() && !(&dn % &dt).is_zero() {
                // fold d_{t+1} into position (t, t) and rediagonalize the 2x2 block
                let minus_one = -BigInt::one();
                w.add_col(t, t + 1, &minus_one); // col_t += col_{t+1}
                loop {
                    if w.d[(t + 1, t)].is_zero() && w.d[(t, t + 1)].is_zero() {
                        break;
                    }
                    if !w.d[(t + 1, t)].is_zero()
                        && (w.d[(t, t)].is_zero()
                            || w.d[(t + 1, t)].abs() < w.d[(t, t)].abs())
                    {
                        w.swap_rows(t, t + 1);
                    }
                    if w.d[(t, t)].is_negative() {
                        w.negate_row(t);
                    }
                    if !w.d[(t + 1, t)].is_zero() {
                        let q = w.d[(t + 1, t)].div_floor(&w.d[(t, t)]);
                        w.add_row(t + 1, t, &q);
                    }
                    if !w.d[(t, t + 1)].is_zero() {
                        let q = w.d[(t, t + 1)].div_floor(&w.d[(t, t)]);
                        w.add_col(t + 1, t, &q);
                    }
                }
                if w.d[(t + 1, t + 1)].is_negative() {
                    w.negate_row(t + 1);
                }
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }
    for t in 0..n {
        if w.d[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    SmithForm { d: w.d, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv }
}

/// Generators of { x : a x = 0 } over ZZ.
pub fn kernel_int(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith(a);
    let n = a.rows.min(a.cols);
    let mut gens = vec![];
    for j in 0..a.cols {
        let free = j >= n || s.d[(j, j)].is_zero();
        if free {
            gens.push(s.v.col(j));
        }
    }
    gens
}

/// One particular solution of a x = b over ZZ, if any.
pub fn solve_int(a: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigInt>> {
    assert_eq!(a.rows, b.len());
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let n = a.rows.min(a.cols);
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        if i < n && !s.d[(i, i)].is_zero() {
            let (q, r) = ub[i].div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return Err(Error::NoSolution);
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return Err(Error::NoSolution);
        }
    }
    Ok(s.v.mul_vec(&y))
}

/// Kernel generators of a x = 0 over ZZ/modulus, as integer vectors.
pub fn kernel_mod(a: &IntMatrix, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut aug = IntMatrix::zero(a.rows, a.cols + a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols + i)] = modulus.clone();
    }
    kernel_int(&aug)
        .into_iter()
        .map(|v| v[..a.cols].iter().map(|x| x.mod_floor(modulus)).collect::<Vec<_>>())
        .filter(|v: &Vec<BigInt>| v.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Particular solution of a x = b over ZZ/modulus.
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], modulus: &BigInt) -> Result<Vec<BigInt>> {
    let mut aug = IntMatrix::zero(a.rows, a.cols + a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols + i)] = modulus.clone();
    }
    let x = solve_int(&aug, b)?;
    Ok(x[..a.cols].iter().map(|v| v.mod_floor(modulus)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    fn check_decomposition(a: &IntMatrix) {
        let s = smith(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols));
        // diagonal with divisibility chain
        for i in 0..s.d.rows {
            for j in 0..s.d.cols {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let n = a.rows.min(a.cols);
        for t in 0..n.saturating_sub(1) {
            let dt = &s.d[(t, t)];
            let dn = &s.d[(t + 1, t + 1)];
            if !dt.is_zero() {
                assert!((dn % dt).is_zero(), "divisibility broken: {dt} !| {dn}");
            } else {
                assert!(dn.is_zero());
            }
        }
    }

    #[test]
    fn smith_small_matrices() {
        check_decomposition(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]));
        check_decomposition(&mat(&[&[0, 0], &[0, 0]]));
        check_decomposition(&mat(&[&[1, 2, 3]]));
        check_decomposition(&mat(&[&[6], &[10], &[15]]));
        check_decomposition(&mat(&[&[2, 0], &[0, 3]]));
    }

    #[test]
    fn smith_invariant_factors() {
        let s = smith(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diag(0), BigInt::from(1));
        assert_eq!(s.diag(1), BigInt::from(6));
    }

    #[test]
    fn kernel_and_solve_over_z() {
        let a = mat(&[&[2, 4]]);
        let k = kernel_int(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));

        let sol = solve_int(&mat(&[&[2]]), &[BigInt::from(6)]).unwrap();
        assert_eq!(sol, vec![BigInt::from(3)]);
        assert!(solve_int(&mat(&[&[2]]), &[BigInt::from(7)]).is_err());
    }

    #[test]
    fn kernel_mod_matches_enumeration() {
        // kernel of [2] over Z/8 is generated by 4
        let a = mat(&[&[2]]);
        let k = kernel_mod(&a, &BigInt::from(8));
        let mut reachable = std::collections::HashSet::new();
        // span of returned generators
        let mut frontier = vec![vec![BigInt::from(0)]];
        reachable.insert(vec![BigInt::from(0)]);
        while let Some(v) = frontier.pop() {
            for g in &k {
                let w: Vec<BigInt> =
                    v.iter().zip(g).map(|(a, b)| (a + b).mod_floor(&BigInt::from(8))).collect();
                if reachable.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        let expect: std::collections::HashSet<_> =
            [0i64, 4].iter().map(|&x| vec![BigInt::from(x)]).collect();
        assert_eq!(reachable, expect);
    }
}

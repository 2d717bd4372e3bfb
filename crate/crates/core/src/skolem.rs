//! Skolem's method for Thue equations Norm(x - y*alpha) = ±1.
//!
//! Integer solutions embed into the p-adic unit group of Z_p[alpha]; per
//! residue disk the solution set is a coset u * <v_1, ..., v_r> of units
//! congruent to 1 mod p, which exp/log turn into a system of power series
//! F_2, ..., F_{d-1} in the exponents. Bounding the zeros of that system
//! through the saturation chain bounds the solutions in the disk.

use crate::fppoly::FpPoly;
use crate::monomial::Monomial;
use crate::padic::{pow_p, NumberRing, NumberRingElement, PadicError};
use crate::monomial::MonomialOrder;
use crate::rseries::{ApproxIdeal, ApproxSeries, SeriesError};
use crate::saturation::{self, SatError, SaturationChain};
use crate::zerobound::{self, FinitenessVerdict, ZeroBoundReport};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SkolemError {
    #[error("minimal polynomial must be monic of degree >= 2")]
    BadMinPoly,
    #[error("p must be an odd prime for the exp/log parametrization")]
    EvenPrime,
    #[error("minimal polynomial is not squarefree mod p")]
    NotSquarefree,
    #[error("unit {0} does not have norm ±1 (norm = {1})")]
    NotAUnit(usize, BigInt),
    #[error("need degree - 2 >= unit rank, got degree {degree} and rank {rank}")]
    NotEnoughEquations { degree: usize, rank: usize },
    #[error("rhs must be 1 or -1")]
    BadRhs,
    #[error("pinned data for disk ({0}, {1}) is inconsistent: {2}")]
    BadPin(u64, u64, String),
    #[error("p-adic arithmetic failed: {0}")]
    Padic(#[from] PadicError),
    #[error("series arithmetic failed: {0}")]
    Series(#[from] SeriesError),
    #[error("saturation failed: {0}")]
    Saturation(#[from] SatError),
}

/// A Thue/norm-form problem instance. Fundamental units are inputs.
#[derive(Clone, Debug)]
pub struct ThueInstance {
    /// Monic integer minimal polynomial, low-to-high, length d+1.
    pub minpoly: Vec<BigInt>,
    pub p: u64,
    /// Fundamental units as integer coefficient vectors in alpha.
    pub units: Vec<Vec<BigInt>>,
    /// Right-hand side, +1 or -1.
    pub rhs: i8,
    /// Half-width of the exhaustive verification box.
    pub box_radius: i64,
    /// Working p-adic precision N.
    pub precision: u32,
    pub max_level: u32,
}

/// The paper-supplied coset data for one residue disk, used to reproduce
/// printed coefficients exactly.
#[derive(Clone, Debug)]
pub struct PinnedDisk {
    pub u: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug)]
pub struct ThueConfig {
    pub order: MonomialOrder,
    pub degree_cap: u32,
    pub point_budget: u128,
    pub pins: BTreeMap<(u64, u64), PinnedDisk>,
}

impl Default for ThueConfig {
    fn default() -> Self {
        ThueConfig {
            order: MonomialOrder::GrevLex,
            degree_cap: crate::rseries::DEFAULT_DEGREE_CAP,
            point_budget: zerobound::DEFAULT_POINT_BUDGET,
            pins: BTreeMap::new(),
        }
    }
}

impl ThueInstance {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }

    pub fn validate(&self) -> Result<(), SkolemError> {
        if self.minpoly.len() < 3 || !self.minpoly.last().unwrap().is_one() {
            return Err(SkolemError::BadMinPoly);
        }
        if self.p == 2 {
            return Err(SkolemError::EvenPrime);
        }
        if self.rhs != 1 && self.rhs != -1 {
            return Err(SkolemError::BadRhs);
        }
        if !minpoly_squarefree_mod_p(&self.minpoly, self.p) {
            return Err(SkolemError::NotSquarefree);
        }
        for (i, u) in self.units.iter().enumerate() {
            let n = ring_norm(&self.minpoly, u);
            if n != BigInt::one() && n != -BigInt::one() {
                return Err(SkolemError::NotAUnit(i, n));
            }
        }
        if self.degree() < self.rank() + 2 {
            return Err(SkolemError::NotEnoughEquations {
                degree: self.degree(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// Norm(x - y*alpha) as the homogenized minimal polynomial
    /// `sum_i a_i x^i y^{d-i}`.
    pub fn norm_form(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let d = self.degree();
        let mut acc = BigInt::zero();
        for (i, a) in self.minpoly.iter().enumerate() {
            let mut t = a.clone();
            for _ in 0..i {
                t *= x;
            }
            for _ in 0..(d - i) {
                t *= y;
            }
            acc += t;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// exact arithmetic in Z[alpha]/(f)

fn zring_reduce(minpoly: &[BigInt], mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    let d = minpoly.len() - 1;
    for k in (d..coeffs.len()).rev() {
        let c = std::mem::take(&mut coeffs[k]);
        if c.is_zero() {
            continue;
        }
        for j in 0..d {
            let sub = &c * &minpoly[j];
            coeffs[k - d + j] -= sub;
        }
    }
    coeffs.truncate(d);
    coeffs.resize(d, BigInt::zero());
    coeffs
}

pub fn zring_mul(minpoly: &[BigInt], a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let d = minpoly.len() - 1;
    let mut prod = vec![BigInt::zero(); 2 * d];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            prod[i + j] += x * y;
        }
    }
    zring_reduce(minpoly, prod)
}

pub fn zring_pow(minpoly: &[BigInt], a: &[BigInt], e: u64) -> Vec<BigInt> {
    let d = minpoly.len() - 1;
    let mut one = vec![BigInt::zero(); d];
    one[0] = BigInt::one();
    let mut acc = one;
    let mut base: Vec<BigInt> = a.to_vec();
    base.resize(d, BigInt::zero());
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = zring_mul(minpoly, &acc, &base);
        }
        base = zring_mul(minpoly, &base, &base);
        e >>= 1;
    }
    acc
}

/// Norm of an element as the resultant of the minimal polynomial and the
/// element's polynomial, via fraction-free elimination on the Sylvester
/// matrix.
pub fn ring_norm(minpoly: &[BigInt], elem: &[BigInt]) -> BigInt {
    let d = minpoly.len() - 1;
    let mut e = elem.to_vec();
    while e.last().map(|c| c.is_zero()) == Some(true) {
        e.pop();
    }
    if e.is_empty() {
        return BigInt::zero();
    }
    let de = e.len() - 1;
    if de == 0 {
        // constant element: norm is c^d
        let mut n = BigInt::one();
        for _ in 0..d {
            n *= &e[0];
        }
        return n;
    }
    let size = d + de;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    // de rows of the minimal polynomial (high-to-low), d rows of the element
    for row in 0..de {
        for (k, c) in minpoly.iter().rev().enumerate() {
            m[row][row + k] = c.clone();
        }
    }
    for row in 0..d {
        for (k, c) in e.iter().rev().enumerate() {
            m[de + row][row + k] = c.clone();
        }
    }
    bareiss_determinant(m)
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Inverse of a norm-±1 unit in Z[alpha]/(f), by solving the linear system
/// of multiplication-by-u with Cramer's rule; integrality follows from the
/// unit norm. Returns None for non-units.
pub fn zring_inverse(minpoly: &[BigInt], u: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = minpoly.len() - 1;
    // columns: u * alpha^j reduced
    let mut cols = Vec::with_capacity(d);
    let mut uv = u.to_vec();
    uv.resize(d, BigInt::zero());
    for j in 0..d {
        let mut aj = vec![BigInt::zero(); d];
        aj[j] = BigInt::one();
        cols.push(zring_mul(minpoly, &uv, &aj));
    }
    let mut mat = vec![vec![BigInt::zero(); d]; d];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..d {
            mat[i][j] = col[i].clone();
        }
    }
    let det = bareiss_determinant(mat.clone());
    if det != BigInt::one() && det != -BigInt::one() {
        return None;
    }
    // Cramer: x_j = det(M with column j replaced by e_0) / det
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let mut mj = mat.clone();
        for (i, row) in mj.iter_mut().enumerate() {
            row[j] = if i == 0 { BigInt::one() } else { BigInt::zero() };
        }
        let dj = bareiss_determinant(mj);
        out.push(if det.is_negative() { -dj } else { dj });
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// arithmetic in F_p[x]/(f mod p)

fn fpx_reduce_mod(p: u64, c: &BigInt) -> u64 {
    let pb = BigInt::from(p);
    let mut r = c % &pb;
    if r.is_negative() {
        r += &pb;
    }
    r.try_into().unwrap()
}

fn minpoly_mod_p(minpoly: &[BigInt], p: u64) -> Vec<u64> {
    minpoly.iter().map(|c| fpx_reduce_mod(p, c)).collect()
}

fn minpoly_squarefree_mod_p(minpoly: &[BigInt], p: u64) -> bool {
    let f = minpoly_mod_p(minpoly, p);
    let mut df = vec![0u64; f.len() - 1];
    for (i, c) in f.iter().enumerate().skip(1) {
        df[i - 1] = (c * i as u64) % p;
    }
    univariate_gcd_is_constant(&f, &df, p)
}

fn uní_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn univariate_gcd_is_constant(a: &[u64], b: &[u64], p: u64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    uní_trim(&mut a);
    uní_trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lb = *b.last().unwrap();
        let inv = crate::fppoly::invm(lb, p);
        while a.len() >= b.len() && !a.is_empty() {
            let la = *a.last().unwrap();
            if la == 0 {
                a.pop();
                continue;
            }
            let q = (la as u128 * inv as u128 % p as u128) as u64;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                let sub = (q as u128 * *c as u128 % p as u128) as u64;
                let idx = i + shift;
                a[idx] = (a[idx] + p - sub) % p;
            }
            uní_trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
        uní_trim(&mut b);
    }
    a.len() == 1
}

type FpxElem = Vec<u64>;

fn fpx_one(d: usize) -> FpxElem {
    let mut e = vec![0; d];
    e[0] = 1;
    e
}

fn fpx_is(e: &FpxElem, target: &FpxElem) -> bool {
    e == target
}

fn fpx_mul(a: &FpxElem, b: &FpxElem, fbar: &[u64], p: u64) -> FpxElem {
    let d = fbar.len() - 1;
    let mut prod = vec![0u64; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            prod[i + j] = (prod[i + j] + x as u128 as u64 * 0
                + ((x as u128 * y as u128) % p as u128) as u64)
                % p;
        }
    }
    // reduce by monic fbar
    for k in (d..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for j in 0..d {
            let sub = (c as u128 * fbar[j] as u128 % p as u128) as u64;
            prod[k - d + j] = (prod[k - d + j] + p - sub) % p;
        }
    }
    prod.truncate(d);
    prod
}

fn fpx_pow(a: &FpxElem, mut e: u64, fbar: &[u64], p: u64) -> FpxElem {
    let d = fbar.len() - 1;
    let mut acc = fpx_one(d);
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = fpx_mul(&acc, &base, fbar, p);
        }
        base = fpx_mul(&base, &base, fbar, p);
        e >>= 1;
    }
    acc
}

fn fpx_scale(a: &FpxElem, c: u64, p: u64) -> FpxElem {
    a.iter()
        .map(|&x| ((x as u128 * c as u128) % p as u128) as u64)
        .collect()
}

// ---------------------------------------------------------------------------
// unit lattice mod p

/// The kernel lattice of exponent vectors whose unit product is congruent
/// to 1 mod p, with the sign carried per basis vector, plus the orders of
/// the unit images used to compute it.
#[derive(Clone, Debug)]
pub struct UnitLattice {
    pub orders: Vec<u64>,
    /// Hermite-reduced basis rows; `exps[i]` is non-negative.
    pub basis: Vec<LatticeVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub exps: Vec<u64>,
    /// true when the product needs the sign -1 to be congruent to 1.
    pub negated: bool,
}

fn unit_images(instance: &ThueInstance) -> (Vec<u64>, Vec<FpxElem>) {
    let fbar = minpoly_mod_p(&instance.minpoly, instance.p);
    let d = instance.degree();
    let images: Vec<FpxElem> = instance
        .units
        .iter()
        .map(|u| {
            let mut e: FpxElem = u.iter().map(|c| fpx_reduce_mod(instance.p, c)).collect();
            e.resize(d, 0);
            e
        })
        .collect();
    (fbar, images)
}

fn image_order(img: &FpxElem, fbar: &[u64], p: u64) -> u64 {
    let one = fpx_one(fbar.len() - 1);
    let mut acc = img.clone();
    let mut k = 1u64;
    while !fpx_is(&acc, &one) {
        acc = fpx_mul(&acc, img, fbar, p);
        k += 1;
        assert!(k <= (p as u64).pow((fbar.len() - 1) as u32), "unit image has no finite order");
    }
    k
}

/// Hermite normal form (upper triangular, non-negative, reduced above the
/// diagonal) of the row lattice spanned by `rows`.
fn hnf(rows: Vec<Vec<i128>>, r: usize) -> Vec<Vec<i128>> {
    let mut m = rows;
    let mut basis: Vec<Vec<i128>> = Vec::new();
    for col in 0..r {
        loop {
            let mut nonzero: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by_key(|&i| m[i][col].abs());
            let a = nonzero[0];
            for &i in &nonzero[1..] {
                let q = m[i][col] / m[a][col];
                for j in 0..r {
                    let sub = q * m[a][j];
                    m[i][j] -= sub;
                }
            }
        }
        if let Some(i) = (0..m.len()).find(|&i| m[i][col] != 0) {
            let mut row = m.remove(i);
            if row[col] < 0 {
                for x in row.iter_mut() {
                    *x = -*x;
                }
            }
            basis.push(row);
        }
        m.retain(|row| row.iter().any(|&x| x != 0));
    }
    // reduce entries above each pivot
    for i in (0..basis.len()).rev() {
        let pivot_col = (0..r).find(|&j| basis[i][j] != 0).unwrap();
        let pivot = basis[i][pivot_col];
        for k in 0..i {
            let q = basis[k][pivot_col].div_euclid(pivot);
            if q != 0 {
                for j in 0..r {
                    let sub = q * basis[i][j];
                    basis[k][j] -= sub;
                }
            }
        }
    }
    basis
}

/// Compute the lattice of exponent/sign combinations congruent to 1 mod p
/// by exhaustive order computation in (Z[alpha]/p)^*, and its
/// Hermite-reduced basis.
pub fn unit_lattice_mod_p(instance: &ThueInstance) -> Result<UnitLattice, SkolemError> {
    if !minpoly_squarefree_mod_p(&instance.minpoly, instance.p) {
        return Err(SkolemError::NotSquarefree);
    }
    let p = instance.p;
    let (fbar, images) = unit_images(instance);
    let d = instance.degree();
    let r = instance.rank();
    let orders: Vec<u64> = images.iter().map(|im| image_order(im, &fbar, p)).collect();

    let one = fpx_one(d);
    let minus_one = fpx_scale(&fpx_one(d), p - 1, p);

    // table of u_1 powers for the meet-in-the-middle scan
    let mut table: BTreeMap<FpxElem, u64> = BTreeMap::new();
    let mut acc = fpx_one(d);
    for e in 0..orders[0] {
        table.entry(acc.clone()).or_insert(e);
        acc = fpx_mul(&acc, &images[0], &fbar, p);
    }

    // enumerate exponents of the remaining units
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for (i, o) in orders.iter().enumerate() {
        let mut row = vec![0i128; r];
        row[i] = *o as i128;
        rows.push(row);
    }
    let mut rest = vec![0u64; r.saturating_sub(1)];
    loop {
        // w = prod_{i >= 2} u_i^{rest}
        let mut w = fpx_one(d);
        for (k, &e) in rest.iter().enumerate() {
            w = fpx_mul(&w, &fpx_pow(&images[k + 1], e, &fbar, p), &fbar, p);
        }
        // want u_1^{e1} * w = ±1  =>  u_1^{e1} = ±w^{-1}
        let w_inv = {
            // inverse by order: w generates a finite cyclic piece
            let mut inv = fpx_one(d);
            for (k, &e) in rest.iter().enumerate() {
                if e > 0 {
                    inv = fpx_mul(
                        &inv,
                        &fpx_pow(&images[k + 1], orders[k + 1] - e, &fbar, p),
                        &fbar,
                        p,
                    );
                }
            }
            inv
        };
        for (target, neg) in [(one.clone(), false), (minus_one.clone(), true)] {
            let want = fpx_mul(&target, &w_inv, &fbar, p);
            if let Some(&e1) = table.get(&want) {
                if e1 == 0 && rest.iter().all(|&e| e == 0) && !neg {
                    continue; // trivial relation
                }
                let mut row = vec![0i128; r];
                row[0] = e1 as i128;
                for (k, &e) in rest.iter().enumerate() {
                    row[k + 1] = e as i128;
                }
                // the sign is re-derived after HNF; rows only carry exps
                rows.push(row);
            }
        }
        // odometer over rest
        let mut k = 0;
        loop {
            if k == rest.len() {
                let basis_rows = hnf(rows, r);
                let basis = basis_rows
                    .into_iter()
                    .map(|row| {
                        let exps: Vec<u64> = row.iter().map(|&x| x as u64).collect();
                        // determine the sign of the product
                        let mut img = fpx_one(d);
                        for (i, &e) in exps.iter().enumerate() {
                            img = fpx_mul(&img, &fpx_pow(&images[i], e, &fbar, p), &fbar, p);
                        }
                        let negated = if fpx_is(&img, &one) {
                            false
                        } else {
                            debug_assert!(fpx_is(&img, &minus_one));
                            true
                        };
                        LatticeVector { exps, negated }
                    })
                    .collect();
                return Ok(UnitLattice { orders, basis });
            }
            rest[k] += 1;
            if rest[k] < orders[k + 1] {
                break;
            }
            rest[k] = 0;
            k += 1;
        }
    }
}

/// Membership of an exponent vector (with sign) in the kernel lattice.
pub fn lattice_contains(lattice: &UnitLattice, exps: &[i64], negated: bool) -> bool {
    solve_in_lattice(lattice, exps, negated).is_some()
}

/// Express (exps, sign) in the lattice basis; None when not a member.
pub fn solve_in_lattice(
    lattice: &UnitLattice,
    exps: &[i64],
    negated: bool,
) -> Option<Vec<i64>> {
    let r = exps.len();
    let mut rem: Vec<i128> = exps.iter().map(|&x| x as i128).collect();
    let mut coords = vec![0i64; lattice.basis.len()];
    let mut sign = negated;
    // basis is upper triangular after HNF: solve front to back
    for (bi, b) in lattice.basis.iter().enumerate() {
        let pivot_col = (0..r).find(|&j| b.exps[j] != 0)?;
        let pivot = b.exps[pivot_col] as i128;
        if rem[pivot_col] % pivot != 0 {
            return None;
        }
        let q = rem[pivot_col] / pivot;
        for j in 0..r {
            rem[j] -= q * b.exps[j] as i128;
        }
        if b.negated && q % 2 != 0 {
            sign = !sign;
        }
        coords[bi] = q as i64;
    }
    if rem.iter().all(|&x| x == 0) && !sign {
        Some(coords)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// residue disks

/// Residue-pair survival: Norm(a - b*alpha) must match the right-hand
/// side modulo p.
pub fn survives_norm_test(instance: &ThueInstance, a: u64, b: u64) -> bool {
    let n = instance.norm_form(&BigInt::from(a), &BigInt::from(b));
    let target = BigInt::from(instance.rhs);
    let diff = n - target;
    (&diff % BigInt::from(instance.p)).is_zero()
}

/// Lexicographically least (sign, exponents) whose unit product is
/// congruent to a - b*alpha mod p; None when the disk misses the unit
/// group entirely.
pub fn coset_representative(
    instance: &ThueInstance,
    lattice: &UnitLattice,
    a: u64,
    b: u64,
) -> Option<(bool, Vec<u64>)> {
    let p = instance.p;
    let (fbar, images) = unit_images(instance);
    let d = instance.degree();
    let mut tau = vec![0u64; d];
    tau[0] = a % p;
    if d > 1 {
        tau[1] = (p - b % p) % p;
    }

    let mut table: BTreeMap<FpxElem, u64> = BTreeMap::new();
    let mut acc = fpx_one(d);
    for e in 0..lattice.orders[0] {
        table.entry(acc.clone()).or_insert(e);
        acc = fpx_mul(&acc, &images[0], &fbar, p);
    }

    let r = instance.rank();
    let mut best: Option<(bool, Vec<u64>)> = None;
    let mut rest = vec![0u64; r.saturating_sub(1)];
    loop {
        let mut w_inv = fpx_one(d);
        for (k, &e) in rest.iter().enumerate() {
            if e > 0 {
                w_inv = fpx_mul(
                    &w_inv,
                    &fpx_pow(&images[k + 1], lattice.orders[k + 1] - e, &fbar, p),
                    &fbar,
                    p,
                );
            }
        }
        for negated in [false, true] {
            let mut want = fpx_mul(&tau, &w_inv, &fbar, p);
            if negated {
                want = fpx_scale(&want, p - 1, p);
            }
            if let Some(&e1) = table.get(&want) {
                let mut cand_exps = vec![e1];
                cand_exps.extend_from_slice(&rest);
                let cand = (negated, cand_exps);
                let better = match &best {
                    None => true,
                    Some(b) => (cand.0 as u8, &cand.1) < (b.0 as u8, &b.1),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let mut k = 0;
        loop {
            if k == rest.len() {
                return best;
            }
            rest[k] += 1;
            if rest[k] < lattice.orders[k + 1] {
                break;
            }
            rest[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// disk series

/// One alpha-component of the disk series, normalized to content 0; the
/// content records the p-power divided out. `None` when the component
/// vanishes identically mod p^N.
#[derive(Clone, Debug)]
pub struct DiskComponent {
    pub series: Option<(ApproxSeries, u32)>,
}

/// Expand u * exp(sum_i t_i log(v_i)) mod p^N and split by powers of
/// alpha. Component j is returned normalized together with its content.
pub fn build_disk_series(
    ring: &NumberRing,
    u: &NumberRingElement,
    vs: &[NumberRingElement],
    precision: u32,
) -> Result<Vec<DiskComponent>, SkolemError> {
    let p = ring.prime();
    let d = ring.degree();
    let r = vs.len();
    let logs: Vec<NumberRingElement> = vs
        .iter()
        .map(|v| ring.log(v))
        .collect::<Result<_, _>>()?;

    // crude degree bound: terms of total degree k have valuation at least
    // k(p-2)/(p-1)
    let mut dmax = 1u32;
    while (dmax as u64) * (p - 2) < precision as u64 * (p - 1) {
        dmax += 1;
    }

    // coefficient of t^kappa is u * prod_i logs_i^{kappa_i} / kappa_i!
    let mut components: Vec<ApproxSeries> =
        (0..d).map(|_| ApproxSeries::zero(p, r, precision)).collect();
    let kappas = compositions_up_to(r, dmax);
    for kappa in kappas {
        let total: u32 = kappa.iter().sum();
        let loss: u32 = kappa
            .iter()
            .map(|&k| crate::padic::vp_factorial(p, k as u64))
            .sum();
        if total > 0 && total.saturating_sub(loss) >= precision {
            continue; // the whole term is O(p^N)
        }
        // work at raised precision to absorb the factorial division
        let work = precision + loss;
        let mut coeff = ring.one(work);
        for (i, &k) in kappa.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let li = lift_element(ring, &logs[i], work);
            for _ in 0..k {
                coeff = ring.mul(&coeff, &li);
            }
            for j in 2..=k as u64 {
                coeff = divide_elem_by_int(ring, &coeff, j)?;
            }
        }
        let coeff = ring.mul(&coeff, &lift_element(ring, u, work));
        let mono = Monomial(kappa.clone());
        for (j, c) in coeff.coeff_residues().iter().enumerate() {
            let modn = pow_p(p, precision);
            let red = c % &modn;
            if !red.is_zero() {
                components[j].set_term(mono.clone(), BigInt::from(red));
            }
        }
    }

    Ok(components
        .into_iter()
        .map(|s| DiskComponent {
            series: s.normalize().ok().map(|n| {
                let content = precision - n.precision();
                (n, content)
            }),
        })
        .collect())
}

fn lift_element(ring: &NumberRing, e: &NumberRingElement, work: u32) -> NumberRingElement {
    let coeffs: Vec<BigInt> = e
        .coeff_residues()
        .iter()
        .map(|c| BigInt::from(c.clone()))
        .collect();
    ring.element(&coeffs, work.max(e.precision()))
}

fn divide_elem_by_int(
    ring: &NumberRing,
    e: &NumberRingElement,
    k: u64,
) -> Result<NumberRingElement, SkolemError> {
    let p = ring.prime();
    let v = if k % p == 0 {
        crate::padic::vp_u64(p, k)
    } else {
        0
    };
    let unit = k / (p as u64).pow(v);
    let out = ring.exact_divide_by_p(e, v)?;
    if unit == 1 {
        return Ok(out);
    }
    let m = pow_p(p, out.precision());
    let inv = crate::padic::mod_inverse(&BigUint::from(unit), &m).expect("coprime to p");
    Ok(ring.scalar_mul(&inv, &out))
}

fn compositions_up_to(r: usize, dmax: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; r];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, i: usize, rest: u32, r: usize) {
        if i == r {
            out.push(current.clone());
            return;
        }
        for e in 0..=rest {
            current[i] = e;
            rec(out, current, i + 1, rest - e, r);
            current[i] = 0;
        }
    }
    if r == 0 {
        return out;
    }
    rec(&mut out, &mut current, 0, dmax, r);
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// the full pipeline

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum DiskVerdict {
    /// Certified bound equals the number of solutions found in the box.
    Solved,
    /// Certified bound exceeds the solutions found.
    Bounded,
    /// No certified bound for this disk.
    Inconclusive,
    /// The disk contains no unit coset at all (no solutions possible).
    EmptyCoset,
}

#[derive(Clone, Debug)]
pub struct DiskReport {
    pub residue: (u64, u64),
    pub survives: bool,
    /// coset representative as (sign, exponents) when computed
    pub rep: Option<(bool, Vec<u64>)>,
    pub components: Vec<DiskComponent>,
    pub chain: Option<SaturationChain>,
    pub bound: Option<ZeroBoundReport>,
    pub solutions: Vec<(i64, i64)>,
    pub verdict: DiskVerdict,
    /// set when pinned coset data was used
    pub pinned: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum ThueVerdict {
    /// Every surviving disk is solved: the listed solutions are all of
    /// them.
    Solved,
    /// All disks certified, but some bound exceeds the solutions found.
    Bounded,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct ThueReport {
    pub instance: ThueInstance,
    pub surviving: Vec<(u64, u64)>,
    pub disks: Vec<DiskReport>,
    pub solutions: Vec<(i64, i64)>,
    pub global_bound: Option<u64>,
    pub verdict: ThueVerdict,
}

fn box_solutions(instance: &ThueInstance) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let target = BigInt::from(instance.rhs);
    for x in -instance.box_radius..=instance.box_radius {
        for y in -instance.box_radius..=instance.box_radius {
            if instance.norm_form(&BigInt::from(x), &BigInt::from(y)) == target {
                out.push((x, y));
            }
        }
    }
    out.sort();
    out
}

fn residue_of(instance: &ThueInstance, x: i64, y: i64) -> (u64, u64) {
    let p = instance.p as i64;
    (((x % p + p) % p) as u64, ((y % p + p) % p) as u64)
}

fn analyze_disk(
    instance: &ThueInstance,
    config: &ThueConfig,
    lattice: &UnitLattice,
    residue: (u64, u64),
    solutions: Vec<(i64, i64)>,
) -> Result<DiskReport, SkolemError> {
    let (a, b) = residue;
    let p = instance.p;
    let n = instance.precision;
    let ring = NumberRing::new(p, instance.minpoly.clone());
    let d = instance.degree();

    let pin = config.pins.get(&residue);
    let (rep, u_elem, v_elems, pinned) = if let Some(pin) = pin {
        if pin.v.len() != instance.rank() {
            return Err(SkolemError::BadPin(a, b, "wrong number of v's".into()));
        }
        let u = ring.element(&pin.u, n);
        let vs: Vec<NumberRingElement> = pin.v.iter().map(|v| ring.element(v, n)).collect();
        for v in &vs {
            let one = ring.one(n);
            let diff = ring.sub(v, &one);
            if ring.content_valuation(&diff).lower_bound() < 1 {
                return Err(SkolemError::BadPin(a, b, "v is not 1 mod p".into()));
            }
        }
        // the pinned u must land in this disk
        let u_red: Vec<u64> = u
            .coeff_residues()
            .iter()
            .map(|c| u64::try_from(c % BigUint::from(p)).unwrap())
            .collect();
        let mut tau = vec![0u64; d];
        tau[0] = a % p;
        if d > 1 {
            tau[1] = (p - b % p) % p;
        }
        if u_red != tau {
            return Err(SkolemError::BadPin(a, b, "u is not a - b*alpha mod p".into()));
        }
        (None, u, vs, true)
    } else {
        let rep = match coset_representative(instance, lattice, a, b) {
            Some(r) => r,
            None => {
                let verdict = if solutions.is_empty() {
                    DiskVerdict::EmptyCoset
                } else {
                    DiskVerdict::Inconclusive
                };
                return Ok(DiskReport {
                    residue,
                    survives: true,
                    rep: None,
                    components: Vec::new(),
                    chain: None,
                    bound: None,
                    solutions,
                    verdict,
                    pinned: false,
                });
            }
        };
        // u = ±prod u_i^{e_i} mod p^N
        let mut u = ring.one(n);
        for (i, &e) in rep.1.iter().enumerate() {
            let mut base = ring.element(&instance.units[i], n);
            base = ring_pow_capped(&ring, &base, e);
            u = ring.mul(&u, &base);
        }
        if rep.0 {
            u = ring.sub(&ring.zero(n), &u);
        }
        // v_i from the lattice basis
        let vs: Vec<NumberRingElement> = lattice
            .basis
            .iter()
            .map(|w| {
                let mut v = ring.one(n);
                for (i, &e) in w.exps.iter().enumerate() {
                    let base = ring.element(&instance.units[i], n);
                    v = ring.mul(&v, &ring_pow_capped(&ring, &base, e));
                }
                if w.negated {
                    v = ring.sub(&ring.zero(n), &v);
                }
                v
            })
            .collect();
        (Some(rep), u, vs, false)
    };

    let components = build_disk_series(&ring, &u_elem, &v_elems, n)?;

    // the ideal of the constraint components F_2 .. F_{d-1}
    let gens: Vec<ApproxSeries> = components[2..d]
        .iter()
        .filter_map(|c| c.series.as_ref().map(|(s, _)| s.clone()))
        .collect();
    if gens.is_empty() {
        return Ok(DiskReport {
            residue,
            survives: true,
            rep,
            components,
            chain: None,
            bound: None,
            solutions,
            verdict: DiskVerdict::Inconclusive,
            pinned,
        });
    }
    let ideal = ApproxIdeal::new(gens);
    let max_level = instance.max_level.min(ideal.min_precision().saturating_sub(1));
    let chain = saturation::run_chain(&ideal, max_level, config.order, config.degree_cap)?;
    let bound = zerobound::bound_from_chain(&chain, config.order, config.point_budget);

    let verdict = match bound.verdict {
        FinitenessVerdict::FiniteCertified => {
            let found = solutions.len() as u64;
            if found == bound.bound {
                DiskVerdict::Solved
            } else if found < bound.bound {
                DiskVerdict::Bounded
            } else {
                DiskVerdict::Inconclusive
            }
        }
        _ => DiskVerdict::Inconclusive,
    };

    Ok(DiskReport {
        residue,
        survives: true,
        rep,
        components,
        chain: Some(chain),
        bound: Some(bound),
        solutions,
        verdict,
        pinned,
    })
}

fn ring_pow_capped(ring: &NumberRing, base: &NumberRingElement, e: u64) -> NumberRingElement {
    ring.pow(base, e)
}

/// Solve the instance: per surviving residue disk, build the power-series
/// system, bound its zeros through the saturation chain, and compare with
/// the solutions found by exhaustive box search.
pub fn solve_thue(instance: &ThueInstance, config: &ThueConfig) -> Result<ThueReport, SkolemError> {
    instance.validate()?;
    let p = instance.p;
    let lattice = unit_lattice_mod_p(instance)?;

    let all_solutions = box_solutions(instance);
    let mut by_disk: BTreeMap<(u64, u64), Vec<(i64, i64)>> = BTreeMap::new();
    for &(x, y) in &all_solutions {
        by_disk.entry(residue_of(instance, x, y)).or_default().push((x, y));
    }

    let mut surviving = Vec::new();
    for a in 0..p {
        for b in 0..p {
            if survives_norm_test(instance, a, b) {
                surviving.push((a, b));
            }
        }
    }

    // disks are independent; analyze them in parallel, merge in order
    let disk_results: Vec<Result<DiskReport, SkolemError>> = surviving
        .par_iter()
        .map(|&(a, b)| {
            analyze_disk(
                instance,
                config,
                &lattice,
                (a, b),
                by_disk.get(&(a, b)).cloned().unwrap_or_default(),
            )
        })
        .collect();
    let mut disks = Vec::with_capacity(disk_results.len());
    for r in disk_results {
        disks.push(r?);
    }

    // any solution outside a surviving disk would contradict the sieve
    for &(x, y) in &all_solutions {
        debug_assert!(surviving.contains(&residue_of(instance, x, y)));
    }

    let mut global_bound = Some(0u64);
    let mut verdict = ThueVerdict::Solved;
    for d in &disks {
        match d.verdict {
            DiskVerdict::Solved => {
                if let (Some(gb), Some(b)) = (global_bound.as_mut(), d.bound.as_ref()) {
                    *gb += b.bound;
                }
            }
            DiskVerdict::EmptyCoset => {}
            DiskVerdict::Bounded => {
                if let (Some(gb), Some(b)) = (global_bound.as_mut(), d.bound.as_ref()) {
                    *gb += b.bound;
                }
                if verdict == ThueVerdict::Solved {
                    verdict = ThueVerdict::Bounded;
                }
            }
            DiskVerdict::Inconclusive => {
                global_bound = None;
                verdict = ThueVerdict::Inconclusive;
            }
        }
    }

    Ok(ThueReport {
        instance: instance.clone(),
        surviving,
        disks,
        solutions: all_solutions,
        global_bound,
        verdict,
    })
}

/// Find small exponents (sign, n_1..n_r) with ±prod u_i^{n_i} equal to
/// x - y*alpha exactly in Z[alpha]; a testing helper for the exponent
/// recovery invariant.
pub fn recover_exponents(
    instance: &ThueInstance,
    x: i64,
    y: i64,
    search: i64,
) -> Option<(bool, Vec<i64>)> {
    let d = instance.degree();
    let mut target = vec![BigInt::zero(); d];
    target[0] = BigInt::from(x);
    target[1] = BigInt::from(-y);
    let r = instance.rank();
    let inverses: Vec<Vec<BigInt>> = instance
        .units
        .iter()
        .map(|u| zring_inverse(&instance.minpoly, u).expect("unit"))
        .collect();
    let power = |i: usize, e: i64| -> Vec<BigInt> {
        if e >= 0 {
            zring_pow(&instance.minpoly, &instance.units[i], e as u64)
        } else {
            zring_pow(&instance.minpoly, &inverses[i], (-e) as u64)
        }
    };
    let mut exps = vec![-search; r];
    loop {
        let mut prod = vec![BigInt::zero(); d];
        prod[0] = BigInt::one();
        for (i, &e) in exps.iter().enumerate() {
            prod = zring_mul(&instance.minpoly, &prod, &power(i, e));
        }
        if prod == target {
            return Some((false, exps));
        }
        let neg: Vec<BigInt> = prod.iter().map(|c| -c.clone()).collect();
        if neg == target {
            return Some((true, exps));
        }
        let mut k = 0;
        loop {
            if k == r {
                return None;
            }
            exps[k] += 1;
            if exps[k] <= search {
                break;
            }
            exps[k] = -search;
            k += 1;
        }
    }
}

//! Exact multivariate polynomial algebra over the residue field F_p:
//! Buchberger's algorithm with transformation matrices, syzygy modules via
//! Schreyer's construction, and zero-dimensional ideal analysis (staircase
//! dimension, rational points, local multiplicities).

use crate::monomial::{Monomial, MonomialOrder};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FpError {
    #[error("ideal is not zero-dimensional (Krull dimension {0})")]
    PositiveDimensional(i64),
    #[error("enumeration budget exceeded: p^n = {0} points")]
    BudgetExceeded(u128),
    #[error("point is not a zero of the ideal")]
    NotAZero,
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn invm(a: u64, p: u64) -> u64 {
    // Fermat: p is prime and a != 0.
    powm(a, p - 2, p)
}

pub fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

/// A sparse polynomial over F_p. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FpPoly {
    pub p: u64,
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, u64>,
}

impl FpPoly {
    pub fn zero(p: u64, nvars: usize) -> Self {
        FpPoly {
            p,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: u64, nvars: usize, c: i64) -> Self {
        let mut f = Self::zero(p, nvars);
        f.add_term(Monomial::one(nvars), c.rem_euclid(p as i64) as u64);
        f
    }

    pub fn var(p: u64, nvars: usize, i: usize) -> Self {
        let mut f = Self::zero(p, nvars);
        f.add_term(Monomial::var(nvars, i), 1);
        f
    }

    pub fn from_terms(p: u64, nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        let mut f = Self::zero(p, nvars);
        for (m, c) in terms {
            f.add_term(Monomial(m.to_vec()), c.rem_euclid(p as i64) as u64);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let cancelled = {
            let entry = self.terms.entry(m.clone()).or_insert(0);
            *entry = addm(*entry, c, self.p);
            *entry == 0
        };
        if cancelled {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        out
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.p - c);
        }
        out
    }

    pub fn neg(&self) -> FpPoly {
        let mut out = FpPoly::zero(self.p, self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.p - c);
        }
        out
    }

    pub fn scale(&self, c: u64) -> FpPoly {
        let c = c % self.p;
        if c == 0 {
            return FpPoly::zero(self.p, self.nvars);
        }
        let mut out = FpPoly::zero(self.p, self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), mulm(*v, c, self.p));
        }
        out
    }

    /// Multiply by the single term `c * x^m`.
    pub fn mul_term(&self, m: &Monomial, c: u64) -> FpPoly {
        let c = c % self.p;
        if c == 0 {
            return FpPoly::zero(self.p, self.nvars);
        }
        let mut out = FpPoly::zero(self.p, self.nvars);
        for (mm, v) in &self.terms {
            out.terms.insert(mm.mul(m), mulm(*v, c, self.p));
        }
        out
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        let mut out = FpPoly::zero(self.p, self.nvars);
        for (m, c) in &other.terms {
            for (mm, v) in &self.terms {
                out.add_term(mm.mul(m), mulm(*v, *c, self.p));
            }
        }
        out
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, u64)> {
        order
            .max_key(self.terms.keys())
            .map(|m| (m, *self.terms.get(m).unwrap()))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = mulm(t, powm(point[i], e as u64, self.p), self.p);
                }
            }
            acc = addm(acc, t, self.p);
        }
        acc
    }

    /// Monic normalization; zero stays zero.
    pub fn monic(&self, order: MonomialOrder) -> FpPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(invm(c, self.p)),
        }
    }

    /// Substitute `x_i -> x_i + shift_i` (used for local multiplicities).
    pub fn translate(&self, shift: &[u64]) -> FpPoly {
        let p = self.p;
        let n = self.nvars;
        let mut out = FpPoly::constant(p, n, 0);
        for (m, c) in &self.terms {
            // expand prod_i (x_i + s_i)^{e_i}
            let mut expanded = FpPoly::constant(p, n, 1);
            for (i, &e) in m.0.iter().enumerate() {
                let mut factor = FpPoly::var(p, n, i);
                factor.add_term(Monomial::one(n), shift[i]);
                for _ in 0..e {
                    expanded = expanded.mul(&factor);
                }
            }
            out = out.add(&expanded.scale(*c));
        }
        out
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{:?}", c, m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Divide `f` by the list `divisors`, returning `(quotients, remainder)`
/// with no remainder term divisible by any divisor leading monomial.
pub fn divide(
    f: &FpPoly,
    divisors: &[FpPoly],
    order: MonomialOrder,
) -> (Vec<FpPoly>, FpPoly) {
    let p = f.p;
    let mut h = f.clone();
    let mut quotients = vec![FpPoly::zero(p, f.nvars); divisors.len()];
    let mut remainder = FpPoly::zero(p, f.nvars);
    'outer: while let Some((lm, lc)) = h.leading_term(order) {
        let lm = lm.clone();
        for (i, g) in divisors.iter().enumerate() {
            if let Some((gm, gc)) = g.leading_term(order) {
                if let Some(q) = lm.checked_div(gm) {
                    let qc = mulm(lc, invm(gc, p), p);
                    quotients[i].add_term(q.clone(), qc);
                    h = h.sub(&g.mul_term(&q, qc));
                    continue 'outer;
                }
            }
        }
        remainder.add_term(lm.clone(), lc);
        h.terms.remove(&lm);
    }
    (quotients, remainder)
}

pub fn normal_form(f: &FpPoly, divisors: &[FpPoly], order: MonomialOrder) -> FpPoly {
    divide(f, divisors, order).1
}

/// A Groebner basis together with the two change-of-basis matrices
/// certifying it generates the same ideal as the input generators:
/// `gb[i] = sum_j a[i][j] * gens[j]` and `gens[i] = sum_j b[i][j] * gb[j]`.
#[derive(Clone, Debug)]
pub struct GroebnerData {
    pub basis: Vec<FpPoly>,
    pub order: MonomialOrder,
    /// basis elements as combinations of the generators
    pub basis_from_gens: Vec<Vec<FpPoly>>,
    /// generators as combinations of the basis
    pub gens_from_basis: Vec<Vec<FpPoly>>,
}

/// An ideal of F_p[x_1..x_n] with a write-once Groebner cache.
#[derive(Clone, Debug)]
pub struct FpIdeal {
    pub p: u64,
    pub nvars: usize,
    pub generators: Vec<FpPoly>,
    cache: Option<GroebnerData>,
}

impl FpIdeal {
    pub fn new(p: u64, nvars: usize, generators: Vec<FpPoly>) -> Self {
        for g in &generators {
            assert_eq!(g.p, p);
            assert_eq!(g.nvars, nvars);
        }
        FpIdeal {
            p,
            nvars,
            generators,
            cache: None,
        }
    }

    pub fn groebner(&mut self, order: MonomialOrder) -> &GroebnerData {
        if self.cache.as_ref().map(|c| c.order) != Some(order) {
            self.cache = Some(groebner_basis(&self.generators, self.p, self.nvars, order));
        }
        self.cache.as_ref().unwrap()
    }

    pub fn groebner_cached(&self) -> Option<&GroebnerData> {
        self.cache.as_ref()
    }

    /// Ideal membership via normal form against the (cached) basis.
    pub fn contains(&mut self, f: &FpPoly, order: MonomialOrder) -> bool {
        let gb = self.groebner(order).basis.clone();
        normal_form(f, &gb, order).is_zero()
    }

    /// Ideal equality via mutual membership of generators.
    pub fn same_ideal(&mut self, other: &mut FpIdeal, order: MonomialOrder) -> bool {
        let gens_a = self.generators.clone();
        let gens_b = other.generators.clone();
        gens_b.iter().all(|g| self.contains(g, order))
            && gens_a.iter().all(|g| other.contains(g, order))
    }
}

/// Reduced Groebner basis by Buchberger's algorithm, with representation
/// tracking for both transformation matrices. Zero generators are allowed.
pub fn groebner_basis(
    gens: &[FpPoly],
    p: u64,
    nvars: usize,
    order: MonomialOrder,
) -> GroebnerData {
    // Work entries: (poly, representation over the input generators).
    let mut basis: Vec<(FpPoly, Vec<FpPoly>)> = Vec::new();
    let unit = |i: usize| -> Vec<FpPoly> {
        (0..gens.len())
            .map(|j| {
                if i == j {
                    FpPoly::constant(p, nvars, 1)
                } else {
                    FpPoly::zero(p, nvars)
                }
            })
            .collect()
    };
    for (i, g) in gens.iter().enumerate() {
        if !g.is_zero() {
            basis.push((g.clone(), unit(i)));
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }

    while let Some((i, j)) = pairs.pop() {
        let (fi, ri) = basis[i].clone();
        let (fj, rj) = basis[j].clone();
        let (mi, ci) = fi.leading_term(order).map(|(m, c)| (m.clone(), c)).unwrap();
        let (mj, cj) = fj.leading_term(order).map(|(m, c)| (m.clone(), c)).unwrap();
        if mi.is_coprime(&mj) {
            continue; // Buchberger's first criterion
        }
        let l = mi.lcm(&mj);
        let ui = l.checked_div(&mi).unwrap();
        let uj = l.checked_div(&mj).unwrap();
        let inv_ci = invm(ci, p);
        let inv_cj = invm(cj, p);
        let spoly = fi.mul_term(&ui, inv_ci).sub(&fj.mul_term(&uj, inv_cj));
        let srep: Vec<FpPoly> = ri
            .iter()
            .zip(&rj)
            .map(|(a, b)| a.mul_term(&ui, inv_ci).sub(&b.mul_term(&uj, inv_cj)))
            .collect();
        let (h, hrep) = reduce_tracked(&spoly, &srep, &basis, order);
        if !h.is_zero() {
            let k = basis.len();
            basis.push((h, hrep));
            for t in 0..k {
                pairs.push((t, k));
            }
        }
    }

    // Minimalize: drop elements whose leading monomial is divisible by
    // another retained one.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (mi, _) = basis[i].0.leading_term(order).unwrap();
        let mi = mi.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (mj, _) = basis[j].0.leading_term(order).unwrap();
            if mj.divides(&mi) && (mj != &mi || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut reduced: Vec<(FpPoly, Vec<FpPoly>)> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(b, _)| b)
        .collect();

    // Tail-reduce each element against the others and make it monic.
    for i in 0..reduced.len() {
        let others: Vec<FpPoly> = reduced
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (f, _))| f.clone())
            .collect();
        let other_reps: Vec<Vec<FpPoly>> = reduced
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (_, r))| r.clone())
            .collect();
        let (f, r) = reduced[i].clone();
        let (quots, rem) = divide(&f, &others, order);
        let mut rep = r;
        for (q, orep) in quots.iter().zip(&other_reps) {
            for (slot, o) in rep.iter_mut().zip(orep) {
                *slot = slot.sub(&o.mul(q));
            }
        }
        let lc = rem.leading_term(order).map(|(_, c)| c).unwrap_or(1);
        let inv = invm(lc, p);
        reduced[i] = (
            rem.scale(inv),
            rep.into_iter().map(|g| g.scale(inv)).collect(),
        );
    }

    // Canonical ordering: descending leading monomial.
    reduced.sort_by(|(a, _), (b, _)| {
        let ma = a.leading_term(order).unwrap().0;
        let mb = b.leading_term(order).unwrap().0;
        order.cmp(mb, ma)
    });

    let basis: Vec<FpPoly> = reduced.iter().map(|(f, _)| f.clone()).collect();
    let basis_from_gens: Vec<Vec<FpPoly>> = reduced.iter().map(|(_, r)| r.clone()).collect();

    // Express each generator in terms of the basis (remainder must vanish).
    let mut gens_from_basis = Vec::with_capacity(gens.len());
    for g in gens {
        let (q, rem) = divide(g, &basis, order);
        debug_assert!(rem.is_zero(), "generator does not reduce to 0 by its GB");
        gens_from_basis.push(q);
    }

    GroebnerData {
        basis,
        order,
        basis_from_gens,
        gens_from_basis,
    }
}

fn reduce_tracked(
    f: &FpPoly,
    rep: &[FpPoly],
    basis: &[(FpPoly, Vec<FpPoly>)],
    order: MonomialOrder,
) -> (FpPoly, Vec<FpPoly>) {
    let p = f.p;
    let mut h = f.clone();
    let mut hrep: Vec<FpPoly> = rep.to_vec();
    let mut remainder = FpPoly::zero(p, f.nvars);
    'outer: while let Some((lm, lc)) = h.leading_term(order) {
        let lm = lm.clone();
        for (g, grep) in basis {
            if let Some((gm, gc)) = g.leading_term(order) {
                if let Some(q) = lm.checked_div(gm) {
                    let qc = mulm(lc, invm(gc, p), p);
                    h = h.sub(&g.mul_term(&q, qc));
                    for (slot, gr) in hrep.iter_mut().zip(grep) {
                        *slot = slot.sub(&gr.mul_term(&q, qc));
                    }
                    continue 'outer;
                }
            }
        }
        remainder.add_term(lm.clone(), lc);
        h.terms.remove(&lm);
    }
    (remainder, hrep)
}

/// A finite generating set of the first syzygy module of `gens`: every
/// vector `v` satisfies `sum_i v[i] * gens[i] = 0` exactly.
#[derive(Clone, Debug)]
pub struct SyzygyBasis {
    pub gens: Vec<FpPoly>,
    pub vectors: Vec<Vec<FpPoly>>,
}

impl SyzygyBasis {
    pub fn verify(&self) -> bool {
        self.vectors.iter().all(|v| {
            let mut acc = FpPoly::zero(
                self.gens.first().map(|g| g.p).unwrap_or(2),
                self.gens.first().map(|g| g.nvars).unwrap_or(0),
            );
            for (a, g) in v.iter().zip(&self.gens) {
                acc = acc.add(&a.mul(g));
            }
            acc.is_zero()
        })
    }
}

/// Syzygies of an arbitrary generator list, by Schreyer's construction on
/// the reduced Groebner basis transported back through the transformation
/// matrices. Zero generators contribute unit syzygies directly.
pub fn syzygies(gens: &[FpPoly], p: u64, nvars: usize, order: MonomialOrder) -> SyzygyBasis {
    let r = gens.len();
    let mut vectors: Vec<Vec<FpPoly>> = Vec::new();
    let zero_vec = |_: usize| vec![FpPoly::zero(p, nvars); r];

    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            let mut v = zero_vec(r);
            v[i] = FpPoly::constant(p, nvars, 1);
            vectors.push(v);
        }
    }

    let data = groebner_basis(gens, p, nvars, order);
    let m = data.basis.len();
    if m > 0 {
        // Schreyer generators over the basis: for each pair, the S-poly
        // reduction to zero yields a relation among basis elements.
        let mut over_basis: Vec<Vec<FpPoly>> = Vec::new();
        for i in 0..m {
            for j in 0..i {
                let (mi, ci) = data.basis[i]
                    .leading_term(order)
                    .map(|(mm, c)| (mm.clone(), c))
                    .unwrap();
                let (mj, cj) = data.basis[j]
                    .leading_term(order)
                    .map(|(mm, c)| (mm.clone(), c))
                    .unwrap();
                let l = mi.lcm(&mj);
                let ui = l.checked_div(&mi).unwrap();
                let uj = l.checked_div(&mj).unwrap();
                let inv_ci = invm(ci, p);
                let inv_cj = invm(cj, p);
                let spoly = data.basis[i]
                    .mul_term(&ui, inv_ci)
                    .sub(&data.basis[j].mul_term(&uj, inv_cj));
                let (quots, rem) = divide(&spoly, &data.basis, order);
                debug_assert!(rem.is_zero());
                let mut v = vec![FpPoly::zero(p, nvars); m];
                v[i].add_term(ui.clone(), inv_ci);
                v[j].add_term(uj.clone(), p - inv_cj);
                for (slot, q) in v.iter_mut().zip(&quots) {
                    *slot = slot.sub(q);
                }
                if v.iter().any(|f| !f.is_zero()) {
                    over_basis.push(v);
                }
            }
        }

        // Transport: s over the basis becomes s * A over the generators.
        for s in over_basis {
            let mut v = zero_vec(r);
            for (sk, arow) in s.iter().zip(&data.basis_from_gens) {
                if sk.is_zero() {
                    continue;
                }
                for (slot, a) in v.iter_mut().zip(arow) {
                    *slot = slot.add(&sk.mul(a));
                }
            }
            if v.iter().any(|f| !f.is_zero()) {
                vectors.push(v);
            }
        }

        // Kernel relations: rows of (I - B*A) are syzygies of the
        // generators.
        for (i, g) in gens.iter().enumerate() {
            if g.is_zero() {
                continue; // already emitted the unit syzygy
            }
            let brow = &data.gens_from_basis[i];
            let mut v = zero_vec(r);
            v[i] = FpPoly::constant(p, nvars, 1);
            for (bk, arow) in brow.iter().zip(&data.basis_from_gens) {
                if bk.is_zero() {
                    continue;
                }
                for (slot, a) in v.iter_mut().zip(arow) {
                    *slot = slot.sub(&bk.mul(a));
                }
            }
            if v.iter().any(|f| !f.is_zero()) {
                vectors.push(v);
            }
        }
    }

    // Deduplicate identical vectors.
    vectors.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    vectors.dedup_by(|a, b| a == b);

    let out = SyzygyBasis {
        gens: gens.to_vec(),
        vectors,
    };
    debug_assert!(out.verify());
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuotientDimension {
    /// Krull dimension of F_p[x]/I; -1 sentinel for the unit ideal
    /// ("empty variety").
    pub krull: i64,
    /// Number of standard monomials when the Krull dimension is zero
    /// (0 for the unit ideal).
    pub dim_k: Option<u64>,
}

/// Krull dimension of the quotient by the staircase of leading monomials;
/// when zero-dimensional, also the F_p-vector-space dimension.
pub fn quotient_dimension(ideal: &mut FpIdeal, order: MonomialOrder) -> QuotientDimension {
    let n = ideal.nvars;
    let gb = ideal.groebner(order).basis.clone();
    if gb.iter().any(|g| {
        g.leading_term(order)
            .map(|(m, _)| m.is_one())
            .unwrap_or(false)
    }) {
        return QuotientDimension {
            krull: -1,
            dim_k: Some(0),
        };
    }
    let lms: Vec<Monomial> = gb
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(m, _)| m.clone()))
        .collect();

    // Krull dimension of a monomial ideal: the largest variable subset S
    // such that no leading monomial is supported inside S.
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let support: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let size = support.iter().filter(|b| **b).count();
        if size <= best {
            continue;
        }
        if lms.iter().all(|m| !m.supported_on(&support)) {
            best = size;
        }
    }
    let krull = best as i64;
    let dim_k = if krull == 0 {
        Some(count_standard_monomials(&lms, n))
    } else {
        None
    };
    QuotientDimension { krull, dim_k }
}

fn count_standard_monomials(lms: &[Monomial], n: usize) -> u64 {
    // BFS over monomials not divisible by any leading monomial; finite
    // because the quotient is zero-dimensional.
    let mut seen = std::collections::BTreeSet::new();
    let mut queue = vec![Monomial::one(n)];
    let mut count = 0u64;
    while let Some(m) = queue.pop() {
        if seen.contains(&m) {
            continue;
        }
        if lms.iter().any(|l| l.divides(&m)) {
            continue;
        }
        seen.insert(m.clone());
        count += 1;
        for i in 0..n {
            let mut e = m.clone();
            e.0[i] += 1;
            queue.push(e);
        }
    }
    count
}

/// All F_p-rational common zeros, by exhaustive evaluation. Requires a
/// zero-dimensional ideal and `p^n` within the enumeration budget.
pub fn rational_points(
    ideal: &mut FpIdeal,
    order: MonomialOrder,
    budget: u128,
) -> Result<Vec<Vec<u64>>, FpError> {
    let dim = quotient_dimension(ideal, order);
    if dim.krull > 0 {
        return Err(FpError::PositiveDimensional(dim.krull));
    }
    let n = ideal.nvars;
    let p = ideal.p;
    let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(FpError::BudgetExceeded(total));
    }
    let mut out = Vec::new();
    let mut point = vec![0u64; n];
    loop {
        if ideal.generators.iter().all(|g| g.eval(&point) == 0) {
            out.push(point.clone());
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            point[i] += 1;
            if point[i] < p {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// dim_k of the localization at the maximal ideal of the point `z`:
/// dim_k F_p[x]/(I + m_z^D), doubling D from dim_k(quotient) until two
/// consecutive values agree.
pub fn local_dimension(
    ideal: &mut FpIdeal,
    z: &[u64],
    order: MonomialOrder,
) -> Result<u64, FpError> {
    if !ideal.generators.iter().all(|g| g.eval(z) == 0) {
        return Err(FpError::NotAZero);
    }
    let dim = quotient_dimension(ideal, order);
    if dim.krull > 0 {
        return Err(FpError::PositiveDimensional(dim.krull));
    }
    let total = dim.dim_k.unwrap_or(0);
    if total == 0 {
        return Ok(0);
    }
    let mut d = total.max(1) as u32;
    let mut prev = local_dim_at(ideal, z, d, order);
    loop {
        let next = local_dim_at(ideal, z, 2 * d, order);
        if next == prev {
            return Ok(prev);
        }
        prev = next;
        d *= 2;
    }
}

fn local_dim_at(ideal: &FpIdeal, z: &[u64], d: u32, order: MonomialOrder) -> u64 {
    let p = ideal.p;
    let n = ideal.nvars;
    // Translate z to the origin, add m^d = all degree-d monomials.
    let shift: Vec<u64> = z.to_vec();
    let mut gens: Vec<FpPoly> = ideal.generators.iter().map(|g| g.translate(&shift)).collect();
    for m in monomials_of_degree(n, d) {
        let mut f = FpPoly::zero(p, n);
        f.add_term(m, 1);
        gens.push(f);
    }
    let mut j = FpIdeal::new(p, n, gens);
    quotient_dimension(&mut j, order).dim_k.unwrap_or(0)
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, i: usize, rest: u32, n: usize) {
        if i == n - 1 {
            current[i] = rest;
            out.push(Monomial(current.clone()));
            return;
        }
        for e in 0..=rest {
            current[i] = e;
            rec(out, current, i + 1, rest - e, n);
        }
    }
    if n == 0 {
        return out;
    }
    rec(&mut out, &mut current, 0, d, n);
    out
}

// ---------------------------------------------------------------------------
// Module Groebner bases over F_p (position-over-term), used for membership
// checks in submodules of F_p[x]^r.

/// A vector of polynomials, an element of the free module F_p[x]^r.
pub type FpVec = Vec<FpPoly>;

fn vec_is_zero(v: &FpVec) -> bool {
    v.iter().all(|f| f.is_zero())
}

fn vec_sub(a: &FpVec, b: &FpVec) -> FpVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn vec_mul_term(v: &FpVec, m: &Monomial, c: u64) -> FpVec {
    v.iter().map(|f| f.mul_term(m, c)).collect()
}

/// Leading (position, monomial, coeff) under position-over-term order:
/// lower position wins, then the monomial order.
fn vec_lead(v: &FpVec, order: MonomialOrder) -> Option<(usize, Monomial, u64)> {
    for (i, f) in v.iter().enumerate() {
        if let Some((m, c)) = f.leading_term(order) {
            return Some((i, m.clone(), c));
        }
    }
    None
}

fn vec_reduce(f: &FpVec, basis: &[FpVec], order: MonomialOrder) -> FpVec {
    let p = f
        .iter()
        .map(|g| g.p)
        .next()
        .expect("module vectors are nonempty");
    let mut h = f.clone();
    let mut remainder: FpVec = f.iter().map(|g| FpPoly::zero(g.p, g.nvars)).collect();
    'outer: while let Some((pos, lm, lc)) = vec_lead(&h, order) {
        for g in basis {
            if let Some((gpos, gm, gc)) = vec_lead(g, order) {
                if gpos == pos {
                    if let Some(q) = lm.checked_div(&gm) {
                        let qc = mulm(lc, invm(gc, p), p);
                        h = vec_sub(&h, &vec_mul_term(g, &q, qc));
                        continue 'outer;
                    }
                }
            }
        }
        remainder[pos].add_term(lm.clone(), lc);
        h[pos].terms.remove(&lm);
    }
    remainder
}

/// Groebner basis of the submodule of F_p[x]^r generated by `gens`
/// (position-over-term order); S-pairs only arise within one position.
pub fn module_groebner(gens: &[FpVec], p: u64, order: MonomialOrder) -> Vec<FpVec> {
    let mut basis: Vec<FpVec> = gens.iter().filter(|v| !vec_is_zero(v)).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (pi, mi, ci) = vec_lead(&basis[i], order).unwrap();
        let (pj, mj, cj) = vec_lead(&basis[j], order).unwrap();
        if pi != pj {
            continue;
        }
        let l = mi.lcm(&mj);
        let ui = l.checked_div(&mi).unwrap();
        let uj = l.checked_div(&mj).unwrap();
        let s = vec_sub(
            &vec_mul_term(&basis[i], &ui, invm(ci, p)),
            &vec_mul_term(&basis[j], &uj, invm(cj, p)),
        );
        let h = vec_reduce(&s, &basis, order);
        if !vec_is_zero(&h) {
            let k = basis.len();
            basis.push(h);
            for t in 0..k {
                pairs.push((t, k));
            }
        }
    }
    basis
}

/// Membership of `v` in the submodule generated by `gens`.
pub fn module_contains(gens: &[FpVec], v: &FpVec, p: u64, order: MonomialOrder) -> bool {
    let basis = module_groebner(gens, p, order);
    vec_is_zero(&vec_reduce(v, &basis, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 5;

    fn poly(nvars: usize, terms: &[(&[u32], i64)]) -> FpPoly {
        FpPoly::from_terms(P, nvars, terms)
    }

    #[test]
    fn gb_already_a_basis() {
        // (x^2, x*y) in grevlex: S-poly is identically zero.
        let gens = vec![poly(2, &[(&[2, 0], 1)]), poly(2, &[(&[1, 1], 1)])];
        let data = groebner_basis(&gens, P, 2, MonomialOrder::GrevLex);
        assert_eq!(data.basis.len(), 2);
        let lms: Vec<Monomial> = data
            .basis
            .iter()
            .map(|g| g.leading_term(MonomialOrder::GrevLex).unwrap().0.clone())
            .collect();
        assert!(lms.contains(&Monomial(vec![2, 0])));
        assert!(lms.contains(&Monomial(vec![1, 1])));
    }

    #[test]
    fn gb_proportional_generators() {
        // (3 + 3 t2, 1 + t2, 3 + 3 t2) over F_5 reduces to { t2 + 1 }.
        let gens = vec![
            poly(2, &[(&[0, 0], 3), (&[0, 1], 3)]),
            poly(2, &[(&[0, 0], 1), (&[0, 1], 1)]),
            poly(2, &[(&[0, 0], 3), (&[0, 1], 3)]),
        ];
        let data = groebner_basis(&gens, P, 2, MonomialOrder::GrevLex);
        assert_eq!(data.basis.len(), 1);
        assert_eq!(data.basis[0], poly(2, &[(&[0, 0], 1), (&[0, 1], 1)]));
    }

    #[test]
    fn gb_linear_pair() {
        // (x + y, x - y) -> {x, y}
        let gens = vec![
            poly(2, &[(&[1, 0], 1), (&[0, 1], 1)]),
            poly(2, &[(&[1, 0], 1), (&[0, 1], -1)]),
        ];
        let data = groebner_basis(&gens, P, 2, MonomialOrder::GrevLex);
        assert_eq!(data.basis.len(), 2);
        assert!(data.basis.contains(&poly(2, &[(&[1, 0], 1)])));
        assert!(data.basis.contains(&poly(2, &[(&[0, 1], 1)])));
    }

    #[test]
    fn gb_transformation_matrices_consistent() {
        let gens = vec![
            poly(2, &[(&[2, 0], 1), (&[0, 1], 2)]),
            poly(2, &[(&[1, 1], 1), (&[0, 0], 3)]),
        ];
        let data = groebner_basis(&gens, P, 2, MonomialOrder::GrevLex);
        // basis[i] == sum_j A[i][j] gens[j]
        for (b, row) in data.basis.iter().zip(&data.basis_from_gens) {
            let mut acc = FpPoly::zero(P, 2);
            for (a, g) in row.iter().zip(&gens) {
                acc = acc.add(&a.mul(g));
            }
            assert_eq!(&acc, b);
        }
        // gens[i] == sum_j B[i][j] basis[j]
        for (g, row) in gens.iter().zip(&data.gens_from_basis) {
            let mut acc = FpPoly::zero(P, 2);
            for (b, q) in data.basis.iter().zip(row) {
                acc = acc.add(&q.mul(b));
            }
            assert_eq!(&acc, g);
        }
    }

    #[test]
    fn buchberger_criterion_holds() {
        // every S-polynomial of the returned GB reduces to 0 against it
        let gens = vec![
            poly(2, &[(&[2, 0], 1), (&[0, 1], 1)]),
            poly(2, &[(&[1, 2], 1), (&[1, 0], 4)]),
            poly(2, &[(&[0, 3], 2), (&[0, 0], 1)]),
        ];
        let data = groebner_basis(&gens, P, 2, MonomialOrder::GrevLex);
        let gb = &data.basis;
        for i in 0..gb.len() {
            for j in 0..i {
                let (mi, ci) = gb[i].leading_term(data.order).map(|(m, c)| (m.clone(), c)).unwrap();
                let (mj, cj) = gb[j].leading_term(data.order).map(|(m, c)| (m.clone(), c)).unwrap();
                let l = mi.lcm(&mj);
                let s = gb[i]
                    .mul_term(&l.checked_div(&mi).unwrap(), invm(ci, P))
                    .sub(&gb[j].mul_term(&l.checked_div(&mj).unwrap(), invm(cj, P)));
                assert!(normal_form(&s, gb, data.order).is_zero());
            }
        }
    }

    #[test]
    fn syzygy_x2_xy() {
        // generated by (y, -x)
        let gens = vec![poly(2, &[(&[2, 0], 1)]), poly(2, &[(&[1, 1], 1)])];
        let syz = syzygies(&gens, P, 2, MonomialOrder::GrevLex);
        assert!(syz.verify());
        let target = vec![poly(2, &[(&[0, 1], 1)]), poly(2, &[(&[1, 0], -1)])];
        assert!(module_contains(&syz.vectors, &target, P, MonomialOrder::GrevLex));
        // and every generator is a multiple of (y, -x)
        assert!(syz
            .vectors
            .iter()
            .all(|v| module_contains(&[target.clone()], v, P, MonomialOrder::GrevLex)));
    }

    #[test]
    fn syzygy_x2_xy_y2() {
        let gens = vec![
            poly(2, &[(&[2, 0], 1)]),
            poly(2, &[(&[1, 1], 1)]),
            poly(2, &[(&[0, 2], 1)]),
        ];
        let syz = syzygies(&gens, P, 2, MonomialOrder::GrevLex);
        assert!(syz.verify());
        let s1 = vec![
            poly(2, &[(&[0, 1], 1)]),
            poly(2, &[(&[1, 0], -1)]),
            FpPoly::zero(P, 2),
        ];
        let s2 = vec![
            FpPoly::zero(P, 2),
            poly(2, &[(&[0, 1], 1)]),
            poly(2, &[(&[1, 0], -1)]),
        ];
        let s3 = vec![
            poly(2, &[(&[0, 2], 1)]),
            FpPoly::zero(P, 2),
            poly(2, &[(&[2, 0], -1)]),
        ];
        // Equality of generated modules: each expected vector lies in the
        // computed module and conversely.
        for s in [&s1, &s2, &s3] {
            assert!(module_contains(&syz.vectors, s, P, MonomialOrder::GrevLex));
        }
        let expected = vec![s1, s2, s3];
        for v in &syz.vectors {
            assert!(module_contains(&expected, v, P, MonomialOrder::GrevLex));
        }
    }

    #[test]
    fn syzygy_single_generator_is_trivial() {
        let gens = vec![poly(2, &[(&[2, 1], 1), (&[0, 0], 2)])];
        let syz = syzygies(&gens, P, 2, MonomialOrder::GrevLex);
        assert!(syz.vectors.is_empty());
    }

    #[test]
    fn syzygy_with_zero_generator() {
        let gens = vec![FpPoly::zero(P, 2), poly(2, &[(&[1, 0], 1)])];
        let syz = syzygies(&gens, P, 2, MonomialOrder::GrevLex);
        let unit = vec![poly(2, &[(&[0, 0], 1)]), FpPoly::zero(P, 2)];
        assert!(module_contains(&syz.vectors, &unit, P, MonomialOrder::GrevLex));
    }

    #[test]
    fn dimension_examples() {
        // (t2 + 1) in F_5[t1, t2]: Krull dimension 1
        let mut i1 = FpIdeal::new(P, 2, vec![poly(2, &[(&[0, 1], 1), (&[0, 0], 1)])]);
        let d1 = quotient_dimension(&mut i1, MonomialOrder::GrevLex);
        assert_eq!(d1.krull, 1);

        // (t2 + 1, t1^2 - t1): dimension 0, dim_k 2
        let mut i2 = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
                poly(2, &[(&[2, 0], 1), (&[1, 0], -1)]),
            ],
        );
        let d2 = quotient_dimension(&mut i2, MonomialOrder::GrevLex);
        assert_eq!(d2.krull, 0);
        assert_eq!(d2.dim_k, Some(2));

        // (x^2, xy, y^2): dim 0, dim_k 3
        let mut i3 = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[2, 0], 1)]),
                poly(2, &[(&[1, 1], 1)]),
                poly(2, &[(&[0, 2], 1)]),
            ],
        );
        let d3 = quotient_dimension(&mut i3, MonomialOrder::GrevLex);
        assert_eq!(d3.krull, 0);
        assert_eq!(d3.dim_k, Some(3));

        // unit ideal: empty variety sentinel
        let mut i4 = FpIdeal::new(P, 2, vec![poly(2, &[(&[0, 0], 1)])]);
        let d4 = quotient_dimension(&mut i4, MonomialOrder::GrevLex);
        assert_eq!(d4.krull, -1);
        assert_eq!(d4.dim_k, Some(0));
    }

    #[test]
    fn krull_dimension_order_invariant() {
        let gens = vec![
            poly(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
            poly(2, &[(&[2, 0], 1), (&[1, 0], -1)]),
        ];
        let mut a = FpIdeal::new(P, 2, gens.clone());
        let mut b = FpIdeal::new(P, 2, gens);
        assert_eq!(
            quotient_dimension(&mut a, MonomialOrder::GrevLex).krull,
            quotient_dimension(&mut b, MonomialOrder::Lex).krull
        );
    }

    #[test]
    fn rational_points_examples() {
        let mut i1 = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
                poly(2, &[(&[2, 0], 1), (&[1, 0], -1)]),
            ],
        );
        let pts = rational_points(&mut i1, MonomialOrder::GrevLex, 1 << 24).unwrap();
        assert_eq!(pts, vec![vec![0, 4], vec![1, 4]]);

        let mut i2 = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[2, 0], 1)]),
                poly(2, &[(&[1, 1], 1)]),
                poly(2, &[(&[0, 2], 1)]),
            ],
        );
        assert_eq!(
            rational_points(&mut i2, MonomialOrder::GrevLex, 1 << 24).unwrap(),
            vec![vec![0, 0]]
        );

        let mut i3 = FpIdeal::new(P, 1, vec![poly(1, &[(&[2], 1), (&[0], 1)])]);
        assert_eq!(
            rational_points(&mut i3, MonomialOrder::GrevLex, 1 << 24).unwrap(),
            vec![vec![2], vec![3]]
        );
    }

    #[test]
    fn rational_points_rejects_positive_dimension() {
        let mut i = FpIdeal::new(P, 2, vec![poly(2, &[(&[0, 1], 1), (&[0, 0], 1)])]);
        assert_eq!(
            rational_points(&mut i, MonomialOrder::GrevLex, 1 << 24),
            Err(FpError::PositiveDimensional(1))
        );
    }

    #[test]
    fn local_dimension_examples() {
        let mut i1 = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[2, 0], 1)]),
                poly(2, &[(&[1, 1], 1)]),
                poly(2, &[(&[0, 2], 1)]),
            ],
        );
        assert_eq!(local_dimension(&mut i1, &[0, 0], MonomialOrder::GrevLex), Ok(3));

        let mut i2 = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
                poly(2, &[(&[2, 0], 1), (&[1, 0], -1)]),
            ],
        );
        assert_eq!(local_dimension(&mut i2, &[0, 4], MonomialOrder::GrevLex), Ok(1));
        assert_eq!(local_dimension(&mut i2, &[1, 4], MonomialOrder::GrevLex), Ok(1));

        let mut i3 = FpIdeal::new(P, 1, vec![poly(1, &[(&[2], 1)])]);
        assert_eq!(local_dimension(&mut i3, &[0], MonomialOrder::GrevLex), Ok(2));

        assert_eq!(
            local_dimension(&mut i1, &[1, 1], MonomialOrder::GrevLex),
            Err(FpError::NotAZero)
        );
    }

    #[test]
    fn local_dims_sum_to_total_for_rational_support() {
        let mut i = FpIdeal::new(
            P,
            2,
            vec![
                poly(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
                poly(2, &[(&[2, 0], 1), (&[1, 0], -1)]),
            ],
        );
        let total = quotient_dimension(&mut i, MonomialOrder::GrevLex)
            .dim_k
            .unwrap();
        let pts = rational_points(&mut i, MonomialOrder::GrevLex, 1 << 24).unwrap();
        let sum: u64 = pts
            .iter()
            .map(|z| local_dimension(&mut i, z, MonomialOrder::GrevLex).unwrap())
            .sum();
        assert_eq!(sum, total);
    }
}

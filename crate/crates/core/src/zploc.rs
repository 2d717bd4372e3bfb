//! Exact polynomial algebra over Z localized at p.
//!
//! Elements are integer polynomials; the coefficient ring is the valuation
//! ring Z_(p), whose units are the integers coprime to p. Groebner bases
//! are computed by Buchberger's algorithm for coefficient rings that are
//! discrete valuation rings: a term divides another when its monomial
//! divides and its coefficient p-valuation is not larger. Reductions are
//! pseudo-reductions — the running polynomial is scaled by coefficient
//! units so all arithmetic stays in Z[x]; unit scaling changes neither
//! ideal membership nor the generated ideal.

use crate::fppoly::FpPoly;
use crate::monomial::{Monomial, MonomialOrder};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A sparse integer polynomial (no zero coefficients stored).
#[derive(Clone, PartialEq, Eq)]
pub struct ZPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, BigInt>,
}

pub fn vp_bigint(p: u64, c: &BigInt) -> u32 {
    assert!(!c.is_zero());
    let p = BigInt::from(p);
    let mut v = 0u32;
    let mut r = c.clone();
    loop {
        let (q, rem) = r.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        v += 1;
        r = q;
    }
}

impl ZPoly {
    pub fn zero(nvars: usize) -> Self {
        ZPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut f = Self::zero(nvars);
        f.add_term(Monomial::one(nvars), c);
        f
    }

    pub fn from_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        let mut f = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            f.add_term(Monomial(m.to_vec()), *c);
        }
        f
    }

    pub fn add_term(&mut self, m: Monomial, c: impl Into<BigInt>) {
        let c = c.into();
        if c.is_zero() {
            return;
        }
        let cancelled = {
            let e = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c;
            e.is_zero()
        };
        if cancelled {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ZPoly {
        let mut out = ZPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero(self.nvars);
        }
        let mut out = ZPoly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero(self.nvars);
        }
        let mut out = ZPoly::zero(self.nvars);
        for (mm, v) in &self.terms {
            out.terms.insert(mm.mul(m), v * c);
        }
        out
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        let mut out = ZPoly::zero(self.nvars);
        for (m, c) in &other.terms {
            for (mm, v) in &self.terms {
                out.add_term(mm.mul(m), v * c);
            }
        }
        out
    }

    pub fn leading(&self, order: MonomialOrder) -> Option<(&Monomial, &BigInt)> {
        order
            .max_key(self.terms.keys())
            .map(|m| (m, self.terms.get(m).unwrap()))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn reduce_mod_p(&self, p: u64) -> FpPoly {
        let mut out = FpPoly::zero(p, self.nvars);
        let pb = BigInt::from(p);
        for (m, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            let r: u64 = r.try_into().unwrap();
            out.add_term(m.clone(), r);
        }
        out
    }

    /// Canonical integer lift of an F_p polynomial, coefficients in [0, p).
    pub fn lift_fp(f: &FpPoly) -> ZPoly {
        let mut out = ZPoly::zero(f.nvars);
        for (m, c) in &f.terms {
            out.terms.insert(m.clone(), BigInt::from(*c));
        }
        out
    }

    /// Exact division of every coefficient by p (panics otherwise).
    pub fn exact_div_p(&self, p: u64) -> ZPoly {
        let pb = BigInt::from(p);
        let mut out = ZPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(&pb);
            assert!(r.is_zero(), "coefficient not divisible by p");
            out.terms.insert(m.clone(), q);
        }
        out
    }

    /// Remove the p-coprime content and normalize the sign of the leading
    /// coefficient; the result generates the same Z_(p)-ideal.
    pub fn normalize_unit_content(&self, p: u64, order: MonomialOrder) -> ZPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = BigUint::zero();
        for c in self.terms.values() {
            g = g.gcd(&c.abs().to_biguint().unwrap());
        }
        let gv = vp_bigint(p, &BigInt::from(g.clone()));
        let unit_content = BigInt::from(g) / BigInt::from(p).pow(gv);
        let mut out = ZPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c / &unit_content);
        }
        if out.leading(order).map(|(_, c)| c.is_negative()) == Some(true) {
            out = out.neg();
        }
        out
    }

    /// Re-embed into a ring with more variables (existing exponents keep
    /// their positions; new variables get exponent 0).
    pub fn extend_vars(&self, nvars: usize) -> ZPoly {
        assert!(nvars >= self.nvars);
        let mut out = ZPoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(nvars, 0);
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Debug for ZPoly {
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

fn unit_part(p: u64, c: &BigInt) -> BigInt {
    c / BigInt::from(p).pow(vp_bigint(p, c))
}

/// Pseudo-reduce `f` against `basis` over Z_(p). Returns `u * f - (combo)`
/// for some p-coprime integer u; the result is 0 iff `f` reduces to 0.
pub fn zp_reduce(f: &ZPoly, basis: &[ZPoly], p: u64, order: MonomialOrder) -> ZPoly {
    let mut h = f.clone();
    let mut remainder = ZPoly::zero(f.nvars);
    'outer: while let Some((lm, lc)) = h.leading(order) {
        let lm = lm.clone();
        let lc = lc.clone();
        let v = vp_bigint(p, &lc);
        for g in basis {
            if let Some((gm, gc)) = g.leading(order) {
                let a = vp_bigint(p, gc);
                if a <= v {
                    if let Some(q) = lm.checked_div(gm) {
                        let gu = unit_part(p, gc);
                        // scale so the heads cancel exactly in Z[x]
                        let qc = &lc / BigInt::from(p).pow(a);
                        h = h.scale(&gu).sub(&g.mul_term(&q, &qc));
                        remainder = remainder.scale(&gu);
                        continue 'outer;
                    }
                }
            }
        }
        remainder.add_term(lm.clone(), lc);
        h.terms.remove(&lm);
    }
    remainder
}

/// Strong Groebner basis of the Z_(p)-ideal generated by `gens`.
pub fn zp_groebner(gens: &[ZPoly], p: u64, order: MonomialOrder) -> Vec<ZPoly> {
    let mut basis: Vec<ZPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.normalize_unit_content(p, order))
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (mi, ci) = basis[i]
            .leading(order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        let (mj, cj) = basis[j]
            .leading(order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .unwrap();
        let a = vp_bigint(p, &ci);
        let b = vp_bigint(p, &cj);
        if mi.is_coprime(&mj) && a.min(b) == 0 {
            continue; // product criterion, valid when one head is a unit
        }
        let l = mi.lcm(&mj);
        let ui = l.checked_div(&mi).unwrap();
        let uj = l.checked_div(&mj).unwrap();
        let m = a.max(b);
        // cross-multiply by unit parts and balance p powers
        let fi_coef = unit_part(p, &cj) * BigInt::from(p).pow(m - a);
        let fj_coef = unit_part(p, &ci) * BigInt::from(p).pow(m - b);
        let s = basis[i]
            .mul_term(&ui, &fi_coef)
            .sub(&basis[j].mul_term(&uj, &fj_coef));
        let h = zp_reduce(&s, &basis, p, order);
        if !h.is_zero() {
            let h = h.normalize_unit_content(p, order);
            let k = basis.len();
            basis.push(h);
            for t in 0..k {
                pairs.push((t, k));
            }
        }
    }
    basis
}

/// Membership of `f` in the Z_(p)-ideal with the given strong basis.
pub fn zp_contains(basis: &[ZPoly], f: &ZPoly, p: u64, order: MonomialOrder) -> bool {
    zp_reduce(f, basis, p, order).is_zero()
}

// ---------------------------------------------------------------------------
// Free-module version over Z_(p)[x]^r with position-over-term order.

pub type ZVec = Vec<ZPoly>;

pub fn zvec_is_zero(v: &ZVec) -> bool {
    v.iter().all(|f| f.is_zero())
}

fn zvec_sub(a: &ZVec, b: &ZVec) -> ZVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn zvec_scale(v: &ZVec, c: &BigInt) -> ZVec {
    v.iter().map(|f| f.scale(c)).collect()
}

fn zvec_mul_term(v: &ZVec, m: &Monomial, c: &BigInt) -> ZVec {
    v.iter().map(|f| f.mul_term(m, c)).collect()
}

fn zvec_lead(v: &ZVec, order: MonomialOrder) -> Option<(usize, Monomial, BigInt)> {
    for (i, f) in v.iter().enumerate() {
        if let Some((m, c)) = f.leading(order) {
            return Some((i, m.clone(), c.clone()));
        }
    }
    None
}

fn zvec_normalize(v: &ZVec, p: u64, order: MonomialOrder) -> ZVec {
    if zvec_is_zero(v) {
        return v.clone();
    }
    let mut g = BigUint::zero();
    for f in v {
        for c in f.terms.values() {
            g = g.gcd(&c.abs().to_biguint().unwrap());
        }
    }
    let gv = vp_bigint(p, &BigInt::from(g.clone()));
    let unit_content = BigInt::from(g) / BigInt::from(p).pow(gv);
    let mut out: ZVec = v
        .iter()
        .map(|f| {
            let mut nf = ZPoly::zero(f.nvars);
            for (m, c) in &f.terms {
                nf.terms.insert(m.clone(), c / &unit_content);
            }
            nf
        })
        .collect();
    if let Some((_, _, c)) = zvec_lead(&out, order) {
        if c.is_negative() {
            out = out.iter().map(|f| f.neg()).collect();
        }
    }
    out
}

pub fn zvec_reduce(f: &ZVec, basis: &[ZVec], p: u64, order: MonomialOrder) -> ZVec {
    let mut h = f.clone();
    let mut remainder: ZVec = f.iter().map(|g| ZPoly::zero(g.nvars)).collect();
    'outer: while let Some((pos, lm, lc)) = zvec_lead(&h, order) {
        let v = vp_bigint(p, &lc);
        for g in basis {
            if let Some((gpos, gm, gc)) = zvec_lead(g, order) {
                if gpos != pos {
                    continue;
                }
                let a = vp_bigint(p, &gc);
                if a <= v {
                    if let Some(q) = lm.checked_div(&gm) {
                        let gu = unit_part(p, &gc);
                        let qc = &lc / BigInt::from(p).pow(a);
                        h = zvec_sub(&zvec_scale(&h, &gu), &zvec_mul_term(g, &q, &qc));
                        remainder = zvec_scale(&remainder, &gu);
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

pub fn zvec_groebner(gens: &[ZVec], p: u64, order: MonomialOrder) -> Vec<ZVec> {
    let mut basis: Vec<ZVec> = gens
        .iter()
        .filter(|v| !zvec_is_zero(v))
        .map(|v| zvec_normalize(v, p, order))
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (pi, mi, ci) = zvec_lead(&basis[i], order).unwrap();
        let (pj, mj, cj) = zvec_lead(&basis[j], order).unwrap();
        if pi != pj {
            continue;
        }
        let a = vp_bigint(p, &ci);
        let b = vp_bigint(p, &cj);
        let l = mi.lcm(&mj);
        let ui = l.checked_div(&mi).unwrap();
        let uj = l.checked_div(&mj).unwrap();
        let m = a.max(b);
        let fi_coef = unit_part(p, &cj) * BigInt::from(p).pow(m - a);
        let fj_coef = unit_part(p, &ci) * BigInt::from(p).pow(m - b);
        let s = zvec_sub(
            &zvec_mul_term(&basis[i], &ui, &fi_coef),
            &zvec_mul_term(&basis[j], &uj, &fj_coef),
        );
        let h = zvec_reduce(&s, &basis, p, order);
        if !zvec_is_zero(&h) {
            let h = zvec_normalize(&h, p, order);
            let k = basis.len();
            basis.push(h);
            for t in 0..k {
                pairs.push((t, k));
            }
        }
    }
    basis
}

pub fn zvec_contains(basis: &[ZVec], v: &ZVec, p: u64, order: MonomialOrder) -> bool {
    zvec_is_zero(&zvec_reduce(v, basis, p, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 5;
    const ORD: MonomialOrder = MonomialOrder::GrevLex;

    fn zp(nvars: usize, terms: &[(&[u32], i64)]) -> ZPoly {
        ZPoly::from_terms(nvars, terms)
    }

    #[test]
    fn membership_in_localized_ideal() {
        // over Z_(5) the ideal (2x) contains x, since 2 is a unit
        let basis = zp_groebner(&[zp(1, &[(&[1], 2)])], P, ORD);
        assert!(zp_contains(&basis, &zp(1, &[(&[1], 1)]), P, ORD));
        // but (5x) does not contain x
        let basis2 = zp_groebner(&[zp(1, &[(&[1], 5)])], P, ORD);
        assert!(!zp_contains(&basis2, &zp(1, &[(&[1], 1)]), P, ORD));
        assert!(zp_contains(&basis2, &zp(1, &[(&[1], 10)]), P, ORD));
    }

    #[test]
    fn example_level_one_membership() {
        // I_1 = (x^2 + 5y, xy, y^2) in Z_(5)[x, y]
        let gens = vec![
            zp(2, &[(&[2, 0], 1), (&[0, 1], 5)]),
            zp(2, &[(&[1, 1], 1)]),
            zp(2, &[(&[0, 2], 1)]),
        ];
        let basis = zp_groebner(&gens, P, ORD);
        assert!(zp_contains(&basis, &zp(2, &[(&[1, 2], 1)]), P, ORD));
        assert!(zp_contains(&basis, &zp(2, &[(&[0, 3], 1)]), P, ORD));
        assert!(!zp_contains(&basis, &zp(2, &[(&[1, 0], 1)]), P, ORD));
        // y*(x^2+5y) - x*(xy) = 5y^2
        assert!(zp_contains(&basis, &zp(2, &[(&[0, 2], 5)]), P, ORD));
    }

    #[test]
    fn mixed_p_power_heads() {
        let gens = vec![zp(1, &[(&[1], 5)]), zp(1, &[(&[2], 1)])];
        let basis = zp_groebner(&gens, P, ORD);
        assert!(zp_contains(&basis, &zp(1, &[(&[2], 1)]), P, ORD));
        assert!(zp_contains(&basis, &zp(1, &[(&[1], 5)]), P, ORD));
        assert!(!zp_contains(&basis, &zp(1, &[(&[1], 1)]), P, ORD));
        assert!(zp_contains(&basis, &zp(1, &[(&[1], 15)]), P, ORD));
    }

    #[test]
    fn module_membership() {
        // module generated by (5, 0) and (1, 2) in Z_(5)^2
        let g1: ZVec = vec![ZPoly::constant(1, 5), ZPoly::zero(1)];
        let g2: ZVec = vec![ZPoly::constant(1, 1), ZPoly::constant(1, 2)];
        let basis = zvec_groebner(&[g1, g2], P, ORD);
        let yes: ZVec = vec![ZPoly::constant(1, 5), ZPoly::constant(1, 10)];
        let no: ZVec = vec![ZPoly::constant(1, 1), ZPoly::zero(1)];
        assert!(zvec_contains(&basis, &yes, P, ORD));
        assert!(!zvec_contains(&basis, &no, P, ORD));
        let yes2: ZVec = vec![ZPoly::constant(1, 2), ZPoly::constant(1, 4)];
        assert!(zvec_contains(&basis, &yes2, P, ORD));
    }

    #[test]
    fn module_with_polynomial_entries() {
        // (y, -x) and its polynomial multiples
        let g: ZVec = vec![zp(2, &[(&[0, 1], 1)]), zp(2, &[(&[1, 0], -1)])];
        let basis = zvec_groebner(&[g.clone()], P, ORD);
        let v: ZVec = vec![zp(2, &[(&[0, 2], 1)]), zp(2, &[(&[1, 1], -1)])];
        assert!(zvec_contains(&basis, &v, P, ORD));
        let w: ZVec = vec![zp(2, &[(&[0, 1], 1)]), zp(2, &[(&[1, 0], 1)])];
        assert!(!zvec_contains(&basis, &w, P, ORD));
    }
}

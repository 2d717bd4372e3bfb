//! Approximate restricted power series: a polynomial part over residues
//! mod `p^N` together with the global precision tag `O(p^N)`.
//!
//! A value denotes the coset `polynomial + p^N * h` over all integral power
//! series `h`; every operation is well-defined on cosets. Terms whose
//! coefficients vanish mod `p^N` are dropped, so the stored polynomial is
//! canonical for the coset.

use crate::fppoly::FpPoly;
use crate::monomial::Monomial;
use crate::padic::{pow_p, PadicScalar, Valuation};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Total-degree guard for products; terms beyond the cap must vanish
/// modulo the output precision.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("mismatched primes: {0} vs {1}")]
    MismatchedPrimes(u64, u64),
    #[error("mismatched variable counts: {0} vs {1}")]
    MismatchedVars(usize, usize),
    #[error("degree cap {cap} exceeded by a term of degree {degree} not vanishing mod p^{precision}")]
    DegreeCapExceeded { cap: u32, degree: u32, precision: u32 },
    #[error("zero polynomial part: {0}")]
    ZeroPolynomial(&'static str),
    #[error("reduction mod p is nonzero; cannot divide by p")]
    NotDivisibleByP,
    #[error("precision exhausted (N = {0})")]
    PrecisionExhausted(u32),
}

/// A multivariate power series over Z_p known modulo `p^N`, `N >= 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct ApproxSeries {
    p: u64,
    nvars: usize,
    precision: u32,
    terms: BTreeMap<Monomial, BigUint>,
}

impl ApproxSeries {
    pub fn zero(p: u64, nvars: usize, precision: u32) -> Self {
        assert!(precision >= 1, "series precision must be at least 1");
        ApproxSeries {
            p,
            nvars,
            precision,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u64, nvars: usize, precision: u32) -> Self {
        let mut s = Self::zero(p, nvars, precision);
        s.set_term(Monomial::one(nvars), BigInt::from(1));
        s
    }

    pub fn from_terms(
        p: u64,
        nvars: usize,
        precision: u32,
        terms: &[(&[u32], i64)],
    ) -> Self {
        let mut s = Self::zero(p, nvars, precision);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars);
            s.set_term(Monomial(m.to_vec()), BigInt::from(*c));
        }
        s
    }

    /// Insert/accumulate one term, reducing mod p^N and dropping zeros.
    pub fn set_term(&mut self, m: Monomial, c: impl Into<BigInt>) {
        let modulus = BigInt::from(pow_p(self.p, self.precision));
        let prev = self
            .terms
            .get(&m)
            .cloned()
            .map(BigInt::from)
            .unwrap_or_else(BigInt::zero);
        let mut r = (prev + c.into()) % &modulus;
        if r.is_negative() {
            r += &modulus;
        }
        if r.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, r.to_biguint().unwrap());
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigUint> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> PadicScalar {
        match self.terms.get(m) {
            Some(c) => PadicScalar::new(self.p, BigInt::from(c.clone()), self.precision),
            None => PadicScalar::zero(self.p, self.precision),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.p != other.p {
            return Err(SeriesError::MismatchedPrimes(self.p, other.p));
        }
        if self.nvars != other.nvars {
            return Err(SeriesError::MismatchedVars(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Truncate to a lower precision (canonicalizing term residues).
    pub fn truncate(&self, n: u32) -> Self {
        assert!(n >= 1);
        if n >= self.precision {
            return self.clone();
        }
        let m = pow_p(self.p, n);
        let mut out = ApproxSeries::zero(self.p, self.nvars, n);
        for (mono, c) in &self.terms {
            let r = c % &m;
            if !r.is_zero() {
                out.terms.insert(mono.clone(), r);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let n = self.precision.min(other.precision);
        let mut out = self.truncate(n);
        for (m, c) in &other.terms {
            out.set_term(m.clone(), BigInt::from(c.clone()));
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let n = self.precision.min(other.precision);
        let mut out = self.truncate(n);
        for (m, c) in &other.terms {
            out.set_term(m.clone(), -BigInt::from(c.clone()));
        }
        Ok(out)
    }

    /// Minimal coefficient valuation; `AtLeast(N)` for the zero polynomial.
    pub fn content_valuation(&self) -> Valuation {
        let mut best: Option<u32> = None;
        for c in self.terms.values() {
            let s = PadicScalar::new(self.p, BigInt::from(c.clone()), self.precision);
            if let Valuation::Exact(v) = s.valuation() {
                best = Some(best.map_or(v, |b| b.min(v)));
                if best == Some(0) {
                    break;
                }
            }
        }
        match best {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.precision),
        }
    }

    /// Product at precision `min(N_f + c(g), N_g + c(f))` where `c` is the
    /// content valuation — the sharpest coset-sound precision.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul_capped(other, DEFAULT_DEGREE_CAP)
    }

    pub fn mul_capped(&self, other: &Self, cap: u32) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let cf = self.content_valuation().lower_bound();
        let cg = other.content_valuation().lower_bound();
        let n_out = (self.precision + cg).min(other.precision + cf);
        let modulus = pow_p(self.p, n_out);
        let mut acc: BTreeMap<Monomial, BigUint> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let e = acc.entry(m).or_insert_with(BigUint::zero);
                *e = (&*e + ca * cb) % &modulus;
            }
        }
        let mut out = ApproxSeries::zero(self.p, self.nvars, n_out);
        for (m, c) in acc {
            if c.is_zero() {
                continue;
            }
            if m.total_degree() > cap {
                return Err(SeriesError::DegreeCapExceeded {
                    cap,
                    degree: m.total_degree(),
                    precision: n_out,
                });
            }
            out.terms.insert(m, c);
        }
        Ok(out)
    }

    /// Multiply by an exact integer polynomial (its p-content raises the
    /// output precision like an ordinary factor's would).
    pub fn mul_exact_poly(
        &self,
        poly: &BTreeMap<Monomial, BigInt>,
        cap: u32,
    ) -> Result<Self, SeriesError> {
        let mut content: Option<u32> = None;
        for c in poly.values() {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut r = c.abs().to_biguint().unwrap();
            let p = BigUint::from(self.p);
            loop {
                let (q, rem) = r.div_rem(&p);
                if !rem.is_zero() {
                    break;
                }
                v += 1;
                r = q;
            }
            content = Some(content.map_or(v, |b| b.min(v)));
        }
        let n_out = match content {
            None => return Ok(ApproxSeries::zero(self.p, self.nvars, self.precision)),
            Some(v) => self.precision + v,
        };
        let mut out = ApproxSeries::zero(self.p, self.nvars, n_out);
        for (ma, ca) in &self.terms {
            for (mb, cb) in poly {
                out.set_term(ma.mul(mb), BigInt::from(ca.clone()) * cb);
            }
        }
        if let Some(bad) = out.terms.keys().find(|m| m.total_degree() > cap).cloned() {
            return Err(SeriesError::DegreeCapExceeded {
                cap,
                degree: bad.total_degree(),
                precision: n_out,
            });
        }
        Ok(out)
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        let mut out = ApproxSeries::zero(self.p, self.nvars, self.precision);
        for (m, v) in &self.terms {
            out.set_term(m.clone(), BigInt::from(v.clone()) * c);
        }
        out
    }

    /// Multiply by `p^k`, raising the precision to `N + k` (exact scaling
    /// of the whole coset).
    pub fn mul_p_pow(&self, k: u32) -> Self {
        let pk = pow_p(self.p, k);
        let mut out = ApproxSeries::zero(self.p, self.nvars, self.precision + k);
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * &pk);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale_int(&BigInt::from(-1))
    }

    /// Divide by `p^m` where `m` is the (exact) content valuation; the
    /// result has content 0 at precision `N - m`.
    pub fn normalize(&self) -> Result<Self, SeriesError> {
        match self.content_valuation() {
            Valuation::AtLeast(_) => Err(SeriesError::ZeroPolynomial(
                "content is indeterminate at this precision",
            )),
            Valuation::Exact(0) => Ok(self.clone()),
            Valuation::Exact(m) => {
                let pm = pow_p(self.p, m);
                let mut out = ApproxSeries::zero(self.p, self.nvars, self.precision - m);
                for (mono, c) in &self.terms {
                    out.terms.insert(mono.clone(), c / &pm);
                }
                Ok(out)
            }
        }
    }

    /// Coefficient-wise reduction modulo p.
    pub fn reduce_mod_p(&self) -> FpPoly {
        let mut out = FpPoly::zero(self.p, self.nvars);
        let p = BigUint::from(self.p);
        for (m, c) in &self.terms {
            let r = c % &p;
            let r: u64 = r.try_into().unwrap();
            if r != 0 {
                out.add_term(m.clone(), r);
            }
        }
        out
    }

    /// Coefficient-wise exact division by p; requires the reduction mod p
    /// to vanish and `N >= 2`. The output precision is `N - 1`.
    pub fn divide_by_p(&self) -> Result<Self, SeriesError> {
        if self.precision < 2 {
            return Err(SeriesError::PrecisionExhausted(self.precision));
        }
        if !self.reduce_mod_p().is_zero() {
            return Err(SeriesError::NotDivisibleByP);
        }
        let p = BigUint::from(self.p);
        let mut out = ApproxSeries::zero(self.p, self.nvars, self.precision - 1);
        for (m, c) in &self.terms {
            let q = c / &p;
            if !q.is_zero() {
                out.terms.insert(m.clone(), q);
            }
        }
        Ok(out)
    }

    /// Evaluate at an integer point, modulo p^N.
    pub fn eval(&self, point: &[BigInt]) -> PadicScalar {
        assert_eq!(point.len(), self.nvars);
        let modulus = BigInt::from(pow_p(self.p, self.precision));
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = BigInt::from(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t * &point[i] % &modulus;
                }
            }
            acc = (acc + t) % &modulus;
        }
        PadicScalar::new(self.p, acc, self.precision)
    }
}

impl fmt::Debug for ApproxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "O({}^{})", self.p, self.precision);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{:?}", c, m))
            .collect();
        write!(f, "{} + O({}^{})", parts.join(" + "), self.p, self.precision)
    }
}

/// An ideal of R<x_1..x_n> presented by approximate generators; the
/// precisions may differ per generator.
#[derive(Clone, Debug)]
pub struct ApproxIdeal {
    pub p: u64,
    pub nvars: usize,
    pub generators: Vec<ApproxSeries>,
}

impl ApproxIdeal {
    pub fn new(generators: Vec<ApproxSeries>) -> Self {
        assert!(!generators.is_empty(), "ideal needs at least one generator");
        let p = generators[0].prime();
        let nvars = generators[0].nvars();
        for g in &generators {
            assert_eq!(g.prime(), p);
            assert_eq!(g.nvars(), nvars);
        }
        ApproxIdeal {
            p,
            nvars,
            generators,
        }
    }

    pub fn min_precision(&self) -> u32 {
        self.generators
            .iter()
            .map(|g| g.precision())
            .min()
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_content_precision() {
        // (x + O(5^3)) * (5y + O(5^3)): the O(5^3) tail of the first factor
        // multiplies a content-1 series, the tail of the second multiplies a
        // content-0 one, so the coset-sound precision is min(3+1, 3+0) = 3.
        let f = ApproxSeries::from_terms(5, 2, 3, &[(&[1, 0], 1)]);
        let g = ApproxSeries::from_terms(5, 2, 3, &[(&[0, 1], 5)]);
        let h = f.mul(&g).unwrap();
        assert_eq!(h.precision(), 3);
        assert_eq!(h, ApproxSeries::from_terms(5, 2, 3, &[(&[1, 1], 5)]));
        // multiplying by an exact p-power does raise the precision
        let fp = f.mul_p_pow(1);
        assert_eq!(fp.precision(), 4);
        assert_eq!(fp, ApproxSeries::from_terms(5, 2, 4, &[(&[1, 0], 5)]));
    }

    #[test]
    fn add_cancels_at_min_precision() {
        let f = ApproxSeries::from_terms(5, 2, 2, &[(&[1, 0], 1)]);
        let g = ApproxSeries::from_terms(5, 2, 3, &[(&[1, 0], -1)]);
        let h = f.add(&g).unwrap();
        assert_eq!(h.precision(), 2);
        assert!(h.is_zero());
    }

    #[test]
    fn mul_by_one_is_identity() {
        let f = ApproxSeries::from_terms(5, 2, 2, &[(&[2, 0], 1), (&[0, 1], 5)]);
        let one = ApproxSeries::one(5, 2, 2);
        assert_eq!(f.mul(&one).unwrap(), f);
    }

    #[test]
    fn content_valuation_cases() {
        let f = ApproxSeries::from_terms(5, 2, 3, &[(&[0, 0], 108), (&[0, 1], 3), (&[1, 0], 65)]);
        assert_eq!(f.content_valuation(), Valuation::Exact(0));
        let g = ApproxSeries::from_terms(5, 2, 4, &[(&[1, 0], 5), (&[0, 1], 25)]);
        assert_eq!(g.content_valuation(), Valuation::Exact(1));
        let z = ApproxSeries::zero(5, 2, 3);
        assert_eq!(z.content_valuation(), Valuation::AtLeast(3));
    }

    #[test]
    fn normalize_cases() {
        let g = ApproxSeries::from_terms(5, 2, 4, &[(&[1, 0], 5), (&[0, 0], 25)]);
        let n = g.normalize().unwrap();
        assert_eq!(n, ApproxSeries::from_terms(5, 2, 3, &[(&[1, 0], 1), (&[0, 0], 5)]));
        // idempotence
        assert_eq!(n.normalize().unwrap(), n);
        // zero polynomial errors
        assert!(ApproxSeries::zero(5, 2, 3).normalize().is_err());
    }

    #[test]
    fn reduce_mod_p_cases() {
        let f = ApproxSeries::from_terms(5, 2, 3, &[(&[0, 0], 108), (&[0, 1], 3)]);
        let r = f.reduce_mod_p();
        assert_eq!(r, FpPoly::from_terms(5, 2, &[(&[0, 0], 3), (&[0, 1], 3)]));
        let g = ApproxSeries::from_terms(5, 2, 3, &[(&[1, 0], 5), (&[0, 2], 10)]);
        assert!(g.reduce_mod_p().is_zero());
    }

    #[test]
    fn divide_by_p_cases() {
        let f = ApproxSeries::from_terms(5, 2, 3, &[(&[1, 0], 5), (&[0, 1], 25)]);
        let q = f.divide_by_p().unwrap();
        assert_eq!(q, ApproxSeries::from_terms(5, 2, 2, &[(&[1, 0], 1), (&[0, 1], 5)]));
        let bad = ApproxSeries::from_terms(5, 2, 3, &[(&[1, 0], 1)]);
        assert_eq!(bad.divide_by_p(), Err(SeriesError::NotDivisibleByP));
        // divide_by_p(p * f) == f one precision lower
        let f2 = ApproxSeries::from_terms(5, 2, 3, &[(&[2, 0], 3), (&[0, 1], 7)]);
        let mut p5 = BTreeMap::new();
        p5.insert(Monomial::one(2), BigInt::from(5));
        let prod = f2.mul_exact_poly(&p5, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(prod.precision(), 4);
        assert_eq!(prod.divide_by_p().unwrap(), f2);
    }

    #[test]
    fn example_syzygy_division() {
        // y*(x^2 + py) - x*(xy) = p y^2, divided by p gives y^2 (with the
        // hidden tails g1 = g2 = 0).
        let p = 5u64;
        let f1 = ApproxSeries::from_terms(p, 2, 4, &[(&[2, 0], 1), (&[0, 1], 5)]);
        let f2 = ApproxSeries::from_terms(p, 2, 4, &[(&[1, 1], 1)]);
        let y = ApproxSeries::from_terms(p, 2, 4, &[(&[0, 1], 1)]);
        let x = ApproxSeries::from_terms(p, 2, 4, &[(&[1, 0], 1)]);
        let combo = y.mul(&f1).unwrap().sub(&x.mul(&f2).unwrap()).unwrap();
        let g = combo.divide_by_p().unwrap();
        assert_eq!(g, ApproxSeries::from_terms(p, 2, 3, &[(&[0, 2], 1)]));
    }

    #[test]
    fn degree_cap_enforced() {
        let f = ApproxSeries::from_terms(5, 1, 3, &[(&[40], 1)]);
        let g = ApproxSeries::from_terms(5, 1, 3, &[(&[30], 1)]);
        assert!(matches!(f.mul(&g), Err(SeriesError::DegreeCapExceeded { .. })));
    }
}

//! Capped-precision p-adic integers and arithmetic in quotient rings
//! `Z_p[a]/(f)`, including the p-adic exponential and logarithm.
//!
//! A scalar is a residue modulo `p^N` together with the precision tag `N`;
//! it denotes the coset of all integers congruent to the residue mod `p^N`.
//! Every operation is sound on cosets: the output residue, at the output
//! precision, is independent of the chosen input representatives.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("mismatched primes: {0} vs {1}")]
    MismatchedPrimes(u64, u64),
    #[error("mismatched precisions: {0} vs {1}")]
    MismatchedPrecisions(u32, u32),
    #[error("insufficient valuation: need at least {need}, have {have}")]
    InsufficientValuation { need: u32, have: Valuation },
    #[error("cannot divide by p^{0} at precision {1}")]
    PrecisionExhausted(u32, u32),
    #[error("p = 2 is outside the exp/log domain")]
    EvenPrime,
    #[error("element is not congruent to 1 mod p")]
    NotOneModP,
    #[error("element has a coefficient of valuation 0")]
    NotDivisibleByP,
    #[error("mismatched moduli")]
    MismatchedModuli,
}

/// The p-adic valuation of a capped-precision residue. A zero residue at
/// precision `N` is indistinguishable from anything of valuation >= `N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The usable lower bound in either case.
    pub fn lower_bound(&self) -> u32 {
        match *self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Valuation::Exact(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

pub fn pow_p(p: u64, n: u32) -> BigUint {
    BigUint::from(p).pow(n)
}

/// A p-adic integer known modulo `p^N`.
///
/// `precision == 0` is the absorbing "no information" element; arithmetic
/// with it yields precision 0 again.
#[derive(Clone, PartialEq, Eq)]
pub struct PadicScalar {
    p: u64,
    residue: BigUint,
    precision: u32,
}

impl PadicScalar {
    pub fn new(p: u64, residue: impl Into<BigInt>, precision: u32) -> Self {
        assert!(p >= 2, "p must be at least 2");
        let modulus = BigInt::from(pow_p(p, precision));
        let mut r: BigInt = residue.into() % &modulus;
        if r.is_negative() {
            r += &modulus;
        }
        PadicScalar {
            p,
            residue: r.to_biguint().unwrap(),
            precision,
        }
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        PadicScalar {
            p,
            residue: BigUint::zero(),
            precision,
        }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::new(p, 1, precision)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero_residue(&self) -> bool {
        self.residue.is_zero()
    }

    fn check_prime(&self, other: &Self) -> Result<(), PadicError> {
        if self.p != other.p {
            return Err(PadicError::MismatchedPrimes(self.p, other.p));
        }
        Ok(())
    }

    /// Truncate to precision `n` (a no-op when `n >= self.precision`).
    pub fn truncate(&self, n: u32) -> Self {
        if n >= self.precision {
            return self.clone();
        }
        PadicScalar {
            p: self.p,
            residue: &self.residue % pow_p(self.p, n),
            precision: n,
        }
    }

    /// Re-tag the canonical residue at a higher precision. This picks the
    /// integer representative in `[0, p^N)` as the lift; callers must know
    /// the result of their computation is well-defined modulo the original
    /// precision.
    pub fn lift_to_precision(&self, n: u32) -> Self {
        assert!(n >= self.precision);
        PadicScalar {
            p: self.p,
            residue: self.residue.clone(),
            precision: n,
        }
    }

    /// Exact p-adic valuation of the residue, or `AtLeast(N)` for the zero
    /// residue.
    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeast(self.precision);
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut r = self.residue.clone();
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                return Valuation::Exact(v);
            }
            v += 1;
            r = q;
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let n = self.precision.min(other.precision);
        let m = pow_p(self.p, n);
        Ok(PadicScalar {
            p: self.p,
            residue: (&self.residue + &other.residue) % m,
            precision: n,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        let n = self.precision.min(other.precision);
        let m = pow_p(self.p, n);
        let a = &self.residue % &m;
        let b = &other.residue % &m;
        let r = if a >= b { a - b } else { &m + a - b };
        Ok(PadicScalar {
            p: self.p,
            residue: r,
            precision: n,
        })
    }

    /// Product precision is `min(N_a + v(b), N_b + v(a))`, with `v` the
    /// valuation of the known residue (`v = N` for a zero residue). A
    /// precision-0 operand absorbs.
    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_prime(other)?;
        if self.precision == 0 || other.precision == 0 {
            return Ok(PadicScalar::zero(self.p, 0));
        }
        let va = self.valuation().lower_bound();
        let vb = other.valuation().lower_bound();
        let n = (self.precision + vb).min(other.precision + va);
        let m = pow_p(self.p, n);
        Ok(PadicScalar {
            p: self.p,
            residue: (&self.residue * &other.residue) % m,
            precision: n,
        })
    }

    pub fn neg(&self) -> Self {
        if self.residue.is_zero() {
            return self.clone();
        }
        PadicScalar {
            p: self.p,
            residue: pow_p(self.p, self.precision) - &self.residue,
            precision: self.precision,
        }
    }

    /// Divide by `p^l` exactly. Requires valuation >= `l` and `l <= N`;
    /// the output precision is `N - l`.
    pub fn exact_divide_by_p(&self, l: u32) -> Result<Self, PadicError> {
        if l > self.precision {
            return Err(PadicError::PrecisionExhausted(l, self.precision));
        }
        if self.valuation().lower_bound() < l {
            return Err(PadicError::InsufficientValuation {
                need: l,
                have: self.valuation(),
            });
        }
        Ok(PadicScalar {
            p: self.p,
            residue: &self.residue / pow_p(self.p, l),
            precision: self.precision - l,
        })
    }

    pub fn mul_by_p_pow(&self, l: u32) -> Self {
        PadicScalar {
            p: self.p,
            residue: &self.residue * pow_p(self.p, l),
            precision: self.precision + l,
        }
    }

    /// Inverse of a unit (valuation 0) modulo `p^N`.
    pub fn invert(&self) -> Option<Self> {
        if self.valuation() != Valuation::Exact(0) {
            return None;
        }
        let m = pow_p(self.p, self.precision);
        let inv = mod_inverse(&self.residue, &m)?;
        Some(PadicScalar {
            p: self.p,
            residue: inv,
            precision: self.precision,
        })
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.precision)
    }
}

/// Modular inverse via extended Euclid; `None` when not coprime.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    let mut x = e.x % &m;
    if x.is_negative() {
        x += &m;
    }
    x.to_biguint()
}

pub fn vp_u64(p: u64, mut n: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        v += 1;
        n /= p;
    }
    v
}

/// v_p(k!) by Legendre's formula.
pub fn vp_factorial(p: u64, k: u64) -> u32 {
    let mut v = 0u64;
    let mut q = k / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v as u32
}

/// The quotient ring `Z_p[a]/(f)` for a monic integer polynomial `f`.
/// Elements are coefficient vectors of length `deg f` with one shared
/// precision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumberRing {
    p: u64,
    /// Monic modulus, length d+1, leading coefficient 1.
    modulus: Vec<BigInt>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct NumberRingElement {
    coeffs: Vec<BigUint>,
    precision: u32,
}

impl NumberRing {
    pub fn new(p: u64, modulus: Vec<BigInt>) -> Self {
        assert!(p >= 2);
        assert!(modulus.len() >= 2, "modulus must be non-constant");
        assert!(modulus.last().unwrap().is_one(), "modulus must be monic");
        NumberRing { p, modulus }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(&self, precision: u32) -> NumberRingElement {
        NumberRingElement {
            coeffs: vec![BigUint::zero(); self.degree()],
            precision,
        }
    }

    pub fn one(&self, precision: u32) -> NumberRingElement {
        let mut e = self.zero(precision);
        e.coeffs[0] = BigUint::one() % pow_p(self.p, precision);
        e
    }

    /// Build an element from integer coefficients (length <= d), reducing
    /// mod p^N.
    pub fn element(&self, coeffs: &[BigInt], precision: u32) -> NumberRingElement {
        assert!(coeffs.len() <= self.degree());
        let m = BigInt::from(pow_p(self.p, precision));
        let mut out = vec![BigUint::zero(); self.degree()];
        for (i, c) in coeffs.iter().enumerate() {
            let mut r = c % &m;
            if r.is_negative() {
                r += &m;
            }
            out[i] = r.to_biguint().unwrap();
        }
        NumberRingElement {
            coeffs: out,
            precision,
        }
    }

    pub fn scalar(&self, c: &PadicScalar) -> NumberRingElement {
        assert_eq!(c.prime(), self.p);
        let mut e = self.zero(c.precision());
        e.coeffs[0] = c.residue().clone();
        e
    }

    pub fn add(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        let n = a.precision.min(b.precision);
        let m = pow_p(self.p, n);
        NumberRingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % &m)
                .collect(),
            precision: n,
        }
    }

    pub fn sub(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        let n = a.precision.min(b.precision);
        let m = pow_p(self.p, n);
        NumberRingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| {
                    let x = x % &m;
                    let y = y % &m;
                    if x >= y {
                        x - y
                    } else {
                        &m + x - y
                    }
                })
                .collect(),
            precision: n,
        }
    }

    /// Product, reduced modulo the monic modulus; precision is the minimum
    /// of the operand precisions.
    pub fn mul(&self, a: &NumberRingElement, b: &NumberRingElement) -> NumberRingElement {
        let n = a.precision.min(b.precision);
        let m = pow_p(self.p, n);
        let d = self.degree();
        let mut prod = vec![BigUint::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        // Reduce degrees >= d via a^d = -(f_0 + ... + f_{d-1} a^{d-1}),
        // working with signed coefficients to keep the substitution exact.
        let mi = BigInt::from(m.clone());
        let mut signed: Vec<BigInt> = prod.into_iter().map(BigInt::from).collect();
        for k in (d..signed.len()).rev() {
            let c = std::mem::take(&mut signed[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                let sub = &c * &self.modulus[j];
                signed[k - d + j] -= sub;
            }
        }
        let coeffs = signed
            .into_iter()
            .take(d)
            .map(|c| {
                let mut r = c % &mi;
                if r.is_negative() {
                    r += &mi;
                }
                r.to_biguint().unwrap()
            })
            .collect();
        NumberRingElement {
            coeffs,
            precision: n,
        }
    }

    pub fn pow(&self, a: &NumberRingElement, mut e: u64) -> NumberRingElement {
        let mut base = a.clone();
        let mut acc = self.one(a.precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn scalar_mul(&self, c: &BigUint, a: &NumberRingElement) -> NumberRingElement {
        let m = pow_p(self.p, a.precision);
        NumberRingElement {
            coeffs: a.coeffs.iter().map(|x| (x * c) % &m).collect(),
            precision: a.precision,
        }
    }

    /// Minimal valuation over the coefficients.
    pub fn content_valuation(&self, a: &NumberRingElement) -> Valuation {
        let mut best: Option<u32> = None;
        for c in &a.coeffs {
            let s = PadicScalar {
                p: self.p,
                residue: c.clone(),
                precision: a.precision,
            };
            if let Valuation::Exact(v) = s.valuation() {
                best = Some(best.map_or(v, |b| b.min(v)));
                if best == Some(0) {
                    break;
                }
            }
        }
        match best {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(a.precision),
        }
    }

    pub fn exact_divide_by_p(
        &self,
        a: &NumberRingElement,
        l: u32,
    ) -> Result<NumberRingElement, PadicError> {
        if l > a.precision {
            return Err(PadicError::PrecisionExhausted(l, a.precision));
        }
        if self.content_valuation(a).lower_bound() < l {
            return Err(PadicError::InsufficientValuation {
                need: l,
                have: self.content_valuation(a),
            });
        }
        let pl = pow_p(self.p, l);
        Ok(NumberRingElement {
            coeffs: a.coeffs.iter().map(|c| c / &pl).collect(),
            precision: a.precision - l,
        })
    }

    fn truncate(&self, a: &NumberRingElement, n: u32) -> NumberRingElement {
        if n >= a.precision {
            return a.clone();
        }
        let m = pow_p(self.p, n);
        NumberRingElement {
            coeffs: a.coeffs.iter().map(|c| c % &m).collect(),
            precision: n,
        }
    }

    fn lift_to_precision(&self, a: &NumberRingElement, n: u32) -> NumberRingElement {
        assert!(n >= a.precision);
        NumberRingElement {
            coeffs: a.coeffs.clone(),
            precision: n,
        }
    }

    /// Divide by the integer `k`, writing `k = p^e * m`: exact division of
    /// every coefficient by `p^e`, then multiplication by `m^{-1}`.
    fn divide_by_integer(
        &self,
        a: &NumberRingElement,
        k: u64,
    ) -> Result<NumberRingElement, PadicError> {
        let e = vp_u64(self.p, k);
        let unit = k / (self.p as u64).pow(e);
        let out = self.exact_divide_by_p(a, e)?;
        if unit == 1 {
            return Ok(out);
        }
        let m = pow_p(self.p, out.precision);
        let inv = mod_inverse(&BigUint::from(unit), &m).expect("unit is coprime to p");
        Ok(self.scalar_mul(&inv, &out))
    }

    /// p-adic logarithm of `u` with `u = 1 mod p`, for odd `p`.
    ///
    /// The sum is truncated once every further term has valuation >= N; the
    /// 1/n denominators are absorbed by working at a raised internal
    /// precision, which is sound because log is well-defined mod p^N on its
    /// domain.
    pub fn log(&self, u: &NumberRingElement) -> Result<NumberRingElement, PadicError> {
        if self.p == 2 {
            return Err(PadicError::EvenPrime);
        }
        let n = u.precision;
        let x0 = self.sub(u, &self.one(n));
        if self.content_valuation(&x0).lower_bound() < 1 {
            return Err(PadicError::NotOneModP);
        }
        if n == 0 {
            return Ok(self.zero(0));
        }
        // Terms x^k/k have valuation >= k - v_p(k); all terms from `cutoff`
        // on are O(p^N) because k - log_p(k) is increasing.
        let mut cutoff = 1u64;
        while (cutoff as f64) - (cutoff as f64).log(self.p as f64) < n as f64 {
            cutoff += 1;
        }
        let max_loss = (1..cutoff).map(|k| vp_u64(self.p, k)).max().unwrap_or(0);
        let work = n + max_loss;
        let x = self.lift_to_precision(&x0, work);
        let mut acc = self.zero(work);
        let mut xpow = self.one(work);
        for k in 1..cutoff {
            xpow = self.mul(&xpow, &x);
            let term = self.divide_by_integer(&xpow, k)?;
            let term = self.lift_to_precision(&term, work);
            if k % 2 == 1 {
                acc = self.add(&acc, &term);
            } else {
                acc = self.sub(&acc, &term);
            }
        }
        Ok(self.truncate(&acc, n))
    }

    /// p-adic exponential of `x` with every coefficient of valuation >= 1,
    /// for odd `p`. Truncation uses the bound v(x^k/k!) >= k - v_p(k!).
    pub fn exp(&self, x0: &NumberRingElement) -> Result<NumberRingElement, PadicError> {
        if self.p == 2 {
            return Err(PadicError::EvenPrime);
        }
        if self.content_valuation(x0).lower_bound() < 1 {
            return Err(PadicError::NotDivisibleByP);
        }
        let n = x0.precision;
        if n == 0 {
            return Ok(self.zero(0));
        }
        // Terms x^k/k! have valuation >= k - v_p(k!) >= k(p-2)/(p-1), which
        // is increasing in k for p >= 3, so cut at the least k from which
        // the crude bound already clears N.
        let mut cutoff = 1u64;
        while cutoff * (self.p - 2) < (n as u64) * (self.p - 1) {
            cutoff += 1;
        }
        let max_loss = vp_factorial(self.p, cutoff);
        let work = n + max_loss;
        let x = self.lift_to_precision(&self.truncate(x0, n), work);
        let mut acc = self.one(work);
        let mut xpow = self.one(work);
        for k in 1..cutoff {
            xpow = self.mul(&xpow, &x);
            let mut term = xpow.clone();
            // Divide by k! one factor at a time to stay in u64 range.
            for j in 2..=k {
                term = self.divide_by_integer(&term, j)?;
            }
            acc = self.add(&acc, &term);
        }
        Ok(self.truncate(&acc, n))
    }
}

impl NumberRingElement {
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coeff_residues(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// The coefficients as capped-precision scalars sharing one precision.
    pub fn coeffs(&self, p: u64) -> Vec<PadicScalar> {
        self.coeffs
            .iter()
            .map(|c| PadicScalar {
                p,
                residue: c.clone(),
                precision: self.precision,
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl fmt::Debug for NumberRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(p^{})", self.coeffs, self.precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: u64, r: i64, n: u32) -> PadicScalar {
        PadicScalar::new(p, r, n)
    }

    #[test]
    fn add_min_precision() {
        let a = s(5, 3, 3);
        let b = s(5, 4, 2);
        let c = a.add(&b).unwrap();
        assert_eq!(c, s(5, 7, 2));
    }

    #[test]
    fn mul_valuations_add() {
        let a = s(5, 5, 3);
        let c = a.mul(&a).unwrap();
        assert_eq!(c, s(5, 25, 4));
    }

    #[test]
    fn mul_zero_residue_convention() {
        let a = s(5, 0, 2);
        let c = a.mul(&a).unwrap();
        assert_eq!(c.precision(), 4);
        assert!(c.is_zero_residue());
    }

    #[test]
    fn precision_zero_absorbs() {
        let a = s(5, 0, 0);
        let b = s(5, 7, 4);
        assert_eq!(a.mul(&b).unwrap().precision(), 0);
        assert_eq!(a.add(&b).unwrap().precision(), 0);
    }

    #[test]
    fn mismatched_primes_error() {
        let a = s(5, 1, 2);
        let b = s(7, 1, 2);
        assert_eq!(a.add(&b), Err(PadicError::MismatchedPrimes(5, 7)));
    }

    #[test]
    fn valuation_cases() {
        assert_eq!(s(5, 50, 4).valuation(), Valuation::Exact(2));
        assert_eq!(s(5, 0, 3).valuation(), Valuation::AtLeast(3));
        assert_eq!(s(5, 3, 1).valuation(), Valuation::Exact(0));
    }

    #[test]
    fn exact_divide() {
        assert_eq!(s(5, 25, 4).exact_divide_by_p(2).unwrap(), s(5, 1, 2));
        assert_eq!(s(5, 0, 3).exact_divide_by_p(1).unwrap(), s(5, 0, 2));
        assert!(s(5, 15, 3).exact_divide_by_p(2).is_err());
    }

    #[test]
    fn divide_then_multiply_back() {
        let a = s(5, 75, 5);
        let b = a.exact_divide_by_p(1).unwrap().mul_by_p_pow(1);
        assert_eq!(b.residue(), a.residue());
        assert_eq!(b.precision(), a.precision());
    }

    fn quintic_ring() -> NumberRing {
        // a^5 - a^4 + a^3 - a^2 - 1
        NumberRing::new(
            5,
            vec![
                BigInt::from(-1),
                BigInt::from(0),
                BigInt::from(-1),
                BigInt::from(1),
                BigInt::from(-1),
                BigInt::from(1),
            ],
        )
    }

    #[test]
    fn ring_mul_reduces_degree() {
        let ring = quintic_ring();
        let a = ring.element(&[BigInt::from(0), BigInt::from(1)], 6); // alpha
        let a4 = ring.pow(&a, 4);
        let a5 = ring.mul(&a4, &a);
        // alpha^5 = alpha^4 - alpha^3 + alpha^2 + 1
        let expect = ring.element(
            &[
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(1),
                BigInt::from(-1),
                BigInt::from(1),
            ],
            6,
        );
        assert_eq!(a5, expect);
    }

    #[test]
    fn log_of_one_is_zero() {
        let ring = quintic_ring();
        let one = ring.one(8);
        assert!(ring.log(&one).unwrap().is_zero());
    }

    #[test]
    fn exp_of_zero_is_one() {
        let ring = quintic_ring();
        let z = ring.zero(8);
        assert_eq!(ring.exp(&z).unwrap(), ring.one(8));
    }

    #[test]
    fn exp_log_roundtrip_simple() {
        let ring = quintic_ring();
        let x = ring.element(
            &[
                BigInt::from(5),
                BigInt::from(10),
                BigInt::from(20),
                BigInt::from(15),
                BigInt::from(5),
            ],
            10,
        );
        let y = ring.exp(&x).unwrap();
        let back = ring.log(&y).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn exp_is_multiplicative_inverse() {
        let ring = quintic_ring();
        let x = ring.element(&[BigInt::from(15), BigInt::from(5)], 9);
        let minus_x = ring.sub(&ring.zero(9), &x);
        let prod = ring.mul(&ring.exp(&x).unwrap(), &ring.exp(&minus_x).unwrap());
        assert_eq!(prod, ring.one(9));
    }

    #[test]
    fn exp_rejects_p2_and_bad_valuation() {
        let ring2 = NumberRing::new(2, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(ring2.exp(&ring2.zero(4)), Err(PadicError::EvenPrime));
        let ring = quintic_ring();
        let bad = ring.element(&[BigInt::from(1)], 4);
        assert_eq!(ring.exp(&bad), Err(PadicError::NotDivisibleByP));
        assert_eq!(ring.log(&ring.element(&[BigInt::from(2)], 4)), Err(PadicError::NotOneModP));
    }
}

//! Groebner bases for Tate-algebra ideals at finite precision.
//!
//! Terms are compared valuation-first: a term with strictly smaller
//! coefficient valuation beats any term of larger valuation, and ties fall
//! back to the monomial order. Working at a fixed precision O(p^M) makes
//! coefficients elements of Z/p^M, where division by a leading term with a
//! canonical quotient choice cancels heads exactly; every division chain
//! is finite because valuations below M form finitely many levels.
//!
//! The saturation-or-FAIL procedure introduces one auxiliary variable per
//! generator to stand for the unknown O(p^N) tails, saturates exactly in
//! the polynomial ring, and accepts the result only when the reduced basis
//! mod p^M no longer mentions the auxiliary variables.

use crate::monomial::{Monomial, MonomialOrder};
use crate::padic::{mod_inverse, pow_p};
use crate::rseries::{ApproxIdeal, ApproxSeries};
use crate::saturation::{self, SatError};
use crate::zploc::ZPoly;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TateError {
    #[error("series is O(p^M); leading term is indeterminate")]
    ZeroModPrecision,
    #[error("target precision {target} exceeds an input precision {available}")]
    PrecisionTooHigh { target: u32, available: u32 },
    #[error("degree cap {0} exceeded during reduction")]
    DegreeCap(u32),
    #[error("non-unit leading coefficient (valuation {0}): the ideal is not saturated")]
    NonUnitLeading(u32),
    #[error("saturation failed: {0}")]
    Saturation(#[from] SatError),
    #[error("target precision must satisfy 1 <= M <= N")]
    BadPrecision,
}

/// A term of a series: coefficient valuation, unit part of the coefficient
/// modulo p^{M-v}, and the monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TateTerm {
    pub valuation: u32,
    pub unit: BigUint,
    pub monomial: Monomial,
}

impl TateTerm {
    /// Term divisibility: valuations may only rise, monomials must divide.
    pub fn divides(&self, other: &TateTerm) -> bool {
        self.valuation <= other.valuation && self.monomial.divides(&other.monomial)
    }
}

fn coeff_valuation(p: u64, c: &BigUint) -> u32 {
    debug_assert!(!c.is_zero());
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut r = c.clone();
    loop {
        let (q, rem) = r.div_rem(&pb);
        if !rem.is_zero() {
            return v;
        }
        v += 1;
        r = q;
    }
}

/// Compare two terms under the valuation-first order: smaller valuation
/// wins; equal valuations fall back to the monomial order.
pub fn term_cmp(
    (va, ma): (u32, &Monomial),
    (vb, mb): (u32, &Monomial),
    order: MonomialOrder,
) -> Ordering {
    match vb.cmp(&va) {
        Ordering::Equal => order.cmp(ma, mb),
        other => other,
    }
}

/// The maximal term of `f` under the valuation-first order.
pub fn leading_term(f: &ApproxSeries, order: MonomialOrder) -> Result<TateTerm, TateError> {
    let p = f.prime();
    let mut best: Option<(u32, Monomial, BigUint)> = None;
    for (m, c) in f.terms() {
        let v = coeff_valuation(p, c);
        let better = match &best {
            None => true,
            Some((bv, bm, _)) => term_cmp((v, m), (*bv, bm), order) == Ordering::Greater,
        };
        if better {
            best = Some((v, m.clone(), c.clone()));
        }
    }
    match best {
        None => Err(TateError::ZeroModPrecision),
        Some((v, monomial, c)) => {
            let unit = (c / pow_p(p, v)) % pow_p(p, f.precision() - v);
            Ok(TateTerm {
                valuation: v,
                unit,
                monomial,
            })
        }
    }
}

fn mul_term_mod(
    f: &ApproxSeries,
    m: &Monomial,
    c: &BigUint,
    precision: u32,
) -> ApproxSeries {
    let mut out = ApproxSeries::zero(f.prime(), f.nvars(), precision);
    for (mm, cc) in f.terms() {
        out.set_term(mm.mul(m), BigInt::from(cc * c));
    }
    out
}

fn max_term(f: &ApproxSeries, order: MonomialOrder) -> Option<(u32, Monomial, BigUint)> {
    let p = f.prime();
    let mut best: Option<(u32, Monomial, BigUint)> = None;
    for (m, c) in f.terms() {
        let v = coeff_valuation(p, c);
        let better = match &best {
            None => true,
            Some((bv, bm, _)) => term_cmp((v, m), (*bv, bm), order) == Ordering::Greater,
        };
        if better {
            best = Some((v, m.clone(), c.clone()));
        }
    }
    best
}

/// Division with remainder at precision M: `f = sum_i q_i g_i + r mod p^M`
/// with no remainder term divisible by any basis leading term. The heads
/// cancel exactly in Z/p^M, so the identity is exact at this precision.
pub fn tate_divide(
    f: &ApproxSeries,
    basis: &[ApproxSeries],
    order: MonomialOrder,
    precision: u32,
    degree_cap: u32,
) -> Result<(Vec<ApproxSeries>, ApproxSeries), TateError> {
    if precision > f.precision() {
        return Err(TateError::PrecisionTooHigh {
            target: precision,
            available: f.precision(),
        });
    }
    for g in basis {
        if precision > g.precision() {
            return Err(TateError::PrecisionTooHigh {
                target: precision,
                available: g.precision(),
            });
        }
    }
    let p = f.prime();
    let nvars = f.nvars();
    let pm = pow_p(p, precision);
    let truncated: Vec<ApproxSeries> = basis.iter().map(|g| g.truncate(precision)).collect();
    let lts: Vec<Option<TateTerm>> = truncated
        .iter()
        .map(|g| leading_term(g, order).ok())
        .collect();

    let mut h = f.truncate(precision);
    let mut quotients = vec![ApproxSeries::zero(p, nvars, precision); basis.len()];
    let mut remainder = ApproxSeries::zero(p, nvars, precision);

    'outer: while let Some((v, m, c)) = max_term(&h, order) {
        for (i, lt) in lts.iter().enumerate() {
            let lt = match lt {
                Some(t) => t,
                None => continue,
            };
            if lt.valuation <= v {
                if let Some(qm) = m.checked_div(&lt.monomial) {
                    if qm.total_degree() + truncated[i].total_degree() > degree_cap {
                        return Err(TateError::DegreeCap(degree_cap));
                    }
                    let unit_inv = mod_inverse(&lt.unit, &pm).expect("unit is invertible");
                    let qc = (&c / pow_p(p, lt.valuation)) * unit_inv % &pm;
                    quotients[i].set_term(qm.clone(), BigInt::from(qc.clone()));
                    let sub = mul_term_mod(&truncated[i], &qm, &qc, precision);
                    h = h.sub(&sub).expect("compatible series").truncate(precision);
                    continue 'outer;
                }
            }
        }
        // move the irreducible term from h to the remainder
        remainder.set_term(m.clone(), BigInt::from(c.clone()));
        h.set_term(m, -BigInt::from(c));
    }
    Ok((quotients, remainder))
}

/// A Groebner basis at working precision M.
#[derive(Clone, Debug)]
pub struct TateGB {
    pub basis: Vec<ApproxSeries>,
    pub order: MonomialOrder,
    pub precision: u32,
    pub minimal: bool,
    pub reduced: bool,
}

/// Buchberger's algorithm at precision M. S-pairs include, for every basis
/// element with non-unit leading coefficient, the p-power multiple that
/// clears its head (needed because Z/p^M is not a field).
pub fn tate_buchberger(
    ideal: &ApproxIdeal,
    order: MonomialOrder,
    precision: u32,
    degree_cap: u32,
) -> Result<TateGB, TateError> {
    if precision < 1 || precision > ideal.min_precision() {
        return Err(TateError::PrecisionTooHigh {
            target: precision,
            available: ideal.min_precision(),
        });
    }
    let p = ideal.p;
    let nvars = ideal.nvars;
    let pm = pow_p(p, precision);

    let mut basis: Vec<ApproxSeries> = ideal
        .generators
        .iter()
        .map(|g| g.truncate(precision))
        .filter(|g| !g.is_zero())
        .collect();

    #[derive(Clone, PartialEq, Eq)]
    enum Pair {
        Standard(usize, usize),
        PClear(usize),
    }

    let mut queue: Vec<Pair> = Vec::new();
    for i in 0..basis.len() {
        queue.push(Pair::PClear(i));
        for j in 0..i {
            queue.push(Pair::Standard(j, i));
        }
    }

    while let Some(pair) = queue.pop() {
        let spoly = match &pair {
            Pair::Standard(i, j) => {
                let lt_i = leading_term(&basis[*i], order)?;
                let lt_j = leading_term(&basis[*j], order)?;
                if lt_i.monomial.is_coprime(&lt_j.monomial)
                    && lt_i.valuation == 0
                    && lt_j.valuation == 0
                {
                    continue;
                }
                let v = lt_i.valuation.max(lt_j.valuation);
                let l = lt_i.monomial.lcm(&lt_j.monomial);
                let ui = mod_inverse(&lt_i.unit, &pm).expect("unit");
                let uj = mod_inverse(&lt_j.unit, &pm).expect("unit");
                let ci = pow_p(p, v - lt_i.valuation) * ui % &pm;
                let cj = pow_p(p, v - lt_j.valuation) * uj % &pm;
                let a = mul_term_mod(
                    &basis[*i],
                    &l.checked_div(&lt_i.monomial).unwrap(),
                    &ci,
                    precision,
                );
                let b = mul_term_mod(
                    &basis[*j],
                    &l.checked_div(&lt_j.monomial).unwrap(),
                    &cj,
                    precision,
                );
                a.sub(&b).expect("compatible")
            }
            Pair::PClear(i) => {
                let lt = leading_term(&basis[*i], order)?;
                if lt.valuation == 0 {
                    continue;
                }
                let c = pow_p(p, precision - lt.valuation);
                mul_term_mod(&basis[*i], &Monomial::one(nvars), &c, precision)
            }
        };
        if spoly.is_zero() {
            continue;
        }
        let (_, rem) = tate_divide(&spoly, &basis, order, precision, degree_cap)?;
        if !rem.is_zero() {
            let k = basis.len();
            basis.push(rem);
            queue.push(Pair::PClear(k));
            for t in 0..k {
                queue.push(Pair::Standard(t, k));
            }
        }
    }

    sort_basis(&mut basis, order);
    Ok(TateGB {
        basis,
        order,
        precision,
        minimal: false,
        reduced: false,
    })
}

fn sort_basis(basis: &mut [ApproxSeries], order: MonomialOrder) {
    basis.sort_by(|a, b| {
        let ta = leading_term(a, order).expect("nonzero");
        let tb = leading_term(b, order).expect("nonzero");
        term_cmp((tb.valuation, &tb.monomial), (ta.valuation, &ta.monomial), order)
    });
}

/// Delete O(p^M) elements and elements whose leading term is a multiple of
/// another's (the first loop of the saturation-or-FAIL procedure).
pub fn minimalize(gb: &TateGB) -> TateGB {
    let order = gb.order;
    let nonzero: Vec<ApproxSeries> = gb.basis.iter().filter(|g| !g.is_zero()).cloned().collect();
    let lts: Vec<TateTerm> = nonzero
        .iter()
        .map(|g| leading_term(g, order).expect("nonzero"))
        .collect();
    let mut keep = vec![true; nonzero.len()];
    for i in 0..nonzero.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..nonzero.len() {
            if i == j || !keep[j] {
                continue;
            }
            if lts[j].divides(&lts[i]) && (lts[j] != lts[i] || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let mut basis: Vec<ApproxSeries> = nonzero
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    sort_basis(&mut basis, order);
    TateGB {
        basis,
        order,
        precision: gb.precision,
        minimal: true,
        reduced: false,
    }
}

/// Reduce a minimal basis of a saturated ideal: each element is replaced
/// by its monic head plus the remainder of its tail against the full
/// basis. Fails when a leading coefficient is not a unit, which signals
/// an unsaturated ideal. The output is order-canonical.
pub fn reduce_basis(gb: &TateGB, degree_cap: u32) -> Result<TateGB, TateError> {
    let order = gb.order;
    let precision = gb.precision;
    let pm = pow_p(gb.basis.first().map(|g| g.prime()).unwrap_or(2), precision);
    let mut basis = gb.basis.clone();
    sort_basis(&mut basis, order);
    for i in 0..basis.len() {
        let lt = leading_term(&basis[i], order)?;
        if lt.valuation != 0 {
            return Err(TateError::NonUnitLeading(lt.valuation));
        }
        let mut tail = basis[i].clone();
        tail.set_term(
            lt.monomial.clone(),
            -BigInt::from(basis[i].coefficient(&lt.monomial).residue().clone()),
        );
        let (_, r) = tate_divide(&tail, &basis, order, precision, degree_cap)?;
        let unit_inv = mod_inverse(&lt.unit, &pm).expect("unit");
        let mut g = ApproxSeries::zero(basis[i].prime(), basis[i].nvars(), precision);
        g.set_term(lt.monomial.clone(), BigInt::from(lt.unit.clone()));
        let g = g.add(&r).expect("compatible");
        let g = mul_term_mod(
            &g,
            &Monomial::one(basis[i].nvars()),
            &unit_inv,
            precision,
        );
        basis[i] = g;
    }
    sort_basis(&mut basis, order);
    Ok(TateGB {
        basis,
        order,
        precision,
        minimal: true,
        reduced: true,
    })
}

/// Outcome of the saturation-or-FAIL procedure.
#[derive(Clone, Debug)]
pub enum Algorithm2Outcome {
    /// Generators of the saturation modulo p^M, in the original variables.
    Generators(Vec<ApproxSeries>),
    /// The information mod p^N does not determine the saturation mod p^M;
    /// the offending reduced-basis element (still in the extended
    /// variables) is reported.
    Fail { offending: ApproxSeries },
}

/// Saturation from approximate polynomial generators: adjoin one auxiliary
/// variable per generator for the unknown tails, saturate exactly in the
/// polynomial ring, compute the reduced Groebner basis mod p^M, and FAIL
/// if any auxiliary variable survives.
pub fn algorithm2(
    polys: &[ZPoly],
    p: u64,
    n_input_precision: u32,
    target_precision: u32,
    order: MonomialOrder,
    degree_cap: u32,
) -> Result<Algorithm2Outcome, TateError> {
    if target_precision < 1 || target_precision > n_input_precision {
        return Err(TateError::BadPrecision);
    }
    let nvars = polys.first().map(|q| q.nvars).unwrap_or(0);
    let r = polys.len();
    let total = nvars + r;
    let pn = BigInt::from(pow_p(p, n_input_precision));

    // J~ = (p_i + p^N y_i) in the polynomial ring with auxiliary variables
    let mut gens: Vec<ZPoly> = Vec::with_capacity(r);
    for (i, q) in polys.iter().enumerate() {
        let mut g = q.extend_vars(total);
        g.add_term(Monomial::var(total, nvars + i), pn.clone());
        gens.push(g);
    }

    let (sat, _) = saturation::exact_saturation(&gens, p, order, 64)?;

    // pass to the Tate side at precision M
    let approx: Vec<ApproxSeries> = sat
        .iter()
        .map(|g| {
            let mut s = ApproxSeries::zero(p, total, target_precision);
            for (m, c) in &g.terms {
                s.set_term(m.clone(), c.clone());
            }
            s
        })
        .filter(|s| !s.is_zero())
        .collect();
    if approx.is_empty() {
        return Ok(Algorithm2Outcome::Generators(Vec::new()));
    }

    let gb = tate_buchberger(
        &ApproxIdeal::new(approx),
        order,
        target_precision,
        degree_cap,
    )?;
    let minimal = minimalize(&gb);
    let reduced = reduce_basis(&minimal, degree_cap)?;

    for g in &reduced.basis {
        if g.terms().keys().any(|m| m.0[nvars..].iter().any(|&e| e > 0)) {
            return Ok(Algorithm2Outcome::Fail {
                offending: g.clone(),
            });
        }
    }

    // no auxiliary variable survives: project to the original variables
    let projected = reduced
        .basis
        .iter()
        .map(|g| {
            let mut s = ApproxSeries::zero(p, nvars, target_precision);
            for (m, c) in g.terms() {
                s.set_term(Monomial(m.0[..nvars].to_vec()), BigInt::from(c.clone()));
            }
            s
        })
        .collect();
    Ok(Algorithm2Outcome::Generators(projected))
}

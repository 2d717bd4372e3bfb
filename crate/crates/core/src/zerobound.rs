//! Zero-count bounds: the one-variable Strassmann bound and its
//! multivariate generalization — when the reduction of the system mod p is
//! zero-dimensional, the number of common zeros in Z_p^n is bounded by the
//! sum of the local dimensions at the F_p-rational points, which is at
//! most the full quotient dimension.

use crate::fppoly::{self, FpError, FpIdeal, FpPoly};
use crate::monomial::MonomialOrder;
use crate::padic::Valuation;
use crate::rseries::ApproxSeries;
use crate::saturation::SaturationChain;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_POINT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZeroBoundError {
    #[error("series must be in one variable, got {0}")]
    NotOneVariable(usize),
    #[error("zero polynomial part: the bound is indeterminate at this precision")]
    ZeroPolynomial,
}

/// Strassmann's bound for a one-variable series: the largest index
/// attaining the minimal coefficient valuation. Sound at finite precision
/// because coefficients hidden in O(p^N) have valuation >= N > M.
pub fn strassmann_one_var(f: &ApproxSeries) -> Result<u32, ZeroBoundError> {
    if f.nvars() != 1 {
        return Err(ZeroBoundError::NotOneVariable(f.nvars()));
    }
    let m = match f.content_valuation() {
        Valuation::Exact(m) => m,
        Valuation::AtLeast(_) => return Err(ZeroBoundError::ZeroPolynomial),
    };
    let mut best = 0u32;
    for (mono, _) in f.terms() {
        let v = f.coefficient(mono).valuation();
        if v == Valuation::Exact(m) {
            best = best.max(mono.0[0]);
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FinitenessVerdict {
    /// The reduction is zero-dimensional (or empty): finitely many zeros,
    /// bound valid.
    FiniteCertified,
    /// This ideal's reduction is positive-dimensional; the theorem does
    /// not apply to THIS generating set (only the saturation decides
    /// finiteness).
    NotFiniteThisIdeal,
    /// Budget exceeded or no level certified.
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroBoundReport {
    pub verdict: FinitenessVerdict,
    /// Krull dimension of the reduction quotient (-1 for empty variety).
    pub krull_dim: i64,
    /// dim_k of the quotient when zero-dimensional — the coarse bound.
    pub quotient_dim: Option<u64>,
    /// F_p-rational points of the reduction with their local dimensions.
    pub points: Vec<(Vec<u64>, u64)>,
    /// Sum of local dimensions: the sharp bound on the number of zeros.
    pub bound: u64,
    /// Chain level this report was computed from, when applicable.
    pub level: Option<u32>,
}

/// The multivariate bound for one reduction ideal.
pub fn multivariate_bound(
    reductions: Vec<FpPoly>,
    p: u64,
    nvars: usize,
    order: MonomialOrder,
    point_budget: u128,
) -> ZeroBoundReport {
    let mut ideal = FpIdeal::new(p, nvars, reductions);
    let dim = fppoly::quotient_dimension(&mut ideal, order);
    if dim.krull > 0 {
        return ZeroBoundReport {
            verdict: FinitenessVerdict::NotFiniteThisIdeal,
            krull_dim: dim.krull,
            quotient_dim: None,
            points: Vec::new(),
            bound: 0,
            level: None,
        };
    }
    // dimension 0 or empty variety
    let points = match fppoly::rational_points(&mut ideal, order, point_budget) {
        Ok(pts) => pts,
        Err(FpError::BudgetExceeded(_)) => {
            return ZeroBoundReport {
                verdict: FinitenessVerdict::Unknown,
                krull_dim: dim.krull,
                quotient_dim: dim.dim_k,
                points: Vec::new(),
                bound: 0,
                level: None,
            }
        }
        Err(_) => unreachable!("dimension was checked"),
    };
    let mut with_dims = Vec::with_capacity(points.len());
    let mut bound = 0u64;
    for z in points {
        let d = fppoly::local_dimension(&mut ideal, &z, order).expect("point is a zero");
        bound += d;
        with_dims.push((z, d));
    }
    ZeroBoundReport {
        verdict: FinitenessVerdict::FiniteCertified,
        krull_dim: dim.krull,
        quotient_dim: dim.dim_k,
        points: with_dims,
        bound,
        level: None,
    }
}

/// Apply the multivariate bound level by level and return the first
/// finite-certified report. Every level is sound (all I_l share their zero
/// set); deeper levels can only sharpen the reduction.
pub fn bound_from_chain(
    chain: &SaturationChain,
    order: MonomialOrder,
    point_budget: u128,
) -> ZeroBoundReport {
    let mut last = None;
    for level in &chain.levels {
        let mut report = multivariate_bound(
            level.reductions.clone(),
            chain.p,
            chain.nvars,
            order,
            point_budget,
        );
        report.level = Some(level.level);
        if report.verdict == FinitenessVerdict::FiniteCertified {
            return report;
        }
        last = Some(report);
    }
    let mut report = last.expect("chain has at least one level");
    report.verdict = FinitenessVerdict::Unknown;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rseries::{ApproxIdeal, DEFAULT_DEGREE_CAP};
    use crate::saturation::run_chain;

    const P: u64 = 5;
    const ORD: MonomialOrder = MonomialOrder::GrevLex;

    fn series(nvars: usize, prec: u32, terms: &[(&[u32], i64)]) -> ApproxSeries {
        ApproxSeries::from_terms(P, nvars, prec, terms)
    }

    fn fp(nvars: usize, terms: &[(&[u32], i64)]) -> FpPoly {
        FpPoly::from_terms(P, nvars, terms)
    }

    #[test]
    fn strassmann_examples() {
        // x^2 - 5 + O(5^4): M = 0 attained at n = 2
        let f = series(1, 4, &[(&[2], 1), (&[0], -5)]);
        assert_eq!(strassmann_one_var(&f), Ok(2));
        // 5 + x + 25 x^2 + O(5^4): M = 0 at n = 1
        let g = series(1, 4, &[(&[0], 5), (&[1], 1), (&[2], 25)]);
        assert_eq!(strassmann_one_var(&g), Ok(1));
        // zero polynomial: indeterminate
        assert_eq!(
            strassmann_one_var(&ApproxSeries::zero(P, 1, 3)),
            Err(ZeroBoundError::ZeroPolynomial)
        );
    }

    #[test]
    fn strassmann_scaling_invariance() {
        let f = series(1, 6, &[(&[0], 10), (&[1], 3), (&[3], 75)]);
        let scaled = f.mul_p_pow(2);
        let a = strassmann_one_var(&f.normalize().unwrap()).unwrap();
        let b = strassmann_one_var(&scaled.normalize().unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn multivariate_examples() {
        // (t2 + 1, t1^2 - t1): points (0,4), (1,4), each multiplicity 1
        let r = multivariate_bound(
            vec![
                fp(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
                fp(2, &[(&[2, 0], 1), (&[1, 0], -1)]),
            ],
            P,
            2,
            ORD,
            DEFAULT_POINT_BUDGET,
        );
        assert_eq!(r.verdict, FinitenessVerdict::FiniteCertified);
        assert_eq!(r.points, vec![(vec![0, 4], 1), (vec![1, 4], 1)]);
        assert_eq!(r.bound, 2);
        assert_eq!(r.quotient_dim, Some(2));

        // (x^2, xy, y^2): one point of multiplicity 3
        let r2 = multivariate_bound(
            vec![
                fp(2, &[(&[2, 0], 1)]),
                fp(2, &[(&[1, 1], 1)]),
                fp(2, &[(&[0, 2], 1)]),
            ],
            P,
            2,
            ORD,
            DEFAULT_POINT_BUDGET,
        );
        assert_eq!(r2.bound, 3);
        assert_eq!(r2.points.len(), 1);

        // (x^2 + 1, y): two simple points, coarse bound 2
        let r3 = multivariate_bound(
            vec![fp(2, &[(&[2, 0], 1), (&[0, 0], 1)]), fp(2, &[(&[0, 1], 1)])],
            P,
            2,
            ORD,
            DEFAULT_POINT_BUDGET,
        );
        assert_eq!(r3.bound, 2);
        assert_eq!(r3.quotient_dim, Some(2));

        // positive-dimensional reduction
        let r4 = multivariate_bound(
            vec![fp(2, &[(&[0, 1], 1), (&[0, 0], 1)])],
            P,
            2,
            ORD,
            DEFAULT_POINT_BUDGET,
        );
        assert_eq!(r4.verdict, FinitenessVerdict::NotFiniteThisIdeal);
    }

    #[test]
    fn bound_is_at_most_quotient_dim() {
        let r = multivariate_bound(
            vec![fp(2, &[(&[2, 0], 1), (&[0, 0], 2)]), fp(2, &[(&[0, 1], 1)])],
            P,
            2,
            ORD,
            DEFAULT_POINT_BUDGET,
        );
        // x^2 + 2 has no roots mod 5: B = 0 < dim_k = 2
        assert_eq!(r.bound, 0);
        assert!(r.bound <= r.quotient_dim.unwrap());
    }

    #[test]
    fn chain_bound_example() {
        // (x^2 + 5y, xy) at N = 4: level 0 not finite, level 1 gives B = 3
        let chain = run_chain(
            &ApproxIdeal::new(vec![
                series(2, 4, &[(&[2, 0], 1), (&[0, 1], 5)]),
                series(2, 4, &[(&[1, 1], 1)]),
            ]),
            2,
            ORD,
            DEFAULT_DEGREE_CAP,
        )
        .unwrap();
        let report = bound_from_chain(&chain, ORD, DEFAULT_POINT_BUDGET);
        assert_eq!(report.verdict, FinitenessVerdict::FiniteCertified);
        assert_eq!(report.level, Some(1));
        assert_eq!(report.bound, 3);
    }

    #[test]
    fn trivial_chain_bound_is_zero() {
        let chain = run_chain(
            &ApproxIdeal::new(vec![series(1, 3, &[(&[0], 5)])]),
            2,
            ORD,
            DEFAULT_DEGREE_CAP,
        )
        .unwrap();
        let report = bound_from_chain(&chain, ORD, DEFAULT_POINT_BUDGET);
        assert_eq!(report.verdict, FinitenessVerdict::FiniteCertified);
        assert_eq!(report.bound, 0);
        assert!(report.points.is_empty());
    }

    #[test]
    fn one_variable_consistency_with_coarse_bound() {
        // for one variable the coarse bound dim_k equals the Strassmann
        // bound after normalization
        let f = series(1, 5, &[(&[0], 15), (&[1], 5), (&[2], 10), (&[3], 50)]);
        let n = f.normalize().unwrap();
        let s = strassmann_one_var(&n).unwrap();
        let chain = run_chain(
            &ApproxIdeal::new(vec![n.clone()]),
            0,
            ORD,
            DEFAULT_DEGREE_CAP,
        )
        .unwrap();
        let report = bound_from_chain(&chain, ORD, DEFAULT_POINT_BUDGET);
        assert_eq!(report.quotient_dim, Some(s as u64));
    }
}

//! The p-saturation chain I = I_0 ⊆ I_1 ⊆ ... computed level by level from
//! syzygies of the mod-p reductions, with one unit of precision lost per
//! level; redundancy pruning through the exact-combination ledger;
//! stopping certificates; and the exact-polynomial saturation used when
//! generators are honest polynomials.

use crate::fppoly::{self, FpIdeal, FpPoly};
use crate::monomial::MonomialOrder;
use crate::rseries::{ApproxIdeal, ApproxSeries, SeriesError};
use crate::zploc::{self, ZPoly, ZVec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("precision exhausted: a generator has precision {0} < 2")]
    PrecisionExhausted(u32),
    #[error("max_level {max_level} must stay below the minimum input precision {precision}")]
    MaxLevelTooDeep { max_level: u32, precision: u32 },
    #[error("series arithmetic failed: {0}")]
    Series(#[from] SeriesError),
    #[error("exact saturation did not stabilize within {0} rounds")]
    RoundLimit(u32),
}

/// One generator of a chain level, together with the exact integer
/// polynomial ledger expressing it as `p^{-level} * sum_i ledger[i] *
/// (original generator i)`, and its provenance for pruning tie-breaks.
#[derive(Clone, Debug)]
pub struct ChainGenerator {
    pub series: ApproxSeries,
    pub ledger: ZVec,
    pub origin_level: u32,
    pub origin_index: usize,
}

#[derive(Clone, Debug)]
pub struct ChainLevel {
    pub level: u32,
    pub generators: Vec<ChainGenerator>,
    pub reductions: Vec<FpPoly>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum CertificateKind {
    /// dim(k[x]/I_l reduced) = n - r with r generators: I_l is the
    /// saturation.
    DimensionCriterion,
    /// The reduction reaches the unit ideal (or its dimension drops below
    /// n - r): the saturation is the whole ring; no zeros.
    TrivialIdeal,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SaturationCertificate {
    pub kind: CertificateKind,
    pub level: u32,
    pub generator_count: usize,
    pub nvars: usize,
    pub krull_dim: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum ChainStatus {
    /// A certificate fired at some level.
    Certified,
    /// Reductions agreed on two consecutive levels. This is NOT a proof of
    /// saturation; it is reported as-is.
    StableUncertified,
    /// Ran out of levels or precision without a certificate.
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct SaturationChain {
    pub p: u64,
    pub nvars: usize,
    pub levels: Vec<ChainLevel>,
    pub status: ChainStatus,
    pub certificate: Option<SaturationCertificate>,
}

impl SaturationChain {
    pub fn reductions_at(&self, level: usize) -> &[FpPoly] {
        &self.levels[level].reductions
    }
}

/// Is `s` a Koszul relation `c * (e_i f_j - e_j f_i)` of the reductions?
/// Those always lift (h_i f_j - h_j f_i lies in the ideal), so the chain
/// skips them.
fn is_koszul(s: &[FpPoly], reductions: &[FpPoly], p: u64) -> bool {
    let nonzero: Vec<usize> = (0..s.len()).filter(|&k| !s[k].is_zero()).collect();
    if nonzero.len() != 2 {
        return false;
    }
    let (i, j) = (nonzero[0], nonzero[1]);
    let (fi, fj) = (&reductions[i], &reductions[j]);
    if fi.is_zero() || fj.is_zero() {
        return false;
    }
    // candidate scalar from leading coefficients
    let ord = MonomialOrder::GrevLex;
    let (ms, cs) = match s[i].leading_term(ord) {
        Some(t) => t,
        None => return false,
    };
    let (mf, cf) = match fj.leading_term(ord) {
        Some(t) => t,
        None => return false,
    };
    if ms != mf {
        return false;
    }
    let c = (cs as u128 * fppoly::invm(cf, p) as u128 % p as u128) as u64;
    s[i] == fj.scale(c) && s[j] == fi.scale(c).neg()
}

/// One chain step: syzygies of the reductions are lifted with canonical
/// [0, p) integer-polynomial coefficients and divided by p, producing the
/// next level's new generators one precision lower.
pub fn saturation_step(
    generators: &[ChainGenerator],
    p: u64,
    nvars: usize,
    order: MonomialOrder,
    degree_cap: u32,
    next_level: u32,
) -> Result<Vec<ChainGenerator>, SatError> {
    for g in generators {
        if g.series.precision() < 2 {
            return Err(SatError::PrecisionExhausted(g.series.precision()));
        }
    }
    let reductions: Vec<FpPoly> = generators.iter().map(|g| g.series.reduce_mod_p()).collect();
    let syz = fppoly::syzygies(&reductions, p, nvars, order);

    let mut out: Vec<ChainGenerator> = generators
        .iter()
        .map(|g| ChainGenerator {
            series: g.series.clone(),
            // renormalize the ledger to the new level: one more power of p
            ledger: g
                .ledger
                .iter()
                .map(|b| b.scale(&num_bigint::BigInt::from(p)))
                .collect(),
            origin_level: g.origin_level,
            origin_index: g.origin_index,
        })
        .collect();

    let mut new_index = 0usize;
    for s in &syz.vectors {
        if is_koszul(s, &reductions, p) {
            continue;
        }
        let lifts: Vec<ZPoly> = s.iter().map(ZPoly::lift_fp).collect();
        // sum_i lift_i * f_i, then exact division by p
        let mut acc: Option<ApproxSeries> = None;
        for (lift, g) in lifts.iter().zip(generators) {
            if lift.is_zero() {
                continue;
            }
            let term = g.series.mul_exact_poly(&lift.terms, degree_cap)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        let sum = match acc {
            Some(a) => a,
            None => continue,
        };
        if sum.is_zero() {
            // the lifted combination vanished identically at this
            // precision; its division contributes nothing visible
            continue;
        }
        let gs = sum.divide_by_p()?;
        if gs.is_zero() {
            continue;
        }
        // ledger of the new generator: sum_i lift_i * B_i at the previous
        // level's normalization
        let r = generators[0].ledger.len();
        let mut ledger: ZVec = Vec::with_capacity(r);
        for k in 0..r {
            let mut e = ZPoly::zero(generators[0].ledger[k].nvars);
            for (lift, g) in lifts.iter().zip(generators) {
                if !lift.is_zero() && !g.ledger[k].is_zero() {
                    e = e.add(&lift.mul(&g.ledger[k]));
                }
            }
            ledger.push(e);
        }
        out.push(ChainGenerator {
            series: gs,
            ledger,
            origin_level: next_level,
            origin_index: new_index,
        });
        new_index += 1;
    }
    Ok(out)
}

/// Drop generators whose ledger vector lies in the Z_(p)[x]-module
/// generated by the other ledgers; the survivors generate the same ideal.
/// Candidates are examined newest-first so generators introduced at lower
/// levels (then lower index) are preferred.
pub fn prune_generators(
    generators: Vec<ChainGenerator>,
    p: u64,
    order: MonomialOrder,
) -> Vec<ChainGenerator> {
    let mut kept = generators;
    let mut candidates: Vec<(u32, usize)> = kept
        .iter()
        .map(|g| (g.origin_level, g.origin_index))
        .collect();
    candidates.sort();
    candidates.reverse();
    for key in candidates {
        if kept.len() == 1 {
            break;
        }
        let pos = match kept
            .iter()
            .position(|g| (g.origin_level, g.origin_index) == key)
        {
            Some(i) => i,
            None => continue,
        };
        let others: Vec<ZVec> = kept
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, g)| g.ledger.clone())
            .collect();
        let basis = zploc::zvec_groebner(&others, p, order);
        if zploc::zvec_contains(&basis, &kept[pos].ledger, p, order) {
            kept.remove(pos);
        }
    }
    kept
}

fn level_certificate(
    reductions: &[FpPoly],
    p: u64,
    nvars: usize,
    level: u32,
    order: MonomialOrder,
) -> Option<SaturationCertificate> {
    let r = reductions.len();
    let mut ideal = FpIdeal::new(p, nvars, reductions.to_vec());
    let dim = fppoly::quotient_dimension(&mut ideal, order);
    // unit reduction: the saturation is the whole ring
    if dim.krull == -1 {
        return Some(SaturationCertificate {
            kind: CertificateKind::TrivialIdeal,
            level,
            generator_count: r,
            nvars,
            krull_dim: dim.krull,
        });
    }
    let target = nvars as i64 - r as i64;
    if dim.krull < target {
        return Some(SaturationCertificate {
            kind: CertificateKind::TrivialIdeal,
            level,
            generator_count: r,
            nvars,
            krull_dim: dim.krull,
        });
    }
    if dim.krull == target {
        return Some(SaturationCertificate {
            kind: CertificateKind::DimensionCriterion,
            level,
            generator_count: r,
            nvars,
            krull_dim: dim.krull,
        });
    }
    None
}

/// Run the chain up to `max_level`, stopping early on a certificate or on
/// stabilization of the reduction ideals (reported uncertified).
pub fn run_chain(
    ideal: &ApproxIdeal,
    max_level: u32,
    order: MonomialOrder,
    degree_cap: u32,
) -> Result<SaturationChain, SatError> {
    let p = ideal.p;
    let nvars = ideal.nvars;
    let min_prec = ideal.min_precision();
    if max_level >= min_prec {
        return Err(SatError::MaxLevelTooDeep {
            max_level,
            precision: min_prec,
        });
    }

    let mut generators: Vec<ChainGenerator> = ideal
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut ledger: ZVec = vec![ZPoly::zero(nvars); ideal.generators.len()];
            ledger[i] = ZPoly::constant(nvars, 1);
            ChainGenerator {
                series: g.clone(),
                ledger,
                origin_level: 0,
                origin_index: i,
            }
        })
        .collect();
    generators = prune_generators(generators, p, order);

    let mut levels = Vec::new();
    let reductions: Vec<FpPoly> = generators.iter().map(|g| g.series.reduce_mod_p()).collect();
    let mut certificate = level_certificate(&reductions, p, nvars, 0, order);
    levels.push(ChainLevel {
        level: 0,
        generators: generators.clone(),
        reductions,
    });

    let mut status = if certificate.is_some() {
        ChainStatus::Certified
    } else {
        ChainStatus::Exhausted
    };

    if certificate.is_none() {
        for l in 1..=max_level {
            if generators.iter().any(|g| g.series.precision() < 2) {
                status = ChainStatus::Exhausted;
                break;
            }
            generators = saturation_step(&generators, p, nvars, order, degree_cap, l)?;
            generators = prune_generators(generators, p, order);
            let reductions: Vec<FpPoly> =
                generators.iter().map(|g| g.series.reduce_mod_p()).collect();
            certificate = level_certificate(&reductions, p, nvars, l, order);
            let stabilized = {
                let prev = &levels.last().unwrap().reductions;
                let mut a = FpIdeal::new(p, nvars, prev.clone());
                let mut b = FpIdeal::new(p, nvars, reductions.clone());
                a.same_ideal(&mut b, order)
            };
            levels.push(ChainLevel {
                level: l,
                generators: generators.clone(),
                reductions,
            });
            if certificate.is_some() {
                status = ChainStatus::Certified;
                break;
            }
            if stabilized {
                status = ChainStatus::StableUncertified;
                break;
            }
        }
    }

    Ok(SaturationChain {
        p,
        nvars,
        levels,
        status,
        certificate,
    })
}

/// Outcome of the exact-polynomial saturation test.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftingOutcome {
    Saturated,
    /// A syzygy of the reductions that does not lift to an exact syzygy.
    NotSaturated { witness: Vec<FpPoly> },
}

/// Decide whether the ideal generated by exact polynomials over Z_(p) is
/// saturated: every syzygy of the reductions must lift to an exact syzygy,
/// which holds iff `(sum_i lift(s_i) g_i)/p` lies back in the ideal.
pub fn lifting_check(gens: &[ZPoly], p: u64, order: MonomialOrder) -> LiftingOutcome {
    let nvars = gens.first().map(|g| g.nvars).unwrap_or(0);
    let reductions: Vec<FpPoly> = gens.iter().map(|g| g.reduce_mod_p(p)).collect();
    let syz = fppoly::syzygies(&reductions, p, nvars, order);
    let basis = zploc::zp_groebner(gens, p, order);
    for s in &syz.vectors {
        let mut h = ZPoly::zero(nvars);
        for (sk, g) in s.iter().zip(gens) {
            if !sk.is_zero() {
                h = h.add(&ZPoly::lift_fp(sk).mul(g));
            }
        }
        debug_assert!(h.reduce_mod_p(p).is_zero());
        let hp = h.exact_div_p(p);
        if !zploc::zp_contains(&basis, &hp, p, order) {
            return LiftingOutcome::NotSaturated { witness: s.clone() };
        }
    }
    LiftingOutcome::Saturated
}

/// Saturate an exact polynomial ideal with respect to p by iterating the
/// colon-by-p step until every reduction syzygy lifts. Terminates by
/// Noetherianity; `round_limit` is a safety stop.
pub fn exact_saturation(
    gens: &[ZPoly],
    p: u64,
    order: MonomialOrder,
    round_limit: u32,
) -> Result<(Vec<ZPoly>, u32), SatError> {
    let nvars = gens.first().map(|g| g.nvars).unwrap_or(0);
    let mut current: Vec<ZPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.normalize_unit_content(p, order))
        .collect();
    for round in 0..round_limit {
        let reductions: Vec<FpPoly> = current.iter().map(|g| g.reduce_mod_p(p)).collect();
        let syz = fppoly::syzygies(&reductions, p, nvars, order);
        let basis = zploc::zp_groebner(&current, p, order);
        let mut added = Vec::new();
        for s in &syz.vectors {
            let mut h = ZPoly::zero(nvars);
            for (sk, g) in s.iter().zip(&current) {
                if !sk.is_zero() {
                    h = h.add(&ZPoly::lift_fp(sk).mul(g));
                }
            }
            let hp = h.exact_div_p(p);
            if !zploc::zp_contains(&basis, &hp, p, order) {
                added.push(hp.normalize_unit_content(p, order));
            }
        }
        if added.is_empty() {
            return Ok((current, round));
        }
        current.extend(added);
        // keep the generator list tame: drop members of the ideal spanned
        // by the others, newest first
        let mut i = current.len();
        while i > 0 {
            i -= 1;
            if current.len() == 1 {
                break;
            }
            let mut others = current.clone();
            let cand = others.remove(i);
            let b = zploc::zp_groebner(&others, p, order);
            if zploc::zp_contains(&b, &cand, p, order) {
                current.remove(i);
            }
        }
    }
    Err(SatError::RoundLimit(round_limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rseries::DEFAULT_DEGREE_CAP;
    use num_bigint::BigInt;

    const P: u64 = 5;
    const ORD: MonomialOrder = MonomialOrder::GrevLex;

    fn series(nvars: usize, prec: u32, terms: &[(&[u32], i64)]) -> ApproxSeries {
        ApproxSeries::from_terms(P, nvars, prec, terms)
    }

    fn fp(nvars: usize, terms: &[(&[u32], i64)]) -> FpPoly {
        FpPoly::from_terms(P, nvars, terms)
    }

    fn chain_of(gens: Vec<ApproxSeries>, max_level: u32) -> SaturationChain {
        run_chain(
            &ApproxIdeal::new(gens),
            max_level,
            ORD,
            DEFAULT_DEGREE_CAP,
        )
        .unwrap()
    }

    fn reduction_ideal_eq(red: &[FpPoly], expected: Vec<FpPoly>, nvars: usize) -> bool {
        let mut a = FpIdeal::new(P, nvars, red.to_vec());
        let mut b = FpIdeal::new(P, nvars, expected);
        a.same_ideal(&mut b, ORD)
    }

    #[test]
    fn step_adds_y_squared() {
        // G0 = {x^2 + 5y, xy} at N = 4: level-1 reductions generate
        // (x^2, xy, y^2)
        let chain = chain_of(
            vec![
                series(2, 4, &[(&[2, 0], 1), (&[0, 1], 5)]),
                series(2, 4, &[(&[1, 1], 1)]),
            ],
            2,
        );
        assert!(chain.levels.len() >= 2);
        assert!(reduction_ideal_eq(
            &chain.levels[1].reductions,
            vec![fp(2, &[(&[2, 0], 1)]), fp(2, &[(&[1, 1], 1)]), fp(2, &[(&[0, 2], 1)])],
            2
        ));
        // generators produced by division carry exactly one precision less
        for g in &chain.levels[1].generators {
            if g.origin_level == 1 {
                assert_eq!(g.series.precision(), 3);
            }
        }
    }

    #[test]
    fn step_divides_p_multiple_generator() {
        // a generator divisible by p spawns its exact p-division via the
        // unit syzygy, and pruning removes the original
        let chain = chain_of(
            vec![
                series(2, 3, &[(&[1, 0], 5)]),
                series(2, 3, &[(&[0, 1], 1)]),
            ],
            1,
        );
        let l1 = &chain.levels.last().unwrap();
        // x + O(5^2) must be present, 5x + O(5^3) pruned away
        assert!(l1
            .generators
            .iter()
            .any(|g| g.series == series(2, 2, &[(&[1, 0], 1)])));
        assert!(!l1
            .generators
            .iter()
            .any(|g| g.series == series(2, 3, &[(&[1, 0], 5)])));
    }

    #[test]
    fn regular_sequence_stops_immediately() {
        // (x, y): dimension criterion fires at level 0
        let chain = chain_of(
            vec![series(2, 3, &[(&[1, 0], 1)]), series(2, 3, &[(&[0, 1], 1)])],
            2,
        );
        assert_eq!(chain.status, ChainStatus::Certified);
        let cert = chain.certificate.unwrap();
        assert_eq!(cert.kind, CertificateKind::DimensionCriterion);
        assert_eq!(cert.level, 0);
    }

    #[test]
    fn koszul_only_step_changes_nothing() {
        // force one step on (x, y) and check the reduction ideal is stable
        let gens = vec![
            ChainGenerator {
                series: series(2, 3, &[(&[1, 0], 1)]),
                ledger: vec![ZPoly::constant(2, 1), ZPoly::zero(2)],
                origin_level: 0,
                origin_index: 0,
            },
            ChainGenerator {
                series: series(2, 3, &[(&[0, 1], 1)]),
                ledger: vec![ZPoly::zero(2), ZPoly::constant(2, 1)],
                origin_level: 0,
                origin_index: 1,
            },
        ];
        let next = saturation_step(&gens, P, 2, ORD, DEFAULT_DEGREE_CAP, 1).unwrap();
        let red: Vec<FpPoly> = next.iter().map(|g| g.series.reduce_mod_p()).collect();
        assert!(reduction_ideal_eq(
            &red,
            vec![fp(2, &[(&[1, 0], 1)]), fp(2, &[(&[0, 1], 1)])],
            2
        ));
    }

    #[test]
    fn trivial_ideal_certificate() {
        // I = (p + O(p^3)): level 1 contains 1
        let chain = chain_of(vec![series(1, 3, &[(&[0], 5)])], 2);
        assert_eq!(chain.status, ChainStatus::Certified);
        let cert = chain.certificate.unwrap();
        assert_eq!(cert.kind, CertificateKind::TrivialIdeal);
        assert_eq!(cert.level, 1);
    }

    #[test]
    fn max_level_must_fit_precision() {
        let ideal = ApproxIdeal::new(vec![series(1, 3, &[(&[1], 1)])]);
        assert!(matches!(
            run_chain(&ideal, 3, ORD, DEFAULT_DEGREE_CAP),
            Err(SatError::MaxLevelTooDeep { .. })
        ));
    }

    #[test]
    fn precision_accounting_along_levels() {
        let chain = chain_of(
            vec![
                series(2, 4, &[(&[2, 0], 1), (&[0, 1], 5)]),
                series(2, 4, &[(&[1, 1], 1)]),
            ],
            2,
        );
        for level in &chain.levels {
            for g in &level.generators {
                assert!(g.series.precision() >= 4 - level.level);
            }
        }
    }

    #[test]
    fn lifting_check_example_saturated() {
        // (x^2 + 5y, xy, y^2) is saturated
        let gens = vec![
            ZPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 1], 5)]),
            ZPoly::from_terms(2, &[(&[1, 1], 1)]),
            ZPoly::from_terms(2, &[(&[0, 2], 1)]),
        ];
        assert_eq!(lifting_check(&gens, P, ORD), LiftingOutcome::Saturated);
    }

    #[test]
    fn lifting_check_detects_unsaturated() {
        // (x^2 + 5y, xy) is not saturated: (y, -x) does not lift
        let gens = vec![
            ZPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 1], 5)]),
            ZPoly::from_terms(2, &[(&[1, 1], 1)]),
        ];
        match lifting_check(&gens, P, ORD) {
            LiftingOutcome::NotSaturated { witness } => {
                assert_eq!(witness.len(), 2);
            }
            LiftingOutcome::Saturated => panic!("expected a witness"),
        }
    }

    #[test]
    fn lifting_check_koszul_only() {
        let gens = vec![
            ZPoly::from_terms(2, &[(&[1, 0], 1)]),
            ZPoly::from_terms(2, &[(&[0, 1], 1)]),
        ];
        assert_eq!(lifting_check(&gens, P, ORD), LiftingOutcome::Saturated);
    }

    #[test]
    fn exact_saturation_of_example() {
        // saturating (x^2 + 5y, xy) must produce an ideal containing y^2
        let gens = vec![
            ZPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 1], 5)]),
            ZPoly::from_terms(2, &[(&[1, 1], 1)]),
        ];
        let (sat, _) = exact_saturation(&gens, P, ORD, 16).unwrap();
        let basis = zploc::zp_groebner(&sat, P, ORD);
        assert!(zploc::zp_contains(
            &basis,
            &ZPoly::from_terms(2, &[(&[0, 2], 1)]),
            P,
            ORD
        ));
        assert_eq!(lifting_check(&sat, P, ORD), LiftingOutcome::Saturated);
    }

    #[test]
    fn chain_zero_sets_agree_at_integer_points() {
        // every level vanishes where the input vanishes: evaluate at a
        // known common zero of the input ideal
        let chain = chain_of(
            vec![
                series(2, 4, &[(&[2, 0], 1), (&[0, 1], 5)]),
                series(2, 4, &[(&[1, 1], 1)]),
            ],
            2,
        );
        // (0, 0) is a zero of (x^2 + 5y, xy)
        let zero = [BigInt::from(0), BigInt::from(0)];
        for level in &chain.levels {
            for g in &level.generators {
                assert!(g.series.eval(&zero).is_zero_residue());
            }
        }
    }
}

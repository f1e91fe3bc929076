//! The span-improved filtration on degree-m sections and its step profile.
//!
//! Each stage (k, w) starts from the monomial space with u−w factors from
//! row k and w from row k+1. For every support point whose multiplicity is
//! not forced to grow (cases II-IV) we adjoin the cheapest monomial space of
//! no larger weight built from the surrounding jump rows (s, t); the span
//! then has smaller base-locus multiplicity at that point. Codimension is
//! bounded by the sum of per-point multiplicities; the exact value is
//! available through the inclusion-exclusion oracle.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multfilt::{terminal_dim, total_dim, JumpCase, MultFiltration};
use crate::rational::{ceil_int, int, Rat};
use crate::span::DivisorSeries;

/// A monomial space (V_lo^(a/v) V_hi^(b/v) V_0)^v recorded by its base-locus
/// multiplicities. Row indices refer to the degree-1 filtration.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSpace {
    pub lo_row: usize,
    pub hi_row: usize,
    /// v·(u−W) factors from `lo_row`.
    pub exp_lo: u64,
    /// v·W factors from `hi_row`.
    pub exp_hi: u64,
    /// v ambient factors from row 0.
    pub exp_ambient: u64,
    pub mult: Vec<u64>,
    pub weight: Rat,
}

impl MonomialSpace {
    /// Multiplicity sum, i.e. the codimension of this single space under the
    /// degree hypothesis.
    pub fn codim(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// Pretty form matching the factor counts, e.g. `(V_1^2 V_3^1 V_0)^5`.
    pub fn notation(&self) -> String {
        let v = self.exp_ambient;
        format!(
            "(V_{}^{} V_{}^{} V_0)^{}",
            self.lo_row,
            self.exp_lo / v,
            self.hi_row,
            self.exp_hi / v,
            v
        )
    }

    pub fn to_series(&self, m: u64) -> DivisorSeries {
        DivisorSeries::new(self.mult.clone(), m, self.weight.clone())
    }
}

/// One stage of the span-improved filtration.
#[derive(Debug, Clone)]
pub struct SpanStage {
    pub k: usize,
    pub w: u64,
    pub weight: Rat,
    /// The starting space followed by the per-point improvement spaces,
    /// repeats left in place.
    pub members: Vec<MonomialSpace>,
    /// Per-point multiplicity contributions x(k,w,i).
    pub contrib: Vec<u64>,
    /// Σ_i contrib — an upper bound for the true codimension of the span.
    pub codim_bound: u64,
    /// Oracle codimension, when computed.
    pub codim_exact: Option<u64>,
}

/// The full profile: u stages per kept row plus the terminal stage.
#[derive(Debug, Clone)]
pub struct SpanProfile {
    pub stages: Vec<SpanStage>,
    pub terminal_codim: u64,
    pub terminal_weight: Rat,
    pub terminal_dim: i64,
    pub total_dim: i64,
}

/// Smallest integer W for which the space built from the pivot rows (s, t)
/// of point `i` weighs no more than stage (k, w):
/// W = ⌈(u(r_s − r_k) + w(r_k − r_{k+1})) / (r_s − r_t)⌉.
pub fn pivot_exponent(mf: &MultFiltration, k: usize, w: u64, i: usize) -> Result<u64> {
    let info = mf.case_at(k, i)?;
    if !info.case.has_pivots() {
        return Err(Error::WUndefined(info.case.name()));
    }
    let (s, t) = (info.s.expect("pivot"), info.t.expect("pivot"));
    let rs = mf.r(s);
    let rt = mf.r(t);
    if rs == rt {
        return Err(Error::DegenerateBracket);
    }
    let num = int(mf.u as i64) * (rs - mf.r(k)) + int(w as i64) * (mf.r(k) - mf.r(k + 1));
    let val = num / (rs - rt);
    let w_min = ceil_int(&val);
    debug_assert!(w_min >= num_bigint::BigInt::from(0));
    Ok(u64::try_from(&w_min).expect("exponent fits"))
}

fn base_space(mf: &MultFiltration, k: usize, w: u64) -> MonomialSpace {
    let v = mf.v;
    let q = mf.base.ctx.points;
    let mult: Vec<u64> =
        (0..q).map(|i| v * (mf.u - w) * mf.c(k, i) + v * w * mf.c(k + 1, i)).collect();
    MonomialSpace {
        lo_row: mf.rows[k],
        hi_row: mf.rows[k + 1],
        exp_lo: v * (mf.u - w),
        exp_hi: v * w,
        exp_ambient: v,
        mult,
        weight: mf.stage_weight(k, w),
    }
}

fn pivot_space(mf: &MultFiltration, s: usize, t: usize, exp: u64, weight: Rat) -> MonomialSpace {
    let v = mf.v;
    let q = mf.base.ctx.points;
    let mult: Vec<u64> = (0..q).map(|i| v * (mf.u - exp) * mf.c(s, i) + v * exp * mf.c(t, i)).collect();
    MonomialSpace {
        lo_row: mf.rows[s],
        hi_row: mf.rows[t],
        exp_lo: v * (mf.u - exp),
        exp_hi: v * exp,
        exp_ambient: v,
        mult,
        weight,
    }
}

impl SpanProfile {
    pub fn build(mf: &MultFiltration) -> Result<Self> {
        let ntilde = mf.last_row();
        let q = mf.base.ctx.points;
        let v = mf.v;
        let mut stages = Vec::with_capacity(ntilde * mf.u as usize);
        for k in 0..ntilde {
            for w in 0..mf.u {
                let base = base_space(mf, k, w);
                let weight = base.weight.clone();
                let mut members = vec![base];
                let mut contrib = vec![0u64; q];
                if (k, w) != (0, 0) {
                    for i in 0..q {
                        let info = mf.case_at(k, i)?;
                        match info.case {
                            JumpCase::Zero => {}
                            JumpCase::I => {
                                contrib[i] = members[0].mult[i];
                            }
                            _ => {
                                let exp = pivot_exponent(mf, k, w, i)?;
                                let (s, t) = (info.s.unwrap(), info.t.unwrap());
                                contrib[i] =
                                    v * (mf.u - exp) * mf.c(s, i) + v * exp * mf.c(t, i);
                                members.push(pivot_space(mf, s, t, exp, weight.clone()));
                            }
                        }
                    }
                }
                let codim_bound = contrib.iter().sum();
                stages.push(SpanStage {
                    k,
                    w,
                    weight,
                    members,
                    contrib,
                    codim_bound,
                    codim_exact: None,
                });
            }
        }
        let uv = mf.u * mf.v;
        let terminal_codim = uv * mf.base.degree(mf.base.last_stage());
        Ok(SpanProfile {
            stages,
            terminal_codim,
            terminal_weight: mf.rtilde.last().unwrap().clone(),
            terminal_dim: terminal_dim(mf),
            total_dim: total_dim(mf),
        })
    }

    /// Fills `codim_exact` on every stage via the inclusion-exclusion oracle.
    pub fn compute_exact_codims(&mut self, m: u64) -> Result<()> {
        for stage in &mut self.stages {
            let list: Vec<DivisorSeries> = stage.members.iter().map(|s| s.to_series(m)).collect();
            stage.codim_exact = Some(crate::span::span_codim_oracle(&list)?);
        }
        Ok(())
    }

    /// Area under the step profile:
    /// Σ weight(k,w)·(codim(k,w+1) − codim(k,w)) + dim·(terminal weight),
    /// where the codim after the last cell stage is the terminal codimension.
    pub fn area_upper_bound(&self) -> Rat {
        let mut area = Rat::zero();
        for (idx, stage) in self.stages.iter().enumerate() {
            let next = self
                .stages
                .get(idx + 1)
                .map_or(self.terminal_codim, |s| s.codim_bound);
            let width = next as i64 - stage.codim_bound as i64;
            area += int(width) * &stage.weight;
        }
        area + int(self.terminal_dim) * &self.terminal_weight
    }

    /// Flattens to the plain staircase (codim, weight) list.
    pub fn step_profile(&self) -> StepProfile {
        StepProfile {
            steps: self.stages.iter().map(|s| (s.codim_bound, s.weight.clone())).collect(),
            terminal_codim: self.terminal_codim,
            terminal_weight: self.terminal_weight.clone(),
            total_dim: self.total_dim,
        }
    }
}

/// A decreasing step function in the codimension × weight plane. Zero-width
/// steps are legal and kept.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile {
    /// Left endpoints (codim_start, weight), weights nonincreasing.
    pub steps: Vec<(u64, Rat)>,
    pub terminal_codim: u64,
    pub terminal_weight: Rat,
    pub total_dim: i64,
}

impl StepProfile {
    pub fn area(&self) -> Rat {
        let mut area = Rat::zero();
        for (idx, (start, weight)) in self.steps.iter().enumerate() {
            let next = self.steps.get(idx + 1).map_or(self.terminal_codim, |s| s.0);
            area += int(next as i64 - *start as i64) * weight;
        }
        area + int(self.total_dim - self.terminal_codim as i64) * &self.terminal_weight
    }
}

/// The no-improvement profile: stage (k, w) keeps the starting space, so its
/// codimension is v((u−w)·deg_k + w·deg_{k+1}). Its left endpoints hug the
/// lower envelope of the scaled filtration points.
pub fn baseline_profile(mf: &MultFiltration) -> StepProfile {
    let v = mf.v;
    let mut steps = Vec::new();
    for k in 0..mf.last_row() {
        for w in 0..mf.u {
            let codim = v * (mf.u - w) * mf.degree(k) + v * w * mf.degree(k + 1);
            steps.push((codim, mf.stage_weight(k, w)));
        }
    }
    StepProfile {
        steps,
        terminal_codim: mf.u * mf.v * mf.base.degree(mf.base.last_stage()),
        terminal_weight: mf.rtilde.last().unwrap().clone(),
        total_dim: total_dim(mf),
    }
}

/// Coefficient of u²v² in the baseline profile area:
/// Σ_k ½(r_k + r_{k+1})(deg_{k+1} − deg_k).
pub fn baseline_leading_coeff(mf: &MultFiltration) -> Rat {
    let mut acc = Rat::zero();
    for k in 0..mf.last_row() {
        let dd = mf.degree(k + 1) as i64 - mf.degree(k) as i64;
        acc += (mf.r(k) + mf.r(k + 1)) * int(dd) / int(2);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfilt::example_mult;
    use crate::rational::rat;
    use crate::span::span_codim_oracle;

    #[test]
    fn pivot_exponents_match_worked_values() {
        let mf = example_mult(3, 5);
        assert_eq!(pivot_exponent(&mf, 1, 1, 0).unwrap(), 2);
        assert_eq!(pivot_exponent(&mf, 1, 1, 1).unwrap(), 1);
        // w = 0 at the start of a case-IV run has zero numerator
        assert_eq!(pivot_exponent(&mf, 1, 0, 1).unwrap(), 0);
        // undefined where the multiplicity is still zero
        assert!(pivot_exponent(&mf, 0, 1, 2).is_err());
    }

    #[test]
    fn golden_stage_table() {
        let mf = example_mult(3, 5);
        let profile = SpanProfile::build(&mf).unwrap();
        let codims: Vec<u64> = profile
            .stages
            .iter()
            .map(|s| s.codim_bound)
            .chain([profile.terminal_codim])
            .collect();
        assert_eq!(codims, vec![0, 5, 5, 5, 15, 15, 20, 30, 40, 45]);
        let weights: Vec<Rat> = profile
            .stages
            .iter()
            .map(|s| s.weight.clone())
            .chain([profile.terminal_weight.clone()])
            .collect();
        let expected: Vec<Rat> = [60, 55, 50, 45, 40, 35, 30, 25, 20, 15]
            .iter()
            .map(|&n| rat(n, 6))
            .collect();
        assert_eq!(weights, expected);

        // the per-point contributions at stage (1,1)
        let s11 = &profile.stages[4];
        assert_eq!((s11.k, s11.w), (1, 1));
        assert_eq!(s11.contrib, vec![10, 5, 0]);
        assert_eq!(s11.codim_bound, 15);
    }

    #[test]
    fn member_notation_matches_unsimplified_spans() {
        let mf = example_mult(3, 5);
        let profile = SpanProfile::build(&mf).unwrap();
        let s11 = &profile.stages[4];
        let names: Vec<String> = s11.members.iter().map(|m| m.notation()).collect();
        assert_eq!(
            names,
            vec!["(V_1^2 V_2^1 V_0)^5", "(V_0^1 V_3^2 V_0)^5", "(V_1^2 V_3^1 V_0)^5"]
        );
    }

    #[test]
    fn oracle_never_exceeds_contribution_sum() {
        let mf = example_mult(3, 5);
        let mut profile = SpanProfile::build(&mf).unwrap();
        profile.compute_exact_codims(mf.m).unwrap();
        for stage in &profile.stages {
            assert!(stage.codim_exact.unwrap() <= stage.codim_bound);
        }
        // in this example the bound is tight at every stage
        for stage in &profile.stages {
            assert_eq!(stage.codim_exact.unwrap(), stage.codim_bound);
        }
    }

    #[test]
    fn weights_decrease_codims_grow() {
        for (u, v) in [(3u64, 5u64), (7, 4), (12, 5)] {
            let mf = example_mult(u, v);
            let profile = SpanProfile::build(&mf).unwrap();
            for pair in profile.stages.windows(2) {
                assert!(pair[0].weight > pair[1].weight);
                assert!(pair[0].codim_bound <= pair[1].codim_bound);
            }
            assert!(profile.stages.last().unwrap().codim_bound <= profile.terminal_codim);
        }
    }

    #[test]
    fn members_satisfy_degree_hypothesis() {
        let mf = example_mult(3, 5);
        let profile = SpanProfile::build(&mf).unwrap();
        let ctx = &mf.base.ctx;
        for stage in &profile.stages {
            let list: Vec<DivisorSeries> =
                stage.members.iter().map(|s| s.to_series(mf.m)).collect();
            assert!(crate::span::degree_hypothesis(&list, ctx, mf.m).unwrap());
            // sanity: the span of the members really is smaller than each member
            let exact = span_codim_oracle(&list).unwrap();
            for member in &stage.members {
                assert!(exact <= member.codim());
            }
        }
    }

    #[test]
    fn empty_base_locus_degenerates_to_rectangle() {
        let mut base = example_mult(3, 5).base;
        base.c = vec![vec![0, 0, 0]; 4];
        let mf = crate::multfilt::MultFiltration::build(&base, 3, 5);
        let profile = SpanProfile::build(&mf).unwrap();
        assert!(profile.stages.iter().all(|s| s.codim_bound == 0));
        let d = base.ctx.d as i64;
        let expected = int(d * 20 - 1) * rat(5, 2); // (dm - g + 1)·v·r_0
        assert_eq!(profile.area_upper_bound(), expected);
    }

    #[test]
    fn area_of_golden_table() {
        let mf = example_mult(3, 5);
        let profile = SpanProfile::build(&mf).unwrap();
        // widths 5,0,0,10,0,5,10,10,5 against weights 10,…,20/6 plus the
        // terminal block ((d−3)·15 + 5d − 1)·5/2 with d = 25
        let steps = rat(10, 1) * int(5)
            + rat(45, 6) * int(10)
            + rat(35, 6) * int(5)
            + rat(30, 6) * int(10)
            + rat(25, 6) * int(10)
            + rat(20, 6) * int(5);
        let terminal = int((25 - 3) * 15 + 5 * 25 - 1) * rat(5, 2);
        assert_eq!(profile.area_upper_bound(), steps + terminal);
        assert_eq!(profile.step_profile().area(), profile.area_upper_bound());
    }

    #[test]
    fn baseline_leading_coefficient() {
        // Σ ½(r_k + r_{k+1})·Δdeg = ¾ for linearly decreasing weights
        let mf = example_mult(3, 5);
        assert_eq!(baseline_leading_coeff(&mf), rat(3, 4));
    }

    #[test]
    fn baseline_dominated_by_improved_profile() {
        let mf = example_mult(3, 5);
        let improved = SpanProfile::build(&mf).unwrap().area_upper_bound();
        let baseline = baseline_profile(&mf).area();
        assert!(improved <= baseline);
    }
}

//! Assembling the certificate: comparison series, creep and tail checks,
//! the case-dependent total-weight bound, the numerical-criterion
//! right-hand side, the verdict, and the (u₀, v₀(u)) threshold search.

use num_traits::{Signed, Zero};

use crate::discrepancy::delta_bounds;
use crate::error::{Error, Result};
use crate::filtration::{
    case_classify, CaseLabel, GeometricContext, LinearizationConfig, WeightedFiltration,
};
use crate::multfilt::MultFiltration;
use crate::profile::{baseline_leading_coeff, SpanProfile};
use crate::rational::{fmt_rat, from_u64, int, rat, Rat};
use crate::virtual_profile::{marked_coeff, t_bound, VirtualProfile};

/// Per-row budget Z_j against which the multiplicity jumps are compared:
/// z_j inside the Riemann-Roch region, doubled in the Clifford region, with
/// the boundary row absorbing the crossover correction.
///
/// `inclusive` follows the printed definition Σ_{τ≤j} z_τ at the boundary
/// row; the strict variant uses Σ_{τ≤j−1} and is surfaced alongside it in
/// reports since the two readings differ by z_{j_RR}.
pub fn z_series(f: &WeightedFiltration, inclusive: bool) -> Vec<i64> {
    let regions = f.regions();
    let cut = f.ctx.rr_cut();
    (0..f.z.len())
        .map(|j| {
            let zj = f.z[j] as i64;
            match regions.rr {
                Some(rr) if j < rr => zj,
                Some(rr) if j == rr => {
                    let upper = if inclusive { j + 1 } else { j };
                    zj + (f.codim(upper) as i64 - cut)
                }
                Some(_) => 2 * zj,
                // no row fits under N−g: everything is Clifford, the
                // crossover correction lands on row 0
                None => {
                    if j == 0 {
                        2 * zj - cut
                    } else {
                        2 * zj
                    }
                }
            }
        })
        .collect()
}

/// The u²v² coefficient contributed by multiplicity jumps and first-jump
/// marked terms: Σ_j (Σ_{i jumping at j, not first or last} ½(c_next − c_prev)
/// + Σ_{i first-jumping at j} (½·c_first + γB_i))·r_j.
pub fn creep_lhs(f: &WeightedFiltration, lin: &LinearizationConfig) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..f.ctx.points {
        let jumps = f.jump_rows(i);
        let count = jumps.len() - 1;
        if count == 0 {
            continue; // the column never jumps, nothing enters a base locus
        }
        // first jump: ½·(first nonzero multiplicity) + γB_i at row j(i,0)
        let first_val = from_u64(f.c[jumps[1]][i]);
        acc += (first_val / int(2) + lin.gamma.clone() * &f.b_link[i]) * &f.r[jumps[0]];
        // interior jumps: ½(c at next jump − c at previous jump)
        for ell in 1..count {
            let diff = f.c[jumps[ell + 1]][i] as i64 - f.c[jumps[ell - 1]][i] as i64;
            acc += rat(diff, 2) * &f.r[jumps[ell]];
        }
    }
    acc
}

/// Which comparison inequality to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CreepMode {
    /// lhs ≤ Σ Z_j r_j.
    Plain,
    /// Case B sharpening: subtract (½ − γb)·r_{N−1} from the right side.
    StrengthenedB,
    /// Unpointed sharpening: subtract ½·r_{N−1}.
    StrengthenedC,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreepCheck {
    pub mode: CreepMode,
    pub lhs: Rat,
    pub rhs: Rat,
    pub holds: bool,
}

/// r_{N−1} in the sharpened comparisons: 0 unless the terminal stage is a
/// single section, in which case it is the next-to-last weight.
fn next_to_last_weight(f: &WeightedFiltration) -> Rat {
    let nbar = f.last_stage();
    if f.z[nbar] > 1 || nbar == 0 {
        Rat::zero()
    } else {
        f.r[nbar - 1].clone()
    }
}

pub fn creep_check(
    f: &WeightedFiltration,
    lin: &LinearizationConfig,
    mode: CreepMode,
) -> Result<CreepCheck> {
    let lhs = creep_lhs(f, lin);
    let z = z_series(f, true);
    let base_rhs: Rat = z
        .iter()
        .zip(&f.r)
        .fold(Rat::zero(), |acc, (&zj, rj)| acc + int(zj) * rj);
    let rhs = match mode {
        CreepMode::Plain => base_rhs,
        CreepMode::StrengthenedB => {
            if f.ctx.marked == 0 {
                return Err(Error::ModeInapplicable("pointed sharpening needs n >= 1"));
            }
            if lin.gamma_b() >= rat(1, 2) {
                return Err(Error::ModeInapplicable("pointed sharpening needs gamma*b < 1/2"));
            }
            if f.ctx.points >= f.ctx.marked as usize {
                return Err(Error::ModeInapplicable(
                    "pointed sharpening needs fewer support points than marks",
                ));
            }
            base_rhs - (rat(1, 2) - lin.gamma_b()) * next_to_last_weight(f)
        }
        CreepMode::StrengthenedC => {
            if f.ctx.marked != 0 {
                return Err(Error::ModeInapplicable("unpointed sharpening needs n = 0"));
            }
            base_rhs - rat(1, 2) * next_to_last_weight(f)
        }
    };
    let holds = lhs <= rhs;
    Ok(CreepCheck { mode, lhs, rhs, holds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailCheck {
    pub sum: Rat,
    pub bound: Rat,
    pub holds: bool,
}

/// Sum of the last g slot weights (stages expanded by multiplicity) against
/// the simplex bound (g−1)/N; equality holds at the uniform-weight vertex.
pub fn tail_bound(f: &WeightedFiltration) -> TailCheck {
    let g = f.ctx.g;
    if g == 0 {
        return TailCheck { sum: Rat::zero(), bound: Rat::zero(), holds: true };
    }
    let mut slots: Vec<Rat> = Vec::with_capacity(f.ctx.sections() as usize);
    for (zj, rj) in f.z.iter().zip(&f.r) {
        for _ in 0..*zj {
            slots.push(rj.clone());
        }
    }
    let take = (g as usize).min(slots.len());
    let sum = slots[slots.len() - take..]
        .iter()
        .fold(Rat::zero(), |acc, x| acc + x);
    let bound = rat(g as i64 - 1, f.ctx.proj_dim as i64);
    let holds = sum <= bound;
    TailCheck { sum, bound, holds }
}

/// Largest ε tolerated by the sharpened estimates: defined in cases B and C,
/// unconstrained in case A, absent in cases D and E.
pub fn epsilon_max(ctx: &GeometricContext, lin: &LinearizationConfig) -> Result<Option<Rat>> {
    let case = case_classify(ctx, lin)?;
    let n = int(ctx.proj_dim as i64);
    let np1 = int(ctx.proj_dim as i64 + 1);
    let two_g = int(2 * ctx.g as i64);
    match case {
        CaseLabel::A => Ok(None),
        CaseLabel::B => Ok(Some(
            (n.clone() - two_g + int(3) - int(2) * lin.gamma_b()) / (int(2) * n * np1),
        )),
        CaseLabel::C => Ok(Some((n.clone() - two_g + int(3)) / (int(2) * n * np1))),
        other => Err(Error::HypothesesViolated(other.as_char())),
    }
}

/// The numerical-criterion right-hand side at m = (u+1)v:
/// (1 + (g−1+γb)/(N+1))·m² − ((g−1)/(N+1))·m.
pub fn criterion_rhs(ctx: &GeometricContext, lin: &LinearizationConfig, u: u64, v: u64) -> Rat {
    let np1 = int(ctx.proj_dim as i64 + 1);
    let g1 = int(ctx.g as i64 - 1);
    let beta = int(1) + (g1.clone() + lin.gamma_b()) / np1.clone();
    let (u, v) = (u as i64, v as i64);
    let m2 = int(u * u * v * v + 2 * u * v * v + v * v);
    let m1 = int(u * v + v);
    beta * m2 - g1 / np1 * m1
}

/// The final display bound for the total weight:
/// (1 + (g−1+γb)/(N+1) − ε)·u²v² + (n + 7d/2)·uv² + (n + 3d)·v².
pub fn t_bound_total(
    ctx: &GeometricContext,
    lin: &LinearizationConfig,
    epsilon: &Rat,
    u: u64,
    v: u64,
) -> Rat {
    let np1 = int(ctx.proj_dim as i64 + 1);
    let g1 = int(ctx.g as i64 - 1);
    let beta = int(1) + (g1 + lin.gamma_b()) / np1;
    let n = int(ctx.marked as i64);
    let d = int(ctx.d as i64);
    let (u, v) = (u as i64, v as i64);
    (beta - epsilon) * int(u * u * v * v)
        + (n.clone() + rat(7, 2) * d.clone()) * int(u * v * v)
        + (n + int(3) * d) * int(v * v)
}

/// Leading u²v² coefficient of the case-dependent virtual-weight bound:
/// 1 + (g−1+γb)/(N+1) − ε in case A, 1 + (g−3/2+γb)/N in cases B and C.
pub fn t_vir_leading(
    ctx: &GeometricContext,
    lin: &LinearizationConfig,
    epsilon: &Rat,
    case: CaseLabel,
) -> Option<Rat> {
    let n = int(ctx.proj_dim as i64);
    let np1 = int(ctx.proj_dim as i64 + 1);
    let g1 = int(ctx.g as i64 - 1);
    match case {
        CaseLabel::A => Some(int(1) + (g1 + lin.gamma_b()) / np1 - epsilon),
        CaseLabel::B | CaseLabel::C => {
            Some(int(1) + (g1 - rat(1, 2) + lin.gamma_b()) / n)
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedStable,
    Inconclusive,
    HypothesesViolated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CertifiedStable => "certified-stable",
            Verdict::Inconclusive => "inconclusive",
            Verdict::HypothesesViolated => "hypotheses-violated",
        }
    }
}

/// Everything the certifier concluded for one (u, v).
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub u: u64,
    pub v: u64,
    pub m: u64,
    pub case_label: Option<CaseLabel>,
    pub epsilon: Option<Rat>,
    pub epsilon_max: Option<Rat>,
    pub violations: Vec<String>,
    /// Area upper bound of the span-improved step profile.
    pub a_bound: Rat,
    /// Area under the virtual polyline.
    pub a_vir: Rat,
    /// Total discrepancy budget (7/2)d·uv² + 3d·v².
    pub delta_bound: Rat,
    /// a_vir plus the marked-point term.
    pub t_vir: Rat,
    /// Case-dependent leading-coefficient bound for t_vir, when defined.
    pub t_vir_case_bound: Option<Rat>,
    /// t_vir + delta_bound: the bound-chain estimate for the total weight.
    pub t_chain: Rat,
    /// a_bound plus the marked-point term: the direct estimate.
    pub t_direct: Rat,
    /// The closed-form display bound used for the verdict.
    pub t_bound: Rat,
    /// Smaller of the chain and direct estimates (the sharpest valid bound).
    pub t_best: Rat,
    pub rhs: Rat,
    /// rhs − t_bound; positive margin is required for certification.
    pub margin: Rat,
    pub creep: Option<CreepCheck>,
    pub tail: Option<TailCheck>,
    pub z_series: Vec<i64>,
    pub z_series_strict: Vec<i64>,
    pub baseline_leading: Rat,
    pub marked_leading: Rat,
    pub verdict: Verdict,
    pub thresholds: Option<Thresholds>,
}

/// Certifier output: the report plus the profiles it was computed from, so
/// renderers and serializers need not rebuild them. Absent when the input
/// failed validation.
#[derive(Debug, Clone)]
pub struct CertifyOutput {
    pub report: StabilityReport,
    pub artifacts: Option<CertifyArtifacts>,
}

#[derive(Debug, Clone)]
pub struct CertifyArtifacts {
    pub mult: MultFiltration,
    pub profile: SpanProfile,
    pub virtual_profile: VirtualProfile,
}

fn empty_report(u: u64, v: u64, violations: Vec<String>) -> StabilityReport {
    StabilityReport {
        u,
        v,
        m: (u + 1) * v,
        case_label: None,
        epsilon: None,
        epsilon_max: None,
        violations,
        a_bound: Rat::zero(),
        a_vir: Rat::zero(),
        delta_bound: Rat::zero(),
        t_vir: Rat::zero(),
        t_vir_case_bound: None,
        t_chain: Rat::zero(),
        t_direct: Rat::zero(),
        t_bound: Rat::zero(),
        t_best: Rat::zero(),
        rhs: Rat::zero(),
        margin: Rat::zero(),
        creep: None,
        tail: None,
        z_series: Vec::new(),
        z_series_strict: Vec::new(),
        baseline_leading: Rat::zero(),
        marked_leading: Rat::zero(),
        verdict: Verdict::HypothesesViolated,
        thresholds: None,
    }
}

/// Runs the full pipeline and issues the verdict. Admissibility violations
/// and failed hypotheses land in the report, never in an error.
pub fn certify(
    f: &WeightedFiltration,
    lin: &LinearizationConfig,
    u: u64,
    v: u64,
) -> Result<CertifyOutput> {
    let violations: Vec<String> =
        f.validate(lin).iter().map(|x| x.to_string()).collect();
    if !violations.is_empty() {
        return Ok(CertifyOutput { report: empty_report(u, v, violations), artifacts: None });
    }

    let ctx = &f.ctx;
    let mf = MultFiltration::build(f, u, v);
    let profile = SpanProfile::build(&mf)?;
    let virtual_profile = VirtualProfile::build(&mf)?;

    let a_bound = profile.area_upper_bound();
    let a_vir = virtual_profile.area();
    let delta = delta_bounds(&mf).total;
    let t_vir = t_bound(&virtual_profile, &mf, lin);
    let t_chain = t_vir.clone() + &delta;
    let marked = marked_coeff(f, lin) * from_u64(mf.m * mf.m);
    let t_direct = a_bound.clone() + &marked;

    let mut report = empty_report(u, v, Vec::new());
    report.a_bound = a_bound;
    report.a_vir = a_vir;
    report.delta_bound = delta;
    report.t_vir = t_vir;
    report.t_chain = t_chain.clone();
    report.t_direct = t_direct.clone();
    report.t_best = if t_direct < t_chain { t_direct } else { t_chain };
    report.z_series = z_series(f, true);
    report.z_series_strict = z_series(f, false);
    report.baseline_leading = baseline_leading_coeff(&mf);
    report.marked_leading = marked_coeff(f, lin);

    // hypotheses: a certifiable case, ε within its cap, and γ·b_i < 1/2
    let epsilon = match lin.epsilon_or_default(ctx) {
        Ok(e) => e,
        Err(Error::HypothesesViolated(c)) => {
            report.case_label = match c {
                'D' => Some(CaseLabel::D),
                'E' => Some(CaseLabel::E),
                _ => None,
            };
            report.verdict = Verdict::HypothesesViolated;
            let artifacts = CertifyArtifacts { mult: mf, profile, virtual_profile };
            return Ok(CertifyOutput { report, artifacts: Some(artifacts) });
        }
        Err(e) => return Err(e),
    };
    report.epsilon = Some(epsilon.clone());
    let case = case_classify(ctx, lin)?;
    report.case_label = Some(case);
    let eps_cap = match case {
        CaseLabel::B | CaseLabel::C => epsilon_max(ctx, lin)?,
        _ => None,
    };
    report.epsilon_max = eps_cap.clone();

    let links_ok = f
        .b_link
        .iter()
        .all(|b| lin.gamma.clone() * b < rat(1, 2));
    let eps_ok = eps_cap.as_ref().map_or(true, |cap| epsilon <= *cap);
    if !case.certifiable() || !links_ok || !eps_ok {
        report.verdict = Verdict::HypothesesViolated;
        let artifacts = CertifyArtifacts { mult: mf, profile, virtual_profile };
        return Ok(CertifyOutput { report, artifacts: Some(artifacts) });
    }

    report.t_vir_case_bound = t_vir_leading(ctx, lin, &epsilon, case)
        .map(|lead| {
            let m2 = from_u64(mf.m * mf.m);
            let u2v2 = from_u64(u * u * v * v);
            // leading term plus the lower-order marked and terminal blocks
            lead * u2v2
                + report.marked_leading.clone() * (m2 - from_u64(u * u * v * v))
                + int(ctx.hilbert(mf.m).max(0)) * from_u64(v) * &f.r[0]
        });

    let mode = match case {
        CaseLabel::A => CreepMode::Plain,
        CaseLabel::B => {
            if ctx.points < ctx.marked as usize {
                CreepMode::StrengthenedB
            } else {
                CreepMode::Plain
            }
        }
        CaseLabel::C => CreepMode::StrengthenedC,
        _ => CreepMode::Plain,
    };
    let creep = creep_check(f, lin, mode)?;
    let tail = tail_bound(f);
    let t_total = t_bound_total(ctx, lin, &epsilon, u, v);
    let rhs = criterion_rhs(ctx, lin, u, v);
    report.t_bound = t_total.clone();
    report.rhs = rhs.clone();
    report.margin = rhs - t_total;
    report.verdict = if creep.holds && tail.holds && report.margin.is_positive() {
        Verdict::CertifiedStable
    } else {
        Verdict::Inconclusive
    };
    report.creep = Some(creep);
    report.tail = Some(tail);
    let artifacts = CertifyArtifacts { mult: mf, profile, virtual_profile };
    Ok(CertifyOutput { report, artifacts: Some(artifacts) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thresholds {
    pub u0: u64,
    pub v0_at_u0: u64,
}

/// v² and v coefficients of the certification margin rhs − t_bound at a
/// given u: margin(u, v) = quad(u)·v² − lin(u)·v.
pub fn margin_coeffs(
    ctx: &GeometricContext,
    lin: &LinearizationConfig,
    epsilon: &Rat,
    u: u64,
) -> (Rat, Rat) {
    let np1 = int(ctx.proj_dim as i64 + 1);
    let g1 = int(ctx.g as i64 - 1);
    let beta = int(1) + (g1.clone() + lin.gamma_b()) / np1.clone();
    let n = int(ctx.marked as i64);
    let d = int(ctx.d as i64);
    let uu = int(u as i64);
    let quad = epsilon.clone() * &uu * &uu
        + (int(2) * &beta - &n - rat(7, 2) * &d) * &uu
        + (beta - n - int(3) * d);
    let linear = g1 / np1 * (uu + int(1));
    (quad, linear)
}

/// Least v ≥ 1 with margin(u, v) > 0, provided the v² coefficient is
/// positive at this u.
pub fn v0_for(
    ctx: &GeometricContext,
    lin: &LinearizationConfig,
    epsilon: &Rat,
    u: u64,
) -> Option<u64> {
    let (quad, linear) = margin_coeffs(ctx, lin, epsilon, u);
    if !quad.is_positive() {
        return None;
    }
    let ratio = linear / quad;
    let floor = crate::rational::floor_int(&ratio);
    let v0 = if floor.is_negative() {
        1u64
    } else {
        u64::try_from(&floor).expect("threshold fits") + 1
    };
    Some(v0.max(1))
}

/// Finds the least u past which the margin's v² coefficient stays positive,
/// and the matching least v. Only defined in the certifiable cases.
pub fn find_thresholds(
    f: &WeightedFiltration,
    lin: &LinearizationConfig,
) -> Result<Thresholds> {
    let ctx = &f.ctx;
    let epsilon = lin.epsilon_or_default(ctx)?;
    if !epsilon.is_positive() {
        return Err(Error::EpsilonNotPositive);
    }
    let case = case_classify(ctx, lin)?;
    if !case.certifiable() {
        return Err(Error::HypothesesViolated(case.as_char()));
    }
    // quad(u) = ε·u² + B·u + C opens upward: walk up from the vertex
    let (quad_at_1, _) = margin_coeffs(ctx, lin, &epsilon, 1);
    let b = {
        let (quad_at_0, _) = margin_coeffs(ctx, lin, &epsilon, 0);
        quad_at_1 - &quad_at_0 - &epsilon // B = quad(1) − quad(0) − ε
    };
    let vertex = -b / (int(2) * &epsilon);
    let start = if vertex.is_positive() {
        u64::try_from(&crate::rational::ceil_int(&vertex)).expect("vertex fits").max(1)
    } else {
        1
    };
    let mut u0 = start;
    loop {
        let (quad, _) = margin_coeffs(ctx, lin, &epsilon, u0);
        if quad.is_positive() {
            break;
        }
        u0 += 1;
    }
    let v0 = v0_for(ctx, lin, &epsilon, u0).expect("positive quad at u0");
    Ok(Thresholds { u0, v0_at_u0: v0 })
}

/// One CSV-friendly line of a parameter sweep.
pub fn sweep_line(report: &StabilityReport) -> String {
    format!(
        "{},{},{},{}",
        report.u,
        report.v,
        fmt_rat(&report.margin),
        report.verdict.as_str()
    )
}

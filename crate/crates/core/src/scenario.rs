//! Named and randomized input scenarios.
//!
//! `three_marked_points` is the linearly-decreasing-weights filtration with
//! three marked base points that threads through the whole test suite;
//! `worst_candidate` is the single-point complete-sublinear-series
//! filtration that is hardest for the profile method; `random_admissible`
//! fuels the property suites.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filtration::{GeometricContext, LinearizationConfig, WeightedFiltration};
use crate::rational::{int, rat, Rat};

/// The 1-PS acting with linearly decreasing weights on three marked points:
/// z = (1,1,1,N−2), r = (1/2, 1/3, 1/6, 0), one new base point per stage.
pub fn three_marked_points(ctx: &GeometricContext, lin: &LinearizationConfig) -> Result<WeightedFiltration> {
    if ctx.marked < 3 {
        return Err(Error::Parse("three marked points require n >= 3".into()));
    }
    if ctx.proj_dim < 3 {
        return Err(Error::Parse("three marked points require N >= 3".into()));
    }
    let mut ctx = ctx.clone();
    ctx.points = 3;
    let b_link: Vec<Rat> = (0..3).map(|i| lin.b.get(i).cloned().unwrap_or_default()).collect();
    Ok(WeightedFiltration {
        ctx: ctx.clone(),
        z: vec![1, 1, 1, ctx.proj_dim - 2],
        r: vec![rat(1, 2), rat(1, 3), rat(1, 6), Rat::zero()],
        c: vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]],
        b_link,
    })
}

/// The hardest 1-PS for this method: one base point (the marked point with
/// the largest linearizing weight), every stage a complete sublinear series
/// (multiplicity grows by one per stage), weights linearly decreasing —
/// r_j = 2(N−j)/(N(N+1)) is the unique such normalization.
pub fn worst_candidate(ctx: &GeometricContext, lin: &LinearizationConfig) -> Result<WeightedFiltration> {
    let n_dim = ctx.proj_dim;
    if n_dim < 1 {
        return Err(Error::DegenerateProjectiveSpace);
    }
    let mut ctx = ctx.clone();
    ctx.points = 1;
    let best_b = lin.b.iter().max().cloned().unwrap_or_default();
    let denom = (n_dim * (n_dim + 1)) as i64;
    Ok(WeightedFiltration {
        ctx,
        z: vec![1; n_dim as usize + 1],
        r: (0..=n_dim).map(|j| rat(2 * (n_dim - j) as i64, denom)).collect(),
        c: (0..=n_dim).map(|j| vec![j]).collect(),
        b_link: vec![best_b],
    })
}

const MAX_ATTEMPTS: u32 = 64;

/// Draws an admissible filtration: a random stage partition, strictly
/// decreasing weights rescaled to Σ z_j r_j = 1, nondecreasing multiplicity
/// columns under the per-row codegree bounds (and the total degree), and a
/// random injective assignment of linearizing weights with γ·B_i ≤ 1/2.
/// Same seed, same output.
pub fn random_admissible(
    ctx: &GeometricContext,
    lin: &LinearizationConfig,
    seed: u64,
) -> Result<WeightedFiltration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let f = draw(ctx, lin, &mut rng);
        if f.is_admissible(lin) {
            return Ok(f);
        }
    }
    Err(Error::GenerationFailed(MAX_ATTEMPTS))
}

fn draw(ctx: &GeometricContext, lin: &LinearizationConfig, rng: &mut ChaCha8Rng) -> WeightedFiltration {
    let sections = ctx.sections();
    let max_stages = sections.min(8).max(2);
    let stages = rng.gen_range(2..=max_stages) as usize;

    // partition N+1 into `stages` positive parts
    let mut z = vec![1u64; stages];
    for _ in 0..sections - stages as u64 {
        let idx = rng.gen_range(0..stages);
        z[idx] += 1;
    }

    // strictly decreasing positive rationals ending in 0, rescaled so that
    // Σ z_j r_j = 1; raw denominators stay small so downstream arithmetic
    // does not blow up
    let mut raw: Vec<Rat> = Vec::with_capacity(stages);
    let mut top = rat(1, 1);
    for _ in 0..stages - 1 {
        raw.push(top.clone());
        let shrink = rat(rng.gen_range(1..=9), 10 * rng.gen_range(1..=10));
        top *= rat(1, 1) - shrink.min(rat(9, 10));
    }
    raw.push(Rat::zero());
    let scale: Rat = z
        .iter()
        .zip(&raw)
        .fold(Rat::zero(), |acc, (&zj, rj)| acc + int(zj as i64) * rj);
    let r: Vec<Rat> = raw.into_iter().map(|x| x / &scale).collect();

    // columns grow under the row bound and the total degree
    let q = ctx.points;
    let mut c = vec![vec![0u64; q]];
    let mut f_probe = WeightedFiltration {
        ctx: ctx.clone(),
        z: z.clone(),
        r: r.clone(),
        c: vec![vec![0u64; q]; stages],
        b_link: vec![Rat::zero(); q],
    };
    for j in 1..stages {
        let mut row = c[j - 1].clone();
        if q > 0 {
            let row_cap = f_probe.row_bound(j).max(0) as u64;
            let cap = row_cap.min(ctx.d);
            let mut budget = cap.saturating_sub(row.iter().sum::<u64>());
            for _ in 0..rng.gen_range(0..=q) {
                if budget == 0 {
                    break;
                }
                let i = rng.gen_range(0..q);
                let grow = rng.gen_range(1..=budget.min(3));
                row[i] += grow;
                budget -= grow;
            }
        }
        c.push(row);
    }
    f_probe.c = c;

    // injective links drawn from the weights with γ·b_k ≤ 1/2
    let mut pool: Vec<Rat> = lin
        .b
        .iter()
        .filter(|b| lin.gamma.clone() * *b <= rat(1, 2))
        .cloned()
        .collect();
    let mut b_link = vec![Rat::zero(); q];
    for link in b_link.iter_mut() {
        if pool.is_empty() {
            break;
        }
        if rng.gen_bool(0.6) {
            let idx = rng.gen_range(0..pool.len());
            *link = pool.swap_remove(idx);
        }
    }
    f_probe.b_link = b_link;
    f_probe
}

/// Deterministic default context for random scenarios: a complete-system
/// embedding with room for a few support points.
pub fn default_random_context(g: u64, n_dim: u64, marked: u64, points: usize) -> GeometricContext {
    GeometricContext::new(g, n_dim + g, n_dim, marked, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn lin() -> LinearizationConfig {
        LinearizationConfig::new(
            rat(5, 9),
            vec![rat(4, 5), rat(7, 10), rat(3, 5)],
        )
        .with_epsilon(rat(1, 1000))
    }

    #[test]
    fn three_marked_points_is_admissible() {
        let ctx = GeometricContext::new(2, 25, 23, 3, 3);
        let f = three_marked_points(&ctx, &lin()).unwrap();
        assert!(f.validate(&lin()).is_empty());
        let sum: Rat = f
            .z
            .iter()
            .zip(&f.r)
            .fold(Rat::zero(), |acc, (&zj, rj)| acc + int(zj as i64) * rj);
        assert!(sum.is_one());
    }

    #[test]
    fn worst_candidate_structure() {
        let ctx = GeometricContext::new(2, 22, 20, 2, 0);
        let w = worst_candidate(&ctx, &lin()).unwrap();
        // weights sum to one with unit stages
        let sum: Rat = w.r.iter().fold(Rat::zero(), |acc, x| acc + x);
        assert!(sum.is_one());
        // RR equality at every Riemann-Roch row
        for j in 0..=w.ctx.rr_cut().max(0) as usize {
            assert_eq!(w.c[j][0], w.codim(j));
        }
        assert!(w.validate(&lin()).is_empty());
        // the largest linearizing weight is linked
        assert_eq!(w.b_link[0], rat(4, 5));
    }

    #[test]
    fn worst_candidate_small_matches_normalization() {
        let mut ctx = GeometricContext::new(0, 2, 2, 1, 0);
        ctx.complete = false;
        let w = worst_candidate(&ctx, &lin()).unwrap();
        assert_eq!(w.r, crate::filtration::normalize_weights(&[-1, 0, 1]).unwrap());
    }

    #[test]
    fn random_scenarios_validate() {
        let ctx = default_random_context(2, 14, 3, 3);
        for seed in 0..300 {
            let f = random_admissible(&ctx, &lin(), seed).unwrap();
            assert!(f.validate(&lin()).is_empty(), "seed {seed}");
            // degree cap keeps the discrepancy budgets meaningful
            assert!(f.degree(f.last_stage()) <= ctx.d);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let ctx = default_random_context(3, 11, 2, 2);
        let a = random_admissible(&ctx, &lin(), 42).unwrap();
        let b = random_admissible(&ctx, &lin(), 42).unwrap();
        assert_eq!(a, b);
        let c = random_admissible(&ctx, &lin(), 43).unwrap();
        assert!(a != c || a.c == c.c); // different seeds generally differ
    }

    #[test]
    fn pointless_draws_flow_through_pipeline() {
        let ctx = default_random_context(2, 9, 0, 0);
        let unpointed = LinearizationConfig::new(rat(5, 9), vec![]).with_epsilon(rat(1, 1000));
        let f = random_admissible(&ctx, &unpointed, 7).unwrap();
        let mf = crate::multfilt::MultFiltration::build(&f, 3, 5);
        let area = crate::profile::SpanProfile::build(&mf).unwrap().area_upper_bound();
        let vir = crate::virtual_profile::VirtualProfile::build(&mf).unwrap().area();
        assert_eq!(area, vir); // no base points: the two graphs coincide
    }

    #[test]
    fn creep_holds_on_random_scenarios() {
        let ctx = default_random_context(2, 12, 3, 3);
        let lin = lin();
        for seed in 0..200 {
            let f = random_admissible(&ctx, &lin, seed).unwrap();
            let check =
                crate::verdict::creep_check(&f, &lin, crate::verdict::CreepMode::Plain).unwrap();
            assert!(check.holds, "seed {seed}");
            let tail = crate::verdict::tail_bound(&f);
            assert!(tail.holds, "seed {seed}");
        }
    }

    #[test]
    fn discrepancy_bound_holds_on_random_scenarios() {
        let ctx = default_random_context(2, 10, 3, 3);
        let lin = lin();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..60 {
            let f = random_admissible(&ctx, &lin, seed).unwrap();
            let u = rng.gen_range(3..=9u64);
            let v = rng.gen_range(4..=9u64);
            let mf = crate::multfilt::MultFiltration::build(&f, u, v);
            let area = crate::profile::SpanProfile::build(&mf).unwrap().area_upper_bound();
            let vir = crate::virtual_profile::VirtualProfile::build(&mf).unwrap().area();
            let bound = crate::discrepancy::delta_bounds(&mf).total;
            assert!(area - vir <= bound, "seed {seed} u {u} v {v}");
        }
    }
}

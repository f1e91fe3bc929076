//! Randomized property suites behind `gitstab oracle`.
//!
//! Each suite reruns one of the engine's theorems on fresh random data and
//! exits nonzero on the first counterexample, printing the failing datum.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gitstab_core::discrepancy::{delta_bounds, staircase_count, weighted_staircase_sum};
use gitstab_core::filtration::LinearizationConfig;
use gitstab_core::multfilt::MultFiltration;
use gitstab_core::profile::SpanProfile;
use gitstab_core::rational::{int, rat};
use gitstab_core::scenario::{default_random_context, random_admissible};
use gitstab_core::span::{span_codim_oracle, span_codim_trace, DivisorSeries};
use gitstab_core::verdict::{creep_check, tail_bound, CreepMode};
use gitstab_core::virtual_profile::VirtualProfile;

use crate::{OracleArgs, Suite, EXIT_CERTIFIED, EXIT_INVALID};

pub fn run_suite(args: OracleArgs) -> i32 {
    let result = match args.suite {
        Suite::Spans => spans(args.trials, args.seed),
        Suite::Identities => identities(args.trials, args.seed),
        Suite::Creep => creep(args.trials, args.seed),
        Suite::Delta => delta(args.trials, args.seed),
        Suite::Tail => tail(args.trials, args.seed),
    };
    let name = match args.suite {
        Suite::Spans => "spans",
        Suite::Identities => "identities",
        Suite::Creep => "creep",
        Suite::Delta => "delta",
        Suite::Tail => "tail",
    };
    match result {
        Ok(trials) => {
            println!("suite {name}: {trials} trials passed");
            EXIT_CERTIFIED
        }
        Err(msg) => {
            eprintln!("suite {name} counterexample: {msg}");
            EXIT_INVALID
        }
    }
}

fn test_lin() -> LinearizationConfig {
    LinearizationConfig::new(rat(5, 9), vec![rat(4, 5), rat(7, 10), rat(3, 5)])
        .with_epsilon(rat(1, 1000))
}

fn spans(trials: u64, seed: u64) -> Result<u64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let q = rng.gen_range(1..=6usize);
        let mut rows: Vec<Vec<u64>> = vec![vec![0; q]; q];
        for i in 0..q {
            let diag = rng.gen_range(0..=4u64);
            for (j, row) in rows.iter_mut().enumerate() {
                row[i] = if j == i { diag } else { rng.gen_range(diag..=8u64) };
            }
        }
        let list: Vec<DivisorSeries> = rows
            .iter()
            .map(|m| DivisorSeries::new(m.clone(), 100, int(1)))
            .collect();
        let trace = span_codim_trace(&list, true).map_err(|e| e.to_string())?;
        let oracle = span_codim_oracle(&list).map_err(|e| e.to_string())?;
        if trace != oracle {
            return Err(format!(
                "trial {t}: trace {trace} != oracle {oracle} on {rows:?}"
            ));
        }
    }
    Ok(trials)
}

fn identities(trials: u64, seed: u64) -> Result<u64, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0u64;
    while done < trials {
        // reduced coprime denominators above 40 keep every u ≤ 40 generic
        let dz = rng.gen_range(41..5000u64);
        let dx = rng.gen_range(41..5000u64);
        if num_integer::gcd(dz, dx) != 1 {
            continue;
        }
        let nz = rng.gen_range(1..dz);
        let nx = rng.gen_range(1..dx);
        if num_integer::gcd(nz, dz) != 1 || num_integer::gcd(nx, dx) != 1 {
            continue;
        }
        let zeta = rat(nz as i64, dz as i64);
        let xi = rat(nx as i64, dx as i64);
        for u in 1..=40 {
            let count = staircase_count(u, &zeta, &xi);
            if !count.holds {
                return Err(format!(
                    "count at u={u}, zeta={zeta}, xi={xi}: telescoped {} vs floor {}",
                    count.telescoped, count.floor_form
                ));
            }
            let wsum = weighted_staircase_sum(u, &zeta, &xi);
            if !wsum.holds {
                return Err(format!(
                    "weighted sum at u={u}, zeta={zeta}, xi={xi}: direct {} vs level {}",
                    wsum.direct, wsum.level_form
                ));
            }
        }
        done += 1;
    }
    Ok(trials)
}

fn creep(trials: u64, seed: u64) -> Result<u64, String> {
    let lin = test_lin();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let g = rng.gen_range(0..=4u64);
        let n_dim = rng.gen_range(4..=16u64);
        let ctx = default_random_context(g, n_dim, 3, rng.gen_range(0..=3));
        let f = random_admissible(&ctx, &lin, seed ^ t).map_err(|e| e.to_string())?;
        let check = creep_check(&f, &lin, CreepMode::Plain).map_err(|e| e.to_string())?;
        if !check.holds {
            return Err(format!(
                "trial {t}: creep lhs {} > rhs {} on z={:?} c={:?}",
                check.lhs, check.rhs, f.z, f.c
            ));
        }
    }
    Ok(trials)
}

fn delta(trials: u64, seed: u64) -> Result<u64, String> {
    let lin = test_lin();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let g = rng.gen_range(0..=3u64);
        let n_dim = rng.gen_range(5..=12u64);
        let ctx = default_random_context(g, n_dim, 3, rng.gen_range(0..=3));
        let f = random_admissible(&ctx, &lin, seed ^ (t << 1)).map_err(|e| e.to_string())?;
        let u = rng.gen_range(3..=15u64);
        let v = rng.gen_range(5..=20u64);
        let mf = MultFiltration::build(&f, u, v);
        let area = SpanProfile::build(&mf)
            .map_err(|e| e.to_string())?
            .area_upper_bound();
        let vir = VirtualProfile::build(&mf).map_err(|e| e.to_string())?.area();
        let bound = delta_bounds(&mf).total;
        if area.clone() - &vir > bound {
            return Err(format!(
                "trial {t}: discrepancy exceeds bound at u={u}, v={v} on z={:?} c={:?}",
                f.z, f.c
            ));
        }
    }
    Ok(trials)
}

fn tail(trials: u64, seed: u64) -> Result<u64, String> {
    let lin = test_lin();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let g = rng.gen_range(1..=5u64);
        let n_dim = rng.gen_range((2 * g).max(4)..=20u64);
        let ctx = default_random_context(g, n_dim, 3, rng.gen_range(0..=3));
        let f = random_admissible(&ctx, &lin, seed ^ (t << 2)).map_err(|e| e.to_string())?;
        let check = tail_bound(&f);
        if !check.holds {
            return Err(format!(
                "trial {t}: tail {} exceeds bound {} on z={:?} r={:?}",
                check.sum, check.bound, f.z, f.r
            ));
        }
    }
    Ok(trials)
}

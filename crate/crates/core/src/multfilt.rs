//! Passage from the degree-1 filtration to the induced filtration on
//! degree-m sections, m = (u+1)v.
//!
//! Multiplicities scale by uv and weights become uv·r_j + v·r_0. Rows where
//! the base locus does not grow collapse, so only the subsequence of rows
//! with strictly increasing base-locus degree is kept (plus row 0 and the
//! terminal row). On top of the kept rows we carry the per-point jump
//! bookkeeping: jump counts K_i, the lookup maps j(i,·)/k(i,·), and the
//! previous/next jump functions s, t behind the four-case split.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::filtration::WeightedFiltration;
use crate::rational::{from_u64, Rat};

/// Smallest v for which the multiplication maps at level (u+1)v are
/// guaranteed surjective: the Gotzmann regularity bound
/// (d²(u+1)² − d(u+1))/2 − g + 1, clamped to at least 1.
pub fn gotzmann_v0(u: u64, d: u64, g: u64) -> u64 {
    let du = (d as i128) * (u as i128 + 1);
    let raw = du * (du - 1) / 2 - g as i128 + 1;
    raw.max(1) as u64
}

/// How the multiplicity of a point behaves across rows k, k+1, k+2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpCase {
    /// Multiplicity still zero at row k+1: the point contributes nothing.
    Zero,
    /// Jumps at row k and again at row k+1.
    I,
    /// Flat at both rows.
    II,
    /// Flat at row k, jumps at row k+1.
    III,
    /// Jumps at row k, flat at row k+1.
    IV,
}

impl JumpCase {
    pub fn has_pivots(self) -> bool {
        matches!(self, JumpCase::II | JumpCase::III | JumpCase::IV)
    }

    pub fn name(self) -> &'static str {
        match self {
            JumpCase::Zero => "Zero",
            JumpCase::I => "I",
            JumpCase::II => "II",
            JumpCase::III => "III",
            JumpCase::IV => "IV",
        }
    }
}

/// Case label plus the previous/next jump rows (s, t) when they exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseInfo {
    pub case: JumpCase,
    /// Last row ≤ k where the multiplicity jumped (s = k in case IV).
    pub s: Option<usize>,
    /// Next row where it jumps, or the terminal row index.
    pub t: Option<usize>,
}

/// The filtration induced on degree-m sections, with jump bookkeeping.
#[derive(Debug, Clone)]
pub struct MultFiltration {
    pub base: WeightedFiltration,
    pub u: u64,
    pub v: u64,
    /// m = (u+1)v.
    pub m: u64,
    /// Source row j_k in the base filtration for each kept row k.
    pub rows: Vec<usize>,
    /// Scaled multiplicities uv·c[j_k][i].
    pub ctilde: Vec<Vec<u64>>,
    /// Strictly decreasing weights uv·r_{j_k} + v·r_0.
    pub rtilde: Vec<Rat>,
    /// Per point: the kept-row indices where its multiplicity jumps, with the
    /// terminal row appended (the map k(i,·), ℓ = 0..=K_i).
    pub k_jumps: Vec<Vec<usize>>,
    /// Per point: the base-row indices of the same jumps (the map j(i,·)).
    pub j_jumps: Vec<Vec<usize>>,
}

impl MultFiltration {
    /// Builds the level-m filtration from an admissible base filtration.
    /// v below the Gotzmann bound is allowed (small illustrative runs);
    /// `below_gotzmann` reports it.
    pub fn build(base: &WeightedFiltration, u: u64, v: u64) -> Self {
        let nbar = base.last_stage();
        let mut rows = vec![0usize];
        for j in 1..=nbar {
            if base.degree(j) > base.degree(j - 1) {
                rows.push(j);
            }
        }
        if *rows.last().unwrap() != nbar {
            rows.push(nbar);
        }

        let uv = u * v;
        let ctilde: Vec<Vec<u64>> =
            rows.iter().map(|&j| base.c[j].iter().map(|&c| c * uv).collect()).collect();
        let v_r0 = from_u64(v) * &base.r[0];
        let rtilde: Vec<Rat> =
            rows.iter().map(|&j| from_u64(uv) * &base.r[j] + &v_r0).collect();

        let q = base.ctx.points;
        let ntilde = rows.len() - 1;
        let mut k_jumps = Vec::with_capacity(q);
        let mut j_jumps = Vec::with_capacity(q);
        for i in 0..q {
            let mut ks: Vec<usize> =
                (0..ntilde).filter(|&k| ctilde[k][i] < ctilde[k + 1][i]).collect();
            ks.push(ntilde);
            let js: Vec<usize> = base.jump_rows(i);
            debug_assert_eq!(ks.len(), js.len());
            k_jumps.push(ks);
            j_jumps.push(js);
        }

        MultFiltration { base: base.clone(), u, v, m: (u + 1) * v, rows, ctilde, rtilde, k_jumps, j_jumps }
    }

    /// Index of the terminal row, written Ñ elsewhere.
    pub fn last_row(&self) -> usize {
        self.rows.len() - 1
    }

    /// Whether v was taken below the Gotzmann bound for this u.
    pub fn below_gotzmann(&self) -> bool {
        self.v < gotzmann_v0(self.u, self.base.ctx.d, self.base.ctx.g)
    }

    /// Unscaled base weight r_{j_k} of kept row k.
    pub fn r(&self, k: usize) -> &Rat {
        &self.base.r[self.rows[k]]
    }

    /// Unscaled base multiplicity c_{j_k, i} of kept row k.
    pub fn c(&self, k: usize, i: usize) -> u64 {
        self.base.c[self.rows[k]][i]
    }

    /// Base-locus degree of kept row k (unscaled).
    pub fn degree(&self, k: usize) -> u64 {
        self.base.degree(self.rows[k])
    }

    /// Number of jumps K_i of point i.
    pub fn jump_count(&self, i: usize) -> usize {
        self.k_jumps[i].len() - 1
    }

    /// Classifies the behaviour of point `i` across rows k, k+1 and resolves
    /// the pivot rows (s, t). At k = Ñ−1 the missing row k+2 compares equal
    /// to the terminal row, so only Zero, II, or IV can occur there.
    pub fn case_at(&self, k: usize, i: usize) -> Result<CaseInfo> {
        let ntilde = self.last_row();
        if k + 1 > ntilde {
            return Err(Error::RowOutOfRange(k, ntilde - 1));
        }
        let ck = self.ctilde[k][i];
        let ck1 = self.ctilde[k + 1][i];
        if ck1 == 0 {
            return Ok(CaseInfo { case: JumpCase::Zero, s: None, t: None });
        }
        let ck2 = if k + 2 <= ntilde { self.ctilde[k + 2][i] } else { ck1 };
        let jump_at_k = ck < ck1;
        let jump_at_k1 = ck1 < ck2;
        let (case, s, t) = match (jump_at_k, jump_at_k1) {
            (true, true) => (JumpCase::I, None, None),
            (false, false) => (JumpCase::II, self.prev_jump(k, i), Some(self.next_jump(k, i))),
            (false, true) => (JumpCase::III, self.prev_jump(k, i), Some(k + 1)),
            (true, false) => (JumpCase::IV, Some(k), Some(self.next_jump(k, i))),
        };
        Ok(CaseInfo { case, s, t })
    }

    /// Largest row < k where the multiplicity of i jumps. `None` can only
    /// happen for a column that never jumped before k, which the Zero rule
    /// already filtered out.
    fn prev_jump(&self, k: usize, i: usize) -> Option<usize> {
        self.k_jumps[i][..self.k_jumps[i].len() - 1]
            .iter()
            .rev()
            .find(|&&row| row < k)
            .copied()
    }

    /// Smallest jump row > k, or the terminal row when the multiplicity never
    /// jumps again.
    fn next_jump(&self, k: usize, i: usize) -> usize {
        let ntilde = self.last_row();
        self.k_jumps[i][..self.k_jumps[i].len() - 1]
            .iter()
            .find(|&&row| row > k)
            .copied()
            .unwrap_or(ntilde)
    }

    /// The weight bound of the degree-m monomial space with u−w factors from
    /// row k, w from row k+1, and v ambient factors:
    /// v(u−w)·r_k + v·w·r_{k+1} + v·r_0.
    pub fn stage_weight(&self, k: usize, w: u64) -> Rat {
        let v = self.v;
        from_u64(v * (self.u - w)) * self.r(k)
            + from_u64(v * w) * self.r(k + 1)
            + from_u64(v) * &self.base.r[0]
    }
}

/// Per-point jump tables (K_i, j(i,·), k(i,·)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JumpTables {
    pub counts: Vec<usize>,
    pub j_of: Vec<Vec<usize>>,
    pub k_of: Vec<Vec<usize>>,
}

pub fn jump_tables(mf: &MultFiltration) -> JumpTables {
    JumpTables {
        counts: (0..mf.base.ctx.points).map(|i| mf.jump_count(i)).collect(),
        j_of: mf.j_jumps.clone(),
        k_of: mf.k_jumps.clone(),
    }
}

/// Checks the subscript-convention consistency c̃_{k(i,ℓ)} = uv·c_{j(i,ℓ)}
/// for every point and jump index.
pub fn jump_consistency(mf: &MultFiltration) -> bool {
    let uv = mf.u * mf.v;
    (0..mf.base.ctx.points).all(|i| {
        mf.k_jumps[i]
            .iter()
            .zip(&mf.j_jumps[i])
            .all(|(&k, &j)| mf.ctilde[k][i] == uv * mf.base.c[j][i])
    })
}

/// The terminal-stage dimension (d − d_N̄)uv + dv − g + 1.
pub fn terminal_dim(mf: &MultFiltration) -> i64 {
    let ctx = &mf.base.ctx;
    let d_last = mf.base.degree(mf.base.last_stage());
    ((ctx.d - d_last) * mf.u * mf.v + ctx.d * mf.v) as i64 - ctx.g as i64 + 1
}

/// dim H^0(C, O(m)) = dm − g + 1.
pub fn total_dim(mf: &MultFiltration) -> i64 {
    mf.base.ctx.hilbert(mf.m)
}

#[allow(unused_imports)]
pub(crate) use tests_support::example_mult;

mod tests_support {
    use super::*;
    use crate::rational::rat;
    use crate::filtration::GeometricContext;

    /// The three-marked-point filtration scaled to level m; shared by tests
    /// across modules.
    #[allow(dead_code)]
    pub(crate) fn example_mult(u: u64, v: u64) -> MultFiltration {
        let g = 2;
        let proj_dim = 23;
        let ctx = GeometricContext::new(g, proj_dim + g, proj_dim, 3, 3);
        let base = WeightedFiltration {
            ctx,
            z: vec![1, 1, 1, proj_dim - 2],
            r: vec![rat(1, 2), rat(1, 3), rat(1, 6), Rat::zero()],
            c: vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]],
            b_link: vec![rat(9, 10), rat(9, 10), rat(9, 10)],
        };
        MultFiltration::build(&base, u, v)
    }
}

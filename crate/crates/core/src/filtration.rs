//! The combinatorial data of a 1-PS acting on an embedded pointed curve.
//!
//! A 1-PS of SL(N+1) diagonalizes on a basis of the degree-1 sections and
//! induces a weighted filtration. We store only its combinatorial shadow:
//! stage sizes `z`, normalized weights `r`, base-locus multiplicities
//! `c[j][i]` at the support points, and the linearizing weight `B_i` linked
//! to each support point that is also a marked point.

use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{int, rat, Rat};

/// Ambient discrete parameters: genus, degree, projective dimension, marked
/// points, and number of base-locus support points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometricContext {
    /// Genus of the curve.
    pub g: u64,
    /// Degree of the embedding line bundle.
    pub d: u64,
    /// Projective dimension N; the space of degree-1 sections has dimension N+1.
    pub proj_dim: u64,
    /// Number of marked points n.
    pub marked: u64,
    /// Number of base-locus support points q.
    pub points: usize,
    /// h^1 of the embedding bundle; 0 for a nonspecial embedding.
    pub h1: u64,
    /// Whether the embedding is by a complete linear system (forces N+1 = d-g+1).
    pub complete: bool,
}

impl GeometricContext {
    pub fn new(g: u64, d: u64, proj_dim: u64, marked: u64, points: usize) -> Self {
        GeometricContext { g, d, proj_dim, marked, points, h1: 0, complete: true }
    }

    /// dim H^0(C, O(1)) = N + 1.
    pub fn sections(&self) -> u64 {
        self.proj_dim + 1
    }

    /// Hilbert polynomial P(t) = d t - g + 1 evaluated at `t`.
    pub fn hilbert(&self, t: u64) -> i64 {
        (self.d * t) as i64 - self.g as i64 + 1
    }

    /// N - g, the codimension where Riemann-Roch control ends. May be negative.
    pub fn rr_cut(&self) -> i64 {
        self.proj_dim as i64 - self.g as i64
    }
}

/// Linearization data: the coefficient γ and the linearizing weights b_i.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizationConfig {
    pub gamma: Rat,
    pub b: Vec<Rat>,
    /// Strict-inequality margin ε > 0. When absent, a default is derived from
    /// the case slack; see [`LinearizationConfig::epsilon_or_default`].
    pub epsilon: Option<Rat>,
    pub nu: Option<u64>,
    pub a: Option<Vec<Rat>>,
}

impl LinearizationConfig {
    pub fn new(gamma: Rat, b: Vec<Rat>) -> Self {
        LinearizationConfig { gamma, b, epsilon: None, nu: None, a: None }
    }

    pub fn with_epsilon(mut self, epsilon: Rat) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// b = Σ b_i.
    pub fn b_total(&self) -> Rat {
        self.b.iter().fold(Rat::zero(), |acc, x| acc + x)
    }

    /// γ·b.
    pub fn gamma_b(&self) -> Rat {
        self.gamma.clone() * self.b_total()
    }

    /// The explicit ε if set, otherwise half the available slack: half of the
    /// distance to the case-defining inequality, capped by the largest ε the
    /// strengthened estimates tolerate (cases B and C).
    pub fn epsilon_or_default(&self, ctx: &GeometricContext) -> Result<Rat> {
        if let Some(e) = &self.epsilon {
            if !e.is_positive() {
                return Err(Error::EpsilonNotPositive);
            }
            return Ok(e.clone());
        }
        default_epsilon(ctx, self)
    }
}

/// Half the admissible slack for ε given the parameters, i.e. ε such that the
/// resulting case classification is A, B, or C with room to spare.
pub fn default_epsilon(ctx: &GeometricContext, lin: &LinearizationConfig) -> Result<Rat> {
    let n_big = ctx.proj_dim;
    if n_big == 0 {
        return Err(Error::DegenerateProjectiveSpace);
    }
    let n = int(n_big as i64);
    let np1 = int(n_big as i64 + 1);
    let g1 = int(ctx.g as i64 - 1);
    let threshold = g1.clone() / n.clone(); // (g-1)/N
    let half = rat(1, 2);
    if ctx.marked >= 1 {
        let gb = lin.gamma_b();
        if gb > threshold {
            // case A for every ε below the slack
            let slack = (gb - threshold) / np1;
            return Ok(slack / int(2));
        }
        // case B territory: need (g-1)/N + ε(N+1) < 1/2 and the line-B cap
        if threshold >= half {
            return Err(Error::HypothesesViolated('E'));
        }
        let slack = (half - threshold) / np1.clone();
        let cap = (n.clone() - int(2 * ctx.g as i64) + int(3) - int(2) * gb)
            / (int(2) * n * np1);
        if !cap.is_positive() {
            return Err(Error::HypothesesViolated('B'));
        }
        let m = if slack < cap { slack } else { cap };
        Ok(m / int(2))
    } else {
        if ctx.proj_dim as i64 + 2 < 2 * ctx.g as i64 {
            // N < 2g-2
            return Err(Error::HypothesesViolated('D'));
        }
        let cap = (n.clone() - int(2 * ctx.g as i64) + int(3)) / (int(2) * n * np1);
        if !cap.is_positive() {
            return Err(Error::HypothesesViolated('D'));
        }
        Ok(cap / int(2))
    }
}

/// The five-way parameter split driving which tail estimate applies.
/// A-C are certifiable; D and E are excluded by hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    E,
}

impl CaseLabel {
    pub fn as_char(self) -> char {
        match self {
            CaseLabel::A => 'A',
            CaseLabel::B => 'B',
            CaseLabel::C => 'C',
            CaseLabel::D => 'D',
            CaseLabel::E => 'E',
        }
    }

    pub fn certifiable(self) -> bool {
        matches!(self, CaseLabel::A | CaseLabel::B | CaseLabel::C)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Classifies the parameters into cases A-E:
///
/// * A: n ≥ 1 and γb ≥ (g−1)/N + ε(N+1)
/// * B: n ≥ 1 and γb < (g−1)/N + ε(N+1) < 1/2
/// * C: n = 0 and N ≥ 2g−2
/// * D: n = 0 and N < 2g−2
/// * E: n ≥ 1 and γb < (g−1)/N + ε(N+1) ≥ 1/2
pub fn case_classify(ctx: &GeometricContext, lin: &LinearizationConfig) -> Result<CaseLabel> {
    if ctx.proj_dim == 0 {
        return Err(Error::DegenerateProjectiveSpace);
    }
    if ctx.marked == 0 {
        let wide_enough = ctx.proj_dim as i64 + 2 >= 2 * ctx.g as i64; // N >= 2g-2
        return Ok(if wide_enough { CaseLabel::C } else { CaseLabel::D });
    }
    let eps = lin.epsilon_or_default(ctx)?;
    let pivot = int(ctx.g as i64 - 1) / int(ctx.proj_dim as i64)
        + eps * int(ctx.proj_dim as i64 + 1);
    if lin.gamma_b() >= pivot {
        Ok(CaseLabel::A)
    } else if pivot < rat(1, 2) {
        Ok(CaseLabel::B)
    } else {
        Ok(CaseLabel::E)
    }
}

/// Renormalizes integer 1-PS weights so they decrease to 0 and the slot sum
/// is 1: `r_j = (s_{N−j} − s_0) / ((N+1)|s_0|)` for ascending input
/// `s_0 ≤ … ≤ s_N` with Σ s_j = 0.
pub fn normalize_weights(s: &[i64]) -> Result<Vec<Rat>> {
    if s.iter().all(|&x| x == 0) {
        return Err(Error::TrivialOnePs);
    }
    if s.iter().sum::<i64>() != 0 {
        return Err(Error::NotSpecialLinear);
    }
    if s.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::WeightsNotSorted);
    }
    let n = s.len();
    let s0 = s[0];
    debug_assert!(s0 < 0);
    let denom = (n as i64) * s0.abs();
    Ok((0..n).map(|j| rat(s[n - 1 - j] - s0, denom)).collect())
}

/// Groups a nonincreasing weight vector into distinct stages, returning
/// `(z, r)` with `z[j]` the multiplicity of the distinct weight `r[j]`.
pub fn merge_stages(weights: &[Rat]) -> (Vec<u64>, Vec<Rat>) {
    let mut z = Vec::new();
    let mut r = Vec::new();
    for w in weights {
        if r.last() == Some(w) {
            *z.last_mut().unwrap() += 1;
        } else {
            z.push(1);
            r.push(w.clone());
        }
    }
    (z, r)
}

/// One admissibility failure, with enough indices to locate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    StageSum { total: u64, expected: u64 },
    EmptyStage { j: usize },
    WeightsNotStrictlyDecreasing { j: usize },
    LastWeightNonzero,
    WeightSum { sum: String },
    FirstRowNonzero { i: usize },
    ColumnDecreasing { j: usize, i: usize },
    RiemannRoch { j: usize, codegree: u64, bound: u64 },
    Clifford { j: usize, codegree: u64, bound: i64 },
    RowWidth { j: usize },
    LinkNotAWeight { i: usize },
    LinkReused { i: usize },
    IncompleteSystemDim { sections: u64, expected: i64 },
    TooManyPoints { q: usize, d: u64 },
    DegenerateDimension,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::StageSum { total, expected } => {
                write!(f, "stage sizes sum to {total}, expected N+1 = {expected}")
            }
            Violation::EmptyStage { j } => write!(f, "stage {j} has size zero"),
            Violation::WeightsNotStrictlyDecreasing { j } => {
                write!(f, "weights not strictly decreasing at stage {j}")
            }
            Violation::LastWeightNonzero => write!(f, "terminal weight is not zero"),
            Violation::WeightSum { sum } => {
                write!(f, "weighted stage sum is {sum}, expected 1")
            }
            Violation::FirstRowNonzero { i } => {
                write!(f, "row 0 has nonzero multiplicity at point {i}")
            }
            Violation::ColumnDecreasing { j, i } => {
                write!(f, "multiplicity of point {i} decreases at row {j}")
            }
            Violation::RiemannRoch { j, codegree, bound } => {
                write!(f, "Riemann-Roch bound fails at row {j}: codegree {codegree} > codim {bound}")
            }
            Violation::Clifford { j, codegree, bound } => {
                write!(f, "Clifford bound fails at row {j}: codegree {codegree} > {bound}")
            }
            Violation::RowWidth { j } => write!(f, "row {j} has the wrong number of points"),
            Violation::LinkNotAWeight { i } => {
                write!(f, "B_{i} is neither 0 nor one of the linearizing weights")
            }
            Violation::LinkReused { i } => {
                write!(f, "linearizing weight of B_{i} is claimed by more than one point")
            }
            Violation::IncompleteSystemDim { sections, expected } => {
                write!(f, "complete linear system needs N+1 = d-g+1, got {sections} vs {expected}")
            }
            Violation::TooManyPoints { q, d } => {
                write!(f, "q = {q} support points exceed degree d = {d}")
            }
            Violation::DegenerateDimension => write!(f, "projective dimension N must be >= 1"),
        }
    }
}

/// Riemann-Roch/Clifford boundary: `rr` is the largest stage index whose
/// prefix codimension still fits under N−g (if any); `cliff = rr + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Regions {
    pub rr: Option<usize>,
    pub cliff: usize,
}

/// The induced weighted filtration on degree-1 sections.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFiltration {
    pub ctx: GeometricContext,
    /// Stage sizes z_0..z_Nbar; Σ z_j = N+1.
    pub z: Vec<u64>,
    /// Strictly decreasing normalized weights, r_Nbar = 0, Σ z_j r_j = 1.
    pub r: Vec<Rat>,
    /// Base-locus multiplicities c[j][i] of point Q_i at stage j.
    pub c: Vec<Vec<u64>>,
    /// Linearizing weight linked to each support point (a b_k, or 0).
    pub b_link: Vec<Rat>,
}

impl WeightedFiltration {
    /// Index of the last stage, written N̄ elsewhere.
    pub fn last_stage(&self) -> usize {
        self.z.len() - 1
    }

    /// Σ_{τ<j} z_τ = codim of stage j.
    pub fn codim(&self, j: usize) -> u64 {
        self.z[..j].iter().sum()
    }

    /// d_j = Σ_i c[j][i], the degree of the base locus at stage j.
    pub fn degree(&self, j: usize) -> u64 {
        self.c[j].iter().sum()
    }

    /// Per-row codegree bound: codim in the Riemann-Roch region,
    /// 2·codim − (N−g) − h¹ in the Clifford region.
    pub fn row_bound(&self, j: usize) -> i64 {
        let codim = self.codim(j) as i64;
        let cut = self.ctx.rr_cut();
        if codim <= cut {
            codim
        } else {
            2 * codim - cut - self.ctx.h1 as i64
        }
    }

    /// Largest j with Σ_{τ<j} z_τ ≤ N−g, and its successor.
    pub fn regions(&self) -> Regions {
        let cut = self.ctx.rr_cut();
        let mut rr = None;
        for j in 0..self.z.len() {
            if (self.codim(j) as i64) <= cut {
                rr = Some(j);
            } else {
                break;
            }
        }
        Regions { rr, cliff: rr.map_or(0, |j| j + 1) }
    }

    /// Rows j where the multiplicity of point `i` jumps (c[j][i] < c[j+1][i]),
    /// with the terminal row appended: this is j(i,·) for ℓ = 0..=K_i.
    pub fn jump_rows(&self, i: usize) -> Vec<usize> {
        let nbar = self.last_stage();
        let mut rows: Vec<usize> =
            (0..nbar).filter(|&j| self.c[j][i] < self.c[j + 1][i]).collect();
        rows.push(nbar);
        rows
    }

    /// Number of jumps K_i of the multiplicity of point `i`.
    pub fn jump_count(&self, i: usize) -> usize {
        self.jump_rows(i).len() - 1
    }

    /// Checks every admissibility invariant, returning all failures.
    /// An empty list means the filtration is admissible.
    pub fn validate(&self, lin: &LinearizationConfig) -> Vec<Violation> {
        let mut out = Vec::new();
        let ctx = &self.ctx;
        if ctx.complete {
            let expected = ctx.d as i64 - ctx.g as i64 + 1;
            if ctx.sections() as i64 != expected {
                out.push(Violation::IncompleteSystemDim {
                    sections: ctx.sections(),
                    expected,
                });
            }
        }
        if ctx.points > ctx.d as usize {
            out.push(Violation::TooManyPoints { q: ctx.points, d: ctx.d });
        }
        if ctx.proj_dim == 0 {
            out.push(Violation::DegenerateDimension);
        }
        let total: u64 = self.z.iter().sum();
        if total != ctx.sections() {
            out.push(Violation::StageSum { total, expected: ctx.sections() });
        }
        for (j, &zj) in self.z.iter().enumerate() {
            if zj == 0 {
                out.push(Violation::EmptyStage { j });
            }
        }
        for j in 1..self.r.len() {
            if self.r[j] >= self.r[j - 1] {
                out.push(Violation::WeightsNotStrictlyDecreasing { j });
            }
        }
        if self.r.last().map(|x| !x.is_zero()).unwrap_or(true) {
            out.push(Violation::LastWeightNonzero);
        }
        let wsum: Rat = self
            .z
            .iter()
            .zip(&self.r)
            .fold(Rat::zero(), |acc, (&zj, rj)| acc + int(zj as i64) * rj);
        if !wsum.is_one() {
            out.push(Violation::WeightSum { sum: crate::rational::fmt_rat(&wsum) });
        }

        let q = ctx.points;
        for (j, row) in self.c.iter().enumerate() {
            if row.len() != q {
                out.push(Violation::RowWidth { j });
            }
        }
        if self.c.iter().all(|row| row.len() == q) && self.c.len() == self.z.len() {
            for (i, &m) in self.c[0].iter().enumerate() {
                if m != 0 {
                    out.push(Violation::FirstRowNonzero { i });
                }
            }
            for j in 1..self.c.len() {
                for i in 0..q {
                    if self.c[j][i] < self.c[j - 1][i] {
                        out.push(Violation::ColumnDecreasing { j, i });
                    }
                }
            }
            let cut = ctx.rr_cut();
            for j in 0..self.c.len() {
                let codim = self.codim(j) as i64;
                let codegree = self.degree(j);
                if codim <= cut {
                    if codegree as i64 > codim {
                        out.push(Violation::RiemannRoch {
                            j,
                            codegree,
                            bound: codim as u64,
                        });
                    }
                } else {
                    let bound = 2 * codim - cut - ctx.h1 as i64;
                    if codegree as i64 > bound {
                        out.push(Violation::Clifford { j, codegree, bound });
                    }
                }
            }
        }

        // every nonzero B_i must be one of the b_k, each b_k claimed at most once
        let mut pool: Vec<Rat> = lin.b.clone();
        for (i, link) in self.b_link.iter().enumerate() {
            if link.is_zero() {
                continue;
            }
            match pool.iter().position(|b| b == link) {
                Some(idx) => {
                    pool.swap_remove(idx);
                }
                None => {
                    if lin.b.iter().any(|b| b == link) {
                        out.push(Violation::LinkReused { i });
                    } else {
                        out.push(Violation::LinkNotAWeight { i });
                    }
                }
            }
        }
        out
    }

    /// True when `validate` returns no violations.
    pub fn is_admissible(&self, lin: &LinearizationConfig) -> bool {
        self.validate(lin).is_empty()
    }
}

/// Derives the standard moduli-space parameters: d = ν(2g−2+a),
/// N+1 = d−g+1, γ = ν/(2ν−1).
pub fn moduli_context(
    g: u64,
    marked: u64,
    a_weights: &[Rat],
    nu: u64,
) -> Result<(GeometricContext, LinearizationConfig)> {
    let a_total = a_weights.iter().fold(Rat::zero(), |acc, x| acc + x);
    let ample = int(2 * g as i64 - 2) + a_total;
    if !ample.is_positive() {
        return Err(Error::UnstableWeightData);
    }
    let d_rat = int(nu as i64) * ample;
    if !d_rat.is_integer() {
        return Err(Error::NonIntegralDegree);
    }
    let d = d_rat.to_integer();
    let d: u64 = u64::try_from(&d).map_err(|_| Error::NonIntegralDegree)?;
    let proj_dim = (d as i64 - g as i64).max(0) as u64;
    let ctx = GeometricContext::new(g, d, proj_dim, marked, 0);
    let gamma = rat(nu as i64, 2 * nu as i64 - 1);
    let mut lin = LinearizationConfig::new(gamma, Vec::new());
    lin.nu = Some(nu);
    lin.a = Some(a_weights.to_vec());
    Ok((ctx, lin))
}

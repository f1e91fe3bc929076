//! The virtual profile: the polyline through the per-row interpolated
//! codimensions (f(k), r̃_k).
//!
//! For each point the scaled multiplicities at its jump rows are joined by
//! straight segments in the weight × multiplicity plane; evaluating the
//! interpolant at every row weight and summing over points gives the
//! polyline vertices. This is a graph, not a filtration — it exists to make
//! the marked-point bookkeeping tractable, and its area tracks the step
//! profile's area up to a discrepancy of lower order.

use num_traits::Zero;

use crate::error::Result;
use crate::filtration::{LinearizationConfig, WeightedFiltration};
use crate::multfilt::{terminal_dim, JumpCase, MultFiltration};
use crate::rational::{from_u64, int, Rat};

/// Polyline vertices (f(k), r̃_k) with the per-point interpolants.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualProfile {
    /// (f(k), r̃_k) for k = 0..=Ñ.
    pub vertices: Vec<(Rat, Rat)>,
    /// per_point[i][k] = f_i(k).
    pub per_point: Vec<Vec<Rat>>,
    pub terminal_dim: i64,
}

/// Value of the interpolant of point `i` at row `k`:
/// 0 before the first jump, the scaled multiplicity on jump rows, and the
/// straight-line value between the surrounding jump rows otherwise.
pub fn interpolant(mf: &MultFiltration, k: usize, i: usize) -> Result<Rat> {
    let ntilde = mf.last_row();
    if k == ntilde {
        return Ok(from_u64(mf.ctilde[ntilde][i]));
    }
    let info = mf.case_at(k, i)?;
    match info.case {
        JumpCase::Zero => Ok(Rat::zero()),
        JumpCase::I => Ok(from_u64(mf.ctilde[k][i])),
        _ => {
            let (s, t) = (info.s.unwrap(), info.t.unwrap());
            let lam = (&mf.rtilde[k] - &mf.rtilde[t]) / (&mf.rtilde[s] - &mf.rtilde[t]);
            Ok(lam.clone() * from_u64(mf.ctilde[s][i])
                + (int(1) - lam) * from_u64(mf.ctilde[t][i]))
        }
    }
}

impl VirtualProfile {
    pub fn build(mf: &MultFiltration) -> Result<Self> {
        let q = mf.base.ctx.points;
        let ntilde = mf.last_row();
        let mut per_point = vec![Vec::with_capacity(ntilde + 1); q];
        for (i, column) in per_point.iter_mut().enumerate() {
            for k in 0..=ntilde {
                column.push(interpolant(mf, k, i)?);
            }
        }
        let vertices = (0..=ntilde)
            .map(|k| {
                let f = per_point.iter().fold(Rat::zero(), |acc, col| acc + &col[k]);
                (f, mf.rtilde[k].clone())
            })
            .collect();
        Ok(VirtualProfile { vertices, per_point, terminal_dim: terminal_dim(mf) })
    }

    /// Trapezoid area under the polyline plus the terminal rectangle:
    /// Σ ½(f(k+1) − f(k))(r̃_{k+1} + r̃_k) + dim·v·r_0.
    pub fn area(&self) -> Rat {
        let mut area = Rat::zero();
        for pair in self.vertices.windows(2) {
            let (f0, r0) = &pair[0];
            let (f1, r1) = &pair[1];
            area += (f1 - f0) * (r0 + r1) / int(2);
        }
        let terminal_weight = &self.vertices.last().expect("vertices").1;
        area + int(self.terminal_dim) * terminal_weight
    }
}

/// Closed-form area of the (k, i) trapezoid of the virtual profile, split by
/// case. Equals ½(f_i(k+1) − f_i(k))(r̃_{k+1} + r̃_k) exactly.
pub fn cell_area(mf: &MultFiltration, k: usize, i: usize) -> Result<Rat> {
    let info = mf.case_at(k, i)?;
    let u2v2 = from_u64(mf.u * mf.u * mf.v * mf.v);
    let uv2 = from_u64(mf.u * mf.v * mf.v);
    let r0 = &mf.base.r[0];
    match info.case {
        JumpCase::Zero => Ok(Rat::zero()),
        JumpCase::I => {
            let dc = int(mf.c(k + 1, i) as i64 - mf.c(k, i) as i64);
            Ok(u2v2 * (mf.r(k) + mf.r(k + 1)) / int(2) * &dc + uv2 * r0 * &dc)
        }
        _ => {
            let (s, t) = (info.s.unwrap(), info.t.unwrap());
            let dc = int(mf.c(t, i) as i64 - mf.c(s, i) as i64);
            let zeta = (mf.r(k) - mf.r(k + 1)) / (mf.r(s) - mf.r(t));
            Ok(u2v2 * (mf.r(k) + mf.r(k + 1)) / int(2) * &dc * &zeta + uv2 * r0 * &dc * &zeta)
        }
    }
}

/// γ·Σ_i B_i·r_{j(i,0)}: the coefficient the marked points add at order
/// (u+1)²v². Here r_{j(i,0)} is the least weight of a section not vanishing
/// at point i.
pub fn marked_coeff(f: &WeightedFiltration, lin: &LinearizationConfig) -> Rat {
    let mut acc = Rat::zero();
    for (i, b) in f.b_link.iter().enumerate() {
        if !b.is_zero() {
            acc += b * &f.r[f.jump_rows(i)[0]];
        }
    }
    lin.gamma.clone() * acc
}

/// Upper bound for the virtual total weight:
/// area + (u+1)²v²·γ·Σ_i B_i·r_{j(i,0)}.
pub fn t_bound(vp: &VirtualProfile, mf: &MultFiltration, lin: &LinearizationConfig) -> Rat {
    let m2 = from_u64(mf.m * mf.m);
    vp.area() + m2 * marked_coeff(&mf.base, lin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfilt::example_mult;
    use crate::rational::rat;

    fn half_links() -> LinearizationConfig {
        // γ·B_i = 1/2 for every point: γ = 5/9, b_i = 9/10
        LinearizationConfig::new(rat(5, 9), vec![rat(9, 10), rat(9, 10), rat(9, 10)])
            .with_epsilon(rat(1, 1000))
    }

    #[test]
    fn interpolant_values() {
        let mf = example_mult(3, 5);
        let uv = int(15);
        // f_1(1) = uv/3 through the pivots (0, 3)
        assert_eq!(interpolant(&mf, 1, 0).unwrap(), uv.clone() / int(3));
        // case IV pins the interpolant to the current multiplicity
        assert_eq!(interpolant(&mf, 1, 1).unwrap(), int(0));
        assert_eq!(interpolant(&mf, 2, 2).unwrap(), int(0));
        // f(2) = f_1(2) + f_2(2) = (2/3 + 1/2)uv = 7uv/6
        let vp = VirtualProfile::build(&mf).unwrap();
        assert_eq!(vp.vertices[2].0, uv.clone() * rat(7, 6));
    }

    #[test]
    fn vertices_for_all_uv() {
        for (u, v) in [(3i64, 5i64), (20, 5), (10, 7)] {
            let mf = example_mult(u as u64, v as u64);
            let vp = VirtualProfile::build(&mf).unwrap();
            let uv = int(u * v);
            let fs: Vec<Rat> = vp.vertices.iter().map(|(f, _)| f.clone()).collect();
            assert_eq!(
                fs,
                vec![
                    int(0),
                    uv.clone() / int(3),
                    uv.clone() * rat(7, 6),
                    uv.clone() * int(3)
                ]
            );
        }
    }

    #[test]
    fn per_point_interpolants_monotone() {
        let mf = example_mult(6, 5);
        let vp = VirtualProfile::build(&mf).unwrap();
        for col in &vp.per_point {
            for pair in col.windows(2) {
                assert!(pair[0] <= pair[1]);
            }
        }
        // endpoint f(Ñ) = uv·(terminal base-locus degree)
        assert_eq!(vp.vertices.last().unwrap().0, int(30 * 3));
    }

    #[test]
    fn closed_form_area() {
        // ½u²v² + ½d·uv² + ½d·v² − ½(g−1)v, checked across (u,v) and (d,g)
        for (u, v) in [(3i64, 5i64), (20, 5), (10, 7)] {
            let mf = example_mult(u as u64, v as u64);
            let (d, g) = (mf.base.ctx.d as i64, mf.base.ctx.g as i64);
            let vp = VirtualProfile::build(&mf).unwrap();
            let expected = rat(1, 2) * int(u * u * v * v)
                + rat(d, 2) * int(u * v * v)
                + rat(d, 2) * int(v * v)
                - rat(g - 1, 2) * int(v);
            assert_eq!(vp.area(), expected);
        }
    }

    #[test]
    fn flat_polyline_for_empty_base_locus() {
        let mut base = example_mult(3, 5).base;
        base.c = vec![vec![0, 0, 0]; 4];
        let mf = crate::multfilt::MultFiltration::build(&base, 3, 5);
        let vp = VirtualProfile::build(&mf).unwrap();
        assert!(vp.vertices.iter().all(|(f, _)| f.is_zero()));
        let d = base.ctx.d as i64;
        assert_eq!(vp.area(), int(d * 20 - 1) * rat(5, 2));
    }

    #[test]
    fn cell_decomposition_is_exact() {
        for (u, v) in [(3u64, 5u64), (20, 5), (10, 7), (7, 11)] {
            let mf = example_mult(u, v);
            let vp = VirtualProfile::build(&mf).unwrap();
            let mut total = Rat::zero();
            for k in 0..mf.last_row() {
                for i in 0..3 {
                    total += cell_area(&mf, k, i).unwrap();
                }
            }
            total += int(vp.terminal_dim) * &mf.rtilde[mf.last_row()];
            assert_eq!(total, vp.area());
        }
    }

    #[test]
    fn cell_leading_coefficient() {
        // cell (k,i) = (1,1): ½(1/3 + 1/6)·1·((1/3 − 1/6)/(1/2)) = 1/12 at u²v²
        let mf = example_mult(3, 5);
        let area = cell_area(&mf, 1, 0).unwrap();
        let u2v2 = rat(1, 12) * int(225);
        let uv2 = rat(1, 2) * int(75) * rat(1, 3); // r_0·Δc·ζ·uv²
        assert_eq!(area, u2v2 + uv2);
    }

    #[test]
    fn t_bound_closed_form() {
        for (u, v) in [(3i64, 5i64), (20, 5), (10, 7)] {
            let mf = example_mult(u as u64, v as u64);
            let lin = half_links();
            // marked contribution is ½(u²v² + 2uv² + v²) when γB_i = ½
            assert_eq!(marked_coeff(&mf.base, &lin), rat(1, 2));
            let vp = VirtualProfile::build(&mf).unwrap();
            let (d, g) = (mf.base.ctx.d as i64, mf.base.ctx.g as i64);
            // area coefficients plus half of (u+1)²v²: the v² term picks up
            // d/2 + 1/2
            let expected = int(u * u * v * v)
                + (rat(d, 2) + int(1)) * int(u * v * v)
                + (rat(d, 2) + rat(1, 2)) * int(v * v)
                - rat(g - 1, 2) * int(v);
            assert_eq!(t_bound(&vp, &mf, &lin), expected);
        }
    }

    #[test]
    fn unpointed_t_bound_is_the_area() {
        let mut base = example_mult(3, 5).base;
        base.b_link = vec![int(0), int(0), int(0)];
        let mf = crate::multfilt::MultFiltration::build(&base, 3, 5);
        let lin = LinearizationConfig::new(rat(5, 9), vec![]).with_epsilon(rat(1, 1000));
        let vp = VirtualProfile::build(&mf).unwrap();
        assert_eq!(t_bound(&vp, &mf, &lin), vp.area());
    }
}

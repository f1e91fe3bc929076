//! Scenario and report files.
//!
//! Rationals travel as `"numerator/denominator"` strings in lowest terms so
//! every file round-trips byte-for-byte; floats never appear. The scenario
//! schema carries the geometric context, the linearization, the raw
//! filtration data, and the (u, v) run parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{GeometricContext, LinearizationConfig, WeightedFiltration};
use crate::rational::{fmt_rat, parse_rat, Rat};
use crate::verdict::{CertifyOutput, CreepMode, StabilityReport, Thresholds};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ContextDto {
    g: u64,
    d: u64,
    #[serde(rename = "N")]
    n_proj: u64,
    n: u64,
    q: usize,
    #[serde(default, skip_serializing_if = "is_zero_u64")]
    h1: u64,
    #[serde(default = "default_true", skip_serializing_if = "is_true")]
    complete: bool,
}

fn is_zero_u64(x: &u64) -> bool {
    *x == 0
}
fn default_true() -> bool {
    true
}
fn is_true(x: &bool) -> bool {
    *x
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LinearizationDto {
    gamma: String,
    b: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FiltrationDto {
    z: Vec<u64>,
    r: Vec<String>,
    c: Vec<Vec<u64>>,
    #[serde(rename = "B")]
    b_link: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunDto {
    u: u64,
    v: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioDto {
    context: ContextDto,
    linearization: LinearizationDto,
    filtration: FiltrationDto,
    run: RunDto,
}

/// A fully-specified run: filtration, linearization, and (u, v).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub filtration: WeightedFiltration,
    pub lin: LinearizationConfig,
    pub u: u64,
    pub v: u64,
}

fn parse_vec(items: &[String]) -> Result<Vec<Rat>> {
    items.iter().map(|s| parse_rat(s)).collect()
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let dto: ScenarioDto = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("scenario file: {e}")))?;
        let mut ctx = GeometricContext::new(
            dto.context.g,
            dto.context.d,
            dto.context.n_proj,
            dto.context.n,
            dto.context.q,
        );
        ctx.h1 = dto.context.h1;
        ctx.complete = dto.context.complete;
        let mut lin =
            LinearizationConfig::new(parse_rat(&dto.linearization.gamma)?, parse_vec(&dto.linearization.b)?);
        lin.epsilon = dto.linearization.epsilon.as_deref().map(parse_rat).transpose()?;
        lin.nu = dto.linearization.nu;
        lin.a = dto.linearization.a.as_deref().map(parse_vec).transpose()?;
        let filtration = WeightedFiltration {
            ctx,
            z: dto.filtration.z,
            r: parse_vec(&dto.filtration.r)?,
            c: dto.filtration.c,
            b_link: parse_vec(&dto.filtration.b_link)?,
        };
        if dto.run.u == 0 || dto.run.v == 0 {
            return Err(Error::Parse("run.u and run.v must be positive".into()));
        }
        Ok(Scenario { filtration, lin, u: dto.run.u, v: dto.run.v })
    }

    pub fn to_json(&self) -> String {
        let f = &self.filtration;
        let dto = ScenarioDto {
            context: ContextDto {
                g: f.ctx.g,
                d: f.ctx.d,
                n_proj: f.ctx.proj_dim,
                n: f.ctx.marked,
                q: f.ctx.points,
                h1: f.ctx.h1,
                complete: f.ctx.complete,
            },
            linearization: LinearizationDto {
                gamma: fmt_rat(&self.lin.gamma),
                b: self.lin.b.iter().map(fmt_rat).collect(),
                epsilon: self.lin.epsilon.as_ref().map(fmt_rat),
                nu: self.lin.nu,
                a: self.lin.a.as_ref().map(|a| a.iter().map(fmt_rat).collect()),
            },
            filtration: FiltrationDto {
                z: f.z.clone(),
                r: f.r.iter().map(fmt_rat).collect(),
                c: f.c.clone(),
                b_link: f.b_link.iter().map(fmt_rat).collect(),
            },
            run: RunDto { u: self.u, v: self.v },
        };
        let mut out = serde_json::to_string_pretty(&dto).expect("serializable");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, Serialize)]
struct BoundsDto {
    a_bound: String,
    a_vir: String,
    delta_bound: String,
    t_vir: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_vir_case_bound: Option<String>,
    t_chain: String,
    t_direct: String,
    t_bound: String,
    t_best: String,
    rhs: String,
    margin: String,
}

#[derive(Debug, Clone, Serialize)]
struct CreepDto {
    mode: &'static str,
    lhs: String,
    rhs: String,
    holds: bool,
}

#[derive(Debug, Clone, Serialize)]
struct TailDto {
    sum: String,
    bound: String,
    holds: bool,
}

#[derive(Debug, Clone, Serialize)]
struct ThresholdsDto {
    u0: u64,
    v0: u64,
}

#[derive(Debug, Clone, Serialize)]
struct StageDto {
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<u64>,
    space: String,
    members: Vec<String>,
    codim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    codim_exact: Option<u64>,
    weight: String,
}

#[derive(Debug, Clone, Serialize)]
struct ReportDto {
    u: u64,
    v: u64,
    m: u64,
    case: Option<String>,
    verdict: &'static str,
    violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon_max: Option<String>,
    bounds: BoundsDto,
    creep: Option<CreepDto>,
    tail: Option<TailDto>,
    z_series: Vec<i64>,
    z_series_strict: Vec<i64>,
    baseline_leading: String,
    marked_leading: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    thresholds: Option<ThresholdsDto>,
    stages: Vec<StageDto>,
    virtual_vertices: Vec<[String; 2]>,
}

fn creep_mode_name(mode: CreepMode) -> &'static str {
    match mode {
        CreepMode::Plain => "plain",
        CreepMode::StrengthenedB => "strengthened-pointed",
        CreepMode::StrengthenedC => "strengthened-unpointed",
    }
}

fn report_dto(out: &CertifyOutput, thresholds: Option<Thresholds>) -> ReportDto {
    let r: &StabilityReport = &out.report;
    let mut stages = Vec::new();
    let mut virtual_vertices = Vec::new();
    if let Some(artifacts) = &out.artifacts {
        for stage in &artifacts.profile.stages {
            stages.push(StageDto {
                k: stage.k,
                w: Some(stage.w),
                space: stage.members[0].notation(),
                members: stage.members.iter().map(|m| m.notation()).collect(),
                codim: stage.codim_bound,
                codim_exact: stage.codim_exact,
                weight: fmt_rat(&stage.weight),
            });
        }
        let mf = &artifacts.mult;
        let terminal = format!(
            "(V_{}^{} V_0)^{}",
            mf.base.last_stage(),
            mf.u,
            mf.v
        );
        stages.push(StageDto {
            k: mf.last_row(),
            w: None,
            space: terminal.clone(),
            members: vec![terminal],
            codim: artifacts.profile.terminal_codim,
            codim_exact: None,
            weight: fmt_rat(&artifacts.profile.terminal_weight),
        });
        virtual_vertices = artifacts
            .virtual_profile
            .vertices
            .iter()
            .map(|(f, w)| [fmt_rat(f), fmt_rat(w)])
            .collect();
    }
    ReportDto {
        u: r.u,
        v: r.v,
        m: r.m,
        case: r.case_label.map(|c| c.to_string()),
        verdict: r.verdict.as_str(),
        violations: r.violations.clone(),
        epsilon: r.epsilon.as_ref().map(fmt_rat),
        epsilon_max: r.epsilon_max.as_ref().map(fmt_rat),
        bounds: BoundsDto {
            a_bound: fmt_rat(&r.a_bound),
            a_vir: fmt_rat(&r.a_vir),
            delta_bound: fmt_rat(&r.delta_bound),
            t_vir: fmt_rat(&r.t_vir),
            t_vir_case_bound: r.t_vir_case_bound.as_ref().map(fmt_rat),
            t_chain: fmt_rat(&r.t_chain),
            t_direct: fmt_rat(&r.t_direct),
            t_bound: fmt_rat(&r.t_bound),
            t_best: fmt_rat(&r.t_best),
            rhs: fmt_rat(&r.rhs),
            margin: fmt_rat(&r.margin),
        },
        creep: r.creep.as_ref().map(|c| CreepDto {
            mode: creep_mode_name(c.mode),
            lhs: fmt_rat(&c.lhs),
            rhs: fmt_rat(&c.rhs),
            holds: c.holds,
        }),
        tail: r.tail.as_ref().map(|t| TailDto {
            sum: fmt_rat(&t.sum),
            bound: fmt_rat(&t.bound),
            holds: t.holds,
        }),
        z_series: r.z_series.clone(),
        z_series_strict: r.z_series_strict.clone(),
        baseline_leading: fmt_rat(&r.baseline_leading),
        marked_leading: fmt_rat(&r.marked_leading),
        thresholds: thresholds.map(|t| ThresholdsDto { u0: t.u0, v0: t.v0_at_u0 }),
        stages,
        virtual_vertices,
    }
}

/// Serializes a certification run (stage table and virtual vertices
/// included) as pretty JSON.
pub fn report_to_json(out: &CertifyOutput, thresholds: Option<Thresholds>) -> String {
    let mut text =
        serde_json::to_string_pretty(&report_dto(out, thresholds)).expect("serializable");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scenario::three_marked_points;

    fn example_scenario() -> Scenario {
        let ctx = GeometricContext::new(2, 25, 23, 3, 3);
        let lin = LinearizationConfig::new(rat(5, 9), vec![rat(4, 5), rat(4, 5), rat(4, 5)])
            .with_epsilon(rat(1, 1000));
        let filtration = three_marked_points(&ctx, &lin).unwrap();
        Scenario { filtration, lin, u: 3, v: 5 }
    }

    #[test]
    fn round_trip_is_byte_exact() {
        let s = example_scenario();
        let text = s.to_json();
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = Scenario::from_json("{\"context\": {").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line"), "{msg}");
        let bad_rat = example_scenario().to_json().replace("\"1/2\"", "\"1/x\"");
        let err = Scenario::from_json(&bad_rat).unwrap_err();
        assert!(err.to_string().contains("malformed rational"));
    }

    #[test]
    fn report_includes_stage_table() {
        let s = example_scenario();
        let out = crate::verdict::certify(&s.filtration, &s.lin, s.u, s.v).unwrap();
        let json = report_to_json(&out, None);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let stages = value["stages"].as_array().unwrap();
        assert_eq!(stages.len(), 10);
        assert_eq!(stages[4]["space"], "(V_1^2 V_2^1 V_0)^5");
        assert_eq!(stages[4]["codim"], 15);
        assert_eq!(stages[9]["space"], "(V_3^3 V_0)^5");
        assert_eq!(value["virtual_vertices"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn optional_fields_default() {
        let mut s = example_scenario();
        s.lin.epsilon = None;
        let text = s.to_json();
        assert!(!text.contains("epsilon"));
        let back = Scenario::from_json(&text).unwrap();
        assert_eq!(back.lin.epsilon, None);
    }
}

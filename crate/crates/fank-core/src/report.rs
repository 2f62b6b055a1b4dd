//! Machine-readable reports (JSON, schema 1) and their text rendering.
//!
//! Every CLI command produces a [`Report`]; `--json` serializes it, plain
//! output goes through [`Report::render_text`]. Integer data is carried as
//! decimal strings so arbitrary-precision values round-trip exactly.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::classify::Verdict;
use crate::fan::Fan;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<PropertyFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plp: Option<PlpReport>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub dim: usize,
    pub ray_count: usize,
    pub max_cone_count: usize,
    /// Primitive ray generators as decimal strings, fan order.
    pub rays: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyFlags {
    pub smooth: bool,
    pub complete: bool,
    pub simplicial: bool,
    /// None when the fan is incomplete (polytopality is undefined there).
    pub polytopal: Option<bool>,
    pub singular_cones: Vec<SingularConeReport>,
    /// Vacuously true on smooth fans.
    pub all_singular_isolated: bool,
    pub all_singular_distant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularConeReport {
    /// Indices into the fan's ray list.
    pub ray_indices: Vec<usize>,
    pub dim: usize,
    pub isolated: bool,
    pub distant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decided_by: Option<String>,
    pub holding: Vec<String>,
    pub explanation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span_index: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub odd_rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealReport {
    pub cone: String,
    /// Exponent vectors ν of the generators 1 − α^ν, as decimal strings.
    pub exponents: Vec<Vec<String>>,
    /// The generators, formatted as Laurent polynomials.
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlpReport {
    pub action: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_pair: Option<FailingPair>,
    /// Extended PLP file text, for `plp extend`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// Formatted preimage, for `plp preimage`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage: Option<String>,
    /// One line per verified congruence or construction step.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub transcript: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailingPair {
    pub cone_i: String,
    pub cone_j: String,
    /// Nonzero residue of the difference modulo the wall ideal.
    pub witness: String,
}

fn vec_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn fan_summary(path: Option<&str>, fan: &Fan) -> FanSummary {
    FanSummary {
        path: path.map(|s| s.to_string()),
        dim: fan.n,
        ray_count: fan.rays.len(),
        max_cone_count: fan.max_cones.len(),
        rays: fan.rays.iter().map(|r| vec_strings(r)).collect(),
    }
}

pub fn property_flags(fan: &Fan) -> PropertyFlags {
    let report = fan.singularity_report();
    let complete = fan.is_complete();
    PropertyFlags {
        smooth: fan.is_smooth(),
        complete,
        simplicial: fan.is_simplicial(),
        polytopal: if complete {
            Some(fan.is_polytopal().expect("complete fan"))
        } else {
            None
        },
        singular_cones: report
            .singular_cones
            .iter()
            .map(|c| SingularConeReport {
                ray_indices: c.ray_set.iter().copied().collect(),
                dim: c.dim,
                isolated: c.isolated,
                distant: c.distant,
            })
            .collect(),
        all_singular_isolated: report.all_isolated,
        all_singular_distant: report.all_distant,
    }
}

pub fn verdict_report(v: &Verdict) -> VerdictReport {
    VerdictReport {
        outcome: v.outcome.to_string(),
        decided_by: v.decided_by.map(|c| c.label().to_string()),
        holding: v.holding.iter().map(|c| c.label().to_string()).collect(),
        explanation: v.explanation.clone(),
        span_index: v.span_index.as_ref().map(|m| m.to_string()),
        odd_rank: v.odd_rank,
    }
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            fan: None,
            properties: None,
            verdict: None,
            ideal: None,
            plp: None,
            warnings: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if let Some(fan) = &self.fan {
            let path = fan.path.as_deref().unwrap_or("<fan>");
            push(
                &mut out,
                format!(
                    "fan: {path} (dim {}, {} rays, {} maximal cones)",
                    fan.dim, fan.ray_count, fan.max_cone_count
                ),
            );
        }
        for w in &self.warnings {
            push(&mut out, format!("warning: {w}"));
        }
        if let Some(p) = &self.properties {
            push(&mut out, format!("smooth:     {}", p.smooth));
            push(&mut out, format!("complete:   {}", p.complete));
            push(&mut out, format!("simplicial: {}", p.simplicial));
            match p.polytopal {
                Some(b) => push(&mut out, format!("polytopal:  {b}")),
                None => push(&mut out, "polytopal:  n/a (incomplete fan)".to_string()),
            }
            if p.singular_cones.is_empty() {
                push(&mut out, "singular cones: none".to_string());
            } else {
                push(
                    &mut out,
                    format!("singular cones: {}", p.singular_cones.len()),
                );
                for c in &p.singular_cones {
                    let rays: Vec<String> =
                        c.ray_indices.iter().map(|i| format!("{i}")).collect();
                    push(
                        &mut out,
                        format!(
                            "  dim {} rays [{}]  isolated: {}  distant: {}",
                            c.dim,
                            rays.join(", "),
                            c.isolated,
                            c.distant
                        ),
                    );
                }
                push(
                    &mut out,
                    format!("all singular cones isolated: {}", p.all_singular_isolated),
                );
                push(
                    &mut out,
                    format!("all singular cones distant:  {}", p.all_singular_distant),
                );
            }
        }
        if let Some(v) = &self.verdict {
            push(&mut out, format!("verdict: {}", v.outcome));
            if let Some(d) = &v.decided_by {
                push(&mut out, format!("decided by: {d}"));
            }
            if let Some(m) = &v.span_index {
                push(&mut out, format!("ray span index: {m}"));
            }
            if let Some(r) = v.odd_rank {
                push(&mut out, format!("odd K-group rank: {r}"));
            }
            push(&mut out, format!("explanation: {}", v.explanation));
        }
        if let Some(ideal) = &self.ideal {
            push(&mut out, format!("cone: {}", ideal.cone));
            if ideal.generators.is_empty() {
                push(
                    &mut out,
                    "ideal: zero (full-dimensional cone)".to_string(),
                );
            } else {
                push(
                    &mut out,
                    format!("ideal generators ({}):", ideal.generators.len()),
                );
                for (nu, g) in ideal.exponents.iter().zip(&ideal.generators) {
                    push(&mut out, format!("  nu = ({})  {g}", nu.join(", ")));
                }
            }
        }
        if let Some(plp) = &self.plp {
            if let Some(valid) = plp.valid {
                push(&mut out, format!("valid: {valid}"));
            }
            if let Some(fp) = &plp.failing_pair {
                push(
                    &mut out,
                    format!(
                        "failing pair: {} / {}  residue: {}",
                        fp.cone_i, fp.cone_j, fp.witness
                    ),
                );
            }
            if let Some(pre) = &plp.preimage {
                push(&mut out, format!("preimage: {pre}"));
            }
            for line in &plp.transcript {
                push(&mut out, format!("  {line}"));
            }
            if let Some(output) = &plp.output {
                push(&mut out, "extended PLP:".to_string());
                out.push_str(output);
            }
        }
        push(&mut out, format!("elapsed: {} ms", self.elapsed_ms));
        out
    }
}

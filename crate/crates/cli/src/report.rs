//! The JSON report contract.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use stablereg::rational::{parse_ratio, to_ratio_string};
use stablereg::verify::DeltaRegularityReport;
use stablereg::{
    BipartiteGraph, DeltaFormula, DeltaMode, PairCase, PairVerdict, ParameterSet, Part, RegularityPartition, Side,
    VerificationReport, VertexSet,
};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideLists {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartEntry {
    pub members: Vec<usize>,
    pub formula: DeltaFormula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictEntry {
    pub case: PairCase,
    pub exc_left_mass: String,
    pub exc_right_mass: String,
    pub exc_left: Vec<usize>,
    pub exc_right: Vec<usize>,
    pub both_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionReport {
    pub epsilon: String,
    pub parameters: SideLists,
    pub parts_left: Vec<PartEntry>,
    pub parts_right: Vec<PartEntry>,
    pub verdicts: Vec<Vec<VerdictEntry>>,
    pub iterations: usize,
    pub zero_mass_merges: usize,
    pub tool_version: String,
}

fn part_entry(p: &Part) -> PartEntry {
    PartEntry { members: p.members.to_vec(), formula: p.formula.clone() }
}

impl PartitionReport {
    pub fn from_partition(p: &RegularityPartition) -> Self {
        PartitionReport {
            epsilon: to_ratio_string(&p.epsilon),
            parameters: SideLists { left: p.parameters.left.to_vec(), right: p.parameters.right.to_vec() },
            parts_left: p.parts_left.iter().map(part_entry).collect(),
            parts_right: p.parts_right.iter().map(part_entry).collect(),
            verdicts: p
                .verdicts
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| VerdictEntry {
                            case: v.case,
                            exc_left_mass: to_ratio_string(&v.exc_left_mass),
                            exc_right_mass: to_ratio_string(&v.exc_right_mass),
                            exc_left: v.exc_left.to_vec(),
                            exc_right: v.exc_right.to_vec(),
                            both_hold: v.both_hold,
                        })
                        .collect()
                })
                .collect(),
            iterations: p.iterations,
            zero_mass_merges: p.zero_mass_merges,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Rebuilds the partition against `g`. Indices outside the graph are
    /// shape errors; malformed rationals are parse errors.
    pub fn to_partition(&self, g: &BipartiteGraph) -> Result<RegularityPartition, CliError> {
        let set = |side: Side, members: &[usize]| {
            VertexSet::from_indices(side, g.size(side), members.iter().copied())
                .map_err(|e| CliError::Shape(format!("report does not fit the graph: {e}")))
        };
        let rational = |s: &str| parse_ratio(s).map_err(|e| CliError::Parse(format!("report: {e}")));
        let parts = |side: Side, entries: &[PartEntry]| -> Result<Vec<Part>, CliError> {
            entries.iter().map(|e| Ok(Part { members: set(side, &e.members)?, formula: e.formula.clone() })).collect()
        };
        let parameters =
            ParameterSet::new(set(Side::Left, &self.parameters.left)?, set(Side::Right, &self.parameters.right)?)
                .map_err(|e| CliError::Shape(e.to_string()))?;
        let verdicts = self
            .verdicts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        Ok(PairVerdict {
                            case: v.case,
                            exc_left_mass: rational(&v.exc_left_mass)?,
                            exc_right_mass: rational(&v.exc_right_mass)?,
                            exc_left: set(Side::Left, &v.exc_left)?,
                            exc_right: set(Side::Right, &v.exc_right)?,
                            both_hold: v.both_hold,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(RegularityPartition {
            epsilon: rational(&self.epsilon)?,
            parts_left: parts(Side::Left, &self.parts_left)?,
            parts_right: parts(Side::Right, &self.parts_right)?,
            parameters,
            verdicts,
            iterations: self.iterations,
            zero_mass_merges: self.zero_mass_merges,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("report JSON: {e}")))
    }

    pub fn to_canonical_json(&self) -> String {
        canonical(&serde_json::to_value(self).expect("report serializes"))
    }
}

/// Pretty JSON with object keys sorted at every level, plus a trailing newline.
pub fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn mode_json(mode: &DeltaMode) -> Value {
    match mode {
        DeltaMode::Exhaustive => serde_json::json!({ "kind": "exhaustive" }),
        DeltaMode::Sampled { budget, seed } => serde_json::json!({
            "kind": "sampled",
            "budget": budget,
            "seed": seed,
            "prng": stablereg::PRNG_ALGORITHM,
        }),
    }
}

pub fn verification_json(report: &VerificationReport, delta: Option<&DeltaRegularityReport>) -> Value {
    let pairs: Vec<Value> = report
        .pairs
        .iter()
        .map(|p| {
            serde_json::json!({
                "left": p.left,
                "right": p.right,
                "stored_case": p.stored_case,
                "dense_holds": p.dense_holds,
                "sparse_holds": p.sparse_holds,
                "exc_left_mass": to_ratio_string(&p.exc_left_mass),
                "exc_right_mass": to_ratio_string(&p.exc_right_mass),
                "pass": p.pass,
                "failure": p.failure,
            })
        })
        .collect();
    let delta = delta.map(|d| {
        serde_json::json!({
            "delta": to_ratio_string(&d.delta),
            "mode": mode_json(&d.mode),
            "pairs_checked": d.pairs_checked,
            "subset_pairs_tested": d.subset_pairs_tested,
            "violation_count": d.violation_count,
            "violations": d.violations.iter().map(|v| serde_json::json!({
                "left_part": v.left_part,
                "right_part": v.right_part,
                "a_set": v.a_set,
                "b_set": v.b_set,
                "direction": v.direction,
            })).collect::<Vec<_>>(),
        })
    });
    let delta_clean = delta.as_ref().is_none_or(|d| d["violation_count"] == 0);
    serde_json::json!({
        "all_pass": report.all_pass,
        "partition_laws": report.partition_laws,
        "formula_faithful": report.formula_faithful,
        "failures": report.failures,
        "pairs": pairs,
        "delta_regularity": delta,
        "verified": report.all_pass && delta_clean,
        "tool_version": TOOL_VERSION,
    })
}

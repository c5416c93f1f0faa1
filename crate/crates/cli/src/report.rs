use std::collections::BTreeMap;

use pathspace_core::oracle::VerificationReport;
use pathspace_core::{LaurentPolynomial, Limits, OracleLimits, ProcessSet};
use serde::Serialize;

use crate::instance::{one_based, InstanceFile};

/// Exponent (or degree) to exact decimal coefficient.
pub type Coefficients = BTreeMap<i64, String>;

pub fn coefficients(p: &LaurentPolynomial) -> Coefficients {
    p.terms().map(|(e, c)| (e, c.to_string())).collect()
}

/// Reduced Betti numbers read off the series: `betti[i] = series[i + 1]`.
pub fn betti_from_series(p: &LaurentPolynomial) -> Coefficients {
    p.terms().map(|(e, c)| (e - 1, c.to_string())).collect()
}

#[derive(Serialize, Default)]
pub struct ResultDocument {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Coefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Coefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_series: Option<Coefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duality_holds: Option<bool>,
    pub field: String,
    pub connectivity: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remark: Option<String>,
    #[serde(rename = "free_over_Z", skip_serializing_if = "Option::is_none")]
    pub free_over_z: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationDocument>,
    pub metadata: Metadata,
}

#[derive(Serialize, Default)]
pub struct Metadata {
    pub instance: Option<InstanceFile>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dropped_generators: Vec<Vec<usize>>,
    pub caps: Caps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Serialize, Default)]
pub struct Caps {
    pub max_members: usize,
    pub max_matchings: usize,
    pub max_terms: usize,
    pub max_matrix: usize,
    pub max_graph_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_max_weight: Option<usize>,
}

impl Caps {
    pub fn new(limits: &Limits, oracle: Option<&OracleLimits>) -> Self {
        Caps {
            max_members: limits.max_members,
            max_matchings: limits.max_matchings,
            max_terms: limits.max_terms,
            max_matrix: limits.max_matrix_nonzeros,
            max_graph_edges: limits.max_graph_edges,
            oracle_max_weight: oracle.map(|o| o.max_weight),
        }
    }
}

#[derive(Serialize)]
pub struct VerificationDocument {
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub entries: Vec<VerificationRow>,
}

#[derive(Serialize)]
pub struct VerificationRow {
    pub multiplicities: Vec<MultiplicityRow>,
    pub formula: String,
    pub enumerated: Option<String>,
    pub agrees: bool,
}

#[derive(Serialize)]
pub struct MultiplicityRow {
    pub set: Vec<usize>,
    pub multiplicity: u32,
}

impl From<&VerificationReport> for VerificationDocument {
    fn from(r: &VerificationReport) -> Self {
        let entries = r
            .entries
            .iter()
            .map(|e| VerificationRow {
                multiplicities: e
                    .m
                    .entries()
                    .into_iter()
                    .map(|(f, v): (ProcessSet, u32)| MultiplicityRow { set: one_based(f), multiplicity: v })
                    .collect(),
                formula: e.formula.to_string(),
                enumerated: e.enumerated.as_ref().map(ToString::to_string),
                agrees: e.agrees(),
            })
            .collect();
        VerificationDocument {
            passed: r.passed(),
            checked: r.checked(),
            skipped: r.skipped(),
            entries,
        }
    }
}

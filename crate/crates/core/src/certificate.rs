//! Machine-checkable certificate records.
//!
//! Every numeric premise is stored as a [`Check`] with its observed margin,
//! threshold and comparison, so the verdict can be recomputed from the
//! record alone.

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `margin > threshold`
    Above,
    /// `margin >= threshold`
    AtLeast,
    /// `margin <= threshold`
    AtMost,
    /// `margin == threshold`
    Equal,
}

impl Relation {
    pub fn holds(self, margin: f64, threshold: f64) -> bool {
        match self {
            Relation::Above => margin > threshold,
            Relation::AtLeast => margin >= threshold,
            Relation::AtMost => margin <= threshold,
            Relation::Equal => margin == threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub margin: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, margin: f64, relation: Relation, threshold: f64) -> Self {
        Check {
            name: name.into(),
            margin,
            threshold,
            relation,
            pass: relation.holds(margin, threshold),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ObstructionCertified,
    Inconclusive,
}

/// One interval of a forced chain: the branch a continuous selector is
/// locked to, and why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub interval: [f64; 2],
    /// `periodic_endpoints` or `continuation`.
    pub rule: String,
    pub locked: Option<String>,
    /// Branches whose endpoint data ruled them out.
    pub eliminated: Vec<String>,
    pub left_limit: Option<Complex>,
    pub right_limit: Option<Complex>,
}

/// Values of one branch at the two ends of an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointRow {
    pub branch: String,
    pub interval: [f64; 2],
    pub start: Complex,
    pub end: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: String,
    pub checks: Vec<Check>,
    pub chain: Vec<ChainLink>,
    pub verdict: Verdict,
    /// Names of failed checks.
    pub failed: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub endpoints: Vec<EndpointRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contradiction: Option<String>,
}

impl Certificate {
    /// Builds a certificate whose verdict follows from its checks.
    pub fn from_checks(family: impl Into<String>, checks: Vec<Check>, chain: Vec<ChainLink>) -> Self {
        let failed: Vec<String> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        let verdict = if failed.is_empty() && !checks.is_empty() {
            Verdict::ObstructionCertified
        } else {
            Verdict::Inconclusive
        };
        Certificate {
            family: family.into(),
            checks,
            chain,
            verdict,
            failed,
            permutation: None,
            endpoints: Vec::new(),
            contradiction: None,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::ObstructionCertified
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecheckReport {
    pub family: String,
    pub recomputed: Verdict,
    pub recorded: Verdict,
    /// Checks whose recorded `pass` disagrees with margin/threshold.
    pub mismatched: Vec<String>,
    pub consistent: bool,
}

/// Recomputes every check and the verdict from recorded margins, without
/// re-running any numerics.
pub fn recheck(cert: &Certificate) -> RecheckReport {
    let mismatched: Vec<String> = cert
        .checks
        .iter()
        .filter(|c| c.relation.holds(c.margin, c.threshold) != c.pass)
        .map(|c| c.name.clone())
        .collect();
    let all_hold = !cert.checks.is_empty()
        && cert
            .checks
            .iter()
            .all(|c| c.relation.holds(c.margin, c.threshold));
    let recomputed = if all_hold {
        Verdict::ObstructionCertified
    } else {
        Verdict::Inconclusive
    };
    RecheckReport {
        family: cert.family.clone(),
        recomputed,
        recorded: cert.verdict,
        consistent: mismatched.is_empty() && recomputed == cert.verdict,
        mismatched,
    }
}

pub fn recheck_json(text: &str) -> Result<RecheckReport> {
    let cert: Certificate = serde_json::from_str(text).map_err(|e| {
        Error::invalid(format!(
            "certificate line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    Ok(recheck(&cert))
}

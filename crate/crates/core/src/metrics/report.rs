use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::SolverConfig;

/// How much a reported value can be trusted, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    ExactWithinTol,
    Interval,
    UpperBound,
    LowerEstimate,
}

impl ReportKind {
    pub fn weakest(self, other: Self) -> Self {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::ExactWithinTol => "exact-within-tol",
            ReportKind::Interval => "interval",
            ReportKind::UpperBound => "upper-bound",
            ReportKind::LowerEstimate => "lower-estimate",
        }
    }
}

/// A computed quantity with its reliability annotations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub value: f64,
    pub kind: ReportKind,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub flags: Vec<String>,
    pub provenance: String,
}

impl MetricReport {
    pub fn new(value: f64, kind: ReportKind, provenance: String) -> Self {
        Self {
            value,
            kind,
            lo: None,
            hi: None,
            flags: Vec::new(),
            provenance,
        }
    }

    /// Sets `[lo, hi]`, widened to contain `value`.
    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.lo = Some(lo.min(self.value));
        self.hi = Some(hi.max(self.value));
        self
    }

    pub fn with_flags(mut self, flags: impl IntoIterator<Item = String>) -> Self {
        for f in flags {
            self.flag(f);
        }
        self
    }

    pub fn flag(&mut self, f: impl Into<String>) {
        let f = f.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
    }

    /// Whether a solver failed to certify its tolerance.
    pub fn is_tainted(&self) -> bool {
        self.flags
            .iter()
            .any(|f| f == crate::engine::NONCONVERGED || f.starts_with("tainted"))
    }

    /// Merges the kinds and flags of `others` into `self`.
    pub fn absorb<'a>(&mut self, others: impl IntoIterator<Item = &'a MetricReport>) {
        for o in others {
            self.kind = self.kind.weakest(o.kind);
            for f in &o.flags {
                self.flag(f.clone());
            }
        }
    }
}

/// `"<op>#<first 12 hex digits of sha256(config JSON)>"`.
pub fn provenance(op: &str, cfg: &SolverConfig) -> String {
    let json = serde_json::to_vec(cfg).expect("config serializes");
    let digest = Sha256::digest(&json);
    let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
    format!("{op}#{hex}")
}

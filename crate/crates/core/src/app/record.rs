//! Result records and their CSV and JSON forms.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// CSV columns, in order.
pub const CSV_COLUMNS: &[&str] = &[
    "command",
    "label",
    "seed",
    "objective",
    "oracle_objective",
    "ratio_num",
    "ratio_den",
    "ratio",
    "checkpoints",
    "status",
    "wall_ms",
    "config_hash",
];

pub const STATUS_OK: &str = "ok";
/// A check that must hold unconditionally failed.
pub const STATUS_VIOLATION: &str = "invariant-violation";
/// A Monte-Carlo probe fell outside its slack; reported, not fatal.
pub const STATUS_MARGIN: &str = "margin";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub command: String,
    /// Instance path, generator spec or check name.
    pub label: String,
    pub seed: u64,
    pub objective: String,
    pub oracle_objective: Option<String>,
    /// `ratio = ratio_num / ratio_den`.
    pub ratio_num: Option<String>,
    pub ratio_den: Option<String>,
    pub ratio: Option<f64>,
    /// Uncovered counts (or means) at successive checkpoints.
    pub checkpoints: Vec<String>,
    pub status: String,
    pub wall_ms: Option<u64>,
    pub config_hash: String,
    pub details: serde_json::Value,
}

impl ResultRecord {
    pub fn new(command: &str, label: impl Into<String>, seed: u64, objective: impl ToString) -> Self {
        ResultRecord {
            command: command.to_string(),
            label: label.into(),
            seed,
            objective: objective.to_string(),
            oracle_objective: None,
            ratio_num: None,
            ratio_den: None,
            ratio: None,
            checkpoints: Vec::new(),
            status: STATUS_OK.to_string(),
            wall_ms: None,
            config_hash: String::new(),
            details: serde_json::Value::Null,
        }
    }

    /// Records `objective / oracle`.
    pub fn with_oracle(mut self, oracle: impl ToString, ratio: Option<f64>) -> Self {
        let oracle = oracle.to_string();
        self.ratio_num = Some(self.objective.clone());
        self.ratio_den = Some(oracle.clone());
        self.oracle_objective = Some(oracle);
        self.ratio = ratio;
        self
    }

    pub fn fail_if(mut self, failed: bool, status: &str) -> Self {
        if failed && self.status == STATUS_OK {
            self.status = status.to_string();
        }
        self
    }

    pub fn is_violation(&self) -> bool {
        self.status == STATUS_VIOLATION
    }

    fn csv_row(&self) -> Vec<String> {
        let opt = |v: &Option<String>| v.clone().unwrap_or_default();
        vec![
            self.command.clone(),
            self.label.clone(),
            self.seed.to_string(),
            self.objective.clone(),
            opt(&self.oracle_objective),
            opt(&self.ratio_num),
            opt(&self.ratio_den),
            self.ratio.map(|r| r.to_string()).unwrap_or_default(),
            self.checkpoints.join(";"),
            self.status.clone(),
            self.wall_ms.map(|w| w.to_string()).unwrap_or_default(),
            self.config_hash.clone(),
        ]
    }
}

/// Ratio of two non-negative quantities: 1 for `0/0`, `None` for `x/0`.
pub fn ratio(num: f64, den: f64) -> Option<f64> {
    if den > 0.0 {
        Some(num / den)
    } else if num == 0.0 {
        Some(1.0)
    } else {
        None
    }
}

pub fn to_csv(records: &[ResultRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| std::io::Error::other(e.to_string());
    w.write_record(CSV_COLUMNS).map_err(io)?;
    for r in records {
        w.write_record(r.csv_row()).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub fn to_json(records: &[ResultRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("records serialize");
    s.push('\n');
    s
}

/// Hex SHA-256 of the JSON form of `value`.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("configs serialize");
    hex::encode(Sha256::digest(&json))
}

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Histogram from measured bitstring (qubit 0 leftmost) to shot count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    total_shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Counts {
    pub fn from_map(counts: BTreeMap<String, u64>) -> Self {
        let total_shots = counts.values().sum();
        Self { total_shots, counts }
    }

    pub fn from_outcomes<I, S>(outcomes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut tally: HashMap<String, u64> = HashMap::new();
        for o in outcomes {
            *tally.entry(o.into()).or_default() += 1;
        }
        Self::from_map(tally.into_iter().collect())
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Commutative merge of two histograms.
    pub fn merge(&mut self, other: &Counts) {
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += v;
        }
        self.total_shots += other.total_shots;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("counts always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: Counts = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if parsed.counts.values().sum::<u64>() != parsed.total_shots {
            return Err(Error::Parse(format!(
                "counts sum to {} but total_shots is {}",
                parsed.counts.values().sum::<u64>(),
                parsed.total_shots
            )));
        }
        Ok(parsed)
    }

    /// `outcome,count` with quoted bitstrings, in outcome order.
    pub fn to_csv(&self) -> String {
        rows_to_csv(self.counts.iter())
    }

    /// `outcome,count` sorted by descending count, ties by outcome.
    pub fn to_barchart_csv(&self) -> String {
        let mut rows: Vec<(&String, &u64)> = self.counts.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        rows_to_csv(rows)
    }
}

fn rows_to_csv<'a>(rows: impl IntoIterator<Item = (&'a String, &'a u64)>) -> String {
    let mut out = String::from("outcome,count\n");
    for (k, v) in rows {
        let _ = writeln!(out, "\"{k}\",{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_merge() {
        let mut a = Counts::from_outcomes(["01", "01", "10"]);
        assert_eq!(a.total_shots(), 3);
        assert_eq!(a.get("01"), 2);
        a.merge(&Counts::from_outcomes(["10"]));
        assert_eq!(a.get("10"), 2);
        assert_eq!(a.total_shots(), 4);
    }

    #[test]
    fn json_and_csv_layouts() {
        let c = Counts::from_outcomes(["10", "01", "01"]);
        assert_eq!(
            c.to_json(),
            "{\n  \"total_shots\": 3,\n  \"counts\": {\n    \"01\": 2,\n    \"10\": 1\n  }\n}"
        );
        assert_eq!(Counts::from_json(&c.to_json()).unwrap(), c);
        assert_eq!(c.to_csv(), "outcome,count\n\"01\",2\n\"10\",1\n");
        let b = Counts::from_outcomes(["00", "11", "11", "01"]);
        assert_eq!(b.to_barchart_csv(), "outcome,count\n\"11\",2\n\"00\",1\n\"01\",1\n");
    }

    #[test]
    fn rejects_inconsistent_totals() {
        assert!(Counts::from_json(r#"{"total_shots": 5, "counts": {"0": 1}}"#).is_err());
        assert!(Counts::from_json("not json").is_err());
    }
}

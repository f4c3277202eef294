//! Ensemble statistics by streaming (Welford) accumulation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::artifacts::CsvTable;
use crate::error::{Error, Result};

/// Running mean and sum of squared deviations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Welford {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; 0 for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 { 0.0 } else { self.m2 / (self.count - 1) as f64 }
    }

    /// Standard error of the mean; 0 for fewer than two samples.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 { 0.0 } else { (self.variance() / self.count as f64).sqrt() }
    }
}

impl FromIterator<f64> for Welford {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut w = Welford::new();
        iter.into_iter().for_each(|x| w.push(x));
        w
    }
}

/// Mean and standard error of one group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub key: Vec<f64>,
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

/// Groups `value` by the `group_by` columns, in order of first appearance.
pub fn aggregate(table: &CsvTable, group_by: &[&str], value: &str) -> Result<Vec<GroupSummary>> {
    let keys = group_by.iter().map(|c| table.column(c)).collect::<Result<Vec<_>>>()?;
    let v = table.column(value)?;
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut groups: Vec<(Vec<f64>, Welford)> = Vec::new();
    for row in 0..table.len() {
        let key: Vec<f64> = keys.iter().map(|&k| table.number(row, k)).collect::<Result<_>>()?;
        let x = table.number(row, v)?;
        let bits: Vec<u64> = key.iter().map(|k| k.to_bits()).collect();
        let slot = *index.entry(bits).or_insert_with(|| {
            groups.push((key.clone(), Welford::new()));
            groups.len() - 1
        });
        groups[slot].1.push(x);
    }
    if groups.is_empty() && table.len() > 0 {
        return Err(Error::Config("nothing to aggregate".into()));
    }
    Ok(groups
        .into_iter()
        .map(|(key, w)| GroupSummary { key, mean: w.mean(), std_error: w.std_error(), count: w.count() })
        .collect())
}

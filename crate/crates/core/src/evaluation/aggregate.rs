use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classifiers::ClassifierKind;

/// One evaluated cell of an experiment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub method: String,
    pub corpus: String,
    pub theta: f64,
    pub classifier: ClassifierKind,
    pub k: usize,
    pub hl: f64,
    pub size_pct: f64,
}

/// Fields records can be grouped on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupField {
    Method,
    Corpus,
    Theta,
    Classifier,
    K,
}

/// Projection of a record onto the grouped fields; ungrouped fields are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupKey {
    pub method: Option<String>,
    pub corpus: Option<String>,
    theta_bits: Option<u64>,
    pub classifier: Option<ClassifierKind>,
    pub k: Option<usize>,
}

impl GroupKey {
    fn of(record: &EvalRecord, fields: &[GroupField]) -> Self {
        let mut key = GroupKey::default();
        for field in fields {
            match field {
                GroupField::Method => key.method = Some(record.method.clone()),
                GroupField::Corpus => key.corpus = Some(record.corpus.clone()),
                GroupField::Theta => key.theta_bits = Some(record.theta.to_bits()),
                GroupField::Classifier => key.classifier = Some(record.classifier),
                GroupField::K => key.k = Some(record.k),
            }
        }
        key
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta_bits.map(f64::from_bits)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupMean {
    pub key: GroupKey,
    pub hl: f64,
    pub size_pct: f64,
    pub count: usize,
}

/// Unweighted means of `hl` and `size_pct` per group, in order of each group's
/// first appearance in `records`.
pub fn aggregate(records: &[EvalRecord], group_by: &[GroupField]) -> Vec<GroupMean> {
    let mut index: HashMap<GroupKey, usize> = HashMap::new();
    let mut out: Vec<GroupMean> = Vec::new();
    for r in records {
        let key = GroupKey::of(r, group_by);
        let slot = *index.entry(key.clone()).or_insert_with(|| {
            out.push(GroupMean {
                key,
                hl: 0.0,
                size_pct: 0.0,
                count: 0,
            });
            out.len() - 1
        });
        let g = &mut out[slot];
        g.hl += r.hl;
        g.size_pct += r.size_pct;
        g.count += 1;
    }
    for g in &mut out {
        g.hl /= g.count as f64;
        g.size_pct /= g.count as f64;
    }
    out
}

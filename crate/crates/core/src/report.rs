//! Per-weight check reports shared by the torus models.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightRow {
    pub weight: Vec<i64>,
    pub holds: bool,
    /// what was compared for this weight
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub p: u64,
    pub d: usize,
    pub i: i64,
    pub box_bound: i64,
    pub rows: Vec<WeightRow>,
    pub holds: bool,
}

impl CheckReport {
    pub fn new(check: &str, p: u64, d: usize, i: i64, box_bound: i64, rows: Vec<WeightRow>) -> Self {
        let holds = rows.iter().all(|r| r.holds);
        CheckReport { check: check.to_string(), p, d, i, box_bound, rows, holds }
    }

    pub fn failures(&self) -> impl Iterator<Item = &WeightRow> {
        self.rows.iter().filter(|r| !r.holds)
    }
}

pub(crate) fn row(weight: &[i64], holds: bool, kind: &str) -> WeightRow {
    WeightRow { weight: weight.to_vec(), holds, kind: kind.to_string() }
}

/// A named list of pass/fail items, for checks not indexed by torus weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemReport {
    pub check: String,
    pub items: Vec<Item>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Item {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl ItemReport {
    pub fn new(check: &str, items: Vec<Item>) -> Self {
        let holds = items.iter().all(|i| i.holds);
        ItemReport { check: check.to_string(), items, holds }
    }
}

pub(crate) fn item(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Item {
    Item { name: name.into(), holds, detail: detail.into() }
}

use serde::{Deserialize, Serialize};

/// A solution scored on two minimized objectives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub id: String,
    pub hl: f64,
    pub size_pct: f64,
}

impl ParetoPoint {
    pub fn new(id: impl Into<String>, hl: f64, size_pct: f64) -> Self {
        ParetoPoint {
            id: id.into(),
            hl,
            size_pct,
        }
    }
}

/// `a` dominates `b`: no worse in both objectives and strictly better in one.
pub fn dominates(a: &ParetoPoint, b: &ParetoPoint) -> bool {
    a.hl <= b.hl && a.size_pct <= b.size_pct && (a.hl < b.hl || a.size_pct < b.size_pct)
}

/// `true` for every non-dominated point, by a sort-and-sweep over the first objective.
pub fn pareto_mask(points: &[ParetoPoint]) -> Vec<bool> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .hl
            .total_cmp(&points[b].hl)
            .then(points[a].size_pct.total_cmp(&points[b].size_pct))
    });
    let mut mask = vec![false; points.len()];
    // smallest size among points with strictly smaller hl
    let mut best_before = f64::INFINITY;
    let mut start = 0;
    while start < order.len() {
        let hl = points[order[start]].hl;
        let mut end = start;
        while end < order.len() && points[order[end]].hl == hl {
            end += 1;
        }
        // sorted by size within the group, so the first holds the group minimum
        let group_min = points[order[start]].size_pct;
        for &i in &order[start..end] {
            let size = points[i].size_pct;
            mask[i] = size < best_before && size <= group_min;
        }
        best_before = best_before.min(group_min);
        start = end;
    }
    mask
}

/// Non-dominated points in input order; exact duplicates of a frontier point are kept.
pub fn pareto_front(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    pareto_mask(points)
        .into_iter()
        .zip(points)
        .filter(|(keep, _)| *keep)
        .map(|(_, p)| p.clone())
        .collect()
}

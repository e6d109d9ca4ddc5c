use serde::{Deserialize, Serialize};

use crate::error::{PumError, Result};
use crate::model::{LegislatorMeta, Vote, VoteMatrix};

/// A legislator chosen by row index or by label pattern. A pattern selects
/// every row whose label contains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LegSelector {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeGroup {
    pub members: Vec<LegSelector>,
    pub party: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessControl {
    pub leg_rm: Vec<LegSelector>,
    pub combine_leg: Vec<MergeGroup>,
    /// Largest tolerated fraction of missing votes per legislator.
    pub lop_leg: f64,
    /// Items whose minority share is at or below this are dropped.
    pub lop_issue: f64,
}

impl Default for PreprocessControl {
    fn default() -> Self {
        Self { leg_rm: Vec::new(), combine_leg: Vec::new(), lop_leg: 1.0, lop_issue: 0.0 }
    }
}

impl PreprocessControl {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lop_leg) {
            return Err(PumError::InvalidParameter(format!("lop_leg must lie in [0, 1], got {}", self.lop_leg)));
        }
        if !(0.0..0.5).contains(&self.lop_issue) {
            return Err(PumError::InvalidParameter(format!(
                "lop_issue must lie in [0, 0.5), got {}",
                self.lop_issue
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub removed_legislators: Vec<String>,
    pub merged: Vec<Vec<String>>,
    pub merge_conflicts: usize,
    pub dropped_items: Vec<String>,
    pub dropped_legislators: Vec<String>,
    pub warnings: Vec<String>,
}

fn resolve(votes: &VoteMatrix, sel: &LegSelector, warnings: &mut Vec<String>) -> Result<Vec<usize>> {
    match sel {
        LegSelector::Index(i) if *i < votes.n_rows() => Ok(vec![*i]),
        LegSelector::Index(i) => Err(PumError::UnknownLegislator(format!("row index {i} out of range"))),
        LegSelector::Name(p) => {
            let hits: Vec<usize> = (0..votes.n_rows()).filter(|&i| votes.row_labels()[i].contains(p.as_str())).collect();
            if hits.is_empty() {
                warnings.push(format!("no legislator matches {p:?}; skipped"));
            }
            Ok(hits)
        }
    }
}

fn remove_rows(votes: &VoteMatrix, drop: &[bool]) -> Result<VoteMatrix> {
    let keep: Vec<usize> = (0..votes.n_rows()).filter(|&i| !drop[i]).collect();
    if keep.is_empty() {
        return Err(PumError::InvalidData("preprocessing removed every legislator".into()));
    }
    votes.select(&keep, &(0..votes.n_cols()).collect::<Vec<_>>())
}

fn merge(votes: &VoteMatrix, control: &PreprocessControl, report: &mut PreprocessReport) -> Result<VoteMatrix> {
    let n = votes.n_rows();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut groups = Vec::new();
    for (g, group) in control.combine_leg.iter().enumerate() {
        let mut rows = Vec::new();
        for sel in &group.members {
            for i in resolve(votes, sel, &mut report.warnings)? {
                if let Some(h) = owner[i] {
                    if h != g || rows.contains(&i) {
                        return Err(PumError::InvalidParameter(format!(
                            "legislator {:?} appears in more than one merge slot",
                            votes.row_labels()[i]
                        )));
                    }
                }
                owner[i] = Some(g);
                rows.push(i);
            }
        }
        groups.push(rows);
    }
    let nj = votes.n_cols();
    let mut outcomes = Vec::new();
    let mut labels = Vec::new();
    let mut meta = Vec::new();
    let src_meta = votes.meta();
    for i in 0..n {
        let (row, m) = match owner[i] {
            None => (votes.row(i).to_vec(), src_meta.map(|m| m[i].clone())),
            Some(g) if groups[g][0] != i => continue,
            Some(g) => {
                let rows = &groups[g];
                let mut row = votes.row(i).to_vec();
                for &other in &rows[1..] {
                    for (cell, &v) in row.iter_mut().zip(votes.row(other)) {
                        if v == Vote::Missing {
                            continue;
                        }
                        if *cell == Vote::Missing {
                            *cell = v;
                        } else if *cell != v {
                            report.merge_conflicts += 1;
                        }
                    }
                }
                if rows.len() > 1 {
                    report.merged.push(rows.iter().map(|&r| votes.row_labels()[r].clone()).collect());
                }
                let mut m = src_meta.map(|m| m[i].clone()).unwrap_or_default();
                if let Some(p) = &control.combine_leg[g].party {
                    m.party = Some(p.clone());
                }
                (row, Some(m))
            }
        };
        outcomes.extend(row);
        labels.push(votes.row_labels()[i].clone());
        meta.push(m);
    }
    debug_assert_eq!(outcomes.len(), labels.len() * nj);
    let mut out = VoteMatrix::new(outcomes, labels, votes.col_labels().to_vec())?;
    if let Some(t) = votes.time_index() {
        out = out.with_time_index(t.to_vec())?;
    }
    if src_meta.is_some() || control.combine_leg.iter().any(|g| g.party.is_some()) {
        out = out.with_meta(meta.into_iter().map(Option::unwrap_or_default).collect::<Vec<LegislatorMeta>>())?;
    }
    Ok(out)
}

fn lopsided(votes: &VoteMatrix, j: usize, threshold: f64) -> bool {
    let (mut yes, mut no) = (0usize, 0usize);
    for i in 0..votes.n_rows() {
        match votes.get(i, j) {
            Vote::Yes => yes += 1,
            Vote::No => no += 1,
            Vote::Missing => {}
        }
    }
    let total = yes + no;
    total == 0 || yes.min(no) as f64 / total as f64 <= threshold
}

/// Clean a vote matrix: drop listed legislators, merge groups, then drop
/// lopsided items and legislators missing more than `lop_leg` of the
/// remaining items. The last two filters repeat until neither removes
/// anything, so the output is a fixed point of the whole procedure.
pub fn preprocess(votes: &VoteMatrix, control: &PreprocessControl) -> Result<(VoteMatrix, PreprocessReport)> {
    control.validate()?;
    let mut report = PreprocessReport::default();

    let mut drop = vec![false; votes.n_rows()];
    for sel in &control.leg_rm {
        for i in resolve(votes, sel, &mut report.warnings)? {
            drop[i] = true;
        }
    }
    report.removed_legislators =
        (0..votes.n_rows()).filter(|&i| drop[i]).map(|i| votes.row_labels()[i].clone()).collect();
    let mut m = remove_rows(votes, &drop)?;
    m = merge(&m, control, &mut report)?;

    loop {
        let keep_cols: Vec<usize> = (0..m.n_cols()).filter(|&j| !lopsided(&m, j, control.lop_issue)).collect();
        if keep_cols.is_empty() {
            return Err(PumError::InvalidData("preprocessing removed every item".into()));
        }
        let dropped_cols = m.n_cols() - keep_cols.len();
        for j in (0..m.n_cols()).filter(|j| !keep_cols.contains(j)) {
            report.dropped_items.push(m.col_labels()[j].clone());
        }
        m = m.select(&(0..m.n_rows()).collect::<Vec<_>>(), &keep_cols)?;

        let nj = m.n_cols() as f64;
        let drop: Vec<bool> = (0..m.n_rows())
            .map(|i| m.row(i).iter().filter(|v| !v.is_observed()).count() as f64 / nj > control.lop_leg)
            .collect();
        let dropped_rows = drop.iter().filter(|d| **d).count();
        for i in (0..m.n_rows()).filter(|&i| drop[i]) {
            report.dropped_legislators.push(m.row_labels()[i].clone());
        }
        m = remove_rows(&m, &drop)?;
        if dropped_cols == 0 && dropped_rows == 0 {
            break;
        }
    }
    Ok((m, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Vote::*;

    fn mat(rows: &[Vec<Vote>], names: &[&str]) -> VoteMatrix {
        let cols = (1..=rows[0].len()).map(|j| format!("v{j}")).collect();
        VoteMatrix::new(rows.concat(), names.iter().map(|s| s.to_string()).collect(), cols).unwrap()
    }

    #[test]
    fn unanimous_item_dropped_at_zero() {
        let m = mat(&[vec![Yes, Yes, No], vec![Yes, No, Missing], vec![Missing, No, No]], &["a", "b", "c"]);
        let (out, rep) = preprocess(&m, &PreprocessControl::default()).unwrap();
        assert_eq!(out.col_labels(), &["v2".to_string()]);
        assert_eq!(rep.dropped_items, vec!["v1".to_string(), "v3".to_string()]);
    }

    #[test]
    fn disjoint_merge_has_no_conflicts() {
        let m = mat(
            &[vec![Yes, No, Missing, Missing], vec![No, Yes, Yes, No], vec![Missing, Missing, No, Yes]],
            &["AMASH (R MI-3)", "OTHER (D XX-1)", "AMASH (I MI-3)"],
        );
        let ctl = PreprocessControl {
            combine_leg: vec![MergeGroup { members: vec![LegSelector::Name("AMASH".into())], party: Some("I".into()) }],
            ..Default::default()
        };
        let (out, rep) = preprocess(&m, &ctl).unwrap();
        assert_eq!(out.n_rows(), 2);
        assert_eq!(out.row(0), &[Yes, No, No, Yes]);
        assert_eq!(rep.merge_conflicts, 0);
        assert_eq!(out.meta().unwrap()[0].party.as_deref(), Some("I"));
    }

    #[test]
    fn merge_conflict_keeps_first() {
        let m = mat(&[vec![Yes, No], vec![No, Yes], vec![Yes, No]], &["a", "b", "c"]);
        let ctl = PreprocessControl {
            combine_leg: vec![MergeGroup { members: vec![LegSelector::Index(1), LegSelector::Index(0)], party: None }],
            ..Default::default()
        };
        let (out, rep) = preprocess(&m, &ctl).unwrap();
        assert_eq!(rep.merge_conflicts, 2);
        // the first-listed member names the row and wins conflicts
        assert_eq!(out.row_labels(), &["b", "c"]);
        assert_eq!(out.row(0), &[No, Yes]);
        let bad = PreprocessControl {
            combine_leg: vec![
                MergeGroup { members: vec![LegSelector::Index(0), LegSelector::Index(1)], party: None },
                MergeGroup { members: vec![LegSelector::Index(1), LegSelector::Index(2)], party: None },
            ],
            ..Default::default()
        };
        assert!(preprocess(&m, &bad).is_err());
    }

    #[test]
    fn lop_leg_boundary_is_strict() {
        let mut rows = vec![vec![Yes; 10], vec![No; 10], vec![Yes; 10], vec![No; 10]];
        for j in 0..6 {
            rows[2][j] = Missing;
        }
        for j in 0..7 {
            rows[3][j] = Missing;
        }
        let m = mat(&rows, &["yes", "no", "sixty", "seventy"]);
        let ctl = PreprocessControl { lop_leg: 0.6, ..Default::default() };
        let (out, rep) = preprocess(&m, &ctl).unwrap();
        assert_eq!(out.row_labels(), &["yes", "no", "sixty"]);
        assert_eq!(rep.dropped_legislators, vec!["seventy".to_string()]);
    }

    #[test]
    fn removal_by_pattern_and_errors() {
        let m = mat(
            &[vec![Yes, No], vec![No, Yes], vec![Yes, No], vec![Missing, Missing]],
            &["TRUMP (R NA)", "b", "c", "d"],
        );
        let ctl = PreprocessControl { leg_rm: vec![LegSelector::Name("TRUMP".into())], ..Default::default() };
        let (out, rep) = preprocess(&m, &ctl).unwrap();
        assert_eq!(rep.removed_legislators, vec!["TRUMP (R NA)".to_string()]);
        assert_eq!(out.row_labels(), &["b", "c", "d"]);
        // without "b" every item is unanimous
        let all = PreprocessControl { leg_rm: vec![LegSelector::Index(0), LegSelector::Index(1)], ..ctl.clone() };
        assert!(preprocess(&m, &all).is_err());
        assert!(preprocess(&m, &PreprocessControl { lop_issue: 0.5, ..Default::default() }).is_err());
    }

    #[test]
    fn idempotent_on_example() {
        let m = mat(
            &[
                vec![Yes, No, Yes, Missing, No],
                vec![No, No, Yes, Yes, Missing],
                vec![Missing, Missing, Missing, No, Yes],
                vec![Yes, Yes, No, No, No],
            ],
            &["a", "b", "c", "d"],
        );
        let ctl = PreprocessControl { lop_leg: 0.3, lop_issue: 0.2, ..Default::default() };
        let (once, _) = preprocess(&m, &ctl).unwrap();
        let (twice, _) = preprocess(&once, &ctl).unwrap();
        assert_eq!(once, twice);
    }
}

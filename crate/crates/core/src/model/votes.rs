use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{PumError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vote {
    Yes,
    No,
    Missing,
}

impl Vote {
    pub fn is_observed(self) -> bool {
        self != Vote::Missing
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegislatorMeta {
    pub party: Option<String>,
    pub state: Option<String>,
    pub district: Option<String>,
}

/// Legislators x items matrix of outcomes with labels.
///
/// Outcomes are stored row-major. The optional time index assigns a term
/// identifier to every column (dynamic models only).
#[derive(Clone, Debug, PartialEq)]
pub struct VoteMatrix {
    n_rows: usize,
    n_cols: usize,
    outcomes: Vec<Vote>,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
    time_index: Option<Vec<String>>,
    meta: Option<Vec<LegislatorMeta>>,
}

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(PumError::InvalidData(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

impl VoteMatrix {
    pub fn new(outcomes: Vec<Vote>, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        let (n_rows, n_cols) = (row_labels.len(), col_labels.len());
        if n_rows == 0 || n_cols == 0 {
            return Err(PumError::InvalidData(format!(
                "vote matrix must be non-empty, got {n_rows} x {n_cols}"
            )));
        }
        if outcomes.len() != n_rows * n_cols {
            return Err(PumError::DimensionMismatch(format!(
                "{} outcomes for a {n_rows} x {n_cols} matrix",
                outcomes.len()
            )));
        }
        check_unique(&row_labels, "row")?;
        check_unique(&col_labels, "column")?;
        Ok(Self {
            n_rows,
            n_cols,
            outcomes,
            row_labels,
            col_labels,
            time_index: None,
            meta: None,
        })
    }

    /// Matrix with generated labels `leg1..` and `item1..`.
    pub fn from_rows(rows: &[Vec<Vote>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(PumError::DimensionMismatch("ragged rows".into()));
        }
        let outcomes = rows.iter().flatten().copied().collect();
        let rl = (1..=rows.len()).map(|i| format!("leg{i}")).collect();
        let cl = (1..=n_cols).map(|j| format!("item{j}")).collect();
        Self::new(outcomes, rl, cl)
    }

    pub fn with_time_index(mut self, terms: Vec<String>) -> Result<Self> {
        if terms.len() != self.n_cols {
            return Err(PumError::DimensionMismatch(format!(
                "time index has {} entries for {} items",
                terms.len(),
                self.n_cols
            )));
        }
        self.time_index = Some(terms);
        Ok(self)
    }

    pub fn with_meta(mut self, meta: Vec<LegislatorMeta>) -> Result<Self> {
        if meta.len() != self.n_rows {
            return Err(PumError::DimensionMismatch(format!(
                "{} metadata records for {} legislators",
                meta.len(),
                self.n_rows
            )));
        }
        self.meta = Some(meta);
        Ok(self)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> Vote {
        self.outcomes[i * self.n_cols + j]
    }

    pub fn row(&self, i: usize) -> &[Vote] {
        &self.outcomes[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn outcomes(&self) -> &[Vote] {
        &self.outcomes
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    pub fn time_index(&self) -> Option<&[String]> {
        self.time_index.as_deref()
    }

    pub fn meta(&self) -> Option<&[LegislatorMeta]> {
        self.meta.as_deref()
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.row_labels.iter().position(|l| l == label)
    }

    /// Resolve a legislator by exact label, else by unique substring.
    pub fn find_row(&self, pattern: &str) -> Result<usize> {
        if let Some(i) = self.row_index(pattern) {
            return Ok(i);
        }
        let hits: Vec<usize> = (0..self.n_rows)
            .filter(|&i| self.row_labels[i].contains(pattern))
            .collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            [] => Err(PumError::UnknownLegislator(pattern.to_string())),
            _ => Err(PumError::AmbiguousLegislator {
                pattern: pattern.to_string(),
                matches: hits.iter().map(|&i| self.row_labels[i].clone()).collect(),
            }),
        }
    }

    pub fn n_observed(&self) -> usize {
        self.outcomes.iter().filter(|v| v.is_observed()).count()
    }

    /// Keep the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let mut outcomes = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                outcomes.push(self.get(i, j));
            }
        }
        let mut out = Self::new(
            outcomes,
            rows.iter().map(|&i| self.row_labels[i].clone()).collect(),
            cols.iter().map(|&j| self.col_labels[j].clone()).collect(),
        )?;
        if let Some(t) = &self.time_index {
            out.time_index = Some(cols.iter().map(|&j| t[j].clone()).collect());
        }
        if let Some(m) = &self.meta {
            out.meta = Some(rows.iter().map(|&i| m[i].clone()).collect());
        }
        Ok(out)
    }

    pub fn term_index(&self) -> Option<TermIndex> {
        self.time_index.as_deref().map(TermIndex::from_labels)
    }
}

/// Sorted distinct terms and the term position of every item.
#[derive(Clone, Debug, PartialEq)]
pub struct TermIndex {
    pub terms: Vec<String>,
    pub item_term: Vec<usize>,
}

impl TermIndex {
    /// Terms sort numerically when every label parses as a number,
    /// lexicographically otherwise.
    pub fn from_labels(labels: &[String]) -> Self {
        let mut terms: Vec<String> = labels.to_vec();
        terms.sort();
        terms.dedup();
        let numeric: Option<Vec<f64>> = terms.iter().map(|t| t.trim().parse::<f64>().ok()).collect();
        if let Some(keys) = numeric {
            let mut paired: Vec<(f64, String)> = keys.into_iter().zip(terms).collect();
            paired.sort_by(|a, b| a.0.total_cmp(&b.0));
            terms = paired.into_iter().map(|(_, t)| t).collect();
        }
        let item_term = labels
            .iter()
            .map(|l| terms.iter().position(|t| t == l).expect("term present"))
            .collect();
        Self { terms, item_term }
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }
}

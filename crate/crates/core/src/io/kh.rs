//! Fixed-width roll-call files: one legislator per line, one digit per vote.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{PumError, Result};
use crate::model::{LegislatorMeta, Vote, VoteMatrix};

/// Inclusive 1-based column ranges of the header fields and the first vote
/// column. Defaults follow the Voteview `.ord` convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KhLayout {
    pub congress: (usize, usize),
    pub icpsr_id: (usize, usize),
    pub state_code: (usize, usize),
    pub district: (usize, usize),
    pub state_name: (usize, usize),
    pub party: (usize, usize),
    pub occupancy: (usize, usize),
    pub attain: (usize, usize),
    pub name: (usize, usize),
    pub votes_start: usize,
}

impl Default for KhLayout {
    fn default() -> Self {
        Self {
            congress: (1, 3),
            icpsr_id: (4, 8),
            state_code: (9, 10),
            district: (11, 12),
            state_name: (13, 20),
            party: (21, 23),
            occupancy: (24, 24),
            attain: (25, 25),
            name: (26, 36),
            votes_start: 37,
        }
    }
}

impl KhLayout {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.congress,
            self.icpsr_id,
            self.state_code,
            self.district,
            self.state_name,
            self.party,
            self.occupancy,
            self.attain,
            self.name,
        ];
        for (a, b) in fields {
            if a == 0 || b < a || b >= self.votes_start {
                return Err(PumError::InvalidParameter(format!(
                    "layout field ({a}, {b}) must be 1-based and end before the vote column {}",
                    self.votes_start
                )));
            }
        }
        Ok(())
    }
}

/// Which raw codes count as Yes, No and Missing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeDictionary {
    pub yes: Vec<u8>,
    pub no: Vec<u8>,
    pub missing: Vec<u8>,
}

impl Default for CodeDictionary {
    fn default() -> Self {
        Self { yes: vec![1, 2, 3], no: vec![4, 5, 6], missing: vec![0, 7, 8, 9] }
    }
}

impl CodeDictionary {
    pub fn map(&self, code: u8) -> Option<Vote> {
        if self.yes.contains(&code) {
            Some(Vote::Yes)
        } else if self.no.contains(&code) {
            Some(Vote::No)
        } else if self.missing.contains(&code) {
            Some(Vote::Missing)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Legislator {
    pub congress: u32,
    pub icpsr_id: u32,
    pub state_code: u32,
    pub district: u32,
    pub state_name: String,
    pub party_code: u32,
    pub occupancy: u8,
    pub attain: u8,
    pub name: String,
    /// Row label such as `BYRNE (R AL-1)`.
    pub display: String,
}

impl Legislator {
    pub fn party(&self) -> String {
        party_abbrev(self.party_code)
    }

    pub fn state(&self) -> Option<&'static str> {
        state_abbrev(self.state_code)
    }
}

/// Raw codes plus legislator records.
#[derive(Clone, Debug, PartialEq)]
pub struct RollCall {
    pub legislators: Vec<Legislator>,
    /// Row-major `n_leg x n_votes` raw codes.
    pub codes: Vec<u8>,
    pub n_votes: usize,
    pub dictionary: CodeDictionary,
    pub warnings: Vec<String>,
}

impl RollCall {
    pub fn n_leg(&self) -> usize {
        self.legislators.len()
    }

    pub fn code(&self, i: usize, j: usize) -> u8 {
        self.codes[i * self.n_votes + j]
    }

    /// Count of every raw code value.
    pub fn code_counts(&self) -> Vec<(u8, usize)> {
        let mut counts = [0usize; 10];
        for &c in &self.codes {
            counts[c as usize] += 1;
        }
        (0..10u8).zip(counts).filter(|(_, n)| *n > 0).collect()
    }
}

pub fn party_abbrev(code: u32) -> String {
    match code {
        100 => "D".into(),
        200 => "R".into(),
        328 => "I".into(),
        other => other.to_string(),
    }
}

/// Postal abbreviation for an ICPSR state code.
pub fn state_abbrev(code: u32) -> Option<&'static str> {
    Some(match code {
        1 => "CT",
        2 => "ME",
        3 => "MA",
        4 => "NH",
        5 => "RI",
        6 => "VT",
        11 => "DE",
        12 => "NJ",
        13 => "NY",
        14 => "PA",
        21 => "IL",
        22 => "IN",
        23 => "MI",
        24 => "OH",
        25 => "WI",
        31 => "IA",
        32 => "KS",
        33 => "MN",
        34 => "MO",
        35 => "NE",
        36 => "ND",
        37 => "SD",
        40 => "VA",
        41 => "AL",
        42 => "AR",
        43 => "FL",
        44 => "GA",
        45 => "LA",
        46 => "MS",
        47 => "NC",
        48 => "SC",
        49 => "TX",
        51 => "KY",
        52 => "MD",
        53 => "OK",
        54 => "TN",
        55 => "DC",
        56 => "WV",
        61 => "AZ",
        62 => "CO",
        63 => "ID",
        64 => "MT",
        65 => "NV",
        66 => "NM",
        67 => "UT",
        68 => "WY",
        71 => "CA",
        72 => "OR",
        73 => "WA",
        81 => "AK",
        82 => "HI",
        _ => return None,
    })
}

fn display_name(name: &str, party_code: u32, state_code: u32, district: u32) -> String {
    let party = party_abbrev(party_code);
    match state_abbrev(state_code) {
        Some(st) => format!("{name} ({party} {st}-{district})"),
        None => format!("{name} ({party} NA)"),
    }
}

fn field<'a>(line: &'a str, (a, b): (usize, usize), lineno: usize) -> Result<&'a str> {
    line.get(a - 1..b)
        .map(str::trim)
        .ok_or_else(|| PumError::Parse { line: lineno, msg: format!("columns {a}-{b} out of range") })
}

fn number(line: &str, cols: (usize, usize), lineno: usize, what: &str) -> Result<u32> {
    let s = field(line, cols, lineno)?;
    if s.is_empty() {
        return Ok(0);
    }
    s.parse().map_err(|_| PumError::Parse { line: lineno, msg: format!("{what} {s:?} is not a number") })
}

/// Parse a fixed-width file. Duplicate display names get `_2`, `_3`, ...
/// suffixes, each recorded as a warning.
pub fn parse_kh<R: BufRead>(reader: R, layout: &KhLayout) -> Result<RollCall> {
    layout.validate()?;
    let mut legislators = Vec::new();
    let mut codes = Vec::new();
    let mut n_votes = None;
    let mut warnings = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (k, line) in reader.lines().enumerate() {
        let lineno = k + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        if !line.is_ascii() {
            return Err(PumError::Parse { line: lineno, msg: "non-ASCII content".into() });
        }
        let votes = line.get(layout.votes_start - 1..).unwrap_or("");
        match n_votes {
            None => n_votes = Some(votes.len()),
            Some(n) if n != votes.len() => {
                return Err(PumError::Parse {
                    line: lineno,
                    msg: format!("ragged line: {} vote columns, expected {n}", votes.len()),
                });
            }
            _ => {}
        }
        for (c, ch) in votes.bytes().enumerate() {
            if !ch.is_ascii_digit() {
                return Err(PumError::Parse {
                    line: lineno,
                    msg: format!("vote column {} holds {:?}, not a digit", c + 1, ch as char),
                });
            }
            codes.push(ch - b'0');
        }
        let name = field(line, layout.name, lineno)?.to_string();
        let state_code = number(line, layout.state_code, lineno, "state code")?;
        let district = number(line, layout.district, lineno, "district")?;
        let party_code = number(line, layout.party, lineno, "party code")?;
        let mut display = display_name(&name, party_code, state_code, district);
        let count = seen.entry(display.clone()).or_insert(0);
        *count += 1;
        if *count > 1 {
            let renamed = format!("{display}_{count}");
            warnings.push(format!("line {lineno}: duplicate name {display:?} renamed to {renamed:?}"));
            display = renamed;
        }
        legislators.push(Legislator {
            congress: number(line, layout.congress, lineno, "congress")?,
            icpsr_id: number(line, layout.icpsr_id, lineno, "ICPSR id")?,
            state_code,
            district,
            state_name: field(line, layout.state_name, lineno)?.to_string(),
            party_code,
            occupancy: number(line, layout.occupancy, lineno, "occupancy")? as u8,
            attain: number(line, layout.attain, lineno, "attain")? as u8,
            name,
            display,
        });
    }
    let n_votes = n_votes.ok_or_else(|| PumError::InvalidData("no legislator lines".into()))?;
    if n_votes == 0 {
        return Err(PumError::InvalidData("no vote columns".into()));
    }
    Ok(RollCall { legislators, codes, n_votes, dictionary: CodeDictionary::default(), warnings })
}

fn put(out: &mut String, value: &str, (a, b): (usize, usize), right: bool) {
    let width = b - a + 1;
    let v: String = value.chars().take(width).collect();
    if right {
        let _ = write!(out, "{v:>width$}");
    } else {
        let _ = write!(out, "{v:<width$}");
    }
}

/// Inverse of [`parse_kh`] for layouts whose fields are contiguous and
/// ordered as in the default layout.
pub fn write_kh(rc: &RollCall, layout: &KhLayout) -> Result<String> {
    layout.validate()?;
    let mut out = String::new();
    for (i, l) in rc.legislators.iter().enumerate() {
        let mut line = String::new();
        let fields: [(String, (usize, usize), bool); 9] = [
            (l.congress.to_string(), layout.congress, true),
            (l.icpsr_id.to_string(), layout.icpsr_id, true),
            (l.state_code.to_string(), layout.state_code, true),
            (l.district.to_string(), layout.district, true),
            (l.state_name.clone(), layout.state_name, false),
            (l.party_code.to_string(), layout.party, true),
            (l.occupancy.to_string(), layout.occupancy, true),
            (l.attain.to_string(), layout.attain, true),
            (l.name.clone(), layout.name, false),
        ];
        for (v, cols, right) in &fields {
            if line.len() + 1 > cols.0 {
                return Err(PumError::InvalidParameter("writer needs ordered, non-overlapping fields".into()));
            }
            while line.len() + 1 < cols.0 {
                line.push(' ');
            }
            put(&mut line, v, *cols, *right);
        }
        while line.len() + 1 < layout.votes_start {
            line.push(' ');
        }
        line.extend((0..rc.n_votes).map(|j| (b'0' + rc.code(i, j)) as char));
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Map codes through the dictionary. Columns are labelled `Vote 1`, ...
pub fn to_vote_matrix(rc: &RollCall) -> Result<VoteMatrix> {
    let mut outcomes = Vec::with_capacity(rc.codes.len());
    for i in 0..rc.n_leg() {
        for j in 0..rc.n_votes {
            let code = rc.code(i, j);
            let v = rc
                .dictionary
                .map(code)
                .ok_or(PumError::UnmappedCode { code, row: i + 1, col: j + 1 })?;
            outcomes.push(v);
        }
    }
    let rows = rc.legislators.iter().map(|l| l.display.clone()).collect();
    let cols = (1..=rc.n_votes).map(|j| format!("Vote {j}")).collect();
    let meta = rc
        .legislators
        .iter()
        .map(|l| LegislatorMeta {
            party: Some(l.party()),
            state: l.state().map(str::to_string),
            district: l.state().map(|_| l.district.to_string()),
        })
        .collect();
    VoteMatrix::new(outcomes, rows, cols)?.with_meta(meta)
}

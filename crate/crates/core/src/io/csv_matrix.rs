use std::io::{Read, Write};
use std::path::Path;

use crate::error::{PumError, Result};
use crate::model::{Vote, VoteMatrix};

fn parse_cell(s: &str, line: usize) -> Result<Vote> {
    match s.trim() {
        "1" | "TRUE" | "True" | "true" => Ok(Vote::Yes),
        "0" | "FALSE" | "False" | "false" => Ok(Vote::No),
        "NA" => Ok(Vote::Missing),
        other => Err(PumError::Parse { line, msg: format!("cell {other:?} is not 1, 0, TRUE, FALSE or NA") }),
    }
}

/// Read a matrix whose header holds item names after one leading cell and
/// whose rows start with the legislator name.
pub fn read_csv_matrix<R: Read>(reader: R) -> Result<VoteMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.len() < 2 {
        return Err(PumError::Parse { line: 1, msg: "header needs a name column and at least one item".into() });
    }
    let cols: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut outcomes = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        if rec.len() != header.len() {
            return Err(PumError::Parse {
                line,
                msg: format!("{} fields, expected {}", rec.len(), header.len()),
            });
        }
        rows.push(rec[0].to_string());
        for cell in rec.iter().skip(1) {
            outcomes.push(parse_cell(cell, line)?);
        }
    }
    VoteMatrix::new(outcomes, rows, cols)
}

pub fn load_csv_matrix(path: &Path) -> Result<VoteMatrix> {
    read_csv_matrix(std::fs::File::open(path)?)
}

/// Write in the 1/0/NA form read by [`read_csv_matrix`].
pub fn write_csv_matrix<W: Write>(votes: &VoteMatrix, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(std::iter::once("legislator").chain(votes.col_labels().iter().map(String::as_str)))?;
    for i in 0..votes.n_rows() {
        let cells = votes.row(i).iter().map(|v| match v {
            Vote::Yes => "1",
            Vote::No => "0",
            Vote::Missing => "NA",
        });
        w.write_record(std::iter::once(votes.row_labels()[i].as_str()).chain(cells))?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_csv_matrix(votes: &VoteMatrix, path: &Path) -> Result<()> {
    write_csv_matrix(votes, std::io::BufWriter::new(std::fs::File::create(path)?))
}

/// Read `item,term` pairs and return the terms in the matrix's column order.
pub fn read_time_index<R: Read>(reader: R, votes: &VoteMatrix) -> Result<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut map = std::collections::HashMap::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(PumError::Parse { line: k + 2, msg: "expected item,term".into() });
        }
        map.insert(rec[0].to_string(), rec[1].to_string());
    }
    votes
        .col_labels()
        .iter()
        .map(|c| {
            map.get(c)
                .cloned()
                .ok_or_else(|| PumError::InvalidData(format!("no term for item {c:?}")))
        })
        .collect()
}

pub fn write_time_index<W: Write>(votes: &VoteMatrix, writer: W) -> Result<()> {
    let terms = votes
        .time_index()
        .ok_or_else(|| PumError::InvalidData("matrix has no time index".into()))?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["item", "term"])?;
    for (c, t) in votes.col_labels().iter().zip(terms) {
        w.write_record([c, t])?;
    }
    w.flush()?;
    Ok(())
}

//! Reading and writing roll-call data and posterior draws.

mod csv_matrix;
mod kh;
mod preprocess;
mod samples;

pub use csv_matrix::{
    load_csv_matrix, read_csv_matrix, read_time_index, save_csv_matrix, write_csv_matrix, write_time_index,
};
pub use kh::{
    parse_kh, party_abbrev, state_abbrev, to_vote_matrix, write_kh, CodeDictionary, KhLayout, Legislator, RollCall,
};
pub use preprocess::{preprocess, LegSelector, MergeGroup, PreprocessControl, PreprocessReport};
pub use samples::{read_samples, write_samples, CsvSink, LAYOUT_FILE, RUN_FILE};

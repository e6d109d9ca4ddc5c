//! Posterior draws on disk: one CSV per parameter block plus `layout.json`
//! and `run.json`.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use ndarray::{Array2, Array3};

use crate::error::{PumError, Result};
use crate::sampler::{Draw, DrawLayout, DrawSink, PosteriorSamples, RunInfo};

pub const LAYOUT_FILE: &str = "layout.json";
pub const RUN_FILE: &str = "run.json";

struct Writers {
    beta: csv::Writer<BufWriter<File>>,
    alpha: csv::Writer<BufWriter<File>>,
    delta: csv::Writer<BufWriter<File>>,
    z: csv::Writer<BufWriter<File>>,
    rho: Option<csv::Writer<BufWriter<File>>>,
}

/// Streams draws into a directory, flushing every `flush_every` draws.
pub struct CsvSink {
    dir: PathBuf,
    flush_every: usize,
    n: usize,
    writers: Option<Writers>,
}

impl CsvSink {
    pub fn create(dir: &Path, flush_every: usize) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), flush_every: flush_every.max(1), n: 0, writers: None })
    }

    fn open(&self, name: &str) -> Result<csv::Writer<BufWriter<File>>> {
        Ok(csv::Writer::from_writer(BufWriter::new(File::create(self.dir.join(name))?)))
    }

    fn flush(&mut self) -> Result<()> {
        if let Some(w) = &mut self.writers {
            w.beta.flush()?;
            w.alpha.flush()?;
            w.delta.flush()?;
            w.z.flush()?;
            if let Some(r) = &mut w.rho {
                r.flush()?;
            }
        }
        Ok(())
    }
}

fn pair_header(prefix: &str, items: &[String]) -> Vec<String> {
    items
        .iter()
        .flat_map(|it| [format!("{prefix}1:{it}"), format!("{prefix}2:{it}")])
        .collect()
}

fn fmt(x: f64) -> String {
    x.to_string()
}

impl DrawSink for CsvSink {
    fn start(&mut self, layout: &DrawLayout) -> Result<()> {
        serde_json::to_writer_pretty(File::create(self.dir.join(LAYOUT_FILE))?, layout)?;
        let mut w = Writers {
            beta: self.open("beta.csv")?,
            alpha: self.open("alpha.csv")?,
            delta: self.open("delta.csv")?,
            z: self.open("z.csv")?,
            rho: if layout.is_dynamic() { Some(self.open("rho.csv")?) } else { None },
        };
        w.beta.write_record(layout.beta_labels().iter().map(|l| format!("beta:{l}")))?;
        w.alpha.write_record(pair_header("alpha", &layout.item_labels))?;
        w.delta.write_record(pair_header("delta", &layout.item_labels))?;
        w.z.write_record(layout.item_labels.iter().map(|l| format!("z:{l}")))?;
        if let Some(r) = &mut w.rho {
            r.write_record(["rho"])?;
        }
        self.writers = Some(w);
        Ok(())
    }

    fn record(&mut self, draw: &Draw<'_>) -> Result<()> {
        let w = self
            .writers
            .as_mut()
            .ok_or_else(|| PumError::InvalidData("sink used before start".into()))?;
        w.beta.write_record(draw.beta.iter().map(|&b| fmt(b)))?;
        w.alpha.write_record(draw.items.iter().flat_map(|it| it.alpha.map(fmt)))?;
        w.delta.write_record(draw.items.iter().flat_map(|it| it.delta.map(fmt)))?;
        w.z.write_record(draw.items.iter().map(|it| it.z.as_i8().to_string()))?;
        if let (Some(r), Some(rho)) = (&mut w.rho, draw.rho) {
            r.write_record([fmt(rho)])?;
        }
        self.n += 1;
        if self.n % self.flush_every == 0 {
            self.flush()?;
        }
        Ok(())
    }

    fn finish(&mut self, info: &RunInfo) -> Result<()> {
        self.flush()?;
        serde_json::to_writer_pretty(File::create(self.dir.join(RUN_FILE))?, info)?;
        Ok(())
    }
}

/// Write in-memory samples in the streaming layout.
pub fn write_samples(dir: &Path, samples: &PosteriorSamples) -> Result<()> {
    let mut sink = CsvSink::create(dir, 1000)?;
    sink.start(&samples.layout)?;
    let j = samples.layout.n_item();
    for s in 0..samples.n_draws() {
        let beta: Vec<f64> = samples.beta.row(s).to_vec();
        let items: Vec<_> = (0..j).map(|k| samples.item(s, k)).collect();
        let rho = samples.rho.as_ref().map(|r| r[s]);
        sink.record(&Draw { iteration: s, beta: &beta, items: &items, rho })?;
    }
    match &samples.info {
        Some(info) => sink.finish(info),
        None => sink.flush(),
    }
}

fn read_block(path: &Path, expect_header: &[String]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != expect_header {
        return Err(PumError::DimensionMismatch(format!("{} header does not match layout", path.display())));
    }
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| PumError::Parse { line: k + 2, msg: format!("{}: bad number {c:?}", path.display()) })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Read draws written by [`CsvSink`] or [`write_samples`].
pub fn read_samples(dir: &Path) -> Result<PosteriorSamples> {
    let layout: DrawLayout = serde_json::from_reader(File::open(dir.join(LAYOUT_FILE))?)?;
    let items = &layout.item_labels;
    let beta_h: Vec<String> = layout.beta_labels().iter().map(|l| format!("beta:{l}")).collect();
    let z_h: Vec<String> = items.iter().map(|l| format!("z:{l}")).collect();
    let beta = read_block(&dir.join("beta.csv"), &beta_h)?;
    let alpha = read_block(&dir.join("alpha.csv"), &pair_header("alpha", items))?;
    let delta = read_block(&dir.join("delta.csv"), &pair_header("delta", items))?;
    let z = read_block(&dir.join("z.csv"), &z_h)?;
    let rho = if layout.is_dynamic() {
        Some(read_block(&dir.join("rho.csv"), &["rho".to_string()])?.into_iter().map(|r| r[0]).collect())
    } else {
        None
    };
    let s = beta.len();
    if [alpha.len(), delta.len(), z.len()].iter().any(|&n| n != s) {
        return Err(PumError::DimensionMismatch("sample files hold different numbers of draws".into()));
    }
    let (p, j) = (layout.beta_params.len(), items.len());
    let flat = |rows: Vec<Vec<f64>>| rows.into_iter().flatten().collect::<Vec<f64>>();
    let mut out = PosteriorSamples::new(
        layout,
        Array2::from_shape_vec((s, p), flat(beta)).map_err(|e| PumError::DimensionMismatch(e.to_string()))?,
        Array3::from_shape_vec((s, j, 2), flat(alpha)).map_err(|e| PumError::DimensionMismatch(e.to_string()))?,
        Array3::from_shape_vec((s, j, 2), flat(delta)).map_err(|e| PumError::DimensionMismatch(e.to_string()))?,
        Array2::from_shape_vec((s, j), flat(z).into_iter().map(|v| v as i8).collect())
            .map_err(|e| PumError::DimensionMismatch(e.to_string()))?,
        rho,
    )?;
    let run = dir.join(RUN_FILE);
    if run.exists() {
        out.info = Some(serde_json::from_reader(File::open(run)?)?);
    }
    Ok(out)
}

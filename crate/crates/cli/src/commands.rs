use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use pum::analytics::{calc_waic, item_char, post_rank, predict_probs_with_budget, tune_hyper};
use pum::io::{
    load_csv_matrix, parse_kh, preprocess, read_samples, read_time_index, save_csv_matrix, to_vote_matrix, CsvSink,
    LegSelector, MergeGroup,
};
use pum::model::VoteMatrix;
use pum::sampler::{Chain, FitOptions, Identification, ModelData, SignRefs};

use crate::args::*;
use crate::config::{apply_control, apply_hyper, parse_pair, ConfigFile};
use crate::error::{CliError, CliResult};
use crate::manifest::{InputFile, Manifest};

fn csv_writer(path: &Path) -> CliResult<csv::Writer<BufWriter<File>>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "NA".into()
    } else {
        x.to_string()
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn load_votes(path: &Path) -> CliResult<VoteMatrix> {
    if !path.exists() {
        return Err(CliError::io(path, std::io::Error::new(std::io::ErrorKind::NotFound, "no such file")));
    }
    Ok(load_csv_matrix(path)?)
}

fn selector(s: &str) -> LegSelector {
    match s.trim().parse::<usize>() {
        Ok(i) => LegSelector::Index(i),
        Err(_) => LegSelector::Name(s.to_string()),
    }
}

fn find_leg(votes: &VoteMatrix, s: &str) -> CliResult<usize> {
    match s.trim().parse::<usize>() {
        Ok(i) if i < votes.n_rows() => Ok(i),
        Ok(i) => Err(CliError::data(format!("row index {i} out of range"))),
        Err(_) => Ok(votes.find_row(s)?),
    }
}

pub fn run_preprocess(a: &PreprocessArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    let (votes, input) = match (&a.votes, &a.ord) {
        (Some(p), _) => (load_votes(p)?, p.clone()),
        (None, Some(p)) => {
            let f = File::open(p).map_err(|e| CliError::io(p, e))?;
            let rc = parse_kh(std::io::BufReader::new(f), &cfg.layout)?;
            for w in &rc.warnings {
                eprintln!("pum: warning: {w}");
            }
            eprintln!("{} legislators and {} roll calls", rc.n_leg(), rc.n_votes);
            (to_vote_matrix(&rc)?, p.clone())
        }
        (None, None) => return Err(CliError::config("one of --votes or --ord is required")),
    };
    let ctl = &mut cfg.preprocess;
    if !a.leg_rm.is_empty() {
        ctl.leg_rm = a.leg_rm.iter().map(|s| selector(s)).collect();
    }
    if !a.combine.is_empty() {
        ctl.combine_leg = a
            .combine
            .iter()
            .map(|g| {
                let (members, party) = match g.rsplit_once(':') {
                    Some((m, p)) => (m, Some(p.trim().to_string())),
                    None => (g.as_str(), None),
                };
                MergeGroup { members: members.split(',').map(selector).collect(), party }
            })
            .collect();
    }
    if let Some(v) = a.lop_leg {
        ctl.lop_leg = v;
    }
    if let Some(v) = a.lop_issue {
        ctl.lop_issue = v;
    }
    let (clean, report) = preprocess(&votes, ctl)?;
    for w in &report.warnings {
        eprintln!("pum: warning: {w}");
    }
    save_csv_matrix(&clean, &a.out)?;
    let mut outputs = vec![a.out.clone()];
    if let Some(r) = &a.report {
        serde_json::to_writer_pretty(File::create(r).map_err(|e| CliError::io(r, e))?, &report)?;
        outputs.push(r.clone());
    }
    println!("{} legislators and {} items after preprocessing", clean.n_rows(), clean.n_cols());
    Manifest {
        tool: "pum",
        version: env!("CARGO_PKG_VERSION"),
        command: "preprocess",
        argv: argv.to_vec(),
        config: cfg,
        inputs: vec![InputFile::hash(&input)?],
        run: None,
        outputs,
    }
    .write(&sidecar(&a.out))
}

pub fn run_tune(a: &TuneArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    cfg.hyper = apply_hyper(cfg.hyper.clone(), &a.hyper)?;
    let theta = tune_hyper(&cfg.hyper, a.n_leg, a.n_issue, a.seed)?;
    let mut w = csv_writer(&a.out)?;
    w.write_record(["theta"])?;
    for t in &theta {
        w.write_record([num(*t)])?;
    }
    w.flush()?;
    let n = theta.len() as f64;
    let mean = theta.iter().sum::<f64>() / n;
    let extreme = theta.iter().filter(|t| **t <= 0.1 || **t >= 0.9).count() as f64 / n;
    println!("mean theta {mean:.4}; share outside (0.1, 0.9) {extreme:.4}");
    Manifest {
        tool: "pum",
        version: env!("CARGO_PKG_VERSION"),
        command: "tune-hyper",
        argv: argv.to_vec(),
        config: cfg,
        inputs: Vec::new(),
        run: Some(serde_json::json!({ "n_leg": a.n_leg, "n_issue": a.n_issue, "seed": a.seed })),
        outputs: vec![a.out.clone()],
    }
    .write(&sidecar(&a.out))
}

fn run_chain(
    votes: &VoteMatrix,
    data: ModelData,
    dynamic: bool,
    ident: Identification,
    cfg: &ConfigFile,
    ctl: &ControlArgs,
    out: &Path,
) -> CliResult<pum::sampler::RunInfo> {
    let opts = FitOptions { fixed_items: None, progress_every: ctl.progress_every };
    let mut chain = Chain::new(data, cfg.hyper.clone(), cfg.control.clone(), dynamic, ident, opts)?;
    let mut sink = CsvSink::create(out, ctl.flush_every)?;
    let info = chain.run(votes, &mut sink)?;
    for w in &info.warnings {
        eprintln!("pum: warning: {w}");
    }
    Ok(info)
}

pub fn run_fit_static(a: &FitStaticArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    cfg.hyper = apply_hyper(cfg.hyper.clone(), &a.hyper)?;
    cfg.control = apply_control(cfg.control.clone(), &a.control)?;
    let votes = load_votes(&a.votes)?;
    let pos = find_leg(&votes, &a.pos_leg)?;
    let data = ModelData::new_static(&votes)?;
    let info = run_chain(&votes, data, false, Identification::Static(pos), cfg, &a.control, &a.out)?;
    println!("stored {} draws in {}", info.n_draws, a.out.display());
    Manifest {
        tool: "pum",
        version: env!("CARGO_PKG_VERSION"),
        command: "fit-static",
        argv: argv.to_vec(),
        config: cfg,
        inputs: vec![InputFile::hash(&a.votes)?],
        run: Some(serde_json::json!({ "pos_leg": votes.row_labels()[pos], "info": info })),
        outputs: vec![a.out.clone()],
    }
    .write(&a.out.join("manifest.json"))
}

/// `PATTERN[@i,j,...]` with 1-based positions inside the legislator's span.
fn parse_ref(s: &str, votes: &VoteMatrix, data: &ModelData) -> CliResult<(usize, Vec<usize>)> {
    let (pat, pos) = match s.rsplit_once('@') {
        Some((p, list)) => (p, Some(list)),
        None => (s, None),
    };
    let leg = find_leg(votes, pat)?;
    let span = &data.spans[leg];
    let terms = match pos {
        None => Vec::new(),
        Some(list) => list
            .split(',')
            .map(|k| {
                let k: usize = k
                    .trim()
                    .parse()
                    .map_err(|_| CliError::config(format!("bad term position {k:?} in {s:?}")))?;
                span.get(k.wrapping_sub(1)).copied().ok_or_else(|| {
                    CliError::config(format!("term position {k} outside the {} terms of {pat:?}", span.len()))
                })
            })
            .collect::<CliResult<Vec<_>>>()?,
    };
    Ok((leg, terms))
}

pub fn run_fit_dynamic(a: &FitDynamicArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    cfg.hyper = apply_hyper(cfg.hyper.clone(), &a.hyper)?;
    cfg.control = apply_control(cfg.control.clone(), &a.control)?;
    if a.pos_leg.is_empty() && a.neg_leg.is_empty() {
        return Err(CliError::config("fit-dynamic needs at least one --pos-leg or --neg-leg"));
    }
    let votes = load_votes(&a.votes)?;
    let f = File::open(&a.time_index).map_err(|e| CliError::io(&a.time_index, e))?;
    let ti = read_time_index(f, &votes)?;
    let votes = votes.with_time_index(ti)?;
    let data = ModelData::new_dynamic(&votes)?;
    let refs = SignRefs {
        pos: a.pos_leg.iter().map(|s| parse_ref(s, &votes, &data)).collect::<CliResult<_>>()?,
        neg: a.neg_leg.iter().map(|s| parse_ref(s, &votes, &data)).collect::<CliResult<_>>()?,
    };
    let info = run_chain(&votes, data, true, Identification::Dynamic(refs.clone()), cfg, &a.control, &a.out)?;
    println!("stored {} draws in {}", info.n_draws, a.out.display());
    Manifest {
        tool: "pum",
        version: env!("CARGO_PKG_VERSION"),
        command: "fit-dynamic",
        argv: argv.to_vec(),
        config: cfg,
        inputs: vec![InputFile::hash(&a.votes)?, InputFile::hash(&a.time_index)?],
        run: Some(serde_json::json!({ "sign_refs": refs, "info": info })),
        outputs: vec![a.out.clone()],
    }
    .write(&a.out.join("manifest.json"))
}

fn samples_for(votes_path: &Path, dir: &Path) -> CliResult<(VoteMatrix, pum::sampler::PosteriorSamples)> {
    let votes = load_votes(votes_path)?;
    let samples = read_samples(dir)?;
    if votes.row_labels() != samples.layout.leg_labels.as_slice()
        || votes.col_labels() != samples.layout.item_labels.as_slice()
    {
        return Err(CliError::data("vote matrix labels differ from the fitted samples"));
    }
    Ok((votes, samples))
}

fn simple_manifest(command: &str, argv: &[String], cfg: &ConfigFile, inputs: Vec<InputFile>, out: &Path) -> CliResult<()> {
    Manifest {
        tool: "pum",
        version: env!("CARGO_PKG_VERSION"),
        command,
        argv: argv.to_vec(),
        config: cfg,
        inputs,
        run: None,
        outputs: vec![out.to_path_buf()],
    }
    .write(&sidecar(out))
}

fn sample_inputs(votes: Option<&Path>, dir: &Path) -> CliResult<Vec<InputFile>> {
    let mut v = Vec::new();
    if let Some(p) = votes {
        v.push(InputFile::hash(p)?);
    }
    for f in ["beta.csv", "alpha.csv", "delta.csv", "z.csv"] {
        v.push(InputFile::hash(&dir.join(f))?);
    }
    Ok(v)
}

pub fn run_predict(a: &PredictArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    let (votes, samples) = samples_for(&a.votes, &a.samples)?;
    let probs = predict_probs_with_budget(&votes, &samples, a.memory_budget)?;
    let (s, ni, nj) = probs.dims();
    let mut mean = vec![0.0; ni * nj];
    for d in 0..s {
        for (m, p) in mean.iter_mut().zip(probs.draw(d).iter()) {
            *m += p / s as f64;
        }
    }
    let mut w = csv_writer(&a.out)?;
    w.write_record(std::iter::once("legislator").chain(votes.col_labels().iter().map(String::as_str)))?;
    for i in 0..ni {
        w.write_record(
            std::iter::once(votes.row_labels()[i].clone()).chain(mean[i * nj..(i + 1) * nj].iter().map(|&x| num(x))),
        )?;
    }
    w.flush()?;
    simple_manifest("predict", argv, cfg, sample_inputs(Some(&a.votes), &a.samples)?, &a.out)
}

pub fn run_waic(a: &WaicArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    let (votes, samples) = samples_for(&a.votes, &a.samples)?;
    let ti: Option<Vec<String>> = samples
        .layout
        .terms
        .as_ref()
        .map(|terms| samples.layout.item_term.iter().map(|&t| terms[t].clone()).collect());
    let probs = predict_probs_with_budget(&votes, &samples, a.memory_budget)?;
    let report = calc_waic(&votes, &probs, ti.as_deref())?;
    serde_json::to_writer_pretty(File::create(&a.out).map_err(|e| CliError::io(&a.out, e))?, &report)?;
    if let Some(path) = &a.csv {
        let mut w = csv_writer(path)?;
        w.write_record(["block", "waic", "lppd", "p_waic", "n_blocks"])?;
        for t in report.per_term.iter().flatten() {
            let p = &t.part;
            w.write_record([t.term.clone(), num(p.waic), num(p.lppd), num(p.p_waic), p.n_blocks.to_string()])?;
        }
        let p = &report.total;
        w.write_record(["total".into(), num(p.waic), num(p.lppd), num(p.p_waic), p.n_blocks.to_string()])?;
        w.flush()?;
    }
    println!("WAIC {}", report.total.waic);
    simple_manifest("waic", argv, cfg, sample_inputs(Some(&a.votes), &a.samples)?, &a.out)
}

pub fn run_rank(a: &RankArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    let samples = read_samples(&a.samples)?;
    let qs: Vec<f64> = a
        .quantiles
        .split(',')
        .map(|q| q.trim().parse().map_err(|_| CliError::config(format!("bad quantile {q:?}"))))
        .collect::<CliResult<_>>()?;
    let beta = samples.static_beta()?;
    let r = post_rank(beta.view(), &samples.layout.leg_labels, &qs)?;
    let mut w = csv_writer(&a.out)?;
    w.write_record(std::iter::once("legislator".to_string()).chain(qs.iter().map(|q| q.to_string())))?;
    for (name, ranks) in r.labels.iter().zip(&r.ranks) {
        w.write_record(std::iter::once(name.clone()).chain(ranks.iter().map(|k| k.to_string())))?;
    }
    w.flush()?;
    simple_manifest("rank", argv, cfg, sample_inputs(None, &a.samples)?, &a.out)
}

pub fn run_curves(a: &CurvesArgs, cfg: &mut ConfigFile, argv: &[String]) -> CliResult<()> {
    let samples = read_samples(&a.samples)?;
    let labels = &samples.layout.item_labels;
    let item = match labels.iter().position(|l| *l == a.item) {
        Some(j) => j,
        None => match a.item.trim().parse::<usize>() {
            Ok(k) if (1..=labels.len()).contains(&k) => k - 1,
            _ => return Err(CliError::data(format!("unknown item {:?}", a.item))),
        },
    };
    let [lo, hi] = parse_pair(&a.range, "--range")?;
    let curve = item_char(&samples, item, (lo, hi), a.grid, a.ci)?;
    let mut w = csv_writer(&a.out)?;
    w.write_record(["beta", "mean", "lower", "upper"])?;
    for p in &curve {
        w.write_record([num(p.beta), num(p.mean), num(p.lower), num(p.upper)])?;
    }
    w.flush()?;
    simple_manifest("curves", argv, cfg, sample_inputs(None, &a.samples)?, &a.out)
}

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use toporesolve::eval::{parse_tau_range, sweep_csv};
use toporesolve::gazetteer::{ingest_geonames_with_boxes, IngestReport, Ingested};
use toporesolve::snapshot::{has_magic, read_snapshot, write_snapshot};
use toporesolve::{
    evaluate, ingest_geonames, load_corpus, resolve_corpus, tau_sweep, Document, EvalConfig, Gazetteer, IngestOptions,
    ResolutionReport,
};

use crate::args::{Command, EvalArgs, GazetteerArgs, IndexArgs, ResolveArgs};
use crate::error::CliError;

pub fn run(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Index(a) => cmd_index(&a, stdout),
        Command::Resolve(a) => cmd_resolve(&a, stdout),
        Command::Eval(a) => cmd_eval(&a, stdout),
        Command::Serve(a) => crate::server::serve(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

fn ingest_tsv(path: &Path, dump: BufReader<File>, bboxes: Option<&Path>) -> Result<Ingested, CliError> {
    let opts = IngestOptions::default();
    let out = match bboxes {
        Some(b) => ingest_geonames_with_boxes(dump, open(b)?, &opts),
        None => ingest_geonames(dump, &opts),
    };
    out.map_err(|e| CliError::input(path, e))
}

/// Loads a snapshot or a TSV dump, whichever the file turns out to be.
pub fn load_gazetteer(args: &GazetteerArgs) -> Result<Gazetteer, CliError> {
    let path = &args.gazetteer;
    let mut reader = open(path)?;
    let head = reader.fill_buf().map_err(|e| CliError::io(path, e))?;
    if has_magic(head) {
        return read_snapshot(reader).map_err(|e| CliError::input(path, e));
    }
    Ok(ingest_tsv(path, reader, args.bboxes.as_deref())?.gazetteer)
}

pub fn load_documents(path: &Path) -> Result<Vec<Document>, CliError> {
    load_corpus(open(path)?).map_err(|e| CliError::input(path, e))
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, body: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, body).map_err(|e| CliError::io(p, e)),
        None => stdout.write_all(body.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn report_summary(r: &IngestReport) -> String {
    let mut s = format!("entries {}\nmalformed {}\n", r.entries, r.malformed);
    if r.boxes_attached + r.boxes_rejected > 0 {
        s.push_str(&format!("boxes_attached {}\nboxes_rejected {}\n", r.boxes_attached, r.boxes_rejected));
    }
    s
}

fn cmd_index(a: &IndexArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let ingested = ingest_tsv(&a.gazetteer, open(&a.gazetteer)?, a.bboxes.as_deref())?;
    let file = File::create(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    write_snapshot(&ingested.gazetteer, BufWriter::new(file)).map_err(|e| CliError::input(&a.out, e))?;
    emit(None, stdout, &report_summary(&ingested.report))
}

fn cmd_resolve(a: &ResolveArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let opts = a.resolver.options().map_err(CliError::Usage)?;
    let g = load_gazetteer(&a.gazetteer)?;
    let docs = load_documents(&a.corpus)?;
    emit(a.out.as_deref(), stdout, &resolve_corpus(&docs, &g, &opts).to_json())
}

fn read_resolutions(path: &Path) -> Result<ResolutionReport, CliError> {
    let mut de = serde_json::Deserializer::from_reader(open(path)?);
    serde_path_to_error::deserialize(&mut de).map_err(|e| CliError::input(path, e))
}

fn cmd_eval(a: &EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let opts = a.resolver.options().map_err(CliError::Usage)?;
    let cfg = EvalConfig { mode: a.mode.into(), correctness: a.correctness.into(), threshold_km: a.threshold_km };
    let taus = a.sweep_tau.as_deref().map(parse_tau_range).transpose().map_err(CliError::Usage)?;
    let g = load_gazetteer(&a.gazetteer)?;
    let docs = load_documents(&a.corpus)?;

    if let Some(taus) = taus {
        let rows = tau_sweep(&docs, &g, &opts.chf.cbh, &taus, &cfg).map_err(|e| CliError::Failure(e.to_string()))?;
        return emit(a.out.as_deref(), stdout, &sweep_csv(&rows));
    }
    let predictions = match &a.resolutions {
        Some(p) => read_resolutions(p)?,
        None => resolve_corpus(&docs, &g, &opts),
    };
    let metrics = evaluate(&docs, &predictions.documents, &g, &cfg).map_err(|e| CliError::Failure(e.to_string()))?;
    let mut json = serde_json::to_string_pretty(&metrics).expect("metrics serialize");
    json.push('\n');
    match &a.out {
        Some(p) => {
            emit(Some(p), stdout, &json)?;
            emit(None, stdout, &metrics.to_table())
        }
        None => emit(None, stdout, &format!("{}\n{json}", metrics.to_table())),
    }
}

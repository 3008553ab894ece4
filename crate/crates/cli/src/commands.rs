use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rasmi_core::converter::{ConverterData, DataPaths};
use rasmi_core::corpus::{extract_dictionary, is_candidate, validate_record, CorpusReader, StatsAccumulator};
use rasmi_core::eval::{evaluate_corpus, BleuConfig};
use rasmi_core::{Converter, ConverterConfig};
use rasmi_service::{ApiSession, AppState, Role, ServiceConfig};

fn open_input(path: &Option<PathBuf>) -> Result<Box<dyn Read>> {
    Ok(match path {
        Some(p) => Box::new(File::open(p).with_context(|| format!("opening {}", p.display()))?),
        None => Box::new(io::stdin().lock()),
    })
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn converter(paths: &DataPaths) -> Result<Converter> {
    let data = ConverterData::load(paths).context("loading converter data")?;
    Ok(Converter::new(data, ConverterConfig::default()))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().map(str::to_string).collect())
}

pub struct ConvertOutput {
    pub emit_links: bool,
    pub emit_trace: bool,
    pub json: bool,
}

pub fn convert(
    paths: &DataPaths,
    text: Option<String>,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    opts: ConvertOutput,
) -> Result<()> {
    let conv = converter(paths)?;
    let lines: Vec<String> = match text {
        Some(t) => vec![t],
        None => BufReader::new(open_input(&input)?).lines().collect::<io::Result<_>>()?,
    };
    let mut out = open_output(&output)?;
    for line in lines {
        let r = conv.convert(&line);
        if opts.json {
            serde_json::to_writer(&mut out, &r)?;
            writeln!(out)?;
            continue;
        }
        writeln!(out, "{}", r.formal_text)?;
        if opts.emit_links {
            let links: Vec<String> = r.links.iter().map(ToString::to_string).collect();
            writeln!(out, "links: {}", links.join(", "))?;
            writeln!(out, "syntactic change: {}", r.syntactic_change)?;
        }
        if opts.emit_trace {
            for t in &r.trace {
                writeln!(out, "  [{} {}] {}: {} => {}", t.pass, t.step, t.rule, t.before, t.after)?;
            }
            for a in &r.alternatives {
                writeln!(out, "  ambiguous token {}: chose {:?} over {:?}", a.token_index, a.chosen, a.alternatives)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn filter(paths: &DataPaths, input: Option<PathBuf>, output: Option<PathBuf>) -> Result<()> {
    let lexicon = ConverterData::load(paths).context("loading converter data")?.informal_lexicon();
    let mut out = open_output(&output)?;
    let (mut seen, mut kept) = (0usize, 0usize);
    for line in BufReader::new(open_input(&input)?).lines() {
        let line = line?;
        seen += 1;
        if is_candidate(&line, &lexicon) {
            kept += 1;
            writeln!(out, "{line}")?;
        }
    }
    out.flush()?;
    log::info!("kept {kept} of {seen} sentences");
    Ok(())
}

fn records(input: &Option<PathBuf>) -> Result<CorpusReader<Box<dyn Read>>> {
    Ok(CorpusReader::new(open_input(input)?))
}

pub fn check(input: Option<PathBuf>, show_warnings: bool) -> Result<()> {
    let (mut n, mut errors, mut warnings) = (0usize, 0usize, 0usize);
    let mut out = io::stdout().lock();
    for r in records(&input)? {
        let r = r?;
        n += 1;
        for issue in validate_record(&r) {
            if issue.is_error() {
                errors += 1;
            } else {
                warnings += 1;
                if !show_warnings {
                    continue;
                }
            }
            writeln!(out, "{}: {issue}", r.id)?;
        }
    }
    writeln!(out, "{n} records, {errors} errors, {warnings} warnings")?;
    if errors > 0 {
        out.flush()?;
        std::process::exit(1);
    }
    Ok(())
}

pub fn stats(input: Option<PathBuf>, json: bool) -> Result<()> {
    let mut acc = StatsAccumulator::new();
    for r in records(&input)? {
        acc.add(&r?);
    }
    let s = acc.finish();
    let mut out = io::stdout().lock();
    if json {
        serde_json::to_writer_pretty(&mut out, &s)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "records:                  {}", s.record_count)?;
    writeln!(out, "avg formal length:        {:.2}", s.avg_formal_length)?;
    writeln!(out, "avg informal length:      {:.2}", s.avg_informal_length)?;
    writeln!(out, "alignments:               {}", s.alignment_count)?;
    writeln!(out, "unique word pairs:        {}", s.unique_word_pairs)?;
    writeln!(out, "syntactic change:         {:.2}%", s.pct_syntactic_change)?;
    writeln!(out, "dictionary size:          {}", s.dictionary_size)?;
    writeln!(out, "sources:")?;
    for share in s.source_shares() {
        writeln!(out, "  {:<10} {:>8} {:>7.2}%", share.source.as_str(), share.count, share.percent)?;
    }
    Ok(())
}

pub fn extract_dict(input: Option<PathBuf>, output: Option<PathBuf>) -> Result<()> {
    let recs: Vec<_> = records(&input)?.collect::<Result<_, _>>()?;
    let lex = extract_dictionary(&recs);
    let mut out = open_output(&output)?;
    lex.write_tsv(&mut out)?;
    out.flush()?;
    Ok(())
}

pub struct EvalArgs {
    pub hyp: Option<PathBuf>,
    pub informal: Option<PathBuf>,
    pub reference: PathBuf,
    pub min_len: Option<usize>,
    pub max_len: Option<usize>,
    pub report: Option<PathBuf>,
    pub json: bool,
}

pub fn eval(paths: &DataPaths, a: EvalArgs) -> Result<()> {
    let hyps = match (&a.hyp, &a.informal) {
        (Some(h), _) => read_lines(h)?,
        (None, Some(i)) => {
            let conv = converter(paths)?;
            read_lines(i)?.iter().map(|l| conv.convert(l).formal_text).collect()
        }
        (None, None) => bail!("either --hyp or --informal is required"),
    };
    let refs = read_lines(&a.reference)?;
    let mut cfg = BleuConfig::default();
    if a.min_len.is_some() || a.max_len.is_some() {
        cfg = cfg.with_length_filter(a.min_len.unwrap_or(0), a.max_len.unwrap_or(usize::MAX));
    }
    let report = evaluate_corpus(&hyps, &refs, &cfg)?;
    if let Some(p) = &a.report {
        let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        serde_json::to_writer_pretty(BufWriter::new(f), &report)?;
    }
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", report.to_text())?;
    }
    Ok(())
}

pub fn serve(paths: DataPaths, addr: SocketAddr, data_dir: Option<PathBuf>, sessions: Vec<String>) -> Result<()> {
    let mut sessions: Vec<ApiSession> = sessions
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|e: String| anyhow::anyhow!("bad --session `{s}`: {e}")))
        .collect::<Result<_>>()?;
    if sessions.is_empty() {
        let token = uuid::Uuid::new_v4().simple().to_string();
        eprintln!("no sessions configured; leader token for this run: {token}");
        sessions.push(ApiSession::new("leader", token, Role::Leader));
    }
    let cfg = ServiceConfig { data_dir, data: paths, sessions };
    let state = AppState::from_config(&cfg)?;
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
        log::info!("listening on {}", listener.local_addr()?);
        eprintln!("listening on {}", listener.local_addr()?);
        rasmi_service::serve(listener, state).await?;
        Ok(())
    })
}

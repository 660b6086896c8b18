use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use structlabel::codec::{decode, encode, Decoding, Encoding, Family, Scheme, Structure, COMPONENT_SEP};
use structlabel::constituency::ConstTree;
use structlabel::dep::{DepStructure, Sentence};
use structlabel::io::{
    read_document, read_labels, write_document, write_labels, CorpusDocument, CorpusEntry, LabelFile, SourceFormat,
};
use structlabel::kernels::schedule::NoiseSchedule;
use structlabel::kernels::selfcheck::{self, SelfCheckConfig};
use structlabel::metrics::{
    const_f1, dep_scores, graph_scores, tagging_accuracy, wellformed_ratio, EvalbParams, Fraction, ScoreReport,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{context}: {source}")]
    Input {
        context: String,
        source: structlabel::Error,
    },
}

type Result<T> = std::result::Result<T, CliError>;

fn read_input(path: &Path) -> Result<String> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn in_file(path: &Path) -> impl Fn(structlabel::Error) -> CliError + '_ {
    move |source| CliError::Input {
        context: path.display().to_string(),
        source,
    }
}

fn load(path: &Path, format: SourceFormat) -> Result<CorpusDocument> {
    read_document(&read_input(path)?, format).map_err(in_file(path))
}

/// The structure of `entry` that `scheme` applies to.
fn structure_for(scheme: Scheme, entry: &CorpusEntry, format: SourceFormat) -> Result<Structure> {
    let found = match scheme.family() {
        Family::Constituency => entry.constituency.clone().map(Structure::Constituency),
        Family::Dependency | Family::Graph => entry.dependency.clone().map(Structure::Dependency),
    };
    found.ok_or_else(|| CliError::Usage(format!("scheme {scheme} does not apply to {format} input")))
}

fn encode_all(scheme: Scheme, doc: &CorpusDocument, input: &Path) -> Result<Vec<(Structure, Encoding)>> {
    let structures = doc
        .entries
        .iter()
        .map(|e| structure_for(scheme, e, doc.source_format))
        .collect::<Result<Vec<_>>>()?;
    doc.entries
        .par_iter()
        .zip(structures)
        .map(|(e, st)| {
            let enc = encode(scheme, &e.sentence, &st).map_err(in_file(input))?;
            Ok((st, enc))
        })
        .collect()
}

struct Counts {
    sentences: usize,
    tokens: usize,
    labels: usize,
    codes: usize,
    dropped: usize,
    lifts: usize,
}

impl Counts {
    fn of(encodings: &[&Encoding]) -> Self {
        let labels: HashSet<&str> = encodings
            .iter()
            .flat_map(|e| e.labels.labels.iter().map(String::as_str))
            .collect();
        let codes: HashSet<&str> = labels
            .iter()
            .map(|l| l.split_once(COMPONENT_SEP).map_or(*l, |(c, _)| c))
            .collect();
        Counts {
            sentences: encodings.len(),
            tokens: encodings.iter().map(|e| e.sentence.len()).sum(),
            labels: labels.len(),
            codes: codes.len(),
            dropped: encodings.iter().map(|e| e.dropped.len()).sum(),
            lifts: encodings.iter().map(|e| e.lifts).sum(),
        }
    }

    fn key_values(&self, scheme: Scheme) -> String {
        format!(
            "scheme={scheme}\nsentences={}\ntokens={}\ndistinct_labels={}\ndistinct_codes={}\ndropped_arcs={}\nlifted_arcs={}\n",
            self.sentences, self.tokens, self.labels, self.codes, self.dropped, self.lifts
        )
    }

    fn json(&self, scheme: Scheme) -> Value {
        json!({
            "scheme": scheme.to_string(),
            "sentences": self.sentences,
            "tokens": self.tokens,
            "distinct_labels": self.labels,
            "distinct_codes": self.codes,
            "dropped_arcs": self.dropped,
            "lifted_arcs": self.lifts,
        })
    }
}

pub fn cmd_encode(scheme: Scheme, format: SourceFormat, input: &Path, out: Option<&Path>) -> Result<bool> {
    let doc = load(input, format)?;
    let encoded = encode_all(scheme, &doc, input)?;
    let (sentences, labels): (Vec<Sentence>, Vec<Vec<String>>) = encoded
        .iter()
        .map(|(_, e)| (e.sentence.clone(), e.labels.labels.clone()))
        .unzip();
    let file = LabelFile::from_sequences(scheme, &sentences, &labels).map_err(in_file(input))?;
    write_output(out, &write_labels(&file))?;
    let encs: Vec<&Encoding> = encoded.iter().map(|(_, e)| e).collect();
    eprint!("{}", Counts::of(&encs).key_values(scheme));
    Ok(true)
}

fn default_format(scheme: Scheme) -> SourceFormat {
    match scheme.family() {
        Family::Constituency => SourceFormat::PtbBrackets,
        Family::Dependency => SourceFormat::ConlluTree,
        Family::Graph => SourceFormat::ConlluEnhancedGraph,
    }
}

fn check_output_format(scheme: Scheme, format: SourceFormat) -> Result<()> {
    let ok = match scheme.family() {
        Family::Constituency => format == SourceFormat::PtbBrackets,
        Family::Dependency => format != SourceFormat::PtbBrackets,
        Family::Graph => matches!(format, SourceFormat::ConlluEnhancedGraph | SourceFormat::SdpGraph),
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "scheme {scheme} cannot be written as {format}"
        )))
    }
}

fn entry_of(sentence: &Sentence, structure: Structure) -> CorpusEntry {
    match structure {
        Structure::Constituency(tree) => CorpusEntry {
            sentence: tree.tagged_sentence(sentence),
            dependency: None,
            constituency: Some(tree),
        },
        Structure::Dependency(d) => CorpusEntry {
            sentence: d.sentence.clone(),
            dependency: Some(d),
            constituency: None,
        },
    }
}

pub fn cmd_decode(
    scheme: Option<Scheme>,
    format: Option<SourceFormat>,
    input: &Path,
    out: Option<&Path>,
) -> Result<bool> {
    let file = read_labels(&read_input(input)?).map_err(in_file(input))?;
    if let Some(s) = scheme {
        if s != file.scheme {
            return Err(CliError::Usage(format!(
                "--scheme {s} disagrees with file header {}",
                file.scheme
            )));
        }
    }
    let scheme = file.scheme;
    let format = format.unwrap_or_else(|| default_format(scheme));
    check_output_format(scheme, format)?;
    let decoded = file
        .sentences
        .par_iter()
        .map(|ls| {
            let s = ls.sentence();
            let d = decode(scheme, &s, &ls.labels()).map_err(in_file(input))?;
            Ok((s, d))
        })
        .collect::<Result<Vec<(Sentence, Decoding)>>>()?;
    let repairs: usize = decoded.iter().map(|(_, d)| d.repairs).sum();
    let illformed = decoded.iter().filter(|(_, d)| !d.is_wellformed()).count();
    let entries = decoded.into_iter().map(|(s, d)| entry_of(&s, d.structure)).collect();
    let doc = CorpusDocument {
        entries,
        source_format: format,
    };
    write_output(out, &write_document(&doc))?;
    eprintln!(
        "scheme={scheme}\nsentences={}\nrepairs={repairs}\nillformed_sentences={illformed}",
        doc.entries.len()
    );
    Ok(true)
}

fn params(delete: Option<&[String]>) -> EvalbParams {
    match delete {
        Some(labels) => EvalbParams {
            delete_labels: labels.iter().cloned().collect(),
            ..EvalbParams::default()
        },
        None => EvalbParams::default(),
    }
}

fn score(
    family: Family,
    gold: &[Structure],
    pred: &[Structure],
    params: &EvalbParams,
) -> structlabel::Result<ScoreReport> {
    fn deps(s: &[Structure]) -> Vec<DepStructure> {
        s.iter().filter_map(|s| s.as_dependency().cloned()).collect()
    }
    fn trees(s: &[Structure]) -> Vec<ConstTree> {
        s.iter().filter_map(|s| s.as_constituency().cloned()).collect()
    }
    match family {
        Family::Constituency => const_f1(&trees(gold), &trees(pred), params),
        Family::Dependency => dep_scores(&deps(gold), &deps(pred)),
        Family::Graph => graph_scores(&deps(gold), &deps(pred)),
    }
}

fn same(gold: &Structure, pred: &Structure) -> bool {
    match (gold, pred) {
        (Structure::Dependency(g), Structure::Dependency(p)) => g.same_arcs(p),
        _ => gold == pred,
    }
}

fn arcs_recovered(gold: &Structure, pred: &Structure) -> Fraction {
    match (gold, pred) {
        (Structure::Dependency(g), Structure::Dependency(p)) => Fraction::new(
            g.arcs.iter().filter(|a| p.arcs.contains(a)).count() as u64,
            g.arcs.len() as u64,
        ),
        _ => Fraction::new(u64::from(gold == pred), 1),
    }
}

fn show(f: Fraction) -> String {
    match f.value() {
        Some(v) => format!("{v:.6} ({}/{})", f.num, f.den),
        None => format!("nan ({}/{})", f.num, f.den),
    }
}

pub fn cmd_roundtrip(
    scheme: Scheme,
    format: SourceFormat,
    input: &Path,
    out: Option<&Path>,
    delete: Option<&[String]>,
    as_json: bool,
) -> Result<bool> {
    let doc = load(input, format)?;
    let encoded = encode_all(scheme, &doc, input)?;
    let decoded = encoded
        .par_iter()
        .map(|(_, e)| decode(scheme, &e.sentence, &e.labels.labels).map_err(in_file(input)))
        .collect::<Result<Vec<Decoding>>>()?;
    let gold: Vec<Structure> = encoded.iter().map(|(s, _)| s.clone()).collect();
    let pred: Vec<Structure> = decoded.iter().map(|d| d.structure.clone()).collect();
    let (sentences, labels): (Vec<Sentence>, Vec<Vec<String>>) = encoded
        .iter()
        .map(|(_, e)| (e.sentence.clone(), e.labels.labels.clone()))
        .unzip();
    let report = score(scheme.family(), &gold, &pred, &params(delete))
        .and_then(|r| Ok(r.merged(&wellformed_ratio(scheme, &sentences, &labels)?)))
        .map_err(in_file(input))?;

    // sentences the scheme represents without loss must come back unchanged
    let mut exact = Fraction::default();
    let mut lossy = Fraction::default();
    for (((g, e), p), _) in gold
        .iter()
        .zip(encoded.iter().map(|(_, e)| e))
        .zip(&pred)
        .zip(&sentences)
    {
        if e.dropped.is_empty() && e.lifts == 0 {
            exact.den += 1;
            exact.num += u64::from(same(g, p));
        } else {
            let r = arcs_recovered(g, p);
            lossy.num += r.num;
            lossy.den += r.den;
        }
    }
    let encs: Vec<&Encoding> = encoded.iter().map(|(_, e)| e).collect();
    let counts = Counts::of(&encs);
    let text = if as_json {
        let mut v = counts.json(scheme);
        v["lossless_exact"] = json!({ "num": exact.num, "den": exact.den });
        v["lossy_arcs_recovered"] = json!({ "num": lossy.num, "den": lossy.den });
        v["scores"] = report.to_json();
        format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
    } else {
        let mut t = counts.key_values(scheme);
        let _ = writeln!(t, "lossless_exact={}", show(exact));
        let _ = writeln!(t, "lossy_arcs_recovered={}", show(lossy));
        t.push_str(&report.to_key_values());
        t
    };
    write_output(out, &text)?;
    Ok(exact.num == exact.den)
}

pub fn cmd_eval(
    format: &str,
    gold: &Path,
    pred: &Path,
    delete: Option<&[String]>,
    as_json: bool,
    out: Option<&Path>,
) -> Result<bool> {
    let report = if format == "labels" {
        let g = read_labels(&read_input(gold)?).map_err(in_file(gold))?;
        let p = read_labels(&read_input(pred)?).map_err(in_file(pred))?;
        if g.scheme != p.scheme {
            return Err(CliError::Usage(format!(
                "gold uses {} but predictions use {}",
                g.scheme, p.scheme
            )));
        }
        let gl: Vec<Vec<String>> = g.sentences.iter().map(|s| s.labels()).collect();
        let pl: Vec<Vec<String>> = p.sentences.iter().map(|s| s.labels()).collect();
        let ps: Vec<Sentence> = p.sentences.iter().map(|s| s.sentence()).collect();
        tagging_accuracy(&gl, &pl)
            .and_then(|r| Ok(r.merged(&wellformed_ratio(p.scheme, &ps, &pl)?)))
            .map_err(in_file(pred))?
    } else {
        let format: SourceFormat = format
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown format '{format}'")))?;
        let g = load(gold, format)?;
        let p = load(pred, format)?;
        let family = match format {
            SourceFormat::PtbBrackets => Family::Constituency,
            SourceFormat::ConlluTree => Family::Dependency,
            SourceFormat::ConlluEnhancedGraph | SourceFormat::SdpGraph => Family::Graph,
        };
        let structures = |d: &CorpusDocument| -> Vec<Structure> {
            d.entries
                .iter()
                .filter_map(|e| match family {
                    Family::Constituency => e.constituency.clone().map(Structure::Constituency),
                    _ => e.dependency.clone().map(Structure::Dependency),
                })
                .collect()
        };
        score(family, &structures(&g), &structures(&p), &params(delete)).map_err(in_file(pred))?
    };
    let text = if as_json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&report.to_json()).expect("json values serialize")
        )
    } else {
        report.to_key_values()
    };
    write_output(out, &text)?;
    Ok(true)
}

pub fn cmd_selfcheck(cfg: &SelfCheckConfig, out: Option<&Path>) -> Result<bool> {
    NoiseSchedule::linear(cfg.steps, cfg.beta_start, cfg.beta_end).map_err(|e| CliError::Usage(e.to_string()))?;
    if cfg.skip == 0 {
        return Err(CliError::Usage("--s must be at least 1".into()));
    }
    if cfg.tau.is_nan() || cfg.tau <= 0.0 {
        return Err(CliError::Usage("--tau must be positive".into()));
    }
    let checks = selfcheck::run(cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = format!(
        "seed={} T={} s={} beta_start={} beta_end={} tau={}\n",
        cfg.seed, cfg.steps, cfg.skip, cfg.beta_start, cfg.beta_end, cfg.tau
    );
    for c in &checks {
        let _ = writeln!(
            text,
            "{:<26} residual={:<12.4e} tolerance={:<10.1e} {}",
            c.name,
            c.residual,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(text, "{passed}/{} checks passed", checks.len());
    write_output(out, &text)?;
    Ok(passed == checks.len())
}

//! CoNLL-U: ten tab-separated columns, blank lines between sentences.

use std::fmt::Write;

use crate::dep::{Arc, DepStructure, Sentence, Token};
use crate::error::{Error, Result};
use crate::io::{blocks, opt_field, show_field, CorpusDocument, CorpusEntry, SourceFormat};

const COLUMNS: usize = 10;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a CoNLL-U document. With `enhanced`, arcs come from the DEPS column
/// and HEAD/DEPREL are ignored; otherwise the reverse. Multiword token ranges
/// and empty nodes are skipped.
pub fn read_conllu(text: &str, enhanced: bool) -> Result<CorpusDocument> {
    let mut entries = Vec::new();
    for block in blocks(text) {
        let mut id = String::new();
        let mut tokens = Vec::new();
        // (line, head column, deprel column, deps column)
        let mut raw: Vec<(usize, String, String, String)> = Vec::new();
        for (line, content) in block {
            if let Some(comment) = content.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    if key.trim() == "sent_id" {
                        id = value.trim().to_string();
                    }
                }
                continue;
            }
            let cols: Vec<&str> = content.split('\t').collect();
            if cols.len() != COLUMNS {
                return Err(parse_error(
                    line,
                    format!("expected {COLUMNS} columns, found {}", cols.len()),
                ));
            }
            if cols[0].contains('-') || cols[0].contains('.') {
                continue;
            }
            let idx: usize = cols[0]
                .parse()
                .map_err(|_| parse_error(line, format!("invalid token id '{}'", cols[0])))?;
            if idx != tokens.len() + 1 {
                return Err(parse_error(line, format!("token id {idx} out of sequence")));
            }
            tokens.push(Token {
                form: cols[1].to_string(),
                lemma: opt_field(cols[2]),
                upos: opt_field(cols[3]),
                xpos: opt_field(cols[4]),
                feats: opt_field(cols[5]),
                misc: opt_field(cols[9]),
            });
            raw.push((line, cols[6].into(), cols[7].into(), cols[8].into()));
        }
        if tokens.is_empty() {
            continue;
        }
        let n = tokens.len();
        let head_index = |line: usize, s: &str| -> Result<usize> {
            let h: usize = s
                .parse()
                .map_err(|_| parse_error(line, format!("invalid head '{s}'")))?;
            if h > n {
                return Err(parse_error(line, format!("head {h} beyond sentence length {n}")));
            }
            Ok(h)
        };
        let mut arcs = Vec::new();
        for (i, (line, head, deprel, deps)) in raw.iter().enumerate() {
            if enhanced {
                if deps == "_" {
                    continue;
                }
                for pair in deps.split('|') {
                    let (h, rel) = pair
                        .split_once(':')
                        .ok_or_else(|| parse_error(*line, format!("invalid DEPS entry '{pair}'")))?;
                    if h.contains('.') {
                        continue;
                    }
                    arcs.push(Arc::new(head_index(*line, h)?, i + 1, rel));
                }
            } else {
                arcs.push(Arc::new(head_index(*line, head)?, i + 1, deprel.as_str()));
            }
        }
        let sentence = Sentence::new(id, tokens);
        let structure = if enhanced {
            DepStructure::graph(sentence.clone(), arcs)
        } else {
            DepStructure::tree(sentence.clone(), arcs)
        };
        entries.push(CorpusEntry {
            sentence,
            dependency: Some(structure),
            constituency: None,
        });
    }
    Ok(CorpusDocument {
        entries,
        source_format: if enhanced {
            SourceFormat::ConlluEnhancedGraph
        } else {
            SourceFormat::ConlluTree
        },
    })
}

pub fn write_conllu(doc: &CorpusDocument) -> String {
    let enhanced = doc.source_format == SourceFormat::ConlluEnhancedGraph;
    let mut out = String::new();
    for entry in &doc.entries {
        if !entry.sentence.id.is_empty() {
            let _ = writeln!(out, "# sent_id = {}", entry.sentence.id);
        }
        let structure = entry.dependency.as_ref();
        let head_arcs = structure.map(|s| s.head_arcs()).unwrap_or_default();
        for (i, t) in entry.sentence.tokens.iter().enumerate() {
            let (head, deprel, deps) = if enhanced {
                let mut incoming: Vec<&Arc> = structure
                    .map(|s| s.arcs.iter().filter(|a| a.dep == i + 1).collect())
                    .unwrap_or_default();
                incoming.sort_by(|a, b| (a.head, &a.rel).cmp(&(b.head, &b.rel)));
                let deps = if incoming.is_empty() {
                    "_".to_string()
                } else {
                    incoming
                        .iter()
                        .map(|a| format!("{}:{}", a.head, a.rel))
                        .collect::<Vec<_>>()
                        .join("|")
                };
                ("_".to_string(), "_".to_string(), deps)
            } else {
                match head_arcs.get(i).copied().flatten() {
                    Some(a) => (a.head.to_string(), a.rel.clone(), "_".to_string()),
                    None => ("_".to_string(), "_".to_string(), "_".to_string()),
                }
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                i + 1,
                t.form,
                show_field(&t.lemma),
                show_field(&t.upos),
                show_field(&t.xpos),
                show_field(&t.feats),
                head,
                deprel,
                deps,
                show_field(&t.misc)
            );
        }
        out.push('\n');
    }
    out
}

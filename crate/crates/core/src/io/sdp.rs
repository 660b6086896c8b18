//! SDP-2015 columns: id, form, lemma, pos, top, pred, frame, then one
//! argument column per predicate. The older six-column layout without the
//! frame column is accepted on read. Tops become arcs from the root.

use std::fmt::Write;

use crate::dep::{Arc, DepStructure, Sentence, Token};
use crate::error::{Error, Result};
use crate::io::{blocks, opt_field, show_field, CorpusDocument, CorpusEntry, SourceFormat};

/// Relation carried by the arcs standing for top nodes.
pub const TOP_REL: &str = "top";

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn flag(line: usize, s: &str) -> Result<bool> {
    match s {
        "+" => Ok(true),
        "-" => Ok(false),
        _ => Err(parse_error(line, format!("expected '+' or '-', found '{s}'"))),
    }
}

pub fn read_sdp(text: &str) -> Result<CorpusDocument> {
    let mut entries = Vec::new();
    for block in blocks(text) {
        let mut id = String::new();
        let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
        for (line, content) in block {
            if let Some(comment) = content.strip_prefix('#') {
                if comment.starts_with("SDP") {
                    continue;
                }
                let comment = comment.trim();
                id = match comment.split_once('=') {
                    Some((key, value)) if key.trim() == "sent_id" => value.trim().to_string(),
                    _ => comment.to_string(),
                };
                continue;
            }
            rows.push((line, content.split('\t').collect()));
        }
        if rows.is_empty() {
            continue;
        }
        let mut tokens = Vec::new();
        let mut preds = Vec::new();
        let mut tops = Vec::new();
        for (i, (line, cols)) in rows.iter().enumerate() {
            if cols.len() < 6 {
                return Err(parse_error(
                    *line,
                    format!("expected at least 6 columns, found {}", cols.len()),
                ));
            }
            if cols[0].parse::<usize>().ok() != Some(i + 1) {
                return Err(parse_error(*line, format!("token id '{}' out of sequence", cols[0])));
            }
            if flag(*line, cols[4])? {
                tops.push(i + 1);
            }
            if flag(*line, cols[5])? {
                preds.push(i + 1);
            }
        }
        let fixed = match rows[0].1.len().checked_sub(preds.len()) {
            Some(f @ (6 | 7)) => f,
            _ => {
                return Err(Error::Structure {
                    sentence: id,
                    message: format!("{} columns do not fit {} predicates", rows[0].1.len(), preds.len()),
                })
            }
        };
        let mut arcs: Vec<Arc> = tops.iter().map(|&d| Arc::new(0, d, TOP_REL)).collect();
        for (i, (_, cols)) in rows.iter().enumerate() {
            if cols.len() != fixed + preds.len() {
                return Err(Error::Structure {
                    sentence: id,
                    message: format!(
                        "token {} has {} argument columns for {} predicates",
                        i + 1,
                        cols.len().saturating_sub(fixed),
                        preds.len()
                    ),
                });
            }
            let mut t = Token::new(cols[1]);
            t.lemma = opt_field(cols[2]);
            t.xpos = opt_field(cols[3]);
            if fixed == 7 {
                t.misc = opt_field(cols[6]);
            }
            tokens.push(t);
            for (p, rel) in preds.iter().zip(&cols[fixed..]) {
                if *rel != "_" {
                    arcs.push(Arc::new(*p, i + 1, *rel));
                }
            }
        }
        let sentence = Sentence::new(id, tokens);
        entries.push(CorpusEntry {
            dependency: Some(DepStructure::graph(sentence.clone(), arcs)),
            sentence,
            constituency: None,
        });
    }
    Ok(CorpusDocument {
        entries,
        source_format: SourceFormat::SdpGraph,
    })
}

/// Writes the seven-column layout. Predicates are the tokens with outgoing
/// arcs; the frame column comes from the token's MISC field.
pub fn write_sdp(doc: &CorpusDocument) -> String {
    let mut out = String::from("#SDP 2015\n");
    for entry in &doc.entries {
        let _ = writeln!(out, "#{}", entry.sentence.id);
        let arcs = entry.dependency.as_ref().map(|d| d.arcs.as_slice()).unwrap_or_default();
        let mut preds: Vec<usize> = arcs.iter().filter(|a| a.head > 0).map(|a| a.head).collect();
        preds.sort_unstable();
        preds.dedup();
        for (i, t) in entry.sentence.tokens.iter().enumerate() {
            let d = i + 1;
            let top = arcs.iter().any(|a| a.head == 0 && a.dep == d);
            let sign = |b: bool| if b { "+" } else { "-" };
            let mut line = format!(
                "{d}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.form,
                show_field(&t.lemma),
                show_field(&t.xpos),
                sign(top),
                sign(preds.binary_search(&d).is_ok()),
                show_field(&t.misc)
            );
            for &p in &preds {
                let rel = arcs
                    .iter()
                    .find(|a| a.head == p && a.dep == d)
                    .map_or("_", |a| a.rel.as_str());
                line.push('\t');
                line.push_str(rel);
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dep::validate;

    #[test]
    fn single_arc() {
        let text = "#SDP 2015\n#1\n1\tdogs\tdog\tNNS\t-\t-\t_\tARG1\n2\tbark\tbark\tVBP\t+\t+\tv:1\t_\n";
        let doc = read_sdp(text).unwrap();
        let g = doc.entries[0].dependency.as_ref().unwrap();
        assert_eq!(g.arcs, vec![Arc::new(2, 1, "ARG1"), Arc::new(0, 2, TOP_REL)]);
        assert_eq!(doc.entries[0].sentence.tokens[1].misc.as_deref(), Some("v:1"));
        assert_eq!(read_sdp(&write_sdp(&doc)).unwrap(), doc);
    }

    #[test]
    fn cycle_is_kept() {
        let text = "#c\n1\ta\ta\tX\t-\t+\t_\t_\tr\n2\tb\tb\tX\t-\t+\t_\ts\t_\n";
        let doc = read_sdp(text).unwrap();
        let g = doc.entries[0].dependency.as_ref().unwrap();
        assert_eq!(g.arcs.len(), 2);
        assert!(!validate(g).acyclic);
    }

    #[test]
    fn no_predicates() {
        let doc = read_sdp("#n\n1\ta\ta\tX\t-\t-\t_\n2\tb\tb\tX\t-\t-\t_\n").unwrap();
        assert!(doc.entries[0].dependency.as_ref().unwrap().arcs.is_empty());
        let six = read_sdp("#n\n1\ta\ta\tX\t-\t-\n").unwrap();
        assert_eq!(six.entries[0].sentence.len(), 1);
    }

    #[test]
    fn argument_columns_must_match_predicates() {
        let text = "#b\n1\ta\ta\tX\t-\t+\t_\t_\t_\n2\tb\tb\tX\t-\t-\t_\t_\n";
        assert!(matches!(read_sdp(text), Err(Error::Structure { .. })));
    }
}

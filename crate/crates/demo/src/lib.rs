//! Browser bindings: encode a dependency tree or a bracketed constituency
//! tree under any scheme, and decode a label sequence back.

use std::fmt::Write;

use structlabel::codec::{decode, encode, Family, Scheme, Structure};
use structlabel::dep::{DepStructure, Sentence, Token};
use structlabel::io::{ptb, write_document, CorpusDocument, CorpusEntry, SourceFormat};
use wasm_bindgen::prelude::*;

/// Scheme names, one per line.
#[wasm_bindgen]
pub fn schemes() -> String {
    Scheme::all()
        .iter()
        .map(Scheme::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

#[wasm_bindgen(js_name = encodeTree)]
pub fn encode_tree_js(scheme: &str, forms: &str, heads: &str, rels: &str) -> Result<String, JsError> {
    encode_tree(scheme, forms, heads, rels).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = encodeBrackets)]
pub fn encode_brackets_js(scheme: &str, brackets: &str) -> Result<String, JsError> {
    encode_brackets(scheme, brackets).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = decodeLabels)]
pub fn decode_labels_js(scheme: &str, rows: &str) -> Result<String, JsError> {
    decode_labels(scheme, rows).map_err(|e| JsError::new(&e))
}

fn parse_scheme(name: &str) -> Result<Scheme, String> {
    name.trim().parse().map_err(|e: structlabel::Error| e.to_string())
}

fn table(sentence: &Sentence, labels: &[String], dropped: usize, lifts: usize) -> String {
    let mut out = String::new();
    for (t, l) in sentence.tokens.iter().zip(labels) {
        match &t.xpos {
            Some(tag) => writeln!(out, "{}\t{}\t{}", t.form, tag, l),
            None => writeln!(out, "{}\t{}", t.form, l),
        }
        .unwrap();
    }
    if dropped > 0 || lifts > 0 {
        writeln!(out, "# dropped arcs: {dropped}, lifted arcs: {lifts}").unwrap();
    }
    out
}

/// Labels of the tree given by whitespace-separated forms, heads (0 for the
/// root) and relations, one `form<TAB>label` row per token.
pub fn encode_tree(scheme: &str, forms: &str, heads: &str, rels: &str) -> Result<String, String> {
    let scheme = parse_scheme(scheme)?;
    if scheme.family() == Family::Constituency {
        return Err(format!("{scheme} encodes constituency trees; use the bracket input"));
    }
    let forms: Vec<&str> = forms.split_whitespace().collect();
    let heads: Vec<usize> = heads
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|h| h.parse().map_err(|_| format!("head '{h}' is not a number")))
        .collect::<Result<_, _>>()?;
    let rels: Vec<&str> = rels.split_whitespace().collect();
    if heads.len() != forms.len() || rels.len() != forms.len() {
        return Err(format!(
            "{} forms, {} heads and {} relations",
            forms.len(),
            heads.len(),
            rels.len()
        ));
    }
    if let Some(h) = heads.iter().find(|&&h| h > forms.len()) {
        return Err(format!("head {h} beyond the sentence"));
    }
    let sentence = Sentence::from_forms("demo", &forms);
    let mut dep = DepStructure::from_heads(sentence.clone(), &heads, &rels);
    if scheme.family() == Family::Graph {
        dep = DepStructure::graph(sentence.clone(), dep.arcs);
    }
    let enc = encode(scheme, &sentence, &Structure::Dependency(dep)).map_err(|e| e.to_string())?;
    Ok(table(&enc.sentence, &enc.labels.labels, enc.dropped.len(), enc.lifts))
}

/// Labels of a single bracketed tree, one `form<TAB>tag<TAB>label` row per
/// token.
pub fn encode_brackets(scheme: &str, brackets: &str) -> Result<String, String> {
    let scheme = parse_scheme(scheme)?;
    if scheme.family() != Family::Constituency {
        return Err(format!("{scheme} encodes dependencies; use the head input"));
    }
    let mut trees = ptb::parse_trees(brackets).map_err(|e| e.to_string())?;
    if trees.len() != 1 {
        return Err(format!("expected one tree, found {}", trees.len()));
    }
    let (sentence, tree) = trees.remove(0);
    let enc = encode(scheme, &sentence, &Structure::Constituency(tree)).map_err(|e| e.to_string())?;
    Ok(table(&enc.sentence, &enc.labels.labels, 0, 0))
}

/// Decodes rows as produced by the encoders back into CoNLL-U or brackets,
/// followed by a repair count.
pub fn decode_labels(scheme: &str, rows: &str) -> Result<String, String> {
    let scheme = parse_scheme(scheme)?;
    let tagged = scheme.family() == Family::Constituency;
    let mut tokens = Vec::new();
    let mut labels = Vec::new();
    for (i, row) in rows
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .enumerate()
    {
        let cols: Vec<&str> = row.split('\t').collect();
        match (tagged, cols.as_slice()) {
            (false, [form, _]) => tokens.push(Token::new(*form)),
            (true, [form, tag, _]) => tokens.push(Token::new(*form).with_xpos(*tag)),
            _ => {
                let want = if tagged {
                    "form, tag and label"
                } else {
                    "form and label"
                };
                return Err(format!("row {}: expected {want} separated by tabs", i + 1));
            }
        }
        labels.push(cols.last().unwrap().to_string());
    }
    let sentence = Sentence::new("demo", tokens);
    let d = decode(scheme, &sentence, &labels).map_err(|e| e.to_string())?;
    let (entry, format) = match d.structure {
        Structure::Constituency(tree) => (
            CorpusEntry {
                sentence: tree.tagged_sentence(&sentence),
                dependency: None,
                constituency: Some(tree),
            },
            SourceFormat::PtbBrackets,
        ),
        Structure::Dependency(dep) => (
            CorpusEntry {
                sentence: dep.sentence.clone(),
                dependency: Some(dep),
                constituency: None,
            },
            if scheme.family() == Family::Graph {
                SourceFormat::ConlluEnhancedGraph
            } else {
                SourceFormat::ConlluTree
            },
        ),
    };
    let doc = CorpusDocument {
        entries: vec![entry],
        source_format: format,
    };
    Ok(format!(
        "{}\n# repairs: {}\n",
        write_document(&doc).trim_end(),
        d.repairs
    ))
}

//! Readers and writers for treebank formats and label files.

pub mod conllu;
pub mod labels;
pub mod ptb;
pub mod sdp;

use std::fmt;
use std::str::FromStr;

use crate::constituency::ConstTree;
use crate::dep::{DepStructure, Sentence};
use crate::error::{Error, Result};

pub use labels::{read_labels, write_labels, LabelFile, LabelRow, LabelSentence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SourceFormat {
    ConlluTree,
    ConlluEnhancedGraph,
    PtbBrackets,
    SdpGraph,
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::ConlluTree => "conllu",
            SourceFormat::ConlluEnhancedGraph => "conllu-enhanced",
            SourceFormat::PtbBrackets => "ptb",
            SourceFormat::SdpGraph => "sdp",
        })
    }
}

impl FromStr for SourceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conllu" => Ok(SourceFormat::ConlluTree),
            "conllu-enhanced" => Ok(SourceFormat::ConlluEnhancedGraph),
            "ptb" => Ok(SourceFormat::PtbBrackets),
            "sdp" => Ok(SourceFormat::SdpGraph),
            _ => Err(Error::InvalidArgument(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub sentence: Sentence,
    pub dependency: Option<DepStructure>,
    pub constituency: Option<ConstTree>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusDocument {
    pub entries: Vec<CorpusEntry>,
    pub source_format: SourceFormat,
}

pub fn read_document(text: &str, format: SourceFormat) -> Result<CorpusDocument> {
    match format {
        SourceFormat::ConlluTree => conllu::read_conllu(text, false),
        SourceFormat::ConlluEnhancedGraph => conllu::read_conllu(text, true),
        SourceFormat::PtbBrackets => ptb::read_brackets(text),
        SourceFormat::SdpGraph => sdp::read_sdp(text),
    }
}

pub fn write_document(doc: &CorpusDocument) -> String {
    match doc.source_format {
        SourceFormat::ConlluTree | SourceFormat::ConlluEnhancedGraph => conllu::write_conllu(doc),
        SourceFormat::PtbBrackets => ptb::write_brackets(doc),
        SourceFormat::SdpGraph => sdp::write_sdp(doc),
    }
}

/// Splits text into blocks of consecutive non-blank lines, keeping 1-based
/// line numbers.
pub(crate) fn blocks(text: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push((i + 1, line));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub(crate) fn opt_field(s: &str) -> Option<String> {
    (s != "_").then(|| s.to_string())
}

pub(crate) fn show_field(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("_")
}

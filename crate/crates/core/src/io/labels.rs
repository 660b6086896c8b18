//! Tab-separated label files:
//!
//! ```text
//! # scheme=dep-4b
//! # sent_id = 1
//! I	0100@nsubj
//! went	1110@root
//! ```
//!
//! Constituency schemes add a tag column between form and label, since their
//! decoders need the pre-terminal labels.

use std::fmt::Write;

use crate::codec::{Family, Scheme};
use crate::dep::{Sentence, Token};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelRow {
    pub form: String,
    pub tag: Option<String>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSentence {
    pub id: String,
    pub rows: Vec<LabelRow>,
}

impl LabelSentence {
    /// Forms with tags as XPOS, ready to pass to `decode`.
    pub fn sentence(&self) -> Sentence {
        let tokens = self
            .rows
            .iter()
            .map(|r| Token {
                xpos: r.tag.clone(),
                ..Token::new(r.form.clone())
            })
            .collect();
        Sentence::new(self.id.clone(), tokens)
    }

    pub fn labels(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.label.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelFile {
    pub scheme: Scheme,
    pub sentences: Vec<LabelSentence>,
}

impl LabelFile {
    /// Pairs each sentence with its labels. Tags are taken from XPOS for
    /// constituency schemes.
    pub fn from_sequences(scheme: Scheme, sentences: &[Sentence], labels: &[Vec<String>]) -> Result<Self> {
        if sentences.len() != labels.len() {
            return Err(Error::LengthMismatch {
                sentence: String::new(),
                expected: sentences.len(),
                found: labels.len(),
            });
        }
        let tagged = scheme.family() == Family::Constituency;
        let sentences = sentences
            .iter()
            .zip(labels)
            .map(|(s, ls)| {
                if s.len() != ls.len() {
                    return Err(Error::LengthMismatch {
                        sentence: s.id.clone(),
                        expected: s.len(),
                        found: ls.len(),
                    });
                }
                let rows = s
                    .tokens
                    .iter()
                    .zip(ls)
                    .map(|(t, l)| LabelRow {
                        form: t.form.clone(),
                        tag: if tagged {
                            Some(t.xpos.clone().unwrap_or_else(|| "_".into()))
                        } else {
                            None
                        },
                        label: l.clone(),
                    })
                    .collect();
                Ok(LabelSentence { id: s.id.clone(), rows })
            })
            .collect::<Result<_>>()?;
        Ok(LabelFile { scheme, sentences })
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn read_labels(text: &str) -> Result<LabelFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());
    let scheme = match lines.next() {
        Some((line, l)) => l
            .strip_prefix("# scheme=")
            .ok_or_else(|| parse_error(line, "missing '# scheme=' header"))?
            .trim()
            .parse()?,
        None => return Err(parse_error(1, "missing '# scheme=' header")),
    };
    let mut sentences: Vec<LabelSentence> = Vec::new();
    for (line, l) in lines {
        if let Some(comment) = l.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    sentences.push(LabelSentence {
                        id: value.trim().to_string(),
                        rows: Vec::new(),
                    });
                }
            }
            continue;
        }
        let current = sentences
            .last_mut()
            .ok_or_else(|| parse_error(line, "row before any '# sent_id' line"))?;
        let cols: Vec<&str> = l.split('\t').collect();
        let row = match cols[..] {
            [form, label] => LabelRow {
                form: form.into(),
                tag: None,
                label: label.into(),
            },
            [form, tag, label] => LabelRow {
                form: form.into(),
                tag: Some(tag.into()),
                label: label.into(),
            },
            _ => {
                return Err(parse_error(
                    line,
                    format!("expected 2 or 3 columns, found {}", cols.len()),
                ))
            }
        };
        current.rows.push(row);
    }
    Ok(LabelFile { scheme, sentences })
}

pub fn write_labels(file: &LabelFile) -> String {
    let mut out = format!("# scheme={}\n", file.scheme);
    for s in &file.sentences {
        let _ = writeln!(out, "\n# sent_id = {}", s.id);
        for r in &s.rows {
            match &r.tag {
                Some(tag) => writeln!(out, "{}\t{}\t{}", r.form, tag, r.label),
                None => writeln!(out, "{}\t{}", r.form, r.label),
            }
            .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_is_header_only() {
        let f = LabelFile::from_sequences(Scheme::Dep4Bit, &[], &[]).unwrap();
        assert_eq!(write_labels(&f), "# scheme=dep-4b\n");
        assert_eq!(read_labels("# scheme=dep-4b\n").unwrap(), f);
    }

    #[test]
    fn round_trip_with_tags() {
        let s = Sentence::new(
            "a",
            vec![Token::new("I").with_xpos("PRP"), Token::new("went").with_xpos("VBD")],
        );
        let labels = vec![vec!["1@S".to_string(), "-".to_string()]];
        let f = LabelFile::from_sequences(Scheme::ConstAbsolute, std::slice::from_ref(&s), &labels).unwrap();
        let text = write_labels(&f);
        assert_eq!(text, "# scheme=const-abs\n\n# sent_id = a\nI\tPRP\t1@S\nwent\tVBD\t-\n");
        let back = read_labels(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.sentences[0].sentence(), s);
    }

    #[test]
    fn length_mismatch_names_sentence() {
        let s = Sentence::from_forms("x7", &["a", "b"]);
        let err = LabelFile::from_sequences(Scheme::DepAbsolute, &[s], &[vec!["1@r".into()]]);
        assert!(matches!(err, Err(Error::LengthMismatch { sentence, .. }) if sentence == "x7"));
    }

    #[test]
    fn bad_input() {
        assert!(matches!(read_labels("I\tx\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_labels("# scheme=zzz\n"), Err(Error::UnknownScheme(_))));
        assert!(matches!(
            read_labels("# scheme=dep-abs\n# sent_id = 1\na\tb\tc\td\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}

//! Penn-Treebank style bracketed trees, one or more per file, free layout.

use crate::constituency::{Child, ConstTree, Node};
use crate::dep::{Sentence, Token};
use crate::error::{Error, Result};
use crate::io::{CorpusDocument, CorpusEntry, SourceFormat};

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open(usize),
    Close(usize),
    Atom(usize, &'a str),
}

fn tokenize(text: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok::Atom(s, &text[s..i]));
            }
            match c {
                '(' => out.push(Tok::Open(i)),
                ')' => out.push(Tok::Close(i)),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok::Atom(s, &text[s..]));
    }
    out
}

fn bracket_error(offset: usize, message: &str) -> Error {
    Error::Brackets {
        offset,
        message: message.to_string(),
    }
}

/// Parses every tree in `text`. Words become token leaves numbered per tree.
pub fn parse_trees(text: &str) -> Result<Vec<(Sentence, ConstTree)>> {
    struct Open {
        offset: usize,
        label: Option<String>,
        children: Vec<Child>,
    }
    let toks = tokenize(text);
    let mut out = Vec::new();
    let mut stack: Vec<Open> = Vec::new();
    let mut forms: Vec<String> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        match toks[i] {
            Tok::Open(offset) => {
                let label = match toks.get(i + 1) {
                    Some(Tok::Atom(_, a)) => {
                        i += 1;
                        Some(a.to_string())
                    }
                    _ => None,
                };
                stack.push(Open {
                    offset,
                    label,
                    children: Vec::new(),
                });
            }
            Tok::Atom(offset, word) => {
                let Some(top) = stack.last_mut() else {
                    return Err(bracket_error(offset, "text outside brackets"));
                };
                forms.push(word.to_string());
                top.children.push(Child::Leaf(forms.len()));
            }
            Tok::Close(offset) => {
                let open = stack
                    .pop()
                    .ok_or_else(|| bracket_error(offset, "unbalanced closing bracket"))?;
                if open.children.is_empty() {
                    return Err(bracket_error(open.offset, "empty constituent"));
                }
                let mut node = Node::new(open.label.unwrap_or_default(), open.children);
                match stack.last_mut() {
                    Some(parent) => parent.children.push(Child::Node(node)),
                    None => {
                        // the unlabelled outer bracket of treebank files
                        if node.label.is_empty() && matches!(node.children.as_slice(), [Child::Node(_)]) {
                            if let Some(Child::Node(inner)) = node.children.pop() {
                                node = inner;
                            }
                        }
                        let tree = ConstTree::new(node);
                        let mut sentence = Sentence::new((out.len() + 1).to_string(), Vec::new());
                        for (f, tag) in std::mem::take(&mut forms).into_iter().zip(tree.preterminals()) {
                            let mut t = Token::new(f);
                            t.xpos = tag;
                            sentence.tokens.push(t);
                        }
                        out.push((sentence, tree));
                    }
                }
            }
        }
        i += 1;
    }
    if let Some(open) = stack.first() {
        return Err(bracket_error(open.offset, "unbalanced opening bracket"));
    }
    Ok(out)
}

pub fn read_brackets(text: &str) -> Result<CorpusDocument> {
    let entries = parse_trees(text)?
        .into_iter()
        .map(|(sentence, tree)| CorpusEntry {
            sentence,
            dependency: None,
            constituency: Some(tree),
        })
        .collect();
    Ok(CorpusDocument {
        entries,
        source_format: SourceFormat::PtbBrackets,
    })
}

pub fn write_brackets(doc: &CorpusDocument) -> String {
    let mut out = String::new();
    for entry in &doc.entries {
        if let Some(tree) = &entry.constituency {
            out.push_str(&tree.to_brackets(&entry.sentence));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_simple_tree() {
        let doc = read_brackets("(S (NP (PRP I)) (VP (VBD went)))").unwrap();
        let e = &doc.entries[0];
        let t = e.constituency.as_ref().unwrap();
        assert_eq!(t.root.label, "S");
        assert_eq!(t.len(), 2);
        assert_eq!(e.sentence.tokens[1].form, "went");
        assert_eq!(e.sentence.tokens[1].xpos.as_deref(), Some("VBD"));
    }

    #[test]
    fn write_normalizes_whitespace() {
        let text = "( (S\n   (NP (DT the)\n (NN cat))\n (VP (VBD sat))))\n(X (Y z))";
        let doc = read_brackets(text).unwrap();
        let written = write_brackets(&doc);
        assert_eq!(written, "(S (NP (DT the) (NN cat)) (VP (VBD sat)))\n(X (Y z))\n");
        assert_eq!(read_brackets(&written).unwrap(), doc);
    }

    #[test]
    fn unbalanced_reports_offset() {
        assert_eq!(
            read_brackets("(S (NP (PRP I))"),
            Err(Error::Brackets {
                offset: 0,
                message: "unbalanced opening bracket".into()
            })
        );
        assert!(matches!(
            read_brackets("(S x))"),
            Err(Error::Brackets { offset: 5, .. })
        ));
        assert!(matches!(read_brackets("x"), Err(Error::Brackets { offset: 0, .. })));
        assert!(matches!(
            read_brackets("(S ())"),
            Err(Error::Brackets { offset: 3, .. })
        ));
    }
}

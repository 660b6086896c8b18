//! Label schemes and a uniform encode/decode entry point.

pub mod constituency;
pub mod dependency;
pub mod graph;
pub mod hexa;
pub mod planar;
pub mod pseudo_projective;
pub mod repair;
pub mod tetra;

use std::fmt;
use std::str::FromStr;

use crate::constituency::ConstTree;
use crate::dep::{validate, Arc, DepStructure, Sentence};
use crate::error::{Error, Result};

/// Separator between the components of a rendered label.
pub const COMPONENT_SEP: char = '@';

pub const DEFAULT_BRACKET_PLANES: usize = 3;
pub const DEFAULT_BIT_PLANES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    ConstAbsolute,
    ConstRelative,
    Tetra,
    DepAbsolute,
    DepBracket,
    Dep4Bit,
    Dep7Bit,
    DepHexa,
    GraphRelative,
    GraphBracket(usize),
    Graph4k(usize),
    Graph6k(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Constituency,
    Dependency,
    Graph,
}

impl Scheme {
    pub fn family(self) -> Family {
        use Scheme::*;
        match self {
            ConstAbsolute | ConstRelative | Tetra => Family::Constituency,
            DepAbsolute | DepBracket | Dep4Bit | Dep7Bit | DepHexa => Family::Dependency,
            GraphRelative | GraphBracket(_) | Graph4k(_) | Graph6k(_) => Family::Graph,
        }
    }

    /// Every scheme, graph schemes with their default plane counts.
    pub fn all() -> Vec<Scheme> {
        use Scheme::*;
        vec![
            ConstAbsolute,
            ConstRelative,
            Tetra,
            DepAbsolute,
            DepBracket,
            Dep4Bit,
            Dep7Bit,
            DepHexa,
            GraphRelative,
            GraphBracket(DEFAULT_BRACKET_PLANES),
            Graph4k(DEFAULT_BIT_PLANES),
            Graph6k(DEFAULT_BIT_PLANES),
        ]
    }

    /// Same scheme with a different plane count; no-op for schemes without
    /// planes.
    pub fn with_planes(self, k: usize) -> Scheme {
        match self {
            Scheme::GraphBracket(_) => Scheme::GraphBracket(k),
            Scheme::Graph4k(_) => Scheme::Graph4k(k),
            Scheme::Graph6k(_) => Scheme::Graph6k(k),
            s => s,
        }
    }

    pub fn planes(self) -> Option<usize> {
        match self {
            Scheme::GraphBracket(k) | Scheme::Graph4k(k) | Scheme::Graph6k(k) => Some(k),
            _ => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Scheme::*;
        match self {
            ConstAbsolute => f.write_str("const-abs"),
            ConstRelative => f.write_str("const-rel"),
            Tetra => f.write_str("tetra"),
            DepAbsolute => f.write_str("dep-abs"),
            DepBracket => f.write_str("dep-brk"),
            Dep4Bit => f.write_str("dep-4b"),
            Dep7Bit => f.write_str("dep-7b"),
            DepHexa => f.write_str("dep-hexa"),
            GraphRelative => f.write_str("gr-rel"),
            GraphBracket(k) => write!(f, "gr-brk:{k}"),
            Graph4k(k) => write!(f, "gr-4k:{k}"),
            Graph6k(k) => write!(f, "gr-6k:{k}"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Scheme::*;
        let unknown = || Error::UnknownScheme(s.to_string());
        let (name, k) = match s.split_once(':') {
            Some((name, k)) => {
                let k: usize = k.parse().map_err(|_| unknown())?;
                if k == 0 {
                    return Err(unknown());
                }
                (name, Some(k))
            }
            None => (s, None),
        };
        let scheme = match name {
            "const-abs" => ConstAbsolute,
            "const-rel" => ConstRelative,
            "tetra" => Tetra,
            "dep-abs" => DepAbsolute,
            "dep-brk" => DepBracket,
            "dep-4b" => Dep4Bit,
            "dep-7b" => Dep7Bit,
            "dep-hexa" => DepHexa,
            "gr-rel" => GraphRelative,
            "gr-brk" => GraphBracket(k.unwrap_or(DEFAULT_BRACKET_PLANES)),
            "gr-4k" => Graph4k(k.unwrap_or(DEFAULT_BIT_PLANES)),
            "gr-6k" => Graph6k(k.unwrap_or(DEFAULT_BIT_PLANES)),
            _ => return Err(unknown()),
        };
        if k.is_some() && scheme.planes().is_none() {
            return Err(unknown());
        }
        Ok(scheme)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSequence {
    pub scheme: Scheme,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Constituency(ConstTree),
    Dependency(DepStructure),
}

impl Structure {
    pub fn as_dependency(&self) -> Option<&DepStructure> {
        match self {
            Structure::Dependency(d) => Some(d),
            Structure::Constituency(_) => None,
        }
    }

    pub fn as_constituency(&self) -> Option<&ConstTree> {
        match self {
            Structure::Constituency(c) => Some(c),
            Structure::Dependency(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    pub labels: LabelSequence,
    /// What `decode` needs besides the labels: the input sentence, with the
    /// collapsed pre-terminal labels as XPOS for constituency schemes.
    pub sentence: Sentence,
    pub dropped: Vec<Arc>,
    pub lifts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoding {
    pub structure: Structure,
    /// Repairs, discards and unmatched symbols; zero for valid sequences.
    pub repairs: usize,
}

impl Decoding {
    /// Decoded without any repair into a structure of the expected shape:
    /// a well-formed tree, a tree covering every token, or any graph.
    pub fn is_wellformed(&self) -> bool {
        if self.repairs > 0 {
            return false;
        }
        match &self.structure {
            Structure::Dependency(d) if d.is_tree() => validate(d).well_formed(),
            Structure::Dependency(_) => true,
            Structure::Constituency(c) => c.covers_tokens(c.len()),
        }
    }
}

fn wrong_family(scheme: Scheme) -> Error {
    Error::InvalidArgument(format!("scheme {scheme} does not apply to this structure"))
}

pub fn encode(scheme: Scheme, sentence: &Sentence, structure: &Structure) -> Result<Encoding> {
    use Scheme::*;
    let seq = |labels| LabelSequence { scheme, labels };
    match (scheme.family(), structure) {
        (Family::Constituency, Structure::Constituency(tree)) => {
            if !tree.covers_tokens(sentence.len()) {
                return Err(Error::Structure {
                    sentence: sentence.id.clone(),
                    message: "tree leaves do not match the tokens".into(),
                });
            }
            let (labels, tags) = match scheme {
                Tetra => constituency::encode_tetra_labels(tree)?,
                _ => constituency::encode_depths(tree, scheme == ConstRelative),
            };
            let mut s = sentence.clone();
            for (tok, tag) in s.tokens.iter_mut().zip(tags) {
                tok.xpos = tag;
            }
            Ok(Encoding {
                labels: seq(labels),
                sentence: s,
                dropped: Vec::new(),
                lifts: 0,
            })
        }
        (Family::Dependency, Structure::Dependency(tree)) => {
            let enc = match scheme {
                DepAbsolute => dependency::encode_absolute(tree)?,
                DepBracket => dependency::encode_bracketing(tree)?,
                Dep4Bit => dependency::encode_4bit(tree)?,
                Dep7Bit => dependency::encode_7bit(tree)?,
                _ => hexa::encode_hexa(tree)?,
            };
            Ok(Encoding {
                labels: seq(enc.labels),
                sentence: sentence.clone(),
                dropped: enc.dropped,
                lifts: enc.lifts,
            })
        }
        (Family::Graph, Structure::Dependency(g)) => {
            let enc = match scheme {
                GraphRelative => graph::encode_relative(g),
                GraphBracket(k) => graph::encode_bracketing(g, k),
                Graph4k(k) => graph::encode_4k(g, k),
                Graph6k(k) => graph::encode_6k(g, k),
                _ => unreachable!("graph family"),
            };
            Ok(Encoding {
                labels: seq(enc.labels),
                sentence: sentence.clone(),
                dropped: enc.dropped,
                lifts: 0,
            })
        }
        _ => Err(wrong_family(scheme)),
    }
}

pub fn decode(scheme: Scheme, sentence: &Sentence, labels: &[String]) -> Result<Decoding> {
    use Scheme::*;
    if labels.len() != sentence.len() {
        return Err(Error::LengthMismatch {
            sentence: sentence.id.clone(),
            expected: sentence.len(),
            found: labels.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::Structure {
            sentence: sentence.id.clone(),
            message: "empty sentence".into(),
        });
    }
    let tags: Vec<Option<String>> = sentence.tokens.iter().map(|t| t.xpos.clone()).collect();
    let (structure, repairs) = match scheme {
        ConstAbsolute | ConstRelative => {
            let (t, r) = constituency::decode_depth_labels(labels, &tags, scheme == ConstRelative)?;
            (Structure::Constituency(t), r)
        }
        Tetra => {
            let (t, r) = constituency::decode_tetra_labels(labels, &tags)?;
            (Structure::Constituency(t), r)
        }
        DepAbsolute | DepBracket | Dep4Bit | Dep7Bit | DepHexa => {
            let d = match scheme {
                DepAbsolute => dependency::decode_absolute(sentence, labels)?,
                DepBracket => dependency::decode_bracketing(sentence, labels)?,
                Dep4Bit => dependency::decode_4bit(sentence, labels)?,
                Dep7Bit => dependency::decode_7bit(sentence, labels)?,
                _ => hexa::decode_hexa(sentence, labels)?,
            };
            (Structure::Dependency(d.tree), d.repairs)
        }
        GraphRelative | GraphBracket(_) | Graph4k(_) | Graph6k(_) => {
            let d = match scheme {
                GraphRelative => graph::decode_relative(sentence, labels)?,
                GraphBracket(k) => graph::decode_bracketing(sentence, labels, k)?,
                Graph4k(k) => graph::decode_4k(sentence, labels, k)?,
                Graph6k(k) => graph::decode_6k(sentence, labels, k)?,
                _ => unreachable!("graph family"),
            };
            (Structure::Dependency(d.graph), d.discarded)
        }
    };
    Ok(Decoding { structure, repairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::all() {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!("gr-brk".parse::<Scheme>().unwrap(), Scheme::GraphBracket(3));
        assert_eq!("gr-6k:2".parse::<Scheme>().unwrap(), Scheme::Graph6k(2));
        assert!("dep-4b:2".parse::<Scheme>().is_err());
        assert!("gr-4k:0".parse::<Scheme>().is_err());
        assert!("nope".parse::<Scheme>().is_err());
    }

    #[test]
    fn family_mismatch_is_an_error() {
        let s = Sentence::anonymous(1);
        let t = DepStructure::from_heads(s.clone(), &[0], &["root"]);
        let err = encode(Scheme::Tetra, &s, &Structure::Dependency(t));
        assert!(err.is_err());
    }
}

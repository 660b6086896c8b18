//! Dependency-tree linearizations: absolute heads, 2-planar bracketing, and
//! the 4-bit and 7-bit encodings.

use crate::codec::planar::{
    decode_brackets, decode_plane_bits, encode_brackets, encode_plane_bits, parse_bits, parse_brackets, render_bits,
    render_brackets, PlanarArc, PlaneBits,
};
use crate::codec::pseudo_projective::{deprojectivize, pseudo_projectivize};
use crate::codec::repair::repair_heads;
use crate::codec::COMPONENT_SEP;
use crate::dep::{Arc, DepStructure, Sentence};
use crate::error::{Error, Result};
use crate::planes::{assign_planes, PlaneConstraint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEncoding {
    pub labels: Vec<String>,
    /// Arcs that fit in no plane and are missing from the labels.
    pub dropped: Vec<Arc>,
    /// Pseudo-projective lifts applied before encoding.
    pub lifts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecoding {
    pub tree: DepStructure,
    pub repairs: usize,
}

pub(crate) fn split_label(label: &str) -> Result<(&str, &str)> {
    label.split_once(COMPONENT_SEP).ok_or_else(|| Error::InvalidLabel {
        label: label.to_string(),
        message: format!("expected value{COMPONENT_SEP}relation"),
    })
}

pub(crate) fn join_label(value: &str, rel: &str) -> String {
    format!("{value}{COMPONENT_SEP}{rel}")
}

fn require_tree(tree: &DepStructure) -> Result<()> {
    if tree.is_tree() {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

fn relations(tree: &DepStructure) -> Vec<String> {
    tree.head_arcs()
        .into_iter()
        .map(|a| a.map_or_else(String::new, |a| a.rel.clone()))
        .collect()
}

fn check_len(sentence: &Sentence, labels: &[String]) -> Result<()> {
    if sentence.len() != labels.len() {
        return Err(Error::LengthMismatch {
            sentence: sentence.id.clone(),
            expected: sentence.len(),
            found: labels.len(),
        });
    }
    Ok(())
}

/// Builds a tree from decoded arcs, in decoding order, and per-token relations.
fn assemble(sentence: &Sentence, arcs: &[PlanarArc], rels: Vec<String>, unmatched: usize) -> TreeDecoding {
    let n = sentence.len();
    let mut candidates = vec![Vec::new(); n];
    for &(head, dep, _) in arcs {
        if (1..=n).contains(&dep) {
            candidates[dep - 1].push(head);
        }
    }
    let (heads, repairs) = repair_heads(n, &candidates);
    TreeDecoding {
        tree: DepStructure::from_heads(sentence.clone(), &heads, &rels),
        repairs: repairs + unmatched,
    }
}

pub fn encode_absolute(tree: &DepStructure) -> Result<TreeEncoding> {
    require_tree(tree)?;
    let labels = tree
        .head_arcs()
        .into_iter()
        .map(|a| match a {
            Some(a) => join_label(&a.head.to_string(), &a.rel),
            None => join_label("0", ""),
        })
        .collect();
    Ok(TreeEncoding {
        labels,
        dropped: Vec::new(),
        lifts: 0,
    })
}

pub fn decode_absolute(sentence: &Sentence, labels: &[String]) -> Result<TreeDecoding> {
    check_len(sentence, labels)?;
    let mut arcs = Vec::new();
    let mut rels = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        let (head, rel) = split_label(label)?;
        let head: usize = head.parse().map_err(|_| Error::InvalidLabel {
            label: label.clone(),
            message: "head is not a non-negative integer".into(),
        })?;
        arcs.push((head, i + 1, 1));
        rels.push(rel.to_string());
    }
    Ok(assemble(sentence, &arcs, rels, 0))
}

pub fn encode_bracketing(tree: &DepStructure) -> Result<TreeEncoding> {
    require_tree(tree)?;
    let planes = assign_planes(tree, 2, PlaneConstraint::SameDirectionNonCrossing);
    let symbols = encode_brackets(tree.len(), &planes.planes);
    let labels = symbols
        .iter()
        .zip(relations(tree))
        .map(|(s, rel)| join_label(&render_brackets(s), &rel))
        .collect();
    Ok(TreeEncoding {
        labels,
        dropped: planes.dropped,
        lifts: 0,
    })
}

pub fn decode_bracketing(sentence: &Sentence, labels: &[String]) -> Result<TreeDecoding> {
    check_len(sentence, labels)?;
    let mut symbols = Vec::new();
    let mut rels = Vec::new();
    for label in labels {
        let (b, rel) = split_label(label)?;
        symbols.push(parse_brackets(b, 2)?);
        rels.push(rel.to_string());
    }
    let (arcs, unmatched) = decode_brackets(&symbols, 2);
    Ok(assemble(sentence, &arcs, rels, unmatched))
}

pub fn four_bits(b: &PlaneBits) -> [bool; 4] {
    [b.left_head, b.left_far || b.right_far, b.left_deps, b.right_deps]
}

pub fn from_four_bits(bits: &[bool]) -> PlaneBits {
    PlaneBits {
        left_head: bits[0],
        right_head: !bits[0],
        left_far: bits[0] && bits[1],
        right_far: !bits[0] && bits[1],
        left_deps: bits[2],
        right_deps: bits[3],
    }
}

pub fn encode_4bit(tree: &DepStructure) -> Result<TreeEncoding> {
    require_tree(tree)?;
    let proj = pseudo_projectivize(tree)?;
    let planes = assign_planes(&proj.tree, 1, PlaneConstraint::SameDirectionNonCrossing);
    let bits = encode_plane_bits(proj.tree.len(), &planes.planes);
    let labels = bits
        .iter()
        .zip(relations(&proj.tree))
        .map(|(b, rel)| join_label(&render_bits(&four_bits(&b[0])), &rel))
        .collect();
    Ok(TreeEncoding {
        labels,
        dropped: planes.dropped,
        lifts: proj.lifts,
    })
}

pub fn decode_4bit(sentence: &Sentence, labels: &[String]) -> Result<TreeDecoding> {
    check_len(sentence, labels)?;
    let mut bits = Vec::new();
    let mut rels = Vec::new();
    for label in labels {
        let (b, rel) = split_label(label)?;
        bits.push(vec![from_four_bits(&parse_bits(b, 4)?)]);
        rels.push(rel.to_string());
    }
    let (arcs, unmatched) = decode_plane_bits(&bits, 1);
    let mut out = assemble(sentence, &arcs, rels, unmatched);
    out.tree = deprojectivize(&out.tree);
    Ok(out)
}

pub fn seven_bits(planes: &[PlaneBits]) -> [bool; 7] {
    let (p1, p2) = (planes[0], planes[1]);
    let in_second = !(p1.left_head || p1.right_head) && (p2.left_head || p2.right_head);
    let head = if in_second { p2 } else { p1 };
    [
        head.left_head,
        in_second,
        head.left_far || head.right_far,
        p1.left_deps,
        p1.right_deps,
        p2.left_deps,
        p2.right_deps,
    ]
}

pub fn from_seven_bits(bits: &[bool]) -> [PlaneBits; 2] {
    let mut planes = [PlaneBits::default(); 2];
    let p = usize::from(bits[1]);
    planes[p].left_head = bits[0];
    planes[p].right_head = !bits[0];
    planes[p].left_far = bits[0] && bits[2];
    planes[p].right_far = !bits[0] && bits[2];
    planes[0].left_deps = bits[3];
    planes[0].right_deps = bits[4];
    planes[1].left_deps = bits[5];
    planes[1].right_deps = bits[6];
    planes
}

pub fn encode_7bit(tree: &DepStructure) -> Result<TreeEncoding> {
    require_tree(tree)?;
    let planes = assign_planes(tree, 2, PlaneConstraint::SameDirectionNonCrossing);
    let bits = encode_plane_bits(tree.len(), &planes.planes);
    let labels = bits
        .iter()
        .zip(relations(tree))
        .map(|(b, rel)| join_label(&render_bits(&seven_bits(b)), &rel))
        .collect();
    Ok(TreeEncoding {
        labels,
        dropped: planes.dropped,
        lifts: 0,
    })
}

pub fn decode_7bit(sentence: &Sentence, labels: &[String]) -> Result<TreeDecoding> {
    check_len(sentence, labels)?;
    let mut bits = Vec::new();
    let mut rels = Vec::new();
    for label in labels {
        let (b, rel) = split_label(label)?;
        bits.push(from_seven_bits(&parse_bits(b, 7)?).to_vec());
        rels.push(rel.to_string());
    }
    let (arcs, unmatched) = decode_plane_bits(&bits, 2);
    Ok(assemble(sentence, &arcs, rels, unmatched))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dep::validate;

    fn tree(heads: &[usize]) -> DepStructure {
        let rels: Vec<String> = (1..=heads.len()).map(|i| format!("r{i}")).collect();
        DepStructure::from_heads(Sentence::anonymous(heads.len()), heads, &rels)
    }

    #[test]
    fn absolute_labels() {
        let t = DepStructure::from_heads(Sentence::anonymous(2), &[2, 0], &["nsubj", "root"]);
        let enc = encode_absolute(&t).unwrap();
        assert_eq!(enc.labels, vec!["2@nsubj", "0@root"]);
        let dec = decode_absolute(&t.sentence, &enc.labels).unwrap();
        assert_eq!((dec.tree, dec.repairs), (t, 0));
    }

    #[test]
    fn absolute_out_of_range_is_repaired() {
        let labels: Vec<String> = ["99@x", "0@root", "2@y"].iter().map(|s| s.to_string()).collect();
        let dec = decode_absolute(&Sentence::anonymous(3), &labels).unwrap();
        assert!(validate(&dec.tree).well_formed());
        assert_eq!(dec.repairs, 2);
    }

    #[test]
    fn schemes_round_trip_small_tree() {
        let t = tree(&[2, 0, 4, 2, 4]);
        for (enc, dec) in [
            (
                encode_bracketing as fn(&DepStructure) -> Result<TreeEncoding>,
                decode_bracketing as fn(&Sentence, &[String]) -> Result<TreeDecoding>,
            ),
            (encode_4bit, decode_4bit),
            (encode_7bit, decode_7bit),
        ] {
            let e = enc(&t).unwrap();
            let d = dec(&t.sentence, &e.labels).unwrap();
            assert_eq!(d.repairs, 0, "{:?}", e.labels);
            assert_eq!(d.tree, t);
        }
    }

    #[test]
    fn bad_labels_are_errors() {
        let s = Sentence::anonymous(1);
        assert!(decode_4bit(&s, &["010@x".to_string()]).is_err());
        assert!(decode_bracketing(&s, &["<x".to_string()]).is_err());
        assert!(decode_absolute(&s, &["0".to_string()]).is_err());
        assert!(matches!(decode_7bit(&s, &[]), Err(Error::LengthMismatch { .. })));
    }
}

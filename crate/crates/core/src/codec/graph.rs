//! Dependency-graph linearizations. Every label is `x@ρ`, where `ρ` lists the
//! relations of the incoming arcs ordered by head position (then plane),
//! joined with `$`. Tokens without incoming arcs render `x` alone.

use crate::codec::dependency::{four_bits, from_four_bits};
use crate::codec::planar::{
    decode_brackets, decode_plane_bits, encode_brackets, encode_plane_bits, parse_bits, parse_brackets, render_bits,
    render_brackets, PlanarArc, PlaneBits,
};
use crate::codec::COMPONENT_SEP;
use crate::dep::{Arc, DepStructure, Sentence};
use crate::error::{Error, Result};
use crate::planes::{assign_planes, PlaneConstraint};

/// Relation of the artificial arcs that complete 4k-bit planes.
pub const NULL_REL: &str = "<null>";
pub const REL_SEP: char = '$';
/// Rendering of an empty `x` component.
pub const EMPTY: &str = "-";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEncoding {
    pub labels: Vec<String>,
    pub dropped: Vec<Arc>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDecoding {
    pub graph: DepStructure,
    /// Brackets, offsets, bits or relations that could not be used.
    pub discarded: usize,
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

/// Incoming `(head, plane, rel)` triples of each token, canonically ordered.
fn incoming(n: usize, planes: &[Vec<Arc>]) -> Vec<Vec<(usize, usize, String)>> {
    let mut out = vec![Vec::new(); n];
    for (p, plane) in planes.iter().enumerate() {
        for a in plane {
            if (1..=n).contains(&a.dep) {
                out[a.dep - 1].push((a.head, p + 1, a.rel.clone()));
            }
        }
    }
    for v in &mut out {
        v.sort();
    }
    out
}

fn render(x: &str, rels: &[(usize, usize, String)]) -> String {
    let x = if x.is_empty() { EMPTY } else { x };
    if rels.is_empty() {
        return x.to_string();
    }
    let rho: Vec<&str> = rels.iter().map(|(_, _, r)| r.as_str()).collect();
    format!("{x}{COMPONENT_SEP}{}", rho.join(&REL_SEP.to_string()))
}

fn split(label: &str) -> (&str, Vec<String>) {
    let (x, rels) = match label.split_once(COMPONENT_SEP) {
        Some((x, rho)) => (x, rho.split(REL_SEP).map(str::to_string).collect()),
        None => (label, Vec::new()),
    };
    (if x == EMPTY { "" } else { x }, rels)
}

/// Pairs decoded arcs with the relations of their dependents' labels.
fn attach_relations(
    sentence: &Sentence,
    arcs: Vec<PlanarArc>,
    rels: &[Vec<String>],
    mut discarded: usize,
) -> GraphDecoding {
    let n = sentence.len();
    let mut per_dep: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (head, dep, plane) in arcs {
        if (1..=n).contains(&dep) && head <= n && head != dep {
            per_dep[dep - 1].push((head, plane));
        } else {
            discarded += 1;
        }
    }
    let mut out = Vec::new();
    for (i, mut heads) in per_dep.into_iter().enumerate() {
        heads.sort_unstable();
        let rho = &rels[i];
        discarded += heads.len().abs_diff(rho.len());
        for (j, (head, _)) in heads.into_iter().enumerate() {
            let rel = rho.get(j).map_or("", String::as_str);
            if rel != NULL_REL {
                out.push(Arc::new(head, i + 1, rel));
            }
        }
    }
    GraphDecoding {
        graph: DepStructure::graph(sentence.clone(), out),
        discarded,
    }
}

pub fn encode_relative(graph: &DepStructure) -> GraphEncoding {
    let n = graph.len();
    let inc = incoming(n, std::slice::from_ref(&graph.arcs));
    let labels = inc
        .iter()
        .enumerate()
        .map(|(i, rels)| {
            let mut offsets: Vec<i64> = rels.iter().map(|(h, _, _)| *h as i64 - (i + 1) as i64).collect();
            offsets.sort_unstable();
            let x = if offsets.is_empty() {
                String::new()
            } else {
                let parts: Vec<String> = offsets.iter().map(i64::to_string).collect();
                format!("({})", parts.join(","))
            };
            render(&x, rels)
        })
        .collect();
    GraphEncoding {
        labels,
        dropped: Vec::new(),
    }
}

fn parse_offsets(x: &str, label: &str) -> Result<Vec<i64>> {
    if x.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidLabel {
        label: label.to_string(),
        message: "expected (o1,o2,...) or -".into(),
    };
    let inner = x.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    inner
        .split(',')
        .map(|o| o.trim().parse::<i64>().map_err(|_| bad()))
        .collect()
}

pub fn decode_relative(sentence: &Sentence, labels: &[String]) -> Result<GraphDecoding> {
    check_len(sentence, labels)?;
    let n = sentence.len() as i64;
    let mut arcs = Vec::new();
    let mut rels = Vec::new();
    let mut discarded = 0;
    for (i, label) in labels.iter().enumerate() {
        let (x, rho) = split(label);
        let dep = i as i64 + 1;
        for off in parse_offsets(x, label)? {
            let head = dep + off;
            if off == 0 || !(0..=n).contains(&head) {
                discarded += 1;
            } else {
                arcs.push((head as usize, dep as usize, 1));
            }
        }
        rels.push(rho);
    }
    Ok(attach_relations(sentence, arcs, &rels, discarded))
}

pub fn encode_bracketing(graph: &DepStructure, k: usize) -> GraphEncoding {
    let n = graph.len();
    let planes = assign_planes(graph, k, PlaneConstraint::NonCrossing);
    let symbols = encode_brackets(n, &planes.planes);
    let inc = incoming(n, &planes.planes);
    let labels = symbols
        .iter()
        .zip(&inc)
        .map(|(s, rels)| render(&render_brackets(s), rels))
        .collect();
    GraphEncoding {
        labels,
        dropped: planes.dropped,
    }
}

pub fn decode_bracketing(sentence: &Sentence, labels: &[String], k: usize) -> Result<GraphDecoding> {
    check_len(sentence, labels)?;
    let mut symbols = Vec::new();
    let mut rels = Vec::new();
    for label in labels {
        let (x, rho) = split(label);
        symbols.push(parse_brackets(x, k)?);
        rels.push(rho);
    }
    let (arcs, unmatched) = decode_brackets(&symbols, k);
    Ok(attach_relations(sentence, arcs, &rels, unmatched))
}

fn bit_labels(n: usize, planes: &[Vec<Arc>], width: usize, to_bits: impl Fn(&PlaneBits) -> Vec<bool>) -> Vec<String> {
    let bits = encode_plane_bits(n, planes);
    let inc = incoming(n, planes);
    bits.iter()
        .zip(&inc)
        .map(|(per_plane, rels)| {
            let flat: Vec<bool> = per_plane.iter().flat_map(&to_bits).collect();
            debug_assert_eq!(flat.len(), width * planes.len());
            render(&render_bits(&flat), rels)
        })
        .collect()
}

fn decode_bit_labels(
    sentence: &Sentence,
    labels: &[String],
    k: usize,
    width: usize,
    from_bits: impl Fn(&[bool]) -> PlaneBits,
) -> Result<GraphDecoding> {
    check_len(sentence, labels)?;
    let mut bits = Vec::new();
    let mut rels = Vec::new();
    for label in labels {
        let (x, rho) = split(label);
        let flat = parse_bits(x, width * k)?;
        bits.push(flat.chunks(width).map(&from_bits).collect::<Vec<_>>());
        rels.push(rho);
    }
    let (arcs, unmatched) = decode_plane_bits(&bits, k);
    Ok(attach_relations(sentence, arcs, &rels, unmatched))
}

pub fn encode_4k(graph: &DepStructure, k: usize) -> GraphEncoding {
    let n = graph.len();
    let mut planes = assign_planes(graph, k, PlaneConstraint::FourKBit);
    // complete every plane with arcs from the previous token
    for plane in &mut planes.planes {
        let mut has_head = vec![false; n + 1];
        for a in plane.iter() {
            has_head[a.dep] = true;
        }
        for i in 1..=n {
            if !has_head[i] {
                plane.push(Arc::new(i - 1, i, NULL_REL));
            }
        }
        plane.sort();
    }
    GraphEncoding {
        labels: bit_labels(n, &planes.planes, 4, |b| four_bits(b).to_vec()),
        dropped: planes.dropped,
    }
}

pub fn decode_4k(sentence: &Sentence, labels: &[String], k: usize) -> Result<GraphDecoding> {
    decode_bit_labels(sentence, labels, k, 4, from_four_bits)
}

fn six_bits(b: &PlaneBits) -> Vec<bool> {
    vec![
        b.left_head,
        b.right_head,
        b.left_far,
        b.right_far,
        b.left_deps,
        b.right_deps,
    ]
}

fn from_six_bits(b: &[bool]) -> PlaneBits {
    PlaneBits {
        left_head: b[0],
        right_head: b[1],
        left_far: b[2],
        right_far: b[3],
        left_deps: b[4],
        right_deps: b[5],
    }
}

pub fn encode_6k(graph: &DepStructure, k: usize) -> GraphEncoding {
    let n = graph.len();
    let planes = assign_planes(graph, k, PlaneConstraint::SixKBit);
    GraphEncoding {
        labels: bit_labels(n, &planes.planes, 6, six_bits),
        dropped: planes.dropped,
    }
}

pub fn decode_6k(sentence: &Sentence, labels: &[String], k: usize) -> Result<GraphDecoding> {
    decode_bit_labels(sentence, labels, k, 6, from_six_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, arcs: &[(usize, usize, &str)]) -> DepStructure {
        DepStructure::graph(
            Sentence::anonymous(n),
            arcs.iter().map(|&(h, d, r)| Arc::new(h, d, r)).collect(),
        )
    }

    #[test]
    fn relative_labels() {
        let g = graph(3, &[(0, 2, "top"), (2, 1, "a"), (3, 1, "b")]);
        let enc = encode_relative(&g);
        assert_eq!(enc.labels, vec!["(1,2)@a$b", "(-2)@top", "-"]);
        let dec = decode_relative(&g.sentence, &enc.labels).unwrap();
        assert_eq!((dec.graph, dec.discarded), (g, 0));
    }

    #[test]
    fn relative_discards_out_of_range() {
        let labels = vec!["(5)@x".to_string(), "-".to_string()];
        let dec = decode_relative(&Sentence::anonymous(2), &labels).unwrap();
        assert!(dec.graph.arcs.is_empty());
        assert_eq!(dec.discarded, 2);
    }

    #[test]
    fn minimal_4k_graph() {
        let g = graph(2, &[(1, 2, "r")]);
        let enc = encode_4k(&g, 4);
        assert!(enc.labels.iter().all(|l| l.split('@').next().unwrap().len() == 16));
        let dec = decode_4k(&g.sentence, &enc.labels, 4).unwrap();
        assert_eq!((dec.graph, dec.discarded), (g, 0));
    }

    #[test]
    fn empty_graph_6k_is_all_zero() {
        let g = graph(3, &[]);
        let enc = encode_6k(&g, 4);
        assert!(enc.labels.iter().all(|l| l == &"0".repeat(24)));
        assert_eq!(decode_6k(&g.sentence, &enc.labels, 4).unwrap().graph, g);
    }

    #[test]
    fn two_sided_heads_in_one_plane() {
        let g = graph(3, &[(1, 2, "a"), (3, 2, "b")]);
        let enc = encode_6k(&g, 1);
        assert!(enc.labels[1].starts_with("11"));
        assert_eq!(decode_6k(&g.sentence, &enc.labels, 1).unwrap().graph, g);
    }

    #[test]
    fn cycles_survive_bracketing() {
        let g = graph(3, &[(1, 2, "a"), (2, 1, "b"), (0, 3, "top")]);
        let enc = encode_bracketing(&g, 3);
        assert!(enc.dropped.is_empty());
        assert_eq!(decode_bracketing(&g.sentence, &enc.labels, 3).unwrap().graph, g);
    }
}

//! Hexatagging: a projective tree becomes a binary head tree (BHT) whose
//! nodes say on which side the lexical head lies, and the BHT is tetratagged.
//!
//! A head collects its left dependents first, nearest outward, under nodes
//! labeled `R` (head on the right), then its right dependents, nearest
//! outward, under nodes labeled `L`.

use crate::codec::dependency::{TreeDecoding, TreeEncoding};
use crate::codec::pseudo_projective::{deprojectivize, pseudo_projectivize};
use crate::codec::tetra::{decode_tetra, encode_tetra, BinTree, FenceTag, LeafTag, TetraTag};
use crate::codec::COMPONENT_SEP;
use crate::dep::{DepStructure, Sentence};
use crate::error::{Error, Result};

pub const HEAD_RIGHT: &str = "R";
pub const HEAD_LEFT: &str = "L";
/// Fence component of the last token.
pub const END_FENCE: &str = "Ω";

/// BHT of a projective tree given as `heads[i - 1]`.
pub fn to_bht(heads: &[usize]) -> Result<BinTree> {
    let n = heads.len();
    let mut children = vec![Vec::new(); n + 1];
    for (i, &h) in heads.iter().enumerate() {
        children[h].push(i + 1);
    }
    let roots = &children[0];
    let [root] = roots.as_slice() else {
        return Err(Error::InvalidArgument(format!(
            "expected one root attachment, found {}",
            roots.len()
        )));
    };
    fn build(h: usize, children: &[Vec<usize>]) -> BinTree {
        let mut t = BinTree::Leaf(h);
        for &l in children[h].iter().filter(|&&d| d < h).rev() {
            t = BinTree::node(HEAD_RIGHT, build(l, children), t);
        }
        for &r in children[h].iter().filter(|&&d| d > h) {
            t = BinTree::node(HEAD_LEFT, t, build(r, children));
        }
        t
    }
    Ok(build(*root, &children))
}

/// Heads recovered from a BHT. Any label other than `R` counts as `L`.
pub fn from_bht(tree: &BinTree, n: usize) -> Vec<usize> {
    fn go(t: &BinTree, heads: &mut [usize]) -> usize {
        match t {
            BinTree::Leaf(i) => *i,
            BinTree::Node(label, a, b) => {
                let ha = go(a, heads);
                let hb = go(b, heads);
                if label == HEAD_RIGHT {
                    heads[ha - 1] = hb;
                    hb
                } else {
                    heads[hb - 1] = ha;
                    ha
                }
            }
        }
    }
    let mut heads = vec![0; n];
    let root = go(tree, &mut heads);
    heads[root - 1] = 0;
    heads
}

fn render(tag: &TetraTag, rel: &str) -> String {
    let fence = match &tag.fence {
        Some((dir, label)) => format!("{}{}", dir.symbol(), label),
        None => END_FENCE.to_string(),
    };
    format!("{}{sep}{}{sep}{}", tag.leaf.symbol(), fence, rel, sep = COMPONENT_SEP)
}

fn parse(label: &str) -> Result<(TetraTag, String)> {
    let bad = || Error::InvalidLabel {
        label: label.to_string(),
        message: "expected tag@fence@relation".into(),
    };
    let mut parts = label.splitn(3, COMPONENT_SEP);
    let (Some(leaf), Some(fence), Some(rel)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let leaf = LeafTag::parse(leaf).ok_or_else(bad)?;
    let fence = if fence == END_FENCE {
        None
    } else {
        let (dir, c): (FenceTag, &str) = FenceTag::split(fence).ok_or_else(bad)?;
        if c != HEAD_LEFT && c != HEAD_RIGHT {
            return Err(bad());
        }
        Some((dir, c.to_string()))
    };
    Ok((TetraTag { leaf, fence }, rel.to_string()))
}

pub fn encode_hexa(tree: &DepStructure) -> Result<TreeEncoding> {
    let proj = pseudo_projectivize(tree)?;
    let heads: Vec<usize> = proj.tree.heads().into_iter().map(|h| h.unwrap_or(0)).collect();
    let bht = to_bht(&heads)?;
    let rels = proj.tree.head_arcs();
    let labels = encode_tetra(&bht)
        .iter()
        .zip(rels)
        .map(|(t, a)| render(t, a.map_or("", |a| a.rel.as_str())))
        .collect();
    Ok(TreeEncoding {
        labels,
        dropped: Vec::new(),
        lifts: proj.lifts,
    })
}

pub fn decode_hexa(sentence: &Sentence, labels: &[String]) -> Result<TreeDecoding> {
    if sentence.len() != labels.len() {
        return Err(Error::LengthMismatch {
            sentence: sentence.id.clone(),
            expected: sentence.len(),
            found: labels.len(),
        });
    }
    let (tags, rels): (Vec<TetraTag>, Vec<String>) = labels
        .iter()
        .map(|l| parse(l))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .unzip();
    if tags.is_empty() {
        return Ok(TreeDecoding {
            tree: DepStructure::tree(sentence.clone(), Vec::new()),
            repairs: 0,
        });
    }
    let (bht, repairs) = decode_tetra(&tags, HEAD_LEFT);
    let heads = from_bht(&bht, sentence.len());
    let tree = DepStructure::from_heads(sentence.clone(), &heads, &rels);
    Ok(TreeDecoding {
        tree: deprojectivize(&tree),
        repairs,
    })
}

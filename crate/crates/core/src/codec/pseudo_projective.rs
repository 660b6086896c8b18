//! Pseudo-projective transformation, 'head' marking strategy.
//!
//! Non-projective arcs are lifted to the head's head, shortest arc first,
//! until the tree is projective. A lifted arc's relation becomes `r|h`, where
//! `r` is its own relation and `h` the relation of its original head.

use std::collections::VecDeque;

use crate::dep::{Arc, DepStructure};
use crate::error::{Error, Result};

pub const LIFT_SEPARATOR: char = '|';

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projectivized {
    pub tree: DepStructure,
    /// Number of single-step lifts applied.
    pub lifts: usize,
    /// Number of distinct tokens whose arc was lifted.
    pub lifted_tokens: usize,
}

/// Whether `head -> dep` is projective: every token strictly between them is
/// dominated by `head`.
fn arc_is_projective(heads: &[usize], head: usize, dep: usize) -> bool {
    let (lo, hi) = (head.min(dep), head.max(dep));
    (lo + 1..hi).all(|k| dominates(heads, head, k))
}

fn dominates(heads: &[usize], ancestor: usize, mut node: usize) -> bool {
    if ancestor == 0 {
        return true;
    }
    let mut steps = 0;
    while node != 0 && steps <= heads.len() {
        if node == ancestor {
            return true;
        }
        node = heads[node - 1];
        steps += 1;
    }
    false
}

pub fn pseudo_projectivize(tree: &DepStructure) -> Result<Projectivized> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let n = tree.len();
    let head_arcs = tree.head_arcs();
    if head_arcs.iter().any(Option::is_none) {
        return Err(Error::Structure {
            sentence: tree.sentence.id.clone(),
            message: "token without a head".into(),
        });
    }
    let mut heads: Vec<usize> = head_arcs.iter().map(|a| a.map_or(0, |a| a.head)).collect();
    let mut rels: Vec<String> = head_arcs
        .iter()
        .map(|a| a.map_or(String::new(), |a| a.rel.clone()))
        .collect();
    let original_rels = rels.clone();
    let mut lifted = vec![false; n];
    let mut lifts = 0;

    loop {
        let candidate = (1..=n)
            .filter(|&d| !arc_is_projective(&heads, heads[d - 1], d))
            .min_by_key(|&d| (heads[d - 1].abs_diff(d), heads[d - 1].min(d)));
        let Some(d) = candidate else { break };
        let h = heads[d - 1];
        // a non-projective arc never hangs from the root
        let grand = heads[h - 1];
        if !lifted[d - 1] {
            rels[d - 1] = format!("{}{}{}", original_rels[d - 1], LIFT_SEPARATOR, original_rels[h - 1]);
            lifted[d - 1] = true;
        }
        heads[d - 1] = grand;
        lifts += 1;
    }

    let arcs = (1..=n)
        .map(|d| Arc::new(heads[d - 1], d, rels[d - 1].clone()))
        .collect();
    Ok(Projectivized {
        tree: DepStructure::tree(tree.sentence.clone(), arcs),
        lifts,
        lifted_tokens: lifted.iter().filter(|&&l| l).count(),
    })
}

/// Reattaches every `r|h` arc to the nearest descendant of its current head
/// (breadth first, then linear distance) whose relation is `h`, outside the
/// lifted token's own subtree. Unresolvable arcs keep their head.
pub fn deprojectivize(tree: &DepStructure) -> DepStructure {
    let n = tree.len();
    let head_arcs = tree.head_arcs();
    let mut heads: Vec<usize> = head_arcs.iter().map(|a| a.map_or(0, |a| a.head)).collect();
    let mut rels: Vec<String> = head_arcs
        .iter()
        .map(|a| a.map_or(String::new(), |a| a.rel.clone()))
        .collect();

    // process lifted tokens top-down
    let order = bfs_order(&heads);
    for d in order {
        let Some(sep) = rels[d - 1].find(LIFT_SEPARATOR) else {
            continue;
        };
        let wanted = rels[d - 1][sep + 1..].to_string();
        rels[d - 1].truncate(sep);
        let cur = heads[d - 1];
        if let Some(target) = find_attachment(&heads, &rels, cur, d, &wanted) {
            heads[d - 1] = target;
        }
    }

    let arcs = (1..=n)
        .filter(|&d| head_arcs[d - 1].is_some())
        .map(|d| Arc::new(heads[d - 1], d, rels[d - 1].clone()))
        .collect();
    DepStructure::new(tree.sentence.clone(), arcs, tree.kind)
}

fn children_of(heads: &[usize]) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new(); heads.len() + 1];
    for (i, &h) in heads.iter().enumerate() {
        if h <= heads.len() {
            children[h].push(i + 1);
        }
    }
    children
}

fn bfs_order(heads: &[usize]) -> Vec<usize> {
    let children = children_of(heads);
    let mut order = Vec::new();
    let mut seen = vec![false; heads.len() + 1];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        if v != 0 {
            order.push(v);
        }
        for &c in &children[v] {
            if !seen[c] {
                seen[c] = true;
                queue.push_back(c);
            }
        }
    }
    // tokens unreachable from the root, if any, in position order
    order.extend((1..=heads.len()).filter(|&v| !seen[v]));
    order
}

fn find_attachment(heads: &[usize], rels: &[String], from: usize, lifted: usize, wanted: &str) -> Option<usize> {
    let children = children_of(heads);
    let mut level: Vec<usize> = children[from].iter().copied().filter(|&c| c != lifted).collect();
    let mut seen = vec![false; heads.len() + 1];
    seen[from] = true;
    while !level.is_empty() {
        let hit = level
            .iter()
            .copied()
            .filter(|&c| {
                let rel = &rels[c - 1];
                rel == wanted || rel.split(LIFT_SEPARATOR).next() == Some(wanted)
            })
            .min_by_key(|&c| (c.abs_diff(from), c));
        if hit.is_some() {
            return hit;
        }
        let mut next = Vec::new();
        for v in level {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            next.extend(children[v].iter().copied().filter(|&c| c != lifted && !seen[c]));
        }
        level = next;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dep::{is_projective, Sentence};

    fn tree(heads: &[usize], rels: &[&str]) -> DepStructure {
        DepStructure::from_heads(Sentence::anonymous(heads.len()), heads, rels)
    }

    #[test]
    fn projective_tree_is_unchanged() {
        let t = tree(&[2, 0, 2], &["a", "root", "b"]);
        let p = pseudo_projectivize(&t).unwrap();
        assert_eq!(p.tree, t);
        assert_eq!(p.lifts, 0);
        assert_eq!(deprojectivize(&p.tree), t);
    }

    #[test]
    fn crossing_arc_is_lifted_and_restored() {
        // 0->2, 2->4, 4->1, 2->3 where 4->1 crosses 0->2
        let t = tree(&[4, 0, 2, 2], &["x", "root", "y", "obj"]);
        assert!(!is_projective(&t).unwrap());
        let p = pseudo_projectivize(&t).unwrap();
        assert!(is_projective(&p.tree).unwrap());
        assert_eq!(p.lifted_tokens, 1);
        assert_eq!(p.tree.rel_of(1), Some("x|obj"));
        assert_eq!(deprojectivize(&p.tree), t);
    }

    #[test]
    fn rejects_graphs() {
        let g = DepStructure::graph(Sentence::anonymous(1), vec![Arc::new(0, 1, "r")]);
        assert!(pseudo_projectivize(&g).is_err());
    }
}

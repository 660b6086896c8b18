//! Tetratagging of binary trees whose leaves are token positions `1..=n`.
//!
//! Each token gets a leaf tag (left or right child) and, except the last, a
//! fence tag for the internal node found between it and the next token in an
//! in-order walk: whether that node is a left child (or the root) or a right
//! child, plus its label.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinTree {
    Leaf(usize),
    Node(String, Box<BinTree>, Box<BinTree>),
}

impl BinTree {
    pub fn node(label: impl Into<String>, left: BinTree, right: BinTree) -> Self {
        BinTree::Node(label.into(), Box::new(left), Box::new(right))
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                BinTree::Leaf(i) => out.push(*i),
                BinTree::Node(_, l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LeafTag {
    /// `↗`: left child.
    Left,
    /// `↖`: right child, or a lone leaf.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FenceTag {
    /// `⇗`: the fence node is a left child or the root.
    Left,
    /// `⇖`: the fence node is a right child.
    Right,
}

impl LeafTag {
    pub fn symbol(self) -> &'static str {
        match self {
            LeafTag::Left => "↗",
            LeafTag::Right => "↖",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "↗" => Some(LeafTag::Left),
            "↖" => Some(LeafTag::Right),
            _ => None,
        }
    }
}

impl FenceTag {
    pub fn symbol(self) -> &'static str {
        match self {
            FenceTag::Left => "⇗",
            FenceTag::Right => "⇖",
        }
    }

    /// Splits a leading fence symbol off `s`.
    pub fn split(s: &str) -> Option<(Self, &str)> {
        if let Some(rest) = s.strip_prefix("⇗") {
            Some((FenceTag::Left, rest))
        } else {
            s.strip_prefix("⇖").map(|rest| (FenceTag::Right, rest))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TetraTag {
    pub leaf: LeafTag,
    pub fence: Option<(FenceTag, String)>,
}

impl fmt::Display for TetraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.leaf.symbol())?;
        if let Some((dir, label)) = &self.fence {
            write!(f, " {}{}", dir.symbol(), label)?;
        }
        Ok(())
    }
}

pub fn encode_tetra(tree: &BinTree) -> Vec<TetraTag> {
    fn visit(t: &BinTree, is_left: bool, is_root: bool, out: &mut Vec<TetraTag>) {
        match t {
            BinTree::Leaf(_) => out.push(TetraTag {
                leaf: if is_left && !is_root {
                    LeafTag::Left
                } else {
                    LeafTag::Right
                },
                fence: None,
            }),
            BinTree::Node(label, l, r) => {
                visit(l, true, false, out);
                let dir = if is_left || is_root {
                    FenceTag::Left
                } else {
                    FenceTag::Right
                };
                if let Some(last) = out.last_mut() {
                    last.fence = Some((dir, label.clone()));
                }
                visit(r, false, false, out);
            }
        }
    }
    let mut out = Vec::new();
    visit(tree, false, true, &mut out);
    out
}

/// A subtree under construction: either complete, or a right spine of nodes
/// `(label, left)` whose innermost right child is still missing.
#[derive(Debug)]
enum Partial {
    Complete(BinTree),
    Holed(Vec<(String, BinTree)>),
}

fn fill(spine: Vec<(String, BinTree)>, mut tree: BinTree) -> BinTree {
    for (label, left) in spine.into_iter().rev() {
        tree = BinTree::node(label, left, tree);
    }
    tree
}

/// Closes a spine by replacing its innermost node with that node's left child.
fn close(mut spine: Vec<(String, BinTree)>) -> BinTree {
    let (_, left) = spine.pop().expect("holed spines are never empty");
    fill(spine, left)
}

/// Decodes tags for tokens `1..=tags.len()`. Invalid moves are repaired,
/// using `implicit` as the label of any node the tags do not describe, and
/// counted. The result always has exactly the leaves `1..=n` in order.
pub fn decode_tetra(tags: &[TetraTag], implicit: &str) -> (BinTree, usize) {
    let n = tags.len();
    let mut stack: Vec<Partial> = Vec::new();
    let mut repairs = 0;

    for (i, tag) in tags.iter().enumerate() {
        let leaf = BinTree::Leaf(i + 1);
        match tag.leaf {
            LeafTag::Left => {
                if i + 1 == n && n > 1 {
                    repairs += 1;
                }
                stack.push(Partial::Complete(leaf));
            }
            LeafTag::Right => match stack.pop() {
                Some(Partial::Holed(spine)) => stack.push(Partial::Complete(fill(spine, leaf))),
                Some(Partial::Complete(t)) => {
                    repairs += 1;
                    stack.push(Partial::Complete(BinTree::node(implicit, t, leaf)));
                }
                None => {
                    if n > 1 {
                        repairs += 1;
                    }
                    stack.push(Partial::Complete(leaf));
                }
            },
        }

        let fence = match (&tag.fence, i + 1 < n) {
            (Some(f), true) => f,
            (None, false) => continue,
            (Some(_), false) | (None, true) => {
                repairs += 1;
                continue;
            }
        };
        let (dir, label) = fence;
        let top = match stack.pop() {
            Some(Partial::Complete(t)) => t,
            other => {
                stack.extend(other);
                repairs += 1;
                continue;
            }
        };
        match (dir, stack.last_mut()) {
            (FenceTag::Right, Some(Partial::Holed(spine))) => spine.push((label.clone(), top)),
            (FenceTag::Left, _) => stack.push(Partial::Holed(vec![(label.clone(), top)])),
            (FenceTag::Right, _) => {
                repairs += 1;
                stack.push(Partial::Holed(vec![(label.clone(), top)]));
            }
        }
    }

    if stack.len() != 1 || matches!(stack.first(), Some(Partial::Holed(_))) {
        repairs += 1;
    }
    let mut acc: Option<Partial> = None;
    for part in stack {
        acc = Some(match (acc, part) {
            (None, p) => p,
            (Some(Partial::Holed(spine)), Partial::Complete(t)) => Partial::Complete(fill(spine, t)),
            (Some(Partial::Holed(mut spine)), Partial::Holed(more)) => {
                spine.extend(more);
                Partial::Holed(spine)
            }
            (Some(Partial::Complete(a)), Partial::Complete(b)) => Partial::Complete(BinTree::node(implicit, a, b)),
            (Some(Partial::Complete(a)), Partial::Holed(more)) => {
                let mut spine = vec![(implicit.to_string(), a)];
                spine.extend(more);
                Partial::Holed(spine)
            }
        });
    }
    let tree = match acc {
        Some(Partial::Complete(t)) => t,
        Some(Partial::Holed(spine)) => close(spine),
        // only reachable for an empty tag sequence
        None => BinTree::Leaf(0),
    };
    (tree, repairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(i: usize) -> BinTree {
        BinTree::Leaf(i)
    }

    fn tag(leaf: LeafTag, fence: Option<(FenceTag, &str)>) -> TetraTag {
        TetraTag {
            leaf,
            fence: fence.map(|(d, l)| (d, l.to_string())),
        }
    }

    #[test]
    fn two_leaves() {
        let t = BinTree::node("S", leaf(1), leaf(2));
        let tags = encode_tetra(&t);
        assert_eq!(
            tags,
            vec![
                tag(LeafTag::Left, Some((FenceTag::Left, "S"))),
                tag(LeafTag::Right, None)
            ]
        );
        assert_eq!(decode_tetra(&tags, "X"), (t, 0));
    }

    #[test]
    fn exactly_one_leaf_tag_pair_decodes_two_leaves() {
        let t = BinTree::node("S", leaf(1), leaf(2));
        let mut hits = 0;
        for a in [LeafTag::Left, LeafTag::Right] {
            for b in [LeafTag::Left, LeafTag::Right] {
                let tags = vec![tag(a, Some((FenceTag::Left, "S"))), tag(b, None)];
                let (d, repairs) = decode_tetra(&tags, "S");
                if d == t && repairs == 0 {
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 1);
    }

    #[test]
    fn single_leaf() {
        let tags = encode_tetra(&leaf(1));
        assert_eq!(tags, vec![tag(LeafTag::Right, None)]);
        assert_eq!(decode_tetra(&tags, "X"), (leaf(1), 0));
    }

    #[test]
    fn right_and_left_nesting() {
        // (A 1 (B (C 2 3) 4))
        let t = BinTree::node(
            "A",
            leaf(1),
            BinTree::node("B", BinTree::node("C", leaf(2), leaf(3)), leaf(4)),
        );
        let tags = encode_tetra(&t);
        assert_eq!(tags[1].fence, Some((FenceTag::Left, "C".into())));
        assert_eq!(tags[2].fence, Some((FenceTag::Right, "B".into())));
        assert_eq!(decode_tetra(&tags, "X"), (t, 0));
    }

    #[test]
    fn garbage_still_covers_leaves() {
        let tags = vec![
            tag(LeafTag::Right, Some((FenceTag::Right, "A"))),
            tag(LeafTag::Right, None),
            tag(LeafTag::Left, Some((FenceTag::Left, "B"))),
        ];
        let (t, repairs) = decode_tetra(&tags, "X");
        assert_eq!(t.leaves(), vec![1, 2, 3]);
        assert!(repairs > 0);
    }
}

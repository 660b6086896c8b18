//! Constituency linearizations: unary collapsing, right binarization, the
//! absolute and relative depth encodings, and tetratagging.

use crate::codec::tetra::{self, BinTree, FenceTag, LeafTag, TetraTag};
use crate::codec::COMPONENT_SEP;
use crate::constituency::{Child, ConstTree, Node};
use crate::error::{Error, Result};

pub const UNARY_SEP: char = ':';
pub const BINARY_MARK: char = '|';
/// Label of the last token under the depth encodings, which carry `n - 1`
/// real labels.
pub const END_LABEL: &str = "-";
/// Label given to nodes a repaired label sequence does not describe.
pub const FALLBACK_LABEL: &str = "S";

pub fn collapse_unary(tree: &ConstTree) -> ConstTree {
    fn go(node: &Node) -> Node {
        let children: Vec<Child> = node
            .children
            .iter()
            .map(|c| match c {
                Child::Node(n) => Child::Node(go(n)),
                Child::Leaf(i) => Child::Leaf(*i),
            })
            .collect();
        match children.as_slice() {
            [Child::Node(only)] => Node::new(
                format!("{}{}{}", node.label, UNARY_SEP, only.label),
                only.children.clone(),
            ),
            _ => Node::new(node.label.clone(), children),
        }
    }
    ConstTree {
        root: go(&tree.root),
        collapsed: true,
    }
}

/// Splits a collapsed label into its chain. A chain element equal to `:`
/// shows up as two consecutive empty pieces.
pub fn split_collapsed(label: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut empties = 0;
    for piece in label.split(UNARY_SEP) {
        if piece.is_empty() {
            empties += 1;
            if empties == 2 {
                out.push(UNARY_SEP.to_string());
                empties = 0;
            }
        } else {
            empties = 0;
            out.push(piece.to_string());
        }
    }
    if out.is_empty() {
        out.push(label.to_string());
    }
    out
}

pub fn expand_unary(tree: &ConstTree) -> ConstTree {
    fn go(node: &Node) -> Node {
        let children: Vec<Child> = node
            .children
            .iter()
            .map(|c| match c {
                Child::Node(n) => Child::Node(go(n)),
                Child::Leaf(i) => Child::Leaf(*i),
            })
            .collect();
        let chain = split_collapsed(&node.label);
        let mut iter = chain.into_iter().rev();
        let mut inner = Node::new(iter.next().unwrap_or_default(), children);
        for label in iter {
            inner = Node::new(label, vec![Child::Node(inner)]);
        }
        inner
    }
    ConstTree {
        root: go(&tree.root),
        collapsed: false,
    }
}

/// Right binarization: `X(a, b, c)` becomes `X(a, X|(b, c))`.
pub fn binarize(tree: &ConstTree) -> ConstTree {
    fn go(node: &Node) -> Node {
        let children: Vec<Child> = node
            .children
            .iter()
            .map(|c| match c {
                Child::Node(n) => Child::Node(go(n)),
                Child::Leaf(i) => Child::Leaf(*i),
            })
            .collect();
        if children.len() <= 2 {
            return Node::new(node.label.clone(), children);
        }
        let mark = if node.label.ends_with(BINARY_MARK) {
            node.label.clone()
        } else {
            format!("{}{}", node.label, BINARY_MARK)
        };
        let mut rest = children;
        let last = rest.pop().expect("more than two children");
        let second = rest.pop().expect("more than two children");
        let mut acc = Child::Node(Node::new(mark.clone(), vec![second, last]));
        while rest.len() > 1 {
            let c = rest.pop().expect("non-empty");
            acc = Child::Node(Node::new(mark.clone(), vec![c, acc]));
        }
        let head = rest.pop().expect("non-empty");
        Node::new(node.label.clone(), vec![head, acc])
    }
    ConstTree {
        root: go(&tree.root),
        collapsed: tree.collapsed,
    }
}

pub fn debinarize(tree: &ConstTree) -> ConstTree {
    fn go(node: &Node) -> Node {
        let mut children = Vec::new();
        for c in &node.children {
            match c {
                Child::Node(n) => {
                    let n = go(n);
                    if n.label.ends_with(BINARY_MARK) && !n.is_preterminal() {
                        children.extend(n.children);
                    } else {
                        children.push(Child::Node(n));
                    }
                }
                Child::Leaf(i) => children.push(Child::Leaf(*i)),
            }
        }
        Node::new(node.label.clone(), children)
    }
    ConstTree {
        root: go(&tree.root),
        collapsed: tree.collapsed,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepthLabel {
    pub depth: i64,
    pub label: String,
}

/// Number of common ancestors and lowest common ancestor label for each pair
/// of adjacent tokens of a collapsed tree. Pre-terminals are not counted.
pub fn absolute_depths(tree: &ConstTree) -> Vec<DepthLabel> {
    // ancestor path (node ids) of every leaf
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut labels: Vec<&str> = Vec::new();
    fn visit<'a>(node: &'a Node, path: &mut Vec<usize>, labels: &mut Vec<&'a str>, paths: &mut Vec<Vec<usize>>) {
        if node.is_preterminal() {
            paths.push(path.clone());
            return;
        }
        labels.push(&node.label);
        path.push(labels.len() - 1);
        for c in &node.children {
            match c {
                Child::Leaf(_) => paths.push(path.clone()),
                Child::Node(n) => visit(n, path, labels, paths),
            }
        }
        path.pop();
    }
    visit(&tree.root, &mut Vec::new(), &mut labels, &mut paths);
    paths
        .windows(2)
        .map(|w| {
            let p = w[0].iter().zip(&w[1]).take_while(|(a, b)| a == b).count();
            let label = p
                .checked_sub(1)
                .map_or_else(String::new, |i| labels[w[0][i]].to_string());
            DepthLabel { depth: p as i64, label }
        })
        .collect()
}

pub fn to_relative(abs: &[DepthLabel]) -> Vec<DepthLabel> {
    let mut prev = 0;
    abs.iter()
        .map(|l| {
            let d = DepthLabel {
                depth: l.depth - prev,
                label: l.label.clone(),
            };
            prev = l.depth;
            d
        })
        .collect()
}

pub fn to_absolute(rel: &[DepthLabel]) -> Vec<DepthLabel> {
    let mut acc = 0;
    rel.iter()
        .map(|l| {
            acc += l.depth;
            DepthLabel {
                depth: acc,
                label: l.label.clone(),
            }
        })
        .collect()
}

fn leaf_child(i: usize, tags: &[Option<String>]) -> Child {
    match tags.get(i - 1).cloned().flatten() {
        Some(tag) => Child::Node(Node::preterminal(tag, i)),
        None => Child::Leaf(i),
    }
}

/// Rebuilds a collapsed tree from absolute depths. Depths below 1 are
/// clamped; unlabeled or single-child nodes are spliced out and label
/// conflicts keep the first label. Every fix is counted.
pub fn decode_depths(abs: &[DepthLabel], tags: &[Option<String>]) -> (ConstTree, usize) {
    let n = abs.len() + 1;
    let mut repairs = 0;
    let depths: Vec<usize> = abs
        .iter()
        .map(|l| {
            if l.depth < 1 {
                repairs += 1;
                1
            } else {
                l.depth as usize
            }
        })
        .collect();

    struct Slot {
        label: Option<String>,
        children: Vec<Item>,
    }
    enum Item {
        Slot(usize),
        Leaf(usize),
    }
    let mut arena: Vec<Slot> = vec![Slot {
        label: None,
        children: Vec::new(),
    }];
    let mut path: Vec<usize> = vec![0];

    for i in 1..=n {
        let before = if i > 1 { depths[i - 2] } else { 1 };
        let after = if i < n { depths[i - 1] } else { 1 };
        let target = before.max(after);
        path.truncate(before.min(path.len()).max(1));
        while path.len() < target {
            let id = arena.len();
            arena.push(Slot {
                label: None,
                children: Vec::new(),
            });
            let parent = *path.last().expect("root stays on the path");
            arena[parent].children.push(Item::Slot(id));
            path.push(id);
        }
        let parent = path[target - 1];
        arena[parent].children.push(Item::Leaf(i));
        if i < n {
            let node = path[after - 1];
            let label = &abs[i - 1].label;
            match &arena[node].label {
                None => arena[node].label = Some(label.clone()),
                Some(l) if l != label => repairs += 1,
                Some(_) => {}
            }
            path.truncate(after);
        }
    }

    fn build(id: usize, arena: &mut [Slot], tags: &[Option<String>], repairs: &mut usize) -> Vec<Child> {
        let items = std::mem::take(&mut arena[id].children);
        let mut children = Vec::new();
        for item in items {
            match item {
                Item::Leaf(i) => children.push(leaf_child(i, tags)),
                Item::Slot(s) => {
                    let inner = build(s, arena, tags, repairs);
                    match arena[s].label.take() {
                        Some(label) if inner.len() > 1 => children.push(Child::Node(Node::new(label, inner))),
                        _ => {
                            *repairs += 1;
                            children.extend(inner);
                        }
                    }
                }
            }
        }
        children
    }
    let children = build(0, &mut arena, tags, &mut repairs);
    let root_label = arena[0].label.take();
    let root = if n == 1 {
        match children.into_iter().next() {
            Some(Child::Node(pre)) => pre,
            _ => {
                repairs += 1;
                Node::new(FALLBACK_LABEL, vec![Child::Leaf(1)])
            }
        }
    } else {
        match root_label {
            Some(label) => Node::new(label, children),
            None => {
                repairs += 1;
                Node::new(FALLBACK_LABEL, children)
            }
        }
    };
    (ConstTree { root, collapsed: true }, repairs)
}

/// Binary skeleton of a collapsed, binarized tree: pre-terminals become
/// leaves.
pub fn to_bintree(tree: &ConstTree) -> Result<BinTree> {
    fn go(node: &Node) -> Result<BinTree> {
        let child = |c: &Child| match c {
            Child::Leaf(i) => Ok(BinTree::Leaf(*i)),
            Child::Node(n) => go(n),
        };
        match node.children.as_slice() {
            [Child::Leaf(i)] => Ok(BinTree::Leaf(*i)),
            [l, r] => Ok(BinTree::node(node.label.clone(), child(l)?, child(r)?)),
            _ => Err(Error::InvalidArgument(format!("node '{}' is not binary", node.label))),
        }
    }
    go(&tree.root)
}

pub fn from_bintree(tree: &BinTree, tags: &[Option<String>]) -> ConstTree {
    fn go(t: &BinTree, tags: &[Option<String>]) -> Child {
        match t {
            BinTree::Leaf(i) => leaf_child(*i, tags),
            BinTree::Node(label, l, r) => Child::Node(Node::new(label.clone(), vec![go(l, tags), go(r, tags)])),
        }
    }
    let root = match go(tree, tags) {
        Child::Node(n) => n,
        Child::Leaf(i) => Node::new(FALLBACK_LABEL, vec![Child::Leaf(i)]),
    };
    ConstTree { root, collapsed: true }
}

pub fn render_depth(l: &DepthLabel) -> String {
    format!("{}{}{}", l.depth, COMPONENT_SEP, l.label)
}

pub fn parse_depth(s: &str) -> Result<DepthLabel> {
    let bad = |message: &str| Error::InvalidLabel {
        label: s.to_string(),
        message: message.to_string(),
    };
    let (d, label) = s
        .split_once(COMPONENT_SEP)
        .ok_or_else(|| bad("expected depth@constituent"))?;
    let depth = d.parse().map_err(|_| bad("depth is not an integer"))?;
    Ok(DepthLabel {
        depth,
        label: label.to_string(),
    })
}

pub fn render_tetra(t: &TetraTag) -> String {
    match &t.fence {
        Some((dir, label)) => format!(
            "{}{sep}{}{sep}{}",
            t.leaf.symbol(),
            dir.symbol(),
            label,
            sep = COMPONENT_SEP
        ),
        None => t.leaf.symbol().to_string(),
    }
}

pub fn parse_tetra(s: &str) -> Result<TetraTag> {
    let bad = || Error::InvalidLabel {
        label: s.to_string(),
        message: "expected tag[@fence@constituent]".into(),
    };
    let mut parts = s.splitn(3, COMPONENT_SEP);
    let leaf = LeafTag::parse(parts.next().unwrap_or_default()).ok_or_else(bad)?;
    let fence = match (parts.next(), parts.next()) {
        (None, None) => None,
        (Some(f), Some(label)) => {
            let (dir, rest) = FenceTag::split(f).ok_or_else(bad)?;
            if !rest.is_empty() {
                return Err(bad());
            }
            Some((dir, label.to_string()))
        }
        _ => return Err(bad()),
    };
    Ok(TetraTag { leaf, fence })
}

/// Labels and pre-terminal tags of a tree under one of the depth encodings.
pub fn encode_depths(tree: &ConstTree, relative: bool) -> (Vec<String>, Vec<Option<String>>) {
    let collapsed = collapse_unary(tree);
    let abs = absolute_depths(&collapsed);
    let seq = if relative { to_relative(&abs) } else { abs };
    let mut labels: Vec<String> = seq.iter().map(render_depth).collect();
    labels.push(END_LABEL.to_string());
    (labels, collapsed.preterminals())
}

pub fn decode_depth_labels(labels: &[String], tags: &[Option<String>], relative: bool) -> Result<(ConstTree, usize)> {
    let Some((last, body)) = labels.split_last() else {
        return Err(Error::InvalidArgument("empty label sequence".into()));
    };
    let mut repairs = usize::from(last != END_LABEL);
    let parsed = body.iter().map(|l| parse_depth(l)).collect::<Result<Vec<_>>>()?;
    let abs = if relative {
        // running depth never drops below 1
        let mut acc = 0;
        parsed
            .into_iter()
            .map(|l| {
                acc += l.depth;
                if acc < 1 {
                    acc = 1;
                    repairs += 1;
                }
                DepthLabel {
                    depth: acc,
                    label: l.label,
                }
            })
            .collect()
    } else {
        parsed
    };
    let (tree, r) = decode_depths(&abs, tags);
    Ok((expand_unary(&tree), repairs + r))
}

pub fn encode_tetra_labels(tree: &ConstTree) -> Result<(Vec<String>, Vec<Option<String>>)> {
    let collapsed = collapse_unary(tree);
    let tags = collapsed.preterminals();
    let bin = to_bintree(&binarize(&collapsed))?;
    Ok((tetra::encode_tetra(&bin).iter().map(render_tetra).collect(), tags))
}

pub fn decode_tetra_labels(labels: &[String], tags: &[Option<String>]) -> Result<(ConstTree, usize)> {
    let parsed = labels.iter().map(|l| parse_tetra(l)).collect::<Result<Vec<_>>>()?;
    let (bin, repairs) = tetra::decode_tetra(&parsed, FALLBACK_LABEL);
    let tree = from_bintree(&bin, tags);
    Ok((expand_unary(&debinarize(&tree)), repairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(label: &str, i: usize) -> Child {
        Child::Node(Node::preterminal(label, i))
    }

    fn nt(label: &str, children: Vec<Child>) -> Child {
        Child::Node(Node::new(label, children))
    }

    fn root(c: Child) -> ConstTree {
        match c {
            Child::Node(n) => ConstTree::new(n),
            Child::Leaf(_) => unreachable!(),
        }
    }

    #[test]
    fn collapse_merges_chains() {
        let t = root(nt("S", vec![nt("NP", vec![pt("PRP", 1)])]));
        let c = collapse_unary(&t);
        assert_eq!(c.root.label, "S:NP:PRP");
        assert_eq!(expand_unary(&c), t);
    }

    #[test]
    fn colon_tag_survives_collapse() {
        let t = root(nt(
            "S",
            vec![
                nt("NP", vec![pt(":", 1)]),
                pt(":", 2),
                nt("X", vec![nt(":", vec![pt("Y", 3)])]),
            ],
        ));
        let c = collapse_unary(&t);
        assert_eq!(expand_unary(&c), t);
        assert_eq!(split_collapsed("::"), vec![":"]);
    }

    #[test]
    fn ternary_binarization() {
        let t = root(nt("S", vec![pt("A", 1), pt("B", 2), pt("C", 3)]));
        let b = binarize(&t);
        let expected = root(nt("S", vec![pt("A", 1), nt("S|", vec![pt("B", 2), pt("C", 3)])]));
        assert_eq!(b, expected);
        assert_eq!(debinarize(&b), t);
        let four = root(nt("S", vec![pt("A", 1), pt("B", 2), pt("C", 3), pt("D", 4)]));
        let b4 = binarize(&four);
        assert_eq!(
            b4,
            root(nt(
                "S",
                vec![
                    pt("A", 1),
                    nt("S|", vec![pt("B", 2), nt("S|", vec![pt("C", 3), pt("D", 4)])])
                ]
            ))
        );
        assert_eq!(debinarize(&b4), four);
    }

    #[test]
    fn flat_tree_depths() {
        let t = root(nt("S", vec![pt("A", 1), pt("B", 2), pt("C", 3)]));
        let (abs, _) = encode_depths(&t, false);
        assert_eq!(abs, vec!["1@S", "1@S", "-"]);
        let (rel, tags) = encode_depths(&t, true);
        assert_eq!(rel, vec!["1@S", "0@S", "-"]);
        assert_eq!(decode_depth_labels(&rel, &tags, true).unwrap(), (t, 0));
    }

    #[test]
    fn single_token() {
        let t = root(nt("S", vec![nt("NP", vec![pt("NN", 1)])]));
        let (labels, tags) = encode_depths(&t, true);
        assert_eq!(labels, vec!["-"]);
        assert_eq!(decode_depth_labels(&labels, &tags, true).unwrap(), (t.clone(), 0));
        let (labels, tags) = encode_tetra_labels(&t).unwrap();
        assert_eq!(labels, vec!["↖"]);
        assert_eq!(decode_tetra_labels(&labels, &tags).unwrap(), (t, 0));
    }

    #[test]
    fn nested_tree_round_trips() {
        let t = root(nt(
            "S",
            vec![
                nt("NP", vec![pt("DT", 1), pt("NN", 2)]),
                nt("VP", vec![pt("VBD", 3), nt("NP", vec![pt("PRP", 4)]), pt("RB", 5)]),
                pt(".", 6),
            ],
        ));
        for relative in [false, true] {
            let (labels, tags) = encode_depths(&t, relative);
            assert_eq!(decode_depth_labels(&labels, &tags, relative).unwrap(), (t.clone(), 0));
        }
        let (labels, tags) = encode_tetra_labels(&t).unwrap();
        assert_eq!(decode_tetra_labels(&labels, &tags).unwrap(), (t, 0));
    }

    #[test]
    fn label_text() {
        assert_eq!(parse_depth("-2@NP").unwrap().depth, -2);
        assert!(parse_depth("x@NP").is_err());
        let t = parse_tetra("↗@⇖@VP").unwrap();
        assert_eq!(render_tetra(&t), "↗@⇖@VP");
        assert!(parse_tetra("↗@VP").is_err());
        assert!(parse_tetra("?").is_err());
    }

    #[test]
    fn noisy_depths_keep_leaves() {
        let labels: Vec<String> = ["3@A", "-5@B", "2@C", "x"].iter().map(|s| s.to_string()).collect();
        let tags = vec![Some("T".to_string()); 4];
        let (t, repairs) = decode_depth_labels(&labels, &tags, true).unwrap();
        assert!(t.covers_tokens(4));
        assert!(repairs > 0);
    }
}

//! Ordered constituency trees over 1-based token positions.

use crate::dep::Sentence;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Child {
    Node(Node),
    Leaf(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub label: String,
    pub children: Vec<Child>,
}

impl Node {
    pub fn new(label: impl Into<String>, children: Vec<Child>) -> Self {
        Node {
            label: label.into(),
            children,
        }
    }

    pub fn preterminal(label: impl Into<String>, leaf: usize) -> Self {
        Node::new(label, vec![Child::Leaf(leaf)])
    }

    /// A node whose only child is a leaf.
    pub fn is_preterminal(&self) -> bool {
        matches!(self.children.as_slice(), [Child::Leaf(_)])
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        for child in &self.children {
            match child {
                Child::Leaf(i) => out.push(*i),
                Child::Node(n) => n.collect_leaves(out),
            }
        }
    }

    /// Visits every node in pre-order.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Node)) {
        f(self);
        for child in &self.children {
            if let Child::Node(n) = child {
                n.walk(f);
            }
        }
    }

    fn render(&self, sentence: &Sentence, out: &mut String) {
        out.push('(');
        out.push_str(&self.label);
        for child in &self.children {
            out.push(' ');
            match child {
                Child::Node(n) => n.render(sentence, out),
                Child::Leaf(i) => match sentence.token(*i) {
                    Some(t) => out.push_str(&t.form),
                    None => out.push_str(&format!("w{i}")),
                },
            }
        }
        out.push(')');
    }
}

impl From<Node> for Child {
    fn from(n: Node) -> Self {
        Child::Node(n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstTree {
    pub root: Node,
    /// Unary chains have been merged into single nodes.
    pub collapsed: bool,
}

impl ConstTree {
    pub fn new(root: Node) -> Self {
        ConstTree { root, collapsed: false }
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.root.leaves()
    }

    pub fn len(&self) -> usize {
        self.leaves().len()
    }

    pub fn is_empty(&self) -> bool {
        self.root.children.is_empty()
    }

    /// Leaves read left to right are exactly `1..=n`, each once.
    pub fn covers_tokens(&self, n: usize) -> bool {
        self.leaves().into_iter().eq(1..=n)
    }

    /// Pre-terminal label of each token, `None` for bare leaves.
    pub fn preterminals(&self) -> Vec<Option<String>> {
        let n = self.len();
        let mut tags = vec![None; n];
        fn visit(node: &Node, tags: &mut [Option<String>]) {
            for child in &node.children {
                match child {
                    Child::Leaf(_) => {}
                    Child::Node(c) => {
                        if let [Child::Leaf(i)] = c.children.as_slice() {
                            if let Some(slot) = i.checked_sub(1).and_then(|i| tags.get_mut(i)) {
                                *slot = Some(c.label.clone());
                            }
                        } else {
                            visit(c, tags);
                        }
                    }
                }
            }
        }
        if let [Child::Leaf(i)] = self.root.children.as_slice() {
            if let Some(slot) = i.checked_sub(1).and_then(|i| tags.get_mut(i)) {
                *slot = Some(self.root.label.clone());
            }
        } else {
            visit(&self.root, &mut tags);
        }
        tags
    }

    /// Sentence whose tokens carry the pre-terminal labels as XPOS.
    pub fn tagged_sentence(&self, forms: &Sentence) -> Sentence {
        let mut s = forms.clone();
        for (tok, tag) in s.tokens.iter_mut().zip(self.preterminals()) {
            tok.xpos = tag;
        }
        s
    }

    /// Single-line bracketed rendering with word forms from `sentence`.
    pub fn to_brackets(&self, sentence: &Sentence) -> String {
        let mut out = String::new();
        self.root.render(sentence, &mut out);
        out
    }

    /// Nonterminal spans `(start, end, label)` over 1-based inclusive leaf
    /// positions, pre-terminals excluded, in pre-order.
    pub fn spans(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        fn visit(node: &Node, out: &mut Vec<(usize, usize, String)>) -> (usize, usize) {
            let mut lo = usize::MAX;
            let mut hi = 0;
            let slot = out.len();
            if !node.is_preterminal() {
                out.push((0, 0, node.label.clone()));
            }
            for child in &node.children {
                let (l, h) = match child {
                    Child::Leaf(i) => (*i, *i),
                    Child::Node(c) => visit(c, out),
                };
                lo = lo.min(l);
                hi = hi.max(h);
            }
            if !node.is_preterminal() {
                out[slot].0 = lo;
                out[slot].1 = hi;
            }
            (lo, hi)
        }
        visit(&self.root, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ConstTree {
        ConstTree::new(Node::new(
            "S",
            vec![
                Node::new("NP", vec![Node::preterminal("PRP", 1).into()]).into(),
                Node::new("VP", vec![Node::preterminal("VBD", 2).into()]).into(),
            ],
        ))
    }

    #[test]
    fn leaves_and_tags() {
        let t = sample();
        assert_eq!(t.leaves(), vec![1, 2]);
        assert!(t.covers_tokens(2));
        assert_eq!(t.preterminals(), vec![Some("PRP".to_string()), Some("VBD".to_string())]);
    }

    #[test]
    fn spans_skip_preterminals() {
        let spans = sample().spans();
        assert_eq!(
            spans,
            vec![
                (1, 2, "S".to_string()),
                (1, 1, "NP".to_string()),
                (2, 2, "VP".to_string())
            ]
        );
    }

    #[test]
    fn renders_brackets() {
        let s = Sentence::from_forms("", &["I", "went"]);
        assert_eq!(sample().to_brackets(&s), "(S (NP (PRP I)) (VP (VBD went)))");
    }
}

//! Sentences, arcs and dependency structures.
//!
//! Token positions are 1-based; position 0 is the artificial root.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Token {
    pub form: String,
    pub lemma: Option<String>,
    pub upos: Option<String>,
    pub xpos: Option<String>,
    pub feats: Option<String>,
    pub misc: Option<String>,
}

impl Token {
    pub fn new(form: impl Into<String>) -> Self {
        Token {
            form: form.into(),
            ..Default::default()
        }
    }

    pub fn with_xpos(mut self, xpos: impl Into<String>) -> Self {
        self.xpos = Some(xpos.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Self {
        Sentence { id: id.into(), tokens }
    }

    pub fn from_forms<S: AsRef<str>>(id: impl Into<String>, forms: &[S]) -> Self {
        Sentence::new(id, forms.iter().map(|f| Token::new(f.as_ref())).collect())
    }

    /// Placeholder sentence of `n` tokens named `w1 .. wn`.
    pub fn anonymous(n: usize) -> Self {
        Sentence::new("", (1..=n).map(|i| Token::new(format!("w{i}"))).collect())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at 1-based position `i`.
    pub fn token(&self, i: usize) -> Option<&Token> {
        i.checked_sub(1).and_then(|i| self.tokens.get(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub head: usize,
    pub dep: usize,
    pub rel: String,
}

impl Arc {
    pub fn new(head: usize, dep: usize, rel: impl Into<String>) -> Self {
        Arc {
            head,
            dep,
            rel: rel.into(),
        }
    }

    pub fn left(&self) -> usize {
        self.head.min(self.dep)
    }

    pub fn right(&self) -> usize {
        self.head.max(self.dep)
    }

    /// Head precedes the dependent. Arcs from the root are rightward.
    pub fn is_rightward(&self) -> bool {
        self.head < self.dep
    }

    pub fn crosses(&self, other: &Arc) -> bool {
        crosses((self.head, self.dep), (other.head, other.dep))
    }
}

/// Canonical order: dependent, then head, then relation.
impl Ord for Arc {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dep, self.head, &self.rel).cmp(&(other.dep, other.head, &other.rel))
    }
}

impl PartialOrd for Arc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Two arcs cross when exactly one endpoint of one lies strictly inside the
/// span of the other. Arcs sharing an endpoint never cross.
pub fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let (l1, r1) = (a.0.min(a.1), a.0.max(a.1));
    let (l2, r2) = (b.0.min(b.1), b.0.max(b.1));
    if l1 == l2 || l1 == r2 || r1 == l2 || r1 == r2 {
        return false;
    }
    let inside = |x: usize| l1 < x && x < r1;
    inside(l2) != inside(r2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Tree,
    Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepStructure {
    pub sentence: Sentence,
    pub arcs: Vec<Arc>,
    pub kind: StructureKind,
}

impl DepStructure {
    /// Builds a structure; arcs are stored in canonical order.
    pub fn new(sentence: Sentence, mut arcs: Vec<Arc>, kind: StructureKind) -> Self {
        arcs.sort();
        DepStructure { sentence, arcs, kind }
    }

    pub fn tree(sentence: Sentence, arcs: Vec<Arc>) -> Self {
        DepStructure::new(sentence, arcs, StructureKind::Tree)
    }

    pub fn graph(sentence: Sentence, arcs: Vec<Arc>) -> Self {
        DepStructure::new(sentence, arcs, StructureKind::Graph)
    }

    /// Tree from a 1-based head array given as `heads[i - 1]` with relations.
    pub fn from_heads<S: AsRef<str>>(sentence: Sentence, heads: &[usize], rels: &[S]) -> Self {
        let arcs = heads
            .iter()
            .zip(rels)
            .enumerate()
            .map(|(i, (&h, r))| Arc::new(h, i + 1, r.as_ref()))
            .collect();
        DepStructure::tree(sentence, arcs)
    }

    pub fn len(&self) -> usize {
        self.sentence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentence.is_empty()
    }

    pub fn is_tree(&self) -> bool {
        self.kind == StructureKind::Tree
    }

    /// First incoming arc of each token, indexed by `dep - 1`.
    pub fn head_arcs(&self) -> Vec<Option<&Arc>> {
        let mut out = vec![None; self.len()];
        for arc in &self.arcs {
            if (1..=self.len()).contains(&arc.dep) && out[arc.dep - 1].is_none() {
                out[arc.dep - 1] = Some(arc);
            }
        }
        out
    }

    /// Head of each token for single-headed structures (`None` if headless).
    pub fn heads(&self) -> Vec<Option<usize>> {
        self.head_arcs().into_iter().map(|a| a.map(|a| a.head)).collect()
    }

    pub fn rel_of(&self, dep: usize) -> Option<&str> {
        self.arcs.iter().find(|a| a.dep == dep).map(|a| a.rel.as_str())
    }

    /// Dependents of `head`, in increasing position.
    pub fn dependents(&self, head: usize) -> Vec<usize> {
        let mut deps: Vec<usize> = self.arcs.iter().filter(|a| a.head == head).map(|a| a.dep).collect();
        deps.sort_unstable();
        deps
    }

    pub fn same_arcs(&self, other: &DepStructure) -> bool {
        let mut a = self.arcs.clone();
        let mut b = other.arcs.clone();
        a.sort();
        b.sort();
        a == b
    }

    pub fn same_unlabeled_arcs(&self, other: &DepStructure) -> bool {
        let key = |s: &DepStructure| {
            let mut v: Vec<(usize, usize)> = s.arcs.iter().map(|a| (a.head, a.dep)).collect();
            v.sort_unstable();
            v
        };
        key(self) == key(other)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Validity {
    pub single_headed: bool,
    pub acyclic: bool,
    pub connected: bool,
    pub rooted: bool,
}

impl Validity {
    pub fn well_formed(&self) -> bool {
        self.single_headed && self.acyclic && self.connected && self.rooted
    }
}

/// Computes the tree-validity flags of any structure by explicit traversal.
pub fn validate(structure: &DepStructure) -> Validity {
    let n = structure.len();
    let in_range = |a: &Arc| a.head <= n && (1..=n).contains(&a.dep) && a.head != a.dep;

    let mut indegree = vec![0usize; n + 1];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut stray = false;
    for arc in &structure.arcs {
        if !in_range(arc) {
            stray = true;
            continue;
        }
        indegree[arc.dep] += 1;
        children[arc.head].push(arc.dep);
    }

    let single_headed = !stray && (1..=n).all(|d| indegree[d] == 1);
    let rooted = structure.arcs.iter().filter(|a| a.head == 0).count() == 1;

    // Kahn's algorithm over nodes 0..=n.
    let mut remaining = vec![0usize; n + 1];
    for children in &children {
        for &c in children {
            remaining[c] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..=n).filter(|&v| remaining[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        removed += 1;
        for &c in &children[v] {
            remaining[c] -= 1;
            if remaining[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    let acyclic = removed == n + 1;

    let mut seen = vec![false; n + 1];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        for &c in &children[v] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);

    Validity {
        single_headed,
        acyclic,
        connected,
        rooted,
    }
}

/// Whether no two arcs of a tree cross, the root arc included.
pub fn is_projective(tree: &DepStructure) -> Result<bool> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    Ok(!has_crossing(&tree.arcs))
}

fn has_crossing(arcs: &[Arc]) -> bool {
    // Sweep by left endpoint; a crossing exists iff some arc starts strictly
    // inside an open span and ends strictly outside it.
    let mut spans: Vec<(usize, usize)> = arcs.iter().map(|a| (a.left(), a.right())).collect();
    spans.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut open: Vec<(usize, usize)> = Vec::new();
    for &(l, r) in &spans {
        while let Some(&(_, top_r)) = open.last() {
            if top_r <= l {
                open.pop();
            } else {
                break;
            }
        }
        if let Some(&(top_l, top_r)) = open.last() {
            if top_l < l && r > top_r {
                return true;
            }
        }
        open.push((l, r));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(heads: &[usize]) -> DepStructure {
        let rels = vec!["x"; heads.len()];
        DepStructure::from_heads(Sentence::anonymous(heads.len()), heads, &rels)
    }

    #[test]
    fn canonical_tree_is_well_formed() {
        let v = validate(&tree(&[2, 0, 2]));
        assert!(v.well_formed());
    }

    #[test]
    fn two_cycle_is_cyclic() {
        let s = DepStructure::graph(Sentence::anonymous(2), vec![Arc::new(1, 2, "a"), Arc::new(2, 1, "b")]);
        let v = validate(&s);
        assert!(!v.acyclic);
        assert!(!v.rooted);
        assert!(!v.connected);
    }

    #[test]
    fn orphan_tokens_are_unreached() {
        let s = DepStructure::graph(Sentence::anonymous(3), vec![Arc::new(0, 1, "root")]);
        let v = validate(&s);
        assert!(!v.connected);
        assert!(v.rooted);
        assert!(v.acyclic);
        assert!(!v.single_headed);
    }

    #[test]
    fn two_roots_are_not_rooted() {
        let v = validate(&tree(&[0, 0]));
        assert!(!v.rooted);
        assert!(v.single_headed && v.acyclic && v.connected);
    }

    #[test]
    fn shared_endpoints_do_not_cross() {
        assert!(!crosses((1, 3), (3, 5)));
        assert!(!crosses((1, 5), (5, 1)));
        assert!(crosses((1, 3), (2, 4)));
        assert!(crosses((4, 2), (3, 1)));
        assert!(!crosses((1, 4), (2, 3)));
    }

    #[test]
    fn projectivity() {
        assert!(is_projective(&tree(&[0])).unwrap());
        assert!(is_projective(&tree(&[2, 0, 2])).unwrap());
        // 1 -> 3 crosses the root arc 0 -> 2.
        assert!(!is_projective(&tree(&[2, 0, 1])).unwrap());
        assert!(!is_projective(&tree(&[3, 0, 2, 1])).unwrap());
        let g = DepStructure::graph(Sentence::anonymous(1), vec![Arc::new(0, 1, "r")]);
        assert_eq!(is_projective(&g), Err(Error::NotATree));
    }

    #[test]
    fn sweep_agrees_with_pairwise_check() {
        // every head array over 5 tokens, well-formed or not
        let n = 5;
        let mut heads = vec![0usize; n];
        loop {
            let arcs: Vec<Arc> = heads
                .iter()
                .enumerate()
                .filter(|&(i, &h)| h != i + 1)
                .map(|(i, &h)| Arc::new(h, i + 1, "x"))
                .collect();
            let pairwise = arcs
                .iter()
                .enumerate()
                .any(|(i, a)| arcs[i + 1..].iter().any(|b| a.crosses(b)));
            assert_eq!(has_crossing(&arcs), pairwise, "{heads:?}");
            let mut i = 0;
            while i < n {
                heads[i] += 1;
                if heads[i] <= n {
                    break;
                }
                heads[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
}

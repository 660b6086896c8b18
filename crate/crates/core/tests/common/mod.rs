#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use structlabel::constituency::{Child, ConstTree, Node};
use structlabel::dep::{Arc, DepStructure, Sentence, Token};

pub const RELS: [&str; 3] = ["nsubj", "obj", "case"];

/// Calls `f` with the head vector of every dependency tree over `n` tokens
/// with a single root attachment: each labelled tree on `1..=n`, decoded from
/// its Prüfer sequence, hung from the root by each of its nodes in turn.
pub fn for_each_tree(n: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let len = n.saturating_sub(2);
    let mut seq = vec![1usize; len];
    let mut heads = vec![0usize; n];
    let mut adj = vec![Vec::with_capacity(n); n + 1];
    let mut stack = Vec::with_capacity(n);
    loop {
        for a in adj.iter_mut() {
            a.clear();
        }
        if n >= 2 {
            for (a, b) in prufer_edges(&seq, n) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for root in 1..=n {
            heads[root - 1] = 0;
            stack.clear();
            stack.push((root, 0));
            while let Some((v, parent)) = stack.pop() {
                for &w in &adj[v] {
                    if w != parent {
                        heads[w - 1] = v;
                        stack.push((w, v));
                    }
                }
            }
            f(&heads);
        }
        // odometer increment over 1..=n
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            seq[i] += 1;
            if seq[i] <= n {
                break;
            }
            seq[i] = 1;
            i += 1;
        }
    }
}

/// Edges of the labelled tree on `1..=n` with Prüfer sequence `seq`.
fn prufer_edges(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n + 1];
    degree[0] = 0;
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Sentence of `n` tokens with empty forms.
pub fn blank(n: usize) -> Sentence {
    Sentence::new("", vec![Token::new(""); n])
}

pub fn tree_from_heads(heads: &[usize]) -> DepStructure {
    let rels: Vec<&str> = (0..heads.len())
        .map(|i| if heads[i] == 0 { "root" } else { RELS[i % RELS.len()] })
        .collect();
    DepStructure::from_heads(blank(heads.len()), heads, &rels)
}

pub fn random_heads(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    // random attachment order gives a random tree with one root child
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(rng);
    let mut heads = vec![0; n];
    for (i, &d) in order.iter().enumerate().skip(1) {
        heads[d - 1] = order[rng.gen_range(0..i)];
    }
    heads
}

fn dominates(heads: &[usize], h: usize, mut d: usize) -> bool {
    while d != 0 {
        if d == h {
            return true;
        }
        d = heads[d - 1];
    }
    h == 0
}

/// Every token strictly between a head and its dependent descends from the
/// head.
pub fn projective_by_domination(heads: &[usize]) -> bool {
    heads.iter().enumerate().all(|(i, &h)| {
        let d = i + 1;
        let (lo, hi) = (h.min(d), h.max(d));
        (lo + 1..hi).all(|m| dominates(heads, h, m))
    })
}

/// Arcs `(head, dep)` whose spans properly interleave.
pub fn interleave(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

/// The crossing graph of the arcs is bipartite.
pub fn two_planar(heads: &[usize]) -> bool {
    let arcs: Vec<(usize, usize)> = heads.iter().enumerate().map(|(i, &h)| (h, i + 1)).collect();
    let mut colour = vec![None; arcs.len()];
    for start in 0..arcs.len() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in 0..arcs.len() {
                if b != a && interleave(arcs[a], arcs[b]) {
                    let want = !colour[a].unwrap();
                    match colour[b] {
                        None => {
                            colour[b] = Some(want);
                            stack.push(b);
                        }
                        Some(c) if c != want => return false,
                        _ => {}
                    }
                }
            }
        }
    }
    true
}

/// Ordered tree shapes with `n` leaves whose internal nodes branch at least
/// twice; leaves are `None`.
#[derive(Clone, Debug)]
pub enum Shape {
    Leaf,
    Node(Vec<Shape>),
}

pub fn shapes(n: usize) -> Vec<Shape> {
    if n == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for parts in compositions(n) {
        if parts.len() < 2 {
            continue;
        }
        let mut acc: Vec<Vec<Shape>> = vec![Vec::new()];
        for &p in &parts {
            let sub = shapes(p);
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    sub.iter().map(move |s| {
                        let mut v = prefix.clone();
                        v.push(s.clone());
                        v
                    })
                })
                .collect();
        }
        out.extend(acc.into_iter().map(Shape::Node));
    }
    out
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=n)
        .flat_map(|first| {
            compositions(n - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

const PHRASES: [&str; 5] = ["S", "NP", "VP", "PP", "ADJP"];
const TAGS: [&str; 4] = ["DT", "NN", "VBD", "IN"];

/// Labels a shape at random, adding unary chains with probability `unary`.
pub fn label_shape(shape: &Shape, unary: f64, rng: &mut impl Rng) -> ConstTree {
    fn chain(mut node: Node, unary: f64, rng: &mut impl Rng) -> Node {
        while rng.gen_bool(unary) {
            node = Node::new(*PHRASES.choose(rng).unwrap(), vec![Child::Node(node)]);
        }
        node
    }
    fn go(shape: &Shape, next: &mut usize, unary: f64, rng: &mut impl Rng) -> Node {
        match shape {
            Shape::Leaf => {
                *next += 1;
                chain(Node::preterminal(*TAGS.choose(rng).unwrap(), *next), unary, rng)
            }
            Shape::Node(kids) => {
                let children = kids.iter().map(|k| Child::Node(go(k, next, unary, rng))).collect();
                chain(Node::new(*PHRASES.choose(rng).unwrap(), children), unary, rng)
            }
        }
    }
    let mut next = 0;
    let mut root = go(shape, &mut next, unary, rng);
    if matches!(shape, Shape::Leaf) && root.is_preterminal() {
        root = Node::new("S", vec![Child::Node(root)]);
    }
    ConstTree::new(root)
}

/// Every graph over `n` tokens, one relation per head/dependent pair.
pub fn all_graphs(n: usize) -> Vec<DepStructure> {
    let pairs: Vec<(usize, usize)> = (0..=n)
        .flat_map(|h| (1..=n).filter(move |&d| d != h).map(move |d| (h, d)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(i, &(h, d))| Arc::new(h, d, RELS[i % 2]))
                .collect();
            DepStructure::graph(Sentence::anonymous(n), arcs)
        })
        .collect()
}

pub fn random_graph(n: usize, density: f64, rng: &mut impl Rng) -> DepStructure {
    let mut arcs = Vec::new();
    for h in 0..=n {
        for d in 1..=n {
            if h != d && rng.gen_bool(density) {
                arcs.push(Arc::new(h, d, *RELS.choose(rng).unwrap()));
            }
        }
    }
    DepStructure::graph(Sentence::anonymous(n), arcs)
}

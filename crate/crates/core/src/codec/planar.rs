//! Bracket and bit engines shared by the tree and graph codecs.
//!
//! Both engines work plane by plane with two stacks per plane: tokens waiting
//! for a head on their right, and heads waiting for dependents on their right.
//! Position 0 is never pushed; a left-head request on an empty stack resolves
//! to the root.

use std::fmt::Write;

use crate::dep::Arc;
use crate::error::{Error, Result};

/// A decoded arc `(head, dep, plane)` with a 1-based plane.
pub type PlanarArc = (usize, usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bracket {
    /// `\`: outgoing arc to a dependent on the left.
    LeftDep,
    /// `>`: incoming arc from a head on the left.
    LeftHead,
    /// `<`: incoming arc from a head on the right.
    RightHead,
    /// `/`: outgoing arc to a dependent on the right.
    RightDep,
}

impl Bracket {
    pub fn symbol(self) -> char {
        match self {
            Bracket::LeftDep => '\\',
            Bracket::LeftHead => '>',
            Bracket::RightHead => '<',
            Bracket::RightDep => '/',
        }
    }

    fn from_symbol(c: char) -> Option<Self> {
        Some(match c {
            '\\' => Bracket::LeftDep,
            '>' => Bracket::LeftHead,
            '<' => Bracket::RightHead,
            '/' => Bracket::RightDep,
            _ => return None,
        })
    }

    fn is_left_side(self) -> bool {
        matches!(self, Bracket::LeftDep | Bracket::LeftHead)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BracketSym {
    pub bracket: Bracket,
    /// 1-based plane; rendered with `plane - 1` stars.
    pub plane: usize,
}

/// Orders the symbols of one token: left-side symbols by ascending plane then
/// right-side symbols by descending plane, each plane following `\*(>|<)/*`.
fn symbol_order(a: &BracketSym, b: &BracketSym) -> std::cmp::Ordering {
    let side = |s: &BracketSym| !s.bracket.is_left_side();
    side(a).cmp(&side(b)).then_with(|| {
        let plane = if a.bracket.is_left_side() {
            a.plane.cmp(&b.plane)
        } else {
            b.plane.cmp(&a.plane)
        };
        plane.then(a.bracket.cmp(&b.bracket))
    })
}

pub fn render_brackets(symbols: &[BracketSym]) -> String {
    let mut out = String::new();
    for s in symbols {
        out.push(s.bracket.symbol());
        for _ in 1..s.plane {
            out.push('*');
        }
    }
    out
}

pub fn parse_brackets(text: &str, max_plane: usize) -> Result<Vec<BracketSym>> {
    let bad = |message: &str| Error::InvalidLabel {
        label: text.to_string(),
        message: message.to_string(),
    };
    let mut out: Vec<BracketSym> = Vec::new();
    for c in text.chars() {
        if c == '*' {
            let last = out.last_mut().ok_or_else(|| bad("star without a bracket"))?;
            last.plane += 1;
            if last.plane > max_plane {
                return Err(bad("plane out of range"));
            }
        } else {
            let bracket = Bracket::from_symbol(c).ok_or_else(|| bad("unknown bracket symbol"))?;
            out.push(BracketSym { bracket, plane: 1 });
        }
    }
    Ok(out)
}

/// Bracket symbols for each token (index `i - 1`) from placed planes.
pub fn encode_brackets(n: usize, planes: &[Vec<Arc>]) -> Vec<Vec<BracketSym>> {
    let mut out: Vec<Vec<BracketSym>> = vec![Vec::new(); n];
    let mut put = |token: usize, bracket: Bracket, plane: usize| {
        if token >= 1 {
            out[token - 1].push(BracketSym { bracket, plane });
        }
    };
    for (p, plane) in planes.iter().enumerate() {
        for arc in plane {
            if arc.head < arc.dep {
                put(arc.dep, Bracket::LeftHead, p + 1);
                put(arc.head, Bracket::RightDep, p + 1);
            } else {
                put(arc.dep, Bracket::RightHead, p + 1);
                put(arc.head, Bracket::LeftDep, p + 1);
            }
        }
    }
    for syms in &mut out {
        syms.sort_by(symbol_order);
    }
    out
}

/// Matches brackets left to right. Returns the recovered arcs and the number
/// of brackets left unmatched.
pub fn decode_brackets(labels: &[Vec<BracketSym>], k: usize) -> (Vec<PlanarArc>, usize) {
    let mut waiting_head: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut open_heads: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut arcs = Vec::new();
    let mut unmatched = 0;

    for (i, syms) in labels.iter().enumerate() {
        let token = i + 1;
        for s in syms.iter().filter(|s| s.bracket.is_left_side()) {
            let p = s.plane - 1;
            if p >= k {
                unmatched += 1;
                continue;
            }
            match s.bracket {
                Bracket::LeftDep => match waiting_head[p].pop() {
                    Some(dep) => arcs.push((token, dep, s.plane)),
                    None => unmatched += 1,
                },
                _ => {
                    let head = open_heads[p].pop().unwrap_or(0);
                    arcs.push((head, token, s.plane));
                }
            }
        }
        for s in syms.iter().filter(|s| !s.bracket.is_left_side()) {
            let p = s.plane - 1;
            if p >= k {
                unmatched += 1;
                continue;
            }
            match s.bracket {
                Bracket::RightHead => waiting_head[p].push(token),
                _ => open_heads[p].push(token),
            }
        }
    }
    unmatched += waiting_head.iter().chain(&open_heads).map(Vec::len).sum::<usize>();
    (arcs, unmatched)
}

/// Per-plane bit view of one token.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlaneBits {
    pub left_head: bool,
    pub right_head: bool,
    /// Farthest dependent of its left head.
    pub left_far: bool,
    /// Farthest dependent of its right head.
    pub right_far: bool,
    pub left_deps: bool,
    pub right_deps: bool,
}

/// Bit view of every token (`[i - 1][plane]`) from placed planes.
/// "Farthest" is measured in linear distance among same-side dependents
/// within the plane.
pub fn encode_plane_bits(n: usize, planes: &[Vec<Arc>]) -> Vec<Vec<PlaneBits>> {
    let k = planes.len();
    let mut out = vec![vec![PlaneBits::default(); k]; n];
    for (p, plane) in planes.iter().enumerate() {
        // farthest right / left dependent per head, index 0 = root
        let mut far_right = vec![0usize; n + 1];
        let mut far_left = vec![usize::MAX; n + 1];
        for arc in plane {
            if arc.head < arc.dep {
                far_right[arc.head] = far_right[arc.head].max(arc.dep);
            } else {
                far_left[arc.head] = far_left[arc.head].min(arc.dep);
            }
        }
        for arc in plane {
            if arc.dep == 0 || arc.dep > n {
                continue;
            }
            let d = &mut out[arc.dep - 1][p];
            if arc.head < arc.dep {
                d.left_head = true;
                d.left_far |= far_right[arc.head] == arc.dep;
            } else {
                d.right_head = true;
                d.right_far |= far_left[arc.head] == arc.dep;
            }
            if arc.head >= 1 {
                let h = &mut out[arc.head - 1][p];
                if arc.head < arc.dep {
                    h.right_deps = true;
                } else {
                    h.left_deps = true;
                }
            }
        }
    }
    out
}

/// Stack reconstruction from per-plane bits. Returns recovered arcs and the
/// number of unresolved requests.
pub fn decode_plane_bits(bits: &[Vec<PlaneBits>], k: usize) -> (Vec<PlanarArc>, usize) {
    let mut waiting_head: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut open_heads: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut arcs = Vec::new();
    let mut unmatched = 0;

    for (i, planes) in bits.iter().enumerate() {
        let token = i + 1;
        for (p, b) in planes.iter().enumerate().take(k) {
            if b.left_deps {
                let mut closed = false;
                while let Some(dep) = waiting_head[p].pop() {
                    arcs.push((token, dep, p + 1));
                    if bits[dep - 1][p].right_far {
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    unmatched += 1;
                }
            }
            if b.left_head {
                match open_heads[p].last() {
                    Some(&head) => {
                        arcs.push((head, token, p + 1));
                        if b.left_far {
                            open_heads[p].pop();
                        }
                    }
                    None => arcs.push((0, token, p + 1)),
                }
            }
        }
        for (p, b) in planes.iter().enumerate().take(k) {
            if b.right_head {
                waiting_head[p].push(token);
            }
            if b.right_deps {
                open_heads[p].push(token);
            }
        }
    }
    unmatched += waiting_head.iter().chain(&open_heads).map(Vec::len).sum::<usize>();
    (arcs, unmatched)
}

pub fn render_bits(bits: &[bool]) -> String {
    let mut s = String::with_capacity(bits.len());
    for &b in bits {
        let _ = write!(s, "{}", b as u8);
    }
    s
}

pub fn parse_bits(text: &str, width: usize) -> Result<Vec<bool>> {
    let bad = |message: &str| Error::InvalidLabel {
        label: text.to_string(),
        message: message.to_string(),
    };
    if text.chars().count() != width {
        return Err(bad(&format!("expected {width} bits")));
    }
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(bad("bits must be 0 or 1")),
        })
        .collect()
}

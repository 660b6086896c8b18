//! Greedy distribution of arcs into planes.
//!
//! Arcs are visited in canonical order (dependent, then head) and placed in
//! the lowest-numbered plane whose constraint still holds. The visiting order
//! is a convention of this crate; it makes the assignment reproducible.
//! When the greedy pass has to drop arcs and at least two planes are
//! available, the arcs are instead two-coloured along the conflict graph
//! whenever that graph is bipartite.

use crate::dep::{Arc, DepStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneConstraint {
    /// No two arcs of the same direction cross (tree bracketing, 7-bit).
    SameDirectionNonCrossing,
    /// No two arcs cross at all (graph bracketing).
    NonCrossing,
    /// Same-direction non-crossing and at most one incoming arc per token.
    FourKBit,
    /// Same-direction non-crossing and at most one incoming arc per token
    /// from each side.
    SixKBit,
}

impl PlaneConstraint {
    fn admits(self, plane: &[Arc], arc: &Arc) -> bool {
        plane.iter().all(|other| match self {
            PlaneConstraint::NonCrossing => !arc.crosses(other),
            PlaneConstraint::SameDirectionNonCrossing => !same_direction_cross(arc, other),
            PlaneConstraint::FourKBit => other.dep != arc.dep && !same_direction_cross(arc, other),
            PlaneConstraint::SixKBit => {
                !(other.dep == arc.dep && other.is_rightward() == arc.is_rightward())
                    && !same_direction_cross(arc, other)
            }
        })
    }
}

fn same_direction_cross(a: &Arc, b: &Arc) -> bool {
    a.is_rightward() == b.is_rightward() && a.crosses(b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneAssignment {
    pub k: usize,
    pub constraint: PlaneConstraint,
    /// `planes[p]` holds the arcs of plane `p + 1` in canonical order.
    pub planes: Vec<Vec<Arc>>,
    pub dropped: Vec<Arc>,
}

impl PlaneAssignment {
    /// 1-based plane of `arc`, if it was placed.
    pub fn plane_of(&self, arc: &Arc) -> Option<usize> {
        self.planes.iter().position(|plane| plane.contains(arc)).map(|p| p + 1)
    }

    pub fn placed(&self) -> usize {
        self.planes.iter().map(Vec::len).sum()
    }
}

pub fn assign_planes(structure: &DepStructure, k: usize, constraint: PlaneConstraint) -> PlaneAssignment {
    let mut arcs = structure.arcs.clone();
    arcs.sort();
    let mut planes: Vec<Vec<Arc>> = vec![Vec::new(); k];
    let mut dropped = Vec::new();
    for arc in &arcs {
        match planes.iter().position(|p| constraint.admits(p, arc)) {
            Some(p) => planes[p].push(arc.clone()),
            None => dropped.push(arc.clone()),
        }
    }
    if k >= 2 && !dropped.is_empty() {
        if let Some(coloured) = two_colour(&arcs, constraint) {
            planes = coloured;
            planes.resize(k, Vec::new());
            dropped.clear();
        }
    }
    PlaneAssignment {
        k,
        constraint,
        planes,
        dropped,
    }
}

/// Splits `arcs` into two conflict-free planes, or `None` if the conflict
/// graph has an odd cycle. The first arc of each component goes to plane 1.
fn two_colour(arcs: &[Arc], constraint: PlaneConstraint) -> Option<Vec<Vec<Arc>>> {
    let conflict = |a: &Arc, b: &Arc| !constraint.admits(std::slice::from_ref(b), a);
    let mut side: Vec<Option<usize>> = vec![None; arcs.len()];
    for start in 0..arcs.len() {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(0);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            let other = 1 - side[a]?;
            for b in 0..arcs.len() {
                if b == a || !conflict(&arcs[a], &arcs[b]) {
                    continue;
                }
                match side[b] {
                    None => {
                        side[b] = Some(other);
                        stack.push(b);
                    }
                    Some(s) if s != other => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut planes = vec![Vec::new(), Vec::new()];
    for (arc, s) in arcs.iter().zip(side) {
        planes[s?].push(arc.clone());
    }
    Some(planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dep::Sentence;

    #[test]
    fn projective_tree_stays_in_one_plane() {
        let rels = ["a"; 4];
        let t = DepStructure::from_heads(Sentence::anonymous(4), &[2, 0, 4, 2], &rels);
        let pa = assign_planes(&t, 3, PlaneConstraint::SameDirectionNonCrossing);
        assert_eq!(pa.planes[0].len(), 4);
        assert!(pa.dropped.is_empty());
    }

    #[test]
    fn overflow_is_reported() {
        // 0->2, 1->3 and 2->4 pairwise cross in one direction
        let t = DepStructure::graph(
            Sentence::anonymous(4),
            vec![Arc::new(0, 2, "a"), Arc::new(1, 3, "b"), Arc::new(2, 4, "c")],
        );
        let pa = assign_planes(&t, 1, PlaneConstraint::NonCrossing);
        assert_eq!(pa.placed(), 2);
        assert_eq!(pa.dropped, vec![Arc::new(1, 3, "b")]);
    }

    #[test]
    fn two_planes_fall_back_to_colouring() {
        // greedy puts 0->2 and 6->4 together, leaving 2->5 no room
        let arcs = vec![
            Arc::new(0, 2, "a"),
            Arc::new(1, 3, "b"),
            Arc::new(6, 4, "c"),
            Arc::new(2, 5, "d"),
        ];
        let g = DepStructure::graph(Sentence::anonymous(6), arcs);
        let pa = assign_planes(&g, 2, PlaneConstraint::NonCrossing);
        assert!(pa.dropped.is_empty(), "{pa:?}");
        assert_eq!(pa.plane_of(&Arc::new(0, 2, "a")), Some(1));
        assert_eq!(pa.plane_of(&Arc::new(6, 4, "c")), Some(2));
        let pa = assign_planes(&g, 1, PlaneConstraint::NonCrossing);
        assert_eq!(pa.dropped.len(), 2);
        for plane in &pa.planes {
            for a in plane {
                assert!(plane.iter().all(|b| !a.crosses(b)));
            }
        }
    }

    #[test]
    fn four_k_bit_keeps_one_head_per_plane() {
        let g = DepStructure::graph(Sentence::anonymous(3), vec![Arc::new(1, 3, "a"), Arc::new(2, 3, "b")]);
        let pa = assign_planes(&g, 2, PlaneConstraint::FourKBit);
        assert_eq!(pa.plane_of(&Arc::new(1, 3, "a")), Some(1));
        assert_eq!(pa.plane_of(&Arc::new(2, 3, "b")), Some(2));
        let pa = assign_planes(&g, 2, PlaneConstraint::SixKBit);
        assert_eq!(pa.plane_of(&Arc::new(2, 3, "b")), Some(2));
        let g = DepStructure::graph(Sentence::anonymous(3), vec![Arc::new(1, 2, "a"), Arc::new(3, 2, "b")]);
        let pa = assign_planes(&g, 2, PlaneConstraint::SixKBit);
        assert_eq!(pa.planes[0].len(), 2);
    }
}

//! Turns candidate head assignments into a well-formed tree.
//!
//! Policy: the first candidate head of a token wins; only the first token
//! attached to the root keeps that attachment; cycles are cut at their
//! lowest position; every headless token then attaches to the root when no
//! root attachment exists yet, otherwise to the preceding token, or to the
//! root's dependent when the preceding token would close a cycle.

/// Candidate heads per token (`candidates[i - 1]`), in decoding order.
/// Returns one head per token and the number of edits made.
pub fn repair_heads(n: usize, candidates: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut repairs = 0;
    let mut heads: Vec<Option<usize>> = Vec::with_capacity(n);
    for i in 1..=n {
        let cands = candidates.get(i - 1).map(Vec::as_slice).unwrap_or(&[]);
        if cands.len() > 1 {
            repairs += cands.len() - 1;
        }
        match cands.first() {
            Some(&h) if h <= n && h != i => heads.push(Some(h)),
            Some(_) => {
                repairs += 1;
                heads.push(None);
            }
            None => heads.push(None),
        }
    }

    let mut root: Option<usize> = None;
    for i in 1..=n {
        if heads[i - 1] == Some(0) {
            if root.is_none() {
                root = Some(i);
            } else {
                heads[i - 1] = None;
                repairs += 1;
            }
        }
    }

    // cut cycles at their lowest position
    let mut state = vec![0u8; n + 1]; // 0 new, 1 on path, 2 done
    for start in 1..=n {
        let mut path = Vec::new();
        let mut v = start;
        loop {
            if v == 0 || state[v] == 2 {
                break;
            }
            if state[v] == 1 {
                let pos = path.iter().position(|&x| x == v).unwrap_or(0);
                let cut = *path[pos..].iter().min().unwrap_or(&v);
                heads[cut - 1] = None;
                repairs += 1;
                break;
            }
            state[v] = 1;
            path.push(v);
            match heads[v - 1] {
                Some(h) => v = h,
                None => break,
            }
        }
        for v in path {
            state[v] = 2;
        }
    }

    for i in 1..=n {
        if heads[i - 1].is_some() {
            continue;
        }
        repairs += 1;
        let Some(r) = root else {
            heads[i - 1] = Some(0);
            root = Some(i);
            continue;
        };
        let prev_ok = i > 1 && !reaches(&heads, i - 1, i);
        heads[i - 1] = Some(if prev_ok { i - 1 } else { r });
    }

    (heads.into_iter().map(|h| h.unwrap_or(0)).collect(), repairs)
}

/// Whether walking up from `from` meets `target`.
fn reaches(heads: &[Option<usize>], from: usize, target: usize) -> bool {
    let mut v = from;
    let mut steps = 0;
    while v != 0 && steps <= heads.len() {
        if v == target {
            return true;
        }
        match heads[v - 1] {
            Some(h) => v = h,
            None => return false,
        }
        steps += 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dep::{validate, DepStructure, Sentence};

    fn well_formed(heads: &[usize]) -> bool {
        let rels = vec!["x"; heads.len()];
        validate(&DepStructure::from_heads(
            Sentence::anonymous(heads.len()),
            heads,
            &rels,
        ))
        .well_formed()
    }

    #[test]
    fn valid_input_is_untouched() {
        let c = vec![vec![2], vec![0], vec![2]];
        assert_eq!(repair_heads(3, &c), (vec![2, 0, 2], 0));
    }

    #[test]
    fn headless_tokens_follow_policy() {
        let c = vec![vec![], vec![], vec![2]];
        let (heads, repairs) = repair_heads(3, &c);
        assert_eq!(heads, vec![0, 1, 2]);
        assert_eq!(repairs, 2);
    }

    #[test]
    fn cycles_and_extra_roots_are_cut() {
        let c = vec![vec![2], vec![1], vec![0], vec![0]];
        let (heads, repairs) = repair_heads(4, &c);
        assert!(well_formed(&heads));
        assert!(repairs >= 2);
    }

    #[test]
    fn out_of_range_heads() {
        let c = vec![vec![99], vec![2], vec![0, 1]];
        let (heads, repairs) = repair_heads(3, &c);
        assert!(well_formed(&heads));
        assert_eq!(repairs, 1 + 1 + 1 + 2);
    }

    #[test]
    fn exhaustive_small_inputs_become_trees() {
        let n = 4;
        let mut cand = vec![0usize; n];
        loop {
            // value n + 1 stands for "no candidate"
            let c: Vec<Vec<usize>> = cand.iter().map(|&h| if h > n { vec![] } else { vec![h] }).collect();
            let (heads, _) = repair_heads(n, &c);
            assert!(well_formed(&heads), "{cand:?} -> {heads:?}");
            let mut i = 0;
            while i < n {
                cand[i] += 1;
                if cand[i] <= n + 1 {
                    break;
                }
                cand[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
}

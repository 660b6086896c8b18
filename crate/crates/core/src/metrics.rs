//! Tagging accuracy, attachment scores, EVALB-style bracketing F1, graph F1
//! and the well-formedness ratio of label sequences.

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::codec::{decode, Scheme};
use crate::constituency::ConstTree;
use crate::dep::{DepStructure, Sentence};
use crate::error::{Error, Result};

/// A ratio kept as raw counts; `0/0` is undefined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        Fraction { num, den }
    }

    pub fn value(&self) -> Option<f64> {
        (self.den > 0).then(|| self.num as f64 / self.den as f64)
    }

    fn add(&mut self, hit: bool) {
        self.den += 1;
        self.num += u64::from(hit);
    }

    fn to_json(self) -> Value {
        json!({ "value": self.value(), "num": self.num, "den": self.den })
    }
}

/// Micro-averaged match counts behind a precision/recall/F1 triple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Prf {
    pub matched: u64,
    pub gold: u64,
    pub predicted: u64,
}

impl Prf {
    pub fn precision(&self) -> Fraction {
        Fraction::new(self.matched, self.predicted)
    }

    pub fn recall(&self) -> Fraction {
        Fraction::new(self.matched, self.gold)
    }

    pub fn f1(&self) -> Option<f64> {
        let total = self.gold + self.predicted;
        (total > 0).then(|| 2.0 * self.matched as f64 / total as f64)
    }

    fn to_json(self) -> Value {
        json!({
            "value": self.f1(),
            "precision": self.precision().value(),
            "recall": self.recall().value(),
            "matched": self.matched,
            "gold": self.gold,
            "predicted": self.predicted,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScoreReport {
    pub accuracy: Option<Fraction>,
    pub uas: Option<Fraction>,
    pub las: Option<Fraction>,
    pub uf: Option<Prf>,
    pub lf: Option<Prf>,
    pub um: Option<Fraction>,
    pub lm: Option<Fraction>,
    pub wellformed: Option<Fraction>,
}

fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |v| format!("{v:.6}"))
}

impl ScoreReport {
    fn fractions(&self) -> [(&'static str, Option<Fraction>); 6] {
        [
            ("accuracy", self.accuracy),
            ("uas", self.uas),
            ("las", self.las),
            ("um", self.um),
            ("lm", self.lm),
            ("wellformed", self.wellformed),
        ]
    }

    fn prfs(&self) -> [(&'static str, Option<Prf>); 2] {
        [("uf", self.uf), ("lf", self.lf)]
    }

    /// Fields present in both reports are taken from `other`.
    pub fn merged(mut self, other: &ScoreReport) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(accuracy, uas, las, uf, lf, um, lm, wellformed);
        self
    }

    /// One `key=value (num/den)` line per present metric.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        for (k, f) in self.fractions() {
            if let Some(f) = f {
                let _ = writeln!(out, "{k}={} ({}/{})", show(f.value()), f.num, f.den);
            }
        }
        for (k, p) in self.prfs() {
            if let Some(p) = p {
                let _ = writeln!(
                    out,
                    "{k}={} (p={} r={} matched={} gold={} predicted={})",
                    show(p.f1()),
                    show(p.precision().value()),
                    show(p.recall().value()),
                    p.matched,
                    p.gold,
                    p.predicted
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, f) in self.fractions() {
            if let Some(f) = f {
                map.insert(k.into(), f.to_json());
            }
        }
        for (k, p) in self.prfs() {
            if let Some(p) = p {
                map.insert(k.into(), p.to_json());
            }
        }
        Value::Object(map)
    }
}

fn check_pairs<T>(gold: &[T], pred: &[T]) -> Result<()> {
    if gold.len() != pred.len() {
        return Err(Error::LengthMismatch {
            sentence: String::new(),
            expected: gold.len(),
            found: pred.len(),
        });
    }
    Ok(())
}

fn check_tokens(id: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::LengthMismatch {
            sentence: id.to_string(),
            expected,
            found,
        });
    }
    Ok(())
}

pub fn tagging_accuracy<S: AsRef<str>>(gold: &[Vec<S>], pred: &[Vec<S>]) -> Result<ScoreReport> {
    check_pairs(gold, pred)?;
    let mut acc = Fraction::default();
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        check_tokens(&(i + 1).to_string(), g.len(), p.len())?;
        for (a, b) in g.iter().zip(p) {
            acc.add(a.as_ref() == b.as_ref());
        }
    }
    Ok(ScoreReport {
        accuracy: Some(acc),
        ..ScoreReport::default()
    })
}

/// Attachment scores over every token, root attachments included.
pub fn dep_scores(gold: &[DepStructure], pred: &[DepStructure]) -> Result<ScoreReport> {
    check_pairs(gold, pred)?;
    let (mut uas, mut las, mut um, mut lm) = Default::default();
    for (g, p) in gold.iter().zip(pred) {
        check_tokens(&g.sentence.id, g.len(), p.len())?;
        let (mut all_heads, mut all_labels) = (true, true);
        for (ga, pa) in g.head_arcs().into_iter().zip(p.head_arcs()) {
            let head = matches!((ga, pa), (Some(a), Some(b)) if a.head == b.head);
            let label = head && matches!((ga, pa), (Some(a), Some(b)) if a.rel == b.rel);
            Fraction::add(&mut uas, head);
            Fraction::add(&mut las, label);
            all_heads &= head;
            all_labels &= label;
        }
        Fraction::add(&mut um, all_heads);
        Fraction::add(&mut lm, all_labels);
    }
    Ok(ScoreReport {
        uas: Some(uas),
        las: Some(las),
        um: Some(um),
        lm: Some(lm),
        ..ScoreReport::default()
    })
}

/// Which constituents and tokens to ignore and which labels to identify,
/// as in EVALB parameter files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalbParams {
    pub delete_labels: HashSet<String>,
    /// Each label is replaced by its representative before comparison.
    pub equivalences: HashMap<String, String>,
}

impl EvalbParams {
    pub fn with_delete_labels<S: AsRef<str>>(labels: &[S]) -> Self {
        EvalbParams {
            delete_labels: labels.iter().map(|s| s.as_ref().to_string()).collect(),
            ..EvalbParams::default()
        }
    }

    fn canonical<'a>(&'a self, label: &'a str) -> &'a str {
        self.equivalences.get(label).map_or(label, String::as_str)
    }
}

impl Default for EvalbParams {
    /// The COLLINS.prm settings, plus the empty label of unlabeled roots.
    fn default() -> Self {
        let delete = ["TOP", "S1", "-NONE-", ",", ":", "``", "''", ".", ""];
        EvalbParams {
            delete_labels: delete.iter().map(|s| s.to_string()).collect(),
            equivalences: HashMap::from([("PRT".to_string(), "ADVP".to_string())]),
        }
    }
}

/// Labeled spans after deleting tokens whose gold tag is a delete label and
/// dropping deleted or emptied constituents. Positions are renumbered over
/// the kept tokens.
fn evalb_spans(tree: &ConstTree, keep: &[bool], params: &EvalbParams) -> HashMap<(usize, usize, String), u64> {
    let mut rank = vec![0; keep.len() + 1];
    let mut kept = 0;
    for (i, k) in keep.iter().enumerate() {
        if *k {
            kept += 1;
        }
        rank[i + 1] = kept;
    }
    let mut out = HashMap::new();
    for (lo, hi, label) in tree.spans() {
        if params.delete_labels.contains(&label) || lo == 0 || hi > keep.len() {
            continue;
        }
        let (start, end) = (rank[lo - 1] + 1, rank[hi]);
        if start > end {
            continue;
        }
        *out.entry((start, end, params.canonical(&label).to_string()))
            .or_insert(0) += 1;
    }
    out
}

fn multiset_overlap<K: std::hash::Hash + Eq>(a: &HashMap<K, u64>, b: &HashMap<K, u64>) -> u64 {
    a.iter().map(|(k, n)| (*n).min(b.get(k).copied().unwrap_or(0))).sum()
}

fn unlabeled(spans: &HashMap<(usize, usize, String), u64>) -> HashMap<(usize, usize), u64> {
    let mut out = HashMap::new();
    for ((s, e, _), n) in spans {
        *out.entry((*s, *e)).or_insert(0) += n;
    }
    out
}

/// Bracketing scores micro-averaged over the corpus.
pub fn const_f1(gold: &[ConstTree], pred: &[ConstTree], params: &EvalbParams) -> Result<ScoreReport> {
    check_pairs(gold, pred)?;
    let (mut uf, mut lf) = (Prf::default(), Prf::default());
    let (mut um, mut lm) = (Fraction::default(), Fraction::default());
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        check_tokens(&(i + 1).to_string(), g.len(), p.len())?;
        let keep: Vec<bool> = g
            .preterminals()
            .iter()
            .map(|t| !t.as_ref().is_some_and(|t| params.delete_labels.contains(t)))
            .collect();
        let gs = evalb_spans(g, &keep, params);
        let ps = evalb_spans(p, &keep, params);
        let (gu, pu) = (unlabeled(&gs), unlabeled(&ps));
        let count = |m: &HashMap<(usize, usize, String), u64>| m.values().sum::<u64>();
        let labeled_hits = multiset_overlap(&gs, &ps);
        let unlabeled_hits = multiset_overlap(&gu, &pu);
        let (ng, np) = (count(&gs), count(&ps));
        lf.matched += labeled_hits;
        uf.matched += unlabeled_hits;
        lf.gold += ng;
        uf.gold += ng;
        lf.predicted += np;
        uf.predicted += np;
        um.add(unlabeled_hits == ng && ng == np);
        lm.add(labeled_hits == ng && ng == np);
    }
    Ok(ScoreReport {
        uf: Some(uf),
        lf: Some(lf),
        um: Some(um),
        lm: Some(lm),
        ..ScoreReport::default()
    })
}

/// Arc F1 micro-averaged over the corpus, arcs from the root included.
pub fn graph_scores(gold: &[DepStructure], pred: &[DepStructure]) -> Result<ScoreReport> {
    check_pairs(gold, pred)?;
    let (mut uf, mut lf) = (Prf::default(), Prf::default());
    let (mut um, mut lm) = (Fraction::default(), Fraction::default());
    for (g, p) in gold.iter().zip(pred) {
        check_tokens(&g.sentence.id, g.len(), p.len())?;
        let labeled = |s: &DepStructure| -> HashSet<(usize, usize, String)> {
            s.arcs.iter().map(|a| (a.head, a.dep, a.rel.clone())).collect()
        };
        let bare = |s: &DepStructure| -> HashSet<(usize, usize)> { s.arcs.iter().map(|a| (a.head, a.dep)).collect() };
        let (gl, pl, gu, pu) = (labeled(g), labeled(p), bare(g), bare(p));
        lf.matched += gl.intersection(&pl).count() as u64;
        lf.gold += gl.len() as u64;
        lf.predicted += pl.len() as u64;
        uf.matched += gu.intersection(&pu).count() as u64;
        uf.gold += gu.len() as u64;
        uf.predicted += pu.len() as u64;
        um.add(gu == pu);
        lm.add(gl == pl);
    }
    Ok(ScoreReport {
        uf: Some(uf),
        lf: Some(lf),
        um: Some(um),
        lm: Some(lm),
        ..ScoreReport::default()
    })
}

/// Share of label sequences that decode without any repair into a structure
/// of the expected shape. Sequences the decoder rejects count as ill-formed.
pub fn wellformed_ratio(scheme: Scheme, sentences: &[Sentence], labels: &[Vec<String>]) -> Result<ScoreReport> {
    if sentences.len() != labels.len() {
        return Err(Error::LengthMismatch {
            sentence: String::new(),
            expected: sentences.len(),
            found: labels.len(),
        });
    }
    let mut ratio = Fraction::default();
    for (s, ls) in sentences.iter().zip(labels) {
        check_tokens(&s.id, s.len(), ls.len())?;
        ratio.add(decode(scheme, s, ls).is_ok_and(|d| d.is_wellformed()));
    }
    Ok(ScoreReport {
        wellformed: Some(ratio),
        ..ScoreReport::default()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constituency::Node;
    use crate::dep::Arc;

    fn chain(n: usize, rels: &[&str]) -> DepStructure {
        let heads: Vec<usize> = (0..n).collect();
        DepStructure::from_heads(Sentence::anonymous(n), &heads, rels)
    }

    #[test]
    fn accuracy_counts() {
        let g = vec![vec!["a", "b", "c", "d"]];
        let p = vec![vec!["a", "b", "c", "x"]];
        assert_eq!(tagging_accuracy(&g, &p).unwrap().accuracy.unwrap().value(), Some(0.75));
        assert_eq!(tagging_accuracy(&g, &g).unwrap().accuracy.unwrap().value(), Some(1.0));
    }

    #[test]
    fn one_wrong_relation() {
        let rels = ["r"; 10];
        let mut other = rels;
        other[4] = "q";
        let r = dep_scores(&[chain(10, &rels)], &[chain(10, &other)]).unwrap();
        assert_eq!(r.uas.unwrap().value(), Some(1.0));
        assert_eq!(r.las.unwrap().value(), Some(0.9));
        assert_eq!(r.um.unwrap().value(), Some(1.0));
        assert_eq!(r.lm.unwrap().value(), Some(0.0));
        let short = chain(9, &rels[..9]);
        assert!(dep_scores(&[chain(10, &rels)], &[short]).is_err());
    }

    fn np_vp(second: &str) -> ConstTree {
        ConstTree::new(Node::new(
            "S",
            vec![
                Node::new("NP", vec![Node::preterminal("PRP", 1).into()]).into(),
                Node::new(
                    second,
                    vec![Node::preterminal("VBD", 2).into(), Node::preterminal(".", 3).into()],
                )
                .into(),
            ],
        ))
    }

    #[test]
    fn bracketing() {
        let params = EvalbParams::default();
        let t = np_vp("VP");
        let r = const_f1(std::slice::from_ref(&t), std::slice::from_ref(&t), &params).unwrap();
        assert_eq!(r.lf.unwrap().f1(), Some(1.0));
        let flat = ConstTree::new(Node::new(
            "S",
            vec![
                Node::new("NP", vec![Node::preterminal("PRP", 1).into()]).into(),
                Node::preterminal("VBD", 2).into(),
                Node::preterminal(".", 3).into(),
            ],
        ));
        // S(1,2) and NP(1,1) matched; the VP of gold spans (2,2) once '.' is deleted.
        let r = const_f1(std::slice::from_ref(&t), &[flat], &params).unwrap();
        let lf = r.lf.unwrap();
        assert_eq!((lf.matched, lf.gold, lf.predicted), (2, 3, 2));
        assert!((lf.f1().unwrap() - 0.8).abs() < 1e-12);
        let r = const_f1(&[t], &[np_vp("PRT")], &params).unwrap();
        assert_eq!(r.lf.unwrap().matched, 2);
        let r = const_f1(&[np_vp("ADVP")], &[np_vp("PRT")], &params).unwrap();
        assert_eq!(r.lm.unwrap().value(), Some(1.0));
    }

    #[test]
    fn graph_empty_prediction() {
        let s = Sentence::anonymous(2);
        let g = DepStructure::graph(s.clone(), vec![Arc::new(0, 1, "top"), Arc::new(1, 2, "a")]);
        let p = DepStructure::graph(s, vec![]);
        let r = graph_scores(std::slice::from_ref(&g), &[p]).unwrap();
        assert_eq!(r.lf.unwrap().f1(), Some(0.0));
        assert_eq!(r.lf.unwrap().recall().value(), Some(0.0));
        assert_eq!(
            graph_scores(std::slice::from_ref(&g), std::slice::from_ref(&g)).unwrap().lf.unwrap().f1(),
            Some(1.0)
        );
    }

    #[test]
    fn wellformed_counts() {
        let s = Sentence::anonymous(2);
        let good = vec!["2@a".to_string(), "0@root".to_string()];
        let bad = vec!["0@root".to_string(), "0@root".to_string()];
        let r = wellformed_ratio(Scheme::DepAbsolute, &[s.clone(), s], &[good, bad]).unwrap();
        assert_eq!(r.wellformed.unwrap(), Fraction::new(1, 2));
        let empty = wellformed_ratio(Scheme::DepAbsolute, &[], &[]).unwrap();
        assert_eq!(empty.wellformed.unwrap().value(), None);
    }

    #[test]
    fn serializations() {
        let r = ScoreReport {
            uas: Some(Fraction::new(1, 2)),
            ..ScoreReport::default()
        };
        assert_eq!(r.to_key_values(), "uas=0.500000 (1/2)\n");
        assert_eq!(r.to_json()["uas"]["value"], json!(0.5));
    }
}

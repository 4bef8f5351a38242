//! Shared helpers for integration tests.

#![allow(dead_code)]

pub mod golden_8_20;
pub mod random;

use std::collections::{BTreeMap, BTreeSet};

use khst::diagram::{checkerboard_and_tait, parse_diagram, TaitGraph};
use khst::stc::StComplex;

/// Tait graph of a PD code with default options.
pub fn tait(pd: &str) -> TaitGraph {
    let d = parse_diagram(pd).expect("valid PD code");
    checkerboard_and_tait(&d, None).expect("connected diagram")
}

/// Reference tree label (1-based) of every enumerated tree of the 8_20 complex.
pub fn reference_labels(g: &TaitGraph, st: &StComplex) -> Vec<usize> {
    st.trees
        .iter()
        .map(|td| {
            let l = td.tree.labels(g);
            golden_8_20::TREES
                .iter()
                .position(|s| *s == &l[..])
                .expect("tree listed in the reference table")
                + 1
        })
        .collect()
}

/// Outcome of comparing computed incidences with the printed ones.
#[derive(Debug, Default)]
pub struct IncidenceFit {
    /// `(source, target, computed, printed)` entries that disagree after the best sign fit.
    pub mismatches: Vec<(String, String, i64, i64)>,
    /// Number of compared entries.
    pub compared: usize,
}

fn name(g: (usize, bool)) -> String {
    format!("T{}{}", g.0, if g.1 { '+' } else { '-' })
}

/// Compare the computed 8_20 incidences with the printed table, allowing a
/// global sign flip per bidegree chosen to minimise disagreements.
pub fn fit_incidences(g: &TaitGraph, st: &StComplex) -> IncidenceFit {
    let lab = reference_labels(g, st);
    let key = |k: usize| (lab[st.generators[k].tree], st.generators[k].plus);
    let idx: BTreeMap<(usize, bool), usize> =
        (0..st.generators.len()).map(|k| (key(k), k)).collect();
    let bideg = |k: usize| (st.generators[k].i, st.generators[k].j);
    // All compared entries: (source, target, computed, printed).
    let mut entries = Vec::new();
    for &(src, terms) in golden_8_20::INCIDENCES {
        let a = idx[&src];
        let printed: BTreeMap<usize, i64> = terms.iter().map(|&(c, t)| (idx[&t], c)).collect();
        let mut targets: BTreeSet<usize> = printed.keys().copied().collect();
        targets.extend(st.complex.diff[a].iter().map(|&(t, _)| t));
        for b in targets {
            entries.push((
                a,
                b,
                st.incidence(a, b),
                printed.get(&b).copied().unwrap_or(0),
            ));
        }
    }
    let degs: Vec<(i64, i64)> = {
        let s: BTreeSet<(i64, i64)> = (0..st.generators.len()).map(bideg).collect();
        s.into_iter().collect()
    };
    let di = |k: usize| degs.iter().position(|&d| d == bideg(k)).expect("bidegree");
    let n = degs.len();
    // Components of the constraint graph on bidegrees.
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    for &(a, b, _, _) in &entries {
        let (x, y) = (find(&mut comp, di(a)), find(&mut comp, di(b)));
        comp[x] = y;
    }
    let mut sign = vec![1i64; n];
    let roots: BTreeSet<usize> = (0..n).map(|x| find(&mut comp, x)).collect();
    for r in roots {
        let members: Vec<usize> = (0..n).filter(|&x| find(&mut comp, x) == r).collect();
        let local: Vec<&(usize, usize, i64, i64)> = entries
            .iter()
            .filter(|e| find(&mut comp, di(e.0)) == r)
            .collect();
        let mut best = (usize::MAX, 0u64);
        // The first member's sign is fixed; flipping everything changes nothing.
        for mask in 0..1u64 << (members.len() - 1) {
            let s = |x: usize| {
                let p = members.iter().position(|&m| m == x).expect("member");
                if p > 0 && mask >> (p - 1) & 1 == 1 {
                    -1
                } else {
                    1
                }
            };
            let bad = local
                .iter()
                .filter(|&&&(a, b, c, p)| s(di(a)) * s(di(b)) * c != p)
                .count();
            if bad < best.0 {
                best = (bad, mask);
            }
        }
        for (p, &x) in members.iter().enumerate() {
            if p > 0 && best.1 >> (p - 1) & 1 == 1 {
                sign[x] = -1;
            }
        }
    }
    let mut fit = IncidenceFit {
        compared: entries.len(),
        ..Default::default()
    };
    for &(a, b, c, p) in &entries {
        let c2 = sign[di(a)] * sign[di(b)] * c;
        if c2 != p {
            fit.mismatches.push((name(key(a)), name(key(b)), c2, p));
        }
    }
    fit
}

/// Reference labels for a list of tree data.
pub fn reference_labels_trees(g: &TaitGraph, trees: &[khst::stc::TreeData]) -> Vec<usize> {
    trees
        .iter()
        .map(|td| {
            let l = td.tree.labels(g);
            golden_8_20::TREES
                .iter()
                .position(|s| *s == &l[..])
                .expect("tree listed in the reference table")
                + 1
        })
        .collect()
}

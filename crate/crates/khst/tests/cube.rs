//! The brute-force cube complexes: Khovanov, reduced, Lee, oriented generators and saddles.

mod common;

use std::collections::BTreeMap;

use khst::corpus::Corpus;
use khst::cube::{
    apply_differential, band_surgery, build_khovanov_complex, build_lee_complex,
    oriented_resolution_generator, Algebra, Band, Chain, EnhancedState, SaddleMap, StateSpace,
    Variant,
};
use khst::diagram::{checkerboard_and_tait, parse_diagram, LinkDiagram};
use khst::homology::{homology_of, rational_ranks};
use khst::jones::jones_polynomial;
use khst::stc::KhovanovMatching;
use khst::trees::relation_graph;

const TREFOIL: &str = "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]";
const LEFT_TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

fn groups(pd: &str, variant: Variant) -> BTreeMap<(i64, i64), (usize, Vec<u64>)> {
    let g = common::tait(pd);
    let c = build_khovanov_complex(&g, variant).unwrap();
    homology_of(&c.complex)
        .unwrap()
        .groups
        .into_iter()
        .map(|(k, v)| (k, (v.rank, v.torsion)))
        .collect()
}

#[test]
fn crossingless_unknot() {
    let g = common::tait("[]");
    let c = build_khovanov_complex(&g, Variant::Unreduced).unwrap();
    let mut degs: Vec<(i64, i64)> = c.complex.gens.iter().map(|x| (x.i, x.j)).collect();
    degs.sort();
    assert_eq!(degs, vec![(0, -1), (0, 1)]);
    assert!(c.complex.diff.iter().all(|d| d.is_empty()));
}

#[test]
fn right_trefoil_homology() {
    let expect: BTreeMap<(i64, i64), (usize, Vec<u64>)> = [
        ((0, 1), (1, vec![])),
        ((0, 3), (1, vec![])),
        ((2, 5), (1, vec![])),
        ((3, 7), (0, vec![2])),
        ((3, 9), (1, vec![])),
    ]
    .into_iter()
    .collect();
    assert_eq!(groups(TREFOIL, Variant::Unreduced), expect);
    let plus: BTreeMap<_, _> = [
        ((0, 3), (1, vec![])),
        ((2, 7), (1, vec![])),
        ((3, 9), (1, vec![])),
    ]
    .into();
    assert_eq!(groups(TREFOIL, Variant::ReducedPlus), plus);
    let minus: BTreeMap<_, _> = [
        ((0, 1), (1, vec![])),
        ((2, 5), (1, vec![])),
        ((3, 7), (1, vec![])),
    ]
    .into();
    assert_eq!(groups(TREFOIL, Variant::ReducedMinus), minus);
}

#[test]
fn left_trefoil_homology() {
    let expect: BTreeMap<(i64, i64), (usize, Vec<u64>)> = [
        ((-3, -9), (1, vec![])),
        ((-2, -7), (0, vec![2])),
        ((-2, -5), (1, vec![])),
        ((0, -3), (1, vec![])),
        ((0, -1), (1, vec![])),
    ]
    .into_iter()
    .collect();
    assert_eq!(groups(LEFT_TREFOIL, Variant::Unreduced), expect);
}

#[test]
fn golden_8_20_cube_homology() {
    let got = groups(common::golden_8_20::PD, Variant::Unreduced);
    let expect: BTreeMap<(i64, i64), (usize, Vec<u64>)> = common::golden_8_20::HOMOLOGY
        .iter()
        .map(|&(i, j, r, t)| ((i, j), (r, t.to_vec())))
        .collect();
    assert_eq!(got, expect);
}

#[test]
fn generator_counts() {
    for e in Corpus::bundled().up_to(8) {
        let g = checkerboard_and_tait(&e.diagram().unwrap(), None).unwrap();
        let expect: usize = (0..1u64 << g.n_edges())
            .map(|b| 1usize << g.resolve(b).n_circles)
            .sum();
        let un = build_khovanov_complex(&g, Variant::Unreduced).unwrap();
        assert_eq!(un.complex.len(), expect, "{}", e.name);
        for v in [Variant::ReducedPlus, Variant::ReducedMinus] {
            assert_eq!(
                build_khovanov_complex(&g, v).unwrap().complex.len() * 2,
                expect,
                "{}",
                e.name
            );
        }
    }
}

#[test]
fn d_squared_and_gradings_on_corpus() {
    for e in &Corpus::bundled().entries {
        let g = checkerboard_and_tait(&e.diagram().unwrap(), None).unwrap();
        for v in [
            Variant::Unreduced,
            Variant::ReducedPlus,
            Variant::ReducedMinus,
        ] {
            let c = build_khovanov_complex(&g, v).unwrap();
            assert_eq!(c.complex.check_d_squared(), Ok(()), "{} {v:?}", e.name);
            for (k, col) in c.complex.diff.iter().enumerate() {
                for &(t, _) in col {
                    assert_eq!(c.complex.gens[t].j, c.complex.gens[k].j);
                }
            }
        }
        let lee = build_lee_complex(&g).unwrap();
        assert_eq!(lee.complex.check_d_squared(), Ok(()), "{} Lee", e.name);
        for (k, col) in lee.complex.diff.iter().enumerate() {
            for &(t, _) in col {
                let dj = lee.complex.gens[t].j - lee.complex.gens[k].j;
                assert!(
                    dj == 0 || dj == 4,
                    "{}: Lee differential shifts j by {dj}",
                    e.name
                );
            }
        }
    }
}

#[test]
fn euler_characteristic_is_jones() {
    for e in &Corpus::bundled().entries {
        let d = e.diagram().unwrap();
        let g = checkerboard_and_tait(&d, None).unwrap();
        let c = build_khovanov_complex(&g, Variant::Unreduced).unwrap();
        assert_eq!(
            c.complex.euler(),
            jones_polynomial(&d).unwrap(),
            "{}",
            e.name
        );
    }
}

#[test]
fn lee_homology_rank_is_two_to_components() {
    for e in &Corpus::bundled().entries {
        let d = e.diagram().unwrap();
        let g = checkerboard_and_tait(&d, None).unwrap();
        let ranks = rational_ranks(&build_lee_complex(&g).unwrap().complex).unwrap();
        assert_eq!(
            ranks.values().sum::<usize>(),
            1 << d.n_components(),
            "{}",
            e.name
        );
        if d.n_components() == 1 {
            assert_eq!(
                ranks.keys().copied().collect::<Vec<_>>(),
                vec![0],
                "{}",
                e.name
            );
        }
    }
}

#[test]
fn oriented_generator_of_unknot() {
    let g = common::tait("[]");
    let s = oriented_resolution_generator(&g, false).unwrap();
    let t = oriented_resolution_generator(&g, true).unwrap();
    let one = EnhancedState { bmask: 0, xmask: 0 };
    let x = EnhancedState { bmask: 0, xmask: 1 };
    assert_eq!(s[&x], 1);
    assert_eq!(t[&x], 1);
    assert_eq!(s[&one], -t[&one]);
    assert_eq!(s[&one].abs(), 1);
}

fn lee_cycle(g: &khst::diagram::TaitGraph, ch: &Chain) -> bool {
    let sp = StateSpace::new(g);
    apply_differential(&sp, ch, Algebra::Lee, Variant::Unreduced).is_empty()
}

#[test]
fn oriented_generators_are_lee_cycles() {
    let g = common::tait(TREFOIL);
    let s = oriented_resolution_generator(&g, false).unwrap();
    assert_eq!(g.resolve(g.oriented_bmask().unwrap()).n_circles, 2);
    assert_eq!(s.len(), 4);
    for e in &Corpus::bundled().entries {
        let d = e.diagram().unwrap();
        // Every orientation of every component.
        for mask in 0..1u32 << d.n_components() {
            let rev: Vec<bool> = (0..d.n_components()).map(|k| mask >> k & 1 == 1).collect();
            let g = checkerboard_and_tait(&d.with_reversed(&rev).unwrap(), None).unwrap();
            for flip in [false, true] {
                let ch = oriented_resolution_generator(&g, flip).unwrap();
                assert!(lee_cycle(&g, &ch), "{} {rev:?} {flip}", e.name);
            }
        }
    }
}

#[test]
fn complex_splits_along_trees() {
    for e in Corpus::bundled().up_to(7) {
        let g = checkerboard_and_tait(&e.diagram().unwrap(), None).unwrap();
        let km = KhovanovMatching::new(&g, Variant::Unreduced, Algebra::Khovanov);
        let trees: Vec<_> = km.trees.iter().map(|t| t.tree).collect();
        let rel = relation_graph(&g, &trees);
        // Transitive closure.
        let n = trees.len();
        let mut reach = vec![vec![false; n]; n];
        for a in 0..n {
            let mut stack = rel[a].clone();
            while let Some(b) = stack.pop() {
                if !reach[a][b] {
                    reach[a][b] = true;
                    stack.extend(rel[b].iter().copied());
                }
            }
        }
        let c = build_khovanov_complex(&g, Variant::Unreduced).unwrap();
        for (k, col) in c.complex.diff.iter().enumerate() {
            let ta = km.tree_of(c.states[k].bmask);
            for &(t, _) in col {
                let tb = km.tree_of(c.states[t].bmask);
                assert!(
                    ta == tb || reach[ta][tb],
                    "{}: differential leaves the order",
                    e.name
                );
            }
        }
    }
}

#[test]
fn matrix_market_export() {
    let g = common::tait(TREFOIL);
    let c = build_khovanov_complex(&g, Variant::Unreduced).unwrap();
    let mm = c.complex.matrix_market(2, 7);
    let mut lines = mm.lines();
    assert_eq!(
        lines.next(),
        Some("%%MatrixMarket matrix coordinate integer general")
    );
    let dims: Vec<usize> = lines
        .next()
        .unwrap()
        .split(' ')
        .map(|x| x.parse().unwrap())
        .collect();
    let src = c
        .complex
        .gens
        .iter()
        .filter(|x| x.i == 2 && x.j == 7)
        .count();
    let tgt = c
        .complex
        .gens
        .iter()
        .filter(|x| x.i == 3 && x.j == 7)
        .count();
    assert_eq!(&dims[..2], &[tgt, src]);
    assert_eq!(lines.count(), dims[2]);
}

fn saddles(pd: &str) -> Vec<(LinkDiagram, Band)> {
    let d = parse_diagram(pd).unwrap();
    let n = d.arcs().len() as u32;
    let mut out = Vec::new();
    for p in 1..=n {
        for q in p + 1..=n {
            let band = Band { p, q };
            if let Ok(t) = band_surgery(&d, band) {
                if let Ok(d2) = LinkDiagram::from_pd(&t, None, None, None, None) {
                    out.push((d2, band));
                }
            }
        }
    }
    out
}

#[test]
fn saddle_maps_are_chain_maps() {
    for pd in [TREFOIL, LEFT_TREFOIL] {
        let d = parse_diagram(pd).unwrap();
        let g = checkerboard_and_tait(&d, None).unwrap();
        let found = saddles(pd);
        assert!(!found.is_empty());
        for (d2, band) in found {
            let g2 = checkerboard_and_tait(&d2, None).unwrap();
            let sm = SaddleMap::new(&g, &g2, band).unwrap();
            let (sp1, sp2) = (StateSpace::new(&g), StateSpace::new(&g2));
            for b in 0..1u64 << g.n_edges() {
                for s in sp1.states_of(b, Variant::Unreduced) {
                    let ch: Chain = [(s, 1)].into();
                    let lhs = apply_differential(
                        &sp2,
                        &sm.apply(&ch),
                        Algebra::Khovanov,
                        Variant::Unreduced,
                    );
                    let rhs = sm.apply(&apply_differential(
                        &sp1,
                        &ch,
                        Algebra::Khovanov,
                        Variant::Unreduced,
                    ));
                    assert_eq!(lhs, rhs, "{pd} band {band:?} state {}", sp1.name(&s));
                }
            }
        }
    }
}

#[test]
fn saddle_acts_by_frobenius_operations() {
    let d = parse_diagram(TREFOIL).unwrap();
    let g = checkerboard_and_tait(&d, None).unwrap();
    let (d2, band) = saddles(TREFOIL).into_iter().next().unwrap();
    let g2 = checkerboard_and_tait(&d2, None).unwrap();
    let sm = SaddleMap::new(&g, &g2, band).unwrap();
    let sp = StateSpace::new(&g);
    let (mut merges, mut splits) = (0, 0);
    for b in 0..1u64 << g.n_edges() {
        let r = g.resolve(b);
        let r2 = g2.resolve(b);
        for s in sp.states_of(b, Variant::Unreduced) {
            let img = sm.apply_state(&s);
            let xs = s.xmask.count_ones();
            if sm.merges_on(b) {
                merges += 1;
                assert_eq!(r2.n_circles + 1, r.n_circles);
                // m(1,1) = 1, m(1,x) = m(x,1) = x, m(x,x) = 0.
                assert!(img.len() <= 1);
                for (t, c) in img {
                    assert_eq!(c, 1);
                    assert_eq!(t.xmask.count_ones(), xs);
                }
            } else {
                splits += 1;
                assert_eq!(r2.n_circles, r.n_circles + 1);
                // Δ(1) = 1⊗x + x⊗1, Δ(x) = x⊗x.
                let circle_x = img.len() == 1;
                for (t, c) in &img {
                    assert_eq!(*c, 1);
                    assert_eq!(t.xmask.count_ones(), xs + 1);
                }
                assert!(circle_x || img.len() == 2);
            }
        }
    }
    assert!(merges > 0 && splits > 0);
}

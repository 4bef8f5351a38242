//! Algebraic discrete Morse theory: matchings, Morse differentials and the maps f, g, χ.

mod common;

use std::collections::HashMap;

use khst::corpus::Corpus;
use khst::cube::{build_khovanov_complex, build_lee_complex, Algebra, EnhancedState, Variant};
use khst::diagram::checkerboard_and_tait;
use khst::homology::homology_of;
use khst::morse::{
    morse_differential, verify_acyclic, AcyclicReport, HasseDiagram, MatchedComplex, Matching,
    MorseEngine, MorseError, MorseSystem, Partner, Vector,
};
use khst::stc::{build_st_complex, KhovanovMatching, StVariant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random::{as_bigraded, check_morse_identities, random_complex, random_matching};

/// `d(a) = b + b'`, `d(a') = b + b'` in degrees 0 → 1.
fn square() -> HasseDiagram {
    HasseDiagram {
        degrees: vec![0, 0, 1, 1],
        diff: vec![vec![(2, 1), (3, 1)], vec![(2, 1), (3, 1)], vec![], vec![]],
    }
}

#[test]
fn empty_matching_is_identity() {
    let h = square();
    let m = Matching::empty();
    assert_eq!(verify_acyclic(&h, &m), Ok(AcyclicReport::Acyclic));
    let (crit, mh) = morse_differential(&h, &m).unwrap();
    assert_eq!(crit, vec![0, 1, 2, 3]);
    assert_eq!(mh, h);
    let sys = MatchedComplex::new(&h, &m);
    let mut eng = MorseEngine::new(&sys);
    for x in 0..4 {
        assert_eq!(eng.f(x).unwrap(), Vector::from([(x, 1)]));
        assert_eq!(eng.g(x).unwrap(), Vector::from([(x, 1)]));
        assert!(eng.chi(x).unwrap().is_empty());
    }
}

#[test]
fn two_cycle_matching_is_rejected() {
    let h = square();
    let m = Matching {
        pairs: vec![(0, 2), (1, 3)],
    };
    match verify_acyclic(&h, &m).unwrap() {
        AcyclicReport::Cycle(c) => assert_eq!(c.len(), 2),
        other => panic!("expected a cycle, got {other:?}"),
    }
    assert!(matches!(
        morse_differential(&h, &m),
        Err(MorseError::Cycle(_))
    ));
    // Either pair on its own is fine.
    assert!(verify_acyclic(
        &h,
        &Matching {
            pairs: vec![(0, 2)]
        }
    )
    .unwrap()
    .is_acyclic());
}

#[test]
fn invalid_matchings_are_reported() {
    let h = square();
    assert!(matches!(
        verify_acyclic(
            &h,
            &Matching {
                pairs: vec![(0, 1)]
            }
        ),
        Err(MorseError::GradingMismatch(..))
    ));
    assert_eq!(
        verify_acyclic(
            &h,
            &Matching {
                pairs: vec![(0, 2), (1, 2)]
            }
        ),
        Ok(AcyclicReport::DoublyMatched(2))
    );
    let two = HasseDiagram {
        degrees: vec![0, 1],
        diff: vec![vec![(1, 2)], vec![]],
    };
    let m = Matching {
        pairs: vec![(0, 1)],
    };
    assert_eq!(verify_acyclic(&two, &m), Ok(AcyclicReport::NonUnit(0, 1)));
    assert!(matches!(
        morse_differential(&two, &m),
        Err(MorseError::NonUnitWeight(..))
    ));
}

#[test]
fn single_pair_cancels() {
    // ℤ --1--> ℤ --0--> ℤ : matching the first pair leaves the last cell.
    let h = HasseDiagram {
        degrees: vec![0, 1, 1],
        diff: vec![vec![(1, 1), (2, 1)], vec![], vec![]],
    };
    let m = Matching {
        pairs: vec![(0, 1)],
    };
    let (crit, _) = morse_differential(&h, &m).unwrap();
    assert_eq!(crit, vec![2]);
    let sys = MatchedComplex::new(&h, &m);
    let mut eng = MorseEngine::new(&sys);
    // g(b) = −b' (b ~ −b' in homology) and χ(b) = −a, so f g(b) − b = d χ(b).
    assert_eq!(eng.g(1).unwrap(), Vector::from([(2, -1)]));
    assert_eq!(eng.chi(1).unwrap(), Vector::from([(0, -1)]));
    assert!(eng.chi(0).unwrap().is_empty());
}

#[test]
fn random_complexes_satisfy_all_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut matched = 0;
    for k in 0..100 {
        let h = random_complex(&mut rng);
        let m = random_matching(&mut rng, &h);
        matched += m.pairs.len();
        assert!(verify_acyclic(&h, &m).unwrap().is_acyclic());
        if let Err(e) = check_morse_identities(&h, &m) {
            panic!("complex {k}: {e}");
        }
        // Morse complex has the same Euler characteristic.
        let (_, mh) = morse_differential(&h, &m).unwrap();
        assert_eq!(as_bigraded(&mh).euler(), as_bigraded(&h).euler());
    }
    assert!(matched > 100, "matchings should be nontrivial");
}

/// The Khovanov matching of a graph as an explicit Hasse diagram and matching.
fn explicit(km: &KhovanovMatching<'_>, states: &[EnhancedState]) -> (HasseDiagram, Matching) {
    let idx: HashMap<EnhancedState, usize> =
        states.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let degrees = states.iter().map(|s| km.degree(s)).collect();
    let diff = states
        .iter()
        .map(|s| {
            km.differential(s)
                .into_iter()
                .map(|(t, c)| (idx[&t], c))
                .collect()
        })
        .collect();
    let mut pairs = Vec::new();
    for (k, s) in states.iter().enumerate() {
        match km.partner(s) {
            Partner::Up(t) => {
                assert_eq!(km.partner(&t), Partner::Down(*s), "partner symmetry");
                pairs.push((k, idx[&t]));
            }
            Partner::Down(t) => assert_eq!(km.partner(&t), Partner::Up(*s)),
            Partner::Critical => {}
        }
    }
    (HasseDiagram { degrees, diff }, Matching { pairs })
}

#[test]
fn khovanov_matching_is_acyclic_and_near_perfect() {
    for e in Corpus::bundled().up_to(8) {
        let g = checkerboard_and_tait(&e.diagram().unwrap(), None).unwrap();
        for (variant, algebra) in [
            (Variant::Unreduced, Algebra::Khovanov),
            (Variant::ReducedPlus, Algebra::Khovanov),
            (Variant::ReducedMinus, Algebra::Khovanov),
            (Variant::Unreduced, Algebra::Lee),
        ] {
            let km = KhovanovMatching::new(&g, variant, algebra);
            let cube = if algebra == Algebra::Lee {
                build_lee_complex(&g).unwrap()
            } else {
                build_khovanov_complex(&g, variant).unwrap()
            };
            let (h, m) = explicit(&km, &cube.states);
            assert_eq!(
                verify_acyclic(&h, &m),
                Ok(AcyclicReport::Acyclic),
                "{} {variant:?}",
                e.name
            );
            let sys = MatchedComplex::new(&h, &m);
            let crit: Vec<EnhancedState> =
                sys.critical().into_iter().map(|k| cube.states[k]).collect();
            let per_tree = if variant == Variant::Unreduced { 2 } else { 1 };
            assert_eq!(
                crit.len(),
                km.trees.len() * per_tree,
                "{} {variant:?}",
                e.name
            );
            let mut expect: Vec<EnhancedState> =
                km.critical_cells().into_iter().map(|(_, _, c)| c).collect();
            expect.sort();
            let mut got = crit.clone();
            got.sort();
            assert_eq!(got, expect, "{} {variant:?}", e.name);
        }
    }
}

#[test]
fn trefoil_reduced_plus_is_thin() {
    let g = common::tait("[[1,5,2,4],[3,1,4,6],[5,3,6,2]]");
    let st = build_st_complex(&g, StVariant::ReducedPlus).unwrap();
    assert_eq!(st.generators.len(), 3);
    assert!(st.complex.diff.iter().all(|d| d.is_empty()));
    // Each tree's component of the reduced complex has one critical cell.
    let km = KhovanovMatching::new(&g, Variant::ReducedPlus, Algebra::Khovanov);
    let cube = build_khovanov_complex(&g, Variant::ReducedPlus).unwrap();
    let t2 = km
        .trees
        .iter()
        .position(|t| t.tree.labels(&g) == vec![1, 2])
        .unwrap();
    let cells: Vec<EnhancedState> = cube
        .states
        .iter()
        .copied()
        .filter(|s| km.tree_of(s.bmask) == t2)
        .collect();
    let crit = cells
        .iter()
        .filter(|s| km.partner(s) == Partner::Critical)
        .count();
    let ups = cells
        .iter()
        .filter(|s| matches!(km.partner(s), Partner::Up(_)))
        .count();
    assert_eq!(crit, 1);
    assert_eq!(cells.len(), 2 * ups + 1);
    assert_eq!(km.trees[t2].matching_word.ascii(), "L2 L1");
}

#[test]
fn morse_complex_matches_spanning_tree_complex() {
    for e in Corpus::bundled().up_to(6) {
        let g = checkerboard_and_tait(&e.diagram().unwrap(), None).unwrap();
        let km = KhovanovMatching::new(&g, Variant::Unreduced, Algebra::Khovanov);
        let cube = build_khovanov_complex(&g, Variant::Unreduced).unwrap();
        let (h, m) = explicit(&km, &cube.states);
        let (crit, mh) = morse_differential(&h, &m).unwrap();
        let mut morse = as_bigraded(&mh);
        for (k, gen) in morse.gens.iter_mut().enumerate() {
            gen.j = cube.complex.gens[crit[k]].j;
        }
        let st = build_st_complex(&g, StVariant::Unreduced).unwrap();
        assert_eq!(
            homology_of(&morse).unwrap(),
            homology_of(&st.complex).unwrap(),
            "{}",
            e.name
        );
        assert_eq!(
            homology_of(&morse).unwrap(),
            homology_of(&cube.complex).unwrap(),
            "{}",
            e.name
        );
    }
}

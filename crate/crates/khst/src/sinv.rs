//! Rasmussen's s-invariant from the orientation-preserving spanning tree.
//!
//! An edge of the Tait graph is *red* when it belongs to the spanning
//! subgraph of the oriented resolution, equivalently when its crossing's
//! writhe sign agrees with its Tait sign.  A spanning tree `𝔗ₒ` built from a
//! maximal red forest, completed by black edges, together with the
//! four-block edge order
//! `red ∉ 𝔗ₒ < black ∈ 𝔗ₒ < red ∈ 𝔗ₒ < black ∉ 𝔗ₒ`, has the oriented
//! resolution as its critical resolution.  Its two generators `𝔗ₒ^±` are
//! Lee cycles whose filtration levels average to `s`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cube::{
    apply_differential, build_lee_complex, oriented_resolution_generator, Algebra, Chain,
    CubeError, EnhancedState, StateSpace, Variant,
};
use crate::diagram::{dual_tait, TaitGraph};
use crate::homology::{filtered_homology_levels, HomologyError};
use crate::morse::{MorseEngine, MorseError};
use crate::stc::{build_st_complex, KhovanovMatching, StComplex, StVariant, StcError};
use crate::trees::{activities_by_edge, critical_bmask, SpanningTree, UnionFind};

/// Errors raised by s-invariant computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SinvError {
    /// The diagram has more than one component.
    #[error("the diagram has {0} components; the s-invariant is computed for knots")]
    NotAKnot(usize),
    /// The diagram carries no orientation.
    #[error("the diagram is not oriented")]
    MissingOrientation,
    /// A structural property of the orientation tree failed.
    #[error("orientation tree check failed: {0}")]
    ObservationViolated(String),
    /// The filtered class vanished in homology.
    #[error("the class of {0} is zero in Lee homology")]
    VanishingClass(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Stc(#[from] StcError),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}

/// The orientation-preserving tree with its induced edge order.
#[derive(Debug, Clone)]
pub struct OrientationTree {
    /// The Tait graph carrying the four-block edge order.
    pub graph: TaitGraph,
    pub tree: SpanningTree,
    /// Red classification per edge.
    pub red: Vec<bool>,
    /// Edge indices from smallest to largest.
    pub order: Vec<usize>,
    /// `𝔗ₒ⁺` and `𝔗ₒ⁻` as enhanced states.
    pub plus: EnhancedState,
    pub minus: EnhancedState,
}

/// Red classification: the edge lies in the oriented resolution's subgraph.
pub fn red_edges(g: &TaitGraph) -> Result<Vec<bool>, SinvError> {
    let ob = g.oriented_bmask().ok_or(SinvError::MissingOrientation)?;
    Ok((0..g.n_edges()).map(|e| g.in_subgraph(e, ob)).collect())
}

/// Spanning forest keeping the listed edges greedily in order (on top of `uf`).
fn keep_forest(
    g: &TaitGraph,
    uf: &mut UnionFind,
    edges: impl Iterator<Item = usize>,
    tree: &mut u64,
) {
    for e in edges {
        let (a, b) = g.ends(e);
        if uf.union(a, b) {
            *tree |= 1 << e;
        }
    }
}

/// Build `𝔗ₒ`: a red spanning forest keeping negative red edges over
/// positive ones (positive edges are removed first), completed by black
/// edges with the same preference; then the four-block edge order.
/// Checks the parity observations and the activity pattern.
pub fn build_orientation_tree(g: &TaitGraph) -> Result<OrientationTree, SinvError> {
    if g.n_components() != 1 {
        return Err(SinvError::NotAKnot(g.n_components()));
    }
    let red = red_edges(g)?;
    check_observations(g, &red)?;
    let ne = g.n_edges();
    let rd = &red;
    let class = |want_red: bool, sign: i8| {
        (0..ne).filter(move |&e| rd[e] == want_red && g.edge(e).sign == sign)
    };
    let mut uf = UnionFind::new(g.n_vertices());
    let mut tree = 0u64;
    keep_forest(g, &mut uf, class(true, -1).chain(class(true, 1)), &mut tree);
    keep_forest(
        g,
        &mut uf,
        class(false, -1).chain(class(false, 1)),
        &mut tree,
    );
    let t = SpanningTree { edges: tree };
    let in_t = |e: usize| tree >> e & 1 == 1;
    let mut order: Vec<usize> = (0..ne).filter(|&e| red[e] && !in_t(e)).collect();
    order.extend((0..ne).filter(|&e| !red[e] && in_t(e)));
    order.extend((0..ne).filter(|&e| red[e] && in_t(e)));
    order.extend((0..ne).filter(|&e| !red[e] && !in_t(e)));
    let og = g.with_order(&order);
    // Activity pattern.
    let acts = activities_by_edge(&og, &t);
    for e in 0..ne {
        let a = acts[e];
        let expect_live = red[e] != in_t(e);
        if a.live != expect_live {
            return Err(SinvError::ObservationViolated(format!(
                "edge {} ({}, {}) has activity {}",
                e + 1,
                if red[e] { "red" } else { "black" },
                if in_t(e) {
                    "in the tree"
                } else {
                    "outside the tree"
                },
                a.ascii()
            )));
        }
    }
    let crit = critical_bmask(&og, &t);
    let ob = og.oriented_bmask().ok_or(SinvError::MissingOrientation)?;
    if crit != ob {
        return Err(SinvError::ObservationViolated(
            "the critical resolution of the tree is not the oriented resolution".into(),
        ));
    }
    let km = KhovanovMatching::new(&og, Variant::Unreduced, Algebra::Khovanov);
    let k = km
        .trees
        .iter()
        .position(|td| td.tree == t)
        .expect("the tree is spanning");
    let (plus, minus) = (
        km.trees[k].critical_cell(true),
        km.trees[k].critical_cell(false),
    );
    Ok(OrientationTree {
        graph: og,
        tree: t,
        red,
        order,
        plus,
        minus,
    })
}

/// Parity observations: every vertex meets an even number of red edge-ends
/// and every face meets an even number of black edge-ends, so in particular
/// no red edge is a bridge of the red subgraph.
fn check_observations(g: &TaitGraph, red: &[bool]) -> Result<(), SinvError> {
    let ne = g.n_edges();
    let mut deg = vec![0usize; g.n_vertices()];
    for e in (0..ne).filter(|&e| red[e]) {
        let (a, b) = g.ends(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    if let Some(v) = deg.iter().position(|d| d % 2 == 1) {
        return Err(SinvError::ObservationViolated(format!(
            "vertex {v} meets an odd number of red edges"
        )));
    }
    let d = dual_tait(g);
    let mut fdeg = vec![0usize; d.n_vertices()];
    for e in (0..ne).filter(|&e| !red[e]) {
        let (a, b) = d.ends(e);
        fdeg[a] += 1;
        fdeg[b] += 1;
    }
    if let Some(f) = fdeg.iter().position(|d| d % 2 == 1) {
        return Err(SinvError::ObservationViolated(format!(
            "face {f} meets an odd number of black edges"
        )));
    }
    // Even degrees imply every red edge lies on a red cycle; check directly.
    for e in (0..ne).filter(|&e| red[e]) {
        let mut uf = UnionFind::new(g.n_vertices());
        for f in (0..ne).filter(|&f| red[f] && f != e) {
            let (a, b) = g.ends(f);
            uf.union(a, b);
        }
        let (a, b) = g.ends(e);
        if uf.find(a) != uf.find(b) {
            return Err(SinvError::ObservationViolated(format!(
                "red edge {} is not on a red cycle",
                e + 1
            )));
        }
    }
    Ok(())
}

/// Outcome of [`verify_cycle`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCheck {
    pub ok: bool,
    /// First nonzero incidence `(source, target, coefficient)`, if any.
    pub offending: Option<(String, String, i64)>,
    pub i_plus: i64,
    pub i_minus: i64,
}

/// Check that `𝔗ₒ^±` are cycles of the Lee spanning-tree complex in degree 0.
pub fn verify_cycle(ot: &OrientationTree, st: &StComplex) -> CycleCheck {
    let mut check = CycleCheck {
        ok: true,
        offending: None,
        i_plus: 0,
        i_minus: 0,
    };
    let k = st
        .trees
        .iter()
        .position(|td| td.tree == ot.tree)
        .expect("tree of the complex");
    for plus in [true, false] {
        let Some(a) = st.index_of(k, plus) else {
            continue;
        };
        let i = st.generators[a].i;
        if plus {
            check.i_plus = i;
        } else {
            check.i_minus = i;
        }
        if i != 0 {
            check.ok = false;
        }
        if let Some(&(t, c)) = st.complex.diff[a].first() {
            check.ok = false;
            if check.offending.is_none() {
                check.offending = Some((
                    st.complex.gens[a].name.clone(),
                    st.complex.gens[t].name.clone(),
                    c,
                ));
            }
        }
    }
    check
}

/// Full s-invariant report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SInvariantReport {
    /// Filtration level of `[𝔗ₒ⁺]`.
    pub s_st_plus: i64,
    /// Filtration level of `[𝔗ₒ⁻]`.
    pub s_st_minus: i64,
    pub s: i64,
    pub j_plus: i64,
    /// `j(𝔗ₒ⁺) − 1`.
    pub lower_bound: i64,
    /// The Seifert-graph expression of the same bound.
    pub seifert_bound: i64,
    /// Orientation tree edges (1-based crossing ids).
    pub tree: Vec<usize>,
    /// Four-block edge order (1-based crossing ids).
    pub edge_order: Vec<usize>,
}

/// `s(K)` from the Lee spanning-tree complex in the `𝔗ₒ` order.
pub fn s_invariant(g: &TaitGraph) -> Result<SInvariantReport, SinvError> {
    let ot = build_orientation_tree(g)?;
    let st = build_st_complex(&ot.graph, StVariant::Lee)?;
    let check = verify_cycle(&ot, &st);
    if !check.ok {
        return Err(SinvError::ObservationViolated(format!(
            "𝔗ₒ is not a Lee cycle: {:?}",
            check.offending
        )));
    }
    let k = st
        .trees
        .iter()
        .position(|td| td.tree == ot.tree)
        .expect("tree of the complex");
    let a = st.index_of(k, true).expect("T+");
    let b = st.index_of(k, false).expect("T-");
    let classes = [BTreeMap::from([(a, 1)]), BTreeMap::from([(b, 1)])];
    let levels = filtered_homology_levels(&st.complex, &classes)?;
    let lp = levels[0].ok_or_else(|| SinvError::VanishingClass("𝔗ₒ⁺".into()))?;
    let lm = levels[1].ok_or_else(|| SinvError::VanishingClass("𝔗ₒ⁻".into()))?;
    let j_plus = st.generators[a].j;
    Ok(SInvariantReport {
        s_st_plus: lp,
        s_st_minus: lm,
        s: (lp + lm) / 2,
        j_plus,
        lower_bound: j_plus - 1,
        seifert_bound: seifert_bound(g)?,
        tree: ot
            .tree
            .labels(g)
            .iter()
            .map(|&l| g.order()[l - 1] + 1)
            .collect(),
        edge_order: ot.order.iter().map(|&e| e + 1).collect(),
    })
}

/// Independent oracle: filtration levels of `𝔰ₒ ± 𝔰ₒ̄` in the Lee cube complex.
/// Returns `(level of 𝔰ₒ + 𝔰ₒ̄, level of 𝔰ₒ − 𝔰ₒ̄, s)`.
pub fn s_invariant_cube(g: &TaitGraph) -> Result<(i64, i64, i64), SinvError> {
    if g.n_components() != 1 {
        return Err(SinvError::NotAKnot(g.n_components()));
    }
    let cc = build_lee_complex(g)?;
    let index: std::collections::HashMap<EnhancedState, usize> =
        cc.states.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let so = oriented_resolution_generator(g, false)?;
    let sob = oriented_resolution_generator(g, true)?;
    let combine = |sign: i64| -> BTreeMap<usize, i64> {
        let mut m: BTreeMap<usize, i64> = BTreeMap::new();
        for (s, &c) in &so {
            *m.entry(index[s]).or_insert(0) += c;
        }
        for (s, &c) in &sob {
            *m.entry(index[s]).or_insert(0) += sign * c;
        }
        m.retain(|_, c| *c != 0);
        m
    };
    let levels = filtered_homology_levels(&cc.complex, &[combine(1), combine(-1)])?;
    let lp = levels[0].ok_or_else(|| SinvError::VanishingClass("𝔰ₒ + 𝔰ₒ̄".into()))?;
    let lm = levels[1].ok_or_else(|| SinvError::VanishingClass("𝔰ₒ − 𝔰ₒ̄".into()))?;
    Ok((lp, lm, (lp + lm) / 2))
}

/// `w(D) − #nodes(T(D)) + 2·#components(T⁺(D)) − 1` on the Seifert graph
/// `T(D)` (Seifert circles joined by crossings) and its positive part `T⁺(D)`.
pub fn seifert_bound(g: &TaitGraph) -> Result<i64, SinvError> {
    let w = g.writhe().ok_or(SinvError::MissingOrientation)?;
    let signs = g.writhe_signs().ok_or(SinvError::MissingOrientation)?;
    let ob = g.oriented_bmask().ok_or(SinvError::MissingOrientation)?;
    let r = g.resolve(ob);
    let nodes = r.n_circles;
    let mut uf = UnionFind::new(nodes);
    for e in (0..g.n_edges()).filter(|&e| signs[e] > 0) {
        let s = g.edge(e).slots;
        // Positive crossings are A-smoothed in the oriented resolution.
        uf.union(
            r.circle_of_arc[s[0]] as usize,
            r.circle_of_arc[s[2]] as usize,
        );
    }
    let comps = (0..nodes).filter(|&c| uf.find(c) == c).count() as i64;
    Ok(w - nodes as i64 + 2 * comps - 1)
}

/// The lower bound `j(𝔗ₒ⁺) − 1`, checked against [`seifert_bound`].
pub fn lobb_bound(g: &TaitGraph) -> Result<i64, SinvError> {
    let ot = build_orientation_tree(g)?;
    let sp = StateSpace::new(&ot.graph);
    let b = sp.j_of(&ot.plus) - 1;
    let sb = seifert_bound(g)?;
    if b != sb {
        return Err(SinvError::ObservationViolated(format!(
            "j(𝔗ₒ⁺) − 1 = {b} but the Seifert-graph bound is {sb}"
        )));
    }
    Ok(b)
}

/// The distinguished cycle `φ = f(𝔗ₒ⁺)` in the unreduced Khovanov cube
/// complex.  Checks that `φ` is supported on the oriented resolution and is
/// a cycle.
pub fn distinguished_cycle(ot: &OrientationTree) -> Result<Chain, SinvError> {
    let km = KhovanovMatching::new(&ot.graph, Variant::Unreduced, Algebra::Khovanov);
    let mut eng = MorseEngine::new(&km);
    let phi = eng.f(ot.plus)?;
    if phi.keys().any(|s| s.bmask != ot.plus.bmask) {
        return Err(SinvError::ObservationViolated(
            "f(𝔗ₒ⁺) leaves the oriented resolution".into(),
        ));
    }
    let d = apply_differential(&km.sp, &phi, Algebra::Khovanov, Variant::Unreduced);
    if !d.is_empty() {
        return Err(SinvError::ObservationViolated(
            "f(𝔗ₒ⁺) is not a cycle".into(),
        ));
    }
    Ok(phi)
}

/// `g(𝔰ₒ ± 𝔰ₒ̄)` in the Lee spanning-tree complex of the `𝔗ₒ` order, as
/// coefficients on `(𝔗ₒ⁺, 𝔗ₒ⁻)`, with any other critical cells listed.
pub fn project_oriented_generators(
    ot: &OrientationTree,
) -> Result<[Vec<(EnhancedState, i64)>; 2], SinvError> {
    let km = KhovanovMatching::new(&ot.graph, Variant::Unreduced, Algebra::Lee);
    let so = oriented_resolution_generator(&ot.graph, false)?;
    let sob = oriented_resolution_generator(&ot.graph, true)?;
    let mut eng = MorseEngine::new(&km);
    let mut out = [Vec::new(), Vec::new()];
    for (k, sign) in [1i64, -1].into_iter().enumerate() {
        let mut v = so.clone();
        for (s, &c) in &sob {
            crate::cube::chain_add(&mut v, *s, sign * c);
        }
        out[k] = eng.g_chain(&v)?.into_iter().collect();
    }
    Ok(out)
}

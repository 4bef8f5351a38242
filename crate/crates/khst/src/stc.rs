//! The spanning-tree complex.
//!
//! Every resolution belongs to exactly one twisted unknot `U(T)`; on the
//! enhanced states of `U(T)` the inductive matching driven by the twist tree
//! `G(T)` leaves exactly the critical cells `T⁺` (dotted circle `1`) and
//! `T⁻` (dotted circle `x`).  The spanning-tree differential is the Morse
//! differential between these cells, evaluated lazily on the cube.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::cube::{
    filter_variant, Algebra, BigradedComplex, Chain, EnhancedState, Generator, StateSpace, Variant,
};
use crate::diagram::{Resolution, TaitGraph};
use crate::morse::{MorseEngine, MorseError, MorseSystem, Partner};
use crate::trees::{
    activity_word, build_twist_tree, crossing_circles, enumerate_spanning_trees, matching_word,
    tree_of_resolution, ActivityWord, MatchingWord, SpanningTree, TwistTree,
};

/// Errors raised by spanning-tree computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StcError {
    /// The diagram is not alternating (Tait edges of both signs).
    #[error("the diagram is not alternating")]
    NotAlternating,
    /// The Tait graph has no cycle of length at least three.
    #[error("no cycle of length at least three: {0}")]
    TooSmall(String),
    /// No chain connects the two trees.
    #[error("no chain from T{0} to T{1}")]
    NoChain(usize, usize),
    /// Morse engine failure.
    #[error(transparent)]
    Morse(#[from] MorseError),
}

/// Which spanning-tree complex to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StVariant {
    ReducedPlus,
    ReducedMinus,
    Unreduced,
    /// Unreduced Lee complex over ℚ (integral entries; `j` is a filtration).
    Lee,
}

impl StVariant {
    /// Parse `reduced_plus`, `reduced_minus`, `unreduced`, `lee`.
    pub fn parse(s: &str) -> Option<StVariant> {
        match s {
            "lee" => Some(StVariant::Lee),
            other => Variant::parse(other).map(StVariant::from),
        }
    }

    /// Cube variant and algebra.
    pub fn cube(&self) -> (Variant, Algebra) {
        match self {
            StVariant::ReducedPlus => (Variant::ReducedPlus, Algebra::Khovanov),
            StVariant::ReducedMinus => (Variant::ReducedMinus, Algebra::Khovanov),
            StVariant::Unreduced => (Variant::Unreduced, Algebra::Khovanov),
            StVariant::Lee => (Variant::Unreduced, Algebra::Lee),
        }
    }
}

impl From<Variant> for StVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::ReducedPlus => StVariant::ReducedPlus,
            Variant::ReducedMinus => StVariant::ReducedMinus,
            Variant::Unreduced => StVariant::Unreduced,
        }
    }
}

/// Per-tree data driving the matching.
#[derive(Debug, Clone)]
pub struct TreeData {
    pub tree: SpanningTree,
    pub word: ActivityWord,
    pub twist: TwistTree,
    pub matching_word: MatchingWord,
    /// Representative arc of every circle of the critical state.
    pub reps: Vec<usize>,
    /// Labels of the non-root critical circles (`x` bits).
    pub crit_xmask: u64,
}

impl TreeData {
    fn new(g: &TaitGraph, t: SpanningTree) -> TreeData {
        let twist = build_twist_tree(g, &t);
        let word = activity_word(g, &t);
        let mw = matching_word(g, &twist);
        let mut reps = vec![usize::MAX; twist.n_vertices];
        for (a, &c) in twist.circle_of_arc.iter().enumerate() {
            if reps[c as usize] == usize::MAX {
                reps[c as usize] = a;
            }
        }
        let mut crit_xmask = 0u64;
        for st in &twist.steps {
            if !twist.edges[st.twist_edge].negative {
                crit_xmask |= 1 << st.leaf;
            }
        }
        TreeData {
            tree: t,
            word,
            twist,
            matching_word: mw,
            reps,
            crit_xmask,
        }
    }

    /// Critical cell `T⁺` (`plus`) or `T⁻`.
    pub fn critical_cell(&self, plus: bool) -> EnhancedState {
        let mut x = self.crit_xmask;
        if !plus {
            x |= 1 << self.twist.root;
        }
        EnhancedState {
            bmask: self.twist.critical_bmask,
            xmask: x,
        }
    }
}

/// The cube complex of a Tait graph together with the union of the
/// per-tree matchings, as a lazy [`MorseSystem`].
pub struct KhovanovMatching<'g> {
    pub sp: StateSpace<'g>,
    pub trees: Vec<TreeData>,
    tree_index: HashMap<u64, usize>,
    pub variant: Variant,
    pub algebra: Algebra,
    res_cache: RefCell<HashMap<u64, Resolution>>,
    tree_cache: RefCell<HashMap<u64, usize>>,
}

impl<'g> KhovanovMatching<'g> {
    /// Build the matching for a variant and algebra.
    pub fn new(g: &'g TaitGraph, variant: Variant, algebra: Algebra) -> KhovanovMatching<'g> {
        let trees: Vec<TreeData> = enumerate_spanning_trees(g)
            .into_iter()
            .map(|t| TreeData::new(g, t))
            .collect();
        let tree_index = trees
            .iter()
            .enumerate()
            .map(|(k, td)| (td.tree.edges, k))
            .collect();
        KhovanovMatching {
            sp: StateSpace::new(g),
            trees,
            tree_index,
            variant,
            algebra,
            res_cache: RefCell::new(HashMap::new()),
            tree_cache: RefCell::new(HashMap::new()),
        }
    }

    /// The Tait graph.
    pub fn graph(&self) -> &'g TaitGraph {
        self.sp.g
    }

    fn resolve(&self, b: u64) -> Resolution {
        if let Some(r) = self.res_cache.borrow().get(&b) {
            return r.clone();
        }
        let r = self.sp.resolve(b);
        self.res_cache.borrow_mut().insert(b, r.clone());
        r
    }

    /// Index of the tree whose twisted unknot contains resolution `b`.
    pub fn tree_of(&self, b: u64) -> usize {
        if let Some(&k) = self.tree_cache.borrow().get(&b) {
            return k;
        }
        let t = tree_of_resolution(self.sp.g, b);
        let k = self.tree_index[&t.edges];
        self.tree_cache.borrow_mut().insert(b, k);
        k
    }

    /// Relabel a state across crossing `e` (merge or split), placing label
    /// `leaf_x` on the circle through arc `leaf_arc` when splitting.
    fn flip(&self, s: &EnhancedState, e: usize, leaf_arc: usize, leaf_x: bool) -> EnhancedState {
        let g = self.sp.g;
        let r1 = self.resolve(s.bmask);
        let b2 = s.bmask ^ (1 << e);
        let r2 = self.resolve(b2);
        let (c1, c2) = crossing_circles(g, &r1.circle_of_arc, s.bmask, e);
        let mut reps = vec![usize::MAX; r1.n_circles];
        for (a, &c) in r1.circle_of_arc.iter().enumerate() {
            if reps[c as usize] == usize::MAX {
                reps[c as usize] = a;
            }
        }
        let mut x = 0u64;
        for (c, &a) in reps.iter().enumerate() {
            if c != c1 && c != c2 && s.xmask >> c & 1 == 1 {
                x |= 1 << r2.circle_of_arc[a];
            }
        }
        if c1 == c2 {
            // Split: the leaf gets `leaf_x`, the other piece keeps the label of c1.
            let leaf = r2.circle_of_arc[leaf_arc] as usize;
            let (d1, d2) = crossing_circles(g, &r2.circle_of_arc, b2, e);
            let other = if d1 == leaf { d2 } else { d1 };
            if leaf_x {
                x |= 1 << leaf;
            }
            if s.xmask >> c1 & 1 == 1 {
                x |= 1 << other;
            }
        } else {
            // Merge: the merged circle takes the label of the non-leaf piece.
            let leaf = r1.circle_of_arc[leaf_arc] as usize;
            let other = if c1 == leaf { c2 } else { c1 };
            if s.xmask >> other & 1 == 1 {
                x |= 1 << r2.circle_of_arc[leaf_arc];
            }
        }
        EnhancedState {
            bmask: b2,
            xmask: x,
        }
    }

    /// Critical cells of all trees: `(tree, plus, cell)`, restricted to the variant.
    pub fn critical_cells(&self) -> Vec<(usize, bool, EnhancedState)> {
        let mut out = Vec::new();
        for (k, td) in self.trees.iter().enumerate() {
            for plus in [true, false] {
                if self.variant.admits(!plus) {
                    out.push((k, plus, td.critical_cell(plus)));
                }
            }
        }
        out
    }
}

impl MorseSystem for KhovanovMatching<'_> {
    type Cell = EnhancedState;

    fn degree(&self, c: &EnhancedState) -> i64 {
        self.sp.i(c.bmask)
    }

    fn differential(&self, c: &EnhancedState) -> Vec<(EnhancedState, i64)> {
        let mut acc: BTreeMap<EnhancedState, i64> = BTreeMap::new();
        for (t, v) in filter_variant(
            &self.sp,
            self.sp.differential(c, self.algebra),
            self.variant,
        ) {
            *acc.entry(t).or_insert(0) += v;
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    fn partner(&self, s: &EnhancedState) -> Partner<EnhancedState> {
        let td = &self.trees[self.tree_of(s.bmask)];
        let r = self.resolve(s.bmask);
        for st in &td.twist.steps {
            let te = &td.twist.edges[st.twist_edge];
            let e = te.edge;
            let leaf_arc = td.reps[st.leaf];
            let partner_x = te.negative; // label of v_k in the split partner
            let merged = (s.bmask ^ td.twist.critical_bmask) >> e & 1 == 1;
            if merged {
                let p = self.flip(s, e, leaf_arc, partner_x);
                return if te.negative {
                    Partner::Up(p)
                } else {
                    Partner::Down(p)
                };
            }
            let leaf_is_x = s.xmask >> r.circle_of_arc[leaf_arc] & 1 == 1;
            if leaf_is_x == partner_x {
                let p = self.flip(s, e, leaf_arc, false);
                return if te.negative {
                    Partner::Down(p)
                } else {
                    Partner::Up(p)
                };
            }
        }
        Partner::Critical
    }
}

/// A generator `T^±` of the spanning-tree complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StGenerator {
    /// Tree index in enumeration order (0-based).
    pub tree: usize,
    /// `T⁺` (dotted circle `1`) or `T⁻`.
    pub plus: bool,
    pub i: i64,
    pub j: i64,
    /// The critical enhanced state.
    pub cell: EnhancedState,
}

/// The spanning-tree complex.
#[derive(Debug, Clone)]
pub struct StComplex {
    pub variant: StVariant,
    pub trees: Vec<TreeData>,
    pub generators: Vec<StGenerator>,
    /// Same generator order as `generators`.
    pub complex: BigradedComplex,
}

impl StComplex {
    /// Index of generator `T_tree^±`.
    pub fn index_of(&self, tree: usize, plus: bool) -> Option<usize> {
        self.generators
            .iter()
            .position(|g| g.tree == tree && g.plus == plus)
    }

    /// Incidence `[T_from : T_to]` of the differential.
    pub fn incidence(&self, from: usize, to: usize) -> i64 {
        self.complex.diff[from]
            .iter()
            .find(|&&(t, _)| t == to)
            .map_or(0, |&(_, c)| c)
    }

    /// Incidence list, e.g. `T3+ -> T7- (2)`, as JSON.
    pub fn to_json(&self, g: &TaitGraph) -> serde_json::Value {
        let gens: Vec<serde_json::Value> = self
            .generators
            .iter()
            .map(|x| {
                serde_json::json!({
                    "tree": x.tree + 1,
                    "sign": if x.plus { "+" } else { "-" },
                    "i": x.i,
                    "j": x.j,
                    "edges": self.trees[x.tree].tree.labels(g),
                })
            })
            .collect();
        let mut inc = Vec::new();
        for (k, col) in self.complex.diff.iter().enumerate() {
            let terms: Vec<serde_json::Value> = col
                .iter()
                .map(|&(t, c)| serde_json::json!({"to": self.complex.gens[t].name, "coefficient": c}))
                .collect();
            inc.push(serde_json::json!({"from": self.complex.gens[k].name, "terms": terms}));
        }
        serde_json::json!({"generators": gens, "incidences": inc})
    }
}

/// Generator name `T{k}±` with 1-based tree index.
pub fn generator_name(tree: usize, plus: bool) -> String {
    format!("T{}{}", tree + 1, if plus { '+' } else { '-' })
}

/// Build the spanning-tree complex via the Morse engine.
pub fn build_st_complex(g: &TaitGraph, variant: StVariant) -> Result<StComplex, StcError> {
    let (v, a) = variant.cube();
    let km = KhovanovMatching::new(g, v, a);
    let crit = km.critical_cells();
    let pos: HashMap<EnhancedState, usize> =
        crit.iter().enumerate().map(|(k, c)| (c.2, k)).collect();
    let mut eng = MorseEngine::new(&km);
    let mut gens = Vec::with_capacity(crit.len());
    let mut generators = Vec::with_capacity(crit.len());
    let mut diff = Vec::with_capacity(crit.len());
    for &(tree, plus, cell) in &crit {
        debug_assert_eq!(km.partner(&cell), Partner::Critical);
        let i = km.sp.i(cell.bmask);
        let j = km.sp.j_of(&cell);
        gens.push(Generator {
            i,
            j,
            name: generator_name(tree, plus),
        });
        generators.push(StGenerator {
            tree,
            plus,
            i,
            j,
            cell,
        });
        let d = eng.differential(cell)?;
        let col: Vec<(usize, i64)> = d
            .into_iter()
            .map(|(t, c)| {
                (
                    *pos.get(&t)
                        .expect("Morse differential lands on critical cells"),
                    c,
                )
            })
            .collect();
        diff.push(col);
    }
    Ok(StComplex {
        variant,
        trees: km.trees.clone(),
        generators,
        complex: BigradedComplex {
            gens,
            diff,
            filtered: variant == StVariant::Lee,
        },
    })
}

/// `g` of a cube chain, expressed on ST generators (indices into `crit`).
pub fn project_chain(
    km: &KhovanovMatching<'_>,
    ch: &Chain,
) -> Result<BTreeMap<(usize, bool), i64>, StcError> {
    let crit = km.critical_cells();
    let pos: HashMap<EnhancedState, (usize, bool)> =
        crit.iter().map(|c| (c.2, (c.0, c.1))).collect();
    let mut eng = MorseEngine::new(km);
    let v: BTreeMap<EnhancedState, i64> = ch.clone();
    let out = eng.g_chain(&v)?;
    Ok(out.into_iter().map(|(s, c)| (pos[&s], c)).collect())
}

/// The families of subgraphs of `G(T)` describing alternating paths inside
/// one twisted unknot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SubpathKind {
    /// Positive-twist segments (`L̄`, `l`) away from the root, starting at a `1`
    /// of `T⁺`: states reached downwards from `T⁺`.
    Negative,
    /// Negative-twist segments (`L`, `l̄`) away from the root, starting at an
    /// `x` of `T⁺`: states leading upwards into `T⁺`.
    Positive,
    /// As [`SubpathKind::Negative`], segments may start at the root.
    RootedNegative,
    /// As [`SubpathKind::Positive`] but into `T⁻`; segments may start at the root.
    RootedPositive,
    /// Rooted positive segments into `T⁺` with either label at the start (Lee).
    GeneralizedRootedPositive,
}

impl SubpathKind {
    /// Parse `negative`, `positive`, `rooted_negative`, `rooted_positive`,
    /// `generalized_rooted_positive`.
    pub fn parse(s: &str) -> Option<SubpathKind> {
        match s {
            "negative" => Some(SubpathKind::Negative),
            "positive" => Some(SubpathKind::Positive),
            "rooted_negative" => Some(SubpathKind::RootedNegative),
            "rooted_positive" => Some(SubpathKind::RootedPositive),
            "generalized_rooted_positive" => Some(SubpathKind::GeneralizedRootedPositive),
            _ => None,
        }
    }

    fn rooted(&self) -> bool {
        !matches!(self, SubpathKind::Negative | SubpathKind::Positive)
    }

    /// Edges allowed in the segments are negative twists.
    fn uses_negative_twists(&self) -> bool {
        !matches!(self, SubpathKind::Negative | SubpathKind::RootedNegative)
    }

    /// The critical cell the subpaths are measured against is `T⁺`.
    pub fn anchored_at_plus(&self) -> bool {
        *self != SubpathKind::RootedPositive
    }

    /// Required label (`x`?) of the start vertex in the anchor cell, if fixed.
    fn start_label(&self) -> Option<bool> {
        match self {
            SubpathKind::Negative | SubpathKind::RootedNegative => Some(false),
            SubpathKind::Positive | SubpathKind::RootedPositive => Some(true),
            SubpathKind::GeneralizedRootedPositive => None,
        }
    }
}

/// A subpath: vertex-disjoint downward segments of `G(T)`, each listed from
/// its initial vertex (closest to the root) to its last vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subpath {
    pub components: Vec<Vec<usize>>,
}

impl Subpath {
    /// Number of edges.
    pub fn n_edges(&self) -> usize {
        self.components.iter().map(|c| c.len() - 1).sum()
    }
}

/// Parent pointers of `G(T)` rooted at the dotted circle: `(parent, twist edge)`.
fn parents(td: &TreeData) -> Vec<Option<(usize, usize)>> {
    let mut par = vec![None; td.twist.n_vertices];
    // Leaf removal records each non-root vertex with its parent.
    for st in &td.twist.steps {
        par[st.leaf] = Some((st.parent, st.twist_edge));
    }
    par
}

/// Enumerate the subpaths of `G(T)` of the given kind, including the empty one.
pub fn subpath_census(td: &TreeData, kind: SubpathKind) -> Vec<Subpath> {
    let par = parents(td);
    let anchor = td.critical_cell(kind.anchored_at_plus());
    let label = |v: usize| anchor.xmask >> v & 1 == 1;
    // Allowed child edges of each vertex.
    let nv = td.twist.n_vertices;
    let allowed: Vec<Option<(usize, usize)>> = par
        .iter()
        .map(|p| p.filter(|&(_, te)| td.twist.edges[te].negative == kind.uses_negative_twists()))
        .collect();
    // Choose for every vertex at most one allowed child edge to include.
    let children: Vec<Vec<usize>> = (0..nv)
        .map(|v| {
            (0..nv)
                .filter(|&c| allowed[c].is_some_and(|(p, _)| p == v))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![None::<usize>; nv];
    fn rec(
        v: usize,
        nv: usize,
        children: &[Vec<usize>],
        choice: &mut Vec<Option<usize>>,
        emit: &mut dyn FnMut(&[Option<usize>]),
    ) {
        if v == nv {
            emit(choice);
            return;
        }
        choice[v] = None;
        rec(v + 1, nv, children, choice, emit);
        for &c in &children[v] {
            choice[v] = Some(c);
            rec(v + 1, nv, children, choice, emit);
        }
        choice[v] = None;
    }
    let mut emit = |choice: &[Option<usize>]| {
        let mut has_parent = vec![false; nv];
        for c in choice.iter().flatten() {
            has_parent[*c] = true;
        }
        let mut comps = Vec::new();
        for v in 0..nv {
            if has_parent[v] || choice[v].is_none() {
                continue;
            }
            if v == td.twist.root && !kind.rooted() {
                return;
            }
            if let Some(l) = kind.start_label() {
                if label(v) != l {
                    return;
                }
            }
            let mut seg = vec![v];
            let mut cur = v;
            while let Some(c) = choice[cur] {
                seg.push(c);
                cur = c;
            }
            comps.push(seg);
        }
        out.push(Subpath { components: comps });
    };
    rec(0, nv, &children, &mut choice, &mut emit);
    out
}

/// The enhanced state of the critical resolution described by a subpath:
/// on every segment the labels of the initial and last vertices are toggled.
pub fn subpath_state(
    km: &KhovanovMatching<'_>,
    tree: usize,
    kind: SubpathKind,
    sp: &Subpath,
) -> EnhancedState {
    let td = &km.trees[tree];
    let mut s = td.critical_cell(kind.anchored_at_plus());
    let r = km.resolve(s.bmask);
    for comp in &sp.components {
        for v in [comp[0], comp[comp.len() - 1]] {
            s.xmask ^= 1 << r.circle_of_arc[td.reps[v]];
        }
    }
    s
}

/// States of a twisted unknot joined to its critical cell by an alternating
/// path at constant degree (including the critical cell itself).
///
/// Downward (`down = true`): paths `c → d → matched partner → d → ⋯` leaving
/// `anchor`.  Upward: states from which such a path reaches `anchor`.
pub fn alternating_states(
    km: &KhovanovMatching<'_>,
    tree: usize,
    anchor: EnhancedState,
    down: bool,
) -> std::collections::BTreeSet<EnhancedState> {
    use std::collections::BTreeSet;
    // One zig-zag step inside U(T): a → y ∈ d(a) → partner a' of y (a' ≠ a).
    let step = |a: &EnhancedState| -> Vec<EnhancedState> {
        let mut v = Vec::new();
        for (y, _) in km.differential(a) {
            if km.tree_of(y.bmask) != tree {
                continue;
            }
            if let Partner::Down(a2) = km.partner(&y) {
                if a2 != *a {
                    v.push(a2);
                }
            }
        }
        v
    };
    if down {
        let mut seen = BTreeSet::from([anchor]);
        let mut stack = vec![anchor];
        while let Some(a) = stack.pop() {
            for b in step(&a) {
                if seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        return seen;
    }
    // Upward: search backwards over the states of U(T) at the anchor's degree.
    let td = &km.trees[tree];
    let live: Vec<usize> = td.twist.edges.iter().map(|e| e.edge).collect();
    let i0 = km.sp.i(anchor.bmask);
    let mut states = Vec::new();
    for m in 0..1u64 << live.len() {
        let mut b = td.twist.critical_bmask;
        for (k, &e) in live.iter().enumerate() {
            if m >> k & 1 == 1 {
                b ^= 1 << e;
            }
        }
        if km.sp.i(b) == i0 {
            states.extend(km.sp.states_of(b, km.variant));
        }
    }
    // A state s leads up into t iff s is matched down to a with t ∈ d(a).
    let mut up = BTreeSet::from([anchor]);
    let mut stack = vec![anchor];
    let mut into: HashMap<EnhancedState, Vec<EnhancedState>> = HashMap::new();
    for s in &states {
        if let Partner::Down(a) = km.partner(s) {
            for (t, _) in km.differential(&a) {
                if t != *s && km.tree_of(t.bmask) == tree {
                    into.entry(t).or_default().push(*s);
                }
            }
        }
    }
    while let Some(t) = stack.pop() {
        if let Some(ps) = into.get(&t) {
            for &p in ps {
                if up.insert(p) {
                    stack.push(p);
                }
            }
        }
    }
    up
}

/// Path-sum breakdown of one incidence by chain of trees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceBreakdown {
    /// Total over all chains.
    pub total: i64,
    /// `(chain of tree indices, signed path count)` for chains carrying paths.
    pub per_chain: Vec<(Vec<usize>, i64)>,
    /// Number of alternating paths enumerated.
    pub n_paths: usize,
}

/// Combinatorial evaluation of incidences: explicit enumeration of
/// alternating paths, confined to the twisted unknots of the chains of the
/// generating relation and grouped by the chain they traverse.
pub struct PathCensus<'k, 'g> {
    km: &'k KhovanovMatching<'g>,
    rel: Vec<Vec<usize>>,
}

impl<'k, 'g> PathCensus<'k, 'g> {
    /// Precompute the generating relation.
    pub fn new(km: &'k KhovanovMatching<'g>) -> Self {
        let trees: Vec<SpanningTree> = km.trees.iter().map(|t| t.tree).collect();
        let rel = crate::trees::relation_graph(km.graph(), &trees);
        PathCensus { km, rel }
    }

    /// Chains from one tree to another.
    pub fn chains(&self, from: usize, to: usize) -> Vec<Vec<usize>> {
        crate::trees::enumerate_chains(&self.rel, from, to)
    }

    /// `Γ(from, to)` for critical cells `(tree, plus)`.
    ///
    /// Within a single tree (the `T⁺ → T⁻` case) the only chain is the
    /// trivial one.  Pairs without a chain give zero.
    pub fn incidence(
        &self,
        from: (usize, bool),
        to: (usize, bool),
    ) -> Result<IncidenceBreakdown, StcError> {
        let km = self.km;
        let src = km.trees[from.0].critical_cell(from.1);
        let dst = km.trees[to.0].critical_cell(to.1);
        let mut out = IncidenceBreakdown {
            total: 0,
            per_chain: Vec::new(),
            n_paths: 0,
        };
        if !km.variant.admits(!from.1)
            || !km.variant.admits(!to.1)
            || km.sp.i(dst.bmask) != km.sp.i(src.bmask) + 1
        {
            return Ok(out);
        }
        let chains = if from.0 == to.0 {
            vec![vec![from.0]]
        } else {
            self.chains(from.0, to.0)
        };
        if chains.is_empty() {
            return Ok(out);
        }
        let allowed: std::collections::BTreeSet<usize> = chains.iter().flatten().copied().collect();
        let mut sums: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
        let mut seq = vec![from.0];
        self.dfs(src, dst, 1, &allowed, &mut seq, &mut sums, &mut out.n_paths)?;
        for (chain, v) in sums {
            if v == 0 {
                continue;
            }
            if !chains.contains(&chain) {
                return Err(StcError::NoChain(chain[0] + 1, chain[chain.len() - 1] + 1));
            }
            out.total = out.total.checked_add(v).ok_or(MorseError::Overflow)?;
            out.per_chain.push((chain, v));
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        a: EnhancedState,
        dst: EnhancedState,
        w: i64,
        allowed: &std::collections::BTreeSet<usize>,
        seq: &mut Vec<usize>,
        sums: &mut BTreeMap<Vec<usize>, i64>,
        n_paths: &mut usize,
    ) -> Result<(), StcError> {
        let km = self.km;
        for (y, c) in km.differential(&a) {
            let ty = km.tree_of(y.bmask);
            if !allowed.contains(&ty) {
                continue;
            }
            let pushed = *seq.last().expect("non-empty") != ty;
            if pushed {
                seq.push(ty);
            }
            let wy = w.checked_mul(c).ok_or(MorseError::Overflow)?;
            if y == dst {
                *n_paths += 1;
                let e = sums.entry(seq.clone()).or_insert(0);
                *e = e.checked_add(wy).ok_or(MorseError::Overflow)?;
            } else if let Partner::Down(a2) = km.partner(&y) {
                if a2 != a {
                    let back = km
                        .differential(&a2)
                        .into_iter()
                        .find(|(t, _)| *t == y)
                        .map(|(_, v)| v)
                        .ok_or_else(|| MorseError::InvalidMatching(km.sp.name(&y)))?;
                    let pushed2 = *seq.last().expect("non-empty") != km.tree_of(a2.bmask);
                    if pushed2 {
                        seq.push(km.tree_of(a2.bmask));
                    }
                    self.dfs(
                        a2,
                        dst,
                        wy.checked_mul(-back).ok_or(MorseError::Overflow)?,
                        allowed,
                        seq,
                        sums,
                        n_paths,
                    )?;
                    if pushed2 {
                        seq.pop();
                    }
                }
            }
            if pushed {
                seq.pop();
            }
        }
        Ok(())
    }
}

/// `Γ(from, to)` between two generators of a spanning-tree complex, computed
/// combinatorially (see [`PathCensus`]).
pub fn incidence_combinatorial(
    g: &TaitGraph,
    variant: StVariant,
    from: &StGenerator,
    to: &StGenerator,
) -> Result<i64, StcError> {
    let (v, a) = variant.cube();
    let km = KhovanovMatching::new(g, v, a);
    Ok(PathCensus::new(&km)
        .incidence((from.tree, from.plus), (to.tree, to.plus))?
        .total)
}

/// Certificate that an alternating diagram has `ℤ₂`-torsion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorsionCertificate {
    /// Edge order used (edge indices, smallest first): the initial cycle, then the ears.
    pub edge_order: Vec<usize>,
    /// Length of the initial cycle.
    pub cycle_length: usize,
    /// Edge indices of the tree `T` (all largest ear edges removed).
    pub tree: Vec<usize>,
    /// Edge indices of `T' = T − f + e`.
    pub tree_prime: Vec<usize>,
    /// `Γ(source, target)`; equals `±2`.
    pub incidence: i64,
    /// `T'⁺` (positive cycle edges) or `T⁺` (negative ones), named by tree index.
    pub source: String,
    /// `T⁻` or `T'⁻` respectively.
    pub target: String,
    /// Bigrading of the target, where the homology has `ℤ₂`-torsion.
    pub bidegree: (i64, i64),
    /// The witness lives on the dual checkerboard graph.
    pub dual: bool,
    /// Dotted arc (root) used.
    pub dotted_arc: u32,
}

/// Open ear decomposition of a 2-connected graph starting from a cycle of
/// length at least three.  Returns the cycle and the ears as edge lists.
fn ear_decomposition(g: &TaitGraph) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    let nv = g.n_vertices();
    let ne = g.n_edges();
    let adj: Vec<Vec<(usize, usize)>> = (0..nv)
        .map(|v| {
            (0..ne)
                .filter_map(|e| {
                    let (a, b) = g.ends(e);
                    if a == b {
                        None
                    } else if a == v {
                        Some((b, e))
                    } else if b == v {
                        Some((a, e))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    if (0..ne).any(|e| g.ends(e).0 == g.ends(e).1) {
        return None;
    }
    // Shortest cycle of length ≥ 3: for each edge (u,w), BFS from w to u avoiding
    // that edge and every edge parallel to it.
    let mut best: Option<Vec<usize>> = None;
    for e0 in 0..ne {
        let (u, w) = g.ends(e0);
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[w] = true;
        let mut q = std::collections::VecDeque::from([w]);
        while let Some(x) = q.pop_front() {
            for &(y, e) in &adj[x] {
                let (p, r) = g.ends(e);
                if (p == u && r == w) || (p == w && r == u) || seen[y] {
                    continue;
                }
                seen[y] = true;
                prev[y] = Some((x, e));
                q.push_back(y);
            }
        }
        if !seen[u] {
            continue;
        }
        let mut cyc = vec![e0];
        let mut x = u;
        while x != w {
            let (p, e) = prev[x].expect("bfs tree");
            cyc.push(e);
            x = p;
        }
        if best.as_ref().is_none_or(|b| cyc.len() < b.len()) {
            best = Some(cyc);
        }
    }
    let cycle = best?;
    let mut in_h = vec![false; nv];
    let mut used = vec![false; ne];
    for &e in &cycle {
        used[e] = true;
        let (a, b) = g.ends(e);
        in_h[a] = true;
        in_h[b] = true;
    }
    let mut ears = Vec::new();
    while used.iter().any(|u| !u) {
        let mut found = None;
        'search: for e0 in (0..ne).filter(|&e| !used[e]) {
            let (a, b) = g.ends(e0);
            for (u, w) in [(a, b), (b, a)] {
                if !in_h[u] {
                    continue;
                }
                if in_h[w] {
                    found = Some(vec![e0]);
                    break 'search;
                }
                // Path from w through new vertices back to H \ {u}.
                let mut prev: Vec<Option<(usize, usize)>> = vec![None; nv];
                let mut seen = vec![false; nv];
                seen[w] = true;
                seen[u] = true;
                let mut q = std::collections::VecDeque::from([w]);
                let mut end = None;
                while let Some(x) = q.pop_front() {
                    for &(y, e) in &adj[x] {
                        if used[e] || seen[y] {
                            continue;
                        }
                        seen[y] = true;
                        prev[y] = Some((x, e));
                        if in_h[y] {
                            end = Some(y);
                            break;
                        }
                        q.push_back(y);
                    }
                    if end.is_some() {
                        break;
                    }
                }
                if let Some(mut y) = end {
                    let mut ear = Vec::new();
                    while y != w {
                        let (p, e) = prev[y].expect("bfs tree");
                        ear.push(e);
                        y = p;
                    }
                    ear.push(e0);
                    ear.reverse();
                    found = Some(ear);
                    break 'search;
                }
            }
        }
        let ear = found?; // not 2-connected
        for &e in &ear {
            used[e] = true;
            let (a, b) = g.ends(e);
            in_h[a] = true;
            in_h[b] = true;
        }
        ears.push(ear);
    }
    Some((cycle, ears))
}

/// Construct and verify the `ℤ₂`-torsion witness of an alternating diagram:
/// order the edges along an ear decomposition, take `T` by deleting the
/// largest edge of the cycle and of every ear, and `T' = T − f + e` with `e`,
/// `f` the largest and second largest cycle edges.  The certificate records
/// the incidence `Γ(T'⁺, T⁻) = ±2` and the torsion found in the homology.
///
/// Both checkerboard graphs and every choice of dotted arc (root) are tried;
/// the first verified witness is returned.
pub fn torsion_witness_alternating(g: &TaitGraph) -> Result<TorsionCertificate, StcError> {
    let signs: Vec<i8> = g.edges().iter().map(|e| e.sign).collect();
    if !(signs.iter().all(|&s| s > 0) || signs.iter().all(|&s| s < 0)) {
        return Err(StcError::NotAlternating);
    }
    let mut last =
        StcError::TooSmall("no cycle of length at least 3 in either checkerboard graph".into());
    for dual in [false, true] {
        let h = if dual {
            crate::diagram::dual_tait(g)
        } else {
            g.clone()
        };
        let Some((cycle0, ears)) = ear_decomposition(&h) else {
            continue;
        };
        // The order inside the initial cycle is free: try every choice of the
        // two largest cycle edges.
        for &e in &cycle0 {
            for &f in cycle0.iter().filter(|&&f| f != e) {
                let mut cycle: Vec<usize> = cycle0
                    .iter()
                    .copied()
                    .filter(|&x| x != e && x != f)
                    .collect();
                cycle.extend([f, e]);
                let mut order = cycle.clone();
                for ear in &ears {
                    order.extend(ear);
                }
                let ho = h.with_order(&order);
                for &arc in ho.arc_labels() {
                    let hd = ho.with_dotted_arc(arc).expect("arc of the diagram");
                    match witness_for(&hd, &cycle, &ears, dual) {
                        Ok(mut cert) => {
                            cert.edge_order = order;
                            return Ok(cert);
                        }
                        Err(err) => last = err,
                    }
                }
            }
        }
    }
    Err(last)
}

fn witness_for(
    h: &TaitGraph,
    cycle: &[usize],
    ears: &[Vec<usize>],
    dual: bool,
) -> Result<TorsionCertificate, StcError> {
    let e = *cycle.last().expect("cycle");
    let f = cycle[cycle.len() - 2];
    let mut removed: Vec<usize> = vec![e];
    removed.extend(ears.iter().map(|ear| *ear.last().expect("non-empty ear")));
    let tree_mask = (0..h.n_edges())
        .filter(|x| !removed.contains(x))
        .fold(0u64, |m, x| m | 1 << x);
    let prime_mask = (tree_mask & !(1 << f)) | 1 << e;
    let km = KhovanovMatching::new(h, Variant::Unreduced, Algebra::Khovanov);
    let find = |mask: u64| km.trees.iter().position(|t| t.tree.edges == mask);
    let fail = |why: &str| StcError::TooSmall(why.to_string());
    let t = find(tree_mask).ok_or_else(|| fail("ear construction did not give a spanning tree"))?;
    let tp = find(prime_mask).ok_or_else(|| fail("exchange did not give a spanning tree"))?;
    // Positive cycle edges: Γ(T'⁺, T⁻) = ±2.  Negative ones (the mirror
    // picture): Γ(T⁺, T'⁻) = ±2.
    let (src, dst) = if h.edge(e).sign > 0 {
        ((tp, true), (t, false))
    } else {
        ((t, true), (tp, false))
    };
    let src_cell = km.trees[src.0].critical_cell(src.1);
    let dst_cell = km.trees[dst.0].critical_cell(dst.1);
    let incidence = MorseEngine::new(&km)
        .differential(src_cell)?
        .get(&dst_cell)
        .copied()
        .unwrap_or(0);
    let bidegree = (km.sp.i(dst_cell.bmask), km.sp.j_of(&dst_cell));
    if incidence.abs() != 2 {
        return Err(fail(&format!(
            "witness not confirmed: incidence {incidence}"
        )));
    }
    let st = build_st_complex(h, StVariant::Unreduced)?;
    let hom = crate::homology::homology_of(&st.complex).map_err(|x| fail(&x.to_string()))?;
    let group = hom.at(bidegree.0, bidegree.1);
    if incidence.abs() != 2 || !group.torsion.iter().any(|&q| q % 2 == 0) {
        return Err(fail(&format!(
            "witness not confirmed: incidence {incidence}, homology at ({}, {}) = {group}",
            bidegree.0, bidegree.1
        )));
    }
    let edges_of = |m: u64| {
        (0..h.n_edges())
            .filter(|x| m >> x & 1 == 1)
            .collect::<Vec<_>>()
    };
    Ok(TorsionCertificate {
        edge_order: Vec::new(),
        cycle_length: cycle.len(),
        tree: edges_of(tree_mask),
        tree_prime: edges_of(prime_mask),
        incidence,
        source: generator_name(src.0, src.1),
        target: generator_name(dst.0, dst.1),
        bidegree,
        dual,
        dotted_arc: h.arc_labels()[h.dotted_arc()],
    })
}

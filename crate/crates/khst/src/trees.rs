//! Spanning trees of Tait graphs, Tutte activities, partial smoothings, the
//! partial order on trees, twist trees and matching words.
//!
//! Edges are identified by their index in [`TaitGraph::edges`]; "smaller"
//! always refers to [`TaitGraph::rank`].  Edge subsets are `u64` bitsets.

use std::fmt;

use serde::Serialize;

use crate::diagram::TaitGraph;

/// A spanning tree as an edge bitset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpanningTree {
    pub edges: u64,
}

impl SpanningTree {
    /// Whether edge `e` belongs to the tree.
    pub fn contains(&self, e: usize) -> bool {
        self.edges >> e & 1 == 1
    }

    /// Tree edges as 1-based order labels, ascending.
    pub fn labels(&self, g: &TaitGraph) -> Vec<usize> {
        let mut v: Vec<usize> = (0..g.n_edges())
            .filter(|&e| self.contains(e))
            .map(|e| g.label(e))
            .collect();
        v.sort_unstable();
        v
    }
}

/// Activity letter of one edge with respect to a spanning tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Activity {
    /// Edge lies in the tree.
    pub internal: bool,
    /// Edge is the minimum of its cut (internal) or cycle (external).
    pub live: bool,
    /// Sign of the Tait edge.
    pub positive: bool,
}

impl Activity {
    /// Letter without the bar: one of `L`, `D`, `l`, `d`.
    pub fn base_char(&self) -> char {
        match (self.internal, self.live) {
            (true, true) => 'L',
            (true, false) => 'D',
            (false, true) => 'l',
            (false, false) => 'd',
        }
    }

    /// Smoothing assigned to the crossing by this letter (used for dead
    /// edges in partial smoothings and for every edge in the critical state).
    pub fn smoothing(&self) -> Smoothing {
        // Positive: L->B, D->A, l->A, d->B; negative letters are the opposite.
        let b = match (self.internal, self.live) {
            (true, true) => true,
            (true, false) => false,
            (false, true) => false,
            (false, false) => true,
        };
        if b == self.positive {
            Smoothing::B
        } else {
            Smoothing::A
        }
    }

    /// Whether a live edge is a negative twist (`L` or `l̄`).
    pub fn is_negative_twist(&self) -> bool {
        self.live && (self.internal == self.positive)
    }

    /// ASCII spelling: a trailing `'` marks a negative edge.
    pub fn ascii(&self) -> String {
        let mut s = self.base_char().to_string();
        if !self.positive {
            s.push('\'');
        }
        s
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base_char())?;
        if !self.positive {
            write!(f, "\u{0304}")?;
        }
        Ok(())
    }
}

/// Activity word: one letter per edge, listed in edge order (smallest first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ActivityWord(pub Vec<Activity>);

impl ActivityWord {
    /// ASCII spelling, e.g. `LLLdDd'D'D'`.
    pub fn ascii(&self) -> String {
        self.0.iter().map(|a| a.ascii()).collect()
    }

    /// Number of live letters.
    pub fn n_live(&self) -> usize {
        self.0.iter().filter(|a| a.live).count()
    }
}

impl fmt::Display for ActivityWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Crossing smoothing marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Smoothing {
    A,
    B,
    /// Unsmoothed (live edge).
    Star,
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smoothing::A => "A",
            Smoothing::B => "B",
            Smoothing::Star => "⋆",
        })
    }
}

/// Partial smoothing of a tree, listed in edge order (smallest first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartialSmoothing(pub Vec<Smoothing>);

impl fmt::Display for PartialSmoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Small union-find over vertex ids.
#[derive(Clone)]
pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Whether `e` is a bridge of the multigraph `g/contracted − deleted`,
/// where `present` lists the edges still in play.
fn is_bridge(g: &TaitGraph, uf: &UnionFind, present: u64, e: usize) -> bool {
    let mut uf = uf.clone();
    for f in 0..g.n_edges() {
        if f != e && present >> f & 1 == 1 {
            let (a, b) = g.ends(f);
            uf.union(a, b);
        }
    }
    let (a, b) = g.ends(e);
    uf.find(a) != uf.find(b)
}

/// All spanning trees, by deletion–contraction on the largest remaining edge.
///
/// The order is deterministic: at each branching edge the "contract" branch
/// comes first.
pub fn enumerate_spanning_trees(g: &TaitGraph) -> Vec<SpanningTree> {
    let mut out = Vec::new();
    let all: u64 = if g.n_edges() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n_edges()) - 1
    };
    let uf = UnionFind::new(g.n_vertices());
    let order: Vec<usize> = g.order().iter().rev().copied().collect();
    rec_trees(g, &order, 0, uf, all, 0, &mut out);
    out
}

fn rec_trees(
    g: &TaitGraph,
    order: &[usize],
    k: usize,
    mut uf: UnionFind,
    present: u64,
    tree: u64,
    out: &mut Vec<SpanningTree>,
) {
    if k == order.len() {
        out.push(SpanningTree { edges: tree });
        return;
    }
    let e = order[k];
    let (a, b) = g.ends(e);
    if uf.find(a) == uf.find(b) {
        rec_trees(g, order, k + 1, uf, present & !(1 << e), tree, out);
        return;
    }
    if is_bridge(g, &uf, present, e) {
        uf.union(a, b);
        rec_trees(g, order, k + 1, uf, present, tree | 1 << e, out);
        return;
    }
    let mut uf2 = uf.clone();
    uf2.union(a, b);
    rec_trees(g, order, k + 1, uf2, present, tree | 1 << e, out);
    rec_trees(g, order, k + 1, uf, present & !(1 << e), tree, out);
}

/// Number of spanning trees by the Matrix-Tree theorem (exact Bareiss determinant).
pub fn matrix_tree_count(g: &TaitGraph) -> u128 {
    let n = g.n_vertices();
    if n <= 1 {
        return 1;
    }
    let m = n - 1;
    let mut lap = vec![vec![0i128; n]; n];
    for e in 0..g.n_edges() {
        let (a, b) = g.ends(e);
        if a != b {
            lap[a][a] += 1;
            lap[b][b] += 1;
            lap[a][b] -= 1;
            lap[b][a] -= 1;
        }
    }
    let mut a: Vec<Vec<i128>> = (1..n).map(|i| lap[i][1..].to_vec()).collect();
    let mut prev = 1i128;
    let mut sign = 1i128;
    for k in 0..m {
        if a[k][k] == 0 {
            match (k + 1..m).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[m - 1][m - 1]).unsigned_abs()
}

/// Fundamental cut of a tree edge: `e` plus the non-tree edges joining the two sides of `T − e`.
pub fn cut_set(g: &TaitGraph, t: &SpanningTree, e: usize) -> Vec<usize> {
    assert!(t.contains(e), "cut set requires a tree edge");
    let mut uf = UnionFind::new(g.n_vertices());
    for f in 0..g.n_edges() {
        if f != e && t.contains(f) {
            let (a, b) = g.ends(f);
            uf.union(a, b);
        }
    }
    (0..g.n_edges())
        .filter(|&f| {
            let (a, b) = g.ends(f);
            uf.find(a) != uf.find(b)
        })
        .collect()
}

/// Fundamental cycle of a non-tree edge: `f` plus the tree path between its ends.
pub fn cyc_set(g: &TaitGraph, t: &SpanningTree, f: usize) -> Vec<usize> {
    assert!(!t.contains(f), "cycle set requires a non-tree edge");
    let (a, b) = g.ends(f);
    let mut out = tree_path(g, t, a, b);
    out.push(f);
    out.sort_unstable();
    out
}

/// Tree edges on the path between two vertices.
fn tree_path(g: &TaitGraph, t: &SpanningTree, a: usize, b: usize) -> Vec<usize> {
    let n = g.n_vertices();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[a] = true;
    let mut stack = vec![a];
    while let Some(v) = stack.pop() {
        for e in 0..g.n_edges() {
            if !t.contains(e) {
                continue;
            }
            let (x, y) = g.ends(e);
            let w = if x == v {
                y
            } else if y == v {
                x
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                stack.push(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = b;
    while v != a {
        let (p, e) = parent[v].expect("tree spans the graph");
        path.push(e);
        v = p;
    }
    path
}

/// Activity word of a tree.
pub fn activity_word(g: &TaitGraph, t: &SpanningTree) -> ActivityWord {
    let mut letters = Vec::with_capacity(g.n_edges());
    for &e in g.order() {
        let set = if t.contains(e) {
            cut_set(g, t, e)
        } else {
            cyc_set(g, t, e)
        };
        let min = set
            .iter()
            .copied()
            .min_by_key(|&f| g.rank(f))
            .expect("set contains e");
        letters.push(Activity {
            internal: t.contains(e),
            live: min == e,
            positive: g.edge(e).sign > 0,
        });
    }
    ActivityWord(letters)
}

/// Activity letter of every edge, indexed by edge (not by order).
pub fn activities_by_edge(g: &TaitGraph, t: &SpanningTree) -> Vec<Activity> {
    let w = activity_word(g, t);
    let mut out: Vec<Option<Activity>> = vec![None; g.n_edges()];
    for (k, &e) in g.order().iter().enumerate() {
        out[e] = Some(w.0[k]);
    }
    out.into_iter()
        .map(|a| a.expect("the order covers every edge"))
        .collect()
}

/// Partial smoothing: `⋆` on live edges, Table-2 smoothings on dead edges, in edge order.
pub fn partial_smoothing(g: &TaitGraph, t: &SpanningTree) -> PartialSmoothing {
    PartialSmoothing(
        activity_word(g, t)
            .0
            .iter()
            .map(|a| {
                if a.live {
                    Smoothing::Star
                } else {
                    a.smoothing()
                }
            })
            .collect(),
    )
}

/// B-mask of the critical ("all split") resolution of a tree: every edge
/// smoothed by its letter.
pub fn critical_bmask(g: &TaitGraph, t: &SpanningTree) -> u64 {
    let acts = activities_by_edge(g, t);
    let mut m = 0u64;
    for (e, a) in acts.iter().enumerate() {
        if a.smoothing() == Smoothing::B {
            m |= 1 << e;
        }
    }
    m
}

/// Bitset of live edges.
pub fn live_mask(g: &TaitGraph, t: &SpanningTree) -> u64 {
    let acts = activities_by_edge(g, t);
    let mut m = 0u64;
    for (e, a) in acts.iter().enumerate() {
        if a.live {
            m |= 1 << e;
        }
    }
    m
}

/// The spanning tree whose twisted unknot contains the resolution with B-mask `bmask`.
pub fn tree_of_resolution(g: &TaitGraph, bmask: u64) -> SpanningTree {
    let h = g.subgraph_of_bmask(bmask);
    let mut uf = UnionFind::new(g.n_vertices());
    let all: u64 = if g.n_edges() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n_edges()) - 1
    };
    let mut present = all;
    let mut tree = 0u64;
    for &e in g.order().iter().rev() {
        let (a, b) = g.ends(e);
        if uf.find(a) == uf.find(b) {
            present &= !(1 << e);
        } else if is_bridge(g, &uf, present, e) || h >> e & 1 == 1 {
            uf.union(a, b);
            tree |= 1 << e;
        } else {
            present &= !(1 << e);
        }
    }
    SpanningTree { edges: tree }
}

/// The generating relation `t1 > t2` on trees.
///
/// Holds iff, crossing by crossing, an `A` in `t2` forces `A` or `⋆` in
/// `t1`, and some crossing is `A` in `t1` and `B` in `t2`.
pub fn tree_greater(g: &TaitGraph, t1: &SpanningTree, t2: &SpanningTree) -> bool {
    smoothing_greater(&partial_smoothing(g, t1), &partial_smoothing(g, t2))
}

/// [`tree_greater`] on precomputed partial smoothings.
pub fn smoothing_greater(x: &PartialSmoothing, y: &PartialSmoothing) -> bool {
    let mut strict = false;
    for (a, b) in x.0.iter().zip(&y.0) {
        if *b == Smoothing::A && *a == Smoothing::B {
            return false;
        }
        if *a == Smoothing::A && *b == Smoothing::B {
            strict = true;
        }
    }
    strict
}

/// The generating relation as adjacency lists over tree indices.
pub fn relation_graph(g: &TaitGraph, trees: &[SpanningTree]) -> Vec<Vec<usize>> {
    let ps: Vec<PartialSmoothing> = trees.iter().map(|t| partial_smoothing(g, t)).collect();
    (0..trees.len())
        .map(|a| {
            (0..trees.len())
                .filter(|&b| smoothing_greater(&ps[a], &ps[b]))
                .collect()
        })
        .collect()
}

/// All chains `from = T₁ > T₂ > ⋯ > Tₙ = to` in the generating relation,
/// as sequences of tree indices.  `from == to` yields no chains.
pub fn enumerate_chains(rel: &[Vec<usize>], from: usize, to: usize) -> Vec<Vec<usize>> {
    if from == to {
        return Vec::new();
    }
    // Vertices that can reach `to`.
    let n = rel.len();
    let mut reaches = vec![false; n];
    reaches[to] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..n {
            if !reaches[a] && rel[a].iter().any(|&b| reaches[b]) {
                reaches[a] = true;
                changed = true;
            }
        }
    }
    let mut out = Vec::new();
    if !reaches[from] {
        return out;
    }
    let mut path = vec![from];
    chains_dfs(rel, &reaches, to, &mut path, &mut out);
    out
}

fn chains_dfs(
    rel: &[Vec<usize>],
    reaches: &[bool],
    to: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let cur = *path.last().expect("non-empty path");
    if cur == to {
        out.push(path.clone());
        return;
    }
    for &b in &rel[cur] {
        if reaches[b] && !path.contains(&b) {
            path.push(b);
            chains_dfs(rel, reaches, to, path, out);
            path.pop();
        }
    }
}

/// An edge of the twist tree `G(T)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistEdge {
    /// Tait edge (crossing) index.
    pub edge: usize,
    /// The two circles of the critical state merged by this crossing.
    pub ends: [usize; 2],
    /// Negative twist (`L`, `l̄`) or positive twist (`L̄`, `l`).
    pub negative: bool,
    /// Activity letter of the edge.
    pub letter: Activity,
}

/// One step of the inductive matching: edge `e_k` with its leaf `v_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchingStep {
    /// Index into [`TwistTree::edges`].
    pub twist_edge: usize,
    /// The leaf circle removed at this step.
    pub leaf: usize,
    /// The circle the leaf hangs from.
    pub parent: usize,
}

/// The twist tree `G(T)`: circles of the critical state joined by live edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistTree {
    pub tree: SpanningTree,
    /// Number of circles of the critical state.
    pub n_vertices: usize,
    /// Circle containing the dotted arc.
    pub root: usize,
    /// Live edges, in edge order.
    pub edges: Vec<TwistEdge>,
    /// Leaf-removal order (least ordered non-root leaf first).
    pub steps: Vec<MatchingStep>,
    /// B-mask of the critical state.
    pub critical_bmask: u64,
    /// Circle of every arc in the critical state.
    pub circle_of_arc: Vec<u16>,
}

/// Matching word: live letters with their order labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingWord(pub Vec<(Activity, usize)>);

fn subscript(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).expect("digit")).expect("subscript digit"))
        .collect()
}

impl MatchingWord {
    /// ASCII spelling, e.g. `L2 L3 L1`.
    pub fn ascii(&self) -> String {
        self.0
            .iter()
            .map(|(a, k)| format!("{}{}", a.ascii(), k))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for MatchingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, k) in &self.0 {
            write!(f, "{a}{}", subscript(*k))?;
        }
        Ok(())
    }
}

/// Build `G(T)`.  Panics if the critical state is not "all split", which
/// would signal an inconsistent sign convention.
pub fn build_twist_tree(g: &TaitGraph, t: &SpanningTree) -> TwistTree {
    let acts = activities_by_edge(g, t);
    let crit = critical_bmask(g, t);
    let res = g.resolve(crit);
    let mut edges = Vec::new();
    for &e in g.order() {
        let a = acts[e];
        if !a.live {
            continue;
        }
        let (c1, c2) = crossing_circles(g, &res.circle_of_arc, crit, e);
        assert_ne!(
            c1,
            c2,
            "live edge {} does not merge two circles in the critical state",
            g.label(e)
        );
        edges.push(TwistEdge {
            edge: e,
            ends: [c1, c2],
            negative: a.is_negative_twist(),
            letter: a,
        });
    }
    let nv = res.n_circles;
    assert_eq!(
        nv,
        edges.len() + 1,
        "critical state circles do not form a tree"
    );
    let root = res.circle_of_arc[g.dotted_arc()] as usize;
    // Leaf removal.
    let mut alive = vec![true; edges.len()];
    let mut steps = Vec::with_capacity(edges.len());
    for _ in 0..edges.len() {
        let mut deg = vec![0usize; nv];
        for (k, te) in edges.iter().enumerate() {
            if alive[k] {
                deg[te.ends[0]] += 1;
                deg[te.ends[1]] += 1;
            }
        }
        // edges are in edge order, so the first qualifying one is least ordered
        let (k, leaf, parent) = edges
            .iter()
            .enumerate()
            .filter(|(k, _)| alive[*k])
            .find_map(|(k, te)| {
                for s in 0..2 {
                    let v = te.ends[s];
                    if v != root && deg[v] == 1 {
                        return Some((k, v, te.ends[1 - s]));
                    }
                }
                None
            })
            .expect("a finite tree has a non-root leaf");
        alive[k] = false;
        steps.push(MatchingStep {
            twist_edge: k,
            leaf,
            parent,
        });
    }
    TwistTree {
        tree: *t,
        n_vertices: nv,
        root,
        edges,
        steps,
        critical_bmask: crit,
        circle_of_arc: res.circle_of_arc,
    }
}

/// The circles touching crossing `e` on its two strand pieces under the
/// resolution `bmask`; equal iff changing the smoothing splits a circle.
pub fn crossing_circles(
    g: &TaitGraph,
    circle_of_arc: &[u16],
    bmask: u64,
    e: usize,
) -> (usize, usize) {
    let s = g.edge(e).slots;
    if bmask >> e & 1 == 0 {
        (circle_of_arc[s[0]] as usize, circle_of_arc[s[2]] as usize)
    } else {
        (circle_of_arc[s[0]] as usize, circle_of_arc[s[1]] as usize)
    }
}

/// Matching word of a twist tree: the reverse of the leaf-removal order.
pub fn matching_word(g: &TaitGraph, gt: &TwistTree) -> MatchingWord {
    MatchingWord(
        gt.steps
            .iter()
            .rev()
            .map(|s| {
                let te = &gt.edges[s.twist_edge];
                (te.letter, g.label(te.edge))
            })
            .collect(),
    )
}

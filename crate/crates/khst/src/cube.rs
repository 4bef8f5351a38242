//! The cube of resolutions in the enhanced-spanning-subgraph formulation:
//! Khovanov and Lee complexes with exact signs, oriented-resolution
//! generators, and single-saddle chain maps.
//!
//! A resolution is a B-mask over Tait edges (bit `e` set iff crossing `e`
//! is B-smoothed); its spanning subgraph is recovered with
//! [`TaitGraph::subgraph_of_bmask`].  Circles are numbered by their smallest
//! arc; an [`EnhancedState`] stores the set of circles labelled `x`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Resolution, TaitGraph};
use crate::trees::crossing_circles;

/// Errors raised while building cube complexes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubeError {
    /// The Tait graph is disconnected.
    #[error("the Tait graph is disconnected")]
    DisconnectedTait,
    /// Too many crossings for dense enumeration.
    #[error("{0} crossings exceed the cube-complex limit of {MAX_CUBE_CROSSINGS}")]
    TooLarge(usize),
    /// The band of a saddle move is not attached as described.
    #[error("incompatible band: {0}")]
    IncompatibleBand(String),
    /// The diagram has no orientation.
    #[error("oriented resolution requires an oriented diagram")]
    MissingOrientation,
}

/// Dense enumeration limit of the oracle.
pub const MAX_CUBE_CROSSINGS: usize = 22;

/// Which Khovanov complex to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// All enhanced states.
    Unreduced,
    /// Quotient complex on states whose dotted circle is labelled `1`.
    ReducedPlus,
    /// Subcomplex of states whose dotted circle is labelled `x`.
    ReducedMinus,
}

impl Variant {
    /// Parse `unreduced`, `reduced_plus`/`reduced+`, `reduced_minus`/`reduced-`.
    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "unreduced" => Some(Variant::Unreduced),
            "reduced_plus" | "reduced+" | "plus" => Some(Variant::ReducedPlus),
            "reduced_minus" | "reduced-" | "minus" => Some(Variant::ReducedMinus),
            _ => None,
        }
    }

    /// Whether a state with the given dotted label belongs to the variant.
    pub fn admits(&self, dotted_is_x: bool) -> bool {
        match self {
            Variant::Unreduced => true,
            Variant::ReducedPlus => !dotted_is_x,
            Variant::ReducedMinus => dotted_is_x,
        }
    }
}

/// Frobenius algebra used on circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Algebra {
    /// `x² = 0`.
    Khovanov,
    /// `x² = 1` (Lee's deformation).
    Lee,
}

/// A resolution together with a `{1, x}` label on each of its circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EnhancedState {
    /// B-smoothed crossings.
    pub bmask: u64,
    /// Circles (numbered by smallest arc) labelled `x`.
    pub xmask: u64,
}

/// A chain: sparse integer combination of enhanced states.
pub type Chain = BTreeMap<EnhancedState, i64>;

/// Add `c · s` to a chain, dropping zero coefficients.
pub fn chain_add(ch: &mut Chain, s: EnhancedState, c: i64) {
    if c == 0 {
        return;
    }
    let v = ch.entry(s).or_insert(0);
    *v += c;
    if *v == 0 {
        ch.remove(&s);
    }
}

/// Generator of a [`BigradedComplex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub i: i64,
    pub j: i64,
    pub name: String,
}

/// A free complex with a cohomological differential and `(i, j)` labels.
///
/// For Khovanov complexes the differential preserves `j`; for Lee
/// complexes `j` is a filtration degree and entries may raise it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BigradedComplex {
    pub gens: Vec<Generator>,
    /// Column form: `d(gens[k]) = Σ c · gens[t]` for `(t, c)` in `diff[k]`.
    pub diff: Vec<Vec<(usize, i64)>>,
    /// Whether `j` is only a filtration (Lee).
    pub filtered: bool,
}

impl BigradedComplex {
    /// Number of generators.
    pub fn len(&self) -> usize {
        self.gens.len()
    }

    /// Whether there are no generators.
    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Check that `d` raises `i` by one and `∂∘∂ = 0`; returns a witness `(source, target, coefficient)` on failure.
    pub fn check_d_squared(&self) -> Result<(), (usize, usize, i64)> {
        for (k, col) in self.diff.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(t, c) in col {
                if self.gens[t].i != self.gens[k].i + 1 {
                    return Err((k, t, c));
                }
                for &(u, c2) in &self.diff[t] {
                    *acc.entry(u).or_insert(0) += c * c2;
                }
            }
            if let Some((&u, &c)) = acc.iter().find(|(_, &c)| c != 0) {
                return Err((k, u, c));
            }
        }
        Ok(())
    }

    /// Graded Euler characteristic `Σ (−1)^i q^j` as a map `j ↦ coefficient`.
    pub fn euler(&self) -> BTreeMap<i64, i64> {
        let mut p = BTreeMap::new();
        for g in &self.gens {
            let s = if g.i.rem_euclid(2) == 0 { 1 } else { -1 };
            *p.entry(g.j).or_insert(0) += s;
        }
        p.retain(|_, v| *v != 0);
        p
    }

    /// Generator counts per `(i, j)`.
    pub fn counts(&self) -> BTreeMap<(i64, i64), usize> {
        let mut m = BTreeMap::new();
        for g in &self.gens {
            *m.entry((g.i, g.j)).or_insert(0) += 1;
        }
        m
    }

    /// Matrix-market text of the block `(i, j) → (i+1, j)` (rows = targets).
    pub fn matrix_market(&self, i: i64, j: i64) -> String {
        let src: Vec<usize> = (0..self.len())
            .filter(|&k| self.gens[k].i == i && self.gens[k].j == j)
            .collect();
        let tgt: Vec<usize> = (0..self.len())
            .filter(|&k| self.gens[k].i == i + 1 && self.gens[k].j == j)
            .collect();
        let mut entries = Vec::new();
        for (c, &k) in src.iter().enumerate() {
            for &(t, v) in &self.diff[k] {
                if let Some(r) = tgt.iter().position(|&x| x == t) {
                    entries.push((r + 1, c + 1, v));
                }
            }
        }
        let mut s = String::from("%%MatrixMarket matrix coordinate integer general\n");
        s.push_str(&format!("{} {} {}\n", tgt.len(), src.len(), entries.len()));
        for (r, c, v) in entries {
            s.push_str(&format!("{r} {c} {v}\n"));
        }
        s
    }
}

/// Gradings and sign data shared by all states of a Tait graph.
#[derive(Debug, Clone)]
pub struct StateSpace<'g> {
    pub g: &'g TaitGraph,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl<'g> StateSpace<'g> {
    /// State space of an oriented Tait graph; unoriented graphs are graded as if all crossings were positive.
    pub fn new(g: &'g TaitGraph) -> StateSpace<'g> {
        let (n_plus, n_minus) = g.n_plus_minus().unwrap_or((g.n_edges(), 0));
        StateSpace { g, n_plus, n_minus }
    }

    /// Circles of a resolution.
    pub fn resolve(&self, bmask: u64) -> Resolution {
        self.g.resolve(bmask)
    }

    /// Homological degree.
    pub fn i(&self, bmask: u64) -> i64 {
        bmask.count_ones() as i64 - self.n_minus as i64
    }

    /// Quantum degree.
    pub fn j(&self, s: &EnhancedState, n_circles: usize) -> i64 {
        let nx = s.xmask.count_ones() as i64;
        let n1 = n_circles as i64 - nx;
        self.i(s.bmask) + n1 - nx + self.n_plus as i64 - self.n_minus as i64
    }

    /// Quantum degree, resolving the state.
    pub fn j_of(&self, s: &EnhancedState) -> i64 {
        let r = self.resolve(s.bmask);
        self.j(s, r.n_circles)
    }

    /// Circle of the dotted arc in a resolution.
    pub fn dotted_circle(&self, r: &Resolution) -> usize {
        r.circle_of_arc[self.g.dotted_arc()] as usize
    }

    /// Whether the dotted circle of `s` is labelled `x`.
    pub fn dotted_is_x(&self, s: &EnhancedState) -> bool {
        let r = self.resolve(s.bmask);
        s.xmask >> self.dotted_circle(&r) & 1 == 1
    }

    /// Sign `(−1)^{w(e)}` of the edge from a resolution across crossing `e`.
    pub fn sign(&self, bmask: u64, e: usize) -> i64 {
        let rank = self.g.rank(e);
        let w = (0..self.g.n_edges())
            .filter(|&f| bmask >> f & 1 == 1 && self.g.rank(f) < rank)
            .count();
        if w % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Differential of one enhanced state (all targets, before any variant filter).
    pub fn differential(&self, s: &EnhancedState, algebra: Algebra) -> Vec<(EnhancedState, i64)> {
        let res = self.resolve(s.bmask);
        let mut out = Vec::new();
        for e in 0..self.g.n_edges() {
            if s.bmask >> e & 1 == 1 {
                continue;
            }
            let b2 = s.bmask | 1 << e;
            let res2 = self.resolve(b2);
            let sign = self.sign(s.bmask, e);
            for (t, c) in edge_map(self.g, &res, &res2, s, e, b2, algebra) {
                out.push((t, sign * c));
            }
        }
        out
    }

    /// All enhanced states of one resolution admitted by a variant.
    pub fn states_of(&self, bmask: u64, variant: Variant) -> Vec<EnhancedState> {
        let r = self.resolve(bmask);
        let dc = self.dotted_circle(&r);
        (0..1u64 << r.n_circles)
            .map(|xmask| EnhancedState { bmask, xmask })
            .filter(|s| variant.admits(s.xmask >> dc & 1 == 1))
            .collect()
    }

    /// Human-readable name of a state: smoothing word in edge order and labels per circle.
    pub fn name(&self, s: &EnhancedState) -> String {
        let r = self.resolve(s.bmask);
        let word: String = self
            .g
            .order()
            .iter()
            .map(|&e| if s.bmask >> e & 1 == 1 { 'B' } else { 'A' })
            .collect();
        let labels: String = (0..r.n_circles)
            .map(|c| if s.xmask >> c & 1 == 1 { 'x' } else { '1' })
            .collect();
        format!("{word}:{labels}")
    }
}

/// Representative arc of every circle.
fn circle_reps(r: &Resolution) -> Vec<usize> {
    let mut rep = vec![usize::MAX; r.n_circles];
    for (a, &c) in r.circle_of_arc.iter().enumerate() {
        if rep[c as usize] == usize::MAX {
            rep[c as usize] = a;
        }
    }
    rep
}

/// Merge or split across crossing `e` from resolution `res` to `res2` (bmask `b2`).
fn edge_map(
    g: &TaitGraph,
    res: &Resolution,
    res2: &Resolution,
    s: &EnhancedState,
    e: usize,
    b2: u64,
    algebra: Algebra,
) -> Vec<(EnhancedState, i64)> {
    let (c1, c2) = crossing_circles(g, &res.circle_of_arc, s.bmask, e);
    let reps = circle_reps(res);
    // Labels of untouched circles carry over.
    let mut base = 0u64;
    for (c, &a) in reps.iter().enumerate() {
        if c != c1 && c != c2 && s.xmask >> c & 1 == 1 {
            base |= 1 << res2.circle_of_arc[a];
        }
    }
    let x1 = s.xmask >> c1 & 1 == 1;
    let mut out = Vec::with_capacity(2);
    if c1 != c2 {
        let m = res2.circle_of_arc[reps[c1]] as usize;
        let x2 = s.xmask >> c2 & 1 == 1;
        match (x1, x2) {
            (false, false) => out.push((
                EnhancedState {
                    bmask: b2,
                    xmask: base,
                },
                1,
            )),
            (true, false) | (false, true) => out.push((
                EnhancedState {
                    bmask: b2,
                    xmask: base | 1 << m,
                },
                1,
            )),
            (true, true) => {
                if algebra == Algebra::Lee {
                    out.push((
                        EnhancedState {
                            bmask: b2,
                            xmask: base,
                        },
                        1,
                    ));
                }
            }
        }
    } else {
        let (d1, d2) = crossing_circles(g, &res2.circle_of_arc, b2, e);
        debug_assert_ne!(d1, d2);
        let (m1, m2) = (1u64 << d1, 1u64 << d2);
        if !x1 {
            out.push((
                EnhancedState {
                    bmask: b2,
                    xmask: base | m2,
                },
                1,
            ));
            out.push((
                EnhancedState {
                    bmask: b2,
                    xmask: base | m1,
                },
                1,
            ));
        } else {
            out.push((
                EnhancedState {
                    bmask: b2,
                    xmask: base | m1 | m2,
                },
                1,
            ));
            if algebra == Algebra::Lee {
                out.push((
                    EnhancedState {
                        bmask: b2,
                        xmask: base,
                    },
                    1,
                ));
            }
        }
    }
    out
}

/// Apply a variant to a differential: the reduced-plus quotient drops
/// targets with dotted label `x`; the other variants are closed under `d`.
pub fn filter_variant(
    sp: &StateSpace<'_>,
    terms: Vec<(EnhancedState, i64)>,
    variant: Variant,
) -> Vec<(EnhancedState, i64)> {
    if variant != Variant::ReducedPlus {
        return terms;
    }
    terms
        .into_iter()
        .filter(|(t, _)| !sp.dotted_is_x(t))
        .collect()
}

/// The full Khovanov (or Lee) cube complex with explicit generator list.
#[derive(Debug, Clone)]
pub struct CubeComplex {
    pub states: Vec<EnhancedState>,
    pub complex: BigradedComplex,
}

fn check_size(g: &TaitGraph) -> Result<(), CubeError> {
    if !g.is_connected() {
        return Err(CubeError::DisconnectedTait);
    }
    if g.n_edges() > MAX_CUBE_CROSSINGS {
        return Err(CubeError::TooLarge(g.n_edges()));
    }
    Ok(())
}

fn build_cube(g: &TaitGraph, variant: Variant, algebra: Algebra) -> Result<CubeComplex, CubeError> {
    check_size(g)?;
    let sp = StateSpace::new(g);
    let n = g.n_edges();
    let mut states = Vec::new();
    for b in 0..1u64 << n {
        states.extend(sp.states_of(b, variant));
    }
    let index: std::collections::HashMap<EnhancedState, usize> =
        states.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let mut gens = Vec::with_capacity(states.len());
    let mut diff = Vec::with_capacity(states.len());
    for s in &states {
        let r = sp.resolve(s.bmask);
        gens.push(Generator {
            i: sp.i(s.bmask),
            j: sp.j(s, r.n_circles),
            name: sp.name(s),
        });
        let terms = filter_variant(&sp, sp.differential(s, algebra), variant);
        let mut col: BTreeMap<usize, i64> = BTreeMap::new();
        for (t, c) in terms {
            let k = *index
                .get(&t)
                .expect("differential stays inside the variant");
            *col.entry(k).or_insert(0) += c;
        }
        diff.push(col.into_iter().filter(|&(_, c)| c != 0).collect());
    }
    Ok(CubeComplex {
        states,
        complex: BigradedComplex {
            gens,
            diff,
            filtered: algebra == Algebra::Lee,
        },
    })
}

/// The Khovanov cube complex of a variant.
pub fn build_khovanov_complex(g: &TaitGraph, variant: Variant) -> Result<CubeComplex, CubeError> {
    build_cube(g, variant, Algebra::Khovanov)
}

/// The (unreduced) Lee cube complex; `j` is the filtration degree.
pub fn build_lee_complex(g: &TaitGraph) -> Result<CubeComplex, CubeError> {
    build_cube(g, Variant::Unreduced, Algebra::Lee)
}

/// Two-colouring of the circles of a resolution by the Seifert-graph rule:
/// circles sharing a crossing get opposite colours.  Returns `None` if a
/// crossing joins a circle to itself.
fn two_colour_circles(g: &TaitGraph, bmask: u64, r: &Resolution) -> Option<Vec<u8>> {
    let n = r.n_circles;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..g.n_edges() {
        let s = g.edge(e).slots;
        // The two arcs on either side of the crossing belong to its two smoothing arcs.
        let (p, q) = if bmask >> e & 1 == 0 {
            (s[0], s[2])
        } else {
            (s[0], s[1])
        };
        let (a, b) = (r.circle_of_arc[p] as usize, r.circle_of_arc[q] as usize);
        if a == b {
            return None;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut col = vec![u8::MAX; n];
    for start in 0..n {
        if col[start] != u8::MAX {
            continue;
        }
        col[start] = 0;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if col[w] == u8::MAX {
                    col[w] = 1 - col[v];
                    stack.push(w);
                } else if col[w] == col[v] {
                    return None;
                }
            }
        }
    }
    Some(col)
}

/// Lee generator `𝔰ₒ` of the oriented resolution, expanded in the `{1, x}` basis.
///
/// Circles are two-coloured along the Seifert graph; the circle through the
/// lowest arc gets `x − 1` when that arc is traversed in its parsed
/// direction and `x + 1` otherwise, and the colours alternate.  With
/// `flip = true` every label is swapped (`𝔰ₒ̄`).
pub fn oriented_resolution_generator(g: &TaitGraph, flip: bool) -> Result<Chain, CubeError> {
    let b = g.oriented_bmask().ok_or(CubeError::MissingOrientation)?;
    let r = g.resolve(b);
    let col = two_colour_circles(g, b, &r).expect("the oriented resolution is bipartite");
    let anchor = r.circle_of_arc[0] as usize;
    // sign[c] = −1 for (x − 1), +1 for (x + 1).
    let anchor_sign = if g.anchor_forward() { -1 } else { 1 };
    let anchor_sign = if flip { -anchor_sign } else { anchor_sign };
    let signs: Vec<i64> = (0..r.n_circles)
        .map(|c| {
            if col[c] == col[anchor] {
                anchor_sign
            } else {
                -anchor_sign
            }
        })
        .collect();
    let mut chain = Chain::new();
    for xmask in 0..1u64 << r.n_circles {
        // Coefficient: product over circles labelled 1 of their constant term.
        let mut c = 1i64;
        for (k, &s) in signs.iter().enumerate() {
            if xmask >> k & 1 == 0 {
                c *= s;
            }
        }
        chain_add(&mut chain, EnhancedState { bmask: b, xmask }, c);
    }
    Ok(chain)
}

/// Apply a differential to a chain.
pub fn apply_differential(
    sp: &StateSpace<'_>,
    ch: &Chain,
    algebra: Algebra,
    variant: Variant,
) -> Chain {
    let mut out = Chain::new();
    for (s, &c) in ch {
        for (t, d) in filter_variant(sp, sp.differential(s, algebra), variant) {
            chain_add(&mut out, t, c * d);
        }
    }
    out
}

/// A band attaching a saddle between two arcs of a diagram, given by the
/// PD-code surgery it performs.
///
/// The band joins arcs `p` and `q`, which must border a common region.
/// Each arc is split at the band: `p` runs `p_tail → p_head` and `q` runs
/// `q_tail → q_head` in PD positions.  The target diagram reconnects
/// `p_tail–q_head` (keeping label `p`) and `q_tail–p_head` (keeping
/// label `q`), so both diagrams have the same crossings and the saddle
/// acts resolution by resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Band {
    pub p: u32,
    pub q: u32,
}

/// The saddle chain map between the Khovanov complexes of two diagrams
/// with the same crossings, given as a map on enhanced states: on every
/// resolution the band either merges two circles (`m`) or splits one (`Δ`).
#[derive(Debug, Clone)]
pub struct SaddleMap<'a> {
    from: &'a TaitGraph,
    to: &'a TaitGraph,
    /// Arc indices (internal) of the band feet in the source.
    p: usize,
    q: usize,
}

impl<'a> SaddleMap<'a> {
    /// Set up the map; both graphs must come from diagrams whose crossing
    /// tuples agree up to the band surgery.
    pub fn new(
        from: &'a TaitGraph,
        to: &'a TaitGraph,
        band: Band,
    ) -> Result<SaddleMap<'a>, CubeError> {
        if from.n_edges() != to.n_edges() {
            return Err(CubeError::IncompatibleBand("crossing counts differ".into()));
        }
        let p = from
            .arc_labels()
            .iter()
            .position(|&a| a == band.p)
            .ok_or_else(|| {
                CubeError::IncompatibleBand(format!("arc {} not in the source", band.p))
            })?;
        let q = from
            .arc_labels()
            .iter()
            .position(|&a| a == band.q)
            .ok_or_else(|| {
                CubeError::IncompatibleBand(format!("arc {} not in the source", band.q))
            })?;
        if p == q {
            return Err(CubeError::IncompatibleBand(
                "band feet must be distinct arcs".into(),
            ));
        }
        Ok(SaddleMap { from, to, p, q })
    }

    /// Image of one enhanced state.
    pub fn apply_state(&self, s: &EnhancedState) -> Vec<(EnhancedState, i64)> {
        let r1 = self.from.resolve(s.bmask);
        let r2 = self.to.resolve(s.bmask);
        let (c1, c2) = (
            r1.circle_of_arc[self.p] as usize,
            r1.circle_of_arc[self.q] as usize,
        );
        // In the target the arcs p and q keep their labels; map circles via representative arcs.
        let reps = circle_reps(&r1);
        let mut base = 0u64;
        for (c, &a) in reps.iter().enumerate() {
            if c != c1 && c != c2 && s.xmask >> c & 1 == 1 {
                base |= 1 << r2.circle_of_arc[self.to_arc(a)];
            }
        }
        let x1 = s.xmask >> c1 & 1 == 1;
        let b = s.bmask;
        if c1 != c2 {
            let x2 = s.xmask >> c2 & 1 == 1;
            let m = r2.circle_of_arc[self.to_arc(self.p)] as usize;
            match (x1, x2) {
                (false, false) => vec![(
                    EnhancedState {
                        bmask: b,
                        xmask: base,
                    },
                    1,
                )],
                (true, true) => Vec::new(),
                _ => vec![(
                    EnhancedState {
                        bmask: b,
                        xmask: base | 1 << m,
                    },
                    1,
                )],
            }
        } else {
            let d1 = r2.circle_of_arc[self.to_arc(self.p)] as usize;
            let d2 = r2.circle_of_arc[self.to_arc(self.q)] as usize;
            let (m1, m2) = (1u64 << d1, 1u64 << d2);
            if !x1 {
                vec![
                    (
                        EnhancedState {
                            bmask: b,
                            xmask: base | m2,
                        },
                        1,
                    ),
                    (
                        EnhancedState {
                            bmask: b,
                            xmask: base | m1,
                        },
                        1,
                    ),
                ]
            } else {
                vec![(
                    EnhancedState {
                        bmask: b,
                        xmask: base | m1 | m2,
                    },
                    1,
                )]
            }
        }
    }

    fn to_arc(&self, a: usize) -> usize {
        let label = self.from.arc_labels()[a];
        self.to
            .arc_labels()
            .iter()
            .position(|&b| b == label)
            .expect("same arc labels")
    }

    /// Image of a chain.
    pub fn apply(&self, ch: &Chain) -> Chain {
        let mut out = Chain::new();
        for (s, &c) in ch {
            for (t, d) in self.apply_state(s) {
                chain_add(&mut out, t, c * d);
            }
        }
        out
    }

    /// Whether the band merges circles on the resolution `bmask`.
    pub fn merges_on(&self, bmask: u64) -> bool {
        let r = self.from.resolve(bmask);
        r.circle_of_arc[self.p] != r.circle_of_arc[self.q]
    }
}

/// PD surgery for a band between arcs `p` and `q`, which must border a
/// common region of the diagram.  Returns the PD tuples of the target.
///
/// The arc `p` runs from its tail occurrence `P₁` to its head `P₂`; likewise
/// `q` from `Q₁` to `Q₂`.  The surgery reconnects `P₁–Q₂` (label `p`) and
/// `Q₁–P₂` (label `q`), which is the oriented band when `p` and `q` are
/// traversed in opposite directions along the shared region.
pub fn band_surgery(
    d: &crate::diagram::LinkDiagram,
    band: Band,
) -> Result<Vec<Vec<i64>>, CubeError> {
    use crate::diagram::checkerboard_and_tait;
    let tuples = d.pd_tuples();
    let has = |a: u32| tuples.iter().any(|t| t.contains(&a));
    if !has(band.p) || !has(band.q) || band.p == band.q {
        return Err(CubeError::IncompatibleBand(format!(
            "arcs {} and {} are not both present",
            band.p, band.q
        )));
    }
    // A common region: some region boundary contains both arcs.
    let g =
        checkerboard_and_tait(d, None).map_err(|e| CubeError::IncompatibleBand(e.to_string()))?;
    let sides = region_arcs(&g);
    if !sides
        .iter()
        .any(|r| r.contains(&band.p) && r.contains(&band.q))
    {
        return Err(CubeError::IncompatibleBand(format!(
            "arcs {} and {} share no region",
            band.p, band.q
        )));
    }
    // Head occurrences: the slot where each arc ends in its traversal direction.
    let comps = d.components();
    let next_of = |a: u32| -> u32 {
        for c in &comps {
            if let Some(pos) = c.iter().position(|&x| x == a) {
                return c[(pos + 1) % c.len()];
            }
        }
        unreachable!()
    };
    let head_slot = |a: u32| -> Option<(usize, usize)> {
        let n = next_of(a);
        for (x, t) in tuples.iter().enumerate() {
            for s in 0..4 {
                if t[s] == a && t[(s + 2) % 4] == n {
                    return Some((x, s));
                }
            }
        }
        None
    };
    let (hp, hq) = match (head_slot(band.p), head_slot(band.q)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(CubeError::IncompatibleBand(
                "cannot locate the band feet".into(),
            ))
        }
    };
    let mut out: Vec<Vec<i64>> = tuples
        .iter()
        .map(|t| t.iter().map(|&v| v as i64).collect())
        .collect();
    // Swap the labels at the two heads: P₁–Q₂ keeps p, Q₁–P₂ keeps q.
    out[hp.0][hp.1] = band.q as i64;
    out[hq.0][hq.1] = band.p as i64;
    Ok(out)
}

/// Arc labels bounding each region (black vertices first, then white faces).
fn region_arcs(g: &TaitGraph) -> Vec<std::collections::BTreeSet<u32>> {
    let mut out = crate::diagram::vertex_arcs(g);
    out.extend(crate::diagram::vertex_arcs(&crate::diagram::dual_tait(g)));
    out
}

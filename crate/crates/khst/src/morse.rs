//! Algebraic discrete Morse theory for cochain complexes.
//!
//! A based complex with a matching is described by the [`MorseSystem`]
//! trait; cells may be produced lazily, so the engine only ever touches the
//! part of the complex reachable from the cells it is asked about.
//!
//! The differential raises the degree by one.  A matched pair `(a, b)` has
//! `deg b = deg a + 1` and a unit coefficient `[a:b]` of `b` in `d(a)`; in
//! the Morse graph the edge `a → b` is replaced by `b → a` with weight
//! `−1/[a:b]`.  With `Γ(u, v)` the sum of path weights from `u` to `v`:
//!
//! * `d^M(c) = Σ Γ(c, c') c'` over critical `c'` of degree `deg c + 1`;
//! * `f(c) = Σ Γ(c, x) x` over all `x` with `deg x = deg c` (Morse → original);
//! * `g(x) = Σ Γ(x, c) c` over critical `c` with `deg c = deg x` (original → Morse);
//! * `χ(x) = Σ Γ(x, y) y` over all `y` with `deg y = deg x − 1`.
//!
//! These satisfy `g∘f = id` and `f∘g − id = dχ + χd`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

/// Errors raised by the Morse engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    /// A matched pair does not sit in adjacent degrees.
    #[error("matched cells {0} and {1} are not in adjacent degrees")]
    GradingMismatch(String, String),
    /// A matched coefficient is not ±1.
    #[error("matched coefficient {2} between {0} and {1} is not a unit")]
    NonUnitWeight(String, String, i64),
    /// Integer overflow in a path sum.
    #[error("integer overflow while summing Morse paths")]
    Overflow,
    /// A cell occurs in more than one matched pair.
    #[error("cell {0} occurs in more than one matched pair")]
    InvalidMatching(String),
    /// The matching is not acyclic.
    #[error("matching has a directed cycle through {0}")]
    Cycle(String),
}

/// Matching status of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partner<C> {
    /// Unmatched.
    Critical,
    /// Matched with a cell of one degree higher.
    Up(C),
    /// Matched with a cell of one degree lower.
    Down(C),
}

/// A based cochain complex with a matching.
pub trait MorseSystem {
    type Cell: Copy + Eq + Hash + Ord + Debug;
    /// Degree of a cell.
    fn degree(&self, c: &Self::Cell) -> i64;
    /// `d(c)` as `(cell, coefficient)` terms (no repeated cells).
    fn differential(&self, c: &Self::Cell) -> Vec<(Self::Cell, i64)>;
    /// Matching partner of a cell.
    fn partner(&self, c: &Self::Cell) -> Partner<Self::Cell>;
}

/// Sparse integer chain over cells.
pub type Vector<C> = BTreeMap<C, i64>;

fn add_scaled<C: Ord + Copy>(acc: &mut Vector<C>, v: &Vector<C>, s: i64) -> Result<(), MorseError> {
    for (&k, &c) in v {
        let t = c.checked_mul(s).ok_or(MorseError::Overflow)?;
        let e = acc.entry(k).or_insert(0);
        *e = e.checked_add(t).ok_or(MorseError::Overflow)?;
        if *e == 0 {
            acc.remove(&k);
        }
    }
    Ok(())
}

fn add_term<C: Ord + Copy>(acc: &mut Vector<C>, k: C, c: i64) -> Result<(), MorseError> {
    let e = acc.entry(k).or_insert(0);
    *e = e.checked_add(c).ok_or(MorseError::Overflow)?;
    if *e == 0 {
        acc.remove(&k);
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    G,
    Chi,
}

/// Lower cell of a matched pair, the reversed weight, and the lower cell's
/// boundary.
type ReversedEdge<C> = (C, i64, Vec<(C, i64)>);

/// Memoising evaluator of `d^M`, `f`, `g` and `χ` on a [`MorseSystem`].
pub struct MorseEngine<'s, S: MorseSystem> {
    sys: &'s S,
    g_memo: HashMap<S::Cell, Vector<S::Cell>>,
    chi_memo: HashMap<S::Cell, Vector<S::Cell>>,
}

impl<'s, S: MorseSystem> MorseEngine<'s, S> {
    /// Wrap a system.
    pub fn new(sys: &'s S) -> Self {
        MorseEngine {
            sys,
            g_memo: HashMap::new(),
            chi_memo: HashMap::new(),
        }
    }

    /// The wrapped system.
    pub fn system(&self) -> &'s S {
        self.sys
    }

    /// Lower cell `a` of the pair `(a, x)` and the reversed weight `−1/[a:x]`,
    /// or `None` if `x` is not the upper cell of a pair.
    fn reversed_edge(&self, x: &S::Cell) -> Result<Option<ReversedEdge<S::Cell>>, MorseError> {
        match self.sys.partner(x) {
            Partner::Down(a) => {
                if self.sys.degree(&a) + 1 != self.sys.degree(x) {
                    return Err(MorseError::GradingMismatch(
                        format!("{a:?}"),
                        format!("{x:?}"),
                    ));
                }
                let da = self.sys.differential(&a);
                let w = da
                    .iter()
                    .find(|(y, _)| y == x)
                    .map(|&(_, c)| c)
                    .unwrap_or(0);
                if w != 1 && w != -1 {
                    return Err(MorseError::NonUnitWeight(
                        format!("{a:?}"),
                        format!("{x:?}"),
                        w,
                    ));
                }
                Ok(Some((a, -w, da)))
            }
            _ => Ok(None),
        }
    }

    /// Shared recursion for `g` and `χ`:
    /// `val(x) = −1/[a:x] · (base(a) + Σ_{y ∈ d(a), y ≠ x} [a:y] val(y))` when `x` is matched down to `a`.
    fn eval(&mut self, x: S::Cell, kind: Kind) -> Result<Vector<S::Cell>, MorseError> {
        if let Some(v) = self.memo(kind).get(&x) {
            return Ok(v.clone());
        }
        // Explicit-stack post-order evaluation.
        let mut stack: Vec<(S::Cell, bool)> = vec![(x, false)];
        let mut on_stack: HashSet<S::Cell> = HashSet::new();
        while let Some((u, expanded)) = stack.pop() {
            if self.memo(kind).contains_key(&u) {
                continue;
            }
            let rev = self.reversed_edge(&u)?;
            let Some((a, w, da)) = rev else {
                let leaf = match (kind, self.sys.partner(&u)) {
                    (Kind::G, Partner::Critical) => Vector::from([(u, 1)]),
                    _ => Vector::new(),
                };
                self.memo_mut(kind).insert(u, leaf);
                continue;
            };
            if !expanded {
                if !on_stack.insert(u) {
                    return Err(MorseError::Cycle(format!("{u:?}")));
                }
                stack.push((u, true));
                for (y, _) in &da {
                    if *y != u && !self.memo(kind).contains_key(y) {
                        if on_stack.contains(y) {
                            return Err(MorseError::Cycle(format!("{y:?}")));
                        }
                        stack.push((*y, false));
                    }
                }
                continue;
            }
            let mut acc = Vector::new();
            if kind == Kind::Chi {
                add_term(&mut acc, a, 1)?;
            }
            for (y, c) in &da {
                if *y == u {
                    continue;
                }
                let vy = self.memo(kind).get(y).expect("child evaluated").clone();
                add_scaled(&mut acc, &vy, *c)?;
            }
            let mut out = Vector::new();
            add_scaled(&mut out, &acc, w)?;
            on_stack.remove(&u);
            self.memo_mut(kind).insert(u, out);
        }
        Ok(self.memo(kind).get(&x).expect("evaluated").clone())
    }

    fn memo(&self, kind: Kind) -> &HashMap<S::Cell, Vector<S::Cell>> {
        match kind {
            Kind::G => &self.g_memo,
            Kind::Chi => &self.chi_memo,
        }
    }

    fn memo_mut(&mut self, kind: Kind) -> &mut HashMap<S::Cell, Vector<S::Cell>> {
        match kind {
            Kind::G => &mut self.g_memo,
            Kind::Chi => &mut self.chi_memo,
        }
    }

    /// `g(x)`: projection of a cell onto the critical cells.
    pub fn g(&mut self, x: S::Cell) -> Result<Vector<S::Cell>, MorseError> {
        self.eval(x, Kind::G)
    }

    /// `g` applied to a chain.
    pub fn g_chain(&mut self, v: &Vector<S::Cell>) -> Result<Vector<S::Cell>, MorseError> {
        let mut out = Vector::new();
        for (&x, &c) in v {
            let gx = self.g(x)?;
            add_scaled(&mut out, &gx, c)?;
        }
        Ok(out)
    }

    /// `χ(x)`: the chain homotopy, of degree −1.
    pub fn chi(&mut self, x: S::Cell) -> Result<Vector<S::Cell>, MorseError> {
        self.eval(x, Kind::Chi)
    }

    /// `χ` applied to a chain.
    pub fn chi_chain(&mut self, v: &Vector<S::Cell>) -> Result<Vector<S::Cell>, MorseError> {
        let mut out = Vector::new();
        for (&x, &c) in v {
            let cx = self.chi(x)?;
            add_scaled(&mut out, &cx, c)?;
        }
        Ok(out)
    }

    /// Morse differential of a critical cell: `d^M(c) = g(d(c))`.
    pub fn differential(&mut self, c: S::Cell) -> Result<Vector<S::Cell>, MorseError> {
        let mut out = Vector::new();
        for (y, k) in self.sys.differential(&c) {
            let gy = self.g(y)?;
            add_scaled(&mut out, &gy, k)?;
        }
        Ok(out)
    }

    /// `f(c)` for a critical cell: `c` plus all zig-zag paths back into its degree.
    pub fn f(&mut self, c: S::Cell) -> Result<Vector<S::Cell>, MorseError> {
        // Successors of a degree-i cell p: a with M(a) = y ∈ d(p), y ≠ M(p); weight [p:y]·(−1/[a:y]).
        let succ = |this: &Self, p: &S::Cell| -> Result<Vec<(S::Cell, i64)>, MorseError> {
            let mp = match this.sys.partner(p) {
                Partner::Up(b) => Some(b),
                _ => None,
            };
            let mut out = Vec::new();
            for (y, k) in this.sys.differential(p) {
                if Some(y) == mp {
                    continue;
                }
                if let Some((a, w, _)) = this.reversed_edge(&y)? {
                    out.push((a, k.checked_mul(w).ok_or(MorseError::Overflow)?));
                }
            }
            Ok(out)
        };
        // Topological order of the reachable part (iterative DFS post-order).
        let mut order: Vec<S::Cell> = Vec::new();
        let mut state: HashMap<S::Cell, u8> = HashMap::new(); // 1 = open, 2 = done
        let mut succ_cache: HashMap<S::Cell, Vec<(S::Cell, i64)>> = HashMap::new();
        let mut stack: Vec<(S::Cell, usize)> = vec![(c, 0)];
        state.insert(c, 1);
        succ_cache.insert(c, succ(self, &c)?);
        while let Some(&(u, k)) = stack.last() {
            let next = succ_cache[&u].get(k).map(|&(a, _)| a);
            match next {
                Some(a) => {
                    stack.last_mut().expect("non-empty").1 += 1;
                    match state.get(&a) {
                        Some(1) => return Err(MorseError::Cycle(format!("{a:?}"))),
                        Some(_) => {}
                        None => {
                            state.insert(a, 1);
                            let s = succ(self, &a)?;
                            succ_cache.insert(a, s);
                            stack.push((a, 0));
                        }
                    }
                }
                None => {
                    state.insert(u, 2);
                    order.push(u);
                    stack.pop();
                }
            }
        }
        order.reverse();
        let mut coef: Vector<S::Cell> = Vector::from([(c, 1)]);
        for u in order {
            let cu = coef.get(&u).copied().unwrap_or(0);
            if cu == 0 {
                continue;
            }
            for &(a, w) in &succ_cache[&u] {
                add_term(&mut coef, a, cu.checked_mul(w).ok_or(MorseError::Overflow)?)?;
            }
        }
        Ok(coef)
    }

    /// `f` applied to a chain of critical cells.
    pub fn f_chain(&mut self, v: &Vector<S::Cell>) -> Result<Vector<S::Cell>, MorseError> {
        let mut out = Vector::new();
        for (&x, &c) in v {
            let fx = self.f(x)?;
            add_scaled(&mut out, &fx, c)?;
        }
        Ok(out)
    }
}

/// Apply the original differential of a system to a chain.
pub fn apply_d<S: MorseSystem>(
    sys: &S,
    v: &Vector<S::Cell>,
) -> Result<Vector<S::Cell>, MorseError> {
    let mut out = Vector::new();
    for (&x, &c) in v {
        for (y, k) in sys.differential(&x) {
            add_term(&mut out, y, c.checked_mul(k).ok_or(MorseError::Overflow)?)?;
        }
    }
    Ok(out)
}

/// An explicit Hasse diagram: cells `0..n` with degrees and a sparse differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseDiagram {
    pub degrees: Vec<i64>,
    /// `d(k) = Σ c · t` for `(t, c)` in `diff[k]`.
    pub diff: Vec<Vec<(usize, i64)>>,
}

/// A set of matched pairs `(lower, upper)` with `deg upper = deg lower + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// The empty matching.
    pub fn empty() -> Self {
        Matching::default()
    }

    /// Partner table for `n` cells (later pairs win on conflicts; see [`verify_acyclic`]).
    pub fn partners(&self, n: usize) -> Vec<Partner<usize>> {
        let mut p = vec![Partner::Critical; n];
        for &(a, b) in &self.pairs {
            p[a] = Partner::Up(b);
            p[b] = Partner::Down(a);
        }
        p
    }
}

/// A Hasse diagram together with a matching, as a [`MorseSystem`].
#[derive(Debug, Clone)]
pub struct MatchedComplex<'h> {
    pub hasse: &'h HasseDiagram,
    pub partners: Vec<Partner<usize>>,
}

impl<'h> MatchedComplex<'h> {
    pub fn new(hasse: &'h HasseDiagram, m: &Matching) -> Self {
        MatchedComplex {
            hasse,
            partners: m.partners(hasse.degrees.len()),
        }
    }

    /// Critical cells in index order.
    pub fn critical(&self) -> Vec<usize> {
        (0..self.partners.len())
            .filter(|&k| self.partners[k] == Partner::Critical)
            .collect()
    }
}

impl MorseSystem for MatchedComplex<'_> {
    type Cell = usize;
    fn degree(&self, c: &usize) -> i64 {
        self.hasse.degrees[*c]
    }
    fn differential(&self, c: &usize) -> Vec<(usize, i64)> {
        self.hasse.diff[*c].clone()
    }
    fn partner(&self, c: &usize) -> Partner<usize> {
        self.partners[*c]
    }
}

/// Outcome of [`verify_acyclic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AcyclicReport {
    /// All matching conditions hold.
    Acyclic,
    /// A cell occurs in two pairs.
    DoublyMatched(usize),
    /// A matched coefficient is not a unit.
    NonUnit(usize, usize),
    /// The Morse graph has a directed cycle through these lower cells.
    Cycle(Vec<usize>),
}

impl AcyclicReport {
    /// Whether the matching is valid.
    pub fn is_acyclic(&self) -> bool {
        *self == AcyclicReport::Acyclic
    }
}

/// Check the three matching conditions; degrees must be adjacent.
pub fn verify_acyclic(h: &HasseDiagram, m: &Matching) -> Result<AcyclicReport, MorseError> {
    let n = h.degrees.len();
    let mut seen = vec![false; n];
    for &(a, b) in &m.pairs {
        if h.degrees[b] != h.degrees[a] + 1 {
            return Err(MorseError::GradingMismatch(a.to_string(), b.to_string()));
        }
        for x in [a, b] {
            if seen[x] {
                return Ok(AcyclicReport::DoublyMatched(x));
            }
            seen[x] = true;
        }
        let w = h.diff[a]
            .iter()
            .find(|&&(t, _)| t == b)
            .map(|&(_, c)| c)
            .unwrap_or(0);
        if w != 1 && w != -1 {
            return Ok(AcyclicReport::NonUnit(a, b));
        }
    }
    // Digraph on lower cells: a → a' when some y ∈ d(a), y ≠ M(a), is matched down to a'.
    let partners = m.partners(n);
    let succ = |a: usize| -> Vec<usize> {
        let ma = match partners[a] {
            Partner::Up(b) => Some(b),
            _ => None,
        };
        h.diff[a]
            .iter()
            .filter(|&&(y, _)| Some(y) != ma)
            .filter_map(|&(y, _)| match partners[y] {
                Partner::Down(a2) => Some(a2),
                _ => None,
            })
            .collect()
    };
    let mut color = vec![0u8; n];
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = 1;
        while let Some(&(u, k)) = stack.last() {
            let s = succ(u);
            if k < s.len() {
                stack.last_mut().expect("non-empty").1 += 1;
                let v = s[k];
                if color[v] == 1 {
                    let pos = stack
                        .iter()
                        .position(|&(x, _)| x == v)
                        .expect("open vertex on stack");
                    return Ok(AcyclicReport::Cycle(
                        stack[pos..].iter().map(|&(x, _)| x).collect(),
                    ));
                }
                if color[v] == 0 {
                    color[v] = 1;
                    stack.push((v, 0));
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    Ok(AcyclicReport::Acyclic)
}

/// The Morse complex of an explicit matched complex: critical cells in index
/// order, with the differential in the same column form as the input.
pub fn morse_differential(
    h: &HasseDiagram,
    m: &Matching,
) -> Result<(Vec<usize>, HasseDiagram), MorseError> {
    match verify_acyclic(h, m)? {
        AcyclicReport::Acyclic => {}
        AcyclicReport::NonUnit(a, b) => {
            let w = h.diff[a]
                .iter()
                .find(|&&(t, _)| t == b)
                .map(|&(_, c)| c)
                .unwrap_or(0);
            return Err(MorseError::NonUnitWeight(a.to_string(), b.to_string(), w));
        }
        AcyclicReport::DoublyMatched(x) => return Err(MorseError::InvalidMatching(x.to_string())),
        AcyclicReport::Cycle(c) => return Err(MorseError::Cycle(c[0].to_string())),
    }
    let sys = MatchedComplex::new(h, m);
    let crit = sys.critical();
    let pos: HashMap<usize, usize> = crit.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut eng = MorseEngine::new(&sys);
    let mut diff = Vec::with_capacity(crit.len());
    for &c in &crit {
        let d = eng.differential(c)?;
        diff.push(d.into_iter().map(|(t, v)| (pos[&t], v)).collect());
    }
    let degrees = crit.iter().map(|&c| h.degrees[c]).collect();
    Ok((crit, HasseDiagram { degrees, diff }))
}

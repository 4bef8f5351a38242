//! Exact homology of bigraded integer complexes.
//!
//! Smith normal form runs in two phases: sparse elimination of unit pivots
//! in checked `i64` arithmetic (the overwhelmingly common case for
//! Khovanov-type differentials), then dense arbitrary-precision elimination
//! on whatever is left.  Filtered levels of cycles are computed by
//! persistence-style column reduction over ℚ with fraction-free integer
//! arithmetic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cube::BigradedComplex;

/// Errors raised by homology computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    /// `∂∘∂ ≠ 0` (or `d` does not raise `i` by one); carries a witness entry.
    #[error("not a complex: d∘d has entry {coefficient} from generator {source_gen} to {target}")]
    NotAComplex {
        source_gen: usize,
        target: usize,
        coefficient: i64,
    },
    /// A class passed to a filtered-level query is not a cycle.
    #[error("class {0} is not a cycle")]
    NotACycle(usize),
}

/// Invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero invariant factors `d₁ | d₂ | ⋯`, all positive.
    pub factors: Vec<BigInt>,
}

impl SnfResult {
    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Factors greater than one (torsion coefficients of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect()
    }
}

/// Sparse integer matrix in row form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub rows: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    /// Empty matrix of the given shape.
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        SparseMatrix {
            n_rows,
            n_cols,
            rows: vec![BTreeMap::new(); n_rows],
        }
    }

    /// From a dense matrix.
    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let n_cols = m.first().map_or(0, |r| r.len());
        let mut s = SparseMatrix::new(m.len(), n_cols);
        for (r, row) in m.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                if v != 0 {
                    s.rows[r].insert(c, v);
                }
            }
        }
        s
    }

    /// Add `v` at `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.rows[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.rows[r].remove(&c);
        }
    }
}

/// Smith normal form of a dense integer matrix.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SnfResult {
    snf_sparse(&SparseMatrix::from_dense(m))
}

/// Smith normal form of a sparse integer matrix.
pub fn snf_sparse(m: &SparseMatrix) -> SnfResult {
    let mut rows: Vec<BTreeMap<usize, i64>> = m.rows.clone();
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.n_cols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row.keys() {
            cols[c].insert(r);
        }
    }
    let mut alive_rows: BTreeSet<usize> = (0..m.n_rows).filter(|&r| !rows[r].is_empty()).collect();
    let mut units = 0usize;
    // Phase 1: unit pivots with a Markowitz-style fill-in heuristic.
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for &r in &alive_rows {
            let rl = rows[r].len();
            for (&c, &v) in &rows[r] {
                if v == 1 || v == -1 {
                    let cost = (rl - 1) * (cols[c].len() - 1);
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((r, c, cost));
                        if cost == 0 {
                            break;
                        }
                    }
                }
            }
            if best.is_some_and(|b| b.2 == 0) {
                break;
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pv = rows[pr][&pc];
        let prow = rows[pr].clone();
        let targets: Vec<usize> = cols[pc].iter().copied().filter(|&r| r != pr).collect();
        let mut overflow = false;
        let mut updates: Vec<(usize, BTreeMap<usize, i64>)> = Vec::with_capacity(targets.len());
        for &r in &targets {
            let factor = rows[r][&pc] * pv; // pv = ±1, so a/pv = a·pv
            let mut new = rows[r].clone();
            for (&c, &v) in &prow {
                let Some(delta) = v.checked_mul(factor) else {
                    overflow = true;
                    break;
                };
                let cur = new.get(&c).copied().unwrap_or(0);
                let Some(nv) = cur.checked_sub(delta) else {
                    overflow = true;
                    break;
                };
                if nv == 0 {
                    new.remove(&c);
                } else {
                    new.insert(c, nv);
                }
            }
            if overflow {
                break;
            }
            updates.push((r, new));
        }
        if overflow {
            break;
        }
        for (r, new) in updates {
            for &c in rows[r].keys() {
                cols[c].remove(&r);
            }
            for &c in new.keys() {
                cols[c].insert(r);
            }
            if new.is_empty() {
                alive_rows.remove(&r);
            }
            rows[r] = new;
        }
        for &c in prow.keys() {
            cols[c].remove(&pr);
        }
        rows[pr].clear();
        alive_rows.remove(&pr);
        units += 1;
    }
    // Phase 2: dense arbitrary-precision elimination on the remainder.
    let rem_rows: Vec<usize> = alive_rows.into_iter().collect();
    let rem_cols: Vec<usize> = (0..m.n_cols).filter(|&c| !cols[c].is_empty()).collect();
    let mut dense: Vec<Vec<BigInt>> = rem_rows
        .iter()
        .map(|&r| {
            rem_cols
                .iter()
                .map(|c| BigInt::from(rows[r].get(c).copied().unwrap_or(0)))
                .collect()
        })
        .collect();
    let mut factors: Vec<BigInt> = vec![BigInt::one(); units];
    factors.extend(dense_snf(&mut dense));
    normalise_chain(&mut factors);
    SnfResult { factors }
}

/// Dense SNF; returns the nonzero diagonal (not yet a divisibility chain).
fn dense_snf(a: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // Smallest nonzero entry of the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for r in t..nr {
            for c in t..nc {
                if !a[r][c].is_zero() && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs())
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else { break };
        a.swap(t, br);
        for row in a.iter_mut() {
            row.swap(t, bc);
        }
        loop {
            let mut dirty = false;
            // Clear column t.
            for r in t + 1..nr {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&a[t][t]);
                let (top, bottom) = a.split_at_mut(r);
                for (x, y) in bottom[0][t..nc].iter_mut().zip(&top[t][t..nc]) {
                    *x -= y * &q;
                }
                if !a[r][t].is_zero() {
                    a.swap(t, r);
                    dirty = true;
                }
            }
            // Clear row t.
            for c in t + 1..nc {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[c] -= v;
                }
                if !a[t][c].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, c);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold a non-divisible row into row t.
            let p = a[t][t].clone();
            let bad = (t + 1..nr).find(|&r| (t + 1..nc).any(|c| !(&a[r][c] % &p).is_zero()));
            match bad {
                Some(r) => {
                    let (top, bottom) = a.split_at_mut(r);
                    for (x, y) in top[t][t..nc].iter_mut().zip(&bottom[0][t..nc]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Turn a multiset of nonzero diagonal entries into the invariant-factor chain.
fn normalise_chain(f: &mut Vec<BigInt>) {
    f.retain(|x| !x.is_zero());
    for x in f.iter_mut() {
        *x = x.abs();
    }
    let n = f.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = f[i].gcd(&f[j]);
            let l = f[i].lcm(&f[j]);
            f[i] = g;
            f[j] = l;
        }
    }
    f.sort();
}

/// One homology group: free rank plus invariant factors of the torsion part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    /// Whether the group is zero.
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Bigraded homology: nonzero groups keyed by `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct BigradedHomology {
    pub groups: BTreeMap<(i64, i64), HomologyGroup>,
}

impl BigradedHomology {
    /// Group at `(i, j)` (zero if absent).
    pub fn at(&self, i: i64, j: i64) -> HomologyGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Total free rank.
    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }

    /// Whether some group has torsion coefficient 2 (or a multiple of 2).
    pub fn has_even_torsion(&self) -> bool {
        self.groups
            .values()
            .any(|g| g.torsion.iter().any(|t| t % 2 == 0))
    }

    /// Euler characteristic of the free part, `Σ (−1)^i rank · q^j`.
    pub fn euler(&self) -> BTreeMap<i64, i64> {
        let mut p = BTreeMap::new();
        for (&(i, j), g) in &self.groups {
            let s = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            *p.entry(j).or_insert(0) += s * g.rank as i64;
        }
        p.retain(|_, v| *v != 0);
        p
    }

    /// JSON form: list of `{i, j, rank, torsion}` records.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.groups
                .iter()
                .map(|(&(i, j), g)| serde_json::json!({"i": i, "j": j, "rank": g.rank, "torsion": g.torsion}))
                .collect(),
        )
    }

    /// Aligned text grid: rows `j` descending, columns `i` ascending.
    pub fn grid(&self) -> String {
        if self.groups.is_empty() {
            return "(zero)\n".to_string();
        }
        let is: BTreeSet<i64> = self.groups.keys().map(|k| k.0).collect();
        let js: BTreeSet<i64> = self.groups.keys().map(|k| k.1).collect();
        let (imin, imax) = (*is.iter().next().unwrap(), *is.iter().next_back().unwrap());
        let (jmin, jmax) = (*js.iter().next().unwrap(), *js.iter().next_back().unwrap());
        let cells: BTreeMap<(i64, i64), String> = self
            .groups
            .iter()
            .map(|(&k, g)| (k, g.to_string()))
            .collect();
        let width = cells.values().map(|s| s.len()).max().unwrap_or(1).max(4);
        let mut s = format!("{:>5} |", "j\\i");
        for i in imin..=imax {
            s.push_str(&format!(" {:>width$}", i));
        }
        s.push('\n');
        let mut j = jmax;
        while j >= jmin {
            s.push_str(&format!("{j:>5} |"));
            for i in imin..=imax {
                let c = cells.get(&(i, j)).map(String::as_str).unwrap_or(".");
                s.push_str(&format!(" {c:>width$}"));
            }
            s.push('\n');
            j -= if (jmax - jmin) % 2 == 0 && js.iter().all(|v| (v - jmax) % 2 == 0) {
                2
            } else {
                1
            };
        }
        s
    }
}

/// Check `∂∘∂ = 0`, mapping failures to [`HomologyError::NotAComplex`].
pub fn check_complex(c: &BigradedComplex) -> Result<(), HomologyError> {
    c.check_d_squared()
        .map_err(|(s, t, v)| HomologyError::NotAComplex {
            source_gen: s,
            target: t,
            coefficient: v,
        })
}

/// Generators per key, differential blocks per source key, and the position
/// of every generator inside its group.
type Blocks<K> = (
    BTreeMap<K, Vec<usize>>,
    BTreeMap<K, SparseMatrix>,
    BTreeMap<usize, usize>,
);

/// Blocks of the differential keyed by source grading; `key` groups generators.
fn blocks<K: Ord + Copy>(c: &BigradedComplex, key: impl Fn(usize) -> K) -> Blocks<K> {
    let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for k in 0..c.len() {
        groups.entry(key(k)).or_default().push(k);
    }
    let mut pos: BTreeMap<usize, usize> = BTreeMap::new();
    for members in groups.values() {
        for (p, &k) in members.iter().enumerate() {
            pos.insert(k, p);
        }
    }
    let mut mats: BTreeMap<K, SparseMatrix> = BTreeMap::new();
    for (kk, members) in &groups {
        // Outgoing block: rows = targets in the single target group.
        let mut target_key: Option<K> = None;
        for &k in members {
            if let Some(&(t, _)) = c.diff[k].first() {
                target_key = Some(key(t));
                break;
            }
        }
        let Some(tk) = target_key else { continue };
        let n_rows = groups[&tk].len();
        let mut m = SparseMatrix::new(n_rows, members.len());
        for (col, &k) in members.iter().enumerate() {
            for &(t, v) in &c.diff[k] {
                debug_assert!(key(t) == tk, "differential leaves its target block");
                m.add(pos[&t], col, v);
            }
        }
        mats.insert(*kk, m);
    }
    (groups, mats, pos)
}

/// Integral homology of a j-preserving bigraded complex.
pub fn homology_of(c: &BigradedComplex) -> Result<BigradedHomology, HomologyError> {
    check_complex(c)?;
    let (groups, mats, _) = blocks(c, |k| (c.gens[k].i, c.gens[k].j));
    let snfs: BTreeMap<(i64, i64), SnfResult> =
        mats.iter().map(|(&k, m)| (k, snf_sparse(m))).collect();
    let mut out = BigradedHomology::default();
    for (&(i, j), members) in &groups {
        let out_rank = snfs.get(&(i, j)).map_or(0, |s| s.rank());
        let incoming = snfs.get(&(i - 1, j));
        let in_rank = incoming.map_or(0, |s| s.rank());
        let torsion: Vec<u64> = incoming
            .map(|s| {
                s.torsion()
                    .iter()
                    .map(|t| t.to_u64().expect("torsion fits in u64"))
                    .collect()
            })
            .unwrap_or_default();
        let g = HomologyGroup {
            rank: members.len() - out_rank - in_rank,
            torsion,
        };
        if !g.is_zero() {
            out.groups.insert((i, j), g);
        }
    }
    Ok(out)
}

/// Rational homology ranks by homological degree (for filtered complexes such as Lee's).
pub fn rational_ranks(c: &BigradedComplex) -> Result<BTreeMap<i64, usize>, HomologyError> {
    check_complex(c)?;
    let (groups, mats, _) = blocks(c, |k| c.gens[k].i);
    let ranks: BTreeMap<i64, usize> = mats
        .iter()
        .map(|(&k, m)| (k, snf_sparse(m).rank()))
        .collect();
    let mut out = BTreeMap::new();
    for (&i, members) in &groups {
        let r = members.len()
            - ranks.get(&i).copied().unwrap_or(0)
            - ranks.get(&(i - 1)).copied().unwrap_or(0);
        if r > 0 {
            out.insert(i, r);
        }
    }
    Ok(out)
}

/// Euler polynomial of a complex (chain level).
pub fn euler_polynomial(c: &BigradedComplex) -> BTreeMap<i64, i64> {
    c.euler()
}

/// Fraction-free sparse vector over ℚ (scale is irrelevant for levels).
type QVec = BTreeMap<usize, BigInt>;

fn content_normalise(v: &mut QVec) {
    let mut g = BigInt::zero();
    for x in v.values() {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in v.values_mut() {
            *x /= &g;
        }
    }
}

/// `v ← a·v − b·w`, cancelling the pivot.
fn eliminate(v: &mut QVec, w: &QVec, a: &BigInt, b: &BigInt) {
    for x in v.values_mut() {
        *x *= a;
    }
    for (k, y) in w {
        let e = v.entry(*k).or_insert_with(BigInt::zero);
        *e -= b * y;
    }
    v.retain(|_, x| !x.is_zero());
    content_normalise(v);
}

/// Persistence-style reduction of boundary vectors by ascending filtration.
struct FilteredReducer {
    /// Position of each generator in the `(j, index)` order.
    rank_of: Vec<usize>,
    /// Reduced boundary columns keyed by pivot position.
    pivots: BTreeMap<usize, QVec>,
}

impl FilteredReducer {
    fn pivot(&self, v: &QVec) -> Option<usize> {
        v.keys().map(|&k| self.rank_of[k]).min()
    }

    fn reduce(&self, v: &mut QVec) {
        while let Some(p) = self.pivot(v) {
            let Some(w) = self.pivots.get(&p) else { break };
            let key = *v
                .keys()
                .find(|&&k| self.rank_of[k] == p)
                .expect("pivot present");
            let a = w[&key].clone();
            let b = v[&key].clone();
            eliminate(v, w, &a, &b);
        }
    }

    fn insert(&mut self, mut v: QVec) {
        self.reduce(&mut v);
        if let Some(p) = self.pivot(&v) {
            self.pivots.insert(p, v);
        }
    }
}

/// Filtration level of each class: the largest `p` such that the class has a
/// representative supported in filtration degrees `≥ p`.  `None` marks a
/// class that is zero in homology.
///
/// `classes` are chains over generator indices of `c`; each must be a cycle.
pub fn filtered_homology_levels(
    c: &BigradedComplex,
    classes: &[BTreeMap<usize, i64>],
) -> Result<Vec<Option<i64>>, HomologyError> {
    check_complex(c)?;
    let n = c.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&k| (c.gens[k].j, k));
    let mut rank_of = vec![0; n];
    for (r, &k) in idx.iter().enumerate() {
        rank_of[k] = r;
    }
    let mut red = FilteredReducer {
        rank_of,
        pivots: BTreeMap::new(),
    };
    // All boundary vectors d(gen) for generators one degree below any class.
    let degrees: BTreeSet<i64> = classes
        .iter()
        .filter_map(|cl| cl.keys().next().map(|&k| c.gens[k].i))
        .collect();
    for k in 0..n {
        if degrees.contains(&(c.gens[k].i + 1)) && !c.diff[k].is_empty() {
            let v: QVec = c.diff[k]
                .iter()
                .map(|&(t, x)| (t, BigInt::from(x)))
                .collect();
            red.insert(v);
        }
    }
    let mut out = Vec::with_capacity(classes.len());
    for (ci, cl) in classes.iter().enumerate() {
        // Cycle check.
        let mut dv: BTreeMap<usize, i64> = BTreeMap::new();
        for (&k, &x) in cl {
            for &(t, y) in &c.diff[k] {
                *dv.entry(t).or_insert(0) += x * y;
            }
        }
        if dv.values().any(|&v| v != 0) {
            return Err(HomologyError::NotACycle(ci));
        }
        let mut v: QVec = cl
            .iter()
            .filter(|(_, &x)| x != 0)
            .map(|(&k, &x)| (k, BigInt::from(x)))
            .collect();
        red.reduce(&mut v);
        out.push(red.pivot(&v).map(|p| c.gens[idx[p]].j));
    }
    Ok(out)
}

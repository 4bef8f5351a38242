//! Unnormalized Jones polynomial by a Kauffman-bracket state sum.
//!
//! This is an oracle that works on the PD code alone: it never builds the
//! Tait graph or a chain complex.  For every smoothing it counts loops by a
//! union-find on arc labels.  The result uses Khovanov's normalization, so it
//! equals the graded Euler characteristic of unreduced Khovanov homology:
//!
//! `Ĵ(L) = (−1)^{n₋} q^{n₊ − 2n₋} Σ_s (−q)^{r(s)} (q + q⁻¹)^{k(s)}`
//!
//! where `r(s)` counts B-smoothings and `k(s)` counts loops.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{DiagramError, LinkDiagram};
use crate::trees::UnionFind;

/// Laurent polynomial in `q` as exponent → coefficient, without zero terms.
pub type Laurent = BTreeMap<i64, i64>;

/// Errors of the state-sum oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JonesError {
    /// The state sum enumerates `2ⁿ` smoothings; larger diagrams are refused.
    #[error("{0} crossings exceed the state-sum limit of {MAX_CROSSINGS}")]
    TooLarge(usize),
    /// The polynomial is not divisible by `q + q⁻¹`.
    #[error("the polynomial is not divisible by q + 1/q")]
    NotDivisible,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Largest diagram the state sum accepts.
pub const MAX_CROSSINGS: usize = 20;

/// Drop zero coefficients.
pub fn normalize(p: &mut Laurent) {
    p.retain(|_, c| *c != 0);
}

/// Sum of two polynomials.
pub fn add(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (&e, &c) in b {
        *out.entry(e).or_insert(0) += c;
    }
    normalize(&mut out);
    out
}

/// Product of two polynomials.
pub fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    normalize(&mut out);
    out
}

/// Exact quotient by `q + q⁻¹`.
pub fn divide_by_unknot(p: &Laurent) -> Result<Laurent, JonesError> {
    let mut rem = p.clone();
    normalize(&mut rem);
    let mut quot = Laurent::new();
    // Long division from the top degree: q^e = q^{e-1}(q + q⁻¹) − q^{e-2}.
    while let Some((&e, &c)) = rem.iter().next_back() {
        if rem.len() == 1 {
            return Err(JonesError::NotDivisible);
        }
        *quot.entry(e - 1).or_insert(0) += c;
        let sub: Laurent = [(e, c), (e - 2, c)].into_iter().collect();
        for (k, v) in sub {
            *rem.entry(k).or_insert(0) -= v;
        }
        normalize(&mut rem);
    }
    normalize(&mut quot);
    Ok(quot)
}

/// Loop count of the smoothing with B-smoothings at the crossings in `bmask`.
fn loops(d: &LinkDiagram, index: &BTreeMap<u32, usize>, bmask: u64) -> usize {
    let mut uf = UnionFind::new(index.len());
    for (k, c) in d.crossings().iter().enumerate() {
        let a = c.arcs.map(|l| index[&l]);
        if bmask >> k & 1 == 0 {
            uf.union(a[0], a[1]);
            uf.union(a[2], a[3]);
        } else {
            uf.union(a[0], a[3]);
            uf.union(a[1], a[2]);
        }
    }
    (0..index.len()).filter(|&v| uf.find(v) == v).count()
}

/// Unnormalized Jones polynomial (Khovanov normalization) of an oriented diagram.
pub fn jones_polynomial(d: &LinkDiagram) -> Result<Laurent, JonesError> {
    let n = d.n_crossings();
    if n > MAX_CROSSINGS {
        return Err(JonesError::TooLarge(n));
    }
    let signs = d.signs()?;
    let n_plus = signs.iter().filter(|&&s| s > 0).count() as i64;
    let n_minus = n as i64 - n_plus;
    let index: BTreeMap<u32, usize> = d
        .crossings()
        .iter()
        .flat_map(|c| c.arcs)
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, l)| (l, i))
        .collect();
    let mut bracket = Laurent::new();
    let unknot: Laurent = [(-1, 1), (1, 1)].into_iter().collect();
    let mut powers = vec![[(0, 1)].into_iter().collect::<Laurent>()];
    for bmask in 0..1u64 << n {
        let r = bmask.count_ones() as i64;
        let k = if n == 0 {
            d.n_components().max(1)
        } else {
            loops(d, &index, bmask)
        };
        while powers.len() <= k {
            let next = mul(powers.last().expect("nonempty"), &unknot);
            powers.push(next);
        }
        let sign = if r % 2 == 0 { 1 } else { -1 };
        for (&e, &c) in &powers[k] {
            *bracket.entry(e + r).or_insert(0) += sign * c;
        }
    }
    let shift = n_plus - 2 * n_minus;
    let global = if n_minus % 2 == 0 { 1 } else { -1 };
    let mut out: Laurent = bracket
        .into_iter()
        .map(|(e, c)| (e + shift, global * c))
        .collect();
    normalize(&mut out);
    Ok(out)
}

/// Human-readable form such as `q + q^3 + q^5 - q^9`.
pub fn format_laurent(p: &Laurent) -> String {
    let mut out = String::new();
    for (&e, &c) in p.iter().filter(|(_, &c)| c != 0) {
        let neg = c < 0;
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match e {
            0 => String::new(),
            1 => "q".into(),
            _ => format!("q^{e}"),
        };
        if mono.is_empty() {
            out.push_str(&a.to_string());
        } else if a == 1 {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{a}{mono}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

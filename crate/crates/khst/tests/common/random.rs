//! Randomized free cochain complexes with random acyclic matchings.

use std::collections::BTreeMap;

use khst::cube::{BigradedComplex, Generator};
use khst::homology::homology_of;
use khst::morse::{
    apply_d, morse_differential, verify_acyclic, HasseDiagram, MatchedComplex, Matching,
    MorseEngine, Vector,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random complex in degrees `0..=3`: a direct sum of elementary pieces
/// (`ℤ`, `ℤ --c--> ℤ`) scrambled by random unimodular changes of basis.
pub fn random_complex<R: Rng>(rng: &mut R) -> HasseDiagram {
    let top = 3i64;
    let mut degrees: Vec<i64> = Vec::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new(); // (source, target, coefficient)
    let n_pieces = rng.gen_range(3..9);
    for _ in 0..n_pieces {
        let d = rng.gen_range(0..=top);
        if d < top && rng.gen_bool(0.7) {
            let c = *[1i64, -1, 1, -1, 2, 3].choose(rng).expect("nonempty");
            degrees.push(d);
            degrees.push(d + 1);
            let n = degrees.len();
            entries.push((n - 2, n - 1, c));
        } else {
            degrees.push(d);
        }
    }
    let n = degrees.len();
    let mut m = vec![vec![0i64; n]; n]; // m[target][source]
    for (s, t, c) in entries {
        m[t][s] = c;
    }
    // Basis change e_a ↦ e_a + k e_b within one degree: column a += k column b,
    // row b −= k row a.
    for _ in 0..2 * n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || degrees[a] != degrees[b] {
            continue;
        }
        let k = *[1i64, -1, 2].choose(rng).expect("nonempty");
        for row in m.iter_mut() {
            row[a] += k * row[b];
        }
        let row_a = m[a].clone();
        for (x, y) in m[b].iter_mut().zip(&row_a) {
            *x -= k * y;
        }
    }
    let diff = (0..n)
        .map(|s| {
            (0..n)
                .filter(|&t| m[t][s] != 0)
                .map(|t| (t, m[t][s]))
                .collect()
        })
        .collect();
    HasseDiagram { degrees, diff }
}

/// A random acyclic matching: unit-weight pairs are added in random order
/// whenever the result stays a valid acyclic matching.
pub fn random_matching<R: Rng>(rng: &mut R, h: &HasseDiagram) -> Matching {
    let mut cand: Vec<(usize, usize)> = h
        .diff
        .iter()
        .enumerate()
        .flat_map(|(a, col)| {
            col.iter()
                .filter(|(_, c)| c.abs() == 1)
                .map(move |&(b, _)| (a, b))
        })
        .collect();
    cand.shuffle(rng);
    let mut m = Matching::empty();
    for (a, b) in cand {
        if m.pairs
            .iter()
            .any(|&(x, y)| x == a || y == a || x == b || y == b)
        {
            continue;
        }
        m.pairs.push((a, b));
        if !verify_acyclic(h, &m)
            .expect("adjacent degrees")
            .is_acyclic()
        {
            m.pairs.pop();
        }
    }
    m
}

/// View a Hasse diagram as a singly graded complex (`j = 0`).
pub fn as_bigraded(h: &HasseDiagram) -> BigradedComplex {
    BigradedComplex {
        gens: h
            .degrees
            .iter()
            .enumerate()
            .map(|(k, &i)| Generator {
                i,
                j: 0,
                name: format!("c{k}"),
            })
            .collect(),
        diff: h.diff.clone(),
        filtered: false,
    }
}

fn sub(a: &Vector<usize>, b: &Vector<usize>) -> Vector<usize> {
    let mut out = a.clone();
    for (&k, &v) in b {
        *out.entry(k).or_insert(0) -= v;
    }
    out.retain(|_, v| *v != 0);
    out
}

fn add(a: &Vector<usize>, b: &Vector<usize>) -> Vector<usize> {
    sub(a, &b.iter().map(|(&k, &v)| (k, -v)).collect())
}

/// Check every Morse-theory identity on one matched complex; returns a
/// description of the first failure.
pub fn check_morse_identities(h: &HasseDiagram, m: &Matching) -> Result<(), String> {
    let (crit, mh) = morse_differential(h, m).map_err(|e| e.to_string())?;
    let mb = as_bigraded(&mh);
    mb.check_d_squared()
        .map_err(|w| format!("Morse differential squares to nonzero: {w:?}"))?;
    let ho = homology_of(&as_bigraded(h)).map_err(|e| e.to_string())?;
    let hm = homology_of(&mb).map_err(|e| e.to_string())?;
    if ho != hm {
        return Err(format!("homology differs: {ho:?} vs {hm:?}"));
    }
    let sys = MatchedComplex::new(h, m);
    let mut eng = MorseEngine::new(&sys);
    let unit = |k: usize| Vector::from([(k, 1)]);
    for &c in &crit {
        let fc = eng.f(c).map_err(|e| e.to_string())?;
        let gfc = eng.g_chain(&fc).map_err(|e| e.to_string())?;
        if gfc != unit(c) {
            return Err(format!("g(f({c})) = {gfc:?}"));
        }
        // f is a chain map: d f = f d^M.
        let dfc = apply_d(&sys, &fc).map_err(|e| e.to_string())?;
        let dm = eng.differential(c).map_err(|e| e.to_string())?;
        let fdm = eng.f_chain(&dm).map_err(|e| e.to_string())?;
        if dfc != fdm {
            return Err(format!("f is not a chain map at {c}"));
        }
    }
    for x in 0..h.degrees.len() {
        let gx = eng.g(x).map_err(|e| e.to_string())?;
        let fgx = eng.f_chain(&gx).map_err(|e| e.to_string())?;
        let lhs = sub(&fgx, &unit(x));
        let chix = eng.chi(x).map_err(|e| e.to_string())?;
        let dchi = apply_d(&sys, &chix).map_err(|e| e.to_string())?;
        let dx = apply_d(&sys, &unit(x)).map_err(|e| e.to_string())?;
        let chid = eng.chi_chain(&dx).map_err(|e| e.to_string())?;
        let rhs = add(&dchi, &chid);
        if lhs != rhs {
            return Err(format!(
                "f g − id ≠ dχ + χd at cell {x}: {lhs:?} vs {rhs:?}"
            ));
        }
        // g is a chain map: d^M g = g d.
        let gdx = eng.g_chain(&dx).map_err(|e| e.to_string())?;
        let mut dmg: Vector<usize> = BTreeMap::new();
        for (&c, &v) in &gx {
            let dm = eng.differential(c).map_err(|e| e.to_string())?;
            dmg = add(&dmg, &dm.iter().map(|(&k, &w)| (k, v * w)).collect());
        }
        if gdx != dmg {
            return Err(format!("g is not a chain map at {x}"));
        }
    }
    Ok(())
}

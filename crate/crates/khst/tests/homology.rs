//! Smith normal form, bigraded homology and filtered levels.

use std::collections::BTreeMap;

use khst::cube::{BigradedComplex, Generator};
use khst::homology::{
    check_complex, filtered_homology_levels, homology_of, rational_ranks, smith_normal_form,
    snf_sparse, HomologyError, SparseMatrix,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    smith_normal_form(m).factors
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn complex(gens: &[(i64, i64)], diff: Vec<Vec<(usize, i64)>>, filtered: bool) -> BigradedComplex {
    BigradedComplex {
        gens: gens
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| Generator {
                i,
                j,
                name: format!("g{k}"),
            })
            .collect(),
        diff,
        filtered,
    }
}

#[test]
fn smith_normal_form_of_known_matrices() {
    assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), big(&[1, 6]));
    assert_eq!(
        factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
        big(&[2, 6, 12])
    );
    assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), big(&[]));
    assert_eq!(factors(&[vec![1, 1], vec![1, -1]]), big(&[1, 2]));
    assert_eq!(factors(&[]), big(&[]));
    let r = smith_normal_form(&[vec![4, 0], vec![0, 6], vec![0, 0]]);
    assert_eq!(r.rank(), 2);
    assert_eq!(r.torsion(), big(&[2, 12]));
}

#[test]
fn smith_normal_form_beyond_machine_integers() {
    let a = 3i64.pow(30);
    let b = 2i64.pow(30);
    let r = factors(&[vec![a, 0], vec![0, b]]);
    assert_eq!(r[0], BigInt::from(1));
    assert_eq!(r[1], BigInt::from(a) * BigInt::from(b));
}

#[test]
fn smith_normal_form_random_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..6);
        let m: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
            .collect();
        let f = factors(&m);
        for w in f.windows(2) {
            assert_eq!(
                &w[1] % &w[0],
                BigInt::from(0),
                "divisibility chain for {m:?}"
            );
        }
        assert!(f.iter().all(|x| *x > BigInt::from(0)));
        let d = det(&m);
        if d == 0 {
            assert!(f.len() < n);
        } else {
            assert_eq!(f.len(), n);
            let prod: BigInt = f.iter().product();
            assert_eq!(prod, BigInt::from(d.abs()), "{m:?}");
        }
        let mut s = SparseMatrix::new(n, n);
        for (r, row) in m.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                s.add(r, c, v);
            }
        }
        assert_eq!(snf_sparse(&s).factors, f);
    }
}

#[test]
fn sparse_entries_cancel() {
    let mut s = SparseMatrix::new(1, 1);
    s.add(0, 0, 3);
    s.add(0, 0, -3);
    assert!(s.rows[0].is_empty());
    assert_eq!(snf_sparse(&s).rank(), 0);
}

#[test]
fn homology_of_small_complexes() {
    // Z --2--> Z: a Z/2 in degree 1.
    let c = complex(&[(0, 0), (1, 0)], vec![vec![(1, 2)], vec![]], false);
    let h = homology_of(&c).unwrap();
    assert_eq!(h.groups.len(), 1);
    assert_eq!(h.at(1, 0).torsion, vec![2]);
    assert_eq!(h.at(1, 0).rank, 0);
    assert!(h.has_even_torsion());
    assert_eq!(h.total_rank(), 0);
    assert_eq!(h.at(1, 0).to_string(), "Z2");
    // Free part in two bidegrees; the isomorphism cancels.
    let c = complex(
        &[(0, 1), (0, 3), (1, 3), (2, 5)],
        vec![vec![], vec![(2, -1)], vec![], vec![]],
        false,
    );
    let h = homology_of(&c).unwrap();
    let keys: Vec<(i64, i64)> = h.groups.keys().copied().collect();
    assert_eq!(keys, vec![(0, 1), (2, 5)]);
    assert_eq!(h.euler(), BTreeMap::from([(1, 1), (5, 1)]));
    assert_eq!(c.euler(), BTreeMap::from([(1, 1), (5, 1)]));
    assert!(!h.has_even_torsion());
}

#[test]
fn d_squared_violations_are_reported() {
    let c = complex(
        &[(0, 0), (1, 0), (2, 0)],
        vec![vec![(1, 1)], vec![(2, 1)], vec![]],
        false,
    );
    assert_eq!(
        check_complex(&c),
        Err(HomologyError::NotAComplex {
            source_gen: 0,
            target: 2,
            coefficient: 1
        })
    );
    assert!(homology_of(&c).is_err());
    assert!(rational_ranks(&c).is_err());
}

#[test]
fn rational_ranks_ignore_torsion() {
    let c = complex(
        &[(0, 0), (1, 0), (1, 2)],
        vec![vec![(1, 2)], vec![], vec![]],
        false,
    );
    assert_eq!(rational_ranks(&c).unwrap(), BTreeMap::from([(1, 1)]));
}

#[test]
fn filtered_levels() {
    // a (j=0) ↦ b (j=0) + c (j=4): the cycles b and c are homologous up to
    // sign, so [b] = −[c] has a representative at level 4.
    let c = complex(
        &[(0, 0), (1, 0), (1, 4), (1, 2)],
        vec![vec![(1, 1), (2, 1)], vec![], vec![], vec![]],
        true,
    );
    let cls = [
        BTreeMap::from([(1, 1)]),
        BTreeMap::from([(2, 1)]),
        BTreeMap::from([(3, 1)]),
        BTreeMap::from([(1, 1), (2, 1)]),
    ];
    let levels = filtered_homology_levels(&c, &cls).unwrap();
    assert_eq!(levels, vec![Some(4), Some(4), Some(2), None]);
    let not_cycle = [BTreeMap::from([(0, 1)])];
    assert_eq!(
        filtered_homology_levels(&c, &not_cycle),
        Err(HomologyError::NotACycle(0))
    );
}

#[test]
fn grid_and_json() {
    let c = complex(
        &[(0, 1), (0, 3), (2, 5), (3, 7), (3, 9)],
        vec![vec![]; 5],
        false,
    );
    let h = homology_of(&c).unwrap();
    let grid = h.grid();
    let lines: Vec<&str> = grid.lines().collect();
    assert!(lines[0].contains("j\\i"));
    assert!(lines[1].trim_start().starts_with('9'));
    assert_eq!(lines.len(), 1 + 5);
    let v = h.to_json();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 5);
    assert_eq!(arr[0]["i"], 0);
    assert_eq!(arr[0]["j"], 1);
    assert_eq!(arr[0]["rank"], 1);
    let empty = homology_of(&complex(&[], vec![], false)).unwrap();
    assert_eq!(empty.grid(), "(zero)\n");
}

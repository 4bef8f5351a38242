//! Per-diagram subcommands.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use khst::cube::{build_khovanov_complex, build_lee_complex, BigradedComplex, CubeComplex};
use khst::diagram::{dual_tait, TaitGraph};
use khst::homology::{homology_of, rational_ranks, BigradedHomology};
use khst::jones::{format_laurent, jones_polynomial, Laurent};
use khst::sinv::{s_invariant as s_report, s_invariant_cube};
use khst::stc::{
    build_st_complex, generator_name, torsion_witness_alternating, StComplex, StVariant,
};
use khst::trees::{partial_smoothing, relation_graph, SpanningTree};

use crate::input::{load, Loaded};
use crate::{CliError, DiagramArgs, Method, Report, VariantArg};

/// Left-aligned text table.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let n = headers.len();
    let mut w: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (k, c) in r.iter().enumerate().take(n) {
            w[k] = w[k].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{c}{}", " ".repeat(w[k] - c.chars().count())))
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(headers.to_vec());
    s.push_str(&line(
        w.iter()
            .map(|&x| "-".repeat(x))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    ));
    for r in rows {
        s.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    s
}

/// Crossing ids (1-based) of the edge order, smallest first.
fn order_ids(g: &TaitGraph) -> Vec<usize> {
    g.order().iter().map(|&e| g.edge(e).crossing + 1).collect()
}

fn tree_crossings(g: &TaitGraph, t: &SpanningTree) -> Vec<usize> {
    let mut v: Vec<usize> = (0..g.n_edges())
        .filter(|&e| t.contains(e))
        .map(|e| g.edge(e).crossing + 1)
        .collect();
    v.sort_unstable();
    v
}

fn header(l: &Loaded, g: &TaitGraph) -> String {
    format!(
        "{}: {} crossings, {} component(s), edge order {:?}\n",
        l.name,
        l.diagram.n_crossings(),
        l.diagram.n_components(),
        order_ids(g)
    )
}

pub fn tait(args: &DiagramArgs, dual: bool) -> Result<Report, CliError> {
    let l = load(args)?;
    let g0 = l.tait()?;
    let g = if dual { dual_tait(&g0) } else { g0 };
    let writhe = g.writhe_signs();
    let edges: Vec<Value> = g
        .order()
        .iter()
        .map(|&e| {
            let x = g.edge(e);
            json!({
                "label": g.label(e),
                "crossing": x.crossing + 1,
                "ends": x.ends,
                "sign": x.sign,
                "writhe_sign": writhe.map(|w| w[e]),
            })
        })
        .collect();
    let rows: Vec<Vec<String>> = g
        .order()
        .iter()
        .map(|&e| {
            let x = g.edge(e);
            vec![
                g.label(e).to_string(),
                (x.crossing + 1).to_string(),
                format!("{}-{}", x.ends[0], x.ends[1]),
                if x.sign > 0 { "+" } else { "-" }.to_string(),
                writhe.map_or(
                    "?".into(),
                    |w| if w[e] > 0 { "+".into() } else { "-".into() },
                ),
            ]
        })
        .collect();
    let mut text = header(&l, &g);
    text.push_str(&format!(
        "{} vertices, {} edges{}\n",
        g.n_vertices(),
        g.n_edges(),
        if dual { " (dual)" } else { "" }
    ));
    text.push_str(&table(
        &["label", "crossing", "ends", "sign", "writhe"],
        &rows,
    ));
    Ok(Report {
        json: json!({
            "knot": l.name,
            "dual": dual,
            "vertices": g.n_vertices(),
            "components": g.n_components(),
            "writhe": g.writhe(),
            "dotted_arc": g.arc_labels()[g.dotted_arc()],
            "edge_order": order_ids(&g),
            "edges": edges,
        }),
        table: text,
        mismatch: false,
    })
}

pub fn trees(args: &DiagramArgs, dump_matching: bool, relation: bool) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let st = build_st_complex(&g, StVariant::Unreduced)?;
    let mut rows = Vec::new();
    let mut out = Vec::new();
    for (k, td) in st.trees.iter().enumerate() {
        let p = &st.generators[st.index_of(k, true).expect("T+ exists")];
        let word = td.word.ascii();
        let smoothing = partial_smoothing(&g, &td.tree).to_string();
        let mut v = json!({
            "tree": k + 1,
            "edges": td.tree.labels(&g),
            "crossings": tree_crossings(&g, &td.tree),
            "word": word,
            "smoothing": smoothing,
            "i": p.i,
            "j_plus": p.j,
            "j_minus": p.j - 2,
        });
        let mut row = vec![
            format!("T{}", k + 1),
            format!("{:?}", td.tree.labels(&g)),
            word,
            smoothing,
            format!("({}, {})", p.i, p.j),
            format!("({}, {})", p.i, p.j - 2),
        ];
        if dump_matching {
            let mw = td.matching_word.ascii();
            v["matching_word"] = json!(mw);
            v["twist_tree"] = json!({
                "circles": td.twist.n_vertices,
                "root": td.twist.root,
                "edges": td.twist.edges.iter().map(|e| json!({
                    "label": g.label(e.edge),
                    "ends": e.ends,
                    "negative": e.negative,
                    "letter": e.letter.ascii(),
                })).collect::<Vec<_>>(),
                "leaf_order": td.twist.steps.iter().map(|s| s.leaf).collect::<Vec<_>>(),
            });
            row.push(mw);
        }
        out.push(v);
        rows.push(row);
    }
    let mut headers = vec!["tree", "edges", "word", "smoothing", "T+ (i,j)", "T- (i,j)"];
    if dump_matching {
        headers.push("matching");
    }
    let mut text = header(&l, &g);
    text.push_str(&table(&headers, &rows));
    let mut j = json!({"knot": l.name, "edge_order": order_ids(&g), "trees": out});
    if relation {
        let ts: Vec<SpanningTree> = st.trees.iter().map(|t| t.tree).collect();
        let rel = relation_graph(&g, &ts);
        let pairs: Vec<[usize; 2]> = rel
            .iter()
            .enumerate()
            .flat_map(|(a, bs)| bs.iter().map(move |&b| [a + 1, b + 1]))
            .collect();
        text.push_str("\nrelation (greater > smaller):\n");
        for [a, b] in &pairs {
            text.push_str(&format!("  T{a} > T{b}\n"));
        }
        j["relation"] = json!(pairs);
    }
    Ok(Report {
        json: j,
        table: text,
        mismatch: false,
    })
}

fn st_table(st: &StComplex) -> String {
    let mut by_deg: BTreeMap<(i64, i64), Vec<String>> = BTreeMap::new();
    for x in &st.generators {
        by_deg
            .entry((x.i, x.j))
            .or_default()
            .push(generator_name(x.tree, x.plus));
    }
    let rows: Vec<Vec<String>> = by_deg
        .iter()
        .rev()
        .map(|(&(i, j), v)| vec![i.to_string(), j.to_string(), v.join(" ")])
        .collect();
    let mut s = format!(
        "{} generators ({} trees)\n",
        st.generators.len(),
        st.trees.len()
    );
    s.push_str(&table(&["i", "j", "generators"], &rows));
    s.push_str("\ndifferential:\n");
    for (a, col) in st.complex.diff.iter().enumerate() {
        let terms: Vec<String> = col
            .iter()
            .map(|&(b, c)| match c {
                1 => st.complex.gens[b].name.clone(),
                -1 => format!("-{}", st.complex.gens[b].name),
                _ => format!("{c}{}", st.complex.gens[b].name),
            })
            .collect();
        let rhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        };
        s.push_str(&format!("  d {} = {rhs}\n", st.complex.gens[a].name));
    }
    s
}

pub fn stcomplex(
    args: &DiagramArgs,
    variant: VariantArg,
    dump_trees: bool,
) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let st = build_st_complex(&g, variant.st())?;
    let mut j = st.to_json(&g);
    j["knot"] = json!(l.name);
    j["variant"] = json!(variant_name(variant));
    j["edge_order"] = json!(order_ids(&g));
    if dump_trees {
        j["trees"] = st
            .trees
            .iter()
            .enumerate()
            .map(|(k, td)| json!({"tree": k + 1, "edges": td.tree.labels(&g), "word": td.word.ascii()}))
            .collect();
    }
    let mut text = header(&l, &g);
    text.push_str(&st_table(&st));
    Ok(Report {
        json: j,
        table: text,
        mismatch: false,
    })
}

fn variant_name(v: VariantArg) -> &'static str {
    match v {
        VariantArg::Unreduced => "unreduced",
        VariantArg::ReducedPlus => "reduced_plus",
        VariantArg::ReducedMinus => "reduced_minus",
        VariantArg::Lee => "lee",
    }
}

fn cube_complex(g: &TaitGraph, v: VariantArg) -> Result<CubeComplex, CliError> {
    Ok(match v {
        VariantArg::Lee => build_lee_complex(g)?,
        other => build_khovanov_complex(g, other.st().cube().0)?,
    })
}

/// Homology of one complex: integral bigraded groups, or ℚ-ranks for Lee.
enum Computed {
    Bigraded(BigradedHomology),
    Ranks(BTreeMap<i64, usize>),
}

impl Computed {
    fn of(c: &BigradedComplex, v: VariantArg) -> Result<Computed, CliError> {
        Ok(if v == VariantArg::Lee {
            Computed::Ranks(rational_ranks(c)?)
        } else {
            Computed::Bigraded(homology_of(c)?)
        })
    }

    fn json(&self) -> Value {
        match self {
            Computed::Bigraded(h) => h.to_json(),
            Computed::Ranks(r) => r
                .iter()
                .map(|(&i, &n)| json!({"i": i, "rank": n}))
                .collect(),
        }
    }

    fn text(&self) -> String {
        match self {
            Computed::Bigraded(h) => h.grid(),
            Computed::Ranks(r) => {
                let rows: Vec<Vec<String>> = r
                    .iter()
                    .map(|(i, n)| vec![i.to_string(), format!("Q^{n}")])
                    .collect();
                table(&["i", "Lee homology"], &rows)
            }
        }
    }

    fn same(&self, other: &Computed) -> bool {
        match (self, other) {
            (Computed::Bigraded(a), Computed::Bigraded(b)) => a == b,
            (Computed::Ranks(a), Computed::Ranks(b)) => a == b,
            _ => false,
        }
    }
}

pub fn homology(
    args: &DiagramArgs,
    variant: VariantArg,
    method: Method,
) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let st = if method != Method::Cube {
        Some(Computed::of(
            &build_st_complex(&g, variant.st())?.complex,
            variant,
        )?)
    } else {
        None
    };
    let cube = if method != Method::St {
        Some(Computed::of(&cube_complex(&g, variant)?.complex, variant)?)
    } else {
        None
    };
    let mut j = json!({"knot": l.name, "variant": variant_name(variant)});
    let mut text = header(&l, &g);
    let mut mismatch = false;
    match (&st, &cube) {
        (Some(a), Some(b)) => {
            mismatch = !a.same(b);
            j["homology"] = a.json();
            j["cube"] = b.json();
            j["agree"] = json!(!mismatch);
            text.push_str(&a.text());
            text.push_str(if mismatch {
                "st != cube: MISMATCH\n"
            } else {
                "st == cube: OK\n"
            });
        }
        (Some(a), None) | (None, Some(a)) => {
            j["method"] = json!(if st.is_some() { "st" } else { "cube" });
            j["homology"] = a.json();
            text.push_str(&a.text());
        }
        (None, None) => unreachable!("at least one method runs"),
    }
    Ok(Report {
        json: j,
        table: text,
        mismatch,
    })
}

pub fn s_invariant(args: &DiagramArgs, oracle: bool) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let r = s_report(&g)?;
    let mut j = serde_json::to_value(&r).expect("report serializes");
    j["knot"] = json!(l.name);
    let mut text = header(&l, &g);
    text.push_str(&format!(
        "s = {}\nlevels of [T+], [T-]: {}, {}\nlower bound j(T+) - 1 = {} (Seifert graph: {})\norientation tree: {:?}\nedge order: {:?}\n",
        r.s, r.s_st_plus, r.s_st_minus, r.lower_bound, r.seifert_bound, r.tree, r.edge_order
    ));
    let mut mismatch = false;
    if oracle {
        let (lp, lm, s) = s_invariant_cube(&g)?;
        mismatch = s != r.s;
        j["oracle"] = json!({"level_sum": lp, "level_difference": lm, "s": s, "agree": !mismatch});
        text.push_str(&format!(
            "cube oracle: s = {s} ({})\n",
            if mismatch { "MISMATCH" } else { "OK" }
        ));
    }
    Ok(Report {
        json: j,
        table: text,
        mismatch,
    })
}

pub fn verify(
    args: &DiagramArgs,
    variant: Option<VariantArg>,
    permutations: usize,
    seed: u64,
) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let variants: Vec<VariantArg> = variant.map_or(VariantArg::ALL.to_vec(), |v| vec![v]);
    let mut results = Vec::new();
    let mut text = header(&l, &g);
    let mut mismatch = false;
    for &v in &variants {
        let a = Computed::of(&build_st_complex(&g, v.st())?.complex, v)?;
        let b = Computed::of(&cube_complex(&g, v)?.complex, v)?;
        let ok = a.same(&b);
        mismatch |= !ok;
        results.push(json!({"variant": variant_name(v), "agree": ok}));
        text.push_str(&format!(
            "{}: st == cube: {}\n",
            variant_name(v),
            if ok { "OK" } else { "MISMATCH" }
        ));
    }
    let mut orders = Vec::new();
    if permutations > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = homology_of(&build_st_complex(&g, StVariant::Unreduced)?.complex)?;
        for _ in 0..permutations {
            let mut order: Vec<usize> = (0..g.n_edges()).collect();
            order.shuffle(&mut rng);
            let h = g.with_order(&order);
            let ok = homology_of(&build_st_complex(&h, StVariant::Unreduced)?.complex)? == base;
            mismatch |= !ok;
            let ids = order_ids(&h);
            text.push_str(&format!(
                "edge order {ids:?}: {}\n",
                if ok { "OK" } else { "MISMATCH" }
            ));
            orders.push(json!({"edge_order": ids, "agree": ok}));
        }
    }
    Ok(Report {
        json: json!({"knot": l.name, "variants": results, "edge_orders": orders, "ok": !mismatch}),
        table: text,
        mismatch,
    })
}

fn laurent_json(p: &Laurent) -> Value {
    p.iter().map(|(&e, &c)| json!([e, c])).collect()
}

pub fn euler(args: &DiagramArgs) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let h = homology_of(&build_st_complex(&g, StVariant::Unreduced)?.complex)?;
    let chi = h.euler();
    let jones = jones_polynomial(&l.diagram)?;
    let ok = chi == jones;
    let mut text = header(&l, &g);
    text.push_str(&format!(
        "euler characteristic: {}\njones polynomial:     {}\n{}\n",
        format_laurent(&chi),
        format_laurent(&jones),
        if ok { "OK" } else { "MISMATCH" }
    ));
    Ok(Report {
        json: json!({
            "knot": l.name,
            "euler": laurent_json(&chi),
            "jones": laurent_json(&jones),
            "euler_text": format_laurent(&chi),
            "agree": ok,
        }),
        table: text,
        mismatch: !ok,
    })
}

pub fn torsion(args: &DiagramArgs) -> Result<Report, CliError> {
    let l = load(args)?;
    let g = l.tait()?;
    let cert = torsion_witness_alternating(&g)?;
    let mut j = serde_json::to_value(&cert).expect("certificate serializes");
    j["knot"] = json!(l.name);
    let mut text = header(&l, &g);
    text.push_str(&format!(
        "witness: Γ({}, {}) = {} at (i, j) = ({}, {})\ncycle length {}, {} graph, dotted arc {}\n",
        cert.source,
        cert.target,
        cert.incidence,
        cert.bidegree.0,
        cert.bidegree.1,
        cert.cycle_length,
        if cert.dual { "dual" } else { "Tait" },
        cert.dotted_arc
    ));
    Ok(Report {
        json: j,
        table: text,
        mismatch: false,
    })
}

//! Corpus sweep: run a battery of checks over every entry.
//!
//! Entries are processed in parallel (one scoped thread per entry) unless
//! `--fail-fast` is given, in which case they run in order and the sweep
//! stops at the first mismatch or error.  Results are always reported in
//! corpus order, so the output is deterministic.

use serde_json::{json, Value};

use khst::corpus::{Corpus, CorpusEntry};
use khst::cube::{build_khovanov_complex, build_lee_complex, Variant};
use khst::diagram::checkerboard_and_tait;
use khst::homology::{homology_of, rational_ranks};
use khst::jones::{format_laurent, jones_polynomial};
use khst::sinv::{s_invariant, s_invariant_cube};
use khst::stc::{build_st_complex, torsion_witness_alternating, StVariant};

use crate::commands::table;
use crate::{Check, CliError, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    Mismatch,
    Skipped,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Mismatch => "mismatch",
            Status::Skipped => "skipped",
        }
    }
}

struct CheckResult {
    check: Check,
    status: Status,
    detail: Value,
    note: String,
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Torsion => "torsion",
        Check::Euler => "euler",
        Check::S => "s",
        Check::Homology => "homology",
    }
}

fn run_check(e: &CorpusEntry, check: Check) -> Result<CheckResult, CliError> {
    let d = e.diagram()?;
    let g = checkerboard_and_tait(&d, None)?;
    let knot = g.n_components() == 1;
    let done = |status: Status, detail: Value, note: String| {
        Ok(CheckResult {
            check,
            status,
            detail,
            note,
        })
    };
    match check {
        Check::Torsion => {
            let h = homology_of(&build_st_complex(&g, StVariant::Unreduced)?.complex)?;
            let z2 = h.has_even_torsion();
            let mut status = match e.expected.z2_torsion {
                Some(x) if x != z2 => Status::Mismatch,
                _ => Status::Ok,
            };
            let trivial =
                h.total_rank() == 2 && !z2 && h.groups.values().all(|x| x.torsion.is_empty());
            let mut detail = json!({"z2": z2, "expected": e.expected.z2_torsion});
            let mut note = format!("Z2 {}", if z2 { "present" } else { "absent" });
            if knot && e.alternating && !trivial {
                let cert = torsion_witness_alternating(&g)?;
                let (i, j) = cert.bidegree;
                let certified = cert.incidence.abs() == 2 && h.at(i, j).torsion.contains(&2);
                if !certified || !z2 {
                    status = Status::Mismatch;
                }
                detail["witness"] = json!({
                    "source": cert.source,
                    "target": cert.target,
                    "incidence": cert.incidence,
                    "bidegree": [i, j],
                });
                note.push_str(&format!(", witness Γ = {} at ({i},{j})", cert.incidence));
            }
            done(status, detail, note)
        }
        Check::Euler => {
            let h = homology_of(&build_st_complex(&g, StVariant::Unreduced)?.complex)?;
            let chi = h.euler();
            let jones = jones_polynomial(&d)?;
            let recorded = e.expected.jones_polynomial();
            let ok = chi == jones && recorded.as_ref().is_none_or(|r| *r == jones);
            let status = if ok { Status::Ok } else { Status::Mismatch };
            done(
                status,
                json!({"euler": format_laurent(&chi), "jones": format_laurent(&jones)}),
                format_laurent(&chi),
            )
        }
        Check::S => {
            if !knot {
                return done(
                    Status::Skipped,
                    json!({"reason": "not a knot"}),
                    "link".into(),
                );
            }
            let r = s_invariant(&g)?;
            let (_, _, oracle) = s_invariant_cube(&g)?;
            let ok = r.s == oracle && e.expected.s.is_none_or(|s| s == r.s) && r.lower_bound <= r.s;
            let status = if ok { Status::Ok } else { Status::Mismatch };
            done(
                status,
                json!({"s": r.s, "oracle": oracle, "expected": e.expected.s, "lower_bound": r.lower_bound}),
                format!("s = {}", r.s),
            )
        }
        Check::Homology => {
            let mut ok = true;
            for v in [
                Variant::Unreduced,
                Variant::ReducedPlus,
                Variant::ReducedMinus,
            ] {
                let a = homology_of(&build_st_complex(&g, v.into())?.complex)?;
                let b = homology_of(&build_khovanov_complex(&g, v)?.complex)?;
                ok &= a == b;
            }
            let a = rational_ranks(&build_st_complex(&g, StVariant::Lee)?.complex)?;
            let b = rational_ranks(&build_lee_complex(&g)?.complex)?;
            ok &= a == b;
            let status = if ok { Status::Ok } else { Status::Mismatch };
            done(
                status,
                json!({"agree": ok}),
                if ok {
                    "st == cube".into()
                } else {
                    "st != cube".into()
                },
            )
        }
    }
}

struct EntryResult {
    name: String,
    crossings: usize,
    outcome: Result<Vec<CheckResult>, String>,
}

impl EntryResult {
    fn failed(&self) -> bool {
        match &self.outcome {
            Ok(v) => v.iter().any(|c| c.status == Status::Mismatch),
            Err(_) => true,
        }
    }
}

fn run_entry(e: &CorpusEntry, checks: &[Check]) -> EntryResult {
    let outcome = checks
        .iter()
        .map(|&c| run_check(e, c))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|x| x.to_string());
    EntryResult {
        name: e.name.clone(),
        crossings: e.crossings(),
        outcome,
    }
}

pub fn sweep(
    path: Option<&str>,
    checks: &[Check],
    max_crossings: usize,
    fail_fast: bool,
) -> Result<Report, CliError> {
    let corpus = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_string(),
                source,
            })?;
            Corpus::from_json(&text)?
        }
        None => Corpus::bundled(),
    };
    let entries: Vec<&CorpusEntry> = corpus.up_to(max_crossings).collect();
    let mut results: Vec<EntryResult> = Vec::with_capacity(entries.len());
    if fail_fast {
        for e in &entries {
            let r = run_entry(e, checks);
            if let Err(msg) = &r.outcome {
                return Err(CliError::Usage(format!("{}: {msg}", r.name)));
            }
            let stop = r.failed();
            results.push(r);
            if stop {
                break;
            }
        }
    } else {
        results = std::thread::scope(|s| {
            let handles: Vec<_> = entries
                .iter()
                .map(|e| s.spawn(move || run_entry(e, checks)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        });
    }
    let mut json_entries = Vec::new();
    let mut rows = Vec::new();
    let (mut passed, mut failed, mut errors) = (0, 0, 0);
    for r in &results {
        match &r.outcome {
            Ok(cs) => {
                let status = if r.failed() { "mismatch" } else { "ok" };
                if r.failed() {
                    failed += 1;
                } else {
                    passed += 1;
                }
                let mut obj = serde_json::Map::new();
                for c in cs {
                    let mut d = c.detail.clone();
                    d["status"] = json!(c.status.as_str());
                    obj.insert(check_name(c.check).into(), d);
                }
                json_entries.push(json!({"name": r.name, "crossings": r.crossings, "status": status, "checks": obj}));
                let notes: Vec<String> = cs
                    .iter()
                    .map(|c| {
                        format!(
                            "{}: {} ({})",
                            check_name(c.check),
                            c.status.as_str(),
                            c.note
                        )
                    })
                    .collect();
                rows.push(vec![
                    r.name.clone(),
                    r.crossings.to_string(),
                    status.into(),
                    notes.join("; "),
                ]);
            }
            Err(msg) => {
                errors += 1;
                json_entries.push(json!({"name": r.name, "crossings": r.crossings, "status": "error", "error": msg}));
                rows.push(vec![
                    r.name.clone(),
                    r.crossings.to_string(),
                    "error".into(),
                    msg.clone(),
                ]);
            }
        }
    }
    let names: Vec<&str> = checks.iter().map(|&c| check_name(c)).collect();
    let mut text = table(&["entry", "crossings", "status", "checks"], &rows);
    text.push_str(&format!("{passed} ok, {failed} mismatch, {errors} error\n"));
    let report = Report {
        json: json!({
            "corpus": path.unwrap_or("bundled"),
            "checks": names,
            "max_crossings": max_crossings,
            "entries": json_entries,
            "summary": {"ok": passed, "mismatch": failed, "error": errors},
        }),
        table: text,
        mismatch: failed > 0,
    };
    if errors > 0 {
        return Err(CliError::Sweep {
            report: Box::new(report),
            errors,
        });
    }
    Ok(report)
}

//! Planar diagram codes, checkerboard colouring and signed Tait graphs.
//!
//! A [`LinkDiagram`] is parsed from a PD code (the canonical input) or a DT
//! code.  From it, [`checkerboard_and_tait`] builds the signed, totally
//! ordered [`TaitGraph`] whose vertices are the black regions and whose edges
//! are the crossings.  The Tait graph keeps the PD slot data of every
//! crossing, which is exactly the rotation-system information needed to
//! trace the boundary circles of regular neighbourhoods of spanning
//! subgraphs: the arcs of the diagram are the corners of the Tait graph.
//!
//! Conventions (fixed once, validated by the test-suite):
//!
//! * PD slots `[a, b, c, d]` are listed counterclockwise starting from the
//!   incoming under-strand.
//! * The A-smoothing of `[a, b, c, d]` joins `a–b` and `c–d`; the
//!   B-smoothing joins `a–d` and `b–c`.
//! * A Tait edge is positive iff its black regions are the A-regions of the
//!   crossing (the corners between slots 1–2 and 3–0), i.e. the A-smoothing
//!   connects the two black regions.  So a spanning subgraph `H` contains a
//!   positive edge iff the crossing is A-smoothed and a negative edge iff it
//!   is B-smoothed.
//! * The region on the left of the lowest arc label, traversed in the parsed
//!   direction, is black (a flag selects the other colour class).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while parsing or validating a diagram.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    /// Syntax error or structurally impossible code.
    #[error("malformed diagram code: {0}")]
    MalformedCode(String),
    /// The underlying 4-valent graph is disconnected.
    #[error("split diagram: the crossing graph has {0} connected pieces")]
    SplitDiagram(usize),
    /// An arc label does not appear exactly twice.
    #[error("arc {label} appears {count} times (expected exactly 2)")]
    DanglingArc { label: i64, count: usize },
    /// A crossing sign was requested but the orientation of a component is unknown.
    #[error("orientation of component {0} cannot be determined")]
    MissingOrientation(usize),
}

pub type Result<T> = std::result::Result<T, DiagramError>;

/// A crossing of a planar diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    /// 1-based position of the crossing in the PD code.
    pub id: usize,
    /// Arc labels counterclockwise from the incoming under-strand.
    pub arcs: [u32; 4],
    /// Writhe sign (`+1`/`-1`), present when the orientation is known.
    pub sign: Option<i8>,
}

impl Crossing {
    /// Slots `(under_in, under_out)`; the over-strand occupies slots 1 and 3.
    pub fn under_slots(&self) -> (usize, usize) {
        (0, 2)
    }
}

/// Position of an arc end: crossing index (0-based) and slot.
type Occ = (usize, usize);

/// A validated planar link diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    arcs: Vec<u32>,
    /// Arcs of each component in traversal order (parsed direction).
    components: Vec<Vec<u32>>,
    /// Tail and head of each arc in the parsed direction, indexed like `arcs`.
    ends: Vec<(Occ, Occ)>,
    /// Whether the parsed direction of each component is known.
    oriented: Vec<bool>,
    /// User reversal of each component relative to the parsed direction.
    reversed: Vec<bool>,
    dotted_arc: u32,
    edge_order: Option<Vec<usize>>,
}

#[derive(Deserialize)]
struct PdObject {
    pd: Vec<Vec<i64>>,
    #[serde(default)]
    signs: Option<Vec<i64>>,
    #[serde(default)]
    orientation: Option<Vec<i64>>,
    #[serde(default)]
    dotted_arc: Option<i64>,
    #[serde(default)]
    edge_order: Option<Vec<i64>>,
}

/// Parse a PD code.
///
/// Accepted forms: a JSON array of 4-tuples, a JSON object with a `"pd"`
/// field and optional `"signs"`, `"orientation"`, `"dotted_arc"` and
/// `"edge_order"` fields, or the `PD[X[..], ..]` notation.  The empty code
/// `[]` is the crossingless unknot.
pub fn parse_diagram(text: &str) -> Result<LinkDiagram> {
    let trimmed = text.trim();
    if trimmed.starts_with("PD") || trimmed.starts_with("X[") {
        let tuples = parse_x_notation(trimmed)?;
        return LinkDiagram::from_pd(&tuples, None, None, None, None);
    }
    let value: serde_json::Value = serde_json::from_str(trimmed)
        .map_err(|e| DiagramError::MalformedCode(format!("invalid JSON: {e}")))?;
    match value {
        serde_json::Value::Array(_) => {
            let tuples: Vec<Vec<i64>> = serde_json::from_value(value).map_err(|e| {
                DiagramError::MalformedCode(format!("expected integer tuples: {e}"))
            })?;
            LinkDiagram::from_pd(&tuples, None, None, None, None)
        }
        serde_json::Value::Object(_) => {
            let obj: PdObject = serde_json::from_value(value)
                .map_err(|e| DiagramError::MalformedCode(format!("bad PD object: {e}")))?;
            LinkDiagram::from_pd(
                &obj.pd,
                obj.signs.as_deref(),
                obj.orientation.as_deref(),
                obj.dotted_arc,
                obj.edge_order.as_deref(),
            )
        }
        _ => Err(DiagramError::MalformedCode(
            "expected a JSON array or object".into(),
        )),
    }
}

fn parse_x_notation(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(pos) = rest.find("X[") {
        let after = &rest[pos + 2..];
        let end = after
            .find(']')
            .ok_or_else(|| DiagramError::MalformedCode("unterminated X[...]".into()))?;
        let nums: std::result::Result<Vec<i64>, _> = after[..end]
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect();
        out.push(nums.map_err(|e| DiagramError::MalformedCode(format!("bad integer: {e}")))?);
        rest = &after[end + 1..];
    }
    Ok(out)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
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
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl LinkDiagram {
    /// Build and validate a diagram from PD tuples plus optional metadata.
    pub fn from_pd(
        tuples: &[Vec<i64>],
        signs: Option<&[i64]>,
        orientation: Option<&[i64]>,
        dotted_arc: Option<i64>,
        edge_order: Option<&[i64]>,
    ) -> Result<LinkDiagram> {
        if tuples.is_empty() {
            return Self::crossingless(orientation, dotted_arc);
        }
        let mut crossings = Vec::with_capacity(tuples.len());
        for (k, t) in tuples.iter().enumerate() {
            if t.len() != 4 {
                return Err(DiagramError::MalformedCode(format!(
                    "crossing {} has {} slots (expected 4)",
                    k + 1,
                    t.len()
                )));
            }
            let mut arcs = [0u32; 4];
            for (s, &v) in t.iter().enumerate() {
                if v <= 0 || v > u32::MAX as i64 {
                    return Err(DiagramError::MalformedCode(format!(
                        "arc labels must be positive integers, found {v}"
                    )));
                }
                arcs[s] = v as u32;
            }
            crossings.push(Crossing {
                id: k + 1,
                arcs,
                sign: None,
            });
        }
        if crossings.len() > 64 {
            return Err(DiagramError::MalformedCode(
                "at most 64 crossings are supported".into(),
            ));
        }
        let mut occ: BTreeMap<u32, Vec<Occ>> = BTreeMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (p, &a) in c.arcs.iter().enumerate() {
                occ.entry(a).or_default().push((x, p));
            }
        }
        for (&a, o) in &occ {
            if o.len() != 2 {
                return Err(DiagramError::DanglingArc {
                    label: a as i64,
                    count: o.len(),
                });
            }
        }
        let arcs: Vec<u32> = occ.keys().copied().collect();
        let arc_index: HashMap<u32, usize> =
            arcs.iter().enumerate().map(|(i, &a)| (a, i)).collect();

        // Connectivity of the crossing graph.
        let n = crossings.len();
        let mut dsu = Dsu::new(n);
        for o in occ.values() {
            dsu.union(o[0].0, o[1].0);
        }
        let pieces = (0..n).filter(|&x| dsu.find(x) == x).count();
        if pieces != 1 {
            return Err(DiagramError::SplitDiagram(pieces));
        }

        let partner = |o: Occ| -> Occ {
            let a = crossings[o.0].arcs[o.1];
            let v = &occ[&a];
            if v[0] == o {
                v[1]
            } else {
                v[0]
            }
        };

        // Planarity: the number of regions must be n + 2.
        let regions = trace_regions(&crossings, &partner);
        if regions.len() != n + 2 {
            return Err(DiagramError::MalformedCode(format!(
                "code is not planar: {} regions for {} crossings",
                regions.len(),
                n
            )));
        }

        // Components and parsed directions.
        let mut ends: Vec<Option<(Occ, Occ)>> = vec![None; arcs.len()];
        let mut components: Vec<Vec<u32>> = Vec::new();
        let mut oriented: Vec<bool> = Vec::new();
        for &start in &arcs {
            if ends[arc_index[&start]].is_some() {
                continue;
            }
            let o = &occ[&start];
            // Walk with tail o[0], head o[1].
            let mut seq: Vec<(u32, Occ, Occ)> = Vec::new();
            let (mut tail, mut head) = (o[0], o[1]);
            loop {
                let a = crossings[tail.0].arcs[tail.1];
                if seq.iter().any(|s| s.0 == a && s.1 == tail) {
                    break;
                }
                seq.push((a, tail, head));
                let out_slot = (head.1 + 2) % 4;
                let next_tail = (head.0, out_slot);
                let next_head = partner(next_tail);
                tail = next_tail;
                head = next_head;
                if seq.len() > 2 * arcs.len() + 2 {
                    return Err(DiagramError::MalformedCode(
                        "strand traversal does not close".into(),
                    ));
                }
            }
            // Under-strand consistency: entering slot 0 is forward, entering slot 2 is backward.
            let mut forward = 0usize;
            let mut backward = 0usize;
            for &(_, _, head) in &seq {
                match head.1 {
                    0 => forward += 1,
                    2 => backward += 1,
                    _ => {}
                }
            }
            let (flip, known) = if forward > 0 && backward > 0 {
                return Err(DiagramError::MalformedCode(format!(
                    "component through arc {start} passes under-strands in both directions"
                )));
            } else if forward > 0 {
                (false, true)
            } else if backward > 0 {
                (true, true)
            } else {
                // All-over component: consecutive labels or explicit signs decide.
                let labels: Vec<u32> = seq.iter().map(|s| s.0).collect();
                match consecutive_direction(&labels) {
                    Some(f) => (f, true),
                    None => (false, false),
                }
            };
            let mut comp = Vec::new();
            if flip {
                for &(a, t, h) in seq.iter().rev() {
                    ends[arc_index[&a]] = Some((h, t));
                    comp.push(a);
                }
            } else {
                for &(a, t, h) in &seq {
                    ends[arc_index[&a]] = Some((t, h));
                    comp.push(a);
                }
            }
            // Start each component at its smallest label.
            let min_pos = comp
                .iter()
                .enumerate()
                .min_by_key(|(_, &a)| a)
                .map(|(i, _)| i)
                .unwrap_or(0);
            comp.rotate_left(min_pos);
            components.push(comp);
            oriented.push(known);
        }
        let ends: Vec<(Occ, Occ)> = ends
            .into_iter()
            .map(|e| e.expect("every arc traversed"))
            .collect();

        let mut d = LinkDiagram {
            crossings,
            arcs,
            components,
            ends,
            reversed: Vec::new(),
            oriented,
            dotted_arc: 0,
            edge_order: None,
        };
        d.reversed = vec![false; d.components.len()];

        // Explicit signs: orient unknown components, validate the rest.
        if let Some(signs) = signs {
            if signs.len() != d.crossings.len() {
                return Err(DiagramError::MalformedCode(format!(
                    "{} signs for {} crossings",
                    signs.len(),
                    d.crossings.len()
                )));
            }
            for (k, &s) in signs.iter().enumerate() {
                if s != 1 && s != -1 {
                    return Err(DiagramError::MalformedCode(format!(
                        "sign {s} at crossing {}",
                        k + 1
                    )));
                }
            }
            d.orient_from_signs(signs)?;
        }
        if let Some(o) = orientation {
            if o.len() != d.components.len() {
                return Err(DiagramError::MalformedCode(format!(
                    "{} orientation entries for {} components",
                    o.len(),
                    d.components.len()
                )));
            }
            for (k, &v) in o.iter().enumerate() {
                match v {
                    1 => {}
                    -1 => d.reversed[k] = true,
                    _ => {
                        return Err(DiagramError::MalformedCode(format!(
                            "orientation entry {v}"
                        )))
                    }
                }
            }
        }
        d.refresh_signs();
        if let Some(signs) = signs {
            for (k, c) in d.crossings.iter().enumerate() {
                if let Some(s) = c.sign {
                    if s as i64 != signs[k] {
                        return Err(DiagramError::MalformedCode(format!(
                            "sign of crossing {} contradicts the orientation",
                            k + 1
                        )));
                    }
                }
            }
        }
        d.dotted_arc = match dotted_arc {
            None => d.arcs[0],
            Some(a) => {
                if a <= 0 || !d.arcs.contains(&(a as u32)) {
                    return Err(DiagramError::MalformedCode(format!(
                        "dotted arc {a} is not an arc"
                    )));
                }
                a as u32
            }
        };
        if let Some(order) = edge_order {
            d.edge_order = Some(validate_order(order, d.crossings.len())?);
        }
        Ok(d)
    }

    fn crossingless(orientation: Option<&[i64]>, dotted_arc: Option<i64>) -> Result<LinkDiagram> {
        let mut reversed = vec![false];
        if let Some(o) = orientation {
            match o {
                [1] => {}
                [-1] => reversed[0] = true,
                _ => {
                    return Err(DiagramError::MalformedCode(
                        "bad orientation for the crossingless unknot".into(),
                    ))
                }
            }
        }
        if let Some(a) = dotted_arc {
            if a != 1 {
                return Err(DiagramError::MalformedCode(format!(
                    "dotted arc {a} is not an arc"
                )));
            }
        }
        Ok(LinkDiagram {
            crossings: Vec::new(),
            arcs: vec![1],
            components: vec![vec![1]],
            ends: Vec::new(),
            oriented: vec![true],
            reversed,
            dotted_arc: 1,
            edge_order: None,
        })
    }

    fn arc_index(&self, label: u32) -> usize {
        self.arcs.binary_search(&label).expect("known arc label")
    }

    fn component_of_arc(&self, label: u32) -> usize {
        self.components
            .iter()
            .position(|c| c.contains(&label))
            .expect("arc in a component")
    }

    /// Parsed direction of the over-strand at crossing `x`: true iff it enters at slot 3.
    fn over_enters_at_3(&self, x: usize) -> bool {
        let a = self.crossings[x].arcs[3];
        let (_, head) = self.ends[self.arc_index(a)];
        // The arc at slot 3 enters x exactly when its head is (x, 3).
        head == (x, 3)
    }

    fn orient_from_signs(&mut self, signs: &[i64]) -> Result<()> {
        for comp_idx in 0..self.components.len() {
            if self.oriented[comp_idx] {
                continue;
            }
            // Find a crossing where this component is the over-strand against an oriented under-strand.
            let mut decided = None;
            for (x, c) in self.crossings.iter().enumerate() {
                let over_comp = self.component_of_arc(c.arcs[1]);
                let under_comp = self.component_of_arc(c.arcs[0]);
                if over_comp == comp_idx && self.oriented[under_comp] {
                    // Parsed: positive iff over enters at 3 (under goes 0 -> 2).
                    let parsed_positive = self.over_enters_at_3(x);
                    decided = Some(parsed_positive != (signs[x] == 1));
                    break;
                }
            }
            match decided {
                Some(flip) => {
                    if flip {
                        self.flip_parsed_direction(comp_idx);
                    }
                    self.oriented[comp_idx] = true;
                }
                None => return Err(DiagramError::MissingOrientation(comp_idx)),
            }
        }
        Ok(())
    }

    fn flip_parsed_direction(&mut self, comp_idx: usize) {
        let labels = self.components[comp_idx].clone();
        for a in &labels {
            let i = self.arc_index(*a);
            let (t, h) = self.ends[i];
            self.ends[i] = (h, t);
        }
        let mut comp = labels;
        comp.reverse();
        let min_pos = comp
            .iter()
            .enumerate()
            .min_by_key(|(_, &a)| a)
            .map(|(i, _)| i)
            .unwrap_or(0);
        comp.rotate_left(min_pos);
        self.components[comp_idx] = comp;
    }

    fn refresh_signs(&mut self) {
        for x in 0..self.crossings.len() {
            let c = &self.crossings[x];
            let under_comp = self.component_of_arc(c.arcs[0]);
            let over_comp = self.component_of_arc(c.arcs[1]);
            let sign = if self.oriented[under_comp] && self.oriented[over_comp] {
                let mut s: i8 = if self.over_enters_at_3(x) { 1 } else { -1 };
                if self.reversed[under_comp] {
                    s = -s;
                }
                if self.reversed[over_comp] {
                    s = -s;
                }
                Some(s)
            } else {
                None
            };
            self.crossings[x].sign = sign;
        }
    }

    /// Crossings in PD order.
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    /// Sorted arc labels.
    pub fn arcs(&self) -> &[u32] {
        &self.arcs
    }

    /// Number of crossings.
    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Components as arc sequences in the effective direction.
    pub fn components(&self) -> Vec<Vec<u32>> {
        self.components
            .iter()
            .zip(&self.reversed)
            .map(|(c, &r)| {
                let mut v = c.clone();
                if r {
                    v.reverse();
                    let m = v
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, &a)| a)
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    v.rotate_left(m);
                }
                v
            })
            .collect()
    }

    /// Number of link components.
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Whether every component carries a known direction.
    pub fn is_oriented(&self) -> bool {
        self.oriented.iter().all(|&o| o)
    }

    /// The basepoint arc of the reduced theory.
    pub fn dotted_arc(&self) -> u32 {
        self.dotted_arc
    }

    /// The edge order carried by the input, as 1-based crossing ids from smallest to largest.
    pub fn edge_order(&self) -> Option<&[usize]> {
        self.edge_order.as_deref()
    }

    /// Copy with a different basepoint.
    pub fn with_dotted_arc(&self, label: u32) -> Result<LinkDiagram> {
        if !self.arcs.contains(&label) {
            return Err(DiagramError::MalformedCode(format!(
                "dotted arc {label} is not an arc"
            )));
        }
        let mut d = self.clone();
        d.dotted_arc = label;
        Ok(d)
    }

    /// Copy with a different edge order (1-based crossing ids, smallest first).
    pub fn with_edge_order(&self, order: &[usize]) -> Result<LinkDiagram> {
        let o: Vec<i64> = order.iter().map(|&x| x as i64).collect();
        let mut d = self.clone();
        d.edge_order = Some(validate_order(&o, self.crossings.len())?);
        Ok(d)
    }

    /// Copy with the given components reversed relative to the parsed direction.
    pub fn with_reversed(&self, reversed: &[bool]) -> Result<LinkDiagram> {
        if reversed.len() != self.components.len() {
            return Err(DiagramError::MalformedCode(
                "one reversal flag per component expected".into(),
            ));
        }
        let mut d = self.clone();
        d.reversed = reversed.to_vec();
        d.refresh_signs();
        Ok(d)
    }

    /// Reversal flags relative to the parsed direction.
    pub fn reversed(&self) -> &[bool] {
        &self.reversed
    }

    /// Mirror image: every crossing changes from over to under.
    pub fn mirror(&self) -> LinkDiagram {
        if self.crossings.is_empty() {
            let mut d = self.clone();
            d.reversed[0] = !d.reversed[0];
            return d;
        }
        let mut tuples = Vec::with_capacity(self.crossings.len());
        for x in 0..self.crossings.len() {
            let a = self.crossings[x].arcs;
            // The old over-strand becomes the under-strand; start at its incoming slot.
            let t = if self.over_enters_at_3(x) {
                [a[3], a[0], a[1], a[2]]
            } else {
                [a[1], a[2], a[3], a[0]]
            };
            tuples.push(t.iter().map(|&v| v as i64).collect::<Vec<i64>>());
        }
        let orientation: Vec<i64> = self
            .reversed
            .iter()
            .map(|&r| if r { -1 } else { 1 })
            .collect();
        let order: Option<Vec<i64>> = self
            .edge_order
            .as_ref()
            .map(|o| o.iter().map(|&x| x as i64).collect());
        let mut d = LinkDiagram::from_pd(
            &tuples,
            None,
            None,
            Some(self.dotted_arc as i64),
            order.as_deref(),
        )
        .expect("mirror of a valid diagram is valid");
        // Keep the same component directions as the original.
        for (k, comp) in self.components.iter().enumerate() {
            let nk = d.component_of_arc(comp[0]);
            let same = d.components[nk].len() == comp.len() && {
                let pos = d.components[nk].iter().position(|&a| a == comp[0]).unwrap();
                let next_new = d.components[nk][(pos + 1) % comp.len()];
                comp.len() == 1 || next_new == comp[1 % comp.len()]
            };
            d.reversed[nk] = if same {
                orientation[k] == -1
            } else {
                orientation[k] == 1
            };
        }
        d.refresh_signs();
        d
    }

    /// PD tuples as 1-based arc labels.
    pub fn pd_tuples(&self) -> Vec<[u32; 4]> {
        self.crossings.iter().map(|c| c.arcs).collect()
    }

    /// JSON object form of the diagram, accepted by [`parse_diagram`].
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert(
            "pd".into(),
            serde_json::Value::from(
                self.crossings
                    .iter()
                    .map(|c| c.arcs.to_vec())
                    .collect::<Vec<_>>(),
            ),
        );
        obj.insert(
            "orientation".into(),
            serde_json::Value::from(
                self.reversed
                    .iter()
                    .map(|&r| if r { -1 } else { 1 })
                    .collect::<Vec<i64>>(),
            ),
        );
        obj.insert(
            "dotted_arc".into(),
            serde_json::Value::from(self.dotted_arc),
        );
        if let Some(o) = &self.edge_order {
            obj.insert("edge_order".into(), serde_json::Value::from(o.clone()));
        }
        serde_json::Value::Object(obj)
    }

    /// Writhe signs of all crossings.
    pub fn signs(&self) -> Result<Vec<i8>> {
        self.crossings
            .iter()
            .map(|c| {
                c.sign.ok_or_else(|| {
                    DiagramError::MissingOrientation(self.component_of_arc(c.arcs[1]))
                })
            })
            .collect()
    }

    /// Occurrence partner of slot `(x, p)`: the other end of the same arc.
    fn partner(&self, o: Occ) -> Occ {
        let i = self.arc_index(self.crossings[o.0].arcs[o.1]);
        let (t, h) = self.ends[i];
        if t == o {
            h
        } else {
            t
        }
    }

    /// Tail of the lowest arc in the parsed direction.
    fn anchor_tail(&self) -> Occ {
        self.ends[0].0
    }
}

fn consecutive_direction(labels: &[u32]) -> Option<bool> {
    let m = labels.len();
    if m < 2 {
        return Some(false);
    }
    let inc = (0..m)
        .filter(|&i| labels[(i + 1) % m] == labels[i] + 1)
        .count();
    let dec = (0..m)
        .filter(|&i| labels[i] == labels[(i + 1) % m] + 1)
        .count();
    if inc >= m - 1 && inc > dec {
        Some(false)
    } else if dec >= m - 1 && dec > inc {
        Some(true)
    } else {
        None
    }
}

fn validate_order(order: &[i64], n: usize) -> Result<Vec<usize>> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(DiagramError::MalformedCode(format!(
            "edge order has {} entries for {} crossings",
            order.len(),
            n
        )));
    }
    let mut out = Vec::with_capacity(n);
    for &v in order {
        if v < 1 || v as usize > n || seen[v as usize - 1] {
            return Err(DiagramError::MalformedCode(
                "edge order is not a permutation".into(),
            ));
        }
        seen[v as usize - 1] = true;
        out.push(v as usize);
    }
    Ok(out)
}

/// Regions as orbits of corners; corner `(x, p)` lies between slots `p` and `p+1`.
fn trace_regions(crossings: &[Crossing], partner: &dyn Fn(Occ) -> Occ) -> Vec<Vec<Occ>> {
    let n = crossings.len();
    let mut seen = vec![[false; 4]; n];
    let mut regions = Vec::new();
    for x in 0..n {
        for p in 0..4 {
            if seen[x][p] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = (x, p);
            while !seen[cur.0][cur.1] {
                seen[cur.0][cur.1] = true;
                orbit.push(cur);
                let (y, q) = partner(cur);
                cur = (y, (q + 3) % 4);
            }
            regions.push(orbit);
        }
    }
    regions
}

/// One edge of a Tait graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaitEdge {
    /// 0-based crossing index in the diagram.
    pub crossing: usize,
    /// Endpoint vertices (black regions).
    pub ends: [usize; 2],
    /// `+1` iff the A-smoothing connects the two black regions.
    pub sign: i8,
    /// Internal arc indices in PD slot order.
    pub slots: [usize; 4],
}

/// Circle structure of one resolution of a Tait graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    /// Circle index of each arc; circles are numbered by their smallest arc.
    pub circle_of_arc: Vec<u16>,
    /// Number of circles.
    pub n_circles: usize,
}

/// A signed, ordered Tait graph with its embedding data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaitGraph {
    n_vertices: usize,
    edges: Vec<TaitEdge>,
    order: Vec<usize>,
    rank: Vec<usize>,
    arc_labels: Vec<u32>,
    dotted_arc: usize,
    writhe: Option<Vec<i8>>,
    /// Per vertex: (edge, end) darts in counterclockwise order.
    rotation: Vec<Vec<(usize, usize)>>,
    /// Lowest arc and whether its effective direction agrees with the parsed one.
    anchor_forward: bool,
    white: bool,
    n_components: usize,
}

/// Options for [`TaitGraph::build`].
#[derive(Debug, Clone, Default)]
pub struct TaitOptions {
    /// Edge order as 1-based crossing ids from smallest to largest.
    pub order: Option<Vec<usize>>,
    /// Use the other checkerboard class as vertices.
    pub flip_coloring: bool,
}

/// Checkerboard colouring and signed Tait graph with the given edge order
/// (1-based crossing ids, smallest first); defaults to the diagram's own
/// order, then to ascending crossing id.
pub fn checkerboard_and_tait(d: &LinkDiagram, order: Option<&[usize]>) -> Result<TaitGraph> {
    TaitGraph::build(
        d,
        &TaitOptions {
            order: order.map(|o| o.to_vec()),
            flip_coloring: false,
        },
    )
}

/// Crossing counts `(n₊, n₋)`.
pub fn crossing_signs(d: &LinkDiagram) -> Result<(usize, usize)> {
    let s = d.signs()?;
    Ok((
        s.iter().filter(|&&v| v > 0).count(),
        s.iter().filter(|&&v| v < 0).count(),
    ))
}

/// Planar dual: the other checkerboard class, with every sign flipped.
pub fn dual_tait(g: &TaitGraph) -> TaitGraph {
    g.dual()
}

impl TaitGraph {
    /// Build the Tait graph of a diagram.
    pub fn build(d: &LinkDiagram, opts: &TaitOptions) -> Result<TaitGraph> {
        let n = d.crossings.len();
        let arc_labels = d.arcs.clone();
        let dotted_arc = d.arc_index(d.dotted_arc);
        let writhe = d.signs().ok();
        let anchor_forward = !d.reversed[d.component_of_arc(d.arcs[0])];
        let order_src: Option<Vec<usize>> = opts.order.clone().or_else(|| d.edge_order.clone());
        let order: Vec<usize> = match order_src {
            Some(o) => {
                let v: Vec<i64> = o.iter().map(|&x| x as i64).collect();
                validate_order(&v, n)?.into_iter().map(|x| x - 1).collect()
            }
            None => (0..n).collect(),
        };
        if n == 0 {
            return Ok(TaitGraph {
                n_vertices: 1,
                edges: Vec::new(),
                order,
                rank: Vec::new(),
                arc_labels,
                dotted_arc,
                writhe,
                rotation: vec![Vec::new()],
                anchor_forward,
                white: opts.flip_coloring,
                n_components: 1,
            });
        }
        let partner = |o: Occ| d.partner(o);
        let regions = trace_regions(&d.crossings, &partner);
        let mut region_of = vec![[usize::MAX; 4]; n];
        for (r, orbit) in regions.iter().enumerate() {
            for &(x, p) in orbit {
                region_of[x][p] = r;
            }
        }
        // Two-colour the regions: corners p and p+1 of a crossing are adjacent.
        let mut color = vec![u8::MAX; regions.len()];
        let (ax, ap) = d.anchor_tail();
        let black_root = region_of[ax][ap];
        color[black_root] = 0;
        let mut stack = vec![black_root];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); regions.len()];
        for x in 0..n {
            for p in 0..4 {
                adj[region_of[x][p]].push(region_of[x][(p + 1) % 4]);
            }
        }
        while let Some(r) = stack.pop() {
            for &s in &adj[r] {
                if color[s] == u8::MAX {
                    color[s] = 1 - color[r];
                    stack.push(s);
                } else if color[s] == color[r] {
                    return Err(DiagramError::MalformedCode(
                        "regions are not two-colourable".into(),
                    ));
                }
            }
        }
        let black_color = if opts.flip_coloring { 1 } else { 0 };
        Ok(Self::from_regions(
            d,
            &regions,
            &region_of,
            &color,
            black_color,
            order,
            arc_labels,
            dotted_arc,
            writhe,
            anchor_forward,
            opts.flip_coloring,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn from_regions(
        d: &LinkDiagram,
        regions: &[Vec<Occ>],
        region_of: &[[usize; 4]],
        color: &[u8],
        black_color: u8,
        order: Vec<usize>,
        arc_labels: Vec<u32>,
        dotted_arc: usize,
        writhe: Option<Vec<i8>>,
        anchor_forward: bool,
        white: bool,
    ) -> TaitGraph {
        let n = d.crossings.len();
        let mut vid = vec![usize::MAX; regions.len()];
        let mut nv = 0;
        for r in 0..regions.len() {
            if color[r] == black_color {
                vid[r] = nv;
                nv += 1;
            }
        }
        let mut edges = Vec::with_capacity(n);
        for x in 0..n {
            let b = if color[region_of[x][1]] == black_color {
                1
            } else {
                0
            };
            let sign = if b == 1 { 1 } else { -1 };
            let slots = [
                d.arc_index(d.crossings[x].arcs[0]),
                d.arc_index(d.crossings[x].arcs[1]),
                d.arc_index(d.crossings[x].arcs[2]),
                d.arc_index(d.crossings[x].arcs[3]),
            ];
            edges.push(TaitEdge {
                crossing: x,
                ends: [vid[region_of[x][b]], vid[region_of[x][b + 2]]],
                sign,
                slots,
            });
        }
        let mut rotation = vec![Vec::new(); nv];
        for (r, orbit) in regions.iter().enumerate() {
            if vid[r] == usize::MAX {
                continue;
            }
            for &(x, p) in orbit {
                let b = if color[region_of[x][1]] == black_color {
                    1
                } else {
                    0
                };
                let end = if p == b { 0 } else { 1 };
                rotation[vid[r]].push((x, end));
            }
        }
        let mut rank = vec![0; n];
        for (k, &e) in order.iter().enumerate() {
            rank[e] = k;
        }
        TaitGraph {
            n_vertices: nv,
            edges,
            order,
            rank,
            arc_labels,
            dotted_arc,
            writhe,
            rotation,
            anchor_forward,
            white,
            n_components: d.components.len(),
        }
    }

    /// Rebuild the region structure from the stored slots (used for duals).
    fn pseudo_diagram(&self) -> LinkDiagram {
        // Reconstruct a diagram skeleton sufficient for region tracing.
        let n = self.edges.len();
        let crossings: Vec<Crossing> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| Crossing {
                id: k + 1,
                arcs: [
                    self.arc_labels[e.slots[0]],
                    self.arc_labels[e.slots[1]],
                    self.arc_labels[e.slots[2]],
                    self.arc_labels[e.slots[3]],
                ],
                sign: self.writhe.as_ref().map(|w| w[k]),
            })
            .collect();
        let tuples: Vec<Vec<i64>> = crossings
            .iter()
            .map(|c| c.arcs.iter().map(|&a| a as i64).collect())
            .collect();
        let _ = n;
        LinkDiagram::from_pd(
            &tuples,
            None,
            None,
            Some(self.arc_labels[self.dotted_arc] as i64),
            None,
        )
        .expect("stored slots form a valid diagram")
    }

    fn dual(&self) -> TaitGraph {
        if self.edges.is_empty() {
            let mut g = self.clone();
            g.white = !g.white;
            return g;
        }
        let d = self.pseudo_diagram();
        let n = d.crossings.len();
        let partner = |o: Occ| d.partner(o);
        let regions = trace_regions(&d.crossings, &partner);
        let mut region_of = vec![[usize::MAX; 4]; n];
        for (r, orbit) in regions.iter().enumerate() {
            for &(x, p) in orbit {
                region_of[x][p] = r;
            }
        }
        // Colour: regions at the black corners of this graph are "ours"; the dual takes the others.
        let mut color = vec![0u8; regions.len()];
        for (x, e) in self.edges.iter().enumerate() {
            let b = if e.sign > 0 { 1 } else { 0 };
            color[region_of[x][b]] = 1;
            color[region_of[x][b + 2]] = 1;
            color[region_of[x][(b + 1) % 4]] = 0;
            color[region_of[x][(b + 3) % 4]] = 0;
        }
        let mut g = Self::from_regions(
            &d,
            &regions,
            &region_of,
            &color,
            0,
            self.order.clone(),
            self.arc_labels.clone(),
            self.dotted_arc,
            self.writhe.clone(),
            self.anchor_forward,
            !self.white,
        );
        g.n_components = self.n_components;
        g
    }

    /// Number of vertices (black regions).
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Number of edges (crossings).
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges indexed by crossing.
    pub fn edges(&self) -> &[TaitEdge] {
        &self.edges
    }

    /// Edge `e`.
    pub fn edge(&self, e: usize) -> &TaitEdge {
        &self.edges[e]
    }

    /// Edge indices from smallest to largest.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of edge `e` in the order (0-based).
    pub fn rank(&self, e: usize) -> usize {
        self.rank[e]
    }

    /// Edge label used in words and tables: its 1-based position in the order.
    pub fn label(&self, e: usize) -> usize {
        self.rank[e] + 1
    }

    /// Copy with another edge order (edge indices from smallest to largest).
    pub fn with_order(&self, order: &[usize]) -> TaitGraph {
        let mut g = self.clone();
        assert_eq!(order.len(), self.edges.len(), "order must be a permutation");
        let mut seen = vec![false; order.len()];
        for &e in order {
            assert!(!seen[e], "order must be a permutation");
            seen[e] = true;
        }
        g.order = order.to_vec();
        for (k, &e) in order.iter().enumerate() {
            g.rank[e] = k;
        }
        g
    }

    /// Copy with the dotted arc moved to the given arc label.
    pub fn with_dotted_arc(&self, label: u32) -> Option<TaitGraph> {
        let idx = self.arc_labels.iter().position(|&a| a == label)?;
        let mut g = self.clone();
        g.dotted_arc = idx;
        Some(g)
    }

    /// Number of arcs (corners).
    pub fn n_arcs(&self) -> usize {
        self.arc_labels.len()
    }

    /// Arc labels by internal index.
    pub fn arc_labels(&self) -> &[u32] {
        &self.arc_labels
    }

    /// Internal index of the dotted arc.
    pub fn dotted_arc(&self) -> usize {
        self.dotted_arc
    }

    /// Number of link components of the underlying diagram.
    pub fn n_components(&self) -> usize {
        self.n_components
    }

    /// Whether this graph uses the flipped colour class.
    pub fn is_flipped(&self) -> bool {
        self.white
    }

    /// Counterclockwise darts `(edge, end)` around vertex `v`.
    pub fn rotation(&self, v: usize) -> &[(usize, usize)] {
        &self.rotation[v]
    }

    /// Writhe signs per edge, when the diagram is oriented.
    pub fn writhe_signs(&self) -> Option<&[i8]> {
        self.writhe.as_deref()
    }

    /// `(n₊, n₋)` when oriented.
    pub fn n_plus_minus(&self) -> Option<(usize, usize)> {
        self.writhe.as_ref().map(|w| {
            (
                w.iter().filter(|&&s| s > 0).count(),
                w.iter().filter(|&&s| s < 0).count(),
            )
        })
    }

    /// Whether the lowest arc is traversed in its parsed direction.
    pub fn anchor_forward(&self) -> bool {
        self.anchor_forward
    }

    /// Whether edge `e` lies in the spanning subgraph of the resolution with B-mask `bmask`.
    pub fn in_subgraph(&self, e: usize, bmask: u64) -> bool {
        let is_b = bmask >> e & 1 == 1;
        (self.edges[e].sign > 0) != is_b
    }

    /// B-mask of the resolution whose spanning subgraph is `h` (edge bitset).
    pub fn bmask_of_subgraph(&self, h: u64) -> u64 {
        let mut m = 0u64;
        for e in 0..self.edges.len() {
            let inside = h >> e & 1 == 1;
            let is_b = (self.edges[e].sign > 0) != inside;
            if is_b {
                m |= 1 << e;
            }
        }
        m
    }

    /// Spanning subgraph (edge bitset) of the resolution with B-mask `bmask`.
    pub fn subgraph_of_bmask(&self, bmask: u64) -> u64 {
        let mut h = 0u64;
        for e in 0..self.edges.len() {
            if self.in_subgraph(e, bmask) {
                h |= 1 << e;
            }
        }
        h
    }

    /// Circles of a resolution: the boundary of the regular neighbourhood of
    /// its spanning subgraph, traced through the corners (arcs).
    pub fn resolve(&self, bmask: u64) -> Resolution {
        let m = self.arc_labels.len();
        let mut dsu = Dsu::new(m);
        for (e, edge) in self.edges.iter().enumerate() {
            let s = edge.slots;
            if bmask >> e & 1 == 0 {
                dsu.union(s[0], s[1]);
                dsu.union(s[2], s[3]);
            } else {
                dsu.union(s[0], s[3]);
                dsu.union(s[1], s[2]);
            }
        }
        let mut id = vec![u16::MAX; m];
        let mut circle_of_arc = vec![0u16; m];
        let mut next = 0u16;
        for (a, circle) in circle_of_arc.iter_mut().enumerate() {
            let r = dsu.find(a);
            if id[r] == u16::MAX {
                id[r] = next;
                next += 1;
            }
            *circle = id[r];
        }
        Resolution {
            circle_of_arc,
            n_circles: next as usize,
        }
    }

    /// B-mask of the oriented resolution (B exactly at negative crossings).
    pub fn oriented_bmask(&self) -> Option<u64> {
        self.writhe.as_ref().map(|w| {
            let mut m = 0u64;
            for (e, &s) in w.iter().enumerate() {
                if s < 0 {
                    m |= 1 << e;
                }
            }
            m
        })
    }

    /// Endpoints of edge `e` in the underlying abstract graph.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        (self.edges[e].ends[0], self.edges[e].ends[1])
    }

    /// Whether the abstract graph is connected (always true for diagrams built here).
    pub fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.n_vertices.max(1));
        for e in &self.edges {
            dsu.union(e.ends[0], e.ends[1]);
        }
        (0..self.n_vertices).filter(|&v| dsu.find(v) == v).count() <= 1
    }

    /// Faces of the embedded graph as cyclic dart sequences (used by tests of duality).
    pub fn face_count(&self) -> usize {
        if self.edges.is_empty() {
            return 1;
        }
        self.dual().n_vertices
    }

    /// Writhe of the diagram.
    pub fn writhe(&self) -> Option<i64> {
        self.writhe
            .as_ref()
            .map(|w| w.iter().map(|&s| s as i64).sum())
    }
}

/// Convert a DT code to a planar diagram.
///
/// Accepted forms: `[4, 6, 2]`, `DT: [(4,6,2)]`, or a list of tuples, one per
/// component (`[(..),(..)]`).  Odd passes `1, 3, 5, …` are paired with the
/// listed even passes; a negative even entry means the even pass is the
/// over-strand.  The planar embedding is found by exhaustive search over the
/// crossing orientations (capped at 20 crossings); of the two mirror
/// realisations, the one found first is returned.
pub fn parse_dt(text: &str) -> Result<LinkDiagram> {
    let body = text.trim().trim_start_matches("DT:").trim();
    // Split into groups by parentheses if present.
    let mut groups: Vec<Vec<i64>> = Vec::new();
    if body.contains('(') {
        let mut rest = body;
        while let Some(p) = rest.find('(') {
            let after = &rest[p + 1..];
            let q = after
                .find(')')
                .ok_or_else(|| DiagramError::MalformedCode("unbalanced parentheses".into()))?;
            groups.push(parse_int_list(&after[..q])?);
            rest = &after[q + 1..];
        }
    } else {
        let inner = body.trim_start_matches('[').trim_end_matches(']');
        groups.push(parse_int_list(inner)?);
    }
    dt_to_diagram(&groups)
}

fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|e| DiagramError::MalformedCode(format!("bad integer {t}: {e}")))
        })
        .collect()
}

fn dt_to_diagram(groups: &[Vec<i64>]) -> Result<LinkDiagram> {
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if n == 0 {
        return LinkDiagram::from_pd(&[], None, None, None, None);
    }
    if n > 20 {
        return Err(DiagramError::MalformedCode(
            "DT conversion is limited to 20 crossings".into(),
        ));
    }
    let total = 2 * n;
    // Component ranges of passes 1..=2n.
    let mut comp_range = Vec::new();
    let mut start = 1usize;
    for g in groups {
        comp_range.push((start, start + 2 * g.len() - 1));
        start += 2 * g.len();
    }
    let next_pass = |t: usize| -> usize {
        for &(a, b) in &comp_range {
            if t >= a && t <= b {
                return if t == b { a } else { t + 1 };
            }
        }
        unreachable!()
    };
    let prev_pass = |t: usize| -> usize {
        for &(a, b) in &comp_range {
            if t >= a && t <= b {
                return if t == a { b } else { t - 1 };
            }
        }
        unreachable!()
    };
    // Crossing k pairs odd pass 2k+1 with |even|.
    let evens: Vec<i64> = groups.iter().flatten().copied().collect();
    let mut pass_crossing = vec![usize::MAX; total + 1];
    let mut cross_passes = Vec::with_capacity(n);
    for (k, &ev) in evens.iter().enumerate() {
        let odd = 2 * k + 1;
        let even = ev.unsigned_abs() as usize;
        if !even.is_multiple_of(2) || even == 0 || even > total || pass_crossing[even] != usize::MAX
        {
            return Err(DiagramError::MalformedCode(format!(
                "invalid DT entry {ev}"
            )));
        }
        pass_crossing[odd] = k;
        pass_crossing[even] = k;
        let even_over = ev < 0;
        cross_passes.push((odd, even, even_over));
    }
    // Darts: segment t runs from pass t to pass next(t). Dart ids: 2t = tail end (out of pass t),
    // 2*prev(u)+1 = head end arriving at pass u.
    let out_dart = |t: usize| 2 * t;
    let in_dart = |u: usize| 2 * prev_pass(u) + 1;
    let opposite = |d: usize| d ^ 1;
    let dart_vertex = |d: usize| -> usize {
        let seg = d / 2;
        if d.is_multiple_of(2) {
            pass_crossing[seg]
        } else {
            pass_crossing[next_pass(seg)]
        }
    };
    let rotations = |bits: u32| -> Vec<[usize; 4]> {
        cross_passes
            .iter()
            .enumerate()
            .map(|(k, &(p, q, _))| {
                if bits >> k & 1 == 0 {
                    [in_dart(p), in_dart(q), out_dart(p), out_dart(q)]
                } else {
                    [in_dart(p), out_dart(q), out_dart(p), in_dart(q)]
                }
            })
            .collect()
    };
    let count_faces = |rot: &[[usize; 4]]| -> usize {
        let mut pos = vec![(0usize, 0usize); 2 * (total + 1) + 2];
        for (v, r) in rot.iter().enumerate() {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = (v, i);
            }
        }
        let mut seen = vec![false; pos.len()];
        let mut faces = 0;
        for t in 1..=total {
            for d in [2 * t, 2 * t + 1] {
                if seen[d] {
                    continue;
                }
                faces += 1;
                let mut cur = d;
                while !seen[cur] {
                    seen[cur] = true;
                    let o = opposite(cur);
                    let (v, i) = pos[o];
                    debug_assert_eq!(dart_vertex(o), v);
                    cur = rot[v][(i + 1) % 4];
                }
            }
        }
        faces
    };
    let mut found = None;
    for bits in 0..(1u32 << (n - 1)) {
        let rot = rotations(bits);
        if count_faces(&rot) == n + 2 {
            found = Some(rot);
            break;
        }
    }
    let rot = found.ok_or_else(|| {
        DiagramError::MalformedCode("DT code is not realisable in the plane".into())
    })?;
    // PD: slots counterclockwise from the incoming under pass; arc label of a dart = its segment.
    let mut tuples = Vec::with_capacity(n);
    for (k, &(p, q, even_over)) in cross_passes.iter().enumerate() {
        let under = if even_over { p } else { q };
        let r = rot[k];
        let start = r.iter().position(|&d| d == in_dart(under)).unwrap();
        let t: Vec<i64> = (0..4).map(|i| (r[(start + i) % 4] / 2) as i64).collect();
        tuples.push(t);
    }
    LinkDiagram::from_pd(&tuples, None, None, None, None)
}

/// DT code of a knot diagram (single component), traversing from the lowest arc.
pub fn to_dt(d: &LinkDiagram) -> Result<Vec<i64>> {
    if d.n_components() != 1 {
        return Err(DiagramError::MalformedCode(
            "DT output is implemented for knots only".into(),
        ));
    }
    let n = d.crossings.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let comp = &d.components[0];
    // Pass t (1-based) is the crossing at the head of the t-th arc.
    let mut passes: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for (t, &a) in comp.iter().enumerate() {
        let (_, head) = d.ends[d.arc_index(a)];
        let over = head.1 % 2 == 1;
        passes[head.0].push((t + 1, over));
    }
    let mut pairs: Vec<(usize, usize, bool)> = Vec::with_capacity(n);
    for p in &passes {
        let (a, b) = (p[0], p[1]);
        let (odd, even) = if a.0 % 2 == 1 { (a, b) } else { (b, a) };
        if odd.0 % 2 != 1 || even.0 % 2 != 0 {
            return Err(DiagramError::MalformedCode(
                "passes do not alternate parity".into(),
            ));
        }
        pairs.push((odd.0, even.0, even.1));
    }
    pairs.sort();
    Ok(pairs
        .iter()
        .map(|&(_, e, over)| if over { -(e as i64) } else { e as i64 })
        .collect())
}

/// Set of all arcs adjacent to each black vertex, for diagnostics.
pub fn vertex_arcs(g: &TaitGraph) -> Vec<BTreeSet<u32>> {
    let mut out = vec![BTreeSet::new(); g.n_vertices()];
    for (v, darts) in g.rotation.iter().enumerate() {
        for &(e, end) in darts {
            let s = g.edges[e].slots;
            let b = if g.edges[e].sign > 0 { 1 } else { 0 };
            let c = if end == 0 { b } else { b + 2 };
            out[v].insert(g.arc_labels[s[c % 4]]);
            out[v].insert(g.arc_labels[s[(c + 1) % 4]]);
        }
    }
    out
}

//! Bundled corpus of small knot and link diagrams with expected invariants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{parse_diagram, DiagramError, LinkDiagram};
use crate::jones::Laurent;

const BUNDLED: &str = include_str!("../data/corpus.json");

/// Errors raised while loading or querying a corpus.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus file is malformed: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("no corpus entry named `{0}`")]
    Unknown(String),
    #[error("corpus entry `{name}` does not parse: {source}")]
    BadEntry {
        name: String,
        #[source]
        source: DiagramError,
    },
}

/// Invariants recorded for an entry; absent fields are unknown.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    /// Unnormalized Jones polynomial as `[exponent, coefficient]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jones: Option<Vec<[i64; 2]>>,
    /// Rasmussen s-invariant (knots only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    /// Whether unreduced integral Khovanov homology has ℤ₂-torsion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z2_torsion: Option<bool>,
    /// Where the expected values come from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl Expected {
    /// The Jones polynomial as a Laurent map.
    pub fn jones_polynomial(&self) -> Option<Laurent> {
        self.jones
            .as_ref()
            .map(|v| v.iter().map(|&[e, c]| (e, c)).collect())
    }
}

/// One diagram of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// Alternative names accepted by [`Corpus::get`].
    #[serde(default)]
    pub aliases: Vec<String>,
    /// PD code, arcs counterclockwise from the incoming under-strand.
    pub pd: Vec<[i64; 4]>,
    /// Whether the diagram is alternating.
    pub alternating: bool,
    #[serde(default)]
    pub expected: Expected,
}

impl CorpusEntry {
    /// Number of crossings of the diagram.
    pub fn crossings(&self) -> usize {
        self.pd.len()
    }

    /// Parsed diagram.
    pub fn diagram(&self) -> Result<LinkDiagram, CorpusError> {
        let text = serde_json::to_string(&self.pd).expect("PD tuples serialize");
        parse_diagram(&text).map_err(|source| CorpusError::BadEntry {
            name: self.name.clone(),
            source,
        })
    }
}

/// An ordered collection of corpus entries.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// The corpus shipped with the library.
    pub fn bundled() -> Corpus {
        Corpus::from_json(BUNDLED).expect("bundled corpus is well formed")
    }

    /// Parse a corpus from JSON text.
    pub fn from_json(text: &str) -> Result<Corpus, CorpusError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Entry by name or alias.
    pub fn get(&self, name: &str) -> Result<&CorpusEntry, CorpusError> {
        self.entries
            .iter()
            .find(|e| e.name == name || e.aliases.iter().any(|a| a == name))
            .ok_or_else(|| CorpusError::Unknown(name.to_string()))
    }

    /// Entries with at most `n` crossings.
    pub fn up_to(&self, n: usize) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(move |e| e.crossings() <= n)
    }

    /// Names of all entries keyed by crossing number.
    pub fn names_by_size(&self) -> BTreeMap<usize, Vec<&str>> {
        let mut out: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for e in &self.entries {
            out.entry(e.crossings()).or_default().push(&e.name);
        }
        out
    }
}

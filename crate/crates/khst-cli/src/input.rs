//! Loading diagrams from corpus names, files and inline codes.

use khst::corpus::{Corpus, CorpusError};
use khst::diagram::{checkerboard_and_tait, parse_diagram, LinkDiagram, TaitGraph};

use crate::{CliError, DiagramArgs};

/// A loaded diagram with its display name.
pub struct Loaded {
    pub name: String,
    pub diagram: LinkDiagram,
}

impl Loaded {
    /// Tait graph with the diagram's edge order.
    pub fn tait(&self) -> Result<TaitGraph, CliError> {
        Ok(checkerboard_and_tait(&self.diagram, None)?)
    }
}

/// Parse a comma- or space-separated permutation of 1-based crossing ids.
pub fn parse_order(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad crossing id `{s}` in --edge-order")))
        })
        .collect()
}

/// Resolve `--knot` / `--pd` and apply the edge order, dotted arc and mirror flags.
pub fn load(args: &DiagramArgs) -> Result<Loaded, CliError> {
    let (name, mut d) = match (&args.knot, &args.pd) {
        (_, Some(pd)) => ("inline".to_string(), parse_diagram(pd)?),
        (Some(k), None) => match Corpus::bundled().get(k) {
            Ok(e) => (e.name.clone(), e.diagram()?),
            Err(CorpusError::Unknown(_)) if std::path::Path::new(k).is_file() => {
                let text = std::fs::read_to_string(k).map_err(|source| CliError::Io {
                    path: k.clone(),
                    source,
                })?;
                (k.clone(), parse_diagram(&text)?)
            }
            Err(e) => return Err(e.into()),
        },
        (None, None) => return Err(CliError::Usage("one of --knot or --pd is required".into())),
    };
    if args.mirror {
        d = d.mirror();
    }
    if let Some(o) = &args.edge_order {
        d = d.with_edge_order(&parse_order(o)?)?;
    }
    if let Some(a) = args.dotted_arc {
        d = d.with_dotted_arc(a)?;
    }
    Ok(Loaded { name, diagram: d })
}

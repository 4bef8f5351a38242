//! Khovanov homology of links from the spanning-tree complex of the Tait graph.
pub mod corpus;
pub mod cube;
pub mod diagram;
pub mod homology;
pub mod jones;
pub mod morse;
pub mod sinv;
pub mod stc;
pub mod trees;

//! Exact computation in split Chevalley groups and the spherical buildings
//! they act on: root systems, Weyl groups, Bruhat normal forms, a D4 matrix
//! representation with a Bruhat-cell extractor, polar space and composition
//! algebra models, thin building checks, and displacement spectra — the
//! machinery needed to replay unipotent-element conjugation arguments over
//! every small field exactly.

pub mod error;
pub mod poly;
pub mod field;
pub mod rootsys;
pub mod weyl;
pub mod matrix;
pub mod chevalley;
pub mod d4rep;
pub mod report;
pub mod opposition;

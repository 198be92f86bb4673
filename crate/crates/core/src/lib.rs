//! Toric 4-fold obstruction kernel: exact lattice combinatorics for smooth
//! complete fans in `Z^4`, intersection theory, and an automated certifier
//! for the non-existence of totally nondegenerate finite morphisms (and, in
//! embedding mode, embeddings) from abelian surfaces.

pub mod blowup;
pub mod catalog;
pub mod chow;
pub mod fan;
pub mod fanfile;
pub mod obstruction;
pub mod lattice;
pub mod lp;
pub mod picard;
pub mod ratlin;
pub mod replay;

//! Block-matrix algebras built from finite layered posets.
//!
//! The pipeline runs bottom-up:
//! ordinal arithmetic in Cantor normal form ([`ordinal`]),
//! finite polarized posets with their layer filtration and chain classes
//! ([`poset`]), an ordinal-indexed interval atlas over the maximal chains
//! ([`indexing`]), an exact calculus of aligned identity blocks
//! ([`blockmatrix`]), the layered ring assembled from one block family per
//! poset element ([`ring`]), independent dense and formal-algebra oracles
//! ([`oracle`]), and a verification suite with machine-readable reports
//! ([`verify`]).

pub mod blockmatrix;
pub mod enumerate;
pub mod indexing;
pub mod oracle;
pub mod ordinal;
pub mod par;
pub mod poset;
pub mod report;
pub mod ring;
pub mod verify;

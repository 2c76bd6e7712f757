//! Homological invariants of gentle algebras, computed combinatorially from
//! a bound quiver and checked against explicit linear algebra.

pub mod cli;
pub mod dsl;
pub mod forbidden;
pub mod homology;
pub mod oracle;
pub mod quasi_tilted;
pub mod quiver;
pub mod report;
pub mod walks;

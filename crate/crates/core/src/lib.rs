//! Rewriting and checking answer set programs: parsing, grounding, an
//! answer-set and here-and-there oracle, program transformations, action
//! language translations and a natural deduction checker.

pub mod ast;
pub mod checks;
pub mod clang;
pub mod cli;
pub mod corpus;
pub mod depgraph;
pub mod fol;
pub mod ground;
pub mod ndproof;
pub mod parser;
pub mod rewrite;
pub mod semantics;

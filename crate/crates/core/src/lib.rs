//! Classical positive free logic with the binary description quantifier
//! `Ix[A, B]` ("the A is B"): syntax, a sequent-calculus proof checker, cut
//! elimination, dual-domain finite models and a ground tableau prover.

pub mod cli;
pub mod cutelim;
pub mod kernel;
pub mod semantics;
pub mod syntax;
pub mod tableau;

//! Possible-winner toolkit for positional scoring rules over partial votes.
//!
//! The crate decides whether a distinguished candidate can still win an
//! election when voters have only supplied partial rankings. Plurality and
//! veto are solved with polynomial flow computations; other rules go
//! through an exact plateau-aware search or plain enumeration. On top of
//! the solvers sit a linear-vote realization engine that pins prescribed
//! maximum partial scores via circular vote blocks, a family of
//! hardness-gadget instance generators reducing exact-cover and
//! multicolored-clique instances to possible-winner questions, and
//! brute-force oracles that cross-check every generated instance at desk
//! scale.

pub mod election;
pub mod solvers;
pub mod realize;
pub mod reductions;
pub mod oracles;
pub mod io;
pub mod gen;
pub mod cli;

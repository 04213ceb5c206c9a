//! Combinatorics of finite maximal codes around a distinguished letter `a`.
//!
//! The crate computes the sets `X_w` of words `a^r w a^v` in `X*` that are not
//! divisible by `a^n` on either side, searches companion factorizations of the
//! cyclic group `Z/nZ`, builds and verifies matrix arrangements of `X_w`, and
//! recognizes Hajós and Krasner structure on those arrangements.

pub mod word;
pub mod poly;
pub mod code;
pub mod corpus;
pub mod zn;
pub mod automaton;
pub mod xw;
pub mod arrangement;
pub mod good;
pub mod pipeline;

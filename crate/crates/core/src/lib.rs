#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod closure;
pub mod delay;
pub mod error;
pub mod lp;
pub mod nearest;
pub mod pattern;
pub mod qi;
pub mod text;
pub mod heuristics;
pub mod oracle;
pub mod instances;
pub mod cli;

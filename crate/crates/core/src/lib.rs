//! Computational systems on directed graphs, interventions on them, and
//! budgeted reverse-engineering of minimal intervention sets.

pub mod model;
pub mod automata;
pub mod intervention;
pub mod sigma;
pub mod oracle;
pub mod re;
pub mod exemplars;
pub mod format;
pub mod cli;

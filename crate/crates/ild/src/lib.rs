//! Exact analysis of piecewise-linear interval maps and the inverse limits they generate.

pub mod asymptotics;
pub mod certify;
pub mod cli;
pub mod gallery;
pub mod ilim;
pub mod mapspec;
pub mod numeric;
pub mod plmap;
pub mod report;
pub mod svg;
pub mod verdict;

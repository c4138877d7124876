//! Weighted finite and infinite words over Conway structures: algebraic
//! instances, law checkers, matrix star and omega, series, valuation
//! monoids, automata and rational expressions.

pub mod algebra;
pub mod automata;
pub mod extension;
pub mod instances;
pub mod matrix;
pub mod ratexpr;
pub mod series;
pub mod valuation;

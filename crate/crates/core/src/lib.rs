//! Logics, register automata, counter automata and decision procedures over
//! data words, together with the translations that connect them.

pub mod ca;
pub mod fo;
pub mod games;
pub mod ltl;
pub mod ltl2ra;
pub mod nra_empty;
pub mod ra;
pub mod ra2ca;
pub mod reductions;
pub mod words;

pub use words::{make_data_word, Alphabet, ClassId, DataWord, Sym, WordError};

pub mod exactnum;
pub mod spectrum;
pub mod symbolcalc;
pub mod kernelasm;
pub mod words;
pub mod reference;
pub mod verify;
pub mod cli;

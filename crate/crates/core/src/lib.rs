//! Construction and recognition of the low-dimensional SL2(K)-modules
//! Nat, Sym2, Sym3 and the twisted tensor Nat (x) Nat^chi over finite fields.

pub mod cli;
pub mod error;
pub mod fieldlink;
pub mod fp;
pub mod gfield;
pub mod linalg;
pub mod modcore;
pub mod poly;
pub mod recog;
pub mod selftest;
pub mod sl2gen;
pub mod tordec;
pub mod unifilt;

pub use error::{Error, Result};
pub use gfield::{FieldElem, FieldSpec};
pub use linalg::{Mat, Subspace};
pub use modcore::{GModule, ModuleFile, Tag};


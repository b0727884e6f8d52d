pub mod align;
pub mod composite;
pub mod conllu;
pub mod convert;
pub mod embeddings;
mod enhancement;
mod error;
pub mod eval;
pub mod orphan;
pub mod relations;

pub use enhancement::{Attachment, Diagnostic, Enhancement};
pub use error::{Error, Result};

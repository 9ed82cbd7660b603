pub mod classifier;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod newton;
pub mod oracle;
pub mod ramfilt;
pub mod residue;
pub mod treeauto;
pub mod valuation;

pub use error::{Error, Result};

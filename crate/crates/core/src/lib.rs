pub mod bgroup;
pub mod chartab;
pub mod error;
pub mod etf;
pub mod exact;
pub mod gf2n;
pub mod heis;
pub mod scheme;
pub mod search;

pub use error::{Error, Result};

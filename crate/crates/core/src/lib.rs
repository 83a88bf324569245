pub mod cli;
pub mod construct;
pub mod error;
pub mod exactmat;
pub mod gfengine;
pub mod oracle;
pub mod series;

pub use error::{GfError, Result};

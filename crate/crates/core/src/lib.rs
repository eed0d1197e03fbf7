pub mod chen;
pub mod error;
pub mod formbank;
pub mod groupring;
pub mod hodge;
pub mod hoforms;
pub mod modgroup;
pub mod poincare;

pub use error::{Error, Result};

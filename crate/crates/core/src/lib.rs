//! Human computation as a costed machine, with the password schemas,
//! STML-based generator and one-way function candidates, and the attacks
//! that probe them at desk scale.

pub mod adversary;
pub mod error;
pub mod keys;
pub mod machine;
pub mod modifiers;
pub mod owf;
pub mod prg;
pub mod schemas;
pub mod stats;

pub use error::{Error, Result};
pub use keys::{gen_key, Alphabet, GeneratedKey, KeyMap};
pub use machine::{Accounting, CostLedger, Machine};

//! Application drivers built on the sheaf engine.

pub mod des;
pub mod paths;
pub mod prefs;

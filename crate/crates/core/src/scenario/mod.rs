//! Scenario models built on the core primitives.

pub mod bs;
pub mod relay;
pub mod caching;
pub mod wet;

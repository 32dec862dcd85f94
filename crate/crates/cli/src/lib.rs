//! Command line and HTTP front end for `pruning-core`.

pub mod api;
pub mod commands;
pub mod path;
pub mod service;

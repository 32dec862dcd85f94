//! Verification toolkit for pruned horseshoes and the Hénon family.
//!
//! * [`symbolic`]: exact itineraries, unimodal order and symbol-square coordinates.
//! * [`sft`]: pruning automorphisms `ρ_{N,M}` and their fixed-point subshifts.
//! * [`disk`]: exact symbol-square verification of pruning-disk conditions.
//! * [`henon`]: Hénon-map numerics (classification, periodic-orbit census, slices).
//! * [`verifier`]: census-versus-subshift cross-checks and parameter presets.

pub mod disk;
pub mod henon;
pub mod sft;
pub mod symbolic;
pub mod verifier;

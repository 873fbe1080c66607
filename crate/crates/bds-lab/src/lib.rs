//! Lab harness around `bds-core`: file formats, deterministic corpora,
//! verification suites for every empirically checkable bound, sample
//! complexity sweeps, SVG rendering, and the `bds-lab` CLI.
//!
//! Everything here is reproducibility-first: outputs embed the resolved
//! configuration hash and master seed, parallel execution is capped by
//! `BDS_LAB_THREADS` and always reduces in index order, and re-running
//! any command with identical arguments yields byte-identical artifacts.

pub mod cli;
pub mod corpus;
pub mod fixtures;
pub mod io;
pub mod parallel;
pub mod plot;
pub mod stats;
pub mod sweep;
pub mod verify;

//! Crossing families in planar point sets.
//!
//! A `k`-crossing family of a point set is a set of `k` segments between
//! its points whose interiors cross pairwise. This crate computes the
//! maximum size `cf(S)` exactly, builds point sets with provably small
//! crossing families by replicating smaller ones, checks geometric
//! thrackles, encodes the existence question as CNF over signotope
//! variables, and searches for extremal configurations heuristically.

pub mod crossing;
pub mod error;
pub mod geometry;
pub mod io;
pub mod known;
pub mod library;
pub mod replication;
pub mod sat;
pub mod search;
pub mod svg;
pub mod thrackle;

pub use crossing::{
    brute_force_cf, build_crossing_graph, count_k_families, has_k_family, max_crossing_family,
    CrossingFamily, CrossingGraph, OrientationTable, Segment,
};
pub use error::{Error, Result};
pub use geometry::{
    is_general_position, normalize_coordinates, orientation, segments_cross, Coord, Orientation,
    Point, PointSet,
};

//! Reconstruction of a compact planar region from a single trajectory of a
//! reflected Brownian motion (or a general reflected diffusion) living in it.
//!
//! The crate provides:
//!
//! * a geometry kernel (robust Delaunay triangulation, Euclidean MST,
//!   uniform-grid nearest-neighbor queries),
//! * ground-truth domains with membership, projection and rasterization,
//! * an Euler scheme with projection reflection for reflected diffusions,
//! * the two trajectory-support estimators — the r-convex hull and the
//!   trajectory sausage (union of balls) — with exact areas and perimeters
//!   plus brute-force grid oracles,
//! * evaluation metrics (Hausdorff distance, distance in measure, outer
//!   Minkowski content, log-log rate fits),
//! * data-driven tuning rules for the smoothing radius and hull parameter,
//! * CSV/SVG/GeoJSON ingestion and export, and a reproducible Monte Carlo
//!   experiment harness behind the `rbmset` CLI.
//!
//! The geometry kernel is generic over the scalar (`f32`/`f64`, see
//! [`num::Real`]); the pipeline itself is pinned to `f64` through the
//! aliases re-exported here ([`Point2`], [`Disk2`], [`Arc2`], [`BBox2`]).

pub mod cli;
pub mod domains;
pub mod estimators;
pub mod experiments;
pub mod export;
pub mod geom;
pub mod ingest;
pub mod mask;
pub mod metrics;
pub mod num;
pub mod tuning;
pub mod sim;

pub use geom::{Arc2, BBox2, Disk2, Point2};

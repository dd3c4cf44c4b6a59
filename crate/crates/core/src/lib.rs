//! Combinatorics of 5-regular matchstick graphs: validation, face contributions,
//! TQ/TR classes, the parameter identity and the discharging audit.

pub mod contribution;
pub mod format;
pub mod gallery;
pub mod geometry;
pub mod graph;
pub mod params;
pub mod patch;
pub mod pentagon;
pub mod planar;
pub mod refute;
pub mod report;
pub mod sweep;
pub mod tq;
pub mod tr;
pub mod validator;
pub mod weights;

//! Straight-line drawings: points plus an edge list.

use serde::{Deserialize, Serialize};

use crate::geometry::{lattice_to_plane, LatticePoint, Point2};
use crate::planar::{EmbeddingError, PlanarEmbedding};
use crate::validator::{validate_matchstick, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    pub points: Vec<Point2>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(points: Vec<Point2>, edges: Vec<(usize, usize)>) -> Self {
        Graph { points, edges }
    }

    pub fn from_lattice(points: &[LatticePoint], edges: Vec<(usize, usize)>) -> Self {
        Graph { points: points.iter().map(|&p| lattice_to_plane(p)).collect(), edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn embed(&self, eps: f64) -> Result<PlanarEmbedding, EmbeddingError> {
        PlanarEmbedding::from_coordinates(self.points.clone(), &self.edges, eps)
    }

    pub fn validate(&self, eps: f64) -> Verdict {
        validate_matchstick(&self.points, &self.edges, eps)
    }

    /// Index of the point within `eps` of `p`, if any.
    pub fn find_point(&self, p: Point2, eps: f64) -> Option<usize> {
        self.points.iter().position(|q| q.dist(p) <= eps)
    }
}

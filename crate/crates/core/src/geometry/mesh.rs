//! Conforming 2D triangle meshes.

use crate::error::{Error, Result};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<[usize; 2]>,
    /// Max element diameter.
    pub h: f64,
}

impl Mesh {
    pub fn new(
        vertices: Vec<[f64; 2]>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<[usize; 2]>,
    ) -> Result<Self> {
        let mut mesh = Mesh {
            vertices,
            triangles,
            boundary_edges,
            h: 0.0,
        };
        mesh.h = mesh.max_diameter();
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [i, j, k] = self.triangles[t];
        let [x0, y0] = self.vertices[i];
        let [x1, y1] = self.vertices[j];
        let [x2, y2] = self.vertices[k];
        0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    pub fn triangle_diameter(&self, t: usize) -> f64 {
        let [i, j, k] = self.triangles[t];
        let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        d(self.vertices[i], self.vertices[j])
            .max(d(self.vertices[j], self.vertices[k]))
            .max(d(self.vertices[k], self.vertices[i]))
    }

    fn max_diameter(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.triangle_diameter(t))
            .fold(0.0, f64::max)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_degrees(&self) -> f64 {
        let mut best = f64::INFINITY;
        for &[i, j, k] in &self.triangles {
            let v = [self.vertices[i], self.vertices[j], self.vertices[k]];
            for c in 0..3 {
                let a = v[(c + 1) % 3];
                let b = v[(c + 2) % 3];
                let p = v[c];
                let u = [a[0] - p[0], a[1] - p[1]];
                let w = [b[0] - p[0], b[1] - p[1]];
                let dot = u[0] * w[0] + u[1] * w[1];
                let nu = (u[0] * u[0] + u[1] * u[1]).sqrt();
                let nw = (w[0] * w[0] + w[1] * w[1]).sqrt();
                let ang = (dot / (nu * nw)).clamp(-1.0, 1.0).acos();
                best = best.min(ang.to_degrees());
            }
        }
        best
    }

    /// Structural checks: positive areas, valid indices, interior edges shared
    /// by exactly two triangles, boundary edges by exactly one and forming
    /// closed loops, no unused vertices.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        let mut used = vec![false; nv];
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, &[i, j, k]) in self.triangles.iter().enumerate() {
            if i >= nv || j >= nv || k >= nv {
                return Err(Error::Mesh(format!("triangle {t} has out-of-range vertex")));
            }
            if self.signed_area(t) <= 0.0 {
                return Err(Error::Mesh(format!(
                    "triangle {t} has nonpositive area {}",
                    self.signed_area(t)
                )));
            }
            used[i] = true;
            used[j] = true;
            used[k] = true;
            for (a, b) in [(i, j), (j, k), (k, i)] {
                let key = (a.min(b), a.max(b));
                *edge_count.entry(key).or_insert(0) += 1;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::Mesh(format!("vertex {v} not referenced by any triangle")));
        }
        for (&(a, b), &c) in &edge_count {
            if c > 2 {
                return Err(Error::Mesh(format!(
                    "edge ({a},{b}) shared by {c} triangles"
                )));
            }
        }
        // stored boundary must be exactly the once-counted edges
        let mut expected: Vec<(usize, usize)> = edge_count
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&e, _)| e)
            .collect();
        expected.sort_unstable();
        let mut stored: Vec<(usize, usize)> = self
            .boundary_edges
            .iter()
            .map(|&[a, b]| (a.min(b), a.max(b)))
            .collect();
        stored.sort_unstable();
        if expected != stored {
            return Err(Error::Mesh(format!(
                "boundary edge list mismatch: stored {} edges, mesh has {}",
                stored.len(),
                expected.len()
            )));
        }
        // closed loops: every boundary vertex has degree exactly 2
        let mut deg: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in &stored {
            *deg.entry(a).or_insert(0) += 1;
            *deg.entry(b).or_insert(0) += 1;
        }
        if let Some((v, d)) = deg.iter().find(|(_, &d)| d != 2) {
            return Err(Error::Mesh(format!(
                "boundary vertex {v} has degree {d}, loops not closed"
            )));
        }
        Ok(())
    }

    /// Connected component id per vertex.
    pub fn vertex_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &[i, j, k] in &self.triangles {
            for (a, b) in [(i, j), (j, k)] {
                let ra = find(&mut parent, a);
                let rb = find(&mut parent, b);
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut out = vec![0usize; self.vertices.len()];
        for v in 0..self.vertices.len() {
            let r = find(&mut parent, v);
            let next = label.len();
            out[v] = *label.entry(r).or_insert(next);
        }
        out
    }

    pub fn num_components(&self) -> usize {
        self.vertex_components().iter().max().map_or(0, |m| m + 1)
    }

    /// Barycentric coordinates of `p` with respect to triangle `t`.
    pub fn barycentric(&self, t: usize, p: [f64; 2]) -> [f64; 3] {
        let [i, j, k] = self.triangles[t];
        let [x0, y0] = self.vertices[i];
        let [x1, y1] = self.vertices[j];
        let [x2, y2] = self.vertices[k];
        let det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
        let l1 = ((p[0] - x0) * (y2 - y0) - (x2 - x0) * (p[1] - y0)) / det;
        let l2 = ((x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0)) / det;
        [1.0 - l1 - l2, l1, l2]
    }
}

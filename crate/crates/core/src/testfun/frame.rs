//! The folding frame: two base points, the unit vector joining them, and
//! the mediator hyperplane across which the field is reflected.

use crate::error::{Error, Result};
use crate::numerics::vecn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone)]
pub struct FoldingFrame {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// (B - A)/||B - A||.
    pub ab: Vec<f64>,
    pub midpoint: Vec<f64>,
}

impl FoldingFrame {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Precondition("frame points of mixed dimension".into()));
        }
        let d = vecn::sub(&b, &a);
        let norm = vecn::norm(&d);
        if norm < 1e-12 * (1.0 + vecn::norm(&a)) {
            return Err(Error::Precondition("frame requires two distinct points".into()));
        }
        let ab = vecn::scale(&d, 1.0 / norm);
        let midpoint = vecn::scale(&vecn::add(&a, &b), 0.5);
        Ok(FoldingFrame { a, b, ab, midpoint })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Signed offset from the mediator hyperplane, negative on the A side.
    pub fn signed_offset(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.midpoint)
            .zip(&self.ab)
            .map(|((xi, mi), di)| (xi - mi) * di)
            .sum()
    }

    pub fn side(&self, x: &[f64]) -> Side {
        if self.signed_offset(x) < 0.0 {
            Side::A
        } else {
            Side::B
        }
    }

    /// The linear reflection T(v) = v - 2 (ab . v) ab.
    pub fn reflect(&self, v: &[f64]) -> Vec<f64> {
        let c = 2.0 * vecn::dot(&self.ab, v);
        v.iter().zip(&self.ab).map(|(vi, di)| vi - c * di).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame2() -> FoldingFrame {
        FoldingFrame::new(vec![-1.0, 0.2], vec![1.0, -0.2]).unwrap()
    }

    #[test]
    fn unit_direction_and_sides() {
        let f = frame2();
        assert!((vecn::norm(&f.ab) - 1.0).abs() < 1e-14);
        assert_eq!(f.side(&f.a), Side::A);
        assert_eq!(f.side(&f.b), Side::B);
        assert!(f.signed_offset(&f.midpoint).abs() < 1e-15);
    }

    #[test]
    fn reflection_identities() {
        let f = frame2();
        // ab maps to -ab
        let r = f.reflect(&f.ab);
        for (x, y) in r.iter().zip(&f.ab) {
            assert!((x + y).abs() < 1e-14);
        }
        // orthogonal vectors are fixed
        let perp = vec![f.ab[1], -f.ab[0]];
        let rp = f.reflect(&perp);
        for (x, y) in rp.iter().zip(&perp) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(FoldingFrame::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
    }
}

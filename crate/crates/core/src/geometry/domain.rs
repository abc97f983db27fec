//! Bounded domain descriptions with analytic volumes.
//!
//! Base families sit centered at the origin; a rigid placement moves each
//! component of a disjoint union.

use crate::error::{Error, Result};
use crate::numerics::quad1d;
use crate::specfun::unit_ball_volume;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Placement {
    /// Translation, length = dimension.
    pub shift: Vec<f64>,
    /// Rotation angle about the origin (2D components only).
    pub angle: f64,
}

impl Placement {
    pub fn identity(dim: usize) -> Self {
        Placement {
            shift: vec![0.0; dim],
            angle: 0.0,
        }
    }

    pub fn shift2(x: f64, y: f64) -> Self {
        Placement {
            shift: vec![x, y],
            angle: 0.0,
        }
    }

    pub fn shift3(x: f64, y: f64, z: f64) -> Self {
        Placement {
            shift: vec![x, y, z],
            angle: 0.0,
        }
    }

    /// Map a point from component-local to global coordinates.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        if x.len() == 2 && self.angle != 0.0 {
            let (s, c) = self.angle.sin_cos();
            out[0] = c * x[0] - s * x[1];
            out[1] = s * x[0] + c * x[1];
        }
        for (o, s) in out.iter_mut().zip(&self.shift) {
            *o += s;
        }
        out
    }

    /// Map a global point into component-local coordinates.
    pub fn pull_back(&self, x: &[f64]) -> Vec<f64> {
        let mut v: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        if x.len() == 2 && self.angle != 0.0 {
            let (s, c) = (-self.angle).sin_cos();
            let (vx, vy) = (v[0], v[1]);
            v[0] = c * vx - s * vy;
            v[1] = s * vx + c * vy;
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacedSpec {
    pub spec: DomainSpec,
    pub placement: Placement,
}

/// Geometry of a bounded domain in R^2 or R^3.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum DomainSpec {
    Disk { r: f64 },
    Ellipse { a: f64, b: f64 },
    Rectangle { a: f64, b: f64 },
    Ball3 { r: f64 },
    Box3 { a: f64, b: f64, c: f64 },
    Dumbbell { lobe_radius: f64, neck_half_width: f64, neck_length: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
    DisjointUnion { components: Vec<PlacedSpec> },
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::Disk { r } => write!(f, "disk:{r}"),
            DomainSpec::Ellipse { a, b } => write!(f, "ellipse:{a},{b}"),
            DomainSpec::Rectangle { a, b } => write!(f, "rectangle:{a},{b}"),
            DomainSpec::Ball3 { r } => write!(f, "ball3:{r}"),
            DomainSpec::Box3 { a, b, c } => write!(f, "box3:{a},{b},{c}"),
            DomainSpec::Dumbbell {
                lobe_radius,
                neck_half_width,
                neck_length,
            } => write!(f, "dumbbell:{lobe_radius},{neck_half_width},{neck_length}"),
            DomainSpec::Polygon { vertices } => write!(f, "polygon[{}]", vertices.len()),
            DomainSpec::DisjointUnion { components } => {
                write!(f, "union(")?;
                for (i, c) in components.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{}", c.spec)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl DomainSpec {
    /// Two unit-like disks side by side, separated by `gap` along the x axis.
    pub fn two_disks(r: f64, gap: f64) -> DomainSpec {
        let off = r + 0.5 * gap;
        DomainSpec::DisjointUnion {
            components: vec![
                PlacedSpec {
                    spec: DomainSpec::Disk { r },
                    placement: Placement::shift2(-off, 0.0),
                },
                PlacedSpec {
                    spec: DomainSpec::Disk { r },
                    placement: Placement::shift2(off, 0.0),
                },
            ],
        }
    }

    pub fn two_balls3(r1: f64, r2: f64, gap: f64) -> DomainSpec {
        let off1 = r1 + 0.5 * gap;
        let off2 = r2 + 0.5 * gap;
        DomainSpec::DisjointUnion {
            components: vec![
                PlacedSpec {
                    spec: DomainSpec::Ball3 { r: r1 },
                    placement: Placement::shift3(-off1, 0.0, 0.0),
                },
                PlacedSpec {
                    spec: DomainSpec::Ball3 { r: r2 },
                    placement: Placement::shift3(off2, 0.0, 0.0),
                },
            ],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Ball3 { .. } | DomainSpec::Box3 { .. } => 3,
            DomainSpec::DisjointUnion { components } => components
                .first()
                .map(|c| c.spec.dim())
                .unwrap_or(2),
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{what} must be positive, got {v}")))
            }
        };
        match self {
            DomainSpec::Disk { r } => pos(*r, "disk radius"),
            DomainSpec::Ellipse { a, b } => {
                pos(*a, "ellipse semi-axis")?;
                pos(*b, "ellipse semi-axis")
            }
            DomainSpec::Rectangle { a, b } => {
                pos(*a, "rectangle side")?;
                pos(*b, "rectangle side")
            }
            DomainSpec::Ball3 { r } => pos(*r, "ball radius"),
            DomainSpec::Box3 { a, b, c } => {
                pos(*a, "box side")?;
                pos(*b, "box side")?;
                pos(*c, "box side")
            }
            DomainSpec::Dumbbell {
                lobe_radius,
                neck_half_width,
                neck_length,
            } => {
                pos(*lobe_radius, "lobe radius")?;
                pos(*neck_half_width, "neck half-width")?;
                pos(*neck_length, "neck length")?;
                if *neck_half_width >= 0.95 * lobe_radius {
                    return Err(Error::Domain(format!(
                        "neck half-width {neck_half_width} too close to lobe radius {lobe_radius}"
                    )));
                }
                Ok(())
            }
            DomainSpec::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::Domain("polygon needs at least 3 vertices".into()));
                }
                if shoelace_area(vertices).abs() < 1e-14 {
                    return Err(Error::Domain("polygon is degenerate".into()));
                }
                Ok(())
            }
            DomainSpec::DisjointUnion { components } => {
                if components.is_empty() {
                    return Err(Error::Domain("empty disjoint union".into()));
                }
                let d = components[0].spec.dim();
                for c in components {
                    c.spec.validate()?;
                    if c.spec.dim() != d {
                        return Err(Error::Domain("mixed dimensions in union".into()));
                    }
                    if c.placement.shift.len() != d {
                        return Err(Error::Domain("placement dimension mismatch".into()));
                    }
                }
                // conservative disjointness test on bounding balls
                for i in 0..components.len() {
                    for j in (i + 1)..components.len() {
                        let (ci, ri) = components[i].bounding_ball();
                        let (cj, rj) = components[j].bounding_ball();
                        let d2: f64 = ci
                            .iter()
                            .zip(&cj)
                            .map(|(x, y)| (x - y) * (x - y))
                            .sum();
                        if d2.sqrt() < ri + rj {
                            return Err(Error::Domain(format!(
                                "union components {i} and {j} overlap (bounding balls intersect)"
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Analytic volume (area in 2D).
    pub fn volume(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.volume_unchecked())
    }

    pub(crate) fn volume_unchecked(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            DomainSpec::Disk { r } => PI * r * r,
            DomainSpec::Ellipse { a, b } => PI * a * b,
            DomainSpec::Rectangle { a, b } => a * b,
            DomainSpec::Ball3 { r } => 4.0 / 3.0 * PI * r * r * r,
            DomainSpec::Box3 { a, b, c } => a * b * c,
            DomainSpec::Dumbbell {
                lobe_radius: r,
                neck_half_width: eps,
                neck_length: ell,
            } => {
                let geo = DumbbellGeometry::new(*r, *eps, *ell);
                // two disks + rectangular neck, minus the two lens overlaps;
                // the overlap is integrated adaptively (the asin closed form
                // backs it up in the tests)
                let seg = geo.segment_area_quadrature(1e-11);
                2.0 * PI * r * r + 4.0 * eps * geo.x0 - 2.0 * seg
            }
            DomainSpec::Polygon { vertices } => shoelace_area(vertices).abs(),
            DomainSpec::DisjointUnion { components } => components
                .iter()
                .map(|c| c.spec.volume_unchecked())
                .sum(),
        }
    }

    /// Centroid of the domain (volume-weighted over union components).
    pub fn centroid(&self) -> Vec<f64> {
        match self {
            DomainSpec::Polygon { vertices } => polygon_centroid(vertices),
            DomainSpec::DisjointUnion { components } => {
                let d = self.dim();
                let mut c = vec![0.0; d];
                let mut vol = 0.0;
                for comp in components {
                    let v = comp.spec.volume_unchecked();
                    let local = comp.spec.centroid();
                    let global = comp.placement.apply(&local);
                    for (ci, gi) in c.iter_mut().zip(&global) {
                        *ci += v * gi;
                    }
                    vol += v;
                }
                c.iter_mut().for_each(|x| *x /= vol);
                c
            }
            _ => vec![0.0; self.dim()],
        }
    }
}

impl PlacedSpec {
    fn bounding_ball(&self) -> (Vec<f64>, f64) {
        let r = match &self.spec {
            DomainSpec::Disk { r } | DomainSpec::Ball3 { r } => *r,
            DomainSpec::Ellipse { a, b } => a.max(*b),
            DomainSpec::Rectangle { a, b } => 0.5 * (a * a + b * b).sqrt(),
            DomainSpec::Box3 { a, b, c } => 0.5 * (a * a + b * b + c * c).sqrt(),
            DomainSpec::Dumbbell {
                lobe_radius,
                neck_half_width: _,
                neck_length,
            } => lobe_radius * 2.0 + 0.5 * neck_length,
            DomainSpec::Polygon { vertices } => {
                let c = polygon_centroid(vertices);
                vertices
                    .iter()
                    .map(|v| ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2)).sqrt())
                    .fold(0.0, f64::max)
            }
            DomainSpec::DisjointUnion { components } => {
                let c = self.spec.centroid();
                components
                    .iter()
                    .map(|comp| {
                        let (bc, br) = comp.bounding_ball();
                        let d: f64 = bc
                            .iter()
                            .zip(&c)
                            .map(|(x, y)| (x - y) * (x - y))
                            .sum::<f64>()
                            .sqrt();
                        d + br
                    })
                    .fold(0.0, f64::max)
            }
        };
        let center = match &self.spec {
            DomainSpec::Polygon { vertices } => self.placement.apply(&polygon_centroid(vertices)),
            other => self.placement.apply(&other.centroid()),
        };
        (center, r)
    }
}

/// Derived geometry of the dumbbell: two lobes of radius r centered at
/// (+-c, 0), a neck strip |x| <= x0, |y| <= eps whose vertical edges are
/// exactly the chords where the circles reach height eps.
#[derive(Debug, Clone, Copy)]
pub struct DumbbellGeometry {
    pub r: f64,
    pub eps: f64,
    pub ell: f64,
    /// lobe center offset
    pub c: f64,
    /// distance from lobe center to the chord
    pub h0: f64,
    /// half-length of the neck
    pub x0: f64,
    /// half-angle of the chord window seen from the lobe center
    pub gamma: f64,
}

impl DumbbellGeometry {
    pub fn new(r: f64, eps: f64, ell: f64) -> Self {
        let c = r + 0.5 * ell;
        let h0 = (r * r - eps * eps).sqrt();
        DumbbellGeometry {
            r,
            eps,
            ell,
            c,
            h0,
            x0: c - h0,
            gamma: (eps / r).asin(),
        }
    }

    /// Area of the circular segment the neck strip shares with one lobe,
    /// by adaptive quadrature of the chord height.
    pub fn segment_area_quadrature(&self, tol: f64) -> f64 {
        let (r, c, x0) = (self.r, self.c, self.x0);
        quad1d::integrate(
            |x| 2.0 * (r * r - (x - c) * (x - c)).max(0.0).sqrt(),
            c - r,
            x0,
            tol,
        )
    }

    /// The same segment area in closed form.
    pub fn segment_area_closed_form(&self) -> f64 {
        self.r * self.r * (self.eps / self.r).asin() - self.eps * self.h0
    }
}

/// Equivalent radii: R with |B_R| = |Omega| and r with |B_r| = |Omega|/2.
pub fn equivalent_radii(spec: &DomainSpec) -> Result<(f64, f64)> {
    let n = spec.dim();
    let vol = spec.volume()?;
    let wn = unit_ball_volume(n);
    Ok((
        (vol / wn).powf(1.0 / n as f64),
        (vol / (2.0 * wn)).powf(1.0 / n as f64),
    ))
}

pub fn shoelace_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let [x0, y0] = vertices[i];
        let [x1, y1] = vertices[(i + 1) % n];
        s += x0 * y1 - x1 * y0;
    }
    0.5 * s
}

fn polygon_centroid(vertices: &[[f64; 2]]) -> Vec<f64> {
    let n = vertices.len();
    let a = shoelace_area(vertices);
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..n {
        let [x0, y0] = vertices[i];
        let [x1, y1] = vertices[(i + 1) % n];
        let cross = x0 * y1 - x1 * y0;
        cx += (x0 + x1) * cross;
        cy += (y0 + y1) * cross;
    }
    vec![cx / (6.0 * a), cy / (6.0 * a)]
}

/// L-shaped polygon: square of side `s` with the upper-right quadrant removed.
pub fn l_shape(s: f64) -> DomainSpec {
    let h = 0.5 * s;
    DomainSpec::Polygon {
        vertices: vec![
            [0.0, 0.0],
            [s, 0.0],
            [s, h],
            [h, h],
            [h, s],
            [0.0, s],
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn basic_volumes() {
        assert!((DomainSpec::Disk { r: 1.0 }.volume().unwrap() - PI).abs() < 1e-14);
        assert!((DomainSpec::Ellipse { a: 2.0, b: 1.0 }.volume().unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!(
            (DomainSpec::two_disks(1.0, 1.0).volume().unwrap() - 2.0 * PI).abs() < 1e-13,
            "additivity"
        );
        assert!((DomainSpec::Box3 { a: 1.0, b: 2.0, c: 3.0 }.volume().unwrap() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn dumbbell_volume_against_closed_form() {
        for &(r, eps, ell) in &[(1.0, 0.05, 0.5), (1.0, 0.5, 0.5), (2.0, 0.3, 1.0)] {
            let geo = DumbbellGeometry::new(r, eps, ell);
            let quad = geo.segment_area_quadrature(1e-11);
            let closed = geo.segment_area_closed_form();
            assert!(
                (quad - closed).abs() < 1e-10,
                "segment area: {quad} vs {closed}"
            );
            let spec = DomainSpec::Dumbbell {
                lobe_radius: r,
                neck_half_width: eps,
                neck_length: ell,
            };
            let expected = 2.0 * PI * r * r + 4.0 * eps * geo.x0 - 2.0 * closed;
            assert!((spec.volume().unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn dumbbell_volume_degenerates_to_two_disks() {
        let mut prev = f64::INFINITY;
        for &eps in &[0.4, 0.2, 0.1, 0.05, 0.01, 0.001] {
            let v = DomainSpec::Dumbbell {
                lobe_radius: 1.0,
                neck_half_width: eps,
                neck_length: 0.5,
            }
            .volume()
            .unwrap();
            assert!(v > 2.0 * PI && v < prev, "eps={eps}: {v}");
            prev = v;
        }
        assert!((prev - 2.0 * PI).abs() < 2e-3);
    }

    #[test]
    fn equivalent_radii_definitions() {
        let (big, half) = equivalent_radii(&DomainSpec::Disk { r: 1.0 }).unwrap();
        assert!((big - 1.0).abs() < 1e-14);
        assert!((half - 0.5f64.sqrt()).abs() < 1e-14);

        let (big, half) = equivalent_radii(&DomainSpec::two_disks(1.0, 0.5)).unwrap();
        assert!((big - 2f64.sqrt()).abs() < 1e-13);
        assert!((half - 1.0).abs() < 1e-13);

        let (big, _) = equivalent_radii(&DomainSpec::Box3 { a: 1.0, b: 1.0, c: 1.0 }).unwrap();
        assert!((big - (3.0 / (4.0 * PI)).powf(1.0 / 3.0)).abs() < 1e-13);
        // |B_r| = |Omega|/2 by construction
        let spec = DomainSpec::Ellipse { a: 1.7, b: 0.4 };
        let (_, r) = equivalent_radii(&spec).unwrap();
        assert!((PI * r * r - 0.5 * spec.volume().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn overlapping_union_rejected() {
        let bad = DomainSpec::DisjointUnion {
            components: vec![
                PlacedSpec {
                    spec: DomainSpec::Disk { r: 1.0 },
                    placement: Placement::shift2(0.0, 0.0),
                },
                PlacedSpec {
                    spec: DomainSpec::Disk { r: 1.0 },
                    placement: Placement::shift2(1.5, 0.0),
                },
            ],
        };
        assert!(bad.validate().is_err());
        assert!(DomainSpec::two_disks(1.0, 0.1).validate().is_ok());
    }

    #[test]
    fn l_shape_area() {
        let spec = l_shape(2.0);
        assert!((spec.volume().unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn placement_round_trip() {
        let p = Placement {
            shift: vec![1.0, -2.0],
            angle: 0.7,
        };
        let x = [0.3, 0.9];
        let back = p.pull_back(&p.apply(&x));
        assert!((back[0] - x[0]).abs() < 1e-14 && (back[1] - x[1]).abs() < 1e-14);
    }
}

//! Quadrature backends for the test-field integrals: analytic tensor rules
//! for separable families, and mesh rules with mediator-aware cell
//! splitting for triangulated domains.

use crate::eigensolve::spectral::{AnalyticMode, EigenBasis, SpectralResult};
use crate::error::{Error, Result};
use crate::geometry::domain::DomainSpec;
use crate::geometry::mesh::Mesh;
use crate::geometry::quad::reference_rule;
use crate::numerics::gauss::gauss_legendre_on;
use crate::testfun::frame::{FoldingFrame, Side};
use nalgebra::DMatrix;
use std::f64::consts::PI;

/// One quadrature node of a fold-aware rule.
#[derive(Debug, Clone)]
pub struct FieldNode {
    pub x: Vec<f64>,
    pub w: f64,
    pub side: Side,
    /// Mesh triangle the node came from, if meshed.
    pub parent: Option<usize>,
    /// Union component the node lies in (0 for plain domains).
    pub component: usize,
}

/// A domain prepared for test-field integration: geometry, quadrature
/// nodes, spectrum, and an eigenfunction basis whose zero modes are
/// rotated so that f_0 is the global constant.
pub struct DomainBackend {
    pub spec: DomainSpec,
    pub volume: f64,
    pub spectrum: SpectralResult,
    kind: BackendKind,
    /// Piecewise-constant zero modes after rotation: values per component.
    zero_modes: Vec<ZeroMode>,
    n_zero: usize,
}

enum BackendKind {
    Analytic {
        nodes: Vec<FieldNode>,
        modes: Vec<AnalyticMode>,
    },
    Meshed {
        mesh: Mesh,
        nodes: Vec<FieldNode>,
        vectors: Vec<Vec<f64>>,
        rule: Vec<([f64; 3], f64)>,
    },
}

enum ZeroMode {
    /// value per union component
    PerComponent(Vec<f64>),
    /// rotated nodal vector (meshed path)
    Nodal(Vec<f64>),
}

impl DomainBackend {
    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    /// Number of exact zero eigenvalues (one per connected component).
    pub fn zero_count(&self) -> usize {
        self.n_zero
    }

    /// Analytic backend from a separable domain and its analytic spectrum.
    /// `resolution` scales the tensor rule sizes (1 is plenty for the
    /// acceptance tolerances).
    pub fn analytic(spec: &DomainSpec, spectrum: SpectralResult, resolution: usize) -> Result<Self> {
        let EigenBasis::Analytic(modes) = spectrum.basis.clone() else {
            return Err(Error::Precondition("analytic backend needs analytic modes".into()));
        };
        let mut nodes = Vec::new();
        build_nodes(spec, &identity_placement(spec.dim()), 0, resolution.max(1), &mut nodes)?;
        let volume = spec.volume()?;
        let (zero_modes, n_zero) = rotate_zero_modes_analytic(spec, &spectrum)?;
        Ok(DomainBackend {
            spec: spec.clone(),
            volume,
            spectrum,
            kind: BackendKind::Analytic { nodes, modes },
            zero_modes,
            n_zero,
        })
    }

    /// Meshed backend from a triangulation and its FEM spectrum.
    pub fn meshed(spec: &DomainSpec, mesh: Mesh, spectrum: SpectralResult) -> Result<Self> {
        let EigenBasis::Nodal(vectors) = spectrum.basis.clone() else {
            return Err(Error::Precondition("meshed backend needs nodal vectors".into()));
        };
        let volume = spec.volume()?;
        let rule = reference_rule(4)?;
        let mut nodes = Vec::with_capacity(mesh.num_triangles() * rule.len());
        let comp = mesh.vertex_components();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let component = comp[tri[0]];
            push_triangle_rule(
                &mesh.vertices[tri[0]],
                &mesh.vertices[tri[1]],
                &mesh.vertices[tri[2]],
                &rule,
                t,
                component,
                Side::A,
                &mut nodes,
            );
        }
        let n_zero = mesh.num_components();
        let (zero_modes, n_zero) = rotate_zero_modes_nodal(&mesh, &vectors, n_zero)?;
        Ok(DomainBackend {
            spec: spec.clone(),
            volume,
            spectrum,
            kind: BackendKind::Meshed { mesh, nodes, vectors, rule },
            zero_modes,
            n_zero,
        })
    }

    /// Plain quadrature nodes (side tags meaningless).
    pub fn nodes(&self) -> &[FieldNode] {
        match &self.kind {
            BackendKind::Analytic { nodes, .. } => nodes,
            BackendKind::Meshed { nodes, .. } => nodes,
        }
    }

    /// Fold-aware rule: every node strictly on one side of the mediator.
    /// Mesh triangles crossed by the hyperplane are split into sub-triangles.
    pub fn fold_quadrature(&self, frame: &FoldingFrame) -> Vec<FieldNode> {
        match &self.kind {
            BackendKind::Analytic { nodes, .. } => nodes
                .iter()
                .map(|n| {
                    let mut m = n.clone();
                    m.side = frame.side(&n.x);
                    m
                })
                .collect(),
            BackendKind::Meshed { mesh, rule, .. } => {
                let comp = mesh.vertex_components();
                let mut out = Vec::with_capacity(mesh.num_triangles() * rule.len());
                for (t, tri) in mesh.triangles.iter().enumerate() {
                    let component = comp[tri[0]];
                    let v = [
                        mesh.vertices[tri[0]],
                        mesh.vertices[tri[1]],
                        mesh.vertices[tri[2]],
                    ];
                    let s = [
                        frame.signed_offset(&v[0]),
                        frame.signed_offset(&v[1]),
                        frame.signed_offset(&v[2]),
                    ];
                    let has_neg = s.iter().any(|&x| x < 0.0);
                    let has_pos = s.iter().any(|&x| x > 0.0);
                    if !(has_neg && has_pos) {
                        let side = if has_neg { Side::A } else { Side::B };
                        push_triangle_rule(&v[0], &v[1], &v[2], rule, t, component, side, &mut out);
                        continue;
                    }
                    // split: the lone vertex sits alone on its side
                    let lone = (0..3)
                        .find(|&i| {
                            let si = s[i].signum();
                            si != s[(i + 1) % 3].signum() && si != s[(i + 2) % 3].signum()
                        })
                        .unwrap_or(0);
                    let i0 = lone;
                    let i1 = (lone + 1) % 3;
                    let i2 = (lone + 2) % 3;
                    let cut = |p: [f64; 2], sp: f64, q: [f64; 2], sq: f64| -> [f64; 2] {
                        let t = sp / (sp - sq);
                        [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
                    };
                    let p01 = cut(v[i0], s[i0], v[i1], s[i1]);
                    let p02 = cut(v[i0], s[i0], v[i2], s[i2]);
                    let lone_side = if s[i0] < 0.0 { Side::A } else { Side::B };
                    let far_side = if s[i0] < 0.0 { Side::B } else { Side::A };
                    push_triangle_rule(&v[i0], &p01, &p02, rule, t, component, lone_side, &mut out);
                    push_triangle_rule(&v[i1], &v[i2], &p01, rule, t, component, far_side, &mut out);
                    push_triangle_rule(&v[i2], &p02, &p01, rule, t, component, far_side, &mut out);
                }
                out
            }
        }
    }

    /// Eigenfunction j at a quadrature node (basis rotated so that index 0
    /// is the global constant 1/sqrt(|Omega|)).
    pub fn eval_eigenfunction(&self, j: usize, node: &FieldNode) -> f64 {
        if j < self.n_zero {
            return match &self.zero_modes[j] {
                ZeroMode::PerComponent(vals) => vals[node.component],
                ZeroMode::Nodal(v) => self.eval_nodal(v, node),
            };
        }
        match &self.kind {
            BackendKind::Analytic { modes, .. } => modes[j].eval(&node.x, node.component),
            BackendKind::Meshed { vectors, .. } => self.eval_nodal(&vectors[j], node),
        }
    }

    fn eval_nodal(&self, v: &[f64], node: &FieldNode) -> f64 {
        let BackendKind::Meshed { mesh, .. } = &self.kind else {
            unreachable!("nodal evaluation on analytic backend")
        };
        let t = node.parent.expect("meshed node without parent triangle");
        let l = mesh.barycentric(t, [node.x[0], node.x[1]]);
        let [i, j, k] = mesh.triangles[t];
        l[0] * v[i] + l[1] * v[j] + l[2] * v[k]
    }
}

fn identity_placement(dim: usize) -> crate::geometry::domain::Placement {
    crate::geometry::domain::Placement::identity(dim)
}

#[allow(clippy::too_many_arguments)]
fn push_triangle_rule(
    a: &[f64; 2],
    b: &[f64; 2],
    c: &[f64; 2],
    rule: &[([f64; 3], f64)],
    parent: usize,
    component: usize,
    side: Side,
    out: &mut Vec<FieldNode>,
) {
    let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs();
    if area == 0.0 {
        return;
    }
    for &(l, w) in rule {
        out.push(FieldNode {
            x: vec![
                l[0] * a[0] + l[1] * b[0] + l[2] * c[0],
                l[0] * a[1] + l[1] * b[1] + l[2] * c[1],
            ],
            w: w * area,
            side,
            parent: Some(parent),
            component,
        });
    }
}

fn build_nodes(
    spec: &DomainSpec,
    placement: &crate::geometry::domain::Placement,
    component: usize,
    res: usize,
    out: &mut Vec<FieldNode>,
) -> Result<()> {
    match spec {
        DomainSpec::Disk { r } => {
            let nr = 48 * res;
            let nt = 128 * res;
            let (rs, rw) = gauss_legendre_on(nr, 0.0, *r);
            let dth = 2.0 * PI / nt as f64;
            for (&rad, &wr) in rs.iter().zip(&rw) {
                for it in 0..nt {
                    let th = dth * it as f64;
                    let local = [rad * th.cos(), rad * th.sin()];
                    out.push(FieldNode {
                        x: placement.apply(&local),
                        w: wr * rad * dth,
                        side: Side::A,
                        parent: None,
                        component,
                    });
                }
            }
        }
        DomainSpec::Rectangle { a, b } => {
            let n1 = 48 * res;
            let (xs, xw) = gauss_legendre_on(n1, -0.5 * a, 0.5 * a);
            let (ys, yw) = gauss_legendre_on(n1, -0.5 * b, 0.5 * b);
            for (&x, &wx) in xs.iter().zip(&xw) {
                for (&y, &wy) in ys.iter().zip(&yw) {
                    out.push(FieldNode {
                        x: placement.apply(&[x, y]),
                        w: wx * wy,
                        side: Side::A,
                        parent: None,
                        component,
                    });
                }
            }
        }
        DomainSpec::Ball3 { r } => {
            let nr = 32 * res;
            let nu = 24 * res;
            let nt = 48 * res;
            let (rs, rw) = gauss_legendre_on(nr, 0.0, *r);
            let (us, uw) = gauss_legendre_on(nu, -1.0, 1.0);
            let dth = 2.0 * PI / nt as f64;
            for (&rad, &wr) in rs.iter().zip(&rw) {
                for (&u, &wu) in us.iter().zip(&uw) {
                    let s = (1.0 - u * u).sqrt();
                    for it in 0..nt {
                        let th = dth * it as f64;
                        let local = [rad * s * th.cos(), rad * s * th.sin(), rad * u];
                        out.push(FieldNode {
                            x: placement.apply(&local),
                            w: wr * rad * rad * wu * dth,
                            side: Side::A,
                            parent: None,
                            component,
                        });
                    }
                }
            }
        }
        DomainSpec::Box3 { a, b, c } => {
            let n1 = 24 * res;
            let (xs, xw) = gauss_legendre_on(n1, -0.5 * a, 0.5 * a);
            let (ys, yw) = gauss_legendre_on(n1, -0.5 * b, 0.5 * b);
            let (zs, zw) = gauss_legendre_on(n1, -0.5 * c, 0.5 * c);
            for (&x, &wx) in xs.iter().zip(&xw) {
                for (&y, &wy) in ys.iter().zip(&yw) {
                    for (&z, &wz) in zs.iter().zip(&zw) {
                        out.push(FieldNode {
                            x: placement.apply(&[x, y, z]),
                            w: wx * wy * wz,
                            side: Side::A,
                            parent: None,
                            component,
                        });
                    }
                }
            }
        }
        DomainSpec::DisjointUnion { components } => {
            for (ci, comp) in components.iter().enumerate() {
                let composed = compose(placement, &comp.placement);
                build_nodes(&comp.spec, &composed, ci, res, out)?;
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "no tensor quadrature for family {other}; mesh it instead"
            )))
        }
    }
    Ok(())
}

fn compose(
    outer: &crate::geometry::domain::Placement,
    inner: &crate::geometry::domain::Placement,
) -> crate::geometry::domain::Placement {
    crate::geometry::domain::Placement {
        shift: outer.apply(&inner.shift),
        angle: outer.angle + inner.angle,
    }
}

/// Rotate the zero eigenspace so that the first zero mode is the global
/// constant: a Householder map sending e_1 to the vector of component
/// volume fractions.
fn zero_rotation(volumes: &[f64]) -> DMatrix<f64> {
    let nz = volumes.len();
    let total: f64 = volumes.iter().sum();
    let a = DMatrix::from_fn(nz, 1, |i, _| (volumes[i] / total).sqrt());
    let mut q = DMatrix::identity(nz, nz);
    if nz == 1 {
        return q;
    }
    // Householder: H e_1 = a
    let mut v = a.clone();
    v[(0, 0)] -= 1.0;
    let vn = v.norm();
    if vn < 1e-14 {
        return q;
    }
    let v = v / vn;
    q -= 2.0 * &v * v.transpose();
    // columns of q: first = a (up to sign); fix sign
    if q[(0, 0)] < 0.0 {
        q.neg_mut();
    }
    q
}

fn rotate_zero_modes_analytic(
    spec: &DomainSpec,
    spectrum: &SpectralResult,
) -> Result<(Vec<ZeroMode>, usize)> {
    let n_zero = spectrum.eigenvalues.iter().filter(|&&mu| mu == 0.0).count();
    let comp_volumes: Vec<f64> = match spec {
        DomainSpec::DisjointUnion { components } => components
            .iter()
            .map(|c| c.spec.volume_unchecked())
            .collect(),
        other => vec![other.volume_unchecked()],
    };
    if comp_volumes.len() != n_zero {
        return Err(Error::Precondition(format!(
            "{} zero modes but {} components",
            n_zero,
            comp_volumes.len()
        )));
    }
    let q = zero_rotation(&comp_volumes);
    let mut out = Vec::with_capacity(n_zero);
    for j in 0..n_zero {
        // f_j = sum_c q[c][j] * 1_{C_c} / sqrt(vol_c)
        let vals: Vec<f64> = (0..n_zero)
            .map(|c| q[(c, j)] / comp_volumes[c].sqrt())
            .collect();
        out.push(ZeroMode::PerComponent(vals));
    }
    Ok((out, n_zero))
}

fn rotate_zero_modes_nodal(
    mesh: &Mesh,
    vectors: &[Vec<f64>],
    n_zero: usize,
) -> Result<(Vec<ZeroMode>, usize)> {
    // the first n_zero nodal vectors are the per-component constants
    let comp = mesh.vertex_components();
    let mut areas = vec![0.0; n_zero];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        areas[comp[tri[0]]] += mesh.signed_area(t);
    }
    let q = zero_rotation(&areas);
    let n = mesh.num_vertices();
    let mut out = Vec::with_capacity(n_zero);
    for j in 0..n_zero {
        let mut v = vec![0.0; n];
        for c in 0..n_zero {
            let src = vectors
                .get(c)
                .ok_or_else(|| Error::Precondition("missing zero-mode vectors".into()))?;
            for i in 0..n {
                v[i] += q[(c, j)] * src[i];
            }
        }
        out.push(ZeroMode::Nodal(v));
    }
    Ok((out, n_zero))
}

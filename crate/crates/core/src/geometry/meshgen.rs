//! Mesh generation for the 2D families: mapped structured grids for
//! rectangles, graded concentric-ring meshes for disks and ellipses,
//! ear clipping plus uniform refinement for polygons, and a three-patch
//! template for dumbbells (two ring patches joined by a tensor neck strip
//! whose vertical edges are exactly the lobe chords).

use crate::error::{Error, Result};
use crate::geometry::domain::{shoelace_area, DomainSpec, DumbbellGeometry};
use crate::geometry::mesh::Mesh;
use std::collections::HashMap;
use std::f64::consts::PI;

pub fn generate_mesh(spec: &DomainSpec, target_h: f64) -> Result<Mesh> {
    spec.validate()?;
    if !(target_h > 0.0) {
        return Err(Error::Mesh(format!("target_h must be positive, got {target_h}")));
    }
    match spec {
        DomainSpec::Rectangle { a, b } => rectangle_mesh(*a, *b, target_h),
        DomainSpec::Disk { r } => disk_like_mesh(*r, *r, target_h),
        DomainSpec::Ellipse { a, b } => disk_like_mesh(*a, *b, target_h),
        DomainSpec::Polygon { vertices } => polygon_mesh(vertices, target_h),
        DomainSpec::Dumbbell {
            lobe_radius,
            neck_half_width,
            neck_length,
        } => dumbbell_mesh(*lobe_radius, *neck_half_width, *neck_length, target_h),
        DomainSpec::DisjointUnion { components } => {
            if spec.dim() != 2 {
                return Err(Error::Mesh("only 2D domains are meshed".into()));
            }
            let mut builder = Builder::default();
            for comp in components {
                let m = generate_mesh(&comp.spec, target_h)?;
                let off = builder.vertices.len();
                for v in &m.vertices {
                    let g = comp.placement.apply(v);
                    builder.vertices.push([g[0], g[1]]);
                }
                for &[i, j, k] in &m.triangles {
                    builder.triangles.push([i + off, j + off, k + off]);
                }
                for &[i, j] in &m.boundary_edges {
                    builder.boundary.push([i + off, j + off]);
                }
            }
            builder.into_mesh()
        }
        DomainSpec::Ball3 { .. } | DomainSpec::Box3 { .. } => {
            Err(Error::Mesh("3D domains are handled analytically, not meshed".into()))
        }
    }
}

#[derive(Default)]
struct Builder {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<[usize; 2]>,
}

impl Builder {
    fn push_vertex(&mut self, v: [f64; 2]) -> usize {
        self.vertices.push(v);
        self.vertices.len() - 1
    }

    fn into_mesh(self) -> Result<Mesh> {
        Mesh::new(self.vertices, self.triangles, self.boundary)
    }
}

fn rectangle_mesh(a: f64, b: f64, target_h: f64) -> Result<Mesh> {
    let nx = ((a * std::f64::consts::SQRT_2 / target_h).ceil() as usize).max(1);
    let ny = ((b * std::f64::consts::SQRT_2 / target_h).ceil() as usize).max(1);
    let mut bld = Builder::default();
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    for j in 0..=ny {
        for i in 0..=nx {
            // exact endpoints keep boundary vertices on the analytic boundary
            let x = -0.5 * a + a * (i as f64 / nx as f64);
            let y = -0.5 * b + b * (j as f64 / ny as f64);
            bld.push_vertex([x, y]);
        }
    }
    for j in 0..ny {
        for i in 0..nx {
            let v00 = idx(i, j);
            let v10 = idx(i + 1, j);
            let v01 = idx(i, j + 1);
            let v11 = idx(i + 1, j + 1);
            bld.triangles.push([v00, v10, v11]);
            bld.triangles.push([v00, v11, v01]);
        }
    }
    for i in 0..nx {
        bld.boundary.push([idx(i, 0), idx(i + 1, 0)]);
        bld.boundary.push([idx(i, ny), idx(i + 1, ny)]);
    }
    for j in 0..ny {
        bld.boundary.push([idx(0, j), idx(0, j + 1)]);
        bld.boundary.push([idx(nx, j), idx(nx, j + 1)]);
    }
    bld.into_mesh()
}

/// Concentric-ring mesh of the ellipse with semi-axes (a, b); ring i
/// carries 6i vertices, which keeps triangles near-equilateral at every
/// radius. Boundary vertices land exactly on the analytic boundary.
fn disk_like_mesh(a: f64, b: f64, target_h: f64) -> Result<Mesh> {
    let rmax = a.max(b);
    let mut rings = ((1.6 * rmax / target_h).ceil() as usize).max(2);
    for _ in 0..6 {
        let mesh = ring_patch(
            [0.0, 0.0],
            |_| 1.0,
            rings,
            &uniform_angles(6 * rings),
            |v| [a * v[0], b * v[1]],
            true,
        )?;
        if mesh.h <= target_h {
            return Ok(mesh);
        }
        rings = (rings as f64 * (mesh.h / target_h) * 1.05).ceil() as usize;
    }
    Err(Error::Mesh("ring mesh failed to reach target h".into()))
}

fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

/// Star-shaped ring patch around `center`: ring i at fraction i/m of the
/// angle-dependent radius, outermost ring at the given angles. `map`
/// post-transforms every vertex (used for the ellipse scaling).
fn ring_patch(
    center: [f64; 2],
    radius_at: impl Fn(f64) -> f64,
    m: usize,
    outer_angles: &[f64],
    map: impl Fn([f64; 2]) -> [f64; 2],
    emit_boundary: bool,
) -> Result<Mesh> {
    let mut bld = Builder::default();
    let mut ring_ids: Vec<Vec<usize>> = Vec::with_capacity(m + 1);
    let mut ring_angles: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let c_id = bld.push_vertex(map(center));
    ring_ids.push(vec![c_id]);
    ring_angles.push(vec![0.0]);
    for i in 1..=m {
        let angles: Vec<f64> = if i == m {
            outer_angles.to_vec()
        } else {
            uniform_angles(6 * i)
        };
        let frac = i as f64 / m as f64;
        let ids: Vec<usize> = angles
            .iter()
            .map(|&t| {
                let r = frac * radius_at(t);
                bld.push_vertex(map([center[0] + r * t.cos(), center[1] + r * t.sin()]))
            })
            .collect();
        ring_ids.push(ids);
        ring_angles.push(angles);
    }
    // center fan
    let first = &ring_ids[1];
    for j in 0..first.len() {
        bld.triangles
            .push([c_id, first[j], first[(j + 1) % first.len()]]);
    }
    // annuli
    for i in 1..m {
        stitch_annulus(
            &mut bld,
            &ring_ids[i],
            &ring_angles[i],
            &ring_ids[i + 1],
            &ring_angles[i + 1],
        );
    }
    if emit_boundary {
        let outer = &ring_ids[m];
        for j in 0..outer.len() {
            bld.boundary.push([outer[j], outer[(j + 1) % outer.len()]]);
        }
        bld.into_mesh()
    } else {
        // caller finishes boundary bookkeeping; bypass full validation here
        Ok(Mesh {
            h: 0.0,
            vertices: bld.vertices,
            triangles: bld.triangles,
            boundary_edges: bld.boundary,
        })
    }
}

/// Triangulate the annulus between two rings whose vertices ascend in angle
/// from ~0; advances whichever ring has the smaller next angle.
fn stitch_annulus(
    bld: &mut Builder,
    inner: &[usize],
    inner_ang: &[f64],
    outer: &[usize],
    outer_ang: &[f64],
) {
    let ni = inner.len();
    let no = outer.len();
    let ang = |list: &[f64], t: usize, n: usize| list[t % n] + 2.0 * PI * (t / n) as f64;
    let mut i = 0usize;
    let mut o = 0usize;
    while i < ni || o < no {
        let advance_outer = o < no
            && (i == ni || ang(outer_ang, o + 1, no) <= ang(inner_ang, i + 1, ni) + 1e-15);
        if advance_outer {
            bld.triangles
                .push([inner[i % ni], outer[o % no], outer[(o + 1) % no]]);
            o += 1;
        } else {
            bld.triangles
                .push([inner[i % ni], outer[o % no], inner[(i + 1) % ni]]);
            i += 1;
        }
    }
}

fn polygon_mesh(vertices: &[[f64; 2]], target_h: f64) -> Result<Mesh> {
    let mut verts: Vec<[f64; 2]> = vertices.to_vec();
    if shoelace_area(&verts) < 0.0 {
        verts.reverse();
    }
    let tris = ear_clip(&verts)?;
    let mut v = verts;
    let mut t = tris;
    let n = v.len();
    let mut boundary: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
    loop {
        let hmax = t
            .iter()
            .map(|&[i, j, k]| {
                let d = |a: [f64; 2], b: [f64; 2]| {
                    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
                };
                d(v[i], v[j]).max(d(v[j], v[k])).max(d(v[k], v[i]))
            })
            .fold(0.0, f64::max);
        if hmax <= target_h {
            break;
        }
        refine_uniform(&mut v, &mut t, &mut boundary);
        if v.len() > 4_000_000 {
            return Err(Error::Mesh("polygon refinement exceeded vertex budget".into()));
        }
    }
    Mesh::new(v, t, boundary)
}

fn ear_clip(verts: &[[f64; 2]]) -> Result<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..verts.len()).collect();
    let mut tris = Vec::new();
    let cross = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
        (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
    };
    let inside = |a: [f64; 2], b: [f64; 2], c: [f64; 2], p: [f64; 2]| {
        cross(a, b, p) >= -1e-14 && cross(b, c, p) >= -1e-14 && cross(c, a, p) >= -1e-14
    };
    let min_angle = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| -> f64 {
        let v = [a, b, c];
        let mut best = f64::INFINITY;
        for i in 0..3 {
            let p = v[i];
            let u = [v[(i + 1) % 3][0] - p[0], v[(i + 1) % 3][1] - p[1]];
            let w = [v[(i + 2) % 3][0] - p[0], v[(i + 2) % 3][1] - p[1]];
            let dot = u[0] * w[0] + u[1] * w[1];
            let nn = (u[0] * u[0] + u[1] * u[1]).sqrt() * (w[0] * w[0] + w[1] * w[1]).sqrt();
            best = best.min((dot / nn).clamp(-1.0, 1.0).acos());
        }
        best
    };
    while idx.len() > 3 {
        let n = idx.len();
        // among all valid ears, clip the best-shaped one
        let mut best: Option<(usize, f64)> = None;
        for c in 0..n {
            let (ip, iv, inx) = (idx[(c + n - 1) % n], idx[c], idx[(c + 1) % n]);
            let (a, b, cc) = (verts[ip], verts[iv], verts[inx]);
            if cross(a, b, cc) <= 1e-14 {
                continue; // reflex or degenerate corner
            }
            let any_inside = idx
                .iter()
                .filter(|&&q| q != ip && q != iv && q != inx)
                .any(|&q| inside(a, b, cc, verts[q]));
            if any_inside {
                continue;
            }
            let score = min_angle(a, b, cc);
            if best.map(|(_, s)| score > s).unwrap_or(true) {
                best = Some((c, score));
            }
        }
        let Some((c, _)) = best else {
            return Err(Error::Mesh("no ear found (polygon not simple?)".into()));
        };
        let n = idx.len();
        tris.push([idx[(c + n - 1) % n], idx[c], idx[(c + 1) % n]]);
        idx.remove(c);
    }
    tris.push([idx[0], idx[1], idx[2]]);
    Ok(tris)
}

/// Split every triangle into four via edge midpoints.
fn refine_uniform(
    v: &mut Vec<[f64; 2]>,
    t: &mut Vec<[usize; 3]>,
    boundary: &mut Vec<[usize; 2]>,
) {
    let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
    let mut midpoint = |a: usize, b: usize, v: &mut Vec<[f64; 2]>| -> usize {
        let key = (a.min(b), a.max(b));
        *mid.entry(key).or_insert_with(|| {
            v.push([
                0.5 * (v[a][0] + v[b][0]),
                0.5 * (v[a][1] + v[b][1]),
            ]);
            v.len() - 1
        })
    };
    let mut new_t = Vec::with_capacity(4 * t.len());
    for &[i, j, k] in t.iter() {
        let mij = midpoint(i, j, v);
        let mjk = midpoint(j, k, v);
        let mki = midpoint(k, i, v);
        new_t.push([i, mij, mki]);
        new_t.push([mij, j, mjk]);
        new_t.push([mki, mjk, k]);
        new_t.push([mij, mjk, mki]);
    }
    *t = new_t;
    let mut new_b = Vec::with_capacity(2 * boundary.len());
    for &[a, b] in boundary.iter() {
        let m = midpoint(a, b, v);
        new_b.push([a, m]);
        new_b.push([m, b]);
    }
    *boundary = new_b;
}

/// Dumbbell template. The neck strip spans |x| <= x0, |y| <= eps; its
/// vertical edges coincide with the lobe chords, and the chord vertex
/// heights are shared between the neck grid and both lobe rings, so the
/// three patches join conformingly.
fn dumbbell_mesh(r: f64, eps: f64, ell: f64, target_h: f64) -> Result<Mesh> {
    let geo = DumbbellGeometry::new(r, eps, ell);
    let mut rings = ((1.6 * r / target_h).ceil() as usize).max(4);
    for _ in 0..6 {
        let mesh = dumbbell_mesh_with_rings(&geo, rings, target_h)?;
        if mesh.h <= target_h {
            return Ok(mesh);
        }
        rings = (rings as f64 * (mesh.h / target_h) * 1.05).ceil() as usize;
    }
    Err(Error::Mesh("dumbbell mesh failed to reach target h".into()))
}

fn dumbbell_mesh_with_rings(geo: &DumbbellGeometry, rings: usize, target_h: f64) -> Result<Mesh> {
    let (r, eps, h0, c, x0, gamma) = (geo.r, geo.eps, geo.h0, geo.c, geo.x0, geo.gamma);
    let dtheta = 2.0 * PI / (6 * rings) as f64;
    let kw = (gamma / dtheta).floor() as usize;
    if 2.0 * eps < target_h || kw < 2 {
        return Err(Error::Mesh(format!(
            "neck half-width {eps} is too thin for target_h {target_h}; reduce target_h to at most {:.3e}",
            (2.0 * eps).min(gamma * r / 2.0)
        )));
    }

    // shared chord heights: interior ones from the uniform outer-ring angles,
    // end points forced to +-eps; drop an interior node that crowds the corner
    let mut ys: Vec<f64> = Vec::new();
    for k in -(kw as i64)..=(kw as i64) {
        let y = h0 * ((k as f64) * dtheta).tan();
        if eps - y.abs() > 0.35 * h0 * dtheta {
            ys.push(y);
        }
    }
    ys.push(-eps);
    ys.push(eps);
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut bld = Builder::default();

    // both lobes; window = angular interval where the boundary is the chord
    let right = build_lobe(&mut bld, c, h0, r, rings, &ys, true)?;
    let left = build_lobe(&mut bld, -c, h0, r, rings, &ys, false)?;

    // neck: tensor strip between the two chords
    let cols = ((2.0 * x0 * std::f64::consts::SQRT_2 / target_h).ceil() as usize).max(1);
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(cols + 1);
    columns.push(left.clone());
    for kcol in 1..cols {
        let x = x0 * (2.0 * kcol as f64 / cols as f64 - 1.0);
        let ids = ys.iter().map(|&y| bld.push_vertex([x, y])).collect();
        columns.push(ids);
    }
    columns.push(right.clone());
    for k in 0..cols {
        for j in 0..ys.len() - 1 {
            let v00 = columns[k][j];
            let v10 = columns[k + 1][j];
            let v01 = columns[k][j + 1];
            let v11 = columns[k + 1][j + 1];
            bld.triangles.push([v00, v10, v11]);
            bld.triangles.push([v00, v11, v01]);
        }
    }
    let top = ys.len() - 1;
    for k in 0..cols {
        bld.boundary.push([columns[k][0], columns[k + 1][0]]);
        bld.boundary.push([columns[k][top], columns[k + 1][top]]);
    }
    bld.into_mesh()
}

/// One lobe as a ring patch around (cx, 0). For the right lobe the chord
/// window is centered on angle pi, for the left on angle 0. Returns the
/// chord vertex ids ordered like `ys`.
fn build_lobe(
    bld: &mut Builder,
    cx: f64,
    h0: f64,
    r: f64,
    rings: usize,
    ys: &[f64],
    window_at_pi: bool,
) -> Result<Vec<usize>> {
    // window angles derived from the shared chord heights
    let mut window: Vec<(f64, f64)> = ys
        .iter()
        .map(|&y| {
            let t = (y / h0).atan();
            let ang = if window_at_pi {
                // x_local = -h0: theta = pi - atan(y/h0), wrapped to [0, 2pi)
                let a = PI - t;
                if a < 0.0 {
                    a + 2.0 * PI
                } else {
                    a
                }
            } else if t < 0.0 {
                t + 2.0 * PI
            } else {
                t
            };
            (ang, y)
        })
        .collect();
    window.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    // wrapped windows (left lobe) split into a head near 0 and tail near 2pi
    let win_min = window.first().unwrap().0;
    let win_max = window.last().unwrap().0;
    let wrapped = !window_at_pi;
    let in_window = |a: f64| {
        if wrapped {
            let gamma = (ys.last().unwrap() / h0).atan();
            a <= gamma + 1e-12 || a >= 2.0 * PI - gamma - 1e-12
        } else {
            (win_min - 1e-12..=win_max + 1e-12).contains(&a)
        }
    };

    let n_outer = 6 * rings;
    let dtheta = 2.0 * PI / n_outer as f64;
    let mut outer: Vec<(f64, Option<f64>)> = Vec::new(); // (angle, chord y if on chord)
    for k in 0..n_outer {
        let a = k as f64 * dtheta;
        let clear = window
            .iter()
            .map(|&(w, _)| {
                let d = (a - w).abs();
                d.min(2.0 * PI - d)
            })
            .fold(f64::INFINITY, f64::min);
        if !in_window(a) && clear > 0.45 * dtheta {
            outer.push((a, None));
        }
    }
    for &(a, y) in &window {
        outer.push((a, Some(y)));
    }
    outer.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let radius_at = |a: f64| -> f64 {
        if in_window(a) {
            let ca = a.cos();
            (h0 / ca.abs()).min(r)
        } else {
            r
        }
    };

    let outer_angles: Vec<f64> = outer.iter().map(|&(a, _)| a).collect();
    let patch = ring_patch([cx, 0.0], radius_at, rings, &outer_angles, |v| v, false)?;

    // merge patch into the shared builder
    let off = bld.vertices.len();
    bld.vertices.extend_from_slice(&patch.vertices);
    for &[i, j, k] in &patch.triangles {
        bld.triangles.push([i + off, j + off, k + off]);
    }

    // outer-ring ids are the last `outer.len()` vertices of the patch
    let n_outer_final = outer.len();
    let first_outer = off + patch.vertices.len() - n_outer_final;
    let outer_ids: Vec<usize> = (first_outer..off + patch.vertices.len()).collect();

    // pin chord vertices to exact chord coordinates and collect them
    let x_chord = if window_at_pi { cx - h0 } else { cx + h0 };
    let mut chord: Vec<(f64, usize)> = Vec::new();
    for (slot, &(_, chord_y)) in outer.iter().enumerate() {
        if let Some(y) = chord_y {
            bld.vertices[outer_ids[slot]] = [x_chord, y];
            chord.push((y, outer_ids[slot]));
        }
    }
    chord.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if chord.len() != ys.len() {
        return Err(Error::Mesh("chord vertex count mismatch".into()));
    }

    // arc edges (skip chord segments, the neck closes them)
    for slot in 0..n_outer_final {
        let next = (slot + 1) % n_outer_final;
        let both_chord = outer[slot].1.is_some() && outer[next].1.is_some();
        if !both_chord {
            bld.boundary.push([outer_ids[slot], outer_ids[next]]);
        }
    }
    Ok(chord.into_iter().map(|(_, id)| id).collect())
}

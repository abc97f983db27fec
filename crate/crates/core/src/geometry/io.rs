//! Line-oriented ASCII mesh format.
//!
//! ```text
//! mesh2d <nv> <nt> <nb>
//! x y            (nv lines, decimal, full precision)
//! i j k          (nt lines, 0-based)
//! i j            (nb lines)
//! ```
//! Lines starting with `#` are comments.

use crate::error::{Error, Result};
use crate::geometry::mesh::Mesh;
use std::fmt::Write as _;
use std::path::Path;

pub fn mesh_to_string(mesh: &Mesh) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "mesh2d {} {} {}",
        mesh.vertices.len(),
        mesh.triangles.len(),
        mesh.boundary_edges.len()
    )
    .unwrap();
    for v in &mesh.vertices {
        // shortest round-trip representation; parses back bit-identically
        writeln!(out, "{} {}", v[0], v[1]).unwrap();
    }
    for t in &mesh.triangles {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    for e in &mesh.boundary_edges {
        writeln!(out, "{} {}", e[0], e[1]).unwrap();
    }
    out
}

pub fn export_mesh(mesh: &Mesh, path: &Path) -> Result<()> {
    std::fs::write(path, mesh_to_string(mesh))?;
    Ok(())
}

pub fn mesh_from_string(text: &str) -> Result<Mesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 0, msg: "empty file".into() })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "mesh2d" {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("expected `mesh2d <nv> <nt> <nb>`, got `{header}`"),
        });
    }
    let parse_count = |s: &str, line: usize| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad count `{s}`"),
        })
    };
    let nv = parse_count(fields[1], header_line)?;
    let nt = parse_count(fields[2], header_line)?;
    let nb = parse_count(fields[3], header_line)?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| Error::Parse {
            line: header_line,
            msg: "unexpected end of file in vertex block".into(),
        })?;
        let mut it = l.split_whitespace();
        let x: f64 = parse_f64(it.next(), ln)?;
        let y: f64 = parse_f64(it.next(), ln)?;
        if it.next().is_some() {
            return Err(Error::Parse { line: ln, msg: "trailing fields on vertex line".into() });
        }
        vertices.push([x, y]);
    }
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (ln, l) = lines.next().ok_or_else(|| Error::Parse {
            line: header_line,
            msg: "unexpected end of file in triangle block".into(),
        })?;
        let idx = parse_indices::<3>(l, ln, nv)?;
        triangles.push(idx);
    }
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (ln, l) = lines.next().ok_or_else(|| Error::Parse {
            line: header_line,
            msg: "unexpected end of file in boundary block".into(),
        })?;
        let idx = parse_indices::<2>(l, ln, nv)?;
        boundary.push(idx);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse { line: ln, msg: "trailing content after mesh".into() });
    }
    // full structural validation (positive areas, closed boundary, ...)
    Mesh::new(vertices, triangles, boundary).map_err(|e| Error::Parse {
        line: header_line,
        msg: e.to_string(),
    })
}

pub fn import_mesh(path: &Path) -> Result<Mesh> {
    let text = std::fs::read_to_string(path)?;
    mesh_from_string(&text)
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: "missing field".into() })?;
    let v: f64 = tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad float `{tok}`"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, msg: format!("non-finite value `{tok}`") });
    }
    Ok(v)
}

fn parse_indices<const K: usize>(l: &str, line: usize, nv: usize) -> Result<[usize; K]> {
    let mut out = [0usize; K];
    let mut it = l.split_whitespace();
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| Error::Parse { line, msg: "missing index".into() })?;
        let v: usize = tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("bad index `{tok}`"),
        })?;
        if v >= nv {
            return Err(Error::Parse {
                line,
                msg: format!("vertex index {v} out of range (nv = {nv})"),
            });
        }
        *slot = v;
    }
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "trailing fields".into() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::DomainSpec;
    use crate::geometry::meshgen::generate_mesh;

    #[test]
    fn round_trip_is_bitwise() {
        let mesh = generate_mesh(&DomainSpec::Disk { r: 1.0 }, 0.3).unwrap();
        let text = mesh_to_string(&mesh);
        let back = mesh_from_string(&text).unwrap();
        assert_eq!(mesh.vertices, back.vertices);
        assert_eq!(mesh.triangles, back.triangles);
        assert_eq!(mesh.boundary_edges, back.boundary_edges);
    }

    #[test]
    fn negative_area_triangle_rejected() {
        let text = "mesh2d 3 1 3\n0 0\n1 0\n1 1\n0 2 1\n0 1\n1 2\n2 0\n";
        let err = mesh_from_string(text).unwrap_err();
        assert!(err.to_string().contains("nonpositive area"));
    }

    #[test]
    fn dangling_index_rejected() {
        let text = "mesh2d 3 1 3\n0 0\n1 0\n1 1\n0 1 7\n0 1\n1 2\n2 0\n";
        let err = mesh_from_string(text).unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
        assert!(err.to_string().contains("line 5"), "{err}");
    }

    #[test]
    fn comments_are_skipped() {
        let text = "# a comment\nmesh2d 3 1 3\n0 0\n# interleaved\n1 0\n0 1\n0 1 2\n0 1\n1 2\n2 0\n";
        let m = mesh_from_string(text).unwrap();
        assert_eq!(m.num_vertices(), 3);
    }
}

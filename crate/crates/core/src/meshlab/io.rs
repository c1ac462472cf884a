//! OBJ (ASCII) and PLY (binary little-endian) mesh files.
//!
//! OBJ faces use 1-based indices; `f a/b/c` forms keep the vertex index and
//! polygons are fan-triangulated. Negative (relative) indices are rejected.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Mesh, VertexTag};
use crate::error::{Error, Result};
use crate::Point;

/// Coordinates are written with shortest round-trip formatting.
pub fn write_obj(mesh: &Mesh, w: &mut impl Write) -> std::io::Result<()> {
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}

pub fn export_obj(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_obj(mesh, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn read_obj(r: impl BufRead, path: &Path) -> Result<Mesh> {
    let mut vertices = Vec::new();
    let mut faces: Vec<(usize, Vec<i64>)> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(|s| s.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::parse(path, lineno, format!("bad vertex coordinate: {e}")))?;
                if c.len() != 3 || c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::parse(path, lineno, "vertex needs three finite coordinates"));
                }
                vertices.push(Point::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<i64> = it
                    .map(|s| {
                        let head = s.split('/').next().unwrap_or("");
                        head.parse::<i64>()
                            .map_err(|e| Error::parse(path, lineno, format!("bad face index {s:?}: {e}")))
                    })
                    .collect::<Result<_>>()?;
                if idx.len() < 3 {
                    return Err(Error::parse(path, lineno, "face needs at least three vertices"));
                }
                faces.push((lineno, idx));
            }
            _ => {}
        }
    }
    let n = vertices.len() as i64;
    let mut triangles = Vec::new();
    for (lineno, idx) in faces {
        let mut v = Vec::with_capacity(idx.len());
        for i in idx {
            if i < 0 {
                return Err(Error::parse(path, lineno, "negative face indices are not supported"));
            }
            if i == 0 || i > n {
                return Err(Error::parse(path, lineno, format!("face index {i} out of range 1..={n}")));
            }
            v.push((i - 1) as u32);
        }
        for k in 1..v.len() - 1 {
            triangles.push([v[0], v[k], v[k + 1]]);
        }
    }
    let provenance = vec![VertexTag::External; vertices.len()];
    Ok(Mesh {
        vertices,
        triangles,
        provenance,
    })
}

pub fn import_obj(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    read_obj(BufReader::new(File::open(path)?), path)
}

pub fn write_ply(mesh: &Mesh, w: &mut impl Write) -> std::io::Result<()> {
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\nelement vertex {}\nproperty float x\nproperty float y\nproperty float z\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.vertices.len(),
        mesh.triangles.len()
    )?;
    for v in &mesh.vertices {
        for c in [v.x, v.y, v.z] {
            w.write_all(&(c as f32).to_le_bytes())?;
        }
    }
    for t in &mesh.triangles {
        w.write_all(&[3u8])?;
        for &i in t {
            w.write_all(&(i as i32).to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn export_ply(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_ply(mesh, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Reads the layout written by [`write_ply`] (vertex coordinates may also be `double`).
pub fn import_ply(path: impl AsRef<Path>) -> Result<Mesh> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let mut pos = 0usize;
    let mut line_no = 0usize;
    let mut next_line = |pos: &mut usize| -> Result<String> {
        line_no += 1;
        let rest = &bytes[*pos..];
        let end = rest
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::parse(path, line_no, "unterminated header"))?;
        *pos += end + 1;
        Ok(String::from_utf8_lossy(&rest[..end]).trim().to_string())
    };
    if next_line(&mut pos)? != "ply" {
        return Err(Error::parse(path, 1, "missing ply magic"));
    }
    let mut n_vertices = None;
    let mut n_faces = None;
    let mut vertex_double = None;
    let mut header_lines = 1;
    loop {
        let line = next_line(&mut pos)?;
        header_lines += 1;
        let t: Vec<&str> = line.split_whitespace().collect();
        match t.as_slice() {
            ["end_header"] => break,
            ["format", fmt, _] if *fmt != "binary_little_endian" => {
                return Err(Error::parse(path, header_lines, format!("unsupported format {fmt}")));
            }
            ["element", "vertex", n] => {
                n_vertices = Some(n.parse::<usize>().map_err(|e| Error::parse(path, header_lines, e.to_string()))?)
            }
            ["element", "face", n] => {
                n_faces = Some(n.parse::<usize>().map_err(|e| Error::parse(path, header_lines, e.to_string()))?)
            }
            ["element", other, _] => {
                return Err(Error::parse(path, header_lines, format!("unsupported element {other}")));
            }
            ["property", ty @ ("float" | "double"), _] if n_faces.is_none() => {
                let d = *ty == "double";
                if vertex_double.is_some_and(|v| v != d) {
                    return Err(Error::parse(path, header_lines, "mixed vertex property types"));
                }
                vertex_double = Some(d);
            }
            ["property", "list", "uchar", "int" | "uint", _] => {}
            ["property", ..] => return Err(Error::parse(path, header_lines, format!("unsupported property: {line}"))),
            _ => {}
        }
    }
    let body_line = header_lines + 1;
    let nv = n_vertices.ok_or_else(|| Error::parse(path, header_lines, "no vertex element"))?;
    let nf = n_faces.unwrap_or(0);
    let width = if vertex_double.unwrap_or(false) { 8 } else { 4 };
    let body = &bytes[pos..];
    let mut off = 0usize;
    let mut take = |n: usize| -> Result<&[u8]> {
        let s = body
            .get(off..off + n)
            .ok_or_else(|| Error::parse(path, body_line, "body shorter than the header's element counts"))?;
        off += n;
        Ok(s)
    };
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut c = [0.0; 3];
        for x in &mut c {
            let b = take(width)?;
            *x = if width == 8 {
                f64::from_le_bytes(b.try_into().unwrap())
            } else {
                f32::from_le_bytes(b.try_into().unwrap()) as f64
            };
        }
        vertices.push(Point::new(c[0], c[1], c[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    for f in 0..nf {
        let k = take(1)?[0] as usize;
        let mut idx = Vec::with_capacity(k);
        for _ in 0..k {
            let i = i32::from_le_bytes(take(4)?.try_into().unwrap());
            if i < 0 || i as usize >= nv {
                return Err(Error::parse(path, body_line, format!("face {f} index {i} out of range")));
            }
            idx.push(i as u32);
        }
        if k < 3 {
            return Err(Error::parse(path, body_line, format!("face {f} has {k} vertices")));
        }
        for j in 1..k - 1 {
            triangles.push([idx[0], idx[j], idx[j + 1]]);
        }
    }
    if off != body.len() {
        return Err(Error::parse(path, body_line, "body longer than the header's element counts"));
    }
    let provenance = vec![VertexTag::External; vertices.len()];
    Ok(Mesh {
        vertices,
        triangles,
        provenance,
    })
}

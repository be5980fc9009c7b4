//! OFF and OBJ polyhedral meshes.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::bodies::{ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::polytope::{ConvexPolytope, DEFAULT_TOLERANCE};
use crate::scalar::Real;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshDocument<T> {
    pub vertices: Vec<Vec3<T>>,
    pub faces: Vec<Vec<usize>>,
    pub format: MeshFormat,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number<N: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<N> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn coordinate<T: Real>(tok: Option<&str>, line: usize) -> Result<T> {
    let v: f64 = number(tok, line, "coordinate")?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("coordinate {v} is not finite")));
    }
    Ok(T::lit(v))
}

/// Content lines with 1-based line numbers, comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

impl<T: Real> MeshDocument<T> {
    pub fn parse(text: &str, format: MeshFormat) -> Result<Self> {
        match format {
            MeshFormat::Off => Self::parse_off(text),
            MeshFormat::Obj => Self::parse_obj(text),
        }
    }

    pub fn parse_off(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let rest = header
            .strip_prefix("OFF")
            .ok_or_else(|| parse_err(hline, "expected OFF header"))?
            .trim();
        let (cline, counts) = if rest.is_empty() {
            lines
                .next()
                .ok_or_else(|| parse_err(hline + 1, "missing counts line"))?
        } else {
            (hline, rest)
        };
        let mut toks = counts.split_whitespace();
        let nv: usize = number(toks.next(), cline, "vertex count")?;
        let nf: usize = number(toks.next(), cline, "face count")?;

        let mut vertices = Vec::with_capacity(nv);
        for k in 0..nv {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| parse_err(cline + k + 1, format!("expected {nv} vertices, found {k}")))?;
            let mut t = l.split_whitespace();
            vertices.push(Vec3::new(
                coordinate(t.next(), ln)?,
                coordinate(t.next(), ln)?,
                coordinate(t.next(), ln)?,
            ));
        }
        let mut faces = Vec::with_capacity(nf);
        let mut face_lines = Vec::with_capacity(nf);
        for k in 0..nf {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| parse_err(cline + nv + k + 1, format!("expected {nf} faces, found {k}")))?;
            let mut t = l.split_whitespace();
            let count: usize = number(t.next(), ln, "face size")?;
            let face = (0..count)
                .map(|_| number(t.next(), ln, "vertex index"))
                .collect::<Result<Vec<usize>>>()?;
            faces.push(face);
            face_lines.push(ln);
        }
        let doc = Self {
            vertices,
            faces,
            format: MeshFormat::Off,
        };
        doc.validate(&face_lines)?;
        Ok(doc)
    }

    /// `v` and `f` records only; indices are 1-based and `f` entries may
    /// carry `/texture/normal` suffixes, which are ignored.
    pub fn parse_obj(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut faces = Vec::new();
        let mut face_lines = Vec::new();
        for (ln, l) in content_lines(text) {
            let mut t = l.split_whitespace();
            match t.next() {
                Some("v") => vertices.push(Vec3::new(
                    coordinate(t.next(), ln)?,
                    coordinate(t.next(), ln)?,
                    coordinate(t.next(), ln)?,
                )),
                Some("f") => {
                    let face = t
                        .map(|tok| {
                            let idx = tok.split('/').next().unwrap_or("");
                            let i: i64 = number(Some(idx), ln, "vertex index")?;
                            if i < 1 {
                                return Err(parse_err(ln, format!("vertex index {i} must be >= 1")));
                            }
                            Ok(i as usize - 1)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    faces.push(face);
                    face_lines.push(ln);
                }
                _ => {}
            }
        }
        let doc = Self {
            vertices,
            faces,
            format: MeshFormat::Obj,
        };
        doc.validate(&face_lines)?;
        Ok(doc)
    }

    fn validate(&self, face_lines: &[usize]) -> Result<()> {
        let nv = self.vertices.len();
        for (fi, f) in self.faces.iter().enumerate() {
            let ln = face_lines.get(fi).copied().unwrap_or(0);
            if f.len() < 3 {
                return Err(parse_err(
                    ln,
                    format!("face {fi} has {} vertices, need at least 3", f.len()),
                ));
            }
            for (k, &i) in f.iter().enumerate() {
                if i >= nv {
                    return Err(Error::IndexOutOfRange {
                        face: fi,
                        index: i,
                        vertex_count: nv,
                    });
                }
                if f[..k].contains(&i) {
                    return Err(parse_err(ln, format!("face {fi} repeats vertex {i}")));
                }
            }
        }
        Ok(())
    }

    /// OFF text with coordinates in shortest round-trip form.
    pub fn to_off(&self) -> String {
        let mut out = format!("OFF\n{} {} 0\n", self.vertices.len(), self.faces.len());
        for v in &self.vertices {
            let _ = writeln!(out, "{} {} {}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = write!(out, "{}", f.len());
            for i in f {
                let _ = write!(out, " {i}");
            }
            out.push('\n');
        }
        out
    }
}

/// Loads an OFF or OBJ file; the format comes from the extension, falling
/// back to sniffing an `OFF` header.
pub fn load_mesh<T: Real>(path: impl AsRef<Path>) -> Result<MeshDocument<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let format = match ext.as_deref() {
        Some("off") => MeshFormat::Off,
        Some("obj") => MeshFormat::Obj,
        _ if text.trim_start().starts_with("OFF") => MeshFormat::Off,
        _ => MeshFormat::Obj,
    };
    MeshDocument::parse(&text, format)
}

pub fn write_off<T: Real>(mesh: &MeshDocument<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, mesh.to_off())?;
    Ok(())
}

pub fn to_polytope<T: Real>(mesh: &MeshDocument<T>) -> Result<ConvexPolytope<T>> {
    ConvexPolytope::from_faces(mesh.vertices.clone(), mesh.faces.clone(), T::lit(DEFAULT_TOLERANCE))
}

/// The polytope as a support-function body, with its vertex centroid as the
/// reference center.
pub fn polytope_body<T: Real>(poly: ConvexPolytope<T>) -> Result<ConvexBody<T>> {
    let mut c = Vec3::zero();
    for &v in poly.vertices() {
        c += v;
    }
    let c = c / T::count(poly.vertices().len());
    ConvexBody::new(Shape::Polytope(Arc::new(poly)), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::UnitDirection;

    const CUBE_OFF: &str = "OFF
# side 2
8 6 12
-1 -1 -1
1 -1 -1
-1 1 -1
1 1 -1
-1 -1 1
1 -1 1
-1 1 1
1 1 1
4 0 2 3 1
4 4 5 7 6
4 0 1 5 4
4 2 6 7 3
4 0 4 6 2
4 1 3 7 5
";

    const TETRA_OBJ: &str = "# tetrahedron
o tet
v 1 1 1
v 1 -1 -1
v -1 1 -1
v -1 -1 1
vn 0 0 1
f 1 2 3
f 1/1 2/2 4/4
f 1//1 3//1 4//1
f 2 3 4
";

    #[test]
    fn off_cube() {
        let m = MeshDocument::<f64>::parse_off(CUBE_OFF).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (8, 6));
        let p = to_polytope(&m).unwrap();
        assert_eq!(p.edges().len(), 12);
        let b = polytope_body(p).unwrap();
        let w = UnitDirection::from_components(1.0, 1.0, 1.0).unwrap();
        assert!((b.support(Vec3::zero(), w).unwrap() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn obj_tetrahedron() {
        let m = MeshDocument::<f64>::parse_obj(TETRA_OBJ).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len()), (4, 4));
        assert!(m.faces.iter().all(|f| f.len() == 3));
        assert_eq!(m.faces[1], vec![0, 1, 3]);
    }

    #[test]
    fn index_out_of_range() {
        let bad = CUBE_OFF.replace("4 1 3 7 5", "4 1 3 9 5");
        let err = MeshDocument::<f64>::parse_off(&bad).unwrap_err();
        assert_eq!(
            err,
            Error::IndexOutOfRange {
                face: 5,
                index: 9,
                vertex_count: 8
            }
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = CUBE_OFF.replace("\n1 1 -1\n", "\n1 x -1\n");
        assert!(matches!(
            MeshDocument::<f64>::parse_off(&bad),
            Err(Error::Parse { line: 7, .. })
        ));
        assert!(matches!(
            MeshDocument::<f64>::parse_obj("v 0 0 0\nf -1 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            MeshDocument::<f64>::parse_off("PLY\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn pushed_in_vertex_is_non_convex() {
        let bad = CUBE_OFF.replace("1 1 1\n4", "0.5 0.5 0.5\n4");
        let m = MeshDocument::<f64>::parse_off(&bad).unwrap();
        assert!(matches!(to_polytope(&m), Err(Error::NonConvexMesh { .. })));
    }

    #[test]
    fn off_round_trip_is_exact() {
        let mut m = MeshDocument::<f64>::parse_off(CUBE_OFF).unwrap();
        m.vertices[3] = Vec3::new(0.1 + 0.2, 1.0 / 3.0, -2.0f64.sqrt());
        let back = MeshDocument::<f64>::parse_off(&m.to_off()).unwrap();
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.faces, m.faces);
    }
}

//! Shape specs: inline `kind:params` strings and JSON documents.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use tmc::mesh::{load_mesh, to_polytope};
use tmc::{Error, Point, Polytope, Shape};

/// A shape together with its default reference center.
#[derive(Clone, Debug)]
pub struct ParsedShape {
    pub shape: Shape<f64>,
    pub center: Point,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidShape(msg.into())
}

fn numbers(params: &str) -> Result<Vec<f64>, Error> {
    params
        .split(',')
        .map(|p| {
            let v = p.split_once('=').map_or(p, |(_, v)| v).trim();
            v.parse::<f64>().map_err(|_| bad(format!("'{p}' is not a number")))
        })
        .collect()
}

fn vec3(params: &str) -> Result<Point, Error> {
    match numbers(params)?[..] {
        [x, y, z] => Ok(Point::new(x, y, z)),
        _ => Err(bad(format!("expected three numbers, got '{params}'"))),
    }
}

/// Parses `kind:params`.
///
/// Kinds: `sphere:r`, `ellipsoid:a,b,c`, `box:a,b,c` (half-extents),
/// `cube:m` (half-side), `superellipsoid:n[,m]`, `tetrahedron:edge`,
/// `polytope:path` (OFF/OBJ mesh), `sum:A+B`. A trailing `@x,y,z` translates
/// the shape and moves the default center with it. Parameters may be written
/// `key=value`, e.g. `sphere:r=1` or `superellipsoid:n=300`.
pub fn parse_inline(spec: &str) -> Result<ParsedShape, Error> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("sum:") {
        let (a, b) = split_sum(rest).ok_or_else(|| bad(format!("sum needs two shapes joined by '+': '{rest}'")))?;
        let (a, b) = (parse_inline(a)?, parse_inline(b)?);
        return Ok(ParsedShape {
            shape: Shape::minkowski_sum(a.shape, b.shape),
            center: a.center + b.center,
        });
    }
    if let Some((base, offset)) = spec.rsplit_once('@') {
        let t = vec3(offset)?;
        let inner = parse_inline(base)?;
        return Ok(ParsedShape {
            shape: inner.shape.translate(t),
            center: inner.center + t,
        });
    }
    let (kind, params) = spec.split_once(':').unwrap_or((spec, ""));
    let shape = match kind {
        "polytope" | "mesh" => {
            let poly = to_polytope(&load_mesh::<f64>(params)?)?;
            return Ok(polytope_shape(poly));
        }
        _ => {
            let p = if params.is_empty() {
                Vec::new()
            } else {
                numbers(params)?
            };
            match (kind, &p[..]) {
                ("sphere", [r]) => Shape::sphere(*r),
                ("ellipsoid", [a, b, c]) => Shape::ellipsoid(*a, *b, *c),
                ("box", [a, b, c]) => Shape::cuboid(*a, *b, *c),
                ("box" | "cube", [m]) => Shape::cube(*m),
                ("superellipsoid", [n]) => Shape::superellipsoid(exponent(*n)?, 1.0),
                ("superellipsoid", [n, m]) => Shape::superellipsoid(exponent(*n)?, *m),
                ("tetrahedron", [e]) => Shape::Polytope(Arc::new(Polytope::regular_tetrahedron(*e))),
                ("sphere" | "ellipsoid" | "box" | "cube" | "superellipsoid" | "tetrahedron", _) => {
                    return Err(bad(format!("wrong number of parameters in '{spec}'")))
                }
                _ => return Err(bad(format!("unknown shape kind '{kind}'"))),
            }
        }
    };
    shape.validate()?;
    Ok(ParsedShape {
        shape,
        center: Point::zero(),
    })
}

fn exponent(n: f64) -> Result<u32, Error> {
    if n.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&n) {
        return Err(bad(format!("superellipsoid exponent {n} must be a positive integer")));
    }
    Ok(n as u32)
}

/// Splits at the `+` that separates two specs, skipping signs inside numbers.
fn split_sum(s: &str) -> Option<(&str, &str)> {
    s.char_indices()
        .filter(|&(i, c)| c == '+' && i > 0 && !s[..i].ends_with(['e', 'E', ',', '=', ':', '@']))
        .map(|(i, _)| (&s[..i], &s[i + 1..]))
        .next()
}

/// A polytope shape with its vertex centroid as the default center.
pub fn polytope_shape(poly: Polytope) -> ParsedShape {
    let n = poly.vertices().len() as f64;
    let c = poly.vertices().iter().fold(Point::zero(), |a, &v| a + v) / n;
    ParsedShape {
        shape: Shape::Polytope(Arc::new(poly)),
        center: c,
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
enum ShapeDoc {
    Sphere {
        radius: f64,
    },
    Ellipsoid {
        semi_axes: [f64; 3],
    },
    Box {
        half_extents: [f64; 3],
    },
    Superellipsoid {
        exponent: u32,
        #[serde(default = "one")]
        half_side: f64,
    },
    Polytope {
        #[serde(default)]
        vertices: Vec<[f64; 3]>,
        faces: Option<Vec<Vec<usize>>>,
        mesh: Option<PathBuf>,
    },
    MinkowskiSum {
        a: Box<ShapeDoc>,
        b: Box<ShapeDoc>,
    },
    Translate {
        body: Box<ShapeDoc>,
        offset: [f64; 3],
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
struct SpecDoc {
    #[serde(flatten)]
    shape: ShapeDoc,
    center: Option<[f64; 3]>,
}

impl ShapeDoc {
    fn build(self, base: &Path) -> Result<Shape<f64>, Error> {
        Ok(match self {
            ShapeDoc::Sphere { radius } => Shape::sphere(radius),
            ShapeDoc::Ellipsoid { semi_axes: [a, b, c] } => Shape::ellipsoid(a, b, c),
            ShapeDoc::Box {
                half_extents: [a, b, c],
            } => Shape::cuboid(a, b, c),
            ShapeDoc::Superellipsoid { exponent, half_side } => Shape::superellipsoid(exponent, half_side),
            ShapeDoc::Polytope { vertices, faces, mesh } => {
                if let Some(path) = mesh {
                    let poly = to_polytope(&load_mesh::<f64>(base.join(path))?)?;
                    return Ok(Shape::Polytope(Arc::new(poly)));
                }
                let verts: Vec<Point> = vertices.into_iter().map(Point::from_array).collect();
                match faces {
                    Some(f) => Shape::Polytope(Arc::new(Polytope::from_faces(
                        verts,
                        f,
                        tmc::polytope::DEFAULT_TOLERANCE,
                    )?)),
                    None => Shape::VertexHull(verts.into()),
                }
            }
            ShapeDoc::MinkowskiSum { a, b } => Shape::minkowski_sum(a.build(base)?, b.build(base)?),
            ShapeDoc::Translate { body, offset } => body.build(base)?.translate(Point::from_array(offset)),
        })
    }
}

/// Parses a JSON shape document; mesh paths resolve relative to `base`.
pub fn parse_document(text: &str, base: &Path) -> Result<ParsedShape, Error> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let shape = doc.shape.build(base)?;
    shape.validate()?;
    let center = match doc.center {
        Some(c) => Point::from_array(c),
        None => match shape.polytope() {
            Some(_) => polytope_shape_center(&shape),
            None => translation_of(&shape),
        },
    };
    Ok(ParsedShape { shape, center })
}

fn translation_of(shape: &Shape<f64>) -> Point {
    match shape {
        Shape::Translate(s, t) => translation_of(s) + *t,
        Shape::MinkowskiSum(a, b) => translation_of(a) + translation_of(b),
        Shape::VertexHull(v) => v.iter().fold(Point::zero(), |a, &p| a + p) / v.len() as f64,
        _ => Point::zero(),
    }
}

fn polytope_shape_center(shape: &Shape<f64>) -> Point {
    let (p, offset) = shape.polytope().expect("checked by caller");
    let n = p.vertices().len() as f64;
    p.vertices().iter().fold(Point::zero(), |a, &v| a + v) / n + offset
}

pub fn load_document(path: &Path) -> Result<ParsedShape, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_document(&text, path.parent().unwrap_or(Path::new(".")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tmc::Direction;

    fn support(p: &ParsedShape, w: [f64; 3]) -> f64 {
        let w = Direction::from_components(w[0], w[1], w[2]).unwrap();
        p.shape.support_origin(w.vec())
    }

    #[test]
    fn inline_kinds() {
        let s = parse_inline("sphere:r=2").unwrap();
        assert_eq!(support(&s, [0.0, 0.0, 1.0]), 2.0);
        let b = parse_inline("box:1,1,1").unwrap();
        assert!((support(&b, [1.0, 1.0, 1.0]) - 3f64.sqrt()).abs() < 1e-15);
        let se = parse_inline("superellipsoid:n=300").unwrap();
        assert!(matches!(se.shape, Shape::Superellipsoid { exponent: 300, .. }));
        let t = parse_inline("ellipsoid:2,1,1@0.5,-1,0.25").unwrap();
        assert_eq!(t.center, Point::new(0.5, -1.0, 0.25));
        let sum = parse_inline("sum:sphere:r=0.5+cube:0.5").unwrap();
        assert!((support(&sum, [1.0, 0.0, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inline_errors() {
        assert_eq!(parse_inline("superellipsoid:n=7").unwrap_err(), Error::OddExponent(7));
        assert!(matches!(parse_inline("torus:1,2"), Err(Error::InvalidShape(_))));
        assert!(matches!(parse_inline("ellipsoid:1,2"), Err(Error::InvalidShape(_))));
        assert!(matches!(parse_inline("sphere:-1"), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn every_catalog_name_parses_to_its_body() {
        for e in tmc::catalog::catalog::<f64>().unwrap() {
            let p = parse_inline(&e.name).unwrap();
            assert_eq!(p.center, e.body.center(), "{}", e.name);
            for w in [[1.0, 0.2, -0.3], [0.0, 0.0, 1.0], [-0.4, 0.9, 0.1]] {
                let a = support(&p, w);
                let d = Direction::from_components(w[0], w[1], w[2]).unwrap();
                let b = e.body.shape().support_origin(d.vec());
                assert!((a - b).abs() < 1e-15, "{}", e.name);
            }
        }
    }

    #[test]
    fn json_documents() {
        let p = parse_document(
            r#"{"shape": "ellipsoid", "semi_axes": [2, 1, 1], "center": [0.1, 0, 0]}"#,
            Path::new("."),
        )
        .unwrap();
        assert_eq!(p.center, Point::new(0.1, 0.0, 0.0));
        let nested = r#"{"shape": "translate", "offset": [1, 2, 3],
            "body": {"shape": "minkowski_sum", "a": {"shape": "sphere", "radius": 1}, "b": {"shape": "box", "half_extents": [1, 2, 3]}}}"#;
        let p = parse_document(nested, Path::new(".")).unwrap();
        assert_eq!(p.center, Point::new(1.0, 2.0, 3.0));
        let hull = r#"{"shape": "polytope", "vertices": [[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1]]}"#;
        assert!(matches!(
            parse_document(hull, Path::new(".")).unwrap().shape,
            Shape::VertexHull(_)
        ));
        let odd = r#"{"shape": "superellipsoid", "exponent": 5}"#;
        assert_eq!(parse_document(odd, Path::new(".")).unwrap_err(), Error::OddExponent(5));
        assert!(matches!(
            parse_document("{\"shape\": \"blob\"}", Path::new(".")),
            Err(Error::Parse { .. })
        ));
    }
}

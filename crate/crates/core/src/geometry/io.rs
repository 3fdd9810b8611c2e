//! JSON mesh files.
//!
//! ```text
//! {"vertices": [[x, y], ...],
//!  "curves":   [{"id": 0, "kind": "circle-arc", "center": [0, 0], "radius": 1,
//!                "angle0": 0, "angle1": 6.283...}, ...],
//!  "edges":    [{"v": [i, j], "curve": id | null, "t": [t0, t1] | null}, ...],
//!  "elements": [{"edges": [±(edge_id + 1), ...], "kappa": 1.0}, ...]}
//! ```
//!
//! A negative edge reference means the element traverses the edge from its
//! second vertex to its first. Reals are written with 17 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::mesh::{CurveBinding, Edge, EdgeUse, Element, Mesh};
use crate::{Error, Result, Vec2};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeshFile {
    vertices: Vec<[f64; 2]>,
    #[serde(default)]
    curves: Vec<Curve>,
    edges: Vec<EdgeRecord>,
    elements: Vec<ElementRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    v: [usize; 2],
    #[serde(default)]
    curve: Option<u32>,
    #[serde(default)]
    t: Option<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRecord {
    edges: Vec<i64>,
    kappa: f64,
}

/// serde_json formatter writing every float as `{:.16e}`.
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

fn parse_error(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Converts a serde path such as `edges[3].v` into the JSON pointer
/// `/edges/3/v`.
fn to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

pub fn mesh_from_json(text: &str) -> Result<Mesh> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: MeshFile =
        serde_path_to_error::deserialize(de).map_err(|e| parse_error(to_pointer(e.path()), e.inner().to_string()))?;

    let nv = file.vertices.len();
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, rec) in file.edges.iter().enumerate() {
        for (j, &v) in rec.v.iter().enumerate() {
            if v >= nv {
                return Err(parse_error(
                    format!("/edges/{i}/v/{j}"),
                    format!("vertex {v} does not exist"),
                ));
            }
        }
        let curve = match (rec.curve, rec.t) {
            (None, None) => None,
            (Some(id), Some(t)) => {
                if !file.curves.iter().any(|c| c.id == id) {
                    return Err(parse_error(
                        format!("/edges/{i}/curve"),
                        format!("curve {id} does not exist"),
                    ));
                }
                Some(CurveBinding { curve: id, t })
            }
            (Some(_), None) => {
                return Err(parse_error(
                    format!("/edges/{i}/t"),
                    "curve-bound edge needs a parameter interval",
                ))
            }
            (None, Some(_)) => {
                return Err(parse_error(
                    format!("/edges/{i}/curve"),
                    "parameter interval given without a curve",
                ))
            }
        };
        edges.push(Edge { v: rec.v, curve });
    }

    let ne = edges.len() as i64;
    let mut elements = Vec::with_capacity(file.elements.len());
    for (i, rec) in file.elements.iter().enumerate() {
        let mut uses = Vec::with_capacity(rec.edges.len());
        for (j, &signed) in rec.edges.iter().enumerate() {
            if signed == 0 || signed.abs() > ne {
                return Err(parse_error(
                    format!("/elements/{i}/edges/{j}"),
                    format!("edge reference {signed} out of range"),
                ));
            }
            uses.push(EdgeUse {
                edge: (signed.unsigned_abs() - 1) as usize,
                reversed: signed < 0,
            });
        }
        elements.push(Element {
            edges: uses,
            kappa: rec.kappa,
        });
    }

    let vertices = file.vertices.iter().map(|p| Vec2::new(p[0], p[1])).collect();
    Mesh::new(vertices, file.curves, edges, elements).map_err(|e| match e {
        Error::Structure(list) => parse_error("", list.join("; ")),
        other => other,
    })
}

pub fn mesh_to_json(mesh: &Mesh) -> String {
    let file = MeshFile {
        vertices: mesh.vertices().iter().map(|p| [p.x, p.y]).collect(),
        curves: mesh.curves().to_vec(),
        edges: mesh
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                v: e.v,
                curve: e.curve.as_ref().map(|b| b.curve),
                t: e.curve.as_ref().map(|b| b.t),
            })
            .collect(),
        elements: mesh
            .elements()
            .iter()
            .map(|el| ElementRecord {
                edges: el
                    .edges
                    .iter()
                    .map(|u| {
                        let id = u.edge as i64 + 1;
                        if u.reversed {
                            -id
                        } else {
                            id
                        }
                    })
                    .collect(),
                kappa: el.kappa,
            })
            .collect(),
    };
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SignificantDigits);
    file.serialize(&mut ser).expect("in-memory serialisation cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn mesh_read(path: impl AsRef<Path>) -> Result<Mesh> {
    mesh_from_json(&fs::read_to_string(path)?)
}

pub fn mesh_write(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, mesh_to_json(mesh))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generators::{polar_disk, sine_quads};

    #[test]
    fn polar_round_trip() {
        let m = polar_disk(2, 8, true);
        let back = mesh_from_json(&mesh_to_json(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn sine_round_trip_through_file() {
        let m = sine_quads(3);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sine.json");
        mesh_write(&m, &path).unwrap();
        assert_eq!(mesh_read(&path).unwrap(), m);
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let json = mesh_to_json(&polar_disk(1, 3, false));
        assert!(json.contains("1.0000000000000000e0"));
    }

    const TRIANGLE: &str = r#"{
        "vertices": [[0,0],[1,0],[0,1]],
        "curves": [],
        "edges": [{"v":[0,1],"curve":null,"t":null},{"v":[1,2]},{"v":[2,0],"curve":7,"t":[0,1]}],
        "elements": [{"edges":[1,2,3],"kappa":1}]
    }"#;

    #[test]
    fn missing_curve_is_reported_with_pointer() {
        let err = mesh_from_json(TRIANGLE).unwrap_err();
        match err {
            Error::Parse { pointer, message } => {
                assert_eq!(pointer, "/edges/2/curve");
                assert!(message.contains("curve 7"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn schema_violation_pointer() {
        let text = TRIANGLE.replace(r#"{"v":[1,2]}"#, r#"{"v":[1,"x"]}"#);
        match mesh_from_json(&text).unwrap_err() {
            Error::Parse { pointer, .. } => assert_eq!(pointer, "/edges/1/v/1"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn bad_edge_reference() {
        let text = TRIANGLE
            .replace(r#","curve":7,"t":[0,1]"#, "")
            .replace("[1,2,3]", "[1,2,-9]");
        match mesh_from_json(&text).unwrap_err() {
            Error::Parse { pointer, .. } => assert_eq!(pointer, "/elements/0/edges/2"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn structural_defect_is_a_parse_error() {
        let text = TRIANGLE
            .replace(r#","curve":7,"t":[0,1]"#, "")
            .replace("[1,2,3]", "[1,-2,3]");
        assert!(matches!(mesh_from_json(&text), Err(Error::Parse { .. })));
    }
}

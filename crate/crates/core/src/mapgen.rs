//! Map generators, checked-in fixtures and the `pmap v1` text format.
//!
//! A pmap file starts with the header line `pmap v1`. Every following line
//! that is neither blank nor a `#` comment lists one face as
//! whitespace-separated vertex labels in cyclic order.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::map::{build_labeled_map, build_map, BuildOptions, MapError, PolyhedralMap};

/// Grid with wraparound in both directions. Row `rows` is identified with
/// row 0 shifted right by `shift` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGridParams {
    pub rows: usize,
    pub cols: usize,
    pub shift: usize,
}

impl TorusGridParams {
    pub fn new(rows: usize, cols: usize, shift: usize) -> Self {
        TorusGridParams { rows, cols, shift }
    }

    fn check(&self) -> Result<(), GenError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(GenError::InvalidParams(format!(
                "rows and cols must be positive, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Vertex index of grid point `(r, c)` for `r <= rows`, any `c`.
    fn vertex(&self, r: usize, c: usize) -> usize {
        if r == self.rows {
            (c + self.shift) % self.cols
        } else {
            r * self.cols + c % self.cols
        }
    }

    fn squares(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        (0..self.rows).flat_map(move |r| {
            (0..self.cols).map(move |c| {
                [
                    self.vertex(r, c),
                    self.vertex(r, c + 1),
                    self.vertex(r + 1, c + 1),
                    self.vertex(r + 1, c),
                ]
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// `{4,4}` torus: the grid squares, vertices labelled `v1..` row by row.
pub fn gen_quad_torus(params: TorusGridParams) -> Result<PolyhedralMap, GenError> {
    params.check()?;
    let faces: Vec<Vec<String>> = params
        .squares()
        .map(|sq| sq.iter().map(|&v| format!("v{}", v + 1)).collect())
        .collect();
    Ok(build_labeled_map(&faces, BuildOptions::default())?)
}

/// `{3,6}` torus: every grid square split along the diagonal from its lower
/// left to its upper right corner. Vertex `(r, c)` is labelled `u{r+1}{c+1}`.
pub fn gen_tri_torus(params: TorusGridParams) -> Result<PolyhedralMap, GenError> {
    params.check()?;
    let label = |v: usize| {
        let (r, c) = (v / params.cols + 1, v % params.cols + 1);
        if params.rows < 10 && params.cols < 10 {
            format!("u{r}{c}")
        } else {
            format!("u{r}_{c}")
        }
    };
    let faces: Vec<Vec<String>> = params
        .squares()
        .flat_map(|[a, b, c, d]| [[a, b, c], [a, c, d]])
        .map(|tri| tri.iter().map(|&v| label(v)).collect())
        .collect();
    Ok(build_labeled_map(&faces, BuildOptions::default())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlatonicSolid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl PlatonicSolid {
    pub const ALL: [PlatonicSolid; 5] = [
        PlatonicSolid::Tetrahedron,
        PlatonicSolid::Cube,
        PlatonicSolid::Octahedron,
        PlatonicSolid::Dodecahedron,
        PlatonicSolid::Icosahedron,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlatonicSolid::Tetrahedron => "tetrahedron",
            PlatonicSolid::Cube => "cube",
            PlatonicSolid::Octahedron => "octahedron",
            PlatonicSolid::Dodecahedron => "dodecahedron",
            PlatonicSolid::Icosahedron => "icosahedron",
        }
    }
}

impl fmt::Display for PlatonicSolid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlatonicSolid {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlatonicSolid::ALL
            .into_iter()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| GenError::InvalidParams(format!("unknown platonic solid `{s}`")))
    }
}

pub fn gen_platonic(solid: PlatonicSolid) -> PolyhedralMap {
    let faces: Vec<Vec<usize>> = match solid {
        PlatonicSolid::Tetrahedron => {
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        }
        // bottom 0..4, top 4..8 with vertex i + 4 above i
        PlatonicSolid::Cube => vec![
            vec![0, 1, 2, 3],
            vec![4, 5, 6, 7],
            vec![0, 1, 5, 4],
            vec![1, 2, 6, 5],
            vec![2, 3, 7, 6],
            vec![3, 0, 4, 7],
        ],
        // apexes 0 and 5 over the square 1 2 3 4
        PlatonicSolid::Octahedron => (1..=4)
            .flat_map(|i| {
                let j = i % 4 + 1;
                [vec![0, i, j], vec![5, i, j]]
            })
            .collect(),
        // apexes 0 and 11, upper ring 1..6, lower ring 6..11
        PlatonicSolid::Icosahedron => (0..5)
            .flat_map(|i| {
                let (u, u1) = (1 + i, 1 + (i + 1) % 5);
                let (l, l1) = (6 + i, 6 + (i + 1) % 5);
                [
                    vec![0, u, u1],
                    vec![u, u1, l],
                    vec![l, l1, u1],
                    vec![11, l, l1],
                ]
            })
            .collect(),
        PlatonicSolid::Dodecahedron => {
            let ico = gen_platonic(PlatonicSolid::Icosahedron)
                .dual_map_lenient()
                .map;
            let labels = (0..ico.n()).map(|v| v.to_string()).collect();
            return ico.with_labels(labels);
        }
    };
    build_map(&faces).expect("platonic face lists are valid maps")
}

/// The `{3,6}` torus on eight vertices, transcribed face by face from the
/// grid drawing with identified borders.
pub const TRI_TORUS_8_PMAP: &str = include_str!("../fixtures/tri_torus_1_8_2.pmap");
/// The `{4,4}` torus on nine vertices.
pub const QUAD_TORUS_9_PMAP: &str = include_str!("../fixtures/quad_torus_3_3.pmap");

pub fn tri_torus_8_fixture() -> PolyhedralMap {
    read_map(TRI_TORUS_8_PMAP.as_bytes()).expect("checked-in fixture is valid")
}

pub fn quad_torus_9_fixture() -> PolyhedralMap {
    read_map(QUAD_TORUS_9_PMAP.as_bytes()).expect("checked-in fixture is valid")
}

/// Desk-scale corpus: the platonic solids up to the icosahedron, three quad
/// tori and two triangulated tori.
pub fn corpus() -> Vec<(String, PolyhedralMap)> {
    let mut out: Vec<(String, PolyhedralMap)> = [
        PlatonicSolid::Tetrahedron,
        PlatonicSolid::Cube,
        PlatonicSolid::Octahedron,
        PlatonicSolid::Icosahedron,
    ]
    .into_iter()
    .map(|s| (s.name().to_owned(), gen_platonic(s)))
    .collect();
    for (r, c) in [(3, 3), (3, 4), (4, 4)] {
        if let Ok(m) = gen_quad_torus(TorusGridParams::new(r, c, 0)) {
            out.push((format!("quad-torus-{r}x{c}"), m));
        }
    }
    for (r, c, s) in [(1, 7, 2), (1, 8, 2)] {
        if let Ok(m) = gen_tri_torus(TorusGridParams::new(r, c, s)) {
            out.push((format!("tri-torus-{r}-{c}-{s}"), m));
        }
    }
    out
}

/// Faces as read from a pmap file, with the 1-based line of each face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmapFaces {
    pub faces: Vec<Vec<String>>,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxReason {
    InvalidUtf8,
    MissingHeader,
    UnsupportedHeader(String),
    FaceTooShort(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PmapError {
    #[error("EmptyInput: no header and no faces")]
    EmptyInput,
    #[error("{}", syntax_message(*line, reason))]
    Syntax { line: usize, reason: SyntaxReason },
}

fn syntax_message(line: usize, reason: &SyntaxReason) -> String {
    match reason {
        SyntaxReason::InvalidUtf8 => format!("SyntaxError line {line}: input is not valid UTF-8"),
        SyntaxReason::MissingHeader => {
            format!("SyntaxError line {line}: expected header `pmap v1`")
        }
        SyntaxReason::UnsupportedHeader(h) => {
            format!("SyntaxError line {line}: unsupported header `{h}`")
        }
        SyntaxReason::FaceTooShort(len) => {
            format!("FaceTooShort line {line}: a face needs at least 3 vertices, got {len}")
        }
    }
}

pub fn parse_pmap(bytes: &[u8]) -> Result<PmapFaces, PmapError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        PmapError::Syntax {
            line,
            reason: SyntaxReason::InvalidUtf8,
        }
    })?;
    let mut header_seen = false;
    let mut out = PmapFaces {
        faces: Vec::new(),
        lines: Vec::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !header_seen {
            match tokens.as_slice() {
                ["pmap", "v1"] => header_seen = true,
                ["pmap", ..] => {
                    return Err(PmapError::Syntax {
                        line,
                        reason: SyntaxReason::UnsupportedHeader(tokens.join(" ")),
                    })
                }
                _ => {
                    return Err(PmapError::Syntax {
                        line,
                        reason: SyntaxReason::MissingHeader,
                    })
                }
            }
            continue;
        }
        if tokens.len() < 3 {
            return Err(PmapError::Syntax {
                line,
                reason: SyntaxReason::FaceTooShort(tokens.len()),
            });
        }
        out.faces
            .push(tokens.into_iter().map(str::to_owned).collect());
        out.lines.push(line);
    }
    if out.faces.is_empty() {
        return Err(PmapError::EmptyInput);
    }
    Ok(out)
}

/// Header plus one line per face in canonical face order, using the map's labels.
pub fn serialize_pmap(map: &PolyhedralMap) -> String {
    let mut out = String::from("pmap v1\n");
    for face in map.faces() {
        let labels: Vec<&str> = face.vertices().iter().map(|&v| map.label(v)).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error(transparent)]
    Pmap(#[from] PmapError),
    #[error("{error}{}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Map {
        error: MapError,
        line: Option<usize>,
    },
}

/// Parse a pmap document and build the map it describes.
pub fn read_map(bytes: &[u8]) -> Result<PolyhedralMap, LoadError> {
    read_map_with(bytes, BuildOptions::default())
}

pub fn read_map_with(bytes: &[u8], opts: BuildOptions) -> Result<PolyhedralMap, LoadError> {
    let parsed = parse_pmap(bytes)?;
    build_labeled_map(&parsed.faces, opts).map_err(|error| LoadError::Map {
        line: error.face_index().map(|i| parsed.lines[i]),
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::map::Signature;

    #[test]
    fn quad_torus_3x3() {
        let m = gen_quad_torus(TorusGridParams::new(3, 3, 0)).unwrap();
        assert_eq!((m.n(), m.num_edges(), m.num_faces()), (9, 18, 9));
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(m.equivelar_signature(), Some(Signature { p: 4, q: 4 }));
        assert_eq!(m.labels()[0], "v1");
        assert_eq!(m.labels()[8], "v9");
        // v1 v2 v5 v4 is the lower left square of the drawing
        assert!(m.face_id(&[0, 1, 4, 3]).is_some());
        // v7 v8 v2 v1 closes the grid vertically
        assert!(m.face_id(&[6, 7, 1, 0]).is_some());
    }

    #[test]
    fn quad_torus_2x2_is_rejected() {
        let err = gen_quad_torus(TorusGridParams::new(2, 2, 0)).unwrap_err();
        assert!(matches!(
            err,
            GenError::Map(MapError::EdgeNotInTwoFaces { .. })
        ));
    }

    #[test]
    fn quad_torus_4x4() {
        let m = gen_quad_torus(TorusGridParams::new(4, 4, 0)).unwrap();
        assert_eq!((m.n(), m.num_edges(), m.num_faces()), (16, 32, 16));
        assert_eq!(m.equivelar_signature(), Some(Signature { p: 4, q: 4 }));
    }

    #[test]
    fn zero_params_rejected() {
        assert!(matches!(
            gen_quad_torus(TorusGridParams::new(0, 3, 0)),
            Err(GenError::InvalidParams(_))
        ));
    }

    #[test]
    fn tri_torus_1_8_2() {
        let m = gen_tri_torus(TorusGridParams::new(1, 8, 2)).unwrap();
        assert_eq!((m.n(), m.num_edges(), m.num_faces()), (8, 24, 16));
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(m.equivelar_signature(), Some(Signature { p: 3, q: 6 }));
    }

    #[test]
    fn tri_torus_generator_matches_figure_transcription() {
        let generated = gen_tri_torus(TorusGridParams::new(1, 8, 2)).unwrap();
        let fixture = tri_torus_8_fixture();
        assert_eq!(generated.labels(), fixture.labels());
        assert_eq!(generated.faces(), fixture.faces());
    }

    #[test]
    fn quad_torus_generator_matches_fixture() {
        let generated = gen_quad_torus(TorusGridParams::new(3, 3, 0)).unwrap();
        assert_eq!(generated.faces(), quad_torus_9_fixture().faces());
    }

    #[test]
    fn tri_torus_1_7_2_is_k7() {
        let m = gen_tri_torus(TorusGridParams::new(1, 7, 2)).unwrap();
        assert_eq!((m.n(), m.num_edges()), (7, 21));
        assert_eq!(m.equivelar_signature(), Some(Signature { p: 3, q: 6 }));
        assert_eq!(
            m.equivelar_signature().unwrap().disc_face_count(m.n()),
            Some(5)
        );
    }

    #[test]
    fn tri_torus_1_3_1_collapses() {
        assert!(gen_tri_torus(TorusGridParams::new(1, 3, 1)).is_err());
    }

    #[test]
    fn tri_torus_dual_is_hexagonal() {
        let d = gen_tri_torus(TorusGridParams::new(1, 8, 2))
            .unwrap()
            .dual_map()
            .unwrap();
        assert_eq!(d.map.n(), 16);
        assert_eq!(d.map.equivelar_signature(), Some(Signature { p: 6, q: 3 }));
    }

    #[test]
    fn platonic_signatures() {
        let expect = [
            (PlatonicSolid::Tetrahedron, 4, (3, 3)),
            (PlatonicSolid::Cube, 8, (4, 3)),
            (PlatonicSolid::Octahedron, 6, (3, 4)),
            (PlatonicSolid::Dodecahedron, 20, (5, 3)),
            (PlatonicSolid::Icosahedron, 12, (3, 5)),
        ];
        for (solid, n, (p, q)) in expect {
            let m = gen_platonic(solid);
            assert_eq!(m.n(), n, "{solid}");
            assert_eq!(m.euler_characteristic(), 2, "{solid}");
            assert_eq!(m.equivelar_signature(), Some(Signature { p, q }), "{solid}");
        }
    }

    #[test]
    fn parse_tetrahedron() {
        let parsed = parse_pmap(b"pmap v1\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n").unwrap();
        assert_eq!(parsed.faces.len(), 4);
        assert_eq!(parsed.faces[3], vec!["1", "2", "3"]);
        assert_eq!(parsed.lines, vec![2, 3, 4, 5]);
    }

    #[test]
    fn parse_skips_comments() {
        let parsed = parse_pmap(
            b"# a tetrahedron\npmap v1\n0 1 2\n# middle\n0 1 3\n\n0 2 3 # trailing\n1 2 3\n",
        )
        .unwrap();
        assert_eq!(parsed.faces.len(), 4);
        assert_eq!(parsed.faces[2], vec!["0", "2", "3"]);
    }

    #[test]
    fn parse_short_face() {
        let err = parse_pmap(b"pmap v1\n0 1\n").unwrap_err();
        assert_eq!(
            err,
            PmapError::Syntax {
                line: 2,
                reason: SyntaxReason::FaceTooShort(2)
            }
        );
        assert!(err.to_string().starts_with("FaceTooShort line 2"));
    }

    #[test]
    fn parse_empty_and_headerless() {
        assert_eq!(parse_pmap(b"").unwrap_err(), PmapError::EmptyInput);
        assert_eq!(
            parse_pmap(b"pmap v1\n# nothing\n").unwrap_err(),
            PmapError::EmptyInput
        );
        assert!(matches!(
            parse_pmap(b"0 1 2\n").unwrap_err(),
            PmapError::Syntax {
                line: 1,
                reason: SyntaxReason::MissingHeader
            }
        ));
        assert!(matches!(
            parse_pmap(b"pmap v2\n0 1 2\n").unwrap_err(),
            PmapError::Syntax {
                reason: SyntaxReason::UnsupportedHeader(_),
                ..
            }
        ));
    }

    #[test]
    fn serialize_tetrahedron() {
        let text = serialize_pmap(&gen_platonic(PlatonicSolid::Tetrahedron));
        assert_eq!(text, "pmap v1\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n");
    }

    #[test]
    fn serialize_quad_torus_keeps_labels() {
        let text = serialize_pmap(&gen_quad_torus(TorusGridParams::new(3, 3, 0)).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "v1 v2 v5 v4");
        assert_eq!(
            text,
            QUAD_TORUS_9_PMAP
                .lines()
                .filter(|l| !l.starts_with('#'))
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        );
    }

    #[test]
    fn round_trip_corpus() {
        for (name, m) in corpus() {
            let back = read_map(serialize_pmap(&m).as_bytes()).unwrap();
            assert_eq!(back.faces(), m.faces(), "{name}");
            assert_eq!(back.labels(), m.labels(), "{name}");
            assert_eq!(canonical_form(&back), canonical_form(&m), "{name}");
        }
    }

    #[test]
    fn load_error_carries_line() {
        let err = read_map(b"pmap v1\n0 1 2\n# dup\n0 2 1\n").unwrap_err();
        match err {
            LoadError::Map { error, line } => {
                assert!(matches!(
                    error,
                    MapError::EdgeNotInTwoFaces { .. } | MapError::NotPolyhedral { .. }
                ));
                if let MapError::NotPolyhedral { .. } = error {
                    assert_eq!(line, Some(2));
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

//! Triangle-style `.node` / `.ele` files.
//!
//! `.node`: a header `<vertices> <dim> <attributes> <markers>`, then one line
//! per vertex `<index> <coords...> [attributes...] [marker]`.
//! `.ele`: a header `<elements> <nodes per element> <attributes>`, then
//! `<index> <nodes...> [attributes...]`. Comments start with `#`; a comment
//! `# kind: quad` marks four-node planar elements as quadrilaterals.
//! Indices may start at 0 or 1, decided by the first vertex line.

use std::fmt::Write as _;
use std::path::Path;

use crate::criteria::ElementKind;
use crate::geometry::Point;
use crate::mesh::{Element, Mesh};

use super::IoError;

struct Lines<'a> {
    file: &'a str,
    items: Vec<(usize, Vec<&'a str>)>,
    kind: Option<String>,
}

fn tokenize<'a>(file: &'a str, text: &'a str) -> Lines<'a> {
    let mut items = Vec::new();
    let mut kind = None;
    for (i, raw) in text.lines().enumerate() {
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some((key, value)) = c.split_once(':') {
                if key.trim().eq_ignore_ascii_case("kind") {
                    kind = Some(value.trim().to_ascii_lowercase());
                }
            }
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !toks.is_empty() {
            items.push((i + 1, toks));
        }
    }
    Lines { file, items, kind }
}

impl Lines<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> IoError {
        IoError::Parse { file: self.file.to_string(), line, message: message.into() }
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(1, |(l, _)| *l)
    }
}

fn parse_num<T: std::str::FromStr>(lines: &Lines, line: usize, tok: &str, what: &str) -> Result<T, IoError> {
    tok.parse().map_err(|_| lines.err(line, format!("invalid {what} `{tok}`")))
}

/// Parse the text of a node and an element file. `node_name` and
/// `ele_name` label error messages.
pub fn parse_mesh(node_name: &str, node_text: &str, ele_name: &str, ele_text: &str) -> Result<Mesh, IoError> {
    let nodes = tokenize(node_name, node_text);
    let Some((hline, header)) = nodes.items.first() else {
        return Err(nodes.err(1, "missing header"));
    };
    if header.len() < 2 {
        return Err(nodes.err(*hline, "header needs at least a vertex count and a dimension"));
    }
    let count: usize = parse_num(&nodes, *hline, header[0], "vertex count")?;
    let dim: usize = parse_num(&nodes, *hline, header[1], "dimension")?;
    if dim != 2 && dim != 3 {
        return Err(nodes.err(*hline, format!("dimension must be 2 or 3, got {dim}")));
    }
    let nattr: usize = match header.get(2) {
        Some(t) => parse_num(&nodes, *hline, t, "attribute count")?,
        None => 0,
    };
    let nmark: usize = match header.get(3) {
        Some(t) => parse_num(&nodes, *hline, t, "marker count")?,
        None => 0,
    };
    if nmark > 1 {
        return Err(nodes.err(*hline, format!("at most one boundary marker per vertex, got {nmark}")));
    }
    let body = &nodes.items[1..];
    if body.len() != count {
        let line = body.get(count).map_or(nodes.last_line(), |(l, _)| *l);
        return Err(nodes.err(line, format!("header declares {count} vertices, file has {}", body.len())));
    }
    let mut base = 0;
    let mut vertices = Vec::with_capacity(count);
    let mut markers = Vec::with_capacity(count);
    for (i, (line, toks)) in body.iter().enumerate() {
        let want = 1 + dim + nattr + nmark;
        if toks.len() != want {
            return Err(nodes.err(*line, format!("expected {want} fields, found {}", toks.len())));
        }
        let idx: usize = parse_num(&nodes, *line, toks[0], "vertex index")?;
        if i == 0 {
            if idx > 1 {
                return Err(nodes.err(*line, format!("first vertex index must be 0 or 1, got {idx}")));
            }
            base = idx;
        }
        if idx != base + i {
            return Err(nodes.err(*line, format!("expected vertex index {}, got {idx}", base + i)));
        }
        let mut c = [0.0; 3];
        for k in 0..dim {
            let v: f64 = parse_num(&nodes, *line, toks[1 + k], "coordinate")?;
            if !v.is_finite() {
                return Err(nodes.err(*line, "coordinates must be finite"));
            }
            c[k] = v;
        }
        vertices.push(Point::from_slice(&c[..dim]).expect("finite"));
        if nmark == 1 {
            let m: i64 = parse_num(&nodes, *line, toks[want - 1], "boundary marker")?;
            markers.push(m != 0);
        }
    }

    let eles = tokenize(ele_name, ele_text);
    let Some((hline, header)) = eles.items.first() else {
        return Err(eles.err(1, "missing header"));
    };
    if header.len() < 2 {
        return Err(eles.err(*hline, "header needs an element count and nodes per element"));
    }
    let ecount: usize = parse_num(&eles, *hline, header[0], "element count")?;
    let npe: usize = parse_num(&eles, *hline, header[1], "nodes per element")?;
    let eattr: usize = match header.get(2) {
        Some(t) => parse_num(&eles, *hline, t, "attribute count")?,
        None => 0,
    };
    let kind = match (npe, dim, eles.kind.as_deref()) {
        (3, 2, None | Some("triangle")) => ElementKind::Triangle,
        (4, 2, None | Some("quad")) => ElementKind::Quad,
        (4, 3, None | Some("tetrahedron")) => ElementKind::Tetrahedron,
        (_, _, k) => {
            return Err(eles.err(
                *hline,
                format!("{npe}-node elements{} are not supported in {dim}D", k.map(|k| format!(" of kind `{k}`")).unwrap_or_default()),
            ))
        }
    };
    let body = &eles.items[1..];
    if body.len() != ecount {
        let line = body.get(ecount).map_or(eles.last_line(), |(l, _)| *l);
        return Err(eles.err(line, format!("header declares {ecount} elements, file has {}", body.len())));
    }
    let mut elements = Vec::with_capacity(ecount);
    for (line, toks) in body {
        let want = 1 + npe + eattr;
        if toks.len() != want {
            return Err(eles.err(*line, format!("expected {want} fields, found {}", toks.len())));
        }
        let mut nodes_idx = Vec::with_capacity(npe);
        for t in &toks[1..=npe] {
            let raw: usize = parse_num(&eles, *line, t, "node index")?;
            if raw < base || raw - base >= count {
                return Err(eles.err(*line, format!("node {raw} is out of range for {count} vertices")));
            }
            nodes_idx.push(raw - base);
        }
        elements.push(Element { kind, nodes: nodes_idx });
    }
    let has_markers = nmark == 1;
    let fixed = if has_markers { markers } else { vec![false; count] };
    let mut mesh = Mesh::new(dim, vertices, fixed, elements).map_err(|e| eles.err(1, e.to_string()))?;
    if !has_markers {
        mesh.fix_open_stars();
    }
    Ok(mesh)
}

pub fn read_mesh(node_path: &Path, ele_path: &Path) -> Result<Mesh, IoError> {
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| IoError::Io { path: p.display().to_string(), source: e });
    let (nt, et) = (read(node_path)?, read(ele_path)?);
    parse_mesh(&node_path.display().to_string(), &nt, &ele_path.display().to_string(), &et)
}

/// Node and element file contents, 1-based, with boundary markers taken
/// from the fixed flags and coordinates in 17 significant digits.
pub fn format_mesh(mesh: &Mesh) -> (String, String) {
    let mut node = format!("{} {} 0 1\n", mesh.vertices.len(), mesh.dim);
    for (i, p) in mesh.vertices.iter().enumerate() {
        let _ = write!(node, "{}", i + 1);
        for c in p.coords() {
            let _ = write!(node, " {c:.16e}");
        }
        let _ = writeln!(node, " {}", u8::from(mesh.fixed[i]));
    }
    let mut ele = String::new();
    let kind = mesh.elements.first().map(|e| e.kind);
    if kind == Some(ElementKind::Quad) {
        ele.push_str("# kind: quad\n");
    }
    let npe = kind.map_or(3, |k| k.num_nodes());
    let _ = writeln!(ele, "{} {} 0", mesh.elements.len(), npe);
    for (i, e) in mesh.elements.iter().enumerate() {
        let _ = write!(ele, "{}", i + 1);
        for n in &e.nodes {
            let _ = write!(ele, " {}", n + 1);
        }
        ele.push('\n');
    }
    (node, ele)
}

pub fn write_mesh(mesh: &Mesh, node_path: &Path, ele_path: &Path) -> Result<(), IoError> {
    if mesh.elements.windows(2).any(|w| w[0].kind != w[1].kind) {
        return Err(IoError::Unsupported("element files hold a single element kind".into()));
    }
    let (node, ele) = format_mesh(mesh);
    for (p, text) in [(node_path, node), (ele_path, ele)] {
        std::fs::write(p, text).map_err(|e| IoError::Io { path: p.display().to_string(), source: e })?;
    }
    Ok(())
}

//! Plain-text mesh format.
//!
//! ```text
//! nv ne nc                      header: vertex, element and crack counts
//! x y                           nv lines, shortest round-trip decimals
//! k i1 ... ik [level]           ne lines, 0-based counter-clockwise cycle
//! nb                            number of tagged edges
//! elem local tag                nb lines; edge `local` runs from ik to ik+1
//! np ntips npairs               per crack: polyline size, tips, face pairs
//! x y                           np polyline points
//! start|end vertex angle        ntips tip records (angle in radians)
//! a b                           npairs coincident vertex pairs
//! ```
//!
//! Blank lines and text after `#` are ignored. Writing then reading a mesh
//! reproduces coordinates bit for bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{CrackGeometry, CrackTip, Element, PolyMesh, TipEnd};
use crate::error::{Error, Result};
use crate::geometry::Vec2;

pub fn write_mesh(mesh: &PolyMesh, path: &Path) -> Result<()> {
    std::fs::write(path, mesh_to_string(mesh))?;
    Ok(())
}

pub fn read_mesh(path: &Path) -> Result<PolyMesh> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text, path)
}

pub fn mesh_to_string(mesh: &PolyMesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.n_vertices(), mesh.n_elements(), mesh.cracks().len());
    for p in mesh.vertices() {
        let _ = writeln!(s, "{} {}", p.x, p.y);
    }
    for el in mesh.elements() {
        let _ = write!(s, "{}", el.len());
        for v in &el.vertices {
            let _ = write!(s, " {v}");
        }
        let _ = writeln!(s, " {}", el.level);
    }
    let tagged = mesh.boundary_edges();
    let _ = writeln!(s, "{}", tagged.len());
    for b in tagged {
        let _ = writeln!(s, "{} {} {}", b.element, b.local, b.tag);
    }
    for c in mesh.cracks() {
        let _ = writeln!(s, "{} {} {}", c.polyline.len(), c.tips.len(), c.face_pairs.len());
        for p in &c.polyline {
            let _ = writeln!(s, "{} {}", p.x, p.y);
        }
        for t in &c.tips {
            let end = match t.end {
                TipEnd::Start => "start",
                TipEnd::End => "end",
            };
            let _ = writeln!(s, "{end} {} {}", t.vertex, t.angle);
        }
        for (a, b) in &c.face_pairs {
            let _ = writeln!(s, "{a} {b}");
        }
    }
    s
}

struct Lines<'a> {
    iter: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    path: PathBuf,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<Vec<&'a str>> {
        for (no, raw) in self.iter.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            self.last = no + 1;
            if !line.is_empty() {
                return Ok(line.split_whitespace().collect());
            }
        }
        Err(self.err("unexpected end of file"))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.path.clone(), line: self.last, msg: msg.into() }
    }

    fn fields<T: std::str::FromStr>(&mut self, n: usize) -> Result<Vec<T>> {
        let toks = self.next()?;
        if toks.len() != n {
            return Err(self.err(format!("expected {n} fields, found {}", toks.len())));
        }
        self.parse_all(&toks)
    }

    fn parse_all<T: std::str::FromStr>(&self, toks: &[&str]) -> Result<Vec<T>> {
        toks.iter().map(|t| t.parse::<T>().map_err(|_| self.err(format!("cannot parse {t:?}")))).collect()
    }
}

pub fn parse_mesh(text: &str, path: &Path) -> Result<PolyMesh> {
    let mut lines = Lines { iter: Box::new(text.lines().enumerate()), path: path.to_path_buf(), last: 0 };
    let h: Vec<usize> = lines.fields(3)?;
    let (nv, ne, nc) = (h[0], h[1], h[2]);
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let xy: Vec<f64> = lines.fields(2)?;
        vertices.push(Vec2::new(xy[0], xy[1]));
    }
    let mut elements = Vec::with_capacity(ne);
    for _ in 0..ne {
        let toks = lines.next()?;
        let nums: Vec<usize> = lines.parse_all(&toks)?;
        let k = *nums.first().ok_or_else(|| lines.err("empty element line"))?;
        if nums.len() != k + 1 && nums.len() != k + 2 {
            return Err(lines.err(format!("element line declares {k} vertices but has {} fields", nums.len())));
        }
        let mut el = Element::new(nums[1..=k].to_vec());
        if nums.len() == k + 2 {
            el.level = nums[k + 1] as u32;
        }
        elements.push(el);
    }
    let nb: Vec<usize> = lines.fields(1)?;
    for _ in 0..nb[0] {
        let t: Vec<usize> = lines.fields(3)?;
        let el = elements.get_mut(t[0]).ok_or_else(|| Error::InvalidMesh(format!("tag references element {}", t[0])))?;
        if t[1] >= el.len() {
            return Err(Error::InvalidMesh(format!("tag references edge {} of element {}", t[1], t[0])));
        }
        el.edge_tags[t[1]] = t[2] as u32;
    }
    let mut cracks = Vec::with_capacity(nc);
    for _ in 0..nc {
        let c: Vec<usize> = lines.fields(3)?;
        let mut crack = CrackGeometry::default();
        for _ in 0..c[0] {
            let xy: Vec<f64> = lines.fields(2)?;
            crack.polyline.push(Vec2::new(xy[0], xy[1]));
        }
        for _ in 0..c[1] {
            let toks = lines.next()?;
            if toks.len() != 3 {
                return Err(lines.err("tip record needs 3 fields"));
            }
            let end = match toks[0] {
                "start" => TipEnd::Start,
                "end" => TipEnd::End,
                other => return Err(lines.err(format!("unknown tip end {other:?}"))),
            };
            let vertex = toks[1].parse().map_err(|_| lines.err("bad tip vertex"))?;
            let angle = toks[2].parse().map_err(|_| lines.err("bad tip angle"))?;
            crack.tips.push(CrackTip { end, vertex, angle });
        }
        for _ in 0..c[2] {
            let p: Vec<usize> = lines.fields(2)?;
            crack.face_pairs.push((p[0], p[1]));
        }
        cracks.push(crack);
    }
    PolyMesh::new(vertices, elements, cracks)
}

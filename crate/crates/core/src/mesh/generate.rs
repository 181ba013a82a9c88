use serde::{Deserialize, Serialize};

use super::{tags, Element, PolyMesh};
use crate::error::{Error, Result};
use crate::geometry::{Rect, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    T3,
    Q4,
}

/// Conforming structured mesh of a rectangle.
///
/// Triangles alternate their diagonal in a checkerboard pattern and list the
/// vertex opposite their longest edge first, which is the newest-vertex
/// convention used by bisection refinement.
pub fn generate_structured(kind: ElementKind, domain: Rect, nx: usize, ny: usize) -> Result<PolyMesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidInput("nx and ny must be at least 1".into()));
    }
    if !(domain.width() > 0.0 && domain.height() > 0.0) {
        return Err(Error::InvalidInput(format!("degenerate rectangle {domain:?}")));
    }
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        // exact end coordinates avoid round-off on the boundary lines
        let y = if j == ny { domain.y1 } else { domain.y0 + domain.height() * j as f64 / ny as f64 };
        for i in 0..=nx {
            let x = if i == nx { domain.x1 } else { domain.x0 + domain.width() * i as f64 / nx as f64 };
            vertices.push(Vec2::new(x, y));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            match kind {
                ElementKind::Q4 => elements.push(Element::new(vec![a, b, c, d])),
                ElementKind::T3 => {
                    if (i + j) % 2 == 0 {
                        // diagonal a-c; right angles at b and d
                        elements.push(Element::new(vec![b, c, a]));
                        elements.push(Element::new(vec![d, a, c]));
                    } else {
                        // diagonal b-d; right angles at a and c
                        elements.push(Element::new(vec![a, b, d]));
                        elements.push(Element::new(vec![c, d, b]));
                    }
                }
            }
        }
    }
    tag_rect_boundary(&vertices, &mut elements, domain);
    PolyMesh::new(vertices, elements, vec![])
}

/// Tags every element edge lying on a side of `domain`.
pub(crate) fn tag_rect_boundary(vertices: &[Vec2], elements: &mut [Element], domain: Rect) {
    let tol = 1e-12 * (domain.width() + domain.height());
    for el in elements.iter_mut() {
        let n = el.len();
        for i in 0..n {
            let a = vertices[el.vertices[i]];
            let b = vertices[el.vertices[(i + 1) % n]];
            if let Some(t) = rect_side_tag(a, b, domain, tol) {
                el.edge_tags[i] = t;
            }
        }
    }
}

pub(crate) fn rect_side_tag(a: Vec2, b: Vec2, r: Rect, tol: f64) -> Option<u32> {
    let both = |f: &dyn Fn(Vec2) -> bool| f(a) && f(b);
    if both(&|p| (p.y - r.y0).abs() <= tol) {
        Some(tags::BOTTOM)
    } else if both(&|p| (p.x - r.x1).abs() <= tol) {
        Some(tags::RIGHT)
    } else if both(&|p| (p.y - r.y1).abs() <= tol) {
        Some(tags::TOP)
    } else if both(&|p| (p.x - r.x0).abs() <= tol) {
        Some(tags::LEFT)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q4_beam_counts() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, -2.0, 16.0, 2.0), 4, 1).unwrap();
        assert_eq!(m.n_elements(), 4);
        assert_eq!(m.n_vertices(), 10);
    }

    #[test]
    fn t3_unit_square() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 1.0, 1.0), 1, 1).unwrap();
        assert_eq!(m.n_elements(), 2);
        assert_eq!(m.n_vertices(), 4);
        assert!((m.total_area() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn q4_area_conservation() {
        let m = generate_structured(ElementKind::Q4, Rect::new(0.0, -2.0, 16.0, 2.0), 32, 8).unwrap();
        assert!((m.total_area() - 64.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_rectangle_is_rejected() {
        assert!(generate_structured(ElementKind::Q4, Rect::new(0.0, 0.0, 0.0, 1.0), 2, 2).is_err());
        assert!(generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 1.0, 1.0), 0, 2).is_err());
    }

    #[test]
    fn t3_newest_vertex_is_opposite_longest_edge() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 3.0, 2.0), 3, 2).unwrap();
        for e in 0..m.n_elements() {
            let p = m.element_points(e);
            let opposite = (p[1] - p[2]).norm();
            assert!(opposite >= (p[0] - p[1]).norm() && opposite >= (p[0] - p[2]).norm());
        }
    }

    #[test]
    fn boundary_tags_cover_the_perimeter() {
        let m = generate_structured(ElementKind::T3, Rect::new(0.0, 0.0, 2.0, 1.0), 4, 2).unwrap();
        let len: f64 = m
            .boundary_edges()
            .iter()
            .map(|b| m.element_geometry(b.element).lengths[b.local])
            .sum();
        assert!((len - 6.0).abs() < 1e-14);
    }
}

//! Planar geometry primitives shared by the mesh, refinement and crack modules.

use serde::{Deserialize, Serialize};

pub type Vec2 = nalgebra::Vector2<f64>;

#[inline]
pub fn cross(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Twice the signed area of triangle (a, b, c); positive when counter-clockwise.
#[inline]
pub fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    cross(b - a, c - a)
}

/// Signed shoelace area.
pub fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        s += cross(pts[i], pts[(i + 1) % n]);
    }
    0.5 * s
}

/// Area-weighted centroid. Coordinates are shifted to the first vertex to
/// limit cancellation on small elements far from the origin.
pub fn polygon_centroid(pts: &[Vec2]) -> Vec2 {
    let n = pts.len();
    let o = pts[0];
    let mut a = 0.0;
    let mut c = Vec2::zeros();
    for i in 0..n {
        let p = pts[i] - o;
        let q = pts[(i + 1) % n] - o;
        let w = cross(p, q);
        a += w;
        c += (p + q) * w;
    }
    o + c / (3.0 * a)
}

/// Maximum pairwise vertex distance.
pub fn diameter(pts: &[Vec2]) -> f64 {
    let mut h: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            h = h.max((pts[i] - pts[j]).norm());
        }
    }
    h
}

/// True when the closed polygon has no two non-adjacent edges touching and
/// no zero-length edge.
pub fn is_simple(pts: &[Vec2]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let scale = diameter(pts);
    for i in 0..n {
        if (pts[(i + 1) % n] - pts[i]).norm() <= 1e-14 * scale {
            return false;
        }
    }
    if n == 3 {
        return true;
    }
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (pts[j], pts[(j + 1) % n]);
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test (touching counts).
pub fn segments_touch(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Parameters (t, s) of the intersection a + t(b-a) = c + s(d-c), if the
/// supporting lines are not parallel.
pub fn line_intersection(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let den = cross(r, s);
    if den.abs() <= 1e-300 || den.abs() <= 1e-14 * r.norm() * s.norm() {
        return None;
    }
    let qp = c - a;
    Some((cross(qp, s) / den, cross(qp, r) / den))
}

/// Distance from p to the closed segment [a, b] and the clamped parameter.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> (f64, f64) {
    let ab = b - a;
    let l2 = ab.norm_squared();
    let t = if l2 > 0.0 { ((p - a).dot(&ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    ((a + ab * t - p).norm(), t)
}

/// Crossing-number point-in-polygon test; points on the boundary are
/// classified arbitrarily, callers needing a strict answer combine it with
/// [`distance_to_boundary`].
pub fn point_in_polygon(p: Vec2, pts: &[Vec2]) -> bool {
    let n = pts.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (pts[i], pts[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn distance_to_boundary(p: Vec2, pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| point_segment_distance(p, pts[i], pts[(i + 1) % n]).0).fold(f64::INFINITY, f64::min)
}

/// Polar angle of `v` mapped to [0, 2π).
pub fn angle_of(v: Vec2) -> f64 {
    let a = v.y.atan2(v.x);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Counter-clockwise sweep from direction `from` to direction `to`, in [0, 2π).
pub fn ccw_sweep(from: Vec2, to: Vec2) -> f64 {
    let d = angle_of(to) - angle_of(from);
    if d < 0.0 {
        d + std::f64::consts::TAU
    } else {
        d
    }
}

pub fn rotate(v: Vec2, angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// Axis-aligned rectangle [x0, x1] × [y0, y1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Rect {
        Rect { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        p.x >= self.x0 - tol && p.x <= self.x1 + tol && p.y >= self.y0 - tol && p.y <= self.y1 + tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shoelace_and_centroid_of_l_shape() {
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, 2.0),
            Vec2::new(0.0, 2.0),
        ];
        assert!((signed_area(&pts) - 3.0).abs() < 1e-15);
        // two unit squares at (1.5,0.5),(0.5,1.5) plus one at (0.5,0.5)
        let c = polygon_centroid(&pts);
        assert!((c - Vec2::new(2.5 / 3.0, 2.5 / 3.0)).norm() < 1e-15);
        assert!(is_simple(&pts));
    }

    #[test]
    fn bow_tie_is_not_simple() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        assert!(!is_simple(&pts));
    }

    #[test]
    fn sweep_is_ccw() {
        let e = Vec2::new(1.0, 0.0);
        let n = Vec2::new(0.0, 1.0);
        assert!((ccw_sweep(e, n) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((ccw_sweep(n, e) - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }
}

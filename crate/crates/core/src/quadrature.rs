//! Quadrature on segments, triangles and polygons.

use crate::geometry::{cross, Vec2};

/// Four-point Gauss-Legendre rule on [0, 1] as (abscissa, weight).
pub const GAUSS4: [(f64, f64); 4] = [
    (0.5 - 0.5 * 0.861_136_311_594_052_6, 0.5 * 0.347_854_845_137_453_8),
    (0.5 - 0.5 * 0.339_981_043_584_856_3, 0.5 * 0.652_145_154_862_546_1),
    (0.5 + 0.5 * 0.339_981_043_584_856_3, 0.5 * 0.652_145_154_862_546_1),
    (0.5 + 0.5 * 0.861_136_311_594_052_6, 0.5 * 0.347_854_845_137_453_8),
];

/// Six-point rule exact for degree 4 on the reference triangle, as
/// barycentric (λ1, λ2) and weight summing to 1.
const TRI6: [(f64, f64, f64); 6] = [
    (0.445_948_490_915_965, 0.445_948_490_915_965, 0.223_381_589_678_011),
    (0.445_948_490_915_965, 0.108_103_018_168_070, 0.223_381_589_678_011),
    (0.108_103_018_168_070, 0.445_948_490_915_965, 0.223_381_589_678_011),
    (0.091_576_213_509_771, 0.091_576_213_509_771, 0.109_951_743_655_322),
    (0.091_576_213_509_771, 0.816_847_572_980_459, 0.109_951_743_655_322),
    (0.816_847_572_980_459, 0.091_576_213_509_771, 0.109_951_743_655_322),
];

/// Points and weights on triangle (a, b, c). Weights carry the signed area.
pub fn triangle_rule(a: Vec2, b: Vec2, c: Vec2) -> impl Iterator<Item = (Vec2, f64)> {
    let area = 0.5 * cross(b - a, c - a);
    TRI6.iter().map(move |&(l1, l2, w)| (a * l1 + b * l2 + c * (1.0 - l1 - l2), w * area))
}

/// Fan triangulation from `center` with the degree-4 rule on each triangle.
/// Signed weights make this exact for polynomials on any simple polygon.
pub fn polygon_rule(pts: &[Vec2], center: Vec2) -> Vec<(Vec2, f64)> {
    let n = pts.len();
    let mut out = Vec::with_capacity(6 * n);
    for i in 0..n {
        out.extend(triangle_rule(center, pts[i], pts[(i + 1) % n]));
    }
    out
}

/// Integral of `f` over segment a → b with [`GAUSS4`].
pub fn segment_integral<T>(a: Vec2, b: Vec2, f: impl Fn(Vec2) -> T) -> T
where
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let l = (b - a).norm();
    let mut it = GAUSS4.iter().map(|&(s, w)| f(a + (b - a) * s) * (w * l));
    let first = it.next().expect("rule has points");
    it.fold(first, |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polygon_centroid;

    #[test]
    fn triangle_rule_is_degree_four() {
        let (a, b, c) = (Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0));
        let int = |f: &dyn Fn(Vec2) -> f64| triangle_rule(a, b, c).map(|(p, w)| f(p) * w).sum::<f64>();
        // ∫ x^i y^j over the unit triangle = i! j! / (i + j + 2)!
        assert!((int(&|_| 1.0) - 0.5).abs() < 1e-14);
        assert!((int(&|p| p.x * p.x * p.y * p.y) - 4.0 / 720.0).abs() < 1e-14);
        assert!((int(&|p| p.x.powi(4)) - 24.0 / 720.0).abs() < 1e-14);
        assert!((int(&|p| p.x.powi(3) * p.y) - 6.0 / 720.0).abs() < 1e-14);
    }

    #[test]
    fn polygon_rule_on_nonconvex_polygon() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(2.0, 2.0), Vec2::new(1.0, 0.5), Vec2::new(0.0, 2.0)];
        let q = polygon_rule(&pts, polygon_centroid(&pts));
        let area: f64 = q.iter().map(|x| x.1).sum();
        assert!((area - crate::geometry::signed_area(&pts)).abs() < 1e-14);
        // ∫ x dA = area · x_c
        let mx: f64 = q.iter().map(|(p, w)| p.x * w).sum();
        assert!((mx - area * polygon_centroid(&pts).x).abs() < 1e-13);
    }

    #[test]
    fn gauss4_is_degree_seven() {
        let v = segment_integral(Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), |p| p.x.powi(7));
        assert!((v - 256.0 / 8.0).abs() < 1e-12);
    }
}

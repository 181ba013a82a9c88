//! Property tests for the invariants of the mesh, element, system, reference,
//! recovery, refinement and fracture layers.

mod common;

use nalgebra::{DVector, Matrix2, Vector3};
use polyfrac::adapt::{nvb_refine, refine, regularize, Scheme};
use polyfrac::fracture::compute_sifs;
use polyfrac::geometry::Rect;
use polyfrac::mesh::{generate_structured, generate_voronoi, insert_crack, io, tags, ElementKind, PolyMesh};
use polyfrac::problems::{EdgeCrackProblem, LinearField, MeshFamily, Problem};
use polyfrac::recovery::{dorfler_mark, error_norms, recover};
use polyfrac::reference::{slanted_sifs, ExactSolution, NearTipField, TimoshenkoBeam};
use polyfrac::system::{assemble, fix_tagged, solve_problem, BoundaryConditionSet, Solution};
use polyfrac::vem::stiffness_of;
use polyfrac::{Material, PlaneState, Vec2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNIT: Rect = Rect { x0: 0.0, y0: 0.0, x1: 1.0, y1: 1.0 };

fn base_mesh(kind: u8, seed: u64) -> PolyMesh {
    match kind % 3 {
        0 => generate_structured(ElementKind::T3, UNIT, 3 + (seed % 3) as usize, 3).unwrap(),
        1 => generate_structured(ElementKind::Q4, UNIT, 3, 3 + (seed % 3) as usize).unwrap(),
        _ => generate_voronoi(UNIT, 12 + (seed % 8) as usize, 2, seed).unwrap(),
    }
}

/// Three refinements of random elements with random schemes, each followed
/// by regularization.
fn refined_mesh(kind: u8, seed: u64) -> PolyMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = base_mesh(kind, seed);
    for _ in 0..3 {
        let n = m.n_elements();
        let marked: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.3)).collect();
        let all_triangles = m.elements().iter().all(|e| e.len() == 3);
        let scheme = match rng.random_range(0..3) {
            0 if all_triangles => Scheme::Nvb,
            1 => Scheme::Polytree,
            _ => Scheme::Midpoint,
        };
        m = regularize(&refine(&m, scheme, &marked).unwrap().0, 0.2).unwrap();
    }
    m
}

fn random_linear(rng: &mut ChaCha8Rng) -> LinearField {
    let mut g = || rng.random_range(-1.0..1.0);
    LinearField {
        material: Material::new(2e3, 0.25, PlaneState::PlaneStress).unwrap(),
        offset: Vec2::new(g(), g()),
        gradient: Matrix2::new(g(), g(), g(), g()) * 1e-3,
    }
}

fn outer_fixed(mesh: &PolyMesh, field: LinearField) -> BoundaryConditionSet {
    let mut bcs = BoundaryConditionSet::default();
    fix_tagged(mesh, &mut bcs, &[tags::BOTTOM, tags::RIGHT, tags::TOP, tags::LEFT], &[0, 1], &move |p| field.displacement(p));
    bcs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refined_meshes_keep_area_and_unit_normals(kind in 0u8..3, seed in 0u64..10_000) {
        let m = refined_mesh(kind, seed);
        prop_assert!((m.total_area() - 1.0).abs() <= 1e-12);
        for e in 0..m.n_elements() {
            let g = m.element_geometry(e);
            let p = m.element_points(e);
            for i in 0..p.len() {
                let t = p[(i + 1) % p.len()] - p[i];
                prop_assert!((g.normals[i].norm() - 1.0).abs() <= 1e-14);
                prop_assert!(g.normals[i].dot(&t).abs() <= 1e-14 * t.norm());
            }
        }
    }

    #[test]
    fn mesh_file_round_trip_is_exact(kind in 0u8..3, seed in 0u64..10_000) {
        let m = refined_mesh(kind, seed);
        let back = io::parse_mesh(&io::mesh_to_string(&m), std::path::Path::new("mem")).unwrap();
        prop_assert_eq!(back.vertices(), m.vertices());
        prop_assert_eq!(back.elements(), m.elements());
        prop_assert_eq!(back.cracks(), m.cracks());
    }

    #[test]
    fn patch_test_survives_mixed_refinement(kind in 0u8..3, seed in 0u64..10_000) {
        let m = refined_mesh(kind, seed);
        let field = random_linear(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let sol = solve_problem(&m, &field.material, 1.0, &outer_fixed(&m, field)).unwrap();
        let scale = field.offset.norm() + 2e-3;
        for v in 0..m.n_vertices() {
            prop_assert!((sol.nodal(v) - field.displacement(m.vertex(v))).norm() <= 1e-9 * scale);
        }
        let s = field.stress(Vec2::zeros());
        for st in &sol.stresses {
            prop_assert!((st - s).norm() <= 1e-9 * s.norm());
        }
    }

    #[test]
    fn linear_fields_have_zero_estimated_error(kind in 0u8..3, seed in 0u64..10_000) {
        let m = refined_mesh(kind, seed);
        let field = random_linear(&mut ChaCha8Rng::seed_from_u64(seed));
        let sol = solve_problem(&m, &field.material, 1.0, &outer_fixed(&m, field)).unwrap();
        let rec = recover(&m, &sol).unwrap();
        let n = error_norms(&m, &sol, &rec, None).unwrap();
        prop_assert!(n.eta <= 1e-9, "eta {}", n.eta);
    }

    #[test]
    fn reactions_balance_the_applied_load(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = refined_mesh(1, seed);
        let mut bcs = BoundaryConditionSet::default();
        fix_tagged(&m, &mut bcs, &[tags::LEFT], &[0, 1], &|_| Vec2::zeros());
        let (tx, ty) = (rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        bcs.traction(tags::RIGHT, move |p| Vec2::new(tx, ty * p.y));
        bcs.body_force = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let sol = solve_problem(&m, &Material::new(1e3, 0.3, PlaneState::PlaneStrain).unwrap(), 1.0, &bcs).unwrap();
        let applied: f64 = sol.load.iter().map(|f| f.abs()).sum();
        prop_assert!(sol.force_balance().norm() <= 1e-8 * applied);
    }

    #[test]
    fn nvb_output_is_conforming(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = base_mesh(0, seed);
        for _ in 0..4 {
            let marked: Vec<usize> = (0..m.n_elements()).filter(|_| rng.random_bool(0.25)).collect();
            m = nvb_refine(&m, &marked).unwrap();
            prop_assert!(m.hanging_nodes().is_empty());
            prop_assert!((m.total_area() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn empty_marking_is_the_identity(kind in 0u8..3, seed in 0u64..10_000, scheme in 0u8..3) {
        let m = refined_mesh(kind, seed);
        let scheme = [Scheme::Nvb, Scheme::Midpoint, Scheme::Polytree][scheme as usize];
        prop_assume!(scheme != Scheme::Nvb || m.elements().iter().all(|e| e.len() == 3));
        prop_assert_eq!(refine(&m, scheme, &[]).unwrap().0, m);
    }

    #[test]
    fn dorfler_set_is_scale_invariant(ind in prop::collection::vec(0.0f64..10.0, 1..40), theta in 0.05f64..1.0, s in 1e-6f64..1e6) {
        let scaled: Vec<f64> = ind.iter().map(|x| x * s).collect();
        prop_assert_eq!(dorfler_mark(&ind, theta), dorfler_mark(&scaled, theta));
    }

    #[test]
    fn element_energy_is_exact_for_linear_fields(seed in 0u64..100_000, gamma_k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=12);
        let pts = common::star_polygon(&mut rng, n);
        let mat = common::material(&mut rng);
        let gamma = [0.1, 1.0, 10.0][gamma_k];
        let k = stiffness_of(&pts, &mat, gamma).unwrap();
        let grad = Matrix2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let c = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let u = DVector::from_iterator(2 * n, pts.iter().flat_map(|p| { let d = grad * p + c; [d.x, d.y] }));
        let eps = Vector3::new(grad[(0, 0)], grad[(1, 1)], grad[(0, 1)] + grad[(1, 0)]);
        let exact = k.projection.geometry.area * eps.dot(&(mat.constitutive() * eps));
        let energy = u.dot(&(&k.k_local * &u));
        prop_assert!((energy - exact).abs() <= 1e-10 * exact.abs().max(1e-300) + 1e-12 * common::max_abs(k.k_local.iter()) * u.norm_squared());

        // exactly three rigid modes for every stabilization weight
        let mut eig: Vec<f64> = k.k_local.clone().symmetric_eigenvalues().iter().map(|v| v.abs()).collect();
        eig.sort_by(f64::total_cmp);
        let top = *eig.last().unwrap();
        prop_assert_eq!(eig.iter().filter(|&&v| v < 1e-9 * top).count(), 3);
    }

    #[test]
    fn stabilization_weight_is_scale_invariant(seed in 0u64..100_000, s in 1e-3f64..1e3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=12);
        let pts = common::star_polygon(&mut rng, n);
        let mat = common::material(&mut rng);
        let a = stiffness_of(&pts, &mat, 1.0).unwrap();
        let scaled: Vec<Vec2> = pts.iter().map(|p| p * s).collect();
        let b = stiffness_of(&scaled, &mat, 1.0).unwrap();
        prop_assert!((a.alpha_star - b.alpha_star).abs() <= 1e-9 * a.alpha_star);
        // plane stiffness is dimensionless in length, so the matrices agree too
        let diff = (&a.k_local - &b.k_local).abs().max();
        prop_assert!(diff <= 1e-8 * a.k_local.abs().max());
    }

    #[test]
    fn timoshenko_stress_is_in_equilibrium(x in 0.0f64..48.0, y in -6.0f64..6.0) {
        let b = TimoshenkoBeam { length: 48.0, depth: 12.0, ..TimoshenkoBeam::default() };
        let h = 1e-4;
        let s = |x: f64, y: f64| b.timoshenko_stress(x, y);
        let dsx = (s(x + h, y) - s(x - h, y)) / (2.0 * h);
        let dsy = (s(x, y + h) - s(x, y - h)) / (2.0 * h);
        let scale = s(0.0, 0.5 * b.depth).norm() / b.depth;
        // stresses are at most cubic, so central differences are exact up to rounding
        prop_assert!((dsx[0] + dsy[2]).abs() <= 1e-6 * scale);
        prop_assert!((dsx[2] + dsy[1]).abs() <= 1e-6 * scale);
    }

    #[test]
    fn slanted_sifs_complementary_angles(beta in 0.0f64..std::f64::consts::FRAC_PI_2, alpha in 0.0f64..1.0, sigma in 1.0f64..1e4, a in 0.01f64..10.0) {
        let (k1, _) = slanted_sifs(sigma, a, alpha, beta);
        let (k1c, _) = slanted_sifs(sigma, a, alpha, std::f64::consts::FRAC_PI_2 - beta);
        let reference = sigma * (std::f64::consts::PI * a).sqrt() * (1.0 + alpha);
        prop_assert!((k1 + k1c - reference).abs() <= 1e-14 * reference * 4.0);
    }

    #[test]
    fn crack_insertion_adds_the_expected_vertices(nx in 3usize..8, ny in 3usize..8, i_frac in 0.2f64..0.8, j_frac in 0.2f64..0.8, on_grid in any::<bool>()) {
        let m = generate_structured(ElementKind::Q4, UNIT, nx, ny).unwrap();
        let i = ((i_frac * nx as f64) as usize).clamp(1, nx - 1);
        let j = ((j_frac * ny as f64) as usize).clamp(1, ny - 1);
        let (h, k) = (1.0 / nx as f64, 1.0 / ny as f64);
        let (end, y, added) = if on_grid {
            // path through i + 1 existing vertices; all but the tip are split
            (i as f64 * h, j as f64 * k, i)
        } else {
            // i + 1 new edge crossings, each split, plus the tip and the far end
            // of its extension to the tip element boundary
            ((i as f64 + 0.5) * h, (j as f64 + 0.5) * k, 2 * (i + 1) + 2)
        };
        let c = insert_crack(&m, &[Vec2::new(0.0, y), Vec2::new(end, y)]).unwrap();
        prop_assert_eq!(c.n_vertices(), m.n_vertices() + added);
        prop_assert!((c.total_area() - 1.0).abs() <= 1e-12);
    }
}

/// Cracked 2×2 square, crack from the left edge to the centre, rotated by
/// `phi` about the origin.
fn rotated_cracked_square(phi: f64) -> PolyMesh {
    let base = generate_structured(ElementKind::Q4, Rect::new(-1.0, -1.0, 1.0, 1.0), 24, 24).unwrap();
    let rot = nalgebra::Rotation2::new(phi);
    let mut parts = base.to_parts();
    for v in parts.vertices.iter_mut() {
        *v = rot * *v;
    }
    let rotated = PolyMesh::from_parts(parts).unwrap();
    insert_crack(&rotated, &[rot * Vec2::new(-1.0, 0.0), Vec2::zeros()]).unwrap()
}

fn imposed_sifs(phi: f64, k1: f64, k2: f64) -> (f64, f64, f64) {
    let mesh = rotated_cracked_square(phi);
    let material = Material::new(1e3, 0.3, PlaneState::PlaneStrain).unwrap();
    let field = NearTipField { k1, k2, material, origin: Vec2::zeros(), angle: phi };
    let sol = Solution::from_displacement(&mesh, &material, common::interpolate(&mesh, &field, Vec2::zeros())).unwrap();
    let s = compute_sifs(&mesh, &sol, mesh.tips()[0], 4.0).unwrap();
    (s.k1, s.k2, s.theta)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sifs_are_frame_objective(phi in -3.1f64..3.1, k2 in -1.0f64..1.0) {
        let (a1, a2, at) = imposed_sifs(0.0, 1.0, k2);
        let (b1, b2, bt) = imposed_sifs(phi, 1.0, k2);
        let scale = a1.abs().max(a2.abs());
        prop_assert!((a1 - b1).abs() <= 1e-6 * scale, "{a1} {b1}");
        prop_assert!((a2 - b2).abs() <= 1e-6 * scale, "{a2} {b2}");
        prop_assert!((at - bt).abs() <= 1e-6);
    }

    #[test]
    fn sifs_scale_with_the_load(s in 1e-3f64..1e3) {
        let p = EdgeCrackProblem::default();
        let m = p.initial_mesh(MeshFamily::T3, 0, 1).unwrap();
        let bcs = p.boundary_conditions(&m).unwrap();
        let tip = p.tip(&m).unwrap();
        let base = compute_sifs(&m, &solve_problem(&m, &p.material(), 1.0, &bcs).unwrap(), tip, 4.0).unwrap();
        let scaled = compute_sifs(&m, &solve_problem(&m, &p.material(), 1.0, &bcs.scaled(s)).unwrap(), tip, 4.0).unwrap();
        prop_assert!((scaled.k1 - s * base.k1).abs() <= 1e-8 * s * base.k1.abs());
        prop_assert!((scaled.k2 - s * base.k2).abs() <= 1e-8 * s * base.k1.abs());
        prop_assert!((scaled.theta - base.theta).abs() <= 1e-8);
    }
}

#[test]
fn imposed_pure_modes_decouple() {
    let (k1, k2, _) = imposed_sifs(0.3, 1.0, 0.0);
    assert!(k2.abs() < 0.03 * k1, "mode I: {k1} {k2}");
    let (k1, k2, _) = imposed_sifs(0.3, 0.0, 1.0);
    assert!(k1.abs() < 0.03 * k2.abs(), "mode II: {k1} {k2}");
    assert!((k2 - 1.0).abs() < 0.03);
}

#[test]
fn assembly_of_a_refined_mesh_is_bitwise_repeatable() {
    let m = refined_mesh(2, 77);
    let mat = Material::new(1.0, 0.3, PlaneState::PlaneStress).unwrap();
    let a = assemble(&m, &mat, 1.0).unwrap();
    let b = assemble(&m, &mat, 1.0).unwrap();
    let bits = |x: &polyfrac::system::Assembly| (x.matrix.row_ptr.clone(), x.matrix.col_idx.clone(), x.matrix.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    assert_eq!(bits(&a), bits(&b));
}

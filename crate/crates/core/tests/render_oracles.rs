use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use berrysynth::geometry::{
    apply_pose, primitives, Camera, Pose, Quat, TriMesh, Vec3, BACKGROUND_CLASS, RIPE_CLASS,
};
use berrysynth::labeler::{extract_labels, visibility_fraction, InstanceInfo};
use berrysynth::render::{rasterize, Material, RenderSettings, NO_INSTANCE};
use berrysynth::scenegen::{build_leaf_mesh, LightingMode};

fn camera(w: u32, h: u32) -> Camera {
    Camera::look_at(Vec3::ZERO, Vec3::new(0.0, 0.0, -1.0), Vec3::Y, 90.0, w, h).unwrap()
}

fn triangle(a: Vec3, b: Vec3, c: Vec3, instance_id: u32) -> TriMesh {
    TriMesh {
        vertices: vec![a, b, c],
        triangles: vec![[0, 1, 2]],
        face_material: vec![0],
        materials: vec![Material::default()],
        instance_id,
        class_id: RIPE_CLASS,
    }
}

fn quad(x0: f64, x1: f64, y0: f64, y1: f64, depth: f64, instance_id: u32, class_id: u8) -> TriMesh {
    TriMesh {
        vertices: vec![
            Vec3::new(x0, y0, -depth),
            Vec3::new(x1, y0, -depth),
            Vec3::new(x1, y1, -depth),
            Vec3::new(x0, y1, -depth),
        ],
        triangles: vec![[0, 1, 2], [0, 2, 3]],
        face_material: vec![0, 0],
        materials: vec![Material::default()],
        instance_id,
        class_id,
    }
}

/// Möller–Trumbore; returns (t, smallest barycentric coordinate).
fn ray_hit(origin: Vec3, dir: Vec3, a: Vec3, b: Vec3, c: Vec3) -> Option<(f64, f64)> {
    let e1 = b - a;
    let e2 = c - a;
    let p = dir.cross(e2);
    let det = e1.dot(p);
    if det.abs() < 1e-14 {
        return None;
    }
    let s = origin - a;
    let u = s.dot(p) / det;
    let q = s.cross(e1);
    let v = dir.dot(q) / det;
    let t = e2.dot(q) / det;
    let w = 1.0 - u - v;
    Some((t, u.min(v).min(w)))
}

#[test]
fn depth_buffer_matches_ray_casting() {
    let (w, h) = (48u32, 36u32);
    let cam = camera(w, h);
    let f = cam.focal_px();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0usize;
    for _ in 0..25 {
        let meshes: Vec<TriMesh> = (0..6)
            .map(|k| {
                let mut v = || {
                    let z = rng.random_range(1.0..8.0);
                    Vec3::new(rng.random_range(-z..z), rng.random_range(-z..z), -z)
                };
                triangle(v(), v(), v(), k + 1)
            })
            .collect();
        let fb = rasterize(
            &meshes,
            &cam,
            LightingMode::StrongCentral,
            &RenderSettings::with_size(w, h),
        )
        .unwrap();
        for y in 0..h {
            for x in 0..w {
                let px = f64::from(x) + 0.5 - f64::from(w) / 2.0;
                let py = f64::from(h) / 2.0 - (f64::from(y) + 0.5);
                // forward component 1, so t is view depth
                let dir = cam.forward() + cam.right() * (px / f) + cam.true_up() * (py / f);
                let mut hits: Vec<(f64, u32)> = Vec::new();
                let mut ambiguous = false;
                for m in &meshes {
                    let [a, b, c] = [m.vertices[0], m.vertices[1], m.vertices[2]];
                    if let Some((t, margin)) = ray_hit(cam.eye(), dir, a, b, c) {
                        if margin.abs() < 1e-6 {
                            ambiguous = true;
                        } else if margin > 0.0 && t > 0.0 {
                            hits.push((t, m.instance_id));
                        }
                    }
                }
                hits.sort_by(|a, b| a.0.total_cmp(&b.0));
                if ambiguous || (hits.len() > 1 && hits[1].0 - hits[0].0 < 1e-9) {
                    continue;
                }
                let i = fb.index(x, y);
                match hits.first() {
                    None => assert_eq!(fb.instance[i], NO_INSTANCE, "({x},{y}) should be empty"),
                    Some(&(t, id)) => {
                        assert_eq!(fb.instance[i], id, "({x},{y})");
                        assert!(
                            (fb.depth[i] - t).abs() <= 1e-9 * t,
                            "({x},{y}) depth {} vs {t}",
                            fb.depth[i]
                        );
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 25 * 48 * 36 * 9 / 10);
}

#[test]
fn sphere_covers_its_projected_disc() {
    let (w, h) = (400u32, 400u32);
    let cam = Camera::look_at(Vec3::new(0.0, 0.0, 10.0), Vec3::ZERO, Vec3::Y, 40.0, w, h).unwrap();
    for radius in [1.0, 2.0] {
        let sphere = primitives::uv_sphere(radius, 64, 32, 1, RIPE_CLASS);
        let fb = rasterize(
            &[sphere],
            &cam,
            LightingMode::StrongCentral,
            &RenderSettings::with_size(w, h),
        )
        .unwrap();
        let alpha = (radius / 10.0_f64).asin();
        let expected = std::f64::consts::PI * (cam.focal_px() * alpha.tan()).powi(2);
        let got = fb.count_instance(1) as f64;
        assert!(
            (got - expected).abs() / expected < 0.05,
            "r={radius}: {got} vs {expected}"
        );
    }
}

#[test]
fn occluder_covering_half_gives_half_visibility() {
    // fruit quad spans pixels 16..48; the occluder hides columns 16..32
    let (w, h) = (64u32, 64u32);
    let cam = camera(w, h);
    let fruit = quad(-0.5, 0.5, -0.5, 0.5, 1.0, 1, RIPE_CLASS);
    let leaf = quad(-0.25, 0.0, -0.5, 0.5, 0.5, 100, BACKGROUND_CLASS);
    let s = RenderSettings::with_size(w, h);
    let scene = rasterize(&[fruit.clone(), leaf], &cam, LightingMode::ModerateSide, &s).unwrap();
    let solo = rasterize(&[fruit], &cam, LightingMode::ModerateSide, &s).unwrap();
    assert_eq!(solo.count_instance(1), 32 * 32);
    assert_eq!(visibility_fraction(&scene, &solo, 1).unwrap(), 0.5);

    let info = BTreeMap::from([
        (
            1,
            InstanceInfo {
                class_id: RIPE_CLASS,
                solo_pixels: Some(solo.count_instance(1) as u64),
            },
        ),
        (
            100,
            InstanceInfo {
                class_id: BACKGROUND_CLASS,
                solo_pixels: None,
            },
        ),
    ]);
    let ann = extract_labels("half", &scene, &info, 0.25).unwrap();
    assert_eq!(ann.labels.len(), 1);
    let l = &ann.labels[0];
    assert_eq!(l.visibility, 0.5);
    assert_eq!(
        (l.bbox.x_min, l.bbox.y_min, l.bbox.x_max, l.bbox.y_max),
        (32.0, 16.0, 48.0, 48.0)
    );
    assert!(extract_labels("half", &scene, &info, 0.6)
        .unwrap()
        .labels
        .is_empty());
}

#[test]
fn leaf_in_front_of_fruit_reduces_visibility() {
    let (w, h) = (120u32, 120u32);
    let cam = Camera::look_at(Vec3::new(0.0, 6.0, 0.0), Vec3::ZERO, Vec3::Z, 60.0, w, h).unwrap();
    let fruit = primitives::uv_sphere(0.8, 24, 12, 1, RIPE_CLASS);
    let mut leaf = build_leaf_mesh(5);
    leaf.instance_id = 100;
    let leaf = apply_pose(&leaf, &Pose::new(Quat::IDENTITY, Vec3::new(0.0, 2.0, 0.0)));
    let s = RenderSettings::with_size(w, h);
    let scene = rasterize(
        &[fruit.clone(), leaf],
        &cam,
        LightingMode::StrongCentral,
        &s,
    )
    .unwrap();
    let solo = rasterize(&[fruit], &cam, LightingMode::StrongCentral, &s).unwrap();
    let v = visibility_fraction(&scene, &solo, 1).unwrap();
    assert!(v < 1.0, "visibility {v}");
}

#[test]
fn mesh_order_does_not_change_the_image() {
    let cam = camera(40, 40);
    let a = quad(-0.6, 0.2, -0.6, 0.2, 2.0, 1, RIPE_CLASS);
    // same depth and overlapping: the tie must not depend on input order
    let b = quad(-0.2, 0.6, -0.2, 0.6, 2.0, 2, RIPE_CLASS);
    let s = RenderSettings::with_size(40, 40);
    let x = rasterize(
        &[a.clone(), b.clone()],
        &cam,
        LightingMode::StrongCentral,
        &s,
    )
    .unwrap();
    let y = rasterize(&[b, a], &cam, LightingMode::StrongCentral, &s).unwrap();
    assert_eq!(x.instance, y.instance);
    assert_eq!(x.rgb, y.rgb);
}

mod support;

use frenet_ife::geometry::{CurveSpec, FrenetChart, Side, Vec2};
use frenet_ife::mesh::{classify_elements, Element, RectMesh};
use frenet_ife::quadrature::{cut_cell_rule, cut_edge_rule, gauss_rect};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{adaptive_simpson as adaptive, chart, circle, disk_box_area};

fn cut_element(mesh: &RectMesh, chart: &FrenetChart, lo: Vec2) -> (Element, frenet_ife::mesh::InterfaceCut) {
    let cls = classify_elements(mesh, chart).unwrap();
    let id = mesh.locate(lo + Vec2::new(1e-9, 1e-9));
    let el = mesh.elements[id].clone();
    assert!((el.lo - lo).norm() < 1e-14);
    (el, cls.tags[id].cut().expect("interface element").clone())
}

#[test]
fn curved_area_matches_adaptive_oracle() {
    let ch = circle(0.6);
    // elements of size 0.25 x 0.25: [0.25,0.75]x[0,0.5] is covered by a 2x2 mesh block
    let mesh = RectMesh::new(Vec2::new(0.25, 0.0), Vec2::new(0.75, 0.5), 1, 1).unwrap();
    let (el, cut) = cut_element(&mesh, &ch, Vec2::new(0.25, 0.0));
    let bp = 0.11f64.sqrt();
    let height = |x: f64| (0.36 - x * x).max(0.0).sqrt().clamp(0.0, 0.5);
    let oracle = adaptive(height, 0.25, bp, 1e-15) + adaptive(height, bp, 0.6, 1e-15);
    let inside = cut_cell_rule(&ch, &el, &cut, Side::Minus, 10).unwrap();
    let outside = cut_cell_rule(&ch, &el, &cut, Side::Plus, 10).unwrap();
    assert!((inside.measure() - oracle).abs() < 1e-10, "{} vs {}", inside.measure(), oracle);
    assert!((inside.measure() + outside.measure() - el.area()).abs() < 1e-12);
    assert!(inside.weights.iter().chain(&outside.weights).all(|&w| w > 0.0));
    assert!((disk_box_area(Vec2::zeros(), 0.6, el.lo, el.hi) - oracle).abs() < 1e-13);
}

#[test]
fn every_circle_cut_area_matches_oracle() {
    let ch = circle(0.6);
    let mesh = RectMesh::square(-1.0, 1.0, 16).unwrap();
    let cls = classify_elements(&mesh, &ch).unwrap();
    for id in cls.interface_elements() {
        let el = &mesh.elements[id];
        let rule = cut_cell_rule(&ch, el, cls.tags[id].cut().unwrap(), Side::Minus, 10).unwrap();
        let oracle = disk_box_area(Vec2::zeros(), 0.6, el.lo, el.hi);
        assert!((rule.measure() - oracle).abs() < 1e-10, "element {id}: {} vs {oracle}", rule.measure());
    }
}

#[test]
fn cut_rules_are_additive_on_q5() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let specs = [
        CurveSpec::Circle {
            center: [0.0, 0.0],
            radius: 0.6,
        },
        CurveSpec::Ellipse {
            center: [0.037, -0.021],
            semi_axes: [0.7, 0.45],
        },
        CurveSpec::Flower {
            center: [0.0, 0.0],
            r0: 0.55,
            amplitude: 0.08,
            lobes: 5,
        },
    ];
    for spec in specs {
        let ch = chart(spec);
        let mesh = RectMesh::square(-1.0, 1.0, 32).unwrap();
        let cls = classify_elements(&mesh, &ch).unwrap();
        for id in cls.interface_elements() {
            let el = &mesh.elements[id];
            let cut = cls.tags[id].cut().unwrap();
            let c: Vec<f64> = (0..36).map(|_| rng.random_range(-1.0..1.0)).collect();
            let p = |x: Vec2| {
                let mut s = 0.0;
                for j in 0..6 {
                    for i in 0..6 {
                        s += c[6 * j + i] * x.x.powi(i as i32) * x.y.powi(j as i32);
                    }
                }
                s
            };
            let full = gauss_rect(el.lo, el.hi, 3).integrate(p);
            let minus = cut_cell_rule(&ch, el, cut, Side::Minus, 10).unwrap();
            let plus = cut_cell_rule(&ch, el, cut, Side::Plus, 10).unwrap();
            let split = minus.integrate(p) + plus.integrate(p);
            let norm: f64 = c.iter().map(|v| v.abs()).sum::<f64>() * el.area();
            assert!((split - full).abs() <= 1e-12 * norm, "element {id}: {split} vs {full}");
            assert!(minus.measure() > 0.0 && plus.measure() > 0.0);
        }
    }
}

#[test]
fn straight_cut_gives_exact_trapezoids() {
    let ch = chart(CurveSpec::Line {
        point: [0.0, 0.3],
        direction: [1.0, 0.5],
        extent: 10.0,
    });
    let mesh = RectMesh::square(0.0, 1.0, 1).unwrap();
    let (el, cut) = cut_element(&mesh, &ch, Vec2::new(0.0, 0.0));
    // below the line y = 0.3 + x/2 is the plus side (normal points down-right)
    let below = 0.3 + 0.25;
    let plus = cut_cell_rule(&ch, &el, &cut, Side::Plus, 3).unwrap();
    let minus = cut_cell_rule(&ch, &el, &cut, Side::Minus, 3).unwrap();
    assert!((plus.measure() - below).abs() < 1e-14);
    assert!((minus.measure() - (1.0 - below)).abs() < 1e-14);
}

#[test]
fn curved_area_converges_under_q_refinement() {
    let ch = circle(0.6);
    let mesh = RectMesh::new(Vec2::new(0.25, 0.0), Vec2::new(0.75, 0.5), 1, 1).unwrap();
    let (el, cut) = cut_element(&mesh, &ch, Vec2::new(0.25, 0.0));
    let exact = cut_cell_rule(&ch, &el, &cut, Side::Minus, 16).unwrap().measure();
    let errs: Vec<f64> = (1..=4)
        .map(|q| (cut_cell_rule(&ch, &el, &cut, Side::Minus, q).unwrap().measure() - exact).abs())
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0] * 0.2 || w[1] < 1e-14, "{errs:?}");
    }
}

#[test]
fn edge_rules() {
    let ch = circle(0.6);
    let mesh = RectMesh::square(-1.0, 1.0, 16).unwrap();
    let cls = classify_elements(&mesh, &ch).unwrap();
    let mut cut_seen = false;
    for (e, cut) in mesh.edges.iter().zip(&cls.edges) {
        let pts = cut_edge_rule(e, cut, 4);
        let total: f64 = pts.iter().map(|p| p.weight).sum();
        assert!((total - e.length()).abs() < 1e-14);
        if cut.crossings.is_empty() {
            assert_eq!(pts.len(), 4);
        } else {
            cut_seen = true;
            for p in &pts {
                let r = p.x.norm();
                assert_eq!(p.side, if r < 0.6 { Side::Minus } else { Side::Plus });
            }
        }
    }
    assert!(cut_seen);
}

use proptest::prelude::*;

use lozi_lab::geom::{convex_hull, orient, point_in_polygon, split_at_fold, Chain, Containment, Fold, Point, Polyline, SimplePolygon};
use lozi_lab::map::{NumericMode, Params};
use lozi_lab::numeric::{Scalar, Sign};
use lozi_lab::trap::polygon_image;

fn params() -> impl Strategy<Value = Params> {
    // b in (0, 1), a in (1 − b, 1 + b)
    (1i64..20, 1i64..40).prop_map(|(j, i)| {
        let b = num_rational::BigRational::new(j.into(), 20.into());
        let a = &(num_rational::BigRational::from_integer(1.into()) - &b) + &(&b * num_rational::BigRational::new(i.into(), 20.into()));
        Params::new(a, b, NumericMode::Exact).unwrap()
    })
}

fn point(range: i64) -> impl Strategy<Value = Point> {
    (-range..range, -range..range).prop_map(|(x, y)| Point::from_ratios(x, 16, y, 16))
}

/// Star-shaped polygon: one vertex per angular sector around the origin.
fn star_polygon() -> impl Strategy<Value = SimplePolygon> {
    (3usize..10, -8i64..8, -8i64..8).prop_flat_map(|(k, cx, cy)| {
        prop::collection::vec((0.15f64..0.85, 0.5f64..2.0), k).prop_map(move |v| {
            let pts = v
                .iter()
                .enumerate()
                .map(|(i, (u, r))| {
                    let th = std::f64::consts::TAU * (i as f64 + u) / v.len() as f64;
                    let x = (cx as f64 / 8.0 + r * th.cos()) * 1024.0;
                    let y = (cy as f64 / 8.0 + r * th.sin()) * 1024.0;
                    Point::from_ratios(x.round() as i64, 1024, y.round() as i64, 1024)
                })
                .collect();
            SimplePolygon::new(pts).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_step(p in params(), q in point(64)) {
        let img = p.step(&q).unwrap();
        prop_assert_eq!(p.step_inverse(&img).unwrap(), q.clone());
        prop_assert_eq!(p.apply(&q, -3).and_then(|r| p.apply(&r, 3)).unwrap(), q);
    }

    #[test]
    fn area_scales_by_b(p in params(), poly in star_polygon()) {
        let img = polygon_image(&p, &poly, 1).unwrap();
        prop_assert_eq!(img.area(), &poly.area() * p.b());
        let back = polygon_image(&p, &img, -1).unwrap();
        prop_assert_eq!(back.area(), poly.area());
    }

    #[test]
    fn split_at_fold_is_idempotent(p in params(), pts in prop::collection::vec(point(48), 2..8)) {
        prop_assume!(Polyline::new(pts.clone()).is_ok());
        let line = Polyline::new(pts).unwrap();
        for f in [Fold::YAxis, Fold::XAxis, Fold::PreimageOfYAxis { a: p.a().clone() }] {
            let once = split_at_fold(&line, &f).unwrap();
            prop_assert_eq!(split_at_fold(&once, &f).unwrap(), once.clone());
            prop_assert_eq!(once.first(), line.first());
            prop_assert_eq!(once.last(), line.last());
        }
    }

    #[test]
    fn point_in_convex_polygon_matches_half_planes(pts in prop::collection::vec(point(40), 3..12), q in point(48)) {
        let hull = convex_hull(&pts).unwrap();
        prop_assume!(hull.len() >= 3);
        let poly = SimplePolygon::new(hull).unwrap();
        let v = poly.vertices();
        let mut want = Containment::Interior;
        for i in 0..v.len() {
            match orient(&v[i], &v[(i + 1) % v.len()], &q).unwrap() {
                Sign::Negative => { want = Containment::Exterior; break; }
                Sign::Zero => want = Containment::Boundary,
                Sign::Positive => {}
            }
        }
        prop_assert_eq!(point_in_polygon(&q, &poly).unwrap(), want);
    }

    #[test]
    fn polygon_area_is_positive_and_translation_invariant(poly in star_polygon(), dx in -32i64..32) {
        prop_assert_eq!(poly.area().sign().unwrap(), Sign::Positive);
        let shift = Scalar::ratio(dx, 8);
        let moved: Vec<Point> = poly.vertices().iter().map(|p| Point::new(p.x() + &shift, p.y().clone())).collect();
        prop_assert_eq!(SimplePolygon::new(moved).unwrap().area(), poly.area());
    }
}

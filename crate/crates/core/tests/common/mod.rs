#![allow(dead_code)]

use num_complex::Complex64;
use polylift::kernels::Point;
use polylift::tpoly::{MultiIndex, TrigPoly};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn arb_complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| c(a, b))
}

/// Laurent polynomial with exponents in `[-deg, deg]` per axis.
pub fn arb_poly(dim: usize, deg: i32, max_terms: usize) -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((prop::collection::vec(-deg..=deg, dim), arb_complex(1.0)), 1..=max_terms)
        .prop_map(move |terms| TrigPoly::from_terms(dim, terms.into_iter().map(|(k, a)| (MultiIndex::new(k), a))).unwrap())
}

/// Polynomial with exponents in `[0, deg]` per axis.
pub fn arb_analytic(dim: usize, deg: i32, max_terms: usize) -> impl Strategy<Value = TrigPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, dim), arb_complex(1.0)), 1..=max_terms)
        .prop_map(move |terms| TrigPoly::from_terms(dim, terms.into_iter().map(|(k, a)| (MultiIndex::new(k), a))).unwrap())
}

/// Point with every coordinate of modulus below `radius`.
pub fn arb_point(dim: usize, radius: f64) -> impl Strategy<Value = Point> {
    prop::collection::vec((0.0..radius, 0.0..std::f64::consts::TAU), dim)
        .prop_map(|v| Point::new(v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect()).unwrap())
}

/// Pairwise separated points.
pub fn arb_points(dim: usize, radius: f64, count: std::ops::RangeInclusive<usize>, separation: f64) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(arb_point(dim, radius), count).prop_filter("separated", move |pts| {
        pts.iter().enumerate().all(|(i, p)| {
            pts[i + 1..].iter().all(|q| {
                p.coords().iter().zip(q.coords()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() > separation
            })
        })
    })
}

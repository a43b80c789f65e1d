//! Property checks for the cone-order layer: partial-order axioms up to
//! tolerance, exact translation/scale invariance, and norm monotonicity on
//! the nonnegative orthant.
//!
//! Exact-rational spaces carry zero tolerance, so their properties are
//! asserted with no slack at all; float spaces use generating margins well
//! clear of both the comparison tolerance and rounding noise, so a failure
//! means a real property violation rather than an unlucky ulp.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordfix_core::cone::{ConeKind, ConeSpec, Element, NormSpec, SpaceSpec};
use ordfix_core::scalar::rat;
use ordfix_core::Rational;

fn float_space(dim: usize, norm: NormSpec<f64>) -> SpaceSpec<f64> {
    SpaceSpec::new(ConeSpec::new(ConeKind::Componentwise { dim }), norm)
}

fn rational_space(dim: usize, norm: NormSpec<Rational>) -> SpaceSpec<Rational> {
    SpaceSpec::new(ConeSpec::new(ConeKind::Componentwise { dim }), norm)
}

fn random_vector(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect()
}

fn random_rational_vector(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..dim)
        .map(|_| rat(rng.random_range(lo..=hi), rng.random_range(1..=16)))
        .collect()
}

fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

#[test]
fn order_is_reflexive_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let space = float_space(6, NormSpec::sup_abs());
    for _ in 0..200 {
        let x = Element::vector(random_vector(&mut rng, 6, -5.0, 5.0));
        assert!(space.leq(&x, &x).unwrap());
    }
    let exact = rational_space(4, NormSpec::ell1());
    for _ in 0..200 {
        let x = Element::vector(random_rational_vector(&mut rng, 4, -40, 40));
        assert!(exact.leq(&x, &x).unwrap());
    }
    // The 2-D circular cone and function cones are reflexive too.
    let cone = ConeSpec::<f64>::new(ConeKind::IceCream2d);
    for _ in 0..200 {
        let x = Element::vector(random_vector(&mut rng, 2, -3.0, 3.0));
        assert!(cone.leq(&x, &x).unwrap());
    }
}

#[test]
fn mutual_comparability_pins_points_within_tolerance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let space = float_space(5, NormSpec::sup_abs());
    let tol = space.cone.tolerance;
    let mut both_ways = 0usize;
    for _ in 0..2000 {
        let x = random_vector(&mut rng, 5, -1.0, 1.0);
        // Half the trials perturb within tolerance, half vary freely.
        let y: Vec<f64> = if rng.random::<bool>() {
            x.iter()
                .map(|a| a + (rng.random::<f64>() - 0.5) * tol)
                .collect()
        } else {
            random_vector(&mut rng, 5, -1.0, 1.0)
        };
        let (ex, ey) = (Element::vector(x), Element::vector(y));
        if space.leq(&ex, &ey).unwrap() && space.leq(&ey, &ex).unwrap() {
            both_ways += 1;
            let gap = space.distance(&ex, &ey).unwrap();
            assert!(
                gap <= tol,
                "mutually comparable points must coincide up to tolerance, gap {gap}"
            );
        }
    }
    assert!(both_ways >= 500, "perturbed trials must actually exercise the branch");
}

#[test]
fn transitivity_is_exact_on_rational_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let orthant = rational_space(5, NormSpec::sup_abs());
    for _ in 0..400 {
        let x = random_rational_vector(&mut rng, 5, -20, 20);
        let step1: Vec<Rational> = random_rational_vector(&mut rng, 5, 0, 15);
        let step2: Vec<Rational> = random_rational_vector(&mut rng, 5, 0, 15);
        let y: Vec<Rational> = x.iter().zip(&step1).map(|(a, d)| a + d).collect();
        let z: Vec<Rational> = y.iter().zip(&step2).map(|(a, d)| a + d).collect();
        let (ex, ey, ez) = (
            Element::vector(x),
            Element::vector(y),
            Element::vector(z),
        );
        assert!(orthant.leq(&ex, &ey).unwrap());
        assert!(orthant.leq(&ey, &ez).unwrap());
        assert!(orthant.leq(&ex, &ez).unwrap(), "x <= y <= z must chain");
    }
    // Same discipline on the circular cone: increments chosen inside the
    // cone compose by convexity.
    let circular = SpaceSpec::new(
        ConeSpec::<Rational>::new(ConeKind::IceCream2d),
        NormSpec::ell1(),
    );
    for _ in 0..400 {
        let x = random_rational_vector(&mut rng, 2, -10, 10);
        let mut points = vec![x];
        for _ in 0..2 {
            let s = rat(rng.random_range(-8..=8), rng.random_range(1..=8));
            let slack = rat(rng.random_range(0..=5), 1);
            let t = if s < Rational::zero() { -&s } else { s.clone() } + slack;
            let prev = points.last().unwrap().clone();
            points.push(vec![&prev[0] + &s, &prev[1] + &t]);
        }
        let elems: Vec<Element<Rational>> =
            points.into_iter().map(Element::vector).collect();
        assert!(circular.leq(&elems[0], &elems[1]).unwrap());
        assert!(circular.leq(&elems[1], &elems[2]).unwrap());
        assert!(circular.leq(&elems[0], &elems[2]).unwrap());
    }
}

#[test]
fn order_is_invariant_under_translation_and_positive_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    // Exact path: any rational translation or positive rational scale
    // leaves comparisons untouched, with zero tolerance involved.
    let exact = rational_space(4, NormSpec::ell1());
    for _ in 0..300 {
        let x = random_rational_vector(&mut rng, 4, -30, 30);
        let y = random_rational_vector(&mut rng, 4, -30, 30);
        let z = random_rational_vector(&mut rng, 4, -30, 30);
        let alpha = rat(rng.random_range(1..=12), rng.random_range(1..=12));
        let base = exact
            .leq(&Element::vector(x.clone()), &Element::vector(y.clone()))
            .unwrap();
        let shifted_x: Vec<Rational> = x.iter().zip(&z).map(|(a, b)| a + b).collect();
        let shifted_y: Vec<Rational> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
        assert_eq!(
            exact
                .leq(&Element::vector(shifted_x), &Element::vector(shifted_y))
                .unwrap(),
            base,
            "translation must not change comparability"
        );
        let scaled_x: Vec<Rational> = x.iter().map(|a| a * &alpha).collect();
        let scaled_y: Vec<Rational> = y.iter().map(|a| a * &alpha).collect();
        assert_eq!(
            exact
                .leq(&Element::vector(scaled_x), &Element::vector(scaled_y))
                .unwrap(),
            base,
            "positive scaling must not change comparability"
        );
    }
    // Float path with margins: every difference component is at least 1e-6
    // away from zero, far beyond both tolerance and rounding noise.
    let space = float_space(4, NormSpec::sup_abs());
    for _ in 0..300 {
        let x = random_vector(&mut rng, 4, -1.0, 1.0);
        let diff: Vec<f64> = (0..4)
            .map(|_| {
                let magnitude = 1e-6 + rng.random::<f64>();
                if rng.random::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            })
            .collect();
        let y = add(&x, &diff);
        let z = random_vector(&mut rng, 4, -2.0, 2.0);
        let alpha = 0.25 + 4.0 * rng.random::<f64>();
        let base = space
            .leq(&Element::vector(x.clone()), &Element::vector(y.clone()))
            .unwrap();
        assert_eq!(base, diff.iter().all(|d| *d > 0.0));
        assert_eq!(
            space
                .leq(&Element::vector(add(&x, &z)), &Element::vector(add(&y, &z)))
                .unwrap(),
            base
        );
        let scale = |v: &[f64]| Element::vector(v.iter().map(|a| a * alpha).collect::<Vec<_>>());
        assert_eq!(space.leq(&scale(&x), &scale(&y)).unwrap(), base);
    }
}

#[test]
fn norms_are_monotone_between_zero_and_any_dominating_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for dim in [1usize, 3, 6] {
        let norms = [
            NormSpec::sup_abs(),
            NormSpec::ell1(),
            NormSpec::ellp(2.0),
            NormSpec::ellp(2.5),
        ];
        for norm in norms {
            let space = float_space(dim, norm);
            for _ in 0..1000 {
                // 0 <= x <= y by construction, with comfortable margins.
                let x = random_vector(&mut rng, dim, 0.001, 1.0);
                let bump = random_vector(&mut rng, dim, 0.001, 1.0);
                let y = add(&x, &bump);
                let (ex, ey) = (Element::vector(x), Element::vector(y));
                let zero = Element::vector(vec![0.0; dim]);
                assert!(space.leq(&zero, &ex).unwrap());
                assert!(space.leq(&ex, &ey).unwrap());
                let nx = space.norm(&ex).unwrap();
                let ny = space.norm(&ey).unwrap();
                assert!(
                    nx <= ny,
                    "norm must grow along the order: {nx} > {ny} in dim {dim}"
                );
            }
        }
    }
    // Exact rational check for the two norms defined without radicals.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for norm in [NormSpec::sup_abs(), NormSpec::ell1()] {
        let space = rational_space(4, norm);
        for _ in 0..400 {
            let x = random_rational_vector(&mut rng, 4, 0, 25);
            let bump = random_rational_vector(&mut rng, 4, 0, 25);
            let y: Vec<Rational> = x.iter().zip(&bump).map(|(a, d)| a + d).collect();
            let (ex, ey) = (Element::vector(x), Element::vector(y));
            assert!(space.norm(&ex).unwrap() <= space.norm(&ey).unwrap());
        }
    }
}

#[test]
fn cone_membership_is_closed_under_addition_and_nonnegative_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let orthant = ConeSpec::<Rational>::new(ConeKind::Componentwise { dim: 3 });
    let circular = ConeSpec::<Rational>::new(ConeKind::IceCream2d);
    for _ in 0..300 {
        // Orthant members: nonnegative coordinates.
        let u = random_rational_vector(&mut rng, 3, 0, 20);
        let v = random_rational_vector(&mut rng, 3, 0, 20);
        let sum: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let lambda = rat(rng.random_range(0..=9), rng.random_range(1..=9));
        let scaled: Vec<Rational> = u.iter().map(|a| a * &lambda).collect();
        assert!(orthant.contains(&Element::vector(u)).unwrap());
        assert!(orthant.contains(&Element::vector(v)).unwrap());
        assert!(orthant.contains(&Element::vector(sum)).unwrap());
        assert!(orthant.contains(&Element::vector(scaled)).unwrap());

        // Circular-cone members: |s| <= t by construction.
        let make = |rng: &mut ChaCha8Rng| {
            let s = rat(rng.random_range(-10..=10), rng.random_range(1..=6));
            let slack = rat(rng.random_range(0..=6), 1);
            let t = if s < Rational::zero() { -&s } else { s.clone() } + slack;
            vec![s, t]
        };
        let a = make(&mut rng);
        let b = make(&mut rng);
        let sum: Vec<Rational> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
        let scaled: Vec<Rational> = a.iter().map(|p| p * &lambda).collect();
        assert!(circular.contains(&Element::vector(a)).unwrap());
        assert!(circular.contains(&Element::vector(b)).unwrap());
        assert!(circular.contains(&Element::vector(sum)).unwrap());
        assert!(circular.contains(&Element::vector(scaled)).unwrap());
    }
}

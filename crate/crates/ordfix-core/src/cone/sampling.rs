//! Seeded random samplers for cone-order probes.
//!
//! All samplers are deterministic functions of the supplied RNG, so runs
//! seeded identically produce identical samples (and identical reports).

use rand::Rng;

use super::Element;

/// Pairs `(x, y)` with `0 <= x <= y` in the componentwise order on
/// `dim`-dimensional vectors.  Every `include_equal_every`-th pair (when
/// nonzero) has `x = y`, which drives the sampled normality ratio to 1.
pub fn componentwise_ordered_pairs(
    rng: &mut impl Rng,
    dim: usize,
    count: usize,
    include_equal_every: usize,
) -> Vec<(Element<f64>, Element<f64>)> {
    let mut pairs = Vec::with_capacity(count);
    for k in 0..count {
        // Bounded away from zero so ||y|| > 0 in every norm.
        let y: Vec<f64> = (0..dim).map(|_| 0.05 + rng.random::<f64>()).collect();
        let x: Vec<f64> = if include_equal_every != 0 && (k + 1) % include_equal_every == 0 {
            y.clone()
        } else {
            y.iter().map(|c| c * rng.random::<f64>()).collect()
        };
        pairs.push((Element::Vector(x), Element::Vector(y)));
    }
    pairs
}

/// An increasing sequence in the planar ice-cream cone `{|s| <= t}` whose
/// ell-1 norms stay `<= norm_bound` and whose tail is Cauchy.
///
/// Increments `(ds, dt)` satisfy `|ds| <= dt` (each step moves up in the
/// cone order) with a per-sequence drift sign, so the first coordinate
/// moves monotonically away from zero; step sizes decay geometrically,
/// which drives the tail defect of long sequences below any tolerance.
pub fn increasing_ice_cream_sequence(
    rng: &mut impl Rng,
    len: usize,
    norm_bound: f64,
) -> Vec<Element<f64>> {
    assert!(len >= 1, "sequence must be nonempty");
    assert!(norm_bound > 0.0, "norm bound must be positive");
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    let decay = 0.9 + 0.08 * rng.random::<f64>();
    // |s_k| + t_k <= sum of 2 dt over all steps; keep the total within the
    // bound with margin.
    let budget = 0.45 * norm_bound;
    let mut scale = budget * (1.0 - decay);
    let (mut s, mut t) = (0.0f64, 0.0f64);
    let mut out = Vec::with_capacity(len);
    out.push(Element::Vector(vec![s, t]));
    for _ in 1..len {
        let dt = scale * rng.random::<f64>();
        let ds = sign * dt * rng.random::<f64>();
        s += ds;
        t += dt;
        scale *= decay;
        out.push(Element::Vector(vec![s, t]));
    }
    out
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::cone::sequences::{cauchy_defect, normality_constant, regularity_probe, RegularityBound};
    use crate::cone::{ConeKind, ConeSpec, NormSpec, SpaceSpec};

    #[test]
    fn ordered_pairs_really_are_ordered() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cone = ConeSpec::<f64>::new(ConeKind::Componentwise { dim: 4 });
        let pairs = componentwise_ordered_pairs(&mut rng, 4, 200, 10);
        let constant = normality_constant(&cone, &NormSpec::ell1(), &pairs).unwrap();
        assert!(constant <= 1.0 + 1e-12);
        assert!(constant >= 1.0 - 1e-12, "equal pairs push the ratio to 1");
    }

    #[test]
    fn ice_cream_sequences_are_increasing_bounded_and_cauchy() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let space = SpaceSpec::new(
            ConeSpec::<f64>::new(ConeKind::IceCream2d),
            NormSpec::ell1(),
        );
        // Geometric steps bound the tail defect by 2 * budget * decay^tail
        // with decay <= 0.98 and budget = 0.45.
        let tail_bound = 0.9 * 0.98f64.powi(250);
        for _ in 0..20 {
            let seq = increasing_ice_cream_sequence(&mut rng, 300, 1.0);
            let report =
                regularity_probe(&space, &seq, &RegularityBound::Norm(1.0), 250).unwrap();
            assert!(report.defect < tail_bound, "defect {}", report.defect);
            assert!(
                cauchy_defect(&space, &seq, 0).unwrap() >= report.defect,
                "full-range defect dominates the tail defect"
            );
        }
    }

    #[test]
    fn samplers_are_deterministic_under_a_fixed_seed() {
        let a = componentwise_ordered_pairs(&mut ChaCha8Rng::seed_from_u64(7), 3, 5, 2);
        let b = componentwise_ordered_pairs(&mut ChaCha8Rng::seed_from_u64(7), 3, 5, 2);
        assert_eq!(a, b);
    }
}

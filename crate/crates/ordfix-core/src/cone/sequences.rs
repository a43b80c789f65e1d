//! Probes for increasing sequences in cone-ordered normed spaces:
//! Cauchy defects, regularity checks, suprema and normality constants.

use crate::scalar::Scalar;

use super::{ConeError, ConeSpec, Element, NormSpec, SpaceSpec};

/// Maximum pairwise distance among sequence members at indices
/// `>= tail_start`.  Exact for exact-scalar inputs.
pub fn cauchy_defect<S: Scalar>(
    space: &SpaceSpec<S>,
    sequence: &[Element<S>],
    tail_start: usize,
) -> Result<S, ConeError> {
    if tail_start >= sequence.len() {
        return Err(ConeError::BadParams(format!(
            "tail_start {tail_start} is past the end of a sequence of length {}",
            sequence.len()
        )));
    }
    let tail = &sequence[tail_start..];
    let mut defect = S::zero();
    for (i, x) in tail.iter().enumerate() {
        for y in &tail[i + 1..] {
            let d = space.distance(x, y)?;
            if d > defect {
                defect = d;
            }
        }
    }
    Ok(defect)
}

/// What "bounded" means for a [`regularity_probe`] run.
#[derive(Debug, Clone, PartialEq)]
pub enum RegularityBound<S> {
    /// Regularity: the sequence must stay `<=` this element.
    Order(Element<S>),
    /// Full regularity: norms must stay `<=` this value.
    Norm(S),
}

/// Outcome of a regularity probe.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport<S> {
    /// Number of sequence members checked.
    pub checked: usize,
    /// Index the Cauchy tail starts at.
    pub tail_start: usize,
    /// Maximum pairwise tail distance.
    pub defect: S,
}

/// Verifies that `sequence` is increasing and bounded in the sense of
/// `bound`, then reports the Cauchy defect of its tail.  A defect that
/// stays away from zero refutes norm convergence of the sequence.
pub fn regularity_probe<S: Scalar>(
    space: &SpaceSpec<S>,
    sequence: &[Element<S>],
    bound: &RegularityBound<S>,
    tail_start: usize,
) -> Result<RegularityReport<S>, ConeError> {
    if sequence.is_empty() {
        return Err(ConeError::BadParams("sequence must be nonempty".into()));
    }
    for (index, pair) in sequence.windows(2).enumerate() {
        if !space.leq(&pair[0], &pair[1])? {
            return Err(ConeError::NotIncreasing { index: index + 1 });
        }
    }
    for (index, x) in sequence.iter().enumerate() {
        let ok = match bound {
            RegularityBound::Order(b) => space.leq(x, b)?,
            RegularityBound::Norm(m) => {
                space.norm(x)? <= m.clone() + space.cone.tolerance.clone()
            }
        };
        if !ok {
            return Err(ConeError::BoundViolated { index });
        }
    }
    let defect = cauchy_defect(space, sequence, tail_start)?;
    Ok(RegularityReport {
        checked: sequence.len(),
        tail_start,
        defect,
    })
}

/// How one supplied upper-bound candidate relates to the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateCheck {
    pub index: usize,
    /// Whether the candidate bounds every sequence member.
    pub bounds_sequence: bool,
    /// Whether the computed limit lies below the candidate
    /// (only meaningful when `bounds_sequence`).
    pub dominates_limit: bool,
}

/// Result of [`sup_of_increasing_sequence`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupReport<S> {
    /// The numerical limit: the final tail element.
    pub limit: Element<S>,
    /// Cauchy defect of the tail that certified convergence.
    pub defect: S,
    /// Whether the limit dominates every sequence member.
    pub dominates_all: bool,
    /// Assessment of each supplied upper-bound candidate.
    pub candidates: Vec<CandidateCheck>,
}

/// Computes the numerical limit of an increasing, norm-convergent sequence
/// (its final element once the tail defect is below `eps`) and checks it
/// against the sequence and any supplied upper-bound candidates.
pub fn sup_of_increasing_sequence<S: Scalar>(
    space: &SpaceSpec<S>,
    sequence: &[Element<S>],
    candidates: &[Element<S>],
    tail_start: usize,
    eps: &S,
) -> Result<SupReport<S>, ConeError> {
    if sequence.is_empty() {
        return Err(ConeError::BadParams("sequence must be nonempty".into()));
    }
    for (index, pair) in sequence.windows(2).enumerate() {
        if !space.leq(&pair[0], &pair[1])? {
            return Err(ConeError::NotIncreasing { index: index + 1 });
        }
    }
    let defect = cauchy_defect(space, sequence, tail_start)?;
    if defect > *eps {
        return Err(ConeError::NotConvergent {
            defect: defect.approx_f64(),
        });
    }
    let limit = sequence[sequence.len() - 1].clone();
    let mut dominates_all = true;
    for x in sequence {
        if !space.leq(x, &limit)? {
            dominates_all = false;
            break;
        }
    }
    let mut checks = Vec::with_capacity(candidates.len());
    for (index, candidate) in candidates.iter().enumerate() {
        let mut bounds_sequence = true;
        for x in sequence {
            if !space.leq(x, candidate)? {
                bounds_sequence = false;
                break;
            }
        }
        let dominates_limit = bounds_sequence && space.leq(&limit, candidate)?;
        checks.push(CandidateCheck {
            index,
            bounds_sequence,
            dominates_limit,
        });
    }
    Ok(SupReport {
        limit,
        defect,
        dominates_all,
        candidates: checks,
    })
}

/// Componentwise maximum of a nonempty family of coordinate vectors.
pub fn componentwise_sup<S: Scalar>(sequence: &[Element<S>]) -> Result<Element<S>, ConeError> {
    let mut iter = sequence.iter();
    let first = match iter.next() {
        Some(Element::Vector(v)) => v.clone(),
        Some(other) => {
            return Err(ConeError::DimensionMismatch {
                expected: "a vector".into(),
                got: other.shape(),
            })
        }
        None => return Err(ConeError::BadParams("sequence must be nonempty".into())),
    };
    let mut sup = first;
    for element in iter {
        let Element::Vector(v) = element else {
            return Err(ConeError::DimensionMismatch {
                expected: "a vector".into(),
                got: element.shape(),
            });
        };
        if v.len() != sup.len() {
            return Err(ConeError::DimensionMismatch {
                expected: format!("vector of length {}", sup.len()),
                got: element.shape(),
            });
        }
        for (acc, c) in sup.iter_mut().zip(v) {
            if c > acc {
                *acc = c.clone();
            }
        }
    }
    Ok(Element::Vector(sup))
}

/// Largest sampled ratio `||x|| / ||y||` over pairs with `0 <= x <= y`,
/// `y != 0`: a certified lower bound for the normality constant of the
/// cone-norm pair.  Pairs violating the sampling contract are rejected.
pub fn normality_constant<S: Scalar>(
    cone: &ConeSpec<S>,
    norm: &NormSpec<S>,
    pairs: &[(Element<S>, Element<S>)],
) -> Result<S, ConeError> {
    if pairs.is_empty() {
        return Err(ConeError::EmptySample);
    }
    let mut best = S::zero();
    for (index, (x, y)) in pairs.iter().enumerate() {
        let reject = |reason: &str| ConeError::BadSample {
            index,
            reason: reason.into(),
        };
        if !cone.contains(x)? {
            return Err(reject("x is not in the cone"));
        }
        if !cone.leq(x, y)? {
            return Err(reject("x <= y fails"));
        }
        let ny = norm.eval(y)?;
        if ny.is_zero() || ny.is_negative() {
            return Err(reject("y must have positive norm"));
        }
        let ratio = norm.eval(x)? / ny;
        if ratio > best {
            best = ratio;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::ConeKind;
    use crate::scalar::rat;
    use crate::Rational;

    fn ice_cream_ell1() -> SpaceSpec<Rational> {
        SpaceSpec::new(
            ConeSpec::new(ConeKind::IceCream2d),
            NormSpec::ell1(),
        )
    }

    fn v(a: Rational, b: Rational) -> Element<Rational> {
        Element::vector(vec![a, b])
    }

    #[test]
    fn constant_sequence_has_zero_defect() {
        let space = ice_cream_ell1();
        let seq = vec![v(rat(0, 1), rat(1, 1)); 4];
        assert_eq!(cauchy_defect(&space, &seq, 0).unwrap(), rat(0, 1));
    }

    #[test]
    fn defect_is_the_max_pairwise_tail_distance() {
        let space = ice_cream_ell1();
        // Points along the left segment toward (0, 1).
        let seq: Vec<_> = [0, 1, 2, 4]
            .iter()
            .map(|k| {
                let theta = rat(*k, 4);
                v(-(rat(1, 1) - theta.clone()) / rat(2, 1), (rat(1, 1) + theta) / rat(2, 1))
            })
            .collect();
        // theta gaps within the tail {1/4, 2/4, 4/4}: largest is 3/4.
        assert_eq!(cauchy_defect(&space, &seq, 1).unwrap(), rat(3, 4));
    }

    #[test]
    fn probe_rejects_non_increasing_and_unbounded_sequences() {
        let space = ice_cream_ell1();
        let increasing = vec![v(rat(0, 1), rat(0, 1)), v(rat(0, 1), rat(1, 2))];
        let report = regularity_probe(
            &space,
            &increasing,
            &RegularityBound::Norm(rat(1, 1)),
            0,
        )
        .unwrap();
        assert_eq!(report.defect, rat(1, 2));

        let wobbly = vec![v(rat(0, 1), rat(1, 2)), v(rat(0, 1), rat(0, 1))];
        assert_eq!(
            regularity_probe(&space, &wobbly, &RegularityBound::Norm(rat(1, 1)), 0).unwrap_err(),
            ConeError::NotIncreasing { index: 1 }
        );

        let escaping = vec![v(rat(0, 1), rat(0, 1)), v(rat(0, 1), rat(2, 1))];
        assert_eq!(
            regularity_probe(&space, &escaping, &RegularityBound::Norm(rat(1, 1)), 0).unwrap_err(),
            ConeError::BoundViolated { index: 1 }
        );
        assert_eq!(
            regularity_probe(
                &space,
                &escaping,
                &RegularityBound::Order(v(rat(0, 1), rat(1, 1))),
                0
            )
            .unwrap_err(),
            ConeError::BoundViolated { index: 1 }
        );
    }

    #[test]
    fn sup_of_eventually_constant_sequence_is_its_plateau() {
        let space = SpaceSpec::new(
            ConeSpec::new(ConeKind::Componentwise { dim: 3 }),
            NormSpec::sup_abs(),
        );
        let seq = vec![
            Element::vector(vec![rat(1, 1), rat(0, 1), rat(0, 1)]),
            Element::vector(vec![rat(1, 1), rat(1, 1), rat(0, 1)]),
            Element::vector(vec![rat(1, 1), rat(1, 1), rat(1, 1)]),
            Element::vector(vec![rat(1, 1), rat(1, 1), rat(1, 1)]),
        ];
        let ones = Element::vector(vec![rat(1, 1); 3]);
        let report =
            sup_of_increasing_sequence(&space, &seq, &[ones.clone()], 2, &rat(0, 1)).unwrap();
        assert_eq!(report.limit, ones);
        assert!(report.dominates_all);
        assert!(report.candidates[0].bounds_sequence);
        assert!(report.candidates[0].dominates_limit);
        // Without reaching the plateau the tail is not convergent at tol 0.
        let err =
            sup_of_increasing_sequence(&space, &seq, &[], 0, &rat(0, 1)).unwrap_err();
        assert!(matches!(err, ConeError::NotConvergent { .. }));
    }

    #[test]
    fn componentwise_sup_takes_coordinatewise_maxima() {
        let seq = vec![
            Element::vector(vec![rat(1, 1), rat(0, 1)]),
            Element::vector(vec![rat(0, 1), rat(2, 1)]),
        ];
        assert_eq!(
            componentwise_sup(&seq).unwrap(),
            Element::vector(vec![rat(1, 1), rat(2, 1)])
        );
    }

    #[test]
    fn normality_needs_valid_pairs_and_tracks_the_best_ratio() {
        let cone = ConeSpec::<Rational>::new(ConeKind::Componentwise { dim: 2 });
        let norm = NormSpec::ell1();
        let pairs = vec![
            (
                Element::vector(vec![rat(1, 2), rat(0, 1)]),
                Element::vector(vec![rat(1, 1), rat(1, 1)]),
            ),
            (
                Element::vector(vec![rat(1, 1), rat(1, 1)]),
                Element::vector(vec![rat(1, 1), rat(1, 1)]),
            ),
        ];
        assert_eq!(normality_constant(&cone, &norm, &pairs).unwrap(), rat(1, 1));
        assert_eq!(
            normality_constant::<Rational>(&cone, &norm, &[]).unwrap_err(),
            ConeError::EmptySample
        );
        let bad = vec![(
            Element::vector(vec![rat(2, 1), rat(0, 1)]),
            Element::vector(vec![rat(1, 1), rat(1, 1)]),
        )];
        assert!(matches!(
            normality_constant(&cone, &norm, &bad).unwrap_err(),
            ConeError::BadSample { index: 0, .. }
        ));
    }
}

//! Set-valued self-maps on finite posets and the fixed-point verifier.
//!
//! [`verify_fixed_point_theorem`] machine-checks the three hypotheses under
//! which an isotone set-valued map on a chain-complete domain has a nonempty,
//! inductive fixed-point set above the seed — and only then reports the
//! conclusions, each recomputed from scratch rather than taken on faith.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{CheckRecord, FinitePoset, PosetElement, PosetError};

/// A set-valued map `x -> T(x)` given by image index lists.
///
/// Images are stored sorted and deduplicated; every image must be nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetValuedMap {
    images: BTreeMap<usize, Vec<usize>>,
    host_len: usize,
}

impl SetValuedMap {
    /// Validates and normalizes the image table against a host of
    /// `host_len` elements.
    pub fn new(
        host_len: usize,
        images: BTreeMap<usize, Vec<usize>>,
    ) -> Result<Self, PosetError> {
        for (&x, image) in &images {
            if x >= host_len {
                return Err(PosetError::IndexOutOfRange(x));
            }
            if image.is_empty() {
                return Err(PosetError::EmptyImage(format!("index {x}")));
            }
            for &y in image {
                if y >= host_len {
                    return Err(PosetError::IndexOutOfRange(y));
                }
            }
        }
        let images = images
            .into_iter()
            .map(|(x, mut image)| {
                image.sort_unstable();
                image.dedup();
                (x, image)
            })
            .collect();
        Ok(SetValuedMap { images, host_len })
    }

    /// Builds a single-valued map from `(x, f(x))` pairs.
    pub fn singletons(
        host_len: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PosetError> {
        let images = pairs.into_iter().map(|(x, y)| (x, vec![y])).collect();
        SetValuedMap::new(host_len, images)
    }

    pub fn host_len(&self) -> usize {
        self.host_len
    }

    /// Domain indices in ascending order.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.keys().copied()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.images.contains_key(&x)
    }

    /// The image set `T(x)`.
    pub fn image(&self, x: usize) -> Result<&[usize], PosetError> {
        self.images
            .get(&x)
            .map(Vec::as_slice)
            .ok_or_else(|| PosetError::NotInDomain(format!("index {x}")))
    }

    /// Whether `x` is a fixed point, i.e. `x` is a member of `T(x)`.
    pub fn is_fixed(&self, x: usize) -> Result<bool, PosetError> {
        Ok(self.image(x)?.binary_search(&x).is_ok())
    }
}

/// Which isotonicity inequality to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsotoneMode {
    /// `x <= y` implies each `z` in `T(x)` sits below some `w` in `T(y)`.
    Upward,
    /// `x <= y` implies each `w` in `T(y)` sits above some `z` in `T(x)`.
    Downward,
    /// Both directions at once.
    Both,
}

/// A concrete isotonicity violation: the pair and the unmatched image point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotoneWitness {
    pub lower: String,
    pub upper: String,
    pub unmatched: String,
    pub direction: String,
}

/// Result of an exhaustive isotonicity scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotoneReport {
    pub holds: bool,
    pub pairs_checked: usize,
    pub witness: Option<IsotoneWitness>,
}

fn upward_violation<E: PosetElement>(
    poset: &FinitePoset<E>,
    map: &SetValuedMap,
    x: usize,
    y: usize,
) -> Result<Option<usize>, PosetError> {
    let tx = map.image(x)?;
    let ty = map.image(y)?;
    Ok(tx
        .iter()
        .copied()
        .find(|&z| !ty.iter().any(|&w| poset.leq(z, w))))
}

fn downward_violation<E: PosetElement>(
    poset: &FinitePoset<E>,
    map: &SetValuedMap,
    x: usize,
    y: usize,
) -> Result<Option<usize>, PosetError> {
    let tx = map.image(x)?;
    let ty = map.image(y)?;
    Ok(ty
        .iter()
        .copied()
        .find(|&w| !tx.iter().any(|&z| poset.leq(z, w))))
}

/// Checks isotonicity of `map` over the comparable pairs drawn from
/// `domain` (every `x <= y` with both in `domain`), exhaustively.
pub fn check_isotone_on<E: PosetElement>(
    poset: &FinitePoset<E>,
    map: &SetValuedMap,
    mode: IsotoneMode,
    domain: &[usize],
) -> Result<IsotoneReport, PosetError> {
    let mut pairs = 0usize;
    for &x in domain {
        for &y in domain {
            if !poset.leq(x, y) {
                continue;
            }
            pairs += 1;
            if matches!(mode, IsotoneMode::Upward | IsotoneMode::Both) {
                if let Some(z) = upward_violation(poset, map, x, y)? {
                    return Ok(IsotoneReport {
                        holds: false,
                        pairs_checked: pairs,
                        witness: Some(IsotoneWitness {
                            lower: poset.element(x).to_string(),
                            upper: poset.element(y).to_string(),
                            unmatched: poset.element(z).to_string(),
                            direction: "upward".into(),
                        }),
                    });
                }
            }
            if matches!(mode, IsotoneMode::Downward | IsotoneMode::Both) {
                if let Some(w) = downward_violation(poset, map, x, y)? {
                    return Ok(IsotoneReport {
                        holds: false,
                        pairs_checked: pairs,
                        witness: Some(IsotoneWitness {
                            lower: poset.element(x).to_string(),
                            upper: poset.element(y).to_string(),
                            unmatched: poset.element(w).to_string(),
                            direction: "downward".into(),
                        }),
                    });
                }
            }
        }
    }
    Ok(IsotoneReport {
        holds: true,
        pairs_checked: pairs,
        witness: None,
    })
}

/// Checks isotonicity over the map's whole domain.
pub fn check_isotone<E: PosetElement>(
    poset: &FinitePoset<E>,
    map: &SetValuedMap,
    mode: IsotoneMode,
) -> Result<IsotoneReport, PosetError> {
    let domain: Vec<usize> = map.domain().collect();
    check_isotone_on(poset, map, mode, &domain)
}

/// All fixed points of the map (indices `x` with `x` in `T(x)`), in
/// ascending order.
pub fn fixed_point_set(map: &SetValuedMap) -> Result<Vec<usize>, PosetError> {
    let mut fixed = Vec::new();
    for x in map.domain() {
        if map.is_fixed(x)? {
            fixed.push(x);
        }
    }
    Ok(fixed)
}

/// Verified conclusions about the fixed-point set of an isotone map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    /// Fixed points by element name, in domain order.
    pub fixed_points: Vec<String>,
    /// Whether the fixed-point set is inductive (chains bounded inside it).
    pub is_inductive: bool,
    /// Fixed points weakly above the seed.
    pub above_seed: Vec<String>,
    /// Maximal elements of the fixed-point set.
    pub maximal_elements: Vec<String>,
    /// Each hypothesis with its verdict and witness text.
    pub hypothesis_log: Vec<CheckRecord>,
    /// Fixed points as indices into the host poset.
    #[serde(skip)]
    pub fixed_indices: Vec<usize>,
}

/// Machine-checks the three hypotheses of the order-theoretic fixed-point
/// theorem on the domain `d` with seed `x0`, then derives the conclusions.
///
/// Hypotheses, each evaluated exhaustively and logged:
///
/// 1. `isotone_upward` — for comparable `x <= y` in `d`, each point of
///    `T(x)` is matched from above in `T(y)`;
/// 2. `images_universally_inductive` — every image `T(x)` is a universally
///    inductive subset of the domain poset;
/// 3. `seed_below_image` — some `x1` in `T(x0)` satisfies `x0 <= x1`.
///
/// If any hypothesis fails the conclusions are *not* asserted: the call
/// returns [`PosetError::HypothesisFailed`] with the full log.  On success
/// the report's conclusions (nonempty inductive fixed-point set, fixed
/// points above the seed, maximal fixed points) are recomputed directly.
pub fn verify_fixed_point_theorem<E: PosetElement>(
    poset: &FinitePoset<E>,
    d: &[usize],
    map: &SetValuedMap,
    x0: usize,
) -> Result<FixedPointReport, PosetError> {
    if d.is_empty() {
        return Err(PosetError::EmptySubset);
    }
    for &x in d {
        if x >= poset.len() {
            return Err(PosetError::IndexOutOfRange(x));
        }
        let image = map.image(x).map_err(|_| {
            PosetError::NotInDomain(poset.element(x).to_string())
        })?;
        if let Some(&escape) = image.iter().find(|&&y| !d.contains(&y)) {
            return Err(PosetError::BadData(format!(
                "image point {} of {} leaves the domain",
                poset.element(escape),
                poset.element(x)
            )));
        }
    }
    if !d.contains(&x0) {
        return Err(PosetError::BadData(format!(
            "seed {} is outside the domain",
            poset.element(x0)
        )));
    }

    let mut log = Vec::new();

    let isotone = check_isotone_on(poset, map, IsotoneMode::Upward, d)?;
    log.push(CheckRecord {
        name: "isotone_upward".into(),
        pass: isotone.holds,
        witness: match &isotone.witness {
            Some(w) => format!(
                "pair {} <= {} leaves image point {} unmatched",
                w.lower, w.upper, w.unmatched
            ),
            None => format!("{} comparable pairs verified", isotone.pairs_checked),
        },
    });

    // Universal inductivity is judged inside the domain subposet.
    let (domain_poset, kept) = poset.restrict(d)?;
    let to_restricted = |orig: usize| -> usize {
        kept.binary_search(&orig)
            .expect("domain membership was validated")
    };
    let mut images_ok = true;
    let mut image_witness = String::new();
    for &x in d {
        let image: Vec<usize> = map.image(x)?.iter().map(|&y| to_restricted(y)).collect();
        let verdict = domain_poset.is_universally_inductive(&image)?;
        if !verdict.holds {
            images_ok = false;
            image_witness = format!(
                "image of {} is not universally inductive: {:?}",
                poset.element(x),
                verdict.witness
            );
            break;
        }
    }
    log.push(CheckRecord {
        name: "images_universally_inductive".into(),
        pass: images_ok,
        witness: if images_ok {
            format!("{} image sets verified", d.len())
        } else {
            image_witness
        },
    });

    let seed_image = map.image(x0)?;
    let x1 = seed_image.iter().copied().find(|&y| poset.leq(x0, y));
    log.push(CheckRecord {
        name: "seed_below_image".into(),
        pass: x1.is_some(),
        witness: match x1 {
            Some(y) => format!(
                "{} <= {} with the bound in the seed's image",
                poset.element(x0),
                poset.element(y)
            ),
            None => format!("no point of T({}) sits above the seed", poset.element(x0)),
        },
    });

    if let Some(failed) = log.iter().find(|c| !c.pass) {
        return Err(PosetError::HypothesisFailed {
            name: failed.name.clone(),
            witness: failed.witness.clone(),
            log,
        });
    }

    let mut fixed_indices = Vec::new();
    for &x in d {
        if map.is_fixed(x)? {
            fixed_indices.push(x);
        }
    }
    fixed_indices.sort_unstable();
    let inductive = if fixed_indices.is_empty() {
        false
    } else {
        poset.is_inductive(&fixed_indices)?.holds
    };
    let above_seed: Vec<usize> = fixed_indices
        .iter()
        .copied()
        .filter(|&x| poset.leq(x0, x))
        .collect();
    let maximal = if fixed_indices.is_empty() {
        Vec::new()
    } else {
        poset.maximal_in(&fixed_indices)?
    };

    let names = |ix: &[usize]| ix.iter().map(|&i| poset.element(i).to_string()).collect();
    Ok(FixedPointReport {
        fixed_points: names(&fixed_indices),
        is_inductive: inductive,
        above_seed: names(&above_seed),
        maximal_elements: names(&maximal),
        hypothesis_log: log,
        fixed_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinitePoset<&'static str> {
        FinitePoset::new(
            vec!["bot", "x", "y", "top"],
            &[("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
        )
        .unwrap()
    }

    #[test]
    fn map_validation_rejects_empty_images_and_bad_indices() {
        let mut images = BTreeMap::new();
        images.insert(0usize, vec![]);
        assert!(matches!(
            SetValuedMap::new(2, images),
            Err(PosetError::EmptyImage(_))
        ));
        let mut images = BTreeMap::new();
        images.insert(0usize, vec![5]);
        assert!(matches!(
            SetValuedMap::new(2, images),
            Err(PosetError::IndexOutOfRange(5))
        ));
        let map = SetValuedMap::singletons(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(map.image(0).unwrap(), &[1]);
        assert!(matches!(map.image(7), Err(PosetError::NotInDomain(_))));
    }

    #[test]
    fn isotone_scan_accepts_the_identity_and_catches_a_swap() {
        let p = diamond();
        let identity = SetValuedMap::singletons(4, (0..4).map(|i| (i, i))).unwrap();
        let report = check_isotone(&p, &identity, IsotoneMode::Both).unwrap();
        assert!(report.holds);
        assert!(report.pairs_checked >= 9, "diamond has 9 comparable pairs");
        // Swap x and y: bot <= x but T(bot)=bot, T(x)=y with x || y is fine;
        // the violation appears at x <= top: T(x) = y <= T(top) = top holds,
        // so instead send top below everything.
        let (x, y, top, bot) = (
            p.index_of(&"x").unwrap(),
            p.index_of(&"y").unwrap(),
            p.index_of(&"top").unwrap(),
            p.index_of(&"bot").unwrap(),
        );
        let crashing =
            SetValuedMap::singletons(4, [(bot, x), (x, top), (y, top), (top, bot)]).unwrap();
        let report = check_isotone(&p, &crashing, IsotoneMode::Upward).unwrap();
        assert!(!report.holds);
        // First violation in scan order: bot <= top, but T(bot) = {x} has
        // no match inside T(top) = {bot}.
        let witness = report.witness.unwrap();
        assert_eq!(witness.direction, "upward");
        assert_eq!(witness.lower, "bot");
        assert_eq!(witness.upper, "top");
        assert_eq!(witness.unmatched, "x");
    }

    #[test]
    fn fixed_points_are_membership_not_equality() {
        let map = SetValuedMap::new(
            3,
            BTreeMap::from([(0usize, vec![0, 2]), (1, vec![2]), (2, vec![2])]),
        )
        .unwrap();
        assert_eq!(fixed_point_set(&map).unwrap(), vec![0, 2]);
    }

    #[test]
    fn theorem_verifier_reports_conclusions_on_the_diamond_identity() {
        let p = diamond();
        let identity = SetValuedMap::singletons(4, (0..4).map(|i| (i, i))).unwrap();
        let d = p.all_indices();
        let bot = p.index_of(&"bot").unwrap();
        let report = verify_fixed_point_theorem(&p, &d, &identity, bot).unwrap();
        assert_eq!(report.fixed_points.len(), 4);
        assert!(report.is_inductive);
        assert_eq!(report.above_seed.len(), 4);
        assert_eq!(report.maximal_elements, vec!["top".to_string()]);
        assert!(report.hypothesis_log.iter().all(|c| c.pass));
    }

    #[test]
    fn theorem_verifier_rejects_a_seed_with_no_bound_above() {
        let p = diamond();
        let (x, y, top, bot) = (
            p.index_of(&"x").unwrap(),
            p.index_of(&"y").unwrap(),
            p.index_of(&"top").unwrap(),
            p.index_of(&"bot").unwrap(),
        );
        // Constant map to bot: isotone, but the seed "x" has nothing above
        // it inside its image.
        let constant =
            SetValuedMap::singletons(4, [(bot, bot), (x, bot), (y, bot), (top, bot)]).unwrap();
        let err = verify_fixed_point_theorem(&p, &p.all_indices(), &constant, x).unwrap_err();
        match err {
            PosetError::HypothesisFailed { name, log, .. } => {
                assert_eq!(name, "seed_below_image");
                assert_eq!(log.len(), 3);
                assert!(log[0].pass, "isotonicity holds for the constant map");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn theorem_verifier_rejects_images_escaping_the_domain() {
        let p = diamond();
        let identity = SetValuedMap::singletons(4, (0..4).map(|i| (i, i))).unwrap();
        let top = p.index_of(&"top").unwrap();
        let d: Vec<usize> = p.all_indices().into_iter().filter(|&i| i != top).collect();
        // Restricting the domain but mapping "x" up to "top" escapes.
        let (x, bot, y) = (
            p.index_of(&"x").unwrap(),
            p.index_of(&"bot").unwrap(),
            p.index_of(&"y").unwrap(),
        );
        let escaping =
            SetValuedMap::singletons(4, [(bot, bot), (x, top), (y, y), (top, top)]).unwrap();
        assert!(matches!(
            verify_fixed_point_theorem(&p, &d, &escaping, bot),
            Err(PosetError::BadData(_))
        ));
        let report = verify_fixed_point_theorem(&p, &d, &identity, bot).unwrap();
        assert_eq!(report.fixed_points.len(), 3);
    }
}

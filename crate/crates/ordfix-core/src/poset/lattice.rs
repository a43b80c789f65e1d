//! Lattice structure on finite posets: joins, meets, sublattice closure
//! checks, bottom-up iteration of increasing maps, and generators for
//! random distributive lattices used as stress fixtures.

use rand::Rng;
use serde::Serialize;

use super::{ExtremumMode, FinitePoset, PosetElement, PosetError};

/// Least upper bound of two elements, when it exists.
pub fn join<E: PosetElement>(
    poset: &FinitePoset<E>,
    a: usize,
    b: usize,
) -> Result<Option<usize>, PosetError> {
    poset.extremum(&[a, b], ExtremumMode::Sup)
}

/// Greatest lower bound of two elements, when it exists.
pub fn meet<E: PosetElement>(
    poset: &FinitePoset<E>,
    a: usize,
    b: usize,
) -> Result<Option<usize>, PosetError> {
    poset.extremum(&[a, b], ExtremumMode::Inf)
}

/// Confirms every pair of elements has both a join and a meet; otherwise
/// reports the first pair with its missing bound.
pub fn ensure_lattice<E: PosetElement>(poset: &FinitePoset<E>) -> Result<(), PosetError> {
    for a in 0..poset.len() {
        for b in a + 1..poset.len() {
            if join(poset, a, b)?.is_none() {
                return Err(PosetError::NotALattice {
                    a: poset.element(a).to_string(),
                    b: poset.element(b).to_string(),
                    missing: "join".into(),
                });
            }
            if meet(poset, a, b)?.is_none() {
                return Err(PosetError::NotALattice {
                    a: poset.element(a).to_string(),
                    b: poset.element(b).to_string(),
                    missing: "meet".into(),
                });
            }
        }
    }
    Ok(())
}

/// A pair of subset elements whose join or meet escapes the subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublatticeViolation {
    pub a: String,
    pub b: String,
    pub join: String,
    pub meet: String,
    pub join_inside: bool,
    pub meet_inside: bool,
    /// Host indices `[a, b, join, meet]` for programmatic use.
    #[serde(skip)]
    pub indices: [usize; 4],
}

/// Outcome of a sublattice closure scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SublatticeCheck {
    pub closed: bool,
    pub pairs_checked: usize,
    pub witness: Option<SublatticeViolation>,
}

/// Evaluates one pair against subset closure: returns the violation record
/// if the pair's join or meet (taken in the host lattice) escapes `subset`.
pub fn check_pair_closure<E: PosetElement>(
    poset: &FinitePoset<E>,
    subset: &[usize],
    a: usize,
    b: usize,
) -> Result<Option<SublatticeViolation>, PosetError> {
    let j = join(poset, a, b)?.ok_or_else(|| PosetError::NotALattice {
        a: poset.element(a).to_string(),
        b: poset.element(b).to_string(),
        missing: "join".into(),
    })?;
    let m = meet(poset, a, b)?.ok_or_else(|| PosetError::NotALattice {
        a: poset.element(a).to_string(),
        b: poset.element(b).to_string(),
        missing: "meet".into(),
    })?;
    let join_inside = subset.contains(&j);
    let meet_inside = subset.contains(&m);
    if join_inside && meet_inside {
        return Ok(None);
    }
    Ok(Some(SublatticeViolation {
        a: poset.element(a).to_string(),
        b: poset.element(b).to_string(),
        join: poset.element(j).to_string(),
        meet: poset.element(m).to_string(),
        join_inside,
        meet_inside,
        indices: [a, b, j, m],
    }))
}

/// Whether a nonempty subset of a lattice is closed under pairwise joins
/// and meets; the first escaping pair (in subset order) is the witness.
pub fn is_sublattice<E: PosetElement>(
    poset: &FinitePoset<E>,
    subset: &[usize],
) -> Result<SublatticeCheck, PosetError> {
    if subset.is_empty() {
        return Err(PosetError::EmptySubset);
    }
    let mut pairs = 0usize;
    for (k, &a) in subset.iter().enumerate() {
        for &b in &subset[k + 1..] {
            pairs += 1;
            if let Some(violation) = check_pair_closure(poset, subset, a, b)? {
                return Ok(SublatticeCheck {
                    closed: false,
                    pairs_checked: pairs,
                    witness: Some(violation),
                });
            }
        }
    }
    Ok(SublatticeCheck {
        closed: true,
        pairs_checked: pairs,
        witness: None,
    })
}

/// The member of `subset` lying below every member, if one exists.
pub fn least_member<E: PosetElement>(
    poset: &FinitePoset<E>,
    subset: &[usize],
) -> Result<Option<usize>, PosetError> {
    for &i in subset {
        if i >= poset.len() {
            return Err(PosetError::IndexOutOfRange(i));
        }
    }
    Ok(subset
        .iter()
        .copied()
        .find(|&m| subset.iter().all(|&s| poset.leq(m, s))))
}

/// Bottom-up iteration record of a single-valued increasing map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KtReport {
    /// Visited elements from the bottom to the fixed point, by name.
    pub path: Vec<String>,
    /// The reached fixed point's name.
    pub fixed: String,
    /// Number of map applications performed.
    pub steps: usize,
    /// The reached fixed point's host index.
    #[serde(skip)]
    pub fixed_index: usize,
}

/// Iterates a single-valued map from the poset's least element until it
/// stabilizes.  For an increasing map on a finite poset this reaches the
/// least fixed point in at most `len` applications; the increasing regime
/// is re-verified at every step rather than assumed.
pub fn kt_least_fixed_point<E: PosetElement>(
    poset: &FinitePoset<E>,
    f: &[usize],
) -> Result<KtReport, PosetError> {
    if f.len() != poset.len() {
        return Err(PosetError::BadData(format!(
            "map table has {} entries for {} elements",
            f.len(),
            poset.len()
        )));
    }
    for (x, &y) in f.iter().enumerate() {
        if y >= poset.len() {
            return Err(PosetError::IndexOutOfRange(y));
        }
        let _ = x;
    }
    let bottom = poset.bottom().ok_or(PosetError::NoBottom)?;
    let mut path = vec![bottom];
    let mut current = bottom;
    for step in 1..=poset.len() {
        let next = f[current];
        if next == current {
            return Ok(KtReport {
                path: path.iter().map(|&i| poset.element(i).to_string()).collect(),
                fixed: poset.element(current).to_string(),
                steps: step - 1,
                fixed_index: current,
            });
        }
        if !poset.leq(current, next) {
            return Err(PosetError::IterationNotIncreasing { step });
        }
        current = next;
        path.push(current);
    }
    // A strictly ascending sequence cannot outrun a finite poset, so
    // reaching this point means the map was not increasing after all.
    Err(PosetError::IterationNotIncreasing {
        step: poset.len(),
    })
}

/// Fixed points of a single-valued map table.
pub fn enumerate_fixed_points(f: &[usize]) -> Vec<usize> {
    f.iter()
        .enumerate()
        .filter(|&(x, &y)| x == y)
        .map(|(x, _)| x)
        .collect()
}

/// Closes a seed family of subsets of a six-point universe under union and
/// intersection, yielding a random distributive lattice of at most 64
/// elements ordered by inclusion.  Elements are bitmasks over `{0..5}`.
pub fn random_distributive_lattice<R: Rng + ?Sized>(
    rng: &mut R,
) -> Result<FinitePoset<u64>, PosetError> {
    let generator_count = rng.random_range(2..=6usize);
    let mut masks: Vec<u64> = (0..generator_count)
        .map(|_| rng.random_range(0..64u64))
        .collect();
    masks.sort_unstable();
    masks.dedup();
    // Union/intersection closure: distributivity is inherited from the
    // Boolean algebra the masks live in.
    loop {
        let before = masks.len();
        let snapshot = masks.clone();
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i + 1..] {
                for candidate in [a | b, a & b] {
                    if !masks.contains(&candidate) {
                        masks.push(candidate);
                    }
                }
            }
        }
        masks.sort_unstable();
        masks.dedup();
        if masks.len() == before {
            break;
        }
    }
    let pairs: Vec<(u64, u64)> = masks
        .iter()
        .flat_map(|&a| {
            masks
                .iter()
                .filter(move |&&b| a & b == a)
                .map(move |&b| (a, b))
        })
        .collect();
    FinitePoset::new(masks, &pairs)
}

/// Samples an increasing single-valued map on a lattice: a raw random map
/// `g` is smoothed into `F(x) = join of g(z) over z <= x`, which is
/// increasing by construction.
pub fn random_monotone_map<E: PosetElement, R: Rng + ?Sized>(
    rng: &mut R,
    poset: &FinitePoset<E>,
) -> Result<Vec<usize>, PosetError> {
    let n = poset.len();
    let g: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut f = Vec::with_capacity(n);
    for x in 0..n {
        let mut acc: Option<usize> = None;
        for z in poset.down_set(x) {
            acc = Some(match acc {
                None => g[z],
                Some(current) => join(poset, current, g[z])?.ok_or_else(|| {
                    PosetError::NotALattice {
                        a: poset.element(current).to_string(),
                        b: poset.element(g[z]).to_string(),
                        missing: "join".into(),
                    }
                })?,
            });
        }
        // Every down set contains x itself, so the accumulator is set.
        f.push(acc.expect("down sets are nonempty"));
    }
    Ok(f)
}

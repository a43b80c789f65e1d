//! Finite partially ordered sets with exhaustive order-theoretic queries.
//!
//! A [`FinitePoset`] stores the full reachability relation as bit rows, so
//! comparability, bounds, suprema and chain questions are all exact.  The
//! completeness predicates ([`FinitePoset::is_chain_complete`],
//! [`FinitePoset::is_inductive`], [`FinitePoset::is_universally_inductive`])
//! are decided by the chain-maximum argument — every nonempty finite chain
//! has a maximum, which is simultaneously its least upper bound and a member
//! — and each returns a [`Verdict`] recording that method.  A literal
//! budgeted chain enumerator backs the same predicates as an independent
//! oracle for tests and skeptics.

pub mod grid;
pub mod io;
pub mod lattice;
pub mod map;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

pub use grid::{builtin_example, verify_poset_example, BuiltinExample, ExampleName, GridPoint};
pub use lattice::{kt_least_fixed_point, SublatticeCheck};
pub use map::{
    check_isotone, fixed_point_set, verify_fixed_point_theorem, FixedPointReport, IsotoneMode,
    SetValuedMap,
};

/// Default cap on literal chain enumeration.  Chain counts grow
/// exponentially with poset size, so enumeration stops with
/// [`PosetError::BudgetExceeded`] instead of silently sampling.
pub const DEFAULT_CHAIN_BUDGET: usize = 1_000_000;

/// One recorded hypothesis/conclusion evaluation (reused across reports).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

/// Errors from poset construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("a poset needs at least one element")]
    Empty,
    #[error("duplicate element {0}")]
    DuplicateElement(String),
    #[error("relation references unknown element {0}")]
    UnknownElement(String),
    #[error("antisymmetry violated: {a} <= {b} and {b} <= {a} for distinct elements")]
    AntisymmetryViolation { a: String, b: String },
    #[error("element index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("chain enumeration budget of {budget} chains exceeded")]
    BudgetExceeded { budget: usize },
    #[error("image of element {0} is empty")]
    EmptyImage(String),
    #[error("element {0} is outside the map's domain")]
    NotInDomain(String),
    #[error("not a lattice: {a} and {b} have no {missing}")]
    NotALattice {
        a: String,
        b: String,
        missing: String,
    },
    #[error("hypothesis {name} failed: {witness}")]
    HypothesisFailed {
        name: String,
        witness: String,
        log: Vec<CheckRecord>,
    },
    #[error("poset has no least element")]
    NoBottom,
    #[error("iteration left the increasing regime at step {step}: the map is not isotone")]
    IterationNotIncreasing { step: usize },
    #[error("bad grid step: {0}")]
    BadGridStep(String),
    #[error("malformed poset data: {0}")]
    BadData(String),
}

/// Dense bit row used for relation storage and subset arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub(crate) fn new(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub(crate) fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub(crate) fn union_with(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |i| self.contains(*i))
    }
}

/// Marker bound for element identifiers.
pub trait PosetElement: Clone + Eq + Hash + fmt::Debug + fmt::Display {}
impl<T: Clone + Eq + Hash + fmt::Debug + fmt::Display> PosetElement for T {}

/// Direction of an extremum query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumMode {
    /// Least upper bound.
    Sup,
    /// Greatest lower bound.
    Inf,
}

/// Outcome of a completeness predicate, carrying the decision method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// A failing chain (element names), when one exists.
    pub witness: Option<Vec<String>>,
    /// How the verdict was reached.
    pub method: String,
    /// Number of chains literally examined (zero for the reduction).
    pub chains_checked: usize,
}

impl Verdict {
    fn by_reduction(holds: bool, witness: Option<Vec<String>>) -> Self {
        Verdict {
            holds,
            witness,
            method: "finite chain-maximum reduction (a nonempty finite chain's maximum \
                     is a member and its least upper bound)"
                .into(),
            chains_checked: 0,
        }
    }

    fn by_enumeration(holds: bool, witness: Option<Vec<String>>, chains: usize) -> Self {
        Verdict {
            holds,
            witness,
            method: "exhaustive chain enumeration".into(),
            chains_checked: chains,
        }
    }
}

/// A finite poset over opaque element identifiers.
#[derive(Debug, Clone)]
pub struct FinitePoset<E> {
    elements: Vec<E>,
    index: HashMap<E, usize>,
    /// `up[i]` is the bit row of all `j` with `element[i] <= element[j]`.
    up: Vec<BitRow>,
}

impl<E: PosetElement> FinitePoset<E> {
    /// Builds a poset whose relation is the reflexive-transitive closure of
    /// `pairs`; fails if that closure is not antisymmetric (reporting a
    /// 2-cycle) or if a pair names an undeclared element.
    pub fn new(elements: Vec<E>, pairs: &[(E, E)]) -> Result<Self, PosetError> {
        if elements.is_empty() {
            return Err(PosetError::Empty);
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(e.to_string()));
            }
        }
        let n = elements.len();
        let mut up: Vec<BitRow> = (0..n)
            .map(|i| {
                let mut row = BitRow::new(n);
                row.insert(i);
                row
            })
            .collect();
        for (a, b) in pairs {
            let ia = *index
                .get(a)
                .ok_or_else(|| PosetError::UnknownElement(a.to_string()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| PosetError::UnknownElement(b.to_string()))?;
            up[ia].insert(ib);
        }
        // Bit-parallel Warshall closure over the reachability rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if up[i].contains(j) && up[j].contains(i) {
                    return Err(PosetError::AntisymmetryViolation {
                        a: elements[i].to_string(),
                        b: elements[j].to_string(),
                    });
                }
            }
        }
        Ok(FinitePoset { elements, index, up })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &E {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// All element indices in declaration order.
    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// Indices weakly above `i` (the ray `[i)`).
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        self.up[i].iter().collect()
    }

    /// Indices weakly below `i` (the ray `(i]`).
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|j| self.leq(*j, i)).collect()
    }

    /// The order interval `[lo, hi]`.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|j| self.leq(lo, *j) && self.leq(*j, hi))
            .collect()
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), PosetError> {
        for &i in subset {
            if i >= self.len() {
                return Err(PosetError::IndexOutOfRange(i));
            }
        }
        Ok(())
    }

    /// Common upper bounds of `subset` within the full poset.
    pub fn upper_bounds(&self, subset: &[usize]) -> Result<Vec<usize>, PosetError> {
        self.check_subset(subset)?;
        Ok((0..self.len())
            .filter(|&u| subset.iter().all(|&s| self.leq(s, u)))
            .collect())
    }

    /// Common lower bounds of `subset` within the full poset.
    pub fn lower_bounds(&self, subset: &[usize]) -> Result<Vec<usize>, PosetError> {
        self.check_subset(subset)?;
        Ok((0..self.len())
            .filter(|&u| subset.iter().all(|&s| self.leq(u, s)))
            .collect())
    }

    /// Least upper / greatest lower bound of a nonempty subset, if it
    /// exists (absence is a value, not an error).
    pub fn extremum(&self, subset: &[usize], mode: ExtremumMode) -> Result<Option<usize>, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        let bounds = match mode {
            ExtremumMode::Sup => self.upper_bounds(subset)?,
            ExtremumMode::Inf => self.lower_bounds(subset)?,
        };
        Ok(bounds.iter().copied().find(|&b| {
            bounds.iter().all(|&other| match mode {
                ExtremumMode::Sup => self.leq(b, other),
                ExtremumMode::Inf => self.leq(other, b),
            })
        }))
    }

    /// Least element of the whole poset, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&b| (0..self.len()).all(|j| self.leq(b, j)))
    }

    /// Greatest element of the whole poset, if any.
    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&t| (0..self.len()).all(|j| self.leq(j, t)))
    }

    /// Elements of `subset` with nothing strictly above them in `subset`.
    pub fn maximal_in(&self, subset: &[usize]) -> Result<Vec<usize>, PosetError> {
        self.check_subset(subset)?;
        Ok(subset
            .iter()
            .copied()
            .filter(|&m| !subset.iter().any(|&other| self.lt(m, other)))
            .collect())
    }

    /// Elements of `subset` with nothing strictly below them in `subset`.
    pub fn minimal_in(&self, subset: &[usize]) -> Result<Vec<usize>, PosetError> {
        self.check_subset(subset)?;
        Ok(subset
            .iter()
            .copied()
            .filter(|&m| !subset.iter().any(|&other| self.lt(other, m)))
            .collect())
    }

    /// Whether `subset` is totally ordered (the empty subset vacuously is).
    pub fn is_chain(&self, subset: &[usize]) -> Result<bool, PosetError> {
        self.check_subset(subset)?;
        Ok(subset
            .iter()
            .enumerate()
            .all(|(k, &i)| subset[k + 1..].iter().all(|&j| self.comparable(i, j))))
    }

    /// Maximum of a nonempty chain (its greatest member).
    pub fn chain_maximum(&self, chain: &[usize]) -> Result<usize, PosetError> {
        if chain.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        self.check_subset(chain)?;
        chain
            .iter()
            .copied()
            .find(|&m| chain.iter().all(|&c| self.leq(c, m)))
            .ok_or(PosetError::BadData(
                "subset passed as a chain is not totally ordered".into(),
            ))
    }

    /// Visits every nonempty chain contained in `subset` (as sorted index
    /// lists), stopping with [`PosetError::BudgetExceeded`] once more than
    /// `budget` chains have been produced.  Returns the number of chains.
    pub fn for_each_chain(
        &self,
        subset: &[usize],
        budget: usize,
        mut visit: impl FnMut(&[usize]),
    ) -> Result<usize, PosetError> {
        self.check_subset(subset)?;
        let mut count = 0usize;
        let mut stack: Vec<usize> = Vec::new();
        // Depth-first extension in subset order keeps each chain sorted and
        // produces every chain exactly once.
        fn extend<E: PosetElement>(
            poset: &FinitePoset<E>,
            subset: &[usize],
            from: usize,
            stack: &mut Vec<usize>,
            count: &mut usize,
            budget: usize,
            visit: &mut impl FnMut(&[usize]),
        ) -> Result<(), PosetError> {
            for (pos, &candidate) in subset.iter().enumerate().skip(from) {
                if stack.iter().any(|&c| !poset.comparable(c, candidate)) {
                    continue;
                }
                stack.push(candidate);
                *count += 1;
                if *count > budget {
                    return Err(PosetError::BudgetExceeded { budget });
                }
                visit(stack);
                extend(poset, subset, pos + 1, stack, count, budget, visit)?;
                stack.pop();
            }
            Ok(())
        }
        extend(self, subset, 0, &mut stack, &mut count, budget, &mut visit)?;
        Ok(count)
    }

    /// Total number of nonempty chains in `subset`, within `budget`.
    pub fn count_chains(&self, subset: &[usize], budget: usize) -> Result<usize, PosetError> {
        self.for_each_chain(subset, budget, |_| {})
    }

    fn names(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.elements[i].to_string()).collect()
    }

    /// Chain-completeness of a nonempty subset: every nonempty chain in the
    /// subset has a least upper bound lying in the subset.  On a finite
    /// poset the chain's maximum settles this affirmatively.
    pub fn is_chain_complete(&self, subset: &[usize]) -> Result<Verdict, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        self.check_subset(subset)?;
        Ok(Verdict::by_reduction(true, None))
    }

    /// Literal chain-completeness check by enumerating every chain and
    /// computing its least upper bound in the full poset.
    pub fn is_chain_complete_by_enumeration(
        &self,
        subset: &[usize],
        budget: usize,
    ) -> Result<Verdict, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        let mut witness: Option<Vec<usize>> = None;
        let count = self.for_each_chain(subset, budget, |chain| {
            if witness.is_some() {
                return;
            }
            let sup = self
                .extremum(chain, ExtremumMode::Sup)
                .expect("chain indices were validated");
            let ok = sup.map_or(false, |s| subset.contains(&s));
            if !ok {
                witness = Some(chain.to_vec());
            }
        })?;
        let witness = witness.map(|w| self.names(&w));
        Ok(Verdict::by_enumeration(witness.is_none(), witness, count))
    }

    /// Inductivity of a nonempty subset: every nonempty chain in the subset
    /// has some upper bound in the subset.  Settled by the chain maximum.
    pub fn is_inductive(&self, subset: &[usize]) -> Result<Verdict, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        self.check_subset(subset)?;
        Ok(Verdict::by_reduction(true, None))
    }

    /// Literal inductivity check by chain enumeration.
    pub fn is_inductive_by_enumeration(
        &self,
        subset: &[usize],
        budget: usize,
    ) -> Result<Verdict, PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        let mut witness: Option<Vec<usize>> = None;
        let count = self.for_each_chain(subset, budget, |chain| {
            if witness.is_some() {
                return;
            }
            let bounded = subset
                .iter()
                .any(|&u| chain.iter().all(|&c| self.leq(c, u)));
            if !bounded {
                witness = Some(chain.to_vec());
            }
        })?;
        let witness = witness.map(|w| self.names(&w));
        Ok(Verdict::by_enumeration(witness.is_none(), witness, count))
    }

    /// Universal inductivity of a nonempty subset `A`: every chain of the
    /// full poset whose members each have an upper bound in `A` has a
    /// single common upper bound in `A`.  On a finite poset any such
    /// chain's maximum hands its own bound to the whole chain.
    pub fn is_universally_inductive(&self, a: &[usize]) -> Result<Verdict, PosetError> {
        if a.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        self.check_subset(a)?;
        Ok(Verdict::by_reduction(true, None))
    }

    /// Literal universal-inductivity check enumerating chains of the whole
    /// poset — exponential, so strictly an oracle for small posets.
    pub fn is_universally_inductive_by_enumeration(
        &self,
        a: &[usize],
        budget: usize,
    ) -> Result<Verdict, PosetError> {
        if a.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        self.check_subset(a)?;
        let everything = self.all_indices();
        let mut witness: Option<Vec<usize>> = None;
        let count = self.for_each_chain(&everything, budget, |chain| {
            if witness.is_some() {
                return;
            }
            let premise = chain
                .iter()
                .all(|&c| a.iter().any(|&u| self.leq(c, u)));
            if !premise {
                return;
            }
            let conclusion = a
                .iter()
                .any(|&u| chain.iter().all(|&c| self.leq(c, u)));
            if !conclusion {
                witness = Some(chain.to_vec());
            }
        })?;
        let witness = witness.map(|w| self.names(&w));
        Ok(Verdict::by_enumeration(witness.is_none(), witness, count))
    }

    /// The induced subposet on `subset`: returns the restricted poset and
    /// the original index of each restricted element.
    pub fn restrict(&self, subset: &[usize]) -> Result<(FinitePoset<E>, Vec<usize>), PosetError> {
        if subset.is_empty() {
            return Err(PosetError::EmptySubset);
        }
        self.check_subset(subset)?;
        let mut kept: Vec<usize> = subset.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let elements: Vec<E> = kept.iter().map(|&i| self.elements[i].clone()).collect();
        let n = kept.len();
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            index.insert(e.clone(), i);
        }
        let mut up = Vec::with_capacity(n);
        for (row_pos, &orig_i) in kept.iter().enumerate() {
            let mut row = BitRow::new(n);
            for (col_pos, &orig_j) in kept.iter().enumerate() {
                if self.leq(orig_i, orig_j) {
                    row.insert(col_pos);
                }
            }
            debug_assert!(row.contains(row_pos));
            up.push(row);
        }
        Ok((FinitePoset { elements, index, up }, kept))
    }
}

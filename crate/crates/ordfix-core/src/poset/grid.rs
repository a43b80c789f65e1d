//! Built-in planar fixtures on exact rational grids.
//!
//! Each fixture discretizes a region of the plane under the componentwise
//! order, equips it with a set-valued self-map whose fixed-point set is
//! known in closed form, and pins the pair of fixed points whose join and
//! meet escape the fixed-point set — the demonstration that a fixed-point
//! set can fail to be a sublattice of its domain even when the hypotheses
//! of the fixed-point theorem all hold.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, Zero};

use crate::report::ClaimReport;
use crate::scalar::{format_rational, rat};
use crate::Rational;

use super::lattice::{check_pair_closure, ensure_lattice, is_sublattice};
use super::map::{fixed_point_set, verify_fixed_point_theorem, SetValuedMap};
use super::{FinitePoset, PosetError};

/// An exact rational point of the plane, ordered componentwise by the host
/// poset (the struct itself carries no ordering).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridPoint(pub Rational, pub Rational);

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.0), format_rational(&self.1))
    }
}

impl GridPoint {
    fn leq(&self, other: &GridPoint) -> bool {
        self.0 <= other.0 && self.1 <= other.1
    }
}

/// Names of the built-in fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleName {
    Remark3_11,
    Example3_12_1,
    Example3_12_2,
}

impl ExampleName {
    pub const ALL: [ExampleName; 3] = [
        ExampleName::Remark3_11,
        ExampleName::Example3_12_1,
        ExampleName::Example3_12_2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleName::Remark3_11 => "remark_3_11",
            ExampleName::Example3_12_1 => "example_3_12_1",
            ExampleName::Example3_12_2 => "example_3_12_2",
        }
    }

    /// The fixture's canonical grid step.
    pub fn default_step(self) -> Rational {
        match self {
            ExampleName::Remark3_11 => rat(1, 4),
            ExampleName::Example3_12_1 => rat(1, 2),
            ExampleName::Example3_12_2 => rat(1, 4),
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = PosetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "remark_3_11" => Ok(ExampleName::Remark3_11),
            "example_3_12_1" => Ok(ExampleName::Example3_12_1),
            "example_3_12_2" => Ok(ExampleName::Example3_12_2),
            other => Err(PosetError::BadData(format!(
                "unknown fixture {other}; expected remark_3_11, example_3_12_1 or example_3_12_2"
            ))),
        }
    }
}

/// A fully assembled fixture: grid poset, self-map, pinned expectations.
#[derive(Debug, Clone)]
pub struct BuiltinExample {
    pub name: ExampleName,
    pub poset: FinitePoset<GridPoint>,
    pub map: SetValuedMap,
    /// The closed-form fixed-point set intersected with the grid.
    pub expected_fixed: Vec<usize>,
    /// Iteration seed (always the origin).
    pub x0: usize,
    /// The pinned pair of fixed points whose join and meet escape.
    pub cited_pair: (usize, usize),
    pub cited_join: usize,
    pub cited_meet: usize,
}

/// Largest grid the builders accept, to keep closure matrices small.
const MAX_GRID_POINTS: usize = 4096;

fn require_on_grid(step: &Rational, points: &[(Rational, Rational)]) -> Result<(), PosetError> {
    if *step <= Rational::zero() {
        return Err(PosetError::BadGridStep(format!(
            "step {} is not positive",
            format_rational(step)
        )));
    }
    for (x, y) in points {
        for coord in [x, y] {
            if !(coord / step).is_integer() {
                return Err(PosetError::BadGridStep(format!(
                    "cited point ({}, {}) is not a grid point at step {}",
                    format_rational(x),
                    format_rational(y),
                    format_rational(step)
                )));
            }
        }
    }
    Ok(())
}

fn axis(bound: i64, step: &Rational) -> Vec<Rational> {
    let bound = Rational::from_integer(BigInt::from(bound));
    let mut values = Vec::new();
    let mut k = Rational::zero();
    while k <= bound {
        values.push(k.clone());
        k = &k + step;
    }
    values
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the componentwise-ordered poset on `points` together with an
/// index lookup for later reference.
fn componentwise_poset(points: Vec<GridPoint>) -> Result<FinitePoset<GridPoint>, PosetError> {
    if points.len() > MAX_GRID_POINTS {
        return Err(PosetError::BadGridStep(format!(
            "grid has {} points, more than the supported {}",
            points.len(),
            MAX_GRID_POINTS
        )));
    }
    let mut pairs = Vec::new();
    for a in &points {
        for b in &points {
            if a.leq(b) {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    FinitePoset::new(points, &pairs)
}

fn index_of(poset: &FinitePoset<GridPoint>, x: i64, y: i64, den: i64) -> usize {
    poset
        .index_of(&GridPoint(rat(x, den), rat(y, den)))
        .expect("pinned point is on the grid by construction")
}

/// Assembles a built-in fixture at the requested grid step.
///
/// Fails with [`PosetError::BadGridStep`] when the fixture's cited points
/// — the seed, the extreme fixed points and the pinned witness pair — are
/// not grid points at that step.
pub fn builtin_example(name: ExampleName, step: &Rational) -> Result<BuiltinExample, PosetError> {
    match name {
        ExampleName::Remark3_11 => build_remark_3_11(step),
        ExampleName::Example3_12_1 => build_example_3_12_1(step),
        ExampleName::Example3_12_2 => build_example_3_12_2(step),
    }
}

/// Square domain `[0,2]^2`; the map sends `(s,t)` to `{(s,s)}` for `s < 1`
/// and to `{(s,s), (s,s-1)}` for `s >= 1`.  Its fixed points are the main
/// diagonal plus the shifted diagonal from `(1,0)` to `(2,1)`, and the pair
/// `(1,1), (1.5,0.5)` has join `(1.5,1)` and meet `(1,0.5)`, both outside.
fn build_remark_3_11(step: &Rational) -> Result<BuiltinExample, PosetError> {
    require_on_grid(
        step,
        &[
            (int(1), int(1)),
            (rat(3, 2), rat(1, 2)),
            (int(0), int(0)),
            (int(2), int(2)),
        ],
    )?;
    let axis_values = axis(2, step);
    let mut points = Vec::new();
    for s in &axis_values {
        for t in &axis_values {
            points.push(GridPoint(s.clone(), t.clone()));
        }
    }
    let poset = componentwise_poset(points)?;
    let one = int(1);
    let mut images = std::collections::BTreeMap::new();
    let mut expected = Vec::new();
    for (i, GridPoint(s, t)) in poset.elements().iter().enumerate() {
        let diagonal = poset
            .index_of(&GridPoint(s.clone(), s.clone()))
            .expect("diagonal stays inside the square");
        let mut image = vec![diagonal];
        if *s >= one {
            let shifted = poset
                .index_of(&GridPoint(s.clone(), s - &one))
                .expect("the step divides 1, so the shifted diagonal is on the grid");
            image.push(shifted);
        }
        if t == s || (*s >= one && *t == s - &one) {
            expected.push(i);
        }
        images.insert(i, image);
    }
    let map = SetValuedMap::new(poset.len(), images)?;
    let x0 = index_of(&poset, 0, 0, 1);
    let cited_pair = (index_of(&poset, 1, 1, 1), index_of(&poset, 3, 1, 2));
    let cited_join = index_of(&poset, 3, 2, 2);
    let cited_meet = index_of(&poset, 2, 1, 2);
    expected.sort_unstable();
    Ok(BuiltinExample {
        name: ExampleName::Remark3_11,
        poset,
        map,
        expected_fixed: expected,
        x0,
        cited_pair,
        cited_join,
        cited_meet,
    })
}

/// Two diagonal segments `A` from `(0,0)` to `(1,1)` and `B` from `(2,2)`
/// to `(3,3)`, plus the incomparable pair `(1,2)` and `(2,1)`.  The map
/// fixes the pair, collapses `A` to `(0,0)` and `B` to `(3,3)`; the fixed
/// points are those four, and `(1,2), (2,1)` join to `(2,2)` and meet at
/// `(1,1)`, both outside the fixed-point set.
fn build_example_3_12_1(step: &Rational) -> Result<BuiltinExample, PosetError> {
    require_on_grid(
        step,
        &[
            (int(1), int(2)),
            (int(2), int(1)),
            (int(0), int(0)),
            (int(3), int(3)),
        ],
    )?;
    let one = int(1);
    let two = int(2);
    let mut points = Vec::new();
    for s in axis(3, step) {
        if s <= one || s >= two {
            points.push(GridPoint(s.clone(), s));
        }
    }
    points.push(GridPoint(int(1), int(2)));
    points.push(GridPoint(int(2), int(1)));
    let poset = componentwise_poset(points)?;
    let origin = index_of(&poset, 0, 0, 1);
    let top = index_of(&poset, 3, 3, 1);
    let left = index_of(&poset, 1, 2, 1);
    let right = index_of(&poset, 2, 1, 1);
    let mut images = std::collections::BTreeMap::new();
    for (i, GridPoint(s, t)) in poset.elements().iter().enumerate() {
        let target = if i == left || i == right {
            i
        } else if s == t && *s <= one {
            origin
        } else {
            top
        };
        images.insert(i, vec![target]);
    }
    let map = SetValuedMap::new(poset.len(), images)?;
    let mut expected = vec![origin, left, right, top];
    expected.sort_unstable();
    let cited_join = index_of(&poset, 2, 2, 1);
    let cited_meet = index_of(&poset, 1, 1, 1);
    Ok(BuiltinExample {
        name: ExampleName::Example3_12_1,
        poset,
        map,
        expected_fixed: expected,
        x0: origin,
        cited_pair: (left, right),
        cited_join,
        cited_meet,
    })
}

/// The closed quadrilateral with corners `(0,0)`, `(1,2)`, `(2,1)` and
/// `(3,3)`, split along the anti-diagonal segment `C` from `(1,2)` to
/// `(2,1)` (where `s + t = 3`).  The map fixes `C`'s endpoints, collapses
/// the lower triangle (excluding `C`) to `(0,0)` and everything else —
/// the upper triangle together with `C`'s interior — to `(3,3)`.  The
/// fixed-point set and witness pair match the segment fixture exactly.
fn build_example_3_12_2(step: &Rational) -> Result<BuiltinExample, PosetError> {
    require_on_grid(
        step,
        &[
            (int(1), int(2)),
            (int(2), int(1)),
            (int(0), int(0)),
            (int(3), int(3)),
        ],
    )?;
    let axis_values = axis(3, step);
    let two = int(2);
    let three = int(3);
    let mut points = Vec::new();
    for s in &axis_values {
        for t in &axis_values {
            // 2t >= s, t <= 2s, 2t <= s + 3 and t >= 2s - 3 carve out the
            // closed quadrilateral.
            let in_quad = t * &two >= *s
                && *t <= s * &two
                && t * &two <= s + &three
                && *t >= s * &two - &three;
            if in_quad {
                points.push(GridPoint(s.clone(), t.clone()));
            }
        }
    }
    let poset = componentwise_poset(points)?;
    let origin = index_of(&poset, 0, 0, 1);
    let top = index_of(&poset, 3, 3, 1);
    let left = index_of(&poset, 1, 2, 1);
    let right = index_of(&poset, 2, 1, 1);
    let mut images = std::collections::BTreeMap::new();
    for (i, GridPoint(s, t)) in poset.elements().iter().enumerate() {
        let target = if i == left || i == right {
            i
        } else if s + t < three {
            origin
        } else {
            top
        };
        images.insert(i, vec![target]);
    }
    let map = SetValuedMap::new(poset.len(), images)?;
    let mut expected = vec![origin, left, right, top];
    expected.sort_unstable();
    let cited_join = index_of(&poset, 2, 2, 1);
    let cited_meet = index_of(&poset, 1, 1, 1);
    Ok(BuiltinExample {
        name: ExampleName::Example3_12_2,
        poset,
        map,
        expected_fixed: expected,
        x0: origin,
        cited_pair: (left, right),
        cited_join,
        cited_meet,
    })
}

/// Runs the full battery of checks on a built-in fixture and returns one
/// claim per checked statement:
///
/// - the domain grid is a lattice;
/// - the map's fixed-point set equals the pinned closed-form set;
/// - the fixed-point theorem's hypotheses all pass and its conclusions
///   hold (nonempty inductive fixed set, fixed points above the seed,
///   a maximal fixed point above the seed);
/// - the fixed-point set is *not* a sublattice, and the pinned witness
///   pair escapes with exactly the pinned join and meet.
pub fn verify_poset_example(name: ExampleName, step: &Rational) -> Result<ClaimReport, PosetError> {
    let fixture = builtin_example(name, step)?;
    let poset = &fixture.poset;
    let mut report = ClaimReport::new();
    let label = |suffix: &str| format!("{}/{}", name.as_str(), suffix);
    let point_names = |ix: &[usize]| -> String {
        let names: Vec<String> = ix.iter().map(|&i| poset.element(i).to_string()).collect();
        names.join(" ")
    };

    report.check(
        label("host_is_lattice"),
        "every pair of grid points has a join and a meet",
        format!("checked all pairs of {} points", poset.len()),
        ensure_lattice(poset).is_ok(),
    );

    let fixed = fixed_point_set(&fixture.map)?;
    report.check(
        label("fixed_set_matches"),
        point_names(&fixture.expected_fixed),
        point_names(&fixed),
        fixed == fixture.expected_fixed,
    );

    let domain = poset.all_indices();
    match verify_fixed_point_theorem(poset, &domain, &fixture.map, fixture.x0) {
        Ok(theorem) => {
            report.check(
                label("hypotheses_pass"),
                "isotone_upward, images_universally_inductive, seed_below_image",
                theorem
                    .hypothesis_log
                    .iter()
                    .map(|c| format!("{}={}", c.name, c.pass))
                    .collect::<Vec<_>>()
                    .join(", "),
                theorem.hypothesis_log.iter().all(|c| c.pass),
            );
            report.check(
                label("fixed_set_inductive"),
                "nonempty fixed-point set with chains bounded inside it",
                format!(
                    "{} fixed points, inductive={}",
                    theorem.fixed_points.len(),
                    theorem.is_inductive
                ),
                !theorem.fixed_points.is_empty() && theorem.is_inductive,
            );
            report.check(
                label("fixed_points_above_seed"),
                "some fixed point sits above the seed",
                format!("{} fixed points above {}", theorem.above_seed.len(),
                    poset.element(fixture.x0)),
                !theorem.above_seed.is_empty(),
            );
            let seed = fixture.x0;
            let maximal_above = theorem
                .fixed_indices
                .iter()
                .copied()
                .filter(|&m| poset.leq(seed, m))
                .any(|m| {
                    theorem
                        .fixed_indices
                        .iter()
                        .all(|&other| !poset.lt(m, other))
                });
            report.check(
                label("maximal_fixed_point_above_seed"),
                "a maximal fixed point above the seed",
                format!("maximal fixed points: {}", theorem.maximal_elements.join(" ")),
                maximal_above,
            );
        }
        Err(PosetError::HypothesisFailed { name: hypothesis, witness, .. }) => {
            report.check(
                label("hypotheses_pass"),
                "isotone_upward, images_universally_inductive, seed_below_image",
                format!("{hypothesis} failed: {witness}"),
                false,
            );
        }
        Err(other) => return Err(other),
    }

    let closure = is_sublattice(poset, &fixture.expected_fixed)?;
    report.check(
        label("fixed_set_is_not_a_sublattice"),
        "some pair of fixed points has its join or meet outside the fixed-point set",
        match &closure.witness {
            Some(w) => format!(
                "pair {} , {} has join {} (inside={}) and meet {} (inside={})",
                w.a, w.b, w.join, w.join_inside, w.meet, w.meet_inside
            ),
            None => format!("closed under join and meet over {} pairs", closure.pairs_checked),
        },
        !closure.closed,
    );

    let (a, b) = fixture.cited_pair;
    let cited = check_pair_closure(poset, &fixture.expected_fixed, a, b)?;
    let expected_text = format!(
        "pair {} , {} escapes with join {} and meet {}",
        poset.element(a),
        poset.element(b),
        poset.element(fixture.cited_join),
        poset.element(fixture.cited_meet)
    );
    match cited {
        Some(violation) => {
            let pass = violation.indices[2] == fixture.cited_join
                && violation.indices[3] == fixture.cited_meet
                && !violation.join_inside
                && !violation.meet_inside;
            report.check(
                label("cited_witness_pair_escapes"),
                expected_text,
                format!(
                    "pair {} , {} has join {} (inside={}) and meet {} (inside={})",
                    violation.a,
                    violation.b,
                    violation.join,
                    violation.join_inside,
                    violation.meet,
                    violation.meet_inside
                ),
                pass,
            );
        }
        None => {
            report.check(
                label("cited_witness_pair_escapes"),
                expected_text,
                "pair stayed closed under join and meet".to_string(),
                false,
            );
        }
    }

    Ok(report)
}

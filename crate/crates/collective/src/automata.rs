//! Colours and their output rules.
//!
//! A colour is an isomorphism class of stateless Mealy automata. Its input is
//! the neighbourhood state of the automaton's arc — the matrix counting, per
//! direction and per colour, the bodies on the arcs ending at the same vertex
//! — and its output is a direction. Counts are clamped at the saturation cap
//! `K`, which makes the input alphabet finite. Rules are ordered guard lists
//! with first-match semantics rather than full tables; a full table over
//! `(K+1)^((n+1)·r)` inputs is infeasible to write down.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::environment::{DirId, DirectionSet};
use crate::{Error, Result};

/// Index of a colour (0-based).
pub type ColourId = usize;

/// Default saturation cap for neighbourhood counts.
pub const DEFAULT_CAP: u32 = 3;

/// Saturated occupancy counts of the arcs ending at one vertex:
/// `counts[dir][colour]`, every entry ≤ `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighbourhoodState {
    counts: Vec<Vec<u32>>,
    cap: u32,
}

impl NeighbourhoodState {
    pub fn empty(dirs: usize, colours: usize, cap: u32) -> Self {
        NeighbourhoodState { counts: vec![vec![0; colours]; dirs], cap }
    }

    /// Builds from raw (unclamped) counts, saturating at the cap.
    pub fn saturate(raw: &[Vec<u32>], cap: u32) -> Self {
        let counts = raw
            .iter()
            .map(|row| row.iter().map(|&c| c.min(cap)).collect())
            .collect();
        NeighbourhoodState { counts, cap }
    }

    /// Adds one body of `colour` on the `dir` arc, saturating at the cap.
    pub fn add(&mut self, dir: DirId, colour: ColourId) {
        let c = &mut self.counts[dir][colour];
        *c = (*c + 1).min(self.cap);
    }

    pub fn get(&self, dir: DirId, colour: ColourId) -> u32 {
        self.counts[dir][colour]
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn dirs(&self) -> usize {
        self.counts.len()
    }

    pub fn colours(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    /// The vacuum predicate: every arc other than the body's own is empty.
    /// Entries at the body's own direction (itself and any co-arc companions)
    /// are ignored — the intersecting arcs are the other-direction arcs
    /// ending at the same vertex.
    pub fn is_vacuum(&self, own_dir: DirId) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(d, row)| d == own_dir || row.iter().all(|&c| c == 0))
    }
}

/// One atomic condition on a neighbourhood count cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuardAtom {
    /// `counts[dir][colour] ≥ min`.
    AtLeast { dir: DirId, colour: ColourId, min: u32 },
    /// `counts[dir][colour] = 0`.
    IsZero { dir: DirId, colour: ColourId },
}

impl GuardAtom {
    fn matches(&self, nb: &NeighbourhoodState) -> Result<bool> {
        let (dir, colour) = match self {
            GuardAtom::AtLeast { dir, colour, .. } | GuardAtom::IsZero { dir, colour } => {
                (*dir, *colour)
            }
        };
        if dir >= nb.dirs() || colour >= nb.colours() {
            return Err(Error::DimensionMismatch(format!(
                "guard refers to cell ({dir}, {colour}) outside the {}×{} neighbourhood",
                nb.dirs(),
                nb.colours()
            )));
        }
        Ok(match self {
            GuardAtom::AtLeast { min, .. } => nb.get(dir, colour) >= *min,
            GuardAtom::IsZero { .. } => nb.get(dir, colour) == 0,
        })
    }
}

/// A guarded output: if every atom matches, emit `then`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub guard: Vec<GuardAtom>,
    pub then: DirId,
}

/// Total output function over saturated neighbourhood matrices: the first
/// matching clause wins, otherwise the default direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRule {
    pub clauses: Vec<Clause>,
    pub default: DirId,
}

impl OutputRule {
    /// A rule with no clauses: always the default direction.
    pub fn constant(default: DirId) -> Self {
        OutputRule { clauses: Vec::new(), default }
    }
}

/// Evaluates a rule on a neighbourhood state.
pub fn evaluate(rule: &OutputRule, nb: &NeighbourhoodState) -> Result<DirId> {
    for clause in &rule.clauses {
        let mut all = true;
        for atom in &clause.guard {
            if !atom.matches(nb)? {
                all = false;
                break;
            }
        }
        if all {
            return Ok(clause.then);
        }
    }
    Ok(rule.default)
}

/// The vacuum predicate as a free function (see
/// [`NeighbourhoodState::is_vacuum`]).
pub fn is_vacuum(nb: &NeighbourhoodState, own_dir: DirId) -> bool {
    nb.is_vacuum(own_dir)
}

/// A colour: a named output rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colour {
    pub name: String,
    pub rule: OutputRule,
}

/// A violation found by [`validate_colour_set`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColourSetViolation {
    DuplicateName(String),
    EmptyName(ColourId),
    /// A rule references a direction id outside the environment's set.
    BadDirection { colour: ColourId, dir: DirId },
    /// A guard references a colour id outside the set.
    BadColourRef { colour: ColourId, referenced: ColourId },
    /// A threshold above the cap can never match.
    UnreachableGuard { colour: ColourId, min: u32, cap: u32 },
}

impl fmt::Display for ColourSetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColourSetViolation::DuplicateName(n) => write!(f, "duplicate colour name '{n}'"),
            ColourSetViolation::EmptyName(c) => write!(f, "colour {} has an empty name", c + 1),
            ColourSetViolation::BadDirection { colour, dir } => {
                write!(f, "colour {} references unknown direction {}", colour + 1, dir + 1)
            }
            ColourSetViolation::BadColourRef { colour, referenced } => {
                write!(f, "colour {} references unknown colour {}", colour + 1, referenced + 1)
            }
            ColourSetViolation::UnreachableGuard { colour, min, cap } => {
                write!(
                    f,
                    "unreachable guard: colour {} requires count ≥ {min} but the cap is {cap}",
                    colour + 1
                )
            }
        }
    }
}

/// Validation report for a colour set against an environment and cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourSetReport {
    pub violations: Vec<ColourSetViolation>,
}

impl ColourSetReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ColourSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", lines.join("; "))
        }
    }
}

/// Checks id and dimension consistency of rules and guard bounds `k ≤ K`.
pub fn validate_colour_set(
    colours: &[Colour],
    dirset: &DirectionSet,
    cap: u32,
) -> ColourSetReport {
    fn check_dir(violations: &mut Vec<ColourSetViolation>, m: usize, cid: ColourId, d: DirId) {
        if d >= m {
            violations.push(ColourSetViolation::BadDirection { colour: cid, dir: d });
        }
    }
    let mut violations = Vec::new();
    let r = colours.len();
    let m = dirset.len();
    let mut seen = std::collections::HashSet::new();
    for (cid, colour) in colours.iter().enumerate() {
        if colour.name.is_empty() {
            violations.push(ColourSetViolation::EmptyName(cid));
        } else if !seen.insert(colour.name.clone()) {
            violations.push(ColourSetViolation::DuplicateName(colour.name.clone()));
        }
        check_dir(&mut violations, m, cid, colour.rule.default);
        for clause in &colour.rule.clauses {
            check_dir(&mut violations, m, cid, clause.then);
            for atom in &clause.guard {
                match atom {
                    GuardAtom::AtLeast { dir, colour: rc, min } => {
                        check_dir(&mut violations, m, cid, *dir);
                        if *rc >= r {
                            violations.push(ColourSetViolation::BadColourRef {
                                colour: cid,
                                referenced: *rc,
                            });
                        }
                        if *min > cap {
                            violations.push(ColourSetViolation::UnreachableGuard {
                                colour: cid,
                                min: *min,
                                cap,
                            });
                        }
                    }
                    GuardAtom::IsZero { dir, colour: rc } => {
                        check_dir(&mut violations, m, cid, *dir);
                        if *rc >= r {
                            violations.push(ColourSetViolation::BadColourRef {
                                colour: cid,
                                referenced: *rc,
                            });
                        }
                    }
                }
            }
        }
    }
    ColourSetReport { violations }
}

/// The two-colour reflect pair used by the ring-6 clock: each colour turns to
/// face the other colour's arc when one is present, and keeps its default
/// heading otherwise. Directions: 0 = R, 1 = L; colours: 0 and 1.
pub fn reflect_pair() -> Vec<Colour> {
    let a = Colour {
        name: "a".into(),
        rule: OutputRule {
            clauses: vec![
                Clause { guard: vec![GuardAtom::AtLeast { dir: 1, colour: 1, min: 1 }], then: 1 },
                Clause { guard: vec![GuardAtom::AtLeast { dir: 0, colour: 1, min: 1 }], then: 0 },
            ],
            default: 0,
        },
    };
    let b = Colour {
        name: "b".into(),
        rule: OutputRule {
            clauses: vec![
                Clause { guard: vec![GuardAtom::AtLeast { dir: 0, colour: 0, min: 1 }], then: 0 },
                Clause { guard: vec![GuardAtom::AtLeast { dir: 1, colour: 0, min: 1 }], then: 1 },
            ],
            default: 1,
        },
    };
    vec![a, b]
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: DirId = 0;
    const L: DirId = 1;

    fn reflect_rule_a() -> OutputRule {
        reflect_pair()[0].rule.clone()
    }

    #[test]
    fn evaluate_first_match() {
        // counts[L][b] = 1 → L, even though the R clause would also fire later.
        let rule = reflect_rule_a();
        let mut nb = NeighbourhoodState::empty(2, 2, 3);
        nb.add(L, 1);
        assert_eq!(evaluate(&rule, &nb).unwrap(), L);
    }

    #[test]
    fn evaluate_default_on_empty() {
        let rule = reflect_rule_a();
        let nb = NeighbourhoodState::empty(2, 2, 3);
        assert_eq!(evaluate(&rule, &nb).unwrap(), R);
    }

    #[test]
    fn evaluate_clause_order_decides() {
        let rule = reflect_rule_a();
        let mut nb = NeighbourhoodState::empty(2, 2, 3);
        nb.add(L, 1);
        nb.add(R, 1);
        assert_eq!(evaluate(&rule, &nb).unwrap(), L);
    }

    #[test]
    fn evaluate_dimension_mismatch() {
        let rule = reflect_rule_a();
        let nb = NeighbourhoodState::empty(2, 1, 3); // only one colour
        assert!(evaluate(&rule, &nb).is_err());
    }

    #[test]
    fn vacuum_ignores_own_arc() {
        let mut nb = NeighbourhoodState::empty(2, 2, 3);
        nb.add(R, 0);
        assert!(is_vacuum(&nb, R), "only own arc occupied");
        assert!(!is_vacuum(&nb, L));
        // Co-arc companions are not intersecting, even when saturated.
        let mut nb = NeighbourhoodState::empty(2, 2, 3);
        for _ in 0..5 {
            nb.add(R, 0);
        }
        assert_eq!(nb.get(R, 0), 3, "cap clamps the raw count of 5");
        assert!(is_vacuum(&nb, R));
    }

    #[test]
    fn saturation_clamps() {
        let raw = vec![vec![5, 0], vec![0, 2]];
        let nb = NeighbourhoodState::saturate(&raw, 3);
        assert_eq!(nb.get(0, 0), 3);
        assert_eq!(nb.get(1, 1), 2);
    }

    #[test]
    fn validate_reflect_pair_ok() {
        let dirset = DirectionSet::standard(1);
        let report = validate_colour_set(&reflect_pair(), &dirset, 3);
        assert!(report.is_ok(), "{report}");
    }

    #[test]
    fn validate_rejects_bad_colour_ref() {
        let dirset = DirectionSet::standard(1);
        let mut colours = reflect_pair();
        colours[0].rule.clauses[0].guard =
            vec![GuardAtom::AtLeast { dir: 0, colour: 2, min: 1 }];
        let report = validate_colour_set(&colours, &dirset, 3);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ColourSetViolation::BadColourRef { referenced: 2, .. })));
    }

    #[test]
    fn validate_rejects_unreachable_guard() {
        let dirset = DirectionSet::standard(1);
        let mut colours = reflect_pair();
        colours[1].rule.clauses[0].guard =
            vec![GuardAtom::AtLeast { dir: 0, colour: 0, min: 4 }];
        let report = validate_colour_set(&colours, &dirset, 3);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ColourSetViolation::UnreachableGuard { min: 4, cap: 3, .. })));
    }
}

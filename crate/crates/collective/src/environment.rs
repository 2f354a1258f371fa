//! Direction-regular lattice environments.
//!
//! The environment is the graph the automata move on: vertices are points of
//! an n-dimensional lattice, and every vertex is the head of exactly one arc
//! per direction. A vertex is stored as an integer vector counting steps taken
//! in each of the `n+1` directions, taken modulo `(1,…,1)` — the directions
//! sum to zero, so one step in every direction is a closed loop. This keeps
//! all dynamics and frame algebra exact even when the unit-length Euclidean
//! embedding is irrational; Euclidean coordinates are export-only.
//!
//! ```
//! use collective::environment::{Environment, Topology};
//!
//! let ring = Environment::standard(1, Topology::ring(6).unwrap()).unwrap();
//! assert_eq!(ring.vertex_count(), Some(6));
//! assert_eq!(ring.arc_count(), Some(12));
//! ```

use num_traits::{Signed, Zero};
use std::fmt;

use crate::linalg::Matrix;
use crate::ratio::{to_f64, Rat};
use crate::{Error, Result};

/// Index of a direction within a [`DirectionSet`] (0-based).
pub type DirId = usize;

/// The set of actual spatial directions: `m` lattice vectors in n-space.
///
/// For the frame algebra the set must have `m = n+1` members summing to zero
/// with every n-element subset linearly independent; [`check_actual_direction_count`]
/// reports violations instead of failing construction, so that degenerate sets
/// can be diagnosed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionSet {
    dim: usize,
    names: Vec<String>,
    vectors: Vec<Vec<Rat>>,
}

impl DirectionSet {
    /// Builds a direction set from named lattice vectors.
    ///
    /// Only structural consistency is enforced here (positive dimension,
    /// matching vector lengths, unique non-empty names); the mathematical
    /// invariants are checked by [`check_actual_direction_count`].
    pub fn new(dim: usize, named: Vec<(String, Vec<Rat>)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDirectionSet("dimension must be ≥ 1".into()));
        }
        if named.is_empty() {
            return Err(Error::InvalidDirectionSet("at least one direction required".into()));
        }
        let mut names = Vec::with_capacity(named.len());
        let mut vectors = Vec::with_capacity(named.len());
        for (name, v) in named {
            if name.is_empty() {
                return Err(Error::InvalidDirectionSet("empty direction name".into()));
            }
            if names.contains(&name) {
                return Err(Error::InvalidDirectionSet(format!("duplicate direction name '{name}'")));
            }
            if v.len() != dim {
                return Err(Error::InvalidDirectionSet(format!(
                    "direction '{name}' has {} components, expected {dim}",
                    v.len()
                )));
            }
            names.push(name);
            vectors.push(v);
        }
        Ok(DirectionSet { dim, names, vectors })
    }

    /// The standard set for dimension `n`: the n unit coordinate vectors plus
    /// `(−1,…,−1)`, which sum to zero by construction.
    pub fn standard(n: usize) -> Self {
        let mut named = Vec::with_capacity(n + 1);
        if n == 1 {
            named.push(("R".to_string(), vec![Rat::from_integer(1.into())]));
            named.push(("L".to_string(), vec![Rat::from_integer((-1).into())]));
        } else {
            for i in 0..n {
                let mut v = vec![Rat::zero(); n];
                v[i] = Rat::from_integer(1.into());
                named.push((format!("d{}", i + 1), v));
            }
            let back = vec![Rat::from_integer((-1).into()); n];
            named.push((format!("d{}", n + 1), back));
        }
        DirectionSet::new(n, named).expect("standard set is structurally valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of directions, `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn name(&self, d: DirId) -> &str {
        &self.names[d]
    }

    pub fn vector(&self, d: DirId) -> &[Rat] {
        &self.vectors[d]
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    /// Looks a direction up by name.
    pub fn by_name(&self, name: &str) -> Option<DirId> {
        self.names.iter().position(|n| n == name)
    }
}

/// A violated condition found by [`check_actual_direction_count`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirsetViolation {
    /// `m ≠ n+1`: the affine frame machinery needs exactly n+1 actual directions.
    WrongCount { m: usize, n: usize },
    /// Directions do not sum to the zero vector.
    NonzeroSum,
    /// Two directions coincide.
    Duplicate(DirId, DirId),
    /// A zero direction or a linearly dependent n-subset.
    ZeroOrDependent,
}

impl fmt::Display for DirsetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirsetViolation::WrongCount { m, n } => {
                write!(f, "m ≠ n+1: {m} actual directions in dimension {n}, need {}", n + 1)
            }
            DirsetViolation::NonzeroSum => write!(f, "directions do not sum to zero"),
            DirsetViolation::Duplicate(i, j) => {
                write!(f, "directions {} and {} coincide", i + 1, j + 1)
            }
            DirsetViolation::ZeroOrDependent => write!(f, "zero/dependent directions"),
        }
    }
}

/// Result of validating a direction set against the frame-algebra conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirsetReport {
    pub violations: Vec<DirsetViolation>,
}

impl DirsetReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DirsetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            write!(f, "ok")
        } else {
            let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", lines.join("; "))
        }
    }
}

/// Checks that the direction count and independence conditions for the
/// existence of affine frame transformations hold: `m = n+1`, zero sum,
/// pairwise distinct vectors, and every n-element subset independent.
pub fn check_actual_direction_count(dirset: &DirectionSet) -> DirsetReport {
    let n = dirset.dim();
    let m = dirset.len();
    let mut violations = Vec::new();
    if m != n + 1 {
        violations.push(DirsetViolation::WrongCount { m, n });
    }
    let mut sum = vec![Rat::zero(); n];
    for v in dirset.vectors() {
        for (s, x) in sum.iter_mut().zip(v) {
            *s += x;
        }
    }
    if !sum.iter().all(Zero::is_zero) {
        violations.push(DirsetViolation::NonzeroSum);
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if dirset.vector(i) == dirset.vector(j) {
                violations.push(DirsetViolation::Duplicate(i, j));
            }
        }
    }
    // With zero sum, every n-subset of n+1 vectors is independent iff the
    // whole family has rank n and no vector is zero; for m ≠ n+1 fall back
    // to checking each n-subset directly.
    let has_zero = dirset.vectors().iter().any(|v| v.iter().all(Zero::is_zero));
    let dependent = if m == n + 1 {
        Matrix::from_cols(dirset.vectors()).rank() < n
    } else {
        !all_n_subsets_independent(dirset)
    };
    if has_zero || dependent {
        violations.push(DirsetViolation::ZeroOrDependent);
    }
    DirsetReport { violations }
}

fn all_n_subsets_independent(dirset: &DirectionSet) -> bool {
    let n = dirset.dim();
    let m = dirset.len();
    if m < n {
        return true;
    }
    subsets(m, n).into_iter().all(|idx| {
        let cols: Vec<Vec<Rat>> = idx.iter().map(|&i| dirset.vector(i).to_vec()).collect();
        Matrix::from_cols(&cols).rank() == n
    })
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

/// A lattice vertex: integer step counts per direction, canonicalized so the
/// last component is 0 (two count vectors name the same vertex iff they differ
/// by a multiple of `(1,…,1)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeCoord {
    counts: Vec<i64>,
}

impl LatticeCoord {
    /// Canonicalizes arbitrary counts by subtracting the last component.
    pub fn from_counts(counts: &[i64]) -> Self {
        let last = *counts.last().expect("counts must be non-empty");
        LatticeCoord { counts: counts.iter().map(|c| c - last).collect() }
    }

    /// A vertex from its first n canonical counts (the spatial chart).
    pub fn from_spatial(x: &[i64]) -> Self {
        let mut counts = x.to_vec();
        counts.push(0);
        LatticeCoord { counts }
    }

    pub fn origin(n: usize) -> Self {
        LatticeCoord { counts: vec![0; n + 1] }
    }

    /// Full canonical count vector (length n+1, last entry 0).
    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// First n canonical counts; an integer chart for the vertex lattice.
    pub fn spatial(&self) -> &[i64] {
        &self.counts[..self.counts.len() - 1]
    }
}

/// A unit graph edge, identified by the vertex it ends in and its direction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GraphArc {
    pub head: LatticeCoord,
    pub dir: DirId,
}

/// World topology: the infinite lattice or a torus quotient by a full-rank
/// integer sublattice (given in the spatial chart).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Infinite,
    Torus(TorusLattice),
}

impl Topology {
    /// 1-D ring of circumference `l`.
    pub fn ring(l: i64) -> Result<Topology> {
        Ok(Topology::Torus(TorusLattice::new(vec![vec![l]])?))
    }

    /// General torus quotient from n independent integer basis vectors.
    pub fn torus(basis: Vec<Vec<i64>>) -> Result<Topology> {
        Ok(Topology::Torus(TorusLattice::new(basis)?))
    }
}

/// Full-rank sublattice of the vertex lattice with a Hermite-form reduction
/// to a canonical fundamental-domain representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLattice {
    basis: Vec<Vec<i64>>,
    /// Upper-triangular row-style Hermite form of the basis.
    hnf: Vec<Vec<i64>>,
    cells: u64,
}

impl TorusLattice {
    pub fn new(basis: Vec<Vec<i64>>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidTorusBasis("basis must be n independent n-vectors".into()));
        }
        let hnf = hermite_rows(&basis)
            .ok_or_else(|| Error::InvalidTorusBasis("dependent basis vectors".into()))?;
        let cells: i64 = hnf.iter().enumerate().map(|(i, r)| r[i]).product();
        if cells.abs() < 2 {
            return Err(Error::InvalidTorusBasis(format!(
                "quotient has {} vertex(es); need at least 2",
                cells.abs()
            )));
        }
        Ok(TorusLattice { basis, hnf, cells: cells.unsigned_abs() })
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Number of vertices in the quotient.
    pub fn cells(&self) -> u64 {
        self.cells
    }

    /// Canonical representative of `x` modulo the sublattice.
    pub fn reduce_spatial(&self, x: &[i64]) -> Vec<i64> {
        let mut x = x.to_vec();
        for (i, row) in self.hnf.iter().enumerate() {
            let d = row[i];
            let q = x[i].div_euclid(d);
            if q != 0 {
                for (xj, hj) in x.iter_mut().zip(row) {
                    *xj -= q * hj;
                }
            }
        }
        x
    }
}

/// Row-style Hermite normal form (upper triangular, positive diagonal) of an
/// integer matrix whose rows are the basis vectors. Returns `None` when the
/// rows are linearly dependent.
fn hermite_rows(basis: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = basis.len();
    let mut rows: Vec<Vec<i64>> = basis.to_vec();
    for col in 0..n {
        loop {
            let mut nonzero: Vec<usize> =
                (col..n).filter(|&r| rows[r][col] != 0).collect();
            if nonzero.is_empty() {
                return None;
            }
            nonzero.sort_by_key(|&r| rows[r][col].abs());
            let pivot = nonzero[0];
            rows.swap(col, pivot);
            if nonzero.len() == 1 {
                break;
            }
            for r in (col + 1)..n {
                if rows[r][col] != 0 {
                    let q = rows[r][col] / rows[col][col];
                    for j in 0..n {
                        rows[r][j] -= q * rows[col][j];
                    }
                }
            }
        }
        if rows[col][col] < 0 {
            for x in rows[col].iter_mut() {
                *x = -*x;
            }
        }
    }
    Some(rows)
}

/// A lattice environment: directions, topology, and an export-only Euclidean
/// embedding of the directions as unit vectors summing to zero.
#[derive(Debug, Clone)]
pub struct Environment {
    dirset: DirectionSet,
    topology: Topology,
    embedding: Vec<Vec<f64>>,
}

/// Unit-norm / zero-sum tolerance for user-supplied embeddings.
pub const EMBED_TOLERANCE: f64 = 1e-12;

impl Environment {
    /// The standard environment for dimension `n`: standard direction set and
    /// the symmetric simplex embedding (n=1: `{+1,−1}`; n=2: three unit
    /// vectors at 120°).
    pub fn standard(n: usize, topology: Topology) -> Result<Self> {
        Environment::with_directions(DirectionSet::standard(n), topology, None)
    }

    /// Builds an environment from a validated direction set. When no explicit
    /// embedding is given the regular-simplex embedding is used.
    pub fn with_directions(
        dirset: DirectionSet,
        topology: Topology,
        embedding: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let report = check_actual_direction_count(&dirset);
        if !report.is_ok() {
            return Err(Error::InvalidDirectionSet(report.to_string()));
        }
        let n = dirset.dim();
        if let Topology::Torus(t) = &topology {
            if t.basis().len() != n {
                return Err(Error::InvalidTorusBasis(format!(
                    "torus basis has {} vectors, expected {n}",
                    t.basis().len()
                )));
            }
        }
        let embedding = match embedding {
            Some(e) => {
                validate_embedding(&e, n, dirset.len())?;
                e
            }
            None => simplex_embedding(n),
        };
        Ok(Environment { dirset, topology, embedding })
    }

    pub fn dim(&self) -> usize {
        self.dirset.dim()
    }

    pub fn dirset(&self) -> &DirectionSet {
        &self.dirset
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn embedding(&self) -> &[Vec<f64>] {
        &self.embedding
    }

    /// Vertices in the environment (`None` when infinite).
    pub fn vertex_count(&self) -> Option<u64> {
        match &self.topology {
            Topology::Infinite => None,
            Topology::Torus(t) => Some(t.cells()),
        }
    }

    /// Arcs in the environment: one per vertex and direction.
    pub fn arc_count(&self) -> Option<u64> {
        self.vertex_count().map(|v| v * self.dirset.len() as u64)
    }

    /// Canonical, quotient-reduced form of a vertex.
    pub fn reduce(&self, v: &LatticeCoord) -> LatticeCoord {
        match &self.topology {
            Topology::Infinite => v.clone(),
            Topology::Torus(t) => LatticeCoord::from_spatial(&t.reduce_spatial(v.spatial())),
        }
    }

    /// The vertex reached from `v` by one step in direction `d`.
    pub fn step_vertex(&self, v: &LatticeCoord, d: DirId) -> LatticeCoord {
        let mut counts = v.counts().to_vec();
        counts[d] += 1;
        self.reduce(&LatticeCoord::from_counts(&counts))
    }

    /// Inverse of [`Environment::step_vertex`].
    pub fn unstep_vertex(&self, v: &LatticeCoord, d: DirId) -> LatticeCoord {
        let mut counts = v.counts().to_vec();
        counts[d] -= 1;
        self.reduce(&LatticeCoord::from_counts(&counts))
    }

    /// The vertex an arc starts from.
    pub fn tail(&self, arc: &GraphArc) -> LatticeCoord {
        self.unstep_vertex(&arc.head, arc.dir)
    }

    /// Exact spatial position of a rational count vector in lattice
    /// coordinates: `Σ counts_i · vector(i)`.
    pub fn project(&self, counts: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for (c, v) in counts.iter().zip(self.dirset.vectors()) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += c * x;
            }
        }
        out
    }

    /// Euclidean position of a rational count vector: `Σ counts_i · embedding(i)`.
    pub fn embed_counts(&self, counts: &[Rat]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (c, e) in counts.iter().zip(&self.embedding) {
            let c = to_f64(c);
            for (o, x) in out.iter_mut().zip(e) {
                *o += c * x;
            }
        }
        out
    }

    /// Euclidean position of a vertex.
    pub fn euclidean_position(&self, v: &LatticeCoord) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (&c, e) in v.counts().iter().zip(&self.embedding) {
            for (o, x) in out.iter_mut().zip(e) {
                *o += c as f64 * x;
            }
        }
        out
    }
}

fn validate_embedding(e: &[Vec<f64>], n: usize, m: usize) -> Result<()> {
    if e.len() != m || e.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "embedding must map {m} directions to {n}-vectors"
        )));
    }
    let mut sum = vec![0.0; n];
    for v in e {
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > EMBED_TOLERANCE {
            return Err(Error::InvalidDirectionSet(format!(
                "embedding vector has norm {norm}, expected 1"
            )));
        }
        for (s, x) in sum.iter_mut().zip(v) {
            *s += x;
        }
    }
    if sum.iter().any(|s| s.abs() > EMBED_TOLERANCE) {
        return Err(Error::InvalidDirectionSet("embedding vectors do not sum to zero".into()));
    }
    Ok(())
}

/// `n+1` unit vectors in n-space summing to zero: the vertices of a regular
/// n-simplex, with the first vector on the first coordinate axis.
pub fn simplex_embedding(n: usize) -> Vec<Vec<f64>> {
    if n == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    let inner = simplex_embedding(n - 1);
    let c = (1.0 - 1.0 / (n as f64 * n as f64)).sqrt();
    let mut out = Vec::with_capacity(n + 1);
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    out.push(first);
    for w in inner {
        let mut v = Vec::with_capacity(n);
        v.push(-1.0 / n as f64);
        v.extend(w.iter().map(|x| x * c));
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rint};

    #[test]
    fn standard_1d_directions() {
        // Forced by zero sum and unit length: D = {(+1), (−1)}.
        let d = DirectionSet::standard(1);
        assert_eq!(d.len(), 2);
        assert_eq!(d.vector(0), &[rint(1)]);
        assert_eq!(d.vector(1), &[rint(-1)]);
        assert!(check_actual_direction_count(&d).is_ok());
    }

    #[test]
    fn standard_2d_directions() {
        // (1,0), (0,1), (−1,−1): zero sum, pairwise-independent pairs.
        let d = DirectionSet::standard(2);
        assert_eq!(d.len(), 3);
        assert_eq!(d.vector(0), &[rint(1), rint(0)]);
        assert_eq!(d.vector(1), &[rint(0), rint(1)]);
        assert_eq!(d.vector(2), &[rint(-1), rint(-1)]);
        let sum: Vec<Rat> = (0..2)
            .map(|i| d.vectors().iter().map(|v| v[i].clone()).sum())
            .collect();
        assert!(sum.iter().all(num_traits::Zero::is_zero));
        assert!(check_actual_direction_count(&d).is_ok());
    }

    #[test]
    fn ring_six_has_six_vertices_twelve_arcs() {
        let env = Environment::standard(1, Topology::ring(6).unwrap()).unwrap();
        assert_eq!(env.vertex_count(), Some(6));
        assert_eq!(env.arc_count(), Some(12));
        // Enumerate the quotient classes by walking right from the origin.
        let mut seen = std::collections::HashSet::new();
        let mut v = LatticeCoord::origin(1);
        for _ in 0..6 {
            assert!(seen.insert(v.clone()));
            v = env.step_vertex(&v, 0);
        }
        assert_eq!(v, LatticeCoord::origin(1), "period 6 along R");
    }

    #[test]
    fn direction_count_check_accepts_and_rejects() {
        // Accepted: (n, m) = (1,2), (2,3), (3,4).
        for n in [1usize, 2, 3] {
            assert!(check_actual_direction_count(&DirectionSet::standard(n)).is_ok());
        }
        // (2, 4) rejected with the count diagnostic.
        let d24 = DirectionSet::new(
            2,
            vec![
                ("a".into(), vec![rint(1), rint(0)]),
                ("b".into(), vec![rint(0), rint(1)]),
                ("c".into(), vec![rint(-1), rint(0)]),
                ("d".into(), vec![rint(0), rint(-1)]),
            ],
        )
        .unwrap();
        let report = check_actual_direction_count(&d24);
        assert!(report
            .violations
            .contains(&DirsetViolation::WrongCount { m: 4, n: 2 }));
        // Degenerate input: zero/dependent directions.
        let bad = DirectionSet::new(
            2,
            vec![
                ("a".into(), vec![rint(1), rint(0)]),
                ("b".into(), vec![rint(-1), rint(0)]),
                ("c".into(), vec![rint(0), rint(0)]),
            ],
        )
        .unwrap();
        let report = check_actual_direction_count(&bad);
        assert!(report.violations.contains(&DirsetViolation::ZeroOrDependent));
    }

    #[test]
    fn canonicalization_fixes_last_component() {
        let v = LatticeCoord::from_counts(&[3, 1, 2]);
        assert_eq!(v.counts(), &[1, -1, 0]);
        // Adding (1,…,1)·k never changes the canonical form.
        let w = LatticeCoord::from_counts(&[8, 6, 7]);
        assert_eq!(v, w);
        // Idempotent.
        assert_eq!(LatticeCoord::from_counts(v.counts()), v);
    }

    #[test]
    fn step_examples() {
        let inf1 = Environment::standard(1, Topology::Infinite).unwrap();
        let v0 = LatticeCoord::origin(1);
        assert_eq!(inf1.step_vertex(&v0, 0).spatial(), &[1]);

        let ring = Environment::standard(1, Topology::ring(6).unwrap()).unwrap();
        let v5 = LatticeCoord::from_spatial(&[5]);
        assert_eq!(ring.step_vertex(&v5, 0), LatticeCoord::origin(1));

        let inf2 = Environment::standard(2, Topology::Infinite).unwrap();
        let v = inf2.step_vertex(&LatticeCoord::origin(2), 2);
        assert_eq!(v.spatial(), &[-1, -1]);
    }

    #[test]
    fn step_is_a_bijection() {
        let ring = Environment::standard(1, Topology::ring(6).unwrap()).unwrap();
        for x in 0..6 {
            let v = LatticeCoord::from_spatial(&[x]);
            for d in 0..2 {
                let w = ring.step_vertex(&v, d);
                assert_eq!(ring.unstep_vertex(&w, d), v);
            }
        }
    }

    #[test]
    fn euclidean_positions() {
        let inf1 = Environment::standard(1, Topology::Infinite).unwrap();
        let v = LatticeCoord::from_counts(&[3, 0]);
        assert_eq!(inf1.euclidean_position(&v), vec![3.0]);

        let inf2 = Environment::standard(2, Topology::Infinite).unwrap();
        // counts (1,1,1) ≡ (0,0,0): embedded directions sum to ~0.
        let v = LatticeCoord::from_counts(&[1, 1, 1]);
        let p = inf2.euclidean_position(&v);
        assert!(p.iter().all(|x| x.abs() < EMBED_TOLERANCE));
        // counts (1,0,0) sits on the first embedding vector.
        let v = LatticeCoord::from_counts(&[1, 0, 0]);
        let p = inf2.euclidean_position(&v);
        assert!((p[0] - 1.0).abs() < EMBED_TOLERANCE && p[1].abs() < EMBED_TOLERANCE);
    }

    #[test]
    fn embedding_matches_steps_on_infinite_lattice() {
        for n in [1usize, 2, 3] {
            let env = Environment::standard(n, Topology::Infinite).unwrap();
            let v = LatticeCoord::origin(n);
            for d in 0..=n {
                let w = env.step_vertex(&v, d);
                let pv = env.euclidean_position(&v);
                let pw = env.euclidean_position(&w);
                for i in 0..n {
                    assert!((pw[i] - pv[i] - env.embedding()[d][i]).abs() < EMBED_TOLERANCE);
                }
            }
        }
    }

    #[test]
    fn simplex_embedding_is_unit_and_zero_sum() {
        for n in 1..=4 {
            let e = simplex_embedding(n);
            assert_eq!(e.len(), n + 1);
            let mut sum = vec![0.0; n];
            for v in &e {
                let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-14, "n={n}: norm {norm}");
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
            }
            assert!(sum.iter().all(|s| s.abs() < 1e-14), "n={n}: sum {sum:?}");
        }
    }

    #[test]
    fn torus_2d_reduction_commutes_with_steps() {
        let topo = Topology::torus(vec![vec![4, 0], vec![0, 3]]).unwrap();
        let env = Environment::standard(2, topo).unwrap();
        assert_eq!(env.vertex_count(), Some(12));
        // Walking d1 four times or d2 three times closes a loop.
        let mut v = LatticeCoord::origin(2);
        for _ in 0..4 {
            v = env.step_vertex(&v, 0);
        }
        assert_eq!(v, LatticeCoord::origin(2));
        for _ in 0..3 {
            v = env.step_vertex(&v, 1);
        }
        assert_eq!(v, LatticeCoord::origin(2));
        // Skew basis still works: reduction is a fundamental domain.
        let topo = Topology::torus(vec![vec![2, 1], vec![0, 3]]).unwrap();
        let env = Environment::standard(2, topo).unwrap();
        assert_eq!(env.vertex_count(), Some(6));
        let mut seen = std::collections::HashSet::new();
        for x in -6..6 {
            for y in -6..6 {
                seen.insert(env.reduce(&LatticeCoord::from_spatial(&[x, y])));
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn torus_rejects_degenerate_bases() {
        assert!(Topology::ring(1).is_err());
        assert!(Topology::ring(0).is_err());
        assert!(Topology::torus(vec![vec![2, 4], vec![1, 2]]).is_err());
    }

    #[test]
    fn project_standard_is_spatial_chart() {
        let env = Environment::standard(2, Topology::Infinite).unwrap();
        let counts = vec![rint(2), rint(1), rint(1)];
        // 2·(1,0) + 1·(0,1) + 1·(−1,−1) = (1, 0)
        assert_eq!(env.project(&counts), vec![rint(1), rint(0)]);
        let custom = env.project(&[rat(1, 2), rint(0), rint(0)]);
        assert_eq!(custom, vec![rat(1, 2), rint(0)]);
    }
}

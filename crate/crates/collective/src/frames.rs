//! Exact-rational reference-frame algebra.
//!
//! Inertial frames are connected by affine maps whose eigenvectors are the
//! actual space-time directions `e_i = (i⃗, 1/(n+1))`. Writing `M` for the
//! matrix with the `e_i` as columns, every frame map factors as
//! `L = M·Λ·M⁻¹` with `Λ` diagonal and positive. A boost is therefore fully
//! described by its diagonal `λ` — equivalently by the motion parameters
//! `(v, w)`: the spatial velocity and the proper-time velocity of the moving
//! frame. Composition and inversion act entrywise on `λ`, which makes the
//! relativity-like corollaries (velocity addition, reciprocity, rod length
//! measurement) one-line consequences.
//!
//! The time component `1/(n+1)` is the normalization that pairs the identity
//! boost with `(v, w) = (0, 1)`: one unit of coordinate time in a frame's own
//! basis is the Q-vector `(1,…,1)`. An `e_i = (i⃗, 1)` "step basis" variant is
//! exposed for experiments; it is not the normative convention and none of the
//! motion-parameter identities are claimed for it.
//!
//! No floating point appears anywhere in this module.
//!
//! ```
//! use collective::environment::DirectionSet;
//! use collective::frames::{build_basis, lambda_from_motion, motion_from_lambda, MotionParams};
//! use collective::ratio::rat;
//!
//! let basis = build_basis(&DirectionSet::standard(1)).unwrap();
//! let boost = lambda_from_motion(&basis, &MotionParams::new(vec![rat(4, 5)], rat(3, 5))).unwrap();
//! let back = motion_from_lambda(&basis, &boost).unwrap();
//! assert_eq!(back.v, vec![rat(4, 5)]);
//! assert_eq!(back.w, rat(3, 5));
//! ```

use num_traits::{One, Signed, Zero};

use crate::environment::{check_actual_direction_count, DirectionSet};
use crate::linalg::Matrix;
use crate::ratio::{format_rat, Rat};
use crate::{Error, Result};

/// Which time component the actual directions carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisKind {
    /// `e_i = (i⃗, 1/(n+1))` — the normative convention: the identity boost
    /// then corresponds to `(v, w) = (0, 1)`.
    #[default]
    Normalized,
    /// `e_i = (i⃗, 1)` — one motion step per unit of time. Experimental.
    Step,
}

/// The basis of actual space-time directions: `M` with columns `e_i`, plus
/// its exact inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActualBasis {
    dim: usize,
    kind: BasisKind,
    m: Matrix,
    m_inv: Matrix,
}

impl ActualBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.m_inv
    }

    /// The i-th actual direction as an (n+1)-event.
    pub fn direction(&self, i: usize) -> Vec<Rat> {
        (0..=self.dim).map(|r| self.m[(r, i)].clone()).collect()
    }

    /// Coordinates of an event in the actual reference frame: `M⁻¹·event`.
    pub fn q_coordinates(&self, event: &[Rat]) -> Vec<Rat> {
        self.m_inv.mul_vec(event)
    }

    /// Back from Q-coordinates to the frame's own coordinates: `M·q`.
    pub fn from_q(&self, q: &[Rat]) -> Vec<Rat> {
        self.m.mul_vec(q)
    }
}

/// Builds the normative actual basis from a validated direction set.
pub fn build_basis(dirset: &DirectionSet) -> Result<ActualBasis> {
    build_basis_with(dirset, BasisKind::Normalized)
}

/// Builds an actual basis with an explicit time-component convention.
pub fn build_basis_with(dirset: &DirectionSet, kind: BasisKind) -> Result<ActualBasis> {
    let report = check_actual_direction_count(dirset);
    if !report.is_ok() {
        return Err(Error::InvalidDirectionSet(report.to_string()));
    }
    let n = dirset.dim();
    let time = match kind {
        BasisKind::Normalized => Rat::new(1.into(), (n as i64 + 1).into()),
        BasisKind::Step => Rat::one(),
    };
    let cols: Vec<Vec<Rat>> = dirset
        .vectors()
        .iter()
        .map(|v| {
            let mut col = v.clone();
            col.push(time.clone());
            col
        })
        .collect();
    let m = Matrix::from_cols(&cols);
    let m_inv = m.inverse()?;
    Ok(ActualBasis { dim: n, kind, m, m_inv })
}

/// Motion parameters of a boost: spatial velocity `v` in the source frame and
/// proper-time velocity `w > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotionParams {
    pub v: Vec<Rat>,
    pub w: Rat,
}

impl MotionParams {
    pub fn new(v: Vec<Rat>, w: Rat) -> Self {
        MotionParams { v, w }
    }

    /// The identity motion `(0, 1)`.
    pub fn rest(n: usize) -> Self {
        MotionParams { v: vec![Rat::zero(); n], w: Rat::one() }
    }
}

/// A diagonal boost: positive eigenvalues on the actual directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalBoost {
    lambda: Vec<Rat>,
}

impl DiagonalBoost {
    /// Validates positivity of every entry.
    pub fn new(lambda: Vec<Rat>) -> Result<Self> {
        for (i, x) in lambda.iter().enumerate() {
            if !x.is_positive() {
                return Err(Error::OutsideCone(format!("λ_{} = {}", i + 1, format_rat(x))));
            }
        }
        Ok(DiagonalBoost { lambda })
    }

    pub fn identity(n: usize) -> Self {
        DiagonalBoost { lambda: vec![Rat::one(); n + 1] }
    }

    pub fn entries(&self) -> &[Rat] {
        &self.lambda
    }

    pub fn is_identity(&self) -> bool {
        self.lambda.iter().all(One::is_one)
    }

    /// `Λ_CA = Λ_CB ∘ Λ_BA`: entrywise product.
    pub fn compose(&self, other: &DiagonalBoost) -> DiagonalBoost {
        debug_assert_eq!(self.lambda.len(), other.lambda.len());
        DiagonalBoost {
            lambda: self.lambda.iter().zip(&other.lambda).map(|(a, b)| a * b).collect(),
        }
    }

    /// `Λ_AB = Λ_BA⁻¹`: entrywise reciprocal (positivity is preserved).
    pub fn invert(&self) -> DiagonalBoost {
        DiagonalBoost { lambda: self.lambda.iter().map(|x| x.recip()).collect() }
    }
}

/// The diagonal boost realizing motion `(v, w)`: the image of one unit of
/// proper time, `(0,…,0,1)` in the moving frame, is `(v/w, 1/w)` in the
/// source frame, and its Q-coordinates are the diagonal.
pub fn lambda_from_motion(basis: &ActualBasis, motion: &MotionParams) -> Result<DiagonalBoost> {
    if motion.v.len() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "velocity has {} components, expected {}",
            motion.v.len(),
            basis.dim()
        )));
    }
    if !motion.w.is_positive() {
        return Err(Error::DegenerateFrame);
    }
    let mut event: Vec<Rat> = motion.v.iter().map(|x| x / &motion.w).collect();
    event.push(motion.w.recip());
    DiagonalBoost::new(basis.q_coordinates(&event))
}

/// Recovers the motion parameters from a boost: with `(a, b) = M·λ`,
/// `w = 1/b` and `v = a/b`. Exact inverse of [`lambda_from_motion`].
pub fn motion_from_lambda(basis: &ActualBasis, boost: &DiagonalBoost) -> Result<MotionParams> {
    let y = basis.from_q(boost.entries());
    let (b, a) = y.split_last().expect("basis events are non-empty");
    if !b.is_positive() {
        return Err(Error::DegenerateFrame);
    }
    let v = a.iter().map(|x| x / b).collect();
    Ok(MotionParams { v, w: b.recip() })
}

/// An exact frame map `L = M·Λ·M⁻¹` together with its provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMap {
    l: Matrix,
    lambda: DiagonalBoost,
    basis: ActualBasis,
}

impl FrameMap {
    pub fn matrix(&self) -> &Matrix {
        &self.l
    }

    pub fn boost(&self) -> &DiagonalBoost {
        &self.lambda
    }

    pub fn basis(&self) -> &ActualBasis {
        &self.basis
    }

    /// Applies the map to an (n+1)-event.
    pub fn transform(&self, event: &[Rat]) -> Vec<Rat> {
        self.l.mul_vec(event)
    }

    /// The inverse frame map (diagonal reciprocal, re-multiplied exactly).
    pub fn inverse(&self) -> FrameMap {
        frame_map(&self.basis, &self.lambda.invert())
    }

    /// Verifies the eigenvector property `L·e_i = λ_i·e_i` exactly.
    pub fn eigencheck(&self) -> bool {
        (0..self.basis.dim() + 1).all(|i| {
            let e = self.basis.direction(i);
            let lhs = self.transform(&e);
            let rhs: Vec<Rat> = e.iter().map(|x| x * &self.lambda.entries()[i]).collect();
            lhs == rhs
        })
    }
}

/// Builds the frame map of a boost: exact product `M·Λ·M⁻¹`.
pub fn frame_map(basis: &ActualBasis, boost: &DiagonalBoost) -> FrameMap {
    let l = basis.matrix().mul_diag(boost.entries()).mul(basis.inverse_matrix());
    FrameMap { l, lambda: boost.clone(), basis: basis.clone() }
}

/// Composes two motions through the boost algebra:
/// `motion(Λ(v1,w1)·Λ(v2,w2))`.
pub fn velocity_addition(
    basis: &ActualBasis,
    first: &MotionParams,
    second: &MotionParams,
) -> Result<MotionParams> {
    let l1 = lambda_from_motion(basis, first)?;
    let l2 = lambda_from_motion(basis, second)?;
    motion_from_lambda(basis, &l1.compose(&l2))
}

/// The inverse-frame relation: returns `w_AB·w_BA`, where `w_AB` is the
/// proper-time velocity of the inverted boost. In one dimension this equals
/// `1 − v²/4` exactly, independent of `w`.
pub fn reciprocity_check(basis: &ActualBasis, motion: &MotionParams) -> Result<Rat> {
    let boost = lambda_from_motion(basis, motion)?;
    let back = motion_from_lambda(basis, &boost.invert())?;
    Ok(&motion.w * &back.w)
}

/// Transforms the static worldlines of two rest points by the frame map,
/// intersects them with the constant-time slice `t = slice_t` of the target
/// frame, and returns the exact spatial separation vector on that slice.
pub fn measure_separation(
    map: &FrameMap,
    rest_a: &[Rat],
    rest_b: &[Rat],
    slice_t: &Rat,
) -> Result<Vec<Rat>> {
    let a = intersect_worldline(map, rest_a, slice_t)?;
    let b = intersect_worldline(map, rest_b, slice_t)?;
    Ok(b.iter().zip(&a).map(|(x, y)| x - y).collect())
}

/// One-dimensional rod length: absolute value of the separation on the slice.
pub fn measure_length(
    map: &FrameMap,
    rest_a: &[Rat],
    rest_b: &[Rat],
    slice_t: &Rat,
) -> Result<Rat> {
    if map.basis().dim() != 1 {
        return Err(Error::DimensionMismatch(
            "scalar rod length is defined in dimension 1; use measure_separation".into(),
        ));
    }
    Ok(measure_separation(map, rest_a, rest_b, slice_t)?[0].abs())
}

/// Spatial point where the transformed worldline of a static source-frame
/// point crosses the target-frame slice `t = slice_t`.
fn intersect_worldline(map: &FrameMap, rest: &[Rat], slice_t: &Rat) -> Result<Vec<Rat>> {
    let n = map.basis().dim();
    if rest.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rest point has {} components, expected {n}",
            rest.len()
        )));
    }
    // L·(p, s) = L·(p, 0) + s·L·(0, 1); solve the time row for s.
    let mut base = rest.to_vec();
    base.push(Rat::zero());
    let u = map.transform(&base);
    let mut tick = vec![Rat::zero(); n];
    tick.push(Rat::one());
    let z = map.transform(&tick);
    let zt = &z[n];
    if zt.is_zero() {
        return Err(Error::WorldlineParallel);
    }
    let s = (slice_t - &u[n]) / zt;
    Ok((0..n).map(|i| &u[i] + &s * &z[i]).collect())
}

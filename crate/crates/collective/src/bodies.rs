//! Body kinematics and state bookkeeping.
//!
//! A body is a finite set of elementary bodies treated as one object; bodies
//! may overlap and share parts. This module measures bodies on recorded
//! traces: average coordinate, spatial velocity, external-state change
//! detection, straight-shift equivalence of snapshots, periodicity detection,
//! and the proper-time assignment for periodic (inertial) bodies.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

use crate::engine::{ElemId, Trace};
use crate::environment::DirId;
use crate::ratio::{format_rat, vec_lex_cmp, vec_scale, vec_sub, Rat};
use crate::{Error, Result};

/// A named finite set of elementary bodies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Body {
    pub name: String,
    pub members: Vec<ElemId>,
}

impl Body {
    pub fn new(name: impl Into<String>, members: Vec<ElemId>) -> Self {
        Body { name: name.into(), members }
    }
}

fn member_indices(trace: &Trace, body: &Body) -> Result<Vec<usize>> {
    body.members
        .iter()
        .map(|&id| trace.elem_index(id).ok_or(Error::UnknownMember(id)))
        .collect()
}

fn check_time(trace: &Trace, t: u64, need_next: bool) -> Result<()> {
    let limit = if need_next { trace.horizon.saturating_sub(1) } else { trace.horizon };
    if t > limit {
        return Err(Error::OutOfHorizon(t.to_string()));
    }
    Ok(())
}

/// The absolute (average) coordinate of the body at integral time `t`,
/// in exact lattice coordinates of the unwrapped positions.
pub fn avg_position(trace: &Trace, body: &Body, t: u64) -> Result<Vec<Rat>> {
    check_time(trace, t, false)?;
    let idx = member_indices(trace, body)?;
    let n = trace.model.env.dim();
    let mut sum = vec![Rat::zero(); n];
    for &i in &idx {
        for (s, x) in sum.iter_mut().zip(trace.position(i, t)) {
            *s += x;
        }
    }
    let k = Rat::from_integer(BigInt::from(idx.len() as u64));
    Ok(sum.into_iter().map(|s| s / &k).collect())
}

/// The absolute spatial velocity `x_B(t+1) − x_B(t)`.
pub fn velocity(trace: &Trace, body: &Body, t: u64) -> Result<Vec<Rat>> {
    check_time(trace, t, true)?;
    Ok(vec_sub(&avg_position(trace, body, t + 1)?, &avg_position(trace, body, t)?))
}

/// True iff some member's direction at `t+1` differs from its direction at
/// `t` — the body changed its external state at `t`.
pub fn changes_external_state(trace: &Trace, body: &Body, t: u64) -> Result<bool> {
    check_time(trace, t, true)?;
    let idx = member_indices(trace, body)?;
    Ok(idx.iter().any(|&i| trace.elems[i].turned(t)))
}

/// True iff every member moves in the same direction at time `t`.
pub fn all_codirected(trace: &Trace, body: &Body, t: u64) -> Result<bool> {
    check_time(trace, t, false)?;
    let idx = member_indices(trace, body)?;
    let first = trace.elems[idx[0]].dir(t);
    Ok(idx.iter().all(|&i| trace.elems[i].dir(t) == first))
}

/// Euclidean norm of the embedded body velocity (export layer).
pub fn embedded_speed(trace: &Trace, body: &Body, t: u64) -> Result<f64> {
    check_time(trace, t, true)?;
    let idx = member_indices(trace, body)?;
    // Mean of the embedded member step vectors equals the embedded velocity;
    // compute it from count differences to stay in the embedding layer.
    let mut counts = vec![Rat::zero(); trace.model.env.dirset().len()];
    for &i in &idx {
        let a = trace.tail_counts(i, t);
        let b = trace.tail_counts(i, t + 1);
        for (c, (x, y)) in counts.iter_mut().zip(b.iter().zip(a)) {
            *c += Rat::from_integer(BigInt::from(x - y));
        }
    }
    let k = Rat::from_integer(BigInt::from(idx.len() as u64));
    let counts: Vec<Rat> = counts.into_iter().map(|c| c / &k).collect();
    let e = trace.model.env.embed_counts(&counts);
    Ok(e.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// A snapshot of a body at an integral time: the multiset of
/// (colour, unwrapped position, direction), sorted canonically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSnapshot {
    entries: Vec<(usize, Vec<Rat>, DirId)>,
}

impl ExternalSnapshot {
    pub fn entries(&self) -> &[(usize, Vec<Rat>, DirId)] {
        &self.entries
    }

    fn sorted(mut entries: Vec<(usize, Vec<Rat>, DirId)>) -> Self {
        entries.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| vec_lex_cmp(&a.1, &b.1)).then(a.2.cmp(&b.2))
        });
        ExternalSnapshot { entries }
    }

    /// Lexicographically least member position.
    fn min_position(&self) -> Vec<Rat> {
        self.entries
            .iter()
            .map(|(_, p, _)| p.clone())
            .min_by(|a, b| vec_lex_cmp(a, b))
            .expect("bodies are non-empty")
    }

    /// Translation-invariant configuration key: entries relative to the
    /// lexicographically least member position.
    fn relative_key(&self) -> Vec<(usize, Vec<Rat>, DirId)> {
        let min = self.min_position();
        let mut rel: Vec<(usize, Vec<Rat>, DirId)> = self
            .entries
            .iter()
            .map(|(c, p, d)| (*c, vec_sub(p, &min), *d))
            .collect();
        rel.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| vec_lex_cmp(&a.1, &b.1)).then(a.2.cmp(&b.2))
        });
        rel
    }
}

/// Captures the body's snapshot at integral time `t`.
pub fn snapshot(trace: &Trace, body: &Body, t: u64) -> Result<ExternalSnapshot> {
    check_time(trace, t, false)?;
    let idx = member_indices(trace, body)?;
    let entries = idx
        .iter()
        .map(|&i| (trace.elems[i].colour, trace.position(i, t), trace.elems[i].dir(t)))
        .collect();
    Ok(ExternalSnapshot::sorted(entries))
}

/// Straight-shift equivalence: returns a shift witness `k` (either sign;
/// negative values advance the other snapshot) such that moving every element
/// of `a` by `k` steps along its own direction yields `b` exactly.
///
/// The search bound defaults to four times the coordinate diameter of the two
/// snapshots.
pub fn same_external_state(
    trace: &Trace,
    a: &ExternalSnapshot,
    b: &ExternalSnapshot,
    k_max: Option<i64>,
) -> Option<i64> {
    if a.entries.len() != b.entries.len() {
        return None;
    }
    let dirs = trace.model.env.dirset();
    let k_max = k_max.unwrap_or_else(|| {
        // Diameter of the union of both snapshots: shifts beyond it cannot
        // bring the configurations into coincidence.
        let mut diameter = Rat::zero();
        let n = trace.model.env.dim();
        for axis in 0..n {
            let vals: Vec<&Rat> = a
                .entries
                .iter()
                .chain(&b.entries)
                .map(|(_, p, _)| &p[axis])
                .collect();
            if let (Some(max), Some(min)) = (vals.iter().max(), vals.iter().min()) {
                let spread = (*max).clone() - (*min).clone();
                if spread > diameter {
                    diameter = spread;
                }
            }
        }
        let d: i64 = diameter.ceil().to_integer().try_into().unwrap_or(i64::MAX / 8);
        4 * std::cmp::max(d, 1)
    });
    for k in -k_max..=k_max {
        let kr = Rat::from_integer(BigInt::from(k));
        let shifted: Vec<(usize, Vec<Rat>, DirId)> = a
            .entries
            .iter()
            .map(|(c, p, d)| {
                let step = vec_scale(dirs.vector(*d), &kr);
                (*c, p.iter().zip(&step).map(|(x, s)| x + s).collect(), *d)
            })
            .collect();
        if ExternalSnapshot::sorted(shifted).entries == b.entries {
            return Some(k);
        }
    }
    None
}

/// Evidence that a body is spatially periodic: from phase `t0` on, the
/// configuration repeats every `period` steps, translated by `displacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityCertificate {
    pub period: u64,
    /// Spatial translation per period, in exact lattice coordinates.
    pub displacement: Vec<Rat>,
    pub t0: u64,
}

impl std::fmt::Display for PeriodicityCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let delta: Vec<String> = self.displacement.iter().map(format_rat).collect();
        write!(f, "P={} Δ=({}) t0={}", self.period, delta.join(", "), self.t0)
    }
}

/// Searches for the smallest `(t0, P)` (lexicographically) such that for all
/// recorded `t ∈ [t0, horizon−P]` the configuration at `t+P` equals the
/// configuration at `t` translated by a constant Δ. The certificate is
/// verified against the full recorded horizon; at least two full periods of
/// evidence are required.
pub fn detect_period(
    trace: &Trace,
    body: &Body,
    p_max: Option<u64>,
) -> Result<Option<PeriodicityCertificate>> {
    let horizon = trace.horizon;
    let p_max = p_max.unwrap_or(horizon / 2).min(horizon / 2);
    if p_max == 0 {
        return Ok(None);
    }
    let keys: Vec<Vec<(usize, Vec<Rat>, DirId)>> = (0..=horizon)
        .map(|t| Ok(snapshot(trace, body, t)?.relative_key()))
        .collect::<Result<_>>()?;
    let mins: Vec<Vec<Rat>> = (0..=horizon)
        .map(|t| Ok(snapshot(trace, body, t)?.min_position()))
        .collect::<Result<_>>()?;
    for t0 in 0..horizon {
        for period in 1..=p_max {
            if t0 + 2 * period > horizon {
                break;
            }
            let delta = vec_sub(&mins[(t0 + period) as usize], &mins[t0 as usize]);
            let ok = (t0..=(horizon - period)).all(|t| {
                keys[(t + period) as usize] == keys[t as usize]
                    && vec_sub(&mins[(t + period) as usize], &mins[t as usize]) == delta
            });
            if ok {
                return Ok(Some(PeriodicityCertificate { period, displacement: delta, t0 }));
            }
        }
    }
    Ok(None)
}

/// Proper time for a periodic body: piecewise linear with constant slope
/// `w = τ_per_period / P` from the phase start, degenerating to `w = 0` when
/// the body never turns during a period (maximal-speed motion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperTimeAssignment {
    pub tau_per_period: Rat,
    pub w: Rat,
    pub t0: u64,
}

impl ProperTimeAssignment {
    /// Whether the proper time is frozen (`w = 0`).
    pub fn is_degenerate(&self) -> bool {
        self.w.is_zero()
    }

    /// `τ_B(t) = w·(t − t0)` for `t ≥ t0`.
    pub fn tau_at(&self, t: u64) -> Result<Rat> {
        if t < self.t0 {
            return Err(Error::OutOfHorizon(t.to_string()));
        }
        Ok(&self.w * Rat::from_integer(BigInt::from(t - self.t0)))
    }
}

/// Assigns proper time to a certified periodic body. When the period contains
/// no turn at all the assignment is the degenerate `w = 0`, regardless of
/// `tau_per_period`.
pub fn assign_proper_time(
    trace: &Trace,
    body: &Body,
    cert: &PeriodicityCertificate,
    tau_per_period: &Rat,
) -> Result<ProperTimeAssignment> {
    if !tau_per_period.is_positive() {
        return Err(Error::NonPositiveProperTime(format_rat(tau_per_period)));
    }
    let mut turns = false;
    for t in cert.t0..(cert.t0 + cert.period) {
        if changes_external_state(trace, body, t)? {
            turns = true;
            break;
        }
    }
    let w = if turns {
        tau_per_period / Rat::from_integer(BigInt::from(cert.period))
    } else {
        Rat::zero()
    };
    Ok(ProperTimeAssignment { tau_per_period: tau_per_period.clone(), w, t0: cert.t0 })
}

/// Mean velocity over one period, `Δ / P` — the `v` used to build the body's
/// inertial frame.
pub fn period_velocity(cert: &PeriodicityCertificate) -> Vec<Rat> {
    let p = Rat::from_integer(BigInt::from(cert.period));
    cert.displacement.iter().map(|d| d / &p).collect()
}

/// Orders two snapshots for deterministic reporting.
pub fn snapshot_cmp(a: &ExternalSnapshot, b: &ExternalSnapshot) -> Ordering {
    a.entries.len().cmp(&b.entries.len()).then_with(|| {
        for ((c1, p1, d1), (c2, p2, d2)) in a.entries.iter().zip(&b.entries) {
            let ord = c1.cmp(c2).then_with(|| vec_lex_cmp(p1, p2)).then(d1.cmp(d2));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    })
}

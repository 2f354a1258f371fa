//! Affine isomorphism of bodies.
//!
//! Two inertial bodies are in the same internal state at some moments of
//! their proper time iff a colour-preserving bijection maps the members of
//! one onto the members of the other with exactly equal own-frame positions.
//! This module builds the own frame of a periodic body (boost from its
//! measured mean velocity and proper-time velocity, centered on its average
//! coordinate at the phase start), snapshots member worldlines at rational
//! frame times, and searches for isomorphism witnesses.
//!
//! Snapshots are exact: member worldlines are piecewise linear in absolute
//! coordinates, the frame map is linear, so transformed worldlines are again
//! piecewise linear with rational breakpoints, and sampling is rational
//! interpolation. No tolerance parameter exists here.
//!
//! The witness search covers the transformed breakpoints of both bodies over
//! one period each, plus every τ at which some member of one body passes
//! exactly through a position occupied in the other body's snapshot (the
//! pairwise alignment offsets). Any witness that persists on a τ-interval is
//! found this way; isolated single-instant crossings away from all
//! breakpoints are not searched.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bodies::{
    assign_proper_time, avg_position, detect_period, period_velocity, velocity, Body,
    PeriodicityCertificate, ProperTimeAssignment,
};
use crate::engine::{ElemId, Trace};
use crate::frames::{build_basis, frame_map, lambda_from_motion, FrameMap, MotionParams};
use crate::ratio::{format_rat, vec_lex_cmp, vec_sub, Rat};
use crate::{Error, Result};

/// One member's worldline in the body's own frame: strictly time-increasing
/// rational breakpoints.
#[derive(Debug, Clone)]
struct MemberWorldline {
    elem: ElemId,
    colour: usize,
    /// (frame time, frame position) at each recorded integral absolute time.
    events: Vec<(Rat, Vec<Rat>)>,
}

impl MemberWorldline {
    /// Exact position at frame time `tau`, if covered.
    fn sample(&self, tau: &Rat) -> Result<Vec<Rat>> {
        let first = &self.events.first().expect("non-empty worldline").0;
        let last = &self.events.last().expect("non-empty worldline").0;
        if tau < first || tau > last {
            return Err(Error::OutOfHorizon(format_rat(tau)));
        }
        let k = self.events.partition_point(|(t, _)| t <= tau);
        if k == self.events.len() {
            return Ok(self.events[k - 1].1.clone());
        }
        let (t0, p0) = &self.events[k - 1];
        let (t1, p1) = &self.events[k];
        let s = (tau - t0) / (t1 - t0);
        Ok(p0.iter().zip(p1).map(|(a, b)| a + &s * &(b - a)).collect())
    }
}

/// The own frame of a periodic body: everything needed to snapshot it at a
/// rational proper time.
#[derive(Debug, Clone)]
pub struct BodyFrame {
    pub body: Body,
    pub cert: PeriodicityCertificate,
    pub proper_time: ProperTimeAssignment,
    /// Maps absolute events (relative to the anchor) into the body's frame.
    map: FrameMap,
    members: Vec<MemberWorldline>,
    /// Proper-time length of one period (= τ_per_period).
    period_tau: Rat,
}

impl BodyFrame {
    /// Builds the frame of a body from its trace. Fails when the body is not
    /// periodic within the horizon, or when its proper time is degenerate
    /// (`w = 0`, maximal-speed motion).
    pub fn build(trace: &Trace, body: &Body, tau_per_period: &Rat) -> Result<BodyFrame> {
        let cert = detect_period(trace, body, None)?
            .ok_or_else(|| Error::NotPeriodic(body.name.clone()))?;
        let proper_time = assign_proper_time(trace, body, &cert, tau_per_period)?;
        if proper_time.is_degenerate() {
            return Err(Error::DegenerateFrame);
        }
        let v = period_velocity(&cert);
        let basis = build_basis(trace.model.env.dirset())?;
        let boost = lambda_from_motion(&basis, &MotionParams::new(v, proper_time.w.clone()))?;
        // The boost maps body events to absolute events; snapshots need the
        // other direction.
        let map = frame_map(&basis, &boost).inverse();
        let anchor = avg_position(trace, body, cert.t0)?;
        let t0 = Rat::from_integer(BigInt::from(cert.t0));
        let mut members = Vec::with_capacity(body.members.len());
        for &id in &body.members {
            let idx = trace.elem_index(id).ok_or(Error::UnknownMember(id))?;
            let mut events = Vec::with_capacity(trace.horizon as usize + 1);
            for t in 0..=trace.horizon {
                let mut event = vec_sub(&trace.position(idx, t), &anchor);
                event.push(Rat::from_integer(BigInt::from(t)) - &t0);
                let te = map.transform(&event);
                let (tau, pos) = te.split_last().expect("events are non-empty");
                events.push((tau.clone(), pos.to_vec()));
            }
            debug_assert!(
                events.windows(2).all(|w| w[0].0 < w[1].0),
                "frame time must increase along worldlines"
            );
            members.push(MemberWorldline { elem: id, colour: trace.elems[idx].colour, events });
        }
        Ok(BodyFrame {
            body: body.clone(),
            cert,
            proper_time: proper_time.clone(),
            map,
            members,
            period_tau: proper_time.tau_per_period,
        })
    }

    /// The frame map applied to snapshots (absolute → body frame).
    pub fn map(&self) -> &FrameMap {
        &self.map
    }

    /// Proper-time length of one period.
    pub fn period_tau(&self) -> &Rat {
        &self.period_tau
    }

    /// Frame-time interval covered by every member worldline.
    pub fn coverage(&self) -> (Rat, Rat) {
        let lo = self
            .members
            .iter()
            .map(|m| m.events.first().expect("non-empty").0.clone())
            .max()
            .expect("bodies are non-empty");
        let hi = self
            .members
            .iter()
            .map(|m| m.events.last().expect("non-empty").0.clone())
            .min()
            .expect("bodies are non-empty");
        (lo, hi)
    }

    /// Snapshots every member at frame time `tau`.
    pub fn snapshot(&self, tau: &Rat) -> Result<OwnFrameSnapshot> {
        let mut entries = Vec::with_capacity(self.members.len());
        for m in &self.members {
            entries.push(SnapshotEntry {
                colour: m.colour,
                position: m.sample(tau)?,
                elem: m.elem,
            });
        }
        entries.sort_by(|a, b| {
            a.colour
                .cmp(&b.colour)
                .then_with(|| vec_lex_cmp(&a.position, &b.position))
                .then(a.elem.cmp(&b.elem))
        });
        Ok(OwnFrameSnapshot { tau: tau.clone(), entries })
    }

    /// Transformed breakpoint times of all members within `[0, period_tau]`.
    fn breakpoint_grid(&self) -> Vec<Rat> {
        let mut grid = vec![Rat::zero(), self.period_tau.clone()];
        let (lo, hi) = self.coverage();
        for m in &self.members {
            for (t, _) in &m.events {
                if t >= &Rat::zero() && t <= &self.period_tau {
                    grid.push(t.clone());
                }
            }
        }
        grid.retain(|t| t >= &lo && t <= &hi);
        grid.sort();
        grid.dedup();
        grid
    }

    /// All τ within one period at which some member of colour `colour`
    /// passes exactly through `target`.
    fn alignment_times(&self, colour: usize, target: &[Rat]) -> Vec<Rat> {
        let mut times = Vec::new();
        let (lo, hi) = self.coverage();
        for m in self.members.iter().filter(|m| m.colour == colour) {
            for pair in m.events.windows(2) {
                let (t0, p0) = &pair[0];
                let (t1, p1) = &pair[1];
                // Solve p0 + s·(p1−p0) = target on the segment, exactly.
                let mut s: Option<Rat> = None;
                let mut consistent = true;
                for ((a, b), want) in p0.iter().zip(p1).zip(target) {
                    let delta = b - a;
                    if delta.is_zero() {
                        if a != want {
                            consistent = false;
                            break;
                        }
                    } else {
                        let cand = (want - a) / delta;
                        match &s {
                            Some(prev) if prev != &cand => {
                                consistent = false;
                                break;
                            }
                            Some(_) => {}
                            None => s = Some(cand),
                        }
                    }
                }
                if !consistent {
                    continue;
                }
                // A segment that sits entirely on the target matches at its
                // start; interior solutions need 0 ≤ s ≤ 1.
                let tau = match s {
                    None => t0.clone(),
                    Some(s) => {
                        if s < Rat::zero() || s > Rat::from_integer(1.into()) {
                            continue;
                        }
                        t0 + &s * &(t1 - t0)
                    }
                };
                if tau >= Rat::zero() && tau <= self.period_tau && tau >= lo && tau <= hi {
                    times.push(tau);
                }
            }
        }
        times
    }

    fn colour_multiset(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.members.iter().map(|m| m.colour).collect();
        c.sort_unstable();
        c
    }
}

/// One member in an own-frame snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotEntry {
    pub colour: usize,
    pub position: Vec<Rat>,
    pub elem: ElemId,
}

/// The body seen from its own frame at proper time `tau`: a multiset of
/// (colour, exact position), with member ids kept for witness extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnFrameSnapshot {
    pub tau: Rat,
    pub entries: Vec<SnapshotEntry>,
}

impl OwnFrameSnapshot {
    /// Multiset equality of (colour, position) pairs, ignoring member ids.
    pub fn same_configuration(&self, other: &OwnFrameSnapshot) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.colour == b.colour && a.position == b.position)
    }
}

/// Translation-invariant canonical key of a snapshot: the sorted multiset of
/// (colour, position − least position).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InternalStateKey(String);

impl InternalStateKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for InternalStateKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Canonical internal-state key of a snapshot.
pub fn internal_state_key(snapshot: &OwnFrameSnapshot) -> InternalStateKey {
    let min = snapshot
        .entries
        .iter()
        .map(|e| e.position.clone())
        .min_by(|a, b| vec_lex_cmp(a, b))
        .expect("bodies are non-empty");
    let mut rel: Vec<(usize, Vec<Rat>)> = snapshot
        .entries
        .iter()
        .map(|e| (e.colour, vec_sub(&e.position, &min)))
        .collect();
    rel.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| vec_lex_cmp(&a.1, &b.1)));
    let parts: Vec<String> = rel
        .iter()
        .map(|(c, p)| {
            let coords: Vec<String> = p.iter().map(format_rat).collect();
            format!("{}:({})", c + 1, coords.join(","))
        })
        .collect();
    InternalStateKey(parts.join("|"))
}

/// A witness of affine isomorphism: the colour-preserving bijection and the
/// aligned proper times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoWitness {
    pub phi: Vec<(ElemId, ElemId)>,
    pub tau_a: Rat,
    pub tau_b: Rat,
}

/// Searches one period of each body for proper times at which the bodies are
/// affine isomorphic; returns the lexicographically first `(τ_A, τ_B)`
/// witness, or `None`.
pub fn affine_isomorphic(frame_a: &BodyFrame, frame_b: &BodyFrame) -> Option<IsoWitness> {
    if frame_a.colour_multiset() != frame_b.colour_multiset() {
        return None;
    }
    let grid_a = frame_a.breakpoint_grid();
    let grid_b = frame_b.breakpoint_grid();
    let mut best: Option<IsoWitness> = None;
    // Pass 1: τ_A on A's breakpoints; τ_B from B's grid plus the alignment
    // times of A's snapshot entries. Pass 2 mirrors the roles.
    for (swap, (from, to)) in
        [(false, (frame_a, frame_b)), (true, (frame_b, frame_a))]
    {
        for tau_from in from.breakpoint_grid() {
            let Ok(snap_from) = from.snapshot(&tau_from) else { continue };
            let mut candidates: Vec<Rat> =
                if swap { grid_a.clone() } else { grid_b.clone() };
            for entry in &snap_from.entries {
                candidates.extend(to.alignment_times(entry.colour, &entry.position));
            }
            candidates.sort();
            candidates.dedup();
            for tau_to in candidates {
                let (tau_a, tau_b) = if swap {
                    (tau_to.clone(), tau_from.clone())
                } else {
                    (tau_from.clone(), tau_to.clone())
                };
                if let Some(w) = &best {
                    if (&tau_a, &tau_b) >= (&w.tau_a, &w.tau_b) {
                        continue;
                    }
                }
                let Ok(snap_to) = to.snapshot(&tau_to) else { continue };
                let (snap_a, snap_b) =
                    if swap { (&snap_to, &snap_from) } else { (&snap_from, &snap_to) };
                if snap_a.same_configuration(snap_b) {
                    let phi = snap_a
                        .entries
                        .iter()
                        .zip(&snap_b.entries)
                        .map(|(a, b)| (a.elem, b.elem))
                        .collect();
                    best = Some(IsoWitness { phi, tau_a, tau_b });
                }
            }
        }
    }
    best
}

/// The velocity-independent component of a body's external state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InternalState {
    Key(InternalStateKey),
    /// Maximal-speed motion: the proper time is frozen and no own frame
    /// exists.
    Degenerate,
}

/// Decomposes the external state at integral time `t` into the instantaneous
/// spatial velocity and the internal-state key at the aligned proper time.
pub fn external_state(
    trace: &Trace,
    body: &Body,
    t: u64,
    tau_per_period: &Rat,
) -> Result<(Vec<Rat>, InternalState)> {
    let v = velocity(trace, body, t)?;
    let cert = detect_period(trace, body, None)?
        .ok_or_else(|| Error::NotPeriodic(body.name.clone()))?;
    let pta = assign_proper_time(trace, body, &cert, tau_per_period)?;
    if pta.is_degenerate() {
        return Ok((v, InternalState::Degenerate));
    }
    let frame = BodyFrame::build(trace, body, tau_per_period)?;
    let tau = pta.tau_at(t)?;
    let snap = frame.snapshot(&tau)?;
    Ok((v, InternalState::Key(internal_state_key(&snap))))
}

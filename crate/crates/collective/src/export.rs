//! Deterministic trace and report writers.
//!
//! Identical runs produce byte-identical files: rows are ordered by
//! elementary id and then by time, floats are printed with 12 significant
//! digits, rationals as `p/q`.

use num_bigint::BigInt;

use crate::bodies::{all_codirected, avg_position, changes_external_state, velocity, Body};
use crate::engine::{run, ExecMode, Model, Trace, World};
use crate::environment::LatticeCoord;
use crate::ratio::{format_rat, Rat};
use crate::{Error, Result};

/// `sig`-significant-digit scientific notation; `-0` is normalized.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.*e}", sig - 1, x)
}

fn counts_field(counts: &[i64]) -> String {
    let parts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
    parts.join(";")
}

fn euclid_fields(trace: &Trace, idx: usize, t: u64) -> Vec<String> {
    let counts: Vec<Rat> = trace
        .tail_counts(idx, t)
        .iter()
        .map(|&c| Rat::from_integer(BigInt::from(c)))
        .collect();
    trace.model.env.embed_counts(&counts).into_iter().map(|x| fmt_sig(x, 12)).collect()
}

/// Renders the trace as CSV: one row per elementary body and time,
/// ordered by elementary id then t.
///
/// Columns: `t, elem_id, colour, arc_head` (semicolon-joined canonical
/// counts of the reduced head vertex), `dir, turned, x_euclid_1..n`
/// (unwrapped Euclidean position of the body, 12 significant digits).
pub fn trace_csv(trace: &Trace) -> String {
    let n = trace.model.env.dim();
    let mut out = String::from("t,elem_id,colour,arc_head,dir,turned");
    for i in 1..=n {
        out.push_str(&format!(",x_euclid_{i}"));
    }
    out.push('\n');
    for (idx, e) in trace.elems.iter().enumerate() {
        for t in 0..=trace.horizon {
            let arc = &e.arcs[t as usize];
            let turned = if t < trace.horizon && e.turned(t) { 1 } else { 0 };
            let euclid = euclid_fields(trace, idx, t);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                t,
                e.elem,
                trace.model.colours[e.colour].name,
                counts_field(arc.head.counts()),
                trace.model.env.dirset().name(arc.dir),
                turned,
                euclid.join(",")
            ));
        }
    }
    out
}

/// Renders the trace as an event log: one JSON object per line with the same
/// fields and ordering as the CSV.
pub fn trace_events_jsonl(trace: &Trace) -> String {
    let mut out = String::new();
    for (idx, e) in trace.elems.iter().enumerate() {
        for t in 0..=trace.horizon {
            let arc = &e.arcs[t as usize];
            let turned = if t < trace.horizon && e.turned(t) { 1 } else { 0 };
            let euclid = euclid_fields(trace, idx, t);
            out.push_str(&format!(
                "{{\"t\":{},\"elem_id\":{},\"colour\":\"{}\",\"arc_head\":\"{}\",\"dir\":\"{}\",\"turned\":{},\"x_euclid\":[{}]}}\n",
                t,
                e.elem,
                trace.model.colours[e.colour].name,
                counts_field(arc.head.counts()),
                trace.model.env.dirset().name(arc.dir),
                turned,
                euclid.join(",")
            ));
        }
    }
    out
}

/// Kinematics report for a body: columns `t, body, xB, vB, changed_state,
/// codirected`, with the exact rational coordinates semicolon-joined per
/// axis, for `t = 0..horizon-1`.
pub fn kinematics_csv(trace: &Trace, body: &Body) -> Result<String> {
    let mut out = String::from("t,body,xB,vB,changed_state,codirected\n");
    if trace.horizon == 0 {
        return Ok(out);
    }
    for t in 0..trace.horizon {
        let x: Vec<String> = avg_position(trace, body, t)?.iter().map(format_rat).collect();
        let v: Vec<String> = velocity(trace, body, t)?.iter().map(format_rat).collect();
        let changed = changes_external_state(trace, body, t)?;
        let codirected = all_codirected(trace, body, t)?;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            t,
            body.name,
            x.join(";"),
            v.join(";"),
            changed as u8,
            codirected as u8
        ));
    }
    Ok(out)
}

/// Replays the scenario behind a trace CSV and checks that the recorded
/// directions and turn flags match the recomputation exactly.
pub fn verify_trace_csv(model: &Model, world: World, horizon: u64, csv: &str) -> Result<bool> {
    let trace = run(model, world, horizon, ExecMode::Sequential)?;
    let mut lines = csv.lines();
    let Some(header) = lines.next() else {
        return Ok(false);
    };
    if !header.starts_with("t,elem_id,colour,arc_head,dir,turned") {
        return Err(Error::scenario("csv", "unrecognized header"));
    }
    let mut rows = 0u64;
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 6 {
            return Err(Error::scenario("csv", format!("short row: {line}")));
        }
        let t: u64 = fields[0]
            .parse()
            .map_err(|_| Error::scenario("csv", format!("bad time in row: {line}")))?;
        let elem: u32 = fields[1]
            .parse()
            .map_err(|_| Error::scenario("csv", format!("bad elem id in row: {line}")))?;
        let Some(idx) = trace.elem_index(elem) else {
            return Ok(false);
        };
        if t > trace.horizon {
            return Ok(false);
        }
        let e = &trace.elems[idx];
        let arc = &e.arcs[t as usize];
        let head: Vec<i64> = fields[3]
            .split(';')
            .map(|p| p.parse().map_err(|_| Error::scenario("csv", "bad head counts")))
            .collect::<Result<_>>()?;
        let turned_expect = if t < trace.horizon && e.turned(t) { 1 } else { 0 };
        let ok = LatticeCoord::from_counts(&head) == arc.head
            && fields[4] == trace.model.env.dirset().name(arc.dir)
            && fields[5] == turned_expect.to_string()
            && fields[2] == trace.model.colours[e.colour].name;
        if !ok {
            return Ok(false);
        }
        rows += 1;
    }
    Ok(rows == trace.elems.len() as u64 * (trace.horizon + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{ring6_model, ring6_trace};

    #[test]
    fn sig_digit_formatting() {
        assert_eq!(fmt_sig(1.0, 12), "1.00000000000e0");
        assert_eq!(fmt_sig(0.0, 12), "0.00000000000e0");
        assert_eq!(fmt_sig(-0.0, 12), "0.00000000000e0");
        assert_eq!(fmt_sig(0.5, 12), "5.00000000000e-1");
        assert_eq!(fmt_sig(-2.25, 12), "-2.25000000000e0");
    }

    #[test]
    fn trace_csv_shape() {
        let trace = ring6_trace(6);
        let csv = trace_csv(&trace);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 14, "header plus 2 elems × 7 times");
        assert_eq!(lines[0], "t,elem_id,colour,arc_head,dir,turned,x_euclid_1");
        // First row: elem 1 at t=0 on arc (0→1, R), turning.
        assert_eq!(lines[1], "0,1,a,1;0,R,1,0.00000000000e0");
        // Rows are ordered by elem then t: all elem-1 rows precede elem 2.
        assert!(lines[1..=7].iter().all(|l| l.split(',').nth(1) == Some("1")));
        assert!(lines[8..=14].iter().all(|l| l.split(',').nth(1) == Some("2")));
    }

    #[test]
    fn events_jsonl_is_valid_json() {
        let trace = ring6_trace(2);
        let jsonl = trace_events_jsonl(&trace);
        for line in jsonl.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("t").is_some() && v.get("x_euclid").is_some());
        }
        assert_eq!(jsonl.lines().count(), 6);
    }

    #[test]
    fn kinematics_rows() {
        let trace = ring6_trace(6);
        let body = crate::bodies::Body::new("clock", vec![1, 2]);
        let csv = kinematics_csv(&trace, &body).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 6);
        // t=0: xB=1, vB=0, changed, not codirected.
        assert_eq!(lines[1], "0,clock,1,0,1,0");
        // t=1: no change of state.
        assert_eq!(lines[2], "1,clock,1,0,0,0");
    }

    #[test]
    fn verifier_accepts_own_output_and_rejects_tampering() {
        let trace = ring6_trace(6);
        let csv = trace_csv(&trace);
        let model = ring6_model();
        let world = trace.world_at(0);
        assert!(verify_trace_csv(&model, world.clone(), 6, &csv).unwrap());
        // Flip one turn flag.
        let tampered = csv.replacen(",R,1,", ",R,0,", 1);
        assert_ne!(csv, tampered);
        assert!(!verify_trace_csv(&model, world.clone(), 6, &tampered).unwrap());
        // Truncated files are incomplete.
        let truncated: String =
            csv.lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(!verify_trace_csv(&model, world, 6, &truncated).unwrap());
    }
}

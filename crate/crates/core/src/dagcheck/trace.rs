//! Execution traces of the checker.
//!
//! ```text
//! trace 1
//! digest 5d1b...
//! steps 9
//! root 0 ok
//! node 0 ok
//! ...
//! accept
//! ```
//!
//! The digest is the SHA-256 of the certificate's canonical text. A trace is
//! verified by re-running the checker against the certificate and comparing
//! step by step, stopping at the first disagreement.

use std::fmt::Write as _;

use rand::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{run, Location, RejectReason, Step, StepSink};
use crate::compression::DagProof;
use crate::textio::{bad, header_count, Lines, SerialError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub digest: String,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("trace digest {trace} does not match certificate digest {certificate}")]
    DigestMismatch { trace: String, certificate: String },
}

pub fn digest(d: &DagProof) -> String {
    hex::encode(Sha256::digest(d.to_text().as_bytes()))
}

struct Recorder(Vec<Step>);

impl StepSink for Recorder {
    fn step(&mut self, s: Step) -> bool {
        self.0.push(s);
        true
    }
}

pub fn emit_trace(d: &DagProof) -> Trace {
    let mut r = Recorder(Vec::new());
    let _ = run(d, &mut r);
    Trace {
        digest: digest(d),
        steps: r.0,
    }
}

struct Replay<'t> {
    expected: &'t [Step],
    pos: usize,
    diverged: bool,
}

impl StepSink for Replay<'_> {
    fn step(&mut self, s: Step) -> bool {
        if self.expected.get(self.pos) == Some(&s) {
            self.pos += 1;
            true
        } else {
            self.diverged = true;
            false
        }
    }
}

/// True iff `t` is exactly the step sequence the checker produces on `d`.
pub fn verify_trace(t: &Trace, d: &DagProof) -> Result<bool, TraceError> {
    let certificate = digest(d);
    if t.digest != certificate {
        return Err(TraceError::DigestMismatch {
            trace: t.digest.clone(),
            certificate,
        });
    }
    let mut replay = Replay {
        expected: &t.steps,
        pos: 0,
        diverged: false,
    };
    let finished = run(d, &mut replay).is_ok();
    Ok(finished && !replay.diverged && replay.pos == t.steps.len())
}

/// One single-step mutation of `t`: flip a verdict bit, swap two distinct
/// steps, or retarget a step's id. The result always differs from `t`.
pub fn mutate_trace(t: &Trace, rng: &mut impl Rng) -> Trace {
    let mut out = t.clone();
    if out.steps.is_empty() {
        out.steps.push(Step::Accept);
        return out;
    }
    loop {
        let i = rng.gen_range(0..out.steps.len());
        match rng.gen_range(0..3) {
            0 => {
                if let Some(s) = flip(out.steps[i]) {
                    out.steps[i] = s;
                    return out;
                }
            }
            1 => {
                let j = rng.gen_range(0..out.steps.len());
                if out.steps[i] != out.steps[j] {
                    out.steps.swap(i, j);
                    return out;
                }
            }
            _ => {
                let shift = rng.gen_range(1..=3);
                if let Some(s) = retarget(out.steps[i], shift) {
                    out.steps[i] = s;
                    return out;
                }
            }
        }
    }
}

fn flip(s: Step) -> Option<Step> {
    Some(match s {
        Step::Root(v, ok) => Step::Root(v, !ok),
        Step::Node(v, ok) => Step::Node(v, !ok),
        Step::Edge(v, ok) => Step::Edge(v, !ok),
        Step::Reach(v, ok) => Step::Reach(v, !ok),
        Step::Unique(v, ok) => Step::Unique(v, !ok),
        Step::Rule(v, ok) => Step::Rule(v, !ok),
        Step::Bind(v, ok) => Step::Bind(v, !ok),
        Step::Visit(l, v, ok) => Step::Visit(l, v, !ok),
        Step::Accept => Step::Reject(RejectReason::Structure, Location::Root),
        Step::Reject(..) => Step::Accept,
        Step::Label(_) => return None,
    })
}

fn retarget(s: Step, k: usize) -> Option<Step> {
    Some(match s {
        Step::Root(v, ok) => Step::Root(v + k, ok),
        Step::Node(v, ok) => Step::Node(v + k, ok),
        Step::Edge(v, ok) => Step::Edge(v + k, ok),
        Step::Reach(v, ok) => Step::Reach(v + k, ok),
        Step::Unique(v, ok) => Step::Unique(v + k, ok),
        Step::Rule(v, ok) => Step::Rule(v + k, ok),
        Step::Bind(v, ok) => Step::Bind(v + k, ok),
        Step::Label(l) => Step::Label(l + k as u32),
        Step::Visit(l, v, ok) => Step::Visit(l, v + k, ok),
        Step::Accept | Step::Reject(..) => return None,
    })
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("trace 1\n");
        let _ = writeln!(out, "digest {}", self.digest);
        let _ = writeln!(out, "steps {}", self.steps.len());
        for s in &self.steps {
            let _ = match *s {
                Step::Root(v, ok) => writeln!(out, "root {v} {}", flag(ok)),
                Step::Node(v, ok) => writeln!(out, "node {v} {}", flag(ok)),
                Step::Edge(i, ok) => writeln!(out, "edge {i} {}", flag(ok)),
                Step::Reach(v, ok) => writeln!(out, "reach {v} {}", flag(ok)),
                Step::Unique(v, ok) => writeln!(out, "unique {v} {}", flag(ok)),
                Step::Rule(v, ok) => writeln!(out, "rule {v} {}", flag(ok)),
                Step::Bind(v, ok) => writeln!(out, "bind {v} {}", flag(ok)),
                Step::Label(l) => writeln!(out, "label {l}"),
                Step::Visit(l, v, ok) => writeln!(out, "visit {l} {v} {}", flag(ok)),
                Step::Accept => writeln!(out, "accept"),
                Step::Reject(r, loc) => writeln!(out, "reject {} {loc}", r.as_str()),
            };
        }
        out
    }
}

pub fn parse_trace(text: &str) -> Result<Trace, SerialError> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next()?;
    if head != "trace 1" {
        return Err(bad(line, "expected header `trace 1`"));
    }
    let (line, l) = lines.next()?;
    let digest = l
        .strip_prefix("digest ")
        .map(str::trim)
        .filter(|h| h.len() == 64 && h.bytes().all(|b| b.is_ascii_hexdigit()))
        .ok_or_else(|| bad(line, "expected `digest <sha256 hex>`"))?
        .to_string();
    let count = header_count(&mut lines, "steps")?;
    let mut steps = Vec::with_capacity(count.min(1 << 16));
    for _ in 0..count {
        let (line, l) = lines.next()?;
        steps.push(parse_step(l).ok_or_else(|| bad(line, "unrecognised step"))?);
    }
    lines.finish()?;
    Ok(Trace { digest, steps })
}

fn parse_step(l: &str) -> Option<Step> {
    let parts: Vec<&str> = l.split_whitespace().collect();
    let ok = |s: &str| match s {
        "ok" => Some(true),
        "fail" => Some(false),
        _ => None,
    };
    let num = |s: &str| s.parse::<usize>().ok();
    Some(match parts[..] {
        ["root", v, f] => Step::Root(num(v)?, ok(f)?),
        ["node", v, f] => Step::Node(num(v)?, ok(f)?),
        ["edge", v, f] => Step::Edge(num(v)?, ok(f)?),
        ["reach", v, f] => Step::Reach(num(v)?, ok(f)?),
        ["unique", v, f] => Step::Unique(num(v)?, ok(f)?),
        ["rule", v, f] => Step::Rule(num(v)?, ok(f)?),
        ["bind", v, f] => Step::Bind(num(v)?, ok(f)?),
        ["label", l] => Step::Label(l.parse().ok()?),
        ["visit", l, v, f] => Step::Visit(l.parse().ok()?, num(v)?, ok(f)?),
        ["accept"] => Step::Accept,
        ["reject", reason, ref loc @ ..] => {
            let reason = match reason {
                "structure" => RejectReason::Structure,
                "rule" => RejectReason::Rule,
                "discharge" => RejectReason::Discharge,
                "reachability" => RejectReason::Reachability,
                _ => return None,
            };
            let location = match loc {
                ["root"] => Location::Root,
                ["node", v] => Location::Node(num(v)?),
                ["edge", e] => Location::Edge(num(e)?),
                ["label", l] => Location::Label(l.parse().ok()?),
                _ => return None,
            };
            Step::Reject(reason, location)
        }
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compression::{compress, Mode};
    use crate::dagcheck::check_dag;
    use crate::formula::parse;
    use crate::ndproof::NdProof;

    fn identity_dag() -> DagProof {
        let p = NdProof::intro(parse("p").unwrap(), 1, NdProof::hyp(parse("p").unwrap(), 1));
        compress(&p, Mode::Subtree).unwrap()
    }

    #[test]
    fn identity_trace() {
        let d = identity_dag();
        let t = emit_trace(&d);
        assert_eq!(t.len() as u64, check_dag(&d).steps());
        assert_eq!(t.steps.last(), Some(&Step::Accept));
        assert_eq!(verify_trace(&t, &d), Ok(true));
        assert_eq!(parse_trace(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn rejecting_trace_ends_in_reject() {
        let mut d = identity_dag();
        d.nodes[0].rule = crate::ndproof::Rule::ImpIntro(9);
        let t = emit_trace(&d);
        assert_eq!(
            t.steps.last(),
            Some(&Step::Reject(RejectReason::Discharge, Location::Label(2)))
        );
        assert_eq!(verify_trace(&t, &d), Ok(true));
        assert_eq!(parse_trace(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn tampering_is_detected() {
        let d = identity_dag();
        let t = emit_trace(&d);
        let empty = Trace {
            digest: t.digest.clone(),
            steps: Vec::new(),
        };
        assert_eq!(verify_trace(&empty, &d), Ok(false));
        let mut truncated = t.clone();
        truncated.steps.pop();
        assert_eq!(verify_trace(&truncated, &d), Ok(false));
        let mut extended = t.clone();
        extended.steps.push(Step::Accept);
        assert_eq!(verify_trace(&extended, &d), Ok(false));
        let mut other = identity_dag();
        other.mode = Mode::Label;
        assert!(matches!(
            verify_trace(&t, &other),
            Err(TraceError::DigestMismatch { .. })
        ));
    }
}

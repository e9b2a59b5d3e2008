//! Recursive skein evaluation of the invariant.
//!
//! At each node the first bad crossing `c` is resolved. For a positive `c`
//! the value is `W(switched) ∘ W(smoothed)` (or `*` when `c` is mixed); for
//! a negative `c` the relation is solved for the current diagram with `/`
//! (or `//`). A diagram without bad crossings evaluates to `a_n`.

use std::fmt::{self, Write as _};
use std::sync::Arc;

use dashmap::DashMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraInstance, Element, Operation};
use crate::diagram::{
    BasedDiagram, ComponentClassifier, CrossingClassifier, CrossingId, CrossingKind, Diagram, DiagramError, EdgeId,
    MoveKind, Sign,
};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("recursion depth {0} exceeded; the diagram is probably malformed")]
    DepthExceeded(usize),
}

#[derive(Clone)]
pub struct EvalOptions {
    /// Reuse values of based diagrams with equal canonical keys.
    pub memoize: bool,
    /// Evaluate the two branches of large nodes concurrently.
    pub parallel: bool,
    /// Depth of the recorded trace; 0 records nothing.
    pub trace_depth: usize,
    pub max_depth: usize,
    pub classifier: Arc<dyn CrossingClassifier>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            memoize: false,
            parallel: false,
            trace_depth: 0,
            max_depth: 4096,
            classifier: Arc::new(ComponentClassifier),
        }
    }
}

impl fmt::Debug for EvalOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvalOptions")
            .field("memoize", &self.memoize)
            .field("parallel", &self.parallel)
            .field("trace_depth", &self.trace_depth)
            .field("max_depth", &self.max_depth)
            .finish_non_exhaustive()
    }
}

impl EvalOptions {
    pub fn fast() -> Self {
        EvalOptions { memoize: true, parallel: true, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeinTrace {
    /// Hex form of the node's canonical key.
    pub key: String,
    pub value: String,
    #[serde(flatten)]
    pub node: TraceNode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum TraceNode {
    /// No bad crossing: the value is `a_n`.
    Leaf { components: usize },
    Branch {
        crossing: CrossingId,
        kind: CrossingKind,
        sign: Sign,
        rule: Operation,
        switched: Box<SkeinTrace>,
        smoothed: Box<SkeinTrace>,
    },
    /// Below the requested trace depth.
    Elided,
}

impl SkeinTrace {
    /// Indented text tree, one node per line.
    pub fn render_tree(&self) -> String {
        let mut out = String::new();
        self.write_tree(&mut out, 0, "");
        out
    }

    fn write_tree(&self, out: &mut String, indent: usize, role: &str) {
        let pad = "  ".repeat(indent);
        match &self.node {
            TraceNode::Leaf { components } => {
                let _ = writeln!(out, "{pad}{role}leaf n={components}: {}", self.value);
            }
            TraceNode::Elided => {
                let _ = writeln!(out, "{pad}{role}...: {}", self.value);
            }
            TraceNode::Branch { crossing, kind, sign, rule, switched, smoothed } => {
                let kind = match kind {
                    CrossingKind::SelfCrossing => "self",
                    CrossingKind::MixedCrossing => "mixed",
                };
                let sign = if *sign == Sign::Positive { "+" } else { "-" };
                let _ = writeln!(
                    out,
                    "{pad}{role}crossing {crossing} ({kind}, {sign}) switched {} smoothed: {}",
                    rule.symbol(),
                    self.value
                );
                switched.write_tree(out, indent + 1, "switched ");
                smoothed.write_tree(out, indent + 1, "smoothed ");
            }
        }
    }
}

/// The operation relating the current diagram to its switched and smoothed
/// resolutions at a bad crossing.
pub fn rule_for(sign: Sign, kind: CrossingKind) -> Operation {
    match (sign, kind) {
        (Sign::Positive, CrossingKind::SelfCrossing) => Operation::Circ,
        (Sign::Positive, CrossingKind::MixedCrossing) => Operation::Star,
        (Sign::Negative, CrossingKind::SelfCrossing) => Operation::Slash,
        (Sign::Negative, CrossingKind::MixedCrossing) => Operation::SlashSlash,
    }
}

struct Evaluator<'a> {
    inst: &'a AlgebraInstance,
    opts: &'a EvalOptions,
    memo: Option<DashMap<Vec<u8>, LaurentPoly>>,
}

/// Below this many crossings a node is cheaper to evaluate inline than to
/// hand to another thread.
const PARALLEL_MIN_CROSSINGS: usize = 6;

impl Evaluator<'_> {
    fn eval(&self, b: &BasedDiagram, depth: usize) -> Result<(LaurentPoly, Option<SkeinTrace>), SkeinError> {
        if depth > self.opts.max_depth {
            return Err(SkeinError::DepthExceeded(self.opts.max_depth));
        }
        let traced = depth < self.opts.trace_depth;
        let key = (traced || self.memo.is_some()).then(|| b.canonical_key());
        if !traced {
            if let (Some(memo), Some(k)) = (&self.memo, &key) {
                if let Some(v) = memo.get(k) {
                    return Ok((v.clone(), None));
                }
            }
        }
        let (value, node) = match b.first_bad() {
            None => {
                let n = b.diagram().component_count();
                (self.inst.unit_raw(n)?, TraceNode::Leaf { components: n })
            }
            Some(c) => {
                let d = b.diagram();
                let x = d.crossing(c)?;
                let kind = self.opts.classifier.classify(d, x);
                let sign = x.sign();
                let rule = rule_for(sign, kind);
                let switched = b.switch(c)?;
                let smoothed = b.smooth(c)?;
                let ((sw, sw_trace), (sm, sm_trace)) =
                    if self.opts.parallel && d.crossings().len() >= PARALLEL_MIN_CROSSINGS {
                        let (l, r) = rayon::join(|| self.eval(&switched, depth + 1), || self.eval(&smoothed, depth + 1));
                        (l?, r?)
                    } else {
                        (self.eval(&switched, depth + 1)?, self.eval(&smoothed, depth + 1)?)
                    };
                let value = self.inst.apply_raw(rule, &sw, &sm);
                let node = if traced {
                    TraceNode::Branch {
                        crossing: c,
                        kind,
                        sign,
                        rule,
                        switched: Box::new(sw_trace.unwrap_or_else(|| elided(&switched, &sw))),
                        smoothed: Box::new(sm_trace.unwrap_or_else(|| elided(&smoothed, &sm))),
                    }
                } else {
                    TraceNode::Elided
                };
                (value, node)
            }
        };
        if let (Some(memo), Some(k)) = (&self.memo, &key) {
            memo.insert(k.clone(), value.clone());
        }
        let trace = traced.then(|| SkeinTrace {
            key: hex(key.as_deref().expect("traced nodes compute their key")),
            value: value.to_string(),
            node,
        });
        Ok((value, trace))
    }
}

fn elided(b: &BasedDiagram, value: &LaurentPoly) -> SkeinTrace {
    SkeinTrace { key: hex(&b.canonical_key()), value: value.to_string(), node: TraceNode::Elided }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Evaluates `W_b` for a based diagram. The trace is present when
/// `opts.trace_depth > 0`.
pub fn evaluate_based(
    b: &BasedDiagram,
    inst: &Arc<AlgebraInstance>,
    opts: &EvalOptions,
) -> Result<(Element, Option<SkeinTrace>), SkeinError> {
    let ev = Evaluator { inst, opts, memo: opts.memoize.then(DashMap::new) };
    let (value, trace) = ev.eval(b, 0)?;
    Ok((Element::new(inst, value)?, trace))
}

/// The invariant of a diagram, using its stored component order and the
/// smallest label of each component as base point.
pub fn invariant(d: &Diagram, inst: &Arc<AlgebraInstance>, opts: &EvalOptions) -> Result<Element, SkeinError> {
    Ok(evaluate_based(&BasedDiagram::standard(d.clone()), inst, opts)?.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzMismatch {
    pub trial: usize,
    pub moves: Vec<String>,
    pub pd: String,
    pub bases: Vec<EdgeId>,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: usize,
    pub reference: String,
    pub moves_applied: usize,
    pub mismatches: Vec<FuzzMismatch>,
}

#[derive(Debug, Clone, Copy)]
pub struct FuzzOptions {
    /// Longest Reidemeister sequence per trial.
    pub max_moves: usize,
    /// Moves that would push the crossing count more than this far above
    /// the starting diagram are skipped, which keeps evaluation cheap.
    pub max_extra_crossings: usize,
}

impl Default for FuzzOptions {
    fn default() -> Self {
        FuzzOptions { max_moves: 8, max_extra_crossings: 4 }
    }
}

/// Re-evaluates `d` under random base points, component orders and short
/// Reidemeister sequences, and reports every disagreement with the value of
/// the unmodified diagram.
pub fn fuzz_invariance(
    d: &Diagram,
    inst: &Arc<AlgebraInstance>,
    trials: usize,
    seed: u64,
    fuzz: FuzzOptions,
) -> Result<FuzzReport, SkeinError> {
    let opts = EvalOptions::fast();
    let reference = invariant(d, inst, &opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limit = d.crossings().len() + fuzz.max_extra_crossings;
    let mut report = FuzzReport {
        seed,
        trials,
        reference: reference.to_string(),
        moves_applied: 0,
        mismatches: Vec::new(),
    };
    for trial in 0..trials {
        let mut cur = d.clone();
        let mut moves = Vec::new();
        let len = rng.gen_range(0..=fuzz.max_moves);
        for _ in 0..len {
            let n = cur.crossings().len();
            let sites: Vec<_> = cur
                .enumerate_sites()
                .into_iter()
                .filter(|s| match s.kind() {
                    MoveKind::R1Plus => n < limit,
                    MoveKind::R2Plus => n + 2 <= limit,
                    _ => true,
                })
                .collect();
            // Pick the move type first so that plentiful R2+ sites do not
            // crowd out the rarer ones.
            let mut kinds: Vec<MoveKind> = sites.iter().map(|s| s.kind()).collect();
            kinds.sort_by_key(|k| *k as u8);
            kinds.dedup();
            let Some(&kind) = kinds.choose(&mut rng) else { break };
            let of_kind: Vec<_> = sites.iter().filter(|s| s.kind() == kind).collect();
            let site = of_kind.choose(&mut rng).expect("kind has a site");
            cur = cur.apply_move(site)?;
            moves.push(site.to_string());
        }
        report.moves_applied += moves.len();
        let mut bases: Vec<EdgeId> =
            cur.components().iter().map(|c| *c.choose(&mut rng).expect("nonempty component")).collect();
        bases.shuffle(&mut rng);
        let based = BasedDiagram::new(cur.clone(), bases.clone())?;
        let (value, _) = evaluate_based(&based, inst, &opts)?;
        if value != reference {
            report.mismatches.push(FuzzMismatch {
                trial,
                moves,
                pd: cur.to_string(),
                bases,
                value: value.to_string(),
            });
        }
    }
    Ok(report)
}

//! Oriented link diagrams built from planar diagram codes.
//!
//! Every crossing lists its four edge labels counterclockwise starting from
//! the incoming under-edge, so `pd[0] -> pd[2]` is the under strand. The over
//! strand runs `pd[1] -> pd[3]` or `pd[3] -> pd[1]`; the crossing is positive
//! in the first case. Crossing-free circles carry no labels and are counted
//! separately as free loops.

mod moves;
mod pd;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use moves::{Dart, MoveKind, MoveSite};
pub use pd::{PdCode, PdEntry};

pub type EdgeId = u32;
pub type CrossingId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("PD syntax error at byte {offset}: {message}")]
    PdSyntax { offset: usize, message: String },
    #[error("edge {0} appears only once; the code is not closed")]
    NotClosed(EdgeId),
    #[error("edge {0} appears more than twice")]
    DuplicateEdge(EdgeId),
    #[error("edge {0} cannot be oriented consistently")]
    Inconsistent(EdgeId),
    #[error("crossing X({a},{b},{c},{d}) has an explicit sign that contradicts the edge orientation", a = .0[0], b = .0[1], c = .0[2], d = .0[3])]
    SignConflict([EdgeId; 4]),
    #[error("over-strand direction of X({a},{b},{c},{d}) is ambiguous; annotate it with + or -", a = .0[0], b = .0[1], c = .0[2], d = .0[3])]
    Ambiguous([EdgeId; 4]),
    #[error("no crossing with id {0}")]
    UnknownCrossing(CrossingId),
    #[error("no component with index {0}")]
    UnknownComponent(usize),
    #[error("a trivial link needs at least one component")]
    EmptyUnlink,
    #[error("invalid base points: {0}")]
    BasePoints(String),
    #[error("move {0} does not apply to this diagram")]
    InapplicableMove(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum CrossingKind {
    SelfCrossing,
    MixedCrossing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Passage {
    Over,
    Under,
}

/// Decides which crossings count as self crossings. The skein recursion
/// picks `∘` or `*` from this classification.
pub trait CrossingClassifier: Send + Sync {
    fn classify(&self, d: &Diagram, c: &Crossing) -> CrossingKind;
}

/// The classical rule: a crossing is a self crossing iff both strands lie on
/// the same component.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComponentClassifier;

impl CrossingClassifier for ComponentClassifier {
    fn classify(&self, d: &Diagram, c: &Crossing) -> CrossingKind {
        if d.component_of(c.pd[0]) == d.component_of(c.pd[1]) {
            CrossingKind::SelfCrossing
        } else {
            CrossingKind::MixedCrossing
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub id: CrossingId,
    pub pd: [EdgeId; 4],
    /// True when the over strand enters at `pd[1]` and leaves at `pd[3]`.
    pub over_forward: bool,
}

impl Crossing {
    pub fn sign(&self) -> Sign {
        if self.over_forward {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    /// Whether the edge at position `k` enters this crossing.
    pub fn is_incoming(&self, k: usize) -> bool {
        match k {
            0 => true,
            2 => false,
            1 => self.over_forward,
            _ => !self.over_forward,
        }
    }

    pub fn under_in(&self) -> EdgeId {
        self.pd[0]
    }

    pub fn under_out(&self) -> EdgeId {
        self.pd[2]
    }

    pub fn over_in(&self) -> EdgeId {
        if self.over_forward {
            self.pd[1]
        } else {
            self.pd[3]
        }
    }

    pub fn over_out(&self) -> EdgeId {
        if self.over_forward {
            self.pd[3]
        } else {
            self.pd[1]
        }
    }

    /// The same crossing with over and under exchanged.
    pub fn switched(&self) -> Crossing {
        let [a, b, c, d] = self.pd;
        let pd = if self.over_forward { [b, c, d, a] } else { [d, a, b, c] };
        Crossing { id: self.id, pd, over_forward: !self.over_forward }
    }

    fn relabeled(&self, f: impl Fn(EdgeId) -> EdgeId) -> Crossing {
        Crossing { id: self.id, pd: self.pd.map(f), over_forward: self.over_forward }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Slot {
    pub crossing: usize,
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct EdgeEnds {
    pub tail: Slot,
    pub head: Slot,
    pub component: usize,
}

/// An oriented link diagram. Components are edge cycles listed in
/// orientation order, each starting at its smallest label, and sorted by
/// that label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    components: Vec<Vec<EdgeId>>,
    free_loops: usize,
    edges: BTreeMap<EdgeId, EdgeEnds>,
}

impl Diagram {
    /// Builds a diagram from a parsed PD code, inferring over-strand
    /// directions where no sign is given.
    pub fn from_pd(code: &PdCode) -> Result<Diagram, DiagramError> {
        let forward = infer_directions(&code.entries)?;
        let crossings = code
            .entries
            .iter()
            .zip(forward)
            .enumerate()
            .map(|(i, (e, over_forward))| Crossing { id: i as CrossingId + 1, pd: e.edges, over_forward })
            .collect();
        Diagram::assemble(crossings, code.free_loops)
    }

    pub fn parse(text: &str) -> Result<Diagram, DiagramError> {
        Diagram::from_pd(&PdCode::parse(text)?)
    }

    /// The trivial link of `n` components.
    pub fn unlink(n: usize) -> Result<Diagram, DiagramError> {
        if n == 0 {
            return Err(DiagramError::EmptyUnlink);
        }
        Diagram::assemble(Vec::new(), n)
    }

    /// Rebuilds all derived structure from crossings whose directions are
    /// already known.
    pub(crate) fn assemble(mut crossings: Vec<Crossing>, free_loops: usize) -> Result<Diagram, DiagramError> {
        crossings.sort_by_key(|c| c.id);
        let mut heads = BTreeMap::new();
        let mut tails = BTreeMap::new();
        for (ci, x) in crossings.iter().enumerate() {
            for pos in 0..4 {
                let slot = Slot { crossing: ci, pos };
                let map = if x.is_incoming(pos) { &mut heads } else { &mut tails };
                if map.insert(x.pd[pos], slot).is_some() {
                    return Err(DiagramError::Inconsistent(x.pd[pos]));
                }
            }
        }
        if let Some(e) = heads.keys().find(|e| !tails.contains_key(*e)) {
            return Err(DiagramError::Inconsistent(*e));
        }
        if let Some(e) = tails.keys().find(|e| !heads.contains_key(*e)) {
            return Err(DiagramError::Inconsistent(*e));
        }
        let mut edges = BTreeMap::new();
        let mut components = Vec::new();
        for &start in heads.keys() {
            if edges.contains_key(&start) {
                continue;
            }
            let idx = components.len();
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                let head: Slot = heads[&cur];
                edges.insert(cur, EdgeEnds { tail: tails[&cur], head, component: idx });
                cycle.push(cur);
                cur = crossings[head.crossing].pd[(head.pos + 2) % 4];
                if cur == start {
                    break;
                }
            }
            components.push(cycle);
        }
        Ok(Diagram { crossings, components, free_loops, edges })
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, id: CrossingId) -> Result<&Crossing, DiagramError> {
        self.index_of(id).map(|i| &self.crossings[i])
    }

    fn index_of(&self, id: CrossingId) -> Result<usize, DiagramError> {
        self.crossings
            .binary_search_by_key(&id, |c| c.id)
            .map_err(|_| DiagramError::UnknownCrossing(id))
    }

    /// Edge cycles of the components that pass through crossings.
    pub fn components(&self) -> &[Vec<EdgeId>] {
        &self.components
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Components with crossings plus free loops.
    pub fn component_count(&self) -> usize {
        self.components.len() + self.free_loops
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    /// Index of the component carrying edge `e`.
    pub fn component_of(&self, e: EdgeId) -> Option<usize> {
        self.edges.get(&e).map(|x| x.component)
    }

    pub(crate) fn ends(&self, e: EdgeId) -> EdgeEnds {
        self.edges[&e]
    }

    pub fn successor(&self, e: EdgeId) -> Option<EdgeId> {
        let head = self.edges.get(&e)?.head;
        Some(self.crossings[head.crossing].pd[(head.pos + 2) % 4])
    }

    pub fn kind(&self, c: &Crossing) -> CrossingKind {
        ComponentClassifier.classify(self, c)
    }

    pub fn writhe(&self) -> i32 {
        self.crossings.iter().map(|c| c.sign().value()).sum()
    }

    fn max_label(&self) -> EdgeId {
        self.edges.keys().next_back().copied().unwrap_or(0)
    }

    fn max_crossing_id(&self) -> CrossingId {
        self.crossings.last().map_or(0, |c| c.id)
    }

    pub fn switch(&self, id: CrossingId) -> Result<Diagram, DiagramError> {
        let i = self.index_of(id)?;
        let mut crossings = self.crossings.clone();
        crossings[i] = crossings[i].switched();
        Diagram::assemble(crossings, self.free_loops)
    }

    /// Reverses the orientation of component `i`.
    pub fn reverse_component(&self, i: usize) -> Result<Diagram, DiagramError> {
        let comp = self.components.get(i).ok_or(DiagramError::UnknownComponent(i))?;
        let members: BTreeSet<EdgeId> = comp.iter().copied().collect();
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let under = members.contains(&x.pd[0]);
                let over = members.contains(&x.pd[1]);
                let [a, b, c, d] = x.pd;
                match (under, over) {
                    (true, true) => Crossing { id: x.id, pd: [c, d, a, b], over_forward: x.over_forward },
                    (true, false) => Crossing { id: x.id, pd: [c, d, a, b], over_forward: !x.over_forward },
                    (false, true) => Crossing { id: x.id, pd: x.pd, over_forward: !x.over_forward },
                    (false, false) => x.clone(),
                }
            })
            .collect();
        Diagram::assemble(crossings, self.free_loops)
    }

    /// The reflection of the diagram in a line of the projection plane.
    pub fn mirror(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.pd;
                Crossing { id: x.id, pd: [a, d, c, b], over_forward: !x.over_forward }
            })
            .collect();
        Diagram::assemble(crossings, self.free_loops).expect("mirroring preserves orientation data")
    }

    /// Relabels edges `1..=E`, walking components in order and starting
    /// each at its current first edge.
    pub fn relabeled(&self) -> Diagram {
        let mut map = BTreeMap::new();
        for e in self.components.iter().flatten() {
            let next = map.len() as EdgeId + 1;
            map.insert(*e, next);
        }
        let crossings = self.crossings.iter().map(|x| x.relabeled(|e| map[&e])).collect();
        Diagram::assemble(crossings, self.free_loops).expect("relabeling preserves structure")
    }

    /// Signed PD code, renumbered so that crossing ids are `1..=N`.
    pub fn to_pd(&self) -> PdCode {
        PdCode {
            entries: self
                .crossings
                .iter()
                .map(|x| PdEntry { edges: x.pd, sign: Some(x.sign()) })
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// Removes crossings by letting both strands pass straight through.
    /// Strands that close up without crossings become free loops.
    fn remove_crossings(&self, ids: &[CrossingId]) -> Result<Diagram, DiagramError> {
        let mut uf = UnionFind::default();
        for &id in ids {
            let x = self.crossing(id)?;
            uf.union(x.pd[0], x.pd[2]);
            uf.union(x.pd[1], x.pd[3]);
        }
        let removed: Vec<&Crossing> = ids.iter().map(|&id| self.crossing(id)).collect::<Result<_, _>>()?;
        self.rebuild_merged(&mut uf, &removed, |id| ids.contains(&id))
    }

    fn rebuild_merged(
        &self,
        uf: &mut UnionFind,
        touched: &[&Crossing],
        drop: impl Fn(CrossingId) -> bool,
    ) -> Result<Diagram, DiagramError> {
        let crossings: Vec<Crossing> = self
            .crossings
            .iter()
            .filter(|x| !drop(x.id))
            .map(|x| x.relabeled(|e| uf.find_const(e)))
            .collect();
        let present: BTreeSet<EdgeId> = crossings.iter().flat_map(|x| x.pd).collect();
        let classes: BTreeSet<EdgeId> = touched.iter().flat_map(|x| x.pd).map(|e| uf.find_const(e)).collect();
        let new_loops = classes.iter().filter(|c| !present.contains(c)).count();
        Diagram::assemble(crossings, self.free_loops + new_loops)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_pd(), f)
    }
}

/// Union-find over edge labels, keeping the smallest label as the
/// representative of each class.
#[derive(Debug, Default)]
struct UnionFind {
    parent: BTreeMap<EdgeId, EdgeId>,
}

impl UnionFind {
    fn find_const(&self, mut e: EdgeId) -> EdgeId {
        while let Some(&p) = self.parent.get(&e) {
            if p == e {
                break;
            }
            e = p;
        }
        e
    }

    fn union(&mut self, a: EdgeId, b: EdgeId) {
        let (ra, rb) = (self.find_const(a), self.find_const(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
}

/// Direction of the over strand at each crossing: forced by the edge
/// orientation where possible, otherwise by the numbering rule.
fn infer_directions(entries: &[PdEntry]) -> Result<Vec<bool>, DiagramError> {
    let mut occurrences: BTreeMap<EdgeId, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, e) in entries.iter().enumerate() {
        for (pos, &label) in e.edges.iter().enumerate() {
            occurrences.entry(label).or_default().push((ci, pos));
        }
    }
    for (&label, occ) in &occurrences {
        match occ.len() {
            1 => return Err(DiagramError::NotClosed(label)),
            2 => {}
            _ => return Err(DiagramError::DuplicateEdge(label)),
        }
    }
    let mut forward: Vec<Option<bool>> = entries
        .iter()
        .map(|e| e.sign.map(|s| s == Sign::Positive))
        .collect();
    let incoming = |forward: &[Option<bool>], (ci, pos): (usize, usize)| -> Option<bool> {
        match pos {
            0 => Some(true),
            2 => Some(false),
            1 => forward[ci],
            _ => forward[ci].map(|f| !f),
        }
    };
    let partner = |label: EdgeId, slot: (usize, usize)| -> (usize, usize) {
        let occ = &occurrences[&label];
        if occ[0] == slot {
            occ[1]
        } else {
            occ[0]
        }
    };
    // Propagates known directions along edges until nothing changes.
    let propagate = |forward: &mut Vec<Option<bool>>| -> Result<(), DiagramError> {
        loop {
            let mut changed = false;
            for (&label, occ) in &occurrences {
                let (s, t) = (occ[0], occ[1]);
                match (incoming(forward, s), incoming(forward, t)) {
                    (Some(a), Some(b)) if a == b => {
                        let e = &entries[s.0];
                        return Err(if e.sign.is_some() || entries[t.0].sign.is_some() {
                            DiagramError::SignConflict(e.edges)
                        } else {
                            DiagramError::Inconsistent(label)
                        });
                    }
                    (Some(a), None) => {
                        set_from(forward, t, !a);
                        changed = true;
                    }
                    (None, Some(b)) => {
                        set_from(forward, s, !b);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(());
            }
        }
    };
    propagate(&mut forward)?;
    while let Some(ci) = forward.iter().position(Option::is_none) {
        let [_, b, _, d] = entries[ci].edges;
        if b == d || is_two_cycle(b, d, &partner, entries) {
            return Err(DiagramError::Ambiguous(entries[ci].edges));
        }
        // Outgoing over-edge is incoming + 1, wrapping from the largest
        // label of a component back to its smallest.
        forward[ci] = Some(if b.abs_diff(d) == 1 { b < d } else { b > d });
        propagate(&mut forward)?;
    }
    Ok(forward.into_iter().map(|f| f.expect("all resolved")).collect())
}

fn set_from(forward: &mut [Option<bool>], (ci, pos): (usize, usize), incoming: bool) {
    debug_assert!(pos == 1 || pos == 3);
    forward[ci] = Some(if pos == 1 { incoming } else { !incoming });
}

/// Whether `b` and `d` make up a whole two-edge component, where both
/// directions satisfy the numbering rule.
fn is_two_cycle(
    b: EdgeId,
    d: EdgeId,
    partner: &impl Fn(EdgeId, (usize, usize)) -> (usize, usize),
    entries: &[PdEntry],
) -> bool {
    let Some(ci) = entries.iter().position(|e| e.edges[1] == b && e.edges[3] == d) else {
        return false;
    };
    let (oc, opos) = partner(b, (ci, 1));
    entries[oc].edges[(opos + 2) % 4] == d
}

/// A diagram with a component order and one base point per component.
///
/// Base points sit on edges. Components are walked in the order of
/// `bases`, each from its base point around to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedDiagram {
    diagram: Diagram,
    bases: Vec<EdgeId>,
}

impl BasedDiagram {
    /// `bases` lists one edge per component, in walking order.
    pub fn new(diagram: Diagram, bases: Vec<EdgeId>) -> Result<BasedDiagram, DiagramError> {
        let mut seen = vec![false; diagram.components.len()];
        for &e in &bases {
            let c = diagram
                .component_of(e)
                .ok_or_else(|| DiagramError::BasePoints(format!("edge {e} is not in the diagram")))?;
            if std::mem::replace(&mut seen[c], true) {
                return Err(DiagramError::BasePoints(format!("component {c} has two base points")));
            }
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(DiagramError::BasePoints(format!("component {c} has no base point")));
        }
        Ok(BasedDiagram { diagram, bases })
    }

    /// Components in their stored order, each based at its smallest label.
    pub fn standard(diagram: Diagram) -> BasedDiagram {
        let bases = diagram.components.iter().map(|c| c[0]).collect();
        BasedDiagram { diagram, bases }
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn bases(&self) -> &[EdgeId] {
        &self.bases
    }

    /// Component indices in walking order.
    pub fn order(&self) -> Vec<usize> {
        self.bases.iter().map(|&e| self.diagram.edges[&e].component).collect()
    }

    /// Every crossing passage met while walking the components.
    pub fn traverse(&self) -> Vec<(CrossingId, Passage)> {
        let d = &self.diagram;
        let mut out = Vec::with_capacity(2 * d.crossings.len());
        for &base in &self.bases {
            let mut cur = base;
            loop {
                let head = d.edges[&cur].head;
                let x = &d.crossings[head.crossing];
                let passage = if head.pos == 0 { Passage::Under } else { Passage::Over };
                out.push((x.id, passage));
                cur = x.pd[(head.pos + 2) % 4];
                if cur == base {
                    break;
                }
            }
        }
        out
    }

    /// The first crossing whose first passage is under.
    pub fn first_bad(&self) -> Option<CrossingId> {
        let d = &self.diagram;
        let mut seen = vec![false; d.crossings.len()];
        for &base in &self.bases {
            let mut cur = base;
            loop {
                let head = d.edges[&cur].head;
                if !std::mem::replace(&mut seen[head.crossing], true) && head.pos == 0 {
                    return Some(d.crossings[head.crossing].id);
                }
                cur = d.crossings[head.crossing].pd[(head.pos + 2) % 4];
                if cur == base {
                    break;
                }
            }
        }
        None
    }

    pub fn bad_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        self.traverse()
            .into_iter()
            .filter(|&(id, p)| seen.insert(id) && p == Passage::Under)
            .count()
    }

    pub fn switch(&self, id: CrossingId) -> Result<BasedDiagram, DiagramError> {
        Ok(BasedDiagram { diagram: self.diagram.switch(id)?, bases: self.bases.clone() })
    }

    /// Oriented smoothing at crossing `id`.
    ///
    /// Smoothing a self crossing splits its component; the piece not
    /// holding the old base point gets a new one on the edge leaving the
    /// smoothed site and is walked right after. Smoothing a mixed crossing
    /// merges two components and keeps the earlier base point.
    pub fn smooth(&self, id: CrossingId) -> Result<BasedDiagram, DiagramError> {
        let d = &self.diagram;
        let x = d.crossing(id)?;
        let (a, c, xi, y) = (x.under_in(), x.under_out(), x.over_in(), x.over_out());
        let pos_under = self.position_of(a);
        let pos_over = self.position_of(xi);
        let mut uf = UnionFind::default();
        uf.union(a, y);
        uf.union(xi, c);
        let nd = d.rebuild_merged(&mut uf, &[x], |cid| cid == id)?;
        let live = |e: EdgeId| nd.edges.contains_key(&e).then_some(e);
        let mapped: Vec<Option<EdgeId>> = self.bases.iter().map(|&b| live(uf.find_const(b))).collect();
        let mut bases: Vec<Option<EdgeId>> = mapped.clone();
        if pos_under == pos_over {
            let j = pos_under;
            let (ca, cx) = (live(uf.find_const(a)), live(uf.find_const(xi)));
            match mapped[j] {
                Some(bj) => {
                    let comp = nd.edges[&bj].component;
                    let other = [ca, cx].into_iter().flatten().find(|&e| nd.edges[&e].component != comp);
                    if let Some(o) = other {
                        bases.insert(j + 1, Some(o));
                    }
                }
                None => bases[j] = ca.or(cx),
            }
        } else {
            let (i, j) = (pos_under.min(pos_over), pos_under.max(pos_over));
            bases.remove(j);
            if bases[i].is_none() {
                bases.remove(i);
            }
        }
        let bases = bases.into_iter().flatten().collect();
        BasedDiagram::new(nd, bases)
    }

    fn position_of(&self, e: EdgeId) -> usize {
        let comp = self.diagram.edges[&e].component;
        self.bases
            .iter()
            .position(|b| self.diagram.edges[b].component == comp)
            .expect("every component has a base point")
    }

    /// A byte string equal for based diagrams that differ only in edge
    /// labels and crossing ids.
    pub fn canonical_key(&self) -> Vec<u8> {
        let d = &self.diagram;
        let mut index = BTreeMap::new();
        let mut lengths = Vec::with_capacity(self.bases.len());
        for &base in &self.bases {
            let mut cur = base;
            let mut len = 0u32;
            loop {
                index.insert(cur, index.len() as u32);
                len += 1;
                cur = d.successor(cur).expect("edge in diagram");
                if cur == base {
                    break;
                }
            }
            lengths.push(len);
        }
        let mut quads: Vec<([u32; 4], bool)> = d
            .crossings
            .iter()
            .map(|x| (x.pd.map(|e| index[&e]), x.over_forward))
            .collect();
        quads.sort_unstable();
        let mut key = Vec::with_capacity(8 + 4 * lengths.len() + 17 * quads.len());
        key.extend((self.bases.len() as u32).to_le_bytes());
        key.extend((d.free_loops as u32).to_le_bytes());
        for l in lengths {
            key.extend(l.to_le_bytes());
        }
        for (q, f) in quads {
            for e in q {
                key.extend(e.to_le_bytes());
            }
            key.push(f as u8);
        }
        key
    }
}

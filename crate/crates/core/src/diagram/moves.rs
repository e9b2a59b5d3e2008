//! Reidemeister moves as local rewrites of the crossing list.
//!
//! Faces are found by walking darts: a dart leaves a crossing along one of
//! its four rays with the face on its left. New crossings are described by
//! their rays in counterclockwise order south, east, north, west and then
//! rotated into PD order.

use std::fmt;

use super::{Crossing, CrossingId, Diagram, DiagramError, EdgeId, Slot};

/// Leaving crossing `crossing` along ray `pos`, with the face on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub crossing: CrossingId,
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    R1Plus,
    R1Minus,
    R2Plus,
    R2Minus,
    R3,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MoveSite {
    /// Adds a kink on `edge`, or turns a free loop into a one-crossing
    /// curl when `edge` is `None`.
    R1Add { edge: Option<EdgeId>, left: bool, under_first: bool },
    R1Remove { crossing: CrossingId },
    /// Pushes the edge of dart `e` across the edge of dart `f` inside their
    /// common face.
    R2Add { e: Dart, f: Dart, e_over: bool },
    R2Remove { crossings: [CrossingId; 2] },
    /// Moves each strand of a triangular face across the opposite crossing.
    R3 { darts: [Dart; 3] },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Add { .. } => MoveKind::R1Plus,
            MoveSite::R1Remove { .. } => MoveKind::R1Minus,
            MoveSite::R2Add { .. } => MoveKind::R2Plus,
            MoveSite::R2Remove { .. } => MoveKind::R2Minus,
            MoveSite::R3 { .. } => MoveKind::R3,
        }
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveSite::R1Add { edge: Some(e), left, under_first } => {
                write!(f, "R1+ on edge {e} ({}, {})", side(*left), if *under_first { "under" } else { "over" })
            }
            MoveSite::R1Add { edge: None, left, under_first } => {
                write!(f, "R1+ on a free loop ({}, {})", side(*left), if *under_first { "under" } else { "over" })
            }
            MoveSite::R1Remove { crossing } => write!(f, "R1- at crossing {crossing}"),
            MoveSite::R2Add { e, f: g, e_over } => write!(
                f,
                "R2+ pushing {}:{} {} {}:{}",
                e.crossing,
                e.pos,
                if *e_over { "over" } else { "under" },
                g.crossing,
                g.pos
            ),
            MoveSite::R2Remove { crossings: [a, b] } => write!(f, "R2- at crossings {a},{b}"),
            MoveSite::R3 { darts } => {
                write!(f, "R3 at crossings {},{},{}", darts[0].crossing, darts[1].crossing, darts[2].crossing)
            }
        }
    }
}

fn side(left: bool) -> &'static str {
    if left {
        "left"
    } else {
        "right"
    }
}

const S: usize = 0;
const E: usize = 1;
const N: usize = 2;
const W: usize = 3;

/// Builds a crossing from rays listed as (label, incoming) in the order
/// south, east, north, west.
fn crossing_from_rays(id: CrossingId, rays: [(EdgeId, bool); 4], under_on_ns: bool) -> Crossing {
    let start = match (under_on_ns, rays[S].1, rays[E].1) {
        (true, true, _) => S,
        (true, false, _) => N,
        (false, _, true) => E,
        (false, _, false) => W,
    };
    let pd = std::array::from_fn(|t| rays[(start + t) % 4].0);
    Crossing { id, pd, over_forward: rays[(start + 1) % 4].1 }
}

impl Diagram {
    /// Faces as cycles of darts.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![[false; 4]; self.crossings.len()];
        let mut faces = Vec::new();
        for ci in 0..self.crossings.len() {
            for pos in 0..4 {
                if seen[ci][pos] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut c, mut p) = (ci, pos);
                while !seen[c][p] {
                    seen[c][p] = true;
                    face.push(Dart { crossing: self.crossings[c].id, pos: p });
                    let other = self.other_end(Slot { crossing: c, pos: p });
                    (c, p) = (other.crossing, (other.pos + 3) % 4);
                }
                faces.push(face);
            }
        }
        faces
    }

    fn other_end(&self, s: Slot) -> Slot {
        let ends = self.ends(self.crossings[s.crossing].pd[s.pos]);
        if ends.tail == s {
            ends.head
        } else {
            ends.tail
        }
    }

    fn slot_of(&self, d: Dart) -> Result<Slot, DiagramError> {
        if d.pos > 3 {
            return Err(DiagramError::InapplicableMove(format!("ray {} of crossing {}", d.pos, d.crossing)));
        }
        Ok(Slot { crossing: self.index_of(d.crossing)?, pos: d.pos })
    }

    fn label(&self, s: Slot) -> EdgeId {
        self.crossings[s.crossing].pd[s.pos]
    }

    /// Every move applicable to this diagram, in a deterministic order.
    pub fn enumerate_sites(&self) -> Vec<MoveSite> {
        let mut sites = Vec::new();
        let mut edge_choices: Vec<Option<EdgeId>> = self.edges.keys().map(|&e| Some(e)).collect();
        if self.free_loops > 0 {
            edge_choices.push(None);
        }
        for edge in edge_choices {
            for left in [false, true] {
                for under_first in [false, true] {
                    sites.push(MoveSite::R1Add { edge, left, under_first });
                }
            }
        }
        for x in &self.crossings {
            if is_kink(x) {
                sites.push(MoveSite::R1Remove { crossing: x.id });
            }
        }
        for face in self.faces() {
            for (i, &e) in face.iter().enumerate() {
                for &f in &face[i + 1..] {
                    let (se, sf) = (self.slot_of(e).expect("own dart"), self.slot_of(f).expect("own dart"));
                    if self.label(se) != self.label(sf) {
                        for e_over in [false, true] {
                            sites.push(MoveSite::R2Add { e, f, e_over });
                        }
                    }
                }
            }
            if let Some(pair) = self.bigon_site(&face) {
                sites.push(MoveSite::R2Remove { crossings: pair });
            }
            if let [a, b, c] = face[..] {
                if self.r3_plan([a, b, c]).is_some() {
                    sites.push(MoveSite::R3 { darts: [a, b, c] });
                }
            }
        }
        sites
    }

    /// Applies a move and relabels the result canonically.
    pub fn apply_move(&self, site: &MoveSite) -> Result<Diagram, DiagramError> {
        let inapplicable = || DiagramError::InapplicableMove(site.to_string());
        let d = match *site {
            MoveSite::R1Add { edge, left, under_first } => self.add_kink(edge, left, under_first)?,
            MoveSite::R1Remove { crossing } => {
                if !is_kink(self.crossing(crossing)?) {
                    return Err(inapplicable());
                }
                self.remove_crossings(&[crossing])?
            }
            MoveSite::R2Add { e, f, e_over } => {
                let (se, sf) = (self.slot_of(e)?, self.slot_of(f)?);
                let same_face = self.faces().iter().any(|face| face.contains(&e) && face.contains(&f));
                if !same_face || self.label(se) == self.label(sf) {
                    return Err(inapplicable());
                }
                self.push_across(se, sf, e_over)
            }
            MoveSite::R2Remove { crossings } => {
                let ok = self.faces().iter().any(|face| {
                    self.bigon_site(face)
                        .is_some_and(|p| p == crossings || p == [crossings[1], crossings[0]])
                });
                if !ok {
                    return Err(inapplicable());
                }
                self.remove_crossings(&crossings)?
            }
            MoveSite::R3 { darts } => {
                let is_face = self.faces().iter().any(|face| face.len() == 3 && darts.iter().all(|d| face.contains(d)));
                let plan = is_face.then(|| self.r3_plan(darts)).flatten().ok_or_else(inapplicable)?;
                self.triangle_flip(&plan)
            }
        };
        Ok(d.relabeled())
    }

    fn add_kink(&self, edge: Option<EdgeId>, left: bool, under_first: bool) -> Result<Diagram, DiagramError> {
        let fresh = self.max_label();
        let mut crossings = self.crossings.clone();
        let mut free_loops = self.free_loops;
        let (e, l, e2) = match edge {
            Some(e) => {
                if !self.edges.contains_key(&e) {
                    return Err(DiagramError::InapplicableMove(format!("R1+ on missing edge {e}")));
                }
                let head = self.ends(e).head;
                crossings[head.crossing].pd[head.pos] = fresh + 2;
                (e, fresh + 1, fresh + 2)
            }
            None => {
                if free_loops == 0 {
                    return Err(DiagramError::InapplicableMove("R1+ without a free loop".into()));
                }
                free_loops -= 1;
                (fresh + 1, fresh + 2, fresh + 1)
            }
        };
        let rays = if left {
            [(e, true), (e2, false), (l, false), (l, true)]
        } else {
            [(e, true), (l, true), (l, false), (e2, false)]
        };
        crossings.push(crossing_from_rays(self.max_crossing_id() + 1, rays, under_first));
        Diagram::assemble(crossings, free_loops)
    }

    /// Two crossings joined along both strands with one strand over at both.
    fn bigon_site(&self, face: &[Dart]) -> Option<[CrossingId; 2]> {
        let [a, b] = face[..] else { return None };
        if a.crossing == b.crossing {
            return None;
        }
        let sa = self.slot_of(a).ok()?;
        let far = self.other_end(sa);
        (sa.pos % 2 == far.pos % 2).then_some([a.crossing, b.crossing])
    }

    fn push_across(&self, se: Slot, sf: Slot, e_over: bool) -> Diagram {
        let e = self.label(se);
        let f = self.label(sf);
        let e_left = !self.crossings[se.crossing].is_incoming(se.pos);
        let f_left = !self.crossings[sf.crossing].is_incoming(sf.pos);
        let m = self.max_label();
        let (e_mid, e_last, f_mid, f_last) = (m + 1, m + 2, m + 3, m + 4);
        let mut crossings = self.crossings.clone();
        for (label, last) in [(e, e_last), (f, f_last)] {
            let head = self.ends(label).head;
            crossings[head.crossing].pd[head.pos] = last;
        }
        // `e` runs along the bottom of the face and `f` along the top; the
        // pushed strands overlap in a lens between X1 (west) and X2 (east).
        let mut r1 = [(0, false); 4];
        let mut r2 = [(0, false); 4];
        let (first, second) = if e_left { (&mut r1, &mut r2) } else { (&mut r2, &mut r1) };
        first[S] = (e, true);
        first[N] = (e_mid, false);
        second[N] = (e_mid, true);
        second[S] = (e_last, false);
        if f_left {
            r2[E] = (f, true);
            r2[W] = (f_mid, false);
            r1[E] = (f_mid, true);
            r1[W] = (f_last, false);
        } else {
            r1[W] = (f, true);
            r1[E] = (f_mid, false);
            r2[W] = (f_mid, true);
            r2[E] = (f_last, false);
        }
        let id = self.max_crossing_id();
        crossings.push(crossing_from_rays(id + 1, r1, !e_over));
        crossings.push(crossing_from_rays(id + 2, r2, !e_over));
        Diagram::assemble(crossings, self.free_loops).expect("R2 rewrite keeps edges consistent")
    }

    /// Slots of the triangle edges at both ends, when the triangle has one
    /// strand over at both corners and one under at both.
    fn r3_plan(&self, darts: [Dart; 3]) -> Option<[(Slot, Slot); 3]> {
        let mut plan = [(Slot { crossing: 0, pos: 0 }, Slot { crossing: 0, pos: 0 }); 3];
        for (i, d) in darts.iter().enumerate() {
            let s = self.slot_of(*d).ok()?;
            plan[i] = (s, self.other_end(s));
        }
        let mut ids: Vec<usize> = plan.iter().map(|(s, _)| s.crossing).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != 3 {
            return None;
        }
        let tri: Vec<EdgeId> = plan.iter().map(|(s, _)| self.label(*s)).collect();
        let ext: Vec<EdgeId> = plan
            .iter()
            .flat_map(|(s, t)| [*s, *t])
            .map(|s| self.label(Slot { crossing: s.crossing, pos: (s.pos + 2) % 4 }))
            .collect();
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || ext.iter().any(|e| tri.contains(e)) {
            return None;
        }
        let over_both = plan.iter().filter(|(s, t)| s.pos % 2 == 1 && t.pos % 2 == 1).count();
        let under_both = plan.iter().filter(|(s, t)| s.pos % 2 == 0 && t.pos % 2 == 0).count();
        (over_both == 1 && under_both == 1).then_some(plan)
    }

    fn triangle_flip(&self, plan: &[(Slot, Slot); 3]) -> Diagram {
        let opposite = |s: Slot| Slot { crossing: s.crossing, pos: (s.pos + 2) % 4 };
        let mut crossings = self.crossings.clone();
        let mut fresh = self.max_label();
        for &(p, q) in plan {
            fresh += 1;
            let (ext_p, ext_q) = (self.label(opposite(p)), self.label(opposite(q)));
            crossings[p.crossing].pd[p.pos] = ext_q;
            crossings[q.crossing].pd[q.pos] = ext_p;
            crossings[p.crossing].pd[opposite(p).pos] = fresh;
            crossings[q.crossing].pd[opposite(q).pos] = fresh;
        }
        Diagram::assemble(crossings, self.free_loops).expect("R3 rewrite keeps edges consistent")
    }
}

fn is_kink(x: &Crossing) -> bool {
    (0..4).any(|k| x.pd[k] == x.pd[(k + 1) % 4])
}

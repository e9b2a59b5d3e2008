//! Brute-force skein evaluator that shares no code with the library's
//! diagram or skein modules. Only the polynomial arithmetic is reused.
//!
//! It resolves every bad crossing (not only the first), under every base
//! point choice and component order at the top level, and asserts that all
//! of those resolution orders agree. `check_all_crossings` then confirms the
//! skein relation at every crossing, good ones included.

use std::collections::{BTreeMap, HashMap};

use gconway::laurent::{LaurentPoly, RingSpec};

/// `[a, b, c, d]` counterclockwise from the incoming under edge; `fwd`
/// means the over strand runs from `b` to `d`, which is a positive crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct X {
    pub pd: [u32; 4],
    pub fwd: bool,
}

impl X {
    fn under_in(&self) -> u32 {
        self.pd[0]
    }
    fn under_out(&self) -> u32 {
        self.pd[2]
    }
    fn over_in(&self) -> u32 {
        if self.fwd { self.pd[1] } else { self.pd[3] }
    }
    fn over_out(&self) -> u32 {
        if self.fwd { self.pd[3] } else { self.pd[1] }
    }
    fn switched(&self) -> X {
        let [a, b, c, d] = self.pd;
        if self.fwd {
            X { pd: [b, c, d, a], fwd: false }
        } else {
            X { pd: [d, a, b, c], fwd: true }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    pub xs: Vec<X>,
    pub loops: usize,
}

/// Reads `X(a,b,c,d)` terms and works out over-strand directions by
/// propagating edge directions from the under strands.
pub fn parse(text: &str) -> Link {
    let mut pds = Vec::new();
    for chunk in text.split('X').skip(1) {
        let inner = chunk.trim().trim_start_matches('(').split(')').next().unwrap();
        let v: Vec<u32> = inner.split(',').map(|s| s.trim().parse().unwrap()).collect();
        pds.push([v[0], v[1], v[2], v[3]]);
    }
    // Known direction of each (crossing, slot): Some(true) = incoming.
    let mut dir: Vec<[Option<bool>; 4]> = pds.iter().map(|_| [Some(true), None, Some(false), None]).collect();
    let mut occ: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (i, pd) in pds.iter().enumerate() {
        for (k, e) in pd.iter().enumerate() {
            occ.entry(*e).or_default().push((i, k));
        }
    }
    loop {
        let mut changed = false;
        for occs in occ.values() {
            assert_eq!(occs.len(), 2, "each edge label appears twice");
            let [(i, k), (j, l)] = [occs[0], occs[1]];
            match (dir[i][k], dir[j][l]) {
                (Some(x), None) => {
                    dir[j][l] = Some(!x);
                    changed = true;
                }
                (None, Some(y)) => {
                    dir[i][k] = Some(!y);
                    changed = true;
                }
                _ => {}
            }
        }
        for d in dir.iter_mut() {
            match (d[1], d[3]) {
                (Some(x), None) => {
                    d[3] = Some(!x);
                    changed = true;
                }
                (None, Some(y)) => {
                    d[1] = Some(!y);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let xs = pds
        .iter()
        .zip(&dir)
        .map(|(pd, d)| X { pd: *pd, fwd: d[1].expect("oracle needs inferable directions") })
        .collect();
    Link { xs, loops: 0 }
}

/// Disjoint union, shifting labels of `b` past those of `a`.
pub fn union(a: &Link, b: &Link) -> Link {
    let shift = a.xs.iter().flat_map(|x| x.pd).max().unwrap_or(0);
    let mut xs = a.xs.clone();
    xs.extend(b.xs.iter().map(|x| X { pd: x.pd.map(|e| e + shift), fwd: x.fwd }));
    Link { xs, loops: a.loops + b.loops }
}

pub fn switch_at(l: &Link, i: usize) -> Link {
    let mut out = l.clone();
    out.xs[i] = out.xs[i].switched();
    out
}

fn smooth_at(l: &Link, i: usize) -> Link {
    let x = l.xs[i];
    let mut parent: BTreeMap<u32, u32> = BTreeMap::new();
    fn find(p: &mut BTreeMap<u32, u32>, e: u32) -> u32 {
        let up = *p.get(&e).unwrap_or(&e);
        if up == e {
            e
        } else {
            let r = find(p, up);
            p.insert(e, r);
            r
        }
    }
    let mut join = |a: u32, b: u32| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
        }
    };
    join(x.under_in(), x.over_out());
    join(x.over_in(), x.under_out());
    let xs: Vec<X> = l
        .xs
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, y)| X { pd: y.pd.map(|e| find(&mut parent, e)), fwd: y.fwd })
        .collect();
    let mut classes: Vec<u32> = x.pd.iter().map(|e| find(&mut parent, *e)).collect();
    classes.sort();
    classes.dedup();
    let closed = classes.iter().filter(|c| !xs.iter().any(|y| y.pd.contains(c))).count();
    Link { xs, loops: l.loops + closed }
}

struct Walk {
    /// Component index of each edge label.
    comp: HashMap<u32, usize>,
    /// Edges of each component in walk order from its base.
    cycles: Vec<Vec<u32>>,
}

fn heads(l: &Link) -> HashMap<u32, (usize, bool)> {
    let mut h = HashMap::new();
    for (i, x) in l.xs.iter().enumerate() {
        h.insert(x.under_in(), (i, false));
        h.insert(x.over_in(), (i, true));
    }
    h
}

fn next_edge(l: &Link, h: &HashMap<u32, (usize, bool)>, e: u32) -> u32 {
    let (i, over) = h[&e];
    if over { l.xs[i].over_out() } else { l.xs[i].under_out() }
}

fn walk(l: &Link, bases: &[u32]) -> Walk {
    let h = heads(l);
    let mut comp = HashMap::new();
    let mut cycles = Vec::new();
    for (ci, &b) in bases.iter().enumerate() {
        let mut cyc = vec![b];
        comp.insert(b, ci);
        let mut e = next_edge(l, &h, b);
        while e != b {
            comp.insert(e, ci);
            cyc.push(e);
            e = next_edge(l, &h, e);
        }
        cycles.push(cyc);
    }
    Walk { comp, cycles }
}

/// One base edge per component: the smallest label, components sorted by it.
fn default_bases(l: &Link) -> Vec<u32> {
    let all = all_cycles(l);
    all.iter().map(|c| *c.iter().min().unwrap()).collect()
}

fn all_cycles(l: &Link) -> Vec<Vec<u32>> {
    let h = heads(l);
    let mut seen = std::collections::HashSet::new();
    let mut labels: Vec<u32> = h.keys().copied().collect();
    labels.sort();
    let mut out = Vec::new();
    for s in labels {
        if seen.contains(&s) {
            continue;
        }
        let mut cyc = vec![s];
        seen.insert(s);
        let mut e = next_edge(l, &h, s);
        while e != s {
            seen.insert(e);
            cyc.push(e);
            e = next_edge(l, &h, e);
        }
        out.push(cyc);
    }
    out
}

fn bad_crossings(l: &Link, w: &Walk) -> Vec<usize> {
    let h = heads(l);
    let mut first: HashMap<usize, bool> = HashMap::new();
    for cyc in &w.cycles {
        for e in cyc {
            let (i, over) = h[e];
            first.entry(i).or_insert(over);
        }
    }
    let mut bad: Vec<usize> = first.into_iter().filter(|(_, over)| !over).map(|(i, _)| i).collect();
    bad.sort();
    bad
}

/// Linear operation coefficients of one algebra.
pub struct Ops {
    pub ring: RingSpec,
    pub p: LaurentPoly,
    pub q: LaurentPoly,
    pub r: LaurentPoly,
    pub ratio: LaurentPoly,
}

impl Ops {
    pub fn generic() -> Ops {
        let ring = RingSpec::new([("p", true), ("q", true), ("r", false)]).unwrap();
        let g = |s: &str| LaurentPoly::parse(s, &ring).unwrap();
        Ops { p: g("p"), q: g("q"), r: g("r"), ratio: g("(1 - p)/q"), ring }
    }

    pub fn homflypt() -> Ops {
        let ring = RingSpec::new([("v", true), ("z", true)]).unwrap();
        let g = |s: &str| LaurentPoly::parse(s, &ring).unwrap();
        Ops { p: g("v^2"), q: g("v*z"), r: g("v*z"), ratio: g("(v^-1 - v)/z"), ring }
    }

    fn unit(&self, n: usize) -> LaurentPoly {
        self.ratio.pow(n as u32 - 1)
    }

    /// Value at a crossing from the values of its switch and smoothing.
    fn combine(&self, positive: bool, same_component: bool, sw: &LaurentPoly, sm: &LaurentPoly) -> LaurentPoly {
        let k = if same_component { &self.q } else { &self.r };
        if positive {
            &(&self.p * sw) + &(k * sm)
        } else {
            let pinv = self.p.unit_inverse().unwrap();
            &pinv * &(sw - &(k * sm))
        }
    }
}

pub struct Oracle {
    pub ops: Ops,
    memo: HashMap<Link, LaurentPoly>,
    based: HashMap<(Link, Vec<u32>), LaurentPoly>,
}

fn canonical(l: &Link) -> Link {
    let mut xs = l.xs.clone();
    xs.sort();
    Link { xs, loops: l.loops }
}

impl Oracle {
    pub fn new(ops: Ops) -> Oracle {
        Oracle { ops, memo: HashMap::new(), based: HashMap::new() }
    }

    /// Value with the default base points.
    pub fn value(&mut self, l: &Link) -> LaurentPoly {
        let key = canonical(l);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.value_with(l, &default_bases(l));
        self.memo.insert(key, v.clone());
        v
    }

    /// Resolves every bad crossing for the given bases and insists that all
    /// choices agree.
    pub fn value_with(&mut self, l: &Link, bases: &[u32]) -> LaurentPoly {
        let key = (canonical(l), bases.to_vec());
        if let Some(v) = self.based.get(&key) {
            return v.clone();
        }
        let v = self.resolve_all(l, bases);
        self.based.insert(key, v.clone());
        v
    }

    fn resolve_all(&mut self, l: &Link, bases: &[u32]) -> LaurentPoly {
        let w = walk(l, bases);
        let bad = bad_crossings(l, &w);
        if bad.is_empty() {
            return self.ops.unit(w.cycles.len() + l.loops);
        }
        let mut agreed: Option<LaurentPoly> = None;
        for i in bad {
            let x = l.xs[i];
            let same = w.comp[&x.under_in()] == w.comp[&x.over_in()];
            let sw = self.value_with(&switch_at(l, i), bases);
            let sm = self.value(&smooth_at(l, i));
            let v = self.ops.combine(x.fwd, same, &sw, &sm);
            match &agreed {
                None => agreed = Some(v),
                Some(a) => assert_eq!(a, &v, "resolution order changes the value at crossing {i}"),
            }
        }
        agreed.unwrap()
    }

    /// Value after checking every base point choice and component order.
    pub fn checked_value(&mut self, l: &Link) -> LaurentPoly {
        let cycles = all_cycles(l);
        let reference = self.value(l);
        let mut choices: Vec<Vec<u32>> = vec![vec![]];
        for c in &cycles {
            choices = choices
                .into_iter()
                .flat_map(|prefix| {
                    c.iter().map(move |e| {
                        let mut p = prefix.clone();
                        p.push(*e);
                        p
                    })
                })
                .collect();
        }
        for bases in choices {
            for perm in permutations(&bases) {
                assert_eq!(self.value_with(l, &perm), reference, "bases {perm:?} disagree");
            }
        }
        self.check_all_crossings(l, &reference);
        reference
    }

    /// The skein relation must hold at every crossing, good or bad.
    fn check_all_crossings(&mut self, l: &Link, value: &LaurentPoly) {
        let cyc = all_cycles(l);
        let comp: HashMap<u32, usize> =
            cyc.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |e| (*e, i))).collect();
        for (i, x) in l.xs.iter().enumerate() {
            let same = comp[&x.under_in()] == comp[&x.over_in()];
            let sw = self.value(&switch_at(l, i));
            let sm = self.value(&smooth_at(l, i));
            assert_eq!(&self.ops.combine(x.fwd, same, &sw, &sm), value, "skein relation fails at crossing {i}");
        }
    }
}

fn permutations(v: &[u32]) -> Vec<Vec<u32>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// The unlink of `n` components drawn with crossings: copies of a Hopf
/// diagram with one crossing switched, plus one switched trefoil.
pub fn crossed_unlink(n: usize) -> Link {
    let split_pair = switch_at(&parse("X(4,1,3,2) X(2,3,1,4)"), 0);
    let knotted_unknot = switch_at(&parse("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"), 1);
    let mut l = knotted_unknot;
    let mut have = 1;
    while have + 2 <= n {
        l = union(&l, &split_pair);
        have += 2;
    }
    if have < n {
        l.loops += 1;
    }
    l
}

/// PD text for the library's parser, with explicit signs.
pub fn to_pd_text(l: &Link) -> String {
    let mut parts: Vec<String> = l
        .xs
        .iter()
        .map(|x| {
            let [a, b, c, d] = x.pd;
            format!("X({a},{b},{c},{d}){}", if x.fwd { "+" } else { "-" })
        })
        .collect();
    parts.extend(std::iter::repeat_n("O".to_string(), l.loops));
    parts.join(" ")
}

//! Subgroups of free groups: folded core graphs, membership, cosets,
//! conjugate intersections, height, width and malnormality.
//!
//! Essential distinctness is tracked on left cosets `gH`; the conjugate
//! attached to `gH` is `gHg⁻¹`, which does not depend on the representative.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{FoldingTable, NONE};
use crate::cayley::CayleyBall;
use crate::error::{Error, Result};
use crate::word::{words_of_length, Letter, Word};

/// A folded, pruned inverse automaton with basepoint `0`.
///
/// States are numbered by breadth-first discovery from the basepoint with
/// letters in code order, so two graphs of the same subgroup are equal as
/// values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoreGraph {
    rank: usize,
    states: usize,
    /// `table[v * 2k + code]`.
    table: Vec<u32>,
}

/// Edge-list form used for import and export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreGraphData {
    pub rank: usize,
    pub vertices: usize,
    pub basepoint: usize,
    /// `(source, generator, target)` for positive generators.
    pub edges: Vec<(usize, usize, usize)>,
}

impl CoreGraph {
    /// Stallings folding of the bouquet of loops spelled by `words`.
    pub fn fold(rank: usize, words: &[Word]) -> Result<Self> {
        let mut t = FoldingTable::new(2 * rank);
        let base = t.add_state();
        for w in words {
            check_rank(w, rank)?;
            add_path(&mut t, base, w, base);
        }
        Ok(CoreGraph::extract(rank, &mut t, base))
    }

    pub fn trivial(rank: usize) -> Self {
        CoreGraph { rank, states: 1, table: vec![NONE; 2 * rank] }
    }

    pub fn from_data(data: &CoreGraphData) -> Result<Self> {
        if data.vertices == 0 || data.basepoint >= data.vertices {
            return Err(Error::Parse("core graph basepoint out of range".into()));
        }
        let mut t = FoldingTable::new(2 * data.rank);
        for _ in 0..data.vertices {
            t.add_state();
        }
        for &(u, g, v) in &data.edges {
            if u >= data.vertices || v >= data.vertices {
                return Err(Error::Parse(format!("edge ({u}, {g}, {v}) references a missing vertex")));
            }
            if g >= data.rank {
                return Err(Error::UnknownGenerator { index: g, rank: data.rank });
            }
            t.add_edge(u as u32, 2 * g, v as u32);
        }
        Ok(CoreGraph::extract(data.rank, &mut t, data.basepoint as u32))
    }

    pub fn to_data(&self) -> CoreGraphData {
        CoreGraphData { rank: self.rank, vertices: self.states, basepoint: 0, edges: self.edges() }
    }

    /// Reads off the component of `base`, prunes hanging trees away from the
    /// basepoint and relabels canonically.
    fn extract(rank: usize, t: &mut FoldingTable, base: u32) -> Self {
        let width = 2 * rank;
        let base = t.find(base);
        let mut ids: HashMap<u32, usize> = HashMap::from([(base, 0)]);
        let mut order = vec![base];
        let mut i = 0;
        while i < order.len() {
            for x in 0..width {
                let s = t.get(order[i], x);
                if s != NONE && !ids.contains_key(&s) {
                    ids.insert(s, order.len());
                    order.push(s);
                }
            }
            i += 1;
        }
        let n = order.len();
        let mut table = vec![NONE; n * width];
        for (v, &s) in order.iter().enumerate() {
            for x in 0..width {
                let target = t.get(s, x);
                if target != NONE {
                    table[v * width + x] = ids[&target] as u32;
                }
            }
        }
        prune_and_relabel(rank, n, table)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.states
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.table[v * 2 * self.rank + l.code()];
        (t != NONE).then_some(t as usize)
    }

    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.states {
            for g in 0..self.rank {
                if let Some(w) = self.target(v, Letter::new(g, false)) {
                    out.push((v, g, w));
                }
            }
        }
        out
    }

    /// A subgroup of a free group is infinite exactly when it is nontrivial.
    pub fn is_trivial(&self) -> bool {
        self.table.iter().all(|&t| t == NONE)
    }

    /// Reads `w` from the basepoint as far as possible: the state reached and
    /// the number of letters consumed.
    pub fn read(&self, w: &Word) -> (usize, usize) {
        let mut v = 0;
        for (i, &l) in w.letters().iter().enumerate() {
            match self.target(v, l) {
                Some(next) => v = next,
                None => return (v, i),
            }
        }
        (v, w.len())
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.read(w) == (0, w.len())
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let width = 2 * self.rank;
        let mut path: Vec<Option<Word>> = vec![None; self.states];
        path[0] = Some(Word::identity());
        let mut tree = vec![false; self.states * width];
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for x in 0..width {
                if let Some(w) = self.target(v, Letter::from_code(x)) {
                    if path[w].is_none() {
                        path[w] = Some(path[v].as_ref().unwrap().push(Letter::from_code(x)));
                        tree[v * width + x] = true;
                        tree[w * width + (x ^ 1)] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (v, g, w) in self.edges() {
            if !tree[v * width + 2 * g] {
                let pv = path[v].as_ref().unwrap();
                let pw = path[w].as_ref().unwrap();
                out.push(pv.push(Letter::new(g, false)).mul(&pw.inverse()));
            }
        }
        out
    }

    /// Core graph of `gHg⁻¹`.
    pub fn conjugate(&self, g: &Word) -> CoreGraph {
        let mut t = self.to_folding_table();
        let base = t.add_state();
        add_path(&mut t, base, g, 0);
        CoreGraph::extract(self.rank, &mut t, base)
    }

    /// Core graph of `H ∩ K` via the product automaton from the basepoint pair.
    pub fn intersect(&self, other: &CoreGraph) -> CoreGraph {
        assert_eq!(self.rank, other.rank, "rank mismatch");
        let width = 2 * self.rank;
        let mut ids: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
        let mut order = vec![(0usize, 0usize)];
        let mut table = vec![NONE; width];
        let mut i = 0;
        while i < order.len() {
            let (u, v) = order[i];
            for x in 0..width {
                let l = Letter::from_code(x);
                if let (Some(a), Some(b)) = (self.target(u, l), other.target(v, l)) {
                    let id = *ids.entry((a, b)).or_insert_with(|| {
                        order.push((a, b));
                        table.extend(std::iter::repeat_n(NONE, width));
                        order.len() - 1
                    });
                    table[i * width + x] = id as u32;
                }
            }
            i += 1;
        }
        prune_and_relabel(self.rank, order.len(), table)
    }

    /// Core graph of `gHg⁻¹ ∩ H`.
    pub fn intersect_conjugate(&self, g: &Word) -> CoreGraph {
        self.conjugate(g).intersect(self)
    }

    fn to_folding_table(&self) -> FoldingTable {
        let mut t = FoldingTable::new(2 * self.rank);
        for _ in 0..self.states {
            t.add_state();
        }
        for (v, g, w) in self.edges() {
            t.link(v as u32, 2 * g, w as u32);
        }
        t
    }
}

fn check_rank(w: &Word, rank: usize) -> Result<()> {
    match w.letters().iter().find(|l| l.generator() >= rank) {
        Some(l) => Err(Error::UnknownGenerator { index: l.generator(), rank }),
        None => Ok(()),
    }
}

fn add_path(t: &mut FoldingTable, from: u32, w: &Word, to: u32) {
    let letters = w.letters();
    if letters.is_empty() {
        t.merge(from, to);
        return;
    }
    let mut cur = from;
    for (i, l) in letters.iter().enumerate() {
        let next = if i + 1 == letters.len() { to } else { t.add_state() };
        t.add_edge(cur, l.code(), next);
        cur = t.find(next);
    }
}

/// Repeatedly removes degree-one states other than the basepoint, then
/// renumbers the rest breadth-first from the basepoint.
fn prune_and_relabel(rank: usize, n: usize, mut table: Vec<u32>) -> CoreGraph {
    let width = 2 * rank;
    let degree = |table: &[u32], v: usize| table[v * width..(v + 1) * width].iter().filter(|&&t| t != NONE).count();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (1..n).filter(|&v| degree(&table, v) <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] || degree(&table, v) > 1 {
            continue;
        }
        alive[v] = false;
        for x in 0..width {
            let w = table[v * width + x];
            if w != NONE {
                table[v * width + x] = NONE;
                table[w as usize * width + (x ^ 1)] = NONE;
                if w != 0 && degree(&table, w as usize) <= 1 {
                    stack.push(w as usize);
                }
            }
        }
    }
    let mut ids = vec![NONE; n];
    ids[0] = 0;
    let mut order = vec![0usize];
    let mut i = 0;
    while i < order.len() {
        for x in 0..width {
            let w = table[order[i] * width + x];
            if w != NONE && ids[w as usize] == NONE {
                ids[w as usize] = order.len() as u32;
                order.push(w as usize);
            }
        }
        i += 1;
    }
    let mut out = vec![NONE; order.len() * width];
    for (new, &old) in order.iter().enumerate() {
        for x in 0..width {
            let w = table[old * width + x];
            if w != NONE {
                out[new * width + x] = ids[w as usize];
            }
        }
    }
    CoreGraph { rank, states: order.len(), table: out }
}

/// A subgroup with decidable membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupPredicate {
    Core(CoreGraph),
    /// Kernel of the abelianization map: words with all exponent sums zero.
    /// Normal of infinite index, hence not quasiconvex.
    AbelianizationKernel { rank: usize },
}

/// Canonical label of a left coset `gH`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CosetKey {
    /// Reading `g⁻¹` stops at `state` with `rest` unread; this names the
    /// vertex of the Schreier graph reached by `g⁻¹`.
    Schreier { state: usize, rest: Word },
    Abelian(Vec<i64>),
}

impl SubgroupPredicate {
    pub fn rank(&self) -> usize {
        match self {
            SubgroupPredicate::Core(h) => h.rank(),
            SubgroupPredicate::AbelianizationKernel { rank } => *rank,
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        match self {
            SubgroupPredicate::Core(h) => h.accepts(w),
            SubgroupPredicate::AbelianizationKernel { rank } => w.exponent_sums(*rank).iter().all(|&s| s == 0),
        }
    }

    /// `coset_key(g) == coset_key(g')` exactly when `gH = g'H`.
    pub fn coset_key(&self, g: &Word) -> CosetKey {
        match self {
            SubgroupPredicate::Core(h) => {
                let inv = g.inverse();
                let (state, read) = h.read(&inv);
                CosetKey::Schreier { state, rest: Word::reduce(inv.letters()[read..].iter().copied()) }
            }
            SubgroupPredicate::AbelianizationKernel { rank } => CosetKey::Abelian(g.exponent_sums(*rank)),
        }
    }

    pub fn core(&self) -> Option<&CoreGraph> {
        match self {
            SubgroupPredicate::Core(h) => Some(h),
            SubgroupPredicate::AbelianizationKernel { .. } => None,
        }
    }
}

/// A left coset `gH`, named by its shortlex-least representative among the
/// elements that were enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CosetId {
    pub representative: Word,
}

/// Left cosets meeting a free-group ball, with the coset of every vertex.
#[derive(Clone, Debug)]
pub struct CosetPartition {
    pub cosets: Vec<CosetId>,
    /// `assignment[v]` indexes `cosets`.
    pub assignment: Vec<usize>,
    /// Ball vertices of each coset, in id order.
    pub members: Vec<Vec<usize>>,
}

pub fn partition_cosets(s: &SubgroupPredicate, ball: &CayleyBall) -> Result<CosetPartition> {
    if !ball.is_free() {
        return Err(Error::Precondition("coset enumeration needs a free-group ball".into()));
    }
    if ball.presentation().rank() != s.rank() {
        return Err(Error::Precondition("subgroup and ball have different ranks".into()));
    }
    let mut index: HashMap<CosetKey, usize> = HashMap::new();
    let mut cosets = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut assignment = Vec::with_capacity(ball.len());
    for v in 0..ball.len() {
        let key = s.coset_key(ball.word(v));
        let c = *index.entry(key).or_insert_with(|| {
            cosets.push(CosetId { representative: ball.word(v).clone() });
            members.push(Vec::new());
            cosets.len() - 1
        });
        members[c].push(v);
        assignment.push(c);
    }
    Ok(CosetPartition { cosets, assignment, members })
}

/// One canonical representative per left coset meeting the ball, in shortlex order.
pub fn enumerate_cosets(s: &SubgroupPredicate, ball: &CayleyBall) -> Result<Vec<CosetId>> {
    Ok(partition_cosets(s, ball)?.cosets)
}

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    pub radius: usize,
    /// Merge cosets whose conjugates are equal as sets.
    pub dedupe_conjugates: bool,
}

impl ScanOptions {
    pub fn radius(radius: usize) -> Self {
        ScanOptions { radius, dedupe_conjugates: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanResult {
    pub value: usize,
    /// Coset representatives of a witnessing collection.
    pub certificate: Vec<Word>,
    pub radius: usize,
    /// Values at radius − 2, radius − 1 and radius (clamped at 0).
    pub profile: Vec<usize>,
    /// No growth across the last two radius increments.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MalnormalResult {
    pub malnormal: bool,
    pub witness: Option<Word>,
    pub radius: usize,
    pub stable: bool,
}

/// The conjugates `gHg⁻¹` for cosets `gH` with a representative of length at
/// most the scan radius, and which pairs of them meet in an infinite subgroup.
pub struct ConjugateScan {
    pub h: CoreGraph,
    pub radius: usize,
    pub representatives: Vec<Word>,
    pub conjugates: Vec<CoreGraph>,
    /// Sorted neighbour lists of the infinite-pairwise-intersection graph.
    pub adjacency: Vec<Vec<usize>>,
}

impl ConjugateScan {
    pub fn new(h: &CoreGraph, opts: &ScanOptions) -> Self {
        let s = SubgroupPredicate::Core(h.clone());
        let mut seen: HashMap<CosetKey, ()> = HashMap::new();
        let mut representatives = Vec::new();
        let mut conjugates: Vec<CoreGraph> = Vec::new();
        let mut graphs_seen: HashMap<CoreGraph, ()> = HashMap::new();
        if !h.is_trivial() {
            for len in 0..=opts.radius {
                for g in words_of_length(h.rank(), len) {
                    if seen.insert(s.coset_key(&g), ()).is_some() {
                        continue;
                    }
                    let c = h.conjugate(&g);
                    if opts.dedupe_conjugates && graphs_seen.insert(c.clone(), ()).is_some() {
                        continue;
                    }
                    representatives.push(g);
                    conjugates.push(c);
                }
            }
        }
        let n = conjugates.len();
        let adjacency: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && !conjugates[i].intersect(&conjugates[j]).is_trivial())
                    .collect()
            })
            .collect();
        ConjugateScan { h: h.clone(), radius: opts.radius, representatives, conjugates, adjacency }
    }

    fn within(&self, radius: usize) -> Vec<usize> {
        (0..self.representatives.len()).filter(|&i| self.representatives[i].len() <= radius).collect()
    }

    /// Largest clique of the pairwise graph restricted to representatives of
    /// length at most `radius`.
    pub fn max_clique(&self, radius: usize) -> Vec<usize> {
        let allowed = self.within(radius);
        let mut mask = vec![false; self.representatives.len()];
        allowed.iter().for_each(|&i| mask[i] = true);
        let mut best = Vec::new();
        bron_kerbosch(&self.adjacency, &mask, &mut Vec::new(), allowed, Vec::new(), &mut best);
        best
    }

    /// Largest collection (within `radius`) whose total intersection is infinite.
    pub fn max_total_intersection(&self, radius: usize) -> Vec<usize> {
        let allowed = self.within(radius);
        let mut mask = vec![false; self.representatives.len()];
        allowed.iter().for_each(|&i| mask[i] = true);
        let mut best = Vec::new();
        for &i in &allowed {
            let mut current = vec![i];
            self.extend_total(&mask, &mut current, &self.conjugates[i], &mut best);
        }
        best
    }

    fn extend_total(&self, mask: &[bool], current: &mut Vec<usize>, meet: &CoreGraph, best: &mut Vec<usize>) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        let last = *current.last().unwrap();
        let candidates: Vec<usize> = self.adjacency[last]
            .iter()
            .copied()
            .filter(|&j| j > last && mask[j] && current.iter().all(|c| self.adjacency[*c].binary_search(&j).is_ok()))
            .collect();
        for j in candidates {
            let next = meet.intersect(&self.conjugates[j]);
            if !next.is_trivial() {
                current.push(j);
                self.extend_total(mask, current, &next, best);
                current.pop();
            }
        }
    }

    fn result(&self, f: impl Fn(usize) -> Vec<usize>) -> ScanResult {
        let r = self.radius;
        let radii = [r.saturating_sub(2), r.saturating_sub(1), r];
        let profile: Vec<usize> = radii.iter().map(|&q| f(q).len()).collect();
        let best = f(r);
        ScanResult {
            value: best.len(),
            certificate: best.iter().map(|&i| self.representatives[i].clone()).collect(),
            radius: r,
            stable: r >= 2 && profile.iter().all(|&v| v == profile[2]),
            profile,
        }
    }

    pub fn height(&self) -> ScanResult {
        self.result(|q| self.max_total_intersection(q))
    }

    pub fn width(&self) -> ScanResult {
        self.result(|q| self.max_clique(q))
    }

    /// First essentially distinct conjugator (in shortlex order) whose
    /// conjugate meets `H` infinitely.
    pub fn malnormal_witness(&self, radius: usize) -> Option<Word> {
        (1..self.representatives.len())
            .filter(|&i| self.representatives[i].len() <= radius)
            .find(|&i| !self.h.intersect(&self.conjugates[i]).is_trivial())
            .map(|i| self.representatives[i].clone())
    }

    pub fn malnormal(&self) -> MalnormalResult {
        let r = self.radius;
        let answers: Vec<bool> =
            [r.saturating_sub(2), r.saturating_sub(1), r].iter().map(|&q| self.malnormal_witness(q).is_none()).collect();
        let witness = self.malnormal_witness(r);
        MalnormalResult {
            malnormal: witness.is_none(),
            stable: witness.is_some() || (r >= 2 && answers.iter().all(|&a| a)),
            witness,
            radius: r,
        }
    }
}

pub(crate) fn bron_kerbosch(
    adj: &[Vec<usize>],
    mask: &[bool],
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    best: &mut Vec<usize>,
) {
    if p.is_empty() {
        if x.is_empty() && r.len() > best.len() {
            let mut clique = r.clone();
            clique.sort_unstable();
            *best = clique;
        }
        return;
    }
    if r.len() + p.len() <= best.len() {
        return;
    }
    let neighbours = |v: usize| adj[v].iter().copied().filter(|&w| mask[w]);
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| (p.iter().filter(|&&w| adj[u].binary_search(&w).is_ok()).count(), std::cmp::Reverse(u)))
        .unwrap();
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| adj[pivot].binary_search(&v).is_err()).collect();
    let mut p = p;
    for v in candidates {
        let nv: Vec<usize> = neighbours(v).collect();
        let p2: Vec<usize> = p.iter().copied().filter(|w| nv.binary_search(w).is_ok()).collect();
        let x2: Vec<usize> = x.iter().copied().filter(|w| nv.binary_search(w).is_ok()).collect();
        r.push(v);
        bron_kerbosch(adj, mask, r, p2, x2, best);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

pub fn height(h: &CoreGraph, opts: &ScanOptions) -> ScanResult {
    ConjugateScan::new(h, opts).height()
}

pub fn width(h: &CoreGraph, opts: &ScanOptions) -> ScanResult {
    ConjugateScan::new(h, opts).width()
}

pub fn is_malnormal(h: &CoreGraph, opts: &ScanOptions) -> MalnormalResult {
    ConjugateScan::new(h, opts).malnormal()
}

/// Named subgroups of `F(a, b)` used throughout the examples and tests.
pub fn bundled_subgroups() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("<a>", vec!["a"]),
        ("<a^2>", vec!["a^2"]),
        ("<ab>", vec!["a b"]),
        ("<a,b^2>", vec!["a", "b^2"]),
        ("<a^2,ab>", vec!["a^2", "a b"]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{default_names, parse_word};

    fn w(s: &str) -> Word {
        parse_word(s, &default_names(2)).unwrap()
    }

    fn core(gens: &[&str]) -> CoreGraph {
        CoreGraph::fold(2, &gens.iter().map(|s| w(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_loop() {
        let h = core(&["a"]);
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edges(), vec![(0, 0, 0)]);
    }

    #[test]
    fn wedge_shape() {
        let h = core(&["a b a^-1"]);
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edges(), vec![(0, 0, 1), (1, 1, 1)]);
    }

    #[test]
    fn two_vertex_fold() {
        let h = core(&["a^2", "a b"]);
        assert_eq!(h.vertex_count(), 2);
        for yes in ["a^2", "a b", "a^2 b^-1 a^-1"] {
            assert!(h.accepts(&w(yes)), "{yes}");
        }
        assert!(!h.accepts(&w("b")));
    }

    #[test]
    fn folding_cancels_redundant_generators() {
        assert_eq!(core(&["a", "a^3"]), core(&["a"]));
        assert_eq!(core(&["a b", "b"]), core(&["a", "b"]));
    }

    #[test]
    fn coset_keys_separate_cosets() {
        let s = SubgroupPredicate::Core(core(&["a"]));
        assert_eq!(s.coset_key(&w("a^3")), s.coset_key(&w("1")));
        assert_eq!(s.coset_key(&w("b a^2")), s.coset_key(&w("b a^-1")));
        assert_ne!(s.coset_key(&w("b")), s.coset_key(&w("b^-1")));
        assert_ne!(s.coset_key(&w("a b")), s.coset_key(&w("b")));
    }

    #[test]
    fn conjugate_intersections() {
        assert!(core(&["a"]).intersect_conjugate(&w("b")).is_trivial());
        assert_eq!(core(&["a^2"]).intersect_conjugate(&w("a")), core(&["a^2"]));
        assert!(!core(&["a", "b a b^-1"]).intersect_conjugate(&w("b")).is_trivial());
    }

    #[test]
    fn basis_regenerates_subgroup() {
        let h = core(&["a^2", "a b"]);
        assert_eq!(CoreGraph::fold(2, &h.basis()).unwrap(), h);
    }

    #[test]
    fn trivial_subgroup_scans() {
        let h = CoreGraph::trivial(2);
        let scan = ConjugateScan::new(&h, &ScanOptions::radius(3));
        assert_eq!(scan.height().value, 0);
        assert_eq!(scan.width().value, 0);
        assert!(scan.malnormal().malnormal);
    }

    #[test]
    fn dedupe_merges_equal_conjugates() {
        let h = core(&["a^2"]);
        let opts = ScanOptions { radius: 3, dedupe_conjugates: true };
        assert_eq!(width(&h, &opts).value, 1);
        assert_eq!(width(&h, &ScanOptions::radius(3)).value, 2);
    }

    #[test]
    fn data_round_trip() {
        let h = core(&["a^2", "a b"]);
        assert_eq!(CoreGraph::from_data(&h.to_data()).unwrap(), h);
    }
}

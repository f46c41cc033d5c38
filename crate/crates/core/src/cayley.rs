//! Balls in Cayley graphs, Gromov products, four-point hyperbolicity and
//! coned-off (electric) metrics.
//!
//! Vertex ids follow breadth-first discovery with letters tried in code
//! order, so ids are sorted by the shortlex order of their representative
//! words, and every representative is the shortlex-least geodesic word.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::OnceLock;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{FoldingTable, NONE};
use crate::error::{Error, Result};
use crate::metric::{bfs, MetricGraph};
use crate::presentation::{Presentation, PresentationKind};
use crate::word::{Letter, Word};

pub const DEFAULT_VERTEX_CAP: usize = 2_000_000;
pub const DEFAULT_GENERIC_RADIUS_CAP: usize = 40;
/// Above this many vertices, non-free balls answer distance queries by BFS
/// instead of a cached all-pairs table.
const ALL_PAIRS_LIMIT: usize = 6_000;

#[derive(Clone, Debug)]
pub struct BallOptions {
    pub vertex_cap: usize,
    pub generic_radius_cap: usize,
    /// Extra depth enumerated past the radius for generic presentations.
    /// Defaults to the longest relator length.
    pub enumeration_margin: Option<usize>,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            generic_radius_cap: DEFAULT_GENERIC_RADIUS_CAP,
            enumeration_margin: None,
        }
    }
}

#[derive(Debug)]
pub struct CayleyBall {
    presentation: Presentation,
    radius: usize,
    words: Vec<Word>,
    lengths: Vec<u32>,
    index: HashMap<Word, u32>,
    /// `adjacency[v * 2k + code]` is the vertex `v·letter`, or `NONE`.
    adjacency: Vec<u32>,
    all_pairs: OnceLock<Vec<u16>>,
}

impl CayleyBall {
    pub fn generate(p: &Presentation, radius: usize) -> Result<Self> {
        CayleyBall::generate_with(p, radius, &BallOptions::default())
    }

    pub fn generate_with(p: &Presentation, radius: usize, opts: &BallOptions) -> Result<Self> {
        let (words, adjacency) = match p.kind() {
            PresentationKind::Free => free_ball(p.rank(), radius, opts.vertex_cap)?,
            PresentationKind::Dehn => dehn_ball(p, radius, opts.vertex_cap)?,
            PresentationKind::Generic => {
                if radius > opts.generic_radius_cap {
                    return Err(Error::RadiusCapExceeded { radius, cap: opts.generic_radius_cap });
                }
                let margin = opts.enumeration_margin.unwrap_or(p.max_relator_len());
                generic_ball(p, radius, radius + margin, opts.vertex_cap)?
            }
        };
        let lengths = words.iter().map(|w| w.len() as u32).collect();
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        Ok(CayleyBall {
            presentation: p.clone(),
            radius,
            words,
            lengths,
            index,
            adjacency,
            all_pairs: OnceLock::new(),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.presentation.kind() == PresentationKind::Free
    }

    pub fn word(&self, v: usize) -> &Word {
        &self.words[v]
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Word length of vertex `v`, its distance from the identity.
    pub fn length(&self, v: usize) -> u32 {
        self.lengths[v]
    }

    /// The vertex `v·l`, if it lies in the ball.
    pub fn step(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.adjacency[v * 2 * self.presentation.rank() + l.code()];
        (t != NONE).then_some(t as usize)
    }

    /// Edges `(v, v·g)` for every positive generator `g`, as `(v, w, g)`.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let k = self.presentation.rank();
        let mut out = Vec::new();
        for v in 0..self.len() {
            for g in 0..k {
                if let Some(w) = self.step(v, Letter::new(g, false)) {
                    out.push((v, w, g));
                }
            }
        }
        out
    }

    /// Vertex id of the group element represented by `w`.
    pub fn locate(&self, w: &Word) -> Option<usize> {
        if let Some(&i) = self.index.get(w) {
            return Some(i as usize);
        }
        if self.is_free() {
            return None;
        }
        let mut v = 0;
        for &l in w.letters() {
            match self.step(v, l) {
                Some(next) => v = next,
                None => return self.locate_by_word_problem(w),
            }
        }
        Some(v)
    }

    fn locate_by_word_problem(&self, w: &Word) -> Option<usize> {
        if self.presentation.kind() != PresentationKind::Dehn {
            return None;
        }
        let w = self.presentation.dehn_reduce(w.clone());
        if w.len() > self.radius * 2 + self.presentation.max_relator_len() {
            return None;
        }
        let inv = w.inverse();
        (0..self.len()).find(|&y| self.presentation.dehn_reduce(inv.mul(&self.words[y])).is_empty())
    }

    pub fn locate_str(&self, text: &str) -> Result<usize> {
        let w = self.presentation.parse_word(text)?;
        self.locate(&w).ok_or_else(|| Error::NotInBall(text.to_string()))
    }

    /// Left translation `v ↦ g·v`, when the image lies in the ball.
    pub fn translate(&self, g: &Word, v: usize) -> Option<usize> {
        self.locate(&g.mul(&self.words[v]))
    }

    pub fn show(&self, v: usize) -> String {
        self.presentation.show(&self.words[v])
    }

    fn all_pairs(&self) -> &[u16] {
        self.all_pairs.get_or_init(|| {
            let n = self.len();
            let rows: Vec<Vec<u16>> = (0..n)
                .into_par_iter()
                .map(|s| bfs(self, &[s]).into_iter().map(|d| d.min(u16::MAX as u32) as u16).collect())
                .collect();
            rows.concat()
        })
    }

    /// Gromov product `(x|y)_z` of three vertices.
    pub fn gromov_product_ids(&self, x: usize, y: usize, z: usize) -> Ratio<i64> {
        gromov_product(self, x, y, z)
    }

    pub fn gromov_product(&self, x: &Word, y: &Word, z: &Word) -> Result<Ratio<i64>> {
        let find = |w: &Word| self.locate(w).ok_or_else(|| Error::NotInBall(self.presentation.show(w)));
        Ok(gromov_product(self, find(x)?, find(y)?, find(z)?))
    }
}

impl MetricGraph for CayleyBall {
    fn vertex_count(&self) -> usize {
        self.words.len()
    }

    fn for_each_neighbor(&self, v: usize, f: &mut dyn FnMut(usize)) {
        let width = 2 * self.presentation.rank();
        for &t in &self.adjacency[v * width..(v + 1) * width] {
            if t != NONE {
                f(t as usize);
            }
        }
    }

    fn vertex_label(&self, v: usize) -> String {
        self.show(v)
    }

    fn has_fast_distance(&self) -> bool {
        self.is_free() || self.len() <= ALL_PAIRS_LIMIT
    }

    fn distance(&self, u: usize, v: usize) -> u32 {
        if self.is_free() {
            let lcp = self.words[u].common_prefix_len(&self.words[v]) as u32;
            return self.lengths[u] + self.lengths[v] - 2 * lcp;
        }
        if self.len() <= ALL_PAIRS_LIMIT {
            return self.all_pairs()[u * self.len() + v] as u32;
        }
        bfs(self, &[u])[v]
    }
}

fn grow(words: &[Word], adjacency: &mut Vec<u32>, width: usize, cap: usize) -> Result<()> {
    if words.len() > cap {
        return Err(Error::VertexCapExceeded { cap });
    }
    adjacency.resize(words.len() * width, NONE);
    Ok(())
}

fn free_ball(rank: usize, radius: usize, cap: usize) -> Result<(Vec<Word>, Vec<u32>)> {
    let width = 2 * rank;
    let mut words = vec![Word::identity()];
    let mut adjacency = vec![NONE; width];
    let mut level = 0..1;
    for _ in 0..radius {
        let start = words.len();
        for v in level.clone() {
            for code in 0..width {
                let l = Letter::from_code(code);
                if words[v].last() == Some(l.inverse()) {
                    continue;
                }
                let id = words.len();
                let mut letters = words[v].letters().to_vec();
                letters.push(l);
                words.push(Word::from_reduced(letters));
                grow(&words, &mut adjacency, width, cap)?;
                adjacency[v * width + code] = id as u32;
                adjacency[id * width + l.inverse().code()] = v as u32;
            }
        }
        level = start..words.len();
    }
    Ok((words, adjacency))
}

/// Breadth-first search with Dehn's algorithm as the equality test.
/// Candidates are bucketed by exponent sums when every relator has zero
/// exponent sums (the abelianization is then an invariant).
fn dehn_ball(p: &Presentation, radius: usize, cap: usize) -> Result<(Vec<Word>, Vec<u32>)> {
    let rank = p.rank();
    let width = 2 * rank;
    let balanced = p.relators().iter().all(|r| r.exponent_sums(rank).iter().all(|&s| s == 0));
    let key = |w: &Word| if balanced { w.exponent_sums(rank) } else { Vec::new() };
    let mut words = vec![Word::identity()];
    let mut adjacency = vec![NONE; width];
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    buckets.entry(key(&words[0])).or_default().push(0);
    let mut level = 0..1;
    for n in 0..=radius {
        let start = words.len();
        for v in level.clone() {
            for code in 0..width {
                if adjacency[v * width + code] != NONE {
                    continue;
                }
                let l = Letter::from_code(code);
                let candidate = words[v].push(l);
                let inv = candidate.inverse();
                let bucket = buckets.get(&key(&candidate));
                let found = bucket.and_then(|b| {
                    b.iter().copied().find(|&y| {
                        words[y].len() + 1 >= n && p.dehn_reduce(inv.mul(&words[y])).is_empty()
                    })
                });
                let target = match found {
                    Some(y) => y,
                    None if n < radius => {
                        let id = words.len();
                        buckets.entry(key(&candidate)).or_default().push(id);
                        words.push(candidate);
                        grow(&words, &mut adjacency, width, cap)?;
                        id
                    }
                    None => continue,
                };
                adjacency[v * width + code] = target as u32;
                adjacency[target * width + l.inverse().code()] = v as u32;
            }
        }
        level = start..words.len();
    }
    Ok((words, adjacency))
}

/// Bounded coset enumeration for the trivial subgroup.
///
/// Cosets are defined breadth-first up to `depth` and every relator is
/// scanned and filled at every coset, with coincidences merged. All
/// identifications are consequences of the relators, so distinct group
/// elements are never merged; elements equal only through diagrams that
/// leave the enumerated region can remain separate.
struct Enumerator {
    t: FoldingTable,
    depth: Vec<u32>,
    max_depth: u32,
    cap: usize,
    changes: u64,
}

impl Enumerator {
    fn define(&mut self, c: u32, x: usize) -> Result<Option<u32>> {
        if self.depth[c as usize] >= self.max_depth {
            return Ok(None);
        }
        if self.t.len() >= self.cap {
            return Err(Error::VertexCapExceeded { cap: self.cap });
        }
        let d = self.t.add_state();
        self.depth.push(self.depth[c as usize] + 1);
        self.t.link(c, x, d);
        self.changes += 1;
        Ok(Some(d))
    }

    fn recompute_depths(&mut self) {
        let root = self.t.find(0);
        self.depth.iter_mut().for_each(|d| *d = u32::MAX);
        self.depth[root as usize] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            for x in 0..self.t.width {
                let t = self.t.get(c, x);
                if t != NONE && self.depth[t as usize] == u32::MAX {
                    self.depth[t as usize] = self.depth[c as usize] + 1;
                    queue.push_back(t);
                }
            }
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.changes += self.t.merge(a, b) as u64;
    }

    fn scan_and_fill(&mut self, c: u32, r: &[usize]) -> Result<()> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = r.len();
        loop {
            while i < j {
                let t = self.t.get(f, r[i]);
                if t == NONE {
                    break;
                }
                f = t;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let t = self.t.get(b, r[j - 1] ^ 1);
                if t == NONE {
                    break;
                }
                b = t;
                j -= 1;
            }
            if i == j {
                self.coincidence(f, b);
                return Ok(());
            }
            if i + 1 == j {
                self.t.link(f, r[i], b);
                self.changes += 1;
                return Ok(());
            }
            if self.define(f, r[i])?.is_none() {
                return Ok(());
            }
        }
    }
}

fn generic_ball(p: &Presentation, radius: usize, depth: usize, cap: usize) -> Result<(Vec<Word>, Vec<u32>)> {
    let width = 2 * p.rank();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.code()).collect())
        .collect();
    let mut table = FoldingTable::new(width);
    table.add_state();
    let mut e = Enumerator {
        t: table,
        depth: vec![0],
        max_depth: depth as u32,
        cap: cap.saturating_mul(8),
        changes: 0,
    };
    // Recorded depths are only upper bounds once coincidences shorten paths,
    // so passes repeat with depths recomputed until nothing changes.
    loop {
        let before = e.changes;
        let mut c = 0usize;
        while c < e.t.len() {
            let cc = c as u32;
            if e.t.is_live(cc) && e.depth[c] < e.max_depth {
                for r in &relators {
                    e.scan_and_fill(cc, r)?;
                    if !e.t.is_live(cc) {
                        break;
                    }
                }
                for x in 0..width {
                    if !e.t.is_live(cc) {
                        break;
                    }
                    if e.t.get(cc, x) == NONE {
                        e.define(cc, x)?;
                    }
                }
            }
            c += 1;
        }
        e.recompute_depths();
        if e.changes == before {
            break;
        }
    }

    let root = e.t.find(0);
    let mut ids: HashMap<u32, u32> = HashMap::from([(root, 0)]);
    let mut cosets = vec![root];
    let mut words = vec![Word::identity()];
    let mut adjacency = vec![NONE; width];
    let mut level = 0..1;
    for n in 0..=radius {
        let start = words.len();
        for v in level.clone() {
            for x in 0..width {
                let t = e.t.get(cosets[v], x);
                if t == NONE {
                    continue;
                }
                let id = match ids.get(&t) {
                    Some(&id) => id as usize,
                    None if n < radius => {
                        let id = words.len();
                        ids.insert(t, id as u32);
                        cosets.push(t);
                        words.push(words[v].push(Letter::from_code(x)));
                        grow(&words, &mut adjacency, width, cap)?;
                        id
                    }
                    None => continue,
                };
                adjacency[v * width + x] = id as u32;
                adjacency[id * width + (x ^ 1)] = v as u32;
            }
        }
        level = start..words.len();
    }
    Ok((words, adjacency))
}

pub fn gromov_product<G: MetricGraph + ?Sized>(g: &G, x: usize, y: usize, z: usize) -> Ratio<i64> {
    let s = g.distance(x, z) as i64 + g.distance(y, z) as i64 - g.distance(x, y) as i64;
    Ratio::new(s, 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    #[serde(with = "crate::exact")]
    pub delta: Ratio<i64>,
    pub exhaustive: bool,
    pub quadruples: u64,
    pub seed: u64,
    /// A quadruple attaining the maximum, when the maximum is positive.
    pub witness: Option<[usize; 4]>,
}

/// Quadruple count at or below which [`estimate_delta`] scans exhaustively.
pub const EXHAUSTIVE_QUADRUPLE_LIMIT: u64 = 60_000_000;

/// Doubled four-point defect: the gap between the two largest pair sums.
fn doubled_defect(d: impl Fn(usize, usize) -> u32, q: [usize; 4]) -> u32 {
    let [x, y, z, w] = q;
    let mut s = [d(x, y) + d(z, w), d(x, z) + d(y, w), d(x, w) + d(y, z)];
    s.sort_unstable();
    s[2] - s[1]
}

/// Four-point δ of a finite graph: the largest half-gap between the two
/// largest of the three pair sums. Exhaustive below
/// [`EXHAUSTIVE_QUADRUPLE_LIMIT`] quadruples, otherwise `samples` seeded draws.
pub fn estimate_delta<G: MetricGraph + ?Sized>(g: &G, samples: u64, seed: u64) -> DeltaEstimate {
    let n = g.vertex_count();
    let none = DeltaEstimate { delta: Ratio::from_integer(0), exhaustive: true, quadruples: 0, seed, witness: None };
    if n < 4 {
        return none;
    }
    let total = {
        let n = n as u128;
        n * (n - 1) * (n - 2) * (n - 3) / 24
    };
    if total <= EXHAUSTIVE_QUADRUPLE_LIMIT as u128 {
        let matrix: Vec<Vec<u32>> = (0..n).into_par_iter().map(|s| bfs(g, &[s])).collect();
        let d = |a: usize, b: usize| matrix[a][b];
        let best = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut best = (0u32, [0usize; 4]);
                for y in x + 1..n {
                    for z in y + 1..n {
                        for w in z + 1..n {
                            let v = doubled_defect(d, [x, y, z, w]);
                            if v > best.0 {
                                best = (v, [x, y, z, w]);
                            }
                        }
                    }
                }
                best
            })
            .reduce(|| (0, [0; 4]), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1 && b.0 > 0) { b } else { a });
        return DeltaEstimate {
            delta: Ratio::new(best.0 as i64, 2),
            exhaustive: true,
            quadruples: total as u64,
            seed,
            witness: (best.0 > 0).then_some(best.1),
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (0u32, [0usize; 4]);
    for _ in 0..samples {
        let q = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
        let v = doubled_defect(|a, b| g.distance(a, b), q);
        if v > best.0 {
            best = (v, q);
        }
    }
    DeltaEstimate {
        delta: Ratio::new(best.0 as i64, 2),
        exhaustive: false,
        quadruples: samples,
        seed,
        witness: (best.0 > 0).then_some(best.1),
    }
}

/// A graph with each distinguished subset joined to its own cone vertex by
/// half-length edges. Weights are doubled: base edges 2, cone edges 1.
pub struct ElectricBall<'a, G: MetricGraph + ?Sized> {
    base: &'a G,
    subsets: Vec<Vec<usize>>,
    /// Subsets containing each base vertex.
    membership: Vec<Vec<u32>>,
}

pub fn cone_off<'a, G: MetricGraph + ?Sized>(base: &'a G, subsets: Vec<Vec<usize>>) -> Result<ElectricBall<'a, G>> {
    let n = base.vertex_count();
    let mut membership = vec![Vec::new(); n];
    for (i, s) in subsets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptySubset(format!("coned subset {i}")));
        }
        for &v in s {
            if v >= n {
                return Err(Error::NotInBall(format!("vertex id {v}")));
            }
            membership[v].push(i as u32);
        }
    }
    Ok(ElectricBall { base, subsets, membership })
}

impl<G: MetricGraph + ?Sized> ElectricBall<'_, G> {
    pub fn cone_count(&self) -> usize {
        self.subsets.len()
    }

    /// Doubled electric distances from base vertex `src` to every base vertex.
    pub fn doubled_distances_from(&self, src: usize) -> Vec<u64> {
        let n = self.base.vertex_count();
        let mut dist = vec![u64::MAX; n + self.subsets.len()];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0u64, src)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            let mut relax = |w: usize, weight: u64, heap: &mut BinaryHeap<Reverse<(u64, usize)>>| {
                if d + weight < dist[w] {
                    dist[w] = d + weight;
                    heap.push(Reverse((d + weight, w)));
                }
            };
            if v < n {
                let mut next = Vec::new();
                self.base.for_each_neighbor(v, &mut |w| next.push(w));
                for w in next {
                    relax(w, 2, &mut heap);
                }
                for &c in &self.membership[v] {
                    relax(n + c as usize, 1, &mut heap);
                }
            } else {
                for &w in &self.subsets[v - n] {
                    relax(w, 1, &mut heap);
                }
            }
        }
        dist.truncate(n);
        dist
    }

    pub fn distance(&self, x: usize, y: usize) -> Ratio<i64> {
        Ratio::new(self.doubled_distances_from(x)[y] as i64, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_ball_sizes() {
        let p = Presentation::free(2);
        assert_eq!(CayleyBall::generate(&p, 0).unwrap().len(), 1);
        assert_eq!(CayleyBall::generate(&p, 1).unwrap().len(), 5);
        assert_eq!(CayleyBall::generate(&p, 2).unwrap().len(), 17);
    }

    #[test]
    fn lattice_ball_sizes() {
        let p = Presentation::z2();
        for r in 0..=7usize {
            let ball = CayleyBall::generate(&p, r).unwrap();
            assert_eq!(ball.len(), 2 * r * r + 2 * r + 1, "radius {r}");
        }
    }

    #[test]
    fn finite_group_by_enumeration() {
        let s3 = Presentation::parse("a b\na a\nb b\na b a b a b").unwrap();
        let ball = CayleyBall::generate(&s3, 5).unwrap();
        assert_eq!(ball.len(), 6);
    }

    #[test]
    fn ids_follow_shortlex() {
        let ball = CayleyBall::generate(&Presentation::z2(), 3).unwrap();
        for v in 1..ball.len() {
            assert_eq!(ball.word(v - 1).shortlex_cmp(ball.word(v)), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let opts = BallOptions { vertex_cap: 100, ..BallOptions::default() };
        let err = CayleyBall::generate_with(&Presentation::free(2), 5, &opts).unwrap_err();
        assert!(matches!(err, Error::VertexCapExceeded { cap: 100 }));
    }

    #[test]
    fn surface_ball_matches_growth() {
        let p = Presentation::surface_genus2();
        let ball = CayleyBall::generate(&p, 2).unwrap();
        // 1 + 8 + 8·7 spheres: no relation shorter than 8 letters.
        assert_eq!(ball.len(), 65);
    }

    #[test]
    fn gromov_products_in_tree() {
        let ball = CayleyBall::generate(&Presentation::free(2), 4).unwrap();
        let p = ball.presentation();
        let w = |s: &str| p.parse_word(s).unwrap();
        assert_eq!(ball.gromov_product(&w("a"), &w("b"), &w("1")).unwrap(), Ratio::from_integer(0));
        assert_eq!(ball.gromov_product(&w("a a"), &w("a a a"), &w("1")).unwrap(), Ratio::from_integer(2));
        assert!(ball.gromov_product(&w("a^5"), &w("b"), &w("1")).is_err());
    }

    #[test]
    fn electric_distances() {
        let ball = CayleyBall::generate(&Presentation::free(2), 6).unwrap();
        let p = ball.presentation().clone();
        let a = p.parse_word("a").unwrap();
        let mut cosets: HashMap<Word, Vec<usize>> = HashMap::new();
        for v in 0..ball.len() {
            let mut w = ball.word(v).clone();
            while matches!(w.last(), Some(l) if l.generator() == 0) {
                let l = w.last().unwrap();
                w = w.mul(&if l.is_inverse() { a.clone() } else { a.inverse() });
            }
            cosets.entry(w).or_default().push(v);
        }
        let subsets: Vec<Vec<usize>> = cosets.into_values().collect();
        let e = cone_off(&ball, subsets).unwrap();
        let id = |s: &str| ball.locate_str(s).unwrap();
        assert_eq!(e.distance(id("1"), id("a^5")), Ratio::from_integer(1));
        assert_eq!(e.distance(id("b a^5"), id("b a^-5")), Ratio::from_integer(1));
        assert_eq!(e.distance(id("a^5"), id("b a^5")), Ratio::from_integer(3));
        assert!(cone_off(&ball, vec![vec![]]).is_err());
    }
}

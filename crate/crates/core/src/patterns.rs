//! Pattern spaces: a metric graph with an indexed family of vertex sets.
//!
//! For subgroup patterns the members are finite joins: the coset trace
//! together with every geodesic between coset elements that are at least
//! `far_pair_threshold` apart, standing in for the union of bi-infinite
//! geodesics between limit points. Cosets without such a pair keep their
//! bare trace in the ball and are flagged degenerate.

use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::{gromov_product, CayleyBall};
use crate::error::{Error, Result};
use crate::metric::{ball_around, bfs, diameter, distances_to, geodesic_vertices, FiniteGraph, MetricGraph, UNREACHABLE};
use crate::presentation::Presentation;
use crate::stallings::{partition_cosets, CosetId, CosetPartition, SubgroupPredicate};
use crate::word::Word;

const FAR: u16 = u16::MAX;

pub struct PatternSpace<G: MetricGraph> {
    graph: Arc<G>,
    family: Vec<Vec<usize>>,
    labels: Vec<String>,
    degenerate: Vec<bool>,
    /// Members containing each vertex.
    vertex_members: Vec<Vec<u32>>,
    /// Distance from every vertex to each member, computed on first use.
    tables: Vec<OnceLock<Vec<u16>>>,
}

impl<G: MetricGraph> Clone for PatternSpace<G> {
    fn clone(&self) -> Self {
        PatternSpace::new(self.graph.clone(), self.family.clone(), self.labels.clone())
            .expect("already validated")
            .with_degenerate(self.degenerate.clone())
    }
}

impl<G: MetricGraph> PatternSpace<G> {
    pub fn new(graph: Arc<G>, family: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self> {
        let n = graph.vertex_count();
        if labels.len() != family.len() {
            return Err(Error::Precondition("one label per family member".into()));
        }
        let mut vertex_members = vec![Vec::new(); n];
        let mut family = family;
        for (i, member) in family.iter_mut().enumerate() {
            if member.is_empty() {
                return Err(Error::EmptySubset(format!("family member {i}")));
            }
            member.sort_unstable();
            member.dedup();
            for &v in member.iter() {
                if v >= n {
                    return Err(Error::NotInBall(format!("vertex id {v}")));
                }
                vertex_members[v].push(i as u32);
            }
        }
        let m = family.len();
        Ok(PatternSpace {
            graph,
            degenerate: vec![false; m],
            family,
            labels,
            vertex_members,
            tables: (0..m).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn with_degenerate(mut self, flags: Vec<bool>) -> Self {
        assert_eq!(flags.len(), self.family.len());
        self.degenerate = flags;
        self
    }

    pub fn graph(&self) -> &G {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<G> {
        self.graph.clone()
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn member(&self, i: usize) -> &[usize] {
        &self.family[i]
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_degenerate(&self, i: usize) -> bool {
        self.degenerate[i]
    }

    pub fn members_at(&self, v: usize) -> &[u32] {
        &self.vertex_members[v]
    }

    /// Distance from every vertex to member `i`.
    pub fn member_distances(&self, i: usize) -> &[u16] {
        self.tables[i].get_or_init(|| {
            bfs(&*self.graph, &self.family[i])
                .into_iter()
                .map(|d| if d == UNREACHABLE { FAR } else { d.min(FAR as u32 - 1) as u16 })
                .collect()
        })
    }

    pub fn distance_to_member(&self, v: usize, i: usize) -> u32 {
        match self.member_distances(i)[v] {
            FAR => UNREACHABLE,
            d => d as u32,
        }
    }

    /// `d(J_i, J_j)`: the least distance between the two sets.
    pub fn set_distance(&self, i: usize, j: usize) -> u32 {
        let (small, big) = if self.family[i].len() <= self.family[j].len() { (i, j) } else { (j, i) };
        let table = self.member_distances(big);
        self.family[small].iter().map(|&v| table[v] as u32).min().unwrap_or(UNREACHABLE)
    }

    /// Members meeting the closed `k`-neighbourhood of `v`, sorted.
    pub fn members_near(&self, v: usize, k: u32) -> Vec<usize> {
        let mut out: Vec<usize> = ball_around(&*self.graph, v, k)
            .into_iter()
            .flat_map(|(x, _)| self.vertex_members[x].iter().map(|&i| i as usize))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Vertices within distance `k` of member `i`, sorted.
    pub fn neighborhood(&self, i: usize, k: u32) -> Vec<usize> {
        let table = self.member_distances(i);
        (0..table.len()).filter(|&v| (table[v] as u32) <= k).collect()
    }

    /// The sub-pattern on the given member indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let family = indices.iter().map(|&i| self.family[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let flags = indices.iter().map(|&i| self.degenerate[i]).collect();
        Ok(PatternSpace::new(self.graph.clone(), family, labels)?.with_degenerate(flags))
    }
}

/// Axis-parallel lines at coordinates divisible by `spacing` in the grid
/// `[-h, h]²`, labelled `x=c` and `y=c`.
pub fn grid_lines(half_width: i64, spacing: i64) -> Result<PatternSpace<FiniteGraph>> {
    if spacing <= 0 || half_width < 0 {
        return Err(Error::Precondition("grid lines need a positive spacing".into()));
    }
    let coords: Vec<i64> = (-half_width..=half_width).filter(|c| c.rem_euclid(spacing) == 0).collect();
    let mut family = Vec::new();
    let mut labels = Vec::new();
    for &c in &coords {
        family.push((-half_width..=half_width).map(|y| FiniteGraph::grid_vertex(half_width, c, y)).collect());
        labels.push(format!("x={c}"));
    }
    for &c in &coords {
        family.push((-half_width..=half_width).map(|x| FiniteGraph::grid_vertex(half_width, x, c)).collect());
        labels.push(format!("y={c}"));
    }
    PatternSpace::new(Arc::new(FiniteGraph::grid(half_width)), family, labels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinSet {
    pub coset: CosetId,
    pub vertices: Vec<usize>,
    pub far_pair_threshold: usize,
    /// No two coset elements in the ball are `far_pair_threshold` apart;
    /// `vertices` is then the coset trace.
    pub degenerate: bool,
    /// Least Gromov product `(p|q)_1` over the far pairs used.
    #[serde(with = "crate::exact::option")]
    pub min_basepoint_product: Option<Ratio<i64>>,
}

/// Default far-pair threshold for a ball of radius `r`: `⌊2r/3⌋`, at least 1.
pub fn default_far_pair_threshold(radius: usize) -> usize {
    (2 * radius / 3).max(1)
}

/// Builds the join from the ball vertices of one coset.
pub fn join_from_members(ball: &CayleyBall, coset: CosetId, members: &[usize], threshold: usize) -> JoinSet {
    let mut mark = vec![false; ball.len()];
    members.iter().for_each(|&v| mark[v] = true);
    let mut best: Option<Ratio<i64>> = None;
    let mut any = false;
    let parents = ball.is_free().then(|| parent_table(ball));
    for (i, &p) in members.iter().enumerate() {
        for &q in &members[i + 1..] {
            let d = ball.distance(p, q) as usize;
            if d < threshold {
                continue;
            }
            any = true;
            let product = gromov_product(ball, p, q, 0);
            best = Some(best.map_or(product, |b| b.min(product)));
            match &parents {
                Some(parent) => mark_tree_path(ball, parent, p, q, &mut mark),
                None => geodesic_vertices(ball, p, q).into_iter().for_each(|v| mark[v] = true),
            }
        }
    }
    let vertices: Vec<usize> = (0..ball.len()).filter(|&v| mark[v]).collect();
    JoinSet { coset, vertices, far_pair_threshold: threshold, degenerate: !any, min_basepoint_product: best }
}

fn parent_table(ball: &CayleyBall) -> Vec<usize> {
    (0..ball.len())
        .map(|v| match ball.word(v).last() {
            Some(l) => ball.step(v, l.inverse()).expect("balls are prefix closed"),
            None => 0,
        })
        .collect()
}

fn mark_tree_path(ball: &CayleyBall, parent: &[usize], p: usize, q: usize, mark: &mut [bool]) {
    let lcp = ball.word(p).common_prefix_len(ball.word(q)) as u32;
    for mut v in [p, q] {
        mark[v] = true;
        while ball.length(v) > lcp {
            v = parent[v];
            mark[v] = true;
        }
    }
}

pub fn coset_join(ball: &CayleyBall, s: &SubgroupPredicate, c: &CosetId, threshold: usize) -> Result<JoinSet> {
    let key = s.coset_key(&c.representative);
    let members: Vec<usize> = (0..ball.len()).filter(|&v| s.coset_key(ball.word(v)) == key).collect();
    if members.is_empty() {
        return Err(Error::CosetOutsideBall(ball.presentation().show(&c.representative)));
    }
    Ok(join_from_members(ball, c.clone(), &members, threshold))
}

/// Joins of every coset meeting the ball, in coset order.
pub fn coset_joins(ball: &CayleyBall, s: &SubgroupPredicate, threshold: usize) -> Result<(CosetPartition, Vec<JoinSet>)> {
    let partition = partition_cosets(s, ball)?;
    let joins = partition
        .cosets
        .par_iter()
        .zip(&partition.members)
        .map(|(c, m)| join_from_members(ball, c.clone(), m, threshold))
        .collect();
    Ok((partition, joins))
}

/// The pattern of coset joins in a free-group ball.
pub struct CosetPattern {
    pub space: PatternSpace<CayleyBall>,
    pub cosets: Vec<CosetId>,
    pub joins: Vec<JoinSet>,
}

impl CosetPattern {
    pub fn build(ball: Arc<CayleyBall>, s: &SubgroupPredicate, threshold: usize) -> Result<Self> {
        let (partition, joins) = coset_joins(&ball, s, threshold)?;
        let labels = partition.cosets.iter().map(|c| ball.presentation().show(&c.representative)).collect();
        let family = joins.iter().map(|j| j.vertices.clone()).collect();
        let flags = joins.iter().map(|j| j.degenerate).collect();
        let space = PatternSpace::new(ball, family, labels)?.with_degenerate(flags);
        Ok(CosetPattern { space, cosets: partition.cosets, joins })
    }

    /// Keeps the members whose index satisfies `keep`, preserving order.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Result<Self> {
        let idx: Vec<usize> = (0..self.cosets.len()).filter(|&i| keep(i)).collect();
        Ok(CosetPattern {
            space: self.space.select(&idx)?,
            cosets: idx.iter().map(|&i| self.cosets[i].clone()).collect(),
            joins: idx.iter().map(|&i| self.joins[i].clone()).collect(),
        })
    }
}

/// Left-translates vertex sets of `src` by `g` into `target`.
pub fn translate_family(src: &CayleyBall, g: &Word, target: &CayleyBall, family: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    family
        .iter()
        .map(|set| {
            set.iter()
                .map(|&v| {
                    let w = g.mul(src.word(v));
                    target.locate(&w).ok_or_else(|| Error::NotInBall(target.presentation().show(&w)))
                })
                .collect()
        })
        .collect()
}

/// Every vertex of `j` at minimal distance from `x` (all ties).
pub fn nearest_point_projection<G: MetricGraph + ?Sized>(g: &G, x: usize, j: &[usize]) -> Vec<usize> {
    let d = distances_to(g, x, j);
    let min = d.iter().copied().min().unwrap_or(UNREACHABLE);
    let mut out: Vec<usize> = j.iter().zip(&d).filter(|(_, &dv)| dv == min).map(|(&v, _)| v).collect();
    out.sort_unstable();
    out
}

/// Diameter of the projection of all of `ji` onto `jj`.
pub fn projection_diameter<G: MetricGraph + ?Sized>(g: &G, ji: &[usize], jj: &[usize]) -> u32 {
    let mut image: Vec<usize> = ji.iter().flat_map(|&x| nearest_point_projection(g, x, jj)).collect();
    image.sort_unstable();
    image.dedup();
    diameter(g, &image)
}

/// Largest projection diameter over ordered pairs of distinct sets, with a
/// pair attaining it.
pub fn max_projection_diameter<G: MetricGraph + ?Sized>(g: &G, sets: &[Vec<usize>]) -> (u32, Option<(usize, usize)>) {
    let n = sets.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (0u32, None);
            for j in 0..n {
                if i != j {
                    let d = projection_diameter(g, &sets[i], &sets[j]);
                    if best.1.is_none() || d > best.0 {
                        best = (d, Some((i, j)));
                    }
                }
            }
            best
        })
        .reduce(|| (0, None), |a, b| if b.1.is_some() && (a.1.is_none() || b.0 > a.0) { b } else { a })
}

/// `min d(a, b)` over `a ∈ A`, `b ∈ B`.
pub fn set_distance<G: MetricGraph + ?Sized>(g: &G, a: &[usize], b: &[usize]) -> u32 {
    if g.has_fast_distance() && a.len().saturating_mul(b.len()) <= 1 << 16 {
        return a.iter().flat_map(|&x| distances_to(g, x, b)).min().unwrap_or(UNREACHABLE);
    }
    let from_a = bfs(g, a);
    b.iter().map(|&v| from_a[v]).min().unwrap_or(UNREACHABLE)
}

#[derive(Clone, Debug, Default)]
pub struct ProfileOptions {
    /// Far-pair threshold; defaults to [`default_far_pair_threshold`] per radius.
    pub far_pair_threshold: Option<usize>,
    /// A join spans an angle of at least `2^-t` at the basepoint when two of
    /// its far pairs have `(p|q)_1 ≤ t`. Defaults to `N`.
    pub angle_exponent: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub radius: usize,
    pub cosets: usize,
    pub count: usize,
}

/// For each radius, the number of cosets meeting the ball whose join is
/// nondegenerate, meets `B_N(1)`, and spans a visual angle of at least
/// `2^-t` seen from the basepoint.
pub fn discreteness_profile(s: &SubgroupPredicate, n: u32, radii: &[usize], opts: &ProfileOptions) -> Result<Vec<ProfileEntry>> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let t = opts.angle_exponent.unwrap_or(n);
    let p = Presentation::free(s.rank());
    radii
        .iter()
        .map(|&r| {
            let ball = CayleyBall::generate(&p, r)?;
            let threshold = opts.far_pair_threshold.unwrap_or_else(|| default_far_pair_threshold(r));
            let (partition, joins) = coset_joins(&ball, s, threshold)?;
            let count = joins
                .iter()
                .filter(|j| {
                    !j.degenerate
                        && j.vertices.iter().any(|&v| ball.length(v) <= n)
                        && j.min_basepoint_product.is_some_and(|m| m <= Ratio::from_integer(t as i64))
                })
                .count();
            Ok(ProfileEntry { radius: r, cosets: partition.cosets.len(), count })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stallings::CoreGraph;

    fn setup(r: usize) -> (Arc<CayleyBall>, SubgroupPredicate) {
        let p = Presentation::free(2);
        let ball = Arc::new(CayleyBall::generate(&p, r).unwrap());
        let h = CoreGraph::fold(2, &[p.parse_word("a").unwrap()]).unwrap();
        (ball, SubgroupPredicate::Core(h))
    }

    fn ids(ball: &CayleyBall, words: &[&str]) -> Vec<usize> {
        let mut v: Vec<usize> = words.iter().map(|w| ball.locate_str(w).unwrap()).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn axis_join() {
        let (ball, s) = setup(4);
        let p = ball.presentation();
        let c = CosetId { representative: Word::identity() };
        let j = coset_join(&ball, &s, &c, default_far_pair_threshold(4)).unwrap();
        assert!(!j.degenerate);
        let axis: Vec<String> = (-4..=4).map(|k| format!("a^{k}")).collect();
        assert_eq!(j.vertices, ids(&ball, &axis.iter().map(String::as_str).collect::<Vec<_>>()));
        let cb = CosetId { representative: p.parse_word("b").unwrap() };
        let jb = coset_join(&ball, &s, &cb, 2).unwrap();
        let axis: Vec<String> = (-3..=3).map(|k| format!("b a^{k}")).collect();
        assert_eq!(jb.vertices, ids(&ball, &axis.iter().map(String::as_str).collect::<Vec<_>>()));
    }

    #[test]
    fn coset_outside_ball() {
        let (ball, s) = setup(2);
        let c = CosetId { representative: ball.presentation().parse_word("b^3").unwrap() };
        assert!(matches!(coset_join(&ball, &s, &c, 1), Err(Error::CosetOutsideBall(_))));
    }

    #[test]
    fn projections_onto_axis() {
        let (ball, s) = setup(4);
        let axis = coset_join(&ball, &s, &CosetId { representative: Word::identity() }, 2).unwrap().vertices;
        let one = ball.locate_str("1").unwrap();
        assert_eq!(nearest_point_projection(&*ball, ball.locate_str("b").unwrap(), &axis), vec![one]);
        assert_eq!(nearest_point_projection(&*ball, ball.locate_str("b a^2").unwrap(), &axis), vec![one]);
        let x = ball.locate_str("a^3").unwrap();
        assert_eq!(nearest_point_projection(&*ball, x, &axis), vec![x]);
    }

    #[test]
    fn set_distances_between_axes() {
        let (ball, s) = setup(5);
        let p = ball.presentation();
        let join = |w: &str| {
            coset_join(&ball, &s, &CosetId { representative: p.parse_word(w).unwrap() }, 2).unwrap().vertices
        };
        assert_eq!(set_distance(&*ball, &join("1"), &join("b")), 1);
        assert_eq!(set_distance(&*ball, &join("1"), &join("b^2")), 2);
        assert_eq!(set_distance(&*ball, &join("1"), &join("1")), 0);
        assert_eq!(projection_diameter(&*ball, &join("b"), &join("1")), 0);
    }

    #[test]
    fn pattern_space_tables() {
        let (ball, s) = setup(4);
        let pat = CosetPattern::build(ball.clone(), &s, 2).unwrap();
        let one = pat.cosets.iter().position(|c| c.representative.is_empty()).unwrap();
        let b = ball.locate_str("b").unwrap();
        assert_eq!(pat.space.distance_to_member(b, one), 1);
        assert!(pat.space.members_near(0, 1).contains(&one));
    }
}

//! Minimal meeting balls, the barycentre map `q` induced by a pairing of
//! pattern families, its verification, and the four-condition axiom checker.

use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::envelope::{fit_qi, monotone_envelope};
use crate::error::{Error, Result};
use crate::metric::{bfs, diameter, edge_distances, MetricGraph, UNREACHABLE};
use crate::patterns::PatternSpace;

/// A bijection between the family indices of two pattern spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairingData", into = "PairingData")]
pub struct Pairing {
    map: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingData {
    pub map: Vec<usize>,
}

impl TryFrom<PairingData> for Pairing {
    type Error = Error;

    fn try_from(data: PairingData) -> Result<Self> {
        Pairing::new(data.map)
    }
}

impl From<Pairing> for PairingData {
    fn from(p: Pairing) -> Self {
        PairingData { map: p.map }
    }
}

impl Pairing {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &j in &map {
            if j >= map.len() || std::mem::replace(&mut seen[j], true) {
                return Err(Error::NotBijective(format!("index {j} is out of range or repeated")));
            }
        }
        Ok(Pairing { map })
    }

    pub fn identity(n: usize) -> Self {
        Pairing { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Pairing {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Pairing { map: inv }
    }

    /// Exchanges the images of `i` and `j`.
    pub fn swapped(&self, i: usize, j: usize) -> Pairing {
        let mut map = self.map.clone();
        map.swap(i, j);
        Pairing { map }
    }

    fn check<G1: MetricGraph, G2: MetricGraph>(&self, p1: &PatternSpace<G1>, p2: &PatternSpace<G2>) -> Result<()> {
        if self.map.len() != p1.len() || p1.len() != p2.len() {
            return Err(Error::NotBijective(format!(
                "pairing of size {} between families of sizes {} and {}",
                self.map.len(),
                p1.len(),
                p2.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetingBall {
    pub center: usize,
    pub radius: u32,
    /// Every vertex attaining the minimal radius, sorted.
    pub ties: Vec<usize>,
}

/// The vertex minimising `max_i d(v, J_i)` over the chosen members, lowest
/// id among ties.
pub fn minimal_meeting_ball<G: MetricGraph>(p: &PatternSpace<G>, indices: &[usize]) -> Result<MeetingBall> {
    let sets: Vec<&[usize]> = indices.iter().map(|&i| p.member(i)).collect();
    meeting_ball_of_sets(p.graph(), &sets)
}

/// Minimal meeting ball of arbitrary nonempty vertex sets. Grows all
/// neighbourhoods one layer at a time and stops at the first radius at
/// which some vertex lies in every one of them.
pub fn meeting_ball_of_sets<G: MetricGraph + ?Sized>(g: &G, sets: &[&[usize]]) -> Result<MeetingBall> {
    if sets.is_empty() {
        return Err(Error::EmptySubset("no family members selected".into()));
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySubset("selected family member is empty".into()));
    }
    let n = g.vertex_count();
    let need = sets.len() as u32;
    let mut count = vec![0u32; n];
    let mut seen: Vec<FixedBitSet> = Vec::with_capacity(sets.len());
    let mut frontiers: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
    let mut hits = Vec::new();
    for set in sets {
        let mut mark = FixedBitSet::with_capacity(n);
        let mut frontier = Vec::new();
        for &v in *set {
            if !mark.put(v) {
                frontier.push(v);
                count[v] += 1;
                if count[v] == need {
                    hits.push(v);
                }
            }
        }
        seen.push(mark);
        frontiers.push(frontier);
    }
    let mut radius = 0;
    while hits.is_empty() {
        if frontiers.iter().all(Vec::is_empty) {
            return Err(Error::Precondition("members lie in different components".into()));
        }
        radius += 1;
        for (mark, frontier) in seen.iter_mut().zip(frontiers.iter_mut()) {
            let mut next = Vec::new();
            for &v in frontier.iter() {
                g.for_each_neighbor(v, &mut |w| {
                    if !mark.put(w) {
                        next.push(w);
                        count[w] += 1;
                        if count[w] == need {
                            hits.push(w);
                        }
                    }
                });
            }
            *frontier = next;
        }
    }
    hits.sort_unstable();
    Ok(MeetingBall { center: hits[0], radius, ties: hits })
}

#[derive(Clone, Debug, Default)]
pub struct QOptions {
    /// Neighbourhood radius `K` around each source vertex.
    pub k: u32,
    /// Width `w₂` of the target pattern: every `N_K(g)` must meet more members.
    pub target_width: usize,
    /// Source vertices to map; defaults to those at least `K` from the window edge.
    pub domain: Option<Vec<usize>>,
    /// Tie-break rank for target vertices (lower wins); defaults to vertex id.
    pub priority: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QMap {
    pub k: u32,
    pub target_width: usize,
    /// `images[g]` is `q(g)` for `g` in the domain.
    pub images: Vec<Option<usize>>,
    /// Radius of the meeting ball chosen at each domain vertex.
    pub radii: Vec<Option<u32>>,
    /// Largest diameter of a tie set of centres: any tie-break moves `q(g)` at most this far.
    pub discrepancy: u32,
}

impl QMap {
    pub fn domain(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&v| self.images[v].is_some()).collect()
    }

    pub fn image_set(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.images.iter().flatten().copied().collect();
        set.into_iter().collect()
    }
}

/// For each `g` in the domain, maps the members meeting `N_K(g)` through the
/// pairing and takes the centre of their minimal meeting ball.
pub fn construct_q<G1: MetricGraph, G2: MetricGraph>(
    p1: &PatternSpace<G1>,
    p2: &PatternSpace<G2>,
    phi: &Pairing,
    opts: &QOptions,
) -> Result<QMap> {
    phi.check(p1, p2)?;
    let g2 = p2.graph();
    if let Some(pr) = &opts.priority {
        if pr.len() != g2.vertex_count() {
            return Err(Error::Precondition("priority must rank every target vertex".into()));
        }
    }
    let domain = match &opts.domain {
        Some(d) => d.clone(),
        None => interior(p1.graph(), opts.k),
    };
    let results: Vec<Result<(usize, usize, u32, u32)>> = domain
        .par_iter()
        .map(|&g| {
            let near = p1.members_near(g, opts.k);
            if near.len() <= opts.target_width {
                return Err(Error::KTooSmall {
                    k: opts.k,
                    vertex: p1.graph().vertex_label(g),
                    found: near.len(),
                    needed: opts.target_width + 1,
                });
            }
            let images: Vec<&[usize]> = near.iter().map(|&i| p2.member(phi.image(i))).collect();
            let ball = meeting_ball_of_sets(g2, &images)?;
            let center = match &opts.priority {
                Some(pr) => *ball.ties.iter().min_by_key(|&&v| (pr[v], v)).unwrap(),
                None => ball.center,
            };
            Ok((g, center, ball.radius, diameter(g2, &ball.ties)))
        })
        .collect();
    let n = p1.graph().vertex_count();
    let mut images = vec![None; n];
    let mut radii = vec![None; n];
    let mut discrepancy = 0;
    for r in results {
        let (g, c, radius, spread) = r?;
        images[g] = Some(c);
        radii[g] = Some(radius);
        discrepancy = discrepancy.max(spread);
    }
    Ok(QMap { k: opts.k, target_width: opts.target_width, images, radii, discrepancy })
}

/// Vertices at distance at least `k` from the window edge.
pub fn interior<G: MetricGraph + ?Sized>(g: &G, k: u32) -> Vec<usize> {
    edge_distances(g).into_iter().enumerate().filter(|&(_, d)| d >= k).map(|(v, _)| v).collect()
}

/// `max d(q(g), target(g))` over the domain, for a reference map `target`.
pub fn distance_to_reference<G: MetricGraph + ?Sized>(q: &QMap, g2: &G, target: impl Fn(usize) -> Option<usize>) -> Option<u32> {
    q.domain()
        .into_iter()
        .map(|v| target(v).map(|t| g2.distance(q.images[v].unwrap(), t)))
        .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
}

/// `max d(q₂₁(q₁₂(g)), g)` over the vertices where the composite is defined.
pub fn round_trip_distance<G: MetricGraph + ?Sized>(q12: &QMap, q21: &QMap, g1: &G) -> Option<u32> {
    q12.domain()
        .into_iter()
        .filter_map(|g| q21.images.get(q12.images[g]?).copied().flatten().map(|back| g1.distance(g, back)))
        .max()
}

#[derive(Clone, Debug)]
pub struct PropernessOptions {
    /// Envelope values above `slope·n + offset` are flagged as blow-up.
    pub slope: u64,
    pub offset: u64,
}

impl Default for PropernessOptions {
    fn default() -> Self {
        PropernessOptions { slope: 2, offset: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropernessReport {
    /// `(n, f(n))`: largest target distance among pairs at source distance at most `n`.
    pub forward: Vec<(u64, u64)>,
    /// The same with the roles of the two families exchanged.
    pub backward: Vec<(u64, u64)>,
    pub samples: usize,
    pub blow_up: bool,
    /// A sampled pair exceeding the linear bound by the most.
    pub worst_pair: Option<(usize, usize)>,
}

/// All unordered pairs of family indices.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Observed envelopes of the two uniform-properness conditions on the sample.
pub fn verify_uniform_properness<G1: MetricGraph, G2: MetricGraph>(
    p1: &PatternSpace<G1>,
    p2: &PatternSpace<G2>,
    phi: &Pairing,
    pairs: &[(usize, usize)],
    opts: &PropernessOptions,
) -> Result<PropernessReport> {
    phi.check(p1, p2)?;
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i >= p1.len() || j >= p1.len()) {
        return Err(Error::Precondition(format!("sample pair ({i}, {j}) out of range")));
    }
    let measured: Vec<(u64, u64)> = pairs
        .par_iter()
        .map(|&(i, j)| (p1.set_distance(i, j) as u64, p2.set_distance(phi.image(i), phi.image(j)) as u64))
        .collect();
    let forward = monotone_envelope(&measured);
    let swapped: Vec<(u64, u64)> = measured.iter().map(|&(a, b)| (b, a)).collect();
    let backward = monotone_envelope(&swapped);
    let excess = |(a, b): (u64, u64)| (b as i128 - (opts.slope * a + opts.offset) as i128).max(a as i128 - (opts.slope * b + opts.offset) as i128);
    let worst = (0..pairs.len()).max_by_key(|&s| (excess(measured[s]), std::cmp::Reverse(s)));
    let blow_up = worst.is_some_and(|s| excess(measured[s]) > 0);
    Ok(PropernessReport {
        forward,
        backward,
        samples: pairs.len(),
        blow_up,
        worst_pair: worst.filter(|_| blow_up).map(|s| pairs[s]),
    })
}

#[derive(Clone, Debug)]
pub struct QiOptions {
    /// Samples with a distance below this do not constrain `λ`.
    pub scale: u64,
    /// Largest `n` tabulated for the pairing bound `h`.
    pub pairing_levels: u32,
    /// Target vertices that should lie near the image; defaults to the
    /// vertices of target members at least `K` from the window edge.
    pub net: Option<Vec<usize>>,
}

impl Default for QiOptions {
    fn default() -> Self {
        QiOptions { scale: 1, pairing_levels: 3, net: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiReport {
    #[serde(with = "crate::exact")]
    pub lambda: Ratio<i64>,
    #[serde(with = "crate::exact")]
    pub epsilon: Ratio<i64>,
    pub degenerate: bool,
    /// `(n, h(n))`: `d(g, J_j) ≤ n` implies `d(q(g), φ(J_j)) ≤ h(n)` on the sample.
    pub pairing_bound: Vec<(u64, u64)>,
    pub sample_count: usize,
    /// Largest distance from a net vertex to the image of `q`.
    pub surjectivity_gap: u32,
}

/// Fits `(λ, ε)` to `q` on the sampled vertex pairs and tabulates the
/// pairing bound over the whole domain.
pub fn verify_qi<G1: MetricGraph, G2: MetricGraph>(
    q: &QMap,
    p1: &PatternSpace<G1>,
    p2: &PatternSpace<G2>,
    phi: &Pairing,
    pairs: &[(usize, usize)],
    opts: &QiOptions,
) -> Result<QiReport> {
    phi.check(p1, p2)?;
    let (g1, g2) = (p1.graph(), p2.graph());
    let defined: Vec<(usize, usize, usize, usize)> = pairs
        .iter()
        .filter_map(|&(x, y)| Some((x, y, (*q.images.get(x)?)?, (*q.images.get(y)?)?)))
        .collect();
    let distances: Vec<(u64, u64)> =
        defined.par_iter().map(|&(x, y, qx, qy)| (g1.distance(x, y) as u64, g2.distance(qx, qy) as u64)).collect();
    let fit = fit_qi(&distances, opts.scale);
    let domain = q.domain();
    let levels = opts.pairing_levels;
    let bound_samples: Vec<(u64, u64)> = (0..p1.len())
        .into_par_iter()
        .flat_map_iter(|j| {
            let to_j = p1.member_distances(j);
            let to_image = p2.member_distances(phi.image(j));
            domain
                .iter()
                .filter(move |&&g| (to_j[g] as u32) <= levels)
                .map(move |&g| (to_j[g] as u64, to_image[q.images[g].unwrap()] as u64))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut pairing_bound = monotone_envelope(&bound_samples);
    pairing_bound.truncate(levels as usize + 1);
    let net = match &opts.net {
        Some(n) => n.clone(),
        None => {
            let edge = edge_distances(g2);
            let mut on_member = vec![false; g2.vertex_count()];
            p2.family().iter().flatten().for_each(|&v| on_member[v] = true);
            (0..g2.vertex_count()).filter(|&v| on_member[v] && edge[v] >= q.k).collect()
        }
    };
    let image = q.image_set();
    let surjectivity_gap = if image.is_empty() {
        UNREACHABLE
    } else {
        let from_image = bfs(g2, &image);
        net.iter().map(|&v| from_image[v]).max().unwrap_or(0)
    };
    Ok(QiReport {
        lambda: fit.lambda,
        epsilon: fit.epsilon,
        degenerate: fit.degenerate,
        pairing_bound,
        sample_count: distances.len(),
        surjectivity_gap,
    })
}

#[derive(Clone, Debug)]
pub struct AxiomOptions {
    pub k_grid: Vec<u32>,
    /// Collection sizes for condition (3) and candidate levels `N` for condition (4).
    pub n_grid: Vec<usize>,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions { k_grid: vec![1, 2], n_grid: vec![2, 3] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnEntry {
    pub k: u32,
    pub n: usize,
    /// Largest minimal meeting radius over collections of at most `n`
    /// members with pairwise distance at most `k`.
    pub radius: u32,
    pub collections: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub condition: u8,
    pub k: u32,
    pub members: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapLevel {
    pub n: usize,
    /// `(k, K(k))`: largest bounded overlap diameter at this level.
    pub bounds: Vec<(u32, u32)>,
    pub tuples: usize,
    pub violations: Vec<AxiomViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axiom4Report {
    /// Least examined level with no violation at any `k`.
    pub n: Option<usize>,
    pub levels: Vec<OverlapLevel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Condition (1): `(k, M(k))`, most members meeting `N_k(x)` over interior `x`.
    pub m_of_k: Vec<(u32, usize)>,
    /// Condition (2): `(k, fewest members meeting N_k(x))` over interior `x`.
    pub min_count_of_k: Vec<(u32, usize)>,
    /// Condition (2): `(K, least k in the grid with at least K members everywhere)`.
    pub k_of_count: Vec<(usize, Option<u32>)>,
    /// Some `K` up to the largest observed count is not reached on the grid.
    pub window_limited: bool,
    /// Condition (3).
    pub big_k_of_kn: Vec<KnEntry>,
    /// Violations of conditions (1) and (3). A finite family meets every
    /// neighbourhood in finitely many members, so (1) never fails; (3) fails
    /// only when members lie in different components.
    pub violations: Vec<AxiomViolation>,
    /// Condition (4).
    pub axiom4: Axiom4Report,
}

/// Measures the four conditions on the window. With `k*` the largest grid
/// value, neighbourhood counts use vertices at least `k*` from the window
/// edge, and collections and overlaps are examined when they reach the core
/// of vertices more than `2k*` from the edge. Fixing the regions across the
/// grid keeps every table monotone in `k`. An overlap that meets the core
/// and also touches the edge is reported as unbounded.
pub fn check_axioms<G: MetricGraph>(p: &PatternSpace<G>, opts: &AxiomOptions) -> Result<AxiomReport> {
    if opts.k_grid.is_empty() || opts.n_grid.is_empty() {
        return Err(Error::Precondition("axiom grids must be nonempty".into()));
    }
    if opts.n_grid.iter().any(|&n| n < 2) {
        return Err(Error::Precondition("collection sizes start at 2".into()));
    }
    let mut k_grid = opts.k_grid.clone();
    k_grid.sort_unstable();
    k_grid.dedup();
    let mut n_grid = opts.n_grid.clone();
    n_grid.sort_unstable();
    n_grid.dedup();
    let g = p.graph();
    let edge = edge_distances(g);
    let k_max = *k_grid.last().unwrap();
    let core: Vec<usize> = (0..g.vertex_count()).filter(|&v| edge[v] > 2 * k_max).collect();
    let mut in_core = vec![false; g.vertex_count()];
    core.iter().for_each(|&v| in_core[v] = true);
    let anchored: Vec<usize> = (0..p.len()).filter(|&i| p.member(i).iter().any(|&v| in_core[v])).collect();
    let is_anchored: HashSet<usize> = anchored.iter().copied().collect();

    let mut m_of_k = Vec::new();
    let mut min_count_of_k = Vec::new();
    for &k in &k_grid {
        let counts: Vec<usize> =
            (0..g.vertex_count()).into_par_iter().filter(|&v| edge[v] >= k_max).map(|v| p.members_near(v, k).len()).collect();
        m_of_k.push((k, counts.iter().copied().max().unwrap_or(0)));
        min_count_of_k.push((k, counts.iter().copied().min().unwrap_or(0)));
    }
    let top = m_of_k.iter().map(|e| e.1).max().unwrap_or(0);
    let k_of_count: Vec<(usize, Option<u32>)> =
        (1..=top).map(|c| (c, min_count_of_k.iter().find(|e| e.1 >= c).map(|e| e.0))).collect();
    let window_limited = k_of_count.iter().any(|e| e.1.is_none());

    let mut big_k_of_kn = Vec::new();
    let mut violations = Vec::new();
    let mut levels: Vec<OverlapLevel> =
        n_grid.iter().map(|&n| OverlapLevel { n, bounds: Vec::new(), tuples: 0, violations: Vec::new() }).collect();
    for &k in &k_grid {
        // Condition (3): cliques of the distance-at-most-k graph on members meeting the core.
        let near: HashMap<usize, Vec<usize>> = anchored
            .par_iter()
            .map(|&i| {
                let mut out: BTreeSet<usize> = BTreeSet::new();
                for &v in p.member(i) {
                    for j in p.members_near(v, k) {
                        if j > i && is_anchored.contains(&j) {
                            out.insert(j);
                        }
                    }
                }
                (i, out.into_iter().collect())
            })
            .collect();
        let max_n = *n_grid.last().unwrap();
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for &i in &anchored {
            grow_cliques(&near, &mut vec![i], max_n, &mut cliques);
        }
        let radii: Vec<(usize, Result<u32>)> = cliques
            .par_iter()
            .map(|c| (c.len(), minimal_meeting_ball(p, c).map(|b| b.radius)))
            .collect();
        for (c, (_, r)) in cliques.iter().zip(&radii) {
            if r.is_err() {
                violations.push(AxiomViolation { condition: 3, k, members: c.clone(), detail: "no ball meets every member".into() });
            }
        }
        for &n in &n_grid {
            let within: Vec<&Result<u32>> = radii.iter().filter(|e| e.0 <= n).map(|e| &e.1).collect();
            let radius = within.iter().filter_map(|r| r.as_ref().ok()).copied().max().unwrap_or(0);
            big_k_of_kn.push(KnEntry { k, n, radius, collections: within.len() });
        }

        // Condition (4): tuples whose common k-overlap contains a core vertex.
        let mut tuples: BTreeSet<Vec<usize>> = BTreeSet::new();
        for &x in &core {
            let around = p.members_near(x, k);
            for &n in &n_grid {
                subsets_of_size(&around, n, &mut |s| {
                    tuples.insert(s.to_vec());
                });
            }
        }
        let tuples: Vec<Vec<usize>> = tuples.into_iter().collect();
        let overlaps: Vec<(u32, bool)> = tuples
            .par_iter()
            .map(|t| {
                let overlap = common_overlap(p, t, k);
                let touches_edge = overlap.iter().any(|&v| edge[v] == 0);
                (diameter(g, &overlap), touches_edge)
            })
            .collect();
        for level in levels.iter_mut() {
            let mut bound = 0;
            for (t, &(diam, touches_edge)) in tuples.iter().zip(&overlaps) {
                if t.len() != level.n {
                    continue;
                }
                level.tuples += 1;
                if touches_edge {
                    level.violations.push(AxiomViolation {
                        condition: 4,
                        k,
                        members: t.clone(),
                        detail: format!("overlap of diameter {diam} runs from the core to the window edge"),
                    });
                } else {
                    bound = bound.max(diam);
                }
            }
            level.bounds.push((k, bound));
        }
    }
    let n = levels.iter().find(|l| l.violations.is_empty()).map(|l| l.n);
    Ok(AxiomReport {
        m_of_k,
        min_count_of_k,
        k_of_count,
        window_limited,
        big_k_of_kn,
        violations,
        axiom4: Axiom4Report { n, levels },
    })
}

fn grow_cliques(near: &HashMap<usize, Vec<usize>>, current: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
    if current.len() >= 2 {
        out.push(current.clone());
    }
    if current.len() == max {
        return;
    }
    let last = *current.last().unwrap();
    for &j in &near[&last] {
        if current.iter().all(|c| *c == last || near[c].binary_search(&j).is_ok()) {
            current.push(j);
            grow_cliques(near, current, max, out);
            current.pop();
        }
    }
}

fn subsets_of_size(items: &[usize], n: usize, f: &mut impl FnMut(&[usize])) {
    fn go(items: &[usize], start: usize, n: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < n - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, i + 1, n, cur, f);
            cur.pop();
        }
    }
    go(items, 0, n, &mut Vec::new(), f);
}

/// Vertices within `k` of every listed member, sorted.
pub fn common_overlap<G: MetricGraph>(p: &PatternSpace<G>, members: &[usize], k: u32) -> Vec<usize> {
    let mut acc: Option<Vec<usize>> = None;
    for &i in members {
        let mut hood = bounded_neighborhood(p.graph(), p.member(i), k);
        if let Some(prev) = acc {
            let keep: HashSet<usize> = prev.into_iter().collect();
            hood.retain(|v| keep.contains(v));
        }
        acc = Some(hood);
    }
    acc.unwrap_or_default()
}

/// Vertices within `k` of `set`, sorted, by a BFS that stops at depth `k`.
pub fn bounded_neighborhood<G: MetricGraph + ?Sized>(g: &G, set: &[usize], k: u32) -> Vec<usize> {
    let mut seen: HashSet<usize> = set.iter().copied().collect();
    let mut frontier: Vec<usize> = seen.iter().copied().collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for &v in &frontier {
            g.for_each_neighbor(v, &mut |w| {
                if seen.insert(w) {
                    next.push(w);
                }
            });
        }
        frontier = next;
    }
    let mut out: Vec<usize> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{ball_around, FiniteGraph};
    use crate::patterns::grid_lines;
    use std::sync::Arc;

    fn brute_force(g: &FiniteGraph, sets: &[Vec<usize>]) -> (usize, u32) {
        for r in 0.. {
            for v in 0..g.vertex_count() {
                let ball: HashSet<usize> = ball_around(g, v, r).into_iter().map(|x| x.0).collect();
                if sets.iter().all(|s| s.iter().any(|x| ball.contains(x))) {
                    return (v, r);
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn meeting_ball_matches_brute_force_on_grid() {
        let g = Arc::new(FiniteGraph::grid(4));
        let id = |x, y| FiniteGraph::grid_vertex(4, x, y);
        let sets = vec![vec![id(-4, -4), id(-3, -4)], vec![id(4, 4)], vec![id(4, -4), id(0, 2)]];
        let p = PatternSpace::new(g.clone(), sets.clone(), vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let ball = minimal_meeting_ball(&p, &[0, 1, 2]).unwrap();
        assert_eq!((ball.center, ball.radius), brute_force(&g, &sets));
    }

    #[test]
    fn crossing_lines_meet_at_the_crossing() {
        let p = grid_lines(5, 5).unwrap();
        let v = p.labels().iter().position(|l| l == "x=0").unwrap();
        let h = p.labels().iter().position(|l| l == "y=0").unwrap();
        let ball = minimal_meeting_ball(&p, &[v, h]).unwrap();
        assert_eq!((ball.center, ball.radius), (FiniteGraph::grid_vertex(5, 0, 0), 0));
        let single = minimal_meeting_ball(&p, &[v]).unwrap();
        assert_eq!((single.center, single.radius), (p.member(v)[0], 0));
    }

    #[test]
    fn empty_selection_is_an_error() {
        let p = grid_lines(3, 5).unwrap();
        assert!(matches!(minimal_meeting_ball(&p, &[]), Err(Error::EmptySubset(_))));
    }

    #[test]
    fn pairing_validation() {
        assert!(Pairing::new(vec![1, 0, 2]).is_ok());
        assert!(matches!(Pairing::new(vec![1, 1]), Err(Error::NotBijective(_))));
        let p = Pairing::new(vec![2, 0, 1]).unwrap();
        assert_eq!(p.inverse().as_slice(), &[1, 2, 0]);
    }

    #[test]
    fn identity_properness_on_grid() {
        let p = grid_lines(6, 3).unwrap();
        let rep = verify_uniform_properness(&p, &p, &Pairing::identity(p.len()), &all_pairs(p.len()), &Default::default()).unwrap();
        assert!(!rep.blow_up);
        assert!(rep.forward.iter().all(|&(n, f)| f <= n));
        assert_eq!(rep.forward, rep.backward);
    }

    #[test]
    fn grid_axioms() {
        let p = grid_lines(10, 5).unwrap();
        let rep = check_axioms(&p, &AxiomOptions { k_grid: vec![1, 2], n_grid: vec![2] }).unwrap();
        assert_eq!(rep.axiom4.n, Some(2));
        assert_eq!(rep.axiom4.levels[0].bounds, vec![(1, 4), (2, 8)]);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn duplicate_member_breaks_condition_four() {
        let base = grid_lines(6, 5).unwrap();
        let axis = base.labels().iter().position(|l| l == "x=0").unwrap();
        let mut family = base.family().to_vec();
        family.push(family[axis].clone());
        let mut labels = base.labels().to_vec();
        labels.push("copy".into());
        let p = PatternSpace::new(base.graph_arc(), family, labels).unwrap();
        let rep = check_axioms(&p, &AxiomOptions { k_grid: vec![1, 2], n_grid: vec![2] }).unwrap();
        assert_eq!(rep.axiom4.n, None);
        let ks: BTreeSet<u32> = rep.axiom4.levels[0].violations.iter().map(|v| v.k).collect();
        assert_eq!(ks, BTreeSet::from([1, 2]));
    }
}

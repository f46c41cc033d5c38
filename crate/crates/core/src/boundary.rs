//! Finite models of the boundary of a free group, limit sets, annulus
//! systems and annular cross-ratios.
//!
//! The depth-`D` model has one point per reduced word of length `D`, standing
//! for the cylinder of rays with that prefix, and carries the visual metric
//! `d(ξ, η) = 2^-lcp(ξ, η)`. Cylinders are clopen, so interiors and closures
//! of model sets are the sets themselves.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cayley::CayleyBall;
use crate::envelope::{fit_linear, LinearFit};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::stallings::{CoreGraph, CosetId, SubgroupPredicate};
use crate::word::{words_of_length, Letter, Word};

/// Points of the depth-`D` boundary model, in letter-code lexicographic order.
#[derive(Clone, Debug)]
pub struct BoundaryModel {
    rank: usize,
    depth: usize,
    points: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl BoundaryModel {
    pub fn new(rank: usize, depth: usize) -> Result<Self> {
        if rank == 0 || depth == 0 {
            return Err(Error::Precondition("boundary models need rank and depth at least 1".into()));
        }
        let points = words_of_length(rank, depth);
        let index = points.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ok(BoundaryModel { rank, depth, points, index })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Word {
        &self.points[i]
    }

    pub fn points(&self) -> &[Word] {
        &self.points
    }

    pub fn locate(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn common_prefix_len(&self, i: usize, j: usize) -> usize {
        self.points[i].common_prefix_len(&self.points[j])
    }

    /// `2^-lcp`, and 0 on the diagonal.
    pub fn distance(&self, i: usize, j: usize) -> Ratio<i64> {
        if i == j {
            Ratio::from_integer(0)
        } else {
            visual(self.common_prefix_len(i, j))
        }
    }

    /// Points whose word starts with `prefix`.
    pub fn cylinder(&self, prefix: &Word) -> Result<ClosedSet> {
        if prefix.len() > self.depth {
            return Err(Error::Precondition(format!("cylinder prefix longer than depth {}", self.depth)));
        }
        let members = (0..self.len()).filter(|&i| self.points[i].common_prefix_len(prefix) == prefix.len()).collect();
        ClosedSet::new(self, members)
    }

    /// The union of the cylinders named by `words`: a word of length at least
    /// the depth names the point given by its prefix, a shorter one its cylinder.
    pub fn closed_set(&self, words: &[Word]) -> Result<ClosedSet> {
        let mut members = Vec::new();
        for w in words {
            if w.letters().iter().any(|l| l.generator() >= self.rank) {
                return Err(Error::Precondition(format!("word uses more than {} generators", self.rank)));
            }
            if w.len() >= self.depth {
                members.push(self.index[&w.prefix(self.depth)]);
            } else {
                members.extend(self.cylinder(w)?.members().iter().map(|&m| m as usize));
            }
        }
        ClosedSet::new(self, members)
    }

    /// `M \ set`, or `None` when `set` is everything.
    pub fn complement(&self, set: &ClosedSet) -> Option<ClosedSet> {
        let inside: HashSet<u32> = set.members.iter().copied().collect();
        let members: Vec<usize> = (0..self.len()).filter(|&i| !inside.contains(&(i as u32))).collect();
        ClosedSet::new(self, members).ok()
    }

    fn check(&self, set: &ClosedSet) -> Result<()> {
        if set.depth != self.depth {
            return Err(Error::ModelMismatch { left: self.depth, right: set.depth });
        }
        if set.rank != self.rank {
            return Err(Error::Precondition(format!("closed set of rank {} in a rank {} model", set.rank, self.rank)));
        }
        Ok(())
    }

    fn bits(&self, set: &ClosedSet) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.len());
        set.members.iter().for_each(|&m| b.insert(m as usize));
        b
    }
}

fn visual(lcp: usize) -> Ratio<i64> {
    Ratio::new(1, 1i64 << lcp.min(62))
}

/// A nonempty set of model points, stored as sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClosedSet {
    rank: usize,
    depth: usize,
    members: Vec<u32>,
}

impl ClosedSet {
    pub fn new(model: &BoundaryModel, members: Vec<usize>) -> Result<Self> {
        let mut members: Vec<u32> = members
            .into_iter()
            .map(|m| {
                if m < model.len() {
                    Ok(m as u32)
                } else {
                    Err(Error::Precondition(format!("point index {m} outside a model of {} points", model.len())))
                }
            })
            .collect::<Result<_>>()?;
        if members.is_empty() {
            return Err(Error::EmptySubset("closed set".into()));
        }
        members.sort_unstable();
        members.dedup();
        Ok(ClosedSet { rank: model.rank, depth: model.depth, members })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&(i as u32)).is_ok()
    }

    pub fn is_subset(&self, other: &ClosedSet) -> bool {
        self.members.iter().all(|&m| other.members.binary_search(&m).is_ok())
    }

    pub fn intersects(&self, other: &ClosedSet) -> bool {
        self.members.iter().any(|&m| other.members.binary_search(&m).is_ok())
    }

    /// Words of the member points.
    pub fn words<'a>(&'a self, model: &'a BoundaryModel) -> impl Iterator<Item = &'a Word> + 'a {
        self.members.iter().map(|&m| model.point(m as usize))
    }
}

/// Directed core edges `(state, letter)` that start an infinite reduced path.
fn live_edges(h: &CoreGraph) -> HashSet<(usize, Letter)> {
    let letters: Vec<Letter> = (0..2 * h.rank()).map(Letter::from_code).collect();
    let mut live: HashSet<(usize, Letter)> = (0..h.vertex_count())
        .flat_map(|v| letters.iter().filter(move |&&l| h.target(v, l).is_some()).map(move |&l| (v, l)))
        .collect();
    loop {
        let dead: Vec<(usize, Letter)> = live
            .iter()
            .copied()
            .filter(|&(v, l)| {
                let w = h.target(v, l).expect("live edges exist");
                !letters.iter().any(|&m| m != l.inverse() && live.contains(&(w, m)))
            })
            .collect();
        if dead.is_empty() {
            return live;
        }
        dead.iter().for_each(|e| {
            live.remove(e);
        });
    }
}

/// Depth-`D` prefixes of the rays `g·ξ` for `ξ` in the limit set of `H`,
/// that is, the cylinders met by the limit set of the coset `gH`.
pub fn limit_set_approx(model: &BoundaryModel, s: &SubgroupPredicate, c: &CosetId) -> Result<ClosedSet> {
    if s.rank() != model.rank {
        return Err(Error::Precondition("subgroup and boundary model have different ranks".into()));
    }
    let p = Presentation::free(model.rank);
    let no_deep = || Error::NoDeepElements(p.show(&c.representative));
    let h = match s {
        // The kernel is normal and nontrivial for rank at least 2, so its
        // limit set and that of every coset is the whole boundary.
        SubgroupPredicate::AbelianizationKernel { rank } => {
            return if *rank >= 2 { ClosedSet::new(model, (0..model.len()).collect()) } else { Err(no_deep()) };
        }
        SubgroupPredicate::Core(h) => h,
    };
    let live = live_edges(h);
    if live.is_empty() {
        return Err(no_deep());
    }
    let g = &c.representative;
    // Past |g| letters no further cancellation against g can happen, so the
    // image word only grows and may be cut to the model depth.
    let settle = g.len();
    let mut frontier: BTreeSet<(usize, Option<Letter>, Vec<Letter>)> = BTreeSet::from([(0, None, g.letters().to_vec())]);
    for step in 0..settle + model.depth {
        let mut next = BTreeSet::new();
        for (v, last, image) in &frontier {
            for code in 0..2 * model.rank {
                let l = Letter::from_code(code);
                if Some(l.inverse()) == *last || !live.contains(&(*v, l)) {
                    continue;
                }
                let mut image = image.clone();
                if image.last() == Some(&l.inverse()) {
                    image.pop();
                } else {
                    image.push(l);
                }
                if step + 1 >= settle {
                    image.truncate(model.depth);
                }
                next.insert((h.target(*v, l).expect("live edge"), Some(l), image));
            }
        }
        frontier = next;
    }
    let members: BTreeSet<usize> = frontier
        .iter()
        .filter(|(_, _, image)| image.len() == model.depth)
        .map(|(_, _, image)| model.index[&Word::reduce(image.iter().copied())])
        .collect();
    ClosedSet::new(model, members.into_iter().collect())
}

/// Longest prefix of `w` that is a prefix of some word in `prefixes`.
fn best_lcp(w: &Word, prefixes: &HashSet<&[Letter]>) -> usize {
    (0..=w.len()).rev().find(|&k| prefixes.contains(&w.letters()[..k])).unwrap_or(0)
}

fn prefix_set<'a>(model: &'a BoundaryModel, set: &ClosedSet) -> HashSet<&'a [Letter]> {
    set.members
        .iter()
        .flat_map(|&m| {
            let w = model.point(m as usize).letters();
            (0..=w.len()).map(move |k| &w[..k])
        })
        .collect()
}

/// One-sided distance `sup_{a ∈ A} d(a, B)`, given the prefix set of `B`.
fn directed(model: &BoundaryModel, a: &ClosedSet, b: &ClosedSet, b_prefixes: &HashSet<&[Letter]>) -> Ratio<i64> {
    let mut worst = Ratio::from_integer(0);
    for &m in &a.members {
        if b.members.binary_search(&m).is_ok() {
            continue;
        }
        worst = worst.max(visual(best_lcp(model.point(m as usize), b_prefixes)));
    }
    worst
}

/// Hausdorff distance under the visual metric of the model.
pub fn hausdorff_distance(model: &BoundaryModel, a: &ClosedSet, b: &ClosedSet) -> Result<Ratio<i64>> {
    model.check(a)?;
    model.check(b)?;
    let (pa, pb) = (prefix_set(model, a), prefix_set(model, b));
    Ok(directed(model, a, b, &pb).max(directed(model, b, a, &pa)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretenessReport {
    pub discrete: bool,
    /// Two members equal as sets, when there are any.
    pub collision: Option<(usize, usize)>,
    /// A closest pair of members and their Hausdorff distance.
    pub nearest: Option<(usize, usize)>,
    #[serde(with = "crate::exact::option")]
    pub nearest_distance: Option<Ratio<i64>>,
}

/// Whether every two members are at Hausdorff distance at least `separation`.
/// Repeated members make the family fail outright.
pub fn discrete_in_cc0(model: &BoundaryModel, family: &[ClosedSet], separation: Ratio<i64>) -> Result<DiscretenessReport> {
    for (i, set) in family.iter().enumerate() {
        model.check(set)?;
        if set.len() < 2 {
            return Err(Error::SingletonSet { index: i });
        }
    }
    let mut seen: HashMap<&[u32], usize> = HashMap::new();
    for (j, set) in family.iter().enumerate() {
        if let Some(&i) = seen.get(set.members.as_slice()) {
            return Ok(DiscretenessReport { discrete: false, collision: Some((i, j)), nearest: Some((i, j)), nearest_distance: Some(Ratio::from_integer(0)) });
        }
        seen.insert(&set.members, j);
    }
    let prefixes: Vec<HashSet<&[Letter]>> = family.par_iter().map(|s| prefix_set(model, s)).collect();
    let best = (0..family.len())
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..family.len()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let d = directed(model, &family[i], &family[j], &prefixes[j]).max(directed(model, &family[j], &family[i], &prefixes[i]));
            (d, i, j)
        })
        .min();
    Ok(match best {
        None => DiscretenessReport { discrete: true, collision: None, nearest: None, nearest_distance: None },
        Some((d, i, j)) => DiscretenessReport { discrete: d >= separation, collision: None, nearest: Some((i, j)), nearest_distance: Some(d) },
    })
}

/// An ordered pair of disjoint closed sets leaving a nonempty gap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Annulus {
    minus: ClosedSet,
    plus: ClosedSet,
}

impl Annulus {
    pub fn new(model: &BoundaryModel, minus: ClosedSet, plus: ClosedSet) -> Result<Self> {
        model.check(&minus)?;
        model.check(&plus)?;
        if minus.intersects(&plus) {
            return Err(Error::InvalidAnnulus("the two sides meet".into()));
        }
        if minus.len() + plus.len() >= model.len() {
            return Err(Error::InvalidAnnulus("the two sides cover the model".into()));
        }
        Ok(Annulus { minus, plus })
    }

    pub fn minus(&self) -> &ClosedSet {
        &self.minus
    }

    pub fn plus(&self) -> &ClosedSet {
        &self.plus
    }

    /// `-A = (A⁺, A⁻)`.
    pub fn negate(&self) -> Annulus {
        Annulus { minus: self.plus.clone(), plus: self.minus.clone() }
    }

    /// Points in neither side.
    pub fn gap(&self, model: &BoundaryModel) -> Vec<usize> {
        (0..model.len()).filter(|&i| !self.minus.contains(i) && !self.plus.contains(i)).collect()
    }
}

/// `A < B`: every point lies in `A⁺` or in `B⁻`. Then `A⁻ ⊊ B⁻` and
/// `B⁺ ⊊ A⁺`, so nesting runs outward from the minus sides.
pub fn nested(model: &BoundaryModel, a: &Annulus, b: &Annulus) -> Result<bool> {
    for set in [&a.minus, &a.plus, &b.minus, &b.plus] {
        model.check(set)?;
    }
    let mut cover = model.bits(&a.plus);
    cover.union_with(&model.bits(&b.minus));
    Ok(cover.count_ones(..) == model.len())
}

/// A finite family of annuli with its nesting relation, computed on first use.
#[derive(Debug, Serialize, Deserialize)]
pub struct AnnulusSystem {
    rank: usize,
    depth: usize,
    points: usize,
    annuli: Vec<Annulus>,
    symmetric: bool,
    #[serde(skip)]
    relation: OnceLock<Relation>,
}

impl Clone for AnnulusSystem {
    fn clone(&self) -> Self {
        AnnulusSystem { annuli: self.annuli.clone(), relation: OnceLock::new(), ..*self }
    }
}

impl PartialEq for AnnulusSystem {
    fn eq(&self, other: &Self) -> bool {
        (self.rank, self.depth, self.symmetric, &self.annuli) == (other.rank, other.depth, other.symmetric, &other.annuli)
    }
}

#[derive(Debug)]
struct Relation {
    minus: Vec<FixedBitSet>,
    plus: Vec<FixedBitSet>,
    /// `before[j]`: every `i` with `A_i < A_j`.
    before: Vec<Vec<usize>>,
    /// Annuli sorted by `|A⁻|`, a topological order of the nesting relation.
    order: Vec<usize>,
}

impl AnnulusSystem {
    /// Removes repeats; when `symmetric`, adds `-A` for every `A`.
    pub fn new(model: &BoundaryModel, annuli: Vec<Annulus>, symmetric: bool) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for a in annuli {
            for set in [&a.minus, &a.plus] {
                model.check(set)?;
            }
            let neg = symmetric.then(|| a.negate());
            for x in std::iter::once(a).chain(neg) {
                if seen.insert(x.clone()) {
                    out.push(x);
                }
            }
        }
        Ok(AnnulusSystem { rank: model.rank, depth: model.depth, points: model.len(), annuli: out, symmetric, relation: OnceLock::new() })
    }

    pub fn empty(model: &BoundaryModel) -> Self {
        AnnulusSystem::new(model, Vec::new(), true).expect("no annuli to check")
    }

    /// This system together with `extra` (closed under negation if this one is).
    pub fn extended(&self, model: &BoundaryModel, extra: Vec<Annulus>) -> Result<Self> {
        let mut all = self.annuli.clone();
        all.extend(extra);
        AnnulusSystem::new(model, all, self.symmetric)
    }

    pub fn annuli(&self) -> &[Annulus] {
        &self.annuli
    }

    pub fn len(&self) -> usize {
        self.annuli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.annuli.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn relation(&self) -> &Relation {
        self.relation.get_or_init(|| {
            let bits = |s: &ClosedSet| {
                let mut b = FixedBitSet::with_capacity(self.points);
                s.members.iter().for_each(|&m| b.insert(m as usize));
                b
            };
            let minus: Vec<FixedBitSet> = self.annuli.iter().map(|a| bits(&a.minus)).collect();
            let plus: Vec<FixedBitSet> = self.annuli.iter().map(|a| bits(&a.plus)).collect();
            let n = self.annuli.len();
            let before = (0..n)
                .into_par_iter()
                .map(|j| {
                    (0..n)
                        .filter(|&i| {
                            let mut cover = plus[i].clone();
                            cover.union_with(&minus[j]);
                            i != j && cover.count_ones(..) == self.points
                        })
                        .collect()
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&i| (self.annuli[i].minus.len(), i));
            Relation { minus, plus, before, order }
        })
    }

    /// `A_i < A_j` in this system.
    pub fn is_nested(&self, i: usize, j: usize) -> bool {
        self.relation().before[j].contains(&i)
    }

    fn check(&self, set: &ClosedSet) -> Result<()> {
        if set.depth != self.depth {
            return Err(Error::ModelMismatch { left: self.depth, right: set.depth });
        }
        if set.rank != self.rank {
            return Err(Error::Precondition("closed set and annulus system have different ranks".into()));
        }
        Ok(())
    }
}

/// Value of an annular cross-ratio.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossRatio {
    Finite(u64),
    /// No bound on chain length. Finite systems never produce it.
    Infinite,
}

impl CrossRatio {
    pub fn finite(self) -> Option<u64> {
        match self {
            CrossRatio::Finite(n) => Some(n),
            CrossRatio::Infinite => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRatioResult {
    pub value: CrossRatio,
    /// Indices of a longest chain `K < A_1 < ... < A_n < L`.
    pub chain: Vec<usize>,
}

/// `(K|L)`: the greatest `n` admitting annuli `K < A_1 < ... < A_n < L`,
/// where `K < A` means `K ⊆ A⁻` and `A < L` means `L ⊆ A⁺`.
pub fn cross_ratio(k: &ClosedSet, l: &ClosedSet, sys: &AnnulusSystem) -> Result<CrossRatioResult> {
    sys.check(k)?;
    sys.check(l)?;
    let rel = sys.relation();
    let n = sys.annuli.len();
    let mut best: Vec<Option<u64>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let covers = |set: &FixedBitSet, s: &ClosedSet| s.members.iter().all(|&m| set.contains(m as usize));
    for &j in &rel.order {
        let mut here = covers(&rel.minus[j], k).then_some(1u64);
        for &i in &rel.before[j] {
            if let Some(b) = best[i] {
                if here.is_none_or(|h| b + 1 > h) {
                    here = Some(b + 1);
                    pred[j] = Some(i);
                }
            }
        }
        best[j] = here;
    }
    let end = (0..n).filter(|&j| best[j].is_some() && covers(&rel.plus[j], l)).max_by_key(|&j| (best[j], std::cmp::Reverse(j)));
    let Some(mut j) = end else {
        return Ok(CrossRatioResult { value: CrossRatio::Finite(0), chain: Vec::new() });
    };
    let value = CrossRatio::Finite(best[j].expect("reachable"));
    let mut chain = vec![j];
    while let Some(i) = pred[j] {
        chain.push(i);
        j = i;
    }
    chain.reverse();
    Ok(CrossRatioResult { value, chain })
}

/// Re-checks a chain certificate against the definitions.
pub fn verify_chain(model: &BoundaryModel, k: &ClosedSet, l: &ClosedSet, sys: &AnnulusSystem, chain: &[usize]) -> Result<bool> {
    let (Some(&first), Some(&last)) = (chain.first(), chain.last()) else {
        return Ok(true);
    };
    let a = &sys.annuli;
    if chain.iter().any(|&i| i >= a.len()) || !k.is_subset(&a[first].minus) || !l.is_subset(&a[last].plus) {
        return Ok(false);
    }
    for w in chain.windows(2) {
        if !nested(model, &a[w[0]], &a[w[1]])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shadow annuli of a free-group ball. For a vertex `v` and radius `r`, `A⁻`
/// holds the directions whose ray from `1` passes within `r` of `v` and `A⁺`
/// those passing at distance more than `r + 1`. Annuli with an empty side or
/// an empty gap are dropped and the result is closed under negation.
pub fn shadow_annuli(ball: &CayleyBall, model: &BoundaryModel, radii: &[u32]) -> Result<AnnulusSystem> {
    if !ball.is_free() {
        return Err(Error::Precondition("shadow annuli need a free-group ball".into()));
    }
    if ball.presentation().rank() != model.rank {
        return Err(Error::Precondition("ball and boundary model have different ranks".into()));
    }
    if ball.radius() > model.depth {
        return Err(Error::Precondition(format!("ball radius {} exceeds model depth {}", ball.radius(), model.depth)));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("shadow radii must increase".into()));
    }
    // The ray towards ξ passes at distance |v| - lcp(v, ξ) from v, so both
    // sides depend on v and r only through the prefix u of length |v| - r.
    let mut inner: BTreeSet<Vec<Letter>> = BTreeSet::new();
    for w in ball.words() {
        for &r in radii {
            if w.len() >= r as usize + 2 {
                inner.insert(w.letters()[..w.len() - r as usize].to_vec());
            }
        }
    }
    let mut annuli = Vec::new();
    for u in inner {
        let u = Word::reduce(u);
        let minus = model.cylinder(&u)?;
        let Some(plus) = model.complement(&model.cylinder(&u.prefix(u.len() - 1))?) else {
            continue;
        };
        if let Ok(a) = Annulus::new(model, minus, plus) {
            annuli.push(a);
        }
    }
    AnnulusSystem::new(model, annuli, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRatioSample {
    pub cross_ratio: u64,
    pub distance: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRatioComparison {
    pub fit: LinearFit,
    pub samples: Vec<CrossRatioSample>,
    /// The system is empty or every cross-ratio vanished, so `b` carries the
    /// whole comparison.
    pub degenerate: bool,
}

/// Fits `(K|L) ≤ a·d + b` and `d ≤ a·(K|L) + b` over the pairs, with `d`
/// supplied by `distance` (typically the distance between joins).
pub fn compare_crossratio_distance<F>(sys: &AnnulusSystem, pairs: &[(ClosedSet, ClosedSet)], distance: F) -> Result<CrossRatioComparison>
where
    F: Fn(&ClosedSet, &ClosedSet) -> Result<u64> + Sync,
{
    let samples: Vec<CrossRatioSample> = pairs
        .par_iter()
        .map(|(k, l)| {
            let cr = cross_ratio(k, l, sys)?
                .value
                .finite()
                .ok_or_else(|| Error::Precondition("unbounded cross-ratio".into()))?;
            Ok(CrossRatioSample { cross_ratio: cr, distance: distance(k, l)? })
        })
        .collect::<Result<_>>()?;
    let fit = fit_linear(&samples.iter().map(|s| (s.cross_ratio, s.distance)).collect::<Vec<_>>());
    let degenerate = sys.is_empty() || samples.iter().all(|s| s.cross_ratio == 0);
    Ok(CrossRatioComparison { fit, samples, degenerate })
}

/// The three pairings of four points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourPointCrossRatios {
    pub points: [usize; 4],
    /// `(xy|zw)`, `(xz|yw)`, `(xw|zy)`.
    pub values: [u64; 3],
    pub at_least_two_zero: bool,
}

/// Cross-ratios of the doubletons for the three ways of splitting four
/// distinct points into pairs.
pub fn four_point_cross_ratios(model: &BoundaryModel, sys: &AnnulusSystem, pts: [usize; 4]) -> Result<FourPointCrossRatios> {
    let set = |a: usize, b: usize| ClosedSet::new(model, vec![a, b]);
    let [x, y, z, w] = pts;
    let mut values = [0; 3];
    for (slot, (a, b, c, d)) in [(x, y, z, w), (x, z, y, w), (x, w, z, y)].into_iter().enumerate() {
        values[slot] = cross_ratio(&set(a, b)?, &set(c, d)?, sys)?
            .value
            .finite()
            .ok_or_else(|| Error::Precondition("unbounded cross-ratio".into()))?;
    }
    Ok(FourPointCrossRatios { points: pts, values, at_least_two_zero: values.iter().filter(|&&v| v == 0).count() >= 2 })
}

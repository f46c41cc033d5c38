//! The complex of cosets whose conjugates (or joins) have infinite common
//! intersection.
//!
//! An `n`-tuple of distinct cosets spans an `(n-1)`-simplex when the
//! intersection of the corresponding conjugates is infinite. The exact
//! builder decides this with product automata; the coarse builder measures
//! the diameter of the common overlap of the `k`-neighbourhoods of joins.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{distances_to, MetricGraph};
use crate::patterns::CosetPattern;
use crate::presentation::Presentation;
use crate::stallings::{bron_kerbosch, CoreGraph, CosetId, CosetKey, SubgroupPredicate};
use crate::word::{words_of_length, Word};

/// Default neighbourhood radius used before intersecting joins.
pub const DEFAULT_COARSE_K: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Coarse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CComplex {
    vertices: Vec<CosetId>,
    /// Sorted vertex-index tuples, closed under taking nonempty subsets.
    simplices: BTreeSet<Vec<usize>>,
    provenance: Provenance,
}

impl CComplex {
    /// Builds the downward closure of the given simplices.
    pub fn from_simplices(vertices: Vec<CosetId>, simplices: impl IntoIterator<Item = Vec<usize>>, provenance: Provenance) -> Result<Self> {
        let mut closed = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::Precondition(format!("simplex uses vertex {v} of {}", vertices.len())));
            }
            close_into(&s, &mut closed);
        }
        Ok(CComplex { vertices, simplices: closed, provenance })
    }

    pub fn vertices(&self) -> &[CosetId] {
        &self.vertices
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.contains(&s)
    }

    /// Simplices in order of size, then lexicographically.
    pub fn simplices_by_size(&self) -> Vec<&Vec<usize>> {
        let mut out: Vec<&Vec<usize>> = self.simplices.iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Simplices not contained in a larger one, sorted.
    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| {
                !(0..self.vertices.len()).any(|v| {
                    if s.binary_search(&v).is_ok() {
                        return false;
                    }
                    let mut t = (*s).clone();
                    t.push(v);
                    t.sort_unstable();
                    self.simplices.contains(&t)
                })
            })
            .cloned()
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1])).collect()
    }

    pub fn vertex_index(&self, c: &CosetId) -> Option<usize> {
        self.vertices.iter().position(|v| v == c)
    }

    /// The subcomplex spanned by the given vertices, reindexed in that order.
    pub fn induced(&self, keep: &[usize]) -> CComplex {
        let map: HashMap<usize, usize> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let simplices = self
            .simplices
            .iter()
            .filter(|s| s.iter().all(|v| map.contains_key(v)))
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|v| map[v]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        CComplex { vertices: keep.iter().map(|&i| self.vertices[i].clone()).collect(), simplices, provenance: self.provenance }
    }

    pub fn stats(&self) -> ComplexStats {
        let top = self.simplices.iter().map(Vec::len).max().unwrap_or(0);
        let n = self.vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in self.edges() {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        adjacency.iter_mut().for_each(|a| a.sort_unstable());
        let present: Vec<usize> = (0..n).filter(|&v| self.simplices.contains(&vec![v])).collect();
        let mut mask = vec![false; n];
        present.iter().for_each(|&v| mask[v] = true);
        let mut clique = Vec::new();
        bron_kerbosch(&adjacency, &mask, &mut Vec::new(), present, Vec::new(), &mut clique);
        ComplexStats {
            max_cell_dimension: top.saturating_sub(1),
            max_clique_size: clique.len(),
            max_simplex_size: top,
            stated_dimension: if top == 0 { 0 } else { top + 1 },
        }
    }

    pub fn export(&self, p: &Presentation) -> ComplexExport {
        ComplexExport {
            provenance: self.provenance,
            vertices: self.vertices.iter().map(|c| p.show(&c.representative)).collect(),
            maximal_simplices: self.maximal_simplices(),
            stats: self.stats(),
        }
    }

    /// Graphviz description of the 1-skeleton.
    pub fn to_dot(&self, p: &Presentation) -> String {
        let mut out = String::from("graph ccomplex {\n");
        for (i, c) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", p.show(&c.representative));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  v{u} -- v{v};");
        }
        out.push_str("}\n");
        out
    }
}

fn close_into(s: &[usize], out: &mut BTreeSet<Vec<usize>>) {
    if !out.insert(s.to_vec()) {
        return;
    }
    if s.len() > 1 {
        for skip in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            close_into(&face, out);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexStats {
    /// Largest simplex cardinality minus one; 0 for the empty complex.
    pub max_cell_dimension: usize,
    pub max_clique_size: usize,
    /// Largest simplex cardinality, i.e. the height seen by the complex.
    pub max_simplex_size: usize,
    /// `max_simplex_size + 1`, the dimension as stated alongside the height;
    /// 0 for the empty complex.
    pub stated_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexExport {
    pub provenance: Provenance,
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<usize>>,
    pub stats: ComplexStats,
}

/// Exact complex on the cosets with a representative of length at most `radius`.
pub fn build_exact(h: &CoreGraph, radius: usize) -> Result<CComplex> {
    let reps: Vec<Word> = (0..=radius).flat_map(|len| words_of_length(h.rank(), len)).collect();
    build_exact_on(h, &reps)
}

/// Exact complex on the cosets of the given representatives. Representatives
/// of the same coset collapse to the first one listed.
pub fn build_exact_on(h: &CoreGraph, representatives: &[Word]) -> Result<CComplex> {
    let s = SubgroupPredicate::Core(h.clone());
    let mut seen: HashMap<CosetKey, ()> = HashMap::new();
    let mut vertices = Vec::new();
    for g in representatives {
        if g.letters().iter().any(|l| l.generator() >= h.rank()) {
            return Err(Error::UnknownGenerator { index: g.letters().iter().map(|l| l.generator()).max().unwrap(), rank: h.rank() });
        }
        if seen.insert(s.coset_key(g), ()).is_none() {
            vertices.push(CosetId { representative: g.clone() });
        }
    }
    if h.is_trivial() {
        return CComplex::from_simplices(vertices, [], Provenance::Exact);
    }
    let conjugates: Vec<CoreGraph> = vertices.par_iter().map(|c| h.conjugate(&c.representative)).collect();
    let n = conjugates.len();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).filter(|&j| !conjugates[i].intersect(&conjugates[j]).is_trivial()).collect())
        .collect();
    let found: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            extend_exact(&conjugates, &adjacency, &mut vec![i], &conjugates[i], &mut out);
            out
        })
        .collect();
    CComplex::from_simplices(vertices, found.into_iter().flatten(), Provenance::Exact)
}

fn extend_exact(conj: &[CoreGraph], adj: &[Vec<usize>], current: &mut Vec<usize>, meet: &CoreGraph, out: &mut Vec<Vec<usize>>) {
    out.push(current.clone());
    let last = *current.last().unwrap();
    for &j in &adj[last] {
        if !current.iter().all(|c| adj[*c].binary_search(&j).is_ok() || *c == last) {
            continue;
        }
        let next = meet.intersect(&conj[j]);
        if !next.is_trivial() {
            current.push(j);
            extend_exact(conj, adj, current, &next, out);
            current.pop();
        }
    }
}

/// Coarse complex: a tuple of members spans a simplex when the common
/// intersection of their closed `k`-neighbourhoods has diameter at least
/// `diameter_threshold`.
pub fn build_coarse(pattern: &CosetPattern, diameter_threshold: u32, k: u32) -> Result<CComplex> {
    let space = &pattern.space;
    let g = space.graph();
    let n = space.len();
    let hoods: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut set = FixedBitSet::with_capacity(g.vertex_count());
            space.neighborhood(i, k).into_iter().for_each(|v| set.insert(v));
            set
        })
        .collect();
    let found: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            if diameter_at_least(g, &hoods[i], diameter_threshold) {
                extend_coarse(g, &hoods, diameter_threshold, &mut vec![i], &hoods[i], &mut out);
            }
            out
        })
        .collect();
    CComplex::from_simplices(pattern.cosets.clone(), found.into_iter().flatten(), Provenance::Coarse)
}

fn extend_coarse<G: MetricGraph + ?Sized>(
    g: &G,
    hoods: &[FixedBitSet],
    threshold: u32,
    current: &mut Vec<usize>,
    meet: &FixedBitSet,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(current.clone());
    let last = *current.last().unwrap();
    for j in last + 1..hoods.len() {
        let mut next = meet.clone();
        next.intersect_with(&hoods[j]);
        if diameter_at_least(g, &next, threshold) {
            current.push(j);
            extend_coarse(g, hoods, threshold, current, &next, out);
            current.pop();
        }
    }
}

/// Largest pairwise distance within the set.
pub fn set_diameter<G: MetricGraph + ?Sized>(g: &G, set: &FixedBitSet) -> u32 {
    let verts: Vec<usize> = set.ones().collect();
    let mut best = 0;
    for (i, &x) in verts.iter().enumerate() {
        best = distances_to(g, x, &verts[i + 1..]).into_iter().fold(best, u32::max);
    }
    best
}

fn diameter_at_least<G: MetricGraph + ?Sized>(g: &G, set: &FixedBitSet, t: u32) -> bool {
    if set.count_ones(..) == 0 {
        return false;
    }
    if t == 0 {
        return true;
    }
    let verts: Vec<usize> = set.ones().collect();
    verts.iter().enumerate().any(|(i, &x)| distances_to(g, x, &verts[i + 1..]).into_iter().any(|d| d >= t))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A simplex of the first complex whose image is not a simplex.
    MissingImage,
    /// A simplex of the second complex whose preimage is not a simplex.
    MissingPreimage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Vertex indices in the complex the simplex belongs to.
    pub simplex: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsomorphismCheck {
    pub isomorphic: bool,
    pub first_violation: Option<Violation>,
}

/// Whether the vertex bijection `phi` (index in `c1` to index in `c2`) maps
/// the simplices of `c1` onto those of `c2`. Simplices are checked by size,
/// then lexicographically; the first failure is reported.
pub fn isomorphic_under(phi: &[usize], c1: &CComplex, c2: &CComplex) -> Result<IsomorphismCheck> {
    let n = c1.vertices.len();
    if phi.len() != n || c2.vertices.len() != n {
        return Err(Error::NotBijective(format!("{} images for {n} and {} vertices", phi.len(), c2.vertices.len())));
    }
    let mut inverse = vec![usize::MAX; n];
    for (i, &j) in phi.iter().enumerate() {
        if j >= n || inverse[j] != usize::MAX {
            return Err(Error::NotBijective(format!("vertex {j} is hit twice or out of range")));
        }
        inverse[j] = i;
    }
    let image = |s: &[usize], map: &[usize]| {
        let mut t: Vec<usize> = s.iter().map(|&v| map[v]).collect();
        t.sort_unstable();
        t
    };
    let forward = c1.simplices_by_size().into_iter().find(|s| !c2.simplices.contains(&image(s, phi)));
    let backward = c2.simplices_by_size().into_iter().find(|s| !c1.simplices.contains(&image(s, &inverse)));
    let first_violation = match (forward, backward) {
        (Some(s), Some(t)) if t.len() < s.len() => Some(Violation { kind: ViolationKind::MissingPreimage, simplex: t.clone() }),
        (Some(s), _) => Some(Violation { kind: ViolationKind::MissingImage, simplex: s.clone() }),
        (None, Some(t)) => Some(Violation { kind: ViolationKind::MissingPreimage, simplex: t.clone() }),
        (None, None) => None,
    };
    Ok(IsomorphismCheck { isomorphic: first_violation.is_none(), first_violation })
}

/// The pairing `gH ↦ tgH` between complexes built on representatives `reps`
/// and on `t·reps`, as a vertex map.
pub fn translation_pairing(h: &CoreGraph, c1: &CComplex, c2: &CComplex, t: &Word) -> Result<Vec<usize>> {
    let s = SubgroupPredicate::Core(h.clone());
    let keys: HashMap<CosetKey, usize> =
        c2.vertices.iter().enumerate().map(|(j, c)| (s.coset_key(&c.representative), j)).collect();
    c1.vertices
        .iter()
        .map(|c| {
            let key = s.coset_key(&t.mul(&c.representative));
            keys.get(&key).copied().ok_or_else(|| Error::NotBijective("translated coset missing from target".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::CayleyBall;
    use crate::patterns::default_far_pair_threshold;
    use std::sync::Arc;

    fn core(words: &[&str]) -> CoreGraph {
        let p = Presentation::free(2);
        let ws: Vec<Word> = words.iter().map(|w| p.parse_word(w).unwrap()).collect();
        CoreGraph::fold(2, &ws).unwrap()
    }

    #[test]
    fn malnormal_cyclic_has_no_edges() {
        let c = build_exact(&core(&["a"]), 3).unwrap();
        assert!(c.edges().is_empty());
        let st = c.stats();
        assert_eq!((st.max_cell_dimension, st.max_clique_size), (0, 1));
    }

    #[test]
    fn square_subgroup_pairs_cosets() {
        let c = build_exact(&core(&["a^2"]), 3).unwrap();
        let p = Presentation::free(2);
        let one = c.vertex_index(&CosetId { representative: Word::identity() }).unwrap();
        let a = c.vertex_index(&CosetId { representative: p.parse_word("a").unwrap() }).unwrap();
        assert!(c.contains(&[one, a]));
        let mut degree = vec![0; c.vertices().len()];
        for (u, v) in c.edges() {
            degree[u] += 1;
            degree[v] += 1;
        }
        assert!(degree.iter().all(|&d| d <= 1));
        let st = c.stats();
        assert_eq!((st.max_cell_dimension, st.max_clique_size, st.stated_dimension), (1, 2, 3));
    }

    #[test]
    fn radius_zero_has_one_vertex() {
        let c = build_exact(&core(&["a"]), 0).unwrap();
        assert_eq!(c.vertices().len(), 1);
        assert_eq!(c.simplices().count(), 1);
    }

    #[test]
    fn empty_complex_stats() {
        let c = CComplex::from_simplices(vec![], [], Provenance::Exact).unwrap();
        let st = c.stats();
        assert_eq!((st.max_cell_dimension, st.max_clique_size), (0, 0));
    }

    #[test]
    fn downward_closure() {
        let v = (0..3).map(|_| CosetId { representative: Word::identity() }).collect();
        let c = CComplex::from_simplices(v, [vec![2, 0, 1]], Provenance::Coarse).unwrap();
        assert_eq!(c.simplices().count(), 7);
        assert_eq!(c.maximal_simplices(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn identity_pairing_and_bijectivity() {
        let c = build_exact(&core(&["a^2"]), 2).unwrap();
        let id: Vec<usize> = (0..c.vertices().len()).collect();
        assert!(isomorphic_under(&id, &c, &c).unwrap().isomorphic);
        let mut bad = id.clone();
        bad[1] = 0;
        assert!(matches!(isomorphic_under(&bad, &c, &c), Err(Error::NotBijective(_))));
    }

    #[test]
    fn coarse_matches_exact_for_cyclic() {
        let h = core(&["a"]);
        let ball = Arc::new(CayleyBall::generate(&Presentation::free(2), 7).unwrap());
        let pat = CosetPattern::build(ball, &SubgroupPredicate::Core(h.clone()), default_far_pair_threshold(7)).unwrap();
        let window = pat.restrict(|i| pat.cosets[i].representative.len() <= 2).unwrap();
        let coarse = build_coarse(&window, 4, DEFAULT_COARSE_K).unwrap();
        let exact = build_exact(&h, 2).unwrap();
        assert_eq!(coarse.vertices(), exact.vertices());
        assert_eq!(coarse.simplices, exact.simplices);
    }

    #[test]
    fn dot_lists_edges() {
        let c = build_exact(&core(&["a^2"]), 1).unwrap();
        let dot = c.to_dot(&Presentation::free(2));
        assert!(dot.contains(" -- "));
        assert!(dot.starts_with("graph ccomplex {"));
    }
}

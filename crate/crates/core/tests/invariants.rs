use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use proptest::prelude::*;

use coarsekit::boundary::*;
use coarsekit::cayley::CayleyBall;
use coarsekit::ccomplex::{CComplex, Provenance};
use coarsekit::envelope::{fit_linear, fit_qi, monotone_envelope};
use coarsekit::metric::{FiniteGraph, MetricGraph};
use coarsekit::patterns::{default_far_pair_threshold, grid_lines, CosetPattern};
use coarsekit::presentation::Presentation;
use coarsekit::rigidity::{construct_q, meeting_ball_of_sets, Pairing, QOptions};
use coarsekit::stallings::{enumerate_cosets, CoreGraph, CosetId, SubgroupPredicate};
use coarsekit::word::Word;

fn small_model() -> &'static BoundaryModel {
    static M: OnceLock<BoundaryModel> = OnceLock::new();
    M.get_or_init(|| BoundaryModel::new(2, 3).unwrap())
}

fn shadow_setup() -> &'static (BoundaryModel, AnnulusSystem) {
    static S: OnceLock<(BoundaryModel, AnnulusSystem)> = OnceLock::new();
    S.get_or_init(|| {
        let m = BoundaryModel::new(2, 5).unwrap();
        let ball = CayleyBall::generate(&Presentation::free(2), 5).unwrap();
        let sys = shadow_annuli(&ball, &m, &[1, 2, 3]).unwrap();
        (m, sys)
    })
}

fn closed(model: &BoundaryModel, raw: Vec<usize>) -> ClosedSet {
    let n = model.len();
    ClosedSet::new(model, raw.into_iter().map(|i| i % n).collect()).unwrap()
}

fn point_set() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..10_000, 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_is_a_metric(a in point_set(), b in point_set(), c in point_set()) {
        let m = small_model();
        let (a, b, c) = (closed(m, a), closed(m, b), closed(m, c));
        let d = |x: &ClosedSet, y: &ClosedSet| hausdorff_distance(m, x, y).unwrap();
        prop_assert_eq!(d(&a, &a), Ratio::from_integer(0));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &b) == Ratio::from_integer(0), a == b);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn cross_ratio_is_monotone_and_certified(keep in prop::collection::vec(any::<bool>(), 64), k in point_set(), l in point_set()) {
        let (m, sys) = shadow_setup();
        let (k, l) = (closed(m, k), closed(m, l));
        let part: Vec<Annulus> = sys.annuli().iter().zip(keep.iter().cycle()).filter(|(_, &b)| b).map(|(a, _)| a.clone()).collect();
        let sub = AnnulusSystem::new(m, part, true).unwrap();
        let small = cross_ratio(&k, &l, &sub).unwrap();
        let big = cross_ratio(&k, &l, sys).unwrap();
        prop_assert!(small.value <= big.value);
        prop_assert!(verify_chain(m, &k, &l, sys, &big.chain).unwrap());
        prop_assert_eq!(big.chain.len() as u64, big.value.finite().unwrap());
        if k.intersects(&l) {
            prop_assert_eq!(big.value, CrossRatio::Finite(0));
        }
    }

    #[test]
    fn simplices_are_downward_closed(raw in prop::collection::vec(prop::collection::vec(0usize..6, 1..5), 0..5)) {
        let vertices = (0..6).map(|_| CosetId { representative: Word::identity() }).collect();
        let c = CComplex::from_simplices(vertices, raw, Provenance::Coarse).unwrap();
        let all: BTreeSet<Vec<usize>> = c.simplices().cloned().collect();
        for s in &all {
            for skip in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                prop_assert!(face.is_empty() || all.contains(&face));
            }
        }
    }

    #[test]
    fn meeting_ball_is_minimal(sets in prop::collection::vec(prop::collection::vec(0usize..121, 1..4), 1..5)) {
        let g = FiniteGraph::grid(5);
        let refs: Vec<&[usize]> = sets.iter().map(Vec::as_slice).collect();
        let got = meeting_ball_of_sets(&g, &refs).unwrap();
        let score = |v: usize| sets.iter().map(|s| s.iter().map(|&x| g.distance(v, x)).min().unwrap()).max().unwrap();
        let best = (0..g.vertex_count()).map(score).min().unwrap();
        prop_assert_eq!(got.radius, best);
        prop_assert_eq!(got.ties, (0..g.vertex_count()).filter(|&v| score(v) == best).collect::<Vec<_>>());
    }

    #[test]
    fn q_ties_stay_within_discrepancy(priority in prop::collection::vec(0u32..1000, 221)) {
        let p = grid_lines(5, 2).unwrap();
        let phi = Pairing::identity(p.len());
        let base = QOptions { k: 2, target_width: 1, ..Default::default() };
        let q = construct_q(&p, &p, &phi, &base).unwrap();
        let again = construct_q(&p, &p, &phi, &base).unwrap();
        prop_assert_eq!(&q, &again);
        let ranked = construct_q(&p, &p, &phi, &QOptions { priority: Some(priority[..p.graph().vertex_count()].to_vec()), ..base }).unwrap();
        for g in q.domain() {
            prop_assert!(p.graph().distance(q.images[g].unwrap(), ranked.images[g].unwrap()) <= q.discrepancy);
        }
    }

    #[test]
    fn fits_envelope_their_samples(samples in prop::collection::vec((0u64..50, 0u64..50), 1..20)) {
        let qi = fit_qi(&samples, 1);
        let lin = fit_linear(&samples);
        for &(x, y) in &samples {
            let (x, y) = (Ratio::from_integer(x as i64), Ratio::from_integer(y as i64));
            prop_assert!(y <= qi.lambda * x + qi.epsilon && x / qi.lambda - qi.epsilon <= y);
            prop_assert!(x <= lin.a * y + lin.b && y <= lin.a * x + lin.b);
        }
        let env = monotone_envelope(&samples);
        prop_assert!(env.windows(2).all(|w| w[0].1 <= w[1].1));
        prop_assert!(samples.iter().all(|&(x, y)| env[x as usize].1 >= y));
    }
}

#[test]
fn axis_translates_stay_discrete_when_deepening() {
    let p = Presentation::free(2);
    let h = SubgroupPredicate::Core(CoreGraph::fold(2, &[p.parse_word("a").unwrap()]).unwrap());
    let cosets = enumerate_cosets(&h, &CayleyBall::generate(&p, 3).unwrap()).unwrap();
    for depth in 5..=8 {
        let m = BoundaryModel::new(2, depth).unwrap();
        let sets: Vec<ClosedSet> = cosets.iter().map(|c| limit_set_approx(&m, &h, c).unwrap()).collect();
        let r = discrete_in_cc0(&m, &sets, Ratio::new(1, 1 << depth)).unwrap();
        assert!(r.discrete, "depth {depth}");
    }
}

#[test]
fn kernel_limit_sets_are_everything() {
    let m = BoundaryModel::new(2, 3).unwrap();
    let s = SubgroupPredicate::AbelianizationKernel { rank: 2 };
    let set = limit_set_approx(&m, &s, &CosetId { representative: Word::identity() }).unwrap();
    assert_eq!(set.len(), m.len());
}

#[test]
fn axis_joins_stay_in_their_coset() {
    let p = Presentation::free(2);
    let ball = Arc::new(CayleyBall::generate(&p, 5).unwrap());
    let h = SubgroupPredicate::Core(CoreGraph::fold(2, &[p.parse_word("a").unwrap()]).unwrap());
    let pat = CosetPattern::build(ball.clone(), &h, default_far_pair_threshold(5)).unwrap();
    for (i, c) in pat.cosets.iter().enumerate() {
        let key = h.coset_key(&c.representative);
        assert!(pat.space.member(i).iter().all(|&v| h.coset_key(ball.word(v)) == key), "{}", ball.presentation().show(&c.representative));
    }
}

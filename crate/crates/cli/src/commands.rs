//! One function per subcommand. Each resolves its inputs, fixes the run
//! manifest, computes, and writes its artifacts.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;

use coarsekit::boundary::{
    cross_ratio, discrete_in_cc0, limit_set_approx, shadow_annuli, verify_chain, AnnulusSystem, BoundaryModel, ClosedSet,
    CrossRatio, DiscretenessReport,
};
use coarsekit::cayley::{estimate_delta, BallOptions, CayleyBall, DeltaEstimate};
use coarsekit::ccomplex::{build_coarse, build_exact, build_exact_on, isomorphic_under, translation_pairing, ComplexExport, IsomorphismCheck};
use coarsekit::frozen::frozen;
use coarsekit::metric::MetricGraph;
use coarsekit::patterns::{
    default_far_pair_threshold, discreteness_profile, grid_lines, max_projection_diameter, translate_family, CosetPattern,
    PatternSpace, ProfileEntry, ProfileOptions,
};
use coarsekit::pipeline::{self_pairing_report, PipelineOptions};
use coarsekit::presentation::Presentation;
use coarsekit::rigidity::{
    all_pairs, check_axioms, construct_q, distance_to_reference, minimal_meeting_ball, round_trip_distance, verify_qi,
    verify_uniform_properness, AxiomOptions, AxiomReport, Pairing, PropernessReport, QOptions, QiOptions, QiReport,
};
use coarsekit::stallings::{enumerate_cosets, width, ConjugateScan, CoreGraphData, ScanOptions, ScanResult, SubgroupPredicate};
use coarsekit::word::{words_of_length, Letter, Word};

use crate::input::{closed_set, words, Inputs};
use crate::output::Output;
use crate::{AxiomsArgs, BallArgs, BoundaryArgs, CcxArgs, CcxMode, Failure, PatternArgs, ReportArgs, RigidityArgs, SubgroupArgs};

type Written = Result<Vec<PathBuf>, Failure>;

#[derive(Serialize)]
struct BallVertex {
    word: String,
    length: u32,
}

#[derive(Serialize)]
struct BallOut {
    presentation: String,
    radius: usize,
    vertex_count: usize,
    edge_count: usize,
    vertices: Vec<BallVertex>,
    /// `(v, v·g, g)` for positive generators `g`.
    edges: Vec<(usize, usize, usize)>,
    delta: Option<DeltaEstimate>,
}

pub fn ball(a: &BallArgs, out: &Output) -> Written {
    let mut inputs = Inputs::default();
    let p = match &a.presentation {
        Some(path) => Presentation::parse(&inputs.read(path)?)?,
        None if a.rank == 0 => return Err(Failure::Usage("--rank must be at least 1".into())),
        None => Presentation::free(a.rank),
    };
    let mut opts = BallOptions::default();
    if let Some(cap) = a.vertex_cap {
        opts.vertex_cap = cap;
    }
    let ball = CayleyBall::generate_with(&p, a.radius, &opts)?;
    let delta = a.delta.then(|| estimate_delta(&ball, a.delta_samples, a.seed));
    let seeds = if a.delta { vec![a.seed] } else { Vec::new() };
    let manifest = out.start("ball", a, inputs.digests, seeds);
    let edges = ball.edges();
    let result = BallOut {
        presentation: p.to_text(),
        radius: a.radius,
        vertex_count: ball.len(),
        edge_count: edges.len(),
        vertices: (0..ball.len()).map(|v| BallVertex { word: ball.show(v), length: ball.length(v) }).collect(),
        edges,
        delta,
    };
    Ok(vec![out.json(&manifest, "ball.json", &result)?])
}

#[derive(Serialize)]
struct ScanOut {
    value: usize,
    certificate: Vec<String>,
    radius: usize,
    profile: Vec<usize>,
    stable: bool,
}

impl ScanOut {
    fn new(p: &Presentation, r: ScanResult) -> Self {
        ScanOut {
            value: r.value,
            certificate: r.certificate.iter().map(|w| p.show(w)).collect(),
            radius: r.radius,
            profile: r.profile,
            stable: r.stable,
        }
    }
}

#[derive(Serialize)]
struct MalnormalOut {
    malnormal: bool,
    witness: Option<String>,
}

#[derive(Serialize)]
struct Membership {
    word: String,
    contains: bool,
}

#[derive(Serialize)]
struct SubgroupOut {
    rank: usize,
    kind: &'static str,
    core: Option<CoreGraphData>,
    basis: Vec<String>,
    height: Option<ScanOut>,
    width: Option<ScanOut>,
    malnormal: Option<MalnormalOut>,
    membership: Vec<Membership>,
}

pub fn subgroup(a: &SubgroupArgs, out: &Output) -> Written {
    let mut inputs = Inputs::default();
    let s = a.subgroup.resolve(&mut inputs)?;
    let p = a.subgroup.presentation();
    let tests = words(&p, &a.contains)?;
    let manifest = out.start("subgroup", a, inputs.digests, Vec::new());
    let membership = tests.iter().map(|w| Membership { word: p.show(w), contains: s.contains(w) }).collect();
    let result = match s.core() {
        Some(h) => {
            let scan = ConjugateScan::new(h, &ScanOptions::radius(a.conjugator_radius));
            let mal = scan.malnormal();
            SubgroupOut {
                rank: h.rank(),
                kind: "core",
                core: Some(h.to_data()),
                basis: h.basis().iter().map(|w| p.show(w)).collect(),
                height: Some(ScanOut::new(&p, scan.height())),
                width: Some(ScanOut::new(&p, scan.width())),
                malnormal: Some(MalnormalOut { malnormal: mal.malnormal, witness: mal.witness.map(|w| p.show(&w)) }),
                membership,
            }
        }
        None => SubgroupOut {
            rank: s.rank(),
            kind: "abelianization_kernel",
            core: None,
            basis: Vec::new(),
            height: None,
            width: None,
            malnormal: None,
            membership,
        },
    };
    Ok(vec![out.json(&manifest, "subgroup.json", &result)?])
}

#[derive(Serialize)]
struct CosetOut {
    index: usize,
    representative: String,
    vertices: Vec<usize>,
    degenerate: bool,
    #[serde(with = "coarsekit::exact::option")]
    min_basepoint_product: Option<Ratio<i64>>,
}

#[derive(Serialize)]
struct ProjectionOut {
    max_diameter: u32,
    pair: Option<(String, String)>,
    joins: usize,
}

#[derive(Serialize)]
struct PatternOut {
    radius: usize,
    far_pair_threshold: usize,
    coset_count: usize,
    cosets: Vec<CosetOut>,
    projection: Option<ProjectionOut>,
    profile: Option<Vec<ProfileEntry>>,
}

pub fn pattern(a: &PatternArgs, out: &Output) -> Written {
    let mut inputs = Inputs::default();
    let s = a.subgroup.resolve(&mut inputs)?;
    let p = a.subgroup.presentation();
    let manifest = out.start("pattern", a, inputs.digests, Vec::new());
    let ball = Arc::new(CayleyBall::generate(&p, a.radius)?);
    let threshold = a.threshold.unwrap_or_else(|| default_far_pair_threshold(a.radius));
    let pat = CosetPattern::build(ball.clone(), &s, threshold)?;
    let listed: Vec<usize> =
        (0..pat.cosets.len()).filter(|&i| a.window.is_none_or(|w| pat.cosets[i].representative.len() <= w)).collect();
    let projection = a.projection.then(|| {
        let idx: Vec<usize> = listed.iter().copied().filter(|&i| !pat.joins[i].degenerate).collect();
        let sets: Vec<Vec<usize>> = idx.iter().map(|&i| pat.joins[i].vertices.clone()).collect();
        let (max_diameter, pair) = max_projection_diameter(&*ball, &sets);
        let name = |i: usize| p.show(&pat.cosets[idx[i]].representative);
        ProjectionOut { max_diameter, pair: pair.map(|(i, j)| (name(i), name(j))), joins: idx.len() }
    });
    let profile = if a.profile_radii.is_empty() {
        None
    } else {
        Some(discreteness_profile(&s, a.profile_n, &a.profile_radii, &ProfileOptions::default())?)
    };
    let result = PatternOut {
        radius: a.radius,
        far_pair_threshold: threshold,
        coset_count: pat.cosets.len(),
        cosets: listed
            .iter()
            .map(|&i| {
                let j = &pat.joins[i];
                CosetOut {
                    index: i,
                    representative: p.show(&pat.cosets[i].representative),
                    vertices: j.vertices.clone(),
                    degenerate: j.degenerate,
                    min_basepoint_product: j.min_basepoint_product,
                }
            })
            .collect(),
        projection,
        profile,
    };
    Ok(vec![out.json(&manifest, "pattern.json", &result)?])
}

#[derive(Serialize)]
struct TranslationOut {
    word: String,
    /// Vertex `i` maps to vertex `pairing[i]` of the complex on translated representatives.
    pairing: Vec<usize>,
    check: IsomorphismCheck,
}

#[derive(Serialize)]
struct CcxOut {
    mode: CcxMode,
    window: usize,
    complex: ComplexExport,
    translation: Option<TranslationOut>,
}

pub fn ccx(a: &CcxArgs, out: &Output) -> Written {
    let f = &frozen().ccomplex;
    let mut inputs = Inputs::default();
    let s = a.subgroup.resolve(&mut inputs)?;
    let p = a.subgroup.presentation();
    let window = a.window.unwrap_or(f.window);
    if a.translate.is_some() && a.mode != CcxMode::Exact {
        return Err(Failure::Usage("--translate needs --mode exact".into()));
    }
    let translate = a.translate.as_ref().map(|t| p.parse_word(t)).transpose()?;
    let manifest = out.start("ccx", a, inputs.digests, Vec::new());
    let complex = match a.mode {
        CcxMode::Exact => {
            let h = s.core().ok_or_else(|| Failure::Domain("the exact builder needs a finitely generated subgroup".into()))?;
            build_exact(h, window)?
        }
        CcxMode::Coarse => {
            let radius = a.radius.unwrap_or(f.radius);
            let ball = Arc::new(CayleyBall::generate(&p, radius)?);
            let pat = CosetPattern::build(ball, &s, default_far_pair_threshold(radius))?;
            let shared = pat.restrict(|i| pat.cosets[i].representative.len() <= window)?;
            build_coarse(&shared, a.threshold.unwrap_or(f.threshold), a.k.unwrap_or(f.k))?
        }
    };
    let translation = match (&translate, s.core()) {
        (Some(t), Some(h)) => {
            let reps: Vec<Word> = (0..=window).flat_map(|l| words_of_length(h.rank(), l)).collect();
            let moved: Vec<Word> = reps.iter().map(|g| t.mul(g)).collect();
            let target = build_exact_on(h, &moved)?;
            let pairing = translation_pairing(h, &complex, &target, t)?;
            let check = isomorphic_under(&pairing, &complex, &target)?;
            Some(TranslationOut { word: p.show(t), pairing, check })
        }
        _ => None,
    };
    let dot = complex.to_dot(&p);
    let result = CcxOut { mode: a.mode, window, complex: complex.export(&p), translation };
    Ok(vec![out.json(&manifest, "ccx.json", &result)?, out.dot(&manifest, "ccx.dot", &dot)?])
}

#[derive(Serialize)]
struct PairingOut {
    translate: String,
    swapped: Option<(usize, usize)>,
    map: Vec<usize>,
}

#[derive(Serialize)]
struct QOut {
    k: u32,
    target_width: usize,
    domain: usize,
    discrepancy: u32,
    /// `sup d(q(g), t·g)` over the domain.
    constant: Option<u32>,
    /// `sup d(q'(q(g)), g)` for the backward map `q'`.
    round_trip: Option<u32>,
}

#[derive(Serialize)]
struct MeetingOut {
    members: Vec<usize>,
    center: String,
    radius: u32,
    ties: Vec<String>,
}

#[derive(Serialize)]
struct RigidityOut {
    radius: usize,
    members: usize,
    pairing: PairingOut,
    properness: PropernessReport,
    q: QOut,
    qi: QiReport,
    meeting_ball: Option<MeetingOut>,
}

pub fn rigidity(a: &RigidityArgs, out: &Output) -> Written {
    let f = &frozen().q_map;
    let mut inputs = Inputs::default();
    let s = a.subgroup.resolve(&mut inputs)?;
    let p = a.subgroup.presentation();
    let t = match &a.translate {
        Some(text) => p.parse_word(text)?,
        None => Word::identity(),
    };
    let target_width = match (a.target_width, s.core()) {
        (Some(w), _) => w,
        (None, Some(h)) => width(h, &ScanOptions::radius(a.scan_radius)).value,
        (None, None) => return Err(Failure::Usage("give --target-width for the kernel".into())),
    };
    let manifest = out.start("rigidity", a, inputs.digests, Vec::new());
    let radius = a.radius.unwrap_or(f.radius);
    let k = a.k.unwrap_or(f.k);

    let ball = Arc::new(CayleyBall::generate(&p, radius)?);
    let pat = CosetPattern::build(ball.clone(), &s, default_far_pair_threshold(radius))?;
    let sp = &pat.space;
    let big = Arc::new(CayleyBall::generate(&p, radius + t.len())?);
    let moved = PatternSpace::new(big.clone(), translate_family(&ball, &t, &big, sp.family())?, sp.labels().to_vec())?;
    let swapped = match a.swap.as_deref() {
        Some(&[i, j]) if i.max(j) < sp.len() => Some((i, j)),
        Some(_) => return Err(Failure::Domain(format!("--swap takes two indices below {}", sp.len()))),
        None => None,
    };
    let phi = match swapped {
        Some((i, j)) => Pairing::identity(sp.len()).swapped(i, j),
        None => Pairing::identity(sp.len()),
    };

    let properness = verify_uniform_properness(sp, &moved, &phi, &all_pairs(sp.len()), &Default::default())?;
    let opts = QOptions { k, target_width, ..Default::default() };
    let q = construct_q(sp, &moved, &phi, &opts)?;
    let constant = distance_to_reference(&q, &*big, |v| big.translate(&t, v));
    let back = construct_q(&moved, sp, &phi.inverse(), &QOptions { domain: Some(q.image_set()), ..opts.clone() })?;
    let round_trip = round_trip_distance(&q, &back, &*ball);
    let domain = q.domain();
    let pairs: Vec<(usize, usize)> = all_pairs(domain.len()).into_iter().map(|(i, j)| (domain[i], domain[j])).collect();
    let qi = verify_qi(&q, sp, &moved, &phi, &pairs, &QiOptions::default())?;
    let meeting_ball = if a.meet.is_empty() {
        None
    } else {
        let m = minimal_meeting_ball(sp, &a.meet)?;
        Some(MeetingOut {
            members: a.meet.clone(),
            center: ball.show(m.center),
            radius: m.radius,
            ties: m.ties.iter().map(|&v| ball.show(v)).collect(),
        })
    };
    let result = RigidityOut {
        radius,
        members: sp.len(),
        pairing: PairingOut { translate: p.show(&t), swapped, map: phi.as_slice().to_vec() },
        properness,
        q: QOut { k, target_width, domain: domain.len(), discrepancy: q.discrepancy, constant, round_trip },
        qi,
        meeting_ball,
    };
    Ok(vec![out.json(&manifest, "rigidity.json", &result)?])
}

/// Shortest prefixes whose cylinders tile `set`; `"1"` is the whole model.
fn cover(model: &BoundaryModel, p: &Presentation, set: &ClosedSet) -> Vec<String> {
    let depth = model.depth();
    let branch = (2 * model.rank() - 1) as u64;
    let cylinder = |m: usize| if m == 0 { model.len() as u64 } else { branch.pow((depth - m) as u32) };
    let mut counts: HashMap<&[Letter], u64> = HashMap::new();
    for w in set.words(model) {
        for m in 0..=depth {
            *counts.entry(&w.letters()[..m]).or_default() += 1;
        }
    }
    let full = |u: &[Letter]| counts.get(u).is_some_and(|&c| c == cylinder(u.len()));
    let mut out: Vec<Word> = counts
        .keys()
        .filter(|u| full(u) && (u.is_empty() || !full(&u[..u.len() - 1])))
        .map(|u| Word::reduce(u.iter().copied()))
        .collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.letters().cmp(y.letters())));
    out.iter().map(|w| p.show(w)).collect()
}

#[derive(Serialize)]
struct AnnulusOut {
    minus: Vec<String>,
    plus: Vec<String>,
}

#[derive(Serialize)]
struct CrossRatioOut {
    k: Vec<String>,
    l: Vec<String>,
    value: CrossRatio,
    chain: Vec<AnnulusOut>,
    certified: bool,
}

#[derive(Serialize)]
struct LimitSetOut {
    representative: String,
    points: usize,
    cover: Vec<String>,
}

#[derive(Serialize)]
struct LimitSetsOut {
    window: usize,
    sets: Vec<LimitSetOut>,
    #[serde(with = "coarsekit::exact")]
    separation: Ratio<i64>,
    discreteness: DiscretenessReport,
}

#[derive(Serialize)]
struct BoundaryOut {
    rank: usize,
    depth: usize,
    points: usize,
    shadows: Vec<u32>,
    annuli: usize,
    cross_ratio: Option<CrossRatioOut>,
    limit_sets: Option<LimitSetsOut>,
}

pub fn boundary(a: &BoundaryArgs, out: &Output) -> Written {
    let f = &frozen().crossratio;
    if a.rank == 0 {
        return Err(Failure::Usage("--rank must be at least 1".into()));
    }
    let p = Presentation::free(a.rank);
    let depth = a.depth.unwrap_or(f.depth);
    let model = BoundaryModel::new(a.rank, depth)?;
    let mut inputs = Inputs::default();
    let sets = match &a.crossratio {
        Some(files) => Some((closed_set(&mut inputs, &files[0], &p, &model)?, closed_set(&mut inputs, &files[1], &p, &model)?)),
        None => None,
    };
    let subgroup = if a.kernel {
        Some(SubgroupPredicate::AbelianizationKernel { rank: a.rank })
    } else if a.generators.is_empty() {
        None
    } else {
        Some(SubgroupPredicate::Core(coarsekit::stallings::CoreGraph::fold(a.rank, &words(&p, &a.generators)?)?))
    };
    let manifest = out.start("boundary", a, inputs.digests, Vec::new());

    let sys = if a.shadows.is_empty() {
        AnnulusSystem::empty(&model)
    } else {
        let ball = CayleyBall::generate(&p, a.shadow_ball_radius.unwrap_or(f.shadow_ball_radius))?;
        shadow_annuli(&ball, &model, &a.shadows)?
    };
    let cross_ratio = match &sets {
        Some((k, l)) => {
            let r = cross_ratio(k, l, &sys)?;
            let certified = verify_chain(&model, k, l, &sys, &r.chain)?;
            let chain = r
                .chain
                .iter()
                .map(|&i| {
                    let an = &sys.annuli()[i];
                    AnnulusOut { minus: cover(&model, &p, an.minus()), plus: cover(&model, &p, an.plus()) }
                })
                .collect();
            Some(CrossRatioOut { k: cover(&model, &p, k), l: cover(&model, &p, l), value: r.value, chain, certified })
        }
        None => None,
    };
    let limit_sets = match &subgroup {
        Some(s) => {
            let cosets = enumerate_cosets(s, &CayleyBall::generate(&p, a.window)?)?;
            let sets: Vec<ClosedSet> = cosets.iter().map(|c| limit_set_approx(&model, s, c)).collect::<Result<_, _>>()?;
            let separation = Ratio::new(1, 1i64 << depth.min(62));
            let discreteness = discrete_in_cc0(&model, &sets, separation)?;
            Some(LimitSetsOut {
                window: a.window,
                sets: cosets
                    .iter()
                    .zip(&sets)
                    .map(|(c, set)| LimitSetOut {
                        representative: p.show(&c.representative),
                        points: set.len(),
                        cover: cover(&model, &p, set),
                    })
                    .collect(),
                separation,
                discreteness,
            })
        }
        None => None,
    };
    let result = BoundaryOut {
        rank: a.rank,
        depth,
        points: model.len(),
        shadows: a.shadows.clone(),
        annuli: sys.len(),
        cross_ratio,
        limit_sets,
    };
    Ok(vec![out.json(&manifest, "boundary.json", &result)?])
}

#[derive(Serialize)]
struct AxiomsOut {
    source: String,
    labels: Vec<String>,
    report: AxiomReport,
}

fn axioms_on<G: MetricGraph>(space: PatternSpace<G>, a: &AxiomsArgs, source: String) -> Result<AxiomsOut, Failure> {
    let space = match a.duplicate {
        Some(i) if i >= space.len() => return Err(Failure::Domain(format!("--duplicate index must be below {}", space.len()))),
        Some(i) => {
            let mut family = space.family().to_vec();
            family.push(family[i].clone());
            let mut labels = space.labels().to_vec();
            labels.push(format!("{} (copy)", labels[i]));
            let mut flags: Vec<bool> = (0..space.len()).map(|j| space.is_degenerate(j)).collect();
            flags.push(flags[i]);
            PatternSpace::new(space.graph_arc(), family, labels)?.with_degenerate(flags)
        }
        None => space,
    };
    let report = check_axioms(&space, &AxiomOptions { k_grid: a.k_grid.clone(), n_grid: a.n_grid.clone() })?;
    Ok(AxiomsOut { source, labels: space.labels().to_vec(), report })
}

pub fn axioms(a: &AxiomsArgs, out: &Output) -> Written {
    let mut inputs = Inputs::default();
    let result = match a.grid {
        Some(hw) => axioms_on(grid_lines(hw, a.spacing)?, a, format!("grid lines, half-width {hw}, spacing {}", a.spacing))?,
        None => {
            let s = a.subgroup.resolve(&mut inputs)?;
            let p = a.subgroup.presentation();
            let ball = Arc::new(CayleyBall::generate(&p, a.radius)?);
            let pat = CosetPattern::build(ball, &s, default_far_pair_threshold(a.radius))?;
            axioms_on(pat.space, a, format!("coset joins, radius {}", a.radius))?
        }
    };
    let manifest = out.start("axioms", a, inputs.digests, Vec::new());
    Ok(vec![out.json(&manifest, "axioms.json", &result)?])
}

pub fn report(a: &ReportArgs, out: &Output) -> Written {
    let mut inputs = Inputs::default();
    let h = a.subgroup.resolve_core(&mut inputs)?;
    let manifest = out.start("report", a, inputs.digests, Vec::new());
    let opts = PipelineOptions { radius: a.radius, k: a.k, depth: a.depth, window: a.window, scan_radius: a.scan_radius };
    let result = self_pairing_report(&h, &opts)?;
    Ok(vec![out.json(&manifest, "report.json", &result)?])
}

//! End-to-end run on a subgroup paired with itself: limit sets, discreteness,
//! the pairing, the induced map `q` and the coset complexes.

use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::boundary::{discrete_in_cc0, limit_set_approx, BoundaryModel, ClosedSet, DiscretenessReport};
use crate::cayley::CayleyBall;
use crate::ccomplex::{build_exact, isomorphic_under, ComplexStats, IsomorphismCheck};
use crate::error::Result;
use crate::patterns::{default_far_pair_threshold, CosetPattern};
use crate::presentation::Presentation;
use crate::rigidity::{
    all_pairs, construct_q, distance_to_reference, round_trip_distance, verify_qi, verify_uniform_properness, Pairing,
    PropernessReport, QOptions, QiOptions, QiReport,
};
use crate::stallings::{width, CoreGraph, ScanOptions, SubgroupPredicate};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineOptions {
    /// Radius of the Cayley ball carrying the pattern.
    pub radius: usize,
    /// Neighbourhood radius `K` for the map `q`.
    pub k: u32,
    /// Depth of the boundary model.
    pub depth: usize,
    /// Cosets with a representative of at most this length enter the
    /// discreteness check and the complexes.
    pub window: usize,
    /// Conjugator radius for the width used as `w₂`.
    pub scan_radius: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { radius: 6, k: 1, depth: 6, window: 2, scan_radius: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusions {
    /// The pairing is uniformly proper and `q` has a finite `(λ, ε)` fit.
    pub quasi_isometry: bool,
    /// `q` stays within a bounded distance of the reference map and the
    /// back-and-forth composite stays within a bounded distance of the identity.
    pub bounded_distance: bool,
    /// The pairing induces an isomorphism of coset complexes.
    pub complex_isomorphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub options: PipelineOptions,
    pub members: usize,
    pub limit_sets: usize,
    pub discreteness: DiscretenessReport,
    pub target_width: usize,
    pub properness: PropernessReport,
    pub q_domain: usize,
    pub q_discrepancy: u32,
    /// `sup d(q(g), g)` over the domain.
    pub q_constant: Option<u32>,
    pub round_trip: Option<u32>,
    pub qi: QiReport,
    pub complex: ComplexStats,
    pub isomorphism: IsomorphismCheck,
    pub conclusions: Conclusions,
}

/// Runs the whole chain for `H` paired with itself by the identity.
pub fn self_pairing_report(h: &CoreGraph, opts: &PipelineOptions) -> Result<PipelineReport> {
    let p = Presentation::free(h.rank());
    let s = SubgroupPredicate::Core(h.clone());
    let ball = Arc::new(CayleyBall::generate(&p, opts.radius)?);
    let pattern = CosetPattern::build(ball.clone(), &s, default_far_pair_threshold(opts.radius))?;
    let space = &pattern.space;

    let model = BoundaryModel::new(h.rank(), opts.depth)?;
    let limit_sets: Vec<ClosedSet> = pattern
        .cosets
        .iter()
        .filter(|c| c.representative.len() <= opts.window)
        .map(|c| limit_set_approx(&model, &s, c))
        .collect::<Result<_>>()?;
    let discreteness = discrete_in_cc0(&model, &limit_sets, Ratio::new(1, 1i64 << opts.depth.min(62)))?;

    let phi = Pairing::identity(space.len());
    let properness = verify_uniform_properness(space, space, &phi, &all_pairs(space.len()), &Default::default())?;
    let target_width = width(h, &ScanOptions::radius(opts.scan_radius)).value;
    let q = construct_q(space, space, &phi, &QOptions { k: opts.k, target_width, ..Default::default() })?;
    let q_constant = distance_to_reference(&q, &*ball, Some);
    let back = construct_q(
        space,
        space,
        &phi.inverse(),
        &QOptions { k: opts.k, target_width, domain: Some(q.image_set()), ..Default::default() },
    )?;
    let round_trip = round_trip_distance(&q, &back, &*ball);
    let domain = q.domain();
    let pairs: Vec<(usize, usize)> =
        all_pairs(domain.len()).into_iter().map(|(i, j)| (domain[i], domain[j])).collect();
    let qi = verify_qi(&q, space, space, &phi, &pairs, &QiOptions::default())?;

    let complex = build_exact(h, opts.window)?;
    let identity: Vec<usize> = (0..complex.vertices().len()).collect();
    let isomorphism = isomorphic_under(&identity, &complex, &complex)?;

    let conclusions = Conclusions {
        quasi_isometry: !properness.blow_up && !qi.degenerate,
        bounded_distance: q_constant.is_some() && round_trip.is_some(),
        complex_isomorphism: isomorphism.isomorphic,
    };
    Ok(PipelineReport {
        options: opts.clone(),
        members: space.len(),
        limit_sets: limit_sets.len(),
        discreteness,
        target_width,
        properness,
        q_domain: domain.len(),
        q_discrepancy: q.discrepancy,
        q_constant,
        round_trip,
        qi,
        complex: complex.stats(),
        isomorphism,
        conclusions,
    })
}

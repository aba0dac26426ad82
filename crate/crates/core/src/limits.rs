//! Orbit geometry of the Schottky group: counting orbit points in balls,
//! quasi-isometry envelopes, the limit point of `theta_n(o)`, its radial
//! constant, uniform-radial sampling, and bounded subgroup enumeration.
//!
//! Everything here is bounded-depth evidence. Reports say so.

use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::freewords::{
    enumerate_symbol_words, reduce, theta, Letter, Word, WordError, WordFamily,
};
use crate::mobius::{
    dist_coords, orbit_ray_distance, GeodesicRay, GroupElement, MobiusError, Point, BASE_POINT,
};
use crate::par;
use crate::rational::{self, from_f64};
use crate::schottky::{
    nested_disk, verify_ping_pong, word_to_element, Circle, SchottkyData, SchottkyError, Violation,
};

/// Closed balls are tested as `d <= R + BALL_SLACK * max(1, R)` so orbit points
/// exactly on the sphere are not lost to rounding.
pub const BALL_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LimitsError {
    #[error("radius must be positive and finite")]
    InvalidRadius,
    #[error(
        "count {count} within radius {radius} is partial: words longer than {max_length} \
         are only bounded below by {escape_bound}"
    )]
    InconclusiveBound {
        count: usize,
        radius: f64,
        max_length: usize,
        escape_bound: f64,
    },
    #[error("tolerance {tol} not reached after {n_max} prefixes (width {achieved})")]
    ToleranceNotReached {
        tol: f64,
        achieved: f64,
        n_max: usize,
    },
    #[error("nested interval for n = {n} is not inside the previous one")]
    NotNested { n: usize },
    #[error("ping-pong not certified: {0}")]
    NotCertified(#[from] Violation),
    #[error("subgroup generators must be nonempty reduced words")]
    BadGenerators,
    #[error("eta must be a finite boundary point")]
    NotBoundary,
    #[error("non-finite distance at n = {n}")]
    NonFinite { n: usize },
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Schottky(#[from] SchottkyError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
}

impl LimitsError {
    pub fn name(&self) -> &'static str {
        match self {
            LimitsError::InvalidRadius => "InvalidRadius",
            LimitsError::InconclusiveBound { .. } => "InconclusiveBound",
            LimitsError::ToleranceNotReached { .. } => "ToleranceNotReached",
            LimitsError::NotNested { .. } => "NotNested",
            LimitsError::NotCertified(_) => "Violation",
            LimitsError::BadGenerators => "BadGenerators",
            LimitsError::NotBoundary => "NotBoundary",
            LimitsError::NonFinite { .. } => "NonFinite",
            LimitsError::Word(_) => "WordError",
            LimitsError::Schottky(_) => "SchottkyError",
            LimitsError::Mobius(_) => "MobiusError",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitSample {
    pub word: Word,
    pub element: GroupElement,
    pub point: Point,
    pub displacement: f64,
}

/// Every reduced word up to `max_length` with its exact element, in
/// length-then-lexicographic order. Each layer extends the previous one.
pub fn orbit_elements(sd: &SchottkyData, max_length: usize) -> Vec<(Word, GroupElement)> {
    let mut all = vec![(Word::identity(), GroupElement::identity())];
    let mut start = 0;
    for _ in 0..max_length {
        let layer = &all[start..];
        let next = par::flat_map(layer, |(w, g)| {
            Letter::ALL
                .iter()
                .filter(|l| !w.last().is_some_and(|t| t.cancels(**l)))
                .map(|&l| {
                    let mut v = w.clone();
                    v.push(l);
                    (v, g.compose(sd.letter_element(l)))
                })
                .collect()
        });
        start = all.len();
        all.extend(next);
    }
    all
}

pub fn orbit_samples(sd: &SchottkyData, max_length: usize) -> Vec<OrbitSample> {
    let elements = orbit_elements(sd, max_length);
    par::map(&elements, |(word, element)| OrbitSample {
        word: word.clone(),
        element: element.clone(),
        point: element.orbit_point().to_point(),
        displacement: element.displacement(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitCount {
    pub radius: f64,
    pub max_length: usize,
    pub count: usize,
    /// Lower bound on `d(o, g o)` for every word longer than `max_length`.
    pub escape_bound: f64,
    /// `escape_bound` exceeds the radius, so no longer word lands in the ball.
    pub complete: bool,
    /// The fitted quasi-isometry envelope also puts length `max_length + 1`
    /// outside the ball. Empirical, not a certificate.
    pub qi_predicts_complete: bool,
}

impl OrbitCount {
    /// The count, or `InconclusiveBound` when it is only partial.
    pub fn certified(&self) -> Result<usize, LimitsError> {
        if self.complete {
            Ok(self.count)
        } else {
            Err(LimitsError::InconclusiveBound {
                count: self.count,
                radius: self.radius,
                max_length: self.max_length,
                escape_bound: self.escape_bound,
            })
        }
    }
}

fn within(d: f64, radius: f64) -> bool {
    d <= radius + BALL_SLACK * radius.max(1.0)
}

/// Smallest distance from `o` to the nested disks of all reduced words of
/// length `max_length + 1`. Every longer word has one of these as a prefix,
/// so its orbit point lies in that disk.
///
/// `d(o, g D) = d(g^-1 o, D)`, so each parent needs one exact point.
fn escape_bound(sd: &SchottkyData, layer: &[(Word, GroupElement)]) -> f64 {
    let bounds = par::map(layer, |(w, g)| {
        let q = g.inverse().orbit_point();
        Letter::ALL
            .iter()
            .filter(|l| !w.last().is_some_and(|t| t.cancels(**l)))
            .map(|&l| sd.target_disk(l).distance_from(&q).unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min)
    });
    bounds.into_iter().fold(f64::INFINITY, f64::min)
}

/// Number of reduced words `w` with `|w| <= max_length` and
/// `d(o, w o) <= radius`, with a nested-disk certificate that no longer
/// word qualifies.
pub fn count_orbit_in_ball(
    sd: &SchottkyData,
    radius: f64,
    max_length: usize,
) -> Result<OrbitCount, LimitsError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(LimitsError::InvalidRadius);
    }
    let elements = orbit_elements(sd, max_length);
    let displacements = par::map(&elements, |(_, g)| g.displacement());
    let count = displacements.iter().filter(|&&d| within(d, radius)).count();
    let last_layer: Vec<(Word, GroupElement)> = elements
        .iter()
        .filter(|(w, _)| w.len() == max_length)
        .cloned()
        .collect();
    let escape = escape_bound(sd, &last_layer);
    let words: Vec<&Word> = elements.iter().map(|(w, _)| w).collect();
    let qi = fit_envelope(&words, &displacements, max_length);
    let next = (max_length + 1) as f64;
    Ok(OrbitCount {
        radius,
        max_length,
        count,
        escape_bound: escape,
        complete: !within(escape, radius),
        qi_predicts_complete: qi.lower_alpha * next - qi.lower_beta > radius,
    })
}

/// Affine envelopes `alpha |w| - beta <= d(o, w o) <= alpha' |w| + beta'`
/// over all reduced words up to `max_length`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QIEstimate {
    pub lower_alpha: f64,
    pub lower_beta: f64,
    pub upper_alpha: f64,
    pub upper_beta: f64,
    pub max_length: usize,
    pub lower_witness: String,
    pub upper_witness: String,
}

impl QIEstimate {
    pub fn admits(&self, length: usize, displacement: f64) -> bool {
        let k = length as f64;
        let eps = 1e-9 * (1.0 + displacement);
        self.lower_alpha * k - self.lower_beta <= displacement + eps
            && displacement <= self.upper_alpha * k + self.upper_beta + eps
    }
}

/// Slopes are the growth of the per-length minimum (lower) and maximum
/// (upper) between lengths `L/2` and `L`; intercepts are then the smallest
/// values making the envelopes hold on every sample.
fn fit_envelope(words: &[&Word], displacements: &[f64], max_length: usize) -> QIEstimate {
    let mut min_at = vec![f64::INFINITY; max_length + 1];
    let mut max_at = vec![0.0f64; max_length + 1];
    for (w, &d) in words.iter().zip(displacements) {
        min_at[w.len()] = min_at[w.len()].min(d);
        max_at[w.len()] = max_at[w.len()].max(d);
    }
    let slope = |v: &[f64]| {
        if max_length >= 2 {
            let h = max_length / 2;
            (v[max_length] - v[h]) / (max_length - h) as f64
        } else if max_length == 1 {
            v[1]
        } else {
            0.0
        }
    };
    let mut lower_alpha = slope(&min_at);
    if lower_alpha <= 0.0 {
        lower_alpha = (1..=max_length)
            .map(|k| min_at[k] / k as f64)
            .fold(f64::INFINITY, f64::min);
    }
    let upper_alpha = slope(&max_at).max(1e-300);

    let mut lower_beta = 0.0;
    let mut upper_beta = 0.0;
    let mut lower_witness = Word::identity();
    let mut upper_witness = Word::identity();
    for (w, &d) in words.iter().zip(displacements) {
        let k = w.len() as f64;
        let lb = lower_alpha * k - d;
        if lb > lower_beta {
            lower_beta = lb;
            lower_witness = (*w).clone();
        }
        let ub = d - upper_alpha * k;
        if ub > upper_beta {
            upper_beta = ub;
            upper_witness = (*w).clone();
        }
    }
    QIEstimate {
        lower_alpha,
        lower_beta,
        upper_alpha,
        upper_beta,
        max_length,
        lower_witness: lower_witness.to_string(),
        upper_witness: upper_witness.to_string(),
    }
}

/// Fits the quasi-isometry envelope of `w -> w(o)` over all reduced words up
/// to `max_length`.
pub fn qi_check(sd: &SchottkyData, max_length: usize) -> Result<QIEstimate, LimitsError> {
    verify_ping_pong(sd)?;
    let elements = orbit_elements(sd, max_length);
    let displacements = par::map(&elements, |(_, g)| g.displacement());
    let words: Vec<&Word> = elements.iter().map(|(w, _)| w).collect();
    Ok(fit_envelope(&words, &displacements, max_length))
}

/// Extra prefixes used when bracketing `eta` for radial distances: the
/// distance from `theta_n(o)` to `[o, eta]` is only determined once `eta` is
/// pinned inside the nested disk of a longer prefix than `theta_n`.
pub const RADIAL_DEPTH_MARGIN: usize = 2;

/// A boundary point known to lie in the closed interval `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    pub lower: BigRational,
    pub upper: BigRational,
    /// Width of the nested interval after each prefix `theta_1, theta_2, ...`.
    pub widths: Vec<f64>,
    /// First `n` whose interval was narrower than the requested tolerance.
    pub reached_at: Option<usize>,
}

impl LimitPoint {
    pub fn exact(x: BigRational) -> Self {
        LimitPoint {
            lower: x.clone(),
            upper: x,
            widths: vec![],
            reached_at: None,
        }
    }

    pub fn from_point(p: &Point) -> Result<Self, LimitsError> {
        match *p {
            Point::Boundary(x) if x.is_finite() => Ok(LimitPoint::exact(from_f64(x))),
            _ => Err(LimitsError::NotBoundary),
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) * rational::half()
    }

    pub fn point(&self) -> Point {
        Point::Boundary(rational::to_f64(&self.midpoint()))
    }

    pub fn width(&self) -> f64 {
        rational::to_f64(&(&self.upper - &self.lower))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }
}

/// Brackets `eta = lim theta_n(o)` by the nested disks of `theta_1, ...,
/// theta_{n_max}`.
///
/// All `n_max` prefixes are used even after the width drops below `tol`: the
/// radial distances for `theta_n(o)` need `eta` to the depth of `theta_n`,
/// far below any float tolerance.
pub fn estimate_limit_point(
    fam: &WordFamily,
    sd: &SchottkyData,
    n_max: usize,
    tol: f64,
) -> Result<LimitPoint, LimitsError> {
    verify_ping_pong(sd)?;
    let words = (1..=n_max)
        .map(|n| theta(n, fam))
        .collect::<Result<Vec<_>, _>>()?;
    let disks = par::map(&words, |w| nested_disk(w, sd));
    let mut prev: Option<Circle> = None;
    let mut widths = Vec::with_capacity(n_max);
    let mut reached_at = None;
    for (i, disk) in disks.into_iter().enumerate() {
        let disk = disk?;
        if let Some(p) = &prev {
            if !p.strictly_contains(&disk) {
                return Err(LimitsError::NotNested { n: i + 1 });
            }
        }
        let width = 2.0 * disk.radius_f64();
        if reached_at.is_none() && width < tol {
            reached_at = Some(i + 1);
        }
        widths.push(width);
        prev = Some(disk);
    }
    let last = prev.ok_or(LimitsError::ToleranceNotReached {
        tol,
        achieved: f64::INFINITY,
        n_max,
    })?;
    let achieved = 2.0 * last.radius_f64();
    if achieved >= tol {
        return Err(LimitsError::ToleranceNotReached {
            tol,
            achieved,
            n_max,
        });
    }
    Ok(LimitPoint {
        lower: last.lo(),
        upper: last.hi(),
        widths,
        reached_at,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialWitness {
    pub eta: f64,
    pub constant_c: f64,
    pub per_n: Vec<(usize, f64)>,
    pub last_quartile_max: f64,
    pub first_half_max: f64,
    /// `constant_c <= 1.5 * first_half_max`: no visible growth with `n`.
    pub bounded_trend: bool,
}

/// Distances from `theta_n(o)` to the ray `[o, eta]` for `n = 1..=n_max`.
pub fn radial_check(
    eta: &LimitPoint,
    fam: &WordFamily,
    sd: &SchottkyData,
    n_max: usize,
) -> Result<RadialWitness, LimitsError> {
    let elements = (1..=n_max)
        .map(|n| theta(n, fam).map(|w| word_to_element(&w, sd)))
        .collect::<Result<Vec<_>, _>>()?;
    let target = eta.midpoint();
    let distances = par::map(&elements, |g| orbit_ray_distance(g, &target));
    let per_n: Vec<(usize, f64)> = distances
        .into_iter()
        .enumerate()
        .map(|(i, d)| (i + 1, d))
        .collect();
    if let Some(&(n, _)) = per_n.iter().find(|(_, d)| !d.is_finite()) {
        return Err(LimitsError::NonFinite { n });
    }
    let max_over = |pred: &dyn Fn(usize) -> bool| {
        per_n
            .iter()
            .filter(|(n, _)| pred(*n))
            .map(|&(_, d)| d)
            .fold(0.0f64, f64::max)
    };
    let constant_c = max_over(&|_| true);
    let quartile_start = (3 * n_max) / 4 + 1;
    let last_quartile_max = max_over(&|n| n >= quartile_start.min(n_max));
    let half = (n_max / 2).max(1);
    let first_half_max = max_over(&|n| n <= half);
    Ok(RadialWitness {
        eta: rational::to_f64(&target),
        constant_c,
        per_n,
        last_quartile_max,
        first_half_max,
        bounded_trend: last_quartile_max <= constant_c && constant_c <= 1.5 * first_half_max,
    })
}

/// Largest distance from a sample of `[o, eta]` (out to `ray_length`) to the
/// nearest orbit point of `<gens>` enumerated to `depth` syllables.
///
/// The ray segment is fixed by `ray_length`, so the value can only shrink as
/// `depth` grows.
pub fn uniform_radial_check(
    eta: &Point,
    gens: &[Word],
    sd: &SchottkyData,
    depth: usize,
    samples: usize,
    ray_length: f64,
) -> Result<f64, LimitsError> {
    let ray = GeodesicRay::new(BASE_POINT, *eta)?;
    let words: Vec<Word> = enumerate_subgroup(gens, depth)?.into_iter().collect();
    let orbit: Vec<(f64, f64)> = par::map(&words, |w| {
        match word_to_element(w, sd).orbit_point().to_point() {
            Point::Interior { x, y } => (x, y),
            _ => unreachable!(),
        }
    });
    let steps = samples.max(1);
    let ts: Vec<f64> = (0..steps)
        .map(|k| {
            if steps == 1 {
                ray_length
            } else {
                ray_length * k as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let gaps = par::map(&ts, |&t| {
        let Point::Interior { x, y } = ray.point_at(t) else {
            unreachable!()
        };
        orbit
            .iter()
            .map(|&(ox, oy)| dist_coords(x, y, ox, oy))
            .fold(f64::INFINITY, f64::min)
    });
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

/// Reduced normal forms of all products of at most `max_syllables` factors
/// from `gens` and their inverses, reduced as symbol sequences first.
/// Contains the identity.
pub fn enumerate_subgroup(
    gens: &[Word],
    max_syllables: usize,
) -> Result<BTreeSet<Word>, LimitsError> {
    if gens.iter().any(|g| g.is_empty() || !g.is_reduced()) {
        return Err(LimitsError::BadGenerators);
    }
    let inverses: Vec<Word> = gens.iter().map(Word::inverse).collect();
    let symbols = enumerate_symbol_words(gens.len(), max_syllables);
    let words = par::map(&symbols, |sw| {
        let w = sw.syllables().iter().fold(Word::identity(), |acc, s| {
            let g = if s.inverse {
                &inverses[s.index - 1]
            } else {
                &gens[s.index - 1]
            };
            acc.concat(g)
        });
        reduce(&w)
    });
    let mut out: BTreeSet<Word> = words.into_iter().collect();
    out.insert(Word::identity());
    Ok(out)
}

pub fn intersect_subgroups(g1: &BTreeSet<Word>, g2: &BTreeSet<Word>) -> BTreeSet<Word> {
    g1.intersection(g2).cloned().collect()
}

/// Pairs `(u, v)` with `u` in `g1`, `v` in `g2` and equal matrices.
pub fn matrix_coincidences(
    g1: &BTreeSet<Word>,
    g2: &BTreeSet<Word>,
    sd: &SchottkyData,
) -> Vec<(Word, Word)> {
    let left: Vec<Word> = g1.iter().cloned().collect();
    let right: Vec<Word> = g2.iter().cloned().collect();
    let left_el = par::map(&left, |w| word_to_element(w, sd));
    let right_el = par::map(&right, |w| word_to_element(w, sd));
    let mut index: HashMap<&GroupElement, Vec<&Word>> = HashMap::new();
    for (w, g) in left.iter().zip(&left_el) {
        index.entry(g).or_default().push(w);
    }
    let mut out = Vec::new();
    for (v, g) in right.iter().zip(&right_el) {
        if let Some(us) = index.get(g) {
            out.extend(us.iter().map(|u| ((*u).clone(), v.clone())));
        }
    }
    out.sort();
    out
}

/// `theta_n` for the odd (`parity = 1`) or even (`parity = 0`) indices up to
/// `max_index`.
pub fn theta_generators(
    fam: &WordFamily,
    parity: usize,
    max_index: usize,
) -> Result<Vec<Word>, LimitsError> {
    (1..=max_index)
        .filter(|n| n % 2 == parity % 2)
        .map(|n| theta(n, fam).map_err(LimitsError::from))
        .collect()
}

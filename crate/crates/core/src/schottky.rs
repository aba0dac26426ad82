//! Rank-2 Schottky groups given by two pairs of circles orthogonal to the real
//! axis, an exact ping-pong certifier, word evaluation and nested disks.
//!
//! A circle's "inside" is always the bounded half-disk. Generator `a` maps the
//! outside of `C_a` onto the inside of `C_a'`, and `b` does the same for
//! `C_b`, `C_b'`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freewords::{Generator, Letter, Word};
use crate::mobius::{self, classify, ExactPoint, GroupElement, IsometryClass, MobiusError};
use crate::rational::{self, format_rational, int, parse_rational, rat};

#[derive(Debug, Error)]
pub enum SchottkyError {
    #[error("word is empty")]
    EmptyWord,
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("image of a disk under {0} is unbounded")]
    UnboundedImage(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation: {0}")]
    Schema(String),
}

/// A circle centred on the real axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circle {
    pub center: BigRational,
    pub radius: BigRational,
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "circle(center {}, radius {})", self.center, self.radius)
    }
}

impl Circle {
    pub fn new(center: BigRational, radius: BigRational) -> Self {
        Circle { center, radius }
    }

    pub fn lo(&self) -> BigRational {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> BigRational {
        &self.center + &self.radius
    }

    /// Closed boundary intervals do not meet.
    pub fn disjoint_from(&self, other: &Circle) -> bool {
        self.hi() < other.lo() || other.hi() < self.lo()
    }

    /// `other`'s closed interval lies in the open interval of `self`.
    pub fn strictly_contains(&self, other: &Circle) -> bool {
        self.lo() < other.lo() && other.hi() < self.hi()
    }

    pub fn contains_boundary_point(&self, x: &BigRational) -> bool {
        self.lo() < *x && *x < self.hi()
    }

    pub fn contains_point(&self, p: &ExactPoint) -> bool {
        let dx = &p.x - &self.center;
        &dx * &dx + &p.y * &p.y < &self.radius * &self.radius
    }

    /// Image of the bounded disk, or `None` when the image is unbounded
    /// (the pole of `g` lies in the closed disk).
    pub fn image_under(&self, g: &GroupElement) -> Option<Circle> {
        let [_, _, c, d] = g.entries();
        if !c.is_zero() {
            let pole = -d / c;
            if self.lo() <= pole && pole <= self.hi() {
                return None;
            }
        }
        self.circle_image_under(g)
    }

    /// Image of the circle itself, `None` when it passes through the pole and
    /// so maps to a vertical line.
    pub fn circle_image_under(&self, g: &GroupElement) -> Option<Circle> {
        let p = g.apply_boundary(&self.lo())?;
        let q = g.apply_boundary(&self.hi())?;
        Some(Circle {
            center: (&p + &q) * rational::half(),
            radius: (q - p).abs() * rational::half(),
        })
    }

    /// Hyperbolic distance from `o = i` to the half-disk, `None` if `o` is
    /// not strictly outside. Uses `sinh d = (c^2 + 1 - r^2) / (2 r)`.
    pub fn base_point_distance(&self) -> Option<f64> {
        self.distance_from(&ExactPoint::base())
    }

    /// Hyperbolic distance from `p` to the half-disk, `None` if `p` is not
    /// strictly outside. Uses `sinh d = (|p - c|^2 - r^2) / (2 r y)`.
    pub fn distance_from(&self, p: &ExactPoint) -> Option<f64> {
        let dx = &p.x - &self.center;
        let num = &dx * &dx + &p.y * &p.y - &self.radius * &self.radius;
        if !num.is_positive() {
            return None;
        }
        Some(rational::asinh(&(num / (int(2) * &self.radius * &p.y))))
    }

    pub fn center_f64(&self) -> f64 {
        rational::to_f64(&self.center)
    }

    pub fn radius_f64(&self) -> f64 {
        rational::to_f64(&self.radius)
    }
}

/// Which of the four circles a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CircleName {
    #[serde(rename = "C_a")]
    Ca,
    #[serde(rename = "C_a'")]
    CaPrime,
    #[serde(rename = "C_b")]
    Cb,
    #[serde(rename = "C_b'")]
    CbPrime,
}

impl CircleName {
    pub const ALL: [CircleName; 4] = [
        CircleName::Ca,
        CircleName::CaPrime,
        CircleName::Cb,
        CircleName::CbPrime,
    ];
}

impl fmt::Display for CircleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircleName::Ca => "C_a",
            CircleName::CaPrime => "C_a'",
            CircleName::Cb => "C_b",
            CircleName::CbPrime => "C_b'",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchottkyData {
    gen_a: GroupElement,
    gen_b: GroupElement,
    inv_a: GroupElement,
    inv_b: GroupElement,
    circles: [Circle; 4],
}

impl SchottkyData {
    /// Circles in the order `C_a, C_a', C_b, C_b'`.
    pub fn new(gen_a: GroupElement, gen_b: GroupElement, circles: [Circle; 4]) -> Self {
        SchottkyData {
            inv_a: gen_a.inverse(),
            inv_b: gen_b.inverse(),
            gen_a,
            gen_b,
            circles,
        }
    }

    pub fn gen_a(&self) -> &GroupElement {
        &self.gen_a
    }

    pub fn gen_b(&self) -> &GroupElement {
        &self.gen_b
    }

    pub fn circle(&self, name: CircleName) -> &Circle {
        &self.circles[name as usize]
    }

    pub fn circles(&self) -> &[Circle; 4] {
        &self.circles
    }

    pub fn with_circle(&self, name: CircleName, circle: Circle) -> Self {
        let mut circles = self.circles.clone();
        circles[name as usize] = circle;
        SchottkyData::new(self.gen_a.clone(), self.gen_b.clone(), circles)
    }

    pub fn letter_element(&self, l: Letter) -> &GroupElement {
        match (l.generator, l.inverse) {
            (Generator::A, false) => &self.gen_a,
            (Generator::A, true) => &self.inv_a,
            (Generator::B, false) => &self.gen_b,
            (Generator::B, true) => &self.inv_b,
        }
    }

    /// The circle a letter maps the outside of its source circle into.
    pub fn target_circle(&self, l: Letter) -> CircleName {
        match (l.generator, l.inverse) {
            (Generator::A, false) => CircleName::CaPrime,
            (Generator::A, true) => CircleName::Ca,
            (Generator::B, false) => CircleName::CbPrime,
            (Generator::B, true) => CircleName::Cb,
        }
    }

    pub fn target_disk(&self, l: Letter) -> &Circle {
        self.circle(self.target_circle(l))
    }
}

/// The list of conditions a certified instance passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("degenerate-circle: {circle} has non-positive radius")]
    DegenerateCircle { circle: CircleName },
    #[error("disks-not-disjoint: {first} and {second}")]
    DisksNotDisjoint {
        first: CircleName,
        second: CircleName,
    },
    #[error("base-point-not-exterior: o lies in or on {circle}")]
    BasePointNotExterior { circle: CircleName },
    #[error("not-loxodromic: generator {generator}")]
    NotLoxodromic { generator: &'static str },
    #[error("image-circle-mismatch: {generator} does not map {source_circle} onto {target}")]
    ImageCircleMismatch {
        generator: &'static str,
        source_circle: CircleName,
        target: CircleName,
    },
    #[error("side-mapping-failed: {generator} does not send the outside of {source_circle} into {target}")]
    SideMappingFailed {
        generator: &'static str,
        source_circle: CircleName,
        target: CircleName,
    },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::DegenerateCircle { .. } => "degenerate-circle",
            Violation::DisksNotDisjoint { .. } => "disks-not-disjoint",
            Violation::BasePointNotExterior { .. } => "base-point-not-exterior",
            Violation::NotLoxodromic { .. } => "not-loxodromic",
            Violation::ImageCircleMismatch { .. } => "image-circle-mismatch",
            Violation::SideMappingFailed { .. } => "side-mapping-failed",
        }
    }
}

/// Exact ping-pong certification.
///
/// Checks, in order: positive radii; pairwise disjoint closed boundary
/// intervals (tangency fails); `o` strictly outside every disk; both
/// generators loxodromic; for each of `a, a^-1, b, b^-1` the image of the
/// source circle equals the target circle, and the outside (witnessed by
/// `infinity` and `o`) lands strictly inside the target.
pub fn verify_ping_pong(sd: &SchottkyData) -> Result<Certificate, Violation> {
    let mut checks = Vec::new();
    for name in CircleName::ALL {
        if !sd.circle(name).radius.is_positive() {
            return Err(Violation::DegenerateCircle { circle: name });
        }
    }
    for (i, &p) in CircleName::ALL.iter().enumerate() {
        for &q in &CircleName::ALL[i + 1..] {
            if !sd.circle(p).disjoint_from(sd.circle(q)) {
                return Err(Violation::DisksNotDisjoint {
                    first: p,
                    second: q,
                });
            }
            checks.push(format!("disjoint({p}, {q})"));
        }
    }
    for name in CircleName::ALL {
        if sd.circle(name).contains_point(&ExactPoint::base())
            || sd.circle(name).base_point_distance().is_none()
        {
            return Err(Violation::BasePointNotExterior { circle: name });
        }
        checks.push(format!("o outside {name}"));
    }
    for (generator, g) in [("a", sd.gen_a()), ("b", sd.gen_b())] {
        if classify(g) != Ok(IsometryClass::Loxodromic) {
            return Err(Violation::NotLoxodromic { generator });
        }
        checks.push(format!("loxodromic({generator})"));
    }
    let pairings = [
        ("a", Letter::A, CircleName::Ca, CircleName::CaPrime),
        ("a^-1", Letter::A_INV, CircleName::CaPrime, CircleName::Ca),
        ("b", Letter::B, CircleName::Cb, CircleName::CbPrime),
        ("b^-1", Letter::B_INV, CircleName::CbPrime, CircleName::Cb),
    ];
    for (generator, letter, source_circle, target) in pairings {
        let g = sd.letter_element(letter);
        if sd.circle(source_circle).circle_image_under(g).as_ref() != Some(sd.circle(target)) {
            return Err(Violation::ImageCircleMismatch {
                generator,
                source_circle,
                target,
            });
        }
        checks.push(format!("{generator}({source_circle}) = {target}"));
        let to = sd.circle(target);
        let infinity_inside = g
            .apply_infinity()
            .is_some_and(|x| to.contains_boundary_point(&x));
        if !infinity_inside || !to.contains_point(&g.orbit_point()) {
            return Err(Violation::SideMappingFailed {
                generator,
                source_circle,
                target,
            });
        }
        checks.push(format!(
            "{generator}(outside {source_circle}) inside {target}"
        ));
    }
    Ok(Certificate { checks })
}

/// Exact product of generator matrices, left to right.
pub fn word_to_element(w: &Word, sd: &SchottkyData) -> GroupElement {
    mobius::product(w.letters().iter().map(|&l| sd.letter_element(l)))
}

/// For reduced `w = x_1 ... x_k`, the disk `x_1 ... x_{k-1}(D)` where `D` is
/// the target disk of `x_k`. It contains `w(o)` and shrinks strictly along
/// reduced extensions of `w`.
pub fn nested_disk(w: &Word, sd: &SchottkyData) -> Result<Circle, SchottkyError> {
    let (&last, prefix) = w.letters().split_last().ok_or(SchottkyError::EmptyWord)?;
    if !w.is_reduced() {
        return Err(SchottkyError::NotReduced(w.to_string()));
    }
    let prefix = word_to_element(&Word::from_letters(prefix.to_vec()), sd);
    nested_disk_from_prefix(&prefix, last, sd)
        .ok_or_else(|| SchottkyError::UnboundedImage(w.to_string()))
}

pub(crate) fn nested_disk_from_prefix(
    prefix: &GroupElement,
    last: Letter,
    sd: &SchottkyData,
) -> Option<Circle> {
    sd.target_disk(last).image_under(prefix)
}

const DEFAULT_GEN_A: [&str; 4] = ["1325/507", "476/507", "476/507", "365/507"];
const DEFAULT_GEN_B: [&str; 4] = ["365/507", "476/507", "476/507", "1325/507"];
const DEFAULT_CIRCLES: [(&str, &str); 4] = [
    ("-595/1276", "507/1276"),
    ("595/76", "507/76"),
    ("-595/76", "507/76"),
    ("595/1276", "507/1276"),
];

/// The shipped generators and circles.
///
/// Built from `a0 = [[5/3, 4/3], [4/3, 5/3]]`, which translates by `2 ln 3`
/// along the geodesic from `-1` to `1` through `o`, with its isometric circles
/// as `C_a`, `C_a'`. Conjugating by the rotations about `o` with
/// `(cos, sin) = (12/13, +-5/13)` gives `a` and `b`; both axes still pass
/// through `o`, so `d(o, a^n o) = n d(o, a o)`.
pub fn default_generators() -> SchottkyData {
    let parse = |s: &str| parse_rational(s).expect("valid constant");
    let element = |e: [&str; 4]| {
        let [a, b, c, d] = e.map(parse);
        GroupElement::unimodular(a, b, c, d).expect("det 1 constant")
    };
    let circles = DEFAULT_CIRCLES.map(|(c, r)| Circle::new(parse(c), parse(r)));
    SchottkyData::new(element(DEFAULT_GEN_A), element(DEFAULT_GEN_B), circles)
}

/// Recomputes the default data from its recipe.
pub fn construct_default() -> Result<SchottkyData, MobiusError> {
    let a0 = GroupElement::from_ratios([(5, 3), (4, 3), (4, 3), (5, 3)])?;
    // Isometric circles |c z + d| = 1 of a0 and a0^-1.
    let iso = Circle::new(rat(-5, 4), rat(3, 4));
    let iso_inv = Circle::new(rat(5, 4), rat(3, 4));
    let r1 = GroupElement::from_ratios([(12, 13), (5, 13), (-5, 13), (12, 13)])?;
    let r2 = r1.inverse();
    let conj = |r: &GroupElement| r.compose(&a0).compose(&r.inverse());
    let img = |c: &Circle, r: &GroupElement| c.image_under(r).expect("bounded image");
    Ok(SchottkyData::new(
        conj(&r1),
        conj(&r2),
        [
            img(&iso, &r1),
            img(&iso_inv, &r1),
            img(&iso, &r2),
            img(&iso_inv, &r2),
        ],
    ))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleJson {
    center: String,
    radius: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CirclesJson {
    c_a: CircleJson,
    c_a_prime: CircleJson,
    c_b: CircleJson,
    c_b_prime: CircleJson,
}

/// File form: matrices as four `"p/q"` strings, circles as `{center, radius}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchottkyJson {
    gen_a: [String; 4],
    gen_b: [String; 4],
    circles: CirclesJson,
}

impl SchottkyData {
    pub fn from_json_str(s: &str) -> Result<Self, SchottkyError> {
        let raw: SchottkyJson = serde_json::from_str(s)?;
        let q = |field: &str, s: &str| {
            parse_rational(s).map_err(|e| SchottkyError::Schema(format!("{field}: {e}")))
        };
        let element = |field: &str, e: &[String; 4]| -> Result<GroupElement, SchottkyError> {
            let a = q(field, &e[0])?;
            let b = q(field, &e[1])?;
            let c = q(field, &e[2])?;
            let d = q(field, &e[3])?;
            GroupElement::unimodular(a, b, c, d)
                .map_err(|e| SchottkyError::Schema(format!("{field}: {e}")))
        };
        let circle = |field: &str, c: &CircleJson| -> Result<Circle, SchottkyError> {
            let radius = q(field, &c.radius)?;
            if !radius.is_positive() {
                return Err(SchottkyError::Schema(format!(
                    "{field}: radius must be positive"
                )));
            }
            Ok(Circle::new(q(field, &c.center)?, radius))
        };
        Ok(SchottkyData::new(
            element("gen_a", &raw.gen_a)?,
            element("gen_b", &raw.gen_b)?,
            [
                circle("c_a", &raw.circles.c_a)?,
                circle("c_a_prime", &raw.circles.c_a_prime)?,
                circle("c_b", &raw.circles.c_b)?,
                circle("c_b_prime", &raw.circles.c_b_prime)?,
            ],
        ))
    }

    pub fn to_json_string(&self) -> String {
        let m = |g: &GroupElement| g.entries().clone().map(|q| format_rational(&q));
        let c = |c: &Circle| CircleJson {
            center: format_rational(&c.center),
            radius: format_rational(&c.radius),
        };
        let raw = SchottkyJson {
            gen_a: m(&self.gen_a),
            gen_b: m(&self.gen_b),
            circles: CirclesJson {
                c_a: c(&self.circles[0]),
                c_a_prime: c(&self.circles[1]),
                c_b: c(&self.circles[2]),
                c_b_prime: c(&self.circles[3]),
            },
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}

//! Orientation-preserving isometries of the upper half-plane as exact
//! `PSL(2, Q)` matrices, and the hyperbolic metric on points and rays.
//!
//! Group-theoretic questions (equality, trace class) are decided on exact
//! rationals. Metric quantities are `f64`, computed from exact data wherever
//! the inputs are exact.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{self, int};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MobiusError {
    #[error("the identity has no isometry class or fixed-point set")]
    IdentityElement,
    #[error("point is not in the interior of the half-plane")]
    BoundaryPoint,
    #[error("determinant {det} is not the square of a positive rational")]
    NotNormalizable { det: String },
    #[error("determinant is {det}, expected exactly 1")]
    DeterminantNotOne { det: String },
    #[error("invalid point: {0}")]
    InvalidPoint(&'static str),
    #[error("invalid ray: {0}")]
    InvalidRay(&'static str),
}

/// A point of the closed upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Interior { x: f64, y: f64 },
    Boundary(f64),
    Infinity,
}

/// The base point `o = i`.
pub const BASE_POINT: Point = Point::Interior { x: 0.0, y: 1.0 };

impl Point {
    pub fn interior(x: f64, y: f64) -> Result<Self, MobiusError> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(MobiusError::InvalidPoint("non-finite coordinate"));
        }
        if y <= 0.0 {
            return Err(MobiusError::InvalidPoint("imaginary part must be positive"));
        }
        Ok(Point::Interior { x, y })
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, Point::Interior { .. })
    }

    fn coords(&self) -> Result<(f64, f64), MobiusError> {
        match *self {
            Point::Interior { x, y } => Ok((x, y)),
            _ => Err(MobiusError::BoundaryPoint),
        }
    }
}

/// An interior point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl ExactPoint {
    pub fn base() -> Self {
        ExactPoint {
            x: BigRational::zero(),
            y: BigRational::one(),
        }
    }

    pub fn to_point(&self) -> Point {
        let y = rational::to_f64(&self.y);
        // y can underflow for points extremely close to the boundary.
        Point::Interior {
            x: rational::to_f64(&self.x),
            y: if y > 0.0 { y } else { f64::MIN_POSITIVE },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Elliptic,
    Parabolic,
    Loxodromic,
}

/// The geodesic ray from an interior `base` to a boundary `endpoint`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicRay {
    base: Point,
    endpoint: Point,
}

impl GeodesicRay {
    pub fn new(base: Point, endpoint: Point) -> Result<Self, MobiusError> {
        if !base.is_interior() {
            return Err(MobiusError::InvalidRay("base must be interior"));
        }
        if endpoint.is_interior() {
            return Err(MobiusError::InvalidRay("endpoint must be on the boundary"));
        }
        if let Point::Boundary(e) = endpoint {
            if !e.is_finite() {
                return Err(MobiusError::InvalidRay("non-finite endpoint"));
            }
        }
        Ok(GeodesicRay { base, endpoint })
    }

    pub fn base(&self) -> Point {
        self.base
    }

    pub fn endpoint(&self) -> Point {
        self.endpoint
    }

    /// The point at hyperbolic distance `t >= 0` from the base.
    pub fn point_at(&self, t: f64) -> Point {
        let (bx, by) = self.base.coords().unwrap();
        match self.endpoint {
            Point::Infinity => Point::Interior {
                x: bx,
                y: by * t.exp(),
            },
            Point::Boundary(e) if bx == e => Point::Interior {
                x: bx,
                y: by * (-t).exp(),
            },
            Point::Boundary(e) => {
                // Semicircle centred on the real axis through base and e,
                // parametrised by angle; arclength is d(ln tan(phi/2)).
                let c = (bx * bx + by * by - e * e) / (2.0 * (bx - e));
                let r = (e - c).abs();
                let phi_b = by.atan2(bx - c);
                let phi_e = if e > c { 0.0 } else { std::f64::consts::PI };
                let s = (phi_b / 2.0).tan().ln();
                let s_t = if phi_e == 0.0 { s - t } else { s + t };
                let phi = 2.0 * s_t.exp().atan();
                Point::Interior {
                    x: c + r * phi.cos(),
                    y: r * phi.sin(),
                }
            }
            Point::Interior { .. } => unreachable!(),
        }
    }
}

/// An element of `PSL(2, Q)` acting by `z -> (m11 z + m12) / (m21 z + m22)`.
///
/// Always stored with determinant exactly 1 and its first nonzero entry
/// positive, so `==` is equality of isometries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    m: [BigRational; 4],
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

impl GroupElement {
    /// Builds an element from any matrix whose determinant is the square of a
    /// positive rational, dividing through by its square root.
    pub fn new(
        m11: BigRational,
        m12: BigRational,
        m21: BigRational,
        m22: BigRational,
    ) -> Result<Self, MobiusError> {
        let det = &m11 * &m22 - &m12 * &m21;
        if !det.is_positive() {
            return Err(MobiusError::NotNormalizable {
                det: det.to_string(),
            });
        }
        let root = rational::sqrt_exact(&det).ok_or_else(|| MobiusError::NotNormalizable {
            det: det.to_string(),
        })?;
        Ok(Self::canonical([
            m11 / &root,
            m12 / &root,
            m21 / &root,
            m22 / &root,
        ]))
    }

    /// Builds an element from a matrix that must already have determinant 1.
    pub fn unimodular(
        m11: BigRational,
        m12: BigRational,
        m21: BigRational,
        m22: BigRational,
    ) -> Result<Self, MobiusError> {
        let det = &m11 * &m22 - &m12 * &m21;
        if !det.is_one() {
            return Err(MobiusError::DeterminantNotOne {
                det: det.to_string(),
            });
        }
        Ok(Self::canonical([m11, m12, m21, m22]))
    }

    pub fn from_ratios(entries: [(i64, i64); 4]) -> Result<Self, MobiusError> {
        let [a, b, c, d] = entries.map(|(n, d)| rational::rat(n, d));
        Self::new(a, b, c, d)
    }

    fn canonical(mut m: [BigRational; 4]) -> Self {
        let lead_negative = m
            .iter()
            .find(|q| !q.is_zero())
            .map(|q| q.is_negative())
            .unwrap_or(false);
        if lead_negative {
            for q in m.iter_mut() {
                *q = -q.clone();
            }
        }
        GroupElement { m }
    }

    pub fn identity() -> Self {
        GroupElement {
            m: [int(1), int(0), int(0), int(1)],
        }
    }

    pub fn entries(&self) -> &[BigRational; 4] {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn trace(&self) -> BigRational {
        &self.m[0] + &self.m[3]
    }

    pub fn determinant(&self) -> BigRational {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        Self::canonical([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn inverse(&self) -> GroupElement {
        let [a, b, c, d] = &self.m;
        Self::canonical([d.clone(), -b.clone(), -c.clone(), a.clone()])
    }

    /// Entries divided by the largest absolute entry, as floats. The Möbius
    /// map is unchanged and the floats stay in range for huge words.
    pub fn scaled_f64(&self) -> [f64; 4] {
        let s = rational::max_abs(self.m.iter());
        let s = if s.is_zero() { BigRational::one() } else { s };
        [0, 1, 2, 3].map(|i| rational::to_f64(&(&self.m[i] / &s)))
    }

    /// Exact image of a boundary point, `None` for the point at infinity.
    pub fn apply_boundary(&self, x: &BigRational) -> Option<BigRational> {
        let [a, b, c, d] = &self.m;
        let den = c * x + d;
        if den.is_zero() {
            None
        } else {
            Some((a * x + b) / den)
        }
    }

    /// Exact image of infinity, `None` when infinity is fixed.
    pub fn apply_infinity(&self) -> Option<BigRational> {
        let [a, _, c, _] = &self.m;
        (!c.is_zero()).then(|| a / c)
    }

    pub fn apply_exact(&self, p: &ExactPoint) -> ExactPoint {
        let [a, b, c, d] = &self.m;
        let cx_d = c * &p.x + d;
        let cy = c * &p.y;
        let den = &cx_d * &cx_d + &cy * &cy;
        let re = ((a * &p.x + b) * &cx_d + a * c * &p.y * &p.y) / &den;
        ExactPoint {
            x: re,
            y: &p.y / den,
        }
    }

    /// `g(o)` for the base point `o = i`, exactly.
    pub fn orbit_point(&self) -> ExactPoint {
        let [a, b, c, d] = &self.m;
        let den = c * c + d * d;
        ExactPoint {
            x: (a * c + b * d) / &den,
            y: den.recip(),
        }
    }

    /// `cosh d(o, g(o)) = (a^2 + b^2 + c^2 + d^2) / 2`.
    pub fn cosh_displacement(&self) -> BigRational {
        let sum = self
            .m
            .iter()
            .fold(BigRational::zero(), |acc, q| acc + q * q);
        sum * rational::half()
    }

    /// Hyperbolic distance from `o` to `g(o)`.
    pub fn displacement(&self) -> f64 {
        rational::acosh(&self.cosh_displacement())
    }
}

/// `n / den` with one shared denominator, so long products skip the
/// per-entry gcd work of rational arithmetic.
struct ScaledMatrix {
    n: [BigInt; 4],
    den: BigInt,
}

impl ScaledMatrix {
    fn from_element(g: &GroupElement) -> Self {
        let den = g.m.iter().fold(BigInt::one(), |acc, q| acc * q.denom());
        let n = [0, 1, 2, 3].map(|i| g.m[i].numer() * (&den / g.m[i].denom()));
        ScaledMatrix { n, den }
    }

    fn mul(&self, other: &ScaledMatrix) -> ScaledMatrix {
        let [a, b, c, d] = &self.n;
        let [e, f, g, h] = &other.n;
        ScaledMatrix {
            n: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            den: &self.den * &other.den,
        }
    }

    fn into_element(self) -> GroupElement {
        let den = self.den;
        GroupElement::canonical(self.n.map(|x| BigRational::new(x, den.clone())))
    }
}

/// Exact product of the factors, left to right.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
    let mut acc: Option<ScaledMatrix> = None;
    for g in factors {
        let s = ScaledMatrix::from_element(g);
        acc = Some(match acc {
            None => s,
            Some(a) => a.mul(&s),
        });
    }
    acc.map_or_else(GroupElement::identity, ScaledMatrix::into_element)
}

impl Mul for &GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.compose(rhs)
    }
}

pub fn compose(g: &GroupElement, h: &GroupElement) -> GroupElement {
    g.compose(h)
}

pub fn inverse(g: &GroupElement) -> GroupElement {
    g.inverse()
}

pub fn apply(g: &GroupElement, p: &Point) -> Point {
    let [a, b, c, d] = g.scaled_f64();
    match *p {
        Point::Interior { x, y } => {
            let nr = a * x + b;
            let ni = a * y;
            let dr = c * x + d;
            let di = c * y;
            let den = dr * dr + di * di;
            // Im w = y * det / |cz + d|^2 with det = a*d - b*c of the scaled matrix.
            let det = a * d - b * c;
            Point::Interior {
                x: (nr * dr + ni * di) / den,
                y: y * det / den,
            }
        }
        Point::Boundary(x) => {
            let den = c * x + d;
            if den == 0.0 {
                Point::Infinity
            } else {
                Point::Boundary((a * x + b) / den)
            }
        }
        Point::Infinity => match g.apply_infinity() {
            None => Point::Infinity,
            Some(q) => Point::Boundary(rational::to_f64(&q)),
        },
    }
}

/// Elliptic, parabolic or loxodromic by comparing `|trace|` with 2 exactly.
pub fn classify(g: &GroupElement) -> Result<IsometryClass, MobiusError> {
    if g.is_identity() {
        return Err(MobiusError::IdentityElement);
    }
    let t = g.trace().abs();
    let two = int(2);
    Ok(match t.cmp(&two) {
        std::cmp::Ordering::Less => IsometryClass::Elliptic,
        std::cmp::Ordering::Equal => IsometryClass::Parabolic,
        std::cmp::Ordering::Greater => IsometryClass::Loxodromic,
    })
}

/// A fixed point on the boundary, exact when the fixed-point quadratic has a
/// rational discriminant root.
#[derive(Debug, Clone, PartialEq)]
pub enum FixedPoint {
    Exact(BigRational),
    Approx(f64),
    Infinity,
}

impl FixedPoint {
    pub fn to_point(&self) -> Point {
        match self {
            FixedPoint::Exact(q) => Point::Boundary(rational::to_f64(q)),
            FixedPoint::Approx(x) => Point::Boundary(*x),
            FixedPoint::Infinity => Point::Infinity,
        }
    }
}

/// Boundary fixed points as `(attracting, repelling)` for loxodromics, a
/// single point for parabolics and none for elliptics.
pub fn fixed_points_detailed(g: &GroupElement) -> Result<Vec<FixedPoint>, MobiusError> {
    let class = classify(g)?;
    let [a, b, c, d] = g.entries();
    let tr = g.trace();
    if c.is_zero() {
        // z -> a^2 z + a b; infinity attracts iff |a| > 1.
        return Ok(match class {
            IsometryClass::Loxodromic => {
                let finite = FixedPoint::Exact(b / (d - a));
                if a.abs() > BigRational::one() {
                    vec![FixedPoint::Infinity, finite]
                } else {
                    vec![finite, FixedPoint::Infinity]
                }
            }
            _ => vec![FixedPoint::Infinity],
        });
    }
    let disc = &tr * &tr - int(4);
    match class {
        IsometryClass::Elliptic => return Ok(vec![]),
        IsometryClass::Parabolic => {
            return Ok(vec![FixedPoint::Exact((a - d) / (c * int(2)))]);
        }
        IsometryClass::Loxodromic => {}
    }
    // Roots of c z^2 + (d - a) z - b = 0. At a root, c z + d = (tr +- sqrt disc)/2,
    // and the root with |c z + d| > 1 attracts: the sign of sqrt disc matches tr.
    let sign_tr = if tr.is_positive() { int(1) } else { int(-1) };
    if let Some(root) = rational::sqrt_exact(&disc) {
        let two_c = c * int(2);
        let attracting = (a - d + &sign_tr * &root) / &two_c;
        let repelling = (a - d - &sign_tr * &root) / &two_c;
        return Ok(vec![
            FixedPoint::Exact(attracting),
            FixedPoint::Exact(repelling),
        ]);
    }
    let s = rational::max_abs(g.entries().iter());
    let a_minus_d = rational::to_f64(&((a - d) / &s));
    let sqrt_disc = rational::to_f64(&(&disc / (&s * &s))).sqrt();
    let c_s = rational::to_f64(&(c / &s));
    let b_s = rational::to_f64(&(b / &s));
    // Cancellation-free pair: q/(2c) and -2b/q.
    let sign_ad = if a_minus_d >= 0.0 { 1.0 } else { -1.0 };
    let q = a_minus_d + sign_ad * sqrt_disc;
    let big = q / (2.0 * c_s);
    let other = -2.0 * b_s / q;
    let sign_tr = if tr.is_positive() { 1.0 } else { -1.0 };
    let (att, rep) = if sign_ad == sign_tr {
        (big, other)
    } else {
        (other, big)
    };
    Ok(vec![FixedPoint::Approx(att), FixedPoint::Approx(rep)])
}

pub fn fixed_points(g: &GroupElement) -> Result<Vec<Point>, MobiusError> {
    Ok(fixed_points_detailed(g)?
        .iter()
        .map(FixedPoint::to_point)
        .collect())
}

/// The attracting fixed point of a loxodromic element.
pub fn attracting_fixed_point(g: &GroupElement) -> Result<Option<Point>, MobiusError> {
    if classify(g)? != IsometryClass::Loxodromic {
        return Ok(None);
    }
    Ok(fixed_points(g)?.first().copied())
}

pub fn hyp_dist(p: &Point, q: &Point) -> Result<f64, MobiusError> {
    let (px, py) = p.coords()?;
    let (qx, qy) = q.coords()?;
    Ok(dist_coords(px, py, qx, qy))
}

/// `d = 2 asinh(|p - q| / (2 sqrt(y_p y_q)))`, stable for small distances.
pub(crate) fn dist_coords(px: f64, py: f64, qx: f64, qy: f64) -> f64 {
    let e = (px - qx).hypot(py - qy);
    2.0 * (e / (2.0 * (py * qy).sqrt())).asinh()
}

/// Distance from `(u, y)` to the vertical ray `{(0, t) : t >= y0}`.
pub(crate) fn dist_to_vertical_ray(u: f64, y: f64, y0: f64) -> f64 {
    // The foot of the perpendicular on the line x = 0 sits at height |(u, y)|.
    if u.hypot(y) >= y0 {
        (u.abs() / y).asinh()
    } else {
        dist_coords(u, y, 0.0, y0)
    }
}

pub fn dist_to_ray(p: &Point, ray: &GeodesicRay) -> Result<f64, MobiusError> {
    let (px, py) = p.coords()?;
    let (bx, by) = ray.base.coords()?;
    match ray.endpoint {
        Point::Infinity => Ok(dist_to_vertical_ray(px - bx, py, by)),
        Point::Boundary(e) => {
            // z -> -1/(z - e) sends e to infinity.
            let send = |x: f64, y: f64| {
                let dx = x - e;
                let n = dx * dx + y * y;
                (-dx / n, y / n)
            };
            let (tpx, tpy) = send(px, py);
            let (tbx, tby) = send(bx, by);
            Ok(dist_to_vertical_ray(tpx - tbx, tpy, tby))
        }
        Point::Interior { .. } => Err(MobiusError::InvalidRay("endpoint must be on the boundary")),
    }
}

/// Distance from `g(o)` to the ray `[o, eta]`, computed from exact data so that
/// orbit points far out toward the boundary keep full relative precision.
pub fn orbit_ray_distance(g: &GroupElement, eta: &BigRational) -> f64 {
    let (u, y, y0) = ray_frame(g, eta);
    let u2 = &u * &u;
    if &u2 + &y * &y >= &y0 * &y0 {
        rational::asinh(&(u.abs() / &y))
    } else {
        let dy = &y - &y0;
        let cosh = BigRational::one() + (u2 + &dy * &dy) / (int(2) * &y * &y0);
        rational::acosh(&cosh)
    }
}

/// Coordinates `(u, y, y0)` of `g(o)` after sending `eta` to infinity with
/// `z -> -1/(z - eta)`: the ray `[o, eta]` becomes the vertical ray above
/// height `y0` and `u` is the horizontal offset from it.
pub fn ray_frame(g: &GroupElement, eta: &BigRational) -> (BigRational, BigRational, BigRational) {
    let send = GroupElement {
        m: [int(0), int(-1), int(1), -eta.clone()],
    };
    let p = send.compose(g).orbit_point();
    let base = send.orbit_point();
    (p.x - base.x, p.y, base.y)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    pub(crate) fn diag(k: (i64, i64)) -> GroupElement {
        GroupElement::from_ratios([k, (0, 1), (0, 1), (k.1, k.0)]).unwrap()
    }

    /// Random det-1 rationals as products of elementary matrices.
    pub(crate) fn arb_element() -> impl Strategy<Value = GroupElement> {
        let step = (0u8..3, -9i64..=9, 1i64..=5).prop_map(|(kind, n, d)| {
            let t = (n, d);
            match kind {
                0 => GroupElement::from_ratios([(1, 1), t, (0, 1), (1, 1)]).unwrap(),
                1 => GroupElement::from_ratios([(1, 1), (0, 1), t, (1, 1)]).unwrap(),
                _ => diag((n.abs().max(1), d)),
            }
        });
        prop::collection::vec(step, 1..5).prop_map(|gs| {
            gs.iter()
                .fold(GroupElement::identity(), |acc, g| acc.compose(g))
        })
    }

    fn arb_interior() -> impl Strategy<Value = Point> {
        (-3.0f64..3.0, 0.05f64..4.0).prop_map(|(x, y)| Point::Interior { x, y })
    }

    fn close(p: &Point, q: &Point, tol: f64) -> bool {
        match (p, q) {
            (Point::Interior { x, y }, Point::Interior { x: u, y: v }) => {
                (x - u).abs() < tol && (y - v).abs() < tol
            }
            _ => false,
        }
    }

    #[test]
    fn compose_examples() {
        let g = GroupElement::from_ratios([(3, 1), (1, 1), (5, 1), (2, 1)]).unwrap();
        assert_eq!(compose(&g, &GroupElement::identity()), g);
        assert!(compose(&g, &inverse(&g)).is_identity());
        assert_eq!(compose(&diag((2, 1)), &diag((2, 1))), diag((4, 1)));
        assert_eq!(diag((4, 1)).entries()[3], rat(1, 4));
    }

    #[test]
    fn inverse_examples() {
        assert!(inverse(&GroupElement::identity()).is_identity());
        assert_eq!(inverse(&diag((2, 1))), diag((1, 2)));
    }

    #[test]
    fn normalisation_and_sign() {
        // det 4 normalises by 2; leading negative flips sign.
        let g = GroupElement::from_ratios([(-4, 1), (0, 1), (0, 1), (-1, 1)]).unwrap();
        assert_eq!(g, diag((2, 1)));
        assert!(matches!(
            GroupElement::from_ratios([(2, 1), (0, 1), (0, 1), (1, 1)]),
            Err(MobiusError::NotNormalizable { .. })
        ));
        assert!(matches!(
            GroupElement::from_ratios([(0, 1), (1, 1), (1, 1), (0, 1)]),
            Err(MobiusError::NotNormalizable { .. })
        ));
        assert!(matches!(
            GroupElement::unimodular(int(2), int(0), int(0), int(1)),
            Err(MobiusError::DeterminantNotOne { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply(&GroupElement::identity(), &BASE_POINT), BASE_POINT);
        assert!(close(
            &apply(&diag((2, 1)), &BASE_POINT),
            &Point::Interior { x: 0.0, y: 4.0 },
            1e-15
        ));
        let t = GroupElement::from_ratios([(0, 1), (-1, 1), (1, 1), (0, 1)]).unwrap();
        assert_eq!(apply(&t, &Point::Boundary(0.0)), Point::Infinity);
        assert_eq!(apply(&t, &Point::Infinity), Point::Boundary(0.0));
        assert_eq!(apply(&diag((2, 1)), &Point::Infinity), Point::Infinity);
    }

    #[test]
    fn orbit_point_matches_float_apply() {
        let g = GroupElement::from_ratios([(3, 1), (1, 1), (5, 1), (2, 1)]).unwrap();
        let exact = g.orbit_point().to_point();
        assert!(close(&exact, &apply(&g, &BASE_POINT), 1e-14));
        assert_eq!(g.apply_exact(&ExactPoint::base()), g.orbit_point());
    }

    #[test]
    fn classify_examples() {
        let par = GroupElement::from_ratios([(1, 1), (1, 1), (0, 1), (1, 1)]).unwrap();
        let ell = GroupElement::from_ratios([(0, 1), (1, 1), (-1, 1), (0, 1)]).unwrap();
        assert_eq!(classify(&par), Ok(IsometryClass::Parabolic));
        assert_eq!(classify(&diag((2, 1))), Ok(IsometryClass::Loxodromic));
        assert_eq!(classify(&ell), Ok(IsometryClass::Elliptic));
        assert_eq!(
            classify(&GroupElement::identity()),
            Err(MobiusError::IdentityElement)
        );
    }

    #[test]
    fn fixed_point_examples() {
        let fp = fixed_points(&diag((2, 1))).unwrap();
        assert_eq!(fp, vec![Point::Infinity, Point::Boundary(0.0)]);
        let fp = fixed_points(&diag((1, 2))).unwrap();
        assert_eq!(fp, vec![Point::Boundary(0.0), Point::Infinity]);
        let par = GroupElement::from_ratios([(1, 1), (1, 1), (0, 1), (1, 1)]).unwrap();
        assert_eq!(fixed_points(&par).unwrap(), vec![Point::Infinity]);
        let ell = GroupElement::from_ratios([(0, 1), (1, 1), (-1, 1), (0, 1)]).unwrap();
        assert!(fixed_points(&ell).unwrap().is_empty());
        assert_eq!(
            fixed_points(&GroupElement::identity()),
            Err(MobiusError::IdentityElement)
        );
        // [[5/3,4/3],[4/3,5/3]] fixes +-1 with +1 attracting.
        let a = GroupElement::from_ratios([(5, 3), (4, 3), (4, 3), (5, 3)]).unwrap();
        assert_eq!(
            fixed_points_detailed(&a).unwrap(),
            vec![FixedPoint::Exact(int(1)), FixedPoint::Exact(int(-1))]
        );
    }

    #[test]
    fn irrational_fixed_points_have_small_residual() {
        // trace 3: discriminant 5 is not a rational square.
        let g = GroupElement::from_ratios([(2, 1), (1, 1), (1, 1), (1, 1)]).unwrap();
        let fps = fixed_points_detailed(&g).unwrap();
        assert!(fps.iter().all(|f| matches!(f, FixedPoint::Approx(_))));
        for f in &fps {
            let Point::Boundary(x) = f.to_point() else {
                panic!()
            };
            let Point::Boundary(gx) = apply(&g, &Point::Boundary(x)) else {
                panic!()
            };
            assert!((gx - x).abs() < 1e-10);
        }
        // Forward orbit converges to the attracting point.
        let Some(Point::Boundary(att)) = attracting_fixed_point(&g).unwrap() else {
            panic!()
        };
        let mut p = BASE_POINT;
        for _ in 0..40 {
            p = apply(&g, &p);
        }
        let Point::Interior { x, .. } = p else {
            panic!()
        };
        assert!((x - att).abs() < 1e-9);
    }

    #[test]
    fn hyp_dist_examples() {
        assert_eq!(hyp_dist(&BASE_POINT, &BASE_POINT), Ok(0.0));
        let d = hyp_dist(&BASE_POINT, &Point::Interior { x: 0.0, y: 4.0 }).unwrap();
        assert!((d - 4f64.ln()).abs() < 1e-15);
        assert_eq!(
            hyp_dist(&BASE_POINT, &Point::Boundary(0.0)),
            Err(MobiusError::BoundaryPoint)
        );
    }

    #[test]
    fn ray_examples() {
        let ray = GeodesicRay::new(Point::Interior { x: 0.0, y: 2.0 }, Point::Infinity).unwrap();
        let d = dist_to_ray(&BASE_POINT, &ray).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        let ray = GeodesicRay::new(BASE_POINT, Point::Boundary(1.0)).unwrap();
        for t in [0.0, 0.5, 3.0, 10.0] {
            let p = ray.point_at(t);
            assert!(dist_to_ray(&p, &ray).unwrap() < 1e-12);
            assert!((hyp_dist(&BASE_POINT, &p).unwrap() - t).abs() < 1e-9);
        }
        assert!(GeodesicRay::new(Point::Boundary(0.0), Point::Infinity).is_err());
        assert!(GeodesicRay::new(BASE_POINT, BASE_POINT).is_err());
        assert_eq!(
            dist_to_ray(&Point::Boundary(3.0), &ray),
            Err(MobiusError::BoundaryPoint)
        );
    }

    #[test]
    fn exact_ray_distance_matches_float_route() {
        let g = GroupElement::from_ratios([(3, 1), (1, 1), (5, 1), (2, 1)]).unwrap();
        let eta = rat(1, 3);
        let ray = GeodesicRay::new(BASE_POINT, Point::Boundary(1.0 / 3.0)).unwrap();
        let float = dist_to_ray(&g.orbit_point().to_point(), &ray).unwrap();
        assert!((orbit_ray_distance(&g, &eta) - float).abs() < 1e-12);
        assert!(orbit_ray_distance(&GroupElement::identity(), &eta) < 1e-15);
    }

    proptest! {
        #[test]
        fn product_matches_stepwise_composition(
            gs in proptest::collection::vec(arb_element(), 0..6)
        ) {
            let stepwise = gs.iter().fold(GroupElement::identity(), |acc, g| acc.compose(g));
            prop_assert_eq!(product(&gs), stepwise);
        }

        #[test]
        fn group_laws(g in arb_element(), h in arb_element(), k in arb_element()) {
            prop_assert_eq!(g.compose(&h).compose(&k), g.compose(&h.compose(&k)));
            prop_assert!(g.compose(&g.inverse()).is_identity());
            prop_assert_eq!(g.inverse().inverse(), g.clone());
            prop_assert!(g.compose(&h).determinant().is_one());
            prop_assert!(g.inverse().determinant().is_one());
        }

        #[test]
        fn classify_conjugation_invariant(g in arb_element(), h in arb_element()) {
            let conj = h.compose(&g).compose(&h.inverse());
            prop_assert_eq!(classify(&conj), classify(&g));
        }

        #[test]
        fn apply_round_trip(g in arb_element(), p in arb_interior()) {
            let q = apply(&g, &apply(&g.inverse(), &p));
            prop_assert!(close(&p, &q, 1e-12 * (1.0 + p_norm(&p))));
            if let Point::Interior { y, .. } = apply(&g, &p) {
                prop_assert!(y > 0.0);
            } else {
                prop_assert!(false);
            }
        }

        #[test]
        fn metric_axioms(p in arb_interior(), q in arb_interior(), r in arb_interior()) {
            let pq = hyp_dist(&p, &q).unwrap();
            prop_assert!((pq - hyp_dist(&q, &p).unwrap()).abs() < 1e-12);
            prop_assert!(pq <= hyp_dist(&p, &r).unwrap() + hyp_dist(&r, &q).unwrap() + 1e-9);
            prop_assert!(hyp_dist(&p, &p).unwrap() == 0.0);
        }

        #[test]
        fn distances_are_isometry_invariant(g in arb_element(), p in arb_interior(), q in arb_interior(), e in -3.0f64..3.0) {
            let d0 = hyp_dist(&p, &q).unwrap();
            let d1 = hyp_dist(&apply(&g, &p), &apply(&g, &q)).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
            let ray = GeodesicRay::new(q, Point::Boundary(e)).unwrap();
            let moved = GeodesicRay::new(apply(&g, &q), apply(&g, &Point::Boundary(e))).unwrap();
            let r0 = dist_to_ray(&p, &ray).unwrap();
            let r1 = dist_to_ray(&apply(&g, &p), &moved).unwrap();
            prop_assert!((r0 - r1).abs() < 1e-9 * (1.0 + r0));
        }
    }

    fn p_norm(p: &Point) -> f64 {
        match p {
            Point::Interior { x, y } => x.abs() + y.abs(),
            _ => 0.0,
        }
    }
}

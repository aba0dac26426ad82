//! SVG figure in the Poincaré disk. Geometry stays in the half-plane; the
//! Cayley map `z -> (z - i) / (z + i)` is applied only here, for display.
//!
//! Element classes: `circle.schottky` (the four pairing circles),
//! `circle.orbit` (one marker per `theta_n(o)`), `line.ray` (the ray to
//! `eta`), `path.nested` (nested disks of the theta prefixes) and
//! `path.boundary` (the unit circle). Only the schottky circles and orbit
//! markers are `<circle>` elements.

use svg::node::element::{ClipPath, Definitions, Group, Line, Path, Title};
use svg::Document;

use fuchsian_core::freewords::{theta, WordFamily};
use fuchsian_core::limits::{estimate_limit_point, LimitsError};
use fuchsian_core::mobius::Point;
use fuchsian_core::schottky::{nested_disk, word_to_element, Circle, CircleName, SchottkyData};

const SIZE: f64 = 800.0;
const SCALE: f64 = 380.0;
/// Orthogonal circles are capped at this radius (disk units) when a
/// pairing circle nearly passes through `o`.
const MAX_RADIUS: f64 = 1e6;

/// Cayley image of an interior point.
pub fn to_disk(x: f64, y: f64) -> (f64, f64) {
    // (x + i(y - 1)) / (x + i(y + 1))
    let den = x * x + (y + 1.0) * (y + 1.0);
    ((x * x + y * y - 1.0) / den, -2.0 * x / den)
}

/// Angle of the Cayley image of a real boundary point.
pub fn boundary_angle(x: f64) -> f64 {
    let den = x * x + 1.0;
    (-2.0 * x / den).atan2((x * x - 1.0) / den)
}

/// Center and radius in the disk of the circle orthogonal to the unit circle
/// through the images of `lo` and `hi`.
pub fn orthogonal_circle(lo: f64, hi: f64) -> ((f64, f64), f64) {
    let a = boundary_angle(lo);
    let b = boundary_angle(hi);
    let mut delta = b - a;
    while delta > std::f64::consts::PI {
        delta -= 2.0 * std::f64::consts::PI;
    }
    while delta <= -std::f64::consts::PI {
        delta += 2.0 * std::f64::consts::PI;
    }
    let half = delta.abs() / 2.0;
    let mid = a + delta / 2.0;
    let cos = half.cos().max(1.0 / MAX_RADIUS);
    let dist = 1.0 / cos;
    (
        (dist * mid.cos(), dist * mid.sin()),
        half.tan().min(MAX_RADIUS),
    )
}

fn canvas(p: (f64, f64)) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * p.0, SIZE / 2.0 - SCALE * p.1)
}

fn num(x: f64) -> String {
    format!("{x:.4}")
}

fn circle_path(center: (f64, f64), r: f64) -> String {
    let (cx, cy) = canvas(center);
    let r = SCALE * r;
    format!(
        "M {} {} A {} {} 0 1 0 {} {} A {} {} 0 1 0 {} {} Z",
        num(cx + r),
        num(cy),
        num(r),
        num(r),
        num(cx - r),
        num(cy),
        num(r),
        num(r),
        num(cx + r),
        num(cy)
    )
}

fn disk_image(c: &Circle) -> ((f64, f64), f64) {
    let (lo, hi) = (
        c.center_f64() - c.radius_f64(),
        c.center_f64() + c.radius_f64(),
    );
    orthogonal_circle(lo, hi)
}

/// Renders the pairing circles, `theta_n(o)` for `n = 1..=n_max`, the ray
/// `[o, eta]` and the nested disks of the theta prefixes.
pub fn render_svg(
    sd: &SchottkyData,
    fam: &WordFamily,
    n_max: usize,
    tol: f64,
) -> Result<String, LimitsError> {
    let eta = estimate_limit_point(fam, sd, n_max, tol)?;
    let thetas = (1..=n_max)
        .map(|n| theta(n, fam))
        .collect::<Result<Vec<_>, _>>()?;

    let clip = ClipPath::new().set("id", "disk").add(
        Path::new()
            .set("d", circle_path((0.0, 0.0), 1.0))
            .set("fill", "white"),
    );
    let mut doc = Document::new()
        .set("version", "1.1")
        .set("width", SIZE)
        .set("height", SIZE)
        .set("viewBox", (0, 0, SIZE as i64, SIZE as i64))
        .add(Title::new("Schottky group in the Poincare disk"))
        .add(Definitions::new().add(clip))
        .add(
            Path::new()
                .set("class", "boundary")
                .set("d", circle_path((0.0, 0.0), 1.0))
                .set("fill", "none")
                .set("stroke", "black")
                .set("stroke-width", 1.5),
        );

    let mut pairing = Group::new().set("clip-path", "url(#disk)");
    for (name, c) in CircleName::ALL.iter().zip(sd.circles()) {
        let (center, r) = disk_image(c);
        let (cx, cy) = canvas(center);
        pairing = pairing.add(
            svg::node::element::Circle::new()
                .set("class", "schottky")
                .set(
                    "id",
                    format!("circle-{}", name.to_string().replace('\'', "-prime")),
                )
                .set("cx", num(cx))
                .set("cy", num(cy))
                .set("r", num(SCALE * r))
                .set("fill", "none")
                .set("stroke", "steelblue")
                .set("stroke-width", 1.5),
        );
    }

    let mut nested = Group::new().set("clip-path", "url(#disk)");
    for (n, w) in thetas.iter().enumerate() {
        let (center, r) = disk_image(&nested_disk(w, sd)?);
        nested = nested.add(
            Path::new()
                .set("class", "nested")
                .set("id", format!("nested-{}", n + 1))
                .set("d", circle_path(center, r))
                .set("fill", "none")
                .set("stroke", "darkorange")
                .set("stroke-width", 0.75),
        );
    }

    let Point::Boundary(eta_x) = eta.point() else {
        unreachable!("limit points are finite boundary points")
    };
    let angle = boundary_angle(eta_x);
    let (ox, oy) = canvas((0.0, 0.0));
    let (ex, ey) = canvas((angle.cos(), angle.sin()));
    let ray = Line::new()
        .set("class", "ray")
        .set("x1", num(ox))
        .set("y1", num(oy))
        .set("x2", num(ex))
        .set("y2", num(ey))
        .set("stroke", "crimson")
        .set("stroke-width", 1);

    let mut orbit = Group::new();
    for (n, w) in thetas.iter().enumerate() {
        let Point::Interior { x, y } = word_to_element(w, sd).orbit_point().to_point() else {
            unreachable!("orbit points are interior")
        };
        let (px, py) = canvas(to_disk(x, y));
        orbit = orbit.add(
            svg::node::element::Circle::new()
                .set("class", "orbit")
                .set("id", format!("orbit-{}", n + 1))
                .set("cx", num(px))
                .set("cy", num(py))
                .set("r", 3)
                .set("fill", "black"),
        );
    }

    doc = doc.add(pairing).add(nested).add(ray).add(orbit);
    let mut out = doc.to_string();
    out.push('\n');
    Ok(out)
}

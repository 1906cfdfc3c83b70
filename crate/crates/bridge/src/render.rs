//! SVG rendering of the unfolded 2-sphere.
//!
//! The L1 2-sphere is an octahedron surface, a triangular antiprism around
//! the axis through the top and bottom facets: six middle facets form a
//! band, and the top and bottom facets cap it. The net drawn here unrolls
//! the band into a horizontal strip and attaches the top facet above its
//! first band triangle and the bottom facet below the second, so every
//! gluing edge in the drawing shares its two sphere vertices.
//!
//! Grid points are placed barycentrically inside each facet they lie on
//! (boundary points appear once per incident facet) and colored by their
//! extended membership: projected sets off the bottom facet, bottom sets
//! on it. Multi-membership renders as stacked color stripes; bottom points
//! with no membership — the exposed points — get a distinguished crossed
//! marker. The top facet is outlined with dashes.
//!
//! All pixel coordinates are rounded from exact rationals, so the output
//! is byte-identical across runs for identical inputs.

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use antipode_core::{
    build_bottom_closed, build_projected, enumerate_grid, Cover, GeometryError, GridDomain,
    GridPoint, IndexSet, Rational, Region,
};

/// One fill color per cover set.
pub const PALETTE: [&str; 7] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf",
];

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("rendering is only available for dimension 2, got {0}")]
    UnsupportedDimension(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    /// Total image width in pixels.
    pub size: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 800 }
    }
}

/// A facet of the octahedron: one sign per coordinate, `false` = negative.
#[derive(Debug, Clone, Copy)]
struct Facet {
    signs: [bool; 3],
    /// Pixel corners for the vertices `±e_0, ±e_1, ±e_2` of this facet,
    /// in coordinate order.
    corners: [(i64, i64); 3],
}

impl Facet {
    fn id(&self) -> String {
        self.signs
            .iter()
            .map(|&s| if s { 'p' } else { 'm' })
            .collect()
    }

    fn contains(&self, point: &GridPoint) -> bool {
        point
            .k()
            .iter()
            .zip(self.signs)
            .all(|(&k, s)| if s { k >= 0 } else { k <= 0 })
    }

    /// Barycentric placement of an on-facet grid point.
    fn place(&self, point: &GridPoint) -> (i64, i64) {
        let n = i64::from(point.resolution());
        let mut x = Rational::zero();
        let mut y = Rational::zero();
        for (i, &k) in point.k().iter().enumerate() {
            let weight = antipode_core::rational(k.abs(), n);
            x += &weight * antipode_core::rational(self.corners[i].0, 1);
            y += &weight * antipode_core::rational(self.corners[i].1, 1);
        }
        (round_px(&x), round_px(&y))
    }
}

fn round_px(value: &Rational) -> i64 {
    let shifted = value + antipode_core::rational(1, 2);
    shifted.floor().to_integer().try_into().unwrap_or(0)
}

/// Renders a cover at one resolution to a complete SVG document.
pub fn render_svg(
    cover: &Cover,
    resolution: u32,
    options: RenderOptions,
) -> Result<String, RenderError> {
    if cover.dim() != 2 {
        return Err(RenderError::UnsupportedDimension(cover.dim()));
    }
    let size = i64::from(options.size.max(200));

    // Strip geometry: the band is 3.5 triangle sides wide, flaps add one
    // triangle height above and below.
    let margin = size / 40;
    let side = (size - 2 * margin) * 2 / 7;
    let height = side * 866 / 1000;
    let x0 = margin;
    let band_top = margin + height;
    let band_bottom = margin + 2 * height;
    let total_height = 2 * margin + 3 * height;

    let t = |j: i64| (x0 + j * side, band_top);
    let b = |j: i64| (x0 + j * side + side / 2, band_bottom);
    let apex_top = (x0 + side / 2, margin);
    let apex_bottom = (x0 + side, margin + 3 * height);

    // Facet corner assignments follow the gluing edges of the net: each
    // shared edge uses the same two sphere vertices on both sides.
    // corners[i] is the pixel position of the facet's vertex on axis i.
    let facets = [
        // Top flap above band triangle 0, dashed outline below.
        Facet { signs: [true, true, true], corners: [t(1), t(0), apex_top] },
        // Band, left to right around the equator.
        Facet { signs: [true, true, false], corners: [t(1), t(0), b(0)] },
        Facet { signs: [true, false, false], corners: [t(1), b(1), b(0)] },
        Facet { signs: [true, false, true], corners: [t(1), b(1), t(2)] },
        Facet { signs: [false, false, true], corners: [b(2), b(1), t(2)] },
        Facet { signs: [false, true, true], corners: [b(2), t(3), t(2)] },
        Facet { signs: [false, true, false], corners: [b(2), t(3), b(3)] },
        // Bottom flap below band triangle 1.
        Facet { signs: [false, false, false], corners: [apex_bottom, b(1), b(0)] },
    ];

    // Memberships to display: projected sets off the bottom facet, bottom
    // sets on it; empty bottom memberships are the exposed points.
    let projected = build_projected(cover, resolution)?;
    let bottom = build_bottom_closed(cover, resolution)?;
    let membership = |point: &GridPoint| -> IndexSet {
        match point.region() {
            Region::Bottom => bottom.get(point).unwrap_or(IndexSet::EMPTY),
            _ => projected.get(point).unwrap_or(IndexSet::EMPTY),
        }
    };

    let sphere = enumerate_grid(2, resolution, GridDomain::Sphere)?;
    let marker = (side / (2 * i64::from(resolution))).max(3);

    let mut svg = String::new();
    writeln!(
        svg,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{total_height}\" viewBox=\"0 0 {size} {total_height}\">"
    )
    .unwrap();
    writeln!(svg, "  <rect width=\"{size}\" height=\"{total_height}\" fill=\"white\"/>").unwrap();

    for facet in &facets {
        let id = facet.id();
        let dash = if facet.signs == [true, true, true] {
            " stroke-dasharray=\"7 5\""
        } else {
            ""
        };
        writeln!(svg, "  <g class=\"facet\" id=\"facet-{id}\">").unwrap();
        writeln!(svg, "    <title>facet {id}</title>").unwrap();
        let pts = facet
            .corners
            .iter()
            .map(|&(x, y)| format!("{x},{y}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(
            svg,
            "    <polygon points=\"{pts}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"2\"{dash}/>"
        )
        .unwrap();

        for point in sphere.iter().filter(|p| facet.contains(p)) {
            let (x, y) = facet.place(point);
            let sets = membership(point);
            if sets.is_empty() && point.region() == Region::Bottom {
                draw_exposed(&mut svg, x, y, marker);
            } else {
                draw_marker(&mut svg, x, y, marker, sets);
            }
        }
        writeln!(svg, "  </g>").unwrap();
    }

    draw_legend(&mut svg, cover.set_count(), size, margin, marker);
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

/// A membership marker: a circle for single membership, stacked horizontal
/// stripes for multi-membership, a hollow dot for none.
fn draw_marker(svg: &mut String, x: i64, y: i64, r: i64, sets: IndexSet) {
    let members: Vec<usize> = sets.iter().collect();
    match members.len() {
        0 => {
            writeln!(
                svg,
                "    <circle cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"white\" stroke=\"#999999\" stroke-width=\"1\"/>"
            )
            .unwrap();
        }
        1 => {
            let fill = PALETTE[members[0]];
            writeln!(
                svg,
                "    <circle cx=\"{x}\" cy=\"{y}\" r=\"{r}\" fill=\"{fill}\" stroke=\"#333333\" stroke-width=\"1\"/>"
            )
            .unwrap();
        }
        m => {
            // Stripe the marker square top to bottom in index order.
            let top = y - r;
            let width = 2 * r;
            for (j, &set) in members.iter().enumerate() {
                let y0 = top + (2 * r * j as i64) / m as i64;
                let y1 = top + (2 * r * (j as i64 + 1)) / m as i64;
                writeln!(
                    svg,
                    "    <rect x=\"{}\" y=\"{y0}\" width=\"{width}\" height=\"{}\" fill=\"{}\"/>",
                    x - r,
                    y1 - y0,
                    PALETTE[set]
                )
                .unwrap();
            }
            writeln!(
                svg,
                "    <rect x=\"{}\" y=\"{top}\" width=\"{width}\" height=\"{width}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>",
                x - r
            )
            .unwrap();
        }
    }
}

/// Exposed bottom points: a bold crossed ring.
fn draw_exposed(svg: &mut String, x: i64, y: i64, r: i64) {
    let r2 = r + 2;
    writeln!(
        svg,
        "    <circle class=\"exposed\" cx=\"{x}\" cy=\"{y}\" r=\"{r2}\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>"
    )
    .unwrap();
    writeln!(
        svg,
        "    <path d=\"M {} {} L {} {} M {} {} L {} {}\" stroke=\"black\" stroke-width=\"2\"/>",
        x - r2, y - r2, x + r2, y + r2, x - r2, y + r2, x + r2, y - r2
    )
    .unwrap();
}

fn draw_legend(svg: &mut String, sets: usize, size: i64, margin: i64, marker: i64) {
    let x = size - margin - 90;
    writeln!(svg, "  <g class=\"legend\">").unwrap();
    for i in 0..sets {
        let y = margin + (i as i64) * (2 * marker + 10);
        writeln!(
            svg,
            "    <circle cx=\"{x}\" cy=\"{y}\" r=\"{marker}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"1\"/>",
            PALETTE[i]
        )
        .unwrap();
        writeln!(
            svg,
            "    <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"14\">C{}</text>",
            x + marker + 6,
            y + 5,
            i + 1
        )
        .unwrap();
    }
    writeln!(svg, "  </g>").unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;
    use antipode_core::{rational, SimplexPoint};

    fn barycentric_cover() -> Cover {
        Cover::ratio(2, SimplexPoint::barycenter(2).unwrap()).unwrap()
    }

    #[test]
    fn svg_has_eight_facet_groups_and_is_deterministic() {
        let cover = barycentric_cover();
        let a = render_svg(&cover, 6, RenderOptions::default()).unwrap();
        let b = render_svg(&cover, 6, RenderOptions::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.matches("<g class=\"facet\"").count(), 8);
        // Top facet is the dashed one.
        assert_eq!(a.matches("stroke-dasharray").count(), 1);
    }

    #[test]
    fn exposed_point_gets_distinguished_marker() {
        // Barycenter target at N=3: the antipode of the barycenter is
        // exposed.
        let cover = barycentric_cover();
        let svg = render_svg(&cover, 3, RenderOptions::default()).unwrap();
        assert!(svg.contains("class=\"exposed\""));

        // Off-grid target: nothing exposed.
        let skew = Cover::ratio(
            2,
            SimplexPoint::new(vec![rational(1, 2), rational(1, 4), rational(1, 4)]).unwrap(),
        )
        .unwrap();
        let svg = render_svg(&skew, 3, RenderOptions::default()).unwrap();
        assert!(!svg.contains("class=\"exposed\""));
    }

    #[test]
    fn rendering_rejects_other_dimensions() {
        let cover = Cover::ratio(
            1,
            SimplexPoint::new(vec![rational(1, 2), rational(1, 2)]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            render_svg(&cover, 4, RenderOptions::default()),
            Err(RenderError::UnsupportedDimension(1))
        ));
    }
}

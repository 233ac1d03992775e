use std::fmt::Write;

use crate::basins::{BasinResult, DebutValue};
use crate::error::{Error, Result};
use crate::model::{Sign, SystemSpec};

pub const BASIN_COLOR_NEG: &str = "#2166ac";
pub const BASIN_COLOR_POS: &str = "#b2182b";
pub const COMPLEMENT_COLOR: &str = "#bdbdbd";

const WIDTH: f64 = 600.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

struct Dot {
    x: f64,
    y: f64,
    radius: f64,
    fill: &'static str,
}

fn positions(spec: &SystemSpec) -> Result<Vec<[f64; 2]>> {
    (0..spec.len())
        .map(|id| match spec.state(id).coords.as_deref() {
            Some([x, y, ..]) => Ok([*x, *y]),
            Some([x]) => Ok([*x, 0.0]),
            _ => Err(Error::MissingCoordinates(id)),
        })
        .collect()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render(title: &str, dots: &[Dot], legend: &[(&str, &str)]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for d in dots {
        x0 = x0.min(d.x);
        x1 = x1.max(d.x);
        y0 = y0.min(d.y);
        y1 = y1.max(d.y);
    }
    let span = |lo: f64, hi: f64| if hi > lo { hi - lo } else { 1.0 };
    let (sx, sy) = ((WIDTH - 2.0 * MARGIN) / span(x0, x1), (HEIGHT - 2.0 * MARGIN) / span(y0, y1));

    let mut out = String::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#).unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="14">{}</text>"#, escape(title)).unwrap();
    for d in dots {
        let px = MARGIN + (d.x - x0) * sx;
        let py = HEIGHT - MARGIN - (d.y - y0) * sy;
        writeln!(out, r#"<circle cx="{px:.3}" cy="{py:.3}" r="{:.3}" fill="{}"/>"#, d.radius, d.fill).unwrap();
    }
    for (i, (fill, text)) in legend.iter().enumerate() {
        let y = HEIGHT - 28.0 + 14.0 * i as f64 - 14.0 * (legend.len() as f64 - 1.0);
        writeln!(out, r#"<rect x="{:.3}" y="{:.3}" width="10" height="10" fill="{fill}"/>"#, WIDTH - 150.0, y - 9.0).unwrap();
        writeln!(out, r#"<text x="{:.3}" y="{y:.3}" font-family="sans-serif" font-size="11">{}</text>"#, WIDTH - 135.0, escape(text)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn radius(value: DebutValue, max: f64) -> f64 {
    let m = value.magnitude();
    if m.is_infinite() {
        6.5
    } else if m.is_zero() {
        2.5
    } else if m.value() <= max / 3.0 {
        3.5
    } else if m.value() <= 2.0 * max / 3.0 {
        4.5
    } else {
        5.5
    }
}

/// Scatter of a debut field: color by sign, radius by magnitude bucket
/// (zero, thirds of the largest finite magnitude, infinite).
pub fn debut_svg(spec: &SystemSpec, field: &[DebutValue], title: &str) -> Result<String> {
    let coords = positions(spec)?;
    let max = field.iter().map(|v| v.magnitude()).filter(|m| m.is_finite()).map(|m| m.value()).fold(0.0, f64::max);
    let dots: Vec<Dot> = coords
        .iter()
        .zip(field)
        .map(|(p, &v)| Dot {
            x: p[0],
            y: p[1],
            radius: radius(v, max),
            fill: match v.sign() {
                Sign::Neg => BASIN_COLOR_NEG,
                Sign::Pos => BASIN_COLOR_POS,
            },
        })
        .collect();
    Ok(render(title, &dots, &[(BASIN_COLOR_NEG, "negative debut"), (BASIN_COLOR_POS, "positive debut")]))
}

/// Scatter of one basin: members in the color of the index sign, the rest gray.
pub fn basin_svg(spec: &SystemSpec, basin: &BasinResult, title: &str) -> Result<String> {
    let coords = positions(spec)?;
    let color = match basin.index.sign {
        Sign::Neg => BASIN_COLOR_NEG,
        Sign::Pos => BASIN_COLOR_POS,
    };
    let dots: Vec<Dot> = coords
        .iter()
        .enumerate()
        .map(|(id, p)| Dot { x: p[0], y: p[1], radius: 3.5, fill: if basin.members.contains(id) { color } else { COMPLEMENT_COLOR } })
        .collect();
    Ok(render(title, &dots, &[(color, "basin"), (COMPLEMENT_COLOR, "complement")]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basins::{basin_pos, debut_field};
    use crate::model::{Cost, CostModel, Metric, State, StateSet};
    use crate::reachability::BudgetMode;

    fn two_tracks() -> SystemSpec {
        let xs = [0.0, 0.0, 0.0, 1.0, 1.0, 2.0];
        let states = xs.iter().map(|&x| State::at(vec![x, 0.0])).collect();
        SystemSpec::new(states, vec![Some(1), Some(2), None, Some(4), Some(5), None], CostModel::Coordinates(Metric::Euclidean)).unwrap()
    }

    fn circle_fills(svg: &str) -> Vec<&str> {
        svg.lines().filter(|l| l.starts_with("<circle")).map(|l| l.split("fill=\"").nth(1).unwrap().trim_end_matches("\"/>")).collect()
    }

    #[test]
    fn debut_scatter() {
        let spec = two_tracks();
        let field = debut_field(&spec, &StateSet::from_ids(6, [2]), BudgetMode::MaxPerStep);
        let svg = debut_svg(&spec, &field, "debut").unwrap();
        let fills = circle_fills(&svg);
        assert_eq!(fills.len(), 6);
        let mut distinct = fills.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct, vec![BASIN_COLOR_NEG, BASIN_COLOR_POS]);
        assert_eq!(svg, debut_svg(&spec, &field, "debut").unwrap());
    }

    #[test]
    fn empty_basin_is_all_complement() {
        let spec = two_tracks();
        let basin = basin_pos(&spec, &StateSet::empty(6), Cost::of(0.1), BudgetMode::MaxPerStep);
        let svg = basin_svg(&spec, &basin, "empty").unwrap();
        assert!(circle_fills(&svg).iter().all(|&f| f == COMPLEMENT_COLOR));
    }

    #[test]
    fn needs_coordinates() {
        let spec = SystemSpec::with_matrix(vec![None], vec![vec![Cost::ZERO]]).unwrap();
        let field = debut_field(&spec, &StateSet::from_ids(1, [0]), BudgetMode::MaxPerStep);
        assert!(matches!(debut_svg(&spec, &field, "x"), Err(Error::MissingCoordinates(0))));
    }
}

//! Text renderings of the concave polygon attached to a cocharacter.

use std::fmt::Write;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cochar::{Cocharacter, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "svg" => Ok(Format::Svg),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?}, expected ascii or svg"))),
        }
    }
}

const MARKS: [char; 4] = ['*', 'o', '+', 'x'];
const COLORS: [&str; 4] = ["#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad"];

/// Render one or more polygons of the same rank on shared axes.
pub fn render(polys: &[Cocharacter], format: Format) -> Result<String> {
    let n = match polys.first() {
        Some(x) => x.len(),
        None => return Err(Error::InvalidArgument("nothing to render".into())),
    };
    if let Some(x) = polys.iter().find(|x| x.len() != n) {
        return Err(Error::LengthMismatch { left: n, right: x.len() });
    }
    if polys.len() > MARKS.len() {
        return Err(Error::InvalidArgument(format!("at most {} polygons per overlay", MARKS.len())));
    }
    Ok(match format {
        Format::Ascii => ascii(polys),
        Format::Svg => svg(polys),
    })
}

fn vertex_list(x: &Cocharacter) -> String {
    x.polygon().vertices.iter().map(|(a, b)| format!("({a},{b})")).collect::<Vec<_>>().join(" ")
}

/// Largest vertical distance between the first two polygons, with the first abscissa attaining it.
fn widest_gap(polys: &[Cocharacter]) -> Option<(usize, Q)> {
    let [a, b, ..] = polys else { return None };
    let (pa, pb) = (a.prefix_sums(), b.prefix_sums());
    let mut best = (0, Q::zero());
    for (i, (x, y)) in pa.iter().zip(&pb).enumerate() {
        let d = (x - y).abs();
        if d > best.1 {
            best = (i, d);
        }
    }
    Some(best)
}

fn ascii(polys: &[Cocharacter]) -> String {
    let n = polys[0].len();
    let sums: Vec<Vec<Q>> = polys.iter().map(|x| x.prefix_sums()).collect();
    let mut out = String::new();
    for (k, x) in polys.iter().enumerate() {
        let _ = writeln!(out, "{} {x}  vertices {}", MARKS[k], vertex_list(x));
    }
    // One text row per step of 1/den between the extreme heights.
    let den = sums.iter().flatten().fold(1i64, |d, y| d.lcm(y.denom()));
    let scaled = |y: &Q| (y * Q::from(den)).to_integer();
    let top = sums.iter().flatten().map(scaled).max().unwrap_or(0);
    let bottom = sums.iter().flatten().map(scaled).min().unwrap_or(0);
    let label_w = [top, bottom].iter().map(|v| Q::new(*v, den).to_string().len()).max().unwrap_or(1);
    const STEP: usize = 4;
    let _ = writeln!(out);
    for row in (bottom..=top).rev() {
        let mut line = vec![' '; n * STEP + 1];
        for (k, s) in sums.iter().enumerate() {
            for (x, y) in s.iter().enumerate() {
                if scaled(y) == row {
                    let cell = &mut line[x * STEP];
                    *cell = if *cell == ' ' { MARKS[k] } else { '#' };
                }
            }
        }
        let label = if row % den == 0 || row == top || row == bottom { Q::new(row, den).to_string() } else { String::new() };
        let _ = writeln!(out, "{label:>label_w$} |{}", line.iter().collect::<String>().trim_end());
    }
    let _ = writeln!(out, "{:>label_w$} +{}", "", "-".repeat(n * STEP + 1));
    let axis: String = (0..=n).map(|x| format!("{x:<STEP$}")).collect();
    let _ = writeln!(out, "{:>label_w$}  {}", "", axis.trim_end());
    if let Some((x, d)) = widest_gap(polys) {
        let _ = writeln!(out, "\nlargest vertical gap {d} at x={x}");
    }
    out
}

fn fmt2(v: f64) -> String {
    // Avoid "-0.00" so equal inputs give equal bytes regardless of sign of zero.
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn svg(polys: &[Cocharacter]) -> String {
    const W: f64 = 480.0;
    const H: f64 = 320.0;
    const PAD: f64 = 48.0;
    let n = polys[0].len();
    let sums: Vec<Vec<Q>> = polys.iter().map(|x| x.prefix_sums()).collect();
    let to_f = |y: &Q| y.to_f64().unwrap_or(0.0);
    let ymax = sums.iter().flatten().map(to_f).fold(0.0f64, f64::max);
    let ymin = sums.iter().flatten().map(to_f).fold(0.0f64, f64::min);
    let span = if ymax > ymin { ymax - ymin } else { 1.0 };
    let sx = |x: f64| PAD + x * (W - 2.0 * PAD) / n.max(1) as f64;
    let sy = |y: f64| H - PAD - (y - ymin) * (H - 2.0 * PAD) / span;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(out, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999999"/>"##,
        fmt2(sx(0.0)),
        fmt2(sy(0.0)),
        fmt2(sx(n as f64)),
        fmt2(sy(0.0))
    );
    for (k, x) in polys.iter().enumerate() {
        let pts: Vec<String> =
            x.polygon().vertices.iter().map(|(a, b)| format!("{},{}", fmt2(sx(*a as f64)), fmt2(sy(to_f(b))))).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            pts.join(" "),
            COLORS[k]
        );
        for (a, b) in &x.polygon().vertices {
            let (cx, cy) = (fmt2(sx(*a as f64)), fmt2(sy(to_f(b))));
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{}"/>"#, COLORS[k]);
            let dy = if k % 2 == 0 { -8.0 } else { 16.0 };
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" fill="{}">({a},{b})</text>"#,
                fmt2(sx(*a as f64) + 4.0),
                fmt2(sy(to_f(b)) + dy),
                COLORS[k]
            );
        }
        let _ = writeln!(out, r#"<text x="8" y="{}" fill="{}">{x}</text>"#, 16 + 14 * k, COLORS[k]);
    }
    if let Some((x, d)) = widest_gap(polys) {
        if !d.is_zero() {
            let (y0, y1) = (to_f(&sums[0][x]), to_f(&sums[1][x]));
            let _ = writeln!(
                out,
                r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#555555" stroke-dasharray="4 3"/>"##,
                fmt2(sx(x as f64)),
                fmt2(sy(y0)),
                fmt2(sy(y1))
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">gap {d} at x={x}</text>"#,
                fmt2(sx(x as f64) + 6.0),
                fmt2((sy(y0) + sy(y1)) / 2.0)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Cocharacter {
        Cocharacter::from_ints(v)
    }

    #[test]
    fn ascii_labels_vertices() {
        let s = render(&[ints(&[1, 0])], Format::Ascii).unwrap();
        assert!(s.contains("vertices (0,0) (1,1) (2,1)"), "{s}");
        let flat = render(&[ints(&[0, 0, 0])], Format::Ascii).unwrap();
        assert!(flat.contains("vertices (0,0) (3,0)"), "{flat}");
    }

    #[test]
    fn overlay_reports_gap() {
        let polys = [ints(&[2, -1, -1]), ints(&[0, 0, 0])];
        let s = render(&polys, Format::Ascii).unwrap();
        assert!(s.contains("largest vertical gap 2 at x=1"), "{s}");
        let svg = render(&polys, Format::Svg).unwrap();
        assert!(svg.contains("gap 2 at x=1"));
        assert!(svg.contains("(1,2)"));
    }

    #[test]
    fn svg_is_deterministic() {
        let x = Cocharacter::new(vec![Q::new(2, 3), Q::new(2, 3), Q::new(-1, 3), Q::new(-1, 1)]);
        let a = render(std::slice::from_ref(&x), Format::Svg).unwrap();
        let b = render(&[x], Format::Svg).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
    }

    #[test]
    fn rejects_mixed_ranks() {
        assert!(render(&[ints(&[1, 0]), ints(&[1, 0, 0])], Format::Svg).is_err());
        assert!("png".parse::<Format>().is_err());
    }
}

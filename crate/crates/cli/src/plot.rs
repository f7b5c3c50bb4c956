//! Minimal SVG charts: RSC curves and per-ensemble accuracy bars.

use std::fmt::Write;

use cfa_core::fusion::Space;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, x1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN);
    let _ = writeln!(
        out,
        r#"<path class="axis" d="M{x0},{MARGIN} L{x0},{y0} L{x1},{y0}" fill="none" stroke="black"/>"#
    );
}

/// Plot coordinates for a value in `lo..=hi` along the y axis.
fn y_at(v: f64, lo: f64, hi: f64) -> f64 {
    let span = HEIGHT - 2.0 * MARGIN;
    HEIGHT - MARGIN - (v - lo) / (hi - lo) * span
}

/// One polyline per system, x = rank (1..n), y = score.
pub fn rsc_svg(series: &[(String, Vec<(usize, f64)>)]) -> String {
    let n = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.0))
        .max()
        .unwrap_or(1);
    let (mut lo, mut hi) = series
        .iter()
        .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() || hi - lo < 1e-12 {
        lo -= 0.5;
        hi += 0.5;
    }
    let x_at = |rank: usize| {
        let span = WIDTH - 2.0 * MARGIN;
        if n == 1 {
            MARGIN + span / 2.0
        } else {
            MARGIN + (rank - 1) as f64 / (n - 1) as f64 * span
        }
    };

    let mut out = String::new();
    header(&mut out, "Rank-score characteristic");
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" text-anchor="middle">1</text><text x="{}" y="{}" text-anchor="middle">{n}</text>"#,
        HEIGHT - MARGIN + 16.0,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 16.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{lo:.3}</text><text x="{}" y="{}" text-anchor="end">{hi:.3}</text>"#,
        MARGIN - 4.0,
        HEIGHT - MARGIN,
        MARGIN - 4.0,
        MARGIN + 4.0
    );
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = pts
            .iter()
            .map(|&(r, s)| format!("{:.2},{:.2}", x_at(r), y_at(s, lo, hi)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline data-system="{}" points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            escape(name),
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 6.0,
            MARGIN + 14.0 * k as f64,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One bar per ensemble, score combinations first, with a dotted line at
/// the best individual accuracy.
pub fn performance_svg(rows: &[(String, Space, f64)], best_individual: Option<f64>) -> String {
    let mut ordered: Vec<&(String, Space, f64)> = rows.iter().filter(|r| r.1 == Space::Score).collect();
    ordered.extend(rows.iter().filter(|r| r.1 == Space::Rank));

    let values = ordered.iter().map(|r| r.2).chain(best_individual);
    let lo = values.clone().fold(f64::INFINITY, f64::min).min(0.0);
    let hi = values.fold(f64::NEG_INFINITY, f64::max).max(1.0);

    let mut out = String::new();
    header(&mut out, "Combination performance");
    let span = WIDTH - 2.0 * MARGIN;
    let slot = span / ordered.len().max(1) as f64;
    let base = y_at(lo.max(0.0), lo, hi);
    for (i, (label, space, acc)) in ordered.iter().enumerate() {
        let x = MARGIN + i as f64 * slot + slot * 0.1;
        let y = y_at(*acc, lo, hi);
        let color = if *space == Space::Score { PALETTE[0] } else { PALETTE[3] };
        let _ = writeln!(
            out,
            r#"<rect class="bar" x="{x:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}"><title>{} {acc}</title></rect>"#,
            y.min(base),
            slot * 0.8,
            (base - y).abs(),
            escape(label)
        );
    }
    if let Some(best) = best_individual {
        let y = y_at(best, lo, hi);
        let _ = writeln!(
            out,
            r#"<line class="best" x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-dasharray="2,3"/>"#,
            WIDTH - MARGIN
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" fill="{}">SC</text><text x="{}" y="{}" fill="{}">RC</text>"#,
        WIDTH - MARGIN + 6.0,
        MARGIN + 10.0,
        PALETTE[0],
        WIDTH - MARGIN + 6.0,
        MARGIN + 24.0,
        PALETTE[3]
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polylines(svg: &str) -> Vec<Vec<(f64, f64)>> {
        svg.lines()
            .filter(|l| l.starts_with("<polyline"))
            .map(|l| {
                let start = l.find("points=\"").unwrap() + 8;
                let end = start + l[start..].find('"').unwrap();
                l[start..end]
                    .split(' ')
                    .map(|p| {
                        let (x, y) = p.split_once(',').unwrap();
                        (x.parse().unwrap(), y.parse().unwrap())
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn two_systems_two_polylines() {
        let series = vec![
            ("A".to_string(), vec![(1, 0.9), (2, 0.5), (3, 0.2)]),
            ("B".to_string(), vec![(1, 0.7), (2, 0.7), (3, 0.1)]),
        ];
        let svg = rsc_svg(&series);
        let lines = polylines(&svg);
        assert_eq!(lines.len(), 2);
        assert!(lines.iter().all(|l| l.len() == 3));
        assert_eq!(lines[0][0].0, MARGIN);
        assert_eq!(lines[0][2].0, WIDTH - MARGIN);
    }

    #[test]
    fn constant_system_is_flat() {
        let svg = rsc_svg(&[("C".to_string(), vec![(1, 0.4), (2, 0.4), (3, 0.4), (4, 0.4)])]);
        let line = &polylines(&svg)[0];
        assert!(line.iter().all(|p| p.1 == line[0].1));
    }

    #[test]
    fn bars_and_reference_line() {
        let rows: Vec<(String, Space, f64)> = (0..52)
            .map(|i| {
                let space = if i % 2 == 0 { Space::Score } else { Space::Rank };
                (format!("E{i}"), space, 0.5 + i as f64 / 200.0)
            })
            .collect();
        let svg = performance_svg(&rows, Some(0.7));
        assert_eq!(svg.matches(r#"class="bar""#).count(), 52);
        assert_eq!(svg.matches(r#"class="best""#).count(), 1);
        assert!(svg.contains("stroke-dasharray"));
        // score combinations come first
        let first = svg.find("<title>E0 ").unwrap();
        let rank_first = svg.find("<title>E1 ").unwrap();
        let score_last = svg.find("<title>E50 ").unwrap();
        assert!(first < score_last && score_last < rank_first);
    }
}

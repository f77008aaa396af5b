//! SVG pictures of maps, cobwebs and pull-back boxes.
//!
//! Coordinates are exact rationals until the last moment; each is printed with
//! a fixed number of decimals so that output is byte-stable.

use std::fmt::Write as _;

use crate::asymptotics::PullBack;
use crate::numeric::{decimal, int, Rat};
use crate::plmap::{BudgetExceeded, PLMap};

const MARGIN: i64 = 20;
const SIDE: i64 = 460;
const CANVAS: i64 = 500;

#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub iterate: usize,
    pub precision: usize,
    pub diagonal: bool,
    pub critical_lines: bool,
    pub cobweb: Option<(Rat, usize)>,
    pub pullback: Option<PullBack>,
    pub budget: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            iterate: 1,
            precision: 9,
            diagonal: true,
            critical_lines: true,
            cobweb: None,
            pullback: None,
            budget: crate::plmap::DEFAULT_LAP_BUDGET,
        }
    }
}

struct Canvas {
    precision: usize,
    body: String,
}

impl Canvas {
    fn px(&self, x: &Rat) -> String {
        decimal(&(int(MARGIN) + int(SIDE) * x), self.precision)
    }

    fn py(&self, y: &Rat) -> String {
        decimal(&(int(MARGIN) + int(SIDE) * (int(1) - y)), self.precision)
    }

    fn pair(&self, x: &Rat, y: &Rat) -> String {
        format!("{},{}", self.px(x), self.py(y))
    }

    fn polyline(&mut self, class: &str, pts: &[(Rat, Rat)]) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| self.pair(x, y)).collect();
        let _ = writeln!(self.body, r#"<polyline class="{class}" points="{}"/>"#, coords.join(" "));
    }

    fn line(&mut self, class: &str, a: (&Rat, &Rat), b: (&Rat, &Rat)) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            self.px(a.0),
            self.py(a.1),
            self.px(b.0),
            self.py(b.1)
        );
    }

    fn rect(&mut self, class: &str, x: (&Rat, &Rat), y: (&Rat, &Rat)) {
        let w = decimal(&(int(SIDE) * (x.1 - x.0)), self.precision);
        let h = decimal(&(int(SIDE) * (y.1 - y.0)), self.precision);
        let _ = writeln!(
            self.body,
            r#"<rect class="{class}" x="{}" y="{}" width="{w}" height="{h}"/>"#,
            self.px(x.0),
            self.py(y.1)
        );
    }
}

/// Cobweb path from `seed`: vertical to the graph, horizontal to the diagonal.
pub fn cobweb_points(f: &PLMap, seed: &Rat, steps: usize) -> Vec<(Rat, Rat)> {
    let mut pts = vec![(seed.clone(), int(0))];
    let mut x = seed.clone();
    for _ in 0..steps {
        let y = f.at(&x);
        pts.push((x.clone(), y.clone()));
        pts.push((y.clone(), y.clone()));
        x = y;
    }
    pts
}

pub fn render(f: &PLMap, opts: &RenderOptions) -> Result<String, BudgetExceeded> {
    let g = f.power(opts.iterate.max(1), opts.budget)?;
    let mut c = Canvas { precision: opts.precision, body: String::new() };
    let (zero, one) = (int(0), int(1));

    c.rect("frame", (&zero, &one), (&zero, &one));
    if opts.diagonal {
        c.line("diagonal", (&zero, &zero), (&one, &one));
    }
    if opts.critical_lines {
        for x in g.turning_points() {
            c.line("critical", (&x, &zero), (&x, &one));
        }
    }
    if let Some(pb) = &opts.pullback {
        for (k, w) in pb.intervals.windows(2).enumerate() {
            let class = if k < pb.monotone_up_to { "pullback" } else { "pullback folded" };
            c.rect(class, (w[1].lo(), w[1].hi()), (w[0].lo(), w[0].hi()));
        }
    }
    c.polyline("graph", g.points());
    if let Some((seed, steps)) = &opts.cobweb {
        let pts = cobweb_points(&g, seed, *steps);
        c.polyline("cobweb", &pts);
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(out, "<!-- iterate {}; coordinates rounded to {} decimals -->", opts.iterate.max(1), opts.precision);
    out.push_str(
        "<style>\
.frame{fill:none;stroke:#000;stroke-width:1}\
.diagonal{stroke:#888;stroke-width:0.5}\
.critical{stroke:#c33;stroke-width:0.5;stroke-dasharray:3 3}\
.pullback{fill:none;stroke:#36c;stroke-width:0.8;stroke-dasharray:5 3}\
.folded{stroke:#c63}\
.graph{fill:none;stroke:#000;stroke-width:1.2}\
.cobweb{fill:none;stroke:#393;stroke-width:0.7}\
</style>\n",
    );
    out.push_str(&c.body);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn minc_graph_coordinates() {
        let svg = render(&gallery::minc(), &RenderOptions { precision: 3, ..Default::default() }).unwrap();
        let graph = svg.lines().find(|l| l.contains(r#"class="graph""#)).unwrap();
        // (5/12, 1/3) lands at (211.667, 326.667)
        assert!(graph.contains("211.667,326.667"), "{graph}");
        assert_eq!(svg, render(&gallery::minc(), &RenderOptions { precision: 3, ..Default::default() }).unwrap());
    }
}

//! Minimal SVG writer. Numbers are printed with three decimals so the same
//! input always gives the same bytes.

use std::fmt::Write;

use cloudskel::geometry::Point2;
use cloudskel::hopes::{EdgeKind, SkeletonGraph};
use cloudskel::persistence::{GapDecomposition, PersistenceDiagram};

const CANVAS: f64 = 600.0;
const MARGIN: f64 = 40.0;

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

pub fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Doc {
    body: String,
    width: f64,
    height: f64,
}

impl Doc {
    fn new(width: f64, height: f64) -> Self {
        Self { body: String::new(), width, height }
    }

    fn finish(self, title: &str, metadata: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
             <title>{title}</title>\n<metadata>{meta}</metadata>\n\
             <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{body}</svg>\n",
            w = num(self.width),
            h = num(self.height),
            title = escape(title),
            meta = escape(metadata),
            body = self.body,
        )
    }

    fn line(&mut self, a: Point2, b: Point2) {
        let _ = writeln!(
            self.body,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            num(a[0]),
            num(a[1]),
            num(b[0]),
            num(b[1])
        );
    }

    fn circle(&mut self, c: Point2, r: f64) {
        let _ = writeln!(self.body, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", num(c[0]), num(c[1]), num(r));
    }

    fn polygon(&mut self, pts: &[Point2], style: &str) {
        let coords: Vec<String> = pts.iter().map(|p| format!("{},{}", num(p[0]), num(p[1]))).collect();
        let _ = writeln!(self.body, "<polygon points=\"{}\" {style}/>", coords.join(" "));
    }

    fn text(&mut self, at: Point2, anchor: &str, content: &str) {
        let _ = writeln!(
            self.body,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" font-size=\"12\">{}</text>",
            num(at[0]),
            num(at[1]),
            escape(content)
        );
    }

    fn open(&mut self, attrs: &str) {
        let _ = writeln!(self.body, "<g {attrs}>");
    }

    fn close(&mut self) {
        self.body.push_str("</g>\n");
    }
}

/// Maps data coordinates into the canvas with equal scales on both axes and
/// the y axis pointing up.
struct Frame {
    lo: Point2,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point2>) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if lo[0] > hi[0] {
            (lo, hi) = ([0.0; 2], [1.0; 2]);
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let scale = (CANVAS - 2.0 * MARGIN) / span;
        Self { lo, scale, height: (hi[1] - lo[1]) * scale + 2.0 * MARGIN }
    }

    fn map(&self, p: Point2) -> Point2 {
        [MARGIN + (p[0] - self.lo[0]) * self.scale, self.height - MARGIN - (p[1] - self.lo[1]) * self.scale]
    }
}

/// Cloud in grey, tree edges in black, critical edges in red.
pub fn skeleton(cloud: &[Point2], g: &SkeletonGraph, title: &str, metadata: &str) -> String {
    let positions = g.positions();
    let frame = Frame::fit(cloud.iter().copied().chain(g.vertices.iter().filter_map(|v| v.position())));
    let mut doc = Doc::new(CANVAS, frame.height);
    doc.open("id=\"cloud\" fill=\"#9a9a9a\"");
    for &p in cloud {
        doc.circle(frame.map(p), 1.5);
    }
    doc.close();
    for (id, kind, colour) in [("tree", EdgeKind::Tree, "black"), ("critical", EdgeKind::Critical, "#d62728")] {
        doc.open(&format!("id=\"{id}\" stroke=\"{colour}\" stroke-width=\"2\""));
        for e in g.edges.iter().filter(|e| e.kind == kind) {
            if let (Some(&a), Some(&b)) = (positions.get(&e.u), positions.get(&e.v)) {
                doc.line(frame.map(a), frame.map(b));
            }
        }
        doc.close();
    }
    doc.open("id=\"vertices\" fill=\"black\"");
    for p in g.vertices.iter().filter_map(|v| v.position()) {
        doc.circle(frame.map(p), 2.5);
    }
    doc.close();
    doc.finish(title, metadata)
}

/// Dots above the diagonal, essential ones on the top border, with the
/// widest diagonal gap and the widest vertical gap above it shaded.
pub fn diagram(pd: &PersistenceDiagram, gaps: &GapDecomposition, title: &str, metadata: &str) -> String {
    let finite = pd.finite_dots().map(|d| d.death).chain(pd.dots().iter().map(|d| d.birth));
    let top = finite.fold(0.0, f64::max).max(1e-9) * 1.1;
    let side = CANVAS - 2.0 * MARGIN;
    let map = |x: f64, y: f64| [MARGIN + x / top * side, MARGIN + (top - y.min(top)) / top * side];
    let mut doc = Doc::new(CANVAS, CANVAS);

    if let Some(g) = gaps.gaps().first() {
        let upper = g.upper.min(top);
        doc.polygon(
            &[map(0.0, g.lower), map(top - g.lower, top), map(top - upper, top), map(0.0, upper)],
            "id=\"diagonal-gap\" fill=\"#1f77b4\" fill-opacity=\"0.15\"",
        );
    }
    if let Some(g) = gaps.vertical(1).and_then(|v| v.gaps().first().copied()) {
        let right = g.upper.min(top);
        doc.polygon(
            &[map(g.lower, g.lower), map(right, right), map(right, top), map(g.lower, top)],
            "id=\"vertical-gap\" fill=\"#2ca02c\" fill-opacity=\"0.15\"",
        );
    }

    doc.open("id=\"axes\" stroke=\"black\"");
    doc.line(map(0.0, 0.0), map(top, 0.0));
    doc.line(map(0.0, 0.0), map(0.0, top));
    doc.line(map(0.0, 0.0), map(top, top));
    doc.close();
    doc.text([MARGIN + side / 2.0, CANVAS - 8.0], "middle", "birth");
    doc.text([MARGIN - 6.0, MARGIN + side / 2.0], "end", "death");
    doc.text(map(0.0, 0.0), "end", "0");
    doc.text(map(top, 0.0), "middle", &num(top));

    doc.open("id=\"dots\" fill=\"#d62728\"");
    for d in pd.dots() {
        let at = map(d.birth, d.death);
        doc.circle(at, if d.is_essential() { 5.0 } else { 3.5 });
        if d.multiplicity > 1 {
            doc.text([at[0] + 6.0, at[1] - 6.0], "start", &format!("x{}", d.multiplicity));
        }
    }
    doc.close();
    doc.finish(title, metadata)
}
